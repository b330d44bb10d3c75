// Shortest path completion: any connected labelled graph becomes a metric
// space, and every automorphism survives.

use eppa::completion::{find_induced_nonmetric_cycles, shortest_path_completion};
use eppa::{check_map, EdgeLabelledGraph, MapMode, PartialMap};

fn run() -> eppa::Result<()> {
    let path = EdgeLabelledGraph::from_json_str(r#"{"vertices": ["a", "b", "c"], "edges": [["a", "b", "1"], ["b", "c", "1"]]}"#)?;
    let done = shortest_path_completion(&path)?;
    println!("path 1, 1 completes to {}", done.to_json_string());

    // the long edge of a non-metric cycle is shortened, every other edge kept
    let bad = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "1"], ["x", "z", "3"]]}"#,
    )?;
    assert_eq!(find_induced_nonmetric_cycles(&bad, 3)?.len(), 1);
    let fixed = shortest_path_completion(&bad)?;
    assert!(fixed.is_metric_space());
    println!("x-z was 3, now {}", fixed.distance(&"x".into(), &"z".into()).expect("complete"));

    let swap = PartialMap::new([("x", "z"), ("z", "x"), ("y", "y")])?;
    assert!(check_map(&swap, &bad, &bad, MapMode::Automorphism)?);
    assert!(check_map(&swap, &fixed, &fixed, MapMode::Automorphism)?);
    println!("the reflection through y is an isometry of both");

    let split = EdgeLabelledGraph::from_json_str(r#"{"vertices": ["a", "b", "c"], "edges": [["a", "b", "1"]]}"#)?;
    println!("disconnected input: {}", shortest_path_completion(&split).unwrap_err());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
