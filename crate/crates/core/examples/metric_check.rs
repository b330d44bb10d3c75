// Parses graphs from the JSON file format and reports on the triangle
// inequality and on short non-metric cycles.

use eppa::completion::{find_induced_nonmetric_cycles, has_nonmetric_cycle_up_to, DEFAULT_CYCLE_BUDGET};
use eppa::EdgeLabelledGraph;

fn run() -> eppa::Result<()> {
    let metric = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1/2"], ["y", "z", "1"], ["x", "z", "3/2"]]}"#,
    )?;
    assert!(metric.is_metric_space());
    println!("degenerate triangle 1/2, 1, 3/2 is metric");

    let broken = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "1"], ["x", "z", "3"]]}"#,
    )?;
    let violation = broken.metric_violation().expect("1 + 1 < 3");
    println!("triangle 1, 1, 3: {violation}");
    for c in find_induced_nonmetric_cycles(&broken, 3)? {
        println!("non-metric cycle {:?}, long edge {:?}, deficit {}", c.vertices, c.long_edge, c.deficit);
    }

    // a square whose fourth side is longer than the other three together
    let square = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["a", "b", "c", "d"],
            "edges": [["a", "b", "1"], ["b", "c", "1"], ["c", "d", "1"], ["a", "d", "4"]]}"#,
    )?;
    assert!(has_nonmetric_cycle_up_to(&square, 3, DEFAULT_CYCLE_BUDGET)?.is_none());
    let c = has_nonmetric_cycle_up_to(&square, 4, DEFAULT_CYCLE_BUDGET)?.expect("the square itself");
    println!("square: no short cycle on 3 vertices, one on {} vertices", c.len());

    match EdgeLabelledGraph::from_json_str(r#"{"vertices": ["a", "b"], "edges": [["a", "b", "3/0"]]}"#) {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!("zero denominators are invalid"),
    }
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
