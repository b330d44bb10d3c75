// Extends every partial isometry of the embedded copy of a metric triangle
// to an isometry of the whole witness.

use eppa::graph::enumerate_partial_automorphisms;
use eppa::pipeline::{build_witness, extend_isometry, Config};
use eppa::{check_map, EdgeLabelledGraph, MapMode, PartialMap};

fn run() -> eppa::Result<()> {
    let a = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "1"], ["x", "z", "2"]]}"#,
    )?;
    let w = build_witness(&a, Config::default())?;
    let e = |v: &str| w.final_embedding.get(&v.into()).expect("embedded").clone();
    println!("witness has {} points; x, y, z sit at {}, {}, {}", w.final_graph.vertex_count(), e("x"), e("y"), e("z"));

    let reflect = PartialMap::new([(e("x"), e("z")), (e("z"), e("x"))])?;
    let theta = extend_isometry(&w, &reflect)?;
    let moved = theta.pairs().filter(|(p, q)| p != q).count();
    println!("reflection extends to an isometry moving {moved} points");

    let copy = w.final_graph.induced_subgraph(&w.copy())?;
    let mut n = 0;
    for phi in enumerate_partial_automorphisms(&copy, copy.vertex_count()) {
        let theta = extend_isometry(&w, &phi)?;
        assert!(theta.extends(&phi) && check_map(&theta, &w.final_graph, &w.final_graph, MapMode::Automorphism)?);
        n += 1;
    }
    println!("all {n} partial isometries of the copy extend");

    let stretch = PartialMap::new([(e("x"), e("x")), (e("y"), e("z"))])?;
    println!("x fixed, y to z: {}", extend_isometry(&w, &stretch).unwrap_err());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
