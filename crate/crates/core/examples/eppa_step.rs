// The set representation step on its own: every vertex becomes a k-subset of
// a universe, distances become intersection sizes, and a partial
// automorphism extends to a permutation of the universe.

use eppa::graph::enumerate_partial_automorphisms;
use eppa::set_repr::{build_eppa_graph, extend_by_permutation, subset_automorphism, DEFAULT_VERTEX_CAP};
use eppa::{check_map, EdgeLabelledGraph, MapMode, PartialMap};

fn run() -> eppa::Result<()> {
    let a = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "1"], ["x", "z", "2"]]}"#,
    )?;
    let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP)?;
    let sa = &b.assignment;
    println!("universe of {} elements, subsets of size {}", sa.universe.len(), sa.k);
    println!("subset graph: {} vertices, {} edges", b.graph.vertex_count(), b.graph.edge_count());
    for (x, img) in b.embedding.pairs() {
        println!("  {x} -> {img}");
    }

    let reflect = PartialMap::new([("x", "z"), ("z", "x")])?;
    let pi = extend_by_permutation(&a, sa, &reflect, true)?;
    let theta = subset_automorphism(&pi, &b)?;
    assert!(check_map(&theta, &b.graph, &b.graph, MapMode::Automorphism)?);
    println!("x <-> z extends to a subset graph automorphism");

    let mut count = 0;
    for phi in enumerate_partial_automorphisms(&a, a.vertex_count()) {
        let pi = extend_by_permutation(&a, sa, &phi, true)?;
        let theta = subset_automorphism(&pi, &b)?;
        let e = |v| b.embedding.get(v).expect("total").clone();
        let lifted = PartialMap::new(phi.pairs().map(|(u, v)| (e(u), e(v))))?;
        assert!(theta.extends(&lifted));
        count += 1;
    }
    println!("all {count} partial automorphisms extend");
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
