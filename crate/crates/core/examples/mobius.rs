// One elimination step on a non-metric triangle: doubling every vertex by a
// bit and flipping the bit across the long edge unwinds the triangle into a
// metric hexagon.

use std::collections::BTreeSet;

use eppa::completion::find_induced_nonmetric_cycles;
use eppa::cycle_elim::{bad_sets, build_next_level, compute_flip_set, lift_automorphism, LevelGraph, LevelStats};
use eppa::set_repr::DEFAULT_VERTEX_CAP;
use eppa::{EdgeLabelledGraph, PartialMap, VertexId};

fn run() -> eppa::Result<()> {
    let triangle = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "3"], ["y", "z", "1"], ["x", "z", "1"]]}"#,
    )?;
    let bad = bad_sets(&triangle, 2)?;
    println!("bad sets: {:?}", bad.iter().map(|b| &b.members).collect::<Vec<_>>());

    // the copy to carry along is the long edge x-y
    let copy: Vec<VertexId> = vec!["x".into(), "y".into()];
    let base = LevelGraph::base(2, triangle.clone(), PartialMap::identity(&copy));
    let next = build_next_level(&base, DEFAULT_VERTEX_CAP)?;
    let stats = LevelStats::of(&next);
    println!("next level: {} vertices, {} edges", stats.vertices, stats.edges);
    for (i, j, l) in next.graph.edges() {
        println!("  {} -- {} : {l}", next.graph.vertex(i), next.graph.vertex(j));
    }
    for size in 3..=6 {
        assert!(find_induced_nonmetric_cycles(&next.graph, size)?.is_empty());
    }

    // swap the copies of x and y; the bit of the triangle has to flip
    let ex = next.base_embedding.get(&"x".into()).expect("embedded").clone();
    let ey = next.base_embedding.get(&"y".into()).expect("embedded").clone();
    let phi = PartialMap::new([(ex.clone(), ey.clone()), (ey, ex)])?;
    let below = PartialMap::new([("x", "y"), ("y", "x"), ("z", "z")])?;
    let flips: BTreeSet<usize> = compute_flip_set(&base, &next, &phi, &below)?;
    let theta = lift_automorphism(&base, &next, &below, &flips)?;
    assert!(theta.extends(&phi));
    println!("flip set has {} bad set(s); lifted automorphism {theta:?}", flips.len());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
