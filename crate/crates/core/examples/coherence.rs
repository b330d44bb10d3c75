// In coherent mode, extending a composite equals composing the extensions.

use std::collections::BTreeSet;

use eppa::graph::enumerate_partial_automorphisms;
use eppa::pipeline::{build_witness, extend_isometry, Config};
use eppa::{EdgeLabelledGraph, VertexId};

fn run() -> eppa::Result<()> {
    let a = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "1"], ["x", "z", "2"]]}"#,
    )?;
    let w = build_witness(&a, Config::default())?;
    let copy = w.final_graph.induced_subgraph(&w.copy())?;
    let maps: Vec<_> = enumerate_partial_automorphisms(&copy, copy.vertex_count()).collect();
    let ext: Vec<_> = maps.iter().map(|m| extend_isometry(&w, m)).collect::<eppa::Result<_>>()?;
    let mut pairs = 0;
    for (i, phi) in maps.iter().enumerate() {
        for (j, psi) in maps.iter().enumerate() {
            let image: BTreeSet<&VertexId> = phi.image();
            if image != psi.domain().collect() {
                continue;
            }
            let direct = extend_isometry(&w, &phi.then(psi)?)?;
            assert_eq!(direct, ext[i].then(&ext[j])?);
            pairs += 1;
        }
    }
    println!("{} partial isometries, {pairs} composable pairs, all coherent", maps.len());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
