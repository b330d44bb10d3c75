// Builds a witness for a metric space given as a JSON file (the degenerate
// triangle 1, 2, 3 by default), prints its size report and optionally
// stores it.
//
//     cargo run --release --example witness -- [graph.json [witness.json]]

use std::time::Instant;

use eppa::pipeline::{build_witness, witness_stats, Config};
use eppa::EdgeLabelledGraph;

const DEFAULT_INPUT: &str =
    r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "2"], ["x", "z", "3"]]}"#;

fn run_with(input: &str, store: Option<&str>) -> eppa::Result<()> {
    let a = EdgeLabelledGraph::from_json_str(input)?;
    let start = Instant::now();
    let w = build_witness(&a, Config::default())?;
    println!("{}", witness_stats(&w));
    println!("built in {:.2?}", start.elapsed());
    if let Some(path) = store {
        std::fs::write(path, w.to_json_string())?;
        println!("stored in {path}");
    }
    Ok(())
}

fn run() -> eppa::Result<()> {
    let args: Vec<String> = std::env::args().skip(1).collect();
    match args.first() {
        Some(path) => run_with(&std::fs::read_to_string(path)?, args.get(1).map(String::as_str)),
        None => run_with(DEFAULT_INPUT, None),
    }
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
