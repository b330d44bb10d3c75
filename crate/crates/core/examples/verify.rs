// Cross-checks a witness with the independent oracles, then corrupts one
// stored distance and watches the check fail.

use eppa::pipeline::{build_witness, Config, WitnessFile};
use eppa::verifier::{cross_check, search_extension, verify_eppa, DEFAULT_SEARCH_BUDGET};
use eppa::{EdgeLabelledGraph, PartialMap};

fn run() -> eppa::Result<()> {
    let a = EdgeLabelledGraph::from_json_str(r#"{"vertices": ["a", "b"], "edges": [["a", "b", "1"]]}"#)?;
    let w = build_witness(&a, Config::default())?;
    let report = cross_check(&w, DEFAULT_SEARCH_BUDGET)?;
    println!("{report}\n");
    assert!(report.passed());

    let mut file = WitnessFile::of(&w);
    file.final_graph.labels[0] = "2".parse()?;
    let broken = file.to_witness()?;
    let report = cross_check(&broken, DEFAULT_SEARCH_BUDGET)?;
    for check in report.failures() {
        println!("FAIL {}: {}", check.name, check.counterexample.as_ref().expect("failures carry one"));
    }

    // the oracles on their own
    let path = EdgeLabelledGraph::from_json_str(
        r#"{"vertices": ["x", "y", "z"], "edges": [["x", "y", "1"], ["y", "z", "2"]]}"#,
    )?;
    let r = verify_eppa(&path, &["x".into(), "z".into()], DEFAULT_SEARCH_BUDGET)?;
    println!("\npath x-y-z, copy {{x, z}}: {}", if r.passed() { "EPPA holds" } else { "EPPA fails" });
    let phi = PartialMap::new([("x", "z")])?;
    assert!(search_extension(&path, &phi, DEFAULT_SEARCH_BUDGET)?.is_none());
    Ok(())
}

fn main() {
    if let Err(e) = run() {
        eprintln!("error: {e}");
        std::process::exit(1);
    }
}
