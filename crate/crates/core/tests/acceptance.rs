// Acceptance suite. Runs without the libtest harness so that every criterion
// prints exactly one PASS or FAIL line, even when cargo captures output.
//
//     cargo test --release --test acceptance [-- FILTER...]

mod common;

use std::collections::BTreeMap;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use eppa::completion::{find_induced_nonmetric_cycles, has_nonmetric_cycle_up_to, shortest_path_completion, DEFAULT_CYCLE_BUDGET};
use eppa::cycle_elim::{build_next_level, LevelGraph};
use eppa::pipeline::{build_witness, extend_isometry, Config, Witness};
use eppa::set_repr::{build_eppa_graph, extend_by_permutation, subset_automorphism, DEFAULT_VERTEX_CAP};
use eppa::verifier::{check_lifted_level, cross_check, is_automorphism, is_metric, partial_isometries, search_extension, Dense, DEFAULT_SEARCH_BUDGET};
use eppa::{check_map, enumerate_partial_automorphisms, EdgeLabelledGraph, Error, Label, MapMode, PartialMap, VertexId};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use common::*;

struct Verdict {
    pass: bool,
    detail: String,
}

fn fail(detail: impl Into<String>) -> Verdict {
    Verdict { pass: false, detail: detail.into() }
}

/// Witnesses are expensive; each is built once and shared.
struct Fixture {
    name: &'static str,
    input: fn() -> EdgeLabelledGraph,
    time_limit: Duration,
    built: OnceLock<(Witness, Duration)>,
}

impl Fixture {
    fn witness(&self) -> &(Witness, Duration) {
        self.built.get_or_init(|| {
            let start = Instant::now();
            let w = build_witness(&(self.input)(), Config::default())
                .unwrap_or_else(|e| panic!("{}: build_witness failed: {e}", self.name));
            (w, start.elapsed())
        })
    }
}

fn t112() -> EdgeLabelledGraph {
    triangle("1", "1", "2")
}

fn t123() -> EdgeLabelledGraph {
    triangle("1", "2", "3")
}

static FIXTURES: [Fixture; 4] = [
    Fixture {
        name: "two points",
        input: two_point,
        time_limit: Duration::from_secs(60),
        built: OnceLock::new(),
    },
    Fixture {
        name: "triangle (1,1,2)",
        input: t112,
        time_limit: Duration::from_secs(60),
        built: OnceLock::new(),
    },
    Fixture {
        name: "triangle (1,2,3)",
        input: t123,
        time_limit: Duration::from_secs(600),
        built: OnceLock::new(),
    },
    Fixture {
        name: "square with diagonals 2",
        input: square,
        time_limit: Duration::from_secs(60),
        built: OnceLock::new(),
    },
];

fn fixture(name: &str) -> &'static Fixture {
    FIXTURES.iter().find(|f| f.name == name).expect("known fixture")
}

fn criterion_1() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for f in &FIXTURES {
        let start = Instant::now();
        let built_earlier = f.built.get().map(|(_, t)| *t);
        let (w, _) = f.witness();
        let copy = w.copy();
        let maps = partial_isometries(&w.final_graph, &copy).unwrap();
        let expected = enumerate_partial_automorphisms(&w.input, w.input.vertex_count()).count();
        let d = Dense::of(&w.final_graph).unwrap();
        let mut failures = 0;
        for phi in &maps {
            let good = match extend_isometry(w, phi) {
                Ok(theta) => is_automorphism(&d, &theta) && preserves_all_labels(&w.final_graph, &theta) && theta.extends(phi),
                Err(_) => false,
            };
            failures += usize::from(!good);
        }
        let total = start.elapsed() + built_earlier.unwrap_or(Duration::ZERO);
        let in_time = total <= f.time_limit;
        ok &= failures == 0 && maps.len() == expected && in_time && is_metric(&w.final_graph).unwrap();
        notes.push(format!(
            "{}: {} vertices, {}/{} maps extended{}",
            f.name,
            w.final_graph.vertex_count(),
            maps.len() - failures,
            maps.len(),
            if in_time { String::new() } else { format!(", over {:?}", f.time_limit) }
        ));
    }
    Verdict { pass: ok, detail: notes.join("; ") }
}

fn criterion_2() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut accepted, mut over_cap, mut maps, mut failures) = (0, 0, 0, 0);
    let mut attempts = 0;
    while accepted < 20 && attempts < 10_000 {
        attempts += 1;
        let a = random_graph(&mut rng, 4, 3, 0.6, false);
        let b = match build_eppa_graph(&a, DEFAULT_VERTEX_CAP) {
            Ok(b) => b,
            Err(Error::CapExceeded { .. } | Error::EdgeCapExceeded { .. }) => {
                over_cap += 1;
                continue;
            }
            Err(e) => panic!("{e}"),
        };
        accepted += 1;
        let d = Dense::of(&b.graph).unwrap();
        for phi in enumerate_partial_automorphisms(&a, a.vertex_count()) {
            for coherent in [true, false] {
                maps += 1;
                let good = extend_by_permutation(&a, &b.assignment, &phi, coherent)
                    .and_then(|pi| subset_automorphism(&pi, &b))
                    .map(|hat| {
                        let along = phi.pairs().all(|(x, y)| hat.get(b.embedding.get(x).unwrap()) == b.embedding.get(y));
                        along && is_automorphism(&d, &hat) && check_map(&hat, &b.graph, &b.graph, MapMode::Automorphism).unwrap()
                    })
                    .unwrap_or(false);
                failures += usize::from(!good);
            }
        }
    }
    let sizes = [
        build_eppa_graph(&two_point(), DEFAULT_VERTEX_CAP).unwrap().graph.vertex_count(),
        build_eppa_graph(&t112(), DEFAULT_VERTEX_CAP).unwrap().graph.vertex_count(),
    ];
    let detail = format!(
        "{accepted} graphs ({over_cap} over cap skipped), {}/{maps} extensions verified; |B| = {} and {}",
        maps - failures,
        sizes[0],
        sizes[1]
    );
    Verdict {
        pass: accepted == 20 && failures == 0 && sizes == [3, 70],
        detail,
    }
}

/// Triangle (1,1,3) as level 2, with a one-point copy at `z`.
fn mobius_base() -> LevelGraph {
    LevelGraph::base(2, triangle("1", "1", "3"), map(&[("p", "z")]))
}

/// Edge labels read around a 2-regular connected graph.
fn walk_labels(g: &EdgeLabelledGraph) -> Option<Vec<Label>> {
    if (0..g.vertex_count()).any(|i| g.degree(i) != 2) {
        return None;
    }
    let (mut prev, mut at) = (usize::MAX, 0);
    let mut labels = Vec::new();
    loop {
        let &(next, l) = g.neighbors(at).iter().find(|&&(n, _)| n != prev)?;
        labels.push(l);
        (prev, at) = (at, next);
        if at == 0 {
            break;
        }
    }
    (labels.len() == g.vertex_count()).then_some(labels)
}

fn is_rotation_or_reflection(got: &[Label], want: &[Label]) -> bool {
    let n = want.len();
    got.len() == n
        && (0..n).any(|r| {
            (0..n).all(|i| got[(i + r) % n] == want[i]) || (0..n).all(|i| got[(r + n - i) % n] == want[i])
        })
}

fn criterion_3() -> Verdict {
    let next = build_next_level(&mobius_base(), DEFAULT_VERTEX_CAP).unwrap();
    let g = &next.graph;
    let want: Vec<Label> = ["1", "1", "3", "1", "1", "3"].iter().map(|s| s.parse().unwrap()).collect();
    let walk = walk_labels(g);
    let single_cycle = walk.as_ref().is_some_and(|w| is_rotation_or_reflection(w, &want));
    let cycles: usize = (3..=6).map(|k| find_induced_nonmetric_cycles(g, k).unwrap().len()).sum();
    Verdict {
        pass: g.vertex_count() == 6 && g.edge_count() == 6 && single_cycle && cycles == 0,
        detail: format!(
            "{} vertices, {} edges, walk {:?}, {cycles} induced non-metric cycles on 3..6 vertices",
            g.vertex_count(),
            g.edge_count(),
            walk.map(|w| w.iter().map(|l| l.to_string()).collect::<Vec<_>>())
        ),
    }
}

/// All-pairs shortest paths by Floyd and Warshall, on labels.
fn floyd_warshall(g: &EdgeLabelledGraph) -> Vec<Vec<Option<Label>>> {
    let n = g.vertex_count();
    let mut d: Vec<Vec<Option<Label>>> = (0..n).map(|i| (0..n).map(|j| g.label(i, j)).collect()).collect();
    for k in 0..n {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if let (Some(a), Some(b)) = (d[i][k], d[k][j]) {
                    let via = a.checked_add(&b).unwrap();
                    if d[i][j].is_none_or(|c| via < c) {
                        d[i][j] = Some(via);
                    }
                }
            }
        }
    }
    d
}

fn criterion_4() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut failures, mut with_cycles, mut automorphisms) = (Vec::new(), 0, 0);
    for case in 0..100 {
        let g = random_graph(&mut rng, 7, 5, 0.4, true);
        let c = shortest_path_completion(&g).unwrap();
        let n = g.vertex_count();
        let fw = floyd_warshall(&g);
        let matches_oracle = c.vertices() == g.vertices() && (0..n).all(|i| (0..n).all(|j| i == j || c.label(i, j) == fw[i][j]));
        let preserved = g.edges().all(|(i, j, l)| c.label(i, j) == Some(l));
        let has_cycle = (3..=n).any(|k| !find_induced_nonmetric_cycles(&g, k).unwrap().is_empty());
        with_cycles += usize::from(has_cycle);
        let auts = naive_automorphisms(&g);
        automorphisms += auts.len();
        let auts_kept = auts.iter().all(|f| preserves_all_labels(&c, f));
        if !(matches_oracle && is_metric(&c).unwrap() && preserved != has_cycle && auts_kept) {
            failures.push(case);
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: format!(
            "100 graphs, {with_cycles} with induced non-metric cycles, {automorphisms} automorphisms carried over, failing cases {failures:?}"
        ),
    }
}

fn criterion_5() -> Verdict {
    let (mut checked, mut vacuous, mut failures) = (0, 0, Vec::new());
    for f in &FIXTURES {
        let (w, _) = f.witness();
        for level in &w.levels {
            let i = level.level;
            if i < 3 {
                // no cycle has at most two vertices
                vacuous += 1;
                continue;
            }
            checked += 1;
            match has_nonmetric_cycle_up_to(&level.graph, i, DEFAULT_CYCLE_BUDGET) {
                Ok(None) => {}
                Ok(Some(c)) => failures.push(format!("{} level {i}: {:?}", f.name, c.vertices)),
                Err(e) => failures.push(format!("{} level {i}: {e}", f.name)),
            }
        }
    }
    Verdict {
        pass: failures.is_empty(),
        detail: format!("{checked} levels searched, {vacuous} level-2 checks vacuous, failures {failures:?}"),
    }
}

fn criterion_6() -> Verdict {
    let mut notes = Vec::new();
    let mut ok = true;
    for name in ["two points", "triangle (1,1,2)"] {
        let (w, _) = fixture(name).witness();
        assert!(w.config.coherent);
        let maps = partial_isometries(&w.final_graph, &w.copy()).unwrap();
        let ext: Vec<PartialMap> = maps.iter().map(|phi| extend_isometry(w, phi).unwrap()).collect();
        let key = |m: &PartialMap| -> Vec<(VertexId, VertexId)> { m.pairs().map(|(x, y)| (x.clone(), y.clone())).collect() };
        let index: BTreeMap<Vec<(VertexId, VertexId)>, usize> = maps.iter().enumerate().map(|(i, m)| (key(m), i)).collect();
        let (mut pairs, mut failures) = (0, 0);
        for (p, f) in maps.iter().enumerate() {
            let image: Vec<&VertexId> = f.image().into_iter().collect();
            for (q, g) in maps.iter().enumerate() {
                if g.domain().collect::<Vec<_>>() != image {
                    continue;
                }
                pairs += 1;
                let h = f.then(g).unwrap();
                let composed = ext[p].then(&ext[q]).unwrap();
                if ext[index[&key(&h)]] != composed {
                    failures += 1;
                }
            }
        }
        ok &= failures == 0;
        notes.push(format!("{name}: {} composable pairs, {failures} failures", pairs));
    }
    Verdict { pass: ok, detail: notes.join("; ") }
}

/// `(level index, vertex index, bad set key)` of every stored valuation bit.
fn valuation_sites(doc: &Value) -> Vec<(usize, usize, String)> {
    let mut sites = Vec::new();
    for (p, level) in doc["levels"].as_array().unwrap().iter().enumerate() {
        if level["kind"] != "lift" {
            continue;
        }
        for (j, vertex) in level["vertices"].as_array().unwrap().iter().enumerate() {
            for key in vertex["valuation"].as_object().unwrap().keys() {
                sites.push((p, j, key.clone()));
            }
        }
    }
    sites
}

/// Loads a mutated witness and runs the full verifier on it. `Some(true)`
/// when a check fails with a counterexample, `None` when the file no longer
/// loads.
fn verifier_rejects(doc: &Value) -> Option<bool> {
    let w = Witness::from_json_str(&doc.to_string()).ok()?;
    let report = cross_check(&w, DEFAULT_SEARCH_BUDGET).unwrap();
    let rejected = report.failures().any(|c| c.counterexample.is_some());
    Some(rejected)
}

fn criterion_7() -> Verdict {
    let (w, _) = fixture("triangle (1,2,3)").witness();
    let doc: Value = serde_json::from_str(&w.to_json_string()).unwrap();
    let sites = valuation_sites(&doc);
    let bad_sets: usize = doc["levels"]
        .as_array()
        .unwrap()
        .iter()
        .filter_map(|l| l["bad_sets"].as_array().map(Vec::len))
        .sum();
    if sites.len() < 20 {
        return fail(format!(
            "the witness stores {} valuation bits ({bad_sets} bad sets over levels 3..{}), fewer than the 20 flips required",
            sites.len(),
            w.n
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let sample: Vec<_> = sites.choose_multiple(&mut rng, 20).cloned().collect();
    let mut caught = 0;
    for (p, j, key) in &sample {
        let mut m = doc.clone();
        let bit = &mut m["levels"][*p]["vertices"][*j]["valuation"][key.as_str()];
        *bit = Value::from(1 - bit.as_u64().unwrap());
        caught += usize::from(verifier_rejects(&m) == Some(true));
    }
    Verdict {
        pass: caught == sample.len(),
        detail: format!("{caught}/{} valuation bit flips rejected", sample.len()),
    }
}

/// Levels with bad sets, built from small non-metric graphs.
fn lifted_corpus() -> Vec<(&'static str, LevelGraph, LevelGraph)> {
    let two_triangles = graph(
        &["w", "x", "y", "z"],
        &[("x", "y", "1"), ("y", "z", "1"), ("x", "z", "3"), ("x", "w", "1"), ("w", "z", "1")],
    );
    let square = graph(&["a", "b", "c", "d"], &[("a", "b", "1"), ("b", "c", "1"), ("c", "d", "1"), ("a", "d", "4")]);
    let bases = [
        ("triangle (1,1,3)", mobius_base()),
        ("two triangles on a long edge", LevelGraph::base(2, two_triangles, map(&[("p", "y")]))),
        ("4-cycle (1,1,1,4)", LevelGraph::base(3, square, map(&[("p", "a")]))),
    ];
    bases
        .into_iter()
        .map(|(name, prev)| {
            let next = build_next_level(&prev, DEFAULT_VERTEX_CAP).unwrap();
            (name, prev, next)
        })
        .collect()
}

fn supplementary_7a() -> Verdict {
    let (mut flips, mut caught, mut clean) = (0, 0, true);
    let mut notes = Vec::new();
    for (name, prev, next) in lifted_corpus() {
        clean &= check_lifted_level(&prev, &next, DEFAULT_SEARCH_BUDGET).unwrap().passed();
        let lift = next.lift.as_ref().unwrap();
        let mut here = 0;
        for (j, vertex) in lift.vertices.iter().enumerate() {
            for p in 0..lift.memberships(&vertex.base).len() {
                let mut m = next.clone();
                m.lift.as_mut().unwrap().vertices[j].bits ^= 1 << p;
                here += 1;
                let report = check_lifted_level(&prev, &m, DEFAULT_SEARCH_BUDGET).unwrap();
                caught += usize::from(report.failures().any(|c| c.counterexample.is_some()));
            }
        }
        flips += here;
        notes.push(format!("{name}: {here}"));
    }
    Verdict {
        pass: clean && flips >= 20 && caught == flips,
        detail: format!("{caught}/{flips} valuation bit flips on lifted levels rejected ({})", notes.join(", ")),
    }
}

fn supplementary_7b() -> Verdict {
    let (w, _) = fixture("triangle (1,2,3)").witness();
    let doc: Value = serde_json::from_str(&w.to_json_string()).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(71);
    let levels = doc["levels"].as_array().unwrap().len();
    let mut outcomes: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
    for round in 0..20 {
        let mut m = doc.clone();
        let kind = match round % 7 {
            0 => {
                // one member of one subset moves to an element outside it
                let j = rng.gen_range(0..924);
                let members = m["levels"][0]["vertices"][j]["members"].as_array_mut().unwrap();
                let set: Vec<u64> = members.iter().map(|x| x.as_u64().unwrap()).collect();
                let out = (0..12).filter(|e| !set.contains(e)).collect::<Vec<u64>>();
                let slot = rng.gen_range(0..set.len());
                let mut new: Vec<u64> = set.clone();
                new[slot] = *out.choose(&mut rng).unwrap();
                new.sort_unstable();
                *members = new.into_iter().map(Value::from).collect();
                "subset member"
            }
            1 => {
                // one input point embedded elsewhere in one level
                let p = rng.gen_range(0..levels);
                let level = &mut m["levels"][p];
                let target = level["vertices"][rng.gen_range(0..924)]["id"].clone();
                let pairs = level["base_embedding"].as_array_mut().unwrap();
                let q = rng.gen_range(0..pairs.len());
                pairs[q][1] = target;
                "level embedding"
            }
            2 => {
                // one lifted vertex projects to a different base
                let p = rng.gen_range(1..levels);
                let base = doc["levels"][p - 1]["vertices"][rng.gen_range(0..924)]["id"].clone();
                m["levels"][p]["vertices"][rng.gen_range(0..924)]["base"] = base;
                "lifted base"
            }
            3 => {
                // one component vertex dropped
                let comp = m["component"].as_array_mut().unwrap();
                let j = rng.gen_range(0..comp.len());
                comp.remove(j);
                "component"
            }
            4 => {
                // one final distance relabelled
                let labels = doc["final"]["labels"].as_array().unwrap().len() as u64;
                let edges = m["final"]["edges"].as_array_mut().unwrap();
                let e = rng.gen_range(0..edges.len());
                let old = edges[e][2].as_u64().unwrap();
                edges[e][2] = Value::from((old + rng.gen_range(1..labels)) % labels);
                "final distance"
            }
            5 => {
                // one final embedding image moved
                let target = doc["final"]["vertices"][rng.gen_range(0..924)].clone();
                let pairs = m["final_embedding"].as_array_mut().unwrap();
                let q = rng.gen_range(0..pairs.len());
                pairs[q][1] = target;
                "final embedding"
            }
            _ => {
                // one element of one psi set replaced
                let psi = m["assignment"]["psi"].as_object_mut().unwrap();
                let keys: Vec<String> = psi.keys().cloned().collect();
                let set = psi[keys.choose(&mut rng).unwrap()].as_array_mut().unwrap();
                let have: Vec<u64> = set.iter().map(|x| x.as_u64().unwrap()).collect();
                let out = (0..12).filter(|e| !have.contains(e)).collect::<Vec<u64>>();
                let slot = rng.gen_range(0..have.len());
                set[slot] = Value::from(*out.choose(&mut rng).unwrap());
                "set assignment"
            }
        };
        if m == doc {
            continue;
        }
        let entry = outcomes.entry(kind).or_default();
        entry.0 += 1;
        entry.1 += usize::from(verifier_rejects(&m) == Some(true));
    }
    let tried: usize = outcomes.values().map(|o| o.0).sum();
    let caught: usize = outcomes.values().map(|o| o.1).sum();
    let detail: Vec<String> = outcomes.iter().map(|(k, (t, c))| format!("{k} {c}/{t}")).collect();
    Verdict {
        pass: tried >= 20 && caught == tried,
        detail: format!("{caught}/{tried} single-datum mutations of the stored (1,2,3) witness rejected ({})", detail.join(", ")),
    }
}

/// Graphs of at most 8 vertices used across the suite.
fn search_corpus() -> Vec<(String, EdgeLabelledGraph)> {
    let mut out: Vec<(String, EdgeLabelledGraph)> = vec![
        ("two points".into(), two_point()),
        ("triangle (1,1,2)".into(), t112()),
        ("triangle (1,2,3)".into(), t123()),
        ("triangle (1,1,3)".into(), triangle("1", "1", "3")),
        ("square".into(), square()),
    ];
    for (name, _, next) in lifted_corpus() {
        if next.graph.vertex_count() <= 8 {
            out.push((format!("lift of {name}"), next.graph));
        }
    }
    let cube: Vec<String> = (0..8).map(|i| format!("{i:03b}")).collect();
    let mut edges = Vec::new();
    for i in 0..8usize {
        for b in 0..3 {
            let j = i ^ (1 << b);
            if i < j {
                edges.push((cube[i].as_str(), cube[j].as_str(), "1"));
            }
        }
    }
    let names: Vec<&str> = cube.iter().map(String::as_str).collect();
    out.push(("cube".into(), graph(&names, &edges)));
    let ring: Vec<String> = (0..8).map(|i| format!("r{i}")).collect();
    let ring_edges: Vec<(&str, &str, &str)> = (0..8).map(|i| (ring[i].as_str(), ring[(i + 1) % 8].as_str(), if i % 2 == 0 { "1" } else { "2" })).collect();
    let names: Vec<&str> = ring.iter().map(String::as_str).collect();
    out.push(("8-cycle (1,2)".into(), graph(&names, &ring_edges)));
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for case in 0..20 {
        out.push((format!("random connected {case}"), random_graph(&mut rng, 7, 5, 0.4, true)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for case in 0..10 {
        out.push((format!("random {case}"), random_graph(&mut rng, 8, 2, 0.5, false)));
    }
    out
}

fn criterion_8() -> Verdict {
    let (mut graphs, mut maps, mut extendable) = (0, 0, 0);
    let mut disagreements = Vec::new();
    for (name, g) in search_corpus() {
        graphs += 1;
        let auts = naive_automorphisms(&g);
        for phi in enumerate_partial_automorphisms(&g, g.vertex_count()) {
            maps += 1;
            let naive = auts.iter().find(|a| a.extends(&phi));
            extendable += usize::from(naive.is_some());
            let got = search_extension(&g, &phi, DEFAULT_SEARCH_BUDGET);
            if got.as_ref().ok().map(Option::as_ref) != Some(naive) {
                disagreements.push(format!("{name}: {phi:?}"));
            }
        }
    }
    Verdict {
        pass: disagreements.is_empty(),
        detail: format!(
            "{graphs} graphs, {maps} partial automorphisms ({extendable} extendable), {} disagreements {:?}",
            disagreements.len(),
            disagreements.iter().take(3).collect::<Vec<_>>()
        ),
    }
}

type Criterion = (&'static str, &'static str, fn() -> Verdict);

const CRITERIA: [Criterion; 10] = [
    ("criterion_1", "criterion 1", criterion_1),
    ("criterion_2", "criterion 2", criterion_2),
    ("criterion_3", "criterion 3", criterion_3),
    ("criterion_4", "criterion 4", criterion_4),
    ("criterion_5", "criterion 5", criterion_5),
    ("criterion_6", "criterion 6", criterion_6),
    ("criterion_7", "criterion 7", criterion_7),
    ("supplementary_7a", "supplementary 7a (lifted levels with bad sets)", supplementary_7a),
    ("supplementary_7b", "supplementary 7b (other stored data)", supplementary_7b),
    ("criterion_8", "criterion 8", criterion_8),
];

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    if args.iter().any(|a| a == "--list") {
        for (id, _, _) in CRITERIA {
            println!("{id}: test");
        }
        return;
    }
    let filters: Vec<&String> = args.iter().filter(|a| !a.starts_with('-')).collect();
    let selected: Vec<&Criterion> = CRITERIA
        .iter()
        .filter(|(id, _, _)| filters.is_empty() || filters.iter().any(|f| id.contains(f.as_str())))
        .collect();
    let mut failed = Vec::new();
    for (id, label, run) in &selected {
        let start = Instant::now();
        let v = run();
        println!("{} {label}: {} [{:.1?}]", if v.pass { "PASS" } else { "FAIL" }, v.detail, start.elapsed());
        if !v.pass {
            failed.push(*id);
        }
    }
    for f in &FIXTURES {
        if let Some((w, t)) = f.built.get() {
            println!("  {} witness: {} final vertices, built in {:.1?}", f.name, w.final_graph.vertex_count(), t);
        }
    }
    println!("acceptance: {} run, {} failed {:?}", selected.len(), failed.len(), failed);
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
