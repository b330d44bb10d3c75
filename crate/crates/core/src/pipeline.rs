//! The whole construction: `C_2` from set representation, elimination levels
//! up to `C_N`, the component of the copy of the input, and its completion.
//! A [`Witness`] stores every level so that [`extend_isometry`] is a replay.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::completion::{connected_component, shortest_path_completion, DEFAULT_CYCLE_BUDGET};
use crate::cycle_elim::{build_next_level_capped, compute_flip_set, lift_automorphism, BadSet, LevelGraph, LevelStats, Lift, LiftedVertex, Valuation};
use crate::error::{Error, Result};
use crate::graph::{check_map, EdgeLabelledGraph, GraphFile, MapMode, PartialMap, VertexId};
use crate::label::Label;
use crate::set_repr::{binomial, build_eppa_graph_capped, extend_by_permutation, subset_automorphism, EppaGraph, SetAssignment, DEFAULT_EDGE_CAP, DEFAULT_VERTEX_CAP};

pub const WITNESS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    /// Maximum vertex count of any constructed level.
    pub vertex_cap: usize,
    /// Maximum edge count of any constructed level or of the completion.
    pub edge_cap: usize,
    /// Node budget for backtracking searches.
    pub search_budget: u64,
    pub coherent: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            vertex_cap: DEFAULT_VERTEX_CAP,
            edge_cap: DEFAULT_EDGE_CAP,
            search_budget: DEFAULT_CYCLE_BUDGET,
            coherent: true,
        }
    }
}

impl Config {
    pub fn validate(&self) -> Result<()> {
        if self.vertex_cap == 0 || self.edge_cap == 0 || self.search_budget == 0 {
            return Err(Error::InvalidArgument("caps must be positive".into()));
        }
        Ok(())
    }
}

/// `floor(max / min) + 1` over the distances of a metric space; 2 for a
/// single point.
pub fn compute_n(a: &EdgeLabelledGraph) -> Result<usize> {
    if a.is_empty() {
        return Err(Error::EmptyGraph);
    }
    if let Some(v) = a.metric_violation() {
        return Err(Error::NotMetric(v.to_string()));
    }
    let spectrum = a.spectrum();
    let (Some(min), Some(max)) = (spectrum.first(), spectrum.last()) else {
        return Ok(2);
    };
    let ratio = usize::try_from(max.floor_div(min)).map_err(|_| Error::Overflow("level count"))?;
    ratio.checked_add(1).ok_or(Error::Overflow("level count"))
}

/// Complete record of one run of the construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub input: EdgeLabelledGraph,
    pub n: usize,
    pub config: Config,
    /// `None` only for single-point inputs.
    pub eppa: Option<EppaGraph>,
    /// `C_2, ..., C_N`.
    pub levels: Vec<LevelGraph>,
    /// Component of `C_N` containing the copy of the input, sorted.
    pub component: Vec<VertexId>,
    pub final_graph: EdgeLabelledGraph,
    pub final_embedding: PartialMap,
}

impl Witness {
    /// The embedded copy of the input in `final_graph`, sorted.
    pub fn copy(&self) -> Vec<VertexId> {
        self.final_embedding.image().into_iter().cloned().collect()
    }
}

pub fn build_witness(a: &EdgeLabelledGraph, config: Config) -> Result<Witness> {
    config.validate()?;
    let n = compute_n(a)?;
    if a.vertex_count() == 1 {
        return Ok(Witness {
            input: a.clone(),
            n,
            config,
            eppa: None,
            levels: Vec::new(),
            component: a.vertices().to_vec(),
            final_graph: a.clone(),
            final_embedding: PartialMap::identity(a.vertices()),
        });
    }
    let eppa = build_eppa_graph_capped(a, config.vertex_cap, config.edge_cap)?;
    let mut levels = vec![LevelGraph::base(2, eppa.graph.clone(), eppa.embedding.clone())];
    for _ in 2..n {
        let next = build_next_level_capped(levels.last().expect("nonempty"), config.vertex_cap, config.edge_cap)?;
        levels.push(next);
    }
    let top = levels.last().expect("nonempty");
    let component = connected_component(&top.graph, &top.copy())?;
    // The completion of a connected graph is complete.
    let pairs = binomial(component.len(), 2).expect("fits");
    if pairs > config.edge_cap as u128 {
        return Err(Error::EdgeCapExceeded {
            stage: "completion".into(),
            required: pairs.to_string(),
            cap: config.edge_cap,
        });
    }
    let final_graph = shortest_path_completion(&top.graph.induced_subgraph(&component)?)?;
    let final_embedding = top.base_embedding.clone();
    if let Some(v) = final_graph.metric_violation() {
        return Err(Error::Internal(format!("completion is not metric: {v}")));
    }
    if !check_map(&final_embedding, a, &final_graph, MapMode::Embedding)? {
        return Err(Error::Internal("input does not embed into the completion".into()));
    }
    Ok(Witness {
        input: a.clone(),
        n,
        config,
        eppa: Some(eppa),
        levels,
        component,
        final_graph,
        final_embedding,
    })
}

/// Total isometry of `w.final_graph` extending `phi`, a partial isometry of
/// the embedded copy of the input.
pub fn extend_isometry(w: &Witness, phi: &PartialMap) -> Result<PartialMap> {
    let copy: BTreeSet<VertexId> = w.copy().into_iter().collect();
    for (u, v) in phi.pairs() {
        for x in [u, v] {
            if !copy.contains(x) {
                return Err(Error::NotPartialIsometry(format!("{x} is outside the embedded copy")));
            }
        }
    }
    let dom = w.final_graph.induced_subgraph(phi.domain())?;
    if !check_map(phi, &dom, &w.final_graph, MapMode::Embedding)? {
        return Err(Error::NotPartialIsometry(format!("{phi:?} does not preserve distances")));
    }
    let Some(eppa) = &w.eppa else {
        return Ok(PartialMap::identity(w.final_graph.vertices()));
    };

    let back = w.final_embedding.inverse()?;
    let phi_a = PartialMap::new(phi.pairs().map(|(u, v)| (back.get(u).expect("in copy").clone(), back.get(v).expect("in copy").clone())))?;

    let pi = extend_by_permutation(&w.input, &eppa.assignment, &phi_a, w.config.coherent)?;
    let mut hat = subset_automorphism(&pi, eppa)?;
    for pair in w.levels.windows(2) {
        let (prev, next) = (&pair[0], &pair[1]);
        let emb = &next.base_embedding;
        let at = |a: &VertexId| {
            emb.get(a)
                .cloned()
                .ok_or_else(|| Error::Internal(format!("{a} is not embedded in level {}", next.level)))
        };
        let mut pairs = Vec::with_capacity(phi_a.len());
        for (a, b) in phi_a.pairs() {
            pairs.push((at(a)?, at(b)?));
        }
        let phi_next = PartialMap::new(pairs)?;
        let flips = compute_flip_set(prev, next, &phi_next, &hat)?;
        hat = lift_automorphism(prev, next, &hat, &flips)?;
    }

    let component: BTreeSet<&VertexId> = w.component.iter().collect();
    for v in &w.component {
        let img = hat.get(v).ok_or_else(|| Error::Internal(format!("{v} has no image")))?;
        if !component.contains(img) {
            return Err(Error::Internal(format!("component is not closed: {v} maps to {img}")));
        }
    }
    let theta = hat.restrict(&w.component);
    if !theta.extends(phi) || !check_map(&theta, &w.final_graph, &w.final_graph, MapMode::Automorphism)? {
        return Err(Error::Internal("extension is not an isometry extending the input".into()));
    }
    Ok(theta)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessStats {
    pub n: usize,
    pub input_vertices: usize,
    pub universe_size: Option<usize>,
    pub k: Option<usize>,
    pub levels: Vec<LevelStats>,
    pub component_size: usize,
    pub final_vertices: usize,
    pub final_edges: usize,
}

pub fn witness_stats(w: &Witness) -> WitnessStats {
    WitnessStats {
        n: w.n,
        input_vertices: w.input.vertex_count(),
        universe_size: w.eppa.as_ref().map(|e| e.assignment.universe.len()),
        k: w.eppa.as_ref().map(|e| e.assignment.k),
        levels: w.levels.iter().map(LevelStats::of).collect(),
        component_size: w.component.len(),
        final_vertices: w.final_graph.vertex_count(),
        final_edges: w.final_graph.edge_count(),
    }
}

impl fmt::Display for WitnessStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "N: {}", self.n)?;
        writeln!(f, "input: {} vertices", self.input_vertices)?;
        if let (Some(u), Some(k)) = (self.universe_size, self.k) {
            writeln!(f, "universe: {u} elements, k = {k}")?;
        }
        let counts: Vec<String> = self.levels.iter().map(|l| l.vertices.to_string()).collect();
        writeln!(f, "levels: [{}]", counts.join(", "))?;
        for l in &self.levels {
            writeln!(
                f,
                "level {}: {} vertices, {} edges, {} bad sets below, max |U(x)| = {}",
                l.level, l.vertices, l.edges, l.bad_sets_below, l.max_valuation_bits
            )?;
        }
        writeln!(f, "component: {} vertices", self.component_size)?;
        write!(f, "final: {} vertices, {} edges", self.final_vertices, self.final_edges)
    }
}

/// Graph with labels interned, for large stored graphs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CompactGraph {
    pub vertices: Vec<VertexId>,
    pub labels: Vec<Label>,
    /// `(vertex index, vertex index, label index)`.
    pub edges: Vec<(usize, usize, usize)>,
}

impl CompactGraph {
    pub fn of(g: &EdgeLabelledGraph) -> Self {
        let labels = g.spectrum();
        let edges = g
            .edges()
            .map(|(i, j, l)| (i, j, labels.binary_search(&l).expect("label in spectrum")))
            .collect();
        CompactGraph {
            vertices: g.vertices().to_vec(),
            labels,
            edges,
        }
    }

    pub fn to_graph(&self) -> Result<EdgeLabelledGraph> {
        let n = self.vertices.len();
        let mut edges = Vec::with_capacity(self.edges.len());
        for (p, &(i, j, l)) in self.edges.iter().enumerate() {
            if i >= n || j >= n || l >= self.labels.len() {
                return Err(Error::Parse(format!("edges[{p}]: index out of range")));
            }
            edges.push((i, j, self.labels[l]));
        }
        EdgeLabelledGraph::from_indexed(self.vertices.clone(), edges)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SubsetRecord {
    pub id: VertexId,
    /// Universe indices.
    pub members: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LiftedRecord {
    pub id: VertexId,
    pub base: VertexId,
    /// Bad set key to bit.
    pub valuation: BTreeMap<String, u8>,
}

/// Stored form of one level. Edges are not stored; they follow from the
/// vertex table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum LevelRecord {
    Subsets {
        level: usize,
        vertices: Vec<SubsetRecord>,
        base_embedding: PartialMap,
    },
    Lift {
        level: usize,
        bad_sets: Vec<BadSet>,
        vertices: Vec<LiftedRecord>,
        base_embedding: PartialMap,
    },
}

/// On-disk witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WitnessFile {
    pub format_version: u32,
    pub config: Config,
    pub n: usize,
    pub input: GraphFile,
    pub assignment: Option<SetAssignment>,
    pub levels: Vec<LevelRecord>,
    pub component: Vec<VertexId>,
    #[serde(rename = "final")]
    pub final_graph: CompactGraph,
    pub final_embedding: PartialMap,
}

impl WitnessFile {
    pub fn of(w: &Witness) -> Self {
        let levels = w
            .levels
            .iter()
            .map(|l| match &l.lift {
                None => LevelRecord::Subsets {
                    level: l.level,
                    vertices: l
                        .graph
                        .vertices()
                        .iter()
                        .zip(&w.eppa.as_ref().expect("level 2 present").subsets)
                        .map(|(id, members)| SubsetRecord {
                            id: id.clone(),
                            members: members.clone(),
                        })
                        .collect(),
                    base_embedding: l.base_embedding.clone(),
                },
                Some(lift) => LevelRecord::Lift {
                    level: l.level,
                    bad_sets: lift.bad_sets.clone(),
                    vertices: l
                        .graph
                        .vertices()
                        .iter()
                        .enumerate()
                        .map(|(i, id)| {
                            let Valuation { owner, bits } = lift.valuation(i);
                            LiftedRecord {
                                id: id.clone(),
                                base: owner,
                                valuation: bits,
                            }
                        })
                        .collect(),
                    base_embedding: l.base_embedding.clone(),
                },
            })
            .collect();
        WitnessFile {
            format_version: WITNESS_FORMAT_VERSION,
            config: w.config,
            n: w.n,
            input: w.input.to_file(),
            assignment: w.eppa.as_ref().map(|e| e.assignment.clone()),
            levels,
            component: w.component.clone(),
            final_graph: CompactGraph::of(&w.final_graph),
            final_embedding: w.final_embedding.clone(),
        }
    }

    /// Rebuilds the in-memory witness, recomputing level edges. Only the
    /// shape is checked here; whether the content is a valid construction is
    /// the verifier's business.
    pub fn to_witness(&self) -> Result<Witness> {
        if self.format_version != WITNESS_FORMAT_VERSION {
            return Err(Error::Parse(format!(
                "unsupported witness format version {} (expected {WITNESS_FORMAT_VERSION})",
                self.format_version
            )));
        }
        let input = EdgeLabelledGraph::from_file(&self.input).map_err(|e| Error::Parse(format!("input: {e}")))?;
        let mut eppa = None;
        let mut levels: Vec<LevelGraph> = Vec::with_capacity(self.levels.len());
        for (p, record) in self.levels.iter().enumerate() {
            let ctx = |e: Error| Error::Parse(format!("levels[{p}]: {e}"));
            match record {
                LevelRecord::Subsets {
                    level,
                    vertices,
                    base_embedding,
                } => {
                    if p != 0 {
                        return Err(Error::Parse(format!("levels[{p}]: subset level must come first")));
                    }
                    let assignment = self
                        .assignment
                        .clone()
                        .ok_or_else(|| Error::Parse("subset level without an assignment".into()))?;
                    let (ids, subsets) = vertices.iter().map(|r| (r.id.clone(), r.members.clone())).unzip();
                    let e = EppaGraph::from_subsets(assignment, ids, subsets, base_embedding.clone()).map_err(ctx)?;
                    levels.push(LevelGraph::base(*level, e.graph.clone(), base_embedding.clone()));
                    eppa = Some(e);
                }
                LevelRecord::Lift {
                    level,
                    bad_sets,
                    vertices,
                    base_embedding,
                } => {
                    let prev = levels
                        .last()
                        .ok_or_else(|| Error::Parse(format!("levels[{p}]: lifted level without a base")))?;
                    if *level != prev.level + 1 {
                        return Err(Error::Parse(format!("levels[{p}]: level {level} follows {}", prev.level)));
                    }
                    let next = lifted_level(prev, bad_sets, vertices, base_embedding, self.config.edge_cap).map_err(ctx)?;
                    levels.push(next);
                }
            }
        }
        let final_graph = self.final_graph.to_graph().map_err(|e| Error::Parse(format!("final: {e}")))?;
        Ok(Witness {
            input,
            n: self.n,
            config: self.config,
            eppa,
            levels,
            component: self.component.clone(),
            final_graph,
            final_embedding: self.final_embedding.clone(),
        })
    }
}

fn lifted_level(
    prev: &LevelGraph,
    bad_sets: &[BadSet],
    vertices: &[LiftedRecord],
    base_embedding: &PartialMap,
    edge_cap: usize,
) -> Result<LevelGraph> {
    let lift = Lift::new(bad_sets.to_vec(), Vec::new());
    let mut table = Vec::with_capacity(vertices.len());
    for r in vertices {
        let bits = lift.bits_of(&Valuation {
            owner: r.base.clone(),
            bits: r.valuation.clone(),
        })?;
        table.push((r.id.clone(), LiftedVertex { base: r.base.clone(), bits }));
    }
    LevelGraph::from_lift_table(prev, bad_sets.to_vec(), table, base_embedding.clone(), edge_cap)
}

impl Witness {
    pub fn to_json_string(&self) -> String {
        serde_json::to_string(&WitnessFile::of(self)).expect("witness serialises")
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: WitnessFile = serde_json::from_str(s).map_err(|e| Error::Parse(format!("witness: {e}")))?;
        file.to_witness()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::enumerate_partial_automorphisms;
    use crate::graph::fixtures::*;

    fn v(s: &str) -> VertexId {
        s.into()
    }

    fn copy_maps(w: &Witness) -> Vec<PartialMap> {
        let copy = w.final_graph.induced_subgraph(&w.copy()).unwrap();
        enumerate_partial_automorphisms(&copy, copy.vertex_count()).collect()
    }

    #[test]
    fn n_examples() {
        assert_eq!(compute_n(&triangle("1", "1", "2")).unwrap(), 3);
        assert_eq!(compute_n(&triangle("1", "2", "3")).unwrap(), 4);
        assert_eq!(compute_n(&triangle("1", "1", "1")).unwrap(), 2);
        assert_eq!(compute_n(&triangle("2", "3", "4")).unwrap(), 3);
        assert_eq!(compute_n(&graph(&["a"], &[])).unwrap(), 2);
        assert!(matches!(compute_n(&triangle("1", "1", "3")), Err(Error::NotMetric(_))));
        assert!(matches!(compute_n(&graph(&["a", "b"], &[])), Err(Error::NotMetric(_))));
    }

    #[test]
    fn n_exceeds_ratio() {
        for (a, b) in [("1/3", "1"), ("2", "7/2"), ("3", "3"), ("5/7", "20/7")] {
            let g = graph(&["x", "y", "z"], &[("x", "y", a), ("y", "z", b), ("x", "z", b)]);
            let n = compute_n(&g).unwrap();
            let min = a.parse::<Label>().unwrap().min(b.parse().unwrap());
            let max = a.parse::<Label>().unwrap().max(b.parse().unwrap());
            assert!(Label::integer(n as i64) > Label::new(max.numer() * min.denom(), max.denom() * min.numer()).unwrap());
        }
    }

    #[test]
    fn two_point_witness() {
        let w = build_witness(&graph(&["a", "b"], &[("a", "b", "1")]), Config::default()).unwrap();
        assert_eq!(w.n, 2);
        assert_eq!(w.levels.len(), 1);
        assert_eq!(w.final_graph.vertex_count(), 3);
        assert!(w.final_graph.edges().all(|(_, _, l)| l == Label::ONE));
        let stats = witness_stats(&w);
        let text = stats.to_string();
        assert!(text.contains("levels: [3]"), "{text}");
        assert!(text.contains("final: 3 vertices"), "{text}");

        let (ea, eb) = (w.final_embedding.get(&v("a")).unwrap().clone(), w.final_embedding.get(&v("b")).unwrap().clone());
        let swap = PartialMap::new([(ea.clone(), eb.clone()), (eb.clone(), ea.clone())]).unwrap();
        let theta = extend_isometry(&w, &swap).unwrap();
        assert!(theta.extends(&swap));
        let third = w.final_graph.vertices().iter().find(|x| **x != ea && **x != eb).unwrap();
        assert_eq!(theta.get(third), Some(third));
        assert_eq!(
            extend_isometry(&w, &PartialMap::empty()).unwrap(),
            PartialMap::identity(w.final_graph.vertices())
        );
        assert_eq!(copy_maps(&w).len(), 7);
        for phi in copy_maps(&w) {
            assert!(extend_isometry(&w, &phi).unwrap().extends(&phi));
        }
    }

    #[test]
    fn metric_triangle_witness() {
        let w = build_witness(&triangle("1", "1", "2"), Config::default()).unwrap();
        assert_eq!(w.n, 3);
        let stats = witness_stats(&w);
        assert_eq!(stats.levels[0].vertices, 70);
        assert_eq!(stats.levels[1].bad_sets_below, 0);
        assert_eq!(stats.levels[1].vertices, 70);
        for phi in copy_maps(&w) {
            let theta = extend_isometry(&w, &phi).unwrap();
            assert!(check_map(&theta, &w.final_graph, &w.final_graph, MapMode::Automorphism).unwrap());
        }
    }

    #[test]
    fn coherence_on_two_points() {
        let w = build_witness(&graph(&["a", "b"], &[("a", "b", "1")]), Config::default()).unwrap();
        let maps = copy_maps(&w);
        for phi in &maps {
            for psi in &maps {
                let im: BTreeSet<&VertexId> = phi.image();
                let dom: BTreeSet<&VertexId> = psi.domain().collect();
                if im != dom {
                    continue;
                }
                let both = phi.then(psi).unwrap();
                let lhs = extend_isometry(&w, &both).unwrap();
                let rhs = extend_isometry(&w, phi).unwrap().then(&extend_isometry(&w, psi).unwrap()).unwrap();
                assert_eq!(lhs, rhs, "{phi:?} then {psi:?}");
            }
        }
    }

    #[test]
    fn rejects_bad_maps() {
        let w = build_witness(&triangle("1", "1", "2"), Config::default()).unwrap();
        let copy = w.copy();
        let (x, y) = (&copy[0], &copy[1]);
        let outside = w.final_graph.vertices().iter().find(|v| !copy.contains(v)).unwrap();
        let out = PartialMap::new([(x.clone(), outside.clone())]).unwrap();
        assert!(matches!(extend_isometry(&w, &out), Err(Error::NotPartialIsometry(_))));
        // copy[0] and copy[1] are at distance 1 or 2; pair them with a pair at the other distance
        let d = w.final_graph.distance(x, y).unwrap();
        let other = copy
            .iter()
            .flat_map(|a| copy.iter().map(move |b| (a, b)))
            .find(|(a, b)| a != b && w.final_graph.distance(a, b) != Some(d))
            .unwrap();
        let bad = PartialMap::new([(x.clone(), other.0.clone()), (y.clone(), other.1.clone())]).unwrap();
        assert!(matches!(extend_isometry(&w, &bad), Err(Error::NotPartialIsometry(_))));
    }

    #[test]
    fn single_point() {
        let w = build_witness(&graph(&["a"], &[]), Config::default()).unwrap();
        assert_eq!(w.final_graph.vertex_count(), 1);
        let id = map(&[("a", "a")]);
        assert_eq!(extend_isometry(&w, &id).unwrap(), id);
        let back = Witness::from_json_str(&w.to_json_string()).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn errors() {
        assert!(matches!(build_witness(&triangle("1", "1", "3"), Config::default()), Err(Error::NotMetric(_))));
        let tiny = Config {
            vertex_cap: 10,
            ..Config::default()
        };
        let err = build_witness(&triangle("1", "2", "3"), tiny).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { ref stage, .. } if stage == "level 2"), "{err}");
        let few_edges = Config {
            edge_cap: 1819,
            ..Config::default()
        };
        let err = build_witness(&triangle("1", "1", "2"), few_edges).unwrap_err();
        assert!(matches!(err, Error::EdgeCapExceeded { ref stage, .. } if stage == "level 2"), "{err}");
        let complete_is_too_big = Config {
            edge_cap: 2000,
            ..Config::default()
        };
        let err = build_witness(&triangle("1", "1", "2"), complete_is_too_big).unwrap_err();
        assert!(matches!(err, Error::EdgeCapExceeded { ref stage, .. } if stage == "completion"), "{err}");
        let zero = Config {
            search_budget: 0,
            ..Config::default()
        };
        assert!(build_witness(&triangle("1", "1", "2"), zero).is_err());
    }

    #[test]
    fn witness_round_trip() {
        let w = build_witness(&triangle("1", "1", "2"), Config::default()).unwrap();
        let s = w.to_json_string();
        let back = Witness::from_json_str(&s).unwrap();
        assert_eq!(back, w);
        assert_eq!(back.to_json_string(), s);
        let file: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(file["format_version"], 1);
        assert_eq!(file["levels"][1]["kind"], "lift");
    }

    #[test]
    fn witness_loader_reports_shape_errors() {
        let w = build_witness(&graph(&["a", "b"], &[("a", "b", "1")]), Config::default()).unwrap();
        let mut file = WitnessFile::of(&w);
        file.format_version = 9;
        assert!(matches!(file.to_witness(), Err(Error::Parse(_))));
        let mut file = WitnessFile::of(&w);
        file.final_graph.edges.push((0, 99, 0));
        assert!(matches!(file.to_witness(), Err(Error::Parse(_))));
        assert!(matches!(Witness::from_json_str("{\"format_version\":1}"), Err(Error::Parse(_))));
    }
}
