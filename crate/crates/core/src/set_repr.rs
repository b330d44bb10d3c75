//! Extension of partial automorphisms for arbitrary edge-labelled graphs via a
//! set representation: every vertex becomes a `k`-subset of a finite universe,
//! and two subsets are joined by the `i`-th spectrum label exactly when they
//! share `i` elements. Any permutation of the universe then acts as an
//! automorphism of the subset graph.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{is_partial_automorphism, EdgeLabelledGraph, PartialMap, VertexId};
use crate::label::Label;

/// Default limit on the number of vertices any construction stage may create.
pub const DEFAULT_VERTEX_CAP: usize = 200_000;

/// Default limit on the number of edges any construction stage may create.
pub const DEFAULT_EDGE_CAP: usize = 20_000_000;

/// One element of the universe. Pair tokens come before padding tokens, each
/// group ordered lexicographically; this is the linear order coherent
/// extensions respect.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum UniverseElement {
    /// `i`-th token shared by the endpoints of the edge `{x, y}`, `x < y`.
    Pair { x: VertexId, y: VertexId, i: usize },
    /// `t`-th token private to `x`.
    Padding { x: VertexId, t: usize },
}

impl UniverseElement {
    fn pair(a: &VertexId, b: &VertexId, i: usize) -> Self {
        let (x, y) = if a < b { (a, b) } else { (b, a) };
        UniverseElement::Pair {
            x: x.clone(),
            y: y.clone(),
            i,
        }
    }
}

pub(crate) fn escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len());
    for c in s.chars() {
        if matches!(c, '\\' | '(' | ')' | ',' | '{' | '}' | ' ' | '|') {
            out.push('\\');
        }
        out.push(c);
    }
    out
}

impl fmt::Display for UniverseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UniverseElement::Pair { x, y, i } => {
                write!(f, "p({},{},{i})", escape(x.as_str()), escape(y.as_str()))
            }
            UniverseElement::Padding { x, t } => write!(f, "d({},{t})", escape(x.as_str())),
        }
    }
}

/// The set representation `x ↦ psi(x)` of a graph.
///
/// `psi` values are sorted indices into `universe`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SetAssignment {
    /// Distinct edge labels, ascending; label `spectrum[i - 1]` has index `i`.
    pub spectrum: Vec<Label>,
    pub k: usize,
    pub universe: Vec<UniverseElement>,
    pub psi: BTreeMap<VertexId, Vec<usize>>,
}

impl SetAssignment {
    /// 1-based position of `l` in the spectrum.
    pub fn spectrum_index(&self, l: &Label) -> Option<usize> {
        self.spectrum.binary_search(l).ok().map(|p| p + 1)
    }

    pub fn element_index(&self, e: &UniverseElement) -> Option<usize> {
        self.universe.binary_search(e).ok()
    }

    pub fn token(&self, i: usize) -> VertexId {
        VertexId::new(self.universe[i].to_string())
    }

    /// Canonical vertex name of a subset of the universe.
    pub fn subset_id(&self, subset: &[usize]) -> VertexId {
        VertexId::new(format!(
            "{{{}}}",
            subset.iter().map(|&e| self.universe[e].to_string()).join(" ")
        ))
    }

    fn psi_of(&self, x: &VertexId) -> Result<&[usize]> {
        self.psi
            .get(x)
            .map(Vec::as_slice)
            .ok_or_else(|| Error::UnknownVertex(x.clone()))
    }

    /// Checks the three defining conditions against `a`: pair tokens of an
    /// edge with label index `j` are exactly `1..=j` and sit in both
    /// endpoints, every set has size `k`, and two sets share exactly their
    /// edge's pair tokens (nothing for non-adjacent vertices). Also checks
    /// that `psi` is injective.
    pub fn check_conditions(&self, a: &EdgeLabelledGraph) -> std::result::Result<(), String> {
        if self.psi.len() != a.vertex_count() || a.vertices().iter().any(|v| !self.psi.contains_key(v)) {
            return Err("psi is not defined on exactly the vertices".into());
        }
        let sets: BTreeMap<&VertexId, BTreeSet<usize>> =
            self.psi.iter().map(|(v, s)| (v, s.iter().copied().collect())).collect();
        for (x, s) in &sets {
            if s.len() != self.k {
                return Err(format!("|psi({x})| = {} != k = {}", s.len(), self.k));
            }
            for &e in s {
                if let UniverseElement::Pair { x: p, y: q, i } = &self.universe[e] {
                    if p != *x && q != *x {
                        return Err(format!("psi({x}) holds foreign pair token {}", self.universe[e]));
                    }
                    let j = a
                        .distance(p, q)
                        .and_then(|l| self.spectrum_index(&l))
                        .ok_or_else(|| format!("pair token {} without an edge", self.universe[e]))?;
                    if *i == 0 || *i > j {
                        return Err(format!("pair token {} out of range 1..={j}", self.universe[e]));
                    }
                }
            }
        }
        let verts: Vec<&VertexId> = sets.keys().copied().collect();
        for (p, x) in verts.iter().enumerate() {
            for y in &verts[p + 1..] {
                let common: BTreeSet<usize> = sets[x].intersection(&sets[y]).copied().collect();
                let expected: BTreeSet<usize> = match a.distance(x, y) {
                    Some(l) => {
                        let j = self.spectrum_index(&l).ok_or("label outside spectrum")?;
                        (1..=j)
                            .map(|i| {
                                self.element_index(&UniverseElement::pair(x, y, i))
                                    .ok_or_else(|| format!("missing pair token ({x},{y},{i})"))
                            })
                            .collect::<std::result::Result<_, _>>()?
                    }
                    None => BTreeSet::new(),
                };
                if common != expected {
                    return Err(format!("psi({x}) ∩ psi({y}) has the wrong elements"));
                }
                if sets[x] == sets[y] {
                    return Err(format!("psi({x}) = psi({y})"));
                }
            }
        }
        Ok(())
    }
}

/// Builds the set representation of `a`.
///
/// `k` is one more than the largest per-vertex sum of label indices, so every
/// vertex keeps at least one private padding token and `psi` is injective.
pub fn build_set_assignment(a: &EdgeLabelledGraph) -> Result<SetAssignment> {
    if a.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let spectrum = a.spectrum();
    let idx = |l: &Label| spectrum.binary_search(l).expect("label in spectrum") + 1;
    let sums: Vec<usize> = (0..a.vertex_count())
        .map(|v| a.neighbors(v).iter().map(|(_, l)| idx(l)).sum())
        .collect();
    let k = 1 + sums.iter().copied().max().unwrap_or(0);

    let mut members: Vec<Vec<UniverseElement>> = vec![Vec::new(); a.vertex_count()];
    for (x, y, l) in a.edges() {
        for i in 1..=idx(&l) {
            let e = UniverseElement::pair(a.vertex(x), a.vertex(y), i);
            members[x].push(e.clone());
            members[y].push(e);
        }
    }
    for (x, list) in members.iter_mut().enumerate() {
        for t in 1..=k - sums[x] {
            list.push(UniverseElement::Padding {
                x: a.vertex(x).clone(),
                t,
            });
        }
    }
    let universe: Vec<UniverseElement> = members
        .iter()
        .flatten()
        .cloned()
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let psi = members
        .into_iter()
        .enumerate()
        .map(|(x, list)| {
            let mut set: Vec<usize> = list
                .iter()
                .map(|e| universe.binary_search(e).expect("element in universe"))
                .collect();
            set.sort_unstable();
            (a.vertex(x).clone(), set)
        })
        .collect();
    Ok(SetAssignment {
        spectrum,
        k,
        universe,
        psi,
    })
}

/// `C(n, k)`, or `None` on overflow.
pub fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(acc)
}

/// The subset graph together with the data needed to act on it.
#[derive(Debug, Clone)]
pub struct EppaGraph {
    pub assignment: SetAssignment,
    pub graph: EdgeLabelledGraph,
    /// Universe indices of each vertex, indexed like `graph`'s vertices.
    pub subsets: Vec<Vec<usize>>,
    /// `x ↦ psi(x)` from the input graph into `graph`.
    pub embedding: PartialMap,
    lookup: HashMap<Vec<usize>, usize>,
}

impl PartialEq for EppaGraph {
    fn eq(&self, other: &Self) -> bool {
        self.assignment == other.assignment
            && self.graph == other.graph
            && self.subsets == other.subsets
            && self.embedding == other.embedding
    }
}

impl EppaGraph {
    /// Rebuilds the subset graph from explicit vertex names and subsets,
    /// recomputing the edges from intersection sizes. Duplicate subsets are
    /// tolerated so that a corrupted witness still loads and can be reported on.
    pub fn from_subsets(
        assignment: SetAssignment,
        ids: Vec<VertexId>,
        subsets: Vec<Vec<usize>>,
        embedding: PartialMap,
    ) -> Result<Self> {
        if ids.len() != subsets.len() {
            return Err(Error::Parse("subset table and vertex names differ in length".into()));
        }
        let m = assignment.universe.len();
        for s in &subsets {
            if s.iter().any(|&e| e >= m) {
                return Err(Error::Parse(format!("subset element out of range 0..{m}")));
            }
        }
        let edges = subset_edges(&subsets, m, &assignment.spectrum);
        let graph = EdgeLabelledGraph::from_indexed(ids.clone(), edges)?;
        let mut ordered = vec![Vec::new(); subsets.len()];
        for (old, s) in subsets.into_iter().enumerate() {
            let mut s = s;
            s.sort_unstable();
            ordered[graph.index_of(&ids[old]).expect("vertex present")] = s;
        }
        let mut lookup = HashMap::with_capacity(ordered.len());
        for (i, s) in ordered.iter().enumerate() {
            lookup.entry(s.clone()).or_insert(i);
        }
        Ok(EppaGraph {
            assignment,
            graph,
            subsets: ordered,
            embedding,
            lookup,
        })
    }

    pub fn vertex_of_subset(&self, subset: &[usize]) -> Option<usize> {
        self.lookup.get(subset).copied()
    }
}

fn subset_edges(subsets: &[Vec<usize>], universe: usize, spectrum: &[Label]) -> Vec<(usize, usize, Label)> {
    let words = universe.div_ceil(64).max(1);
    let masks: Vec<Vec<u64>> = subsets
        .iter()
        .map(|s| {
            let mut m = vec![0u64; words];
            for &e in s {
                m[e / 64] |= 1 << (e % 64);
            }
            m
        })
        .collect();
    let mut edges = Vec::new();
    for i in 0..masks.len() {
        for j in i + 1..masks.len() {
            let common: u32 = masks[i]
                .iter()
                .zip(&masks[j])
                .map(|(a, b)| (a & b).count_ones())
                .sum();
            let common = common as usize;
            if common >= 1 && common <= spectrum.len() {
                edges.push((i, j, spectrum[common - 1]));
            }
        }
    }
    edges
}

/// Builds the subset graph of `a`: all `k`-subsets of the universe, joined by
/// label `s_i` when they share exactly `i` elements, plus the embedding
/// `x ↦ psi(x)`.
pub fn build_eppa_graph(a: &EdgeLabelledGraph, vertex_cap: usize) -> Result<EppaGraph> {
    build_eppa_graph_capped(a, vertex_cap, DEFAULT_EDGE_CAP)
}

/// Number of unordered pairs of `k`-subsets of an `m`-set meeting in
/// `1..=labels` elements.
pub fn subset_edge_count(m: usize, k: usize, labels: usize) -> Option<u128> {
    let mut total: u128 = 0;
    for i in 1..=labels.min(k.saturating_sub(1)) {
        let ordered = binomial(m, k)?.checked_mul(binomial(k, i)?)?.checked_mul(binomial(m - k, k - i)?)?;
        total = total.checked_add(ordered / 2)?;
    }
    Some(total)
}

/// [`build_eppa_graph`] with an explicit edge cap.
pub fn build_eppa_graph_capped(a: &EdgeLabelledGraph, vertex_cap: usize, edge_cap: usize) -> Result<EppaGraph> {
    let assignment = build_set_assignment(a)?;
    let m = assignment.universe.len();
    let k = assignment.k;
    let count = binomial(m, k);
    if count.is_none_or(|c| c > vertex_cap as u128) {
        return Err(Error::CapExceeded {
            stage: "level 2".into(),
            required: count.map_or_else(|| format!("C({m}, {k})"), |c| c.to_string()),
            cap: vertex_cap,
        });
    }
    let edges = subset_edge_count(m, k, assignment.spectrum.len());
    if edges.is_none_or(|e| e > edge_cap as u128) {
        return Err(Error::EdgeCapExceeded {
            stage: "level 2".into(),
            required: edges.map_or_else(|| "more than 2^128".into(), |e| e.to_string()),
            cap: edge_cap,
        });
    }
    let subsets: Vec<Vec<usize>> = (0..m).combinations(k).collect();
    let ids: Vec<VertexId> = subsets.iter().map(|s| assignment.subset_id(s)).collect();
    let embedding = PartialMap::new(
        assignment
            .psi
            .iter()
            .map(|(x, s)| (x.clone(), assignment.subset_id(s))),
    )?;
    EppaGraph::from_subsets(assignment, ids, subsets, embedding)
}

/// A total permutation of the universe, as images of universe indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct UniversePermutation(Vec<usize>);

impl UniversePermutation {
    pub fn identity(size: usize) -> Self {
        UniversePermutation((0..size).collect())
    }

    pub fn from_images(images: Vec<usize>) -> Result<Self> {
        let mut seen = vec![false; images.len()];
        for &i in &images {
            if i >= images.len() || std::mem::replace(&mut seen[i], true) {
                return Err(Error::InvalidArgument("not a permutation of the universe".into()));
            }
        }
        Ok(UniversePermutation(images))
    }

    /// Reads a permutation given as a map between universe tokens.
    pub fn from_partial_map(sa: &SetAssignment, map: &PartialMap) -> Result<Self> {
        let index: HashMap<VertexId, usize> = (0..sa.universe.len()).map(|i| (sa.token(i), i)).collect();
        if map.len() != sa.universe.len() {
            return Err(Error::InvalidArgument("not a permutation of the universe".into()));
        }
        let mut images = vec![usize::MAX; sa.universe.len()];
        for (x, y) in map.pairs() {
            let (Some(&i), Some(&j)) = (index.get(x), index.get(y)) else {
                return Err(Error::InvalidArgument(format!("{x} -> {y} leaves the universe")));
            };
            images[i] = j;
        }
        Self::from_images(images)
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, e: usize) -> usize {
        self.0[e]
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &UniversePermutation) -> UniversePermutation {
        UniversePermutation(other.0.iter().map(|&e| self.0[e]).collect())
    }

    pub fn to_partial_map(&self, sa: &SetAssignment) -> PartialMap {
        PartialMap::new(self.0.iter().enumerate().map(|(i, &j)| (sa.token(i), sa.token(j))))
            .expect("permutation is injective")
    }
}

/// Extends a partial automorphism `phi` of `a` to a permutation of the
/// universe that maps `psi(x)` onto `psi(phi(x))` for every `x` in its domain.
///
/// Pair tokens between domain points follow their edge; the remaining
/// tokens of each `psi(x)` go to the free tokens of `psi(phi(x))` in
/// increasing order; everything else is completed to a permutation. In
/// coherent mode the completion is order-preserving; otherwise elements free
/// on both sides are fixed first and only the rest is matched in order.
pub fn extend_by_permutation(
    a: &EdgeLabelledGraph,
    sa: &SetAssignment,
    phi: &PartialMap,
    coherent: bool,
) -> Result<UniversePermutation> {
    if !is_partial_automorphism(phi, a)? {
        return Err(Error::NotPartialAutomorphism(format!("{phi:?}")));
    }
    let m = sa.universe.len();
    let mut pi: Vec<Option<usize>> = vec![None; m];
    let mut hit = vec![false; m];
    fn assign(pi: &mut [Option<usize>], hit: &mut [bool], from: usize, to: usize) {
        debug_assert!(pi[from].is_none() && !hit[to]);
        pi[from] = Some(to);
        hit[to] = true;
    }

    let dom: Vec<(&VertexId, &VertexId)> = phi.pairs().collect();
    for (p, &(x, fx)) in dom.iter().enumerate() {
        for &(y, fy) in &dom[p + 1..] {
            let Some(l) = a.distance(x, y) else { continue };
            let j = sa.spectrum_index(&l).expect("label in spectrum");
            for i in 1..=j {
                let from = sa.element_index(&UniverseElement::pair(x, y, i));
                let to = sa.element_index(&UniverseElement::pair(fx, fy, i));
                let (Some(from), Some(to)) = (from, to) else {
                    return Err(Error::Internal(format!("missing pair token for {{{x}, {y}}}")));
                };
                assign(&mut pi, &mut hit, from, to);
            }
        }
    }

    for &(x, fx) in &dom {
        let src: Vec<usize> = sa.psi_of(x)?.iter().copied().filter(|&e| pi[e].is_none()).collect();
        let dst: Vec<usize> = sa.psi_of(fx)?.iter().copied().filter(|&e| !hit[e]).collect();
        if src.len() != dst.len() {
            return Err(Error::Internal(format!(
                "free parts of psi({x}) and psi({fx}) differ in size ({} vs {})",
                src.len(),
                dst.len()
            )));
        }
        for (s, d) in src.into_iter().zip(dst) {
            assign(&mut pi, &mut hit, s, d);
        }
    }

    let mut src: Vec<usize> = (0..m).filter(|&e| pi[e].is_none()).collect();
    let mut dst: Vec<usize> = (0..m).filter(|&e| !hit[e]).collect();
    if !coherent {
        let free_dst: BTreeSet<usize> = dst.iter().copied().collect();
        let fixed: BTreeSet<usize> = src.iter().copied().filter(|e| free_dst.contains(e)).collect();
        for &e in &fixed {
            assign(&mut pi, &mut hit, e, e);
        }
        src.retain(|e| !fixed.contains(e));
        dst.retain(|e| !fixed.contains(e));
    }
    for (s, d) in src.into_iter().zip(dst) {
        assign(&mut pi, &mut hit, s, d);
    }
    UniversePermutation::from_images(pi.into_iter().map(|e| e.expect("total")).collect())
}

/// The automorphism `X ↦ pi(X)` of the subset graph induced by a universe
/// permutation.
pub fn subset_automorphism(pi: &UniversePermutation, b: &EppaGraph) -> Result<PartialMap> {
    if pi.images().len() != b.assignment.universe.len() {
        return Err(Error::InvalidArgument("permutation size differs from the universe".into()));
    }
    let mut pairs = Vec::with_capacity(b.subsets.len());
    for (v, s) in b.subsets.iter().enumerate() {
        let mut img: Vec<usize> = s.iter().map(|&e| pi.apply(e)).collect();
        img.sort_unstable();
        let w = b
            .vertex_of_subset(&img)
            .ok_or_else(|| Error::Internal(format!("image of {} is not a vertex", b.graph.vertex(v))))?;
        pairs.push((b.graph.vertex(v).clone(), b.graph.vertex(w).clone()));
    }
    PartialMap::new(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::fixtures::*;
    use crate::graph::{check_map, enumerate_partial_automorphisms, MapMode};

    fn pair(x: &str, y: &str, i: usize) -> UniverseElement {
        UniverseElement::pair(&x.into(), &y.into(), i)
    }

    fn pad(x: &str, t: usize) -> UniverseElement {
        UniverseElement::Padding { x: x.into(), t }
    }

    fn psi_elems(sa: &SetAssignment, x: &str) -> Vec<UniverseElement> {
        sa.psi[&VertexId::from(x)].iter().map(|&e| sa.universe[e].clone()).collect()
    }

    #[test]
    fn two_point_assignment() {
        let a = graph(&["a", "b"], &[("a", "b", "1")]);
        let sa = build_set_assignment(&a).unwrap();
        assert_eq!(sa.k, 2);
        assert_eq!(sa.universe.len(), 3);
        assert_eq!(psi_elems(&sa, "a"), vec![pair("a", "b", 1), pad("a", 1)]);
        assert_eq!(psi_elems(&sa, "b"), vec![pair("a", "b", 1), pad("b", 1)]);
        sa.check_conditions(&a).unwrap();
    }

    #[test]
    fn metric_triangle_assignment() {
        let a = graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "2"), ("a", "c", "3")]);
        let sa = build_set_assignment(&a).unwrap();
        assert_eq!(sa.spectrum.len(), 3);
        assert_eq!(sa.k, 6);
        assert_eq!(sa.universe.len(), 12);
        let pads = sa
            .universe
            .iter()
            .filter(|e| matches!(e, UniverseElement::Padding { .. }))
            .count();
        assert_eq!(pads, 6);
        sa.check_conditions(&a).unwrap();
    }

    #[test]
    fn single_vertex_assignment() {
        let a = graph(&["x"], &[]);
        let sa = build_set_assignment(&a).unwrap();
        assert_eq!(sa.k, 1);
        assert_eq!(psi_elems(&sa, "x"), vec![pad("x", 1)]);
        let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(b.graph.vertex_count(), 1);
        assert_eq!(b.graph.edge_count(), 0);
    }

    #[test]
    fn two_point_subset_graph() {
        let a = graph(&["a", "b"], &[("a", "b", "1")]);
        let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(b.graph.vertex_count(), 3);
        assert_eq!(b.graph.edge_count(), 3);
        assert!(b.graph.edges().all(|(_, _, l)| l == Label::ONE));
        assert!(check_map(&b.embedding, &a, &b.graph, MapMode::Embedding).unwrap());
    }

    #[test]
    fn path_triangle_subset_graph_size() {
        // a-b 1, b-c 1, a-c 2: sums 3, 2, 3 so k = 4 and |U| = 4 + 4 = 8
        let a = graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "2")]);
        let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP).unwrap();
        assert_eq!(b.assignment.k, 4);
        assert_eq!(b.assignment.universe.len(), 8);
        assert_eq!(b.graph.vertex_count(), 70);
        assert!(check_map(&b.embedding, &a, &b.graph, MapMode::Embedding).unwrap());
    }

    #[test]
    fn cap_is_enforced() {
        let a = graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "2")]);
        let err = build_eppa_graph(&a, 69).unwrap_err();
        assert!(matches!(err, Error::CapExceeded { ref stage, cap: 69, .. } if stage == "level 2"));
    }

    #[test]
    fn swap_on_two_points() {
        let a = graph(&["a", "b"], &[("a", "b", "1")]);
        let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP).unwrap();
        let sa = &b.assignment;
        let phi = map(&[("a", "b"), ("b", "a")]);
        let pi = extend_by_permutation(&a, sa, &phi, true).unwrap();
        let at = |e: UniverseElement| sa.universe[pi.apply(sa.element_index(&e).unwrap())].clone();
        assert_eq!(at(pair("a", "b", 1)), pair("a", "b", 1));
        assert_eq!(at(pad("a", 1)), pad("b", 1));
        assert_eq!(at(pad("b", 1)), pad("a", 1));

        let theta = subset_automorphism(&pi, &b).unwrap();
        assert!(check_map(&theta, &b.graph, &b.graph, MapMode::Automorphism).unwrap());
        let pa = b.embedding.get(&"a".into()).unwrap();
        let pb = b.embedding.get(&"b".into()).unwrap();
        assert_eq!(theta.get(pa), Some(pb));
        assert_eq!(theta.get(pb), Some(pa));
        let third = sa.subset_id(&[
            sa.element_index(&pad("a", 1)).unwrap(),
            sa.element_index(&pad("b", 1)).unwrap(),
        ]);
        assert_eq!(theta.get(&third), Some(&third));
    }

    #[test]
    fn identity_cases_in_coherent_mode() {
        let a = graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "2")]);
        let sa = build_set_assignment(&a).unwrap();
        let id = UniversePermutation::identity(sa.universe.len());
        assert_eq!(extend_by_permutation(&a, &sa, &PartialMap::empty(), true).unwrap(), id);
        let part = map(&[("a", "a"), ("c", "c")]);
        assert_eq!(extend_by_permutation(&a, &sa, &part, true).unwrap(), id);
        assert_eq!(extend_by_permutation(&a, &sa, &part, false).unwrap(), id);
    }

    #[test]
    fn rejects_non_automorphisms() {
        let a = graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "2")]);
        let sa = build_set_assignment(&a).unwrap();
        let bad = map(&[("a", "a"), ("b", "c")]);
        assert!(matches!(
            extend_by_permutation(&a, &sa, &bad, true),
            Err(Error::NotPartialAutomorphism(_))
        ));
    }

    #[test]
    fn every_partial_automorphism_extends() {
        let a = graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "2")]);
        let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP).unwrap();
        for coherent in [true, false] {
            for phi in enumerate_partial_automorphisms(&a, 3) {
                let pi = extend_by_permutation(&a, &b.assignment, &phi, coherent).unwrap();
                let theta = subset_automorphism(&pi, &b).unwrap();
                assert!(check_map(&theta, &b.graph, &b.graph, MapMode::Automorphism).unwrap());
                for (x, y) in phi.pairs() {
                    assert_eq!(theta.get(b.embedding.get(x).unwrap()), b.embedding.get(y));
                }
            }
        }
    }

    #[test]
    fn permutation_from_partial_map() {
        let a = graph(&["a", "b"], &[("a", "b", "1")]);
        let sa = build_set_assignment(&a).unwrap();
        let pi = extend_by_permutation(&a, &sa, &map(&[("a", "b")]), true).unwrap();
        let as_map = pi.to_partial_map(&sa);
        assert_eq!(UniversePermutation::from_partial_map(&sa, &as_map).unwrap(), pi);
        assert!(UniversePermutation::from_partial_map(&sa, &PartialMap::empty()).is_err());
        assert!(UniversePermutation::from_images(vec![0, 0, 1]).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), Some(70));
        assert_eq!(binomial(12, 6), Some(924));
        assert_eq!(binomial(3, 5), Some(0));
        assert_eq!(binomial(200, 100), None);
    }

    #[test]
    fn edge_count_matches_construction() {
        for (a, cap) in [
            (graph(&["a", "b"], &[("a", "b", "1")]), 3),
            (graph(&["a", "b", "c"], &[("a", "b", "1"), ("b", "c", "1"), ("a", "c", "2")]), 1820),
        ] {
            let b = build_eppa_graph(&a, DEFAULT_VERTEX_CAP).unwrap();
            let sa = &b.assignment;
            let n = subset_edge_count(sa.universe.len(), sa.k, sa.spectrum.len()).unwrap();
            assert_eq!(n, b.graph.edge_count() as u128);
            assert_eq!(n, cap);
            let err = build_eppa_graph_capped(&a, DEFAULT_VERTEX_CAP, cap as usize - 1).unwrap_err();
            assert!(matches!(err, Error::EdgeCapExceeded { ref stage, .. } if stage == "level 2"), "{err}");
            assert!(build_eppa_graph_capped(&a, DEFAULT_VERTEX_CAP, cap as usize).is_ok());
        }
    }

    #[test]
    fn ids_escape_separators() {
        let e = UniverseElement::Padding { x: "a b,(c)".into(), t: 1 };
        assert_eq!(e.to_string(), r"d(a\ b\,\(c\),1)");
    }
}
