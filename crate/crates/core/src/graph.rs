//! Edge-labelled graphs, partial maps between them and the structural checks
//! (homomorphism through automorphism) everything else is built on.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::label::Label;

/// Opaque vertex name. The string order is the canonical vertex order used for
/// every tie-break in the construction.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(String);

impl VertexId {
    pub fn new(name: impl Into<String>) -> Self {
        VertexId(name.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

impl From<&str> for VertexId {
    fn from(s: &str) -> Self {
        VertexId(s.to_string())
    }
}

impl From<String> for VertexId {
    fn from(s: String) -> Self {
        VertexId(s)
    }
}

/// Finite undirected graph whose edges carry positive rational labels.
///
/// Vertices are kept sorted; an index is the position in that order. Non-edges
/// are simply absent. Adjacency lists are sorted by neighbour index.
#[derive(Clone, Default, PartialEq, Eq)]
pub struct EdgeLabelledGraph {
    vertices: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    adj: Vec<Vec<(usize, Label)>>,
}

impl fmt::Debug for EdgeLabelledGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("EdgeLabelledGraph")
            .field("vertices", &self.vertices.len())
            .field("edges", &self.edge_count())
            .finish()
    }
}

impl EdgeLabelledGraph {
    /// Builds a graph from named vertices and edges.
    pub fn new<V, E>(vertices: V, edges: E) -> Result<Self>
    where
        V: IntoIterator,
        V::Item: Into<VertexId>,
        E: IntoIterator<Item = (VertexId, VertexId, Label)>,
    {
        let vertices: Vec<VertexId> = vertices.into_iter().map(Into::into).collect();
        let mut index = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if index.insert(v.clone(), i).is_some() {
                return Err(Error::DuplicateVertex(v.clone()));
            }
        }
        let mut indexed = Vec::new();
        for (x, y, l) in edges {
            let xi = *index.get(&x).ok_or_else(|| Error::UnknownVertex(x.clone()))?;
            let yi = *index.get(&y).ok_or_else(|| Error::UnknownVertex(y.clone()))?;
            indexed.push((xi, yi, l));
        }
        Self::from_indexed(vertices, indexed)
    }

    /// Builds a graph from vertices in arbitrary order and edges given by
    /// positions in `vertices`. The result is re-sorted into canonical order.
    pub fn from_indexed(vertices: Vec<VertexId>, edges: Vec<(usize, usize, Label)>) -> Result<Self> {
        let n = vertices.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&a, &b| vertices[a].cmp(&vertices[b]));
        let mut rank = vec![0usize; n];
        for (r, &old) in order.iter().enumerate() {
            rank[old] = r;
        }
        let sorted: Vec<VertexId> = order.iter().map(|&i| vertices[i].clone()).collect();
        for w in sorted.windows(2) {
            if w[0] == w[1] {
                return Err(Error::DuplicateVertex(w[0].clone()));
            }
        }
        let mut adj: Vec<Vec<(usize, Label)>> = vec![Vec::new(); n];
        for (x, y, l) in edges {
            if x >= n || y >= n {
                return Err(Error::Internal(format!("edge index ({x}, {y}) out of range")));
            }
            if x == y {
                return Err(Error::Loop(vertices[x].clone()));
            }
            let (a, b) = (rank[x], rank[y]);
            adj[a].push((b, l));
            adj[b].push((a, l));
        }
        for (v, list) in adj.iter_mut().enumerate() {
            list.sort_unstable_by_key(|&(u, _)| u);
            for w in list.windows(2) {
                if w[0].0 == w[1].0 {
                    let (a, b) = (v.min(w[0].0), v.max(w[0].0));
                    return Err(Error::DuplicatePair(sorted[a].clone(), sorted[b].clone()));
                }
            }
        }
        let index = sorted.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        Ok(EdgeLabelledGraph {
            vertices: sorted,
            index,
            adj,
        })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[VertexId] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> &VertexId {
        &self.vertices[i]
    }

    pub fn index_of(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    pub fn contains(&self, v: &VertexId) -> bool {
        self.index.contains_key(v)
    }

    pub(crate) fn require_index(&self, v: &VertexId) -> Result<usize> {
        self.index_of(v).ok_or_else(|| Error::UnknownVertex(v.clone()))
    }

    /// Neighbours of vertex `i` with their labels, sorted by index.
    pub fn neighbors(&self, i: usize) -> &[(usize, Label)] {
        &self.adj[i]
    }

    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].len()
    }

    /// Label of the pair `{i, j}` by index.
    pub fn label(&self, i: usize, j: usize) -> Option<Label> {
        let list = &self.adj[i];
        list.binary_search_by_key(&j, |&(u, _)| u).ok().map(|p| list[p].1)
    }

    /// Label of the pair `{x, y}` by name.
    pub fn distance(&self, x: &VertexId, y: &VertexId) -> Option<Label> {
        self.label(self.index_of(x)?, self.index_of(y)?)
    }

    /// All edges as `(i, j, label)` with `i < j`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, Label)> + '_ {
        self.adj.iter().enumerate().flat_map(|(i, list)| {
            list.iter()
                .filter(move |&&(j, _)| i < j)
                .map(move |&(j, l)| (i, j, l))
        })
    }

    /// The distinct edge labels, ascending.
    pub fn spectrum(&self) -> Vec<Label> {
        let set: BTreeSet<Label> = self.edges().map(|(_, _, l)| l).collect();
        set.into_iter().collect()
    }

    pub fn max_label(&self) -> Option<Label> {
        self.edges().map(|(_, _, l)| l).max()
    }

    pub fn is_complete(&self) -> bool {
        let n = self.vertex_count();
        self.adj.iter().all(|l| l.len() + 1 == n)
    }

    /// True iff the graph is complete and every triple satisfies the triangle
    /// inequality.
    pub fn is_metric_space(&self) -> bool {
        self.metric_violation().is_none()
    }

    /// The first missing pair or the first triple `(x, y, z)` with
    /// `d(x, y) > d(x, z) + d(z, y)`.
    pub fn metric_violation(&self) -> Option<MetricViolation> {
        let n = self.vertex_count();
        for i in 0..n {
            for j in i + 1..n {
                if self.label(i, j).is_none() {
                    return Some(MetricViolation::MissingPair(
                        self.vertices[i].clone(),
                        self.vertices[j].clone(),
                    ));
                }
            }
        }
        let Some(scaled) = ScaledLabels::new(self) else {
            return self.metric_violation_exact();
        };
        for i in 0..n {
            for j in i + 1..n {
                let dij = scaled.get(i, j) as u128;
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    if dij > scaled.get(i, k) as u128 + scaled.get(k, j) as u128 {
                        return Some(MetricViolation::Triangle(
                            self.vertices[i].clone(),
                            self.vertices[j].clone(),
                            self.vertices[k].clone(),
                        ));
                    }
                }
            }
        }
        None
    }

    // Fallback when the labels do not fit a common integer scale.
    fn metric_violation_exact(&self) -> Option<MetricViolation> {
        let n = self.vertex_count();
        for i in 0..n {
            for j in i + 1..n {
                let dij = self.label(i, j)?;
                for k in 0..n {
                    if k == i || k == j {
                        continue;
                    }
                    let via = self.label(i, k)?.checked_add(&self.label(k, j)?);
                    if via.is_some_and(|v| dij > v) {
                        return Some(MetricViolation::Triangle(
                            self.vertices[i].clone(),
                            self.vertices[j].clone(),
                            self.vertices[k].clone(),
                        ));
                    }
                }
            }
        }
        None
    }

    /// The subgraph induced on `s`.
    pub fn induced_subgraph<'a>(&self, s: impl IntoIterator<Item = &'a VertexId>) -> Result<Self> {
        let mut keep = BTreeSet::new();
        for v in s {
            keep.insert(self.require_index(v)?);
        }
        Ok(self.induced_by_indices(&keep))
    }

    pub(crate) fn induced_by_indices(&self, keep: &BTreeSet<usize>) -> Self {
        let pos: HashMap<usize, usize> = keep.iter().enumerate().map(|(p, &i)| (i, p)).collect();
        let vertices: Vec<VertexId> = keep.iter().map(|&i| self.vertices[i].clone()).collect();
        let mut adj = vec![Vec::new(); keep.len()];
        for (&i, &p) in &pos {
            for &(j, l) in &self.adj[i] {
                if let Some(&q) = pos.get(&j) {
                    adj[p].push((q, l));
                }
            }
        }
        for list in &mut adj {
            list.sort_unstable_by_key(|&(u, _)| u);
        }
        let index = vertices.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect();
        EdgeLabelledGraph {
            vertices,
            index,
            adj,
        }
    }

    pub fn to_file(&self) -> GraphFile {
        GraphFile {
            vertices: self.vertices.iter().map(|v| v.0.clone()).collect(),
            edges: self
                .edges()
                .map(|(i, j, l)| (self.vertices[i].0.clone(), self.vertices[j].0.clone(), l.to_string()))
                .collect(),
        }
    }

    pub fn from_file(file: &GraphFile) -> Result<Self> {
        let mut index = HashMap::with_capacity(file.vertices.len());
        for (i, v) in file.vertices.iter().enumerate() {
            if index.insert(v.as_str(), i).is_some() {
                return Err(Error::Parse(format!("vertices[{i}]: duplicate vertex {v:?}")));
            }
        }
        let mut seen = BTreeSet::new();
        let mut edges = Vec::with_capacity(file.edges.len());
        for (e, (x, y, l)) in file.edges.iter().enumerate() {
            let xi = *index
                .get(x.as_str())
                .ok_or_else(|| Error::Parse(format!("edges[{e}]: unknown vertex {x:?}")))?;
            let yi = *index
                .get(y.as_str())
                .ok_or_else(|| Error::Parse(format!("edges[{e}]: unknown vertex {y:?}")))?;
            if xi == yi {
                return Err(Error::Parse(format!("edges[{e}]: loop on {x:?}")));
            }
            if !seen.insert((xi.min(yi), xi.max(yi))) {
                return Err(Error::Parse(format!("edges[{e}]: duplicate pair {{{x:?}, {y:?}}}")));
            }
            let label: Label = l
                .parse()
                .map_err(|err| Error::Parse(format!("edges[{e}]: {err}")))?;
            edges.push((xi, yi, label));
        }
        let vertices = file.vertices.iter().cloned().map(VertexId).collect();
        Self::from_indexed(vertices, edges)
    }

    pub fn from_json_str(s: &str) -> Result<Self> {
        let file: GraphFile = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_file(&file)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("graph serialises")
    }
}

impl Serialize for EdgeLabelledGraph {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_file().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for EdgeLabelledGraph {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let file = GraphFile::deserialize(deserializer)?;
        Self::from_file(&file).map_err(serde::de::Error::custom)
    }
}

/// Dense matrix of labels scaled to integers by a common denominator; 0 marks
/// a non-edge.
pub(crate) struct ScaledLabels {
    n: usize,
    data: Vec<u64>,
}

impl ScaledLabels {
    pub(crate) fn new(g: &EdgeLabelledGraph) -> Option<Self> {
        let spectrum = g.spectrum();
        let denom = Label::common_denominator(&spectrum)?;
        let n = g.vertex_count();
        let mut data = vec![0u64; n * n];
        for (i, j, l) in g.edges() {
            let v = u64::try_from(l.scaled(denom)).ok()?;
            data[i * n + j] = v;
            data[j * n + i] = v;
        }
        Some(ScaledLabels { n, data })
    }

    #[inline]
    pub(crate) fn get(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.n + j]
    }
}

/// On-disk graph format: `{"vertices": [...], "edges": [["a", "b", "3/2"], ...]}`.
/// Edges are written with endpoints in canonical order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub vertices: Vec<String>,
    pub edges: Vec<(String, String, String)>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MetricViolation {
    MissingPair(VertexId, VertexId),
    /// `d(x, y) > d(x, z) + d(z, y)` for `(x, y, z)`.
    Triangle(VertexId, VertexId, VertexId),
}

impl fmt::Display for MetricViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MetricViolation::MissingPair(x, y) => write!(f, "no distance between {x} and {y}"),
            MetricViolation::Triangle(x, y, z) => {
                write!(f, "triangle inequality fails for d({x}, {y}) via {z}")
            }
        }
    }
}

/// Finite partial map between vertex sets, stored as an explicit sorted pair list.
///
/// Maps built with [`PartialMap::new`] are injective. [`PartialMap::function`]
/// only requires a function; it exists so homomorphism checks can be handed
/// collapsing maps.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct PartialMap {
    pairs: BTreeMap<VertexId, VertexId>,
}

impl fmt::Debug for PartialMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.pairs.iter()).finish()
    }
}

impl PartialMap {
    pub fn empty() -> Self {
        PartialMap::default()
    }

    /// Injective partial map from pairs.
    pub fn new<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<VertexId>,
        B: Into<VertexId>,
    {
        let map = Self::function(pairs)?;
        let mut seen = BTreeSet::new();
        for y in map.pairs.values() {
            if !seen.insert(y) {
                return Err(Error::NotInjective(y.clone()));
            }
        }
        Ok(map)
    }

    /// Partial function from pairs; images may repeat.
    pub fn function<I, A, B>(pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (A, B)>,
        A: Into<VertexId>,
        B: Into<VertexId>,
    {
        let mut map = BTreeMap::new();
        for (x, y) in pairs {
            let (x, y) = (x.into(), y.into());
            if let Some(prev) = map.insert(x.clone(), y.clone()) {
                if prev != y {
                    return Err(Error::NotFunctional(x));
                }
            }
        }
        Ok(PartialMap { pairs: map })
    }

    pub fn identity<'a>(vertices: impl IntoIterator<Item = &'a VertexId>) -> Self {
        PartialMap {
            pairs: vertices.into_iter().map(|v| (v.clone(), v.clone())).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn get(&self, x: &VertexId) -> Option<&VertexId> {
        self.pairs.get(x)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (&VertexId, &VertexId)> {
        self.pairs.iter()
    }

    pub fn domain(&self) -> impl Iterator<Item = &VertexId> {
        self.pairs.keys()
    }

    pub fn image(&self) -> BTreeSet<&VertexId> {
        self.pairs.values().collect()
    }

    pub fn is_injective(&self) -> bool {
        self.image().len() == self.pairs.len()
    }

    pub fn inverse(&self) -> Result<Self> {
        Self::new(self.pairs.iter().map(|(x, y)| (y.clone(), x.clone())))
    }

    /// `then ∘ self`: first apply `self`, then `then`. Requires `Im(self) ⊆ Dom(then)`.
    pub fn then(&self, then: &PartialMap) -> Result<Self> {
        let mut pairs = BTreeMap::new();
        for (x, y) in &self.pairs {
            let z = then
                .get(y)
                .ok_or_else(|| Error::InvalidArgument(format!("{y} is not in the domain of the second map")))?;
            pairs.insert(x.clone(), z.clone());
        }
        Ok(PartialMap { pairs })
    }

    /// Restriction to the given domain vertices (absent ones are skipped).
    pub fn restrict<'a>(&self, domain: impl IntoIterator<Item = &'a VertexId>) -> Self {
        PartialMap {
            pairs: domain
                .into_iter()
                .filter_map(|x| self.pairs.get(x).map(|y| (x.clone(), y.clone())))
                .collect(),
        }
    }

    /// True when `self` agrees with `other` on every point of `other`'s domain.
    pub fn extends(&self, other: &PartialMap) -> bool {
        other.pairs.iter().all(|(x, y)| self.pairs.get(x) == Some(y))
    }
}

impl Serialize for PartialMap {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_seq(self.pairs.iter())
    }
}

impl<'de> Deserialize<'de> for PartialMap {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(VertexId, VertexId)> = Vec::deserialize(deserializer)?;
        PartialMap::new(pairs).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MapMode {
    Homomorphism,
    Monomorphism,
    Embedding,
    Automorphism,
}

/// Checks whether `f` is a map of the given kind from `g` to `h`.
///
/// Precondition failures (unknown vertices, a non-injective map where
/// injectivity is required, a non-total or non-bijective automorphism
/// candidate) are errors, distinct from an `Ok(false)` verdict.
pub fn check_map(f: &PartialMap, g: &EdgeLabelledGraph, h: &EdgeLabelledGraph, mode: MapMode) -> Result<bool> {
    let mut idx = Vec::with_capacity(f.len());
    for (x, y) in f.pairs() {
        idx.push((g.require_index(x)?, h.require_index(y)?));
    }
    if mode != MapMode::Homomorphism {
        let mut seen = BTreeSet::new();
        for (_, y) in f.pairs() {
            if !seen.insert(y) {
                return Err(Error::NotInjective(y.clone()));
            }
        }
    }
    if mode == MapMode::Automorphism {
        if !std::ptr::eq(g, h) && g != h {
            return Err(Error::DifferentGraphs);
        }
        if f.len() != g.vertex_count() {
            return Err(Error::NotBijective);
        }
    }
    let mut image = vec![None; g.vertex_count()];
    let mut preimage = vec![None; h.vertex_count()];
    for &(x, y) in &idx {
        image[x] = Some(y);
        preimage[y] = Some(x);
    }
    // A bijection of a finite graph onto itself that preserves edges also
    // reflects them, so only embeddings need the second direction.
    let reflect = mode == MapMode::Embedding;
    let mut g_row: Vec<Option<Label>> = vec![None; g.vertex_count()];
    let mut h_row: Vec<Option<Label>> = vec![None; h.vertex_count()];
    for &(x, fx) in &idx {
        for &(fy, l) in h.neighbors(fx) {
            h_row[fy] = Some(l);
        }
        if reflect {
            for &(y, l) in g.neighbors(x) {
                g_row[y] = Some(l);
            }
        }
        // preserve: every edge inside Dom(f) maps to an equal-label edge
        let preserved = g
            .neighbors(x)
            .iter()
            .all(|&(y, l)| image[y].is_none_or(|fy| h_row[fy] == Some(l)));
        // reflect: an edge between images comes from an edge
        let reflected = !reflect
            || h
                .neighbors(fx)
                .iter()
                .all(|&(fy, l)| preimage[fy].is_none_or(|y| g_row[y] == Some(l)));
        for &(fy, _) in h.neighbors(fx) {
            h_row[fy] = None;
        }
        if reflect {
            for &(y, _) in g.neighbors(x) {
                g_row[y] = None;
            }
        }
        if !(preserved && reflected) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `f` is an isomorphism between the subgraphs of `g` induced on its
/// domain and its image.
pub fn is_partial_automorphism(f: &PartialMap, g: &EdgeLabelledGraph) -> Result<bool> {
    let dom = g.induced_subgraph(f.domain())?;
    check_map(f, &dom, g, MapMode::Embedding)
}

/// Streams every partial automorphism of `g` with at most `max_domain_size`
/// points, each exactly once, in lexicographic order of the sorted pair lists.
/// The empty map comes first.
pub fn enumerate_partial_automorphisms(g: &EdgeLabelledGraph, max_domain_size: usize) -> PartialAutomorphisms<'_> {
    PartialAutomorphisms {
        g,
        max: max_domain_size.min(g.vertex_count()),
        pairs: Vec::new(),
        used: vec![false; g.vertex_count()],
        started: false,
        cursor: None,
    }
}

/// Iterator returned by [`enumerate_partial_automorphisms`]: a preorder walk
/// of the trie of consistent pair sequences.
pub struct PartialAutomorphisms<'g> {
    g: &'g EdgeLabelledGraph,
    max: usize,
    pairs: Vec<(usize, usize)>,
    used: Vec<bool>,
    started: bool,
    // next (domain, image) candidate to try after the current node
    cursor: Option<(usize, usize)>,
}

impl PartialAutomorphisms<'_> {
    fn consistent(&self, x: usize, y: usize) -> bool {
        !self.used[y]
            && self
                .pairs
                .iter()
                .all(|&(a, b)| self.g.label(a, x) == self.g.label(b, y))
    }

    fn current(&self) -> PartialMap {
        PartialMap {
            pairs: self
                .pairs
                .iter()
                .map(|&(x, y)| (self.g.vertex(x).clone(), self.g.vertex(y).clone()))
                .collect(),
        }
    }

    /// First consistent candidate at or after `(x, y)` in (domain, image) order.
    fn next_candidate(&self, mut x: usize, mut y: usize) -> Option<(usize, usize)> {
        let n = self.g.vertex_count();
        while x < n {
            while y < n {
                if self.consistent(x, y) {
                    return Some((x, y));
                }
                y += 1;
            }
            x += 1;
            y = 0;
        }
        None
    }
}

impl Iterator for PartialAutomorphisms<'_> {
    type Item = PartialMap;

    fn next(&mut self) -> Option<PartialMap> {
        if !self.started {
            self.started = true;
            self.cursor = (self.max > 0).then_some((0, 0));
            return Some(PartialMap::empty());
        }
        loop {
            // try to descend from the current node starting at the cursor
            if let Some((x, y)) = self.cursor {
                if self.pairs.len() < self.max {
                    if let Some((cx, cy)) = self.next_candidate(x, y) {
                        self.pairs.push((cx, cy));
                        self.used[cy] = true;
                        self.cursor = Some((cx + 1, 0));
                        return Some(self.current());
                    }
                }
            }
            // backtrack to the next sibling
            let (px, py) = self.pairs.pop()?;
            self.used[py] = false;
            self.cursor = Some((px, py + 1));
        }
    }
}
