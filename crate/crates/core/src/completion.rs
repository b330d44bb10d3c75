//! Connectivity, non-metric cycles and the shortest path completion.

use std::cmp::Reverse;
use std::collections::{BTreeSet, BinaryHeap, VecDeque};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{EdgeLabelledGraph, VertexId};
use crate::label::Label;

/// Default node budget for bounded cycle searches.
pub const DEFAULT_CYCLE_BUDGET: u64 = 10_000_000;

/// A cycle whose long edge outweighs all other edges together.
///
/// `vertices` runs from the smaller endpoint of the long edge along the short
/// edges to the other endpoint; the long edge closes the cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycleWitness {
    pub vertices: Vec<VertexId>,
    pub long_edge: (VertexId, VertexId),
    /// Long label minus the sum of the other labels; always positive.
    pub deficit: Label,
}

impl CycleWitness {
    /// Sorted member list, the canonical identity of the vertex set.
    pub fn members(&self) -> Vec<VertexId> {
        let mut m = self.vertices.clone();
        m.sort();
        m
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// True iff `{x, y}` is the long edge.
    pub fn is_long_edge(&self, x: &VertexId, y: &VertexId) -> bool {
        let (a, b) = &self.long_edge;
        (a == x && b == y) || (a == y && b == x)
    }

    fn from_path(g: &EdgeLabelledGraph, path: &[usize], short: Label, long: Label) -> Self {
        let mut vertices: Vec<VertexId> = path.iter().map(|&i| g.vertex(i).clone()).collect();
        if vertices[0] > vertices[vertices.len() - 1] {
            vertices.reverse();
        }
        let long_edge = (vertices[0].clone(), vertices[vertices.len() - 1].clone());
        CycleWitness {
            vertices,
            long_edge,
            deficit: long.checked_sub(&short).expect("long edge exceeds the path"),
        }
    }
}

pub fn is_connected(g: &EdgeLabelledGraph) -> Result<bool> {
    if g.is_empty() {
        return Err(Error::EmptyGraph);
    }
    Ok(component_indices(g, [0]).len() == g.vertex_count())
}

fn component_indices(g: &EdgeLabelledGraph, seeds: impl IntoIterator<Item = usize>) -> BTreeSet<usize> {
    let mut seen = vec![false; g.vertex_count()];
    let mut queue = VecDeque::new();
    for s in seeds {
        if !seen[s] {
            seen[s] = true;
            queue.push_back(s);
        }
    }
    while let Some(v) = queue.pop_front() {
        for &(u, _) in g.neighbors(v) {
            if !seen[u] {
                seen[u] = true;
                queue.push_back(u);
            }
        }
    }
    seen.iter().enumerate().filter(|(_, &s)| s).map(|(i, _)| i).collect()
}

/// Vertices reachable from any of `seeds`, in canonical order.
pub fn connected_component<'a>(
    g: &EdgeLabelledGraph,
    seeds: impl IntoIterator<Item = &'a VertexId>,
) -> Result<Vec<VertexId>> {
    let mut idx = Vec::new();
    for s in seeds {
        idx.push(g.require_index(s)?);
    }
    Ok(component_indices(g, idx)
        .into_iter()
        .map(|i| g.vertex(i).clone())
        .collect())
}

/// The complete graph whose label on `{x, y}` is the length of a shortest
/// path from `x` to `y`.
///
/// Labels are scaled to integers by their common denominator, so the
/// single-source relaxations run on exact integer weights.
pub fn shortest_path_completion(g: &EdgeLabelledGraph) -> Result<EdgeLabelledGraph> {
    if !is_connected(g)? {
        return Err(Error::Disconnected);
    }
    let n = g.vertex_count();
    let spectrum = g.spectrum();
    let denom = Label::common_denominator(&spectrum).ok_or(Error::Overflow("common denominator"))?;
    let weights: Vec<Vec<(usize, u128)>> = (0..n)
        .map(|v| g.neighbors(v).iter().map(|&(u, l)| (u, l.scaled(denom))).collect())
        .collect();
    let mut edges = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    let mut dist = vec![u128::MAX; n];
    let mut heap = BinaryHeap::new();
    for s in 0..n {
        dist.fill(u128::MAX);
        dist[s] = 0;
        heap.push(Reverse((0u128, s)));
        while let Some(Reverse((d, v))) = heap.pop() {
            if d > dist[v] {
                continue;
            }
            for &(u, w) in &weights[v] {
                let nd = d.checked_add(w).ok_or(Error::Overflow("path length"))?;
                if nd < dist[u] {
                    dist[u] = nd;
                    heap.push(Reverse((nd, u)));
                }
            }
        }
        for t in s + 1..n {
            let l = Label::from_scaled(dist[t], denom).ok_or(Error::Overflow("path length"))?;
            edges.push((s, t, l));
        }
    }
    EdgeLabelledGraph::from_indexed(g.vertices().to_vec(), edges)
}

/// Labels scaled to integers, sorted by weight per vertex, for the cycle
/// searches.
struct Weights {
    denom: i64,
    /// `(weight, neighbour)`, ascending.
    by_weight: Vec<Vec<(u128, usize)>>,
    /// Aligned with `g.neighbors(i)`.
    aligned: Vec<Vec<u128>>,
}

impl Weights {
    fn new(g: &EdgeLabelledGraph) -> Result<Self> {
        let spectrum = g.spectrum();
        let denom = Label::common_denominator(&spectrum).ok_or(Error::Overflow("common denominator"))?;
        let aligned: Vec<Vec<u128>> = (0..g.vertex_count())
            .map(|i| g.neighbors(i).iter().map(|(_, l)| l.scaled(denom)).collect())
            .collect();
        let by_weight = (0..g.vertex_count())
            .map(|i| {
                let mut row: Vec<(u128, usize)> =
                    g.neighbors(i).iter().zip(&aligned[i]).map(|(&(v, _), &w)| (w, v)).collect();
                row.sort_unstable();
                row
            })
            .collect();
        Ok(Weights { denom, by_weight, aligned })
    }

    fn get(&self, g: &EdgeLabelledGraph, i: usize, j: usize) -> Option<u128> {
        let p = g.neighbors(i).binary_search_by_key(&j, |&(v, _)| v).ok()?;
        Some(self.aligned[i][p])
    }

    /// A path from `start` can only close into a non-metric cycle while its
    /// length stays below the heaviest edge at `start`.
    fn bound(&self, start: usize) -> u128 {
        self.by_weight[start].last().map_or(0, |&(w, _)| w)
    }

    fn witness(&self, g: &EdgeLabelledGraph, path: &[usize], short: u128, long: u128) -> Result<CycleWitness> {
        let to_label = |w| Label::from_scaled(w, self.denom).ok_or(Error::Overflow("cycle length"));
        Ok(CycleWitness::from_path(g, path, to_label(short)?, to_label(long)?))
    }
}

/// All vertex sets of the given size inducing a non-metric cycle, each once,
/// ordered by sorted member list.
///
/// A non-metric cycle is a chordless path whose total length is below the
/// label of the edge closing it, so the search walks induced paths from the
/// smaller long-edge endpoint and prunes once the length reaches the heaviest
/// edge at the start.
pub fn find_induced_nonmetric_cycles(g: &EdgeLabelledGraph, size: usize) -> Result<Vec<CycleWitness>> {
    let mut out = Vec::new();
    for_each_induced_nonmetric_cycle(g, size, &mut |c| {
        out.push(c);
        Ok(())
    })?;
    out.sort_by_cached_key(|c| c.members());
    Ok(out)
}

/// Streams the cycles of [`find_induced_nonmetric_cycles`] to `visit`, each
/// exactly once and in no particular order. An error from `visit` stops the
/// search and is returned.
pub fn for_each_induced_nonmetric_cycle(
    g: &EdgeLabelledGraph,
    size: usize,
    visit: &mut dyn FnMut(CycleWitness) -> Result<()>,
) -> Result<()> {
    if size < 3 {
        return Err(Error::InvalidArgument(format!("cycle size must be at least 3, got {size}")));
    }
    if g.edge_count() == 0 {
        return Ok(());
    }
    let w = Weights::new(g)?;
    let mut search = InducedPaths {
        g,
        w: &w,
        size,
        bound: 0,
        path: Vec::with_capacity(size),
        on_path: vec![false; g.vertex_count()],
        visit,
    };
    for start in 0..g.vertex_count() {
        search.bound = w.bound(start);
        search.path.push(start);
        search.on_path[start] = true;
        search.extend(0)?;
        search.on_path[start] = false;
        search.path.pop();
    }
    Ok(())
}

struct InducedPaths<'a> {
    g: &'a EdgeLabelledGraph,
    w: &'a Weights,
    size: usize,
    bound: u128,
    path: Vec<usize>,
    on_path: Vec<bool>,
    visit: &'a mut dyn FnMut(CycleWitness) -> Result<()>,
}

impl InducedPaths<'_> {
    fn extend(&mut self, length: u128) -> Result<()> {
        let (g, w) = (self.g, self.w);
        let start = self.path[0];
        let last = *self.path.last().expect("nonempty path");
        let depth = self.path.len();
        let closing = depth + 1 == self.size;
        for &(l, v) in &w.by_weight[last] {
            let len = length + l;
            if len >= self.bound {
                break;
            }
            if self.on_path[v] || (closing && v < start) {
                continue;
            }
            // v may touch only `last` among path[1..depth-1], and `start`
            // only when it closes the cycle
            let inner = if depth >= 2 { &self.path[1..depth - 1] } else { &[][..] };
            if inner.iter().any(|&p| w.get(g, p, v).is_some()) {
                continue;
            }
            let to_start = if depth == 1 { None } else { w.get(g, start, v) };
            if closing {
                if let Some(long) = to_start.filter(|&long| long > len) {
                    self.path.push(v);
                    let c = w.witness(g, &self.path, len, long);
                    self.path.pop();
                    (self.visit)(c?)?;
                }
            } else if to_start.is_none() {
                self.path.push(v);
                self.on_path[v] = true;
                let r = self.extend(len);
                self.on_path[v] = false;
                self.path.pop();
                r?;
            }
        }
        Ok(())
    }
}

/// Some non-metric cycle (not necessarily induced) with at most
/// `max_vertices` vertices, or `None` when the bounded search is exhaustive
/// and found nothing. Exhausting `budget` search nodes is an error, never an
/// absence.
pub fn has_nonmetric_cycle_up_to(
    g: &EdgeLabelledGraph,
    max_vertices: usize,
    budget: u64,
) -> Result<Option<CycleWitness>> {
    if max_vertices < 3 {
        return Err(Error::InvalidArgument(format!(
            "cycle bound must be at least 3, got {max_vertices}"
        )));
    }
    if g.edge_count() == 0 {
        return Ok(None);
    }
    let w = Weights::new(g)?;
    let mut search = CycleSearch {
        g,
        w: &w,
        max_vertices,
        bound: 0,
        budget,
        nodes: 0,
        path: Vec::new(),
        on_path: vec![false; g.vertex_count()],
    };
    for start in 0..g.vertex_count() {
        search.bound = w.bound(start);
        search.path.push(start);
        search.on_path[start] = true;
        let found = search.extend(0)?;
        search.on_path[start] = false;
        search.path.pop();
        if found.is_some() {
            return Ok(found);
        }
    }
    Ok(None)
}

struct CycleSearch<'a> {
    g: &'a EdgeLabelledGraph,
    w: &'a Weights,
    max_vertices: usize,
    bound: u128,
    budget: u64,
    nodes: u64,
    path: Vec<usize>,
    on_path: Vec<bool>,
}

impl CycleSearch<'_> {
    fn extend(&mut self, length: u128) -> Result<Option<CycleWitness>> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(Error::BudgetExhausted(self.budget));
        }
        let (g, w) = (self.g, self.w);
        let start = self.path[0];
        let last = *self.path.last().expect("nonempty path");
        if self.path.len() >= 3 {
            if let Some(long) = w.get(g, last, start).filter(|&long| long > length) {
                return w.witness(g, &self.path, length, long).map(Some);
            }
        }
        if self.path.len() == self.max_vertices {
            return Ok(None);
        }
        for &(l, v) in &w.by_weight[last] {
            let len = length + l;
            if len >= self.bound {
                break;
            }
            if self.on_path[v] {
                continue;
            }
            self.path.push(v);
            self.on_path[v] = true;
            let found = self.extend(len);
            self.on_path[v] = false;
            self.path.pop();
            if let Some(c) = found? {
                return Ok(Some(c));
            }
        }
        Ok(None)
    }
}
