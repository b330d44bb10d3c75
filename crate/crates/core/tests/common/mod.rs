#![allow(dead_code)]

use eppa::{EdgeLabelledGraph, Label, PartialMap, VertexId};
use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;

pub fn v(s: &str) -> VertexId {
    VertexId::new(s)
}

pub fn graph(vertices: &[&str], edges: &[(&str, &str, &str)]) -> EdgeLabelledGraph {
    let edges: Vec<(VertexId, VertexId, Label)> = edges.iter().map(|&(x, y, l)| (v(x), v(y), l.parse().unwrap())).collect();
    EdgeLabelledGraph::new(vertices.iter().map(|x| v(x)), edges).unwrap()
}

/// `d(x, y) = a`, `d(y, z) = b`, `d(x, z) = c`.
pub fn triangle(a: &str, b: &str, c: &str) -> EdgeLabelledGraph {
    graph(&["x", "y", "z"], &[("x", "y", a), ("y", "z", b), ("x", "z", c)])
}

pub fn two_point() -> EdgeLabelledGraph {
    graph(&["a", "b"], &[("a", "b", "1")])
}

/// Four points with sides 1 and diagonals 2.
pub fn square() -> EdgeLabelledGraph {
    graph(
        &["a", "b", "c", "d"],
        &[("a", "b", "1"), ("b", "c", "1"), ("c", "d", "1"), ("a", "d", "1"), ("a", "c", "2"), ("b", "d", "2")],
    )
}

pub fn map(pairs: &[(&str, &str)]) -> PartialMap {
    PartialMap::new(pairs.iter().map(|&(x, y)| (v(x), v(y)))).unwrap()
}

/// Random graph on `2..=max_n` vertices with labels drawn from `1..=labels`.
/// `connected` threads a random spanning tree first.
pub fn random_graph(rng: &mut impl Rng, max_n: usize, labels: i64, density: f64, connected: bool) -> EdgeLabelledGraph {
    let n = rng.gen_range(2..=max_n);
    let names: Vec<String> = (0..n).map(|i| format!("v{i}")).collect();
    let mut edges = Vec::new();
    let mut present = vec![vec![false; n]; n];
    if connected {
        let mut order: Vec<usize> = (0..n).collect();
        order.shuffle(rng);
        for k in 1..n {
            let (a, b) = (order[k], order[rng.gen_range(0..k)]);
            present[a][b] = true;
            present[b][a] = true;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if present[i][j] || rng.gen_bool(density) {
                edges.push((VertexId::new(&names[i]), VertexId::new(&names[j]), Label::integer(rng.gen_range(1..=labels))));
            }
        }
    }
    EdgeLabelledGraph::new(names.iter().map(VertexId::new), edges).unwrap()
}

fn label_matrix(g: &EdgeLabelledGraph) -> Vec<Vec<Option<Label>>> {
    let n = g.vertex_count();
    (0..n).map(|i| (0..n).map(|j| if i == j { None } else { g.label(i, j) }).collect()).collect()
}

/// Lexicographically least automorphism (by images in vertex order) that
/// extends `phi`, by trying every permutation.
pub fn naive_extension(g: &EdgeLabelledGraph, phi: &PartialMap) -> Option<PartialMap> {
    let n = g.vertex_count();
    let m = label_matrix(g);
    let fixed: Vec<Option<usize>> = g.vertices().iter().map(|x| phi.get(x).map(|y| g.index_of(y).unwrap())).collect();
    (0..n).permutations(n).find_map(|p| {
        let agrees = (0..n).all(|i| fixed[i].is_none_or(|j| p[i] == j));
        let preserves = agrees && (0..n).all(|i| (0..n).all(|j| m[i][j] == m[p[i]][p[j]]));
        preserves.then(|| PartialMap::new((0..n).map(|i| (g.vertex(i).clone(), g.vertex(p[i]).clone()))).unwrap())
    })
}

/// All automorphisms, by trying every permutation.
pub fn naive_automorphisms(g: &EdgeLabelledGraph) -> Vec<PartialMap> {
    let n = g.vertex_count();
    let m = label_matrix(g);
    (0..n)
        .permutations(n)
        .filter(|p| (0..n).all(|i| (0..n).all(|j| m[i][j] == m[p[i]][p[j]])))
        .map(|p| PartialMap::new((0..n).map(|i| (g.vertex(i).clone(), g.vertex(p[i]).clone()))).unwrap())
        .collect()
}

/// Checks by hand that `f` maps `g` onto itself preserving every label and
/// every non-edge.
pub fn preserves_all_labels(g: &EdgeLabelledGraph, f: &PartialMap) -> bool {
    if f.len() != g.vertex_count() || !f.is_injective() {
        return false;
    }
    let idx: Option<Vec<usize>> = g.vertices().iter().map(|x| f.get(x).and_then(|y| g.index_of(y))).collect();
    let Some(idx) = idx else { return false };
    let n = g.vertex_count();
    (0..n).all(|i| (i + 1..n).all(|j| g.label(i, j) == g.label(idx[i], idx[j])))
}
