//! Brute-force oracles. Nothing here calls the construction's own checks:
//! labels are copied into a dense matrix and every verdict is recomputed on
//! it, so agreement with the pipeline is evidence rather than repetition.

use std::collections::{BTreeMap, BTreeSet, HashMap, VecDeque};
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::cycle_elim::LevelGraph;
use crate::error::{Error, Result};
use crate::graph::{EdgeLabelledGraph, PartialMap, VertexId};
use crate::label::Label;
use crate::pipeline::{extend_isometry, Witness};

pub const DEFAULT_SEARCH_BUDGET: u64 = 10_000_000;

/// Labels of a graph as a dense class matrix. Class 0 is "no edge"; class
/// `c > 0` is the `c`-th smallest label.
#[derive(Debug, Clone)]
pub struct Dense {
    ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    labels: Vec<Label>,
    denom: i64,
    /// Labels scaled by `denom`, indexed by class.
    weights: Vec<u128>,
    m: Vec<u16>,
}

impl Dense {
    pub fn of(g: &EdgeLabelledGraph) -> Result<Self> {
        let ids = g.vertices().to_vec();
        let index: HashMap<VertexId, usize> = ids.iter().cloned().enumerate().map(|(i, v)| (v, i)).collect();
        let labels: Vec<Label> = g.edges().map(|(_, _, l)| l).collect::<BTreeSet<_>>().into_iter().collect();
        if labels.len() >= u16::MAX as usize {
            return Err(Error::InvalidArgument("too many distinct labels".into()));
        }
        let mut denom: i64 = 1;
        for l in &labels {
            denom = denom
                .checked_mul(l.denom() / denom.gcd(&l.denom()))
                .ok_or(Error::Overflow("common denominator"))?;
        }
        let mut weights = vec![0u128];
        for l in &labels {
            let w = (l.numer() as i128) * (denom / l.denom()) as i128;
            weights.push(u128::try_from(w).map_err(|_| Error::Overflow("scaled label"))?);
        }
        let n = ids.len();
        let mut m = vec![0u16; n * n];
        for (i, j, l) in g.edges() {
            let c = labels.binary_search(&l).expect("collected") as u16 + 1;
            m[i * n + j] = c;
            m[j * n + i] = c;
        }
        Ok(Dense {
            ids,
            index,
            labels,
            denom,
            weights,
            m,
        })
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    fn at(&self, i: usize, j: usize) -> u16 {
        self.m[i * self.ids.len() + j]
    }

    pub fn label(&self, i: usize, j: usize) -> Option<Label> {
        match self.at(i, j) {
            0 => None,
            c => Some(self.labels[c as usize - 1]),
        }
    }

    fn idx(&self, v: &VertexId) -> Option<usize> {
        self.index.get(v).copied()
    }

    fn map_indices(&self, f: &PartialMap) -> Option<Vec<(usize, usize)>> {
        f.pairs().map(|(x, y)| Some((self.idx(x)?, self.idx(y)?))).collect()
    }

    /// Neighbours of each vertex sorted by ascending label.
    fn sparse(&self) -> Vec<Vec<(u128, usize)>> {
        let n = self.len();
        (0..n)
            .map(|i| {
                let mut row: Vec<(u128, usize)> = (0..n)
                    .filter(|&j| self.at(i, j) != 0)
                    .map(|j| (self.weights[self.at(i, j) as usize], j))
                    .collect();
                row.sort_unstable();
                row
            })
            .collect()
    }
}

/// True iff `f` is a bijection of the vertex set preserving labels and
/// non-edges.
pub fn is_automorphism(d: &Dense, f: &PartialMap) -> bool {
    let n = d.len();
    if f.len() != n {
        return false;
    }
    let Some(pairs) = d.map_indices(f) else {
        return false;
    };
    let mut img = vec![usize::MAX; n];
    let mut hit = vec![false; n];
    for (x, y) in pairs {
        if hit[y] {
            return false;
        }
        hit[y] = true;
        img[x] = y;
    }
    (0..n).all(|i| (i + 1..n).all(|j| d.at(i, j) == d.at(img[i], img[j])))
}

/// True iff `f` is injective and preserves labels and non-edges between
/// points of its domain.
pub fn is_partial_isomorphism(d: &Dense, f: &PartialMap) -> bool {
    let Some(pairs) = d.map_indices(f) else {
        return false;
    };
    let images: BTreeSet<usize> = pairs.iter().map(|p| p.1).collect();
    images.len() == pairs.len()
        && pairs
            .iter()
            .enumerate()
            .all(|(p, &(x, y))| pairs[p + 1..].iter().all(|&(u, v)| d.at(x, u) == d.at(y, v)))
}

/// Every partial isomorphism between subsets of `copy`, the empty map
/// included.
pub fn partial_isometries(g: &EdgeLabelledGraph, copy: &[VertexId]) -> Result<Vec<PartialMap>> {
    let d = Dense::of(g)?;
    let mut pts = Vec::with_capacity(copy.len());
    for v in copy {
        pts.push(d.idx(v).ok_or_else(|| Error::UnknownVertex(v.clone()))?);
    }
    pts.sort_unstable();
    pts.dedup();
    let mut out = Vec::new();
    let mut chosen: Vec<(usize, usize)> = Vec::new();
    let mut used = vec![false; pts.len()];
    partial_isometries_from(&d, &pts, 0, &mut chosen, &mut used, &mut out);
    Ok(out)
}

fn partial_isometries_from(
    d: &Dense,
    pts: &[usize],
    next: usize,
    chosen: &mut Vec<(usize, usize)>,
    used: &mut [bool],
    out: &mut Vec<PartialMap>,
) {
    if next == pts.len() {
        out.push(
            PartialMap::new(chosen.iter().map(|&(x, y)| (d.ids[x].clone(), d.ids[y].clone()))).expect("injective"),
        );
        return;
    }
    let x = pts[next];
    partial_isometries_from(d, pts, next + 1, chosen, used, out);
    for (q, &y) in pts.iter().enumerate() {
        if used[q] || !chosen.iter().all(|&(u, v)| d.at(x, u) == d.at(y, v)) {
            continue;
        }
        used[q] = true;
        chosen.push((x, y));
        partial_isometries_from(d, pts, next + 1, chosen, used, out);
        chosen.pop();
        used[q] = false;
    }
}

/// The lexicographically least automorphism of `b` extending `phi` (images
/// listed in vertex order), `None` if there is none. Running out of `budget`
/// search nodes is an error.
pub fn search_extension(b: &EdgeLabelledGraph, phi: &PartialMap, budget: u64) -> Result<Option<PartialMap>> {
    let d = Dense::of(b)?;
    search_extension_dense(&d, phi, budget).map(|r| r.0)
}

/// As [`search_extension`], also returning the number of nodes visited.
fn search_extension_dense(d: &Dense, phi: &PartialMap, budget: u64) -> Result<(Option<PartialMap>, u64)> {
    if !is_partial_isomorphism(d, phi) {
        return Err(Error::NotPartialAutomorphism(format!("{phi:?}")));
    }
    let n = d.len();
    let mut src = vec![0u32; n];
    let mut dst = vec![0u32; n];
    for (p, (x, y)) in d.map_indices(phi).expect("checked above").into_iter().enumerate() {
        src[x] = p as u32 + 1;
        dst[y] = p as u32 + 1;
    }
    let mut s = ExtSearch { d, budget, nodes: 0 };
    let found = if refine(d, &mut src, &mut dst) {
        s.run(src, dst)?
    } else {
        None
    };
    let map = found.map(|img| PartialMap::new((0..n).map(|v| (d.ids[v].clone(), d.ids[img[v]].clone()))).expect("bijection"));
    Ok((map, s.nodes))
}

fn mix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// Refines the colourings `src` and `dst` together until stable: a vertex's
/// new colour is its old colour plus the multiset of (label, colour) pairs
/// around it. Both sides share the colour names, so an automorphism sending
/// the `src` colouring to the `dst` one keeps doing so. Returns false once
/// the two colour histograms differ.
///
/// Multisets are compared by a commutative hash. A collision only merges
/// cells, which loses pruning but never a solution.
fn refine(d: &Dense, src: &mut [u32], dst: &mut [u32]) -> bool {
    let n = d.len();
    let distinct = |c: &[u32]| c.iter().collect::<BTreeSet<_>>().len();
    let mut cells = distinct(src);
    loop {
        let mut names: HashMap<(u32, u64), u32> = HashMap::new();
        let mut hist: HashMap<u32, i64> = HashMap::new();
        let mut next_src = vec![0u32; n];
        let mut next_dst = vec![0u32; n];
        for (colours, out, sign) in [(&*src, &mut next_src, 1i64), (&*dst, &mut next_dst, -1i64)] {
            for x in 0..n {
                let row = &d.m[x * n..(x + 1) * n];
                let mut h = 0u64;
                for (y, &c) in row.iter().enumerate() {
                    if y != x {
                        h = h.wrapping_add(mix(u64::from(c) << 32 | u64::from(colours[y])));
                    }
                }
                let fresh = names.len() as u32;
                let name = *names.entry((colours[x], h)).or_insert(fresh);
                out[x] = name;
                *hist.entry(name).or_default() += sign;
            }
        }
        if hist.values().any(|&c| c != 0) {
            return false;
        }
        src.copy_from_slice(&next_src);
        dst.copy_from_slice(&next_dst);
        let now = distinct(src);
        if now == cells {
            return true;
        }
        cells = now;
    }
}

struct ExtSearch<'a> {
    d: &'a Dense,
    budget: u64,
    nodes: u64,
}

impl ExtSearch<'_> {
    /// Searches below stable, matching colourings. Vertices are decided in
    /// index order with candidate images ascending, so the first solution is
    /// the lexicographically least.
    fn run(&mut self, src: Vec<u32>, dst: Vec<u32>) -> Result<Option<Vec<usize>>> {
        let n = self.d.len();
        let mut size: HashMap<u32, usize> = HashMap::new();
        for &c in &src {
            *size.entry(c).or_default() += 1;
        }
        let Some(v) = (0..n).find(|&v| size[&src[v]] > 1) else {
            // discrete: the colouring determines the only candidate
            let mut img = vec![0usize; n];
            let at: HashMap<u32, usize> = dst.iter().enumerate().map(|(w, &c)| (c, w)).collect();
            for x in 0..n {
                img[x] = at[&src[x]];
            }
            let ok = (0..n).all(|i| (i + 1..n).all(|j| self.d.at(i, j) == self.d.at(img[i], img[j])));
            return Ok(ok.then_some(img));
        };
        let fresh = src.iter().chain(&dst).max().copied().unwrap_or(0) + 1;
        for w in (0..n).filter(|&w| dst[w] == src[v]) {
            self.nodes += 1;
            if self.nodes > self.budget {
                return Err(Error::BudgetExhausted(self.budget));
            }
            let (mut s2, mut d2) = (src.clone(), dst.clone());
            s2[v] = fresh;
            d2[w] = fresh;
            if refine(self.d, &mut s2, &mut d2) {
                if let Some(img) = self.run(s2, d2)? {
                    return Ok(Some(img));
                }
            }
        }
        Ok(None)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// A search ran out of budget before deciding.
    Inconclusive,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Counterexample {
    Map { map: PartialMap, detail: String },
    Cycle { vertices: Vec<VertexId> },
    Vertices { vertices: Vec<VertexId>, detail: String },
}

impl fmt::Display for Counterexample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |v: &[VertexId]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(", ");
        match self {
            Counterexample::Map { map, detail } => write!(f, "map {}: {detail}", serde_json::to_string(map).expect("map serialises")),
            Counterexample::Cycle { vertices } => write!(f, "non-metric cycle [{}]", list(vertices)),
            Counterexample::Vertices { vertices, detail } => write!(f, "[{}]: {detail}", list(vertices)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    pub counterexample: Option<Counterexample>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub checks: Vec<Check>,
    pub totals: BTreeMap<String, u64>,
    pub budget_exhausted: bool,
}

impl VerificationReport {
    /// Every check passed and no search ran out of budget.
    pub fn passed(&self) -> bool {
        !self.budget_exhausted && self.checks.iter().all(|c| c.verdict == Verdict::Pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.verdict == Verdict::Fail)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    fn record(&mut self, name: impl Into<String>, outcome: Outcome) {
        let (verdict, counterexample) = match outcome {
            Ok(()) => (Verdict::Pass, None),
            Err(Failure::Found(c)) => (Verdict::Fail, Some(c)),
            Err(Failure::Budget) => {
                self.budget_exhausted = true;
                (Verdict::Inconclusive, None)
            }
        };
        self.checks.push(Check {
            name: name.into(),
            verdict,
            counterexample,
        });
    }

    fn count(&mut self, key: &str, by: u64) {
        *self.totals.entry(key.to_string()).or_default() += by;
    }
}

impl fmt::Display for VerificationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match c.verdict {
                Verdict::Pass => "PASS",
                Verdict::Fail => "FAIL",
                Verdict::Inconclusive => "INCONCLUSIVE",
            };
            match &c.counterexample {
                Some(ce) => writeln!(f, "{tag} {}: {ce}", c.name)?,
                None => writeln!(f, "{tag} {}", c.name)?,
            }
        }
        for (k, v) in &self.totals {
            writeln!(f, "{k}: {v}")?;
        }
        write!(
            f,
            "result: {}",
            if self.passed() {
                "verified"
            } else if self.failures().next().is_some() {
                "failed"
            } else {
                "budget exhausted"
            }
        )
    }
}

enum Failure {
    Found(Counterexample),
    Budget,
}

type Outcome = std::result::Result<(), Failure>;

fn vertices_failure(vertices: Vec<VertexId>, detail: impl Into<String>) -> Failure {
    Failure::Found(Counterexample::Vertices {
        vertices,
        detail: detail.into(),
    })
}

fn map_failure(map: &PartialMap, detail: impl Into<String>) -> Failure {
    Failure::Found(Counterexample::Map {
        map: map.clone(),
        detail: detail.into(),
    })
}

/// Checks that every partial isometry of the copy inside `b` extends to an
/// automorphism of `b`. Each extension search gets `budget` nodes.
pub fn verify_eppa(b: &EdgeLabelledGraph, copy: &[VertexId], budget: u64) -> Result<VerificationReport> {
    let d = Dense::of(b)?;
    let mut report = VerificationReport::default();
    let maps = partial_isometries(b, copy)?;
    report.count("partial maps", maps.len() as u64);
    let mut outcome = Ok(());
    for phi in &maps {
        match search_extension_dense(&d, phi, budget) {
            Ok((found, nodes)) => {
                report.count("search nodes", nodes);
                if found.is_none() {
                    outcome = Err(map_failure(phi, "no automorphism extends it"));
                    break;
                }
            }
            Err(Error::BudgetExhausted(_)) => {
                outcome = Err(Failure::Budget);
            }
            Err(e) => return Err(e),
        }
    }
    report.record("every partial isometry of the copy extends", outcome);
    Ok(report)
}

/// Re-derives one lifted level from the level below: bad sets, valuation
/// domains, vertex table, edge rule, the projection of the copy, and the
/// absence of non-metric cycles on at most `next.level` vertices.
pub fn check_lifted_level(prev: &LevelGraph, next: &LevelGraph, budget: u64) -> Result<VerificationReport> {
    let (pd, nd) = (Dense::of(&prev.graph)?, Dense::of(&next.graph)?);
    let mut r = VerificationReport::default();
    let i = next.level;
    r.record(format!("level {i}: stored structure re-derives"), lifted_level_outcome(prev, &pd, next, &nd));
    r.record(format!("level {i}: no non-metric cycle on at most {i} vertices"), cycle_outcome(&nd, i, budget));
    Ok(r)
}

/// Triangle inequalities and completeness, on class tables.
fn metric_outcome(d: &Dense) -> Outcome {
    let n = d.len();
    let c = d.weights.len();
    // ok[a][b][x]: weight x is at most weight a + weight b
    let mut ok = vec![false; c * c * c];
    for a in 1..c {
        for b in 1..c {
            for x in 1..c {
                ok[(a * c + b) * c + x] = d.weights[x] <= d.weights[a] + d.weights[b];
            }
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let ij = d.at(i, j) as usize;
            if ij == 0 {
                return Err(vertices_failure(vec![d.ids[i].clone(), d.ids[j].clone()], "pair without a distance"));
            }
            for k in j + 1..n {
                let (ik, jk) = (d.at(i, k) as usize, d.at(j, k) as usize);
                if ik == 0 || jk == 0 {
                    continue;
                }
                let good = ok[(ij * c + jk) * c + ik] && ok[(ij * c + ik) * c + jk] && ok[(ik * c + jk) * c + ij];
                if !good {
                    return Err(vertices_failure(
                        vec![d.ids[i].clone(), d.ids[j].clone(), d.ids[k].clone()],
                        "triangle inequality fails",
                    ));
                }
            }
        }
    }
    Ok(())
}

/// Independent metric space check.
pub fn is_metric(g: &EdgeLabelledGraph) -> Result<bool> {
    Ok(metric_outcome(&Dense::of(g)?).is_ok())
}

fn cycle_outcome(d: &Dense, max_vertices: usize, budget: u64) -> Outcome {
    match short_nonmetric_cycle(d, max_vertices, budget) {
        Ok(None) => Ok(()),
        Ok(Some(c)) => Err(Failure::Found(Counterexample::Cycle {
            vertices: c.into_iter().map(|x| d.ids[x].clone()).collect(),
        })),
        Err(()) => Err(Failure::Budget),
    }
}

/// Non-metric cycle on at most `max_vertices` vertices, found by plain DFS.
fn short_nonmetric_cycle(d: &Dense, max_vertices: usize, budget: u64) -> std::result::Result<Option<Vec<usize>>, ()> {
    if max_vertices < 3 {
        return Ok(None);
    }
    let adj = d.sparse();
    let mut nodes = 0u64;
    let mut path = Vec::new();
    let mut on = vec![false; d.len()];
    fn go(
        d: &Dense,
        adj: &[Vec<(u128, usize)>],
        max: usize,
        budget: u64,
        nodes: &mut u64,
        path: &mut Vec<usize>,
        on: &mut [bool],
        len: u128,
    ) -> std::result::Result<bool, ()> {
        *nodes += 1;
        if *nodes > budget {
            return Err(());
        }
        let (first, last) = (path[0], *path.last().expect("nonempty"));
        if path.len() >= 3 && d.at(first, last) != 0 && d.weights[d.at(first, last) as usize] > len {
            return Ok(true);
        }
        if path.len() == max {
            return Ok(false);
        }
        let cap = adj[first].last().map_or(0, |e| e.0);
        for &(w, v) in &adj[last] {
            if len + w >= cap {
                break;
            }
            if on[v] {
                continue;
            }
            path.push(v);
            on[v] = true;
            if go(d, adj, max, budget, nodes, path, on, len + w)? {
                return Ok(true);
            }
            on[v] = false;
            path.pop();
        }
        Ok(false)
    }
    for s in 0..d.len() {
        path.push(s);
        on[s] = true;
        if go(d, &adj, max_vertices, budget, &mut nodes, &mut path, &mut on, 0)? {
            return Ok(Some(path));
        }
        on[s] = false;
        path.pop();
    }
    Ok(None)
}

/// Vertex sets of size `size` inducing a non-metric cycle, as sorted index
/// lists, found by extending chordless paths.
fn induced_nonmetric_sets(d: &Dense, size: usize) -> BTreeSet<Vec<usize>> {
    let adj = d.sparse();
    let mut out = BTreeSet::new();
    let mut path = Vec::new();
    fn go(d: &Dense, adj: &[Vec<(u128, usize)>], size: usize, path: &mut Vec<usize>, len: u128, out: &mut BTreeSet<Vec<usize>>) {
        let first = path[0];
        let last = *path.last().expect("nonempty");
        let cap = adj[first].last().map_or(0, |e| e.0);
        for &(w, v) in &adj[last] {
            if len + w >= cap {
                break;
            }
            if path.contains(&v) {
                continue;
            }
            // only `last` may be adjacent to v among the earlier vertices,
            // except the first vertex when v closes the cycle
            let closes = path.len() + 1 == size;
            let inner = if path.len() >= 2 { &path[1..path.len() - 1] } else { &[][..] };
            let chord = inner.iter().any(|&p| d.at(p, v) != 0);
            let to_first = d.at(first, v);
            if chord || (path.len() > 1 && !closes && to_first != 0) {
                continue;
            }
            if closes {
                if to_first != 0 && d.weights[to_first as usize] > len + w {
                    let mut s = path.clone();
                    s.push(v);
                    s.sort_unstable();
                    out.insert(s);
                }
            } else {
                path.push(v);
                go(d, adj, size, path, len + w, out);
                path.pop();
            }
        }
    }
    for s in 0..d.len() {
        path.push(s);
        go(d, &adj, size, &mut path, 0, &mut out);
        path.pop();
    }
    out
}

/// All-pairs shortest paths, `None` for unreachable pairs.
fn floyd_warshall(d: &Dense) -> Vec<Option<u128>> {
    let n = d.len();
    let mut dist: Vec<Option<u128>> = (0..n * n)
        .map(|p| {
            let (i, j) = (p / n, p % n);
            if i == j {
                Some(0)
            } else {
                match d.m[p] {
                    0 => None,
                    c => Some(d.weights[c as usize]),
                }
            }
        })
        .collect();
    for k in 0..n {
        for i in 0..n {
            let Some(ik) = dist[i * n + k] else { continue };
            for j in 0..n {
                if let Some(kj) = dist[k * n + j] {
                    let cand = ik + kj;
                    let cell = &mut dist[i * n + j];
                    if cell.is_none_or(|c| cand < c) {
                        *cell = Some(cand);
                    }
                }
            }
        }
    }
    dist
}

/// `f` maps `a` isometrically into `b`: total on `a`, injective, and
/// preserving every label and non-edge.
fn embedding_outcome(a: &Dense, b: &Dense, f: &PartialMap) -> Outcome {
    let mut img = Vec::with_capacity(a.len());
    for x in &a.ids {
        let y = f.get(x).ok_or_else(|| vertices_failure(vec![x.clone()], "not embedded"))?;
        let yi = b.idx(y).ok_or_else(|| vertices_failure(vec![x.clone(), y.clone()], "image is not a vertex"))?;
        img.push(yi);
    }
    for i in 0..a.len() {
        for j in i + 1..a.len() {
            if img[i] == img[j] || a.label(i, j) != b.label(img[i], img[j]) {
                return Err(map_failure(f, format!("distance between {} and {} is not preserved", a.ids[i], a.ids[j])));
            }
        }
    }
    Ok(())
}

fn binomial(n: usize, k: usize) -> Option<u128> {
    if k > n {
        return Some(0);
    }
    let mut r: u128 = 1;
    for i in 0..k.min(n - k) {
        r = r.checked_mul((n - i) as u128)? / (i as u128 + 1);
    }
    Some(r)
}

fn first_level_outcome(w: &Witness, input: &Dense, level: &LevelGraph, d: &Dense) -> Outcome {
    let Some(eppa) = &w.eppa else {
        return Err(vertices_failure(Vec::new(), "first level without a set assignment"));
    };
    let sa = &eppa.assignment;
    let m = sa.universe.len();
    let k = sa.k;
    if sa.spectrum != input.labels {
        return Err(vertices_failure(Vec::new(), "assignment spectrum differs from the input's"));
    }
    // the stored subsets, by vertex
    let mut seen: HashMap<Vec<usize>, VertexId> = HashMap::new();
    let mut sets = Vec::with_capacity(d.len());
    for (v, s) in level.graph.vertices().iter().zip(&eppa.subsets) {
        let uniq: BTreeSet<usize> = s.iter().copied().collect();
        if uniq.len() != k || uniq.iter().any(|&e| e >= m) {
            return Err(vertices_failure(vec![v.clone()], format!("not a {k}-subset of the universe")));
        }
        let s: Vec<usize> = uniq.into_iter().collect();
        if let Some(other) = seen.insert(s.clone(), v.clone()) {
            return Err(vertices_failure(vec![other, v.clone()], "same subset twice"));
        }
        sets.push(s);
    }
    if binomial(m, k) != Some(d.len() as u128) {
        return Err(vertices_failure(Vec::new(), format!("{} vertices, expected C({m}, {k})", d.len())));
    }
    // edges from intersection sizes
    let masks: Vec<Vec<u64>> = sets
        .iter()
        .map(|s| {
            let mut b = vec![0u64; m.div_ceil(64)];
            for &e in s {
                b[e / 64] |= 1 << (e % 64);
            }
            b
        })
        .collect();
    for i in 0..d.len() {
        for j in i + 1..d.len() {
            let meet: u32 = masks[i].iter().zip(&masks[j]).map(|(a, b)| (a & b).count_ones()).sum();
            let expect = match meet as usize {
                0 => None,
                t => sa.spectrum.get(t - 1).copied(),
            };
            if d.label(i, j) != expect {
                return Err(vertices_failure(vec![d.ids[i].clone(), d.ids[j].clone()], "edge disagrees with intersection size"));
            }
        }
    }
    // the input sits on psi
    for x in &input.ids {
        let psi = sa.psi.get(x).ok_or_else(|| vertices_failure(vec![x.clone()], "no set assigned"))?;
        let image = level.base_embedding.get(x).and_then(|y| d.idx(y));
        let mut psi = psi.clone();
        psi.sort_unstable();
        if image.map(|i| &sets[i]) != Some(&psi) {
            return Err(vertices_failure(vec![x.clone()], "embedded vertex does not carry its assigned set"));
        }
    }
    Ok(())
}

fn lifted_level_outcome(prev: &LevelGraph, pd: &Dense, next: &LevelGraph, nd: &Dense) -> Outcome {
    let lift = next
        .lift
        .as_ref()
        .ok_or_else(|| vertices_failure(Vec::new(), "level carries no lift data"))?;
    let i = prev.level;
    // bad sets recomputed here, keyed like the stored valuations
    let own: BTreeSet<Vec<usize>> = induced_nonmetric_sets(pd, i + 1);
    let key = |s: &[usize]| -> String {
        let members: Vec<&VertexId> = s.iter().map(|&x| &pd.ids[x]).collect();
        serde_json::to_string(&members).expect("strings serialise")
    };
    let stored: BTreeSet<String> = lift.bad_sets.iter().map(|b| b.key()).collect();
    let expected: BTreeSet<String> = own.iter().map(|s| key(s)).collect();
    if let Some(diff) = expected.symmetric_difference(&stored).next() {
        let vertices: Vec<VertexId> = serde_json::from_str(diff).unwrap_or_default();
        return Err(vertices_failure(vertices, "stored bad sets disagree with a fresh search"));
    }
    // long edge of each bad set: the pair whose label exceeds the others' sum
    let mut through: Vec<Vec<(String, Vec<usize>, (usize, usize))>> = vec![Vec::new(); pd.len()];
    for s in &own {
        let mut long = (s[0], s[1]);
        let mut best = 0;
        let mut total = 0;
        for (p, &a) in s.iter().enumerate() {
            for &b in &s[p + 1..] {
                let w = pd.weights[pd.at(a, b) as usize];
                total += w;
                if w > best {
                    best = w;
                    long = (a, b);
                }
            }
        }
        debug_assert!(best > total - best);
        for &x in s {
            through[x].push((key(s), s.clone(), long));
        }
    }
    // vertex table: exactly one vertex per (base, valuation)
    let mut vals: Vec<(usize, BTreeMap<String, u8>)> = Vec::with_capacity(nd.len());
    let mut seen: HashMap<(usize, Vec<u8>), usize> = HashMap::new();
    for (v, id) in nd.ids.iter().enumerate() {
        let val = lift.valuation(v);
        let base = pd
            .idx(&val.owner)
            .ok_or_else(|| vertices_failure(vec![id.clone()], "projects outside the level below"))?;
        let keys: BTreeSet<&String> = val.bits.keys().collect();
        let want: BTreeSet<&String> = through[base].iter().map(|t| &t.0).collect();
        if keys != want || val.bits.values().any(|&b| b > 1) {
            return Err(vertices_failure(vec![id.clone()], "valuation domain is not the bad sets through its base"));
        }
        let bits: Vec<u8> = val.bits.values().copied().collect();
        if let Some(&other) = seen.get(&(base, bits.clone())) {
            return Err(vertices_failure(vec![nd.ids[other].clone(), id.clone()], "same base and valuation twice"));
        }
        seen.insert((base, bits), v);
        vals.push((base, val.bits));
    }
    let expected_count: u128 = through.iter().map(|t| 1u128 << t.len().min(127)).sum();
    if expected_count != nd.len() as u128 {
        return Err(vertices_failure(Vec::new(), format!("{} vertices, expected {expected_count}", nd.len())));
    }
    // edge rule
    for u in 0..nd.len() {
        let (bu, vu) = (&vals[u].0, &vals[u].1);
        for v in u + 1..nd.len() {
            let (bv, vv) = (&vals[v].0, &vals[v].1);
            let mut expect = if bu == bv { None } else { pd.label(*bu, *bv) };
            if expect.is_some() {
                for (k, set, long) in &through[*bu] {
                    if !set.contains(bv) {
                        continue;
                    }
                    let is_long = (*long == (*bu, *bv)) || (*long == (*bv, *bu));
                    if (vu[k] != vv[k]) != is_long {
                        expect = None;
                        break;
                    }
                }
            }
            if nd.label(u, v) != expect {
                return Err(vertices_failure(vec![nd.ids[u].clone(), nd.ids[v].clone()], "edge disagrees with the valuation rule"));
            }
        }
    }
    // the copy projects onto the copy below
    for (a, y) in next.base_embedding.pairs() {
        let yi = nd.idx(y).ok_or_else(|| vertices_failure(vec![a.clone(), y.clone()], "embedded outside the level"))?;
        if Some(&pd.ids[vals[yi].0]) != prev.base_embedding.get(a) {
            return Err(vertices_failure(vec![a.clone(), y.clone()], "copy does not project onto the copy below"));
        }
    }
    Ok(())
}

/// Re-derives every stored part of a witness and tests the extension
/// operator against the search oracle on every partial isometry of the copy.
pub fn cross_check(w: &Witness, budget: u64) -> Result<VerificationReport> {
    let mut r = VerificationReport::default();
    let input = Dense::of(&w.input)?;
    r.record("input is a metric space", metric_outcome(&input));

    let ratio_ok = {
        let (lo, hi) = (input.weights.get(1), input.weights.last());
        match (lo, hi) {
            (Some(&lo), Some(&hi)) => (w.n as u128) * lo > hi && ((w.n as u128) - 1) * lo <= hi,
            _ => w.n == 2,
        }
    };
    r.record(
        "level count is floor(max/min) + 1",
        if ratio_ok { Ok(()) } else { Err(vertices_failure(Vec::new(), format!("N = {}", w.n))) },
    );
    let levels_ok = if w.input.vertex_count() == 1 {
        w.levels.is_empty()
    } else {
        w.levels.len() + 1 == w.n && w.levels.iter().enumerate().all(|(p, l)| l.level == p + 2)
    };
    r.record(
        "one level for each of 2..N",
        if levels_ok { Ok(()) } else { Err(vertices_failure(Vec::new(), format!("{} levels for N = {}", w.levels.len(), w.n))) },
    );

    let dense: Vec<Dense> = w.levels.iter().map(|l| Dense::of(&l.graph)).collect::<Result<_>>()?;
    for (p, level) in w.levels.iter().enumerate() {
        let i = level.level;
        let d = &dense[p];
        r.count("level vertices", d.len() as u64);
        let structure = if p == 0 {
            first_level_outcome(w, &input, level, d)
        } else {
            lifted_level_outcome(&w.levels[p - 1], &dense[p - 1], level, d)
        };
        r.record(format!("level {i}: stored structure re-derives"), structure);
        r.record(format!("level {i}: input embeds isometrically"), embedding_outcome(&input, d, &level.base_embedding));
        r.record(format!("level {i}: no non-metric cycle on at most {i} vertices"), cycle_outcome(d, i, budget));
    }

    // component and completion
    let (top, top_d) = match (w.levels.last(), dense.last()) {
        (Some(l), Some(d)) => (Some(l), Some(d)),
        _ => (None, None),
    };
    let component_outcome = match (top, top_d) {
        (Some(top), Some(d)) => {
            let mut seen = vec![false; d.len()];
            let mut queue: VecDeque<usize> = top.base_embedding.image().into_iter().filter_map(|v| d.idx(v)).collect();
            for &s in &queue {
                seen[s] = true;
            }
            while let Some(x) = queue.pop_front() {
                for y in 0..d.len() {
                    if !seen[y] && d.at(x, y) != 0 {
                        seen[y] = true;
                        queue.push_back(y);
                    }
                }
            }
            let own: BTreeSet<&VertexId> = (0..d.len()).filter(|&x| seen[x]).map(|x| &d.ids[x]).collect();
            let stored: BTreeSet<&VertexId> = w.component.iter().collect();
            match own.symmetric_difference(&stored).next() {
                None if stored.len() == w.component.len() => Ok(()),
                None => Err(vertices_failure(Vec::new(), "component lists a vertex twice")),
                Some(v) => Err(vertices_failure(vec![(*v).clone()], "component membership is wrong")),
            }
        }
        _ => {
            if w.component == w.input.vertices() {
                Ok(())
            } else {
                Err(vertices_failure(w.component.clone(), "single point witness has a different component"))
            }
        }
    };
    r.record("component of the copy in the top level", component_outcome);

    let fin = Dense::of(&w.final_graph)?;
    let completion_outcome = match top {
        Some(top) => {
            let sub = top.graph.induced_subgraph(w.component.iter().filter(|v| top.graph.contains(v)));
            match sub {
                Err(e) => Err(vertices_failure(Vec::new(), e.to_string())),
                Ok(sub) => {
                    let cd = Dense::of(&sub)?;
                    let dist = floyd_warshall(&cd);
                    if cd.ids != fin.ids {
                        Err(vertices_failure(Vec::new(), "final vertex set is not the component"))
                    } else {
                        let n = cd.len();
                        let mut bad = None;
                        'outer: for i in 0..n {
                            for j in i + 1..n {
                                let got = match fin.at(i, j) {
                                    0 => None,
                                    c => Some(fin.labels[c as usize - 1]),
                                };
                                let want = dist[i * n + j].and_then(|s| Label::from_scaled(s, cd.denom));
                                if got != want {
                                    bad = Some((i, j));
                                    break 'outer;
                                }
                            }
                        }
                        match bad {
                            None => Ok(()),
                            Some((i, j)) => Err(vertices_failure(
                                vec![fin.ids[i].clone(), fin.ids[j].clone()],
                                "final distance is not the shortest path length",
                            )),
                        }
                    }
                }
            }
        }
        None => {
            if w.final_graph == w.input {
                Ok(())
            } else {
                Err(vertices_failure(Vec::new(), "single point witness is not the input"))
            }
        }
    };
    r.record("final graph is the shortest path completion of the component", completion_outcome);
    r.record("final graph is a metric space", metric_outcome(&fin));
    let same_copy = match top {
        Some(top) if top.base_embedding != w.final_embedding => {
            Err(map_failure(&w.final_embedding, "final embedding differs from the top level's"))
        }
        _ => Ok(()),
    };
    r.record("final embedding is the top level's", same_copy);
    r.record("input embeds isometrically into the final graph", embedding_outcome(&input, &fin, &w.final_embedding));

    // extensions
    let copy: Vec<VertexId> = w.final_embedding.image().into_iter().filter(|v| fin.idx(v).is_some()).cloned().collect();
    let maps = partial_isometries(&w.final_graph, &copy)?;
    r.count("partial maps", maps.len() as u64);
    let mut constructive = Ok(());
    let mut oracle = Ok(());
    for phi in &maps {
        if constructive.is_ok() {
            match extend_isometry(w, phi) {
                Ok(theta) if theta.extends(phi) && is_automorphism(&fin, &theta) => {}
                Ok(_) => constructive = Err(map_failure(phi, "returned map is not an extending isometry")),
                Err(e) => constructive = Err(map_failure(phi, format!("extension failed: {e}"))),
            }
        }
        if matches!(oracle, Ok(())) {
            match search_extension_dense(&fin, phi, budget) {
                Ok((Some(_), nodes)) => r.count("search nodes", nodes),
                Ok((None, nodes)) => {
                    r.count("search nodes", nodes);
                    oracle = Err(map_failure(phi, "no automorphism of the final graph extends it"));
                }
                Err(Error::BudgetExhausted(_)) => oracle = Err(Failure::Budget),
                Err(e) => oracle = Err(map_failure(phi, e.to_string())),
            }
        }
    }
    r.record("constructed extensions are isometries extending their input", constructive);
    r.record("search finds an extension for every partial isometry", oracle);
    Ok(r)
}
