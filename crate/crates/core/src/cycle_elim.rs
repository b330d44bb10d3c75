//! One elimination step: from a level graph `C_i` build `C_{i+1}`, whose
//! vertices are pairs `(x, χ)` of a vertex of `C_i` and a 0/1 valuation of
//! the bad sets through `x`. The edge rule unwinds every non-metric cycle on
//! `i + 1` vertices into a cycle twice as long: across the long edge the bits
//! must differ, across every other edge they must agree.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::completion::{find_induced_nonmetric_cycles, for_each_induced_nonmetric_cycle, CycleWitness};
use crate::error::{Error, Result};
use crate::graph::{check_map, EdgeLabelledGraph, MapMode, PartialMap, VertexId};
use crate::label::Label;
use crate::set_repr::DEFAULT_EDGE_CAP;

/// Vertex set of `C_i` of size `i + 1` on which `C_i` induces a non-metric cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BadSet {
    /// Sorted.
    pub members: Vec<VertexId>,
    pub long_edge: (VertexId, VertexId),
    pub cycle: CycleWitness,
}

impl BadSet {
    fn from_cycle(cycle: CycleWitness) -> Self {
        BadSet {
            members: cycle.members(),
            long_edge: cycle.long_edge.clone(),
            cycle,
        }
    }

    /// Canonical identity, the JSON encoding of the sorted member list.
    pub fn key(&self) -> String {
        serde_json::to_string(&self.members).expect("strings serialise")
    }

    pub fn is_long_edge(&self, x: &VertexId, y: &VertexId) -> bool {
        self.cycle.is_long_edge(x, y)
    }

    /// True iff `{x, y}` are consecutive on the cycle (long edge included).
    pub fn is_cycle_edge(&self, x: &VertexId, y: &VertexId) -> bool {
        let v = &self.cycle.vertices;
        let n = v.len();
        (0..n).any(|p| {
            let (a, b) = (&v[p], &v[(p + 1) % n]);
            (a == x && b == y) || (a == y && b == x)
        })
    }
}

/// All bad sets of `ci` at level `i`, i.e. induced non-metric cycles on
/// `i + 1` vertices, in canonical order.
pub fn bad_sets(ci: &EdgeLabelledGraph, i: usize) -> Result<Vec<BadSet>> {
    if i < 2 {
        return Err(Error::InvalidArgument(format!("level must be at least 2, got {i}")));
    }
    Ok(find_induced_nonmetric_cycles(ci, i + 1)?
        .into_iter()
        .map(BadSet::from_cycle)
        .collect())
}

/// [`bad_sets`], giving up as soon as the lifted level would have more than
/// `vertex_cap` vertices.
fn bad_sets_within(ci: &EdgeLabelledGraph, i: usize, vertex_cap: usize) -> Result<Vec<BadSet>> {
    if i < 2 {
        return Err(Error::InvalidArgument(format!("level must be at least 2, got {i}")));
    }
    let mut width = vec![0u32; ci.vertex_count()];
    let mut total = ci.vertex_count() as u128;
    let mut found = Vec::new();
    for_each_induced_nonmetric_cycle(ci, i + 1, &mut |c| {
        for v in &c.vertices {
            let w = &mut width[ci.require_index(v)?];
            total += 1u128 << *w;
            *w += 1;
            if *w >= 63 || total > vertex_cap as u128 {
                return Err(Error::CapExceeded {
                    stage: format!("level {}", i + 1),
                    required: format!("more than {vertex_cap}"),
                    cap: vertex_cap,
                });
            }
        }
        found.push(c);
        Ok(())
    })?;
    found.sort_by_cached_key(|c| c.members());
    Ok(found.into_iter().map(BadSet::from_cycle).collect())
}

/// Bits fixing where the copy of the input sits in the next level, keyed by
/// `(bad set index, vertex)`.
///
/// A bad set meeting the copy in its long edge `{x, y}`, `x < y`, gets
/// `x ↦ 0, y ↦ 1`; every other intersection is all zeros. Since the copy is a
/// metric space it meets each bad set in one vertex or in one cycle edge;
/// anything else is reported as an invariant violation.
pub fn anchor_valuations(
    ci: &EdgeLabelledGraph,
    copy: &[VertexId],
    bad: &[BadSet],
) -> Result<BTreeMap<(usize, VertexId), bool>> {
    let copy: BTreeSet<&VertexId> = copy.iter().collect();
    for v in &copy {
        ci.require_index(v)?;
    }
    let mut out = BTreeMap::new();
    for (m, set) in bad.iter().enumerate() {
        let meet: Vec<&VertexId> = set.members.iter().filter(|v| copy.contains(v)).collect();
        match meet.as_slice() {
            [] => {}
            [x] => {
                out.insert((m, (*x).clone()), false);
            }
            [x, y] => {
                if !set.is_cycle_edge(x, y) {
                    return Err(Error::Internal(format!(
                        "copy meets bad set {} in the non-adjacent pair {x}, {y}",
                        set.key()
                    )));
                }
                let long = set.is_long_edge(x, y);
                out.insert((m, (*x).clone()), false);
                out.insert((m, (*y).clone()), long);
            }
            _ => {
                return Err(Error::Internal(format!(
                    "copy meets bad set {} in {} vertices",
                    set.key(),
                    meet.len()
                )));
            }
        }
    }
    Ok(out)
}

/// A vertex `(base, χ)` of a lifted level. Bit `p` of `bits` is the value on
/// the `p`-th bad set (in canonical order) containing `base`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LiftedVertex {
    pub base: VertexId,
    pub bits: u64,
}

/// Valuation of one vertex with explicit bad set keys.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Valuation {
    pub owner: VertexId,
    pub bits: BTreeMap<String, u8>,
}

/// How a level was obtained from the one below.
#[derive(Debug, Clone)]
pub struct Lift {
    /// Bad sets of the level below.
    pub bad_sets: Vec<BadSet>,
    /// Aligned with the level graph's vertex order.
    pub vertices: Vec<LiftedVertex>,
    memberships: HashMap<VertexId, Vec<usize>>,
    bad_index: HashMap<Vec<VertexId>, usize>,
    lookup: HashMap<(VertexId, u64), usize>,
}

impl PartialEq for Lift {
    fn eq(&self, other: &Self) -> bool {
        self.bad_sets == other.bad_sets && self.vertices == other.vertices
    }
}

impl Lift {
    pub(crate) fn new(bad_sets: Vec<BadSet>, vertices: Vec<LiftedVertex>) -> Self {
        let memberships = memberships(&bad_sets);
        let bad_index = bad_sets
            .iter()
            .enumerate()
            .map(|(m, b)| (b.members.clone(), m))
            .collect();
        let mut lookup = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            lookup.entry((v.base.clone(), v.bits)).or_insert(i);
        }
        Lift {
            bad_sets,
            vertices,
            memberships,
            bad_index,
            lookup,
        }
    }

    /// Sorted indices of the bad sets containing `x`.
    pub fn memberships(&self, x: &VertexId) -> &[usize] {
        self.memberships.get(x).map_or(&[], Vec::as_slice)
    }

    pub fn bad_set_index(&self, members: &[VertexId]) -> Option<usize> {
        self.bad_index.get(members).copied()
    }

    /// Vertex index of `(base, bits)`.
    pub fn vertex_of(&self, base: &VertexId, bits: u64) -> Option<usize> {
        self.lookup.get(&(base.clone(), bits)).copied()
    }

    /// Value of `v`'s valuation on bad set `m`, if `m` contains `v`'s base.
    pub fn bit(&self, v: usize, m: usize) -> Option<bool> {
        let lv = &self.vertices[v];
        let p = self.memberships(&lv.base).binary_search(&m).ok()?;
        Some(lv.bits >> p & 1 == 1)
    }

    pub fn valuation(&self, v: usize) -> Valuation {
        let lv = &self.vertices[v];
        Valuation {
            owner: lv.base.clone(),
            bits: self
                .memberships(&lv.base)
                .iter()
                .enumerate()
                .map(|(p, &m)| (self.bad_sets[m].key(), (lv.bits >> p & 1) as u8))
                .collect(),
        }
    }

    /// Inverse of [`Lift::valuation`]: the bit mask for `owner`.
    pub fn bits_of(&self, valuation: &Valuation) -> Result<u64> {
        let mine = self.memberships(&valuation.owner);
        if mine.len() != valuation.bits.len() {
            return Err(Error::Parse(format!(
                "valuation of {} has {} entries, expected {}",
                valuation.owner,
                valuation.bits.len(),
                mine.len()
            )));
        }
        let mut bits = 0u64;
        for (p, &m) in mine.iter().enumerate() {
            let key = self.bad_sets[m].key();
            match valuation.bits.get(&key) {
                Some(0) => {}
                Some(1) => bits |= 1 << p,
                Some(b) => return Err(Error::Parse(format!("valuation bit {b} is not 0 or 1"))),
                None => {
                    return Err(Error::Parse(format!(
                        "valuation of {} misses bad set {key}",
                        valuation.owner
                    )))
                }
            }
        }
        Ok(bits)
    }
}

fn memberships(bad_sets: &[BadSet]) -> HashMap<VertexId, Vec<usize>> {
    let mut out: HashMap<VertexId, Vec<usize>> = HashMap::new();
    for (m, set) in bad_sets.iter().enumerate() {
        for v in &set.members {
            out.entry(v.clone()).or_default().push(m);
        }
    }
    out
}

/// One level `C_i` of the construction, with the copy `A_i` of the input
/// given by `base_embedding`.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelGraph {
    pub level: usize,
    pub graph: EdgeLabelledGraph,
    /// Embedding of the input space into `graph`.
    pub base_embedding: PartialMap,
    /// `None` for the first level.
    pub lift: Option<Lift>,
}

impl LevelGraph {
    pub fn base(level: usize, graph: EdgeLabelledGraph, base_embedding: PartialMap) -> Self {
        LevelGraph {
            level,
            graph,
            base_embedding,
            lift: None,
        }
    }

    /// The vertices of the copy `A_i`, sorted.
    pub fn copy(&self) -> Vec<VertexId> {
        self.base_embedding.image().into_iter().cloned().collect()
    }

    /// The projection `(x, χ) ↦ x` onto the level below.
    pub fn projection(&self) -> Option<PartialMap> {
        let lift = self.lift.as_ref()?;
        Some(
            PartialMap::function(
                self.graph
                    .vertices()
                    .iter()
                    .zip(&lift.vertices)
                    .map(|(v, lv)| (v.clone(), lv.base.clone())),
            )
            .expect("one base per vertex"),
        )
    }

    /// Assembles a lifted level from an explicit vertex table, computing the
    /// edges from the rule. Repeated `(base, bits)` entries are accepted so
    /// corrupted witnesses can still be loaded and inspected.
    pub fn from_lift_table(
        prev: &LevelGraph,
        bad_sets: Vec<BadSet>,
        table: Vec<(VertexId, LiftedVertex)>,
        base_embedding: PartialMap,
        edge_cap: usize,
    ) -> Result<Self> {
        for (id, lv) in &table {
            if !prev.graph.contains(&lv.base) {
                return Err(Error::Parse(format!("vertex {id} projects to unknown {}", lv.base)));
            }
        }
        let (ids, vertices): (Vec<VertexId>, Vec<LiftedVertex>) = table.into_iter().unzip();
        let lift = Lift::new(bad_sets, vertices);
        let edges = lift_edges(&prev.graph, &lift, edge_cap).map_err(|required| Error::EdgeCapExceeded {
            stage: format!("level {}", prev.level + 1),
            required,
            cap: edge_cap,
        })?;
        let graph = EdgeLabelledGraph::from_indexed(ids.clone(), edges)?;
        let mut ordered = vec![None; ids.len()];
        for (old, lv) in lift.vertices.iter().enumerate() {
            ordered[graph.index_of(&ids[old]).expect("vertex present")] = Some(lv.clone());
        }
        let lift = Lift::new(lift.bad_sets, ordered.into_iter().map(Option::unwrap).collect());
        Ok(LevelGraph {
            level: prev.level + 1,
            graph,
            base_embedding,
            lift: Some(lift),
        })
    }
}

pub(crate) fn lifted_id(base: &VertexId, bits: u64, width: usize) -> VertexId {
    let s: String = (0..width).map(|p| if bits >> p & 1 == 1 { '1' } else { '0' }).collect();
    VertexId::new(format!("{base}|{s}"))
}

/// Edges of a lifted level, indexed by the order of `lift.vertices`. Gives up
/// with a lower bound on the edge count once `edge_cap` is passed.
fn lift_edges(prev: &EdgeLabelledGraph, lift: &Lift, edge_cap: usize) -> std::result::Result<Vec<(usize, usize, Label)>, String> {
    let mut by_base: HashMap<&VertexId, Vec<usize>> = HashMap::new();
    for (i, v) in lift.vertices.iter().enumerate() {
        by_base.entry(&v.base).or_default().push(i);
    }
    let mut edges = Vec::new();
    for (x, y, l) in prev.edges() {
        let (bx, by) = (prev.vertex(x), prev.vertex(y));
        let (Some(vx), Some(vy)) = (by_base.get(bx), by_base.get(by)) else {
            continue;
        };
        let (ux, uy) = (lift.memberships(bx), lift.memberships(by));
        // (position in U(x), position in U(y), bits must differ)
        let mut common = Vec::new();
        for (px, m) in ux.iter().enumerate() {
            if let Ok(py) = uy.binary_search(m) {
                common.push((px, py, lift.bad_sets[*m].is_long_edge(bx, by)));
            }
        }
        let key = |bits: u64, pick: &dyn Fn(&(usize, usize, bool)) -> usize, flip: bool| -> u64 {
            common.iter().enumerate().fold(0u64, |acc, (j, c)| {
                let b = (bits >> pick(c) & 1) ^ u64::from(flip && c.2);
                acc | b << j
            })
        };
        let mut groups: HashMap<u64, Vec<usize>> = HashMap::new();
        for &v in vy {
            groups.entry(key(lift.vertices[v].bits, &|c| c.1, false)).or_default().push(v);
        }
        for &u in vx {
            if let Some(targets) = groups.get(&key(lift.vertices[u].bits, &|c| c.0, true)) {
                if edges.len() + targets.len() > edge_cap {
                    return Err(format!("more than {edge_cap}"));
                }
                edges.extend(targets.iter().map(|&v| (u, v, l)));
            }
        }
    }
    Ok(edges)
}

/// Builds `C_{i+1}` from `C_i = prev`, with the copy of the input placed via
/// [`anchor_valuations`].
pub fn build_next_level(prev: &LevelGraph, vertex_cap: usize) -> Result<LevelGraph> {
    build_next_level_capped(prev, vertex_cap, DEFAULT_EDGE_CAP)
}

/// [`build_next_level`] with an explicit edge cap.
pub fn build_next_level_capped(prev: &LevelGraph, vertex_cap: usize, edge_cap: usize) -> Result<LevelGraph> {
    let i = prev.level;
    let stage = format!("level {}", i + 1);
    let bad = bad_sets_within(&prev.graph, i, vertex_cap)?;
    let member = memberships(&bad);
    let width = |x: &VertexId| member.get(x).map_or(0, Vec::len);

    let mut total: u128 = 0;
    for x in prev.graph.vertices() {
        let w = width(x);
        if w >= 63 {
            total = u128::MAX;
            break;
        }
        total += 1u128 << w;
    }
    if total > vertex_cap as u128 {
        return Err(Error::CapExceeded {
            stage,
            required: if total == u128::MAX {
                "more than 2^63".into()
            } else {
                total.to_string()
            },
            cap: vertex_cap,
        });
    }

    let copy = prev.copy();
    let anchors = anchor_valuations(&prev.graph, &copy, &bad)?;

    let mut table = Vec::with_capacity(total as usize);
    for x in prev.graph.vertices() {
        let w = width(x);
        for bits in 0..1u64 << w {
            table.push((lifted_id(x, bits, w), LiftedVertex { base: x.clone(), bits }));
        }
    }

    let mut pairs = Vec::with_capacity(prev.base_embedding.len());
    for (a, x) in prev.base_embedding.pairs() {
        let empty = Vec::new();
        let mine = member.get(x).unwrap_or(&empty);
        let mut bits = 0u64;
        for (p, &m) in mine.iter().enumerate() {
            let b = anchors
                .get(&(m, x.clone()))
                .ok_or_else(|| Error::Internal(format!("no anchor for {x} in bad set {m}")))?;
            if *b {
                bits |= 1 << p;
            }
        }
        pairs.push((a.clone(), lifted_id(x, bits, mine.len())));
    }
    let base_embedding = PartialMap::new(pairs)?;
    LevelGraph::from_lift_table(prev, bad, table, base_embedding, edge_cap)
}

fn lift_of(next: &LevelGraph) -> Result<&Lift> {
    next.lift
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument(format!("level {} is not a lifted level", next.level)))
}

/// Images of all bad sets under an automorphism of the level below.
fn bad_set_images(prev: &LevelGraph, lift: &Lift, hat_phi: &PartialMap) -> Result<Vec<usize>> {
    lift.bad_sets
        .iter()
        .map(|set| {
            let mut img = Vec::with_capacity(set.members.len());
            for v in &set.members {
                img.push(
                    hat_phi
                        .get(v)
                        .ok_or_else(|| Error::InvalidArgument(format!("{v} is outside the automorphism")))?
                        .clone(),
                );
            }
            img.sort();
            lift.bad_set_index(&img).ok_or_else(|| {
                Error::Internal(format!(
                    "image of bad set {} in level {} is not bad",
                    set.key(),
                    prev.level
                ))
            })
        })
        .collect()
}

/// The bad sets whose bit `phi` flips: those `M` for which some `(x, χ_x)` in
/// `Dom(phi)` is sent to `(y, χ_y)` with `χ_x(M) ≠ χ_y(hat_phi(M))`.
///
/// `phi` is a partial automorphism of the copy in `next`, `hat_phi` an
/// automorphism of `prev` extending its projection. Two witnesses for the
/// same `M` always agree; a disagreement is reported as an internal error.
pub fn compute_flip_set(
    prev: &LevelGraph,
    next: &LevelGraph,
    phi: &PartialMap,
    hat_phi: &PartialMap,
) -> Result<BTreeSet<usize>> {
    let lift = lift_of(next)?;
    let images = bad_set_images(prev, lift, hat_phi)?;
    let mut verdict: BTreeMap<usize, bool> = BTreeMap::new();
    for (u, v) in phi.pairs() {
        let ui = next.graph.require_index(u)?;
        let vi = next.graph.require_index(v)?;
        let (x, y) = (&lift.vertices[ui].base, &lift.vertices[vi].base);
        if hat_phi.get(x) != Some(y) {
            return Err(Error::InvalidArgument(format!(
                "automorphism of level {} does not extend the projection at {x}",
                prev.level
            )));
        }
        for &m in lift.memberships(x) {
            let before = lift.bit(ui, m).expect("m contains x");
            let after = lift
                .bit(vi, images[m])
                .ok_or_else(|| Error::Internal(format!("{y} is not in the image of bad set {m}")))?;
            let flipped = before != after;
            if let Some(prev_verdict) = verdict.insert(m, flipped) {
                if prev_verdict != flipped {
                    return Err(Error::Internal(format!(
                        "flip of bad set {} is ill-defined",
                        lift.bad_sets[m].key()
                    )));
                }
            }
        }
    }
    Ok(verdict.into_iter().filter(|&(_, f)| f).map(|(m, _)| m).collect())
}

/// Lifts an automorphism `hat_phi` of `prev` to `next`:
/// `(x, χ) ↦ (hat_phi(x), χ')` with `χ'(hat_phi(M)) = χ(M)`, inverted on the
/// bad sets in `flips`. The result is checked to be an automorphism.
pub fn lift_automorphism(
    prev: &LevelGraph,
    next: &LevelGraph,
    hat_phi: &PartialMap,
    flips: &BTreeSet<usize>,
) -> Result<PartialMap> {
    if !check_map(hat_phi, &prev.graph, &prev.graph, MapMode::Automorphism)? {
        return Err(Error::InvalidArgument(format!(
            "map is not an automorphism of level {}",
            prev.level
        )));
    }
    let lift = lift_of(next)?;
    let images = bad_set_images(prev, lift, hat_phi)?;
    let mut pairs = Vec::with_capacity(lift.vertices.len());
    for (v, lv) in lift.vertices.iter().enumerate() {
        let y = hat_phi.get(&lv.base).expect("total automorphism");
        let target = lift.memberships(y);
        let mut bits = 0u64;
        for (p, &m) in lift.memberships(&lv.base).iter().enumerate() {
            let q = target
                .binary_search(&images[m])
                .map_err(|_| Error::Internal(format!("bad set {m} maps outside U({y})")))?;
            let b = (lv.bits >> p & 1 == 1) ^ flips.contains(&m);
            if b {
                bits |= 1 << q;
            }
        }
        let w = lift
            .vertex_of(y, bits)
            .ok_or_else(|| Error::Internal(format!("no vertex ({y}, {bits:b}) in level {}", next.level)))?;
        pairs.push((next.graph.vertex(v).clone(), next.graph.vertex(w).clone()));
    }
    let theta = PartialMap::new(pairs).map_err(|e| Error::Internal(format!("lifted map: {e}")))?;
    if !check_map(&theta, &next.graph, &next.graph, MapMode::Automorphism)? {
        return Err(Error::Internal(format!(
            "lifted map is not an automorphism of level {}",
            next.level
        )));
    }
    Ok(theta)
}

/// Per-level size report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelStats {
    pub level: usize,
    pub vertices: usize,
    pub edges: usize,
    /// Bad sets of the level below this one was built from.
    pub bad_sets_below: usize,
    pub max_valuation_bits: usize,
}

impl LevelStats {
    pub fn of(level: &LevelGraph) -> Self {
        let (bad, bits) = match &level.lift {
            Some(l) => (
                l.bad_sets.len(),
                l.memberships.values().map(Vec::len).max().unwrap_or(0),
            ),
            None => (0, 0),
        };
        LevelStats {
            level: level.level,
            vertices: level.graph.vertex_count(),
            edges: level.graph.edge_count(),
            bad_sets_below: bad,
            max_valuation_bits: bits,
        }
    }
}
