//! Basis-carrying graph surgery: contraction, edge addition, duplication,
//! subdivision and edge replacement, each returning the new graph together
//! with a transported basis meeting the charge guarantee, plus the
//! degree-reduction / subdivision pipeline that turns arbitrary drawings
//! into 1-plane ones.

use std::collections::{BTreeMap, BTreeSet};

use crate::cycle_space::{charges, verify_kbasis, EdgeSet};
use crate::embedding::{half, HalfEdge, OnePlaneEmbedding};
use crate::graph::{EdgeId, Graph, VertexId};
use crate::search::{kbasis_with_caps, SearchBudget};
use crate::{Error, Result};

fn require_basis(g: &Graph, b: &[EdgeSet]) -> Result<usize> {
    let rep = verify_kbasis(g, b, usize::MAX)?;
    if !(rep.all_eulerian && rep.independent && rep.generates) {
        return Err(Error::InvalidBasis(format!(
            "eulerian={} independent={} generates={}",
            rep.all_eulerian, rep.independent, rep.generates
        )));
    }
    Ok(rep.max_charge)
}

fn audited(g: &Graph, b: Vec<EdgeSet>, k: usize, what: &str) -> Result<Vec<EdgeSet>> {
    let rep = verify_kbasis(g, &b, k)?;
    if !rep.verdict {
        return Err(Error::PostconditionFailed(format!(
            "{what}: max_charge={} eulerian={} independent={} generates={} (k={k})",
            rep.max_charge, rep.all_eulerian, rep.independent, rep.generates
        )));
    }
    Ok(b)
}

/// Contract a non-loop edge and drop it from every basis element. Charges
/// never increase.
pub fn contract_basis(g: &Graph, b: &[EdgeSet], e: EdgeId) -> Result<(Graph, Vec<EdgeSet>)> {
    let old_max = require_basis(g, b)?;
    let (contracted, _) = g.contract_edge(e)?;
    let basis: Vec<EdgeSet> = b
        .iter()
        .map(|s| {
            let mut t = s.clone();
            t.remove(e);
            t
        })
        .collect();
    let basis = audited(&contracted, basis, old_max, "contracted basis")?;
    Ok((contracted, basis))
}

/// Add a fresh edge `uv` plus one shortest cycle through it. Max charge
/// rises by at most one.
pub fn add_edge_basis(
    g: &Graph,
    b: &[EdgeSet],
    u: VertexId,
    v: VertexId,
) -> Result<(Graph, Vec<EdgeSet>, EdgeId)> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    let old_max = require_basis(g, b)?;
    let mut bigger = g.clone();
    let fresh = bigger.add_edge(u, v)?;
    let width = bigger.edge_capacity();
    let mut cycle = EdgeSet::empty(width);
    cycle.insert(fresh);
    if u != v {
        for e in g.shortest_path(u, v).ok_or(Error::Disconnected)? {
            cycle.insert(e);
        }
    }
    let mut basis: Vec<EdgeSet> = b.iter().map(|s| s.resized(width)).collect();
    basis.push(cycle);
    let basis = audited(&bigger, basis, old_max + 1, "edge-added basis")?;
    Ok((bigger, basis, fresh))
}

/// Add a parallel copy of `e`. The elements that used `e` split their load
/// between the two copies and the new 2-cycle joins the basis, so the max
/// charge is at most max(old, 2).
pub fn duplicate_edge_basis(
    g: &Graph,
    b: &[EdgeSet],
    e: EdgeId,
) -> Result<(Graph, Vec<EdgeSet>, EdgeId)> {
    let old_max = require_basis(g, b)?;
    let edge = g.edge(e)?;
    let mut bigger = g.clone();
    let copy = bigger.add_edge(edge.u, edge.v)?;
    let width = bigger.edge_capacity();
    let mut basis: Vec<EdgeSet> = Vec::with_capacity(b.len() + 1);
    let mut users = 0usize;
    for s in b {
        let mut t = s.resized(width);
        if t.contains(e) {
            // Alternate: even-indexed users keep e, odd ones take the copy.
            if users % 2 == 1 {
                t.remove(e);
                t.insert(copy);
            }
            users += 1;
        }
        basis.push(t);
    }
    let mut two_cycle = EdgeSet::empty(width);
    two_cycle.insert(e);
    two_cycle.insert(copy);
    basis.push(two_cycle);
    let basis = audited(&bigger, basis, old_max.max(2), "duplicated-edge basis")?;
    Ok((bigger, basis, copy))
}

/// Subdivide `e` through a fresh vertex; every element using `e` swaps it
/// for both new edges, leaving the charge of all surviving edges unchanged.
pub fn subdivide_basis(
    g: &Graph,
    b: &[EdgeSet],
    e: EdgeId,
) -> Result<(Graph, Vec<EdgeSet>, [EdgeId; 2], VertexId)> {
    let old_max = require_basis(g, b)?;
    let edge = g.edge(e)?;
    let mut sub = g.clone();
    sub.remove_edge(e)?;
    let w = sub.add_vertex();
    let e1 = sub.add_edge(edge.u, w)?;
    let e2 = sub.add_edge(w, edge.v)?;
    let width = sub.edge_capacity();
    let basis: Vec<EdgeSet> = b
        .iter()
        .map(|s| {
            let mut t = s.resized(width);
            if t.contains(e) {
                t.remove(e);
                t.insert(e1);
                t.insert(e2);
            }
            t
        })
        .collect();
    let basis = audited(&sub, basis, old_max, "subdivided basis")?;
    // Charges of surviving edges are bit-exact.
    let before = charges(g.edge_capacity(), b);
    let after = charges(width, &basis);
    for ge in g.edges() {
        if ge.id != e && before[ge.id] != after[ge.id] {
            return Err(Error::PostconditionFailed(format!(
                "charge of edge {} drifted in subdivision",
                ge.id
            )));
        }
    }
    Ok((sub, basis, [e1, e2], w))
}

/// A connected graph with two distinguished terminals.
#[derive(Debug, Clone)]
pub struct TerminalGraph {
    pub graph: Graph,
    pub s: VertexId,
    pub t: VertexId,
}

impl TerminalGraph {
    pub fn new(graph: Graph, s: VertexId, t: VertexId) -> Result<Self> {
        if s == t {
            return Err(Error::InvalidTerminalGraph("terminals must differ".into()));
        }
        if !graph.has_vertex(s) || !graph.has_vertex(t) {
            return Err(Error::InvalidTerminalGraph("terminal missing".into()));
        }
        if !graph.is_connected() {
            return Err(Error::InvalidTerminalGraph("graph must be connected".into()));
        }
        Ok(TerminalGraph { graph, s, t })
    }
}

/// A basis of a terminal graph together with `paths.len()` st-paths such
/// that every edge is charged at most `k` by basis and paths combined.
#[derive(Debug, Clone)]
pub struct AugmentedBasis {
    pub basis: Vec<EdgeSet>,
    pub paths: Vec<EdgeSet>,
    pub k: usize,
}

fn is_st_path(g: &Graph, s: VertexId, t: VertexId, path: &EdgeSet) -> bool {
    let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
    for e in path.iter() {
        let Ok(edge) = g.edge(e) else { return false };
        if edge.is_loop() {
            return false;
        }
        *deg.entry(edge.u).or_insert(0) += 1;
        *deg.entry(edge.v).or_insert(0) += 1;
    }
    if deg.get(&s) != Some(&1) || deg.get(&t) != Some(&1) {
        return false;
    }
    if deg.iter().any(|(v, &d)| (*v != s && *v != t && d != 2) || d > 2) {
        return false;
    }
    // Connectivity: walk from s.
    let keep: BTreeSet<EdgeId> = path.iter().collect();
    let sub = g.edge_subgraph(&keep);
    sub.shortest_path(s, t).map(|p| p.len() == keep.len()) == Some(true)
}

impl AugmentedBasis {
    pub fn validate_for(&self, h: &TerminalGraph) -> Result<()> {
        require_basis(&h.graph, &self.basis)
            .map_err(|e| Error::InvalidAugmentedBasis(e.to_string()))?;
        for p in &self.paths {
            if !is_st_path(&h.graph, h.s, h.t, p) {
                return Err(Error::InvalidAugmentedBasis(
                    "a path is not a simple st-path".into(),
                ));
            }
        }
        let all: Vec<EdgeSet> = self.basis.iter().chain(self.paths.iter()).cloned().collect();
        let ch = charges(h.graph.edge_capacity(), &all);
        let max = ch.into_iter().max().unwrap_or(0);
        if max > self.k {
            return Err(Error::InvalidAugmentedBasis(format!(
                "combined charge {max} exceeds claimed k={}",
                self.k
            )));
        }
        Ok(())
    }
}

/// Outcome of [`replace_edge_basis`]: the merged graph, the transported
/// basis, and the id map from the terminal graph's edges into the result.
#[derive(Debug, Clone)]
pub struct Replacement {
    pub graph: Graph,
    pub basis: Vec<EdgeSet>,
    pub edge_map: BTreeMap<EdgeId, EdgeId>,
    pub vertex_map: BTreeMap<VertexId, VertexId>,
}

/// Replace edge `e` by the terminal graph `h`: delete `e`, glue `s` to the
/// stored u-endpoint and `t` to the v-endpoint, and rebuild the basis as
/// (b minus users of e) + basis(h) + (user_i - e + path_i). Charges stay
/// within max(maxcharge(b), ab.k).
pub fn replace_edge_basis(
    g: &Graph,
    b: &[EdgeSet],
    e: EdgeId,
    h: &TerminalGraph,
    ab: &AugmentedBasis,
) -> Result<Replacement> {
    let old_max = require_basis(g, b)?;
    let edge = g.edge(e)?;
    ab.validate_for(h)?;
    let ell = b.iter().filter(|s| s.contains(e)).count();
    if ab.paths.len() != ell {
        return Err(Error::PathCountMismatch {
            expected: ell,
            got: ab.paths.len(),
        });
    }
    let mut merged = g.clone();
    merged.remove_edge(e)?;
    let mut vertex_map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
    vertex_map.insert(h.s, edge.u);
    vertex_map.insert(h.t, edge.v);
    for v in h.graph.vertices() {
        if v != h.s && v != h.t {
            vertex_map.insert(v, merged.add_vertex());
        }
    }
    let mut edge_map: BTreeMap<EdgeId, EdgeId> = BTreeMap::new();
    for he in h.graph.edges() {
        let id = merged.add_edge(vertex_map[&he.u], vertex_map[&he.v])?;
        edge_map.insert(he.id, id);
    }
    let width = merged.edge_capacity();
    let remap = |s: &EdgeSet| {
        EdgeSet::from_edges(width, s.iter().map(|he| edge_map[&he]))
    };
    let mut basis: Vec<EdgeSet> = Vec::new();
    let users: Vec<&EdgeSet> = b.iter().filter(|s| s.contains(e)).collect();
    for s in b.iter().filter(|s| !s.contains(e)) {
        basis.push(s.resized(width));
    }
    for hs in &ab.basis {
        basis.push(remap(hs));
    }
    for (user, path) in users.iter().zip(&ab.paths) {
        let mut t = user.resized(width);
        t.remove(e);
        t.xor_assign(&remap(path));
        basis.push(t);
    }
    let k = old_max.max(ab.k);
    let basis = audited(&merged, basis, k, "edge-replacement basis")?;
    Ok(Replacement {
        graph: merged,
        basis,
        edge_map,
        vertex_map,
    })
}

pub enum AugmentedMode {
    /// Minimal k by exact search over (basis, path multiset) pairs; refuses
    /// beyond the betti cutoff.
    Exact { max_betti: usize },
    /// Fact-2 route for 2-connected planar graphs with both terminals on
    /// the outer face and ell = 2; the caller supplies the plane embedding
    /// (with `outer_face` set) as the planarity witness.
    PlanarOuter { embedding: OnePlaneEmbedding },
}

fn simple_st_paths(g: &Graph, s: VertexId, t: VertexId, cap: usize) -> Vec<EdgeSet> {
    let width = g.edge_capacity();
    let mut out = Vec::new();
    let mut stack_edges: Vec<EdgeId> = Vec::new();
    let mut visited: BTreeSet<VertexId> = BTreeSet::from([s]);
    fn dfs(
        g: &Graph,
        cur: VertexId,
        t: VertexId,
        visited: &mut BTreeSet<VertexId>,
        stack_edges: &mut Vec<EdgeId>,
        out: &mut Vec<EdgeSet>,
        width: usize,
        cap: usize,
    ) {
        if out.len() >= cap {
            return;
        }
        if cur == t {
            out.push(EdgeSet::from_edges(width, stack_edges.iter().copied()));
            return;
        }
        for e in g.incident_edges(cur) {
            if e.is_loop() {
                continue;
            }
            let next = e.other(cur);
            if visited.contains(&next) {
                continue;
            }
            visited.insert(next);
            stack_edges.push(e.id);
            dfs(g, next, t, visited, stack_edges, out, width, cap);
            stack_edges.pop();
            visited.remove(&next);
        }
    }
    dfs(g, s, t, &mut visited, &mut stack_edges, &mut out, width, cap);
    out
}

/// The ell-augmented basis number of a terminal graph: minimum k admitting a
/// basis plus `ell` st-paths with all combined charges at most k.
pub fn augmented_basis_number(
    h: &TerminalGraph,
    ell: usize,
    mode: AugmentedMode,
) -> Result<AugmentedBasis> {
    match mode {
        AugmentedMode::PlanarOuter { embedding } => {
            if ell != 2 {
                return Err(Error::Malformed(
                    "planar-outer mode is the ell = 2 construction".into(),
                ));
            }
            if embedding.graph != h.graph {
                return Err(Error::Malformed(
                    "embedding is not over the terminal graph".into(),
                ));
            }
            let outer = embedding
                .outer_face
                .ok_or_else(|| Error::Malformed("embedding must fix an outer face".into()))?;
            let basis = crate::constructions::planar_2basis(&embedding)?;
            let plan = embedding.planarize();
            // Split the outer cycle at the two terminals.
            let orbit = &plan.faces[outer];
            let verts: Vec<VertexId> = orbit.iter().map(|&d| plan.base(d)).collect();
            let si = verts.iter().position(|&v| v == h.s).ok_or_else(|| {
                Error::Malformed("terminal s is not on the outer face".into())
            })?;
            let ti = verts.iter().position(|&v| v == h.t).ok_or_else(|| {
                Error::Malformed("terminal t is not on the outer face".into())
            })?;
            let width = h.graph.edge_capacity();
            let mut p1 = EdgeSet::empty(width);
            let mut p2 = EdgeSet::empty(width);
            let n = orbit.len();
            let mut i = si;
            while i != ti {
                p1.insert(plan.seg(orbit[i]).edge);
                i = (i + 1) % n;
            }
            let mut i = ti;
            while i != si {
                p2.insert(plan.seg(orbit[i]).edge);
                i = (i + 1) % n;
            }
            let ab = AugmentedBasis {
                basis,
                paths: vec![p1, p2],
                k: 2,
            };
            ab.validate_for(h)?;
            Ok(ab)
        }
        AugmentedMode::Exact { max_betti } => {
            let betti = h.graph.betti();
            if betti > max_betti {
                return Err(Error::CutoffExceeded(format!(
                    "betti {betti} above exact-mode cutoff {max_betti}"
                )));
            }
            let paths = simple_st_paths(&h.graph, h.s, h.t, 5000);
            if paths.is_empty() {
                return Err(Error::InvalidTerminalGraph("no st-path".into()));
            }
            let width = h.graph.edge_capacity();
            let budget = SearchBudget::default();
            for k in 0..=(betti + ell + 1) {
                // Multisets of ell paths, non-decreasing indices.
                let mut pick = vec![0usize; ell];
                loop {
                    let mut ch = vec![0usize; width];
                    for &pi in &pick {
                        for e in paths[pi].iter() {
                            ch[e] += 1;
                        }
                    }
                    if ch.iter().max().copied().unwrap_or(0) <= k {
                        let caps: Vec<usize> = ch.iter().map(|&c| k - c).collect();
                        if let Some(basis) = kbasis_with_caps(&h.graph, &caps, &budget)? {
                            let ab = AugmentedBasis {
                                basis,
                                paths: pick.iter().map(|&pi| paths[pi].clone()).collect(),
                                k,
                            };
                            ab.validate_for(h)?;
                            return Ok(ab);
                        }
                    }
                    // next multiset
                    if ell == 0 {
                        break;
                    }
                    let mut j = ell;
                    loop {
                        if j == 0 {
                            break;
                        }
                        j -= 1;
                        if pick[j] + 1 < paths.len() {
                            let v = pick[j] + 1;
                            for slot in pick.iter_mut().skip(j) {
                                *slot = v;
                            }
                            break;
                        }
                        if j == 0 {
                            pick.clear();
                            break;
                        }
                    }
                    if pick.is_empty() {
                        break;
                    }
                    if pick.iter().all(|&x| x == 0) && ell > 0 {
                        break; // wrapped around
                    }
                }
                if ell == 0 {
                    // Single empty multiset already tried once.
                    let caps = vec![k; width];
                    if let Some(basis) = kbasis_with_caps(&h.graph, &caps, &budget)? {
                        let ab = AugmentedBasis {
                            basis,
                            paths: Vec::new(),
                            k,
                        };
                        ab.validate_for(h)?;
                        return Ok(ab);
                    }
                }
                // restore pick buffer for next k
            }
            Err(Error::PostconditionFailed(
                "augmented search exhausted its bound".into(),
            ))
        }
    }
}

/// One crossing of a drawing plan: two (edge, position) slots plus the
/// chirality of the crossing. Positions count crossings along each edge
/// from its stored u endpoint. With `mirrored` false, the rotation at the
/// dummy reads (first toward v, second toward v, first toward u, second
/// toward u); mirrored flips the second edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ScheduledCrossing {
    pub first: (EdgeId, usize),
    pub second: (EdgeId, usize),
    pub mirrored: bool,
}

/// A drawing plan for an arbitrary (multi)graph: vertex rotations plus the
/// ordered crossing lists realized as dummy vertices after subdivision.
#[derive(Debug, Clone)]
pub struct CrossingSchedule {
    pub rotations: BTreeMap<VertexId, Vec<HalfEdge>>,
    pub crossings: Vec<ScheduledCrossing>,
}

impl CrossingSchedule {
    /// Per-edge crossing lists ordered by position; checks consistency.
    fn edge_slots(&self, g: &Graph) -> Result<BTreeMap<EdgeId, Vec<(usize, bool)>>> {
        let mut slots: BTreeMap<EdgeId, Vec<(usize, usize, bool)>> = BTreeMap::new();
        for (ci, c) in self.crossings.iter().enumerate() {
            if c.first.0 == c.second.0 {
                return Err(Error::InvalidSchedule(format!(
                    "crossing {ci} lets edge {} cross itself",
                    c.first.0
                )));
            }
            for (side, (e, pos)) in [c.first, c.second].into_iter().enumerate() {
                if !g.has_edge(e) {
                    return Err(Error::InvalidSchedule(format!("unknown edge {e}")));
                }
                slots.entry(e).or_default().push((pos, ci, side == 1));
            }
        }
        let mut out = BTreeMap::new();
        for (e, mut list) in slots {
            list.sort_unstable();
            for (i, &(pos, _, _)) in list.iter().enumerate() {
                if pos != i {
                    return Err(Error::InvalidSchedule(format!(
                        "positions on edge {e} are not contiguous from 0"
                    )));
                }
            }
            out.insert(e, list.into_iter().map(|(_, ci, snd)| (ci, snd)).collect());
        }
        Ok(out)
    }
}

/// Output of [`make_1planar_by_subdivision`] and [`realize_schedule`].
#[derive(Debug, Clone)]
pub struct SubdivisionDrawing {
    pub graph: Graph,
    pub embedding: OnePlaneEmbedding,
    /// Fresh edges whose contraction recovers the input graph.
    pub contraction_chain: Vec<EdgeId>,
}

/// How many subdivision vertices to spend when realizing a schedule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SubdivisionPolicy {
    /// Two vertices per gap between consecutive crossings, plus two next to
    /// an original endpoint whenever that endpoint would tie two crossings
    /// together: every crossing ends up isolated (IC).
    IsolateCrossings,
    /// One vertex per internal gap, nothing else: just enough for a valid
    /// 1-plane drawing.
    MinimalSplit,
}

/// Realizes a drawing plan as a valid 1-plane embedding, inserting
/// subdivision vertices per the policy. Contracting the returned fresh
/// edges recovers the input graph.
pub fn realize_schedule(
    g: &Graph,
    schedule: &CrossingSchedule,
    policy: SubdivisionPolicy,
) -> Result<SubdivisionDrawing> {
    let slots = schedule.edge_slots(g)?;
    let crossed_edges: BTreeSet<EdgeId> = slots.keys().copied().collect();
    let crossed_at = |v: VertexId| -> usize {
        g.incident_edges(v)
            .iter()
            .filter(|e| crossed_edges.contains(&e.id))
            .count()
    };

    let mut out = g.clone();
    // Per original edge: the chain of sub-edges (stored u -> v) and, per
    // crossing position, the carrying sub-edge.
    let mut carrier: BTreeMap<(EdgeId, usize), EdgeId> = BTreeMap::new();
    let mut head_half: BTreeMap<EdgeId, HalfEdge> = BTreeMap::new();
    let mut tail_half: BTreeMap<EdgeId, HalfEdge> = BTreeMap::new();
    let mut fresh_edges: Vec<EdgeId> = Vec::new();
    let mut path_rotations: BTreeMap<VertexId, Vec<HalfEdge>> = BTreeMap::new();

    for e in g.edges() {
        let Some(list) = slots.get(&e.id) else {
            head_half.insert(e.id, half(e.id, 0));
            tail_half.insert(e.id, half(e.id, 1));
            continue;
        };
        let r = list.len();
        let partner_of = |ci: usize, second: bool| -> EdgeId {
            let c = &schedule.crossings[ci];
            if second {
                c.first.0
            } else {
                c.second.0
            }
        };
        // Pad counts per gap (gap k sits before crossing k; gap r trails).
        let mut pads = vec![0usize; r + 1];
        match policy {
            SubdivisionPolicy::MinimalSplit => {
                for p in pads.iter_mut().take(r).skip(1) {
                    *p = 1;
                }
            }
            SubdivisionPolicy::IsolateCrossings => {
                for p in pads.iter_mut().take(r).skip(1) {
                    *p = 2;
                }
                let first_partner = g.edge(partner_of(list[0].0, list[0].1))?;
                let last_partner = g.edge(partner_of(list[r - 1].0, list[r - 1].1))?;
                if crossed_at(e.u) >= 2 || first_partner.touches(e.u) {
                    pads[0] = 2;
                }
                if crossed_at(e.v) >= 2 || last_partner.touches(e.v) {
                    pads[r] = 2;
                }
            }
        }
        // Vertex chain: u, pads[0], X0's far side pads[1], ..., v. The
        // sub-edge leaving the last vertex of pad group k carries crossing k.
        out.remove_edge(e.id)?;
        let mut chain: Vec<VertexId> = vec![e.u];
        for &pad in &pads {
            for _ in 0..pad {
                chain.push(out.add_vertex());
            }
        }
        chain.push(e.v);
        // Sub-edges between consecutive chain vertices; map crossing k to
        // the sub-edge that jumps from pad group k to group k+1.
        let mut subs: Vec<EdgeId> = Vec::new();
        for w in chain.windows(2) {
            let id = if subs.is_empty() {
                out.add_edge_id(e.id, w[0], w[1])?;
                e.id
            } else {
                let id = out.add_edge(w[0], w[1])?;
                fresh_edges.push(id);
                id
            };
            subs.push(id);
        }
        // Prefix sums locate the carrying sub-edge: crossing k sits on the
        // sub-edge leaving the last vertex of pad group k.
        let mut offset = 0usize;
        for k in 0..r {
            offset += pads[k];
            carrier.insert((e.id, k), subs[offset]);
        }
        head_half.insert(e.id, half(subs[0], 0));
        tail_half.insert(e.id, half(*subs.last().unwrap(), 1));
        for (i, &w) in chain.iter().enumerate() {
            if i == 0 || i + 1 == chain.len() {
                continue;
            }
            path_rotations.insert(w, vec![half(subs[i - 1], 1), half(subs[i], 0)]);
        }
    }

    // Vertex rotations: original rotations with halves renamed to terminal
    // sub-edge halves.
    let mut rotations: BTreeMap<VertexId, Vec<HalfEdge>> = BTreeMap::new();
    for v in g.vertices() {
        let rot = schedule
            .rotations
            .get(&v)
            .ok_or_else(|| Error::InvalidSchedule(format!("no rotation for vertex {v}")))?;
        let renamed: Vec<HalfEdge> = rot
            .iter()
            .map(|&h| {
                let e = crate::embedding::half_edge(h);
                if crate::embedding::half_end(h) == 0 {
                    head_half[&e]
                } else {
                    tail_half[&e]
                }
            })
            .collect();
        rotations.insert(v, renamed);
    }
    rotations.extend(path_rotations);

    // Dummies.
    let mut dummies = BTreeMap::new();
    for (ci, c) in schedule.crossings.iter().enumerate() {
        let a = carrier[&(c.first.0, c.first.1)];
        let b = carrier[&(c.second.0, c.second.1)];
        let d = out.add_vertex();
        out.remove_vertex(d)?; // reserve the id without keeping the vertex
        dummies.insert(d, (a, b));
        let rot = if c.mirrored {
            vec![half(a, 1), half(b, 0), half(a, 0), half(b, 1)]
        } else {
            vec![half(a, 1), half(b, 1), half(a, 0), half(b, 0)]
        };
        rotations.insert(d, rot);
        let _ = ci;
    }

    let embedding = OnePlaneEmbedding::checked(out.clone(), rotations, dummies, None)
        .map_err(|err| Error::InvalidSchedule(format!("plan is not realizable: {err}")))?;
    Ok(SubdivisionDrawing {
        graph: out,
        embedding,
        contraction_chain: fresh_edges,
    })
}

/// Realizes a drawing plan with crossings isolated by subdivision: two fresh
/// vertices between consecutive crossings on an edge and two more shielding
/// any original endpoint shared between crossings, so the result is
/// IC-planar and contracting the fresh edges recovers the input graph.
pub fn make_1planar_by_subdivision(
    g: &Graph,
    schedule: &CrossingSchedule,
) -> Result<SubdivisionDrawing> {
    realize_schedule(g, schedule, SubdivisionPolicy::IsolateCrossings)
}

/// Chords of a circle in the given vertex order, drawn as half-circles:
/// crossings are exactly the interleaved chord pairs, ordered along each
/// chord by exact rational sweep positions.
pub fn circular_layout_schedule(g: &Graph, order: &[VertexId]) -> Result<CrossingSchedule> {
    let n = order.len();
    let vertices: BTreeSet<VertexId> = g.vertices().collect();
    if order.iter().copied().collect::<BTreeSet<_>>() != vertices || n != g.vertex_count() {
        return Err(Error::Malformed("order must list every vertex once".into()));
    }
    let mut pos: BTreeMap<VertexId, i64> = BTreeMap::new();
    for (i, &v) in order.iter().enumerate() {
        pos.insert(v, i as i64);
    }
    let lohi = |e: &crate::graph::Edge| {
        let (pu, pv) = (pos[&e.u], pos[&e.v]);
        (pu.min(pv), pu.max(pv))
    };
    // Interleaved pairs cross once; position along each edge by the exact
    // x-coordinate of the半 circle intersection: (cd - ab) / ((c+d) - (a+b)).
    let edges: Vec<crate::graph::Edge> = g.edges().collect();
    struct Hit {
        other: usize, // index into edges
        num: i128,
        den: i128,
    }
    let mut hits: BTreeMap<EdgeId, Vec<Hit>> = BTreeMap::new();
    let mut pairs: Vec<(usize, usize)> = Vec::new();
    for i in 0..edges.len() {
        for j in (i + 1)..edges.len() {
            let (a, b) = lohi(&edges[i]);
            let (c, d) = lohi(&edges[j]);
            if a == b || c == d {
                continue; // loops never cross
            }
            let interleaved = (a < c && c < b && b < d) || (c < a && a < d && d < b);
            if !interleaved {
                continue;
            }
            let num = (c as i128) * (d as i128) - (a as i128) * (b as i128);
            let den = (c + d - a - b) as i128;
            debug_assert!(den != 0);
            let (num, den) = if den < 0 { (-num, -den) } else { (num, den) };
            hits.entry(edges[i].id).or_default().push(Hit {
                other: j,
                num,
                den,
            });
            hits.entry(edges[j].id).or_default().push(Hit {
                other: i,
                num,
                den,
            });
            pairs.push((i, j));
        }
    }
    // Sort hits along each edge from its stored u endpoint.
    let mut position: BTreeMap<(EdgeId, EdgeId), usize> = BTreeMap::new();
    for (eid, list) in hits.iter_mut() {
        let e = g.edge(*eid)?;
        let ascending = pos[&e.u] < pos[&e.v];
        list.sort_by(|x, y| {
            let lhs = x.num * y.den;
            let rhs = y.num * x.den;
            if ascending {
                lhs.cmp(&rhs)
            } else {
                rhs.cmp(&lhs)
            }
        });
        for w in list.windows(2) {
            if w[0].num * w[1].den == w[1].num * w[0].den {
                // Concurrent crossings: only nested parallels are resolvable.
                let p0 = &edges[w[0].other];
                let p1 = &edges[w[1].other];
                if !(lohi(p0) == lohi(p1)) {
                    return Err(Error::InvalidSchedule(
                        "three chords concurrent; perturb the vertex order".into(),
                    ));
                }
            }
        }
        for (i, hit) in list.iter().enumerate() {
            position.insert((*eid, edges[hit.other].id), i);
        }
    }
    let mut crossings = Vec::new();
    for (i, j) in pairs {
        let (ei, ej) = (edges[i], edges[j]);
        // "first" is the chord with the smaller low position.
        let (first, second) = if lohi(&ei).0 < lohi(&ej).0 {
            (ei, ej)
        } else {
            (ej, ei)
        };
        let ef = pos[&first.u] < pos[&first.v];
        let ff = pos[&second.u] < pos[&second.v];
        crossings.push(ScheduledCrossing {
            first: (first.id, position[&(first.id, second.id)]),
            second: (second.id, position[&(second.id, first.id)]),
            mirrored: ef != ff,
        });
    }
    // Rotations: upper half-plane semicircles leave every vertex near 90
    // degrees, bending away by y^2/(span). Counterclockwise order is hence
    // right-going edges by ascending target, then left-going edges by
    // ascending source; nested parallels tie-break by id, loops innermost
    // between the two groups.
    let mut rotations = BTreeMap::new();
    for &v in order {
        let p = pos[&v];
        let mut right: Vec<(i64, i64, HalfEdge)> = Vec::new();
        let mut left: Vec<(i64, i64, HalfEdge)> = Vec::new();
        let mut loops: Vec<HalfEdge> = Vec::new();
        for e in g.incident_edges(v) {
            if e.is_loop() {
                loops.push(half(e.id, 0));
                loops.push(half(e.id, 1));
                continue;
            }
            let o = pos[&e.other(v)];
            let h = if e.u == v { half(e.id, 0) } else { half(e.id, 1) };
            if o > p {
                right.push((o, e.id as i64, h));
            } else {
                left.push((o, -(e.id as i64), h));
            }
        }
        right.sort_unstable();
        left.sort_unstable();
        let mut rot: Vec<HalfEdge> = Vec::new();
        rot.extend(right.into_iter().map(|(_, _, h)| h));
        rot.extend(loops);
        rot.extend(left.into_iter().map(|(_, _, h)| h));
        rotations.insert(v, rot);
    }
    Ok(CrossingSchedule {
        rotations,
        crossings,
    })
}

/// Splits vertices of degree above 3 until the maximum degree is 3,
/// distributing incidences evenly. Returns the reduced graph plus the fresh
/// bridge edges whose contraction restores the input.
pub fn degree_reduce(g: &Graph) -> Result<(Graph, Vec<EdgeId>)> {
    let mut cur = g.clone();
    let mut chain = Vec::new();
    loop {
        let Some(v) = cur
            .vertices()
            .filter(|&v| cur.degree(v) > 3)
            .min_by_key(|&v| v)
        else {
            break;
        };
        let incident = cur.incident_edges(v);
        // Split incident ids into two halves balanced by degree weight
        // (loops weigh 2).
        let total: usize = cur.degree(v);
        let mut left = BTreeSet::new();
        let mut right = BTreeSet::new();
        let mut acc = 0usize;
        for e in &incident {
            let w = if e.is_loop() { 2 } else { 1 };
            if acc + w <= total / 2 && !(incident.len() - left.len() == 1 && right.is_empty()) {
                left.insert(e.id);
                acc += w;
            } else {
                right.insert(e.id);
            }
        }
        if left.is_empty() {
            let first = *right.iter().next().unwrap();
            right.remove(&first);
            left.insert(first);
        }
        let split = crate::graph::vertex_split(&cur, v, &left, &right)?;
        chain.push(split.bridge);
        cur = split.graph;
    }
    chain.reverse();
    Ok((cur, chain))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::spanning_forest;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn fundamental_basis(g: &Graph) -> Vec<EdgeSet> {
        crate::cycle_space::fundamental_cycles(g, &spanning_forest(g)).unwrap()
    }

    #[test]
    fn contract_bridge_keeps_charges() {
        // Triangle with a pendant bridge.
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 0), (2, 3)]);
        let b = fundamental_basis(&g);
        let before = charges(g.edge_capacity(), &b);
        let (gc, bc) = contract_basis(&g, &b, 3).unwrap();
        let after = charges(gc.edge_capacity(), &bc);
        assert_eq!(before[0..3], after[0..3]);
    }

    #[test]
    fn contract_triangle_edge_gives_parallel_pair() {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let b = fundamental_basis(&g);
        let (gc, bc) = contract_basis(&g, &b, 0).unwrap();
        assert_eq!(gc.edge_count(), 2);
        assert_eq!(bc[0].len(), 2);
    }

    #[test]
    fn contract_loop_rejected() {
        let mut g = Graph::from_edges(2, &[(0, 1)]);
        let l = g.add_edge(0, 0).unwrap();
        g.add_edge(0, 1).unwrap();
        let b = fundamental_basis(&g);
        assert!(matches!(
            contract_basis(&g, &b, l),
            Err(Error::LoopContraction(_))
        ));
    }

    #[test]
    fn add_edge_bumps_by_at_most_one() {
        let g = k4();
        let b = fundamental_basis(&g);
        let max = charges(g.edge_capacity(), &b).into_iter().max().unwrap();
        let (g2, b2, _) = add_edge_basis(&g, &b, 0, 1).unwrap();
        let max2 = charges(g2.edge_capacity(), &b2).into_iter().max().unwrap();
        assert!(max2 <= max + 1);
        assert_eq!(b2.len(), b.len() + 1);
    }

    #[test]
    fn duplicate_splits_load() {
        // Triangle with basis {C}: duplicating edge 0 keeps max charge 2.
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let b = fundamental_basis(&g);
        let (g2, b2, _) = duplicate_edge_basis(&g, &b, 0).unwrap();
        let max = charges(g2.edge_capacity(), &b2).into_iter().max().unwrap();
        assert!(max <= 2);
        assert_eq!(g2.betti(), 2);
    }

    #[test]
    fn duplicate_bridge_makes_two_cycle() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let (g2, b2, _) = duplicate_edge_basis(&g, &[], 0).unwrap();
        assert_eq!(g2.betti(), 1);
        assert_eq!(b2.len(), 1);
        assert_eq!(b2[0].len(), 2);
    }

    #[test]
    fn subdivision_preserves_charges() {
        let g = k4();
        let b = fundamental_basis(&g);
        let before = charges(g.edge_capacity(), &b);
        let (g2, b2, [e1, e2], _) = subdivide_basis(&g, &b, 4).unwrap();
        let after = charges(g2.edge_capacity(), &b2);
        for e in 0..4 {
            assert_eq!(before[e], after[e]);
        }
        assert_eq!(after[e1], before[4]);
        assert_eq!(after[e2], before[4]);
    }

    #[test]
    fn replace_edge_with_two_path_matches_subdivision() {
        let g = k4();
        let b = fundamental_basis(&g);
        let mut h = Graph::with_vertices(3);
        h.add_edge(0, 1).unwrap();
        h.add_edge(1, 2).unwrap();
        let term = TerminalGraph::new(h, 0, 2).unwrap();
        let ell = b.iter().filter(|s| s.contains(4)).count();
        let path = EdgeSet::from_edges(term.graph.edge_capacity(), [0, 1]);
        let ab = AugmentedBasis {
            basis: vec![],
            paths: vec![path; ell],
            k: ell,
        };
        let rep = replace_edge_basis(&g, &b, 4, &term, &ab).unwrap();
        // Same structure as直接 subdivision.
        let (gs, _, _, _) = subdivide_basis(&g, &b, 4).unwrap();
        assert!(crate::iso::are_isomorphic(&rep.graph, &gs));
    }

    #[test]
    fn augmented_number_of_parallel_pair() {
        let h = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let term = TerminalGraph::new(h, 0, 1).unwrap();
        for ell in 0..4 {
            let ab =
                augmented_basis_number(&term, ell, AugmentedMode::Exact { max_betti: 8 }).unwrap();
            assert_eq!(ab.k, 1 + ell.div_ceil(2), "ell={ell}");
        }
    }

    #[test]
    fn augmented_number_of_two_path() {
        let h = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        let term = TerminalGraph::new(h, 0, 2).unwrap();
        for ell in 1..4 {
            let ab =
                augmented_basis_number(&term, ell, AugmentedMode::Exact { max_betti: 8 }).unwrap();
            assert_eq!(ab.k, ell);
        }
    }

    #[test]
    fn circular_k4_has_one_crossing() {
        let g = k4();
        let schedule = circular_layout_schedule(&g, &[0, 1, 2, 3]).unwrap();
        assert_eq!(schedule.crossings.len(), 1);
        let out = make_1planar_by_subdivision(&g, &schedule).unwrap();
        assert!(out.embedding.validate().is_empty());
        assert_eq!(out.embedding.crossing_count(), 1);
        // One crossing needs no subdivision at all.
        assert!(out.contraction_chain.is_empty());
        let profile = crate::embedding::classify(&out.embedding).unwrap();
        assert!(profile.ic);
    }

    #[test]
    fn circular_k5_has_five_crossings_and_is_ic() {
        let mut edges = Vec::new();
        for u in 0..5 {
            for v in (u + 1)..5 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(5, &edges);
        let schedule = circular_layout_schedule(&g, &[0, 1, 2, 3, 4]).unwrap();
        assert_eq!(schedule.crossings.len(), 5);
        let out = make_1planar_by_subdivision(&g, &schedule).unwrap();
        assert!(out.embedding.validate().is_empty());
        assert_eq!(out.embedding.crossing_count(), 5);
        let profile = crate::embedding::classify(&out.embedding).unwrap();
        assert!(profile.ic, "inserted vertices must isolate crossings");
        // Contracting the chain recovers K5.
        let back =
            crate::search::apply_contraction_chain(&out.graph, &out.contraction_chain).unwrap();
        assert!(crate::iso::are_isomorphic(&back, &g));
    }

    #[test]
    fn outerplanar_order_has_empty_schedule() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        let schedule = circular_layout_schedule(&g, &[0, 1, 2, 3]).unwrap();
        assert!(schedule.crossings.is_empty());
        let out = make_1planar_by_subdivision(&g, &schedule).unwrap();
        assert_eq!(out.embedding.crossing_count(), 0);
        assert!(out.embedding.validate().is_empty());
    }

    #[test]
    fn degree_reduce_to_cubic() {
        let mut edges = Vec::new();
        for u in 0..6 {
            for v in (u + 1)..6 {
                edges.push((u, v));
            }
        }
        let g = Graph::from_edges(6, &edges);
        let (reduced, chain) = degree_reduce(&g).unwrap();
        assert!(reduced.vertices().all(|v| reduced.degree(v) <= 3));
        let back = crate::search::apply_contraction_chain(&reduced, &chain).unwrap();
        assert!(crate::iso::are_isomorphic(&back, &g));
    }
}
