//! GF(2) linear algebra over edge sets.
//!
//! Everything in the crate reduces to XOR kernels on [`EdgeSet`]: Eulerian
//! checks, fundamental cycles, rank and span, charge audits, and the k-basis
//! verdicts the rest of the artifact is built on.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::graph::{EdgeId, Graph, SpanningForest};
use crate::{Error, Result};

/// GF(2) vector over edge ids, fixed width = the parent graph's edge
/// capacity. Addition is symmetric difference, i.e. bitwise XOR.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct EdgeSet {
    width: usize,
    words: Vec<u64>,
}

impl std::fmt::Debug for EdgeSet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "EdgeSet{:?}", self.iter().collect::<Vec<_>>())
    }
}

impl EdgeSet {
    pub fn empty(width: usize) -> Self {
        EdgeSet {
            width,
            words: vec![0; width.div_ceil(64)],
        }
    }

    /// Empty set sized for `g`.
    pub fn for_graph(g: &Graph) -> Self {
        EdgeSet::empty(g.edge_capacity())
    }

    pub fn from_edges(width: usize, ids: impl IntoIterator<Item = EdgeId>) -> Self {
        let mut s = EdgeSet::empty(width);
        for id in ids {
            s.insert(id);
        }
        s
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn insert(&mut self, id: EdgeId) {
        assert!(id < self.width, "edge id {id} out of width {}", self.width);
        self.words[id / 64] |= 1 << (id % 64);
    }

    pub fn remove(&mut self, id: EdgeId) {
        if id < self.width {
            self.words[id / 64] &= !(1 << (id % 64));
        }
    }

    pub fn contains(&self, id: EdgeId) -> bool {
        id < self.width && (self.words[id / 64] >> (id % 64)) & 1 == 1
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Lowest set bit; the elimination pivot.
    pub fn min_edge(&self) -> Option<EdgeId> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * 64 + w.trailing_zeros() as usize);
            }
        }
        None
    }

    pub fn xor_assign(&mut self, other: &EdgeSet) {
        assert_eq!(self.width, other.width, "EdgeSet width mismatch");
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn xor(&self, other: &EdgeSet) -> EdgeSet {
        let mut out = self.clone();
        out.xor_assign(other);
        out
    }

    /// Same member set, re-sized to a new width (must fit).
    pub fn resized(&self, width: usize) -> EdgeSet {
        let mut out = EdgeSet::empty(width);
        for id in self.iter() {
            out.insert(id);
        }
        out
    }

    pub fn iter(&self) -> impl Iterator<Item = EdgeId> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    None
                } else {
                    let b = w.trailing_zeros() as usize;
                    w &= w - 1;
                    Some(i * 64 + b)
                }
            })
        })
    }

    /// Verifies every member id names an edge of `g`.
    pub fn check_edges(&self, g: &Graph) -> Result<()> {
        let foreign: Vec<EdgeId> = self.iter().filter(|&id| !g.has_edge(id)).collect();
        if foreign.is_empty() {
            Ok(())
        } else {
            Err(Error::ForeignEdges(foreign))
        }
    }
}

/// True iff every vertex has even degree in `s`. A loop adds 2 to its vertex,
/// so loops never break parity.
pub fn is_eulerian(g: &Graph, s: &EdgeSet) -> Result<bool> {
    s.check_edges(g)?;
    let mut odd: BTreeMap<usize, bool> = BTreeMap::new();
    for id in s.iter() {
        let e = g.edge(id)?;
        if e.is_loop() {
            continue;
        }
        *odd.entry(e.u).or_insert(false) ^= true;
        *odd.entry(e.v).or_insert(false) ^= true;
    }
    Ok(odd.values().all(|&o| !o))
}

/// One fundamental cycle per non-forest edge, in ascending edge id order:
/// the edge plus the forest path between its endpoints.
pub fn fundamental_cycles(g: &Graph, f: &SpanningForest) -> Result<Vec<EdgeSet>> {
    f.validate(g)?;
    let width = g.edge_capacity();
    let mut out = Vec::new();
    for e in g.edges() {
        if f.contains(e.id) {
            continue;
        }
        let mut cycle = EdgeSet::empty(width);
        cycle.insert(e.id);
        if !e.is_loop() {
            let path = f.path(g, e.u, e.v).ok_or_else(|| {
                Error::MismatchedForest("endpoints in different forest components".into())
            })?;
            for p in path {
                cycle.insert(p);
            }
        }
        out.push(cycle);
    }
    Ok(out)
}

/// GF(2) rank by elimination, pivoting on the lowest set bit and processing
/// elements in input order.
pub fn rank(sets: &[EdgeSet]) -> usize {
    let mut pivots: Vec<EdgeSet> = Vec::new();
    let mut r = 0;
    for s in sets {
        if reduce(s, &pivots).is_some() {
            r += 1;
        } else {
            continue;
        }
        // reduce() appends internally only when independent; re-do to keep
        // pivots in sync without double work below.
        let mut cur = s.clone();
        for p in &pivots {
            let pv = p.min_edge().unwrap();
            if cur.contains(pv) {
                cur.xor_assign(p);
            }
        }
        pivots.push(cur);
    }
    debug_assert_eq!(pivots.len(), r);
    r
}

/// Reduces `s` against pivot rows; `Some(residue)` when independent.
fn reduce(s: &EdgeSet, pivots: &[EdgeSet]) -> Option<EdgeSet> {
    let mut cur = s.clone();
    for p in pivots {
        let pv = p.min_edge().expect("pivots are nonzero");
        if cur.contains(pv) {
            cur.xor_assign(p);
        }
    }
    if cur.is_empty() {
        None
    } else {
        Some(cur)
    }
}

/// Incremental GF(2) eliminator used by the search and extraction paths.
#[derive(Debug, Clone, Default)]
pub struct Eliminator {
    pivots: Vec<EdgeSet>,
}

impl Eliminator {
    pub fn new() -> Self {
        Eliminator::default()
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Adds `s` if independent of the current span; returns whether it was.
    pub fn add(&mut self, s: &EdgeSet) -> bool {
        match reduce(s, &self.pivots) {
            Some(residue) => {
                self.pivots.push(residue);
                true
            }
            None => false,
        }
    }

    /// Undoes the most recent successful [`Eliminator::add`].
    pub fn pop(&mut self) {
        self.pivots.pop();
    }

    pub fn contains(&self, s: &EdgeSet) -> bool {
        reduce(s, &self.pivots).is_none()
    }
}

/// Per-edge charge map of a collection of edge sets.
pub fn charges(width: usize, sets: &[EdgeSet]) -> Vec<usize> {
    let mut ch = vec![0usize; width];
    for s in sets {
        for id in s.iter() {
            ch[id] += 1;
        }
    }
    ch
}

/// Audited verdict for a candidate k-basis.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BasisReport {
    pub elements: Vec<Vec<EdgeId>>,
    pub dimension_claimed: usize,
    pub betti: usize,
    pub all_eulerian: bool,
    pub independent: bool,
    pub generates: bool,
    /// Dense array indexed by edge id.
    pub charge: Vec<usize>,
    pub max_charge: usize,
    pub k: usize,
    pub verdict: bool,
}

/// Audits `candidate` as a k-basis of the cycle space of `g`: all elements
/// Eulerian, independent, generating, and every edge charged at most `k`.
pub fn verify_kbasis(g: &Graph, candidate: &[EdgeSet], k: usize) -> Result<BasisReport> {
    for s in candidate {
        s.check_edges(g)?;
    }
    let betti = g.betti();
    let mut all_eulerian = true;
    for s in candidate {
        if !is_eulerian(g, s)? {
            all_eulerian = false;
        }
    }
    let r = rank(candidate);
    let independent = r == candidate.len();
    let generates = r == betti;
    let charge = charges(g.edge_capacity(), candidate);
    let max_charge = charge.iter().copied().max().unwrap_or(0);
    let verdict = all_eulerian && independent && generates && max_charge <= k;
    Ok(BasisReport {
        elements: candidate.iter().map(|s| s.iter().collect()).collect(),
        dimension_claimed: candidate.len(),
        betti,
        all_eulerian,
        independent,
        generates,
        charge,
        max_charge,
        k,
        verdict,
    })
}

/// Expresses `target` over `basis`: the ascending index subset whose GF(2)
/// sum is `target`, or `None` when the target is outside the span.
pub fn decompose(target: &EdgeSet, basis: &[EdgeSet]) -> Option<Vec<usize>> {
    // Eliminate with combination tracking over basis indices.
    let n = basis.len();
    let mut rows: Vec<(EdgeSet, Vec<u64>)> = Vec::new();
    let comb_words = n.div_ceil(64).max(1);
    for (i, s) in basis.iter().enumerate() {
        let mut cur = s.clone();
        let mut comb = vec![0u64; comb_words];
        comb[i / 64] |= 1 << (i % 64);
        for (p, pc) in &rows {
            let pv = p.min_edge().unwrap();
            if cur.contains(pv) {
                cur.xor_assign(p);
                for (a, b) in comb.iter_mut().zip(pc) {
                    *a ^= b;
                }
            }
        }
        if !cur.is_empty() {
            rows.push((cur, comb));
        }
    }
    let mut cur = target.clone();
    let mut comb = vec![0u64; comb_words];
    for (p, pc) in &rows {
        let pv = p.min_edge().unwrap();
        if cur.contains(pv) {
            cur.xor_assign(p);
            for (a, b) in comb.iter_mut().zip(pc) {
                *a ^= b;
            }
        }
    }
    if !cur.is_empty() {
        return None;
    }
    let mut idx = Vec::new();
    for i in 0..n {
        if (comb[i / 64] >> (i % 64)) & 1 == 1 {
            idx.push(i);
        }
    }
    Some(idx)
}

/// Greedy basis extraction: keeps the earliest elements that increase rank.
/// Errors unless the input generates the full cycle space.
pub fn extract_basis(g: &Graph, generating: &[EdgeSet]) -> Result<Vec<EdgeSet>> {
    let betti = g.betti();
    let mut elim = Eliminator::new();
    let mut out = Vec::new();
    for s in generating {
        if elim.add(s) {
            out.push(s.clone());
            if elim.rank() == betti {
                break;
            }
        }
    }
    if elim.rank() != betti {
        return Err(Error::NotGenerating {
            rank: elim.rank(),
            betti,
        });
    }
    Ok(out)
}

/// All `2^betti` Eulerian subgraphs, or an error when that exceeds `cap`.
/// Ordered by the subset index over fundamental cycles, so element 0 is the
/// empty set.
pub fn enumerate_cycle_space(g: &Graph, cap: u64) -> Result<Vec<EdgeSet>> {
    let betti = g.betti();
    if betti >= 63 || (1u64 << betti) > cap {
        return Err(Error::CapExceeded { betti, cap });
    }
    let f = crate::graph::spanning_forest(g);
    let fund = fundamental_cycles(g, &f)?;
    let width = g.edge_capacity();
    let mut out = Vec::with_capacity(1 << betti);
    out.push(EdgeSet::empty(width));
    // Gray-code walk: one XOR per new element.
    let mut current = EdgeSet::empty(width);
    let mut prev_gray = 0u64;
    for i in 1u64..(1 << betti) {
        let gray = i ^ (i >> 1);
        let flipped = (gray ^ prev_gray).trailing_zeros() as usize;
        current.xor_assign(&fund[flipped]);
        prev_gray = gray;
        out.push(current.clone());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::spanning_forest;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    fn triangle() -> Graph {
        Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)])
    }

    #[test]
    fn empty_set_is_eulerian() {
        let g = triangle();
        assert!(is_eulerian(&g, &EdgeSet::for_graph(&g)).unwrap());
    }

    #[test]
    fn single_edge_is_not_eulerian() {
        let g = triangle();
        let s = EdgeSet::from_edges(g.edge_capacity(), [0]);
        assert!(!is_eulerian(&g, &s).unwrap());
    }

    #[test]
    fn single_loop_is_eulerian() {
        let mut g = triangle();
        let l = g.add_edge(1, 1).unwrap();
        let s = EdgeSet::from_edges(g.edge_capacity(), [l]);
        assert!(is_eulerian(&g, &s).unwrap());
    }

    #[test]
    fn foreign_edges_rejected() {
        let g = triangle();
        let s = EdgeSet::from_edges(10, [7]);
        assert!(matches!(is_eulerian(&g, &s), Err(Error::ForeignEdges(_))));
    }

    #[test]
    fn fundamental_cycles_c5() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let f = spanning_forest(&g);
        let cycles = fundamental_cycles(&g, &f).unwrap();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].len(), 5);
    }

    #[test]
    fn fundamental_cycle_of_loop_is_singleton() {
        let mut g = triangle();
        let l = g.add_edge(0, 0).unwrap();
        let f = spanning_forest(&g);
        let cycles = fundamental_cycles(&g, &f).unwrap();
        assert_eq!(cycles.len(), 2);
        assert!(cycles.iter().any(|c| c.len() == 1 && c.contains(l)));
        for c in &cycles {
            assert!(is_eulerian(&g, c).unwrap());
        }
    }

    #[test]
    fn rank_detects_dependency() {
        let g = k4();
        let w = g.edge_capacity();
        let a = EdgeSet::from_edges(w, [0, 3, 1]); // triangle 0-1-2
        let b = EdgeSet::from_edges(w, [0, 4, 2]); // triangle 0-1-3
        let ab = a.xor(&b);
        assert_eq!(rank(&[]), 0);
        assert_eq!(rank(&[a.clone(), b.clone(), ab]), 2);
        assert_eq!(rank(&[a, b]), 2);
    }

    #[test]
    fn rank_of_full_small_space() {
        let g = triangle();
        let mut g2 = g.clone();
        g2.add_edge(0, 1).unwrap();
        g2.add_edge(1, 2).unwrap();
        // 3-dim space from K4's fundamental cycles: all 7 nonzero vectors.
        let k4 = k4();
        let f = spanning_forest(&k4);
        let fund = fundamental_cycles(&k4, &f).unwrap();
        let all = enumerate_cycle_space(&k4, 1 << 10).unwrap();
        let nonzero: Vec<EdgeSet> = all.into_iter().filter(|s| !s.is_empty()).collect();
        assert_eq!(nonzero.len(), 7);
        assert_eq!(rank(&nonzero), 3);
        assert_eq!(rank(&fund), 3);
    }

    #[test]
    fn decompose_roundtrip() {
        let g = k4();
        let f = spanning_forest(&g);
        let basis = fundamental_cycles(&g, &f).unwrap();
        let target = basis[0].xor(&basis[2]);
        let idx = decompose(&target, &basis).unwrap();
        assert_eq!(idx, vec![0, 2]);
        let mut sum = EdgeSet::for_graph(&g);
        for i in idx {
            sum.xor_assign(&basis[i]);
        }
        assert_eq!(sum, target);
    }

    #[test]
    fn decompose_singleton_and_not_in_span() {
        let g = k4();
        let f = spanning_forest(&g);
        let basis = fundamental_cycles(&g, &f).unwrap();
        assert_eq!(decompose(&basis[1], &basis), Some(vec![1]));
        let single = EdgeSet::from_edges(g.edge_capacity(), [0]);
        assert_eq!(decompose(&single, &basis), None);
    }

    #[test]
    fn extract_basis_drops_redundant() {
        let g = k4();
        let f = spanning_forest(&g);
        let mut sets = fundamental_cycles(&g, &f).unwrap();
        let dep = sets[0].xor(&sets[1]);
        sets.push(dep);
        let basis = extract_basis(&g, &sets).unwrap();
        assert_eq!(basis.len(), 3);
        assert_eq!(basis, fundamental_cycles(&g, &f).unwrap());
    }

    #[test]
    fn extract_basis_requires_generation() {
        let g = k4();
        let f = spanning_forest(&g);
        let sets = &fundamental_cycles(&g, &f).unwrap()[..2];
        assert!(matches!(
            extract_basis(&g, sets),
            Err(Error::NotGenerating { rank: 2, betti: 3 })
        ));
    }

    #[test]
    fn enumerate_triangle_and_cap() {
        let g = triangle();
        let space = enumerate_cycle_space(&g, 1 << 16).unwrap();
        assert_eq!(space.len(), 2);
        assert!(space[0].is_empty());
        assert_eq!(space[1].len(), 3);

        let k6 = {
            let mut edges = Vec::new();
            for u in 0..6 {
                for v in (u + 1)..6 {
                    edges.push((u, v));
                }
            }
            Graph::from_edges(6, &edges)
        };
        assert_eq!(k6.betti(), 10);
        assert!(matches!(
            enumerate_cycle_space(&k6, 512),
            Err(Error::CapExceeded { betti: 10, cap: 512 })
        ));
    }

    #[test]
    fn enumeration_closed_under_xor() {
        let g = k4();
        let space = enumerate_cycle_space(&g, 1 << 16).unwrap();
        assert_eq!(space.len(), 8);
        for s in &space {
            assert!(is_eulerian(&g, s).unwrap());
        }
        let set: std::collections::BTreeSet<&EdgeSet> = space.iter().collect();
        for a in &space {
            for b in &space {
                let c = a.xor(b);
                assert!(set.contains(&c));
            }
        }
    }

    #[test]
    fn verify_kbasis_facial_triangle() {
        let g = triangle();
        let c = EdgeSet::from_edges(g.edge_capacity(), [0, 1, 2]);
        let report = verify_kbasis(&g, &[c], 2).unwrap();
        assert!(report.verdict);
        assert_eq!(report.max_charge, 1);
    }

    #[test]
    fn charge_bound_of_fundamental_cycles() {
        // max charge <= longest forest path + 1, structurally.
        let g = Graph::from_edges(
            7,
            &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 0), (1, 5), (2, 4)],
        );
        let f = spanning_forest(&g);
        let fund = fundamental_cycles(&g, &f).unwrap();
        let ch = charges(g.edge_capacity(), &fund);
        let tree = g.edge_subgraph(&f.tree_edges);
        let mut longest = 0;
        for u in tree.vertices() {
            for v in tree.vertices() {
                if let Some(p) = tree.shortest_path(u, v) {
                    longest = longest.max(p.len());
                }
            }
        }
        assert!(ch.iter().max().unwrap() <= &(longest + 1));
    }
}
