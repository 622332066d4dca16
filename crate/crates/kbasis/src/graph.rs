//! Labeled multigraph with stable edge identities.
//!
//! Edge ids are dense integers assigned at creation and never reused; every
//! [`crate::cycle_space::EdgeSet`] indexes by them, so all transforms keep
//! surviving ids intact and mint fresh ids for new edges.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

pub type VertexId = usize;
pub type EdgeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Edge {
    pub id: EdgeId,
    pub u: VertexId,
    pub v: VertexId,
}

impl Edge {
    pub fn is_loop(&self) -> bool {
        self.u == self.v
    }

    /// The endpoint other than `w`. For loops returns `w` itself.
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.u {
            self.v
        } else {
            self.u
        }
    }

    pub fn touches(&self, w: VertexId) -> bool {
        self.u == w || self.v == w
    }
}

/// Multigraph. Loops and parallel edges are permitted; contraction creates
/// them, so every algorithm below has to cope.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Graph {
    vertices: BTreeSet<VertexId>,
    edges: BTreeMap<EdgeId, (VertexId, VertexId)>,
    next_vertex: VertexId,
    next_edge: EdgeId,
}

impl Graph {
    pub fn new() -> Self {
        Graph::default()
    }

    /// Graph on vertices `0..n` with no edges.
    pub fn with_vertices(n: usize) -> Self {
        let mut g = Graph::new();
        for _ in 0..n {
            g.add_vertex();
        }
        g
    }

    /// Build from an edge list over vertices `0..n`; edge ids follow list order.
    pub fn from_edges(n: usize, list: &[(VertexId, VertexId)]) -> Self {
        let mut g = Graph::with_vertices(n);
        for &(u, v) in list {
            g.add_edge(u, v).expect("endpoints in 0..n");
        }
        g
    }

    pub fn add_vertex(&mut self) -> VertexId {
        let v = self.next_vertex;
        self.next_vertex += 1;
        self.vertices.insert(v);
        v
    }

    /// Insert a vertex with a caller-chosen id (fixture loading).
    pub fn add_vertex_id(&mut self, v: VertexId) {
        self.vertices.insert(v);
        self.next_vertex = self.next_vertex.max(v + 1);
    }

    pub fn add_edge(&mut self, u: VertexId, v: VertexId) -> Result<EdgeId> {
        if !self.vertices.contains(&u) {
            return Err(Error::NoSuchVertex(u));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::NoSuchVertex(v));
        }
        let id = self.next_edge;
        self.next_edge += 1;
        self.edges.insert(id, (u, v));
        Ok(id)
    }

    /// Insert an edge with a caller-chosen id (fixture loading). Fails on reuse.
    pub fn add_edge_id(&mut self, id: EdgeId, u: VertexId, v: VertexId) -> Result<()> {
        if !self.vertices.contains(&u) {
            return Err(Error::NoSuchVertex(u));
        }
        if !self.vertices.contains(&v) {
            return Err(Error::NoSuchVertex(v));
        }
        if self.edges.contains_key(&id) {
            return Err(Error::Malformed(format!("edge id {id} reused")));
        }
        self.edges.insert(id, (u, v));
        self.next_edge = self.next_edge.max(id + 1);
        Ok(())
    }

    pub fn remove_edge(&mut self, id: EdgeId) -> Result<()> {
        self.edges
            .remove(&id)
            .map(|_| ())
            .ok_or(Error::NoSuchEdge(id))
    }

    /// Removes a vertex and all incident edges.
    pub fn remove_vertex(&mut self, v: VertexId) -> Result<()> {
        if !self.vertices.remove(&v) {
            return Err(Error::NoSuchVertex(v));
        }
        self.edges.retain(|_, &mut (a, b)| a != v && b != v);
        Ok(())
    }

    pub fn has_vertex(&self, v: VertexId) -> bool {
        self.vertices.contains(&v)
    }

    pub fn has_edge(&self, e: EdgeId) -> bool {
        self.edges.contains_key(&e)
    }

    pub fn edge(&self, id: EdgeId) -> Result<Edge> {
        self.edges
            .get(&id)
            .map(|&(u, v)| Edge { id, u, v })
            .ok_or(Error::NoSuchEdge(id))
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices.iter().copied()
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        self.edges.iter().map(|(&id, &(u, v))| Edge { id, u, v })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// One past the largest edge id ever issued; the width of bit-vectors
    /// indexed by this graph's edges.
    pub fn edge_capacity(&self) -> usize {
        self.next_edge
    }

    pub fn vertex_capacity(&self) -> usize {
        self.next_vertex
    }

    /// Incident edges in ascending id order; loops appear once.
    pub fn incident_edges(&self, v: VertexId) -> Vec<Edge> {
        self.edges().filter(|e| e.touches(v)).collect()
    }

    /// Loops add 2.
    pub fn degree(&self, v: VertexId) -> usize {
        self.edges()
            .map(|e| match (e.u == v, e.v == v) {
                (true, true) => 2,
                (true, false) | (false, true) => 1,
                _ => 0,
            })
            .sum()
    }

    /// Any edge joining `u` and `v` (smallest id), ignoring loops unless `u == v`.
    pub fn find_edge(&self, u: VertexId, v: VertexId) -> Option<EdgeId> {
        self.edges()
            .find(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
            .map(|e| e.id)
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for start in self.vertices() {
            if seen.contains(&start) {
                continue;
            }
            let mut comp = BTreeSet::new();
            let mut queue = VecDeque::from([start]);
            seen.insert(start);
            comp.insert(start);
            while let Some(x) = queue.pop_front() {
                for e in self.incident_edges(x) {
                    let y = e.other(x);
                    if seen.insert(y) {
                        comp.insert(y);
                        queue.push_back(y);
                    }
                }
            }
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.components().len() <= 1
    }

    /// Dimension of the cycle space: `m - n + c`.
    pub fn betti(&self) -> usize {
        self.edge_count() + self.components().len() - self.vertex_count()
    }

    /// Length of a shortest cycle. Loops count 1, parallel pairs 2.
    pub fn girth(&self) -> Result<usize> {
        if self.edges().any(|e| e.is_loop()) {
            return Ok(1);
        }
        let mut pair_seen = BTreeSet::new();
        for e in self.edges() {
            let key = (e.u.min(e.v), e.u.max(e.v));
            if !pair_seen.insert(key) {
                return Ok(2);
            }
        }
        // Simple graph from here: BFS from every vertex; a non-tree edge
        // closing at depths d(x), d(y) witnesses a cycle of length
        // d(x)+d(y)+1, and the minimum over all roots is the girth.
        let mut best = usize::MAX;
        for root in self.vertices() {
            let mut dist: BTreeMap<VertexId, usize> = BTreeMap::new();
            let mut via: BTreeMap<VertexId, EdgeId> = BTreeMap::new();
            dist.insert(root, 0);
            let mut queue = VecDeque::from([root]);
            while let Some(x) = queue.pop_front() {
                for e in self.incident_edges(x) {
                    let y = e.other(x);
                    if via.get(&x) == Some(&e.id) {
                        continue;
                    }
                    match dist.get(&y) {
                        None => {
                            dist.insert(y, dist[&x] + 1);
                            via.insert(y, e.id);
                            queue.push_back(y);
                        }
                        Some(&dy) => {
                            best = best.min(dist[&x] + dy + 1);
                        }
                    }
                }
            }
        }
        if best == usize::MAX {
            Err(Error::Forest)
        } else {
            Ok(best)
        }
    }

    /// Shortest path `u -> v` as an edge id list; BFS explores ascending ids
    /// so the result is deterministic. Empty path for `u == v`.
    pub fn shortest_path(&self, u: VertexId, v: VertexId) -> Option<Vec<EdgeId>> {
        if !self.has_vertex(u) || !self.has_vertex(v) {
            return None;
        }
        if u == v {
            return Some(Vec::new());
        }
        let mut pred: BTreeMap<VertexId, (VertexId, EdgeId)> = BTreeMap::new();
        let mut queue = VecDeque::from([u]);
        let mut seen = BTreeSet::from([u]);
        while let Some(x) = queue.pop_front() {
            for e in self.incident_edges(x) {
                let y = e.other(x);
                if seen.insert(y) {
                    pred.insert(y, (x, e.id));
                    if y == v {
                        let mut path = Vec::new();
                        let mut cur = v;
                        while cur != u {
                            let (p, pe) = pred[&cur];
                            path.push(pe);
                            cur = p;
                        }
                        path.reverse();
                        return Some(path);
                    }
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// Contract a non-loop edge: delete it and merge its endpoints into a
    /// fresh vertex that inherits all other incidences. Parallel copies of
    /// the contracted edge become loops.
    pub fn contract_edge(&self, e: EdgeId) -> Result<(Graph, VertexId)> {
        let edge = self.edge(e)?;
        if edge.is_loop() {
            return Err(Error::LoopContraction(e));
        }
        let mut g = self.clone();
        g.remove_edge(e)?;
        let merged = g.add_vertex();
        let ids: Vec<EdgeId> = g.edges().map(|x| x.id).collect();
        for id in ids {
            let (mut a, mut b) = g.edges[&id];
            if a == edge.u || a == edge.v {
                a = merged;
            }
            if b == edge.u || b == edge.v {
                b = merged;
            }
            g.edges.insert(id, (a, b));
        }
        g.vertices.remove(&edge.u);
        g.vertices.remove(&edge.v);
        Ok((g, merged))
    }

    /// Subgraph induced by an edge id set (vertex set preserved in full).
    pub fn edge_subgraph(&self, keep: &BTreeSet<EdgeId>) -> Graph {
        let mut g = Graph {
            vertices: self.vertices.clone(),
            edges: BTreeMap::new(),
            next_vertex: self.next_vertex,
            next_edge: self.next_edge,
        };
        for (&id, &ends) in &self.edges {
            if keep.contains(&id) {
                g.edges.insert(id, ends);
            }
        }
        g
    }
}

/// Spanning forest of a parent graph: `n - c` tree edges, acyclic, spanning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanningForest {
    pub tree_edges: BTreeSet<EdgeId>,
}

impl SpanningForest {
    pub fn contains(&self, e: EdgeId) -> bool {
        self.tree_edges.contains(&e)
    }

    /// Unique tree path `u -> v` (edge ids), or None if different components.
    pub fn path(&self, g: &Graph, u: VertexId, v: VertexId) -> Option<Vec<EdgeId>> {
        g.edge_subgraph(&self.tree_edges).shortest_path(u, v)
    }

    /// Checks the forest invariants against its parent graph.
    pub fn validate(&self, g: &Graph) -> Result<()> {
        for &e in &self.tree_edges {
            if !g.has_edge(e) {
                return Err(Error::MismatchedForest(format!("edge {e} not in graph")));
            }
        }
        let sub = g.edge_subgraph(&self.tree_edges);
        let expected = g.vertex_count() - g.components().len();
        if self.tree_edges.len() != expected {
            return Err(Error::MismatchedForest(format!(
                "{} tree edges, expected {expected}",
                self.tree_edges.len()
            )));
        }
        if sub.betti() != 0 {
            return Err(Error::MismatchedForest("forest contains a cycle".into()));
        }
        if sub.components().len() != g.components().len() {
            return Err(Error::MismatchedForest("forest does not span".into()));
        }
        Ok(())
    }
}

/// Deterministic BFS forest: roots at the smallest vertex id of each
/// component, edges explored in ascending id order.
pub fn spanning_forest(g: &Graph) -> SpanningForest {
    let mut tree = BTreeSet::new();
    let mut seen = BTreeSet::new();
    for root in g.vertices() {
        if seen.contains(&root) {
            continue;
        }
        seen.insert(root);
        let mut queue = VecDeque::from([root]);
        while let Some(x) = queue.pop_front() {
            for e in g.incident_edges(x) {
                let y = e.other(x);
                if !seen.contains(&y) {
                    seen.insert(y);
                    tree.insert(e.id);
                    queue.push_back(y);
                }
            }
        }
    }
    SpanningForest { tree_edges: tree }
}

/// Edge-id sets of the maximal 2-connected subgraphs. Bridges and loops form
/// singleton blocks.
pub fn blocks(g: &Graph) -> Vec<BTreeSet<EdgeId>> {
    let mut out: Vec<BTreeSet<EdgeId>> = Vec::new();
    let mut disc: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut low: BTreeMap<VertexId, usize> = BTreeMap::new();
    let mut counter = 0usize;
    let mut estack: Vec<EdgeId> = Vec::new();

    // Loops are their own blocks and never enter the DFS.
    for e in g.edges() {
        if e.is_loop() {
            out.push(BTreeSet::from([e.id]));
        }
    }

    struct Frame {
        v: VertexId,
        parent_edge: Option<EdgeId>,
        edges: Vec<Edge>,
        next: usize,
    }

    for root in g.vertices() {
        if disc.contains_key(&root) {
            continue;
        }
        disc.insert(root, counter);
        low.insert(root, counter);
        counter += 1;
        let mut stack = vec![Frame {
            v: root,
            parent_edge: None,
            edges: g.incident_edges(root),
            next: 0,
        }];
        while let Some(frame) = stack.last_mut() {
            if frame.next < frame.edges.len() {
                let e = frame.edges[frame.next];
                frame.next += 1;
                if e.is_loop() || Some(e.id) == frame.parent_edge {
                    continue;
                }
                let v = frame.v;
                let w = e.other(v);
                match disc.get(&w) {
                    None => {
                        estack.push(e.id);
                        disc.insert(w, counter);
                        low.insert(w, counter);
                        counter += 1;
                        stack.push(Frame {
                            v: w,
                            parent_edge: Some(e.id),
                            edges: g.incident_edges(w),
                            next: 0,
                        });
                    }
                    Some(&dw) => {
                        if dw < disc[&v] {
                            estack.push(e.id);
                            let lv = low[&v];
                            low.insert(v, lv.min(dw));
                        }
                    }
                }
            } else {
                let done = stack.pop().unwrap();
                if let Some(parent) = stack.last() {
                    let pv = parent.v;
                    let lw = low[&done.v];
                    let lp = low[&pv];
                    low.insert(pv, lp.min(lw));
                    if lw >= disc[&pv] {
                        // Pop the block delimited by the tree edge into done.v.
                        let mut block = BTreeSet::new();
                        let stop = done.parent_edge.unwrap();
                        while let Some(id) = estack.pop() {
                            block.insert(id);
                            if id == stop {
                                break;
                            }
                        }
                        out.push(block);
                    }
                }
            }
        }
    }
    out
}

/// Result of [`tree_packing`]: either `k` edge-disjoint spanning trees or an
/// exact infeasibility verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TreePacking {
    Found(Vec<BTreeSet<EdgeId>>),
    Infeasible,
}

/// Exact packing of `k` pairwise edge-disjoint spanning trees via matroid
/// union augmentation. Loops are skipped (they are independent in no forest).
pub fn tree_packing(g: &Graph, k: usize) -> Result<TreePacking> {
    if !g.is_connected() {
        return Err(Error::Disconnected);
    }
    assert!(k >= 1, "k must be positive");
    let n = g.vertex_count();
    let mut forests: Vec<BTreeSet<EdgeId>> = vec![BTreeSet::new(); k];

    let component_split = |forest: &BTreeSet<EdgeId>, g: &Graph| -> BTreeMap<VertexId, usize> {
        let sub = g.edge_subgraph(forest);
        let mut label = BTreeMap::new();
        for (i, comp) in sub.components().iter().enumerate() {
            for &v in comp {
                label.insert(v, i);
            }
        }
        label
    };

    for e0 in g.edges() {
        if e0.is_loop() {
            continue;
        }
        // BFS over edges: label(f) = (pred, i) means f sits in forest i and
        // lies on the circuit of forest i + pred, so removing f admits pred.
        let mut label: BTreeMap<EdgeId, (EdgeId, usize)> = BTreeMap::new();
        let mut queue = VecDeque::from([e0.id]);
        let mut found: Option<(EdgeId, usize)> = None;
        'bfs: while let Some(x) = queue.pop_front() {
            let xe = g.edge(x)?;
            let holder = forests.iter().position(|f| f.contains(&x));
            for i in 0..k {
                if holder == Some(i) {
                    continue;
                }
                let comp = component_split(&forests[i], g);
                if comp[&xe.u] != comp[&xe.v] {
                    found = Some((x, i));
                    break 'bfs;
                }
                let sub = g.edge_subgraph(&forests[i]);
                let circuit = sub
                    .shortest_path(xe.u, xe.v)
                    .expect("same component implies a tree path");
                for f in circuit {
                    if f != x && !label.contains_key(&f) && f != e0.id {
                        label.insert(f, (x, i));
                        queue.push_back(f);
                    }
                }
            }
        }
        if let Some((mut cur, mut dest)) = found {
            // Unwind the augmenting sequence of swaps.
            loop {
                if cur == e0.id {
                    forests[dest].insert(cur);
                    break;
                }
                let (pred, holder) = label[&cur];
                debug_assert!(forests[holder].contains(&cur));
                forests[holder].remove(&cur);
                forests[dest].insert(cur);
                dest = holder;
                cur = pred;
            }
        }
    }

    if forests.iter().all(|f| f.len() == n - 1) {
        for f in &forests {
            debug_assert_eq!(g.edge_subgraph(f).betti(), 0);
        }
        Ok(TreePacking::Found(forests))
    } else {
        Ok(TreePacking::Infeasible)
    }
}

/// Outcome of [`vertex_split`]: the new graph, the two replacement vertices
/// and the fresh edge joining them.
#[derive(Debug, Clone)]
pub struct SplitOutcome {
    pub graph: Graph,
    pub left: VertexId,
    pub right: VertexId,
    pub bridge: EdgeId,
}

/// Replace `v` by two adjacent vertices and distribute its incidences per the
/// partition. Contracting the fresh edge recovers the input up to relabeling.
pub fn vertex_split(
    g: &Graph,
    v: VertexId,
    part_left: &BTreeSet<EdgeId>,
    part_right: &BTreeSet<EdgeId>,
) -> Result<SplitOutcome> {
    if !g.has_vertex(v) {
        return Err(Error::NoSuchVertex(v));
    }
    let incident: BTreeSet<EdgeId> = g.incident_edges(v).iter().map(|e| e.id).collect();
    if part_left.is_empty() || part_right.is_empty() {
        return Err(Error::InvalidSplit("both parts must be nonempty".into()));
    }
    if !part_left.is_disjoint(part_right) {
        return Err(Error::InvalidSplit("parts overlap".into()));
    }
    let union: BTreeSet<EdgeId> = part_left.union(part_right).copied().collect();
    if union != incident {
        return Err(Error::InvalidSplit(
            "parts must cover exactly the incident edges".into(),
        ));
    }
    let mut graph = g.clone();
    let left = graph.add_vertex();
    let right = graph.add_vertex();
    let assignments: Vec<(EdgeId, VertexId)> = part_left
        .iter()
        .map(|&id| (id, left))
        .chain(part_right.iter().map(|&id| (id, right)))
        .collect();
    for (id, target) in assignments {
        let (mut a, mut b) = graph.edges[&id];
        if a == v {
            a = target;
        }
        if b == v {
            b = target;
        }
        graph.edges.insert(id, (a, b));
    }
    graph.vertices.remove(&v);
    let bridge = graph.add_edge(left, right)?;
    Ok(SplitOutcome {
        graph,
        left,
        right,
        bridge,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k4() -> Graph {
        Graph::from_edges(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    }

    #[test]
    fn betti_examples() {
        assert_eq!(k4().betti(), 3);
        assert_eq!(Graph::with_vertices(5).betti(), 0);
    }

    #[test]
    fn betti_counts_loops() {
        let mut g = Graph::with_vertices(1);
        g.add_edge(0, 0).unwrap();
        assert_eq!(g.betti(), 1);
    }

    #[test]
    fn blocks_path_and_k4() {
        let path = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)]);
        let b = blocks(&path);
        assert_eq!(b.len(), 3);
        assert!(b.iter().all(|x| x.len() == 1));

        let b = blocks(&k4());
        assert_eq!(b.len(), 1);
        assert_eq!(b[0].len(), 6);
    }

    #[test]
    fn blocks_two_triangles_sharing_a_vertex() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 2)]);
        let mut b = blocks(&g);
        b.sort();
        assert_eq!(b.len(), 2);
        assert!(b.iter().all(|x| x.len() == 3));
    }

    #[test]
    fn blocks_loop_is_singleton() {
        let mut g = Graph::from_edges(2, &[(0, 1)]);
        let l = g.add_edge(0, 0).unwrap();
        let b = blocks(&g);
        assert_eq!(b.len(), 2);
        assert!(b.contains(&BTreeSet::from([l])));
    }

    #[test]
    fn spanning_forest_is_deterministic_star() {
        // K4 rooted at 0 explores ascending edge ids: edges 0,1,2 form the star.
        let f = spanning_forest(&k4());
        assert_eq!(f.tree_edges, BTreeSet::from([0, 1, 2]));
        f.validate(&k4()).unwrap();
    }

    #[test]
    fn spanning_forest_of_tree_is_itself() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        let f = spanning_forest(&g);
        assert_eq!(f.tree_edges.len(), 3);
    }

    #[test]
    fn betti_equals_nontree_edges() {
        let g = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)]);
        let f = spanning_forest(&g);
        assert_eq!(g.betti(), g.edge_count() - f.tree_edges.len());
    }

    #[test]
    fn tree_packing_single_tree() {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (1, 3)]);
        match tree_packing(&g, 1).unwrap() {
            TreePacking::Found(f) => assert_eq!(f[0].len(), 3),
            TreePacking::Infeasible => panic!("a tree packs itself"),
        }
    }

    #[test]
    fn tree_packing_k4_three_trees_infeasible() {
        assert_eq!(tree_packing(&k4(), 3).unwrap(), TreePacking::Infeasible);
    }

    #[test]
    fn tree_packing_doubled_cycle() {
        let g = Graph::from_edges(
            4,
            &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 1), (1, 2), (2, 3), (3, 0)],
        );
        match tree_packing(&g, 2).unwrap() {
            TreePacking::Found(f) => {
                assert_eq!(f.len(), 2);
                assert!(f[0].is_disjoint(&f[1]));
                for t in &f {
                    assert_eq!(t.len(), 3);
                    assert_eq!(g.edge_subgraph(t).betti(), 0);
                }
            }
            TreePacking::Infeasible => panic!("doubled C4 packs two trees"),
        }
    }

    #[test]
    fn tree_packing_disconnected_is_error() {
        let g = Graph::with_vertices(3);
        assert!(matches!(tree_packing(&g, 1), Err(Error::Disconnected)));
    }

    #[test]
    fn vertex_split_degree_four() {
        let g = Graph::from_edges(5, &[(0, 1), (0, 2), (0, 3), (0, 4)]);
        let out = vertex_split(
            &g,
            0,
            &BTreeSet::from([0, 1]),
            &BTreeSet::from([2, 3]),
        )
        .unwrap();
        assert_eq!(out.graph.degree(out.left), 3);
        assert_eq!(out.graph.degree(out.right), 3);
        assert_eq!(out.graph.edge_count(), 5);
    }

    #[test]
    fn vertex_split_star_3_2() {
        let g = Graph::from_edges(6, &[(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)]);
        let out = vertex_split(
            &g,
            0,
            &BTreeSet::from([0, 1, 2]),
            &BTreeSet::from([3, 4]),
        )
        .unwrap();
        let max_deg = out.graph.vertices().map(|v| out.graph.degree(v)).max();
        assert_eq!(max_deg, Some(4));
    }

    #[test]
    fn contract_after_split_restores_graph() {
        let g = k4();
        let out = vertex_split(&g, 0, &BTreeSet::from([0]), &BTreeSet::from([1, 2])).unwrap();
        let (back, _) = out.graph.contract_edge(out.bridge).unwrap();
        assert!(crate::iso::are_isomorphic(&g, &back));
    }

    #[test]
    fn contract_keeps_parallels_as_loops() {
        let g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let (c, merged) = g.contract_edge(0).unwrap();
        let e = c.edge(1).unwrap();
        assert!(e.is_loop());
        assert_eq!(e.u, merged);
    }

    #[test]
    fn girth_cases() {
        assert_eq!(k4().girth().unwrap(), 3);
        let mut g = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        assert_eq!(g.girth().unwrap(), 2);
        g.add_edge(0, 0).unwrap();
        assert_eq!(g.girth().unwrap(), 1);
        let tree = Graph::from_edges(3, &[(0, 1), (1, 2)]);
        assert!(matches!(tree.girth(), Err(Error::Forest)));
    }
}
