//! Combinatorial 1-plane drawings.
//!
//! An embedding is stored as a rotation system of the planarization: every
//! crossing is a flagged dummy vertex of degree 4, and rotations list
//! half-edge ids (`2*edge + end`) in cyclic order at every vertex, dummies
//! included. No coordinates anywhere; faces come from orbit traversal and
//! validity is Euler's formula per component.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use crate::cycle_space::EdgeSet;
use crate::graph::{EdgeId, Graph, VertexId};
use crate::{Error, Result};

/// Half-edge id as used in rotations: `2*edge + end`, where end 0 is the
/// side of the edge's stored `u` endpoint.
pub type HalfEdge = usize;

pub fn half(edge: EdgeId, end: usize) -> HalfEdge {
    2 * edge + end
}

pub fn half_edge(h: HalfEdge) -> EdgeId {
    h / 2
}

pub fn half_end(h: HalfEdge) -> usize {
    h % 2
}

/// Dart of the planarization: `2*segment + side`.
pub type Dart = usize;
pub type SegId = usize;
pub type FaceId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Seg {
    /// Abstract edge this segment belongs to.
    pub edge: EdgeId,
    /// 0 for a whole (uncrossed) edge or the u-side piece, 1 for the v-side.
    pub part: u8,
    /// Endpoint carried by dart `2*seg`.
    pub a: VertexId,
    /// Endpoint carried by dart `2*seg + 1`.
    pub b: VertexId,
}

impl Seg {
    pub fn other(&self, w: VertexId) -> VertexId {
        if w == self.a {
            self.b
        } else {
            self.a
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Violation {
    DummyCollidesWithVertex(VertexId),
    DummyDegree(VertexId),
    DummyPairMissingEdge(VertexId, EdgeId),
    DummyNotAlternating(VertexId),
    EdgeCrossedTwice(EdgeId),
    CrossingSharesEndpoint(VertexId),
    SelfCrossing(VertexId),
    RotationMissingVertex(VertexId),
    UnknownRotationVertex(VertexId),
    RotationEntries { vertex: VertexId, detail: String },
    EulerFailure { component: usize, vertices: usize, edges: usize, faces: usize },
    OuterFaceOutOfRange(FaceId),
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{self:?}")
    }
}

/// A 1-plane embedding: abstract multigraph, rotation system of the
/// planarization, and the dummy-vertex registry of crossing pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OnePlaneEmbedding {
    pub graph: Graph,
    /// Cyclic half-edge order at every vertex of the planarization.
    pub rotations: BTreeMap<VertexId, Vec<HalfEdge>>,
    /// Dummy vertex -> the crossing pair of abstract edges.
    pub dummies: BTreeMap<VertexId, (EdgeId, EdgeId)>,
    /// Plane mode when set; sphere mode when absent.
    pub outer_face: Option<FaceId>,
}

impl OnePlaneEmbedding {
    /// Plane embedding of a graph from plain rotations (no crossings).
    pub fn plane(graph: Graph, rotations: BTreeMap<VertexId, Vec<HalfEdge>>) -> Self {
        OnePlaneEmbedding {
            graph,
            rotations,
            dummies: BTreeMap::new(),
            outer_face: None,
        }
    }

    /// Constructs and validates; errors with the violation list on failure.
    pub fn checked(
        graph: Graph,
        rotations: BTreeMap<VertexId, Vec<HalfEdge>>,
        dummies: BTreeMap<VertexId, (EdgeId, EdgeId)>,
        outer_face: Option<FaceId>,
    ) -> Result<Self> {
        let e = OnePlaneEmbedding {
            graph,
            rotations,
            dummies,
            outer_face,
        };
        let violations = e.validate();
        if violations.is_empty() {
            Ok(e)
        } else {
            Err(Error::InvalidEmbedding(violations))
        }
    }

    /// Abstract edge -> dummy vertex, for crossed edges.
    pub fn crossing_of(&self) -> BTreeMap<EdgeId, VertexId> {
        let mut m = BTreeMap::new();
        for (&d, &(e, f)) in &self.dummies {
            m.insert(e, d);
            m.insert(f, d);
        }
        m
    }

    pub fn is_crossed(&self, e: EdgeId) -> bool {
        self.dummies.values().any(|&(a, b)| a == e || b == e)
    }

    pub fn crossing_count(&self) -> usize {
        self.dummies.len()
    }

    /// All invariant checks; an empty list means the embedding is valid.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        let g = &self.graph;

        for (&d, &(e, f)) in &self.dummies {
            if g.has_vertex(d) {
                out.push(Violation::DummyCollidesWithVertex(d));
            }
            if e == f {
                out.push(Violation::SelfCrossing(d));
                continue;
            }
            let (ee, fe) = match (g.edge(e), g.edge(f)) {
                (Ok(a), Ok(b)) => (a, b),
                _ => {
                    out.push(Violation::DummyPairMissingEdge(
                        d,
                        if g.has_edge(e) { f } else { e },
                    ));
                    continue;
                }
            };
            if ee.touches(fe.u) || ee.touches(fe.v) {
                out.push(Violation::CrossingSharesEndpoint(d));
            }
        }

        // Each edge in at most one crossing pair.
        let mut crossed_count: BTreeMap<EdgeId, usize> = BTreeMap::new();
        for &(e, f) in self.dummies.values() {
            *crossed_count.entry(e).or_insert(0) += 1;
            *crossed_count.entry(f).or_insert(0) += 1;
        }
        for (&e, &c) in &crossed_count {
            if c > 1 {
                out.push(Violation::EdgeCrossedTwice(e));
            }
        }

        // Rotation keys must be exactly abstract vertices plus dummies.
        for v in g.vertices() {
            if !self.rotations.contains_key(&v) {
                out.push(Violation::RotationMissingVertex(v));
            }
        }
        for &d in self.dummies.keys() {
            if !self.rotations.contains_key(&d) {
                out.push(Violation::RotationMissingVertex(d));
            }
        }
        for &v in self.rotations.keys() {
            if !g.has_vertex(v) && !self.dummies.contains_key(&v) {
                out.push(Violation::UnknownRotationVertex(v));
            }
        }
        if !out.is_empty() {
            return out;
        }

        // Abstract rotation entries: exactly the incident half-edges.
        for v in g.vertices() {
            let mut expected: Vec<HalfEdge> = Vec::new();
            for e in g.incident_edges(v) {
                if e.is_loop() {
                    expected.push(half(e.id, 0));
                    expected.push(half(e.id, 1));
                } else if e.u == v {
                    expected.push(half(e.id, 0));
                } else {
                    expected.push(half(e.id, 1));
                }
            }
            expected.sort_unstable();
            let mut got = self.rotations[&v].clone();
            got.sort_unstable();
            if got != expected {
                out.push(Violation::RotationEntries {
                    vertex: v,
                    detail: format!("expected halves {expected:?}, got {got:?}"),
                });
            }
        }

        // Dummy rotations: degree 4, both halves of both pair edges,
        // alternating between the two edges.
        for (&d, &(e, f)) in &self.dummies {
            let rot = &self.rotations[&d];
            if rot.len() != 4 {
                out.push(Violation::DummyDegree(d));
                continue;
            }
            let mut sorted = rot.clone();
            sorted.sort_unstable();
            let mut expected = vec![half(e, 0), half(e, 1), half(f, 0), half(f, 1)];
            expected.sort_unstable();
            if sorted != expected {
                out.push(Violation::RotationEntries {
                    vertex: d,
                    detail: format!("expected halves {expected:?}, got {rot:?}"),
                });
                continue;
            }
            let owners: Vec<EdgeId> = rot.iter().map(|&h| half_edge(h)).collect();
            if owners[0] == owners[1] || owners[1] == owners[2] {
                out.push(Violation::DummyNotAlternating(d));
            }
        }
        if !out.is_empty() {
            return out;
        }

        // Euler per connected component of the planarization.
        let plan = self.planarize();
        for (idx, comp) in plan.components().iter().enumerate() {
            let vs = comp.len();
            let es = plan.segs.iter().filter(|s| comp.contains(&s.a)).count();
            let fs = plan
                .faces
                .iter()
                .filter(|orbit| comp.contains(&plan.dart_vertex[orbit[0]]))
                .count();
            if vs + fs != es + 2 {
                out.push(Violation::EulerFailure {
                    component: idx,
                    vertices: vs,
                    edges: es,
                    faces: fs,
                });
            }
        }
        if let Some(of) = self.outer_face {
            if of >= plan.faces.len() {
                out.push(Violation::OuterFaceOutOfRange(of));
            }
        }
        out
    }

    /// Builds the planarization dart structure. Callers should validate
    /// first; this only assumes structural sanity of rotations.
    pub fn planarize(&self) -> Planarization {
        let crossing_of = self.crossing_of();
        let mut segs: Vec<Seg> = Vec::new();
        // (vertex, half) -> dart
        let mut dart_at: BTreeMap<(VertexId, HalfEdge), Dart> = BTreeMap::new();
        for e in self.graph.edges() {
            match crossing_of.get(&e.id) {
                None => {
                    let s = segs.len();
                    segs.push(Seg {
                        edge: e.id,
                        part: 0,
                        a: e.u,
                        b: e.v,
                    });
                    dart_at.insert((e.u, half(e.id, 0)), 2 * s);
                    dart_at.insert((e.v, half(e.id, 1)), 2 * s + 1);
                }
                Some(&d) => {
                    let s0 = segs.len();
                    segs.push(Seg {
                        edge: e.id,
                        part: 0,
                        a: e.u,
                        b: d,
                    });
                    let s1 = segs.len();
                    segs.push(Seg {
                        edge: e.id,
                        part: 1,
                        a: d,
                        b: e.v,
                    });
                    dart_at.insert((e.u, half(e.id, 0)), 2 * s0);
                    dart_at.insert((d, half(e.id, 0)), 2 * s0 + 1);
                    dart_at.insert((d, half(e.id, 1)), 2 * s1);
                    dart_at.insert((e.v, half(e.id, 1)), 2 * s1 + 1);
                }
            }
        }
        let ndarts = 2 * segs.len();
        let mut dart_vertex = vec![usize::MAX; ndarts];
        let mut dart_pos = vec![usize::MAX; ndarts];
        let mut rot_darts: BTreeMap<VertexId, Vec<Dart>> = BTreeMap::new();
        for (&v, rot) in &self.rotations {
            let mut darts = Vec::with_capacity(rot.len());
            for (i, &h) in rot.iter().enumerate() {
                let d = *dart_at
                    .get(&(v, h))
                    .unwrap_or_else(|| panic!("rotation at {v} names foreign half {h}"));
                dart_vertex[d] = v;
                dart_pos[d] = i;
                darts.push(d);
            }
            rot_darts.insert(v, darts);
        }
        let mut plan = Planarization {
            segs,
            rot_darts,
            dart_vertex,
            dart_pos,
            faces: Vec::new(),
            face_of: vec![usize::MAX; ndarts],
        };
        plan.trace_faces();
        plan
    }

    /// The maximum uncrossed subgraph: same vertices, only uncrossed edges,
    /// ids preserved.
    pub fn skeleton(&self) -> Graph {
        let crossed: BTreeSet<EdgeId> =
            self.dummies.values().flat_map(|&(e, f)| [e, f]).collect();
        let keep: BTreeSet<EdgeId> = self
            .graph
            .edges()
            .map(|e| e.id)
            .filter(|id| !crossed.contains(id))
            .collect();
        self.graph.edge_subgraph(&keep)
    }

    /// Deletes abstract edges from the drawing. Crossing partners of deleted
    /// edges become uncrossed; their rotations at endpoints are untouched.
    pub fn delete_edges(&self, delete: &BTreeSet<EdgeId>) -> OnePlaneEmbedding {
        let mut graph = self.graph.clone();
        for &e in delete {
            let _ = graph.remove_edge(e);
        }
        let mut dummies = BTreeMap::new();
        for (&d, &(e, f)) in &self.dummies {
            if !delete.contains(&e) && !delete.contains(&f) {
                dummies.insert(d, (e, f));
            }
        }
        let mut rotations = BTreeMap::new();
        for (&v, rot) in &self.rotations {
            if self.dummies.contains_key(&v) && !dummies.contains_key(&v) {
                continue; // dummy disappeared
            }
            let filtered: Vec<HalfEdge> = rot
                .iter()
                .copied()
                .filter(|&h| !delete.contains(&half_edge(h)))
                .collect();
            rotations.insert(v, filtered);
        }
        OnePlaneEmbedding {
            graph,
            rotations,
            dummies,
            outer_face: None,
        }
    }

    /// Plane embedding of the skeleton (all crossed edges deleted).
    pub fn skeleton_embedding(&self) -> OnePlaneEmbedding {
        let crossed: BTreeSet<EdgeId> =
            self.dummies.values().flat_map(|&(e, f)| [e, f]).collect();
        self.delete_edges(&crossed)
    }

    /// Re-draws an existing crossed edge without its crossing, splicing its
    /// halves at the given rotation indices of its endpoints. Index positions
    /// refer to the rotation lists *after* the old halves are removed.
    pub fn reroute_edge_uncrossed(
        &self,
        e: EdgeId,
        pos_u: usize,
        pos_v: usize,
    ) -> Result<OnePlaneEmbedding> {
        let edge = self.graph.edge(e)?;
        let dummy = *self
            .crossing_of()
            .get(&e)
            .ok_or_else(|| Error::Malformed(format!("edge {e} is not crossed")))?;
        let mut rotations = self.rotations.clone();
        let mut dummies = self.dummies.clone();
        dummies.remove(&dummy);
        rotations.remove(&dummy);
        for rot in rotations.values_mut() {
            rot.retain(|&h| half_edge(h) != e);
        }
        rotations.get_mut(&edge.u).unwrap().insert(pos_u, half(e, 0));
        rotations.get_mut(&edge.v).unwrap().insert(pos_v, half(e, 1));
        Ok(OnePlaneEmbedding {
            graph: self.graph.clone(),
            rotations,
            dummies,
            outer_face: None,
        })
    }
}

/// Dart structure of the planarization, with traced faces.
#[derive(Debug, Clone)]
pub struct Planarization {
    pub segs: Vec<Seg>,
    pub rot_darts: BTreeMap<VertexId, Vec<Dart>>,
    pub dart_vertex: Vec<VertexId>,
    pub dart_pos: Vec<usize>,
    /// Face orbits in discovery order (ascending first dart).
    pub faces: Vec<Vec<Dart>>,
    pub face_of: Vec<FaceId>,
}

impl Planarization {
    pub fn twin(&self, d: Dart) -> Dart {
        d ^ 1
    }

    pub fn seg(&self, d: Dart) -> &Seg {
        &self.segs[d / 2]
    }

    pub fn base(&self, d: Dart) -> VertexId {
        self.dart_vertex[d]
    }

    pub fn rot_next(&self, d: Dart) -> Dart {
        let v = self.dart_vertex[d];
        let rot = &self.rot_darts[&v];
        rot[(self.dart_pos[d] + 1) % rot.len()]
    }

    pub fn rot_prev(&self, d: Dart) -> Dart {
        let v = self.dart_vertex[d];
        let rot = &self.rot_darts[&v];
        rot[(self.dart_pos[d] + rot.len() - 1) % rot.len()]
    }

    /// Face successor: cross to the twin, then take the next dart in
    /// rotation. The walk `base(d) -> base(next(d))` travels along `seg(d)`.
    pub fn next_in_face(&self, d: Dart) -> Dart {
        self.rot_next(self.twin(d))
    }

    fn trace_faces(&mut self) {
        let ndarts = self.dart_vertex.len();
        for d0 in 0..ndarts {
            if self.face_of[d0] != usize::MAX || self.dart_vertex[d0] == usize::MAX {
                continue;
            }
            let id = self.faces.len();
            let mut orbit = Vec::new();
            let mut d = d0;
            loop {
                orbit.push(d);
                self.face_of[d] = id;
                d = self.next_in_face(d);
                if d == d0 {
                    break;
                }
            }
            self.faces.push(orbit);
        }
    }

    pub fn components(&self) -> Vec<BTreeSet<VertexId>> {
        let mut g = Graph::new();
        for &v in self.rot_darts.keys() {
            g.add_vertex_id(v);
        }
        for s in &self.segs {
            g.add_edge(s.a, s.b).expect("seg endpoints exist");
        }
        g.components()
    }

    /// Boundary edge set of a face over abstract edge ids, GF(2)-reduced:
    /// an edge whose both sides lie on the face cancels out.
    pub fn face_edge_set(&self, face: FaceId, width: usize) -> EdgeSet {
        let mut s = EdgeSet::empty(width);
        for &d in &self.faces[face] {
            let e = self.seg(d).edge;
            if s.contains(e) {
                s.remove(e);
            } else {
                s.insert(e);
            }
        }
        s
    }

    /// True when the face's traversal uses `edge` in its stored u -> v
    /// direction (the combinatorial "clockwise for this face" convention).
    /// Meaningful for uncrossed edges of plane embeddings.
    pub fn face_uses_forward(&self, face: FaceId, edge: EdgeId) -> bool {
        for &d in &self.faces[face] {
            let s = self.seg(d);
            if s.edge == edge && self.base(d) == s.a && s.part == 0 {
                return true;
            }
        }
        false
    }
}

/// Walk along one cell boundary with the crossing omitted. First and last
/// vertices are abstract endpoints of the two edges crossing at the dummy.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SkirtWalk {
    pub crossing: VertexId,
    pub cell: FaceId,
    /// Planarization vertices visited, the dummy itself omitted.
    pub vertices: Vec<VertexId>,
    /// Abstract edge of every traversed segment (between consecutive vertices).
    pub edges: Vec<EdgeId>,
    /// The dart at the dummy this walk departs along (identifies the corner).
    pub depart: Dart,
    /// The final dart, whose segment arrives back at the dummy.
    pub arrive: Dart,
}

impl SkirtWalk {
    pub fn first(&self) -> VertexId {
        *self.vertices.first().expect("walks are nonempty")
    }

    pub fn last(&self) -> VertexId {
        *self.vertices.last().expect("walks are nonempty")
    }

    pub fn is_single_edge(&self) -> bool {
        self.vertices.len() == 2 && self.edges.len() == 1
    }

    /// No dummy vertices on the walk (it lies in the skeleton).
    pub fn is_uncrossed(&self, emb: &OnePlaneEmbedding) -> bool {
        self.vertices.iter().all(|v| !emb.dummies.contains_key(v))
    }

    pub fn edge_set(&self, width: usize) -> EdgeSet {
        EdgeSet::from_edges(width, self.edges.iter().copied())
    }
}

/// The four skirt walks of a crossing, one per incidence of a cell at the
/// dummy, in rotation order of the departing darts.
pub fn skirt_walks(
    emb: &OnePlaneEmbedding,
    plan: &Planarization,
    x: VertexId,
) -> Result<Vec<SkirtWalk>> {
    if !emb.dummies.contains_key(&x) {
        return Err(Error::NotADummy(x));
    }
    let rot = &plan.rot_darts[&x];
    let mut walks = Vec::with_capacity(4);
    for &d0 in rot {
        let mut vertices = Vec::new();
        let mut edges = Vec::new();
        let mut d = plan.next_in_face(d0);
        let mut last = d0;
        while plan.base(d) != x {
            vertices.push(plan.base(d));
            last = d;
            let nxt = plan.next_in_face(d);
            if plan.base(nxt) != x {
                edges.push(plan.seg(d).edge);
            }
            d = nxt;
        }
        walks.push(SkirtWalk {
            crossing: x,
            cell: plan.face_of[d0],
            vertices,
            edges,
            depart: d0,
            arrive: last,
        });
    }
    Ok(walks)
}

/// Classification flags of a drawing.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EmbeddingProfile {
    pub ic: bool,
    pub nic: bool,
    pub full_crossing: bool,
    pub locally_maximal: bool,
    pub poppy: bool,
    pub near_independent_skirts: bool,
    pub connected_skeleton: bool,
    pub optimal: bool,
    pub crossings: usize,
}

fn crossing_endpoints(emb: &OnePlaneEmbedding, d: VertexId) -> BTreeSet<VertexId> {
    let (e, f) = emb.dummies[&d];
    let ee = emb.graph.edge(e).unwrap();
    let fe = emb.graph.edge(f).unwrap();
    BTreeSet::from([ee.u, ee.v, fe.u, fe.v])
}

/// The union of the four skirt walks when it is a simple, dummy-free cycle.
/// `Ok(None)` is the NotPoppy verdict.
pub fn crossing_surrounding_cycle(
    emb: &OnePlaneEmbedding,
    plan: &Planarization,
    x: VertexId,
) -> Result<Option<EdgeSet>> {
    let walks = skirt_walks(emb, plan, x)?;
    if walks.iter().any(|w| !w.is_uncrossed(emb)) {
        return Ok(None);
    }
    let width = emb.graph.edge_capacity();
    let mut union: BTreeSet<EdgeId> = BTreeSet::new();
    for w in &walks {
        union.extend(w.edges.iter().copied());
    }
    if union.is_empty() {
        return Ok(None);
    }
    // Simple cycle test: every touched vertex has degree exactly 2 and the
    // edge set is connected.
    let mut deg: BTreeMap<VertexId, usize> = BTreeMap::new();
    for &e in &union {
        let edge = emb.graph.edge(e)?;
        if edge.is_loop() {
            return Ok(None);
        }
        *deg.entry(edge.u).or_insert(0) += 1;
        *deg.entry(edge.v).or_insert(0) += 1;
    }
    if deg.values().any(|&d| d != 2) {
        return Ok(None);
    }
    let sub = emb.graph.edge_subgraph(&union);
    let touched: BTreeSet<VertexId> = deg.keys().copied().collect();
    let comps = sub.components();
    let nontrivial: Vec<_> = comps
        .iter()
        .filter(|c| c.iter().any(|v| touched.contains(v)))
        .collect();
    if nontrivial.len() != 1 {
        return Ok(None);
    }
    Ok(Some(EdgeSet::from_edges(width, union)))
}

/// Computes every classification flag from the definitions.
pub fn classify(emb: &OnePlaneEmbedding) -> Result<EmbeddingProfile> {
    let plan = emb.planarize();
    let crossings: Vec<VertexId> = emb.dummies.keys().copied().collect();

    let endpoint_sets: BTreeMap<VertexId, BTreeSet<VertexId>> = crossings
        .iter()
        .map(|&d| (d, crossing_endpoints(emb, d)))
        .collect();
    let mut ic = true;
    let mut nic = true;
    for (i, &a) in crossings.iter().enumerate() {
        for &b in &crossings[i + 1..] {
            let shared = endpoint_sets[&a].intersection(&endpoint_sets[&b]).count();
            if shared >= 1 {
                ic = false;
            }
            if shared >= 2 {
                nic = false;
            }
        }
    }

    let mut locally_maximal = true;
    for &d in &crossings {
        let (e, f) = emb.dummies[&d];
        let ee = emb.graph.edge(e)?;
        let fe = emb.graph.edge(f)?;
        for &(p, q) in &[(ee.u, fe.u), (ee.u, fe.v), (ee.v, fe.u), (ee.v, fe.v)] {
            if emb.graph.find_edge(p, q).is_none() {
                locally_maximal = false;
            }
        }
    }

    let mut full_crossing = true;
    let mut poppy = true;
    let mut all_walks: Vec<SkirtWalk> = Vec::new();
    for &d in &crossings {
        let walks = skirt_walks(emb, &plan, d)?;
        if !walks
            .iter()
            .all(|w| w.is_single_edge() && w.is_uncrossed(emb))
        {
            full_crossing = false;
        }
        if crossing_surrounding_cycle(emb, &plan, d)?.is_none() {
            poppy = false;
        }
        all_walks.extend(walks);
    }

    let mut near_independent_skirts = true;
    for (i, a) in all_walks.iter().enumerate() {
        for b in &all_walks[i + 1..] {
            if a.crossing == b.crossing {
                continue;
            }
            let va: BTreeSet<VertexId> = a.vertices.iter().copied().collect();
            let vb: BTreeSet<VertexId> = b.vertices.iter().copied().collect();
            if va.intersection(&vb).count() >= 2 {
                near_independent_skirts = false;
            }
        }
    }

    let connected_skeleton = emb.skeleton().is_connected();

    let n = emb.graph.vertex_count();
    let m = emb.graph.edge_count();
    let simple = {
        let mut pairs = BTreeSet::new();
        emb.graph
            .edges()
            .all(|e| !e.is_loop() && pairs.insert((e.u.min(e.v), e.u.max(e.v))))
    };
    let mut optimal = simple && n >= 3 && m == 4 * n - 8;
    if optimal {
        for orbit in &plan.faces {
            let dummy_inc = orbit
                .iter()
                .filter(|&&d| emb.dummies.contains_key(&plan.base(d)))
                .count();
            if orbit.len() != 3 || dummy_inc != 1 {
                optimal = false;
                break;
            }
        }
    }

    Ok(EmbeddingProfile {
        ic,
        nic,
        full_crossing,
        locally_maximal,
        poppy,
        near_independent_skirts,
        connected_skeleton,
        optimal,
        crossings: crossings.len(),
    })
}

/// Cell report: boundary walk of a planarization face, tagged crossed when a
/// dummy lies on it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub id: FaceId,
    pub boundary_vertices: Vec<VertexId>,
    pub boundary_edges: Vec<EdgeId>,
    pub crossed: bool,
}

pub fn cells(emb: &OnePlaneEmbedding, plan: &Planarization) -> Vec<Cell> {
    plan.faces
        .iter()
        .enumerate()
        .map(|(id, orbit)| {
            let boundary_vertices: Vec<VertexId> = orbit.iter().map(|&d| plan.base(d)).collect();
            let boundary_edges: Vec<EdgeId> = orbit.iter().map(|&d| plan.seg(d).edge).collect();
            let crossed = boundary_vertices
                .iter()
                .any(|v| emb.dummies.contains_key(v));
            Cell {
                id,
                boundary_vertices,
                boundary_edges,
                crossed,
            }
        })
        .collect()
}

/// Redraws crossed K4 sides of a locally-maximal drawing until every side
/// pair of every crossing has an uncrossed copy; with a connected abstract
/// graph this makes the skeleton connected. No new crossings are drawn.
pub fn repair_locally_maximal(emb: &OnePlaneEmbedding) -> Result<OnePlaneEmbedding> {
    let profile = classify(emb)?;
    if !profile.locally_maximal {
        let bad = emb.dummies.keys().copied().next().unwrap_or(usize::MAX);
        return Err(Error::NotLocallyMaximal(bad));
    }
    let mut cur = emb.clone();
    let cap = emb.graph.edge_count().max(1);
    for _ in 0..cap {
        let plan = cur.planarize();
        // Find the smallest crossing with a side pair lacking an uncrossed
        // copy; reroute the smallest crossed copy inside the matching cell.
        let mut action: Option<(EdgeId, usize, usize)> = None;
        'outer: for &x in cur.dummies.keys() {
            let walks = skirt_walks(&cur, &plan, x)?;
            for w in &walks {
                let (p, q) = (w.first(), w.last());
                let copies: Vec<crate::graph::Edge> = cur
                    .graph
                    .edges()
                    .filter(|e| (e.u == p && e.v == q) || (e.u == q && e.v == p))
                    .collect();
                if copies.is_empty() {
                    continue;
                }
                if copies.iter().any(|e| !cur.is_crossed(e.id)) {
                    continue;
                }
                let g = copies.iter().map(|e| e.id).min().unwrap();
                let ge = cur.graph.edge(g)?;
                // Splice positions inside this cell, next to the corner at x:
                // at the walk's first vertex right after the arrival from x,
                // at its last vertex right before the departure towards x.
                // Positions are computed on the stripped rotation lists.
                let strip_pos = |v: VertexId, target: Dart, before: bool| -> usize {
                    let rot = &plan.rot_darts[&v];
                    let mut idx = 0usize;
                    for &dd in rot.iter() {
                        if dd == target {
                            break;
                        }
                        if plan.seg(dd).edge != g {
                            idx += 1;
                        }
                    }
                    if before {
                        idx
                    } else {
                        idx + 1
                    }
                };
                let arrival_at_p = plan.twin(w.depart);
                let pos_p = strip_pos(p, arrival_at_p, false);
                let pos_q = strip_pos(q, w.arrive, true);
                let (pos_u, pos_v) = if ge.u == p { (pos_p, pos_q) } else { (pos_q, pos_p) };
                action = Some((g, pos_u, pos_v));
                break 'outer;
            }
        }
        match action {
            None => break,
            Some((g, pos_u, pos_v)) => {
                let next = cur.reroute_edge_uncrossed(g, pos_u, pos_v)?;
                let violations = next.validate();
                if !violations.is_empty() {
                    return Err(Error::InvalidEmbedding(violations));
                }
                cur = next;
            }
        }
    }
    if cur.graph.is_connected() && !cur.skeleton().is_connected() {
        return Err(Error::PostconditionFailed(
            "skeleton still disconnected after redrawing".into(),
        ));
    }
    Ok(cur)
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// K4 drawn with one crossing: 4-cycle 0-1-2-3 with diagonals 02 x 13
    /// crossing at dummy 4.
    pub(crate) fn k4_crossing() -> OnePlaneEmbedding {
        let g = Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (1, 3)]);
        // edges: 0:01 1:12 2:23 3:30 4:02 5:13
        let mut rotations = BTreeMap::new();
        rotations.insert(0, vec![half(0, 0), half(4, 0), half(3, 1)]);
        rotations.insert(1, vec![half(1, 0), half(5, 0), half(0, 1)]);
        rotations.insert(2, vec![half(2, 0), half(4, 1), half(1, 1)]);
        rotations.insert(3, vec![half(3, 0), half(5, 1), half(2, 1)]);
        rotations.insert(4, vec![half(4, 0), half(5, 0), half(4, 1), half(5, 1)]);
        let dummies = BTreeMap::from([(4, (4, 5))]);
        OnePlaneEmbedding::checked(g, rotations, dummies, None).unwrap()
    }

    fn plane_triangle() -> OnePlaneEmbedding {
        let g = Graph::from_edges(3, &[(0, 1), (1, 2), (2, 0)]);
        let mut rotations = BTreeMap::new();
        rotations.insert(0, vec![half(0, 0), half(2, 1)]);
        rotations.insert(1, vec![half(1, 0), half(0, 1)]);
        rotations.insert(2, vec![half(2, 0), half(1, 1)]);
        OnePlaneEmbedding::checked(g, rotations, BTreeMap::new(), None).unwrap()
    }

    #[test]
    fn plane_triangle_has_two_cells() {
        let emb = plane_triangle();
        let plan = emb.planarize();
        assert_eq!(plan.faces.len(), 2);
        let cs = cells(&emb, &plan);
        assert!(cs.iter().all(|c| !c.crossed));
        let sides: usize = cs.iter().map(|c| c.boundary_edges.len()).sum();
        assert_eq!(sides, 2 * plan.segs.len());
    }

    #[test]
    fn k4_crossing_is_valid_and_full() {
        let emb = k4_crossing();
        let plan = emb.planarize();
        // 5 vertices, 8 segments, faces: 4 crossed triangles + outer.
        assert_eq!(plan.faces.len(), 5);
        let cs = cells(&emb, &plan);
        let crossed = cs.iter().filter(|c| c.crossed).count();
        assert_eq!(crossed, 4);
        let profile = classify(&emb).unwrap();
        assert!(profile.full_crossing);
        assert!(profile.poppy);
        assert!(profile.locally_maximal);
        assert!(profile.connected_skeleton);
        assert_eq!(profile.crossings, 1);
    }

    #[test]
    fn k4_crossing_skirt_walks_are_single_edges() {
        let emb = k4_crossing();
        let plan = emb.planarize();
        let walks = skirt_walks(&emb, &plan, 4).unwrap();
        assert_eq!(walks.len(), 4);
        for w in &walks {
            assert!(w.is_single_edge());
        }
        let cycle = crossing_surrounding_cycle(&emb, &plan, 4)
            .unwrap()
            .unwrap();
        assert_eq!(cycle.iter().collect::<Vec<_>>(), vec![0, 1, 2, 3]);
        assert!(crate::cycle_space::is_eulerian(&emb.graph, &cycle).unwrap());
    }

    #[test]
    fn skeleton_of_k4_crossing() {
        let emb = k4_crossing();
        let sk = emb.skeleton();
        assert_eq!(sk.edge_count(), 4);
        assert!(sk.has_edge(0) && sk.has_edge(3));
        assert!(!sk.has_edge(4) && !sk.has_edge(5));
    }

    #[test]
    fn dummy_degree_violation_detected() {
        let emb = k4_crossing();
        let mut rotations = emb.rotations.clone();
        rotations.get_mut(&4).unwrap().pop();
        let bad = OnePlaneEmbedding {
            graph: emb.graph.clone(),
            rotations,
            dummies: emb.dummies.clone(),
            outer_face: None,
        };
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::DummyDegree(_))));
    }

    #[test]
    fn edge_crossed_twice_detected() {
        let emb = k4_crossing();
        let mut dummies = emb.dummies.clone();
        dummies.insert(9, (4, 1));
        let bad = OnePlaneEmbedding {
            graph: emb.graph.clone(),
            rotations: emb.rotations.clone(),
            dummies,
            outer_face: None,
        };
        assert!(bad
            .validate()
            .iter()
            .any(|v| matches!(v, Violation::EdgeCrossedTwice(4))));
    }

    #[test]
    fn delete_crossing_partner_uncrosses() {
        let emb = k4_crossing();
        let rest = emb.delete_edges(&BTreeSet::from([4]));
        assert!(rest.validate().is_empty());
        assert_eq!(rest.crossing_count(), 0);
        assert!(rest.graph.has_edge(5));
        let plan = rest.planarize();
        // K4 minus an edge drawn plane: 5 - 4 + 2 = 3 faces.
        assert_eq!(plan.faces.len(), 3);
    }

    #[test]
    fn twisted_dummy_rotation_fails_euler() {
        let emb = k4_crossing();
        let mut rotations = emb.rotations.clone();
        rotations.get_mut(&4).unwrap().swap(0, 2);
        let bad = OnePlaneEmbedding {
            graph: emb.graph,
            rotations,
            dummies: emb.dummies,
            outer_face: None,
        };
        let violations = bad.validate();
        assert!(!violations.is_empty());
    }
}
