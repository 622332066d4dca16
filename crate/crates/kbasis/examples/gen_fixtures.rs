//! Regenerates the drawing fixtures under fixtures/.
//!
//! Catalog drawings are found by searching book-style layouts: vertices sit
//! on a circle along a Hamiltonian spine, every chord lives in the inner or
//! outer page, a chord may optionally *escape* once through a spine edge
//! (crossing it and switching page), and two spine edges may be pinched
//! into a crossing (the figure-eight move). Layouts are emitted as crossing
//! schedules, realized through the library, and kept once the embedding
//! validates and its classification matches the target row.
//!
//! Run with: cargo run --release --example gen_fixtures

use std::collections::{BTreeMap, BTreeSet};

use kbasis::catalog;
use kbasis::constructions::balanced_skirt_orientation;
use kbasis::embedding::{classify, EmbeddingProfile};
use kbasis::graph::{tree_packing, EdgeId, Graph, TreePacking, VertexId};
use kbasis::json::FixtureJson;
use kbasis::transforms::{
    realize_schedule, CrossingSchedule, ScheduledCrossing, SubdivisionDrawing, SubdivisionPolicy,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Page {
    Inner,
    Outer,
}

impl Page {
    fn flip(self) -> Page {
        match self {
            Page::Inner => Page::Outer,
            Page::Outer => Page::Inner,
        }
    }
}

/// Drawing choice for one chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Route {
    Stay(Page),
    /// Cross the spine edge at `gap`, the stored-u endpoint's segment lying
    /// in `upage`.
    Escape { gap: usize, upage: Page },
}

#[derive(Debug, Clone)]
struct BookPlan {
    spine: Vec<VertexId>,
    gap_edges: Vec<Option<EdgeId>>,
    /// Disjoint pinches: pairs of gap edges drawn crossing each other.
    pinches: Vec<(usize, usize)>,
    pinch_flips: Vec<bool>,
    routes: BTreeMap<EdgeId, Route>,
}

/// One page-resident piece of a chord, in doubled circle coordinates
/// (vertices at 2p, gap points at 2g+1).
#[derive(Debug, Clone, Copy)]
struct Segment {
    chord: EdgeId,
    page: Page,
    /// Doubled positions of the two ends.
    a: i64,
    b: i64,
    /// True when end `a` is the chord's stored-u side along the chord walk.
    a_is_u_side: bool,
    /// Endpoint vertices when the ends are real vertices (None at gaps).
    va: Option<VertexId>,
    vb: Option<VertexId>,
}

fn interleaved(n2: i64, pe: (i64, i64), pf: (i64, i64)) -> bool {
    let base = [pe.0, pe.1, pf.0, pf.1].into_iter().min().unwrap();
    let q = |x: i64| (x - base).rem_euclid(n2);
    let (ea, eb) = (q(pe.0).min(q(pe.1)), q(pe.0).max(q(pe.1)));
    let (fa, fb) = (q(pf.0).min(q(pf.1)), q(pf.0).max(q(pf.1)));
    (ea < fa && fa < eb && eb < fb) || (fa < ea && ea < fb && fb < eb)
}

struct Layout<'a> {
    g: &'a Graph,
    plan: &'a BookPlan,
    pos: BTreeMap<VertexId, i64>,
    n2: i64,
    segments: Vec<Segment>,
}

impl<'a> Layout<'a> {
    fn new(g: &'a Graph, plan: &'a BookPlan) -> Self {
        let pos: BTreeMap<VertexId, i64> = plan
            .spine
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, 2 * i as i64))
            .collect();
        let n2 = 2 * plan.spine.len() as i64;
        let mut segments = Vec::new();
        for (&chord, &route) in &plan.routes {
            let edge = g.edge(chord).unwrap();
            let (pu, pv) = (pos[&edge.u], pos[&edge.v]);
            match route {
                Route::Stay(page) => segments.push(Segment {
                    chord,
                    page,
                    a: pu,
                    b: pv,
                    a_is_u_side: true,
                    va: Some(edge.u),
                    vb: Some(edge.v),
                }),
                Route::Escape { gap, upage } => {
                    let gp = 2 * gap as i64 + 1;
                    segments.push(Segment {
                        chord,
                        page: upage,
                        a: pu,
                        b: gp,
                        a_is_u_side: true,
                        va: Some(edge.u),
                        vb: None,
                    });
                    segments.push(Segment {
                        chord,
                        page: upage.flip(),
                        a: gp,
                        b: pv,
                        a_is_u_side: true,
                        va: None,
                        vb: Some(edge.v),
                    });
                }
            }
        }
        Layout {
            g,
            plan,
            pos,
            n2,
            segments,
        }
    }

    fn page_pos(&self, page: Page, x: i64) -> i64 {
        match page {
            Page::Inner => x,
            Page::Outer => (self.n2 - x).rem_euclid(self.n2),
        }
    }

    fn seg_span(&self, s: &Segment) -> (i64, i64) {
        (self.page_pos(s.page, s.a), self.page_pos(s.page, s.b))
    }

    /// Same-page segment crossings, as (segment index, segment index).
    fn segment_crossings(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        for i in 0..self.segments.len() {
            for j in (i + 1)..self.segments.len() {
                let (si, sj) = (&self.segments[i], &self.segments[j]);
                if si.page != sj.page || si.chord == sj.chord {
                    continue;
                }
                if interleaved(self.n2, self.seg_span(si), self.seg_span(sj)) {
                    out.push((i, j));
                }
            }
        }
        out
    }
}

/// Crossing count per chord (segment hits plus one per escape) and per
/// spine edge (escapes through its gap plus the pinch).
fn crossing_budget_ok(
    layout: &Layout,
    hits: &[(usize, usize)],
    max_deg: usize,
    max_double: &mut usize,
) -> bool {
    let mut per_chord: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (&chord, &route) in &layout.plan.routes {
        let base = match route {
            Route::Stay(_) => 0,
            Route::Escape { .. } => 1,
        };
        per_chord.insert(chord, base);
    }
    for &(i, j) in hits {
        *per_chord.get_mut(&layout.segments[i].chord).unwrap() += 1;
        *per_chord.get_mut(&layout.segments[j].chord).unwrap() += 1;
    }
    let mut doubles = 0;
    for &c in per_chord.values() {
        if c > max_deg {
            return false;
        }
        if c == 2 {
            doubles += 1;
        }
    }
    if doubles > *max_double {
        return false;
    }
    *max_double -= 0;
    true
}

/// Global handedness calibration for the outer page and gap crossings.
#[derive(Debug, Clone, Copy)]
struct Conventions {
    outer_reverse_block: bool,
    outer_flip_mirrored: bool,
    escape_flip: bool,
}

fn build_schedule(g: &Graph, plan: &BookPlan, conv: Conventions) -> Option<CrossingSchedule> {
    let layout = Layout::new(g, plan);
    let n2 = layout.n2;
    let hits = layout.segment_crossings();

    // Sweep position of a crossing along a chord, in the chord's own frame:
    // fractions ordered from the chord's stored-u end. Escapes contribute the
    // gap point itself. Frame: cut the (inner-coordinates) circle right
    // before the chord's u endpoint and follow the chord's walk.
    //
    // Each chord has at most two crossings here and at most one per segment,
    // so ordering only needs: hits on the u-side segment come before the
    // escape, which comes before hits on the v-side segment; within one
    // segment a single hit needs no comparison.
    #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
    enum Where {
        USide,
        AtGap,
        VSide,
    }
    // crossing records: (chord, Where, partner key) with partner an edge id.
    let mut chord_slots: BTreeMap<EdgeId, Vec<(Where, usize)>> = BTreeMap::new(); // -> crossing index
    let mut crossings: Vec<ScheduledCrossing> = Vec::new();
    let mut pending: Vec<(EdgeId, Where, EdgeId, Where, bool)> = Vec::new();

    // Segment-segment crossings.
    for &(i, j) in &hits {
        let (si, sj) = (&layout.segments[i], &layout.segments[j]);
        let page = si.page;
        // Cyclic endpoint pattern (a, c, b, d) in page coordinates.
        let pe = layout.seg_span(si);
        let pf = layout.seg_span(sj);
        let base = [pe.0, pe.1, pf.0, pf.1].into_iter().min().unwrap();
        let q = |x: i64| (x - base).rem_euclid(n2);
        let e_first = q(pe.0).min(q(pe.1)) < q(pf.0).min(q(pf.1));
        let (sf, ss) = if e_first { (si, sj) } else { (sj, si) };
        let pf_ = layout.seg_span(sf);
        let ps_ = layout.seg_span(ss);
        let a = q(pf_.0).min(q(pf_.1));
        let c = q(ps_.0).min(q(ps_.1));
        // v-side of each segment: the end that is NOT the u-side walk end...
        // mirrored wants: does the chord's stored-v direction sit at a / c.
        // For a segment, the "v end" is end b when a_is_u_side (walk runs
        // u->...->v), considered within this segment.
        let v_at = |s: &Segment, cutpos: i64| -> bool {
            let (qa, qb) = (q(layout.page_pos(s.page, s.a)), q(layout.page_pos(s.page, s.b)));
            let v_end_pos = if s.a_is_u_side { qb } else { qa };
            v_end_pos == cutpos
        };
        let mut mirrored = v_at(sf, a) != v_at(ss, c);
        if page == Page::Outer && conv.outer_flip_mirrored {
            mirrored = !mirrored;
        }
        let side_of = |s: &Segment| -> Where {
            if s.va.is_some() && s.vb.is_some() {
                // whole chord: relative position of the crossing along it is
                // resolved purely by segment identity; a whole chord with
                // two hits orders them by sweep position below.
                Where::USide
            } else if s.va.is_some() {
                Where::USide
            } else {
                Where::VSide
            }
        };
        pending.push((
            sf.chord,
            side_of(sf),
            ss.chord,
            side_of(ss),
            mirrored,
        ));
    }

    // Order hits along whole chords that carry two of them. With max two
    // crossings per chord, exact sweep fractions decide.
    let sweep_frac = |chord: EdgeId, partner: EdgeId| -> Option<(i128, i128)> {
        // both stay-chords in the same page
        let cs: Vec<&Segment> = layout
            .segments
            .iter()
            .filter(|s| s.chord == chord)
            .collect();
        let ps: Vec<&Segment> = layout
            .segments
            .iter()
            .filter(|s| s.chord == partner)
            .collect();
        for s in &cs {
            for p in &ps {
                if s.page != p.page {
                    continue;
                }
                let se = layout.seg_span(s);
                let pe = layout.seg_span(p);
                if !interleaved(n2, se, pe) {
                    continue;
                }
                // cut right before the chord's u-side end of this segment
                let u_end = if s.a_is_u_side { se.0 } else { se.1 };
                let other = if s.a_is_u_side { se.1 } else { se.0 };
                let q = |x: i64| (x - u_end).rem_euclid(n2);
                let he = q(other);
                let (mut qc, mut qd) = (q(pe.0), q(pe.1));
                if qc > qd {
                    std::mem::swap(&mut qc, &mut qd);
                }
                if !(0 < qc && qc < he && he < qd) {
                    // partner wraps around the cut; shift frame by the min
                    let shift = qc.min(he).min(qd);
                    let _ = shift;
                    return None;
                }
                let num = (qc as i128) * (qd as i128);
                let den = ((qc + qd) - he) as i128;
                return Some((num, den));
            }
        }
        None
    };

    // Group pending crossings per chord to assign positions.
    let mut per_chord: BTreeMap<EdgeId, Vec<usize>> = BTreeMap::new();
    for (idx, p) in pending.iter().enumerate() {
        per_chord.entry(p.0).or_default().push(idx);
        per_chord.entry(p.2).or_default().push(idx);
    }
    // Escapes and the pinch also occupy slots.
    let mut slot_of: BTreeMap<(usize, EdgeId), usize> = BTreeMap::new(); // (pending idx, edge) -> position
    for (&chord, list) in &per_chord {
        let route = layout.plan.routes.get(&chord).copied();
        let escape_here = matches!(route, Some(Route::Escape { .. }));
        // Order: u-side hits, then the escape, then v-side hits. A whole
        // chord with two hits orders by sweep fraction.
        let mut keyed: Vec<(Where, (i128, i128), usize)> = Vec::new();
        for &pi in list {
            let p = &pending[pi];
            let (w, partner) = if p.0 == chord {
                (p.1, p.2)
            } else {
                (p.3, p.0)
            };
            let frac = if escape_here {
                (0, 1)
            } else {
                sweep_frac(chord, partner).unwrap_or((0, 1))
            };
            keyed.push((w, frac, pi));
        }
        keyed.sort_by(|x, y| {
            x.0.cmp(&y.0)
                .then_with(|| (x.1 .0 * y.1 .1).cmp(&(y.1 .0 * x.1 .1)))
        });
        // Reject equal fractions on a two-hit whole chord (concurrency).
        for w in keyed.windows(2) {
            if w[0].0 == w[1].0 && w[0].1 .0 * w[1].1 .1 == w[1].1 .0 * w[0].1 .1 {
                return None;
            }
        }
        let mut slot = 0usize;
        let mut placed_escape = escape_here && keyed.iter().all(|(w, _, _)| *w != Where::USide);
        if placed_escape {
            slot = 1; // escape takes position 0
        }
        for (w, _, pi) in keyed {
            if escape_here && !placed_escape && w == Where::VSide {
                slot += 1; // the escape sits between u-side and v-side hits
                placed_escape = true;
            }
            slot_of.insert((pi, chord), slot);
            slot += 1;
        }
        let _ = route;
    }
    // Escape slot per chord: number of u-side hits on it.
    let mut escape_slot: BTreeMap<EdgeId, usize> = BTreeMap::new();
    for (&chord, &route) in &layout.plan.routes {
        if let Route::Escape { .. } = route {
            let u_hits = per_chord
                .get(&chord)
                .map(|list| {
                    list.iter()
                        .filter(|&&pi| {
                            let p = &pending[pi];
                            let w = if p.0 == chord { p.1 } else { p.3 };
                            w == Where::USide
                        })
                        .count()
                })
                .unwrap_or(0);
            escape_slot.insert(chord, u_hits);
        }
    }

    for (idx, p) in pending.iter().enumerate() {
        crossings.push(ScheduledCrossing {
            first: (p.0, slot_of[&(idx, p.0)]),
            second: (p.2, slot_of[&(idx, p.2)]),
            mirrored: p.4,
        });
    }
    let _ = chord_slots;

    // Escape crossings: chord x spine edge at the gap.
    let mut gap_used: BTreeSet<usize> = BTreeSet::new();
    for (&chord, &route) in &layout.plan.routes {
        let Route::Escape { gap, upage } = route else {
            continue;
        };
        if !gap_used.insert(gap) {
            return None; // one escape per gap keeps spine edges crossed once
        }
        let spine_edge = layout.plan.gap_edges[gap]?;
        if layout.plan.pinches.iter().any(|&(i, j)| gap == i || gap == j) {
            return None;
        }
        let edge = g.edge(chord).unwrap();
        let sedge = g.edge(spine_edge).unwrap();
        let n = layout.plan.spine.len();
        let vg = layout.plan.spine[gap];
        let _vg1 = layout.plan.spine[(gap + 1) % n];
        // Rotation at the crossing (global CCW):
        // [chord->inner end, spine->v_gap, chord->outer end, spine->v_gap+1].
        // The chord's inner end: endpoint of the segment on the inner page.
        let inner_end_is_v = match upage {
            Page::Inner => false, // u-side segment is inner, inner end is u
            Page::Outer => true,
        };
        let t1 = inner_end_is_v; // chord's stored v at the "first" slot
        let t2 = sedge.v == vg;
        let mirrored = (t1 != t2) ^ conv.escape_flip;
        let _ = edge;
        crossings.push(ScheduledCrossing {
            first: (chord, escape_slot[&chord]),
            second: (spine_edge, 0),
            mirrored,
        });
    }

    // The pinches.
    for (k, &(gi, gj)) in plan.pinches.iter().enumerate() {
        let ei = plan.gap_edges[gi]?;
        let ej = plan.gap_edges[gj]?;
        let n = plan.spine.len();
        let vi1 = plan.spine[(gi + 1) % n];
        let vj = plan.spine[gj];
        let t1 = g.edge(ei).unwrap().v == vi1;
        let t2 = g.edge(ej).unwrap().v == vj;
        let mirrored = (t1 != t2) ^ plan.pinch_flips[k];
        crossings.push(ScheduledCrossing {
            first: (ei, 0),
            second: (ej, 0),
            mirrored,
        });
    }

    // Rotations: [spine next] ++ [inner segments by ccw distance]
    //            ++ [spine prev] ++ [outer segments by cw distance].
    let n = plan.spine.len();
    let mut rotations: BTreeMap<VertexId, Vec<usize>> = BTreeMap::new();
    for (idx, &v) in plan.spine.iter().enumerate() {
        let p = 2 * idx as i64;
        let mut rot: Vec<usize> = Vec::new();
        let next_gap = idx;
        let prev_gap = (idx + n - 1) % n;
        let mut inner: Vec<(i64, EdgeId)> = Vec::new();
        let mut outer: Vec<(i64, EdgeId)> = Vec::new();
        for s in &layout.segments {
            let (end_here, other) = if s.va == Some(v) {
                (true, s.b)
            } else if s.vb == Some(v) {
                (true, s.a)
            } else {
                (false, 0)
            };
            if !end_here {
                continue;
            }
            let ccw = (other - p).rem_euclid(layout.n2);
            match s.page {
                Page::Inner => inner.push((ccw, s.chord)),
                Page::Outer => outer.push(((layout.n2 - ccw).rem_euclid(layout.n2), s.chord)),
            }
        }
        inner.sort_unstable();
        outer.sort_unstable();
        if conv.outer_reverse_block {
            outer.reverse();
        }
        let half_toward = |e: EdgeId| -> usize {
            let edge = g.edge(e).unwrap();
            if edge.u == v {
                2 * e
            } else {
                2 * e + 1
            }
        };
        if let Some(e) = plan.gap_edges[next_gap] {
            rot.push(half_toward(e));
        }
        rot.extend(inner.into_iter().map(|(_, e)| half_toward(e)));
        if let Some(e) = plan.gap_edges[prev_gap] {
            rot.push(half_toward(e));
        }
        rot.extend(outer.into_iter().map(|(_, e)| half_toward(e)));
        rotations.insert(v, rot);
    }
    Some(CrossingSchedule {
        rotations,
        crossings,
    })
}

/// Hamiltonian cycles (closed) or paths of `g`, up to `cap`, reversals
/// deduplicated.
fn hamiltonian_spines(g: &Graph, closed: bool, cap: usize) -> Vec<Vec<VertexId>> {
    let verts: Vec<VertexId> = g.vertices().collect();
    let n = verts.len();
    let mut out: Vec<Vec<VertexId>> = Vec::new();
    let starts: Vec<VertexId> = if closed { vec![verts[0]] } else { verts.clone() };
    #[allow(clippy::too_many_arguments)]
    fn dfs(
        g: &Graph,
        n: usize,
        closed: bool,
        cap: usize,
        path: &mut Vec<VertexId>,
        used: &mut BTreeSet<VertexId>,
        out: &mut Vec<Vec<VertexId>>,
    ) {
        if out.len() >= cap {
            return;
        }
        if path.len() == n {
            if closed {
                let last = *path.last().unwrap();
                if g.find_edge(last, path[0]).is_some() && path[1] < path[n - 1] {
                    out.push(path.clone());
                }
            } else if path[0] < path[n - 1] {
                out.push(path.clone());
            }
            return;
        }
        let cur = *path.last().unwrap();
        for e in g.incident_edges(cur) {
            let next = e.other(cur);
            if used.contains(&next) {
                continue;
            }
            used.insert(next);
            path.push(next);
            dfs(g, n, closed, cap, path, used, out);
            path.pop();
            used.remove(&next);
        }
    }
    for &start in &starts {
        if out.len() >= cap {
            break;
        }
        let mut path = vec![start];
        let mut used = BTreeSet::from([start]);
        dfs(g, n, closed, cap, &mut path, &mut used, &mut out);
    }
    out
}

struct Target {
    name: &'static str,
    file: &'static str,
    figure: &'static str,
    graph: Graph,
    closed_spine: bool,
    max_pinches: usize,
    max_escapes: usize,
    max_deg: usize,
    max_double: usize,
    spine_cap: usize,
    leaf_cap: usize,
    leaf_slice: usize,
    want_conn: bool,
    predicate: Box<dyn Fn(&SubdivisionDrawing, &EmbeddingProfile) -> bool>,
}

struct SearchCtx<'a> {
    t: &'a Target,
    g: &'a Graph,
    spine: Vec<VertexId>,
    gap_edges: Vec<Option<EdgeId>>,
    pinches: Vec<(usize, usize)>,
    /// Lobe id per doubled position (0 = outside every pinch arc).
    lobe: Vec<u8>,
    order: Vec<EdgeId>,
    conv: Conventions,
    leaves: usize,
    slice_leaves: usize,
}

fn try_leaf(ctx: &mut SearchCtx, routes: &BTreeMap<EdgeId, Route>) -> Option<SubdivisionDrawing> {
    ctx.leaves += 1;
    ctx.slice_leaves += 1;
    let t = ctx.t;
    let plan_base = BookPlan {
        spine: ctx.spine.clone(),
        gap_edges: ctx.gap_edges.clone(),
        pinches: ctx.pinches.clone(),
        pinch_flips: vec![false; ctx.pinches.len()],
        routes: routes.clone(),
    };
    // Budget check over segments.
    {
        let layout = Layout::new(ctx.g, &plan_base);
        let hits = layout.segment_crossings();
        let mut max_double = t.max_double;
        if !crossing_budget_ok(&layout, &hits, t.max_deg, &mut max_double) {
            return None;
        }
        // Quick skeleton requirement.
        let mut crossed_chords: BTreeSet<EdgeId> = BTreeSet::new();
        for &(i, j) in &hits {
            crossed_chords.insert(layout.segments[i].chord);
            crossed_chords.insert(layout.segments[j].chord);
        }
        let mut keep: BTreeSet<EdgeId> = ctx.gap_edges.iter().flatten().copied().collect();
        for (&chord, &route) in routes.iter() {
            match route {
                Route::Stay(_) => {
                    if !crossed_chords.contains(&chord) {
                        keep.insert(chord);
                    }
                }
                Route::Escape { gap, .. } => {
                    if let Some(se) = ctx.gap_edges[gap] {
                        keep.remove(&se);
                    }
                }
            }
        }
        for &(i, j) in &ctx.pinches {
            keep.remove(&ctx.gap_edges[i].unwrap());
            keep.remove(&ctx.gap_edges[j].unwrap());
        }
        let connected = ctx.g.edge_subgraph(&keep).is_connected();
        if t.want_connected_skeleton() != connected {
            return None;
        }
    }
    let ncombo = 1usize << ctx.pinches.len();
    for combo in 0..ncombo {
        let flips: Vec<bool> = (0..ctx.pinches.len()).map(|k| (combo >> k) & 1 == 1).collect();
        let plan = BookPlan {
            pinch_flips: flips,
            ..plan_base.clone()
        };
        let Some(schedule) = build_schedule(ctx.g, &plan, ctx.conv) else {
            continue;
        };
        let Ok(drawing) = realize_schedule(ctx.g, &schedule, SubdivisionPolicy::MinimalSplit)
        else {
            continue;
        };
        if !drawing.embedding.validate().is_empty() {
            continue;
        }
        let Ok(profile) = classify(&drawing.embedding) else {
            continue;
        };
        if (t.predicate)(&drawing, &profile) {
            return Some(drawing);
        }
    }
    None
}

impl Target {
    fn want_connected_skeleton(&self) -> bool {
        self.want_conn
    }
}

/// Route segments of a chord under a plan-in-progress.
fn route_segments(
    g: &Graph,
    pos: &BTreeMap<VertexId, i64>,
    n2: i64,
    chord: EdgeId,
    route: Route,
) -> Vec<(Page, (i64, i64))> {
    let edge = g.edge(chord).unwrap();
    let (pu, pv) = (pos[&edge.u], pos[&edge.v]);
    let page_pos = |page: Page, x: i64| match page {
        Page::Inner => x,
        Page::Outer => (n2 - x).rem_euclid(n2),
    };
    match route {
        Route::Stay(p) => vec![(p, (page_pos(p, pu), page_pos(p, pv)))],
        Route::Escape { gap, upage } => {
            let gp = 2 * gap as i64 + 1;
            let q = upage.flip();
            vec![
                (upage, (page_pos(upage, pu), page_pos(upage, gp))),
                (q, (page_pos(q, gp), page_pos(q, pv))),
            ]
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn assign_routes(
    ctx: &mut SearchCtx,
    idx: usize,
    escape_budget: usize,
    routes: &mut BTreeMap<EdgeId, Route>,
    pos: &BTreeMap<VertexId, i64>,
    segs: &mut Vec<(EdgeId, Page, (i64, i64))>,
    count: &mut BTreeMap<EdgeId, usize>,
    doubles: &mut usize,
) -> Option<SubdivisionDrawing> {
    if ctx.slice_leaves > ctx.t.leaf_slice {
        return None;
    }
    if idx == ctx.order.len() {
        return try_leaf(ctx, routes);
    }
    let e = ctx.order[idx];
    let n2 = 2 * ctx.spine.len() as i64;
    let max_deg = ctx.t.max_deg;
    let max_double = ctx.t.max_double;

    let mut options: Vec<Route> = vec![Route::Stay(Page::Inner), Route::Stay(Page::Outer)];
    if escape_budget > 0 {
        for gap in 0..ctx.gap_edges.len() {
            if ctx.gap_edges[gap].is_none() {
                continue;
            }
            if ctx.pinches.iter().any(|&(i, j)| gap == i || gap == j) {
                continue;
            }
            if routes
                .values()
                .any(|r| matches!(r, Route::Escape { gap: g2, .. } if *g2 == gap))
            {
                continue;
            }
            options.push(Route::Escape {
                gap,
                upage: Page::Inner,
            });
            options.push(Route::Escape {
                gap,
                upage: Page::Outer,
            });
        }
    }

    'routes: for route in options {
        let new_segs = route_segments(ctx.g, pos, n2, e, route);
        // Inner-page segments must stay within one pinch lobe.
        if !ctx.pinches.is_empty() {
            for &(page, _) in &new_segs {
                let _ = page;
            }
            let edge = ctx.g.edge(e).unwrap();
            let ends: Vec<(Page, i64, i64)> = match route {
                Route::Stay(p) => vec![(p, pos[&edge.u], pos[&edge.v])],
                Route::Escape { gap, upage } => {
                    let gp = 2 * gap as i64 + 1;
                    vec![
                        (upage, pos[&edge.u], gp),
                        (upage.flip(), gp, pos[&edge.v]),
                    ]
                }
            };
            for (page, a, b) in ends {
                if page == Page::Inner && ctx.lobe[a as usize] != ctx.lobe[b as usize] {
                    continue 'routes;
                }
            }
        }
        // Tentative conflict accounting.
        let mut partners: Vec<EdgeId> = Vec::new();
        let mut mine = match route {
            Route::Stay(_) => 0usize,
            Route::Escape { .. } => 1,
        };
        for &(page, span) in &new_segs {
            for &(other, opage, ospan) in segs.iter() {
                if opage != page {
                    continue;
                }
                if interleaved(n2, span, ospan) {
                    mine += 1;
                    partners.push(other);
                }
            }
        }
        if mine > max_deg {
            continue;
        }
        let mut ok = true;
        let mut new_doubles = *doubles + usize::from(mine >= 2);
        {
            let mut uniq: Vec<EdgeId> = partners.clone();
            uniq.sort_unstable();
            uniq.dedup();
            for &p in &uniq {
                let grew = partners.iter().filter(|&&x| x == p).count();
                let newc = count[&p] + grew;
                if newc > max_deg {
                    ok = false;
                    break;
                }
                if count[&p] < 2 && newc >= 2 {
                    new_doubles += 1;
                }
            }
        }
        if !ok || new_doubles > max_double {
            continue;
        }
        // Commit.
        let saved_counts: Vec<(EdgeId, usize)> =
            partners.iter().map(|&p| (p, count[&p])).collect();
        for &p in &partners {
            *count.get_mut(&p).unwrap() += 1;
        }
        count.insert(e, mine);
        let saved_doubles = *doubles;
        *doubles = new_doubles;
        for &s in &new_segs {
            segs.push((e, s.0, s.1));
        }
        routes.insert(e, route);
        let budget = match route {
            Route::Stay(_) => escape_budget,
            Route::Escape { .. } => escape_budget - 1,
        };
        if let Some(found) =
            assign_routes(ctx, idx + 1, budget, routes, pos, segs, count, doubles)
        {
            return Some(found);
        }
        // Rollback.
        routes.remove(&e);
        for _ in 0..new_segs.len() {
            segs.pop();
        }
        count.remove(&e);
        for (p, c) in saved_counts {
            count.insert(p, c);
        }
        *doubles = saved_doubles;
        if ctx.slice_leaves > ctx.t.leaf_slice {
            return None;
        }
    }
    None
}

fn search_target(t: &Target, conv: Conventions) -> Option<SubdivisionDrawing> {
    let g = &t.graph;
    let spines = hamiltonian_spines(g, t.closed_spine, t.spine_cap);
    println!("  {}: {} spines", t.name, spines.len());
    // Cheap configurations first: escalate the escape budget.
    for budget in 0..=t.max_escapes {
        if let Some(found) = search_with_budget(t, g, &spines, budget, conv) {
            return Some(found);
        }
        println!("  {}: nothing with {budget} escapes", t.name);
    }
    None
}

fn search_with_budget(
    t: &Target,
    g: &Graph,
    spines: &[Vec<VertexId>],
    budget: usize,
    conv: Conventions,
) -> Option<SubdivisionDrawing> {
    let mut total_leaves = 0usize;
    for spine in spines {
        let nn = spine.len();
        let mut gap_edges: Vec<Option<EdgeId>> = Vec::new();
        for k in 0..nn {
            if !t.closed_spine && k == nn - 1 {
                gap_edges.push(None);
            } else {
                gap_edges.push(g.find_edge(spine[k], spine[(k + 1) % nn]));
            }
        }
        let spine_ids: BTreeSet<EdgeId> = gap_edges.iter().flatten().copied().collect();
        let chords: Vec<EdgeId> = g
            .edges()
            .map(|e| e.id)
            .filter(|id| !spine_ids.contains(id))
            .collect();
        let pos: BTreeMap<VertexId, i64> = spine
            .iter()
            .enumerate()
            .map(|(i, &v)| (v, 2 * i as i64))
            .collect();
        let n2 = 2 * nn as i64;
        let span = |e: EdgeId| {
            let edge = g.edge(e).unwrap();
            (pos[&edge.u], pos[&edge.v])
        };
        // Candidate pinch sets: none, single pinches, and disjoint pairs,
        // ordered by how many chords they force into the outer page.
        let mut singles: Vec<(usize, usize)> = Vec::new();
        if t.max_pinches >= 1 {
            for i in 0..nn {
                if gap_edges[i].is_none() {
                    continue;
                }
                for j in (i + 2)..nn {
                    if gap_edges[j].is_none() || (i == 0 && j == nn - 1) {
                        continue;
                    }
                    singles.push((i, j));
                }
            }
        }
        let lobe_for = |pinches: &[(usize, usize)]| -> Vec<u8> {
            let mut lobe = vec![0u8; n2 as usize];
            for (k, &(i, j)) in pinches.iter().enumerate() {
                let (lo, hi) = (2 * i as i64 + 1, 2 * j as i64 + 1);
                for x in (lo + 1)..hi {
                    lobe[x as usize] = k as u8 + 1;
                }
            }
            lobe
        };
        let forced_outer = |lobe: &[u8]| -> usize {
            chords
                .iter()
                .filter(|&&e| {
                    let (a, b) = span(e);
                    lobe[a as usize] != lobe[b as usize]
                })
                .count()
        };
        let mut pinch_sets: Vec<Vec<(usize, usize)>> = vec![vec![]];
        pinch_sets.extend(singles.iter().map(|&p| vec![p]));
        if t.max_pinches >= 2 {
            for (a, &p1) in singles.iter().enumerate() {
                for &p2 in &singles[a + 1..] {
                    if p1.1 < p2.0 {
                        pinch_sets.push(vec![p1, p2]);
                    }
                }
            }
        }
        pinch_sets.sort_by_key(|ps| forced_outer(&lobe_for(ps)));
        // Order chords by interleave count for stronger pruning.
        let mut order = chords.clone();
        let mut icount: BTreeMap<EdgeId, usize> = chords.iter().map(|&e| (e, 0)).collect();
        for (i, &e) in chords.iter().enumerate() {
            for &f in &chords[i + 1..] {
                if interleaved(n2, span(e), span(f)) {
                    *icount.get_mut(&e).unwrap() += 1;
                    *icount.get_mut(&f).unwrap() += 1;
                }
            }
        }
        order.sort_by_key(|e| std::cmp::Reverse(icount[e]));
        for pinches in &pinch_sets {
            let mut ctx = SearchCtx {
                t,
                g,
                spine: spine.clone(),
                gap_edges: gap_edges.clone(),
                pinches: pinches.clone(),
                lobe: lobe_for(pinches),
                order: order.clone(),
                conv,
                leaves: 0,
                slice_leaves: 0,
            };
            let vpos: BTreeMap<VertexId, i64> = pos.clone();
            let mut routes = BTreeMap::new();
            let mut segs = Vec::new();
            let mut count = BTreeMap::new();
            let mut doubles = 0usize;
            if let Some(found) = assign_routes(
                &mut ctx,
                0,
                budget,
                &mut routes,
                &vpos,
                &mut segs,
                &mut count,
                &mut doubles,
            ) {
                return Some(found);
            }
            total_leaves += ctx.leaves;
            if total_leaves > t.leaf_cap {
                return None;
            }
        }
    }
    None
}

fn calibrate() -> Conventions {
    // Outer-page handedness: hexagon with its long diagonals outside.
    let hexagon = Graph::from_edges(
        6,
        &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 3), (1, 4)],
    );
    let spine: Vec<VertexId> = (0..6).collect();
    let gaps: Vec<Option<EdgeId>> = (0..6).map(|k| hexagon.find_edge(k, (k + 1) % 6)).collect();
    let mut found: Option<Conventions> = None;
    'outer: for orb in [false, true] {
        for ofm in [false, true] {
            for ef in [false, true] {
                let conv = Conventions {
                    outer_reverse_block: orb,
                    outer_flip_mirrored: ofm,
                    escape_flip: ef,
                };
                let cases: Vec<BTreeMap<EdgeId, Route>> = vec![
                    BTreeMap::from([(6, Route::Stay(Page::Outer)), (7, Route::Stay(Page::Outer))]),
                    BTreeMap::from([(6, Route::Stay(Page::Inner)), (7, Route::Stay(Page::Outer))]),
                    BTreeMap::from([(6, Route::Stay(Page::Inner)), (7, Route::Stay(Page::Inner))]),
                    // chord 6 escapes through gap (1,2), chord 7 inner:
                    // gives a chord x spine crossing.
                    BTreeMap::from([
                        (6, Route::Escape { gap: 1, upage: Page::Outer }),
                        (7, Route::Stay(Page::Outer)),
                    ]),
                ];
                for routes in &cases {
                    let plan = BookPlan {
                        spine: spine.clone(),
                        gap_edges: gaps.clone(),
                        pinches: vec![],
                        pinch_flips: vec![],
                        routes: routes.clone(),
                    };
                    let Some(schedule) = build_schedule(&hexagon, &plan, conv) else {
                        continue 'outer;
                    };
                    let Ok(drawing) =
                        realize_schedule(&hexagon, &schedule, SubdivisionPolicy::MinimalSplit)
                    else {
                        continue 'outer;
                    };
                    if !drawing.embedding.validate().is_empty() {
                        continue 'outer;
                    }
                }
                found = Some(conv);
                println!("calibrated: {conv:?}");
                break 'outer;
            }
        }
    }
    found.expect("some convention combination must validate")
}

fn pinch_smoke(conv: Conventions) {
    let c6 = Graph::from_edges(6, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0)]);
    let spine: Vec<VertexId> = (0..6).collect();
    let mut worked = false;
    for flip in [false, true] {
        let plan = BookPlan {
            spine: spine.clone(),
            gap_edges: (0..6).map(|k| c6.find_edge(k, (k + 1) % 6)).collect(),
            pinches: vec![(0, 3)],
            pinch_flips: vec![flip],
            routes: BTreeMap::new(),
        };
        if let Some(schedule) = build_schedule(&c6, &plan, conv) {
            if let Ok(drawing) = realize_schedule(&c6, &schedule, SubdivisionPolicy::MinimalSplit) {
                if drawing.embedding.validate().is_empty() {
                    let profile = classify(&drawing.embedding).unwrap();
                    assert!(!profile.connected_skeleton);
                    worked = true;
                    break;
                }
            }
        }
    }
    assert!(worked, "pinched hexagon must realize for one chirality");
}

fn flags(p: &EmbeddingProfile, poppy: bool, locmax: bool, conn: bool) -> bool {
    p.poppy == poppy && p.locally_maximal == locmax && p.connected_skeleton == conn
}

fn main() {
    let conv = calibrate();
    pinch_smoke(conv);

    let out_dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures");
    let mut failures = Vec::new();

    let targets: Vec<Target> = vec![
        Target {
            name: "K_{4,4}",
            file: "k44.json",
            figure: "fig-k44",
            graph: {
                let mut g = Graph::with_vertices(8);
                for u in 0..4 {
                    for v in 4..8 {
                        g.add_edge(u, v).unwrap();
                    }
                }
                g
            },
            closed_spine: true,
            max_pinches: 1,
            max_escapes: 3,
            max_deg: 1,
            max_double: 0,
            spine_cap: 400,
            leaf_cap: 500_000,
            leaf_slice: 3000,
            want_conn: false,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty() && flags(p, false, false, false)
            }),
        },
        Target {
            name: "Hypercube4",
            file: "q4.json",
            figure: "fig-q4",
            graph: catalog::hypercube4(),
            closed_spine: true,
            max_pinches: 1,
            max_escapes: 4,
            max_deg: 1,
            max_double: 0,
            spine_cap: 1400,
            leaf_cap: 3_000_000,
            leaf_slice: 2000,
            want_conn: true,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty() && flags(p, false, false, true)
            }),
        },
        Target {
            name: "Petersen",
            file: "petersen.json",
            figure: "fig-poppy-petersen",
            graph: catalog::generalized_petersen(5, 2),
            closed_spine: false,
            max_pinches: 2,
            max_escapes: 3,
            max_deg: 1,
            max_double: 0,
            spine_cap: 3000,
            leaf_cap: 3_000_000,
            leaf_slice: 2000,
            want_conn: false,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty()
                    && flags(p, true, false, false)
                    && matches!(balanced_skirt_orientation(&d.embedding), Ok(None))
            }),
        },
        Target {
            name: "Heawood",
            file: "heawood.json",
            figure: "fig-heawood",
            graph: catalog::lcf(7, &[5, -5]),
            closed_spine: true,
            max_pinches: 0,
            max_escapes: 4,
            max_deg: 1,
            max_double: 0,
            spine_cap: 2000,
            leaf_cap: 2_000_000,
            leaf_slice: 3000,
            want_conn: true,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty() && flags(p, true, false, true)
            }),
        },
        Target {
            name: "McGee",
            file: "mcgee.json",
            figure: "fig-mcgee",
            graph: catalog::lcf(8, &[12, 7, -7]),
            closed_spine: true,
            max_pinches: 2,
            max_escapes: 2,
            max_deg: 1,
            max_double: 0,
            spine_cap: 150,
            leaf_cap: 2_000_000,
            leaf_slice: 1000,
            want_conn: false,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty() && flags(p, false, false, false)
            }),
        },
        Target {
            name: "Nauru",
            file: "nauru.json",
            figure: "fig-nauru",
            graph: catalog::lcf(4, &[5, -9, 7, -7, 9, -5]),
            closed_spine: true,
            max_pinches: 2,
            max_escapes: 2,
            max_deg: 1,
            max_double: 0,
            spine_cap: 150,
            leaf_cap: 2_000_000,
            leaf_slice: 1000,
            want_conn: false,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty() && flags(p, false, false, false)
            }),
        },
        Target {
            name: "Franklin",
            file: "franklin.json",
            figure: "fig-franklin",
            graph: catalog::lcf(6, &[5, -5]),
            closed_spine: true,
            max_pinches: 2,
            max_escapes: 2,
            max_deg: 1,
            max_double: 0,
            spine_cap: 400,
            leaf_cap: 2_000_000,
            leaf_slice: 1500,
            want_conn: false,
            predicate: Box::new(|d, p| {
                d.contraction_chain.is_empty() && flags(p, false, false, false)
            }),
        },
        Target {
            name: "Desargues",
            file: "desargues.json",
            figure: "fig-aux-desargues",
            graph: kbasis::constructions::desargues_graph(),
            closed_spine: true,
            max_pinches: 2,
            max_escapes: 2,
            max_deg: 1,
            max_double: 0,
            spine_cap: 300,
            leaf_cap: 2_000_000,
            leaf_slice: 1500,
            want_conn: false,
            predicate: Box::new(|d, p| {
                if !d.contraction_chain.is_empty() || !flags(p, false, false, false) {
                    return false;
                }
                let Ok(q) = kbasis::constructions::auxiliary_graph(&d.embedding) else {
                    return false;
                };
                matches!(tree_packing(&q.graph, 3), Ok(TreePacking::Found(_)))
            }),
        },
        Target {
            name: "SubdividedTutte8Cage",
            file: "subdivided_cage.json",
            figure: "fig-subdivided-cage",
            graph: catalog::lcf(5, &[-13, -9, 7, -7, 9, 13]),
            closed_spine: true,
            max_pinches: 2,
            max_escapes: 2,
            max_deg: 2,
            max_double: 4,
            spine_cap: 40,
            leaf_cap: 2_000_000,
            leaf_slice: 2000,
            want_conn: false,
            predicate: Box::new(|d, p| {
                d.contraction_chain.len() == 4
                    && d.graph.vertex_count() == 34
                    && flags(p, false, false, false)
            }),
        },
    ];

    for t in &targets {
        let path = out_dir.join(t.file);
        if std::fs::metadata(&path).map(|m| m.len() > 100).unwrap_or(false)
            && std::env::var("REGEN").is_err()
        {
            println!("skipping {} (fixture present)", t.name);
            continue;
        }
        println!("searching {} ...", t.name);
        let start = std::time::Instant::now();
        match search_target(t, conv) {
            Some(drawing) => {
                let fixture = FixtureJson::new(t.name, t.figure, &drawing.embedding);
                let text = serde_json::to_string_pretty(&fixture).unwrap();
                std::fs::write(out_dir.join(t.file), text).unwrap();
                println!(
                    "  {} ok in {:.1?}: {} crossings, {} vertices",
                    t.name,
                    start.elapsed(),
                    drawing.embedding.crossing_count(),
                    drawing.graph.vertex_count()
                );
            }
            None => {
                println!("  {} FAILED after {:.1?}", t.name, start.elapsed());
                failures.push(t.name);
            }
        }
    }
    if !failures.is_empty() {
        eprintln!("failed targets: {failures:?}");
        std::process::exit(1);
    }
}
