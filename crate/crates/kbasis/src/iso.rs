//! Multigraph isomorphism at catalog scale: iterated degree refinement plus
//! backtracking. Good enough for the symmetric cubic graphs the fixtures use;
//! not a general-purpose canonical labeling.

use std::collections::BTreeMap;

use crate::graph::{Graph, VertexId};

/// Multiplicity of edges between `u` and `v` (loops counted once here).
fn multiplicity(g: &Graph, u: VertexId, v: VertexId) -> usize {
    g.edges()
        .filter(|e| (e.u == u && e.v == v) || (e.u == v && e.v == u))
        .count()
}

fn loop_count(g: &Graph, v: VertexId) -> usize {
    g.edges().filter(|e| e.is_loop() && e.u == v).count()
}

/// Stable coloring by iterated refinement on (color, sorted neighbor colors
/// with multiplicities, loop count).
fn refine(g: &Graph) -> BTreeMap<VertexId, u64> {
    let mut color: BTreeMap<VertexId, u64> =
        g.vertices().map(|v| (v, g.degree(v) as u64)).collect();
    for _ in 0..g.vertex_count() {
        let mut sig: BTreeMap<VertexId, (u64, Vec<u64>, usize)> = BTreeMap::new();
        for v in g.vertices() {
            let mut ns: Vec<u64> = g
                .incident_edges(v)
                .iter()
                .filter(|e| !e.is_loop())
                .map(|e| color[&e.other(v)])
                .collect();
            ns.sort_unstable();
            sig.insert(v, (color[&v], ns, loop_count(g, v)));
        }
        let mut palette: BTreeMap<&(u64, Vec<u64>, usize), u64> = BTreeMap::new();
        let mut next = 0u64;
        let mut fresh: BTreeMap<VertexId, u64> = BTreeMap::new();
        for (v, s) in &sig {
            let c = *palette.entry(s).or_insert_with(|| {
                let c = next;
                next += 1;
                c
            });
            fresh.insert(*v, c);
        }
        if fresh == color {
            break;
        }
        color = fresh;
    }
    color
}

fn class_histogram(color: &BTreeMap<VertexId, u64>) -> BTreeMap<u64, usize> {
    let mut h = BTreeMap::new();
    for c in color.values() {
        *h.entry(*c).or_insert(0) += 1;
    }
    h
}

/// Exact isomorphism test for multigraphs.
pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    if a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count() {
        return false;
    }
    let ca = refine(a);
    let cb = refine(b);
    if class_histogram(&ca) != class_histogram(&cb) {
        return false;
    }

    // Assign images in an order that keeps the frontier connected where
    // possible, so adjacency constraints prune early.
    let mut order: Vec<VertexId> = a.vertices().collect();
    order.sort_by_key(|v| {
        let hist = class_histogram(&ca);
        (hist[&ca[v]], ca[v], *v)
    });
    let bs: Vec<VertexId> = b.vertices().collect();

    struct Search<'x> {
        a: &'x Graph,
        b: &'x Graph,
        ca: &'x BTreeMap<VertexId, u64>,
        cb: &'x BTreeMap<VertexId, u64>,
        order: &'x [VertexId],
        bs: &'x [VertexId],
    }

    impl Search<'_> {
        fn go(&self, idx: usize, map: &mut BTreeMap<VertexId, VertexId>, used: &mut Vec<bool>) -> bool {
            if idx == self.order.len() {
                return true;
            }
            let v = self.order[idx];
            for (bi, &w) in self.bs.iter().enumerate() {
                if used[bi] || self.ca[&v] != self.cb[&w] {
                    continue;
                }
                if loop_count(self.a, v) != loop_count(self.b, w) {
                    continue;
                }
                let ok = map.iter().all(|(&x, &y)| {
                    multiplicity(self.a, v, x) == multiplicity(self.b, w, y)
                });
                if !ok {
                    continue;
                }
                map.insert(v, w);
                used[bi] = true;
                if self.go(idx + 1, map, used) {
                    return true;
                }
                map.remove(&v);
                used[bi] = false;
            }
            false
        }
    }

    let search = Search {
        a,
        b,
        ca: &ca,
        cb: &cb,
        order: &order,
        bs: &bs,
    };
    search.go(0, &mut BTreeMap::new(), &mut vec![false; bs.len()])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relabeled_petersen_is_isomorphic() {
        let petersen = |shift: usize| {
            let mut edges = Vec::new();
            for k in 0..5 {
                edges.push(((k + shift) % 5, (k + 1 + shift) % 5));
                edges.push(((k + shift) % 5, 5 + ((k + shift) % 5)));
                edges.push((5 + ((k + shift) % 5), 5 + ((k + 2 + shift) % 5)));
            }
            Graph::from_edges(10, &edges)
        };
        assert!(are_isomorphic(&petersen(0), &petersen(2)));
    }

    #[test]
    fn cycle_lengths_differ() {
        let c5 = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]);
        let mut c4_plus = Graph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 0)]);
        c4_plus.add_edge(0, 2).unwrap();
        assert!(!are_isomorphic(&c5, &c4_plus));
    }

    #[test]
    fn multiplicities_matter() {
        let double = Graph::from_edges(2, &[(0, 1), (0, 1)]);
        let mut loops = Graph::from_edges(2, &[(0, 1)]);
        loops.add_edge(0, 0).unwrap();
        assert!(!are_isomorphic(&double, &loops));
    }
}
