//! Face-local saturation: the minimum number of non-crossing edges, added
//! inside one face, that saturate every switch holding a +1 angle there.
//!
//! An edge into a source or out of a sink removes its switch status; one
//! sink-to-source edge can handle two switches at once. Candidate endpoints
//! live on the face boundary; crossing is a matter of cyclic endpoint order
//! only. The minimization enumerates subsets in increasing size, so results
//! are exact and deterministic.

use crate::digraph::{classify_switches, is_acyclic, Digraph, SwitchClass, Vertex};
use crate::planarity::PlanarEmbedding;
use crate::upward::{AngleAssignment, Label};
use itertools::Itertools;

/// One angle of a face walk, as the saturation search sees it.
#[derive(Debug, Clone, Copy)]
pub struct BoundaryAngle {
    pub vertex: Vertex,
    pub label: Label,
    /// Both boundary edges point the same way at the vertex.
    pub switch_angle: bool,
    /// Both point away (meaningful only for switch angles).
    pub source_like: bool,
}

/// Boundary slots after collapsing runs of non-switch angles.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Slot {
    Switch {
        vertex: Vertex,
        label: Label,
        source_like: bool,
    },
    Run {
        vertex: Vertex,
    },
}

#[derive(Debug, Clone)]
pub struct SimplifiedBoundary {
    pub slots: Vec<Slot>,
}

/// Read a face of an embedding into boundary angles. `None` if the
/// assignment misses an angle of the face.
pub fn face_boundary(
    g: &Digraph,
    emb: &PlanarEmbedding,
    face: usize,
    labels: &AngleAssignment,
) -> Option<Vec<BoundaryAngle>> {
    let walk = emb.face_walk(face);
    let mut out = Vec::with_capacity(walk.len());
    for (pos, &(v, e_in, e_out)) in walk.iter().enumerate() {
        let label = labels.get(face, pos)?;
        let into_v = |e: usize| g.edge(emb.representative(e)).1 == v;
        let switch_angle = into_v(e_in) == into_v(e_out);
        let source_like = switch_angle && !into_v(e_in);
        out.push(BoundaryAngle {
            vertex: v,
            label,
            switch_angle,
            source_like,
        });
    }
    Some(out)
}

pub fn simplify_boundary(raw: &[BoundaryAngle]) -> SimplifiedBoundary {
    simplify_with(raw, false)
}

/// Same collapse with the last run vertex as representative; the choice must
/// not affect saturation results.
#[cfg(test)]
pub(crate) fn simplify_boundary_last_rep(raw: &[BoundaryAngle]) -> SimplifiedBoundary {
    simplify_with(raw, true)
}

fn simplify_with(raw: &[BoundaryAngle], last_rep: bool) -> SimplifiedBoundary {
    let n = raw.len();
    let mut slots = Vec::new();
    if n == 0 {
        return SimplifiedBoundary { slots };
    }
    let Some(first_switch) = raw.iter().position(|a| a.switch_angle) else {
        // Degenerate: one run covering the whole boundary.
        let vertex = if last_rep {
            raw[n - 1].vertex
        } else {
            raw[0].vertex
        };
        return SimplifiedBoundary {
            slots: vec![Slot::Run { vertex }],
        };
    };
    // Rotate so the walk starts at a switch angle; runs then never wrap.
    let mut i = 0;
    while i < n {
        let pos = (first_switch + i) % n;
        let a = raw[pos];
        if a.switch_angle {
            slots.push(Slot::Switch {
                vertex: a.vertex,
                label: a.label,
                source_like: a.source_like,
            });
            i += 1;
        } else {
            let start = i;
            while i < n && !raw[(first_switch + i) % n].switch_angle {
                i += 1;
            }
            let rep_off = if last_rep { i - 1 } else { start };
            slots.push(Slot::Run {
                vertex: raw[(first_switch + rep_off) % n].vertex,
            });
        }
    }
    SimplifiedBoundary { slots }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SaturatingEdge {
    pub from: Vertex,
    pub to: Vertex,
    /// Switch vertices this edge saturates in its face.
    pub saturates: Vec<Vertex>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Saturation {
    pub edges: Vec<SaturatingEdge>,
    /// False when only a cyclic edge set of minimum size exists; the count
    /// is still the true face-local minimum, the witness needs repair.
    pub clean: bool,
}

impl Saturation {
    pub fn cost(&self) -> usize {
        self.edges.len()
    }

    fn none() -> Self {
        Saturation {
            edges: Vec::new(),
            clean: true,
        }
    }
}

/// Minimum edges saturating every +1 switch of an inner face, up to `cap`.
/// `None` when no candidate set of size ≤ cap covers everything.
pub fn min_saturating_edges(
    g: &Digraph,
    raw: &[BoundaryAngle],
    cap: usize,
) -> Option<Saturation> {
    let switches = classify_switches(g);
    let targets: Vec<usize> = (0..raw.len()).filter(|&i| raw[i].label == 1).collect();
    solve_face(g, &switches, raw, &targets, cap, None)
}

/// External-face variant: one +1 source and one +1 sink stay unsaturated and
/// become the global source and sink; every other +1 switch is saturated.
/// Ties between keep-choices go to the smallest vertex ids. `None` when the
/// face lacks a +1 source or a +1 sink, or no choice fits the cap.
pub fn min_saturating_edges_external(
    g: &Digraph,
    raw: &[BoundaryAngle],
    cap: usize,
) -> Option<(Saturation, (Vertex, Vertex))> {
    let switches = classify_switches(g);
    let plus = |i: &usize| raw[*i].label == 1;
    let src_slots: Vec<usize> = (0..raw.len())
        .filter(plus)
        .filter(|&i| raw[i].source_like)
        .collect();
    let snk_slots: Vec<usize> = (0..raw.len())
        .filter(plus)
        .filter(|&i| !raw[i].source_like)
        .collect();
    let mut keeps: Vec<(usize, usize)> = src_slots
        .iter()
        .flat_map(|&s| snk_slots.iter().map(move |&t| (s, t)))
        .collect();
    keeps.sort_by_key(|&(s, t)| (raw[s].vertex, raw[t].vertex, s, t));
    let mut best: Option<(Saturation, (Vertex, Vertex))> = None;
    for (ks, kt) in keeps {
        let targets: Vec<usize> = (0..raw.len())
            .filter(|&i| raw[i].label == 1 && i != ks && i != kt)
            .collect();
        if let Some(sat) = solve_face(g, &switches, raw, &targets, cap, Some((ks, kt))) {
            let better = match &best {
                None => true,
                Some((b, _)) => sat.cost() < b.cost(),
            };
            if better {
                best = Some((sat, (raw[ks].vertex, raw[kt].vertex)));
            }
        }
    }
    best
}

/// Candidate edges attach a saturating endpoint at its +1 angle and the
/// other endpoint at any boundary occurrence; subsets are screened for
/// coverage, cyclic non-crossing, and side effects on other switches.
fn solve_face(
    g: &Digraph,
    switches: &SwitchClass,
    raw: &[BoundaryAngle],
    targets: &[usize],
    cap: usize,
    keep: Option<(usize, usize)>,
) -> Option<Saturation> {
    if targets.is_empty() {
        return Some(Saturation::none());
    }
    let n = raw.len();
    let is_target = |i: usize| targets.contains(&i);
    // (tail position, head position, targets covered)
    let mut candidates: Vec<(usize, usize, Vec<usize>)> = Vec::new();
    for p in 0..n {
        for q in 0..n {
            let (a, b) = (raw[p].vertex, raw[q].vertex);
            if p == q || a == b || g.adjacent(a, b) {
                continue;
            }
            let sat_head = is_target(q) && raw[q].source_like;
            let sat_tail = is_target(p) && !raw[p].source_like;
            if !sat_head && !sat_tail {
                continue;
            }
            // An edge into a source saturates it, likewise out of a sink;
            // that must never happen to a switch we are not targeting here.
            if switches.sources().any(|s| s == b) && !sat_head {
                continue;
            }
            if switches.sinks().any(|t| t == a) && !sat_tail {
                continue;
            }
            let mut covered = Vec::new();
            if sat_tail {
                covered.push(p);
            }
            if sat_head {
                covered.push(q);
            }
            candidates.push((p, q, covered));
        }
    }
    let lo = targets.len().div_ceil(2).max(1);
    let hi = targets.len().min(cap);
    let mut fallback: Option<Vec<usize>> = None;
    for size in lo..=hi {
        for combo in (0..candidates.len()).combinations(size) {
            if !subset_ok(raw, &candidates, &combo, targets, keep) {
                continue;
            }
            // Prefer sets that keep the graph acyclic; remember the first
            // geometric fit so the count stays exact either way.
            let pairs: Vec<(Vertex, Vertex)> = combo
                .iter()
                .map(|&ci| {
                    let (p, q, _) = &candidates[ci];
                    (raw[*p].vertex, raw[*q].vertex)
                })
                .collect();
            let acyclic = g
                .with_edges(&pairs)
                .map(|aug| is_acyclic(&aug))
                .unwrap_or(false);
            if acyclic {
                return Some(build_witness(raw, &candidates, &combo, true));
            }
            if fallback.is_none() {
                fallback = Some(combo.clone());
            }
        }
        if let Some(combo) = fallback {
            return Some(build_witness(raw, &candidates, &combo, false));
        }
    }
    None
}

fn subset_ok(
    raw: &[BoundaryAngle],
    candidates: &[(usize, usize, Vec<usize>)],
    combo: &[usize],
    targets: &[usize],
    keep: Option<(usize, usize)>,
) -> bool {
    // Full coverage.
    let mut covered: Vec<usize> = combo
        .iter()
        .flat_map(|&ci| candidates[ci].2.iter().copied())
        .collect();
    covered.sort_unstable();
    covered.dedup();
    if targets.iter().any(|t| !covered.contains(t)) {
        return false;
    }
    // No repeated or opposed vertex pairs.
    for (x, y) in combo.iter().tuple_combinations() {
        let (p1, q1, _) = &candidates[*x];
        let (p2, q2, _) = &candidates[*y];
        let e1 = (raw[*p1].vertex, raw[*q1].vertex);
        let e2 = (raw[*p2].vertex, raw[*q2].vertex);
        if e1 == e2 || e1 == (e2.1, e2.0) {
            return false;
        }
        if crossing(raw.len(), (*p1, *q1), (*p2, *q2)) {
            return false;
        }
    }
    // On the external face no chord may cut the kept source off from the
    // kept sink, or they stop sharing a face.
    if let Some((ks, kt)) = keep {
        for &ci in combo {
            let (p, q, _) = &candidates[ci];
            if separates(raw.len(), (*p, *q), ks, kt) {
                return false;
            }
        }
    }
    true
}

/// Two chords cross iff their endpoints interleave around the cycle; chords
/// sharing an endpoint position can always be drawn apart.
fn crossing(n: usize, e1: (usize, usize), e2: (usize, usize)) -> bool {
    let (a, b) = e1;
    let (c, d) = e2;
    if a == c || a == d || b == c || b == d {
        return false;
    }
    let inside = |x: usize| -> bool {
        // Strictly inside the arc from a to b (walk order).
        let span = (b + n - a) % n;
        let off = (x + n - a) % n;
        off > 0 && off < span
    };
    inside(c) != inside(d)
}

/// Does the chord split positions `s` and `t` into different sides?
fn separates(n: usize, chord: (usize, usize), s: usize, t: usize) -> bool {
    let (a, b) = chord;
    if s == a || s == b || t == a || t == b {
        return false;
    }
    let inside = |x: usize| -> bool {
        let span = (b + n - a) % n;
        let off = (x + n - a) % n;
        off > 0 && off < span
    };
    inside(s) != inside(t)
}

fn build_witness(
    raw: &[BoundaryAngle],
    candidates: &[(usize, usize, Vec<usize>)],
    combo: &[usize],
    clean: bool,
) -> Saturation {
    let edges = combo
        .iter()
        .map(|&ci| {
            let (p, q, covered) = &candidates[ci];
            SaturatingEdge {
                from: raw[*p].vertex,
                to: raw[*q].vertex,
                saturates: covered.iter().map(|&i| raw[i].vertex).collect(),
            }
        })
        .collect();
    Saturation { edges, clean }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::planarity::test_planarity;

    fn z4() -> Digraph {
        Digraph::new(4, vec![(0, 1), (2, 1), (2, 3), (0, 3)]).unwrap()
    }

    fn sw(vertex: Vertex, label: Label, source_like: bool) -> BoundaryAngle {
        BoundaryAngle {
            vertex,
            label,
            switch_angle: true,
            source_like,
        }
    }

    fn ns(vertex: Vertex) -> BoundaryAngle {
        BoundaryAngle {
            vertex,
            label: 0,
            switch_angle: false,
            source_like: false,
        }
    }

    /// Z4 inner face with the +1 at the given vertex. Walk order 0,1,2,3;
    /// even vertices are sources, odd are sinks.
    fn z4_face(plus: Vertex) -> Vec<BoundaryAngle> {
        (0..4)
            .map(|v| sw(v, if v == plus { 1 } else { -1 }, v % 2 == 0))
            .collect()
    }

    #[test]
    fn simplification_examples() {
        let b = simplify_boundary(&z4_face(1));
        assert_eq!(b.slots.len(), 4);

        let raw = vec![sw(0, 1, true), ns(1), ns(2), ns(3), sw(4, -1, false)];
        let b = simplify_boundary(&raw);
        assert_eq!(b.slots.len(), 3);
        assert_eq!(b.slots[1], Slot::Run { vertex: 1 });
        let b = simplify_boundary_last_rep(&raw);
        assert_eq!(b.slots.len(), 3);
        assert_eq!(b.slots[1], Slot::Run { vertex: 3 });

        // Wrapping run: non-switch angles on both sides of position 0.
        let raw = vec![ns(5), sw(0, 1, true), ns(6), sw(1, -1, false), ns(7)];
        let b = simplify_boundary(&raw);
        assert_eq!(b.slots.len(), 4);
        assert_eq!(b.slots.last(), Some(&Slot::Run { vertex: 7 }));

        // Two switch angles leave at most five slots.
        let g = Digraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        let emb = test_planarity(&g).unwrap();
        let mut labels = AngleAssignment::new();
        for f in 0..2 {
            for (pos, &(v, _, _)) in emb.face_walk(f).iter().enumerate() {
                labels.set(f, pos, if v == 0 || v == 3 { -1 } else { 0 });
            }
        }
        let raw = face_boundary(&g, &emb, 0, &labels).unwrap();
        let b = simplify_boundary(&raw);
        assert!(b.slots.len() <= 5);
    }

    #[test]
    fn no_targets_costs_nothing() {
        let g = z4();
        let sat = min_saturating_edges(&g, &z4_face(9), 3).unwrap();
        assert_eq!(sat.cost(), 0);
    }

    #[test]
    fn z4_single_plus_needs_one_edge() {
        let g = z4();
        // +1 at sink 1: the only non-adjacent partner is vertex 3.
        let sat = min_saturating_edges(&g, &z4_face(1), 3).unwrap();
        assert_eq!(sat.cost(), 1);
        assert!(sat.clean);
        assert_eq!(sat.edges[0].from, 1);
        assert_eq!(sat.edges[0].to, 3);
        assert_eq!(sat.edges[0].saturates, vec![1]);
    }

    #[test]
    fn one_edge_saturates_a_source_and_a_sink() {
        // Alternating 6-cycle, inner face walk 0..5, +1 at sink 1 and
        // source 4; the single edge 1 -> 4 covers both.
        let g = Digraph::new(6, vec![(0, 1), (2, 1), (2, 3), (4, 3), (4, 5), (0, 5)]).unwrap();
        let raw: Vec<BoundaryAngle> = (0..6)
            .map(|v| sw(v, if v == 1 || v == 4 { 1 } else { -1 }, v % 2 == 0))
            .collect();
        let sat = min_saturating_edges(&g, &raw, 3).unwrap();
        assert_eq!(sat.cost(), 1);
        assert_eq!(sat.edges[0].from, 1);
        assert_eq!(sat.edges[0].to, 4);
        assert_eq!(sat.edges[0].saturates, vec![1, 4]);
    }

    #[test]
    fn infeasible_when_no_partner_exists() {
        // Triangle-ish face where the +1 switch is adjacent to everyone.
        let g = Digraph::new(3, vec![(0, 1), (2, 1), (2, 0)]).unwrap();
        let raw = vec![sw(0, -1, false), sw(1, 1, false), sw(2, -1, true)];
        assert!(min_saturating_edges(&g, &raw, 3).is_none());
    }

    #[test]
    fn external_keeps_a_source_and_a_sink() {
        let g = Digraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap();
        // Diamond external face: +1 at source 0 and sink 3 only.
        let raw = vec![sw(0, 1, true), ns(1), sw(3, 1, false), ns(2)];
        let (sat, kept) = min_saturating_edges_external(&g, &raw, 3).unwrap();
        assert_eq!(sat.cost(), 0);
        assert_eq!(kept, (0, 3));
    }

    #[test]
    fn external_saturates_the_spare_source() {
        // Z4 external face: +1 at sources 0 and 2, +1 at sink 1, -1 at 3.
        // Keep (0, 1), saturate source 2 with an edge from the only
        // non-adjacent vertex.
        let g = z4();
        let raw = vec![
            sw(0, 1, true),
            sw(1, 1, false),
            sw(2, 1, true),
            sw(3, -1, false),
        ];
        let (sat, kept) = min_saturating_edges_external(&g, &raw, 3).unwrap();
        assert_eq!(sat.cost(), 1);
        assert_eq!(kept, (0, 1));
        assert_eq!(sat.edges[0].to, 2);
    }

    #[test]
    fn external_without_a_plus_source_is_infeasible() {
        let g = z4();
        let raw = vec![
            sw(0, -1, true),
            sw(1, 1, false),
            sw(2, -1, true),
            sw(3, 1, false),
        ];
        assert!(min_saturating_edges_external(&g, &raw, 3).is_none());
    }

    #[test]
    fn crossing_and_separation_geometry() {
        assert!(crossing(6, (0, 2), (1, 4)));
        assert!(!crossing(6, (0, 2), (3, 5)));
        assert!(!crossing(6, (0, 2), (2, 4)));
        assert!(separates(6, (1, 4), 2, 5));
        assert!(!separates(6, (1, 4), 2, 3));
        assert!(!separates(6, (1, 4), 1, 3));
    }

    #[test]
    fn representative_choice_does_not_change_cost() {
        // A face with a run between two +1 switches.
        let g = Digraph::new(
            6,
            vec![(0, 1), (1, 2), (2, 3), (4, 3), (4, 5), (0, 5)],
        )
        .unwrap();
        // Walk 0,1,2,3,4,5: switches of g are 0 (source), 3 (sink),
        // 4 (source); 1, 2 are non-switch, 5 is a sink of g but forms a
        // non-switch angle here? No: both its boundary edges point into 5.
        let raw = vec![
            sw(0, -1, true),
            ns(1),
            ns(2),
            sw(3, 1, false),
            sw(4, -1, true),
            sw(5, -1, false),
        ];
        let first = simplify_boundary(&raw);
        let last = simplify_boundary_last_rep(&raw);
        assert_eq!(first.slots.len(), last.slots.len());
        let sat = min_saturating_edges(&g, &raw, 3).unwrap();
        assert_eq!(sat.cost(), 1);
    }
}
