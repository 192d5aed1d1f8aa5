//! Brute-force reference implementations used to validate the solver.
//!
//! Everything here trades time for obviousness: the completion search tries
//! edge sets in increasing size, and the embedding check enumerates rotation
//! systems outright. Hard size guards keep misuse loud.

use crate::digraph::{classify_switches, is_acyclic, Digraph, Vertex};
use crate::planarity::{embedding_from_rotation, is_st_planar, underlying_simple, Dart};
use itertools::Itertools;

/// Largest vertex count accepted by [`brute_force_min_completion`].
pub const BRUTE_FORCE_MAX_N: usize = 10;
/// Largest vertex count accepted by the rotation-system enumeration.
pub const ENUMERATION_MAX_N: usize = 6;

/// All rotation systems of the underlying simple graph: the first dart at
/// each vertex is pinned, the rest permuted, giving `prod (deg - 1)!` systems.
pub fn enumerate_rotation_systems(g: &Digraph) -> Vec<Vec<Vec<Dart>>> {
    assert!(
        g.vertex_count() <= ENUMERATION_MAX_N,
        "rotation enumeration is limited to {ENUMERATION_MAX_N} vertices"
    );
    let (edges, _) = underlying_simple(g);
    let n = g.vertex_count();
    let mut darts_at: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for (e, &(u, v)) in edges.iter().enumerate() {
        darts_at[u as usize].push(2 * e);
        darts_at[v as usize].push(2 * e + 1);
    }
    // Per-vertex cyclic orders; fixing the first dart removes the rotational
    // symmetry of each cyclic order.
    let per_vertex: Vec<Vec<Vec<Dart>>> = darts_at
        .into_iter()
        .map(|darts| {
            if darts.len() <= 2 {
                return vec![darts];
            }
            let (first, rest) = darts.split_first().unwrap();
            rest.iter()
                .copied()
                .permutations(rest.len())
                .map(|perm| {
                    let mut rot = vec![*first];
                    rot.extend(perm);
                    rot
                })
                .collect()
        })
        .collect();
    per_vertex
        .into_iter()
        .multi_cartesian_product()
        .collect()
}

/// st-planarity decided from first principles: enumerate every rotation
/// system, keep the planar ones, and look for a face containing both the
/// source and the sink. Independent of the path-addition embedder.
pub fn exhaustive_st_check(g: &Digraph) -> bool {
    assert!(
        g.vertex_count() <= ENUMERATION_MAX_N,
        "exhaustive check is limited to {ENUMERATION_MAX_N} vertices"
    );
    if !is_acyclic(g) {
        return false;
    }
    let switches = classify_switches(g);
    if switches.n_sources != 1 || switches.n_sinks != 1 {
        return false;
    }
    let s = switches.sources().next().unwrap();
    let t = switches.sinks().next().unwrap();
    for rotation in enumerate_rotation_systems(g) {
        let Some(emb) = embedding_from_rotation(g, rotation, None) else {
            continue;
        };
        for face in 0..emb.faces().len() {
            let walk = emb.face_walk(face);
            let has_s = walk.iter().any(|&(v, _, _)| v == s);
            let has_t = walk.iter().any(|&(v, _, _)| v == t);
            if has_s && has_t {
                return true;
            }
        }
    }
    false
}

/// Oriented edges worth trying in a completion. Any inclusion-minimal edge
/// set whose addition makes the graph st-planar consists of edges into an
/// original source or out of an original sink (dropping any other edge keeps
/// every property intact), so the search is restricted to those.
pub fn completion_candidates(g: &Digraph) -> Vec<(Vertex, Vertex)> {
    let switches = classify_switches(g);
    let n = g.vertex_count() as u32;
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a == b || g.adjacent(a, b) {
                continue;
            }
            if switches.sources().any(|s| s == b) || switches.sinks().any(|t| t == a) {
                out.push((a, b));
            }
        }
    }
    out
}

/// Smallest edge set of size at most `k_max` whose addition yields an
/// st-planar graph, or `None` if no such set exists within the budget.
/// Sets are tried in increasing size and lexicographic order, so the result
/// is deterministic.
pub fn brute_force_min_completion(
    g: &Digraph,
    k_max: usize,
) -> Option<(usize, Vec<(Vertex, Vertex)>)> {
    assert!(
        g.vertex_count() <= BRUTE_FORCE_MAX_N,
        "brute-force completion is limited to {BRUTE_FORCE_MAX_N} vertices"
    );
    if is_st_planar(g).is_some() {
        return Some((0, Vec::new()));
    }
    // Added edges never remove a directed cycle or restore planarity.
    if !is_acyclic(g) || !crate::planarity::is_planar(g) {
        return None;
    }
    let switches = classify_switches(g);
    let lower = switches
        .n_sources
        .saturating_sub(1)
        .max(switches.n_sinks.saturating_sub(1))
        .max(1);
    let candidates = completion_candidates(g);
    for size in lower..=k_max {
        for combo in candidates.iter().copied().combinations(size) {
            // A pair of anti-parallel additions is a directed 2-cycle.
            if combo
                .iter()
                .tuple_combinations()
                .any(|(&(a, b), &(c, d))| a == d && b == c)
            {
                continue;
            }
            let Ok(aug) = g.with_edges(&combo) else {
                continue;
            };
            if is_st_planar(&aug).is_some() {
                return Some((size, combo));
            }
        }
    }
    None
}
