//! Instance generators for tests and the command line. All generators are
//! deterministic in their parameters.

use crate::digraph::{Digraph, Vertex};
use crate::planarity::is_planar;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_chacha::rand_core::SeedableRng;

/// Cycle on `2m` vertices with alternating edge orientation: every even
/// vertex is a source, every odd one a sink.
pub fn alt_cycle(m: usize) -> Digraph {
    assert!(m >= 2, "need at least four vertices");
    let n = 2 * m;
    let mut edges = Vec::with_capacity(n);
    for i in 0..m {
        let s = (2 * i) as Vertex;
        edges.push((s, (2 * i + 1) as Vertex));
        edges.push((s, ((2 * i + n - 1) % n) as Vertex));
    }
    edges.sort_unstable();
    Digraph::new(n, edges).unwrap()
}

/// Random biconnected planar acyclic digraph: a spanning cycle plus random
/// planarity-preserving chords, all oriented along a random vertex order.
pub fn random_planar_dag(n: usize, seed: u64) -> Digraph {
    let (undirected, rank) = random_planar_skeleton(n, seed);
    let edges = undirected
        .iter()
        .map(|&(a, b)| {
            if rank[a as usize] < rank[b as usize] {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    Digraph::new(n, edges).unwrap()
}

/// Same skeleton, but the rim is oriented as a directed cycle and chords get
/// random directions, so the result always contains a directed cycle.
pub fn random_planar_cyclic(n: usize, seed: u64) -> Digraph {
    let (undirected, _) = random_planar_skeleton(n, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let nv = n as Vertex;
    let edges = undirected
        .iter()
        .map(|&(a, b)| {
            let rim = (b + nv - a) % nv == 1 || (a + nv - b) % nv == 1;
            if rim {
                // Orient along the rim: i -> i+1 (mod n).
                if (b + nv - a) % nv == 1 {
                    (a, b)
                } else {
                    (b, a)
                }
            } else if rng.random_bool(0.5) {
                (a, b)
            } else {
                (b, a)
            }
        })
        .collect();
    Digraph::new(n, edges).unwrap()
}

/// Spanning cycle 0-1-..-(n-1) plus chords kept only when the graph stays
/// planar, and a random topological rank per vertex.
fn random_planar_skeleton(n: usize, seed: u64) -> (Vec<(Vertex, Vertex)>, Vec<usize>) {
    assert!(n >= 3, "need at least three vertices");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges: Vec<(Vertex, Vertex)> = (0..n)
        .map(|i| (i as Vertex, ((i + 1) % n) as Vertex))
        .collect();
    for _ in 0..2 * n {
        let a = rng.random_range(0..n) as Vertex;
        let b = rng.random_range(0..n) as Vertex;
        if a == b || edges.iter().any(|&(x, y)| (x, y) == (a, b) || (x, y) == (b, a)) {
            continue;
        }
        let mut trial = edges.clone();
        trial.push((a, b));
        let g = Digraph::new(n, trial.clone()).unwrap();
        if is_planar(&g) {
            edges = trial;
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(&mut rng);
    let mut rank = vec![0usize; n];
    for (pos, &v) in order.iter().enumerate() {
        rank[v] = pos;
    }
    (edges, rank)
}
