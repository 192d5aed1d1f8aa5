//! Planarity testing with an explicit combinatorial embedding.
//!
//! The embedder inserts one path at a time into a face of the partial
//! embedding, always choosing a piece that is forced when one exists. That
//! classic strategy needs no backtracking on biconnected graphs, produces the
//! face structure directly, and is comfortably fast at the input sizes this
//! crate targets. General connected graphs are handled by embedding each
//! block separately and splicing the rotations at cut vertices.

use crate::digraph::{classify_switches, is_acyclic, Digraph, EdgeId, Vertex};
use std::collections::BTreeSet;

/// A dart is a directed occurrence of an undirected edge: `2*e` runs along
/// the stored orientation of edge `e`, `2*e + 1` against it.
pub type Dart = usize;

pub fn twin(d: Dart) -> Dart {
    d ^ 1
}

/// Combinatorial embedding of the underlying undirected simple graph.
#[derive(Debug, Clone)]
pub struct PlanarEmbedding {
    n: usize,
    /// Undirected edges in their stored orientation; parallel directed edges
    /// of the source digraph are collapsed onto one representative.
    edges: Vec<(Vertex, Vertex)>,
    /// For each embedded edge, the id of the representative digraph edge.
    rep: Vec<EdgeId>,
    /// Cyclic dart order around each vertex (darts whose tail is the vertex).
    rotation: Vec<Vec<Dart>>,
    /// Faces as cyclic dart sequences; `faces[external]` is the outer face.
    faces: Vec<Vec<Dart>>,
    external: usize,
}

impl PlanarEmbedding {
    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn embedded_edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn representative(&self, e: usize) -> EdgeId {
        self.rep[e]
    }

    pub fn rotation(&self) -> &[Vec<Dart>] {
        &self.rotation
    }

    pub fn faces(&self) -> &[Vec<Dart>] {
        &self.faces
    }

    pub fn external_face(&self) -> usize {
        self.external
    }

    pub fn dart_tail(&self, d: Dart) -> Vertex {
        let (u, v) = self.edges[d / 2];
        if d % 2 == 0 {
            u
        } else {
            v
        }
    }

    pub fn dart_head(&self, d: Dart) -> Vertex {
        self.dart_tail(twin(d))
    }

    /// Boundary of a face as `(vertex, entering edge, leaving edge)` triples;
    /// the vertex sits between the two edges in the walk.
    pub fn face_walk(&self, face: usize) -> Vec<(Vertex, usize, usize)> {
        let cycle = &self.faces[face];
        let mut out = Vec::with_capacity(cycle.len());
        for (i, &d) in cycle.iter().enumerate() {
            let next = cycle[(i + 1) % cycle.len()];
            out.push((self.dart_head(d), d / 2, next / 2));
        }
        out
    }

    /// Faces incident to a vertex, each listed once per angle.
    pub fn faces_at(&self, v: Vertex) -> Vec<usize> {
        let mut out = Vec::new();
        for (f, cycle) in self.faces.iter().enumerate() {
            for &d in cycle {
                if self.dart_head(d) == v {
                    out.push(f);
                }
            }
        }
        out
    }
}

/// Collapse a digraph onto its underlying simple undirected graph, keeping
/// one representative digraph edge per undirected pair.
pub fn underlying_simple(g: &Digraph) -> (Vec<(Vertex, Vertex)>, Vec<EdgeId>) {
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    let mut rep = Vec::new();
    for (id, &(u, v)) in g.edges().iter().enumerate() {
        let key = (u.min(v), u.max(v));
        if seen.insert(key) {
            edges.push((u, v));
            rep.push(id);
        }
    }
    (edges, rep)
}

/// Trace the orbits of the face-successor permutation of a rotation system.
/// Returns faces as dart cycles.
pub(crate) fn trace_faces(edges: &[(Vertex, Vertex)], rotation: &[Vec<Dart>]) -> Vec<Vec<Dart>> {
    let tail = |d: Dart| -> Vertex {
        let (u, v) = edges[d / 2];
        if d % 2 == 0 {
            u
        } else {
            v
        }
    };
    // Position of each dart in the rotation at its tail.
    let mut pos = vec![usize::MAX; 2 * edges.len()];
    for rot in rotation {
        for (i, &d) in rot.iter().enumerate() {
            pos[d] = i;
        }
    }
    let mut seen = vec![false; 2 * edges.len()];
    let mut faces = Vec::new();
    for start in 0..2 * edges.len() {
        if seen[start] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut d = start;
        loop {
            seen[d] = true;
            cycle.push(d);
            // Next dart of the face: successor of the twin in the rotation
            // around the head vertex.
            let t = twin(d);
            let rot = &rotation[tail(t) as usize];
            d = rot[(pos[t] + 1) % rot.len()];
            if d == start {
                break;
            }
        }
        faces.push(cycle);
    }
    faces
}

/// Build an embedding from an explicit rotation system, validating planarity
/// through the face count. Used by the oracle paths that enumerate rotation
/// systems exhaustively, and by the fixed-embedding solver.
pub fn embedding_from_rotation(
    g: &Digraph,
    rotation: Vec<Vec<Dart>>,
    external: Option<usize>,
) -> Option<PlanarEmbedding> {
    let (edges, rep) = underlying_simple(g);
    if !connected(g.vertex_count(), &edges) {
        return None;
    }
    let faces = trace_faces(&edges, &rotation);
    // Euler: a rotation system is planar iff v - e + f = 2 (connected graph).
    if g.vertex_count() + faces.len() != edges.len() + 2 {
        return None;
    }
    let external = external.unwrap_or(0);
    if external >= faces.len() {
        return None;
    }
    Some(PlanarEmbedding { n: g.vertex_count(), edges, rep, rotation, faces, external })
}

fn connected(n: usize, edges: &[(Vertex, Vertex)]) -> bool {
    if n == 0 {
        return false;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in edges {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    let mut seen = vec![false; n];
    let mut stack = vec![0u32];
    seen[0] = true;
    let mut count = 1;
    while let Some(x) = stack.pop() {
        for &y in &adj[x as usize] {
            if !seen[y as usize] {
                seen[y as usize] = true;
                count += 1;
                stack.push(y);
            }
        }
    }
    count == n
}

/// Planarity test returning an embedding, or `None` for non-planar (or
/// disconnected) input. The choice of external face is arbitrary.
pub fn test_planarity(g: &Digraph) -> Option<PlanarEmbedding> {
    let n = g.vertex_count();
    let (edges, rep) = underlying_simple(g);
    if n == 0 || !connected(n, &edges) {
        return None;
    }
    if n == 1 {
        return Some(PlanarEmbedding {
            n,
            edges,
            rep,
            rotation: vec![Vec::new()],
            faces: vec![Vec::new()],
            external: 0,
        });
    }

    // Embed each block on its own, then splice rotations at cut vertices:
    // concatenating the per-block cyclic orders nests the blocks into one
    // planar drawing.
    let mut rotation: Vec<Vec<Dart>> = vec![Vec::new(); n];
    for block in blocks(n, &edges) {
        let block_rot = embed_block(n, &edges, &block)?;
        for (v, rot) in block_rot {
            rotation[v as usize].extend(rot);
        }
    }
    let faces = trace_faces(&edges, &rotation);
    debug_assert_eq!(n + faces.len(), edges.len() + 2, "embedding violates Euler's formula");
    Some(PlanarEmbedding { n, edges, rep, rotation, faces, external: 0 })
}

/// Biconnected components as lists of undirected edge ids.
pub(crate) fn blocks(n: usize, edges: &[(Vertex, Vertex)]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); n];
    for (id, &(u, v)) in edges.iter().enumerate() {
        adj[u as usize].push((v, id));
        adj[v as usize].push((u, id));
    }
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut edge_stack: Vec<usize> = Vec::new();
    let mut out = Vec::new();
    // Iterative DFS over (vertex, parent edge, next adjacency index).
    for root in 0..n {
        if disc[root] != usize::MAX {
            continue;
        }
        let mut stack: Vec<(usize, usize, usize)> = vec![(root, usize::MAX, 0)];
        disc[root] = timer;
        low[root] = timer;
        timer += 1;
        while let Some(&mut (v, pe, ref mut idx)) = stack.last_mut() {
            if *idx < adj[v].len() {
                let (w, id) = adj[v][*idx];
                *idx += 1;
                let w = w as usize;
                if id == pe {
                    continue;
                }
                if disc[w] == usize::MAX {
                    edge_stack.push(id);
                    disc[w] = timer;
                    low[w] = timer;
                    timer += 1;
                    stack.push((w, id, 0));
                } else if disc[w] < disc[v] {
                    edge_stack.push(id);
                    low[v] = low[v].min(disc[w]);
                }
            } else {
                stack.pop();
                if let Some(&mut (p, _, _)) = stack.last_mut() {
                    low[p] = low[p].min(low[v]);
                    if low[v] >= disc[p] {
                        // v's subtree hangs off articulation point p: pop a block.
                        let mut block = Vec::new();
                        while let Some(&id) = edge_stack.last() {
                            let (a, b) = edges[id];
                            let (a, b) = (a as usize, b as usize);
                            // Edges discovered within v's subtree.
                            if disc[a] >= disc[v] || disc[b] >= disc[v] {
                                block.push(id);
                                edge_stack.pop();
                            } else {
                                break;
                            }
                        }
                        if !block.is_empty() {
                            block.sort_unstable();
                            out.push(block);
                        }
                    }
                }
            }
        }
        if !edge_stack.is_empty() {
            let mut block = std::mem::take(&mut edge_stack);
            block.sort_unstable();
            out.push(block);
        }
    }
    out
}

/// Embed one biconnected block; returns the rotation lists of its vertices.
fn embed_block(
    n: usize,
    edges: &[(Vertex, Vertex)],
    block: &[usize],
) -> Option<Vec<(Vertex, Vec<Dart>)>> {
    if block.len() == 1 {
        let e = block[0];
        let (u, v) = edges[e];
        return Some(vec![(u, vec![2 * e]), (v, vec![2 * e + 1])]);
    }
    let faces = dmp_faces(n, edges, block)?;
    // Recover the rotation from the faces: the successor of a dart in the
    // rotation around its tail is the face-successor of its twin.
    let mut succ = vec![usize::MAX; 2 * edges.len()];
    for cycle in &faces {
        for (i, &d) in cycle.iter().enumerate() {
            let next = cycle[(i + 1) % cycle.len()];
            succ[twin(d)] = next;
        }
    }
    let tail = |d: Dart| -> Vertex {
        let (u, v) = edges[d / 2];
        if d % 2 == 0 {
            u
        } else {
            v
        }
    };
    let mut verts: BTreeSet<Vertex> = BTreeSet::new();
    for &e in block {
        verts.insert(edges[e].0);
        verts.insert(edges[e].1);
    }
    let mut by_vertex: Vec<(Vertex, Vec<Dart>)> = Vec::new();
    let mut placed = vec![false; 2 * edges.len()];
    for &v in &verts {
        // Any dart leaving v starts the cyclic order.
        let start = block
            .iter()
            .flat_map(|&e| [2 * e, 2 * e + 1])
            .find(|&d| tail(d) == v && !placed[d])
            .expect("vertex of block has an incident dart");
        let mut rot = Vec::new();
        let mut d = start;
        loop {
            rot.push(d);
            placed[d] = true;
            d = succ[d];
            if d == start {
                break;
            }
        }
        by_vertex.push((v, rot));
    }
    Some(by_vertex)
}

/// Path-addition planarity for one biconnected block, maintaining the face
/// cycles of the partial embedding. Returns the final faces.
fn dmp_faces(n: usize, edges: &[(Vertex, Vertex)], block: &[usize]) -> Option<Vec<Vec<Dart>>> {
    let m = block.len();
    let verts: BTreeSet<Vertex> = block
        .iter()
        .flat_map(|&e| [edges[e].0, edges[e].1])
        .collect();
    let bn = verts.len();
    if bn >= 3 && m > 3 * bn - 6 {
        return None;
    }

    let mut adj: Vec<Vec<(Vertex, usize)>> = vec![Vec::new(); n];
    for &e in block {
        let (u, v) = edges[e];
        adj[u as usize].push((v, e));
        adj[v as usize].push((u, e));
    }
    for a in &mut adj {
        a.sort_unstable();
    }

    // Directed dart from p to q along edge e.
    let dart_for = |e: usize, p: Vertex| -> Dart {
        if edges[e].0 == p {
            2 * e
        } else {
            2 * e + 1
        }
    };

    // Start from any cycle: walk forward until a vertex repeats.
    let start = *verts.iter().next().unwrap();
    let mut path = vec![start];
    let mut path_edges = Vec::new();
    let mut on_path = vec![usize::MAX; n];
    on_path[start as usize] = 0;
    let cycle: (Vec<Vertex>, Vec<usize>) = loop {
        let v = *path.last().unwrap();
        let &(w, e) = adj[v as usize]
            .iter()
            .find(|&&(_, e)| Some(&e) != path_edges.last())
            .expect("biconnected block has min degree 2");
        if on_path[w as usize] != usize::MAX {
            let at = on_path[w as usize];
            break (path[at..].to_vec(), {
                let mut es = path_edges[at..].to_vec();
                es.push(e);
                es
            });
        }
        on_path[w as usize] = path.len();
        path.push(w);
        path_edges.push(e);
    };

    let mut in_h = vec![false; n];
    let mut embedded = vec![false; edges.len()];
    for &v in &cycle.0 {
        in_h[v as usize] = true;
    }
    for &e in &cycle.1 {
        embedded[e] = true;
    }
    let forward: Vec<Dart> = cycle
        .1
        .iter()
        .zip(cycle.0.iter())
        .map(|(&e, &p)| dart_for(e, p))
        .collect();
    let backward: Vec<Dart> = forward.iter().rev().map(|&d| twin(d)).collect();
    let mut faces: Vec<Vec<Dart>> = vec![forward, backward];
    let mut remaining = m - cycle.1.len();

    while remaining > 0 {
        // Face vertex sets, recomputed each round for simplicity.
        let face_verts: Vec<BTreeSet<Vertex>> = faces
            .iter()
            .map(|c| {
                c.iter()
                    .map(|&d| {
                        let (u, v) = edges[d / 2];
                        if d % 2 == 0 {
                            u
                        } else {
                            v
                        }
                    })
                    .collect()
            })
            .collect();

        // Bridges: chords between embedded vertices, and components of the
        // unembedded rest together with their attachment vertices.
        // Each bridge gets (attachments, a path to embed).
        let mut bridges: Vec<(BTreeSet<Vertex>, Vec<Vertex>, Vec<usize>)> = Vec::new();
        for &e in block {
            if embedded[e] {
                continue;
            }
            let (u, v) = edges[e];
            if in_h[u as usize] && in_h[v as usize] {
                bridges.push((BTreeSet::from([u, v]), vec![u, v], vec![e]));
            }
        }
        let mut comp_seen = vec![false; n];
        for &seed in &verts {
            if in_h[seed as usize] || comp_seen[seed as usize] {
                continue;
            }
            // BFS over unembedded vertices.
            let mut comp = vec![seed];
            comp_seen[seed as usize] = true;
            let mut attachments = BTreeSet::new();
            let mut qi = 0;
            while qi < comp.len() {
                let x = comp[qi];
                qi += 1;
                for &(y, _) in &adj[x as usize] {
                    if in_h[y as usize] {
                        attachments.insert(y);
                    } else if !comp_seen[y as usize] {
                        comp_seen[y as usize] = true;
                        comp.push(y);
                    }
                }
            }
            // Path between two attachments through the component.
            let mut ats: Vec<Vertex> = attachments.iter().copied().collect();
            ats.sort_unstable();
            let (a1, a2) = (ats[0], ats[1]);
            let path = attachment_path(&adj, &in_h, &comp_seen, a1, a2);
            let path_edges = path
                .windows(2)
                .map(|w| {
                    adj[w[0] as usize]
                        .iter()
                        .find(|&&(y, _)| y == w[1])
                        .map(|&(_, e)| e)
                        .unwrap()
                })
                .collect();
            bridges.push((attachments, path, path_edges));
        }

        // Admissible faces per bridge; fail if a bridge fits nowhere, prefer
        // a bridge that is forced into a single face.
        let mut chosen: Option<(usize, usize)> = None; // (bridge, face)
        for (bi, (ats, _, _)) in bridges.iter().enumerate() {
            let fits: Vec<usize> = face_verts
                .iter()
                .enumerate()
                .filter(|(_, fv)| ats.is_subset(fv))
                .map(|(fi, _)| fi)
                .collect();
            match fits.len() {
                0 => return None,
                1 => {
                    chosen = Some((bi, fits[0]));
                    break;
                }
                _ => {
                    if chosen.is_none() {
                        chosen = Some((bi, fits[0]));
                    }
                }
            }
        }
        let (bi, fi) = chosen.expect("remaining edges imply at least one bridge");
        let (_, path, path_edges) = &bridges[bi];

        // Split face fi along the path.
        let face = faces.swap_remove(fi);
        let (a1, a2) = (path[0], *path.last().unwrap());
        let head = |d: Dart| -> Vertex {
            let (u, v) = edges[d / 2];
            if d % 2 == 0 {
                v
            } else {
                u
            }
        };
        let i = face.iter().position(|&d| head(d) == a1).unwrap();
        // Walk on from i so the two split points differ even when a1 == a2
        // never happens (attachments are distinct in biconnected input).
        let j = face.iter().position(|&d| head(d) == a2).unwrap();
        let path_darts: Vec<Dart> = path_edges
            .iter()
            .zip(path.iter())
            .map(|(&e, &p)| dart_for(e, p))
            .collect();
        let rev_darts: Vec<Dart> = path_darts.iter().rev().map(|&d| twin(d)).collect();
        let mut f1 = Vec::new();
        let mut f2 = Vec::new();
        if i <= j {
            f1.extend_from_slice(&face[..=i]);
            f1.extend_from_slice(&path_darts);
            f1.extend_from_slice(&face[j + 1..]);
            f2.extend_from_slice(&face[i + 1..=j]);
            f2.extend_from_slice(&rev_darts);
        } else {
            f1.extend_from_slice(&face[j + 1..=i]);
            f1.extend_from_slice(&path_darts);
            f2.extend_from_slice(&face[..=j]);
            f2.extend_from_slice(&rev_darts);
            f2.extend_from_slice(&face[i + 1..]);
        }
        faces.push(f1);
        faces.push(f2);
        for &v in path {
            in_h[v as usize] = true;
        }
        for &e in path_edges {
            embedded[e] = true;
            remaining -= 1;
        }
    }
    Some(faces)
}

/// Shortest path from `a1` to `a2` whose interior stays inside the component
/// marked in `comp_seen`.
fn attachment_path(
    adj: &[Vec<(Vertex, usize)>],
    in_h: &[bool],
    comp_seen: &[bool],
    a1: Vertex,
    a2: Vertex,
) -> Vec<Vertex> {
    let n = adj.len();
    let mut prev = vec![u32::MAX; n];
    let mut queue = std::collections::VecDeque::new();
    // Seed with component neighbours of a1.
    for &(y, _) in &adj[a1 as usize] {
        if !in_h[y as usize] && comp_seen[y as usize] && prev[y as usize] == u32::MAX {
            prev[y as usize] = a1;
            queue.push_back(y);
        }
    }
    while let Some(x) = queue.pop_front() {
        for &(y, _) in &adj[x as usize] {
            if y == a2 {
                let mut path = vec![a2, x];
                let mut cur = x;
                while cur != a1 {
                    cur = prev[cur as usize];
                    path.push(cur);
                }
                path.reverse();
                return path;
            }
            if !in_h[y as usize] && comp_seen[y as usize] && prev[y as usize] == u32::MAX {
                prev[y as usize] = x;
                queue.push_back(y);
            }
        }
    }
    unreachable!("attachments of a bridge are joined through its component");
}

/// Boolean planarity of the underlying undirected graph (no embedding).
pub fn is_planar(g: &Digraph) -> bool {
    let n = g.vertex_count();
    let (edges, _) = underlying_simple(g);
    if n <= 2 {
        return true;
    }
    // Planar iff every block is planar; components checked independently.
    for block in blocks(n, &edges) {
        if block.len() >= 2 && dmp_faces(n, &edges, &block).is_none() {
            return false;
        }
    }
    true
}

/// st-planarity: acyclic, a single source `s` and a single sink `t`, and some
/// planar embedding putting `s` and `t` on a common face. Co-faciality is
/// equivalent to planarity of the graph plus an undirected `{s, t}` edge.
/// Returns the pair on success.
pub fn is_st_planar(g: &Digraph) -> Option<(Vertex, Vertex)> {
    if !is_acyclic(g) {
        return None;
    }
    let switches = classify_switches(g);
    if switches.n_sources != 1 || switches.n_sinks != 1 {
        return None;
    }
    let s = switches.sources().next().unwrap();
    let t = switches.sinks().next().unwrap();
    let ok = if g.adjacent(s, t) {
        is_planar(g)
    } else {
        let aug = g.with_edges(&[(s, t)]).expect("absent edge can be added");
        is_planar(&aug)
    };
    ok.then_some((s, t))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Digraph {
        Digraph::new(4, vec![(0, 1), (0, 2), (1, 3), (2, 3)]).unwrap()
    }

    fn k4_st() -> Digraph {
        // s=0, a=1, b=2, t=3
        Digraph::new(4, vec![(0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (0, 3)]).unwrap()
    }

    fn k5() -> Digraph {
        let mut edges = Vec::new();
        for u in 0..5u32 {
            for v in (u + 1)..5 {
                edges.push((u, v));
            }
        }
        Digraph::new(5, edges).unwrap()
    }

    fn k33() -> Digraph {
        let mut edges = Vec::new();
        for u in 0..3u32 {
            for v in 3..6u32 {
                edges.push((u, v));
            }
        }
        Digraph::new(6, edges).unwrap()
    }

    #[test]
    fn single_edge_has_one_face_of_length_two() {
        let g = Digraph::new(2, vec![(0, 1)]).unwrap();
        let emb = test_planarity(&g).unwrap();
        assert_eq!(emb.faces().len(), 1);
        assert_eq!(emb.faces()[0].len(), 2);
    }

    #[test]
    fn diamond_has_two_faces() {
        let emb = test_planarity(&diamond()).unwrap();
        assert_eq!(emb.faces().len(), 2);
        for f in emb.faces() {
            assert_eq!(f.len(), 4);
        }
    }

    #[test]
    fn euler_formula_holds_on_planar_inputs() {
        for g in [diamond(), k4_st()] {
            let (edges, _) = underlying_simple(&g);
            let emb = test_planarity(&g).unwrap();
            assert_eq!(g.vertex_count() + emb.faces().len(), edges.len() + 2);
            // Every dart appears exactly once over all faces.
            let mut count = vec![0usize; 2 * edges.len()];
            for f in emb.faces() {
                for &d in f {
                    count[d] += 1;
                }
            }
            assert!(count.iter().all(|&c| c == 1));
        }
    }

    #[test]
    fn k4_is_planar_k5_and_k33_are_not() {
        assert!(test_planarity(&k4_st()).is_some());
        assert!(test_planarity(&k5()).is_none());
        assert!(test_planarity(&k33()).is_none());
        assert!(!is_planar(&k5()));
        assert!(!is_planar(&k33()));
    }

    #[test]
    fn k5_minus_edge_is_planar() {
        let mut edges = Vec::new();
        for u in 0..5u32 {
            for v in (u + 1)..5 {
                if (u, v) != (0, 1) {
                    edges.push((u, v));
                }
            }
        }
        let g = Digraph::new(5, edges).unwrap();
        assert!(test_planarity(&g).is_some());
    }

    #[test]
    fn cut_vertex_graphs_embed_too() {
        // Two triangles sharing vertex 2.
        let bowtie = Digraph::new(
            5,
            vec![(0, 1), (0, 2), (1, 2), (2, 3), (2, 4), (3, 4)],
        )
        .unwrap();
        let emb = test_planarity(&bowtie).unwrap();
        assert_eq!(bowtie.vertex_count() + emb.faces().len(), 6 + 2);
    }

    #[test]
    fn st_planarity_examples() {
        assert_eq!(is_st_planar(&k4_st()), Some((0, 3)));
        assert_eq!(is_st_planar(&diamond()), Some((0, 3)));
        // Alternating square: two sources.
        let alt = Digraph::new(4, vec![(0, 1), (2, 1), (2, 3), (0, 3)]).unwrap();
        assert_eq!(is_st_planar(&alt), None);
        // Directed triangle: cyclic.
        let cyc = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]).unwrap();
        assert_eq!(is_st_planar(&cyc), None);
        // A path is st-planar.
        let path = Digraph::new(3, vec![(0, 1), (1, 2)]).unwrap();
        assert_eq!(is_st_planar(&path), Some((0, 2)));
    }

    #[test]
    fn random_outerplanar_like_graphs_round_trip() {
        // Cycle plus a fan of chords from vertex 0: always planar.
        for n in 4..9usize {
            let mut edges: Vec<(u32, u32)> = (0..n as u32)
                .map(|i| (i, (i + 1) % n as u32))
                .map(|(u, v)| if u < v { (u, v) } else { (v, u) })
                .collect();
            for v in 2..(n as u32 - 1) {
                edges.push((0, v));
            }
            let g = Digraph::new(n, edges).unwrap();
            let emb = test_planarity(&g).unwrap();
            let (und, _) = underlying_simple(&g);
            assert_eq!(n + emb.faces().len(), und.len() + 2);
        }
    }
}
