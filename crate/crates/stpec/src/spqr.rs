//! SPQR-trees: the decomposition of a biconnected graph into series,
//! parallel and triconnected pieces, rooted at a reference edge.
//!
//! Construction uses the classical splitting-pair recursion rather than the
//! linear-time algorithm; instances here are small and the recursion is easy
//! to audit. Series chains are binarized so every S-node has exactly two
//! children, nested left to right starting from the first pole.

use crate::digraph::{is_biconnected, Digraph, EdgeId, Vertex};
use crate::planarity::{blocks, test_planarity, trace_faces, Dart};
use itertools::Itertools;
use std::collections::{BTreeMap, BTreeSet};
use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SpqrError {
    #[error("graph is not biconnected")]
    NotBiconnected,
    #[error("reference edge {0} out of range")]
    BadReferenceEdge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeKind {
    S,
    P,
    R,
    Q,
}

impl std::fmt::Display for NodeKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let c = match self {
            NodeKind::S => 'S',
            NodeKind::P => 'P',
            NodeKind::R => 'R',
            NodeKind::Q => 'Q',
        };
        write!(f, "{c}")
    }
}

/// One edge of a skeleton multigraph. The reference edge stands for the rest
/// of the graph seen from this node; every other edge stands for one child
/// (a Q-node child when the child holds a real instance edge).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SkelEdge {
    pub a: Vertex,
    pub b: Vertex,
    pub kind: SkelEdgeKind,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SkelEdgeKind {
    Reference,
    Child(NodeId),
}

#[derive(Debug, Clone)]
pub struct SpqrNode {
    pub kind: NodeKind,
    /// Poles (u, v); for Q-nodes these are the stored edge's tail and head.
    pub poles: (Vertex, Vertex),
    /// Skeleton edges, reference edge first. Child edges appear in the same
    /// order as `children`.
    pub skeleton: Vec<SkelEdge>,
    /// The instance edge held by a Q-node.
    pub q_edge: Option<EdgeId>,
    pub parent: Option<NodeId>,
    pub children: Vec<NodeId>,
}

#[derive(Debug, Clone)]
pub struct SpqrTree {
    nodes: Vec<SpqrNode>,
    root: NodeId,
    ref_edge: EdgeId,
}

impl SpqrTree {
    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn reference_edge(&self) -> EdgeId {
        self.ref_edge
    }

    pub fn node(&self, id: NodeId) -> &SpqrNode {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (NodeId, &SpqrNode)> {
        self.nodes.iter().enumerate()
    }

    /// Children-before-parents order starting from the root.
    pub fn postorder(&self) -> Vec<NodeId> {
        let mut out = Vec::with_capacity(self.nodes.len());
        let mut stack = vec![(self.root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if expanded {
                out.push(id);
            } else {
                stack.push((id, true));
                for &c in self.nodes[id].children.iter().rev() {
                    stack.push((c, false));
                }
            }
        }
        out
    }

    /// Instance edges held by Q-nodes in the subtree of `id`.
    pub fn subtree_edges(&self, id: NodeId) -> Vec<EdgeId> {
        let mut out = Vec::new();
        let mut stack = vec![id];
        while let Some(x) = stack.pop() {
            if let Some(e) = self.nodes[x].q_edge {
                out.push(e);
            }
            stack.extend(self.nodes[x].children.iter().copied());
        }
        out.sort_unstable();
        out
    }

    /// Indented debug dump: one line per node with kind, poles and skeleton.
    pub fn dump(&self) -> String {
        let mut out = String::new();
        self.dump_node(self.root, 0, &mut out);
        out
    }

    fn dump_node(&self, id: NodeId, depth: usize, out: &mut String) {
        let node = &self.nodes[id];
        for _ in 0..depth {
            out.push_str("  ");
        }
        let (u, v) = node.poles;
        if node.kind == NodeKind::Q && id != self.root {
            out.push_str(&format!("Q poles=({u},{v}) edge=e{}\n", node.q_edge.unwrap()));
            return;
        }
        let items = node
            .skeleton
            .iter()
            .map(|se| match se.kind {
                SkelEdgeKind::Reference => format!("ref({},{})", se.a, se.b),
                SkelEdgeKind::Child(c) => {
                    if let Some(e) = self.nodes[c].q_edge {
                        format!("e{}({},{})", e, se.a, se.b)
                    } else {
                        format!("virt({},{})", se.a, se.b)
                    }
                }
            })
            .join(" ");
        out.push_str(&format!("{} poles=({u},{v}) skel=[{items}]\n", node.kind));
        for &c in &node.children {
            self.dump_node(c, depth + 1, out);
        }
    }
}

/// The subgraph represented by the subtree of `id`: the instance edges of its
/// Q-nodes, on the original vertex set.
pub fn pertinent_graph(g: &Digraph, t: &SpqrTree, id: NodeId) -> Digraph {
    assert_ne!(id, t.root(), "the root represents the reference edge itself");
    let edges: Vec<(Vertex, Vertex)> = t
        .subtree_edges(id)
        .into_iter()
        .map(|e| g.edge(e))
        .collect();
    Digraph::new(g.vertex_count(), edges).expect("subgraph of a valid digraph")
}

/// One way to draw a skeleton. P-node skeletons vary over the orderings of
/// their non-reference edges, R-node skeletons over a fixed embedding and its
/// mirror; S- and Q-skeletons admit a single drawing.
#[derive(Debug, Clone)]
pub enum SkeletonEmbedding {
    /// Left-to-right order of the non-reference skeleton edges, as indices
    /// into `skeleton` (so values start at 1).
    Ordering(Vec<usize>),
    /// Rotation system of the full skeleton, reference edge included.
    Rotation(SkeletonRotation),
}

/// Embedding of an R-node skeleton. Darts are `2 * i` (along `skeleton[i]`
/// as stored) and `2 * i + 1` (reversed); rotations are indexed by the local
/// vertex ids of `vertices`.
#[derive(Debug, Clone)]
pub struct SkeletonRotation {
    pub vertices: Vec<Vertex>,
    pub rotation: Vec<Vec<Dart>>,
    pub faces: Vec<Vec<Dart>>,
}

/// All embeddings of a node's skeleton, in a deterministic order.
pub fn skeleton_embeddings(t: &SpqrTree, id: NodeId) -> Vec<SkeletonEmbedding> {
    let node = t.node(id);
    let non_ref: Vec<usize> = (1..node.skeleton.len()).collect();
    match node.kind {
        NodeKind::Q | NodeKind::S => vec![SkeletonEmbedding::Ordering(non_ref)],
        NodeKind::P => non_ref
            .iter()
            .copied()
            .permutations(non_ref.len())
            .map(SkeletonEmbedding::Ordering)
            .collect(),
        NodeKind::R => {
            let (vertices, local_edges) = localize(node);
            let g = Digraph::new(vertices.len(), local_edges.clone())
                .expect("skeletons are simple");
            let emb =
                test_planarity(&g).expect("R-node skeleton of a planar graph is planar");
            // The skeleton is simple, so embedded edge i is skeleton edge i
            // and the dart numbering carries over directly.
            let base = SkeletonRotation {
                vertices: vertices.clone(),
                rotation: emb.rotation().to_vec(),
                faces: emb.faces().to_vec(),
            };
            // A 3-connected planar graph has one embedding up to mirroring.
            let flipped: Vec<Vec<Dart>> = base
                .rotation
                .iter()
                .map(|rot| rot.iter().rev().copied().collect())
                .collect();
            let mirror = SkeletonRotation {
                vertices,
                faces: trace_faces(&local_edges, &flipped),
                rotation: flipped,
            };
            vec![
                SkeletonEmbedding::Rotation(base),
                SkeletonEmbedding::Rotation(mirror),
            ]
        }
    }
}

/// Skeleton vertices in sorted order plus the skeleton edges renamed to
/// local indices into that list.
fn localize(node: &SpqrNode) -> (Vec<Vertex>, Vec<(u32, u32)>) {
    let vertices: Vec<Vertex> = node
        .skeleton
        .iter()
        .flat_map(|se| [se.a, se.b])
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let local: BTreeMap<Vertex, u32> = vertices
        .iter()
        .enumerate()
        .map(|(i, &v)| (v, i as u32))
        .collect();
    let edges = node
        .skeleton
        .iter()
        .map(|se| (local[&se.a], local[&se.b]))
        .collect();
    (vertices, edges)
}

pub fn build_spqr(g: &Digraph, ref_edge: EdgeId) -> Result<SpqrTree, SpqrError> {
    if ref_edge >= g.edge_count() {
        return Err(SpqrError::BadReferenceEdge(ref_edge));
    }
    if !is_biconnected(g) {
        return Err(SpqrError::NotBiconnected);
    }
    let (u, v) = g.edge(ref_edge);
    let mut b = Builder {
        g,
        nodes: Vec::new(),
    };
    let rest: Vec<EdgeId> = (0..g.edge_count()).filter(|&e| e != ref_edge).collect();
    let mut skeleton = vec![SkelEdge {
        a: u,
        b: v,
        kind: SkelEdgeKind::Reference,
    }];
    let mut children = Vec::new();
    if !rest.is_empty() {
        let top = b.subtree(&rest, u, v);
        skeleton.push(SkelEdge {
            a: u,
            b: v,
            kind: SkelEdgeKind::Child(top),
        });
        children.push(top);
    }
    let root = b.push(SpqrNode {
        kind: NodeKind::Q,
        poles: (u, v),
        skeleton,
        q_edge: Some(ref_edge),
        parent: None,
        children,
    });
    let mut nodes = b.nodes;
    for id in 0..nodes.len() {
        for ci in 0..nodes[id].children.len() {
            let c = nodes[id].children[ci];
            nodes[c].parent = Some(id);
        }
    }
    Ok(SpqrTree {
        nodes,
        root,
        ref_edge,
    })
}

struct Builder<'a> {
    g: &'a Digraph,
    nodes: Vec<SpqrNode>,
}

impl Builder<'_> {
    fn push(&mut self, node: SpqrNode) -> NodeId {
        self.nodes.push(node);
        self.nodes.len() - 1
    }

    fn q_node(&mut self, e: EdgeId) -> NodeId {
        let (a, b) = self.g.edge(e);
        self.push(SpqrNode {
            kind: NodeKind::Q,
            poles: (a, b),
            skeleton: vec![SkelEdge {
                a,
                b,
                kind: SkelEdgeKind::Reference,
            }],
            q_edge: Some(e),
            parent: None,
            children: Vec::new(),
        })
    }

    /// Decompose the subgraph `edges` with split pair (u, v).
    fn subtree(&mut self, edges: &[EdgeId], u: Vertex, v: Vertex) -> NodeId {
        if edges.len() == 1 {
            return self.q_node(edges[0]);
        }
        let bridges = uv_bridges(self.g, edges, u, v);
        if bridges.len() >= 2 {
            return self.p_node(&bridges, u, v);
        }
        let chain = block_chain(self.g, edges, u, v);
        if chain.len() >= 2 {
            return self.s_node(&chain, u, v);
        }
        self.r_node(edges, u, v)
    }

    fn p_node(&mut self, bridges: &[Vec<EdgeId>], u: Vertex, v: Vertex) -> NodeId {
        let mut skeleton = vec![SkelEdge {
            a: u,
            b: v,
            kind: SkelEdgeKind::Reference,
        }];
        let mut children = Vec::new();
        for bridge in bridges {
            let c = self.subtree(bridge, u, v);
            skeleton.push(SkelEdge {
                a: u,
                b: v,
                kind: SkelEdgeKind::Child(c),
            });
            children.push(c);
        }
        self.push(SpqrNode {
            kind: NodeKind::P,
            poles: (u, v),
            skeleton,
            q_edge: None,
            parent: None,
            children,
        })
    }

    /// Binarized series composition: the first block, then the rest of the
    /// chain as one child (recursively an S-node while blocks remain).
    fn s_node(&mut self, chain: &[(Vertex, Vec<EdgeId>)], u: Vertex, v: Vertex) -> NodeId {
        let (w, first) = &chain[0];
        let left = self.subtree(first, u, *w);
        let rest: Vec<EdgeId> = chain[1..]
            .iter()
            .flat_map(|(_, es)| es.iter().copied())
            .collect();
        let right = self.subtree(&rest, *w, v);
        let skeleton = vec![
            SkelEdge {
                a: u,
                b: v,
                kind: SkelEdgeKind::Reference,
            },
            SkelEdge {
                a: u,
                b: *w,
                kind: SkelEdgeKind::Child(left),
            },
            SkelEdge {
                a: *w,
                b: v,
                kind: SkelEdgeKind::Child(right),
            },
        ];
        self.push(SpqrNode {
            kind: NodeKind::S,
            poles: (u, v),
            skeleton,
            q_edge: None,
            parent: None,
            children: vec![left, right],
        })
    }

    /// Triconnected case: condense away every splitting pair other than the
    /// poles until the remainder is 3-connected, then recurse into the
    /// condensed pieces.
    fn r_node(&mut self, edges: &[EdgeId], u: Vertex, v: Vertex) -> NodeId {
        #[derive(Clone)]
        enum MKind {
            Ref,
            Orig(EdgeId),
            Cond(BTreeSet<EdgeId>),
        }
        let mut m: Vec<(Vertex, Vertex, MKind)> = vec![(u, v, MKind::Ref)];
        for &e in edges {
            let (a, b) = self.g.edge(e);
            m.push((a, b, MKind::Orig(e)));
        }
        loop {
            let verts: Vec<Vertex> = m
                .iter()
                .flat_map(|&(a, b, _)| [a, b])
                .collect::<BTreeSet<_>>()
                .into_iter()
                .collect();
            let mut condensed = false;
            'pairs: for (i, &x) in verts.iter().enumerate() {
                for &y in &verts[i + 1..] {
                    if (x.min(y), x.max(y)) == (u.min(v), u.max(v)) {
                        continue;
                    }
                    let eps: Vec<(Vertex, Vertex)> =
                        m.iter().map(|&(a, b, _)| (a, b)).collect();
                    let groups = pair_bridges(&eps, x, y);
                    let non_ref: Vec<&Vec<usize>> = groups
                        .iter()
                        .filter(|grp| !grp.iter().any(|&i| matches!(m[i].2, MKind::Ref)))
                        .collect();
                    let total: usize = non_ref.iter().map(|grp| grp.len()).sum();
                    if groups.len() >= 2 && total >= 2 {
                        // Merge every non-reference bridge into one virtual
                        // edge; the recursion re-splits it (a P-node when
                        // several bridges were merged).
                        let mut union = BTreeSet::new();
                        let mut drop = BTreeSet::new();
                        for grp in non_ref {
                            for &mi in grp {
                                drop.insert(mi);
                                match &m[mi].2 {
                                    MKind::Orig(e) => {
                                        union.insert(*e);
                                    }
                                    MKind::Cond(s) => union.extend(s.iter().copied()),
                                    MKind::Ref => unreachable!(),
                                }
                            }
                        }
                        m = m
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| !drop.contains(i))
                            .map(|(_, e)| e.clone())
                            .collect();
                        m.push((x, y, MKind::Cond(union)));
                        condensed = true;
                        break 'pairs;
                    }
                }
            }
            if !condensed {
                break;
            }
        }
        // Assemble the skeleton: reference first, the rest ordered by
        // endpoints for reproducibility.
        let mut rest: Vec<(Vertex, Vertex, MKind)> = m
            .iter()
            .filter(|(_, _, k)| !matches!(k, MKind::Ref))
            .cloned()
            .collect();
        rest.sort_by_key(|&(a, b, ref k)| {
            let lo = a.min(b);
            let hi = a.max(b);
            let tag = match k {
                MKind::Orig(e) => *e,
                MKind::Cond(s) => *s.iter().next().unwrap(),
                MKind::Ref => unreachable!(),
            };
            (lo, hi, tag)
        });
        let mut skeleton = vec![SkelEdge {
            a: u,
            b: v,
            kind: SkelEdgeKind::Reference,
        }];
        let mut children = Vec::new();
        for (a, b, kind) in rest {
            let c = match kind {
                MKind::Orig(e) => self.q_node(e),
                MKind::Cond(s) => {
                    let ids: Vec<EdgeId> = s.into_iter().collect();
                    self.subtree(&ids, a.min(b), a.max(b))
                }
                MKind::Ref => unreachable!(),
            };
            skeleton.push(SkelEdge {
                a,
                b,
                kind: SkelEdgeKind::Child(c),
            });
            children.push(c);
        }
        self.push(SpqrNode {
            kind: NodeKind::R,
            poles: (u, v),
            skeleton,
            q_edge: None,
            parent: None,
            children,
        })
    }
}

/// Group edges into {x, y}-bridges: one group per direct x-y edge, one per
/// connected component of the rest with the pair removed. Groups are sorted
/// by their smallest index.
fn pair_bridges(eps: &[(Vertex, Vertex)], x: Vertex, y: Vertex) -> Vec<Vec<usize>> {
    fn find(parent: &mut BTreeMap<Vertex, Vertex>, a: Vertex) -> Vertex {
        let p = *parent.entry(a).or_insert(a);
        if p == a {
            a
        } else {
            let r = find(parent, p);
            parent.insert(a, r);
            r
        }
    }
    let is_pole = |w: Vertex| w == x || w == y;
    let mut parent: BTreeMap<Vertex, Vertex> = BTreeMap::new();
    for &(a, b) in eps {
        if !is_pole(a) && !is_pole(b) {
            let (ra, rb) = (find(&mut parent, a), find(&mut parent, b));
            parent.insert(ra, rb);
        }
    }
    let mut comps: BTreeMap<Vertex, Vec<usize>> = BTreeMap::new();
    let mut direct: Vec<Vec<usize>> = Vec::new();
    for (i, &(a, b)) in eps.iter().enumerate() {
        if is_pole(a) && is_pole(b) {
            direct.push(vec![i]);
        } else {
            let anchor = if is_pole(a) { b } else { a };
            let root = find(&mut parent, anchor);
            comps.entry(root).or_default().push(i);
        }
    }
    let mut out: Vec<Vec<usize>> = comps.into_values().collect();
    out.extend(direct);
    out.sort_by_key(|grp| grp[0]);
    out
}

/// Bridges of `edges` with respect to the pair {u, v}, as edge-id groups
/// sorted by smallest edge id.
fn uv_bridges(g: &Digraph, edges: &[EdgeId], u: Vertex, v: Vertex) -> Vec<Vec<EdgeId>> {
    let eps: Vec<(Vertex, Vertex)> = edges.iter().map(|&e| g.edge(e)).collect();
    let mut bridges: Vec<Vec<EdgeId>> = pair_bridges(&eps, u, v)
        .into_iter()
        .map(|grp| {
            let mut ids: Vec<EdgeId> = grp.into_iter().map(|i| edges[i]).collect();
            ids.sort_unstable();
            ids
        })
        .collect();
    bridges.sort_by_key(|b| b[0]);
    bridges
}

/// Blocks of the subgraph ordered along the cut-vertex chain from `u` to
/// `v`; each entry is (far endpoint, block edges). A single entry means the
/// subgraph is 2-connected between the poles.
fn block_chain(g: &Digraph, edges: &[EdgeId], u: Vertex, v: Vertex) -> Vec<(Vertex, Vec<EdgeId>)> {
    let pairs: Vec<(Vertex, Vertex)> = edges.iter().map(|&e| g.edge(e)).collect();
    let blks = blocks(g.vertex_count(), &pairs);
    if blks.len() == 1 {
        return vec![(v, edges.to_vec())];
    }
    // Vertices lying in more than one block are the cut vertices.
    let vset: Vec<BTreeSet<Vertex>> = blks
        .iter()
        .map(|blk| blk.iter().flat_map(|&i| [pairs[i].0, pairs[i].1]).collect())
        .collect();
    let mut count: BTreeMap<Vertex, usize> = BTreeMap::new();
    for vs in &vset {
        for &w in vs {
            *count.entry(w).or_default() += 1;
        }
    }
    let mut chain = Vec::new();
    let mut cur = u;
    let mut used = vec![false; blks.len()];
    for _ in 0..blks.len() {
        let bi = (0..blks.len())
            .find(|&i| !used[i] && vset[i].contains(&cur))
            .expect("cut-vertex chain reaches every block");
        used[bi] = true;
        let far = *vset[bi]
            .iter()
            .find(|&&w| w != cur && (w == v || count[&w] >= 2))
            .expect("block has a far endpoint on the chain");
        let mut es: Vec<EdgeId> = blks[bi].iter().map(|&i| edges[i]).collect();
        es.sort_unstable();
        chain.push((far, es));
        cur = far;
    }
    assert_eq!(chain.last().unwrap().0, v, "chain ends at the second pole");
    chain
}
