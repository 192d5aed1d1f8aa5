//! Directed graphs with fixed vertex set and the cheap structural checks the
//! solver needs before doing anything expensive: switch classification,
//! acyclicity, biconnectivity of the underlying graph, and the precheck that
//! rejects instances no edge addition can fix.

use std::collections::BTreeSet;
use std::fmt;

/// Vertex id, dense in `0..n`.
pub type Vertex = u32;
/// Index into [`Digraph::edges`].
pub type EdgeId = usize;

/// A simple digraph: `n` vertices and a list of oriented edges.
///
/// Self-loops and repeated edges in the same orientation are rejected at
/// construction. An anti-parallel pair (`u->v` and `v->u`) is representable,
/// it is a directed 2-cycle and gets rejected later by the acyclicity check,
/// not by the constructor.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Digraph {
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
}

/// Error raised by [`Digraph::new`] for malformed edge lists.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GraphError {
    #[error("edge ({0}, {1}) out of range for {2} vertices")]
    VertexOutOfRange(Vertex, Vertex, usize),
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(Vertex, Vertex),
}

impl Digraph {
    pub fn new(n: usize, edges: Vec<(Vertex, Vertex)>) -> Result<Self, GraphError> {
        let mut seen = BTreeSet::new();
        for &(u, v) in &edges {
            if u as usize >= n || v as usize >= n {
                return Err(GraphError::VertexOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            if !seen.insert((u, v)) {
                return Err(GraphError::DuplicateEdge(u, v));
            }
        }
        Ok(Self { n, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[(Vertex, Vertex)] {
        &self.edges
    }

    pub fn edge(&self, id: EdgeId) -> (Vertex, Vertex) {
        self.edges[id]
    }

    /// True if `u->v` or `v->u` is present.
    pub fn adjacent(&self, u: Vertex, v: Vertex) -> bool {
        self.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// Out-neighbour lists indexed by vertex.
    pub fn out_adj(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[u as usize].push(v);
        }
        adj
    }

    /// In-neighbour lists indexed by vertex.
    pub fn in_adj(&self) -> Vec<Vec<Vertex>> {
        let mut adj = vec![Vec::new(); self.n];
        for &(u, v) in &self.edges {
            adj[v as usize].push(u);
        }
        adj
    }

    /// Undirected adjacency as edge-id lists, one entry per incidence.
    pub fn undirected_adj(&self) -> Vec<Vec<EdgeId>> {
        let mut adj = vec![Vec::new(); self.n];
        for (id, &(u, v)) in self.edges.iter().enumerate() {
            adj[u as usize].push(id);
            adj[v as usize].push(id);
        }
        adj
    }

    /// The graph plus extra oriented edges. Duplicates are an error to keep
    /// witness bookkeeping honest.
    pub fn with_edges(&self, extra: &[(Vertex, Vertex)]) -> Result<Self, GraphError> {
        let mut edges = self.edges.clone();
        edges.extend_from_slice(extra);
        Self::new(self.n, edges)
    }

    /// True if adding `u->v` would close a directed cycle (i.e. `v` reaches `u`).
    pub fn reaches(&self, from: Vertex, to: Vertex) -> bool {
        let adj = self.out_adj();
        let mut seen = vec![false; self.n];
        let mut stack = vec![from];
        while let Some(x) = stack.pop() {
            if x == to {
                return true;
            }
            if std::mem::replace(&mut seen[x as usize], true) {
                continue;
            }
            stack.extend(adj[x as usize].iter().copied());
        }
        false
    }
}

impl fmt::Display for Digraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.n, self.edges.len())?;
        for &(u, v) in &self.edges {
            write!(f, "\n{u} {v}")?;
        }
        Ok(())
    }
}

/// Per-vertex role: a switch is a source or a sink of the whole digraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SwitchTag {
    Source,
    Sink,
    NonSwitch,
}

/// Switch classification of all vertices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SwitchClass {
    pub tags: Vec<SwitchTag>,
    pub n_sources: usize,
    pub n_sinks: usize,
}

impl SwitchClass {
    pub fn is_switch(&self, v: Vertex) -> bool {
        self.tags[v as usize] != SwitchTag::NonSwitch
    }

    pub fn tag(&self, v: Vertex) -> SwitchTag {
        self.tags[v as usize]
    }

    pub fn sources(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == SwitchTag::Source)
            .map(|(v, _)| v as Vertex)
    }

    pub fn sinks(&self) -> impl Iterator<Item = Vertex> + '_ {
        self.tags
            .iter()
            .enumerate()
            .filter(|(_, t)| **t == SwitchTag::Sink)
            .map(|(v, _)| v as Vertex)
    }
}

/// Classify every vertex as source, sink or non-switch. An isolated vertex
/// (in-degree and out-degree both zero) counts as a source; such vertices
/// cannot occur in biconnected inputs and only matter for the oracle paths.
pub fn classify_switches(g: &Digraph) -> SwitchClass {
    let mut indeg = vec![0usize; g.vertex_count()];
    let mut outdeg = vec![0usize; g.vertex_count()];
    for &(u, v) in g.edges() {
        outdeg[u as usize] += 1;
        indeg[v as usize] += 1;
    }
    let mut tags = Vec::with_capacity(g.vertex_count());
    let (mut n_sources, mut n_sinks) = (0, 0);
    for v in 0..g.vertex_count() {
        let tag = if indeg[v] == 0 {
            n_sources += 1;
            SwitchTag::Source
        } else if outdeg[v] == 0 {
            n_sinks += 1;
            SwitchTag::Sink
        } else {
            SwitchTag::NonSwitch
        };
        tags.push(tag);
    }
    SwitchClass { tags, n_sources, n_sinks }
}

/// Kahn's algorithm; true when no directed cycle exists.
pub fn is_acyclic(g: &Digraph) -> bool {
    let mut indeg = vec![0usize; g.vertex_count()];
    for &(_, v) in g.edges() {
        indeg[v as usize] += 1;
    }
    let adj = g.out_adj();
    let mut queue: Vec<Vertex> = (0..g.vertex_count() as Vertex)
        .filter(|&v| indeg[v as usize] == 0)
        .collect();
    let mut removed = 0;
    while let Some(v) = queue.pop() {
        removed += 1;
        for &w in &adj[v as usize] {
            indeg[w as usize] -= 1;
            if indeg[w as usize] == 0 {
                queue.push(w);
            }
        }
    }
    removed == g.vertex_count()
}

/// Biconnectivity of the underlying undirected graph. The 2-vertex graph with
/// a single edge is accepted as the degenerate base case; everything else
/// needs at least 3 vertices, connectivity, and no articulation vertex.
pub fn is_biconnected(g: &Digraph) -> bool {
    let n = g.vertex_count();
    if n < 2 {
        return false;
    }
    // Collapse anti-parallel pairs so multiplicity does not hide a cut vertex.
    let mut und: BTreeSet<(Vertex, Vertex)> = BTreeSet::new();
    for &(u, v) in g.edges() {
        und.insert((u.min(v), u.max(v)));
    }
    if n == 2 {
        return und.len() == 1;
    }
    let mut adj = vec![Vec::new(); n];
    for &(u, v) in &und {
        adj[u as usize].push(v);
        adj[v as usize].push(u);
    }
    // Iterative DFS computing lowpoints.
    let mut disc = vec![usize::MAX; n];
    let mut low = vec![usize::MAX; n];
    let mut parent = vec![usize::MAX; n];
    let mut timer = 0usize;
    let mut root_children = 0usize;
    let mut stack: Vec<(usize, usize)> = vec![(0, 0)]; // (vertex, next child index)
    disc[0] = 0;
    low[0] = 0;
    timer += 1;
    while let Some(&mut (v, ref mut idx)) = stack.last_mut() {
        if *idx < adj[v].len() {
            let w = adj[v][*idx] as usize;
            *idx += 1;
            if disc[w] == usize::MAX {
                parent[w] = v;
                disc[w] = timer;
                low[w] = timer;
                timer += 1;
                if v == 0 {
                    root_children += 1;
                }
                stack.push((w, 0));
            } else if w != parent[v] {
                low[v] = low[v].min(disc[w]);
            }
        } else {
            stack.pop();
            if let Some(&(p, _)) = stack.last() {
                low[p] = low[p].min(low[v]);
                // Non-root articulation test.
                if p != 0 && low[v] >= disc[p] {
                    return false;
                }
            }
        }
    }
    if timer != n {
        return false; // disconnected
    }
    root_children <= 1
}

/// Why an instance can be rejected without running the solver. The variants
/// are checked in this order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RejectReason {
    /// Edge additions never break an existing directed cycle.
    DirectedCycle,
    /// More sources and sinks than `2k + 2`; each added edge removes at most
    /// one source and one sink and the final graph keeps one of each.
    TooManySwitches,
    NotBiconnected,
    NotPlanar,
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RejectReason::DirectedCycle => "directed-cycle",
            RejectReason::TooManySwitches => "too-many-switches",
            RejectReason::NotBiconnected => "not-biconnected",
            RejectReason::NotPlanar => "not-planar",
        };
        f.write_str(s)
    }
}

/// Outcome of [`precheck`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Precheck {
    Continue,
    Reject(RejectReason),
}

/// Cheap necessary conditions, applied in a fixed order so diagnostics are
/// reproducible: directed cycle, switch budget, biconnectivity, planarity.
pub fn precheck(g: &Digraph, k: usize) -> Precheck {
    if !is_acyclic(g) {
        return Precheck::Reject(RejectReason::DirectedCycle);
    }
    let switches = classify_switches(g);
    if switches.n_sources + switches.n_sinks > 2 * k + 2 {
        return Precheck::Reject(RejectReason::TooManySwitches);
    }
    if !is_biconnected(g) {
        return Precheck::Reject(RejectReason::NotBiconnected);
    }
    if crate::planarity::test_planarity(g).is_none() {
        return Precheck::Reject(RejectReason::NotPlanar);
    }
    Precheck::Continue
}
