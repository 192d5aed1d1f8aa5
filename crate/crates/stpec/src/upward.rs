//! Angle assignments and boundary signatures.
//!
//! An upward drawing induces a labeling of face angles with {-1, 0, +1}:
//! non-switch angles get 0, switch angles get -1 (small) or +1 (large), each
//! switch vertex has exactly one +1, each non-switch vertex exactly two 0s,
//! and the +1/-1 counts of a face differ by -2 (inner) or +2 (external).
//! Signatures summarize the switch content along the external boundary walk
//! of an embedded subgraph between its poles.

use crate::digraph::{Digraph, EdgeId, SwitchClass, Vertex};
use crate::planarity::PlanarEmbedding;
use std::collections::BTreeSet;
use std::fmt;

pub type Label = i8;

/// A walk along edges; `verts` has one more entry than `edges`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Walk {
    pub verts: Vec<Vertex>,
    pub edges: Vec<EdgeId>,
}

impl Walk {
    pub fn single(v: Vertex) -> Self {
        Walk {
            verts: vec![v],
            edges: Vec::new(),
        }
    }

    pub fn edge(e: EdgeId, from: Vertex, to: Vertex) -> Self {
        Walk {
            verts: vec![from, to],
            edges: vec![e],
        }
    }

    pub fn first(&self) -> Vertex {
        self.verts[0]
    }

    pub fn last(&self) -> Vertex {
        *self.verts.last().unwrap()
    }

    /// Append `other`, which must start where `self` ends.
    pub fn join(&self, other: &Walk) -> Walk {
        assert_eq!(self.last(), other.first(), "walks must share an endpoint");
        let mut verts = self.verts.clone();
        verts.extend_from_slice(&other.verts[1..]);
        let mut edges = self.edges.clone();
        edges.extend_from_slice(&other.edges);
        Walk { verts, edges }
    }

    pub fn len(&self) -> usize {
        self.edges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.edges.is_empty()
    }

    /// Interior vertices with both adjoining walk edges.
    pub fn interior(&self) -> impl Iterator<Item = (Vertex, EdgeId, EdgeId)> + '_ {
        (1..self.verts.len().saturating_sub(1))
            .map(|i| (self.verts[i], self.edges[i - 1], self.edges[i]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SymbolKind {
    /// Undecided source switch of the instance.
    Src,
    /// Undecided sink switch of the instance.
    Snk,
    /// Source-like angle already forced small (local or resolved).
    SrcLocal,
    /// Sink-like angle already forced small.
    SnkLocal,
}

impl SymbolKind {
    pub fn is_local(self) -> bool {
        matches!(self, SymbolKind::SrcLocal | SymbolKind::SnkLocal)
    }

    pub fn resolved(self) -> SymbolKind {
        match self {
            SymbolKind::Src => SymbolKind::SrcLocal,
            SymbolKind::Snk => SymbolKind::SnkLocal,
            other => other,
        }
    }

    pub fn is_source_like(self) -> bool {
        matches!(self, SymbolKind::Src | SymbolKind::SrcLocal)
    }
}

impl fmt::Display for SymbolKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SymbolKind::Src => "σ",
            SymbolKind::Snk => "τ",
            SymbolKind::SrcLocal => "σℓ",
            SymbolKind::SnkLocal => "τℓ",
        };
        write!(f, "{s}")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol {
    pub kind: SymbolKind,
    pub vertex: Vertex,
}

impl Symbol {
    pub fn new(kind: SymbolKind, vertex: Vertex) -> Self {
        Symbol { kind, vertex }
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.kind, self.vertex)
    }
}

/// The switch summary of one half-boundary, in walk order.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Signature(pub Vec<Symbol>);

impl Signature {
    pub fn empty() -> Self {
        Signature(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Symbol> {
        self.0.iter()
    }

    pub fn push(&mut self, s: Symbol) {
        self.0.push(s);
    }

    pub fn concat(&self, mid: Option<Symbol>, tail: &Signature) -> Signature {
        let mut out = self.0.clone();
        out.extend(mid);
        out.extend_from_slice(&tail.0);
        Signature(out)
    }

    pub fn reversed(&self) -> Signature {
        Signature(self.0.iter().rev().copied().collect())
    }
}

impl fmt::Display for Signature {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "∅");
        }
        for (i, s) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{s}")?;
        }
        Ok(())
    }
}

/// True iff the signature fits the budget-bounded length `4k + 2`.
pub fn is_short(sig: &Signature, k: usize) -> bool {
    sig.len() <= 4 * k + 2
}

/// Labels for the angles of an embedding, keyed by face id and position in
/// that face's boundary walk (each occurrence of a vertex is its own angle).
#[derive(Debug, Clone, Default)]
pub struct AngleAssignment {
    labels: std::collections::BTreeMap<(usize, usize), Label>,
}

impl AngleAssignment {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn set(&mut self, face: usize, pos: usize, label: Label) {
        assert!(matches!(label, -1 | 0 | 1));
        self.labels.insert((face, pos), label);
    }

    pub fn get(&self, face: usize, pos: usize) -> Option<Label> {
        self.labels.get(&(face, pos)).copied()
    }
}

/// Is the angle between `entering` and `leaving` at `v` a switch angle
/// (both edges point the same way at `v`)?
pub fn is_switch_angle(g: &Digraph, v: Vertex, entering: EdgeId, leaving: EdgeId) -> bool {
    let into_v = |e: EdgeId| g.edge(e).1 == v;
    into_v(entering) == into_v(leaving)
}

/// Face-level check: label kinds match angle kinds, and the +1/-1 balance is
/// -2 on an inner face and +2 on the external one.
pub fn check_upward_face(
    g: &Digraph,
    emb: &PlanarEmbedding,
    face: usize,
    labels: &AngleAssignment,
    is_external: bool,
) -> bool {
    let walk = emb.face_walk(face);
    let mut balance: i32 = 0;
    for (pos, &(v, e_in, e_out)) in walk.iter().enumerate() {
        let Some(label) = labels.get(face, pos) else {
            return false;
        };
        let ein = emb.representative(e_in);
        let eout = emb.representative(e_out);
        if is_switch_angle(g, v, ein, eout) {
            if label == 0 {
                return false;
            }
        } else if label != 0 {
            return false;
        }
        balance += label as i32;
    }
    balance == if is_external { 2 } else { -2 }
}

/// Vertex-level check: a switch has exactly one +1 angle and -1 elsewhere; a
/// non-switch has exactly two 0 angles and -1 elsewhere.
pub fn check_upward_vertex(
    g: &Digraph,
    emb: &PlanarEmbedding,
    labels: &AngleAssignment,
    v: Vertex,
) -> bool {
    let switches = crate::digraph::classify_switches(g);
    let mut plus = 0usize;
    let mut zero = 0usize;
    let mut total = 0usize;
    for face in 0..emb.faces().len() {
        for (pos, &(w, e_in, e_out)) in emb.face_walk(face).iter().enumerate() {
            if w != v {
                continue;
            }
            let Some(label) = labels.get(face, pos) else {
                return false;
            };
            let ein = emb.representative(e_in);
            let eout = emb.representative(e_out);
            if is_switch_angle(g, v, ein, eout) != (label != 0) {
                return false;
            }
            total += 1;
            match label {
                1 => plus += 1,
                0 => zero += 1,
                _ => {}
            }
        }
    }
    if total == 0 {
        return false;
    }
    if switches.is_switch(v) {
        plus == 1 && zero == 0
    } else {
        plus == 0 && zero == 2
    }
}

/// Signature of a boundary walk: interior vertices whose two walk edges both
/// leave (enter) contribute a source-like (sink-like) symbol, undecided when
/// the vertex is a switch of the instance and local otherwise.
pub fn signature_of_path(g: &Digraph, switches: &SwitchClass, walk: &Walk) -> Signature {
    let mut out = Signature::empty();
    for (w, e1, e2) in walk.interior() {
        let out1 = g.edge(e1).0 == w;
        let out2 = g.edge(e2).0 == w;
        if out1 != out2 {
            continue;
        }
        let kind = match (out1, switches.is_switch(w)) {
            (true, true) => SymbolKind::Src,
            (true, false) => SymbolKind::SrcLocal,
            (false, true) => SymbolKind::Snk,
            (false, false) => SymbolKind::SnkLocal,
        };
        out.push(Symbol::new(kind, w));
    }
    out
}

/// The two pole-to-pole walks along the external face of an embedded
/// subgraph, plus the vertices common to both (cut vertices of the subgraph).
#[derive(Debug, Clone)]
pub struct HalfBoundaries {
    pub uv: Walk,
    pub vu: Walk,
    pub bifacial: BTreeSet<Vertex>,
}

pub fn half_boundaries(
    gv: &Digraph,
    emb: &PlanarEmbedding,
    u: Vertex,
    v: Vertex,
) -> Result<HalfBoundaries, String> {
    let face = emb.external_face();
    let walk = emb.face_walk(face);
    let len = walk.len();
    let find = |x: Vertex| walk.iter().position(|&(w, _, _)| w == x);
    let iu = find(u).ok_or_else(|| format!("pole {u} not on the external face"))?;
    let iv = find(v).ok_or_else(|| format!("pole {v} not on the external face"))?;
    let segment = |from: usize, to: usize| -> Walk {
        let mut verts = vec![walk[from].0];
        let mut edges = Vec::new();
        let mut i = from;
        while i != to {
            edges.push(emb.representative(walk[i].2));
            i = (i + 1) % len;
            verts.push(walk[i].0);
        }
        Walk { verts, edges }
    };
    let uv = segment(iu, iv);
    let vu = segment(iv, iu);
    let _ = gv;
    let a: BTreeSet<Vertex> = uv.verts[1..uv.verts.len() - 1].iter().copied().collect();
    let b: BTreeSet<Vertex> = vu.verts[1..vu.verts.len() - 1].iter().copied().collect();
    let bifacial = a.intersection(&b).copied().collect();
    Ok(HalfBoundaries { uv, vu, bifacial })
}

/// Replace each undecided symbol whose vertex received a +1 angle inside the
/// enclosing subgraph by its resolved form. Symbol count is unchanged.
pub fn restrict_signature(sig: &Signature, plus_inside: &BTreeSet<Vertex>) -> Signature {
    Signature(
        sig.iter()
            .map(|s| {
                if !s.kind.is_local() && plus_inside.contains(&s.vertex) {
                    Symbol::new(s.kind.resolved(), s.vertex)
                } else {
                    *s
                }
            })
            .collect(),
    )
}
