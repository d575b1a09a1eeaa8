//! XC-tangle graphs: validation, the external algebra action (permutations and merges)
//! and the conversions to and from XC-Gauss diagrams.
//!
//! Ports: univalent vertices use port 0. A bivalent vertex has port 0 incoming and port 1
//! outgoing. A crossing has ports 0 in-left, 1 in-right, 2 out-left, 3 out-right; strands
//! go straight through as 0 -> 3 and 1 -> 2, and the over-strand is 0 -> 3 for sign + and
//! 1 -> 2 for sign -.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;

use crate::gauss::{sign_char, ChordId, Event, XCGaussDiagram};
use crate::parse::{content_lines, tokens, ParseError};

pub type VertexId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum VertexKind {
    Out,
    In,
    Bivalent,
    Crossing(i8),
}

impl VertexKind {
    fn ports(&self) -> u8 {
        match self {
            VertexKind::Out | VertexKind::In => 1,
            VertexKind::Bivalent => 2,
            VertexKind::Crossing(_) => 4,
        }
    }

    fn is_outgoing(&self, port: u8) -> bool {
        match self {
            VertexKind::Out => true,
            VertexKind::In => false,
            VertexKind::Bivalent => port == 1,
            VertexKind::Crossing(_) => port >= 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Half {
    pub vertex: VertexId,
    pub port: u8,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub from: Half,
    pub to: Half,
    pub rot: i8,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct XCTangleGraph {
    pub vertices: Vec<(VertexId, VertexKind)>,
    pub edges: Vec<Edge>,
    pub out_order: Vec<VertexId>,
    pub in_order: Vec<VertexId>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TangleError {
    #[error("vertex {0} declared twice")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("vertex {0} has no port {1}")]
    BadPort(VertexId, u8),
    #[error("bad valence: port {1} of vertex {0} is used twice")]
    PortReused(VertexId, u8),
    #[error("bad valence: port {1} of vertex {0} is unused")]
    PortUnused(VertexId, u8),
    #[error("edge direction does not match port {1} of vertex {0} (in/out pairs at a crossing must be adjacent)")]
    WrongDirection(VertexId, u8),
    #[error("rotation {0} is not -1, 0 or 1")]
    BadRotation(i8),
    #[error("closed component through vertex {0}")]
    ClosedComponent(VertexId),
    #[error("{0} order is not a permutation of the {0} vertices")]
    BadOrder(&'static str),
    #[error("permutation has size {0} but there are {1} strands")]
    SizeMismatch(usize, usize),
    #[error("parts sum to {0} but there are {1} strands")]
    PartsMismatch(usize, usize),
}

/// One traced strand: its edges in order and its end vertices.
struct Trace {
    edges: Vec<usize>,
    end: VertexId,
}

impl XCTangleGraph {
    pub fn empty() -> Self {
        XCTangleGraph { vertices: Vec::new(), edges: Vec::new(), out_order: Vec::new(), in_order: Vec::new() }
    }

    /// `n` parallel identity strands.
    pub fn identity(n: usize) -> Self {
        let mut t = Self::empty();
        for i in 0..n as VertexId {
            let (o, x) = (2 * i + 1, 2 * i + 2);
            t.vertices.push((o, VertexKind::Out));
            t.vertices.push((x, VertexKind::In));
            t.edges.push(Edge { from: Half { vertex: o, port: 0 }, to: Half { vertex: x, port: 0 }, rot: 0 });
            t.out_order.push(o);
            t.in_order.push(x);
        }
        t
    }

    /// The crossing generator of the given sign on two strands.
    pub fn crossing(sign: i8) -> Self {
        let v = |vertex, port| Half { vertex, port };
        XCTangleGraph {
            vertices: vec![
                (1, VertexKind::Out),
                (2, VertexKind::Out),
                (3, VertexKind::Crossing(sign)),
                (4, VertexKind::In),
                (5, VertexKind::In),
            ],
            edges: vec![
                Edge { from: v(1, 0), to: v(3, 0), rot: 0 },
                Edge { from: v(2, 0), to: v(3, 1), rot: 0 },
                Edge { from: v(3, 2), to: v(4, 0), rot: 0 },
                Edge { from: v(3, 3), to: v(5, 0), rot: 0 },
            ],
            out_order: vec![1, 2],
            in_order: vec![4, 5],
        }
    }

    /// A single edge of rotation `rot`.
    pub fn spinner(rot: i8) -> Self {
        let mut t = Self::identity(1);
        t.edges[0].rot = rot;
        t
    }

    pub fn n(&self) -> usize {
        self.out_order.len()
    }

    fn kinds(&self) -> HashMap<VertexId, VertexKind> {
        self.vertices.iter().copied().collect()
    }

    fn max_vertex(&self) -> VertexId {
        self.vertices.iter().map(|v| v.0).max().unwrap_or(0)
    }

    fn edge_from(&self) -> HashMap<Half, usize> {
        self.edges.iter().enumerate().map(|(i, e)| (e.from, i)).collect()
    }

    pub fn validate(&self) -> Result<(), TangleError> {
        let mut kinds = HashMap::new();
        for &(id, k) in &self.vertices {
            if kinds.insert(id, k).is_some() {
                return Err(TangleError::DuplicateVertex(id));
            }
        }
        let mut used = HashSet::new();
        for e in &self.edges {
            if !(-1..=1).contains(&e.rot) {
                return Err(TangleError::BadRotation(e.rot));
            }
            for (h, outgoing) in [(e.from, true), (e.to, false)] {
                let k = kinds.get(&h.vertex).ok_or(TangleError::UnknownVertex(h.vertex))?;
                if h.port >= k.ports() {
                    return Err(TangleError::BadPort(h.vertex, h.port));
                }
                if k.is_outgoing(h.port) != outgoing {
                    return Err(TangleError::WrongDirection(h.vertex, h.port));
                }
                if !used.insert(h) {
                    return Err(TangleError::PortReused(h.vertex, h.port));
                }
            }
        }
        for &(id, k) in &self.vertices {
            for p in 0..k.ports() {
                if !used.contains(&Half { vertex: id, port: p }) {
                    return Err(TangleError::PortUnused(id, p));
                }
            }
        }
        for (name, kind, order) in [("out", VertexKind::Out, &self.out_order), ("in", VertexKind::In, &self.in_order)] {
            let want: HashSet<VertexId> = self.vertices.iter().filter(|v| v.1 == kind).map(|v| v.0).collect();
            let got: HashSet<VertexId> = order.iter().copied().collect();
            if got.len() != order.len() || got != want {
                return Err(TangleError::BadOrder(name));
            }
        }
        // every edge must lie on a strand that starts at an out-vertex
        let traces = self.trace_all();
        let seen: HashSet<usize> = traces.iter().flat_map(|t| t.edges.iter().copied()).collect();
        if let Some(i) = (0..self.edges.len()).find(|i| !seen.contains(i)) {
            return Err(TangleError::ClosedComponent(self.edges[i].from.vertex));
        }
        Ok(())
    }

    /// Follows each strand from its out-vertex. Assumes the port structure is valid.
    fn trace_all(&self) -> Vec<Trace> {
        let kinds = self.kinds();
        let from = self.edge_from();
        let mut out = Vec::new();
        for &o in &self.out_order {
            let mut edges = Vec::new();
            let mut h = Half { vertex: o, port: 0 };
            let end = loop {
                let Some(&e) = from.get(&h) else {
                    break h.vertex;
                };
                if edges.len() > self.edges.len() {
                    break h.vertex;
                }
                edges.push(e);
                let to = self.edges[e].to;
                match kinds[&to.vertex] {
                    VertexKind::Bivalent => h = Half { vertex: to.vertex, port: 1 },
                    VertexKind::Crossing(_) => h = Half { vertex: to.vertex, port: 3 - to.port },
                    _ => break to.vertex,
                }
            };
            out.push(Trace { edges, end });
        }
        out
    }

    /// `sigma[i]` is the new position of strand `i` (in both orders).
    pub fn action_permute(&self, sigma: &[usize]) -> Result<XCTangleGraph, TangleError> {
        let n = self.n();
        if sigma.len() != n {
            return Err(TangleError::SizeMismatch(sigma.len(), n));
        }
        let mut seen = vec![false; n];
        for &s in sigma {
            if s >= n || std::mem::replace(&mut seen[s], true) {
                return Err(TangleError::SizeMismatch(sigma.len(), n));
            }
        }
        let mut t = self.clone();
        for i in 0..n {
            t.out_order[sigma[i]] = self.out_order[i];
            t.in_order[sigma[i]] = self.in_order[i];
        }
        Ok(t)
    }

    /// Merges consecutive blocks of strands (by out-order). Inside a block `s_1..s_k` the
    /// in-vertex of `s_{j+1}` and the out-vertex of `s_j` become one bivalent vertex, so
    /// the merged strand runs `s_k` first. A part of size 0 inserts a fresh identity strand.
    pub fn action_merge(&self, parts: &[usize]) -> Result<XCTangleGraph, TangleError> {
        let total: usize = parts.iter().sum();
        if total != self.n() {
            return Err(TangleError::PartsMismatch(total, self.n()));
        }
        let traces = self.trace_all();
        let in_pos: HashMap<VertexId, usize> = self.in_order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
        let mut t = self.clone();
        let mut next_id = self.max_vertex();
        let mut removed = HashSet::new();
        let mut outs = Vec::new();
        let mut ins = Vec::new();
        let mut keys = Vec::new();
        let mut last_key = (-1i64, 0usize);
        let mut start = 0;
        for &k in parts {
            let block: Vec<usize> = (start..start + k).collect();
            start += k;
            if block.is_empty() {
                let (o, x) = (next_id + 1, next_id + 2);
                next_id += 2;
                t.vertices.push((o, VertexKind::Out));
                t.vertices.push((x, VertexKind::In));
                t.edges.push(Edge { from: Half { vertex: o, port: 0 }, to: Half { vertex: x, port: 0 }, rot: 0 });
                outs.push(o);
                ins.push(x);
                last_key = (last_key.0, last_key.1 + 1);
                keys.push(last_key);
                continue;
            }
            for w in block.windows(2) {
                let (sj, sj1) = (w[0], w[1]);
                next_id += 1;
                let b = next_id;
                t.vertices.push((b, VertexKind::Bivalent));
                let into_end = *traces[sj1].edges.last().expect("strand has an edge");
                let out_of_start = traces[sj].edges[0];
                t.edges[into_end].to = Half { vertex: b, port: 0 };
                t.edges[out_of_start].from = Half { vertex: b, port: 1 };
                removed.insert(traces[sj1].end);
                removed.insert(self.out_order[sj]);
            }
            outs.push(self.out_order[*block.last().unwrap()]);
            let end = traces[block[0]].end;
            ins.push(end);
            last_key = (in_pos[&end] as i64, 0);
            keys.push(last_key);
        }
        t.vertices.retain(|v| !removed.contains(&v.0));
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by_key(|&i| (keys[i], i));
        t.out_order = outs;
        t.in_order = order.iter().map(|&i| ins[i]).collect();
        Ok(t)
    }

    /// `t2 o t1`: the in-vertex at position `p` of `t1` is glued to the out-vertex at
    /// position `p` of `t2`.
    pub fn compose(t2: &XCTangleGraph, t1: &XCTangleGraph) -> Result<XCTangleGraph, TangleError> {
        if t1.n() != t2.n() {
            return Err(TangleError::SizeMismatch(t2.n(), t1.n()));
        }
        let shift = t1.max_vertex();
        let t2 = t2.shifted(shift);
        let mut t = t1.clone();
        t.vertices.extend(t2.vertices.iter().copied());
        t.edges.extend(t2.edges.iter().copied());
        let mut next_id = t2.max_vertex().max(shift);
        let mut removed = HashSet::new();
        for p in 0..t1.n() {
            let (x, o) = (t1.in_order[p], t2.out_order[p]);
            next_id += 1;
            t.vertices.push((next_id, VertexKind::Bivalent));
            for e in t.edges.iter_mut() {
                if e.to == (Half { vertex: x, port: 0 }) {
                    e.to = Half { vertex: next_id, port: 0 };
                }
                if e.from == (Half { vertex: o, port: 0 }) {
                    e.from = Half { vertex: next_id, port: 1 };
                }
            }
            removed.insert(x);
            removed.insert(o);
        }
        t.vertices.retain(|v| !removed.contains(&v.0));
        t.out_order = t1.out_order.clone();
        t.in_order = t2.in_order.clone();
        Ok(t)
    }

    pub fn tensor(t1: &XCTangleGraph, t2: &XCTangleGraph) -> XCTangleGraph {
        let t2 = t2.shifted(t1.max_vertex());
        let mut t = t1.clone();
        t.vertices.extend(t2.vertices);
        t.edges.extend(t2.edges);
        t.out_order.extend(t2.out_order);
        t.in_order.extend(t2.in_order);
        t
    }

    fn shifted(&self, by: VertexId) -> XCTangleGraph {
        let h = |h: Half| Half { vertex: h.vertex + by, port: h.port };
        XCTangleGraph {
            vertices: self.vertices.iter().map(|(v, k)| (v + by, *k)).collect(),
            edges: self.edges.iter().map(|e| Edge { from: h(e.from), to: h(e.to), rot: e.rot }).collect(),
            out_order: self.out_order.iter().map(|v| v + by).collect(),
            in_order: self.in_order.iter().map(|v| v + by).collect(),
        }
    }

    /// Relabels vertices by first visit along the strands (in out-order) and sorts edges,
    /// so two graphs are isomorphic respecting decorations and orders iff their canonical
    /// forms are equal.
    pub fn canonical(&self) -> XCTangleGraph {
        let kinds = self.kinds();
        let mut map: BTreeMap<VertexId, VertexId> = BTreeMap::new();
        let visit = |v: VertexId, map: &mut BTreeMap<VertexId, VertexId>| {
            let next = map.len() as VertexId + 1;
            map.entry(v).or_insert(next);
        };
        for (i, tr) in self.trace_all().iter().enumerate() {
            visit(self.out_order[i], &mut map);
            for &e in &tr.edges {
                visit(self.edges[e].to.vertex, &mut map);
            }
        }
        for (v, _) in &self.vertices {
            visit(*v, &mut map);
        }
        let h = |h: Half| Half { vertex: map[&h.vertex], port: h.port };
        let mut vertices: Vec<_> = self.vertices.iter().map(|(v, _)| (map[v], kinds[v])).collect();
        vertices.sort_by_key(|v| v.0);
        let mut edges: Vec<_> = self.edges.iter().map(|e| Edge { from: h(e.from), to: h(e.to), rot: e.rot }).collect();
        edges.sort_by_key(|e| (e.from, e.to));
        XCTangleGraph {
            vertices,
            edges,
            out_order: self.out_order.iter().map(|v| map[v]).collect(),
            in_order: self.in_order.iter().map(|v| map[v]).collect(),
        }
    }

    pub fn isomorphic(&self, other: &XCTangleGraph) -> bool {
        self.canonical() == other.canonical()
    }

    pub fn parse(text: &str) -> Result<XCTangleGraph, ParseError> {
        let mut t = XCTangleGraph::empty();
        let mut have_out = false;
        let mut have_in = false;
        for (ln, line) in content_lines(text) {
            let toks = tokens(line);
            let err = |i: usize, msg: &str| ParseError::new(ln, toks[i.min(toks.len() - 1)].0, msg.to_string());
            let id = |i: usize| -> Result<VertexId, ParseError> {
                toks.get(i).ok_or_else(|| err(i, "missing vertex id"))?.1.parse().map_err(|_| err(i, "bad vertex id"))
            };
            match toks[0].1 {
                "vertex" => {
                    let v = id(1)?;
                    let kind = match toks.get(2).map(|t| t.1) {
                        Some("out") => VertexKind::Out,
                        Some("in") => VertexKind::In,
                        Some("bivalent") => VertexKind::Bivalent,
                        Some("crossing") => match toks.get(3).map(|t| t.1) {
                            Some("+") => VertexKind::Crossing(1),
                            Some("-") => VertexKind::Crossing(-1),
                            _ => return Err(err(3, "expected crossing sign + or -")),
                        },
                        _ => return Err(err(2, "expected out, in, bivalent or crossing")),
                    };
                    let want = if matches!(kind, VertexKind::Crossing(_)) { 4 } else { 3 };
                    if toks.len() > want {
                        return Err(err(want, "unexpected token"));
                    }
                    t.vertices.push((v, kind));
                }
                "edge" => {
                    if toks.len() != 5 || toks[2].1 != "->" {
                        return Err(err(1, "expected 'edge v:p -> v:p rot=r'"));
                    }
                    let half = |i: usize| -> Result<Half, ParseError> {
                        let (v, p) = toks[i].1.split_once(':').ok_or_else(|| err(i, "expected vertex:port"))?;
                        Ok(Half {
                            vertex: v.parse().map_err(|_| err(i, "bad vertex id"))?,
                            port: p.parse().map_err(|_| err(i, "bad port"))?,
                        })
                    };
                    let rot = match toks[4].1 {
                        "rot=0" => 0,
                        "rot=1" | "rot=+1" => 1,
                        "rot=-1" => -1,
                        _ => return Err(err(4, "expected rot=-1, rot=0 or rot=1")),
                    };
                    t.edges.push(Edge { from: half(1)?, to: half(3)?, rot });
                }
                "out" | "in" => {
                    let ids = (1..toks.len()).map(id).collect::<Result<Vec<_>, _>>()?;
                    let (slot, have) = if toks[0].1 == "out" {
                        (&mut t.out_order, &mut have_out)
                    } else {
                        (&mut t.in_order, &mut have_in)
                    };
                    if std::mem::replace(have, true) {
                        return Err(err(0, "duplicate order line"));
                    }
                    *slot = ids;
                }
                _ => return Err(err(0, "expected vertex, edge, out or in")),
            }
        }
        Ok(t)
    }
}

impl fmt::Display for XCTangleGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, k) in &self.vertices {
            match k {
                VertexKind::Out => writeln!(f, "vertex {v} out")?,
                VertexKind::In => writeln!(f, "vertex {v} in")?,
                VertexKind::Bivalent => writeln!(f, "vertex {v} bivalent")?,
                VertexKind::Crossing(s) => writeln!(f, "vertex {v} crossing {}", sign_char(*s))?,
            }
        }
        for e in &self.edges {
            writeln!(f, "edge {}:{} -> {}:{} rot={}", e.from.vertex, e.from.port, e.to.vertex, e.to.port, e.rot)?;
        }
        let list = |o: &[VertexId]| o.iter().map(|v| format!(" {v}")).collect::<String>();
        writeln!(f, "out{}", list(&self.out_order))?;
        writeln!(f, "in{}", list(&self.in_order))
    }
}

pub fn validate_tangle(t: &XCTangleGraph) -> Result<(), TangleError> {
    t.validate()
}

/// Reads off the XC-Gauss diagram: one strand per out-vertex, one chord per crossing
/// (chord id = crossing vertex id), one diamond per edge of nonzero rotation.
pub fn to_gauss(t: &XCTangleGraph) -> Result<XCGaussDiagram, TangleError> {
    t.validate()?;
    let kinds = t.kinds();
    let in_pos: HashMap<VertexId, usize> = t.in_order.iter().enumerate().map(|(i, v)| (*v, i)).collect();
    let mut strands = Vec::new();
    let mut top = Vec::new();
    for tr in t.trace_all() {
        let mut evs = Vec::new();
        for &e in &tr.edges {
            let edge = t.edges[e];
            if edge.rot != 0 {
                evs.push(Event::Diamond(edge.rot));
            }
            if let VertexKind::Crossing(s) = kinds[&edge.to.vertex] {
                let c = edge.to.vertex as ChordId;
                let over = (s > 0) == (edge.to.port == 0);
                evs.push(if over { Event::Over(c) } else { Event::Under(c) });
            }
        }
        strands.push(evs);
        top.push(in_pos[&tr.end]);
    }
    let mut chords: Vec<(ChordId, i8)> = t
        .vertices
        .iter()
        .filter_map(|(v, k)| match k {
            VertexKind::Crossing(s) => Some((*v as ChordId, *s)),
            _ => None,
        })
        .collect();
    chords.sort();
    Ok(XCGaussDiagram { top, chords, strands })
}

/// Builds the normal-form graph of `d`: crossing vertex ids are the chord ids, one
/// bivalent vertex per diamond with the rotation on its incoming edge.
pub fn from_gauss(d: &XCGaussDiagram) -> Result<XCTangleGraph, crate::gauss::GaussError> {
    d.validate()?;
    let signs = d.chord_signs();
    let mut t = XCTangleGraph::empty();
    let mut chords: Vec<_> = d.chords.clone();
    chords.sort();
    for (c, s) in &chords {
        t.vertices.push((*c as VertexId, VertexKind::Crossing(*s)));
    }
    let mut next = d.max_chord_id() as VertexId;
    let mut fresh = |t: &mut XCTangleGraph, k: VertexKind| {
        next += 1;
        t.vertices.push((next, k));
        next
    };
    let mut ends = Vec::new();
    for evs in &d.strands {
        let o = fresh(&mut t, VertexKind::Out);
        t.out_order.push(o);
        let mut cur = Half { vertex: o, port: 0 };
        for ev in evs {
            let (to, rot, out) = match *ev {
                Event::Diamond(s) => {
                    let b = fresh(&mut t, VertexKind::Bivalent);
                    (Half { vertex: b, port: 0 }, s, Half { vertex: b, port: 1 })
                }
                Event::Over(c) | Event::Under(c) => {
                    let over = matches!(ev, Event::Over(_));
                    let port_in = if over == (signs[&c] > 0) { 0 } else { 1 };
                    let v = c as VertexId;
                    (Half { vertex: v, port: port_in }, 0, Half { vertex: v, port: 3 - port_in })
                }
            };
            t.edges.push(Edge { from: cur, to, rot });
            cur = out;
        }
        let x = fresh(&mut t, VertexKind::In);
        t.edges.push(Edge { from: cur, to: Half { vertex: x, port: 0 }, rot: 0 });
        ends.push(x);
    }
    let mut in_order = vec![0; d.n()];
    for (i, x) in ends.into_iter().enumerate() {
        in_order[d.top[i]] = x;
    }
    t.in_order = in_order;
    Ok(t)
}
