//! XC-Gauss diagrams: ordered strands carrying chord endpoints and signed diamonds.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::parse::{content_lines, split_key, tokens, ParseError};

pub type ChordId = u32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Event {
    Over(ChordId),
    Under(ChordId),
    /// A unit rotation marking, sign +1 or -1.
    Diamond(i8),
}

impl Event {
    pub fn chord(&self) -> Option<ChordId> {
        match self {
            Event::Over(c) | Event::Under(c) => Some(*c),
            Event::Diamond(_) => None,
        }
    }

    fn renumber(&self, map: &HashMap<ChordId, ChordId>) -> Event {
        match *self {
            Event::Over(c) => Event::Over(map[&c]),
            Event::Under(c) => Event::Under(map[&c]),
            e => e,
        }
    }
}

impl fmt::Display for Event {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Event::Over(c) => write!(f, "O{c}"),
            Event::Under(c) => write!(f, "U{c}"),
            Event::Diamond(s) => write!(f, "D{}", sign_char(*s)),
        }
    }
}

pub(crate) fn sign_char(s: i8) -> char {
    if s > 0 {
        '+'
    } else {
        '-'
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GaussError {
    #[error("top has length {0} but there are {1} strands")]
    TopLength(usize, usize),
    #[error("top is not a bijection")]
    TopNotBijection,
    #[error("chord {0} listed twice")]
    DuplicateChord(ChordId),
    #[error("sign {1} of {0} is not +1 or -1")]
    BadSign(String, i8),
    #[error("duplicate over endpoint of chord {0}")]
    DuplicateOver(ChordId),
    #[error("duplicate under endpoint of chord {0}")]
    DuplicateUnder(ChordId),
    #[error("dangling chord end: chord {0} has no over endpoint")]
    MissingOver(ChordId),
    #[error("dangling chord end: chord {0} has no under endpoint")]
    MissingUnder(ChordId),
    #[error("endpoint of unlisted chord {0}")]
    UnknownChord(ChordId),
    #[error("strand count mismatch: {0} vs {1}")]
    StrandCountMismatch(usize, usize),
    #[error("parts sum to {0} but there are {1} strands")]
    PartsMismatch(usize, usize),
}

/// A diagram on `n` upward strands indexed by bottom position.
///
/// `top[i]` is the (0-based) top position of strand `i`; the text format is 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct XCGaussDiagram {
    pub top: Vec<usize>,
    pub chords: Vec<(ChordId, i8)>,
    pub strands: Vec<Vec<Event>>,
}

/// Chord-renumbering-invariant serialization of a diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CanonicalKey(pub String);

impl fmt::Display for CanonicalKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Location of an event: (strand, index).
pub type Pos = (usize, usize);

impl XCGaussDiagram {
    pub fn identity(n: usize) -> Self {
        XCGaussDiagram { top: (0..n).collect(), chords: Vec::new(), strands: vec![Vec::new(); n] }
    }

    pub fn braiding(n: usize, m: usize) -> Self {
        let k = n + m;
        XCGaussDiagram { top: (0..k).map(|i| (i + m) % k).collect(), chords: Vec::new(), strands: vec![Vec::new(); k] }
    }

    /// Single-strand diagram with the given events; chords inferred with the given signs.
    pub fn one_strand(events: Vec<Event>, signs: &[(ChordId, i8)]) -> Self {
        XCGaussDiagram { top: vec![0], chords: signs.to_vec(), strands: vec![events] }
    }

    pub fn n(&self) -> usize {
        self.strands.len()
    }

    pub fn validate(&self) -> Result<(), GaussError> {
        let n = self.n();
        if self.top.len() != n {
            return Err(GaussError::TopLength(self.top.len(), n));
        }
        let mut seen = vec![false; n];
        for &t in &self.top {
            if t >= n || seen[t] {
                return Err(GaussError::TopNotBijection);
            }
            seen[t] = true;
        }
        let mut listed = BTreeMap::new();
        for &(c, s) in &self.chords {
            if s != 1 && s != -1 {
                return Err(GaussError::BadSign(format!("chord {c}"), s));
            }
            if listed.insert(c, (false, false)).is_some() {
                return Err(GaussError::DuplicateChord(c));
            }
        }
        for ev in self.strands.iter().flatten() {
            match *ev {
                Event::Over(c) => {
                    let e = listed.get_mut(&c).ok_or(GaussError::UnknownChord(c))?;
                    if e.0 {
                        return Err(GaussError::DuplicateOver(c));
                    }
                    e.0 = true;
                }
                Event::Under(c) => {
                    let e = listed.get_mut(&c).ok_or(GaussError::UnknownChord(c))?;
                    if e.1 {
                        return Err(GaussError::DuplicateUnder(c));
                    }
                    e.1 = true;
                }
                Event::Diamond(s) => {
                    if s != 1 && s != -1 {
                        return Err(GaussError::BadSign("diamond".into(), s));
                    }
                }
            }
        }
        for (c, (o, u)) in listed {
            if !o {
                return Err(GaussError::MissingOver(c));
            }
            if !u {
                return Err(GaussError::MissingUnder(c));
            }
        }
        Ok(())
    }

    pub fn is_pure(&self) -> bool {
        self.top.iter().enumerate().all(|(i, &t)| i == t)
    }

    pub fn chord_signs(&self) -> HashMap<ChordId, i8> {
        self.chords.iter().copied().collect()
    }

    pub fn sign_of(&self, c: ChordId) -> Option<i8> {
        self.chords.iter().find(|(id, _)| *id == c).map(|(_, s)| *s)
    }

    /// Over and under endpoint locations per chord.
    pub fn endpoints(&self) -> HashMap<ChordId, (Pos, Pos)> {
        let mut over = HashMap::new();
        let mut under = HashMap::new();
        for (s, evs) in self.strands.iter().enumerate() {
            for (i, ev) in evs.iter().enumerate() {
                match ev {
                    Event::Over(c) => {
                        over.insert(*c, (s, i));
                    }
                    Event::Under(c) => {
                        under.insert(*c, (s, i));
                    }
                    Event::Diamond(_) => {}
                }
            }
        }
        over.into_iter().filter_map(|(c, o)| under.get(&c).map(|u| (c, (o, *u)))).collect()
    }

    pub fn max_chord_id(&self) -> ChordId {
        self.chords.iter().map(|c| c.0).max().unwrap_or(0)
    }

    pub fn diamond_count(&self) -> usize {
        self.strands.iter().flatten().filter(|e| matches!(e, Event::Diamond(_))).count()
    }

    /// Chords plus diamonds.
    pub fn decoration_count(&self) -> usize {
        self.chords.len() + self.diamond_count()
    }

    pub fn compose(d2: &XCGaussDiagram, d1: &XCGaussDiagram) -> Result<XCGaussDiagram, GaussError> {
        if d1.n() != d2.n() {
            return Err(GaussError::StrandCountMismatch(d2.n(), d1.n()));
        }
        let shift = d1.max_chord_id();
        let d2 = d2.shifted(shift);
        let mut chords = d1.chords.clone();
        chords.extend(d2.chords.iter().copied());
        let strands = (0..d1.n())
            .map(|i| {
                let mut evs = d1.strands[i].clone();
                evs.extend(d2.strands[d1.top[i]].iter().copied());
                evs
            })
            .collect();
        let top = (0..d1.n()).map(|i| d2.top[d1.top[i]]).collect();
        Ok(XCGaussDiagram { top, chords, strands })
    }

    pub fn tensor(d1: &XCGaussDiagram, d2: &XCGaussDiagram) -> XCGaussDiagram {
        let shift = d1.max_chord_id();
        let d2 = d2.shifted(shift);
        let n1 = d1.n();
        let mut out = d1.clone();
        out.chords.extend(d2.chords.iter().copied());
        out.strands.extend(d2.strands.iter().cloned());
        out.top.extend(d2.top.iter().map(|t| t + n1));
        out
    }

    fn shifted(&self, by: ChordId) -> XCGaussDiagram {
        let map: HashMap<_, _> = self.chords.iter().map(|(c, _)| (*c, c + by)).collect();
        self.with_renumbering(&map)
    }

    fn with_renumbering(&self, map: &HashMap<ChordId, ChordId>) -> XCGaussDiagram {
        let mut chords: Vec<_> = self.chords.iter().map(|(c, s)| (map[c], *s)).collect();
        chords.sort();
        XCGaussDiagram {
            top: self.top.clone(),
            chords,
            strands: self.strands.iter().map(|evs| evs.iter().map(|e| e.renumber(map)).collect()).collect(),
        }
    }

    /// Chords renumbered 1, 2, ... by first occurrence in strand-major reading order.
    pub fn renumbered(&self) -> XCGaussDiagram {
        let mut map = HashMap::new();
        for c in self.strands.iter().flatten().filter_map(Event::chord) {
            let next = map.len() as ChordId + 1;
            map.entry(c).or_insert(next);
        }
        // chords without endpoints only occur in invalid diagrams; keep them after the others
        for (c, _) in &self.chords {
            let next = map.len() as ChordId + 1;
            map.entry(*c).or_insert(next);
        }
        self.with_renumbering(&map)
    }

    /// A compact code with the same equality as [`canonical_key`](Self::canonical_key).
    pub fn canonical_code(&self) -> Vec<u32> {
        let mut map: Vec<(ChordId, u32)> = Vec::with_capacity(self.chords.len());
        let mut out = Vec::with_capacity(2 + self.n() * 2 + self.chords.len() * 3);
        out.push(self.n() as u32);
        out.extend(self.top.iter().map(|t| *t as u32));
        for evs in &self.strands {
            out.push(evs.len() as u32);
            for e in evs {
                out.push(match *e {
                    Event::Diamond(s) => 2 + (s < 0) as u32,
                    Event::Over(c) | Event::Under(c) => {
                        let k = match map.iter().find(|m| m.0 == c) {
                            Some(m) => m.1,
                            None => {
                                map.push((c, map.len() as u32 + 1));
                                map.len() as u32
                            }
                        };
                        4 * k + matches!(e, Event::Under(_)) as u32
                    }
                });
            }
        }
        let mut signs = vec![0; self.chords.len()];
        for (c, s) in &self.chords {
            let k = match map.iter().find(|m| m.0 == *c) {
                Some(m) => m.1,
                None => {
                    map.push((*c, map.len() as u32 + 1));
                    map.len() as u32
                }
            };
            signs[k as usize - 1] = (*s < 0) as u32;
        }
        out.extend(signs);
        out
    }

    /// Inverse of [`canonical_code`](Self::canonical_code) up to renumbering: returns the
    /// renumbered diagram, or `None` for a malformed code.
    pub fn from_canonical_code(code: &[u32]) -> Option<XCGaussDiagram> {
        let mut it = code.iter().map(|x| *x as usize);
        let n = it.next()?;
        let top = (0..n).map(|_| it.next()).collect::<Option<Vec<_>>>()?;
        let mut strands = Vec::with_capacity(n);
        for _ in 0..n {
            let len = it.next()?;
            let evs = (0..len)
                .map(|_| {
                    it.next().map(|x| match x {
                        2 => Event::Diamond(1),
                        3 => Event::Diamond(-1),
                        _ if x % 4 == 0 => Event::Over((x / 4) as ChordId),
                        _ => Event::Under((x / 4) as ChordId),
                    })
                })
                .collect::<Option<Vec<_>>>()?;
            strands.push(evs);
        }
        let chords = it.enumerate().map(|(i, neg)| (i as ChordId + 1, if neg == 1 { -1 } else { 1 })).collect();
        Some(XCGaussDiagram { top, chords, strands })
    }

    /// The text of [`renumbered`](Self::renumbered) on one line. Written directly since
    /// the subdiagram calculus computes millions of these.
    pub fn canonical_key(&self) -> CanonicalKey {
        use std::fmt::Write;
        let mut map: Vec<(ChordId, ChordId)> = Vec::with_capacity(self.chords.len());
        let lookup = |map: &mut Vec<(ChordId, ChordId)>, c: ChordId| match map.iter().find(|m| m.0 == c) {
            Some(m) => m.1,
            None => {
                let next = map.len() as ChordId + 1;
                map.push((c, next));
                next
            }
        };
        let mut body = String::with_capacity(16 * self.strands.len() + 4 * self.chords.len());
        for (i, evs) in self.strands.iter().enumerate() {
            let _ = write!(body, "; strand {}:", i + 1);
            for e in evs {
                let _ = match *e {
                    Event::Over(c) => write!(body, " O{}", lookup(&mut map, c)),
                    Event::Under(c) => write!(body, " U{}", lookup(&mut map, c)),
                    Event::Diamond(s) => write!(body, " D{}", sign_char(s)),
                };
            }
        }
        for (c, _) in &self.chords {
            lookup(&mut map, *c);
        }
        let mut signs: Vec<(ChordId, i8)> =
            self.chords.iter().map(|(c, s)| (map.iter().find(|m| m.0 == *c).unwrap().1, *s)).collect();
        signs.sort_unstable();
        let mut out = String::with_capacity(body.len() + 32);
        let _ = write!(out, "strands: {}; top:", self.n());
        for t in &self.top {
            let _ = write!(out, " {}", t + 1);
        }
        out.push_str("; chords:");
        for (c, s) in signs {
            let _ = write!(out, " {c}:{}", sign_char(s));
        }
        out.push_str(&body);
        CanonicalKey(out)
    }

    /// Concatenates consecutive blocks of strands: within a block `s_1..s_k` the merged
    /// strand runs `s_k` first and `s_1` last. A part of size 0 inserts an identity strand.
    pub fn merge(&self, parts: &[usize]) -> Result<XCGaussDiagram, GaussError> {
        let total: usize = parts.iter().sum();
        if total != self.n() {
            return Err(GaussError::PartsMismatch(total, self.n()));
        }
        let mut strands = Vec::new();
        // sort key for each new strand's end: (old top position, tie)
        let mut keys = Vec::new();
        let mut start = 0;
        let mut last_key = (-1i64, 0usize);
        for &k in parts {
            let block: Vec<usize> = (start..start + k).collect();
            start += k;
            let mut evs = Vec::new();
            for &s in block.iter().rev() {
                evs.extend(self.strands[s].iter().copied());
            }
            strands.push(evs);
            let key = match block.first() {
                Some(&s1) => (self.top[s1] as i64, 0),
                None => (last_key.0, last_key.1 + 1),
            };
            last_key = key;
            keys.push(key);
        }
        let mut order: Vec<usize> = (0..keys.len()).collect();
        order.sort_by_key(|&i| (keys[i], i));
        let mut top = vec![0; keys.len()];
        for (pos, &i) in order.iter().enumerate() {
            top[i] = pos;
        }
        Ok(XCGaussDiagram { top, chords: self.chords.clone(), strands })
    }

    pub fn parse(text: &str) -> Result<XCGaussDiagram, ParseError> {
        let mut n: Option<usize> = None;
        let mut top: Option<Vec<usize>> = None;
        let mut chords: Option<Vec<(ChordId, i8)>> = None;
        let mut strands: BTreeMap<usize, Vec<Event>> = BTreeMap::new();
        for (ln, line) in content_lines(text) {
            let (key, rest, off) = split_key(line).ok_or_else(|| ParseError::new(ln, 1, "expected 'key: value'"))?;
            match key {
                "strands" => {
                    if n.is_some() {
                        return Err(ParseError::new(ln, 1, "duplicate 'strands' line"));
                    }
                    let t = tokens(rest);
                    if t.len() != 1 {
                        return Err(ParseError::new(ln, off, "expected one strand count"));
                    }
                    n = Some(t[0].1.parse().map_err(|_| ParseError::new(ln, off + t[0].0 - 1, "bad strand count"))?);
                }
                "top" => {
                    if top.is_some() {
                        return Err(ParseError::new(ln, 1, "duplicate 'top' line"));
                    }
                    let mut v = Vec::new();
                    for (c, tok) in tokens(rest) {
                        let p: usize = tok.parse().map_err(|_| ParseError::new(ln, off + c - 1, "bad top entry"))?;
                        if p == 0 {
                            return Err(ParseError::new(ln, off + c - 1, "top entries are 1-based"));
                        }
                        v.push(p - 1);
                    }
                    top = Some(v);
                }
                "chords" => {
                    if chords.is_some() {
                        return Err(ParseError::new(ln, 1, "duplicate 'chords' line"));
                    }
                    let mut v = Vec::new();
                    for (c, tok) in tokens(rest) {
                        let bad = || ParseError::new(ln, off + c - 1, format!("bad chord '{tok}'"));
                        let (id, s) = tok.split_once(':').ok_or_else(bad)?;
                        let id: ChordId = id.parse().map_err(|_| bad())?;
                        let s = match s {
                            "+" => 1,
                            "-" => -1,
                            _ => return Err(bad()),
                        };
                        v.push((id, s));
                    }
                    chords = Some(v);
                }
                k if k.starts_with("strand ") => {
                    let idx: usize =
                        k["strand ".len()..].trim().parse().map_err(|_| ParseError::new(ln, 8, "bad strand index"))?;
                    if idx == 0 {
                        return Err(ParseError::new(ln, 8, "strand indices are 1-based"));
                    }
                    let mut evs = Vec::new();
                    for (c, tok) in tokens(rest) {
                        evs.push(
                            parse_event(tok)
                                .ok_or_else(|| ParseError::new(ln, off + c - 1, format!("unknown token '{tok}'")))?,
                        );
                    }
                    if strands.insert(idx - 1, evs).is_some() {
                        return Err(ParseError::new(ln, 1, format!("duplicate line for strand {idx}")));
                    }
                }
                other => return Err(ParseError::new(ln, 1, format!("unknown key '{other}'"))),
            }
        }
        let n = n.ok_or_else(|| ParseError::new(1, 1, "missing 'strands' line"))?;
        if let Some((&i, _)) = strands.iter().find(|(&i, _)| i >= n) {
            return Err(ParseError::new(1, 1, format!("strand {} out of range", i + 1)));
        }
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(
                strands
                    .remove(&i)
                    .ok_or_else(|| ParseError::new(1, 1, format!("missing line for strand {}", i + 1)))?,
            );
        }
        Ok(XCGaussDiagram {
            top: top.unwrap_or_else(|| (0..n).collect()),
            chords: chords.unwrap_or_default(),
            strands: out,
        })
    }

    /// Random valid diagram (used by tests and the self-test).
    pub fn random<R: Rng>(rng: &mut R, shape: &RandomShape) -> XCGaussDiagram {
        let n = rng.gen_range(shape.min_strands..=shape.max_strands);
        let mut strands: Vec<Vec<Event>> = vec![Vec::new(); n];
        let mut chords = Vec::new();
        if n > 0 {
            let k = rng.gen_range(0..=shape.max_chords);
            for c in 1..=k as ChordId {
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                chords.push((c, s));
                for ev in [Event::Over(c), Event::Under(c)] {
                    let st = rng.gen_range(0..n);
                    let p = rng.gen_range(0..=strands[st].len());
                    strands[st].insert(p, ev);
                }
            }
            let m = rng.gen_range(0..=shape.max_diamonds);
            for _ in 0..m {
                let st = rng.gen_range(0..n);
                let p = rng.gen_range(0..=strands[st].len());
                strands[st].insert(p, Event::Diamond(if rng.gen_bool(0.5) { 1 } else { -1 }));
            }
        }
        let mut top: Vec<usize> = (0..n).collect();
        if shape.permute {
            top.shuffle(rng);
        }
        XCGaussDiagram { top, chords, strands }
    }
}

/// Size bounds for [`XCGaussDiagram::random`].
#[derive(Debug, Clone)]
pub struct RandomShape {
    pub min_strands: usize,
    pub max_strands: usize,
    pub max_chords: usize,
    pub max_diamonds: usize,
    pub permute: bool,
}

impl Default for RandomShape {
    fn default() -> Self {
        RandomShape { min_strands: 1, max_strands: 3, max_chords: 6, max_diamonds: 6, permute: true }
    }
}

pub(crate) fn parse_event(tok: &str) -> Option<Event> {
    match tok {
        "D+" => return Some(Event::Diamond(1)),
        "D-" => return Some(Event::Diamond(-1)),
        _ => {}
    }
    let (head, id) = tok.split_at(1.min(tok.len()));
    if id.is_empty() || !id.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let id: ChordId = id.parse().ok()?;
    match head {
        "O" => Some(Event::Over(id)),
        "U" => Some(Event::Under(id)),
        _ => None,
    }
}

impl fmt::Display for XCGaussDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "strands: {}", self.n())?;
        write!(f, "top:")?;
        for t in &self.top {
            write!(f, " {}", t + 1)?;
        }
        writeln!(f)?;
        write!(f, "chords:")?;
        let sorted: BTreeSet<_> = self.chords.iter().collect();
        for (c, s) in sorted {
            write!(f, " {c}:{}", sign_char(*s))?;
        }
        writeln!(f)?;
        for (i, evs) in self.strands.iter().enumerate() {
            write!(f, "strand {}:", i + 1)?;
            for e in evs {
                write!(f, " {e}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Event::*;

    fn kink() -> XCGaussDiagram {
        XCGaussDiagram::one_strand(vec![Over(1), Diamond(-1), Under(1)], &[(1, 1)])
    }

    #[test]
    fn validate_examples() {
        assert!(XCGaussDiagram::identity(2).validate().is_ok());
        assert!(kink().validate().is_ok());
        let bad = XCGaussDiagram::one_strand(vec![Over(1), Over(1)], &[(1, 1)]);
        assert_eq!(bad.validate(), Err(GaussError::DuplicateOver(1)));
        assert!(GaussError::DuplicateOver(1).to_string().contains("duplicate over endpoint"));
        let dangling = XCGaussDiagram::one_strand(vec![Over(1)], &[(1, 1)]);
        assert_eq!(dangling.validate(), Err(GaussError::MissingUnder(1)));
        let mut nb = XCGaussDiagram::identity(2);
        nb.top = vec![0, 0];
        assert_eq!(nb.validate(), Err(GaussError::TopNotBijection));
    }

    #[test]
    fn braiding_examples() {
        assert_eq!(XCGaussDiagram::braiding(0, 3), XCGaussDiagram::identity(3));
        assert_eq!(XCGaussDiagram::braiding(1, 1).top, vec![1, 0]);
        let c = XCGaussDiagram::compose(&XCGaussDiagram::braiding(2, 1), &XCGaussDiagram::braiding(1, 2)).unwrap();
        assert_eq!(c, XCGaussDiagram::identity(3));
        assert!(!XCGaussDiagram::braiding(1, 1).is_pure());
    }

    #[test]
    fn compose_concatenates() {
        let a = XCGaussDiagram::one_strand(vec![Over(1), Under(1)], &[(1, 1)]);
        let b = XCGaussDiagram::one_strand(vec![Under(4), Over(4)], &[(4, -1)]);
        let c = XCGaussDiagram::compose(&b, &a).unwrap();
        assert_eq!(c.strands[0], vec![Over(1), Under(1), Under(5), Over(5)]);
        assert_eq!(c.chords, vec![(1, 1), (5, -1)]);
        assert!(XCGaussDiagram::compose(&a, &XCGaussDiagram::identity(2)).is_err());
    }

    #[test]
    fn canonical_key_ignores_ids() {
        let a = kink();
        let b = XCGaussDiagram::one_strand(vec![Over(7), Diamond(-1), Under(7)], &[(7, 1)]);
        assert_eq!(a.canonical_key(), b.canonical_key());
        let r = XCGaussDiagram::one_strand(vec![Under(1), Diamond(1), Over(1)], &[(1, 1)]);
        assert_ne!(a.canonical_key(), r.canonical_key());
    }

    #[test]
    fn text_round_trip_and_errors() {
        let text = "strands: 2\ntop: 2 1\nchords: 1:+\nstrand 1: O1\nstrand 2: U1\n";
        let d = XCGaussDiagram::parse(text).unwrap();
        assert_eq!(d.to_string(), text);
        let shuffled = "strand 2: U1\nchords: 1:+\nstrands: 2\nstrand 1: O1\ntop: 2 1\n";
        assert_eq!(XCGaussDiagram::parse(shuffled).unwrap(), d);
        let e = XCGaussDiagram::parse("strands: 1\nstrand 1: O1 X2\n").unwrap_err();
        assert_eq!((e.line, e.col), (2, 14));
        assert!(XCGaussDiagram::parse("strands: 2\nstrand 1:\n").is_err());
    }

    #[test]
    fn merge_orders_blocks() {
        let d = XCGaussDiagram::parse("strands: 2\ntop: 2 1\nchords: 1:+\nstrand 1: O1\nstrand 2: U1\n").unwrap();
        let m = d.merge(&[2]).unwrap();
        assert_eq!(m.strands, vec![vec![Under(1), Over(1)]]);
        assert_eq!(d.merge(&[1, 1]).unwrap(), d);
        let e = XCGaussDiagram::identity(0).merge(&[0]).unwrap();
        assert_eq!(e, XCGaussDiagram::identity(1));
        let p = XCGaussDiagram::identity(2).merge(&[1, 0, 1]).unwrap();
        assert_eq!(p, XCGaussDiagram::identity(3));
    }
}
