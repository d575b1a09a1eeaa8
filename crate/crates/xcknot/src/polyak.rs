//! Finite-type layer: subdiagrams, the map I and its inverse, truncation, the pairing
//! with partially unsigned templates and the framing formula.

use std::collections::{BTreeMap, HashMap};
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use rand::Rng;

use crate::gauss::{sign_char, ChordId, Event, RandomShape, XCGaussDiagram};
use crate::moves::{apply_random, MoveKind};
use crate::parse::{content_lines, tokens, ParseError};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyakError {
    #[error("pairing is defined for one-strand diagrams, got {0} strands")]
    NotOneStrand(usize),
}

/// The subset lattice of a diagram's decorations: chords as listed, then diamonds in
/// reading order.
struct Lattice<'a> {
    d: &'a XCGaussDiagram,
    /// decoration index of every event, strand by strand
    dec: Vec<Vec<usize>>,
    size: usize,
}

impl<'a> Lattice<'a> {
    fn new(d: &'a XCGaussDiagram) -> Self {
        let mut next = d.chords.len();
        let dec = d
            .strands
            .iter()
            .map(|evs| {
                evs.iter()
                    .map(|e| match e.chord() {
                        Some(c) => d.chords.iter().position(|(x, _)| *x == c).expect("chord is listed"),
                        None => {
                            next += 1;
                            next - 1
                        }
                    })
                    .collect()
            })
            .collect();
        assert!(next < 63, "too many decorations to enumerate subsets");
        Lattice { d, dec, size: next }
    }

    fn masks(&self) -> std::ops::Range<u64> {
        0..1u64 << self.size
    }

    fn induced(&self, mask: u64) -> XCGaussDiagram {
        let strands = self
            .d
            .strands
            .iter()
            .zip(&self.dec)
            .map(|(evs, dec)| evs.iter().zip(dec).filter(|(_, i)| mask >> **i & 1 == 1).map(|(e, _)| *e).collect())
            .collect();
        let chords = self.d.chords.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, c)| *c).collect();
        XCGaussDiagram { top: self.d.top.clone(), chords, strands }
    }
}

/// Every induced subdiagram, one per subset of decorations (chords as listed, then
/// diamonds in reading order), in subset-bitmask order.
pub fn subdiagrams(d: &XCGaussDiagram) -> impl Iterator<Item = XCGaussDiagram> + '_ {
    let lat = Lattice::new(d);
    lat.masks().map(move |mask| lat.induced(mask))
}

/// A finitely supported integer combination of diagrams, keyed canonically.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FormalDiagramSum {
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl FormalDiagramSum {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn single(d: &XCGaussDiagram) -> Self {
        let mut s = Self::zero();
        s.add_term(BigInt::one(), d);
        s
    }

    pub fn add_term(&mut self, coef: BigInt, d: &XCGaussDiagram) {
        self.add_coded(&d.canonical_code(), &coef);
    }

    fn add_coded(&mut self, code: &[u32], coef: &BigInt) {
        if coef.is_zero() {
            return;
        }
        match self.terms.get_mut(code) {
            Some(c) => {
                *c += coef;
                if c.is_zero() {
                    self.terms.remove(code);
                }
            }
            None => {
                self.terms.insert(code.to_vec(), coef.clone());
            }
        }
    }

    pub fn add(&self, other: &FormalDiagramSum) -> FormalDiagramSum {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.add_coded(k, c);
        }
        out
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, d: &XCGaussDiagram) -> BigInt {
        self.terms.get(&d.canonical_code()).cloned().unwrap_or_default()
    }

    /// `(coefficient, representative)` in a fixed order.
    pub fn iter(&self) -> impl Iterator<Item = (&BigInt, XCGaussDiagram)> + '_ {
        self.terms.iter().map(|(k, c)| (c, XCGaussDiagram::from_canonical_code(k).expect("well-formed code")))
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.iter().map(|(_, d)| d.decoration_count()).max()
    }
}

impl fmt::Display for FormalDiagramSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (c, d) in self.iter() {
            writeln!(f, "{c} [{}]", d.canonical_key())?;
        }
        Ok(())
    }
}

/// `I(d)`: the sum of all subdiagrams.
pub fn map_i(d: &XCGaussDiagram) -> FormalDiagramSum {
    let code = d.canonical_code();
    expand([(&code[..], &BigInt::one())], false)
}

/// Linear extension of `I` to sums.
pub fn map_i_sum(s: &FormalDiagramSum) -> FormalDiagramSum {
    expand(s.terms.iter().map(|(k, c)| (&k[..], c)), false)
}

/// Inclusion-exclusion inverse: `d -> sum (-1)^(|d| - |S|) sub(d, S)`, extended linearly.
pub fn map_i_inverse(s: &FormalDiagramSum) -> FormalDiagramSum {
    expand(s.terms.iter().map(|(k, c)| (&k[..], c)), true)
}

/// Canonical code of a diagram read as its subset lattice. Decorations are the chords
/// (numbered as in the code) followed by the diamonds in reading order.
struct CodeLattice<'a> {
    code: &'a [u32],
    chords: usize,
    size: usize,
}

impl<'a> CodeLattice<'a> {
    fn new(code: &'a [u32]) -> Self {
        let n = code[0] as usize;
        let mut at = 1 + n;
        let mut diamonds = 0;
        for _ in 0..n {
            let len = code[at] as usize;
            diamonds += code[at + 1..at + 1 + len].iter().filter(|x| **x < 4).count();
            at += 1 + len;
        }
        let chords = code.len() - at;
        assert!(chords + diamonds < 63, "too many decorations to enumerate subsets");
        CodeLattice { code, chords, size: chords + diamonds }
    }

    /// Appends the code of the subdiagram selected by `mask`; `renum` is scratch space.
    fn push_sub(&self, mask: u64, out: &mut Vec<u32>, renum: &mut Vec<u32>) {
        let code = self.code;
        let n = code[0] as usize;
        renum.clear();
        renum.resize(self.chords, 0);
        let mut seen = 0;
        let mut diamond = self.chords;
        out.extend_from_slice(&code[..1 + n]);
        let mut at = 1 + n;
        for _ in 0..n {
            let len = code[at] as usize;
            let slot = out.len();
            out.push(0);
            for &x in &code[at + 1..at + 1 + len] {
                if x < 4 {
                    if mask >> diamond & 1 == 1 {
                        out.push(x);
                    }
                    diamond += 1;
                    continue;
                }
                let c = (x / 4) as usize - 1;
                if mask >> c & 1 == 0 {
                    continue;
                }
                if renum[c] == 0 {
                    seen += 1;
                    renum[c] = seen;
                }
                out.push(4 * renum[c] + (x & 1));
            }
            out[slot] = (out.len() - slot - 1) as u32;
            at += 1 + len;
        }
        // chords of an invalid diagram may have no endpoints
        for (c, r) in renum.iter_mut().enumerate() {
            if mask >> c & 1 == 1 && *r == 0 {
                seen += 1;
                *r = seen;
            }
        }
        let base = out.len();
        out.resize(base + seen as usize, 0);
        for (c, r) in renum.iter().enumerate() {
            if *r > 0 {
                out[base + *r as usize - 1] = code[at + c];
            }
        }
    }
}

/// Sum over all terms and all subsets, with signs `(-1)^(|d| - |S|)` when `alternate`.
/// Codes go into one buffer and are sorted, so equal classes merge without a map.
fn expand<'a>(terms: impl IntoIterator<Item = (&'a [u32], &'a BigInt)>, alternate: bool) -> FormalDiagramSum {
    let terms: Vec<(CodeLattice, &BigInt)> = terms.into_iter().map(|(k, c)| (CodeLattice::new(k), c)).collect();
    let count: usize = terms.iter().map(|(l, _)| 1usize << l.size).sum();
    let width = terms.iter().map(|(l, _)| l.code.len()).max().unwrap_or(0);
    let mut arena = Vec::with_capacity(count * width);
    let mut renum = Vec::new();
    // (start, end, term, negated)
    let mut items: Vec<(usize, usize, usize, bool)> = Vec::with_capacity(count);
    for (t, (lat, _)) in terms.iter().enumerate() {
        for mask in 0..1u64 << lat.size {
            let start = arena.len();
            lat.push_sub(mask, &mut arena, &mut renum);
            let neg = alternate && (lat.size as u32 - mask.count_ones()) % 2 == 1;
            items.push((start, arena.len(), t, neg));
        }
    }
    let key = |x: &(usize, usize, usize, bool)| &arena[x.0..x.1];
    items.sort_unstable_by(|a, b| key(a).cmp(key(b)));
    let small: Option<Vec<i64>> = terms.iter().map(|(_, c)| c.to_i64()).collect();
    let mut out = Vec::new();
    for run in items.chunk_by(|a, b| key(a) == key(b)) {
        let coef = match &small {
            Some(v) => BigInt::from(
                run.iter().map(|&(.., t, neg)| if neg { -(v[t] as i128) } else { v[t] as i128 }).sum::<i128>(),
            ),
            None => run.iter().fold(
                BigInt::zero(),
                |acc, &(.., t, neg)| {
                    if neg {
                        acc - terms[t].1
                    } else {
                        acc + terms[t].1
                    }
                },
            ),
        };
        if !coef.is_zero() {
            out.push((key(&run[0]).to_vec(), coef));
        }
    }
    FormalDiagramSum { terms: out.into_iter().collect() }
}

/// Keeps only diagrams with fewer than `n` decorations.
pub fn truncate_degree(s: &FormalDiagramSum, n: usize) -> FormalDiagramSum {
    let mut out = FormalDiagramSum::zero();
    for (c, d) in s.iter() {
        if d.decoration_count() < n {
            out.add_term(c.clone(), &d);
        }
    }
    out
}

/// Template event; `None` signs are unsigned slots.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TemplateEvent {
    Over(ChordId),
    Under(ChordId),
    Diamond(Option<i8>),
}

/// `coef * template` where the template is a one-strand diagram with possibly unsigned
/// chords and diamonds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaTerm {
    pub coef: BigInt,
    pub events: Vec<TemplateEvent>,
    pub chord_signs: Vec<(ChordId, Option<i8>)>,
}

impl FormulaTerm {
    /// Parses one line: an integer coefficient followed by template tokens `O<id><s>`,
    /// `U<id>`, `D<s>` with `s` one of `+`, `-`, `?`.
    pub fn parse_line(line: &str, ln: usize) -> Result<FormulaTerm, ParseError> {
        let toks = tokens(line);
        let (c0, coef) = toks.first().copied().ok_or_else(|| ParseError::new(ln, 1, "missing coefficient"))?;
        let coef: BigInt = coef.parse().map_err(|_| ParseError::new(ln, c0, "bad coefficient"))?;
        let mut events = Vec::new();
        let mut chord_signs: Vec<(ChordId, Option<i8>)> = Vec::new();
        let sign_of = |s: &str| match s {
            "+" => Some(Some(1)),
            "-" => Some(Some(-1)),
            "?" => Some(None),
            _ => None,
        };
        for &(c, tok) in &toks[1..] {
            let bad = || ParseError::new(ln, c, format!("unknown template token '{tok}'"));
            if !tok.is_ascii() || tok.len() < 2 {
                return Err(bad());
            }
            let (head, rest) = tok.split_at(1);
            match head {
                "D" => events.push(TemplateEvent::Diamond(sign_of(rest).ok_or_else(bad)?)),
                "O" => {
                    let (id, s) = rest.split_at(rest.len() - 1);
                    let id: ChordId = id.parse().map_err(|_| bad())?;
                    if chord_signs.iter().any(|(x, _)| *x == id) {
                        return Err(ParseError::new(ln, c, format!("duplicate over endpoint of chord {id}")));
                    }
                    chord_signs.push((id, sign_of(s).ok_or_else(bad)?));
                    events.push(TemplateEvent::Over(id));
                }
                "U" => events.push(TemplateEvent::Under(rest.parse().map_err(|_| bad())?)),
                _ => return Err(bad()),
            }
        }
        for &(c, tok) in &toks[1..] {
            if let Some(id) = tok.strip_prefix('U').and_then(|r| r.parse::<ChordId>().ok()) {
                let unders = events.iter().filter(|e| **e == TemplateEvent::Under(id)).count();
                if !chord_signs.iter().any(|(x, _)| *x == id) || unders != 1 {
                    return Err(ParseError::new(ln, c, format!("dangling chord end {id}")));
                }
            }
        }
        for (id, _) in &chord_signs {
            if !events.contains(&TemplateEvent::Under(*id)) {
                return Err(ParseError::new(ln, 1, format!("dangling chord end {id}")));
            }
        }
        Ok(FormulaTerm { coef, events, chord_signs })
    }

    fn sign(&self, c: ChordId) -> Option<i8> {
        self.chord_signs.iter().find(|(x, _)| *x == c).and_then(|(_, s)| *s)
    }
}

impl fmt::Display for FormulaTerm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = |s: Option<i8>| s.map(sign_char).unwrap_or('?');
        write!(f, "{}", self.coef)?;
        for e in &self.events {
            match *e {
                TemplateEvent::Over(c) => write!(f, " O{c}{}", s(self.sign(c)))?,
                TemplateEvent::Under(c) => write!(f, " U{c}")?,
                TemplateEvent::Diamond(x) => write!(f, " D{}", s(x))?,
            }
        }
        Ok(())
    }
}

/// Parses a formula file: one term per non-comment line.
pub fn parse_formula(text: &str) -> Result<Vec<FormulaTerm>, ParseError> {
    content_lines(text).map(|(ln, line)| FormulaTerm::parse_line(line, ln)).collect()
}

pub fn print_formula(terms: &[FormulaTerm]) -> String {
    terms.iter().map(|t| format!("{t}\n")).collect()
}

/// `<G, D>`: over every embedding of each template into `d` (as an induced subdiagram),
/// `coef` times the product of the signs matched to unsigned slots.
pub fn pairing(g: &[FormulaTerm], d: &XCGaussDiagram) -> Result<BigInt, PolyakError> {
    if d.n() != 1 {
        return Err(PolyakError::NotOneStrand(d.n()));
    }
    let signs = d.chord_signs();
    let mut total = BigInt::zero();
    for t in g {
        let mut bind: HashMap<ChordId, ChordId> = HashMap::new();
        let w = embed(t, &d.strands[0], &signs, 0, 0, &mut bind);
        total += &t.coef * w;
    }
    Ok(total)
}

fn embed(
    t: &FormulaTerm,
    evs: &[Event],
    signs: &HashMap<ChordId, i8>,
    ti: usize,
    start: usize,
    bind: &mut HashMap<ChordId, ChordId>,
) -> BigInt {
    if ti == t.events.len() {
        return BigInt::one();
    }
    let mut acc = BigInt::zero();
    for p in start..evs.len() {
        match (t.events[ti], evs[p]) {
            (TemplateEvent::Diamond(want), Event::Diamond(s)) => match want {
                Some(w) if w != s => {}
                Some(_) => acc += embed(t, evs, signs, ti + 1, p + 1, bind),
                None => acc += embed(t, evs, signs, ti + 1, p + 1, bind) * s as i64,
            },
            (TemplateEvent::Over(tc), Event::Over(c)) | (TemplateEvent::Under(tc), Event::Under(c)) => {
                // the first endpoint seen binds the template chord, the second must agree
                match bind.get(&tc) {
                    Some(&b) if b == c => acc += embed(t, evs, signs, ti + 1, p + 1, bind),
                    Some(_) => {}
                    None => {
                        if bind.values().any(|v| *v == c) {
                            continue;
                        }
                        let s = signs[&c];
                        let factor = match t.sign(tc) {
                            Some(w) if w != s => continue,
                            Some(_) => 1,
                            None => s as i64,
                        };
                        bind.insert(tc, c);
                        acc += embed(t, evs, signs, ti + 1, p + 1, bind) * factor;
                        bind.remove(&tc);
                    }
                }
            }
            _ => {}
        }
    }
    acc
}

/// The framing formula `<2 C_uf - D, d>`: twice the signed count of under-first chords
/// minus the signed count of diamonds.
pub const FRAMING_FORMULA: &str = "2 U1 O1?\n-1 D?\n";

pub fn framing_terms() -> Vec<FormulaTerm> {
    parse_formula(FRAMING_FORMULA).expect("framing formula parses")
}

pub fn framing_formula(d: &XCGaussDiagram) -> Result<BigInt, PolyakError> {
    pairing(&framing_terms(), d)
}

/// Outcome of a randomized invariance check of a formula.
#[derive(Debug, Clone, Default)]
pub struct InvarianceReport {
    pub pairs: usize,
    pub failures: Vec<InvarianceFailure>,
}

#[derive(Debug, Clone)]
pub struct InvarianceFailure {
    pub before: XCGaussDiagram,
    pub after: XCGaussDiagram,
    pub site: String,
    pub values: (BigInt, BigInt),
}

impl InvarianceReport {
    pub fn invariant(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Evaluates `<g, .>` on random one-strand diagrams before and after a random move.
pub fn check_formula_invariance<R: Rng>(g: &[FormulaTerm], samples: usize, rng: &mut R) -> InvarianceReport {
    let shape = RandomShape { min_strands: 1, max_strands: 1, max_chords: 4, max_diamonds: 4, permute: false };
    let mut rep = InvarianceReport::default();
    while rep.pairs < samples {
        let d = XCGaussDiagram::random(rng, &shape);
        let Some((site, e)) = apply_random(&d, &MoveKind::ALL, rng) else {
            continue;
        };
        let a = pairing(g, &d).expect("one strand");
        let b = pairing(g, &e).expect("one strand");
        rep.pairs += 1;
        if a != b {
            rep.failures.push(InvarianceFailure { before: d, after: e, site: site.to_string(), values: (a, b) });
        }
    }
    rep
}
