//! XC-Reidemeister moves on XC-Gauss diagrams: a data-driven pattern table, site search,
//! rewriting, bounded orbits and the Z-based pattern validator.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gauss::{sign_char, CanonicalKey, ChordId, Event, GaussError, XCGaussDiagram};
use crate::invariant::{Evaluator, InvariantError};
use crate::parse::{content_lines, split_key, tokens, ParseError};
use crate::ring::Scalar;

const PATTERN_FILE: &str = include_str!("../data/patterns.xcp");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MoveKind {
    G0,
    G0r,
    G1f,
    G2,
    G2p,
    G3,
}

impl MoveKind {
    pub const ALL: [MoveKind; 6] =
        [MoveKind::G0, MoveKind::G0r, MoveKind::G1f, MoveKind::G2, MoveKind::G2p, MoveKind::G3];

    pub fn name(&self) -> &'static str {
        match self {
            MoveKind::G0 => "G0",
            MoveKind::G0r => "G0r",
            MoveKind::G1f => "G1f",
            MoveKind::G2 => "G2",
            MoveKind::G2p => "G2p",
            MoveKind::G3 => "G3",
        }
    }
}

impl fmt::Display for MoveKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MoveKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        MoveKind::ALL.into_iter().find(|k| k.name() == s).ok_or_else(|| format!("unknown move kind '{s}'"))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum MoveError {
    #[error("stale site: the diagram no longer matches the pattern at this site")]
    StaleSite,
    #[error("rewrite produced an invalid diagram: {0}")]
    Invalid(#[from] GaussError),
}

/// A sign that is fixed or a multiple of the pattern's sign variable `e`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SignExpr {
    Fixed(i8),
    Eps(i8),
}

impl SignExpr {
    pub fn eval(&self, eps: i8) -> i8 {
        match *self {
            SignExpr::Fixed(s) => s,
            SignExpr::Eps(k) => k * eps,
        }
    }

    fn parse(s: &str) -> Option<SignExpr> {
        match s {
            "+" => Some(SignExpr::Fixed(1)),
            "-" => Some(SignExpr::Fixed(-1)),
            "e" => Some(SignExpr::Eps(1)),
            "-e" => Some(SignExpr::Eps(-1)),
            _ => None,
        }
    }
}

impl fmt::Display for SignExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            SignExpr::Fixed(s) => write!(f, "{}", sign_char(s)),
            SignExpr::Eps(1) => write!(f, "e"),
            SignExpr::Eps(_) => write!(f, "-e"),
        }
    }
}

/// A pattern event; chord variables are indices into `MovePattern::chord_names`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PatEvent {
    Over(usize),
    Under(usize),
    Diamond(SignExpr),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    LeftToRight,
    RightToLeft,
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Direction::LeftToRight => "->",
            Direction::RightToLeft => "<-",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MovePattern {
    pub kind: MoveKind,
    pub variant: Option<String>,
    pub chord_names: Vec<String>,
    pub chord_signs: Vec<SignExpr>,
    pub left: Vec<Vec<PatEvent>>,
    pub right: Vec<Vec<PatEvent>>,
}

impl MovePattern {
    pub fn name(&self) -> String {
        match &self.variant {
            Some(v) => format!("{} {v}", self.kind),
            None => self.kind.to_string(),
        }
    }

    pub fn uses_eps(&self) -> bool {
        let in_side =
            |side: &Vec<Vec<PatEvent>>| side.iter().flatten().any(|e| matches!(e, PatEvent::Diamond(SignExpr::Eps(_))));
        self.chord_signs.iter().any(|s| matches!(s, SignExpr::Eps(_))) || in_side(&self.left) || in_side(&self.right)
    }

    pub fn side(&self, dir: Direction) -> &[Vec<PatEvent>] {
        match dir {
            Direction::LeftToRight => &self.left,
            Direction::RightToLeft => &self.right,
        }
    }

    pub fn target(&self, dir: Direction) -> &[Vec<PatEvent>] {
        match dir {
            Direction::LeftToRight => &self.right,
            Direction::RightToLeft => &self.left,
        }
    }

    fn vars_on(side: &[Vec<PatEvent>]) -> HashSet<usize> {
        side.iter()
            .flatten()
            .filter_map(|e| match e {
                PatEvent::Over(v) | PatEvent::Under(v) => Some(*v),
                PatEvent::Diamond(_) => None,
            })
            .collect()
    }

    fn fmt_side(&self, side: &[Vec<PatEvent>]) -> String {
        side.iter()
            .map(|frag| {
                frag.iter()
                    .map(|e| match e {
                        PatEvent::Over(v) => format!("O{}", self.chord_names[*v]),
                        PatEvent::Under(v) => format!("U{}", self.chord_names[*v]),
                        PatEvent::Diamond(s) => format!("D{s}"),
                    })
                    .collect::<Vec<_>>()
                    .join(" ")
            })
            .collect::<Vec<_>>()
            .join(" | ")
    }

    /// Each chord variable used on a side must occur there once as O and once as U.
    fn check_shape(&self) -> Result<(), String> {
        if self.left.len() != self.right.len() {
            return Err("left and right have different fragment counts".into());
        }
        for side in [&self.left, &self.right] {
            let mut count: HashMap<(usize, bool), usize> = HashMap::new();
            for e in side.iter().flatten() {
                match e {
                    PatEvent::Over(v) => *count.entry((*v, true)).or_default() += 1,
                    PatEvent::Under(v) => *count.entry((*v, false)).or_default() += 1,
                    PatEvent::Diamond(_) => {}
                }
            }
            for v in Self::vars_on(side) {
                if count.get(&(v, true)) != Some(&1) || count.get(&(v, false)) != Some(&1) {
                    return Err(format!("chord {} needs exactly one O and one U per side", self.chord_names[v]));
                }
            }
        }
        Ok(())
    }
}

impl fmt::Display for MovePattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "pattern {}", self.name())?;
        if !self.chord_names.is_empty() {
            write!(f, "chords:")?;
            for (n, s) in self.chord_names.iter().zip(&self.chord_signs) {
                write!(f, " {n}:{s}")?;
            }
            writeln!(f)?;
        }
        writeln!(f, "left:  {}", self.fmt_side(&self.left))?;
        writeln!(f, "right: {}", self.fmt_side(&self.right))
    }
}

/// Parses a pattern table.
pub fn parse_patterns(text: &str) -> Result<Vec<MovePattern>, ParseError> {
    struct Partial {
        line: usize,
        kind: MoveKind,
        variant: Option<String>,
        chords: Vec<(String, SignExpr)>,
        left: Option<Vec<Vec<PatEvent>>>,
        right: Option<Vec<Vec<PatEvent>>>,
    }
    fn finish(p: Partial) -> Result<MovePattern, ParseError> {
        let (names, signs): (Vec<_>, Vec<_>) = p.chords.into_iter().unzip();
        let pat = MovePattern {
            kind: p.kind,
            variant: p.variant,
            chord_names: names,
            chord_signs: signs,
            left: p.left.ok_or_else(|| ParseError::new(p.line, 1, "pattern has no 'left' line"))?,
            right: p.right.ok_or_else(|| ParseError::new(p.line, 1, "pattern has no 'right' line"))?,
        };
        pat.check_shape().map_err(|m| ParseError::new(p.line, 1, m))?;
        Ok(pat)
    }
    let mut out = Vec::new();
    let mut cur: Option<Partial> = None;
    for (ln, line) in content_lines(text) {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix("pattern ") {
            if let Some(p) = cur.take() {
                out.push(finish(p)?);
            }
            let toks = tokens(rest);
            let (kc, kname) = *toks.first().ok_or_else(|| ParseError::new(ln, 9, "missing kind"))?;
            let kind = kname.parse().map_err(|e: String| ParseError::new(ln, 8 + kc, e))?;
            if toks.len() > 2 {
                return Err(ParseError::new(ln, 8 + toks[2].0, "unexpected token"));
            }
            cur = Some(Partial {
                line: ln,
                kind,
                variant: toks.get(1).map(|t| t.1.to_string()),
                chords: Vec::new(),
                left: None,
                right: None,
            });
            continue;
        }
        let p = cur.as_mut().ok_or_else(|| ParseError::new(ln, 1, "line outside a pattern"))?;
        let (key, rest, off) = split_key(line).ok_or_else(|| ParseError::new(ln, 1, "expected 'key: value'"))?;
        match key {
            "chords" => {
                for (c, tok) in tokens(rest) {
                    let bad = || ParseError::new(ln, off + c - 1, format!("bad chord declaration '{tok}'"));
                    let (name, sign) = tok.split_once(':').ok_or_else(bad)?;
                    if name.is_empty() || name == "e" || !name.chars().all(|ch| ch.is_ascii_lowercase()) {
                        return Err(bad());
                    }
                    if p.chords.iter().any(|(n, _)| n == name) {
                        return Err(bad());
                    }
                    p.chords.push((name.to_string(), SignExpr::parse(sign).ok_or_else(bad)?));
                }
            }
            "left" | "right" => {
                let mut frags = vec![Vec::new()];
                for (c, tok) in tokens(rest) {
                    if tok == "|" {
                        frags.push(Vec::new());
                        continue;
                    }
                    let bad = || ParseError::new(ln, off + c - 1, format!("unknown token '{tok}'"));
                    let ev = if let Some(s) = tok.strip_prefix('D') {
                        PatEvent::Diamond(SignExpr::parse(s).ok_or_else(bad)?)
                    } else {
                        let (head, name) = tok.split_at(1);
                        let v = p.chords.iter().position(|(n, _)| n == name).ok_or_else(bad)?;
                        match head {
                            "O" => PatEvent::Over(v),
                            "U" => PatEvent::Under(v),
                            _ => return Err(bad()),
                        }
                    };
                    frags.last_mut().unwrap().push(ev);
                }
                let slot = if key == "left" { &mut p.left } else { &mut p.right };
                if slot.is_some() {
                    return Err(ParseError::new(ln, 1, format!("duplicate '{key}' line")));
                }
                *slot = Some(frags);
            }
            other => return Err(ParseError::new(ln, 1, format!("unknown key '{other}'"))),
        }
    }
    if let Some(p) = cur.take() {
        out.push(finish(p)?);
    }
    Ok(out)
}

/// The shipped pattern table.
pub fn builtin_patterns() -> &'static [MovePattern] {
    static TABLE: OnceLock<Vec<MovePattern>> = OnceLock::new();
    TABLE.get_or_init(|| parse_patterns(PATTERN_FILE).expect("shipped pattern file parses"))
}

pub fn builtin_pattern_text() -> &'static str {
    PATTERN_FILE
}

/// Where one fragment sits: `len` events of `strand` starting at `start`. Empty fragments
/// are insertion points; `tie` orders several of them at the same point.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Placement {
    pub strand: usize,
    pub start: usize,
    pub len: usize,
    pub tie: usize,
}

/// A match of one side of a pattern in a concrete diagram.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MoveSite {
    pub pattern: MovePattern,
    pub direction: Direction,
    pub eps: i8,
    /// Chord bound to each pattern variable that occurs on the matched side.
    pub chords: Vec<Option<ChordId>>,
    pub placements: Vec<Placement>,
}

impl MoveSite {
    pub fn kind(&self) -> MoveKind {
        self.pattern.kind
    }
}

impl fmt::Display for MoveSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", self.pattern.name(), self.direction)?;
        if self.pattern.uses_eps() {
            write!(f, " e={}", sign_char(self.eps))?;
        }
        for (name, c) in self.pattern.chord_names.iter().zip(&self.chords) {
            if let Some(c) = c {
                write!(f, " {name}={c}")?;
            }
        }
        for p in &self.placements {
            write!(f, " s{}@{}+{}", p.strand + 1, p.start, p.len)?;
        }
        Ok(())
    }
}

struct Binding {
    chords: Vec<Option<ChordId>>,
    eps: Option<i8>,
}

impl Binding {
    fn sign_ok(&mut self, expr: SignExpr, actual: i8) -> bool {
        match (expr, self.eps) {
            (SignExpr::Fixed(s), _) => s == actual,
            (SignExpr::Eps(k), Some(e)) => k * e == actual,
            (SignExpr::Eps(k), None) => {
                self.eps = Some(k * actual);
                true
            }
        }
    }
}

fn match_fragment(
    d: &XCGaussDiagram,
    signs: &HashMap<ChordId, i8>,
    p: &MovePattern,
    frag: &[PatEvent],
    strand: usize,
    start: usize,
    b: &mut Binding,
) -> bool {
    for (k, pe) in frag.iter().enumerate() {
        let ev = d.strands[strand][start + k];
        let ok = match (*pe, ev) {
            (PatEvent::Diamond(expr), Event::Diamond(s)) => b.sign_ok(expr, s),
            (PatEvent::Over(v), Event::Over(c)) | (PatEvent::Under(v), Event::Under(c)) => match b.chords[v] {
                Some(bound) => bound == c,
                None => {
                    if b.chords.contains(&Some(c)) {
                        false
                    } else {
                        b.chords[v] = Some(c);
                        b.sign_ok(p.chord_signs[v], signs[&c])
                    }
                }
            },
            _ => false,
        };
        if !ok {
            return false;
        }
    }
    true
}

fn overlaps(placed: &[Option<Placement>], strand: usize, start: usize, len: usize) -> bool {
    placed.iter().flatten().any(|q| q.strand == strand && q.len > 0 && start < q.start + q.len && q.start < start + len)
}

fn strictly_inside(placed: &[Option<Placement>], strand: usize, gap: usize) -> bool {
    placed.iter().flatten().any(|q| q.strand == strand && q.len > 0 && q.start < gap && gap < q.start + q.len)
}

fn permutations(k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(k - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, k - 1);
            out.push(q);
        }
    }
    out
}

/// All sites where `side(dir)` of `p` matches in `d`, in deterministic order.
pub fn match_pattern(d: &XCGaussDiagram, p: &MovePattern, dir: Direction) -> Vec<MoveSite> {
    let side = p.side(dir);
    let signs = d.chord_signs();
    let nonempty: Vec<usize> = (0..side.len()).filter(|&i| !side[i].is_empty()).collect();
    let empty: Vec<usize> = (0..side.len()).filter(|&i| side[i].is_empty()).collect();
    let mut out = Vec::new();
    let mut placed = vec![None; side.len()];
    let b = Binding { chords: vec![None; p.chord_names.len()], eps: None };
    place_nonempty(d, &signs, p, dir, side, &nonempty, &empty, 0, b, &mut placed, &mut out);
    out
}

#[allow(clippy::too_many_arguments)]
fn place_nonempty(
    d: &XCGaussDiagram,
    signs: &HashMap<ChordId, i8>,
    p: &MovePattern,
    dir: Direction,
    side: &[Vec<PatEvent>],
    nonempty: &[usize],
    empty: &[usize],
    idx: usize,
    b: Binding,
    placed: &mut Vec<Option<Placement>>,
    out: &mut Vec<MoveSite>,
) {
    if idx == nonempty.len() {
        place_empty(d, p, dir, empty, &b, placed, out);
        return;
    }
    let f = nonempty[idx];
    let frag = &side[f];
    for s in 0..d.n() {
        let len = d.strands[s].len();
        if frag.len() > len {
            continue;
        }
        for start in 0..=len - frag.len() {
            if overlaps(placed, s, start, frag.len()) {
                continue;
            }
            let mut nb = Binding { chords: b.chords.clone(), eps: b.eps };
            if !match_fragment(d, signs, p, frag, s, start, &mut nb) {
                continue;
            }
            placed[f] = Some(Placement { strand: s, start, len: frag.len(), tie: 0 });
            place_nonempty(d, signs, p, dir, side, nonempty, empty, idx + 1, nb, placed, out);
            placed[f] = None;
        }
    }
}

fn place_empty(
    d: &XCGaussDiagram,
    p: &MovePattern,
    dir: Direction,
    empty: &[usize],
    b: &Binding,
    placed: &[Option<Placement>],
    out: &mut Vec<MoveSite>,
) {
    let gaps: Vec<(usize, usize)> = (0..d.n())
        .flat_map(|s| (0..=d.strands[s].len()).map(move |g| (s, g)))
        .filter(|&(s, g)| !strictly_inside(placed, s, g))
        .collect();
    let epss: Vec<i8> = match b.eps {
        Some(e) => vec![e],
        None if p.uses_eps() => vec![1, -1],
        None => vec![1],
    };
    let k = empty.len();
    let mut choice = vec![0usize; k];
    loop {
        // for each assignment of gaps, enumerate the orders within shared gaps
        let mut groups: BTreeMap<(usize, usize), Vec<usize>> = BTreeMap::new();
        for (j, &g) in choice.iter().enumerate() {
            groups.entry(gaps.get(g).copied().unwrap_or((0, 0))).or_default().push(j);
        }
        if k == 0 || !gaps.is_empty() {
            let group_list: Vec<Vec<usize>> = groups.into_values().collect();
            let mut orders: Vec<Vec<(usize, usize)>> = vec![Vec::new()];
            for grp in &group_list {
                let mut next = Vec::new();
                for o in &orders {
                    for perm in permutations(grp.len()) {
                        let mut o2 = o.clone();
                        for (t, &pi) in perm.iter().enumerate() {
                            o2.push((grp[pi], t));
                        }
                        next.push(o2);
                    }
                }
                orders = next;
            }
            for o in orders {
                let mut pl = placed.to_vec();
                for &(j, tie) in &o {
                    let (s, g) = gaps[choice[j]];
                    pl[empty[j]] = Some(Placement { strand: s, start: g, len: 0, tie });
                }
                for &eps in &epss {
                    out.push(MoveSite {
                        pattern: p.clone(),
                        direction: dir,
                        eps,
                        chords: b.chords.clone(),
                        placements: pl.iter().map(|x| x.expect("all fragments placed")).collect(),
                    });
                }
            }
        }
        // next gap assignment
        let mut i = 0;
        loop {
            if i == k {
                return;
            }
            choice[i] += 1;
            if choice[i] < gaps.len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

fn sites_of_kind(d: &XCGaussDiagram, kind: MoveKind) -> Vec<MoveSite> {
    let mut out = Vec::new();
    for p in builtin_patterns().iter().filter(|p| p.kind == kind) {
        for dir in [Direction::LeftToRight, Direction::RightToLeft] {
            out.extend(match_pattern(d, p, dir));
        }
    }
    out
}

fn is_insertion(s: &MoveSite) -> bool {
    s.placements.iter().all(|p| p.len == 0)
}

/// Sites of `kind` (both directions) whose matched side contains at least one event.
pub fn find_sites(d: &XCGaussDiagram, kind: MoveKind) -> Vec<MoveSite> {
    sites_of_kind(d, kind).into_iter().filter(|s| !is_insertion(s)).collect()
}

/// Sites of `kind` where an all-empty side matches, i.e. places where the move inserts.
pub fn find_insertion_sites(d: &XCGaussDiagram, kind: MoveKind) -> Vec<MoveSite> {
    sites_of_kind(d, kind).into_iter().filter(is_insertion).collect()
}

/// Every site of every shipped pattern, insertions included.
pub fn find_all_sites(d: &XCGaussDiagram) -> Vec<MoveSite> {
    MoveKind::ALL.iter().flat_map(|&k| sites_of_kind(d, k)).collect()
}

fn instantiate(frag: &[PatEvent], ids: &[Option<ChordId>], eps: i8) -> Vec<Event> {
    frag.iter()
        .map(|e| match *e {
            PatEvent::Over(v) => Event::Over(ids[v].expect("bound chord")),
            PatEvent::Under(v) => Event::Under(ids[v].expect("bound chord")),
            PatEvent::Diamond(s) => Event::Diamond(s.eval(eps)),
        })
        .collect()
}

/// Rewrites `d` at `site`.
pub fn apply(d: &XCGaussDiagram, site: &MoveSite) -> Result<XCGaussDiagram, MoveError> {
    let p = &site.pattern;
    let src = p.side(site.direction);
    let dst = p.target(site.direction);
    if site.placements.len() != src.len() || site.chords.len() != p.chord_names.len() {
        return Err(MoveError::StaleSite);
    }
    let src_vars = MovePattern::vars_on(src);
    let dst_vars = MovePattern::vars_on(dst);
    let signs = d.chord_signs();
    for v in &src_vars {
        let c = site.chords[*v].ok_or(MoveError::StaleSite)?;
        if signs.get(&c) != Some(&p.chord_signs[*v].eval(site.eps)) {
            return Err(MoveError::StaleSite);
        }
    }
    // the source must still be there
    for (i, pl) in site.placements.iter().enumerate() {
        let strand = d.strands.get(pl.strand).ok_or(MoveError::StaleSite)?;
        if pl.len != src[i].len() || pl.start + pl.len > strand.len() {
            return Err(MoveError::StaleSite);
        }
        if strand[pl.start..pl.start + pl.len] != instantiate(&src[i], &site.chords, site.eps)[..] {
            return Err(MoveError::StaleSite);
        }
    }
    let mut ids = site.chords.clone();
    let mut next = d.max_chord_id();
    let mut new_chords = Vec::new();
    for v in 0..p.chord_names.len() {
        if dst_vars.contains(&v) && !src_vars.contains(&v) {
            next += 1;
            ids[v] = Some(next);
            new_chords.push((next, p.chord_signs[v].eval(site.eps)));
        }
    }
    let removed: HashSet<ChordId> =
        src_vars.iter().filter(|v| !dst_vars.contains(v)).map(|v| site.chords[*v].unwrap()).collect();
    let mut out = d.clone();
    for s in 0..d.n() {
        let mut ops: Vec<(usize, bool, usize, usize, Vec<Event>)> = site
            .placements
            .iter()
            .enumerate()
            .filter(|(_, pl)| pl.strand == s)
            .map(|(i, pl)| (pl.start, pl.len > 0, pl.tie, pl.len, instantiate(&dst[i], &ids, site.eps)))
            .collect();
        if ops.is_empty() {
            continue;
        }
        ops.sort_by_key(|a| (a.0, a.1, a.2));
        let old = &d.strands[s];
        let mut evs = Vec::with_capacity(old.len() + 8);
        let mut cursor = 0;
        for (start, _, _, len, new) in ops {
            evs.extend_from_slice(&old[cursor..start]);
            evs.extend(new);
            cursor = start + len;
        }
        evs.extend_from_slice(&old[cursor..]);
        out.strands[s] = evs;
    }
    out.chords.retain(|(c, _)| !removed.contains(c));
    out.chords.extend(new_chords);
    out.chords.sort();
    out.validate()?;
    Ok(out)
}

/// Result of a bounded orbit search.
#[derive(Debug, Clone)]
pub struct Orbit {
    pub members: BTreeMap<CanonicalKey, XCGaussDiagram>,
    pub truncated: bool,
}

impl Orbit {
    pub fn contains(&self, k: &CanonicalKey) -> bool {
        self.members.contains_key(k)
    }
}

/// Breadth-first closure under all moves, up to `max_depth` steps and `max_size` decorations.
pub fn orbit(d: &XCGaussDiagram, max_depth: usize, max_size: usize) -> Orbit {
    let mut members = BTreeMap::new();
    members.insert(d.canonical_key(), d.clone());
    let mut frontier = vec![d.clone()];
    let mut truncated = false;
    for depth in 0..=max_depth {
        if frontier.is_empty() {
            break;
        }
        let mut next = Vec::new();
        for x in &frontier {
            for site in find_all_sites(x) {
                let y = match apply(x, &site) {
                    Ok(y) => y,
                    Err(_) => continue,
                };
                if y.decoration_count() > max_size {
                    truncated = true;
                    continue;
                }
                let k = y.canonical_key();
                if members.contains_key(&k) {
                    continue;
                }
                if depth == max_depth {
                    truncated = true;
                    continue;
                }
                members.insert(k, y.clone());
                next.push(y);
            }
        }
        frontier = next;
    }
    Orbit { members, truncated }
}

/// Applies a uniformly chosen site of a random kind that has sites.
pub fn apply_random<R: Rng>(d: &XCGaussDiagram, kinds: &[MoveKind], rng: &mut R) -> Option<(MoveSite, XCGaussDiagram)> {
    let mut order = kinds.to_vec();
    order.shuffle(rng);
    for k in order {
        let sites = sites_of_kind(d, k);
        if let Some(site) = sites.choose(rng) {
            let out = apply(d, site).expect("fresh site applies");
            return Some((site.clone(), out));
        }
    }
    None
}

/// A pair of closures on which the two sides of a pattern evaluate differently.
#[derive(Debug, Clone)]
pub struct Counterexample {
    pub left: XCGaussDiagram,
    pub right: XCGaussDiagram,
}

#[derive(Debug, Clone)]
pub struct PatternCheck {
    pub ok: bool,
    pub closures: usize,
    pub counterexample: Option<Counterexample>,
}

/// Context decorations added around the fragments of a closure.
#[derive(Debug, Clone, Copy)]
enum Context {
    Diamond(usize, i8),
    /// over slot, under slot, sign, under first when sharing a slot
    Chord(usize, usize, i8, bool),
}

fn contexts(slots: usize) -> Vec<Vec<Context>> {
    let mut out = vec![Vec::new()];
    let mut singles = Vec::new();
    for s in 0..slots {
        for sign in [1, -1] {
            singles.push(Context::Diamond(s, sign));
        }
    }
    for a in &singles {
        out.push(vec![*a]);
    }
    for a in &singles {
        for b in &singles {
            out.push(vec![*a, *b]);
        }
    }
    for o in 0..slots {
        for u in 0..slots {
            for sign in [1, -1] {
                out.push(vec![Context::Chord(o, u, sign, false)]);
                if o == u {
                    out.push(vec![Context::Chord(o, u, sign, true)]);
                }
            }
        }
    }
    out
}

/// Builds the closure of one side: fragments laid out on strands, context in the slots.
fn close(frags: &[Vec<Event>], layout: &[Vec<usize>], ctx: &[Context], chords: &[(ChordId, i8)]) -> XCGaussDiagram {
    let n = layout.len();
    // slot index -> (strand, position among the strand's fragments)
    let mut slot_of = Vec::new();
    for (s, fs) in layout.iter().enumerate() {
        for k in 0..=fs.len() {
            slot_of.push((s, k));
        }
    }
    let mut slot_events: Vec<Vec<Event>> = vec![Vec::new(); slot_of.len()];
    let mut all_chords = chords.to_vec();
    let ctx_id = 1000;
    for c in ctx {
        match *c {
            Context::Diamond(s, sign) => slot_events[s].push(Event::Diamond(sign)),
            Context::Chord(o, u, sign, under_first) => {
                all_chords.push((ctx_id, sign));
                if o == u && under_first {
                    slot_events[u].push(Event::Under(ctx_id));
                    slot_events[o].push(Event::Over(ctx_id));
                } else {
                    slot_events[o].push(Event::Over(ctx_id));
                    slot_events[u].push(Event::Under(ctx_id));
                }
            }
        }
    }
    let mut strands = vec![Vec::new(); n];
    let mut slot = 0;
    for (s, fs) in layout.iter().enumerate() {
        for (k, &f) in fs.iter().enumerate() {
            debug_assert_eq!(slot_of[slot], (s, k));
            strands[s].extend(slot_events[slot].iter().copied());
            slot += 1;
            strands[s].extend(frags[f].iter().copied());
        }
        strands[s].extend(slot_events[slot].iter().copied());
        slot += 1;
    }
    all_chords.sort();
    XCGaussDiagram { top: (0..n).collect(), chords: all_chords, strands }
}

/// Every way to lay out `k` labelled fragments on `m` ordered strands.
fn layouts(k: usize, m: usize) -> Vec<Vec<Vec<usize>>> {
    let mut out = Vec::new();
    for perm in permutations(k) {
        // compositions of k into m non-negative parts
        let mut comp = vec![0; m];
        fn rec(i: usize, left: usize, comp: &mut Vec<usize>, perm: &[usize], out: &mut Vec<Vec<Vec<usize>>>) {
            if i + 1 == comp.len() {
                comp[i] = left;
                let mut lay = Vec::new();
                let mut at = 0;
                for &c in comp.iter() {
                    lay.push(perm[at..at + c].to_vec());
                    at += c;
                }
                out.push(lay);
                return;
            }
            for c in 0..=left {
                comp[i] = c;
                rec(i + 1, left - c, comp, perm, out);
            }
        }
        rec(0, k, &mut comp, &perm, &mut out);
    }
    out
}

/// Checks `Z(left closure) = Z(right closure)` on all small closures of `p`.
pub fn validate_pattern<S: Scalar>(p: &MovePattern, ev: &Evaluator<S>) -> Result<PatternCheck, InvariantError> {
    let k = p.left.len();
    let mut closures = 0;
    let epss: &[i8] = if p.uses_eps() { &[1, -1] } else { &[1] };
    for &eps in epss {
        let ids: Vec<Option<ChordId>> = (1..=p.chord_names.len() as ChordId).map(Some).collect();
        let chords: Vec<(ChordId, i8)> =
            p.chord_signs.iter().enumerate().map(|(i, s)| (i as ChordId + 1, s.eval(eps))).collect();
        let lf: Vec<Vec<Event>> = p.left.iter().map(|f| instantiate(f, &ids, eps)).collect();
        let rf: Vec<Vec<Event>> = p.right.iter().map(|f| instantiate(f, &ids, eps)).collect();
        let lvars = MovePattern::vars_on(&p.left);
        let rvars = MovePattern::vars_on(&p.right);
        let lchords: Vec<_> = chords.iter().copied().filter(|(c, _)| lvars.contains(&(*c as usize - 1))).collect();
        let rchords: Vec<_> = chords.iter().copied().filter(|(c, _)| rvars.contains(&(*c as usize - 1))).collect();
        let mut seen = HashSet::new();
        for m in 1..=3 {
            for lay in layouts(k, m) {
                let slots = k + m;
                for ctx in contexts(slots) {
                    let left = close(&lf, &lay, &ctx, &lchords);
                    if !seen.insert(left.canonical_key()) {
                        continue;
                    }
                    let right = close(&rf, &lay, &ctx, &rchords);
                    closures += 1;
                    if ev.zeval(&left)?.value != ev.zeval(&right)?.value {
                        return Ok(PatternCheck {
                            ok: false,
                            closures,
                            counterexample: Some(Counterexample { left, right }),
                        });
                    }
                }
            }
        }
    }
    Ok(PatternCheck { ok: true, closures, counterexample: None })
}

#[cfg(test)]
mod tests {
    use super::*;
    use Event::*;

    fn one(evs: Vec<Event>, chords: &[(ChordId, i8)]) -> XCGaussDiagram {
        XCGaussDiagram::one_strand(evs, chords)
    }

    #[test]
    fn table_has_six_kinds() {
        let kinds: HashSet<_> = builtin_patterns().iter().map(|p| p.kind).collect();
        assert_eq!(kinds.len(), 6);
    }

    #[test]
    fn pattern_text_round_trips() {
        for p in builtin_patterns() {
            let again = parse_patterns(&p.to_string()).unwrap();
            assert_eq!(again, vec![p.clone()]);
        }
    }

    #[test]
    fn g0r_site_and_apply() {
        let d = one(vec![Diamond(1), Diamond(-1)], &[]);
        let sites = find_sites(&d, MoveKind::G0r);
        assert_eq!(sites.len(), 1);
        assert_eq!(apply(&d, &sites[0]).unwrap(), XCGaussDiagram::identity(1));
    }

    #[test]
    fn identity_has_only_insertion_sites() {
        let d = XCGaussDiagram::identity(2);
        for k in MoveKind::ALL {
            assert!(find_sites(&d, k).is_empty());
            let inserts = !find_insertion_sites(&d, k).is_empty();
            assert_eq!(inserts, matches!(k, MoveKind::G0r | MoveKind::G2));
        }
    }

    #[test]
    fn kink_has_one_g1f_site() {
        let d = one(vec![Over(1), Diamond(-1), Under(1)], &[(1, 1)]);
        let sites = find_sites(&d, MoveKind::G1f);
        assert_eq!(sites.len(), 1);
        let r = apply(&d, &sites[0]).unwrap();
        assert_eq!(r.strands[0], vec![Under(1), Diamond(1), Over(1)]);
    }

    #[test]
    fn stale_site_is_rejected() {
        let d = one(vec![Diamond(1), Diamond(-1)], &[]);
        let site = find_sites(&d, MoveKind::G0r).into_iter().find(|s| s.direction == Direction::LeftToRight).unwrap();
        let changed = one(vec![Diamond(1), Diamond(1)], &[]);
        assert_eq!(apply(&changed, &site), Err(MoveError::StaleSite));
    }

    #[test]
    fn g2_deletes_pair() {
        let d = XCGaussDiagram {
            top: vec![0, 1],
            chords: vec![(1, 1), (2, -1)],
            strands: vec![vec![Over(1), Over(2)], vec![Under(1), Under(2)]],
        };
        let site = find_sites(&d, MoveKind::G2).into_iter().find(|s| s.direction == Direction::LeftToRight).unwrap();
        assert_eq!(apply(&d, &site).unwrap(), XCGaussDiagram::identity(2));
    }

    #[test]
    fn layouts_count() {
        assert_eq!(layouts(3, 1).len(), 6);
        assert_eq!(layouts(3, 3).len(), 60);
        assert_eq!(layouts(0, 2).len(), 1);
    }
}

#[cfg(test)]
mod validator_tests {
    use super::*;
    use crate::algebra::builtin_uqsl2;

    #[test]
    fn shipped_patterns_validate() {
        let ev = Evaluator::new(builtin_uqsl2()).unwrap();
        for p in builtin_patterns() {
            let r = validate_pattern(p, &ev).unwrap();
            assert!(r.ok, "{} fails: {:?}", p.name(), r.counterexample);
            assert!(r.closures > 0);
        }
    }

    #[test]
    fn corrupted_g1f_is_caught() {
        let ev = Evaluator::new(builtin_uqsl2()).unwrap();
        let mut p = builtin_patterns().iter().find(|p| p.kind == MoveKind::G1f).unwrap().clone();
        p.right[0][1] = PatEvent::Diamond(SignExpr::Fixed(-1));
        let r = validate_pattern(&p, &ev).unwrap();
        assert!(!r.ok);
        assert!(r.counterexample.is_some());
    }
}
