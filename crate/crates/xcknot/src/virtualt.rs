//! Virtual upwards tangles as signed Gauss codes: the forgetful map, the rotational lift,
//! classical oracles (writhe, rotation, Kauffman bracket) and random classical moves.

use std::collections::HashMap;
use std::fmt;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::gauss::{sign_char, ChordId, Event, GaussError, RandomShape, XCGaussDiagram};
use crate::moves::{apply, match_pattern, Direction, MoveKind, MovePattern, PatEvent, SignExpr};
use crate::parse::{content_lines, split_key, tokens, ParseError};
use crate::ring::Laurent;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum VirtualError {
    #[error("a signed Gauss code has no diamonds")]
    HasDiamonds,
    #[error("expected a one-strand code, got {0} strands")]
    NotOneStrand(usize),
    #[error("no site for move {0}")]
    NoSite(CodeMove),
    #[error("invalid code: {0}")]
    Invalid(#[from] GaussError),
}

/// A diamond-free XC-Gauss diagram.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedGaussCode(XCGaussDiagram);

impl SignedGaussCode {
    pub fn from_diagram(d: XCGaussDiagram) -> Result<Self, VirtualError> {
        if d.diamond_count() > 0 {
            return Err(VirtualError::HasDiamonds);
        }
        Ok(SignedGaussCode(d))
    }

    pub fn empty(n: usize) -> Self {
        SignedGaussCode(XCGaussDiagram::identity(n))
    }

    pub fn diagram(&self) -> &XCGaussDiagram {
        &self.0
    }

    pub fn into_diagram(self) -> XCGaussDiagram {
        self.0
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn validate(&self) -> Result<(), VirtualError> {
        self.0.validate()?;
        Ok(())
    }

    /// One strand per line of `O<id><sign>` / `U<id><sign>` tokens (`.` for an empty
    /// strand), with an optional 1-based `top:` line.
    pub fn parse(text: &str) -> Result<SignedGaussCode, ParseError> {
        let mut top = None;
        let mut strands = Vec::new();
        let mut signs: HashMap<ChordId, (i8, usize, usize)> = HashMap::new();
        let mut chords = Vec::new();
        for (ln, line) in content_lines(text) {
            if let Some(("top", rest, off)) = split_key(line) {
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
                continue;
            }
            let toks = tokens(line);
            if toks.len() == 1 && toks[0].1 == "." {
                strands.push(Vec::new());
                continue;
            }
            let mut evs = Vec::new();
            for (c, tok) in toks {
                let bad = || ParseError::new(ln, c, format!("unknown token '{tok}'"));
                if tok.len() < 3 || !tok.is_ascii() {
                    return Err(bad());
                }
                let (head, rest) = tok.split_at(1);
                let (id, s) = rest.split_at(rest.len() - 1);
                let id: ChordId = id.parse().map_err(|_| bad())?;
                let s = match s {
                    "+" => 1,
                    "-" => -1,
                    _ => return Err(bad()),
                };
                match signs.get(&id) {
                    Some(&(prev, pl, pc)) if prev != s => {
                        return Err(ParseError::new(
                            ln,
                            c,
                            format!("sign of chord {id} disagrees with its other endpoint at {pl}:{pc}"),
                        ))
                    }
                    Some(_) => {}
                    None => {
                        signs.insert(id, (s, ln, c));
                        chords.push((id, s));
                    }
                }
                evs.push(match head {
                    "O" => Event::Over(id),
                    "U" => Event::Under(id),
                    _ => return Err(bad()),
                });
            }
            strands.push(evs);
        }
        chords.sort();
        let n = strands.len();
        Ok(SignedGaussCode(XCGaussDiagram { top: top.unwrap_or_else(|| (0..n).collect()), chords, strands }))
    }

    /// Random valid code.
    pub fn random<R: Rng>(rng: &mut R, min_strands: usize, max_strands: usize, max_chords: usize) -> Self {
        let shape = RandomShape { min_strands, max_strands, max_chords, max_diamonds: 0, permute: true };
        SignedGaussCode(XCGaussDiagram::random(rng, &shape))
    }
}

impl fmt::Display for SignedGaussCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d = &self.0;
        if d.top.iter().enumerate().any(|(i, t)| i != *t) {
            let t: Vec<String> = d.top.iter().map(|t| (t + 1).to_string()).collect();
            writeln!(f, "top: {}", t.join(" "))?;
        }
        let signs = d.chord_signs();
        for evs in &d.strands {
            if evs.is_empty() {
                writeln!(f, ".")?;
                continue;
            }
            let toks: Vec<String> = evs
                .iter()
                .map(|e| {
                    let c = e.chord().expect("no diamonds");
                    let s = signs.get(&c).map(|s| sign_char(*s)).unwrap_or('?');
                    match e {
                        Event::Over(_) => format!("O{c}{s}"),
                        _ => format!("U{c}{s}"),
                    }
                })
                .collect();
            writeln!(f, "{}", toks.join(" "))?;
        }
        Ok(())
    }
}

/// Drops every diamond.
pub fn forget(d: &XCGaussDiagram) -> SignedGaussCode {
    let mut g = d.clone();
    for s in g.strands.iter_mut() {
        s.retain(|e| !matches!(e, Event::Diamond(_)));
    }
    SignedGaussCode(g)
}

pub fn writhe(g: &SignedGaussCode) -> i64 {
    g.0.chords.iter().map(|(_, s)| *s as i64).sum()
}

pub fn rotation_total(d: &XCGaussDiagram) -> i64 {
    d.strands
        .iter()
        .flatten()
        .map(|e| match e {
            Event::Diamond(s) => *s as i64,
            _ => 0,
        })
        .sum()
}

/// `2 * sum of signs of chords whose under endpoint comes first`, strands read in order.
pub fn under_first_twice(g: &SignedGaussCode) -> i64 {
    let (_, first_over, signs) = flat_layout(&g.0);
    signs.iter().map(|(c, s)| if first_over[c] { 0 } else { 2 * *s as i64 }).sum()
}

/// Positions of chord endpoints in the concatenation of all strands.
fn flat_layout(d: &XCGaussDiagram) -> (HashMap<ChordId, (usize, usize)>, HashMap<ChordId, bool>, Vec<(ChordId, i8)>) {
    let mut pos: HashMap<ChordId, (usize, usize)> = HashMap::new();
    let mut first_over = HashMap::new();
    for (i, e) in d.strands.iter().flatten().enumerate() {
        if let Some(c) = e.chord() {
            match pos.get_mut(&c) {
                Some(p) => p.1 = i,
                None => {
                    pos.insert(c, (i, i));
                    first_over.insert(c, matches!(e, Event::Over(_)));
                }
            }
        }
    }
    let signs = d.chords.clone();
    (pos, first_over, signs)
}

/// The rotational lift. Strands are read as one sequence in index order. With
/// `w(c) = sign(c)` if the over end of `c` comes first and `-sign(c)` otherwise, the
/// diamonds strictly inside the interval of `c` sum to `-w(c) - sum w(d)` over chords `d`
/// with an endpoint inside that interval, and all diamonds sum to `-sum w`.
pub fn lift(g: &SignedGaussCode) -> XCGaussDiagram {
    let d = &g.0;
    let (pos, first_over, signs) = flat_layout(d);
    let w: HashMap<ChordId, i64> =
        signs.iter().map(|(c, s)| (*c, if first_over[c] { *s as i64 } else { -(*s as i64) })).collect();
    let inside = |c: ChordId, p: usize| pos[&c].0 < p && p < pos[&c].1;
    let mut by_first: Vec<ChordId> = signs.iter().map(|(c, _)| *c).collect();
    by_first.sort_by_key(|c| std::cmp::Reverse(pos[c].0));
    let mut placed: HashMap<ChordId, i64> = HashMap::new();
    for &c in &by_first {
        let mut phi = -w[&c];
        for (dd, _) in &signs {
            if *dd != c && (inside(c, pos[dd].0) || inside(c, pos[dd].1)) {
                phi -= w[dd];
            }
        }
        let already: i64 = placed.iter().filter(|(dd, _)| inside(c, pos[*dd].0)).map(|(_, u)| *u).sum();
        placed.insert(c, phi - already);
    }
    let total: i64 = -w.values().sum::<i64>();
    let rest = total - placed.values().sum::<i64>();
    let diamonds = |u: i64| std::iter::repeat_n(Event::Diamond(if u > 0 { 1 } else { -1 }), u.unsigned_abs() as usize);
    let mut out = d.clone();
    let mut flat = 0;
    for (s, evs) in d.strands.iter().enumerate() {
        let mut new = Vec::with_capacity(evs.len());
        for e in evs {
            new.push(*e);
            if let Some(c) = e.chord() {
                if pos[&c].0 == flat {
                    new.extend(diamonds(placed[&c]));
                }
            }
            flat += 1;
        }
        if s + 1 == d.n() {
            new.extend(diamonds(rest));
        }
        out.strands[s] = new;
    }
    out
}

/// Kauffman bracket of a one-strand code as a long knot, normalized by `(-A^3)^(-wr)`
/// and written in `q` with `A^2 = q^-1`.
pub fn bracket_oracle(g: &SignedGaussCode) -> Result<Laurent, VirtualError> {
    let d = &g.0;
    if d.n() != 1 {
        return Err(VirtualError::NotOneStrand(d.n()));
    }
    d.validate()?;
    let evs = &d.strands[0];
    let m = evs.len();
    let signs = d.chord_signs();
    let mut ends: HashMap<ChordId, (usize, usize)> = HashMap::new();
    for (i, e) in evs.iter().enumerate() {
        match e {
            Event::Over(c) => ends.entry(*c).or_insert((0, 0)).0 = i,
            Event::Under(c) => ends.entry(*c).or_insert((0, 0)).1 = i,
            Event::Diamond(_) => {}
        }
    }
    let chords: Vec<(usize, usize, i8)> = d.chords.iter().map(|(c, _)| (ends[c].0, ends[c].1, signs[c])).collect();
    // (A-exponent, loops) -> count; arc i runs from event i to event i+1 (closed at infinity)
    let mut tally: HashMap<(i64, usize), i64> = HashMap::new();
    let k = chords.len();
    for state in 0u64..(1u64 << k) {
        let mut uf: Vec<usize> = (0..m.max(1)).collect();
        let mut a = 0i64;
        for (j, &(o, u, s)) in chords.iter().enumerate() {
            let in_o = (o + m - 1) % m;
            let in_u = (u + m - 1) % m;
            let oriented = state >> j & 1 == 0;
            if oriented {
                union(&mut uf, in_o, u);
                union(&mut uf, in_u, o);
                a += s as i64;
            } else {
                union(&mut uf, in_o, in_u);
                union(&mut uf, o, u);
                a -= s as i64;
            }
        }
        let loops = (0..uf.len()).filter(|&i| find(&mut uf, i) == i).count();
        *tally.entry((a, loops)).or_default() += 1;
    }
    let delta = &Laurent::monomial(-1, 2) + &Laurent::monomial(-1, -2);
    let mut total = Laurent::zero();
    for ((a, loops), cnt) in tally {
        let term = &Laurent::monomial(cnt, a as i32) * &delta.pow(loops as u32 - 1);
        total = &total + &term;
    }
    let wr = writhe(g);
    let norm = Laurent::monomial(if wr % 2 == 0 { 1 } else { -1 }, -3 * wr as i32);
    let in_a = &total * &norm;
    Ok(in_a.scale_exponents(-1).divide_exponents(2).expect("bracket of a knot has even A-exponents"))
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn union(uf: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        uf[ra] = rb;
    }
}

/// Classical moves on signed Gauss codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CodeMove {
    R1f,
    R2,
    R3,
    Reorder,
}

impl CodeMove {
    pub const ALL: [CodeMove; 4] = [CodeMove::R1f, CodeMove::R2, CodeMove::R3, CodeMove::Reorder];
}

impl fmt::Display for CodeMove {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CodeMove::R1f => "R1f",
            CodeMove::R2 => "R2",
            CodeMove::R3 => "R3",
            CodeMove::Reorder => "reorder",
        })
    }
}

impl std::str::FromStr for CodeMove {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        CodeMove::ALL.into_iter().find(|k| k.to_string() == s).ok_or_else(|| format!("unknown move '{s}'"))
    }
}

fn random_gap<R: Rng>(d: &XCGaussDiagram, rng: &mut R) -> (usize, usize) {
    let s = rng.gen_range(0..d.n());
    (s, rng.gen_range(0..=d.strands[s].len()))
}

/// Inserts fragments at gaps; fragments sharing a gap keep their list order.
fn insert_fragments(d: &mut XCGaussDiagram, mut at: Vec<((usize, usize), Vec<Event>)>) {
    let idx: Vec<usize> = (0..at.len()).collect();
    let mut order = idx;
    order.sort_by(|&a, &b| (at[b].0 .0, at[b].0 .1, b).cmp(&(at[a].0 .0, at[a].0 .1, a)));
    for i in order {
        let ((s, p), evs) = std::mem::take(&mut at[i]);
        d.strands[s].splice(p..p, evs);
    }
}

/// The triangle move with all signs `sign`; the negative one is the mirror image.
fn triangle_pattern(sign: i8) -> MovePattern {
    use PatEvent::{Over as O, Under as U};
    let (o, u): (fn(usize) -> PatEvent, fn(usize) -> PatEvent) = if sign > 0 { (O, U) } else { (U, O) };
    MovePattern {
        kind: MoveKind::G3,
        variant: None,
        chord_names: vec!["a".into(), "b".into(), "c".into()],
        chord_signs: vec![SignExpr::Fixed(sign); 3],
        left: vec![vec![o(1), o(0)], vec![o(2), u(0)], vec![u(2), u(1)]],
        right: vec![vec![o(0), o(1)], vec![u(0), o(2)], vec![u(1), u(2)]],
    }
}

/// Plants the left side of a triangle move at random gaps.
pub fn plant_triangle<R: Rng>(g: &SignedGaussCode, rng: &mut R) -> SignedGaussCode {
    let mut d = g.0.clone();
    if d.n() == 0 {
        return g.clone();
    }
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    let p = triangle_pattern(sign);
    let base = d.max_chord_id();
    let ev = |e: &PatEvent| match *e {
        PatEvent::Over(v) => Event::Over(base + 1 + v as ChordId),
        PatEvent::Under(v) => Event::Under(base + 1 + v as ChordId),
        PatEvent::Diamond(_) => unreachable!(),
    };
    let frags = p.left.iter().map(|f| (random_gap(&d, rng), f.iter().map(ev).collect())).collect();
    insert_fragments(&mut d, frags);
    for v in 0..3 {
        d.chords.push((base + 1 + v, sign));
    }
    SignedGaussCode(d)
}

/// Applies one classical move of the given kind at a random site.
pub fn random_move_on_code<R: Rng>(
    g: &SignedGaussCode,
    kind: CodeMove,
    rng: &mut R,
) -> Result<SignedGaussCode, VirtualError> {
    let mut d = g.0.clone();
    let next = d.max_chord_id();
    match kind {
        CodeMove::R1f => {
            if d.n() == 0 {
                return Err(VirtualError::NoSite(kind));
            }
            // two kinks of opposite signs with the same first endpoint type
            let (a, b) = (next + 1, next + 2);
            let s = if rng.gen_bool(0.5) { 1 } else { -1 };
            let over_first = rng.gen_bool(0.5);
            let kink = |c| {
                if over_first {
                    [Event::Over(c), Event::Under(c)]
                } else {
                    [Event::Under(c), Event::Over(c)]
                }
            };
            let mut evs = kink(a).to_vec();
            evs.extend(kink(b));
            let gap = random_gap(&d, rng);
            insert_fragments(&mut d, vec![(gap, evs)]);
            d.chords.push((a, s));
            d.chords.push((b, -s));
        }
        CodeMove::R2 => {
            let sites = r2_sites(&d);
            if !sites.is_empty() && (rng.gen_bool(0.5) || d.n() == 0) {
                let (a, b) = *sites.choose(rng).unwrap();
                for s in d.strands.iter_mut() {
                    s.retain(|e| e.chord() != Some(a) && e.chord() != Some(b));
                }
                d.chords.retain(|(c, _)| *c != a && *c != b);
            } else {
                if d.n() == 0 {
                    return Err(VirtualError::NoSite(kind));
                }
                let (a, b) = (next + 1, next + 2);
                let s = if rng.gen_bool(0.5) { 1 } else { -1 };
                let unders = if rng.gen_bool(0.5) {
                    vec![Event::Under(a), Event::Under(b)]
                } else {
                    vec![Event::Under(b), Event::Under(a)]
                };
                let overs = vec![Event::Over(a), Event::Over(b)];
                let frags = vec![(random_gap(&d, rng), overs), (random_gap(&d, rng), unders)];
                insert_fragments(&mut d, frags);
                d.chords.push((a, s));
                d.chords.push((b, -s));
            }
        }
        CodeMove::R3 => {
            let mut sites = Vec::new();
            for sign in [1, -1] {
                let p = triangle_pattern(sign);
                for dir in [Direction::LeftToRight, Direction::RightToLeft] {
                    sites.extend(match_pattern(&d, &p, dir));
                }
            }
            let site = sites.choose(rng).ok_or(VirtualError::NoSite(kind))?;
            d = apply(&d, site).expect("fresh site applies");
        }
        CodeMove::Reorder => {
            let mut ids: Vec<ChordId> = d.chords.iter().map(|(c, _)| *c).collect();
            let old = ids.clone();
            ids.shuffle(rng);
            let map: HashMap<ChordId, ChordId> = old.into_iter().zip(ids).collect();
            for e in d.strands.iter_mut().flatten() {
                *e = match *e {
                    Event::Over(c) => Event::Over(map[&c]),
                    Event::Under(c) => Event::Under(map[&c]),
                    x => x,
                };
            }
            for (c, _) in d.chords.iter_mut() {
                *c = map[c];
            }
        }
    }
    d.chords.sort();
    Ok(SignedGaussCode(d))
}

/// Pairs of opposite-signed chords with adjacent over ends and adjacent under ends.
fn r2_sites(d: &XCGaussDiagram) -> Vec<(ChordId, ChordId)> {
    let signs = d.chord_signs();
    let mut adjacent = std::collections::HashSet::new();
    for s in &d.strands {
        for w in s.windows(2) {
            adjacent.insert((w[0], w[1]));
        }
    }
    let mut out = Vec::new();
    for s in &d.strands {
        for w in s.windows(2) {
            if let (Event::Over(a), Event::Over(b)) = (w[0], w[1]) {
                if signs[&a] == -signs[&b]
                    && (adjacent.contains(&(Event::Under(a), Event::Under(b)))
                        || adjacent.contains(&(Event::Under(b), Event::Under(a))))
                {
                    out.push((a, b));
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn code(s: &str) -> SignedGaussCode {
        SignedGaussCode::parse(s).unwrap()
    }

    #[test]
    fn kink_lift_and_forget() {
        let g = code("O1+ U1+");
        let l = lift(&g);
        assert_eq!(l.strands[0], vec![Event::Over(1), Event::Diamond(-1), Event::Under(1)]);
        assert_eq!(forget(&l), g);
    }

    #[test]
    fn rotation_writhe_identity_trefoil() {
        let g = code("O1+ U2+ O3+ U1+ O2+ U3+");
        let l = lift(&g);
        assert_eq!(writhe(&g), 3);
        assert_eq!(rotation_total(&l) + writhe(&g), under_first_twice(&g));
        assert_eq!(forget(&l), g);
    }

    #[test]
    fn bracket_small_cases() {
        assert_eq!(bracket_oracle(&code(".")).unwrap(), Laurent::constant(1));
        assert_eq!(bracket_oracle(&code("O1+ U1+")).unwrap(), Laurent::constant(1));
        assert_eq!(bracket_oracle(&code("U1- O1-")).unwrap(), Laurent::constant(1));
        assert!(bracket_oracle(&code(".\n.")).is_err());
    }

    #[test]
    fn code_text_round_trip() {
        let g = code("top: 2 1\nO1+ U2-\nU1+ O2-\n");
        assert_eq!(code(&g.to_string()), g);
        let e = SignedGaussCode::parse("O1+ U1-").unwrap_err();
        assert_eq!((e.line, e.col), (1, 5));
    }

    #[test]
    fn r2_insert_then_delete() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let g = code("O1+ U1+");
        for _ in 0..20 {
            let h = random_move_on_code(&g, CodeMove::R2, &mut rng).unwrap();
            h.validate().unwrap();
            if h.diagram().chords.len() == 3 {
                let sites = r2_sites(h.diagram());
                assert!(!sites.is_empty());
            }
        }
    }
}
