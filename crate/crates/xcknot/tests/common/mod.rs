#![allow(dead_code)]

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use xcknot::algebra::{builtin_uqsl2, mu_contract, Matrix, MatrixXCAlgebra};
use xcknot::gauss::{ChordId, Event, XCGaussDiagram};
use xcknot::invariant::Evaluator;
use xcknot::ring::{Laurent, Scalar};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn evaluator() -> Evaluator<Laurent> {
    Evaluator::new(builtin_uqsl2()).unwrap()
}

/// Every event sequence with at most `k` decorations, each unlabeled one exactly once:
/// chord ids are assigned in order of first appearance.
pub fn event_sequences(k: usize) -> Vec<(Vec<Event>, Vec<(ChordId, i8)>)> {
    fn go(
        k: usize,
        used: usize,
        seq: &mut Vec<Event>,
        open: &mut Vec<ChordId>,
        chords: &mut Vec<(ChordId, i8)>,
        out: &mut Vec<(Vec<Event>, Vec<(ChordId, i8)>)>,
    ) {
        if open.is_empty() {
            out.push((seq.clone(), chords.clone()));
        }
        if used < k {
            for s in [1, -1] {
                seq.push(Event::Diamond(s));
                go(k, used + 1, seq, open, chords, out);
                seq.pop();
            }
            let c = chords.len() as ChordId + 1;
            for s in [1, -1] {
                for first in [Event::Over(c), Event::Under(c)] {
                    chords.push((c, s));
                    open.push(c);
                    seq.push(first);
                    go(k, used + 1, seq, open, chords, out);
                    seq.pop();
                    open.pop();
                    chords.pop();
                }
            }
        }
        for i in 0..open.len() {
            let c = open.remove(i);
            let opened_over = seq.contains(&Event::Over(c));
            seq.push(if opened_over { Event::Under(c) } else { Event::Over(c) });
            go(k, used, seq, open, chords, out);
            seq.pop();
            open.insert(i, c);
        }
    }
    let mut out = Vec::new();
    go(k, 0, &mut Vec::new(), &mut Vec::new(), &mut Vec::new(), &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    if n == 0 {
        return vec![Vec::new()];
    }
    let mut out = Vec::new();
    for p in permutations(n - 1) {
        for i in 0..=p.len() {
            let mut q = p.clone();
            q.insert(i, n - 1);
            out.push(q);
        }
    }
    out
}

fn cuts(len: usize, parts: usize) -> Vec<Vec<usize>> {
    match parts {
        0 => return if len == 0 { vec![Vec::new()] } else { Vec::new() },
        1 => return vec![vec![len]],
        _ => {}
    }
    let mut out = Vec::new();
    for first in 0..=len {
        for mut rest in cuts(len - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

/// All diagrams on `n` strands with at most `k` decorations, up to chord relabeling.
pub fn all_diagrams(n: usize, k: usize, mut f: impl FnMut(&XCGaussDiagram)) {
    let tops = permutations(n);
    for (seq, chords) in event_sequences(k) {
        for lens in cuts(seq.len(), n) {
            let mut strands = Vec::with_capacity(n);
            let mut at = 0;
            for l in lens {
                strands.push(seq[at..at + l].to_vec());
                at += l;
            }
            for top in &tops {
                f(&XCGaussDiagram { top: top.clone(), chords: chords.clone(), strands: strands.clone() });
            }
        }
    }
}

/// `Z` computed the slow way: one tensor factor per event, every bead embedded as a
/// dense matrix, then each strand's factors multiplied together with `mu`.
pub fn zeval_by_legs<S: Scalar>(a: &MatrixXCAlgebra<S>, d: &XCGaussDiagram) -> Matrix<S> {
    let mut leg = 0;
    let mut groups = Vec::new();
    let mut over_leg = std::collections::HashMap::new();
    let mut under_leg = std::collections::HashMap::new();
    let mut diamonds = Vec::new();
    for evs in &d.strands {
        let mut g = Vec::new();
        if evs.is_empty() {
            leg += 1;
            g.push(leg);
        }
        for e in evs {
            leg += 1;
            g.push(leg);
            match *e {
                Event::Over(c) => drop(over_leg.insert(c, leg)),
                Event::Under(c) => drop(under_leg.insert(c, leg)),
                Event::Diamond(s) => diamonds.push((leg, s)),
            }
        }
        g.reverse();
        groups.push(g);
    }
    let size = a.d.pow(leg as u32);
    let mut m = Matrix::identity(size);
    for (c, s) in &d.chords {
        let r = a.embed_r(over_leg[c], under_leg[c], leg, *s < 0).unwrap();
        m = r.mul(&m).unwrap();
    }
    for (l, s) in diamonds {
        let k = a.embed_kappa(l, leg, s > 0).unwrap();
        m = k.mul(&m).unwrap();
    }
    mu_contract(&m, a.d, leg, &groups)
}
