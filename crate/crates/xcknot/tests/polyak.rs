mod common;

use std::collections::HashMap;

use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;
use xcknot::gauss::{ChordId, Event, RandomShape, XCGaussDiagram};
use xcknot::moves::{apply_random, MoveKind};
use xcknot::polyak::{
    check_formula_invariance, framing_formula, framing_terms, map_i, map_i_inverse, map_i_sum, pairing, parse_formula,
    print_formula, subdiagrams, truncate_degree, FormalDiagramSum, FormulaTerm, PolyakError, TemplateEvent,
};
use xcknot::virtualt::{lift, writhe, SignedGaussCode};

/// Induced subdiagrams by brute force: keep an event when its chord or its own position
/// is selected.
fn all_subsets(d: &XCGaussDiagram) -> Vec<XCGaussDiagram> {
    let diamonds: Vec<(usize, usize)> = d
        .strands
        .iter()
        .enumerate()
        .flat_map(|(s, evs)| evs.iter().enumerate().filter(|(_, e)| e.chord().is_none()).map(move |(i, _)| (s, i)))
        .collect();
    let k = d.chords.len() + diamonds.len();
    (0..1u32 << k)
        .map(|mask| {
            let keep_chord = |c: ChordId| {
                let i = d.chords.iter().position(|(x, _)| *x == c).unwrap();
                mask >> i & 1 == 1
            };
            let strands = d
                .strands
                .iter()
                .enumerate()
                .map(|(s, evs)| {
                    evs.iter()
                        .enumerate()
                        .filter(|(i, e)| match e.chord() {
                            Some(c) => keep_chord(c),
                            None => {
                                let j = diamonds.iter().position(|p| *p == (s, *i)).unwrap();
                                mask >> (d.chords.len() + j) & 1 == 1
                            }
                        })
                        .map(|(_, e)| *e)
                        .collect()
                })
                .collect();
            let chords = d.chords.iter().copied().filter(|(c, _)| keep_chord(*c)).collect();
            XCGaussDiagram { top: d.top.clone(), chords, strands }
        })
        .collect()
}

/// Every signed diagram a template stands for, with the product of the signs filled
/// into its unsigned slots.
fn instances(t: &FormulaTerm) -> Vec<(XCGaussDiagram, i64)> {
    let slots = t.events.iter().filter(|e| matches!(e, TemplateEvent::Diamond(None))).count()
        + t.chord_signs.iter().filter(|(_, s)| s.is_none()).count();
    (0..1u32 << slots)
        .map(|bits| {
            let mut next = 0;
            let mut weight = 1;
            let mut pick = |fixed: Option<i8>| {
                fixed.unwrap_or_else(|| {
                    let s = if bits >> next & 1 == 1 { -1 } else { 1 };
                    next += 1;
                    weight *= s as i64;
                    s
                })
            };
            let signs: Vec<(ChordId, i8)> = t.chord_signs.iter().map(|(c, s)| (*c, pick(*s))).collect();
            let events = t
                .events
                .iter()
                .map(|e| match *e {
                    TemplateEvent::Over(c) => Event::Over(c),
                    TemplateEvent::Under(c) => Event::Under(c),
                    TemplateEvent::Diamond(s) => Event::Diamond(pick(s)),
                })
                .collect();
            (XCGaussDiagram::one_strand(events, &signs), weight)
        })
        .collect()
}

fn pairing_oracle(g: &[FormulaTerm], d: &XCGaussDiagram) -> BigInt {
    let subs: Vec<_> = all_subsets(d).iter().map(|s| s.canonical_key()).collect();
    let mut total = BigInt::from(0);
    for t in g {
        for (inst, w) in instances(t) {
            let key = inst.canonical_key();
            let hits = subs.iter().filter(|k| **k == key).count() as i64;
            total += &t.coef * BigInt::from(w * hits);
        }
    }
    total
}

fn one_strand(rng: &mut impl Rng, events: usize) -> XCGaussDiagram {
    let shape = RandomShape {
        min_strands: 1,
        max_strands: 1,
        max_chords: events / 2,
        max_diamonds: events / 2,
        permute: false,
    };
    XCGaussDiagram::random(rng, &shape)
}

fn random_formula(rng: &mut impl Rng) -> Vec<FormulaTerm> {
    let sign = |rng: &mut dyn rand::RngCore| ["+", "-", "?"][rng.gen_range(0..3)];
    (0..rng.gen_range(1..4))
        .map(|_| {
            let chords = rng.gen_range(0..=2u32);
            let mut toks: Vec<String> =
                (1..=chords).flat_map(|c| [format!("O{c}{}", sign(rng)), format!("U{c}")]).collect();
            for _ in 0..rng.gen_range(0..=2) {
                toks.push(format!("D{}", sign(rng)));
            }
            // a shuffle keeps every chord's endpoints but mixes their order
            use rand::seq::SliceRandom;
            toks.shuffle(rng);
            let line = format!("{} {}", rng.gen_range(-3..=3), toks.join(" "));
            FormulaTerm::parse_line(&line, 1).unwrap()
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn map_i_counts_subsets(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let shape = RandomShape { min_strands: 1, max_strands: 3, max_chords: 3, max_diamonds: 3, permute: true };
        let d = XCGaussDiagram::random(&mut rng, &shape);
        let mut counts: HashMap<String, i64> = HashMap::new();
        for s in all_subsets(&d) {
            *counts.entry(s.canonical_key().0).or_default() += 1;
        }
        let m = map_i(&d);
        prop_assert_eq!(m.len(), counts.len());
        for (c, x) in m.iter() {
            prop_assert_eq!(c, &BigInt::from(counts[&x.canonical_key().0]));
        }
        let lib: Vec<_> = subdiagrams(&d).map(|s| s.canonical_code()).collect();
        let ours: Vec<_> = all_subsets(&d).iter().map(|s| s.canonical_code()).collect();
        prop_assert_eq!(lib, ours);
    }

    #[test]
    fn inverse_undoes_map_i_on_larger_diagrams(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let shape = RandomShape { min_strands: 1, max_strands: 3, max_chords: 4, max_diamonds: 4, permute: true };
        let d = XCGaussDiagram::random(&mut rng, &shape);
        prop_assert_eq!(map_i_inverse(&map_i(&d)), FormalDiagramSum::single(&d));
        prop_assert_eq!(map_i(&d).max_degree(), Some(d.decoration_count()));
    }

    #[test]
    fn map_i_is_linear(a in any::<u64>(), b in any::<u64>(), c in -3i64..4) {
        let shape = RandomShape { min_strands: 1, max_strands: 1, max_chords: 3, max_diamonds: 2, permute: false };
        let x = XCGaussDiagram::random(&mut common::rng(a), &shape);
        let y = XCGaussDiagram::random(&mut common::rng(b), &shape);
        let mut s = FormalDiagramSum::single(&x);
        s.add_term(BigInt::from(c), &y);
        let mut want = map_i(&x);
        for (k, d) in map_i(&y).iter() {
            want.add_term(k * BigInt::from(c), &d);
        }
        prop_assert_eq!(map_i_sum(&s), want);
        prop_assert_eq!(map_i_inverse(&map_i_sum(&s)), s);
    }

    #[test]
    fn truncation_keeps_low_degrees(seed in any::<u64>(), n in 0usize..6) {
        let d = one_strand(&mut common::rng(seed), 8);
        let m = map_i(&d);
        let t = truncate_degree(&m, n);
        prop_assert!(t.iter().all(|(_, x)| x.decoration_count() < n));
        for (c, x) in m.iter() {
            let want = if x.decoration_count() < n { c.clone() } else { BigInt::from(0) };
            prop_assert_eq!(t.coefficient(&x), want);
        }
    }

    #[test]
    fn pairing_matches_subset_oracle(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = one_strand(&mut rng, 8);
        let g = random_formula(&mut rng);
        prop_assert_eq!(pairing(&g, &d).unwrap(), pairing_oracle(&g, &d));
    }

    #[test]
    fn framing_formula_is_the_writhe(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = SignedGaussCode::random(&mut rng, 1, 1, 6);
        let l = lift(&g);
        let f = framing_formula(&l).unwrap();
        prop_assert_eq!(&f, &BigInt::from(writhe(&g)));
        prop_assert_eq!(&f, &pairing_oracle(&framing_terms(), &l));
        if let Some((_, e)) = apply_random(&l, &MoveKind::ALL, &mut rng) {
            prop_assert_eq!(framing_formula(&e).unwrap(), f);
        }
    }

    #[test]
    fn formula_text_round_trips(seed in any::<u64>()) {
        let g = random_formula(&mut common::rng(seed));
        prop_assert_eq!(parse_formula(&print_formula(&g)).unwrap(), g);
    }
}

#[test]
fn framing_formula_is_certified_invariant() {
    let rep = check_formula_invariance(&framing_terms(), 300, &mut common::rng(3));
    assert_eq!(rep.pairs, 300);
    assert!(rep.invariant());
}

#[test]
fn counting_diamonds_alone_is_not_invariant() {
    let g = parse_formula("1 D?\n").unwrap();
    let rep = check_formula_invariance(&g, 300, &mut common::rng(4));
    assert!(!rep.invariant());
    let f = &rep.failures[0];
    assert_ne!(f.values.0, f.values.1);
    assert_eq!(pairing(&g, &f.before).unwrap(), f.values.0);
}

#[test]
fn pairing_needs_one_strand() {
    assert_eq!(pairing(&framing_terms(), &XCGaussDiagram::identity(2)), Err(PolyakError::NotOneStrand(2)));
}

#[test]
fn formula_errors() {
    assert!(parse_formula("1 O1+\n").is_err());
    assert!(parse_formula("x D+\n").is_err());
    assert_eq!(parse_formula("1 D+\n2 Q\n").unwrap_err().line, 2);
}
