mod common;

use std::collections::HashMap;

use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::Rng;
use xcknot::gauss::{ChordId, Event, GaussError, RandomShape, XCGaussDiagram};
use xcknot::tangle::{from_gauss, to_gauss, TangleError, XCTangleGraph};

fn random(seed: u64) -> XCGaussDiagram {
    XCGaussDiagram::random(&mut common::rng(seed), &RandomShape::default())
}

fn relabel(d: &XCGaussDiagram, seed: u64) -> XCGaussDiagram {
    let mut ids: Vec<ChordId> = (1..=d.chords.len() as ChordId).map(|i| i * 7 + 3).collect();
    ids.shuffle(&mut common::rng(seed));
    let map: HashMap<ChordId, ChordId> = d.chords.iter().map(|(c, _)| *c).zip(ids).collect();
    let ev = |e: &Event| match *e {
        Event::Over(c) => Event::Over(map[&c]),
        Event::Under(c) => Event::Under(map[&c]),
        e => e,
    };
    let mut chords: Vec<_> = d.chords.iter().map(|(c, s)| (map[c], *s)).collect();
    chords.reverse();
    XCGaussDiagram {
        top: d.top.clone(),
        chords,
        strands: d.strands.iter().map(|s| s.iter().map(ev).collect()).collect(),
    }
}

proptest! {
    #[test]
    fn text_round_trip(seed in any::<u64>()) {
        let d = random(seed);
        prop_assert!(d.validate().is_ok());
        prop_assert_eq!(XCGaussDiagram::parse(&d.to_string()).unwrap(), d);
    }

    #[test]
    fn canonical_forms_ignore_labels(seed in any::<u64>()) {
        let d = random(seed);
        let e = relabel(&d, seed ^ 1);
        prop_assert_eq!(d.canonical_key(), e.canonical_key());
        prop_assert_eq!(d.canonical_code(), e.canonical_code());
        prop_assert_eq!(XCGaussDiagram::from_canonical_code(&e.canonical_code()).unwrap(), d.renumbered());
        let key = d.renumbered().to_string().trim_end().replace('\n', "; ");
        prop_assert_eq!(d.canonical_key().0, key);
    }

    #[test]
    fn code_and_key_agree(a in any::<u64>(), b in any::<u64>()) {
        let shape = RandomShape { min_strands: 1, max_strands: 2, max_chords: 1, max_diamonds: 2, permute: true };
        let x = XCGaussDiagram::random(&mut common::rng(a), &shape);
        let y = XCGaussDiagram::random(&mut common::rng(b), &shape);
        prop_assert_eq!(x.canonical_key() == y.canonical_key(), x.canonical_code() == y.canonical_code());
    }

    #[test]
    fn tangle_round_trips(seed in any::<u64>()) {
        let d = random(seed);
        let t = from_gauss(&d).unwrap();
        prop_assert!(t.validate().is_ok());
        prop_assert_eq!(to_gauss(&t).unwrap(), d.clone());
        prop_assert!(from_gauss(&to_gauss(&t).unwrap()).unwrap().isomorphic(&t));
        prop_assert_eq!(XCTangleGraph::parse(&t.to_string()).unwrap(), t.clone());
        prop_assert!(t.canonical().isomorphic(&t));
    }

    #[test]
    fn conversions_are_monoidal_functors(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let n = rng.gen_range(0..=3);
        let shape = RandomShape { min_strands: n, max_strands: n, ..RandomShape::default() };
        let (a, b) = (XCGaussDiagram::random(&mut rng, &shape), XCGaussDiagram::random(&mut rng, &shape));
        let (ta, tb) = (from_gauss(&a).unwrap(), from_gauss(&b).unwrap());
        let composed = to_gauss(&XCTangleGraph::compose(&ta, &tb).unwrap()).unwrap();
        prop_assert_eq!(composed.canonical_key(), XCGaussDiagram::compose(&a, &b).unwrap().canonical_key());
        let tensored = to_gauss(&XCTangleGraph::tensor(&ta, &tb)).unwrap();
        prop_assert_eq!(tensored.canonical_key(), XCGaussDiagram::tensor(&a, &b).canonical_key());
    }

    #[test]
    fn merge_commutes_with_conversion(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let d = random(seed);
        let mut parts = Vec::new();
        let mut left = d.n();
        while left > 0 || (parts.len() < 2 && rng.gen_bool(0.3)) {
            let k = rng.gen_range(0..=left);
            parts.push(k);
            left -= k;
        }
        let via_tangle = to_gauss(&from_gauss(&d).unwrap().action_merge(&parts).unwrap()).unwrap();
        prop_assert_eq!(via_tangle.canonical_key(), d.merge(&parts).unwrap().canonical_key());
    }

    #[test]
    fn compose_is_associative_with_units(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let shape = RandomShape { min_strands: 2, max_strands: 2, ..RandomShape::default() };
        let [a, b, c] = [(); 3].map(|_| XCGaussDiagram::random(&mut rng, &shape));
        let ab_c = XCGaussDiagram::compose(&XCGaussDiagram::compose(&a, &b).unwrap(), &c).unwrap();
        let a_bc = XCGaussDiagram::compose(&a, &XCGaussDiagram::compose(&b, &c).unwrap()).unwrap();
        prop_assert_eq!(ab_c.canonical_key(), a_bc.canonical_key());
        let id = XCGaussDiagram::identity(2);
        prop_assert_eq!(XCGaussDiagram::compose(&id, &a).unwrap().canonical_key(), a.canonical_key());
        prop_assert_eq!(XCGaussDiagram::compose(&a, &id).unwrap().canonical_key(), a.canonical_key());
    }
}

#[test]
fn single_crossing() {
    let t = XCTangleGraph::crossing(1);
    let d = to_gauss(&t).unwrap();
    assert_eq!(d.to_string(), "strands: 2\ntop: 2 1\nchords: 3:+\nstrand 1: O3\nstrand 2: U3\n");
    let m = to_gauss(&t.action_merge(&[2]).unwrap()).unwrap();
    assert_eq!(m.strands, vec![vec![Event::Under(3), Event::Over(3)]]);
    let neg = to_gauss(&XCTangleGraph::crossing(-1)).unwrap();
    assert_eq!(neg.strands, vec![vec![Event::Under(3)], vec![Event::Over(3)]]);
}

#[test]
fn spinner_is_one_diamond() {
    for r in [1, -1] {
        let d = to_gauss(&XCTangleGraph::spinner(r)).unwrap();
        assert_eq!(d.strands, vec![vec![Event::Diamond(r)]]);
    }
    assert_eq!(to_gauss(&XCTangleGraph::spinner(0)).unwrap(), XCGaussDiagram::identity(1));
}

#[test]
fn permutation_action_moves_ends() {
    let t = from_gauss(
        &XCGaussDiagram::parse("strands: 3\nchords: 1:-\nstrand 1: O1\nstrand 2: U1\nstrand 3: D+\n").unwrap(),
    )
    .unwrap();
    let p = t.action_permute(&[2, 0, 1]).unwrap();
    let d = to_gauss(&p).unwrap();
    assert_eq!(d.strands[2], vec![Event::Over(1)]);
    assert_eq!(d.strands[0], vec![Event::Under(1)]);
    assert!(matches!(t.action_permute(&[0, 0, 1]), Err(TangleError::SizeMismatch(..))));
}

#[test]
fn gauss_validation_errors() {
    let bad = |text: &str| XCGaussDiagram::parse(text).unwrap().validate().unwrap_err();
    assert_eq!(bad("strands: 1\nchords: 1:+\nstrand 1: O1\n"), GaussError::MissingUnder(1));
    assert_eq!(bad("strands: 1\nchords: 1:+\nstrand 1: O1 U1 U1\n"), GaussError::DuplicateUnder(1));
    assert_eq!(bad("strands: 1\nchords: 1:+\nstrand 1: O1 U1 O2\n"), GaussError::UnknownChord(2));
    assert_eq!(bad("strands: 2\ntop: 1 1\nstrand 1:\nstrand 2:\n"), GaussError::TopNotBijection);
    let e = XCGaussDiagram::parse("strands: 1\nstrand 1: O1 Q\n").unwrap_err();
    assert_eq!((e.line, e.col), (2, 14));
}

#[test]
fn tangle_validation_errors() {
    let good = XCTangleGraph::crossing(1).to_string();
    let dropped: String = good.lines().filter(|l| !l.contains("-> 3:1")).map(|l| format!("{l}\n")).collect();
    let t = XCTangleGraph::parse(&dropped).unwrap();
    assert!(matches!(t.validate(), Err(TangleError::PortUnused(..))));
    let e = XCTangleGraph::parse("vertex 1 sideways\n").unwrap_err();
    assert_eq!(e.line, 1);
}
