mod common;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;
use xcknot::algebra::{builtin_uqsl2, check_axioms, trivial_algebra, AnyAlgebra, Matrix, MatrixXCAlgebra};
use xcknot::ring::{Laurent, Scalar};

/// Plain coefficient maps, multiplied term by term.
type Naive = BTreeMap<i32, i64>;

fn naive_mul(a: &Naive, b: &Naive) -> Naive {
    let mut out = Naive::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            *out.entry(ea + eb).or_default() += ca * cb;
        }
    }
    out.retain(|_, c| *c != 0);
    out
}

fn to_laurent(a: &Naive) -> Laurent {
    Laurent::from_terms(a.iter().map(|(e, c)| (*e, BigInt::from(*c))))
}

fn eval(a: &Laurent, q: &BigRational) -> BigRational {
    a.terms().fold(BigRational::from_integer(0.into()), |acc, (e, c)| {
        acc + BigRational::from_integer(c.clone()) * num_traits::pow::Pow::pow(q, e)
    })
}

fn naive() -> impl Strategy<Value = Naive> {
    prop::collection::btree_map(-6i32..7, -4i64..5, 0..6)
}

proptest! {
    #[test]
    fn multiplication_matches_naive(a in naive(), b in naive()) {
        prop_assert_eq!(&to_laurent(&a) * &to_laurent(&b), to_laurent(&naive_mul(&a, &b)));
    }

    #[test]
    fn evaluation_is_a_homomorphism(a in naive(), b in naive(), p in 1i64..5, r in 1i64..5) {
        let q = BigRational::new(p.into(), r.into());
        let (x, y) = (to_laurent(&a), to_laurent(&b));
        prop_assert_eq!(eval(&(&x + &y), &q), eval(&x, &q) + eval(&y, &q));
        prop_assert_eq!(eval(&(&x * &y), &q), eval(&x, &q) * eval(&y, &q));
        prop_assert_eq!(eval(&(&x - &y), &q), eval(&x, &q) - eval(&y, &q));
    }

    #[test]
    fn no_stored_zeros_and_text_round_trips(a in naive()) {
        let x = to_laurent(&a);
        prop_assert!(x.terms().all(|(_, c)| *c != BigInt::from(0)));
        let back: Laurent = x.to_string().parse().unwrap();
        prop_assert_eq!(back, x);
    }

    #[test]
    fn ring_laws(a in naive(), b in naive(), c in naive()) {
        let (x, y, z) = (to_laurent(&a), to_laurent(&b), to_laurent(&c));
        prop_assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        prop_assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
        prop_assert_eq!(&x + &(-&x), Laurent::zero());
    }

    #[test]
    fn mixed_product(a in prop::collection::vec(-3i64..4, 4), b in prop::collection::vec(-3i64..4, 4),
                     c in prop::collection::vec(-3i64..4, 4), e in prop::collection::vec(-3i64..4, 4)) {
        let m = |v: &[i64]| Matrix::from_rows(vec![
            vec![BigInt::from(v[0]), BigInt::from(v[1])],
            vec![BigInt::from(v[2]), BigInt::from(v[3])],
        ]).unwrap();
        let (a, b, c, e) = (m(&a), m(&b), m(&c), m(&e));
        let lhs = a.tensor(&b).mul(&c.tensor(&e)).unwrap();
        let rhs = a.mul(&c).unwrap().tensor(&b.mul(&e).unwrap());
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn leg_permutations_compose(seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        let mut rng = common::rng(seed);
        let mut s: Vec<usize> = (0..3).collect();
        let mut t: Vec<usize> = (0..3).collect();
        s.shuffle(&mut rng);
        t.shuffle(&mut rng);
        let st: Vec<usize> = (0..3).map(|i| s[t[i]]).collect();
        let ps: Matrix<BigInt> = Matrix::leg_permutation(2, &s);
        let pt = Matrix::leg_permutation(2, &t);
        prop_assert_eq!(ps.mul(&pt).unwrap(), Matrix::leg_permutation(2, &st));
    }
}

#[test]
fn builtin_entries() {
    let a = builtin_uqsl2();
    let l = |s: &str| s.parse::<Laurent>().unwrap();
    assert_eq!(a.r.get(1, 2), &l("q^-1 - q"));
    assert_eq!(a.kappa.get(0, 0), &l("q^-1"));
    assert_eq!(a.kappa.get(1, 1), &l("q"));
    assert!(a.r.mul(&a.rinv).unwrap().is_identity());
    assert!(a.kappa.mul(&a.kappainv).unwrap().is_identity());
}

#[test]
fn every_axiom_is_reported() {
    let rep = check_axioms(&builtin_uqsl2());
    assert!(rep.all_pass(), "{rep}");
    for name in ["XC0", "XC1f", "XC2", "XC3"] {
        assert!(rep.results.iter().any(|r| r.name.starts_with(name)), "{name} missing from\n{rep}");
    }
}

#[test]
fn swapping_kappa_breaks_the_axioms() {
    let mut a = builtin_uqsl2();
    std::mem::swap(&mut a.kappa, &mut a.kappainv);
    assert!(!check_axioms(&a).all_pass());
}

#[test]
fn q_inversion_gives_another_instance() {
    let a = builtin_uqsl2();
    let flip = |m: &Matrix<Laurent>| {
        let mut out = Matrix::zeros(m.rows(), m.cols());
        for (r, c, v) in m.nonzeros() {
            out.set(r, c, v.scale_exponents(-1));
        }
        out
    };
    let b = MatrixXCAlgebra::new(2, flip(&a.r), flip(&a.rinv), flip(&a.kappa), flip(&a.kappainv)).unwrap();
    assert!(check_axioms(&b).all_pass());
}

#[test]
fn rational_algebra_files_parse() {
    let text = trivial_algebra::<BigRational>().to_string();
    match AnyAlgebra::parse(&text).unwrap() {
        AnyAlgebra::Rational(a) => assert_eq!(a, trivial_algebra()),
        other => panic!("wrong ring: {other:?}"),
    }
    assert_eq!(<BigRational as Scalar>::KIND, "rational");
}
