mod common;

use std::path::Path;

use proptest::prelude::*;
use xcknot::invariant::{iota_realize, long_knot_scalar};
use xcknot::ring::Laurent;
use xcknot::virtualt::*;

fn code(s: &str) -> SignedGaussCode {
    SignedGaussCode::parse(s).unwrap()
}

fn z_scalar(g: &SignedGaussCode) -> Laurent {
    long_knot_scalar(&common::evaluator().zeval(&lift(g)).unwrap()).unwrap()
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn lift_is_a_section(seed in any::<u64>()) {
        let g = SignedGaussCode::random(&mut common::rng(seed), 1, 3, 8);
        let l = lift(&g);
        prop_assert!(l.validate().is_ok());
        prop_assert_eq!(forget(&l), g.clone());
        prop_assert_eq!(SignedGaussCode::parse(&g.to_string()).unwrap(), g);
    }

    #[test]
    fn rotation_plus_writhe(seed in any::<u64>()) {
        let g = SignedGaussCode::random(&mut common::rng(seed), 1, 1, 8);
        prop_assert_eq!(rotation_total(&lift(&g)) + writhe(&g), under_first_twice(&g));
    }

    #[test]
    fn first_reidemeister_move_is_seen_as_framing(seed in any::<u64>()) {
        let mut rng = common::rng(seed);
        let g = SignedGaussCode::random(&mut rng, 1, 1, 3);
        let h = random_move_on_code(&g, CodeMove::R1f, &mut rng).unwrap();
        let ev = common::evaluator();
        prop_assert_eq!(iota_realize(&ev.zeval(&lift(&g)).unwrap()), iota_realize(&ev.zeval(&lift(&h)).unwrap()));
    }
}

#[test]
fn bracket_goldens_are_current() {
    for name in ["unknot", "trefoil-right", "trefoil-left", "figure-eight"] {
        let g = code(golden(&format!("{name}.code")).trim());
        let want: Laurent = golden(&format!("{name}.bracket")).trim().parse().unwrap();
        assert_eq!(bracket_oracle(&g).unwrap(), want, "{name}");
    }
}

#[test]
fn jones_identity_on_small_knots() {
    for s in [
        ".",
        "O1+ U1+",
        "U1- O1-",
        "O1+ U2+ O3+ U1+ O2+ U3+",
        "O1- U2- O3- U1- O2- U3-",
        "O1+ U2- O3- U1+ O4+ U3- O2- U4+",
    ] {
        let g = code(s);
        let expect = &Laurent::q_pow(-2 * writhe(&g) as i32) * &bracket_oracle(&g).unwrap();
        assert_eq!(z_scalar(&g), expect, "{s}");
    }
}

#[test]
fn trefoil_values() {
    let r = code("O1+ U2+ O3+ U1+ O2+ U3+");
    assert_eq!(z_scalar(&r), "q^-4 + 1 - q^2".parse().unwrap());
    let l = code("O1- U2- O3- U1- O2- U3-");
    assert_eq!(z_scalar(&l), "-q^-2 + 1 + q^4".parse().unwrap());
    let f8 = code("O1+ U2- O3- U1+ O4+ U3- O2- U4+");
    assert_eq!(z_scalar(&f8), "q^4 - q^2 + 1 - q^-2 + q^-4".parse().unwrap());
}

#[test]
fn bracket_refuses_several_strands() {
    assert!(bracket_oracle(&SignedGaussCode::empty(2)).is_err());
}
