//! A compact run of the acceptance criteria for `xc selftest`.

use std::time::Instant;

use rand::Rng;

use super::rng_from_seed;
use crate::algebra::{builtin_uqsl2, check_axioms, MatrixXCAlgebra};
use crate::gauss::{RandomShape, XCGaussDiagram};
use crate::invariant::{iota_realize, long_knot_scalar, ve_compose, ve_tensor, Evaluator};
use crate::moves::{apply_random, builtin_patterns, parse_patterns, validate_pattern, MoveKind};
use crate::polyak::{
    framing_formula, map_i, map_i_inverse, parse_formula, print_formula, FormalDiagramSum, FRAMING_FORMULA,
};
use crate::ring::Laurent;
use crate::tangle::{from_gauss, to_gauss, XCTangleGraph};
use crate::virtualt::{
    bracket_oracle, forget, lift, plant_triangle, random_move_on_code, rotation_total, under_first_twice, writhe,
    CodeMove, SignedGaussCode,
};

#[derive(Debug, Clone)]
pub struct SelftestOptions {
    pub samples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone)]
pub struct CriterionResult {
    pub id: usize,
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

pub fn run_selftest(opts: &SelftestOptions) -> Vec<CriterionResult> {
    let ev = Evaluator::new(builtin_uqsl2()).expect("built-in algebra passes the axioms");
    let checks: Vec<(&'static str, Box<dyn Fn() -> (bool, String)>)> = vec![
        ("axioms", Box::new(axioms)),
        ("pattern soundness", Box::new(|| patterns(&ev))),
        ("move invariance of Z", Box::new(|| move_invariance(&ev, opts))),
        ("functoriality", Box::new(|| functoriality(&ev, opts))),
        ("section property", Box::new(|| section(opts))),
        ("rotation-writhe identity", Box::new(|| rot_writhe(opts))),
        ("framing formula", Box::new(|| framing(opts))),
        ("Jones comparison", Box::new(|| jones(&ev))),
        ("virtual move invariance", Box::new(|| virtual_invariance(&ev, opts))),
        ("subdiagram calculus", Box::new(|| subdiagram_calculus(opts))),
        ("round trips", Box::new(|| round_trips(opts))),
    ];
    checks
        .into_iter()
        .enumerate()
        .map(|(i, (name, f))| {
            let t = Instant::now();
            let (pass, detail) = f();
            CriterionResult { id: i + 1, name, pass, detail: format!("{detail} ({:.2}s)", t.elapsed().as_secs_f64()) }
        })
        .collect()
}

fn tally(ok: usize, total: usize) -> (bool, String) {
    (ok == total, format!("{ok}/{total}"))
}

fn axioms() -> (bool, String) {
    let rep = check_axioms(&builtin_uqsl2());
    match rep.first_failure() {
        None => (true, format!("{} checks", rep.results.len())),
        Some(f) => (false, format!("{} fails", f.name)),
    }
}

fn patterns(ev: &Evaluator<Laurent>) -> (bool, String) {
    let mut bad = Vec::new();
    let mut closures = 0;
    for p in builtin_patterns() {
        match validate_pattern(p, ev) {
            Ok(r) => {
                closures += r.closures;
                if !r.ok {
                    bad.push(p.name());
                }
            }
            Err(_) => bad.push(p.name()),
        }
    }
    (bad.is_empty(), format!("{} patterns, {closures} closures, failing: {bad:?}", builtin_patterns().len()))
}

fn diagram_shape() -> RandomShape {
    RandomShape { min_strands: 1, max_strands: 3, max_chords: 6, max_diamonds: 6, permute: true }
}

fn move_invariance(ev: &Evaluator<Laurent>, opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 3);
    let mut ok = 0;
    for _ in 0..opts.samples {
        let d = XCGaussDiagram::random(&mut rng, &diagram_shape());
        let Some((_, e)) = apply_random(&d, &MoveKind::ALL, &mut rng) else {
            continue;
        };
        let a = iota_realize(&ev.zeval(&d).expect("small"));
        let b = iota_realize(&ev.zeval(&e).expect("small"));
        ok += (a == b) as usize;
    }
    tally(ok, opts.samples)
}

fn functoriality(ev: &Evaluator<Laurent>, opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 4);
    let mut ok = 0;
    for _ in 0..opts.samples {
        let n = rng.gen_range(1..=3);
        let shape = RandomShape { min_strands: n, max_strands: n, max_chords: 3, max_diamonds: 3, permute: true };
        let (d1, d2) = (XCGaussDiagram::random(&mut rng, &shape), XCGaussDiagram::random(&mut rng, &shape));
        let composed = XCGaussDiagram::compose(&d2, &d1).expect("same size");
        let lhs = ev.zeval(&composed).expect("small");
        let rhs = ve_compose(&ev.zeval(&d2).expect("small"), &ev.zeval(&d1).expect("small")).expect("same size");
        let shape1 = RandomShape { min_strands: 1, max_strands: 2, ..shape.clone() };
        let (t1, t2) = (XCGaussDiagram::random(&mut rng, &shape1), XCGaussDiagram::random(&mut rng, &shape1));
        let tl = ev.zeval(&XCGaussDiagram::tensor(&t1, &t2)).expect("small");
        let tr = ve_tensor(&ev.zeval(&t1).expect("small"), &ev.zeval(&t2).expect("small"));
        ok += (lhs == rhs && tl == tr) as usize;
    }
    tally(ok, opts.samples)
}

fn section(opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 5);
    let ok = (0..opts.samples)
        .filter(|_| {
            let g = SignedGaussCode::random(&mut rng, 1, 3, 8);
            forget(&lift(&g)) == g
        })
        .count();
    tally(ok, opts.samples)
}

fn rot_writhe(opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 6);
    let ok = (0..opts.samples)
        .filter(|_| {
            let g = SignedGaussCode::random(&mut rng, 1, 1, 8);
            rotation_total(&lift(&g)) + writhe(&g) == under_first_twice(&g)
        })
        .count();
    tally(ok, opts.samples)
}

fn framing(opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 7);
    let mut ok = 0;
    for _ in 0..opts.samples {
        let g = SignedGaussCode::random(&mut rng, 1, 1, 6);
        let l = lift(&g);
        let f = framing_formula(&l).expect("one strand");
        let moved = apply_random(&l, &MoveKind::ALL, &mut rng).map(|(_, e)| framing_formula(&e).expect("one strand"));
        ok += (f == writhe(&g).into() && moved.is_none_or(|m| m == f)) as usize;
    }
    tally(ok, opts.samples)
}

pub(crate) const JONES_CODES: [(&str, &str); 4] = [
    ("unknot", "."),
    ("trefoil+", "O1+ U2+ O3+ U1+ O2+ U3+"),
    ("trefoil-", "O1- U2- O3- U1- O2- U3-"),
    ("figure-eight", "O1+ U2- O3- U1+ O4+ U3- O2- U4+"),
];

fn jones(ev: &Evaluator<Laurent>) -> (bool, String) {
    let mut bad = Vec::new();
    for (name, text) in JONES_CODES {
        let g = SignedGaussCode::parse(text).expect("fixed code");
        let z = long_knot_scalar(&ev.zeval(&lift(&g)).expect("one strand")).expect("scalar");
        let want = &Laurent::q_pow(-2 * writhe(&g) as i32) * &bracket_oracle(&g).expect("one strand");
        if z != want {
            bad.push(name);
        }
    }
    (bad.is_empty(), format!("{} knots, failing: {bad:?}", JONES_CODES.len()))
}

fn virtual_invariance(ev: &Evaluator<Laurent>, opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 9);
    let kinds = [CodeMove::R1f, CodeMove::R2, CodeMove::R3];
    let mut counts = [(0usize, 0usize); 3];
    for i in 0..opts.samples {
        let k = i % 3;
        let mut g = SignedGaussCode::random(&mut rng, 1, 3, 4);
        if kinds[k] == CodeMove::R3 {
            g = plant_triangle(&g, &mut rng);
        }
        let h = random_move_on_code(&g, kinds[k], &mut rng).expect("site exists");
        let a = iota_realize(&ev.zeval(&lift(&g)).expect("small"));
        let b = iota_realize(&ev.zeval(&lift(&h)).expect("small"));
        counts[k].0 += (a == b) as usize;
        counts[k].1 += 1;
    }
    let ok: usize = counts.iter().map(|c| c.0).sum();
    let detail = format!(
        "R1f {}/{}, R2 {}/{}, R3 {}/{}",
        counts[0].0, counts[0].1, counts[1].0, counts[1].1, counts[2].0, counts[2].1
    );
    (ok == opts.samples, detail)
}

fn subdiagram_calculus(opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 10);
    let shape = RandomShape { min_strands: 1, max_strands: 2, max_chords: 4, max_diamonds: 3, permute: true };
    let ok = (0..opts.samples)
        .filter(|_| {
            let d = XCGaussDiagram::random(&mut rng, &shape);
            map_i_inverse(&map_i(&d)) == FormalDiagramSum::single(&d)
        })
        .count();
    tally(ok, opts.samples)
}

fn round_trips(opts: &SelftestOptions) -> (bool, String) {
    let mut rng = rng_from_seed(opts.seed ^ 11);
    let mut ok = 0;
    for _ in 0..opts.samples {
        let d = XCGaussDiagram::random(&mut rng, &diagram_shape());
        let t = from_gauss(&d).expect("valid");
        let back = to_gauss(&t).expect("valid");
        let t2 = from_gauss(&back).expect("valid");
        let g = SignedGaussCode::random(&mut rng, 1, 3, 5);
        let good = back.canonical_key() == d.canonical_key()
            && t2.isomorphic(&t)
            && XCGaussDiagram::parse(&d.to_string()).ok() == Some(d.clone())
            && XCTangleGraph::parse(&t.to_string()).ok() == Some(t.clone())
            && SignedGaussCode::parse(&g.to_string()).ok() == Some(g);
        ok += good as usize;
    }
    let alg = builtin_uqsl2();
    let fixed = MatrixXCAlgebra::<Laurent>::parse(&alg.to_string()).ok() == Some(alg)
        && print_formula(&parse_formula(FRAMING_FORMULA).expect("fixed")) == FRAMING_FORMULA
        && builtin_patterns().iter().all(|p| parse_patterns(&p.to_string()).ok() == Some(vec![p.clone()]));
    (
        ok == opts.samples && fixed,
        format!("{ok}/{} random, fixed formats {}", opts.samples, if fixed { "ok" } else { "FAIL" }),
    )
}
