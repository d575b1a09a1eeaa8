//! The universal invariant `Z_A` with values in the virtual category of elements.

use std::collections::HashMap;

use crate::algebra::{check_axioms, digits, undigits, Matrix, MatrixXCAlgebra};
use crate::gauss::{ChordId, Event, GaussError, XCGaussDiagram};
use crate::ring::Scalar;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum InvariantError {
    #[error("invalid diagram: {0}")]
    Invalid(#[from] GaussError),
    #[error("algebra fails the axioms: {0}")]
    Axioms(String),
    #[error("d^n = {0} exceeds the evaluation bound {1}")]
    TooLarge(usize, usize),
    #[error("strand count mismatch: {0} vs {1}")]
    SizeMismatch(usize, usize),
    #[error("expected a one-strand value, got {0} strands")]
    NotOneStrand(usize),
    #[error("value is not scalar: entry ({0}, {1}) is {2}")]
    NotScalar(usize, usize, String),
}

/// An element of `End(V)^{(x)n}` realized on `V^{(x)n}`, paired with a permutation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantValue<S: Scalar> {
    pub n: usize,
    pub d: usize,
    pub value: Matrix<S>,
    pub sigma: Vec<usize>,
}

impl<S: Scalar> InvariantValue<S> {
    pub fn identity(d: usize, n: usize) -> Self {
        InvariantValue { n, d, value: Matrix::identity(d.pow(n as u32)), sigma: (0..n).collect() }
    }
}

/// An algebra that has passed `check_axioms`, plus evaluation limits.
#[derive(Debug, Clone)]
pub struct Evaluator<S: Scalar> {
    alg: MatrixXCAlgebra<S>,
    max_dim: usize,
    r_terms: [Vec<RTerm<S>>; 2],
    k_terms: [Vec<KTerm<S>>; 2],
}

#[derive(Debug, Clone)]
struct RTerm<S> {
    over_row: usize,
    over_col: usize,
    under_row: usize,
    under_col: usize,
    coef: S,
}

#[derive(Debug, Clone)]
struct KTerm<S> {
    row: usize,
    col: usize,
    coef: S,
}

pub const DEFAULT_MAX_DIM: usize = 4096;

impl<S: Scalar> Evaluator<S> {
    pub fn new(alg: MatrixXCAlgebra<S>) -> Result<Self, InvariantError> {
        let rep = check_axioms(&alg);
        if let Some(f) = rep.first_failure() {
            return Err(InvariantError::Axioms(format!("{} {}", f.name, f.detail.clone().unwrap_or_default())));
        }
        Ok(Self::new_unchecked(alg))
    }

    /// Skips the axiom check. Values are then not tangle invariants.
    pub fn new_unchecked(alg: MatrixXCAlgebra<S>) -> Self {
        let d = alg.d;
        let r_terms = [false, true].map(|inv| {
            alg.rmat(inv)
                .nonzeros()
                .map(|(r, c, v)| RTerm {
                    over_row: r / d,
                    under_row: r % d,
                    over_col: c / d,
                    under_col: c % d,
                    coef: v.clone(),
                })
                .collect()
        });
        let k_terms = [false, true]
            .map(|inv| alg.kmat(inv).nonzeros().map(|(r, c, v)| KTerm { row: r, col: c, coef: v.clone() }).collect());
        Evaluator { alg, max_dim: DEFAULT_MAX_DIM, r_terms, k_terms }
    }

    pub fn with_max_dim(mut self, max_dim: usize) -> Self {
        self.max_dim = max_dim;
        self
    }

    pub fn algebra(&self) -> &MatrixXCAlgebra<S> {
        &self.alg
    }

    pub fn d(&self) -> usize {
        self.alg.d
    }

    /// `Z_A(d)`: the bead state sum. Every chord picks one nonzero entry of `R^{sign}`
    /// (over endpoint on the first leg), every diamond one entry of `kappa^{-sign}`, and
    /// the elementary matrices along each strand must chain, later beads on the left.
    pub fn zeval(&self, d: &XCGaussDiagram) -> Result<InvariantValue<S>, InvariantError> {
        d.validate()?;
        let dim = self.alg.d;
        let n = d.n();
        let size = dim.checked_pow(n as u32).unwrap_or(usize::MAX);
        if size > self.max_dim {
            return Err(InvariantError::TooLarge(size, self.max_dim));
        }
        let signs = d.chord_signs();
        let mut slot: HashMap<ChordId, usize> = HashMap::new();
        for (i, (c, _)) in d.chords.iter().enumerate() {
            slot.insert(*c, i);
        }
        let chord_sign: Vec<i8> = d.chords.iter().map(|(c, _)| signs[c]).collect();
        let strands: Vec<Vec<Step>> = d
            .strands
            .iter()
            .map(|evs| {
                evs.iter()
                    .map(|e| match *e {
                        Event::Over(c) => Step::Over(slot[&c]),
                        Event::Under(c) => Step::Under(slot[&c]),
                        Event::Diamond(s) => Step::Diamond(s),
                    })
                    .collect()
            })
            .collect();
        let mut st = State {
            chosen: vec![None; d.chords.len()],
            rows: vec![0; n],
            cols: vec![0; n],
            out: Matrix::zeros(size, size),
        };
        self.walk(&strands, &chord_sign, 0, S::one(), &mut st);
        Ok(InvariantValue { n, d: dim, value: st.out, sigma: d.top.clone() })
    }

    fn walk(&self, strands: &[Vec<Step>], chord_sign: &[i8], s: usize, w: S, st: &mut State<S>) {
        if s == strands.len() {
            let r = undigits(st.rows.iter().copied(), self.alg.d);
            let c = undigits(st.cols.iter().copied(), self.alg.d);
            st.out.add_at(r, c, &w);
            return;
        }
        for a in 0..self.alg.d {
            st.cols[s] = a;
            self.step(strands, chord_sign, s, 0, a, w.clone(), st);
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn step(
        &self,
        strands: &[Vec<Step>],
        chord_sign: &[i8],
        s: usize,
        pos: usize,
        cur: usize,
        w: S,
        st: &mut State<S>,
    ) {
        let evs = &strands[s];
        if pos == evs.len() {
            st.rows[s] = cur;
            self.walk(strands, chord_sign, s + 1, w, st);
            return;
        }
        match evs[pos] {
            Step::Diamond(sign) => {
                // D+ carries kappa^-1, D- carries kappa
                for t in &self.k_terms[(sign > 0) as usize] {
                    if t.col == cur {
                        self.step(strands, chord_sign, s, pos + 1, t.row, w.mul(&t.coef), st);
                    }
                }
            }
            Step::Over(k) | Step::Under(k) => {
                let over = matches!(evs[pos], Step::Over(_));
                let terms = &self.r_terms[(chord_sign[k] < 0) as usize];
                match st.chosen[k] {
                    Some(ti) => {
                        let t = &terms[ti];
                        let (col, row) = if over { (t.over_col, t.over_row) } else { (t.under_col, t.under_row) };
                        if col == cur {
                            self.step(strands, chord_sign, s, pos + 1, row, w, st);
                        }
                    }
                    None => {
                        for (ti, t) in terms.iter().enumerate() {
                            let (col, row) = if over { (t.over_col, t.over_row) } else { (t.under_col, t.under_row) };
                            if col != cur {
                                continue;
                            }
                            st.chosen[k] = Some(ti);
                            self.step(strands, chord_sign, s, pos + 1, row, w.mul(&t.coef), st);
                        }
                        st.chosen[k] = None;
                    }
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Step {
    Over(usize),
    Under(usize),
    Diamond(i8),
}

struct State<S: Scalar> {
    chosen: Vec<Option<usize>>,
    rows: Vec<usize>,
    cols: Vec<usize>,
    out: Matrix<S>,
}

/// `Z_A(d)` after checking the algebra's axioms.
pub fn zeval<S: Scalar>(d: &XCGaussDiagram, a: &MatrixXCAlgebra<S>) -> Result<InvariantValue<S>, InvariantError> {
    Evaluator::new(a.clone())?.zeval(d)
}

/// `(u, sigma) o (v, tau) = (P_{tau^-1}(u) . v, sigma tau)`.
pub fn ve_compose<S: Scalar>(
    u: &InvariantValue<S>,
    v: &InvariantValue<S>,
) -> Result<InvariantValue<S>, InvariantError> {
    if u.n != v.n || u.d != v.d {
        return Err(InvariantError::SizeMismatch(u.n, v.n));
    }
    let moved = u.value.permute_legs(u.d, &v.sigma);
    let value = moved.mul(&v.value).expect("same size");
    let sigma = (0..u.n).map(|i| u.sigma[v.sigma[i]]).collect();
    Ok(InvariantValue { n: u.n, d: u.d, value, sigma })
}

pub fn ve_tensor<S: Scalar>(u: &InvariantValue<S>, v: &InvariantValue<S>) -> InvariantValue<S> {
    let mut sigma = u.sigma.clone();
    sigma.extend(v.sigma.iter().map(|t| t + u.n));
    InvariantValue { n: u.n + v.n, d: u.d, value: u.value.tensor(&v.value), sigma }
}

/// `sigma_* . u` as a single matrix on `V^{(x)n}`.
pub fn iota_realize<S: Scalar>(u: &InvariantValue<S>) -> Matrix<S> {
    Matrix::leg_permutation(u.d, &u.sigma).mul(&u.value).expect("same size")
}

/// The scalar `lambda` with `u.value = lambda . Id` for a one-strand value.
pub fn long_knot_scalar<S: Scalar>(u: &InvariantValue<S>) -> Result<S, InvariantError> {
    if u.n != 1 {
        return Err(InvariantError::NotOneStrand(u.n));
    }
    let lambda = u.value.get(0, 0).clone();
    for r in 0..u.d {
        for c in 0..u.d {
            let want = if r == c { lambda.clone() } else { S::zero() };
            if *u.value.get(r, c) != want {
                return Err(InvariantError::NotScalar(r, c, u.value.get(r, c).to_string()));
            }
        }
    }
    Ok(lambda)
}

/// Decodes a leg-major index into per-leg indices.
pub fn leg_indices(x: usize, d: usize, n: usize) -> Vec<usize> {
    digits(x, d, n)
}
