//! Matrix XC-algebras: `End(V)` with an R-matrix and a balancing element, leg embeddings
//! on `V^{(x)n}` and the exact axiom checker.

use std::fmt;

use num_rational::BigRational;

use crate::parse::{content_lines, split_key, ParseError};
use crate::ring::{Laurent, Scalar};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AlgebraError {
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("leg index out of range: {0}")]
    LegRange(String),
    #[error("R must act on two distinct legs, got {0} twice")]
    SameLeg(usize),
    #[error("algebra fails the axioms: {0}")]
    Axioms(String),
}

/// Dense matrix over an exact scalar type, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i * n + i] = S::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>) -> Result<Self, AlgebraError> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return Err(AlgebraError::Dimension("ragged rows".into()));
        }
        Ok(Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() })
    }

    /// Diagonal matrix.
    pub fn diag(entries: Vec<S>) -> Self {
        let n = entries.len();
        let mut m = Self::zeros(n, n);
        for (i, e) in entries.into_iter().enumerate() {
            m.data[i * n + i] = e;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: S) {
        self.data[r * self.cols + c] = v;
    }

    pub fn add_at(&mut self, r: usize, c: usize, v: &S) {
        let e = &mut self.data[r * self.cols + c];
        *e = e.add(v);
    }

    /// Nonzero entries as `(row, col, value)`.
    pub fn nonzeros(&self) -> impl Iterator<Item = (usize, usize, &S)> {
        let cols = self.cols;
        self.data.iter().enumerate().filter(|(_, v)| !v.is_zero()).map(move |(i, v)| (i / cols, i % cols, v))
    }

    pub fn mul(&self, other: &Matrix<S>) -> Result<Matrix<S>, AlgebraError> {
        if self.cols != other.rows {
            return Err(AlgebraError::Dimension(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        out.add_at(i, j, &a.mul(b));
                    }
                }
            }
        }
        Ok(out)
    }

    /// Kronecker product, first factor major.
    pub fn tensor(&self, other: &Matrix<S>) -> Matrix<S> {
        let mut out = Self::zeros(self.rows * other.rows, self.cols * other.cols);
        for (i, j, a) in self.nonzeros() {
            for (k, l, b) in other.nonzeros() {
                out.set(i * other.rows + k, j * other.cols + l, a.mul(b));
            }
        }
        out
    }

    pub fn scale(&self, s: &S) -> Matrix<S> {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(|v| v.mul(s)).collect() }
    }

    pub fn is_identity(&self) -> bool {
        self.rows == self.cols && *self == Self::identity(self.rows)
    }

    /// First entry where the two matrices differ.
    pub fn first_difference(&self, other: &Matrix<S>) -> Option<String> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some(format!("shape {}x{} vs {}x{}", self.rows, self.cols, other.rows, other.cols));
        }
        for r in 0..self.rows {
            for c in 0..self.cols {
                if self.get(r, c) != other.get(r, c) {
                    return Some(format!("entry ({r}, {c}): {} vs {}", self.get(r, c), other.get(r, c)));
                }
            }
        }
        None
    }

    /// Reorders tensor legs of a `d^n x d^n` matrix: leg `i` of the result is leg `from[i]` of `self`.
    pub fn permute_legs(&self, d: usize, from: &[usize]) -> Matrix<S> {
        let n = from.len();
        let mut out = Self::zeros(self.rows, self.cols);
        for (r, c, v) in self.nonzeros() {
            let rd = digits(r, d, n);
            let cd = digits(c, d, n);
            let nr = undigits(from.iter().map(|&k| rd[k]), d);
            let nc = undigits(from.iter().map(|&k| cd[k]), d);
            out.set(nr, nc, v.clone());
        }
        out
    }

    /// Permutation matrix sending factor `i` of `V^{(x)n}` to position `sigma[i]`.
    pub fn leg_permutation(d: usize, sigma: &[usize]) -> Matrix<S> {
        let n = sigma.len();
        let size = d.pow(n as u32);
        let mut out = Self::zeros(size, size);
        for c in 0..size {
            let cd = digits(c, d, n);
            let mut rd = vec![0; n];
            for i in 0..n {
                rd[sigma[i]] = cd[i];
            }
            out.set(undigits(rd.into_iter(), d), c, S::one());
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            for c in 0..self.cols {
                if c > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.get(r, c))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix {}x{}:\n{self}", self.rows, self.cols)
    }
}

pub fn mat_mul<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Result<Matrix<S>, AlgebraError> {
    a.mul(b)
}

pub fn mat_tensor<S: Scalar>(a: &Matrix<S>, b: &Matrix<S>) -> Matrix<S> {
    a.tensor(b)
}

/// Base-`d` digits of `x`, most significant (leg 0) first.
pub(crate) fn digits(mut x: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for i in (0..n).rev() {
        out[i] = x % d;
        x /= d;
    }
    out
}

pub(crate) fn undigits(it: impl Iterator<Item = usize>, d: usize) -> usize {
    it.fold(0, |acc, x| acc * d + x)
}

/// `End(V)` with `R, R^-1` on `V (x) V` and `kappa, kappa^-1` on `V`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixXCAlgebra<S: Scalar> {
    pub d: usize,
    pub r: Matrix<S>,
    pub rinv: Matrix<S>,
    pub kappa: Matrix<S>,
    pub kappainv: Matrix<S>,
}

impl<S: Scalar> MatrixXCAlgebra<S> {
    pub fn new(
        d: usize,
        r: Matrix<S>,
        rinv: Matrix<S>,
        kappa: Matrix<S>,
        kappainv: Matrix<S>,
    ) -> Result<Self, AlgebraError> {
        for (name, m, size) in
            [("R", &r, d * d), ("Rinv", &rinv, d * d), ("kappa", &kappa, d), ("kappainv", &kappainv, d)]
        {
            if m.rows() != size || m.cols() != size {
                return Err(AlgebraError::Dimension(format!("{name} must be {size}x{size}")));
            }
        }
        Ok(MatrixXCAlgebra { d, r, rinv, kappa, kappainv })
    }

    pub fn rmat(&self, inverse: bool) -> &Matrix<S> {
        if inverse {
            &self.rinv
        } else {
            &self.r
        }
    }

    pub fn kmat(&self, inverse: bool) -> &Matrix<S> {
        if inverse {
            &self.kappainv
        } else {
            &self.kappa
        }
    }

    /// `R^{+-1}` with its first leg on factor `i` and second on factor `j` (1-based) of `V^{(x)n}`.
    pub fn embed_r(&self, i: usize, j: usize, n: usize, inverse: bool) -> Result<Matrix<S>, AlgebraError> {
        if i == 0 || j == 0 || i > n || j > n {
            return Err(AlgebraError::LegRange(format!("({i}, {j}) with n = {n}")));
        }
        if i == j {
            return Err(AlgebraError::SameLeg(i));
        }
        let d = self.d;
        let size = d.pow(n as u32);
        let base = self.rmat(inverse);
        let mut out = Matrix::zeros(size, size);
        for (r, c, v) in base.nonzeros() {
            let (ri, rj, ci, cj) = (r / d, r % d, c / d, c % d);
            for rest in 0..d.pow(n as u32 - 2) {
                let others = digits(rest, d, n - 2);
                let mut it = others.iter();
                let mut rd = vec![0; n];
                let mut cd = vec![0; n];
                for k in 0..n {
                    if k == i - 1 {
                        rd[k] = ri;
                        cd[k] = ci;
                    } else if k == j - 1 {
                        rd[k] = rj;
                        cd[k] = cj;
                    } else {
                        let x = *it.next().unwrap();
                        rd[k] = x;
                        cd[k] = x;
                    }
                }
                out.set(undigits(rd.into_iter(), d), undigits(cd.into_iter(), d), v.clone());
            }
        }
        Ok(out)
    }

    /// `kappa^{+-1}` on factor `i` (1-based) of `V^{(x)n}`.
    pub fn embed_kappa(&self, i: usize, n: usize, inverse: bool) -> Result<Matrix<S>, AlgebraError> {
        if i == 0 || i > n {
            return Err(AlgebraError::LegRange(format!("{i} with n = {n}")));
        }
        let d = self.d;
        let left = Matrix::identity(d.pow(i as u32 - 1));
        let right = Matrix::identity(d.pow((n - i) as u32));
        Ok(left.tensor(self.kmat(inverse)).tensor(&right))
    }

    pub fn parse(text: &str) -> Result<Self, ParseError>
    where
        S: Scalar,
    {
        let (d, kind, blocks) = parse_algebra_blocks(text)?;
        if kind != S::KIND {
            return Err(ParseError::new(1, 1, format!("expected ring {}, found {kind}", S::KIND)));
        }
        build_algebra(d, blocks)
    }
}

impl<S: Scalar> fmt::Display for MatrixXCAlgebra<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "dim: {}", self.d)?;
        writeln!(f, "ring: {}", S::KIND)?;
        for (name, m) in [("R", &self.r), ("Rinv", &self.rinv), ("kappa", &self.kappa), ("kappainv", &self.kappainv)] {
            writeln!(f, "{name}:")?;
            write!(f, "{m}")?;
        }
        Ok(())
    }
}

type Block = (usize, Vec<(usize, String)>);

fn parse_algebra_blocks(text: &str) -> Result<(usize, String, Vec<(String, Block)>), ParseError> {
    let mut d = None;
    let mut kind = None;
    let mut blocks: Vec<(String, Block)> = Vec::new();
    for (ln, line) in content_lines(text) {
        if let Some((key, rest, off)) = split_key(line) {
            if ["dim", "ring", "R", "Rinv", "kappa", "kappainv"].contains(&key) {
                match key {
                    "dim" => {
                        let v: usize = rest.trim().parse().map_err(|_| ParseError::new(ln, off, "bad dimension"))?;
                        if v == 0 {
                            return Err(ParseError::new(ln, off, "dimension must be positive"));
                        }
                        d = Some(v);
                    }
                    "ring" => {
                        let v = rest.trim();
                        if v != "laurent" && v != "rational" {
                            return Err(ParseError::new(ln, off, format!("unknown ring '{v}'")));
                        }
                        kind = Some(v.to_string());
                    }
                    _ => {
                        if blocks.iter().any(|(n, _)| n == key) {
                            return Err(ParseError::new(ln, 1, format!("duplicate block '{key}'")));
                        }
                        if !rest.trim().is_empty() {
                            return Err(ParseError::new(ln, off, "block rows start on the next line"));
                        }
                        blocks.push((key.to_string(), (ln, Vec::new())));
                    }
                }
                continue;
            }
        }
        match blocks.last_mut() {
            Some((_, (_, rows))) => rows.push((ln, line.to_string())),
            None => return Err(ParseError::new(ln, 1, "matrix row outside a block")),
        }
    }
    let d = d.ok_or_else(|| ParseError::new(1, 1, "missing 'dim'"))?;
    let kind = kind.ok_or_else(|| ParseError::new(1, 1, "missing 'ring'"))?;
    Ok((d, kind, blocks))
}

fn build_algebra<S: Scalar>(d: usize, blocks: Vec<(String, Block)>) -> Result<MatrixXCAlgebra<S>, ParseError> {
    let mut mats: Vec<Option<Matrix<S>>> = vec![None, None, None, None];
    let names = ["R", "Rinv", "kappa", "kappainv"];
    for (name, (bl, rows)) in blocks {
        let idx = names.iter().position(|n| *n == name).unwrap();
        let size = if idx < 2 { d * d } else { d };
        if rows.len() != size {
            return Err(ParseError::new(bl, 1, format!("block {name} needs {size} rows, found {}", rows.len())));
        }
        let mut parsed = Vec::new();
        for (ln, row) in rows {
            let mut entries = Vec::new();
            let mut col = 1;
            for cell in row.split(',') {
                let lead = cell.len() - cell.trim_start().len();
                let v = S::parse(cell.trim()).map_err(|e| ParseError::new(ln, col + lead + e.col - 1, e.msg))?;
                entries.push(v);
                col += cell.len() + 1;
            }
            if entries.len() != size {
                return Err(ParseError::new(ln, 1, format!("row needs {size} entries, found {}", entries.len())));
            }
            parsed.push(entries);
        }
        mats[idx] = Some(Matrix::from_rows(parsed).expect("rows checked"));
    }
    let mut it = mats.into_iter().zip(names);
    let mut take = || {
        let (m, name) = it.next().unwrap();
        m.ok_or_else(|| ParseError::new(1, 1, format!("missing block '{name}'")))
    };
    let (r, rinv, kappa, kappainv) = (take()?, take()?, take()?, take()?);
    MatrixXCAlgebra::new(d, r, rinv, kappa, kappainv).map_err(|e| ParseError::new(1, 1, e.to_string()))
}

/// An algebra read from a file, over whichever ring the file declares.
#[derive(Debug, Clone)]
pub enum AnyAlgebra {
    Laurent(MatrixXCAlgebra<Laurent>),
    Rational(MatrixXCAlgebra<BigRational>),
}

impl AnyAlgebra {
    pub fn parse(text: &str) -> Result<AnyAlgebra, ParseError> {
        let (d, kind, blocks) = parse_algebra_blocks(text)?;
        match kind.as_str() {
            "laurent" => Ok(AnyAlgebra::Laurent(build_algebra(d, blocks)?)),
            _ => Ok(AnyAlgebra::Rational(build_algebra(d, blocks)?)),
        }
    }

    pub fn check_axioms(&self) -> AxiomReport {
        match self {
            AnyAlgebra::Laurent(a) => check_axioms(a),
            AnyAlgebra::Rational(a) => check_axioms(a),
        }
    }
}

/// Outcome of one axiom check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomResult {
    pub name: &'static str,
    pub pass: bool,
    /// First differing entry on failure.
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxiomReport {
    pub results: Vec<AxiomResult>,
}

impl AxiomReport {
    pub fn all_pass(&self) -> bool {
        self.results.iter().all(|r| r.pass)
    }

    pub fn get(&self, name: &str) -> Option<&AxiomResult> {
        self.results.iter().find(|r| r.name == name)
    }

    pub fn first_failure(&self) -> Option<&AxiomResult> {
        self.results.iter().find(|r| !r.pass)
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in &self.results {
            write!(f, "{:<12} {}", r.name, if r.pass { "pass" } else { "FAIL" })?;
            if let Some(d) = &r.detail {
                write!(f, "  {d}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// Contracts groups of legs of a `d^n x d^n` matrix by multiplying within each group in
/// leg order (`x1 x2 ... xk`). The result has one leg per group. Groups are 1-based.
pub fn mu_contract<S: Scalar>(m: &Matrix<S>, d: usize, n: usize, groups: &[Vec<usize>]) -> Matrix<S> {
    let g = groups.len();
    let size = d.pow(g as u32);
    let mut out = Matrix::zeros(size, size);
    'entries: for (r, c, v) in m.nonzeros() {
        let rd = digits(r, d, n);
        let cd = digits(c, d, n);
        let mut orow = Vec::with_capacity(g);
        let mut ocol = Vec::with_capacity(g);
        for grp in groups {
            for w in grp.windows(2) {
                if cd[w[0] - 1] != rd[w[1] - 1] {
                    continue 'entries;
                }
            }
            orow.push(rd[grp[0] - 1]);
            ocol.push(cd[grp[grp.len() - 1] - 1]);
        }
        out.add_at(undigits(orow.into_iter(), d), undigits(ocol.into_iter(), d), v);
    }
    out
}

fn compare<S: Scalar>(name: &'static str, lhs: &Matrix<S>, rhs: &Matrix<S>) -> AxiomResult {
    let detail = lhs.first_difference(rhs);
    AxiomResult { name, pass: detail.is_none(), detail }
}

fn product<S: Scalar>(ms: &[Matrix<S>]) -> Matrix<S> {
    let mut it = ms.iter();
    let first = it.next().expect("non-empty product").clone();
    it.fold(first, |acc, m| acc.mul(m).expect("square factors"))
}

/// Exact check of (XC0)-(XC3) and invertibility.
pub fn check_axioms<S: Scalar>(a: &MatrixXCAlgebra<S>) -> AxiomReport {
    let d = a.d;
    let mut results = Vec::new();
    let id2 = Matrix::identity(d * d);
    let id1 = Matrix::identity(d);
    results.push(compare("R*Rinv", &a.r.mul(&a.rinv).unwrap(), &id2));
    results.push(compare("Rinv*R", &a.rinv.mul(&a.r).unwrap(), &id2));
    results.push(compare("kappa*kinv", &a.kappa.mul(&a.kappainv).unwrap(), &id1));
    results.push(compare("kinv*kappa", &a.kappainv.mul(&a.kappa).unwrap(), &id1));

    let kk = a.kappa.tensor(&a.kappa);
    let kki = a.kappainv.tensor(&a.kappainv);
    results.push(compare("XC0 R", &a.r, &product(&[kk.clone(), a.r.clone(), kki.clone()])));
    results.push(compare("XC0 Rinv", &a.rinv, &product(&[kk, a.rinv.clone(), kki])));

    let e = |i, j, n, inv| a.embed_r(i, j, n, inv).unwrap();
    let k = |i, n, inv| a.embed_kappa(i, n, inv).unwrap();
    let three = vec![vec![1, 2, 3]];
    let lhs = mu_contract(&product(&[e(3, 1, 3, false), k(2, 3, false)]), d, 3, &three);
    let rhs = mu_contract(&product(&[e(1, 3, 3, false), k(2, 3, true)]), d, 3, &three);
    results.push(compare("XC1f", &lhs, &rhs));

    let lhs = id1.tensor(&a.kappainv);
    let rhs = mu_contract(
        &product(&[e(1, 5, 5, false), e(2, 3, 5, true), k(4, 5, true)]),
        d,
        5,
        &[vec![1, 2], vec![3, 4, 5]],
    );
    results.push(compare("XC2c", &lhs, &rhs));

    let lhs = a.kappa.tensor(&id1);
    let rhs = mu_contract(
        &product(&[e(1, 5, 5, true), e(3, 4, 5, false), k(2, 5, false)]),
        d,
        5,
        &[vec![1, 2, 3], vec![4, 5]],
    );
    results.push(compare("XC2d", &lhs, &rhs));

    let lhs = product(&[e(1, 2, 3, false), e(1, 3, 3, false), e(2, 3, 3, false)]);
    let rhs = product(&[e(2, 3, 3, false), e(1, 3, 3, false), e(1, 2, 3, false)]);
    results.push(compare("XC3", &lhs, &rhs));
    AxiomReport { results }
}

/// The 2-dimensional quantum-sl2 XC-algebra over `Z[q, q^-1]`.
///
/// Basis `e0 (x) e0, e0 (x) e1, e1 (x) e0, e1 (x) e1`. With this normalization a positive
/// kink evaluates to `q^-2` and the Jones substitution is `A^2 = q^-1`.
pub fn builtin_uqsl2() -> MatrixXCAlgebra<Laurent> {
    let q = Laurent::q_pow;
    let z = Laurent::zero;
    let one = || Laurent::constant(1);
    let r = Matrix::from_rows(vec![
        vec![q(-1), z(), z(), z()],
        vec![z(), one(), &q(-1) - &q(1), z()],
        vec![z(), z(), one(), z()],
        vec![z(), z(), z(), q(-1)],
    ])
    .unwrap();
    let rinv = Matrix::from_rows(vec![
        vec![q(1), z(), z(), z()],
        vec![z(), one(), &q(1) - &q(-1), z()],
        vec![z(), z(), one(), z()],
        vec![z(), z(), z(), q(1)],
    ])
    .unwrap();
    let kappa = Matrix::diag(vec![q(-1), q(1)]);
    let kappainv = Matrix::diag(vec![q(1), q(-1)]);
    MatrixXCAlgebra::new(2, r, rinv, kappa, kappainv).unwrap()
}

/// The one-dimensional algebra with `R = kappa = 1`.
pub fn trivial_algebra<S: Scalar>() -> MatrixXCAlgebra<S> {
    let one = || Matrix::identity(1);
    MatrixXCAlgebra::new(1, one(), one(), one(), one()).unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_passes() {
        let rep = check_axioms(&builtin_uqsl2());
        assert!(rep.all_pass(), "{rep}");
    }

    #[test]
    fn trivial_passes() {
        assert!(check_axioms(&trivial_algebra::<Laurent>()).all_pass());
    }

    #[test]
    fn doubled_kappa_breaks_xc1f() {
        let mut a = builtin_uqsl2();
        let two = Laurent::constant(2);
        a.kappa = a.kappa.scale(&two);
        let rep = check_axioms(&a);
        assert!(!rep.get("XC1f").unwrap().pass);
        assert!(rep.get("XC1f").unwrap().detail.is_some());
    }

    #[test]
    fn r_is_not_the_flip() {
        let a = builtin_uqsl2();
        let p: Matrix<Laurent> = Matrix::leg_permutation(2, &[1, 0]);
        assert!(!a.r.mul(&p).unwrap().is_identity());
    }

    #[test]
    fn embed_examples() {
        let a = builtin_uqsl2();
        assert_eq!(a.embed_r(1, 2, 2, false).unwrap(), a.r);
        let p: Matrix<Laurent> = Matrix::leg_permutation(2, &[1, 0]);
        let prp = p.mul(&a.r).unwrap().mul(&p).unwrap();
        assert_eq!(a.embed_r(2, 1, 2, false).unwrap(), prp);
        let x = a.embed_r(1, 3, 3, false).unwrap().mul(&a.embed_r(1, 3, 3, true).unwrap()).unwrap();
        assert!(x.is_identity());
        assert_eq!(a.embed_kappa(1, 1, false).unwrap(), a.kappa);
        assert!(matches!(a.embed_r(2, 2, 3, false), Err(AlgebraError::SameLeg(2))));
        assert!(a.embed_kappa(4, 3, false).is_err());
    }

    #[test]
    fn file_round_trip() {
        let a = builtin_uqsl2();
        let text = a.to_string();
        let b = MatrixXCAlgebra::<Laurent>::parse(&text).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.to_string(), text);
    }

    #[test]
    fn file_errors_have_positions() {
        let text = builtin_uqsl2().to_string().replacen("q^-1, 0", "q^-1, x", 1);
        let e = MatrixXCAlgebra::<Laurent>::parse(&text).unwrap_err();
        assert_eq!((e.line, e.col), (4, 7));
    }
}
