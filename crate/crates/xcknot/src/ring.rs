//! Exact coefficient arithmetic: big integers, rationals and Laurent polynomials in `q`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Signed;

fn big_zero(c: &BigInt) -> bool {
    num_traits::Zero::is_zero(c)
}

use crate::parse::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum RingError {
    #[error("coefficient variant mismatch: {0} vs {1}")]
    VariantMismatch(&'static str, &'static str),
}

/// Exact scalars usable as matrix entries.
pub trait Scalar: Clone + PartialEq + Eq + fmt::Debug + fmt::Display + Send + Sync + 'static {
    const KIND: &'static str;
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, other: &Self) -> Self;
    fn mul(&self, other: &Self) -> Self;
    fn neg(&self) -> Self;
    fn from_i64(v: i64) -> Self;
    fn parse(s: &str) -> Result<Self, ParseError>;
    fn to_coefficient(&self) -> Coefficient;

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
    fn is_one(&self) -> bool {
        *self == Self::one()
    }
}

/// A Laurent polynomial in `q` with integer coefficients. Never stores zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Laurent {
    terms: BTreeMap<i32, BigInt>,
}

impl Laurent {
    pub fn zero() -> Self {
        Laurent::default()
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        Laurent::monomial(c, 0)
    }

    pub fn monomial(c: impl Into<BigInt>, e: i32) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !big_zero(&c) {
            terms.insert(e, c);
        }
        Laurent { terms }
    }

    /// `q^e`.
    pub fn q_pow(e: i32) -> Self {
        Laurent::monomial(1, e)
    }

    pub fn from_terms(it: impl IntoIterator<Item = (i32, BigInt)>) -> Self {
        let mut l = Laurent::zero();
        for (e, c) in it {
            l.add_term(e, &c);
        }
        l
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i32, &BigInt)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, e: i32) -> BigInt {
        self.terms.get(&e).cloned().unwrap_or_default()
    }

    pub fn min_degree(&self) -> Option<i32> {
        self.terms.keys().next().copied()
    }

    pub fn max_degree(&self) -> Option<i32> {
        self.terms.keys().next_back().copied()
    }

    /// The single term `(c, e)` if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&BigInt, i32)> {
        if self.terms.len() == 1 {
            self.terms.iter().next().map(|(e, c)| (c, *e))
        } else {
            None
        }
    }

    fn add_term(&mut self, e: i32, c: &BigInt) {
        if big_zero(c) {
            return;
        }
        let entry = self.terms.entry(e).or_default();
        *entry += c;
        if big_zero(entry) {
            self.terms.remove(&e);
        }
    }

    /// Substitutes `q -> q^k`.
    pub fn scale_exponents(&self, k: i32) -> Laurent {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (e * k, c.clone())))
    }

    /// Substitutes `q^e -> q^(e/k)`; `None` if some exponent is not divisible by `k`.
    pub fn divide_exponents(&self, k: i32) -> Option<Laurent> {
        if self.terms.keys().any(|e| e % k != 0) {
            return None;
        }
        Some(Laurent::from_terms(self.terms.iter().map(|(e, c)| (e / k, c.clone()))))
    }

    pub fn pow(&self, n: u32) -> Laurent {
        let mut out = Laurent::constant(1);
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Re-adds every term; a no-op on values built through the public API.
    pub fn normalize(&self) -> Laurent {
        Laurent::from_terms(self.terms.iter().map(|(e, c)| (*e, c.clone())))
    }
}

impl fmt::Debug for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Laurent({self})")
    }
}

impl fmt::Display for Laurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (e, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            match (k, neg) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            let mag = c.abs();
            if *e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if mag != BigInt::from(1) {
                write!(f, "{mag}")?;
            }
            write!(f, "q")?;
            if *e != 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl Add for &Laurent {
    type Output = Laurent;
    fn add(self, rhs: &Laurent) -> Laurent {
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(*e, c);
        }
        out
    }
}

impl Sub for &Laurent {
    type Output = Laurent;
    fn sub(self, rhs: &Laurent) -> Laurent {
        self + &(-rhs)
    }
}

impl Neg for &Laurent {
    type Output = Laurent;
    fn neg(self) -> Laurent {
        Laurent { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Mul for &Laurent {
    type Output = Laurent;
    fn mul(self, rhs: &Laurent) -> Laurent {
        let mut out = Laurent::zero();
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1 + e2, &(c1 * c2));
            }
        }
        out
    }
}

impl std::str::FromStr for Laurent {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse_laurent(s)
    }
}

fn parse_laurent(s: &str) -> Result<Laurent, ParseError> {
    let chars: Vec<(usize, char)> = s.char_indices().filter(|(_, c)| !c.is_whitespace()).collect();
    let err = |i: usize, msg: &str| {
        let col = chars.get(i).map(|(p, _)| p + 1).unwrap_or(s.len() + 1);
        ParseError::new(1, col, msg)
    };
    if chars.is_empty() {
        return Err(err(0, "empty polynomial"));
    }
    let mut out = Laurent::zero();
    let mut i = 0;
    let mut first = true;
    while i < chars.len() {
        let mut sign = BigInt::from(1);
        match chars[i].1 {
            '+' => i += 1,
            '-' => {
                sign = -sign;
                i += 1;
            }
            _ if first => {}
            _ => return Err(err(i, "expected '+' or '-'")),
        }
        first = false;
        let digits_start = i;
        while i < chars.len() && chars[i].1.is_ascii_digit() {
            i += 1;
        }
        let coeff = if i > digits_start {
            let d: String = chars[digits_start..i].iter().map(|(_, c)| c).collect();
            d.parse::<BigInt>().map_err(|_| err(digits_start, "bad integer"))?
        } else {
            BigInt::from(1)
        };
        if i < chars.len() && chars[i].1 == '*' {
            if i == digits_start {
                return Err(err(i, "'*' without coefficient"));
            }
            i += 1;
            if i >= chars.len() || chars[i].1 != 'q' {
                return Err(err(i, "expected 'q' after '*'"));
            }
        }
        let mut exp = 0i32;
        if i < chars.len() && chars[i].1 == 'q' {
            i += 1;
            exp = 1;
            if i < chars.len() && chars[i].1 == '^' {
                i += 1;
                let neg = i < chars.len() && chars[i].1 == '-';
                if neg {
                    i += 1;
                }
                let es = i;
                while i < chars.len() && chars[i].1.is_ascii_digit() {
                    i += 1;
                }
                if i == es {
                    return Err(err(i, "expected exponent"));
                }
                let d: String = chars[es..i].iter().map(|(_, c)| c).collect();
                exp = d.parse::<i32>().map_err(|_| err(es, "exponent out of range"))?;
                if neg {
                    exp = -exp;
                }
            }
        } else if i == digits_start {
            return Err(err(i, "expected a term"));
        }
        out.add_term(exp, &(sign * coeff));
    }
    Ok(out)
}

fn parse_bigint(s: &str) -> Result<BigInt, ParseError> {
    let t = s.trim();
    let ok = {
        let body = t.strip_prefix('-').or_else(|| t.strip_prefix('+')).unwrap_or(t);
        !body.is_empty() && body.chars().all(|c| c.is_ascii_digit())
    };
    if !ok {
        return Err(ParseError::new(1, 1, format!("bad integer '{t}'")));
    }
    t.parse::<BigInt>().map_err(|_| ParseError::new(1, 1, format!("bad integer '{t}'")))
}

fn parse_rational(s: &str) -> Result<BigRational, ParseError> {
    match s.split_once('/') {
        Some((n, d)) => {
            let n = parse_bigint(n)?;
            let d = parse_bigint(d)?;
            if big_zero(&d) {
                return Err(ParseError::new(1, 1, "zero denominator"));
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(parse_bigint(s)?)),
    }
}

impl Scalar for Laurent {
    const KIND: &'static str = "laurent";
    fn zero() -> Self {
        Laurent::zero()
    }
    fn one() -> Self {
        Laurent::constant(1)
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        Laurent::constant(v)
    }
    fn parse(s: &str) -> Result<Self, ParseError> {
        parse_laurent(s)
    }
    fn to_coefficient(&self) -> Coefficient {
        Coefficient::Laurent(self.clone())
    }
}

impl Scalar for BigRational {
    const KIND: &'static str = "rational";
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        BigRational::from_integer(v.into())
    }
    fn parse(s: &str) -> Result<Self, ParseError> {
        parse_rational(s)
    }
    fn to_coefficient(&self) -> Coefficient {
        Coefficient::Rational(self.clone())
    }
}

impl Scalar for BigInt {
    const KIND: &'static str = "integer";
    fn zero() -> Self {
        num_traits::Zero::zero()
    }
    fn one() -> Self {
        num_traits::One::one()
    }
    fn is_zero(&self) -> bool {
        num_traits::Zero::is_zero(self)
    }
    fn add(&self, other: &Self) -> Self {
        self + other
    }
    fn mul(&self, other: &Self) -> Self {
        self * other
    }
    fn neg(&self) -> Self {
        -self
    }
    fn from_i64(v: i64) -> Self {
        v.into()
    }
    fn parse(s: &str) -> Result<Self, ParseError> {
        parse_bigint(s)
    }
    fn to_coefficient(&self) -> Coefficient {
        Coefficient::Integer(self.clone())
    }
}

/// A tagged exact value.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Coefficient {
    Integer(BigInt),
    Rational(BigRational),
    Laurent(Laurent),
}

impl Coefficient {
    pub fn kind(&self) -> &'static str {
        match self {
            Coefficient::Integer(_) => "integer",
            Coefficient::Rational(_) => "rational",
            Coefficient::Laurent(_) => "laurent",
        }
    }

    /// Parses `s` as a value of the named kind (`integer`, `rational`, `laurent`).
    pub fn parse_as(kind: &str, s: &str) -> Result<Coefficient, ParseError> {
        match kind {
            "integer" => Ok(Coefficient::Integer(parse_bigint(s)?)),
            "rational" => Ok(Coefficient::Rational(parse_rational(s)?)),
            "laurent" => Ok(Coefficient::Laurent(parse_laurent(s)?)),
            other => Err(ParseError::new(1, 1, format!("unknown ring '{other}'"))),
        }
    }

    pub fn normalize(&self) -> Coefficient {
        match self {
            Coefficient::Laurent(l) => Coefficient::Laurent(l.normalize()),
            Coefficient::Rational(r) => Coefficient::Rational(BigRational::new(r.numer().clone(), r.denom().clone())),
            c => c.clone(),
        }
    }
}

impl fmt::Display for Coefficient {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Coefficient::Integer(i) => write!(f, "{i}"),
            Coefficient::Rational(r) => write!(f, "{r}"),
            Coefficient::Laurent(l) => write!(f, "{l}"),
        }
    }
}

pub fn ring_add(a: &Coefficient, b: &Coefficient) -> Result<Coefficient, RingError> {
    use Coefficient::*;
    Ok(match (a, b) {
        (Integer(x), Integer(y)) => Integer(x + y),
        (Rational(x), Rational(y)) => Rational(x + y),
        (Laurent(x), Laurent(y)) => Laurent(x + y),
        _ => return Err(RingError::VariantMismatch(a.kind(), b.kind())),
    })
}

pub fn ring_mul(a: &Coefficient, b: &Coefficient) -> Result<Coefficient, RingError> {
    use Coefficient::*;
    Ok(match (a, b) {
        (Integer(x), Integer(y)) => Integer(x * y),
        (Rational(x), Rational(y)) => Rational(x * y),
        (Laurent(x), Laurent(y)) => Laurent(x * y),
        _ => return Err(RingError::VariantMismatch(a.kind(), b.kind())),
    })
}
