//! Exact rationals, multivariate polynomials and rational functions over
//! named parameters.
//!
//! Nothing in here touches floating point. Polynomials are sparse maps from
//! monomials (sorted variable/exponent lists) to [`Q`] coefficients, and the
//! canonical printed form is what every other module uses as its
//! serialization format.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymError {
    #[error("variable `{0}` has no value in the assignment")]
    MissingVariable(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("expression is not a polynomial: {0}")]
    NotPolynomial(String),
    #[error("value {0} is not an integer")]
    NotInteger(String),
}

// ---------------------------------------------------------------------------
// Rationals
// ---------------------------------------------------------------------------

/// An exact rational number, always in lowest terms with positive denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Q(BigRational);

impl Q {
    pub fn new(num: impl Into<BigInt>, den: impl Into<BigInt>) -> Q {
        let den = den.into();
        assert!(!den.is_zero(), "zero denominator");
        Q(BigRational::new(num.into(), den))
    }

    pub fn int(n: i64) -> Q {
        Q(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn zero() -> Q {
        Q(BigRational::zero())
    }

    pub fn one() -> Q {
        Q(BigRational::one())
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn abs(&self) -> Q {
        Q(self.0.abs())
    }

    pub fn recip(&self) -> Result<Q, SymError> {
        if self.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(Q(self.0.recip()))
    }

    pub fn pow(&self, e: u32) -> Q {
        Q(num_traits::pow(self.0.clone(), e as usize))
    }

    /// Integer value as `i64`, if the rational is integral and fits.
    pub fn to_i64(&self) -> Option<i64> {
        if self.is_integer() {
            self.0.numer().to_i64()
        } else {
            None
        }
    }

    pub fn as_inner(&self) -> &BigRational {
        &self.0
    }
}

impl From<i64> for Q {
    fn from(n: i64) -> Q {
        Q::int(n)
    }
}

impl From<i32> for Q {
    fn from(n: i32) -> Q {
        Q::int(n as i64)
    }
}

impl From<BigInt> for Q {
    fn from(n: BigInt) -> Q {
        Q(BigRational::from_integer(n))
    }
}

impl From<BigRational> for Q {
    fn from(r: BigRational) -> Q {
        Q(r)
    }
}

impl fmt::Display for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Q {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for Q {
    type Err = SymError;

    fn from_str(s: &str) -> Result<Q, SymError> {
        let s = s.trim();
        let bad = |msg: &str| SymError::Parse {
            pos: 0,
            msg: format!("{msg}: `{s}`"),
        };
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| bad("bad numerator"))?;
                let d: BigInt = d.trim().parse().map_err(|_| bad("bad denominator"))?;
                if d.is_zero() {
                    return Err(SymError::DivisionByZero);
                }
                Ok(Q::new(n, d))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| bad("bad integer"))?;
                Ok(Q::from(n))
            }
        }
    }
}

impl Serialize for Q {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Q {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Q, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

macro_rules! q_binop {
    ($tr:ident, $m:ident, $op:tt) => {
        impl $tr<Q> for Q {
            type Output = Q;
            fn $m(self, rhs: Q) -> Q { Q(self.0 $op rhs.0) }
        }
        impl<'a> $tr<&'a Q> for Q {
            type Output = Q;
            fn $m(self, rhs: &'a Q) -> Q { Q(self.0 $op &rhs.0) }
        }
        impl<'a> $tr<&'a Q> for &'a Q {
            type Output = Q;
            fn $m(self, rhs: &'a Q) -> Q { Q(&self.0 $op &rhs.0) }
        }
        impl $tr<i64> for Q {
            type Output = Q;
            fn $m(self, rhs: i64) -> Q { Q(self.0 $op BigRational::from_integer(rhs.into())) }
        }
    };
}
q_binop!(Add, add, +);
q_binop!(Sub, sub, -);
q_binop!(Mul, mul, *);

impl Div<Q> for Q {
    type Output = Q;
    /// Panics on a zero divisor; use [`Q::recip`] for a checked version.
    fn div(self, rhs: Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        Q(self.0 / rhs.0)
    }
}

impl<'a> Div<&'a Q> for &'a Q {
    type Output = Q;
    fn div(self, rhs: &'a Q) -> Q {
        assert!(!rhs.is_zero(), "division by zero");
        Q(&self.0 / &rhs.0)
    }
}

impl Div<i64> for Q {
    type Output = Q;
    fn div(self, rhs: i64) -> Q {
        self / Q::int(rhs)
    }
}

impl Neg for Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-self.0)
    }
}

impl Neg for &Q {
    type Output = Q;
    fn neg(self) -> Q {
        Q(-&self.0)
    }
}

impl AddAssign<&Q> for Q {
    fn add_assign(&mut self, rhs: &Q) {
        self.0 += &rhs.0;
    }
}

impl Sum for Q {
    fn sum<I: Iterator<Item = Q>>(iter: I) -> Q {
        iter.fold(Q::zero(), |a, b| a + b)
    }
}

/// Smallest integer `>= a / b`. Works for negative `a`.
pub fn ceil_div(a: i64, b: i64) -> i64 {
    assert!(b > 0, "ceil_div needs a positive divisor");
    Integer::div_ceil(&a, &b)
}

/// Largest integer `<= a / b`.
pub fn floor_div(a: i64, b: i64) -> i64 {
    assert!(b > 0, "floor_div needs a positive divisor");
    Integer::div_floor(&a, &b)
}

/// Binomial coefficient for small non-negative arguments (0 when `k > n`).
pub fn binomial(n: i64, k: i64) -> i64 {
    if k < 0 || n < 0 || k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

// ---------------------------------------------------------------------------
// Monomials and polynomials
// ---------------------------------------------------------------------------

/// A monomial: variable names with positive exponents, sorted by name.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Monomial(Vec<(String, u32)>);

impl Monomial {
    pub fn one() -> Monomial {
        Monomial(Vec::new())
    }

    pub fn var(name: &str) -> Monomial {
        Monomial(vec![(name.to_string(), 1)])
    }

    pub fn from_pairs<I, S>(pairs: I) -> Monomial
    where
        I: IntoIterator<Item = (S, u32)>,
        S: Into<String>,
    {
        let mut m: BTreeMap<String, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *m.entry(v.into()).or_insert(0) += e;
            }
        }
        Monomial(m.into_iter().collect())
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn exponent(&self, var: &str) -> u32 {
        self.0
            .iter()
            .find(|(v, _)| v == var)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn factors(&self) -> &[(String, u32)] {
        &self.0
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial::from_pairs(
            self.0
                .iter()
                .chain(other.0.iter())
                .map(|(v, e)| (v.clone(), *e)),
        )
    }

    /// `self / other` when `other` divides `self`.
    pub fn div(&self, other: &Monomial) -> Option<Monomial> {
        let mut out = Vec::new();
        for (v, e) in &self.0 {
            let o = other.exponent(v);
            if o > *e {
                return None;
            }
            if e - o > 0 {
                out.push((v.clone(), e - o));
            }
        }
        for (v, _) in &other.0 {
            if self.exponent(v) == 0 {
                return None;
            }
        }
        Some(Monomial(out))
    }

    pub fn without(&self, var: &str) -> Monomial {
        Monomial(self.0.iter().filter(|(v, _)| v != var).cloned().collect())
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(v, e)| {
                if *e == 1 {
                    v.clone()
                } else {
                    format!("{v}^{e}")
                }
            })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Display order: total degree descending, then lexicographic.
fn display_order(a: &Monomial, b: &Monomial) -> std::cmp::Ordering {
    b.degree().cmp(&a.degree()).then_with(|| a.cmp(b))
}

/// A multivariate polynomial with exact rational coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: BTreeMap<Monomial, Q>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn one() -> Poly {
        Poly::constant(Q::one())
    }

    pub fn constant(c: impl Into<Q>) -> Poly {
        Poly::term(c.into(), Monomial::one())
    }

    pub fn int(n: i64) -> Poly {
        Poly::constant(Q::int(n))
    }

    pub fn var(name: &str) -> Poly {
        Poly::term(Q::one(), Monomial::var(name))
    }

    pub fn term(c: Q, m: Monomial) -> Poly {
        let mut p = Poly::zero();
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Q)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Alias used where the intent is "this symbolic identity holds".
    pub fn is_identically_zero(&self) -> bool {
        self.is_zero()
    }

    pub fn add_term(&mut self, m: Monomial, c: Q) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(existing) => {
                *existing += &c;
                if existing.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn coeff(&self, m: &Monomial) -> Q {
        self.terms.get(m).cloned().unwrap_or_else(Q::zero)
    }

    /// The constant value, if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<Q> {
        match self.terms.len() {
            0 => Some(Q::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn variables(&self) -> BTreeSet<String> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| v.clone()))
            .collect()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, var: &str) -> u32 {
        self.terms
            .keys()
            .map(|m| m.exponent(var))
            .max()
            .unwrap_or(0)
    }

    pub fn scale(&self, c: &Q) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn mul_monomial(&self, mono: &Monomial) -> Poly {
        Poly {
            terms: self
                .terms
                .iter()
                .map(|(m, k)| (m.mul(mono), k.clone()))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Exact value under a full assignment of the variables.
    pub fn eval(&self, assignment: &BTreeMap<String, Q>) -> Result<Q, SymError> {
        let mut total = Q::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (v, e) in &m.0 {
                let x = assignment
                    .get(v)
                    .ok_or_else(|| SymError::MissingVariable(v.clone()))?;
                t = t * x.pow(*e);
            }
            total += &t;
        }
        Ok(total)
    }

    /// Substitute a polynomial for one variable.
    pub fn substitute(&self, var: &str, value: &Poly) -> Poly {
        let mut out = Poly::zero();
        let mut powers: Vec<Poly> = vec![Poly::one()];
        for (m, c) in &self.terms {
            let e = m.exponent(var) as usize;
            while powers.len() <= e {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let rest = Poly::term(c.clone(), m.without(var));
            out += &(&rest * &powers[e]);
        }
        out
    }

    /// Substitute several variables at once (simultaneously, not sequentially).
    pub fn substitute_all(&self, subs: &BTreeMap<String, Poly>) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let mut t = Poly::constant(c.clone());
            for (v, e) in &m.0 {
                let factor = match subs.get(v) {
                    Some(p) => p.pow(*e),
                    None => Poly::term(Q::one(), Monomial(vec![(v.clone(), *e)])),
                };
                t = &t * &factor;
            }
            out += &t;
        }
        out
    }

    /// Partial evaluation: replace the assigned variables by their values.
    pub fn eval_partial(&self, assignment: &BTreeMap<String, Q>) -> Poly {
        let subs = assignment
            .iter()
            .map(|(k, v)| (k.clone(), Poly::constant(v.clone())))
            .collect();
        self.substitute_all(&subs)
    }

    /// Coefficients as a polynomial in `var`: entry `i` is the coefficient of `var^i`.
    pub fn coefficients_in(&self, var: &str) -> Vec<Poly> {
        let n = self.degree_in(var) as usize;
        let mut out = vec![Poly::zero(); n + 1];
        for (m, c) in &self.terms {
            out[m.exponent(var) as usize].add_term(m.without(var), c.clone());
        }
        out
    }

    /// Coefficient of a given monomial in the listed variables, as a polynomial
    /// in the remaining ones.
    pub fn coeff_of(&self, mono: &Monomial, vars: &[&str]) -> Poly {
        let mut out = Poly::zero();
        for (m, c) in &self.terms {
            let proj = Monomial::from_pairs(
                m.0.iter()
                    .filter(|(v, _)| vars.contains(&v.as_str()))
                    .map(|(v, e)| (v.clone(), *e)),
            );
            if &proj == mono {
                let rest = Monomial::from_pairs(
                    m.0.iter()
                        .filter(|(v, _)| !vars.contains(&v.as_str()))
                        .map(|(v, e)| (v.clone(), *e)),
                );
                out.add_term(rest, c.clone());
            }
        }
        out
    }

    /// Leading term in display order.
    fn leading(&self) -> Option<(&Monomial, &Q)> {
        self.terms.iter().min_by(|a, b| display_order(a.0, b.0))
    }

    /// Parse a polynomial. Division is allowed only by non-zero constants.
    pub fn parse(s: &str) -> Result<Poly, SymError> {
        let rf = RationalFunction::parse(s)?;
        rf.as_poly()
            .ok_or_else(|| SymError::NotPolynomial(s.to_string()))
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut entries: Vec<(&Monomial, &Q)> = self.terms.iter().collect();
        entries.sort_by(|a, b| display_order(a.0, b.0));
        for (i, (m, c)) in entries.into_iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            }
            if m.is_one() {
                write!(f, "{mag}")?;
            } else if mag.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{mag}*{m}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl FromStr for Poly {
    type Err = SymError;
    fn from_str(s: &str) -> Result<Poly, SymError> {
        Poly::parse(s)
    }
}

impl Serialize for Poly {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Poly, D::Error> {
        let s = String::deserialize(d)?;
        Poly::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<Q> for Poly {
    fn from(q: Q) -> Poly {
        Poly::constant(q)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::int(n)
    }
}

impl<'a> AddAssign<&'a Poly> for Poly {
    fn add_assign(&mut self, rhs: &'a Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl<'a> SubAssign<&'a Poly> for Poly {
    fn sub_assign(&mut self, rhs: &'a Poly) {
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c);
        }
    }
}

impl<'a> MulAssign<&'a Poly> for Poly {
    fn mul_assign(&mut self, rhs: &'a Poly) {
        *self = &*self * rhs;
    }
}

impl<'a> Add<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn add(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl<'a> Sub<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn sub(self, rhs: &'a Poly) -> Poly {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl<'a> Mul<&'a Poly> for &'a Poly {
    type Output = Poly;
    fn mul(self, rhs: &'a Poly) -> Poly {
        let mut out = Poly::zero();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }
}

impl Add for Poly {
    type Output = Poly;
    fn add(mut self, rhs: Poly) -> Poly {
        self += &rhs;
        self
    }
}

impl Sub for Poly {
    type Output = Poly;
    fn sub(mut self, rhs: Poly) -> Poly {
        self -= &rhs;
        self
    }
}

impl Mul for Poly {
    type Output = Poly;
    fn mul(self, rhs: Poly) -> Poly {
        &self * &rhs
    }
}

impl Mul<Q> for Poly {
    type Output = Poly;
    fn mul(self, rhs: Q) -> Poly {
        self.scale(&rhs)
    }
}

impl Mul<i64> for Poly {
    type Output = Poly;
    fn mul(self, rhs: i64) -> Poly {
        self.scale(&Q::int(rhs))
    }
}

impl Add<i64> for Poly {
    type Output = Poly;
    fn add(self, rhs: i64) -> Poly {
        self + Poly::int(rhs)
    }
}

impl Sub<i64> for Poly {
    type Output = Poly;
    fn sub(self, rhs: i64) -> Poly {
        self - Poly::int(rhs)
    }
}

impl Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Q::int(-1))
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&Q::int(-1))
    }
}

impl Sum for Poly {
    fn sum<I: Iterator<Item = Poly>>(iter: I) -> Poly {
        iter.fold(Poly::zero(), |a, b| a + b)
    }
}

/// Shorthand for a variable.
pub fn var(name: &str) -> Poly {
    Poly::var(name)
}

/// Shorthand for an integer constant polynomial.
pub fn int(n: i64) -> Poly {
    Poly::int(n)
}

/// Shorthand for a rational constant polynomial.
pub fn rat(n: i64, d: i64) -> Poly {
    Poly::constant(Q::new(n, d))
}

/// Build an assignment map from `(name, value)` pairs.
pub fn assign<I, S, V>(pairs: I) -> BTreeMap<String, Q>
where
    I: IntoIterator<Item = (S, V)>,
    S: Into<String>,
    V: Into<Q>,
{
    pairs
        .into_iter()
        .map(|(k, v)| (k.into(), v.into()))
        .collect()
}

// ---------------------------------------------------------------------------
// Univariate helpers (used for rational-function reduction)
// ---------------------------------------------------------------------------

fn univariate_var(p: &Poly, q: &Poly) -> Option<Option<String>> {
    let mut vars = p.variables();
    vars.extend(q.variables());
    match vars.len() {
        0 => Some(None),
        1 => Some(vars.into_iter().next()),
        _ => None,
    }
}

fn to_dense(p: &Poly, var: &str) -> Vec<Q> {
    p.coefficients_in(var)
        .into_iter()
        .map(|c| c.as_constant().expect("univariate"))
        .collect()
}

fn from_dense(coeffs: &[Q], var: &str) -> Poly {
    let mut p = Poly::zero();
    for (i, c) in coeffs.iter().enumerate() {
        p.add_term(Monomial::from_pairs([(var, i as u32)]), c.clone());
    }
    p
}

fn trim(v: &mut Vec<Q>) {
    while v.last().is_some_and(Q::is_zero) {
        v.pop();
    }
}

fn dense_rem(a: &[Q], b: &[Q]) -> (Vec<Q>, Vec<Q>) {
    let mut r = a.to_vec();
    trim(&mut r);
    let mut b = b.to_vec();
    trim(&mut b);
    let db = b.len() - 1;
    let lead = b[db].clone();
    let mut quo = vec![Q::zero(); r.len().saturating_sub(db).max(1)];
    while r.len() > db && !r.is_empty() {
        let shift = r.len() - 1 - db;
        let f = &r[r.len() - 1] / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &(&f * bc);
        }
        quo[shift] = f;
        trim(&mut r);
    }
    (quo, r)
}

fn dense_gcd(a: &[Q], b: &[Q]) -> Vec<Q> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let (_, r) = dense_rem(&x, &y);
        x = y;
        y = r;
    }
    if let Some(l) = x.last().cloned() {
        for c in x.iter_mut() {
            *c = &*c / &l;
        }
    }
    x
}

// ---------------------------------------------------------------------------
// Rational functions
// ---------------------------------------------------------------------------

/// A quotient of polynomials with a non-zero denominator.
///
/// Univariate quotients are reduced by a polynomial gcd; multivariate ones are
/// only normalized so that the denominator's leading coefficient is 1.
/// Equality is decided by cross-multiplication either way.
#[derive(Clone)]
pub struct RationalFunction {
    num: Poly,
    den: Poly,
}

impl RationalFunction {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFunction, SymError> {
        if den.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(RationalFunction { num, den }.reduced())
    }

    pub fn from_poly(p: Poly) -> RationalFunction {
        RationalFunction {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(q: impl Into<Q>) -> RationalFunction {
        RationalFunction::from_poly(Poly::constant(q.into()))
    }

    pub fn numer(&self) -> &Poly {
        &self.num
    }

    pub fn denom(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn as_poly(&self) -> Option<Poly> {
        self.den
            .as_constant()
            .map(|c| self.num.scale(&c.recip().expect("nonzero denominator")))
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.as_poly().and_then(|p| p.as_constant())
    }

    fn reduced(self) -> RationalFunction {
        let RationalFunction { mut num, mut den } = self;
        if num.is_zero() {
            return RationalFunction {
                num,
                den: Poly::one(),
            };
        }
        if let Some(Some(v)) = univariate_var(&num, &den) {
            let a = to_dense(&num, &v);
            let b = to_dense(&den, &v);
            let g = dense_gcd(&a, &b);
            if g.len() > 1 {
                let (qa, _) = dense_rem(&a, &g);
                let (qb, _) = dense_rem(&b, &g);
                num = from_dense(&qa, &v);
                den = from_dense(&qb, &v);
            }
        }
        let lead = den.leading().map(|(_, c)| c.clone()).unwrap_or_else(Q::one);
        let inv = lead.recip().expect("nonzero leading coefficient");
        RationalFunction {
            num: num.scale(&inv),
            den: den.scale(&inv),
        }
    }

    pub fn recip(&self) -> Result<RationalFunction, SymError> {
        RationalFunction::new(self.den.clone(), self.num.clone())
    }

    pub fn eval(&self, assignment: &BTreeMap<String, Q>) -> Result<Q, SymError> {
        let d = self.den.eval(assignment)?;
        if d.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        Ok(self.num.eval(assignment)? / d)
    }

    pub fn substitute(&self, var: &str, value: &Poly) -> Result<RationalFunction, SymError> {
        RationalFunction::new(
            self.num.substitute(var, value),
            self.den.substitute(var, value),
        )
    }

    pub fn div(&self, other: &RationalFunction) -> Result<RationalFunction, SymError> {
        if other.is_zero() {
            return Err(SymError::DivisionByZero);
        }
        RationalFunction::new(&self.num * &other.den, &self.den * &other.num)
    }

    /// Parse an expression with `+ - * / ^`, parentheses, integers and names.
    pub fn parse(s: &str) -> Result<RationalFunction, SymError> {
        let mut p = Parser {
            src: s.as_bytes(),
            pos: 0,
        };
        let out = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.err("unexpected trailing input"));
        }
        Ok(out)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        (&self.num * &other.den - &other.num * &self.den).is_zero()
    }
}

impl Eq for RationalFunction {}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(p) = self.as_poly() {
            return write!(f, "{p}");
        }
        let wrap = |p: &Poly| {
            if p.num_terms() > 1 {
                format!("({p})")
            } else {
                p.to_string()
            }
        };
        write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl Serialize for RationalFunction {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for RationalFunction {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<RationalFunction, D::Error> {
        let s = String::deserialize(d)?;
        RationalFunction::parse(&s).map_err(serde::de::Error::custom)
    }
}

impl From<Poly> for RationalFunction {
    fn from(p: Poly) -> RationalFunction {
        RationalFunction::from_poly(p)
    }
}

impl<'a> Add<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: &'a RationalFunction) -> RationalFunction {
        if self.den == rhs.den {
            return RationalFunction::new(&self.num + &rhs.num, self.den.clone()).unwrap();
        }
        RationalFunction::new(
            &self.num * &rhs.den + &rhs.num * &self.den,
            &self.den * &rhs.den,
        )
        .unwrap()
    }
}

impl<'a> Sub<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: &'a RationalFunction) -> RationalFunction {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a RationalFunction> for &'a RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: &'a RationalFunction) -> RationalFunction {
        RationalFunction::new(&self.num * &rhs.num, &self.den * &rhs.den).unwrap()
    }
}

impl Add for RationalFunction {
    type Output = RationalFunction;
    fn add(self, rhs: RationalFunction) -> RationalFunction {
        &self + &rhs
    }
}

impl Sub for RationalFunction {
    type Output = RationalFunction;
    fn sub(self, rhs: RationalFunction) -> RationalFunction {
        &self - &rhs
    }
}

impl Mul for RationalFunction {
    type Output = RationalFunction;
    fn mul(self, rhs: RationalFunction) -> RationalFunction {
        &self * &rhs
    }
}

impl Neg for &RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
        }
    }
}

impl Neg for RationalFunction {
    type Output = RationalFunction;
    fn neg(self) -> RationalFunction {
        -&self
    }
}

// ---------------------------------------------------------------------------
// Expression parser
// ---------------------------------------------------------------------------

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> SymError {
        SymError::Parse {
            pos: self.pos,
            msg: msg.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn expr(&mut self) -> Result<RationalFunction, SymError> {
        let mut acc = self.term()?;
        while let Some(c) = self.peek() {
            match c {
                b'+' => {
                    self.pos += 1;
                    acc = &acc + &self.term()?;
                }
                b'-' => {
                    self.pos += 1;
                    acc = &acc - &self.term()?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<RationalFunction, SymError> {
        let mut acc = self.unary()?;
        while let Some(c) = self.peek() {
            match c {
                b'*' => {
                    self.pos += 1;
                    acc = &acc * &self.unary()?;
                }
                b'/' => {
                    self.pos += 1;
                    let rhs = self.unary()?;
                    acc = acc.div(&rhs)?;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<RationalFunction, SymError> {
        match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(b'+') => {
                self.pos += 1;
                self.unary()
            }
            _ => self.power(),
        }
    }

    fn power(&mut self) -> Result<RationalFunction, SymError> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let start = self.pos;
            while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                self.pos += 1;
            }
            if start == self.pos {
                return Err(self.err("expected a non-negative integer exponent"));
            }
            let e: u32 = std::str::from_utf8(&self.src[start..self.pos])
                .unwrap()
                .parse()
                .map_err(|_| self.err("exponent too large"))?;
            let mut acc = RationalFunction::constant(1);
            for _ in 0..e {
                acc = &acc * &base;
            }
            return Ok(acc);
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<RationalFunction, SymError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.src[start..self.pos])
                    .unwrap()
                    .parse()
                    .unwrap();
                Ok(RationalFunction::constant(Q::from(n)))
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(RationalFunction::from_poly(Poly::var(name)))
            }
            Some(_) => Err(self.err("unexpected character")),
            None => Err(self.err("unexpected end of input")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn eval_examples() {
        let p = Poly::parse("7*g + 6").unwrap();
        assert_eq!(p.eval(&assign([("g", 4)])).unwrap(), Q::int(34));
        assert_eq!(Poly::zero().eval(&BTreeMap::new()).unwrap(), Q::zero());
        let r = Poly::parse("(g-1)*(g-2)").unwrap();
        assert_eq!(r.eval(&assign([("g", 2)])).unwrap(), Q::zero());
        assert_eq!(
            p.eval(&BTreeMap::new()),
            Err(SymError::MissingVariable("g".into()))
        );
    }

    #[test]
    fn identical_zero() {
        assert!((var("g") - var("g")).is_identically_zero());
        assert!(!(var("g") - var("b")).is_identically_zero());
    }

    #[test]
    fn ceil_examples() {
        assert_eq!(ceil_div(100, 6), 17);
        assert_eq!(ceil_div(-60, 4), -15);
        assert_eq!(ceil_div(-61, 4), -15);
        assert_eq!(ceil_div(0, 5), 0);
        assert_eq!(floor_div(-61, 4), -16);
    }

    #[test]
    fn display_is_canonical() {
        assert_eq!(Poly::parse("6 + 7*g").unwrap().to_string(), "7*g + 6");
        assert_eq!(Poly::parse("7*g - 6").unwrap().to_string(), "7*g - 6");
        assert_eq!(
            Poly::parse("-g^2 + g/2").unwrap().to_string(),
            "-g^2 + 1/2*g"
        );
        assert_eq!(Q::new(6, -4).to_string(), "-3/2");
    }

    #[test]
    fn rational_function_reduces() {
        let r = RationalFunction::parse("(g^2 - 1)/(2*g - 2)").unwrap();
        assert_eq!(r.to_string(), "1/2*g + 1/2");
        let s = RationalFunction::parse("(7*g+6)/g").unwrap();
        assert_eq!(s.to_string(), "(7*g + 6)/g");
        assert_eq!(
            RationalFunction::parse("1/(g-g)"),
            Err(SymError::DivisionByZero)
        );
    }

    #[test]
    fn parse_errors_report_position() {
        match Poly::parse("g + *") {
            Err(SymError::Parse { pos, .. }) => assert_eq!(pos, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(
            Poly::parse("1/g"),
            Err(SymError::NotPolynomial(_))
        ));
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        let term = (-20i64..20, 1i64..5, 0u32..3, 0u32..3);
        proptest::collection::vec(term, 0..6).prop_map(|ts| {
            ts.into_iter()
                .map(|(n, d, eg, eb)| {
                    Poly::term(Q::new(n, d), Monomial::from_pairs([("g", eg), ("b", eb)]))
                })
                .sum()
        })
    }

    proptest! {
        #[test]
        fn distributive(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            let lhs = &(&p + &q) * &r;
            let rhs = &(&p * &r) + &(&q * &r);
            prop_assert_eq!(lhs, rhs);
            prop_assert!((&p - &p).is_identically_zero());
        }

        #[test]
        fn commutative_associative(p in arb_poly(), q in arb_poly(), r in arb_poly()) {
            prop_assert_eq!(&p * &q, &q * &p);
            prop_assert_eq!(&(&p * &q) * &r, &p * &(&q * &r));
            prop_assert_eq!(&(&p + &q) + &r, &p + &(&q + &r));
        }

        #[test]
        fn rational_string_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
            let q = Q::new(n, d);
            prop_assert_eq!(q.to_string().parse::<Q>().unwrap(), q);
        }

        #[test]
        fn poly_string_round_trip(p in arb_poly()) {
            prop_assert_eq!(Poly::parse(&p.to_string()).unwrap(), p);
        }

        #[test]
        fn ceil_div_is_least_upper(a in -1000i64..1000, b in 1i64..50) {
            let c = ceil_div(a, b);
            prop_assert!(c * b >= a && (c - 1) * b < a);
        }
    }
}
