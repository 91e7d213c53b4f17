//! Exact scalar arithmetic: arbitrary-precision rationals and sparse
//! multivariate polynomials over them.
//!
//! `Poly` is the universal weight type of this crate. Every edge weight,
//! matrix entry, and determinant is a `Poly`; rationals embed as constant
//! polynomials. All operations are exact; there is no floating point
//! anywhere in the crate.

mod parse;

pub use parse::PolyParseError;

use num::{BigInt, BigRational, One, Signed, Zero};
use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use thiserror::Error;

/// Arbitrary-precision rational number, always stored reduced with a
/// positive denominator (zero is `0/1`).
pub type Rational = BigRational;

/// Shorthand for an integer rational.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Shorthand for the reduced fraction `n/d`. Panics if `d == 0`.
pub fn frac(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Errors from ring operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("variable `{0}` has no value in the assignment")]
    MissingVariable(VarId),
    #[error("polynomial division left a nonzero remainder")]
    NotDivisible,
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("invalid variable name `{0}`: expected [a-zA-Z][a-zA-Z0-9_]*")]
    BadVariableName(String),
}

/// An indeterminate, identified by name.
///
/// Names match `[a-zA-Z][a-zA-Z0-9_]*`. The ordering is lexicographic on
/// the name and fixes the canonical form of monomials and polynomials.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId(Arc<str>);

impl VarId {
    pub fn new(name: &str) -> Result<VarId, RingError> {
        let mut chars = name.chars();
        let head_ok = chars.next().is_some_and(|c| c.is_ascii_alphabetic());
        let tail_ok = chars.all(|c| c.is_ascii_alphanumeric() || c == '_');
        if head_ok && tail_ok {
            Ok(VarId(Arc::from(name)))
        } else {
            Err(RingError::BadVariableName(name.to_string()))
        }
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VarId({})", self.0)
    }
}

impl FromStr for VarId {
    type Err = RingError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        VarId::new(s)
    }
}

/// A product of variable powers, e.g. `a^2*b`.
///
/// Stored as a list of `(variable, exponent)` pairs sorted by variable,
/// with no zero exponents; the empty list is the constant monomial `1`.
/// Monomials are ordered by total degree first, then lexicographically
/// (the earlier variable with the higher exponent wins). This graded
/// order is what makes serialized polynomials deterministic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial {
    vars: Vec<(VarId, u32)>,
}

impl Monomial {
    /// The constant monomial `1`.
    pub fn one() -> Monomial {
        Monomial { vars: Vec::new() }
    }

    /// The monomial consisting of a single variable.
    pub fn var(v: VarId) -> Monomial {
        Monomial { vars: vec![(v, 1)] }
    }

    /// Builds a monomial from `(variable, exponent)` pairs; zero exponents
    /// are dropped and repeated variables have their exponents added.
    pub fn from_pairs<I: IntoIterator<Item = (VarId, u32)>>(pairs: I) -> Monomial {
        let mut map: BTreeMap<VarId, u32> = BTreeMap::new();
        for (v, e) in pairs {
            if e > 0 {
                *map.entry(v).or_insert(0) += e;
            }
        }
        Monomial {
            vars: map.into_iter().collect(),
        }
    }

    pub fn is_one(&self) -> bool {
        self.vars.is_empty()
    }

    /// Total degree (sum of exponents).
    pub fn degree(&self) -> u64 {
        self.vars.iter().map(|(_, e)| u64::from(*e)).sum()
    }

    /// Exponent of `v` in this monomial (0 if absent).
    pub fn exponent(&self, v: &VarId) -> u32 {
        self.vars
            .binary_search_by(|(w, _)| w.cmp(v))
            .map(|i| self.vars[i].1)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&VarId, u32)> {
        self.vars.iter().map(|(v, e)| (v, *e))
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut vars = Vec::with_capacity(self.vars.len() + other.vars.len());
        let (mut i, mut j) = (0, 0);
        while i < self.vars.len() && j < other.vars.len() {
            let (va, ea) = &self.vars[i];
            let (vb, eb) = &other.vars[j];
            match va.cmp(vb) {
                Ordering::Less => {
                    vars.push((va.clone(), *ea));
                    i += 1;
                }
                Ordering::Greater => {
                    vars.push((vb.clone(), *eb));
                    j += 1;
                }
                Ordering::Equal => {
                    let e = ea.checked_add(*eb).expect("exponent overflow");
                    vars.push((va.clone(), e));
                    i += 1;
                    j += 1;
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        vars.extend_from_slice(&other.vars[j..]);
        Monomial { vars }
    }

    /// `self / other` when every exponent of `other` is covered.
    pub fn checked_div(&self, other: &Monomial) -> Option<Monomial> {
        let mut vars = Vec::with_capacity(self.vars.len());
        let mut i = 0;
        for (vb, eb) in &other.vars {
            loop {
                let (va, ea) = self.vars.get(i)?;
                match va.cmp(vb) {
                    Ordering::Less => {
                        vars.push((va.clone(), *ea));
                        i += 1;
                    }
                    Ordering::Greater => return None,
                    Ordering::Equal => {
                        if ea < eb {
                            return None;
                        }
                        if ea > eb {
                            vars.push((va.clone(), ea - eb));
                        }
                        i += 1;
                        break;
                    }
                }
            }
        }
        vars.extend_from_slice(&self.vars[i..]);
        Some(Monomial { vars })
    }

    pub fn pow(&self, n: u32) -> Monomial {
        if n == 0 {
            return Monomial::one();
        }
        Monomial {
            vars: self
                .vars
                .iter()
                .map(|(v, e)| (v.clone(), e.checked_mul(n).expect("exponent overflow")))
                .collect(),
        }
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree().cmp(&other.degree()).then_with(|| {
            // Graded tie-break: scan variables in order; at the first
            // position where the exponents differ, the larger one wins.
            let (mut i, mut j) = (0, 0);
            loop {
                match (self.vars.get(i), other.vars.get(j)) {
                    (None, None) => return Ordering::Equal,
                    (Some(_), None) => return Ordering::Greater,
                    (None, Some(_)) => return Ordering::Less,
                    (Some((va, ea)), Some((vb, eb))) => match va.cmp(vb) {
                        Ordering::Less => return Ordering::Greater,
                        Ordering::Greater => return Ordering::Less,
                        Ordering::Equal => match ea.cmp(eb) {
                            Ordering::Equal => {
                                i += 1;
                                j += 1;
                            }
                            ord => return ord,
                        },
                    },
                }
            }
        })
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.vars.is_empty() {
            return f.write_str("1");
        }
        let mut first = true;
        for (v, e) in &self.vars {
            if !first {
                f.write_str("*")?;
            }
            first = false;
            write!(f, "{v}")?;
            if *e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Monomial({self})")
    }
}

/// A sparse multivariate polynomial with rational coefficients.
///
/// Terms are kept sorted by the monomial order with no zero coefficients,
/// so two polynomials are equal exactly when their representations are,
/// and `to_string` is canonical.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    terms: Vec<(Monomial, Rational)>,
}

impl Poly {
    pub fn zero() -> Poly {
        Poly { terms: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Poly {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly {
                terms: vec![(Monomial::one(), c)],
            }
        }
    }

    /// The polynomial consisting of the single variable `v`.
    pub fn var(v: VarId) -> Poly {
        Poly {
            terms: vec![(Monomial::var(v), Rational::one())],
        }
    }

    /// Builds a polynomial from arbitrary terms, combining duplicates and
    /// dropping zero coefficients.
    pub fn from_terms<I: IntoIterator<Item = (Monomial, Rational)>>(terms: I) -> Poly {
        let mut map: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (m, c) in terms {
            if c.is_zero() {
                continue;
            }
            match map.entry(m) {
                std::collections::btree_map::Entry::Vacant(e) => {
                    e.insert(c);
                }
                std::collections::btree_map::Entry::Occupied(mut e) => {
                    *e.get_mut() += c;
                }
            }
        }
        Poly {
            terms: map.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.as_constant().is_some_and(|c| c.is_one())
    }

    /// `Some(c)` when the polynomial is the constant `c` (including zero).
    pub fn as_constant(&self) -> Option<Rational> {
        match self.terms.as_slice() {
            [] => Some(Rational::zero()),
            [(m, c)] if m.is_one() => Some(c.clone()),
            _ => None,
        }
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms in ascending monomial order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter().map(|(m, c)| (m, c))
    }

    /// Total degree; 0 for the zero polynomial.
    pub fn degree(&self) -> u64 {
        self.terms.iter().map(|(m, _)| m.degree()).max().unwrap_or(0)
    }

    /// The set of variables that occur with nonzero exponent.
    pub fn variables(&self) -> Vec<VarId> {
        let mut set: Vec<VarId> = Vec::new();
        for (m, _) in &self.terms {
            for (v, _) in m.iter() {
                if let Err(pos) = set.binary_search(v) {
                    set.insert(pos, v.clone());
                }
            }
        }
        set
    }

    /// True when every coefficient is an integer.
    pub fn has_integer_coefficients(&self) -> bool {
        self.terms.iter().all(|(_, c)| c.is_integer())
    }

    fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.last().map(|(m, c)| (m, c))
    }

    pub fn add(&self, other: &Poly) -> Poly {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() && j < other.terms.len() {
            let (ma, ca) = &self.terms[i];
            let (mb, cb) = &other.terms[j];
            match ma.cmp(mb) {
                Ordering::Less => {
                    terms.push((ma.clone(), ca.clone()));
                    i += 1;
                }
                Ordering::Greater => {
                    terms.push((mb.clone(), cb.clone()));
                    j += 1;
                }
                Ordering::Equal => {
                    let c = ca + cb;
                    if !c.is_zero() {
                        terms.push((ma.clone(), c));
                    }
                    i += 1;
                    j += 1;
                }
            }
        }
        terms.extend_from_slice(&self.terms[i..]);
        terms.extend_from_slice(&other.terms[j..]);
        Poly { terms }
    }

    pub fn neg(&self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        // Accumulate into a map; iteration order restores canonical form.
        let mut acc: BTreeMap<Monomial, Rational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    std::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    std::collections::btree_map::Entry::Occupied(mut e) => {
                        *e.get_mut() += c;
                    }
                }
            }
        }
        Poly {
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }

    /// Multiplies every coefficient by `c`.
    pub fn scale(&self, c: &Rational) -> Poly {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            terms: self.terms.iter().map(|(m, k)| (m.clone(), k * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Poly {
        let mut result = Poly::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = result.mul(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    /// Evaluates at a rational point. Every variable of the polynomial
    /// must be present in the assignment.
    pub fn eval(&self, assignment: &BTreeMap<VarId, Rational>) -> Result<Rational, RingError> {
        let mut total = Rational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (var, e) in m.iter() {
                let x = assignment
                    .get(var)
                    .ok_or_else(|| RingError::MissingVariable(var.clone()))?;
                v *= rational_pow(x, e);
            }
            total += v;
        }
        Ok(total)
    }

    /// Exact quotient `self / divisor`.
    ///
    /// Long division by leading-term elimination in the monomial order;
    /// any step whose leading term is not divisible means no exact
    /// quotient exists and yields [`RingError::NotDivisible`].
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly, RingError> {
        let (lm_d, lc_d) = divisor.leading().ok_or(RingError::DivisionByZero)?;
        let mut rem = self.clone();
        let mut quotient: Vec<(Monomial, Rational)> = Vec::new();
        while let Some((lm_r, lc_r)) = rem.leading() {
            let m = lm_r.checked_div(lm_d).ok_or(RingError::NotDivisible)?;
            let c = lc_r / lc_d;
            let step = Poly {
                terms: vec![(m.clone(), c.clone())],
            };
            rem = rem.sub(&step.mul(divisor));
            quotient.push((m, c));
        }
        // Terms were produced in strictly descending order.
        quotient.reverse();
        Ok(Poly { terms: quotient })
    }

    /// The polynomial `q` with `self = Σ_power var^power · q_power`,
    /// for a single `power` of `var` (the terms of `self` whose exponent
    /// of `var` is exactly `power`, with that power divided out).
    pub fn coefficient_of(&self, var: &VarId, power: u32) -> Poly {
        let single = Monomial::var(var.clone()).pow(power);
        Poly::from_terms(self.terms.iter().filter_map(|(m, c)| {
            if m.exponent(var) == power {
                let stripped = m.checked_div(&single).expect("exponent checked");
                Some((stripped, c.clone()))
            } else {
                None
            }
        }))
    }
}

fn rational_pow(base: &Rational, exp: u32) -> Rational {
    let mut result = Rational::one();
    let mut base = base.clone();
    let mut exp = exp;
    while exp > 0 {
        if exp & 1 == 1 {
            result *= &base;
        }
        exp >>= 1;
        if exp > 0 {
            base = base.clone() * &base;
        }
    }
    result
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c.is_negative();
            if idx == 0 {
                if negative {
                    f.write_str("-")?;
                }
            } else if negative {
                f.write_str(" - ")?;
            } else {
                f.write_str(" + ")?;
            }
            let mag = c.abs();
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
    type Err = PolyParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse::parse_poly(s)
    }
}

impl From<Rational> for Poly {
    fn from(c: Rational) -> Poly {
        Poly::constant(c)
    }
}

impl From<i64> for Poly {
    fn from(n: i64) -> Poly {
        Poly::constant(rat(n))
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl std::ops::$trait for &Poly {
            type Output = Poly;
            fn $method(self, rhs: &Poly) -> Poly {
                Poly::$method(self, rhs)
            }
        }
        impl std::ops::$trait for Poly {
            type Output = Poly;
            fn $method(self, rhs: Poly) -> Poly {
                Poly::$method(&self, &rhs)
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);

impl std::ops::Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(self)
    }
}

impl std::ops::Neg for Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::neg(&self)
    }
}

#[cfg(test)]
pub(crate) mod strategies {
    use super::*;
    use proptest::prelude::*;

    /// Monomials over {a, b, c, d} of total degree at most 3.
    pub fn small_monomial() -> impl Strategy<Value = Monomial> {
        (0usize..=3, proptest::collection::vec(0usize..4, 0..=3)).prop_map(|(_, picks)| {
            let names = ["a", "b", "c", "d"];
            Monomial::from_pairs(
                picks
                    .into_iter()
                    .map(|i| (VarId::new(names[i]).unwrap(), 1u32)),
            )
        })
    }

    /// Small polynomials: ≤4 variables, total degree ≤3, coefficients in [-9, 9].
    pub fn small_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((small_monomial(), -9i64..=9), 0..=5)
            .prop_map(|terms| Poly::from_terms(terms.into_iter().map(|(m, c)| (m, rat(c)))))
    }
}
