use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::poly::{fmt_terms, forward_by_value, Poly};
use crate::scalar::{Ring, Scalar};

/// Laurent polynomial in λ over a scalar field.
///
/// `coeffs[i]` is the coefficient of λ^(min_exponent + i). Both ends of the
/// coefficient list are nonzero; the zero polynomial is stored with an empty
/// list and `min_exponent == 0`.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct LaurentPoly<S> {
    min_exponent: i64,
    coeffs: Vec<S>,
}

impl<S: Scalar> LaurentPoly<S> {
    pub fn new(min_exponent: i64, coeffs: Vec<S>) -> Self {
        let mut out = Self { min_exponent, coeffs };
        out.normalize();
        out
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
        let lead = self.coeffs.iter().take_while(|c| c.is_zero()).count();
        if lead > 0 {
            self.coeffs.drain(..lead);
            self.min_exponent += lead as i64;
        }
        if self.coeffs.is_empty() {
            self.min_exponent = 0;
        }
    }

    /// c·λ^k
    pub fn monomial(c: S, k: i64) -> Self {
        Self::new(k, vec![c])
    }

    pub fn constant(c: S) -> Self {
        Self::monomial(c, 0)
    }

    /// Builds from sparse `(exponent, coefficient)` terms; repeated exponents add up.
    pub fn from_terms(terms: impl IntoIterator<Item = (i64, S)>) -> Self {
        terms
            .into_iter()
            .fold(Self::zero(), |acc, (e, c)| &acc + &Self::monomial(c, e))
    }

    pub fn from_poly(p: &Poly<S>) -> Self {
        Self::new(0, p.coeffs().to_vec())
    }

    pub fn min_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.min_exponent)
    }

    pub fn max_exponent(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then(|| self.min_exponent + self.coeffs.len() as i64 - 1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn coeff(&self, e: i64) -> S {
        let i = e - self.min_exponent;
        if i < 0 {
            return S::zero();
        }
        self.coeffs.get(i as usize).cloned().unwrap_or_else(S::zero)
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &S)> {
        let base = self.min_exponent;
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (base + i as i64, c))
    }

    /// Multiplication by λ^k.
    pub fn shift(&self, k: i64) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        Self { min_exponent: self.min_exponent + k, coeffs: self.coeffs.clone() }
    }

    pub fn scale(&self, c: &S) -> Self {
        Self::new(self.min_exponent, self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    /// Coefficient of λ^{-1}.
    pub fn residue_at_zero(&self) -> S {
        self.coeff(-1)
    }

    /// True when no negative powers of λ occur.
    pub fn is_polynomial(&self) -> bool {
        self.is_zero() || self.min_exponent >= 0
    }

    pub fn to_poly(&self) -> Option<Poly<S>> {
        if !self.is_polynomial() {
            return None;
        }
        let mut coeffs = vec![S::zero(); self.min_exponent.max(0) as usize];
        coeffs.extend(self.coeffs.iter().cloned());
        Some(Poly::new(coeffs))
    }

    /// True for c·λ^k with c ≠ 0: the units of K[λ, λ^{-1}].
    pub fn is_monomial(&self) -> bool {
        self.coeffs.len() == 1
    }

    /// Inverse of a unit c·λ^k.
    pub fn monomial_inverse(&self) -> Option<Self> {
        self.is_monomial()
            .then(|| Self::monomial(self.coeffs[0].inv(), -self.min_exponent))
    }

    /// Value at λ = 0 (defined only for polynomials).
    pub fn value_at_zero(&self) -> Option<S> {
        self.is_polynomial().then(|| self.coeff(0))
    }

    /// λ d/dλ, the Euler operator in λ.
    pub fn lambda_derivative(&self) -> Self {
        Self::new(
            self.min_exponent,
            self.coeffs
                .iter()
                .enumerate()
                .map(|(i, c)| c.clone() * S::from_int(self.min_exponent + i as i64))
                .collect(),
        )
    }

    /// The polynomial that remains after dropping all terms of degree > `max`.
    pub fn truncate_above(&self, max: i64) -> Self {
        Self::from_terms(self.terms().filter(|(e, _)| *e <= max).map(|(e, c)| (e, c.clone())))
    }
}

impl<S: Scalar> Zero for LaurentPoly<S> {
    fn zero() -> Self {
        Self { min_exponent: 0, coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for LaurentPoly<S> {
    fn one() -> Self {
        Self::constant(S::one())
    }
}

impl<S: Scalar> From<Poly<S>> for LaurentPoly<S> {
    fn from(p: Poly<S>) -> Self {
        Self::from_poly(&p)
    }
}

fn combine<S: Scalar>(
    a: &LaurentPoly<S>,
    b: &LaurentPoly<S>,
    f: impl Fn(S, S) -> S,
) -> LaurentPoly<S> {
    if a.is_zero() && b.is_zero() {
        return LaurentPoly::zero();
    }
    let lo = match (a.min_exponent(), b.min_exponent()) {
        (Some(x), Some(y)) => x.min(y),
        (Some(x), None) | (None, Some(x)) => x,
        (None, None) => unreachable!(),
    };
    let hi = a.max_exponent().into_iter().chain(b.max_exponent()).max().unwrap();
    LaurentPoly::new(lo, (lo..=hi).map(|e| f(a.coeff(e), b.coeff(e))).collect())
}

impl<'a, S: Scalar> Add<&'a LaurentPoly<S>> for &'a LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn add(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        combine(self, rhs, |x, y| x + y)
    }
}

impl<'a, S: Scalar> Sub<&'a LaurentPoly<S>> for &'a LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn sub(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        combine(self, rhs, |x, y| x - y)
    }
}

impl<'a, S: Scalar> Mul<&'a LaurentPoly<S>> for &'a LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn mul(self, rhs: &LaurentPoly<S>) -> LaurentPoly<S> {
        if self.is_zero() || rhs.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly::new(self.min_exponent + rhs.min_exponent, S::convolve(&self.coeffs, &rhs.coeffs))
    }
}

impl<S: Scalar> Neg for &LaurentPoly<S> {
    type Output = LaurentPoly<S>;
    fn neg(self) -> LaurentPoly<S> {
        LaurentPoly {
            min_exponent: self.min_exponent,
            coeffs: self.coeffs.iter().map(|c| -c.clone()).collect(),
        }
    }
}

forward_by_value!(LaurentPoly, Add::add, Sub::sub, Mul::mul);

impl<S: Scalar> Ring for LaurentPoly<S> {}

impl<S: Scalar> fmt::Display for LaurentPoly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.terms())
    }
}

/// Coefficient of λ^{-1}.
pub fn residue_at_zero<S: Scalar>(f: &LaurentPoly<S>) -> S {
    f.residue_at_zero()
}
