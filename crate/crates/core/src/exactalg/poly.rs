use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Ring, Scalar};

/// Dense univariate polynomial in λ; `coeffs[i]` is the coefficient of λ^i.
///
/// The top stored coefficient is never zero, so the zero polynomial has an
/// empty coefficient list.
#[derive(Clone, PartialEq, Debug, Default)]
pub struct Poly<S> {
    coeffs: Vec<S>,
}

impl<S: Scalar> Poly<S> {
    pub fn new(mut coeffs: Vec<S>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn constant(c: S) -> Self {
        Self::new(vec![c])
    }

    /// c·λ^k
    pub fn monomial(c: S, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); k + 1];
        coeffs[k] = c;
        Self { coeffs }
    }

    pub fn lambda() -> Self {
        Self::monomial(S::one(), 1)
    }

    pub fn coeffs(&self) -> &[S] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<S> {
        self.coeffs
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, i: usize) -> S {
        self.coeffs.get(i).cloned().unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<&S> {
        self.coeffs.last()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_some_and(|c| c.is_one())
    }

    /// Lowest exponent with a nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    /// True for c·λ^k with c ≠ 0.
    pub fn is_monomial(&self) -> bool {
        match self.valuation() {
            Some(v) => v + 1 == self.coeffs.len(),
            None => false,
        }
    }

    pub fn eval(&self, x: &S) -> S {
        self.coeffs
            .iter()
            .rev()
            .fold(S::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    pub fn scale(&self, c: &S) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self::new(self.coeffs.iter().map(|a| a.clone() * c.clone()).collect())
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut coeffs = vec![S::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        Self { coeffs }
    }

    pub fn monic(&self) -> Self {
        match self.leading() {
            Some(lc) => self.scale(&lc.inv()),
            None => Self::zero(),
        }
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by the zero polynomial");
        if self.coeffs.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let (quot, rem) = S::div_rem(&self.coeffs, &divisor.coeffs);
        (Self::new(quot), Self::new(rem))
    }

    /// Quotient when `divisor` divides `self` exactly.
    pub fn exact_div(&self, divisor: &Self) -> Option<Self> {
        let (q, r) = self.div_rem(divisor);
        r.is_zero().then_some(q)
    }

    pub fn divides(&self, other: &Self) -> bool {
        if self.is_zero() {
            return other.is_zero();
        }
        other.div_rem(self).1.is_zero()
    }

    /// Monic gcd (zero when both inputs vanish).
    pub fn gcd(&self, other: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).1;
            a = b;
            b = r;
        }
        a.monic()
    }

    /// (g, s, t) with s·self + t·other = g = gcd, g monic (zero when both
    /// inputs vanish).
    pub fn ext_gcd(&self, other: &Self) -> (Self, Self, Self) {
        let (mut r0, mut r1) = (self.clone(), other.clone());
        let (mut s0, mut s1) = (Self::one(), Self::zero());
        let (mut t0, mut t1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            let t2 = &t0 - &(&q * &t1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
            (t0, t1) = (t1, t2);
        }
        match r0.leading() {
            Some(lc) => {
                let inv = lc.inv();
                (r0.scale(&inv), s0.scale(&inv), t0.scale(&inv))
            }
            None => (r0, s0, t0),
        }
    }

    /// Inverse modulo `m` (degree below m's), if `self` is coprime to it.
    /// Only the cofactor of `self` is carried, and remainders are kept monic
    /// to hold down coefficient growth.
    pub fn inverse_mod(&self, m: &Self) -> Option<Self> {
        let (mut r0, mut r1) = (m.monic(), self.div_rem(m).1);
        let (mut s0, mut s1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let inv = Self::constant(r1.leading().unwrap().inv());
            r1 = &r1 * &inv;
            s1 = &s1 * &inv;
            let (q, r) = r0.div_rem(&r1);
            let s2 = &s0 - &(&q * &s1);
            (r0, r1) = (r1, r);
            (s0, s1) = (s1, s2);
        }
        (r0 == Self::one()).then(|| s0.div_rem(m).1)
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c.clone() * S::from_int(i as i64))
                .collect(),
        )
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::one(), |acc, _| &acc * self)
    }
}

impl<S: Scalar> Zero for Poly<S> {
    fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<S: Scalar> One for Poly<S> {
    fn one() -> Self {
        Self { coeffs: vec![S::one()] }
    }
}

impl<'a, S: Scalar> Add<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn add(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Sub<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn sub(self, rhs: &Poly<S>) -> Poly<S> {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl<'a, S: Scalar> Mul<&'a Poly<S>> for &'a Poly<S> {
    type Output = Poly<S>;
    fn mul(self, rhs: &Poly<S>) -> Poly<S> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        Poly::new(S::convolve(&self.coeffs, &rhs.coeffs))
    }
}

impl<S: Scalar> Neg for &Poly<S> {
    type Output = Poly<S>;
    fn neg(self) -> Poly<S> {
        Poly { coeffs: self.coeffs.iter().map(|c| -c.clone()).collect() }
    }
}

macro_rules! forward_by_value {
    ($ty:ident, $($tr:ident :: $m:ident),*) => {$(
        impl<S: Scalar> $tr for $ty<S> {
            type Output = $ty<S>;
            fn $m(self, rhs: $ty<S>) -> $ty<S> {
                $tr::$m(&self, &rhs)
            }
        }
    )*
        impl<S: Scalar> Neg for $ty<S> {
            type Output = $ty<S>;
            fn neg(self) -> $ty<S> {
                -&self
            }
        }
    };
}
pub(crate) use forward_by_value;

forward_by_value!(Poly, Add::add, Sub::sub, Mul::mul);

impl<S: Scalar> Ring for Poly<S> {}

impl<S: Scalar> fmt::Display for Poly<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_terms(f, self.coeffs.iter().enumerate().map(|(i, c)| (i as i64, c)))
    }
}

/// Shared pretty-printer for polynomials and Laurent polynomials.
pub(crate) fn fmt_terms<'a, S: Scalar>(
    f: &mut fmt::Formatter<'_>,
    terms: impl Iterator<Item = (i64, &'a S)>,
) -> fmt::Result {
    let mut first = true;
    for (e, c) in terms {
        if c.is_zero() {
            continue;
        }
        if !first {
            write!(f, " + ")?;
        }
        first = false;
        match e {
            0 => write!(f, "{c}")?,
            1 => write!(f, "{c}*λ")?,
            _ => write!(f, "{c}*λ^{e}")?,
        }
    }
    if first {
        write!(f, "0")?;
    }
    Ok(())
}
