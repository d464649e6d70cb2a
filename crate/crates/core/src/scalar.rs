//! Coefficient traits.
//!
//! Everything in this crate is generic over a [`Scalar`] field. The pipeline
//! compares values with `==`, so exact fields (`BigRational`, `Rational64`)
//! are the intended instantiations; `f64` satisfies the bounds but only makes
//! sense for exploratory use.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_integer::Integer;
use num_traits::{FromPrimitive, Num, One, ToPrimitive, Zero};

/// A commutative ring with unit whose elements can be cloned and shared
/// between threads.
pub trait Ring:
    Clone
    + PartialEq
    + Debug
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
    + Send
    + Sync
{
}

/// A field of characteristic zero.
pub trait Scalar: Num + Clone + Neg<Output = Self> + FromPrimitive + Debug + Display + Send + Sync + 'static {
    fn from_int(n: i64) -> Self {
        Self::from_i64(n).expect("integer is representable")
    }

    fn inv(&self) -> Self {
        Self::one() / self.clone()
    }

    /// Coefficients of the product of two nonempty coefficient vectors.
    /// Overridden where a faster route than schoolbook field arithmetic
    /// exists.
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let mut out = vec![Self::zero(); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                out[i + j] = out[i + j].clone() + x.clone() * y.clone();
            }
        }
        out
    }

    /// Quotient and remainder coefficients of `a` divided by `b`, where `b`
    /// has a nonzero last entry and `a.len() >= b.len()`.
    fn div_rem(a: &[Self], b: &[Self]) -> (Vec<Self>, Vec<Self>) {
        let dd = b.len() - 1;
        let lc_inv = b[dd].inv();
        let mut rem = a.to_vec();
        let mut quot = vec![Self::zero(); a.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = rem[i + dd].clone() * lc_inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, d) in b.iter().enumerate() {
                rem[i + j] = rem[i + j].clone() - c.clone() * d.clone();
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (quot, rem)
    }
}

fn clear_denominators(v: &[BigRational]) -> (Vec<BigInt>, BigInt) {
    let den = v.iter().fold(BigInt::one(), |l, c| l.lcm(c.denom()));
    let nums = v.iter().map(|c| c.numer() * (&den / c.denom())).collect();
    (nums, den)
}

/// Clears denominators, convolves over the integers and normalizes once per
/// output coefficient instead of once per term.
impl Scalar for BigRational {
    fn convolve(a: &[Self], b: &[Self]) -> Vec<Self> {
        let (an, ad) = clear_denominators(a);
        let (bn, bd) = clear_denominators(b);
        let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
        for (i, x) in an.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in bn.iter().enumerate() {
                out[i + j] += x * y;
            }
        }
        let den = ad * bd;
        out.into_iter().map(|n| BigRational::new(n, den.clone())).collect()
    }

    // Pseudo-division: the remainder is kept as R/δ with R integral, and
    // each step multiplies through by the divisor's leading coefficient.
    fn div_rem(a: &[Self], b: &[Self]) -> (Vec<Self>, Vec<Self>) {
        let dd = b.len() - 1;
        let (mut rem, mut delta) = clear_denominators(a);
        let (bn, beta) = clear_denominators(b);
        let lc = bn[dd].clone();
        let mut quot = vec![BigRational::zero(); a.len() - dd];
        for i in (0..quot.len()).rev() {
            let top = std::mem::take(&mut rem[i + dd]);
            if top.is_zero() {
                continue;
            }
            // c = (top/δ) / (lc/β)
            quot[i] = BigRational::new(&top * &beta, &delta * &lc);
            if !lc.is_one() {
                for r in rem[..i + dd].iter_mut() {
                    *r *= &lc;
                }
                delta *= &lc;
            }
            for (j, d) in bn[..dd].iter().enumerate() {
                rem[i + j] -= &top * d;
            }
            let mut g = delta.clone();
            for r in &rem[..i + dd] {
                if g.is_one() {
                    break;
                }
                g = g.gcd(r);
            }
            if !g.is_one() {
                for r in rem[..i + dd].iter_mut() {
                    *r /= &g;
                }
                delta /= &g;
            }
        }
        rem.truncate(dd);
        let rem = rem.into_iter().map(|r| BigRational::new(r, delta.clone())).collect();
        (quot, rem)
    }
}

impl Scalar for Ratio<i64> {}

impl Scalar for f64 {}

impl<T: Scalar> Ring for T {}

/// Scalars that embed in the rationals. Needed where the algorithm has to
/// look at numerators and denominators, e.g. isolating rational roots.
pub trait RationalScalar: Scalar {
    fn to_rational(&self) -> BigRational;
    fn from_rational(q: &BigRational) -> Self;
}

impl RationalScalar for BigRational {
    fn to_rational(&self) -> BigRational {
        self.clone()
    }
    fn from_rational(q: &BigRational) -> Self {
        q.clone()
    }
}

impl RationalScalar for Ratio<i64> {
    fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(*self.numer()), BigInt::from(*self.denom()))
    }
    fn from_rational(q: &BigRational) -> Self {
        let n = q.numer().to_i64().expect("numerator fits in i64");
        let d = q.denom().to_i64().expect("denominator fits in i64");
        Ratio::new(n, d)
    }
}
