//! Division by a monic polynomial with coefficients in a commutative algebra.

use crate::error::{Error, Result};

/// Coefficient arithmetic for polynomials over a (possibly non-field)
/// commutative ring described at runtime, such as a finite algebra.
pub trait CoefficientRing {
    type Elem: Clone + PartialEq;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn is_zero(&self, a: &Self::Elem) -> bool {
        *a == self.zero()
    }
}

/// Polynomial with ring coefficients, `coeffs[i]` multiplying λ^i.
pub type RingPoly<R> = Vec<<R as CoefficientRing>::Elem>;

pub fn trim<R: CoefficientRing>(ring: &R, mut p: RingPoly<R>) -> RingPoly<R> {
    while p.last().is_some_and(|c| ring.is_zero(c)) {
        p.pop();
    }
    p
}

pub fn poly_mul<R: CoefficientRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> RingPoly<R> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![ring.zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = ring.add(&out[i + j], &ring.mul(x, y));
        }
    }
    trim(ring, out)
}

pub fn poly_add<R: CoefficientRing>(ring: &R, a: &[R::Elem], b: &[R::Elem]) -> RingPoly<R> {
    let n = a.len().max(b.len());
    let z = ring.zero();
    let out = (0..n)
        .map(|i| ring.add(a.get(i).unwrap_or(&z), b.get(i).unwrap_or(&z)))
        .collect();
    trim(ring, out)
}

/// Writes x = n·quotient + remainder with deg(remainder) < deg(n).
///
/// `n` must be monic; the decomposition is then unique even though the
/// coefficient ring has zero divisors.
pub fn divide_by_monic<R: CoefficientRing>(
    ring: &R,
    x: &[R::Elem],
    n: &[R::Elem],
) -> Result<(RingPoly<R>, RingPoly<R>)> {
    let n = trim(ring, n.to_vec());
    let Some(lead) = n.last() else {
        return Err(Error::NotMonic("divisor is zero".into()));
    };
    if *lead != ring.one() {
        return Err(Error::NotMonic("leading coefficient of the divisor is not 1".into()));
    }
    let r = n.len() - 1;
    let mut rem = trim(ring, x.to_vec());
    if rem.len() <= r {
        return Ok((Vec::new(), rem));
    }
    let mut quot = vec![ring.zero(); rem.len() - r];
    for i in (0..quot.len()).rev() {
        let c = rem[i + r].clone();
        if ring.is_zero(&c) {
            continue;
        }
        for (j, nj) in n.iter().enumerate() {
            rem[i + j] = ring.sub(&rem[i + j], &ring.mul(&c, nj));
        }
        quot[i] = c;
    }
    rem.truncate(r);
    Ok((trim(ring, quot), trim(ring, rem)))
}
