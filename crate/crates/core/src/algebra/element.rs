use std::collections::BTreeMap;

use super::FiniteAlgebra;
use crate::error::{Error, Result};
use crate::exactalg::LaurentPoly;
use crate::scalar::Scalar;

/// Laurent polynomial in λ with coefficients in a finite algebra; only
/// nonzero coefficients are stored.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct ElementLaurent<S> {
    terms: BTreeMap<i64, Vec<S>>,
}

impl<S: Scalar> ElementLaurent<S> {
    pub fn zero() -> Self {
        Self { terms: BTreeMap::new() }
    }

    pub fn monomial(coeff: Vec<S>, exp: i64) -> Self {
        let mut out = Self::zero();
        out.add_term(exp, &coeff);
        out
    }

    /// Σ coeffs[i]·λ^i
    pub fn from_poly(coeffs: &[Vec<S>]) -> Self {
        let mut out = Self::zero();
        for (i, c) in coeffs.iter().enumerate() {
            out.add_term(i as i64, c);
        }
        out
    }

    pub fn add_term(&mut self, exp: i64, coeff: &[S]) {
        if coeff.iter().all(|c| c.is_zero()) {
            return;
        }
        let entry = self.terms.entry(exp).or_insert_with(|| vec![S::zero(); coeff.len()]);
        for (e, c) in entry.iter_mut().zip(coeff) {
            *e = e.clone() + c.clone();
        }
        if entry.iter().all(|c| c.is_zero()) {
            self.terms.remove(&exp);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (i64, &Vec<S>)> {
        self.terms.iter().map(|(e, c)| (*e, c))
    }

    pub fn coeff(&self, exp: i64, dim: usize) -> Vec<S> {
        self.terms.get(&exp).cloned().unwrap_or_else(|| vec![S::zero(); dim])
    }

    pub fn min_exponent(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(*e, c);
        }
        out
    }

    pub fn mul(&self, alg: &FiniteAlgebra<S>, other: &Self) -> Self {
        let mut out = Self::zero();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                out.add_term(a + b, &alg.mul(x, y));
            }
        }
        out
    }

    /// λ^k · self
    pub fn shift(&self, k: i64) -> Self {
        Self { terms: self.terms.iter().map(|(e, c)| (e + k, c.clone())).collect() }
    }

    /// Applies a linear functional coefficientwise.
    pub fn pair(&self, phi: impl Fn(&[S]) -> S) -> LaurentPoly<S> {
        LaurentPoly::from_terms(self.terms.iter().map(|(e, c)| (*e, phi(c))))
    }
}

/// Inverse of n = λ^r + c_1 λ^{r−1} + ⋯ + c_r for nilpotent c_i:
/// n^{-1} = Σ_{j≥0} λ^{−(j+1)r} (λ^r − n)^j, a finite sum.
pub fn monic_inverse<S: Scalar>(alg: &FiniteAlgebra<S>, c: &[Vec<S>]) -> Result<ElementLaurent<S>> {
    let r = c.len() as i64;
    for (i, ci) in c.iter().enumerate() {
        if !alg.is_nilpotent(ci) {
            return Err(Error::NotNilpotent(format!("coefficient {} = {}", i + 1, alg.format_element(ci))));
        }
    }
    // m = λ^r − n = −Σ c_i λ^{r−i}
    let mut m = ElementLaurent::zero();
    for (i, ci) in c.iter().enumerate() {
        let neg: Vec<S> = ci.iter().map(|x| -x.clone()).collect();
        m.add_term(r - 1 - i as i64, &neg);
    }
    let mut power = ElementLaurent::monomial(alg.unit().to_vec(), 0);
    let mut out = ElementLaurent::zero();
    let mut j = 0;
    while !power.is_zero() {
        out = out.add(&power.shift(-(j + 1) * r));
        power = power.mul(alg, &m);
        j += 1;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    type Q = BigRational;

    #[test]
    fn inverse_of_lambda_plus_epsilon() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(2);
        let inv = monic_inverse(&a, &[a.basis_element(1)]).unwrap();
        let expected = ElementLaurent::monomial(a.basis_element(0), -1)
            .add(&ElementLaurent::monomial(vec![Q::from_int(0), Q::from_int(-1)], -2));
        assert_eq!(inv, expected);
    }

    #[test]
    fn product_with_divisor_is_one() {
        let a = FiniteAlgebra::<Q>::monomial_quotient(&[3, 2]);
        let c = vec![a.basis_element(1), a.basis_element(3)];
        let inv = monic_inverse(&a, &c).unwrap();
        let n = ElementLaurent::from_poly(&[c[1].clone(), c[0].clone(), a.unit().to_vec()]);
        assert_eq!(n.mul(&a, &inv), ElementLaurent::monomial(a.unit().to_vec(), 0));
    }

    #[test]
    fn rejects_non_nilpotent() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(2);
        assert!(matches!(monic_inverse(&a, &[a.unit().to_vec()]), Err(Error::NotNilpotent(_))));
    }
}
