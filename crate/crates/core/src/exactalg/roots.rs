//! Rational roots of rational polynomials by Sturm-sequence bisection.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::Poly;

type Q = BigRational;

fn sign_changes(seq: &[Poly<Q>], x: &Q) -> usize {
    let mut last: Option<bool> = None;
    let mut count = 0;
    for p in seq {
        let v = p.eval(x);
        if v.is_zero() {
            continue;
        }
        let pos = v.is_positive();
        if last.is_some_and(|l| l != pos) {
            count += 1;
        }
        last = Some(pos);
    }
    count
}

fn sturm_sequence(p: &Poly<Q>) -> Vec<Poly<Q>> {
    let mut seq = vec![p.clone(), p.derivative()];
    loop {
        let n = seq.len();
        if seq[n - 1].is_zero() {
            seq.pop();
            break;
        }
        let r = seq[n - 2].div_rem(&seq[n - 1]).1;
        if r.is_zero() {
            break;
        }
        seq.push(-r);
    }
    seq
}

/// Distinct rational roots of `f`, in increasing order.
pub fn rational_roots(f: &Poly<Q>) -> Vec<Q> {
    let Some(deg) = f.degree() else {
        return Vec::new();
    };
    if deg == 0 {
        return Vec::new();
    }
    let g = f.gcd(&f.derivative());
    let sqfree = f.div_rem(&g).0;
    let n = sqfree.degree().unwrap();

    // integer coefficients
    let lcm = sqfree
        .coeffs()
        .iter()
        .fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = sqfree
        .coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(lcm.clone())).to_integer())
        .collect();
    let lead = ints[n].clone();

    // y = lead·x turns the polynomial monic with integer coefficients, so
    // rational roots in x become integer roots in y
    let mut monic = Vec::with_capacity(n + 1);
    let mut scale = BigInt::one();
    let mut pows = vec![BigInt::one(); n + 1];
    for i in (0..n).rev() {
        scale *= &lead;
        pows[i] = scale.clone();
    }
    for i in 0..=n {
        let c = if i == n { BigInt::one() } else { &ints[i] * &pows[i] / &lead };
        monic.push(Q::from_integer(c));
    }
    // pows[i] = lead^(n-i); dividing by lead once gives lead^(n-1-i)
    let h = Poly::new(monic);
    let bound = h
        .coeffs()
        .iter()
        .map(|c| c.abs().to_integer())
        .max()
        .unwrap_or_else(BigInt::zero)
        + BigInt::one();

    let seq = sturm_sequence(&h);
    let mut found = Vec::new();
    let mut stack = vec![(-&bound - BigInt::one(), bound.clone())];
    while let Some((a, b)) = stack.pop() {
        let qa = Q::from_integer(a.clone());
        let qb = Q::from_integer(b.clone());
        if sign_changes(&seq, &qa) <= sign_changes(&seq, &qb) {
            continue;
        }
        if &b - &a == BigInt::one() {
            if h.eval(&qb).is_zero() {
                found.push(qb / Q::from_integer(lead.clone()));
            }
            continue;
        }
        let mid = (&a + &b).div_floor(&BigInt::from(2));
        stack.push((a, mid.clone()));
        stack.push((mid, b));
    }
    found.sort();
    found
}
