use std::collections::BTreeMap;

use num_traits::Zero;

use super::model::{BundleData, CohomologyModel};
use crate::error::{Error, Result};
use crate::exactalg::Poly;
use crate::scalar::Scalar;

/// One correlator ⟨φ_{i_1}, …, φ_{i_m}⟩_{V,d} ∈ K[λ], as read from a file.
#[derive(Clone, Debug, PartialEq)]
pub struct GwRecord<S> {
    pub degree: Vec<u32>,
    pub insertions: Vec<usize>,
    pub value: Poly<S>,
}

/// Correlators with d ≠ 0 in the reduced form: three arbitrary slots plus
/// insertions from the τ_{≥4} sector. Stored under sorted insertion lists.
#[derive(Clone, Debug, PartialEq)]
pub struct GWDataset<S> {
    max_degree: Vec<u32>,
    lambda_bound: usize,
    records: BTreeMap<(Vec<u32>, Vec<usize>), Poly<S>>,
}

impl<S: Scalar> GWDataset<S> {
    pub fn empty(p: usize) -> Self {
        GWDataset { max_degree: vec![0; p], lambda_bound: 0, records: BTreeMap::new() }
    }

    /// Rejects d = 0, d beyond `max_degree`, fewer than three insertions,
    /// values above the λ-degree bound and records that disagree under a
    /// permutation of insertions.
    pub fn new(max_degree: Vec<u32>, lambda_bound: usize, records: Vec<GwRecord<S>>) -> Result<Self> {
        let mut out = GWDataset { max_degree, lambda_bound, records: BTreeMap::new() };
        for (i, r) in records.into_iter().enumerate() {
            let bad = |m: String| Err(Error::InvalidDataset(format!("record {}: {m}", i + 1)));
            if r.degree.len() != out.max_degree.len() {
                return bad(format!("degree has {} entries, expected {}", r.degree.len(), out.max_degree.len()));
            }
            if r.degree.iter().all(|&d| d == 0) {
                return bad("degree 0 is generated internally".into());
            }
            if r.degree.iter().zip(&out.max_degree).any(|(d, m)| d > m) {
                return bad(format!("degree {:?} exceeds max_degree {:?}", r.degree, out.max_degree));
            }
            if r.insertions.len() < 3 {
                return bad("need at least three insertions".into());
            }
            if r.value.degree().is_some_and(|d| d > lambda_bound) {
                return bad(format!("value has λ-degree above the bound {lambda_bound}"));
            }
            let mut key = r.insertions.clone();
            key.sort_unstable();
            match out.records.get(&(r.degree.clone(), key.clone())) {
                Some(v) if *v != r.value => {
                    return bad(format!(
                        "asymmetric: insertions {:?} at degree {:?} already have value {v}, now {}",
                        r.insertions, r.degree, r.value
                    ))
                }
                Some(_) => {}
                None => {
                    if !r.value.is_zero() {
                        out.records.insert((r.degree, key), r.value);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> &[u32] {
        &self.max_degree
    }

    pub fn lambda_bound(&self) -> usize {
        self.lambda_bound
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// (degree, sorted insertions, value), in canonical order.
    pub fn records(&self) -> impl Iterator<Item = (&Vec<u32>, &Vec<usize>, &Poly<S>)> {
        self.records.iter().map(|((d, k), v)| (d, k, v))
    }

    pub fn value(&self, degree: &[u32], insertions: &[usize]) -> Poly<S> {
        let mut key = insertions.to_vec();
        key.sort_unstable();
        self.records.get(&(degree.to_vec(), key)).cloned().unwrap_or_else(Poly::zero)
    }

    /// Checks the records against a model: index ranges, at most three
    /// insertions outside τ_{≥4}, the fundamental class axiom, and the
    /// degree axiom (value = c·λ^j with j from [`correlator_lambda_degree`]).
    pub fn validate(&self, c: &CohomologyModel<S>, b: &BundleData<S>) -> Result<()> {
        let p = c.p();
        if self.max_degree.len() != p {
            return Err(Error::InvalidDataset(format!("degree vectors have {} entries but the model has p = {p}", self.max_degree.len())));
        }
        let xi = super::twisted::euler_weights(c, b)?;
        for ((d, key), v) in &self.records {
            let here = || format!("⟨{key:?}⟩ at degree {d:?}");
            if let Some(&i) = key.iter().find(|&&i| i >= c.dim()) {
                return Err(Error::InvalidDataset(format!("{}: no basis element {i}", here())));
            }
            if key.contains(&0) {
                return Err(Error::InvalidDataset(format!("{}: insertion of 1 must vanish for d ≠ 0", here())));
            }
            if key.iter().filter(|&&i| i <= p).count() > 3 {
                return Err(Error::InvalidDataset(format!("{}: more than three insertions outside the τ_≥4 sector", here())));
            }
            let j = correlator_lambda_degree(c, b, &xi, d, key);
            let ok = v.is_monomial() && v.degree().is_some_and(|k| S::from_int(k as i64) == j);
            if !ok {
                return Err(Error::InvalidDataset(format!("{}: value {v} is not a multiple of λ^{j} (degree axiom)", here())));
            }
        }
        Ok(())
    }
}

/// λ-degree forced on ⟨x_1,…,x_m⟩_{V,d}: Σ(|x_i| − 1) + 3 − (dim X + r) − Σ ξ_i d_i.
pub fn correlator_lambda_degree<S: Scalar>(
    c: &CohomologyModel<S>,
    b: &BundleData<S>,
    xi: &[S],
    degree: &[u32],
    insertions: &[usize],
) -> S {
    let deg = c.degrees();
    let mut j: i64 = insertions.iter().map(|&i| deg[i] - 1).sum();
    j += 3 - (c.dim_x() + b.rank) as i64;
    let mut out = S::from_int(j);
    for (x, &d) in xi.iter().zip(degree) {
        out = out - x.clone() * S::from_int(d as i64);
    }
    out
}
