//! Small models with hand-checkable answers.

use super::gw::{GWDataset, GwRecord};
use super::model::{BundleData, CohomologyModel};
use crate::exactalg::Poly;
use crate::scalar::Scalar;

/// P² with V = O(−3): basis (1, h, h²), c_1(V) = −3h.
pub fn local_p2<S: Scalar>() -> (CohomologyModel<S>, BundleData<S>) {
    let c = CohomologyModel::projective_space(2);
    let b = BundleData::line_bundle(&c, vec![S::zero(), S::from_int(-3), S::zero()]).expect("O(-3)");
    (c, b)
}

/// P¹ with V = O(−2).
pub fn local_p1<S: Scalar>() -> (CohomologyModel<S>, BundleData<S>) {
    let c = CohomologyModel::projective_space(1);
    let b = BundleData::line_bundle(&c, vec![S::zero(), S::from_int(-2)]).expect("O(-2)");
    (c, b)
}

/// ⟨h, h, h⟩_d = c_d for d = 1..; λ-constant, as the degree axiom demands on P²/O(−3).
pub fn local_p2_dataset<S: Scalar>(values: &[i64]) -> GWDataset<S> {
    hhh_dataset(values, 0)
}

/// ⟨h, h, h⟩_d = c_d λ on P¹/O(−2).
pub fn local_p1_dataset<S: Scalar>(values: &[i64]) -> GWDataset<S> {
    hhh_dataset(values, 1)
}

fn hhh_dataset<S: Scalar>(values: &[i64], lambda_power: usize) -> GWDataset<S> {
    let records = values
        .iter()
        .enumerate()
        .map(|(i, &v)| GwRecord {
            degree: vec![i as u32 + 1],
            insertions: vec![1, 1, 1],
            value: Poly::monomial(S::from_int(v), lambda_power),
        })
        .collect();
    GWDataset::new(vec![values.len() as u32], lambda_power, records).expect("valid synthetic data")
}
