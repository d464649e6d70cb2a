//! Localized K[λ]-metrics, the filtration they induce, the nilpotent
//! construction, and the mixed-Frobenius-algebra axiom checker.

mod metric;
mod nilpotent;

pub use metric::{
    filtration_from_profile, normalize_metric, residue_metric_well_defined_check, FiltrationProfile, LocalizedMetric,
    PolyVector,
};
pub use nilpotent::{nilpotent_filtration_direct, nilpotent_localized_metric, NilpotentData};

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::algebra::{is_ideal, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Poly, Subspace};
use crate::filtration::NondegenerateFiltration;
use crate::report::VerificationReport;
use crate::scalar::Scalar;

pub use crate::filtration::Level;

#[derive(Clone, Debug)]
pub struct MixedFrobeniusAlgebra<S> {
    pub algebra: FiniteAlgebra<S>,
    pub filtration: NondegenerateFiltration<S>,
    /// D_k for the jumps k, used when the algebra is graded.
    pub charges: Option<BTreeMap<i64, S>>,
}

impl<S: Scalar> MixedFrobeniusAlgebra<S> {
    pub fn new(algebra: FiniteAlgebra<S>, filtration: NondegenerateFiltration<S>) -> Self {
        Self { algebra, filtration, charges: None }
    }

    pub fn with_charges(mut self, charges: BTreeMap<i64, S>) -> Self {
        self.charges = Some(charges);
        self
    }
}

/// Checks every condition of a Frobenius filtration: exhaustive, ideals,
/// symmetric nondegenerate graded metrics, A-invariance on I_k/I_{k−1}, and,
/// for graded algebras with charges, g_k(x, y) = 0 unless |x| + |y| = D_k.
pub fn check_mfa<S: Scalar>(m: &MixedFrobeniusAlgebra<S>) -> VerificationReport {
    let a = &m.algebra;
    let f = &m.filtration;
    let mut report = VerificationReport::new("mixed Frobenius algebra");
    report.check(
        "exhaustive",
        if f.ambient() != a.dim() {
            Err("filtration lives on a space of the wrong dimension".into())
        } else if f.is_exhaustive() {
            Ok(())
        } else {
            Err("top filter is a proper subspace".into())
        },
    );
    report.check("ideal", first_err(f.levels(), |l| {
        is_ideal(a, &l.subspace).map_err(|(i, v)| {
            format!("I_{}: {} · ({}) ∉ I_{}", l.index, a.names()[i], a.format_element(&v), l.index)
        })
    }));
    report.check("metric-symmetric", first_err(f.levels(), |l| {
        if l.gram.is_symmetric() { Ok(()) } else { Err(format!("g_{}", l.index)) }
    }));
    report.check("metric-nondegenerate", first_err(f.levels(), |l| {
        if l.gram.det().is_zero() { Err(format!("g_{}", l.index)) } else { Ok(()) }
    }));
    report.check("metric-invariant", first_err(f.levels(), |l| invariance_at(a, f, l.index)));
    if let (Some(charges), Some(_)) = (&m.charges, a.grading()) {
        report.check("graded-filters", first_err(f.levels(), |l| {
            if graded_pieces(a, &l.subspace).iter().map(|(_, p)| p.dim()).sum::<usize>() == l.subspace.dim() {
                Ok(())
            } else {
                Err(format!("I_{} is not spanned by homogeneous elements", l.index))
            }
        }));
        report.check("charge", first_err(f.levels(), |l| charge_at(a, f, l.index, charges)));
    }
    report
}

fn first_err<T>(items: &[T], f: impl FnMut(&T) -> std::result::Result<(), String>) -> std::result::Result<(), String> {
    items.iter().map(f).find(|r| r.is_err()).unwrap_or(Ok(()))
}

/// g_k(a·x, y) = g_k(x, a·y) on reps; pairs where a·x leaves I_k are the
/// business of the ideal axiom and are skipped here.
fn invariance_at<S: Scalar>(a: &FiniteAlgebra<S>, f: &NondegenerateFiltration<S>, k: i64) -> std::result::Result<(), String> {
    let level = f.level(k).expect("k is a jump");
    for e in 0..a.dim() {
        let be = a.basis_element(e);
        for (i, x) in level.reps.iter().enumerate() {
            for (j, y) in level.reps.iter().enumerate() {
                let ax = a.mul(&be, x);
                let ay = a.mul(&be, y);
                if let (Some(l), Some(r)) = (f.metric(k, &ax, y), f.metric(k, x, &ay)) {
                    if l != r {
                        return Err(format!("g_{k}({}·x{i}, x{j}) = {l} ≠ {r} = g_{k}(x{i}, {}·x{j})", a.names()[e], a.names()[e]));
                    }
                }
            }
        }
    }
    Ok(())
}

/// (d, I ∩ A_d) for every degree d present in the grading.
pub(crate) fn graded_pieces<S: Scalar>(a: &FiniteAlgebra<S>, sub: &Subspace<S>) -> Vec<(i64, Subspace<S>)> {
    let g = a.grading().expect("graded algebra");
    let mut degrees: Vec<i64> = g.to_vec();
    degrees.sort_unstable();
    degrees.dedup();
    degrees
        .into_iter()
        .map(|d| {
            let ad = Subspace::span(a.dim(), (0..a.dim()).filter(|&i| g[i] == d).map(|i| a.basis_element(i)));
            (d, sub.intersection(&ad))
        })
        .collect()
}

fn charge_at<S: Scalar>(
    a: &FiniteAlgebra<S>,
    f: &NondegenerateFiltration<S>,
    k: i64,
    charges: &BTreeMap<i64, S>,
) -> std::result::Result<(), String> {
    let Some(dk) = charges.get(&k) else {
        return Err(format!("no charge given for jump {k}"));
    };
    let pieces = graded_pieces(a, &f.subspace_at(k));
    for (d1, p1) in &pieces {
        for (d2, p2) in &pieces {
            if S::from_int(d1 + d2) == *dk {
                continue;
            }
            for x in p1.basis() {
                for y in p2.basis() {
                    let v = f.metric(k, x, y).expect("elements of I_k");
                    if !v.is_zero() {
                        return Err(format!("g_{k} pairs degrees {d1} and {d2} to {v} but D_{k} = {dk}"));
                    }
                }
            }
        }
    }
    Ok(())
}

/// Commutative unital K[λ]-algebra structure on H^λ with structure constants
/// in K[λ] and a constant unit.
#[derive(Clone, Debug)]
pub struct LambdaAlgebra<S> {
    table: Vec<Vec<Vec<Poly<S>>>>,
    unit: Vec<S>,
}

impl<S: Scalar> LambdaAlgebra<S> {
    pub fn new(table: Vec<Vec<Vec<Poly<S>>>>, unit: Vec<S>) -> Result<Self> {
        let s = unit.len();
        if table.len() != s || table.iter().any(|r| r.len() != s || r.iter().any(|v| v.len() != s)) {
            return Err(Error::Dimension(format!("structure table is not {s}×{s}×{s}")));
        }
        let alg = Self { table, unit };
        for i in 0..s {
            for j in 0..s {
                if alg.table[i][j] != alg.table[j][i] {
                    return Err(Error::InvalidAlgebra(format!("not commutative on ({i}, {j})")));
                }
                for k in 0..s {
                    let l = alg.mul(&alg.table[i][j], &alg.basis(k));
                    let r = alg.mul(&alg.basis(i), &alg.table[j][k]);
                    if l != r {
                        return Err(Error::InvalidAlgebra(format!("not associative on ({i}, {j}, {k})")));
                    }
                }
            }
            let u: Vec<Poly<S>> = alg.unit.iter().cloned().map(Poly::constant).collect();
            if alg.mul(&u, &alg.basis(i)) != alg.basis(i) {
                return Err(Error::InvalidAlgebra(format!("unit fails on basis element {i}")));
            }
        }
        Ok(alg)
    }

    /// A[λ] with the λ-independent product of A.
    pub fn constant(a: &FiniteAlgebra<S>) -> Self {
        let s = a.dim();
        let table = (0..s)
            .map(|i| (0..s).map(|j| a.structure(i, j).iter().cloned().map(Poly::constant).collect()).collect())
            .collect();
        Self { table, unit: a.unit().to_vec() }
    }

    pub fn dim(&self) -> usize {
        self.unit.len()
    }

    fn basis(&self, i: usize) -> Vec<Poly<S>> {
        let mut v = vec![Poly::zero(); self.dim()];
        v[i] = Poly::one();
        v
    }

    pub fn structure(&self, i: usize, j: usize) -> &[Poly<S>] {
        &self.table[i][j]
    }

    pub fn mul(&self, x: &[Poly<S>], y: &[Poly<S>]) -> Vec<Poly<S>> {
        let s = self.dim();
        let mut out = vec![Poly::zero(); s];
        for (i, xi) in x.iter().enumerate() {
            for (j, yj) in y.iter().enumerate() {
                if xi.is_zero() || yj.is_zero() {
                    continue;
                }
                let c = xi * yj;
                for (o, t) in out.iter_mut().zip(&self.table[i][j]) {
                    *o = &*o + &(&c * t);
                }
            }
        }
        out
    }

    /// The induced product on H = H^λ/λH^λ.
    pub fn at_zero(&self, names: Vec<String>) -> Result<FiniteAlgebra<S>> {
        let table = self
            .table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|p| p.coeff(0)).collect()).collect())
            .collect();
        FiniteAlgebra::new(names, table, self.unit.clone(), None)
    }
}

/// The mixed Frobenius algebra on H = H^λ/λH^λ induced by a ∗-invariant
/// localized metric.
pub fn mfa_from_invariant_localized_metric<S: Scalar>(
    alg: &LambdaAlgebra<S>,
    g: &LocalizedMetric<S>,
    names: Vec<String>,
) -> Result<MixedFrobeniusAlgebra<S>> {
    let s = alg.dim();
    if g.dim() != s || names.len() != s {
        return Err(Error::Dimension("algebra and metric sizes differ".into()));
    }
    for a in 0..s {
        for b in 0..s {
            for c in 0..s {
                let l = g.pair(alg.structure(a, b), &alg.basis(c));
                let r = g.pair(&alg.basis(a), alg.structure(b, c));
                if l != r {
                    return Err(Error::NotInvariant(format!(
                        "g(e{a} ∗ e{b}, e{c}) = {l} but g(e{a}, e{b} ∗ e{c}) = {r}"
                    )));
                }
            }
        }
    }
    let profile = normalize_metric(g)?;
    let filtration = filtration_from_profile(&profile, g)?;
    Ok(MixedFrobeniusAlgebra::new(alg.at_zero(names)?, filtration))
}

/// The trivial filtration 0 ⊂ A with an invariant metric, i.e. a Frobenius
/// algebra.
pub fn frobenius_algebra_as_mfa<S: Scalar>(a: FiniteAlgebra<S>, g: Matrix<S>) -> Result<MixedFrobeniusAlgebra<S>> {
    let s = a.dim();
    let basis = (0..s).map(|i| a.basis_element(i)).collect();
    let f = NondegenerateFiltration::new(s, vec![(0, basis, g)])?;
    Ok(MixedFrobeniusAlgebra::new(a, f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::frobenius_filtration_existence;
    use crate::exactalg::unit_vector;
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    #[test]
    fn frobenius_algebra_passes() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(3);
        let g = a.pairing_from_functional(&unit_vector(3, 2));
        let m = frobenius_algebra_as_mfa(a, g).unwrap();
        let r = check_mfa(&m);
        assert!(r.passed(), "{r}");
    }

    #[test]
    fn non_ideal_first_filter_fails_ideal_axiom() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(2);
        let f = NondegenerateFiltration::from_jumps(
            2,
            vec![
                (0, vec![vec![q(1), q(1)]], Matrix::from_rows(vec![vec![q(2)]])),
                (1, vec![unit_vector(2, 1)], Matrix::from_rows(vec![vec![q(1)]])),
            ],
        )
        .unwrap();
        let r = check_mfa(&MixedFrobeniusAlgebra::new(a, f));
        assert_eq!(r.failures(), vec!["ideal"], "{r}");
    }

    #[test]
    fn existence_output_passes() {
        let a = FiniteAlgebra::<Q>::monomial_quotient(&[3, 2]);
        let f = frobenius_filtration_existence(&a).unwrap();
        assert!(check_mfa(&MixedFrobeniusAlgebra::new(a, f)).passed());
    }

    #[test]
    fn charges_checked_on_graded_algebras() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(3);
        let g = a.pairing_from_functional(&unit_vector(3, 2));
        let m = frobenius_algebra_as_mfa(a, g).unwrap();
        let good = m.clone().with_charges(BTreeMap::from([(0, q(2))]));
        assert!(check_mfa(&good).passed());
        let bad = m.with_charges(BTreeMap::from([(0, q(3))]));
        assert_eq!(check_mfa(&bad).failures(), vec!["charge"]);
    }

    #[test]
    fn invariance_violation_named() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(2);
        let alg = LambdaAlgebra::constant(&a);
        let g = LocalizedMetric::new(Matrix::identity(2)).unwrap();
        let err = mfa_from_invariant_localized_metric(&alg, &g, a.names().to_vec()).unwrap_err();
        assert!(matches!(err, Error::NotInvariant(_)));
    }
}
