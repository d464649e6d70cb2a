use std::collections::BTreeMap;


use super::saito::{constant_structure, linear_euler, saito_records, FormalSaito};
use super::series::{bracket, constant_field, Frame, TruncatedSeries, VectorField};
use crate::error::{Error, Result};
use crate::filtration::NondegenerateFiltration;
use crate::mfa::{check_mfa, MixedFrobeniusAlgebra};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

/// A formal Saito structure with a nondegenerate filtration on the constant
/// frame H_K and charges D_k on the jumps.
#[derive(Clone, Debug)]
pub struct FormalMFS<S: Scalar> {
    pub saito: FormalSaito<S>,
    pub filtration: NondegenerateFiltration<S>,
    pub charges: BTreeMap<i64, S>,
}

/// Coefficient vectors of a vector field: monomial ↦ (component values).
pub(crate) fn coefficient_vectors<S: Scalar>(v: &[TruncatedSeries<S>]) -> BTreeMap<Vec<u32>, Vec<S>> {
    let n = v.len();
    let mut out: BTreeMap<Vec<u32>, Vec<S>> = BTreeMap::new();
    for (g, comp) in v.iter().enumerate() {
        for (e, c) in comp.terms() {
            out.entry(e.clone()).or_insert_with(|| vec![S::zero(); n])[g] = c.clone();
        }
    }
    out
}

/// g_k(u, y) extended O-bilinearly, for u a field with values in I_k and y a
/// constant vector of I_k; `None` if some coefficient leaves I_k.
fn metric_series<S: Scalar>(
    f: &NondegenerateFiltration<S>,
    k: i64,
    u: &[TruncatedSeries<S>],
    y: &[S],
    nvars: usize,
    order: usize,
) -> Option<TruncatedSeries<S>> {
    let mut out = TruncatedSeries::zero(nvars, order);
    for (e, v) in coefficient_vectors(u) {
        out.add_term(e, f.metric(k, &v, y)?);
    }
    Some(out)
}

/// Saito axioms plus: each O⊗I_k is an ideal, each g_k is ∘-invariant,
/// [E, −] preserves O⊗I_k, and E g_k(x̄,ȳ) − g_k([E,x],ȳ) − g_k(x̄,[E,y]) =
/// (2 − D_k) g_k(x̄,ȳ).
pub fn check_formal_mfs<S: Scalar>(m: &FormalMFS<S>) -> VerificationReport {
    let s = &m.saito;
    let f = &m.filtration;
    let n = s.dim();
    let t = s.order;
    let t1 = t.saturating_sub(1);
    let mut report = VerificationReport::new("formal mixed Frobenius structure");
    saito_records(s, &mut report, "E1");

    report.check_at("filtration", t, {
        if f.ambient() != n {
            Err(format!("filtration lives on a space of dimension {} ≠ {n}", f.ambient()))
        } else {
            f.validate().map_err(|e| e.to_string())
        }
    });
    if f.ambient() != n {
        return report;
    }

    let basis_of = |k: i64| f.subspace_at(k).basis().to_vec();

    report.check_at("ideal", t, (|| {
        for l in f.levels() {
            for y in basis_of(l.index) {
                for a in 0..n {
                    let prod = s.product(&s.frame_field(a), &constant_field(n, t, &y));
                    for (e, v) in coefficient_vectors(&prod) {
                        if !l.subspace.contains(&v) {
                            return Err(format!("I_{}: {}∘y leaves I_{} at {}", l.index, s.frame.field_name(a), l.index, s.frame.monomial_name(&e)));
                        }
                    }
                }
            }
        }
        Ok(())
    })());

    report.check_at("metric-invariant", t, (|| {
        for l in f.levels() {
            let k = l.index;
            let basis = basis_of(k);
            for a in 0..n {
                let x = s.frame_field(a);
                for y in &basis {
                    let xy = s.product(&x, &constant_field(n, t, y));
                    for z in &basis {
                        let xz = s.product(&x, &constant_field(n, t, z));
                        let (Some(lhs), Some(rhs)) =
                            (metric_series(f, k, &xy, z, n, t), metric_series(f, k, &xz, y, n, t))
                        else {
                            continue; // reported by the ideal axiom
                        };
                        if let Some(e) = lhs.first_difference(&rhs, t) {
                            return Err(format!("g_{k}({}∘y, z) ≠ g_{k}(y, {}∘z) at {}", s.frame.field_name(a), s.frame.field_name(a), s.frame.monomial_name(&e)));
                        }
                    }
                }
            }
        }
        Ok(())
    })());

    report.check_at("euler-preserves", t1, (|| {
        for l in f.levels() {
            for y in basis_of(l.index) {
                let ey = bracket(&s.frame, &s.euler, &constant_field(n, t, &y));
                for (e, v) in coefficient_vectors(&ey) {
                    if super::series::total_degree(&e) <= t1 && !l.subspace.contains(&v) {
                        return Err(format!("[E, y] leaves I_{} at {}", l.index, s.frame.monomial_name(&e)));
                    }
                }
            }
        }
        Ok(())
    })());

    report.check_at("Eg", t1, (|| {
        for l in f.levels() {
            let k = l.index;
            let Some(dk) = m.charges.get(&k) else {
                return Err(format!("no charge declared for jump {k}"));
            };
            let two_minus = S::from_int(2) - dk.clone();
            let basis = basis_of(k);
            let brackets: Vec<VectorField<S>> =
                basis.iter().map(|y| bracket(&s.frame, &s.euler, &constant_field(n, t, y))).collect();
            for (i, x) in basis.iter().enumerate() {
                for (j, y) in basis.iter().enumerate() {
                    let gxy = f.metric(k, x, y).expect("basis of I_k");
                    // E applied to the constant g_k(x̄, ȳ) vanishes
                    let Some(a) = metric_series(f, k, &brackets[i], y, n, t) else {
                        return Err(format!("[E, x] leaves I_{k}"));
                    };
                    let Some(b) = metric_series(f, k, &brackets[j], x, n, t) else {
                        return Err(format!("[E, y] leaves I_{k}"));
                    };
                    let lhs = a.add(&b).neg();
                    let rhs = TruncatedSeries::constant(n, t, two_minus.clone() * gxy);
                    if let Some(e) = lhs.first_difference(&rhs, t1) {
                        return Err(format!(
                            "jump {k}, basis pair ({i}, {j}): E g_k − g_k([E,x],y) − g_k(x,[E,y]) ≠ (2 − {dk}) g_k at {}",
                            s.frame.monomial_name(&e)
                        ));
                    }
                }
            }
        }
        Ok(())
    })());
    report
}

/// The formal MFS of a graded mixed Frobenius algebra: constant structure
/// constants, E = Σ (1 − |e_a|) t_a ∂_a, the given filtration and charges.
///
/// An ungraded algebra is treated as concentrated in degree 0, with all
/// charges 0 unless others are declared (which then fail the check).
pub fn mfs_from_graded_mfa<S: Scalar>(m: &MixedFrobeniusAlgebra<S>, order: usize) -> Result<FormalMFS<S>> {
    let a = &m.algebra;
    let n = a.dim();
    let (graded, charges) = match (a.grading(), &m.charges) {
        (Some(_), Some(c)) => (a.clone(), c.clone()),
        (Some(_), None) => return Err(Error::Grading("graded algebra without charges".into())),
        (None, c) => {
            let charges = c.clone().unwrap_or_else(|| m.filtration.jumps().into_iter().map(|k| (k, S::zero())).collect());
            (a.clone().with_grading(Some(vec![0; n]))?, charges)
        }
    };
    let checked = MixedFrobeniusAlgebra { algebra: graded.clone(), filtration: m.filtration.clone(), charges: Some(charges.clone()) };
    let report = check_mfa(&checked);
    for name in ["graded-filters", "charge"] {
        if let Some(r) = report.record(name).filter(|r| !r.passed) {
            return Err(Error::Grading(r.counterexample.clone().unwrap_or_default()));
        }
    }
    if !report.passed() {
        return Err(Error::InvalidAlgebra(format!("not a mixed Frobenius algebra: {:?}", report.failures())));
    }
    let weights: Vec<S> = graded.grading().unwrap().iter().map(|&d| S::from_int(1 - d)).collect();
    let saito = FormalSaito::new(
        Frame::flat(n),
        order,
        constant_structure(&graded, order),
        graded.unit().to_vec(),
        linear_euler(n, order, &weights),
    )?;
    Ok(FormalMFS { saito, filtration: m.filtration.clone(), charges })
}
