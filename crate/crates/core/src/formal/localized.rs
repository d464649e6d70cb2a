use std::collections::BTreeMap;

use num_traits::Zero;

use super::mfs::FormalMFS;
use super::saito::{saito_records, FormalSaito};
use super::series::{bracket_lambda, TruncatedSeries, VectorField};
use crate::error::{Error, Result};
use crate::exactalg::LaurentPoly;
use crate::mfa::{filtration_from_profile, normalize_metric, LocalizedMetric};
use crate::report::VerificationReport;
use crate::scalar::Scalar;

/// A product ∗ over K[λ] (structure constants with Laurent coefficients,
/// required λ-regular only when taking the limit), an Euler field E, a
/// localized metric on the constant frame and a charge D.
#[derive(Clone, Debug)]
pub struct LocalizedFormalFrobenius<S: Scalar> {
    pub saito: FormalSaito<LaurentPoly<S>>,
    pub metric: LocalizedMetric<S>,
    pub charge: S,
}

impl<S: Scalar> LocalizedFormalFrobenius<S> {
    /// g^λ(u, x_β) for a field u, as a series.
    fn pair_with_frame(&self, u: &[TruncatedSeries<LaurentPoly<S>>], b: usize) -> TruncatedSeries<LaurentPoly<S>> {
        let g = self.metric.matrix();
        let mut out = self.saito.zero_series();
        for (c, uc) in u.iter().enumerate() {
            if !g[(c, b)].is_zero() && !uc.is_zero() {
                out = out.add(&uc.scale(&g[(c, b)]));
            }
        }
        out
    }
}

/// Conditions (i)–(iv): the Saito-type axioms with E^λ = E + λ∂_λ (EF1),
/// ∗-invariance of g^λ, and E^λ g^λ(x,y) − g^λ([E^λ,x],y) − g^λ(x,[E^λ,y])
/// = (2 − D) g^λ(x,y) (EF2).
pub fn check_localized_formal_frobenius<S: Scalar>(f: &LocalizedFormalFrobenius<S>) -> VerificationReport {
    let s = &f.saito;
    let n = s.dim();
    let t = s.order;
    let t1 = t.saturating_sub(1);
    let mut report = VerificationReport::new("localized formal Frobenius structure");
    saito_records(s, &mut report, "EF1");
    if f.metric.dim() != n {
        report.check("metric", Err(format!("metric has size {} but the frame has {n}", f.metric.dim())));
        return report;
    }

    report.check_at("metric-invariant", t, (|| {
        for a in 0..n {
            for b in 0..n {
                let lhs_field = &s.table[a][b];
                for d in 0..n {
                    let lhs = f.pair_with_frame(lhs_field, d);
                    let rhs = f.pair_with_frame(&s.table[a][d], b);
                    if let Some(e) = lhs.first_difference(&rhs, t) {
                        return Err(format!(
                            "g(x{a}∗x{b}, x{d}) ≠ g(x{b}, x{a}∗x{d}) at {}",
                            s.frame.monomial_name(&e)
                        ));
                    }
                }
            }
        }
        Ok(())
    })());

    report.check_at("EF2", t1, (|| {
        let two_minus = LaurentPoly::constant(S::from_int(2) - f.charge.clone());
        let brackets: Vec<VectorField<LaurentPoly<S>>> =
            (0..n).map(|a| bracket_lambda(&s.frame, &s.euler, &s.frame_field(a))).collect();
        let g = f.metric.matrix();
        for a in 0..n {
            for b in 0..n {
                let gab = TruncatedSeries::constant(n, t, g[(a, b)].clone());
                // E kills constants, so only λ∂_λ acts on g^λ(x_a, x_b)
                let lhs = gab
                    .lambda_euler()
                    .sub(&f.pair_with_frame(&brackets[a], b))
                    .sub(&f.pair_with_frame(&brackets[b], a));
                let rhs = gab.scale(&two_minus);
                if let Some(e) = lhs.first_difference(&rhs, t1) {
                    return Err(format!(
                        "pair (x{a}, x{b}) at {}: lhs {} vs (2 − D)·g = {}",
                        s.frame.monomial_name(&e),
                        lhs.coeff(&e),
                        rhs.coeff(&e)
                    ));
                }
            }
        }
        Ok(())
    })());
    report
}

/// λ → 0: the product and Euler field at λ = 0, the filtration induced by
/// g^λ, and charges D_k = D − k.
pub fn limit_mfs<S: Scalar>(f: &LocalizedFormalFrobenius<S>) -> Result<FormalMFS<S>> {
    let s = &f.saito;
    let n = s.dim();
    let at_zero = |series: &TruncatedSeries<LaurentPoly<S>>, what: &dyn Fn() -> String| -> Result<TruncatedSeries<S>> {
        let mut out = TruncatedSeries::zero(n, s.order);
        for (e, c) in series.terms() {
            let v = c.value_at_zero().ok_or_else(|| {
                Error::LambdaPole(format!("{} has {} at {}", what(), c, s.frame.monomial_name(e)))
            })?;
            out.add_term(e.clone(), v);
        }
        Ok(out)
    };
    let mut table = Vec::with_capacity(n);
    for a in 0..n {
        let mut row = Vec::with_capacity(n);
        for b in 0..n {
            let mut v = Vec::with_capacity(n);
            for g in 0..n {
                v.push(at_zero(&s.table[a][b][g], &|| format!("C_({a},{b})^{g}"))?);
            }
            row.push(v);
        }
        table.push(row);
    }
    let euler = (0..n)
        .map(|g| at_zero(&s.euler[g], &|| format!("E^{g}")))
        .collect::<Result<Vec<_>>>()?;
    let saito = FormalSaito::new(s.frame.clone(), s.order, table, s.unit.clone(), euler)?;
    let profile = normalize_metric(&f.metric)?;
    let filtration = filtration_from_profile(&profile, &f.metric)?;
    let charges: BTreeMap<i64, S> = filtration
        .jumps()
        .into_iter()
        .map(|k| (k, f.charge.clone() - S::from_int(k)))
        .collect();
    Ok(FormalMFS { saito, filtration, charges })
}
