use num_traits::{One, Zero};
use rayon::prelude::*;

use super::series::{apply_field, bracket_lambda, constant_field, total_degree, Coeff, Frame, TruncatedSeries, VarKind, VectorField};
use crate::error::{Error, Result};
use crate::report::VerificationReport;

/// Multiplication on the frame fields x_α by structure constants C_{αβ}^γ,
/// a constant unit and an Euler field.
#[derive(Clone, Debug, PartialEq)]
pub struct FormalSaito<C: Coeff> {
    pub frame: Frame,
    pub order: usize,
    /// `table[α][β][γ]` = C_{αβ}^γ
    pub table: Vec<Vec<Vec<TruncatedSeries<C>>>>,
    pub unit: Vec<C::Scalar>,
    pub euler: VectorField<C>,
}

impl<C: Coeff> FormalSaito<C> {
    pub fn new(
        frame: Frame,
        order: usize,
        table: Vec<Vec<Vec<TruncatedSeries<C>>>>,
        unit: Vec<C::Scalar>,
        euler: VectorField<C>,
    ) -> Result<Self> {
        let n = frame.len();
        let shape_ok = table.len() == n
            && table.iter().all(|r| r.len() == n && r.iter().all(|v| v.len() == n))
            && unit.len() == n
            && euler.len() == n;
        if !shape_ok {
            return Err(Error::Dimension(format!("structure data must match the frame of size {n}")));
        }
        let all = table.iter().flatten().flatten().chain(&euler);
        if all.clone().any(|s| s.nvars() != n) {
            return Err(Error::Dimension("series have the wrong number of variables".into()));
        }
        let table = table
            .into_iter()
            .map(|r| r.into_iter().map(|v| v.into_iter().map(|s| s.with_order(order)).collect()).collect())
            .collect();
        let euler = euler.into_iter().map(|s| s.with_order(order)).collect();
        Ok(Self { frame, order, table, unit, euler })
    }

    pub fn dim(&self) -> usize {
        self.frame.len()
    }

    pub fn zero_series(&self) -> TruncatedSeries<C> {
        TruncatedSeries::zero(self.dim(), self.order)
    }

    pub fn frame_field(&self, a: usize) -> VectorField<C> {
        let mut v = vec![C::Scalar::zero(); self.dim()];
        v[a] = C::Scalar::one();
        constant_field(self.dim(), self.order, &v)
    }

    /// u∘v = Σ u^α v^β C_{αβ}
    pub fn product(&self, u: &[TruncatedSeries<C>], v: &[TruncatedSeries<C>]) -> VectorField<C> {
        let n = self.dim();
        let mut out = vec![self.zero_series(); n];
        for a in 0..n {
            if u[a].is_zero() {
                continue;
            }
            for b in 0..n {
                if v[b].is_zero() {
                    continue;
                }
                let uv = u[a].mul(&v[b]);
                for g in 0..n {
                    if !self.table[a][b][g].is_zero() {
                        out[g] = out[g].add(&uv.mul(&self.table[a][b][g]));
                    }
                }
            }
        }
        out
    }

    /// x_α ∘ v
    fn frame_product(&self, a: usize, v: &[TruncatedSeries<C>]) -> VectorField<C> {
        let n = self.dim();
        let mut out = vec![self.zero_series(); n];
        for (b, vb) in v.iter().enumerate() {
            if vb.is_zero() {
                continue;
            }
            for g in 0..n {
                if !self.table[a][b][g].is_zero() {
                    out[g] = out[g].add(&vb.mul(&self.table[a][b][g]));
                }
            }
        }
        out
    }

    pub(crate) fn locus(&self, what: &str, g: usize, s: &TruncatedSeries<C>, other: &TruncatedSeries<C>, up_to: usize) -> Option<String> {
        s.first_difference(other, up_to)
            .map(|e| format!("{what}, component {}, coefficient of {}", self.frame.field_name(g), self.frame.monomial_name(&e)))
    }

    /// First component/monomial where two vector fields differ.
    pub(crate) fn compare_fields(&self, what: &str, u: &[TruncatedSeries<C>], v: &[TruncatedSeries<C>], up_to: usize) -> std::result::Result<(), String> {
        for g in 0..u.len() {
            if let Some(msg) = self.locus(what, g, &u[g], &v[g], up_to) {
                return Err(msg);
            }
        }
        Ok(())
    }
}

/// First failure over α in index order, computed in parallel.
fn first_failure(n: usize, f: impl Fn(usize) -> std::result::Result<(), String> + Sync + Send) -> std::result::Result<(), String> {
    let results: Vec<std::result::Result<(), String>> = (0..n).into_par_iter().map(f).collect();
    results.into_iter().find(|r| r.is_err()).unwrap_or(Ok(()))
}

/// Checks commutativity, associativity, the unit, ∇_x(y∘z) = ∇_y(x∘z),
/// ∇∇E = 0 and [E, x∘y] − x∘[E, y] − [E, x]∘y = x∘y (with E replaced by
/// E + λ∂_λ when the coefficients depend on λ). Axioms with one derivative
/// are certified to order T − 1.
pub fn check_formal_saito<C: Coeff>(s: &FormalSaito<C>) -> VerificationReport {
    let mut report = VerificationReport::new("formal Saito structure");
    saito_records(s, &mut report, "E1");
    report
}

pub(crate) fn saito_records<C: Coeff>(s: &FormalSaito<C>, report: &mut VerificationReport, euler_name: &str) {
    let n = s.dim();
    let t = s.order;
    let t1 = t.saturating_sub(1);

    report.check_at("commutativity", t, first_failure(n, |a| {
        for b in 0..n {
            s.compare_fields(&format!("C_({a},{b}) vs C_({b},{a})"), &s.table[a][b], &s.table[b][a], t)?;
        }
        Ok(())
    }));

    report.check_at("associativity", t, first_failure(n, |a| {
        for b in 0..n {
            let ab = &s.table[a][b];
            for c in 0..n {
                let left = s.frame_product(c, ab);
                let right = s.frame_product(a, &s.table[b][c]);
                s.compare_fields(&format!("(x{a}∘x{b})∘x{c}"), &left, &right, t)?;
            }
        }
        Ok(())
    }));

    let unit: VectorField<C> = constant_field(n, t, &s.unit);
    report.check_at("unit", t, first_failure(n, |a| {
        let eu = s.product(&unit, &s.frame_field(a));
        s.compare_fields(&format!("e∘x{a}"), &eu, &s.frame_field(a), t)
    }));

    report.check_at("fmfs1", t1, first_failure(n, |a| {
        for b in 0..n {
            for c in 0..n {
                for g in 0..n {
                    let l = s.table[b][c][g].derive(s.frame.kind(a), a);
                    let r = s.table[a][c][g].derive(s.frame.kind(b), b);
                    if let Some(m) = s.locus(&format!("∇_{a}(x{b}∘x{c}) vs ∇_{b}(x{a}∘x{c})"), g, &l, &r, t1) {
                        return Err(m);
                    }
                }
            }
        }
        Ok(())
    }));

    report.check_at("euler-flat", t, euler_flat(s));

    let e = &s.euler;
    let brackets: Vec<VectorField<C>> = (0..n).map(|a| bracket_lambda(&s.frame, e, &s.frame_field(a))).collect();
    report.check_at(euler_name, t1, first_failure(n, |a| {
        for b in 0..n {
            let xy = &s.table[a][b];
            let lhs: VectorField<C> = {
                let exy = bracket_lambda(&s.frame, e, xy);
                let x_ey = s.frame_product(a, &brackets[b]);
                let ex_y = s.frame_product(b, &brackets[a]);
                exy.iter().zip(&x_ey).zip(&ex_y).map(|((p, q), r)| p.sub(q).sub(r)).collect()
            };
            s.compare_fields(&format!("[E,x{a}∘x{b}] − x{a}∘[E,x{b}] − [E,x{a}]∘x{b} vs x{a}∘x{b}"), &lhs, xy, t1)?;
        }
        Ok(())
    }));
}

/// E's components are polynomials of degree ≤ 1 in the t's and free of q.
fn euler_flat<C: Coeff>(s: &FormalSaito<C>) -> std::result::Result<(), String> {
    for (g, comp) in s.euler.iter().enumerate() {
        for (e, _) in comp.terms() {
            let q_free = e.iter().enumerate().all(|(i, &k)| k == 0 || s.frame.kind(i) == VarKind::T);
            if total_degree(e) > 1 || !q_free {
                return Err(format!("E component {} has the term {}", s.frame.field_name(g), s.frame.monomial_name(e)));
            }
        }
    }
    Ok(())
}

/// E acting on functions.
pub fn euler_apply<C: Coeff>(s: &FormalSaito<C>, f: &TruncatedSeries<C>) -> TruncatedSeries<C> {
    apply_field(&s.frame, &s.euler, f)
}

/// Constant structure constants of a finite algebra in a flat frame.
pub fn constant_structure<S: crate::scalar::Scalar>(
    a: &crate::algebra::FiniteAlgebra<S>,
    order: usize,
) -> Vec<Vec<Vec<TruncatedSeries<S>>>> {
    let n = a.dim();
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| a.structure(i, j).iter().map(|c| TruncatedSeries::constant(n, order, c.clone())).collect())
                .collect()
        })
        .collect()
}

/// E = Σ w_α t_α ∂_α for t-variables (w_α = 1 − |e_α|).
pub fn linear_euler<C: Coeff>(n: usize, order: usize, weights: &[C::Scalar]) -> VectorField<C> {
    (0..n)
        .map(|a| TruncatedSeries::variable(n, order, a).scale(&C::from_scalar(weights[a].clone())))
        .collect()
}
