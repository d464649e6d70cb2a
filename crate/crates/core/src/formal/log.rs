use std::collections::BTreeMap;
use std::fmt::Write as _;


use super::saito::FormalSaito;
use super::series::{total_degree, Frame, TruncatedSeries, VarKind};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

/// Σ_L c_L(t, q) · Π log(q_i)^{L_i}: the functions reached by integrating
/// q-independent terms along q∂_q. Log exponents do not count towards the
/// truncation degree.
#[derive(Clone, Debug, PartialEq)]
pub struct LogSeries<S: Scalar> {
    nvars: usize,
    order: usize,
    terms: BTreeMap<Vec<u32>, TruncatedSeries<S>>,
}

impl<S: Scalar> LogSeries<S> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        LogSeries { nvars, order, terms: BTreeMap::new() }
    }

    pub fn from_series(s: TruncatedSeries<S>) -> Self {
        let mut out = Self::zero(s.nvars(), s.order());
        out.add_part(vec![0; s.nvars()], s);
        out
    }

    pub fn from_log_monomial(logs: Vec<u32>, s: TruncatedSeries<S>) -> Self {
        let mut out = Self::zero(s.nvars(), s.order());
        out.add_part(logs, s);
        out
    }

    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zero(self.nvars, order);
        for (l, s) in &self.terms {
            out.add_part(l.clone(), s.with_order(order));
        }
        out
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (l, s) in &self.terms {
            out.add_part(l.clone(), s.scale(c));
        }
        out
    }

    fn add_part(&mut self, logs: Vec<u32>, s: TruncatedSeries<S>) {
        if s.is_zero() {
            return;
        }
        let sum = match self.terms.remove(&logs) {
            Some(old) => old.add(&s),
            None => s,
        };
        if !sum.is_zero() {
            self.terms.insert(logs, sum);
        }
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn parts(&self) -> impl Iterator<Item = (&Vec<u32>, &TruncatedSeries<S>)> {
        self.terms.iter()
    }

    /// Coefficient of the given power of logs.
    pub fn part(&self, logs: &[u32]) -> TruncatedSeries<S> {
        self.terms.get(logs).cloned().unwrap_or_else(|| TruncatedSeries::zero(self.nvars, self.order))
    }

    pub fn has_logs(&self) -> bool {
        self.terms.keys().any(|l| l.iter().any(|&e| e > 0))
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, s) in &other.terms {
            out.add_part(l.clone(), s.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (l, s) in &other.terms {
            out.add_part(l.clone(), s.neg());
        }
        out
    }

    /// The frame derivation D_i (∂_t or q∂_q, which also sends log q ↦ 1).
    pub fn derive(&self, frame: &Frame, i: usize) -> Self {
        let kind = frame.kind(i);
        let mut out = Self::zero(self.nvars, self.order);
        for (l, s) in &self.terms {
            out.add_part(l.clone(), s.derive(kind, i));
            if kind == VarKind::Q && l[i] > 0 {
                let mut lower = l.clone();
                lower[i] -= 1;
                out.add_part(lower, s.scale(&S::from_int(l[i] as i64)));
            }
        }
        out
    }

    /// An antiderivative for D_i, with no constant of integration.
    pub fn integrate(&self, frame: &Frame, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (l, s) in &self.terms {
            for (e, c) in s.terms() {
                match frame.kind(i) {
                    VarKind::T => {
                        let mut e2 = e.clone();
                        e2[i] += 1;
                        let c2 = c.clone() * S::from_int(e2[i] as i64).inv();
                        out.add_part(l.clone(), TruncatedSeries::monomial(self.nvars, self.order, e2, c2));
                    }
                    VarKind::Q if e[i] == 0 => {
                        let mut l2 = l.clone();
                        l2[i] += 1;
                        let c2 = c.clone() * S::from_int(l2[i] as i64).inv();
                        out.add_part(l2, TruncatedSeries::monomial(self.nvars, self.order, e.clone(), c2));
                    }
                    VarKind::Q => {
                        // ∫ q^d L^a = q^d Σ_j (−1)^j a!/(a−j)! L^{a−j} / d^{j+1}
                        let d = S::from_int(e[i] as i64);
                        let a = l[i];
                        let mut falling = S::one();
                        let mut dpow = d.clone();
                        for j in 0..=a {
                            let mut l2 = l.clone();
                            l2[i] = a - j;
                            let sign = if j % 2 == 0 { S::one() } else { -S::one() };
                            let c2 = sign * falling.clone() * c.clone() * dpow.inv();
                            out.add_part(l2, TruncatedSeries::monomial(self.nvars, self.order, e.clone(), c2));
                            falling = falling * S::from_int((a - j) as i64);
                            dpow = dpow * d.clone();
                        }
                    }
                }
            }
        }
        out
    }

    /// First (logs, monomial) where the two differ in total degree ≤ `up_to`.
    pub fn first_difference(&self, other: &Self, up_to: usize) -> Option<(Vec<u32>, Vec<u32>)> {
        let diff = self.sub(other);
        diff.terms.iter().find_map(|(l, s)| {
            s.terms()
                .find(|(e, c)| total_degree(e) <= up_to && !c.is_zero())
                .map(|(e, _)| (l.clone(), e.clone()))
        })
    }

    pub fn format(&self, frame: &Frame) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (l, s) in &self.terms {
            if !out.is_empty() {
                out.push_str(" + ");
            }
            let logs: Vec<String> = l
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("log {}", frame.names()[i]) } else { format!("(log {})^{e}", frame.names()[i]) })
                .collect();
            if logs.is_empty() {
                let _ = write!(out, "{}", s.format(frame));
            } else {
                let _ = write!(out, "({})·{}", s.format(frame), logs.join("·"));
            }
        }
        out
    }
}

/// F with D_i F = ω_i for a closed family ω, by successive integration.
/// Integrating at the data's own order keeps F exact through that degree:
/// overflow from ∂_t-integration is dropped, q∂_q-integration preserves degree.
fn integrate_family<S: Scalar>(frame: &Frame, omega: &[LogSeries<S>], nvars: usize, order: usize) -> LogSeries<S> {
    let mut f = LogSeries::zero(nvars, order);
    for (i, w) in omega.iter().enumerate() {
        let r = w.sub(&f.derive(frame, i));
        f = f.add(&r.integrate(frame, i));
    }
    f
}

/// A vector field G with D_α D_β G^γ = C_{αβ}^γ, via two successive
/// integrations (each needing the closedness given by the flatness axiom).
pub fn potential_vector_field<S: Scalar>(s: &FormalSaito<S>) -> Result<Vec<LogSeries<S>>> {
    let n = s.dim();
    let t = s.order;
    let frame = &s.frame;
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                for g in 0..n {
                    let lhs = s.table[b][c][g].derive(frame.kind(a), a);
                    let rhs = s.table[a][c][g].derive(frame.kind(b), b);
                    if let Some(e) = lhs.first_difference(&rhs, t.saturating_sub(1)) {
                        return Err(Error::NotIntegrable(format!(
                            "{}C_({b},{c})^{g} ≠ {}C_({a},{c})^{g} at {}",
                            frame.field_name(a),
                            frame.field_name(b),
                            frame.monomial_name(&e)
                        )));
                    }
                }
            }
        }
    }
    let mut out = Vec::with_capacity(n);
    for g in 0..n {
        let v: Vec<LogSeries<S>> = (0..n)
            .map(|b| {
                let omega: Vec<_> = (0..n).map(|a| LogSeries::from_series(s.table[a][b][g].clone())).collect();
                integrate_family(frame, &omega, n, t)
            })
            .collect();
        out.push(integrate_family(frame, &v, n, t));
    }
    Ok(out)
}

/// D_α D_β G^γ = C_{αβ}^γ through total degree T − 2.
pub fn verify_potential<S: Scalar>(s: &FormalSaito<S>, potential: &[LogSeries<S>]) -> std::result::Result<(), String> {
    let n = s.dim();
    if potential.len() != n {
        return Err(format!("potential has {} components, expected {n}", potential.len()));
    }
    let up_to = s.order.saturating_sub(2);
    for (g, pg) in potential.iter().enumerate() {
        for a in 0..n {
            let da = pg.derive(&s.frame, a);
            for b in 0..n {
                let dab = da.derive(&s.frame, b);
                let c = LogSeries::from_series(s.table[a][b][g].clone());
                if let Some((l, e)) = dab.first_difference(&c, up_to) {
                    return Err(format!(
                        "{}{}G^{g} ≠ C_({a},{b})^{g} at {} (log powers {:?})",
                        s.frame.field_name(a),
                        s.frame.field_name(b),
                        s.frame.monomial_name(&e),
                        l
                    ));
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FiniteAlgebra;
    use crate::formal::{constant_structure, linear_euler};
    use num_rational::BigRational;

    type Q = BigRational;

    fn q(n: i64) -> Q {
        Q::from_int(n)
    }

    fn mixed_frame() -> Frame {
        Frame::new(vec!["t0".into(), "q1".into()], vec![VarKind::T, VarKind::Q])
    }

    #[test]
    fn integration_inverts_derivation() {
        let frame = mixed_frame();
        let mut s = TruncatedSeries::<Q>::zero(2, 5);
        s.add_term(vec![1, 2], q(3));
        s.add_term(vec![0, 0], q(2));
        s.add_term(vec![2, 1], q(-1));
        let mut f = LogSeries::from_series(s);
        f = f.add(&f.integrate(&frame, 1)); // now carries a log term
        assert!(f.has_logs());
        for i in 0..2 {
            let back = f.integrate(&frame, i).derive(&frame, i);
            assert_eq!(back.first_difference(&f, 4), None);
        }
    }

    #[test]
    fn constant_algebra_potential() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(3);
        let w = [q(1), q(0), q(-1)];
        let s = FormalSaito::new(Frame::flat(3), 4, constant_structure(&a, 4), a.unit().to_vec(), linear_euler(3, 4, &w)).unwrap();
        let g = potential_vector_field(&s).unwrap();
        verify_potential(&s, &g).unwrap();
        assert!(g.iter().all(|p| !p.has_logs()));
    }

    #[test]
    fn non_flat_product_rejected() {
        let a = FiniteAlgebra::<Q>::truncated_polynomial(3);
        let mut table = constant_structure(&a, 4);
        table[0][1][2] = table[0][1][2].add(&TruncatedSeries::variable(3, 4, 2));
        let s = FormalSaito::new(Frame::flat(3), 4, table, a.unit().to_vec(), linear_euler(3, 4, &[q(1), q(0), q(-1)])).unwrap();
        assert!(matches!(potential_vector_field(&s), Err(Error::NotIntegrable(_))));
    }
}
