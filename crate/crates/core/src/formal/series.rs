use std::collections::BTreeMap;
use std::fmt;

use crate::exactalg::LaurentPoly;
use crate::scalar::{Ring, Scalar};

/// Coefficients of truncated series: scalars, or Laurent polynomials in λ.
pub trait Coeff: Ring + fmt::Display + Send + Sync {
    type Scalar: Scalar;
    fn from_scalar(c: Self::Scalar) -> Self;
    /// λ ∂/∂λ; zero on scalars.
    fn lambda_euler(&self) -> Self;
}

impl<S: Scalar> Coeff for S {
    type Scalar = S;
    fn from_scalar(c: S) -> S {
        c
    }
    fn lambda_euler(&self) -> S {
        S::zero()
    }
}

impl<S: Scalar> Coeff for LaurentPoly<S> {
    type Scalar = S;
    fn from_scalar(c: S) -> Self {
        LaurentPoly::constant(c)
    }
    fn lambda_euler(&self) -> Self {
        self.lambda_derivative()
    }
}

/// Whether a frame coordinate is an ordinary variable t (frame field ∂_t)
/// or a logarithmic one q (frame field q∂_q).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum VarKind {
    T,
    Q,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Frame {
    names: Vec<String>,
    kinds: Vec<VarKind>,
}

impl Frame {
    pub fn new(names: Vec<String>, kinds: Vec<VarKind>) -> Self {
        assert_eq!(names.len(), kinds.len());
        Self { names, kinds }
    }

    /// t_0, …, t_{n−1}
    pub fn flat(n: usize) -> Self {
        Self::new((0..n).map(|i| format!("t{i}")).collect(), vec![VarKind::T; n])
    }

    pub fn len(&self) -> usize {
        self.kinds.len()
    }

    pub fn is_empty(&self) -> bool {
        self.kinds.is_empty()
    }

    pub fn kind(&self, i: usize) -> VarKind {
        self.kinds[i]
    }

    pub fn kinds(&self) -> &[VarKind] {
        &self.kinds
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Name of the frame field: ∂_t or q∂_q.
    pub fn field_name(&self, i: usize) -> String {
        match self.kinds[i] {
            VarKind::T => format!("∂{}", self.names[i]),
            VarKind::Q => format!("{0}∂{0}", self.names[i]),
        }
    }

    pub fn monomial_name(&self, exps: &[u32]) -> String {
        let parts: Vec<String> = exps
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(i, &e)| if e == 1 { self.names[i].clone() } else { format!("{}^{e}", self.names[i]) })
            .collect();
        if parts.is_empty() { "1".into() } else { parts.join("·") }
    }
}

/// Power series in the frame variables, truncated at total degree `order`.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncatedSeries<C> {
    nvars: usize,
    order: usize,
    terms: BTreeMap<Vec<u32>, C>,
}

pub fn total_degree(exps: &[u32]) -> usize {
    exps.iter().map(|&e| e as usize).sum()
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn zero(nvars: usize, order: usize) -> Self {
        Self { nvars, order, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, order: usize, c: C) -> Self {
        Self::monomial(nvars, order, vec![0; nvars], c)
    }

    /// c·∏ v_i^{e_i}; dropped if its degree exceeds the order.
    pub fn monomial(nvars: usize, order: usize, exps: Vec<u32>, c: C) -> Self {
        let mut s = Self::zero(nvars, order);
        s.add_term(exps, c);
        s
    }

    pub fn variable(nvars: usize, order: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self::monomial(nvars, order, e, C::one())
    }

    pub fn add_term(&mut self, exps: Vec<u32>, c: C) {
        assert_eq!(exps.len(), self.nvars);
        if c.is_zero() || total_degree(&exps) > self.order {
            return;
        }
        match self.terms.get_mut(&exps) {
            Some(v) => {
                *v = v.clone() + c;
                if v.is_zero() {
                    self.terms.remove(&exps);
                }
            }
            None => {
                self.terms.insert(exps, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &C)> {
        self.terms.iter()
    }

    pub fn coeff(&self, exps: &[u32]) -> C {
        self.terms.get(exps).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_term(&self) -> C {
        self.coeff(&vec![0; self.nvars])
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.order = self.order.min(other.order);
        out.terms.retain(|e, _| total_degree(e) <= out.order);
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        self.map(|c| -c.clone())
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order.min(other.order);
        let mut out = Self::zero(self.nvars, order);
        for (a, x) in &self.terms {
            let da = total_degree(a);
            for (b, y) in &other.terms {
                if da + total_degree(b) > order {
                    continue;
                }
                let e = a.iter().zip(b).map(|(i, j)| i + j).collect();
                out.add_term(e, x.clone() * y.clone());
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, x) in &self.terms {
            out.add_term(e.clone(), c.clone() * x.clone());
        }
        out
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> TruncatedSeries<D> {
        let mut out = TruncatedSeries::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), f(c));
        }
        out
    }

    /// The frame derivation: ∂/∂v_i for t-variables, v_i ∂/∂v_i for q's.
    /// A t-derivative is exact only through order − 1; the result keeps
    /// the input's order and callers account for the loss.
    pub fn derive(&self, kind: VarKind, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.order);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let k = C::from_scalar(C::Scalar::from_int(i64::from(e[i])));
            let mut e2 = e.clone();
            if kind == VarKind::T {
                e2[i] -= 1;
            }
            out.add_term(e2, k * c.clone());
        }
        out
    }

    pub fn lambda_euler(&self) -> Self {
        self.map(Coeff::lambda_euler)
    }

    /// The same terms under a different truncation order.
    pub fn with_order(&self, order: usize) -> Self {
        let mut out = Self::zero(self.nvars, order);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    /// Lowest-degree monomial (at total degree ≤ `up_to`) where the two
    /// series differ.
    pub fn first_difference(&self, other: &Self, up_to: usize) -> Option<Vec<u32>> {
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().chain(other.terms.keys()).collect();
        keys.sort_by_key(|e| (total_degree(e), (*e).clone()));
        keys.dedup();
        keys.into_iter()
            .filter(|e| total_degree(e) <= up_to)
            .find(|e| self.coeff(e) != other.coeff(e))
            .cloned()
    }

    pub fn format(&self, frame: &Frame) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut keys: Vec<&Vec<u32>> = self.terms.keys().collect();
        keys.sort_by_key(|e| (total_degree(e), (*e).clone()));
        keys.iter()
            .map(|e| {
                let c = self.terms[*e].to_string();
                let simple = !c.contains(' ') && !c.contains('*');
                match (total_degree(e), c.as_str()) {
                    (0, _) if simple => c,
                    (0, _) => format!("({c})"),
                    (_, "1") => frame.monomial_name(e),
                    _ if simple => format!("{c}·{}", frame.monomial_name(e)),
                    _ => format!("({c})·{}", frame.monomial_name(e)),
                }
            })
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

/// A vector field: components along the frame fields.
pub type VectorField<C> = Vec<TruncatedSeries<C>>;

/// u(f) = Σ u^α D_α f
pub fn apply_field<C: Coeff>(frame: &Frame, u: &[TruncatedSeries<C>], f: &TruncatedSeries<C>) -> TruncatedSeries<C> {
    let mut out = TruncatedSeries::zero(f.nvars(), f.order());
    for (a, ua) in u.iter().enumerate() {
        if ua.is_zero() {
            continue;
        }
        out = out.add(&ua.mul(&f.derive(frame.kind(a), a)));
    }
    out
}

/// [u, v] = ∇_u v − ∇_v u for the flat connection of the frame.
pub fn bracket<C: Coeff>(frame: &Frame, u: &[TruncatedSeries<C>], v: &[TruncatedSeries<C>]) -> VectorField<C> {
    (0..u.len())
        .map(|g| apply_field(frame, u, &v[g]).sub(&apply_field(frame, v, &u[g])))
        .collect()
}

/// [E + λ∂_λ, v]
pub fn bracket_lambda<C: Coeff>(frame: &Frame, e: &[TruncatedSeries<C>], v: &[TruncatedSeries<C>]) -> VectorField<C> {
    bracket(frame, e, v).iter().zip(v).map(|(b, vg)| b.add(&vg.lambda_euler())).collect()
}

pub fn constant_field<C: Coeff>(nvars: usize, order: usize, v: &[C::Scalar]) -> VectorField<C> {
    v.iter()
        .map(|c| TruncatedSeries::constant(nvars, order, C::from_scalar(c.clone())))
        .collect()
}
