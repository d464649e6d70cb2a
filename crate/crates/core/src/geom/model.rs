use num_traits::Zero;

use crate::algebra::{dot, monic_inverse, ElementLaurent, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactalg::{unit_vector, LaurentMatrix, LaurentPoly, Matrix};
use crate::scalar::Scalar;

/// Even cohomology H_K of X with a homogeneous basis φ_0 = 1, φ_1..φ_p of
/// degree 1 (the nef basis), then the rest. Degrees are complex degrees.
#[derive(Clone, Debug)]
pub struct CohomologyModel<S: Scalar> {
    ring: FiniteAlgebra<S>,
    integral: Vec<S>,
    c1: Vec<S>,
    dim_x: usize,
    p: usize,
    pairing: Matrix<S>,
    dual: Vec<Vec<S>>,
}

impl<S: Scalar> CohomologyModel<S> {
    /// `ring` must be graded; `integral` holds ∫φ_α and may be nonzero only
    /// in degree dim X; `c1` are the coordinates of c_1(X).
    pub fn new(ring: FiniteAlgebra<S>, integral: Vec<S>, c1: Vec<S>, dim_x: usize) -> Result<Self> {
        let n = ring.dim();
        let invalid = |m: String| Err(Error::InvalidModel(m));
        let Some(deg) = ring.grading().map(<[i64]>::to_vec) else {
            return invalid("cohomology ring needs basis degrees".into());
        };
        if integral.len() != n || c1.len() != n {
            return invalid(format!("expected {n} coordinates for ∫ and c_1(X)"));
        }
        if ring.unit() != unit_vector::<S>(n, 0).as_slice() {
            return invalid("φ_0 must be the unit".into());
        }
        if deg.iter().any(|&d| d < 0 || d > dim_x as i64) {
            return invalid(format!("basis degrees must lie in 0..={dim_x}"));
        }
        let p = deg.iter().skip(1).take_while(|&&d| d == 1).count();
        if let Some(i) = (p + 1..n).find(|&i| deg[i] <= 1) {
            return invalid(format!(
                "basis element {} of degree {} must come right after φ_0 (degree-1 classes are φ_1..φ_p)",
                ring.names()[i],
                deg[i]
            ));
        }
        if let Some(i) = (0..n).find(|&i| deg[i] != dim_x as i64 && !integral[i].is_zero()) {
            return invalid(format!("∫ is nonzero on {} of degree {} ≠ dim X = {dim_x}", ring.names()[i], deg[i]));
        }
        if let Some(i) = (0..n).find(|&i| deg[i] != 1 && !c1[i].is_zero()) {
            return invalid(format!("c_1(X) has a component on {} of degree {}", ring.names()[i], deg[i]));
        }
        let pairing = ring.pairing_from_functional(&integral);
        let Some(inv) = pairing.inverse() else {
            return invalid("intersection pairing ∫ x∪y is degenerate".into());
        };
        // φ^α = Σ_β (P^{-1})_{αβ} φ_β
        let dual = (0..n).map(|a| inv.row(a).to_vec()).collect();
        Ok(CohomologyModel { ring, integral, c1, dim_x, p, pairing, dual })
    }

    /// P^n with basis 1, h, …, h^n.
    pub fn projective_space(n: usize) -> Self {
        let ring = FiniteAlgebra::truncated_polynomial(n + 1);
        let mut c1 = vec![S::zero(); n + 1];
        if n > 0 {
            c1[1] = S::from_int(n as i64 + 1);
        }
        Self::new(ring, unit_vector(n + 1, n), c1, n).expect("valid projective space")
    }

    pub fn ring(&self) -> &FiniteAlgebra<S> {
        &self.ring
    }

    pub fn dim(&self) -> usize {
        self.ring.dim()
    }

    pub fn dim_x(&self) -> usize {
        self.dim_x
    }

    /// Number of degree-1 basis classes.
    pub fn p(&self) -> usize {
        self.p
    }

    pub fn degrees(&self) -> &[i64] {
        self.ring.grading().expect("graded")
    }

    pub fn c1(&self) -> &[S] {
        &self.c1
    }

    pub fn integral_functional(&self) -> &[S] {
        &self.integral
    }

    pub fn integrate(&self, x: &[S]) -> S {
        dot(&self.integral, x)
    }

    pub fn cup(&self, x: &[S], y: &[S]) -> Vec<S> {
        self.ring.mul(x, y)
    }

    pub fn pairing(&self) -> &Matrix<S> {
        &self.pairing
    }

    /// φ^α with ∫ φ^α ∪ φ_β = δ_αβ.
    pub fn dual_basis(&self) -> &[Vec<S>] {
        &self.dual
    }
}

/// Chern classes c_1(V)..c_r(V) of a rank-r bundle.
#[derive(Clone, Debug)]
pub struct BundleData<S> {
    pub rank: usize,
    pub chern: Vec<Vec<S>>,
}

impl<S: Scalar> BundleData<S> {
    pub fn new(c: &CohomologyModel<S>, chern: Vec<Vec<S>>) -> Result<Self> {
        for (i, ci) in chern.iter().enumerate() {
            if ci.len() != c.dim() {
                return Err(Error::InvalidModel(format!("c_{} has {} coordinates, expected {}", i + 1, ci.len(), c.dim())));
            }
            if let Some(a) = (0..c.dim()).find(|&a| !ci[a].is_zero() && c.degrees()[a] != i as i64 + 1) {
                return Err(Error::InvalidModel(format!(
                    "c_{} has a component on {} of degree {}",
                    i + 1,
                    c.ring().names()[a],
                    c.degrees()[a]
                )));
            }
            if !c.ring().is_nilpotent(ci) {
                return Err(Error::InvalidModel(format!("c_{} is not nilpotent", i + 1)));
            }
        }
        Ok(BundleData { rank: chern.len(), chern })
    }

    pub fn trivial(c: &CohomologyModel<S>, rank: usize) -> Self {
        BundleData { rank, chern: vec![c.ring().zero_element(); rank] }
    }

    pub fn line_bundle(c: &CohomologyModel<S>, c1: Vec<S>) -> Result<Self> {
        Self::new(c, vec![c1])
    }

    pub fn c1(&self, n: usize) -> Vec<S> {
        self.chern.first().cloned().unwrap_or_else(|| vec![S::zero(); n])
    }

    pub fn top(&self, n: usize) -> Vec<S> {
        self.chern.last().cloned().unwrap_or_else(|| unit_vector(n, 0))
    }
}

/// 1/e_{S¹}(V) for e_{S¹}(V) = λ^r + c_1 λ^{r−1} + ⋯ + c_r; the geometric
/// series terminates since the c_i are nilpotent.
pub fn equivariant_euler_inverse<S: Scalar>(c: &CohomologyModel<S>, b: &BundleData<S>) -> ElementLaurent<S> {
    monic_inverse(c.ring(), &b.chern).expect("Chern classes are nilpotent")
}

/// e_{S¹}(V) itself.
pub fn equivariant_euler<S: Scalar>(c: &CohomologyModel<S>, b: &BundleData<S>) -> ElementLaurent<S> {
    let n = c.dim();
    let mut e = ElementLaurent::monomial(unit_vector(n, 0), b.rank as i64);
    for (i, ci) in b.chern.iter().enumerate() {
        e.add_term((b.rank - 1 - i) as i64, ci);
    }
    e
}

/// g^λ(φ, φ′) = ∫ φ∪φ′∪1/e_{S¹}(V), checked against the shape
/// η_αβ λ^{|φ_α|+|φ_β|−dim X−r} and for unimodularity.
pub fn localized_metric_geom<S: Scalar>(c: &CohomologyModel<S>, b: &BundleData<S>) -> Result<crate::mfa::LocalizedMetric<S>> {
    let n = c.dim();
    let inv = equivariant_euler_inverse(c, b);
    let deg = c.degrees();
    let shift = c.dim_x() as i64 + b.rank as i64;
    let mut m = LaurentMatrix::from_fn(n, n, |_, _| LaurentPoly::zero());
    for a in 0..n {
        for bb in 0..n {
            let prod = ElementLaurent::monomial(c.cup(&c.ring().basis_element(a), &c.ring().basis_element(bb)), 0);
            let entry = prod.mul(c.ring(), &inv).pair(|x| c.integrate(x));
            let expected = deg[a] + deg[bb] - shift;
            if !entry.is_zero() && !(entry.is_monomial() && entry.min_exponent() == Some(expected)) {
                return Err(Error::InvalidModel(format!(
                    "g(φ_{a}, φ_{bb}) = {entry} is not a multiple of λ^{expected}"
                )));
            }
            m[(a, bb)] = entry;
        }
    }
    crate::mfa::LocalizedMetric::new(m)
}
