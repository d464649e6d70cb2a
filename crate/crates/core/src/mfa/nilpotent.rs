use super::metric::LocalizedMetric;
use crate::algebra::{monic_inverse, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactalg::{Matrix, Subspace};
use crate::filtration::NondegenerateFiltration;
use crate::scalar::Scalar;

/// A Frobenius algebra (A, g) with nilpotents n_1..n_r, defining the monic
/// n = λ^r + n_1 λ^{r−1} + ⋯ + n_r ∈ A[λ].
#[derive(Clone, Debug)]
pub struct NilpotentData<S> {
    algebra: FiniteAlgebra<S>,
    metric: Matrix<S>,
    nilpotents: Vec<Vec<S>>,
    companion: Matrix<S>,
}

impl<S: Scalar> NilpotentData<S> {
    pub fn new(algebra: FiniteAlgebra<S>, metric: Matrix<S>, nilpotents: Vec<Vec<S>>) -> Result<Self> {
        let s = algebra.dim();
        if metric.rows() != s || metric.cols() != s {
            return Err(Error::Dimension(format!("metric must be {s}×{s}")));
        }
        if !metric.is_symmetric() || metric.det().is_zero() {
            return Err(Error::InvalidMetric("g must be symmetric and nondegenerate".into()));
        }
        if let Some((a, b, c)) = algebra.invariance_violation(&metric) {
            let n = algebra.names();
            return Err(Error::NotInvariant(format!("g({}·{}, {}) ≠ g({}, {}·{})", n[a], n[b], n[c], n[a], n[b], n[c])));
        }
        if nilpotents.is_empty() {
            return Err(Error::Dimension("at least one nilpotent is required".into()));
        }
        for (i, n) in nilpotents.iter().enumerate() {
            if n.len() != s {
                return Err(Error::Dimension(format!("n_{} has wrong length", i + 1)));
            }
            if !algebra.is_nilpotent(n) {
                return Err(Error::NotNilpotent(format!("n_{} = {}", i + 1, algebra.format_element(n))));
            }
        }
        let companion = companion_matrix(&algebra, &nilpotents);
        Ok(Self { algebra, metric, nilpotents, companion })
    }

    pub fn algebra(&self) -> &FiniteAlgebra<S> {
        &self.algebra
    }

    pub fn metric(&self) -> &Matrix<S> {
        &self.metric
    }

    pub fn nilpotents(&self) -> &[Vec<S>] {
        &self.nilpotents
    }

    pub fn r(&self) -> usize {
        self.nilpotents.len()
    }

    /// N on A^{⊕r}: first block column −L_{n_1}, …, −L_{n_r}, identity blocks
    /// on the superdiagonal.
    pub fn companion(&self) -> &Matrix<S> {
        &self.companion
    }

    /// Coefficients of n, lowest power first: [n_r, …, n_1, 1].
    pub fn monic_coefficients(&self) -> Vec<Vec<S>> {
        let mut c: Vec<Vec<S>> = self.nilpotents.iter().rev().cloned().collect();
        c.push(self.algebra.unit().to_vec());
        c
    }

    /// Component i (1-based) of a vector of A^{⊕r}.
    pub fn project(&self, i: usize, v: &[S]) -> Vec<S> {
        let s = self.algebra.dim();
        v[(i - 1) * s..i * s].to_vec()
    }

    fn g(&self, x: &[S], y: &[S]) -> S {
        self.metric.bilinear(x, y)
    }
}

fn companion_matrix<S: Scalar>(a: &FiniteAlgebra<S>, nilpotents: &[Vec<S>]) -> Matrix<S> {
    let s = a.dim();
    let r = nilpotents.len();
    let mut m = Matrix::zeros(r * s, r * s);
    for (i, n) in nilpotents.iter().enumerate() {
        let l = a.mult_matrix(n);
        for p in 0..s {
            for q in 0..s {
                m[(i * s + p, q)] = -l[(p, q)].clone();
            }
            if i + 1 < r {
                m[(i * s + p, (i + 1) * s + p)] = S::one();
            }
        }
    }
    m
}

/// g^λ(x, y) = g(x·y, n^{−1}) on the A-basis of A[λ]; the geometric series
/// for n^{−1} terminates because the n_i are nilpotent.
pub fn nilpotent_localized_metric<S: Scalar>(d: &NilpotentData<S>) -> Result<LocalizedMetric<S>> {
    let a = d.algebra();
    let inv = monic_inverse(a, d.nilpotents())?;
    let s = a.dim();
    let m = Matrix::from_fn(s, s, |i, j| inv.pair(|c| d.g(a.structure(i, j), c)));
    LocalizedMetric::new(m)
}

/// The filtration in closed form: I_k = 0 (k < 0), I_0 = A·n_r,
/// I_k = I_0 + p_r(Ker N^k) (k > 0), with g_0(x n_r, y n_r) = g(xy, n_r) and
/// g_k(x̄, ȳ) = g(x, p_1(N^{k−1} ȳ⃗)) for a lift ȳ⃗ ∈ Ker N^k with p_r(ȳ⃗) = y.
pub fn nilpotent_filtration_direct<S: Scalar>(d: &NilpotentData<S>) -> Result<NondegenerateFiltration<S>> {
    let a = d.algebra();
    let s = a.dim();
    let r = d.r();
    let nr = &d.nilpotents()[r - 1];
    let ln = a.mult_matrix(nr);
    let i0 = Subspace::span(s, (0..s).map(|j| ln.col(j)));
    let mut jumps = Vec::new();
    if !i0.is_zero() {
        let reps = i0.basis().to_vec();
        let pre: Vec<Vec<S>> = reps.iter().map(|u| ln.solve(u).expect("u lies in the image")).collect();
        let gram = Matrix::from_fn(reps.len(), reps.len(), |i, j| d.g(&a.mul(&pre[i], &pre[j]), nr));
        jumps.push((0, reps, gram));
    }
    let n = d.companion();
    let mut prev = i0;
    let mut npow_prev = Matrix::identity(r * s); // N^{k−1}
    for k in 1..=(r * s) as i64 {
        let npow = npow_prev.mul(n);
        let kernel = npow.kernel();
        let pr: Vec<Vec<S>> = kernel.iter().map(|v| d.project(r, v)).collect();
        let jk = Subspace::span(s, pr.iter().cloned());
        let reps = prev.extension_from(jk.basis());
        if !reps.is_empty() {
            let lift_solver = Matrix::from_cols(&pr, s);
            let images: Vec<Vec<S>> = reps
                .iter()
                .map(|y| {
                    let c = lift_solver.solve(y).expect("y lies in p_r(Ker N^k)");
                    let lift = crate::exactalg::combine(&kernel, &c, r * s);
                    d.project(1, &npow_prev.apply(&lift))
                })
                .collect();
            let gram = Matrix::from_fn(reps.len(), reps.len(), |i, j| d.g(&reps[i], &images[j]));
            prev = prev.sum(&Subspace::span(s, reps.iter().cloned()));
            jumps.push((k, reps, gram));
        }
        if prev.is_full() {
            break;
        }
        npow_prev = npow;
    }
    NondegenerateFiltration::new(s, jumps)
}
