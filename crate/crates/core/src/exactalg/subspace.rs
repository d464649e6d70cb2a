//! Subspaces of K^n in canonical (reduced echelon) form.

use num_traits::Zero;

use super::matrix::Matrix;
use crate::scalar::Scalar;

/// A subspace of K^n. The basis is kept in reduced row echelon form, so two
/// subspaces are equal iff their bases are equal.
#[derive(Clone, Debug, PartialEq)]
pub struct Subspace<S> {
    ambient: usize,
    basis: Vec<Vec<S>>,
}

impl<S: Scalar> Subspace<S> {
    pub fn zero(ambient: usize) -> Self {
        Self { ambient, basis: Vec::new() }
    }

    pub fn full(ambient: usize) -> Self {
        Self::span(ambient, (0..ambient).map(|i| unit_vector(ambient, i)))
    }

    pub fn span(ambient: usize, vectors: impl IntoIterator<Item = Vec<S>>) -> Self {
        let rows: Vec<Vec<S>> = vectors.into_iter().collect();
        if rows.is_empty() {
            return Self::zero(ambient);
        }
        assert!(rows.iter().all(|v| v.len() == ambient), "vector length mismatch");
        let ech = Matrix::from_rows(rows).rref();
        let basis = (0..ech.pivots.len()).map(|i| ech.reduced.row(i).to_vec()).collect();
        Self { ambient, basis }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.basis.len() == self.ambient
    }

    pub fn basis(&self) -> &[Vec<S>] {
        &self.basis
    }

    pub fn contains(&self, v: &[S]) -> bool {
        if v.iter().all(Zero::is_zero) {
            return true;
        }
        self.coordinates(v).is_some()
    }

    /// Coordinates of `v` in the echelon basis.
    pub fn coordinates(&self, v: &[S]) -> Option<Vec<S>> {
        if self.basis.is_empty() {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        Matrix::from_cols(&self.basis, self.ambient).solve(v)
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.basis.iter().all(|v| other.contains(v))
    }

    pub fn sum(&self, other: &Self) -> Self {
        Self::span(self.ambient, self.basis.iter().chain(&other.basis).cloned())
    }

    pub fn intersection(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.ambient);
        }
        // a·B1 = b·B2  ⇔  [B1ᵀ | -B2ᵀ](a, b) = 0
        let k1 = self.dim();
        let cols: Vec<Vec<S>> = self
            .basis
            .iter()
            .cloned()
            .chain(other.basis.iter().map(|v| v.iter().map(|x| -x.clone()).collect()))
            .collect();
        let m = Matrix::from_cols(&cols, self.ambient);
        let vectors = m.kernel().into_iter().map(|ab| combine(&self.basis[..], &ab[..k1], self.ambient));
        Self::span(self.ambient, vectors)
    }

    /// Basis vectors of `self` (taken in order) completing `lower` to `self`.
    /// `lower` must be contained in `self`.
    pub fn complement_of(&self, lower: &Self) -> Vec<Vec<S>> {
        lower.extension_from(&self.basis)
    }

    /// Greedily picks candidates that are independent modulo `self`.
    pub fn extension_from(&self, candidates: &[Vec<S>]) -> Vec<Vec<S>> {
        let mut acc = self.clone();
        let mut reps = Vec::new();
        for v in candidates {
            if !acc.contains(v) {
                acc = acc.sum(&Self::span(self.ambient, [v.clone()]));
                reps.push(v.clone());
            }
        }
        reps
    }
}

/// Σ coeffs[i]·vectors[i]
pub fn combine<S: Scalar>(vectors: &[Vec<S>], coeffs: &[S], ambient: usize) -> Vec<S> {
    let mut out = vec![S::zero(); ambient];
    for (v, c) in vectors.iter().zip(coeffs) {
        if c.is_zero() {
            continue;
        }
        for (o, x) in out.iter_mut().zip(v) {
            *o = o.clone() + c.clone() * x.clone();
        }
    }
    out
}

pub fn unit_vector<S: Scalar>(n: usize, i: usize) -> Vec<S> {
    let mut v = vec![S::zero(); n];
    v[i] = S::one();
    v
}

/// Coordinates relative to a quotient V/W: `reps` complete a basis of W to
/// one of V, and `coords` returns the rep-coefficients of a vector of V.
#[derive(Clone, Debug)]
pub struct QuotientFrame<S> {
    pub reps: Vec<Vec<S>>,
    pub lower: Subspace<S>,
    solver: Matrix<S>,
}

impl<S: Scalar> QuotientFrame<S> {
    pub fn new(reps: Vec<Vec<S>>, lower: Subspace<S>) -> Self {
        let cols: Vec<Vec<S>> = reps.iter().chain(lower.basis()).cloned().collect();
        let solver = Matrix::from_cols(&cols, lower.ambient());
        Self { reps, lower, solver }
    }

    /// `None` when `v` lies outside span(reps) + lower.
    pub fn coords(&self, v: &[S]) -> Option<Vec<S>> {
        if self.solver.cols() == 0 {
            return v.iter().all(Zero::is_zero).then(Vec::new);
        }
        let mut x = self.solver.solve(v)?;
        x.truncate(self.reps.len());
        Some(x)
    }
}
