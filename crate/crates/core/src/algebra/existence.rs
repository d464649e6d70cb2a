use super::{ideal_power, nilradical, FiniteAlgebra};
use crate::error::{Error, Result};
use crate::exactalg::{combine, rational_roots, Matrix, Poly, QuotientFrame, Subspace};
use crate::filtration::NondegenerateFiltration;
use crate::scalar::RationalScalar;

/// The filtration I_k = 𝔑^{l−k} (k = 1..l) by powers of the nilradical, with
/// the metric on each 𝔑^i/𝔑^{i+1} that makes a basis of 1-dimensional
/// simple submodules orthonormal.
///
/// Over the rationals the simple submodules exist only when every basis
/// element acts on the graded pieces with rational eigenvalues; otherwise
/// the offending piece is reported as `NotSplit`.
pub fn frobenius_filtration_existence<S: RationalScalar>(a: &FiniteAlgebra<S>) -> Result<NondegenerateFiltration<S>> {
    let s = a.dim();
    let n = nilradical(a);
    let mut powers = vec![Subspace::full(s)];
    while !powers.last().unwrap().is_zero() {
        let next = ideal_power(a, &n, powers.len());
        powers.push(next);
    }
    let l = powers.len() - 1;
    let mut jumps = Vec::with_capacity(l);
    for k in 1..=l {
        let i = l - k;
        let reps = powers[i].complement_of(&powers[i + 1]);
        let frame = QuotientFrame::new(reps.clone(), powers[i + 1].clone());
        let ops: Vec<Matrix<S>> = (0..s)
            .map(|j| {
                let e = a.basis_element(j);
                let cols: Vec<Vec<S>> = reps
                    .iter()
                    .map(|r| frame.coords(&a.mul(&e, r)).expect("powers of an ideal are ideals"))
                    .collect();
                Matrix::from_cols(&cols, reps.len())
            })
            .collect();
        let pieces = joint_eigenspaces(reps.len(), &ops).ok_or_else(|| {
            let name = match i {
                0 => "A/𝔑".to_string(),
                1 => "𝔑/𝔑^2".to_string(),
                _ => format!("𝔑^{i}/𝔑^{}", i + 1),
            };
            Error::NotSplit(format!("{name} (jump {k}) has no basis of rational simple submodules"))
        })?;
        let basis: Vec<Vec<S>> = pieces
            .iter()
            .flat_map(|p| p.basis().iter().map(|c| combine(&reps, c, s)))
            .collect();
        let d = basis.len();
        jumps.push((k as i64, basis, Matrix::identity(d)));
    }
    NondegenerateFiltration::new(s, jumps)
}

/// Splits K^d into joint eigenspaces of commuting operators; `None` if some
/// operator has a non-rational eigenvalue or is not diagonalizable.
fn joint_eigenspaces<S: RationalScalar>(d: usize, ops: &[Matrix<S>]) -> Option<Vec<Subspace<S>>> {
    let mut spaces = vec![Subspace::full(d)];
    for op in ops {
        let mut next = Vec::new();
        for w in &spaces {
            let restricted = restrict(op, w);
            let roots = rational_roots(&char_poly(&restricted).map_rational());
            let mut total = 0;
            for c in roots {
                let c = S::from_rational(&c);
                let shifted = Matrix::from_fn(d, d, |i, j| {
                    if i == j { op[(i, j)].clone() - c.clone() } else { op[(i, j)].clone() }
                });
                let eig = w.intersection(&Subspace::span(d, shifted.kernel()));
                total += eig.dim();
                next.push(eig);
            }
            if total != w.dim() {
                return None;
            }
        }
        spaces = next;
    }
    Some(spaces)
}

/// Matrix of `op` on an invariant subspace, in its echelon basis.
fn restrict<S: RationalScalar>(op: &Matrix<S>, w: &Subspace<S>) -> Matrix<S> {
    let cols: Vec<Vec<S>> = w
        .basis()
        .iter()
        .map(|b| w.coordinates(&op.apply(b)).expect("subspace is invariant"))
        .collect();
    Matrix::from_cols(&cols, w.dim())
}

fn char_poly<S: RationalScalar>(m: &Matrix<S>) -> Poly<S> {
    let n = m.rows();
    let lambda = Poly::lambda();
    Matrix::from_fn(n, n, |i, j| {
        let c = Poly::constant(-m[(i, j)].clone());
        if i == j { &lambda + &c } else { c }
    })
    .det()
}

trait MapRational {
    fn map_rational(&self) -> Poly<num_rational::BigRational>;
}

impl<S: RationalScalar> MapRational for Poly<S> {
    fn map_rational(&self) -> Poly<num_rational::BigRational> {
        Poly::new(self.coeffs().iter().map(RationalScalar::to_rational).collect())
    }
}
