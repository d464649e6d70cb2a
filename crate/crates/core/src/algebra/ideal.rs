use super::FiniteAlgebra;
use crate::exactalg::{Matrix, Subspace};
use crate::scalar::Scalar;

/// The nilradical, computed as the kernel of the trace form
/// (x, y) ↦ tr(L_{xy}). Valid in characteristic zero.
pub fn nilradical<S: Scalar>(a: &FiniteAlgebra<S>) -> Subspace<S> {
    let s = a.dim();
    let traces: Vec<S> = (0..s).map(|k| trace(&a.mult_matrix(&a.basis_element(k)))).collect();
    let form = Matrix::from_fn(s, s, |i, j| super::dot(a.structure(i, j), &traces));
    Subspace::span(s, form.kernel())
}

fn trace<S: Scalar>(m: &Matrix<S>) -> S {
    (0..m.rows()).fold(S::zero(), |acc, i| acc + m[(i, i)].clone())
}

/// span{x·y : x ∈ I, y ∈ J}
pub fn ideal_product<S: Scalar>(a: &FiniteAlgebra<S>, i: &Subspace<S>, j: &Subspace<S>) -> Subspace<S> {
    let products = i
        .basis()
        .iter()
        .flat_map(|x| j.basis().iter().map(move |y| a.mul(x, y)));
    Subspace::span(a.dim(), products)
}

/// I^k, with I^0 = A.
pub fn ideal_power<S: Scalar>(a: &FiniteAlgebra<S>, ideal: &Subspace<S>, k: usize) -> Subspace<S> {
    let mut out = Subspace::full(a.dim());
    for _ in 0..k {
        out = ideal_product(a, &out, ideal);
    }
    out
}

/// Ker(L_{a^k}) = {x : a^k·x = 0}.
pub fn annihilator<S: Scalar>(alg: &FiniteAlgebra<S>, a: &[S], k: usize) -> Subspace<S> {
    let ak = alg.pow(a, k);
    Subspace::span(alg.dim(), alg.mult_matrix(&ak).kernel())
}

/// `Err((i, v))` names a basis element e_i and a basis vector v of the
/// subspace with e_i·v outside it.
pub fn is_ideal<S: Scalar>(a: &FiniteAlgebra<S>, sub: &Subspace<S>) -> Result<(), (usize, Vec<S>)> {
    for i in 0..a.dim() {
        let e = a.basis_element(i);
        for v in sub.basis() {
            if !sub.contains(&a.mul(&e, v)) {
                return Err((i, v.clone()));
            }
        }
    }
    Ok(())
}
