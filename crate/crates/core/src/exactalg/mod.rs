//! Exact scalars, Laurent polynomials in λ, polynomial matrices and their
//! Smith normal form.

pub mod division;
pub mod laurent;
pub mod matrix;
pub mod poly;
pub mod roots;
pub mod smith;
pub mod subspace;

pub use division::{divide_by_monic, CoefficientRing};
pub use laurent::{residue_at_zero, LaurentPoly};
pub use matrix::{is_unimodular_laurent, Echelon, LaurentMatrix, Matrix, PolyMatrix};
pub use poly::Poly;
pub use roots::rational_roots;
pub use subspace::{combine, unit_vector, QuotientFrame, Subspace};
pub use smith::{laurent_inverse, laurent_smith, smith_normal_form, SmithDecomposition};

use std::marker::PhantomData;

use crate::scalar::Scalar;

/// The scalar field itself as a coefficient ring.
#[derive(Clone, Copy, Debug, Default)]
pub struct ScalarRing<S>(PhantomData<S>);

impl<S> ScalarRing<S> {
    pub fn new() -> Self {
        Self(PhantomData)
    }
}

impl<S: Scalar> CoefficientRing for ScalarRing<S> {
    type Elem = S;
    fn zero(&self) -> S {
        S::zero()
    }
    fn one(&self) -> S {
        S::one()
    }
    fn add(&self, a: &S, b: &S) -> S {
        a.clone() + b.clone()
    }
    fn sub(&self, a: &S, b: &S) -> S {
        a.clone() - b.clone()
    }
    fn mul(&self, a: &S, b: &S) -> S {
        a.clone() * b.clone()
    }
}
