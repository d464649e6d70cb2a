//! Exact construction and checking of mixed Frobenius algebras and their
//! formal (power-series) counterparts.
//!
//! Everything is generic over [`scalar::Scalar`]; the aliases below fix the
//! scalar to arbitrary-precision rationals, which is what the CLI uses.

pub mod algebra;
pub mod error;
pub mod exactalg;
pub mod filtration;
pub mod formal;
pub mod geom;
pub mod io;
pub mod mfa;
pub mod report;
pub mod scalar;

pub use error::{Error, Result};
pub use report::{AxiomRecord, VerificationReport};
pub use scalar::{RationalScalar, Scalar};

pub type Q = num_rational::BigRational;
pub type QPoly = exactalg::Poly<Q>;
pub type QLaurentPoly = exactalg::LaurentPoly<Q>;
pub type QMatrix = exactalg::Matrix<Q>;
pub type QPolyMatrix = exactalg::PolyMatrix<Q>;
pub type QLaurentMatrix = exactalg::LaurentMatrix<Q>;
pub type QFiniteAlgebra = algebra::FiniteAlgebra<Q>;
pub type QFiltration = filtration::NondegenerateFiltration<Q>;
pub type QLocalizedMetric = mfa::LocalizedMetric<Q>;
pub type QMixedFrobeniusAlgebra = mfa::MixedFrobeniusAlgebra<Q>;
pub type QSeries = formal::TruncatedSeries<Q>;
pub type QFormalSaito = formal::FormalSaito<Q>;
pub type QFormalMFS = formal::FormalMFS<Q>;
pub type QLocalizedFormalFrobenius = formal::LocalizedFormalFrobenius<Q>;
pub type QCohomologyModel = geom::CohomologyModel<Q>;
pub type QBundleData = geom::BundleData<Q>;
pub type QGWDataset = geom::GWDataset<Q>;
