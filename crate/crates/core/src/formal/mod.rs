mod localized;
mod log;
mod mfs;
mod saito;
mod series;

pub use localized::{check_localized_formal_frobenius, limit_mfs, LocalizedFormalFrobenius};
pub use log::{potential_vector_field, verify_potential, LogSeries};
pub use mfs::{check_formal_mfs, mfs_from_graded_mfa, FormalMFS};
pub use saito::{check_formal_saito, constant_structure, euler_apply, linear_euler, FormalSaito};
pub use series::{
    apply_field, bracket, bracket_lambda, constant_field, total_degree, Coeff, Frame, TruncatedSeries, VarKind,
    VectorField,
};
