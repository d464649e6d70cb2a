pub mod examples;
mod gw;
mod model;
mod twisted;

pub use gw::{correlator_lambda_degree, GWDataset, GwRecord};
pub use model::{equivariant_euler, equivariant_euler_inverse, localized_metric_geom, BundleData, CohomologyModel};
pub use twisted::{
    build_twisted_product, classical_limit_filtration, closed_form_potential, compute_phi_cl, euler_field,
    euler_weights, geometric_frame, TwistedProductModel,
};
