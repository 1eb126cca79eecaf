//! Numerical laboratory for one-dimensional log-concave measures.
//!
//! Measures live on uniform grids ([`GridMeasure`]). On top of them the
//! crate computes spectral Poincaré constants, isoperimetric and
//! concentration profiles, six probability metrics, Ornstein-Uhlenbeck
//! evolutions, and a catalog of explicit upper bounds that can be checked
//! against the oracle values.

pub mod bounds;
pub mod error;
pub mod measure1d;
pub mod metrics;
pub mod oracle;
pub mod scalar;
pub mod search;
pub mod semigroup;

pub use bounds::{
    best_bound, evaluate, validity_sweep, verify_against_oracle, BoundCertificate, Context, Inputs, Reference, Target,
};
pub use error::{Error, Result};
pub use measure1d::{
    apply_affine, convolve_gaussian, convolve_uniform, realize, scale_mix, truncate, AffineMap1D, Family, GridMeasure,
    GridRequest, MeasureSpec,
};
pub use metrics::{
    bl_dud, distance, kyfan, levy_prokhorov, tv, w1, w_lp, BlKind, CouplingPlan, DistanceReport, Metric,
};
pub use oracle::{
    bobkov_ledoux_tail, cheeger_constant, concentration_profile, isoperimetric_profile, moments, spectral_poincare,
    weak_beta_from_profile, Centering, MomentReport, ProfileKind, ProfileTable, SpectralResult,
};
pub use scalar::Real;
pub use semigroup::{check_tv_w1_contraction, check_w1_contraction, non_contraction_witness, ou_evolve, OUFlow};

/// Library version, recorded in report metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub type Measure = GridMeasure<f64>;
pub type Measure32 = GridMeasure<f32>;
pub type Profile = ProfileTable<f64>;
