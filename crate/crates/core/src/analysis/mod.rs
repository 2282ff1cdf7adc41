//! Permanence bounds, the stability certificate and trajectory diagnostics.

pub mod bounds;
pub mod certificate;
pub mod diagnostics;
pub mod lyapunov;

pub use bounds::{
    lower_bounds, permanence_bounds, upper_bounds, BoundsSource, LowerBounds, PermanenceBounds, UpperBounds,
};
pub use certificate::{
    certify, contraction_factor, decay_rate, stability_constants, StabilityCertificate, StabilityConstants, Verdict,
};
pub use diagnostics::{
    empirical_lambda_bounds, permanence_check, post_transient, translation_defect, translation_defect_from,
    CompartmentRange, LambdaRange, PermanenceReport,
};
pub use lyapunov::{lyapunov_decay_check, lyapunov_v, DecayPoint, DecayReport};
