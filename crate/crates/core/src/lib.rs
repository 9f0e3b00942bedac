//! Cramér-Rao bounds for angle-of-departure estimation with movable-antenna
//! arrays, and robust min-max antenna placement under a spatial-correlation
//! constraint.
//!
//! A transmitter carries `L` movable antennas on a one-dimensional segment of
//! aperture `D`. For a given antenna position vector (APV) and a two-beam
//! precoder matched to a nominal direction, [`crb::crb_general`] evaluates the
//! CRB on the variance of any unbiased angle estimator, and
//! [`crb::crb_closed_form`] its closed form for zero-mean layouts. The
//! [`optimizer`] searches a symmetric two-parameter placement family for the
//! layout minimizing the worst-case CRB over an angular uncertainty region,
//! subject to the spatial-correlation (ambiguity) constraint of [`scc`]. The
//! [`simulate`] module validates the bounds against a maximum-likelihood
//! estimator driven by Monte-Carlo trials.
//!
//! # Conventions
//!
//! * Antenna positions are expressed in wavelength units and sorted ascending.
//! * Angles are degrees at every public boundary and radians internally
//!   ([`model::Angle`] enforces the `|θ| ≤ 89.9°` domain).
//! * CRB values are variances in rad²; [`crb::CrbValue::sqrt_degrees`] exposes
//!   the root-CRB in degrees used for reporting.
//!
//! # Parallelism
//!
//! With the default `parallel` feature, grid cells, worst-case angle scans and
//! Monte-Carlo trials are evaluated on a rayon pool. Results are reduced
//! sequentially with fixed tie-breaking, so parallel and sequential runs are
//! bit-identical; the `*_sequential` entry points are always available for
//! comparison.

pub mod crb;
pub mod error;
pub mod exec;
pub mod geometry;
pub mod model;
pub mod optimizer;
pub mod precoding;
pub mod scc;
pub mod simulate;

mod util;

pub use crb::{crb_closed_form, crb_general, worst_case_crb, CrbValue, WorstCase};
pub use error::{Error, Result};
pub use geometry::{
    maxvar_apv, position_moment, symmetric_apv, ufa_apv, uhw_apv, AntennaPositionVector, Apv,
    SymmetricFamilyParams,
};
pub use model::{
    steering_derivative, steering_vector, Angle, BeamwidthCriterion, ScenarioConfig, SteeringVector,
};
pub use optimizer::{optimize_placement, sweep_region_size, GridSpec, OptimizationReport};
pub use precoding::{optimal_precoder, PowerAllocation, PrecodingMatrix};
pub use scc::{half_power_beamwidth, mainlobe_set, scc, scc_feasible, UncertaintyRegion};
pub use simulate::{generate_observations, ml_estimate_aod, monte_carlo, SignalScenario};
