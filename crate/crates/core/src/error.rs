//! Crate-wide error type.

use thiserror::Error;

/// Errors raised by configuration validation, geometry construction and CRB
/// evaluation.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A scenario or run parameter fails validation.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An angle lies outside the supported domain `|θ| ≤ 89.9°`.
    #[error("angle {degrees}° outside the supported domain |θ| ≤ {limit}°")]
    AngleDomain { degrees: f64, limit: f64 },

    /// A placement violates one of the array constraints; names the violated
    /// constraint.
    #[error("constraint `{constraint}` violated: {detail}")]
    Constraint {
        constraint: &'static str,
        detail: String,
    },

    /// Geometry degenerate for the requested operation (for example a zero
    /// derivative-beam norm).
    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// A bound evaluation failed at a specific angle.
    #[error("evaluation failed at θ = {theta_deg}°: {reason}")]
    Evaluation { theta_deg: f64, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
