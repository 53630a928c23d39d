//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Clone, Error)]
pub enum SltError {
    /// Problem validation failed; lists every violated condition.
    #[error("invalid problem specification: {}", .0.join("; "))]
    InvalidSpec(Vec<String>),

    /// Transmission matrix violates the standing minor-positivity assumption.
    #[error("invalid transmission matrix: {0}")]
    InvalidTransmission(String),

    /// Configuration document could not be parsed or is missing keys.
    #[error("config error: {0}")]
    Config(String),

    /// Caller misuse of an API contract (index range, grid mismatch, ...).
    #[error("usage error: {0}")]
    Usage(String),

    /// The adaptive stepper underflowed its step size.
    #[error("integration failure at x = {x}: {detail}")]
    IntegrationFailure { x: f64, detail: String },

    /// The two Wronskian routes for w(lambda) disagree beyond tolerance,
    /// indicating the integrator tolerances are too loose for the request.
    #[error("internal consistency failure at lambda = {lambda}: {detail}")]
    InternalConsistency { lambda: f64, detail: String },

    /// lambda falls within root tolerance of an eigenvalue.
    #[error("lambda = {lambda} is within tolerance of an eigenvalue{}",
            .nearest.map(|e| format!(" (nearest: {e})")).unwrap_or_default())]
    NearSingular { lambda: f64, nearest: Option<f64> },

    /// Candidate eigenfunction has numerically zero weighted norm.
    #[error("degenerate eigenfunction at lambda = {lambda}: weighted norm {norm:.3e} below 1e-12")]
    DegenerateEigenfunction { lambda: f64, norm: f64 },

    /// Kernel evaluation requested at the interface point x = 0.
    #[error("Green kernel is not defined at the interface point (x = 0, s = 0)")]
    InterfacePoint,
}

pub type Result<T> = std::result::Result<T, SltError>;

impl SltError {
    /// True for errors caused by bad user input rather than numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            SltError::InvalidSpec(_)
                | SltError::InvalidTransmission(_)
                | SltError::Config(_)
                | SltError::Usage(_)
                | SltError::InterfacePoint
        )
    }
}
