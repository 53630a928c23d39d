//! Solver for the Sturm-Liouville problem -y'' + q(x) y = lambda y on
//! [-pi, 0) u (0, pi] with separated boundary conditions at the endpoints
//! and a pair of linear transmission conditions coupling the one-sided
//! limits of (y, y') at the interior point 0.
//!
//! The pipeline:
//!
//! 1. [`problem`] / [`config`] define and ingest the problem instance
//!    (potential, boundary angles, 2x4 transmission matrix).
//! 2. [`integrate`] propagates the equation as a first-order system with an
//!    adaptive embedded Runge-Kutta pair and node-forced dense output.
//! 3. [`spectral`] builds the two fundamental solutions across the
//!    interface, forms the characteristic function w(lambda) from their
//!    Wronskians, brackets and bisects its real zeros, and normalizes
//!    eigenfunctions under the weighted inner product
//!    rho12 int_left + rho34 int_right.
//! 4. [`green`] evaluates the kernel phi(min) chi(max) / w, applies the
//!    resolvent, sums the spectral kernel series, and computes both sides
//!    of the trace identity int G(x,x;t) dx = sum 1/(t - lambda_n).
//! 5. [`expansion`] computes Fourier coefficients in the eigenfunction
//!    basis, reconstructs functions, and verifies the Parseval balance.

pub mod config;
pub mod error;
pub mod expansion;
pub mod green;
pub mod grid;
pub mod integrate;
pub mod problem;
pub mod spectral;

pub use config::{parse_config, to_config_string};
pub use error::{Result, SltError};
pub use expansion::{
    evaluate_series, fourier_coefficients, parseval_check, resolvent_spectral_check,
    ExpansionResult,
};
pub use green::{
    apply_resolvent, carleman_report, green_eval, kernel_series, CarlemanReport, GreenEvaluator,
    ResolventResult,
};
pub use grid::{Grid, SampledFunction};
pub use integrate::{propagate, wronskian_at, StateVector, Trajectory};
pub use problem::{
    BoundaryAngles, MonotoneCubic, Potential, ProblemSpec, Side, SidePotential, SolverSettings,
    TransmissionMatrix,
};
pub use spectral::{
    build_chi, build_phi, characteristic, find_eigenvalues, normalize, weighted_inner_product,
    BranchKind, CharacteristicSample, Eigenpair, SolutionBranch, Spectrum,
};
