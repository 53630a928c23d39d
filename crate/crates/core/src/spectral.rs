//! Fundamental solutions across the interface, the characteristic function
//! w(lambda), eigenvalue search and normalized eigenfunctions.
//!
//! Two solution branches are built per lambda:
//!
//! * `phi`: starts at -pi with (sin(alpha), -cos(alpha)) — satisfies the left
//!   boundary condition — and crosses the interface by solving the two
//!   transmission conditions for (y(0+), y'(0+)).
//! * `chi`: starts at pi with (-sin(beta), cos(beta)) — satisfies the right
//!   boundary condition — and crosses the interface with the inverse
//!   transfer.
//!
//! Writing the interface transfer as a 2x2 map M on (y, y'), the Pluecker
//! relation rho12 rho34 = rho13 rho24 - rho14 rho23 gives det M =
//! rho12 / rho34, which is exactly what makes rho12 W(phi1, chi1) =
//! rho34 W(phi2, chi2) for every lambda. That common value is the
//! characteristic function w(lambda); its real zeros are the eigenvalues.
//! Both routes are computed and cross-checked on every evaluation.

use rayon::prelude::*;

use crate::error::{Result, SltError};
use crate::grid::{weighted_dot, Grid, SampledFunction};
use crate::integrate::{propagate, StateVector, Trajectory};
use crate::problem::{Minors, ProblemSpec, Side, SolverSettings, X_LEFT, X_RIGHT};

/// Relative tolerance for the two-route agreement of w(lambda).
const W_CONSISTENCY_RTOL: f64 = 1e-8;

/// Which fundamental solution a branch represents.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchKind {
    Phi,
    Chi,
}

/// A fundamental solution sampled over both sides.
#[derive(Debug, Clone)]
pub struct SolutionBranch {
    pub lambda: f64,
    pub kind: BranchKind,
    pub left: Trajectory,
    pub right: Trajectory,
}

impl SolutionBranch {
    /// One-sided interface states (left limit, right limit).
    pub fn interface_states(&self) -> (StateVector, StateVector) {
        let l = match self.kind {
            BranchKind::Phi => self.left.endpoint_state(),
            BranchKind::Chi => self.left.initial_state(),
        };
        let r = match self.kind {
            BranchKind::Phi => self.right.initial_state(),
            BranchKind::Chi => self.right.endpoint_state(),
        };
        (l, r)
    }

    /// Dense evaluation anywhere in the domain except the interface point.
    pub fn eval(&self, spec: &ProblemSpec, x: f64) -> Result<StateVector> {
        if x == 0.0 {
            return Err(SltError::Usage(
                "branch value at x = 0 is one-sided; use interface_states()".into(),
            ));
        }
        let side = Side::of(x);
        let traj = match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        };
        traj.eval(x, spec.potential.side(side))
    }

    /// Values on the standard grid (ascending per side).
    pub fn sampled(&self, grid: &Grid) -> Result<SampledFunction> {
        let (ly, _) = self.left.aligned_values(&grid.left)?;
        let (ry, _) = self.right.aligned_values(&grid.right)?;
        Ok(SampledFunction {
            left: ly,
            right: ry,
        })
    }

    /// Derivative values on the standard grid (ascending per side).
    pub fn sampled_derivative(&self, grid: &Grid) -> Result<SampledFunction> {
        let (_, ld) = self.left.aligned_values(&grid.left)?;
        let (_, rd) = self.right.aligned_values(&grid.right)?;
        Ok(SampledFunction {
            left: ld,
            right: rd,
        })
    }

    fn scale(&mut self, c: f64) {
        self.left.scale(c);
        self.right.scale(c);
    }
}

/// Transfer (y(0-), y'(0-)) -> (y(0+), y'(0+)) solving the two transmission
/// conditions exactly.
pub fn transfer_left_to_right(m: &Minors, u: StateVector) -> StateVector {
    StateVector {
        y: (m.r23 * u.y + m.r13 * u.dy) / m.r34,
        dy: -(m.r24 * u.y + m.r14 * u.dy) / m.r34,
    }
}

/// Inverse transfer (y(0+), y'(0+)) -> (y(0-), y'(0-)).
pub fn transfer_right_to_left(m: &Minors, v: StateVector) -> StateVector {
    StateVector {
        y: -(m.r14 * v.y + m.r13 * v.dy) / m.r12,
        dy: (m.r24 * v.y + m.r23 * v.dy) / m.r12,
    }
}

fn phi_initial(spec: &ProblemSpec) -> StateVector {
    StateVector::new(spec.angles.alpha.sin(), -spec.angles.alpha.cos())
}

fn chi_initial(spec: &ProblemSpec) -> StateVector {
    StateVector::new(-spec.angles.beta.sin(), spec.angles.beta.cos())
}

/// Build the left-anchored fundamental solution on the grid.
pub fn build_phi(
    spec: &ProblemSpec,
    lambda: f64,
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<SolutionBranch> {
    let left = propagate(
        &spec.potential.left,
        Side::Left,
        lambda,
        X_LEFT,
        0.0,
        phi_initial(spec),
        &grid.left,
        settings,
    )
    .map_err(|e| annotate(e, "left side of phi"))?;
    let start = transfer_left_to_right(&spec.minors(), left.endpoint_state());
    let right = propagate(
        &spec.potential.right,
        Side::Right,
        lambda,
        0.0,
        X_RIGHT,
        start,
        &grid.right,
        settings,
    )
    .map_err(|e| annotate(e, "right side of phi"))?;
    Ok(SolutionBranch {
        lambda,
        kind: BranchKind::Phi,
        left,
        right,
    })
}

/// Build the right-anchored fundamental solution on the grid.
pub fn build_chi(
    spec: &ProblemSpec,
    lambda: f64,
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<SolutionBranch> {
    let right = propagate(
        &spec.potential.right,
        Side::Right,
        lambda,
        X_RIGHT,
        0.0,
        chi_initial(spec),
        &grid.right,
        settings,
    )
    .map_err(|e| annotate(e, "right side of chi"))?;
    let start = transfer_right_to_left(&spec.minors(), right.endpoint_state());
    let left = propagate(
        &spec.potential.left,
        Side::Left,
        lambda,
        0.0,
        X_LEFT,
        start,
        &grid.left,
        settings,
    )
    .map_err(|e| annotate(e, "left side of chi"))?;
    Ok(SolutionBranch {
        lambda,
        kind: BranchKind::Chi,
        left,
        right,
    })
}

fn annotate(e: SltError, what: &str) -> SltError {
    match e {
        SltError::IntegrationFailure { x, detail } => SltError::IntegrationFailure {
            x,
            detail: format!("{what}: {detail}"),
        },
        other => other,
    }
}

/// w(lambda) together with the per-side Wronskians that produce it.
#[derive(Debug, Clone, Copy)]
pub struct CharacteristicSample {
    pub lambda: f64,
    /// W(phi1, chi1) evaluated at the interface from the left.
    pub w1: f64,
    /// W(phi2, chi2) evaluated at the interface from the right.
    pub w2: f64,
    /// The characteristic value rho12 w1 (= rho34 w2).
    pub w: f64,
    /// Magnitude of the Wronskian terms before cancellation; the natural
    /// scale against which |w| should be judged small.
    pub scale: f64,
}

/// Evaluate the characteristic function at one lambda.
///
/// Only the interface states are needed, so no dense grid is produced.
pub fn characteristic(
    spec: &ProblemSpec,
    lambda: f64,
    settings: &SolverSettings,
) -> Result<CharacteristicSample> {
    let m = spec.minors();
    let phi1 = propagate(
        &spec.potential.left,
        Side::Left,
        lambda,
        X_LEFT,
        0.0,
        phi_initial(spec),
        &[],
        settings,
    )?
    .endpoint_state();
    let chi2 = propagate(
        &spec.potential.right,
        Side::Right,
        lambda,
        X_RIGHT,
        0.0,
        chi_initial(spec),
        &[],
        settings,
    )?
    .endpoint_state();
    let phi2 = transfer_left_to_right(&m, phi1);
    let chi1 = transfer_right_to_left(&m, chi2);
    characteristic_from_states(&m, lambda, phi1, phi2, chi1, chi2)
}

/// Assemble w(lambda) from the four one-sided interface states, verifying
/// that both Wronskian routes agree.
pub(crate) fn characteristic_from_states(
    m: &Minors,
    lambda: f64,
    phi1: StateVector,
    phi2: StateVector,
    chi1: StateVector,
    chi2: StateVector,
) -> Result<CharacteristicSample> {
    let w1 = phi1.y * chi1.dy - phi1.dy * chi1.y;
    let w2 = phi2.y * chi2.dy - phi2.dy * chi2.y;
    let scale = (m.r12 * phi1.y * chi1.dy).abs()
        + (m.r12 * phi1.dy * chi1.y).abs()
        + (m.r34 * phi2.y * chi2.dy).abs()
        + (m.r34 * phi2.dy * chi2.y).abs();
    let scale = scale.max(f64::MIN_POSITIVE);

    let (wa, wb) = (m.r12 * w1, m.r34 * w2);
    if (wa - wb).abs() > W_CONSISTENCY_RTOL * scale.max(wa.abs()) {
        return Err(SltError::InternalConsistency {
            lambda,
            detail: format!(
                "rho12 w1 = {wa:.15e} vs rho34 w2 = {wb:.15e} (scale {scale:.3e}); \
                 integrator tolerance too loose"
            ),
        });
    }
    Ok(CharacteristicSample {
        lambda,
        w1,
        w2,
        w: wa,
        scale,
    })
}

/// One eigenvalue with its normalized eigenfunction.
#[derive(Debug, Clone)]
pub struct Eigenpair {
    pub index: usize,
    pub lambda: f64,
    /// Normalized solution branch (unit weighted norm, sign-fixed).
    pub eigenfunction: SolutionBranch,
    /// The divisor used in normalization, sqrt(<f, f>_w) of the raw branch.
    pub norm_constant: f64,
    /// Values on the standard grid.
    pub samples: SampledFunction,
}

/// The computed point spectrum over a search window.
#[derive(Debug, Clone)]
pub struct Spectrum {
    pub pairs: Vec<Eigenpair>,
    pub search_window: (f64, f64),
    /// Spectral shift applied internally when 0 was an eigenvalue; 0 when
    /// unused. Reported eigenvalues are always unshifted.
    pub shift_eta: f64,
    pub warnings: Vec<String>,
}

impl Spectrum {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.pairs.iter().map(|p| p.lambda).collect()
    }

    /// Number of eigenvalues <= lambda among the computed pairs.
    pub fn counting_function(&self, lambda: f64) -> usize {
        self.pairs.iter().take_while(|p| p.lambda <= lambda).count()
    }
}

/// Weighted inner product of two sampled functions,
/// rho12 int_left f g + rho34 int_right f g.
pub fn weighted_inner_product(
    f: &SampledFunction,
    g: &SampledFunction,
    spec: &ProblemSpec,
    grid: &Grid,
) -> Result<f64> {
    grid.check_aligned(f)?;
    grid.check_aligned(g)?;
    Ok(weighted_dot(grid, spec.weights(), f, g))
}

/// Normalize a candidate branch to unit weighted norm with a deterministic
/// sign (first significant sample from the left is positive).
pub fn normalize(
    spec: &ProblemSpec,
    grid: &Grid,
    index: usize,
    mut branch: SolutionBranch,
) -> Result<Eigenpair> {
    let samples = branch.sampled(grid)?;
    let norm_sq = weighted_dot(grid, spec.weights(), &samples, &samples);
    let norm = norm_sq.max(0.0).sqrt();
    if norm < 1e-12 {
        return Err(SltError::DegenerateEigenfunction {
            lambda: branch.lambda,
            norm,
        });
    }
    let sup = samples.sup_norm();
    let mut sign = 1.0;
    for v in samples.left.iter().chain(&samples.right) {
        if v.abs() > 1e-9 * sup {
            sign = v.signum();
            break;
        }
    }
    branch.scale(sign / norm);
    let samples = branch.sampled(grid)?;
    Ok(Eigenpair {
        index,
        lambda: branch.lambda,
        eigenfunction: branch,
        norm_constant: norm,
        samples,
    })
}

/// Scan abscissae: uniform in sqrt(lambda) above zero, uniform in lambda
/// below (eigenvalue spacing is asymptotically uniform in sqrt(lambda)).
fn scan_points(lo: f64, hi: f64) -> Vec<f64> {
    const STEP: f64 = 0.25;
    let mut pts = vec![lo];
    let mut cur = lo;
    while cur < hi {
        let next = if cur < 0.0 {
            (cur + STEP).min(0.0)
        } else {
            let k = cur.sqrt() + STEP;
            k * k
        };
        cur = next.min(hi);
        pts.push(cur);
    }
    pts
}

fn bisect_root(
    spec: &ProblemSpec,
    settings: &SolverSettings,
    mut lo: f64,
    mut hi: f64,
    mut w_lo: f64,
) -> Result<f64> {
    for _ in 0..200 {
        if hi - lo <= settings.root_tol {
            break;
        }
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let w_mid = characteristic(spec, mid, settings)?.w;
        if w_mid == 0.0 {
            return Ok(mid);
        }
        if (w_mid < 0.0) == (w_lo < 0.0) {
            lo = mid;
            w_lo = w_mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Locate the roots of lambda -> offset-shifted w over a window.
fn scan_roots(
    spec: &ProblemSpec,
    settings: &SolverSettings,
    window: (f64, f64),
    offset: f64,
) -> Result<(Vec<f64>, Vec<String>)> {
    let pts = scan_points(window.0, window.1);
    let samples: Vec<CharacteristicSample> = pts
        .par_iter()
        .map(|&lam| characteristic(spec, lam + offset, settings))
        .collect::<Result<Vec<_>>>()?;

    let mut warnings = Vec::new();
    let mut brackets = Vec::new();
    let mut exact: Vec<f64> = Vec::new();
    for i in 0..samples.len() - 1 {
        let (a, b) = (&samples[i], &samples[i + 1]);
        if a.w == 0.0 {
            exact.push(pts[i] + offset);
        } else if b.w != 0.0 && (a.w < 0.0) != (b.w < 0.0) {
            brackets.push((pts[i], pts[i + 1], a.w));
        }
    }
    if samples.last().map(|s| s.w == 0.0) == Some(true) {
        exact.push(*pts.last().unwrap() + offset);
    }
    // A dip of |w| toward zero without a sign change suggests a double root,
    // which the expansion theory does not cover; flag it.
    for i in 1..samples.len() - 1 {
        let (a, b, c) = (&samples[i - 1], &samples[i], &samples[i + 1]);
        let same_sign = (a.w < 0.0) == (b.w < 0.0) && (b.w < 0.0) == (c.w < 0.0);
        let local_min = b.w.abs() < a.w.abs() && b.w.abs() < c.w.abs();
        if same_sign && local_min && b.w.abs() <= 1e-4 * a.w.abs().max(c.w.abs()) {
            warnings.push(format!(
                "possible double root near lambda = {:.6} (|w| dips to {:.3e} without sign change)",
                pts[i] + offset,
                b.w.abs()
            ));
        }
    }

    // Bisection works in true lambda coordinates; the scan abscissae are
    // offset-shifted for the internal eta-shift mechanism.
    let mut roots: Vec<f64> = brackets
        .par_iter()
        .map(|&(lo, hi, w_lo)| bisect_root(spec, settings, lo + offset, hi + offset, w_lo))
        .collect::<Result<Vec<_>>>()?;
    roots.extend(exact);
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 4.0 * settings.root_tol);
    Ok((roots, warnings))
}

/// Find all simple eigenvalues in the settings window and return them with
/// normalized eigenfunctions.
pub fn find_eigenvalues(spec: &ProblemSpec, settings: &SolverSettings) -> Result<Spectrum> {
    settings.validate()?;
    let window = (settings.lambda_min, settings.lambda_max);
    let (mut roots, mut warnings) = scan_roots(spec, settings, window, 0.0)?;

    // If 0 is an eigenvalue, redo the search on the shifted problem
    // (q -> q - eta moves every eigenvalue down by eta) and shift back.
    let mut shift_eta = 0.0;
    let w0 = characteristic(spec, 0.0, settings)?;
    if w0.w.abs() < settings.root_tol * w0.scale.max(1.0) {
        let eta = pick_eta(&roots, w0.w);
        let shifted_window = (window.0 - eta, window.1 - eta);
        let (shifted_roots, shifted_warnings) = scan_roots(spec, settings, shifted_window, eta)?;
        roots = shifted_roots;
        warnings = shifted_warnings;
        shift_eta = eta;
    }

    roots.truncate(settings.max_eigenvalues);

    let grid = Grid::new(settings);
    let pairs: Vec<Eigenpair> = roots
        .par_iter()
        .enumerate()
        .map(|(i, &lam)| {
            let branch = build_phi(spec, lam, &grid, settings)?;
            normalize(spec, &grid, i, branch)
        })
        .collect::<Result<Vec<_>>>()?;

    Ok(Spectrum {
        pairs,
        search_window: window,
        shift_eta,
        warnings,
    })
}

/// Midpoint of the wider eigenvalue-free gap adjacent to the near-zero
/// eigenvalue; falls back to 1 + |w(0)| when no neighbours are known.
fn pick_eta(roots: &[f64], w0: f64) -> f64 {
    let near = roots
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap());
    if let Some((iz, &lz)) = near {
        let above = roots.get(iz + 1).map(|&ln| (lz + ln) / 2.0);
        let below = (iz > 0).then(|| (roots[iz - 1] + lz) / 2.0);
        match (above, below) {
            (Some(a), Some(b)) => {
                if (a - lz).abs() >= (lz - b).abs() {
                    return a;
                }
                return b;
            }
            (Some(a), None) => return a,
            (None, Some(b)) => return b,
            (None, None) => {}
        }
    }
    1.0 + w0.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn classical() -> ProblemSpec {
        ProblemSpec::classical_dirichlet()
    }

    fn delta(gamma: f64) -> ProblemSpec {
        ProblemSpec {
            transmission: crate::problem::TransmissionMatrix::delta_interaction(gamma),
            ..classical()
        }
        .validate()
        .unwrap()
    }

    #[test]
    fn continuity_transfer_is_identity() {
        let m = classical().minors();
        let u = StateVector::new(0.37, -1.21);
        let v = transfer_left_to_right(&m, u);
        assert_eq!(v, u);
        assert_eq!(transfer_right_to_left(&m, v), u);
    }

    #[test]
    fn delta_transfer_jumps_the_derivative() {
        // y(0+) = y(0-), y'(0+) = y'(0-) + gamma y(0-)
        let m = delta(1.0).minors();
        let u = StateVector::new(0.8, -0.3);
        let v = transfer_left_to_right(&m, u);
        assert_relative_eq!(v.y, u.y);
        assert_relative_eq!(v.dy, u.dy + u.y);
        let back = transfer_right_to_left(&m, v);
        assert_relative_eq!(back.y, u.y, epsilon = 1e-15);
        assert_relative_eq!(back.dy, u.dy, epsilon = 1e-15);
    }

    #[test]
    fn transfers_are_mutually_inverse_for_general_matrices() {
        let spec = ProblemSpec {
            transmission: crate::problem::TransmissionMatrix {
                row_a: [0.3, 1.0, -0.2, -1.4],
                row_b: [-1.1, 0.4, 0.9, 0.25],
            },
            ..classical()
        }
        .validate()
        .unwrap();
        let m = spec.minors();
        let u = StateVector::new(1.3, 0.7);
        let v = transfer_left_to_right(&m, u);
        let back = transfer_right_to_left(&m, v);
        assert_relative_eq!(back.y, u.y, epsilon = 1e-13);
        assert_relative_eq!(back.dy, u.dy, epsilon = 1e-13);
    }

    #[test]
    fn phi_satisfies_both_transmission_conditions() {
        let spec = ProblemSpec {
            transmission: crate::problem::TransmissionMatrix {
                row_a: [0.3, 1.0, -0.2, -1.4],
                row_b: [-1.1, 0.4, 0.9, 0.25],
            },
            ..classical()
        }
        .validate()
        .unwrap();
        let grid = Grid::new(&SolverSettings::default());
        let phi = build_phi(&spec, 2.3, &grid, &SolverSettings::default()).unwrap();
        let (l, r) = phi.interface_states();
        let a = spec.transmission.row_a;
        let b = spec.transmission.row_b;
        let g1 = a[0] * l.dy + a[1] * l.y + a[2] * r.dy + a[3] * r.y;
        let g2 = b[0] * l.dy + b[1] * l.y + b[2] * r.dy + b[3] * r.y;
        assert!(g1.abs() < 1e-12 && g2.abs() < 1e-12, "g1={g1} g2={g2}");
    }

    #[test]
    fn phi_closed_form_for_classical_lambda_one() {
        let settings = SolverSettings::default();
        let grid = Grid::new(&settings);
        let phi = build_phi(&classical(), 1.0, &grid, &settings).unwrap();
        let (l, r) = phi.interface_states();
        // phi = -sin(x + pi): left limit (0, 1), continued identically
        assert_relative_eq!(l.y, 0.0, epsilon = 1e-9);
        assert_relative_eq!(l.dy, 1.0, epsilon = 1e-9);
        assert_eq!(l, r);
        let mid = phi.eval(&classical(), PI / 2.0).unwrap();
        assert_relative_eq!(mid.y, -(PI / 2.0 + PI).sin(), epsilon = 1e-8);
    }

    #[test]
    fn chi_closed_form_and_initial_states() {
        let settings = SolverSettings::default();
        let grid = Grid::new(&settings);
        // beta = 0, lambda = 1: chi = sin(x - pi), interface state (0, -1)
        let chi = build_chi(&classical(), 1.0, &grid, &settings).unwrap();
        let (l, r) = chi.interface_states();
        assert_relative_eq!(r.y, 0.0, epsilon = 1e-9);
        assert_relative_eq!(r.dy, -1.0, epsilon = 1e-9);
        assert_eq!(l, r);
        // beta = pi/2: initial state at pi is (-1, 0)
        let spec = ProblemSpec {
            angles: crate::problem::BoundaryAngles::new(0.0, PI / 2.0),
            ..classical()
        };
        let chi = build_chi(&spec, 1.0, &grid, &settings).unwrap();
        let start = chi.right.initial_state();
        assert_relative_eq!(start.y, -1.0);
        assert_relative_eq!(start.dy, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn characteristic_matches_closed_form() {
        let settings = SolverSettings::default();
        // w(lambda) = -sin(2 pi sqrt(lambda)) / sqrt(lambda) for the
        // classical problem
        for lam in [0.5, 0.17, 2.0, 10.3] {
            let s = characteristic(&classical(), lam, &settings).unwrap();
            let k = lam.sqrt();
            assert_relative_eq!(s.w, -(2.0 * PI * k).sin() / k, epsilon = 1e-8);
        }
        let s = characteristic(&classical(), 0.5, &settings).unwrap();
        assert_relative_eq!(s.w, 1.3631640347620742, epsilon = 1e-8);
        // at an eigenvalue w vanishes
        let s = characteristic(&classical(), 1.0, &settings).unwrap();
        assert!(s.w.abs() < 1e-9, "w(1) = {}", s.w);
        // lambda = 0 limit: -2 pi
        let s = characteristic(&classical(), 0.0, &settings).unwrap();
        assert_relative_eq!(s.w, -2.0 * PI, epsilon = 1e-8);
    }

    #[test]
    fn characteristic_two_routes_agree() {
        let settings = SolverSettings::default();
        let spec = ProblemSpec {
            transmission: crate::problem::TransmissionMatrix {
                row_a: [0.0, 1.0, 0.0, -1.0],
                row_b: [-2.0, 0.0, 1.0, 0.0],
            },
            potential: crate::problem::Potential::constant(0.3),
            ..classical()
        }
        .validate()
        .unwrap();
        let m = spec.minors();
        for lam in [-2.0, 0.37, 5.5, 24.0] {
            let s = characteristic(&spec, lam, &settings).unwrap();
            assert_relative_eq!(m.r12 * s.w1, m.r34 * s.w2, max_relative = 1e-10);
            assert_relative_eq!(s.w, m.r12 * s.w1);
        }
    }

    #[test]
    fn classical_first_three_eigenvalues() {
        let settings = SolverSettings {
            lambda_min: -1.0,
            lambda_max: 3.0,
            grid_points_per_side: 128,
            quadrature_order: 32,
            ..SolverSettings::default()
        };
        let spectrum = find_eigenvalues(&classical(), &settings).unwrap();
        let lams = spectrum.eigenvalues();
        assert_eq!(lams.len(), 3);
        for (got, want) in lams.iter().zip([0.25, 1.0, 2.25]) {
            assert!((got - want).abs() < 1e-7, "{got} vs {want}");
        }
        assert_eq!(spectrum.shift_eta, 0.0);
    }

    #[test]
    fn window_with_single_eigenvalue() {
        let settings = SolverSettings {
            lambda_min: 5.1,
            lambda_max: 8.9,
            grid_points_per_side: 128,
            quadrature_order: 32,
            ..SolverSettings::default()
        };
        let spectrum = find_eigenvalues(&classical(), &settings).unwrap();
        let lams = spectrum.eigenvalues();
        assert_eq!(lams.len(), 1);
        assert!((lams[0] - 6.25).abs() < 1e-7);
    }

    #[test]
    fn empty_window_is_not_an_error() {
        let settings = SolverSettings {
            lambda_min: -5.0,
            lambda_max: 0.2,
            ..SolverSettings::default()
        };
        let spectrum = find_eigenvalues(&classical(), &settings).unwrap();
        assert!(spectrum.is_empty());
    }

    #[test]
    fn eta_shift_reports_for_zero_eigenvalue() {
        // Neumann ends with continuity: constant eigenfunction at lambda = 0.
        let spec = ProblemSpec {
            angles: crate::problem::BoundaryAngles::new(PI / 2.0, PI / 2.0),
            ..classical()
        };
        let settings = SolverSettings {
            lambda_min: -1.0,
            lambda_max: 2.0,
            grid_points_per_side: 128,
            quadrature_order: 32,
            ..SolverSettings::default()
        };
        let spectrum = find_eigenvalues(&spec, &settings).unwrap();
        assert!(spectrum.shift_eta != 0.0);
        let lams = spectrum.eigenvalues();
        // lambda_n = n^2/4: 0, 0.25, 1.0, 2.25 won't fit window -> 0, 0.25, 1.0
        assert!(lams[0].abs() < 1e-7, "{lams:?}");
        assert!((lams[1] - 0.25).abs() < 1e-7, "{lams:?}");
        assert!((lams[2] - 1.0).abs() < 1e-7, "{lams:?}");
    }

    #[test]
    fn normalization_examples() {
        let settings = SolverSettings::default();
        let grid = Grid::new(&settings);
        let spec = classical();
        // lambda = 1 eigenfunction: +-sin(x+pi)/sqrt(pi)
        let branch = build_phi(&spec, 1.0, &grid, &settings).unwrap();
        let pair = normalize(&spec, &grid, 1, branch).unwrap();
        assert_relative_eq!(pair.norm_constant, PI.sqrt(), epsilon = 1e-7);
        let f = grid.sample(|x| (x + PI).sin() / PI.sqrt());
        let gap = pair.samples.sup_distance(&f);
        let gap_neg = {
            let mut neg = f.clone();
            neg.left.iter_mut().chain(neg.right.iter_mut()).for_each(|v| *v = -*v);
            pair.samples.sup_distance(&neg)
        };
        assert!(gap.min(gap_neg) < 1e-7, "gap={gap} gap_neg={gap_neg}");

        // idempotence: renormalizing gives norm_constant 1
        let again = normalize(&spec, &grid, 1, pair.eigenfunction.clone()).unwrap();
        assert_relative_eq!(again.norm_constant, 1.0, epsilon = 1e-10);

        // homogeneity: scaling input by 7 multiplies norm_constant by 7
        let mut scaled = pair.eigenfunction.clone();
        scaled.scale(7.0);
        let seven = normalize(&spec, &grid, 1, scaled).unwrap();
        assert_relative_eq!(seven.norm_constant, 7.0, epsilon = 1e-9);
        assert!(seven.samples.sup_distance(&again.samples) < 1e-10);
    }

    #[test]
    fn normalize_rejects_zero_branch() {
        let settings = SolverSettings::default();
        let grid = Grid::new(&settings);
        let spec = classical();
        let mut branch = build_phi(&spec, 1.0, &grid, &settings).unwrap();
        branch.scale(0.0);
        assert!(matches!(
            normalize(&spec, &grid, 0, branch),
            Err(SltError::DegenerateEigenfunction { .. })
        ));
    }

    #[test]
    fn inner_product_examples() {
        let settings = SolverSettings::default();
        let grid = Grid::new(&settings);
        let spec = classical();
        let f = grid.sample(|x| (x + PI).sin());
        assert_relative_eq!(
            weighted_inner_product(&f, &f, &spec, &grid).unwrap(),
            PI,
            epsilon = 1e-10
        );
        let z = grid.zeros();
        assert_eq!(weighted_inner_product(&z, &z, &spec, &grid).unwrap(), 0.0);
    }

    #[test]
    fn scan_points_cover_window() {
        let pts = scan_points(-1.0, 4.0);
        assert_eq!(pts[0], -1.0);
        assert_eq!(*pts.last().unwrap(), 4.0);
        assert!(pts.windows(2).all(|w| w[0] < w[1]));
        // in sqrt-space above zero the spacing never exceeds 0.25
        for w in pts.windows(2) {
            if w[0] >= 0.0 {
                assert!(w[1].sqrt() - w[0].sqrt() <= 0.25 + 1e-12);
            }
        }
    }
}
