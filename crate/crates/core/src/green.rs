//! Green's function, resolvent application, spectral kernel series and the
//! trace identity.
//!
//! At a non-eigenvalue lambda the kernel is
//!
//! ```text
//! G(x, s; lambda) = phi(min(x,s)) chi(max(x,s)) / w(lambda)
//! ```
//!
//! and the resolvent y = R_lambda f applies the weighted integral operator
//! rho12 int_left G f + rho34 int_right G f, which solves
//! y'' + (lambda - q) y = f with all four boundary/interface conditions.
//! The diagonal trace of G at a non-eigenvalue t equals the partial sums of
//! 1/(t - lambda_n) in the limit; `carleman_report` computes both sides.

use crate::error::{Result, SltError};
use crate::grid::{Grid, SampledFunction};
use crate::problem::{ProblemSpec, Side, SolverSettings, X_LEFT, X_RIGHT};
use crate::spectral::{
    build_chi, build_phi, characteristic_from_states, SolutionBranch, Spectrum,
};

/// Cached fundamental solutions and characteristic value at a fixed
/// non-eigenvalue lambda, ready for pointwise kernel evaluation.
#[derive(Debug, Clone)]
pub struct GreenEvaluator {
    pub lambda: f64,
    pub phi: SolutionBranch,
    pub chi: SolutionBranch,
    pub w: f64,
}

impl GreenEvaluator {
    pub fn new(
        spec: &ProblemSpec,
        lambda: f64,
        grid: &Grid,
        settings: &SolverSettings,
    ) -> Result<GreenEvaluator> {
        let phi = build_phi(spec, lambda, grid, settings)?;
        let chi = build_chi(spec, lambda, grid, settings)?;
        let (phi1, phi2) = phi.interface_states();
        let (chi1, chi2) = chi.interface_states();
        let sample =
            characteristic_from_states(&spec.minors(), lambda, phi1, phi2, chi1, chi2)?;
        if sample.w.abs() <= settings.root_tol * sample.scale.max(1.0) {
            return Err(SltError::NearSingular {
                lambda,
                nearest: None,
            });
        }
        Ok(GreenEvaluator {
            lambda,
            phi,
            chi,
            w: sample.w,
        })
    }

    /// Pointwise kernel value; symmetric in (x, s), undefined on the
    /// interface.
    pub fn eval(&self, spec: &ProblemSpec, x: f64, s: f64) -> Result<f64> {
        for v in [x, s] {
            if v == 0.0 {
                return Err(SltError::InterfacePoint);
            }
            if !(X_LEFT..=X_RIGHT).contains(&v) {
                return Err(SltError::Usage(format!(
                    "kernel argument {v} outside [-pi, pi]"
                )));
            }
        }
        let (lo, hi) = (x.min(s), x.max(s));
        let p = self.phi.eval(spec, lo)?.y;
        let c = self.chi.eval(spec, hi)?.y;
        Ok(p * c / self.w)
    }
}

/// Pointwise Green kernel at a fixed lambda (convenience wrapper).
pub fn green_eval(g: &GreenEvaluator, spec: &ProblemSpec, x: f64, s: f64) -> Result<f64> {
    g.eval(spec, x, s)
}

/// Resolvent output: samples of y and y', plus diagnostics.
#[derive(Debug, Clone)]
pub struct ResolventResult {
    pub lambda: f64,
    pub input: SampledFunction,
    pub output: SampledFunction,
    pub output_derivative: SampledFunction,
    /// Pointwise residual of y'' + (lambda - q) y - f, finite-difference y''.
    pub residual: SampledFunction,
    /// Max |residual| over interior grid nodes.
    pub residual_norm: f64,
    /// The four boundary/interface condition values G1..G4 at the output.
    pub condition_residuals: [f64; 4],
}

// 4-point Gauss-Lobatto rule on [-1, 1]; the endpoint nodes let each cell
// reuse exact trajectory states, interior nodes come from dense evaluation.
const LOBATTO_X: [f64; 4] = [-1.0, -0.447213595499957939, 0.447213595499957939, 1.0];
const LOBATTO_W: [f64; 4] = [1.0 / 6.0, 5.0 / 6.0, 5.0 / 6.0, 1.0 / 6.0];

/// Cubic Lagrange interpolation of node-aligned samples at a point inside
/// cell `i` (between xs[i] and xs[i+1]).
fn interp_samples(xs: &[f64], fs: &[f64], i: usize, x: f64) -> f64 {
    let n = xs.len();
    let j0 = i.saturating_sub(1).min(n.saturating_sub(4));
    let mut acc = 0.0;
    for a in j0..j0 + 4 {
        let mut l = 1.0;
        for b in j0..j0 + 4 {
            if a != b {
                l *= (x - xs[b]) / (xs[a] - xs[b]);
            }
        }
        acc += l * fs[a];
    }
    acc
}

/// Per-cell integral of (branch value) * (interpolated f) over
/// [xs[i], xs[i+1]].
fn cell_integral(
    branch: &SolutionBranch,
    spec: &ProblemSpec,
    side: Side,
    xs: &[f64],
    branch_vals: &[f64],
    fs: &[f64],
    i: usize,
) -> Result<f64> {
    let (a, b) = (xs[i], xs[i + 1]);
    let mid = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut acc = 0.0;
    for (t, w) in LOBATTO_X.iter().zip(&LOBATTO_W) {
        let x = mid + half * t;
        let (bv, fv) = if *t == -1.0 {
            (branch_vals[i], fs[i])
        } else if *t == 1.0 {
            (branch_vals[i + 1], fs[i + 1])
        } else {
            let traj = match side {
                Side::Left => &branch.left,
                Side::Right => &branch.right,
            };
            let bv = traj.eval(x, spec.potential.side(side))?.y;
            (bv, interp_samples(xs, fs, i, x))
        };
        acc += w * bv * fv;
    }
    Ok(acc * half)
}

/// Fornberg weights for the m-th derivative at `z` from nodes `xs`.
fn fd_weights(z: f64, xs: &[f64], m: usize) -> Vec<f64> {
    let n = xs.len();
    let mut c = vec![vec![0.0; m + 1]; n];
    c[0][0] = 1.0;
    let mut c1 = 1.0;
    let mut c4 = xs[0] - z;
    for i in 1..n {
        let mn = i.min(m);
        let mut c2 = 1.0;
        let c5 = c4;
        c4 = xs[i] - z;
        for j in 0..i {
            let c3 = xs[i] - xs[j];
            c2 *= c3;
            if j == i - 1 {
                for k in (1..=mn).rev() {
                    c[i][k] = c1 * (k as f64 * c[i - 1][k - 1] - c5 * c[i - 1][k]) / c2;
                }
                c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
            }
            for k in (1..=mn).rev() {
                c[j][k] = (c4 * c[j][k] - k as f64 * c[j][k - 1]) / c3;
            }
            c[j][0] = c4 * c[j][0] / c3;
        }
        c1 = c2;
    }
    c.iter().map(|row| row[m]).collect()
}

/// Second derivative of node-aligned samples by a sliding 5-point stencil.
fn second_derivative(xs: &[f64], ys: &[f64]) -> Vec<f64> {
    let n = xs.len();
    let mut out = vec![0.0; n];
    if n < 5 {
        return out;
    }
    for i in 0..n {
        let j0 = i.saturating_sub(2).min(n - 5);
        let w = fd_weights(xs[i], &xs[j0..j0 + 5], 2);
        out[i] = w.iter().zip(&ys[j0..j0 + 5]).map(|(w, y)| w * y).sum();
    }
    out
}

/// Apply the resolvent at a non-eigenvalue lambda to a sampled function.
pub fn apply_resolvent(
    spec: &ProblemSpec,
    lambda: f64,
    f: &SampledFunction,
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<ResolventResult> {
    grid.check_aligned(f)?;
    let green = GreenEvaluator::new(spec, lambda, grid, settings)?;
    let (rho12, rho34) = spec.weights();

    let phi_v = green.phi.sampled(grid)?;
    let phi_d = green.phi.sampled_derivative(grid)?;
    let chi_v = green.chi.sampled(grid)?;
    let chi_d = green.chi.sampled_derivative(grid)?;

    let (nl, nr) = (grid.left.len(), grid.right.len());

    // Cumulative integral of phi * f from the left end, weighted per side.
    let mut acc_phi = vec![0.0; nl + nr];
    for i in 0..nl - 1 {
        let cell = cell_integral(
            &green.phi,
            spec,
            Side::Left,
            &grid.left,
            &phi_v.left,
            &f.left,
            i,
        )?;
        acc_phi[i + 1] = acc_phi[i] + rho12 * cell;
    }
    acc_phi[nl] = acc_phi[nl - 1];
    for i in 0..nr - 1 {
        let cell = cell_integral(
            &green.phi,
            spec,
            Side::Right,
            &grid.right,
            &phi_v.right,
            &f.right,
            i,
        )?;
        acc_phi[nl + i + 1] = acc_phi[nl + i] + rho34 * cell;
    }

    // Cumulative integral of chi * f from the right end.
    let mut acc_chi = vec![0.0; nl + nr];
    for i in (0..nr - 1).rev() {
        let cell = cell_integral(
            &green.chi,
            spec,
            Side::Right,
            &grid.right,
            &chi_v.right,
            &f.right,
            i,
        )?;
        acc_chi[nl + i] = acc_chi[nl + i + 1] + rho34 * cell;
    }
    acc_chi[nl - 1] = acc_chi[nl];
    for i in (0..nl - 1).rev() {
        let cell = cell_integral(
            &green.chi,
            spec,
            Side::Left,
            &grid.left,
            &chi_v.left,
            &f.left,
            i,
        )?;
        acc_chi[i] = acc_chi[i + 1] + rho12 * cell;
    }

    let mut output = grid.zeros();
    let mut deriv = grid.zeros();
    for i in 0..nl {
        output.left[i] = (chi_v.left[i] * acc_phi[i] + phi_v.left[i] * acc_chi[i]) / green.w;
        deriv.left[i] = (chi_d.left[i] * acc_phi[i] + phi_d.left[i] * acc_chi[i]) / green.w;
    }
    for i in 0..nr {
        output.right[i] =
            (chi_v.right[i] * acc_phi[nl + i] + phi_v.right[i] * acc_chi[nl + i]) / green.w;
        deriv.right[i] =
            (chi_d.right[i] * acc_phi[nl + i] + phi_d.right[i] * acc_chi[nl + i]) / green.w;
    }

    // Honest residual: finite-difference y'' against the target equation.
    let mut residual = grid.zeros();
    let mut residual_norm = 0.0_f64;
    for (side, xs) in [(Side::Left, &grid.left), (Side::Right, &grid.right)] {
        let ys = output.values(side);
        let d2 = second_derivative(xs, ys);
        let n = xs.len();
        for i in 0..n {
            let q = spec.potential.eval(side, xs[i]);
            let r = d2[i] + (lambda - q) * ys[i] - f.values(side)[i];
            residual.values_mut(side)[i] = r;
            if i >= 2 && i + 2 < n {
                residual_norm = residual_norm.max(r.abs());
            }
        }
    }

    let a = spec.transmission.row_a;
    let b = spec.transmission.row_b;
    let (y0l, d0l) = (output.left[nl - 1], deriv.left[nl - 1]);
    let (y0r, d0r) = (output.right[0], deriv.right[0]);
    let condition_residuals = [
        a[0] * d0l + a[1] * y0l + a[2] * d0r + a[3] * y0r,
        b[0] * d0l + b[1] * y0l + b[2] * d0r + b[3] * y0r,
        spec.angles.alpha.cos() * output.left[0] + spec.angles.alpha.sin() * deriv.left[0],
        spec.angles.beta.cos() * output.right[nr - 1]
            + spec.angles.beta.sin() * deriv.right[nr - 1],
    ];

    Ok(ResolventResult {
        lambda,
        input: f.clone(),
        output,
        output_derivative: deriv,
        residual,
        residual_norm,
        condition_residuals,
    })
}

fn guard_near_eigenvalue(spectrum: &Spectrum, t: f64, root_tol: f64) -> Result<()> {
    if let Some(p) = spectrum
        .pairs
        .iter()
        .min_by(|a, b| (a.lambda - t).abs().partial_cmp(&(b.lambda - t).abs()).unwrap())
    {
        if (p.lambda - t).abs() <= root_tol {
            return Err(SltError::NearSingular {
                lambda: t,
                nearest: Some(p.lambda),
            });
        }
    }
    Ok(())
}

/// Partial sum of the bilinear eigenfunction series for the kernel,
/// sum_n phi_n(x) phi_n(s) / (t - lambda_n).
pub fn kernel_series(
    spec: &ProblemSpec,
    spectrum: &Spectrum,
    t: f64,
    n_terms: usize,
    x: f64,
    s: f64,
) -> Result<f64> {
    if n_terms > spectrum.len() {
        return Err(SltError::Usage(format!(
            "kernel series needs {n_terms} terms but only {} eigenpairs are available",
            spectrum.len()
        )));
    }
    if x == 0.0 || s == 0.0 {
        return Err(SltError::InterfacePoint);
    }
    guard_near_eigenvalue(spectrum, t, f64::EPSILON.sqrt())?;
    let mut acc = 0.0;
    for pair in &spectrum.pairs[..n_terms] {
        let px = pair.eigenfunction.eval(spec, x)?.y;
        let ps = pair.eigenfunction.eval(spec, s)?.y;
        acc += px * ps / (t - pair.lambda);
    }
    Ok(acc)
}

/// Both sides of the trace identity at a non-eigenvalue t.
#[derive(Debug, Clone)]
pub struct CarlemanReport {
    pub t: f64,
    /// Weighted integral of the diagonal kernel G(x, x; t).
    pub lhs: f64,
    /// Partial sum over the first n_terms eigenvalues of 1/(t - lambda_n).
    pub rhs_partial: f64,
    pub n_terms: usize,
    /// (lambda_n, N(lambda_n)) pairs: the eigenvalue counting function
    /// sampled at the eigenvalues used in the sum.
    pub counting_function: Vec<(f64, usize)>,
}

/// Compute the trace identity report: diagonal-kernel integral vs the
/// eigenvalue sum truncated at n_terms.
pub fn carleman_report(
    spec: &ProblemSpec,
    spectrum: &Spectrum,
    t: f64,
    n_terms: usize,
    grid: &Grid,
    settings: &SolverSettings,
) -> Result<CarlemanReport> {
    if n_terms > spectrum.len() {
        return Err(SltError::Usage(format!(
            "carleman sum needs {n_terms} terms but only {} eigenpairs are available",
            spectrum.len()
        )));
    }
    guard_near_eigenvalue(spectrum, t, settings.root_tol)?;
    let green = GreenEvaluator::new(spec, t, grid, settings)?;
    let phi_v = green.phi.sampled(grid)?;
    let chi_v = green.chi.sampled(grid)?;
    let (rho12, rho34) = spec.weights();
    // Interior quadrature nodes only (endpoints and the interface carry
    // zero weight), matching the kernel's domain of definition.
    let diag_left: Vec<f64> = phi_v
        .left
        .iter()
        .zip(&chi_v.left)
        .map(|(p, c)| p * c / green.w)
        .collect();
    let diag_right: Vec<f64> = phi_v
        .right
        .iter()
        .zip(&chi_v.right)
        .map(|(p, c)| p * c / green.w)
        .collect();
    let lhs =
        rho12 * grid.integrate(Side::Left, &diag_left) + rho34 * grid.integrate(Side::Right, &diag_right);

    let rhs_partial: f64 = spectrum.pairs[..n_terms]
        .iter()
        .map(|p| 1.0 / (t - p.lambda))
        .sum();
    let counting_function = spectrum.pairs[..n_terms]
        .iter()
        .map(|p| (p.lambda, spectrum.counting_function(p.lambda)))
        .collect();

    Ok(CarlemanReport {
        t,
        lhs,
        rhs_partial,
        n_terms,
        counting_function,
    })
}
