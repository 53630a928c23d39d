//! Eigenfunction expansions: Fourier coefficients in the computed basis,
//! series reconstruction, the Parseval balance and the spectral form of the
//! resolvent.
//!
//! All integrals reuse the grid's quadrature, i.e. exactly the inner product
//! under which the eigenfunctions were normalized, so orthonormality and the
//! Parseval sum see one consistent discretization.

use rayon::prelude::*;

use crate::error::{Result, SltError};
use crate::green::apply_resolvent;
use crate::grid::{weighted_dot, Grid, SampledFunction};
use crate::problem::{ProblemSpec, SolverSettings};
use crate::spectral::Spectrum;

/// Result of a truncated expansion of one function.
#[derive(Debug, Clone)]
pub struct ExpansionResult {
    pub coefficients: Vec<f64>,
    pub n_terms: usize,
    /// Max reconstruction error on the grid.
    pub sup_error: f64,
    /// Weighted norm^2 of f minus the coefficient sum of squares;
    /// nonnegative up to quadrature tolerance.
    pub parseval_gap: f64,
    /// Weighted norm^2 of f (reported alongside the gap).
    pub norm_sq: f64,
}

fn check_terms(spectrum: &Spectrum, n_terms: usize) -> Result<()> {
    if n_terms > spectrum.len() {
        return Err(SltError::Usage(format!(
            "requested {n_terms} terms but only {} eigenpairs are available",
            spectrum.len()
        )));
    }
    Ok(())
}

/// Fourier coefficients c_n = <f, phi_n>_w for n = 0..n_terms-1.
pub fn fourier_coefficients(
    f: &SampledFunction,
    spectrum: &Spectrum,
    spec: &ProblemSpec,
    grid: &Grid,
    n_terms: usize,
) -> Result<Vec<f64>> {
    grid.check_aligned(f)?;
    check_terms(spectrum, n_terms)?;
    let rho = spec.weights();
    Ok(spectrum.pairs[..n_terms]
        .par_iter()
        .map(|p| weighted_dot(grid, rho, f, &p.samples))
        .collect())
}

/// Evaluate sum_n c_n phi_n on the standard grid.
pub fn evaluate_series(
    coefficients: &[f64],
    spectrum: &Spectrum,
    grid: &Grid,
) -> Result<SampledFunction> {
    check_terms(spectrum, coefficients.len())?;
    let mut out = grid.zeros();
    for (c, p) in coefficients.iter().zip(&spectrum.pairs) {
        for (o, v) in out.left.iter_mut().zip(&p.samples.left) {
            *o += c * v;
        }
        for (o, v) in out.right.iter_mut().zip(&p.samples.right) {
            *o += c * v;
        }
    }
    Ok(out)
}

/// Expand f, reconstruct it, and report the Parseval balance.
pub fn parseval_check(
    f: &SampledFunction,
    spectrum: &Spectrum,
    spec: &ProblemSpec,
    grid: &Grid,
    n_terms: usize,
) -> Result<ExpansionResult> {
    let coefficients = fourier_coefficients(f, spectrum, spec, grid, n_terms)?;
    let reconstruction = evaluate_series(&coefficients, spectrum, grid)?;
    let sup_error = f.sup_distance(&reconstruction);
    let norm_sq = weighted_dot(grid, spec.weights(), f, f);
    let sum_sq: f64 = coefficients.iter().map(|c| c * c).sum();
    Ok(ExpansionResult {
        coefficients,
        n_terms,
        sup_error,
        parseval_gap: norm_sq - sum_sq,
        norm_sq,
    })
}

/// Compare the spectral form of the resolvent, sum c_n phi_n / (lambda -
/// lambda_n), against the quadrature resolvent; returns the max pointwise
/// gap on the grid.
pub fn resolvent_spectral_check(
    f: &SampledFunction,
    spectrum: &Spectrum,
    spec: &ProblemSpec,
    lambda: f64,
    grid: &Grid,
    settings: &SolverSettings,
    n_terms: usize,
) -> Result<f64> {
    check_terms(spectrum, n_terms)?;
    let coefficients = fourier_coefficients(f, spectrum, spec, grid, n_terms)?;
    let scaled: Vec<f64> = coefficients
        .iter()
        .zip(&spectrum.pairs)
        .map(|(c, p)| {
            if (lambda - p.lambda).abs() <= settings.root_tol {
                Err(SltError::NearSingular {
                    lambda,
                    nearest: Some(p.lambda),
                })
            } else {
                Ok(c / (lambda - p.lambda))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let series = evaluate_series(&scaled, spectrum, grid)?;
    let direct = apply_resolvent(spec, lambda, f, grid, settings)?;
    Ok(series.sup_distance(&direct.output))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::SolverSettings;
    use crate::spectral::find_eigenvalues;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn setup(lambda_max: f64) -> (ProblemSpec, SolverSettings, Grid, Spectrum) {
        let spec = ProblemSpec::classical_dirichlet();
        let settings = SolverSettings {
            lambda_min: -1.0,
            lambda_max,
            grid_points_per_side: 256,
            quadrature_order: 32,
            ..SolverSettings::default()
        };
        let grid = Grid::new(&settings);
        let spectrum = find_eigenvalues(&spec, &settings).unwrap();
        (spec, settings, grid, spectrum)
    }

    #[test]
    fn eigenfunction_expands_to_one_hot() {
        let (spec, _, grid, spectrum) = setup(7.0);
        let k = 2;
        let f = spectrum.pairs[k].samples.clone();
        let c = fourier_coefficients(&f, &spectrum, &spec, &grid, spectrum.len()).unwrap();
        for (n, cn) in c.iter().enumerate() {
            let want = if n == k { 1.0 } else { 0.0 };
            assert!((cn - want).abs() < 1e-6, "c[{n}] = {cn}");
        }
        // single-term reconstruction
        let rec = evaluate_series(&c, &spectrum, &grid).unwrap();
        assert!(f.sup_distance(&rec) < 1e-6);
    }

    #[test]
    fn sine_mode_has_single_sqrt_pi_coefficient() {
        let (spec, _, grid, spectrum) = setup(7.0);
        let f = grid.sample(|x| (x + PI).sin());
        let c = fourier_coefficients(&f, &spectrum, &spec, &grid, spectrum.len()).unwrap();
        // lambda = 1 is the second eigenvalue (index 1)
        assert_relative_eq!(c[1].abs(), PI.sqrt(), epsilon = 1e-7);
        for (n, cn) in c.iter().enumerate() {
            if n != 1 {
                assert!(cn.abs() < 1e-7, "c[{n}] = {cn}");
            }
        }
    }

    #[test]
    fn zero_function_expands_to_zeros() {
        let (spec, _, grid, spectrum) = setup(4.0);
        let z = grid.zeros();
        let c = fourier_coefficients(&z, &spectrum, &spec, &grid, spectrum.len()).unwrap();
        assert!(c.iter().all(|v| v.abs() < 1e-14));
        let rec = evaluate_series(&[], &spectrum, &grid).unwrap();
        assert_eq!(rec.sup_norm(), 0.0);
    }

    #[test]
    fn coefficients_are_linear() {
        let (spec, _, grid, spectrum) = setup(4.0);
        let f = grid.sample(|x| (x + PI).sin());
        let g = grid.sample(|x| PI * PI - x * x);
        let (a, b) = (2.5, -0.7);
        let combo = grid.sample(|x| a * (x + PI).sin() + b * (PI * PI - x * x));
        let cf = fourier_coefficients(&f, &spectrum, &spec, &grid, 4).unwrap();
        let cg = fourier_coefficients(&g, &spectrum, &spec, &grid, 4).unwrap();
        let cc = fourier_coefficients(&combo, &spectrum, &spec, &grid, 4).unwrap();
        for i in 0..4 {
            assert_relative_eq!(cc[i], a * cf[i] + b * cg[i], epsilon = 1e-9);
        }
    }

    #[test]
    fn parseval_single_mode_and_zero() {
        let (spec, _, grid, spectrum) = setup(7.0);
        let f = grid.sample(|x| (x + PI).sin());
        let r = parseval_check(&f, &spectrum, &spec, &grid, spectrum.len()).unwrap();
        assert_relative_eq!(r.norm_sq, PI, epsilon = 1e-9);
        assert!(r.parseval_gap.abs() < 1e-8 * r.norm_sq, "gap = {}", r.parseval_gap);
        let z = parseval_check(&grid.zeros(), &spectrum, &spec, &grid, 2).unwrap();
        assert_eq!(z.parseval_gap, 0.0);
    }

    #[test]
    fn bessel_sums_are_monotone_and_bounded() {
        let (spec, _, grid, spectrum) = setup(17.0);
        let f = grid.sample(|x| PI * PI - x * x);
        let norm_sq = weighted_dot(&grid, spec.weights(), &f, &f);
        let mut prev = 0.0;
        for n in 1..=spectrum.len() {
            let c = fourier_coefficients(&f, &spectrum, &spec, &grid, n).unwrap();
            let sum: f64 = c.iter().map(|v| v * v).sum();
            assert!(sum + 1e-10 >= prev);
            assert!(sum <= norm_sq + 1e-9 * norm_sq.max(1.0));
            prev = sum;
        }
    }

    #[test]
    fn spectral_resolvent_matches_single_mode() {
        let (spec, settings, grid, spectrum) = setup(7.0);
        let k = 1;
        let f = spectrum.pairs[k].samples.clone();
        let gap =
            resolvent_spectral_check(&f, &spectrum, &spec, -1.0, &grid, &settings, spectrum.len())
                .unwrap();
        assert!(gap < 1e-6, "gap = {gap}");
        // empty series: the gap equals the sup of the direct output
        let direct = apply_resolvent(&spec, -1.0, &f, &grid, &settings).unwrap();
        let gap0 =
            resolvent_spectral_check(&f, &spectrum, &spec, -1.0, &grid, &settings, 0).unwrap();
        assert_relative_eq!(gap0, direct.output.sup_norm(), epsilon = 1e-12);
    }

    #[test]
    fn near_eigenvalue_lambda_is_rejected() {
        let (spec, settings, grid, spectrum) = setup(4.0);
        let f = grid.sample(|_| 1.0);
        assert!(matches!(
            resolvent_spectral_check(&f, &spectrum, &spec, 1.0, &grid, &settings, spectrum.len()),
            Err(SltError::NearSingular { .. })
        ));
    }
}
