//! The standard sampling grid and its quadrature.
//!
//! Each side carries a composite Gauss-Legendre rule: the side is split into
//! `max(1, grid_points_per_side / quadrature_order)` equal panels with a
//! `quadrature_order`-point rule on each. The grid nodes are exactly the
//! quadrature nodes plus the side's endpoints, so sampled functions, norms,
//! Fourier coefficients and Parseval sums all share one discrete inner
//! product. The endpoints carry zero quadrature weight; the node at 0 holds
//! the one-sided limit of its side.

use crate::error::{Result, SltError};
use crate::problem::{Side, SolverSettings, X_INTERFACE, X_LEFT, X_RIGHT};

/// Nodes and weights of an n-point Gauss-Legendre rule on [-1, 1].
///
/// Newton iteration on the Legendre recurrence; nodes are symmetric and
/// accurate to machine precision for the orders used here.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi-style initial guess for the i-th root (descending).
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Evaluate P_n(x) and P_n'(x) by the three-term recurrence.
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = (n as f64) * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

/// Standard grid over both sides.
#[derive(Debug, Clone, PartialEq)]
pub struct Grid {
    /// Ascending nodes on [-pi, 0]; first is -pi, last is 0 (left limit).
    pub left: Vec<f64>,
    /// Ascending nodes on [0, pi]; first is 0 (right limit), last is pi.
    pub right: Vec<f64>,
    /// Quadrature weights aligned with `left` (zero at the endpoints).
    left_w: Vec<f64>,
    /// Quadrature weights aligned with `right` (zero at the endpoints).
    right_w: Vec<f64>,
}

impl Grid {
    pub fn new(settings: &SolverSettings) -> Grid {
        let order = settings.quadrature_order.max(2);
        let panels = (settings.grid_points_per_side / order).max(1);
        let (gl_x, gl_w) = gauss_legendre(order);
        let build = |lo: f64, hi: f64| {
            let mut nodes = Vec::with_capacity(panels * order + 2);
            let mut weights = Vec::with_capacity(panels * order + 2);
            nodes.push(lo);
            weights.push(0.0);
            let h = (hi - lo) / panels as f64;
            for p in 0..panels {
                let a = lo + h * p as f64;
                let b = lo + h * (p + 1) as f64;
                let mid = 0.5 * (a + b);
                let half = 0.5 * (b - a);
                for (x, w) in gl_x.iter().zip(&gl_w) {
                    nodes.push(mid + half * x);
                    weights.push(half * w);
                }
            }
            nodes.push(hi);
            weights.push(0.0);
            (nodes, weights)
        };
        let (left, left_w) = build(X_LEFT, X_INTERFACE);
        let (right, right_w) = build(X_INTERFACE, X_RIGHT);
        Grid {
            left,
            right,
            left_w,
            right_w,
        }
    }

    pub fn nodes(&self, side: Side) -> &[f64] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    fn quad_weights(&self, side: Side) -> &[f64] {
        match side {
            Side::Left => &self.left_w,
            Side::Right => &self.right_w,
        }
    }

    /// Quadrature of node-aligned values over one side.
    pub fn integrate(&self, side: Side, values: &[f64]) -> f64 {
        debug_assert_eq!(values.len(), self.nodes(side).len());
        self.quad_weights(side)
            .iter()
            .zip(values)
            .map(|(w, v)| w * v)
            .sum()
    }

    /// Sample a callable on every node (one-sided at the interface).
    pub fn sample<F: Fn(f64) -> f64>(&self, f: F) -> SampledFunction {
        SampledFunction {
            left: self.left.iter().map(|&x| f(x)).collect(),
            right: self.right.iter().map(|&x| f(x)).collect(),
        }
    }

    pub fn zeros(&self) -> SampledFunction {
        SampledFunction {
            left: vec![0.0; self.left.len()],
            right: vec![0.0; self.right.len()],
        }
    }

    /// Check that a sampled function is aligned with this grid.
    pub fn check_aligned(&self, f: &SampledFunction) -> Result<()> {
        if f.left.len() != self.left.len() || f.right.len() != self.right.len() {
            return Err(SltError::Usage(format!(
                "sample grid mismatch: got {}+{} samples, grid has {}+{} nodes",
                f.left.len(),
                f.right.len(),
                self.left.len(),
                self.right.len()
            )));
        }
        Ok(())
    }
}

/// Function samples aligned with a [`Grid`] (one value per node, one-sided
/// limits at the interface).
#[derive(Debug, Clone, PartialEq)]
pub struct SampledFunction {
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl SampledFunction {
    pub fn values(&self, side: Side) -> &[f64] {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    pub fn values_mut(&mut self, side: Side) -> &mut [f64] {
        match side {
            Side::Left => &mut self.left,
            Side::Right => &mut self.right,
        }
    }

    /// Largest absolute sample.
    pub fn sup_norm(&self) -> f64 {
        self.left
            .iter()
            .chain(&self.right)
            .fold(0.0_f64, |m, &v| m.max(v.abs()))
    }

    /// Largest absolute pointwise gap against another sampled function.
    pub fn sup_distance(&self, other: &SampledFunction) -> f64 {
        self.left
            .iter()
            .zip(&other.left)
            .chain(self.right.iter().zip(&other.right))
            .fold(0.0_f64, |m, (a, b)| m.max((a - b).abs()))
    }
}

/// Weighted inner product rho12 * int_left(f g) + rho34 * int_right(f g).
pub fn weighted_dot(grid: &Grid, rho: (f64, f64), f: &SampledFunction, g: &SampledFunction) -> f64 {
    let dot = |side: Side| {
        grid.quad_weights(side)
            .iter()
            .zip(f.values(side))
            .zip(g.values(side))
            .map(|((w, a), b)| w * a * b)
            .sum::<f64>()
    };
    rho.0 * dot(Side::Left) + rho.1 * dot(Side::Right)
}
