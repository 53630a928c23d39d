//! Problem definition: the equation -y'' + q(x) y = lambda y on
//! [-pi, 0) u (0, pi], separated boundary conditions at +-pi and a pair of
//! linear interface conditions coupling the one-sided limits at 0.
//!
//! The interface conditions are encoded by a 2x4 matrix `T` with rows
//! (a1,a2,a3,a4) and (b1,b2,b3,b4); the columns pair with
//! (y'(0-), y(0-), y'(0+), y(0+)):
//!
//! ```text
//! G1(y) = a1 y'(0-) + a2 y(0-) + a3 y'(0+) + a4 y(0+) = 0
//! G2(y) = b1 y'(0-) + b2 y(0-) + b3 y'(0+) + b4 y(0+) = 0
//! G3(y) = cos(alpha) y(-pi) + sin(alpha) y'(-pi)      = 0
//! G4(y) = cos(beta)  y(pi)  + sin(beta)  y'(pi)       = 0
//! ```
//!
//! The 2x2 column minors rho_ij of `T` drive everything downstream: the
//! solvability of the interface transfer requires rho_12 > 0 and rho_34 > 0,
//! and (rho_12, rho_34) are the weights of the inner product that makes the
//! problem self-adjoint.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SltError};

/// Left endpoint of the domain.
pub const X_LEFT: f64 = -std::f64::consts::PI;
/// Interface point where the solution may jump.
pub const X_INTERFACE: f64 = 0.0;
/// Right endpoint of the domain.
pub const X_RIGHT: f64 = std::f64::consts::PI;

/// One of the two subintervals separated by the interface.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// `[-pi, 0)`
    Left,
    /// `(0, pi]`
    Right,
}

impl Side {
    /// Closure of the side as (lo, hi).
    pub fn span(self) -> (f64, f64) {
        match self {
            Side::Left => (X_LEFT, X_INTERFACE),
            Side::Right => (X_INTERFACE, X_RIGHT),
        }
    }

    /// Side owning the point `x`; points at the interface belong to neither
    /// and are resolved by the caller's one-sided convention.
    pub fn of(x: f64) -> Side {
        if x < 0.0 {
            Side::Left
        } else {
            Side::Right
        }
    }
}

/// 2x4 interface coupling matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransmissionMatrix {
    pub row_a: [f64; 4],
    pub row_b: [f64; 4],
}

/// The six 2x2 column minors of a transmission matrix, precomputed.
#[derive(Debug, Clone, Copy)]
pub struct Minors {
    pub r12: f64,
    pub r13: f64,
    pub r14: f64,
    pub r23: f64,
    pub r24: f64,
    pub r34: f64,
}

impl TransmissionMatrix {
    /// Identity coupling: y and y' continuous across the interface.
    pub fn continuity() -> Self {
        TransmissionMatrix {
            row_a: [0.0, 1.0, 0.0, -1.0],
            row_b: [-1.0, 0.0, 1.0, 0.0],
        }
    }

    /// Point interaction of strength `gamma`: y continuous,
    /// y'(0+) = y'(0-) + gamma y(0-).
    pub fn delta_interaction(gamma: f64) -> Self {
        TransmissionMatrix {
            row_a: [0.0, 1.0, 0.0, -1.0],
            row_b: [-1.0, -gamma, 1.0, 0.0],
        }
    }

    /// 2x2 minor of columns (i, j), 1-based: a_i b_j - a_j b_i.
    pub fn minor(&self, i: usize, j: usize) -> Result<f64> {
        if !(1..=4).contains(&i) || !(1..=4).contains(&j) || i >= j {
            return Err(SltError::Usage(format!(
                "minor indices must satisfy 1 <= i < j <= 4, got ({i}, {j})"
            )));
        }
        Ok(self.row_a[i - 1] * self.row_b[j - 1] - self.row_a[j - 1] * self.row_b[i - 1])
    }

    /// All six minors at once.
    pub fn minors(&self) -> Minors {
        let m = |i: usize, j: usize| self.row_a[i] * self.row_b[j] - self.row_a[j] * self.row_b[i];
        Minors {
            r12: m(0, 1),
            r13: m(0, 2),
            r14: m(0, 3),
            r23: m(1, 2),
            r24: m(1, 3),
            r34: m(2, 3),
        }
    }

    fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        for (name, row) in [("row_a", &self.row_a), ("row_b", &self.row_b)] {
            if row.iter().any(|v| !v.is_finite()) {
                out.push(format!("transmission {name} contains a non-finite entry"));
            }
        }
        if out.is_empty() {
            let m = self.minors();
            if m.r12 <= 0.0 {
                out.push(format!("transmission minor rho_12 = {} must be > 0", m.r12));
            }
            if m.r34 <= 0.0 {
                out.push(format!("transmission minor rho_34 = {} must be > 0", m.r34));
            }
        }
        out
    }
}

/// Boundary-condition angles, stored reduced to [0, pi).
///
/// The conditions only see (cos, sin) up to a common sign, so reduction
/// modulo pi does not change the problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BoundaryAngles {
    pub alpha: f64,
    pub beta: f64,
}

impl BoundaryAngles {
    pub fn new(alpha: f64, beta: f64) -> Self {
        BoundaryAngles {
            alpha: reduce_angle(alpha),
            beta: reduce_angle(beta),
        }
    }

    fn diagnostics(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.alpha.is_finite() {
            out.push("alpha is not finite".into());
        }
        if !self.beta.is_finite() {
            out.push("beta is not finite".into());
        }
        out
    }
}

fn reduce_angle(a: f64) -> f64 {
    if !a.is_finite() {
        return a;
    }
    let r = a.rem_euclid(std::f64::consts::PI);
    // rem_euclid can return pi itself through rounding.
    if r >= std::f64::consts::PI {
        0.0
    } else {
        r
    }
}

/// Potential data for one side of the interface.
#[derive(Debug, Clone, PartialEq)]
pub enum SidePotential {
    Constant(f64),
    /// Ascending coefficients: c0 + c1 x + c2 x^2 + ...
    Polynomial(Vec<f64>),
    /// Tabulated samples with monotone-cubic interpolation, exact at nodes.
    Table(MonotoneCubic),
}

impl SidePotential {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            SidePotential::Constant(c) => *c,
            SidePotential::Polynomial(c) => c.iter().rev().fold(0.0, |acc, &ck| acc * x + ck),
            SidePotential::Table(t) => t.eval(x),
        }
    }

    fn diagnostics(&self, side: Side, label: &str) -> Vec<String> {
        let mut out = Vec::new();
        match self {
            SidePotential::Constant(c) => {
                if !c.is_finite() {
                    out.push(format!("potential.{label}: constant is not finite"));
                }
            }
            SidePotential::Polynomial(c) => {
                if c.is_empty() {
                    out.push(format!("potential.{label}: empty coefficient list"));
                }
                if c.iter().any(|v| !v.is_finite()) {
                    out.push(format!("potential.{label}: non-finite coefficient"));
                }
            }
            SidePotential::Table(t) => {
                let (lo, hi) = side.span();
                out.extend(t.diagnostics(label, lo, hi));
            }
        }
        out
    }
}

/// Piecewise potential; the two sides are independent and the interface value
/// is always taken from the side's own data (one-sided limits q(0-), q(0+)).
#[derive(Debug, Clone, PartialEq)]
pub struct Potential {
    pub left: SidePotential,
    pub right: SidePotential,
}

impl Potential {
    pub fn constant(q: f64) -> Self {
        Potential {
            left: SidePotential::Constant(q),
            right: SidePotential::Constant(q),
        }
    }

    pub fn zero() -> Self {
        Self::constant(0.0)
    }

    pub fn side(&self, side: Side) -> &SidePotential {
        match side {
            Side::Left => &self.left,
            Side::Right => &self.right,
        }
    }

    /// Evaluate with explicit side selection (side-aware at x = 0).
    pub fn eval(&self, side: Side, x: f64) -> f64 {
        self.side(side).eval(x)
    }
}

/// Shape-preserving cubic interpolant (Fritsch-Carlson slopes).
///
/// Interpolation is exact at the nodes; between nodes the usual cubic
/// Hermite form is used with monotonicity-limited slopes.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotoneCubic {
    x: Vec<f64>,
    y: Vec<f64>,
    slope: Vec<f64>,
}

impl MonotoneCubic {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(SltError::Usage(format!(
                "table arity mismatch: {} abscissae vs {} values",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(SltError::Usage("table needs at least two nodes".into()));
        }
        if x.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(SltError::Usage(
                "table abscissae must be strictly increasing".into(),
            ));
        }
        let slope = fritsch_carlson_slopes(&x, &y);
        Ok(MonotoneCubic { x, y, slope })
    }

    pub fn nodes(&self) -> (&[f64], &[f64]) {
        (&self.x, &self.y)
    }

    pub fn eval(&self, xq: f64) -> f64 {
        let n = self.x.len();
        // Clamp outside the table; validation guarantees coverage of the side.
        if xq <= self.x[0] {
            return self.y[0] + self.slope[0] * (xq - self.x[0]);
        }
        if xq >= self.x[n - 1] {
            return self.y[n - 1] + self.slope[n - 1] * (xq - self.x[n - 1]);
        }
        let i = match self.x.binary_search_by(|v| v.partial_cmp(&xq).unwrap()) {
            Ok(i) => return self.y[i],
            Err(i) => i - 1,
        };
        let h = self.x[i + 1] - self.x[i];
        let t = (xq - self.x[i]) / h;
        let (y0, y1) = (self.y[i], self.y[i + 1]);
        let (m0, m1) = (self.slope[i] * h, self.slope[i + 1] * h);
        let t2 = t * t;
        let t3 = t2 * t;
        y0 * (2.0 * t3 - 3.0 * t2 + 1.0)
            + m0 * (t3 - 2.0 * t2 + t)
            + y1 * (-2.0 * t3 + 3.0 * t2)
            + m1 * (t3 - t2)
    }

    fn diagnostics(&self, label: &str, lo: f64, hi: f64) -> Vec<String> {
        let mut out = Vec::new();
        if self.x.iter().chain(self.y.iter()).any(|v| !v.is_finite()) {
            out.push(format!("potential.{label}: non-finite table entry"));
        }
        let eps = 1e-12;
        if self.x[0] > lo + eps || self.x[self.x.len() - 1] < hi - eps {
            out.push(format!(
                "potential.{label}: table [{}, {}] does not cover the side [{lo}, {hi}]",
                self.x[0],
                self.x[self.x.len() - 1]
            ));
        }
        out
    }
}

fn fritsch_carlson_slopes(x: &[f64], y: &[f64]) -> Vec<f64> {
    let n = x.len();
    let h: Vec<f64> = x.windows(2).map(|w| w[1] - w[0]).collect();
    let d: Vec<f64> = (0..n - 1).map(|i| (y[i + 1] - y[i]) / h[i]).collect();
    let mut m = vec![0.0; n];
    m[0] = d[0];
    m[n - 1] = d[n - 2];
    for i in 1..n - 1 {
        if d[i - 1] * d[i] <= 0.0 {
            m[i] = 0.0;
        } else {
            // Weighted harmonic mean of adjacent secants.
            let w1 = 2.0 * h[i] + h[i - 1];
            let w2 = h[i] + 2.0 * h[i - 1];
            m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
        }
    }
    // Limit the one-sided endpoint slopes.
    for (i, di) in [(0usize, 0usize), (n - 1, n - 2)] {
        if m[i] * d[di] < 0.0 {
            m[i] = 0.0;
        } else if d[di] != 0.0 && (m[i] / d[di]).abs() > 3.0 {
            m[i] = 3.0 * d[di];
        }
    }
    m
}

/// Full problem instance. Endpoints are fixed at +-pi, the interface at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct ProblemSpec {
    pub potential: Potential,
    pub angles: BoundaryAngles,
    pub transmission: TransmissionMatrix,
}

impl ProblemSpec {
    /// Validate every type invariant; on rejection lists all violations.
    pub fn validate(self) -> Result<ProblemSpec> {
        let mut diags = Vec::new();
        diags.extend(self.angles.diagnostics());
        diags.extend(self.transmission.diagnostics());
        diags.extend(self.potential.left.diagnostics(Side::Left, "left"));
        diags.extend(self.potential.right.diagnostics(Side::Right, "right"));
        if diags.is_empty() {
            Ok(self)
        } else {
            Err(SltError::InvalidSpec(diags))
        }
    }

    /// Precomputed transmission minors.
    pub fn minors(&self) -> Minors {
        self.transmission.minors()
    }

    /// Inner-product weights (rho_12, rho_34).
    pub fn weights(&self) -> (f64, f64) {
        let m = self.minors();
        (m.r12, m.r34)
    }

    /// The classical problem: Dirichlet ends, zero potential, continuity.
    pub fn classical_dirichlet() -> ProblemSpec {
        ProblemSpec {
            potential: Potential::zero(),
            angles: BoundaryAngles::new(0.0, 0.0),
            transmission: TransmissionMatrix::continuity(),
        }
    }
}

/// Numerical knobs; defaults mirror the config-file defaults.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SolverSettings {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub root_tol: f64,
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub max_eigenvalues: usize,
    pub grid_points_per_side: usize,
    pub quadrature_order: usize,
    pub fixed_step: bool,
}

impl Default for SolverSettings {
    fn default() -> Self {
        SolverSettings {
            abs_tol: 1e-10,
            rel_tol: 1e-10,
            root_tol: 1e-9,
            lambda_min: -10.0,
            lambda_max: 400.0,
            max_eigenvalues: 50,
            grid_points_per_side: 512,
            quadrature_order: 64,
            fixed_step: false,
        }
    }
}

impl SolverSettings {
    pub fn validate(&self) -> Result<()> {
        let mut diags = Vec::new();
        for (name, v) in [
            ("abs_tol", self.abs_tol),
            ("rel_tol", self.rel_tol),
            ("root_tol", self.root_tol),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                diags.push(format!("solver.{name} must be a positive finite number"));
            }
        }
        if !(self.lambda_min < self.lambda_max) {
            diags.push(format!(
                "solver.lambda_min ({}) must be below lambda_max ({})",
                self.lambda_min, self.lambda_max
            ));
        }
        if self.max_eigenvalues < 2 {
            diags.push("solver.max_eigenvalues must be >= 2".into());
        }
        if self.grid_points_per_side < 2 {
            diags.push("solver.grid_points_per_side must be >= 2".into());
        }
        if self.quadrature_order < 2 {
            diags.push("solver.quadrature_order must be >= 2".into());
        }
        if diags.is_empty() {
            Ok(())
        } else {
            Err(SltError::InvalidSpec(diags))
        }
    }
}
