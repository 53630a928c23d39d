//! Config-file ingestion (TOML).
//!
//! Key schema:
//!
//! ```toml
//! [problem]
//! alpha = 0.0                 # radians
//! beta = 0.0                  # radians
//!
//! [problem.transmission]
//! row_a = [0.0, 1.0, 0.0, -1.0]
//! row_b = [-1.0, 0.0, 1.0, 0.0]
//!
//! [problem.potential]
//! kind = "constant"           # "constant" | "polynomial" | "table"
//! left = 0.0                  # scalar | ascending coeffs | { x = [...], q = [...] }
//! right = 0.0
//!
//! [solver]                    # optional, all keys defaulted
//! abs_tol = 1e-10
//! rel_tol = 1e-10
//! root_tol = 1e-9
//! lambda_min = -10.0
//! lambda_max = 400.0
//! max_eigenvalues = 50
//! grid_points_per_side = 512
//! quadrature_order = 64
//! fixed_step = false
//! ```
//!
//! Parsing is round-trip stable: serializing a parsed spec and re-parsing it
//! yields an identical spec.

use serde::{Deserialize, Serialize};

use crate::error::{Result, SltError};
use crate::problem::{
    BoundaryAngles, MonotoneCubic, Potential, ProblemSpec, SidePotential, SolverSettings,
    TransmissionMatrix,
};

#[derive(Debug, Serialize, Deserialize)]
struct ConfigDoc {
    problem: ProblemSection,
    #[serde(default)]
    solver: SolverSettings,
}

#[derive(Debug, Serialize, Deserialize)]
struct ProblemSection {
    alpha: f64,
    beta: f64,
    transmission: TransmissionMatrix,
    potential: PotentialSection,
}

#[derive(Debug, Serialize, Deserialize)]
struct PotentialSection {
    kind: String,
    left: PotentialData,
    right: PotentialData,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(untagged)]
enum PotentialData {
    Scalar(f64),
    Coefficients(Vec<f64>),
    Table { x: Vec<f64>, q: Vec<f64> },
}

fn side_potential(kind: &str, data: &PotentialData, key: &str) -> Result<SidePotential> {
    match (kind, data) {
        ("constant", PotentialData::Scalar(v)) => Ok(SidePotential::Constant(*v)),
        ("polynomial", PotentialData::Coefficients(c)) => Ok(SidePotential::Polynomial(c.clone())),
        ("table", PotentialData::Table { x, q }) => {
            Ok(SidePotential::Table(MonotoneCubic::new(x.clone(), q.clone())?))
        }
        ("constant" | "polynomial" | "table", _) => Err(SltError::Config(format!(
            "problem.potential.{key} does not match kind \"{kind}\""
        ))),
        _ => Err(SltError::Config(format!(
            "unknown potential kind \"{kind}\" (expected \"constant\", \"polynomial\" or \"table\")"
        ))),
    }
}

fn potential_data(p: &SidePotential) -> PotentialData {
    match p {
        SidePotential::Constant(v) => PotentialData::Scalar(*v),
        SidePotential::Polynomial(c) => PotentialData::Coefficients(c.clone()),
        SidePotential::Table(t) => {
            let (x, q) = t.nodes();
            PotentialData::Table {
                x: x.to_vec(),
                q: q.to_vec(),
            }
        }
    }
}

fn potential_kind(p: &Potential) -> Result<String> {
    let kind_of = |s: &SidePotential| match s {
        SidePotential::Constant(_) => "constant",
        SidePotential::Polynomial(_) => "polynomial",
        SidePotential::Table(_) => "table",
    };
    let (kl, kr) = (kind_of(&p.left), kind_of(&p.right));
    if kl != kr {
        return Err(SltError::Config(format!(
            "potential sides have mixed kinds ({kl} vs {kr}); the config schema carries one kind"
        )));
    }
    Ok(kl.to_string())
}

/// Parse a config document into a validated problem and solver settings.
pub fn parse_config(text: &str) -> Result<(ProblemSpec, SolverSettings)> {
    let doc: ConfigDoc =
        toml::from_str(text).map_err(|e| SltError::Config(e.message().to_string()))?;
    let kind = doc.problem.potential.kind.as_str();
    let spec = ProblemSpec {
        potential: Potential {
            left: side_potential(kind, &doc.problem.potential.left, "left")?,
            right: side_potential(kind, &doc.problem.potential.right, "right")?,
        },
        angles: BoundaryAngles::new(doc.problem.alpha, doc.problem.beta),
        transmission: doc.problem.transmission,
    }
    .validate()?;
    doc.solver.validate()?;
    Ok((spec, doc.solver))
}

/// Serialize a problem + settings back into the config schema.
pub fn to_config_string(spec: &ProblemSpec, settings: &SolverSettings) -> Result<String> {
    let doc = ConfigDoc {
        problem: ProblemSection {
            alpha: spec.angles.alpha,
            beta: spec.angles.beta,
            transmission: spec.transmission,
            potential: PotentialSection {
                kind: potential_kind(&spec.potential)?,
                left: potential_data(&spec.potential.left),
                right: potential_data(&spec.potential.right),
            },
        },
        solver: *settings,
    };
    toml::to_string_pretty(&doc).map_err(|e| SltError::Config(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    const CLASSICAL: &str = r#"
        [problem]
        alpha = 0.0
        beta = 0.0
        [problem.transmission]
        row_a = [0.0, 1.0, 0.0, -1.0]
        row_b = [-1.0, 0.0, 1.0, 0.0]
        [problem.potential]
        kind = "constant"
        left = 0.0
        right = 0.0
    "#;

    #[test]
    fn parses_classical_dirichlet() {
        let (spec, settings) = parse_config(CLASSICAL).unwrap();
        assert_eq!(spec, ProblemSpec::classical_dirichlet());
        assert_eq!(settings, SolverSettings::default());
    }

    #[test]
    fn missing_transmission_names_the_key() {
        let text = r#"
            [problem]
            alpha = 0.0
            beta = 0.0
            [problem.potential]
            kind = "constant"
            left = 0.0
            right = 0.0
        "#;
        match parse_config(text) {
            Err(SltError::Config(msg)) => assert!(msg.contains("transmission"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn wrong_row_arity_is_rejected() {
        let text = CLASSICAL.replace("[0.0, 1.0, 0.0, -1.0]", "[0.0, 1.0, 0.0]");
        assert!(matches!(parse_config(&text), Err(SltError::Config(_))));
    }

    #[test]
    fn unknown_potential_kind_is_rejected() {
        let text = CLASSICAL.replace("\"constant\"", "\"wavelet\"");
        match parse_config(&text) {
            Err(SltError::Config(msg)) => assert!(msg.contains("wavelet"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn kind_data_mismatch_is_rejected() {
        let text = CLASSICAL.replace("left = 0.0", "left = [0.0, 1.0]");
        match parse_config(&text) {
            Err(SltError::Config(msg)) => assert!(msg.contains("left"), "{msg}"),
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn polynomial_coefficients_are_ascending() {
        let text = CLASSICAL
            .replace("\"constant\"", "\"polynomial\"")
            .replace("left = 0.0", "left = [1.0, 0.0, 2.0]")
            .replace("right = 0.0", "right = [0.0]");
        let (spec, _) = parse_config(&text).unwrap();
        // q_left(x) = 1 + 2 x^2
        assert_eq!(
            spec.potential.eval(crate::problem::Side::Left, -1.0),
            3.0
        );
    }

    #[test]
    fn round_trip_is_identity() {
        let table = r#"
            [problem]
            alpha = 0.25
            beta = 1.5
            [problem.transmission]
            row_a = [0.0, 1.0, 0.0, -1.0]
            row_b = [-1.0, -1.0, 1.0, 0.0]
            [problem.potential]
            kind = "table"
            left = { x = [-3.15, -1.0, 0.0], q = [1.0, 2.0, 0.5] }
            right = { x = [0.0, 1.3, 3.15], q = [0.5, -1.0, 2.0] }
            [solver]
            root_tol = 1e-8
            max_eigenvalues = 12
        "#;
        let (spec, settings) = parse_config(table).unwrap();
        let text = to_config_string(&spec, &settings).unwrap();
        let (spec2, settings2) = parse_config(&text).unwrap();
        assert_eq!(spec, spec2);
        assert_eq!(settings, settings2);
    }
}
