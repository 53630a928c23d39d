//! `slt` — command-line surface for the transmission Sturm-Liouville solver.
//!
//! Loads a problem config (TOML), runs the requested computation and emits a
//! machine-readable table (CSV by default, JSON with --format json).
//!
//! Exit codes: 0 success, 1 numerical failure (integration, near-eigenvalue),
//! 2 invalid input (config, flags, validation).

mod table;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use sha2::{Digest, Sha256};

use slt_core::{
    apply_resolvent, carleman_report, find_eigenvalues, fourier_coefficients, parse_config,
    to_config_string, Grid, GreenEvaluator, MonotoneCubic, ProblemSpec, SampledFunction, SltError,
    SolverSettings, Spectrum,
};
use table::{Column, OutputTable};

#[derive(Parser)]
#[command(
    name = "slt",
    version,
    about = "Spectral toolkit for a Sturm-Liouville problem with an interior interface"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Args)]
struct Common {
    /// Problem config file (TOML)
    #[arg(long)]
    config: PathBuf,

    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,

    /// Write the table here instead of stdout
    #[arg(long)]
    output: Option<PathBuf>,

    /// Bit-reproducible fixed-step integration (also omits the timestamp)
    #[arg(long)]
    fixed_step: bool,

    /// Override solver.abs_tol
    #[arg(long)]
    abs_tol: Option<f64>,

    /// Override solver.rel_tol
    #[arg(long)]
    rel_tol: Option<f64>,

    /// Override solver.root_tol
    #[arg(long)]
    root_tol: Option<f64>,

    /// Override solver.lambda_min
    #[arg(long)]
    lambda_min: Option<f64>,

    /// Override solver.lambda_max
    #[arg(long)]
    lambda_max: Option<f64>,

    /// Override solver.grid_points_per_side
    #[arg(long)]
    grid_points: Option<usize>,

    /// Override solver.quadrature_order
    #[arg(long)]
    quadrature_order: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Eigenvalues with normalization constants
    Eigen {
        #[command(flatten)]
        common: Common,
        /// Cap on the number of eigenvalues (overrides solver.max_eigenvalues)
        #[arg(long)]
        count: Option<usize>,
    },
    /// Characteristic function w(lambda) on a uniform lambda grid
    Char {
        #[command(flatten)]
        common: Common,
        /// Number of lambda samples
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Normalized eigenfunction samples on the standard grid
    Eigenfunctions {
        #[command(flatten)]
        common: Common,
        /// Number of eigenfunctions to tabulate
        #[arg(long)]
        count: Option<usize>,
    },
    /// Green's function: single value at (--x, --s) or the diagonal G(x,x)
    Green {
        #[command(flatten)]
        common: Common,
        /// Kernel parameter lambda (non-eigenvalue)
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        x: Option<f64>,
        #[arg(long)]
        s: Option<f64>,
        /// Diagonal sample count (when --x/--s are absent)
        #[arg(long)]
        samples: Option<usize>,
    },
    /// Fourier coefficients and the reconstruction error ladder
    Expand {
        #[command(flatten)]
        common: Common,
        /// Built-in function name: one | sin_shift | parabola | poly:<c0,c1,...>
        #[arg(long)]
        f: Option<String>,
        /// Two-column file (x, f) sampled onto the grid instead of --f
        #[arg(long)]
        f_file: Option<PathBuf>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Parseval balance: weighted norm^2 vs sum of squared coefficients
    Parseval {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        f_file: Option<PathBuf>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Trace identity: diagonal-kernel integral vs sum 1/(t - lambda_n)
    Carleman {
        #[command(flatten)]
        common: Common,
        /// Trace parameter t (non-eigenvalue)
        #[arg(long)]
        t: Option<f64>,
        #[arg(long)]
        terms: Option<usize>,
    },
    /// Apply the resolvent to a forcing function
    Resolvent {
        #[command(flatten)]
        common: Common,
        /// Resolvent parameter lambda (non-eigenvalue)
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        f_file: Option<PathBuf>,
    },
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Eigen { common, .. }
            | Command::Char { common, .. }
            | Command::Eigenfunctions { common, .. }
            | Command::Green { common, .. }
            | Command::Expand { common, .. }
            | Command::Parseval { common, .. }
            | Command::Carleman { common, .. }
            | Command::Resolvent { common, .. } => common,
        }
    }

    fn name(&self) -> &'static str {
        match self {
            Command::Eigen { .. } => "eigen",
            Command::Char { .. } => "char",
            Command::Eigenfunctions { .. } => "eigenfunctions",
            Command::Green { .. } => "green",
            Command::Expand { .. } => "expand",
            Command::Parseval { .. } => "parseval",
            Command::Carleman { .. } => "carleman",
            Command::Resolvent { .. } => "resolvent",
        }
    }
}

/// Optional `[run]` config section: every command parameter has a config
/// equivalent here; command-line flags override it.
#[derive(Debug, Default, Deserialize)]
#[serde(default)]
struct RunSection {
    lambda: Option<f64>,
    t: Option<f64>,
    x: Option<f64>,
    s: Option<f64>,
    count: Option<usize>,
    terms: Option<usize>,
    samples: Option<usize>,
    f: Option<String>,
    f_file: Option<String>,
}

#[derive(Deserialize)]
struct RunDoc {
    #[serde(default)]
    run: RunSection,
}

struct Ctx {
    spec: ProblemSpec,
    settings: SolverSettings,
    run: RunSection,
    spec_hash: String,
}

impl Ctx {
    fn load(common: &Common) -> anyhow::Result<Ctx> {
        let text = std::fs::read_to_string(&common.config)
            .with_context(|| format!("reading config {}", common.config.display()))
            .map_err(|e| input_error(e.to_string()))?;
        let (spec, mut settings) = parse_config(&text)?;
        let run = toml::from_str::<RunDoc>(&text)
            .map(|d| d.run)
            .unwrap_or_default();

        if let Some(v) = common.abs_tol {
            settings.abs_tol = v;
        }
        if let Some(v) = common.rel_tol {
            settings.rel_tol = v;
        }
        if let Some(v) = common.root_tol {
            settings.root_tol = v;
        }
        if let Some(v) = common.lambda_min {
            settings.lambda_min = v;
        }
        if let Some(v) = common.lambda_max {
            settings.lambda_max = v;
        }
        if let Some(v) = common.grid_points {
            settings.grid_points_per_side = v;
        }
        if let Some(v) = common.quadrature_order {
            settings.quadrature_order = v;
        }
        settings.fixed_step |= common.fixed_step;
        settings.validate()?;

        let canonical = to_config_string(&spec, &settings)?;
        let digest = Sha256::digest(canonical.as_bytes());
        let spec_hash = digest
            .iter()
            .take(8)
            .map(|b| format!("{b:02x}"))
            .collect::<String>();

        Ok(Ctx {
            spec,
            settings,
            run,
            spec_hash,
        })
    }

    fn grid(&self) -> Grid {
        Grid::new(&self.settings)
    }

    fn metadata(&self, command: &Command, params: &[(&str, String)]) -> Vec<(String, String)> {
        let s = &self.settings;
        let mut md = vec![
            ("generator".into(), format!("slt {}", env!("CARGO_PKG_VERSION"))),
            ("command".into(), command.name().to_string()),
            ("spec_hash".into(), self.spec_hash.clone()),
            (
                "settings".into(),
                format!(
                    "abs_tol={} rel_tol={} root_tol={} lambda_min={} lambda_max={} \
                     max_eigenvalues={} grid_points_per_side={} quadrature_order={} fixed_step={}",
                    s.abs_tol,
                    s.rel_tol,
                    s.root_tol,
                    s.lambda_min,
                    s.lambda_max,
                    s.max_eigenvalues,
                    s.grid_points_per_side,
                    s.quadrature_order,
                    s.fixed_step
                ),
            ),
            (
                "argv".into(),
                std::env::args().collect::<Vec<_>>().join(" "),
            ),
        ];
        if !params.is_empty() {
            let p = params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ");
            md.push(("params".into(), p));
        }
        // Reproducible runs must be byte-identical, so the timestamp is
        // only emitted in adaptive mode.
        if !s.fixed_step {
            md.push((
                "timestamp".into(),
                chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            ));
        }
        md
    }

    /// Attach the nearest computed eigenvalue to near-singular errors so the
    /// diagnostic names it.
    fn enrich_near_singular(&self, err: SltError) -> SltError {
        if let SltError::NearSingular {
            lambda,
            nearest: None,
        } = err
        {
            let probe = SolverSettings {
                lambda_min: lambda - 3.0,
                lambda_max: lambda + 3.0,
                max_eigenvalues: 32,
                ..self.settings
            };
            if let Ok(sp) = find_eigenvalues(&self.spec, &probe) {
                let nearest = sp
                    .eigenvalues()
                    .into_iter()
                    .min_by(|a, b| (a - lambda).abs().partial_cmp(&(b - lambda).abs()).unwrap());
                return SltError::NearSingular { lambda, nearest };
            }
            return SltError::NearSingular {
                lambda,
                nearest: None,
            };
        }
        err
    }
}

fn input_error(msg: String) -> anyhow::Error {
    anyhow::Error::from(SltError::Config(msg))
}

/// Parse a built-in forcing function name.
fn builtin(name: &str) -> anyhow::Result<Box<dyn Fn(f64) -> f64>> {
    use std::f64::consts::PI;
    match name {
        "one" => Ok(Box::new(|_| 1.0)),
        "sin_shift" => Ok(Box::new(|x: f64| (x + PI).sin())),
        "parabola" => Ok(Box::new(|x: f64| PI * PI - x * x)),
        _ => {
            if let Some(list) = name.strip_prefix("poly:") {
                let coeffs: Vec<f64> = list
                    .split(',')
                    .map(|t| t.trim().parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| input_error(format!("bad poly coefficient in --f: {e}")))?;
                Ok(Box::new(move |x: f64| {
                    coeffs.iter().rev().fold(0.0, |acc, c| acc * x + c)
                }))
            } else {
                Err(input_error(format!(
                    "unknown function \"{name}\" (expected one, sin_shift, parabola or poly:<c0,c1,...>)"
                )))
            }
        }
    }
}

/// Load a two-column (x, f) file and interpolate it onto the grid.
fn load_f_file(path: &Path, grid: &Grid) -> anyhow::Result<SampledFunction> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| input_error(format!("reading {}: {e}", path.display())))?;
    let mut xs = Vec::new();
    let mut fs = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with("x,") {
            continue;
        }
        let parts: Vec<&str> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .collect();
        if parts.len() != 2 {
            return Err(input_error(format!(
                "{}:{}: expected two columns, got {}",
                path.display(),
                ln + 1,
                parts.len()
            )));
        }
        xs.push(parts[0].parse::<f64>().map_err(|e| {
            input_error(format!("{}:{}: bad x value: {e}", path.display(), ln + 1))
        })?);
        fs.push(parts[1].parse::<f64>().map_err(|e| {
            input_error(format!("{}:{}: bad f value: {e}", path.display(), ln + 1))
        })?);
    }
    let interp = MonotoneCubic::new(xs, fs)?;
    Ok(grid.sample(|x| interp.eval(x)))
}

fn resolve_f(
    f: &Option<String>,
    f_file: &Option<PathBuf>,
    run: &RunSection,
    grid: &Grid,
) -> anyhow::Result<(SampledFunction, String)> {
    if f.is_some() && f_file.is_some() {
        return Err(input_error("--f and --f-file are mutually exclusive".into()));
    }
    if let Some(path) = f_file.as_ref().or(run
        .f_file
        .as_ref()
        .map(PathBuf::from)
        .as_ref()
        .filter(|_| f_file.is_none() && f.is_none()))
    {
        return Ok((load_f_file(path, grid)?, format!("file:{}", path.display())));
    }
    let name = f
        .clone()
        .or_else(|| run.f.clone())
        .ok_or_else(|| input_error("no forcing function: pass --f NAME or --f-file PATH".into()))?;
    let eval = builtin(&name)?;
    Ok((grid.sample(|x| eval(x)), name))
}

fn spectrum_with_warnings(ctx: &Ctx) -> anyhow::Result<Spectrum> {
    let spectrum = find_eigenvalues(&ctx.spec, &ctx.settings)?;
    for w in &spectrum.warnings {
        eprintln!("warning: {w}");
    }
    if spectrum.shift_eta != 0.0 {
        eprintln!(
            "warning: 0 is an eigenvalue; spectrum computed with internal shift eta = {}",
            spectrum.shift_eta
        );
    }
    Ok(spectrum)
}

fn side_columns(grid: &Grid) -> (Vec<f64>, Vec<i64>) {
    let mut xs = Vec::with_capacity(grid.left.len() + grid.right.len());
    let mut sides = Vec::with_capacity(xs.capacity());
    xs.extend_from_slice(&grid.left);
    sides.extend(std::iter::repeat(-1).take(grid.left.len()));
    xs.extend_from_slice(&grid.right);
    sides.extend(std::iter::repeat(1).take(grid.right.len()));
    (xs, sides)
}

fn concat(f: &SampledFunction) -> Vec<f64> {
    let mut v = Vec::with_capacity(f.left.len() + f.right.len());
    v.extend_from_slice(&f.left);
    v.extend_from_slice(&f.right);
    v
}

fn run(cli: Cli) -> anyhow::Result<()> {
    let ctx = Ctx::load(cli.command.common())?;
    let cmd = &cli.command;

    let table = match cmd {
        Command::Eigen { count, .. } => {
            let mut ctx = ctx;
            if let Some(c) = count.or(ctx.run.count) {
                ctx.settings.max_eigenvalues = c;
            }
            let spectrum = spectrum_with_warnings(&ctx)?;
            let md = ctx.metadata(cmd, &[("count", ctx.settings.max_eigenvalues.to_string())]);
            OutputTable::new(
                md,
                vec![
                    Column::Int(
                        "index".into(),
                        spectrum.pairs.iter().map(|p| p.index as i64).collect(),
                    ),
                    Column::Real("lambda_n".into(), spectrum.eigenvalues()),
                    Column::Real(
                        "norm_constant".into(),
                        spectrum.pairs.iter().map(|p| p.norm_constant).collect(),
                    ),
                ],
            )
        }

        Command::Char { samples, .. } => {
            let n = samples.or(ctx.run.samples).unwrap_or(200).max(2);
            let (lo, hi) = (ctx.settings.lambda_min, ctx.settings.lambda_max);
            let lams: Vec<f64> = (0..n)
                .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
                .collect();
            let mut w = Vec::with_capacity(n);
            let mut w1 = Vec::with_capacity(n);
            let mut w2 = Vec::with_capacity(n);
            for &lam in &lams {
                let s = slt_core::characteristic(&ctx.spec, lam, &ctx.settings)?;
                w.push(s.w);
                w1.push(s.w1);
                w2.push(s.w2);
            }
            let md = ctx.metadata(cmd, &[("samples", n.to_string())]);
            OutputTable::new(
                md,
                vec![
                    Column::Real("lambda".into(), lams),
                    Column::Real("w".into(), w),
                    Column::Real("w1".into(), w1),
                    Column::Real("w2".into(), w2),
                ],
            )
        }

        Command::Eigenfunctions { count, .. } => {
            let mut ctx = ctx;
            if let Some(c) = count.or(ctx.run.count) {
                ctx.settings.max_eigenvalues = c;
            }
            let grid = ctx.grid();
            let spectrum = spectrum_with_warnings(&ctx)?;
            let (xs, sides) = side_columns(&grid);
            let mut columns = vec![
                Column::Real("x".into(), xs),
                Column::Int("side".into(), sides),
            ];
            for p in &spectrum.pairs {
                columns.push(Column::Real(format!("phi_{}", p.index), concat(&p.samples)));
            }
            let md = ctx.metadata(cmd, &[("count", spectrum.len().to_string())]);
            OutputTable::new(md, columns)
        }

        Command::Green {
            lambda, x, s, samples, ..
        } => {
            let lam = lambda
                .or(ctx.run.lambda)
                .ok_or_else(|| input_error("green needs --lambda".into()))?;
            let grid = ctx.grid();
            let green = GreenEvaluator::new(&ctx.spec, lam, &grid, &ctx.settings)
                .map_err(|e| ctx.enrich_near_singular(e))?;
            let x = x.or(ctx.run.x);
            let s = s.or(ctx.run.s);
            match (x, s) {
                (Some(x), Some(s)) => {
                    let v = green.eval(&ctx.spec, x, s)?;
                    let md = ctx.metadata(
                        cmd,
                        &[
                            ("lambda", lam.to_string()),
                            ("x", x.to_string()),
                            ("s", s.to_string()),
                        ],
                    );
                    OutputTable::new(
                        md,
                        vec![
                            Column::Real("x".into(), vec![x]),
                            Column::Real("s".into(), vec![s]),
                            Column::Real("g".into(), vec![v]),
                        ],
                    )
                }
                (None, None) => {
                    let n = samples.or(ctx.run.samples).unwrap_or(200).max(2);
                    use std::f64::consts::PI;
                    let mut xs = Vec::with_capacity(n);
                    let mut gs = Vec::with_capacity(n);
                    for i in 0..n {
                        let x = -PI + (i as f64 + 0.5) * 2.0 * PI / n as f64;
                        if x.abs() < 1e-9 {
                            continue;
                        }
                        xs.push(x);
                        gs.push(green.eval(&ctx.spec, x, x)?);
                    }
                    let md = ctx.metadata(
                        cmd,
                        &[("lambda", lam.to_string()), ("samples", n.to_string())],
                    );
                    OutputTable::new(
                        md,
                        vec![
                            Column::Real("x".into(), xs),
                            Column::Real("g_diag".into(), gs),
                        ],
                    )
                }
                _ => return Err(input_error("--x and --s must be given together".into())),
            }
        }

        Command::Expand { f, f_file, terms, .. } => {
            let grid = ctx.grid();
            let (fv, fname) = resolve_f(f, f_file, &ctx.run, &grid)?;
            let spectrum = spectrum_with_warnings(&ctx)?;
            let n_terms = terms.or(ctx.run.terms).unwrap_or(spectrum.len());
            let coeffs = fourier_coefficients(&fv, &spectrum, &ctx.spec, &grid, n_terms)?;
            // Running reconstruction: sup error after each added term.
            let mut acc = grid.zeros();
            let mut sup_errors = Vec::with_capacity(n_terms);
            for (c, p) in coeffs.iter().zip(&spectrum.pairs) {
                for (o, v) in acc.left.iter_mut().zip(&p.samples.left) {
                    *o += c * v;
                }
                for (o, v) in acc.right.iter_mut().zip(&p.samples.right) {
                    *o += c * v;
                }
                sup_errors.push(fv.sup_distance(&acc));
            }
            let md = ctx.metadata(
                cmd,
                &[("f", fname), ("terms", n_terms.to_string())],
            );
            OutputTable::new(
                md,
                vec![
                    Column::Int("n".into(), (0..n_terms as i64).collect()),
                    Column::Real(
                        "lambda_n".into(),
                        spectrum.pairs[..n_terms].iter().map(|p| p.lambda).collect(),
                    ),
                    Column::Real("c_n".into(), coeffs),
                    Column::Real("partial_sup_error".into(), sup_errors),
                ],
            )
        }

        Command::Parseval { f, f_file, terms, .. } => {
            let grid = ctx.grid();
            let (fv, fname) = resolve_f(f, f_file, &ctx.run, &grid)?;
            let spectrum = spectrum_with_warnings(&ctx)?;
            let n_terms = terms.or(ctx.run.terms).unwrap_or(spectrum.len());
            let r = slt_core::parseval_check(&fv, &spectrum, &ctx.spec, &grid, n_terms)?;
            let md = ctx.metadata(cmd, &[("f", fname), ("terms", n_terms.to_string())]);
            OutputTable::new(
                md,
                vec![
                    Column::Int("n_terms".into(), vec![r.n_terms as i64]),
                    Column::Real("norm_sq".into(), vec![r.norm_sq]),
                    Column::Real(
                        "sum_c_sq".into(),
                        vec![r.coefficients.iter().map(|c| c * c).sum::<f64>()],
                    ),
                    Column::Real("parseval_gap".into(), vec![r.parseval_gap]),
                    Column::Real(
                        "gap_over_norm_sq".into(),
                        vec![r.parseval_gap / r.norm_sq.max(f64::MIN_POSITIVE)],
                    ),
                    Column::Real("sup_error".into(), vec![r.sup_error]),
                ],
            )
        }

        Command::Carleman { t, terms, .. } => {
            let t = t
                .or(ctx.run.t)
                .ok_or_else(|| input_error("carleman needs --t".into()))?;
            let grid = ctx.grid();
            let spectrum = spectrum_with_warnings(&ctx)?;
            let n_terms = terms.or(ctx.run.terms).unwrap_or(spectrum.len());
            let report = carleman_report(&ctx.spec, &spectrum, t, n_terms, &grid, &ctx.settings)
                .map_err(|e| ctx.enrich_near_singular(e))?;
            // Ladder of partial sums; the counting function rides along.
            let mut rhs = Vec::with_capacity(n_terms);
            let mut partial = 0.0;
            for p in &spectrum.pairs[..n_terms] {
                partial += 1.0 / (t - p.lambda);
                rhs.push(partial);
            }
            let md = ctx.metadata(
                cmd,
                &[("t", t.to_string()), ("terms", n_terms.to_string())],
            );
            OutputTable::new(
                md,
                vec![
                    Column::Int("n".into(), (0..n_terms as i64).collect()),
                    Column::Real(
                        "lambda_n".into(),
                        report.counting_function.iter().map(|p| p.0).collect(),
                    ),
                    Column::Int(
                        "count".into(),
                        report.counting_function.iter().map(|p| p.1 as i64).collect(),
                    ),
                    Column::Real("rhs_partial".into(), rhs),
                    Column::Real("lhs".into(), vec![report.lhs; n_terms]),
                    Column::Real(
                        "rel_gap".into(),
                        spectrum.pairs[..n_terms]
                            .iter()
                            .scan(0.0, |acc, p| {
                                *acc += 1.0 / (t - p.lambda);
                                Some((*acc - report.lhs).abs() / report.lhs.abs().max(f64::MIN_POSITIVE))
                            })
                            .collect(),
                    ),
                ],
            )
        }

        Command::Resolvent { lambda, f, f_file, .. } => {
            let lam = lambda
                .or(ctx.run.lambda)
                .ok_or_else(|| input_error("resolvent needs --lambda".into()))?;
            let grid = ctx.grid();
            let (fv, fname) = resolve_f(f, f_file, &ctx.run, &grid)?;
            let r = apply_resolvent(&ctx.spec, lam, &fv, &grid, &ctx.settings)
                .map_err(|e| ctx.enrich_near_singular(e))?;
            eprintln!(
                "residual_norm = {:.3e}; conditions = {:?}",
                r.residual_norm, r.condition_residuals
            );
            let (xs, sides) = side_columns(&grid);
            let md = ctx.metadata(
                cmd,
                &[
                    ("lambda", lam.to_string()),
                    ("f", fname),
                    ("residual_norm", format!("{:.17e}", r.residual_norm)),
                ],
            );
            OutputTable::new(
                md,
                vec![
                    Column::Real("x".into(), xs),
                    Column::Int("side".into(), sides),
                    Column::Real("f".into(), concat(&r.input)),
                    Column::Real("y".into(), concat(&r.output)),
                    Column::Real("dy".into(), concat(&r.output_derivative)),
                    Column::Real("ode_residual".into(), concat(&r.residual)),
                ],
            )
        }
    };

    let common = cli.command.common();
    let rendered = match common.format {
        Format::Csv => table.to_csv(),
        Format::Json => table.to_json(),
    };
    match &common.output {
        Some(path) => std::fs::write(path, rendered)
            .with_context(|| format!("writing {}", path.display()))?,
        None => print!("{rendered}"),
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            match err.downcast_ref::<SltError>() {
                Some(e) if e.is_input_error() => ExitCode::from(2),
                Some(_) => ExitCode::from(1),
                None => ExitCode::from(2),
            }
        }
    }
}

// Inner-product reexport kept for the test suite's convenience.
#[allow(unused_imports)]
use weighted_inner_product as _weighted_inner_product;
