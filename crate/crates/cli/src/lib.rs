//! The `mnl` command-line driver.
//!
//! [`run`] parses arguments, executes one subcommand and returns the process
//! exit status: 0 on success, 1 on a validation error, 2 on an invariant
//! violation.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use mnl_core::exponents::{classify, phi, theta, upper_bound_magnitude, MixedExponents};
use mnl_core::extremizers::{
    chirp_residual_sweep, unit_sharpness, verify_chirp_lower, verify_dirichlet_lower,
    DirichletKind, ExtremizerReport, DEFAULT_ETA,
};
use mnl_core::norms::{lpq_norm, lrs_norm, CoefficientMatrix, GridFunction, QuadratureSpec};
use mnl_core::opnorm::{estimate, sharpness_sweep, BoundReport, SearchConfig};
use mnl_core::prelude::Complex64;
use mnl_core::trigsum::{eval_nonortho, eval_sum, nonortho_ratio_sweep, EvalPlan};
use mnl_core::Error;

/// Environment variable capping the worker thread count.
pub const THREADS_ENV: &str = "MNL_THREADS";

/// Slope limit of the chirp residual regression.
pub const CHIRP_SLOPE_LIMIT: f64 = 0.1;

/// Relative band of `|chirp_sum|/√M` around `√(2/η)`.
pub const CHIRP_MODULUS_BAND: f64 = 0.25;

#[derive(Debug, Parser)]
#[command(
    name = "mnl",
    version,
    about = "Mixed-norm bounds for truncated double Fourier series"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print the l^{p,q} norm of a matrix or the L^{r,s} norm of a grid.
    Norm(NormArgs),
    /// Sample the double sum (or its non-orthogonal variant) to a grid file.
    Eval(EvalArgs),
    /// Print Θ, Φ and the upper bound magnitude.
    Bound(BoundArgs),
    /// Build an extremizer and verify its certified lower bound.
    Extremal(ExtremalArgs),
    /// Residual sweep of the one-dimensional chirp sum.
    ChirpCheck(ChirpArgs),
    /// Search for the operator norm at one exponent point.
    Opnorm(OpnormArgs),
    /// Operator-norm search over ladders of sizes and exponent points.
    Sweep(SweepArgs),
    /// Size sweep of the non-orthogonal sum ratio.
    NonorthoCheck(NonorthoArgs),
}

/// Exponents as Lebesgue values (`--p 2`, `--r inf`) or reciprocals
/// (`--alpha 0.5`), one of each pair.
#[derive(Debug, Clone, Default, Args)]
pub struct ExponentArgs {
    #[arg(long, value_parser = parse_lebesgue, conflicts_with = "alpha")]
    pub p: Option<f64>,
    #[arg(long, value_parser = parse_lebesgue, conflicts_with = "beta")]
    pub q: Option<f64>,
    #[arg(long, value_parser = parse_lebesgue, conflicts_with = "gamma")]
    pub r: Option<f64>,
    #[arg(long, value_parser = parse_lebesgue, conflicts_with = "delta")]
    pub s: Option<f64>,
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long)]
    pub beta: Option<f64>,
    #[arg(long)]
    pub gamma: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
}

impl ExponentArgs {
    pub fn resolve(&self) -> Result<MixedExponents, Error> {
        let slot =
            |name: &'static str, lebesgue: Option<f64>, recip: Option<f64>| match (lebesgue, recip)
            {
                (Some(v), None) => {
                    if !(v >= 1.0) {
                        return Err(Error::LebesgueOutOfRange { name, value: v });
                    }
                    Ok(1.0 / v)
                }
                (None, Some(v)) => Ok(v),
                _ => Err(Error::InvalidParameter(format!(
                    "give exactly one of --{name} or its reciprocal"
                ))),
            };
        MixedExponents::new(
            slot("p", self.p, self.alpha)?,
            slot("q", self.q, self.beta)?,
            slot("r", self.r, self.gamma)?,
            slot("s", self.s, self.delta)?,
        )
    }
}

#[derive(Debug, Clone, Copy, Args)]
pub struct DimArgs {
    /// Number of rows (frequencies in x).
    #[arg(long = "M")]
    pub rows: usize,
    /// Number of columns (frequencies in y).
    #[arg(long = "N")]
    pub cols: usize,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct QuadArgs {
    /// Grid points per frequency in each direction.
    #[arg(long, default_value_t = 8)]
    pub oversample: usize,
    /// Compare against the half-resolution grid and warn on disagreement.
    #[arg(long)]
    pub refine_check: bool,
    #[arg(long, default_value_t = 1e-3)]
    pub rel_tol: f64,
}

impl QuadArgs {
    fn spec(&self) -> Result<QuadratureSpec, Error> {
        QuadratureSpec::new(self.oversample, self.refine_check, self.rel_tol)
    }
}

#[derive(Debug, Args)]
pub struct NormArgs {
    /// Matrix JSON file.
    #[arg(long, conflicts_with = "grid", required_unless_present = "grid")]
    pub matrix: Option<PathBuf>,
    /// Grid JSON file.
    #[arg(long)]
    pub grid: Option<PathBuf>,
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[command(flatten)]
    pub quadrature: QuadArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum PathChoice {
    Auto,
    Direct,
    Fft,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    /// Matrix JSON file.
    #[arg(long)]
    pub matrix: PathBuf,
    /// Output grid JSON file.
    #[arg(long)]
    pub out: PathBuf,
    /// Grid size in x (defaults to oversample·M).
    #[arg(long)]
    pub kx: Option<usize>,
    /// Grid size in y (defaults to oversample·N).
    #[arg(long)]
    pub ky: Option<usize>,
    #[arg(long, default_value_t = 8)]
    pub oversample: usize,
    #[arg(long, value_enum, default_value_t = PathChoice::Auto)]
    pub path: PathChoice,
    /// Sample the non-orthogonal sum with phases e^{i(mx+ny)}.
    #[arg(long)]
    pub nonortho: bool,
}

#[derive(Debug, Args)]
pub struct BoundArgs {
    #[command(flatten)]
    pub dims: DimArgs,
    #[command(flatten)]
    pub exponents: ExponentArgs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindChoice {
    Chirp,
    Column,
    Row,
    Ones,
    Unit,
}

#[derive(Debug, Args)]
pub struct ExtremalArgs {
    #[arg(long, value_enum)]
    pub kind: KindChoice,
    #[command(flatten)]
    pub dims: DimArgs,
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    pub eta: f64,
    /// Lattice points per direction for the chirp minimum.
    #[arg(long, default_value_t = 64)]
    pub grid: usize,
    /// Zero-based row of the unit entry.
    #[arg(long, default_value_t = 0)]
    pub row: usize,
    /// Zero-based column of the unit entry.
    #[arg(long, default_value_t = 0)]
    pub col: usize,
    /// Value of the unit entry as `re` or `re,im`.
    #[arg(long, value_parser = parse_complex, default_value = "1")]
    pub value: Complex64,
    /// Also measure the operator ratio of Dirichlet extremizers on a grid.
    #[arg(long)]
    pub measure: bool,
    #[command(flatten)]
    pub quadrature: QuadArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct ChirpArgs {
    #[arg(long, default_value_t = DEFAULT_ETA)]
    pub eta: f64,
    /// Powers of two `lo:hi`, both ends included.
    #[arg(long = "M-ladder", value_parser = parse_pow2_ladder, default_value = "1024:65536")]
    pub ladder: Ladder,
    /// Evaluation points in `[η, 1-η]`; seven equispaced points by default.
    #[arg(long = "x", value_delimiter = ',')]
    pub xs: Vec<f64>,
    /// Write the full sweep as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, Args)]
pub struct SearchArgs {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub restarts: usize,
    #[arg(long, default_value_t = 150)]
    pub max_iters: usize,
    #[arg(long, default_value_t = 0.25)]
    pub step: f64,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_ETA)]
    pub eta: f64,
    /// Search over real matrices only.
    #[arg(long)]
    pub real_only: bool,
    /// Skip the five extremizer starting points.
    #[arg(long)]
    pub no_warm_starts: bool,
    #[command(flatten)]
    pub quadrature: QuadArgs,
}

impl SearchArgs {
    fn config(&self) -> Result<SearchConfig, Error> {
        let cfg = SearchConfig {
            restarts: self.restarts,
            max_iters: self.max_iters,
            step: self.step,
            seed: self.seed,
            quadrature: self.quadrature.spec()?,
            tol: self.tol,
            warm_starts: !self.no_warm_starts,
            real_only: self.real_only,
            eta: self.eta,
        };
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct OpnormArgs {
    #[command(flatten)]
    pub dims: DimArgs,
    #[command(flatten)]
    pub exponents: ExponentArgs,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Write the report here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// Sizes as `M` (square) or `MxN`, comma separated.
    #[arg(long, value_parser = parse_size, value_delimiter = ',', required = true)]
    pub ladder: Vec<(usize, usize)>,
    /// Lebesgue exponents `p,q,r,s` (`inf` allowed); repeatable.
    #[arg(long = "exponents", value_parser = parse_lebesgue_tuple)]
    pub exponents: Vec<MixedExponents>,
    /// Reciprocal exponents `alpha,beta,gamma,delta`; repeatable.
    #[arg(long = "reciprocals", value_parser = parse_reciprocal_tuple)]
    pub reciprocals: Vec<MixedExponents>,
    #[command(flatten)]
    pub search: SearchArgs,
    /// Aggregate CSV output.
    #[arg(long)]
    pub csv: Option<PathBuf>,
    /// One BoundReport per line; stdout when neither output is given.
    #[arg(long)]
    pub jsonl: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct NonorthoArgs {
    #[arg(long, value_delimiter = ',', default_value = "2,4,8,16,32")]
    pub sizes: Vec<usize>,
    #[arg(long, default_value_t = 50)]
    pub samples: usize,
    #[arg(long, default_value_t = 4)]
    pub oversample: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Allowed growth of the maximum ratio between the two largest sizes.
    #[arg(long, default_value_t = 0.10)]
    pub max_growth: f64,
    /// Write the full sweep as JSON.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

fn parse_lebesgue(s: &str) -> Result<f64, String> {
    match s.trim().to_ascii_lowercase().as_str() {
        "inf" | "infinity" | "∞" => Ok(f64::INFINITY),
        t => t.parse::<f64>().map_err(|e| format!("{s:?}: {e}")),
    }
}

fn parse_four(s: &str, f: fn(&str) -> Result<f64, String>) -> Result<[f64; 4], String> {
    let parts: Vec<f64> = s.split(',').map(f).collect::<Result<_, _>>()?;
    parts
        .try_into()
        .map_err(|_| format!("{s:?}: expected four comma-separated values"))
}

fn parse_lebesgue_tuple(s: &str) -> Result<MixedExponents, String> {
    let [p, q, r, t] = parse_four(s, parse_lebesgue)?;
    MixedExponents::from_lebesgue(p, q, r, t).map_err(|e| e.to_string())
}

fn parse_reciprocal_tuple(s: &str) -> Result<MixedExponents, String> {
    let [a, b, g, d] = parse_four(s, |t| {
        t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}"))
    })?;
    MixedExponents::new(a, b, g, d).map_err(|e| e.to_string())
}

fn parse_size(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    match s.split_once(['x', 'X']) {
        Some((m, n)) => Ok((parse(m)?, parse(n)?)),
        None => parse(s).map(|m| (m, m)),
    }
}

fn parse_complex(s: &str) -> Result<Complex64, String> {
    let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("{s:?}: {e}"));
    match s.split_once(',') {
        Some((re, im)) => Ok(Complex64::new(parse(re)?, parse(im)?)),
        None => Ok(Complex64::new(parse(s)?, 0.0)),
    }
}

/// Sizes of the chirp residual sweep.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ladder(pub Vec<usize>);

fn parse_pow2_ladder(s: &str) -> Result<Ladder, String> {
    let (lo, hi) = s
        .split_once(':')
        .ok_or_else(|| format!("{s:?}: expected lo:hi"))?;
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{s:?}: {e}"));
    let (lo, hi) = (parse(lo)?, parse(hi)?);
    if !lo.is_power_of_two() || !hi.is_power_of_two() || lo > hi {
        return Err(format!("{s:?}: need powers of two with lo <= hi"));
    }
    Ok(Ladder(
        std::iter::successors(Some(lo), |&m| Some(m * 2))
            .take_while(|&m| m <= hi)
            .collect(),
    ))
}

/// Failure of a subcommand, mapped to an exit status.
#[derive(Debug)]
pub enum Failure {
    Validation(String),
    Invariant(String),
}

impl Failure {
    pub fn status(&self) -> i32 {
        match self {
            Failure::Validation(_) => 1,
            Failure::Invariant(_) => 2,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Invariant(_) | Error::CoverageViolation(_) | Error::DirichletCheck { .. } => {
                Failure::Invariant(e.to_string())
            }
            other => Failure::Validation(other.to_string()),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

impl From<csv::Error> for Failure {
    fn from(e: csv::Error) -> Self {
        Failure::Validation(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn threads_from_env() -> Result<Option<usize>, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(Some(n)),
            _ => Err(Failure::Validation(format!(
                "{THREADS_ENV} must be a positive integer, got {v:?}"
            ))),
        },
        Err(_) => Ok(None),
    }
}

/// Parses `args` (including the program name), runs the subcommand and
/// returns the exit status.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = write!(err, "{e}");
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let msg = match &f {
                Failure::Validation(m) => format!("error: {m}"),
                Failure::Invariant(m) => format!("invariant violated: {m}"),
            };
            let _ = writeln!(err, "{msg}");
            f.status()
        }
    }
}

fn execute(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads_from_env()? {
        builder = builder.num_threads(n);
    }
    let pool = builder
        .build()
        .map_err(|e| Failure::Validation(e.to_string()))?;
    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let result = pool.install(|| dispatch(command, &mut stdout, &mut stderr));
    out.write_all(&stdout)?;
    err.write_all(&stderr)?;
    result
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match command {
        Command::Norm(a) => norm(a, out, err),
        Command::Eval(a) => eval(a, out),
        Command::Bound(a) => bound(a, out),
        Command::Extremal(a) => extremal(a, out),
        Command::ChirpCheck(a) => chirp_check(a, out),
        Command::Opnorm(a) => opnorm(a, out),
        Command::Sweep(a) => sweep(a, out),
        Command::NonorthoCheck(a) => nonortho_check(a, out),
    }
}

fn emit_json<T: serde::Serialize>(value: &T, path: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let text = serde_json::to_string(value)?;
    match path {
        Some(p) => std::fs::write(p, text + "\n")?,
        None => writeln!(out, "{text}")?,
    }
    Ok(())
}

fn norm(a: NormArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let e = a.exponents.resolve()?;
    if let Some(path) = &a.matrix {
        let m = CoefficientMatrix::read(path)?;
        writeln!(out, "lpq={}", lpq_norm(&m, &e))?;
    } else if let Some(path) = &a.grid {
        let g = GridFunction::read(path)?;
        let n = lrs_norm(&g, &e, &a.quadrature.spec()?);
        writeln!(out, "lrs={}", n.value)?;
        if let Some(w) = n.warning {
            writeln!(
                err,
                "warning: half-resolution value {} differs by {:.3e} (tol {:.0e})",
                w.coarse, w.rel_diff, w.rel_tol
            )?;
        }
    }
    Ok(())
}

fn eval(a: EvalArgs, out: &mut dyn Write) -> Outcome {
    if a.oversample == 0 {
        return Err(Failure::Validation("oversample must be positive".into()));
    }
    let m = CoefficientMatrix::read(&a.matrix)?;
    let kx = a.kx.unwrap_or(a.oversample * m.rows());
    let ky = a.ky.unwrap_or(a.oversample * m.cols());
    let grid = if a.nonortho {
        if a.path == PathChoice::Fft {
            return Err(Failure::Validation(
                "the non-orthogonal sum is evaluated directly only".into(),
            ));
        }
        eval_nonortho(&m, &EvalPlan::nonortho(kx, ky))?
    } else {
        let plan = match a.path {
            PathChoice::Auto => EvalPlan::fastest(kx, ky, &m),
            PathChoice::Direct => EvalPlan::direct(kx, ky),
            PathChoice::Fft => EvalPlan::transform(kx, ky),
        };
        eval_sum(&m, &plan)?
    };
    grid.write(&a.out)?;
    writeln!(out, "wrote {kx}x{ky} grid to {}", a.out.display())?;
    Ok(())
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |x| x.to_string())
}

fn bound(a: BoundArgs, out: &mut dyn Write) -> Outcome {
    let e = a.exponents.resolve()?;
    let label = classify(&e)?;
    writeln!(out, "exponents={e}")?;
    writeln!(out, "theta={}", theta(&e)?)?;
    writeln!(out, "branch={:?}", label.branch)?;
    writeln!(out, "phi={}", fmt_opt(phi(&e)))?;
    writeln!(
        out,
        "upper={}",
        upper_bound_magnitude(a.dims.rows, a.dims.cols, &e)?
    )?;
    Ok(())
}

fn extremal(a: ExtremalArgs, out: &mut dyn Write) -> Outcome {
    let e = a.exponents.resolve()?;
    let (rows, cols) = (a.dims.rows, a.dims.cols);
    let spec = a.quadrature.spec()?;
    let report: ExtremizerReport = match a.kind {
        KindChoice::Chirp => verify_chirp_lower(rows, cols, a.eta, a.grid, &e)?.report,
        KindChoice::Unit => unit_sharpness(rows, cols, a.row, a.col, a.value, &e, &spec)?.report,
        KindChoice::Column | KindChoice::Row | KindChoice::Ones => {
            let kind = match a.kind {
                KindChoice::Column => DirichletKind::Column,
                KindChoice::Row => DirichletKind::Row,
                _ => DirichletKind::Ones,
            };
            verify_dirichlet_lower(kind, rows, cols, &e, a.measure.then_some(&spec))?
        }
    };
    emit_json(&report, a.out.as_deref(), out)?;
    if report.lower > report.upper * (1.0 + 1e-12) {
        return Err(Failure::Invariant(format!(
            "certified lower bound {} exceeds upper bound {}",
            report.lower, report.upper
        )));
    }
    Ok(())
}

fn chirp_check(a: ChirpArgs, out: &mut dyn Write) -> Outcome {
    let xs = if a.xs.is_empty() {
        (0..7)
            .map(|i| a.eta + (1.0 - 2.0 * a.eta) * i as f64 / 6.0)
            .collect()
    } else {
        a.xs.clone()
    };
    let sweep = chirp_residual_sweep(a.eta, &a.ladder.0, &xs)?;
    writeln!(
        out,
        "M\tmax_residual\tmin_abs_over_sqrtM\tmax_abs_over_sqrtM"
    )?;
    for row in &sweep.rows {
        writeln!(
            out,
            "{}\t{:.6e}\t{:.6}\t{:.6}",
            row.len, row.max_residual, row.min_normalized, row.max_normalized
        )?;
    }
    let deviation = sweep.modulus_deviation_at_largest();
    writeln!(out, "slope={}", sweep.slope)?;
    writeln!(out, "target_modulus={}", sweep.target_modulus)?;
    writeln!(out, "modulus_deviation={deviation}")?;
    if let Some(path) = &a.json {
        emit_json(&sweep, Some(path), out)?;
    }
    if sweep.slope > CHIRP_SLOPE_LIMIT || deviation > CHIRP_MODULUS_BAND {
        return Err(Failure::Invariant(format!(
            "chirp residual slope {:.4} (limit {CHIRP_SLOPE_LIMIT}), modulus deviation {:.3} (limit {CHIRP_MODULUS_BAND})",
            sweep.slope, deviation
        )));
    }
    Ok(())
}

fn sandwich_failure(report: &BoundReport) -> Failure {
    Failure::Invariant(format!(
        "sandwich breached at {}x{} {}: lower={} searched={} upper={}",
        report.rows,
        report.cols,
        report.exponents,
        report.lower_extremizer,
        report.searched,
        report.upper
    ))
}

fn opnorm(a: OpnormArgs, out: &mut dyn Write) -> Outcome {
    let e = a.exponents.resolve()?;
    let cfg = a.search.config()?;
    let report = estimate(a.dims.rows, a.dims.cols, &e, &cfg)?;
    emit_json(&report, a.out.as_deref(), out)?;
    if !report.sandwich_ok {
        return Err(sandwich_failure(&report));
    }
    Ok(())
}

fn sweep(a: SweepArgs, out: &mut dyn Write) -> Outcome {
    let exponents: Vec<MixedExponents> =
        a.exponents.iter().chain(&a.reciprocals).copied().collect();
    if exponents.is_empty() {
        return Err(Failure::Validation(
            "give at least one --exponents or --reciprocals tuple".into(),
        ));
    }
    let cfg = a.search.config()?;
    let result = sharpness_sweep(&a.ladder, &exponents, &cfg)?;

    if let Some(path) = &a.csv {
        let mut w = csv::Writer::from_path(path)?;
        w.write_record(BoundReport::CSV_HEADER)?;
        for r in &result.reports {
            w.write_record(r.csv_record())?;
        }
        w.flush()?;
    }
    if let Some(path) = &a.jsonl {
        let mut w = BufWriter::new(File::create(path)?);
        for r in &result.reports {
            writeln!(w, "{}", serde_json::to_string(r)?)?;
        }
        w.flush()?;
    }
    if a.csv.is_none() && a.jsonl.is_none() {
        for r in &result.reports {
            writeln!(out, "{}", serde_json::to_string(r)?)?;
        }
    } else {
        for d in &result.ladders {
            let ratios: Vec<String> = d.ratios.iter().map(|r| format!("{r:.6}")).collect();
            let stable = match d.stable {
                Some(true) => "stable",
                Some(false) => "unstable",
                None => "n/a",
            };
            writeln!(
                out,
                "{} phi={} ratios=[{}] {stable}",
                d.exponents,
                fmt_opt(d.phi),
                ratios.join(", ")
            )?;
        }
    }
    match result.reports.iter().find(|r| !r.sandwich_ok) {
        Some(r) => Err(sandwich_failure(r)),
        None => Ok(()),
    }
}

fn nonortho_check(a: NonorthoArgs, out: &mut dyn Write) -> Outcome {
    let sweep = nonortho_ratio_sweep(&a.sizes, a.samples, a.oversample, a.seed)?;
    writeln!(out, "size\tsamples\tmax_ratio\tmean_ratio")?;
    for r in &sweep.rows {
        writeln!(
            out,
            "{}\t{}\t{:.6}\t{:.6}",
            r.size, r.samples, r.max_ratio, r.mean_ratio
        )?;
    }
    writeln!(out, "empirical_constant={}", sweep.empirical_constant)?;
    writeln!(out, "last_growth={}", fmt_opt(sweep.last_growth))?;
    if let Some(path) = &a.json {
        emit_json(&sweep, Some(path), out)?;
    }
    match sweep.last_growth {
        Some(g) if g > a.max_growth => Err(Failure::Invariant(format!(
            "maximum ratio grew by {:.2}% between the two largest sizes (limit {:.2}%)",
            100.0 * g,
            100.0 * a.max_growth
        ))),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lebesgue_literals() {
        assert_eq!(parse_lebesgue("inf"), Ok(f64::INFINITY));
        assert_eq!(parse_lebesgue("2"), Ok(2.0));
        assert!(parse_lebesgue("two").is_err());
    }

    #[test]
    fn ladders_and_sizes() {
        assert_eq!(parse_pow2_ladder("4:32").unwrap().0, vec![4, 8, 16, 32]);
        assert!(parse_pow2_ladder("3:32").is_err());
        assert!(parse_pow2_ladder("64:32").is_err());
        assert_eq!(parse_size("4x8").unwrap(), (4, 8));
        assert_eq!(parse_size("5").unwrap(), (5, 5));
    }

    #[test]
    fn mixed_exponent_flags() {
        let args = ExponentArgs {
            p: Some(2.0),
            beta: Some(0.25),
            r: Some(f64::INFINITY),
            delta: Some(1.0),
            ..Default::default()
        };
        assert_eq!(args.resolve().unwrap().as_array(), [0.5, 0.25, 0.0, 1.0]);
        let missing = ExponentArgs {
            p: Some(2.0),
            ..Default::default()
        };
        assert!(missing.resolve().is_err());
        let below_one = ExponentArgs {
            p: Some(0.5),
            q: Some(2.0),
            r: Some(2.0),
            s: Some(2.0),
            ..Default::default()
        };
        assert!(matches!(
            below_one.resolve(),
            Err(Error::LebesgueOutOfRange { .. })
        ));
    }

    #[test]
    fn complex_values() {
        assert_eq!(parse_complex("1.5,-2").unwrap(), Complex64::new(1.5, -2.0));
        assert_eq!(parse_complex("3").unwrap(), Complex64::new(3.0, 0.0));
    }
}
