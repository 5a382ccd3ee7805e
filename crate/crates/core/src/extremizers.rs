//! Candidate maximizers of `‖T A‖_{L^{r,s}} / ‖A‖_{l^{p,q}}` and the checks
//! that certify their lower bounds.
//!
//! * `B` — the quadratic-phase (chirp) matrix
//!   `b_{jk} = e^{-(π/2)ηi((j-1)²/M + (k-1)²/N)}`, whose sum factors into two
//!   one-dimensional chirp sums.
//! * `C`, `R`, `D` — a column, a row, or the whole matrix filled with one
//!   constant. Their sums are Dirichlet kernels, which stay above
//!   `sin(1)·M` on `[0, 1/(πM)]`.
//! * `E` — a single nonzero entry, for which `|T E| ≡ |e|`.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{upper_bound_magnitude, MixedExponents};
use crate::norms::{lpq_norm, CoefficientMatrix, QuadratureSpec};
use crate::opnorm::objective;
use crate::sum::{unit_phase, ComplexSum};
use crate::trigsum::{dirichlet_quotient, eval_sum_at, FrequencyScale};

/// Default chirp parameter η.
pub const DEFAULT_ETA: f64 = 0.2;

/// Interior sample count for the Dirichlet checks (both endpoints are added).
pub const DIRICHLET_SAMPLES: usize = 64;

/// Which extremizer to build. Indices are zero-based.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum ExtremizerKind {
    ChirpB {
        eta: f64,
    },
    ColumnC {
        col: usize,
        value: Complex64,
    },
    RowR {
        row: usize,
        value: Complex64,
    },
    OnesD {
        value: Complex64,
    },
    UnitE {
        row: usize,
        col: usize,
        value: Complex64,
    },
}

impl ExtremizerKind {
    pub fn name(&self) -> &'static str {
        match self {
            ExtremizerKind::ChirpB { .. } => "B",
            ExtremizerKind::ColumnC { .. } => "C",
            ExtremizerKind::RowR { .. } => "R",
            ExtremizerKind::OnesD { .. } => "D",
            ExtremizerKind::UnitE { .. } => "E",
        }
    }

    /// The five constructions with unit constants and first-position indices.
    pub fn standard(eta: f64) -> [ExtremizerKind; 5] {
        let one = Complex64::new(1.0, 0.0);
        [
            ExtremizerKind::ChirpB { eta },
            ExtremizerKind::ColumnC { col: 0, value: one },
            ExtremizerKind::RowR { row: 0, value: one },
            ExtremizerKind::OnesD { value: one },
            ExtremizerKind::UnitE {
                row: 0,
                col: 0,
                value: one,
            },
        ]
    }
}

fn check_index(row: usize, col: usize, rows: usize, cols: usize) -> Result<()> {
    if row >= rows || col >= cols {
        return Err(Error::IndexOutOfRange {
            row,
            col,
            rows,
            cols,
        });
    }
    Ok(())
}

fn check_value(value: Complex64) -> Result<()> {
    if value.norm() == 0.0 || !value.norm().is_finite() {
        return Err(Error::InvalidParameter(format!(
            "extremizer constant must be finite and nonzero, got {value}"
        )));
    }
    Ok(())
}

fn check_eta(eta: f64) -> Result<()> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "eta must lie in (0, 1), got {eta}"
        )));
    }
    Ok(())
}

/// Builds the `rows × cols` extremizer.
pub fn build(kind: &ExtremizerKind, rows: usize, cols: usize) -> Result<CoefficientMatrix> {
    let zero = Complex64::new(0.0, 0.0);
    match *kind {
        ExtremizerKind::ChirpB { eta } => {
            check_eta(eta)?;
            let (m, n) = (rows as f64, cols as f64);
            CoefficientMatrix::from_fn(rows, cols, |j, k| {
                let (j, k) = (j as f64, k as f64);
                // e^{-(π/2)ηi(...)} = e^{2πi·(-(η/4)(...))}
                unit_phase(-0.25 * eta * (j * j / m + k * k / n))
            })
        }
        ExtremizerKind::ColumnC { col, value } => {
            check_index(0, col, rows, cols)?;
            check_value(value)?;
            CoefficientMatrix::from_fn(rows, cols, |_, k| if k == col { value } else { zero })
        }
        ExtremizerKind::RowR { row, value } => {
            check_index(row, 0, rows, cols)?;
            check_value(value)?;
            CoefficientMatrix::from_fn(rows, cols, |j, _| if j == row { value } else { zero })
        }
        ExtremizerKind::OnesD { value } => {
            check_value(value)?;
            CoefficientMatrix::from_fn(rows, cols, |_, _| value)
        }
        ExtremizerKind::UnitE { row, col, value } => {
            check_index(row, col, rows, cols)?;
            check_value(value)?;
            CoefficientMatrix::from_fn(
                rows,
                cols,
                |j, k| {
                    if (j, k) == (row, col) {
                        value
                    } else {
                        zero
                    }
                },
            )
        }
    }
}

/// Parameters of the one-dimensional chirp sum
/// `Σ_{m<M} e^{2πi m(x - (η/4)(m/M))}` with `x ∈ [η, 1-η]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChirpParams {
    len: usize,
    eta: f64,
    x: f64,
}

impl ChirpParams {
    pub fn new(len: usize, eta: f64, x: f64) -> Result<Self> {
        if len == 0 {
            return Err(Error::InvalidParameter(
                "chirp length must be positive".into(),
            ));
        }
        check_eta(eta)?;
        if !(x >= eta && x <= 1.0 - eta) {
            return Err(Error::InvalidParameter(format!(
                "x={x} outside [eta, 1-eta] = [{eta}, {}]",
                1.0 - eta
            )));
        }
        Ok(Self { len, eta, x })
    }

    pub fn len(&self) -> usize {
        self.len
    }
    pub fn eta(&self) -> f64 {
        self.eta
    }
    pub fn x(&self) -> f64 {
        self.x
    }
}

/// The chirp sum at any `x`, without the range restriction.
pub fn chirp_sum_raw(len: usize, eta: f64, x: f64) -> Complex64 {
    let quarter = 0.25 * eta / len as f64;
    (0..len)
        .map(|m| {
            let mf = m as f64;
            // Each part reduced mod 1 separately to keep the phase accurate.
            let linear = mf * x;
            let quad = quarter * (mf * mf);
            unit_phase((linear - linear.round()) - (quad - quad.round()))
        })
        .collect::<ComplexSum>()
        .value()
}

/// `Σ_{m=0}^{M-1} e^{2πi m(x - (η/4)(m/M))}`, summed directly with
/// compensation.
pub fn chirp_sum(params: &ChirpParams) -> Complex64 {
    chirp_sum_raw(params.len, params.eta, params.x)
}

/// The closed-form stationary-phase term
/// `√(2/η) e^{-iπ/4} e^{2πiMx²/η} √M`.
pub fn chirp_main_term(params: &ChirpParams) -> Complex64 {
    let m = params.len as f64;
    let modulus = (2.0 * m / params.eta).sqrt();
    let phase = m * params.x * params.x / params.eta - 0.125;
    unit_phase(phase) * modulus
}

/// One ladder rung of the chirp residual sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChirpRow {
    #[serde(rename = "M")]
    pub len: usize,
    /// `max_x |chirp_sum - chirp_main_term|`.
    pub max_residual: f64,
    /// `min_x |chirp_sum| / √M`.
    pub min_normalized: f64,
    /// `max_x |chirp_sum| / √M`.
    pub max_normalized: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChirpSweep {
    pub eta: f64,
    pub xs: Vec<f64>,
    pub rows: Vec<ChirpRow>,
    /// Least-squares slope of `ln max_residual` against `ln M`.
    pub slope: f64,
    /// `√(2/η)`, the modulus of the main term divided by `√M`.
    pub target_modulus: f64,
}

impl ChirpSweep {
    /// Largest relative deviation of `|chirp_sum|/√M` from `√(2/η)` at the
    /// largest `M`.
    pub fn modulus_deviation_at_largest(&self) -> f64 {
        let last = self.rows.last().expect("non-empty sweep");
        let t = self.target_modulus;
        ((last.min_normalized - t).abs()).max((last.max_normalized - t).abs()) / t
    }
}

/// Least-squares slope of `ys` against `xs`.
pub fn fit_slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Residuals of the chirp approximation over `xs` for each length in `ladder`.
pub fn chirp_residual_sweep(eta: f64, ladder: &[usize], xs: &[f64]) -> Result<ChirpSweep> {
    if ladder.len() < 2 || xs.is_empty() {
        return Err(Error::InvalidParameter(
            "chirp sweep needs at least two lengths and one x".into(),
        ));
    }
    let rows = ladder
        .iter()
        .map(|&len| {
            let mut row = ChirpRow {
                len,
                max_residual: 0.0,
                min_normalized: f64::INFINITY,
                max_normalized: 0.0,
            };
            for &x in xs {
                let params = ChirpParams::new(len, eta, x)?;
                let sum = chirp_sum(&params);
                let norm = sum.norm() / (len as f64).sqrt();
                row.max_residual = row
                    .max_residual
                    .max((sum - chirp_main_term(&params)).norm());
                row.min_normalized = row.min_normalized.min(norm);
                row.max_normalized = row.max_normalized.max(norm);
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    let log_m: Vec<f64> = rows.iter().map(|r| (r.len as f64).ln()).collect();
    let log_r: Vec<f64> = rows.iter().map(|r| r.max_residual.ln()).collect();
    Ok(ChirpSweep {
        eta,
        xs: xs.to_vec(),
        slope: fit_slope(&log_m, &log_r),
        target_modulus: (2.0 / eta).sqrt(),
        rows,
    })
}

/// The common report record for extremizer checks.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExtremizerReport {
    pub kind: String,
    #[serde(rename = "M")]
    pub rows: usize,
    #[serde(rename = "N")]
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub eta: Option<f64>,
    pub exponents: MixedExponents,
    /// Certified lower bound on `‖T A‖_{L^{r,s}} / ‖A‖_{l^{p,q}}`.
    pub lower: f64,
    pub upper: f64,
    /// `lower / upper`.
    pub ratio: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub residual: Option<f64>,
    /// Grid estimate of the same operator ratio, when requested.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub measured: Option<f64>,
}

/// Output of [`verify_chirp_lower`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChirpLowerReport {
    #[serde(rename = "M")]
    pub rows: usize,
    #[serde(rename = "N")]
    pub cols: usize,
    pub eta: f64,
    pub grid: usize,
    /// `min |T B| / √(MN)` over the grid on `[η, 1-η]²`.
    pub min_ratio: f64,
    /// Largest relative gap between direct evaluation of `T B` and the
    /// product of the two chirp sums, over the probe points.
    pub factorization_error: f64,
    pub report: ExtremizerReport,
}

/// `|T B|` on a `grid × grid` lattice over `[η, 1-η]²` through the product of
/// one-dimensional chirp sums, normalised by `√(MN)`.
///
/// The implied bound `‖T B‖_{L^{r,s}} ≥ min|T B| · (1-2η)^{1/r+1/s}` is
/// divided by `‖B‖_{l^{p,q}} = M^{1/p} N^{1/q}` and reported against the
/// upper bound.
pub fn verify_chirp_lower(
    rows: usize,
    cols: usize,
    eta: f64,
    grid: usize,
    e: &MixedExponents,
) -> Result<ChirpLowerReport> {
    check_eta(eta)?;
    if grid < 2 || rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(
            "need positive dimensions and at least a 2-point grid".into(),
        ));
    }
    if eta > 0.5 {
        return Err(Error::InvalidParameter(format!(
            "[eta, 1-eta] is empty for eta={eta}"
        )));
    }
    let points: Vec<f64> = (0..grid)
        .map(|i| eta + (1.0 - 2.0 * eta) * i as f64 / (grid - 1) as f64)
        .collect();
    let along_x: Vec<Complex64> = points
        .iter()
        .map(|&x| chirp_sum_raw(rows, eta, x))
        .collect();
    let along_y: Vec<Complex64> = points
        .iter()
        .map(|&y| chirp_sum_raw(cols, eta, y))
        .collect();
    let min_modulus = along_x
        .iter()
        .map(|z| z.norm())
        .fold(f64::INFINITY, f64::min)
        * along_y
            .iter()
            .map(|z| z.norm())
            .fold(f64::INFINITY, f64::min);
    let root = ((rows * cols) as f64).sqrt();

    // Direct evaluation at a few lattice points pins the factorization.
    let b = build(&ExtremizerKind::ChirpB { eta }, rows, cols)?;
    let probes = [
        (0, 0),
        (grid - 1, grid - 1),
        (grid / 2, grid / 3),
        (grid / 3, grid - 1),
    ];
    let factorization_error = probes
        .iter()
        .map(|&(i, k)| {
            let direct = eval_sum_at(&b, points[i], points[k], FrequencyScale::TwoPi);
            let product = along_x[i] * along_y[k];
            (direct - product).norm() / product.norm().max(1.0)
        })
        .fold(0.0, f64::max);

    let upper = upper_bound_magnitude(rows, cols, e)?;
    let measure = (1.0 - 2.0 * eta).powf(e.gamma() + e.delta());
    let lower = min_modulus * measure / lpq_norm(&b, e);
    Ok(ChirpLowerReport {
        rows,
        cols,
        eta,
        grid,
        min_ratio: min_modulus / root,
        factorization_error,
        report: ExtremizerReport {
            kind: "B".into(),
            rows,
            cols,
            eta: Some(eta),
            exponents: *e,
            lower,
            upper,
            ratio: lower / upper,
            residual: None,
            measured: None,
        },
    })
}

/// Which Dirichlet-kernel extremizer to certify.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DirichletKind {
    Column,
    Row,
    Ones,
}

impl DirichletKind {
    pub fn name(self) -> &'static str {
        match self {
            DirichletKind::Column => "C",
            DirichletKind::Row => "R",
            DirichletKind::Ones => "D",
        }
    }

    fn extremizer(self) -> ExtremizerKind {
        let one = Complex64::new(1.0, 0.0);
        match self {
            DirichletKind::Column => ExtremizerKind::ColumnC { col: 0, value: one },
            DirichletKind::Row => ExtremizerKind::RowR { row: 0, value: one },
            DirichletKind::Ones => ExtremizerKind::OnesD { value: one },
        }
    }
}

/// Sample points `0, …, 1/(πM)`: both endpoints and
/// [`DIRICHLET_SAMPLES`] interior points.
pub fn dirichlet_sample_points(len: usize) -> Vec<f64> {
    let end = 1.0 / (PI * len as f64);
    let steps = DIRICHLET_SAMPLES + 1;
    (0..=steps)
        .map(|i| {
            if i == steps {
                end
            } else {
                end * i as f64 / steps as f64
            }
        })
        .collect()
}

/// Checks `sin(πMx)/sin(πx) ≥ sin(1)·M` at every sample point of
/// `[0, 1/(πM)]`, without tolerance.
pub fn check_dirichlet_inequality(len: usize) -> Result<()> {
    let bound = 1f64.sin() * len as f64;
    for x in dirichlet_sample_points(len) {
        let quotient = dirichlet_quotient(len, x);
        if !(quotient >= bound) {
            return Err(Error::DirichletCheck { x, quotient, bound });
        }
    }
    Ok(())
}

/// Certified lower bound on `‖T K‖_{L^{r,s}} / ‖K‖_{l^{p,q}}` for the
/// column, row, or all-ones matrix `K`:
///
/// * column: `sin(1)/π^{1/r} · M^{1-1/r-1/p}`
/// * row: `sin(1)/π^{1/s} · N^{1-1/s-1/q}`
/// * ones: `sin²(1)/π^{1/r+1/s} · M^{1-1/r-1/p} N^{1-1/s-1/q}`
pub fn dirichlet_lower_bound(
    kind: DirichletKind,
    rows: usize,
    cols: usize,
    e: &MixedExponents,
) -> f64 {
    let s1 = 1f64.sin();
    let x_part =
        |len: usize| s1 / PI.powf(e.gamma()) * (len as f64).powf(1.0 - e.gamma() - e.alpha());
    let y_part =
        |len: usize| s1 / PI.powf(e.delta()) * (len as f64).powf(1.0 - e.delta() - e.beta());
    match kind {
        DirichletKind::Column => x_part(rows),
        DirichletKind::Row => y_part(cols),
        DirichletKind::Ones => x_part(rows) * y_part(cols),
    }
}

/// Samples the Dirichlet inequality for the kernels involved, then reports
/// the certified lower bound against `upper_bound_magnitude`. With `measure`
/// set, also evaluates the operator ratio on a grid.
pub fn verify_dirichlet_lower(
    kind: DirichletKind,
    rows: usize,
    cols: usize,
    e: &MixedExponents,
    measure: Option<&QuadratureSpec>,
) -> Result<ExtremizerReport> {
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(
            "dimensions must be positive".into(),
        ));
    }
    match kind {
        DirichletKind::Column => check_dirichlet_inequality(rows)?,
        DirichletKind::Row => check_dirichlet_inequality(cols)?,
        DirichletKind::Ones => {
            check_dirichlet_inequality(rows)?;
            check_dirichlet_inequality(cols)?;
        }
    }
    let lower = dirichlet_lower_bound(kind, rows, cols, e);
    let upper = upper_bound_magnitude(rows, cols, e)?;
    if lower > upper * (1.0 + 1e-12) {
        return Err(Error::Invariant(format!(
            "certified lower bound {lower} exceeds upper bound {upper} for {} at {e}",
            kind.name()
        )));
    }
    let measured = match measure {
        Some(spec) => Some(objective(&build(&kind.extremizer(), rows, cols)?, e, spec)?),
        None => None,
    };
    Ok(ExtremizerReport {
        kind: kind.name().into(),
        rows,
        cols,
        eta: None,
        exponents: *e,
        lower,
        upper,
        ratio: lower / upper,
        residual: None,
        measured,
    })
}

/// Norms of `T E` and `E` for a single-entry matrix.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UnitSharpness {
    pub row: usize,
    pub col: usize,
    pub value: Complex64,
    pub lrs: f64,
    pub lpq: f64,
    pub ratio: f64,
    pub report: ExtremizerReport,
}

/// Grid check that `‖T E‖_{L^{r,s}} = ‖E‖_{l^{p,q}} = |value|` for a single
/// entry at `(row, col)`.
pub fn unit_sharpness(
    rows: usize,
    cols: usize,
    row: usize,
    col: usize,
    value: Complex64,
    e: &MixedExponents,
    spec: &QuadratureSpec,
) -> Result<UnitSharpness> {
    let unit = build(&ExtremizerKind::UnitE { row, col, value }, rows, cols)?;
    let (kx, ky) = spec.grid_for(rows, cols);
    let grid = crate::trigsum::eval_sum(&unit, &crate::trigsum::EvalPlan::transform(kx, ky))?;
    let lrs = crate::norms::lrs_norm(&grid, e, spec).value;
    let lpq = lpq_norm(&unit, e);
    let upper = upper_bound_magnitude(rows, cols, e)?;
    Ok(UnitSharpness {
        row,
        col,
        value,
        lrs,
        lpq,
        ratio: lrs / lpq,
        report: ExtremizerReport {
            kind: "E".into(),
            rows,
            cols,
            eta: None,
            exponents: *e,
            lower: 1.0,
            upper,
            ratio: 1.0 / upper,
            residual: None,
            measured: Some(lrs / lpq),
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ex(a: f64, b: f64, g: f64, d: f64) -> MixedExponents {
        MixedExponents::new(a, b, g, d).unwrap()
    }

    #[test]
    fn chirp_matrix_entries() {
        let b = build(&ExtremizerKind::ChirpB { eta: 0.2 }, 4, 4).unwrap();
        assert_eq!(b.get(0, 0), Complex64::new(1.0, 0.0));
        let want = Complex64::cis(-PI / 40.0);
        assert!((b.get(1, 0) - want).norm() < 1e-15);
        let want = Complex64::cis(-PI / 2.0 * 0.2 * (9.0 / 4.0 + 4.0 / 4.0));
        assert!((b.get(3, 2) - want).norm() < 1e-14);
        for z in b.entries() {
            assert_relative_eq!(z.norm(), 1.0, max_relative = 1e-15);
        }
        for e in [
            ex(0.3, 0.7, 0.0, 0.0),
            ex(0.0, 1.0, 0.0, 0.0),
            ex(0.5, 0.5, 0.0, 0.0),
        ] {
            let want = 4f64.powf(e.alpha()) * 4f64.powf(e.beta());
            assert_relative_eq!(lpq_norm(&b, &e), want, max_relative = 1e-14);
        }
    }

    #[test]
    fn unit_matrix_norm_is_modulus() {
        let c = Complex64::new(0.0, 3.0);
        let e_mat = build(
            &ExtremizerKind::UnitE {
                row: 2,
                col: 1,
                value: c,
            },
            3,
            4,
        )
        .unwrap();
        assert_eq!(e_mat.entries().iter().filter(|z| z.norm() > 0.0).count(), 1);
        assert_eq!(lpq_norm(&e_mat, &ex(0.2, 0.9, 0.0, 0.0)), 3.0);
    }

    #[test]
    fn build_rejects_bad_input() {
        let one = Complex64::new(1.0, 0.0);
        assert!(matches!(
            build(&ExtremizerKind::ColumnC { col: 4, value: one }, 3, 4),
            Err(Error::IndexOutOfRange { .. })
        ));
        assert!(build(&ExtremizerKind::RowR { row: 3, value: one }, 3, 4).is_err());
        assert!(build(
            &ExtremizerKind::UnitE {
                row: 0,
                col: 0,
                value: Complex64::new(0.0, 0.0)
            },
            3,
            4
        )
        .is_err());
        assert!(build(&ExtremizerKind::ChirpB { eta: 1.0 }, 3, 4).is_err());
    }

    #[test]
    fn chirp_sum_small_cases() {
        let p = ChirpParams::new(1, 0.3, 0.5).unwrap();
        assert_eq!(chirp_sum(&p), Complex64::new(1.0, 0.0));

        let p = ChirpParams::new(2, 0.25, 0.25).unwrap();
        let want = Complex64::new(1.0, 0.0) + Complex64::cis(2.0 * PI * (0.25 - 0.0625 / 2.0));
        assert!((chirp_sum(&p) - want).norm() < 1e-15);
    }

    #[test]
    fn chirp_params_validation() {
        assert!(ChirpParams::new(8, 0.2, 0.1).is_err());
        assert!(ChirpParams::new(8, 0.2, 0.81).is_err());
        assert!(ChirpParams::new(8, 0.0, 0.5).is_err());
        assert!(ChirpParams::new(0, 0.2, 0.5).is_err());
        assert!(ChirpParams::new(8, 0.2, 0.8).is_ok());
    }

    #[test]
    fn main_term_modulus() {
        let p = ChirpParams::new(4096, 0.2, 0.37).unwrap();
        assert_relative_eq!(
            chirp_main_term(&p).norm(),
            10f64.sqrt() * 64.0,
            max_relative = 1e-14
        );
        let p = ChirpParams::new(1, 0.5, 0.5).unwrap();
        assert_relative_eq!(chirp_main_term(&p).norm(), 2.0, max_relative = 1e-15);
        // Phase at M=1, η=0.5, x=0.5: e^{-iπ/4} e^{iπ}.
        let want = Complex64::cis(-PI / 4.0 + PI) * 2.0;
        assert!((chirp_main_term(&p) - want).norm() < 1e-14);
    }

    #[test]
    fn chirp_sum_matches_naive_evaluation() {
        for &(len, eta, x) in &[(37, 0.2, 0.3), (500, 0.1, 0.85), (1024, 0.4, 0.5)] {
            let p = ChirpParams::new(len, eta, x).unwrap();
            let naive: Complex64 = (0..len)
                .map(|m| {
                    let m = m as f64;
                    Complex64::cis(2.0 * PI * m * (x - eta / 4.0 * m / len as f64))
                })
                .sum();
            assert!((chirp_sum(&p) - naive).norm() < 1e-9 * len as f64);
        }
    }

    #[test]
    fn chirp_sum_obeys_kuzmin_landau_bound() {
        // The phase derivative x - ηm/(2M) stays in [η/2, 1-η], at distance at
        // least η/2 from the integers, so |Σ| ≤ cot(πη/4).
        let eta = 0.2;
        let bound = 1.0 / (PI * eta / 4.0).tan();
        for len in [1024, 4096, 16384] {
            for x in [0.2, 0.35, 0.5, 0.65, 0.8] {
                let p = ChirpParams::new(len, eta, x).unwrap();
                assert!(chirp_sum(&p).norm() <= bound, "M={len} x={x}");
            }
        }
    }

    #[test]
    fn chirp_lower_factorizes() {
        let e = ex(0.5, 0.5, 0.5, 0.5);
        let rep = verify_chirp_lower(1, 1, 0.2, 4, &e).unwrap();
        assert_relative_eq!(rep.min_ratio, 1.0, max_relative = 1e-15);
        let rep = verify_chirp_lower(64, 48, 0.2, 9, &e).unwrap();
        assert!(
            rep.factorization_error <= 1e-10,
            "{}",
            rep.factorization_error
        );
        assert!(rep.report.lower <= rep.report.upper);
        assert!(verify_chirp_lower(8, 8, 0.6, 4, &e).is_err());
    }

    #[test]
    fn dirichlet_inequality_for_column_of_eight() {
        check_dirichlet_inequality(8).unwrap();
        let bound = 1f64.sin() * 8.0;
        assert_relative_eq!(bound, 6.731767878463172, max_relative = 1e-15);
        let pts = dirichlet_sample_points(8);
        assert_eq!(pts.len(), DIRICHLET_SAMPLES + 2);
        assert_eq!(pts[0], 0.0);
        assert_eq!(*pts.last().unwrap(), 1.0 / (8.0 * PI));
        for x in pts {
            assert!(dirichlet_quotient(8, x) >= bound);
        }
    }

    #[test]
    fn ones_report_records_both_constants() {
        let e = ex(1.0, 1.0, 0.0, 0.0);
        let spec = QuadratureSpec::default();
        let rep = verify_dirichlet_lower(DirichletKind::Ones, 5, 3, &e, Some(&spec)).unwrap();
        assert_relative_eq!(rep.lower, 1f64.sin().powi(2), max_relative = 1e-14);
        assert_relative_eq!(rep.measured.unwrap(), 1.0, max_relative = 1e-12);
        assert_relative_eq!(rep.upper, 1.0, max_relative = 1e-14);
    }

    #[test]
    fn row_bound_formula() {
        // N = 8, s = 1: sin(1)/π · 8^{-1/q}.
        let e = ex(0.3, 0.25, 0.6, 1.0);
        let rep = verify_dirichlet_lower(DirichletKind::Row, 3, 8, &e, None).unwrap();
        assert_relative_eq!(
            rep.lower,
            1f64.sin() / PI * 8f64.powf(-0.25),
            max_relative = 1e-14
        );
    }

    #[test]
    fn certified_bounds_stay_below_upper() {
        let grid = [0.0, 0.2, 0.5, 0.8, 1.0];
        for &a in &grid {
            for &b in &grid {
                for &g in &grid {
                    for &d in &grid {
                        let e = ex(a, b, g, d);
                        for kind in [
                            DirichletKind::Column,
                            DirichletKind::Row,
                            DirichletKind::Ones,
                        ] {
                            verify_dirichlet_lower(kind, 16, 4, &e, None).unwrap();
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn unit_sharpness_is_exact() {
        let spec = QuadratureSpec::default();
        let e = ex(0.3, 0.9, 0.1, 0.6);
        let out = unit_sharpness(4, 5, 3, 4, Complex64::new(0.0, 3.0), &e, &spec).unwrap();
        assert_relative_eq!(out.lrs, 3.0, max_relative = 1e-12);
        assert_relative_eq!(out.lpq, 3.0, max_relative = 1e-15);
        assert_relative_eq!(out.ratio, 1.0, max_relative = 1e-12);
    }
}
