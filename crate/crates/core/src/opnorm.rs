//! Numerical brackets for the operator norm
//! `C_{M,N}(p,q,r,s) = sup_{A≠0} ‖T A‖_{L^{r,s}} / ‖A‖_{l^{p,q}}`.
//!
//! The search is a multi-start projected ascent on the unit Frobenius sphere
//! of `C^{M×N}` (viewed as `R^{2MN}`), with central finite-difference
//! gradients and step halving. Its result is only ever a lower estimate of
//! the supremum; the certified extremizer bounds and the upper bound
//! `(MN)^Θ/(M^α N^β)` are reported beside it.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::{phi, theta, upper_bound_magnitude, MixedExponents};
use crate::extremizers::{
    build, dirichlet_lower_bound, DirichletKind, ExtremizerKind, DEFAULT_ETA,
};
use crate::norms::{lpq_norm, lrs_norm, CoefficientMatrix, QuadratureSpec};
use crate::random::{gaussian_matrix, real_gaussian_matrix, rng_for};
use crate::trigsum::{eval_sum, EvalPlan};

/// `‖T A‖_{L^{r,s}} / ‖A‖_{l^{p,q}}` with the `L^{r,s}` norm taken on the
/// `spec.oversample`-times refined grid.
pub fn objective(a: &CoefficientMatrix, e: &MixedExponents, spec: &QuadratureSpec) -> Result<f64> {
    if a.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    let (kx, ky) = spec.grid_for(a.rows(), a.cols());
    let grid = eval_sum(a, &EvalPlan::fastest(kx, ky, a))?;
    Ok(lrs_norm(&grid, e, spec).value / lpq_norm(a, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    /// Random starting points (the five extremizers are added on top when
    /// `warm_starts` is set).
    pub restarts: usize,
    pub max_iters: usize,
    /// Initial step on the unit sphere.
    pub step: f64,
    pub seed: u64,
    pub quadrature: QuadratureSpec,
    /// The ascent stops once the step falls below `tol`.
    pub tol: f64,
    pub warm_starts: bool,
    /// Restrict the search to real matrices.
    pub real_only: bool,
    /// η of the chirp warm start.
    pub eta: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            restarts: 8,
            max_iters: 150,
            step: 0.25,
            seed: 0,
            quadrature: QuadratureSpec::default(),
            tol: 1e-6,
            warm_starts: true,
            real_only: false,
            eta: DEFAULT_ETA,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        self.quadrature.validate()?;
        if self.restarts == 0 && !self.warm_starts {
            return Err(Error::InvalidParameter(
                "need at least one restart or warm starts".into(),
            ));
        }
        if !(self.step > 0.0) || !(self.tol > 0.0) {
            return Err(Error::InvalidParameter(
                "step and tol must be positive".into(),
            ));
        }
        Ok(())
    }
}

/// Where an ascent started.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Start {
    Random(usize),
    Extremizer(String),
}

impl std::fmt::Display for Start {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Start::Random(i) => write!(f, "random#{i}"),
            Start::Extremizer(k) => write!(f, "{k}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AscentOutcome {
    pub start: Start,
    pub best: f64,
    pub matrix: CoefficientMatrix,
    /// Objective after each accepted step, starting with the initial value.
    pub history: Vec<f64>,
}

fn to_params(a: &CoefficientMatrix, real_only: bool) -> Vec<f64> {
    if real_only {
        a.entries().iter().map(|z| z.re).collect()
    } else {
        a.entries().iter().flat_map(|z| [z.re, z.im]).collect()
    }
}

fn from_params(x: &[f64], rows: usize, cols: usize, real_only: bool) -> CoefficientMatrix {
    let entries = if real_only {
        x.iter().map(|&re| Complex64::new(re, 0.0)).collect()
    } else {
        x.chunks_exact(2)
            .map(|c| Complex64::new(c[0], c[1]))
            .collect()
    };
    CoefficientMatrix::from_entries(rows, cols, entries).expect("shape preserved")
}

fn normalize(x: &mut [f64]) -> f64 {
    let norm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm > 0.0 {
        x.iter_mut().for_each(|v| *v /= norm);
    }
    norm
}

/// Projected ascent from `start`: normalized finite-difference gradient
/// steps on the unit sphere, accepted only when the objective increases, with
/// the step halved after every rejection.
pub fn ascend(
    start: &CoefficientMatrix,
    label: Start,
    e: &MixedExponents,
    cfg: &SearchConfig,
) -> Result<AscentOutcome> {
    let (rows, cols) = (start.rows(), start.cols());
    let f = |x: &[f64]| {
        objective(
            &from_params(x, rows, cols, cfg.real_only),
            e,
            &cfg.quadrature,
        )
    };

    let mut x = to_params(start, cfg.real_only);
    if normalize(&mut x) == 0.0 {
        return Err(Error::ZeroMatrix);
    }
    let mut fx = f(&x)?;
    let mut history = vec![fx];
    let mut step = cfg.step;
    let mut gradient: Option<Vec<f64>> = None;
    let h = 1e-5;

    for _ in 0..cfg.max_iters {
        if step < cfg.tol {
            break;
        }
        let g = match &gradient {
            Some(g) => g.clone(),
            None => {
                let mut g = vec![0.0; x.len()];
                let mut probe = x.clone();
                for i in 0..x.len() {
                    let orig = probe[i];
                    probe[i] = orig + h;
                    let up = f(&probe)?;
                    probe[i] = orig - h;
                    let down = f(&probe)?;
                    probe[i] = orig;
                    g[i] = (up - down) / (2.0 * h);
                }
                // Drop the radial part; the objective is scale invariant.
                let radial: f64 = g.iter().zip(&x).map(|(a, b)| a * b).sum();
                g.iter_mut().zip(&x).for_each(|(gi, xi)| *gi -= radial * xi);
                if normalize(&mut g) == 0.0 {
                    break;
                }
                gradient = Some(g.clone());
                g
            }
        };
        let mut candidate: Vec<f64> = x.iter().zip(&g).map(|(a, b)| a + step * b).collect();
        if normalize(&mut candidate) == 0.0 {
            step *= 0.5;
            continue;
        }
        let fc = f(&candidate)?;
        if fc > fx {
            x = candidate;
            fx = fc;
            history.push(fx);
            gradient = None;
            step = (step * 1.5).min(1.0);
        } else {
            step *= 0.5;
        }
    }
    Ok(AscentOutcome {
        start: label,
        best: fx,
        matrix: from_params(&x, rows, cols, cfg.real_only),
        history,
    })
}

/// Best certified lower bound on the operator ratio among `E` (exactly 1)
/// and the Dirichlet constructions `C`, `R`, `D`.
pub fn certified_lower(rows: usize, cols: usize, e: &MixedExponents) -> (f64, String) {
    let mut best = (1.0, "E".to_string());
    for kind in [
        DirichletKind::Column,
        DirichletKind::Row,
        DirichletKind::Ones,
    ] {
        let value = dirichlet_lower_bound(kind, rows, cols, e);
        if value > best.0 {
            best = (value, kind.name().to_string());
        }
    }
    best
}

/// Everything known about `C_{M,N}` at one exponent point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    #[serde(rename = "M")]
    pub rows: usize,
    #[serde(rename = "N")]
    pub cols: usize,
    pub exponents: MixedExponents,
    pub theta: f64,
    pub phi: Option<f64>,
    pub upper: f64,
    pub lower_extremizer: f64,
    pub lower_kind: String,
    pub searched: f64,
    pub searched_start: String,
    pub ratio_lower: f64,
    pub ratio_searched: f64,
    /// The search ended below the certified lower bound.
    pub flagged: bool,
    /// `lower ≤ searched·(1+3τ)` and `searched ≤ upper·(1+3τ)` with
    /// `τ = quadrature.rel_tol`.
    pub sandwich_ok: bool,
}

impl BoundReport {
    pub const CSV_HEADER: [&'static str; 13] = [
        "M",
        "N",
        "alpha",
        "beta",
        "gamma",
        "delta",
        "theta",
        "phi_or_blank",
        "upper",
        "lower",
        "searched",
        "ratio_lower",
        "ratio_searched",
    ];

    pub fn csv_record(&self) -> [String; 13] {
        let e = &self.exponents;
        [
            self.rows.to_string(),
            self.cols.to_string(),
            e.alpha().to_string(),
            e.beta().to_string(),
            e.gamma().to_string(),
            e.delta().to_string(),
            self.theta.to_string(),
            self.phi.map(|v| v.to_string()).unwrap_or_default(),
            self.upper.to_string(),
            self.lower_extremizer.to_string(),
            self.searched.to_string(),
            self.ratio_lower.to_string(),
            self.ratio_searched.to_string(),
        ]
    }
}

/// Runs every ascent and assembles the [`BoundReport`].
///
/// Restarts run in parallel; the winner is the largest value, ties going to
/// the earliest start, so the result depends only on `cfg`.
pub fn estimate(
    rows: usize,
    cols: usize,
    e: &MixedExponents,
    cfg: &SearchConfig,
) -> Result<BoundReport> {
    cfg.validate()?;
    if rows == 0 || cols == 0 {
        return Err(Error::InvalidParameter(
            "dimensions must be positive".into(),
        ));
    }
    let mut starts: Vec<(Start, CoefficientMatrix)> = Vec::new();
    if cfg.warm_starts {
        for kind in ExtremizerKind::standard(cfg.eta) {
            let a = build(&kind, rows, cols)?;
            if cfg.real_only && a.entries().iter().any(|z| z.im != 0.0) {
                continue;
            }
            starts.push((Start::Extremizer(kind.name().into()), a));
        }
    }
    for i in 0..cfg.restarts {
        let mut rng = rng_for(cfg.seed, i as u64);
        let a = if cfg.real_only {
            real_gaussian_matrix(rows, cols, &mut rng)
        } else {
            gaussian_matrix(rows, cols, &mut rng)
        };
        starts.push((Start::Random(i), a));
    }

    let outcomes: Vec<AscentOutcome> = starts
        .into_par_iter()
        .map(|(label, a)| ascend(&a, label, e, cfg))
        .collect::<Result<_>>()?;
    let best = outcomes
        .iter()
        .fold(None::<&AscentOutcome>, |acc, o| match acc {
            Some(b) if b.best >= o.best => Some(b),
            _ => Some(o),
        })
        .expect("at least one start");

    let theta = theta(e)?;
    let upper = upper_bound_magnitude(rows, cols, e)?;
    let (lower, lower_kind) = certified_lower(rows, cols, e);
    let slack = 1.0 + 3.0 * cfg.quadrature.rel_tol;
    let searched = best.best;
    Ok(BoundReport {
        rows,
        cols,
        exponents: *e,
        theta,
        phi: phi(e),
        upper,
        lower_extremizer: lower,
        lower_kind,
        searched,
        searched_start: best.start.to_string(),
        ratio_lower: lower / upper,
        ratio_searched: searched / upper,
        flagged: searched < lower,
        sandwich_ok: lower <= searched * slack && searched <= upper * slack,
    })
}

/// `ratio_searched` along one `(M, N)` ladder for one exponent point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LadderDiagnostic {
    pub exponents: MixedExponents,
    pub phi: Option<f64>,
    pub ratios: Vec<f64>,
    /// On Φ's domain with at least three rungs: whether the top three ratios
    /// stay within ±20% of each other. `None` otherwise.
    pub stable: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessSweep {
    pub reports: Vec<BoundReport>,
    pub ladders: Vec<LadderDiagnostic>,
}

/// Estimates every exponent point along the `(M, N)` ladder.
pub fn sharpness_sweep(
    ladder: &[(usize, usize)],
    exponents: &[MixedExponents],
    cfg: &SearchConfig,
) -> Result<SharpnessSweep> {
    let mut reports = Vec::with_capacity(ladder.len() * exponents.len());
    let mut ladders = Vec::with_capacity(exponents.len());
    for e in exponents {
        let mut ratios = Vec::with_capacity(ladder.len());
        for &(rows, cols) in ladder {
            let report = estimate(rows, cols, e, cfg)?;
            ratios.push(report.ratio_searched);
            reports.push(report);
        }
        let phi = phi(e);
        let stable = match (phi, ratios.len()) {
            (Some(_), n) if n >= 3 => {
                let top = &ratios[n - 3..];
                let lo = top.iter().copied().fold(f64::INFINITY, f64::min);
                let hi = top.iter().copied().fold(0.0, f64::max);
                Some(hi <= 1.2 * lo)
            }
            _ => None,
        };
        ladders.push(LadderDiagnostic {
            exponents: *e,
            phi,
            ratios,
            stable,
        });
    }
    Ok(SharpnessSweep { reports, ladders })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn ex(a: f64, b: f64, g: f64, d: f64) -> MixedExponents {
        MixedExponents::new(a, b, g, d).unwrap()
    }

    fn quick() -> SearchConfig {
        SearchConfig {
            restarts: 2,
            max_iters: 20,
            seed: 3,
            ..SearchConfig::default()
        }
    }

    #[test]
    fn objective_examples() {
        let spec = QuadratureSpec::default();
        let one = Complex64::new(1.0, 0.0);
        let unit = build(
            &ExtremizerKind::UnitE {
                row: 1,
                col: 2,
                value: one,
            },
            3,
            4,
        )
        .unwrap();
        assert_relative_eq!(
            objective(&unit, &ex(0.2, 0.4, 0.9, 0.1), &spec).unwrap(),
            1.0,
            max_relative = 1e-12
        );

        let mut rng = rng_for(1, 0);
        let a = gaussian_matrix(4, 3, &mut rng);
        assert_relative_eq!(
            objective(&a, &ex(0.5, 0.5, 0.5, 0.5), &spec).unwrap(),
            1.0,
            max_relative = 1e-9
        );

        let d = build(&ExtremizerKind::OnesD { value: one }, 4, 4).unwrap();
        assert_relative_eq!(
            objective(&d, &ex(1.0, 1.0, 0.0, 0.0), &spec).unwrap(),
            1.0,
            max_relative = 1e-12
        );

        let zero = CoefficientMatrix::zeros(2, 2).unwrap();
        assert!(matches!(
            objective(&zero, &ex(0.5, 0.5, 0.5, 0.5), &spec),
            Err(Error::ZeroMatrix)
        ));
    }

    #[test]
    fn objective_is_scale_invariant() {
        let spec = QuadratureSpec::default();
        let mut rng = rng_for(2, 0);
        let a = gaussian_matrix(3, 3, &mut rng);
        let e = ex(0.7, 0.2, 0.35, 0.0);
        let base = objective(&a, &e, &spec).unwrap();
        for c in [
            Complex64::new(-2.5, 0.0),
            Complex64::new(0.0, 1e-3),
            Complex64::new(7.0, -3.0),
        ] {
            let v = objective(&a.scaled(c), &e, &spec).unwrap();
            assert!((v - base).abs() <= 1e-12 * base);
        }
    }

    #[test]
    fn single_entry_search_is_exact() {
        for e in [
            ex(0.0, 0.0, 0.0, 0.0),
            ex(1.0, 0.3, 0.5, 0.9),
            ex(0.5, 0.5, 0.5, 0.5),
        ] {
            let rep = estimate(1, 1, &e, &quick()).unwrap();
            assert_relative_eq!(rep.searched, 1.0, max_relative = 1e-14);
            assert!(rep.sandwich_ok);
        }
    }

    #[test]
    fn ascent_history_is_monotone() {
        let cfg = quick();
        let mut rng = rng_for(4, 0);
        let a = gaussian_matrix(3, 2, &mut rng);
        let out = ascend(&a, Start::Random(0), &ex(0.8, 0.6, 0.1, 0.3), &cfg).unwrap();
        assert!(out.history.windows(2).all(|w| w[1] > w[0]));
        assert_eq!(out.best, *out.history.last().unwrap());
        assert!(out.history.len() > 1);
    }

    #[test]
    fn estimate_is_deterministic() {
        let e = ex(0.6, 0.3, 0.2, 0.7);
        let a = estimate(3, 2, &e, &quick()).unwrap();
        let b = estimate(3, 2, &e, &quick()).unwrap();
        assert_eq!(a, b);
        assert_eq!(
            serde_json::to_string(&a).unwrap(),
            serde_json::to_string(&b).unwrap()
        );
    }

    #[test]
    fn real_only_search_stays_real() {
        let cfg = SearchConfig {
            real_only: true,
            ..quick()
        };
        let mut rng = rng_for(4, 1);
        let a = real_gaussian_matrix(2, 3, &mut rng);
        let out = ascend(&a, Start::Random(0), &ex(0.5, 0.1, 0.3, 0.3), &cfg).unwrap();
        assert!(out.matrix.entries().iter().all(|z| z.im == 0.0));
        let rep = estimate(2, 3, &ex(0.5, 0.1, 0.3, 0.3), &cfg).unwrap();
        assert!(rep.sandwich_ok);
    }

    #[test]
    fn config_validation() {
        let bad = SearchConfig {
            restarts: 0,
            warm_starts: false,
            ..SearchConfig::default()
        };
        assert!(estimate(2, 2, &ex(0.5, 0.5, 0.5, 0.5), &bad).is_err());
        let bad = SearchConfig {
            step: 0.0,
            ..SearchConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn csv_record_blanks_undefined_phi() {
        let rep = estimate(2, 2, &ex(0.7, 0.3, 0.4, 0.9), &quick()).unwrap();
        assert!(rep.phi.is_none());
        let rec = rep.csv_record();
        assert_eq!(rec[7], "");
        assert_eq!(rec.len(), BoundReport::CSV_HEADER.len());
    }

    #[test]
    fn sweep_flags_stability_only_on_phi_domain() {
        let cfg = SearchConfig {
            restarts: 1,
            max_iters: 5,
            ..SearchConfig::default()
        };
        let ladder = [(1, 1), (2, 2), (3, 3)];
        let out = sharpness_sweep(
            &ladder,
            &[ex(0.5, 0.5, 0.5, 0.5), ex(0.7, 0.3, 0.4, 0.9)],
            &cfg,
        )
        .unwrap();
        assert_eq!(out.reports.len(), 6);
        assert_eq!(out.ladders[0].stable, Some(true));
        assert_eq!(out.ladders[1].stable, None);
    }
}
