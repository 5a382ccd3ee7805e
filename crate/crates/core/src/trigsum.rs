//! Evaluation of the truncated double trigonometric sum
//!
//! ```text
//! S(x, y) = Σ_n Σ_m a_{mn} e^{2πi((m-1)x + (n-1)y)}
//! ```
//!
//! on uniform grids, either directly or through a zero-padded inverse DFT,
//! and of its non-orthogonal counterpart `V` whose frequencies are the
//! integers themselves, `e^{i((m-1)x + (n-1)y)}`.

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::MixedExponents;
use crate::norms::{lpq_norm, lrs_norm, CoefficientMatrix, GridFunction, QuadratureSpec};
use crate::random::{gaussian_matrix, rng_for};
use crate::sum::{unit_phase, ComplexSum};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum EvalPath {
    Direct,
    ZeroPadTransform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FrequencyScale {
    /// `e^{2πi((m-1)x + (n-1)y)}`, 1-periodic and orthonormal on `[0,1]²`.
    TwoPi,
    /// `e^{i((m-1)x + (n-1)y)}`.
    One,
}

/// Output grid and evaluation strategy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalPlan {
    pub kx: usize,
    pub ky: usize,
    pub path: EvalPath,
    pub frequency_scale: FrequencyScale,
}

impl EvalPlan {
    pub fn direct(kx: usize, ky: usize) -> Self {
        Self {
            kx,
            ky,
            path: EvalPath::Direct,
            frequency_scale: FrequencyScale::TwoPi,
        }
    }

    pub fn transform(kx: usize, ky: usize) -> Self {
        Self {
            kx,
            ky,
            path: EvalPath::ZeroPadTransform,
            frequency_scale: FrequencyScale::TwoPi,
        }
    }

    pub fn nonortho(kx: usize, ky: usize) -> Self {
        Self {
            kx,
            ky,
            path: EvalPath::Direct,
            frequency_scale: FrequencyScale::One,
        }
    }

    /// The transform path when the grid can hold the spectrum, else direct.
    pub fn fastest(kx: usize, ky: usize, a: &CoefficientMatrix) -> Self {
        if kx >= a.rows() && ky >= a.cols() {
            Self::transform(kx, ky)
        } else {
            Self::direct(kx, ky)
        }
    }

    fn validate(&self, a: &CoefficientMatrix) -> Result<()> {
        if self.kx == 0 || self.ky == 0 {
            return Err(Error::DimensionMismatch(format!(
                "grid must be non-empty, got {}x{}",
                self.kx, self.ky
            )));
        }
        if self.path == EvalPath::ZeroPadTransform && (self.kx < a.rows() || self.ky < a.cols()) {
            return Err(Error::DimensionMismatch(format!(
                "zero-padded transform needs a grid of at least {}x{}, got {}x{}",
                a.rows(),
                a.cols(),
                self.kx,
                self.ky
            )));
        }
        Ok(())
    }
}

/// Samples of `S = T A` on the plan's grid (`x_j = j/Kx`, `y_k = k/Ky`).
pub fn eval_sum(a: &CoefficientMatrix, plan: &EvalPlan) -> Result<GridFunction> {
    if plan.frequency_scale != FrequencyScale::TwoPi {
        return Err(Error::InvalidParameter(
            "eval_sum evaluates the 2π-scaled sum; use eval_nonortho".into(),
        ));
    }
    plan.validate(a)?;
    match plan.path {
        EvalPath::Direct => {
            // Twiddles indexed by (m·j mod K) stay exact for any grid size.
            let roots = |k: usize| -> Vec<Complex64> {
                (0..k).map(|t| unit_phase(t as f64 / k as f64)).collect()
            };
            let (wx, wy) = (roots(plan.kx), roots(plan.ky));
            let (kx, ky) = (plan.kx, plan.ky);
            separable_direct(a, kx, ky, |m, j| wx[(m * j) % kx], |n, k| wy[(n * k) % ky])
        }
        EvalPath::ZeroPadTransform => zero_pad_transform(a, plan.kx, plan.ky),
    }
}

/// Samples of `V(x, y) = Σ a_{mn} e^{i((m-1)x + (n-1)y)}` on the uniform grid
/// over `[0,1)²`. Only direct evaluation is offered: the frequencies are not
/// commensurate with the grid.
pub fn eval_nonortho(a: &CoefficientMatrix, plan: &EvalPlan) -> Result<GridFunction> {
    if plan.frequency_scale != FrequencyScale::One || plan.path != EvalPath::Direct {
        return Err(Error::InvalidParameter(
            "eval_nonortho needs a direct plan with unit frequency scale".into(),
        ));
    }
    plan.validate(a)?;
    let (kx, ky) = (plan.kx as f64, plan.ky as f64);
    separable_direct(
        a,
        plan.kx,
        plan.ky,
        |m, j| Complex64::cis(m as f64 * j as f64 / kx),
        |n, k| Complex64::cis(n as f64 * k as f64 / ky),
    )
}

fn separable_direct<FX, FY>(
    a: &CoefficientMatrix,
    kx: usize,
    ky: usize,
    wx: FX,
    wy: FY,
) -> Result<GridFunction>
where
    FX: Fn(usize, usize) -> Complex64 + Sync,
    FY: Fn(usize, usize) -> Complex64 + Sync,
{
    let (rows, cols) = (a.rows(), a.cols());
    let samples: Vec<Complex64> = (0..kx)
        .into_par_iter()
        .flat_map_iter(|j| {
            // Partial sums over m at x_j, one per column n.
            let partial: Vec<Complex64> = (0..cols)
                .map(|n| {
                    (0..rows)
                        .map(|m| a.get(m, n) * wx(m, j))
                        .collect::<ComplexSum>()
                        .value()
                })
                .collect();
            let wy = &wy;
            (0..ky).map(move |k| {
                partial
                    .iter()
                    .enumerate()
                    .map(|(n, b)| b * wy(n, k))
                    .collect::<ComplexSum>()
                    .value()
            })
        })
        .collect();
    GridFunction::from_samples(kx, ky, samples)
}

fn zero_pad_transform(a: &CoefficientMatrix, kx: usize, ky: usize) -> Result<GridFunction> {
    let mut buf = vec![Complex64::new(0.0, 0.0); kx * ky];
    for m in 0..a.rows() {
        for n in 0..a.cols() {
            buf[m * ky + n] = a.get(m, n);
        }
    }
    // rustfft's inverse transform is Σ_t x_t e^{+2πi t u / K}, unnormalized,
    // which is exactly the sum evaluated at u/K.
    let mut planner = FftPlanner::new();
    let along_y = planner.plan_fft_inverse(ky);
    along_y.process(&mut buf);

    let along_x = planner.plan_fft_inverse(kx);
    let mut column = vec![Complex64::new(0.0, 0.0); kx];
    for k in 0..ky {
        for (j, z) in column.iter_mut().enumerate() {
            *z = buf[j * ky + k];
        }
        along_x.process(&mut column);
        for (j, z) in column.iter().enumerate() {
            buf[j * ky + k] = *z;
        }
    }
    GridFunction::from_samples(kx, ky, buf)
}

/// Direct evaluation at one point, for any real `(x, y)`.
pub fn eval_sum_at(a: &CoefficientMatrix, x: f64, y: f64, scale: FrequencyScale) -> Complex64 {
    let phase = |freq: usize, t: f64| match scale {
        FrequencyScale::TwoPi => unit_phase(freq as f64 * t),
        FrequencyScale::One => Complex64::cis(freq as f64 * t),
    };
    let ex: Vec<Complex64> = (0..a.rows()).map(|m| phase(m, x)).collect();
    (0..a.cols())
        .map(|n| {
            let inner = (0..a.rows())
                .map(|m| a.get(m, n) * ex[m])
                .collect::<ComplexSum>()
                .value();
            inner * phase(n, y)
        })
        .collect::<ComplexSum>()
        .value()
}

/// `Σ_{m<M} e^{2πimx} = e^{πi(M-1)x} sin(πMx)/sin(πx)`, the quotient taking
/// its limit `±M` where `sin(πx) = 0`.
pub fn dirichlet_kernel(len: usize, x: f64) -> Complex64 {
    unit_phase((len as f64 - 1.0) * x / 2.0) * dirichlet_quotient(len, x)
}

/// `sin(πMx)/sin(πx)`, with the removable singularities filled in.
pub fn dirichlet_quotient(len: usize, x: f64) -> f64 {
    let m = len as f64;
    let den = (std::f64::consts::PI * x).sin();
    if den.abs() < 1e-300 || x.fract() == 0.0 {
        // At integer x the quotient tends to M·cos(πMx)/cos(πx) = ±M.
        let parity = if (x.round() as i64 * (len as i64 - 1)) % 2 == 0 {
            1.0
        } else {
            -1.0
        };
        return parity * m;
    }
    (std::f64::consts::PI * m * x).sin() / den
}

/// One row of the non-orthogonal ratio sweep.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonorthoRow {
    pub size: usize,
    pub samples: usize,
    pub max_ratio: f64,
    pub mean_ratio: f64,
}

/// Ratios `‖V‖_{L^{2,2}} / ‖A‖_{l^{2,2}}` over random Gaussian matrices.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonorthoSweep {
    pub rows: Vec<NonorthoRow>,
    /// Largest ratio seen at any size.
    pub empirical_constant: f64,
    /// `max_ratio(largest) / max_ratio(second largest) - 1`, if two sizes ran.
    pub last_growth: Option<f64>,
}

/// For each `M = N` in `sizes`, evaluates `V` for `samples` random complex
/// Gaussian matrices on a `(oversample·M)²` grid.
pub fn nonortho_ratio_sweep(
    sizes: &[usize],
    samples: usize,
    oversample: usize,
    seed: u64,
) -> Result<NonorthoSweep> {
    if samples == 0 || oversample == 0 || sizes.contains(&0) {
        return Err(Error::InvalidParameter(
            "sizes, samples and oversample must be positive".into(),
        ));
    }
    let l22 = MixedExponents::new(0.5, 0.5, 0.5, 0.5)?;
    let spec = QuadratureSpec::default();
    let mut rows = Vec::with_capacity(sizes.len());
    for (idx, &size) in sizes.iter().enumerate() {
        let k = oversample * size;
        let ratios: Vec<f64> = (0..samples)
            .into_par_iter()
            .map(|i| {
                let mut rng = rng_for(seed, ((idx as u64) << 32) | i as u64);
                let a = gaussian_matrix(size, size, &mut rng);
                let v = eval_nonortho(&a, &EvalPlan::nonortho(k, k))?;
                Ok(lrs_norm(&v, &l22, &spec).value / lpq_norm(&a, &l22))
            })
            .collect::<Result<_>>()?;
        let max_ratio = ratios.iter().copied().fold(0.0, f64::max);
        let mean_ratio = crate::sum::sum(ratios.iter().copied()) / samples as f64;
        rows.push(NonorthoRow {
            size,
            samples,
            max_ratio,
            mean_ratio,
        });
    }
    let empirical_constant = rows.iter().map(|r| r.max_ratio).fold(0.0, f64::max);
    let last_growth = match rows.as_slice() {
        [.., prev, last] => Some(last.max_ratio / prev.max_ratio - 1.0),
        _ => None,
    };
    Ok(NonorthoSweep {
        rows,
        empirical_constant,
        last_growth,
    })
}

/// Relative sup-distance `max|f - g| / max|g|` between two grids.
pub fn max_rel_diff(f: &GridFunction, g: &GridFunction) -> f64 {
    let diff = f
        .samples()
        .iter()
        .zip(g.samples())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    diff / g.max_modulus().max(f64::MIN_POSITIVE)
}
