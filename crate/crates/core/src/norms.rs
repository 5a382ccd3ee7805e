//! Discrete `l^{p,q}` norms of coefficient matrices and grid quadrature of
//! continuous `L^{r,s}` norms over the unit square.
//!
//! Both norms are iterated: the inner exponent acts along the first index
//! (matrix row `m`, grid coordinate `x`), the outer exponent along the second.
//! The continuous norm uses the periodic rectangle rule, which integrates
//! trigonometric polynomials of degree `< K` exactly on a `K`-point grid.

use std::path::Path;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exponents::MixedExponents;
use crate::sum::NeumaierSum;

/// A complex `M×N` matrix stored row-major (`n` fastest).
///
/// Rows are indexed by `m`, the index summed with the inner exponent `p`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "MatrixDoc", into = "MatrixDoc")]
pub struct CoefficientMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

/// On-disk form: `{"M": int, "N": int, "entries": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct MatrixDoc {
    #[serde(rename = "M")]
    m: usize,
    #[serde(rename = "N")]
    n: usize,
    entries: Vec<[f64; 2]>,
}

impl TryFrom<MatrixDoc> for CoefficientMatrix {
    type Error = Error;

    fn try_from(doc: MatrixDoc) -> Result<Self> {
        let entries = doc
            .entries
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        Self::from_entries(doc.m, doc.n, entries)
    }
}

impl From<CoefficientMatrix> for MatrixDoc {
    fn from(a: CoefficientMatrix) -> Self {
        MatrixDoc {
            m: a.rows,
            n: a.cols,
            entries: a.entries.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

fn check_finite(values: &[Complex64]) -> Result<()> {
    match values
        .iter()
        .position(|z| !z.re.is_finite() || !z.im.is_finite())
    {
        Some(i) => Err(Error::NonFinite(i)),
        None => Ok(()),
    }
}

impl CoefficientMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Result<Self> {
        Self::from_entries(rows, cols, vec![Complex64::new(0.0, 0.0); rows * cols])
    }

    /// Builds a matrix from row-major entries.
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::DimensionMismatch(format!(
                "matrix dimensions must be positive, got {rows}x{cols}"
            )));
        }
        if entries.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "{rows}x{cols} matrix needs {} entries, got {}",
                rows * cols,
                entries.len()
            )));
        }
        check_finite(&entries)?;
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds a matrix from `f(m, n)` with zero-based indices.
    pub fn from_fn(
        rows: usize,
        cols: usize,
        mut f: impl FnMut(usize, usize) -> Complex64,
    ) -> Result<Self> {
        let mut entries = Vec::with_capacity(rows * cols);
        for m in 0..rows {
            for n in 0..cols {
                entries.push(f(m, n));
            }
        }
        Self::from_entries(rows, cols, entries)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    /// Entry `a_{m+1, n+1}` (zero-based arguments).
    pub fn get(&self, m: usize, n: usize) -> Complex64 {
        self.entries[m * self.cols + n]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|z| z.re == 0.0 && z.im == 0.0)
    }

    /// Multiplies every entry by `c`.
    pub fn scaled(&self, c: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|z| z * c).collect(),
        }
    }

    /// Euclidean (Frobenius) norm, the `l^{2,2}` norm.
    pub fn frobenius(&self) -> f64 {
        pnorm(self.entries.iter().map(|z| z.norm()), 0.5, false)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("matrix serialization is infallible")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Complex samples `f(j/Kx, k/Ky)`, `0 ≤ j < Kx`, `0 ≤ k < Ky`, stored with
/// `k` fastest. The grid is periodic: `x = 1` is identified with `x = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "GridDoc", into = "GridDoc")]
pub struct GridFunction {
    kx: usize,
    ky: usize,
    samples: Vec<Complex64>,
}

/// On-disk form: `{"Kx": int, "Ky": int, "samples": [[re, im], ...]}`.
#[derive(Serialize, Deserialize)]
struct GridDoc {
    #[serde(rename = "Kx")]
    kx: usize,
    #[serde(rename = "Ky")]
    ky: usize,
    samples: Vec<[f64; 2]>,
}

impl TryFrom<GridDoc> for GridFunction {
    type Error = Error;

    fn try_from(doc: GridDoc) -> Result<Self> {
        let samples = doc
            .samples
            .into_iter()
            .map(|[re, im]| Complex64::new(re, im))
            .collect();
        Self::from_samples(doc.kx, doc.ky, samples)
    }
}

impl From<GridFunction> for GridDoc {
    fn from(f: GridFunction) -> Self {
        GridDoc {
            kx: f.kx,
            ky: f.ky,
            samples: f.samples.iter().map(|z| [z.re, z.im]).collect(),
        }
    }
}

impl GridFunction {
    pub fn from_samples(kx: usize, ky: usize, samples: Vec<Complex64>) -> Result<Self> {
        if kx == 0 || ky == 0 {
            return Err(Error::DimensionMismatch(format!(
                "grid dimensions must be positive, got {kx}x{ky}"
            )));
        }
        if samples.len() != kx * ky {
            return Err(Error::DimensionMismatch(format!(
                "{kx}x{ky} grid needs {} samples, got {}",
                kx * ky,
                samples.len()
            )));
        }
        check_finite(&samples)?;
        Ok(Self { kx, ky, samples })
    }

    /// Samples `f(x_j, y_k)` on the uniform periodic grid.
    pub fn from_fn(kx: usize, ky: usize, f: impl Fn(f64, f64) -> Complex64) -> Result<Self> {
        let mut samples = Vec::with_capacity(kx * ky);
        for j in 0..kx {
            let x = j as f64 / kx as f64;
            for k in 0..ky {
                samples.push(f(x, k as f64 / ky as f64));
            }
        }
        Self::from_samples(kx, ky, samples)
    }

    pub fn kx(&self) -> usize {
        self.kx
    }

    pub fn ky(&self) -> usize {
        self.ky
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn get(&self, j: usize, k: usize) -> Complex64 {
        self.samples[j * self.ky + k]
    }

    pub fn max_modulus(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Every other grid line in each even-sized direction.
    pub fn coarsened(&self) -> Self {
        let sx = if self.kx % 2 == 0 { 2 } else { 1 };
        let sy = if self.ky % 2 == 0 { 2 } else { 1 };
        let (kx, ky) = (self.kx / sx, self.ky / sy);
        let mut samples = Vec::with_capacity(kx * ky);
        for j in 0..kx {
            for k in 0..ky {
                samples.push(self.get(j * sx, k * sy));
            }
        }
        Self { kx, ky, samples }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("grid serialization is infallible")
    }

    pub fn read(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }
}

/// Grid resolution and error control for `L^{r,s}` quadrature.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    /// Grid points per unit frequency: a matrix with `M` rows is sampled on
    /// `oversample·M` points in `x`.
    pub oversample: usize,
    /// Recompute on the half-resolution grid and compare.
    pub refine_check: bool,
    pub rel_tol: f64,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            oversample: 8,
            refine_check: false,
            rel_tol: 1e-3,
        }
    }
}

impl QuadratureSpec {
    pub fn new(oversample: usize, refine_check: bool, rel_tol: f64) -> Result<Self> {
        let spec = Self {
            oversample,
            refine_check,
            rel_tol,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if self.oversample < 2 {
            return Err(Error::InvalidParameter(format!(
                "oversample must be at least 2, got {}",
                self.oversample
            )));
        }
        if !(self.rel_tol > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "rel_tol must be positive, got {}",
                self.rel_tol
            )));
        }
        Ok(())
    }

    /// Grid sizes `(Kx, Ky)` for an `M×N` coefficient matrix.
    pub fn grid_for(&self, rows: usize, cols: usize) -> (usize, usize) {
        (self.oversample * rows, self.oversample * cols)
    }
}

/// Fine and half-resolution values that disagreed beyond the tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureWarning {
    pub fine: f64,
    pub coarse: f64,
    pub rel_diff: f64,
    pub rel_tol: f64,
}

/// An `L^{r,s}` grid norm together with the optional refinement warning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LrsNorm {
    pub value: f64,
    pub warning: Option<QuadratureWarning>,
}

/// `(Σ v^p)^{1/p}` (or the power mean `((1/K) Σ v^p)^{1/p}` when
/// `average`) for non-negative `v`, with `p = 1/recip` and the max for
/// `recip = 0`. Values are scaled by their maximum first so very large `p`
/// neither overflows nor underflows.
pub fn pnorm<I>(values: I, recip: f64, average: bool) -> f64
where
    I: IntoIterator<Item = f64>,
    I::IntoIter: Clone,
{
    let iter = values.into_iter();
    let (count, top) = iter
        .clone()
        .fold((0usize, 0.0f64), |(c, t), v| (c + 1, t.max(v)));
    if count == 0 || top == 0.0 || recip == 0.0 {
        return top;
    }
    let p = 1.0 / recip;
    let mut acc = NeumaierSum::new();
    for v in iter {
        acc.add(if recip == 1.0 {
            v / top
        } else {
            (v / top).powf(p)
        });
    }
    let mut total = acc.value();
    if average {
        total /= count as f64;
    }
    top * if recip == 1.0 {
        total
    } else {
        total.powf(recip)
    }
}

/// `‖A‖_{l^{p,q}}`: the `p`-norm down each column (over `m`), then the
/// `q`-norm of those column norms.
pub fn lpq_norm(a: &CoefficientMatrix, e: &MixedExponents) -> f64 {
    let (rows, cols) = (a.rows(), a.cols());
    let column_norms: Vec<f64> = (0..cols)
        .map(|n| pnorm((0..rows).map(|m| a.get(m, n).norm()), e.alpha(), false))
        .collect();
    pnorm(column_norms.iter().copied(), e.beta(), false)
}

fn grid_norm(f: &GridFunction, gamma: f64, delta: f64) -> f64 {
    let (kx, ky) = (f.kx(), f.ky());
    let inner: Vec<f64> = (0..ky)
        .map(|k| pnorm((0..kx).map(|j| f.get(j, k).norm()), gamma, true))
        .collect();
    pnorm(inner.iter().copied(), delta, true)
}

/// `‖f‖_{L^{r,s}([0,1]²)}` by the periodic rectangle rule: the `L^r` mean
/// over `x` on each grid line `y = y_k`, then the `L^s` mean over `k`.
/// Infinite exponents use grid maxima, which can only under-estimate.
///
/// With `spec.refine_check` set, the half-resolution grid is also evaluated
/// and a [`QuadratureWarning`] is attached when the two disagree by more than
/// `spec.rel_tol` relative. The warning is informational.
pub fn lrs_norm(f: &GridFunction, e: &MixedExponents, spec: &QuadratureSpec) -> LrsNorm {
    let value = grid_norm(f, e.gamma(), e.delta());
    let warning = if spec.refine_check {
        let coarse = grid_norm(&f.coarsened(), e.gamma(), e.delta());
        let rel_diff = (value - coarse).abs() / value.max(f64::MIN_POSITIVE);
        (rel_diff > spec.rel_tol).then_some(QuadratureWarning {
            fine: value,
            coarse,
            rel_diff,
            rel_tol: spec.rel_tol,
        })
    } else {
        None
    };
    LrsNorm { value, warning }
}

/// Both sides of the embedding `‖A‖_{l^{p,q}} ≤ M^{α-ᾱ} N^{β-β̄} ‖A‖_{l^{p̄,q̄}}`
/// for `α ≥ ᾱ` and `β ≥ β̄` (that is `p ≤ p̄`, `q ≤ q̄`).
///
/// Returns `(lhs, rhs)` after checking `lhs ≤ rhs` to `1e-12` relative.
pub fn holder_matrix_chain(
    a: &CoefficientMatrix,
    e: &MixedExponents,
    e_bar: &MixedExponents,
) -> Result<(f64, f64)> {
    if e.alpha() < e_bar.alpha() || e.beta() < e_bar.beta() {
        return Err(Error::Precondition(format!(
            "need 1/p >= 1/p_bar and 1/q >= 1/q_bar, got {e} against {e_bar}"
        )));
    }
    let lhs = lpq_norm(a, e);
    let factor = (a.rows() as f64).powf(e.alpha() - e_bar.alpha())
        * (a.cols() as f64).powf(e.beta() - e_bar.beta());
    let rhs = factor * lpq_norm(a, e_bar);
    if lhs > rhs * (1.0 + 1e-12) {
        return Err(Error::Invariant(format!(
            "Hölder embedding broken: {lhs} > {rhs}"
        )));
    }
    Ok((lhs, rhs))
}
