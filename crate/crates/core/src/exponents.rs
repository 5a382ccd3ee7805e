//! Exponent quadruples on the hypercube `Q = [0,1]^4` and the piecewise
//! linear maps built on them.
//!
//! A quadruple `(p, q, r, s)` of Lebesgue exponents is stored through its
//! reciprocals `(α, β, γ, δ) = (1/p, 1/q, 1/r, 1/s)`, so `p = ∞` is simply
//! `α = 0`. The map [`theta`] gives the growth exponent of the operator-norm
//! upper bound
//!
//! ```text
//! ‖S‖_{L^{r,s}} ≤ (MN)^Θ / (M^α N^β) · ‖A‖_{l^{p,q}}
//! ```
//!
//! and [`phi`] is its restriction to the part of `Q` where the bound is known
//! to be attained up to constants.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Slack used for the closed region conditions and the equality slices of
/// [`phi`].
pub const REGION_TOL: f64 = 1e-12;

/// Reciprocal Lebesgue exponents `(1/p, 1/q, 1/r, 1/s)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawExponents")]
pub struct MixedExponents {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

#[derive(Deserialize)]
struct RawExponents {
    alpha: f64,
    beta: f64,
    gamma: f64,
    delta: f64,
}

impl TryFrom<RawExponents> for MixedExponents {
    type Error = Error;

    fn try_from(raw: RawExponents) -> Result<Self> {
        Self::new(raw.alpha, raw.beta, raw.gamma, raw.delta)
    }
}

fn check_unit(name: &'static str, value: f64) -> Result<f64> {
    if (0.0..=1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::ExponentOutOfRange { name, value })
    }
}

fn reciprocal(name: &'static str, exponent: f64) -> Result<f64> {
    if exponent == f64::INFINITY {
        Ok(0.0)
    } else if exponent >= 1.0 && exponent.is_finite() {
        Ok(1.0 / exponent)
    } else {
        Err(Error::LebesgueOutOfRange {
            name,
            value: exponent,
        })
    }
}

fn lebesgue(recip: f64) -> f64 {
    if recip == 0.0 {
        f64::INFINITY
    } else {
        1.0 / recip
    }
}

impl MixedExponents {
    /// Builds a point of `Q` from reciprocals.
    pub fn new(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Result<Self> {
        Ok(Self {
            alpha: check_unit("alpha", alpha)?,
            beta: check_unit("beta", beta)?,
            gamma: check_unit("gamma", gamma)?,
            delta: check_unit("delta", delta)?,
        })
    }

    /// Builds a point of `Q` from Lebesgue exponents in `[1, ∞]`;
    /// `f64::INFINITY` is accepted.
    pub fn from_lebesgue(p: f64, q: f64, r: f64, s: f64) -> Result<Self> {
        Ok(Self {
            alpha: reciprocal("p", p)?,
            beta: reciprocal("q", q)?,
            gamma: reciprocal("r", r)?,
            delta: reciprocal("s", s)?,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }
    pub fn beta(&self) -> f64 {
        self.beta
    }
    pub fn gamma(&self) -> f64 {
        self.gamma
    }
    pub fn delta(&self) -> f64 {
        self.delta
    }

    pub fn p(&self) -> f64 {
        lebesgue(self.alpha)
    }
    pub fn q(&self) -> f64 {
        lebesgue(self.beta)
    }
    pub fn r(&self) -> f64 {
        lebesgue(self.gamma)
    }
    pub fn s(&self) -> f64 {
        lebesgue(self.delta)
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.alpha, self.beta, self.gamma, self.delta]
    }
}

impl fmt::Display for MixedExponents {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(1/p, 1/q, 1/r, 1/s) = ({}, {}, {}, {})",
            self.alpha, self.beta, self.gamma, self.delta
        )
    }
}

/// The five pieces of Θ, in their fixed priority order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ThetaBranch {
    Half,
    Alpha,
    Beta,
    OneMinusGamma,
    OneMinusDelta,
}

impl ThetaBranch {
    pub const ALL: [ThetaBranch; 5] = [
        ThetaBranch::Half,
        ThetaBranch::Alpha,
        ThetaBranch::Beta,
        ThetaBranch::OneMinusGamma,
        ThetaBranch::OneMinusDelta,
    ];

    /// Whether the closed constraints of this piece hold at `e`.
    pub fn contains(self, e: &MixedExponents) -> bool {
        let MixedExponents {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        } = *e;
        let le = |x: f64, y: f64| x <= y + REGION_TOL;
        match self {
            ThetaBranch::Half => le(a, 0.5) && le(b, 0.5) && le(0.5, g) && le(0.5, d),
            ThetaBranch::Alpha => le(0.5, a) && le(b, a) && le(1.0, a + g) && le(1.0, a + d),
            ThetaBranch::Beta => le(0.5, b) && le(a, b) && le(1.0, b + g) && le(1.0, b + d),
            ThetaBranch::OneMinusGamma => {
                le(g, 0.5) && le(g, d) && le(a + g, 1.0) && le(b + g, 1.0)
            }
            ThetaBranch::OneMinusDelta => {
                le(d, 0.5) && le(d, g) && le(a + d, 1.0) && le(b + d, 1.0)
            }
        }
    }

    /// The affine expression this piece assigns, regardless of whether `e`
    /// lies in the piece.
    pub fn value(self, e: &MixedExponents) -> f64 {
        match self {
            ThetaBranch::Half => 0.5,
            ThetaBranch::Alpha => e.alpha,
            ThetaBranch::Beta => e.beta,
            ThetaBranch::OneMinusGamma => 1.0 - e.gamma,
            ThetaBranch::OneMinusDelta => 1.0 - e.delta,
        }
    }
}

/// Every piece of Θ containing a point, plus the first one in priority order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionLabel {
    pub branch: ThetaBranch,
    pub all_matching: Vec<ThetaBranch>,
}

impl RegionLabel {
    /// Largest difference between the values of the matching pieces.
    pub fn disagreement(&self, e: &MixedExponents) -> f64 {
        let values = self.all_matching.iter().map(|b| b.value(e));
        let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
            (lo.min(v), hi.max(v))
        });
        hi - lo
    }
}

/// Lists the pieces of Θ whose (closed) constraints hold at `e`.
///
/// Fails with [`Error::CoverageViolation`] if no piece contains the point.
pub fn classify(e: &MixedExponents) -> Result<RegionLabel> {
    let all_matching: Vec<_> = ThetaBranch::ALL
        .into_iter()
        .filter(|b| b.contains(e))
        .collect();
    match all_matching.first() {
        Some(&branch) => Ok(RegionLabel {
            branch,
            all_matching,
        }),
        None => Err(Error::CoverageViolation(e.as_array())),
    }
}

/// Θ(α, β, γ, δ) ∈ [1/2, 1].
///
/// Θ is total on `Q`; the coverage of `Q` by the five pieces is exercised by
/// the test suite, and a point outside every piece is reported as an error.
pub fn theta(e: &MixedExponents) -> Result<f64> {
    classify(e).map(|label| label.branch.value(e))
}

/// The pieces of Φ. Pieces 2 and 4 live on the slices `α+δ = 1` and
/// `β+γ = 1`; piece 3 needs `α = β` and piece 5 needs `γ = δ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhiBranch {
    Half,
    Alpha,
    GeometricAlphaBeta,
    Beta,
    GeometricGammaDelta,
}

impl PhiBranch {
    pub const ALL: [PhiBranch; 5] = [
        PhiBranch::Half,
        PhiBranch::Alpha,
        PhiBranch::GeometricAlphaBeta,
        PhiBranch::Beta,
        PhiBranch::GeometricGammaDelta,
    ];

    pub fn contains(self, e: &MixedExponents) -> bool {
        let MixedExponents {
            alpha: a,
            beta: b,
            gamma: g,
            delta: d,
        } = *e;
        let le = |x: f64, y: f64| x <= y + REGION_TOL;
        let eq = |x: f64, y: f64| (x - y).abs() <= REGION_TOL;
        let gt = |x: f64, y: f64| x > y + REGION_TOL;
        match self {
            PhiBranch::Half => le(a, 0.5) && le(b, 0.5) && le(0.5, g) && le(0.5, d),
            PhiBranch::Alpha => le(0.5, a) && le(b, a) && le(1.0, a + g) && eq(a + d, 1.0),
            PhiBranch::GeometricAlphaBeta => {
                le(0.5, a) && eq(a, b) && gt(a + g, 1.0) && gt(a + d, 1.0)
            }
            PhiBranch::Beta => le(0.5, b) && le(a, b) && eq(b + g, 1.0) && le(1.0, b + d),
            PhiBranch::GeometricGammaDelta => {
                le(g, 0.5) && eq(g, d) && le(a + g, 1.0) && le(b + d, 1.0)
            }
        }
    }

    pub fn value(self, e: &MixedExponents) -> f64 {
        match self {
            PhiBranch::Half => 0.5,
            PhiBranch::Alpha => e.alpha,
            PhiBranch::GeometricAlphaBeta => (e.alpha * e.beta).sqrt(),
            PhiBranch::Beta => e.beta,
            PhiBranch::GeometricGammaDelta => ((1.0 - e.gamma) * (1.0 - e.delta)).sqrt(),
        }
    }
}

/// Φ(α, β, γ, δ), or `None` outside the domain of Φ.
pub fn phi(e: &MixedExponents) -> Option<f64> {
    PhiBranch::ALL
        .into_iter()
        .find(|b| b.contains(e))
        .map(|b| b.value(e))
}

/// `(MN)^Θ / (M^α N^β)`.
pub fn upper_bound_magnitude(m: usize, n: usize, e: &MixedExponents) -> Result<f64> {
    if m == 0 || n == 0 {
        return Err(Error::InvalidParameter(format!(
            "dimensions must be positive, got {m}x{n}"
        )));
    }
    let (m, n) = (m as f64, n as f64);
    let theta = theta(e)?;
    Ok((m * n).powf(theta) / (m.powf(e.alpha) * n.powf(e.beta)))
}
