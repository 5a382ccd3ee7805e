//! Numerical laboratory for mixed-norm estimates of truncated double
//! trigonometric sums
//!
//! ```text
//! S(x, y) = Σ_{n=1}^{N} Σ_{m=1}^{M} a_{mn} e^{2πi((m-1)x + (n-1)y)}.
//! ```
//!
//! The crate evaluates `S` on grids ([`trigsum`]), measures it in mixed
//! Lebesgue norms and its coefficients in mixed sequence norms ([`norms`]),
//! computes the growth exponent Θ of the sharp-in-order upper bound
//! ([`exponents`]), builds and certifies candidate maximizers
//! ([`extremizers`]), and brackets the operator norm numerically
//! ([`opnorm`]).
//!
//! ```
//! use mnl_core::prelude::*;
//!
//! let e = MixedExponents::from_lebesgue(2.0, 2.0, 2.0, 2.0)?;
//! assert_eq!(theta(&e)?, 0.5);
//! assert!((upper_bound_magnitude(4, 4, &e)? - 1.0).abs() < 1e-12);
//! # Ok::<(), mnl_core::Error>(())
//! ```

pub mod error;
pub mod exponents;
pub mod extremizers;
pub mod norms;
pub mod opnorm;
pub mod random;
pub mod sum;
pub mod trigsum;

pub use error::{Error, Result};

pub mod prelude {
    pub use crate::error::{Error, Result};
    pub use crate::exponents::{
        classify, phi, theta, upper_bound_magnitude, MixedExponents, RegionLabel, ThetaBranch,
    };
    pub use crate::extremizers::{
        build, chirp_main_term, chirp_sum, unit_sharpness, verify_chirp_lower,
        verify_dirichlet_lower, ChirpParams, DirichletKind, ExtremizerKind,
    };
    pub use crate::norms::{
        holder_matrix_chain, lpq_norm, lrs_norm, CoefficientMatrix, GridFunction, QuadratureSpec,
    };
    pub use crate::opnorm::{estimate, objective, sharpness_sweep, BoundReport, SearchConfig};
    pub use crate::random::{gaussian_matrix, rng_for};
    pub use crate::trigsum::{eval_nonortho, eval_sum, eval_sum_at, EvalPlan, FrequencyScale};
    pub use num_complex::Complex64;
}
