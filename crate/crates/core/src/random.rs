//! Seeded random inputs for sweeps and searches.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::norms::CoefficientMatrix;

/// Independent deterministic stream `stream` derived from `seed`.
pub fn rng_for(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Matrix with i.i.d. standard complex Gaussian entries.
pub fn gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> CoefficientMatrix {
    CoefficientMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    })
    .expect("positive dimensions")
}

/// Matrix with real standard Gaussian entries.
pub fn real_gaussian_matrix<R: Rng + ?Sized>(
    rows: usize,
    cols: usize,
    rng: &mut R,
) -> CoefficientMatrix {
    CoefficientMatrix::from_fn(rows, cols, |_, _| {
        Complex64::new(rng.sample(StandardNormal), 0.0)
    })
    .expect("positive dimensions")
}
