use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::linalg::{spectral_norm, ComplexMatrix};

/// Seeded complex Gaussian matrix rescaled to unit spectral norm.
///
/// The generator is ChaCha20 seeded from `seed` through
/// `SeedableRng::seed_from_u64`, so the draw is identical on every platform.
pub fn normalized_noise(n: usize, seed: u64) -> Result<ComplexMatrix> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let e = ComplexMatrix::random_gaussian(n, n, &mut rng);
    let norm = spectral_norm(&e)?;
    Ok(e.scale_real(1.0 / norm))
}

/// Multiplicative noise `M_ij (1 + δ E_ij)` with `‖E‖₂ = 1`.
pub fn add_noise(m: &ComplexMatrix, delta: f64, seed: u64) -> Result<ComplexMatrix> {
    if !(delta >= 0.0 && delta.is_finite()) {
        return Err(Error::Config(format!(
            "noise level must be non-negative, got {delta}"
        )));
    }
    if !m.is_square() {
        return Err(Error::Shape(format!(
            "noise model expects a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    if delta == 0.0 {
        return Ok(m.clone());
    }
    let e = normalized_noise(m.rows(), seed)?;
    let one = Complex64::new(1.0, 0.0);
    m.hadamard(&e.map(|z| one + z * delta))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::ChaCha8Rng;

    fn sample() -> ComplexMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        ComplexMatrix::random_gaussian(12, 12, &mut rng)
    }

    #[test]
    fn zero_noise_is_identity() {
        let m = sample();
        assert_eq!(add_noise(&m, 0.0, 1).unwrap(), m);
    }

    #[test]
    fn noise_has_unit_spectral_norm() {
        let e = normalized_noise(64, 2024).unwrap();
        assert!((spectral_norm(&e).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deterministic_per_seed() {
        let m = sample();
        let a = add_noise(&m, 0.1, 9).unwrap();
        let b = add_noise(&m, 0.1, 9).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, add_noise(&m, 0.1, 10).unwrap());
    }

    #[test]
    fn rejects_negative_level_and_rectangles() {
        let m = sample();
        assert!(matches!(add_noise(&m, -0.1, 1), Err(Error::Config(_))));
        assert!(matches!(
            add_noise(&ComplexMatrix::zeros(2, 3), 0.1, 1),
            Err(Error::Shape(_))
        ));
    }
}
