use std::f64::consts::PI;

use num_complex::Complex64;

use super::ArrayGeometry;
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::specfun::{bessel_j_seq, hankel1_seq};

/// Analytic far-field matrix of a sound-soft disk of radius `a` centred at
/// the origin, in the convention `u^s ~ e^{ikr} r^{−1/2} u∞`:
///
/// `F[i][j] = −(1−i)/√(πk) Σ_{|n|≤trunc} J_n(ka)/H_n(ka) e^{in(θ_i − θ_j)}`.
pub fn disk_farfield_matrix(
    a: f64,
    k: f64,
    geom: &ArrayGeometry,
    trunc: usize,
) -> Result<ComplexMatrix> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(Error::Config(format!(
            "disk radius must be positive, got {a}"
        )));
    }
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Config(format!(
            "wave number must be positive, got {k}"
        )));
    }
    geom.validate()?;
    let j = bessel_j_seq(trunc, k * a)?;
    let h = hankel1_seq(trunc, k * a)?;
    // J_{−n}/H_{−n} = J_n/H_n, so the series pairs ±n into cosines.
    let ratios: Vec<Complex64> = j.iter().zip(&h).map(|(jn, hn)| jn / hn).collect();
    let prefactor = -Complex64::new(1.0, -1.0) / (PI * k).sqrt();

    let n = geom.count;
    // Circulant and even in the offset: one half-row is enough.
    let kernel: Vec<Complex64> = (0..n)
        .map(|d| {
            let t = geom.angle(d.min(n - d));
            let mut s = ratios[0];
            for (order, r) in ratios.iter().enumerate().skip(1) {
                s += r * (2.0 * (order as f64 * t).cos());
            }
            prefactor * s
        })
        .collect();
    Ok(ComplexMatrix::from_fn(n, n, |r, c| kernel[(r + n - c) % n]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exactly_circulant_and_symmetric() {
        let g = ArrayGeometry::new(32, 5.0);
        let f = disk_farfield_matrix(0.5, 4.0, &g, 10).unwrap();
        for r in 0..32 {
            for c in 0..32 {
                assert_eq!(f[(r, c)], f[((r + 1) % 32, (c + 1) % 32)]);
                assert_eq!(f[(r, c)], f[(c, r)]);
            }
        }
    }

    #[test]
    fn small_disk_is_monopole_dominated() {
        let g = ArrayGeometry::new(16, 5.0);
        let f = disk_farfield_matrix(1e-3, 4.0, &g, 10).unwrap();
        let mono = disk_farfield_matrix(1e-3, 4.0, &g, 0).unwrap();
        assert!((&f - &mono).max_abs() < 1e-4 * mono.max_abs());
    }

    #[test]
    fn matches_direct_series() {
        let g = ArrayGeometry::new(8, 5.0);
        let (a, k) = (0.7, 3.0);
        let f = disk_farfield_matrix(a, k, &g, 6).unwrap();
        let pre = -Complex64::new(1.0, -1.0) / (PI * k).sqrt();
        for r in 0..8 {
            for c in 0..8 {
                let mut s = Complex64::new(0.0, 0.0);
                for n in -6i32..=6 {
                    let jn = crate::specfun::bessel_j(n.unsigned_abs() as usize, k * a).unwrap()
                        * if n < 0 && n % 2 != 0 { -1.0 } else { 1.0 };
                    let hn = crate::specfun::hankel1(n, k * a).unwrap();
                    s += jn / hn * Complex64::from_polar(1.0, n as f64 * (g.angle(r) - g.angle(c)));
                }
                assert!((f[(r, c)] - pre * s).norm() < 1e-13);
            }
        }
    }
}
