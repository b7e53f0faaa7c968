//! Least squares via column-equilibrated Householder QR, with a minimum-norm
//! SVD fallback for numerically rank-deficient systems.

use num_complex::Complex64;

use super::svd::svd;
use super::{inner, vec_norm, ComplexMatrix};
use crate::error::{Error, Result};

/// Relative threshold on `|R_jj|` (after column equilibration) below which
/// the system is treated as rank deficient.
const RANK_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct LstsqSolution {
    pub x: Vec<Complex64>,
    /// Set when the minimum-norm fallback was used.
    pub rank_deficient: bool,
    pub rank: usize,
    /// `‖Ax − b‖₂`.
    pub residual_norm: f64,
}

/// A factored overdetermined system, reusable across right-hand sides.
#[derive(Debug, Clone)]
pub struct LeastSquares {
    a: ComplexMatrix,
    col_scale: Vec<f64>,
    /// Householder vectors, one per column.
    reflectors: Vec<Vec<Complex64>>,
    r: ComplexMatrix,
    rank_deficient: bool,
}

impl LeastSquares {
    pub fn factor(a: &ComplexMatrix) -> Result<Self> {
        let (m, n) = (a.rows(), a.cols());
        if m < n {
            return Err(Error::Shape(format!(
                "least squares needs rows >= cols, got {m}x{n}"
            )));
        }
        let col_scale: Vec<f64> = (0..n)
            .map(|c| {
                let s = vec_norm(&a.column(c));
                if s > 0.0 {
                    s
                } else {
                    1.0
                }
            })
            .collect();
        let mut r = ComplexMatrix::from_fn(m, n, |i, j| a[(i, j)] / col_scale[j]);
        let mut reflectors = Vec::with_capacity(n);
        for j in 0..n {
            let x: Vec<Complex64> = (j..m).map(|i| r[(i, j)]).collect();
            let norm_x = vec_norm(&x);
            let mut v = x;
            if norm_x > 0.0 {
                let phase = if v[0].norm() > 0.0 {
                    v[0] / v[0].norm()
                } else {
                    Complex64::new(1.0, 0.0)
                };
                let alpha = -phase * norm_x;
                v[0] -= alpha;
                let nv = vec_norm(&v);
                for z in v.iter_mut() {
                    *z /= nv;
                }
                for c in j..n {
                    let col: Vec<Complex64> = (j..m).map(|i| r[(i, c)]).collect();
                    let d = 2.0 * inner(&v, &col);
                    for (off, vi) in v.iter().enumerate() {
                        r[(j + off, c)] -= d * vi;
                    }
                }
            } else {
                v.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            }
            reflectors.push(v);
        }
        let diag_max = (0..n).map(|j| r[(j, j)].norm()).fold(0.0, f64::max);
        let rank_deficient = (0..n).any(|j| r[(j, j)].norm() <= RANK_TOL * diag_max);
        Ok(Self {
            a: a.clone(),
            col_scale,
            reflectors,
            r,
            rank_deficient,
        })
    }

    pub fn solve(&self, b: &[Complex64]) -> Result<LstsqSolution> {
        let (m, n) = (self.a.rows(), self.a.cols());
        if b.len() != m {
            return Err(Error::Shape(format!(
                "right-hand side has length {}, expected {m}",
                b.len()
            )));
        }
        let x = if self.rank_deficient {
            self.min_norm(b)?
        } else {
            let mut qb = b.to_vec();
            for (j, v) in self.reflectors.iter().enumerate() {
                let d = 2.0 * inner(v, &qb[j..]);
                for (off, vi) in v.iter().enumerate() {
                    qb[j + off] -= d * vi;
                }
            }
            let mut y = vec![Complex64::new(0.0, 0.0); n];
            for j in (0..n).rev() {
                let mut acc = qb[j];
                for c in j + 1..n {
                    acc -= self.r[(j, c)] * y[c];
                }
                y[j] = acc / self.r[(j, j)];
            }
            y.iter()
                .zip(&self.col_scale)
                .map(|(yi, s)| yi / s)
                .collect()
        };
        let ax = self.a.matvec(&x)?;
        let residual: Vec<Complex64> = ax.iter().zip(b).map(|(p, q)| p - q).collect();
        let rank = if self.rank_deficient {
            self.numerical_rank()?
        } else {
            n
        };
        Ok(LstsqSolution {
            residual_norm: vec_norm(&residual),
            x,
            rank_deficient: self.rank_deficient,
            rank,
        })
    }

    fn numerical_rank(&self) -> Result<usize> {
        let s = svd(&self.a)?;
        let cut = RANK_TOL * s.spectrum.largest();
        Ok(s.spectrum.values.iter().filter(|&&v| v > cut).count())
    }

    fn min_norm(&self, b: &[Complex64]) -> Result<Vec<Complex64>> {
        let s = svd(&self.a)?;
        let n = self.a.cols();
        let cut = RANK_TOL * s.spectrum.largest();
        let mut x = vec![Complex64::new(0.0, 0.0); n];
        for (j, &sigma) in s.spectrum.values.iter().enumerate() {
            if sigma <= cut {
                continue;
            }
            let coef = inner(&s.spectrum.vector(j), b) / sigma;
            for (xi, vi) in x.iter_mut().zip(s.right_vectors.column(j)) {
                *xi += coef * vi;
            }
        }
        Ok(x)
    }
}

/// Minimizer of `‖Ax − b‖₂` for `A` with at least as many rows as columns.
pub fn lstsq(a: &ComplexMatrix, b: &[Complex64]) -> Result<LstsqSolution> {
    LeastSquares::factor(a)?.solve(b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn square_invertible_recovers_solution() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = ComplexMatrix::random_gaussian(6, 6, &mut rng);
        let x0: Vec<Complex64> = (0..6)
            .map(|i| Complex64::new(i as f64, 1.0 - i as f64))
            .collect();
        let b = a.matvec(&x0).unwrap();
        let sol = lstsq(&a, &b).unwrap();
        assert!(!sol.rank_deficient);
        for (p, q) in sol.x.iter().zip(&x0) {
            assert!((p - q).norm() < 1e-11);
        }
    }

    #[test]
    fn consistent_overdetermined_has_zero_residual() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let a = ComplexMatrix::random_gaussian(20, 4, &mut rng);
        let x0 = vec![Complex64::new(1.0, -2.0); 4];
        let b = a.matvec(&x0).unwrap();
        let sol = lstsq(&a, &b).unwrap();
        assert!(sol.residual_norm < 1e-12);
    }

    #[test]
    fn rank_deficient_falls_back_to_min_norm() {
        // Two identical columns: min-norm solution splits the weight evenly.
        let a = ComplexMatrix::from_fn(4, 2, |r, _| Complex64::new(r as f64 + 1.0, 0.0));
        let b = a.column(0);
        let sol = lstsq(&a, &b).unwrap();
        assert!(sol.rank_deficient);
        assert_eq!(sol.rank, 1);
        assert!((sol.x[0] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
        assert!((sol.x[1] - Complex64::new(0.5, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn wide_system_is_shape_error() {
        assert!(matches!(
            lstsq(&ComplexMatrix::zeros(2, 3), &[Complex64::new(0.0, 0.0); 2]),
            Err(Error::Shape(_))
        ));
    }
}
