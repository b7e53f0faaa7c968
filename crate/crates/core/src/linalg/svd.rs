//! Thin singular value decomposition.
//!
//! Hermitian inputs take their singular triplets straight from the Jacobi
//! eigendecomposition (`A = V Λ V* = V |Λ| (V sgn Λ)*`). General inputs go
//! through the eigendecomposition of the smaller Gram matrix, with the other
//! side recovered as `A v / σ` and re-orthonormalized.

use num_complex::Complex64;

use super::eig::hermitian_eig;
use super::{inner, vec_norm, ComplexMatrix};
use crate::error::Result;

/// Relative floor applied to singular values before they are divided by.
pub const SINGULAR_FLOOR: f64 = 1e-14;

/// Matrices whose Hermitian defect is below this (relative to `max|A|`)
/// are decomposed through the Hermitian path.
const HERMITIAN_FAST_PATH_TOL: f64 = 1e-13;

/// Singular values (descending) with their left singular vectors.
#[derive(Debug, Clone)]
pub struct SpectralData {
    pub values: Vec<f64>,
    /// Orthonormal left singular vectors as columns.
    pub left_vectors: ComplexMatrix,
}

impl SpectralData {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.left_vectors.column(j)
    }

    /// Largest singular value, 0 for an empty spectrum.
    pub fn largest(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `σ_j` clamped from below at `SINGULAR_FLOOR · σ₁`.
    pub fn floored(&self, j: usize) -> f64 {
        self.values[j].max(SINGULAR_FLOOR * self.largest())
    }
}

#[derive(Debug, Clone)]
pub struct Svd {
    pub spectrum: SpectralData,
    /// Right singular vectors as columns.
    pub right_vectors: ComplexMatrix,
}

impl Svd {
    /// `U Σ V*`.
    pub fn reconstruct(&self) -> ComplexMatrix {
        let u = &self.spectrum.left_vectors;
        let v = &self.right_vectors;
        let mut out = ComplexMatrix::zeros(u.rows(), v.rows());
        for (j, &s) in self.spectrum.values.iter().enumerate() {
            for r in 0..u.rows() {
                let ur = u[(r, j)] * s;
                for c in 0..v.rows() {
                    out[(r, c)] += ur * v[(c, j)].conj();
                }
            }
        }
        out
    }
}

pub fn svd(a: &ComplexMatrix) -> Result<Svd> {
    if a.is_square() && a.hermitian_defect() <= HERMITIAN_FAST_PATH_TOL * a.max_abs() {
        return svd_hermitian(a);
    }
    if a.rows() >= a.cols() {
        svd_tall(a)
    } else {
        let t = svd_tall(&a.adjoint())?;
        Ok(Svd {
            spectrum: SpectralData {
                values: t.spectrum.values,
                left_vectors: t.right_vectors,
            },
            right_vectors: t.spectrum.left_vectors,
        })
    }
}

fn svd_hermitian(a: &ComplexMatrix) -> Result<Svd> {
    let e = hermitian_eig(a)?;
    let n = a.rows();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| e.eigenvalues[j].abs().total_cmp(&e.eigenvalues[i].abs()));
    let mut values = Vec::with_capacity(n);
    let mut left = ComplexMatrix::zeros(n, n);
    let mut right = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let lam = e.eigenvalues[src];
        values.push(lam.abs());
        let col = e.vector(src);
        left.set_column(dst, &col);
        if lam < 0.0 {
            let neg: Vec<Complex64> = col.iter().map(|z| -z).collect();
            right.set_column(dst, &neg);
        } else {
            right.set_column(dst, &col);
        }
    }
    Ok(Svd {
        spectrum: SpectralData {
            values,
            left_vectors: left,
        },
        right_vectors: right,
    })
}

fn svd_tall(a: &ComplexMatrix) -> Result<Svd> {
    let (m, n) = (a.rows(), a.cols());
    let gram = (&a.adjoint() * a).hermitian_part();
    let e = hermitian_eig(&gram)?;

    // Descending by eigenvalue of A*A.
    let mut triplets: Vec<(f64, Vec<Complex64>, Vec<Complex64>)> = (0..n)
        .rev()
        .map(|j| {
            let v = e.vector(j);
            let av = a.matvec(&v).expect("shape checked");
            (vec_norm(&av), av, v)
        })
        .collect();
    triplets.sort_by(|x, y| y.0.total_cmp(&x.0));

    let sigma_max = triplets.first().map_or(0.0, |t| t.0);
    let tiny = f64::EPSILON * sigma_max * (n as f64);
    let mut values = Vec::with_capacity(n);
    let mut right = ComplexMatrix::zeros(n, n);
    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (j, (s, av, v)) in triplets.into_iter().enumerate() {
        right.set_column(j, &v);
        if s > tiny {
            values.push(s);
            u_cols.push(av.iter().map(|z| z / s).collect());
        } else {
            values.push(0.0);
            u_cols.push(vec![Complex64::new(0.0, 0.0); m]);
        }
    }
    orthonormalize(&mut u_cols, m);
    let left = ComplexMatrix::from_columns(&u_cols)?;
    Ok(Svd {
        spectrum: SpectralData {
            values,
            left_vectors: left,
        },
        right_vectors: right,
    })
}

/// Modified Gram–Schmidt (two passes) in column order. Columns that vanish
/// are replaced by the next standard basis vector not yet in the span.
fn orthonormalize(cols: &mut [Vec<Complex64>], dim: usize) {
    let mut next_basis = 0;
    for j in 0..cols.len() {
        let mut ok = project_out(cols, j);
        while !ok && next_basis < dim {
            let mut e = vec![Complex64::new(0.0, 0.0); dim];
            e[next_basis] = Complex64::new(1.0, 0.0);
            next_basis += 1;
            cols[j] = e;
            ok = project_out(cols, j);
        }
    }
}

fn project_out(cols: &mut [Vec<Complex64>], j: usize) -> bool {
    let before = vec_norm(&cols[j]);
    if before == 0.0 {
        return false;
    }
    for _ in 0..2 {
        for i in 0..j {
            let (head, tail) = cols.split_at_mut(j);
            let coef = inner(&head[i], &tail[0]);
            for (t, h) in tail[0].iter_mut().zip(&head[i]) {
                *t -= coef * h;
            }
        }
    }
    let after = vec_norm(&cols[j]);
    if after <= 1e-8 * before {
        return false;
    }
    for z in cols[j].iter_mut() {
        *z /= after;
    }
    true
}

/// Largest singular value.
pub fn spectral_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.spectrum.largest())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn orthonormality_defect(u: &ComplexMatrix) -> f64 {
        let g = &u.adjoint() * u;
        (&g - &ComplexMatrix::identity(u.cols())).max_abs()
    }

    #[test]
    fn diagonal_with_negative_entry() {
        let s = svd(&ComplexMatrix::from_real_diag(&[2.0, -3.0])).unwrap();
        assert_eq!(s.spectrum.values, vec![3.0, 2.0]);
        let back = s.reconstruct();
        assert!((&back - &ComplexMatrix::from_real_diag(&[2.0, -3.0])).max_abs() < 1e-15);
    }

    #[test]
    fn rank_one_outer_product() {
        let a = vec![
            Complex64::new(1.0, 2.0),
            Complex64::new(-0.5, 0.0),
            Complex64::new(0.0, 3.0),
        ];
        let b = vec![Complex64::new(2.0, -1.0), Complex64::new(0.25, 0.5)];
        let m = ComplexMatrix::from_fn(3, 2, |r, c| a[r] * b[c].conj());
        let s = svd(&m).unwrap();
        assert!((s.spectrum.values[0] - vec_norm(&a) * vec_norm(&b)).abs() < 1e-12);
        assert!(s.spectrum.values[1].abs() < 1e-12);
        assert!(orthonormality_defect(&s.spectrum.left_vectors) < 1e-12);
    }

    #[test]
    fn random_rectangular_reconstruction() {
        let mut rng = ChaCha8Rng::seed_from_u64(85);
        for (m, n) in [(8, 5), (5, 8), (12, 12)] {
            let a = ComplexMatrix::random_gaussian(m, n, &mut rng);
            let s = svd(&a).unwrap();
            let err = (&s.reconstruct() - &a).frobenius_norm() / a.frobenius_norm();
            assert!(err < 1e-10, "{m}x{n}: {err}");
            assert!(s.spectrum.values.windows(2).all(|w| w[0] >= w[1]));
            assert!(orthonormality_defect(&s.spectrum.left_vectors) < 1e-10);
            assert!(orthonormality_defect(&s.right_vectors) < 1e-10);
        }
    }

    #[test]
    fn hermitian_psd_matches_eig() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = ComplexMatrix::random_gaussian(9, 9, &mut rng);
        let psd = (&g.adjoint() * &g).hermitian_part();
        let e = hermitian_eig(&psd).unwrap();
        let s = svd(&psd).unwrap();
        for j in 0..9 {
            assert!((s.spectrum.values[j] - e.eigenvalues[8 - j]).abs() < 1e-12);
            let overlap = inner(&s.spectrum.vector(j), &e.vector(8 - j)).norm();
            assert!((overlap - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn spectral_norm_examples() {
        assert!((spectral_norm(&ComplexMatrix::identity(5)).unwrap() - 1.0).abs() < 1e-15);
        assert!(
            (spectral_norm(&ComplexMatrix::from_real_diag(&[1.0, -5.0, 2.0])).unwrap() - 5.0).abs()
                < 1e-15
        );
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let a = ComplexMatrix::random_gaussian(7, 4, &mut rng);
        assert!((spectral_norm(&a).unwrap() - svd(&a).unwrap().spectrum.values[0]).abs() < 1e-12);
    }

    #[test]
    fn floor_clamps_zero_values() {
        let s = svd(&ComplexMatrix::from_real_diag(&[4.0, 0.0])).unwrap();
        assert_eq!(s.spectrum.floored(1), 4.0 * SINGULAR_FLOOR);
        assert_eq!(s.spectrum.floored(0), 4.0);
    }
}
