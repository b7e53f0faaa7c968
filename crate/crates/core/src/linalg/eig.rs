//! Cyclic Jacobi eigensolver for complex Hermitian matrices.

use num_complex::Complex64;

use super::ComplexMatrix;
use crate::error::{Error, Result};

/// Largest accepted `max|A − A*| / max|A|` before a matrix is rejected as
/// non-Hermitian. Smaller defects are symmetrized away.
pub const HERMITIAN_TOL: f64 = 1e-8;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-14;

/// Eigenpairs of a Hermitian matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct HermitianEig {
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns; column `j` pairs with
    /// `eigenvalues[j]`. Each column's largest-modulus entry is real positive.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEig {
    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.eigenvectors.column(j)
    }

    /// `V f(Λ) V*`.
    pub fn reconstruct_with(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let v = &self.eigenvectors;
        let n = v.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (j, &lam) in self.eigenvalues.iter().enumerate() {
            let w = f(lam);
            if w == 0.0 {
                continue;
            }
            for r in 0..n {
                let vr = v[(r, j)] * w;
                for c in 0..n {
                    out[(r, c)] += vr * v[(c, j)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.reconstruct_with(|l| l)
    }
}

pub(crate) fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    if !a.is_square() {
        return Err(Error::Shape(format!(
            "expected a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    let scale = a.max_abs();
    let defect = a.hermitian_defect();
    if defect > HERMITIAN_TOL * scale {
        return Err(Error::Validation(format!(
            "matrix is not Hermitian: max|A - A*| = {defect:e} exceeds {HERMITIAN_TOL:e} * {scale:e}"
        )));
    }
    Ok(())
}

/// Eigendecomposition of a (near-)Hermitian matrix by cyclic Jacobi rotations.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEig> {
    check_hermitian(a)?;
    let n = a.rows();
    let mut m = a.hermitian_part();
    let mut vt = ComplexMatrix::identity(n);
    let frob = m.frobenius_norm();

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| m[(p, q)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= OFF_DIAGONAL_TOL * frob {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                rotate(&mut m, &mut vt, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut eigenvectors = ComplexMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let mut col = vt.row(src).to_vec();
        normalize_phase(&mut col);
        eigenvectors.set_column(dst, &col);
    }
    Ok(HermitianEig {
        eigenvalues,
        eigenvectors,
    })
}

/// Rotates the largest-modulus entry (first one on ties) onto the positive real axis.
pub(crate) fn normalize_phase(v: &mut [Complex64]) {
    let mut best = 0;
    let mut best_abs = -1.0;
    for (i, z) in v.iter().enumerate() {
        let a = z.norm();
        if a > best_abs * (1.0 + 1e-12) {
            best = i;
            best_abs = a;
        }
    }
    if best_abs > 0.0 {
        let phase = v[best].conj() / best_abs;
        for z in v.iter_mut() {
            *z *= phase;
        }
        v[best] = Complex64::new(v[best].re, 0.0);
    }
}

/// Annihilates `m[p][q]` (`p < q`) with the unitary
/// `G = diag(1, e^{−iφ}) · [[c, s], [−s, c]]`: `m ← G* m G`, `vt ← Gᵀ vt`,
/// where `vt` holds the eigenvector estimates as rows.
fn rotate(m: &mut ComplexMatrix, vt: &mut ComplexMatrix, p: usize, q: usize) {
    let n = m.rows;
    let apq = m.data[p * n + q];
    let g = apq.norm();
    if g == 0.0 {
        return;
    }
    let app = m.data[p * n + p].re;
    let aqq = m.data[q * n + q].re;
    let theta = (aqq - app) / (2.0 * g);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let phase_conj = apq.conj() / g; // e^{−iφ}

    let gpp = Complex64::new(c, 0.0);
    let gpq = Complex64::new(s, 0.0);
    let gqp = phase_conj * (-s);
    let gqq = phase_conj * c;

    let (bpp, bpq, bqp, bqq) = (m.data[p * n + p], apq, m.data[q * n + p], m.data[q * n + q]);
    rotate_rows(
        &mut m.data,
        n,
        p,
        q,
        [gpp.conj(), gqp.conj(), gpq.conj(), gqq.conj()],
    );
    // The result is Hermitian: columns p, q mirror the updated rows.
    for k in 0..n {
        if k != p && k != q {
            m.data[k * n + p] = m.data[p * n + k].conj();
            m.data[k * n + q] = m.data[q * n + k].conj();
        }
    }
    let lpp = gpp.conj() * bpp + gqp.conj() * bqp;
    let lpq = gpp.conj() * bpq + gqp.conj() * bqq;
    let lqp = gpq.conj() * bpp + gqq.conj() * bqp;
    let lqq = gpq.conj() * bpq + gqq.conj() * bqq;
    m.data[p * n + p] = Complex64::new((lpp * gpp + lpq * gqp).re, 0.0);
    m.data[q * n + q] = Complex64::new((lqp * gpq + lqq * gqq).re, 0.0);
    m.data[p * n + q] = Complex64::new(0.0, 0.0);
    m.data[q * n + p] = Complex64::new(0.0, 0.0);

    rotate_rows(&mut vt.data, vt.cols, p, q, [gpp, gqp, gpq, gqq]);
}

/// `row_p ← w0 row_p + w1 row_q`, `row_q ← w2 row_p + w3 row_q` for `p < q`.
fn rotate_rows(data: &mut [Complex64], width: usize, p: usize, q: usize, w: [Complex64; 4]) {
    let (head, tail) = data.split_at_mut(q * width);
    let rp = &mut head[p * width..(p + 1) * width];
    let rq = &mut tail[..width];
    for (a, b) in rp.iter_mut().zip(rq.iter_mut()) {
        let (x, y) = (*a, *b);
        *a = w[0] * x + w[1] * y;
        *b = w[2] * x + w[3] * y;
    }
}

/// `|A| = V |Λ| V*`, Hermitian positive semidefinite.
pub fn hermitian_abs(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = hermitian_eig(a)?;
    Ok(e.reconstruct_with(f64::abs).hermitian_part())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn diagonal_input() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[3.0, 1.0, 2.0])).unwrap();
        assert_eq!(e.eigenvalues, vec![1.0, 2.0, 3.0]);
        assert_eq!(e.vector(0), vec![c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)]);
        assert_eq!(e.vector(1), vec![c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert_eq!(e.vector(2), vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
    }

    #[test]
    fn exchange_matrix() {
        let a = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        )
        .unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((e.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn random_hermitian_reconstructs() {
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = ComplexMatrix::random_hermitian(16, &mut rng);
        let e = hermitian_eig(&a).unwrap();
        let resid = (&e.reconstruct() - &a).frobenius_norm() / a.frobenius_norm();
        assert!(resid < 1e-10, "residual {resid}");
        let vhv = &e.eigenvectors.adjoint() * &e.eigenvectors;
        assert!((&vhv - &ComplexMatrix::identity(16)).max_abs() < 1e-12);
        assert!(e.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        for j in 0..16 {
            let v = e.vector(j);
            let big = v.iter().map(|z| z.norm()).fold(0.0, f64::max);
            let first = v.iter().find(|z| z.norm() >= big * (1.0 - 1e-12)).unwrap();
            assert!(first.im == 0.0 && first.re > 0.0);
        }
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let a = ComplexMatrix::from_vec(
            2,
            2,
            vec![c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        )
        .unwrap();
        assert!(matches!(hermitian_eig(&a), Err(Error::Validation(_))));
        assert!(matches!(
            hermitian_eig(&ComplexMatrix::zeros(2, 3)),
            Err(Error::Shape(_))
        ));
    }

    #[test]
    fn accepts_rounding_level_asymmetry() {
        let mut a = ComplexMatrix::from_real_diag(&[2.0, 1.0]);
        a[(0, 1)] = c(0.5, 0.0);
        a[(1, 0)] = c(0.5 + 1e-12, 1e-12);
        assert!(hermitian_eig(&a).is_ok());
    }

    #[test]
    fn abs_of_indefinite_diagonal() {
        let a = ComplexMatrix::from_real_diag(&[2.0, -3.0]);
        let m = hermitian_abs(&a).unwrap();
        assert!((&m - &ComplexMatrix::from_real_diag(&[2.0, 3.0])).max_abs() < 1e-15);
    }

    #[test]
    fn abs_of_psd_is_identity_map() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let g = ComplexMatrix::random_gaussian(10, 10, &mut rng);
        let psd = (&g.adjoint() * &g).hermitian_part();
        let m = hermitian_abs(&psd).unwrap();
        assert!((&m - &psd).max_abs() < 1e-12 * psd.max_abs());
    }

    #[test]
    fn abs_eigenvalues_are_absolute_eigenvalues() {
        let mut rng = ChaCha8Rng::seed_from_u64(99);
        let a = ComplexMatrix::random_hermitian(16, &mut rng);
        let mut expect: Vec<f64> = hermitian_eig(&a)
            .unwrap()
            .eigenvalues
            .iter()
            .map(|l| l.abs())
            .collect();
        expect.sort_by(f64::total_cmp);
        let got = hermitian_eig(&hermitian_abs(&a).unwrap())
            .unwrap()
            .eigenvalues;
        for (g, e) in got.iter().zip(&expect) {
            assert!((g - e).abs() < 1e-10);
        }
        let sq = &hermitian_abs(&a).unwrap() * &hermitian_abs(&a).unwrap();
        assert!((&sq - &(&a * &a)).max_abs() < 1e-10 * (&a * &a).max_abs());
    }
}
