use num_complex::Complex64;
use rayon::prelude::*;

use super::{boundary_point, ArrayGeometry, RadialShape};
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, LeastSquares};
use crate::specfun::{fundamental_solution, hankel1_symmetric};

/// Relative boundary residual above which a source is flagged.
pub const RESIDUAL_WARNING: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResidualStatus {
    Ok,
    /// Some source's collocation residual exceeds [`RESIDUAL_WARNING`]: the
    /// truncation is too short or `k²` sits near an interior Dirichlet
    /// eigenvalue.
    Warning,
}

/// Boundary-condition residual of the series solve, per source.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualReport {
    /// `max_i |u^s(x̃_i, y_j) + Φ(x̃_i, y_j)| / max_i |Φ(x̃_i, y_j)|`.
    pub per_source: Vec<f64>,
    pub max: f64,
    pub status: ResidualStatus,
    /// Set if the collocation matrix was numerically rank deficient.
    pub rank_deficient: bool,
}

impl ResidualReport {
    pub fn is_warning(&self) -> bool {
        self.status == ResidualStatus::Warning
    }
}

#[derive(Debug, Clone)]
pub struct NearFieldData {
    /// `N[i][j] = u^s(x_i, y_j)` for receivers/sources on the measurement circle.
    pub matrix: ComplexMatrix,
    /// Series coefficients `c_n(y_j)`, `coefficients[j][n + trunc]`.
    pub coefficients: Vec<Vec<Complex64>>,
    pub truncation: usize,
    pub report: ResidualReport,
}

/// Scattered field of a sound-soft obstacle excited by point sources on the
/// measurement circle.
///
/// The field is expanded as `u^s(x) = Σ_{|n|≤trunc} c_n H_n(k|x|) e^{inθ_x}`
/// and `c_n(y_j)` is the least-squares fit of `u^s = −Φ(·, y_j)` at the
/// boundary points `r(θ_i)(cos θ_i, sin θ_i)`, one per array angle.
pub fn soundsoft_nearfield_matrix(
    shape: &RadialShape,
    k: f64,
    geom: &ArrayGeometry,
    trunc: usize,
) -> Result<NearFieldData> {
    shape.validate()?;
    geom.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Config(format!(
            "wave number must be positive, got {k}"
        )));
    }
    let unknowns = 2 * trunc + 1;
    if geom.count < unknowns {
        return Err(Error::Config(format!(
            "{} collocation points cannot determine {unknowns} coefficients",
            geom.count
        )));
    }
    let extent = shape.max_radius();
    if extent >= geom.radius {
        return Err(Error::Config(format!(
            "scatterer (max radius {extent}) must lie strictly inside the measurement circle of radius {}",
            geom.radius
        )));
    }

    let n = geom.count;
    let boundary: Vec<_> = (0..n)
        .map(|i| boundary_point(shape, geom.angle(i)))
        .collect();
    let mut colloc = ComplexMatrix::zeros(n, unknowns);
    for (i, x) in boundary.iter().enumerate() {
        let h = hankel1_symmetric(trunc, k * x.norm())?;
        let theta = geom.angle(i);
        for (col, hn) in h.iter().enumerate() {
            let order = col as f64 - trunc as f64;
            colloc[(i, col)] = hn * Complex64::from_polar(1.0, order * theta);
        }
    }
    let solver = LeastSquares::factor(&colloc)?;
    let h_gamma = hankel1_symmetric(trunc, k * geom.radius)?;

    let per_source: Vec<Result<(Vec<Complex64>, Vec<Complex64>, f64, bool)>> = (0..n)
        .into_par_iter()
        .map(|j| {
            let y = geom.point(j);
            let phi = boundary
                .iter()
                .map(|x| fundamental_solution(*x, y, k))
                .collect::<Result<Vec<_>>>()?;
            let rhs: Vec<Complex64> = phi.iter().map(|p| -p).collect();
            let sol = solver.solve(&rhs)?;
            let fitted = colloc.matvec(&sol.x)?;
            let scale = phi.iter().map(|p| p.norm()).fold(0.0, f64::max);
            let resid = fitted
                .iter()
                .zip(&phi)
                .map(|(u, p)| (u + p).norm())
                .fold(0.0, f64::max)
                / scale;
            let column: Vec<Complex64> = (0..n)
                .map(|i| {
                    let theta = geom.angle(i);
                    sol.x
                        .iter()
                        .zip(&h_gamma)
                        .enumerate()
                        .map(|(col, (c, h))| {
                            let order = col as f64 - trunc as f64;
                            c * h * Complex64::from_polar(1.0, order * theta)
                        })
                        .sum()
                })
                .collect();
            Ok((sol.x, column, resid, sol.rank_deficient))
        })
        .collect();

    let mut matrix = ComplexMatrix::zeros(n, n);
    let mut coefficients = Vec::with_capacity(n);
    let mut residuals = Vec::with_capacity(n);
    let mut rank_deficient = false;
    for (j, item) in per_source.into_iter().enumerate() {
        let (coef, column, resid, rd) = item?;
        matrix.set_column(j, &column);
        coefficients.push(coef);
        residuals.push(resid);
        rank_deficient |= rd;
    }
    let max = residuals.iter().copied().fold(0.0, f64::max);
    let status = if max > RESIDUAL_WARNING {
        ResidualStatus::Warning
    } else {
        ResidualStatus::Ok
    };
    Ok(NearFieldData {
        matrix,
        coefficients,
        truncation: trunc,
        report: ResidualReport {
            per_source: residuals,
            max,
            status,
            rank_deficient,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::{bessel_j, hankel1};

    /// Separation of variables plus Graf's addition theorem:
    /// `c_n(y) = −(i/4) H_n(k|y|) e^{−inθ_y} J_n(ka) / H_n(ka)`.
    fn disk_coefficient(a: f64, k: f64, y: crate::specfun::Point2, n: i32) -> Complex64 {
        let jn = bessel_j(n.unsigned_abs() as usize, k * a).unwrap();
        let jn = if n < 0 && n % 2 != 0 { -jn } else { jn };
        Complex64::new(0.0, -0.25)
            * hankel1(n, k * y.norm()).unwrap()
            * Complex64::from_polar(1.0, -(n as f64) * y.angle())
            * jn
            / hankel1(n, k * a).unwrap()
    }

    #[test]
    fn disk_coefficients_match_closed_form() {
        let geom = ArrayGeometry::default();
        let data =
            soundsoft_nearfield_matrix(&RadialShape::Disk { radius: 0.5 }, 4.0, &geom, 15).unwrap();
        for j in [0, 5, 17, 40, 63] {
            let y = geom.point(j);
            for n in -10..=10i32 {
                let expect = disk_coefficient(0.5, 4.0, y, n);
                let got = data.coefficients[j][(n + 15) as usize];
                assert!(
                    (got - expect).norm() <= 1e-6 * expect.norm(),
                    "j={j} n={n}: {got} vs {expect}"
                );
            }
        }
        assert!(data.report.max < 1e-8);
        assert_eq!(data.report.status, ResidualStatus::Ok);
    }

    #[test]
    fn boundary_residual_decreases_with_truncation() {
        let geom = ArrayGeometry::default();
        for shape in [RadialShape::Acorn, RadialShape::Peanut] {
            let r: Vec<f64> = [10, 15, 20, 25]
                .iter()
                .map(|&t| {
                    soundsoft_nearfield_matrix(&shape, 4.0, &geom, t)
                        .unwrap()
                        .report
                        .max
                })
                .collect();
            assert!(r.windows(2).all(|w| w[1] < w[0]), "{shape}: {r:?}");
            assert!(r[3] < 1e-2, "{shape}: {r:?}");
        }
    }

    #[test]
    fn peanut_reciprocity() {
        let data =
            soundsoft_nearfield_matrix(&RadialShape::Peanut, 4.0, &ArrayGeometry::default(), 15)
                .unwrap();
        let n = &data.matrix;
        let defect = (n - &n.transpose()).frobenius_norm() / n.frobenius_norm();
        assert!(defect < 1e-2, "{defect}");
    }

    #[test]
    fn rejects_bad_configurations() {
        let geom = ArrayGeometry::default();
        assert!(
            soundsoft_nearfield_matrix(&RadialShape::Disk { radius: 6.0 }, 4.0, &geom, 15).is_err()
        );
        assert!(soundsoft_nearfield_matrix(
            &RadialShape::Star,
            4.0,
            &ArrayGeometry::new(20, 5.0),
            15
        )
        .is_err());
        assert!(soundsoft_nearfield_matrix(&RadialShape::Star, -1.0, &geom, 15).is_err());
    }
}
