use std::f64::consts::TAU;

use num_complex::Complex64;
use rayon::prelude::*;

use super::quadrature::gauss_legendre_unit;
use super::{ArrayGeometry, MediumParams, RadialShape};
use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;
use crate::specfun::Point2;

/// Polar product rule over `{(ρ, θ) : 0 ≤ ρ ≤ r(θ)}`: midpoint nodes in `θ`
/// and Gauss–Legendre nodes in the scaled radius `ρ / r(θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureSpec {
    pub angular: usize,
    pub radial: usize,
}

impl Default for QuadratureSpec {
    fn default() -> Self {
        Self {
            angular: 256,
            radial: 32,
        }
    }
}

impl QuadratureSpec {
    pub fn refined(&self) -> Self {
        Self {
            angular: 2 * self.angular,
            radial: 2 * self.radial,
        }
    }

    /// Quadrature nodes and weights for the region enclosed by `shape`.
    pub fn nodes(&self, shape: &RadialShape) -> Result<Vec<(Point2, f64)>> {
        if self.angular == 0 || self.radial == 0 {
            return Err(Error::Config(format!(
                "quadrature resolution must be positive, got {}x{}",
                self.angular, self.radial
            )));
        }
        let (t, w) = gauss_legendre_unit(self.radial);
        let dtheta = TAU / self.angular as f64;
        let mut out = Vec::with_capacity(self.angular * self.radial);
        for a in 0..self.angular {
            let theta = (a as f64 + 0.5) * dtheta;
            let r = shape.radius_at(theta);
            let dir = Point2::polar(1.0, theta);
            for (ti, wi) in t.iter().zip(&w) {
                out.push((dir.scale(r * ti), dtheta * r * r * ti * wi));
            }
        }
        Ok(out)
    }
}

/// Born far-field matrix, entry `(i, j) = k² q ∫_D e^{−ik y·(x̂_i − d_j)} dy`
/// with `x̂_i = d_i` the array directions.
pub fn born_farfield_matrix(
    shape: &RadialShape,
    medium: &MediumParams,
    geom: &ArrayGeometry,
    quad: &QuadratureSpec,
) -> Result<ComplexMatrix> {
    shape.validate()?;
    medium.validate()?;
    geom.validate()?;
    let nodes = quad.nodes(shape)?;
    let k = medium.k;
    let n = geom.count;
    let dirs: Vec<Point2> = (0..n).map(|i| geom.direction(i)).collect();

    // incoming[j][node] = e^{ik y·d_j}; the (i, j) entry is then a weighted
    // sum of conj-free products, one row at a time.
    let incoming: Vec<Vec<Complex64>> = dirs
        .iter()
        .map(|d| {
            nodes
                .iter()
                .map(|(y, _)| Complex64::from_polar(1.0, k * y.dot(*d)))
                .collect()
        })
        .collect();
    let scale = medium.q * (k * k);

    let rows: Vec<Vec<Complex64>> = dirs
        .par_iter()
        .map(|xhat| {
            let outgoing: Vec<Complex64> = nodes
                .iter()
                .map(|(y, w)| Complex64::from_polar(*w, -k * y.dot(*xhat)))
                .collect();
            incoming
                .iter()
                .map(|inc| {
                    scale
                        * outgoing
                            .iter()
                            .zip(inc)
                            .map(|(a, b)| a * b)
                            .sum::<Complex64>()
                })
                .collect()
        })
        .collect();
    ComplexMatrix::from_vec(n, n, rows.into_iter().flatten().collect())
}
