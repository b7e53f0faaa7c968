//! Synthetic scattering data.
//!
//! Far-field data for penetrable scatterers uses the Born approximation
//! `u∞(x̂, d) ≈ k² ∫_D q e^{−ik y·(x̂−d)} dy`. Near-field data for sound-soft
//! scatterers comes from a truncated Fourier–Hankel expansion of the
//! scattered field fitted to the Dirichlet condition by least squares.

mod born;
mod disk;
mod nearfield;
mod noise;
mod quadrature;
mod shape;

use std::f64::consts::TAU;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::specfun::Point2;

pub use born::{born_farfield_matrix, QuadratureSpec};
pub use disk::disk_farfield_matrix;
pub use nearfield::{
    soundsoft_nearfield_matrix, NearFieldData, ResidualReport, ResidualStatus, RESIDUAL_WARNING,
};
pub use noise::{add_noise, normalized_noise};
pub use quadrature::gauss_legendre_unit;
pub use shape::{boundary_point, RadialShape};

/// Default number of sources/receivers (and far-field directions).
pub const DEFAULT_COUNT: usize = 64;
/// Default radius of the measurement circle for near-field data.
pub const DEFAULT_MEASUREMENT_RADIUS: f64 = 5.0;
/// Default series truncation `|n| ≤ 15` of the near-field forward solver.
pub const DEFAULT_FORWARD_TRUNCATION: usize = 15;

/// Wave number and constant contrast of a penetrable scatterer.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MediumParams {
    pub k: f64,
    pub q: Complex64,
}

impl MediumParams {
    pub fn new(k: f64, q: Complex64) -> Self {
        Self { k, q }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.k > 0.0 && self.k.is_finite()) {
            return Err(Error::Config(format!(
                "wave number must be positive, got {}",
                self.k
            )));
        }
        if !(self.q.re >= 0.0 && self.q.im >= 0.0 && self.q.re.is_finite() && self.q.im.is_finite())
        {
            return Err(Error::Config(format!(
                "contrast must have non-negative real and imaginary parts, got {}",
                self.q
            )));
        }
        Ok(())
    }
}

impl Default for MediumParams {
    fn default() -> Self {
        Self {
            k: 4.0,
            q: Complex64::new(1.0, 1.0),
        }
    }
}

/// Equispaced angles `θ_i = 2π i / count` on the unit circle (far field) or
/// on the measurement circle of the given radius (near field).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayGeometry {
    pub count: usize,
    pub radius: f64,
}

impl ArrayGeometry {
    pub fn new(count: usize, radius: f64) -> Self {
        Self { count, radius }
    }

    pub fn validate(&self) -> Result<()> {
        if self.count == 0 {
            return Err(Error::Config("array needs at least one element".into()));
        }
        if !(self.radius > 0.0 && self.radius.is_finite()) {
            return Err(Error::Config(format!(
                "array radius must be positive, got {}",
                self.radius
            )));
        }
        Ok(())
    }

    pub fn angle(&self, i: usize) -> f64 {
        TAU * i as f64 / self.count as f64
    }

    pub fn angles(&self) -> Vec<f64> {
        (0..self.count).map(|i| self.angle(i)).collect()
    }

    /// Unit direction `(cos θ_i, sin θ_i)`.
    pub fn direction(&self, i: usize) -> Point2 {
        Point2::polar(1.0, self.angle(i))
    }

    /// Source/receiver location on the measurement circle.
    pub fn point(&self, i: usize) -> Point2 {
        Point2::polar(self.radius, self.angle(i))
    }

    /// Riemann-sum weight `2π / count`.
    pub fn weight(&self) -> f64 {
        TAU / self.count as f64
    }
}

impl Default for ArrayGeometry {
    fn default() -> Self {
        Self {
            count: DEFAULT_COUNT,
            radius: DEFAULT_MEASUREMENT_RADIUS,
        }
    }
}
