//! Conditioning of measured data operators.
//!
//! [`sharp`] turns an indefinite far-field matrix into the Hermitian positive
//! semidefinite `|Re F| + |Im F|`. The Q and R kernels discretize the
//! Dirichlet-to-far-field map on the measurement circle and the direction
//! reversal `g(θ) ↦ g(θ + π)`, each truncated to Fourier modes `|n| ≤ max_order`
//! and carrying the Riemann weight `2π/count`, so that `Q N Qᵀ R` maps
//! near-field data to far-field data.

use std::f64::consts::{FRAC_PI_2, PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::forward::ArrayGeometry;
use crate::linalg::{hermitian_abs, ComplexMatrix};
use crate::specfun::hankel1_symmetric;

/// Default kernel truncation `|n| ≤ 10`.
pub const DEFAULT_KERNEL_TRUNCATION: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KernelTruncation {
    pub max_order: usize,
}

impl Default for KernelTruncation {
    fn default() -> Self {
        Self {
            max_order: DEFAULT_KERNEL_TRUNCATION,
        }
    }
}

impl KernelTruncation {
    pub fn new(max_order: usize) -> Self {
        Self { max_order }
    }

    /// The equispaced rule integrates `e^{i(n−m)θ}` exactly only while
    /// `|n − m| ≤ 2·max_order < count`.
    pub fn validate(&self, geom: &ArrayGeometry) -> Result<()> {
        if 2 * self.max_order >= geom.count {
            return Err(Error::Config(format!(
                "kernel truncation {} aliases on {} points (need max_order < count/2)",
                self.max_order, geom.count
            )));
        }
        Ok(())
    }
}

/// `|Re F| + |Im F|` with `Re F = (F + F*)/2`, `Im F = (F − F*)/(2i)`.
pub fn sharp(f: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !f.is_square() {
        return Err(Error::Shape(format!(
            "sharp needs a square matrix, got {}x{}",
            f.rows(),
            f.cols()
        )));
    }
    let re = hermitian_abs(&f.hermitian_part())?;
    let im = hermitian_abs(&f.skew_hermitian_part())?;
    Ok(re.try_add(&im)?.hermitian_part())
}

fn circulant(n: usize, kernel: impl Fn(usize) -> Complex64) -> ComplexMatrix {
    let row: Vec<Complex64> = (0..n).map(kernel).collect();
    ComplexMatrix::from_fn(n, n, |r, c| row[(r + n - c) % n])
}

/// Collocated Dirichlet-to-far-field kernel
/// `(2π/count) · (1−i)/(2π√(πk)) Σ_{|n|≤T} e^{in(θ_i − θ_j − π/2)} / H_n(kρ)`.
pub fn q_kernel_matrix(
    k: f64,
    rho: f64,
    geom: &ArrayGeometry,
    trunc: KernelTruncation,
) -> Result<ComplexMatrix> {
    trunc.validate(geom)?;
    geom.validate()?;
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::Config(format!(
            "wave number must be positive, got {k}"
        )));
    }
    if (rho - geom.radius).abs() > 1e-12 * geom.radius {
        return Err(Error::Config(format!(
            "kernel radius {rho} does not match the measurement circle radius {}",
            geom.radius
        )));
    }
    let t = trunc.max_order;
    let h = hankel1_symmetric(t, k * rho)?;
    let pre = Complex64::new(1.0, -1.0) / (TAU * (PI * k).sqrt()) * geom.weight();
    Ok(circulant(geom.count, |d| {
        let theta = geom.angle(d);
        let s: Complex64 = h
            .iter()
            .enumerate()
            .map(|(idx, hn)| {
                let n = idx as f64 - t as f64;
                Complex64::from_polar(1.0, n * (theta - FRAC_PI_2)) / hn
            })
            .sum();
        pre * s
    }))
}

/// Collocated reflection kernel `(2π/count) · (1/2π) Σ_{|n|≤T} e^{in(θ_i − θ_j + π)}`.
pub fn r_kernel_matrix(geom: &ArrayGeometry, trunc: KernelTruncation) -> Result<ComplexMatrix> {
    trunc.validate(geom)?;
    geom.validate()?;
    let inv = 1.0 / geom.count as f64;
    Ok(circulant(geom.count, |d| {
        let phase = geom.angle(d) + PI;
        let s: f64 = 1.0
            + (1..=trunc.max_order)
                .map(|n| 2.0 * (n as f64 * phase).cos())
                .sum::<f64>();
        Complex64::new(s * inv, 0.0)
    }))
}

/// `Q N Qᵀ R` with the plain transpose.
pub fn transform_nearfield(
    n: &ComplexMatrix,
    q: &ComplexMatrix,
    r: &ComplexMatrix,
) -> Result<ComplexMatrix> {
    let size = n.rows();
    for (name, m) in [("N", n), ("Q", q), ("R", r)] {
        if m.rows() != size || m.cols() != size {
            return Err(Error::Shape(format!(
                "{name} is {}x{}, expected {size}x{size}",
                m.rows(),
                m.cols()
            )));
        }
    }
    q.matmul(n)?.matmul(&q.transpose())?.matmul(r)
}

/// Builds the Q and R kernels for `geom` and applies [`transform_nearfield`].
pub fn nearfield_to_farfield(
    n: &ComplexMatrix,
    k: f64,
    geom: &ArrayGeometry,
    trunc: KernelTruncation,
) -> Result<ComplexMatrix> {
    let q = q_kernel_matrix(k, geom.radius, geom, trunc)?;
    let r = r_kernel_matrix(geom, trunc)?;
    transform_nearfield(n, &q, &r)
}

/// Least-squares complex scalar `c` minimizing `‖target − c·reference‖_F`,
/// with the attained relative error `‖target − c·reference‖_F / ‖target‖_F`.
pub fn fit_scalar(target: &ComplexMatrix, reference: &ComplexMatrix) -> Result<(Complex64, f64)> {
    let diff_shape = target.try_sub(reference)?;
    drop(diff_shape);
    let num: Complex64 = reference
        .as_slice()
        .iter()
        .zip(target.as_slice())
        .map(|(r, t)| r.conj() * t)
        .sum();
    let den: f64 = reference.as_slice().iter().map(|r| r.norm_sqr()).sum();
    if den == 0.0 {
        return Err(Error::Validation("reference matrix is zero".into()));
    }
    let c = num / den;
    let resid = target.try_sub(&reference.scale(c))?.frobenius_norm();
    let scale = target.frobenius_norm();
    Ok((c, if scale > 0.0 { resid / scale } else { resid }))
}
