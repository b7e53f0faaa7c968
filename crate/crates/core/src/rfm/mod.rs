//! Regularized factorization method: spectral filters, regularized
//! solutions, probe vectors and the imaging functional
//! `W(z) = [Σ_j φ²(σ_j; α)/σ_j |⟨u_j, ℓ_z⟩|²]⁻¹` over a sampling grid.
//!
//! `W` is large where the probe `ℓ_z` lies in the range of the data
//! operator's square root (inside the scatterer) and small elsewhere. A zero
//! filtered sum yields `f64::INFINITY`.

mod filter;

pub use filter::{
    filter_value, BoundFilter, FilterKind, FilterSpec, DEFAULT_ALPHA, LANDWEBER_STEP_FRACTION,
};

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::forward::ArrayGeometry;
use crate::linalg::{hermitian_eig, inner, svd, ComplexMatrix, SpectralData};
use crate::specfun::Point2;

/// Relative size of a negative eigenvalue tolerated as rounding in a PSD operator.
const PSD_TOL: f64 = 1e-10;

/// A Hermitian positive semidefinite operator with its spectral decomposition.
#[derive(Debug, Clone)]
pub struct GelfandModel {
    pub operator: ComplexMatrix,
    pub spectrum: SpectralData,
}

impl GelfandModel {
    pub fn new(operator: ComplexMatrix) -> Result<Self> {
        let e = hermitian_eig(&operator)?;
        let n = operator.rows();
        let top = e.eigenvalues.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        if let Some(&min) = e.eigenvalues.first() {
            if min < -PSD_TOL * top {
                return Err(Error::Validation(format!(
                    "operator is not positive semidefinite: eigenvalue {min:e} with scale {top:e}"
                )));
            }
        }
        let mut left = ComplexMatrix::zeros(n, n);
        let mut values = Vec::with_capacity(n);
        for (dst, src) in (0..n).rev().enumerate() {
            values.push(e.eigenvalues[src].max(0.0));
            left.set_column(dst, &e.vector(src));
        }
        Ok(Self {
            operator: operator.hermitian_part(),
            spectrum: SpectralData {
                values,
                left_vectors: left,
            },
        })
    }

    /// The operator `U diag(values) U*` for a prescribed orthonormal basis.
    pub fn from_spectrum(spectrum: SpectralData) -> Result<Self> {
        let u = &spectrum.left_vectors;
        if u.cols() != spectrum.values.len() {
            return Err(Error::Shape(format!(
                "{} singular values for {} vectors",
                spectrum.values.len(),
                u.cols()
            )));
        }
        if spectrum
            .values
            .iter()
            .any(|&v| !(v >= 0.0 && v.is_finite()))
        {
            return Err(Error::Validation(
                "spectrum values must be finite and nonnegative".into(),
            ));
        }
        let diag = ComplexMatrix::from_real_diag(&spectrum.values);
        let operator = u.matmul(&diag)?.matmul(&u.adjoint())?.hermitian_part();
        Ok(Self { operator, spectrum })
    }

    pub fn dim(&self) -> usize {
        self.operator.rows()
    }
}

/// Precomputed per-mode weights for repeated evaluation of filtered sums.
struct FilteredSpectrum<'a> {
    spectrum: &'a SpectralData,
    /// `(mode, φ(σ_j), σ_j floored)` for the modes the filter keeps.
    modes: Vec<(usize, f64, f64)>,
}

impl<'a> FilteredSpectrum<'a> {
    fn new(spectrum: &'a SpectralData, spec: &FilterSpec) -> Result<Self> {
        spec.validate()?;
        let sigma1 = spectrum.largest();
        if sigma1 == 0.0 {
            return Ok(Self {
                spectrum,
                modes: Vec::new(),
            });
        }
        let f = spec.bind(sigma1)?;
        let mut modes = Vec::with_capacity(spectrum.len());
        for j in 0..spectrum.len() {
            let s = spectrum.floored(j);
            let phi = f.eval(s)?;
            if phi > 0.0 {
                modes.push((j, phi, s));
            }
        }
        Ok(Self { spectrum, modes })
    }

    fn check_len(&self, l: &[Complex64]) -> Result<()> {
        let n = self.spectrum.left_vectors.rows();
        if l.len() != n {
            return Err(Error::Shape(format!(
                "vector of length {} for operator of size {n}",
                l.len()
            )));
        }
        Ok(())
    }

    fn coefficient(&self, j: usize, l: &[Complex64]) -> Complex64 {
        let u = &self.spectrum.left_vectors;
        (0..l.len()).map(|i| u[(i, j)].conj() * l[i]).sum()
    }

    fn quadratic_form(&self, l: &[Complex64]) -> f64 {
        self.modes
            .iter()
            .map(|&(j, phi, s)| phi * phi / s * self.coefficient(j, l).norm_sqr())
            .sum()
    }
}

fn nonempty(spectrum: &SpectralData) -> Result<()> {
    if spectrum.is_empty() {
        return Err(Error::Validation("spectrum is empty".into()));
    }
    Ok(())
}

/// `x_α = Σ_j (φ(σ_j; α)/σ_j) ⟨u_j, ℓ⟩ u_j`.
pub fn regularized_solution(
    model: &GelfandModel,
    l: &[Complex64],
    spec: &FilterSpec,
) -> Result<Vec<Complex64>> {
    nonempty(&model.spectrum)?;
    let fs = FilteredSpectrum::new(&model.spectrum, spec)?;
    fs.check_len(l)?;
    let u = &model.spectrum.left_vectors;
    let mut x = vec![Complex64::new(0.0, 0.0); l.len()];
    for &(j, phi, s) in &fs.modes {
        let c = fs.coefficient(j, l) * (phi / s);
        for (i, xi) in x.iter_mut().enumerate() {
            *xi += c * u[(i, j)];
        }
    }
    Ok(x)
}

/// `Σ_j (φ²(σ_j; α)/σ_j) |⟨u_j, ℓ⟩|²`, which equals `⟨x_α, A x_α⟩`.
pub fn quadratic_form(model: &GelfandModel, l: &[Complex64], spec: &FilterSpec) -> Result<f64> {
    nonempty(&model.spectrum)?;
    let fs = FilteredSpectrum::new(&model.spectrum, spec)?;
    fs.check_len(l)?;
    Ok(fs.quadratic_form(l))
}

/// Far-field pattern of a point source at `z`, sampled at the array directions.
#[derive(Debug, Clone, PartialEq)]
pub struct ProbeVector {
    pub z: Point2,
    pub entries: Vec<Complex64>,
}

/// `ℓ_z[i] = e^{−ik x̂_i·z}`.
pub fn probe_vector(z: Point2, geom: &ArrayGeometry, k: f64) -> ProbeVector {
    let entries = (0..geom.count)
        .map(|i| Complex64::from_polar(1.0, -k * geom.direction(i).dot(z)))
        .collect();
    ProbeVector { z, entries }
}

fn reciprocal(sum: f64) -> f64 {
    if sum > 0.0 {
        1.0 / sum
    } else {
        f64::INFINITY
    }
}

/// `W(z)` for one probe; `f64::INFINITY` when the filtered sum vanishes.
pub fn imaging_value(
    spectrum: &SpectralData,
    probe: &ProbeVector,
    spec: &FilterSpec,
) -> Result<f64> {
    let fs = FilteredSpectrum::new(spectrum, spec)?;
    fs.check_len(&probe.entries)?;
    Ok(reciprocal(fs.quadratic_form(&probe.entries)))
}

/// Rectangular lattice with inclusive endpoints.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl SamplingGrid {
    pub fn new(xmin: f64, xmax: f64, ymin: f64, ymax: f64, nx: usize, ny: usize) -> Self {
        Self {
            xmin,
            xmax,
            ymin,
            ymax,
            nx,
            ny,
        }
    }

    /// `n × n` points on `[−h, h]²`.
    pub fn square(half_width: f64, n: usize) -> Self {
        Self::new(-half_width, half_width, -half_width, half_width, n, n)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.xmin, self.xmax, self.ymin, self.ymax]
            .iter()
            .all(|v| v.is_finite());
        if !finite || self.xmin > self.xmax || self.ymin > self.ymax {
            return Err(Error::Config(format!(
                "invalid grid ranges [{}, {}] x [{}, {}]",
                self.xmin, self.xmax, self.ymin, self.ymax
            )));
        }
        if self.nx == 0 || self.ny == 0 {
            return Err(Error::Config(format!(
                "grid needs at least one point per axis, got {}x{}",
                self.nx, self.ny
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn coord(lo: f64, hi: f64, n: usize, i: usize) -> f64 {
        if n == 1 {
            lo
        } else {
            lo + (hi - lo) * i as f64 / (n - 1) as f64
        }
    }

    pub fn x(&self, ix: usize) -> f64 {
        Self::coord(self.xmin, self.xmax, self.nx, ix)
    }

    pub fn y(&self, iy: usize) -> f64 {
        Self::coord(self.ymin, self.ymax, self.ny, iy)
    }

    pub fn point(&self, ix: usize, iy: usize) -> Point2 {
        Point2::new(self.x(ix), self.y(iy))
    }

    /// Point for a flat index `iy * nx + ix`.
    pub fn point_at(&self, idx: usize) -> Point2 {
        self.point(idx % self.nx, idx / self.nx)
    }
}

/// `W(z)` sampled on a grid; `values[iy * nx + ix]`.
#[derive(Debug, Clone)]
pub struct ImagingField {
    pub grid: SamplingGrid,
    pub values: Vec<f64>,
    pub alpha: f64,
    pub kind: FilterKind,
}

impl ImagingField {
    pub fn get(&self, ix: usize, iy: usize) -> f64 {
        self.values[iy * self.grid.nx + ix]
    }

    /// Largest finite value, if any.
    pub fn finite_max(&self) -> Option<f64> {
        self.values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .reduce(f64::max)
    }

    pub fn finite_min(&self) -> Option<f64> {
        self.values
            .iter()
            .copied()
            .filter(|v| v.is_finite())
            .reduce(f64::min)
    }

    /// Mean of `W` over the grid points selected by `select`; `None` if none are.
    pub fn mean_where(&self, select: impl Fn(Point2) -> bool) -> Option<f64> {
        let (sum, count) = self
            .values
            .iter()
            .enumerate()
            .filter(|(i, _)| select(self.grid.point_at(*i)))
            .fold((0.0, 0usize), |(s, c), (_, v)| (s + v, c + 1));
        (count > 0).then(|| sum / count as f64)
    }

    /// `{z : W(z) ≥ fraction · max W}`, with the sentinel counted as maximal.
    pub fn level_mask(&self, fraction: f64) -> Vec<bool> {
        if self.values.iter().any(|v| v.is_infinite()) {
            return self.values.iter().map(|v| v.is_infinite()).collect();
        }
        let max = self.finite_max().unwrap_or(0.0);
        self.values.iter().map(|&v| v >= fraction * max).collect()
    }
}

/// `|A ∩ B| / |A ∪ B|` of two masks; 1 for two empty masks.
pub fn jaccard(a: &[bool], b: &[bool]) -> f64 {
    let inter = a.iter().zip(b).filter(|(x, y)| **x && **y).count();
    let union = a.iter().zip(b).filter(|(x, y)| **x || **y).count();
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}

/// Evaluates `W` at every grid point from one decomposition of `data_sharp`.
pub fn imaging_field(
    data_sharp: &ComplexMatrix,
    grid: SamplingGrid,
    spec: &FilterSpec,
    k: f64,
    geom: &ArrayGeometry,
) -> Result<ImagingField> {
    grid.validate()?;
    geom.validate()?;
    if data_sharp.rows() != geom.count || data_sharp.cols() != geom.count {
        return Err(Error::Shape(format!(
            "data is {}x{} but the array has {} points",
            data_sharp.rows(),
            data_sharp.cols(),
            geom.count
        )));
    }
    let decomposition = svd(data_sharp)?;
    let fs = FilteredSpectrum::new(&decomposition.spectrum, spec)?;
    let adjoint_rows: Vec<(Vec<Complex64>, f64)> = fs
        .modes
        .iter()
        .map(|&(j, phi, s)| (decomposition.spectrum.vector(j), phi * phi / s))
        .collect();
    let values = (0..grid.len())
        .into_par_iter()
        .map(|idx| {
            let probe = probe_vector(grid.point_at(idx), geom, k);
            let sum: f64 = adjoint_rows
                .iter()
                .map(|(u, w)| w * inner(u, &probe.entries).norm_sqr())
                .sum();
            reciprocal(sum)
        })
        .collect();
    Ok(ImagingField {
        grid,
        values,
        alpha: spec.alpha,
        kind: spec.kind,
    })
}
