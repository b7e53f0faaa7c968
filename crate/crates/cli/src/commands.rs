use std::path::{Path, PathBuf};

use anyhow::{bail, Result};

use regfm::forward::{
    add_noise, born_farfield_matrix, disk_farfield_matrix, soundsoft_nearfield_matrix,
    ArrayGeometry, RadialShape, ResidualReport,
};
use regfm::operators::{
    fit_scalar, q_kernel_matrix, r_kernel_matrix, sharp, transform_nearfield, KernelTruncation,
};
use regfm::rfm::{filter_value, imaging_field, FilterKind, FilterSpec, ImagingField};
use regfm::specfun::{bessel_j, bessel_y, farfield_gamma};
use regfm::ComplexMatrix;

use crate::config::{Mode, RunConfig};
use crate::io::{self, DataHeader};

pub const DATA_FILE: &str = "data.csv";
pub const FIELD_FILE: &str = "w.csv";
pub const IMAGE_FILE: &str = "w.pgm";
pub const BOUNDARY_FILE: &str = "boundary.csv";
const BOUNDARY_POINTS: usize = 256;

pub struct SynthOutput {
    pub path: PathBuf,
    pub residual: Option<ResidualReport>,
}

/// Noise-free data matrix for the configured scatterer.
pub fn synthesize(cfg: &RunConfig) -> Result<(ComplexMatrix, Option<ResidualReport>)> {
    let shape = cfg.shape()?;
    let geom = cfg.geometry();
    Ok(match cfg.mode {
        Mode::Far => (
            born_farfield_matrix(&shape, &cfg.medium(), &geom, &cfg.quadrature_spec())?,
            None,
        ),
        Mode::Near => {
            let data = soundsoft_nearfield_matrix(&shape, cfg.k, &geom, cfg.forward_truncation)?;
            (data.matrix, Some(data.report))
        }
    })
}

pub fn synth(cfg: &RunConfig) -> Result<SynthOutput> {
    let (matrix, residual) = synthesize(cfg)?;
    let mut header = DataHeader::new(cfg, matrix.rows(), matrix.cols());
    header.max_residual = residual.as_ref().map(|r| r.max);
    let path = cfg.out.join(DATA_FILE);
    io::write(&path, &io::format_complex_csv(&header, &matrix)?)?;
    Ok(SynthOutput { path, residual })
}

fn check_header(cfg: &RunConfig, h: &DataHeader) -> Result<()> {
    if h.mode != cfg.mode {
        bail!(
            "data were synthesized in {:?} mode but the run is configured for {:?}",
            h.mode,
            cfg.mode
        );
    }
    if h.rows != cfg.count || h.cols != cfg.count {
        bail!(
            "data are {}x{} but the array has {} points",
            h.rows,
            h.cols,
            cfg.count
        );
    }
    if h.k != cfg.k {
        bail!(
            "data were synthesized at k = {} but the run uses k = {}",
            h.k,
            cfg.k
        );
    }
    if cfg.mode == Mode::Near && h.rho != cfg.rho {
        bail!(
            "data were measured at radius {} but the run uses {}",
            h.rho,
            cfg.rho
        );
    }
    Ok(())
}

/// Noise, conditioning and imaging, without touching the filesystem.
pub fn image_field(cfg: &RunConfig, data: &ComplexMatrix) -> Result<ImagingField> {
    let geom = cfg.geometry();
    let noisy = add_noise(data, cfg.noise, cfg.seed)?;
    let conditioned = match cfg.mode {
        Mode::Far => sharp(&noisy)?,
        Mode::Near => {
            let t = cfg.kernel_truncation();
            let q = q_kernel_matrix(cfg.k, cfg.rho, &geom, t)?;
            let r = r_kernel_matrix(&geom, t)?;
            sharp(&transform_nearfield(&noisy, &q, &r)?)?
        }
    };
    Ok(imaging_field(
        &conditioned,
        cfg.sampling_grid(),
        &cfg.filter_spec()?,
        cfg.k,
        &geom,
    )?)
}

pub struct ImageOutput {
    pub field: ImagingField,
    pub files: Vec<PathBuf>,
}

pub fn image(cfg: &RunConfig, data_path: &Path) -> Result<ImageOutput> {
    let (header, data) = io::parse_complex_csv(&io::read(data_path)?)?;
    check_header(cfg, &header)?;
    let field = image_field(cfg, &data)?;
    let outputs = [
        (cfg.out.join(FIELD_FILE), io::format_field_csv(&field)?),
        (cfg.out.join(IMAGE_FILE), io::format_pgm(&field)),
        (
            cfg.out.join(BOUNDARY_FILE),
            io::format_boundary_csv(&cfg.shape()?, BOUNDARY_POINTS),
        ),
    ];
    for (path, text) in &outputs {
        io::write(path, text)?;
    }
    Ok(ImageOutput {
        field,
        files: outputs.into_iter().map(|(p, _)| p).collect(),
    })
}

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub pass: bool,
    pub detail: String,
}

/// `J₀(1)` and `Y₀(1)` from the ascending series.
const J0_AT_1: f64 = 0.765_197_686_557_966_6;
const Y0_AT_1: f64 = 0.088_256_964_215_676_96;

/// Tolerated relative distance between the fitted convention constant and `γ(k)`.
pub const CONVENTION_TOL: f64 = 5e-3;

fn bessel_check() -> Result<CheckResult> {
    let ej = (bessel_j(0, 1.0)? - J0_AT_1).abs();
    let ey = (bessel_y(0, 1.0)? - Y0_AT_1).abs();
    Ok(CheckResult {
        name: "bessel fixtures",
        pass: ej <= 1e-10 && ey <= 1e-10,
        detail: format!("|J0(1) error| = {ej:.1e}, |Y0(1) error| = {ey:.1e}"),
    })
}

/// Transforms near-field data of a sound-soft disk and compares with the
/// analytic far field. `q_scale` multiplies the Q kernel.
fn disk_oracle_check(q_scale: f64) -> Result<CheckResult> {
    let (a, k) = (0.5, 4.0);
    let geom = ArrayGeometry::default();
    let t = KernelTruncation::default();
    let n = soundsoft_nearfield_matrix(&RadialShape::Disk { radius: a }, k, &geom, 15)?;
    let q = q_kernel_matrix(k, geom.radius, &geom, t)?.scale_real(q_scale);
    let r = r_kernel_matrix(&geom, t)?;
    let f = transform_nearfield(&n.matrix, &q, &r)?;
    let (c, err) = fit_scalar(&f, &disk_farfield_matrix(a, k, &geom, t.max_order)?)?;
    let gamma = farfield_gamma(k);
    let drift = (c / gamma - 1.0).norm();
    Ok(CheckResult {
        name: "disk oracle transform",
        pass: err < 0.05 && drift < CONVENTION_TOL,
        detail: format!(
            "c = {:.6}{:+.6}i, gamma(k) = {:.6}{:+.6}i, |c/gamma - 1| = {drift:.1e}, fit error {err:.1e}",
            c.re, c.im, gamma.re, gamma.im
        ),
    })
}

fn filter_bounds_check() -> Result<CheckResult> {
    let mut worst_low = f64::INFINITY;
    let mut worst_high = f64::NEG_INFINITY;
    for kind in FilterKind::ALL {
        for alpha in [1e-2, 1e-6, 1e-10] {
            let spec = FilterSpec::new(kind, alpha);
            for i in 1..=1000 {
                let phi = filter_value(&spec, i as f64 / 1000.0, 1.0)?;
                worst_low = worst_low.min(phi);
                worst_high = worst_high.max(phi);
            }
        }
    }
    Ok(CheckResult {
        name: "filter bounds",
        pass: worst_low >= 0.0 && worst_high <= 1.0,
        detail: format!("phi in [{worst_low:.3e}, {worst_high:.6}]"),
    })
}

pub fn selftest(q_scale: f64) -> Vec<CheckResult> {
    let run = |name: &'static str, r: Result<CheckResult>| {
        r.unwrap_or_else(|e| CheckResult {
            name,
            pass: false,
            detail: format!("error: {e:#}"),
        })
    };
    vec![
        run("bessel fixtures", bessel_check()),
        run("disk oracle transform", disk_oracle_check(q_scale)),
        run("filter bounds", filter_bounds_check()),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selftest_passes_and_detects_perturbed_kernel() {
        assert!(selftest(1.0).iter().all(|c| c.pass));
        let perturbed = selftest(1.01);
        assert!(
            !perturbed
                .iter()
                .find(|c| c.name == "disk oracle transform")
                .unwrap()
                .pass
        );
    }

    #[test]
    fn header_mismatch_is_rejected() {
        let cfg = RunConfig::default();
        let mut h = DataHeader::new(&cfg, 64, 64);
        check_header(&cfg, &h).unwrap();
        h.k = 3.0;
        assert!(check_header(&cfg, &h).is_err());
        let h = DataHeader::new(&cfg, 32, 32);
        assert!(check_header(&cfg, &h).is_err());
    }
}
