use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use regfm::forward::{
    ArrayGeometry, MediumParams, QuadratureSpec, RadialShape, DEFAULT_FORWARD_TRUNCATION,
};
use regfm::operators::{KernelTruncation, DEFAULT_KERNEL_TRUNCATION};
use regfm::rfm::{FilterKind, FilterSpec, SamplingGrid, DEFAULT_ALPHA};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Born far-field data of a penetrable medium.
    Far,
    /// Near-field data of a sound-soft obstacle, measured on a circle.
    Near,
}

impl std::str::FromStr for Mode {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "far" => Ok(Mode::Far),
            "near" => Ok(Mode::Near),
            other => bail!("unknown mode '{other}' (expected 'far' or 'near')"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FilterConfig {
    pub kind: String,
    pub alpha: f64,
    pub beta: Option<f64>,
}

impl Default for FilterConfig {
    fn default() -> Self {
        Self {
            kind: FilterKind::Tikhonov.name().into(),
            alpha: DEFAULT_ALPHA,
            beta: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub xmin: f64,
    pub xmax: f64,
    pub ymin: f64,
    pub ymax: f64,
    pub nx: usize,
    pub ny: usize,
}

impl Default for GridConfig {
    fn default() -> Self {
        Self {
            xmin: -1.0,
            xmax: 1.0,
            ymin: -1.0,
            ymax: 1.0,
            nx: 128,
            ny: 128,
        }
    }
}

impl std::str::FromStr for GridConfig {
    type Err = anyhow::Error;

    /// `xmin,xmax,ymin,ymax,nx,ny`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(',').map(str::trim).collect();
        if parts.len() != 6 {
            bail!("grid must be 'xmin,xmax,ymin,ymax,nx,ny', got '{s}'");
        }
        let f = |i: usize| -> Result<f64> {
            parts[i]
                .parse()
                .with_context(|| format!("bad grid bound '{}'", parts[i]))
        };
        let n = |i: usize| -> Result<usize> {
            parts[i]
                .parse()
                .with_context(|| format!("bad grid size '{}'", parts[i]))
        };
        Ok(Self {
            xmin: f(0)?,
            xmax: f(1)?,
            ymin: f(2)?,
            ymax: f(3)?,
            nx: n(4)?,
            ny: n(5)?,
        })
    }
}

/// Everything a run needs. Missing JSON fields take the defaults below.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub mode: Mode,
    pub shape: String,
    pub k: f64,
    /// Contrast `[re, im]`, far mode only.
    pub q: [f64; 2],
    /// Measurement circle radius, near mode only.
    pub rho: f64,
    pub count: usize,
    /// Relative noise level applied at imaging time.
    pub noise: f64,
    pub seed: u64,
    pub filter: FilterConfig,
    pub grid: GridConfig,
    pub forward_truncation: usize,
    pub kernel_truncation: usize,
    pub quadrature: QuadratureConfig,
    /// Output directory.
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QuadratureConfig {
    pub angular: usize,
    pub radial: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        let q = QuadratureSpec::default();
        Self {
            angular: q.angular,
            radial: q.radial,
        }
    }
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            mode: Mode::Far,
            shape: "star".into(),
            k: 4.0,
            q: [1.0, 1.0],
            rho: 5.0,
            count: 64,
            noise: 0.0,
            seed: 0,
            filter: FilterConfig::default(),
            grid: GridConfig::default(),
            forward_truncation: DEFAULT_FORWARD_TRUNCATION,
            kernel_truncation: DEFAULT_KERNEL_TRUNCATION,
            quadrature: QuadratureConfig::default(),
            out: PathBuf::from("out"),
        }
    }
}

/// Command-line values that take precedence over the config file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub mode: Option<Mode>,
    pub shape: Option<String>,
    pub k: Option<f64>,
    pub alpha: Option<f64>,
    pub filter: Option<String>,
    pub noise: Option<f64>,
    pub seed: Option<u64>,
    pub grid: Option<GridConfig>,
    pub out: Option<PathBuf>,
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).context("invalid configuration JSON")
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .with_context(|| format!("cannot read config {}", path.display()))?;
        Self::from_json(&text).with_context(|| format!("in {}", path.display()))
    }

    /// Loads `path` if given (defaults otherwise), applies `overrides` and validates.
    pub fn resolve(path: Option<&Path>, overrides: Overrides) -> Result<Self> {
        let mut cfg = match path {
            Some(p) => Self::load(p)?,
            None => Self::default(),
        };
        cfg.apply(overrides);
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn apply(&mut self, o: Overrides) {
        if let Some(v) = o.mode {
            self.mode = v;
        }
        if let Some(v) = o.shape {
            self.shape = v;
        }
        if let Some(v) = o.k {
            self.k = v;
        }
        if let Some(v) = o.alpha {
            self.filter.alpha = v;
        }
        if let Some(v) = o.filter {
            self.filter.kind = v;
        }
        if let Some(v) = o.noise {
            self.noise = v;
        }
        if let Some(v) = o.seed {
            self.seed = v;
        }
        if let Some(v) = o.grid {
            self.grid = v;
        }
        if let Some(v) = o.out {
            self.out = v;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let shape = self.shape()?;
        shape.validate()?;
        self.medium().validate()?;
        self.geometry().validate()?;
        self.filter_spec()?.validate()?;
        self.sampling_grid().validate()?;
        if !(self.noise >= 0.0 && self.noise.is_finite()) {
            bail!("noise level must be non-negative, got {}", self.noise);
        }
        if self.mode == Mode::Near {
            self.kernel_truncation().validate(&self.geometry())?;
            if shape.max_radius() >= self.rho {
                bail!(
                    "shape '{shape}' does not fit inside the measurement circle of radius {}",
                    self.rho
                );
            }
            if self.count < 2 * self.forward_truncation + 1 {
                bail!(
                    "{} boundary points cannot determine {} series coefficients",
                    self.count,
                    2 * self.forward_truncation + 1
                );
            }
        }
        if self.quadrature.angular == 0 || self.quadrature.radial == 0 {
            bail!("quadrature resolution must be positive");
        }
        Ok(())
    }

    pub fn shape(&self) -> Result<RadialShape> {
        Ok(self.shape.parse()?)
    }

    pub fn medium(&self) -> MediumParams {
        MediumParams::new(self.k, Complex64::new(self.q[0], self.q[1]))
    }

    pub fn geometry(&self) -> ArrayGeometry {
        ArrayGeometry::new(self.count, self.rho)
    }

    pub fn quadrature_spec(&self) -> QuadratureSpec {
        QuadratureSpec {
            angular: self.quadrature.angular,
            radial: self.quadrature.radial,
        }
    }

    pub fn kernel_truncation(&self) -> KernelTruncation {
        KernelTruncation::new(self.kernel_truncation)
    }

    pub fn filter_spec(&self) -> Result<FilterSpec> {
        let kind: FilterKind = self.filter.kind.parse()?;
        Ok(FilterSpec {
            kind,
            alpha: self.filter.alpha,
            beta: self.filter.beta,
        })
    }

    pub fn sampling_grid(&self) -> SamplingGrid {
        let g = self.grid;
        SamplingGrid::new(g.xmin, g.xmax, g.ymin, g.ymax, g.nx, g.ny)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_are_valid() {
        let cfg = RunConfig::default();
        cfg.validate().unwrap();
        assert_eq!(cfg.filter_spec().unwrap(), FilterSpec::tikhonov(1e-6));
        assert_eq!(cfg.geometry(), ArrayGeometry::new(64, 5.0));
    }

    #[test]
    fn partial_json_keeps_defaults() {
        let cfg = RunConfig::from_json(
            r#"{"mode": "near", "shape": "peanut", "filter": {"kind": "cutoff"}}"#,
        )
        .unwrap();
        assert_eq!(cfg.mode, Mode::Near);
        assert_eq!(cfg.filter.alpha, 1e-6);
        assert_eq!(cfg.k, 4.0);
        assert!(RunConfig::from_json(r#"{"wavenumber": 3}"#).is_err());
    }

    #[test]
    fn flags_win_over_file() {
        let mut cfg = RunConfig::from_json(
            r#"{"k": 3.0, "seed": 9, "filter": {"kind": "landweber", "alpha": 0.01}}"#,
        )
        .unwrap();
        cfg.apply(Overrides {
            k: Some(5.0),
            alpha: Some(1e-4),
            filter: Some("cutoff".into()),
            ..Default::default()
        });
        assert_eq!(cfg.k, 5.0);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.filter_spec().unwrap(), FilterSpec::cutoff(1e-4));
    }

    #[test]
    fn grid_flag_parses() {
        let g: GridConfig = "-2,2,-1.5,1.5,40,30".parse().unwrap();
        assert_eq!(
            g,
            GridConfig {
                xmin: -2.0,
                xmax: 2.0,
                ymin: -1.5,
                ymax: 1.5,
                nx: 40,
                ny: 30
            }
        );
        assert!("1,2,3".parse::<GridConfig>().is_err());
    }

    #[test]
    fn invalid_configs_rejected() {
        let bad = |json: &str| RunConfig::from_json(json).unwrap().validate().is_err();
        assert!(bad(r#"{"k": -1}"#));
        assert!(bad(r#"{"shape": "hexagon"}"#));
        assert!(bad(r#"{"noise": -0.1}"#));
        assert!(bad(r#"{"filter": {"alpha": 0}}"#));
        assert!(bad(r#"{"mode": "near", "rho": 0.5}"#));
        assert!(bad(r#"{"mode": "near", "count": 20}"#));
        assert!(bad(r#"{"grid": {"nx": 0}}"#));
    }
}
