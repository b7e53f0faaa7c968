use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Default regularization parameter.
pub const DEFAULT_ALPHA: f64 = 1e-6;

/// Default Landweber step as a fraction of `1/σ₁²`.
pub const LANDWEBER_STEP_FRACTION: f64 = 0.9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FilterKind {
    Tikhonov,
    Landweber,
    SpectralCutoff,
}

impl FilterKind {
    pub const ALL: [FilterKind; 3] = [
        FilterKind::Tikhonov,
        FilterKind::Landweber,
        FilterKind::SpectralCutoff,
    ];

    pub fn name(self) -> &'static str {
        match self {
            FilterKind::Tikhonov => "tikhonov",
            FilterKind::Landweber => "landweber",
            FilterKind::SpectralCutoff => "cutoff",
        }
    }
}

impl fmt::Display for FilterKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for FilterKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "tikhonov" => Ok(FilterKind::Tikhonov),
            "landweber" => Ok(FilterKind::Landweber),
            "cutoff" | "spectral-cutoff" | "spectralcutoff" => Ok(FilterKind::SpectralCutoff),
            other => Err(Error::Config(format!("unknown filter '{other}'"))),
        }
    }
}

/// A spectral filter `φ(t; α)` with its parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FilterSpec {
    pub kind: FilterKind,
    pub alpha: f64,
    /// Landweber step; `None` selects `0.9/σ₁²`.
    pub beta: Option<f64>,
}

impl FilterSpec {
    pub fn new(kind: FilterKind, alpha: f64) -> Self {
        Self {
            kind,
            alpha,
            beta: None,
        }
    }

    pub fn tikhonov(alpha: f64) -> Self {
        Self::new(FilterKind::Tikhonov, alpha)
    }

    pub fn cutoff(alpha: f64) -> Self {
        Self::new(FilterKind::SpectralCutoff, alpha)
    }

    pub fn landweber(alpha: f64, beta: Option<f64>) -> Self {
        Self {
            kind: FilterKind::Landweber,
            alpha,
            beta,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha.is_finite()) {
            return Err(Error::Config(format!(
                "alpha must be positive and finite, got {}",
                self.alpha
            )));
        }
        if let Some(b) = self.beta {
            if !(b > 0.0 && b.is_finite()) {
                return Err(Error::Config(format!(
                    "beta must be positive and finite, got {b}"
                )));
            }
        }
        Ok(())
    }

    /// Number of Landweber iterations `max(1, round(1/α))`.
    pub fn landweber_steps(&self) -> u64 {
        (1.0 / self.alpha).round().max(1.0) as u64
    }

    /// Landweber step for a data operator with largest singular value `sigma1`.
    pub fn landweber_beta(&self, sigma1: f64) -> f64 {
        self.beta
            .unwrap_or(LANDWEBER_STEP_FRACTION / (sigma1 * sigma1))
    }

    /// A filter bound to a concrete `σ₁`, with parameters checked once.
    pub fn bind(&self, sigma1: f64) -> Result<BoundFilter> {
        self.validate()?;
        if !(sigma1 > 0.0 && sigma1.is_finite()) {
            return Err(Error::Config(format!(
                "largest singular value must be positive, got {sigma1}"
            )));
        }
        let beta = if self.kind == FilterKind::Landweber {
            let b = self.landweber_beta(sigma1);
            if b * sigma1 * sigma1 >= 1.0 {
                return Err(Error::Config(format!(
                    "Landweber step {b:e} violates beta * sigma1^2 < 1 (sigma1 = {sigma1:e})"
                )));
            }
            b
        } else {
            0.0
        };
        Ok(BoundFilter {
            kind: self.kind,
            alpha: self.alpha,
            beta,
            steps: self.landweber_steps() as f64,
        })
    }
}

/// A filter specialized to one data operator.
#[derive(Debug, Clone, Copy)]
pub struct BoundFilter {
    kind: FilterKind,
    alpha: f64,
    beta: f64,
    steps: f64,
}

impl BoundFilter {
    pub fn eval(&self, t: f64) -> Result<f64> {
        let t2 = t * t;
        Ok(match self.kind {
            FilterKind::Tikhonov => t2 / (t2 + self.alpha),
            FilterKind::SpectralCutoff => {
                if t2 >= self.alpha {
                    1.0
                } else {
                    0.0
                }
            }
            FilterKind::Landweber => {
                let bt2 = self.beta * t2;
                if bt2 >= 1.0 {
                    return Err(Error::Config(format!(
                        "Landweber step violates beta * t^2 < 1 at t = {t:e}"
                    )));
                }
                // 1 − (1 − βt²)^m without cancellation for small βt².
                -(self.steps * (-bt2).ln_1p()).exp_m1()
            }
        })
    }
}

/// `φ(t; α)` for a data operator with largest singular value `sigma1`.
pub fn filter_value(spec: &FilterSpec, t: f64, sigma1: f64) -> Result<f64> {
    spec.bind(sigma1)?.eval(t)
}
