use std::f64::consts::TAU;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::specfun::Point2;

/// Star-shaped scatterer with boundary `r(θ)(cos θ, sin θ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RadialShape {
    /// `r = 0.5 (|sin θ|¹⁰ + 0.1 |cos θ|¹⁰)^{−1/10}`
    RoundedSquare,
    /// `r = 0.5 (1 − 0.25 sin 4θ)`
    Star,
    /// `r = 0.25 (2 + 0.5 cos 3θ)`
    Acorn,
    /// `r = 0.75 √(0.75 cos²θ + 0.07 sin²θ)`
    Peanut,
    Disk {
        radius: f64,
    },
}

impl RadialShape {
    pub fn radius_at(&self, theta: f64) -> f64 {
        let (s, c) = theta.sin_cos();
        match *self {
            RadialShape::RoundedSquare => {
                0.5 * (s.abs().powi(10) + 0.1 * c.abs().powi(10)).powf(-0.1)
            }
            RadialShape::Star => 0.5 * (1.0 - 0.25 * (4.0 * theta).sin()),
            RadialShape::Acorn => 0.25 * (2.0 + 0.5 * (3.0 * theta).cos()),
            RadialShape::Peanut => 0.75 * (0.75 * c * c + 0.07 * s * s).sqrt(),
            RadialShape::Disk { radius } => radius,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if let RadialShape::Disk { radius } = *self {
            if !(radius > 0.0 && radius.is_finite()) {
                return Err(Error::Config(format!(
                    "disk radius must be positive, got {radius}"
                )));
            }
        }
        Ok(())
    }

    /// `max_θ r(θ)` sampled on a fine grid.
    pub fn max_radius(&self) -> f64 {
        (0..4096)
            .map(|i| self.radius_at(TAU * i as f64 / 4096.0))
            .fold(0.0, f64::max)
    }

    /// Whether `z` lies in the closed region `|z| ≤ r(arg z)`.
    pub fn contains(&self, z: Point2) -> bool {
        z.norm() <= self.radius_at(z.angle())
    }

    pub fn name(&self) -> &'static str {
        match self {
            RadialShape::RoundedSquare => "rounded-square",
            RadialShape::Star => "star",
            RadialShape::Acorn => "acorn",
            RadialShape::Peanut => "peanut",
            RadialShape::Disk { .. } => "disk",
        }
    }
}

/// Point on the boundary at polar angle `theta` (taken mod 2π).
pub fn boundary_point(shape: &RadialShape, theta: f64) -> Point2 {
    let t = theta.rem_euclid(TAU);
    Point2::polar(shape.radius_at(t), t)
}

impl fmt::Display for RadialShape {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RadialShape::Disk { radius } => write!(f, "disk:{radius}"),
            other => f.write_str(other.name()),
        }
    }
}

impl FromStr for RadialShape {
    type Err = Error;

    /// Accepts `rounded-square`, `star`, `acorn`, `peanut` and `disk:<radius>`.
    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim().to_ascii_lowercase();
        let shape = match lower.as_str() {
            "rounded-square" | "rounded_square" | "square" => RadialShape::RoundedSquare,
            "star" => RadialShape::Star,
            "acorn" => RadialShape::Acorn,
            "peanut" => RadialShape::Peanut,
            other => {
                let radius = other
                    .strip_prefix("disk:")
                    .or_else(|| other.strip_prefix("disk="))
                    .ok_or_else(|| Error::Config(format!("unknown shape '{s}'")))?
                    .parse::<f64>()
                    .map_err(|e| Error::Config(format!("bad disk radius in '{s}': {e}")))?;
                RadialShape::Disk { radius }
            }
        };
        shape.validate()?;
        Ok(shape)
    }
}
