//! Integer-order cylindrical Bessel and Hankel functions, and the 2-D
//! Helmholtz fundamental solution built on them.
//!
//! `J_n` is computed by Miller's downward recurrence normalized with
//! `J_0 + 2 Σ J_2k = 1`. `Y_0` and `Y_1` come from their Neumann series in
//! the same `J` table, and higher orders from the (stable) upward
//! recurrence `Y_{n+1} = (2n/x) Y_n − Y_{n−1}`.

use std::f64::consts::{FRAC_PI_4, PI};
use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Below this argument the leading terms of the ascending series are exact
/// to machine precision and Miller's recurrence would overflow.
const SERIES_CUTOFF: f64 = 1e-5;

/// Smallest `k|x − y|` at which the fundamental solution is evaluated.
pub const MIN_FUNDAMENTAL_ARG: f64 = 1e-8;

const RESCALE_ABOVE: f64 = 1e250;

/// A point (or vector) in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const ORIGIN: Point2 = Point2 { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    /// `r (cos θ, sin θ)`.
    pub fn polar(r: f64, theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        Self { x: r * c, y: r * s }
    }

    pub fn dot(self, other: Point2) -> f64 {
        self.x * other.x + self.y * other.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    /// Polar angle in `(−π, π]`.
    pub fn angle(self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn distance(self, other: Point2) -> f64 {
        (self - other).norm()
    }

    pub fn scale(self, s: f64) -> Self {
        Self {
            x: s * self.x,
            y: s * self.y,
        }
    }
}

impl Add for Point2 {
    type Output = Point2;
    fn add(self, rhs: Point2) -> Point2 {
        Point2::new(self.x + rhs.x, self.y + rhs.y)
    }
}

impl Sub for Point2 {
    type Output = Point2;
    fn sub(self, rhs: Point2) -> Point2 {
        Point2::new(self.x - rhs.x, self.y - rhs.y)
    }
}

impl Mul<Point2> for f64 {
    type Output = Point2;
    fn mul(self, rhs: Point2) -> Point2 {
        rhs.scale(self)
    }
}

fn check_arg(arg: f64) -> Result<()> {
    if arg > 0.0 && arg.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "Bessel argument must be positive and finite, got {arg}"
        )))
    }
}

/// `J_0(x) … J_len−1(x)` plus enough of the tail that the Neumann series for
/// `Y_0`, `Y_1` can be summed from the same table.
fn j_table(x: f64, nmax: usize) -> Vec<f64> {
    if x < SERIES_CUTOFF {
        return j_small(x, nmax + 4);
    }
    let m = nmax.max(x.ceil() as usize);
    let mut start = m + 16 + (40.0 * m as f64).sqrt() as usize;
    start += start % 2;

    let mut vals = vec![0.0; start + 2];
    vals[start] = 1e-300;
    // Running sum of J_0 + 2 Σ J_2k, kept in the same scale as `vals`.
    let mut norm = 0.0;
    for k in (1..=start).rev() {
        let next = 2.0 * k as f64 / x * vals[k] - vals[k + 1];
        vals[k - 1] = next;
        if (k - 1) % 2 == 0 && k > 1 {
            norm += 2.0 * next;
        }
        if next.abs() > RESCALE_ABOVE {
            let s = 1.0 / RESCALE_ABOVE;
            for v in &mut vals[k - 1..] {
                *v *= s;
            }
            norm *= s;
        }
    }
    norm += vals[0];
    for v in &mut vals {
        *v /= norm;
    }
    vals.truncate(start + 1);
    vals
}

/// Ascending series, first three terms. Exact in double precision for
/// `x < SERIES_CUTOFF`.
fn j_small(x: f64, len: usize) -> Vec<f64> {
    let h = 0.5 * x;
    let h2 = h * h;
    let mut lead = 1.0; // (x/2)^n / n!
    (0..len)
        .map(|n| {
            if n > 0 {
                lead *= h / n as f64;
            }
            let n1 = n as f64 + 1.0;
            lead * (1.0 - h2 / n1 + h2 * h2 / (2.0 * n1 * (n1 + 1.0)))
        })
        .collect()
}

/// `Y_0 … Y_nmax` from the Neumann series of `Y_0`, `Y_1` and upward recurrence.
fn y_table(x: f64, nmax: usize) -> Vec<f64> {
    let j = j_table(x, 2);
    let log_term = (0.5 * x).ln() + EULER_GAMMA;

    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut k = 1;
    while 2 * k < j.len() {
        let sign = if k % 2 == 1 { 1.0 } else { -1.0 };
        let kf = k as f64;
        s0 += sign * j[2 * k] / kf;
        let hi = j.get(2 * k + 1).copied().unwrap_or(0.0);
        s1 += sign * (j[2 * k - 1] - hi) / kf;
        k += 1;
    }
    let y0 = 2.0 / PI * (log_term * j[0] + 2.0 * s0);
    let y1 = 2.0 / PI * (log_term * j[1] - j[0] / x - s1);

    let mut out = Vec::with_capacity(nmax + 1);
    out.push(y0);
    if nmax >= 1 {
        out.push(y1);
    }
    for n in 1..nmax {
        let next = 2.0 * n as f64 / x * out[n] - out[n - 1];
        out.push(next);
    }
    out
}

/// `J_order(arg)` for `arg > 0`.
pub fn bessel_j(order: usize, arg: f64) -> Result<f64> {
    check_arg(arg)?;
    Ok(j_table(arg, order)[order])
}

/// `Y_order(arg)` for `arg > 0`. Diverges towards `−∞` as `arg → 0⁺`.
pub fn bessel_y(order: usize, arg: f64) -> Result<f64> {
    check_arg(arg)?;
    Ok(y_table(arg, order)[order])
}

/// `J_0(arg) … J_nmax(arg)` from a single recurrence pass.
pub fn bessel_j_seq(nmax: usize, arg: f64) -> Result<Vec<f64>> {
    check_arg(arg)?;
    let mut t = j_table(arg, nmax);
    t.truncate(nmax + 1);
    Ok(t)
}

/// `Y_0(arg) … Y_nmax(arg)`.
pub fn bessel_y_seq(nmax: usize, arg: f64) -> Result<Vec<f64>> {
    check_arg(arg)?;
    Ok(y_table(arg, nmax))
}

/// `H^(1)_n(arg) = J_n(arg) + i Y_n(arg)` for `n = 0 … nmax`.
pub fn hankel1_seq(nmax: usize, arg: f64) -> Result<Vec<Complex64>> {
    let j = bessel_j_seq(nmax, arg)?;
    let y = bessel_y_seq(nmax, arg)?;
    Ok(j.into_iter()
        .zip(y)
        .map(|(a, b)| Complex64::new(a, b))
        .collect())
}

/// First-kind Hankel function of integer order. Negative orders use
/// `H_{−n} = (−1)^n H_n`.
pub fn hankel1(order: i32, arg: f64) -> Result<Complex64> {
    let n = order.unsigned_abs() as usize;
    let h = Complex64::new(bessel_j(n, arg)?, bessel_y(n, arg)?);
    Ok(if order < 0 && n % 2 == 1 { -h } else { h })
}

/// `H^(1)_n(arg)` for `n = −nmax … nmax`, index `n + nmax`.
pub fn hankel1_symmetric(nmax: usize, arg: f64) -> Result<Vec<Complex64>> {
    let pos = hankel1_seq(nmax, arg)?;
    let mut out = Vec::with_capacity(2 * nmax + 1);
    for n in (1..=nmax).rev() {
        out.push(if n % 2 == 1 { -pos[n] } else { pos[n] });
    }
    out.extend_from_slice(&pos);
    Ok(out)
}

/// `Φ(x, y) = (i/4) H^(1)_0(k|x − y|)`, the radiating fundamental solution of
/// `Δu + k²u = 0` in the plane.
pub fn fundamental_solution(x: Point2, y: Point2, k: f64) -> Result<Complex64> {
    let arg = k * x.distance(y);
    if !(arg >= MIN_FUNDAMENTAL_ARG) {
        return Err(Error::Domain(format!(
            "fundamental solution evaluated at k|x-y| = {arg:e}, below the {MIN_FUNDAMENTAL_ARG:e} floor"
        )));
    }
    let h0 = Complex64::new(bessel_j(0, arg)?, bessel_y(0, arg)?);
    Ok(Complex64::new(0.0, 0.25) * h0)
}

/// Far-field constant `γ = e^{iπ/4} / √(8πk)` of the 2-D radiating expansion.
pub fn farfield_gamma(k: f64) -> Complex64 {
    Complex64::from_polar(1.0 / (8.0 * PI * k).sqrt(), FRAC_PI_4)
}
