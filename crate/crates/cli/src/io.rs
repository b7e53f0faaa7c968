//! Text formats: complex matrices and real fields as CSV with a `#` JSON
//! header line, ASCII PGM images, and boundary overlays.

use std::fmt::Write as _;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use regfm::forward::{boundary_point, RadialShape};
use regfm::rfm::ImagingField;
use regfm::ComplexMatrix;

use crate::config::{Mode, RunConfig};

pub const FORMAT_VERSION: u32 = 1;

/// Metadata stored in the header line of a data file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DataHeader {
    pub format: String,
    pub version: u32,
    pub mode: Mode,
    pub shape: String,
    pub k: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub q: Option<[f64; 2]>,
    pub rho: f64,
    pub count: usize,
    pub forward_truncation: usize,
    pub kernel_truncation: usize,
    /// Recorded only; the stored data are noise free.
    pub noise: f64,
    pub seed: u64,
    pub rows: usize,
    pub cols: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_residual: Option<f64>,
}

impl DataHeader {
    pub fn new(cfg: &RunConfig, rows: usize, cols: usize) -> Self {
        Self {
            format: "complex-csv".into(),
            version: FORMAT_VERSION,
            mode: cfg.mode,
            shape: cfg.shape.clone(),
            k: cfg.k,
            q: (cfg.mode == Mode::Far).then_some(cfg.q),
            rho: cfg.rho,
            count: cfg.count,
            forward_truncation: cfg.forward_truncation,
            kernel_truncation: cfg.kernel_truncation,
            noise: cfg.noise,
            seed: cfg.seed,
            rows,
            cols,
            max_residual: None,
        }
    }
}

fn number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn format_complex_csv(header: &DataHeader, m: &ComplexMatrix) -> Result<String> {
    ensure!(
        header.rows == m.rows() && header.cols == m.cols(),
        "header shape does not match the matrix"
    );
    let mut out = format!("# {}\n", serde_json::to_string(header)?);
    for r in 0..m.rows() {
        let row: Vec<String> = m
            .row(r)
            .iter()
            .flat_map(|z| [number(z.re), number(z.im)])
            .collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

pub fn parse_complex_csv(text: &str) -> Result<(DataHeader, ComplexMatrix)> {
    let mut lines = text.lines();
    let first = lines.next().context("empty data file")?;
    let json = first
        .strip_prefix('#')
        .context("data file must start with a '#' metadata line")?;
    let header: DataHeader = serde_json::from_str(json.trim()).context("invalid metadata line")?;
    let mut data = Vec::with_capacity(header.rows * header.cols);
    let mut rows = 0;
    for (lineno, line) in lines.enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let values: Vec<f64> = line
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .with_context(|| format!("bad number on data line {}", lineno + 1))?;
        if values.len() != 2 * header.cols {
            bail!(
                "data line {} has {} values, expected {}",
                lineno + 1,
                values.len(),
                2 * header.cols
            );
        }
        data.extend(values.chunks(2).map(|p| Complex64::new(p[0], p[1])));
        rows += 1;
    }
    if rows != header.rows {
        bail!("data file has {rows} rows, header says {}", header.rows);
    }
    Ok((
        header.clone(),
        ComplexMatrix::from_vec(header.rows, header.cols, data)?,
    ))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct FieldHeader {
    format: String,
    version: u32,
    filter: String,
    alpha: f64,
    xmin: f64,
    xmax: f64,
    ymin: f64,
    ymax: f64,
    nx: usize,
    ny: usize,
    /// Row `i` holds `y = ymin + i·Δy`; columns run over x.
    rows: String,
}

/// `W` as `ny` rows of `nx` values, `y` ascending; the sentinel is written `inf`.
pub fn format_field_csv(field: &ImagingField) -> Result<String> {
    let g = field.grid;
    let header = FieldHeader {
        format: "field-csv".into(),
        version: FORMAT_VERSION,
        filter: field.kind.name().into(),
        alpha: field.alpha,
        xmin: g.xmin,
        xmax: g.xmax,
        ymin: g.ymin,
        ymax: g.ymax,
        nx: g.nx,
        ny: g.ny,
        rows: "y ascending".into(),
    };
    let mut out = format!("# {}\n", serde_json::to_string(&header)?);
    for iy in 0..g.ny {
        let row: Vec<String> = (0..g.nx).map(|ix| number(field.get(ix, iy))).collect();
        out.push_str(&row.join(","));
        out.push('\n');
    }
    Ok(out)
}

/// Row-major values of a field CSV, with its `(nx, ny)`.
pub fn parse_field_csv(text: &str) -> Result<(usize, usize, Vec<f64>)> {
    let mut lines = text.lines();
    let json = lines
        .next()
        .and_then(|l| l.strip_prefix('#'))
        .context("missing metadata line")?;
    let header: FieldHeader = serde_json::from_str(json.trim())?;
    let mut values = Vec::with_capacity(header.nx * header.ny);
    for line in lines.filter(|l| !l.trim().is_empty()) {
        for v in line.split(',') {
            values.push(v.trim().parse::<f64>()?);
        }
    }
    ensure!(
        values.len() == header.nx * header.ny,
        "field has {} values, expected {}",
        values.len(),
        header.nx * header.ny
    );
    Ok((header.nx, header.ny, values))
}

/// ASCII graymap with the top row at `ymax`. Finite values map linearly onto
/// 0–255 and the sentinel onto 255.
pub fn format_pgm(field: &ImagingField) -> String {
    let g = field.grid;
    let lo = field.finite_min().unwrap_or(0.0);
    let hi = field.finite_max().unwrap_or(0.0);
    let level = |w: f64| -> u8 {
        if !w.is_finite() {
            255
        } else if hi > lo {
            (255.0 * (w - lo) / (hi - lo)).round().clamp(0.0, 255.0) as u8
        } else {
            0
        }
    };
    let mut out = format!(
        "P2\n# imaging functional, {} alpha={:e}\n{} {}\n255\n",
        field.kind, field.alpha, g.nx, g.ny
    );
    for iy in (0..g.ny).rev() {
        let row: Vec<String> = (0..g.nx)
            .map(|ix| level(field.get(ix, iy)).to_string())
            .collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

/// True boundary as `x,y` rows.
pub fn format_boundary_csv(shape: &RadialShape, points: usize) -> String {
    let mut out = format!(
        "# {{\"format\":\"boundary-csv\",\"shape\":\"{shape}\",\"points\":{points}}}\nx,y\n"
    );
    for i in 0..points {
        let p = boundary_point(shape, std::f64::consts::TAU * i as f64 / points as f64);
        let _ = writeln!(out, "{},{}", number(p.x), number(p.y));
    }
    out
}

pub fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn write(path: &Path, text: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("cannot create {}", dir.display()))?;
    }
    std::fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use regfm::rfm::{FilterKind, SamplingGrid};

    #[test]
    fn complex_csv_round_trips_bit_exactly() {
        let m = ComplexMatrix::from_fn(3, 2, |r, c| {
            Complex64::new(1.0 / (r + 1) as f64, -(c as f64) * std::f64::consts::PI)
        });
        let header = DataHeader::new(&RunConfig::default(), 3, 2);
        let text = format_complex_csv(&header, &m).unwrap();
        assert!(text.starts_with("# {"));
        assert_eq!(text.lines().nth(1).unwrap().split(',').count(), 4);
        let (h, back) = parse_complex_csv(&text).unwrap();
        assert_eq!(h, header);
        assert_eq!(back, m);
    }

    #[test]
    fn complex_csv_rejects_malformed_input() {
        let header = DataHeader::new(&RunConfig::default(), 2, 1);
        let good = format_complex_csv(&header, &ComplexMatrix::zeros(2, 1)).unwrap();
        let missing_row: String = good.lines().take(2).map(|l| format!("{l}\n")).collect();
        assert!(parse_complex_csv(&missing_row).is_err());
        assert!(parse_complex_csv("0,0\n").is_err());
        assert!(parse_complex_csv(&good.replace("0.0000000000000000e0,0", "x,0")).is_err());
    }

    fn field(values: Vec<f64>) -> ImagingField {
        ImagingField {
            grid: SamplingGrid::new(0.0, 1.0, 0.0, 1.0, 2, 2),
            values,
            alpha: 1e-6,
            kind: FilterKind::Tikhonov,
        }
    }

    #[test]
    fn pgm_maps_range_and_sentinel() {
        let pgm = format_pgm(&field(vec![0.0, 1.0, 0.5, f64::INFINITY]));
        let lines: Vec<&str> = pgm.lines().collect();
        assert_eq!(lines[0], "P2");
        assert_eq!(lines[2], "2 2");
        assert_eq!(lines[4], "128 255");
        assert_eq!(lines[5], "0 255");
    }

    #[test]
    fn field_csv_round_trips() {
        let f = field(vec![0.25, 1.5, f64::INFINITY, 3.0]);
        let (nx, ny, v) = parse_field_csv(&format_field_csv(&f).unwrap()).unwrap();
        assert_eq!((nx, ny), (2, 2));
        assert_eq!(v, f.values);
    }

    #[test]
    fn boundary_overlay_has_requested_points() {
        let text = format_boundary_csv(&RadialShape::Acorn, 16);
        assert_eq!(text.lines().count(), 18);
        assert!(text.lines().nth(2).unwrap().starts_with("6.25"));
    }
}
