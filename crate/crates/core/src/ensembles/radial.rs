use std::io::Read;
use std::path::Path;

use crate::error::{Error, Result};

/// Distribution function of `|xi|` for a rotation-invariant law.
pub trait RadialCdf {
    fn cdf(&self, r: f64) -> f64;
}

impl<F: Fn(f64) -> f64> RadialCdf for F {
    fn cdf(&self, r: f64) -> f64 {
        self(r)
    }
}

/// Piecewise-linear radial CDF given as `(r, cdf)` rows.
///
/// Rows are strictly increasing in both columns, start at `(0, 0)` and end
/// at `(r_max, 1)`; at least [`CdfTable::MIN_ROWS`] rows are required.
#[derive(Debug, Clone, PartialEq)]
pub struct CdfTable {
    r: Vec<f64>,
    cdf: Vec<f64>,
}

impl CdfTable {
    pub const MIN_ROWS: usize = 256;

    pub fn new(r: Vec<f64>, cdf: Vec<f64>) -> Result<Self> {
        let bad = |msg: String| Err(Error::BadCdfTable(msg));
        if r.len() != cdf.len() {
            return bad(format!("{} radii but {} cdf values", r.len(), cdf.len()));
        }
        if r.len() < Self::MIN_ROWS {
            return bad(format!("{} rows, need at least {}", r.len(), Self::MIN_ROWS));
        }
        if r[0] != 0.0 || cdf[0] != 0.0 {
            return bad(format!("first row is ({}, {}), expected (0, 0)", r[0], cdf[0]));
        }
        if cdf[cdf.len() - 1] != 1.0 {
            return bad(format!("last cdf value is {}, expected 1", cdf[cdf.len() - 1]));
        }
        for i in 1..r.len() {
            if !(r[i] > r[i - 1] && r[i].is_finite()) {
                return bad(format!("radius column not strictly increasing at row {i}"));
            }
            if !(cdf[i] > cdf[i - 1]) {
                return bad(format!("cdf column not strictly increasing at row {i}"));
            }
        }
        Ok(Self { r, cdf })
    }

    /// Tabulates `f` on `rows` radii `r_max (i/(rows-1))^2`; the quadratic
    /// spacing resolves the `r^2` behaviour of every density near the
    /// origin. The endpoints are pinned to 0 and 1.
    pub fn from_fn(f: impl Fn(f64) -> f64, r_max: f64, rows: usize) -> Result<Self> {
        let last = rows.saturating_sub(1).max(1) as f64;
        let r: Vec<f64> = (0..rows).map(|i| r_max * (i as f64 / last).powi(2)).collect();
        let mut cdf: Vec<f64> = r.iter().map(|&x| f(x)).collect();
        if let Some(first) = cdf.first_mut() {
            *first = 0.0;
        }
        if let Some(end) = cdf.last_mut() {
            *end = 1.0;
        }
        Self::new(r, cdf)
    }

    /// Uniform law on the unit disk: `min(r^2, 1)`.
    pub fn uniform_disk(rows: usize) -> Result<Self> {
        Self::from_fn(|r| (r * r).min(1.0), 1.0, rows)
    }

    /// Standard complex normal: `1 - exp(-r^2)`, truncated at `r = 5`.
    pub fn std_complex_gaussian(rows: usize) -> Result<Self> {
        Self::from_fn(|r| -(-r * r).exp_m1(), 5.0, rows)
    }

    /// Two-column CSV `r,cdf`; a leading non-numeric header row is skipped.
    pub fn from_csv_reader(reader: impl Read) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new()
            .has_headers(false)
            .trim(csv::Trim::All)
            .from_reader(reader);
        let mut r = Vec::new();
        let mut cdf = Vec::new();
        for (line, record) in rdr.records().enumerate() {
            let record = record?;
            if record.len() != 2 {
                return Err(Error::BadCdfTable(format!(
                    "row {} has {} columns, expected 2",
                    line + 1,
                    record.len()
                )));
            }
            match (record[0].parse::<f64>(), record[1].parse::<f64>()) {
                (Ok(a), Ok(b)) => {
                    r.push(a);
                    cdf.push(b);
                }
                _ if line == 0 => continue,
                _ => {
                    return Err(Error::BadCdfTable(format!("row {} is not numeric", line + 1)));
                }
            }
        }
        Self::new(r, cdf)
    }

    pub fn from_csv_path(path: &Path) -> Result<Self> {
        let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
        Self::from_csv_reader(file)
    }

    pub fn rows(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.r.iter().copied().zip(self.cdf.iter().copied())
    }

    pub fn r_max(&self) -> f64 {
        self.r[self.r.len() - 1]
    }

    /// Index `i` with `r[i] <= x < r[i+1]`.
    fn interval(&self, x: f64) -> usize {
        (self.r.partition_point(|&v| v <= x) - 1).min(self.r.len() - 2)
    }

    /// Inverse CDF by bisection over the rows, then linear interpolation.
    pub fn inverse(&self, u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return self.r_max();
        }
        let i = (self.cdf.partition_point(|&v| v <= u) - 1).min(self.cdf.len() - 2);
        let t = (u - self.cdf[i]) / (self.cdf[i + 1] - self.cdf[i]);
        self.r[i] + t * (self.r[i + 1] - self.r[i])
    }

    /// Planar density `q(r) = F'(r) / (2 pi r)` from the interval slope.
    pub fn density_at_radius(&self, r: f64) -> f64 {
        if r >= self.r_max() {
            return 0.0;
        }
        let i = self.interval(r.max(0.0));
        let slope = (self.cdf[i + 1] - self.cdf[i]) / (self.r[i + 1] - self.r[i]);
        // at r = 0 use the midpoint of the first interval
        let at = if r > 0.0 { r } else { 0.5 * self.r[1] };
        slope / (std::f64::consts::TAU * at)
    }
}

impl RadialCdf for CdfTable {
    fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        if x >= self.r_max() {
            return 1.0;
        }
        let i = self.interval(x);
        let t = (x - self.r[i]) / (self.r[i + 1] - self.r[i]);
        self.cdf[i] + t * (self.cdf[i + 1] - self.cdf[i])
    }
}
