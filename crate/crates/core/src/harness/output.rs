use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::stats::GaussianFit;

pub const NA: &str = "NA";

/// 17 significant digits; `NA` for non-finite values.
pub fn fmt_f64(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else {
        NA.to_string()
    }
}

pub fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| NA.to_string(), fmt_f64)
}

/// Ordered `metric,value` rows.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Summary {
    pub rows: Vec<(String, String)>,
}

impl Summary {
    pub fn push(&mut self, metric: impl Into<String>, value: impl Into<String>) {
        self.rows.push((metric.into(), value.into()));
    }

    pub fn push_f64(&mut self, metric: impl Into<String>, value: f64) {
        self.push(metric, fmt_f64(value));
    }

    pub fn push_usize(&mut self, metric: impl Into<String>, value: usize) {
        self.push(metric, value.to_string());
    }

    pub fn push_bool(&mut self, metric: impl Into<String>, value: bool) {
        self.push(metric, if value { "pass" } else { "fail" });
    }

    pub fn push_fit(&mut self, prefix: &str, fit: Option<&GaussianFit>) {
        let get = |f: fn(&GaussianFit) -> f64| fit.map_or(f64::NAN, f);
        self.push_f64(format!("{prefix}_mean_re"), get(|f| f.mean.re));
        self.push_f64(format!("{prefix}_mean_im"), get(|f| f.mean.im));
        self.push_f64(format!("{prefix}_var_re"), get(|f| f.var_re));
        self.push_f64(format!("{prefix}_var_im"), get(|f| f.var_im));
        self.push_f64(format!("{prefix}_corr_re_im"), get(|f| f.corr_re_im));
        self.push_usize(format!("{prefix}_n_samples"), fit.map_or(0, |f| f.n_samples));
    }

    pub fn get(&self, metric: &str) -> Option<&str> {
        self.rows.iter().find(|(m, _)| m == metric).map(|(_, v)| v.as_str())
    }

    pub fn get_f64(&self, metric: &str) -> Option<f64> {
        self.get(metric).and_then(|v| v.parse().ok())
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(["metric", "value"])?;
        for (m, v) in &self.rows {
            w.write_record([m, v])?;
        }
        finish(w, path)
    }
}

pub fn csv_writer(path: &Path) -> Result<csv::Writer<BufWriter<File>>> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    Ok(csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(BufWriter::new(file)))
}

pub fn finish(w: csv::Writer<BufWriter<File>>, path: &Path) -> Result<()> {
    let mut inner = w.into_inner().map_err(|e| Error::io(path, e.into_error()))?;
    inner.flush().map_err(|e| Error::io(path, e))
}

pub fn write_json(path: &Path, value: &impl Serialize) -> Result<()> {
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    serde_json::to_writer_pretty(&mut w, value)?;
    w.write_all(b"\n").map_err(|e| Error::io(path, e))?;
    w.flush().map_err(|e| Error::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn float_format_round_trips() {
        for x in [0.1, -1.0 / 3.0, 1e-300, 6.02e23, std::f64::consts::PI] {
            let s = fmt_f64(x);
            assert_eq!(s.parse::<f64>().unwrap(), x);
        }
        assert_eq!(fmt_f64(f64::NAN), "NA");
        assert_eq!(fmt_opt(None), "NA");
        assert_eq!(fmt_f64(0.5), "5.0000000000000000e-1");
    }

    #[test]
    fn summary_lookup() {
        let mut s = Summary::default();
        s.push_f64("x", 0.25);
        s.push_usize("k", 3);
        assert_eq!(s.get_f64("x"), Some(0.25));
        assert_eq!(s.get("k"), Some("3"));
        assert_eq!(s.get("missing"), None);
    }
}
