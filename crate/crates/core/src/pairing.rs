//! Zero / critical-point pairing and the statistics built on it.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::{ComplexScalar, POLE_RADIUS};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PairStatus {
    Ok,
    ExcludedNearOrigin,
    MatchFailed,
}

impl PairStatus {
    pub fn as_str(self) -> &'static str {
        match self {
            PairStatus::Ok => "ok",
            PairStatus::ExcludedNearOrigin => "excluded_near_origin",
            PairStatus::MatchFailed => "match_failed",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairingRecord {
    pub zero: ComplexScalar,
    pub critical: ComplexScalar,
    /// `|zero - critical|`.
    pub distance: f64,
    /// `1 / (n (zero - critical))`, an atom of the measure `nu_n`.
    pub nu_atom: ComplexScalar,
    /// Standardized fluctuation, an atom of `chi_n` once filled in.
    pub d_stat: Option<ComplexScalar>,
    pub status: PairStatus,
}

impl PairingRecord {
    pub fn new(zero: ComplexScalar, critical: ComplexScalar, n: usize) -> Self {
        Self {
            zero,
            critical,
            distance: (zero - critical).norm(),
            nu_atom: nu_atom(zero, critical, n),
            d_stat: None,
            status: PairStatus::Ok,
        }
    }

    pub fn failed(zero: ComplexScalar) -> Self {
        let nan = ComplexScalar::new(f64::NAN, f64::NAN);
        Self {
            zero,
            critical: nan,
            distance: f64::NAN,
            nu_atom: nan,
            d_stat: None,
            status: PairStatus::MatchFailed,
        }
    }
}

pub fn nu_atom(zero: ComplexScalar, critical: ComplexScalar, n: usize) -> ComplexScalar {
    ((zero - critical) * n as f64).inv()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NearestSearch {
    BruteForce,
    Grid,
}

/// `(distance, index)` ordering: nearest first, ties to the lowest index.
fn better(d: f64, i: usize, best: (f64, usize)) -> bool {
    d < best.0 || (d == best.0 && i < best.1)
}

fn nearest_brute(q: ComplexScalar, crits: &[ComplexScalar]) -> usize {
    let mut best = (f64::INFINITY, usize::MAX);
    for (i, &c) in crits.iter().enumerate() {
        let d = (q - c).norm();
        if better(d, i, best) {
            best = (d, i);
        }
    }
    best.1
}

/// Bucket grid over the bounding box of the critical points. Queries
/// expand square rings of cells until the best candidate is strictly closer
/// than anything outside the explored rectangle, so the answer equals the
/// brute-force one including tie-breaks.
struct Grid<'a> {
    points: &'a [ComplexScalar],
    origin: (f64, f64),
    cell: f64,
    cols: usize,
    rows: usize,
    buckets: Vec<Vec<usize>>,
}

impl<'a> Grid<'a> {
    fn new(points: &'a [ComplexScalar]) -> Self {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
        for p in points {
            x0 = x0.min(p.re);
            x1 = x1.max(p.re);
            y0 = y0.min(p.im);
            y1 = y1.max(p.im);
        }
        let w = (x1 - x0).max(1e-300);
        let h = (y1 - y0).max(1e-300);
        let per_side = (points.len() as f64).sqrt().ceil().max(1.0);
        let cell = (w.max(h) / per_side).max(1e-300);
        let cols = ((w / cell).floor() as usize + 1).min(4096);
        let rows = ((h / cell).floor() as usize + 1).min(4096);
        let mut grid = Self {
            points,
            origin: (x0, y0),
            cell,
            cols,
            rows,
            buckets: vec![Vec::new(); cols * rows],
        };
        for (i, p) in points.iter().enumerate() {
            let (cx, cy) = grid.cell_of(*p);
            grid.buckets[cy * cols + cx].push(i);
        }
        grid
    }

    fn cell_of(&self, p: ComplexScalar) -> (usize, usize) {
        let fx = ((p.re - self.origin.0) / self.cell).floor();
        let fy = ((p.im - self.origin.1) / self.cell).floor();
        let cx = fx.clamp(0.0, (self.cols - 1) as f64) as usize;
        let cy = fy.clamp(0.0, (self.rows - 1) as f64) as usize;
        (cx, cy)
    }

    fn nearest(&self, q: ComplexScalar) -> usize {
        let (cx, cy) = self.cell_of(q);
        let mut best = (f64::INFINITY, usize::MAX);
        let max_ring = self.cols.max(self.rows);
        for ring in 0..=max_ring {
            let xlo = cx as i64 - ring as i64;
            let xhi = cx as i64 + ring as i64;
            let ylo = cy as i64 - ring as i64;
            let yhi = cy as i64 + ring as i64;
            for y in ylo..=yhi {
                if y < 0 || y >= self.rows as i64 {
                    continue;
                }
                for x in xlo..=xhi {
                    if x < 0 || x >= self.cols as i64 {
                        continue;
                    }
                    let on_ring = y == ylo || y == yhi || x == xlo || x == xhi;
                    if !on_ring {
                        continue;
                    }
                    for &i in &self.buckets[y as usize * self.cols + x as usize] {
                        let d = (q - self.points[i]).norm();
                        if better(d, i, best) {
                            best = (d, i);
                        }
                    }
                }
            }
            let covers_all = xlo <= 0 && ylo <= 0 && xhi >= self.cols as i64 - 1 && yhi >= self.rows as i64 - 1;
            if covers_all {
                break;
            }
            // any unexplored point lies outside this rectangle
            let rx0 = self.origin.0 + xlo as f64 * self.cell;
            let rx1 = self.origin.0 + (xhi + 1) as f64 * self.cell;
            let ry0 = self.origin.1 + ylo as f64 * self.cell;
            let ry1 = self.origin.1 + (yhi + 1) as f64 * self.cell;
            let margin = (q.re - rx0).min(rx1 - q.re).min(q.im - ry0).min(ry1 - q.im);
            if best.0 < margin {
                break;
            }
        }
        best.1
    }
}

/// Index of the nearest critical point for every zero.
pub fn nearest_indices(zeros: &[ComplexScalar], crits: &[ComplexScalar], search: NearestSearch) -> Vec<usize> {
    match search {
        NearestSearch::BruteForce => zeros.iter().map(|&z| nearest_brute(z, crits)).collect(),
        NearestSearch::Grid => {
            let grid = Grid::new(crits);
            zeros.iter().map(|&z| grid.nearest(z)).collect()
        }
    }
}

/// Pairs every zero with its globally nearest critical point. Several zeros
/// may share one critical point.
pub fn pair_nearest(zeros: &[ComplexScalar], crits: &[ComplexScalar], n: usize) -> Result<Vec<PairingRecord>> {
    if crits.is_empty() {
        return Err(Error::EmptySample);
    }
    let search = if crits.len() > 64 {
        NearestSearch::Grid
    } else {
        NearestSearch::BruteForce
    };
    Ok(nearest_indices(zeros, crits, search)
        .into_iter()
        .zip(zeros)
        .map(|(i, &z)| PairingRecord::new(z, crits[i], n))
        .collect())
}

/// `z - 1/(n f(z))`.
pub fn predicted_critical(zero: ComplexScalar, f_at_zero: ComplexScalar, n: usize) -> Result<ComplexScalar> {
    if f_at_zero.norm() == 0.0 {
        return Err(Error::ZeroTransform);
    }
    Ok(zero - (f_at_zero * n as f64).inv())
}

fn check_statistic_inputs(f: ComplexScalar, p: f64, n: usize) -> Result<()> {
    if f.norm() == 0.0 {
        return Err(Error::ZeroTransform);
    }
    if !(p > 0.0) {
        return Err(Error::ZeroDensity);
    }
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n}, need n >= 3")));
    }
    Ok(())
}

fn fluctuation(zero: ComplexScalar, critical: ComplexScalar, f: ComplexScalar, n: usize) -> ComplexScalar {
    let nf = n as f64;
    ((critical - zero) * nf + f.inv()) * (nf / nf.ln()).sqrt()
}

/// `f(Z)^2 / sqrt(pi p(Z)) * sqrt(n / log n) * (n (zeta - Z) + 1/f(Z))`,
/// asymptotically `N_C(0, 1)`.
pub fn standardized_statistic(
    zero: ComplexScalar,
    critical: ComplexScalar,
    f_at_zero: ComplexScalar,
    p_at_zero: f64,
    n: usize,
) -> Result<ComplexScalar> {
    check_statistic_inputs(f_at_zero, p_at_zero, n)?;
    let prefactor = f_at_zero * f_at_zero / (PI * p_at_zero).sqrt();
    Ok(prefactor * fluctuation(zero, critical, f_at_zero, n))
}

/// As [`standardized_statistic`] with `|f|^2` in place of `f^2`: a fixed
/// rotation of the same statistic, so also asymptotically `N_C(0, 1)`.
pub fn standardized_statistic_modulus(
    zero: ComplexScalar,
    critical: ComplexScalar,
    f_at_zero: ComplexScalar,
    p_at_zero: f64,
    n: usize,
) -> Result<ComplexScalar> {
    check_statistic_inputs(f_at_zero, p_at_zero, n)?;
    let prefactor = f_at_zero.norm_sqr() / (PI * p_at_zero).sqrt();
    Ok(prefactor * fluctuation(zero, critical, f_at_zero, n))
}

/// Normalizing sequence of `d_{k,n}`: `sqrt(n / log n)` by default, or
/// `n^exponent` when sweeping replacements for ensembles where the right
/// normalization is unknown.
pub fn chi_normalizer(n: usize, exponent: Option<f64>) -> f64 {
    let nf = n as f64;
    match exponent {
        Some(e) => nf.powf(e),
        None => (nf / nf.ln()).sqrt(),
    }
}

/// `|Z|^2 * norm * (n (Z - zeta) - 1/conj(Z))` for a uniform-disk zero.
pub fn d_statistic(zero: ComplexScalar, critical: ComplexScalar, n: usize, norm: f64) -> ComplexScalar {
    ((zero - critical) * n as f64 - zero.conj().inv()) * (zero.norm_sqr() * norm)
}

/// Fills `d_stat` for every matched record and marks zeros with
/// `|Z| <= exclusion_radius` as excluded.
pub fn fill_d_statistics(records: &mut [PairingRecord], n: usize, exclusion_radius: f64, norm: f64) {
    for r in records.iter_mut() {
        if r.status == PairStatus::MatchFailed {
            continue;
        }
        if r.zero.norm() <= exclusion_radius {
            r.status = PairStatus::ExcludedNearOrigin;
            r.d_stat = None;
        } else {
            r.d_stat = Some(d_statistic(r.zero, r.critical, n, norm));
        }
    }
}

/// `d_stat` of the `Ok` records with `|Z| > exclusion_radius`.
pub fn chi_atoms(records: &[PairingRecord], exclusion_radius: f64) -> Vec<ComplexScalar> {
    records
        .iter()
        .filter(|r| r.status == PairStatus::Ok && r.zero.norm() > exclusion_radius)
        .filter_map(|r| r.d_stat)
        .collect()
}

/// `(1/sqrt(n log n)) sum_k (1/(z_n - xi_k) - f0)`.
pub fn clt_statistic(zeros: &[ComplexScalar], z_n: ComplexScalar, f0: ComplexScalar, n: usize) -> Result<ComplexScalar> {
    if n < 3 {
        return Err(Error::OutOfRange(format!("n = {n}, need n >= 3")));
    }
    let mut acc = ComplexScalar::new(0.0, 0.0);
    for (k, &xi) in zeros.iter().enumerate() {
        if (z_n - xi).norm() < POLE_RADIUS {
            return Err(Error::PoleHit { index: k });
        }
        acc += (z_n - xi).inv() - f0;
    }
    let nf = n as f64;
    Ok(acc / (nf * nf.ln()).sqrt())
}
