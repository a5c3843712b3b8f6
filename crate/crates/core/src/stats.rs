//! Empirical-distribution tools: KS distances, complex Gaussian fits,
//! confidence-disk miss rates, the nearest-zero law and disk uniformity.

use std::f64::consts::{PI, SQRT_2, TAU};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::polycore::ComplexScalar;

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * statrs::function::erf::erfc(-x / SQRT_2)
}

/// Kolmogorov-Smirnov distance between the empirical law of `sample` and
/// `cdf`: `max_i max(|i/n - F(x_i)|, |(i-1)/n - F(x_i)|)` over the sorted
/// sample.
pub fn ks_distance<F>(sample: &[f64], cdf: F) -> Result<f64>
where
    F: Fn(f64) -> f64,
{
    if sample.is_empty() {
        return Err(Error::EmptySample);
    }
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    let mut d = 0.0f64;
    for (i, &x) in sorted.iter().enumerate() {
        let f = cdf(x);
        let hi = (i + 1) as f64 / n;
        let lo = i as f64 / n;
        d = d.max((hi - f).abs()).max((lo - f).abs());
    }
    Ok(d)
}

/// Rows `(x, empirical cdf, reference cdf)` at every sorted sample point.
pub fn ecdf_table<F>(sample: &[f64], cdf: F) -> Vec<(f64, f64, f64)>
where
    F: Fn(f64) -> f64,
{
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .iter()
        .enumerate()
        .map(|(i, &x)| (x, (i + 1) as f64 / n, cdf(x)))
        .collect()
}

/// Sample moments of a complex sample.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GaussianFit {
    pub mean: ComplexScalar,
    pub var_re: f64,
    pub var_im: f64,
    pub corr_re_im: f64,
    pub n_samples: usize,
}

/// Mean, unbiased component variances and the Re/Im correlation (0 when
/// either component is constant).
pub fn fit_complex_gaussian(sample: &[ComplexScalar]) -> Result<GaussianFit> {
    if sample.len() < 2 {
        return Err(Error::EmptySample);
    }
    let n = sample.len() as f64;
    let mean = sample.iter().sum::<ComplexScalar>() / n;
    let (mut srr, mut sii, mut sri) = (0.0, 0.0, 0.0);
    for z in sample {
        let d = z - mean;
        srr += d.re * d.re;
        sii += d.im * d.im;
        sri += d.re * d.im;
    }
    let var_re = srr / (n - 1.0);
    let var_im = sii / (n - 1.0);
    let corr = if srr > 0.0 && sii > 0.0 {
        (sri / (srr * sii).sqrt()).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    Ok(GaussianFit {
        mean,
        var_re,
        var_im,
        corr_re_im: corr,
        n_samples: sample.len(),
    })
}

/// One-dimensional KS checks of a sample against `N_C(0, 1)`:
/// `sqrt(2) Re`, `sqrt(2) Im` against the standard normal and `|z|^2`
/// against `Exp(1)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ComplexNormalKs {
    pub ks_re: f64,
    pub ks_im: f64,
    pub ks_modulus_sq: f64,
}

pub fn complex_normal_ks(sample: &[ComplexScalar]) -> Result<ComplexNormalKs> {
    let re: Vec<f64> = sample.iter().map(|z| SQRT_2 * z.re).collect();
    let im: Vec<f64> = sample.iter().map(|z| SQRT_2 * z.im).collect();
    let m2: Vec<f64> = sample.iter().map(|z| z.norm_sqr()).collect();
    Ok(ComplexNormalKs {
        ks_re: ks_distance(&re, normal_cdf)?,
        ks_im: ks_distance(&im, normal_cdf)?,
        ks_modulus_sq: ks_distance(&m2, |x| if x <= 0.0 { 0.0 } else { -(-x).exp_m1() })?,
    })
}

/// Fraction of indices with `|critical - center| > radius`.
pub fn coverage_miss_rate(criticals: &[ComplexScalar], centers: &[ComplexScalar], radii: &[f64]) -> Result<f64> {
    if criticals.len() != centers.len() {
        return Err(Error::LengthMismatch(criticals.len(), centers.len()));
    }
    if criticals.len() != radii.len() {
        return Err(Error::LengthMismatch(criticals.len(), radii.len()));
    }
    if criticals.is_empty() {
        return Err(Error::EmptySample);
    }
    let misses = criticals
        .iter()
        .zip(centers)
        .zip(radii)
        .filter(|((c, z), &r)| (*c - *z).norm() > r)
        .count();
    Ok(misses as f64 / criticals.len() as f64)
}

/// Row of [`nearest_zero_law`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NearestZeroRow {
    pub r: f64,
    pub empirical: f64,
    pub theoretical: f64,
}

/// Fraction of trials with `sqrt(n) min_k |xi_k - u0| <= r`, where `n` is the
/// number of zeros of the trial, against `1 - exp(-p(u0) pi r^2)`.
pub fn nearest_zero_law(
    zeros_per_trial: &[Vec<ComplexScalar>],
    u0: ComplexScalar,
    p_at_u0: f64,
    r_grid: &[f64],
) -> Result<Vec<NearestZeroRow>> {
    let scaled: Vec<f64> = zeros_per_trial
        .iter()
        .map(|zs| {
            let m = zs.iter().map(|z| (z - u0).norm()).fold(f64::INFINITY, f64::min);
            (zs.len() as f64).sqrt() * m
        })
        .collect();
    nearest_zero_law_from_distances(&scaled, p_at_u0, r_grid)
}

/// [`nearest_zero_law`] from precomputed `sqrt(n) min_k |xi_k - u0|` values.
pub fn nearest_zero_law_from_distances(scaled: &[f64], p_at_u0: f64, r_grid: &[f64]) -> Result<Vec<NearestZeroRow>> {
    if !(p_at_u0 > 0.0) {
        return Err(Error::ZeroDensity);
    }
    Ok(r_grid
        .iter()
        .map(|&r| {
            let empirical = if scaled.is_empty() {
                0.0
            } else {
                scaled.iter().filter(|&&d| d <= r).count() as f64 / scaled.len() as f64
            };
            NearestZeroRow {
                r,
                empirical,
                theoretical: -(-p_at_u0 * PI * r * r).exp_m1(),
            }
        })
        .collect())
}

pub const ANGULAR_SECTORS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskUniformity {
    /// KS distance of `|z|` against `min(r^2, 1)`.
    pub radial_ks: f64,
    /// Pearson chi-square of the arguments over 16 equal sectors.
    pub angular_chi2: f64,
    /// Fraction with `|z| <= 1`.
    pub frac_inside: f64,
}

pub fn disk_uniformity(points: &[ComplexScalar]) -> Result<DiskUniformity> {
    if points.is_empty() {
        return Err(Error::EmptySample);
    }
    let radii: Vec<f64> = points.iter().map(|z| z.norm()).collect();
    let radial_ks = ks_distance(&radii, |r| (r.max(0.0) * r.max(0.0)).min(1.0))?;
    let mut counts = [0usize; ANGULAR_SECTORS];
    for z in points {
        let theta = z.im.atan2(z.re).rem_euclid(TAU);
        let s = ((theta / TAU * ANGULAR_SECTORS as f64) as usize).min(ANGULAR_SECTORS - 1);
        counts[s] += 1;
    }
    let expected = points.len() as f64 / ANGULAR_SECTORS as f64;
    let angular_chi2 = counts
        .iter()
        .map(|&c| (c as f64 - expected).powi(2) / expected)
        .sum();
    Ok(DiskUniformity {
        radial_ks,
        angular_chi2,
        frac_inside: fraction_within(points, 1.0),
    })
}

/// Fraction of points with `|z| <= radius`; 0 for an empty slice.
pub fn fraction_within(points: &[ComplexScalar], radius: f64) -> f64 {
    if points.is_empty() {
        return 0.0;
    }
    points.iter().filter(|z| z.norm() <= radius).count() as f64 / points.len() as f64
}

/// Symmetric Hausdorff distance between two finite point sets; infinite
/// when exactly one of them is empty.
pub fn hausdorff_distance(a: &[ComplexScalar], b: &[ComplexScalar]) -> f64 {
    if a.is_empty() && b.is_empty() {
        return 0.0;
    }
    let one_way = |x: &[ComplexScalar], y: &[ComplexScalar]| {
        x.iter()
            .map(|p| y.iter().map(|q| (p - q).norm()).fold(f64::INFINITY, f64::min))
            .fold(0.0, f64::max)
    };
    one_way(a, b).max(one_way(b, a))
}
