//! Cauchy-Stieltjes transforms `f(z) = E[1/(z - xi)]`: closed forms for the
//! uniform disk and the standard complex normal, the radial reduction
//! `f(z) = P[|xi| <= |z|] / z`, and a median-of-means Monte Carlo estimator
//! that stays usable when `1/(z - xi)` has infinite variance.

use crate::ensembles::{RadialCdf, SeededRng};
use crate::error::{Error, Result};
use crate::polycore::ComplexScalar;

const ORIGIN: ComplexScalar = ComplexScalar::new(0.0, 0.0);

/// `conj(z)` inside the unit disk, `1/z` outside.
pub fn cst_uniform_disk(z: ComplexScalar) -> ComplexScalar {
    if z.norm_sqr() <= 1.0 {
        z.conj()
    } else {
        z.inv()
    }
}

/// `(1 - exp(-|z|^2)) / z`, with `f(0) = 0`.
pub fn cst_gaussian(z: ComplexScalar) -> ComplexScalar {
    let r2 = z.norm_sqr();
    if r2 == 0.0 {
        return ORIGIN;
    }
    if r2.sqrt() < 1e-6 {
        // (1 - e^{-r^2})/z = conj(z) (1 - e^{-r^2})/r^2
        return z.conj() * (1.0 - 0.5 * r2);
    }
    -(-r2).exp_m1() / z
}

/// `P[|xi| <= |z|] / z` for a rotation-invariant law; `f(0) = 0` exactly.
pub fn cst_radial<C: RadialCdf + ?Sized>(cdf: &C, z: ComplexScalar) -> ComplexScalar {
    if z.norm() == 0.0 {
        return ORIGIN;
    }
    cdf.cdf(z.norm()) / z
}

/// Median-of-means estimate of `E[1/(z - xi)]` from `batches` batches of
/// `batch_size` draws. Returns the componentwise median of the batch means
/// and the median absolute deviation of the batch means from it.
///
/// Draws within `1e-12` of `z` are rejected and redrawn.
pub fn cst_monte_carlo<S>(
    mut sampler: S,
    z: ComplexScalar,
    batches: usize,
    batch_size: usize,
    rng: &mut SeededRng,
) -> Result<(ComplexScalar, f64)>
where
    S: FnMut(&mut SeededRng) -> ComplexScalar,
{
    if batches < 8 || batch_size < 100 {
        return Err(Error::OutOfRange(format!(
            "median of means needs B >= 8 and M >= 100 (got B = {batches}, M = {batch_size})"
        )));
    }
    let mut means = Vec::with_capacity(batches);
    for _ in 0..batches {
        let mut acc = ORIGIN;
        for _ in 0..batch_size {
            let xi = loop {
                let xi = sampler(rng);
                if (z - xi).norm() >= 1e-12 {
                    break xi;
                }
            };
            acc += (z - xi).inv();
        }
        means.push(acc / batch_size as f64);
    }
    let estimate = ComplexScalar::new(
        median(means.iter().map(|m| m.re).collect()),
        median(means.iter().map(|m| m.im).collect()),
    );
    let spread = median(means.iter().map(|m| (m - estimate).norm()).collect());
    Ok((estimate, spread))
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let n = v.len();
    if n % 2 == 1 {
        v[n / 2]
    } else {
        0.5 * (v[n / 2 - 1] + v[n / 2])
    }
}

/// `(1/n) sum_k 1/(z - zeros[k])`, optionally omitting one index; `n` counts
/// only the included terms.
pub fn empirical_cst(zeros: &[ComplexScalar], z: ComplexScalar, exclude: Option<usize>) -> Result<ComplexScalar> {
    let mut acc = ORIGIN;
    let mut count = 0usize;
    for (k, &xi) in zeros.iter().enumerate() {
        if Some(k) == exclude {
            continue;
        }
        if (z - xi).norm() < crate::polycore::POLE_RADIUS {
            return Err(Error::PoleHit { index: k });
        }
        acc += (z - xi).inv();
        count += 1;
    }
    if count == 0 {
        return Err(Error::EmptySample);
    }
    Ok(acc / count as f64)
}

/// `|f(z) - f(0)| / (|z| |log|z||)` for `0 < |z| < 1/2`. Bounded near the
/// origin for transforms of densities that are bounded near 0.
pub fn log_lipschitz_ratio<F>(transform: F, z: ComplexScalar) -> Result<f64>
where
    F: Fn(ComplexScalar) -> ComplexScalar,
{
    let r = z.norm();
    if !(r > 0.0 && r < 0.5) {
        return Err(Error::OutOfRange(format!("|z| = {r} not in (0, 1/2)")));
    }
    Ok((transform(z) - transform(ORIGIN)).norm() / (r * r.ln().abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ensembles::{sample_uniform_disk, CdfTable};

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    #[test]
    fn uniform_disk_closed_form() {
        assert_eq!(cst_uniform_disk(c(0.5, 0.0)), c(0.5, 0.0));
        assert_eq!(cst_uniform_disk(c(2.0, 0.0)), c(0.5, 0.0));
        assert_eq!(cst_uniform_disk(c(0.3, 0.4)), c(0.3, -0.4));
        // continuity across the unit circle
        let on = ComplexScalar::from_polar(1.0, 0.7);
        let out = ComplexScalar::from_polar(1.0 + 1e-12, 0.7);
        assert!((cst_uniform_disk(on) - cst_uniform_disk(out)).norm() < 1e-11);
    }

    #[test]
    fn gaussian_closed_form() {
        assert_eq!(cst_gaussian(c(0.0, 0.0)), c(0.0, 0.0));
        // 1 - e^{-1}
        assert!((cst_gaussian(c(1.0, 0.0)) - c(0.632_120_558_828_557_7, 0.0)).norm() < 1e-15);
        // (1 - e^{-4}) / (2i)
        assert!((cst_gaussian(c(0.0, 2.0)) - c(0.0, -0.490_842_180_555_633)).norm() < 1e-14);
    }

    #[test]
    fn gaussian_series_branch_is_continuous() {
        let below = ComplexScalar::from_polar(0.999_999e-6, 1.1);
        let above = ComplexScalar::from_polar(1.000_001e-6, 1.1);
        let ratio = cst_gaussian(above) / cst_gaussian(below);
        assert!((ratio - c(1.0, 0.0) * (1.000_001 / 0.999_999)).norm() < 1e-9);
    }

    #[test]
    fn radial_reduction() {
        let disk = CdfTable::uniform_disk(1024).unwrap();
        assert!((cst_radial(&disk, c(0.5, 0.0)) - c(0.5, 0.0)).norm() < 1e-5);
        assert_eq!(cst_radial(&disk, c(0.0, 0.0)), c(0.0, 0.0));
        let gauss = CdfTable::std_complex_gaussian(1024).unwrap();
        assert!((cst_radial(&gauss, c(1.0, 0.0)) - c(0.632_120_6, 0.0)).norm() < 1e-5);
        assert_eq!(cst_radial(&gauss, c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn monte_carlo_degenerate_sampler() {
        let mut rng = SeededRng::new(0);
        let (est, spread) = cst_monte_carlo(|_| c(0.0, 0.0), c(2.0, 0.0), 8, 100, &mut rng).unwrap();
        assert_eq!(est, c(0.5, 0.0));
        assert_eq!(spread, 0.0);
    }

    #[test]
    fn monte_carlo_outside_support() {
        let mut rng = SeededRng::new(17);
        let (est, _) = cst_monte_carlo(sample_uniform_disk, c(2.0, 0.0), 16, 10_000, &mut rng).unwrap();
        assert!((est - c(0.5, 0.0)).norm() < 0.01);
    }

    #[test]
    fn monte_carlo_parameter_guard() {
        let mut rng = SeededRng::new(0);
        assert!(cst_monte_carlo(sample_uniform_disk, c(2.0, 0.0), 7, 100, &mut rng).is_err());
        assert!(cst_monte_carlo(sample_uniform_disk, c(2.0, 0.0), 8, 99, &mut rng).is_err());
    }

    #[test]
    fn empirical_examples() {
        assert_eq!(empirical_cst(&[c(1.0, 0.0), c(-1.0, 0.0)], c(0.0, 0.0), None).unwrap(), c(0.0, 0.0));
        assert_eq!(empirical_cst(&[c(0.0, 0.0)], c(2.0, 0.0), None).unwrap(), c(0.5, 0.0));
        let zs = [c(0.0, 0.0), c(5.0, 0.0)];
        assert_eq!(empirical_cst(&zs, c(5.0, 0.0), Some(1)).unwrap(), c(0.2, 0.0));
        assert!(matches!(empirical_cst(&zs, c(5.0, 0.0), None), Err(Error::PoleHit { index: 1 })));
    }

    #[test]
    fn lipschitz_ratio_examples() {
        for z in [c(0.1, 0.0), c(0.0, -0.3), c(1e-5, 2e-5)] {
            let r = log_lipschitz_ratio(cst_uniform_disk, z).unwrap();
            assert!((r - 1.0 / z.norm().ln().abs()).abs() < 1e-12);
            assert!(r <= 1.0 / 2f64.ln());
        }
        // f(0.1) = (1 - e^{-0.01}) / 0.1 and f(0) = 0
        let expected = ((1.0 - (-0.01f64).exp()) / 0.1) / (0.1 * 10f64.ln());
        let r = log_lipschitz_ratio(cst_gaussian, c(0.1, 0.0)).unwrap();
        assert!((r - expected).abs() < 1e-12);
        assert!(r <= 1.0);
        assert!(matches!(log_lipschitz_ratio(cst_gaussian, c(0.6, 0.0)), Err(Error::OutOfRange(_))));
        assert!(log_lipschitz_ratio(cst_gaussian, c(0.0, 0.0)).is_err());
    }
}
