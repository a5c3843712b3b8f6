//! Distributional checks of the samplers.

use critpair::ensembles::{
    sample_complex_normal, sample_ginibre_matrix, sample_uniform_disk, trial_seed, Density, EntryLaw, SeededRng,
};
use critpair::stats::ks_distance;
use critpair::ComplexScalar;

fn moments(zs: &[ComplexScalar]) -> (ComplexScalar, f64, f64, f64) {
    let n = zs.len() as f64;
    let mean: ComplexScalar = zs.iter().sum::<ComplexScalar>() / n;
    let var_re = zs.iter().map(|z| (z.re - mean.re).powi(2)).sum::<f64>() / n;
    let var_im = zs.iter().map(|z| (z.im - mean.im).powi(2)).sum::<f64>() / n;
    let cov = zs.iter().map(|z| (z.re - mean.re) * (z.im - mean.im)).sum::<f64>() / n;
    (mean, var_re, var_im, cov / (var_re * var_im).sqrt())
}

#[test]
fn uniform_disk_radius_and_angle() {
    let mut rng = SeededRng::new(3);
    let zs: Vec<_> = (0..100_000).map(|_| sample_uniform_disk(&mut rng)).collect();
    assert!(zs.iter().all(|z| z.norm() <= 1.0));
    let r2: Vec<f64> = zs.iter().map(|z| z.norm_sqr()).collect();
    assert!(ks_distance(&r2, |x: f64| x.clamp(0.0, 1.0)).unwrap() <= 0.01);
    let theta: Vec<f64> = zs.iter().map(|z| z.arg()).collect();
    let uniform_angle = |t: f64| ((t + std::f64::consts::PI) / std::f64::consts::TAU).clamp(0.0, 1.0);
    assert!(ks_distance(&theta, uniform_angle).unwrap() <= 0.01);
}

#[test]
fn complex_normal_moments() {
    let mut rng = SeededRng::new(5);
    let zs: Vec<_> = (0..1_000_000).map(|_| sample_complex_normal(&mut rng, 1.0)).collect();
    let (mean, var_re, var_im, corr) = moments(&zs);
    assert!(mean.norm() <= 0.003);
    assert!((var_re - 0.5).abs() <= 0.003 && (var_im - 0.5).abs() <= 0.003);
    assert!(corr.abs() <= 0.01);
    let mean_sq = zs.iter().map(|z| z.norm_sqr()).sum::<f64>() / zs.len() as f64;
    assert!((mean_sq - 1.0).abs() <= 0.003);
    let r2: Vec<f64> = zs[..100_000].iter().map(|z| z.norm_sqr()).collect();
    assert!(ks_distance(&r2, |x: f64| 1.0 - (-x.max(0.0)).exp()).unwrap() <= 0.01);
}

#[test]
fn gaussian_density_sampler_matches_law() {
    let mut rng = SeededRng::new(8);
    let r2: Vec<f64> = (0..100_000)
        .map(|_| Density::StdComplexGaussian.sample(&mut rng).norm_sqr())
        .collect();
    assert!(ks_distance(&r2, |x: f64| 1.0 - (-x.max(0.0)).exp()).unwrap() <= 0.01);
}

#[test]
fn entry_laws_have_unit_variance() {
    for law in [EntryLaw::ComplexGaussian, EntryLaw::ComplexRademacher] {
        let mut rng = SeededRng::new(13);
        let zs: Vec<_> = (0..200_000).map(|_| law.sample(&mut rng)).collect();
        let (mean, var_re, var_im, corr) = moments(&zs);
        assert!(mean.norm() <= 0.01, "{law:?}");
        assert!((var_re + var_im - 1.0).abs() <= 0.01, "{law:?}");
        assert!(corr.abs() <= 0.01, "{law:?}");
    }
}

#[test]
fn ginibre_entries_are_standard() {
    let mut rng = SeededRng::new(21);
    let a = sample_ginibre_matrix(300, EntryLaw::ComplexGaussian, &mut rng);
    let entries: Vec<_> = (0..300).flat_map(|i| (0..300).map(move |j| (i, j))).map(|ij| a[ij]).collect();
    let (mean, var_re, var_im, _) = moments(&entries);
    assert!(mean.norm() <= 0.01);
    assert!((var_re - 0.5).abs() <= 0.01 && (var_im - 0.5).abs() <= 0.01);
}

#[test]
fn streams_are_reproducible_and_distinct() {
    let draw = |seed| {
        let mut rng = SeededRng::new(seed);
        (0..16).map(|_| rng.next_u64()).collect::<Vec<_>>()
    };
    assert_eq!(draw(trial_seed(1, 0)), draw(trial_seed(1, 0)));
    assert_ne!(draw(trial_seed(1, 0)), draw(trial_seed(1, 1)));
    assert_ne!(draw(trial_seed(1, 0)), draw(trial_seed(2, 0)));
}
