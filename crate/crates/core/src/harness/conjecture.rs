use std::f64::consts::SQRT_2;
use std::path::Path;

use crate::ensembles::{
    sample_ginibre_zeros, sample_iid_zero_poly, sample_weyl_poly, trial_seed, EnsembleKind, EnsembleSpec, SeededRng,
};
use crate::error::{Error, Result};
use crate::pairing::{chi_atoms, chi_normalizer, fill_d_statistics, pair_nearest, PairStatus, PairingRecord};
use crate::polycore::{ComplexScalar, RootFormPoly};
use crate::rootfind::{critical_points_all, roots_from_coeffs};
use crate::stats::{disk_uniformity, ecdf_table, fit_complex_gaussian, fraction_within, ks_distance, normal_cdf};

use super::config::{Experiment, ExperimentConfig};
use super::output::{csv_writer, finish, fmt_f64, Summary};
use super::run_trials;

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureTrial {
    pub trial: usize,
    pub seed: u64,
    /// Zeros as sampled or recovered; empty when the eigensolver failed.
    pub zeros: Vec<ComplexScalar>,
    /// One record per zero (or per expected zero on failure).
    pub records: Vec<PairingRecord>,
}

impl ConjectureTrial {
    pub fn nu_atoms(&self) -> impl Iterator<Item = ComplexScalar> + '_ {
        self.records
            .iter()
            .filter(|r| r.status != PairStatus::MatchFailed)
            .map(|r| r.nu_atom)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConjectureRun {
    pub trials: Vec<ConjectureTrial>,
    /// `(x, ecdf, Phi(x))` of `sqrt(2) Re` of the pooled chi atoms.
    pub ecdf: Vec<(f64, f64, f64)>,
    pub summary: Summary,
}

fn sample_zeros(cfg: &ExperimentConfig, spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<(Vec<ComplexScalar>, bool)> {
    match spec.kind {
        EnsembleKind::IidZeros => Ok((sample_iid_zero_poly(spec, rng)?.into_zeros(), true)),
        EnsembleKind::Weyl => {
            let p = sample_weyl_poly(spec, rng)?;
            match roots_from_coeffs(&p, cfg.tol, cfg.max_iter) {
                Ok(report) => Ok((report.points, true)),
                Err(Error::AberthNotConverged(report)) => Ok((report.points, false)),
                Err(e) => Err(e),
            }
        }
        EnsembleKind::GinibreCharPoly => match sample_ginibre_zeros(spec, rng) {
            Ok(p) => Ok((p.into_zeros(), true)),
            Err(Error::NoConvergence { .. } | Error::TraceMismatch { .. }) => Ok((Vec::new(), false)),
            Err(e) => Err(e),
        },
    }
}

fn run_trial(cfg: &ExperimentConfig, spec: &EnsembleSpec, norm: f64, trial: usize) -> Result<ConjectureTrial> {
    let seed = trial_seed(cfg.master_seed, trial as u64);
    let mut rng = SeededRng::new(seed);
    let (zeros, sampled) = sample_zeros(cfg, spec, &mut rng)?;
    let failed = |zeros: &[ComplexScalar]| -> Vec<PairingRecord> {
        if zeros.is_empty() {
            let nan = ComplexScalar::new(f64::NAN, f64::NAN);
            vec![PairingRecord::failed(nan); cfg.n]
        } else {
            zeros.iter().map(|&z| PairingRecord::failed(z)).collect()
        }
    };
    let records = if sampled {
        let poly = RootFormPoly::new(zeros.clone())?;
        match critical_points_all(&poly, cfg.tol, cfg.max_iter) {
            Ok(report) => {
                let mut records = pair_nearest(&zeros, &report.points, zeros.len())?;
                fill_d_statistics(&mut records, zeros.len(), cfg.exclusion_radius, norm);
                records
            }
            Err(Error::AberthNotConverged(_) | Error::DuplicateZeros(..)) => failed(&zeros),
            Err(e) => return Err(e),
        }
    } else {
        failed(&zeros)
    };
    Ok(ConjectureTrial {
        trial,
        seed,
        zeros,
        records,
    })
}

/// Zeros, critical points and the nu / chi measures for any ensemble.
pub fn run_conjecture_experiment(cfg: &ExperimentConfig) -> Result<ConjectureRun> {
    if cfg.experiment != Experiment::Conjecture {
        return Err(Error::Config(format!(
            "conjecture run with experiment = {}",
            cfg.experiment.as_str()
        )));
    }
    cfg.validate()?;
    let spec = cfg.ensemble_spec()?;
    let norm = chi_normalizer(cfg.n, cfg.chi_norm_exponent);
    let trials = run_trials(cfg.threads, cfg.trials, |t| run_trial(cfg, &spec, norm, t))?;

    let nu: Vec<_> = trials.iter().flat_map(|t| t.nu_atoms()).collect();
    let chi: Vec<_> = trials
        .iter()
        .flat_map(|t| chi_atoms(&t.records, cfg.exclusion_radius))
        .collect();
    let chi_re: Vec<f64> = chi.iter().map(|d| SQRT_2 * d.re).collect();
    let ecdf = ecdf_table(&chi_re, normal_cdf);
    let zeros: Vec<_> = trials.iter().flat_map(|t| t.zeros.iter().copied()).collect();

    let mut s = Summary::default();
    s.push_usize("trials", trials.len());
    s.push_usize("n", cfg.n);
    s.push("ensemble", format!("{:?}", cfg.ensemble));
    s.push_f64("chi_normalizer", norm);
    s.push_usize(
        "failed_trials",
        trials
            .iter()
            .filter(|t| t.records.iter().any(|r| r.status == PairStatus::MatchFailed))
            .count(),
    );
    s.push_usize(
        "match_failed_records",
        trials
            .iter()
            .flat_map(|t| &t.records)
            .filter(|r| r.status == PairStatus::MatchFailed)
            .count(),
    );
    s.push_f64("zeros_frac_within_1.1", fraction_within(&zeros, 1.1));
    s.push_usize("nu_atoms", nu.len());
    let u = disk_uniformity(&nu).ok();
    s.push_f64("nu_radial_ks", u.map_or(f64::NAN, |u| u.radial_ks));
    s.push_f64("nu_angular_chi2", u.map_or(f64::NAN, |u| u.angular_chi2));
    s.push_f64("nu_frac_inside", u.map_or(f64::NAN, |u| u.frac_inside));
    s.push_f64("nu_frac_within_1.15", fraction_within(&nu, 1.15));
    s.push_usize("chi_atoms", chi.len());
    s.push_fit("chi", fit_complex_gaussian(&chi).ok().as_ref());
    s.push_f64("chi_ks_sqrt2_re", ks_distance(&chi_re, normal_cdf).unwrap_or(f64::NAN));
    Ok(ConjectureRun {
        trials,
        ecdf,
        summary: s,
    })
}

impl ConjectureRun {
    pub fn write_atoms(&self, path: &Path) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(["trial", "k", "kind", "re", "im", "status"])?;
        for t in &self.trials {
            for (k, r) in t.records.iter().enumerate() {
                let (trial, k) = (t.trial.to_string(), k.to_string());
                let status = r.status.as_str();
                let nu = if r.status == PairStatus::MatchFailed {
                    ComplexScalar::new(f64::NAN, f64::NAN)
                } else {
                    r.nu_atom
                };
                w.write_record([&trial, &k, "nu", &fmt_f64(nu.re), &fmt_f64(nu.im), status])?;
                let chi = r.d_stat.unwrap_or(ComplexScalar::new(f64::NAN, f64::NAN));
                w.write_record([&trial, &k, "chi", &fmt_f64(chi.re), &fmt_f64(chi.im), status])?;
            }
        }
        finish(w, path)
    }

    pub fn write_ecdf(&self, path: &Path) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(["x", "ecdf", "normal_cdf"])?;
        for &(x, e, f) in &self.ecdf {
            w.write_record([fmt_f64(x), fmt_f64(e), fmt_f64(f)])?;
        }
        finish(w, path)
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        self.write_atoms(&dir.join("atoms.csv"))?;
        self.write_ecdf(&dir.join("ecdf.csv"))?;
        self.summary.write(&dir.join("summary.csv"))
    }
}
