use std::path::Path;

use crate::ensembles::{sample_iid_zero_poly, trial_seed, SeededRng};
use crate::error::{Error, Result};
use crate::pairing::clt_statistic;
use crate::polycore::ComplexScalar;
use crate::stats::{complex_normal_ks, fit_complex_gaussian};

use super::config::{Experiment, ExperimentConfig};
use super::output::{csv_writer, finish, fmt_opt, Summary};
use super::run_trials;

#[derive(Debug, Clone, PartialEq)]
pub struct CltTrial {
    pub trial: usize,
    pub seed: u64,
    pub stat: Option<ComplexScalar>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CltRun {
    pub trials: Vec<CltTrial>,
    pub summary: Summary,
}

/// `(1/sqrt(n log n)) sum_k (1/(z_n - xi_k) - f(0))` once per trial.
pub fn run_clt_experiment(cfg: &ExperimentConfig) -> Result<CltRun> {
    if cfg.experiment != Experiment::Clt {
        return Err(Error::Config(format!("CLT run with experiment = {}", cfg.experiment.as_str())));
    }
    cfg.validate()?;
    let spec = cfg.ensemble_spec()?;
    let z_n = cfg.z_n();
    let f0 = spec.density.transform(ComplexScalar::new(0.0, 0.0));
    let p0 = spec.density.density_at(ComplexScalar::new(0.0, 0.0));
    let trials = run_trials(cfg.threads, cfg.trials, |t| {
        let seed = trial_seed(cfg.master_seed, t as u64);
        let mut rng = SeededRng::new(seed);
        let poly = sample_iid_zero_poly(&spec, &mut rng)?;
        Ok(CltTrial {
            trial: t,
            seed,
            stat: clt_statistic(poly.zeros(), z_n, f0, cfg.n).ok(),
        })
    })?;

    let sample: Vec<_> = trials.iter().filter_map(|t| t.stat).collect();
    let mut summary = Summary::default();
    summary.push_usize("trials", trials.len());
    summary.push_usize("n", cfg.n);
    summary.push_f64("z_n_re", z_n.re);
    summary.push_f64("z_n_im", z_n.im);
    summary.push_f64("f0_re", f0.re);
    summary.push_f64("f0_im", f0.im);
    summary.push_f64("target_variance", std::f64::consts::PI * p0);
    summary.push_f64("target_component_variance", 0.5 * std::f64::consts::PI * p0);
    summary.push_fit("stat", fit_complex_gaussian(&sample).ok().as_ref());
    // standardized by the target variance
    let scaled: Vec<_> = if p0 > 0.0 {
        sample.iter().map(|z| z / (std::f64::consts::PI * p0).sqrt()).collect()
    } else {
        Vec::new()
    };
    let ks = complex_normal_ks(&scaled).ok();
    summary.push_f64("stat_ks_sqrt2_re", ks.map_or(f64::NAN, |k| k.ks_re));
    summary.push_f64("stat_ks_sqrt2_im", ks.map_or(f64::NAN, |k| k.ks_im));
    summary.push_f64("stat_ks_modulus_sq", ks.map_or(f64::NAN, |k| k.ks_modulus_sq));
    Ok(CltRun { trials, summary })
}

impl CltRun {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let path = dir.join("trials.csv");
        let mut w = csv_writer(&path)?;
        w.write_record(["trial", "seed", "stat_re", "stat_im"])?;
        for t in &self.trials {
            w.write_record([
                t.trial.to_string(),
                t.seed.to_string(),
                fmt_opt(t.stat.map(|z| z.re)),
                fmt_opt(t.stat.map(|z| z.im)),
            ])?;
        }
        finish(w, &path)?;
        self.summary.write(&dir.join("summary.csv"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run() {
        let cfg = ExperimentConfig {
            experiment: Experiment::Clt,
            n: 300,
            trials: 50,
            ..ExperimentConfig::default()
        };
        let run = run_clt_experiment(&cfg).unwrap();
        assert_eq!(run.trials.len(), 50);
        assert!(run.trials.iter().all(|t| t.stat.is_some()));
        assert_eq!(run.summary.get_f64("target_component_variance"), Some(0.5));
    }

    #[test]
    fn exponent_guard() {
        let cfg = ExperimentConfig {
            experiment: Experiment::Clt,
            clt_exponent: 0.4,
            ..ExperimentConfig::default()
        };
        assert!(matches!(run_clt_experiment(&cfg), Err(Error::Config(_))));
    }
}
