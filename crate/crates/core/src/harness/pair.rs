use std::path::Path;

use crate::ensembles::{sample_iid_zero_poly, trial_seed, SeededRng};
use crate::error::{Error, Result};
use crate::pairing::{predicted_critical, standardized_statistic, standardized_statistic_modulus};
use crate::polycore::{ComplexScalar, RootFormPoly};
use crate::rootfind::{count_critical_in_disk, newton_local_critical};
use crate::stats::{complex_normal_ks, fit_complex_gaussian, nearest_zero_law_from_distances};

use super::config::{Experiment, ExperimentConfig};
use super::output::{csv_writer, finish, fmt_opt, Summary, NA};
use super::run_trials;

/// Outcome of one trial of the pairing experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct PairTrial {
    pub trial: usize,
    pub seed: u64,
    /// Newton converged to a critical point inside the certification disk.
    pub found: bool,
    /// Certified number of critical points in the disk; `None` when the
    /// contour count failed.
    pub count_in_disk: Option<usize>,
    pub zeta: Option<ComplexScalar>,
    /// Standardized statistic with the `|f|^2` prefactor.
    pub stat: Option<ComplexScalar>,
    /// Standardized statistic with the `f^2` prefactor.
    pub stat_f2: Option<ComplexScalar>,
    /// Confidence-disk miss per entry of `R_grid`.
    pub miss: Vec<Option<bool>>,
    /// `sqrt(n) min_k |xi_k - u0|`.
    pub nearest_zero_scaled: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PairingRun {
    pub trials: Vec<PairTrial>,
    pub summary: Summary,
}

struct Setup {
    u0: ComplexScalar,
    f: ComplexScalar,
    p: f64,
    predicted: ComplexScalar,
    r_n: f64,
    /// Confidence-disk radius at `R = 1`.
    unit_radius: f64,
}

fn setup(cfg: &ExperimentConfig, density: &crate::ensembles::Density) -> Result<Setup> {
    let u0 = cfg.u0();
    let f = density.transform(u0);
    let p = density.density_at(u0);
    if f.norm() == 0.0 {
        return Err(Error::Config(format!("f(u0) = 0 at u0 = {u0}")));
    }
    if !(p > 0.0) {
        return Err(Error::Config(format!("density vanishes at u0 = {u0}")));
    }
    let n = cfg.n as f64;
    Ok(Setup {
        u0,
        f,
        p,
        predicted: predicted_critical(u0, f, cfg.n)?,
        r_n: cfg.r_n(),
        unit_radius: (std::f64::consts::PI * p * n.ln()).sqrt() / (n.powf(1.5) * f.norm_sqr()),
    })
}

fn run_trial(cfg: &ExperimentConfig, spec: &crate::ensembles::EnsembleSpec, s: &Setup, trial: usize) -> Result<PairTrial> {
    let seed = trial_seed(cfg.master_seed, trial as u64);
    let mut rng = SeededRng::new(seed);
    let xi = sample_iid_zero_poly(spec, &mut rng)?.into_zeros();
    let nearest = xi.iter().map(|z| (z - s.u0).norm()).fold(f64::INFINITY, f64::min);
    let mut zeros = Vec::with_capacity(xi.len() + 1);
    zeros.push(s.u0);
    zeros.extend(xi);
    let poly = RootFormPoly::new(zeros)?;

    let zeta = newton_local_critical(&poly, s.predicted, cfg.tol, cfg.max_iter, s.r_n)
        .ok()
        .filter(|z| (z - s.u0).norm() < s.r_n);
    let count_in_disk = count_critical_in_disk(&poly, s.u0, s.r_n, cfg.contour_nodes).ok();
    let stat = zeta.and_then(|z| standardized_statistic_modulus(s.u0, z, s.f, s.p, cfg.n).ok());
    let stat_f2 = zeta.and_then(|z| standardized_statistic(s.u0, z, s.f, s.p, cfg.n).ok());
    let miss = cfg
        .r_grid
        .iter()
        .map(|&r| zeta.map(|z| (z - s.predicted).norm() > r * s.unit_radius))
        .collect();
    Ok(PairTrial {
        trial,
        seed,
        found: zeta.is_some(),
        count_in_disk,
        zeta,
        stat,
        stat_f2,
        miss,
        nearest_zero_scaled: (cfg.n as f64).sqrt() * nearest,
    })
}

/// Pairing experiment around a fixed zero `u0` added to `n` i.i.d. zeros.
pub fn run_pairing_experiment(cfg: &ExperimentConfig) -> Result<PairingRun> {
    if cfg.experiment != Experiment::Pair {
        return Err(Error::Config(format!("pairing run with experiment = {}", cfg.experiment.as_str())));
    }
    cfg.validate()?;
    let spec = cfg.ensemble_spec()?;
    let s = setup(cfg, &spec.density)?;
    let trials = run_trials(cfg.threads, cfg.trials, |t| run_trial(cfg, &spec, &s, t))?;
    let summary = summarize(cfg, &s, &trials)?;
    Ok(PairingRun { trials, summary })
}

fn summarize(cfg: &ExperimentConfig, s: &Setup, trials: &[PairTrial]) -> Result<Summary> {
    let total = trials.len();
    let frac = |k: usize| if total == 0 { f64::NAN } else { k as f64 / total as f64 };
    let mut out = Summary::default();
    out.push_usize("trials", total);
    out.push_usize("n", cfg.n);
    out.push_f64("r_n", s.r_n);
    out.push_f64("f_u0_re", s.f.re);
    out.push_f64("f_u0_im", s.f.im);
    out.push_f64("p_u0", s.p);
    out.push_f64("predicted_re", s.predicted.re);
    out.push_f64("predicted_im", s.predicted.im);
    out.push_f64("uniqueness_frequency", frac(trials.iter().filter(|t| t.count_in_disk == Some(1)).count()));
    out.push_f64("found_frequency", frac(trials.iter().filter(|t| t.found).count()));
    out.push_usize("count_failures", trials.iter().filter(|t| t.count_in_disk.is_none()).count());

    let n = cfg.n as f64;
    let scale = 10.0 * n.ln().sqrt() * n.powf(-1.5);
    let accurate = trials
        .iter()
        .filter(|t| t.zeta.is_some_and(|z| (z - s.predicted).norm() <= scale))
        .count();
    out.push_f64("prediction_accuracy_frequency", frac(accurate));

    let stats: Vec<_> = trials.iter().filter_map(|t| t.stat).collect();
    let stats_f2: Vec<_> = trials.iter().filter_map(|t| t.stat_f2).collect();
    out.push_fit("stat", fit_complex_gaussian(&stats).ok().as_ref());
    let ks = complex_normal_ks(&stats).ok();
    out.push_f64("stat_ks_sqrt2_re", ks.map_or(f64::NAN, |k| k.ks_re));
    out.push_f64("stat_ks_sqrt2_im", ks.map_or(f64::NAN, |k| k.ks_im));
    out.push_f64("stat_ks_modulus_sq", ks.map_or(f64::NAN, |k| k.ks_modulus_sq));
    out.push_fit("stat_f2", fit_complex_gaussian(&stats_f2).ok().as_ref());

    for (i, &r) in cfg.r_grid.iter().enumerate() {
        let decided: Vec<bool> = trials.iter().filter_map(|t| t.miss[i]).collect();
        let rate = if decided.is_empty() {
            f64::NAN
        } else {
            decided.iter().filter(|&&m| m).count() as f64 / decided.len() as f64
        };
        out.push_f64(format!("R{i}"), r);
        out.push_f64(format!("miss_rate_R{i}"), rate);
        out.push_f64(format!("expected_miss_R{i}"), (-r * r).exp());
    }

    let scaled: Vec<f64> = trials.iter().map(|t| t.nearest_zero_scaled).collect();
    for (i, row) in nearest_zero_law_from_distances(&scaled, s.p, &cfg.r_grid)?.iter().enumerate() {
        out.push_f64(format!("nearest_zero_empirical_R{i}"), row.empirical);
        out.push_f64(format!("nearest_zero_theoretical_R{i}"), row.theoretical);
    }
    Ok(out)
}

impl PairingRun {
    pub fn header(r_grid_len: usize) -> Vec<String> {
        let mut h: Vec<String> = [
            "trial",
            "seed",
            "found",
            "count_in_disk",
            "zeta_re",
            "zeta_im",
            "stat_re",
            "stat_im",
        ]
        .iter()
        .map(|s| s.to_string())
        .collect();
        h.extend((0..r_grid_len).map(|i| format!("miss_R{i}")));
        h
    }

    pub fn write_trials(&self, path: &Path, r_grid_len: usize) -> Result<()> {
        let mut w = csv_writer(path)?;
        w.write_record(Self::header(r_grid_len))?;
        for t in &self.trials {
            let mut row = vec![
                t.trial.to_string(),
                t.seed.to_string(),
                u8::from(t.found).to_string(),
                t.count_in_disk.map_or_else(|| "-1".to_string(), |c| c.to_string()),
                fmt_opt(t.zeta.map(|z| z.re)),
                fmt_opt(t.zeta.map(|z| z.im)),
                fmt_opt(t.stat.map(|z| z.re)),
                fmt_opt(t.stat.map(|z| z.im)),
            ];
            row.extend(t.miss.iter().map(|m| match m {
                Some(true) => "1".to_string(),
                Some(false) => "0".to_string(),
                None => NA.to_string(),
            }));
            w.write_record(&row)?;
        }
        finish(w, path)
    }

    pub fn write(&self, dir: &Path, cfg: &ExperimentConfig) -> Result<()> {
        self.write_trials(&dir.join("trials.csv"), cfg.r_grid.len())?;
        self.summary.write(&dir.join("summary.csv"))
    }
}
