use std::path::Path;

use crate::ensembles::{sample_uniform_disk, SeededRng};
use crate::error::{Error, Result};
use crate::polycore::{ComplexScalar, RootFormPoly};
use crate::rootfind::{companion_oracle_roots, convex_hull_contains, critical_points_all};
use crate::stats::hausdorff_distance;

use super::config::{Experiment, ExperimentConfig};
use super::cst_check::run_cst_check;
use super::output::Summary;
use super::pair::run_pairing_experiment;

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestCheck {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SelftestReport {
    pub checks: Vec<SelftestCheck>,
    pub summary: Summary,
}

impl SelftestReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

fn random_poly(rng: &mut SeededRng, degree: usize) -> Result<RootFormPoly> {
    RootFormPoly::new((0..degree).map(|_| sample_uniform_disk(rng)).collect())
}

fn oracle_check(seed: u64) -> Result<SelftestCheck> {
    let mut rng = SeededRng::new(seed);
    let mut worst = 0.0f64;
    for i in 0..20 {
        let p = random_poly(&mut rng, 2 + i % 11)?;
        let ours = critical_points_all(&p, 1e-14, 500)?.points;
        let oracle = companion_oracle_roots(&p.expand()?.derivative()?)?;
        worst = worst.max(hausdorff_distance(&ours, &oracle));
    }
    Ok(SelftestCheck {
        name: "oracle_equivalence",
        passed: worst <= 1e-8,
        detail: format!("max distance {worst:.3e}"),
    })
}

fn gauss_lucas_vieta_check(seed: u64) -> Result<SelftestCheck> {
    let mut rng = SeededRng::new(seed);
    let mut ok = true;
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let p = random_poly(&mut rng, 100)?;
        let crit = critical_points_all(&p, 1e-14, 500)?.points;
        let zeros = p.zeros();
        let diameter = zeros
            .iter()
            .flat_map(|a| zeros.iter().map(move |b| (a - b).norm()))
            .fold(0.0, f64::max);
        ok &= crit.iter().all(|&c| convex_hull_contains(zeros, c, 1e-9 * diameter));
        let m = zeros.len() as f64;
        let zsum: ComplexScalar = zeros.iter().sum();
        let csum: ComplexScalar = crit.iter().sum();
        let scale = zeros.iter().map(|z| z.norm()).sum::<f64>();
        worst = worst.max((csum - zsum * ((m - 1.0) / m)).norm() / scale);
    }
    Ok(SelftestCheck {
        name: "gauss_lucas_vieta",
        passed: ok && worst <= 1e-8,
        detail: format!("hull {}; vieta relative error {worst:.3e}", if ok { "ok" } else { "violated" }),
    })
}

fn pairing_check(cfg: &ExperimentConfig) -> Result<SelftestCheck> {
    let pcfg = ExperimentConfig {
        experiment: Experiment::Pair,
        n: 300,
        trials: 60,
        master_seed: cfg.master_seed,
        threads: cfg.threads,
        ..ExperimentConfig::default()
    };
    let run = run_pairing_experiment(&pcfg)?;
    let found = run.summary.get_f64("found_frequency").unwrap_or(0.0);
    let unique = run.summary.get_f64("uniqueness_frequency").unwrap_or(0.0);
    Ok(SelftestCheck {
        name: "pairing_smoke",
        passed: found >= 0.9 && unique >= 0.85,
        detail: format!("found {found:.3}, unique {unique:.3}"),
    })
}

fn reproducibility_check(cfg: &ExperimentConfig, dir: &Path) -> Result<SelftestCheck> {
    let mut outputs = Vec::new();
    for threads in [1, 4] {
        let pcfg = ExperimentConfig {
            experiment: Experiment::Pair,
            n: 80,
            trials: 16,
            master_seed: cfg.master_seed,
            threads,
            ..ExperimentConfig::default()
        };
        let sub = dir.join(format!("repro_threads_{threads}"));
        std::fs::create_dir_all(&sub).map_err(|e| Error::io(&sub, e))?;
        run_pairing_experiment(&pcfg)?.write(&sub, &pcfg)?;
        let path = sub.join("trials.csv");
        outputs.push(std::fs::read(&path).map_err(|e| Error::io(&path, e))?);
    }
    Ok(SelftestCheck {
        name: "reproducibility",
        passed: outputs[0] == outputs[1],
        detail: format!("{} bytes", outputs[0].len()),
    })
}

/// Fast end-to-end checks of the whole pipeline; scratch files go below
/// `output_dir/selftest`.
pub fn selftest(cfg: &ExperimentConfig) -> Result<SelftestReport> {
    let scratch = cfg.output_dir.join("selftest");
    std::fs::create_dir_all(&scratch).map_err(|e| Error::io(&scratch, e))?;
    let cst_cfg = ExperimentConfig {
        experiment: Experiment::CstCheck,
        mc_batches: 8,
        mc_batch_size: 20_000,
        master_seed: cfg.master_seed,
        ..ExperimentConfig::default()
    };
    let cst = run_cst_check(&cst_cfg)?;
    let checks = vec![
        oracle_check(cfg.master_seed)?,
        gauss_lucas_vieta_check(cfg.master_seed.wrapping_add(1))?,
        SelftestCheck {
            name: "cauchy_stieltjes",
            passed: cst.passed,
            detail: "closed forms vs tables, Monte Carlo and log-Lipschitz".into(),
        },
        pairing_check(cfg)?,
        reproducibility_check(cfg, &scratch)?,
    ];
    let mut summary = Summary::default();
    for c in &checks {
        summary.push_bool(c.name, c.passed);
        summary.push(format!("{}_detail", c.name), c.detail.clone());
    }
    summary.push_bool("overall", checks.iter().all(|c| c.passed));
    Ok(SelftestReport { checks, summary })
}
