use std::f64::consts::TAU;

use crate::cst::{cst_gaussian, cst_monte_carlo, cst_radial, cst_uniform_disk, log_lipschitz_ratio};
use crate::ensembles::{sample_uniform_disk, CdfTable, SeededRng};
use crate::error::Result;
use crate::polycore::ComplexScalar;

use super::config::ExperimentConfig;
use super::output::Summary;

pub const TABLE_ROWS: usize = 1024;
pub const TABLE_TOL: f64 = 1e-3;
pub const GRID_POINTS: usize = 50;
pub const MC_SPREADS: f64 = 5.0;
pub const LIPSCHITZ_BOUND: f64 = 10.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CstCheck {
    pub summary: Summary,
    pub passed: bool,
}

/// `GRID_POINTS` test points with radii in `(0, 3]` and spread angles.
pub fn check_grid() -> Vec<ComplexScalar> {
    (0..GRID_POINTS)
        .map(|i| {
            let t = (i as f64 + 0.5) / GRID_POINTS as f64;
            ComplexScalar::from_polar(3.0 * t, TAU * 0.618_033_988_749_895 * i as f64)
        })
        .collect()
}

/// Radii `10^-6 .. 0.49` on a log scale, 8 angles each.
pub fn lipschitz_grid() -> Vec<ComplexScalar> {
    let radii = 60;
    let (lo, hi) = (1e-6f64.ln(), 0.49f64.ln());
    (0..radii)
        .flat_map(|i| {
            let r = (lo + (hi - lo) * i as f64 / (radii - 1) as f64).exp();
            (0..8).map(move |k| ComplexScalar::from_polar(r, TAU * (k as f64 + 0.25) / 8.0))
        })
        .collect()
}

/// Closed forms against radial tables and Monte Carlo, plus the
/// log-Lipschitz bound near the origin.
pub fn run_cst_check(cfg: &ExperimentConfig) -> Result<CstCheck> {
    let mut s = Summary::default();
    let mut passed = true;

    let disk = CdfTable::uniform_disk(TABLE_ROWS)?;
    let gauss = CdfTable::std_complex_gaussian(TABLE_ROWS)?;
    let grid = check_grid();
    let err_disk = grid
        .iter()
        .map(|&z| (cst_uniform_disk(z) - cst_radial(&disk, z)).norm())
        .fold(0.0, f64::max);
    let err_gauss = grid
        .iter()
        .map(|&z| (cst_gaussian(z) - cst_radial(&gauss, z)).norm())
        .fold(0.0, f64::max);
    for (name, err) in [("uniform_disk", err_disk), ("gaussian", err_gauss)] {
        s.push_f64(format!("table_max_error_{name}"), err);
        s.push_bool(format!("table_check_{name}"), err <= TABLE_TOL);
        passed &= err <= TABLE_TOL;
    }
    s.push_f64("gaussian_at_1", cst_gaussian(ComplexScalar::new(1.0, 0.0)).re);

    for (i, re) in [0.5, 2.0].into_iter().enumerate() {
        let z = ComplexScalar::new(re, 0.0);
        let mut rng = SeededRng::for_trial(cfg.master_seed, i as u64);
        let (est, spread) = cst_monte_carlo(sample_uniform_disk, z, cfg.mc_batches, cfg.mc_batch_size, &mut rng)?;
        let err = (est - cst_uniform_disk(z)).norm();
        let ok = err <= MC_SPREADS * spread;
        s.push_f64(format!("mc_estimate_re_z{re}"), est.re);
        s.push_f64(format!("mc_estimate_im_z{re}"), est.im);
        s.push_f64(format!("mc_error_z{re}"), err);
        s.push_f64(format!("mc_spread_z{re}"), spread);
        s.push_bool(format!("mc_check_z{re}"), ok);
        passed &= ok;
    }

    let lip = lipschitz_grid();
    type Transform = fn(ComplexScalar) -> ComplexScalar;
    let transforms: [(&str, Transform); 2] =
        [("uniform_disk", cst_uniform_disk), ("gaussian", cst_gaussian)];
    for (name, f) in transforms {
        let mut worst = 0.0f64;
        for &z in &lip {
            worst = worst.max(log_lipschitz_ratio(f, z)?);
        }
        s.push_f64(format!("lipschitz_max_{name}"), worst);
        s.push_bool(format!("lipschitz_check_{name}"), worst <= LIPSCHITZ_BOUND);
        passed &= worst <= LIPSCHITZ_BOUND;
    }
    s.push_bool("overall", passed);
    Ok(CstCheck { summary: s, passed })
}
