use rayon::prelude::*;

use super::RootFindReport;
use crate::error::{Error, Result};
use crate::polycore::{CoeffFormPoly, ComplexScalar, RootFormPoly};

/// Fixed phase of the fallback starting circle.
const RESTART_PHASE: f64 = 0.376;
/// Below this many points the sweep runs serially.
const PAR_THRESHOLD: usize = 256;

/// Jacobi-style Aberth-Ehrlich sweeps. `correction(z)` returns the Newton
/// correction `q(z)/q'(z)` of the target function `q`. Converged points are
/// frozen. Returns the number of sweeps and per-point convergence flags.
fn aberth_sweeps<F>(
    points: &mut Vec<ComplexScalar>,
    correction: F,
    tol: f64,
    max_iter: usize,
) -> (usize, Vec<bool>)
where
    F: Fn(ComplexScalar) -> Result<ComplexScalar> + Sync,
{
    let n = points.len();
    let mut converged = vec![false; n];
    let mut sweeps = 0;
    while sweeps < max_iter && converged.iter().any(|&c| !c) {
        sweeps += 1;
        let current = &*points;
        let update = |i: usize| -> (ComplexScalar, bool) {
            let z = current[i];
            if converged[i] {
                return (z, true);
            }
            let mut repulsion = ComplexScalar::new(0.0, 0.0);
            let mut nearest = f64::INFINITY;
            for (j, &other) in current.iter().enumerate() {
                if j != i {
                    let d = z - other;
                    nearest = nearest.min(d.norm());
                    repulsion += d.inv();
                }
            }
            let w = match correction(z) {
                Ok(w) if w.re.is_finite() && w.im.is_finite() => w,
                // landed on a singularity of the evaluation; nudge off it
                _ => {
                    let nudge = 1e-8 * (1.0 + z.norm());
                    return (z + ComplexScalar::new(nudge, nudge), false);
                }
            };
            let denom = ComplexScalar::new(1.0, 0.0) - w * repulsion;
            let mut step = if denom.norm() == 0.0 { w } else { w / denom };
            if !(step.re.is_finite() && step.im.is_finite()) {
                step = w;
            }
            let bound = 0.5 * nearest;
            let len = step.norm();
            let done = len <= tol * (1.0 + z.norm()) && len < bound;
            if len > bound && bound.is_finite() {
                step *= bound / len;
            }
            (z - step, done)
        };
        let next: Vec<(ComplexScalar, bool)> = if n >= PAR_THRESHOLD {
            (0..n).into_par_iter().map(update).collect()
        } else {
            (0..n).map(update).collect()
        };
        for (i, (z, done)) in next.into_iter().enumerate() {
            points[i] = z;
            converged[i] = done;
        }
    }
    (sweeps, converged)
}

fn check_distinct(zeros: &[ComplexScalar]) -> Result<()> {
    let mut order: Vec<usize> = (0..zeros.len()).collect();
    order.sort_by(|&a, &b| zeros[a].re.total_cmp(&zeros[b].re));
    for (pos, &i) in order.iter().enumerate() {
        for &j in &order[pos + 1..] {
            if zeros[j].re - zeros[i].re > 1e-12 {
                break;
            }
            if (zeros[j] - zeros[i]).norm() <= 1e-12 {
                return Err(Error::DuplicateZeros(i.min(j), i.max(j)));
            }
        }
    }
    Ok(())
}

/// Starting points `r_k - 1/hhat_k` with `hhat_k = sum_{j != k} 1/(r_k -
/// r_j)`, i.e. the empirical localization of the critical point paired with
/// `r_k`. The displacement is capped at 0.45 of the distance to the nearest
/// other zero, which keeps seeds distinct and off the zeros. The zero with
/// the smallest `|hhat_k|` gets no seed.
fn paired_seeds(zeros: &[ComplexScalar]) -> Vec<ComplexScalar> {
    let m = zeros.len();
    let mut seeds = Vec::with_capacity(m);
    let mut weakest = (f64::INFINITY, 0);
    for (k, &r) in zeros.iter().enumerate() {
        let mut hhat = ComplexScalar::new(0.0, 0.0);
        let mut nearest = f64::INFINITY;
        for (j, &other) in zeros.iter().enumerate() {
            if j != k {
                hhat += (r - other).inv();
                nearest = nearest.min((r - other).norm());
            }
        }
        if hhat.norm() < weakest.0 {
            weakest = (hhat.norm(), k);
        }
        let mut shift = if hhat.norm() == 0.0 {
            ComplexScalar::new(nearest, 0.0)
        } else {
            hhat.inv()
        };
        let cap = 0.45 * nearest;
        if shift.norm() > cap {
            shift *= cap / shift.norm();
        }
        seeds.push(r - shift);
    }
    seeds.remove(weakest.1);
    seeds
}

/// Two iterates sharing a point: a symmetric start can drive a pair onto
/// one simple root.
fn collapsed(points: &[ComplexScalar]) -> bool {
    let scale = points.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_by(|&a, &b| points[a].re.total_cmp(&points[b].re));
    let eps = 1e-10 * scale;
    order.iter().enumerate().any(|(pos, &i)| {
        order[pos + 1..]
            .iter()
            .take_while(|&&j| points[j].re - points[i].re <= eps)
            .any(|&j| (points[j] - points[i]).norm() <= eps)
    })
}

fn circle_seeds(count: usize, radius: f64) -> Vec<ComplexScalar> {
    (0..count)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / count as f64 + RESTART_PHASE;
            ComplexScalar::from_polar(radius, theta)
        })
        .collect()
}

/// All `m - 1` critical points of a root-form polynomial of degree `m`.
///
/// Aberth-Ehrlich on `p'`, driven entirely by the root form: the Newton
/// correction of `p'` is `h / (h' + h^2)`. If the paired seeds fail to
/// converge within `max_iter` sweeps the iteration restarts once from a
/// circle of radius `1.2 max|r_k|`.
pub fn critical_points_all(p: &RootFormPoly, tol: f64, max_iter: usize) -> Result<RootFindReport> {
    let zeros = p.zeros();
    let m = zeros.len();
    if m < 2 {
        return Err(Error::ConstantPoly);
    }
    check_distinct(zeros)?;

    let correction = |z: ComplexScalar| -> Result<ComplexScalar> {
        let (h, ratio, _) = p.newton_terms(z)?;
        Ok(h / ratio)
    };

    let mut points = paired_seeds(zeros);
    let (mut iterations, mut flags) = aberth_sweeps(&mut points, correction, tol, max_iter);
    if flags.iter().any(|&c| !c) || collapsed(&points) {
        let radius = 1.2 * zeros.iter().map(|z| z.norm()).fold(0.0, f64::max);
        points = circle_seeds(m - 1, radius);
        let (more, f) = aberth_sweeps(&mut points, correction, tol, max_iter);
        iterations += more;
        flags = f;
    }

    let mut max_residual: f64 = 0.0;
    for &z in &points {
        let residual = match p.newton_terms(z) {
            Ok((h, _, scale)) => h.norm() / scale,
            Err(_) => f64::INFINITY,
        };
        max_residual = max_residual.max(residual);
    }
    let report = RootFindReport {
        points,
        iterations,
        max_residual,
        converged_flags: flags,
    };
    if report.all_converged() && !collapsed(&report.points) {
        Ok(report)
    } else {
        Err(Error::AberthNotConverged(Box::new(report)))
    }
}

/// All roots of a coefficient-form polynomial by Aberth-Ehrlich with
/// rescaled Horner evaluation. Starts from a circle whose radius is the
/// geometric mean of the root moduli.
pub fn roots_from_coeffs(p: &CoeffFormPoly, tol: f64, max_iter: usize) -> Result<RootFindReport> {
    let n = p.degree();
    if n == 0 {
        return Err(Error::ConstantPoly);
    }
    let deriv = p.derivative()?;
    let c = p.coeffs();
    let radius = if c[0].norm() == 0.0 {
        1.0
    } else {
        (c[0].norm() / c[n].norm()).powf(1.0 / n as f64)
    };
    let correction = |z: ComplexScalar| Ok(p.newton_ratio(&deriv, z));
    let mut points = circle_seeds(n, radius);
    let (iterations, flags) = aberth_sweeps(&mut points, correction, tol, max_iter);

    let abs_poly = CoeffFormPoly::from_scaled(
        c.iter().map(|x| ComplexScalar::new(x.norm(), 0.0)).collect(),
        p.scale_exp(),
    )?;
    let mut max_residual: f64 = 0.0;
    for &z in &points {
        let (v, ev) = p.horner_eval(z);
        let (a, ea) = abs_poly.horner_eval(ComplexScalar::new(z.norm(), 0.0));
        let residual = if v.norm() == 0.0 {
            0.0
        } else {
            crate::polycore::scale_pow2(v.norm() / a.norm(), ev - ea)
        };
        max_residual = max_residual.max(residual);
    }
    let report = RootFindReport {
        points,
        iterations,
        max_residual,
        converged_flags: flags,
    };
    if report.all_converged() {
        Ok(report)
    } else {
        Err(Error::AberthNotConverged(Box::new(report)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> ComplexScalar {
        ComplexScalar::new(re, im)
    }

    fn real_roots(v: &[f64]) -> RootFormPoly {
        RootFormPoly::new(v.iter().map(|&x| c(x, 0.0)).collect()).unwrap()
    }

    #[test]
    fn mirror_symmetric_seeds_do_not_collapse() {
        let p = RootFormPoly::new(vec![c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)]).unwrap();
        let mut pts = critical_points_all(&p, 1e-14, 500).unwrap().points;
        pts.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((pts[0] - c(0.0, 1.0 / 3.0)).norm() < 1e-12, "{pts:?}");
        assert!((pts[1] - c(0.0, 1.0)).norm() < 1e-12, "{pts:?}");
    }

    fn sorted_re(mut v: Vec<ComplexScalar>) -> Vec<ComplexScalar> {
        v.sort_by(|a, b| a.re.total_cmp(&b.re));
        v
    }

    #[test]
    fn two_zeros_give_midpoint() {
        let r = critical_points_all(&real_roots(&[1.0, -1.0]), 1e-12, 100).unwrap();
        assert_eq!(r.points.len(), 1);
        assert!(r.points[0].norm() < 1e-14);
    }

    #[test]
    fn three_zeros_match_quadratic_formula() {
        let r = critical_points_all(&real_roots(&[0.0, 1.0, 2.0]), 1e-12, 100).unwrap();
        let s = 1.0 / 3f64.sqrt();
        let pts = sorted_re(r.points);
        assert!((pts[0] - c(1.0 - s, 0.0)).norm() < 1e-12);
        assert!((pts[1] - c(1.0 + s, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn duplicate_zeros_are_rejected() {
        let p = real_roots(&[0.3, 1.0, 0.3 + 1e-13]);
        assert!(matches!(
            critical_points_all(&p, 1e-12, 100),
            Err(Error::DuplicateZeros(0, 2))
        ));
    }

    #[test]
    fn degree_one_has_no_critical_points() {
        assert!(matches!(
            critical_points_all(&real_roots(&[0.3]), 1e-12, 100),
            Err(Error::ConstantPoly)
        ));
    }

    #[test]
    fn zero_iterations_reports_flags() {
        match critical_points_all(&real_roots(&[0.0, 1.0, 2.0]), 1e-12, 0) {
            Err(Error::AberthNotConverged(report)) => {
                assert_eq!(report.points.len(), 2);
                assert_eq!(report.converged_flags, vec![false, false]);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn coefficient_roots_small_cases() {
        let p = CoeffFormPoly::from_real(&[-6.0, 11.0, -6.0, 1.0]).unwrap();
        let r = roots_from_coeffs(&p, 1e-13, 200).unwrap();
        let pts = sorted_re(r.points);
        for (z, e) in pts.iter().zip([1.0, 2.0, 3.0]) {
            assert!((z - c(e, 0.0)).norm() < 1e-10, "{pts:?}");
        }
        let p = CoeffFormPoly::from_real(&[1.0, 0.0, 1.0]).unwrap();
        let mut pts = roots_from_coeffs(&p, 1e-13, 200).unwrap().points;
        pts.sort_by(|a, b| a.im.total_cmp(&b.im));
        assert!((pts[0] - c(0.0, -1.0)).norm() < 1e-12);
        assert!((pts[1] - c(0.0, 1.0)).norm() < 1e-12);
    }

    #[test]
    fn seeds_are_distinct_and_off_the_zeros() {
        let zeros: Vec<ComplexScalar> = (0..40)
            .map(|k| ComplexScalar::from_polar(0.3 + 0.01 * k as f64, 2.3 * k as f64))
            .collect();
        let seeds = paired_seeds(&zeros);
        assert_eq!(seeds.len(), 39);
        for (i, a) in seeds.iter().enumerate() {
            for b in &seeds[i + 1..] {
                assert!((a - b).norm() > 0.0);
            }
            for z in &zeros {
                assert!((a - z).norm() > 0.0);
            }
        }
    }
}
