use crate::error::{Error, Result};
use crate::polycore::{ComplexScalar, RootFormPoly};

/// Newton's method on `h = p'/p` from `seed`, confined to the disk of radius
/// `trust_radius` around the seed.
///
/// Each step is capped at half the distance from the current iterate to the
/// nearest zero of `p`, so the iterate never jumps across a pole of `h`.
pub fn newton_local_critical(
    p: &RootFormPoly,
    seed: ComplexScalar,
    tol: f64,
    max_iter: usize,
    trust_radius: f64,
) -> Result<ComplexScalar> {
    let mut z = seed;
    for _ in 0..max_iter {
        let (h, hp) = p.log_derivative_pair(z)?;
        let mut step = h / hp;
        if !(step.re.is_finite() && step.im.is_finite()) {
            return Err(Error::NotConverged { iterations: max_iter });
        }
        let nearest = p
            .zeros()
            .iter()
            .map(|&r| (z - r).norm())
            .fold(f64::INFINITY, f64::min);
        let len = step.norm();
        if len > 0.5 * nearest {
            step *= 0.5 * nearest / len;
        }
        z -= step;
        if (z - seed).norm() > trust_radius {
            return Err(Error::LeftTrustRegion {
                radius: trust_radius,
            });
        }
        if len <= tol * (1.0 + z.norm()) {
            return Ok(z);
        }
    }
    Err(Error::NotConverged {
        iterations: max_iter,
    })
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
    fn midpoint_of_two_zeros() {
        let z = newton_local_critical(&real_roots(&[0.0, 1.0]), c(0.4, 0.0), 1e-14, 50, 0.5).unwrap();
        assert!((z - c(0.5, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn symmetric_pair() {
        let z = newton_local_critical(&real_roots(&[1.0, -1.0]), c(0.3, 0.0), 1e-14, 50, 1.0).unwrap();
        assert!(z.norm() < 1e-14);
    }

    #[test]
    fn three_zeros() {
        let z = newton_local_critical(&real_roots(&[0.0, 1.0, 2.0]), c(0.4, 0.0), 1e-14, 50, 0.5)
            .unwrap();
        assert!((z - c(1.0 - 1.0 / 3f64.sqrt(), 0.0)).norm() < 1e-13);
    }

    #[test]
    fn trust_region_violation() {
        let r = newton_local_critical(&real_roots(&[0.0, 1.0]), c(0.3, 0.0), 1e-14, 50, 0.05);
        assert!(matches!(r, Err(Error::LeftTrustRegion { .. })));
    }

    #[test]
    fn pole_at_seed() {
        let r = newton_local_critical(&real_roots(&[0.0, 1.0]), c(1.0, 0.0), 1e-14, 50, 0.5);
        assert!(matches!(r, Err(Error::PoleHit { index: 1 })));
    }

    #[test]
    fn iteration_budget_exhausted() {
        let r = newton_local_critical(&real_roots(&[0.0, 1.0]), c(0.4, 0.1), 1e-14, 1, 0.5);
        assert!(matches!(r, Err(Error::NotConverged { iterations: 1 })));
    }
}
