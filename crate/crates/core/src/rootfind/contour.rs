use crate::error::{Error, Result};
use crate::polycore::{ComplexScalar, RootFormPoly};

pub const DEFAULT_CONTOUR_NODES: usize = 512;

/// Largest distance of the quadrature value from an integer that is still
/// rounded.
const WINDING_SLACK: f64 = 0.1;

/// Trapezoidal value of `(1/2 pi i) \oint h'/h dz` on the circle.
fn winding(p: &RootFormPoly, center: ComplexScalar, radius: f64, nodes: usize) -> Result<ComplexScalar> {
    let guard = 1e-6 * radius;
    let mut acc = ComplexScalar::new(0.0, 0.0);
    for j in 0..nodes {
        let offset = ComplexScalar::from_polar(radius, std::f64::consts::TAU * j as f64 / nodes as f64);
        let z = center + offset;
        let nearest = p
            .zeros()
            .iter()
            .map(|&r| (z - r).norm())
            .fold(f64::INFINITY, f64::min);
        if nearest < guard {
            return Err(Error::ContourTooClose { distance: nearest });
        }
        let (h, hp) = p.log_derivative_pair(z)?;
        // Newton distance |h/h'| estimates how far the nearest zero of h is
        let newton_distance = h.norm() / hp.norm();
        if newton_distance < guard {
            return Err(Error::ContourTooClose {
                distance: newton_distance,
            });
        }
        // dz = i (z - center) dtheta
        acc += hp / h * offset;
    }
    Ok(acc / nodes as f64)
}

fn count_once(p: &RootFormPoly, center: ComplexScalar, radius: f64, nodes: usize) -> Result<usize> {
    let value = winding(p, center, radius, nodes)?;
    let rounded = value.re.round();
    let residual = (value - ComplexScalar::new(rounded, 0.0)).norm();
    if residual > WINDING_SLACK || !residual.is_finite() {
        return Err(Error::NonIntegerWinding { value: value.re });
    }
    let poles = p
        .zeros()
        .iter()
        .filter(|&&r| (r - center).norm() < radius)
        .count() as i64;
    let count = rounded as i64 + poles;
    if count < 0 {
        return Err(Error::NonIntegerWinding { value: value.re });
    }
    Ok(count as usize)
}

/// Number of critical points of `p` in the open disk `|z - center| < radius`,
/// by the argument principle applied to `h = p'/p`: the winding number of
/// `h` counts zeros minus poles of `h`, and the poles are the zeros of `p`
/// inside the disk. The node count is doubled once if the quadrature does
/// not land near an integer.
pub fn count_critical_in_disk(
    p: &RootFormPoly,
    center: ComplexScalar,
    radius: f64,
    nodes: usize,
) -> Result<usize> {
    if !(radius > 0.0 && radius.is_finite()) || nodes < 3 {
        return Err(Error::OutOfRange(format!(
            "contour radius {radius} with {nodes} nodes"
        )));
    }
    match count_once(p, center, radius, nodes) {
        Err(Error::NonIntegerWinding { .. }) => count_once(p, center, radius, 2 * nodes),
        other => other,
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
    fn examples() {
        let p = real_roots(&[1.0, -1.0]);
        assert_eq!(count_critical_in_disk(&p, c(0.0, 0.0), 0.5, 512).unwrap(), 1);
        assert_eq!(count_critical_in_disk(&p, c(0.3, 0.0), 0.1, 512).unwrap(), 0);
        let p = real_roots(&[0.0, 1.0, 2.0]);
        assert_eq!(count_critical_in_disk(&p, c(1.0, 0.0), 0.7, 512).unwrap(), 2);
    }

    #[test]
    fn disk_around_a_single_zero_without_critical_point() {
        // zero at 0 is inside; h has a pole there but no zero
        let p = real_roots(&[0.0, 1.0]);
        assert_eq!(count_critical_in_disk(&p, c(0.0, 0.0), 0.2, 512).unwrap(), 0);
    }

    #[test]
    fn contour_through_a_zero() {
        let p = real_roots(&[1.0, -1.0]);
        assert!(matches!(
            count_critical_in_disk(&p, c(0.0, 0.0), 1.0, 512),
            Err(Error::ContourTooClose { .. })
        ));
    }

    #[test]
    fn contour_through_a_critical_point() {
        let p = real_roots(&[1.0, -1.0]);
        assert!(matches!(
            count_critical_in_disk(&p, c(0.5, 0.0), 0.5, 512),
            Err(Error::ContourTooClose { .. })
        ));
    }

    #[test]
    fn too_few_nodes_is_not_an_integer() {
        // a zero of p close to the contour makes the 4-node rule useless
        let p = real_roots(&[0.0, 0.95, -3.0]);
        assert!(matches!(
            count_critical_in_disk(&p, c(0.0, 0.0), 1.0, 4),
            Err(Error::NonIntegerWinding { .. })
        ));
    }
}
