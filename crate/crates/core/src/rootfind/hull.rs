use crate::polycore::ComplexScalar;

fn cross(o: ComplexScalar, a: ComplexScalar, b: ComplexScalar) -> f64 {
    (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
}

/// Convex hull by Andrew's monotone chain, counter-clockwise, collinear
/// points dropped. Degenerate inputs give one or two vertices.
pub fn convex_hull(points: &[ComplexScalar]) -> Vec<ComplexScalar> {
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let mut hull: Vec<ComplexScalar> = Vec::with_capacity(2 * pts.len());
    for &p in &pts {
        while hull.len() >= 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    let lower_len = hull.len() + 1;
    for &p in pts.iter().rev().skip(1) {
        while hull.len() >= lower_len && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
            hull.pop();
        }
        hull.push(p);
    }
    hull.pop();
    hull
}

fn segment_distance(q: ComplexScalar, a: ComplexScalar, b: ComplexScalar) -> f64 {
    let ab = b - a;
    let len2 = ab.norm_sqr();
    if len2 == 0.0 {
        return (q - a).norm();
    }
    let t = (((q - a) * ab.conj()).re / len2).clamp(0.0, 1.0);
    (q - (a + ab * t)).norm()
}

/// Whether `q` lies within `slack` of the convex hull of `points`.
pub fn convex_hull_contains(points: &[ComplexScalar], q: ComplexScalar, slack: f64) -> bool {
    let hull = convex_hull(points);
    match hull.len() {
        0 => false,
        1 => (q - hull[0]).norm() <= slack,
        2 => segment_distance(q, hull[0], hull[1]) <= slack,
        n => {
            let inside = (0..n).all(|i| cross(hull[i], hull[(i + 1) % n], q) >= 0.0);
            inside
                || (0..n).any(|i| segment_distance(q, hull[i], hull[(i + 1) % n]) <= slack)
        }
    }
}
