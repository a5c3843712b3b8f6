//! Critical points: all of them at once, one of them locally, and certified
//! counts inside disks. Also hosts the dense eigensolver used for the
//! companion-matrix oracle and for Ginibre spectra.

mod aberth;
mod contour;
mod eigen;
mod hull;
mod newton;

pub use aberth::{critical_points_all, roots_from_coeffs};
pub use contour::{count_critical_in_disk, DEFAULT_CONTOUR_NODES};
pub use eigen::{companion_oracle_roots, eigen_qr, ComplexMatrix, MAX_EIGEN_DIM};
pub use hull::{convex_hull, convex_hull_contains};
pub use newton::newton_local_critical;

use crate::polycore::ComplexScalar;

/// Output of a simultaneous root finder.
#[derive(Debug, Clone, PartialEq)]
pub struct RootFindReport {
    pub points: Vec<ComplexScalar>,
    /// Total sweeps, including any restart.
    pub iterations: usize,
    /// Largest relative residual over the returned points: `|h(z)| / sum_k
    /// |1/(z - r_k)|` for critical points, `|p(z)| / sum_k |c_k z^k|` for
    /// coefficient-form roots.
    pub max_residual: f64,
    pub converged_flags: Vec<bool>,
}

impl RootFindReport {
    pub fn all_converged(&self) -> bool {
        self.converged_flags.iter().all(|&c| c)
    }
}
