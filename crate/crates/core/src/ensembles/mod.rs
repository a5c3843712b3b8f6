//! Seeded samplers for the three random-polynomial models: i.i.d. zeros,
//! Weyl polynomials and characteristic polynomials of Ginibre matrices.

mod radial;
mod rng;

pub use radial::{CdfTable, RadialCdf};
pub use rng::{splitmix_finalize, trial_seed, SeededRng, GOLDEN_GAMMA};

use std::f64::consts::{FRAC_1_PI, TAU};

use serde::{Deserialize, Serialize};

use crate::cst;
use crate::error::{Error, Result};
use crate::polycore::{CoeffFormPoly, ComplexScalar, RootFormPoly};
use crate::rootfind::{eigen_qr, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EnsembleKind {
    IidZeros,
    Weyl,
    GinibreCharPoly,
}

/// Law of the i.i.d. zeros.
#[derive(Debug, Clone, PartialEq)]
pub enum Density {
    UniformDisk,
    StdComplexGaussian,
    Radial(CdfTable),
}

impl Density {
    pub fn sample(&self, rng: &mut SeededRng) -> ComplexScalar {
        match self {
            Density::UniformDisk => sample_uniform_disk(rng),
            Density::StdComplexGaussian => sample_complex_normal(rng, 1.0),
            Density::Radial(table) => {
                let u = rng.next_f64();
                let theta = TAU * rng.next_f64();
                ComplexScalar::from_polar(table.inverse(u), theta)
            }
        }
    }

    /// Cauchy-Stieltjes transform `E[1/(z - xi)]`.
    pub fn transform(&self, z: ComplexScalar) -> ComplexScalar {
        match self {
            Density::UniformDisk => cst::cst_uniform_disk(z),
            Density::StdComplexGaussian => cst::cst_gaussian(z),
            Density::Radial(table) => cst::cst_radial(table, z),
        }
    }

    /// Lebesgue density at `z`.
    pub fn density_at(&self, z: ComplexScalar) -> f64 {
        match self {
            Density::UniformDisk if z.norm() < 1.0 => FRAC_1_PI,
            Density::UniformDisk => 0.0,
            Density::StdComplexGaussian => FRAC_1_PI * (-z.norm_sqr()).exp(),
            Density::Radial(table) => table.density_at_radius(z.norm()),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Density::UniformDisk => "uniform-disk",
            Density::StdComplexGaussian => "std-complex-gaussian",
            Density::Radial(_) => "radial",
        }
    }
}

/// Law of Weyl coefficients `X_k` and Ginibre entries `a_ij`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryLaw {
    /// Standard complex normal `N_C(0, 1)`.
    #[default]
    ComplexGaussian,
    /// `(+-1 +- i)/sqrt(2)` with independent signs; mean 0, variance 1.
    ComplexRademacher,
}

impl EntryLaw {
    pub fn sample(self, rng: &mut SeededRng) -> ComplexScalar {
        match self {
            EntryLaw::ComplexGaussian => sample_complex_normal(rng, 1.0),
            EntryLaw::ComplexRademacher => {
                let bits = rng.next_u64();
                let s = std::f64::consts::FRAC_1_SQRT_2;
                let re = if bits & 1 == 0 { s } else { -s };
                let im = if bits & 2 == 0 { s } else { -s };
                ComplexScalar::new(re, im)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleSpec {
    pub kind: EnsembleKind,
    pub n: usize,
    /// Only used by [`EnsembleKind::IidZeros`].
    pub density: Density,
    pub entry_law: EntryLaw,
    pub seed: u64,
}

impl EnsembleSpec {
    pub fn new(kind: EnsembleKind, n: usize, seed: u64) -> Self {
        Self {
            kind,
            n,
            density: Density::UniformDisk,
            entry_law: EntryLaw::ComplexGaussian,
            seed,
        }
    }

    pub fn with_density(mut self, density: Density) -> Self {
        self.density = density;
        self
    }

    fn expect_kind(&self, kind: EnsembleKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::Config(format!(
                "sampler for {kind:?} called with a {:?} spec",
                self.kind
            )));
        }
        Ok(())
    }
}

/// Uniform point on the unit disk from two uniforms: `sqrt(u1) e^{2 pi i u2}`.
pub fn uniform_disk_from_uniforms(u1: f64, u2: f64) -> ComplexScalar {
    ComplexScalar::from_polar(u1.sqrt(), TAU * u2)
}

pub fn sample_uniform_disk(rng: &mut SeededRng) -> ComplexScalar {
    let u1 = rng.next_f64();
    let u2 = rng.next_f64();
    uniform_disk_from_uniforms(u1, u2)
}

/// `N_C(0, variance)` by Box-Muller: real and imaginary parts are
/// independent `N(0, variance/2)`.
pub fn sample_complex_normal(rng: &mut SeededRng, variance: f64) -> ComplexScalar {
    let u1 = rng.next_f64_open0();
    let u2 = rng.next_f64();
    if variance == 0.0 {
        return ComplexScalar::new(0.0, 0.0);
    }
    ComplexScalar::from_polar((-variance * u1.ln()).sqrt(), TAU * u2)
}

pub fn sample_iid_zero_poly(spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<RootFormPoly> {
    spec.expect_kind(EnsembleKind::IidZeros)?;
    RootFormPoly::new((0..spec.n).map(|_| spec.density.sample(rng)).collect())
}

/// `(k/2) log n - (1/2) log k!` for `k = 0..=n`, with `log k!` accumulated.
pub fn weyl_log_weights(n: usize) -> Vec<f64> {
    let log_n = (n as f64).ln();
    let mut log_fact = 0.0;
    (0..=n)
        .map(|k| {
            if k > 0 {
                log_fact += (k as f64).ln();
            }
            0.5 * k as f64 * log_n - 0.5 * log_fact
        })
        .collect()
}

/// `sum_k X_k (z sqrt n)^k / sqrt(k!)`, coefficients built in log space
/// relative to the largest weight.
pub fn sample_weyl_poly(spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<CoeffFormPoly> {
    spec.expect_kind(EnsembleKind::Weyl)?;
    let weights = weyl_log_weights(spec.n);
    let top = weights.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let shift = (top / std::f64::consts::LN_2).floor() as i32;
    let base = shift as f64 * std::f64::consts::LN_2;
    let coeffs = weights
        .iter()
        .map(|&w| spec.entry_law.sample(rng) * (w - base).exp())
        .collect();
    CoeffFormPoly::from_scaled(coeffs, shift)
}

/// Zeros of `det(A - z sqrt(n))`: the eigenvalues of `A` divided by `sqrt n`.
pub fn ginibre_zeros_from_matrix(a: &ComplexMatrix) -> Result<RootFormPoly> {
    let scale = (a.dim() as f64).sqrt();
    let eig = eigen_qr(a)?;
    RootFormPoly::new(eig.into_iter().map(|l| l / scale).collect())
}

pub fn sample_ginibre_matrix(n: usize, law: EntryLaw, rng: &mut SeededRng) -> ComplexMatrix {
    ComplexMatrix::from_fn(n, |_, _| law.sample(rng))
}

pub fn sample_ginibre_zeros(spec: &EnsembleSpec, rng: &mut SeededRng) -> Result<RootFormPoly> {
    spec.expect_kind(EnsembleKind::GinibreCharPoly)?;
    let a = sample_ginibre_matrix(spec.n, spec.entry_law, rng);
    ginibre_zeros_from_matrix(&a)
}
