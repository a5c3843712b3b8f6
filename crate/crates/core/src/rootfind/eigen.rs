//! Dense complex eigenvalues: one balancing pass, Householder reduction to
//! upper Hessenberg form, then implicit single-shift QR with Wilkinson
//! shifts and deflation.

use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::polycore::{CoeffFormPoly, ComplexScalar, MAX_EXPAND_DEGREE};

pub const MAX_EIGEN_DIM: usize = 1024;
const BALANCE_SWEEPS: usize = 50;

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<ComplexScalar>,
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ComplexScalar::new(0.0, 0.0); dim * dim],
        }
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> ComplexScalar) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    pub fn from_rows(rows: &[Vec<ComplexScalar>]) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::BadMatrix {
                rows: dim,
                cols: bad.len(),
            });
        }
        Ok(Self {
            dim,
            data: rows.concat(),
        })
    }

    pub fn diagonal(values: &[ComplexScalar]) -> Self {
        Self::from_fn(values.len(), |i, j| {
            if i == j {
                values[i]
            } else {
                ComplexScalar::new(0.0, 0.0)
            }
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn trace(&self) -> ComplexScalar {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn mul(&self, other: &Self) -> Self {
        let n = self.dim;
        Self::from_fn(n, |i, j| (0..n).map(|k| self[(i, k)] * other[(k, j)]).sum())
    }

    fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = ComplexScalar;

    fn index(&self, (i, j): (usize, usize)) -> &ComplexScalar {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut ComplexScalar {
        &mut self.data[i * self.dim + j]
    }
}

/// Power-of-two diagonal scaling, swept until no row changes; the
/// sweeps compose into one similarity `D^-1 A D`.
fn balance(h: &mut ComplexMatrix) {
    for _ in 0..BALANCE_SWEEPS {
        if !balance_sweep(h) {
            break;
        }
    }
}

fn balance_sweep(h: &mut ComplexMatrix) -> bool {
    let n = h.dim;
    let mut changed = false;
    for i in 0..n {
        let mut col = 0.0;
        let mut row = 0.0;
        for j in 0..n {
            if j != i {
                col += h[(j, i)].norm();
                row += h[(i, j)].norm();
            }
        }
        if col == 0.0 || row == 0.0 {
            continue;
        }
        let f = 2f64.powi((0.5 * (row / col).log2()).round() as i32);
        if col * f + row / f < 0.95 * (col + row) {
            for j in 0..n {
                h[(j, i)] *= f;
                h[(i, j)] /= f;
            }
            changed = true;
        }
    }
    changed
}

fn hessenberg(h: &mut ComplexMatrix) {
    let n = h.dim;
    for k in 0..n.saturating_sub(2) {
        let norm: f64 = (k + 1..n).map(|i| h[(i, k)].norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 {
            continue;
        }
        let x0 = h[(k + 1, k)];
        let unit = if x0.norm() == 0.0 {
            ComplexScalar::new(1.0, 0.0)
        } else {
            x0 / x0.norm()
        };
        let alpha = -unit * norm;
        let mut v: Vec<ComplexScalar> = (k + 1..n).map(|i| h[(i, k)]).collect();
        v[0] -= alpha;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if vnorm == 0.0 {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // H <- (I - 2vv^H) H
        for j in k..n {
            let dot: ComplexScalar = v.iter().enumerate().map(|(a, vi)| vi.conj() * h[(k + 1 + a, j)]).sum();
            for (a, vi) in v.iter().enumerate() {
                h[(k + 1 + a, j)] -= 2.0 * vi * dot;
            }
        }
        // H <- H (I - 2vv^H)
        for i in 0..n {
            let dot: ComplexScalar = v.iter().enumerate().map(|(a, vi)| h[(i, k + 1 + a)] * vi).sum();
            for (a, vi) in v.iter().enumerate() {
                h[(i, k + 1 + a)] -= 2.0 * dot * vi.conj();
            }
        }
        h[(k + 1, k)] = alpha;
        for i in k + 2..n {
            h[(i, k)] = ComplexScalar::new(0.0, 0.0);
        }
    }
}

/// Rotation `G = [[c, s], [-conj(s), c]]` with real `c` such that
/// `G [a; b] = [r; 0]`.
fn givens(a: ComplexScalar, b: ComplexScalar) -> (f64, ComplexScalar, ComplexScalar) {
    let na = a.norm();
    let nb = b.norm();
    if nb == 0.0 {
        return (1.0, ComplexScalar::new(0.0, 0.0), a);
    }
    if na == 0.0 {
        return (0.0, ComplexScalar::new(1.0, 0.0), b);
    }
    let nrm = na.hypot(nb);
    let unit = a / na;
    let c = na / nrm;
    let s = unit * b.conj() / nrm;
    (c, s, unit * nrm)
}

fn wilkinson_shift(a: ComplexScalar, b: ComplexScalar, c: ComplexScalar, d: ComplexScalar) -> ComplexScalar {
    let t = (a - d) * 0.5;
    let bc = b * c;
    let mut disc = (t * t + bc).sqrt();
    if (t.conj() * disc).re < 0.0 {
        disc = -disc;
    }
    let denom = t + disc;
    if denom.norm() == 0.0 {
        d
    } else {
        d - bc / denom
    }
}

/// One implicit single-shift QR sweep on the active block `lo..=hi`.
fn qr_sweep(h: &mut ComplexMatrix, lo: usize, hi: usize, shift: ComplexScalar) {
    for k in lo..hi {
        let (x, y) = if k == lo {
            (h[(lo, lo)] - shift, h[(lo + 1, lo)])
        } else {
            (h[(k, k - 1)], h[(k + 1, k - 1)])
        };
        let (c, s, r) = givens(x, y);
        if k > lo {
            h[(k, k - 1)] = r;
            h[(k + 1, k - 1)] = ComplexScalar::new(0.0, 0.0);
        }
        for j in k..=hi {
            let u = h[(k, j)];
            let v = h[(k + 1, j)];
            h[(k, j)] = c * u + s * v;
            h[(k + 1, j)] = -s.conj() * u + c * v;
        }
        for i in lo..=(k + 2).min(hi) {
            let u = h[(i, k)];
            let v = h[(i, k + 1)];
            h[(i, k)] = u * c + v * s.conj();
            h[(i, k + 1)] = -u * s + v * c;
        }
    }
}

/// All eigenvalues of a dense complex matrix of dimension `1..=1024`.
///
/// Fails with [`Error::NoConvergence`] after `30 * dim` QR sweeps, and with
/// [`Error::TraceMismatch`] if `|sum(lambda) - tr A| > 1e-8 * dim * max|A_ij|`.
pub fn eigen_qr(a: &ComplexMatrix) -> Result<Vec<ComplexScalar>> {
    let n = a.dim();
    if n == 0 || n > MAX_EIGEN_DIM {
        return Err(Error::BadMatrix { rows: n, cols: n });
    }
    if a.data.iter().any(|z| !(z.re.is_finite() && z.im.is_finite())) {
        return Err(Error::NonFinite("matrix entries"));
    }
    let mut h = a.clone();
    balance(&mut h);
    hessenberg(&mut h);

    let mut eig = vec![ComplexScalar::new(0.0, 0.0); n];
    let limit = 30 * n;
    let mut sweeps = 0;
    let mut since_deflation = 0;
    let mut hi = n - 1;
    while hi > 0 {
        let mut lo = hi;
        while lo > 0 {
            let sub = h[(lo, lo - 1)].norm();
            let diag = h[(lo - 1, lo - 1)].norm() + h[(lo, lo)].norm();
            if sub <= f64::EPSILON * diag || sub < f64::MIN_POSITIVE {
                h[(lo, lo - 1)] = ComplexScalar::new(0.0, 0.0);
                break;
            }
            lo -= 1;
        }
        if lo == hi {
            eig[hi] = h[(hi, hi)];
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        sweeps += 1;
        if sweeps > limit {
            return Err(Error::NoConvergence { sweeps: limit });
        }
        since_deflation += 1;
        let shift = if since_deflation % 10 == 0 {
            h[(hi, hi)] + 0.75 * h[(hi, hi - 1)].re.abs()
        } else {
            wilkinson_shift(h[(hi - 1, hi - 1)], h[(hi - 1, hi)], h[(hi, hi - 1)], h[(hi, hi)])
        };
        qr_sweep(&mut h, lo, hi, shift);
    }
    eig[0] = h[(0, 0)];

    let residual = (eig.iter().sum::<ComplexScalar>() - a.trace()).norm();
    let bound = 1e-8 * n as f64 * a.max_abs();
    if residual > bound {
        return Err(Error::TraceMismatch { residual, bound });
    }
    Ok(eig)
}

/// Roots of a coefficient-form polynomial as eigenvalues of its companion
/// matrix. Independent of the Aberth path; used as a cross-check.
pub fn companion_oracle_roots(p: &CoeffFormPoly) -> Result<Vec<ComplexScalar>> {
    let m = p.degree();
    if m == 0 {
        return Err(Error::ConstantPoly);
    }
    if m > MAX_EXPAND_DEGREE {
        return Err(Error::DegreeTooLarge {
            degree: m,
            max: MAX_EXPAND_DEGREE,
        });
    }
    let c = p.coeffs();
    let lead = c[m];
    let companion = ComplexMatrix::from_fn(m, |i, j| {
        if j == m - 1 {
            -c[i] / lead
        } else if i == j + 1 {
            ComplexScalar::new(1.0, 0.0)
        } else {
            ComplexScalar::new(0.0, 0.0)
        }
    });
    eigen_qr(&companion)
}
