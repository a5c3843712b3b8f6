//! Polynomial representations and overflow-safe evaluation.
//!
//! Root-form polynomials are the workhorse: every large-degree quantity is
//! computed from the zero list through the logarithmic derivative
//! `h(z) = p'(z)/p(z) = sum_k 1/(z - r_k)`. Coefficient-form polynomials
//! exist for Weyl polynomials and for small-degree oracles.

use num_complex::Complex64;

use crate::error::{Error, Result};

/// The universal numeric token.
pub type ComplexScalar = Complex64;

/// Points closer than this to a zero are treated as poles of `h`.
pub const POLE_RADIUS: f64 = 1e-300;

/// Largest degree accepted by [`RootFormPoly::expand`].
pub const MAX_EXPAND_DEGREE: usize = 64;

const HORNER_HI: f64 = 1.340_780_792_994_259_7e154; // 2^512
const HORNER_LO: f64 = 7.458_340_731_200_207e-155; // 2^-512

/// Multiply `x` by `2^k` without overflowing the intermediate power.
pub fn scale_pow2(x: f64, k: i32) -> f64 {
    let mut x = x;
    let mut k = k;
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k)
}

fn scale_c(z: ComplexScalar, k: i32) -> ComplexScalar {
    ComplexScalar::new(scale_pow2(z.re, k), scale_pow2(z.im, k))
}

fn is_finite(z: ComplexScalar) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// `p(z)` in polar-log form: `p(z) = exp(log_modulus) * phase`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogValue {
    pub log_modulus: f64,
    pub phase: ComplexScalar,
}

/// Monic polynomial `prod_k (z - zeros[k])`.
#[derive(Debug, Clone, PartialEq)]
pub struct RootFormPoly {
    zeros: Vec<ComplexScalar>,
}

impl RootFormPoly {
    pub fn new(zeros: Vec<ComplexScalar>) -> Result<Self> {
        if zeros.is_empty() {
            return Err(Error::ConstantPoly);
        }
        if !zeros.iter().copied().all(is_finite) {
            return Err(Error::NonFinite("zeros"));
        }
        Ok(Self { zeros })
    }

    pub fn zeros(&self) -> &[ComplexScalar] {
        &self.zeros
    }

    pub fn into_zeros(self) -> Vec<ComplexScalar> {
        self.zeros
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Evaluates by accumulating log-moduli and unit phases factor by factor.
    /// At an exact zero returns `(-inf, 1)`.
    pub fn eval_log_polar(&self, z: ComplexScalar) -> LogValue {
        let mut log_modulus = 0.0;
        let mut phase = ComplexScalar::new(1.0, 0.0);
        for &r in &self.zeros {
            let d = z - r;
            let m = d.norm();
            if m == 0.0 {
                return LogValue {
                    log_modulus: f64::NEG_INFINITY,
                    phase: ComplexScalar::new(1.0, 0.0),
                };
            }
            log_modulus += m.ln();
            phase *= d / m;
            // keep |phase| = 1 against drift over many factors
            phase /= phase.norm();
        }
        LogValue { log_modulus, phase }
    }

    fn pole_check(&self, z: ComplexScalar) -> Result<()> {
        match self.zeros.iter().position(|&r| (z - r).norm() < POLE_RADIUS) {
            Some(index) => Err(Error::PoleHit { index }),
            None => Ok(()),
        }
    }

    fn nearest_index(&self, z: ComplexScalar) -> usize {
        self.zeros
            .iter()
            .enumerate()
            .min_by(|a, b| (z - a.1).norm().total_cmp(&(z - b.1).norm()))
            .map_or(0, |(i, _)| i)
    }

    /// `h(z) = sum_k 1/(z - zeros[k])`, summed in index order.
    pub fn log_derivative(&self, z: ComplexScalar) -> Result<ComplexScalar> {
        self.pole_check(z)?;
        let h: ComplexScalar = self.zeros.iter().map(|&r| (z - r).inv()).sum();
        if !is_finite(h) {
            return Err(Error::PoleHit {
                index: self.nearest_index(z),
            });
        }
        Ok(h)
    }

    /// `h'(z) = -sum_k 1/(z - zeros[k])^2`.
    pub fn log_derivative_prime(&self, z: ComplexScalar) -> Result<ComplexScalar> {
        Ok(self.log_derivative_pair(z)?.1)
    }

    /// `(h(z), h'(z))` in a single pass.
    pub fn log_derivative_pair(&self, z: ComplexScalar) -> Result<(ComplexScalar, ComplexScalar)> {
        self.pole_check(z)?;
        let mut h = ComplexScalar::new(0.0, 0.0);
        let mut hp = ComplexScalar::new(0.0, 0.0);
        for &r in &self.zeros {
            let a = (z - r).inv();
            h += a;
            hp -= a * a;
        }
        if !is_finite(h) || !is_finite(hp) {
            return Err(Error::PoleHit {
                index: self.nearest_index(z),
            });
        }
        Ok((h, hp))
    }

    /// `(h(z), p''(z)/p(z), sum_k |1/(z - zeros[k])|)`.
    ///
    /// `p''/p = h' + h^2` cancels badly next to a zero, so the dominant term
    /// `a_m` is split off: `p''/p = 2 a_m g + g^2 - sum_{k != m} a_k^2` with
    /// `g = h - a_m`.
    pub(crate) fn newton_terms(
        &self,
        z: ComplexScalar,
    ) -> Result<(ComplexScalar, ComplexScalar, f64)> {
        self.pole_check(z)?;
        let mut dominant = 0;
        let mut dominant_abs = -1.0;
        let mut scale = 0.0;
        for (k, &r) in self.zeros.iter().enumerate() {
            let d = (z - r).norm();
            let a = d.recip();
            scale += a;
            if a > dominant_abs {
                dominant_abs = a;
                dominant = k;
            }
        }
        let am = (z - self.zeros[dominant]).inv();
        let mut g = ComplexScalar::new(0.0, 0.0);
        let mut sq = ComplexScalar::new(0.0, 0.0);
        for (k, &r) in self.zeros.iter().enumerate() {
            if k == dominant {
                continue;
            }
            let a = (z - r).inv();
            g += a;
            sq += a * a;
        }
        let h = am + g;
        let ratio = 2.0 * am * g + g * g - sq;
        if !is_finite(h) || !is_finite(ratio) || !scale.is_finite() {
            return Err(Error::PoleHit { index: dominant });
        }
        Ok((h, ratio, scale))
    }

    /// Coefficients of `prod (z - r_k)`, normalized.
    pub fn expand(&self) -> Result<CoeffFormPoly> {
        let m = self.degree();
        if m > MAX_EXPAND_DEGREE {
            return Err(Error::DegreeTooLarge {
                degree: m,
                max: MAX_EXPAND_DEGREE,
            });
        }
        let mut coeffs = vec![ComplexScalar::new(1.0, 0.0)];
        let mut scale_exp = 0;
        for &r in &self.zeros {
            let mut next = vec![ComplexScalar::new(0.0, 0.0); coeffs.len() + 1];
            for (k, &c) in coeffs.iter().enumerate() {
                next[k + 1] += c;
                next[k] -= r * c;
            }
            coeffs = next;
            scale_exp += normalize_in_place(&mut coeffs)?;
        }
        Ok(CoeffFormPoly { coeffs, scale_exp })
    }
}

/// Rescales so the largest coefficient modulus lies in `[2^-1/2, 2^1/2]`.
/// Returns the exponent that was factored out.
fn normalize_in_place(coeffs: &mut [ComplexScalar]) -> Result<i32> {
    let max = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    if !max.is_finite() {
        return Err(Error::NonFinite("coefficients"));
    }
    if max == 0.0 {
        return Err(Error::ZeroPoly);
    }
    let e = max.log2().round() as i32;
    if e != 0 {
        for c in coeffs.iter_mut() {
            *c = scale_c(*c, -e);
        }
    }
    Ok(e)
}

/// `2^scale_exp * sum_k coeffs[k] z^k`, coefficients ascending in degree.
#[derive(Debug, Clone, PartialEq)]
pub struct CoeffFormPoly {
    coeffs: Vec<ComplexScalar>,
    scale_exp: i32,
}

impl CoeffFormPoly {
    /// Trims trailing zero coefficients and normalizes.
    pub fn from_coeffs(coeffs: Vec<ComplexScalar>) -> Result<Self> {
        Self::from_scaled(coeffs, 0)
    }

    pub fn from_scaled(mut coeffs: Vec<ComplexScalar>, scale_exp: i32) -> Result<Self> {
        if !coeffs.iter().copied().all(is_finite) {
            return Err(Error::NonFinite("coefficients"));
        }
        while coeffs.last().is_some_and(|c| c.norm() == 0.0) {
            coeffs.pop();
        }
        if coeffs.is_empty() {
            return Err(Error::ZeroPoly);
        }
        let e = normalize_in_place(&mut coeffs)?;
        Ok(Self {
            coeffs,
            scale_exp: scale_exp + e,
        })
    }

    pub fn from_real(coeffs: &[f64]) -> Result<Self> {
        Self::from_coeffs(coeffs.iter().map(|&c| ComplexScalar::new(c, 0.0)).collect())
    }

    pub fn coeffs(&self) -> &[ComplexScalar] {
        &self.coeffs
    }

    pub fn scale_exp(&self) -> i32 {
        self.scale_exp
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficients with the scale exponent applied (may overflow for
    /// extreme scales).
    pub fn unscaled(&self) -> Vec<ComplexScalar> {
        self.coeffs
            .iter()
            .map(|&c| scale_c(c, self.scale_exp))
            .collect()
    }

    pub fn derivative(&self) -> Result<Self> {
        if self.degree() == 0 {
            return Err(Error::ConstantPoly);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * k as f64)
            .collect();
        Self::from_scaled(coeffs, self.scale_exp)
    }

    /// Horner evaluation with power-of-two rescaling of the accumulator.
    /// The result stands for `value * 2^scale_exp`.
    pub fn horner_eval(&self, z: ComplexScalar) -> (ComplexScalar, i32) {
        let mut acc = ComplexScalar::new(0.0, 0.0);
        let mut exp = 0i32;
        for &c in self.coeffs.iter().rev() {
            // acc * 2^exp * z + c * 2^0, brought to the common exponent max(exp, 0)
            let common = exp.max(0);
            acc = scale_c(acc * z, exp - common) + scale_c(c, -common);
            exp = common;
            let m = acc.norm();
            if m != 0.0 && !(HORNER_LO..=HORNER_HI).contains(&m) {
                let e = m.log2().round() as i32;
                acc = scale_c(acc, -e);
                exp += e;
            }
        }
        if acc.norm() == 0.0 {
            return (acc, 0);
        }
        (acc, exp + self.scale_exp)
    }

    /// `p(z)/p'(z)` from two rescaled Horner passes.
    pub(crate) fn newton_ratio(&self, deriv: &CoeffFormPoly, z: ComplexScalar) -> ComplexScalar {
        let (v, ev) = self.horner_eval(z);
        let (d, ed) = deriv.horner_eval(z);
        if v.norm() == 0.0 {
            return ComplexScalar::new(0.0, 0.0);
        }
        scale_c(v / d, ev - ed)
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
    fn eval_small_cases() {
        let v = real_roots(&[1.0, -1.0]).eval_log_polar(c(0.0, 0.0));
        assert_eq!(v.log_modulus, 0.0);
        assert!((v.phase - c(-1.0, 0.0)).norm() < 1e-15);

        let v = real_roots(&[0.0]).eval_log_polar(c(2.0, 0.0));
        assert!((v.log_modulus - 2f64.ln()).abs() < 1e-15);
        assert!((v.phase - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn eval_does_not_overflow() {
        let p = RootFormPoly::new(vec![c(0.0, 0.0); 1000]).unwrap();
        let v = p.eval_log_polar(c(10.0, 0.0));
        assert!((v.log_modulus - 1000.0 * 10f64.ln()).abs() < 1e-9);
        assert!((v.phase - c(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn eval_at_zero_is_neg_infinity() {
        let p = real_roots(&[0.25, -3.0]);
        let v = p.eval_log_polar(c(-3.0, 0.0));
        assert_eq!(v.log_modulus, f64::NEG_INFINITY);
        assert_eq!(v.phase, c(1.0, 0.0));
    }

    #[test]
    fn log_derivative_examples() {
        assert_eq!(
            real_roots(&[1.0, -1.0]).log_derivative(c(0.0, 0.0)).unwrap(),
            c(0.0, 0.0)
        );
        let h = real_roots(&[0.0, 1.0, 2.0])
            .log_derivative(c(3.0, 0.0))
            .unwrap();
        assert!((h - c(11.0 / 6.0, 0.0)).norm() < 1e-15);
        assert!(matches!(
            real_roots(&[0.5]).log_derivative(c(0.5, 0.0)),
            Err(Error::PoleHit { index: 0 })
        ));
    }

    #[test]
    fn log_derivative_prime_examples() {
        let hp = |zs: &[f64], z: f64| real_roots(zs).log_derivative_prime(c(z, 0.0)).unwrap();
        assert_eq!(hp(&[1.0, -1.0], 0.0), c(-2.0, 0.0));
        assert_eq!(hp(&[0.0], 2.0), c(-0.25, 0.0));
        assert_eq!(hp(&[0.0, 4.0], 2.0), c(-0.5, 0.0));
        assert!(matches!(
            real_roots(&[0.5]).log_derivative_prime(c(0.5, 0.0)),
            Err(Error::PoleHit { .. })
        ));
    }

    #[test]
    fn newton_terms_match_direct_formula() {
        let p = RootFormPoly::new(vec![c(0.1, 0.2), c(-0.5, 0.3), c(0.7, -0.4), c(0.0, -0.9)]).unwrap();
        let z = c(0.12, 0.21);
        let (h, hp) = p.log_derivative_pair(z).unwrap();
        let (h2, ratio, scale) = p.newton_terms(z).unwrap();
        assert!((h - h2).norm() < 1e-12);
        assert!((ratio - (hp + h * h)).norm() < 1e-9 * (hp.norm() + 1.0));
        assert!(scale > 0.0);
    }

    fn assert_coeffs(p: &CoeffFormPoly, expected: &[f64]) {
        let got = p.unscaled();
        assert_eq!(got.len(), expected.len());
        for (g, &e) in got.iter().zip(expected) {
            assert!((g - c(e, 0.0)).norm() < 1e-12, "{got:?} vs {expected:?}");
        }
    }

    #[test]
    fn expand_examples() {
        assert_coeffs(&real_roots(&[1.0, -1.0]).expand().unwrap(), &[-1.0, 0.0, 1.0]);
        assert_coeffs(&real_roots(&[0.0, 0.0]).expand().unwrap(), &[0.0, 0.0, 1.0]);
        // brute-force convolution of (z-1)(z-2)(z-3) by hand: z^3 - 6z^2 + 11z - 6
        assert_coeffs(
            &real_roots(&[1.0, 2.0, 3.0]).expand().unwrap(),
            &[-6.0, 11.0, -6.0, 1.0],
        );
    }

    #[test]
    fn expand_rejects_large_degree() {
        let p = RootFormPoly::new(vec![c(0.5, 0.0); 65]).unwrap();
        assert!(matches!(
            p.expand(),
            Err(Error::DegreeTooLarge { degree: 65, max: 64 })
        ));
    }

    #[test]
    fn normalization_invariant() {
        let p = CoeffFormPoly::from_real(&[1e300, 3e301, -2e299]).unwrap();
        let max = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
        assert!((0.5..=2.0).contains(&max));
        let p = CoeffFormPoly::from_real(&[1e-300, 0.0, 0.0]).unwrap();
        assert_eq!(p.degree(), 0);
        assert!(matches!(CoeffFormPoly::from_real(&[0.0, 0.0]), Err(Error::ZeroPoly)));
    }

    #[test]
    fn differentiate_examples() {
        let p = CoeffFormPoly::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_coeffs(&p.derivative().unwrap(), &[0.0, 2.0]);
        let p = CoeffFormPoly::from_real(&[-6.0, 11.0, -6.0, 1.0]).unwrap();
        assert_coeffs(&p.derivative().unwrap(), &[11.0, -12.0, 3.0]);
        let p = CoeffFormPoly::from_real(&[5.0]).unwrap();
        assert!(matches!(p.derivative(), Err(Error::ConstantPoly)));
    }

    #[test]
    fn horner_examples() {
        let p = CoeffFormPoly::from_real(&[-1.0, 0.0, 1.0]).unwrap();
        assert_eq!(p.horner_eval(c(2.0, 0.0)), (c(3.0, 0.0), 0));
        assert_eq!(p.horner_eval(c(1.0, 0.0)).0, c(0.0, 0.0));
    }

    #[test]
    fn horner_degree_200_geometric_series() {
        let p = CoeffFormPoly::from_real(&[1.0; 201]).unwrap();
        let (v, e) = p.horner_eval(c(2.0, 0.0));
        assert!(v.im == 0.0);
        // closed form: sum_{k=0}^{200} 2^k = 2^201 - 1
        let log2_expected = (2f64.powi(201) - 1.0).log2();
        let log2_got = v.re.log2() + e as f64;
        assert!(((log2_got - log2_expected) * std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn horner_survives_huge_arguments() {
        let p = CoeffFormPoly::from_real(&[1.0; 301]).unwrap();
        let (v, e) = p.horner_eval(c(1e10, 0.0));
        assert!(v.re.is_finite() && v.re > 0.0);
        let log10 = v.re.log10() + e as f64 * 2f64.log10();
        assert!((log10 - 3000.0).abs() < 1e-9);
    }

    #[test]
    fn derivative_of_expansion_has_degree_one_less() {
        for m in 1..=20 {
            let zs: Vec<f64> = (0..m).map(|k| k as f64 * 0.1 - 0.7).collect();
            let d = real_roots(&zs).expand().unwrap().derivative().unwrap();
            assert_eq!(d.degree(), m - 1);
        }
    }
}
