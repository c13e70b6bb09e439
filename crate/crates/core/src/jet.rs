//! Order-3 complex jets.
//!
//! A [`Jet3`] carries a value together with its first three complex
//! derivatives at a fixed point. Arithmetic follows the Leibniz rule and the
//! order-3 Faà di Bruno formula, so composing elementary operations on the
//! identity jet `(z0, 1, 0, 0)` yields `f(z0), f'(z0), f''(z0), f'''(z0)` to
//! machine precision.

use std::ops::{Add, Div, Mul, Neg, Sub};

use num_complex::Complex64;
use thiserror::Error;

pub type C64 = Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum JetError {
    #[error("division by a jet whose value vanishes")]
    DegenerateJet,
    #[error("argument {0} lies on the branch cut (-inf, 0]")]
    BranchCut(C64),
}

/// Value and first three derivatives of a complex function at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Jet3 {
    pub v: C64,
    pub d1: C64,
    pub d2: C64,
    pub d3: C64,
}

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

impl Jet3 {
    pub const fn new(v: C64, d1: C64, d2: C64, d3: C64) -> Self {
        Self { v, d1, d2, d3 }
    }

    /// Jet of the identity map at `z0`.
    pub const fn variable(z0: C64) -> Self {
        Self::new(z0, ONE, ZERO, ZERO)
    }

    pub const fn constant(c: C64) -> Self {
        Self::new(c, ZERO, ZERO, ZERO)
    }

    pub fn from_real(x: f64) -> Self {
        Self::constant(C64::new(x, 0.0))
    }

    /// Composes a scalar function `g`, given by its value and derivatives at
    /// `self.v`, with the function represented by `self`.
    pub fn chain(self, g0: C64, g1: C64, g2: C64, g3: C64) -> Self {
        let (u1, u2, u3) = (self.d1, self.d2, self.d3);
        Self {
            v: g0,
            d1: g1 * u1,
            d2: g2 * u1 * u1 + g1 * u2,
            d3: g3 * u1 * u1 * u1 + 3.0 * g2 * u1 * u2 + g1 * u3,
        }
    }

    pub fn scale(self, c: C64) -> Self {
        Self::new(self.v * c, self.d1 * c, self.d2 * c, self.d3 * c)
    }

    pub fn is_finite(&self) -> bool {
        self.v.is_finite() && self.d1.is_finite() && self.d2.is_finite() && self.d3.is_finite()
    }

    pub fn recip(self) -> Result<Self, JetError> {
        if self.v == ZERO {
            return Err(JetError::DegenerateJet);
        }
        let r = self.v.inv();
        let r2 = r * r;
        Ok(self.chain(r, -r2, 2.0 * r2 * r, -6.0 * r2 * r2))
    }

    pub fn try_div(self, rhs: Self) -> Result<Self, JetError> {
        Ok(self * rhs.recip()?)
    }

    pub fn exp(self) -> Self {
        let e = self.v.exp();
        self.chain(e, e, e, e)
    }

    /// Principal logarithm.
    pub fn ln(self) -> Result<Self, JetError> {
        check_cut(self.v)?;
        let r = self.v.inv();
        let r2 = r * r;
        Ok(self.chain(self.v.ln(), r, -r2, 2.0 * r2 * r))
    }

    /// Principal square root.
    pub fn sqrt(self) -> Result<Self, JetError> {
        self.powc(C64::new(0.5, 0.0))
    }

    pub fn tan(self) -> Self {
        let t = self.v.tan();
        let s = ONE + t * t;
        self.chain(t, s, 2.0 * t * s, 2.0 * s * (ONE + 3.0 * t * t))
    }

    /// Integer power; no branch cut is involved.
    pub fn powi(self, n: i32) -> Result<Self, JetError> {
        if n == 0 {
            return Ok(Self::constant(ONE));
        }
        if n < 0 && self.v == ZERO {
            return Err(JetError::DegenerateJet);
        }
        let nf = n as f64;
        // falling factorial n(n-1)...(n-k+1) times u^(n-k); vanishes for k > n >= 0
        let term = |k: i32| -> C64 {
            if n >= 0 && k > n {
                return ZERO;
            }
            let coeff: f64 = (0..k).map(|j| nf - j as f64).product();
            coeff * self.v.powi(n - k)
        };
        Ok(self.chain(term(0), term(1), term(2), term(3)))
    }

    /// Principal power `self^p`. Integral real exponents are routed through
    /// [`Jet3::powi`] so that negative bases stay admissible.
    pub fn powc(self, p: C64) -> Result<Self, JetError> {
        if p.im == 0.0 && p.re.fract() == 0.0 && p.re.abs() <= i32::MAX as f64 {
            return self.powi(p.re as i32);
        }
        check_cut(self.v)?;
        let g0 = (p * self.v.ln()).exp();
        let r = self.v.inv();
        let g1 = p * g0 * r;
        let g2 = p * (p - 1.0) * g0 * r * r;
        let g3 = p * (p - 1.0) * (p - 2.0) * g0 * r * r * r;
        Ok(self.chain(g0, g1, g2, g3))
    }

    /// General power with a jet exponent, `exp(b * log a)`.
    pub fn pow_jet(self, exponent: Jet3) -> Result<Self, JetError> {
        if exponent.d1 == ZERO && exponent.d2 == ZERO && exponent.d3 == ZERO {
            return self.powc(exponent.v);
        }
        Ok((exponent * self.ln()?).exp())
    }

    /// Composition `g ∘ h` where `self` is the jet of `g` at `h(z0)` and
    /// `inner` is the jet of `h` at `z0`.
    pub fn compose(self, inner: Jet3) -> Self {
        inner.chain(self.v, self.d1, self.d2, self.d3)
    }
}

fn check_cut(v: C64) -> Result<(), JetError> {
    if v.im == 0.0 && v.re <= 0.0 {
        Err(JetError::BranchCut(v))
    } else {
        Ok(())
    }
}

impl Add for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: Self) -> Self {
        Self::new(
            self.v + rhs.v,
            self.d1 + rhs.d1,
            self.d2 + rhs.d2,
            self.d3 + rhs.d3,
        )
    }
}

impl Sub for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: Self) -> Self {
        Self::new(
            self.v - rhs.v,
            self.d1 - rhs.d1,
            self.d2 - rhs.d2,
            self.d3 - rhs.d3,
        )
    }
}

impl Neg for Jet3 {
    type Output = Jet3;
    fn neg(self) -> Self {
        Self::new(-self.v, -self.d1, -self.d2, -self.d3)
    }
}

impl Mul for Jet3 {
    type Output = Jet3;
    fn mul(self, b: Self) -> Self {
        let a = self;
        Self {
            v: a.v * b.v,
            d1: a.d1 * b.v + a.v * b.d1,
            d2: a.d2 * b.v + 2.0 * a.d1 * b.d1 + a.v * b.d2,
            d3: a.d3 * b.v + 3.0 * a.d2 * b.d1 + 3.0 * a.d1 * b.d2 + a.v * b.d3,
        }
    }
}

/// Panics on a degenerate divisor; use [`Jet3::try_div`] for fallible code.
impl Div for Jet3 {
    type Output = Jet3;
    fn div(self, rhs: Self) -> Self {
        self.try_div(rhs).expect("jet division by zero value")
    }
}

impl Add<C64> for Jet3 {
    type Output = Jet3;
    fn add(mut self, rhs: C64) -> Self {
        self.v += rhs;
        self
    }
}

impl Sub<C64> for Jet3 {
    type Output = Jet3;
    fn sub(mut self, rhs: C64) -> Self {
        self.v -= rhs;
        self
    }
}

impl Mul<C64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: C64) -> Self {
        self.scale(rhs)
    }
}

impl Add<f64> for Jet3 {
    type Output = Jet3;
    fn add(self, rhs: f64) -> Self {
        self + C64::new(rhs, 0.0)
    }
}

impl Sub<f64> for Jet3 {
    type Output = Jet3;
    fn sub(self, rhs: f64) -> Self {
        self - C64::new(rhs, 0.0)
    }
}

impl Mul<f64> for Jet3 {
    type Output = Jet3;
    fn mul(self, rhs: f64) -> Self {
        self.scale(C64::new(rhs, 0.0))
    }
}

pub fn jet_add(a: Jet3, b: Jet3) -> Jet3 {
    a + b
}

pub fn jet_mul(a: Jet3, b: Jet3) -> Jet3 {
    a * b
}

pub fn jet_div(a: Jet3, b: Jet3) -> Result<Jet3, JetError> {
    a.try_div(b)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * b.norm().max(1.0)
    }

    /// 4th-order central differences of a scalar function: derivatives 1..3.
    /// Fourth-order central differences along the real direction.
    fn central_differences(f: &dyn Fn(C64) -> C64, z: C64, h: f64) -> [C64; 3] {
        let at = |k: f64| f(z + k * h);
        let d1 = (-at(2.0) + 8.0 * at(1.0) - 8.0 * at(-1.0) + at(-2.0)) / (12.0 * h);
        let d2 = (-at(2.0) + 16.0 * at(1.0) - 30.0 * at(0.0) + 16.0 * at(-1.0) - at(-2.0))
            / (12.0 * h * h);
        let d3 = (-at(3.0) + 8.0 * at(2.0) - 13.0 * at(1.0) + 13.0 * at(-1.0) - 8.0 * at(-2.0)
            + at(-3.0))
            / (8.0 * h * h * h);
        [d1, d2, d3]
    }

    /// Derivatives by the Cauchy integral formula on a small circle.
    fn cauchy_derivatives(f: &dyn Fn(C64) -> C64, z: C64, rho: f64) -> [C64; 3] {
        let n = 128;
        let mut d = [ZERO; 3];
        for j in 0..n {
            let w = C64::from_polar(1.0, std::f64::consts::TAU * j as f64 / n as f64);
            let v = f(z + rho * w);
            for (k, dk) in d.iter_mut().enumerate() {
                *dk += v * w.powi(-(k as i32 + 1));
            }
        }
        let fact = [1.0, 2.0, 6.0];
        [0, 1, 2].map(|k| d[k] * fact[k] / (n as f64 * rho.powi(k as i32 + 1)))
    }

    #[test]
    fn geometric_series_reciprocal() {
        let one_minus_z = Jet3::new(ONE, -ONE, ZERO, ZERO);
        let r = Jet3::constant(ONE).try_div(one_minus_z).unwrap();
        assert_eq!(r, Jet3::new(ONE, c(1.0, 0.0), c(2.0, 0.0), c(6.0, 0.0)));
    }

    #[test]
    fn multiplying_by_unit_constant_is_identity() {
        let a = Jet3::new(c(0.3, -1.0), c(2.0, 0.5), c(-1.0, 4.0), c(0.0, 7.0));
        assert_eq!(a * Jet3::constant(ONE), a);
    }

    #[test]
    fn cayley_map_jet_at_origin() {
        // frozen from central differences of (1+z)/(1-z), h = 1e-5
        let z = Jet3::variable(ZERO);
        let f = (z + 1.0) / (-z + 1.0);
        let expected = [c(1.0, 0.0), c(2.0, 0.0), c(4.0, 0.0), c(12.0, 0.0)];
        for (got, want) in [f.v, f.d1, f.d2, f.d3].into_iter().zip(expected) {
            assert!(close(got, want, 1e-14), "{got} vs {want}");
        }
        let d = cauchy_derivatives(&|w| (1.0 + w) / (1.0 - w), ZERO, 0.1);
        for (got, want) in [f.d1, f.d2, f.d3].into_iter().zip(d) {
            assert!(close(got, want, 1e-5));
        }
    }

    #[test]
    fn elementary_values_at_origin() {
        let z = Jet3::variable(ZERO);
        assert_eq!(z.exp(), Jet3::new(ONE, ONE, ONE, ONE));
        assert_eq!(Jet3::constant(ONE).ln().unwrap(), Jet3::default());
        let cay = (z + 1.0) / (-z + 1.0);
        let sq = cay.powc(c(2.0, 0.0)).unwrap();
        // ((1+z)/(1-z))^2 = 1 + 4z + 8z^2 + 12 z^3 + ...
        assert!(close(sq.d1, c(4.0, 0.0), 1e-14));
        assert!(close(sq.d2, c(16.0, 0.0), 1e-14));
        assert!(close(sq.d3, c(72.0, 0.0), 1e-14));
    }

    #[test]
    fn division_by_vanishing_jet_is_rejected() {
        let z = Jet3::variable(ZERO);
        assert_eq!(Jet3::constant(ONE).try_div(z), Err(JetError::DegenerateJet));
        assert_eq!(z.powi(-2), Err(JetError::DegenerateJet));
    }

    #[test]
    fn branch_cut_is_rejected() {
        let neg = Jet3::variable(c(-0.5, 0.0));
        assert!(matches!(neg.ln(), Err(JetError::BranchCut(_))));
        assert!(matches!(neg.sqrt(), Err(JetError::BranchCut(_))));
        assert!(matches!(
            Jet3::variable(ZERO).powc(c(0.5, 0.0)),
            Err(JetError::BranchCut(_))
        ));
        // integral exponents never touch the cut
        let sq = neg.powc(c(2.0, 0.0)).unwrap();
        assert!(close(sq.v, c(0.25, 0.0), 1e-15));
        assert!(close(sq.d1, c(-1.0, 0.0), 1e-15));
    }

    #[test]
    fn integer_power_of_zero_base() {
        let z = Jet3::variable(ZERO);
        let z3 = z.powi(3).unwrap();
        assert_eq!(z3, Jet3::new(ZERO, ZERO, ZERO, c(6.0, 0.0)));
        let z1 = z.powi(1).unwrap();
        assert_eq!(z1, z);
    }

    type Op = (&'static str, fn(Jet3) -> Jet3, fn(C64) -> C64);

    fn ops() -> Vec<Op> {
        vec![
            ("exp", |j| j.exp(), |w| w.exp()),
            ("ln", |j| (j + 1.5).ln().unwrap(), |w| (w + 1.5).ln()),
            ("sqrt", |j| (j + 1.2).sqrt().unwrap(), |w| (w + 1.2).sqrt()),
            ("tan", |j| j.tan(), |w| w.tan()),
            ("recip", |j| (j + 2.0).recip().unwrap(), |w| (w + 2.0).inv()),
            ("mul", |j| j * j.exp(), |w| w * w.exp()),
            (
                "powc",
                |j| ((j + 1.0) / (-j + 1.0)).powc(c(0.7, 0.3)).unwrap(),
                |w| ((1.0 + w) / (1.0 - w)).powc(c(0.7, 0.3)),
            ),
            (
                "powi",
                |j| (j - 2.0).powi(-3).unwrap(),
                |w| (w - 2.0).powi(-3),
            ),
        ]
    }

    #[test]
    fn derivatives_match_finite_differences() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let r = 0.9 * rng.gen::<f64>().sqrt();
            let t = rng.gen::<f64>() * std::f64::consts::TAU;
            let z0 = C64::from_polar(r, t);
            for (name, jet_op, scalar) in ops() {
                let j = jet_op(Jet3::variable(z0));
                assert!(close(j.v, scalar(z0), 1e-13), "{name} value at {z0}");
                let d = cauchy_derivatives(&scalar, z0, 0.04);
                let fd = central_differences(&scalar, z0, 1e-3);
                for (k, (got, want)) in [j.d1, j.d2, j.d3].into_iter().zip(fd).enumerate() {
                    assert!(
                        (got - want).norm() <= 1e-6 * want.norm().max(1.0),
                        "{name} d{} at {z0} (differences): {got} vs {want}",
                        k + 1
                    );
                }
                for (k, (got, want)) in [j.d1, j.d2, j.d3].into_iter().zip(d).enumerate() {
                    assert!(
                        (got - want).norm() <= 1e-6 * want.norm().max(1.0),
                        "{name} d{} at {z0}: {got} vs {want}",
                        k + 1
                    );
                }
            }
        }
    }

    #[test]
    fn chained_composition_matches_fused_closed_form() {
        // exp(tan(z)) assembled by composition vs. by direct jet arithmetic
        for z0 in [c(0.1, 0.2), c(-0.5, 0.4), c(0.7, -0.6)] {
            let inner = Jet3::variable(z0).tan();
            let outer_at = Jet3::variable(inner.v).exp();
            let composed = outer_at.compose(inner);
            let direct = Jet3::variable(z0).tan().exp();
            for (a, b) in [
                (composed.v, direct.v),
                (composed.d1, direct.d1),
                (composed.d2, direct.d2),
                (composed.d3, direct.d3),
            ] {
                assert!(close(a, b, 1e-12));
            }
        }
    }
}
