//! Dense complex polynomials and companion-matrix root finding.

use std::ops::{Add, Mul, Sub};

use thiserror::Error;

use crate::jet::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// Largest degree accepted by [`Poly::roots`].
pub const MAX_ROOT_DEGREE: usize = 20;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum RootError {
    #[error("polynomial is identically zero")]
    ZeroPolynomial,
    #[error("degree {0} exceeds the supported maximum of {MAX_ROOT_DEGREE}")]
    DegreeTooHigh(usize),
    #[error("QR iteration failed to converge")]
    NoConvergence,
}

/// Polynomial with coefficients in ascending order of degree.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly {
    coeffs: Vec<C64>,
}

impl Poly {
    pub fn new(coeffs: Vec<C64>) -> Self {
        let mut p = Self { coeffs };
        p.trim();
        p
    }

    pub fn constant(c: C64) -> Self {
        Self::new(vec![c])
    }

    pub fn one() -> Self {
        Self::constant(ONE)
    }

    /// The monomial `z^n`.
    pub fn monomial(n: usize) -> Self {
        let mut c = vec![ZERO; n + 1];
        c[n] = ONE;
        Self::new(c)
    }

    /// `z - root`.
    pub fn linear_factor(root: C64) -> Self {
        Self::new(vec![-root, ONE])
    }

    pub fn from_roots(roots: &[C64]) -> Self {
        roots
            .iter()
            .fold(Self::one(), |acc, &r| &acc * &Self::linear_factor(r))
    }

    fn trim(&mut self) {
        while self.coeffs.len() > 1 && self.coeffs.last() == Some(&ZERO) {
            self.coeffs.pop();
        }
        if self.coeffs.is_empty() {
            self.coeffs.push(ZERO);
        }
    }

    pub fn coeffs(&self) -> &[C64] {
        &self.coeffs
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| *c == ZERO)
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    /// Value and first derivative in one Horner pass.
    pub fn eval_with_derivative(&self, z: C64) -> (C64, C64) {
        let mut p = ZERO;
        let mut dp = ZERO;
        for &c in self.coeffs.iter().rev() {
            dp = dp * z + p;
            p = p * z + c;
        }
        (p, dp)
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::constant(ZERO);
        }
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    pub fn scale(&self, s: C64) -> Self {
        Self::new(self.coeffs.iter().map(|&c| c * s).collect())
    }

    /// Number of vanishing low-order coefficients (multiplicity of the root at 0).
    pub fn valuation(&self) -> usize {
        self.coeffs
            .iter()
            .take_while(|c| **c == ZERO)
            .count()
            .min(self.degree())
    }

    /// Divides by `z^k`; the caller guarantees `k <= valuation()`.
    pub fn shift_down(&self, k: usize) -> Self {
        Self::new(self.coeffs[k..].to_vec())
    }

    /// Roots by eigenvalues of the balanced companion matrix, each polished
    /// with a couple of Newton steps on the original coefficients.
    pub fn roots(&self) -> Result<Vec<C64>, RootError> {
        if self.is_zero() {
            return Err(RootError::ZeroPolynomial);
        }
        // drop negligible leading coefficients; they only produce roots near infinity
        let scale = self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
        let mut n = self.degree();
        while n > 0 && self.coeffs[n].norm() <= 1e-14 * scale {
            n -= 1;
        }
        if n > MAX_ROOT_DEGREE {
            return Err(RootError::DegreeTooHigh(n));
        }
        if n == 0 {
            return Ok(Vec::new());
        }
        let lead = self.coeffs[n];
        let mut h = vec![vec![ZERO; n]; n];
        for j in 0..n {
            h[0][j] = -self.coeffs[n - 1 - j] / lead;
        }
        for i in 1..n {
            h[i][i - 1] = ONE;
        }
        balance(&mut h);
        let mut roots = hessenberg_eigenvalues(h)?;
        for r in roots.iter_mut() {
            for _ in 0..3 {
                let (p, dp) = self.eval_with_derivative(*r);
                if dp == ZERO {
                    break;
                }
                let cand = *r - p / dp;
                if self.eval(cand).norm() < p.norm() {
                    *r = cand;
                } else {
                    break;
                }
            }
        }
        Ok(roots)
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new(
            (0..n)
                .map(|k| *self.coeffs.get(k).unwrap_or(&ZERO) + *rhs.coeffs.get(k).unwrap_or(&ZERO))
                .collect(),
        )
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &rhs.scale(-ONE)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }
}

/// Parlett-Reinsch balancing with radix-2 scalings; keeps Hessenberg form.
fn balance(h: &mut [Vec<C64>]) {
    let n = h.len();
    let radix = 2.0_f64;
    let mut converged = false;
    while !converged {
        converged = true;
        for i in 0..n {
            let mut c = 0.0;
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    c += h[j][i].l1_norm();
                    r += h[i][j].l1_norm();
                }
            }
            if c == 0.0 || r == 0.0 {
                continue;
            }
            let s = c + r;
            let mut f = 1.0;
            let mut g = r / radix;
            while c < g {
                f *= radix;
                c *= radix * radix;
            }
            g = r * radix;
            while c > g {
                f /= radix;
                c /= radix * radix;
            }
            if (c + r) / f < 0.95 * s {
                converged = false;
                for j in 0..n {
                    h[i][j] /= f;
                }
                for row in h.iter_mut() {
                    row[i] *= f;
                }
            }
        }
    }
}

/// Eigenvalues of a complex upper Hessenberg matrix by single-shift QR with
/// Wilkinson shifts and deflation.
fn hessenberg_eigenvalues(mut h: Vec<Vec<C64>>) -> Result<Vec<C64>, RootError> {
    let n = h.len();
    let mut eig = Vec::with_capacity(n);
    let mut hi = n as isize - 1;
    let mut iter = 0usize;
    while hi >= 0 {
        let hu = hi as usize;
        if hu == 0 {
            eig.push(h[0][0]);
            break;
        }
        // locate the start of the trailing unreduced block
        let mut lo = hu;
        while lo > 0 {
            let s = h[lo - 1][lo - 1].l1_norm() + h[lo][lo].l1_norm();
            if h[lo][lo - 1].l1_norm() <= f64::EPSILON * s.max(f64::MIN_POSITIVE) {
                h[lo][lo - 1] = ZERO;
                break;
            }
            lo -= 1;
        }
        if lo == hu {
            eig.push(h[hu][hu]);
            hi -= 1;
            iter = 0;
            continue;
        }
        iter += 1;
        if iter > 60 * n {
            return Err(RootError::NoConvergence);
        }
        let shift = if iter % 11 == 0 {
            // exceptional shift to break cycles
            h[hu][hu] + C64::new(h[hu][hu - 1].norm(), 0.75 * h[hu][hu - 1].norm())
        } else {
            wilkinson(h[hu - 1][hu - 1], h[hu - 1][hu], h[hu][hu - 1], h[hu][hu])
        };
        qr_step(&mut h, lo, hu, shift);
    }
    Ok(eig)
}

fn wilkinson(a: C64, b: C64, c: C64, d: C64) -> C64 {
    let tr = a + d;
    let det = a * d - b * c;
    let disc = (tr * tr - 4.0 * det).sqrt();
    let l1 = (tr + disc) / 2.0;
    let l2 = (tr - disc) / 2.0;
    if (l1 - d).norm() < (l2 - d).norm() {
        l1
    } else {
        l2
    }
}

fn qr_step(h: &mut [Vec<C64>], lo: usize, hi: usize, mu: C64) {
    for k in lo..=hi {
        h[k][k] -= mu;
    }
    let mut rots = Vec::with_capacity(hi - lo);
    for k in lo..hi {
        let a = h[k][k];
        let b = h[k + 1][k];
        let nrm = (a.norm_sqr() + b.norm_sqr()).sqrt();
        let g = if nrm == 0.0 {
            [ONE, ZERO, ZERO, ONE]
        } else {
            [a.conj() / nrm, b.conj() / nrm, -b / nrm, a / nrm]
        };
        for j in k..=hi {
            let x = h[k][j];
            let y = h[k + 1][j];
            h[k][j] = g[0] * x + g[1] * y;
            h[k + 1][j] = g[2] * x + g[3] * y;
        }
        rots.push(g);
    }
    for (idx, g) in rots.iter().enumerate() {
        let k = lo + idx;
        let last = (k + 2).min(hi);
        for row in h.iter_mut().take(last + 1).skip(lo) {
            let x = row[k];
            let y = row[k + 1];
            row[k] = x * g[0].conj() + y * g[1].conj();
            row[k + 1] = x * g[2].conj() + y * g[3].conj();
        }
    }
    for k in lo..=hi {
        h[k][k] += mu;
    }
}
