//! Möbius transformations of the extended complex plane.

use std::fmt;

use crate::jet::C64;

const ZERO: C64 = C64::new(0.0, 0.0);
const ONE: C64 = C64::new(1.0, 0.0);

/// A point of the Riemann sphere.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedPoint {
    Finite(C64),
    Infinity,
}

impl ExtendedPoint {
    /// Modulus, with `∞` larger than every finite bound.
    pub fn norm(&self) -> f64 {
        match self {
            ExtendedPoint::Finite(z) => z.norm(),
            ExtendedPoint::Infinity => f64::INFINITY,
        }
    }

    pub fn finite(&self) -> Option<C64> {
        match self {
            ExtendedPoint::Finite(z) => Some(*z),
            ExtendedPoint::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtendedPoint::Infinity)
    }

    /// `1/p` on the sphere.
    pub fn recip(&self) -> ExtendedPoint {
        match self {
            ExtendedPoint::Infinity => ExtendedPoint::Finite(ZERO),
            ExtendedPoint::Finite(z) if *z == ZERO => ExtendedPoint::Infinity,
            ExtendedPoint::Finite(z) => ExtendedPoint::Finite(z.inv()),
        }
    }

    /// Chordal distance on the Riemann sphere (at most 2).
    pub fn chordal_distance(&self, other: &ExtendedPoint) -> f64 {
        match (self, other) {
            (ExtendedPoint::Infinity, ExtendedPoint::Infinity) => 0.0,
            (ExtendedPoint::Finite(z), ExtendedPoint::Infinity)
            | (ExtendedPoint::Infinity, ExtendedPoint::Finite(z)) => {
                2.0 / (1.0 + z.norm_sqr()).sqrt()
            }
            (ExtendedPoint::Finite(a), ExtendedPoint::Finite(b)) => {
                2.0 * (a - b).norm() / ((1.0 + a.norm_sqr()).sqrt() * (1.0 + b.norm_sqr()).sqrt())
            }
        }
    }
}

impl From<C64> for ExtendedPoint {
    fn from(z: C64) -> Self {
        ExtendedPoint::Finite(z)
    }
}

impl fmt::Display for ExtendedPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedPoint::Finite(z) => write!(f, "{z}"),
            ExtendedPoint::Infinity => f.write_str("inf"),
        }
    }
}

/// `z ↦ (a z + b) / (c z + d)` with `ad - bc ≠ 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MoebiusMap {
    pub a: C64,
    pub b: C64,
    pub c: C64,
    pub d: C64,
}

impl MoebiusMap {
    /// Returns `None` for a singular coefficient matrix.
    pub fn new(a: C64, b: C64, c: C64, d: C64) -> Option<Self> {
        let m = Self { a, b, c, d };
        (m.determinant() != ZERO).then_some(m)
    }

    pub fn identity() -> Self {
        Self {
            a: ONE,
            b: ZERO,
            c: ZERO,
            d: ONE,
        }
    }

    /// Disk automorphism `σ_a(z) = (z + a) / (1 + conj(a) z)`, `|a| < 1`.
    pub fn disk_automorphism(a: C64) -> Self {
        Self {
            a: ONE,
            b: a,
            c: a.conj(),
            d: ONE,
        }
    }

    pub fn determinant(&self) -> C64 {
        self.a * self.d - self.b * self.c
    }

    pub fn apply(&self, z: C64) -> ExtendedPoint {
        let den = self.c * z + self.d;
        if den == ZERO {
            ExtendedPoint::Infinity
        } else {
            ExtendedPoint::Finite((self.a * z + self.b) / den)
        }
    }

    pub fn apply_extended(&self, p: ExtendedPoint) -> ExtendedPoint {
        match p {
            ExtendedPoint::Finite(z) => self.apply(z),
            ExtendedPoint::Infinity if self.c == ZERO => ExtendedPoint::Infinity,
            ExtendedPoint::Infinity => ExtendedPoint::Finite(self.a / self.c),
        }
    }

    /// First and second derivatives at a finite, non-polar point.
    pub fn derivatives(&self, z: C64) -> (C64, C64) {
        let den = self.c * z + self.d;
        let det = self.determinant();
        (det / (den * den), -2.0 * self.c * det / (den * den * den))
    }

    /// Preimage of `∞`.
    pub fn pole(&self) -> ExtendedPoint {
        if self.c == ZERO {
            ExtendedPoint::Infinity
        } else {
            ExtendedPoint::Finite(-self.d / self.c)
        }
    }

    /// `self ∘ other`, i.e. the matrix product.
    pub fn compose(&self, other: &MoebiusMap) -> MoebiusMap {
        MoebiusMap {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MoebiusMap {
        MoebiusMap {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn automorphism_inverse_is_opposite_parameter() {
        let a = c(0.3, -0.4);
        let s = MoebiusMap::disk_automorphism(a);
        let t = MoebiusMap::disk_automorphism(-a);
        for z in [c(0.1, 0.2), c(-0.6, 0.5)] {
            let back = t.apply_extended(s.apply(z)).finite().unwrap();
            assert!((back - z).norm() < 1e-15);
            assert!(s.apply(z).norm() < 1.0);
        }
        assert_eq!(s.apply(c(0.0, 0.0)), ExtendedPoint::Finite(a));
    }

    #[test]
    fn composition_is_matrix_product() {
        let m = MoebiusMap::new(c(1.0, 1.0), c(0.5, 0.0), c(0.2, -0.3), c(2.0, 0.0)).unwrap();
        let n = MoebiusMap::disk_automorphism(c(0.1, 0.7));
        let z = c(0.3, 0.2);
        let lhs = m.compose(&n).apply(z).finite().unwrap();
        let rhs = m.apply_extended(n.apply(z)).finite().unwrap();
        assert!((lhs - rhs).norm() < 1e-14);
        let id = m.compose(&m.inverse());
        let w = id.apply(z).finite().unwrap();
        assert!((w - z).norm() < 1e-14);
    }

    #[test]
    fn poles_and_infinity() {
        let m = MoebiusMap::new(ONE, ZERO, c(-2.0, 0.0), ONE).unwrap();
        assert_eq!(m.pole(), ExtendedPoint::Finite(c(0.5, 0.0)));
        assert_eq!(m.apply(c(0.5, 0.0)), ExtendedPoint::Infinity);
        assert_eq!(
            m.apply_extended(ExtendedPoint::Infinity),
            ExtendedPoint::Finite(c(-0.5, 0.0))
        );
        assert_eq!(MoebiusMap::identity().pole(), ExtendedPoint::Infinity);
        assert!(MoebiusMap::new(ONE, ONE, ONE, ONE).is_none());
        assert_eq!(ExtendedPoint::Infinity.norm(), f64::INFINITY);
        assert_eq!(ExtendedPoint::Finite(ZERO).recip(), ExtendedPoint::Infinity);
    }
}
