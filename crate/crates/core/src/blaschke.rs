//! Finite Blaschke products.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::jet::{Jet3, C64};
use crate::poly::Poly;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BlaschkeError {
    #[error("zero {0} is not inside the open unit disk")]
    ZeroOutsideDisk(C64),
    #[error("constant {0} is not unimodular")]
    NotUnimodular(C64),
}

/// `B(z) = c * prod (z - a_j) / (1 - conj(a_j) z)` with `|a_j| < 1`, `|c| = 1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "BlaschkeRepr", into = "BlaschkeRepr")]
pub struct BlaschkeProduct {
    zeros: Vec<C64>,
    unimodular: C64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<C64>, unimodular: C64) -> Result<Self, BlaschkeError> {
        if let Some(&z) = zeros.iter().find(|z| !(z.norm() < 1.0)) {
            return Err(BlaschkeError::ZeroOutsideDisk(z));
        }
        if (unimodular.norm() - 1.0).abs() > 1e-12 {
            return Err(BlaschkeError::NotUnimodular(unimodular));
        }
        Ok(Self {
            zeros,
            unimodular: unimodular / unimodular.norm(),
        })
    }

    /// The constant product `B ≡ 1`.
    pub fn unit() -> Self {
        Self {
            zeros: Vec::new(),
            unimodular: C64::new(1.0, 0.0),
        }
    }

    pub fn zeros(&self) -> &[C64] {
        &self.zeros
    }

    pub fn unimodular(&self) -> C64 {
        self.unimodular
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    pub fn eval(&self, z: C64) -> C64 {
        self.zeros.iter().fold(self.unimodular, |acc, &a| {
            acc * (z - a) / (1.0 - a.conj() * z)
        })
    }

    pub fn jet(&self, z: C64) -> Jet3 {
        let x = Jet3::variable(z);
        self.zeros
            .iter()
            .fold(Jet3::constant(self.unimodular), |acc, &a| {
                let factor = (x - a) / (x * (-a.conj()) + 1.0);
                acc * factor
            })
    }

    /// `c * prod (z - a_j)`.
    pub fn numerator(&self) -> Poly {
        Poly::from_roots(&self.zeros).scale(self.unimodular)
    }

    /// `prod (1 - conj(a_j) z)`.
    pub fn denominator(&self) -> Poly {
        self.zeros.iter().fold(Poly::one(), |acc, &a| {
            &acc * &Poly::new(vec![C64::new(1.0, 0.0), -a.conj()])
        })
    }
}

#[derive(Serialize, Deserialize)]
struct BlaschkeRepr {
    zeros: Vec<[f64; 2]>,
    unimodular: [f64; 2],
}

impl TryFrom<BlaschkeRepr> for BlaschkeProduct {
    type Error = BlaschkeError;
    fn try_from(r: BlaschkeRepr) -> Result<Self, Self::Error> {
        BlaschkeProduct::new(
            r.zeros.iter().map(|p| C64::new(p[0], p[1])).collect(),
            C64::new(r.unimodular[0], r.unimodular[1]),
        )
    }
}

impl From<BlaschkeProduct> for BlaschkeRepr {
    fn from(b: BlaschkeProduct) -> Self {
        BlaschkeRepr {
            zeros: b.zeros.iter().map(|z| [z.re, z.im]).collect(),
            unimodular: [b.unimodular.re, b.unimodular.im],
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> BlaschkeProduct {
        BlaschkeProduct::new(
            vec![
                C64::new(0.5, 0.1),
                C64::new(-0.3, 0.7),
                C64::new(0.0, -0.79),
            ],
            C64::from_polar(1.0, 0.4),
        )
        .unwrap()
    }

    #[test]
    fn unimodular_on_the_circle_and_contracting_inside() {
        let b = sample();
        let worst = (0..1024)
            .map(|k| {
                let z = C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 1024.0);
                (b.eval(z).norm() - 1.0).abs()
            })
            .fold(0.0, f64::max);
        assert!(worst <= 1e-10);
        for r in [0.0, 0.3, 0.9, 0.999] {
            assert!(b.eval(C64::from_polar(r, 2.0)).norm() < 1.0);
        }
    }

    #[test]
    fn polynomial_form_matches_product_form() {
        let b = sample();
        let (n, d) = (b.numerator(), b.denominator());
        for z in [C64::new(0.2, 0.3), C64::new(-0.7, 0.1), C64::new(1.3, -0.4)] {
            assert!((n.eval(z) / d.eval(z) - b.eval(z)).norm() < 1e-13);
            assert!((b.jet(z).v - b.eval(z)).norm() < 1e-14);
        }
    }

    #[test]
    fn construction_is_validated() {
        assert!(BlaschkeProduct::new(vec![C64::new(1.0, 0.0)], C64::new(1.0, 0.0)).is_err());
        assert!(BlaschkeProduct::new(vec![], C64::new(0.5, 0.0)).is_err());
        let json = r#"{"zeros":[[0,0]],"unimodular":[1,0]}"#;
        let b: BlaschkeProduct = serde_json::from_str(json).unwrap();
        assert_eq!(b.degree(), 1);
        assert!(
            serde_json::from_str::<BlaschkeProduct>(r#"{"zeros":[[2,0]],"unimodular":[1,0]}"#)
                .is_err()
        );
    }
}
