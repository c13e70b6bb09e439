//! Schwarz functions `h(z) = z g(z)` built from scaled Blaschke products.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::ModelError;
use crate::blaschke::BlaschkeProduct;
use crate::jet::{Jet3, C64};

/// Largest modulus of a randomly drawn Blaschke zero.
pub const MAX_RANDOM_ZERO: f64 = 0.8;

/// Highest Blaschke degree the generators accept.
pub const MAX_SELF_MAP_DEGREE: usize = 3;

/// `g = scale · B` with `B` a finite Blaschke product and `scale ∈ [0, 1]`,
/// so `|g| ≤ 1` and `h = z g` is a self-map of the disk fixing 0.
#[derive(Debug, Clone, PartialEq)]
pub struct SelfMapModel {
    blaschke: BlaschkeProduct,
    scale: f64,
}

impl SelfMapModel {
    pub fn new(blaschke: BlaschkeProduct, scale: f64) -> Result<Self, ModelError> {
        if !(0.0..=1.0).contains(&scale) {
            return Err(ModelError::InvalidParameter(format!(
                "self-map scale {scale} is outside [0, 1]"
            )));
        }
        Ok(Self { blaschke, scale })
    }

    /// `g ≡ c` with `|c| ≤ 1`.
    pub fn constant(c: C64) -> Result<Self, ModelError> {
        if c.norm() > 1.0 {
            return Err(ModelError::InvalidParameter(format!(
                "constant self-map {c} has modulus above 1"
            )));
        }
        let unimodular = if c.norm() == 0.0 {
            C64::new(1.0, 0.0)
        } else {
            c / c.norm()
        };
        let blaschke = BlaschkeProduct::new(Vec::new(), unimodular)
            .map_err(|e| ModelError::InvalidParameter(e.to_string()))?;
        Self::new(blaschke, c.norm())
    }

    pub fn blaschke(&self) -> &BlaschkeProduct {
        &self.blaschke
    }

    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn degree(&self) -> usize {
        self.blaschke.degree()
    }

    pub fn g(&self, z: C64) -> C64 {
        self.blaschke.eval(z) * self.scale
    }

    pub fn g_jet(&self, z: C64) -> Jet3 {
        self.blaschke.jet(z) * self.scale
    }

    pub fn h(&self, z: C64) -> C64 {
        z * self.g(z)
    }

    pub fn h_jet(&self, z: C64) -> Jet3 {
        Jet3::variable(z) * self.g_jet(z)
    }
}

/// Blaschke product of the given degree with zeros uniform in
/// `|z| ≤ 0.8` and a uniform unimodular constant; deterministic in `seed`.
pub fn random_self_map(seed: u64, degree: usize) -> Result<SelfMapModel, ModelError> {
    if degree > MAX_SELF_MAP_DEGREE {
        return Err(ModelError::InvalidParameter(format!(
            "self-map degree {degree} exceeds {MAX_SELF_MAP_DEGREE}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let zeros = (0..degree)
        .map(|_| {
            let r = MAX_RANDOM_ZERO * rng.gen::<f64>().sqrt();
            C64::from_polar(r, std::f64::consts::TAU * rng.gen::<f64>())
        })
        .collect();
    let unimodular = C64::from_polar(1.0, std::f64::consts::TAU * rng.gen::<f64>());
    let blaschke = BlaschkeProduct::new(zeros, unimodular)
        .map_err(|e| ModelError::InvalidParameter(e.to_string()))?;
    SelfMapModel::new(blaschke, 1.0)
}
