//! Models defined by a prescribed Schwarzian derivative.
//!
//! Given `Sf`, the pre-Schwarzian solves the Riccati equation
//! `q' = Sf + q²/2`. With `q(0) = 0` (the normalization `f''(0) = 0`) it is
//! integrated along the segment from the origin with classical RK4.

use super::{
    AnalyticModel, ClassSpec, JetSource, LocalData, ModelError, ModelKind, PreSchwarzian,
    SelfMapModel,
};
use crate::jet::C64;
use crate::schwarzian::SchwarzianProfile;

/// Largest radial step of the Riccati integrator.
pub const RICCATI_STEP: f64 = 1e-3;

/// `q(z)` and `q'(z)` for the solution of `q' = Sf + q²/2`, `q(0) = 0`.
///
/// Steps shrink to an eighth of the distance to the unit circle so that
/// points very close to the boundary keep full accuracy.
pub fn riccati_preschwarzian(sf: impl Fn(C64) -> C64, z: C64) -> PreSchwarzian {
    let radius = z.norm();
    let zero = C64::new(0.0, 0.0);
    if radius == 0.0 {
        return PreSchwarzian {
            q: zero,
            dq: sf(zero),
        };
    }
    // dQ/du = z (Sf(u z) + Q²/2) on u ∈ [0, 1]
    let rhs = |u: f64, q: C64| z * (sf(z * u) + 0.5 * q * q);
    let (mut r, mut q) = (0.0, zero);
    while r < radius {
        let h_r = RICCATI_STEP.min((1.0 - r) / 8.0).min(radius - r);
        let (u, h) = (r / radius, h_r / radius);
        let k1 = rhs(u, q);
        let k2 = rhs(u + 0.5 * h, q + 0.5 * h * k1);
        let k3 = rhs(u + 0.5 * h, q + 0.5 * h * k2);
        let k4 = rhs(u + h, q + h * k3);
        q += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        r = if radius - r - h_r <= 1e-15 {
            radius
        } else {
            r + h_r
        };
    }
    PreSchwarzian {
        q,
        dq: sf(z) + 0.5 * q * q,
    }
}

#[derive(Debug, Clone)]
struct RiccatiSource {
    profile: SchwarzianProfile,
    selfmap: SelfMapModel,
}

impl RiccatiSource {
    fn schwarzian(&self, z: C64) -> C64 {
        self.profile.analytic_weight(z) * self.selfmap.g(z)
    }
}

impl JetSource for RiccatiSource {
    fn kind(&self) -> ModelKind {
        ModelKind::PreSchwarzianOnly
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        Ok(LocalData::PreSchwarzian(riccati_preschwarzian(
            |w| self.schwarzian(w),
            z,
        )))
    }
}

/// The normalized (`f''(0) = 0`) model with `Sf = w(z)·g(z)`, where `w` is
/// the profile's analytic weight and `g` the self-map's `g`, so that `|Sf|`
/// obeys the profile's bound.
pub fn prescribed_schwarzian(
    profile: SchwarzianProfile,
    selfmap: SelfMapModel,
) -> Result<AnalyticModel, ModelError> {
    let profile = profile.validated()?;
    let classes = match profile {
        SchwarzianProfile::Nehari { t } => vec![ClassSpec::Nehari { t }],
        // |Sf| ≤ 2a² ≤ 2a²/(1−|z|²)²
        SchwarzianProfile::Constant { a } if a * a <= 1.0 => vec![ClassSpec::Nehari { t: a * a }],
        _ => Vec::new(),
    };
    let label = format!("prescribed Schwarzian {profile}");
    Ok(AnalyticModel::new(label, RiccatiSource { profile, selfmap }).with_classes(classes))
}
