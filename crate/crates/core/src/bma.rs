//! Best Möbius approximations, their poles, the Pommerenke operator and the
//! invariance transforms of the pole function.

use serde::Serialize;

use crate::jet::{Jet3, C64};
use crate::model::{
    AnalyticModel, ClassSpec, JetSource, LocalData, ModelError, ModelKind, PreSchwarzian,
};
use crate::moebius::{ExtendedPoint, MoebiusMap};

/// Dead band for the point classification.
pub const CLASSIFY_TOL: f64 = 1e-12;

const ZERO: C64 = C64::new(0.0, 0.0);

/// Möbius map with second-order contact with `f` at `ζ`:
/// `f(ζ) + (z−ζ) f'(ζ) / (1 − ½ (z−ζ) q(ζ))`.
pub fn bma(model: &AnalyticModel, zeta: C64) -> Result<MoebiusMap, ModelError> {
    let j = model.jet_at(zeta)?;
    if j.d1 == ZERO {
        return Err(ModelError::NotLocallyUnivalent(zeta));
    }
    let q = j.d2 / j.d1;
    let a = j.d1 - 0.5 * j.v * q;
    let b = j.v - zeta * a;
    let c = -0.5 * q;
    let d = 1.0 + 0.5 * q * zeta;
    // the determinant equals f'(ζ) ≠ 0
    MoebiusMap::new(a, b, c, d).ok_or(ModelError::NotLocallyUnivalent(zeta))
}

/// `ζ + 2/q`, or `∞` when `q = 0`.
pub fn pole_from_q(zeta: C64, q: C64) -> ExtendedPoint {
    if q == ZERO {
        ExtendedPoint::Infinity
    } else {
        ExtendedPoint::Finite(zeta + 2.0 / q)
    }
}

/// Pole of the best Möbius approximation at `ζ`.
pub fn pole(model: &AnalyticModel, zeta: C64) -> Result<ExtendedPoint, ModelError> {
    Ok(pole_from_q(zeta, model.preschwarzian(zeta)?.q))
}

/// `(1 − |z|²) q / 2 − z̄`.
pub fn a_from_q(z: C64, q: C64) -> C64 {
    (1.0 - z.norm_sqr()) * q * 0.5 - z.conj()
}

/// Pommerenke's operator `A_f(z)`.
pub fn a_operator(model: &AnalyticModel, z: C64) -> Result<C64, ModelError> {
    Ok(a_from_q(z, model.preschwarzian(z)?.q))
}

/// Residual of `P_f(z) = (w + z)/(1 + z̄ w)`, `w = 1/A_f(z)`.
///
/// The residual is measured relative to `max(1, |P_f|)`. When `P_f = ∞` or
/// `A_f = 0` the reciprocal form `1/P_f = (A_f + z̄)/(1 + z A_f)` is checked.
pub fn lemma_pole_identity(model: &AnalyticModel, z: C64) -> Result<f64, ModelError> {
    let q = model.preschwarzian(z)?.q;
    let a = a_from_q(z, q);
    Ok(match pole_from_q(z, q) {
        ExtendedPoint::Finite(p) if a != ZERO => {
            let w = a.inv();
            let rhs = (w + z) / (1.0 + z.conj() * w);
            (p - rhs).norm() / p.norm().max(1.0)
        }
        p => {
            let recip = p.recip().finite().unwrap_or(ZERO);
            (recip - (a + z.conj()) / (1.0 + z * a)).norm()
        }
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Radial {
    /// `|P_f(ζ)| > |ζ|`.
    Outward,
    OnCircle,
    Inward,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PointClassification {
    pub radial: Radial,
    /// `0`, `ζ` and `P_f(ζ)` lie on one line.
    pub collinear: bool,
    /// `P_f(ζ) = −ζ`.
    pub antipodal: bool,
    /// `Re{1 + ζ q(ζ)}`.
    pub re_value: f64,
}

pub fn classify_from_q(zeta: C64, q: C64) -> PointClassification {
    let v = 1.0 + zeta * q;
    let radial = if v.re > CLASSIFY_TOL {
        Radial::Outward
    } else if v.re < -CLASSIFY_TOL {
        Radial::Inward
    } else {
        Radial::OnCircle
    };
    let nonzero = zeta != ZERO;
    PointClassification {
        radial,
        collinear: (zeta * q).im.abs() <= CLASSIFY_TOL,
        antipodal: nonzero && v.norm() <= CLASSIFY_TOL,
        re_value: v.re,
    }
}

/// Position of `P_f(ζ)` relative to the circle `|w| = |ζ|` and the line
/// through `0` and `ζ`, decided by `1 + ζ q(ζ)`.
pub fn classify_point(model: &AnalyticModel, zeta: C64) -> Result<PointClassification, ModelError> {
    Ok(classify_from_q(zeta, model.preschwarzian(zeta)?.q))
}

/// `Sf = q' − q²/2`.
pub fn schwarzian(model: &AnalyticModel, z: C64) -> Result<C64, ModelError> {
    Ok(model.preschwarzian(z)?.schwarzian())
}

fn transformed(
    local: LocalData,
    full: impl FnOnce(Jet3) -> Jet3,
    pre: impl FnOnce(PreSchwarzian) -> PreSchwarzian,
) -> LocalData {
    match local {
        LocalData::Full(j) => LocalData::Full(full(j)),
        LocalData::PreSchwarzian(p) => LocalData::PreSchwarzian(pre(p)),
    }
}

#[derive(Debug)]
struct Conjugated {
    inner: AnalyticModel,
    a: C64,
}

impl JetSource for Conjugated {
    fn kind(&self) -> ModelKind {
        self.inner.kind()
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        let a = self.a;
        let den = 1.0 + a.conj() * z;
        let k = 1.0 - a.norm_sqr();
        let s = Jet3::new(
            (z + a) / den,
            k / (den * den),
            -2.0 * a.conj() * k / (den * den * den),
            6.0 * a.conj() * a.conj() * k / (den * den * den * den),
        );
        let local = self.inner.local(s.v)?;
        Ok(transformed(
            local,
            |f| s.chain(f.v, f.d1, f.d2, f.d3),
            |p| {
                let r2 = s.d2 / s.d1;
                PreSchwarzian {
                    q: p.q * s.d1 + r2,
                    dq: p.dq * s.d1 * s.d1 + p.q * s.d2 + (s.d3 / s.d1 - r2 * r2),
                }
            },
        ))
    }
}

/// The model of `f ∘ σ_a`, `σ_a(z) = (z + a)/(1 + āz)`.
///
/// Orders are invariant under this composition and carried over; of the
/// class tags only convexity (a property of the image) survives.
pub fn conjugate_by_automorphism(
    model: &AnalyticModel,
    a: C64,
) -> Result<AnalyticModel, ModelError> {
    if !(a.norm() < 1.0) {
        return Err(ModelError::OutsideDisk(a));
    }
    if a == ZERO {
        return Ok(model.clone());
    }
    let convex = ClassSpec::ConvexOrder { alpha: 0.0 };
    let classes = if model.belongs_to(&convex) {
        vec![convex]
    } else {
        Vec::new()
    };
    let label = format!("{} o sigma[{a}]", model.label());
    Ok(AnalyticModel::new(
        label,
        Conjugated {
            inner: model.clone(),
            a,
        },
    )
    .with_classes(classes)
    .with_orders(model.known_orders()))
}

#[derive(Debug)]
struct Dilated {
    inner: AnalyticModel,
    r: f64,
}

impl JetSource for Dilated {
    fn kind(&self) -> ModelKind {
        self.inner.kind()
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        let r = self.r;
        Ok(transformed(
            self.inner.local(z * r)?,
            |f| Jet3::new(f.v / r, f.d1, f.d2 * r, f.d3 * r * r),
            |p| PreSchwarzian {
                q: p.q * r,
                dq: p.dq * r * r,
            },
        ))
    }
}

/// The model of `f_r(z) = f(r z)/r`. Subordination classes are hereditary,
/// so the class tags are kept.
pub fn dilate(model: &AnalyticModel, r: f64) -> Result<AnalyticModel, ModelError> {
    if !(r > 0.0 && r <= 1.0) {
        return Err(ModelError::InvalidParameter(format!(
            "dilation radius {r} is outside (0, 1]"
        )));
    }
    let label = format!("{} dilated by {r}", model.label());
    Ok(AnalyticModel::new(
        label,
        Dilated {
            inner: model.clone(),
            r,
        },
    )
    .with_classes(model.classes().to_vec()))
}

#[derive(Debug)]
struct Affine {
    inner: AnalyticModel,
    a: C64,
    b: C64,
}

impl JetSource for Affine {
    fn kind(&self) -> ModelKind {
        self.inner.kind()
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        let (a, b) = (self.a, self.b);
        Ok(transformed(self.inner.local(z)?, |f| f.scale(a) + b, |p| p))
    }
}

/// The model of `a f + b`, `a ≠ 0`; the pre-Schwarzian is unchanged.
pub fn affine(model: &AnalyticModel, a: C64, b: C64) -> Result<AnalyticModel, ModelError> {
    if a == ZERO {
        return Err(ModelError::InvalidParameter(
            "affine factor must be nonzero".into(),
        ));
    }
    let label = format!("{a} * ({}) + {b}", model.label());
    Ok(AnalyticModel::new(
        label,
        Affine {
            inner: model.clone(),
            a,
            b,
        },
    )
    .with_classes(model.classes().to_vec())
    .with_orders(model.known_orders()))
}
