//! Schwarzian-derivative criteria: bounds on `|Sf|` that force pole
//! locations, envelopes for `|f''/f'|` and sampled convexity certificates.

use std::f64::consts::FRAC_PI_2;
use std::fmt;
use std::sync::OnceLock;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::bma::pole_from_q;
use crate::bounds::{BoundReport, Verdict, BOUND_TOL};
use crate::jet::C64;
use crate::model::{AnalyticModel, ModelError, PreSchwarzian};
use crate::sampling::DiskSampler;
use crate::search::GridSearch;

/// Samples used by certificates unless the caller overrides them.
pub const CERTIFICATE_SAMPLES: usize = 10_000;
/// Radius cap for certificate sampling.
pub const CERTIFICATE_RADIUS_CAP: f64 = 1.0 - 1e-4;
/// `|q(0)|` accepted as `f''(0) = 0`.
pub const NORMALIZATION_TOL: f64 = 1e-10;

/// A pointwise bound `|Sf(z)| ≤ bound(|z|)` together with the envelope it
/// implies for `|f''/f'|` when `f''(0) = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "profile", rename_all = "snake_case")]
pub enum SchwarzianProfile {
    /// `|Sf| ≤ 2a²`, envelope `2a·tan(a r)`.
    Constant { a: f64 },
    /// `|Sf| ≤ n r^{n−1} − r^{2n}/2`, envelope `rⁿ`.
    Power { n: u32 },
    /// `|Sf| ≤ (m+½) r^m`, envelope `r^{m+1}`.
    PowerSimple { m: u32 },
    /// `|Sf| ≤ 2t/(1−r²)²`, envelope `2t r/(1−r²)`.
    Nehari { t: f64 },
}

fn invalid(msg: String) -> ModelError {
    ModelError::InvalidParameter(msg)
}

impl SchwarzianProfile {
    pub fn validated(self) -> Result<Self, ModelError> {
        let ok = match self {
            SchwarzianProfile::Constant { a } => a > 0.0 && a < FRAC_PI_2,
            SchwarzianProfile::Power { n } => n >= 1,
            SchwarzianProfile::PowerSimple { .. } => true,
            SchwarzianProfile::Nehari { t } => t > 0.0 && t <= 1.0,
        };
        if ok {
            Ok(self)
        } else {
            Err(invalid(format!(
                "Schwarzian profile {self} has parameters outside their range"
            )))
        }
    }

    /// The constant profile at [`critical_a`].
    pub fn critical() -> Self {
        SchwarzianProfile::Constant { a: critical_a() }
    }

    /// Right-hand side of the hypothesis `|Sf(z)| ≤ bound(|z|)`.
    pub fn bound(&self, r: f64) -> f64 {
        match *self {
            SchwarzianProfile::Constant { a } => 2.0 * a * a,
            SchwarzianProfile::Power { n } => {
                n as f64 * r.powi(n as i32 - 1) - 0.5 * r.powi(2 * n as i32)
            }
            SchwarzianProfile::PowerSimple { m } => (m as f64 + 0.5) * r.powi(m as i32),
            SchwarzianProfile::Nehari { t } => 2.0 * t / (1.0 - r * r).powi(2),
        }
    }

    /// Upper bound for `|f''/f'|` on `|z| = r` under the hypothesis and
    /// `f''(0) = 0`.
    pub fn envelope(&self, r: f64) -> f64 {
        match *self {
            SchwarzianProfile::Constant { a } => 2.0 * a * (a * r).tan(),
            SchwarzianProfile::Power { n } => r.powi(n as i32),
            SchwarzianProfile::PowerSimple { m } => r.powi(m as i32 + 1),
            SchwarzianProfile::Nehari { t } => 2.0 * t * r / (1.0 - r * r),
        }
    }

    /// An analytic function whose modulus is at most `bound(|z|)`; times a
    /// self-map of the disk it gives admissible Schwarzians.
    pub fn analytic_weight(&self, z: C64) -> C64 {
        match *self {
            SchwarzianProfile::Constant { a } => C64::new(2.0 * a * a, 0.0),
            // (n−½)r^{n−1} ≤ n r^{n−1} − r^{2n}/2 on [0, 1]
            SchwarzianProfile::Power { n } => (n as f64 - 0.5) * z.powi(n as i32 - 1),
            SchwarzianProfile::PowerSimple { m } => (m as f64 + 0.5) * z.powi(m as i32),
            SchwarzianProfile::Nehari { t } => 2.0 * t / (1.0 - z * z).powi(2),
        }
    }
}

impl fmt::Display for SchwarzianProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchwarzianProfile::Constant { a } => write!(f, "constant(a={a})"),
            SchwarzianProfile::Power { n } => write!(f, "power(n={n})"),
            SchwarzianProfile::PowerSimple { m } => write!(f, "power_simple(m={m})"),
            SchwarzianProfile::Nehari { t } => write!(f, "nehari(t={t})"),
        }
    }
}

fn critical_residual(a: f64) -> f64 {
    2.0 * a * a.tan() - 1.0
}

/// First positive solution of `2a·tan(a) = 1`, by bisection on `(0, π/2)`.
pub fn critical_a() -> f64 {
    static A: OnceLock<f64> = OnceLock::new();
    *A.get_or_init(|| {
        let (mut lo, mut hi) = (0.0_f64, FRAC_PI_2 - 1e-12);
        while hi - lo > 0.0 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if critical_residual(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        if critical_residual(lo).abs() <= critical_residual(hi).abs() {
            lo
        } else {
            hi
        }
    })
}

/// `2a·tan(a) − 1` at [`critical_a`].
pub fn critical_a_residual() -> f64 {
    critical_residual(critical_a())
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SchwarzianError {
    #[error("hypothesis fails at {witness}: {what}")]
    Hypothesis { what: String, witness: C64 },
    #[error(transparent)]
    Model(#[from] ModelError),
}

/// Outcome of [`convexity_certificate`].
#[derive(Debug, Clone, PartialEq)]
pub enum Certificate {
    CertifiedConvex {
        /// Smallest sampled `|P_f|` (infinite when `q` vanishes throughout).
        min_pole_modulus: f64,
        witness: C64,
        samples: usize,
    },
    NotApplicable {
        reason: String,
        witness: Option<C64>,
    },
}

impl Certificate {
    pub fn is_certified(&self) -> bool {
        matches!(self, Certificate::CertifiedConvex { .. })
    }
}

/// Sampler with the certificate defaults.
pub fn certificate_sampler(seed: u64) -> DiskSampler {
    DiskSampler::new(CERTIFICATE_SAMPLES, seed).with_radius_cap(CERTIFICATE_RADIUS_CAP)
}

fn preschwarzians(model: &AnalyticModel, points: &[C64]) -> Result<Vec<PreSchwarzian>, ModelError> {
    points.par_iter().map(|&z| model.preschwarzian(z)).collect()
}

fn normalization(model: &AnalyticModel) -> Result<C64, ModelError> {
    Ok(model.preschwarzian(C64::new(0.0, 0.0))?.q)
}

fn exceeds(value: f64, bound: f64) -> bool {
    value > bound * (1.0 + 1e-9) + 1e-12
}

/// Checks `f''(0) = 0` and `|Sf| ≤ profile.bound(|z|)` at the points.
fn check_hypothesis(
    profile: &SchwarzianProfile,
    points: &[C64],
    data: &[PreSchwarzian],
    q0: C64,
) -> Result<(), SchwarzianError> {
    if q0.norm() > NORMALIZATION_TOL {
        return Err(SchwarzianError::Hypothesis {
            what: format!("f''(0) != 0 (|q(0)| = {:e})", q0.norm()),
            witness: C64::new(0.0, 0.0),
        });
    }
    for (z, d) in points.iter().zip(data) {
        let s = d.schwarzian().norm();
        let b = profile.bound(z.norm());
        if exceeds(s, b) {
            return Err(SchwarzianError::Hypothesis {
                what: format!("|Sf| = {s} exceeds the {profile} bound {b}"),
                witness: *z,
            });
        }
    }
    Ok(())
}

/// Sampled convexity certificate: the profile hypothesis holds, `|q|` stays
/// below the envelope, the envelope forces `|P_f| ≥ 2/env(r) − r ≥ 1` up to
/// the sampler's radius cap, and the sampled poles indeed avoid the disk.
pub fn convexity_certificate(
    model: &AnalyticModel,
    profile: &SchwarzianProfile,
    sampler: &DiskSampler,
) -> Result<Certificate, ModelError> {
    let profile = profile.validated()?;
    let cap = sampler.radius_cap;
    let implied = 2.0 / profile.envelope(cap) - cap;
    if !(implied >= 1.0) {
        return Ok(Certificate::NotApplicable {
            reason: format!("{profile} does not force |P_f| >= 1 near the boundary (2/env - r = {implied} at r = {cap})"),
            witness: None,
        });
    }
    let points = sampler.to_vec();
    let q0 = normalization(model)?;
    let data = preschwarzians(model, &points)?;
    if let Err(SchwarzianError::Hypothesis { what, witness }) =
        check_hypothesis(&profile, &points, &data, q0)
    {
        return Ok(Certificate::NotApplicable {
            reason: what,
            witness: Some(witness),
        });
    }
    let mut best = (f64::INFINITY, C64::new(0.0, 0.0));
    for (z, d) in points.iter().zip(&data) {
        let env = profile.envelope(z.norm());
        if exceeds(d.q.norm(), env) {
            return Ok(Certificate::NotApplicable {
                reason: format!("|f''/f'| = {} exceeds the envelope {env}", d.q.norm()),
                witness: Some(*z),
            });
        }
        let p = pole_from_q(*z, d.q).norm();
        if p < best.0 {
            best = (p, *z);
        }
    }
    if best.0 < 1.0 - 1e-6 {
        return Ok(Certificate::NotApplicable {
            reason: format!("sampled |P_f| = {} < 1 contradicts the envelope", best.0),
            witness: Some(best.1),
        });
    }
    Ok(Certificate::CertifiedConvex {
        min_pole_modulus: best.0,
        witness: best.1,
        samples: points.len(),
    })
}

/// Smallest `|P_f|` over the disk of radius `radius_cap`, located by grid
/// search.
pub fn min_pole_modulus(model: &AnalyticModel, radius_cap: f64) -> Result<(f64, C64), ModelError> {
    GridSearch::default()
        .with_radius_cap(radius_cap)
        .minimize(|z| {
            model
                .preschwarzian(z)
                .ok()
                .map(|p| pole_from_q(z, p.q).norm())
        })
        .map(|e| (e.value, e.witness))
        .ok_or_else(|| invalid(format!("`{}` could not be evaluated", model.label())))
}

/// Radius of the disk on which `(1−|z|²)²|Sf| ≤ 2t`, `f''(0) = 0` force
/// `|P_f| ≥ 1`: `(1−r²)/(t r) − r ≥ 1` exactly for `r ≤ 1/(1+t)`.
pub fn nehari_disk_radius(t: f64) -> f64 {
    1.0 / (1.0 + t)
}

/// Checks `|P_f| ≥ 1` on the samples with `|z| ≤ 1/(1+t)`, after sampling
/// the hypothesis `(1−|z|²)²|Sf| ≤ 2t` with `f''(0) = 0`.
pub fn nehari_disk_check(
    model: &AnalyticModel,
    t: f64,
    sampler: &DiskSampler,
) -> Result<BoundReport, SchwarzianError> {
    let profile = SchwarzianProfile::Nehari { t }.validated()?;
    let points = sampler.to_vec();
    let data = preschwarzians(model, &points)?;
    check_hypothesis(&profile, &points, &data, normalization(model)?)?;
    let radius = nehari_disk_radius(t);
    let mut samples = 0;
    let mut best = (f64::INFINITY, C64::new(0.0, 0.0));
    for (z, d) in points.iter().zip(&data) {
        if z.norm() <= radius {
            samples += 1;
            let m = pole_from_q(*z, d.q).norm() - 1.0;
            if m < best.0 {
                best = (m, *z);
            }
        }
    }
    Ok(BoundReport {
        bound: format!("nehari_unit_disk(t={t})"),
        model: model.label().to_string(),
        samples,
        min_margin: best.0,
        witness: best.1,
        verdict: if best.0 >= -BOUND_TOL {
            Verdict::Holds
        } else {
            Verdict::Violated
        },
        sharpness_gap: None,
    })
}

/// `2/(√(k²+8) + k)`: in `N₀`, `|P_f(z)| ≤ k` forces `|z|` at least this.
pub fn pole_radius_bound(k: f64) -> f64 {
    2.0 / ((k * k + 8.0).sqrt() + k)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusCheck {
    pub k: f64,
    pub radius: f64,
    /// Samples with `|P_f| ≤ k`.
    pub qualifying: usize,
    /// Smallest `|z| − radius` over qualifying samples (`+∞` if none).
    pub min_excess: f64,
    pub witness: Option<C64>,
}

impl RadiusCheck {
    pub fn holds(&self) -> bool {
        self.min_excess >= -BOUND_TOL
    }
}

/// Verifies that every sample with `|P_f| ≤ k` lies outside the disk of
/// radius [`pole_radius_bound`], after sampling the `N₀` hypothesis.
pub fn pole_radius_check(
    model: &AnalyticModel,
    k: f64,
    sampler: &DiskSampler,
) -> Result<RadiusCheck, SchwarzianError> {
    if !(k > 1.0) {
        return Err(ModelError::InvalidParameter(format!("k = {k} must exceed 1")).into());
    }
    let points = sampler.to_vec();
    let data = preschwarzians(model, &points)?;
    check_hypothesis(
        &SchwarzianProfile::Nehari { t: 1.0 },
        &points,
        &data,
        normalization(model)?,
    )?;
    let radius = pole_radius_bound(k);
    let mut out = RadiusCheck {
        k,
        radius,
        qualifying: 0,
        min_excess: f64::INFINITY,
        witness: None,
    };
    for (z, d) in points.iter().zip(&data) {
        if pole_from_q(*z, d.q).norm() <= k {
            out.qualifying += 1;
            let e = z.norm() - radius;
            if e < out.min_excess {
                out.min_excess = e;
                out.witness = Some(*z);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{
        catalog, prescribed_schwarzian, random_self_map, CatalogEntry, SelfMapModel,
    };

    #[test]
    fn critical_constant() {
        let a = critical_a();
        assert!((a - 0.653_271_187_094_403).abs() < 1e-13);
        assert!(critical_a_residual().abs() <= 1e-14);
        assert_eq!(format!("{a:.3}"), "0.653");
    }

    #[test]
    fn envelopes() {
        let c = SchwarzianProfile::Constant { a: 0.5 };
        assert!((c.envelope(1e-6) / 1e-6 - 0.5).abs() < 1e-9);
        assert!((SchwarzianProfile::Nehari { t: 1.0 }.envelope(0.5) - 4.0 / 3.0).abs() < 1e-15);
        assert!((SchwarzianProfile::Power { n: 2 }.envelope(0.3) - 0.09).abs() < 1e-15);
        for p in [
            c,
            SchwarzianProfile::Power { n: 3 },
            SchwarzianProfile::PowerSimple { m: 0 },
            SchwarzianProfile::Nehari { t: 0.3 },
        ] {
            assert_eq!(p.envelope(0.0), 0.0);
            let mut last = 0.0;
            for i in 1..100 {
                let e = p.envelope(i as f64 / 100.0);
                assert!(e > last);
                last = e;
            }
        }
    }

    #[test]
    fn radius_bounds() {
        assert!((pole_radius_bound(2.0) - 0.366_025_403_784_438_6).abs() < 1e-15);
        assert!((pole_radius_bound(1.0) - 0.5).abs() < 1e-15);
        assert!(pole_radius_bound(1e9) < 1e-8);
        for t in [0.25, 0.5, 1.0] {
            let r = nehari_disk_radius(t);
            assert!(((1.0 - r * r) / (t * r) - r - 1.0).abs() < 1e-14);
        }
        assert_eq!(nehari_disk_radius(1.0), 0.5);
    }

    #[test]
    fn mobius_is_certified() {
        let m = catalog(CatalogEntry::Identity).unwrap();
        let c = convexity_certificate(&m, &SchwarzianProfile::critical(), &certificate_sampler(1))
            .unwrap();
        assert!(
            matches!(c, Certificate::CertifiedConvex { min_pole_modulus, .. } if min_pole_modulus.is_infinite())
        );
    }

    #[test]
    fn exp_counterexample_is_not_applicable() {
        let a = critical_a();
        let m = catalog(CatalogEntry::ExpMap {
            b: C64::new(2.0 * a, 0.0),
        })
        .unwrap();
        let c = convexity_certificate(&m, &SchwarzianProfile::critical(), &certificate_sampler(1))
            .unwrap();
        assert!(matches!(c, Certificate::NotApplicable { .. }));
        let (min, w) = min_pole_modulus(&m, 1.0 - 1e-10).unwrap();
        assert!(
            (min - (1.0 / a - 1.0)).abs() <= 1e-9 && min < 1.0,
            "{min} at {w}"
        );
    }

    #[test]
    fn critical_constant_model_is_certified() {
        let s = random_self_map(3, 2).unwrap();
        let m = prescribed_schwarzian(SchwarzianProfile::critical(), s).unwrap();
        let c = convexity_certificate(
            &m,
            &SchwarzianProfile::critical(),
            &DiskSampler::new(2000, 2).with_radius_cap(CERTIFICATE_RADIUS_CAP),
        )
        .unwrap();
        match c {
            Certificate::CertifiedConvex {
                min_pole_modulus, ..
            } => assert!(min_pole_modulus >= 1.0 - 1e-6),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn nehari_profile_does_not_certify() {
        let m = catalog(CatalogEntry::Identity).unwrap();
        let c = convexity_certificate(
            &m,
            &SchwarzianProfile::Nehari { t: 1.0 },
            &DiskSampler::new(10, 1),
        )
        .unwrap();
        assert!(matches!(
            c,
            Certificate::NotApplicable { witness: None, .. }
        ));
    }

    #[test]
    fn nehari_models_satisfy_the_pole_propositions() {
        let s = random_self_map(8, 3).unwrap();
        let sampler = DiskSampler::new(1500, 4);
        let m = prescribed_schwarzian(SchwarzianProfile::Nehari { t: 0.5 }, s.clone()).unwrap();
        assert!(nehari_disk_check(&m, 0.5, &sampler).unwrap().holds());
        let m = prescribed_schwarzian(SchwarzianProfile::Nehari { t: 1.0 }, s).unwrap();
        for k in [1.5, 2.0, 5.0] {
            assert!(pole_radius_check(&m, k, &sampler).unwrap().holds());
        }
    }

    #[test]
    fn hypothesis_violations_are_reported() {
        // Sf ≡ 2 exceeds 2t/(1−r²)² with t = ½ near the origin
        let m = prescribed_schwarzian(
            SchwarzianProfile::Constant { a: 1.0 },
            SelfMapModel::constant(C64::new(1.0, 0.0)).unwrap(),
        )
        .unwrap();
        let err = nehari_disk_check(&m, 0.5, &DiskSampler::new(100, 1)).unwrap_err();
        assert!(matches!(err, SchwarzianError::Hypothesis { .. }));
    }

    #[test]
    fn power_hypothesis_dominance() {
        for m in 0..6u32 {
            let simple = SchwarzianProfile::PowerSimple { m };
            let power = SchwarzianProfile::Power { n: m + 1 };
            for i in 0..200 {
                let r = i as f64 / 199.0;
                assert!(simple.bound(r) <= power.bound(r) + 1e-15);
                assert!(power.analytic_weight(C64::new(r, 0.0)).norm() <= power.bound(r) + 1e-15);
            }
        }
    }
}
