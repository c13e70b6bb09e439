//! Pole-localization inequalities, sampled verification and sharpness
//! checks on extremal functions.
//!
//! Every bound is expressed as a margin oriented so that `margin ≥ 0` means
//! the inequality holds at the point. Upper bounds on `|P_f|` are negated.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use rayon::prelude::*;
use serde_json::{json, Value};
use thiserror::Error;

use crate::bma::pole_from_q;
use crate::jet::C64;
use crate::model::{AnalyticModel, CatalogEntry, ClassSpec, ModelError};
use crate::moebius::ExtendedPoint;
use crate::sampling::{ray_points, DiskSampler};
use crate::search::GridSearch;

/// A report holds when its minimum margin is at least `-BOUND_TOL`.
pub const BOUND_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundError {
    #[error("model `{model}` is not known to satisfy the hypothesis of {bound}: {hypothesis}")]
    HypothesisMismatch {
        bound: String,
        model: String,
        hypothesis: String,
    },
    #[error("invalid bound parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Bound {
    /// `|P_f| ≤ (1 + μ|z|)/(|z| + μ)` for `μ ≤ μ_f`.
    LowerOrder { mu: f64 },
    /// `|P_f| ≤ (1 − μ|z|)/(μ − |z|)` for `|z| < μ ≤ μ_f`: the modulus form
    /// of the inclusion disk.
    LowerOrderInner { mu: f64 },
    /// `P_f` avoids the disk with center `z(α²−1)/(α²−|z|²)` and radius
    /// `α(1−|z|²)/(α²−|z|²)`, for `α ≥ α_f`.
    ExclusionDisk { alpha: f64 },
    /// `P_f` lies in the analogous disk built from `μ ≤ μ_f`, for `|z| < μ`.
    InclusionDisk { mu: f64 },
    /// `|σ_{−z}(P_f(z))| ≥ 1/α` for `α ≥ α_f`.
    PseudoHyperbolic { alpha: f64 },
    /// `|P_f + αz/(1−α)| ≥ 1/(1−α)` for convex maps of order `α ∈ [0, 1)`.
    ConvexAlpha { alpha: f64 },
    /// `|P_f| ≥ (1 − |α||z|)/(1−α)` when `Re{1 + z q} ≥ α`, `α < 1`.
    ModulusAlpha { alpha: f64 },
    /// `|P_f| ≥ (2 − |A+B||z|)/(A−B)` on the Janowski class.
    Janowski { a: f64, b: f64 },
    /// `|P_f| ≥ (2 − |1−e^{2iα}||z|)/|1+e^{2iα}|` on the Robertson class.
    Robertson { alpha: f64 },
    /// `|P_f − z| ≥ (1−|z|²)/(2+|z|)` for normalized starlike maps.
    Starlike,
    /// `|P_f − z| ≥ 1 − |z|` for starlike maps of order ½.
    StarlikeHalf,
    /// `|P_f − z| ≥ 1 − |z|²` when `Re f' > 0`.
    Noshiro,
}

/// The eleven bounds of the suite; `lower_order_inner` is kept apart.
pub const BOUND_IDS: &[&str] = &[
    "lower_order",
    "exclusion_disk",
    "inclusion_disk",
    "pseudo_hyperbolic",
    "convex_alpha",
    "modulus_alpha",
    "janowski",
    "robertson",
    "starlike",
    "starlike_half",
    "noshiro",
];

fn invalid(msg: String) -> BoundError {
    BoundError::InvalidParameter(msg)
}

/// Center and radius of the order disks.
fn order_disk(z: C64, order: f64) -> (C64, f64) {
    let r2 = z.norm_sqr();
    let o2 = order * order;
    (z * ((o2 - 1.0) / (o2 - r2)), order * (1.0 - r2) / (o2 - r2))
}

impl Bound {
    pub fn validated(self) -> Result<Self, BoundError> {
        let ok = match self {
            Bound::LowerOrder { mu } => mu > 0.0 && mu.is_finite(),
            Bound::InclusionDisk { mu } | Bound::LowerOrderInner { mu } => mu > 0.0 && mu <= 1.0,
            Bound::ExclusionDisk { alpha } | Bound::PseudoHyperbolic { alpha } => {
                alpha >= 1.0 && alpha.is_finite()
            }
            Bound::ConvexAlpha { alpha } => (0.0..1.0).contains(&alpha),
            Bound::ModulusAlpha { alpha } => alpha < 1.0 && alpha.is_finite(),
            Bound::Janowski { a, b } => -1.0 <= b && b < a && a <= 1.0,
            Bound::Robertson { alpha } => alpha.abs() < FRAC_PI_2,
            Bound::Starlike | Bound::StarlikeHalf | Bound::Noshiro => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(invalid(format!(
                "{self} has parameters outside their range"
            )))
        }
    }

    pub fn id(&self) -> &'static str {
        match self {
            Bound::LowerOrder { .. } => "lower_order",
            Bound::LowerOrderInner { .. } => "lower_order_inner",
            Bound::ExclusionDisk { .. } => "exclusion_disk",
            Bound::InclusionDisk { .. } => "inclusion_disk",
            Bound::PseudoHyperbolic { .. } => "pseudo_hyperbolic",
            Bound::ConvexAlpha { .. } => "convex_alpha",
            Bound::ModulusAlpha { .. } => "modulus_alpha",
            Bound::Janowski { .. } => "janowski",
            Bound::Robertson { .. } => "robertson",
            Bound::Starlike => "starlike",
            Bound::StarlikeHalf => "starlike_half",
            Bound::Noshiro => "noshiro",
        }
    }

    /// Builds a bound from its id; `param` looks up `mu`, `alpha`, `A`, `B`.
    pub fn from_id(id: &str, param: impl Fn(&str) -> Option<f64>) -> Result<Self, BoundError> {
        let need = |key: &str| {
            param(key).ok_or_else(|| invalid(format!("bound `{id}` needs parameter `{key}`")))
        };
        let b = match id {
            "lower_order" => Bound::LowerOrder { mu: need("mu")? },
            "lower_order_inner" => Bound::LowerOrderInner { mu: need("mu")? },
            "exclusion_disk" => Bound::ExclusionDisk {
                alpha: need("alpha")?,
            },
            "inclusion_disk" => Bound::InclusionDisk { mu: need("mu")? },
            "pseudo_hyperbolic" => Bound::PseudoHyperbolic {
                alpha: need("alpha")?,
            },
            "convex_alpha" => Bound::ConvexAlpha {
                alpha: param("alpha").unwrap_or(0.0),
            },
            "modulus_alpha" => Bound::ModulusAlpha {
                alpha: need("alpha")?,
            },
            "janowski" => Bound::Janowski {
                a: need("A")?,
                b: need("B")?,
            },
            "robertson" => Bound::Robertson {
                alpha: need("alpha")?,
            },
            "starlike" => Bound::Starlike,
            "starlike_half" => Bound::StarlikeHalf,
            "noshiro" => Bound::Noshiro,
            _ => return Err(invalid(format!("unknown bound `{id}`"))),
        };
        b.validated()
    }

    /// Margin at `z` given `P_f(z)`; `None` where the bound does not apply.
    pub fn margin(&self, z: C64, p: ExtendedPoint) -> Option<f64> {
        let r = z.norm();
        let Some(p) = p.finite() else {
            // lower bounds on the pole hold vacuously at ∞, upper bounds fail
            return Some(match self {
                Bound::LowerOrder { .. } => f64::NEG_INFINITY,
                Bound::InclusionDisk { mu } | Bound::LowerOrderInner { mu } if r >= *mu => {
                    return None
                }
                Bound::InclusionDisk { .. } | Bound::LowerOrderInner { .. } => f64::NEG_INFINITY,
                _ => f64::INFINITY,
            });
        };
        Some(match *self {
            Bound::LowerOrder { mu } => (1.0 + mu * r) / (r + mu) - p.norm(),
            Bound::LowerOrderInner { mu } => {
                if r >= mu {
                    return None;
                }
                (1.0 - mu * r) / (mu - r) - p.norm()
            }
            Bound::ExclusionDisk { alpha } => {
                let (c, rho) = order_disk(z, alpha);
                (p - c).norm() - rho
            }
            Bound::InclusionDisk { mu } => {
                if r >= mu {
                    return None;
                }
                let (c, rho) = order_disk(z, mu);
                rho - (p - c).norm()
            }
            Bound::PseudoHyperbolic { alpha } => {
                let den = 1.0 - z.conj() * p;
                if den.norm() == 0.0 {
                    f64::INFINITY
                } else {
                    ((p - z) / den).norm() - 1.0 / alpha
                }
            }
            Bound::ConvexAlpha { alpha } => {
                (p + z * (alpha / (1.0 - alpha))).norm() - 1.0 / (1.0 - alpha)
            }
            Bound::ModulusAlpha { alpha } => p.norm() - (1.0 - alpha.abs() * r) / (1.0 - alpha),
            Bound::Janowski { a, b } => p.norm() - (2.0 - (a + b).abs() * r) / (a - b),
            Bound::Robertson { alpha } => {
                let lambda = C64::from_polar(1.0, 2.0 * alpha);
                p.norm() - (2.0 - (1.0 - lambda).norm() * r) / (1.0 + lambda).norm()
            }
            Bound::Starlike => (p - z).norm() - (1.0 - r * r) / (2.0 + r),
            Bound::StarlikeHalf => (p - z).norm() - (1.0 - r),
            Bound::Noshiro => (p - z).norm() - (1.0 - r * r),
        })
    }

    /// Human-readable hypothesis.
    pub fn hypothesis(&self) -> String {
        match *self {
            Bound::LowerOrder { mu }
            | Bound::LowerOrderInner { mu }
            | Bound::InclusionDisk { mu } => {
                format!("lower order at least {mu}")
            }
            Bound::ExclusionDisk { alpha } | Bound::PseudoHyperbolic { alpha } => {
                format!("upper order at most {alpha}")
            }
            Bound::ConvexAlpha { alpha } | Bound::ModulusAlpha { alpha } => {
                format!("Re(1 + z f''/f') >= {alpha}")
            }
            Bound::Janowski { a, b } => format!("member of {}", ClassSpec::Janowski { a, b }),
            Bound::Robertson { alpha } => format!("member of {}", ClassSpec::Robertson { alpha }),
            Bound::Starlike => "normalized starlike".into(),
            Bound::StarlikeHalf => "starlike of order 1/2".into(),
            Bound::Noshiro => "Re f' > 0".into(),
        }
    }

    /// Whether the model's tags (classes or known orders) meet the hypothesis.
    pub fn hypothesis_met(&self, model: &AnalyticModel) -> bool {
        let tol = 1e-12;
        match *self {
            Bound::LowerOrder { mu }
            | Bound::LowerOrderInner { mu }
            | Bound::InclusionDisk { mu } => {
                model.lower_order_bound().is_some_and(|m| m >= mu - tol)
            }
            Bound::ExclusionDisk { alpha } | Bound::PseudoHyperbolic { alpha } => {
                model.upper_order_bound().is_some_and(|u| u <= alpha + tol)
            }
            Bound::ConvexAlpha { alpha } | Bound::ModulusAlpha { alpha } => {
                model.belongs_to(&ClassSpec::ConvexOrder { alpha })
            }
            Bound::Janowski { a, b } => model.belongs_to(&ClassSpec::Janowski { a, b }),
            // the bound is even in α
            Bound::Robertson { alpha } => {
                model.belongs_to(&ClassSpec::Robertson { alpha })
                    || model.belongs_to(&ClassSpec::Robertson { alpha: -alpha })
            }
            Bound::Starlike => model.belongs_to(&ClassSpec::Starlike),
            Bound::StarlikeHalf => model.belongs_to(&ClassSpec::StarlikeHalf),
            Bound::Noshiro => model.belongs_to(&ClassSpec::Noshiro),
        }
    }
}

impl fmt::Display for Bound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Bound::LowerOrder { mu }
            | Bound::LowerOrderInner { mu }
            | Bound::InclusionDisk { mu } => {
                write!(f, "{}(mu={mu})", self.id())
            }
            Bound::ExclusionDisk { alpha }
            | Bound::PseudoHyperbolic { alpha }
            | Bound::ConvexAlpha { alpha }
            | Bound::ModulusAlpha { alpha }
            | Bound::Robertson { alpha } => write!(f, "{}(alpha={alpha})", self.id()),
            Bound::Janowski { a, b } => write!(f, "janowski(A={a}, B={b})"),
            _ => f.write_str(self.id()),
        }
    }
}

/// Where an extremal function attains equality.
#[derive(Debug, Clone, PartialEq)]
pub enum Locus {
    Everywhere,
    /// Rays `{r e^{iθ}}` for `0 < r < cap`.
    Rays {
        thetas: Vec<f64>,
        cap: Option<f64>,
    },
}

fn ray(theta: f64) -> Locus {
    Locus::Rays {
        thetas: vec![theta],
        cap: None,
    }
}

fn close(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-12
}

/// Equality locus of `bound` for the catalog function `entry`, if it is one
/// of the extremals of that bound.
pub fn equality_locus(entry: &CatalogEntry, bound: &Bound) -> Option<Locus> {
    match (*entry, *bound) {
        (CatalogEntry::Power { a }, Bound::LowerOrder { mu }) if a <= 1.0 && close(a, mu) => {
            Some(ray(0.0))
        }
        (CatalogEntry::Power { a }, Bound::LowerOrderInner { mu }) if a <= 1.0 && close(a, mu) => {
            // |P_f| grows like 1/(μ − r); stop short of −μ to keep the margin well conditioned
            Some(Locus::Rays {
                thetas: vec![PI],
                cap: Some(0.99 * mu),
            })
        }
        (CatalogEntry::Power { a }, Bound::InclusionDisk { mu }) if a <= 1.0 && close(a, mu) => {
            Some(Locus::Rays {
                thetas: vec![0.0],
                cap: Some(mu),
            })
        }
        (
            CatalogEntry::Power { a },
            Bound::ExclusionDisk { alpha } | Bound::PseudoHyperbolic { alpha },
        ) if a >= 1.0 && close(a, alpha) => Some(Locus::Rays {
            thetas: vec![0.0, PI],
            cap: None,
        }),
        (CatalogEntry::ConvexOrder { alpha }, Bound::ConvexAlpha { alpha: b })
            if close(alpha, b) =>
        {
            Some(Locus::Everywhere)
        }
        (CatalogEntry::ConvexOrder { alpha }, Bound::ModulusAlpha { alpha: b })
            if close(alpha, b) =>
        {
            if alpha == 0.0 {
                Some(Locus::Everywhere)
            } else {
                Some(ray(if alpha > 0.0 { 0.0 } else { PI }))
            }
        }
        (CatalogEntry::Janowski { a, b }, Bound::Janowski { a: a2, b: b2 })
            if close(a, a2) && close(b, b2) =>
        {
            let s = a + b;
            if s == 0.0 {
                Some(Locus::Everywhere)
            } else {
                // (A+B) z real and negative
                Some(ray(if s > 0.0 { PI } else { 0.0 }))
            }
        }
        (CatalogEntry::Robertson { alpha }, Bound::Robertson { alpha: b })
            if close(alpha.abs(), b.abs()) =>
        {
            if alpha == 0.0 {
                Some(Locus::Everywhere)
            } else {
                // (1 − λ) z real and positive
                let lambda = C64::from_polar(1.0, 2.0 * alpha);
                Some(ray(-(1.0 - lambda).arg()))
            }
        }
        (CatalogEntry::Koebe { theta }, Bound::Starlike) => Some(ray(-theta)),
        (CatalogEntry::HalfPlane { theta }, Bound::StarlikeHalf) => Some(ray(-theta)),
        // |P_f| ≡ 1 for the half-plane map
        (
            CatalogEntry::HalfPlane { .. },
            Bound::ConvexAlpha { alpha: 0.0 }
            | Bound::ModulusAlpha { alpha: 0.0 }
            | Bound::Janowski { a: 1.0, b: -1.0 }
            | Bound::Robertson { alpha: 0.0 }
            | Bound::LowerOrder { mu: 1.0 }
            | Bound::LowerOrderInner { mu: 1.0 }
            | Bound::InclusionDisk { mu: 1.0 }
            | Bound::ExclusionDisk { alpha: 1.0 }
            | Bound::PseudoHyperbolic { alpha: 1.0 },
        ) => Some(Locus::Everywhere),
        (CatalogEntry::NoshiroExtremal { theta }, Bound::Noshiro) => Some(Locus::Rays {
            thetas: vec![-theta, PI - theta],
            cap: None,
        }),
        _ => None,
    }
}

/// Points of the locus used to measure the sharpness gap.
pub fn locus_points(locus: &Locus, sampler: &DiskSampler) -> Vec<C64> {
    const PER_RAY: usize = 256;
    const EVERYWHERE: usize = 2000;
    match locus {
        Locus::Everywhere => sampler.points().take(EVERYWHERE).collect(),
        Locus::Rays { thetas, cap } => {
            let cap = cap.map_or(sampler.radius_cap, |c| {
                c.min(sampler.radius_cap) * (1.0 - 1e-9)
            });
            thetas
                .iter()
                .flat_map(|&t| ray_points(t, PER_RAY, cap))
                .collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Holds,
    Violated,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Holds => "holds",
            Verdict::Violated => "violated",
        }
    }
}

/// Outcome of checking one inequality on one model.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub bound: String,
    pub model: String,
    /// Samples at which the bound applied.
    pub samples: usize,
    pub min_margin: f64,
    pub witness: C64,
    pub verdict: Verdict,
    /// Largest `|margin|` along the equality locus of an extremal model.
    pub sharpness_gap: Option<f64>,
}

/// JSON number, or `"inf"`, `"-inf"`, `"nan"` for non-finite values.
pub fn json_real(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else if x.is_nan() {
        json!("nan")
    } else if x > 0.0 {
        json!("inf")
    } else {
        json!("-inf")
    }
}

impl BoundReport {
    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn to_json(&self) -> Value {
        json!({
            "bound": self.bound,
            "model": self.model,
            "samples": self.samples,
            "min_margin": json_real(self.min_margin),
            "witness": [self.witness.re, self.witness.im],
            "verdict": self.verdict.as_str(),
            "sharpness_gap": self.sharpness_gap.map(json_real),
        })
    }
}

/// Smallest margin with its point; ties go to the earliest sample so the
/// result does not depend on the parallel schedule.
fn min_margin(
    points: &[C64],
    margin: impl Fn(C64) -> Result<Option<f64>, ModelError> + Sync,
) -> Result<(f64, C64, usize), ModelError> {
    let margins: Vec<Option<f64>> = points
        .par_iter()
        .map(|&z| margin(z))
        .collect::<Result<_, _>>()?;
    let mut best = (f64::INFINITY, C64::new(0.0, 0.0), 0);
    let mut first = true;
    for (k, m) in margins.iter().enumerate() {
        if let Some(m) = *m {
            best.2 += 1;
            if first || m < best.0 || m.is_nan() {
                best.0 = m;
                best.1 = points[k];
                first = false;
            }
        }
    }
    Ok(best)
}

/// Margin of `bound` for `model` at `z`.
pub fn margin_at(model: &AnalyticModel, bound: &Bound, z: C64) -> Result<Option<f64>, ModelError> {
    if let Bound::InclusionDisk { mu } | Bound::LowerOrderInner { mu } = bound {
        if z.norm() >= *mu {
            return Ok(None);
        }
    }
    let q = model.preschwarzian(z)?.q;
    Ok(bound.margin(z, pole_from_q(z, q)))
}

/// Checks `bound` on `model` at the sampler's points. Unless
/// `assume_hypothesis` is set, the model's tags must meet the bound's
/// hypothesis.
pub fn verify(
    model: &AnalyticModel,
    bound: &Bound,
    sampler: &DiskSampler,
    assume_hypothesis: bool,
) -> Result<BoundReport, BoundError> {
    let bound = bound.validated()?;
    if !assume_hypothesis && !bound.hypothesis_met(model) {
        return Err(BoundError::HypothesisMismatch {
            bound: bound.to_string(),
            model: model.label().to_string(),
            hypothesis: bound.hypothesis(),
        });
    }
    let points = sampler.to_vec();
    let (min, witness, samples) = min_margin(&points, |z| margin_at(model, &bound, z))?;
    let sharpness_gap = match model.origin().and_then(|e| equality_locus(e, &bound)) {
        Some(locus) => {
            let pts = locus_points(&locus, sampler);
            let gaps: Vec<f64> = pts
                .par_iter()
                .map(|&z| margin_at(model, &bound, z).map(|m| m.map_or(0.0, f64::abs)))
                .collect::<Result<_, _>>()?;
            Some(gaps.into_iter().fold(0.0, f64::max))
        }
        None => None,
    };
    let verdict = if min >= -BOUND_TOL {
        Verdict::Holds
    } else {
        Verdict::Violated
    };
    Ok(BoundReport {
        bound: bound.to_string(),
        model: model.label().to_string(),
        samples,
        min_margin: min,
        witness,
        verdict,
        sharpness_gap,
    })
}

/// Outcome of [`implied_convexity_order`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpliedOrder {
    /// Smallest `|P_f|` found.
    pub min_pole_modulus: f64,
    pub witness: C64,
    /// `max(0, min |P_f| − 1)`.
    pub t_hat: f64,
    /// `t̂/(2 + t̂)`.
    pub implied_order: f64,
    /// Smallest sampled `Re{1 + z q}`.
    pub min_re: f64,
    /// `min_re ≥ implied_order − 1e-6`.
    pub consistent: bool,
}

/// Lower bound for the convexity order implied by `|P_f| ≥ 1 + t`.
///
/// Meaningful for convex models only (the caller's responsibility). The
/// infimum of `|P_f|` typically sits on the boundary, so it is located by a
/// grid search with a radius cap of `1 − 1e-10`; `Re{1 + z q}` is sampled
/// with `sampler`.
pub fn implied_convexity_order(
    model: &AnalyticModel,
    sampler: &DiskSampler,
) -> Result<ImpliedOrder, ModelError> {
    let search = GridSearch::default().with_radius_cap(1.0 - 1e-10);
    let found = search
        .minimize(|z| {
            model
                .preschwarzian(z)
                .ok()
                .map(|p| pole_from_q(z, p.q).norm())
        })
        .ok_or_else(|| {
            ModelError::InvalidParameter(format!("`{}` could not be evaluated", model.label()))
        })?;
    let t_hat = (found.value - 1.0).max(0.0);
    let implied = t_hat / (2.0 + t_hat);
    let points = sampler.to_vec();
    let res: Vec<f64> = points
        .par_iter()
        .map(|&z| model.preschwarzian(z).map(|p| (1.0 + z * p.q).re))
        .collect::<Result<_, _>>()?;
    let min_re = res.into_iter().fold(f64::INFINITY, f64::min);
    Ok(ImpliedOrder {
        min_pole_modulus: found.value,
        witness: found.witness,
        t_hat,
        implied_order: implied,
        min_re,
        consistent: min_re >= implied - 1e-6,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{catalog, random_class_member};

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn sampler() -> DiskSampler {
        DiskSampler::new(10_000, 42)
    }

    #[test]
    fn printed_lower_order_bound_fails_near_the_pole_of_the_power_map() {
        // P_f = (1 + z/2)/(1/2 + z) is unbounded near z = −1/2
        let m = catalog(CatalogEntry::Power { a: 0.5 }).unwrap();
        let rep = verify(&m, &Bound::LowerOrder { mu: 0.5 }, &sampler(), false).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
        assert!((rep.witness + 0.5).norm() < 0.1);
        // equality still holds along the positive axis
        assert!(rep.sharpness_gap.unwrap() <= 1e-9);
        let b = Bound::LowerOrder { mu: 1.0 };
        let p = ExtendedPoint::Finite(c(0.3, 0.4));
        assert!((b.margin(c(0.0, 0.0), p).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn inner_lower_order_bound_is_sharp_for_the_power_map() {
        for a in [0.3, 0.5, 0.8] {
            let m = catalog(CatalogEntry::Power { a }).unwrap();
            let rep = verify(&m, &Bound::LowerOrderInner { mu: a }, &sampler(), false).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert!(rep.sharpness_gap.unwrap() <= 1e-9, "{rep:?}");
        }
        // it is the largest modulus on the inclusion disk
        let (z, mu) = (c(0.1, -0.2), 0.6);
        let (center, rho) = order_disk(z, mu);
        assert!((center.norm() + rho - (1.0 - mu * z.norm()) / (mu - z.norm())).abs() < 1e-14);
    }

    #[test]
    fn infinite_poles() {
        let inf = ExtendedPoint::Infinity;
        let z = c(0.1, 0.0);
        assert_eq!(
            Bound::LowerOrder { mu: 0.5 }.margin(z, inf),
            Some(f64::NEG_INFINITY)
        );
        assert_eq!(
            Bound::InclusionDisk { mu: 0.5 }.margin(z, inf),
            Some(f64::NEG_INFINITY)
        );
        assert_eq!(Bound::InclusionDisk { mu: 0.05 }.margin(z, inf), None);
        for b in [
            Bound::ExclusionDisk { alpha: 1.0 },
            Bound::PseudoHyperbolic { alpha: 1.0 },
            Bound::Noshiro,
            Bound::Starlike,
        ] {
            assert_eq!(b.margin(z, inf), Some(f64::INFINITY));
        }
    }

    #[test]
    fn order_disks_reduce_to_the_unit_circle() {
        let z = c(0.3, -0.5);
        let p = ExtendedPoint::Finite(c(1.2, 0.4));
        let unit = p.norm() - 1.0;
        assert!((Bound::ExclusionDisk { alpha: 1.0 }.margin(z, p).unwrap() - unit).abs() < 1e-15);
        assert!((Bound::InclusionDisk { mu: 1.0 }.margin(z, p).unwrap() + unit).abs() < 1e-15);
        assert!((Bound::ConvexAlpha { alpha: 0.0 }.margin(z, p).unwrap() - unit).abs() < 1e-15);
    }

    #[test]
    fn power_two_exclusion_and_pseudo_hyperbolic() {
        let m = catalog(CatalogEntry::Power { a: 2.0 }).unwrap();
        for b in [
            Bound::ExclusionDisk { alpha: 2.0 },
            Bound::PseudoHyperbolic { alpha: 2.0 },
        ] {
            let rep = verify(&m, &b, &sampler(), false).unwrap();
            assert!(rep.holds(), "{rep:?}");
            assert!(rep.sharpness_gap.unwrap() <= 1e-9);
        }
        let x = c(0.4, 0.0);
        let mar = margin_at(&m, &Bound::PseudoHyperbolic { alpha: 2.0 }, x)
            .unwrap()
            .unwrap();
        assert!(mar.abs() < 1e-12);
    }

    #[test]
    fn inclusion_disk_for_the_power_map() {
        let m = catalog(CatalogEntry::Power { a: 0.5 }).unwrap();
        let rep = verify(&m, &Bound::InclusionDisk { mu: 0.5 }, &sampler(), false).unwrap();
        assert!(rep.holds() && rep.samples > 0 && rep.samples < 10_000);
        assert!(rep.sharpness_gap.unwrap() <= 1e-9);
    }

    #[test]
    fn hypothesis_is_enforced() {
        let m = catalog(CatalogEntry::ExpMap { b: c(1.3066, 0.0) }).unwrap();
        let b = Bound::ExclusionDisk { alpha: 1.0 };
        assert!(matches!(
            verify(&m, &b, &sampler(), false),
            Err(BoundError::HypothesisMismatch { .. })
        ));
        let rep = verify(&m, &b, &sampler(), true).unwrap();
        assert_eq!(rep.verdict, Verdict::Violated);
    }

    #[test]
    fn starlike_bound_on_koebe() {
        let m = catalog(CatalogEntry::Koebe { theta: 0.0 }).unwrap();
        let rep = verify(&m, &Bound::Starlike, &sampler(), false).unwrap();
        assert!(rep.holds());
        assert!(rep.sharpness_gap.unwrap() <= 1e-9);
        let p = ExtendedPoint::Finite(c(0.5, 0.0));
        assert_eq!(Bound::Starlike.margin(c(0.0, 0.0), p), Some(0.0));
    }

    #[test]
    fn half_plane_examples() {
        let m = catalog(CatalogEntry::HalfPlane { theta: 0.0 }).unwrap();
        assert_eq!(
            margin_at(&m, &Bound::StarlikeHalf, c(0.0, 0.0)).unwrap(),
            Some(0.0)
        );
        let imp = implied_convexity_order(&m, &DiskSampler::new(2000, 1)).unwrap();
        assert!(imp.implied_order <= 1e-9 && imp.consistent);
    }

    #[test]
    fn implied_order_formula() {
        // |P_f| ≡ 1.5: q = 2/(1.5 − z)
        let m = AnalyticModel::from_expr(crate::dsl::parse("1/(1.5-z)").unwrap());
        let imp = implied_convexity_order(&m, &DiskSampler::new(2000, 1)).unwrap();
        assert!((imp.implied_order - 0.2).abs() < 1e-9);
    }

    #[test]
    fn converse_fails_for_the_convex_order_extremal() {
        let m = catalog(CatalogEntry::ConvexOrder { alpha: 0.4 }).unwrap();
        let imp = implied_convexity_order(&m, &sampler()).unwrap();
        assert!(imp.implied_order <= 1e-9);
        assert!(imp.min_re >= 0.4 - 1e-9);
    }

    #[test]
    fn random_members_satisfy_their_bounds() {
        let cases = [
            (
                ClassSpec::ConvexOrder { alpha: 0.3 },
                Bound::ConvexAlpha { alpha: 0.3 },
            ),
            (
                ClassSpec::Ozaki { lambda: 0.8 },
                Bound::ModulusAlpha { alpha: -0.3 },
            ),
            (
                ClassSpec::Janowski { a: 0.5, b: -0.3 },
                Bound::Janowski { a: 0.5, b: -0.3 },
            ),
            (
                ClassSpec::Robertson { alpha: 0.7 },
                Bound::Robertson { alpha: 0.7 },
            ),
            (ClassSpec::Starlike, Bound::Starlike),
            (ClassSpec::StarlikeHalf, Bound::StarlikeHalf),
            (ClassSpec::Noshiro, Bound::Noshiro),
        ];
        for (class, bound) in cases {
            for seed in 0..3 {
                let m = random_class_member(class, seed, 3).unwrap();
                let rep = verify(&m, &bound, &DiskSampler::new(4000, seed), false).unwrap();
                assert!(rep.holds(), "{rep:?}");
                assert!(rep.sharpness_gap.is_none());
            }
        }
    }

    #[test]
    fn report_json() {
        let rep = BoundReport {
            bound: "noshiro".into(),
            model: "m".into(),
            samples: 3,
            min_margin: f64::INFINITY,
            witness: c(0.1, 0.2),
            verdict: Verdict::Holds,
            sharpness_gap: None,
        };
        let v = rep.to_json();
        assert_eq!(v["min_margin"], "inf");
        assert_eq!(v["witness"][1], 0.2);
        assert_eq!(v["verdict"], "holds");
        assert!(v["sharpness_gap"].is_null());
    }

    #[test]
    fn ids_round_trip() {
        let p = |k: &str| match k {
            "mu" => Some(0.5),
            "alpha" => Some(0.25),
            "A" => Some(1.0),
            "B" => Some(-1.0),
            _ => None,
        };
        for id in BOUND_IDS {
            let b = Bound::from_id(id, |k| {
                if *id == "exclusion_disk" || *id == "pseudo_hyperbolic" {
                    p(k).map(|_| 2.0)
                } else {
                    p(k)
                }
            })
            .unwrap();
            assert_eq!(b.id(), *id);
        }
        assert!(Bound::from_id("bogus", p).is_err());
        assert!(Bound::from_id("exclusion_disk", p).is_err());
    }
}
