//! Closed-form extremal and example functions with exact jets.

use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use super::{
    AnalyticModel, ClassSpec, JetSource, KnownOrders, LocalData, ModelError, ModelKind,
    PreSchwarzian,
};
use crate::jet::{Jet3, JetError, C64};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum CatalogEntry {
    /// `((1+z)/(1−z))^a`, `a > 0`.
    Power {
        a: f64,
    },
    /// Extremal convex map of order `α`: `(1 − (1−z)^{2α−1})/(2α−1)`, or
    /// `−log(1−z)` for `α = ½`.
    ConvexOrder {
        alpha: f64,
    },
    /// Janowski extremal `((1+Bz)^{A/B} − 1)/A` with its `A = 0` and `B = 0`
    /// limits.
    Janowski {
        a: f64,
        b: f64,
    },
    /// `((1−z)^{−λ} − 1)/λ` with `λ = e^{2iα}`.
    Robertson {
        alpha: f64,
    },
    /// Rotated Koebe function `z/(1 − e^{iθ}z)²`.
    Koebe {
        theta: f64,
    },
    /// `z/(1 − e^{iθ}z)`.
    HalfPlane {
        theta: f64,
    },
    /// `−2e^{−iθ} log(1 − e^{iθ}z) − z`.
    NoshiroExtremal {
        theta: f64,
    },
    /// `e^{bz}`.
    ExpMap {
        b: C64,
    },
    /// Map onto a cross-shaped domain, known through
    /// `f' = 1/((1 − z⁴)√(1 + z⁴))` only.
    Cross,
    Identity,
    /// `z/(1 − a z)`, `|a| ≤ 1`.
    Moebius {
        a: C64,
    },
}

pub const CATALOG_NAMES: &[&str] = &[
    "power",
    "convex_order",
    "janowski",
    "robertson",
    "koebe",
    "half_plane",
    "noshiro_extremal",
    "exp_map",
    "cross",
    "identity",
    "moebius",
];

fn invalid(msg: String) -> ModelError {
    ModelError::InvalidParameter(msg)
}

impl CatalogEntry {
    pub fn name(&self) -> &'static str {
        match self {
            CatalogEntry::Power { .. } => "power",
            CatalogEntry::ConvexOrder { .. } => "convex_order",
            CatalogEntry::Janowski { .. } => "janowski",
            CatalogEntry::Robertson { .. } => "robertson",
            CatalogEntry::Koebe { .. } => "koebe",
            CatalogEntry::HalfPlane { .. } => "half_plane",
            CatalogEntry::NoshiroExtremal { .. } => "noshiro_extremal",
            CatalogEntry::ExpMap { .. } => "exp_map",
            CatalogEntry::Cross => "cross",
            CatalogEntry::Identity => "identity",
            CatalogEntry::Moebius { .. } => "moebius",
        }
    }

    pub fn validated(self) -> Result<Self, ModelError> {
        let finite = |x: f64, what: &str| {
            if x.is_finite() {
                Ok(())
            } else {
                Err(invalid(format!("{what} must be finite")))
            }
        };
        match self {
            CatalogEntry::Power { a } if !(a > 0.0 && a.is_finite()) => {
                return Err(invalid(format!("power exponent a = {a} must be positive")))
            }
            CatalogEntry::ConvexOrder { alpha } if !(alpha < 1.0) => {
                return Err(invalid(format!(
                    "convex order alpha = {alpha} must be below 1"
                )))
            }
            CatalogEntry::Janowski { a, b } => {
                ClassSpec::janowski(a, b)?;
            }
            CatalogEntry::Robertson { alpha } if !(alpha.abs() < FRAC_PI_2) => {
                return Err(invalid(format!(
                    "Robertson alpha = {alpha} must satisfy |alpha| < pi/2"
                )))
            }
            CatalogEntry::Koebe { theta }
            | CatalogEntry::HalfPlane { theta }
            | CatalogEntry::NoshiroExtremal { theta } => finite(theta, "theta")?,
            CatalogEntry::ExpMap { b } => {
                finite(b.re, "b")?;
                finite(b.im, "b")?
            }
            CatalogEntry::Moebius { a } if !(a.norm() <= 1.0) => {
                return Err(invalid(format!(
                    "moebius parameter |a| = {} must be at most 1",
                    a.norm()
                )))
            }
            _ => {}
        }
        Ok(self)
    }

    /// Class tags of the catalog function (classes constrain `q` only).
    pub fn classes(&self) -> Vec<ClassSpec> {
        match *self {
            CatalogEntry::ConvexOrder { alpha } => vec![ClassSpec::ConvexOrder { alpha }],
            CatalogEntry::Janowski { a, b } => vec![ClassSpec::Janowski { a, b }],
            // e^{−iα}(1 + z q) has positive real part: the printed extremal
            // lives in the class with the opposite angle.
            CatalogEntry::Robertson { alpha } => vec![ClassSpec::Robertson { alpha: -alpha }],
            CatalogEntry::Koebe { .. } => vec![ClassSpec::Starlike],
            CatalogEntry::HalfPlane { .. } => vec![
                ClassSpec::ConvexOrder { alpha: 0.0 },
                ClassSpec::StarlikeHalf,
            ],
            CatalogEntry::NoshiroExtremal { .. } => vec![ClassSpec::Noshiro],
            CatalogEntry::Identity => {
                vec![ClassSpec::ConvexOrder { alpha: 0.0 }, ClassSpec::Noshiro]
            }
            CatalogEntry::Moebius { .. } => vec![ClassSpec::ConvexOrder { alpha: 0.0 }],
            CatalogEntry::Power { .. } | CatalogEntry::ExpMap { .. } | CatalogEntry::Cross => {
                Vec::new()
            }
        }
    }

    /// Exact Pommerenke orders where they are known in closed form.
    pub fn known_orders(&self) -> KnownOrders {
        match *self {
            CatalogEntry::Power { a } => KnownOrders {
                lower: Some(a.min(1.0)),
                upper: Some(a.max(1.0)),
            },
            CatalogEntry::Identity => KnownOrders {
                lower: Some(0.0),
                upper: Some(1.0),
            },
            CatalogEntry::HalfPlane { .. } => KnownOrders {
                lower: Some(1.0),
                upper: Some(1.0),
            },
            CatalogEntry::Moebius { a } if (a.norm() - 1.0).abs() <= 1e-15 => KnownOrders {
                lower: Some(1.0),
                upper: Some(1.0),
            },
            _ => KnownOrders::default(),
        }
    }

    fn kind(&self) -> ModelKind {
        match self {
            CatalogEntry::Cross => ModelKind::PreSchwarzianOnly,
            _ => ModelKind::Full,
        }
    }

    fn full_jet(&self, z: C64) -> Result<Jet3, JetError> {
        let x = Jet3::variable(z);
        let one_minus = |j: Jet3| -j + 1.0;
        match *self {
            CatalogEntry::Power { a } => (x + 1.0).try_div(one_minus(x))?.powc(C64::new(a, 0.0)),
            CatalogEntry::ConvexOrder { alpha } => {
                if alpha == 0.5 {
                    Ok(-one_minus(x).ln()?)
                } else {
                    let p = 2.0 * alpha - 1.0;
                    Ok(one_minus(one_minus(x).powc(C64::new(p, 0.0))?) * (1.0 / p))
                }
            }
            CatalogEntry::Janowski { a, b } => {
                if b == 0.0 {
                    Ok(((x * a).exp() - 1.0) * (1.0 / a))
                } else if a == 0.0 {
                    Ok((x * b + 1.0).ln()? * (1.0 / b))
                } else {
                    Ok(((x * b + 1.0).powc(C64::new(a / b, 0.0))? - 1.0) * (1.0 / a))
                }
            }
            CatalogEntry::Robertson { alpha } => {
                let lambda = C64::from_polar(1.0, 2.0 * alpha);
                Ok((one_minus(x).powc(-lambda)? - 1.0) * lambda.inv())
            }
            CatalogEntry::Koebe { theta } => {
                let e = C64::from_polar(1.0, theta);
                x.try_div(one_minus(x * e).powi(2)?)
            }
            CatalogEntry::HalfPlane { theta } => {
                x.try_div(one_minus(x * C64::from_polar(1.0, theta)))
            }
            CatalogEntry::NoshiroExtremal { theta } => {
                let e = C64::from_polar(1.0, theta);
                Ok(one_minus(x * e).ln()? * (-2.0 * e.conj()) - x)
            }
            CatalogEntry::ExpMap { b } => Ok((x * b).exp()),
            CatalogEntry::Identity => Ok(x),
            CatalogEntry::Moebius { a } => x.try_div(one_minus(x * a)),
            CatalogEntry::Cross => unreachable!("the cross map has no closed form"),
        }
    }

    /// Jet of `f' = ((1 − z⁴)√(1 + z⁴))⁻¹`.
    fn cross_derivative_jet(z: C64) -> Result<Jet3, JetError> {
        let z4 = Jet3::variable(z).powi(4)?;
        ((-z4 + 1.0) * (z4 + 1.0).sqrt()?).recip()
    }
}

impl fmt::Display for CatalogEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            CatalogEntry::Power { a } => write!(f, "power(a={a})"),
            CatalogEntry::ConvexOrder { alpha } => write!(f, "convex_order(alpha={alpha})"),
            CatalogEntry::Janowski { a, b } => write!(f, "janowski(A={a}, B={b})"),
            CatalogEntry::Robertson { alpha } => write!(f, "robertson(alpha={alpha})"),
            CatalogEntry::Koebe { theta } => write!(f, "koebe(theta={theta})"),
            CatalogEntry::HalfPlane { theta } => write!(f, "half_plane(theta={theta})"),
            CatalogEntry::NoshiroExtremal { theta } => write!(f, "noshiro_extremal(theta={theta})"),
            CatalogEntry::ExpMap { b } if b.im == 0.0 => write!(f, "exp_map(b={})", b.re),
            CatalogEntry::ExpMap { b } => write!(f, "exp_map(b={b})"),
            CatalogEntry::Moebius { a } if a.im == 0.0 => write!(f, "moebius(a={})", a.re),
            CatalogEntry::Moebius { a } => write!(f, "moebius(a={a})"),
            CatalogEntry::Cross | CatalogEntry::Identity => f.write_str(self.name()),
        }
    }
}

#[derive(Debug, Clone)]
struct CatalogSource(CatalogEntry);

impl JetSource for CatalogSource {
    fn kind(&self) -> ModelKind {
        self.0.kind()
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        match self.0 {
            CatalogEntry::Cross => {
                let fp = CatalogEntry::cross_derivative_jet(z)?;
                Ok(LocalData::PreSchwarzian(
                    PreSchwarzian::from_derivative_jet(&fp, z)?,
                ))
            }
            entry => Ok(LocalData::Full(entry.full_jet(z)?)),
        }
    }
}

/// The catalog model for `entry`, tagged with its classes and known orders.
pub fn catalog(entry: CatalogEntry) -> Result<AnalyticModel, ModelError> {
    let entry = entry.validated()?;
    Ok(AnalyticModel::new(entry.to_string(), CatalogSource(entry))
        .with_classes(entry.classes())
        .with_orders(entry.known_orders())
        .with_origin(entry))
}

/// Looks a catalog function up by name. Real parameters are `a`, `alpha`,
/// `A`, `B`, `theta`; complex ones (`b` of `exp_map`, `a` of `moebius`)
/// may have nonzero imaginary parts. `theta` defaults to 0.
pub fn catalog_by_name(
    name: &str,
    param: impl Fn(&str) -> Option<C64>,
) -> Result<AnalyticModel, ModelError> {
    let complex = |key: &str| {
        param(key).ok_or_else(|| invalid(format!("catalog `{name}` needs parameter `{key}`")))
    };
    let real = |key: &str| {
        let v = complex(key)?;
        if v.im != 0.0 {
            return Err(invalid(format!(
                "parameter `{key}` of `{name}` must be real"
            )));
        }
        Ok(v.re)
    };
    let theta = || param("theta").map_or(Ok(0.0), |_| real("theta"));
    let entry = match name {
        "power" => CatalogEntry::Power { a: real("a")? },
        "convex_order" => CatalogEntry::ConvexOrder {
            alpha: real("alpha")?,
        },
        "janowski" => CatalogEntry::Janowski {
            a: real("A")?,
            b: real("B")?,
        },
        "robertson" => CatalogEntry::Robertson {
            alpha: real("alpha")?,
        },
        "koebe" => CatalogEntry::Koebe { theta: theta()? },
        "half_plane" => CatalogEntry::HalfPlane { theta: theta()? },
        "noshiro_extremal" => CatalogEntry::NoshiroExtremal { theta: theta()? },
        "exp_map" => CatalogEntry::ExpMap { b: complex("b")? },
        "cross" => CatalogEntry::Cross,
        "identity" => CatalogEntry::Identity,
        "moebius" => CatalogEntry::Moebius {
            a: param("a").unwrap_or(C64::new(1.0, 0.0)),
        },
        _ => return Err(ModelError::UnknownModel(name.to_string())),
    };
    catalog(entry)
}
