//! Function classes, described by where `1 + z q(z)` lives (for the
//! subordination classes) or by a named geometric property.

use std::fmt;

use serde::Serialize;

use super::ModelError;
use crate::jet::C64;

const PARAM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "class", rename_all = "snake_case")]
pub enum ClassSpec {
    /// `Re{1 + z q} ≥ α`, `α < 1`.
    ConvexOrder {
        alpha: f64,
    },
    /// `1 + z q ≺ (1 + A z)/(1 + B z)`, `-1 ≤ B < A ≤ 1`.
    Janowski {
        a: f64,
        b: f64,
    },
    /// `Re{e^{iα}(1 + z q)} > 0`, `|α| < π/2`.
    Robertson {
        alpha: f64,
    },
    Starlike,
    /// Starlike of order ½.
    StarlikeHalf,
    /// `Re{1 + z q} ≥ ½ − λ`, `λ ∈ [½, 1]`.
    Ozaki {
        lambda: f64,
    },
    /// `Re{1 + z q} ≥ −α/(2α − 3)`, `α > 3/2`.
    Umezawa {
        alpha: f64,
    },
    /// `Re f' > 0`.
    Noshiro,
    /// `|Sf| ≤ 2t/(1 − |z|²)²` with `f''(0) = 0`, `t ∈ (0, 1]`.
    Nehari {
        t: f64,
    },
    /// Normalized univalent functions.
    SchlichtS,
}

/// Closed region of the plane containing every value of `1 + z q`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// `{w : Re(normal · w) ≥ level}` with `|normal| = 1`.
    HalfPlane {
        normal: C64,
        level: f64,
    },
    Disk {
        center: f64,
        radius: f64,
    },
}

impl Region {
    pub fn contains(&self, w: C64, tol: f64) -> bool {
        match *self {
            Region::HalfPlane { normal, level } => (normal * w).re >= level - tol,
            Region::Disk { center, radius } => (w - center).norm() <= radius + tol,
        }
    }

    pub fn is_subset_of(&self, other: &Region) -> bool {
        match (*self, *other) {
            (
                Region::HalfPlane {
                    normal: n1,
                    level: l1,
                },
                Region::HalfPlane {
                    normal: n2,
                    level: l2,
                },
            ) => (n1 - n2).norm() <= PARAM_TOL && l1 >= l2 - PARAM_TOL,
            (Region::HalfPlane { .. }, Region::Disk { .. }) => false,
            (Region::Disk { center, radius }, Region::HalfPlane { normal, level }) => {
                (normal * center).re - radius >= level - PARAM_TOL
            }
            (
                Region::Disk {
                    center: c1,
                    radius: r1,
                },
                Region::Disk {
                    center: c2,
                    radius: r2,
                },
            ) => (c1 - c2).abs() + r1 <= r2 + PARAM_TOL,
        }
    }
}

fn convex_half_plane(alpha: f64) -> Region {
    Region::HalfPlane {
        normal: C64::new(1.0, 0.0),
        level: alpha,
    }
}

impl ClassSpec {
    pub fn convex_order(alpha: f64) -> Result<Self, ModelError> {
        ClassSpec::ConvexOrder { alpha }.validated()
    }

    pub fn janowski(a: f64, b: f64) -> Result<Self, ModelError> {
        ClassSpec::Janowski { a, b }.validated()
    }

    pub fn robertson(alpha: f64) -> Result<Self, ModelError> {
        ClassSpec::Robertson { alpha }.validated()
    }

    pub fn ozaki(lambda: f64) -> Result<Self, ModelError> {
        ClassSpec::Ozaki { lambda }.validated()
    }

    pub fn umezawa(alpha: f64) -> Result<Self, ModelError> {
        ClassSpec::Umezawa { alpha }.validated()
    }

    pub fn nehari(t: f64) -> Result<Self, ModelError> {
        ClassSpec::Nehari { t }.validated()
    }

    /// Checks the parameter ranges.
    pub fn validated(self) -> Result<Self, ModelError> {
        let ok = match self {
            ClassSpec::ConvexOrder { alpha } => alpha < 1.0,
            ClassSpec::Janowski { a, b } => -1.0 <= b && b < a && a <= 1.0,
            ClassSpec::Robertson { alpha } => alpha.abs() < std::f64::consts::FRAC_PI_2,
            ClassSpec::Ozaki { lambda } => (0.5..=1.0).contains(&lambda),
            ClassSpec::Umezawa { alpha } => alpha > 1.5 && alpha.is_finite(),
            ClassSpec::Nehari { t } => t > 0.0 && t <= 1.0,
            ClassSpec::Starlike
            | ClassSpec::StarlikeHalf
            | ClassSpec::Noshiro
            | ClassSpec::SchlichtS => true,
        };
        if ok {
            Ok(self)
        } else {
            Err(ModelError::InvalidParameter(format!(
                "{self} is outside its parameter range"
            )))
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ClassSpec::ConvexOrder { .. } => "convex_order",
            ClassSpec::Janowski { .. } => "janowski",
            ClassSpec::Robertson { .. } => "robertson",
            ClassSpec::Starlike => "starlike",
            ClassSpec::StarlikeHalf => "starlike_half",
            ClassSpec::Ozaki { .. } => "ozaki",
            ClassSpec::Umezawa { .. } => "umezawa",
            ClassSpec::Noshiro => "noshiro",
            ClassSpec::Nehari { .. } => "nehari",
            ClassSpec::SchlichtS => "schlicht",
        }
    }

    /// Builds a class from its name; `param` looks up `alpha`, `A`, `B`,
    /// `lambda` or `t`.
    pub fn from_name(name: &str, param: impl Fn(&str) -> Option<f64>) -> Result<Self, ModelError> {
        let need = |key: &str| {
            param(key).ok_or_else(|| {
                ModelError::InvalidParameter(format!("class `{name}` needs parameter `{key}`"))
            })
        };
        match name {
            "convex" => ClassSpec::convex_order(0.0),
            "convex_order" => ClassSpec::convex_order(param("alpha").unwrap_or(0.0)),
            "janowski" => ClassSpec::janowski(need("A")?, need("B")?),
            "robertson" => ClassSpec::robertson(need("alpha")?),
            "starlike" => Ok(ClassSpec::Starlike),
            "starlike_half" => Ok(ClassSpec::StarlikeHalf),
            "ozaki" => ClassSpec::ozaki(need("lambda")?),
            "umezawa" => ClassSpec::umezawa(need("alpha")?),
            "noshiro" => Ok(ClassSpec::Noshiro),
            "nehari" => ClassSpec::nehari(param("t").unwrap_or(1.0)),
            "schlicht" | "S" => Ok(ClassSpec::SchlichtS),
            _ => Err(ModelError::UnknownModel(format!("class:{name}"))),
        }
    }

    /// Ozaki and Umezawa classes are convex-order classes with a negative order.
    pub fn equivalent_convex_order(&self) -> Option<f64> {
        match *self {
            ClassSpec::ConvexOrder { alpha } => Some(alpha),
            ClassSpec::Ozaki { lambda } => Some(0.5 - lambda),
            ClassSpec::Umezawa { alpha } => Some(-alpha / (2.0 * alpha - 3.0)),
            _ => None,
        }
    }

    /// Region containing `1 + z q(z)` for the subordination classes.
    pub fn region(&self) -> Option<Region> {
        if let Some(alpha) = self.equivalent_convex_order() {
            return Some(convex_half_plane(alpha));
        }
        match *self {
            ClassSpec::Janowski { a, b } if b <= -1.0 => Some(convex_half_plane((1.0 - a) / 2.0)),
            ClassSpec::Janowski { a, b } => {
                let (lo, hi) = ((1.0 - a) / (1.0 - b), (1.0 + a) / (1.0 + b));
                Some(Region::Disk {
                    center: 0.5 * (lo + hi),
                    radius: 0.5 * (hi - lo),
                })
            }
            ClassSpec::Robertson { alpha } => Some(Region::HalfPlane {
                normal: C64::from_polar(1.0, alpha),
                level: 0.0,
            }),
            _ => None,
        }
    }

    /// Every member has a convex image.
    pub fn is_convex(&self) -> bool {
        self.region()
            .is_some_and(|r| r.is_subset_of(&convex_half_plane(0.0)))
    }

    /// Whether membership in `self` implies membership in `other`.
    pub fn implies(&self, other: &ClassSpec) -> bool {
        if let (Some(r1), Some(r2)) = (self.region(), other.region()) {
            return r1.is_subset_of(&r2);
        }
        if self.same_as(other) {
            return true;
        }
        match other {
            ClassSpec::StarlikeHalf => self.is_convex(),
            ClassSpec::Starlike => self.is_convex() || matches!(self, ClassSpec::StarlikeHalf),
            ClassSpec::SchlichtS => {
                self.is_convex()
                    || matches!(
                        self,
                        ClassSpec::Starlike
                            | ClassSpec::StarlikeHalf
                            | ClassSpec::Noshiro
                            | ClassSpec::Nehari { .. }
                    )
                    || matches!(self, ClassSpec::Ozaki { .. })
            }
            ClassSpec::Nehari { t } => matches!(self, ClassSpec::Nehari { t: s } if s <= t),
            _ => false,
        }
    }

    fn same_as(&self, other: &ClassSpec) -> bool {
        let close = |x: f64, y: f64| (x - y).abs() <= PARAM_TOL;
        match (*self, *other) {
            (ClassSpec::Nehari { t: s }, ClassSpec::Nehari { t }) => close(s, t),
            (a, b) => {
                std::mem::discriminant(&a) == std::mem::discriminant(&b) && a.region().is_none()
            }
        }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            ClassSpec::ConvexOrder { alpha } => write!(f, "convex_order(alpha={alpha})"),
            ClassSpec::Janowski { a, b } => write!(f, "janowski(A={a}, B={b})"),
            ClassSpec::Robertson { alpha } => write!(f, "robertson(alpha={alpha})"),
            ClassSpec::Ozaki { lambda } => write!(f, "ozaki(lambda={lambda})"),
            ClassSpec::Umezawa { alpha } => write!(f, "umezawa(alpha={alpha})"),
            ClassSpec::Nehari { t } => write!(f, "nehari(t={t})"),
            other => f.write_str(other.name()),
        }
    }
}
