//! Class members built from the subordination identity of each class.
//!
//! With a Schwarz function `h = z g`, each class pins down `q = f''/f'` as a
//! rational expression in `z`, `g` and `g'`. The expressions below have the
//! removable factor `z` cancelled by hand, so they are regular at the origin.

use super::riccati::prescribed_schwarzian;
use super::selfmap::random_self_map;
use super::{
    AnalyticModel, ClassSpec, JetSource, LocalData, ModelError, ModelKind, PreSchwarzian,
    SelfMapModel,
};
use crate::jet::{Jet3, JetError, C64};
use crate::schwarzian::SchwarzianProfile;

#[derive(Debug, Clone, Copy, PartialEq)]
enum Identity {
    /// `q = 2(1−α) g / (1 − z g)`
    ConvexOrder(f64),
    /// `q = (A−B) g / (1 + B z g)`
    Janowski(f64, f64),
    /// `q = (1 + e^{−2iα}) g / (1 − z g)`
    Robertson(f64),
    /// `q = 2(2g + z g' + z g²) / (1 − z² g²)`
    Starlike,
    /// `q = (2g + z g') / (1 − z g)`
    StarlikeHalf,
    /// `q = 2(g + z g') / (1 − z² g²)`
    Noshiro,
}

#[derive(Debug, Clone)]
struct SubordinationSource {
    identity: Identity,
    selfmap: SelfMapModel,
}

/// Jet of `g'`, exact in the value and first-derivative slots, which is all
/// `q` and `q'` need.
fn derivative_jet(g: Jet3) -> Jet3 {
    Jet3::new(g.d1, g.d2, g.d3, C64::new(0.0, 0.0))
}

impl SubordinationSource {
    fn q_jet(&self, z: C64) -> Result<Jet3, JetError> {
        let x = Jet3::variable(z);
        let g = self.selfmap.g_jet(z);
        let h = x * g;
        match self.identity {
            Identity::ConvexOrder(alpha) => (g * (2.0 * (1.0 - alpha))).try_div(-h + 1.0),
            Identity::Janowski(a, b) => (g * (a - b)).try_div(h * b + 1.0),
            Identity::Robertson(alpha) => {
                let k = C64::new(1.0, 0.0) + C64::from_polar(1.0, -2.0 * alpha);
                (g * k).try_div(-h + 1.0)
            }
            Identity::Starlike => {
                let num = (g * 2.0 + x * derivative_jet(g) + h * g) * 2.0;
                num.try_div(-(h * h) + 1.0)
            }
            Identity::StarlikeHalf => (g * 2.0 + x * derivative_jet(g)).try_div(-h + 1.0),
            Identity::Noshiro => ((g + x * derivative_jet(g)) * 2.0).try_div(-(h * h) + 1.0),
        }
    }
}

impl JetSource for SubordinationSource {
    fn kind(&self) -> ModelKind {
        ModelKind::PreSchwarzianOnly
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        let q = self.q_jet(z)?;
        Ok(LocalData::PreSchwarzian(PreSchwarzian { q: q.v, dq: q.d1 }))
    }
}

/// The member of `class` whose subordination identity uses the given
/// Schwarz function.
pub fn subordination_member(
    class: ClassSpec,
    selfmap: SelfMapModel,
) -> Result<AnalyticModel, ModelError> {
    let class = class.validated()?;
    let identity = match class {
        ClassSpec::ConvexOrder { .. } | ClassSpec::Ozaki { .. } | ClassSpec::Umezawa { .. } => {
            Identity::ConvexOrder(class.equivalent_convex_order().unwrap_or(0.0))
        }
        ClassSpec::Janowski { a, b } => Identity::Janowski(a, b),
        ClassSpec::Robertson { alpha } => Identity::Robertson(alpha),
        ClassSpec::Starlike | ClassSpec::SchlichtS => Identity::Starlike,
        ClassSpec::StarlikeHalf => Identity::StarlikeHalf,
        ClassSpec::Noshiro => Identity::Noshiro,
        ClassSpec::Nehari { t } => {
            let model = prescribed_schwarzian(SchwarzianProfile::Nehari { t }, selfmap)?;
            return Ok(model.with_classes(vec![class]));
        }
    };
    let label = format!("{class} member");
    Ok(
        AnalyticModel::new(label, SubordinationSource { identity, selfmap })
            .with_classes(vec![class]),
    )
}

/// A pseudo-random member of `class` driven by a random Blaschke product of
/// the given degree (at most 3); deterministic in `seed`.
pub fn random_class_member(
    class: ClassSpec,
    seed: u64,
    degree: usize,
) -> Result<AnalyticModel, ModelError> {
    let selfmap = random_self_map(seed, degree)?;
    let model = subordination_member(class, selfmap)?;
    let label = format!("{class} member (seed={seed}, degree={degree})");
    Ok(model.relabel(label))
}
