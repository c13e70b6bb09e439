//! Analytic models of locally univalent maps of the unit disk.
//!
//! A model is evaluated pointwise. *Full* models return the order-3 jet of
//! `f`; *pre-Schwarzian* models return only `q = f''/f'` and `q'`, which is
//! all the pole function, the Pommerenke operator and the Schwarzian need.

mod catalog;
mod class;
mod generators;
mod riccati;
mod selfmap;
pub mod spec;

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::dsl::Expr;
use crate::jet::{Jet3, JetError, C64};

pub use catalog::{catalog, catalog_by_name, CatalogEntry, CATALOG_NAMES};
pub use class::ClassSpec;
pub use class::Region;
pub use generators::{random_class_member, subordination_member};
pub use riccati::{prescribed_schwarzian, riccati_preschwarzian, RICCATI_STEP};
pub use selfmap::{random_self_map, SelfMapModel, MAX_RANDOM_ZERO, MAX_SELF_MAP_DEGREE};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ModelError {
    #[error("point {0} is outside the open unit disk")]
    OutsideDisk(C64),
    #[error("f' vanishes at {0}; the model is not locally univalent there")]
    NotLocallyUnivalent(C64),
    #[error("pre-Schwarzian is singular at {0}")]
    Singular(C64),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("model `{0}` only exposes its pre-Schwarzian; this operation needs f itself")]
    RequiresFullModel(String),
    #[error("invalid model spec: {0}")]
    Spec(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ModelKind {
    Full,
    PreSchwarzianOnly,
}

/// `q = f''/f'` and its derivative at a point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreSchwarzian {
    pub q: C64,
    pub dq: C64,
}

impl PreSchwarzian {
    pub fn from_jet(j: &Jet3, z: C64) -> Result<Self, ModelError> {
        if j.d1 == C64::new(0.0, 0.0) {
            return Err(ModelError::NotLocallyUnivalent(z));
        }
        let q = j.d2 / j.d1;
        Ok(Self {
            q,
            dq: j.d3 / j.d1 - q * q,
        })
    }

    /// From the jet of `f'` rather than of `f`.
    pub fn from_derivative_jet(j: &Jet3, z: C64) -> Result<Self, ModelError> {
        if j.v == C64::new(0.0, 0.0) {
            return Err(ModelError::NotLocallyUnivalent(z));
        }
        let q = j.d1 / j.v;
        Ok(Self {
            q,
            dq: j.d2 / j.v - q * q,
        })
    }

    /// The Schwarzian derivative `q' - q²/2`.
    pub fn schwarzian(&self) -> C64 {
        self.dq - 0.5 * self.q * self.q
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum LocalData {
    Full(Jet3),
    PreSchwarzian(PreSchwarzian),
}

/// Pointwise evaluator behind an [`AnalyticModel`].
pub trait JetSource: Send + Sync + fmt::Debug {
    fn kind(&self) -> ModelKind;
    fn local(&self, z: C64) -> Result<LocalData, ModelError>;
}

/// Known bounds on the Pommerenke orders: `lower ≤ μ_f` and `upper ≥ α_f`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct KnownOrders {
    pub lower: Option<f64>,
    pub upper: Option<f64>,
}

/// An immutable, cheaply clonable model with a label, class tags and, for
/// catalog functions, the catalog entry it came from.
#[derive(Clone)]
pub struct AnalyticModel {
    label: String,
    classes: Vec<ClassSpec>,
    origin: Option<CatalogEntry>,
    orders: KnownOrders,
    source: Arc<dyn JetSource>,
}

impl fmt::Debug for AnalyticModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AnalyticModel")
            .field("label", &self.label)
            .field("classes", &self.classes)
            .field("origin", &self.origin)
            .field("orders", &self.orders)
            .finish()
    }
}

impl AnalyticModel {
    pub fn new(label: impl Into<String>, source: impl JetSource + 'static) -> Self {
        Self::from_arc(label, Arc::new(source))
    }

    pub fn from_arc(label: impl Into<String>, source: Arc<dyn JetSource>) -> Self {
        Self {
            label: label.into(),
            classes: Vec::new(),
            origin: None,
            orders: KnownOrders::default(),
            source,
        }
    }

    pub fn with_classes(mut self, classes: Vec<ClassSpec>) -> Self {
        self.classes = classes;
        self
    }

    pub fn with_origin(mut self, origin: CatalogEntry) -> Self {
        self.origin = Some(origin);
        self
    }

    pub fn with_orders(mut self, orders: KnownOrders) -> Self {
        self.orders = orders;
        self
    }

    pub fn relabel(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn from_expr(expr: Expr) -> Self {
        let label = expr.to_string();
        Self::new(label, ExprSource(expr))
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn classes(&self) -> &[ClassSpec] {
        &self.classes
    }

    pub fn origin(&self) -> Option<&CatalogEntry> {
        self.origin.as_ref()
    }

    /// Order bounds attached to the model (not those implied by its classes).
    pub fn known_orders(&self) -> KnownOrders {
        self.orders
    }

    /// Whether some class tag implies `class`.
    pub fn belongs_to(&self, class: &ClassSpec) -> bool {
        self.classes.iter().any(|c| c.implies(class))
    }

    /// Best known upper bound for `α_f`: convex maps have order 1 and
    /// normalized univalent maps order at most 2.
    pub fn upper_order_bound(&self) -> Option<f64> {
        let implied = if self.belongs_to(&ClassSpec::ConvexOrder { alpha: 0.0 }) {
            Some(1.0)
        } else if self.belongs_to(&ClassSpec::SchlichtS) {
            Some(2.0)
        } else {
            None
        };
        match (self.orders.upper, implied) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        }
    }

    /// Best known lower bound for `μ_f`.
    pub fn lower_order_bound(&self) -> Option<f64> {
        self.orders.lower
    }

    pub fn kind(&self) -> ModelKind {
        self.source.kind()
    }

    pub fn source(&self) -> &Arc<dyn JetSource> {
        &self.source
    }

    pub fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        if !(z.norm() < 1.0) {
            return Err(ModelError::OutsideDisk(z));
        }
        self.source.local(z)
    }

    /// Order-3 jet of `f`; fails for pre-Schwarzian-only models.
    pub fn jet_at(&self, z: C64) -> Result<Jet3, ModelError> {
        match self.local(z)? {
            LocalData::Full(j) => Ok(j),
            LocalData::PreSchwarzian(_) => Err(ModelError::RequiresFullModel(self.label.clone())),
        }
    }

    pub fn preschwarzian(&self, z: C64) -> Result<PreSchwarzian, ModelError> {
        match self.local(z)? {
            LocalData::Full(j) => PreSchwarzian::from_jet(&j, z),
            LocalData::PreSchwarzian(p) => {
                if p.q.is_finite() && p.dq.is_finite() {
                    Ok(p)
                } else {
                    Err(ModelError::Singular(z))
                }
            }
        }
    }
}

/// Full model backed by a parsed formula.
#[derive(Debug, Clone)]
pub struct ExprSource(pub Expr);

impl JetSource for ExprSource {
    fn kind(&self) -> ModelKind {
        ModelKind::Full
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        Ok(LocalData::Full(self.0.eval_jet(z)?))
    }
}

/// Pre-Schwarzian-only model given directly as a jet-valued closure of `z`
/// returning the jet of `q`.
pub struct PreSchwarzianFn<F>(pub F);

impl<F> fmt::Debug for PreSchwarzianFn<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("PreSchwarzianFn")
    }
}

impl<F> JetSource for PreSchwarzianFn<F>
where
    F: Fn(Jet3) -> Result<Jet3, JetError> + Send + Sync,
{
    fn kind(&self) -> ModelKind {
        ModelKind::PreSchwarzianOnly
    }

    fn local(&self, z: C64) -> Result<LocalData, ModelError> {
        let q = (self.0)(Jet3::variable(z))?;
        Ok(LocalData::PreSchwarzian(PreSchwarzian { q: q.v, dq: q.d1 }))
    }
}
