//! Numerical estimates of the upper order `α_f = sup |A_f|` and the lower
//! order `μ_f = inf |A_f|`.
//!
//! Both searches stop at a radius cap below 1, so the upper estimate is a
//! lower bound for the true supremum and the lower estimate an upper bound
//! for the true infimum.

use serde::Serialize;

use crate::bma::a_operator;
use crate::jet::C64;
use crate::model::{AnalyticModel, ModelError};
use crate::search::GridSearch;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrderEstimate {
    pub value: f64,
    /// Point where `|A_f|` equals `value`.
    #[serde(serialize_with = "crate::serialize_complex")]
    pub witness: C64,
    pub radius_cap: f64,
    /// Grid points evaluated.
    pub samples: usize,
    /// Extremum on the grid before refinement.
    pub grid_value: f64,
}

fn abs_a(model: &AnalyticModel) -> impl Fn(C64) -> Option<f64> + Sync + '_ {
    move |z| a_operator(model, z).ok().map(|a| a.norm())
}

fn estimate(
    found: Option<crate::search::Extremum>,
    search: &GridSearch,
    model: &AnalyticModel,
) -> Result<OrderEstimate, ModelError> {
    let e = found.ok_or_else(|| {
        ModelError::InvalidParameter(format!(
            "`{}` could not be evaluated on the grid",
            model.label()
        ))
    })?;
    Ok(OrderEstimate {
        value: e.value,
        witness: e.witness,
        radius_cap: search.radius_cap,
        samples: e.evaluated,
        grid_value: e.grid_value,
    })
}

pub fn upper_order(
    model: &AnalyticModel,
    search: &GridSearch,
) -> Result<OrderEstimate, ModelError> {
    estimate(search.maximize(abs_a(model)), search, model)
}

pub fn lower_order(
    model: &AnalyticModel,
    search: &GridSearch,
) -> Result<OrderEstimate, ModelError> {
    estimate(search.minimize(abs_a(model)), search, model)
}
