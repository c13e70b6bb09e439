//! Textual model specifications.
//!
//! JSON forms:
//!
//! ```json
//! {"kind":"catalog","name":"power","params":{"a":0.5}}
//! {"kind":"expr","formula":"z/(1-z)^2"}
//! {"kind":"class","class":"janowski","A":1,"B":-1,"seed":7,"degree":2}
//! ```
//!
//! Complex catalog parameters may be given as `[re, im]`. The short forms
//! `catalog:NAME(key=value, ...)` and `class:NAME(key=value, ...)` are
//! accepted as well.

use std::collections::BTreeMap;

use serde_json::Value;

use super::{catalog_by_name, random_class_member, AnalyticModel, ClassSpec, ModelError};
use crate::dsl::parse;
use crate::jet::C64;

pub const DEFAULT_CLASS_SEED: u64 = 42;
pub const DEFAULT_CLASS_DEGREE: usize = 2;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Catalog {
        name: String,
        params: BTreeMap<String, C64>,
    },
    Expr {
        formula: String,
    },
    Class {
        class: String,
        params: BTreeMap<String, f64>,
        seed: u64,
        degree: usize,
    },
}

fn spec_err(msg: impl Into<String>) -> ModelError {
    ModelError::Spec(msg.into())
}

fn complex_param(key: &str, v: &Value) -> Result<C64, ModelError> {
    match v {
        Value::Number(n) => n.as_f64().map(|x| C64::new(x, 0.0)),
        Value::Array(parts) if parts.len() == 2 => match (parts[0].as_f64(), parts[1].as_f64()) {
            (Some(re), Some(im)) => Some(C64::new(re, im)),
            _ => None,
        },
        _ => None,
    }
    .ok_or_else(|| spec_err(format!("parameter `{key}` must be a number or [re, im]")))
}

fn parse_pairs(src: &str) -> Result<BTreeMap<String, f64>, ModelError> {
    let mut out = BTreeMap::new();
    for item in src.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| spec_err(format!("expected key=value, found `{item}`")))?;
        let v: f64 = v
            .trim()
            .parse()
            .map_err(|_| spec_err(format!("`{v}` is not a number")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

/// Splits `name(k=v, ...)` into the name and its parameters.
fn split_call(src: &str) -> Result<(String, BTreeMap<String, f64>), ModelError> {
    match src.split_once('(') {
        None => Ok((src.trim().to_string(), BTreeMap::new())),
        Some((name, rest)) => {
            let inner = rest
                .trim_end()
                .strip_suffix(')')
                .ok_or_else(|| spec_err(format!("missing `)` in `{src}`")))?;
            Ok((name.trim().to_string(), parse_pairs(inner)?))
        }
    }
}

impl ModelSpec {
    pub fn from_json(src: &str) -> Result<Self, ModelError> {
        let v: Value = serde_json::from_str(src).map_err(|e| spec_err(e.to_string()))?;
        Self::from_value(&v)
    }

    pub fn from_value(v: &Value) -> Result<Self, ModelError> {
        let obj = v
            .as_object()
            .ok_or_else(|| spec_err("model spec must be a JSON object"))?;
        let text = |key: &str| {
            obj.get(key)
                .and_then(Value::as_str)
                .map(str::to_string)
                .ok_or_else(|| spec_err(format!("missing string field `{key}`")))
        };
        match text("kind")?.as_str() {
            "catalog" => {
                let mut params = BTreeMap::new();
                if let Some(p) = obj.get("params") {
                    let p = p
                        .as_object()
                        .ok_or_else(|| spec_err("`params` must be an object"))?;
                    for (k, v) in p {
                        params.insert(k.clone(), complex_param(k, v)?);
                    }
                }
                Ok(ModelSpec::Catalog {
                    name: text("name")?,
                    params,
                })
            }
            "expr" => Ok(ModelSpec::Expr {
                formula: text("formula")?,
            }),
            "class" => {
                let mut params = BTreeMap::new();
                let (mut seed, mut degree) = (DEFAULT_CLASS_SEED, DEFAULT_CLASS_DEGREE);
                for (k, v) in obj {
                    match k.as_str() {
                        "kind" | "class" => {}
                        "seed" => {
                            seed = v
                                .as_u64()
                                .ok_or_else(|| spec_err("`seed` must be a nonnegative integer"))?
                        }
                        "degree" => {
                            degree = v
                                .as_u64()
                                .ok_or_else(|| spec_err("`degree` must be a nonnegative integer"))?
                                as usize
                        }
                        _ => {
                            let x = v.as_f64().ok_or_else(|| {
                                spec_err(format!("parameter `{k}` must be a number"))
                            })?;
                            params.insert(k.clone(), x);
                        }
                    }
                }
                Ok(ModelSpec::Class {
                    class: text("class")?,
                    params,
                    seed,
                    degree,
                })
            }
            other => Err(spec_err(format!("unknown model kind `{other}`"))),
        }
    }

    /// Parses JSON, `catalog:...` or `class:...`.
    pub fn parse(src: &str) -> Result<Self, ModelError> {
        let src = src.trim();
        if src.starts_with('{') {
            return Self::from_json(src);
        }
        if let Some(rest) = src.strip_prefix("catalog:") {
            let (name, params) = split_call(rest)?;
            let params = params
                .into_iter()
                .map(|(k, v)| (k, C64::new(v, 0.0)))
                .collect();
            return Ok(ModelSpec::Catalog { name, params });
        }
        if let Some(rest) = src.strip_prefix("class:") {
            let (class, mut params) = split_call(rest)?;
            let seed = params
                .remove("seed")
                .map_or(DEFAULT_CLASS_SEED, |s| s as u64);
            let degree = params
                .remove("degree")
                .map_or(DEFAULT_CLASS_DEGREE, |d| d as usize);
            return Ok(ModelSpec::Class {
                class,
                params,
                seed,
                degree,
            });
        }
        Err(spec_err(format!(
            "unrecognized model `{src}`; expected JSON, catalog:NAME or class:NAME"
        )))
    }

    pub fn build(&self) -> Result<AnalyticModel, ModelError> {
        match self {
            ModelSpec::Catalog { name, params } => {
                catalog_by_name(name, |k| params.get(k).copied())
            }
            ModelSpec::Expr { formula } => {
                let expr = parse(formula).map_err(|e| spec_err(e.to_string()))?;
                Ok(AnalyticModel::from_expr(expr))
            }
            ModelSpec::Class {
                class,
                params,
                seed,
                degree,
            } => {
                let spec = ClassSpec::from_name(class, |k| params.get(k).copied())?;
                random_class_member(spec, *seed, *degree)
            }
        }
    }
}
