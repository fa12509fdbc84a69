//! Manifold sources: zoo names and JSON chart configs.
//!
//! A chart config is `{"dim": 6, "metric": [[...]], "J": [[...]]}` with
//! expression strings (numbers are accepted too); `"name"` and `"domain"`
//! (`[[lo, hi], ...]`) are optional. A zoo config is
//! `{"zoo": "flat_cn", "params": {"n": 3}}`.

use crate::exprjet::{parse_expr, Expr};
use crate::manifold::{zoo, ChartManifold, GeometryError, ZooParams};
use serde_json::Value;
use std::path::Path;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: malformed JSON: {source}")]
    Json {
        path: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{field}: {message}")]
    Field { field: String, message: String },
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn field_err(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Field {
        field: field.into(),
        message: message.into(),
    }
}

/// A loaded chart plus the warnings raised while reading it.
#[derive(Debug)]
pub struct LoadedManifold {
    pub manifold: ChartManifold,
    pub warnings: Vec<String>,
}

pub fn load_manifold(path: &Path) -> Result<LoadedManifold, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.display().to_string(),
        source,
    })?;
    let value: Value = serde_json::from_str(&text).map_err(|source| ConfigError::Json {
        path: path.display().to_string(),
        source,
    })?;
    let default_name = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "config".into());
    manifold_from_value(&value, &default_name)
}

pub fn manifold_from_value(value: &Value, default_name: &str) -> Result<LoadedManifold, ConfigError> {
    let obj = value
        .as_object()
        .ok_or_else(|| field_err("$", "expected a JSON object"))?;
    if let Some(name) = obj.get("zoo") {
        for key in obj.keys() {
            if key != "zoo" && key != "params" {
                return Err(field_err(key.as_str(), "unknown field in a zoo config"));
            }
        }
        let name = name.as_str().ok_or_else(|| field_err("zoo", "expected a string"))?;
        let params: ZooParams = match obj.get("params") {
            None => ZooParams::default(),
            Some(p) => serde_json::from_value(p.clone()).map_err(|e| field_err("params", e.to_string()))?,
        };
        return Ok(LoadedManifold {
            manifold: zoo(name, &params)?,
            warnings: Vec::new(),
        });
    }
    for key in obj.keys() {
        if !matches!(key.as_str(), "dim" | "metric" | "J" | "name" | "domain") {
            return Err(field_err(key.as_str(), "unknown field"));
        }
    }
    let dim = obj
        .get("dim")
        .ok_or_else(|| field_err("dim", "missing"))?
        .as_u64()
        .ok_or_else(|| field_err("dim", "expected a non-negative integer"))? as usize;
    if dim == 0 || dim % 2 != 0 {
        return Err(field_err("dim", format!("{dim} is odd or zero; J needs even dimension")));
    }
    let name = match obj.get("name") {
        None => default_name.to_string(),
        Some(v) => v
            .as_str()
            .ok_or_else(|| field_err("name", "expected a string"))?
            .to_string(),
    };
    let mut warnings = Vec::new();
    let metric = expr_matrix(obj.get("metric"), "metric", dim)?;
    for i in 0..dim {
        for k in 0..i {
            if metric[i][k] != metric[k][i] {
                warnings.push(format!(
                    "metric[{i}][{k}] differs from metric[{k}][{i}]; the upper triangle is used"
                ));
            }
        }
    }
    let j = expr_matrix(obj.get("J"), "J", dim)?;
    let mut m = ChartManifold::new(name, metric, j)?;
    if let Some(dom) = obj.get("domain") {
        m = m.with_domain(parse_domain(dom, dim)?);
    }
    Ok(LoadedManifold { manifold: m, warnings })
}

fn expr_matrix(v: Option<&Value>, field: &str, dim: usize) -> Result<Vec<Vec<Expr>>, ConfigError> {
    let rows = v
        .ok_or_else(|| field_err(field, "missing"))?
        .as_array()
        .ok_or_else(|| field_err(field, "expected an array of rows"))?;
    if rows.len() != dim {
        return Err(field_err(field, format!("expected {dim} rows, got {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let path = format!("{field}[{i}]");
            let row = row
                .as_array()
                .ok_or_else(|| field_err(path.clone(), "expected an array"))?;
            if row.len() != dim {
                return Err(field_err(path, format!("expected {dim} entries, got {}", row.len())));
            }
            row.iter()
                .enumerate()
                .map(|(k, cell)| {
                    let path = format!("{field}[{i}][{k}]");
                    let text = match cell {
                        Value::String(s) => s.clone(),
                        Value::Number(x) => x.to_string(),
                        _ => return Err(field_err(path, "expected an expression string")),
                    };
                    parse_expr(&text, dim).map_err(|e| field_err(path, e.to_string()))
                })
                .collect()
        })
        .collect()
}

fn parse_domain(v: &Value, dim: usize) -> Result<Vec<(f64, f64)>, ConfigError> {
    let rows = v
        .as_array()
        .ok_or_else(|| field_err("domain", "expected an array of [lo, hi] pairs"))?;
    if rows.len() != dim {
        return Err(field_err("domain", format!("expected {dim} intervals")));
    }
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let bound = |k: usize| -> Result<f64, ConfigError> {
                match r.get(k) {
                    Some(Value::Null) => Ok(if k == 0 { f64::NEG_INFINITY } else { f64::INFINITY }),
                    Some(x) => x
                        .as_f64()
                        .ok_or_else(|| field_err(format!("domain[{i}][{k}]"), "expected a number or null")),
                    None => Err(field_err(format!("domain[{i}]"), "expected [lo, hi]")),
                }
            };
            let (lo, hi) = (bound(0)?, bound(1)?);
            if lo >= hi {
                return Err(field_err(format!("domain[{i}]"), "empty interval"));
            }
            Ok((lo, hi))
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn flat_c3() -> Value {
        let id: Vec<Vec<String>> = (0..6)
            .map(|i| (0..6).map(|k| if i == k { "1".into() } else { "0".into() }).collect())
            .collect();
        let j: Vec<Vec<String>> = (0..6)
            .map(|i| {
                (0..6)
                    .map(|k| match (i, k) {
                        (i, k) if i == k + 3 => "1".into(),
                        (i, k) if k == i + 3 => "-1".into(),
                        _ => "0".into(),
                    })
                    .collect()
            })
            .collect();
        json!({"dim": 6, "metric": id, "J": j})
    }

    #[test]
    fn chart_config_loads() {
        let loaded = manifold_from_value(&flat_c3(), "flat").unwrap();
        assert!(loaded.warnings.is_empty());
        assert_eq!(loaded.manifold.dim(), 6);
        assert_eq!(loaded.manifold.name(), "flat");
    }

    #[test]
    fn lower_triangle_mismatch_warns() {
        let mut v = flat_c3();
        v["metric"][1][0] = json!("x1");
        let loaded = manifold_from_value(&v, "flat").unwrap();
        assert_eq!(loaded.warnings.len(), 1);
        assert!(loaded.warnings[0].contains("metric[1][0]"));
        assert_eq!(loaded.manifold.metric_exprs()[1][0], Expr::zero());
    }

    #[test]
    fn out_of_range_variable_reports_path() {
        let mut v = flat_c3();
        v["metric"][0][2] = json!("x9");
        let err = manifold_from_value(&v, "flat").unwrap_err().to_string();
        assert!(err.starts_with("metric[0][2]:"), "{err}");
        assert!(err.contains("x9"), "{err}");
    }

    #[test]
    fn structural_errors() {
        let mut v = flat_c3();
        v["dim"] = json!(5);
        assert!(manifold_from_value(&v, "x").unwrap_err().to_string().starts_with("dim:"));
        let mut v = flat_c3();
        v["J"][2] = json!(["0", "0"]);
        assert!(manifold_from_value(&v, "x").unwrap_err().to_string().starts_with("J[2]:"));
        let mut v = flat_c3();
        v["extra"] = json!(1);
        assert!(manifold_from_value(&v, "x").unwrap_err().to_string().starts_with("extra:"));
    }

    #[test]
    fn zoo_config() {
        let loaded = manifold_from_value(&json!({"zoo": "fubini_study_cpn", "params": {"n": 2}}), "x").unwrap();
        assert_eq!(loaded.manifold.dim(), 4);
        assert!(manifold_from_value(&json!({"zoo": "nope"}), "x").is_err());
        assert!(manifold_from_value(&json!({"zoo": "flat_cn", "params": {"m": 2}}), "x")
            .unwrap_err()
            .to_string()
            .starts_with("params:"));
    }

    #[test]
    fn domain_parsing() {
        let mut v = flat_c3();
        v["domain"] = json!([[0, 1], [null, null], [-1, 1], [-1, 1], [-1, 1], [-1, 1]]);
        let m = manifold_from_value(&v, "x").unwrap().manifold;
        assert_eq!(m.domain()[1], (f64::NEG_INFINITY, f64::INFINITY));
        assert!(!m.contains(&[1.5, 0.0, 0.0, 0.0, 0.0, 0.0]));
    }
}
