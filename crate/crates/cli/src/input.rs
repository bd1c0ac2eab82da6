//! Command-line point syntax.

use anyhow::{bail, Context, Result};
use cyclord::rational::parse_rational;
use cyclord::Rational;
use serde_json::Value;

/// A list of `k` points: a JSON array, or comma-separated scalars where
/// `inf` is the point at infinity.
pub fn points(s: &str, k: usize) -> Result<Vec<Value>> {
    let s = s.trim();
    let v: Vec<Value> = if s.starts_with('[') {
        match serde_json::from_str(s).with_context(|| format!("invalid JSON {s:?}"))? {
            Value::Array(v) => v,
            _ => unreachable!("starts with ["),
        }
    } else {
        s.split(',')
            .map(|t| Value::String(t.trim().to_string()))
            .collect()
    };
    if v.len() != k {
        bail!("expected {k} points, got {}", v.len());
    }
    Ok(v)
}

/// One point: JSON, or a bare scalar.
pub fn point(s: &str) -> Result<Value> {
    let s = s.trim();
    if s.starts_with(['[', '{', '"']) {
        serde_json::from_str(s).with_context(|| format!("invalid JSON {s:?}"))
    } else {
        Ok(Value::String(s.to_string()))
    }
}

pub fn json(s: &str) -> Result<Value> {
    serde_json::from_str(s).with_context(|| format!("invalid JSON {s:?}"))
}

pub fn rationals(s: &str) -> Result<Vec<Rational>> {
    s.split(',')
        .map(|t| parse_rational(t.trim()).with_context(|| format!("bad rational {t:?}")))
        .collect()
}
