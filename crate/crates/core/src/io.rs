//! JSON encodings.
//!
//! A causet file is
//! `{"n": 2, "labels": ["0","1"], "d": [[0,1],[0,0]], "boundary": null}`,
//! optionally with `"rational": true` (entries are then `[num, den]` pairs),
//! `"meta"` (free-form, ignored on read) and `"kind": "causet"`. Distinction
//! matrices use the same layout with `"kind": "gamma"`.

use std::collections::BTreeMap;

use serde_json::{json, Map, Value};

use crate::causal::TimeFunction;
use crate::causet::{Causet, Rational};
use crate::error::{Error, Result};
use crate::gamma::GammaMatrix;
use crate::gh::GHResult;
use crate::nets::EpsilonNet;

fn field_err(field: &str, msg: impl std::fmt::Display) -> Error {
    Error::Format(format!("field `{field}`: {msg}"))
}

fn get<'a>(obj: &'a Map<String, Value>, field: &str) -> Result<&'a Value> {
    obj.get(field).ok_or_else(|| field_err(field, "missing"))
}

pub fn causet_to_json(c: &Causet, meta: Option<Value>) -> Value {
    let mut obj = Map::new();
    obj.insert("n".into(), json!(c.n()));
    obj.insert("labels".into(), json!(c.labels()));
    match c.rational_rows() {
        Some(rows) => {
            let d: Vec<Vec<[i64; 2]>> =
                rows.iter().map(|r| r.iter().map(|q| [*q.numer(), *q.denom()]).collect()).collect();
            obj.insert("d".into(), json!(d));
            obj.insert("rational".into(), json!(true));
        }
        None => {
            obj.insert("d".into(), json!(c.rows()));
        }
    }
    obj.insert("boundary".into(), json!(c.boundary()));
    if let Some(meta) = meta {
        obj.insert("meta".into(), meta);
    }
    Value::Object(obj)
}

fn parse_labels(obj: &Map<String, Value>, n: usize) -> Result<Vec<String>> {
    match obj.get("labels") {
        None | Some(Value::Null) => Ok((0..n).map(|i| i.to_string()).collect()),
        Some(Value::Array(items)) => {
            if items.len() != n {
                return Err(field_err("labels", format!("expected {n} labels, got {}", items.len())));
            }
            items
                .iter()
                .map(|v| v.as_str().map(String::from).ok_or_else(|| field_err("labels", "labels must be strings")))
                .collect()
        }
        Some(_) => Err(field_err("labels", "expected an array of strings")),
    }
}

fn parse_rows<T>(obj: &Map<String, Value>, n: usize, entry: impl Fn(&Value) -> Option<T>, what: &str) -> Result<Vec<Vec<T>>> {
    let rows = get(obj, "d")?.as_array().ok_or_else(|| field_err("d", "expected an array of rows"))?;
    if rows.len() != n {
        return Err(field_err("d", format!("expected {n} rows, got {}", rows.len())));
    }
    rows.iter()
        .enumerate()
        .map(|(i, row)| {
            let row = row.as_array().ok_or_else(|| field_err("d", format!("row {i} is not an array")))?;
            if row.len() != n {
                return Err(field_err("d", format!("row {i} has {} entries, expected {n}", row.len())));
            }
            row.iter()
                .enumerate()
                .map(|(j, v)| entry(v).ok_or_else(|| field_err("d", format!("entry [{i}][{j}] is not {what}"))))
                .collect()
        })
        .collect()
}

fn parse_n(obj: &Map<String, Value>) -> Result<usize> {
    let n = get(obj, "n")?.as_u64().ok_or_else(|| field_err("n", "expected a nonnegative integer"))?;
    Ok(n as usize)
}

fn check_kind(obj: &Map<String, Value>, expected: &str) -> Result<()> {
    match obj.get("kind") {
        None => Ok(()),
        Some(Value::String(k)) if k == expected => Ok(()),
        Some(other) => Err(field_err("kind", format!("expected \"{expected}\", got {other}"))),
    }
}

fn rational_entry(v: &Value) -> Option<Rational> {
    let pair = v.as_array()?;
    if pair.len() != 2 {
        return None;
    }
    let (num, den) = (pair[0].as_i64()?, pair[1].as_i64()?);
    (den != 0).then(|| Rational::new(num, den))
}

pub fn causet_from_json(v: &Value) -> Result<Causet> {
    let obj = v.as_object().ok_or_else(|| Error::Format("expected a JSON object".into()))?;
    check_kind(obj, "causet")?;
    let n = parse_n(obj)?;
    let labels = parse_labels(obj, n)?;
    let rational = match obj.get("rational") {
        None | Some(Value::Null) => false,
        Some(Value::Bool(b)) => *b,
        Some(_) => return Err(field_err("rational", "expected a boolean")),
    };
    let c = if rational {
        Causet::from_rational(labels, parse_rows(obj, n, rational_entry, "a [num, den] pair")?)?
    } else {
        let rows = parse_rows(obj, n, |v| v.as_f64(), "a number")?;
        Causet::with_labels(labels, rows)?
    };
    match obj.get("boundary") {
        None => {}
        Some(Value::Null) => {
            if let Some(b) = c.boundary() {
                return Err(field_err("boundary", format!("null, but point {b} has zero row and column")));
            }
        }
        Some(b) => {
            let b = b.as_u64().ok_or_else(|| field_err("boundary", "expected an index or null"))? as usize;
            if c.boundary() != Some(b) {
                return Err(field_err("boundary", format!("point {b} is not the unique spacelike boundary")));
            }
        }
    }
    Ok(c)
}

pub fn causet_from_str(s: &str) -> Result<Causet> {
    let v: Value = serde_json::from_str(s).map_err(|e| Error::Format(format!("malformed JSON: {e}")))?;
    causet_from_json(&v)
}

pub fn gamma_to_json(g: &GammaMatrix) -> Value {
    json!({"kind": "gamma", "n": g.n(), "labels": g.labels(), "d": g.rows()})
}

pub fn gamma_from_json(v: &Value) -> Result<GammaMatrix> {
    let obj = v.as_object().ok_or_else(|| Error::Format("expected a JSON object".into()))?;
    match obj.get("kind") {
        Some(Value::String(k)) if k == "gamma" => {}
        _ => return Err(field_err("kind", "expected \"gamma\"")),
    }
    let n = parse_n(obj)?;
    let labels = parse_labels(obj, n)?;
    let rows = parse_rows(obj, n, |v| v.as_f64(), "a number")?;
    for i in 0..n {
        for j in 0..n {
            if rows[i][j] != rows[j][i] {
                return Err(field_err("d", format!("not symmetric at [{i}][{j}]")));
            }
        }
    }
    Ok(GammaMatrix::from_upper(labels, |i, j| rows[i][j]))
}

pub fn net_to_json(net: &EpsilonNet) -> Value {
    json!({"eps": net.eps, "members": net.members})
}

pub fn net_from_json(v: &Value) -> Result<EpsilonNet> {
    let obj = v.as_object().ok_or_else(|| Error::Format("expected a JSON object".into()))?;
    let eps = get(obj, "eps")?.as_f64().ok_or_else(|| field_err("eps", "expected a number"))?;
    let members = get(obj, "members")?
        .as_array()
        .ok_or_else(|| field_err("members", "expected an array of indices"))?
        .iter()
        .map(|m| m.as_u64().map(|m| m as usize).ok_or_else(|| field_err("members", "expected an index")))
        .collect::<Result<_>>()?;
    Ok(EpsilonNet { eps, members })
}

/// `exact` is present only when the search proved optimality.
pub fn gh_result_to_json(r: &GHResult) -> Value {
    let mut obj = Map::new();
    obj.insert("lower".into(), json!(r.lower));
    obj.insert("upper".into(), json!(r.upper));
    if let Some(e) = r.exact {
        obj.insert("exact".into(), json!(e));
    }
    obj.insert("method".into(), serde_json::to_value(r.method).expect("enum serializes"));
    let pairs = r.witness.as_ref().map(|w| w.pairs().to_vec()).unwrap_or_default();
    obj.insert("witness_pairs".into(), json!(pairs));
    Value::Object(obj)
}

pub fn chain_to_json(points: &[usize]) -> Value {
    json!(points)
}

pub fn time_function_to_json(c: &Causet, tau: &TimeFunction) -> Value {
    let map: BTreeMap<&str, f64> = c.labels().iter().map(String::as_str).zip(tau.values.iter().copied()).collect();
    json!(map)
}
