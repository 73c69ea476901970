//! Canonical JSON emission and the report schema validator.

use crate::mat::Mat;
use serde_json::{json, Map, Value};
use std::fmt::Write;

pub const SCHEMA: &str = "tracelab/1";

/// Largest matrix stored entry by entry in a witness.
const WITNESS_ENTRIES: usize = 1024;

/// A float as a JSON value; non-finite values become the strings `inf`, `-inf`, `nan`.
pub fn float(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or_else(
        || {
            Value::String(if x.is_nan() {
                "nan".into()
            } else if x > 0.0 {
                "inf".into()
            } else {
                "-inf".into()
            })
        },
        Value::Number,
    )
}

/// A complex matrix as `{rows, cols, re, im}` in row-major order, or a summary when too large.
pub fn matrix_value(m: &Mat) -> Value {
    let (r, c) = m.shape();
    if r * c > WITNESS_ENTRIES {
        return json!({
            "rows": r,
            "cols": c,
            "max_abs": float(crate::mat::max_abs(m)),
            "truncated": true,
        });
    }
    let mut re = Vec::with_capacity(r * c);
    let mut im = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            re.push(float(m[(i, j)].re));
            im.push(float(m[(i, j)].im));
        }
    }
    json!({ "rows": r, "cols": c, "re": re, "im": im })
}

fn write_value(out: &mut String, v: &Value, indent: usize) {
    let pad = |out: &mut String, n: usize| out.extend(std::iter::repeat_n(' ', n));
    match v {
        Value::Null | Value::Bool(_) | Value::String(_) => out.push_str(&v.to_string()),
        Value::Number(n) => {
            if n.is_f64() {
                let _ = write!(out, "{:.16e}", n.as_f64().expect("finite float"));
            } else {
                out.push_str(&n.to_string());
            }
        }
        Value::Array(a) => {
            if a.is_empty() {
                out.push_str("[]");
                return;
            }
            if a.iter().all(|x| !x.is_object() && !x.is_array()) {
                out.push('[');
                for (i, x) in a.iter().enumerate() {
                    if i > 0 {
                        out.push_str(", ");
                    }
                    write_value(out, x, indent);
                }
                out.push(']');
                return;
            }
            out.push_str("[\n");
            for (i, x) in a.iter().enumerate() {
                pad(out, indent + 2);
                write_value(out, x, indent + 2);
                out.push_str(if i + 1 < a.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push(']');
        }
        Value::Object(o) => {
            if o.is_empty() {
                out.push_str("{}");
                return;
            }
            let mut keys: Vec<&String> = o.keys().collect();
            keys.sort();
            out.push_str("{\n");
            for (i, k) in keys.iter().enumerate() {
                pad(out, indent + 2);
                out.push_str(&Value::String((*k).clone()).to_string());
                out.push_str(": ");
                write_value(out, &o[*k], indent + 2);
                out.push_str(if i + 1 < keys.len() { ",\n" } else { "\n" });
            }
            pad(out, indent);
            out.push('}');
        }
    }
}

/// UTF-8 JSON with sorted keys and every float written with 17 significant digits.
pub fn to_canonical_json(v: &Value) -> String {
    let mut s = String::new();
    write_value(&mut s, v, 0);
    s.push('\n');
    s
}

/// Removes every `wall_time_s` field, leaving the deterministic body.
pub fn strip_timing(v: &Value) -> Value {
    match v {
        Value::Object(o) => Value::Object(
            o.iter()
                .filter(|(k, _)| k.as_str() != "wall_time_s")
                .map(|(k, x)| (k.clone(), strip_timing(x)))
                .collect::<Map<_, _>>(),
        ),
        Value::Array(a) => Value::Array(a.iter().map(strip_timing).collect()),
        x => x.clone(),
    }
}

fn need<'a>(o: &'a Map<String, Value>, key: &str, ctx: &str) -> Result<&'a Value, String> {
    o.get(key).ok_or_else(|| format!("{ctx}: missing '{key}'"))
}

fn is_float(v: &Value) -> bool {
    v.is_number() || matches!(v.as_str(), Some("inf" | "-inf" | "nan"))
}

fn check_record(v: &Value, ctx: &str) -> Result<bool, String> {
    let o = v
        .as_object()
        .ok_or_else(|| format!("{ctx}: check is not an object"))?;
    need(o, "name", ctx)?
        .as_str()
        .ok_or_else(|| format!("{ctx}: name is not a string"))?;
    need(o, "cases", ctx)?
        .as_u64()
        .ok_or_else(|| format!("{ctx}: cases is not a count"))?;
    let d = need(o, "max_deviation", ctx)?;
    if !d.is_null() && !is_float(d) {
        return Err(format!("{ctx}: max_deviation is not a float"));
    }
    need(o, "detail", ctx)?;
    need(o, "pass", ctx)?
        .as_bool()
        .ok_or_else(|| format!("{ctx}: pass is not a bool"))
}

fn axiom_entry(v: &Value, ctx: &str) -> Result<bool, String> {
    let o = v
        .as_object()
        .ok_or_else(|| format!("{ctx}: entry is not an object"))?;
    for k in ["category", "axiom"] {
        need(o, k, ctx)?
            .as_str()
            .ok_or_else(|| format!("{ctx}: {k} is not a string"))?;
    }
    for k in ["attempted", "skipped", "failures"] {
        need(o, k, ctx)?
            .as_u64()
            .ok_or_else(|| format!("{ctx}: {k} is not a count"))?;
    }
    let d = need(o, "definedness", ctx)?
        .as_object()
        .ok_or_else(|| format!("{ctx}: definedness is not an object"))?;
    for k in ["both", "lhs_only", "rhs_only", "neither", "vacuous"] {
        need(d, k, ctx)?
            .as_u64()
            .ok_or_else(|| format!("{ctx}: definedness.{k} is not a count"))?;
    }
    let m = need(o, "max_deviation", ctx)?;
    if !m.is_null() && !is_float(m) {
        return Err(format!("{ctx}: max_deviation is not a float"));
    }
    need(o, "margin", ctx)?;
    need(o, "worst_witness", ctx)?;
    need(o, "pass", ctx)?
        .as_bool()
        .ok_or_else(|| format!("{ctx}: pass is not a bool"))
}

/// Checks the report against the `tracelab/1` schema, including that every
/// `pass` flag agrees with its children.
pub fn validate_report(v: &Value) -> Result<(), String> {
    let o = v.as_object().ok_or("report is not an object")?;
    if need(o, "schema", "report")?.as_str() != Some(SCHEMA) {
        return Err(format!("report: schema is not '{SCHEMA}'"));
    }
    let cfg = need(o, "config", "report")?
        .as_object()
        .ok_or("report: config is not an object")?;
    for k in ["seed", "samples"] {
        need(cfg, k, "config")?
            .as_u64()
            .ok_or_else(|| format!("config: {k} is not a count"))?;
    }
    for k in ["eq_tol", "rank_tol", "psd_tol"] {
        if !need(cfg, k, "config")?.is_number() {
            return Err(format!("config: {k} is not a number"));
        }
    }
    for k in ["categories", "axioms"] {
        need(cfg, k, "config")?
            .as_array()
            .ok_or_else(|| format!("config: {k} is not a list"))?;
    }
    let suites = need(o, "suites", "report")?
        .as_object()
        .ok_or("report: suites is not an object")?;
    let mut all = true;
    for (name, s) in suites {
        let so = s
            .as_object()
            .ok_or_else(|| format!("suite {name} is not an object"))?;
        if !is_float(need(so, "wall_time_s", name)?) {
            return Err(format!("{name}: wall_time_s is not a number"));
        }
        let mut pass = true;
        if name == "axioms" {
            for (i, e) in need(so, "entries", name)?
                .as_array()
                .ok_or("axioms: entries is not a list")?
                .iter()
                .enumerate()
            {
                pass &= axiom_entry(e, &format!("axioms.entries[{i}]"))?;
            }
        }
        for (i, c) in need(so, "checks", name)?
            .as_array()
            .ok_or_else(|| format!("{name}: checks is not a list"))?
            .iter()
            .enumerate()
        {
            pass &= check_record(c, &format!("{name}.checks[{i}]"))?;
        }
        let flag = need(so, "pass", name)?
            .as_bool()
            .ok_or_else(|| format!("{name}: pass is not a bool"))?;
        if flag != pass {
            return Err(format!("{name}: pass flag disagrees with its checks"));
        }
        all &= pass;
    }
    let flag = need(o, "pass", "report")?
        .as_bool()
        .ok_or("report: pass is not a bool")?;
    if flag != all {
        return Err("report: pass flag disagrees with its suites".into());
    }
    Ok(())
}
