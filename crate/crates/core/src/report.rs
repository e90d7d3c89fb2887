//! Text surfaces: canonical JSON certificates, CSV emission, and the
//! flag-value parsers shared with the CLI.
//!
//! Floats in CSV carry 17 significant digits (lossless for f64); JSON uses
//! serde_json's shortest round-trip encoding. Rationals always travel as
//! canonical `p/q` strings, complex flag values as `a+bi`.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::bridge::{NullSolution, Sign};
use crate::partition::Partition;
use crate::poly::ParamPoly;
use crate::rational::{parse_rational, rational_to_string, Rational};
use crate::stochastic::ExperimentReport;
use crate::trace::{HullGrid, TraceCurve};
use crate::verma::{PBWVector, VermaParams};

/// 17 significant digits: enough to reproduce any f64 exactly.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Parses `a+bi` (also plain `a`, pure `bi`, `i`, `-i`).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let s: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    if s.is_empty() {
        return Err("empty complex literal".into());
    }
    let parse_part = |part: &str| -> Result<f64, String> {
        match part {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            other => other
                .parse::<f64>()
                .map_err(|_| format!("bad number {other:?} in {text:?}")),
        }
    };
    if let Some(body) = s.strip_suffix(['i', 'I']) {
        // Find the split between real and imaginary parts: the last +/-
        // not part of an exponent.
        let bytes = body.as_bytes();
        let mut split = None;
        for idx in (1..bytes.len()).rev() {
            let b = bytes[idx];
            if (b == b'+' || b == b'-') && !matches!(bytes[idx - 1], b'e' | b'E') {
                split = Some(idx);
                break;
            }
        }
        match split {
            Some(idx) => {
                let re: f64 = body[..idx]
                    .parse()
                    .map_err(|_| format!("bad real part in {text:?}"))?;
                let im = parse_part(&body[idx..])?;
                Ok(Complex64::new(re, im))
            }
            None => Ok(Complex64::new(0.0, parse_part(body)?)),
        }
    } else {
        let re: f64 = s
            .parse()
            .map_err(|_| format!("bad complex literal {text:?}"))?;
        Ok(Complex64::new(re, 0.0))
    }
}

fn coeff_string(poly: &ParamPoly) -> String {
    match poly.as_constant() {
        Some(q) => rational_to_string(&q),
        None => poly.to_string(),
    }
}

/// `{"level": l, "terms": [{"partition": [...], "coeff": "p/q"}, ...]}`;
/// symbolic coefficients are rendered as polynomial strings.
pub fn pbw_to_json(v: &PBWVector) -> Value {
    let terms: Vec<Value> = v
        .iter()
        .map(|(partition, coeff)| {
            json!({
                "partition": partition.parts(),
                "coeff": coeff_string(coeff),
            })
        })
        .collect();
    json!({ "level": v.level(), "terms": terms })
}

/// Reads the vector schema back (rational coefficients only); module
/// parameters are supplied by the caller.
pub fn pbw_from_json(value: &Value, params: VermaParams) -> Result<PBWVector, String> {
    let level = value
        .get("level")
        .and_then(Value::as_u64)
        .ok_or("missing integer field 'level'")? as u32;
    let terms = value
        .get("terms")
        .and_then(Value::as_array)
        .ok_or("missing array field 'terms'")?;
    let mut out = PBWVector::zero(level, params);
    for term in terms {
        let parts: Vec<u32> = term
            .get("partition")
            .and_then(Value::as_array)
            .ok_or("term without 'partition'")?
            .iter()
            .map(|p| p.as_u64().map(|v| v as u32).ok_or("bad partition entry"))
            .collect::<Result<_, _>>()?;
        let coeff = term
            .get("coeff")
            .and_then(Value::as_str)
            .ok_or("term without string 'coeff'")?;
        let coeff = parse_rational(coeff)?;
        let partition = Partition::new(parts);
        if partition.level() != level {
            return Err(format!(
                "partition {partition} is not at level {level}"
            ));
        }
        out.add_term(partition, ParamPoly::constant(coeff));
    }
    Ok(out)
}

/// The kappa-solver report:
/// `{"n": .., "s": .., "model": [p, p'], "module": [r, s],
///   "kappa": ["40"], "certificate": [...], ...}`.
#[allow(clippy::too_many_arguments)]
pub fn null_solution_to_json(
    grade: u32,
    sign: Sign,
    p: i64,
    p_prime: i64,
    r: i64,
    s: i64,
    solution: &NullSolution,
) -> Value {
    let kappa: Vec<String> = solution
        .roots
        .iter()
        .filter(|root| root.nonnegative)
        .map(|root| rational_to_string(&root.kappa))
        .collect();
    let negative: Vec<String> = solution
        .roots
        .iter()
        .filter(|root| !root.nonnegative)
        .map(|root| rational_to_string(&root.kappa))
        .collect();
    let certificate: Vec<Value> = solution
        .roots
        .iter()
        .map(|root| {
            json!({
                "kappa": rational_to_string(&root.kappa),
                "residue": pbw_to_json(&root.residue),
            })
        })
        .collect();
    let note = match (&solution.note, kappa.is_empty() && !negative.is_empty()) {
        (Some(note), _) => Some(note.clone()),
        (None, true) => Some("no non-negative solution".to_string()),
        (None, false) => None,
    };
    json!({
        "n": grade,
        "s": sign.label(),
        "model": [p, p_prime],
        "module": [r, s],
        "kappa": kappa,
        "negative_roots": negative,
        "identically_null": solution.identically_null,
        "residue": pbw_to_json(&solution.residue),
        "certificate": certificate,
        "note": note,
    })
}

/// Experiment report in the wire shape: top-level `statistic`/`p_value`
/// are the worst component, with the per-component verdicts attached.
pub fn experiment_to_json(report: &ExperimentReport) -> Value {
    let (statistic, p_value) = report.worst();
    json!({
        "experiment": report.experiment,
        "n": report.grade,
        "kappa": report.kappa,
        "N": report.requested,
        "used": report.used,
        "statistic": statistic,
        "p_value": p_value,
        "swallow_fraction": report.swallow_fraction,
        "threshold": report.threshold,
        "components": serde_json::to_value(&report.components).unwrap(),
        "status": serde_json::to_value(report.status).unwrap(),
        "seed": report.seed,
    })
}

/// Trace CSV: header `t,re,im`, floats with 17 significant digits.
pub fn trace_to_csv(curve: &TraceCurve) -> String {
    let mut out = String::from("t,re,im\n");
    for (t, z) in curve.points() {
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(*t),
            fmt_f64(z.re),
            fmt_f64(z.im)
        ));
    }
    out
}

/// Trace JSON mirroring the CSV fields.
pub fn trace_to_json(curve: &TraceCurve) -> Value {
    let points: Vec<Value> = curve
        .points()
        .iter()
        .map(|(t, z)| json!({ "t": t, "re": z.re, "im": z.im }))
        .collect();
    json!({ "points": points })
}

/// Hull CSV: header `re,im,tau`; one row per in-wedge grid point, `tau`
/// empty for points still alive at the horizon.
pub fn hull_to_csv(hull: &HullGrid) -> String {
    let mut out = String::from("re,im,tau\n");
    for cell in hull.cells.iter().flatten() {
        let tau = cell.tau.map(fmt_f64).unwrap_or_default();
        out.push_str(&format!(
            "{},{},{}\n",
            fmt_f64(cell.z.re),
            fmt_f64(cell.z.im),
            tau
        ));
    }
    out
}

/// Hull JSON mirroring the CSV fields.
pub fn hull_to_json(hull: &HullGrid) -> Value {
    let cells: Vec<Value> = hull
        .cells
        .iter()
        .flatten()
        .map(|cell| json!({ "re": cell.z.re, "im": cell.z.im, "tau": cell.tau }))
        .collect();
    json!({ "t": hull.t, "cells": cells })
}

/// Gram matrix as nested arrays of canonical strings.
pub fn gram_to_json(basis: &[Partition], matrix: &[Vec<ParamPoly>]) -> Value {
    let basis_json: Vec<Value> = basis.iter().map(|p| json!(p.parts())).collect();
    let rows: Vec<Value> = matrix
        .iter()
        .map(|row| Value::Array(row.iter().map(|p| json!(coeff_string(p))).collect()))
        .collect();
    json!({ "basis": basis_json, "matrix": rows })
}

/// Exact determinant of a numeric Gram matrix, as a canonical string.
pub fn gram_determinant(matrix: &[Vec<ParamPoly>]) -> Option<String> {
    let numeric: Option<Vec<Vec<Rational>>> = matrix
        .iter()
        .map(|row| row.iter().map(|p| p.as_constant()).collect())
        .collect();
    numeric.map(|m| rational_to_string(&crate::linalg::determinant(&m)))
}
