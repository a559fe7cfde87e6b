//! Canonical JSON emission: maps carry sorted keys (serde_json's default
//! BTreeMap backing) and every integer is rendered as a decimal string so
//! downstream consumers never hit 53-bit truncation.

use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::error::Error;
use crate::padic::PadicDiagnostics;
use crate::pipeline::LResult;
use crate::poly::{IntPoly, RatFunc};
use crate::suites::SuiteReport;
use crate::trivial::{DetInf, OrbitCensus, PurityReport};

pub fn big_str(x: &BigInt) -> Value {
    Value::String(x.to_string())
}

pub fn int_str(x: impl ToString) -> Value {
    Value::String(x.to_string())
}

pub fn poly_json(p: &IntPoly) -> Value {
    Value::Array(p.c.iter().map(big_str).collect())
}

pub fn ratfunc_json(r: &RatFunc) -> Value {
    json!({
        "num": poly_json(&r.num),
        "den": poly_json(&r.den),
    })
}

pub fn purity_json(p: &PurityReport) -> Value {
    json!({
        "weight": int_str(p.weight),
        "degree": int_str(p.degree),
        "max_rel_deviation": format!("{:.3e}", p.max_rel_deviation),
        "functional_equation_ok": p.functional_equation_ok,
        "pass": p.pass,
        "violations": p.violations,
    })
}

pub fn det_inf_json(d: &DetInf) -> Value {
    json!({
        "factor": poly_json(d.poly()),
        "closed_form": d.is_closed(),
    })
}

pub fn census_json(c: &OrbitCensus) -> Value {
    let orbits: Vec<Value> = c
        .orbits
        .iter()
        .map(|o| {
            json!({
                "representative": o.representative,
                "size": int_str(o.size),
                "signed_nonzero": o.signed_nonzero,
                "parity_odd": o.parity_odd,
            })
        })
        .collect();
    json!({
        "n": int_str(c.n),
        "k": int_str(c.k),
        "p": int_str(c.p),
        "q": int_str(c.q),
        "zeta_index": int_str(c.zeta_index),
        "tuple_count": int_str(c.tuples.len()),
        "orbits": orbits,
        "a": int_str(c.a),
        "b": c.b.map(int_str).unwrap_or(Value::Null),
        "c": c.c.map(int_str).unwrap_or(Value::Null),
    })
}

pub fn lresult_json(r: &LResult) -> Value {
    json!({
        "object": "lfunction",
        "n": int_str(r.n),
        "k": int_str(r.k),
        "q": int_str(r.q),
        "lfunction": ratfunc_json(&r.l),
        "nontrivial": poly_json(&r.nontrivial),
        "det0": poly_json(&r.det0),
        "det_inf": det_inf_json(&r.det_inf),
        "h0": poly_json(&r.h0),
        "h2": poly_json(&r.h2),
        "exceptional": r.exceptional,
        "census": r.census.as_ref().map(census_json).unwrap_or(Value::Null),
        "power_sums": Value::Array(r.s_values.iter().map(big_str).collect()),
        "m_used": int_str(r.m_used),
        "purity": purity_json(&r.purity),
    })
}

pub fn error_json(e: &Error) -> Value {
    json!({
        "error": {
            "kind": e.kind(),
            "message": e.to_string(),
        }
    })
}

pub fn suite_json(rep: &SuiteReport) -> Value {
    let lines: Vec<Value> = rep
        .lines
        .iter()
        .map(|l| {
            json!({
                "name": l.name,
                "pass": l.pass,
                "detail": l.detail,
            })
        })
        .collect();
    json!({
        "suite": rep.suite,
        "pass": rep.pass(),
        "checks": lines,
    })
}

pub fn padic_json(d: &PadicDiagnostics) -> Value {
    let steps: Vec<Value> = d
        .steps
        .iter()
        .map(|s| {
            json!({
                "k_lo": int_str(s.k_lo),
                "k_hi": int_str(s.k_hi),
                "m": int_str(s.m),
                "guaranteed": int_str(s.guaranteed),
                "ok": s.congruence.ok,
                "valuations": s
                    .congruence
                    .valuations
                    .iter()
                    .map(|v| v.map(int_str).unwrap_or(Value::Null))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let divisibility: Vec<Value> = d
        .divisibility
        .iter()
        .zip(&d.k_sequence)
        .map(|(list, k)| {
            json!({
                "k": int_str(*k),
                "factors": list
                    .iter()
                    .map(|(j, e)| json!({"j": int_str(*j), "multiplicity": int_str(*e)}))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    json!({
        "object": "padic",
        "p": int_str(d.p),
        "n": int_str(d.n),
        "q": int_str(d.q),
        "k_sequence": d.k_sequence.iter().map(int_str).collect::<Vec<_>>(),
        "truncation_radius": int_str(d.truncation_radius),
        "d_prefix": Value::Array(d.d_prefix.iter().map(big_str).collect()),
        "divisibility": divisibility,
        "steps": steps,
        "nontrivial_factors": d
            .results
            .iter()
            .map(|r| poly_json(&r.nontrivial))
            .collect::<Vec<_>>(),
    })
}

/// Deterministic rendering: sorted keys, compact separators.
pub fn to_canonical_string(v: &Value) -> String {
    serde_json::to_string(v).expect("json value serializes")
}

/// Coefficient tables as CSV rows (table, index, value).
pub fn lresult_csv(r: &LResult) -> String {
    let mut out = String::from("table,index,value\n");
    let mut emit = |name: &str, p: &IntPoly| {
        for (i, c) in p.c.iter().enumerate() {
            out.push_str(&format!("{},{},{}\n", name, i, c));
        }
    };
    emit("l_num", &r.l.num);
    emit("l_den", &r.l.den);
    emit("nontrivial", &r.nontrivial);
    emit("det0", &r.det0);
    emit("det_inf", r.det_inf.poly());
    emit("h0", &r.h0);
    emit("h2", &r.h2);
    for (i, s) in r.s_values.iter().enumerate() {
        out.push_str(&format!("power_sum,{},{}\n", i + 1, s));
    }
    out
}
