//! Text encodings of sweep tables and branch reports.
//!
//! Every number goes through [`fmt_num`] (12 decimals, trailing zeros
//! trimmed). JSON numbers are those same strings parsed back, so CSV and JSON
//! carry identical values.

use std::fmt::Write as _;

use jjarray::{LandscapeBranch, SweepTable, VortexConfig};
use serde::Serialize;
use serde_json::{Number, Value};

pub fn fmt_num(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    let mut s = format!("{x:.12}");
    if s.contains('.') {
        let trimmed = s.trim_end_matches('0').trim_end_matches('.').len();
        s.truncate(trimmed);
    }
    if s == "-0" {
        s = "0".into();
    }
    s
}

/// Physical quantities span many decades; 12 significant figures.
pub fn fmt_sci(x: f64) -> String {
    format!("{x:.11e}")
}

fn num(x: f64) -> Value {
    let rounded: f64 = fmt_num(x).parse().expect("formatted number parses");
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

fn config_json(c: &VortexConfig) -> Value {
    Value::Array(c.as_slice().iter().map(|&v| Value::from(v)).collect())
}

pub fn sweep_csv(table: &SweepTable) -> String {
    let mut out = String::from("f,config,energy,is_ground\n");
    for r in &table.rows {
        writeln!(
            out,
            "{},{},{},{}",
            fmt_num(r.f),
            r.config,
            fmt_num(r.energy),
            r.is_ground
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct SweepDoc<'a> {
    topology: &'a str,
    kappa: Value,
    rows: Vec<Value>,
}

pub fn sweep_json(table: &SweepTable, topology: &str, kappa: f64) -> String {
    let rows = table
        .rows
        .iter()
        .map(|r| {
            serde_json::json!({
                "f": num(r.f),
                "config": config_json(&r.config),
                "energy": num(r.energy),
                "is_ground": r.is_ground,
            })
        })
        .collect();
    let doc = SweepDoc {
        topology,
        kappa: num(kappa),
        rows,
    };
    let mut s = serde_json::to_string_pretty(&doc).expect("sweep serializes");
    s.push('\n');
    s
}

/// One whitespace-delimited block per configuration, blank-line separated.
pub fn sweep_plot_data(table: &SweepTable) -> String {
    let mut configs: Vec<&VortexConfig> = table.rows.iter().map(|r| &r.config).collect();
    configs.sort();
    configs.dedup();
    let mut out = String::new();
    for (k, c) in configs.iter().enumerate() {
        if k > 0 {
            out.push('\n');
        }
        writeln!(out, "# config {c}").unwrap();
        for r in table.rows.iter().filter(|r| &r.config == *c) {
            writeln!(out, "{} {}", fmt_num(r.f), fmt_num(r.energy)).unwrap();
        }
    }
    out
}

pub fn branches_csv(branches: &[LandscapeBranch]) -> String {
    let mut out = String::from("config,a,b,c,vertex_f,multiplicity,f_lo,f_hi\n");
    for b in branches {
        for iv in &b.ground_intervals {
            writeln!(
                out,
                "{},{},{},{},{},{},{},{}",
                b.config,
                fmt_num(b.quad.a),
                fmt_num(b.quad.b),
                fmt_num(b.quad.c),
                fmt_num(b.vertex_f),
                b.multiplicity,
                fmt_num(iv.lo),
                fmt_num(iv.hi)
            )
            .unwrap();
        }
    }
    out
}

pub fn branches_json(branches: &[LandscapeBranch], topology: &str, kappa: f64) -> String {
    let list: Vec<Value> = branches
        .iter()
        .map(|b| {
            serde_json::json!({
                "config": config_json(&b.config),
                "quad": { "a": num(b.quad.a), "b": num(b.quad.b), "c": num(b.quad.c) },
                "vertex_f": num(b.vertex_f),
                "multiplicity": b.multiplicity,
                "ground_intervals": b.ground_intervals
                    .iter()
                    .map(|iv| Value::Array(vec![num(iv.lo), num(iv.hi)]))
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let doc = serde_json::json!({
        "topology": topology,
        "kappa": num(kappa),
        "branches": list,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("branches serialize");
    s.push('\n');
    s
}
