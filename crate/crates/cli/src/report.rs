//! Machine-readable reports. Every rational is a string, every map is
//! emitted with sorted keys.

use formclass_core::{AffineSet, PairReport, Rational, Subspace, Vector};
use serde_json::{json, Map, Value};

use crate::document::SCHEMA_VERSION;

#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    value: Value,
}

impl Report {
    pub fn new(command: Value, coordinates: &[String], points: Vec<Value>, summary: Value) -> Self {
        let value = json!({
            "schema_version": SCHEMA_VERSION,
            "command": command,
            "coordinates": coordinates,
            "points": points,
            "summary": summary,
        });
        Report { value: sorted(value) }
    }

    pub fn value(&self) -> &Value {
        &self.value
    }

    pub fn summary(&self) -> &Value {
        &self.value["summary"]
    }

    pub fn points(&self) -> &[Value] {
        self.value["points"].as_array().map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(&self.value).expect("report serializes");
        out.push('\n');
        out
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let command = &self.value["command"];
        out.push_str(&format!("{}\n", plain(&command["name"])));
        if let Some(flags) = command.as_object() {
            for (k, v) in flags.iter().filter(|(k, _)| *k != "name") {
                out.push_str(&format!("  {k}: {}\n", plain(v)));
            }
        }
        out.push_str("summary\n");
        if let Some(summary) = self.summary().as_object() {
            for (k, v) in summary {
                out.push_str(&format!("  {k}: {}\n", plain(v)));
            }
        }
        let points = self.points();
        out.push_str(&format!("points ({})\n", points.len()));
        for p in points {
            let Some(obj) = p.as_object() else { continue };
            let at = obj.get("point").map(tuple).unwrap_or_default();
            let rest: Vec<String> = obj
                .iter()
                .filter(|(k, _)| *k != "point")
                .map(|(k, v)| format!("{k}={}", plain(v)))
                .collect();
            out.push_str(&format!("  {at}  {}\n", rest.join(" ")));
        }
        out
    }
}

/// Rebuilds every object with its keys inserted in sorted order, so the
/// output is sorted whichever map backend serde_json was built with.
fn sorted(value: Value) -> Value {
    match value {
        Value::Object(map) => {
            let mut entries: Vec<(String, Value)> = map.into_iter().collect();
            entries.sort_by(|a, b| a.0.cmp(&b.0));
            Value::Object(entries.into_iter().map(|(k, v)| (k, sorted(v))).collect::<Map<_, _>>())
        }
        Value::Array(items) => Value::Array(items.into_iter().map(sorted).collect()),
        other => other,
    }
}

fn plain(v: &Value) -> String {
    match v {
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn tuple(v: &Value) -> String {
    match v.as_array() {
        Some(items) => format!("({})", items.iter().map(plain).collect::<Vec<_>>().join(", ")),
        None => plain(v),
    }
}

pub fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

pub fn rationals(v: &[Rational]) -> Value {
    Value::Array(v.iter().map(rational).collect())
}

pub fn vector(v: &Vector) -> Value {
    rationals(&v.0)
}

pub fn subspace(s: &Subspace) -> Value {
    json!({
        "dim": s.dim(),
        "basis": s.basis_vectors().iter().map(vector).collect::<Vec<_>>(),
    })
}

pub fn affine(set: Option<&AffineSet>) -> Value {
    match set {
        None => Value::Null,
        Some(a) => json!({
            "particular": vector(&a.particular),
            "freedom": subspace(&a.freedom),
        }),
    }
}

pub fn pair(report: &PairReport) -> Value {
    json!({
        "class": report.class,
        "parity": report.parity.as_str(),
        "omega_rank": report.omega_rank,
        "tau_vanishes": report.tau_vanishes,
        "characteristic": subspace(&report.characteristic),
        "extended": subspace(&report.extended),
        "witness": {
            "kind": report.witness.kind(),
            "solutions": affine(Some(report.witness.solutions())),
        },
    })
}
