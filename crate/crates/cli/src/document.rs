//! The JSON workspace document and its resolution into core objects.
//!
//! ```json
//! {
//!   "schema_version": "1",
//!   "coordinates": ["x", "y", "z"],
//!   "forms": { "tau": [{ "indices": ["z"], "coeff": "1" }] },
//!   "vector_fields": { "G": ["y", "0", "1"] },
//!   "functions": { "f": "1/2*t^2" },
//!   "domain": { "axes": { "z": { "values": ["-1", "0", "1"] } } }
//! }
//! ```
//!
//! Polynomials are strings in the core polynomial grammar. Rationals are
//! strings (`"-3/4"`), never JSON numbers.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use formclass_core::{
    parse_polynomial, parse_rational, Form, PolyForm, PolyVectorField, Polynomial, Rational, SampleDomain,
};
use num::Zero;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const SCHEMA_VERSION: &str = "1";

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Document {
    pub schema_version: String,
    pub coordinates: Vec<String>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub forms: BTreeMap<String, Vec<Term>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub vector_fields: BTreeMap<String, Vec<String>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub functions: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub domain: Option<DomainSpec>,
}

/// One `coeff · d(indices[0])∧d(indices[1])∧…` term. An empty index list is
/// a 0-form term.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Term {
    pub indices: Vec<String>,
    pub coeff: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainSpec {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub axes: BTreeMap<String, AxisSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub extra_points: Vec<Vec<String>>,
}

/// Sample values for one coordinate. Without `values` the default grid is
/// used, minus 0 when `nonzero` is set.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub nonzero: bool,
}

impl Document {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let path = e.path().to_string();
            let inner = e.into_inner();
            let message = if inner.is_syntax() || inner.is_eof() {
                format!("line {}, column {}: {inner}", inner.line(), inner.column())
            } else {
                inner.to_string()
            };
            CliError::schema(if path == "." { "document".to_string() } else { path }, message)
        })
    }

    /// Canonical serialization: struct fields in declaration order, map keys
    /// sorted, two-space indentation, trailing newline.
    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("document serializes");
        out.push('\n');
        out
    }
}

/// A document with every name resolved and every polynomial parsed.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Workspace {
    pub coordinates: Vec<String>,
    pub forms: BTreeMap<String, PolyForm>,
    pub vector_fields: BTreeMap<String, PolyVectorField>,
    pub functions: BTreeMap<String, Polynomial>,
    pub domain: SampleDomain,
}

impl Workspace {
    pub fn dim(&self) -> usize {
        self.coordinates.len()
    }

    pub fn form(&self, name: &str) -> Result<&PolyForm, CliError> {
        self.forms.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "form",
            name: name.to_string(),
        })
    }

    pub fn function(&self, name: &str) -> Result<&Polynomial, CliError> {
        self.functions.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "function",
            name: name.to_string(),
        })
    }

    pub fn vector_field(&self, name: &str) -> Result<&PolyVectorField, CliError> {
        self.vector_fields.get(name).ok_or_else(|| CliError::UnknownName {
            kind: "vector field",
            name: name.to_string(),
        })
    }

    pub fn coordinate(&self, name: &str) -> Result<usize, CliError> {
        self.coordinates
            .iter()
            .position(|c| c == name)
            .ok_or_else(|| CliError::UnknownName {
                kind: "coordinate",
                name: name.to_string(),
            })
    }
}

pub fn load(path: &Path) -> Result<Workspace, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    resolve(&Document::from_json(&text)?)
}

pub fn load_str(text: &str) -> Result<Workspace, CliError> {
    resolve(&Document::from_json(text)?)
}

fn is_identifier(name: &str) -> bool {
    let mut chars = name.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic() || c == '_')
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

pub fn resolve(doc: &Document) -> Result<Workspace, CliError> {
    if doc.schema_version != SCHEMA_VERSION {
        return Err(CliError::schema(
            "schema_version",
            format!("unsupported version {:?}, expected {SCHEMA_VERSION:?}", doc.schema_version),
        ));
    }
    if doc.coordinates.is_empty() {
        return Err(CliError::schema("coordinates", "at least one coordinate is required"));
    }
    let mut seen = BTreeSet::new();
    for (i, name) in doc.coordinates.iter().enumerate() {
        if !is_identifier(name) {
            return Err(CliError::schema(format!("coordinates[{i}]"), format!("`{name}` is not an identifier")));
        }
        if !seen.insert(name.as_str()) {
            return Err(CliError::schema(format!("coordinates[{i}]"), format!("duplicate coordinate `{name}`")));
        }
    }
    let names = &doc.coordinates;
    let m = names.len();
    let poly = |path: String, text: &str| -> Result<Polynomial, CliError> {
        parse_polynomial(text, names).map_err(|source| CliError::Syntax { path, source })
    };

    let mut forms = BTreeMap::new();
    for (name, terms) in &doc.forms {
        let base = format!("forms.{name}");
        let Some(first) = terms.first() else {
            return Err(CliError::schema(base, "a form needs at least one term (use coeff \"0\" for zero)"));
        };
        let degree = first.indices.len();
        if degree > m {
            return Err(CliError::schema(format!("{base}[0].indices"), format!("degree {degree} exceeds dimension {m}")));
        }
        let mut resolved = Vec::with_capacity(terms.len());
        let mut used = BTreeSet::new();
        for (t, term) in terms.iter().enumerate() {
            let path = format!("{base}[{t}]");
            if term.indices.len() != degree {
                return Err(CliError::schema(
                    format!("{path}.indices"),
                    format!("expected {degree} indices like the first term, found {}", term.indices.len()),
                ));
            }
            let mut idx = Vec::with_capacity(degree);
            for (k, ix) in term.indices.iter().enumerate() {
                let pos = names.iter().position(|c| c == ix).ok_or_else(|| {
                    CliError::schema(format!("{path}.indices[{k}]"), format!("undeclared coordinate `{ix}`"))
                })?;
                if idx.last().is_some_and(|&prev| prev >= pos) {
                    return Err(CliError::schema(
                        format!("{path}.indices[{k}]"),
                        "indices must be strictly increasing in coordinate order",
                    ));
                }
                idx.push(pos);
            }
            if !used.insert(idx.clone()) {
                return Err(CliError::schema(format!("{path}.indices"), "repeated index tuple"));
            }
            resolved.push((idx, poly(format!("{path}.coeff"), &term.coeff)?));
        }
        forms.insert(name.clone(), Form::from_terms(m, degree, resolved));
    }

    let mut vector_fields = BTreeMap::new();
    for (name, comps) in &doc.vector_fields {
        let base = format!("vector_fields.{name}");
        if comps.len() != m {
            return Err(CliError::schema(base, format!("expected {m} components, found {}", comps.len())));
        }
        let comps = comps
            .iter()
            .enumerate()
            .map(|(i, c)| poly(format!("{base}[{i}]"), c))
            .collect::<Result<Vec<_>, _>>()?;
        vector_fields.insert(name.clone(), PolyVectorField::new(comps));
    }

    let mut functions = BTreeMap::new();
    for (name, text) in &doc.functions {
        functions.insert(name.clone(), poly(format!("functions.{name}"), text)?);
    }

    let domain = resolve_domain(doc.domain.as_ref(), names)?;
    Ok(Workspace {
        coordinates: names.clone(),
        forms,
        vector_fields,
        functions,
        domain,
    })
}

fn rational_at(path: String, text: &str) -> Result<Rational, CliError> {
    parse_rational(text).ok_or_else(|| CliError::schema(path, format!("`{text}` is not a rational literal")))
}

fn resolve_domain(spec: Option<&DomainSpec>, names: &[String]) -> Result<SampleDomain, CliError> {
    let empty = DomainSpec::default();
    let spec = spec.unwrap_or(&empty);
    for axis in spec.axes.keys() {
        if !names.contains(axis) {
            return Err(CliError::schema(format!("domain.axes.{axis}"), format!("undeclared coordinate `{axis}`")));
        }
    }
    let nonzero: Vec<bool> = names
        .iter()
        .map(|n| spec.axes.get(n).is_some_and(|a| a.nonzero))
        .collect();
    let mut dom = SampleDomain::default_for(&nonzero);
    for (i, name) in names.iter().enumerate() {
        let Some(values) = spec.axes.get(name).and_then(|a| a.values.as_ref()) else {
            continue;
        };
        let path = format!("domain.axes.{name}.values");
        if values.is_empty() {
            return Err(CliError::schema(path, "sample list is empty"));
        }
        let values = values
            .iter()
            .enumerate()
            .map(|(k, v)| rational_at(format!("{path}[{k}]"), v))
            .collect::<Result<Vec<_>, _>>()?;
        if nonzero[i] {
            if let Some(k) = values.iter().position(Zero::is_zero) {
                return Err(CliError::schema(format!("{path}[{k}]"), "0 is excluded by `nonzero`"));
            }
        }
        dom = dom.with_axis(i, values);
    }
    let mut extra = Vec::with_capacity(spec.extra_points.len());
    for (k, point) in spec.extra_points.iter().enumerate() {
        let path = format!("domain.extra_points[{k}]");
        if point.len() != names.len() {
            return Err(CliError::schema(path, format!("expected {} coordinates, found {}", names.len(), point.len())));
        }
        extra.push(
            point
                .iter()
                .enumerate()
                .map(|(i, v)| rational_at(format!("{path}[{i}]"), v))
                .collect::<Result<Vec<_>, _>>()?,
        );
    }
    SampleDomain::new(dom.axes().to_vec(), extra).map_err(|e| CliError::schema("domain", e.to_string()))
}
