//! Shared report structure and the JSON / DOT emitters.
//!
//! Reports serialize to a fixed top-level shape
//! `{schema, instance?, properties, computations?}` with stable key order,
//! so identical inputs always produce identical bytes regardless of worker
//! counts or run order.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::dsl::WorkbenchFile;
use crate::error::{Error, Result};

pub const REPORT_SCHEMA: &str = "ttg-report/1";

/// Outcome of a single checked property.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Verdict {
    True,
    False,
    /// The property's hypotheses do not hold on this instance.
    NotApplicable,
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Verdict::True => serializer.serialize_bool(true),
            Verdict::False => serializer.serialize_bool(false),
            Verdict::NotApplicable => serializer.serialize_str("not-applicable"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PropertyEntry {
    pub name: String,
    pub verdict: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Computation {
    pub name: String,
    pub value: String,
}

/// Canonical declarations of the instance a report is about.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct InstanceBlock {
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub spaces: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub maps: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub supports: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub objects: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub instance: Option<InstanceBlock>,
    pub properties: Vec<PropertyEntry>,
    pub computations: Vec<Computation>,
}

impl Serialize for Report {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut len = 2;
        if self.instance.is_some() {
            len += 1;
        }
        if !self.computations.is_empty() {
            len += 1;
        }
        let mut s = serializer.serialize_struct("Report", len)?;
        s.serialize_field("schema", REPORT_SCHEMA)?;
        if let Some(instance) = &self.instance {
            s.serialize_field("instance", instance)?;
        }
        s.serialize_field("properties", &self.properties)?;
        if !self.computations.is_empty() {
            s.serialize_field("computations", &self.computations)?;
        }
        s.end()
    }
}

impl Report {
    pub fn new() -> Report {
        Report::default()
    }

    pub fn push_property(&mut self, name: &str, verdict: Verdict, witness: Option<String>) {
        self.properties.push(PropertyEntry {
            name: name.to_string(),
            verdict,
            witness,
        });
    }

    pub fn push_computation(&mut self, name: &str, value: impl Into<String>) {
        self.computations.push(Computation {
            name: name.to_string(),
            value: value.into(),
        });
    }

    pub fn property(&self, name: &str) -> Option<&PropertyEntry> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn all_pass(&self) -> bool {
        !self.has_failure()
    }

    pub fn has_failure(&self) -> bool {
        self.properties.iter().any(|p| p.verdict == Verdict::False)
    }

    /// Appends another report's entries under a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: Report) {
        for mut p in other.properties {
            if !prefix.is_empty() {
                p.name = format!("{prefix}{}", p.name);
            }
            self.properties.push(p);
        }
        for mut c in other.computations {
            if !prefix.is_empty() {
                c.name = format!("{prefix}{}", c.name);
            }
            self.computations.push(c);
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serialization cannot fail")
    }
}

/// Renders the spaces and maps of a file as a single DOT digraph: one
/// cluster per space with its covering edges (drawn from the more generic
/// point to its specializations), plus dashed edges for declared maps.
pub fn emit_dot(file: &WorkbenchFile) -> String {
    let mut out = String::from("digraph ttg {\n");
    out.push_str("  rankdir=TB;\n");
    for space in &file.spaces {
        out.push_str(&format!("  subgraph cluster_{} {{\n", space.name()));
        out.push_str(&format!("    label=\"{}\";\n", space.name()));
        for p in 0..space.len() {
            out.push_str(&format!(
                "    {}_{} [label=\"{}\"];\n",
                space.name(),
                space.point_name(p),
                space.point_name(p)
            ));
        }
        for (a, b) in space.covering_pairs() {
            // a < b means a is a specialization of b; the arrow points at a
            out.push_str(&format!(
                "    {}_{} -> {}_{};\n",
                space.name(),
                space.point_name(b),
                space.name(),
                space.point_name(a)
            ));
        }
        out.push_str("  }\n");
    }
    for map in &file.maps {
        for p in 0..map.domain().len() {
            out.push_str(&format!(
                "  {}_{} -> {}_{} [style=dashed];\n",
                map.domain().name(),
                map.domain().point_name(p),
                map.codomain().name(),
                map.codomain().point_name(map.apply(p))
            ));
        }
    }
    out.push_str("}\n");
    out
}

/// Output format for [`emit`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    Dot,
}

impl std::str::FromStr for EmitFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<EmitFormat> {
        match s {
            "json" => Ok(EmitFormat::Json),
            "dot" => Ok(EmitFormat::Dot),
            other => Err(Error::input(format!("unknown format {other} (expected json or dot)"))),
        }
    }
}

/// Emits a report (json) or the file's spaces and maps (dot) as bytes.
pub fn emit(report: &Report, file: &WorkbenchFile, format: EmitFormat) -> Vec<u8> {
    match format {
        EmitFormat::Json => report.to_json().into_bytes(),
        EmitFormat::Dot => emit_dot(file).into_bytes(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_bytes() {
        let report = Report::new();
        assert_eq!(report.to_json(), r#"{"schema":"ttg-report/1","properties":[]}"#);
    }

    #[test]
    fn verdict_serialization() {
        let mut report = Report::new();
        report.push_property("a", Verdict::True, None);
        report.push_property("b", Verdict::False, Some("w".into()));
        report.push_property("c", Verdict::NotApplicable, None);
        assert_eq!(
            report.to_json(),
            r#"{"schema":"ttg-report/1","properties":[{"name":"a","verdict":true},{"name":"b","verdict":false,"witness":"w"},{"name":"c","verdict":"not-applicable"}]}"#
        );
    }
}
