//! Instance file format.
//!
//! One JSON document per instance:
//!
//! ```json
//! {
//!   "nodes": ["u", "v"],
//!   "terminals": ["u"],
//!   "edges": [{ "u": "u", "v": "v", "tu": "2", "tv": "3/2" }]
//! }
//! ```
//!
//! Thresholds are rational strings (`"3/2"`, `"0.25"`, `"7"`) parsed exactly;
//! plain JSON integers are accepted too. Unknown keys are rejected. Saving
//! writes the canonical edge order, so load followed by save is stable.

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::instance::Instance;
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub nodes: Vec<String>,
    pub terminals: Vec<String>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EdgeRecord {
    pub u: String,
    pub v: String,
    pub tu: Literal,
    pub tv: Literal,
}

/// A rational literal as written in a file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Literal {
    Text(String),
    Integer(u64),
}

impl Literal {
    fn parse<T: Scalar>(&self) -> Result<T> {
        match self {
            Literal::Text(s) => {
                T::parse_literal(s).ok_or_else(|| Error::Parse(format!("bad rational literal {s:?}")))
            }
            Literal::Integer(n) => T::parse_literal(&n.to_string())
                .ok_or_else(|| Error::Parse(format!("integer {n} out of range"))),
        }
    }
}

impl InstanceFile {
    pub fn from_instance<T: Scalar>(inst: &Instance<T>) -> Self {
        InstanceFile {
            nodes: inst.names().to_vec(),
            terminals: inst.terminals().iter().map(|&t| inst.name(t).to_string()).collect(),
            edges: inst
                .edges()
                .iter()
                .map(|e| EdgeRecord {
                    u: inst.name(e.u).to_string(),
                    v: inst.name(e.v).to_string(),
                    tu: Literal::Text(e.tu.to_literal()),
                    tv: Literal::Text(e.tv.to_literal()),
                })
                .collect(),
        }
    }

    pub fn to_instance<T: Scalar>(&self) -> Result<Instance<T>> {
        let edges = self
            .edges
            .iter()
            .map(|e| Ok((e.u.as_str(), e.v.as_str(), e.tu.parse::<T>()?, e.tv.parse::<T>()?)))
            .collect::<Result<Vec<_>>>()?;
        Instance::new(&self.nodes, &self.terminals, edges)
    }
}

/// Parses and validates an instance document.
pub fn parse_instance<T: Scalar>(text: &str) -> Result<Instance<T>> {
    let file: InstanceFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    file.to_instance()
}

/// Canonical serialization (pretty JSON, trailing newline).
pub fn write_instance<T: Scalar>(inst: &Instance<T>) -> String {
    let mut text = serde_json::to_string_pretty(&InstanceFile::from_instance(inst))
        .expect("instance serializes");
    text.push('\n');
    text
}

/// Hex SHA-256 of the canonical serialization.
pub fn digest<T: Scalar>(inst: &Instance<T>) -> String {
    hex::encode(Sha256::digest(write_instance(inst).as_bytes()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Rational;

    const DOC: &str = r#"{
        "nodes": ["a", "b", "c"],
        "terminals": ["a"],
        "edges": [
            {"u": "b", "v": "a", "tu": "0.5", "tv": 3},
            {"u": "a", "v": "c", "tu": "3/2", "tv": "1"}
        ]
    }"#;

    #[test]
    fn parses_and_canonicalizes() {
        let inst: Instance<Rational> = parse_instance(DOC).unwrap();
        let e = &inst.edges()[0];
        assert_eq!((inst.name(e.u), inst.name(e.v)), ("a", "b"));
        assert_eq!(e.tu, Rational::from_ratio(3, 1));
        assert_eq!(e.tv, Rational::from_ratio(1, 2));
    }

    #[test]
    fn rejects_unknown_keys() {
        let doc = r#"{"nodes": [], "terminals": [], "edges": [], "extra": 1}"#;
        assert!(matches!(parse_instance::<Rational>(doc), Err(Error::Parse(_))));
        let doc = r#"{"nodes": ["a","b"], "terminals": [], "edges": [{"u":"a","v":"b","tu":"1","tv":"1","w":"2"}]}"#;
        assert!(matches!(parse_instance::<Rational>(doc), Err(Error::Parse(_))));
    }

    #[test]
    fn rejects_bad_literals() {
        let doc = r#"{"nodes": ["a","b"], "terminals": [], "edges": [{"u":"a","v":"b","tu":"x","tv":"1"}]}"#;
        assert!(matches!(parse_instance::<Rational>(doc), Err(Error::Parse(_))));
    }

    #[test]
    fn save_load_save_is_byte_stable() {
        let inst: Instance<Rational> = parse_instance(DOC).unwrap();
        let first = write_instance(&inst);
        let again: Instance<Rational> = parse_instance(&first).unwrap();
        assert_eq!(first, write_instance(&again));
        assert_eq!(digest(&inst), digest(&again));
    }
}
