use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, SeqAccess, Visitor};
use serde::ser::{SerializeTuple, Serializer};
use serde::{Deserialize, Serialize};

use super::{ParseError, DUPLICATE_ID, PAIR_ARITY};
use crate::ids::{AlternativeId, IssueId};
use crate::model::Model;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelDocument {
    pub name: String,
    #[serde(deserialize_with = "unique_issues")]
    pub issues: Vec<IssueEntry>,
    #[serde(deserialize_with = "unique_alternatives")]
    pub alternatives: Vec<AlternativeEntry>,
    pub incompatible: Vec<IncompatiblePair>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IssueEntry {
    pub id: IssueId,
    #[serde(default)]
    pub label: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlternativeEntry {
    pub id: AlternativeId,
    #[serde(default)]
    pub label: String,
    pub issue: IssueId,
    #[serde(default)]
    pub triggers: Vec<IssueId>,
}

/// An unordered pair of alternatives that cannot be chosen together.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IncompatiblePair(pub AlternativeId, pub AlternativeId);

impl IncompatiblePair {
    pub fn new(a: impl Into<AlternativeId>, b: impl Into<AlternativeId>) -> Self {
        IncompatiblePair(a.into(), b.into())
    }

    fn sorted(self) -> Self {
        if self.1 < self.0 {
            IncompatiblePair(self.1, self.0)
        } else {
            self
        }
    }
}

impl Serialize for IncompatiblePair {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut tup = serializer.serialize_tuple(2)?;
        tup.serialize_element(&self.0)?;
        tup.serialize_element(&self.1)?;
        tup.end()
    }
}

impl<'de> Deserialize<'de> for IncompatiblePair {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PairVisitor;

        impl<'de> Visitor<'de> for PairVisitor {
            type Value = IncompatiblePair;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a list of exactly two alternative ids")
            }

            fn visit_seq<A: SeqAccess<'de>>(self, mut seq: A) -> Result<Self::Value, A::Error> {
                let mut items: Vec<AlternativeId> = Vec::with_capacity(2);
                while let Some(item) = seq.next_element()? {
                    items.push(item);
                }
                match <[AlternativeId; 2]>::try_from(items) {
                    Ok([a, b]) => Ok(IncompatiblePair(a, b)),
                    Err(items) => Err(de::Error::custom(format!(
                        "{PAIR_ARITY} incompatible pair has {} members, expected 2",
                        items.len()
                    ))),
                }
            }
        }

        deserializer.deserialize_seq(PairVisitor)
    }
}

fn unique_issues<'de, D: Deserializer<'de>>(deserializer: D) -> Result<Vec<IssueEntry>, D::Error> {
    let entries = Vec::<IssueEntry>::deserialize(deserializer)?;
    reject_duplicates(entries.iter().map(|e| e.id.as_str()), "issue")?;
    Ok(entries)
}

fn unique_alternatives<'de, D: Deserializer<'de>>(
    deserializer: D,
) -> Result<Vec<AlternativeEntry>, D::Error> {
    let entries = Vec::<AlternativeEntry>::deserialize(deserializer)?;
    reject_duplicates(entries.iter().map(|e| e.id.as_str()), "alternative")?;
    Ok(entries)
}

fn reject_duplicates<'a, E: de::Error>(
    ids: impl Iterator<Item = &'a str>,
    what: &str,
) -> Result<(), E> {
    let mut seen = BTreeSet::new();
    for id in ids {
        if !seen.insert(id) {
            return Err(E::custom(format!(
                "{DUPLICATE_ID} {what} `{id}` declared twice"
            )));
        }
    }
    Ok(())
}

impl ModelDocument {
    pub fn empty(name: impl Into<String>) -> Self {
        ModelDocument {
            name: name.into(),
            issues: Vec::new(),
            alternatives: Vec::new(),
            incompatible: Vec::new(),
        }
    }

    /// The canonical document describing `model`.
    pub fn from_model(model: &Model) -> Self {
        let parts = model.parts();
        let idx = model.index();
        let mut incompatible = Vec::new();
        for (a, alt) in parts.alternatives.iter().enumerate() {
            for (b, other) in parts.alternatives.iter().enumerate().skip(a + 1) {
                if alt.issue != other.issue && !idx.compatible(a, b) {
                    incompatible.push(IncompatiblePair(alt.id.clone(), other.id.clone()).sorted());
                }
            }
        }
        incompatible.sort();
        ModelDocument {
            name: parts.name.clone(),
            issues: parts
                .issues
                .iter()
                .map(|i| IssueEntry {
                    id: i.id.clone(),
                    label: i.label.clone(),
                })
                .collect(),
            alternatives: parts
                .alternatives
                .iter()
                .map(|a| AlternativeEntry {
                    id: a.id.clone(),
                    label: a.label.clone(),
                    issue: a.issue.clone(),
                    triggers: parts
                        .triggers
                        .get(&a.id)
                        .map(|t| t.iter().cloned().collect())
                        .unwrap_or_default(),
                })
                .collect(),
            incompatible,
        }
    }

    /// Sorts and deduplicates triggers and incompatible pairs, and fills
    /// empty labels with the id.
    pub fn canonicalize(self) -> Self {
        let mut doc = self.canonicalize_labels();
        for alt in &mut doc.alternatives {
            alt.triggers.sort();
            alt.triggers.dedup();
        }
        let pairs: BTreeSet<IncompatiblePair> = doc
            .incompatible
            .into_iter()
            .map(IncompatiblePair::sorted)
            .collect();
        doc.incompatible = pairs.into_iter().collect();
        doc
    }
}

/// Structural parse of a model document; references are checked later by
/// [`build_model`](crate::model::build_model).
pub fn parse_model(text: &str) -> Result<ModelDocument, ParseError> {
    let doc: ModelDocument = serde_json::from_str(text)?;
    Ok(doc.canonicalize_labels())
}

impl ModelDocument {
    fn canonicalize_labels(mut self) -> Self {
        for issue in &mut self.issues {
            if issue.label.is_empty() {
                issue.label = issue.id.to_string();
            }
        }
        for alt in &mut self.alternatives {
            if alt.label.is_empty() {
                alt.label = alt.id.to_string();
            }
        }
        self
    }
}

/// Canonical text of a document: two-space indented JSON, fixed key order,
/// sorted pairs, trailing newline.
pub fn serialize_model(doc: &ModelDocument) -> String {
    let canonical = doc.clone().canonicalize();
    let mut text = serde_json::to_string_pretty(&canonical).expect("documents always serialize");
    text.push('\n');
    text
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::ParseErrorKind;

    #[test]
    fn parses_minimal_empty_document() {
        let doc =
            parse_model(r#"{"name":"empty","issues":[],"alternatives":[],"incompatible":[]}"#)
                .unwrap();
        assert_eq!(doc, ModelDocument::empty("empty"));
    }

    #[test]
    fn pair_arity_is_reported_with_position() {
        let text =
            "{\"name\":\"x\",\"issues\":[],\n\"alternatives\":[],\"incompatible\":[[\"A\"]]}";
        let err = parse_model(text).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::PairArity);
        assert_eq!(err.line, 2);
        assert!(err.message.contains("1 members"), "{}", err.message);

        let err = parse_model(
            r#"{"name":"x","issues":[],"alternatives":[],"incompatible":[["A","B","C"]]}"#,
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::PairArity);
    }

    #[test]
    fn duplicate_ids_and_keys() {
        let err = parse_model(
            r#"{"name":"x","issues":[{"id":"I"},{"id":"I"}],"alternatives":[],"incompatible":[]}"#,
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateId);

        let err = parse_model(
            r#"{"name":"x","name":"y","issues":[],"alternatives":[],"incompatible":[]}"#,
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateKey);
    }

    #[test]
    fn syntax_and_schema_errors() {
        assert_eq!(
            parse_model("{\"name\":").unwrap_err().kind,
            ParseErrorKind::Syntax
        );
        assert_eq!(
            parse_model("[1, 2]").unwrap_err().kind,
            ParseErrorKind::Schema
        );
        let err = parse_model(r#"{"name":"x","issues":{},"alternatives":[],"incompatible":[]}"#)
            .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Schema);
        let err = parse_model(
            r#"{"name":"x","issues":[],"alternatives":[],"incompatible":[],"extra":1}"#,
        )
        .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Schema);
    }

    #[test]
    fn scrambled_pairs_serialize_like_sorted_ones() {
        let mut doc = ModelDocument::empty("p");
        doc.incompatible = vec![
            IncompatiblePair::new("Z", "B"),
            IncompatiblePair::new("A", "C"),
            IncompatiblePair::new("B", "Z"),
        ];
        let mut sorted = ModelDocument::empty("p");
        sorted.incompatible = vec![
            IncompatiblePair::new("A", "C"),
            IncompatiblePair::new("B", "Z"),
        ];
        assert_eq!(serialize_model(&doc), serialize_model(&sorted));
    }

    #[test]
    fn empty_document_canonical_text() {
        assert_eq!(
            serialize_model(&ModelDocument::empty("empty")),
            "{\n  \"name\": \"empty\",\n  \"issues\": [],\n  \"alternatives\": [],\n  \"incompatible\": []\n}\n"
        );
    }
}
