use std::collections::BTreeSet;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeMap, Serializer};
use serde::{Deserialize, Serialize};

use super::{ParseError, DUPLICATE_KEY};
use crate::ids::{AlternativeId, IssueId};
use crate::model::Model;
use crate::semantics::Design;

/// A flat JSON object `issue-id -> alternative-id`, where `null` (or a
/// missing key) marks an unresolved issue. Entry order is preserved.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct DesignDocument {
    pub entries: Vec<(IssueId, Option<AlternativeId>)>,
}

impl DesignDocument {
    pub fn to_design(&self) -> Design {
        self.entries
            .iter()
            .filter_map(|(issue, alt)| Some((issue.clone(), alt.clone()?)))
            .collect()
    }

    /// Resolved issues only, in model declaration order.
    pub fn from_design(model: &Model, design: &Design) -> Self {
        DesignDocument {
            entries: design
                .canonical_entries(model)
                .into_iter()
                .map(|(i, a)| (i.clone(), Some(a.clone())))
                .collect(),
        }
    }

    /// Every model issue in declaration order, unresolved ones as `null`.
    pub fn from_design_full(model: &Model, design: &Design) -> Self {
        let mut entries: Vec<_> = model
            .issues()
            .iter()
            .map(|i| (i.id.clone(), design.get(i.id.as_str()).cloned()))
            .collect();
        entries.extend(
            design
                .iter()
                .filter(|(i, _)| model.issue(i.as_str()).is_err())
                .map(|(i, a)| (i.clone(), Some(a.clone()))),
        );
        DesignDocument { entries }
    }
}

impl Serialize for DesignDocument {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.entries.len()))?;
        for (issue, alt) in &self.entries {
            map.serialize_entry(issue, alt)?;
        }
        map.end()
    }
}

impl<'de> Deserialize<'de> for DesignDocument {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct DesignVisitor;

        impl<'de> Visitor<'de> for DesignVisitor {
            type Value = DesignDocument;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping issue ids to alternative ids or null")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut map: A) -> Result<Self::Value, A::Error> {
                let mut seen = BTreeSet::new();
                let mut entries = Vec::new();
                while let Some(issue) = map.next_key::<IssueId>()? {
                    if !seen.insert(issue.clone()) {
                        return Err(de::Error::custom(format!(
                            "{DUPLICATE_KEY} issue `{issue}` appears twice"
                        )));
                    }
                    let alt: Option<AlternativeId> = map.next_value()?;
                    entries.push((issue, alt));
                }
                Ok(DesignDocument { entries })
            }
        }

        deserializer.deserialize_map(DesignVisitor)
    }
}

pub fn parse_design(text: &str) -> Result<DesignDocument, ParseError> {
    Ok(serde_json::from_str(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formats::ParseErrorKind;

    #[test]
    fn parses_a_flat_design() {
        let doc =
            parse_design(r#"{"AppType":"StandAlone","Robot":"ANG","Submission":"PureJavaScript"}"#)
                .unwrap();
        assert_eq!(doc.entries.len(), 3);
        let design = doc.to_design();
        assert_eq!(design.len(), 3);
        assert_eq!(design.get("Robot").map(|a| a.as_str()), Some("ANG"));
    }

    #[test]
    fn empty_and_null_entries_are_unresolved() {
        assert!(parse_design("{}").unwrap().to_design().is_empty());
        let doc = parse_design(r#"{"A":null,"B":"x"}"#).unwrap();
        assert_eq!(doc.entries.len(), 2);
        assert_eq!(doc.to_design().len(), 1);
    }

    #[test]
    fn duplicate_issue_key_is_rejected() {
        let err = parse_design(r#"{"A":"x","A":"y"}"#).unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::DuplicateKey);
        assert_eq!(parse_design("[]").unwrap_err().kind, ParseErrorKind::Schema);
        assert_eq!(parse_design("{").unwrap_err().kind, ParseErrorKind::Syntax);
    }

    #[test]
    fn serializes_in_entry_order_with_nulls() {
        let doc = DesignDocument {
            entries: vec![("Z".into(), Some("a".into())), ("A".into(), None)],
        };
        assert_eq!(
            serde_json::to_string(&doc).unwrap(),
            r#"{"Z":"a","A":null}"#
        );
    }
}
