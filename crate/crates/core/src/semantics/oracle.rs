//! Brute-force meaning: every partial assignment of issues to their own
//! alternatives, filtered through the literal conformity check. Shares no
//! code with the backtracking search.

use thiserror::Error;

use super::{conforms, Design, Meaning};
use crate::model::Model;

pub const ORACLE_MAX_ISSUES: usize = 8;
pub const ORACLE_MAX_ALTERNATIVES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("model has {0} issues; the oracle accepts at most {ORACLE_MAX_ISSUES}")]
    TooManyIssues(usize),
    #[error(
        "issue `{0}` has {1} alternatives; the oracle accepts at most {ORACLE_MAX_ALTERNATIVES}"
    )]
    TooManyAlternatives(String, usize),
}

/// Enumerates all `prod(|alternativesTo(i)| + 1)` candidates and keeps the
/// conforming ones, sorted canonically.
pub fn brute_force_meaning(model: &Model) -> Result<Meaning, OracleError> {
    if model.issues().len() > ORACLE_MAX_ISSUES {
        return Err(OracleError::TooManyIssues(model.issues().len()));
    }
    let choices: Vec<Vec<Option<&str>>> = model
        .issues()
        .iter()
        .map(|issue| {
            let alts: Vec<Option<&str>> = model
                .alternatives()
                .iter()
                .filter(|a| a.issue == issue.id)
                .map(|a| Some(a.id.as_str()))
                .chain(std::iter::once(None))
                .collect();
            if alts.len() - 1 > ORACLE_MAX_ALTERNATIVES {
                Err(OracleError::TooManyAlternatives(
                    issue.id.to_string(),
                    alts.len() - 1,
                ))
            } else {
                Ok(alts)
            }
        })
        .collect::<Result<_, _>>()?;

    let mut designs = Vec::new();
    let mut odometer = vec![0usize; choices.len()];
    loop {
        let design: Design = model
            .issues()
            .iter()
            .zip(&odometer)
            .zip(&choices)
            .filter_map(|((issue, &k), alts)| alts[k].map(|a| (issue.id.clone(), a)))
            .collect();
        if conforms(&design, model).conforms {
            designs.push(design);
        }
        let mut digit = 0;
        loop {
            if digit == odometer.len() {
                designs.sort_by_cached_key(|d| d.order_key(model));
                return Ok(Meaning {
                    designs,
                    truncated: false,
                });
            }
            odometer[digit] += 1;
            if odometer[digit] < choices[digit].len() {
                break;
            }
            odometer[digit] = 0;
            digit += 1;
        }
    }
}
