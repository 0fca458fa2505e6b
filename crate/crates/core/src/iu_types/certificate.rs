//! Derivation certificates: JSON trees of records with fields `rule`,
//! `judgment`, `side` and `premises`, in that order.
//!
//! ```json
//! {
//!   "rule": "UnionE_named",
//!   "judgment": "x:A |- mu b.[d] x : B | d:A \\/ (A -> B)",
//!   "side": { "premise": "A", "bound": "A \\/ (A -> B)" },
//!   "premises": [ ... ]
//! }
//! ```
//!
//! `judgment` uses the surface syntax `Γ |- M : A | Δ`. `side` is `null`,
//! `{"index": i}` for (∩E) with `i` counted from 1, or
//! `{"premise": T, "bound": S}` for the side condition `T ≤ S` of (∪E).

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{Derivation, Judgment, Rule, Side};
use crate::grammar::{parse_judgment, parse_type_any, print_type, ParseError};

#[derive(Serialize, Deserialize)]
struct Record {
    rule: String,
    judgment: String,
    side: Option<SideRecord>,
    premises: Vec<Record>,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SideRecord {
    Index { index: usize },
    Bound { premise: String, bound: String },
}

#[derive(Debug, Error)]
pub enum CertificateError {
    #[error("malformed certificate: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown rule `{0}`")]
    UnknownRule(String),
}

fn record(d: &Derivation) -> Record {
    Record {
        rule: d.rule.as_str().to_string(),
        judgment: d.conclusion.to_string(),
        side: match &d.side {
            Side::None => None,
            Side::Index(index) => Some(SideRecord::Index { index: *index }),
            Side::Bound { premise, bound } => {
                Some(SideRecord::Bound { premise: print_type(premise), bound: print_type(bound) })
            }
        },
        premises: d.premises.iter().map(record).collect(),
    }
}

pub fn to_certificate(d: &Derivation) -> String {
    let mut s = serde_json::to_string_pretty(&record(d)).expect("records serialize");
    s.push('\n');
    s
}

fn derivation(r: Record) -> Result<Derivation, CertificateError> {
    let rule = Rule::ALL
        .into_iter()
        .find(|x| x.as_str() == r.rule)
        .ok_or_else(|| CertificateError::UnknownRule(r.rule.clone()))?;
    let j = parse_judgment(&r.judgment)?;
    let side = match r.side {
        None => Side::None,
        Some(SideRecord::Index { index }) => Side::Index(index),
        Some(SideRecord::Bound { premise, bound }) => {
            Side::Bound { premise: parse_type_any(&premise)?, bound: parse_type_any(&bound)? }
        }
    };
    let premises = r.premises.into_iter().map(derivation).collect::<Result<_, _>>()?;
    Ok(Derivation::new(Judgment::new(j.gamma, j.term, j.ty, j.delta), rule, side, premises))
}

/// Reads a certificate. The result still has to pass `check_derivation`.
pub fn from_certificate(text: &str) -> Result<Derivation, CertificateError> {
    derivation(serde_json::from_str(text)?)
}
