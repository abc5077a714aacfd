//! The `.pos` labelled-poset format.
//!
//! ```text
//! node a 0
//! node c 1
//! lt a c
//! ```
//!
//! `lt a b` records `a < b`; the order is the reflexive-transitive closure.
//! Node names may end in primes (`a'`).

use std::fmt::Write as _;

use msflow_core::poset::PosetError;
use msflow_core::LabeledPoset;
use thiserror::Error;

use crate::lines::{is_name, lines};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PosErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown directive '{0}'")]
    UnknownDirective(String),
    #[error("invalid name '{0}'")]
    InvalidName(String),
    #[error("duplicate node '{0}'")]
    DuplicateNode(String),
    #[error("unknown node '{0}'")]
    UnknownNode(String),
    #[error("'lt {0} {0}' relates a node to itself")]
    SelfRelation(String),
    #[error("{0}")]
    Order(PosetError),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{kind}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct PosError {
    pub line: usize,
    pub kind: PosErrorKind,
}

fn err(line: usize, kind: PosErrorKind) -> PosError {
    PosError { line, kind }
}

fn name(line: usize, s: &str) -> Result<&str, PosError> {
    if is_name(s, true) {
        Ok(s)
    } else {
        Err(err(line, PosErrorKind::InvalidName(s.to_string())))
    }
}

pub fn parse(text: &str) -> Result<LabeledPoset, PosError> {
    let mut nodes: Vec<(String, u32)> = Vec::new();
    let mut less: Vec<(String, String)> = Vec::new();
    for l in lines(text) {
        let n = l.number;
        match l.directive {
            "node" => {
                let syntax = || err(n, PosErrorKind::Syntax("expected 'node <name> <label>'".into()));
                let [nm, label] = l.args[..] else {
                    return Err(syntax());
                };
                let nm = name(n, nm)?;
                if !label.bytes().all(|b| b.is_ascii_digit()) {
                    return Err(syntax());
                }
                let label: u32 = label.parse().map_err(|_| syntax())?;
                if nodes.iter().any(|(x, _)| x == nm) {
                    return Err(err(n, PosErrorKind::DuplicateNode(nm.to_string())));
                }
                nodes.push((nm.to_string(), label));
            }
            "lt" => {
                let [a, b] = l.args[..] else {
                    return Err(err(n, PosErrorKind::Syntax("expected 'lt <lower> <upper>'".into())));
                };
                let (a, b) = (name(n, a)?, name(n, b)?);
                if a == b {
                    return Err(err(n, PosErrorKind::SelfRelation(a.to_string())));
                }
                for x in [a, b] {
                    if !nodes.iter().any(|(y, _)| y == x) {
                        return Err(err(n, PosErrorKind::UnknownNode(x.to_string())));
                    }
                }
                less.push((a.to_string(), b.to_string()));
            }
            other => return Err(err(n, PosErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    LabeledPoset::from_relations(&nodes, &less).map_err(|e| err(0, PosErrorKind::Order(e)))
}

/// Nodes in order, then the covering relation.
pub fn serialize(p: &LabeledPoset) -> String {
    let mut out = String::new();
    for name in p.names() {
        let _ = writeln!(out, "node {name} {}", p.label(name).unwrap_or_default());
    }
    for (a, b) in p.covers() {
        let _ = writeln!(out, "lt {a} {b}");
    }
    out
}
