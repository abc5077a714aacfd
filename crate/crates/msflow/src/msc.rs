//! The `.msc` choice-descriptor format.
//!
//! ```text
//! orbit gamma
//! new p_gamma q_gamma
//! pout q0 1
//! qout q1 1
//! ```
//!
//! A file may hold several blocks, each opened by `orbit`. Without a `new`
//! line the fresh rest points are named `p_<orbit>` and `q_<orbit>`.

use std::collections::BTreeMap;

use msflow_core::ChoiceDescriptor;
use thiserror::Error;

use crate::lines::{is_name, lines, positive};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MscErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown directive '{0}'")]
    UnknownDirective(String),
    #[error("'{0}' before any 'orbit' line")]
    OutsideBlock(String),
    #[error("'new' given more than once for orbit '{0}'")]
    RepeatedNew(String),
    #[error("invalid name '{0}'")]
    InvalidName(String),
    #[error("'{directive} {element}' given more than once")]
    DuplicateEntry { directive: String, element: String },
    #[error("count must be positive, got '{0}'")]
    NonPositiveCount(String),
    #[error("orbit '{0}' has more than one block")]
    DuplicateOrbit(String),
    #[error("no 'orbit' block found")]
    Empty,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{kind}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct MscError {
    pub line: usize,
    pub kind: MscErrorKind,
}

fn err(line: usize, kind: MscErrorKind) -> MscError {
    MscError { line, kind }
}

fn name(line: usize, s: &str) -> Result<&str, MscError> {
    if is_name(s, false) {
        Ok(s)
    } else {
        Err(err(line, MscErrorKind::InvalidName(s.to_string())))
    }
}

pub fn parse(text: &str) -> Result<Vec<ChoiceDescriptor>, MscError> {
    let mut out: Vec<ChoiceDescriptor> = Vec::new();
    let mut named = false;
    for l in lines(text) {
        let n = l.number;
        match l.directive {
            "orbit" => {
                let [o] = l.args[..] else {
                    return Err(err(n, MscErrorKind::Syntax("expected 'orbit <name>'".into())));
                };
                let o = name(n, o)?;
                if out.iter().any(|d| d.orbit == o) {
                    return Err(err(n, MscErrorKind::DuplicateOrbit(o.to_string())));
                }
                out.push(ChoiceDescriptor::new(o));
                named = false;
            }
            "new" => {
                let d = out.last_mut().ok_or_else(|| err(n, MscErrorKind::OutsideBlock("new".into())))?;
                let [p, q] = l.args[..] else {
                    return Err(err(n, MscErrorKind::Syntax("expected 'new <p-name> <q-name>'".into())));
                };
                if named {
                    return Err(err(n, MscErrorKind::RepeatedNew(d.orbit.clone())));
                }
                d.p_name = name(n, p)?.to_string();
                d.q_name = name(n, q)?.to_string();
                named = true;
            }
            dir @ ("pout" | "qout" | "pin" | "qin") => {
                let d = out.last_mut().ok_or_else(|| err(n, MscErrorKind::OutsideBlock(dir.into())))?;
                let [e, c] = l.args[..] else {
                    return Err(err(n, MscErrorKind::Syntax(format!("expected '{dir} <element> <count>'"))));
                };
                let e = name(n, e)?;
                let c = match positive(c) {
                    Some(c) => c,
                    None if c.parse::<i64>().is_ok() => {
                        return Err(err(n, MscErrorKind::NonPositiveCount(c.to_string())))
                    }
                    None => return Err(err(n, MscErrorKind::Syntax(format!("expected '{dir} <element> <count>'")))),
                };
                let map = match dir {
                    "pout" => &mut d.p_out,
                    "qout" => &mut d.q_out,
                    "pin" => &mut d.p_in,
                    _ => &mut d.q_in,
                };
                if map.insert(e.to_string(), c).is_some() {
                    return Err(err(
                        n,
                        MscErrorKind::DuplicateEntry {
                            directive: dir.to_string(),
                            element: e.to_string(),
                        },
                    ));
                }
            }
            other => return Err(err(n, MscErrorKind::UnknownDirective(other.to_string()))),
        }
    }
    if out.is_empty() {
        return Err(err(0, MscErrorKind::Empty));
    }
    Ok(out)
}

pub fn serialize(descriptors: &[ChoiceDescriptor]) -> String {
    let mut out = String::new();
    for (i, d) in descriptors.iter().enumerate() {
        if i > 0 {
            out.push('\n');
        }
        for line in block_lines(d) {
            out.push_str(&line);
            out.push('\n');
        }
    }
    out
}

/// The lines of one descriptor block, without newlines.
pub fn block_lines(d: &ChoiceDescriptor) -> Vec<String> {
    let mut lines = vec![format!("orbit {}", d.orbit), format!("new {} {}", d.p_name, d.q_name)];
    let maps: [(&str, &BTreeMap<String, u32>); 4] =
        [("pout", &d.p_out), ("qout", &d.q_out), ("pin", &d.p_in), ("qin", &d.q_in)];
    for (dir, map) in maps {
        for (e, c) in map {
            lines.push(format!("{dir} {e} {c}"));
        }
    }
    lines
}
