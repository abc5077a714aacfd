//! The `.msf` system format.
//!
//! ```text
//! dim 2
//! label three sinks and a repelling orbit
//! expect-betti 1 0 1
//! rest q0 0
//! orbit gamma 1 untwisted
//! conn gamma q0 1
//! ```
//!
//! Parsing checks syntax and references only; use [`FlowSystem::validate`]
//! for the dynamical rules.

use std::collections::HashSet;
use std::fmt::Write as _;

use msflow_core::{CriticalElement, ElementKind, FlowSystem};
use thiserror::Error;

use crate::lines::{is_name, lines, natural, positive};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MsfErrorKind {
    #[error("syntax error: {0}")]
    Syntax(String),
    #[error("unknown directive '{0}'")]
    UnknownDirective(String),
    #[error("'{0}' given more than once")]
    RepeatedDirective(&'static str),
    #[error("missing 'dim' directive")]
    MissingDim,
    #[error("invalid name '{0}'")]
    InvalidName(String),
    #[error("duplicate element '{0}'")]
    DuplicateElement(String),
    #[error("duplicate connection {0} -> {1}")]
    DuplicateConnection(String, String),
    #[error("unknown element '{0}'")]
    UnknownElement(String),
    #[error("element '{0}' cannot connect to itself")]
    SelfConnection(String),
    #[error("count must be positive, got '{0}'")]
    NonPositiveCount(String),
}

/// A parse failure; `line` is 1-based, or 0 when the problem is the whole input.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{}{kind}", if *.line > 0 { format!("line {}: ", .line) } else { String::new() })]
pub struct MsfError {
    pub line: usize,
    pub kind: MsfErrorKind,
}

fn err(line: usize, kind: MsfErrorKind) -> MsfError {
    MsfError { line, kind }
}

fn syntax(line: usize, usage: &str) -> MsfError {
    err(line, MsfErrorKind::Syntax(format!("expected '{usage}'")))
}

pub(crate) fn count(line: usize, s: &str, usage: &str) -> Result<u32, MsfError> {
    if let Some(c) = positive(s) {
        return Ok(c);
    }
    match s.parse::<i64>() {
        Ok(_) => Err(err(line, MsfErrorKind::NonPositiveCount(s.to_string()))),
        Err(_) => Err(syntax(line, usage)),
    }
}

fn name(line: usize, s: &str) -> Result<&str, MsfError> {
    if is_name(s, false) {
        Ok(s)
    } else {
        Err(err(line, MsfErrorKind::InvalidName(s.to_string())))
    }
}

pub fn parse(text: &str) -> Result<FlowSystem, MsfError> {
    let mut dim: Option<usize> = None;
    let mut label: Option<String> = None;
    let mut betti: Option<Vec<usize>> = None;
    let mut elements: Vec<CriticalElement> = Vec::new();
    let mut conns: Vec<(usize, String, String, u32)> = Vec::new();

    for l in lines(text) {
        let n = l.number;
        match l.directive {
            "dim" => {
                const USAGE: &str = "dim <n>";
                if dim.is_some() {
                    return Err(err(n, MsfErrorKind::RepeatedDirective("dim")));
                }
                match l.args[..] {
                    [d] => dim = Some(natural(d).filter(|&d| d > 0).ok_or_else(|| syntax(n, USAGE))?),
                    _ => return Err(syntax(n, USAGE)),
                }
            }
            "label" => {
                if label.is_some() {
                    return Err(err(n, MsfErrorKind::RepeatedDirective("label")));
                }
                if l.rest.is_empty() {
                    return Err(syntax(n, "label <text>"));
                }
                label = Some(l.rest.to_string());
            }
            "expect-betti" => {
                const USAGE: &str = "expect-betti <b0> <b1> ...";
                if betti.is_some() {
                    return Err(err(n, MsfErrorKind::RepeatedDirective("expect-betti")));
                }
                if l.args.is_empty() {
                    return Err(syntax(n, USAGE));
                }
                let values = l.args.iter().map(|a| natural(a)).collect::<Option<Vec<_>>>();
                betti = Some(values.ok_or_else(|| syntax(n, USAGE))?);
            }
            "rest" => {
                const USAGE: &str = "rest <name> <index>";
                let [nm, idx] = l.args[..] else {
                    return Err(syntax(n, USAGE));
                };
                let index = natural(idx).ok_or_else(|| syntax(n, USAGE))?;
                elements.push(CriticalElement::rest(name(n, nm)?, index));
                check_unique(&elements, n)?;
            }
            "orbit" => {
                const USAGE: &str = "orbit <name> <index> <twisted|untwisted>";
                let [nm, idx, tw] = l.args[..] else {
                    return Err(syntax(n, USAGE));
                };
                let index = natural(idx).ok_or_else(|| syntax(n, USAGE))?;
                let twisted = match tw {
                    "twisted" => true,
                    "untwisted" => false,
                    _ => return Err(syntax(n, USAGE)),
                };
                elements.push(CriticalElement::orbit(name(n, nm)?, index, twisted));
                check_unique(&elements, n)?;
            }
            "conn" => {
                const USAGE: &str = "conn <source> <target> <count>";
                let [a, b, c] = l.args[..] else {
                    return Err(syntax(n, USAGE));
                };
                let (a, b) = (name(n, a)?, name(n, b)?);
                let c = count(n, c, USAGE)?;
                if a == b {
                    return Err(err(n, MsfErrorKind::SelfConnection(a.to_string())));
                }
                if conns.iter().any(|(_, x, y, _)| x == a && y == b) {
                    return Err(err(n, MsfErrorKind::DuplicateConnection(a.to_string(), b.to_string())));
                }
                conns.push((n, a.to_string(), b.to_string(), c));
            }
            other => return Err(err(n, MsfErrorKind::UnknownDirective(other.to_string()))),
        }
    }

    let mut s = FlowSystem::new(dim.ok_or(err(0, MsfErrorKind::MissingDim))?);
    s.label = label;
    s.expected_betti = betti;
    for e in elements {
        s.add_element(e).expect("names checked unique");
    }
    for (n, a, b, c) in conns {
        for x in [&a, &b] {
            if s.element(x).is_none() {
                return Err(err(n, MsfErrorKind::UnknownElement(x.clone())));
            }
        }
        s.connect(&a, &b, c).expect("connection checked");
    }
    Ok(s)
}

fn check_unique(elements: &[CriticalElement], line: usize) -> Result<(), MsfError> {
    let last = &elements[elements.len() - 1].name;
    if elements[..elements.len() - 1].iter().any(|e| &e.name == last) {
        return Err(err(line, MsfErrorKind::DuplicateElement(last.clone())));
    }
    Ok(())
}

/// Canonical text: `dim`, `label`, `expect-betti`, elements in declaration
/// order, then connections sorted by `(source, target)`.
pub fn serialize(s: &FlowSystem) -> String {
    serialize_with_header(s, &[])
}

/// Like [`serialize`], preceded by `# `-prefixed comment lines.
pub fn serialize_with_header(s: &FlowSystem, header: &[String]) -> String {
    let mut out = String::new();
    for h in header {
        if h.is_empty() {
            out.push_str("#\n");
        } else {
            let _ = writeln!(out, "# {h}");
        }
    }
    let _ = writeln!(out, "dim {}", s.dimension);
    if let Some(label) = &s.label {
        let _ = writeln!(out, "label {label}");
    }
    if let Some(b) = &s.expected_betti {
        let parts: Vec<String> = b.iter().map(ToString::to_string).collect();
        let _ = writeln!(out, "expect-betti {}", parts.join(" "));
    }
    for e in &s.elements {
        match e.kind {
            ElementKind::RestPoint => {
                let _ = writeln!(out, "rest {} {}", e.name, e.index);
            }
            ElementKind::ClosedOrbit { twisted } => {
                let t = if twisted { "twisted" } else { "untwisted" };
                let _ = writeln!(out, "orbit {} {} {t}", e.name, e.index);
            }
        }
    }
    for (a, b, c) in s.connections.iter() {
        let _ = writeln!(out, "conn {a} {b} {c}");
    }
    out
}

/// Whether `s` can be written and read back unchanged: valid names and a
/// single-line label without comment markers.
pub fn is_representable(s: &FlowSystem) -> bool {
    let mut seen = HashSet::new();
    s.dimension > 0
        && s.elements.iter().all(|e| is_name(&e.name, false) && seen.insert(e.name.as_str()))
        && s.label.as_deref().is_none_or(|l| {
            !l.is_empty() && l == l.trim() && !l.contains(['#', '\n', '\r'])
        })
        && s.expected_betti.as_ref().is_none_or(|b| !b.is_empty())
}
