//! Command results as plain data.
//!
//! Every command produces a [`Report`]. The `--json` output is its serde
//! serialization and the human-readable output is [`render`]ed from the same
//! value, so both carry the same facts.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use msflow_core::complex::ChainComplexGF2;
use msflow_core::perturb::{ClaimOutcome, ClaimsReport};
use msflow_core::{ChoiceDescriptor, D2Violation, MatrixGF2, Violation};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub command: String,
    pub inputs: Vec<String>,
    pub exit_code: i32,
    pub facts: Facts,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Facts {
    Validate {
        strict: bool,
        elements: usize,
        connections: usize,
        violations: Vec<ViolationFacts>,
    },
    Complex {
        label: Option<String>,
        /// `bases[k]` lists `B_k`.
        bases: Vec<Vec<String>>,
        /// `∂_k` for `k = 1..=top`.
        boundaries: Vec<MatrixFacts>,
    },
    D2 {
        /// `∂_{k−1} ∂_k` for `k = 2..=top`, tagged with `k`.
        products: Vec<MatrixFacts>,
        violations: Vec<D2Facts>,
    },
    Homology {
        betti: Option<Vec<usize>>,
        expected: Option<Vec<usize>>,
        matches_expected: Option<bool>,
        violations: Vec<D2Facts>,
    },
    Perturb {
        orbit: String,
        index: usize,
        role: String,
        twisted: bool,
        choices: Vec<ChoiceFacts>,
    },
    Poset {
        nodes: Vec<NodeFacts>,
        covers: Vec<(String, String)>,
    },
    Compare {
        /// `cell-equivalence` for two systems, `isomorphism` otherwise.
        test: String,
        /// No certificate was found; for systems this is inconclusive.
        passed: bool,
        mapping: Option<Vec<(String, String)>>,
        certificate: Option<String>,
    },
    Census {
        systems: Vec<String>,
        classes: Vec<Vec<usize>>,
        /// Descriptors applied to produce each system (empty for given systems).
        choices: Vec<Vec<DescriptorFacts>>,
    },
    Error {
        message: String,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ViolationFacts {
    pub rule: String,
    pub elements: Vec<String>,
    pub detail: String,
}

impl From<&Violation> for ViolationFacts {
    fn from(v: &Violation) -> Self {
        ViolationFacts {
            rule: v.rule.as_str().to_string(),
            elements: v.elements.clone(),
            detail: v.detail.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixFacts {
    pub degree: usize,
    pub rows: Vec<String>,
    pub cols: Vec<String>,
    pub entries: Vec<Vec<u8>>,
}

impl MatrixFacts {
    pub fn new(degree: usize, rows: Vec<String>, cols: Vec<String>, m: &MatrixGF2) -> Self {
        MatrixFacts {
            degree,
            rows,
            cols,
            entries: m.to_rows(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(|&x| x == 0)
    }
}

pub fn basis_names(c: &ChainComplexGF2, k: usize) -> Vec<String> {
    c.basis(k).iter().map(ToString::to_string).collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct D2Facts {
    pub degree: usize,
    pub source: String,
    pub target: String,
}

impl From<&D2Violation> for D2Facts {
    fn from(v: &D2Violation) -> Self {
        D2Facts {
            degree: v.degree,
            source: v.source.to_string(),
            target: v.target.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DescriptorFacts {
    pub orbit: String,
    pub p_name: String,
    pub q_name: String,
    pub p_out: BTreeMap<String, u32>,
    pub q_out: BTreeMap<String, u32>,
    pub p_in: BTreeMap<String, u32>,
    pub q_in: BTreeMap<String, u32>,
}

impl From<&ChoiceDescriptor> for DescriptorFacts {
    fn from(d: &ChoiceDescriptor) -> Self {
        DescriptorFacts {
            orbit: d.orbit.clone(),
            p_name: d.p_name.clone(),
            q_name: d.q_name.clone(),
            p_out: d.p_out.clone(),
            q_out: d.q_out.clone(),
            p_in: d.p_in.clone(),
            q_in: d.q_in.clone(),
        }
    }
}

impl From<&DescriptorFacts> for ChoiceDescriptor {
    fn from(d: &DescriptorFacts) -> Self {
        ChoiceDescriptor {
            p_out: d.p_out.clone(),
            q_out: d.q_out.clone(),
            p_in: d.p_in.clone(),
            q_in: d.q_in.clone(),
            ..ChoiceDescriptor::with_names(&d.orbit, &d.p_name, &d.q_name)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChoiceFacts {
    pub id: String,
    pub descriptor: DescriptorFacts,
    pub attaching_degree: u8,
    pub claims: Vec<ClaimFacts>,
    /// Where the resulting system was written, if anywhere.
    pub file: Option<String>,
    /// The resulting system in `.msf` form, for single-choice runs.
    pub system: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimFacts {
    pub name: String,
    /// `pass`, `fail` or `n/a`.
    pub outcome: String,
    pub witnesses: Vec<String>,
}

pub fn claim_facts(report: &ClaimsReport) -> Vec<ClaimFacts> {
    report
        .outcomes()
        .iter()
        .map(|(name, outcome)| {
            let (outcome, witnesses) = match outcome {
                ClaimOutcome::Pass => ("pass", Vec::new()),
                ClaimOutcome::Fail(w) => ("fail", w.clone()),
                ClaimOutcome::NotApplicable(why) => ("n/a", vec![why.clone()]),
            };
            ClaimFacts {
                name: name.to_string(),
                outcome: outcome.to_string(),
                witnesses,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NodeFacts {
    pub name: String,
    pub label: u32,
}

fn join<T: ToString>(items: &[T], sep: &str) -> String {
    items.iter().map(ToString::to_string).collect::<Vec<_>>().join(sep)
}

/// Fixed-width table with row and column labels; trailing spaces trimmed.
pub fn table(m: &MatrixFacts) -> String {
    let mut out = String::new();
    if m.rows.is_empty() || m.cols.is_empty() {
        out.push_str("  (no entries)\n");
        return out;
    }
    let w0 = m.rows.iter().map(|r| r.chars().count()).max().unwrap_or(0);
    let widths: Vec<usize> = m.cols.iter().map(|c| c.chars().count()).collect();
    let mut header = format!("{:w0$}", "");
    for (c, w) in m.cols.iter().zip(&widths) {
        let _ = write!(header, "  {c:w$}");
    }
    out.push_str(header.trim_end());
    out.push('\n');
    for (r, row) in m.rows.iter().zip(&m.entries) {
        let mut line = format!("{r:w0$}");
        for (x, w) in row.iter().zip(&widths) {
            let _ = write!(line, "  {x:w$}");
        }
        out.push_str(line.trim_end());
        out.push('\n');
    }
    out
}

fn counts(m: &BTreeMap<String, u32>) -> String {
    let parts: Vec<String> = m.iter().map(|(k, v)| format!("{k}:{v}")).collect();
    format!("{{{}}}", parts.join(", "))
}

/// One line per non-empty map, e.g. `qout {q0:1, q1:1}`.
pub fn describe_descriptor(d: &DescriptorFacts) -> Vec<String> {
    let mut lines = vec![format!("orbit {} -> new {} {}", d.orbit, d.p_name, d.q_name)];
    for (dir, m) in [("pout", &d.p_out), ("qout", &d.q_out), ("pin", &d.p_in), ("qin", &d.q_in)] {
        if !m.is_empty() {
            lines.push(format!("{dir} {}", counts(m)));
        }
    }
    lines
}

pub fn render(r: &Report) -> String {
    let mut out = String::new();
    let o = &mut out;
    match &r.facts {
        Facts::Validate {
            strict,
            elements,
            connections,
            violations,
        } => {
            let mode = if *strict { "strict" } else { "standard" };
            let _ = writeln!(o, "{elements} elements, {connections} connections ({mode} rules)");
            if violations.is_empty() {
                let _ = writeln!(o, "valid");
            } else {
                let _ = writeln!(o, "{} violation(s):", violations.len());
                for v in violations {
                    let _ = writeln!(o, "  [{}] {}: {}", v.rule, v.elements.join(", "), v.detail);
                }
            }
        }
        Facts::Complex {
            label,
            bases,
            boundaries,
        } => {
            if let Some(l) = label {
                let _ = writeln!(o, "{l}");
            }
            for (k, b) in bases.iter().enumerate().rev() {
                let _ = writeln!(o, "C{k} = span({})", b.join(", "));
            }
            for m in boundaries.iter().rev() {
                let k = m.degree;
                let _ = writeln!(o, "\nd{k}: C{k} -> C{}", k - 1);
                o.push_str(&table(m));
            }
        }
        Facts::D2 { products, violations } => {
            for m in products {
                let k = m.degree;
                let _ = writeln!(o, "d{}∘d{k}: C{k} -> C{}", k - 1, k - 2);
                o.push_str(&table(m));
                o.push('\n');
            }
            if violations.is_empty() {
                let _ = writeln!(o, "d∘d = 0");
            } else {
                let _ = writeln!(o, "d∘d ≠ 0: {} nonzero entr{}", violations.len(), if violations.len() == 1 { "y" } else { "ies" });
                for v in violations {
                    let _ = writeln!(o, "  d{}∘d{}: {} -> {}", v.degree - 1, v.degree, v.source, v.target);
                }
            }
        }
        Facts::Homology {
            betti,
            expected,
            matches_expected,
            violations,
        } => match betti {
            Some(b) => {
                let parts: Vec<String> = b.iter().enumerate().map(|(k, x)| format!("b{k}={x}")).collect();
                let _ = writeln!(o, "{}", parts.join(" "));
                if let (Some(e), Some(false)) = (expected, matches_expected) {
                    let _ = writeln!(
                        o,
                        "note: expect-betti declares ({}); the computed numbers ({}) differ",
                        join(e, ","),
                        join(b, ",")
                    );
                }
            }
            None => {
                let _ = writeln!(o, "refused: the differential does not square to zero");
                for v in violations {
                    let _ = writeln!(o, "  d{}∘d{}: {} -> {}", v.degree - 1, v.degree, v.source, v.target);
                }
            }
        },
        Facts::Perturb {
            orbit,
            index,
            role,
            twisted,
            choices,
        } => {
            let tw = if *twisted { "twisted" } else { "untwisted" };
            let _ = writeln!(o, "orbit {orbit}: index {index}, {role}, {tw}; {} choice(s)", choices.len());
            for c in choices {
                let _ = writeln!(o, "\n{}  attaching degree {}", c.id, c.attaching_degree);
                for line in describe_descriptor(&c.descriptor) {
                    let _ = writeln!(o, "  {line}");
                }
                let claims: Vec<String> = c.claims.iter().map(|f| format!("{} {}", f.name, f.outcome)).collect();
                let _ = writeln!(o, "  claims: {}", claims.join(", "));
                for f in c.claims.iter().filter(|f| f.outcome == "fail") {
                    for w in &f.witnesses {
                        let _ = writeln!(o, "    {} witness: {w}", f.name);
                    }
                }
                if let Some(file) = &c.file {
                    let _ = writeln!(o, "  wrote {file}");
                }
                if let Some(system) = &c.system {
                    o.push('\n');
                    o.push_str(system);
                }
            }
        }
        Facts::Poset { nodes, covers } => {
            let parts: Vec<String> = nodes.iter().map(|n| format!("{}({})", n.name, n.label)).collect();
            let _ = writeln!(o, "nodes: {}", parts.join(" "));
            let _ = writeln!(o, "covers:");
            for (a, b) in covers {
                let _ = writeln!(o, "  {a} < {b}");
            }
        }
        Facts::Compare {
            test,
            passed,
            mapping,
            certificate,
        } => {
            let verdict = match (test.as_str(), passed) {
                ("cell-equivalence", false) => "NOT cell equivalent",
                ("cell-equivalence", true) => "necessary conditions pass (inconclusive)",
                (_, false) => "not isomorphic",
                (_, true) => "isomorphic",
            };
            let _ = writeln!(o, "{verdict}");
            if let Some(c) = certificate {
                let _ = writeln!(o, "certificate: {c}");
            }
            if let Some(m) = mapping {
                if m.iter().all(|(a, b)| a == b) {
                    let _ = writeln!(o, "mapping: identity");
                } else {
                    let parts: Vec<String> = m.iter().map(|(a, b)| format!("{a}->{b}")).collect();
                    let _ = writeln!(o, "mapping: {}", parts.join(" "));
                }
            }
        }
        Facts::Census {
            systems,
            classes,
            choices,
        } => {
            let _ = writeln!(o, "{} system(s), {} class(es)", systems.len(), classes.len());
            for (i, class) in classes.iter().enumerate() {
                let members: Vec<&str> = class.iter().map(|&m| systems[m].as_str()).collect();
                let _ = writeln!(o, "class {}: {}", i + 1, members.join(", "));
            }
            if choices.iter().any(|c| !c.is_empty()) {
                for (name, ds) in systems.iter().zip(choices) {
                    let _ = writeln!(o, "\n{name}");
                    for d in ds {
                        for line in describe_descriptor(d) {
                            let _ = writeln!(o, "  {line}");
                        }
                    }
                }
            }
        }
        Facts::Error { message } => {
            let _ = writeln!(o, "error: {message}");
        }
    }
    out
}
