//! Closed-orbit removal at the combinatorial level.
//!
//! A closed orbit `γ` of index `k` is replaced by a rest point `p` of index
//! `k + 1` and a rest point `q` of index `k`, joined by two flow lines. How
//! `γ`'s connections are shared out between `p` and `q` is not determined by
//! the orbit alone: a [`ChoiceDescriptor`] records one way of doing it, and
//! [`enumerate_choices_2d`] lists every admissible way on a surface.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::complex::{assemble, compare_matrices, BasisElement, ChainComplexGF2, Correspondence};
use crate::flow::{remove_orbit_stub, CriticalElement, FlowError, FlowSystem};

/// One way of reconnecting the rest-point pair that replaces an orbit.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChoiceDescriptor {
    pub orbit: String,
    pub p_name: String,
    pub q_name: String,
    pub p_out: BTreeMap<String, u32>,
    pub q_out: BTreeMap<String, u32>,
    pub p_in: BTreeMap<String, u32>,
    pub q_in: BTreeMap<String, u32>,
}

impl ChoiceDescriptor {
    /// An empty descriptor for `orbit` using the default names `p_<orbit>` and `q_<orbit>`.
    pub fn new(orbit: &str) -> Self {
        let (p, q) = default_names(orbit);
        Self::with_names(orbit, &p, &q)
    }

    pub fn with_names(orbit: &str, p_name: &str, q_name: &str) -> Self {
        ChoiceDescriptor {
            orbit: orbit.to_string(),
            p_name: p_name.to_string(),
            q_name: q_name.to_string(),
            p_out: BTreeMap::new(),
            q_out: BTreeMap::new(),
            p_in: BTreeMap::new(),
            q_in: BTreeMap::new(),
        }
    }

    /// Every connection this descriptor introduces, apart from `c(p, q) = 2`.
    pub fn new_connections(&self) -> Vec<(String, String, u32)> {
        let mut out = Vec::new();
        for (t, &c) in &self.p_out {
            out.push((self.p_name.clone(), t.clone(), c));
        }
        for (t, &c) in &self.q_out {
            out.push((self.q_name.clone(), t.clone(), c));
        }
        for (s, &c) in &self.p_in {
            out.push((s.clone(), self.p_name.clone(), c));
        }
        for (s, &c) in &self.q_in {
            out.push((s.clone(), self.q_name.clone(), c));
        }
        out
    }
}

pub fn default_names(orbit: &str) -> (String, String) {
    (format!("p_{orbit}"), format!("q_{orbit}"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DescriptorRule {
    /// New connections must stay inside the orbit's own connections.
    Support,
    /// Every connection of the orbit must be inherited by `p` or `q`.
    Coverage,
    DimensionRule,
}

impl fmt::Display for DescriptorRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DescriptorRule::Support => "support",
            DescriptorRule::Coverage => "coverage",
            DescriptorRule::DimensionRule => "dimension-rule",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DescriptorViolation {
    pub rule: DescriptorRule,
    pub element: String,
    pub detail: String,
}

impl fmt::Display for DescriptorViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.element, self.detail)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PerturbError {
    Flow(FlowError),
    InvalidDescriptor(Vec<DescriptorViolation>),
    UnsupportedDimension { orbit: String, dimension: usize },
    UnsupportedIndex { orbit: String, index: usize, dimension: usize },
}

impl From<FlowError> for PerturbError {
    fn from(e: FlowError) -> Self {
        PerturbError::Flow(e)
    }
}

impl fmt::Display for PerturbError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PerturbError::Flow(e) => write!(f, "{e}"),
            PerturbError::InvalidDescriptor(v) => {
                f.write_str("invalid choice descriptor")?;
                for violation in v {
                    write!(f, "\n  {violation}")?;
                }
                Ok(())
            }
            PerturbError::UnsupportedDimension { orbit, dimension } => write!(
                f,
                "enumeration unsupported for n={dimension}: orbit '{orbit}' needs an explicit choice descriptor"
            ),
            PerturbError::UnsupportedIndex { orbit, index, dimension } => write!(
                f,
                "orbit '{orbit}' has index {index}; only attracting (0) and repelling ({}) orbits can be enumerated",
                dimension.saturating_sub(1)
            ),
        }
    }
}

impl core::error::Error for PerturbError {}

/// Outcome of one of the claim checks in a [`ClaimsReport`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClaimOutcome {
    Pass,
    /// Each witness names a matrix cell or line that breaks the claim.
    Fail(Vec<String>),
    NotApplicable(String),
}

impl ClaimOutcome {
    pub fn passed(&self) -> bool {
        matches!(self, ClaimOutcome::Pass)
    }

    fn from_witnesses(w: Vec<String>) -> Self {
        if w.is_empty() {
            ClaimOutcome::Pass
        } else {
            ClaimOutcome::Fail(w)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OrbitRole {
    Repeller,
    Attractor,
    Other,
}

/// Comparison of the complexes before and after removing one orbit, under
/// the correspondence `γ⁺ ↔ p`, `γ⁻ ↔ q` and identity elsewhere.
///
/// For a repelling orbit of index `k` (with `h = k + 1`):
/// * `zero_line`: the `γ⁻` row of `∂_h` and the `q` row of `∂′_h` vanish;
/// * `same_matrix`: `∂_h = ∂′_h`;
/// * `single_line`: `∂_k` and `∂′_k` differ only in the `γ⁻`/`q` column;
/// * `composite`: `∂_k ∂_h = ∂′_k ∂′_h`.
///
/// For an attracting orbit the roles of rows and columns are mirrored: the
/// `γ⁺`/`p` columns of `∂_1` vanish, `∂_1` is unchanged and `∂_2` may differ
/// only in the `γ⁺`/`p` row.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClaimsReport {
    pub role: OrbitRole,
    pub zero_line: ClaimOutcome,
    pub same_matrix: ClaimOutcome,
    pub single_line: ClaimOutcome,
    pub composite: ClaimOutcome,
}

impl ClaimsReport {
    pub fn all_pass(&self) -> bool {
        self.outcomes().iter().all(|(_, o)| o.passed())
    }

    pub fn outcomes(&self) -> [(&'static str, &ClaimOutcome); 4] {
        [
            ("zero-line", &self.zero_line),
            ("same-matrix", &self.same_matrix),
            ("single-line", &self.single_line),
            ("composite", &self.composite),
        ]
    }

    fn not_applicable(role: OrbitRole, why: String) -> Self {
        let na = ClaimOutcome::NotApplicable(why);
        ClaimsReport {
            role,
            zero_line: na.clone(),
            same_matrix: na.clone(),
            single_line: na.clone(),
            composite: na,
        }
    }

    fn failed(role: OrbitRole, why: String) -> Self {
        let fail = ClaimOutcome::Fail(vec![why]);
        ClaimsReport {
            role,
            zero_line: fail.clone(),
            same_matrix: fail.clone(),
            single_line: fail.clone(),
            composite: fail,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PerturbationResult {
    pub system: FlowSystem,
    pub choice: ChoiceDescriptor,
    /// 0 for an untwisted orbit, 2 for a twisted one.
    pub attaching_degree: u8,
    pub claims: ClaimsReport,
}

/// Checks support, coverage and the dimension rule for `d` against `s`.
pub fn check_descriptor(s: &FlowSystem, d: &ChoiceDescriptor) -> Result<(), PerturbError> {
    let gamma = orbit_of(s, &d.orbit)?;
    let n = s.dimension;
    let down = s.direct_downstream(&d.orbit)?;
    let up = s.direct_upstream(&d.orbit)?;
    let p = CriticalElement::rest(d.p_name.clone(), gamma.index + 1);
    let q = CriticalElement::rest(d.q_name.clone(), gamma.index);
    let mut out = Vec::new();

    let outgoing = [(&p, &d.p_out, "pout"), (&q, &d.q_out, "qout")];
    let incoming = [(&p, &d.p_in, "pin"), (&q, &d.q_in, "qin")];

    for (new, map, key) in outgoing {
        for (t, &c) in map {
            if !down.contains_key(t) {
                out.push(DescriptorViolation {
                    rule: DescriptorRule::Support,
                    element: t.clone(),
                    detail: format!("{key} targets {t}, which is not downstream of {}", d.orbit),
                });
                continue;
            }
            let target = s.element(t).unwrap();
            if new.unstable_dim() + target.stable_dim(n) < n + 1 {
                out.push(DescriptorViolation {
                    rule: DescriptorRule::DimensionRule,
                    element: t.clone(),
                    detail: format!(
                        "{} -> {t} (c = {c}) needs {} + {} >= {}",
                        new.name,
                        new.unstable_dim(),
                        target.stable_dim(n),
                        n + 1
                    ),
                });
            }
        }
    }
    for (new, map, key) in incoming {
        for (src, &c) in map {
            if !up.contains_key(src) {
                out.push(DescriptorViolation {
                    rule: DescriptorRule::Support,
                    element: src.clone(),
                    detail: format!("{key} source {src} is not upstream of {}", d.orbit),
                });
                continue;
            }
            let source = s.element(src).unwrap();
            if source.unstable_dim() + new.stable_dim(n) < n + 1 {
                out.push(DescriptorViolation {
                    rule: DescriptorRule::DimensionRule,
                    element: src.clone(),
                    detail: format!(
                        "{src} -> {} (c = {c}) needs {} + {} >= {}",
                        new.name,
                        source.unstable_dim(),
                        new.stable_dim(n),
                        n + 1
                    ),
                });
            }
        }
    }
    for t in down.keys() {
        if !d.p_out.contains_key(t) && !d.q_out.contains_key(t) {
            out.push(DescriptorViolation {
                rule: DescriptorRule::Coverage,
                element: t.clone(),
                detail: format!("{} -> {t} is inherited by neither {} nor {}", d.orbit, d.p_name, d.q_name),
            });
        }
    }
    for src in up.keys() {
        if !d.p_in.contains_key(src) && !d.q_in.contains_key(src) {
            out.push(DescriptorViolation {
                rule: DescriptorRule::Coverage,
                element: src.clone(),
                detail: format!("{src} -> {} is inherited by neither {} nor {}", d.orbit, d.p_name, d.q_name),
            });
        }
    }
    if out.is_empty() {
        Ok(())
    } else {
        Err(PerturbError::InvalidDescriptor(out))
    }
}

fn orbit_of<'a>(s: &'a FlowSystem, name: &str) -> Result<&'a CriticalElement, PerturbError> {
    let e = s
        .element(name)
        .ok_or_else(|| FlowError::UnknownElement(name.to_string()))?;
    if !e.is_orbit() {
        return Err(FlowError::NotAnOrbit(name.to_string()).into());
    }
    Ok(e)
}

/// Replaces the orbit named by `d` with `p` and `q`, wiring them as `d` says.
///
/// Connections between other elements are copied unchanged.
pub fn apply_choice(s: &FlowSystem, d: &ChoiceDescriptor) -> Result<PerturbationResult, PerturbError> {
    orbit_of(s, &d.orbit)?;
    let removal = remove_orbit_stub(s, &d.orbit, &d.p_name, &d.q_name)?;
    check_descriptor(s, d)?;
    let mut system = removal.system;
    for (a, b, c) in d.new_connections() {
        system.connect(&a, &b, c)?;
    }
    let claims = evaluate_claims(s, &system, d);
    Ok(PerturbationResult {
        system,
        choice: d.clone(),
        attaching_degree: removal.attaching_degree,
        claims,
    })
}

/// All size-2 multisets over `items`, in lexicographic order of positions.
fn pairs_with_repetition(items: &[String]) -> Vec<BTreeMap<String, u32>> {
    let mut out = Vec::new();
    for i in 0..items.len() {
        for j in i..items.len() {
            let mut m = BTreeMap::new();
            *m.entry(items[i].clone()).or_insert(0) += 1;
            *m.entry(items[j].clone()).or_insert(0) += 1;
            out.push(m);
        }
    }
    out
}

/// Every combinatorially admissible way of removing `orbit` from a surface flow.
///
/// For a repelling orbit the new source inherits all of the orbit's
/// downstream counts and the new saddle sends its two separatrices to any
/// size-2 multiset of the attractors (sinks or attracting orbits) below the
/// orbit. For an attracting orbit the picture is reversed: the new sink
/// inherits the upstream counts and the new saddle receives its two incoming
/// separatrices from any size-2 multiset of the repellers above the orbit.
/// The list is an over-approximation of what is geometrically realisable.
pub fn enumerate_choices_2d(s: &FlowSystem, orbit: &str) -> Result<Vec<ChoiceDescriptor>, PerturbError> {
    let gamma = orbit_of(s, orbit)?;
    if s.dimension != 2 {
        return Err(PerturbError::UnsupportedDimension {
            orbit: orbit.to_string(),
            dimension: s.dimension,
        });
    }
    let in_declaration_order = |names: &BTreeMap<String, u32>, keep: &dyn Fn(&CriticalElement) -> bool| {
        s.elements
            .iter()
            .filter(|e| names.contains_key(&e.name) && keep(e))
            .map(|e| e.name.clone())
            .collect::<Vec<_>>()
    };
    let template = ChoiceDescriptor::new(orbit);
    match gamma.index {
        1 => {
            let down = s.direct_downstream(orbit)?;
            let attractors = in_declaration_order(&down, &|e| e.index == 0);
            Ok(pairs_with_repetition(&attractors)
                .into_iter()
                .map(|q_out| ChoiceDescriptor {
                    p_out: down.clone(),
                    q_out,
                    ..template.clone()
                })
                .collect())
        }
        0 => {
            let up = s.direct_upstream(orbit)?;
            let repellers = in_declaration_order(&up, &|e| e.is_repeller(2));
            Ok(pairs_with_repetition(&repellers)
                .into_iter()
                .map(|p_in| ChoiceDescriptor {
                    q_in: up.clone(),
                    p_in,
                    ..template.clone()
                })
                .collect())
        }
        index => Err(PerturbError::UnsupportedIndex {
            orbit: orbit.to_string(),
            index,
            dimension: s.dimension,
        }),
    }
}

/// Re-evaluates the claims for a finished perturbation against the system it came from.
pub fn verify_franks_claims(before: &FlowSystem, after: &PerturbationResult) -> ClaimsReport {
    evaluate_claims(before, &after.system, &after.choice)
}

fn evaluate_claims(before: &FlowSystem, after: &FlowSystem, d: &ChoiceDescriptor) -> ClaimsReport {
    let Some(gamma) = before.element(&d.orbit).filter(|e| e.is_orbit()) else {
        return ClaimsReport::not_applicable(OrbitRole::Other, format!("{} is not an orbit of the original system", d.orbit));
    };
    let n = before.dimension;
    let k = gamma.index;
    let role = if k + 1 == n {
        OrbitRole::Repeller
    } else if k == 0 {
        OrbitRole::Attractor
    } else {
        return ClaimsReport::not_applicable(
            OrbitRole::Other,
            format!("orbit index {k} is neither attracting nor repelling in dimension {n}"),
        );
    };
    let (c, c2) = (assemble(before), assemble(after));
    let plus = BasisElement::plus(d.orbit.clone(), k + 1);
    let minus = BasisElement::minus(d.orbit.clone(), k);
    let p = BasisElement::plain(d.p_name.clone(), k + 1);
    let q = BasisElement::plain(d.q_name.clone(), k);
    let corr = Correspondence::by_label(&c, &c2, &[(plus.clone(), p.clone()), (minus.clone(), q.clone())]);
    let diff = match compare_matrices(&c, &c2, &corr) {
        Ok(diff) => diff,
        Err(e) => return ClaimsReport::failed(role, format!("complexes are not comparable: {e}")),
    };

    let cell = |k: usize, r: &BasisElement, col: &BasisElement| format!("d{k}[{r}, {col}]");

    let (zero_line, same_matrix, single_line) = match role {
        OrbitRole::Repeller => {
            let h = k + 1;
            let mut w = nonzero_in_row(&c, h, &minus);
            w.extend(nonzero_in_row(&c2, h, &q));
            let same: Vec<String> = diff.in_degree(h).map(|(r, col)| cell(h, r, col)).collect();
            let other: Vec<String> = diff
                .in_degree(k)
                .filter(|(_, col)| **col != minus)
                .map(|(r, col)| cell(k, r, col))
                .collect();
            (w, same, other)
        }
        _ => {
            let mut w = nonzero_in_col(&c, 1, &plus);
            w.extend(nonzero_in_col(&c2, 1, &p));
            let same: Vec<String> = diff.in_degree(1).map(|(r, col)| cell(1, r, col)).collect();
            let other: Vec<String> = diff
                .in_degree(2)
                .filter(|(r, _)| **r != plus)
                .map(|(r, col)| cell(2, r, col))
                .collect();
            (w, same, other)
        }
    };

    // ∂_{h-1}∂_h on both sides, compared through the same correspondence
    let h = match role {
        OrbitRole::Repeller => k + 1,
        _ => 2,
    };
    let composite = if h < 2 {
        ClaimOutcome::NotApplicable(format!("no composite below degree {h}"))
    } else {
        ClaimOutcome::from_witnesses(composite_diff(&c, &c2, &corr, h))
    };

    ClaimsReport {
        role,
        zero_line: ClaimOutcome::from_witnesses(zero_line),
        same_matrix: ClaimOutcome::from_witnesses(same_matrix),
        single_line: ClaimOutcome::from_witnesses(single_line),
        composite,
    }
}

fn nonzero_in_row(c: &ChainComplexGF2, k: usize, row: &BasisElement) -> Vec<String> {
    let Some(i) = c.basis(k - 1).iter().position(|b| b == row) else {
        return vec![format!("{row} is missing from degree {}", k - 1)];
    };
    let m = c.boundary(k).unwrap();
    (0..m.cols())
        .filter(|&j| m.get(i, j))
        .map(|j| format!("d{k}[{row}, {}] = 1", c.basis(k)[j]))
        .collect()
}

fn nonzero_in_col(c: &ChainComplexGF2, k: usize, col: &BasisElement) -> Vec<String> {
    let Some(j) = c.basis(k).iter().position(|b| b == col) else {
        return vec![format!("{col} is missing from degree {k}")];
    };
    let m = c.boundary(k).unwrap();
    (0..m.rows())
        .filter(|&i| m.get(i, j))
        .map(|i| format!("d{k}[{}, {col}] = 1", c.basis(k - 1)[i]))
        .collect()
}

fn composite_diff(a: &ChainComplexGF2, b: &ChainComplexGF2, corr: &Correspondence, h: usize) -> Vec<String> {
    let pa = a.boundary(h - 1).unwrap().multiply(a.boundary(h).unwrap()).unwrap();
    let pb = b.boundary(h - 1).unwrap().multiply(b.boundary(h).unwrap()).unwrap();
    let pos = |c: &ChainComplexGF2, k: usize, x: &BasisElement| c.basis(k).iter().position(|y| y == x);
    let mut out = Vec::new();
    for (j, col) in a.basis(h).iter().enumerate() {
        let Some(bj) = corr.get(col).and_then(|y| pos(b, h, y)) else { continue };
        for (i, row) in a.basis(h - 2).iter().enumerate() {
            let Some(bi) = corr.get(row).and_then(|y| pos(b, h - 2, y)) else { continue };
            if pa.get(i, j) != pb.get(bi, bj) {
                out.push(format!("d{}d{h}[{row}, {col}] = {} but {}", h - 1, pa.get(i, j) as u8, pb.get(bi, bj) as u8));
            }
        }
    }
    out
}

/// A gradient-like system obtained by removing every orbit, with the choices made.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Resolution {
    pub system: FlowSystem,
    pub choices: Vec<ChoiceDescriptor>,
}

/// Every gradient-like resolution of a surface flow: the product of the
/// enumerated choices over all orbits, applied in declaration order.
pub fn resolve_all(s: &FlowSystem) -> Result<Vec<Resolution>, PerturbError> {
    resolve_all_with(s, &[])
}

/// Like [`resolve_all`], but an orbit with a descriptor in `explicit` uses
/// only that descriptor. In dimension other than 2 every orbit needs one.
pub fn resolve_all_with(s: &FlowSystem, explicit: &[ChoiceDescriptor]) -> Result<Vec<Resolution>, PerturbError> {
    let orbits: Vec<String> = s.orbits().map(|e| e.name.clone()).collect();
    let mut frontier = vec![Resolution {
        system: s.clone(),
        choices: Vec::new(),
    }];
    for orbit in &orbits {
        let mut next = Vec::new();
        for partial in frontier {
            let choices = match explicit.iter().find(|d| &d.orbit == orbit) {
                Some(d) => vec![d.clone()],
                None => enumerate_choices_2d(&partial.system, orbit)?,
            };
            for d in choices {
                let result = apply_choice(&partial.system, &d)?;
                let mut taken = partial.choices.clone();
                taken.push(d);
                next.push(Resolution {
                    system: result.system,
                    choices: taken,
                });
            }
        }
        frontier = next;
    }
    Ok(frontier)
}
