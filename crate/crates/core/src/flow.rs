//! Combinatorial Morse–Smale systems.
//!
//! A [`FlowSystem`] records the critical elements of a flow (rest points and
//! closed orbits, each with an index) together with the integer number of
//! connected components of `W^u(source) ∩ W^s(target)` for every ordered pair
//! that intersects. Everything downstream (complexes, perturbations, posets)
//! is derived from this data.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ElementKind {
    RestPoint,
    ClosedOrbit { twisted: bool },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CriticalElement {
    pub name: String,
    pub kind: ElementKind,
    pub index: usize,
}

impl CriticalElement {
    pub fn rest(name: impl Into<String>, index: usize) -> Self {
        CriticalElement {
            name: name.into(),
            kind: ElementKind::RestPoint,
            index,
        }
    }

    pub fn orbit(name: impl Into<String>, index: usize, twisted: bool) -> Self {
        CriticalElement {
            name: name.into(),
            kind: ElementKind::ClosedOrbit { twisted },
            index,
        }
    }

    pub fn is_orbit(&self) -> bool {
        matches!(self.kind, ElementKind::ClosedOrbit { .. })
    }

    pub fn is_rest(&self) -> bool {
        !self.is_orbit()
    }

    pub fn is_twisted(&self) -> bool {
        matches!(self.kind, ElementKind::ClosedOrbit { twisted: true })
    }

    /// Dimension of the unstable manifold: `k` for a rest point, `k + 1` for an orbit.
    pub fn unstable_dim(&self) -> usize {
        match self.kind {
            ElementKind::RestPoint => self.index,
            ElementKind::ClosedOrbit { .. } => self.index + 1,
        }
    }

    /// Dimension of the stable manifold in an `n`-manifold; `n - k` for both kinds.
    pub fn stable_dim(&self, n: usize) -> usize {
        n.saturating_sub(self.index)
    }

    /// Highest admissible index for this kind of element in dimension `n`.
    pub fn max_index(&self, n: usize) -> usize {
        match self.kind {
            ElementKind::RestPoint => n,
            ElementKind::ClosedOrbit { .. } => n.saturating_sub(1),
        }
    }

    /// Sinks and index-0 orbits: nothing flows out of them.
    pub fn is_attractor(&self) -> bool {
        self.index == 0
    }

    /// Sources and index-(n-1) orbits: nothing flows into them.
    pub fn is_repeller(&self, n: usize) -> bool {
        self.index == self.max_index(n)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FlowError {
    DuplicateName(String),
    UnknownElement(String),
    SelfConnection(String),
    ZeroCount { source: String, target: String },
    NotAnOrbit(String),
    NameCollision(String),
}

impl fmt::Display for FlowError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FlowError::DuplicateName(n) => write!(f, "duplicate element name '{n}'"),
            FlowError::UnknownElement(n) => write!(f, "unknown element '{n}'"),
            FlowError::SelfConnection(n) => write!(f, "element '{n}' cannot connect to itself"),
            FlowError::ZeroCount { source, target } => {
                write!(f, "connection {source} -> {target} must have a positive count")
            }
            FlowError::NotAnOrbit(n) => write!(f, "'{n}' is not a closed orbit"),
            FlowError::NameCollision(n) => write!(f, "name '{n}' is already in use"),
        }
    }
}

impl core::error::Error for FlowError {}

/// Integer component counts `c(source, target)` for ordered pairs of distinct elements.
///
/// Absent pairs have count zero. Iteration is sorted by `(source, target)` name.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ConnectionMap {
    counts: BTreeMap<(String, String), u32>,
}

impl ConnectionMap {
    pub fn new() -> Self {
        Self::default()
    }

    /// Sets `c(source, target)`, returning the previous count if any.
    pub fn insert(
        &mut self,
        source: impl Into<String>,
        target: impl Into<String>,
        count: u32,
    ) -> Result<Option<u32>, FlowError> {
        let (source, target) = (source.into(), target.into());
        if source == target {
            return Err(FlowError::SelfConnection(source));
        }
        if count == 0 {
            return Err(FlowError::ZeroCount { source, target });
        }
        Ok(self.counts.insert((source, target), count))
    }

    pub fn remove(&mut self, source: &str, target: &str) -> Option<u32> {
        self.counts.remove(&(source.to_string(), target.to_string()))
    }

    pub fn count(&self, source: &str, target: &str) -> u32 {
        // BTreeMap<(String, String)> cannot be queried by (&str, &str) directly.
        self.counts
            .iter()
            .find(|((s, t), _)| s == source && t == target)
            .map_or(0, |(_, &c)| c)
    }

    /// `α(source, target) = c mod 2`.
    pub fn alpha(&self, source: &str, target: &str) -> bool {
        self.count(source, target) % 2 == 1
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, u32)> + '_ {
        self.counts
            .iter()
            .map(|((s, t), &c)| (s.as_str(), t.as_str(), c))
    }

    pub fn outgoing<'a>(&'a self, source: &'a str) -> impl Iterator<Item = (&'a str, u32)> + 'a {
        self.iter()
            .filter(move |(s, _, _)| *s == source)
            .map(|(_, t, c)| (t, c))
    }

    pub fn incoming<'a>(&'a self, target: &'a str) -> impl Iterator<Item = (&'a str, u32)> + 'a {
        self.iter()
            .filter(move |(_, t, _)| *t == target)
            .map(|(s, _, c)| (s, c))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Removes every pair with `name` on either side and returns them.
    pub fn remove_touching(&mut self, name: &str) -> Vec<Connection> {
        let mut removed = Vec::new();
        self.counts.retain(|(s, t), c| {
            if s == name || t == name {
                removed.push(Connection {
                    source: s.clone(),
                    target: t.clone(),
                    count: *c,
                });
                false
            } else {
                true
            }
        });
        removed
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Connection {
    pub source: String,
    pub target: String,
    pub count: u32,
}

/// Dimension, critical elements and their connection counts.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowSystem {
    pub dimension: usize,
    pub label: Option<String>,
    /// Declaration order is the tie-break order for complex bases.
    pub elements: Vec<CriticalElement>,
    pub connections: ConnectionMap,
    pub expected_betti: Option<Vec<usize>>,
}

impl FlowSystem {
    pub fn new(dimension: usize) -> Self {
        FlowSystem {
            dimension,
            label: None,
            elements: Vec::new(),
            connections: ConnectionMap::new(),
            expected_betti: None,
        }
    }

    pub fn add_element(&mut self, element: CriticalElement) -> Result<(), FlowError> {
        if self.element(&element.name).is_some() {
            return Err(FlowError::DuplicateName(element.name));
        }
        self.elements.push(element);
        Ok(())
    }

    pub fn add_rest(&mut self, name: &str, index: usize) -> Result<(), FlowError> {
        self.add_element(CriticalElement::rest(name, index))
    }

    pub fn add_orbit(&mut self, name: &str, index: usize, twisted: bool) -> Result<(), FlowError> {
        self.add_element(CriticalElement::orbit(name, index, twisted))
    }

    /// Records `c(source, target) = count`; both elements must already exist.
    pub fn connect(&mut self, source: &str, target: &str, count: u32) -> Result<(), FlowError> {
        for name in [source, target] {
            if self.element(name).is_none() {
                return Err(FlowError::UnknownElement(name.to_string()));
            }
        }
        self.connections.insert(source, target, count).map(|_| ())
    }

    pub fn element(&self, name: &str) -> Option<&CriticalElement> {
        self.elements.iter().find(|e| e.name == name)
    }

    pub fn position(&self, name: &str) -> Option<usize> {
        self.elements.iter().position(|e| e.name == name)
    }

    pub fn orbits(&self) -> impl Iterator<Item = &CriticalElement> + '_ {
        self.elements.iter().filter(|e| e.is_orbit())
    }

    pub fn rest_points(&self) -> impl Iterator<Item = &CriticalElement> + '_ {
        self.elements.iter().filter(|e| e.is_rest())
    }

    pub fn is_gradient_like(&self) -> bool {
        self.orbits().next().is_none()
    }

    pub fn count(&self, source: &str, target: &str) -> u32 {
        self.connections.count(source, target)
    }

    pub fn alpha(&self, source: &str, target: &str) -> bool {
        self.connections.alpha(source, target)
    }

    /// Number of rest points of each index `0..=dimension`.
    pub fn rest_counts(&self) -> Vec<usize> {
        let mut counts = vec![0; self.dimension + 1];
        for e in self.rest_points() {
            if e.index < counts.len() {
                counts[e.index] += 1;
            }
        }
        counts
    }

    /// `Σ (-1)^index` over rest points.
    pub fn alternating_rest_count(&self) -> i64 {
        self.rest_points()
            .map(|e| if e.index % 2 == 0 { 1 } else { -1 })
            .sum()
    }

    /// `{ β′ : c(β, β′) > 0 }` with the counts.
    pub fn direct_downstream(&self, name: &str) -> Result<BTreeMap<String, u32>, FlowError> {
        self.require(name)?;
        Ok(self
            .connections
            .outgoing(name)
            .map(|(t, c)| (t.to_string(), c))
            .collect())
    }

    /// `{ β : c(β, β′) > 0 }` with the counts.
    pub fn direct_upstream(&self, name: &str) -> Result<BTreeMap<String, u32>, FlowError> {
        self.require(name)?;
        Ok(self
            .connections
            .incoming(name)
            .map(|(s, c)| (s.to_string(), c))
            .collect())
    }

    fn require(&self, name: &str) -> Result<&CriticalElement, FlowError> {
        self.element(name)
            .ok_or_else(|| FlowError::UnknownElement(name.to_string()))
    }

    pub fn reachability(&self) -> Reachability {
        reachability(self)
    }

    pub fn validate(&self, strict: bool) -> Vec<Violation> {
        validate(self, strict)
    }
}

/// Reflexive-transitive closure of the direct-connection relation.
///
/// `reaches(a, b)` means the flow leads from `a` down to `b` through a chain
/// of connections, i.e. `b ≤ a`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reachability {
    names: Vec<String>,
    reach: Vec<Vec<bool>>,
}

impl Reachability {
    pub fn names(&self) -> &[String] {
        &self.names
    }

    fn idx(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    /// `true` when `to ≤ from`. Unknown names never reach anything.
    pub fn reaches(&self, from: &str, to: &str) -> bool {
        match (self.idx(from), self.idx(to)) {
            (Some(a), Some(b)) => self.reach[a][b],
            _ => false,
        }
    }

    /// Elements reachable from `name`, including itself, in declaration order.
    pub fn below(&self, name: &str) -> Vec<&str> {
        let Some(a) = self.idx(name) else {
            return Vec::new();
        };
        self.names
            .iter()
            .enumerate()
            .filter(|&(b, _)| self.reach[a][b])
            .map(|(_, n)| n.as_str())
            .collect()
    }

    pub fn is_antisymmetric(&self) -> bool {
        let n = self.names.len();
        (0..n).all(|a| (0..n).all(|b| a == b || !(self.reach[a][b] && self.reach[b][a])))
    }

    pub fn is_transitive(&self) -> bool {
        let n = self.names.len();
        (0..n).all(|a| {
            (0..n).all(|b| !self.reach[a][b] || (0..n).all(|c| !self.reach[b][c] || self.reach[a][c]))
        })
    }

    pub fn is_reflexive(&self) -> bool {
        (0..self.names.len()).all(|a| self.reach[a][a])
    }
}

pub fn reachability(s: &FlowSystem) -> Reachability {
    let names: Vec<String> = s.elements.iter().map(|e| e.name.clone()).collect();
    let n = names.len();
    let index: BTreeMap<&str, usize> = names.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
    let mut adj = vec![Vec::new(); n];
    for (src, tgt, _) in s.connections.iter() {
        if let (Some(&a), Some(&b)) = (index.get(src), index.get(tgt)) {
            adj[a].push(b);
        }
    }
    let mut reach = vec![vec![false; n]; n];
    for (start, row) in reach.iter_mut().enumerate() {
        let mut stack = vec![start];
        row[start] = true;
        while let Some(v) = stack.pop() {
            for &w in &adj[v] {
                if !row[w] {
                    row[w] = true;
                    stack.push(w);
                }
            }
        }
    }
    Reachability { names, reach }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rule {
    DuplicateName,
    IndexRange,
    UnknownElement,
    DimensionRule,
    AttractorOutgoing,
    RepellerIncoming,
    Cycle,
    SaddleDegree,
    BettiLength,
}

impl Rule {
    pub fn as_str(self) -> &'static str {
        match self {
            Rule::DuplicateName => "duplicate-name",
            Rule::IndexRange => "index-range",
            Rule::UnknownElement => "unknown-element",
            Rule::DimensionRule => "dimension-rule",
            Rule::AttractorOutgoing => "attractor-rule",
            Rule::RepellerIncoming => "repeller-rule",
            Rule::Cycle => "acyclicity",
            Rule::SaddleDegree => "saddle-degree",
            Rule::BettiLength => "betti-length",
        }
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One broken invariant: the rule, the elements involved and what was observed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub rule: Rule,
    pub elements: Vec<String>,
    pub detail: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}: {}", self.rule, self.elements.join(", "), self.detail)
    }
}

fn kind_word(e: &CriticalElement) -> &'static str {
    if e.is_orbit() {
        "orbit"
    } else {
        "rest point"
    }
}

/// Checks every structural invariant of `s`; an empty list means valid.
///
/// `strict` adds the two-dimensional saddle rule (two separatrices in, two out).
pub fn validate(s: &FlowSystem, strict: bool) -> Vec<Violation> {
    let n = s.dimension;
    let mut out = Vec::new();

    let mut seen = BTreeSet::new();
    for e in &s.elements {
        if !seen.insert(e.name.as_str()) {
            out.push(Violation {
                rule: Rule::DuplicateName,
                elements: vec![e.name.clone()],
                detail: "name declared more than once".to_string(),
            });
        }
        if e.index > e.max_index(n) {
            out.push(Violation {
                rule: Rule::IndexRange,
                elements: vec![e.name.clone()],
                detail: format!(
                    "{} index {} outside 0..={} for dimension {n}",
                    kind_word(e),
                    e.index,
                    e.max_index(n)
                ),
            });
        }
    }

    if let Some(betti) = &s.expected_betti {
        if betti.len() != n + 1 {
            out.push(Violation {
                rule: Rule::BettiLength,
                elements: Vec::new(),
                detail: format!("expect-betti has {} entries, expected {}", betti.len(), n + 1),
            });
        }
    }

    for (src, tgt, c) in s.connections.iter() {
        let (Some(a), Some(b)) = (s.element(src), s.element(tgt)) else {
            for name in [src, tgt] {
                if s.element(name).is_none() {
                    out.push(Violation {
                        rule: Rule::UnknownElement,
                        elements: vec![name.to_string()],
                        detail: format!("connection {src} -> {tgt} references an undeclared element"),
                    });
                }
            }
            continue;
        };
        let (u, st) = (a.unstable_dim(), b.stable_dim(n));
        if u + st < n + 1 {
            out.push(Violation {
                rule: Rule::DimensionRule,
                elements: vec![src.to_string(), tgt.to_string()],
                detail: format!("c = {c} but dim W^u({src}) + dim W^s({tgt}) = {u} + {st} < {}", n + 1),
            });
        }
        if a.is_attractor() {
            out.push(Violation {
                rule: Rule::AttractorOutgoing,
                elements: vec![src.to_string(), tgt.to_string()],
                detail: format!("{src} is an attracting {} with outgoing connection (c = {c})", kind_word(a)),
            });
        }
        if b.is_repeller(n) {
            out.push(Violation {
                rule: Rule::RepellerIncoming,
                elements: vec![src.to_string(), tgt.to_string()],
                detail: format!("{tgt} is a repelling {} with incoming connection (c = {c})", kind_word(b)),
            });
        }
    }

    if let Some(cycle) = find_cycle(s) {
        out.push(Violation {
            rule: Rule::Cycle,
            detail: format!("connections form a cycle {}", cycle.join(" -> ")),
            elements: cycle,
        });
    }

    if strict && n == 2 {
        for e in s.rest_points().filter(|e| e.index == 1) {
            let outgoing: u32 = s.connections.outgoing(&e.name).map(|(_, c)| c).sum();
            let incoming: u32 = s.connections.incoming(&e.name).map(|(_, c)| c).sum();
            if outgoing != 2 || incoming != 2 {
                out.push(Violation {
                    rule: Rule::SaddleDegree,
                    elements: vec![e.name.clone()],
                    detail: format!(
                        "saddle has outgoing multiplicity {outgoing} and incoming multiplicity {incoming}, expected 2 and 2"
                    ),
                });
            }
        }
    }

    out
}

/// A directed cycle in the connection digraph, first element repeated at the end.
fn find_cycle(s: &FlowSystem) -> Option<Vec<String>> {
    let names: Vec<&str> = s.elements.iter().map(|e| e.name.as_str()).collect();
    let idx = |name: &str| names.iter().position(|n| *n == name);
    let mut adj = vec![Vec::new(); names.len()];
    for (src, tgt, _) in s.connections.iter() {
        if let (Some(a), Some(b)) = (idx(src), idx(tgt)) {
            adj[a].push(b);
        }
    }
    // 0 = unvisited, 1 = on stack, 2 = done
    let mut state = vec![0u8; names.len()];
    let mut path = Vec::new();
    for root in 0..names.len() {
        if state[root] == 0 {
            if let Some(c) = dfs_cycle(root, &adj, &mut state, &mut path) {
                return Some(c.into_iter().map(|i| names[i].to_string()).collect());
            }
        }
    }
    None
}

fn dfs_cycle(v: usize, adj: &[Vec<usize>], state: &mut [u8], path: &mut Vec<usize>) -> Option<Vec<usize>> {
    state[v] = 1;
    path.push(v);
    for &w in &adj[v] {
        if state[w] == 1 {
            let start = path.iter().position(|&p| p == w).unwrap();
            let mut cycle = path[start..].to_vec();
            cycle.push(w);
            return Some(cycle);
        }
        if state[w] == 0 {
            if let Some(c) = dfs_cycle(w, adj, state, path) {
                return Some(c);
            }
        }
    }
    path.pop();
    state[v] = 2;
    None
}

/// `s` with one closed orbit cut out and its rest-point pair added, before any
/// of the orbit's connections have been reassigned.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrbitRemoval {
    pub system: FlowSystem,
    pub orbit: CriticalElement,
    pub p_name: String,
    pub q_name: String,
    /// Connections that touched the orbit and still need a new endpoint.
    pub pending: Vec<Connection>,
    /// Degree of the attaching map between the two new cells: 0 untwisted, 2 twisted.
    pub attaching_degree: u8,
}

/// Replaces `orbit` (index `k`) by rest points `p_name` (index `k + 1`) and
/// `q_name` (index `k`) joined by two flow lines. The orbit's other
/// connections are dropped and returned as pending.
pub fn remove_orbit_stub(
    s: &FlowSystem,
    orbit: &str,
    p_name: &str,
    q_name: &str,
) -> Result<OrbitRemoval, FlowError> {
    let gamma = s.require(orbit)?.clone();
    if !gamma.is_orbit() {
        return Err(FlowError::NotAnOrbit(orbit.to_string()));
    }
    for name in [p_name, q_name] {
        if s.element(name).is_some() {
            return Err(FlowError::NameCollision(name.to_string()));
        }
    }
    if p_name == q_name {
        return Err(FlowError::NameCollision(p_name.to_string()));
    }
    let mut system = s.clone();
    let pos = system.position(orbit).unwrap();
    system.elements.splice(
        pos..=pos,
        [
            CriticalElement::rest(p_name, gamma.index + 1),
            CriticalElement::rest(q_name, gamma.index),
        ],
    );
    let pending = system.connections.remove_touching(orbit);
    system.connect(p_name, q_name, 2)?;
    Ok(OrbitRemoval {
        system,
        attaching_degree: if gamma.is_twisted() { 2 } else { 0 },
        orbit: gamma,
        p_name: p_name.to_string(),
        q_name: q_name.to_string(),
        pending,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{fig3, fig5, fig6};

    fn rules(v: &[Violation]) -> Vec<Rule> {
        v.iter().map(|v| v.rule).collect()
    }

    #[test]
    fn fixtures_validate() {
        for s in [fig3(), fig5(), fig6()] {
            assert!(validate(&s, false).is_empty(), "{:?}", validate(&s, false));
        }
        assert!(validate(&fig5(), true).is_empty());
        assert!(validate(&fig3(), true).is_empty());
    }

    #[test]
    fn saddle_to_saddle_breaks_dimension_rule() {
        let mut s = FlowSystem::new(2);
        s.add_rest("a", 1).unwrap();
        s.add_rest("b", 1).unwrap();
        s.connect("a", "b", 1).unwrap();
        let v = validate(&s, false);
        assert_eq!(rules(&v), vec![Rule::DimensionRule]);
        assert!(v[0].detail.contains("1 + 1 < 3"), "{}", v[0].detail);
    }

    #[test]
    fn incoming_connection_to_repelling_orbit() {
        let mut s = FlowSystem::new(2);
        s.add_rest("src", 2).unwrap();
        s.add_orbit("g", 1, false).unwrap();
        s.connect("src", "g", 1).unwrap();
        let v = validate(&s, false);
        assert!(rules(&v).contains(&Rule::RepellerIncoming), "{v:?}");
        assert_eq!(v.iter().find(|v| v.rule == Rule::RepellerIncoming).unwrap().elements, vec!["src", "g"]);
    }

    #[test]
    fn sinks_have_no_outgoing_connections() {
        let mut s = FlowSystem::new(2);
        s.add_rest("a", 0).unwrap();
        s.add_rest("b", 0).unwrap();
        s.connect("a", "b", 1).unwrap();
        let r = rules(&validate(&s, false));
        assert!(r.contains(&Rule::AttractorOutgoing));
        assert!(r.contains(&Rule::DimensionRule));
    }

    #[test]
    fn index_ranges() {
        let mut s = FlowSystem::new(2);
        s.add_rest("a", 3).unwrap();
        s.add_orbit("g", 2, true).unwrap();
        s.add_orbit("h", 1, true).unwrap();
        let v = validate(&s, false);
        assert_eq!(rules(&v), vec![Rule::IndexRange, Rule::IndexRange]);
        assert_eq!(v[1].elements, vec!["g"]);
    }

    #[test]
    fn cycles_are_reported() {
        let mut s = FlowSystem::new(3);
        s.add_orbit("g", 1, false).unwrap();
        s.add_orbit("h", 1, false).unwrap();
        s.connect("g", "h", 1).unwrap();
        s.connect("h", "g", 1).unwrap();
        let v = validate(&s, false);
        assert_eq!(rules(&v), vec![Rule::Cycle]);
        assert_eq!(v[0].elements, vec!["g", "h", "g"]);
    }

    #[test]
    fn strict_saddle_degree() {
        let mut s = FlowSystem::new(2);
        s.add_rest("q", 0).unwrap();
        s.add_rest("s", 1).unwrap();
        s.add_rest("p", 2).unwrap();
        s.connect("s", "q", 1).unwrap();
        s.connect("p", "s", 2).unwrap();
        assert!(validate(&s, false).is_empty());
        let v = validate(&s, true);
        assert_eq!(rules(&v), vec![Rule::SaddleDegree]);
        assert!(v[0].detail.contains("outgoing multiplicity 1"));
    }

    #[test]
    fn betti_length_and_unknown_elements() {
        let mut s = FlowSystem::new(2);
        s.expected_betti = Some(vec![1, 0]);
        s.connections.insert("x", "y", 1).unwrap();
        let r = rules(&validate(&s, false));
        assert_eq!(r, vec![Rule::BettiLength, Rule::UnknownElement, Rule::UnknownElement]);
    }

    #[test]
    fn connection_map_invariants() {
        let mut m = ConnectionMap::new();
        assert_eq!(m.insert("a", "a", 1), Err(FlowError::SelfConnection("a".into())));
        assert!(matches!(m.insert("a", "b", 0), Err(FlowError::ZeroCount { .. })));
        m.insert("a", "b", 3).unwrap();
        assert_eq!(m.count("a", "b"), 3);
        assert_eq!(m.count("b", "a"), 0);
        assert!(m.alpha("a", "b"));
        m.insert("a", "b", 2).unwrap();
        assert!(!m.alpha("a", "b"));
    }

    #[test]
    fn downstream_of_repelling_orbit_in_fig5() {
        let s = fig5();
        let down = s.direct_downstream("gamma").unwrap();
        let expected: BTreeMap<String, u32> = [("q1", 1), ("q2", 1), ("q3", 1), ("q4", 1), ("s1", 2), ("s2", 2)]
            .into_iter()
            .map(|(n, c)| (n.to_string(), c))
            .collect();
        assert_eq!(down, expected);
        assert!(s.direct_downstream("q1").unwrap().is_empty());
        assert_eq!(s.direct_downstream("nope"), Err(FlowError::UnknownElement("nope".into())));
    }

    #[test]
    fn downstream_of_top_rest_point_in_fig6() {
        let s = fig6();
        let down: Vec<String> = s.direct_downstream("r1").unwrap().into_keys().collect();
        assert_eq!(down, vec!["p1", "p2", "p3"]);
    }

    #[test]
    fn reachability_is_transitive_closure() {
        let mut s = FlowSystem::new(2);
        s.add_rest("a", 2).unwrap();
        s.add_rest("b", 1).unwrap();
        s.add_rest("c", 0).unwrap();
        s.connect("a", "b", 2).unwrap();
        s.connect("b", "c", 1).unwrap();
        let r = s.reachability();
        assert!(r.reaches("a", "b") && r.reaches("b", "c") && r.reaches("a", "c"));
        assert!(!r.reaches("c", "a"));
        assert!(r.is_reflexive() && r.is_transitive() && r.is_antisymmetric());

        let mut discrete = FlowSystem::new(2);
        discrete.add_rest("x", 0).unwrap();
        discrete.add_rest("y", 0).unwrap();
        let r = discrete.reachability();
        assert!(r.reaches("x", "x") && !r.reaches("x", "y") && !r.reaches("y", "x"));
    }

    #[test]
    fn stub_removal_of_fig3_orbit() {
        let s = fig3();
        let stub = remove_orbit_stub(&s, "gamma", "p", "q").unwrap();
        assert_eq!(stub.system.element("p").unwrap().index, 2);
        assert_eq!(stub.system.element("q").unwrap().index, 1);
        assert_eq!(stub.system.count("p", "q"), 2);
        assert!(stub.system.element("gamma").is_none());
        assert_eq!(stub.pending.len(), 4);
        assert!(stub.pending.iter().all(|c| c.source == "gamma"));
        assert_eq!(stub.attaching_degree, 0);
        // p and q sit where gamma was declared
        let names: Vec<&str> = stub.system.elements.iter().map(|e| e.name.as_str()).collect();
        assert_eq!(names, vec!["q0", "q1", "q2", "s", "p", "q"]);
    }

    #[test]
    fn stub_removal_degrees_and_errors() {
        let mut s = FlowSystem::new(2);
        s.add_orbit("t", 0, true).unwrap();
        s.add_orbit("u", 0, false).unwrap();
        s.add_rest("x", 0).unwrap();
        let stub = remove_orbit_stub(&s, "t", "ps", "qs").unwrap();
        assert_eq!(stub.attaching_degree, 2);
        assert_eq!(stub.system.element("ps").unwrap().index, 1);
        assert_eq!(stub.system.element("qs").unwrap().index, 0);
        assert_eq!(remove_orbit_stub(&s, "u", "p", "q").unwrap().attaching_degree, 0);
        assert_eq!(remove_orbit_stub(&s, "x", "p", "q"), Err(FlowError::NotAnOrbit("x".into())));
        assert_eq!(remove_orbit_stub(&s, "u", "x", "q"), Err(FlowError::NameCollision("x".into())));
        assert_eq!(remove_orbit_stub(&s, "zz", "p", "q"), Err(FlowError::UnknownElement("zz".into())));
    }
}
