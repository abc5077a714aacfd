//! Face posets of gradient-like systems and a necessary condition for cell
//! equivalence.
//!
//! Cell equivalence of two CW complexes implies that their face posets are
//! isomorphic as labelled posets. Only that consequence is decidable from
//! combinatorial data, so a verdict here can refute cell equivalence but
//! never confirm it.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::flow::FlowSystem;
use crate::perturb::{resolve_all, PerturbError, Resolution};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PosetError {
    DuplicateNode(String),
    UnknownNode(String),
    Cycle(Vec<String>),
    NotGradientLike(Vec<String>),
}

impl fmt::Display for PosetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetError::DuplicateNode(n) => write!(f, "duplicate node '{n}'"),
            PosetError::UnknownNode(n) => write!(f, "unknown node '{n}'"),
            PosetError::Cycle(c) => write!(f, "relation is not antisymmetric: {}", c.join(" < ")),
            PosetError::NotGradientLike(orbits) => write!(
                f,
                "system has closed orbits ({}); remove them with a perturbation first",
                orbits.join(", ")
            ),
        }
    }
}

impl core::error::Error for PosetError {}

/// Named nodes with an integer label under a partial order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledPoset {
    names: Vec<String>,
    labels: Vec<u32>,
    // leq[a][b] <=> a <= b
    leq: Vec<Vec<bool>>,
}

impl LabeledPoset {
    /// Builds the reflexive-transitive closure of `less` (pairs `(a, b)` with `a < b`).
    pub fn from_relations<S: AsRef<str>>(
        nodes: &[(S, u32)],
        less: &[(S, S)],
    ) -> Result<Self, PosetError> {
        let mut names: Vec<String> = Vec::with_capacity(nodes.len());
        let mut labels = Vec::with_capacity(nodes.len());
        for (name, label) in nodes {
            let name = name.as_ref();
            if names.iter().any(|n| n == name) {
                return Err(PosetError::DuplicateNode(name.to_string()));
            }
            names.push(name.to_string());
            labels.push(*label);
        }
        let n = names.len();
        let find = |name: &str| {
            names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| PosetError::UnknownNode(name.to_string()))
        };
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (a, b) in less {
            let (a, b) = (find(a.as_ref())?, find(b.as_ref())?);
            leq[a][b] = true;
        }
        for m in 0..n {
            let through = leq[m].clone();
            for row in leq.iter_mut().filter(|row| row[m]) {
                for (x, &y) in row.iter_mut().zip(&through) {
                    *x |= y;
                }
            }
        }
        for a in 0..n {
            for b in a + 1..n {
                if leq[a][b] && leq[b][a] {
                    return Err(PosetError::Cycle(vec![names[a].clone(), names[b].clone(), names[a].clone()]));
                }
            }
        }
        Ok(LabeledPoset { names, labels, leq })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn label(&self, name: &str) -> Option<u32> {
        self.index(name).map(|i| self.labels[i])
    }

    fn index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, a: &str, b: &str) -> bool {
        match (self.index(a), self.index(b)) {
            (Some(a), Some(b)) => self.leq[a][b],
            _ => false,
        }
    }

    /// Pairs `(a, b)` where `b` covers `a`, in node order.
    pub fn covers(&self) -> Vec<(&str, &str)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if a == b || !self.leq[a][b] {
                    continue;
                }
                let between = (0..n).any(|m| m != a && m != b && self.leq[a][m] && self.leq[m][b]);
                if !between {
                    out.push((self.names[a].as_str(), self.names[b].as_str()));
                }
            }
        }
        out
    }

    /// Nodes below `e`, including `e`, in node order.
    pub fn base(&self, e: &str) -> Result<Vec<&str>, PosetError> {
        let i = self.index(e).ok_or_else(|| PosetError::UnknownNode(e.to_string()))?;
        Ok((0..self.len())
            .filter(|&j| self.leq[j][i])
            .map(|j| self.names[j].as_str())
            .collect())
    }

    fn down_counts(&self, i: usize) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for j in 0..self.len() {
            if j != i && self.leq[j][i] {
                *m.entry(self.labels[j]).or_insert(0) += 1;
            }
        }
        m
    }

    fn up_counts(&self, i: usize) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for j in 0..self.len() {
            if j != i && self.leq[i][j] {
                *m.entry(self.labels[j]).or_insert(0) += 1;
            }
        }
        m
    }

    fn signature(&self, i: usize) -> NodeSignature {
        NodeSignature {
            label: self.labels[i],
            below: self.down_counts(i).into_iter().collect(),
            above: self.up_counts(i).into_iter().collect(),
        }
    }

    pub fn label_counts(&self) -> BTreeMap<u32, usize> {
        let mut m = BTreeMap::new();
        for &l in &self.labels {
            *m.entry(l).or_insert(0) += 1;
        }
        m
    }

    /// Sorted downset sizes (each including the node itself) of nodes labelled `label`.
    pub fn downset_sizes(&self, label: u32) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len())
            .filter(|&i| self.labels[i] == label)
            .map(|i| (0..self.len()).filter(|&j| self.leq[j][i]).count())
            .collect();
        v.sort_unstable();
        v
    }

    /// For each node labelled `lower`, the number of nodes labelled `upper`
    /// above it; sorted. On a surface flow with `lower = 0, upper = 1` this
    /// is the number of saddles each sink is connected to.
    pub fn incidence(&self, lower: u32, upper: u32) -> Vec<usize> {
        let mut v: Vec<usize> = (0..self.len())
            .filter(|&i| self.labels[i] == lower)
            .map(|i| (0..self.len()).filter(|&j| self.labels[j] == upper && j != i && self.leq[i][j]).count())
            .collect();
        v.sort_unstable();
        v
    }

    /// Strictly increasing labels along every strict relation.
    pub fn is_graded_by_label(&self) -> bool {
        let n = self.len();
        (0..n).all(|a| (0..n).all(|b| a == b || !self.leq[a][b] || self.labels[a] < self.labels[b]))
    }
}

/// Nodes of a gradient-like system's face poset are its rest points labelled
/// by index, with `q ≤ p` whenever the flow leads from `p` down to `q`.
pub fn face_poset(s: &FlowSystem) -> Result<LabeledPoset, PosetError> {
    let orbits: Vec<String> = s.orbits().map(|e| e.name.clone()).collect();
    if !orbits.is_empty() {
        return Err(PosetError::NotGradientLike(orbits));
    }
    let nodes: Vec<(&str, u32)> = s.elements.iter().map(|e| (e.name.as_str(), e.index as u32)).collect();
    let less: Vec<(&str, &str)> = s.connections.iter().map(|(src, tgt, _)| (tgt, src)).collect();
    LabeledPoset::from_relations(&nodes, &less)
}

pub fn base<'a>(p: &'a LabeledPoset, e: &str) -> Result<Vec<&'a str>, PosetError> {
    p.base(e)
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeSignature {
    pub label: u32,
    /// `(label, count)` of strictly smaller nodes.
    pub below: Vec<(u32, usize)>,
    /// `(label, count)` of strictly larger nodes.
    pub above: Vec<(u32, usize)>,
}

/// Isomorphism-invariant summary of a labelled poset.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Profile {
    pub label_counts: Vec<(u32, usize)>,
    /// Sorted multiset of node signatures.
    pub signatures: Vec<NodeSignature>,
}

pub fn invariant_profile(p: &LabeledPoset) -> Profile {
    let mut signatures: Vec<NodeSignature> = (0..p.len()).map(|i| p.signature(i)).collect();
    signatures.sort();
    Profile {
        label_counts: p.label_counts().into_iter().collect(),
        signatures,
    }
}

/// Why two labelled posets cannot be isomorphic.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Certificate {
    LabelCounts { label: u32, left: usize, right: usize },
    DownsetSizes { label: u32, left: Vec<usize>, right: Vec<usize> },
    Incidence { lower: u32, upper: u32, left: Vec<usize>, right: Vec<usize> },
    Signatures { left: NodeSignature, right_count: usize, left_count: usize },
    NoIsomorphism,
}

fn multiset(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    format!("{{{}}}", parts.join(","))
}

impl Certificate {
    /// Renders with `name(label)` naming labels, e.g. `sink`/`saddle` on surfaces.
    pub fn describe(&self, name: &dyn Fn(u32) -> String) -> String {
        match self {
            Certificate::LabelCounts { label, left, right } => {
                format!("{} count {left} vs {right}", name(*label))
            }
            Certificate::DownsetSizes { label, left, right } => {
                format!("downset sizes {} vs {} for the {}", list(left), list(right), name(*label))
            }
            Certificate::Incidence { lower, upper, left, right } => format!(
                "{}-{} incidence {} vs {}",
                name(*lower),
                name(*upper),
                multiset(left),
                multiset(right)
            ),
            Certificate::Signatures { left, left_count, right_count } => format!(
                "{} with below {:?} and above {:?} occurs {left_count} vs {right_count} times",
                name(left.label),
                left.below,
                left.above
            ),
            Certificate::NoIsomorphism => "exhaustive search found no label-preserving order isomorphism".to_string(),
        }
    }
}

fn list(v: &[usize]) -> String {
    let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
    parts.join(",")
}

pub fn cell_name(label: u32) -> String {
    format!("{label}-cell")
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe(&cell_name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum IsoVerdict {
    /// `(node of a, node of b)` for every node of `a`, in `a`'s order.
    Isomorphic(Vec<(String, String)>),
    NotIsomorphic(Certificate),
}

impl IsoVerdict {
    pub fn is_isomorphic(&self) -> bool {
        matches!(self, IsoVerdict::Isomorphic(_))
    }

    pub fn mapping(&self) -> Option<&[(String, String)]> {
        match self {
            IsoVerdict::Isomorphic(m) => Some(m),
            IsoVerdict::NotIsomorphic(_) => None,
        }
    }

    pub fn certificate(&self) -> Option<&Certificate> {
        match self {
            IsoVerdict::Isomorphic(_) => None,
            IsoVerdict::NotIsomorphic(c) => Some(c),
        }
    }

    pub fn image_of(&self, node: &str) -> Option<&str> {
        self.mapping()?.iter().find(|(a, _)| a == node).map(|(_, b)| b.as_str())
    }
}

/// Cheap invariants first, in an order that yields readable certificates.
fn invariant_mismatch(a: &LabeledPoset, b: &LabeledPoset) -> Option<Certificate> {
    let (ca, cb) = (a.label_counts(), b.label_counts());
    let labels: Vec<u32> = {
        let mut l: Vec<u32> = ca.keys().chain(cb.keys()).copied().collect();
        l.sort_unstable();
        l.dedup();
        l
    };
    for &label in &labels {
        let (x, y) = (ca.get(&label).copied().unwrap_or(0), cb.get(&label).copied().unwrap_or(0));
        if x != y {
            return Some(Certificate::LabelCounts { label, left: x, right: y });
        }
    }
    for &label in labels.iter().rev() {
        let (x, y) = (a.downset_sizes(label), b.downset_sizes(label));
        if x != y {
            return Some(Certificate::DownsetSizes { label, left: x, right: y });
        }
    }
    for (i, &lower) in labels.iter().enumerate() {
        for &upper in &labels[i + 1..] {
            let (x, y) = (a.incidence(lower, upper), b.incidence(lower, upper));
            if x != y {
                return Some(Certificate::Incidence { lower, upper, left: x, right: y });
            }
        }
    }
    let (pa, pb) = (invariant_profile(a), invariant_profile(b));
    if pa != pb {
        for sig in &pa.signatures {
            let left_count = pa.signatures.iter().filter(|s| *s == sig).count();
            let right_count = pb.signatures.iter().filter(|s| *s == sig).count();
            if left_count != right_count {
                return Some(Certificate::Signatures { left: sig.clone(), left_count, right_count });
            }
        }
    }
    None
}

/// Label-preserving order isomorphism by backtracking over nodes with equal signatures.
pub fn is_isomorphic(a: &LabeledPoset, b: &LabeledPoset) -> IsoVerdict {
    if let Some(cert) = invariant_mismatch(a, b) {
        return IsoVerdict::NotIsomorphic(cert);
    }
    let sig_a: Vec<NodeSignature> = (0..a.len()).map(|i| a.signature(i)).collect();
    let sig_b: Vec<NodeSignature> = (0..b.len()).map(|i| b.signature(i)).collect();
    let candidates: Vec<Vec<usize>> = sig_a
        .iter()
        .map(|s| (0..b.len()).filter(|&j| sig_b[j] == *s).collect())
        .collect();
    let mut image = vec![usize::MAX; a.len()];
    let mut used = vec![false; b.len()];
    if extend(a, b, &candidates, 0, &mut image, &mut used) {
        IsoVerdict::Isomorphic(
            image
                .iter()
                .enumerate()
                .map(|(i, &j)| (a.names[i].clone(), b.names[j].clone()))
                .collect(),
        )
    } else {
        IsoVerdict::NotIsomorphic(Certificate::NoIsomorphism)
    }
}

fn extend(
    a: &LabeledPoset,
    b: &LabeledPoset,
    candidates: &[Vec<usize>],
    i: usize,
    image: &mut [usize],
    used: &mut [bool],
) -> bool {
    if i == a.len() {
        return true;
    }
    for &j in &candidates[i] {
        if used[j] {
            continue;
        }
        let consistent = (0..i).all(|m| {
            let jm = image[m];
            a.leq[m][i] == b.leq[jm][j] && a.leq[i][m] == b.leq[j][jm]
        });
        if !consistent {
            continue;
        }
        image[i] = j;
        used[j] = true;
        if extend(a, b, candidates, i + 1, image, used) {
            return true;
        }
        used[j] = false;
    }
    image[i] = usize::MAX;
    false
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CellEquivalenceVerdict {
    NotCellEquivalent(Certificate),
    /// Rest-point counts agree and the face posets are isomorphic via the
    /// mapping. This does not establish cell equivalence.
    NecessaryConditionsPass(Vec<(String, String)>),
}

impl CellEquivalenceVerdict {
    pub fn refuted(&self) -> bool {
        matches!(self, CellEquivalenceVerdict::NotCellEquivalent(_))
    }
}

pub fn cell_equivalence_verdict(a: &FlowSystem, b: &FlowSystem) -> Result<CellEquivalenceVerdict, PosetError> {
    let (pa, pb) = (face_poset(a)?, face_poset(b)?);
    let (ca, cb) = (a.rest_counts(), b.rest_counts());
    for index in 0..ca.len().max(cb.len()) {
        let (x, y) = (ca.get(index).copied().unwrap_or(0), cb.get(index).copied().unwrap_or(0));
        if x != y {
            return Ok(CellEquivalenceVerdict::NotCellEquivalent(Certificate::LabelCounts {
                label: index as u32,
                left: x,
                right: y,
            }));
        }
    }
    Ok(match is_isomorphic(&pa, &pb) {
        IsoVerdict::Isomorphic(m) => CellEquivalenceVerdict::NecessaryConditionsPass(m),
        IsoVerdict::NotIsomorphic(c) => CellEquivalenceVerdict::NotCellEquivalent(c),
    })
}

/// Partition of `systems` (all gradient-like) into face-poset isomorphism
/// classes. Classes and members keep input order.
pub fn classify(systems: &[FlowSystem]) -> Result<Vec<Vec<usize>>, PosetError> {
    let posets = systems.iter().map(face_poset).collect::<Result<Vec<_>, _>>()?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, p) in posets.iter().enumerate() {
        match classes.iter_mut().find(|c| is_isomorphic(&posets[c[0]], p).is_isomorphic()) {
            Some(class) => class.push(i),
            None => classes.push(vec![i]),
        }
    }
    Ok(classes)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusReport {
    pub resolutions: Vec<Resolution>,
    /// Indices into `resolutions`; the first member is the representative.
    pub classes: Vec<Vec<usize>>,
}

impl CensusReport {
    pub fn class_count(&self) -> usize {
        self.classes.len()
    }

    pub fn class_of(&self, resolution: usize) -> Option<usize> {
        self.classes.iter().position(|c| c.contains(&resolution))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CensusError {
    Perturb(PerturbError),
    Poset(PosetError),
}

impl fmt::Display for CensusError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CensusError::Perturb(e) => write!(f, "{e}"),
            CensusError::Poset(e) => write!(f, "{e}"),
        }
    }
}

impl core::error::Error for CensusError {}

/// All gradient-like resolutions of a surface flow, grouped by face-poset isomorphism.
pub fn census(s: &FlowSystem) -> Result<CensusReport, CensusError> {
    let resolutions = resolve_all(s).map_err(CensusError::Perturb)?;
    let systems: Vec<FlowSystem> = resolutions.iter().map(|r| r.system.clone()).collect();
    let classes = classify(&systems).map_err(CensusError::Poset)?;
    Ok(CensusReport { resolutions, classes })
}
