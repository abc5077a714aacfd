//! The GF(2) chain complex generated by rest points and two copies of every
//! closed orbit.
//!
//! Degree `k` is spanned by the rest points of index `k`, the orbits of index
//! `k` (the `γ⁻` copies) and the orbits of index `k − 1` (the `γ⁺` copies).
//! The coefficient of `β′` in `∂β` is the parity of the number of components
//! of `W^u(β) ∩ W^s(β′)`, taken from the origins of the two basis elements.
//! Nothing guarantees that `∂∂ = 0`, so [`ChainComplexGF2::check_d2`] reports
//! the failures and [`ChainComplexGF2::betti`] refuses to run when there are any.

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use crate::flow::{FlowSystem, Violation};
use crate::gf2::MatrixGF2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Flavor {
    /// A rest point.
    Plain,
    /// The copy of an orbit sitting in the degree of its index.
    Minus,
    /// The copy of an orbit one degree higher.
    Plus,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasisElement {
    pub origin: String,
    pub flavor: Flavor,
    pub degree: usize,
}

impl BasisElement {
    pub fn plain(origin: impl Into<String>, degree: usize) -> Self {
        BasisElement { origin: origin.into(), flavor: Flavor::Plain, degree }
    }

    pub fn minus(origin: impl Into<String>, degree: usize) -> Self {
        BasisElement { origin: origin.into(), flavor: Flavor::Minus, degree }
    }

    pub fn plus(origin: impl Into<String>, degree: usize) -> Self {
        BasisElement { origin: origin.into(), flavor: Flavor::Plus, degree }
    }
}

/// Renders as the origin name, with `-` or `+` appended for orbit copies.
impl fmt::Display for BasisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.origin)?;
        match self.flavor {
            Flavor::Plain => Ok(()),
            Flavor::Minus => f.write_str("-"),
            Flavor::Plus => f.write_str("+"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComplexError {
    Invalid(Vec<Violation>),
    NotABijection(String),
    DegreeMismatch { from: BasisElement, to: BasisElement },
    ShapeMismatch { degree: usize, left: usize, right: usize },
}

impl fmt::Display for ComplexError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComplexError::Invalid(v) => {
                write!(f, "system is invalid ({} violation", v.len())?;
                if v.len() != 1 {
                    f.write_str("s")?;
                }
                f.write_str(")")?;
                for violation in v {
                    write!(f, "\n  {violation}")?;
                }
                Ok(())
            }
            ComplexError::NotABijection(why) => write!(f, "correspondence is not a bijection: {why}"),
            ComplexError::DegreeMismatch { from, to } => write!(
                f,
                "correspondence sends {from} (degree {}) to {to} (degree {})",
                from.degree, to.degree
            ),
            ComplexError::ShapeMismatch { degree, left, right } => {
                write!(f, "degree {degree} has {left} basis elements on one side and {right} on the other")
            }
        }
    }
}

impl core::error::Error for ComplexError {}

/// Graded bases `B_0..=B_top` and boundary matrices `∂_k : C_k → C_{k−1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplexGF2 {
    bases: Vec<Vec<BasisElement>>,
    // boundaries[k] has rows indexed by B_{k-1} and columns by B_k; boundaries[0] is 0 x |B_0|.
    boundaries: Vec<MatrixGF2>,
}

/// A nonzero entry of `∂_{k−1} ∘ ∂_k`: `source ∈ B_k` hits `target ∈ B_{k−2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct D2Violation {
    pub degree: usize,
    pub source: BasisElement,
    pub target: BasisElement,
}

impl fmt::Display for D2Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d{}∘d{}: {} -> {} has coefficient 1",
            self.degree - 1,
            self.degree,
            self.source,
            self.target
        )
    }
}

/// Builds the complex of a system that passes non-strict validation.
pub fn build_complex(s: &FlowSystem) -> Result<ChainComplexGF2, ComplexError> {
    let violations = s.validate(false);
    if !violations.is_empty() {
        return Err(ComplexError::Invalid(violations));
    }
    Ok(assemble(s))
}

/// Builds the complex without validating first. Entries are still well
/// defined for any system; this is what the perturbation checks use so that
/// deliberately broken systems can be inspected.
pub fn assemble(s: &FlowSystem) -> ChainComplexGF2 {
    let top = s
        .elements
        .iter()
        .map(|e| if e.is_orbit() { e.index + 1 } else { e.index })
        .max()
        .unwrap_or(0)
        .max(s.dimension);
    let mut bases: Vec<Vec<BasisElement>> = (0..=top).map(|_| Vec::new()).collect();
    for e in s.rest_points() {
        bases[e.index].push(BasisElement::plain(e.name.clone(), e.index));
    }
    for e in s.orbits() {
        bases[e.index].push(BasisElement::minus(e.name.clone(), e.index));
    }
    for e in s.orbits() {
        bases[e.index + 1].push(BasisElement::plus(e.name.clone(), e.index + 1));
    }
    let boundaries = (0..=top)
        .map(|k| {
            if k == 0 {
                return MatrixGF2::zeros(0, bases[0].len());
            }
            let (rows, cols) = (&bases[k - 1], &bases[k]);
            MatrixGF2::from_fn(rows.len(), cols.len(), |i, j| {
                rows[i].origin != cols[j].origin && s.alpha(&cols[j].origin, &rows[i].origin)
            })
        })
        .collect();
    ChainComplexGF2 { bases, boundaries }
}

impl ChainComplexGF2 {
    pub fn top_degree(&self) -> usize {
        self.bases.len() - 1
    }

    /// `B_k`; empty beyond the top degree.
    pub fn basis(&self, k: usize) -> &[BasisElement] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    /// `∂_k`, or `None` beyond the top degree.
    pub fn boundary(&self, k: usize) -> Option<&MatrixGF2> {
        self.boundaries.get(k)
    }

    /// Coefficient of `target` in `∂ source`, or `None` if they are not in adjacent degrees.
    pub fn coefficient(&self, source: &BasisElement, target: &BasisElement) -> Option<bool> {
        if source.degree != target.degree + 1 {
            return None;
        }
        let k = source.degree;
        let col = self.basis(k).iter().position(|b| b == source)?;
        let row = self.basis(k - 1).iter().position(|b| b == target)?;
        Some(self.boundaries[k].get(row, col))
    }

    pub fn find(&self, label: &str) -> Option<&BasisElement> {
        self.bases.iter().flatten().find(|b| alloc::format!("{b}") == label)
    }

    /// Every nonzero entry of every composite `∂_{k−1}∂_k`.
    pub fn check_d2(&self) -> Vec<D2Violation> {
        let mut out = Vec::new();
        for k in 2..=self.top_degree() {
            let product = self.boundaries[k - 1]
                .multiply(&self.boundaries[k])
                .expect("consecutive boundary shapes agree");
            // column-major so that violations group by source
            for j in 0..product.cols() {
                for i in 0..product.rows() {
                    if product.get(i, j) {
                        out.push(D2Violation {
                            degree: k,
                            source: self.bases[k][j].clone(),
                            target: self.bases[k - 2][i].clone(),
                        });
                    }
                }
            }
        }
        out
    }

    /// GF(2) Betti numbers `b_0..=b_top`, or the `d²` violations if the
    /// complex is not a chain complex.
    pub fn betti(&self) -> Result<Vec<usize>, Vec<D2Violation>> {
        let violations = self.check_d2();
        if !violations.is_empty() {
            return Err(violations);
        }
        let ranks: Vec<usize> = self.boundaries.iter().map(MatrixGF2::rank).collect();
        Ok((0..=self.top_degree())
            .map(|k| {
                let above = ranks.get(k + 1).copied().unwrap_or(0);
                self.bases[k].len() - ranks[k] - above
            })
            .collect())
    }

    /// `Σ (−1)^k |B_k|`.
    pub fn euler_characteristic(&self) -> i64 {
        self.bases
            .iter()
            .enumerate()
            .map(|(k, b)| if k % 2 == 0 { b.len() as i64 } else { -(b.len() as i64) })
            .sum()
    }
}

/// A degree-preserving bijection between the bases of two complexes.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Correspondence {
    map: BTreeMap<BasisElement, BasisElement>,
}

impl Correspondence {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, from: BasisElement, to: BasisElement) {
        self.map.insert(from, to);
    }

    /// Pairs every element of `a` with the element of `b` that renders the
    /// same, except where `overrides` says otherwise.
    pub fn by_label(
        a: &ChainComplexGF2,
        b: &ChainComplexGF2,
        overrides: &[(BasisElement, BasisElement)],
    ) -> Self {
        let mut map = BTreeMap::new();
        for x in a.bases.iter().flatten() {
            if let Some((_, to)) = overrides.iter().find(|(from, _)| from == x) {
                map.insert(x.clone(), to.clone());
            } else if let Some(y) = b.bases.iter().flatten().find(|y| y.origin == x.origin && y.flavor == x.flavor) {
                map.insert(x.clone(), y.clone());
            }
        }
        Correspondence { map }
    }

    pub fn get(&self, from: &BasisElement) -> Option<&BasisElement> {
        self.map.get(from)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&BasisElement, &BasisElement)> + '_ {
        self.map.iter()
    }
}

/// Cells where two boundary matrices disagree, labelled by the first complex's basis.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct MatrixDiff {
    /// `(k, row, column)` for every differing entry of `∂_k`.
    pub cells: Vec<(usize, BasisElement, BasisElement)>,
}

impl MatrixDiff {
    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn in_degree(&self, k: usize) -> impl Iterator<Item = (&BasisElement, &BasisElement)> + '_ {
        self.cells
            .iter()
            .filter(move |(d, _, _)| *d == k)
            .map(|(_, r, c)| (r, c))
    }

    pub fn degrees(&self) -> Vec<usize> {
        let mut d: Vec<usize> = self.cells.iter().map(|(k, _, _)| *k).collect();
        d.dedup();
        d
    }
}

/// Compares `a` and `b` entry by entry under `corr`.
pub fn compare_matrices(
    a: &ChainComplexGF2,
    b: &ChainComplexGF2,
    corr: &Correspondence,
) -> Result<MatrixDiff, ComplexError> {
    let top = a.top_degree().max(b.top_degree());
    // position of each element of b, per degree
    let mut positions: Vec<BTreeMap<&BasisElement, usize>> = Vec::new();
    for k in 0..=top {
        let (la, lb) = (a.basis(k).len(), b.basis(k).len());
        if la != lb {
            return Err(ComplexError::ShapeMismatch { degree: k, left: la, right: lb });
        }
        let mut image = BTreeMap::new();
        for x in a.basis(k) {
            let y = corr
                .get(x)
                .ok_or_else(|| ComplexError::NotABijection(alloc::format!("{x} has no image")))?;
            if y.degree != k {
                return Err(ComplexError::DegreeMismatch { from: x.clone(), to: y.clone() });
            }
            let pos = b
                .basis(k)
                .iter()
                .position(|z| z == y)
                .ok_or_else(|| ComplexError::NotABijection(alloc::format!("{y} is not a basis element")))?;
            if image.insert(y, pos).is_some() {
                return Err(ComplexError::NotABijection(alloc::format!("{y} is hit twice")));
            }
        }
        positions.push(image);
    }
    let mut cells = Vec::new();
    for k in 1..=top {
        for (j, col) in a.basis(k).iter().enumerate() {
            let bj = positions[k][corr.get(col).unwrap()];
            for (i, row) in a.basis(k - 1).iter().enumerate() {
                let bi = positions[k - 1][corr.get(row).unwrap()];
                if a.boundaries[k].get(i, j) != b.boundaries[k].get(bi, bj) {
                    cells.push((k, row.clone(), col.clone()));
                }
            }
        }
    }
    Ok(MatrixDiff { cells })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flow::FlowSystem;
    use crate::testing::{fig3, fig4_resolved, fig5, fig6};
    use alloc::format;
    use alloc::string::ToString;
    use alloc::vec;

    fn labels(b: &[BasisElement]) -> Vec<String> {
        b.iter().map(ToString::to_string).collect()
    }

    fn mat(rows: &[&[u8]]) -> MatrixGF2 {
        MatrixGF2::from_rows(rows).unwrap()
    }

    #[test]
    fn fig5_matrices() {
        let c = build_complex(&fig5()).unwrap();
        assert_eq!(labels(c.basis(2)), vec!["gamma+"]);
        assert_eq!(labels(c.basis(1)), vec!["s1", "s2", "gamma-"]);
        assert_eq!(labels(c.basis(0)), vec!["q1", "q2", "q3", "q4"]);
        assert_eq!(c.boundary(2).unwrap(), &mat(&[&[0], &[0], &[0]]));
        assert_eq!(
            c.boundary(1).unwrap(),
            &mat(&[&[1, 0, 1], &[1, 0, 1], &[0, 1, 1], &[0, 1, 1]])
        );
        assert_eq!(c.boundary(0).unwrap().shape(), (0, 4));
        assert_eq!(c.boundary(1).unwrap().rank(), 2);
    }

    #[test]
    fn fig6_matrices() {
        let c = build_complex(&fig6()).unwrap();
        assert_eq!(labels(c.basis(3)), vec!["r1", "r2"]);
        assert_eq!(labels(c.basis(2)), vec!["p1", "p2", "p3"]);
        assert_eq!(labels(c.basis(1)), vec!["s1", "s2", "gamma+"]);
        assert_eq!(labels(c.basis(0)), vec!["q0", "gamma-"]);
        assert_eq!(c.boundary(3).unwrap(), &mat(&[&[1, 1], &[1, 1], &[1, 1]]));
        assert_eq!(c.boundary(2).unwrap(), &mat(&[&[0, 0, 0], &[0, 1, 1], &[1, 1, 1]]));
        assert_eq!(c.boundary(1).unwrap(), &mat(&[&[1, 0, 0], &[1, 0, 0]]));
    }

    #[test]
    fn no_orbits_no_connections_gives_zero_differentials() {
        let mut s = FlowSystem::new(2);
        s.add_rest("a", 0).unwrap();
        s.add_rest("b", 1).unwrap();
        s.add_rest("c", 2).unwrap();
        let c = build_complex(&s).unwrap();
        assert!((0..=2).all(|k| c.boundary(k).unwrap().is_zero()));
        assert_eq!(c.betti().unwrap(), vec![1, 1, 1]);
    }

    #[test]
    fn d2_on_fixtures() {
        assert!(build_complex(&fig5()).unwrap().check_d2().is_empty());
        assert!(build_complex(&fig3()).unwrap().check_d2().is_empty());
        for inner in ["q1", "q2", "q3"] {
            assert!(build_complex(&fig4_resolved(inner)).unwrap().check_d2().is_empty());
        }
        let v = build_complex(&fig6()).unwrap().check_d2();
        assert_eq!(
            v,
            vec![
                D2Violation { degree: 3, source: BasisElement::plain("r1", 3), target: BasisElement::plus("gamma", 1) },
                D2Violation { degree: 3, source: BasisElement::plain("r2", 3), target: BasisElement::plus("gamma", 1) },
            ]
        );
        assert_eq!(format!("{}", v[0]), "d2∘d3: r1 -> gamma+ has coefficient 1");
    }

    #[test]
    fn betti_numbers() {
        assert_eq!(build_complex(&fig5()).unwrap().betti().unwrap(), vec![2, 1, 1]);
        assert_eq!(build_complex(&fig3()).unwrap().betti().unwrap(), vec![1, 0, 1]);
        for inner in ["q1", "q2", "q3"] {
            assert_eq!(build_complex(&fig4_resolved(inner)).unwrap().betti().unwrap(), vec![1, 0, 1]);
        }
        assert_eq!(build_complex(&fig6()).unwrap().betti().unwrap_err().len(), 2);
    }

    #[test]
    fn euler_characteristics() {
        assert_eq!(build_complex(&fig5()).unwrap().euler_characteristic(), 2);
        assert_eq!(build_complex(&fig6()).unwrap().euler_characteristic(), 0);
        let mut s = FlowSystem::new(3);
        s.add_orbit("a", 0, false).unwrap();
        s.add_orbit("b", 1, true).unwrap();
        s.add_orbit("c", 2, false).unwrap();
        assert_eq!(build_complex(&s).unwrap().euler_characteristic(), 0);
    }

    #[test]
    fn invalid_systems_are_refused() {
        let mut s = FlowSystem::new(2);
        s.add_rest("a", 1).unwrap();
        s.add_rest("b", 1).unwrap();
        s.connect("a", "b", 1).unwrap();
        assert!(matches!(build_complex(&s), Err(ComplexError::Invalid(v)) if v.len() == 1));
    }

    #[test]
    fn repelling_orbit_minus_row_is_zero() {
        for s in [fig3(), fig5()] {
            let c = build_complex(&s).unwrap();
            let row = c.basis(1).iter().position(|b| b.flavor == Flavor::Minus).unwrap();
            assert!(c.boundary(2).unwrap().row_is_zero(row));
        }
    }

    #[test]
    fn compare_with_itself() {
        let c = build_complex(&fig6()).unwrap();
        let diff = compare_matrices(&c, &c, &Correspondence::by_label(&c, &c, &[])).unwrap();
        assert!(diff.is_empty());
    }

    #[test]
    fn compare_rejects_bad_correspondences() {
        let a = build_complex(&fig5()).unwrap();
        let b = build_complex(&fig3()).unwrap();
        assert!(matches!(
            compare_matrices(&a, &b, &Correspondence::by_label(&a, &b, &[])),
            Err(ComplexError::ShapeMismatch { degree: 0, left: 4, right: 3 })
        ));
        let mut corr = Correspondence::by_label(&a, &a, &[]);
        corr.insert(BasisElement::plain("s1", 1), BasisElement::plain("q1", 0));
        assert!(matches!(compare_matrices(&a, &a, &corr), Err(ComplexError::DegreeMismatch { .. })));
        let mut corr = Correspondence::by_label(&a, &a, &[]);
        corr.insert(BasisElement::plain("s1", 1), BasisElement::plain("s2", 1));
        assert!(matches!(compare_matrices(&a, &a, &corr), Err(ComplexError::NotABijection(_))));
    }

    #[test]
    fn coefficient_lookup() {
        let c = build_complex(&fig6()).unwrap();
        assert_eq!(c.coefficient(&BasisElement::plain("s1", 1), &BasisElement::minus("gamma", 0)), Some(true));
        assert_eq!(c.coefficient(&BasisElement::plus("gamma", 1), &BasisElement::minus("gamma", 0)), Some(false));
        assert_eq!(c.coefficient(&BasisElement::plain("r1", 3), &BasisElement::plain("q0", 0)), None);
        assert_eq!(c.find("gamma+"), Some(&BasisElement::plus("gamma", 1)));
    }
}
