//! Generators and independent oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::PathBuf;

use msflow::msf;
use msflow_core::{CriticalElement, FlowSystem, LabeledPoset};
use proptest::collection::vec;
use proptest::prelude::*;

pub fn fixture_path(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn fixture_text(name: &str) -> String {
    std::fs::read_to_string(fixture_path(name)).unwrap()
}

pub fn fixture(name: &str) -> FlowSystem {
    msf::parse(&fixture_text(&format!("{name}.msf"))).unwrap()
}

pub const SYSTEM_FIXTURES: &[&str] = &[
    "fig3", "fig3-X1", "fig3-X2", "fig4", "fig4-X1", "fig4-X2", "fig4-X3", "fig5", "fig6",
];

pub fn counts(pairs: &[(&str, u32)]) -> BTreeMap<String, u32> {
    pairs.iter().map(|&(n, c)| (n.to_string(), c)).collect()
}

/// Orders elements so that every allowed connection goes strictly down.
fn potential(e: &CriticalElement) -> usize {
    2 * e.index + usize::from(e.is_orbit())
}

fn allowed(n: usize, elements: &[CriticalElement], a: usize, b: usize) -> bool {
    let (x, y) = (&elements[a], &elements[b]);
    let (u, s) = (x.unstable_dim(), y.stable_dim(n));
    a != b
        && u + s > n
        && !x.is_attractor()
        && !y.is_repeller(n)
        && (potential(x) > potential(y) || (potential(x) == potential(y) && a > b))
}

/// Random systems that pass the standard validation rules, in dimensions 1 to 3.
pub fn valid_system() -> impl Strategy<Value = FlowSystem> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                "[A-Za-z][A-Za-z_]{0,3}",
                vec((any::<bool>(), 0..=n, any::<bool>()), 0..=9),
                vec((any::<u8>(), any::<u8>(), 1u32..=4), 0..=24),
                proptest::option::of("[A-Za-z0-9]([A-Za-z0-9 ,.()-]{0,20}[A-Za-z0-9])?"),
                proptest::option::of(vec(0usize..4, n + 1)),
            )
        })
        .prop_map(|(n, prefix, raw, pairs, label, betti)| {
            let elements: Vec<CriticalElement> = raw
                .iter()
                .enumerate()
                .map(|(i, &(orbit, index, twisted))| {
                    let name = format!("{prefix}{i}");
                    if orbit {
                        CriticalElement::orbit(name, index % n, twisted)
                    } else {
                        CriticalElement::rest(name, index)
                    }
                })
                .collect();
            let mut s = FlowSystem::new(n);
            s.label = label;
            s.expected_betti = betti;
            for e in &elements {
                s.add_element(e.clone()).unwrap();
            }
            if !elements.is_empty() {
                for (a, b, c) in pairs {
                    let (a, b) = (a as usize % elements.len(), b as usize % elements.len());
                    if allowed(n, &elements, a, b) && s.count(&elements[a].name, &elements[b].name) == 0 {
                        s.connect(&elements[a].name, &elements[b].name, c).unwrap();
                    }
                }
            }
            s
        })
}

/// `Σ (−1)^index` over rest points, straight from the element list.
pub fn alternating_rest_points(s: &FlowSystem) -> i64 {
    s.elements
        .iter()
        .filter(|e| e.is_rest())
        .map(|e| if e.index % 2 == 0 { 1 } else { -1 })
        .sum()
}

/// Rank over GF(2) as log2 of the size of the row space, found by
/// enumerating every subset of rows. Rows are bit masks.
pub fn brute_force_rank(rows: &[u32]) -> usize {
    if rows.iter().all(|&r| r < 64) {
        let mut span = 0u64;
        for subset in 0u32..(1 << rows.len()) {
            let v = rows.iter().enumerate().filter(|(i, _)| subset >> i & 1 == 1).fold(0, |v, (_, r)| v ^ r);
            span |= 1 << v;
        }
        return span.count_ones().trailing_zeros() as usize;
    }
    let mut span = std::collections::HashSet::new();
    for subset in 0u32..(1 << rows.len()) {
        let mut v = 0;
        for (i, r) in rows.iter().enumerate() {
            if subset >> i & 1 == 1 {
                v ^= r;
            }
        }
        span.insert(v);
    }
    span.len().trailing_zeros() as usize
}

/// Integer matrix product reduced mod 2.
pub fn product_mod2(a: &[Vec<u8>], b: &[Vec<u8>]) -> Vec<Vec<u8>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| ((0..inner).map(|k| u32::from(row[k]) * u32::from(b[k][j])).sum::<u32>() % 2) as u8)
                .collect()
        })
        .collect()
}

/// Node names with labels, then strict relations.
pub type PosetParts = (Vec<(String, u32)>, Vec<(String, String)>);

/// Random labelled posets on up to `max` nodes: relations only go from lower
/// to higher position, so the result is always acyclic.
pub fn random_poset(max: usize) -> impl Strategy<Value = PosetParts> {
    (1..=max)
        .prop_flat_map(|n| (vec(0u32..4, n), vec(any::<bool>(), n * (n - 1) / 2)))
        .prop_map(|(labels, edges)| {
            let n = labels.len();
            let nodes: Vec<(String, u32)> = labels.iter().enumerate().map(|(i, &l)| (format!("v{i}"), l)).collect();
            let mut less = Vec::new();
            let mut e = edges.iter();
            for i in 0..n {
                for j in i + 1..n {
                    if *e.next().unwrap() {
                        less.push((nodes[i].0.clone(), nodes[j].0.clone()));
                    }
                }
            }
            (nodes, less)
        })
}

/// Checks that `mapping` is a label- and order-preserving bijection `a → b`.
pub fn is_order_isomorphism(a: &LabeledPoset, b: &LabeledPoset, mapping: &[(String, String)]) -> bool {
    let image: BTreeMap<&str, &str> = mapping.iter().map(|(x, y)| (x.as_str(), y.as_str())).collect();
    let targets: std::collections::BTreeSet<&str> = image.values().copied().collect();
    a.len() == b.len()
        && image.len() == a.len()
        && targets.len() == b.len()
        && a.names().iter().all(|x| image.get(x.as_str()).is_some_and(|y| a.label(x) == b.label(y)))
        && a.names().iter().all(|x| {
            a.names()
                .iter()
                .all(|y| a.leq(x, y) == b.leq(image[x.as_str()], image[y.as_str()]))
        })
}
