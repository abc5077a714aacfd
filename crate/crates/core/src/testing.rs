//! Hand-built copies of the shipped fixture systems, for unit tests.

use crate::flow::FlowSystem;
use alloc::vec;

fn build(dim: usize, rest: &[(&str, usize)], orbits: &[(&str, usize, bool)], conns: &[(&str, &str, u32)]) -> FlowSystem {
    let mut s = FlowSystem::new(dim);
    for &(n, i) in rest {
        s.add_rest(n, i).unwrap();
    }
    for &(n, i, t) in orbits {
        s.add_orbit(n, i, t).unwrap();
    }
    for &(a, b, c) in conns {
        s.connect(a, b, c).unwrap();
    }
    s
}

/// Three sinks, one saddle, one repelling orbit on S².
pub fn fig3() -> FlowSystem {
    let mut s = build(
        2,
        &[("q0", 0), ("q1", 0), ("q2", 0), ("s", 1)],
        &[("gamma", 1, false)],
        &[
            ("s", "q1", 1),
            ("s", "q2", 1),
            ("gamma", "q0", 1),
            ("gamma", "q1", 1),
            ("gamma", "q2", 1),
            ("gamma", "s", 2),
        ],
    );
    s.expected_betti = Some(vec![1, 0, 1]);
    s
}

const FIG4_BASE: &[(&str, &str, u32)] = &[
    ("s1", "q1", 1),
    ("s1", "q2", 1),
    ("s2", "q1", 1),
    ("s2", "q2", 1),
    ("s3", "q1", 1),
    ("s3", "q3", 1),
    ("s4", "q2", 1),
    ("s4", "q3", 1),
    ("r1", "s1", 1),
    ("r1", "s2", 1),
    ("r1", "q1", 1),
    ("r1", "q2", 1),
    ("r2", "s2", 1),
    ("r2", "s3", 1),
    ("r2", "s4", 1),
    ("r2", "q1", 1),
    ("r2", "q2", 1),
    ("r2", "q3", 1),
];

const FIG4_REST: &[(&str, usize)] = &[
    ("q0", 0),
    ("q1", 0),
    ("q2", 0),
    ("q3", 0),
    ("s1", 1),
    ("s2", 1),
    ("s3", 1),
    ("s4", 1),
    ("r1", 2),
    ("r2", 2),
];

const FIG4_GAMMA_OUT: &[(&str, u32)] = &[("q0", 1), ("q1", 1), ("q2", 1), ("q3", 1), ("s1", 1), ("s3", 1), ("s4", 1)];

/// Four sinks, four saddles, two sources and a repelling orbit around three of the sinks.
pub fn fig4() -> FlowSystem {
    let mut s = build(2, FIG4_REST, &[("gamma", 1, false)], FIG4_BASE);
    for &(t, c) in FIG4_GAMMA_OUT {
        s.connect("gamma", t, c).unwrap();
    }
    s.expected_betti = Some(vec![1, 0, 1]);
    s
}

/// Gradient-like resolution of [`fig4`] whose new saddle runs to `q0` and `inner`.
pub fn fig4_resolved(inner: &str) -> FlowSystem {
    let mut s = build(2, FIG4_REST, &[], FIG4_BASE);
    s.add_rest("p_gamma", 2).unwrap();
    s.add_rest("q_gamma", 1).unwrap();
    for &(t, c) in FIG4_GAMMA_OUT {
        s.connect("p_gamma", t, c).unwrap();
    }
    s.connect("p_gamma", "q_gamma", 2).unwrap();
    s.connect("q_gamma", "q0", 1).unwrap();
    s.connect("q_gamma", inner, 1).unwrap();
    s.expected_betti = Some(vec![1, 0, 1]);
    s
}

/// Repelling orbit with four sinks and two saddles on S².
pub fn fig5() -> FlowSystem {
    let mut s = build(
        2,
        &[("q1", 0), ("q2", 0), ("q3", 0), ("q4", 0), ("s1", 1), ("s2", 1)],
        &[("gamma", 1, false)],
        &[
            ("s1", "q1", 1),
            ("s1", "q2", 1),
            ("s2", "q3", 1),
            ("s2", "q4", 1),
            ("gamma", "q1", 1),
            ("gamma", "q2", 1),
            ("gamma", "q3", 1),
            ("gamma", "q4", 1),
            ("gamma", "s1", 2),
            ("gamma", "s2", 2),
        ],
    );
    s.expected_betti = Some(vec![1, 0, 1]);
    s
}

/// The S³ system with an attracting orbit whose complex fails `d² = 0`.
pub fn fig6() -> FlowSystem {
    let mut s = FlowSystem::new(3);
    s.add_rest("q0", 0).unwrap();
    s.add_orbit("gamma", 0, false).unwrap();
    for (n, i) in [("s1", 1), ("s2", 1), ("p1", 2), ("p2", 2), ("p3", 2), ("r1", 3), ("r2", 3)] {
        s.add_rest(n, i).unwrap();
    }
    for (a, b, c) in [
        ("s1", "q0", 1),
        ("s1", "gamma", 1),
        ("s2", "gamma", 2),
        ("p1", "q0", 1),
        ("p1", "s1", 2),
        ("p1", "gamma", 1),
        ("p2", "s2", 1),
        ("p2", "gamma", 1),
        ("p3", "s2", 1),
        ("p3", "gamma", 1),
        ("r1", "p1", 1),
        ("r1", "p2", 1),
        ("r1", "p3", 1),
        ("r2", "p1", 1),
        ("r2", "p2", 1),
        ("r2", "p3", 1),
    ] {
        s.connect(a, b, c).unwrap();
    }
    s.expected_betti = Some(vec![1, 0, 0, 1]);
    s
}
