mod common;

use common::{counts, fixture, fixture_text, valid_system, SYSTEM_FIXTURES};
use msflow::msc::{self, MscErrorKind};
use msflow::msf::{self, MsfErrorKind};
use msflow::pos::{self, PosErrorKind};
use msflow_core::perturb::enumerate_choices_2d;
use msflow_core::{ChoiceDescriptor, FlowSystem};
use proptest::prelude::*;

fn msf_error(text: &str) -> (usize, MsfErrorKind) {
    let e = msf::parse(text).unwrap_err();
    (e.line, e.kind)
}

#[test]
fn minimal_system() {
    let s = msf::parse("dim 2\nrest q0 0\nrest s1 1\nconn s1 q0 2\n").unwrap();
    assert_eq!(s.dimension, 2);
    assert_eq!(s.elements.len(), 2);
    assert_eq!(s.count("s1", "q0"), 2);
    assert!(!s.alpha("s1", "q0"));
}

#[test]
fn single_orbit() {
    let s = msf::parse("dim 2\norbit g 1 untwisted\n").unwrap();
    let g = s.element("g").unwrap();
    assert!(g.is_orbit() && !g.is_twisted());
    assert_eq!(g.index, 1);
}

#[test]
fn comments_blank_lines_and_labels() {
    let text = "# header\n\n  dim 2   # trailing\nlabel two  words, kept\nexpect-betti 1 0 1\nrest q 0 # sink\n";
    let s = msf::parse(text).unwrap();
    assert_eq!(s.label.as_deref(), Some("two  words, kept"));
    assert_eq!(s.expected_betti, Some(vec![1, 0, 1]));
    assert_eq!(s.elements.len(), 1);
}

#[test]
fn unknown_element() {
    let (line, kind) = msf_error("dim 2\nconn a b 1\n");
    assert_eq!(line, 2);
    assert_eq!(kind, MsfErrorKind::UnknownElement("a".into()));
    assert_eq!(msf::parse("dim 2\nconn a b 1\n").unwrap_err().to_string(), "line 2: unknown element 'a'");
}

#[test]
fn errors_carry_line_numbers() {
    let cases: &[(&str, usize, MsfErrorKind)] = &[
        ("dim 2\nrest q0\n", 2, MsfErrorKind::Syntax("expected 'rest <name> <index>'".into())),
        ("dim 2\nrest q0 0\nrest q0 1\n", 3, MsfErrorKind::DuplicateElement("q0".into())),
        ("dim 2\nrest a 1\nrest b 0\nconn a b 1\nconn a b 3\n", 5, MsfErrorKind::DuplicateConnection("a".into(), "b".into())),
        ("dim 2\nrest a 1\nrest b 0\nconn a b 0\n", 4, MsfErrorKind::NonPositiveCount("0".into())),
        ("dim 2\nrest a 1\nrest b 0\nconn a b -2\n", 4, MsfErrorKind::NonPositiveCount("-2".into())),
        ("dim 2\nrest a 1\nconn a a 1\n", 3, MsfErrorKind::SelfConnection("a".into())),
        ("dim 2\nsaddle s 1\n", 2, MsfErrorKind::UnknownDirective("saddle".into())),
        ("dim 2\ndim 3\n", 2, MsfErrorKind::RepeatedDirective("dim")),
        ("dim 2\nlabel a\nlabel b\n", 3, MsfErrorKind::RepeatedDirective("label")),
        ("rest q 0\n", 0, MsfErrorKind::MissingDim),
        ("dim 2\nrest 1q 0\n", 2, MsfErrorKind::InvalidName("1q".into())),
        ("dim 2\norbit g 1 sideways\n", 2, MsfErrorKind::Syntax("expected 'orbit <name> <index> <twisted|untwisted>'".into())),
        ("dim 0\n", 1, MsfErrorKind::Syntax("expected 'dim <n>'".into())),
        ("dim 2\nexpect-betti 1 x\n", 2, MsfErrorKind::Syntax("expected 'expect-betti <b0> <b1> ...'".into())),
    ];
    for (text, line, kind) in cases {
        assert_eq!(msf_error(text), (*line, kind.clone()), "{text:?}");
    }
}

#[test]
fn parse_does_not_validate() {
    let s = msf::parse("dim 2\nrest a 1\nrest b 1\nconn a b 1\n").unwrap();
    assert!(!s.validate(false).is_empty());
}

#[test]
fn empty_system_serializes_to_dim_line() {
    assert_eq!(msf::serialize(&FlowSystem::new(3)), "dim 3\n");
}

#[test]
fn twisted_orbit_line() {
    let mut s = FlowSystem::new(2);
    s.add_orbit("g", 0, true).unwrap();
    assert!(msf::serialize(&s).lines().any(|l| l == "orbit g 0 twisted"));
}

#[test]
fn serialization_order() {
    let mut s = FlowSystem::new(2);
    s.label = Some("x".into());
    s.expected_betti = Some(vec![1, 0, 1]);
    for (n, i) in [("z", 0), ("a", 0), ("m", 1)] {
        s.add_rest(n, i).unwrap();
    }
    s.connect("m", "z", 1).unwrap();
    s.connect("m", "a", 1).unwrap();
    assert_eq!(
        msf::serialize(&s),
        "dim 2\nlabel x\nexpect-betti 1 0 1\nrest z 0\nrest a 0\nrest m 1\nconn m a 1\nconn m z 1\n"
    );
}

#[test]
fn fixtures_round_trip() {
    for name in SYSTEM_FIXTURES {
        let s = fixture(name);
        assert_eq!(msf::parse(&msf::serialize(&s)).unwrap(), s, "{name}");
    }
}

#[test]
fn header_lines_are_comments() {
    let s = fixture("fig3");
    let text = msf::serialize_with_header(&s, &["one".into(), String::new(), "two".into()]);
    assert!(text.starts_with("# one\n#\n# two\ndim 2\n"));
    assert_eq!(msf::parse(&text).unwrap(), s);
}

proptest! {
    #[test]
    fn random_systems_round_trip(s in valid_system()) {
        prop_assert!(s.validate(false).is_empty(), "{:?}", s.validate(false));
        prop_assert!(msf::is_representable(&s));
        let text = msf::serialize(&s);
        let back = msf::parse(&text).unwrap();
        prop_assert_eq!(&back, &s);
        prop_assert_eq!(msf::serialize(&back), text);
    }
}

#[test]
fn descriptor_blocks() {
    let text = "orbit gamma\npout q0 1\nqout q1 2\n\norbit delta\nnew x y\npin r 1\nqin r 1\n";
    let ds = msc::parse(text).unwrap();
    assert_eq!(ds.len(), 2);
    assert_eq!((ds[0].p_name.as_str(), ds[0].q_name.as_str()), ("p_gamma", "q_gamma"));
    assert_eq!(ds[0].p_out, counts(&[("q0", 1)]));
    assert_eq!(ds[0].q_out, counts(&[("q1", 2)]));
    assert_eq!((ds[1].p_name.as_str(), ds[1].q_name.as_str()), ("x", "y"));
    assert_eq!(ds[1].p_in, counts(&[("r", 1)]));
    assert_eq!(ds[1].q_in, counts(&[("r", 1)]));
}

#[test]
fn descriptor_errors() {
    let cases: &[(&str, usize, MscErrorKind)] = &[
        ("pout q0 1\n", 1, MscErrorKind::OutsideBlock("pout".into())),
        ("orbit g\npout q0 0\n", 2, MscErrorKind::NonPositiveCount("0".into())),
        ("orbit g\npout q0 1\npout q0 2\n", 3, MscErrorKind::DuplicateEntry { directive: "pout".into(), element: "q0".into() }),
        ("orbit g\nnew a b\nnew c d\n", 3, MscErrorKind::RepeatedNew("g".into())),
        ("orbit g\nout q0 1\n", 2, MscErrorKind::UnknownDirective("out".into())),
        ("orbit g\norbit g\n", 2, MscErrorKind::DuplicateOrbit("g".into())),
        ("# nothing\n", 0, MscErrorKind::Empty),
    ];
    for (text, line, kind) in cases {
        let e = msc::parse(text).unwrap_err();
        assert_eq!((e.line, e.kind), (*line, kind.clone()), "{text:?}");
    }
}

#[test]
fn enumerated_descriptors_round_trip() {
    for name in ["fig3", "fig4", "fig5"] {
        let ds = enumerate_choices_2d(&fixture(name), "gamma").unwrap();
        assert_eq!(msc::parse(&msc::serialize(&ds[..1])).unwrap(), ds[..1].to_vec());
        for d in ds {
            assert_eq!(msc::parse(&msc::serialize(std::slice::from_ref(&d))).unwrap(), vec![d]);
        }
    }
    let mut renamed = ChoiceDescriptor::with_names("g", "a", "b");
    renamed.q_in.insert("r".into(), 3);
    assert_eq!(msc::parse(&msc::serialize(&[renamed.clone()])).unwrap(), vec![renamed]);
}

#[test]
fn poset_fixtures() {
    let y = pos::parse(&fixture_text("fig2-Y.pos")).unwrap();
    let yp = pos::parse(&fixture_text("fig2-Yprime.pos")).unwrap();
    assert_eq!(y.names(), ["a", "b", "c", "d"]);
    assert_eq!(yp.names(), ["a'", "b'", "c'", "d'"]);
    assert_eq!(yp.label("d'"), Some(2));
    assert!(yp.leq("a'", "d'"), "closure is computed on load");
    assert!(!y.leq("b", "d"));
    for p in [y, yp] {
        assert_eq!(pos::parse(&pos::serialize(&p)).unwrap(), p);
    }
}

#[test]
fn poset_errors() {
    let cases: &[(&str, usize, PosErrorKind)] = &[
        ("node a\n", 1, PosErrorKind::Syntax("expected 'node <name> <label>'".into())),
        ("node a 0\nnode a 1\n", 2, PosErrorKind::DuplicateNode("a".into())),
        ("node a 0\nlt a b\n", 2, PosErrorKind::UnknownNode("b".into())),
        ("node a 0\nlt a a\n", 2, PosErrorKind::SelfRelation("a".into())),
        ("edge a b\n", 1, PosErrorKind::UnknownDirective("edge".into())),
        ("node 'a 0\n", 1, PosErrorKind::InvalidName("'a".into())),
    ];
    for (text, line, kind) in cases {
        let e = pos::parse(text).unwrap_err();
        assert_eq!((e.line, e.kind), (*line, kind.clone()), "{text:?}");
    }
    let cyclic = pos::parse("node a 0\nnode b 1\nlt a b\nlt b a\n").unwrap_err();
    assert!(matches!(cyclic.kind, PosErrorKind::Order(_)));
}
