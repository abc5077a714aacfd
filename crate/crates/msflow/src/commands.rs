//! The computations behind each subcommand, returning [`Report`]s.

use std::fs;
use std::path::Path;

use msflow_core::complex::ChainComplexGF2;
use msflow_core::perturb::{apply_choice, enumerate_choices_2d};
use msflow_core::poset::{cell_equivalence_verdict, cell_name, census as run_census, classify, face_poset, CellEquivalenceVerdict};
use msflow_core::{build_complex, is_isomorphic, ChoiceDescriptor, FlowSystem, IsoVerdict, LabeledPoset};

use crate::fixtures::{load, load_choices, load_system, Input};
use crate::msc;
use crate::msf;
use crate::report::{basis_names, claim_facts, ChoiceFacts, D2Facts, DescriptorFacts, Facts, MatrixFacts, NodeFacts, Report, ViolationFacts};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_REFUSED: i32 = 2;

fn report(command: &str, inputs: &[&str], exit_code: i32, facts: Facts) -> Report {
    Report {
        command: command.to_string(),
        inputs: inputs.iter().map(ToString::to_string).collect(),
        exit_code,
        facts,
    }
}

fn failure(command: &str, inputs: &[&str], message: impl ToString) -> Report {
    report(command, inputs, EXIT_INPUT, Facts::Error { message: message.to_string() })
}

/// Loads a system and insists that it passes the standard rules.
fn valid_system(arg: &str) -> Result<(String, FlowSystem), String> {
    let (name, s) = load_system(arg).map_err(|e| e.to_string())?;
    require_valid(name, s)
}

fn require_valid(name: String, s: FlowSystem) -> Result<(String, FlowSystem), String> {
    let violations = s.validate(false);
    if violations.is_empty() {
        return Ok((name, s));
    }
    let mut msg = format!("{name} is not a valid system");
    for v in violations {
        msg.push_str(&format!("\n  {v}"));
    }
    Err(msg)
}

fn complex_of(arg: &str) -> Result<(FlowSystem, ChainComplexGF2), String> {
    let (_, s) = valid_system(arg)?;
    let c = build_complex(&s).map_err(|e| e.to_string())?;
    Ok((s, c))
}

pub fn validate(file: &str, strict: bool) -> Report {
    let (_, s) = match load_system(file) {
        Ok(x) => x,
        Err(e) => return failure("validate", &[file], e),
    };
    let violations: Vec<ViolationFacts> = s.validate(strict).iter().map(ViolationFacts::from).collect();
    let code = if violations.is_empty() { EXIT_OK } else { EXIT_INPUT };
    report(
        "validate",
        &[file],
        code,
        Facts::Validate {
            strict,
            elements: s.elements.len(),
            connections: s.connections.len(),
            violations,
        },
    )
}

pub fn complex(file: &str) -> Report {
    let (s, c) = match complex_of(file) {
        Ok(x) => x,
        Err(e) => return failure("complex", &[file], e),
    };
    let bases = (0..=c.top_degree()).map(|k| basis_names(&c, k)).collect();
    let boundaries = (1..=c.top_degree())
        .map(|k| MatrixFacts::new(k, basis_names(&c, k - 1), basis_names(&c, k), c.boundary(k).expect("degree in range")))
        .collect();
    report(
        "complex",
        &[file],
        EXIT_OK,
        Facts::Complex {
            label: s.label,
            bases,
            boundaries,
        },
    )
}

pub fn d2(file: &str) -> Report {
    let (_, c) = match complex_of(file) {
        Ok(x) => x,
        Err(e) => return failure("d2", &[file], e),
    };
    let products = (2..=c.top_degree())
        .map(|k| {
            let lower = c.boundary(k - 1).expect("degree in range");
            let upper = c.boundary(k).expect("degree in range");
            let product = lower.multiply(upper).expect("consecutive boundaries compose");
            MatrixFacts::new(k, basis_names(&c, k - 2), basis_names(&c, k), &product)
        })
        .collect();
    let violations = c.check_d2().iter().map(D2Facts::from).collect();
    report("d2", &[file], EXIT_OK, Facts::D2 { products, violations })
}

pub fn homology(file: &str) -> Report {
    let (s, c) = match complex_of(file) {
        Ok(x) => x,
        Err(e) => return failure("homology", &[file], e),
    };
    let expected = s.expected_betti.clone();
    match c.betti() {
        Ok(b) => {
            let matches_expected = expected.as_ref().map(|e| *e == b);
            report(
                "homology",
                &[file],
                EXIT_OK,
                Facts::Homology {
                    betti: Some(b),
                    expected,
                    matches_expected,
                    violations: Vec::new(),
                },
            )
        }
        Err(v) => report(
            "homology",
            &[file],
            EXIT_REFUSED,
            Facts::Homology {
                betti: None,
                expected,
                matches_expected: None,
                violations: v.iter().map(D2Facts::from).collect(),
            },
        ),
    }
}

/// How `perturb` picks descriptors.
pub enum ChoiceSource<'a> {
    All,
    File(&'a str),
}

pub fn perturb(file: &str, orbit: &str, source: ChoiceSource<'_>, out: Option<&Path>) -> Report {
    let mut inputs = vec![file];
    if let ChoiceSource::File(f) = source {
        inputs.push(f);
    }
    match perturb_inner(file, orbit, &source, out) {
        Ok(facts) => report("perturb", &inputs, EXIT_OK, facts),
        Err(e) => failure("perturb", &inputs, e),
    }
}

fn perturb_inner(file: &str, orbit: &str, source: &ChoiceSource<'_>, out: Option<&Path>) -> Result<Facts, String> {
    let (stem, s) = valid_system(file)?;
    let gamma = s.element(orbit).ok_or_else(|| format!("unknown element '{orbit}'"))?.clone();
    if !gamma.is_orbit() {
        return Err(format!("'{orbit}' is not a closed orbit"));
    }
    let role = if gamma.is_repeller(s.dimension) {
        "repeller"
    } else if gamma.is_attractor() {
        "attractor"
    } else {
        "saddle-type"
    };
    let descriptors: Vec<ChoiceDescriptor> = match source {
        ChoiceSource::All => enumerate_choices_2d(&s, orbit).map_err(|e| e.to_string())?,
        ChoiceSource::File(f) => {
            let all = load_choices(f).map_err(|e| e.to_string())?;
            let d = all
                .into_iter()
                .find(|d| d.orbit == orbit)
                .ok_or_else(|| format!("{f} has no block for orbit '{orbit}'"))?;
            vec![d]
        }
    };
    if let Some(dir) = out {
        fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
    }
    let width = descriptors.len().to_string().len().max(2);
    let base = s.label.clone().unwrap_or_else(|| stem.clone());
    let mut choices = Vec::new();
    for (i, d) in descriptors.iter().enumerate() {
        let id = format!("c{:0width$}", i + 1);
        let mut result = apply_choice(&s, d).map_err(|e| e.to_string())?;
        result.system.label = Some(format!("{base}, choice {id} for {orbit}"));
        let mut header = vec![
            format!("Generated from {stem} by replacing {orbit} with {} and {}.", d.p_name, d.q_name),
            format!("Choice {id} of {}; attaching degree {}.", descriptors.len(), result.attaching_degree),
            String::new(),
        ];
        header.extend(msc::block_lines(d).into_iter().map(|l| format!("  {l}")));
        let text = msf::serialize_with_header(&result.system, &header);
        let file_written = match out {
            Some(dir) => {
                let path = dir.join(format!("{stem}-{id}.msf"));
                fs::write(&path, &text).map_err(|e| format!("{}: {e}", path.display()))?;
                Some(path.display().to_string())
            }
            None => None,
        };
        let single = matches!(source, ChoiceSource::File(_));
        choices.push(ChoiceFacts {
            id,
            descriptor: DescriptorFacts::from(d),
            attaching_degree: result.attaching_degree,
            claims: claim_facts(&result.claims),
            file: file_written,
            system: single.then(|| msf::serialize(&result.system)),
        });
    }
    Ok(Facts::Perturb {
        orbit: orbit.to_string(),
        index: gamma.index,
        role: role.to_string(),
        twisted: gamma.is_twisted(),
        choices,
    })
}

/// The face poset of a `.pos` file, or of a valid gradient-like system.
fn poset_of(arg: &str) -> Result<(Option<FlowSystem>, LabeledPoset), String> {
    let loaded = load(arg).map_err(|e| e.to_string())?;
    match loaded.input {
        Input::Poset(p) => Ok((None, p)),
        Input::System(s) => {
            let (name, s) = require_valid(loaded.name, s)?;
            if !s.is_gradient_like() {
                let orbits: Vec<&str> = s.orbits().map(|e| e.name.as_str()).collect();
                return Err(format!(
                    "{name} has closed orbits ({}); run `msflow perturb` first to obtain gradient-like systems",
                    orbits.join(", ")
                ));
            }
            let p = face_poset(&s).map_err(|e| e.to_string())?;
            Ok((Some(s), p))
        }
    }
}

pub fn poset(file: &str) -> Report {
    let (_, p) = match poset_of(file) {
        Ok(x) => x,
        Err(e) => return failure("poset", &[file], e),
    };
    let nodes = p
        .names()
        .iter()
        .map(|n| NodeFacts {
            name: n.clone(),
            label: p.label(n).expect("node of p"),
        })
        .collect();
    let covers = p.covers().into_iter().map(|(a, b)| (a.to_string(), b.to_string())).collect();
    report("poset", &[file], EXIT_OK, Facts::Poset { nodes, covers })
}

/// Names for index labels: sink/saddle/source on surfaces, `k-cell` otherwise.
pub fn label_namer(surface: bool) -> impl Fn(u32) -> String {
    move |label| match (surface, label) {
        (true, 0) => "sink".to_string(),
        (true, 1) => "saddle".to_string(),
        (true, 2) => "source".to_string(),
        _ => cell_name(label),
    }
}

pub fn compare(a: &str, b: &str) -> Report {
    let ((sa, pa), (sb, pb)) = match (poset_of(a), poset_of(b)) {
        (Ok(x), Ok(y)) => (x, y),
        (Err(e), _) | (_, Err(e)) => return failure("compare", &[a, b], e),
    };
    let facts = match (sa, sb) {
        (Some(sa), Some(sb)) => {
            let namer = label_namer(sa.dimension == 2 && sb.dimension == 2);
            match cell_equivalence_verdict(&sa, &sb) {
                Ok(CellEquivalenceVerdict::NecessaryConditionsPass(m)) => Facts::Compare {
                    test: "cell-equivalence".into(),
                    passed: true,
                    mapping: Some(m),
                    certificate: None,
                },
                Ok(CellEquivalenceVerdict::NotCellEquivalent(c)) => Facts::Compare {
                    test: "cell-equivalence".into(),
                    passed: false,
                    mapping: None,
                    certificate: Some(c.describe(&namer)),
                },
                Err(e) => return failure("compare", &[a, b], e),
            }
        }
        _ => match is_isomorphic(&pa, &pb) {
            IsoVerdict::Isomorphic(m) => Facts::Compare {
                test: "isomorphism".into(),
                passed: true,
                mapping: Some(m),
                certificate: None,
            },
            IsoVerdict::NotIsomorphic(c) => Facts::Compare {
                test: "isomorphism".into(),
                passed: false,
                mapping: None,
                certificate: Some(c.describe(&cell_name)),
            },
        },
    };
    report("compare", &[a, b], EXIT_OK, facts)
}

pub fn census(files: &[String]) -> Report {
    let inputs: Vec<&str> = files.iter().map(String::as_str).collect();
    match census_inner(files) {
        Ok(facts) => report("census", &inputs, EXIT_OK, facts),
        Err(e) => failure("census", &inputs, e),
    }
}

fn census_inner(files: &[String]) -> Result<Facts, String> {
    let mut loaded = Vec::new();
    for f in files {
        loaded.push(valid_system(f)?);
    }
    match &loaded[..] {
        [] => Err("census needs at least one system".into()),
        [(stem, s)] if !s.is_gradient_like() => {
            let r = run_census(s).map_err(|e| e.to_string())?;
            let width = r.resolutions.len().to_string().len().max(2);
            Ok(Facts::Census {
                systems: (1..=r.resolutions.len()).map(|i| format!("{stem}-c{i:0width$}")).collect(),
                classes: r.classes.clone(),
                choices: r
                    .resolutions
                    .iter()
                    .map(|res| res.choices.iter().map(DescriptorFacts::from).collect())
                    .collect(),
            })
        }
        many => {
            if let Some((stem, _)) = many.iter().find(|(_, s)| !s.is_gradient_like()) {
                return Err(format!(
                    "{stem} has closed orbits; a census over several files needs gradient-like systems"
                ));
            }
            let systems: Vec<FlowSystem> = many.iter().map(|(_, s)| s.clone()).collect();
            let classes = classify(&systems).map_err(|e| e.to_string())?;
            Ok(Facts::Census {
                systems: many.iter().map(|(n, _)| n.clone()).collect(),
                classes,
                choices: vec![Vec::new(); many.len()],
            })
        }
    }
}
