//! The committed sample files under `tests/data/` are generated from the
//! `csc-core` fixtures so they never drift from the library's own theory
//! and model builders. `committed_data_is_in_sync` fails when they do;
//! run the ignored `regenerate` test to rewrite them.

use std::collections::BTreeMap;
use std::path::PathBuf;

use csc_core::fixtures;
use csc_core::semantics::{serialize_model_file, ConstSpec, FinMonoid, ModelFile};

fn data_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data")
}

fn theory_text(monoid: &FinMonoid) -> String {
    let th = fixtures::writer_theory(monoid, &monoid.centre_submonoid());
    format!(
        "# writer-action theory over the monoid {}: one T-action per element,\n\
         # one S-action per central element, composition and inclusion axioms.\n{}",
        monoid.name(),
        th.to_csct()
    )
}

fn model_text(monoid: &FinMonoid) -> String {
    let sub = monoid.centre_submonoid();
    let mut consts = BTreeMap::new();
    for c in 0..monoid.size() {
        consts.insert(
            format!("act_{}", monoid.label(c)),
            ConstSpec::Element(monoid.label(c)),
        );
    }
    for s in 0..sub.monoid.size() {
        consts.insert(
            format!("sact_{}", sub.monoid.label(s)),
            ConstSpec::Element(sub.monoid.label(s)),
        );
    }
    let file = ModelFile {
        name: format!("writer-{}", monoid.name()),
        monoid: Some(monoid.clone()),
        central: Some(sub.embed.clone()),
        semiring: None,
        sets: BTreeMap::new(),
        grounds: BTreeMap::new(),
        consts,
    };
    format!(
        "# writer monad over {} with its centre as the central submonad.\n{}",
        monoid.name(),
        serialize_model_file(&file)
    )
}

fn generated() -> Vec<(&'static str, String)> {
    let z2 = fixtures::z_n(2);
    let d4 = fixtures::d4();
    vec![
        ("z2.csct", theory_text(&z2)),
        ("z2.cscm", model_text(&z2)),
        ("d4.csct", theory_text(&d4)),
        ("d4.cscm", model_text(&d4)),
    ]
}

#[test]
fn committed_data_is_in_sync() {
    for (name, want) in generated() {
        let path = data_dir().join(name);
        let got = std::fs::read_to_string(&path)
            .unwrap_or_else(|e| panic!("{} is missing: {e}", path.display()));
        assert_eq!(got, want, "{name} is stale; rerun the `regenerate` test");
    }
}

#[test]
#[ignore = "rewrites the committed files under tests/data"]
fn regenerate() {
    for (name, text) in generated() {
        std::fs::write(data_dir().join(name), text).unwrap();
    }
}
