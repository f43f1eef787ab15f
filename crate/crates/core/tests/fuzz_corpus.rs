//! Replays the checked-in fuzz seeds with the same assertions the fuzz
//! targets make, plus the expected accept/reject outcome per seed.

use std::fs;
use std::path::PathBuf;

use mms_core::counting::Restriction;
use mms_core::report::rational_to_string;
use mms_core::weights::{load_weights, parse_rational, weight_document};
use mms_core::Rational;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            let name = path.file_name().unwrap().to_string_lossy().into_owned();
            (name, fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty());
    out
}

#[test]
fn rational_seeds() {
    for (name, text) in seeds("parse_rational") {
        let parsed = parse_rational(&text);
        let expect_ok = !matches!(name.as_str(), "zero_den" | "decimal");
        assert_eq!(parsed.is_ok(), expect_ok, "{name}: {parsed:?}");
        if let Ok(q) = parsed {
            assert_eq!(parse_rational(&rational_to_string(&q)).unwrap(), q);
        }
    }
}

#[test]
fn weight_file_seeds() {
    for (name, text) in seeds("load_weights") {
        let loaded = load_weights(&text);
        let expect_ok = matches!(name.as_str(), "star" | "fractions" | "shift");
        assert_eq!(loaded.is_ok(), expect_ok, "{name}: {loaded:?}");
        if let Ok(x) = loaded {
            let v = x.values();
            assert!(v.windows(2).all(|w| w[0] >= w[1]));
            assert_eq!(v.iter().sum::<Rational>(), Rational::from_integer(0.into()));
            let again = load_weights(&weight_document(&x).to_string()).unwrap();
            assert_eq!(again.values(), v);
        }
    }
}

#[test]
fn restriction_seeds() {
    for (name, text) in seeds("parse_restriction") {
        let specs: Vec<&str> = text.split('\n').collect();
        let parsed = Restriction::parse_all(&specs);
        let expect_ok = matches!(name.as_str(), "contains" | "two_atoms" | "out_of_range");
        assert_eq!(parsed.is_ok(), expect_ok, "{name}: {parsed:?}");
        if let Ok(r) = parsed {
            assert_eq!(r.compile(16).is_ok(), name != "out_of_range", "{name}");
        }
    }
}
