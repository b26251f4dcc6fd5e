//! Replays the checked-in fuzz corpus through the fuzz targets' properties,
//! so they run on stable without libFuzzer.

use std::fs;
use std::path::PathBuf;

use pqdyn::circuit::{export_circuit, import_json, ExportFormat};
use pqdyn::parser::{parse_program, parse_term, parse_type, pretty, pretty_term};
use pqdyn::prelude::{check_with_prelude, load_prelude};
use pqdyn::syntax::alpha_eq;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.display().to_string(), fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn parse_program_seeds() {
    let mut parsed = 0;
    for (name, text) in seeds("parse_program") {
        if let Ok(p) = parse_program(&text) {
            parse_program(&pretty(&p)).unwrap_or_else(|e| panic!("{name}: {e}"));
            parsed += 1;
        }
    }
    assert!(parsed >= 5);
}

#[test]
fn parse_type_seeds() {
    for (name, text) in seeds("parse_type") {
        let t = parse_type(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(pretty(&t), pretty(&parse_type(&pretty(&t)).unwrap()), "{name}");
    }
}

#[test]
fn parse_term_seeds() {
    for (name, text) in seeds("parse_term") {
        let t = parse_term(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(alpha_eq(&t, &parse_term(&pretty_term(&t)).unwrap()), "{name}");
    }
}

#[test]
fn circuit_json_seeds() {
    let mut valid = 0;
    for (name, text) in seeds("circuit_json") {
        if let Ok(c) = import_json(&text) {
            assert_eq!(import_json(&export_circuit(&c, ExportFormat::Json)).unwrap(), c, "{name}");
            valid += 1;
        }
    }
    assert_eq!(valid, 3);
}

#[test]
fn check_program_seeds() {
    let prelude = load_prelude();
    for (_, text) in seeds("check_program") {
        if let Ok(p) = parse_program(&text) {
            let _ = check_with_prelude(&prelude, &p);
        }
    }
}
