//! Replays the checked-in fuzz seeds through the parsers.

use std::fs;
use std::path::PathBuf;

use crowdsel::bench::ExperimentConfig;
use crowdsel::io;

fn seeds(target: &str) -> Vec<(String, String)> {
    let dir = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fuzz/corpus").join(target);
    let mut out: Vec<(String, String)> = fs::read_dir(&dir)
        .unwrap_or_else(|e| panic!("{}: {e}", dir.display()))
        .map(|e| {
            let path = e.unwrap().path();
            (path.file_name().unwrap().to_string_lossy().into_owned(), fs::read_to_string(&path).unwrap())
        })
        .collect();
    out.sort();
    assert!(!out.is_empty(), "no seeds for {target}");
    out
}

#[test]
fn matrix_seeds() {
    for (name, text) in seeds("parse_matrix_csv") {
        let r = io::parse_matrix_csv(&text);
        assert_eq!(r.is_err(), name.starts_with("asymmetric"), "{name}: {r:?}");
        if let Ok(m) = r {
            assert_eq!(io::parse_matrix_csv(&io::matrix_to_csv(&m)).unwrap(), m);
        }
    }
}

#[test]
fn pool_seeds() {
    for (name, text) in seeds("parse_pool_csv") {
        let ok = io::parse_pool_csv(&text).is_ok();
        assert_eq!(ok, name == "three.csv", "{name}");
    }
}

#[test]
fn corpus_seeds() {
    for (name, text) in seeds("parse_corpus_jsonl") {
        let ok = io::parse_corpus_jsonl(&text).is_ok();
        assert_eq!(ok, !name.starts_with("duplicate"), "{name}");
    }
}

#[test]
fn probs_seeds() {
    for (name, text) in seeds("parse_probs") {
        assert!(io::parse_probs(&text).is_ok(), "{name}");
    }
}

#[test]
fn bench_config_seeds() {
    for (name, text) in seeds("bench_config") {
        assert!(ExperimentConfig::from_json(&text).is_ok(), "{name}");
    }
}
