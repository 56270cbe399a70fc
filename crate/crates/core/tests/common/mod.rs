//! Shared by the integration test targets.

#![allow(dead_code)]

use std::path::PathBuf;
use std::process::Command;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn fixtures_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl Outcome {
    pub fn record(&self) -> String {
        format!("exit {}\n--- stdout\n{}--- stderr\n{}", self.code, self.stdout, self.stderr)
    }
}

/// Runs the binary from the fixtures directory.
pub fn run_cli(args: &[&str]) -> Outcome {
    let output = Command::new(env!("CARGO_BIN_EXE_treeweights"))
        .args(args)
        .current_dir(fixtures_dir())
        .output()
        .expect("binary runs");
    Outcome {
        code: output.status.code().expect("exited normally"),
        stdout: String::from_utf8(output.stdout).expect("utf-8 stdout"),
        stderr: String::from_utf8(output.stderr).expect("utf-8 stderr"),
    }
}

/// Golden cases: name, arguments and expected exit status.
pub const GOLDEN_CASES: &[(&str, &[&str], i32)] = &[
    ("kweights_star_k2", &["kweights", "--tree", "star_321.json", "--k", "2"], 0),
    ("kweights_star_k3", &["kweights", "--tree", "star_321.json", "--k", "3"], 0),
    ("kweights_unit_star_k3", &["kweights", "--tree", "star_1111.json", "--k", "3"], 0),
    ("kweights_labeled_path_k3", &["kweights", "--tree", "labeled_path.json", "--k", "3"], 0),
    ("kweights_k_too_large", &["kweights", "--tree", "star_321.json", "--k", "4"], 1),
    ("kweights_malformed", &["kweights", "--tree", "malformed.json", "--k", "2"], 2),
    ("kweights_missing_file", &["kweights", "--tree", "absent.json", "--k", "2"], 2),
    ("check_one_equality", &["check", "--family", "family_one_equality.json"], 0),
    ("check_all_strict", &["check", "--family", "family_all_three.json"], 0),
    ("check_two_maxima", &["check", "--family", "family_two_maxima.json"], 0),
    ("check_violation", &["check", "--family", "family_violation.json"], 0),
    ("check_four_point_fails", &["check", "--family", "family_four_point_fails.json"], 0),
    ("reconstruct_rigid_star", &["reconstruct", "--family", "family_rigid_four.json"], 0),
    ("reconstruct_pseudostar", &["reconstruct", "--family", "family_all_three.json"], 0),
    (
        "reconstruct_on_caterpillar",
        &["reconstruct", "--family", "family_all_three.json", "--topology", "topology_caterpillar.json", "--coords", "1"],
        0,
    ),
    (
        "reconstruct_outside_bound",
        &["reconstruct", "--family", "family_all_three.json", "--topology", "topology_caterpillar.json", "--coords", "3"],
        1,
    ),
    ("reconstruct_not_treelike", &["reconstruct", "--family", "family_violation.json"], 1),
    ("reconstruct_from_pairs", &["reconstruct", "--family", "family_four_point_fails.json"], 1),
    ("moduli_caterpillar", &["moduli", "--family", "family_all_three.json", "--topology", "topology_caterpillar.json"], 0),
    (
        "moduli_labeled_path",
        &["moduli", "--family", "family_two_maxima.json", "--topology", "topology_labeled_path.json"],
        0,
    ),
    ("moduli_empty", &["moduli", "--family", "family_one_equality.json", "--topology", "topology_star_3.json"], 0),
    ("convert_to_pairs", &["convert", "--family", "family_rigid_four.json", "--direction", "nm1-to-2"], 0),
    ("convert_all_strict", &["convert", "--family", "family_all_three.json", "--direction", "nm1-to-2"], 1),
    ("extend_rigid_four", &["extend", "--family", "family_rigid_four.json", "--subset", "1,2,3,4", "--check"], 0),
    ("extend_without_equality", &["extend", "--family", "family_all_three.json", "--subset", "1,2,3,4"], 1),
    ("op_contract", &["op", "--tree", "caterpillar.json", "--contract", "5,6"], 0),
    ("op_contract_twig", &["op", "--tree", "caterpillar.json", "--contract", "1,5"], 1),
    ("op_split", &["op", "--tree", "star_3232.json", "--split", "0:3,4", "--weight", "3/2"], 0),
    ("op_missing_operation", &["op", "--tree", "star_3232.json"], 2),
    ("topologies_leaf_only_4", &["topologies", "--n", "4"], 0),
    ("topologies_non_leaf_4", &["topologies", "--n", "4", "--nonleaf", "2"], 0),
    ("topologies_all_3", &["topologies", "--n", "3", "--all"], 0),
    ("oracle_labeled_path", &["oracle", "--tree", "labeled_path.json", "--subset", "2,3,4"], 0),
    ("oracle_star", &["oracle", "--tree", "star_321.json", "--subset", "1,2"], 0),
];

/// Compares every golden case, running each twice. Setting
/// `TREEWEIGHTS_BLESS=1` rewrites the golden files instead. Returns one
/// message per mismatch.
pub fn check_golden_cases() -> Vec<String> {
    let bless = std::env::var_os("TREEWEIGHTS_BLESS").is_some();
    let mut problems = Vec::new();
    for &(name, args, expected) in GOLDEN_CASES {
        let first = run_cli(args);
        let second = run_cli(args);
        if first != second {
            problems.push(format!("{name}: two runs differ"));
        }
        if first.code != expected {
            problems.push(format!("{name}: exit {} instead of {expected}: {}", first.code, first.stderr.trim()));
        }
        let path = golden_dir().join(format!("{name}.txt"));
        if bless {
            std::fs::write(&path, first.record()).expect("golden file is writable");
            continue;
        }
        match std::fs::read_to_string(&path) {
            Ok(golden) if golden == first.record() => {}
            Ok(_) => problems.push(format!("{name}: output differs from {}", path.display())),
            Err(e) => problems.push(format!("{name}: cannot read {}: {e}", path.display())),
        }
    }
    problems
}
