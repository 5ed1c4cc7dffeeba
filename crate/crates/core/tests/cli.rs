mod common;

use std::fs;
use std::process::Command;

use orlicz_interp::example::three_space_family;
use orlicz_interp::interp::FiniteFamily;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn orlicz(args: &[&str], dir: &std::path::Path) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_orlicz")).args(args).current_dir(dir).output().unwrap()
}

#[test]
fn check_passes_on_builtin_registry() {
    let dir = tempfile::tempdir().unwrap();
    let out = orlicz(&["check"], dir.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert!(text.starts_with("invariant,status,detail\n"));
    assert!(!text.contains("FAIL"));
}

#[test]
fn witness_table_has_one_row_per_n() {
    let dir = tempfile::tempdir().unwrap();
    let out = orlicz(&["example", "--table", "witness", "--n", "100,10000"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(dir.path().join("witness.csv")).unwrap();
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines[0], "n,A_n,B_n,omega_check");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("100,") && lines[2].starts_with("10000,"));
}

#[test]
fn derive_flat_sequence_gives_identical_rows() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("family.json"), three_space_family().unwrap().to_json().unwrap()).unwrap();
    let out = orlicz(&["derive", "--family", "family.json", "--z", "0", "--x", "sn:16"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let rows: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(rows.len(), 16);
    let values: Vec<&str> = rows.iter().map(|r| r.split_once(',').unwrap().1).collect();
    assert!(values.iter().all(|v| *v == values[0]));
}

#[test]
fn output_is_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["defect", "--family", "paper", "--z", "0.2,-0.1", "--trials", "20", "--seed", "42"][..],
        &["example", "--table", "ell2", "--trials", "40", "--out", "ell2.csv"][..],
        &["interpolate", "--family", "paper", "--z", "0.5,0.5", "--grid", "log:1e-9:1e-3:7"][..],
    ] {
        let a = orlicz(args, dir.path());
        let first = fs::read(dir.path().join("ell2.csv")).ok();
        let b = orlicz(args, dir.path());
        let second = fs::read(dir.path().join("ell2.csv")).ok();
        assert_eq!(a.stdout, b.stdout);
        assert_eq!(first, second);
    }
}

#[test]
fn malformed_config_names_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let mut family: serde_json::Value = serde_json::from_str(&three_space_family().unwrap().to_json().unwrap()).unwrap();
    family["pieces"][1]["function"] = serde_json::json!({"kind": "power", "p": -1.0});
    fs::write(dir.path().join("bad.json"), family.to_string()).unwrap();
    let out = orlicz(&["interpolate", "--family", "bad.json", "--z", "0"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("pieces[1]") && err.contains("p"), "{err}");

    let out = orlicz(&["derive", "--family", "paper", "--z", "1.2,0", "--x", "e:1"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let out = orlicz(&["frobnicate"], dir.path());
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn failing_checks_exit_with_status_two() {
    let dir = tempfile::tempdir().unwrap();
    let out = orlicz(&["example", "--table", "sandwich"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(dir.path().join("sandwich.csv").exists());
}

#[test]
fn family_round_trip_preserves_harmonic_measures() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let family = common::random_family(&mut rng);
        let path = dir.path().join("family.json");
        fs::write(&path, family.to_json().unwrap()).unwrap();
        let reloaded = FiniteFamily::from_json(&fs::read_to_string(&path).unwrap()).unwrap();
        for _ in 0..10 {
            let z = common::random_point(&mut rng, 0.999);
            let (a, b) = (family.weights(z).unwrap(), reloaded.weights(z).unwrap());
            for (x, y) in a.iter().zip(&b) {
                assert!((x - y).abs() <= 1e-14);
            }
        }
    }
}
