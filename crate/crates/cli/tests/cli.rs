use std::fs;
use std::io::BufReader;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use costshare::gamefile::{parse_rational, GameSpec};
use costshare::mechanism::{allocate, MechanismConfig};
use costshare::report::{read_records, RecordBody};
use costshare::shuffle::CoordinateKind;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_costshare"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn shuffle_prints_every_image_with_marks() {
    let text = stdout(&["shuffle", path(&data("g3.json"))]);
    let lines: Vec<&str> = text.lines().skip(1).collect();
    assert_eq!(
        lines,
        [
            "+A: A",
            "+B: B,A",
            "+C: B^,C*,A",
            "+D: B^,D,C*,A",
            "+E: B,D^,E*,C,A",
            "+F: B,D^,F,E*,C,A",
            "+G: B,D^,G,F,E*,C,A",
        ]
    );
}

#[test]
fn invert_recovers_the_arrival_order() {
    let text = stdout(&[
        "invert",
        path(&data("g3.json")),
        "--image",
        "B,D,G,F,E,C,A",
        "--steps",
    ]);
    assert_eq!(text, "A,B,C,D,E,F,G\nlast arrivals: G,F,E,D,C,B,A\n");
}

#[test]
fn shapley_prints_exact_fractions() {
    assert_eq!(
        stdout(&["shapley", path(&data("g1.json"))]),
        "A: 2/3\nB: 1/6\nC: 1/6\n"
    );
    let decimal = stdout(&["shapley", path(&data("g1.json")), "--decimal", "2"]);
    assert!(decimal.starts_with("A: 2/3 (~0.67)\n"), "{decimal}");
}

#[test]
fn decompose_lists_weighted_levels() {
    assert_eq!(
        stdout(&["decompose", path(&data("g5.json"))]),
        "weight 1: {A} {B}\nweight 1: {B}\nweight 1: {A,B}\n"
    );
}

#[test]
fn allocate_follows_the_chosen_rule() {
    let g4 = data("g4.json");
    let reverse = stdout(&["allocate", path(&g4), "--mechanism", "sfs"]);
    assert!(
        reverse.ends_with("final: A=0 B=0 C=0 D=0 E=1\n"),
        "{reverse}"
    );
    let arrival = stdout(&[
        "allocate",
        path(&g4),
        "--mechanism",
        "gsfs",
        "--cd",
        "arrival",
        "--trace",
    ]);
    assert!(arrival.contains("after A,B,C: A=1 B=0 C=0\n"), "{arrival}");
    assert!(
        arrival.ends_with("final: A=0 B=0 C=0 D=1 E=0\n"),
        "{arrival}"
    );
    let reordered = stdout(&["allocate", path(&data("g1.json")), "--arrival", "C,B,A"]);
    assert!(reordered.contains("arrival: C,B,A\n"), "{reordered}");
}

#[test]
fn allocation_report_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("trace.jsonl");
    let game_path = data("fractions.json");
    stdout(&[
        "allocate",
        path(&game_path),
        "--out",
        report.to_str().unwrap(),
    ]);
    let records = read_records(BufReader::new(fs::File::open(&report).unwrap())).unwrap();

    let game = GameSpec::load(&fs::read_to_string(&game_path).unwrap()).unwrap();
    let order = game.arrival.clone().unwrap();
    let trace = allocate(
        &game.cost,
        &order,
        MechanismConfig::Egsfs(CoordinateKind::Reverse),
    )
    .unwrap();
    assert_eq!(records.len(), trace.steps().len());
    for (record, step) in records.iter().zip(trace.steps()) {
        let RecordBody::Allocation {
            shares, mechanism, ..
        } = &record.body
        else {
            panic!("not an allocation record: {record:?}");
        };
        assert_eq!(mechanism, "egsfs(reverse)");
        let reread: Vec<_> = shares
            .iter()
            .map(|(name, v)| (game.players.id(name).unwrap(), parse_rational(v).unwrap()))
            .collect();
        let expected: Vec<_> = step.iter().map(|(p, v)| (p, *v)).collect();
        assert_eq!(reread, expected);
    }
}

#[test]
fn verify_suites_pass() {
    for suite in ["empty", "golden", "exhaustive-n4", "coordinate-rules"] {
        assert_eq!(code(&["verify", "--suite", suite]), 0, "{suite}");
    }
    assert_eq!(
        code(&["verify", "--suite", "random-egsfs", "--n", "3", "--serial"]),
        0
    );
}

#[test]
fn verify_reports_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    for out in [&a, &b] {
        let args = [
            "verify",
            "--suite",
            "random-egsfs",
            "--n",
            "3",
            "--seed",
            "5",
            "--out",
            out.to_str().unwrap(),
        ];
        assert_eq!(code(&args), 0);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn failure_witnesses_replay_through_the_cli() {
    let dir = tempfile::tempdir().unwrap();
    let report = dir.path().join("broken.jsonl");
    let r = report.to_str().unwrap();
    let out = run(&[
        "verify",
        "--suite",
        "exhaustive",
        "--n",
        "3",
        "--cd",
        "min-front",
        "--out",
        r,
    ]);
    assert_eq!(out.status.code(), Some(1));
    let records = read_records(BufReader::new(fs::File::open(&report).unwrap())).unwrap();
    let witnesses = records
        .iter()
        .filter(|rec| matches!(rec.body, RecordBody::Witness { .. }))
        .count();
    assert!(witnesses > 0);

    let out = run(&["verify", "--replay", r]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(
        text.ends_with(&format!(
            "replayed {witnesses} witnesses, {witnesses} reproduced\n"
        )),
        "{text}"
    );
}

#[test]
fn exit_codes_follow_the_error_kind() {
    assert_eq!(code(&["shapley", path(&data("malformed.json"))]), 2);
    assert_eq!(code(&["shapley", path(&data("unknown_player.json"))]), 2);
    assert_eq!(code(&["shapley", path(&data("missing.json"))]), 2);
    assert_eq!(code(&["shapley", path(&data("nonmonotone.json"))]), 3);
    assert_eq!(
        code(&["allocate", path(&data("g5.json")), "--mechanism", "sfs"]),
        3
    );
    assert_eq!(
        code(&[
            "allocate",
            path(&data("g1.json")),
            "--mechanism",
            "sfs",
            "--cd",
            "arrival"
        ]),
        2
    );
    assert_eq!(
        code(&["allocate", path(&data("g1.json")), "--arrival", "A,A,B"]),
        2
    );
    assert_eq!(code(&["verify", "--suite", "no-such-suite"]), 2);
    assert_eq!(code(&["verify", "--suite", "exhaustive", "--n", "9"]), 2);
    assert_eq!(
        code(&["shuffle", path(&data("g1.json")), "--cd", "sideways"]),
        2
    );
}

#[test]
fn validation_errors_name_the_coalitions() {
    let out = run(&["shapley", path(&data("nonmonotone.json"))]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("c({A}) = 2 > c({A,B}) = 1"), "{err}");
    let out = run(&["shapley", path(&data("malformed.json"))]);
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2, column 42"), "{err}");
}
