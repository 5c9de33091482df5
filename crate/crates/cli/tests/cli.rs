//! End-to-end checks of the binary: exit codes, JSON output shapes, and
//! byte-level determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data")
        .join(rel)
        .to_str()
        .unwrap()
        .to_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ologwd"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(output: &Output) -> i32 {
    output.status.code().expect("no signal")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

#[test]
fn validate_exit_codes() {
    let ok = run(&["validate", "--wd", &data("wds/coffee.json")]);
    assert_eq!(code(&ok), 0);

    let cyclic = run(&["validate", "--wd", &data("wds/cyclic.json")]);
    assert_eq!(code(&cyclic), 1);
    assert!(stdout(&cyclic).contains("a -> b -> a"), "cycle witness missing");

    let olog = run(&["validate", "--olog", &data("ologs/transport.json")]);
    assert_eq!(code(&olog), 0);

    let missing = run(&["validate", "--wd", "no/such/file.json"]);
    assert_eq!(code(&missing), 2);

    let not_json = run(&["validate", "--olog", &data("traces/coffee.jsonl")]);
    assert_eq!(code(&not_json), 2);

    let nothing = run(&["validate"]);
    assert_eq!(code(&nothing), 2);
}

#[test]
fn olog_dist_worked_examples() {
    let out = run(&[
        "--format",
        "json",
        "olog-dist",
        "--olog",
        &data("ologs/transport.json"),
        "--from",
        "bicycle",
        "--to",
        "gpc",
    ]);
    assert_eq!(code(&out), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["distance"], 4.0);

    // The pair-of-relations example, with the witnessing path through the
    // person-building pair type.
    let out = run(&[
        "--format",
        "json",
        "olog-dist",
        "--olog",
        &data("ologs/relations.json"),
        "--from",
        "owns_pb",
        "--to",
        "access_pb",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(report["distance"], 2.0);
    let hops: Vec<&str> = report["path"]
        .as_array()
        .unwrap()
        .iter()
        .map(|step| step["aspect"].as_str().unwrap())
        .collect();
    assert_eq!(hops, ["epp_is_cpp", "etpp_is_cpp"]);

    let same = run(&[
        "--format",
        "json",
        "olog-dist",
        "--olog",
        &data("ologs/transport.json"),
        "--from",
        "tv",
        "--to",
        "tv",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&same)).unwrap();
    assert_eq!(report["distance"], 0.0);

    let unknown = run(&[
        "olog-dist",
        "--olog",
        &data("ologs/transport.json"),
        "--from",
        "bicycle",
        "--to",
        "spaceship",
    ]);
    assert_eq!(code(&unknown), 1);
}

#[test]
fn wd_dist_modes_and_exit_codes() {
    let upper = run(&[
        "--format",
        "json",
        "wd-dist",
        "--left",
        &data("wds/charger_w1.json"),
        "--right",
        &data("wds/bus_w2.json"),
        "--costs",
        &data("costs/unit.json"),
        "--path",
        &data("paths/approach1.json"),
    ]);
    assert_eq!(code(&upper), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&upper)).unwrap();
    assert_eq!(report["distance"], 6.0);
    assert_eq!(report["ops"].as_array().unwrap().len(), 6);

    let upper2 = run(&[
        "--format",
        "json",
        "wd-dist",
        "--left",
        &data("wds/charger_w1p.json"),
        "--right",
        &data("wds/bus_w2p.json"),
        "--path",
        &data("paths/approach2.json"),
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&upper2)).unwrap();
    assert_eq!(report["distance"], 8.0);

    let same = run(&[
        "--format",
        "json",
        "wd-dist",
        "--left",
        &data("wds/coffee.json"),
        "--right",
        &data("wds/coffee.json"),
        "--exact",
        "--budget",
        "5",
    ]);
    assert_eq!(code(&same), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&same)).unwrap();
    assert_eq!(report["distance"], 0.0);
    assert_eq!(report["isomorphic"], true);

    // A path that does not land on the stated endpoint.
    let mismatch = run(&[
        "wd-dist",
        "--left",
        &data("wds/charger_w1.json"),
        "--right",
        &data("wds/bus_w2p.json"),
        "--path",
        &data("paths/approach1.json"),
    ]);
    assert_eq!(code(&mismatch), 1);

    // Budget exhaustion reports exit code 3 and an upper bound.
    let starved = run(&[
        "wd-dist",
        "--left",
        &data("wds/charger_w1.json"),
        "--right",
        &data("wds/bus_w2.json"),
        "--exact",
        "--budget",
        "0.5",
    ]);
    assert_eq!(code(&starved), 3);
}

#[test]
fn match_reports_assignments_and_errors() {
    let hit = run(&[
        "--format",
        "json",
        "match",
        "--trace",
        &data("traces/coffee.jsonl"),
        "--wd",
        &data("wds/coffee.json"),
    ]);
    assert_eq!(code(&hit), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&hit)).unwrap();
    assert_eq!(report["count"], 1);
    assert_eq!(report["assignments"][0]["enter"], 10);
    assert_eq!(report["assignments"][0]["exit"], 60);

    let miss = run(&[
        "match",
        "--trace",
        &data("traces/coffee.jsonl"),
        "--wd",
        &data("wds/coffee_receive_first.json"),
    ]);
    assert_eq!(code(&miss), 0);
    assert!(stdout(&miss).contains("no match"));

    // Abstract sensors cannot be evaluated against a trace.
    let abstract_wd = run(&[
        "match",
        "--trace",
        &data("traces/coffee.jsonl"),
        "--wd",
        &data("wds/sensor_high.json"),
    ]);
    assert_eq!(code(&abstract_wd), 1);
}

#[test]
fn export_dot_counts() {
    let olog = run(&["export-dot", "--olog", &data("ologs/transport.json")]);
    let text = stdout(&olog);
    assert_eq!(text.matches("shape=box").count(), 8);
    assert_eq!(text.matches(" -> ").count(), 9);

    let wd = run(&["export-dot", "--wd", &data("wds/coffee.json")]);
    let text = stdout(&wd);
    assert_eq!(text.matches("[label=").count(), 4);
    assert_eq!(text.matches(" -> ").count(), 4);

    let single = run(&["export-dot", "--wd", &data("wds/battery_rising.json")]);
    let text = stdout(&single);
    assert_eq!(text.matches("[label=").count(), 1);
    assert_eq!(text.matches(" -> ").count(), 0);
}

#[test]
fn covers_lists_lattice_neighbors() {
    let down = run(&[
        "--format",
        "json",
        "covers",
        "--wd",
        &data("wds/coffee_pay_first.json"),
        "--direction",
        "down",
    ]);
    assert_eq!(code(&down), 0);
    let report: serde_json::Value = serde_json::from_str(&stdout(&down)).unwrap();
    assert_eq!(report["count"], 3);

    let up = run(&[
        "--format",
        "json",
        "covers",
        "--wd",
        &data("wds/battery_rising.json"),
        "--direction",
        "up",
    ]);
    let report: serde_json::Value = serde_json::from_str(&stdout(&up)).unwrap();
    assert_eq!(report["count"], 0);
}

#[test]
fn identical_invocations_are_byte_identical() {
    let invocations: Vec<Vec<&str>> = vec![
        vec![
            "--format",
            "json",
            "olog-dist",
            "--olog",
            &*Box::leak(data("ologs/relations.json").into_boxed_str()),
            "--from",
            "owns",
            "--to",
            "access",
        ],
        vec![
            "export-dot",
            "--olog",
            &*Box::leak(data("ologs/charger_concepts.json").into_boxed_str()),
        ],
        vec![
            "--format",
            "json",
            "match",
            "--trace",
            &*Box::leak(data("traces/coffee.jsonl").into_boxed_str()),
            "--wd",
            &*Box::leak(data("wds/coffee_states.json").into_boxed_str()),
        ],
        vec![
            "--format",
            "json",
            "covers",
            "--wd",
            &*Box::leak(data("wds/coffee.json").into_boxed_str()),
            "--direction",
            "up",
        ],
    ];
    for args in invocations {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "output differs for {args:?}");
        assert_eq!(code(&first), code(&second));
    }
}
