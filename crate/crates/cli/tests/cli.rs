use assert_cmd::Command;
use hurwitz_core::family_calc::PencilRecord;
use hurwitz_core::yeff::Certificate;

fn hurwitz() -> Command {
    Command::cargo_bin("hurwitz").unwrap()
}

fn stdout(args: &[&str]) -> String {
    let out = hurwitz()
        .args(args)
        .assert()
        .success()
        .get_output()
        .stdout
        .clone();
    String::from_utf8(out).unwrap()
}

#[test]
fn slope_is_exact() {
    assert_eq!(stdout(&["slope", "4", "9"]).trim(), "22/3");
    assert_eq!(stdout(&["slope", "3", "4"]).trim(), "17/2");
    assert_eq!(stdout(&["slope", "5", "16"]).trim(), "27/4");
}

#[test]
fn plain_trigonal_pencil() {
    let out = stdout(&["pencil", "trigonal_plain", "--gr", "4"]);
    let field = |name: &str| {
        out.lines()
            .find(|l| l.split_whitespace().next() == Some(name))
            .unwrap()
            .split_whitespace()
            .nth(1)
            .unwrap()
            .to_string()
    };
    assert_eq!(field("lambda"), "4");
    assert_eq!(field("delta"), "34");
}

#[test]
fn pencil_json_round_trips() {
    let out = stdout(&[
        "--json",
        "pencil",
        "tetragonal_unramified_4pts",
        "--gr",
        "5",
    ]);
    let rec: PencilRecord = serde_json::from_str(&out).unwrap();
    assert_eq!(rec.lambda.to_string(), "5");
    let again = serde_json::to_value(&rec).unwrap();
    assert_eq!(
        again,
        serde_json::from_str::<serde_json::Value>(&out).unwrap()
    );
}

#[test]
fn certify_reports_graph_count() {
    let out = stdout(&["yeff", "certify", "--d", "3", "--g", "6"]);
    let line = out.trim();
    assert!(
        line.starts_with("certified (") && line.ends_with(" graphs)"),
        "{line}"
    );
}

#[test]
fn emitted_certificate_replays() {
    let path = std::env::temp_dir().join(format!("hurwitz-cert-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    hurwitz()
        .args(["yeff", "certify", "--d", "4", "--g", "9", "--emit", p])
        .assert()
        .success();
    let cert: Certificate = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert!(cert.is_certified());
    let out = stdout(&["yeff", "verify", p]);
    assert!(out.starts_with("replayed"), "{out}");
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn exit_codes() {
    hurwitz().args(["slope", "4", "10"]).assert().code(2);
    hurwitz()
        .args(["pencil", "no_such_family", "--gr", "1"])
        .assert()
        .code(2);
    hurwitz().args(["slope"]).assert().code(1);
    hurwitz()
        .args(["graphs", "enum", "--d", "3", "--bogus", "1"])
        .assert()
        .code(1);
    hurwitz().arg("--help").assert().code(0);
}

#[test]
fn class_and_chow() {
    let out = stdout(&["class", "x", "4", "--at", "9"]);
    assert!(
        out.lines()
            .any(|l| l.starts_with("a ") && l.ends_with("132")),
        "{out}"
    );
    let out = stdout(&["chow", "eval", "hirzebruch:1", "(3*tau + 2*f)^2"]);
    assert!(
        out.lines()
            .any(|l| l.starts_with("integral") && l.trim_end().ends_with("21")),
        "{out}"
    );
}

#[test]
fn invariants_satisfy_mumford() {
    let out = stdout(&[
        "--json",
        "invariants",
        "--d",
        "4",
        "--g",
        "9",
        "--ch2e",
        "7",
        "--ch2f",
        "3",
        "--c1sq",
        "20",
    ]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let q = |k: &str| {
        v[k].as_str()
            .unwrap()
            .parse::<hurwitz_core::symkernel::Q>()
            .unwrap()
    };
    let twelve = hurwitz_core::symkernel::Q::int(12);
    assert_eq!(&twelve * &q("lambda"), &q("kappa") + &q("delta"));
}

#[test]
fn graph_enumeration_lists_counts() {
    let out = stdout(&["graphs", "enum", "--d", "3", "--g", "6"]);
    assert!(out.trim_end().ends_with("graphs"));
    assert!(out.contains("L[d3g"));
}
