use std::path::Path;
use std::process::{Command, Output};

fn meshat(dir: &Path, storage: &str, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_meshat"))
        .args(args)
        .current_dir(dir)
        .env("MESHAT_STORAGE", storage)
        .env("MESHAT_SECRET", "cli-secret")
        .env("RUST_LOG", "warn")
        .output()
        .unwrap()
}

fn ok(o: &Output) -> String {
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn subcommands_round_trip_a_course() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();

    let roster = ok(&meshat(d, "a.jsonl", &["seed-paper-course"]));
    let lines: Vec<&str> = roster.lines().collect();
    assert_eq!(lines[0], "actor_id,role,name,passcode");
    assert_eq!(lines.len(), 1 + 1 + 1 + 2 + 24 + 96);
    let first: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(first[3], meshat_server::passcode("cli-secret", meshat::ActorId(1)));
    assert!(!meshat(d, "a.jsonl", &["seed-paper-course"]).status.success());

    let report: serde_json::Value =
        serde_json::from_str(&ok(&meshat(d, "a.jsonl", &["simulate", "--seed", "4", "--weeks", "2"]))).unwrap();
    assert!(report["events"].as_u64().unwrap() > 0);

    ok(&meshat(d, "a.jsonl", &["export", "--out", "out.jsonl"]));
    ok(&meshat(d, "b.jsonl", &["import", "--in", "out.jsonl"]));
    assert_eq!(std::fs::read(d.join("a.jsonl")).unwrap(), std::fs::read(d.join("b.jsonl")).unwrap());
    let again = meshat(d, "b.jsonl", &["import", "--in", "out.jsonl"]);
    assert!(!again.status.success());
    assert!(String::from_utf8_lossy(&again.stderr).contains("already contains events"));

    ok(&meshat(d, "b.jsonl", &["decision-table", "--out", "table.csv"]));
    let csv = std::fs::read(d.join("table.csv")).unwrap();
    let rows = meshat::DecisionTable::read_csv(csv.as_slice()).unwrap();
    let p = meshat::log::import_file(&d.join("b.jsonl")).unwrap();
    assert_eq!(rows, meshat::DecisionTable::build(p.state()).rows().collect::<Vec<_>>());
}

#[test]
fn simulate_seeds_an_empty_store() {
    let dir = tempfile::tempdir().unwrap();
    ok(&meshat(dir.path(), "s.jsonl", &["simulate", "--seed", "1", "--weeks", "1"]));
    let p = meshat::log::import_file(&dir.path().join("s.jsonl")).unwrap();
    assert_eq!(p.state().groups().count(), 12);
}

#[test]
fn bad_configuration_is_reported() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.toml"), "port = \"x\"\n").unwrap();
    let o = meshat(dir.path(), "s.jsonl", &["--config", "c.toml", "export", "--out", "x"]);
    assert!(!o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("configuration"));
}
