use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn diolab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_diolab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, text: &str) -> String {
    let p = dir.join("config.json");
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

fn report(dir: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(dir.join("report.json")).unwrap()).unwrap()
}

const GAUSS: &str = r#"{"seed":5,"samples":4,"steps":6}"#;

#[test]
fn success_writes_report() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), GAUSS);
    let out = tmp.path().join("out");
    let o = diolab(&["gauss-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = report(&out);
    assert_eq!(r["experiment"], "gauss_check");
    assert_eq!(r["seed"], 5);
    assert_eq!(r["records"].as_array().unwrap().len(), 4);
}

#[test]
fn bad_config_exits_2() {
    let tmp = tempfile::tempdir().unwrap();
    let out = tmp.path().join("out");
    for text in [
        r#"{"samples":4,"steps":6,"typo":1}"#,
        r#"{"samples":"four"}"#,
        "not json",
        r#"{"experiment":"systole","samples":4,"steps":6}"#,
    ] {
        let cfg = write_config(tmp.path(), text);
        let o = diolab(&["gauss-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{text}: {}", String::from_utf8_lossy(&o.stderr));
    }
    let o = diolab(&["gauss-check", "--config", "/nonexistent/config.json"]);
    assert_eq!(o.status.code(), Some(2));
    let cfg = write_config(tmp.path(), r#"{"points":[["1/2"]],"epsilons":[0.1],"t_max":-1,"dt":0.1}"#);
    let o = diolab(&["escape-mass", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.join("report.json").exists());
}

#[test]
fn exhausted_precision_exits_3() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), r#"{"samples":5,"steps":400,"bits":64}"#);
    let out = tmp.path().join("out");
    let o = diolab(&["gauss-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precision"));
}

#[test]
fn seed_flag_overrides_config_and_jobs_do_not_matter() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(tmp.path(), GAUSS);
    let mut reports = Vec::new();
    for jobs in ["1", "3"] {
        let out = tmp.path().join(format!("out{jobs}"));
        let o = diolab(&[
            "gauss-check", "--config", &cfg, "--seed", "11", "--jobs", jobs, "--out",
            out.to_str().unwrap(),
        ]);
        assert_eq!(o.status.code(), Some(0));
        let mut r = report(&out);
        assert_eq!(r["seed"], 11);
        assert_eq!(r["timing"]["threads"], jobs.parse::<u64>().unwrap());
        r.as_object_mut().unwrap().remove("timing");
        reports.push(r);
    }
    assert_eq!(reports[0], reports[1]);
    let out = tmp.path().join("base");
    diolab(&["gauss-check", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_ne!(report(&out)["records"], reports[0]["records"]);
}
