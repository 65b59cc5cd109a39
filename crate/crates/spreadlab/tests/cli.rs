use std::process::Command;

use serde_json::Value;
use spreadlab::report::check_schema;

fn run(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_spreadlab"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

fn json(args: &[&str]) -> Value {
    let (code, out, err) = run(args);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    check_schema(&v).unwrap();
    v
}

#[test]
fn box_defect_of_closed_form_array() {
    let v = json(&[
        "defects",
        "box",
        "--model",
        "appendix-a-2d",
        "--n",
        "8",
        "--mode",
        "absolute",
    ]);
    assert_eq!(v["value"]["value"], 0.03125);
    assert_eq!(v["value"]["exact"], "1/32");
    assert_eq!(v["value"]["method"], "exact-rational");
}

#[test]
fn gamma_table_csv() {
    let (code, out, _) = run(&[
        "gamma-table",
        "--d",
        "1",
        "--n",
        "10",
        "--eta",
        "0.01",
        "--theta",
        "0.04",
        "--kmax",
        "3",
        "--format",
        "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "d,n,eta,theta,k,gamma_k,closed_bound,slack");
    let row: Vec<&str> = lines[3].split(',').collect();
    assert_eq!(row[4], "3");
    assert!((row[5].parse::<f64>().unwrap() - 1.05980).abs() < 1e-5);
}

#[test]
fn smash_everything() {
    let v = json(&[
        "family",
        "smash",
        "--n",
        "6",
        "--builtin",
        "everything",
        "--k",
        "3",
    ]);
    assert_eq!(v["found"], true);
    assert_eq!(v["witness"]["w"], Value::Array(vec![]));
}

#[test]
fn deterministic_reports() {
    let args = [
        "--seed",
        "9",
        "sample",
        "--model",
        "random-hypergraph",
        "--v",
        "5",
        "--n",
        "5",
        "--count",
        "4",
    ];
    assert_eq!(run(&args).1, run(&args).1);
    let fam = [
        "--seed",
        "2",
        "family",
        "theta-audit",
        "--n",
        "5",
        "--random",
        "0.5",
    ];
    assert_eq!(run(&fam).1, run(&fam).1);
}

#[test]
fn exit_codes() {
    // randomized paths demand a seed
    assert_eq!(run(&["sample", "--model", "product", "--n", "4"]).0, 1);
    // capacity errors name the enumeration
    let (code, _, err) = run(&[
        "--cap", "10", "defects", "spread", "--model", "product", "--n", "6", "--d", "2",
    ]);
    assert_eq!(code, 1);
    assert!(err.contains("capacity"), "{err}");
    assert_eq!(run(&["defects", "box", "--model", "nope", "--n", "8"]).0, 1);
    assert_eq!(run(&["no-such-command"]).0, 1);
    assert_eq!(run(&["--help"]).0, 0);
    assert_eq!(
        run(&[
            "defects",
            "box",
            "--model",
            "appendix-a-2d",
            "--n",
            "8",
            "--format",
            "csv"
        ])
        .0,
        1
    );
}

#[test]
fn help_enumerates_kinds_and_properties() {
    let (_, out, _) = run(&["construct", "--help"]);
    for kind in [
        "appendix-a-2d",
        "product",
        "fixed-size-er",
        "equality-sampling",
        "random-hypergraph",
    ] {
        assert!(out.contains(kind), "{kind}");
    }
    let (_, out, _) = run(&["family", "gamma", "--help"]);
    for p in ["triangle", "contains-K4", "edge-count>=t"] {
        assert!(out.contains(p), "{p}");
    }
}

#[test]
fn construct_round_trips_through_spec_files() {
    let v = json(&[
        "construct",
        "--model",
        "product",
        "--n",
        "5",
        "--d",
        "2",
        "--p",
        "1/3",
    ]);
    let dir = std::env::temp_dir().join(format!("spreadlab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    std::fs::write(&path, v["model"].to_string()).unwrap();
    let a = json(&["defects", "box", "--spec", path.to_str().unwrap()]);
    let b = json(&[
        "defects", "box", "--model", "product", "--n", "5", "--d", "2", "--p", "1/3",
    ]);
    assert_eq!(a["value"], b["value"]);
    let d = json(&[
        "defects",
        "box",
        "--spec",
        path.to_str().unwrap(),
        "--derive",
        "restrict-last",
    ]);
    assert!(d["value"]["exact"].is_string());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn theorem_reports() {
    let v = json(&["propagate", "--model", "appendix-a-2d", "--n", "8"]);
    assert_eq!(v["holds"], true);
    let v = json(&[
        "lemma", "doubling", "--model", "product", "--n", "8", "--d", "2",
    ]);
    assert_eq!(v["holds"], true);
    let v = json(&[
        "concentrate",
        "--model",
        "appendix-a-2d",
        "--n",
        "8",
        "--norm-p",
        "2",
        "--i",
        "1..8",
        "--k",
        "2",
        "--eps",
        "0.1",
    ]);
    assert_eq!(v["holds"], true);
    assert!(v["concentration"]["value"].as_f64().unwrap() <= 1.0);
    let v = json(&[
        "--seed",
        "1",
        "quasirandom",
        "audit",
        "--random-v",
        "6",
        "--n",
        "4",
    ]);
    assert_eq!(v["part_i"], true);
    let v = json(&["family", "invariance", "--n", "5", "--builtin", "triangle"]);
    assert_eq!(v["invariant"], true);
    let v = json(&[
        "family",
        "gamma",
        "--n",
        "5",
        "--builtin",
        "edge-count>=5",
        "--u",
        "1,2,3,4",
    ]);
    assert_eq!(v["per_u"].as_array().unwrap().len(), 1);
}
