use std::process::{Command, Output};

use serde_json::Value;

fn pencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(args: &[&str]) -> Value {
    let o = pencil(args);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn connection_json_has_theta12() {
    let v = json(&["connection", "--surface", "dp9", "--order", "32", "--format", "json"]);
    let t12 = &v["theta12"];
    assert_eq!(t12["grain"], 72);
    let terms: Vec<(i64, String)> = t12["terms"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| (t[0].as_i64().unwrap(), t[1].as_str().unwrap().to_string()))
        .collect();
    assert_eq!(terms[0], (72, "-1/1".to_string()));
    assert_eq!(terms[1], (4 * 72, "-1/1".to_string()));
    assert_eq!(terms[2], (7 * 72, "-2/1".to_string()));
}

#[test]
fn bulk_f1_text() {
    let o = pencil(&["bulk-f1", "--order", "4"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let beta: Vec<&str> = text.lines().skip(1).take(5).collect();
    assert_eq!(beta, ["  q^{0}: 1", "  q^{1}: 1", "  q^{2}: -8/3", "  q^{3}: -1", "  O(q^{4})"]);
}

#[test]
fn json_is_stable() {
    let args = ["gamma-matrix", "--surface", "dp6", "--order", "8", "--format", "json"];
    assert_eq!(pencil(&args).stdout, pencil(&args).stdout);
}

#[test]
fn grain_flag() {
    let v = json(&["psi", "--surface", "dp9", "--order", "7", "--grain", "1", "--format", "json"]);
    assert_eq!(v["psi"]["grain"], 1);
    assert_eq!(v["psi"]["terms"][1][0], 3);
    let o = pencil(&["theta", "--kind", "hex-deep", "--order", "3", "--grain", "1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("--grain"));
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        vec!["psi", "--surface", "dp10"],
        vec!["psi", "--order", "0"],
        vec!["psi", "--format", "xml"],
        vec!["fukaya-check", "--cyclotomic-order", "8"],
        vec!["no-such-command"],
    ] {
        let o = pencil(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        let flag = args.iter().find(|a| a.starts_with("--")).copied().unwrap_or("no-such-command");
        assert!(String::from_utf8_lossy(&o.stderr).contains(flag), "{args:?}");
    }
}

#[test]
fn out_file() {
    let dir = std::env::temp_dir().join(format!("pencil-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("theta.json");
    let o = pencil(&["theta", "--kind", "e8", "--order", "4", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let coeffs: Vec<&str> = v["theta"]["terms"].as_array().unwrap().iter().map(|t| t[1].as_str().unwrap()).collect();
    assert_eq!(coeffs, ["1/1", "240/1", "2160/1", "6720/1"]);
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn jacobi_theta() {
    let v = json(&["theta", "--kind", "jacobi3", "--u", "0", "--order", "5", "--format", "json"]);
    assert_eq!(v["theta"]["terms"].as_array().unwrap().len(), 3);
}

#[test]
fn fukaya_single_tuple() {
    let o = pencil(&["fukaya-check", "--holonomy", "1/6,1/2,1/6,1/2", "--order", "10"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("shift 1/3"));
    let o = pencil(&["fukaya-check", "--holonomy", "0,1/2,1/6,1/2"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn mirror_map_and_info() {
    let v = json(&["mirror-map", "--order", "12", "--format", "json"]);
    assert_eq!(v["z"]["terms"][1], serde_json::json!([144, "5/1"]));
    assert_eq!(v["hesse"]["terms"][1], serde_json::json!([144, "-15/1"]));
    let v = json(&["series-info", "--surface", "dp8", "--format", "json"]);
    assert_eq!(v["d"], 8);
    assert_eq!(v["admits_trivial_bulk"], false);
}

#[test]
fn verify_passes() {
    let o = pencil(&["verify", "--order", "20"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert_eq!(stdout(&o).lines().filter(|l| l.contains("pass")).count(), 10);
}
