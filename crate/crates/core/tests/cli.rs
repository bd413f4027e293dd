use std::process::Command;

fn cli(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cheby-critical"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).unwrap(),
        String::from_utf8(out.stderr).unwrap(),
    )
}

#[test]
fn tau_reports_both_routes() {
    let (code, out, _) = cli(&["tau", "--n", "3", "--k", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("tau_direct = 0.333333"));
    assert!(out.contains("sandwich PASS"));
    assert_eq!(cli(&["tau", "--n", "4", "--k", "3"]).0, 1);
}

#[test]
fn table_is_byte_identical_across_jobs() {
    let args = ["table", "--k-min", "1", "--k-max", "2", "--n-max", "40"];
    let (c1, one, _) = cli(&[&args[..], &["--jobs", "1"]].concat());
    let (c2, many, _) = cli(&[&args[..], &["--jobs", "5"]].concat());
    assert_eq!((c1, c2), (0, 0));
    assert_eq!(one, many);
    let header = one.lines().next().unwrap();
    assert_eq!(
        header,
        "n,k,tau_direct,tau_closed,lower,sd12,combined14,thm15,cor11,ratio_bound,tau_star,tau_star_asym"
    );
    let keys: Vec<(u32, u32)> = one
        .lines()
        .skip(1)
        .map(|l| {
            let mut f = l.split(',');
            let n = f.next().unwrap().parse().unwrap();
            let k = f.next().unwrap().parse().unwrap();
            (k, n)
        })
        .collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(keys.len(), 38 + 37);
}

#[test]
fn table_json_schema() {
    let (code, out, _) = cli(&["table", "--k-max", "1", "--n-max", "6", "--format", "json", "--columns", "tau_closed,cor11"]);
    assert_eq!(code, 0);
    let rows: serde_json::Value = serde_json::from_str(&out).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 4);
    let first = rows[0].as_object().unwrap();
    let keys: Vec<&str> = first.keys().map(String::as_str).collect();
    assert_eq!(keys, ["n", "k", "tau_closed", "cor11"]);
}

#[test]
fn table_writes_file() {
    let path = std::env::temp_dir().join(format!("cheby-critical-{}.csv", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = cli(&["table", "--k-max", "1", "--n-max", "5", "--out", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    std::fs::remove_file(&path).unwrap();
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn quadrature_columns_follow_lambda() {
    let (code, out, _) = cli(&["quadrature", "--lambda", "1", "--n", "2"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("i,node,petras,golub_welsch\n"));
    assert!(out.contains("1,-5.0000000000000000e-1,7.8539816339744"));
    let (code, out, _) = cli(&["quadrature", "--lambda", "1.5", "--n", "4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("i,node,classical,golub_welsch\n"));
    let (code, out, _) = cli(&["quadrature", "--lambda", "2", "--n", "8", "--format", "json"]);
    assert_eq!(code, 0);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["max_relative_deviation"].as_f64().unwrap() <= 1e-10);
    assert_eq!(doc["weights"].as_object().unwrap().len(), 3);
}

#[test]
fn limit_and_usage() {
    let (code, out, _) = cli(&["limit", "--k", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("tau_star = 0.2172336"));
    assert_eq!(cli(&["limit", "--k", "0"]).0, 1);
    assert_eq!(cli(&["frobnicate"]).0, 1);
}

#[test]
fn verify_passes_and_detects_fault() {
    let (code, out, _) = cli(&["verify"]);
    assert_eq!(code, 0, "{out}");
    assert!(out.contains("10/10 criteria passed"));
    let (code, out, _) = cli(&["verify", "--inject-omega-fault", "1e-6"]);
    assert_eq!(code, 2);
    assert!(out.contains("[FAIL]"));
}
