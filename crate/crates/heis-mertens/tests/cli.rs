use std::process::{Command, Output};

use heis_mertens::report::{read_count_csv, CountReport};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heis-mertens"))
        .args(args)
        .env_remove("HEIS_MERTENS_CACHE")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn count_small_grid() {
    let o = run(&["count", "--s-grid", "1,2,4"]);
    assert_eq!(o.status.code(), Some(0));
    let r: CountReport = serde_json::from_str(&stdout(&o)).unwrap();
    let got: Vec<(&str, u64)> = r.rows.iter().map(|r| (r.s.as_str(), r.count)).collect();
    assert_eq!(got, [("1", 24), ("2", 96), ("4", 3264)]);
    assert_eq!(r.reference_constant.coefficient, "54");
    assert_eq!(r.reference_constant.pi_power, -8);
    assert!(r.reference_is_exact);
}

#[test]
fn below_smallest_norm_counts_nothing() {
    let o = run(&["count", "--s-max", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    let r: CountReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(r.rows.len(), 1);
    assert_eq!(r.rows[0].count, 0);
    assert!(r.fit.is_none());
}

#[test]
fn csv_matches_json() {
    let j = run(&["count", "--s-grid", "1,3,5"]);
    let c = run(&["count", "--s-grid", "1,3,5", "--format", "csv"]);
    assert_eq!((j.status.code(), c.status.code()), (Some(0), Some(0)));
    let r: CountReport = serde_json::from_str(&stdout(&j)).unwrap();
    assert_eq!(read_count_csv(&stdout(&c)).unwrap(), r.rows);
}

#[test]
fn thread_count_does_not_change_output() {
    let a = run(&["count", "--s-grid", "2,4,8", "--threads", "1"]);
    let b = run(&["count", "--s-grid", "2,4,8", "--threads", "4"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn bad_invocations_exit_2() {
    let missing = run(&["count", "--s-max", "2", "--order", "/nonexistent/order.json"]);
    assert_eq!(missing.status.code(), Some(2));
    assert_eq!(run(&["count", "--s-grid", "1,2", "--s-max", "2"]).status.code(), Some(2));
    assert_eq!(run(&["count"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--s-grid", "2,1"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--s-max", "0.1.2"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--da", "2"]).status.code(), Some(2));
    assert_eq!(run(&["constants", "--format", "csv"]).status.code(), Some(2));
    assert_eq!(run(&["count", "--s-max", "2", "--threads", "0"]).status.code(), Some(2));
}

#[test]
fn malformed_order_file_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("o.json");
    std::fs::write(&p, r#"{"name":"x","algebra":{"a":-1,"b":-1},"basis":[["0.5","0","0","0"]]}"#).unwrap();
    let o = run(&["count", "--s-max", "2", "--order", p.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn shipped_order_file_counts_like_builtin() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/../../orders/da3.json");
    let a = run(&["count", "--s-grid", "1,3", "--order", path]);
    let b = run(&["count", "--s-grid", "1,3", "--order", "da3"]);
    assert_eq!(a.status.code(), Some(0));
    let ra: CountReport = serde_json::from_str(&stdout(&a)).unwrap();
    let rb: CountReport = serde_json::from_str(&stdout(&b)).unwrap();
    assert_eq!(ra.rows, rb.rows);
    assert_eq!(ra.discriminant, 3);
    assert_eq!(ra.unit_count, 12);
}

#[test]
fn constants_table() {
    let o = run(&["constants", "--da", "2", "--units", "24"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("\"1/23040\""));
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(v["m_a"], 72);
    let o = run(&["constants", "--order", "da3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["discriminant"], 3);
}

#[test]
fn selftest_and_oracle_pass() {
    let o = run(&["geom-selftest", "--samples", "100"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["geom-selftest", "--samples", "20", "--tol-exact=-1"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["oracle", "--s", "4"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn out_file_and_cache_resume() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let out = dir.path().join("r.json");
    let go = || {
        Command::new(env!("CARGO_BIN_EXE_heis-mertens"))
            .args(["count", "--s-grid", "2,5", "--out", out.to_str().unwrap()])
            .env("HEIS_MERTENS_CACHE", &cache)
            .status()
            .unwrap()
    };
    assert!(go().success());
    let first = std::fs::read_to_string(&out).unwrap();
    let files: Vec<_> = std::fs::read_dir(&cache).unwrap().collect();
    assert_eq!(files.len(), 1);
    assert!(go().success());
    assert_eq!(std::fs::read_to_string(&out).unwrap(), first);
    let r: CountReport = serde_json::from_str(&first).unwrap();
    assert_eq!(r.rows[1].count, 21120);
}
