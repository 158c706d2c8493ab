use serde_json::Value;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("loeschian").chain(args.iter().copied());
    let code = loeschian::cli::run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s.trim()).unwrap()
}

#[test]
fn bezout_json() {
    let (code, out, _) = run(&["bezout", "3", "5"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["u"], "7");
    assert_eq!(v["v"], "4");
    assert_eq!(v["epsilon"], "1");
    assert_eq!(v["swapped"], false);
}

#[test]
fn bezout_exact_one() {
    let (code, out, _) = run(&["bezout", "5", "8", "--mode", "exact-one"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!((v["u"].as_str(), v["v"].as_str()), (Some("21"), Some("13")));
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["bezout", "4", "6"]).0, 1);
    assert_eq!(run(&["bezout", "3", "5", "--bound", "3"]).0, 2);
    assert_eq!(run(&["count", "--d", "0"]).0, 1);
    assert_eq!(run(&["no-such-command"]).0, 1);
}

#[test]
fn count_forty() {
    let (code, out, _) = run(&["count", "--d", "40"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["C_d"], "4");
    assert_eq!(v["case"], "A");
    let (_, csv, _) = run(&["--format", "csv", "count", "--d", "40"]);
    assert_eq!(csv.lines().nth(1), Some("40,2,A,4,NotRealized"));
}

#[test]
fn not_loeschian_is_not_an_error() {
    let (code, out, _) = run(&["loeschian", "2"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["loeschian"], false);
    let (_, out, _) = run(&["loeschian", "91"]);
    assert_eq!(json(&out)["loeschian"], true);
}

#[test]
fn pell_and_membership() {
    let (code, out, _) = run(&["pell", "--d", "18"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["solution"]["x0"], "5");
    assert_eq!(v["solution"]["y0"], "2");
    let (code, out, _) = run(&["g-membership", "--d", "9"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["membership"], "InG");
}

#[test]
fn conjugate_swapped_pair() {
    let (code, out, _) = run(&["conjugate", "--d", "9", "--xi", "3,7,0,2", "--eta", "3,7,2,0"]);
    assert_eq!(code, 0, "{out}");
    assert_eq!(json(&out)["conjugate"], true);
}

#[test]
fn sweep_resumes_from_checkpoint() {
    let dir = tempfile::tempdir().unwrap();
    let ck = dir.path().join("sweep.ck");
    let ck = ck.to_str().unwrap();
    let (code, out, _) = run(&["verify-conj2", "--dstar-min", "1", "--dstar-max", "300", "--chunk", "10", "--checkpoint", ck]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(json).collect();
    assert_eq!(lines.len(), 101);
    assert_eq!(lines[100]["summary"]["checked"], "100");
    let (code, out, _) = run(&["verify-conj2", "--dstar-min", "1", "--dstar-max", "600", "--chunk", "10", "--checkpoint", ck]);
    assert_eq!(code, 0);
    let lines: Vec<Value> = out.lines().map(json).collect();
    assert_eq!(lines[0]["d_star"], "301");
    assert_eq!(lines.last().unwrap()["summary"]["resumed_after"], "298");
}
