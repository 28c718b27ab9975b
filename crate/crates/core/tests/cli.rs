use std::path::PathBuf;
use std::process::{Command, Output};

fn data(path: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join(path)
}

fn metrilog(args: &[&str]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_metrilog"));
    cmd.current_dir(data("data")).env_remove("METRILOG_DEPTH").args(args);
    cmd.output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_an_exact_interval() {
    let o = metrilog(&["eval", "two_points.mstr", "px.mfla", "--assignment", "x=a"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "lo=1/4 hi=1/4 exact=true");
}

#[test]
fn sat_exit_codes_follow_the_verdict() {
    let no = metrilog(&["sat", "two_points.mstr", "nine_tenths.mfla"]);
    assert_eq!(no.status.code(), Some(1));
    assert!(stdout(&no).starts_with("no"));
    let yes = metrilog(&["models", "two_points.mstr", "basic.mthy"]);
    assert_eq!(yes.status.code(), Some(0));
}

#[test]
fn json_output_is_machine_readable() {
    let o = metrilog(&["--json", "sat", "two_points.mstr", "nine_tenths.mfla"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["verdict"], "no");
    assert_eq!(v["value"]["lo"], "9/10");
}

#[test]
fn depth_flag_overrides_environment() {
    let corpus = data("corpus");
    let (m, phi) = (corpus.join("dense.mstr"), corpus.join("dense.mfla"));
    let (m, phi) = (m.to_str().unwrap(), phi.to_str().unwrap());
    let run = |env: Option<&str>, args: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_metrilog"));
        cmd.env_remove("METRILOG_DEPTH");
        if let Some(d) = env {
            cmd.env("METRILOG_DEPTH", d);
        }
        cmd.args(args).args(["sat", m, phi]).output().unwrap().status.code()
    };
    assert_eq!(run(Some("2"), &[]), Some(2));
    assert_eq!(run(Some("2"), &["--depth", "3"]), Some(0));
    assert_eq!(run(None, &[]), Some(0));
}

#[test]
fn claim3_and_ultraproduct_agree() {
    let o = metrilog(&["claim3", "seq/seq.mreg", "seq/sigma.mfla", "--ultra", "frechet"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("equal"));
    let u = metrilog(&["ultraproduct", "seq/seq.mreg", "--ultra", "principal:1"]);
    assert_eq!(u.status.code(), Some(0));
    let text = stdout(&u);
    assert!(text.contains("structure ultra_m1") && text.contains("# verified: true"), "{text}");
}

#[test]
fn principality_worked_example() {
    let base = ["principal", "principal/empty.mthy", "principal/sigma.mtyp", "--registry", "principal/grid.mreg"];
    let exact = metrilog(&[&base[..], &["--pool", "principal/pool.mtyp"]].concat());
    assert_eq!(exact.status.code(), Some(0), "{}", stdout(&exact));
    let constants = metrilog(&[&base[..], &["--pool", "principal/const_pool.mtyp"]].concat());
    assert_eq!(constants.status.code(), Some(1), "{}", stdout(&constants));
}

#[test]
fn omit_search_and_thicken() {
    let o =
        metrilog(&["omit-search", "principal/empty.mthy", "principal/sigma.mtyp", "--registry", "principal/grid.mreg"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("found p0"));
    let t = metrilog(&["thicken", "principal/sigma.mtyp", "--sig", "principal/p.msig", "--delta", "1/4"]);
    assert_eq!(t.status.code(), Some(0));
    assert!(stdout(&t).contains("sup y . (d(x, y) -> 1/4) /\\ P(y);"), "{}", stdout(&t));
}

#[test]
fn parse_errors_carry_positions() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.mfla");
    std::fs::write(&bad, "P(x) ->\n  sup . P(y)\n").unwrap();
    let o = metrilog(&["parse", bad.to_str().unwrap(), "--sig", "two_points.mstr"]);
    assert_eq!(o.status.code(), Some(3));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("bad.mfla:2:"), "{err}");
}

#[test]
fn usage_errors_exit_three() {
    assert_eq!(metrilog(&["bogus"]).status.code(), Some(3));
    assert_eq!(metrilog(&["--help"]).status.code(), Some(0));
}

#[test]
fn corpus_verb_reports_every_entry() {
    let o = metrilog(&["corpus"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().filter(|l| l.ends_with(" ok")).count(), 7);
}
