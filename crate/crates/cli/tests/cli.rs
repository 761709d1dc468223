use std::path::PathBuf;
use std::process::{Command, Output};

fn hg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hg")).args(args).env_remove("HG_EPS").output().expect("run hg")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn write(name: &str, text: &str) -> String {
    let path: PathBuf = [env!("CARGO_TARGET_TMPDIR"), name].iter().collect();
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const SQUARE: &str = r#"{"kind":"polytope","vertices":[[-1,-1],[1,-1],[1,1],[-1,1]]}"#;

#[test]
fn distance_prints_twelve_digits() {
    let sq = write("sq_dist.json", SQUARE);
    let o = hg(&["distance", &sq, "--x", "-0.5,0", "--y", "0.5,0"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.19722457733");

    let disk = write("disk.json", r#"{"kind":"ellipsoid","center":[0,0],"shape":[[1,0],[0,1]]}"#);
    assert_eq!(stdout(&hg(&["distance", &disk, "--x", "0,0", "--y", "0.5,0"])).trim(), "1.09861228866");

    let simplex = write("simplex.json", r#"{"kind":"simplex","dim":2}"#);
    let o = hg(&["distance", &simplex, "--x", "0.5,0.25,0.25", "--y", "0.25,0.5,0.25"]);
    assert_eq!(stdout(&o).trim(), "1.38629436111");
}

#[test]
fn rigidity_verdicts() {
    let sq = write("sq_rigid.json", SQUARE);
    let o = hg(&["rigid", &sq, "--x", "-0.5,0", "--y", "0.5,0"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("non-rigid"));
    let w: serde_json::Value = serde_json::from_str(lines.next().unwrap()).unwrap();
    assert_eq!(w["z"].as_array().unwrap().len(), 2);
    assert_eq!(stdout(&hg(&["rigid", &sq, "--x", "0.25,0.25", "--y", "0.75,0.75"])).trim(), "rigid");
}

#[test]
fn classify_emits_verdict_json() {
    let sq = write("sq_classify.json", SQUARE);
    let tri = write("tri.json", r#"{"kind":"polytope","vertices":[[0,0],[1,0],[0,1]]}"#);
    let trap = write("trap.json", r#"{"kind":"polytope","vertices":[[0,0],[2,0],[1,1],[0,1]]}"#);
    let v: serde_json::Value = serde_json::from_str(&stdout(&hg(&["classify", &sq, &tri]))).unwrap();
    assert_eq!(v["verdict"], "not-isometric");
    assert!(v["witness"].is_null());
    let v: serde_json::Value = serde_json::from_str(&stdout(&hg(&["classify", &sq, &trap]))).unwrap();
    assert_eq!(v["verdict"], "projectively-equivalent");
    assert_eq!(v["witness"]["matrix"].as_array().unwrap().len(), 3);
    assert!(v["max_deviation"].as_f64().unwrap() < 1e-7);
}

#[test]
fn check_is_deterministic() {
    let a = hg(&["check", "metric-axioms", "--seed", "5", "--samples", "50"]);
    let b = hg(&["check", "metric-axioms", "--seed", "5", "--samples", "50"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let r: serde_json::Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(r["id"], "metric-axioms");
    assert_eq!(r["seed"], 5);
    assert_eq!(r["passed"], true);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(hg(&["check", "no-such-suite"]).status.code(), Some(2));
    assert_eq!(hg(&["frobnicate"]).status.code(), Some(2));
    let bad = write("bad.json", "{\"kind\": \"polytope\",\n \"vertices\": [[0,0],,]}");
    let o = hg(&["distance", &bad, "--x", "0,0", "--y", "1,1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 2"));
    let flat = write("flat.json", r#"{"kind":"polytope","vertices":[[0,0],[1,0]]}"#);
    assert_eq!(hg(&["distance", &flat, "--x", "0,0", "--y", "1,0"]).status.code(), Some(2));
    let sq = write("sq_usage.json", SQUARE);
    assert_eq!(hg(&["distance", &sq, "--x", "2,0", "--y", "0,0"]).status.code(), Some(2));
    let o = Command::new(env!("CARGO_BIN_EXE_hg"))
        .args(["distance", &sq, "--x", "0,0", "--y", "0.1,0"])
        .env("HG_EPS", "-1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn eps_override_is_accepted() {
    let sq = write("sq_eps.json", SQUARE);
    let o = Command::new(env!("CARGO_BIN_EXE_hg"))
        .args(["distance", &sq, "--x", "-0.5,0", "--y", "0.5,0"])
        .env("HG_EPS", "1e-6")
        .output()
        .unwrap();
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "2.19722457733");
}

#[test]
fn render_writes_svg() {
    let sq = write("sq_render.json", SQUARE);
    let out: PathBuf = [env!("CARGO_TARGET_TMPDIR"), "fig.svg"].iter().collect();
    let o = hg(&[
        "render",
        &sq,
        "--balls",
        "0,0:1.0986",
        "--chords",
        "-0.5,0:0.5,0.2",
        "--rays",
        "1,1:4",
        "-o",
        out.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let svg = std::fs::read_to_string(&out).unwrap();
    assert!(svg.starts_with("<svg") && svg.trim_end().ends_with("</svg>"));
    assert_eq!(svg.matches(r#"class="ray""#).count(), 4);

    let cube = write(
        "cube.json",
        r#"{"kind":"polytope","vertices":[[0,0,0],[1,0,0],[0,1,0],[1,1,0],[0,0,1],[1,0,1],[0,1,1],[1,1,1]]}"#,
    );
    assert_eq!(hg(&["render", &cube]).status.code(), Some(2));
}
