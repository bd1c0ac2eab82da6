use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn cyclord(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclord"))
        .current_dir(dir)
        .env_remove("CYCLORD_OUT")
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn check_axioms_writes_reports() {
    let t = TempDir::new().unwrap();
    let o = cyclord(
        t.path(),
        &[
            "check-axioms",
            "--instance",
            "sym2q",
            "--seed",
            "7",
            "--cases",
            "1000",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let dir = t.path().join("cyclord-out/sym2q");
    for suite in [
        "por",
        "jordan",
        "poja",
        "formal-reality",
        "pco",
        "invariance",
        "convexity",
        "compression",
    ] {
        let text = fs::read_to_string(dir.join(format!("{suite}.txt"))).unwrap();
        assert!(!text.contains("FAIL"), "{text}");
        let json: Value =
            serde_json::from_str(&fs::read_to_string(dir.join(format!("{suite}.json"))).unwrap())
                .unwrap();
        assert_eq!(json["seed"], 7);
    }
}

#[test]
fn query_cyclic_on_the_line() {
    let t = TempDir::new().unwrap();
    let o = cyclord(
        t.path(),
        &["query-cyclic", "--instance", "q", "--triple", "1,2,-1"],
    );
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "true");
    let o = cyclord(
        t.path(),
        &["query-cyclic", "--instance", "q", "--triple", "1,0,-1"],
    );
    assert_eq!(stdout(&o).trim(), "false");
    let o = cyclord(
        t.path(),
        &["query-cyclic", "--instance", "q", "--triple", "-1,inf,1"],
    );
    assert_eq!(stdout(&o).trim(), "false");
    // a translation by 3 moves (1, 2, −1) to (4, 5, 2)
    let o = cyclord(
        t.path(),
        &[
            "query-cyclic",
            "--instance",
            "q",
            "--triple",
            "1,2,-1",
            "--word",
            r#"[{"gen":"trans","v":["3"]}]"#,
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert_eq!(stdout(&o).trim(), "true");
    let o = cyclord(
        t.path(),
        &[
            "query-transversal",
            "--instance",
            "sym2q",
            "--pair",
            r#"[["1","0","0"],["0","0","0"]]"#,
        ],
    );
    assert_eq!(stdout(&o).trim(), "false");
}

#[test]
fn torus_boxes_figure() {
    let t = TempDir::new().unwrap();
    let o = cyclord(
        t.path(),
        &[
            "torus-boxes",
            "--n",
            "2",
            "--a",
            "1/2,1/2",
            "--b",
            "-1/2,-1/2",
            "--svg",
            "out.svg",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).starts_with("boxes: 4\n"));
    let svg = fs::read_to_string(t.path().join("out.svg")).unwrap();
    assert!(svg.starts_with("<svg"));
    assert_eq!(svg.matches("stroke=").count(), 4);
    let summary: Value = serde_json::from_str(
        &fs::read_to_string(t.path().join("cyclord-out/torus2/boxes.json")).unwrap(),
    )
    .unwrap();
    assert_eq!(summary["boxes"].as_array().unwrap().len(), 4);
    assert_eq!(summary["mismatches"], 0);
}

#[test]
fn usage_errors_exit_2() {
    let t = TempDir::new().unwrap();
    for args in [
        &["check-axioms", "--instance", "nonsense"][..],
        &["check-axioms", "--instance", "q", "--suite", "nope"],
        &["check-axioms", "--instance", "q", "--suite", "torus-boxes"],
        &["query-cyclic", "--instance", "q", "--triple", "1,2"],
        &[
            "interval-image",
            "--instance",
            "q",
            "--a",
            "1",
            "--b",
            "-1",
            "--grid",
            "1:0:3",
        ],
        &[
            "torus-boxes",
            "--n",
            "2",
            "--a",
            "1/2,1/2",
            "--b",
            "1/2,-1/2",
        ],
        &[
            "torus-boxes",
            "--n",
            "2",
            "--a",
            "1/2,1/2",
            "--b",
            "-1/2,-1/2",
            "--svg",
            "x.svg",
            "--grid",
            "-1:1:4",
        ],
        &["frobnicate"],
    ] {
        let o = cyclord(t.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", stdout(&o));
    }
}

#[test]
fn por_failures_leave_replayable_witnesses() {
    let t = TempDir::new().unwrap();
    let o = cyclord(
        t.path(),
        &["check-axioms", "--instance", "zint", "--cases", "100"],
    );
    assert_eq!(o.status.code(), Some(1));
    let w = t
        .path()
        .join("cyclord-out/zint/witness-por-inverse-por.json");
    let o = cyclord(t.path(), &["replay", "--witness", w.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("failure reproduced"));

    let o = cyclord(
        t.path(),
        &["check-axioms", "--instance", "trivial-n", "--cases", "100"],
    );
    assert_eq!(o.status.code(), Some(1));
    assert!(t
        .path()
        .join("cyclord-out/trivial-n/witness-por-square-order.json")
        .exists());
}

#[test]
fn query_commands_in_witnesses_reproduce_the_answers() {
    let t = TempDir::new().unwrap();
    // totality is exploratory: failures are recorded but do not fail the run
    let o = cyclord(
        t.path(),
        &[
            "check-axioms",
            "--instance",
            "sym2q",
            "--suite",
            "totality",
            "--cases",
            "40",
        ],
    );
    assert_eq!(o.status.code(), Some(0));
    let path = t
        .path()
        .join("cyclord-out/sym2q/witness-totality-totality.json");
    let w: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let steps = w["queries"].as_array().unwrap();
    assert_eq!(steps.len(), 2);
    for step in steps {
        let args: Vec<&str> = step["args"]
            .as_array()
            .unwrap()
            .iter()
            .map(|a| a.as_str().unwrap())
            .collect();
        let o = cyclord(t.path(), &args);
        assert_eq!(
            stdout(&o).trim(),
            step["expect"].as_bool().unwrap().to_string()
        );
    }
    let rerun: Vec<&str> = w["rerun"].as_str().unwrap().split(' ').skip(1).collect();
    let o = cyclord(t.path(), &rerun);
    assert!(stdout(&o).contains("failures=1"), "{}", stdout(&o));
    let again: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(again["data"], w["data"]);
}

const CONFIG: &str = r#"
seed = 11
cases = 60

[instances]
lorentz = { Spin = { m = 2, ring = "Q" } }
pair = "Product(Scalar(Q),Sym(2,Q))"

[[check]]
instance = "lorentz"
suites = ["pco", "invariance"]

[[check]]
instance = "pair"
suites = ["pco", "chart-full"]
cases = 30

[[image]]
instance = "q"
a = "1"
b = "-1"
grid = "-4:4:32"
svg = "figs/q.svg"
csv = "figs/q.csv"

[[image]]
instance = "sym2q"
a = ["0", "0", "0"]
b = ["2", "0", "2"]
coords = [0, 2]
grid = "-1:3:16;-1:3:16"
svg = "figs/sym2.svg"
csv = "figs/sym2.csv"

[[torus]]
n = 2
a = ["1/2", "-1/2"]
b = ["-1/2", "1/2"]
svg = "figs/torus.svg"
csv = "figs/torus.csv"

[[probe]]
instance = "dual-q"
probe = "tangent-fiber"

[[probe]]
instance = "q"
probe = "separation"
pair = ["0", "1"]
endpoints = ["-1", "1/2", "2", "inf"]

[[tube]]
instance = "sym2q"
cases = 30
"#;

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut out = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                out.push((
                    p.strip_prefix(dir).unwrap().display().to_string(),
                    fs::read(&p).unwrap(),
                ));
            }
        }
    }
    out.sort();
    out
}

#[test]
fn config_runs_are_deterministic() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("jobs.toml"), CONFIG).unwrap();
    let mut trees = Vec::new();
    for out in ["one", "two"] {
        let o = cyclord(t.path(), &["--out", out, "run", "--config", "jobs.toml"]);
        assert_eq!(o.status.code(), Some(0), "{}{}", stdout(&o), stderr(&o));
        trees.push(tree(&t.path().join(out)));
    }
    let names: Vec<&str> = trees[0].iter().map(|(n, _)| n.as_str()).collect();
    for f in [
        "figs/q.svg",
        "figs/sym2.csv",
        "figs/torus.svg",
        "lorentz/pco.json",
        "q/separation.json",
        "sym2q/tube.txt",
    ] {
        assert!(names.contains(&f), "{f} missing from {names:?}");
    }
    assert_eq!(trees[0], trees[1]);
    let sep: Value =
        serde_json::from_str(&fs::read_to_string(t.path().join("one/q/separation.json")).unwrap())
            .unwrap();
    assert!(!sep["separating"].as_array().unwrap().is_empty());
}

#[test]
fn config_errors_name_the_field() {
    let t = TempDir::new().unwrap();
    fs::write(t.path().join("bad.toml"), "[[check]]\ninstance = \"q\"\nsuites = [\"pco\"]\n\n[[image]]\ninstance = \"nope\"\na = \"1\"\nb = \"2\"\n").unwrap();
    let o = cyclord(t.path(), &["run", "--config", "bad.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("image[0].instance"), "{}", stderr(&o));
    assert!(
        !t.path().join("cyclord-out").exists(),
        "no job runs before validation"
    );

    fs::write(t.path().join("syntax.toml"), "seed = 1\ncases = [\n").unwrap();
    let o = cyclord(t.path(), &["run", "--config", "syntax.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line"), "{}", stderr(&o));
}

#[test]
fn output_directory_from_the_environment() {
    let t = TempDir::new().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_cyclord"))
        .current_dir(t.path())
        .env("CYCLORD_OUT", "elsewhere")
        .args(["tube-experiment", "--instance", "spin3q", "--cases", "20"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[exploratory]"));
    assert!(t.path().join("elsewhere/spin3q/tube.json").exists());
}

#[test]
fn fiber_points_are_not_separated() {
    let t = TempDir::new().unwrap();
    let o = cyclord(
        t.path(),
        &[
            "topology-probe",
            "--instance",
            "dual-q",
            "--probe",
            "separation",
            "--pair",
            r#"[[{"re":"0","eps":"0"}],[{"re":"0","eps":"1"}]]"#,
            "--endpoints",
            r#"[[{"re":"-1","eps":"0"}],[{"re":"1","eps":"0"}],[{"re":"-1","eps":"3"}],[{"re":"1","eps":"-2"}],{"inf":true}]"#,
            "--cases",
            "50",
        ],
    );
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("separating pairs: 0"), "{}", stdout(&o));
}

#[test]
fn lists_instances() {
    let t = TempDir::new().unwrap();
    let o = cyclord(t.path(), &["list-instances"]);
    let s = stdout(&o);
    for name in [
        "q",
        "qq",
        "torus2",
        "torus3",
        "sym2q",
        "sym3q",
        "spin3q",
        "dual-q",
        "dual-sym2q",
        "zint",
        "trivial-n",
    ] {
        assert!(
            s.lines()
                .any(|l| l.trim_start().starts_with(&format!("{name} "))),
            "{name}"
        );
    }
}
