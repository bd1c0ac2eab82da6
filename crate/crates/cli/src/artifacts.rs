//! Report and witness files.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use cyclord::instances::Suite;
use cyclord::witness::{query_plan, Rule};
use cyclord::{AxiomReport, SampleSpec, Witness};
use serde::{Deserialize, Serialize};
use serde_json::Value;

/// File-name form of an instance name such as `Sym(2,Q)`.
pub fn slug(name: &str) -> String {
    let mut s: String = name
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() {
                c.to_ascii_lowercase()
            } else {
                '-'
            }
        })
        .collect();
    while s.contains("--") {
        s = s.replace("--", "-");
    }
    s.trim_matches('-').to_string()
}

pub fn shell_quote(arg: &str) -> String {
    let plain = !arg.is_empty()
        && arg
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || "_./:,=-".contains(c));
    if plain {
        arg.to_string()
    } else {
        format!("'{}'", arg.replace('\'', r"'\''"))
    }
}

pub fn command_line(args: &[String]) -> String {
    std::iter::once("cyclord".to_string())
        .chain(args.iter().map(|a| shell_quote(a)))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn write(path: &Path, contents: &str) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    fs::write(path, contents).with_context(|| format!("writing {}", path.display()))
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReplayStep {
    pub command: String,
    pub args: Vec<String>,
    /// The answer printed when the failure reproduces.
    pub expect: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct WitnessFile {
    pub instance: String,
    pub suite: Suite,
    pub check: String,
    pub seed: u64,
    pub case: usize,
    pub summary: String,
    pub data: Value,
    /// Query commands whose answers exhibit the failure.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub queries: Vec<ReplayStep>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rule: Option<Rule>,
    /// Reruns exactly the failing case.
    pub rerun: String,
}

impl WitnessFile {
    pub fn witness(&self) -> Witness {
        Witness {
            case: self.case,
            summary: self.summary.clone(),
            data: self.data.clone(),
        }
    }
}

fn witness_file(
    instance: &str,
    suite: Suite,
    check: &str,
    seed: u64,
    w: &Witness,
    answers: &[bool],
) -> WitnessFile {
    let plan = query_plan(suite, check, &w.data);
    let queries = plan
        .as_ref()
        .map(|p| {
            p.queries
                .iter()
                .zip(answers)
                .map(|(q, &expect)| {
                    let args = q.args(instance);
                    ReplayStep {
                        command: command_line(&args),
                        args,
                        expect,
                    }
                })
                .collect()
        })
        .unwrap_or_default();
    let rerun_args: Vec<String> = [
        "check-axioms",
        "--instance",
        instance,
        "--suite",
        suite.name(),
        "--seed",
        &seed.to_string(),
        "--cases",
        &(w.case + 1).to_string(),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    WitnessFile {
        instance: instance.to_string(),
        suite,
        check: check.to_string(),
        seed,
        case: w.case,
        summary: w.summary.clone(),
        data: w.data.clone(),
        queries,
        rule: plan.map(|p| p.rule),
        rerun: command_line(&rerun_args),
    }
}

/// Writes `<suite>.txt` and `<suite>.json`, and one witness file per
/// failing check. Returns the witness paths.
pub fn write_report(
    dir: &Path,
    instance: &str,
    suite: Suite,
    spec: &SampleSpec,
    report: &AxiomReport,
    answers: impl Fn(&str, &Witness) -> Vec<bool>,
) -> Result<Vec<PathBuf>> {
    write(
        &dir.join(format!("{}.txt", suite.name())),
        &report.to_string(),
    )?;
    write(
        &dir.join(format!("{}.json", suite.name())),
        &(report.to_json() + "\n"),
    )?;
    let mut out = Vec::new();
    for c in &report.checks {
        let Some(w) = &c.witness else { continue };
        let wf = witness_file(instance, suite, &c.name, spec.seed, w, &answers(&c.name, w));
        let path = dir.join(format!("witness-{}-{}.json", suite.name(), slug(&c.name)));
        write(&path, &(serde_json::to_string_pretty(&wf)? + "\n"))?;
        out.push(path);
    }
    Ok(out)
}
