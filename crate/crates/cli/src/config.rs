//! The `run --config` document.
//!
//! ```toml
//! seed = 7
//! cases = 1000
//!
//! [instances]
//! mine = "Sym(2,Q)"
//! tree = { Spin = { m = 3, ring = "Q" } }
//!
//! [[check]]
//! instance = "mine"
//! suites = ["pco", "invariance"]
//!
//! [[image]]
//! instance = "q"
//! a = "1"
//! b = "-1"
//! grid = "-4:4:64"
//! svg = "q-hyperbolic.svg"
//!
//! [[torus]]
//! n = 2
//! a = ["1/2", "1/2"]
//! b = ["-1/2", "-1/2"]
//! svg = "torus2.svg"
//!
//! [[probe]]
//! instance = "dual-q"
//! probe = "tangent-fiber"
//!
//! [[tube]]
//! instance = "sym2q"
//! ```
//!
//! Instance names resolve against `[instances]` first, then the built-in
//! aliases and descriptor text. Relative figure paths are taken inside the
//! output directory.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use cyclord::instances::Suite;
use cyclord::{PoJaDescriptor, SampleSpec};
use serde::Deserialize;
use serde_json::Value;

use crate::commands::{self, ImageJob, Named, Outcome, Probe, TorusJob};

#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum InstanceDecl {
    Text(String),
    Tree(PoJaDescriptor),
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct CheckJob {
    instance: String,
    #[serde(default)]
    suites: Vec<Suite>,
    seed: Option<u64>,
    cases: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ProbeJob {
    instance: String,
    probe: Probe,
    #[serde(default)]
    pair: Option<Vec<toml::Value>>,
    #[serde(default)]
    endpoints: Option<Vec<toml::Value>>,
    seed: Option<u64>,
    cases: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct TubeJob {
    instance: String,
    seed: Option<u64>,
    cases: Option<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Config {
    #[serde(default)]
    seed: u64,
    #[serde(default = "default_cases")]
    cases: usize,
    out: Option<PathBuf>,
    #[serde(default)]
    instances: BTreeMap<String, InstanceDecl>,
    #[serde(default)]
    check: Vec<CheckJob>,
    #[serde(default)]
    image: Vec<toml::Value>,
    #[serde(default)]
    torus: Vec<TorusJob>,
    #[serde(default)]
    probe: Vec<ProbeJob>,
    #[serde(default)]
    tube: Vec<TubeJob>,
}

fn default_cases() -> usize {
    1000
}

fn to_json(v: &toml::Value) -> Value {
    serde_json::to_value(v).expect("toml values are json values")
}

struct Resolver<'a> {
    named: BTreeMap<&'a str, String>,
}

impl Resolver<'_> {
    fn resolve(&self, field: &str, name: &str) -> Result<Named> {
        let text = self
            .named
            .get(name)
            .cloned()
            .unwrap_or_else(|| name.to_string());
        cyclord::instances::lookup(&text)
            .map_err(|e| anyhow!("{field}: instance {name:?}: {e}"))?;
        Ok(Named {
            label: name.to_string(),
            text,
        })
    }
}

fn relative_to(out: &Path, p: &Option<PathBuf>) -> Option<PathBuf> {
    p.as_ref().map(|p| {
        if p.is_absolute() {
            p.clone()
        } else {
            out.join(p)
        }
    })
}

pub fn load(text: &str) -> Result<ConfigPlan> {
    let cfg: Config = toml::from_str(text).map_err(|e| anyhow!("config error: {e}"))?;
    let mut named = BTreeMap::new();
    for (k, decl) in &cfg.instances {
        let text = match decl {
            InstanceDecl::Text(t) => t.clone(),
            InstanceDecl::Tree(d) => {
                d.validate().map_err(|e| anyhow!("instances.{k}: {e}"))?;
                d.to_string()
            }
        };
        named.insert(k.as_str(), text);
    }
    let r = Resolver { named };
    for (k, text) in &r.named {
        cyclord::instances::lookup(text).map_err(|e| anyhow!("instances.{k}: {e}"))?;
    }
    let spec = |seed: Option<u64>, cases: Option<usize>| {
        SampleSpec::new(seed.unwrap_or(cfg.seed), cases.unwrap_or(cfg.cases))
    };
    let mut jobs = Vec::new();
    for (i, c) in cfg.check.iter().enumerate() {
        jobs.push(Job::Check {
            instance: r.resolve(&format!("check[{i}].instance"), &c.instance)?,
            suites: c.suites.clone(),
            spec: spec(c.seed, c.cases),
        });
    }
    for (i, v) in cfg.image.iter().enumerate() {
        let mut job: ImageJob =
            serde_json::from_value(to_json(v)).map_err(|e| anyhow!("image[{i}]: {e}"))?;
        let named = r.resolve(&format!("image[{i}].instance"), &job.instance)?;
        job.instance = named.text;
        job.label = Some(named.label);
        jobs.push(Job::Image(job));
    }
    for (i, t) in cfg.torus.iter().enumerate() {
        if t.a.len() != t.n || t.b.len() != t.n {
            bail!("torus[{i}]: a and b need {} coordinates", t.n);
        }
        jobs.push(Job::Torus(t.clone()));
    }
    for (i, p) in cfg.probe.iter().enumerate() {
        let pair = p
            .pair
            .as_ref()
            .map(|v| v.iter().map(to_json).collect::<Vec<_>>());
        if pair.as_ref().is_some_and(|v| v.len() != 2) {
            bail!("probe[{i}].pair: expected two points");
        }
        jobs.push(Job::Probe {
            instance: r.resolve(&format!("probe[{i}].instance"), &p.instance)?,
            probe: p.probe,
            pair,
            endpoints: p
                .endpoints
                .as_ref()
                .map(|v| Value::Array(v.iter().map(to_json).collect())),
            spec: spec(p.seed, p.cases),
        });
    }
    for (i, t) in cfg.tube.iter().enumerate() {
        jobs.push(Job::Tube {
            instance: r.resolve(&format!("tube[{i}].instance"), &t.instance)?,
            spec: spec(t.seed, t.cases),
        });
    }
    Ok(ConfigPlan { out: cfg.out, jobs })
}

pub struct ConfigPlan {
    out: Option<PathBuf>,
    jobs: Vec<Job>,
}

enum Job {
    Check {
        instance: Named,
        suites: Vec<Suite>,
        spec: SampleSpec,
    },
    Image(ImageJob),
    Torus(TorusJob),
    Probe {
        instance: Named,
        probe: Probe,
        pair: Option<Vec<Value>>,
        endpoints: Option<Value>,
        spec: SampleSpec,
    },
    Tube {
        instance: Named,
        spec: SampleSpec,
    },
}

/// Validates the whole document before running any job.
pub fn run(path: &Path, out: &Path) -> Result<Outcome> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let plan = load(&text).with_context(|| format!("in {}", path.display()))?;
    let out = plan.out.as_deref().unwrap_or(out);
    let mut outcome = Outcome::Pass;
    for job in plan.jobs {
        let o = match job {
            Job::Check {
                instance,
                suites,
                spec,
            } => commands::check_axioms(&instance, &suites, &spec, out)?,
            Job::Image(mut j) => {
                j.svg = relative_to(out, &j.svg);
                j.csv = relative_to(out, &j.csv);
                commands::interval_image(&j, out)?
            }
            Job::Torus(mut j) => {
                j.svg = relative_to(out, &j.svg);
                j.csv = relative_to(out, &j.csv);
                commands::torus(&j, out)?
            }
            Job::Probe {
                instance,
                probe,
                pair,
                endpoints,
                spec,
            } => commands::topology_probe(&instance, probe, pair, endpoints, &spec, out)?,
            Job::Tube { instance, spec } => {
                commands::single_suite(&instance, Suite::Tube, &spec, out)?
            }
        };
        outcome = outcome.and(o);
    }
    Ok(outcome)
}
