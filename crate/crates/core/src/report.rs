//! Pass/counterexample reports produced by the sampled checkers.

use std::fmt;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::sample::SampleSpec;

/// Whether failures in a report are assertions or recorded observations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Asserted,
    Exploratory,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub case: usize,
    pub summary: String,
    /// Full replay data: points, words, elements in their serialized form.
    pub data: Value,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckResult {
    pub name: String,
    /// Cases where the hypothesis held and the conclusion was evaluated.
    pub tested: usize,
    /// Cases where the hypothesis did not hold.
    pub vacuous: usize,
    /// Cases where a partial action left its domain.
    pub undefined: usize,
    pub failures: usize,
    pub witness: Option<Witness>,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Outcome of one check on one case.
#[derive(Debug, Clone)]
pub enum Case {
    Holds,
    Vacuous,
    Undefined,
    Violated(String, Value),
}

impl Case {
    pub fn from_bool(ok: bool, summary: impl FnOnce() -> (String, Value)) -> Case {
        if ok {
            Case::Holds
        } else {
            let (s, v) = summary();
            Case::Violated(s, v)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomReport {
    pub title: String,
    pub instance: String,
    pub mode: Mode,
    pub seed: u64,
    pub cases: usize,
    pub checks: Vec<CheckResult>,
    /// Free-form findings, e.g. witnesses found by a search.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl AxiomReport {
    /// Builds a report from per-case outcome rows; `rows[i][k]` is check
    /// `names[k]` on case `i`. The first failure by case index is kept.
    pub fn from_rows(
        title: &str,
        instance: &str,
        spec: &SampleSpec,
        names: &[&str],
        rows: Vec<Vec<Case>>,
    ) -> AxiomReport {
        let mut checks: Vec<CheckResult> = names
            .iter()
            .map(|n| CheckResult {
                name: n.to_string(),
                tested: 0,
                vacuous: 0,
                undefined: 0,
                failures: 0,
                witness: None,
            })
            .collect();
        for (case, row) in rows.into_iter().enumerate() {
            for (k, outcome) in row.into_iter().enumerate() {
                let c = &mut checks[k];
                match outcome {
                    Case::Holds => c.tested += 1,
                    Case::Vacuous => c.vacuous += 1,
                    Case::Undefined => c.undefined += 1,
                    Case::Violated(summary, data) => {
                        c.tested += 1;
                        c.failures += 1;
                        if c.witness.is_none() {
                            c.witness = Some(Witness {
                                case,
                                summary,
                                data,
                            });
                        }
                    }
                }
            }
        }
        AxiomReport {
            title: title.to_string(),
            instance: instance.to_string(),
            mode: Mode::Asserted,
            seed: spec.seed,
            cases: spec.cases,
            checks,
            notes: Vec::new(),
        }
    }

    pub fn exploratory(mut self) -> Self {
        self.mode = Mode::Exploratory;
        self
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckResult::passed)
    }

    /// Asserted reports fail on any violation; exploratory ones never do.
    pub fn ok(&self) -> bool {
        self.mode == Mode::Exploratory || self.passed()
    }

    pub fn check(&self, name: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

impl fmt::Display for AxiomReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mode = match self.mode {
            Mode::Asserted => "asserted",
            Mode::Exploratory => "exploratory",
        };
        writeln!(
            f,
            "# {} [{}] instance={} seed={} cases={}",
            self.title, mode, self.instance, self.seed, self.cases
        )?;
        for c in &self.checks {
            let tag = if c.passed() { "PASS" } else { "FAIL" };
            write!(
                f,
                "{tag} {} tested={} vacuous={} undefined={} failures={}",
                c.name, c.tested, c.vacuous, c.undefined, c.failures
            )?;
            if let Some(w) = &c.witness {
                write!(f, " witness(case {}): {}", w.case, w.summary)?;
            }
            writeln!(f)?;
        }
        for n in &self.notes {
            writeln!(f, "note: {n}")?;
        }
        Ok(())
    }
}
