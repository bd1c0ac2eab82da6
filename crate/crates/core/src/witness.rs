//! Point queries on an instance, and the query sequences that reproduce a
//! reported failure.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chart::{apply_word, transversal, ChartPoint, GroupWord};
use crate::cyclic::{in_r, replay_totality_witness};
use crate::error::{Error, Result};
use crate::full::{
    act_full, in_r_full, point_from_json, transversal_full, GeometryDescriptor, HomPoint,
};
use crate::instances::{Instance, Suite};
use crate::jordan::{JElem, PoJaDescriptor};
use crate::report::Witness;
use crate::ring::replay_por_witness;

/// Where the points of an instance live: the chart `V ∪ {∞}`, or the full
/// geometry for torus instances.
#[derive(Debug, Clone)]
pub enum Space {
    Chart(PoJaDescriptor),
    Full(GeometryDescriptor),
}

#[derive(Debug, Clone, PartialEq)]
pub enum Point {
    Chart(ChartPoint),
    Full(HomPoint),
}

impl Space {
    pub fn for_instance(inst: &Instance) -> Result<Space> {
        match inst {
            Instance::Torus(_) => Ok(Space::Full(GeometryDescriptor::for_algebra(
                &inst.algebra().expect("torus algebra"),
            )?)),
            Instance::Algebra(d) => Ok(Space::Chart(d.concrete()?)),
            Instance::Ring(r) => Err(Error::NotApplicable(format!("ring {r} has no geometry"))),
        }
    }

    pub fn descriptor(&self) -> &PoJaDescriptor {
        match self {
            Space::Chart(d) => d,
            Space::Full(g) => &g.algebra,
        }
    }

    /// Chart points are `{"inf": true}`, `{"v": coords}`, or bare
    /// coordinates; full-geometry points use their homogeneous form.
    pub fn parse_point(&self, v: &Value) -> Result<Point> {
        match self {
            Space::Full(g) => Ok(Point::Full(point_from_json(g, v)?)),
            Space::Chart(d) => {
                if v.get("inf").is_some() || v.get("v").is_some() {
                    return Ok(Point::Chart(ChartPoint::from_json(d, v)?));
                }
                if v.as_str() == Some("inf") {
                    return Ok(Point::Chart(ChartPoint::infinity(d)));
                }
                Ok(Point::Chart(ChartPoint::Finite(JElem::from_coords_json(
                    d, v,
                )?)))
            }
        }
    }

    pub fn parse_word(&self, v: &Value) -> Result<GroupWord> {
        GroupWord::from_json(self.descriptor(), v)
    }

    pub fn act(&self, w: &GroupWord, p: &Point) -> Result<Point> {
        match (self, p) {
            (Space::Chart(_), Point::Chart(p)) => Ok(Point::Chart(apply_word(w, p)?)),
            (Space::Full(g), Point::Full(p)) => Ok(Point::Full(act_full(g, w, p)?)),
            _ => Err(Error::DescriptorMismatch("point from another space".into())),
        }
    }

    pub fn in_r(&self, a: &Point, x: &Point, b: &Point) -> Result<bool> {
        match (self, a, x, b) {
            (Space::Chart(_), Point::Chart(a), Point::Chart(x), Point::Chart(b)) => in_r(a, x, b),
            (Space::Full(g), Point::Full(a), Point::Full(x), Point::Full(b)) => {
                in_r_full(g, a, x, b)
            }
            _ => Err(Error::DescriptorMismatch("point from another space".into())),
        }
    }

    pub fn transversal(&self, p: &Point, q: &Point) -> Result<bool> {
        match (self, p, q) {
            (Space::Chart(_), Point::Chart(p), Point::Chart(q)) => transversal(p, q),
            (Space::Full(g), Point::Full(p), Point::Full(q)) => transversal_full(g, p, q),
            _ => Err(Error::DescriptorMismatch("point from another space".into())),
        }
    }
}

/// One yes/no question about an instance, answerable by a query subcommand.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "query")]
pub enum Query {
    /// `(a, x, b) ∈ R`, after applying `word` to all three when given.
    Cyclic {
        triple: [Value; 3],
        #[serde(default, skip_serializing_if = "Option::is_none")]
        word: Option<Value>,
    },
    Transversal {
        pair: [Value; 2],
    },
}

impl Query {
    pub fn eval(&self, space: &Space) -> Result<bool> {
        match self {
            Query::Cyclic { triple, word } => {
                let mut p = triple
                    .iter()
                    .map(|v| space.parse_point(v))
                    .collect::<Result<Vec<_>>>()?;
                if let Some(w) = word {
                    let w = space.parse_word(w)?;
                    p = p.iter().map(|x| space.act(&w, x)).collect::<Result<_>>()?;
                }
                space.in_r(&p[0], &p[1], &p[2])
            }
            Query::Transversal { pair } => {
                let p = space.parse_point(&pair[0])?;
                let q = space.parse_point(&pair[1])?;
                space.transversal(&p, &q)
            }
        }
    }

    /// Command-line arguments after the program name.
    pub fn args(&self, instance: &str) -> Vec<String> {
        let compact = |v: &Value| serde_json::to_string(v).expect("json");
        match self {
            Query::Cyclic { triple, word } => {
                let mut a = vec![
                    "query-cyclic".into(),
                    "--instance".into(),
                    instance.into(),
                    "--triple".into(),
                    compact(&json!(triple)),
                ];
                if let Some(w) = word {
                    a.extend(["--word".into(), compact(w)]);
                }
                a
            }
            Query::Transversal { pair } => vec![
                "query-transversal".into(),
                "--instance".into(),
                instance.into(),
                "--pair".into(),
                compact(&json!(pair)),
            ],
        }
    }
}

/// How the answers to a query sequence show the failure.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Rule {
    /// The two answers differ.
    Differ,
    /// Every answer is true.
    AllTrue,
    /// Every answer is false.
    AllFalse,
    /// All answers but the last are true, the last is false.
    PremisesWithoutConclusion,
    /// The first answer is true and some later one is false.
    FirstButNotRest,
}

impl Rule {
    pub fn violated(self, answers: &[bool]) -> bool {
        match self {
            Rule::Differ => answers.len() == 2 && answers[0] != answers[1],
            Rule::AllTrue => answers.iter().all(|&x| x),
            Rule::AllFalse => answers.iter().all(|&x| !x),
            Rule::PremisesWithoutConclusion => answers
                .split_last()
                .is_some_and(|(last, pre)| !last && pre.iter().all(|&x| x)),
            Rule::FirstButNotRest => {
                answers.first() == Some(&true) && answers[1..].iter().any(|&x| !x)
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QueryPlan {
    pub queries: Vec<Query>,
    pub rule: Rule,
}

fn pts<const K: usize>(data: &Value, keys: [&str; K]) -> Option<[Value; K]> {
    let v: Vec<Value> = keys
        .iter()
        .map(|k| data.get(*k).cloned())
        .collect::<Option<_>>()?;
    v.try_into().ok()
}

fn cyc(t: [&Value; 3]) -> Query {
    Query::Cyclic {
        triple: t.map(Value::clone),
        word: None,
    }
}

fn cyc_w(t: [&Value; 3], w: &Value) -> Query {
    Query::Cyclic {
        triple: t.map(Value::clone),
        word: Some(w.clone()),
    }
}

fn tr(p: &Value, q: &Value) -> Query {
    Query::Transversal {
        pair: [p.clone(), q.clone()],
    }
}

/// Queries reproducing a failure of `check`, for the checks whose witness
/// consists of points (and words) only.
pub fn query_plan(suite: Suite, check: &str, data: &Value) -> Option<QueryPlan> {
    use Rule::*;
    let (queries, rule) = match (suite, check) {
        (Suite::Pco, "cyclicity") => {
            let [a, b, c] = pts(data, ["a", "b", "c"])?;
            (vec![cyc([&a, &b, &c]), cyc([&b, &c, &a])], Differ)
        }
        (Suite::Pco, "asymmetry") => {
            let [a, b, c] = pts(data, ["a", "b", "c"])?;
            (vec![cyc([&a, &b, &c]), cyc([&c, &b, &a])], AllTrue)
        }
        (Suite::Pco, "transitivity") => {
            let [a, b, c, d] = pts(data, ["a", "b", "c", "d"])?;
            (
                vec![cyc([&a, &b, &c]), cyc([&a, &c, &d]), cyc([&a, &b, &d])],
                PremisesWithoutConclusion,
            )
        }
        (Suite::Pco, "r-implies-transversal") => {
            let [a, b, c] = pts(data, ["a", "b", "c"])?;
            (
                vec![cyc([&a, &b, &c]), tr(&a, &b), tr(&b, &c), tr(&a, &c)],
                FirstButNotRest,
            )
        }
        (Suite::Invariance, "G0-invariance") => {
            let [a, x, b, w] = pts(data, ["a", "x", "b", "word"])?;
            (vec![cyc([&a, &x, &b]), cyc_w([&a, &x, &b], &w)], Differ)
        }
        (Suite::Invariance, "inversion-reversal") => {
            let [a, x, b, w] = pts(data, ["a", "x", "b", "word"])?;
            (vec![cyc([&a, &x, &b]), cyc_w([&b, &x, &a], &w)], Differ)
        }
        (Suite::Convexity, "interval-convexity") => {
            let [a, u, x, v, b] = pts(data, ["a", "u", "x", "v", "b"])?;
            (
                vec![
                    cyc([&a, &u, &b]),
                    cyc([&a, &v, &b]),
                    cyc([&a, &u, &v]),
                    cyc([&u, &x, &v]),
                    cyc([&a, &x, &b]),
                ],
                PremisesWithoutConclusion,
            )
        }
        (Suite::Convexity, "induced-order-transfer") => {
            let [a, u, v, b] = pts(data, ["a", "u", "v", "b"])?;
            (
                vec![
                    cyc([&a, &u, &b]),
                    cyc([&a, &v, &b]),
                    cyc([&a, &u, &v]),
                    cyc([&b, &u, &v]),
                ],
                PremisesWithoutConclusion,
            )
        }
        (Suite::Totality, "totality") => {
            let [a, b, c] = pts(data, ["a", "b", "c"])?;
            (vec![cyc([&a, &b, &c]), cyc([&a, &c, &b])], AllFalse)
        }
        _ => return None,
    };
    Some(QueryPlan { queries, rule })
}

/// Outcome of replaying a witness.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Replay {
    /// Query answers in plan order; empty for direct re-evaluation.
    pub answers: Vec<bool>,
    pub reproduced: bool,
}

/// Re-evaluates a witness: through its query plan when it has one,
/// otherwise directly for ring-level and totality witnesses.
pub fn replay(inst: &Instance, suite: Suite, check: &str, w: &Witness) -> Result<Replay> {
    if let Some(plan) = query_plan(suite, check, &w.data) {
        let space = Space::for_instance(inst)?;
        let answers = plan
            .queries
            .iter()
            .map(|q| q.eval(&space))
            .collect::<Result<Vec<_>>>()?;
        let reproduced = plan.rule.violated(&answers);
        return Ok(Replay {
            answers,
            reproduced,
        });
    }
    let reproduced = match suite {
        Suite::Por => replay_por_witness(&inst.ring(), check, &w.data)?,
        Suite::Totality => match Space::for_instance(inst)? {
            Space::Chart(d) => replay_totality_witness(&d, &w.data)?,
            Space::Full(_) => {
                return Err(Error::NotApplicable("totality replay on a torus".into()))
            }
        },
        _ => {
            return Err(Error::NotApplicable(format!(
                "no direct replay for {suite}/{check}"
            )))
        }
    };
    Ok(Replay {
        answers: Vec::new(),
        reproduced,
    })
}
