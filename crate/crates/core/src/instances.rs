//! Named instances, descriptor text syntax, and the suite dispatcher.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::affine::{check_hyperbolic, check_torus_boxes, check_two_paths};
use crate::cyclic::{
    check_compression_model, check_convexity_model, check_invariance_model, check_pco_model,
    check_totality_model, ChartModel, CyclicModel,
};
use crate::error::{Error, Result};
use crate::full::{check_chart_full_consistency, TorusGridModel};
use crate::jordan::{check_formally_real, check_jordan_axioms, check_poja_axioms, PoJaDescriptor};
use crate::report::AxiomReport;
use crate::ring::{check_por_axioms, RingDescriptor};
use crate::sample::SampleSpec;
use crate::topology::{spectral_ball_check, tangent_fiber_inseparability};
use crate::tube::tube_experiment;

/// What an instance name refers to.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Instance {
    Algebra(PoJaDescriptor),
    /// `n` circles, sampled on the cube grid.
    Torus(usize),
    /// A base ring alone, for the por suite.
    Ring(RingDescriptor),
}

impl Instance {
    pub fn algebra(&self) -> Option<PoJaDescriptor> {
        match self {
            Instance::Algebra(d) => Some(d.clone()),
            Instance::Torus(n) => Some(torus_algebra(*n)),
            Instance::Ring(_) => None,
        }
    }

    pub fn ring(&self) -> RingDescriptor {
        match self {
            Instance::Algebra(d) => d.concrete().map(|c| c.ring()).unwrap_or_else(|_| d.ring()),
            Instance::Torus(_) => RingDescriptor::Q,
            Instance::Ring(r) => r.clone(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Instance::Algebra(d) => d.validate(),
            Instance::Torus(n) if *n == 0 => {
                Err(Error::UnsupportedSize("torus of dimension 0".into()))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for Instance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Instance::Algebra(d) => write!(f, "{d}"),
            Instance::Torus(n) => write!(f, "torus{n}"),
            Instance::Ring(r) => write!(f, "ring {r}"),
        }
    }
}

pub fn torus_algebra(n: usize) -> PoJaDescriptor {
    PoJaDescriptor::product(vec![PoJaDescriptor::scalar(RingDescriptor::Q); n])
}

pub const BUILTIN: [(&str, &str); 11] = [
    ("q", "Scalar(Q)"),
    ("qq", "Product(Scalar(Q),Scalar(Q))"),
    ("torus2", "two circles on the cube grid"),
    ("torus3", "three circles on the cube grid"),
    ("sym2q", "Sym(2,Q)"),
    ("sym3q", "Sym(3,Q)"),
    ("spin3q", "Spin(3,Q)"),
    ("dual-q", "DualExt(Scalar(Q))"),
    ("dual-sym2q", "DualExt(Sym(2,Q))"),
    ("zint", "ring Z"),
    ("trivial-n", "ring Q with the N-order"),
];

/// A built-in alias, or descriptor text such as `Sym(2,Q)`.
pub fn lookup(name: &str) -> Result<Instance> {
    let q = || PoJaDescriptor::scalar(RingDescriptor::Q);
    let inst = match name.trim() {
        "q" => Instance::Algebra(q()),
        "qq" => Instance::Algebra(PoJaDescriptor::product(vec![q(), q()])),
        "torus2" => Instance::Torus(2),
        "torus3" => Instance::Torus(3),
        "sym2q" => Instance::Algebra(PoJaDescriptor::sym(2, RingDescriptor::Q)),
        "sym3q" => Instance::Algebra(PoJaDescriptor::sym(3, RingDescriptor::Q)),
        "spin3q" => Instance::Algebra(PoJaDescriptor::spin(3, RingDescriptor::Q)),
        "dual-q" => Instance::Algebra(PoJaDescriptor::dual_ext(q())),
        "dual-sym2q" => Instance::Algebra(PoJaDescriptor::dual_ext(PoJaDescriptor::sym(
            2,
            RingDescriptor::Q,
        ))),
        "zint" => Instance::Ring(RingDescriptor::ZInt),
        "trivial-n" => Instance::Ring(RingDescriptor::TrivialNOrder),
        other => Instance::Algebra(parse_descriptor(other)?),
    };
    inst.validate()?;
    Ok(inst)
}

// -- descriptor text ---------------------------------------------------------

struct Parser<'a> {
    s: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err(&self, what: &str) -> Error {
        Error::Parse(format!("{what} at offset {} in {:?}", self.pos, self.s))
    }

    fn skip_ws(&mut self) {
        while self.s[self.pos..].starts_with(' ') {
            self.pos += 1;
        }
    }

    fn eat(&mut self, tok: &str) -> bool {
        self.skip_ws();
        if self.s[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        if self.eat(tok) {
            Ok(())
        } else {
            Err(self.err(&format!("expected {tok:?}")))
        }
    }

    fn ident(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let rest = &self.s[self.pos..];
        let len = rest
            .find(|c: char| !(c.is_ascii_alphanumeric() || c == '[' || c == ']'))
            .unwrap_or(rest.len());
        if len == 0 {
            return Err(self.err("expected a name"));
        }
        self.pos += len;
        Ok(&rest[..len])
    }

    fn number(&mut self) -> Result<usize> {
        self.ident()?
            .parse()
            .map_err(|_| self.err("expected a size"))
    }

    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T>) -> Result<Vec<T>> {
        self.expect("(")?;
        let mut out = vec![item(self)?];
        while self.eat(",") {
            out.push(item(self)?);
        }
        self.expect(")")?;
        Ok(out)
    }

    fn ring(&mut self) -> Result<RingDescriptor> {
        Ok(match self.ident()? {
            "Q" => RingDescriptor::Q,
            "DualQ" | "Q[eps]" => RingDescriptor::DualQ,
            "GaussQ" | "Q[i]" => RingDescriptor::GaussQ,
            "DualGaussQ" | "Q[eps][i]" => RingDescriptor::DualGaussQ,
            "ZInt" | "Z" => RingDescriptor::ZInt,
            "TrivialNOrder" => RingDescriptor::TrivialNOrder,
            "ProductRing" => RingDescriptor::product(self.list(Self::ring)?)?,
            other => return Err(Error::Parse(format!("unknown ring {other:?}"))),
        })
    }

    fn descriptor(&mut self) -> Result<PoJaDescriptor> {
        Ok(match self.ident()? {
            "Scalar" => {
                self.expect("(")?;
                let r = self.ring()?;
                self.expect(")")?;
                PoJaDescriptor::scalar(r)
            }
            kind @ ("Sym" | "Spin") => {
                self.expect("(")?;
                let n = self.number()?;
                self.expect(",")?;
                let r = self.ring()?;
                self.expect(")")?;
                if kind == "Sym" {
                    PoJaDescriptor::sym(n, r)
                } else {
                    PoJaDescriptor::spin(n, r)
                }
            }
            "Product" => PoJaDescriptor::product(self.list(Self::descriptor)?),
            "DualExt" => {
                self.expect("(")?;
                let d = self.descriptor()?;
                self.expect(")")?;
                PoJaDescriptor::dual_ext(d)
            }
            other => return Err(Error::Parse(format!("unknown algebra {other:?}"))),
        })
    }
}

/// Parses `Scalar(R)`, `Sym(n,R)`, `Spin(m,R)`, `Product(D,…)`,
/// `DualExt(D)` with rings `Q`, `DualQ`, `GaussQ`, `DualGaussQ`, `ZInt`,
/// `TrivialNOrder`, `ProductRing(R,…)`.
pub fn parse_descriptor(s: &str) -> Result<PoJaDescriptor> {
    let mut p = Parser { s, pos: 0 };
    let d = p.descriptor()?;
    p.skip_ws();
    if p.pos != s.len() {
        return Err(p.err("trailing input"));
    }
    d.validate()?;
    Ok(d)
}

// -- suites ------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Por,
    Jordan,
    Poja,
    FormalReality,
    Pco,
    Invariance,
    Convexity,
    Compression,
    Totality,
    TwoPath,
    Hyperbolic,
    ChartFull,
    TorusBoxes,
    TangentFiber,
    SpectralBall,
    Tube,
}

pub const ALL_SUITES: [Suite; 16] = [
    Suite::Por,
    Suite::Jordan,
    Suite::Poja,
    Suite::FormalReality,
    Suite::Pco,
    Suite::Invariance,
    Suite::Convexity,
    Suite::Compression,
    Suite::Totality,
    Suite::TwoPath,
    Suite::Hyperbolic,
    Suite::ChartFull,
    Suite::TorusBoxes,
    Suite::TangentFiber,
    Suite::SpectralBall,
    Suite::Tube,
];

impl Suite {
    pub fn name(self) -> &'static str {
        match self {
            Suite::Por => "por",
            Suite::Jordan => "jordan",
            Suite::Poja => "poja",
            Suite::FormalReality => "formal-reality",
            Suite::Pco => "pco",
            Suite::Invariance => "invariance",
            Suite::Convexity => "convexity",
            Suite::Compression => "compression",
            Suite::Totality => "totality",
            Suite::TwoPath => "two-path",
            Suite::Hyperbolic => "hyperbolic",
            Suite::ChartFull => "chart-full",
            Suite::TorusBoxes => "torus-boxes",
            Suite::TangentFiber => "tangent-fiber",
            Suite::SpectralBall => "spectral-ball",
            Suite::Tube => "tube",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Suite> {
        ALL_SUITES
            .iter()
            .copied()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::Parse(format!("unknown suite {s:?}")))
    }
}

/// The axiom suites run by default on an instance.
pub fn default_suites(inst: &Instance) -> Vec<Suite> {
    match inst {
        Instance::Ring(_) => vec![Suite::Por],
        Instance::Torus(_) => vec![
            Suite::Por,
            Suite::Pco,
            Suite::Invariance,
            Suite::Convexity,
            Suite::TorusBoxes,
        ],
        Instance::Algebra(d) => {
            let mut v = vec![Suite::Por, Suite::Jordan];
            if d.is_ordered() {
                v.extend([
                    Suite::Poja,
                    Suite::FormalReality,
                    Suite::Pco,
                    Suite::Invariance,
                    Suite::Convexity,
                    Suite::Compression,
                ]);
            }
            v
        }
    }
}

fn with_model<T>(
    inst: &Instance,
    chart: impl FnOnce(&ChartModel) -> T,
    torus: impl FnOnce(&TorusGridModel) -> T,
) -> Result<T> {
    match inst {
        Instance::Torus(n) => Ok(torus(&TorusGridModel::new(*n)?)),
        _ => Ok(chart(&ChartModel::new(&need_algebra(inst)?)?)),
    }
}

fn need_algebra(inst: &Instance) -> Result<PoJaDescriptor> {
    inst.algebra()
        .ok_or_else(|| Error::NotApplicable(format!("{inst} is a ring, not an algebra")))
}

/// Runs one suite on one instance.
pub fn run_suite(inst: &Instance, suite: Suite, spec: &SampleSpec) -> Result<AxiomReport> {
    let mut report = match suite {
        Suite::Por => check_por_axioms(&inst.ring(), spec),
        Suite::Jordan => check_jordan_axioms(&need_algebra(inst)?, spec),
        Suite::Poja => check_poja_axioms(&need_algebra(inst)?, spec),
        Suite::FormalReality => check_formally_real(&need_algebra(inst)?, spec),
        Suite::Pco => with_model(
            inst,
            |m| check_pco_model(m, spec),
            |m| check_pco_model(m, spec),
        ),
        Suite::Invariance => with_model(
            inst,
            |m| check_invariance_model(m, spec),
            |m| check_invariance_model(m, spec),
        ),
        Suite::Convexity => with_model(
            inst,
            |m| check_convexity_model(m, spec),
            |m| check_convexity_model(m, spec),
        ),
        Suite::Compression => with_model(
            inst,
            |m| check_compression_model(m, spec),
            |m| check_compression_model(m, spec),
        ),
        Suite::Totality => with_model(
            inst,
            |m| check_totality_model(m, spec),
            |m| check_totality_model(m, spec),
        )
        .map(|r| r.exploratory()),
        Suite::TwoPath => check_two_paths(&need_algebra(inst)?, spec),
        Suite::Hyperbolic => check_hyperbolic(&need_algebra(inst)?, spec),
        Suite::ChartFull => check_chart_full_consistency(&need_algebra(inst)?, spec),
        Suite::TorusBoxes => match inst {
            Instance::Torus(n) => check_torus_boxes(*n, spec),
            _ => Err(Error::NotApplicable(
                "torus-boxes needs a torus instance".into(),
            )),
        },
        Suite::TangentFiber => match need_algebra(inst)? {
            PoJaDescriptor::DualExt(base) => tangent_fiber_inseparability(&base, spec),
            d => tangent_fiber_inseparability(&d, spec),
        },
        Suite::SpectralBall => match need_algebra(inst)? {
            PoJaDescriptor::Sym {
                n,
                ring: RingDescriptor::Q,
            } => spectral_ball_check(n, spec),
            d => Err(Error::NotApplicable(format!(
                "spectral ball needs Sym(n,Q), not {d}"
            ))),
        },
        Suite::Tube => tube_experiment(&need_algebra(inst)?, spec),
    }?;
    if matches!(inst, Instance::Torus(_)) {
        report.instance = inst.to_string();
    }
    Ok(report)
}

/// The label used by chart-model reports for `inst`.
pub fn model_label(inst: &Instance) -> Result<String> {
    with_model(inst, |m| m.label(), |m| m.label())
}
