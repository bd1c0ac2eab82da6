//! The chart model `V ∪ {∞}` with partial actions of generator words.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::jordan::{JElem, PoJaDescriptor};
use crate::sample::Sampler;

/// A point of `V ∪ {∞}`. `Infinity` remembers its algebra so that
/// `Jinv(∞) = 0` is well defined.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum ChartPoint {
    Finite(JElem),
    Infinity(PoJaDescriptor),
}

impl ChartPoint {
    pub fn infinity(desc: &PoJaDescriptor) -> ChartPoint {
        ChartPoint::Infinity(desc.concrete().expect("validated descriptor"))
    }

    /// The base point `o`.
    pub fn origin(desc: &PoJaDescriptor) -> ChartPoint {
        ChartPoint::Finite(desc.zero())
    }

    pub fn descriptor(&self) -> &PoJaDescriptor {
        match self {
            ChartPoint::Finite(v) => v.descriptor(),
            ChartPoint::Infinity(d) => d,
        }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, ChartPoint::Infinity(_))
    }

    pub fn finite(&self) -> Option<&JElem> {
        match self {
            ChartPoint::Finite(v) => Some(v),
            ChartPoint::Infinity(_) => None,
        }
    }

    pub fn same_algebra(&self, o: &ChartPoint) -> Result<()> {
        if self.descriptor() == o.descriptor() {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(format!(
                "{} vs {}",
                self.descriptor(),
                o.descriptor()
            )))
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            ChartPoint::Finite(v) => json!({ "v": v.coords_json() }),
            ChartPoint::Infinity(_) => json!({ "inf": true }),
        }
    }

    /// Reads `{"inf": true}` or `{"v": coords}`; `v` may also be a full
    /// element record with its own descriptor, which must match `desc`.
    pub fn from_json(desc: &PoJaDescriptor, v: &Value) -> Result<ChartPoint> {
        if v.get("inf").and_then(Value::as_bool) == Some(true) {
            return Ok(ChartPoint::infinity(desc));
        }
        let inner = v
            .get("v")
            .ok_or_else(|| Error::Parse(format!("not a chart point: {v}")))?;
        let e = if inner.get("descriptor").is_some() {
            let e = JElem::from_json(inner)?;
            if *e.descriptor() != desc.concrete()? {
                return Err(Error::DescriptorMismatch(format!(
                    "{} vs {desc}",
                    e.descriptor()
                )));
            }
            e
        } else {
            JElem::from_coords_json(desc, inner)?
        };
        Ok(ChartPoint::Finite(e))
    }
}

impl fmt::Display for ChartPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ChartPoint::Finite(v) => write!(f, "{v}"),
            ChartPoint::Infinity(_) => write!(f, "inf"),
        }
    }
}

/// `p ⊤ q`: the difference of two finite points is invertible; `∞` is
/// transversal to every finite point and not to itself.
pub fn transversal(p: &ChartPoint, q: &ChartPoint) -> Result<bool> {
    p.same_algebra(q)?;
    Ok(match (p, q) {
        (ChartPoint::Finite(u), ChartPoint::Finite(v)) => u.sub(v).is_invertible(),
        (ChartPoint::Infinity(_), ChartPoint::Infinity(_)) => false,
        _ => true,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Generator {
    Trans(JElem),
    /// `j ∘ t_v ∘ j`.
    TildeTrans(JElem),
    /// `Q_y` for invertible `y`.
    Quad(JElem),
    Neg,
    Jinv,
}

impl Generator {
    /// Number of inversions (0 or 1).
    pub fn parity(&self) -> u8 {
        matches!(self, Generator::Neg | Generator::Jinv) as u8
    }

    pub fn inverse(&self) -> Result<Generator> {
        Ok(match self {
            Generator::Trans(v) => Generator::Trans(v.neg()),
            Generator::TildeTrans(v) => Generator::TildeTrans(v.neg()),
            Generator::Quad(y) => Generator::Quad(y.inverse()?),
            Generator::Neg => Generator::Neg,
            Generator::Jinv => Generator::Jinv,
        })
    }

    pub fn payload(&self) -> Option<&JElem> {
        match self {
            Generator::Trans(v) | Generator::TildeTrans(v) | Generator::Quad(v) => Some(v),
            _ => None,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Generator::Trans(v) => json!({ "gen": "trans", "v": v.coords_json() }),
            Generator::TildeTrans(v) => json!({ "gen": "tilde_trans", "v": v.coords_json() }),
            Generator::Quad(y) => json!({ "gen": "quad", "v": y.coords_json() }),
            Generator::Neg => json!({ "gen": "neg" }),
            Generator::Jinv => json!({ "gen": "jinv" }),
        }
    }

    pub fn from_json(desc: &PoJaDescriptor, v: &Value) -> Result<Generator> {
        let tag = v
            .get("gen")
            .and_then(Value::as_str)
            .ok_or_else(|| Error::Parse(format!("not a generator: {v}")))?;
        let payload = || -> Result<JElem> {
            JElem::from_coords_json(
                desc,
                v.get("v")
                    .ok_or_else(|| Error::Parse(format!("{tag} needs v")))?,
            )
        };
        Ok(match tag {
            "trans" => Generator::Trans(payload()?),
            "tilde_trans" => Generator::TildeTrans(payload()?),
            "quad" => {
                let y = payload()?;
                if !y.is_invertible() {
                    return Err(Error::NotInvertible);
                }
                Generator::Quad(y)
            }
            "neg" => Generator::Neg,
            "jinv" => Generator::Jinv,
            other => return Err(Error::Parse(format!("unknown generator {other}"))),
        })
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Generator::Trans(v) => write!(f, "t[{v}]"),
            Generator::TildeTrans(v) => write!(f, "~t[{v}]"),
            Generator::Quad(y) => write!(f, "Q[{y}]"),
            Generator::Neg => write!(f, "neg"),
            Generator::Jinv => write!(f, "j"),
        }
    }
}

fn jinv_point(p: &ChartPoint) -> Result<ChartPoint> {
    match p {
        ChartPoint::Infinity(d) => Ok(ChartPoint::Finite(d.zero())),
        ChartPoint::Finite(v) => match v.inverse() {
            Ok(w) => Ok(ChartPoint::Finite(w)),
            Err(Error::NotInvertible) if v.is_zero() => {
                Ok(ChartPoint::Infinity(v.descriptor().clone()))
            }
            Err(Error::NotInvertible) => Err(Error::LeavesChart),
            Err(e) => Err(e),
        },
    }
}

fn check_payload(g: &JElem, p: &ChartPoint) -> Result<()> {
    if g.descriptor() == p.descriptor() {
        Ok(())
    } else {
        Err(Error::DescriptorMismatch(format!(
            "generator over {} on point of {}",
            g.descriptor(),
            p.descriptor()
        )))
    }
}

pub fn apply_generator(g: &Generator, p: &ChartPoint) -> Result<ChartPoint> {
    match g {
        Generator::Trans(w) => {
            check_payload(w, p)?;
            Ok(match p {
                ChartPoint::Finite(v) => ChartPoint::Finite(v.add(w)),
                inf => inf.clone(),
            })
        }
        Generator::TildeTrans(w) => {
            let q = jinv_point(p)?;
            let q = apply_generator(&Generator::Trans(w.clone()), &q)?;
            jinv_point(&q)
        }
        Generator::Quad(y) => {
            check_payload(y, p)?;
            if !y.is_invertible() {
                return Err(Error::NotInvertible);
            }
            Ok(match p {
                ChartPoint::Finite(v) => ChartPoint::Finite(y.quad_apply(v)),
                inf => inf.clone(),
            })
        }
        Generator::Neg => Ok(match p {
            ChartPoint::Finite(v) => ChartPoint::Finite(v.neg()),
            inf => inf.clone(),
        }),
        Generator::Jinv => jinv_point(p),
    }
}

/// A finite word of generators, applied left to right (the first
/// generator acts first).
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct GroupWord {
    pub gens: Vec<Generator>,
}

impl GroupWord {
    pub fn new(gens: Vec<Generator>) -> GroupWord {
        GroupWord { gens }
    }

    pub fn empty() -> GroupWord {
        GroupWord::default()
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    /// Inversion count mod 2: 0 for elements of G₀.
    pub fn parity(&self) -> u8 {
        self.gens.iter().map(Generator::parity).sum::<u8>() % 2
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &GroupWord) -> GroupWord {
        GroupWord {
            gens: self.gens.iter().chain(&next.gens).cloned().collect(),
        }
    }

    /// The inverse group element.
    pub fn inverse(&self) -> Result<GroupWord> {
        Ok(GroupWord {
            gens: self
                .gens
                .iter()
                .rev()
                .map(Generator::inverse)
                .collect::<Result<_>>()?,
        })
    }

    pub fn apply(&self, p: &ChartPoint) -> Result<ChartPoint> {
        apply_word(self, p)
    }

    pub fn to_json(&self) -> Value {
        Value::Array(self.gens.iter().map(Generator::to_json).collect())
    }

    pub fn from_json(desc: &PoJaDescriptor, v: &Value) -> Result<GroupWord> {
        let arr = v
            .as_array()
            .ok_or_else(|| Error::Parse("a word is an array of generators".into()))?;
        Ok(GroupWord {
            gens: arr
                .iter()
                .map(|g| Generator::from_json(desc, g))
                .collect::<Result<_>>()?,
        })
    }

    /// A random word of length at most `max_len` (≥ 1) with the requested
    /// parity.
    pub fn sample(desc: &PoJaDescriptor, s: &mut Sampler, max_len: usize, parity: u8) -> GroupWord {
        let len = s.index(max_len);
        let gens = (0..len)
            .map(|_| match s.index(5) {
                0 => Generator::Trans(desc.sample(s)),
                1 => Generator::TildeTrans(desc.sample(s)),
                2 => Generator::Quad(desc.sample_invertible(s)),
                3 => Generator::Neg,
                _ => Generator::Jinv,
            })
            .collect();
        let mut w = GroupWord { gens };
        if w.parity() != parity % 2 {
            w.gens.push(if s.chance(1, 2) {
                Generator::Neg
            } else {
                Generator::Jinv
            });
        }
        w
    }
}

impl fmt::Display for GroupWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, g) in self.gens.iter().enumerate() {
            write!(f, "{}{g}", if i > 0 { ", " } else { "" })?;
        }
        write!(f, "]")
    }
}

pub fn apply_word(w: &GroupWord, p: &ChartPoint) -> Result<ChartPoint> {
    w.gens
        .iter()
        .try_fold(p.clone(), |q, g| apply_generator(g, &q))
}

/// `x ↦ −x⁻¹`, the parity-0 word `[Neg, Jinv]`.
pub fn neg_inv(p: &ChartPoint) -> Result<ChartPoint> {
    apply_generator(&Generator::Jinv, &apply_generator(&Generator::Neg, p)?)
}
