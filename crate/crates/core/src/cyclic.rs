//! The partial cyclic order `R`, intervals, cyclic quadruples and the
//! property suites (pco axioms, invariance, convexity, compression).

use std::cell::RefCell;
use std::collections::HashMap;

use serde_json::{json, Value};

use crate::chart::{apply_word, transversal, ChartPoint, Generator, GroupWord};
use crate::error::{Error, Result};
use crate::jordan::{JElem, PoJaDescriptor};
use crate::report::{AxiomReport, Case};
use crate::sample::{run_cases, SampleSpec, Sampler};

/// The normalizing word `[Trans(−b), Neg, Jinv]`, i.e. `v ↦ −(v − b)⁻¹`,
/// which sends `b` to `∞`.
pub fn normalizer(b: &JElem) -> GroupWord {
    GroupWord::new(vec![
        Generator::Trans(b.neg()),
        Generator::Neg,
        Generator::Jinv,
    ])
}

fn finite_or_bug(p: Result<ChartPoint>) -> Result<JElem> {
    match p {
        Ok(ChartPoint::Finite(v)) => Ok(v),
        Ok(ChartPoint::Infinity(_)) => Err(Error::InternalInvariantViolation(
            "normalized point landed at infinity".into(),
        )),
        Err(Error::LeavesChart) => Err(Error::InternalInvariantViolation(
            "normalization left the chart on a transversal triple".into(),
        )),
        Err(e) => Err(e),
    }
}

/// `(a, x, b) ∈ R`: the triple is pairwise transversal and some element of
/// G₀ carries `a ↦ o`, `b ↦ ∞`, `x ↦ Ω`.
pub fn in_r(a: &ChartPoint, x: &ChartPoint, b: &ChartPoint) -> Result<bool> {
    a.same_algebra(x)?;
    a.same_algebra(b)?;
    if !(transversal(a, x)? && transversal(x, b)? && transversal(a, b)?) {
        return Ok(false);
    }
    use ChartPoint::*;
    match (a, x, b) {
        (Finite(a), Finite(x), Infinity(_)) => x.sub(a).in_cone(),
        (Infinity(_), Finite(x), Finite(b)) => b.sub(x).in_cone(),
        (Finite(a), Infinity(_), Finite(b)) => a.sub(b).in_cone(),
        (Finite(_), Finite(_), Finite(bv)) => {
            let phi = normalizer(bv);
            let pa = finite_or_bug(apply_word(&phi, a))?;
            let px = finite_or_bug(apply_word(&phi, x))?;
            px.sub(&pa).in_cone()
        }
        _ => Err(Error::InternalInvariantViolation(
            "two points at infinity passed transversality".into(),
        )),
    }
}

/// `x <_base y`.
pub fn induced_less(base: &ChartPoint, x: &ChartPoint, y: &ChartPoint) -> Result<bool> {
    in_r(base, x, y)
}

/// An interval `]a, b[` (or `[a, b]`); the endpoints need not be transversal.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Interval {
    pub a: ChartPoint,
    pub b: ChartPoint,
}

impl Interval {
    pub fn new(a: ChartPoint, b: ChartPoint) -> Interval {
        Interval { a, b }
    }

    pub fn contains(&self, x: &ChartPoint) -> Result<bool> {
        in_r(&self.a, x, &self.b)
    }

    pub fn closed_contains(&self, x: &ChartPoint) -> Result<bool> {
        Ok(*x == self.a || *x == self.b || self.contains(x)?)
    }
}

pub fn interval_contains(iv: &Interval, x: &ChartPoint) -> Result<bool> {
    iv.contains(x)
}

pub fn closed_interval_contains(iv: &Interval, x: &ChartPoint) -> Result<bool> {
    iv.closed_contains(x)
}

/// `(a,b,c) ∈ R` and `(a,c,d) ∈ R`.
pub fn is_cyclic_quadruple(
    a: &ChartPoint,
    b: &ChartPoint,
    c: &ChartPoint,
    d: &ChartPoint,
) -> Result<bool> {
    Ok(in_r(a, b, c)? && in_r(a, c, d)?)
}

/// The three equivalent descriptions of a cyclic quadruple: the defining
/// pair of triples, the other pair, and all four sub-triples.
pub fn quadruple_conditions<P>(
    r: impl Fn(&P, &P, &P) -> Result<bool>,
    q: [&P; 4],
) -> Result<[bool; 3]> {
    let [a, b, c, d] = q;
    let (abc, acd, abd, bcd) = (r(a, b, c)?, r(a, c, d)?, r(a, b, d)?, r(b, c, d)?);
    Ok([abc && acd, abd && bcd, abc && acd && abd && bcd])
}

/// Checks condition (1) against (2) and (3); fails with
/// `InternalInvariantViolation` if they disagree.
pub fn is_cyclic_quadruple_verified(
    a: &ChartPoint,
    b: &ChartPoint,
    c: &ChartPoint,
    d: &ChartPoint,
) -> Result<bool> {
    let [one, two, three] = quadruple_conditions(in_r, [a, b, c, d])?;
    if one != two || one != three {
        return Err(Error::InternalInvariantViolation(format!(
            "quadruple conditions disagree: {one} {two} {three}"
        )));
    }
    Ok(one)
}

/// A space carrying a partial cyclic order and a G₀ action, over which the
/// property suites are run.
pub trait CyclicModel: Sync {
    type Point: Clone + PartialEq + Send + Sync;

    fn label(&self) -> String;
    fn descriptor(&self) -> &PoJaDescriptor;
    fn in_r(&self, a: &Self::Point, x: &Self::Point, b: &Self::Point) -> Result<bool>;
    fn transversal(&self, p: &Self::Point, q: &Self::Point) -> Result<bool>;
    fn point_eq(&self, p: &Self::Point, q: &Self::Point) -> Result<bool>;
    fn point_json(&self, p: &Self::Point) -> Value;
    /// Image of a point; `Err(LeavesChart)` where the action is partial.
    fn act(&self, w: &GroupWord, p: &Self::Point) -> Result<Self::Point>;
    fn embed(&self, v: &JElem) -> Self::Point;
    fn infinity(&self) -> Self::Point;
    /// A random point, not necessarily in general position with others.
    fn sample_point(&self, s: &mut Sampler) -> Self::Point;

    /// `k` pairwise transversal points in cyclic order.
    fn sample_chain(&self, s: &mut Sampler, k: usize) -> Vec<Self::Point> {
        let d = self.descriptor();
        let mut v = d.sample(s);
        let mut pts = vec![self.embed(&v)];
        for _ in 1..k {
            v = v.add(&d.sample_positive(s).expect("ordered model"));
            pts.push(self.embed(&v));
        }
        if s.chance(1, 3) {
            pts[k - 1] = self.infinity();
        }
        if s.chance(1, 2) {
            let w = GroupWord::sample(d, s, 4, 0);
            if let Ok(img) = pts
                .iter()
                .map(|p| self.act(&w, p))
                .collect::<Result<Vec<_>>>()
            {
                pts = img;
            }
        }
        pts.rotate_left(s.index(k));
        pts
    }

    fn sample_word(&self, s: &mut Sampler, max_len: usize, parity: u8) -> GroupWord {
        GroupWord::sample(self.descriptor(), s, max_len, parity)
    }
}

/// `k` pairwise transversal points: random ones when a few draws succeed,
/// otherwise a shuffled chain.
pub fn sample_free<M: CyclicModel>(m: &M, s: &mut Sampler, k: usize) -> Vec<M::Point> {
    for _ in 0..16 {
        let pts: Vec<M::Point> = (0..k).map(|_| m.sample_point(s)).collect();
        if pairwise_transversal(m, &pts) {
            return pts;
        }
    }
    let mut pts = m.sample_chain(s, k);
    shuffle(s, &mut pts);
    pts
}

fn pairwise_transversal<M: CyclicModel>(m: &M, pts: &[M::Point]) -> bool {
    (0..pts.len())
        .all(|i| (i + 1..pts.len()).all(|j| m.transversal(&pts[i], &pts[j]).unwrap_or(false)))
}

fn shuffle<T>(s: &mut Sampler, v: &mut [T]) {
    for i in (1..v.len()).rev() {
        v.swap(i, s.index(i + 1));
    }
}

/// Points for one case: a chain, a shuffled chain, or free points.
pub(crate) fn mixed_points<M: CyclicModel>(m: &M, s: &mut Sampler, k: usize) -> Vec<M::Point> {
    match s.index(4) {
        0 | 1 => m.sample_chain(s, k),
        2 => {
            let mut p = m.sample_chain(s, k);
            shuffle(s, &mut p);
            p
        }
        _ => sample_free(m, s, k),
    }
}

/// The chart model of any ordered Jordan algebra.
#[derive(Debug, Clone)]
pub struct ChartModel {
    desc: PoJaDescriptor,
}

impl ChartModel {
    pub fn new(desc: &PoJaDescriptor) -> Result<ChartModel> {
        desc.validate()?;
        let desc = desc.concrete()?;
        if !desc.is_ordered() {
            return Err(Error::NoOrder(desc.ring().to_string()));
        }
        desc.sample_positive(&mut SampleSpec::default().sampler(0))?;
        Ok(ChartModel { desc })
    }
}

impl CyclicModel for ChartModel {
    type Point = ChartPoint;

    fn label(&self) -> String {
        self.desc.to_string()
    }

    fn descriptor(&self) -> &PoJaDescriptor {
        &self.desc
    }

    fn in_r(&self, a: &ChartPoint, x: &ChartPoint, b: &ChartPoint) -> Result<bool> {
        in_r(a, x, b)
    }

    fn transversal(&self, p: &ChartPoint, q: &ChartPoint) -> Result<bool> {
        transversal(p, q)
    }

    fn point_eq(&self, p: &ChartPoint, q: &ChartPoint) -> Result<bool> {
        p.same_algebra(q)?;
        Ok(p == q)
    }

    fn point_json(&self, p: &ChartPoint) -> Value {
        p.to_json()
    }

    fn act(&self, w: &GroupWord, p: &ChartPoint) -> Result<ChartPoint> {
        apply_word(w, p)
    }

    fn embed(&self, v: &JElem) -> ChartPoint {
        ChartPoint::Finite(v.clone())
    }

    fn infinity(&self) -> ChartPoint {
        ChartPoint::infinity(&self.desc)
    }

    fn sample_point(&self, s: &mut Sampler) -> ChartPoint {
        if s.chance(1, 6) {
            self.infinity()
        } else {
            ChartPoint::Finite(self.desc.sample(s))
        }
    }
}

fn pts_json<M: CyclicModel>(m: &M, names: &[&str], pts: &[&M::Point]) -> Value {
    let mut o = serde_json::Map::new();
    for (n, p) in names.iter().zip(pts) {
        o.insert(n.to_string(), m.point_json(p));
    }
    Value::Object(o)
}

fn with_word(mut v: Value, key: &str, w: &GroupWord) -> Value {
    v[key] = w.to_json();
    v
}

/// Turns an evaluation error into a violated case; evaluations on
/// well-formed inputs never fail.
pub(crate) fn guard(r: Result<Case>) -> Case {
    r.unwrap_or_else(|e| {
        Case::Violated(
            format!("evaluation error: {e}"),
            json!({ "error": e.to_string() }),
        )
    })
}

pub const PCO_CHECKS: [&str; 6] = [
    "cyclicity",
    "asymmetry",
    "transitivity",
    "r-implies-transversal",
    "origin-infinity-interval-is-cone",
    "quadruple-conditions-agree",
];

fn pco_case<M: CyclicModel>(m: &M, s: &mut Sampler) -> Vec<Case> {
    let q = mixed_points(m, s, 4);
    let data = || pts_json(m, &["a", "b", "c", "d"], &[&q[0], &q[1], &q[2], &q[3]]);
    // R on index triples; each triple is decided once per case
    let memo = RefCell::new(HashMap::new());
    let r = |i: usize, j: usize, k: usize| -> Result<bool> {
        if let Some(&v) = memo.borrow().get(&(i, j, k)) {
            return Ok(v);
        }
        let v = m.in_r(&q[i], &q[j], &q[k])?;
        memo.borrow_mut().insert((i, j, k), v);
        Ok(v)
    };
    let (a, b, c, d) = (0, 1, 2, 3);
    let mut row = Vec::with_capacity(PCO_CHECKS.len());
    let triple_ok = pairwise_transversal(m, &q[..3]);

    row.push(guard((|| {
        if !triple_ok {
            return Ok(Case::Vacuous);
        }
        let (l, rr) = (r(a, b, c)?, r(b, c, a)?);
        Ok(Case::from_bool(l == rr, || {
            ("(a,b,c) ∈ R differs from (b,c,a) ∈ R".into(), data())
        }))
    })()));
    row.push(guard((|| {
        if !triple_ok {
            return Ok(Case::Vacuous);
        }
        let ok = !(r(a, b, c)? && r(c, b, a)?);
        Ok(Case::from_bool(ok, || {
            ("(a,b,c) and (c,b,a) both in R".into(), data())
        }))
    })()));
    row.push(guard((|| {
        if !(r(a, b, c)? && r(a, c, d)?) {
            return Ok(Case::Vacuous);
        }
        Ok(Case::from_bool(r(a, b, d)?, || {
            ("(a,b,c),(a,c,d) ∈ R but (a,b,d) ∉ R".into(), data())
        }))
    })()));
    row.push(guard((|| {
        if !r(a, b, c)? {
            return Ok(Case::Vacuous);
        }
        Ok(Case::from_bool(triple_ok, || {
            ("(a,b,c) ∈ R with a non-transversal pair".into(), data())
        }))
    })()));
    row.push(guard((|| {
        let desc = m.descriptor();
        let v = if s.chance(1, 2) {
            desc.sample_positive(s)?
        } else {
            desc.sample(s)
        };
        let lhs = m.in_r(&m.embed(&desc.zero()), &m.embed(&v), &m.infinity())?;
        Ok(Case::from_bool(lhs == v.in_cone()?, || {
            (
                "membership in ]o,∞[ differs from Ω".into(),
                json!({ "v": v.coords_json() }),
            )
        }))
    })()));
    row.push(guard((|| {
        let [one, two, three] = quadruple_conditions(|x, y, z| r(*x, *y, *z), [&a, &b, &c, &d])?;
        Ok(Case::from_bool(one == two && two == three, || {
            (
                format!("quadruple conditions disagree: {one} {two} {three}"),
                data(),
            )
        }))
    })()));
    row
}

pub fn check_pco_model<M: CyclicModel>(m: &M, spec: &SampleSpec) -> AxiomReport {
    let rows = run_cases(spec, |s| pco_case(m, s));
    AxiomReport::from_rows("pco", &m.label(), spec, &PCO_CHECKS, rows)
}

/// Cyclicity, asymmetry and transitivity of `R` on the chart model.
pub fn check_pco_axioms(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    Ok(check_pco_model(&ChartModel::new(desc)?, spec))
}

pub const INVARIANCE_CHECKS: [&str; 4] = [
    "G0-invariance",
    "inversion-reversal",
    "word-inverse-roundtrip",
    "interval-symmetry",
];

/// A word of the given parity defined on all of `pts`, if a few draws find one.
fn defined_word<M: CyclicModel>(
    m: &M,
    s: &mut Sampler,
    parity: u8,
    pts: &[&M::Point],
) -> Result<Option<(GroupWord, Vec<M::Point>)>> {
    for _ in 0..8 {
        let w = m.sample_word(s, 6, parity);
        match pts.iter().map(|p| m.act(&w, p)).collect::<Result<Vec<_>>>() {
            Ok(img) => return Ok(Some((w, img))),
            Err(Error::LeavesChart) => continue,
            Err(e) => return Err(e),
        }
    }
    Ok(None)
}

fn invariance_case<M: CyclicModel>(m: &M, s: &mut Sampler) -> Vec<Case> {
    let t = mixed_points(m, s, 3);
    let (a, x, b) = (&t[0], &t[1], &t[2]);
    let data = || pts_json(m, &["a", "x", "b"], &[a, x, b]);
    let mut row = Vec::with_capacity(INVARIANCE_CHECKS.len());
    let base = m.in_r(a, x, b);

    row.push(guard((|| {
        let Some((w, img)) = defined_word(m, s, 0, &[a, x, b])? else {
            return Ok(Case::Undefined);
        };
        let after = m.in_r(&img[0], &img[1], &img[2])?;
        Ok(Case::from_bool(base.clone()? == after, || {
            (
                "R not invariant under a parity-0 word".into(),
                with_word(data(), "word", &w),
            )
        }))
    })()));
    row.push(guard((|| {
        let Some((w, img)) = defined_word(m, s, 1, &[a, x, b])? else {
            return Ok(Case::Undefined);
        };
        let after = m.in_r(&img[2], &img[1], &img[0])?;
        Ok(Case::from_bool(base.clone()? == after, || {
            (
                "R not reversed by a parity-1 word".into(),
                with_word(data(), "word", &w),
            )
        }))
    })()));
    row.push(guard((|| {
        let parity = s.index(2) as u8;
        let Some((w, img)) = defined_word(m, s, parity, &[x])? else {
            return Ok(Case::Undefined);
        };
        let back = match m.act(&w.inverse()?, &img[0]) {
            Ok(p) => p,
            Err(Error::LeavesChart) => return Ok(Case::Undefined),
            Err(e) => return Err(e),
        };
        Ok(Case::from_bool(m.point_eq(&back, x)?, || {
            (
                "w⁻¹(w(x)) ≠ x".into(),
                with_word(pts_json(m, &["x"], &[x]), "word", &w),
            )
        }))
    })()));
    row.push(guard((|| {
        let d = m.descriptor();
        let (y, v) = (d.sample_positive(s)?, d.sample_positive(s)?);
        let sy = GroupWord::new(vec![Generator::Jinv, Generator::Quad(y.clone())]);
        let (o, inf) = (m.embed(&d.zero()), m.infinity());
        let (py, pv) = (m.embed(&y), m.embed(&v));
        let img = m.act(&sy, &pv)?;
        let ok = m.in_r(&o, &img, &inf)?
            && m.point_eq(&m.act(&sy, &py)?, &py)?
            && m.point_eq(&m.act(&sy, &img)?, &pv)?;
        Ok(Case::from_bool(ok, || {
            (
                "s_y fails to be an involution of ]o,∞[ fixing y".into(),
                json!({"y": y.coords_json(), "x": v.coords_json()}),
            )
        }))
    })()));
    row
}

pub fn check_invariance_model<M: CyclicModel>(m: &M, spec: &SampleSpec) -> AxiomReport {
    let rows = run_cases(spec, |s| invariance_case(m, s));
    AxiomReport::from_rows("invariance", &m.label(), spec, &INVARIANCE_CHECKS, rows)
}

/// Invariance of `R` under parity-0 words and reversal under parity-1 words.
pub fn check_invariance_and_reversal(
    desc: &PoJaDescriptor,
    spec: &SampleSpec,
) -> Result<AxiomReport> {
    Ok(check_invariance_model(&ChartModel::new(desc)?, spec))
}

pub const CONVEXITY_CHECKS: [&str; 2] = ["interval-convexity", "induced-order-transfer"];

fn convexity_case<M: CyclicModel>(m: &M, s: &mut Sampler) -> Vec<Case> {
    let p = mixed_points(m, s, 5);
    let (a, u, x, v, b) = (&p[0], &p[1], &p[2], &p[3], &p[4]);
    let data = || pts_json(m, &["a", "u", "x", "v", "b"], &[a, u, x, v, b]);
    let premise =
        || -> Result<bool> { Ok(m.in_r(a, u, b)? && m.in_r(a, v, b)? && m.in_r(a, u, v)?) };
    vec![
        guard((|| {
            if !(premise()? && m.in_r(u, x, v)?) {
                return Ok(Case::Vacuous);
            }
            Ok(Case::from_bool(m.in_r(a, x, b)?, || {
                ("x ∈ ]u,v[ ⊄ ]a,b[".into(), data())
            }))
        })()),
        guard((|| {
            if !premise()? {
                return Ok(Case::Vacuous);
            }
            Ok(Case::from_bool(m.in_r(b, u, v)?, || {
                ("u <_a v but not u <_b v".into(), data())
            }))
        })()),
    ]
}

pub fn check_convexity_model<M: CyclicModel>(m: &M, spec: &SampleSpec) -> AxiomReport {
    let rows = run_cases(spec, |s| convexity_case(m, s));
    AxiomReport::from_rows("convexity", &m.label(), spec, &CONVEXITY_CHECKS, rows)
}

/// `]u,v[ ⊂ ]a,b[` for `u <_a v` in `]a,b[`.
pub fn check_interval_convexity(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    Ok(check_convexity_model(&ChartModel::new(desc)?, spec))
}

pub const COMPRESSION_CHECKS: [&str; 2] = ["compression-premise", "compression"];

fn compression_case<M: CyclicModel>(m: &M, s: &mut Sampler) -> Vec<Case> {
    let d = m.descriptor();
    let (w, p) = (
        d.sample_positive(s).expect("ordered"),
        d.sample_positive(s).expect("ordered"),
    );
    let (o, inf, px) = (m.embed(&d.zero()), m.infinity(), m.embed(&p));
    let conj = match defined_word(m, s, 0, &[&o, &inf, &px]) {
        Ok(Some((h, _))) if s.chance(3, 4) => h,
        _ => GroupWord::empty(),
    };
    let run = || -> Result<Vec<Case>> {
        let g = conj
            .inverse()?
            .then(&GroupWord::new(vec![Generator::Trans(w.clone())]))
            .then(&conj);
        let (a, b, x) = (m.act(&conj, &o)?, m.act(&conj, &inf)?, m.act(&conj, &px)?);
        let data = || {
            let mut v = with_word(pts_json(m, &["a", "b", "x"], &[&a, &b, &x]), "g", &g);
            v["conjugator"] = conj.to_json();
            v
        };
        let ga = m.act(&g, &a)?;
        let premise = m.point_eq(&m.act(&g, &b)?, &b)? && m.in_r(&a, &ga, &b)?;
        let first = Case::from_bool(premise, || ("g(b) ≠ b or g(a) ∉ ]a,b[".into(), data()));
        let second = if !m.in_r(&a, &x, &b)? {
            Case::Vacuous
        } else {
            match m.act(&g, &x) {
                Ok(gx) => Case::from_bool(m.in_r(&a, &gx, &b)?, || ("g(x) ∉ ]a,b[".into(), data())),
                Err(Error::LeavesChart) => Case::Undefined,
                Err(e) => return Err(e),
            }
        };
        Ok(vec![first, second])
    };
    match run() {
        Ok(r) => r,
        Err(Error::LeavesChart) => vec![Case::Undefined, Case::Undefined],
        Err(e) => vec![guard(Err(e.clone())), guard(Err(e))],
    }
}

pub fn check_compression_model<M: CyclicModel>(m: &M, spec: &SampleSpec) -> AxiomReport {
    let rows = run_cases(spec, |s| compression_case(m, s));
    AxiomReport::from_rows("compression", &m.label(), spec, &COMPRESSION_CHECKS, rows)
}

/// `g(]a,b[) ⊂ ]a,b[` for `g` fixing `b` with `g(a) ∈ ]a,b[`, built as
/// conjugates of translations by elements of Ω.
pub fn check_compression(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    Ok(check_compression_model(&ChartModel::new(desc)?, spec))
}

pub const TOTALITY_CHECKS: [&str; 1] = ["totality"];

pub fn check_totality_model<M: CyclicModel>(m: &M, spec: &SampleSpec) -> AxiomReport {
    let rows = run_cases(spec, |s| {
        let t = sample_free(m, s, 3);
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        vec![guard((|| {
            let ok = m.in_r(a, b, c)? || m.in_r(a, c, b)?;
            Ok(Case::from_bool(ok, || {
                (
                    "neither (a,b,c) nor (a,c,b) in R".into(),
                    pts_json(m, &["a", "b", "c"], &[a, b, c]),
                )
            }))
        })())]
    });
    AxiomReport::from_rows("totality", &m.label(), spec, &TOTALITY_CHECKS, rows)
}

/// Whether every transversal triple is ordered one way or the other.
pub fn check_totality(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    Ok(check_totality_model(&ChartModel::new(desc)?, spec))
}

/// Re-evaluates a totality witness `{a, b, c}`; true if it still fails.
pub fn replay_totality_witness(desc: &PoJaDescriptor, data: &Value) -> Result<bool> {
    let get = |k: &str| {
        ChartPoint::from_json(
            desc,
            data.get(k)
                .ok_or_else(|| Error::Parse(format!("witness lacks {k}")))?,
        )
    };
    let (a, b, c) = (get("a")?, get("b")?, get("c")?);
    Ok(transversal(&a, &b)?
        && transversal(&b, &c)?
        && transversal(&a, &c)?
        && !in_r(&a, &b, &c)?
        && !in_r(&a, &c, &b)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};
    use crate::ring::RingDescriptor;

    fn q1() -> PoJaDescriptor {
        PoJaDescriptor::scalar(RingDescriptor::Q)
    }

    fn f(x: i64) -> ChartPoint {
        ChartPoint::Finite(q1().from_rationals(&[int(x)]).unwrap())
    }

    fn inf() -> ChartPoint {
        ChartPoint::infinity(&q1())
    }

    fn sym2(c: [i64; 3]) -> ChartPoint {
        let d = PoJaDescriptor::sym(2, RingDescriptor::Q);
        ChartPoint::Finite(d.from_rationals(&c.map(int)).unwrap())
    }

    #[test]
    fn in_r_examples() {
        let d = PoJaDescriptor::sym(2, RingDescriptor::Q);
        assert!(in_r(
            &ChartPoint::origin(&d),
            &ChartPoint::Finite(d.unit()),
            &ChartPoint::infinity(&d)
        )
        .unwrap());
        assert!(in_r(&f(1), &f(2), &f(-1)).unwrap());
        assert!(!in_r(&f(1), &f(0), &f(-1)).unwrap());
    }

    #[test]
    fn normalizer_values_match_hand_computation() {
        // φ(v) = −(v + 1)⁻¹ for b = −1
        let phi = normalizer(f(-1).finite().unwrap());
        let val =
            |x| apply_word(&phi, &f(x)).unwrap().finite().unwrap().coords()[0].coords()[0].clone();
        assert_eq!(val(1), rat(-1, 2));
        assert_eq!(val(2), rat(-1, 3));
        assert_eq!(val(0), int(-1));
    }

    #[test]
    fn non_transversal_triples_are_outside() {
        assert!(!in_r(&f(1), &f(1), &f(2)).unwrap());
        assert!(!in_r(&inf(), &f(1), &inf()).unwrap());
        let mixed = ChartPoint::infinity(&PoJaDescriptor::sym(2, RingDescriptor::Q));
        assert!(matches!(
            in_r(&f(0), &f(1), &mixed),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn interval_examples() {
        let d = PoJaDescriptor::sym(2, RingDescriptor::Q);
        let omega = Interval::new(ChartPoint::origin(&d), ChartPoint::infinity(&d));
        assert!(interval_contains(&omega, &ChartPoint::Finite(d.unit())).unwrap());
        assert!(closed_interval_contains(&omega, &ChartPoint::origin(&d)).unwrap());
        assert!(!interval_contains(&omega, &ChartPoint::origin(&d)).unwrap());
        let ell = Interval::new(ChartPoint::origin(&d), sym2([2, 0, 2]));
        assert!(ell.contains(&sym2([1, 0, 1])).unwrap());
    }

    #[test]
    fn quadruple_examples() {
        assert!(is_cyclic_quadruple_verified(&f(0), &f(1), &f(2), &inf()).unwrap());
        assert!(!is_cyclic_quadruple_verified(&f(0), &f(2), &f(1), &inf()).unwrap());
        assert!(is_cyclic_quadruple_verified(&f(0), &f(1), &inf(), &f(-1)).unwrap());
    }

    #[test]
    fn induced_order_examples() {
        assert!(induced_less(&inf(), &f(1), &f(2)).unwrap());
        assert!(induced_less(&f(0), &f(2), &f(-1)).unwrap());
        for x in [f(0), f(3), inf()] {
            assert!(!induced_less(&f(5), &x, &x).unwrap());
        }
    }

    #[test]
    fn reversal_by_neg() {
        let neg = GroupWord::new(vec![Generator::Neg]);
        let (a, x, b) = (f(0), f(1), inf());
        assert!(in_r(&a, &x, &b).unwrap());
        let img: Vec<_> = [&a, &x, &b]
            .iter()
            .map(|p| apply_word(&neg, p).unwrap())
            .collect();
        assert_eq!(img[1], f(-1));
        assert!(in_r(&img[2], &img[1], &img[0]).unwrap());
    }

    #[test]
    fn compression_example() {
        let t = GroupWord::new(vec![Generator::Trans(q1().unit())]);
        for x in [1, 2, 7] {
            let gx = apply_word(&t, &f(x)).unwrap();
            assert!(in_r(&f(0), &gx, &inf()).unwrap());
        }
        let u = (PoJaDescriptor::sym(2, RingDescriptor::Q)).unit();
        let t = GroupWord::new(vec![Generator::Trans(u.clone())]);
        let o = ChartPoint::origin(u.descriptor());
        let i = ChartPoint::infinity(u.descriptor());
        assert!(in_r(&o, &apply_word(&t, &sym2([2, 1, 1])).unwrap(), &i).unwrap());
    }

    #[test]
    fn suites_on_small_instances() {
        let spec = SampleSpec::new(11, 200);
        for d in [
            q1(),
            PoJaDescriptor::sym(2, RingDescriptor::Q),
            PoJaDescriptor::spin(2, RingDescriptor::Q),
        ] {
            for r in [
                check_pco_axioms(&d, &spec).unwrap(),
                check_invariance_and_reversal(&d, &spec).unwrap(),
                check_interval_convexity(&d, &spec).unwrap(),
                check_compression(&d, &spec).unwrap(),
            ] {
                assert!(r.passed(), "{r}");
                assert!(r.checks.iter().all(|c| c.tested > 0), "{r}");
            }
        }
    }

    #[test]
    fn totality_holds_on_the_line_and_fails_in_rank_two() {
        let spec = SampleSpec::new(0, 200);
        assert!(check_totality(&q1(), &spec).unwrap().passed());
        let d = PoJaDescriptor::sym(2, RingDescriptor::Q);
        let r = check_totality(&d, &spec).unwrap();
        let w = r
            .check("totality")
            .unwrap()
            .witness
            .clone()
            .expect("witness");
        assert!(replay_totality_witness(&d, &w.data).unwrap());
    }
}
