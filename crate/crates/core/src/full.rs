//! Homogeneous models of the whole geometry `X(V)`: the projective line
//! over a local ring, the Lagrangian Grassmannian for `Sym(n, ℚ)`, and
//! products of these. The group action is total here.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use num_traits::{One, Signed, Zero};

use crate::chart::{apply_word, transversal, ChartPoint, Generator, GroupWord};
use crate::cyclic::{guard, mixed_points, ChartModel, CyclicModel};
use crate::error::{Error, Result};
use crate::jordan::{JElem, PoJaDescriptor};
use crate::linalg::{self, Mat};
use crate::rational::{format_rational, int, parse_rational, rat, Rational};
use crate::report::{AxiomReport, Case};
use crate::ring::{RingDescriptor, RingElem};
use crate::sample::{run_cases, SampleSpec, Sampler};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum GeometryKind {
    ProjLine(RingDescriptor),
    Lagrangian(usize),
    ProductGeo(Vec<GeometryKind>),
}

/// A geometry together with the algebra it completes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeometryDescriptor {
    pub kind: GeometryKind,
    pub algebra: PoJaDescriptor,
}

fn local_ring(r: &RingDescriptor) -> bool {
    matches!(
        r,
        RingDescriptor::Q
            | RingDescriptor::DualQ
            | RingDescriptor::GaussQ
            | RingDescriptor::DualGaussQ
            | RingDescriptor::TrivialNOrder
    )
}

impl GeometryDescriptor {
    /// The geometry completing `desc`: scalar algebras over local rings,
    /// `Sym(n, ℚ)`, and products of those.
    pub fn for_algebra(desc: &PoJaDescriptor) -> Result<GeometryDescriptor> {
        desc.validate()?;
        let algebra = desc.concrete()?;
        let kind = kind_for(&algebra)?;
        Ok(GeometryDescriptor { kind, algebra })
    }

    pub fn components(&self) -> Vec<GeometryDescriptor> {
        match &self.kind {
            GeometryKind::ProductGeo(ks) => ks
                .iter()
                .zip(self.algebra.components())
                .map(|(k, a)| GeometryDescriptor {
                    kind: k.clone(),
                    algebra: a,
                })
                .collect(),
            _ => vec![self.clone()],
        }
    }
}

impl std::fmt::Display for GeometryDescriptor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        fn go(k: &GeometryKind, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
            match k {
                GeometryKind::ProjLine(r) => write!(f, "ProjLine({r})"),
                GeometryKind::Lagrangian(n) => write!(f, "Lagrangian({n})"),
                GeometryKind::ProductGeo(ks) => {
                    write!(f, "ProductGeo(")?;
                    for (i, k) in ks.iter().enumerate() {
                        if i > 0 {
                            write!(f, ",")?;
                        }
                        go(k, f)?;
                    }
                    write!(f, ")")
                }
            }
        }
        go(&self.kind, f)
    }
}

fn kind_for(d: &PoJaDescriptor) -> Result<GeometryKind> {
    Ok(match d {
        PoJaDescriptor::Scalar { ring } if local_ring(ring) => GeometryKind::ProjLine(ring.clone()),
        PoJaDescriptor::Sym {
            n,
            ring: RingDescriptor::Q,
        } => GeometryKind::Lagrangian(*n),
        PoJaDescriptor::Product(fs) => {
            GeometryKind::ProductGeo(fs.iter().map(kind_for).collect::<Result<_>>()?)
        }
        other => return Err(Error::Unsupported(format!("no full geometry for {other}"))),
    })
}

/// A point of `X(V)` in homogeneous coordinates.
#[derive(Debug, Clone, PartialEq)]
pub enum HomPoint {
    /// `(p, q)` with the chart point `p q⁻¹`.
    ProjPair(RingElem, RingElem),
    /// A `2n × n` frame `[X; Y]` with the chart point `Y X⁻¹`.
    LagFrame(Mat<Rational>),
    ProductPoint(Vec<HomPoint>),
}

/// Where a point sits relative to the chart `V ∪ {∞}`.
#[derive(Debug, Clone, PartialEq)]
pub enum ChartImage {
    Chart(ChartPoint),
    AtInfinity,
}

fn q_one(n: usize) -> Mat<Rational> {
    Mat::identity(n, &Rational::one())
}

fn q_zero(r: usize, c: usize) -> Mat<Rational> {
    Mat::zeros(r, c, &Rational::zero())
}

fn stack(x: &Mat<Rational>, y: &Mat<Rational>) -> Mat<Rational> {
    let mut data = x.data.clone();
    data.extend(y.data.iter().cloned());
    Mat {
        rows: x.rows + y.rows,
        cols: x.cols,
        data,
    }
}

fn halves(m: &Mat<Rational>) -> (Mat<Rational>, Mat<Rational>) {
    let n = m.cols;
    (m.block(0, 0, n, n), m.block(n, 0, n, n))
}

fn sym_rational(v: &JElem) -> Mat<Rational> {
    v.sym_matrix()
        .expect("Sym element")
        .map_to(|e| e.coords()[0].clone())
}

fn sym_from_rational(desc: &PoJaDescriptor, m: &Mat<Rational>) -> Result<JElem> {
    let rows: Vec<Vec<Rational>> = (0..m.rows).map(|i| m.row(i).to_vec()).collect();
    desc.sym_from_rows(&rows)
}

fn q_inverse(m: &Mat<Rational>) -> Option<Mat<Rational>> {
    linalg::solve_local(m, &q_one(m.rows))
}

fn shape_error(g: &GeometryDescriptor) -> Error {
    Error::DescriptorMismatch(format!("point does not belong to {g}"))
}

/// Canonical representative: `(v, 1)` or `(1, u)` for pairs, reduced
/// column echelon form for frames.
pub fn canonicalize(g: &GeometryDescriptor, p: &HomPoint) -> Result<HomPoint> {
    match (&g.kind, p) {
        (GeometryKind::ProjLine(_), HomPoint::ProjPair(a, b)) => {
            if b.is_unit() {
                Ok(HomPoint::ProjPair(a * &b.inverse()?, b.ring().one()))
            } else if a.is_unit() {
                Ok(HomPoint::ProjPair(a.ring().one(), b * &a.inverse()?))
            } else {
                Err(Error::NormalizationFailed)
            }
        }
        (GeometryKind::Lagrangian(n), HomPoint::LagFrame(m)) => {
            if m.rows != 2 * n || m.cols != *n {
                return Err(shape_error(g));
            }
            let (r, rank) = linalg::rref(&m.transpose());
            if rank != *n {
                return Err(Error::NormalizationFailed);
            }
            Ok(HomPoint::LagFrame(r.block(0, 0, *n, 2 * n).transpose()))
        }
        (GeometryKind::ProductGeo(_), HomPoint::ProductPoint(ps))
            if ps.len() == g.components().len() =>
        {
            Ok(HomPoint::ProductPoint(
                g.components()
                    .iter()
                    .zip(ps)
                    .map(|(c, p)| canonicalize(c, p))
                    .collect::<Result<_>>()?,
            ))
        }
        _ => Err(shape_error(g)),
    }
}

pub fn embed(g: &GeometryDescriptor, v: &JElem) -> Result<HomPoint> {
    if *v.descriptor() != g.algebra {
        return Err(Error::DescriptorMismatch(format!(
            "{} is not the algebra of {g}",
            v.descriptor()
        )));
    }
    Ok(match &g.kind {
        GeometryKind::ProjLine(r) => HomPoint::ProjPair(v.coords()[0].clone(), r.one()),
        GeometryKind::Lagrangian(n) => HomPoint::LagFrame(stack(&q_one(*n), &sym_rational(v))),
        GeometryKind::ProductGeo(_) => HomPoint::ProductPoint(
            g.components()
                .iter()
                .zip(v.components())
                .map(|(c, x)| embed(c, &x))
                .collect::<Result<_>>()?,
        ),
    })
}

pub fn infinity_point(g: &GeometryDescriptor) -> HomPoint {
    match &g.kind {
        GeometryKind::ProjLine(r) => HomPoint::ProjPair(r.one(), r.zero()),
        GeometryKind::Lagrangian(n) => HomPoint::LagFrame(stack(&q_zero(*n, *n), &q_one(*n))),
        GeometryKind::ProductGeo(_) => {
            HomPoint::ProductPoint(g.components().iter().map(infinity_point).collect())
        }
    }
}

pub fn origin_point(g: &GeometryDescriptor) -> HomPoint {
    embed(g, &g.algebra.zero()).expect("zero belongs to the algebra")
}

pub fn embed_chart(g: &GeometryDescriptor, p: &ChartPoint) -> Result<HomPoint> {
    match p {
        ChartPoint::Finite(v) => embed(g, v),
        ChartPoint::Infinity(d) if *d == g.algebra => Ok(infinity_point(g)),
        ChartPoint::Infinity(d) => Err(Error::DescriptorMismatch(format!("{d} vs {g}"))),
    }
}

/// The chart coordinate of a point, `AtInfinity` when it lies outside
/// `V ∪ {∞}`.
pub fn to_chart(g: &GeometryDescriptor, p: &HomPoint) -> Result<ChartImage> {
    enum Part {
        Fin(JElem),
        Inf,
        Out,
    }
    fn part(g: &GeometryDescriptor, p: &HomPoint) -> Result<Part> {
        Ok(match (&g.kind, p) {
            (GeometryKind::ProjLine(_), HomPoint::ProjPair(a, b)) => {
                if b.is_unit() {
                    Part::Fin(g.algebra.from_coords(vec![a * &b.inverse()?])?)
                } else if b.is_zero() && a.is_unit() {
                    Part::Inf
                } else {
                    Part::Out
                }
            }
            (GeometryKind::Lagrangian(n), HomPoint::LagFrame(m)) => {
                if m.rows != 2 * n || m.cols != *n {
                    return Err(shape_error(g));
                }
                let (x, y) = halves(m);
                match q_inverse(&x) {
                    Some(xi) => Part::Fin(sym_from_rational(&g.algebra, &y.mul(&xi))?),
                    None if x.data.iter().all(Zero::is_zero) => Part::Inf,
                    None => Part::Out,
                }
            }
            (GeometryKind::ProductGeo(_), HomPoint::ProductPoint(ps))
                if ps.len() == g.components().len() =>
            {
                let parts = g
                    .components()
                    .iter()
                    .zip(ps)
                    .map(|(c, p)| part(c, p))
                    .collect::<Result<Vec<_>>>()?;
                if parts.iter().all(|p| matches!(p, Part::Inf)) {
                    Part::Inf
                } else if parts.iter().all(|p| matches!(p, Part::Fin(_))) {
                    let els: Vec<JElem> = parts
                        .into_iter()
                        .map(|p| match p {
                            Part::Fin(v) => v,
                            _ => unreachable!(),
                        })
                        .collect();
                    Part::Fin(JElem::from_components(&g.algebra, &els)?)
                } else {
                    Part::Out
                }
            }
            _ => return Err(shape_error(g)),
        })
    }
    Ok(match part(g, p)? {
        Part::Fin(v) => ChartImage::Chart(ChartPoint::Finite(v)),
        Part::Inf => ChartImage::Chart(ChartPoint::infinity(&g.algebra)),
        Part::Out => ChartImage::AtInfinity,
    })
}

pub fn point_eq(g: &GeometryDescriptor, p: &HomPoint, q: &HomPoint) -> Result<bool> {
    Ok(canonicalize(g, p)? == canonicalize(g, q)?)
}

fn payload_check(g: &GeometryDescriptor, v: &JElem) -> Result<()> {
    if *v.descriptor() == g.algebra {
        Ok(())
    } else {
        Err(Error::DescriptorMismatch(format!(
            "generator over {} acting on {g}",
            v.descriptor()
        )))
    }
}

fn act_generator(g: &GeometryDescriptor, gen: &Generator, p: &HomPoint) -> Result<HomPoint> {
    if let Some(v) = gen.payload() {
        payload_check(g, v)?;
    }
    match (&g.kind, p) {
        (GeometryKind::ProjLine(_), HomPoint::ProjPair(a, b)) => {
            let w = gen.payload().map(|v| v.coords()[0].clone());
            Ok(match gen {
                Generator::Trans(_) => {
                    HomPoint::ProjPair(a + &(w.as_ref().unwrap() * b), b.clone())
                }
                Generator::TildeTrans(_) => {
                    HomPoint::ProjPair(a.clone(), b + &(w.as_ref().unwrap() * a))
                }
                Generator::Quad(_) => {
                    let y = w.unwrap();
                    HomPoint::ProjPair(&y * a, b * &y.inverse()?)
                }
                Generator::Neg => HomPoint::ProjPair(-a, b.clone()),
                Generator::Jinv => HomPoint::ProjPair(b.clone(), a.clone()),
            })
        }
        (GeometryKind::Lagrangian(_), HomPoint::LagFrame(m)) => {
            let (x, y) = halves(m);
            let w = gen.payload().map(sym_rational);
            let (nx, ny) = match gen {
                Generator::Trans(_) => {
                    let w = w.unwrap();
                    let ny = y.add(&w.mul(&x));
                    (x, ny)
                }
                Generator::TildeTrans(_) => {
                    let w = w.unwrap();
                    (x.add(&w.mul(&y)), y)
                }
                Generator::Quad(_) => {
                    let w = w.unwrap();
                    let wi = q_inverse(&w).ok_or(Error::NotInvertible)?;
                    (wi.mul(&x), w.mul(&y))
                }
                Generator::Neg => (x, y.map(|e| -e)),
                Generator::Jinv => (y, x),
            };
            Ok(HomPoint::LagFrame(stack(&nx, &ny)))
        }
        (GeometryKind::ProductGeo(_), HomPoint::ProductPoint(ps))
            if ps.len() == g.components().len() =>
        {
            let comps = g.components();
            let parts: Vec<Generator> = match gen {
                Generator::Trans(v) => v.components().into_iter().map(Generator::Trans).collect(),
                Generator::TildeTrans(v) => v
                    .components()
                    .into_iter()
                    .map(Generator::TildeTrans)
                    .collect(),
                Generator::Quad(v) => v.components().into_iter().map(Generator::Quad).collect(),
                other => vec![other.clone(); comps.len()],
            };
            Ok(HomPoint::ProductPoint(
                comps
                    .iter()
                    .zip(ps)
                    .zip(&parts)
                    .map(|((c, p), gen)| act_generator(c, gen, p))
                    .collect::<Result<_>>()?,
            ))
        }
        _ => Err(shape_error(g)),
    }
}

/// The total action of a word (left to right), canonicalized.
pub fn act_full(g: &GeometryDescriptor, w: &GroupWord, p: &HomPoint) -> Result<HomPoint> {
    let img = w
        .gens
        .iter()
        .try_fold(p.clone(), |q, gen| act_generator(g, gen, &q))?;
    canonicalize(g, &img)
}

pub fn transversal_full(g: &GeometryDescriptor, p: &HomPoint, q: &HomPoint) -> Result<bool> {
    match (&g.kind, p, q) {
        (GeometryKind::ProjLine(_), HomPoint::ProjPair(a, b), HomPoint::ProjPair(c, d)) => {
            Ok((&(a * d) - &(c * b)).is_unit())
        }
        (GeometryKind::Lagrangian(n), HomPoint::LagFrame(m1), HomPoint::LagFrame(m2)) => {
            let n = *n;
            let big = Mat::from_fn(2 * n, 2 * n, |i, j| {
                if j < n {
                    m1.at(i, j).clone()
                } else {
                    m2.at(i, j - n).clone()
                }
            });
            Ok(!linalg::det(&big).is_zero())
        }
        (GeometryKind::ProductGeo(_), HomPoint::ProductPoint(ps), HomPoint::ProductPoint(qs))
            if ps.len() == qs.len() && ps.len() == g.components().len() =>
        {
            for ((c, p), q) in g.components().iter().zip(ps).zip(qs) {
                if !transversal_full(c, p, q)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
        _ => Err(shape_error(g)),
    }
}

/// `XᵀY` symmetric for every frame (vacuous for pairs).
pub fn is_isotropic(p: &HomPoint) -> bool {
    match p {
        HomPoint::LagFrame(m) => {
            let (x, y) = halves(m);
            let s = x.transpose().mul(&y);
            s == s.transpose()
        }
        HomPoint::ProductPoint(ps) => ps.iter().all(is_isotropic),
        HomPoint::ProjPair(..) => true,
    }
}

fn chart_value(g: &GeometryDescriptor, p: &HomPoint) -> Result<JElem> {
    match to_chart(g, p)? {
        ChartImage::Chart(ChartPoint::Finite(v)) => Ok(v),
        _ => Err(Error::InternalInvariantViolation(format!(
            "expected a finite chart point in {g}"
        ))),
    }
}

/// Scalars tried in front of the unit when pushing a point into the chart:
/// `0, 1, −1, 2, −2, …`. For frames at most `n` of them fail, because the
/// kernels they produce are mutually orthogonal.
fn catalog(g: &GeometryDescriptor) -> Vec<Rational> {
    let n = match g.kind {
        GeometryKind::Lagrangian(n) => n as i64,
        _ => 1,
    };
    let mut c = vec![int(0)];
    for t in 1..=n {
        c.push(int(t));
        c.push(int(-t));
    }
    c
}

/// A parity-0 word `w` with `w(a) = o` and `w(b) = ∞`, of the form
/// `[TildeTrans(u), Trans(−b'), Neg, Jinv, Trans(−a'')]` with identity
/// steps dropped. The postcondition is verified before returning.
pub fn carry_to_frame(g: &GeometryDescriptor, a: &HomPoint, b: &HomPoint) -> Result<GroupWord> {
    if !transversal_full(g, a, b)? {
        return Err(Error::NotTransversal);
    }
    let inf = infinity_point(g);
    let word = if point_eq(g, b, &inf)? {
        let av = chart_value(g, &canonicalize(g, a)?)?;
        GroupWord::new(vec![Generator::Trans(av.neg())])
    } else {
        let comps = g.components();
        let (ca, cb) = match (a, b) {
            (HomPoint::ProductPoint(x), HomPoint::ProductPoint(y)) => (x.clone(), y.clone()),
            _ => (vec![a.clone()], vec![b.clone()]),
        };
        let mut us = Vec::new();
        let mut bs = Vec::new();
        let mut as_ = Vec::new();
        for ((c, pa), pb) in comps.iter().zip(&ca).zip(&cb) {
            let c_inf = infinity_point(c);
            let e = c.algebra.unit();
            let mut found = None;
            for t in catalog(c) {
                let u = e.scale(&t);
                let b1 = act_full(
                    c,
                    &GroupWord::new(vec![Generator::TildeTrans(u.clone())]),
                    pb,
                )?;
                if transversal_full(c, &b1, &c_inf)? {
                    found = Some((u, chart_value(c, &b1)?));
                    break;
                }
            }
            let (u, bp) = found.ok_or_else(|| {
                Error::InternalInvariantViolation(format!("chart catalog exhausted in {c}"))
            })?;
            let pre = GroupWord::new(vec![
                Generator::TildeTrans(u.clone()),
                Generator::Trans(bp.neg()),
                Generator::Neg,
                Generator::Jinv,
            ]);
            let app = chart_value(c, &act_full(c, &pre, pa)?)?;
            us.push(u);
            bs.push(bp.neg());
            as_.push(app.neg());
        }
        let join = |parts: &[JElem]| JElem::from_components(&g.algebra, parts);
        GroupWord::new(vec![
            Generator::TildeTrans(join(&us)?),
            Generator::Trans(join(&bs)?),
            Generator::Neg,
            Generator::Jinv,
            Generator::Trans(join(&as_)?),
        ])
    };
    let word = GroupWord::new(
        word.gens
            .into_iter()
            .filter(
                |gen| !matches!(gen, Generator::Trans(v) | Generator::TildeTrans(v) if v.is_zero()),
            )
            .collect(),
    );
    if !(point_eq(g, &act_full(g, &word, a)?, &origin_point(g))?
        && point_eq(g, &act_full(g, &word, b)?, &inf)?)
    {
        return Err(Error::InternalInvariantViolation(format!(
            "carry_to_frame postcondition failed: {word}"
        )));
    }
    Ok(word)
}

/// `(a, x, b) ∈ R` evaluated in homogeneous coordinates.
pub fn in_r_full(g: &GeometryDescriptor, a: &HomPoint, x: &HomPoint, b: &HomPoint) -> Result<bool> {
    if !(transversal_full(g, a, x)? && transversal_full(g, x, b)? && transversal_full(g, a, b)?) {
        return Ok(false);
    }
    let w = carry_to_frame(g, a, b)?;
    chart_value(g, &act_full(g, &w, x)?)?.in_cone()
}

// -- serialization --------------------------------------------------------

pub fn point_to_json(p: &HomPoint) -> Value {
    match p {
        HomPoint::ProjPair(a, b) => json!([a.to_json(), b.to_json()]),
        HomPoint::LagFrame(m) => Value::Array(
            (0..m.rows)
                .map(|i| json!(m.row(i).iter().map(format_rational).collect::<Vec<_>>()))
                .collect(),
        ),
        HomPoint::ProductPoint(ps) => Value::Array(ps.iter().map(point_to_json).collect()),
    }
}

pub fn point_from_json(g: &GeometryDescriptor, v: &Value) -> Result<HomPoint> {
    let arr = v
        .as_array()
        .ok_or_else(|| Error::Parse(format!("expected an array for a point of {g}")))?;
    let p = match &g.kind {
        GeometryKind::ProjLine(r) => {
            if arr.len() != 2 {
                return Err(Error::Parse("a projective pair has two entries".into()));
            }
            HomPoint::ProjPair(
                RingElem::from_json(r, &arr[0])?,
                RingElem::from_json(r, &arr[1])?,
            )
        }
        GeometryKind::Lagrangian(n) => {
            if arr.len() != 2 * n {
                return Err(Error::Parse(format!("a frame has {} rows", 2 * n)));
            }
            let rows = arr
                .iter()
                .map(|row| {
                    let row = row
                        .as_array()
                        .filter(|r| r.len() == *n)
                        .ok_or_else(|| Error::Parse(format!("frame rows have {n} entries")))?;
                    row.iter()
                        .map(|x| match x {
                            Value::String(s) => parse_rational(s),
                            Value::Number(k) => k
                                .as_i64()
                                .map(int)
                                .ok_or_else(|| Error::Parse(format!("bad entry {k}"))),
                            other => Err(Error::Parse(format!("bad entry {other}"))),
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            let m = Mat::from_rows(rows);
            let p = HomPoint::LagFrame(m);
            if !is_isotropic(&p) {
                return Err(Error::Parse("frame is not isotropic".into()));
            }
            p
        }
        GeometryKind::ProductGeo(_) => {
            let comps = g.components();
            if arr.len() != comps.len() {
                return Err(Error::Parse(format!(
                    "a point of {g} has {} components",
                    comps.len()
                )));
            }
            HomPoint::ProductPoint(
                comps
                    .iter()
                    .zip(arr)
                    .map(|(c, x)| point_from_json(c, x))
                    .collect::<Result<_>>()?,
            )
        }
    };
    canonicalize(g, &p)
}

/// The full geometry as a cyclic-order model.
#[derive(Debug, Clone)]
pub struct FullModel {
    pub geometry: GeometryDescriptor,
}

impl FullModel {
    pub fn new(desc: &PoJaDescriptor) -> Result<FullModel> {
        let geometry = GeometryDescriptor::for_algebra(desc)?;
        if !geometry.algebra.is_ordered() {
            return Err(Error::NoOrder(geometry.algebra.ring().to_string()));
        }
        Ok(FullModel { geometry })
    }
}

impl CyclicModel for FullModel {
    type Point = HomPoint;

    fn label(&self) -> String {
        self.geometry.to_string()
    }

    fn descriptor(&self) -> &PoJaDescriptor {
        &self.geometry.algebra
    }

    fn in_r(&self, a: &HomPoint, x: &HomPoint, b: &HomPoint) -> Result<bool> {
        in_r_full(&self.geometry, a, x, b)
    }

    fn transversal(&self, p: &HomPoint, q: &HomPoint) -> Result<bool> {
        transversal_full(&self.geometry, p, q)
    }

    fn point_eq(&self, p: &HomPoint, q: &HomPoint) -> Result<bool> {
        point_eq(&self.geometry, p, q)
    }

    fn point_json(&self, p: &HomPoint) -> Value {
        point_to_json(p)
    }

    fn act(&self, w: &GroupWord, p: &HomPoint) -> Result<HomPoint> {
        act_full(&self.geometry, w, p)
    }

    fn embed(&self, v: &JElem) -> HomPoint {
        embed(&self.geometry, v).expect("element of the model's algebra")
    }

    fn infinity(&self) -> HomPoint {
        infinity_point(&self.geometry)
    }

    /// Chart points, `∞`, and images of chart points under random words
    /// (which reach the points outside the chart).
    fn sample_point(&self, s: &mut Sampler) -> HomPoint {
        let d = &self.geometry.algebra;
        match s.index(6) {
            0 => self.infinity(),
            1 => {
                let parity = s.index(2) as u8;
                let w = GroupWord::sample(d, s, 4, parity);
                act_full(&self.geometry, &w, &self.embed(&d.sample(s))).expect("total action")
            }
            _ => self.embed(&d.sample(s)),
        }
    }
}

pub const CONSISTENCY_CHECKS: [&str; 3] = ["in-r-agrees", "transversality-agrees", "action-agrees"];

fn consistency_case(chart: &ChartModel, g: &GeometryDescriptor, s: &mut Sampler) -> Vec<Case> {
    let q = mixed_points(chart, s, 3);
    let parity = s.index(2) as u8;
    let w = GroupWord::sample(&g.algebra, s, 6, parity);
    let data = || json!({ "a": q[0].to_json(), "x": q[1].to_json(), "b": q[2].to_json(), "word": w.to_json() });
    let e = match q
        .iter()
        .map(|p| embed_chart(g, p))
        .collect::<Result<Vec<_>>>()
    {
        Ok(e) => e,
        Err(err) => return vec![guard(Err(err)); CONSISTENCY_CHECKS.len()],
    };
    let mut row = Vec::with_capacity(CONSISTENCY_CHECKS.len());
    row.push(guard((|| {
        let (c, f) = (
            crate::cyclic::in_r(&q[0], &q[1], &q[2])?,
            in_r_full(g, &e[0], &e[1], &e[2])?,
        );
        Ok(Case::from_bool(c == f, || {
            (format!("chart in_r = {c}, full in_r = {f}"), data())
        }))
    })()));
    row.push(guard((|| {
        let (c, f) = (
            transversal(&q[0], &q[1])?,
            transversal_full(g, &e[0], &e[1])?,
        );
        Ok(Case::from_bool(c == f, || {
            (format!("chart transversality = {c}, full = {f}"), data())
        }))
    })()));
    row.push(guard((|| {
        let img = match apply_word(&w, &q[0]) {
            Ok(p) => p,
            Err(Error::LeavesChart) => return Ok(Case::Undefined),
            Err(err) => return Err(err),
        };
        let ok = point_eq(g, &act_full(g, &w, &e[0])?, &embed_chart(g, &img)?)?;
        Ok(Case::from_bool(ok, || {
            (
                "word acts differently on the chart and on the full geometry".into(),
                data(),
            )
        }))
    })()));
    row
}

/// Compares the chart relation, transversality and action with their
/// counterparts on the full geometry, on chart points.
pub fn check_chart_full_consistency(
    desc: &PoJaDescriptor,
    spec: &SampleSpec,
) -> Result<AxiomReport> {
    let chart = ChartModel::new(desc)?;
    let g = GeometryDescriptor::for_algebra(desc)?;
    let rows = run_cases(spec, |s| consistency_case(&chart, &g, s));
    Ok(AxiomReport::from_rows(
        "chart-full-consistency",
        &g.to_string(),
        spec,
        &CONSISTENCY_CHECKS,
        rows,
    ))
}

/// Cube coordinate `t ∈ (−1, 1)` to chart value `t / (1 − |t|)`; an
/// order isomorphism onto ℚ.
pub fn cube_to_chart(t: &Rational) -> Result<Rational> {
    let one = Rational::one();
    if t.abs() >= one {
        return Err(Error::Precondition(format!(
            "{} is outside the open cube",
            format_rational(t)
        )));
    }
    Ok(t / (one - t.abs()))
}

/// The torus `(ℚP¹)ⁿ` restricted to a rational grid: per axis the cube
/// points `−19/20, −17/20, …, 19/20` and `∞`.
#[derive(Debug, Clone)]
pub struct TorusGridModel {
    pub full: FullModel,
    pub n: usize,
    grid: Vec<Rational>,
}

/// The `20` cube coordinates `−19/20 + k/10`.
pub fn torus_axis_grid() -> Vec<Rational> {
    (0..20).map(|k| rat(-19, 20) + rat(k, 10)).collect()
}

impl TorusGridModel {
    pub fn new(n: usize) -> Result<TorusGridModel> {
        if n == 0 {
            return Err(Error::UnsupportedSize("torus of dimension 0".into()));
        }
        let desc = PoJaDescriptor::product(vec![PoJaDescriptor::scalar(RingDescriptor::Q); n]);
        let grid = torus_axis_grid()
            .iter()
            .map(cube_to_chart)
            .collect::<Result<_>>()?;
        Ok(TorusGridModel {
            full: FullModel::new(&desc)?,
            n,
            grid,
        })
    }

    /// Circle point `k` of an axis: grid values in increasing order, then `∞`.
    fn circle(&self, k: usize) -> HomPoint {
        if k == self.grid.len() {
            HomPoint::ProjPair(int(1).into_q(), int(0).into_q())
        } else {
            HomPoint::ProjPair(self.grid[k].clone().into_q(), int(1).into_q())
        }
    }
}

trait IntoQ {
    fn into_q(self) -> RingElem;
}

impl IntoQ for Rational {
    fn into_q(self) -> RingElem {
        RingDescriptor::Q.from_rational(&self).expect("ℚ")
    }
}

impl CyclicModel for TorusGridModel {
    type Point = HomPoint;

    fn label(&self) -> String {
        format!("torus{}-grid", self.n)
    }

    fn descriptor(&self) -> &PoJaDescriptor {
        self.full.descriptor()
    }

    fn in_r(&self, a: &HomPoint, x: &HomPoint, b: &HomPoint) -> Result<bool> {
        self.full.in_r(a, x, b)
    }

    fn transversal(&self, p: &HomPoint, q: &HomPoint) -> Result<bool> {
        self.full.transversal(p, q)
    }

    fn point_eq(&self, p: &HomPoint, q: &HomPoint) -> Result<bool> {
        self.full.point_eq(p, q)
    }

    fn point_json(&self, p: &HomPoint) -> Value {
        point_to_json(p)
    }

    fn act(&self, w: &GroupWord, p: &HomPoint) -> Result<HomPoint> {
        self.full.act(w, p)
    }

    fn embed(&self, v: &JElem) -> HomPoint {
        self.full.embed(v)
    }

    fn infinity(&self) -> HomPoint {
        self.full.infinity()
    }

    fn sample_point(&self, s: &mut Sampler) -> HomPoint {
        HomPoint::ProductPoint(
            (0..self.n)
                .map(|_| self.circle(s.index(self.grid.len() + 1)))
                .collect(),
        )
    }

    /// Per axis a cyclically ordered `k`-subset of the circle grid, rotated
    /// independently.
    fn sample_chain(&self, s: &mut Sampler, k: usize) -> Vec<HomPoint> {
        let m = self.grid.len() + 1;
        let axes: Vec<Vec<usize>> = (0..self.n)
            .map(|_| {
                let mut pick: Vec<usize> = Vec::with_capacity(k);
                while pick.len() < k {
                    let c = s.index(m);
                    if !pick.contains(&c) {
                        pick.push(c);
                    }
                }
                pick.sort_unstable();
                pick.rotate_left(s.index(k));
                pick
            })
            .collect();
        (0..k)
            .map(|i| HomPoint::ProductPoint(axes.iter().map(|ax| self.circle(ax[i])).collect()))
            .collect()
    }
}
