//! Affine images `]a,b[ ∩ V` of intervals: the parabolic / elliptic /
//! hyperbolic split, the cone description of the first two shapes, and the
//! box decomposition of intervals on the torus.

use std::fmt;

use num_traits::{One, Signed};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chart::{transversal, ChartPoint};
use crate::cyclic::{guard, in_r};
use crate::error::{Error, Result};
use crate::full::{cube_to_chart, embed, in_r_full, torus_axis_grid, GeometryDescriptor};
use crate::jordan::{JElem, PoJaDescriptor};
use crate::rational::{format_rational, Rational};
use crate::report::{AxiomReport, Case};
use crate::ring::RingDescriptor;
use crate::sample::{run_cases, SampleSpec, Sampler};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ImageClass {
    Parabolic,
    Elliptic,
    Hyperbolic,
}

impl ImageClass {
    /// One-letter tag used in CSV output.
    pub fn letter(self) -> char {
        match self {
            ImageClass::Parabolic => 'P',
            ImageClass::Elliptic => 'E',
            ImageClass::Hyperbolic => 'H',
        }
    }
}

impl fmt::Display for ImageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ImageClass::Parabolic => "parabolic",
            ImageClass::Elliptic => "elliptic",
            ImageClass::Hyperbolic => "hyperbolic",
        };
        f.write_str(s)
    }
}

pub fn classify_pair(a: &ChartPoint, b: &ChartPoint) -> Result<ImageClass> {
    if !transversal(a, b)? {
        return Err(Error::NotTransversal);
    }
    Ok(match (a, b) {
        (ChartPoint::Finite(a), ChartPoint::Finite(b)) => {
            if b.sub(a).in_cone()? {
                ImageClass::Elliptic
            } else {
                ImageClass::Hyperbolic
            }
        }
        _ => ImageClass::Parabolic,
    })
}

/// Membership in `]a,b[` for parabolic and elliptic pairs, from cone tests
/// alone.
pub fn member_by_cones(a: &ChartPoint, b: &ChartPoint, x: &JElem) -> Result<bool> {
    a.same_algebra(b)?;
    if let Some(v) = a.finite() {
        v.same_algebra(x)?;
    }
    match classify_pair(a, b)? {
        ImageClass::Parabolic => match (a, b) {
            (ChartPoint::Finite(a), _) => x.sub(a).in_cone(),
            (_, ChartPoint::Finite(b)) => b.sub(x).in_cone(),
            _ => unreachable!("parabolic pairs have one finite end"),
        },
        ImageClass::Elliptic => {
            let (a, b) = (a.finite().expect("finite"), b.finite().expect("finite"));
            Ok(x.sub(a).in_cone()? && b.sub(x).in_cone()?)
        }
        ImageClass::Hyperbolic => Err(Error::NotApplicable(
            "hyperbolic images have no cone description".into(),
        )),
    }
}

pub const TWO_PATH_CHECKS: [&str; 3] = [
    "parabolic-two-path",
    "elliptic-two-path",
    "elliptic-convexity",
];

/// A point near `c`, inside or outside a given interval depending on luck.
fn probe(desc: &PoJaDescriptor, s: &mut Sampler, c: &JElem) -> Result<JElem> {
    Ok(match s.index(4) {
        0 => c.add(&desc.sample_positive(s)?),
        1 => c.sub(&desc.sample_positive(s)?),
        _ => c.add(&desc.sample(s)),
    })
}

fn two_path_case(desc: &PoJaDescriptor, s: &mut Sampler) -> Vec<Case> {
    let inf = ChartPoint::infinity(desc);
    let data = |a: &ChartPoint, b: &ChartPoint, x: &JElem| json!({ "a": a.to_json(), "b": b.to_json(), "x": x.coords_json() });
    let agree = |a: &ChartPoint, b: &ChartPoint, x: &JElem| -> Result<Case> {
        let fin = ChartPoint::Finite(x.clone());
        let (by_r, by_cones) = (in_r(a, &fin, b)?, member_by_cones(a, b, x)?);
        Ok(Case::from_bool(by_r == by_cones, || {
            (
                format!("in_r = {by_r}, cone path = {by_cones}"),
                data(a, b, x),
            )
        }))
    };
    let mut row = Vec::with_capacity(TWO_PATH_CHECKS.len());
    row.push(guard((|| {
        let v = desc.sample(s);
        let x = probe(desc, s, &v)?;
        let fin = ChartPoint::Finite(v);
        if s.chance(1, 2) {
            agree(&fin, &inf, &x)
        } else {
            agree(&inf, &fin, &x)
        }
    })()));
    let av = desc.sample(s);
    let bv = av.add(&desc.sample_positive(s).expect("ordered instance"));
    let (a, b) = (
        ChartPoint::Finite(av.clone()),
        ChartPoint::Finite(bv.clone()),
    );
    let mid = av.add(&bv).scale(&crate::rational::rat(1, 2));
    row.push(guard((|| {
        let x = probe(desc, s, &mid)?;
        agree(&a, &b, &x)
    })()));
    row.push(guard((|| {
        // two members near the midpoint, then a point of their segment
        let mut inside = Vec::new();
        for _ in 0..8 {
            let k = 1 + s.index(4) as i64;
            let x = mid.add(&desc.sample(s).scale(&crate::rational::rat(1, 1 << k)));
            if in_r(&a, &ChartPoint::Finite(x.clone()), &b)? {
                inside.push(x);
                if inside.len() == 2 {
                    break;
                }
            }
        }
        if inside.len() < 2 {
            return Ok(Case::Vacuous);
        }
        let t = s.unit_interval();
        let z = inside[0]
            .scale(&(Rational::one() - &t))
            .add(&inside[1].scale(&t));
        let ok = in_r(&a, &ChartPoint::Finite(z), &b)?;
        Ok(Case::from_bool(ok, || {
            (
                "segment between two members leaves the elliptic image".into(),
                json!({
                    "a": a.to_json(), "b": b.to_json(),
                    "x": inside[0].coords_json(), "y": inside[1].coords_json(),
                    "t": format_rational(&t),
                }),
            )
        }))
    })()));
    row
}

/// Parabolic and elliptic images: `in_r` against the cone description,
/// and convexity of elliptic images.
pub fn check_two_paths(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    let desc = desc.concrete()?;
    if !desc.is_ordered() {
        return Err(Error::NoOrder(desc.ring().to_string()));
    }
    desc.sample_positive(&mut spec.sampler(0))?;
    let rows = run_cases(spec, |s| two_path_case(&desc, s));
    Ok(AxiomReport::from_rows(
        "affine-two-path",
        &desc.to_string(),
        spec,
        &TWO_PATH_CHECKS,
        rows,
    ))
}

pub const HYPERBOLIC_CHECKS: [&str; 1] = ["cones-inside-interval"];

fn superset_case(a: &JElem, b: &JElem, s: &mut Sampler) -> Vec<Case> {
    let desc = a.descriptor();
    vec![guard((|| {
        let p = desc.sample_positive(s)?;
        let x = if s.chance(1, 2) { a.add(&p) } else { b.sub(&p) };
        let ok = in_r(
            &ChartPoint::Finite(a.clone()),
            &ChartPoint::Finite(x.clone()),
            &ChartPoint::Finite(b.clone()),
        )?;
        Ok(Case::from_bool(ok, || {
            (
                "point of (a+Ω) ∪ (b−Ω) outside ]a,b[".into(),
                json!({ "a": a.coords_json(), "b": b.coords_json(), "x": x.coords_json() }),
            )
        }))
    })())]
}

fn require_hyperbolic(a: &JElem, b: &JElem) -> Result<()> {
    a.same_algebra(b)?;
    if !a.sub(b).in_cone()? {
        return Err(Error::Precondition("hyperbolic check needs b < a".into()));
    }
    Ok(())
}

/// For `b < a`: `(a+Ω) ∪ (b−Ω) ⊆ ]a,b[`. The notes record, when found, a
/// member of `]a,b[ ∩ V` outside both cones and a segment between members
/// that leaves `]a,b[`.
pub fn hyperbolic_superset_check(a: &JElem, b: &JElem, spec: &SampleSpec) -> Result<AxiomReport> {
    require_hyperbolic(a, b)?;
    let desc = a.descriptor().clone();
    let rows = run_cases(spec, |s| superset_case(a, b, s));
    let mut report = AxiomReport::from_rows(
        "hyperbolic-image",
        &desc.to_string(),
        spec,
        &HYPERBOLIC_CHECKS,
        rows,
    );
    if let Some(w) = find_nonconvexity(a, b, spec)? {
        report.notes.push(format!("non-convexity witness: {w}"));
    }
    if let Some(w) = find_strict_inclusion(a, b, spec)? {
        report.notes.push(format!("member outside both cones: {w}"));
    }
    Ok(report)
}

fn member(a: &JElem, x: &JElem, b: &JElem) -> Result<bool> {
    in_r(
        &ChartPoint::Finite(a.clone()),
        &ChartPoint::Finite(x.clone()),
        &ChartPoint::Finite(b.clone()),
    )
}

/// A segment between two members of `]a,b[ ∩ V` that leaves it. The pair
/// `a+e, b−e` at `t = 1/2` is tried first, then sampled pairs.
pub fn find_nonconvexity(a: &JElem, b: &JElem, spec: &SampleSpec) -> Result<Option<Value>> {
    let desc = a.descriptor();
    let half = crate::rational::rat(1, 2);
    let e = desc.unit();
    let mut candidates = vec![(a.add(&e), b.sub(&e), half)];
    let mut s = spec.sampler(usize::MAX);
    for _ in 0..spec.cases.min(200) {
        let x = a.add(&desc.sample_positive(&mut s)?);
        let y = b.sub(&desc.sample_positive(&mut s)?);
        candidates.push((x, y, s.unit_interval()));
    }
    for (x, y, t) in candidates {
        if !(member(a, &x, b)? && member(a, &y, b)?) {
            continue;
        }
        let z = x.scale(&(Rational::one() - &t)).add(&y.scale(&t));
        if !member(a, &z, b)? {
            return Ok(Some(json!({
                "a": a.coords_json(), "b": b.coords_json(),
                "x": x.coords_json(), "y": y.coords_json(),
                "t": format_rational(&t), "point": z.coords_json(),
            })));
        }
    }
    Ok(None)
}

/// A member of `]a,b[ ∩ V` in neither `a+Ω` nor `b−Ω`.
pub fn find_strict_inclusion(a: &JElem, b: &JElem, spec: &SampleSpec) -> Result<Option<Value>> {
    let desc = a.descriptor();
    let mut s = spec.sampler(usize::MAX - 1);
    let mid = a.add(b).scale(&crate::rational::rat(1, 2));
    for _ in 0..spec.cases.min(500) {
        let x = if s.chance(1, 2) {
            desc.sample(&mut s)
        } else {
            mid.add(&desc.sample(&mut s))
        };
        if member(a, &x, b)? && !x.sub(a).in_cone()? && !b.sub(&x).in_cone()? {
            return Ok(Some(
                json!({ "a": a.coords_json(), "b": b.coords_json(), "x": x.coords_json() }),
            ));
        }
    }
    Ok(None)
}

/// The superset property over sampled hyperbolic pairs `b = a − p`.
pub fn check_hyperbolic(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    let desc = desc.concrete()?;
    if !desc.is_ordered() {
        return Err(Error::NoOrder(desc.ring().to_string()));
    }
    let rows = run_cases(spec, |s| match desc.sample_positive(s) {
        Ok(p) => {
            let a = desc.sample(s);
            let b = a.sub(&p);
            superset_case(&a, &b, s)
        }
        Err(e) => vec![guard(Err(e))],
    });
    Ok(AxiomReport::from_rows(
        "hyperbolic-image",
        &desc.to_string(),
        spec,
        &HYPERBOLIC_CHECKS,
        rows,
    ))
}

// -- torus boxes ------------------------------------------------------------

/// A product of open intervals in cube coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct AffineBox {
    pub lo: Vec<Rational>,
    pub hi: Vec<Rational>,
}

impl AffineBox {
    pub fn contains(&self, t: &[Rational]) -> bool {
        t.len() == self.lo.len()
            && t.iter()
                .zip(self.lo.iter().zip(&self.hi))
                .all(|(x, (l, h))| l < x && x < h)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "lo": self.lo.iter().map(format_rational).collect::<Vec<_>>(),
            "hi": self.hi.iter().map(format_rational).collect::<Vec<_>>(),
        })
    }
}

fn in_open_cube(t: &Rational) -> bool {
    t.abs() < Rational::one()
}

/// `]a,b[ ∩ V` on the torus, as `2^k` boxes where `k` counts the
/// coordinates with `bᵢ < aᵢ`.
pub fn torus_boxes(a: &[Rational], b: &[Rational]) -> Result<Vec<AffineBox>> {
    if a.len() != b.len() || a.is_empty() {
        return Err(Error::Precondition(
            "endpoints need the same positive length".into(),
        ));
    }
    if let Some(t) = a.iter().chain(b).find(|t| !in_open_cube(t)) {
        return Err(Error::Precondition(format!(
            "{} is outside the open cube",
            format_rational(t)
        )));
    }
    if let Some(i) = (0..a.len()).find(|&i| a[i] == b[i]) {
        return Err(Error::DegenerateEndpoint(i));
    }
    let one = Rational::one();
    let axes: Vec<Vec<(Rational, Rational)>> = a
        .iter()
        .zip(b)
        .map(|(ai, bi)| {
            if ai < bi {
                vec![(ai.clone(), bi.clone())]
            } else {
                vec![(ai.clone(), one.clone()), (-&one, bi.clone())]
            }
        })
        .collect();
    let mut boxes = vec![AffineBox {
        lo: Vec::new(),
        hi: Vec::new(),
    }];
    for ax in &axes {
        boxes = boxes
            .iter()
            .flat_map(|bx| {
                ax.iter().map(move |(l, h)| {
                    let mut nb = bx.clone();
                    nb.lo.push(l.clone());
                    nb.hi.push(h.clone());
                    nb
                })
            })
            .collect();
    }
    Ok(boxes)
}

/// The torus of dimension `n` as the product geometry of `n` projective
/// lines over ℚ.
pub fn torus_geometry(n: usize) -> Result<GeometryDescriptor> {
    if n == 0 {
        return Err(Error::UnsupportedSize("torus of dimension 0".into()));
    }
    GeometryDescriptor::for_algebra(&PoJaDescriptor::product(vec![
        PoJaDescriptor::scalar(
            RingDescriptor::Q
        );
        n
    ]))
}

/// The chart point with the given cube coordinates.
pub fn torus_point(g: &GeometryDescriptor, t: &[Rational]) -> Result<JElem> {
    let c = t.iter().map(cube_to_chart).collect::<Result<Vec<_>>>()?;
    g.algebra.from_rationals(&c)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GridAgreement {
    pub boxes: Vec<AffineBox>,
    pub points: usize,
    pub members: usize,
    pub mismatches: usize,
    pub first_mismatch: Option<Value>,
}

/// Box membership against `in_r_full` on the product geometry, over the
/// full `20ⁿ` cube grid.
pub fn torus_grid_agreement(a: &[Rational], b: &[Rational]) -> Result<GridAgreement> {
    let boxes = torus_boxes(a, b)?;
    let n = a.len();
    let g = torus_geometry(n)?;
    let ea = embed(&g, &torus_point(&g, a)?)?;
    let eb = embed(&g, &torus_point(&g, b)?)?;
    let axis = torus_axis_grid();
    let total = axis.len().pow(n as u32);
    let results: Vec<(bool, bool)> = (0..total)
        .into_par_iter()
        .map(|k| -> Result<(bool, bool)> {
            let t = grid_coords(&axis, n, k);
            let ex = embed(&g, &torus_point(&g, &t)?)?;
            let full = in_r_full(&g, &ea, &ex, &eb)?;
            Ok((full, boxes.iter().any(|bx| bx.contains(&t))))
        })
        .collect::<Result<_>>()?;
    let members = results.iter().filter(|r| r.0).count();
    let bad: Vec<usize> = (0..total)
        .filter(|&k| results[k].0 != results[k].1)
        .collect();
    let first_mismatch = bad.first().map(|&k| {
        let t = grid_coords(&axis, n, k);
        json!({
            "a": a.iter().map(format_rational).collect::<Vec<_>>(),
            "b": b.iter().map(format_rational).collect::<Vec<_>>(),
            "t": t.iter().map(format_rational).collect::<Vec<_>>(),
            "in_r_full": results[k].0,
            "in_box": results[k].1,
        })
    });
    Ok(GridAgreement {
        boxes,
        points: total,
        members,
        mismatches: bad.len(),
        first_mismatch,
    })
}

fn grid_coords(axis: &[Rational], n: usize, mut k: usize) -> Vec<Rational> {
    let mut t = Vec::with_capacity(n);
    for _ in 0..n {
        t.push(axis[k % axis.len()].clone());
        k /= axis.len();
    }
    t
}

pub const TORUS_CHECKS: [&str; 2] = ["box-count", "grid-agreement"];

/// Two distinct cube rationals, the first smaller.
fn ordered_pair(s: &mut Sampler) -> (Rational, Rational) {
    loop {
        let d = s.int_in(2, s.bound().max(2));
        let (u, v) = (s.int_in(1 - d, d - 1), s.int_in(1 - d, d - 1));
        if u != v {
            let (u, v) = (u.min(v), u.max(v));
            return (
                Rational::new(u.into(), d.into()),
                Rational::new(v.into(), d.into()),
            );
        }
    }
}

/// Every sign pattern of `bᵢ < aᵢ` in dimension `n`, one case each.
pub fn check_torus_boxes(n: usize, spec: &SampleSpec) -> Result<AxiomReport> {
    torus_geometry(n)?;
    let patterns = 1usize << n;
    let mut rows = Vec::with_capacity(patterns);
    for mask in 0..patterns {
        let mut s = spec.sampler(mask);
        let (mut a, mut b) = (Vec::new(), Vec::new());
        for i in 0..n {
            let (lo, hi) = ordered_pair(&mut s);
            if mask & (1 << i) != 0 {
                a.push(hi);
                b.push(lo);
            } else {
                a.push(lo);
                b.push(hi);
            }
        }
        let k = mask.count_ones();
        let agreement = torus_grid_agreement(&a, &b);
        let data = || json!({ "a": a.iter().map(format_rational).collect::<Vec<_>>(), "b": b.iter().map(format_rational).collect::<Vec<_>>() });
        rows.push(match agreement {
            Ok(g) => vec![
                Case::from_bool(g.boxes.len() == 1 << k, || {
                    (format!("{} boxes for k = {k}", g.boxes.len()), data())
                }),
                Case::from_bool(g.mismatches == 0, || {
                    (
                        format!("{} of {} grid points disagree", g.mismatches, g.points),
                        g.first_mismatch.clone().unwrap_or(Value::Null),
                    )
                }),
            ],
            Err(e) => vec![guard(Err(e.clone())), guard(Err(e))],
        });
    }
    let spec = SampleSpec {
        cases: patterns,
        ..*spec
    };
    Ok(AxiomReport::from_rows(
        "torus-boxes",
        &format!("torus{n}"),
        &spec,
        &TORUS_CHECKS,
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn q() -> PoJaDescriptor {
        PoJaDescriptor::scalar(RingDescriptor::Q)
    }

    fn sc(x: i64) -> ChartPoint {
        ChartPoint::Finite(q().from_rationals(&[int(x)]).unwrap())
    }

    #[test]
    fn classification_examples() {
        let inf = ChartPoint::infinity(&q());
        assert_eq!(classify_pair(&sc(0), &inf).unwrap(), ImageClass::Parabolic);
        assert_eq!(
            classify_pair(&sc(1), &sc(-1)).unwrap(),
            ImageClass::Hyperbolic
        );
        let s2 = PoJaDescriptor::sym(2, RingDescriptor::Q);
        let two_e = ChartPoint::Finite(s2.unit().scale(&int(2)));
        assert_eq!(
            classify_pair(&ChartPoint::origin(&s2), &two_e).unwrap(),
            ImageClass::Elliptic
        );
        assert_eq!(classify_pair(&sc(1), &sc(1)), Err(Error::NotTransversal));
    }

    #[test]
    fn cone_path_examples() {
        let s2 = PoJaDescriptor::sym(2, RingDescriptor::Q);
        let two_e = ChartPoint::Finite(s2.unit().scale(&int(2)));
        assert!(member_by_cones(&ChartPoint::origin(&s2), &two_e, &s2.unit()).unwrap());
        let inf = ChartPoint::infinity(&q());
        assert!(!member_by_cones(&sc(0), &inf, &q().from_rationals(&[int(-1)]).unwrap()).unwrap());
        let sp = PoJaDescriptor::spin(2, RingDescriptor::Q);
        let b = ChartPoint::Finite(sp.from_rationals(&[int(4), int(0), int(0)]).unwrap());
        let x = sp.from_rationals(&[int(2), int(1), int(0)]).unwrap();
        assert!(member_by_cones(&ChartPoint::origin(&sp), &b, &x).unwrap());
        assert!(matches!(
            member_by_cones(&sc(1), &sc(-1), &q().zero()),
            Err(Error::NotApplicable(_))
        ));
    }

    #[test]
    fn scalar_hyperbolic_image_is_not_convex() {
        let (a, b) = (
            q().from_rationals(&[int(1)]).unwrap(),
            q().from_rationals(&[int(-1)]).unwrap(),
        );
        let r = hyperbolic_superset_check(&a, &b, &SampleSpec::new(0, 200)).unwrap();
        assert!(r.passed(), "{r}");
        let w = find_nonconvexity(&a, &b, &SampleSpec::new(0, 10))
            .unwrap()
            .unwrap();
        assert_eq!(w["x"], json!(["2"]));
        assert_eq!(w["y"], json!(["-2"]));
        assert_eq!(w["point"], json!(["0"]));
        // in one dimension the image is exactly the union of the two cones
        assert_eq!(
            find_strict_inclusion(&a, &b, &SampleSpec::new(0, 300)).unwrap(),
            None
        );
        assert!(hyperbolic_superset_check(&b, &a, &SampleSpec::new(0, 1)).is_err());
    }

    #[test]
    fn box_counts() {
        let h = |v: &[i64]| v.iter().map(|&x| rat(x, 2)).collect::<Vec<_>>();
        assert_eq!(torus_boxes(&h(&[1, 1]), &h(&[-1, -1])).unwrap().len(), 4);
        assert_eq!(torus_boxes(&h(&[-1, -1]), &h(&[1, 1])).unwrap().len(), 1);
        assert_eq!(
            torus_boxes(&h(&[1, -1, 1]), &h(&[-1, 1, -1]))
                .unwrap()
                .len(),
            4
        );
        assert_eq!(
            torus_boxes(&h(&[1, 0]), &h(&[1, 1])),
            Err(Error::DegenerateEndpoint(0))
        );
        assert!(torus_boxes(&[int(1)], &[int(0)]).is_err());
    }

    #[test]
    fn boxes_match_the_product_geometry() {
        let h = |v: &[i64]| v.iter().map(|&x| rat(x, 2)).collect::<Vec<_>>();
        let g = torus_grid_agreement(&h(&[1, 1]), &h(&[-1, -1])).unwrap();
        assert_eq!((g.points, g.mismatches), (400, 0));
        // each axis keeps 5 + 5 of its 20 grid values
        assert_eq!(g.members, 100);
    }

    #[test]
    fn two_paths_agree() {
        for d in [
            q(),
            PoJaDescriptor::sym(2, RingDescriptor::Q),
            PoJaDescriptor::spin(3, RingDescriptor::Q),
        ] {
            let r = check_two_paths(&d, &SampleSpec::new(2, 150)).unwrap();
            assert!(r.passed(), "{r}");
            assert!(r.checks.iter().all(|c| c.tested > 0), "{r}");
        }
    }
}
