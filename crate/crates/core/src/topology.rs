//! Sampled probes of the interval topology.

use serde_json::json;

use crate::chart::{transversal, ChartPoint};
use crate::cyclic::{guard, in_r, Interval};
use crate::error::{Error, Result};
use crate::jordan::{JElem, PoJaDescriptor};
use crate::linalg::Mat;
use crate::poly::{charpoly, real_roots_inside};
use crate::rational::{int, rat, Rational};
use crate::report::{AxiomReport, Case};
use crate::ring::RingDescriptor;
use crate::sample::{run_cases, SampleSpec, Sampler};

/// A pair of intervals around `p` and `q` that share none of the sample
/// points ("sampled-disjoint").
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeparatingPair {
    pub around_p: Interval,
    pub around_q: Interval,
}

/// All catalog pairs separating `p` from `q`. Disjointness is only
/// certified on `samples` together with `p` and `q` themselves.
pub fn separating_intervals(
    p: &ChartPoint,
    q: &ChartPoint,
    catalog: &[Interval],
    samples: &[ChartPoint],
) -> Result<Vec<SeparatingPair>> {
    p.same_algebra(q)?;
    if p == q {
        return Err(Error::EqualPoints);
    }
    let probe: Vec<&ChartPoint> = samples.iter().chain([p, q]).collect();
    let member_sets = catalog
        .iter()
        .map(|iv| {
            probe
                .iter()
                .map(|x| iv.contains(x))
                .collect::<Result<Vec<bool>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    let (ip, iq) = (samples.len(), samples.len() + 1);
    let mut out = Vec::new();
    for (i, iv) in catalog.iter().enumerate() {
        if !member_sets[i][ip] {
            continue;
        }
        for (j, jv) in catalog.iter().enumerate() {
            if !member_sets[j][iq] {
                continue;
            }
            if member_sets[i]
                .iter()
                .zip(&member_sets[j])
                .all(|(a, b)| !(a & b))
            {
                out.push(SeparatingPair {
                    around_p: iv.clone(),
                    around_q: jv.clone(),
                });
            }
        }
    }
    Ok(out)
}

/// Intervals `]a,b[` for every ordered transversal pair of endpoints.
pub fn interval_catalog(endpoints: &[ChartPoint]) -> Result<Vec<Interval>> {
    let mut out = Vec::new();
    for a in endpoints {
        for b in endpoints {
            if a != b && transversal(a, b)? {
                out.push(Interval::new(a.clone(), b.clone()));
            }
        }
    }
    Ok(out)
}

pub const FIBER_CHECKS: [&str; 2] = ["eps-independence", "no-separating-pair"];

fn dual_point(desc: &PoJaDescriptor, s: &mut Sampler) -> ChartPoint {
    if s.chance(1, 5) {
        ChartPoint::infinity(desc)
    } else {
        ChartPoint::Finite(desc.sample(s))
    }
}

fn fiber_case(base: &PoJaDescriptor, dual: &PoJaDescriptor, s: &mut Sampler) -> Vec<Case> {
    let x = base.sample(s);
    let u = base.sample(s);
    let mut u2 = base.sample(s);
    if u2 == u {
        u2 = u.add(&base.unit());
    }
    let lift = |e: &JElem| JElem::dual_lift(&x, e).map(ChartPoint::Finite);
    let (p, q) = match (lift(&u), lift(&u2)) {
        (Ok(p), Ok(q)) => (p, q),
        (Err(e), _) | (_, Err(e)) => return vec![guard(Err(e.clone())), guard(Err(e))],
    };
    let (a, b) = (dual_point(dual, s), dual_point(dual, s));
    let data = || json!({ "a": a.to_json(), "b": b.to_json(), "p": p.to_json(), "q": q.to_json() });
    let mut row = Vec::with_capacity(FIBER_CHECKS.len());
    row.push(guard((|| {
        if !transversal(&a, &b)? {
            return Ok(Case::Vacuous);
        }
        let (mp, mq) = (in_r(&a, &p, &b)?, in_r(&a, &q, &b)?);
        Ok(Case::from_bool(mp == mq, || {
            (format!("membership {mp} vs {mq} within one fiber"), data())
        }))
    })()));
    row.push(guard((|| {
        let mut ends = vec![a.clone(), b.clone(), ChartPoint::infinity(dual)];
        ends.extend((0..3).map(|_| ChartPoint::Finite(dual.sample(s))));
        let catalog = interval_catalog(&ends)?;
        let found = separating_intervals(&p, &q, &catalog, &[])?;
        Ok(Case::from_bool(found.is_empty(), || {
            let first = &found[0];
            (
                format!("{} separating pairs for one fiber", found.len()),
                json!({
                    "p": p.to_json(), "q": q.to_json(),
                    "around_p": [first.around_p.a.to_json(), first.around_p.b.to_json()],
                    "around_q": [first.around_q.a.to_json(), first.around_q.b.to_json()],
                }),
            )
        }))
    })()));
    row
}

/// Over the tangent algebra of `base`, points of one fiber `x + εV` are
/// never told apart by intervals.
pub fn tangent_fiber_inseparability(
    base: &PoJaDescriptor,
    spec: &SampleSpec,
) -> Result<AxiomReport> {
    let base = base.concrete()?;
    if !base.is_ordered() {
        return Err(Error::NoOrder(base.ring().to_string()));
    }
    let dual = PoJaDescriptor::dual_ext(base.clone()).concrete()?;
    let rows = run_cases(spec, |s| fiber_case(&base, &dual, s));
    Ok(AxiomReport::from_rows(
        "tangent-fiber",
        &dual.to_string(),
        spec,
        &FIBER_CHECKS,
        rows,
    ))
}

pub const SPECTRAL_CHECKS: [&str; 2] = ["interval-vs-sylvester", "sylvester-vs-sturm"];

/// The three descriptions of `]−e, e[` in `Sym(n, ℚ)` for one element.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpectralBall {
    pub by_interval: bool,
    pub by_sylvester: bool,
    pub by_sturm: bool,
}

pub fn spectral_ball(x: &JElem) -> Result<SpectralBall> {
    let desc = x.descriptor();
    if !matches!(
        desc,
        PoJaDescriptor::Sym {
            ring: RingDescriptor::Q,
            ..
        }
    ) {
        return Err(Error::Unsupported(format!("spectral ball of {desc}")));
    }
    let e = desc.unit();
    let by_interval = in_r(
        &ChartPoint::Finite(e.neg()),
        &ChartPoint::Finite(x.clone()),
        &ChartPoint::Finite(e.clone()),
    )?;
    let by_sylvester = e.sub(x).in_cone()? && e.add(x).in_cone()?;
    let m: Mat<Rational> = x
        .sym_matrix()
        .expect("sym")
        .map_to(|r| r.coords()[0].clone());
    let by_sturm = real_roots_inside(&charpoly(&m), &int(-1), &int(1));
    Ok(SpectralBall {
        by_interval,
        by_sylvester,
        by_sturm,
    })
}

fn spectral_case(desc: &PoJaDescriptor, s: &mut Sampler) -> (Vec<Case>, bool) {
    // scaled samples put a fair share of points inside the ball
    let k = 1 + s.index(4) as i64;
    let x = desc.sample(s).scale(&rat(1, k));
    let data = || json!({ "x": x.coords_json() });
    match spectral_ball(&x) {
        Ok(b) => (
            vec![
                Case::from_bool(b.by_interval == b.by_sylvester, || {
                    (
                        format!("interval {} vs Sylvester {}", b.by_interval, b.by_sylvester),
                        data(),
                    )
                }),
                Case::from_bool(b.by_sylvester == b.by_sturm, || {
                    (
                        format!("Sylvester {} vs Sturm {}", b.by_sylvester, b.by_sturm),
                        data(),
                    )
                }),
            ],
            b.by_sylvester,
        ),
        Err(e) => (vec![guard(Err(e.clone())), guard(Err(e))], false),
    }
}

/// `x ∈ ]−e, e[` against the Sylvester test of `e ± x` and the Sturm count
/// of the characteristic polynomial on `(−1, 1)`.
pub fn spectral_ball_check(n: usize, spec: &SampleSpec) -> Result<AxiomReport> {
    if n == 0 || n > 3 {
        return Err(Error::UnsupportedSize(format!(
            "spectral ball check for n = {n}; 1 ≤ n ≤ 3"
        )));
    }
    let desc = PoJaDescriptor::sym(n, RingDescriptor::Q);
    let (rows, inside): (Vec<_>, Vec<_>) = run_cases(spec, |s| spectral_case(&desc, s))
        .into_iter()
        .unzip();
    let mut r = AxiomReport::from_rows(
        "spectral-ball",
        &desc.to_string(),
        spec,
        &SPECTRAL_CHECKS,
        rows,
    );
    let inside = inside.into_iter().filter(|&b| b).count();
    r.notes.push(format!(
        "{inside} of {} samples inside the ball",
        spec.cases
    ));
    Ok(r)
}
