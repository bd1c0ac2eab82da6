use serde_json::{json, Value};

use super::{jdop, jinverse, jquad, jsym, sym_sandwich, triple, JElem, PoJaDescriptor};
use crate::error::{Error, Result};
use crate::report::{AxiomReport, Case};
use crate::sample::{run_cases, SampleSpec, Sampler};

pub const JORDAN_CHECKS: [&str; 14] = [
    "J1-commutativity",
    "J2-jordan-identity",
    "U-unit",
    "FF-fundamental-formula",
    "CF-commutation-formula",
    "quadratic-representation",
    "polarization-matches-triple",
    "sym-sandwich",
    "inverse-involution",
    "inverse-routes-agree",
    "symmetry-fixes-center",
    "symmetry-involution",
    "symmetric-space-law",
    "FF-eps-extension",
];

pub const POJA_CHECKS: [&str; 9] = [
    "OJ0-unit-positive",
    "OJ1-positive-invertible",
    "OJ2-quadratic-preserves-cone",
    "inverse-quadratic-preserves-cone",
    "inverse-preserves-cone",
    "symmetry-preserves-cone",
    "invertible-squares-positive",
    "cone-additive",
    "cone-asymmetric",
];

pub const FORMALLY_REAL_CHECKS: [&str; 1] = ["formally-real"];

fn j(x: &JElem) -> Value {
    x.coords_json()
}

fn violated(summary: &str, data: Value) -> (String, Value) {
    (summary.to_string(), data)
}

/// Checks whose inputs leave the chart of definitions become `Undefined`.
fn defined(r: Result<Case>) -> Case {
    match r {
        Ok(c) => c,
        Err(Error::NotInvertible) => Case::Undefined,
        Err(e) => Case::Violated(format!("unexpected error: {e}"), Value::Null),
    }
}

fn jordan_case(d: &PoJaDescriptor, s: &mut Sampler) -> Vec<Case> {
    let (a, b, x) = (d.sample(s), d.sample(s), d.sample(s));
    let a2 = a.square();
    let qa = jquad(&a);
    let mut row = Vec::with_capacity(JORDAN_CHECKS.len());

    row.push(Case::from_bool(a.jbullet(&b) == b.jbullet(&a), || {
        violated("a•b ≠ b•a", json!({"a": j(&a), "b": j(&b)}))
    }));
    row.push(Case::from_bool(
        a.jbullet(&a2.jbullet(&b)) == a2.jbullet(&a.jbullet(&b)),
        || violated("a•(a²•b) ≠ a²•(a•b)", json!({"a": j(&a), "b": j(&b)})),
    ));
    row.push(Case::from_bool(jquad(&d.unit()).is_identity(), || {
        violated("Q_e ≠ id", Value::Null)
    }));

    let qb = jquad(&b);
    let ff_lhs = jquad(&qa.apply(&b));
    let ff_rhs = qa.compose(&qb).compose(&qa);
    row.push(Case::from_bool(ff_lhs == ff_rhs, || {
        violated("Q_{Q_a b} ≠ Q_a Q_b Q_a", json!({"a": j(&a), "b": j(&b)}))
    }));

    let cf = jdop(&b, &a).and_then(|dba| Ok((qa.compose(&dba), jdop(&a, &b)?.compose(&qa))));
    row.push(match cf {
        Ok((l, r)) => Case::from_bool(l == r, || {
            violated("Q_a D_{b,a} ≠ D_{a,b} Q_a", json!({"a": j(&a), "b": j(&b)}))
        }),
        Err(e) => Case::Violated(e.to_string(), Value::Null),
    });

    // the materialized matrix against direct evaluation of 2a•(a•x) − a²•x
    let direct = a
        .jbullet(&a.jbullet(&x))
        .scale(&crate::rational::int(2))
        .sub(&a2.jbullet(&x));
    row.push(Case::from_bool(qa.apply(&x) == direct, || {
        violated("Q_a x ≠ 2a•(a•x) − a²•x", json!({"a": j(&a), "x": j(&x)}))
    }));

    row.push(match jdop(&a, &x) {
        Ok(op) => Case::from_bool(op.apply(&b) == triple(&a, &x, &b), || {
            violated(
                "D_{a,x}(b) ≠ {a x b}",
                json!({"a": j(&a), "x": j(&x), "b": j(&b)}),
            )
        }),
        Err(e) => Case::Violated(e.to_string(), Value::Null),
    });

    row.push(match sym_sandwich(&a, &x) {
        Some(axa) => Case::from_bool(qa.apply(&x) == axa, || {
            violated("Q_a x ≠ a·x·a", json!({"a": j(&a), "x": j(&x)}))
        }),
        None => Case::Vacuous,
    });

    let inv = jinverse(&a);
    row.push(defined(inv.clone().and_then(|ai| {
        let back = jinverse(&ai)?;
        Ok(Case::from_bool(back == a, || {
            violated("(a⁻¹)⁻¹ ≠ a", json!({"a": j(&a)}))
        }))
    })));
    row.push(match (&inv, a.inverse()) {
        (Ok(p), Ok(q)) => Case::from_bool(*p == q, || {
            violated(
                "Q_a⁻¹(a) differs from the closed-form inverse",
                json!({"a": j(&a)}),
            )
        }),
        (Err(Error::NotInvertible), Err(Error::NotInvertible)) => Case::Undefined,
        _ => Case::Violated(
            "invertibility routes disagree".into(),
            json!({"a": j(&a), "q_solve": inv.is_ok(), "is_invertible": a.is_invertible()}),
        ),
    });

    let (u, v, w) = (
        d.sample_invertible(s),
        d.sample_invertible(s),
        d.sample_invertible(s),
    );
    row.push(defined(jsym(&u, &u).map(|r| {
        Case::from_bool(r == u, || violated("s_x(x) ≠ x", json!({"x": j(&u)})))
    })));
    row.push(defined(jsym(&u, &v).and_then(|y| jsym(&u, &y)).map(|r| {
        Case::from_bool(r == v, || {
            violated("s_x(s_x(y)) ≠ y", json!({"x": j(&u), "y": j(&v)}))
        })
    })));
    row.push(defined((|| {
        let lhs = jsym(&u, &jsym(&v, &jsym(&u, &w)?)?)?;
        let rhs = jsym(&jsym(&u, &v)?, &w)?;
        Ok(Case::from_bool(lhs == rhs, || {
            violated(
                "s_x s_y s_x ≠ s_{s_x(y)}",
                json!({"x": j(&u), "y": j(&v), "z": j(&w)}),
            )
        }))
    })()));

    row.push(match PoJaDescriptor::dual_ext(d.clone()).concrete() {
        Ok(td) if td.validate().is_ok() => {
            let (ta, tb) = (td.sample(s), td.sample(s));
            let qa = jquad(&ta);
            Case::from_bool(
                jquad(&qa.apply(&tb)) == qa.compose(&jquad(&tb)).compose(&qa),
                || {
                    violated(
                        "FF fails over the ε-extension",
                        json!({"a": j(&ta), "b": j(&tb)}),
                    )
                },
            )
        }
        _ => Case::Vacuous,
    });
    row
}

/// Samples the Jordan identities, the derived operator identities and the
/// symmetric-space law of `V^×`.
pub fn check_jordan_axioms(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    desc.validate()?;
    let d = desc.concrete()?;
    let rows = run_cases(spec, |s| jordan_case(&d, s));
    Ok(AxiomReport::from_rows(
        "jordan",
        &desc.to_string(),
        spec,
        &JORDAN_CHECKS,
        rows,
    ))
}

fn cone(x: &JElem) -> bool {
    x.in_cone().expect("ordered descriptor")
}

fn poja_case(d: &PoJaDescriptor, s: &mut Sampler) -> Vec<Case> {
    let a = d.sample_positive(s).expect("ordered descriptor");
    let p = d.sample_positive(s).expect("ordered descriptor");
    let b = d.sample_invertible(s);
    let mut row = Vec::with_capacity(POJA_CHECKS.len());

    row.push(Case::from_bool(cone(&d.unit()), || {
        violated("e is not positive", Value::Null)
    }));
    row.push(match (cone(&a), jinverse(&a)) {
        (false, _) => Case::Violated("sampled element not in Ω".into(), json!({"a": j(&a)})),
        (true, Ok(_)) => Case::Holds,
        (true, Err(e)) => Case::Violated(
            format!("positive element not invertible: {e}"),
            json!({"a": j(&a)}),
        ),
    });
    row.push(Case::from_bool(cone(&b.quad_apply(&a)), || {
        violated("Q_b(a) ∉ Ω", json!({"a": j(&a), "b": j(&b)}))
    }));
    row.push(defined(b.inverse().map(|bi| {
        Case::from_bool(cone(&bi.quad_apply(&a)), || {
            violated("Q_{b⁻¹}(a) ∉ Ω", json!({"a": j(&a), "b": j(&b)}))
        })
    })));
    row.push(defined(a.inverse().map(|ai| {
        Case::from_bool(cone(&ai), || violated("a⁻¹ ∉ Ω", json!({"a": j(&a)})))
    })));
    row.push(defined(jsym(&a, &p).map(|r| {
        Case::from_bool(cone(&r), || {
            violated("Q_x(y⁻¹) ∉ Ω", json!({"x": j(&a), "y": j(&p)}))
        })
    })));
    row.push(Case::from_bool(cone(&b.square()), || {
        violated("x² ∉ Ω", json!({"x": j(&b)}))
    }));
    row.push(Case::from_bool(cone(&a.add(&p)), || {
        violated("a + b ∉ Ω", json!({"a": j(&a), "b": j(&p)}))
    }));
    row.push(Case::from_bool(!cone(&a.neg()), || {
        violated("a and −a both in Ω", json!({"a": j(&a)}))
    }));
    row
}

/// Samples (OJ0)–(OJ2) and the cone stability facts.
pub fn check_poja_axioms(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    desc.validate()?;
    let d = desc.concrete()?;
    d.require_order()?;
    d.sample_positive(&mut spec.sampler(0))?;
    let rows = run_cases(spec, |s| poja_case(&d, s));
    Ok(AxiomReport::from_rows(
        "poja",
        &desc.to_string(),
        spec,
        &POJA_CHECKS,
        rows,
    ))
}

/// `a² + b² ∈ Ω` for `a ∈ V`, `b ∈ V^×`.
pub fn check_formally_real(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    desc.validate()?;
    let d = desc.concrete()?;
    d.require_order()?;
    let rows = run_cases(spec, |s| {
        let (a, b) = (d.sample(s), d.sample_invertible(s));
        vec![Case::from_bool(cone(&a.square().add(&b.square())), || {
            violated("a² + b² ∉ Ω", json!({"a": j(&a), "b": j(&b)}))
        })]
    });
    Ok(AxiomReport::from_rows(
        "formally-real",
        &desc.to_string(),
        spec,
        &FORMALLY_REAL_CHECKS,
        rows,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::ring::RingDescriptor;

    #[test]
    fn ff_scalar_instance() {
        let d = PoJaDescriptor::scalar(RingDescriptor::Q);
        let e = |x| d.from_rationals(&[int(x)]).unwrap();
        let (a, b) = (e(2), e(3));
        assert_eq!(jquad(&a).apply(&b), e(12));
        let one = e(1);
        assert_eq!(jquad(&e(12)).apply(&one), e(144));
        assert_eq!(
            jquad(&a)
                .compose(&jquad(&b))
                .compose(&jquad(&a))
                .apply(&one),
            e(144)
        );
    }

    #[test]
    fn suites_pass_on_small_instances() {
        let spec = SampleSpec::new(3, 60);
        for d in [
            PoJaDescriptor::scalar(RingDescriptor::Q),
            PoJaDescriptor::sym(2, RingDescriptor::Q),
            PoJaDescriptor::spin(2, RingDescriptor::Q),
            PoJaDescriptor::dual_ext(PoJaDescriptor::sym(2, RingDescriptor::Q)),
        ] {
            for r in [
                check_jordan_axioms(&d, &spec).unwrap(),
                check_poja_axioms(&d, &spec).unwrap(),
                check_formally_real(&d, &spec).unwrap(),
            ] {
                assert!(r.passed(), "{r}");
            }
        }
    }

    #[test]
    fn formally_real_at_zero() {
        let d = PoJaDescriptor::sym(2, RingDescriptor::Q);
        assert!(d.zero().square().add(&d.unit().square()).in_cone().unwrap());
    }

    #[test]
    fn unordered_ring_rejected() {
        let d = PoJaDescriptor::sym(2, RingDescriptor::GaussQ);
        assert!(matches!(
            check_poja_axioms(&d, &SampleSpec::new(0, 5)),
            Err(Error::NoOrder(_))
        ));
    }
}
