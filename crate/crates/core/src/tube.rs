//! The complexification `V[i]`, the tube `T_Ω = V + iΩ`, and inversion at
//! `i` on sampled tube points.

use serde_json::{json, Value};

use crate::cyclic::guard;
use crate::error::{Error, Result};
use crate::jordan::{jinverse, JElem, PoJaDescriptor};
use crate::report::{AxiomReport, Case};
use crate::ring::RingDescriptor;
use crate::sample::{run_cases, SampleSpec, Sampler};

/// `re + i·im` with both parts in the same real algebra.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ComplexJElem {
    pub re: JElem,
    pub im: JElem,
}

impl ComplexJElem {
    pub fn new(re: JElem, im: JElem) -> Result<ComplexJElem> {
        re.same_algebra(&im)?;
        Ok(ComplexJElem { re, im })
    }

    pub fn descriptor(&self) -> &PoJaDescriptor {
        self.re.descriptor()
    }

    /// The same element inside the algebra over the complexified ring.
    pub fn lift(&self) -> Result<JElem> {
        JElem::complex_lift(&self.re, &self.im)
    }

    pub fn from_lifted(z: &JElem) -> Result<ComplexJElem> {
        let (re, im) = z.complex_split()?;
        Ok(ComplexJElem { re, im })
    }

    pub fn neg(&self) -> ComplexJElem {
        ComplexJElem {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({ "re": self.re.coords_json(), "im": self.im.coords_json() })
    }
}

pub fn tube_contains(z: &ComplexJElem) -> Result<bool> {
    z.im.in_cone()
}

/// The Jordan inverse in `V[i]`, through the linear solve `Q_z w = z` over
/// the complexified ring.
pub fn complex_inverse(z: &ComplexJElem) -> Result<ComplexJElem> {
    ComplexJElem::from_lifted(&jinverse(&z.lift()?)?)
}

/// Whether failures in the tube experiment are assertions for `desc`.
pub fn tube_is_asserted(desc: &PoJaDescriptor) -> bool {
    matches!(
        desc,
        PoJaDescriptor::Sym {
            ring: RingDescriptor::Q,
            ..
        } | PoJaDescriptor::Scalar {
            ring: RingDescriptor::Q
        }
    )
}

pub const TUBE_CHECKS: [&str; 3] = [
    "invertible",
    "minus-inverse-in-tube",
    "inversion-involution",
];

/// A sampled tube point `x + i·p` with `p ∈ Ω`.
pub fn sample_tube_point(desc: &PoJaDescriptor, s: &mut Sampler) -> Result<ComplexJElem> {
    let im = desc.sample_positive(s)?;
    ComplexJElem::new(desc.sample(s), im)
}

fn tube_case(desc: &PoJaDescriptor, s: &mut Sampler) -> Vec<Case> {
    let z = match sample_tube_point(desc, s) {
        Ok(z) => z,
        Err(e) => return vec![guard(Err(e)); TUBE_CHECKS.len()],
    };
    let data = || json!({ "z": z.to_json() });
    let inv = match complex_inverse(&z) {
        Ok(w) => w,
        Err(Error::NotInvertible) => {
            return vec![
                Case::Violated("tube point is not invertible".into(), data()),
                Case::Vacuous,
                Case::Vacuous,
            ]
        }
        Err(e) => return vec![guard(Err(e)); TUBE_CHECKS.len()],
    };
    let w = inv.neg();
    let mut row = vec![Case::Holds];
    row.push(guard((|| {
        let ok = tube_contains(&w)?;
        Ok(Case::from_bool(ok, || {
            (
                "−z⁻¹ leaves the tube".into(),
                json!({ "z": z.to_json(), "w": w.to_json() }),
            )
        }))
    })()));
    row.push(guard((|| {
        let back = match complex_inverse(&w) {
            Ok(b) => b.neg(),
            Err(Error::NotInvertible) => return Ok(Case::Undefined),
            Err(e) => return Err(e),
        };
        Ok(Case::from_bool(back == z, || {
            (
                "z ↦ −z⁻¹ applied twice does not return z".into(),
                json!({ "z": z.to_json(), "w": w.to_json() }),
            )
        }))
    })()));
    row
}

/// Invertibility of sampled tube points and stability of the tube under
/// `z ↦ −z⁻¹`. Asserted for `Sym(n, ℚ)`; exploratory elsewhere.
pub fn tube_experiment(desc: &PoJaDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    let desc = desc.concrete()?;
    if !desc.is_ordered() {
        return Err(Error::NoOrder(desc.ring().to_string()));
    }
    desc.complexification()?;
    let rows = run_cases(spec, |s| tube_case(&desc, s));
    let r = AxiomReport::from_rows(
        "tube-experiment",
        &desc.to_string(),
        spec,
        &TUBE_CHECKS,
        rows,
    );
    Ok(if tube_is_asserted(&desc) {
        r
    } else {
        r.exploratory()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{self, Mat};
    use crate::rational::int;
    use crate::report::Mode;

    fn s2() -> PoJaDescriptor {
        PoJaDescriptor::sym(2, RingDescriptor::Q)
    }

    #[test]
    fn tube_membership_examples() {
        let d = s2();
        let e = d.unit();
        assert!(tube_contains(&ComplexJElem::new(d.zero(), e.clone()).unwrap()).unwrap());
        assert!(!tube_contains(&ComplexJElem::new(e.clone(), d.zero()).unwrap()).unwrap());
        let w = d
            .sym_from_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]])
            .unwrap();
        assert!(tube_contains(&ComplexJElem::new(w, e).unwrap()).unwrap());
    }

    #[test]
    fn inverse_examples() {
        let d = s2();
        let ie = ComplexJElem::new(d.zero(), d.unit()).unwrap();
        assert_eq!(
            complex_inverse(&ie).unwrap(),
            ComplexJElem::new(d.zero(), d.unit().neg()).unwrap()
        );

        // checked against complex matrix inversion
        let w = d
            .sym_from_rows(&[vec![int(0), int(1)], vec![int(1), int(0)]])
            .unwrap();
        let z = ComplexJElem::new(w, d.unit()).unwrap();
        let zi = complex_inverse(&z).unwrap().lift().unwrap();
        let zl = z.lift().unwrap();
        let (m, mi) = (zl.sym_matrix().unwrap(), zi.sym_matrix().unwrap());
        let one = RingDescriptor::GaussQ.one();
        assert_eq!(m.mul(&mi), Mat::identity(2, &one));
        assert_eq!(linalg::solve(&m, &Mat::identity(2, &one)).unwrap(), mi);

        let dq = PoJaDescriptor::dual_ext(PoJaDescriptor::scalar(RingDescriptor::Q))
            .concrete()
            .unwrap();
        let eps = dq
            .from_coords(vec![RingDescriptor::DualQ
                .from_coords(vec![int(0), int(1)])
                .unwrap()])
            .unwrap();
        let z = ComplexJElem::new(eps, dq.zero()).unwrap();
        assert_eq!(complex_inverse(&z), Err(Error::NotInvertible));
    }

    #[test]
    fn sym_experiments_pass() {
        for n in [2, 3] {
            let r = tube_experiment(
                &PoJaDescriptor::sym(n, RingDescriptor::Q),
                &SampleSpec::new(0, 60),
            )
            .unwrap();
            assert_eq!(r.mode, Mode::Asserted);
            assert!(r.passed(), "{r}");
            assert_eq!(r.check("inversion-involution").unwrap().tested, 60);
        }
    }

    #[test]
    fn spin_experiment_is_exploratory() {
        let r = tube_experiment(
            &PoJaDescriptor::spin(3, RingDescriptor::Q),
            &SampleSpec::new(0, 40),
        )
        .unwrap();
        assert_eq!(r.mode, Mode::Exploratory);
        assert!(r.ok());
    }
}
