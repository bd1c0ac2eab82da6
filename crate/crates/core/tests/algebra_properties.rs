//! Ring and Jordan-algebra invariants as properties.

use cyclord::jordan::{cone_contains, jdop, jinverse, jquad, jsym};
use cyclord::rational::{is_canonical, rat};
use cyclord::ring::{canonical, ring_invert, ring_is_positive};
use cyclord::{PoJaDescriptor, RingDescriptor, RingElem, SampleSpec, Sampler};
use proptest::prelude::*;

fn sampler(seed: u64) -> Sampler {
    SampleSpec::new(seed, 1).sampler(0)
}

fn ordered_rings() -> Vec<RingDescriptor> {
    vec![
        RingDescriptor::Q,
        RingDescriptor::DualQ,
        RingDescriptor::product(vec![RingDescriptor::Q, RingDescriptor::DualQ]).unwrap(),
    ]
}

fn algebras() -> Vec<PoJaDescriptor> {
    let q = RingDescriptor::Q;
    vec![
        PoJaDescriptor::scalar(q.clone()),
        PoJaDescriptor::sym(2, q.clone()),
        PoJaDescriptor::sym(3, q.clone()),
        PoJaDescriptor::spin(3, q.clone()),
        PoJaDescriptor::product(vec![
            PoJaDescriptor::scalar(q.clone()),
            PoJaDescriptor::sym(2, q.clone()),
        ]),
        PoJaDescriptor::dual_ext(PoJaDescriptor::sym(2, q)),
    ]
}

fn small_rational() -> impl Strategy<Value = cyclord::Rational> {
    (-40i64..40, 1i64..12).prop_map(|(n, d)| rat(n, d))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rationals_stay_canonical(a in small_rational(), b in small_rational()) {
        for r in [&a + &b, &a - &b, &a * &b] {
            prop_assert!(is_canonical(&r));
        }
        if b != rat(0, 1) {
            prop_assert!(is_canonical(&(&a / &b)));
        }
        let e = RingDescriptor::DualQ.from_coords(vec![a, b]).unwrap();
        prop_assert!(canonical(&e.square()));
    }

    #[test]
    fn positive_cones_are_salient(seed: u64, k in 0usize..3) {
        let r = &ordered_rings()[k];
        let mut s = sampler(seed);
        let (a, b) = (r.sample_positive(&mut s).unwrap(), r.sample_positive(&mut s).unwrap());
        prop_assert!(ring_is_positive(&a.try_add(&b).unwrap()).unwrap());
        prop_assert!(ring_is_positive(&a.try_mul(&b).unwrap()).unwrap());
        let x = r.sample(&mut s);
        prop_assert!(!(ring_is_positive(&x).unwrap() && ring_is_positive(&-&x).unwrap()));
    }

    #[test]
    fn square_order_and_inverse_por(seed: u64, k in 0usize..2) {
        let r = &ordered_rings()[k];
        let mut s = sampler(seed);
        let a = r.sample_invertible(&mut s);
        prop_assert!(ring_is_positive(&a.square()).unwrap());
        let p = r.sample_positive(&mut s).unwrap();
        prop_assert!(ring_invert(&p).is_ok());
    }

    #[test]
    fn ring_inversion_is_an_involution(seed: u64, k in 0usize..3) {
        let r = &ordered_rings()[k];
        let a: RingElem = r.sample_invertible(&mut sampler(seed));
        let b = ring_invert(&a).unwrap();
        prop_assert_eq!(ring_invert(&b).unwrap(), a);
    }

    #[test]
    fn jordan_identities(seed: u64, k in 0usize..6) {
        let d = algebras()[k].concrete().unwrap();
        let mut s = sampler(seed);
        let (a, b) = (d.sample(&mut s), d.sample(&mut s));
        prop_assert_eq!(a.jbullet(&b), b.jbullet(&a));
        let a2 = a.square();
        prop_assert_eq!(a.jbullet(&a2.jbullet(&b)), a2.jbullet(&a.jbullet(&b)));
        let qa = jquad(&a);
        prop_assert_eq!(jquad(&a.quad_apply(&b)), qa.compose(&jquad(&b)).compose(&qa));
        // the commutation formula in its standard form, D_{b,a} against D_{a,b}
        prop_assert_eq!(qa.compose(&jdop(&b, &a).unwrap()), jdop(&a, &b).unwrap().compose(&qa));
    }

    #[test]
    fn inversion_and_cone(seed: u64, k in 0usize..6) {
        let d = algebras()[k].concrete().unwrap();
        let mut s = sampler(seed);
        let a = d.sample_invertible(&mut s);
        prop_assert_eq!(jinverse(&jinverse(&a).unwrap()).unwrap(), a.clone());
        let (p, q) = (d.sample_positive(&mut s).unwrap(), d.sample_positive(&mut s).unwrap());
        prop_assert!(cone_contains(&p.add(&q)).unwrap());
        prop_assert!(!cone_contains(&p.neg()).unwrap());
        prop_assert!(cone_contains(&a.quad_apply(&p)).unwrap());
        prop_assert!(cone_contains(&jinverse(&a).unwrap().quad_apply(&p)).unwrap());
    }

    #[test]
    fn symmetries(seed: u64, k in 0usize..6) {
        let d = algebras()[k].concrete().unwrap();
        let mut s = sampler(seed);
        let (x, y, z) = (d.sample_invertible(&mut s), d.sample_invertible(&mut s), d.sample_invertible(&mut s));
        let sxz = jsym(&x, &z).unwrap();
        prop_assert_eq!(jsym(&x, &sxz).unwrap(), z.clone());
        let sxy = jsym(&x, &y).unwrap();
        let inner = jsym(&y, &sxz);
        prop_assume!(inner.is_ok());
        let lhs = jsym(&x, &inner.unwrap()).unwrap();
        prop_assert_eq!(lhs, jsym(&sxy, &z).unwrap());
    }
}

#[test]
fn jordan_product_of_positives_leaves_the_cone() {
    let d = PoJaDescriptor::sym(2, RingDescriptor::Q);
    let m = |r: [[i64; 2]; 2]| {
        d.sym_from_rows(&r.map(|row| row.map(|x| rat(x, 1)).to_vec()))
            .unwrap()
    };
    let (a, b) = (m([[2, 1], [1, 1]]), m([[1, 0], [0, 9]]));
    assert!(cone_contains(&a).unwrap() && cone_contains(&b).unwrap());
    let ab = a.jbullet(&b);
    // (AB + BA)/2 and its double
    assert_eq!(ab.scale(&rat(2, 1)), m([[4, 10], [10, 18]]));
    assert!(!cone_contains(&ab).unwrap());
}
