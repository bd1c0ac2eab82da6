//! Fixed inputs for the kernel benchmarks.

use cyclord::{
    ChartPoint, CyclicModel, FullModel, HomPoint, JElem, PoJaDescriptor, RingDescriptor, SampleSpec,
};

const SEED: u64 = 17;

pub fn sym3() -> PoJaDescriptor {
    PoJaDescriptor::sym(3, RingDescriptor::Q)
}

/// `n` chain triples of `Sym(3, ℚ)` chart points, mostly in the relation.
pub fn sym3_triples(n: usize) -> Vec<[ChartPoint; 3]> {
    let m = cyclord::cyclic::ChartModel::new(&sym3()).expect("Sym(3,Q) is ordered");
    let spec = SampleSpec::new(SEED, n);
    (0..n)
        .map(|i| {
            let p = m.sample_chain(&mut spec.sampler(i), 3);
            [p[0].clone(), p[1].clone(), p[2].clone()]
        })
        .collect()
}

/// `n` invertible elements of `desc`.
pub fn invertibles(desc: &PoJaDescriptor, n: usize) -> Vec<JElem> {
    let spec = SampleSpec::new(SEED, n);
    (0..n)
        .map(|i| desc.sample_invertible(&mut spec.sampler(i)))
        .collect()
}

/// `n` transversal pairs on the Lagrangian Grassmannian of `Sym(2, ℚ)`.
pub fn lagrangian_pairs(n: usize) -> (FullModel, Vec<(HomPoint, HomPoint)>) {
    let m = FullModel::new(&PoJaDescriptor::sym(2, RingDescriptor::Q))
        .expect("Sym(2,Q) has a geometry");
    let spec = SampleSpec::new(SEED, n);
    let pairs = (0..n)
        .map(|i| {
            let p = m.sample_chain(&mut spec.sampler(i), 2);
            (p[0].clone(), p[1].clone())
        })
        .collect();
    (m, pairs)
}
