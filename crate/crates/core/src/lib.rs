//! Exact computations with partially ordered Jordan algebras, their
//! conformal completions and the invariant cyclic orders on them.

pub mod affine;
pub mod chart;
pub mod cyclic;
pub mod error;
pub mod full;
pub mod instances;
pub mod jordan;
pub mod linalg;
pub mod poly;
pub mod rational;
pub mod render;
pub mod report;
pub mod ring;
pub mod sample;
pub mod topology;
pub mod tube;
pub mod witness;

pub use affine::{classify_pair, member_by_cones, torus_boxes, AffineBox, ImageClass};
pub use chart::{
    apply_generator, apply_word, neg_inv, transversal, ChartPoint, Generator, GroupWord,
};
pub use cyclic::{in_r, induced_less, is_cyclic_quadruple, CyclicModel, Interval};
pub use error::{Error, Result};
pub use full::{in_r_full, FullModel, GeometryDescriptor, HomPoint, TorusGridModel};
pub use jordan::{
    cone_contains, jbullet, jdop, jinverse, jquad, jsym, triple, JElem, LinOp, PoJaDescriptor,
};
pub use rational::Rational;
pub use report::{AxiomReport, CheckResult, Mode, Witness};
pub use ring::{OrderFlavor, RingDescriptor, RingElem};
pub use sample::{SampleSpec, Sampler};
