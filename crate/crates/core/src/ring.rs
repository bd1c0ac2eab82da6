//! Exact base rings with partial orders.
//!
//! Every ring here is a finite-dimensional ℚ-algebra (or ℤ), so elements are
//! stored as a flat list of rational coordinates whose layout is fixed by the
//! [`RingDescriptor`]:
//!
//! | ring          | layout                              |
//! |---------------|-------------------------------------|
//! | `Q`, `ZInt`, `TrivialNOrder` | `(x)`                |
//! | `DualQ`       | `(re, eps)`                          |
//! | `GaussQ`      | `(re, im)`                           |
//! | `DualGaussQ`  | `(re.re, re.eps, im.re, im.eps)`     |
//! | `Product`     | concatenation of the factors         |

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::rational::{format_rational, parse_rational, rat, Rational};
use crate::report::{AxiomReport, Case};
use crate::sample::{run_cases, SampleSpec, Sampler};

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RingDescriptor {
    Q,
    /// ℚ[ε] with ε² = 0, ordered by the ε-free part.
    DualQ,
    /// ℚ[i]; admits no square order.
    GaussQ,
    /// ℚ[ε][i].
    DualGaussQ,
    /// ℤ with the usual order; not an inverse por.
    ZInt,
    /// ℚ ordered by `x > 0` iff `x ∈ {1, 2, 3, …}`; violates the square order.
    TrivialNOrder,
    Product(Arc<Vec<RingDescriptor>>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OrderFlavor {
    Unordered,
    Por,
    SquareOrderedInversePor,
}

impl RingDescriptor {
    pub fn product(factors: Vec<RingDescriptor>) -> Result<RingDescriptor> {
        if factors.is_empty() {
            return Err(Error::Precondition(
                "product ring needs at least one factor".into(),
            ));
        }
        Ok(RingDescriptor::Product(Arc::new(factors)))
    }

    pub fn arity(&self) -> usize {
        match self {
            RingDescriptor::Q | RingDescriptor::ZInt | RingDescriptor::TrivialNOrder => 1,
            RingDescriptor::DualQ | RingDescriptor::GaussQ => 2,
            RingDescriptor::DualGaussQ => 4,
            RingDescriptor::Product(fs) => fs.iter().map(|f| f.arity()).sum(),
        }
    }

    pub fn order_flavor(&self) -> OrderFlavor {
        match self {
            RingDescriptor::Q | RingDescriptor::DualQ => OrderFlavor::SquareOrderedInversePor,
            RingDescriptor::ZInt | RingDescriptor::TrivialNOrder => OrderFlavor::Por,
            RingDescriptor::GaussQ | RingDescriptor::DualGaussQ => OrderFlavor::Unordered,
            RingDescriptor::Product(fs) => fs
                .iter()
                .map(|f| f.order_flavor())
                .min()
                .unwrap_or(OrderFlavor::Unordered),
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.order_flavor() != OrderFlavor::Unordered
    }

    /// Whether 1/2 lies in the ring (needed for the Jordan product).
    pub fn contains_half(&self) -> bool {
        match self {
            RingDescriptor::ZInt => false,
            RingDescriptor::Product(fs) => fs.iter().all(|f| f.contains_half()),
            _ => true,
        }
    }

    /// Scalar extension by ε.
    pub fn dual_extension(&self) -> Result<RingDescriptor> {
        Ok(match self {
            RingDescriptor::Q => RingDescriptor::DualQ,
            RingDescriptor::GaussQ => RingDescriptor::DualGaussQ,
            RingDescriptor::Product(fs) => RingDescriptor::Product(Arc::new(
                fs.iter()
                    .map(|f| f.dual_extension())
                    .collect::<Result<_>>()?,
            )),
            other => {
                return Err(Error::Unsupported(format!("ε-extension of {other}")));
            }
        })
    }

    /// Scalar extension by i.
    pub fn complexification(&self) -> Result<RingDescriptor> {
        Ok(match self {
            RingDescriptor::Q => RingDescriptor::GaussQ,
            RingDescriptor::DualQ => RingDescriptor::DualGaussQ,
            RingDescriptor::Product(fs) => RingDescriptor::Product(Arc::new(
                fs.iter()
                    .map(|f| f.complexification())
                    .collect::<Result<_>>()?,
            )),
            other => return Err(Error::Unsupported(format!("complexification of {other}"))),
        })
    }

    pub fn zero(&self) -> RingElem {
        RingElem {
            ring: self.clone(),
            c: vec![Rational::zero(); self.arity()],
        }
    }

    pub fn one(&self) -> RingElem {
        self.rational_unchecked(&Rational::one())
    }

    /// Image of a rational under the structure map ℚ → ring.
    pub fn from_rational(&self, r: &Rational) -> Result<RingElem> {
        if self.requires_integers() && !r.is_integer() {
            return Err(Error::NotApplicable(format!("{r} is not in {self}")));
        }
        Ok(self.rational_unchecked(r))
    }

    fn requires_integers(&self) -> bool {
        match self {
            RingDescriptor::ZInt => true,
            RingDescriptor::Product(fs) => fs.iter().any(|f| f.requires_integers()),
            _ => false,
        }
    }

    fn rational_unchecked(&self, r: &Rational) -> RingElem {
        let mut c = Vec::with_capacity(self.arity());
        self.push_scalar(r, &mut c);
        RingElem {
            ring: self.clone(),
            c,
        }
    }

    fn push_scalar(&self, r: &Rational, out: &mut Vec<Rational>) {
        match self {
            RingDescriptor::Product(fs) => fs.iter().for_each(|f| f.push_scalar(r, out)),
            other => {
                out.push(r.clone());
                out.extend(std::iter::repeat_n(Rational::zero(), other.arity() - 1));
            }
        }
    }

    pub fn from_coords(&self, c: Vec<Rational>) -> Result<RingElem> {
        if c.len() != self.arity() {
            return Err(Error::DescriptorMismatch(format!(
                "{self} expects {} coordinates, got {}",
                self.arity(),
                c.len()
            )));
        }
        let e = RingElem {
            ring: self.clone(),
            c,
        };
        if !e.respects_integrality() {
            return Err(Error::NotApplicable(format!("{e} is not in {self}")));
        }
        Ok(e)
    }

    /// The factor rings of a product; a one-element list otherwise.
    pub fn factors(&self) -> Vec<RingDescriptor> {
        match self {
            RingDescriptor::Product(fs) => fs.iter().cloned().collect(),
            other => vec![other.clone()],
        }
    }

    pub fn is_product(&self) -> bool {
        matches!(self, RingDescriptor::Product(_))
    }

    // -- sampling ---------------------------------------------------------

    pub fn sample(&self, s: &mut Sampler) -> RingElem {
        let mut c = Vec::with_capacity(self.arity());
        self.sample_into(s, &mut c, Kind::Any);
        RingElem {
            ring: self.clone(),
            c,
        }
    }

    pub fn sample_positive(&self, s: &mut Sampler) -> Result<RingElem> {
        if !self.is_ordered() {
            return Err(Error::NoOrder(self.to_string()));
        }
        let mut c = Vec::with_capacity(self.arity());
        self.sample_into(s, &mut c, Kind::Positive);
        Ok(RingElem {
            ring: self.clone(),
            c,
        })
    }

    pub fn sample_invertible(&self, s: &mut Sampler) -> RingElem {
        let mut c = Vec::with_capacity(self.arity());
        self.sample_into(s, &mut c, Kind::Invertible);
        RingElem {
            ring: self.clone(),
            c,
        }
    }

    fn sample_into(&self, s: &mut Sampler, out: &mut Vec<Rational>, kind: Kind) {
        let b = s.bound();
        match self {
            RingDescriptor::Product(fs) => fs.iter().for_each(|f| f.sample_into(s, out, kind)),
            RingDescriptor::Q => out.push(match kind {
                Kind::Any => s.rational(),
                Kind::Positive => s.positive_rational(),
                Kind::Invertible => s.nonzero_rational(),
            }),
            RingDescriptor::ZInt => out.push(Rational::from_integer(BigInt::from(match kind {
                Kind::Any => s.int_in(-b, b),
                Kind::Positive => s.int_in(1, b),
                Kind::Invertible => {
                    if s.chance(1, 2) {
                        1
                    } else {
                        -1
                    }
                }
            }))),
            RingDescriptor::TrivialNOrder => out.push(match kind {
                Kind::Any => s.rational(),
                Kind::Positive => Rational::from_integer(BigInt::from(s.int_in(1, b))),
                Kind::Invertible => s.nonzero_rational(),
            }),
            RingDescriptor::DualQ => {
                out.push(match kind {
                    Kind::Any => s.rational(),
                    Kind::Positive => s.positive_rational(),
                    Kind::Invertible => s.nonzero_rational(),
                });
                out.push(s.rational());
            }
            RingDescriptor::GaussQ => {
                let (x, y) = loop {
                    let (x, y) = (s.rational(), s.rational());
                    if kind != Kind::Invertible || !(x.is_zero() && y.is_zero()) {
                        break (x, y);
                    }
                };
                out.push(x);
                out.push(y);
            }
            RingDescriptor::DualGaussQ => {
                let (x, y) = loop {
                    let (x, y) = (s.rational(), s.rational());
                    if kind != Kind::Invertible || !(x.is_zero() && y.is_zero()) {
                        break (x, y);
                    }
                };
                out.push(x);
                out.push(s.rational());
                out.push(y);
                out.push(s.rational());
            }
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Kind {
    Any,
    Positive,
    Invertible,
}

impl fmt::Display for RingDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingDescriptor::Q => write!(f, "Q"),
            RingDescriptor::DualQ => write!(f, "Q[eps]"),
            RingDescriptor::GaussQ => write!(f, "Q[i]"),
            RingDescriptor::DualGaussQ => write!(f, "Q[eps][i]"),
            RingDescriptor::ZInt => write!(f, "Z"),
            RingDescriptor::TrivialNOrder => write!(f, "Q(N-order)"),
            RingDescriptor::Product(fs) => {
                write!(f, "(")?;
                for (i, r) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, " x ")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// An element of a ring described by a [`RingDescriptor`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RingElem {
    ring: RingDescriptor,
    c: Vec<Rational>,
}

fn dual_mul(a: &[Rational], b: &[Rational]) -> [Rational; 2] {
    [&a[0] * &b[0], &a[0] * &b[1] + &a[1] * &b[0]]
}

fn dual_inv(a: &[Rational]) -> Option<[Rational; 2]> {
    if a[0].is_zero() {
        return None;
    }
    let r = a[0].recip();
    let e = -(&a[1] * &r * &r);
    Some([r, e])
}

fn mul_coords(ring: &RingDescriptor, a: &[Rational], b: &[Rational], out: &mut Vec<Rational>) {
    match ring {
        RingDescriptor::Q | RingDescriptor::ZInt | RingDescriptor::TrivialNOrder => {
            out.push(&a[0] * &b[0])
        }
        RingDescriptor::DualQ => out.extend(dual_mul(a, b)),
        RingDescriptor::GaussQ => {
            out.push(&a[0] * &b[0] - &a[1] * &b[1]);
            out.push(&a[0] * &b[1] + &a[1] * &b[0]);
        }
        RingDescriptor::DualGaussQ => {
            let (x, y) = (&a[0..2], &a[2..4]);
            let (u, v) = (&b[0..2], &b[2..4]);
            let [xu0, xu1] = dual_mul(x, u);
            let [yv0, yv1] = dual_mul(y, v);
            let [xv0, xv1] = dual_mul(x, v);
            let [yu0, yu1] = dual_mul(y, u);
            out.extend([xu0 - yv0, xu1 - yv1, xv0 + yu0, xv1 + yu1]);
        }
        RingDescriptor::Product(fs) => {
            let mut off = 0;
            for f in fs.iter() {
                let n = f.arity();
                mul_coords(f, &a[off..off + n], &b[off..off + n], out);
                off += n;
            }
        }
    }
}

fn inv_coords(ring: &RingDescriptor, a: &[Rational], out: &mut Vec<Rational>) -> bool {
    match ring {
        RingDescriptor::Q | RingDescriptor::TrivialNOrder => {
            if a[0].is_zero() {
                return false;
            }
            out.push(a[0].recip());
        }
        RingDescriptor::ZInt => {
            if !a[0].abs().is_one() {
                return false;
            }
            out.push(a[0].clone());
        }
        RingDescriptor::DualQ => match dual_inv(a) {
            Some(r) => out.extend(r),
            None => return false,
        },
        RingDescriptor::GaussQ => {
            let n = &a[0] * &a[0] + &a[1] * &a[1];
            if n.is_zero() {
                return false;
            }
            out.push(&a[0] / &n);
            out.push(-(&a[1] / &n));
        }
        RingDescriptor::DualGaussQ => {
            // (x + iy)^{-1} = (x - iy) / (x² + y²), the norm taken in ℚ[ε]
            let (x, y) = (&a[0..2], &a[2..4]);
            let [x0, x1] = dual_mul(x, x);
            let [y0, y1] = dual_mul(y, y);
            let Some(ninv) = dual_inv(&[x0 + y0, x1 + y1]) else {
                return false;
            };
            let re = dual_mul(x, &ninv);
            let im = dual_mul(y, &ninv);
            out.extend([re[0].clone(), re[1].clone(), -im[0].clone(), -im[1].clone()]);
        }
        RingDescriptor::Product(fs) => {
            let mut off = 0;
            for f in fs.iter() {
                let n = f.arity();
                if !inv_coords(f, &a[off..off + n], out) {
                    return false;
                }
                off += n;
            }
        }
    }
    true
}

fn positive_coords(ring: &RingDescriptor, a: &[Rational]) -> Result<bool> {
    Ok(match ring {
        RingDescriptor::Q | RingDescriptor::ZInt | RingDescriptor::DualQ => a[0].is_positive(),
        RingDescriptor::TrivialNOrder => a[0].is_integer() && a[0].is_positive(),
        RingDescriptor::GaussQ | RingDescriptor::DualGaussQ => {
            return Err(Error::NoOrder(ring.to_string()))
        }
        RingDescriptor::Product(fs) => {
            let mut off = 0;
            let mut all = true;
            for f in fs.iter() {
                let n = f.arity();
                all &= positive_coords(f, &a[off..off + n])?;
                off += n;
            }
            all
        }
    })
}

impl RingElem {
    pub fn ring(&self) -> &RingDescriptor {
        &self.ring
    }

    pub fn coords(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(Zero::is_zero)
    }

    pub fn is_one(&self) -> bool {
        *self == self.ring.one()
    }

    fn respects_integrality(&self) -> bool {
        fn go(r: &RingDescriptor, c: &[Rational]) -> bool {
            match r {
                RingDescriptor::ZInt => c[0].is_integer(),
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    fs.iter().all(|f| {
                        let n = f.arity();
                        let ok = go(f, &c[off..off + n]);
                        off += n;
                        ok
                    })
                }
                _ => true,
            }
        }
        go(&self.ring, &self.c)
    }

    fn same_ring(&self, other: &RingElem) -> Result<()> {
        if self.ring == other.ring {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(format!(
                "{} vs {}",
                self.ring, other.ring
            )))
        }
    }

    pub fn try_add(&self, other: &RingElem) -> Result<RingElem> {
        self.same_ring(other)?;
        Ok(self + other)
    }

    pub fn try_sub(&self, other: &RingElem) -> Result<RingElem> {
        self.same_ring(other)?;
        Ok(self - other)
    }

    pub fn try_mul(&self, other: &RingElem) -> Result<RingElem> {
        self.same_ring(other)?;
        Ok(self * other)
    }

    pub fn scale(&self, r: &Rational) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            c: self.c.iter().map(|x| x * r).collect(),
        }
    }

    pub fn square(&self) -> RingElem {
        self * self
    }

    pub fn inverse(&self) -> Result<RingElem> {
        let mut out = Vec::with_capacity(self.c.len());
        if inv_coords(&self.ring, &self.c, &mut out) {
            Ok(RingElem {
                ring: self.ring.clone(),
                c: out,
            })
        } else {
            Err(Error::NotInvertible)
        }
    }

    pub fn is_unit(&self) -> bool {
        fn go(r: &RingDescriptor, c: &[Rational]) -> bool {
            match r {
                RingDescriptor::Q | RingDescriptor::TrivialNOrder | RingDescriptor::DualQ => {
                    !c[0].is_zero()
                }
                RingDescriptor::ZInt => c[0].abs().is_one(),
                RingDescriptor::GaussQ | RingDescriptor::DualGaussQ => {
                    let (x, y) = if c.len() == 2 {
                        (&c[0], &c[1])
                    } else {
                        (&c[0], &c[2])
                    };
                    !(x.is_zero() && y.is_zero())
                }
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    fs.iter().all(|f| {
                        let n = f.arity();
                        let ok = go(f, &c[off..off + n]);
                        off += n;
                        ok
                    })
                }
            }
        }
        go(&self.ring, &self.c)
    }

    pub fn is_positive(&self) -> Result<bool> {
        positive_coords(&self.ring, &self.c)
    }

    /// `self < other` in the ring order.
    pub fn less(&self, other: &RingElem) -> Result<bool> {
        other.try_sub(self)?.is_positive()
    }

    /// Splits a product-ring element into its factor components.
    pub fn factors(&self) -> Vec<RingElem> {
        match &self.ring {
            RingDescriptor::Product(fs) => {
                let mut off = 0;
                fs.iter()
                    .map(|f| {
                        let n = f.arity();
                        let e = RingElem {
                            ring: f.clone(),
                            c: self.c[off..off + n].to_vec(),
                        };
                        off += n;
                        e
                    })
                    .collect()
            }
            _ => vec![self.clone()],
        }
    }

    pub fn from_factors(ring: &RingDescriptor, parts: Vec<RingElem>) -> RingElem {
        match ring {
            RingDescriptor::Product(_) => RingElem {
                ring: ring.clone(),
                c: parts.into_iter().flat_map(|p| p.c).collect(),
            },
            _ => parts.into_iter().next().expect("one factor"),
        }
    }

    /// Drops every ε-coordinate: the residue map ℚ[ε] → ℚ (and its product
    /// and Gaussian analogues). Other rings are returned unchanged.
    pub fn strip_eps(&self) -> RingElem {
        fn go(r: &RingDescriptor, c: &[Rational]) -> (RingDescriptor, Vec<Rational>) {
            match r {
                RingDescriptor::DualQ => (RingDescriptor::Q, vec![c[0].clone()]),
                RingDescriptor::DualGaussQ => {
                    (RingDescriptor::GaussQ, vec![c[0].clone(), c[2].clone()])
                }
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    let mut rings = Vec::new();
                    let mut out = Vec::new();
                    for f in fs.iter() {
                        let n = f.arity();
                        let (rr, cc) = go(f, &c[off..off + n]);
                        rings.push(rr);
                        out.extend(cc);
                        off += n;
                    }
                    (RingDescriptor::Product(Arc::new(rings)), out)
                }
                other => (other.clone(), c.to_vec()),
            }
        }
        let (ring, c) = go(&self.ring, &self.c);
        RingElem { ring, c }
    }

    /// The ε-coefficient as an element of the base ring (zero for rings
    /// without ε).
    pub fn eps_part(&self) -> RingElem {
        fn go(r: &RingDescriptor, c: &[Rational], out: &mut Vec<Rational>) {
            match r {
                RingDescriptor::DualQ => out.push(c[1].clone()),
                RingDescriptor::DualGaussQ => out.extend([c[1].clone(), c[3].clone()]),
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    for f in fs.iter() {
                        let n = f.arity();
                        go(f, &c[off..off + n], out);
                        off += n;
                    }
                }
                other => out.extend(std::iter::repeat_n(Rational::zero(), other.arity())),
            }
        }
        let mut out = Vec::new();
        go(&self.ring, &self.c, &mut out);
        let base = self.strip_eps();
        RingElem {
            ring: base.ring,
            c: out,
        }
    }

    /// `base + ε·eps` in the ε-extension of `base`'s ring.
    pub fn with_eps(base: &RingElem, eps: &RingElem) -> Result<RingElem> {
        base.same_ring(eps)?;
        fn go(
            r: &RingDescriptor,
            b: &[Rational],
            e: &[Rational],
            out: &mut Vec<Rational>,
        ) -> Result<()> {
            match r {
                RingDescriptor::Q => out.extend([b[0].clone(), e[0].clone()]),
                RingDescriptor::GaussQ => {
                    out.extend([b[0].clone(), e[0].clone(), b[1].clone(), e[1].clone()])
                }
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    for f in fs.iter() {
                        let n = f.arity();
                        go(f, &b[off..off + n], &e[off..off + n], out)?;
                        off += n;
                    }
                }
                other => return Err(Error::Unsupported(format!("ε-extension of {other}"))),
            }
            Ok(())
        }
        let ring = base.ring.dual_extension()?;
        let mut c = Vec::with_capacity(ring.arity());
        go(&base.ring, &base.c, &eps.c, &mut c)?;
        Ok(RingElem { ring, c })
    }

    /// `re + i·im` in the complexification of the common ring.
    pub fn with_im(re: &RingElem, im: &RingElem) -> Result<RingElem> {
        re.same_ring(im)?;
        fn go(
            r: &RingDescriptor,
            a: &[Rational],
            b: &[Rational],
            out: &mut Vec<Rational>,
        ) -> Result<()> {
            match r {
                RingDescriptor::Q => out.extend([a[0].clone(), b[0].clone()]),
                RingDescriptor::DualQ => {
                    out.extend([a[0].clone(), a[1].clone(), b[0].clone(), b[1].clone()])
                }
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    for f in fs.iter() {
                        let n = f.arity();
                        go(f, &a[off..off + n], &b[off..off + n], out)?;
                        off += n;
                    }
                }
                other => return Err(Error::Unsupported(format!("complexification of {other}"))),
            }
            Ok(())
        }
        let ring = re.ring.complexification()?;
        let mut c = Vec::with_capacity(ring.arity());
        go(&re.ring, &re.c, &im.c, &mut c)?;
        Ok(RingElem { ring, c })
    }

    /// Splits a Gaussian element into real and imaginary parts over the
    /// underlying ordered ring.
    pub fn re_im(&self) -> Result<(RingElem, RingElem)> {
        fn go(
            r: &RingDescriptor,
            c: &[Rational],
            re: &mut Vec<Rational>,
            im: &mut Vec<Rational>,
        ) -> Result<RingDescriptor> {
            Ok(match r {
                RingDescriptor::GaussQ => {
                    re.push(c[0].clone());
                    im.push(c[1].clone());
                    RingDescriptor::Q
                }
                RingDescriptor::DualGaussQ => {
                    re.extend([c[0].clone(), c[1].clone()]);
                    im.extend([c[2].clone(), c[3].clone()]);
                    RingDescriptor::DualQ
                }
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    let mut rings = Vec::new();
                    for f in fs.iter() {
                        let n = f.arity();
                        rings.push(go(f, &c[off..off + n], re, im)?);
                        off += n;
                    }
                    RingDescriptor::Product(Arc::new(rings))
                }
                other => return Err(Error::NotApplicable(format!("{other} is not Gaussian"))),
            })
        }
        let (mut re, mut im) = (Vec::new(), Vec::new());
        let ring = go(&self.ring, &self.c, &mut re, &mut im)?;
        Ok((
            RingElem {
                ring: ring.clone(),
                c: re,
            },
            RingElem { ring, c: im },
        ))
    }

    // -- serialization ----------------------------------------------------

    pub fn to_json(&self) -> Value {
        fn go(r: &RingDescriptor, c: &[Rational]) -> Value {
            let s = |x: &Rational| Value::String(format_rational(x));
            match r {
                RingDescriptor::Q | RingDescriptor::ZInt | RingDescriptor::TrivialNOrder => {
                    s(&c[0])
                }
                RingDescriptor::DualQ => json!({ "re": s(&c[0]), "eps": s(&c[1]) }),
                RingDescriptor::GaussQ => json!({ "re": s(&c[0]), "im": s(&c[1]) }),
                RingDescriptor::DualGaussQ => json!({
                    "re": { "re": s(&c[0]), "eps": s(&c[1]) },
                    "im": { "re": s(&c[2]), "eps": s(&c[3]) },
                }),
                RingDescriptor::Product(fs) => {
                    let mut off = 0;
                    Value::Array(
                        fs.iter()
                            .map(|f| {
                                let n = f.arity();
                                let v = go(f, &c[off..off + n]);
                                off += n;
                                v
                            })
                            .collect(),
                    )
                }
            }
        }
        go(&self.ring, &self.c)
    }

    pub fn from_json(ring: &RingDescriptor, v: &Value) -> Result<RingElem> {
        fn scalar(v: &Value) -> Result<Rational> {
            match v {
                Value::String(s) => parse_rational(s),
                Value::Number(n) => n
                    .as_i64()
                    .map(|i| Rational::from_integer(i.into()))
                    .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
                other => Err(Error::Parse(format!("expected a rational, got {other}"))),
            }
        }
        fn field<'a>(v: &'a Value, k: &str) -> Result<&'a Value> {
            v.get(k)
                .ok_or_else(|| Error::Parse(format!("missing field {k:?} in {v}")))
        }
        fn go(r: &RingDescriptor, v: &Value, out: &mut Vec<Rational>) -> Result<()> {
            match r {
                RingDescriptor::Q | RingDescriptor::ZInt | RingDescriptor::TrivialNOrder => {
                    out.push(scalar(v)?)
                }
                RingDescriptor::DualQ => match v {
                    Value::Object(_) => {
                        out.push(scalar(field(v, "re")?)?);
                        out.push(scalar(field(v, "eps")?)?);
                    }
                    _ => {
                        out.push(scalar(v)?);
                        out.push(Rational::zero());
                    }
                },
                RingDescriptor::GaussQ => match v {
                    Value::Object(_) => {
                        out.push(scalar(field(v, "re")?)?);
                        out.push(scalar(field(v, "im")?)?);
                    }
                    _ => {
                        out.push(scalar(v)?);
                        out.push(Rational::zero());
                    }
                },
                RingDescriptor::DualGaussQ => {
                    go(&RingDescriptor::DualQ, field(v, "re")?, out)?;
                    go(&RingDescriptor::DualQ, field(v, "im")?, out)?;
                }
                RingDescriptor::Product(fs) => {
                    let arr = v
                        .as_array()
                        .filter(|a| a.len() == fs.len())
                        .ok_or_else(|| {
                            Error::Parse(format!("expected {}-array for {r}", fs.len()))
                        })?;
                    for (f, x) in fs.iter().zip(arr) {
                        go(f, x, out)?;
                    }
                }
            }
            Ok(())
        }
        let mut c = Vec::with_capacity(ring.arity());
        go(ring, v, &mut c)?;
        ring.from_coords(c)
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fn signed(f: &mut fmt::Formatter<'_>, x: &Rational, unit: &str) -> fmt::Result {
            if x.is_negative() {
                write!(f, "-{}{unit}", -x)
            } else {
                write!(f, "+{x}{unit}")
            }
        }
        let c = &self.c;
        match &self.ring {
            RingDescriptor::Q | RingDescriptor::ZInt | RingDescriptor::TrivialNOrder => {
                write!(f, "{}", c[0])
            }
            RingDescriptor::DualQ => {
                write!(f, "{}", c[0])?;
                signed(f, &c[1], "ε")
            }
            RingDescriptor::GaussQ => {
                write!(f, "{}", c[0])?;
                signed(f, &c[1], "i")
            }
            RingDescriptor::DualGaussQ => {
                write!(f, "({}", c[0])?;
                signed(f, &c[1], "ε")?;
                write!(f, ")+({}", c[2])?;
                signed(f, &c[3], "ε")?;
                write!(f, ")i")
            }
            RingDescriptor::Product(_) => {
                write!(f, "(")?;
                for (i, p) in self.factors().iter().enumerate() {
                    if i > 0 {
                        write!(f, ", ")?;
                    }
                    write!(f, "{p}")?;
                }
                write!(f, ")")
            }
        }
    }
}

// Operator impls assume matching descriptors; callers validate at the
// element boundary (see `try_add` and friends).
impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, o: &RingElem) -> RingElem {
        debug_assert_eq!(self.ring, o.ring);
        RingElem {
            ring: self.ring.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, o: &RingElem) -> RingElem {
        debug_assert_eq!(self.ring, o.ring);
        RingElem {
            ring: self.ring.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, o: &RingElem) -> RingElem {
        debug_assert_eq!(self.ring, o.ring);
        let mut c = Vec::with_capacity(self.c.len());
        mul_coords(&self.ring, &self.c, &o.c, &mut c);
        RingElem {
            ring: self.ring.clone(),
            c,
        }
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        RingElem {
            ring: self.ring.clone(),
            c: self.c.iter().map(|a| -a).collect(),
        }
    }
}

pub fn ring_add(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.try_add(b)
}

pub fn ring_mul(a: &RingElem, b: &RingElem) -> Result<RingElem> {
    a.try_mul(b)
}

pub fn ring_neg(a: &RingElem) -> RingElem {
    -a
}

pub fn ring_is_positive(a: &RingElem) -> Result<bool> {
    a.is_positive()
}

pub fn ring_invert(a: &RingElem) -> Result<RingElem> {
    a.inverse()
}

/// Small elements tried before random ones, so that witnesses are the
/// simplest available.
fn corner_scalars() -> Vec<Rational> {
    [
        (1, 1),
        (2, 1),
        (1, 2),
        (-1, 1),
        (3, 1),
        (1, 3),
        (-2, 1),
        (2, 3),
    ]
    .iter()
    .map(|&(n, d)| rat(n, d))
    .collect()
}

pub const POR_CHECKS: [&str; 6] = [
    "zero-less-one",
    "translation-invariance",
    "multiplicativity",
    "asymmetry",
    "square-order",
    "inverse-por",
];

/// Samples the por conditions (1)–(4) and `0 < 1` on a ring.
pub fn check_por_axioms(ring: &RingDescriptor, spec: &SampleSpec) -> Result<AxiomReport> {
    if !ring.is_ordered() {
        return Err(Error::NoOrder(ring.to_string()));
    }
    let corners: Vec<RingElem> = corner_scalars()
        .iter()
        .filter_map(|r| ring.from_rational(r).ok())
        .collect();
    let pos_corners: Vec<RingElem> = corners
        .iter()
        .filter(|c| c.is_positive().unwrap_or(false))
        .cloned()
        .collect();
    let inv_corners: Vec<RingElem> = corners.iter().filter(|c| c.is_unit()).cloned().collect();

    let rows = run_cases(spec, |s| {
        let case = s.case;
        let pick =
            |list: &[RingElem], s: &mut Sampler, fallback: &dyn Fn(&mut Sampler) -> RingElem| {
                list.get(case).cloned().unwrap_or_else(|| fallback(s))
            };
        let pos = |s: &mut Sampler| ring.sample_positive(s).expect("ordered");
        let a = pick(&corners, s, &|s| ring.sample(s));
        let p = pos(s);
        let c = ring.sample(s);
        let q = pos(s);

        let zero_one = {
            let one = ring.one();
            Case::from_bool(one.is_positive().unwrap_or(false), || {
                ("1 is not positive".into(), json!({ "a": one.to_json() }))
            })
        };
        // a < a + p
        let b = &a + &p;
        let translation = {
            let ok = (&b + &c).less(&(&a + &c)).map(|x| !x).unwrap_or(false)
                && (&a + &c).less(&(&b + &c)).unwrap_or(false);
            Case::from_bool(ok, || {
                (
                    format!("a={a} < b={b} but a+c !< b+c for c={c}"),
                    json!({ "a": a.to_json(), "b": b.to_json(), "c": c.to_json() }),
                )
            })
        };
        // 0 < q and a < b ⇒ qa < qb and aq < bq
        let mult = {
            let ok = (&q * &a).less(&(&q * &b)).unwrap_or(false)
                && (&a * &q).less(&(&b * &q)).unwrap_or(false);
            Case::from_bool(ok, || {
                (
                    format!("0<{q}, {a}<{b} but products not ordered"),
                    json!({ "a": a.to_json(), "b": b.to_json(), "c": q.to_json() }),
                )
            })
        };
        let asym = {
            let ok = !(p.is_positive().unwrap_or(false) && (-&p).is_positive().unwrap_or(false));
            Case::from_bool(ok, || {
                (
                    format!("both {p} and its negative are positive"),
                    json!({ "a": p.to_json() }),
                )
            })
        };
        let u = pick(&inv_corners, s, &|s| ring.sample_invertible(s));
        let square = {
            let sq = u.square();
            Case::from_bool(sq.is_positive().unwrap_or(false), || {
                (
                    format!("a={u} invertible but a²={sq} is not positive"),
                    json!({ "a": u.to_json(), "a_squared": sq.to_json() }),
                )
            })
        };
        let w = pick(&pos_corners, s, &pos);
        let inverse = Case::from_bool(w.is_unit(), || {
            (
                format!("a={w} is positive but not invertible"),
                json!({ "a": w.to_json() }),
            )
        });
        vec![zero_one, translation, mult, asym, square, inverse]
    });
    Ok(AxiomReport::from_rows(
        "por axioms",
        &ring.to_string(),
        spec,
        &POR_CHECKS,
        rows,
    ))
}

/// Re-evaluates a por witness; true when the witness still violates `check`.
pub fn replay_por_witness(ring: &RingDescriptor, check: &str, data: &Value) -> Result<bool> {
    let get = |k: &str| -> Result<RingElem> {
        RingElem::from_json(
            ring,
            data.get(k)
                .ok_or_else(|| Error::Parse(format!("missing {k}")))?,
        )
    };
    Ok(match check {
        "square-order" => {
            let a = get("a")?;
            a.is_unit() && !a.square().is_positive()?
        }
        "inverse-por" => {
            let a = get("a")?;
            a.is_positive()? && !a.is_unit()
        }
        "asymmetry" => {
            let a = get("a")?;
            a.is_positive()? && (-&a).is_positive()?
        }
        "zero-less-one" => !ring.one().is_positive()?,
        other => return Err(Error::NotApplicable(format!("no replay for {other}"))),
    })
}

/// All coordinates in lowest terms with positive denominators.
pub fn canonical(e: &RingElem) -> bool {
    e.c.iter()
        .all(|r| r.denom().is_positive() && r.numer().gcd(r.denom()).is_one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn dq(re: Rational, eps: Rational) -> RingElem {
        RingDescriptor::DualQ.from_coords(vec![re, eps]).unwrap()
    }

    #[test]
    fn dual_number_product() {
        let a = dq(int(2), int(3));
        let b = dq(rat(1, 2), rat(-3, 4));
        // (2+3ε)(1/2−3/4ε) = 1 + ε(2·(−3/4) + 3·1/2) = 1 + 0ε
        assert_eq!(ring_mul(&a, &b).unwrap(), dq(int(1), int(0)));
        assert_eq!(ring_invert(&a).unwrap(), b);
    }

    #[test]
    fn gaussian_i_squared() {
        let i = RingDescriptor::GaussQ
            .from_coords(vec![int(0), int(1)])
            .unwrap();
        assert_eq!(
            &i * &i,
            RingDescriptor::GaussQ.from_rational(&int(-1)).unwrap()
        );
        assert!(matches!(i.is_positive(), Err(Error::NoOrder(_))));
    }

    #[test]
    fn additive_identity() {
        let mut s = SampleSpec::new(3, 1).sampler(0);
        for r in [
            RingDescriptor::Q,
            RingDescriptor::DualQ,
            RingDescriptor::DualGaussQ,
        ] {
            let a = r.sample(&mut s);
            assert_eq!(ring_add(&r.zero(), &a).unwrap(), a);
        }
    }

    #[test]
    fn mismatch_is_reported() {
        let a = RingDescriptor::Q.one();
        let b = RingDescriptor::DualQ.one();
        assert!(matches!(
            ring_add(&a, &b),
            Err(Error::DescriptorMismatch(_))
        ));
    }

    #[test]
    fn positivity_examples() {
        assert!(RingDescriptor::Q
            .from_rational(&rat(3, 2))
            .unwrap()
            .is_positive()
            .unwrap());
        assert!(dq(int(1), int(-5)).is_positive().unwrap());
        let half = RingDescriptor::TrivialNOrder
            .from_rational(&rat(1, 2))
            .unwrap();
        assert!(!half.is_positive().unwrap());
    }

    #[test]
    fn non_invertibles() {
        assert_eq!(dq(int(0), int(1)).inverse(), Err(Error::NotInvertible));
        let two = RingDescriptor::ZInt.from_rational(&int(2)).unwrap();
        assert_eq!(two.inverse(), Err(Error::NotInvertible));
        assert!(RingDescriptor::ZInt.from_rational(&rat(1, 2)).is_err());
    }

    #[test]
    fn dual_gauss_inverse() {
        let r = RingDescriptor::DualGaussQ;
        let mut s = SampleSpec::new(11, 1).sampler(0);
        for _ in 0..50 {
            let a = r.sample_invertible(&mut s);
            let b = a.inverse().unwrap();
            assert!((&a * &b).is_one());
        }
    }

    #[test]
    fn flavors() {
        assert_eq!(
            RingDescriptor::Q.order_flavor(),
            OrderFlavor::SquareOrderedInversePor
        );
        assert_eq!(
            RingDescriptor::GaussQ.order_flavor(),
            OrderFlavor::Unordered
        );
        let p = RingDescriptor::product(vec![RingDescriptor::Q, RingDescriptor::ZInt]).unwrap();
        assert_eq!(p.order_flavor(), OrderFlavor::Por);
        assert!(RingDescriptor::product(vec![]).is_err());
    }

    #[test]
    fn json_roundtrip_layouts() {
        let p = RingDescriptor::product(vec![RingDescriptor::Q, RingDescriptor::DualQ]).unwrap();
        let v = json!(["1/2", { "re": "3", "eps": "-1" }]);
        let e = RingElem::from_json(&p, &v).unwrap();
        assert_eq!(e.to_json(), v);
    }

    #[test]
    fn por_suites() {
        let rep = check_por_axioms(&RingDescriptor::Q, &SampleSpec::new(1, 1000)).unwrap();
        assert!(rep.passed(), "{rep}");
        let rep = check_por_axioms(&RingDescriptor::DualQ, &SampleSpec::new(1, 300)).unwrap();
        assert!(rep.passed(), "{rep}");

        let rep = check_por_axioms(&RingDescriptor::TrivialNOrder, &SampleSpec::default()).unwrap();
        let sq = rep.check("square-order").unwrap();
        assert!(!sq.passed());
        let w = sq.witness.as_ref().unwrap();
        assert_eq!(w.data["a"], json!("1/2"));
        assert!(
            replay_por_witness(&RingDescriptor::TrivialNOrder, "square-order", &w.data).unwrap()
        );
        assert!(rep.check("translation-invariance").unwrap().passed());
        assert!(rep.check("multiplicativity").unwrap().passed());

        let rep = check_por_axioms(&RingDescriptor::ZInt, &SampleSpec::default()).unwrap();
        let inv = rep.check("inverse-por").unwrap();
        assert_eq!(inv.witness.as_ref().unwrap().data["a"], json!("2"));
        assert!(rep.check("square-order").unwrap().passed());

        assert!(check_por_axioms(&RingDescriptor::GaussQ, &SampleSpec::default()).is_err());
    }
}
