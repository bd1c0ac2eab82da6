//! Concrete partially ordered Jordan algebras.
//!
//! Elements are coordinate vectors over a base ring. The layouts are:
//! `Sym(n)` stores the upper triangle of a symmetric matrix row by row,
//! `Spin(m)` stores `(λ, w₁, …, w_m)`, and products concatenate their
//! factors. `DualExt(base)` is never stored as such: it is resolved to the
//! same algebra over the ε-extended ring (see [`PoJaDescriptor::concrete`]),
//! which is the identification `TV ≅ V ⊗ ℚ[ε]`.

mod checks;

pub use checks::{
    check_formally_real, check_jordan_axioms, check_poja_axioms, FORMALLY_REAL_CHECKS,
    JORDAN_CHECKS, POJA_CHECKS,
};

use std::fmt;
use std::sync::Arc;

use num_traits::One;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::linalg::{self, Mat};
use crate::rational::{rat, Rational};
use crate::ring::{OrderFlavor, RingDescriptor, RingElem};
use crate::sample::Sampler;

/// Largest matrix size accepted for `Sym(n)`.
pub const MAX_SYM_N: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PoJaDescriptor {
    Scalar { ring: RingDescriptor },
    Sym { n: usize, ring: RingDescriptor },
    Spin { m: usize, ring: RingDescriptor },
    Product(Arc<Vec<PoJaDescriptor>>),
    DualExt(Arc<PoJaDescriptor>),
}

impl PoJaDescriptor {
    pub fn scalar(ring: RingDescriptor) -> Self {
        PoJaDescriptor::Scalar { ring }
    }

    pub fn sym(n: usize, ring: RingDescriptor) -> Self {
        PoJaDescriptor::Sym { n, ring }
    }

    pub fn spin(m: usize, ring: RingDescriptor) -> Self {
        PoJaDescriptor::Spin { m, ring }
    }

    pub fn product(factors: Vec<PoJaDescriptor>) -> Self {
        PoJaDescriptor::Product(Arc::new(factors))
    }

    pub fn dual_ext(base: PoJaDescriptor) -> Self {
        PoJaDescriptor::DualExt(Arc::new(base))
    }

    /// Checks size limits and ring requirements.
    pub fn validate(&self) -> Result<()> {
        let need_half = |r: &RingDescriptor| {
            if r.contains_half() {
                Ok(())
            } else {
                Err(Error::Unsupported(format!(
                    "Jordan algebra over {r}: ring lacks 1/2"
                )))
            }
        };
        match self {
            PoJaDescriptor::Scalar { ring } => need_half(ring),
            PoJaDescriptor::Sym { n, ring } => {
                if *n == 0 || *n > MAX_SYM_N {
                    return Err(Error::UnsupportedSize(format!(
                        "Sym({n}): need 1 ≤ n ≤ {MAX_SYM_N}"
                    )));
                }
                need_half(ring)
            }
            PoJaDescriptor::Spin { m, ring } => {
                if *m == 0 {
                    return Err(Error::UnsupportedSize("Spin(0)".into()));
                }
                need_half(ring)
            }
            PoJaDescriptor::Product(fs) => {
                if fs.is_empty() {
                    return Err(Error::Precondition("empty product".into()));
                }
                fs.iter().try_for_each(|f| f.validate())?;
                let c = self.concrete()?;
                let rings: Vec<_> = c.components().iter().map(|f| f.ring()).collect();
                if rings.windows(2).any(|w| w[0] != w[1]) {
                    return Err(Error::Unsupported(
                        "product factors over different rings".into(),
                    ));
                }
                Ok(())
            }
            PoJaDescriptor::DualExt(b) => {
                b.validate()?;
                self.concrete().map(|_| ())
            }
        }
    }

    /// Resolves every `DualExt(base)` to `base` over the ε-extended ring.
    pub fn concrete(&self) -> Result<PoJaDescriptor> {
        Ok(match self {
            PoJaDescriptor::Product(fs) => {
                PoJaDescriptor::product(fs.iter().map(|f| f.concrete()).collect::<Result<_>>()?)
            }
            PoJaDescriptor::DualExt(b) => b.concrete()?.map_ring(&|r| r.dual_extension())?,
            other => other.clone(),
        })
    }

    /// The same algebra over `f(ring)`.
    pub fn map_ring(&self, f: &dyn Fn(&RingDescriptor) -> Result<RingDescriptor>) -> Result<Self> {
        Ok(match self {
            PoJaDescriptor::Scalar { ring } => PoJaDescriptor::Scalar { ring: f(ring)? },
            PoJaDescriptor::Sym { n, ring } => PoJaDescriptor::Sym {
                n: *n,
                ring: f(ring)?,
            },
            PoJaDescriptor::Spin { m, ring } => PoJaDescriptor::Spin {
                m: *m,
                ring: f(ring)?,
            },
            PoJaDescriptor::Product(fs) => {
                PoJaDescriptor::product(fs.iter().map(|x| x.map_ring(f)).collect::<Result<_>>()?)
            }
            PoJaDescriptor::DualExt(_) => return self.concrete()?.map_ring(f),
        })
    }

    pub fn complexification(&self) -> Result<Self> {
        self.concrete()?.map_ring(&|r| r.complexification())
    }

    pub fn dim(&self) -> usize {
        match self {
            PoJaDescriptor::Scalar { .. } => 1,
            PoJaDescriptor::Sym { n, .. } => n * (n + 1) / 2,
            PoJaDescriptor::Spin { m, .. } => m + 1,
            PoJaDescriptor::Product(fs) => fs.iter().map(|f| f.dim()).sum(),
            PoJaDescriptor::DualExt(b) => b.dim(),
        }
    }

    /// Coordinate ring (common to all factors of a product).
    pub fn ring(&self) -> RingDescriptor {
        match self {
            PoJaDescriptor::Scalar { ring }
            | PoJaDescriptor::Sym { ring, .. }
            | PoJaDescriptor::Spin { ring, .. } => ring.clone(),
            PoJaDescriptor::Product(fs) => fs[0].ring(),
            PoJaDescriptor::DualExt(b) => b.ring().dual_extension().expect("validated"),
        }
    }

    pub fn components(&self) -> Vec<PoJaDescriptor> {
        match self {
            PoJaDescriptor::Product(fs) => fs.iter().cloned().collect(),
            other => vec![other.clone()],
        }
    }

    pub fn is_ordered(&self) -> bool {
        self.ring().is_ordered()
    }

    fn require_order(&self) -> Result<()> {
        if self.is_ordered() {
            Ok(())
        } else {
            Err(Error::NoOrder(self.ring().to_string()))
        }
    }

    pub fn zero(&self) -> JElem {
        let d = self.concrete().expect("validated descriptor");
        let z = d.ring().zero();
        JElem {
            c: vec![z; d.dim()],
            desc: d,
        }
    }

    pub fn unit(&self) -> JElem {
        let d = self.concrete().expect("validated descriptor");
        let mut c = Vec::with_capacity(d.dim());
        d.push_unit(&mut c);
        JElem { desc: d, c }
    }

    fn push_unit(&self, out: &mut Vec<RingElem>) {
        let r = self.ring();
        match self {
            PoJaDescriptor::Scalar { .. } => out.push(r.one()),
            PoJaDescriptor::Sym { n, .. } => {
                for i in 0..*n {
                    for j in i..*n {
                        out.push(if i == j { r.one() } else { r.zero() });
                    }
                }
            }
            PoJaDescriptor::Spin { m, .. } => {
                out.push(r.one());
                out.extend(std::iter::repeat_n(r.zero(), *m));
            }
            PoJaDescriptor::Product(fs) => fs.iter().for_each(|f| f.push_unit(out)),
            PoJaDescriptor::DualExt(_) => unreachable!("concrete descriptors only"),
        }
    }

    pub fn basis(&self, k: usize) -> JElem {
        let mut z = self.zero();
        z.c[k] = z.desc.ring().one();
        z
    }

    pub fn from_coords(&self, c: Vec<RingElem>) -> Result<JElem> {
        let d = self.concrete()?;
        if c.len() != d.dim() {
            return Err(Error::DescriptorMismatch(format!(
                "{d} has dimension {}, got {} coordinates",
                d.dim(),
                c.len()
            )));
        }
        let r = d.ring();
        if let Some(bad) = c.iter().find(|x| *x.ring() != r) {
            return Err(Error::DescriptorMismatch(format!(
                "coordinate over {} in {d}",
                bad.ring()
            )));
        }
        Ok(JElem { desc: d, c })
    }

    pub fn from_rationals(&self, c: &[Rational]) -> Result<JElem> {
        let r = self.concrete()?.ring();
        self.from_coords(
            c.iter()
                .map(|x| r.from_rational(x))
                .collect::<Result<_>>()?,
        )
    }

    /// Scalar multiple of the unit.
    pub fn scalar_unit(&self, r: &Rational) -> JElem {
        self.unit().scale(r)
    }

    /// A symmetric matrix given row by row.
    pub fn sym_from_rows(&self, rows: &[Vec<Rational>]) -> Result<JElem> {
        let PoJaDescriptor::Sym { n, ring } = self.concrete()? else {
            return Err(Error::NotApplicable(format!("{self} is not a Sym algebra")));
        };
        let m = Mat::from_rows(
            rows.iter()
                .map(|r| {
                    r.iter()
                        .map(|x| ring.from_rational(x))
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?,
        );
        sym_from_mat(&PoJaDescriptor::Sym { n, ring }, &m)
    }

    // -- sampling ---------------------------------------------------------

    pub fn sample(&self, s: &mut Sampler) -> JElem {
        let d = self.concrete().expect("validated descriptor");
        let r = d.ring();
        let c = (0..d.dim()).map(|_| r.sample(s)).collect();
        JElem { desc: d, c }
    }

    /// A random element of the cone Ω.
    pub fn sample_positive(&self, s: &mut Sampler) -> Result<JElem> {
        let d = self.concrete()?;
        d.require_order()?;
        let r = d.ring();
        if r.order_flavor() != OrderFlavor::SquareOrderedInversePor
            && !matches!(d, PoJaDescriptor::Scalar { .. })
        {
            return Err(Error::Unsupported(format!("cone sampling over {r}")));
        }
        Ok(match &d {
            PoJaDescriptor::Scalar { .. } => JElem {
                c: vec![r.sample_positive(s)?],
                desc: d.clone(),
            },
            PoJaDescriptor::Sym { n, .. } => {
                // L·Lᵀ with L lower triangular and positive diagonal
                let n = *n;
                let mut l = Mat::zeros(n, n, &r.zero());
                for i in 0..n {
                    for j in 0..=i {
                        let v = if i == j {
                            r.sample_positive(s)?
                        } else {
                            r.sample(s)
                        };
                        l.set(i, j, v);
                    }
                }
                sym_from_mat(&d, &l.mul(&l.transpose()))?
            }
            PoJaDescriptor::Spin { m, .. } => {
                // λ = (u² + |w|²)/(2u) + δ ≥ |w| + δ by AM-GM
                let w: Vec<RingElem> = (0..*m).map(|_| r.sample(s)).collect();
                let norm2 = w.iter().fold(r.zero(), |acc, x| &acc + &x.square());
                let u = s.positive_rational();
                let u2 = r.from_rational(&(&u * &u))?;
                let inv2u = r.from_rational(&(Rational::one() / (&u * rat(2, 1))))?;
                let lambda = &(&(&u2 + &norm2) * &inv2u) + &r.sample_positive(s)?;
                let mut c = vec![lambda];
                c.extend(w);
                JElem { desc: d.clone(), c }
            }
            PoJaDescriptor::Product(fs) => {
                let parts = fs
                    .iter()
                    .map(|f| f.sample_positive(s))
                    .collect::<Result<Vec<_>>>()?;
                JElem::from_components(&d, &parts)?
            }
            PoJaDescriptor::DualExt(_) => unreachable!(),
        })
    }

    /// A random invertible element (falls back to the unit after repeated
    /// singular draws).
    pub fn sample_invertible(&self, s: &mut Sampler) -> JElem {
        for _ in 0..32 {
            let x = self.sample(s);
            if x.is_invertible() {
                return x;
            }
        }
        self.unit()
    }
}

impl fmt::Display for PoJaDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PoJaDescriptor::Scalar { ring } => write!(f, "Scalar({ring})"),
            PoJaDescriptor::Sym { n, ring } => write!(f, "Sym({n},{ring})"),
            PoJaDescriptor::Spin { m, ring } => write!(f, "Spin({m},{ring})"),
            PoJaDescriptor::Product(fs) => {
                write!(f, "Product(")?;
                for (i, x) in fs.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{x}")?;
                }
                write!(f, ")")
            }
            PoJaDescriptor::DualExt(b) => write!(f, "DualExt({b})"),
        }
    }
}

fn sym_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i <= j { (i, j) } else { (j, i) };
    i * n - i * (i + 1) / 2 + j
}

fn sym_from_mat(d: &PoJaDescriptor, m: &Mat<RingElem>) -> Result<JElem> {
    let PoJaDescriptor::Sym { n, .. } = d else {
        unreachable!()
    };
    let n = *n;
    if m.rows != n || m.cols != n {
        return Err(Error::DescriptorMismatch(format!(
            "expected {n}x{n} matrix"
        )));
    }
    let mut c = Vec::with_capacity(n * (n + 1) / 2);
    for i in 0..n {
        for j in i..n {
            if m.at(i, j) != m.at(j, i) {
                return Err(Error::Parse(format!("matrix not symmetric at ({i},{j})")));
            }
            c.push(m.at(i, j).clone());
        }
    }
    Ok(JElem { desc: d.clone(), c })
}

/// An element of a concrete Jordan algebra.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct JElem {
    desc: PoJaDescriptor,
    c: Vec<RingElem>,
}

impl JElem {
    pub fn descriptor(&self) -> &PoJaDescriptor {
        &self.desc
    }

    pub fn coords(&self) -> &[RingElem] {
        &self.c
    }

    pub fn ring(&self) -> RingDescriptor {
        self.desc.ring()
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(RingElem::is_zero)
    }

    pub fn same_algebra(&self, o: &JElem) -> Result<()> {
        if self.desc == o.desc {
            Ok(())
        } else {
            Err(Error::DescriptorMismatch(format!(
                "{} vs {}",
                self.desc, o.desc
            )))
        }
    }

    fn zip(&self, o: &JElem, f: impl Fn(&RingElem, &RingElem) -> RingElem) -> JElem {
        debug_assert_eq!(self.desc, o.desc);
        JElem {
            desc: self.desc.clone(),
            c: self.c.iter().zip(&o.c).map(|(a, b)| f(a, b)).collect(),
        }
    }

    pub fn add(&self, o: &JElem) -> JElem {
        self.zip(o, |a, b| a + b)
    }

    pub fn sub(&self, o: &JElem) -> JElem {
        self.zip(o, |a, b| a - b)
    }

    pub fn neg(&self) -> JElem {
        JElem {
            desc: self.desc.clone(),
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    pub fn try_add(&self, o: &JElem) -> Result<JElem> {
        self.same_algebra(o)?;
        Ok(self.add(o))
    }

    pub fn try_sub(&self, o: &JElem) -> Result<JElem> {
        self.same_algebra(o)?;
        Ok(self.sub(o))
    }

    pub fn scale(&self, r: &Rational) -> JElem {
        JElem {
            desc: self.desc.clone(),
            c: self.c.iter().map(|a| a.scale(r)).collect(),
        }
    }

    pub fn scale_ring(&self, r: &RingElem) -> JElem {
        JElem {
            desc: self.desc.clone(),
            c: self.c.iter().map(|a| a * r).collect(),
        }
    }

    /// Factors of a product element; a one-element list otherwise.
    pub fn components(&self) -> Vec<JElem> {
        match &self.desc {
            PoJaDescriptor::Product(fs) => {
                let mut off = 0;
                fs.iter()
                    .map(|f| {
                        let n = f.dim();
                        let e = JElem {
                            desc: f.clone(),
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

    pub fn from_components(desc: &PoJaDescriptor, parts: &[JElem]) -> Result<JElem> {
        let d = desc.concrete()?;
        let fs = d.components();
        if fs.len() != parts.len() || fs.iter().zip(parts).any(|(f, p)| *f != p.desc) {
            return Err(Error::DescriptorMismatch(format!(
                "components do not match {d}"
            )));
        }
        if !matches!(d, PoJaDescriptor::Product(_)) {
            return Ok(parts[0].clone());
        }
        Ok(JElem {
            desc: d,
            c: parts.iter().flat_map(|p| p.c.iter().cloned()).collect(),
        })
    }

    /// Full symmetric matrix of a `Sym` element.
    pub fn sym_matrix(&self) -> Option<Mat<RingElem>> {
        let PoJaDescriptor::Sym { n, .. } = &self.desc else {
            return None;
        };
        let n = *n;
        Some(Mat::from_fn(n, n, |i, j| {
            self.c[sym_index(n, i, j)].clone()
        }))
    }

    /// The Jordan product `a • b`.
    pub fn jbullet(&self, o: &JElem) -> JElem {
        debug_assert_eq!(self.desc, o.desc);
        let r = self.desc.ring();
        let half = r.from_rational(&rat(1, 2)).expect("ring contains 1/2");
        match &self.desc {
            PoJaDescriptor::Scalar { .. } => JElem {
                desc: self.desc.clone(),
                c: vec![&self.c[0] * &o.c[0]],
            },
            PoJaDescriptor::Sym { n, .. } => {
                let a = self.sym_matrix().expect("sym");
                let b = o.sym_matrix().expect("sym");
                let ab = a.mul(&b);
                let n = *n;
                let mut c = Vec::with_capacity(self.c.len());
                for i in 0..n {
                    for j in i..n {
                        // (ab + ba)_{ij} = ab_{ij} + ab_{ji} since a, b symmetric
                        c.push(&(ab.at(i, j) + ab.at(j, i)) * &half);
                    }
                }
                JElem {
                    desc: self.desc.clone(),
                    c,
                }
            }
            PoJaDescriptor::Spin { .. } => {
                let (l, w) = (&self.c[0], &self.c[1..]);
                let (mu, v) = (&o.c[0], &o.c[1..]);
                let mut head = l * mu;
                for (x, y) in w.iter().zip(v) {
                    head = &head + &(x * y);
                }
                let mut c = vec![head];
                c.extend(w.iter().zip(v).map(|(x, y)| &(l * y) + &(mu * x)));
                JElem {
                    desc: self.desc.clone(),
                    c,
                }
            }
            PoJaDescriptor::Product(_) => {
                let parts: Vec<JElem> = self
                    .components()
                    .iter()
                    .zip(o.components())
                    .map(|(a, b)| a.jbullet(&b))
                    .collect();
                JElem {
                    desc: self.desc.clone(),
                    c: parts.into_iter().flat_map(|p| p.c).collect(),
                }
            }
            PoJaDescriptor::DualExt(_) => unreachable!("concrete descriptors only"),
        }
    }

    pub fn square(&self) -> JElem {
        self.jbullet(self)
    }

    /// `Q_a(x) = 2 a•(a•x) − a²•x`, evaluated without materializing `Q_a`.
    pub fn quad_apply(&self, x: &JElem) -> JElem {
        let ax = self.jbullet(x);
        let two = rat(2, 1);
        self.jbullet(&ax).scale(&two).sub(&self.square().jbullet(x))
    }

    /// Matrix of the left multiplication `L_a`.
    pub fn lmul(&self) -> LinOp {
        let d = self.desc.dim();
        let cols: Vec<JElem> = (0..d).map(|k| self.jbullet(&self.desc.basis(k))).collect();
        LinOp {
            desc: self.desc.clone(),
            m: Mat::from_fn(d, d, |i, j| cols[j].c[i].clone()),
        }
    }

    /// The norm whose unit-ness decides invertibility: the element itself,
    /// the determinant, `λ² − Σ wᵢ²`, or (for products) the list of factor
    /// norms folded into a product.
    fn is_invertible_closed_form(&self) -> bool {
        match &self.desc {
            PoJaDescriptor::Scalar { .. } => self.c[0].is_unit(),
            PoJaDescriptor::Sym { .. } => match self.residue_matrix() {
                Some(m) => linalg::is_invertible_rational(&m),
                None => linalg::is_invertible(&self.sym_matrix().expect("sym")),
            },
            PoJaDescriptor::Spin { .. } => spin_norm(self).is_unit(),
            PoJaDescriptor::Product(_) => self
                .components()
                .iter()
                .all(|c| c.is_invertible_closed_form()),
            PoJaDescriptor::DualExt(_) => unreachable!(),
        }
    }

    /// The rational matrix of ε-free parts, for Sym over ℚ or ℚ[ε]. Both
    /// invertibility and the cone test only depend on it there.
    fn residue_matrix(&self) -> Option<Mat<Rational>> {
        match &self.desc {
            PoJaDescriptor::Sym {
                ring: RingDescriptor::Q | RingDescriptor::DualQ,
                ..
            } => Some(
                self.sym_matrix()
                    .expect("sym")
                    .map_to(|e| e.coords()[0].clone()),
            ),
            _ => None,
        }
    }

    /// Jordan invertibility. Agrees with bijectivity of `Q_a`; evaluated
    /// through the closed form for each family.
    pub fn is_invertible(&self) -> bool {
        self.is_invertible_closed_form()
    }

    /// The inverse via the closed form of each family: ring inverse, matrix
    /// inverse, `(λ, −w)/N`, componentwise. [`jinverse`] computes the same
    /// element through `Q_a`.
    pub fn inverse(&self) -> Result<JElem> {
        match &self.desc {
            PoJaDescriptor::Scalar { .. } => Ok(JElem {
                desc: self.desc.clone(),
                c: vec![self.c[0].inverse()?],
            }),
            PoJaDescriptor::Sym {
                ring: RingDescriptor::Q,
                ..
            } => {
                let a = self
                    .sym_matrix()
                    .expect("sym")
                    .map_to(|e| e.coords()[0].clone());
                let inv = linalg::inverse_rational(&a).ok_or(Error::NotInvertible)?;
                sym_from_mat(&self.desc, &linalg::to_ring(&inv, &RingDescriptor::Q))
            }
            PoJaDescriptor::Sym { n, .. } => {
                let a = self.sym_matrix().expect("sym");
                let inv = linalg::solve(&a, &Mat::identity(*n, &self.desc.ring().one()))
                    .ok_or(Error::NotInvertible)?;
                sym_from_mat(&self.desc, &inv)
            }
            PoJaDescriptor::Spin { .. } => {
                let ninv = spin_norm(self).inverse()?;
                let mut c = vec![&self.c[0] * &ninv];
                c.extend(self.c[1..].iter().map(|w| -&(w * &ninv)));
                Ok(JElem {
                    desc: self.desc.clone(),
                    c,
                })
            }
            PoJaDescriptor::Product(_) => {
                let parts = self
                    .components()
                    .iter()
                    .map(JElem::inverse)
                    .collect::<Result<Vec<_>>>()?;
                JElem::from_components(&self.desc, &parts)
            }
            PoJaDescriptor::DualExt(_) => unreachable!(),
        }
    }

    /// Membership in the symmetric cone Ω.
    pub fn in_cone(&self) -> Result<bool> {
        self.desc.require_order()?;
        Ok(match &self.desc {
            PoJaDescriptor::Scalar { .. } => self.c[0].is_positive()?,
            PoJaDescriptor::Sym { n, .. } => {
                // Sylvester: every leading principal minor positive
                if let Some(m) = self.residue_matrix() {
                    return Ok(linalg::leading_minors_positive(&m));
                }
                let a = self.sym_matrix().expect("sym");
                for k in 1..=*n {
                    if !linalg::det(&a.leading(k)).is_positive()? {
                        return Ok(false);
                    }
                }
                true
            }
            PoJaDescriptor::Spin { .. } => {
                self.c[0].is_positive()? && spin_norm(self).is_positive()?
            }
            PoJaDescriptor::Product(_) => {
                for c in self.components() {
                    if !c.in_cone()? {
                        return Ok(false);
                    }
                }
                true
            }
            PoJaDescriptor::DualExt(_) => unreachable!(),
        })
    }

    /// `self < other` in the order of V.
    pub fn less(&self, other: &JElem) -> Result<bool> {
        other.try_sub(self)?.in_cone()
    }

    // -- ε and i identifications -------------------------------------------

    /// `re + ε·eps` in the tangent algebra of `re`'s algebra.
    pub fn dual_lift(re: &JElem, eps: &JElem) -> Result<JElem> {
        re.same_algebra(eps)?;
        let desc = PoJaDescriptor::dual_ext(re.desc.clone()).concrete()?;
        let c =
            re.c.iter()
                .zip(&eps.c)
                .map(|(a, b)| RingElem::with_eps(a, b))
                .collect::<Result<_>>()?;
        Ok(JElem { desc, c })
    }

    /// Base part and ε-part of an element of a tangent algebra.
    pub fn dual_split(&self) -> Result<(JElem, JElem)> {
        let base = self.desc.map_ring(&strip_eps_ring)?;
        let re = self.c.iter().map(RingElem::strip_eps).collect();
        let eps = self.c.iter().map(RingElem::eps_part).collect();
        Ok((
            JElem {
                desc: base.clone(),
                c: re,
            },
            JElem { desc: base, c: eps },
        ))
    }

    pub fn complex_lift(re: &JElem, im: &JElem) -> Result<JElem> {
        re.same_algebra(im)?;
        let desc = re.desc.complexification()?;
        let c =
            re.c.iter()
                .zip(&im.c)
                .map(|(a, b)| RingElem::with_im(a, b))
                .collect::<Result<_>>()?;
        Ok(JElem { desc, c })
    }

    pub fn complex_split(&self) -> Result<(JElem, JElem)> {
        let base = self.desc.map_ring(&real_ring)?;
        let mut re = Vec::with_capacity(self.c.len());
        let mut im = Vec::with_capacity(self.c.len());
        for x in &self.c {
            let (a, b) = x.re_im()?;
            re.push(a);
            im.push(b);
        }
        Ok((
            JElem {
                desc: base.clone(),
                c: re,
            },
            JElem { desc: base, c: im },
        ))
    }

    // -- serialization ----------------------------------------------------

    pub fn to_json(&self) -> Value {
        json!({
            "descriptor": serde_json::to_value(&self.desc).expect("descriptor serializes"),
            "coordinates": self.c.iter().map(RingElem::to_json).collect::<Vec<_>>(),
        })
    }

    /// Coordinates only, in layout order.
    pub fn coords_json(&self) -> Value {
        Value::Array(self.c.iter().map(RingElem::to_json).collect())
    }

    /// Reads `{descriptor, coordinates}`; `Sym` coordinates may also be a
    /// full `n×n` array, validated for symmetry.
    pub fn from_json(v: &Value) -> Result<JElem> {
        let desc: PoJaDescriptor = serde_json::from_value(
            v.get("descriptor")
                .cloned()
                .ok_or_else(|| Error::Parse("missing descriptor".into()))?,
        )
        .map_err(|e| Error::Parse(e.to_string()))?;
        desc.validate()?;
        let coords = v
            .get("coordinates")
            .ok_or_else(|| Error::Parse("missing coordinates".into()))?;
        JElem::from_coords_json(&desc, coords)
    }

    pub fn from_coords_json(desc: &PoJaDescriptor, coords: &Value) -> Result<JElem> {
        let d = desc.concrete()?;
        let r = d.ring();
        // A scalar algebra also accepts a bare ring element.
        if matches!(d, PoJaDescriptor::Scalar { .. }) && !coords.is_array() {
            return d.from_coords(vec![RingElem::from_json(&r, coords)?]);
        }
        let arr = coords
            .as_array()
            .ok_or_else(|| Error::Parse("coordinates must be an array".into()))?;
        if let PoJaDescriptor::Sym { n, .. } = &d {
            if arr.len() == *n && arr.iter().all(Value::is_array) && *n > 1 {
                let rows = arr
                    .iter()
                    .map(|row| {
                        let row = row.as_array().expect("checked");
                        if row.len() != *n {
                            return Err(Error::Parse(format!("matrix rows must have length {n}")));
                        }
                        row.iter()
                            .map(|x| RingElem::from_json(&r, x))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                return sym_from_mat(&d, &Mat::from_rows(rows));
            }
        }
        d.from_coords(
            arr.iter()
                .map(|x| RingElem::from_json(&r, x))
                .collect::<Result<_>>()?,
        )
    }
}

fn strip_eps_ring(r: &RingDescriptor) -> Result<RingDescriptor> {
    Ok(match r {
        RingDescriptor::DualQ => RingDescriptor::Q,
        RingDescriptor::DualGaussQ => RingDescriptor::GaussQ,
        RingDescriptor::Product(fs) => RingDescriptor::Product(Arc::new(
            fs.iter().map(strip_eps_ring).collect::<Result<_>>()?,
        )),
        other => return Err(Error::NotApplicable(format!("{other} has no ε"))),
    })
}

fn real_ring(r: &RingDescriptor) -> Result<RingDescriptor> {
    Ok(match r {
        RingDescriptor::GaussQ => RingDescriptor::Q,
        RingDescriptor::DualGaussQ => RingDescriptor::DualQ,
        RingDescriptor::Product(fs) => {
            RingDescriptor::Product(Arc::new(fs.iter().map(real_ring).collect::<Result<_>>()?))
        }
        other => return Err(Error::NotApplicable(format!("{other} is not Gaussian"))),
    })
}

fn spin_norm(a: &JElem) -> RingElem {
    if a.desc.ring() == RingDescriptor::Q {
        // one reduction instead of one per product
        let row = Mat {
            rows: 1,
            cols: a.c.len(),
            data: a.c.iter().map(|e| e.coords()[0].clone()).collect(),
        };
        let (m, l) = linalg::clear_denominators(&row);
        let num = m.data[1..]
            .iter()
            .fold(&m.data[0] * &m.data[0], |acc, w| acc - w * w);
        return RingDescriptor::Q
            .from_rational(&Rational::new(num, &l * &l))
            .expect("rational");
    }
    a.c[1..]
        .iter()
        .fold(a.c[0].square(), |acc, w| &acc - &w.square())
}

impl fmt::Display for JElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.desc {
            PoJaDescriptor::Scalar { .. } => write!(f, "{}", self.c[0]),
            PoJaDescriptor::Sym { n, .. } => {
                let m = self.sym_matrix().expect("sym");
                write!(f, "[")?;
                for i in 0..*n {
                    write!(f, "{}[", if i > 0 { "," } else { "" })?;
                    for j in 0..*n {
                        write!(f, "{}{}", if j > 0 { "," } else { "" }, m.at(i, j))?;
                    }
                    write!(f, "]")?;
                }
                write!(f, "]")
            }
            PoJaDescriptor::Spin { .. } => {
                write!(f, "({};", self.c[0])?;
                for (i, w) in self.c[1..].iter().enumerate() {
                    write!(f, "{}{w}", if i > 0 { "," } else { "" })?;
                }
                write!(f, ")")
            }
            PoJaDescriptor::Product(_) => {
                write!(f, "(")?;
                for (i, c) in self.components().iter().enumerate() {
                    write!(f, "{}{c}", if i > 0 { ", " } else { "" })?;
                }
                write!(f, ")")
            }
            PoJaDescriptor::DualExt(_) => unreachable!(),
        }
    }
}

/// A linear operator on V as an explicit coordinate matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct LinOp {
    desc: PoJaDescriptor,
    m: Mat<RingElem>,
}

impl LinOp {
    pub fn identity(desc: &PoJaDescriptor) -> LinOp {
        let d = desc.concrete().expect("validated");
        LinOp {
            m: Mat::identity(d.dim(), &d.ring().one()),
            desc: d,
        }
    }

    pub fn zero(desc: &PoJaDescriptor) -> LinOp {
        let d = desc.concrete().expect("validated");
        LinOp {
            m: Mat::zeros(d.dim(), d.dim(), &d.ring().zero()),
            desc: d,
        }
    }

    pub fn matrix(&self) -> &Mat<RingElem> {
        &self.m
    }

    pub fn apply(&self, x: &JElem) -> JElem {
        debug_assert_eq!(self.desc, x.desc);
        JElem {
            desc: self.desc.clone(),
            c: self.m.apply(&x.c),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &LinOp) -> LinOp {
        LinOp {
            desc: self.desc.clone(),
            m: self.m.mul(&other.m),
        }
    }

    pub fn add(&self, o: &LinOp) -> LinOp {
        LinOp {
            desc: self.desc.clone(),
            m: self.m.add(&o.m),
        }
    }

    pub fn sub(&self, o: &LinOp) -> LinOp {
        LinOp {
            desc: self.desc.clone(),
            m: self.m.sub(&o.m),
        }
    }

    pub fn scale(&self, r: &Rational) -> LinOp {
        LinOp {
            desc: self.desc.clone(),
            m: self.m.map(|x| x.scale(r)),
        }
    }

    pub fn is_invertible(&self) -> bool {
        linalg::is_invertible(&self.m)
    }

    pub fn is_identity(&self) -> bool {
        *self == LinOp::identity(&self.desc)
    }
}

pub fn jbullet(a: &JElem, b: &JElem) -> Result<JElem> {
    a.same_algebra(b)?;
    Ok(a.jbullet(b))
}

/// The quadratic operator `Q_a = 2L_a² − L_{a²}`.
pub fn jquad(a: &JElem) -> LinOp {
    let l = a.lmul();
    l.compose(&l).scale(&rat(2, 1)).sub(&a.square().lmul())
}

/// The operator `b ↦ D_{a,x}(b) = (Q_{a+b} − Q_a − Q_b)(x)`, built column by
/// column from the polarization identity.
pub fn jdop(a: &JElem, x: &JElem) -> Result<LinOp> {
    a.same_algebra(x)?;
    let d = a.desc.dim();
    let qa_x = a.quad_apply(x);
    let cols: Vec<JElem> = (0..d)
        .map(|k| {
            let b = a.desc.basis(k);
            a.add(&b).quad_apply(x).sub(&qa_x).sub(&b.quad_apply(x))
        })
        .collect();
    Ok(LinOp {
        desc: a.desc.clone(),
        m: Mat::from_fn(d, d, |i, j| cols[j].c[i].clone()),
    })
}

/// The Jordan triple product `{a x b} = 2(a•(b•x) + b•(a•x) − (a•b)•x)`.
pub fn triple(a: &JElem, x: &JElem, b: &JElem) -> JElem {
    let t = a
        .jbullet(&b.jbullet(x))
        .add(&b.jbullet(&a.jbullet(x)))
        .sub(&a.jbullet(b).jbullet(x));
    t.scale(&rat(2, 1))
}

/// `a⁻¹ := Q_a⁻¹(a)`, by an exact linear solve of `Q_a z = a`.
pub fn jinverse(a: &JElem) -> Result<JElem> {
    let q = jquad(a);
    let rhs = Mat {
        rows: a.c.len(),
        cols: 1,
        data: a.c.clone(),
    };
    let z = linalg::solve(&q.m, &rhs).ok_or(Error::NotInvertible)?;
    let z = JElem {
        desc: a.desc.clone(),
        c: z.data,
    };
    if q.apply(&z) != *a {
        return Err(Error::InternalInvariantViolation(
            "Q_a(a⁻¹) ≠ a after solve".into(),
        ));
    }
    Ok(z)
}

pub fn cone_contains(a: &JElem) -> Result<bool> {
    a.in_cone()
}

/// The point symmetry `s_x(y) = Q_x(y⁻¹)`.
pub fn jsym(x: &JElem, y: &JElem) -> Result<JElem> {
    x.same_algebra(y)?;
    if !x.is_invertible() {
        return Err(Error::NotInvertible);
    }
    Ok(x.quad_apply(&y.inverse()?))
}

/// `a·x·a` by matrix products; the associative model of `Q_a` on `Sym`.
pub fn sym_sandwich(a: &JElem, x: &JElem) -> Option<JElem> {
    let am = a.sym_matrix()?;
    let xm = x.sym_matrix()?;
    sym_from_mat(&a.desc, &am.mul(&xm).mul(&am)).ok()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::sample::SampleSpec;

    fn q() -> RingDescriptor {
        RingDescriptor::Q
    }

    fn sym2(rows: [[i64; 2]; 2]) -> JElem {
        PoJaDescriptor::sym(2, q())
            .sym_from_rows(
                &rows
                    .iter()
                    .map(|r| r.iter().map(|&x| int(x)).collect())
                    .collect::<Vec<_>>(),
            )
            .unwrap()
    }

    fn spin(c: &[i64]) -> JElem {
        PoJaDescriptor::spin(c.len() - 1, q())
            .from_rationals(&c.iter().map(|&x| int(x)).collect::<Vec<_>>())
            .unwrap()
    }

    #[test]
    fn product_of_positives_leaves_the_cone() {
        let a = sym2([[2, 1], [1, 1]]);
        let b = sym2([[1, 0], [0, 9]]);
        assert!(a.in_cone().unwrap() && b.in_cone().unwrap());
        let ab = jbullet(&a, &b).unwrap();
        assert_eq!(ab, sym2([[2, 5], [5, 9]]));
        assert_eq!(ab.scale(&int(2)), sym2([[4, 10], [10, 18]]));
        assert!(!ab.scale(&int(2)).in_cone().unwrap());
    }

    #[test]
    fn spin_product() {
        assert_eq!(spin(&[2, 1, 0]).square(), spin(&[5, 4, 0]));
    }

    #[test]
    fn unit_laws() {
        let d = PoJaDescriptor::sym(3, q());
        let mut s = SampleSpec::new(1, 1).sampler(0);
        for _ in 0..10 {
            let a = d.sample(&mut s);
            assert_eq!(d.unit().jbullet(&a), a);
        }
        assert!(jquad(&d.unit()).is_identity());
    }

    #[test]
    fn quad_examples() {
        let d = PoJaDescriptor::scalar(q());
        let three = d.from_rationals(&[int(3)]).unwrap();
        assert_eq!(
            jquad(&three).apply(&d.from_rationals(&[int(5)]).unwrap()),
            d.from_rationals(&[int(45)]).unwrap()
        );
        let a = sym2([[2, 1], [1, 1]]);
        let i = PoJaDescriptor::sym(2, q()).unit();
        assert_eq!(jquad(&a).apply(&i), sym2([[5, 3], [3, 2]]));
        // independent route: the matrix product A·I·A
        assert_eq!(sym_sandwich(&a, &i).unwrap(), sym2([[5, 3], [3, 2]]));
    }

    #[test]
    fn dop_examples() {
        let d = PoJaDescriptor::scalar(q());
        let e = |x| d.from_rationals(&[int(x)]).unwrap();
        assert_eq!(jdop(&e(2), &e(3)).unwrap().apply(&e(5)), e(60));
        assert_eq!(triple(&e(2), &e(3), &e(5)), e(60));
        let s = PoJaDescriptor::sym(2, q());
        let mut smp = SampleSpec::new(4, 1).sampler(0);
        let b = s.sample(&mut smp);
        assert_eq!(
            jdop(&s.unit(), &s.unit()).unwrap().apply(&b),
            b.scale(&int(2))
        );
        assert_eq!(jdop(&s.zero(), &b).unwrap(), LinOp::zero(&s));
    }

    #[test]
    fn inverse_examples() {
        let s = PoJaDescriptor::sym(2, q());
        assert_eq!(jinverse(&s.unit()).unwrap(), s.unit());
        let a = sym2([[2, 1], [1, 1]]);
        assert_eq!(jinverse(&a).unwrap(), sym2([[1, -1], [-1, 2]]));
        assert_eq!(a.inverse().unwrap(), sym2([[1, -1], [-1, 2]]));
        assert_eq!(jinverse(&spin(&[1, 1, 0])), Err(Error::NotInvertible));
        assert!(!jquad(&spin(&[1, 1, 0])).is_invertible());
        assert_eq!(jinverse(&s.zero()), Err(Error::NotInvertible));
    }

    #[test]
    fn cone_examples() {
        assert!(PoJaDescriptor::sym(2, q()).unit().in_cone().unwrap());
        assert!(spin(&[2, 1, 0]).in_cone().unwrap());
        assert!(!spin(&[1, 1, 0]).in_cone().unwrap());
        assert!(!spin(&[-2, 1, 0]).in_cone().unwrap());
        let g = PoJaDescriptor::sym(2, RingDescriptor::GaussQ);
        assert!(matches!(g.unit().in_cone(), Err(Error::NoOrder(_))));
    }

    #[test]
    fn symmetry_examples() {
        let d = PoJaDescriptor::scalar(q());
        let e = |x| d.from_rationals(&[int(x)]).unwrap();
        assert_eq!(jsym(&e(2), &e(1)).unwrap(), e(4));
        let s = PoJaDescriptor::sym(2, q());
        let mut smp = SampleSpec::new(9, 1).sampler(0);
        for _ in 0..10 {
            let x = s.sample_invertible(&mut smp);
            assert_eq!(jsym(&x, &x).unwrap(), x);
            assert_eq!(jsym(&s.unit(), &x).unwrap(), x.inverse().unwrap());
        }
    }

    #[test]
    fn dual_ext_is_the_eps_extended_algebra() {
        let base = PoJaDescriptor::sym(2, q());
        let t = PoJaDescriptor::dual_ext(base.clone());
        assert_eq!(
            t.concrete().unwrap(),
            PoJaDescriptor::sym(2, RingDescriptor::DualQ)
        );
        let mut smp = SampleSpec::new(2, 1).sampler(0);
        for _ in 0..50 {
            let (x, u) = (base.sample(&mut smp), base.sample(&mut smp));
            let lifted = JElem::dual_lift(&x, &u).unwrap();
            assert_eq!(lifted.dual_split().unwrap(), (x.clone(), u));
            // cone of the tangent algebra: base part in the base cone
            assert_eq!(lifted.in_cone().unwrap(), x.in_cone().unwrap());
        }
    }

    #[test]
    fn sym_json_accepts_full_matrix() {
        let v = json!({ "descriptor": { "Sym": { "n": 2, "ring": "Q" } }, "coordinates": [["2","1"],["1","1"]] });
        assert_eq!(JElem::from_json(&v).unwrap(), sym2([[2, 1], [1, 1]]));
        let bad = json!({ "descriptor": { "Sym": { "n": 2, "ring": "Q" } }, "coordinates": [["2","1"],["0","1"]] });
        assert!(JElem::from_json(&bad).is_err());
        let a = sym2([[2, 1], [1, 1]]);
        assert_eq!(JElem::from_json(&a.to_json()).unwrap(), a);
    }

    #[test]
    fn validation() {
        assert!(PoJaDescriptor::sym(7, q()).validate().is_err());
        assert!(PoJaDescriptor::scalar(RingDescriptor::ZInt)
            .validate()
            .is_err());
        assert!(PoJaDescriptor::product(vec![
            PoJaDescriptor::scalar(q()),
            PoJaDescriptor::scalar(RingDescriptor::DualQ)
        ])
        .validate()
        .is_err());
        assert!(
            PoJaDescriptor::dual_ext(PoJaDescriptor::dual_ext(PoJaDescriptor::scalar(q())))
                .validate()
                .is_err()
        );
    }
}
