//! Univariate polynomials over ℚ: Sturm sequences and characteristic
//! polynomials.

use num_traits::{One, Signed, Zero};

use crate::linalg::Mat;
use crate::rational::Rational;

/// Coefficients from the constant term up; no trailing zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Poly {
    c: Vec<Rational>,
}

impl Poly {
    pub fn new(mut c: Vec<Rational>) -> Poly {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        Poly { c }
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.c
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.c
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, a| acc * x + a)
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, a)| a * Rational::from_integer(k.into()))
                .collect(),
        )
    }

    pub fn neg(&self) -> Poly {
        Poly {
            c: self.c.iter().map(|a| -a).collect(),
        }
    }

    /// Remainder of division by a nonzero `d`.
    pub fn rem(&self, d: &Poly) -> Poly {
        let dd = d.degree().expect("division by zero polynomial");
        let lead = d.c[dd].clone();
        let mut r = self.c.clone();
        while r.len() > dd && !r.is_empty() {
            let k = r.len() - 1;
            let f = &r[k] / &lead;
            for (i, b) in d.c.iter().enumerate() {
                let idx = k - dd + i;
                r[idx] = &r[idx] - &f * b;
            }
            r.pop();
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
        }
        Poly::new(r)
    }

    fn sign_at_pos_infinity(&self) -> i32 {
        self.c
            .last()
            .map_or(0, |a| if a.is_positive() { 1 } else { -1 })
    }

    fn sign_at_neg_infinity(&self) -> i32 {
        match self.degree() {
            None => 0,
            Some(d) => {
                let s = self.sign_at_pos_infinity();
                if d % 2 == 0 {
                    s
                } else {
                    -s
                }
            }
        }
    }
}

/// `p, p′, −rem(p, p′), …` down to the last nonzero remainder.
pub fn sturm_sequence(p: &Poly) -> Vec<Poly> {
    let mut seq = vec![p.clone()];
    if p.is_zero() {
        return seq;
    }
    let mut next = p.derivative();
    while !next.is_zero() {
        let r = seq.last().expect("nonempty").rem(&next).neg();
        seq.push(next);
        next = r;
    }
    seq
}

fn sign_changes(signs: impl Iterator<Item = i32>) -> usize {
    let mut last = 0;
    let mut n = 0;
    for s in signs.filter(|&s| s != 0) {
        if last != 0 && s != last {
            n += 1;
        }
        last = s;
    }
    n
}

fn sign(r: &Rational) -> i32 {
    if r.is_positive() {
        1
    } else if r.is_negative() {
        -1
    } else {
        0
    }
}

/// Distinct real roots in the half-open interval `(lo, hi]`.
pub fn count_roots_in(seq: &[Poly], lo: &Rational, hi: &Rational) -> usize {
    let v = |x: &Rational| sign_changes(seq.iter().map(|p| sign(&p.eval(x))));
    v(lo).saturating_sub(v(hi))
}

pub fn count_real_roots(seq: &[Poly]) -> usize {
    let lo = sign_changes(seq.iter().map(Poly::sign_at_neg_infinity));
    let hi = sign_changes(seq.iter().map(Poly::sign_at_pos_infinity));
    lo.saturating_sub(hi)
}

/// `det(λ I − A)` by the Faddeev–LeVerrier recursion.
pub fn charpoly(a: &Mat<Rational>) -> Poly {
    assert!(a.is_square());
    let n = a.rows;
    let mut c = vec![Rational::zero(); n + 1];
    c[n] = Rational::one();
    let id = Mat::identity(n, &Rational::one());
    let mut m = Mat::zeros(n, n, &Rational::zero());
    for k in 1..=n {
        m = a.mul(&m).add(&id.map(|x| x * &c[n - k + 1]));
        let am = a.mul(&m);
        let tr = (0..n).fold(Rational::zero(), |acc, i| acc + am.at(i, i));
        c[n - k] = -tr / Rational::from_integer(k.into());
    }
    Poly::new(c)
}

/// For a polynomial with only real roots: all roots lie in the open
/// interval `(lo, hi)`.
pub fn real_roots_inside(p: &Poly, lo: &Rational, hi: &Rational) -> bool {
    if p.eval(lo).is_zero() || p.eval(hi).is_zero() {
        return false;
    }
    let seq = sturm_sequence(p);
    count_roots_in(&seq, lo, hi) == count_real_roots(&seq)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::det_rational;
    use crate::rational::{int, rat};

    fn p(c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| int(x)).collect())
    }

    #[test]
    fn sturm_counts() {
        // (x − 1)(x + 1)(x − 3)
        let q = p(&[3, -1, -3, 1]);
        let s = sturm_sequence(&q);
        assert_eq!(count_real_roots(&s), 3);
        assert_eq!(count_roots_in(&s, &int(-2), &int(2)), 2);
        assert_eq!(count_roots_in(&s, &rat(-1, 2), &rat(1, 2)), 0);
        // (x − 1)² counts once
        assert_eq!(count_real_roots(&sturm_sequence(&p(&[1, -2, 1]))), 1);
        assert_eq!(count_real_roots(&sturm_sequence(&p(&[1, 0, 1]))), 0);
    }

    #[test]
    fn charpoly_matches_determinants() {
        let a = Mat::from_rows(vec![
            vec![int(2), rat(1, 2), int(0)],
            vec![rat(1, 2), int(-1), int(3)],
            vec![int(0), int(3), rat(1, 3)],
        ]);
        let cp = charpoly(&a);
        assert_eq!(cp.degree(), Some(3));
        for l in [-3, -1, 0, 2, 5] {
            let m = Mat::from_fn(3, 3, |i, j| {
                if i == j {
                    int(l) - a.at(i, j)
                } else {
                    -a.at(i, j).clone()
                }
            });
            assert_eq!(cp.eval(&int(l)), det_rational(&m));
        }
    }

    #[test]
    fn swap_matrix_has_roots_on_the_boundary() {
        let a = Mat::from_rows(vec![vec![int(0), int(1)], vec![int(1), int(0)]]);
        assert!(!real_roots_inside(&charpoly(&a), &int(-1), &int(1)));
        let d = Mat::from_rows(vec![vec![rat(1, 2), int(0)], vec![int(0), rat(-3, 4)]]);
        assert!(real_roots_inside(&charpoly(&d), &int(-1), &int(1)));
    }
}
