//! Dense matrices over exact rings.
//!
//! Elimination uses unit pivots, which is complete for local rings (ℚ, ℚ[ε],
//! ℚ[i], ℚ[ε][i]): a square matrix is invertible iff every column offers a
//! unit pivot. Product rings are split into their factors first.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::rational::Rational;
use crate::ring::{RingDescriptor, RingElem};

pub trait Scalar: Clone + PartialEq + std::fmt::Debug {
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    fn is_zero(&self) -> bool;
    fn is_unit(&self) -> bool;
    fn inv(&self) -> Option<Self>;
}

impl Scalar for Rational {
    fn zero_like(&self) -> Self {
        Rational::zero()
    }
    fn one_like(&self) -> Self {
        Rational::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        !Zero::is_zero(self)
    }
    fn inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Scalar for BigInt {
    fn zero_like(&self) -> Self {
        BigInt::zero()
    }
    fn one_like(&self) -> Self {
        BigInt::one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        self.magnitude().is_one()
    }
    fn inv(&self) -> Option<Self> {
        self.magnitude().is_one().then(|| self.clone())
    }
}

impl Scalar for RingElem {
    fn zero_like(&self) -> Self {
        self.ring().zero()
    }
    fn one_like(&self) -> Self {
        self.ring().one()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn is_zero(&self) -> bool {
        RingElem::is_zero(self)
    }
    fn is_unit(&self) -> bool {
        RingElem::is_unit(self)
    }
    fn inv(&self) -> Option<Self> {
        self.inverse().ok()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Mat<T> {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<T>,
}

impl<T: Scalar> Mat<T> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Mat { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        Mat {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize, one: &T) -> Self {
        let zero = one.zero_like();
        Mat::from_fn(n, n, |i, j| if i == j { one.clone() } else { zero.clone() })
    }

    pub fn zeros(rows: usize, cols: usize, zero: &T) -> Self {
        Mat {
            rows,
            cols,
            data: vec![zero.zero_like(); rows * cols],
        }
    }

    pub fn at(&self, i: usize, j: usize) -> &T {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: T) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<T> {
        (0..self.rows).map(|i| self.at(i, j).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        Mat::from_fn(self.cols, self.rows, |i, j| self.at(j, i).clone())
    }

    pub fn mul(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!(self.cols, o.rows, "dimension mismatch");
        let zero = self.data.first().or(o.data.first()).map(|z| z.zero_like());
        Mat::from_fn(self.rows, o.cols, |i, j| {
            let mut acc = zero.clone().expect("non-empty");
            for k in 0..self.cols {
                let a = self.at(i, k);
                if !a.is_zero() {
                    acc = acc.add(&a.mul(o.at(k, j)));
                }
            }
            acc
        })
    }

    pub fn apply(&self, v: &[T]) -> Vec<T> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = v[0].zero_like();
                for (a, x) in self.row(i).iter().zip(v) {
                    if !a.is_zero() {
                        acc = acc.add(&a.mul(x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    pub fn sub(&self, o: &Mat<T>) -> Mat<T> {
        assert_eq!((self.rows, self.cols), (o.rows, o.cols));
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&o.data)
                .map(|(a, b)| a.sub(b))
                .collect(),
        }
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Mat<T> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Leading principal `k × k` block.
    pub fn leading(&self, k: usize) -> Mat<T> {
        Mat::from_fn(k, k, |i, j| self.at(i, j).clone())
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Mat<T> {
        Mat::from_fn(rows, cols, |i, j| self.at(r0 + i, c0 + j).clone())
    }
}

/// Solves `A X = B` for square `A` over a local ring; `None` when `A` is
/// not invertible.
pub fn solve_local<T: Scalar>(a: &Mat<T>, b: &Mat<T>) -> Option<Mat<T>> {
    assert!(a.is_square() && a.rows == b.rows);
    let n = a.rows;
    let m = b.cols;
    let mut rows: Vec<Vec<T>> = (0..n)
        .map(|i| a.row(i).iter().chain(b.row(i)).cloned().collect())
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| rows[r][col].is_unit())?;
        rows.swap(col, piv);
        let inv = rows[col][col].inv()?;
        for x in rows[col].iter_mut() {
            *x = x.mul(&inv);
        }
        let pivot_row = rows[col].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == col || row[col].is_zero() {
                continue;
            }
            let f = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row) {
                if !p.is_zero() {
                    *x = x.sub(&f.mul(p));
                }
            }
        }
    }
    Some(Mat::from_fn(n, m, |i, j| rows[i][n + j].clone()))
}

pub fn is_invertible_local<T: Scalar>(a: &Mat<T>) -> bool {
    assert!(a.is_square());
    let n = a.rows;
    let mut rows: Vec<Vec<T>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| rows[r][col].is_unit()) else {
            return false;
        };
        rows.swap(col, piv);
        let inv = rows[col][col].inv().expect("unit");
        let pivot_row = rows[col].clone();
        for row in rows.iter_mut().skip(col + 1) {
            if row[col].is_zero() {
                continue;
            }
            let f = row[col].mul(&inv);
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x = x.sub(&f.mul(p));
            }
        }
    }
    true
}

/// Division-free determinant by cofactor expansion over column subsets,
/// valid over any commutative ring. Cost O(n·2ⁿ); meant for n ≤ 12.
pub fn det<T: Scalar>(a: &Mat<T>) -> T {
    assert!(a.is_square());
    let n = a.rows;
    assert!(n <= 16, "det: matrix too large for subset expansion");
    if n == 0 {
        panic!("det of empty matrix");
    }
    let zero = a.data[0].zero_like();
    // minor[mask] = det of rows (n - |mask|).. with columns in mask
    let mut minor: Vec<Option<T>> = vec![None; 1 << n];
    minor[0] = Some(a.data[0].one_like());
    for mask in 1usize..(1 << n) {
        let k = mask.count_ones() as usize;
        let row = n - k;
        let mut acc = zero.clone();
        let mut sign_pos = true;
        for j in 0..n {
            if mask & (1 << j) == 0 {
                continue;
            }
            let entry = a.at(row, j);
            if !entry.is_zero() {
                let sub = minor[mask & !(1 << j)].as_ref().expect("filled");
                let term = entry.mul(sub);
                acc = if sign_pos {
                    acc.add(&term)
                } else {
                    acc.sub(&term)
                };
            }
            sign_pos = !sign_pos;
        }
        minor[mask] = Some(acc);
    }
    minor[(1 << n) - 1].take().expect("filled")
}

/// Determinant over ℚ by fraction-carrying elimination.
pub fn det_rational(a: &Mat<Rational>) -> Rational {
    assert!(a.is_square());
    let n = a.rows;
    let mut rows: Vec<Vec<Rational>> = (0..n).map(|i| a.row(i).to_vec()).collect();
    let mut d = Rational::one();
    for col in 0..n {
        let Some(piv) = (col..n).find(|&r| !num_traits::Zero::is_zero(&rows[r][col])) else {
            return Rational::zero();
        };
        if piv != col {
            rows.swap(col, piv);
            d = -d;
        }
        let p = rows[col][col].clone();
        d *= &p;
        let pivot_row = rows[col].clone();
        for row in rows.iter_mut().skip(col + 1) {
            if num_traits::Zero::is_zero(&row[col]) {
                continue;
            }
            let f = &row[col] / &p;
            for (x, q) in row.iter_mut().zip(&pivot_row).skip(col) {
                *x -= &f * q;
            }
        }
    }
    d
}

/// Reduced row echelon form over ℚ; returns the form and its rank.
pub fn rref(a: &Mat<Rational>) -> (Mat<Rational>, usize) {
    let mut m = a.clone();
    let mut r = 0;
    for c in 0..m.cols {
        if r == m.rows {
            break;
        }
        let Some(piv) = (r..m.rows).find(|&i| !num_traits::Zero::is_zero(m.at(i, c))) else {
            continue;
        };
        for j in 0..m.cols {
            m.data.swap(r * m.cols + j, piv * m.cols + j);
        }
        let inv = m.at(r, c).recip();
        for j in 0..m.cols {
            let v = m.at(r, j) * &inv;
            m.set(r, j, v);
        }
        for i in 0..m.rows {
            if i == r || num_traits::Zero::is_zero(m.at(i, c)) {
                continue;
            }
            let f = m.at(i, c).clone();
            for j in 0..m.cols {
                let v = m.at(i, j) - &f * m.at(r, j);
                m.set(i, j, v);
            }
        }
        r += 1;
    }
    (m, r)
}

/// Scales a rational matrix by the least common denominator of its
/// entries, giving an integer matrix with the same row space and the same
/// sign pattern of minors.
pub fn clear_denominators(a: &Mat<Rational>) -> (Mat<BigInt>, BigInt) {
    let mut l = BigInt::one();
    for x in &a.data {
        if !x.denom().is_one() {
            l = l.lcm(x.denom());
        }
    }
    let data = a
        .data
        .iter()
        .map(|x| x.numer() * (&l / x.denom()))
        .collect();
    (
        Mat {
            rows: a.rows,
            cols: a.cols,
            data,
        },
        l,
    )
}

/// Leading principal minors of an integer matrix by Bareiss elimination
/// without row exchanges. Stops after the first zero minor, so the result
/// may be shorter than `n`.
pub fn leading_minors_int(a: &Mat<BigInt>) -> Vec<BigInt> {
    assert!(a.is_square());
    let n = a.rows;
    let mut m = a.data.clone();
    let mut prev = BigInt::one();
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let p = m[k * n + k].clone();
        out.push(p.clone());
        if Zero::is_zero(&p) {
            break;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&p * &m[i * n + j] - &m[i * n + k] * &m[k * n + j]) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = p;
    }
    out
}

/// Fraction-free Gauss–Jordan over ℤ. Returns `(d, X)` with `A·X = d·I`
/// and `d = ±det A`, or `None` when `A` is singular.
pub fn adjugate_int(a: &Mat<BigInt>) -> Option<(BigInt, Mat<BigInt>)> {
    assert!(a.is_square());
    let n = a.rows;
    let w = 2 * n;
    let mut m: Vec<BigInt> = Vec::with_capacity(n * w);
    for i in 0..n {
        m.extend(a.row(i).iter().cloned());
        m.extend((0..n).map(|j| {
            if i == j {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }));
    }
    let mut prev = BigInt::one();
    for k in 0..n {
        let piv = (k..n).find(|&r| !Zero::is_zero(&m[r * w + k]))?;
        if piv != k {
            for j in 0..w {
                m.swap(piv * w + j, k * w + j);
            }
        }
        let p = m[k * w + k].clone();
        for i in 0..n {
            if i == k {
                continue;
            }
            let f = m[i * w + k].clone();
            for j in 0..w {
                if j == k {
                    continue;
                }
                let v = (&p * &m[i * w + j] - &f * &m[k * w + j]) / &prev;
                m[i * w + j] = v;
            }
            m[i * w + k] = BigInt::zero();
        }
        prev = p;
    }
    let x = Mat::from_fn(n, n, |i, j| m[i * w + n + j].clone());
    Some((prev, x))
}

/// Determinant of an integer matrix (Bareiss with row exchanges).
pub fn det_int(a: &Mat<BigInt>) -> BigInt {
    assert!(a.is_square());
    let n = a.rows;
    let mut m = a.data.clone();
    let mut prev = BigInt::one();
    let mut neg = false;
    for k in 0..n {
        let Some(piv) = (k..n).find(|&r| !Zero::is_zero(&m[r * n + k])) else {
            return BigInt::zero();
        };
        if piv != k {
            for j in 0..n {
                m.swap(piv * n + j, k * n + j);
            }
            neg = !neg;
        }
        let p = m[k * n + k].clone();
        for i in k + 1..n {
            for j in k + 1..n {
                let v = (&p * &m[i * n + j] - &m[i * n + k] * &m[k * n + j]) / &prev;
                m[i * n + j] = v;
            }
        }
        prev = p;
    }
    if neg {
        -prev
    } else {
        prev
    }
}

/// Inverse over ℚ through [`adjugate_int`].
pub fn inverse_rational(a: &Mat<Rational>) -> Option<Mat<Rational>> {
    let (m, l) = clear_denominators(a);
    let (d, x) = adjugate_int(&m)?;
    // (l·A)·X = d·I, so A⁻¹ = l·X / d
    Some(x.map_to(|v| Rational::new(v * &l, d.clone())))
}

/// True when every leading principal minor of a rational matrix is positive.
pub fn leading_minors_positive(a: &Mat<Rational>) -> bool {
    let (m, _) = clear_denominators(a);
    let minors = leading_minors_int(&m);
    minors.len() == a.rows && minors.iter().all(|d| d.is_positive())
}

pub fn is_invertible_rational(a: &Mat<Rational>) -> bool {
    !Zero::is_zero(&det_int(&clear_denominators(a).0))
}

fn split(a: &Mat<RingElem>, factors: usize) -> Vec<Mat<RingElem>> {
    let parts: Vec<Vec<RingElem>> = a.data.iter().map(|e| e.factors()).collect();
    (0..factors)
        .map(|f| Mat {
            rows: a.rows,
            cols: a.cols,
            data: parts.iter().map(|p| p[f].clone()).collect(),
        })
        .collect()
}

fn join(ring: &RingDescriptor, parts: Vec<Mat<RingElem>>) -> Mat<RingElem> {
    let (rows, cols) = (parts[0].rows, parts[0].cols);
    let data = (0..rows * cols)
        .map(|k| RingElem::from_factors(ring, parts.iter().map(|p| p.data[k].clone()).collect()))
        .collect();
    Mat { rows, cols, data }
}

fn ring_of(a: &Mat<RingElem>) -> RingDescriptor {
    a.data.first().expect("non-empty matrix").ring().clone()
}

/// Solves `A X = B` over any supported ring, splitting product rings.
pub fn solve(a: &Mat<RingElem>, b: &Mat<RingElem>) -> Option<Mat<RingElem>> {
    let ring = ring_of(a);
    if let RingDescriptor::Product(fs) = &ring {
        let aa = split(a, fs.len());
        let bb = split(b, fs.len());
        let mut out = Vec::with_capacity(fs.len());
        for (x, y) in aa.iter().zip(&bb) {
            out.push(solve(x, y)?);
        }
        return Some(join(&ring, out));
    }
    solve_local(a, b)
}

pub fn is_invertible(a: &Mat<RingElem>) -> bool {
    let ring = ring_of(a);
    if let RingDescriptor::Product(fs) = &ring {
        return split(a, fs.len()).iter().all(is_invertible);
    }
    is_invertible_local(a)
}

pub fn to_ring(a: &Mat<Rational>, ring: &RingDescriptor) -> Mat<RingElem> {
    a.map_to(|r| ring.from_rational(r).expect("ring contains ℚ"))
}

impl<T> Mat<T> {
    pub fn map_to<U>(&self, f: impl Fn(&T) -> U) -> Mat<U> {
        Mat {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, rat};

    fn q(rows: &[&[i64]]) -> Mat<Rational> {
        Mat::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| int(x)).collect())
                .collect(),
        )
    }

    #[test]
    fn determinants_agree() {
        let a = q(&[&[2, 1, 0], &[1, 3, -1], &[0, -1, 4]]);
        assert_eq!(det(&a), int(18));
        assert_eq!(det_rational(&a), int(18));
        let s = q(&[&[1, 2], &[2, 4]]);
        assert_eq!(det(&s), int(0));
        assert!(!is_invertible_local(&s));
    }

    #[test]
    fn integer_routes_match_rational_elimination() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for trial in 0..300 {
            let n = 1 + trial % 5;
            let a = Mat::from_fn(n, n, |_, _| {
                if rng.random_range(0..4) == 0 {
                    int(0)
                } else {
                    rat(rng.random_range(-9..10), rng.random_range(1..7))
                }
            });
            let d = det_rational(&a);
            assert_eq!(Zero::is_zero(&d), !is_invertible_rational(&a));
            let (m, l) = clear_denominators(&a);
            assert_eq!(
                Rational::from_integer(det_int(&m)),
                &d * Rational::from_integer(l.pow(n as u32))
            );
            match inverse_rational(&a) {
                Some(inv) => assert_eq!(a.mul(&inv), Mat::identity(n, &int(1))),
                None => assert!(Zero::is_zero(&d)),
            }
            let sylvester = (1..=n).all(|k| det_rational(&a.leading(k)).is_positive());
            assert_eq!(leading_minors_positive(&a), sylvester);
        }
    }

    #[test]
    fn solve_inverse() {
        let a = q(&[&[2, 1], &[1, 1]]);
        let inv = solve_local(&a, &Mat::identity(2, &int(1))).unwrap();
        assert_eq!(inv, q(&[&[1, -1], &[-1, 2]]));
    }

    #[test]
    fn dual_matrix_invertibility_reads_the_residue() {
        let r = RingDescriptor::DualQ;
        let e = |a: i64, b: i64| r.from_coords(vec![int(a), int(b)]).unwrap();
        // [[ε, 1], [1, 0]] is invertible; [[ε, 0], [0, 1]] is not
        let m1 = Mat::from_rows(vec![vec![e(0, 1), e(1, 0)], vec![e(1, 0), e(0, 0)]]);
        let m2 = Mat::from_rows(vec![vec![e(0, 1), e(0, 0)], vec![e(0, 0), e(1, 0)]]);
        assert!(is_invertible(&m1));
        assert!(!is_invertible(&m2));
        let inv = solve(&m1, &Mat::identity(2, &r.one())).unwrap();
        assert_eq!(m1.mul(&inv), Mat::identity(2, &r.one()));
        assert_eq!(det(&m2), e(0, 1));
    }

    #[test]
    fn product_ring_solve() {
        let r = RingDescriptor::product(vec![RingDescriptor::Q, RingDescriptor::Q]).unwrap();
        let e = |a: i64, b: i64| r.from_coords(vec![int(a), int(b)]).unwrap();
        let m = Mat::from_rows(vec![vec![e(2, 0), e(1, 1)], vec![e(1, 1), e(1, 3)]]);
        // component 0: [[2,1],[1,1]] invertible, component 1: [[0,1],[1,3]] invertible
        let inv = solve(&m, &Mat::identity(2, &r.one())).unwrap();
        assert_eq!(m.mul(&inv), Mat::identity(2, &r.one()));
        let sing = Mat::from_rows(vec![vec![e(2, 0), e(1, 0)], vec![e(1, 1), e(1, 3)]]);
        assert!(!is_invertible(&sing));
    }

    #[test]
    fn rref_rank() {
        let a = Mat::from_rows(vec![
            vec![int(1), int(2), rat(1, 2)],
            vec![int(2), int(4), int(1)],
            vec![int(0), int(1), int(1)],
        ]);
        let (r, rank) = rref(&a);
        assert_eq!(rank, 2);
        assert_eq!(r.row(0), &[int(1), int(0), rat(-3, 2)]);
    }
}
