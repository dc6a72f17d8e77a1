//! Dense linear algebra over Q and Q(x).

use alloc::vec;
use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::scalar::{Rational, XRat};

pub trait Field: Clone + PartialEq {
    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn div(&self, o: &Self) -> Self;
    fn neg(&self) -> Self;
    /// Pivot preference; smaller is better.
    fn weight(&self) -> usize {
        0
    }
}

impl Field for Rational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
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
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.numer().bits() as usize + self.denom().bits() as usize
    }
}

impl Field for XRat {
    fn zero() -> Self {
        XRat::zero()
    }
    fn one() -> Self {
        XRat::one()
    }
    fn is_zero(&self) -> bool {
        XRat::is_zero(self)
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
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn neg(&self) -> Self {
        -self
    }
    fn weight(&self) -> usize {
        self.num().degree().unwrap_or(0) + self.den().degree().unwrap_or(0)
    }
}

pub type Matrix<F> = Vec<Vec<F>>;

pub fn identity<F: Field>(n: usize) -> Matrix<F> {
    (0..n).map(|i| (0..n).map(|j| if i == j { F::one() } else { F::zero() }).collect()).collect()
}

pub fn mat_mul<F: Field>(a: &Matrix<F>, b: &Matrix<F>) -> Matrix<F> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut acc = F::zero();
                    for k in 0..inner {
                        if !row[k].is_zero() && !b[k][j].is_zero() {
                            acc = acc.add(&row[k].mul(&b[k][j]));
                        }
                    }
                    acc
                })
                .collect()
        })
        .collect()
}

pub fn mat_vec<F: Field>(a: &Matrix<F>, v: &[F]) -> Vec<F> {
    a.iter()
        .map(|row| {
            let mut acc = F::zero();
            for (x, y) in row.iter().zip(v) {
                if !x.is_zero() && !y.is_zero() {
                    acc = acc.add(&x.mul(y));
                }
            }
            acc
        })
        .collect()
}

/// Row vector times matrix.
pub fn vec_mat<F: Field>(v: &[F], a: &Matrix<F>) -> Vec<F> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols)
        .map(|j| {
            let mut acc = F::zero();
            for (k, x) in v.iter().enumerate() {
                if !x.is_zero() && !a[k][j].is_zero() {
                    acc = acc.add(&x.mul(&a[k][j]));
                }
            }
            acc
        })
        .collect()
}

pub fn transpose<F: Field>(a: &Matrix<F>) -> Matrix<F> {
    let cols = a.first().map_or(0, Vec::len);
    (0..cols).map(|j| a.iter().map(|row| row[j].clone()).collect()).collect()
}

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref<F: Field>(m: &mut Matrix<F>) -> Vec<usize> {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(pr) = (r..rows).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].weight())
        else {
            continue;
        };
        m.swap(r, pr);
        let inv = F::one().div(&m[r][c]);
        for k in c..cols {
            if !m[r][k].is_zero() {
                m[r][k] = m[r][k].mul(&inv);
            }
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for k in c..cols {
                if !pivot_row[k].is_zero() {
                    row[k] = row[k].sub(&f.mul(&pivot_row[k]));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<F: Field>(a: &Matrix<F>) -> usize {
    rref(&mut a.clone()).len()
}

/// Basis of the right nullspace `{v : a v = 0}`.
pub fn nullspace<F: Field>(a: &Matrix<F>, cols: usize) -> Vec<Vec<F>> {
    let mut m = a.clone();
    let pivots = rref(&mut m);
    let mut basis = Vec::new();
    for free in (0..cols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); cols];
        v[free] = F::one();
        for (row, &pc) in pivots.iter().enumerate() {
            v[pc] = m[row][free].neg();
        }
        basis.push(v);
    }
    basis
}

/// Some solution of `a v = b`, free variables set to zero.
pub fn solve<F: Field>(a: &Matrix<F>, b: &[F]) -> Option<Vec<F>> {
    let cols = a.first().map_or(0, Vec::len);
    let mut m: Matrix<F> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.last() == Some(&cols) {
        return None;
    }
    let mut v = vec![F::zero(); cols];
    for (row, &pc) in pivots.iter().enumerate() {
        v[pc] = m[row][cols].clone();
    }
    Some(v)
}

pub fn inverse<F: Field>(a: &Matrix<F>) -> Option<Matrix<F>> {
    let n = a.len();
    let mut m: Matrix<F> = a
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| if i == j { F::one() } else { F::zero() }));
            r
        })
        .collect();
    let pivots = rref(&mut m);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return None;
    }
    Some(m.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Determinant by fraction-carrying elimination.
pub fn det<F: Field>(a: &Matrix<F>) -> F {
    let n = a.len();
    let mut m = a.clone();
    let mut acc = F::one();
    for c in 0..n {
        let Some(pr) = (c..n).filter(|&i| !m[i][c].is_zero()).min_by_key(|&i| m[i][c].weight())
        else {
            return F::zero();
        };
        if pr != c {
            m.swap(pr, c);
            acc = acc.neg();
        }
        acc = acc.mul(&m[c][c]);
        let piv = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            if row[c].is_zero() {
                continue;
            }
            let f = row[c].div(&piv[c]);
            for k in c..n {
                if !piv[k].is_zero() {
                    row[k] = row[k].sub(&f.mul(&piv[k]));
                }
            }
        }
    }
    acc
}
