//! The difference field `Q(x)(t0, ..., t_{n-1})` with `sigma(x) = x + 1`
//! and `sigma(t_j) = sum_k A[j][k] t_k`.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{det, identity, inverse, mat_mul, nullspace, transpose, Matrix};
use crate::multipoly::{TPoly, TRat};
use crate::scalar::{rational_roots, Rational, XPoly, XRat};

/// Rational left eigenspaces of a constant system matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenspaces {
    pub charpoly: XPoly,
    /// `(eigenvalue, basis of {w : w A = lambda w})`, eigenvalues ascending.
    pub spaces: Vec<(Rational, Vec<Vec<Rational>>)>,
}

impl Eigenspaces {
    /// True when the rational eigenvectors span Q^n.
    pub fn is_diagonalizable(&self, n: usize) -> bool {
        self.spaces.iter().map(|(_, b)| b.len()).sum::<usize>() == n
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ShiftSystem {
    n: usize,
    a: Matrix<XRat>,
    a_inv: Matrix<XRat>,
    companion: bool,
}

fn shift_matrix(m: &Matrix<XRat>, k: i64) -> Matrix<XRat> {
    m.iter().map(|row| row.iter().map(|c| c.shift(k)).collect()).collect()
}

impl ShiftSystem {
    /// `sigma(t_j) = t_{j+1}` for `j < n-1` and
    /// `sigma(t_{n-1}) = a_0 t_0 + ... + a_{n-1} t_{n-1}`.
    pub fn make_companion(a: &[XRat]) -> Result<Self> {
        let n = a.len();
        if n == 0 {
            return Err(Error::Dimension("empty recurrence"));
        }
        if a[0].is_zero() {
            return Err(Error::NotInvertible);
        }
        let mut m: Matrix<XRat> = (0..n).map(|_| (0..n).map(|_| XRat::zero()).collect()).collect();
        for j in 0..n - 1 {
            m[j][j + 1] = XRat::one();
        }
        m[n - 1] = a.to_vec();
        let mut sys = Self::make_general(m)?;
        sys.companion = true;
        Ok(sys)
    }

    pub fn make_general(a: Matrix<XRat>) -> Result<Self> {
        let n = a.len();
        if n == 0 || a.iter().any(|row| row.len() != n) {
            return Err(Error::Dimension("system matrix must be square and nonempty"));
        }
        if det(&a).is_zero() {
            return Err(Error::SingularMatrix);
        }
        let a_inv = inverse(&a).ok_or(Error::SingularMatrix)?;
        Ok(ShiftSystem { n, a, a_inv, companion: false })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn matrix(&self) -> &Matrix<XRat> {
        &self.a
    }

    pub fn inverse_matrix(&self) -> &Matrix<XRat> {
        &self.a_inv
    }

    pub fn is_companion(&self) -> bool {
        self.companion
    }

    /// True when every entry of `A` lies in Q.
    pub fn has_constant_matrix(&self) -> bool {
        self.a.iter().flatten().all(XRat::is_constant)
    }

    /// Left eigenspaces over Q; `None` when some entry of `A` depends on x.
    pub fn eigenspaces(&self) -> Option<Eigenspaces> {
        if !self.has_constant_matrix() {
            return None;
        }
        let n = self.n;
        // det(lambda I - A) with lambda played by x
        let m: Matrix<XRat> = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let d = if i == j { XRat::x() } else { XRat::zero() };
                        &d - &self.a[i][j]
                    })
                    .collect()
            })
            .collect();
        let cp = det(&m);
        let charpoly = cp.num().clone();
        let aq: Matrix<Rational> =
            self.a.iter().map(|row| row.iter().map(|c| c.constant_value().unwrap()).collect()).collect();
        let at = transpose(&aq);
        let spaces = rational_roots(&charpoly)
            .into_iter()
            .map(|mu| {
                let mut shifted = at.clone();
                for (i, row) in shifted.iter_mut().enumerate() {
                    row[i] = &row[i] - &mu;
                }
                let basis = nullspace(&shifted, n);
                (mu, basis)
            })
            .collect();
        Some(Eigenspaces { charpoly, spaces })
    }

    /// The matrix of `sigma^k` on the t-variables, for any integer `k`.
    pub fn power_matrix(&self, k: i64) -> Matrix<XRat> {
        let mut acc = identity(self.n);
        if k > 0 {
            for i in 0..k {
                acc = mat_mul(&shift_matrix(&self.a, i), &acc);
            }
        } else if k < 0 {
            // sigma^{-1}(t) = sigma^{-1}(A^{-1}) t
            for i in 1..=-k {
                acc = mat_mul(&shift_matrix(&self.a_inv, -i), &acc);
            }
        }
        acc
    }

    /// `A_(s) = sigma^{s-1}(A) ... sigma(A) A`.
    pub fn system_power(&self, s: usize) -> Matrix<XRat> {
        assert!(s >= 1, "system power needs s >= 1");
        self.power_matrix(s as i64)
    }

    /// Images `sigma^k(t_j)` as linear forms.
    pub fn images(&self, k: i64) -> Vec<TPoly> {
        self.power_matrix(k).iter().map(|row| TPoly::linear(row)).collect()
    }

    pub fn apply_poly(&self, p: &TPoly, k: i64) -> TPoly {
        if k == 0 || p.is_zero() {
            return p.clone();
        }
        p.substitute(&self.images(k), |c| c.shift(k))
    }

    /// Like [`apply_poly`](Self::apply_poly) with precomputed images.
    pub fn apply_poly_with(&self, p: &TPoly, images: &[TPoly], k: i64) -> TPoly {
        p.substitute(images, |c| c.shift(k))
    }

    pub fn apply_rat(&self, f: &TRat, k: i64) -> TRat {
        if k == 0 {
            return f.clone();
        }
        let images = self.images(k);
        let num = self.apply_poly_with(f.num(), &images, k);
        let den = self.apply_poly_with(f.den(), &images, k);
        TRat::from_coprime(num, den)
    }

    /// `sigma(f) - f`.
    pub fn delta(&self, f: &TRat) -> TRat {
        &self.apply_rat(f, 1) - f
    }

    pub fn is_constant(&self, f: &TRat) -> bool {
        self.apply_rat(f, 1) == *f
    }
}
