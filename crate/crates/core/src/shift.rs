//! The shift `x -> x + 1` on Q(x): dispersion, Gosper-Petkovsek forms and
//! solving `sigma^i(a) = b`.

use core::fmt;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{integer_roots, rat, shift_resultant, Rational, XPoly, XRat};

pub fn sigma_x(r: &XRat, k: i64) -> XRat {
    r.shift(k)
}

/// Largest `h >= 0` with `gcd(p(x), q(x + h))` nontrivial; `None` stands for
/// minus infinity.
pub fn dispersion_x(p: &XPoly, q: &XPoly) -> Option<i64> {
    assert!(!p.is_zero() && !q.is_zero(), "dispersion of the zero polynomial");
    if p.is_constant() || q.is_constant() {
        return None;
    }
    let res = shift_resultant(p, q).expect("nonzero inputs");
    integer_roots(&res).into_iter().filter(|&h| h >= 0).max()
}

/// `z * (a(x+1)/a(x)) * (b/c)` with `a, b, c` monic,
/// `gcd(b(x), c(x+h)) = 1` for all `h >= 0`, `gcd(a(x+1), b) = 1` and
/// `gcd(a, c) = 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GPForm {
    pub z: Rational,
    pub a: XPoly,
    pub b: XPoly,
    pub c: XPoly,
}

impl GPForm {
    pub fn value(&self) -> XRat {
        let ratio = XRat::new(self.a.shift_int(1), self.a.clone());
        let bc = XRat::new(self.b.clone(), self.c.clone());
        (&ratio * &bc).scale(&self.z)
    }

    /// `b/c`, the part of the form that is not a shift quotient.
    pub fn kernel(&self) -> XRat {
        XRat::new(self.b.clone(), self.c.clone())
    }

    pub fn check_invariants(&self) -> bool {
        if self.z.is_zero() || !is_monic(&self.a) || !is_monic(&self.b) || !is_monic(&self.c) {
            return false;
        }
        if !self.a.shift_int(1).gcd(&self.b).is_one() || !self.a.gcd(&self.c).is_one() {
            return false;
        }
        if self.b.is_constant() || self.c.is_constant() {
            return true;
        }
        let res = shift_resultant(&self.b, &self.c).expect("nonzero");
        integer_roots(&res).into_iter().all(|h| h < 0)
    }
}

fn is_monic(p: &XPoly) -> bool {
    !p.is_zero() && p.lc().is_one()
}

impl fmt::Display for GPForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "z={} a={} b={} c={}", self.z, self.a, self.b, self.c)
    }
}

pub fn gp_form(r: &XRat) -> Result<GPForm> {
    if r.is_zero() {
        return Err(Error::Zero("GP form undefined for zero"));
    }
    let z = r.leading_ratio();
    let mut a = XPoly::one();
    let mut b = r.num().monic();
    let mut c = r.den().clone();

    // Gosper: move shift-related pairs of b and c into a, smallest shift first
    if !b.is_constant() && !c.is_constant() {
        let res = shift_resultant(&b, &c)?;
        for h in integer_roots(&res).into_iter().filter(|&h| h > 0) {
            loop {
                let g = b.gcd(&c.shift_int(h));
                if g.is_constant() {
                    break;
                }
                b = b.exact_div(&g).unwrap();
                c = c.exact_div(&g.shift_int(-h)).unwrap();
                for i in 1..=h {
                    a = &a * &g.shift_int(-i);
                }
            }
        }
    }

    // push common factors of a(x+1), b down and of a, c up until the
    // boundary conditions hold; b/c shift-coprimality is preserved
    loop {
        let f = a.shift_int(1).gcd(&b);
        if !f.is_constant() {
            let down = f.shift_int(-1);
            b = &b.exact_div(&f).unwrap() * &down;
            a = &a * &down;
            continue;
        }
        let f = a.gcd(&c);
        if !f.is_constant() {
            c = &c.exact_div(&f).unwrap() * &f.shift_int(1);
            a = &a * &f;
            continue;
        }
        break;
    }
    Ok(GPForm { z, a: a.monic(), b: b.monic(), c: c.monic() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ShiftSolution {
    Unique(i64),
    AllShifts,
    NoSolution,
}

/// Solves `sigma^i(a) = b` for an integer `i`.
pub fn solve_shift(a: &XRat, b: &XRat) -> ShiftSolution {
    if a.is_constant() {
        return if a == b { ShiftSolution::AllShifts } else { ShiftSolution::NoSolution };
    }
    let (pa, pb) = if a.num().is_constant() {
        (a.den(), b.den())
    } else {
        (a.num(), b.num())
    };
    let d = pa.degree().unwrap();
    if pb.degree() != Some(d) || a.leading_ratio() != b.leading_ratio() {
        return ShiftSolution::NoSolution;
    }
    // coefficient of x^(d-1) in the monic P(x+i) is c_{d-1} + d*i
    let ca = pa.coeff(d - 1) / pa.lc();
    let cb = pb.coeff(d - 1) / pb.lc();
    let i = (cb - ca) / rat(d as i64);
    if !i.is_integer() {
        return ShiftSolution::NoSolution;
    }
    let Some(i) = num_traits::ToPrimitive::to_i64(i.numer()) else {
        return ShiftSolution::NoSolution;
    };
    if &sigma_x(a, i) == b {
        ShiftSolution::Unique(i)
    } else {
        ShiftSolution::NoSolution
    }
}
