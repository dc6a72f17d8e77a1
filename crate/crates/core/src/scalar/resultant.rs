use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{factor_x, rat, Rational, XPoly};
use crate::error::{Error, Result};

/// Resultant over Q by the Euclidean remainder sequence.
pub fn resultant(a: &XPoly, b: &XPoly) -> Rational {
    if a.is_zero() || b.is_zero() {
        return Rational::zero();
    }
    let mut a = a.clone();
    let mut b = b.clone();
    let mut acc = Rational::one();
    loop {
        let m = a.degree().unwrap();
        let n = b.degree().unwrap();
        if n == 0 {
            return acc * pow(&b.lc(), m);
        }
        if m == 0 {
            return acc * pow(&a.lc(), n);
        }
        let r = a.rem(&b);
        if r.is_zero() {
            return Rational::zero();
        }
        let k = r.degree().unwrap();
        if (m * n) % 2 == 1 {
            acc = -acc;
        }
        acc *= pow(&b.lc(), m - k);
        a = b;
        b = r;
    }
}

fn pow(c: &Rational, e: usize) -> Rational {
    let mut acc = Rational::one();
    for _ in 0..e {
        acc *= c;
    }
    acc
}

/// `Res_x(q(x), s(x + j))` as a polynomial in `j`.
///
/// The result has degree at most `deg q * deg s` in `j`, so it is recovered
/// by interpolation from that many plus one scalar resultants.
pub fn shift_resultant(q: &XPoly, s: &XPoly) -> Result<XPoly> {
    if q.is_zero() || s.is_zero() {
        return Err(Error::Zero("zero polynomial has no resultant"));
    }
    let n = q.degree().unwrap() * s.degree().unwrap();
    let mut points = Vec::with_capacity(n + 1);
    for j in 0..=n as i64 {
        points.push((rat(j), resultant(q, &s.shift_int(j))));
    }
    Ok(interpolate(&points))
}

/// Newton interpolation through distinct nodes.
fn interpolate(points: &[(Rational, Rational)]) -> XPoly {
    let k = points.len();
    let mut dd: Vec<Rational> = points.iter().map(|p| p.1.clone()).collect();
    for level in 1..k {
        for i in (level..k).rev() {
            let num = &dd[i] - &dd[i - 1];
            let den = &points[i].0 - &points[i - level].0;
            dd[i] = num / den;
        }
    }
    let mut acc = XPoly::zero();
    for i in (0..k).rev() {
        acc = &(&acc * &XPoly::linear_root(points[i].0.clone())) + &XPoly::constant(dd[i].clone());
    }
    acc
}

/// Distinct integer roots, ascending.
pub fn integer_roots(p: &XPoly) -> Vec<i64> {
    assert!(!p.is_zero(), "integer_roots of the zero polynomial");
    let (_, mut f) = p.integer_primitive();
    let mut roots = Vec::new();
    if f.len() <= 1 {
        return roots;
    }
    if f[0].is_zero() {
        roots.push(0);
        while f[0].is_zero() {
            f.remove(0);
        }
    }
    if f.len() > 1 {
        // every integer root divides f[0], and is bounded by the Cauchy bound
        let lead = f.last().unwrap().abs();
        let max_ratio = f[..f.len() - 1].iter().map(|c| c.abs()).max().unwrap();
        let bound = BigInt::one() + (&max_ratio + &lead - 1u32) / &lead;
        let small = bound.to_i64().filter(|&b| b <= 4096);
        if let Some(b) = small {
            for r in 1..=b {
                for cand in [r, -r] {
                    if (&f[0] % BigInt::from(cand)).is_zero() && eval_z(&f, cand).is_zero() {
                        roots.push(cand);
                    }
                }
            }
        } else {
            for q in rational_roots(&XPoly::from_bigints(&f)) {
                if q.is_integer() {
                    if let Some(v) = q.numer().to_i64() {
                        roots.push(v);
                    }
                }
            }
        }
    }
    roots.sort_unstable();
    roots.dedup();
    roots
}

fn eval_z(f: &[BigInt], at: i64) -> BigInt {
    let at = BigInt::from(at);
    let mut acc = BigInt::zero();
    for c in f.iter().rev() {
        acc = acc * &at + c;
    }
    acc
}

/// Distinct rational roots, ascending.
pub fn rational_roots(p: &XPoly) -> Vec<Rational> {
    assert!(!p.is_zero(), "rational_roots of the zero polynomial");
    if p.is_constant() {
        return Vec::new();
    }
    let mut out: Vec<Rational> = factor_x(p)
        .factors
        .iter()
        .filter(|(f, _)| f.degree() == Some(1))
        .map(|(f, _)| -f.coeff(0))
        .collect();
    out.sort();
    out
}
