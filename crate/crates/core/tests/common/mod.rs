//! Fixtures and random generators shared by the integration tests.
#![allow(dead_code)]

use parsum::classify::{orbit_decomposition, special_test, split_factored, SplitFactorization};
use parsum::field::ShiftSystem;
use parsum::multipoly::{factor_with_hints, FactorCaps, Monomial, TPoly, TRat};
use parsum::{rat, Rational, XPoly, XRat};
use rand::Rng;

pub fn worked() -> ShiftSystem {
    ShiftSystem::make_companion(&[XRat::int(-6), XRat::int(5)]).unwrap()
}

pub fn fib() -> ShiftSystem {
    ShiftSystem::make_companion(&[XRat::int(1), XRat::int(1)]).unwrap()
}

pub fn strange() -> ShiftSystem {
    ShiftSystem::make_general(vec![vec![XRat::int(2), XRat::x()], vec![XRat::zero(), XRat::int(2)]]).unwrap()
}

pub fn tp(terms: &[(i64, &[u32])]) -> TPoly {
    let n = terms[0].1.len();
    TPoly::from_terms(n, terms.iter().map(|(c, e)| (Monomial::from_exps(e.to_vec()), XRat::int(*c))))
}

/// `c0*t0 + c1*t1`.
pub fn lin(c0: i64, c1: i64) -> TPoly {
    tp(&[(c0, &[1, 0]), (c1, &[0, 1])])
}

/// The worked example: `f` and the printed telescoper `g`.
pub fn example_f() -> TRat {
    let num = tp(&[(636, &[3, 0]), (443, &[2, 1]), (-1428, &[1, 2]), (565, &[0, 3])]);
    let den = &(&(&lin(3, -2).pow(2) * &lin(1, -1).pow(2)) * &lin(2, -1)) * &lin(1, 1);
    TRat::new(num, den.scale(&XRat::int(2592)))
}

pub fn example_g() -> TRat {
    let den = (&(&lin(-2, 1) * &lin(1, 1)) * &lin(-1, 1).pow(2)).scale(&XRat::int(36));
    TRat::new(lin(1, 2), den)
}

pub fn xpoly(rng: &mut impl Rng, deg: usize, range: i64) -> XPoly {
    XPoly::from_coeffs((0..=deg).map(|_| rat(rng.gen_range(-range..=range))).collect())
}

pub fn nonzero(rng: &mut impl Rng, range: i64) -> i64 {
    loop {
        let v = rng.gen_range(-range..=range);
        if v != 0 {
            return v;
        }
    }
}

/// A nonzero element of Q(x) with small numerator and denominator.
pub fn unit(rng: &mut impl Rng) -> XRat {
    loop {
        let (dn, dd) = (rng.gen_range(0..=1), rng.gen_range(0..=1));
        let num = xpoly(rng, dn, 4);
        let den = xpoly(rng, dd, 4);
        if !num.is_zero() && !den.is_zero() {
            return XRat::new(num, den);
        }
    }
}

/// Random polynomial with total t-degree at most `t_deg` and coefficients
/// of x-degree at most `x_deg`.
pub fn random_tpoly(rng: &mut impl Rng, n: usize, t_deg: u32, x_deg: usize) -> TPoly {
    let mut p = TPoly::zero(n);
    let terms = rng.gen_range(1..=4);
    for _ in 0..terms {
        let mut e = vec![0u32; n];
        let d = rng.gen_range(0..=t_deg);
        for _ in 0..d {
            e[rng.gen_range(0..n)] += 1;
        }
        let dx = rng.gen_range(0..=x_deg);
        let c = xpoly(rng, dx, 5);
        p = &p + &TPoly::monomial(n, Monomial::from_exps(e), XRat::poly(c));
    }
    p
}

/// Random linear form, primitive over Q[x] (hence irreducible) and normal.
/// With probability `x_prob` the coefficients may depend linearly on x.
pub fn normal_linear(rng: &mut impl Rng, sys: &ShiftSystem, x_prob: f64) -> TPoly {
    let n = sys.n();
    let x_coeffs = rng.gen_bool(x_prob);
    loop {
        let w: Vec<XRat> = (0..n)
            .map(|_| {
                let deg = if x_coeffs && rng.gen_bool(0.4) { 1 } else { 0 };
                XRat::poly(xpoly(rng, deg, 4))
            })
            .collect();
        let p = TPoly::linear(&w);
        if p.is_zero() || p.is_constant() {
            continue;
        }
        let p = p.primitive_x().1;
        if !special_test(sys, &p).is_special() {
            return p;
        }
    }
}

/// Random normal quadratic form with integer coefficients, irreducible.
pub fn normal_quadratic(rng: &mut impl Rng, sys: &ShiftSystem) -> TPoly {
    assert_eq!(sys.n(), 2);
    loop {
        let p = tp(&[
            (nonzero(rng, 5), &[2, 0]),
            (rng.gen_range(-5..=5), &[1, 1]),
            (nonzero(rng, 5), &[0, 2]),
        ]);
        // irreducible iff the discriminant is not a rational square
        let c: Vec<i64> = [[2u32, 0], [1, 1], [0, 2]]
            .iter()
            .map(|e| {
                let v = p.coeff(&Monomial::from_exps(e.to_vec())).constant_value().unwrap();
                i64::try_from(v.to_integer()).unwrap()
            })
            .collect();
        let disc = c[1] * c[1] - 4 * c[0] * c[2];
        let square = disc >= 0 && (0..=disc).any(|r| r * r == disc);
        if square {
            continue;
        }
        let p = p.primitive_x().1;
        if !special_test(sys, &p).is_special() {
            return p;
        }
    }
}

pub fn caps() -> FactorCaps {
    FactorCaps::default()
}

/// Factors `p` knowing that its irreducible factors are among `hints`.
pub fn split_with_hints(sys: &ShiftSystem, p: &TPoly, hints: &[TPoly]) -> SplitFactorization {
    split_factored(sys, &factor_with_hints(p, hints, &caps()).unwrap())
}

pub fn dispersion_with_hints(sys: &ShiftSystem, p: &TPoly, hints: &[TPoly]) -> Option<i64> {
    let split = split_with_hints(sys, p, hints);
    let normal: Vec<TPoly> = split.normal_factors().map(|(f, _)| f.clone()).collect();
    orbit_decomposition(sys, &normal, 25).unwrap().dispersion()
}

/// `sigma^k(p)` for every `p` in `base` and `k` in `range`.
pub fn shifted_hints(sys: &ShiftSystem, base: &[TPoly], range: std::ops::RangeInclusive<i64>) -> Vec<TPoly> {
    let mut out = Vec::new();
    for p in base {
        for k in range.clone() {
            out.push(sys.apply_poly(p, k));
        }
    }
    out
}

/// Random nonzero rational function in x built from shifted linear and
/// quadratic factors, so that nontrivial shift structure is common.
pub fn shifty_xrat(rng: &mut impl Rng) -> XRat {
    let bases: Vec<XPoly> = (0..rng.gen_range(1..=3))
        .map(|_| {
            if rng.gen_bool(0.75) {
                XPoly::linear_root(Rational::new(rng.gen_range(-6..=6).into(), rng.gen_range(1..=3).into()))
            } else {
                XPoly::from_coeffs(vec![rat(rng.gen_range(1..=5)), rat(rng.gen_range(-3..=3)), rat(1)])
            }
        })
        .collect();
    let mut num = XPoly::one();
    let mut den = XPoly::one();
    for _ in 0..rng.gen_range(1..=5) {
        let b = &bases[rng.gen_range(0..bases.len())];
        let f = b.shift_int(rng.gen_range(-4..=4)).pow(rng.gen_range(1..=2));
        if rng.gen_bool(0.5) {
            num = &num * &f;
        } else {
            den = &den * &f;
        }
    }
    XRat::new(num.scale(&rat(nonzero(rng, 9))), den)
}
