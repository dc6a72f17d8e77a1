//! Special/normal classification, minimal annihilators, σ-equivalence and
//! dispersion of polynomials in Q(x)[t].

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::{One, Signed};

use crate::error::{Error, Result};
use crate::field::ShiftSystem;
use crate::linalg::{inverse, nullspace, Matrix};
use crate::multipoly::{factor_t, FactorCaps, Monomial, TFactorization, TPoly};
use crate::scalar::{Rational, XRat};
use crate::shift::{gp_form, solve_shift, ShiftSolution};

/// Default bound `|i| <= B` for the brute-force shift scan.
pub const DEFAULT_SHIFT_SCAN: i64 = 25;

#[derive(Clone, Debug, PartialEq)]
pub enum FactorClass {
    /// `sigma^ell(p) = unit * p` with `ell` minimal.
    Special { ell: usize, unit: XRat },
    Normal,
}

impl FactorClass {
    pub fn is_special(&self) -> bool {
        matches!(self, FactorClass::Special { .. })
    }
}

impl fmt::Display for FactorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FactorClass::Special { ell, unit } => write!(f, "special(ell={}, unit={})", ell, unit),
            FactorClass::Normal => f.write_str("normal"),
        }
    }
}

/// `Some(u)` with `p = u * q`, both nonzero.
pub fn proportional(p: &TPoly, q: &TPoly) -> Option<XRat> {
    let (mp, cp) = p.lead()?;
    let (mq, cq) = q.lead()?;
    if mp != mq || p.len() != q.len() {
        return None;
    }
    let u = cp / cq;
    (q.scale(&u) == *p).then_some(u)
}

/// Checks `sigma^i(p) = u * p` for `i = 1..n`.
pub fn special_test(sys: &ShiftSystem, p: &TPoly) -> FactorClass {
    assert!(!p.is_constant(), "special test of a constant");
    let images = sys.images(1);
    let mut cur = p.clone();
    for ell in 1..=sys.n() {
        cur = sys.apply_poly_with(&cur, &images, 1);
        if let Some(unit) = proportional(&cur, p) {
            return FactorClass::Special { ell, unit };
        }
    }
    FactorClass::Normal
}

/// Monic operator `S^s + c_{s-1} S^{s-1} + ... + c_0`.
#[derive(Clone, Debug, PartialEq)]
pub struct OreOperator {
    pub coeffs: Vec<XRat>,
}

impl OreOperator {
    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeff(&self, k: usize) -> &XRat {
        &self.coeffs[k]
    }

    /// Number of nonzero coefficients, the leading 1 included.
    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// `sum c_k sigma^k(p)`.
    pub fn apply(&self, sys: &ShiftSystem, p: &TPoly) -> TPoly {
        let images = sys.images(1);
        let mut cur = p.clone();
        let mut acc = TPoly::zero(p.n());
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                cur = sys.apply_poly_with(&cur, &images, 1);
            }
            if !c.is_zero() {
                acc = &acc + &cur.scale(c);
            }
        }
        acc
    }

    /// Applies the operator to a sequence `y` with `sigma(y) = r y`, divided
    /// by `y`: `sum c_k r(x) r(x+1) ... r(x+k-1)`.
    pub fn apply_to_ratio(&self, r: &XRat) -> XRat {
        let mut prod = XRat::one();
        let mut acc = XRat::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if k > 0 {
                prod = &prod * &r.shift(k as i64 - 1);
            }
            if !c.is_zero() {
                acc = &acc + &(c * &prod);
            }
        }
        acc
    }
}

impl fmt::Display for OreOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for k in (0..self.coeffs.len()).rev() {
            let c = &self.coeffs[k];
            if c.is_zero() {
                continue;
            }
            let (neg, body): (bool, String) = match c.constant_value() {
                Some(v) => {
                    let neg = v.is_negative();
                    let a = v.abs();
                    let s = if a.is_one() && k > 0 { String::new() } else { alloc::format!("{}", a) };
                    (neg, s)
                }
                None => (false, alloc::format!("({})", c)),
            };
            match (first, neg) {
                (true, true) => f.write_str("-")?,
                (true, false) => {}
                (false, true) => f.write_str(" - ")?,
                (false, false) => f.write_str(" + ")?,
            }
            first = false;
            let op = match k {
                0 => String::new(),
                1 => String::from("S"),
                _ => alloc::format!("S^{}", k),
            };
            match (body.is_empty(), op.is_empty()) {
                (true, _) => f.write_str(&op)?,
                (false, true) => f.write_str(&body)?,
                (false, false) => write!(f, "{}*{}", body, op)?,
            }
        }
        Ok(())
    }
}

/// Monic minimal-order operator annihilating `p`, found as the first
/// K-linear dependence among `p, sigma(p), sigma^2(p), ...`.
pub fn min_annihilator(sys: &ShiftSystem, p: &TPoly) -> OreOperator {
    assert!(!p.is_zero(), "annihilator of zero");
    let images = sys.images(1);
    let mut orbit = alloc::vec![p.clone()];
    loop {
        let next = sys.apply_poly_with(orbit.last().unwrap(), &images, 1);
        orbit.push(next);
        let monos: BTreeSet<Monomial> = orbit.iter().flat_map(|q| q.terms().map(|(m, _)| m.clone())).collect();
        let cols = orbit.len();
        let m: Matrix<XRat> = monos.iter().map(|mono| orbit.iter().map(|q| q.coeff(mono)).collect()).collect();
        if let Some(v) = nullspace(&m, cols).into_iter().next() {
            // earlier iterates are independent, so the last entry is nonzero
            let lead = v[cols - 1].clone();
            return OreOperator { coeffs: v.iter().map(|c| c / &lead).collect() };
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum EquivalenceResult {
    /// `sigma^i(p) = u * q`.
    Equivalent { i: i64, u: XRat },
    NotEquivalent,
}

fn shifted_ratio(sys: &ShiftSystem, p: &TPoly, q: &TPoly, i: i64) -> Option<XRat> {
    proportional(&sys.apply_poly(p, i), q)
}

fn verified(sys: &ShiftSystem, p: &TPoly, q: &TPoly, i: i64) -> EquivalenceResult {
    match shifted_ratio(sys, p, q, i) {
        Some(u) => EquivalenceResult::Equivalent { i, u },
        None => EquivalenceResult::NotEquivalent,
    }
}

fn degree_profile(p: &TPoly) -> Vec<u32> {
    p.homogeneous_components().into_iter().map(|(d, _)| d).collect()
}

/// Decides whether `sigma^i(p) = u q` for some integer `i` and `u` in Q(x).
///
/// Returns [`Error::UnsupportedEigenvalues`] when the decision would need
/// eigenvalues outside Q; see [`sigma_equivalent_bounded`].
pub fn sigma_equivalent(sys: &ShiftSystem, p: &TPoly, q: &TPoly) -> Result<EquivalenceResult> {
    if degree_profile(p) != degree_profile(q) {
        return Ok(EquivalenceResult::NotEquivalent);
    }
    // primitive over Q[x]: any unit relating the two is then a constant
    let p0 = p.primitive_x().1;
    let q0 = q.primitive_x().1;
    let cand = match (special_test(sys, &p0), special_test(sys, &q0)) {
        (FactorClass::Special { ell, .. }, FactorClass::Special { .. }) => {
            let found = (0..ell as i64).find(|&i| shifted_ratio(sys, &p0, &q0, i).is_some());
            return Ok(match found {
                Some(i) => verified(sys, p, q, i),
                None => EquivalenceResult::NotEquivalent,
            });
        }
        (FactorClass::Normal, FactorClass::Normal) => normal_candidate(sys, &p0, &q0)?,
        _ => None,
    };
    Ok(match cand {
        Some(i) => verified(sys, p, q, i),
        None => EquivalenceResult::NotEquivalent,
    })
}

/// Like [`sigma_equivalent`], falling back to checking `|i| <= max_scan`
/// when the exact algorithm is not applicable.
pub fn sigma_equivalent_bounded(sys: &ShiftSystem, p: &TPoly, q: &TPoly, max_scan: i64) -> Result<EquivalenceResult> {
    match sigma_equivalent(sys, p, q) {
        Err(Error::UnsupportedEigenvalues) => Ok(scan_shifts(sys, p, q, max_scan)),
        other => other,
    }
}

/// Brute force over `i = 0, 1, -1, 2, -2, ...`.
pub fn scan_shifts(sys: &ShiftSystem, p: &TPoly, q: &TPoly, max_scan: i64) -> EquivalenceResult {
    for k in 0..=max_scan {
        for i in if k == 0 { [0, 0] } else { [k, -k] } {
            if let Some(u) = shifted_ratio(sys, p, q, i) {
                return EquivalenceResult::Equivalent { i, u };
            }
            if k == 0 {
                break;
            }
        }
    }
    EquivalenceResult::NotEquivalent
}

fn from_shift(s: ShiftSolution) -> Option<i64> {
    match s {
        ShiftSolution::Unique(i) => Some(i),
        _ => None,
    }
}

/// The unique candidate shift for normal primitive `p`, `q`, or `None` when
/// there is none.
fn normal_candidate(sys: &ShiftSystem, p: &TPoly, q: &TPoly) -> Result<Option<i64>> {
    let l = min_annihilator(sys, p);
    let m = min_annihilator(sys, q);
    let s = l.order();
    if m.order() != s || (0..s).any(|k| l.coeffs[k].is_zero() != m.coeffs[k].is_zero()) {
        return Ok(None);
    }
    if l.term_count() < 3 {
        // sigma^s(p) is a multiple of p, so p is special after all
        debug_assert!(false, "normal polynomial with a two-term annihilator");
        return Ok((0..s as i64).find(|&i| shifted_ratio(sys, p, q, i).is_some()));
    }
    let s64 = s as i64;

    // coefficient ratios that are invariant under rescaling q by a unit
    let l0 = &l.coeffs[0];
    let m0 = &m.coeffs[0];
    let base_l = l0.shift(s64).recip();
    let base_m = m0.shift(s64).recip();
    for k in 1..s {
        let (lk, mk) = (&l.coeffs[k], &m.coeffs[k]);
        if lk.is_zero() {
            continue;
        }
        let a = &(lk / &lk.shift(s64)) / &(&l0.shift(k as i64) * &base_l);
        let b = &(mk / &mk.shift(s64)) / &(&m0.shift(k as i64) * &base_m);
        if !a.is_constant() || !b.is_constant() {
            return Ok(from_shift(solve_shift(&a, &b)));
        }
        if a != b {
            return Ok(None);
        }
    }

    // GP forms of the trailing coefficients
    let gl = gp_form(l0)?;
    let gm = gp_form(m0)?;
    let (kl, km) = (gl.kernel(), gm.kernel());
    if !kl.is_one() || !km.is_one() {
        return Ok(from_shift(solve_shift(&kl, &km)));
    }
    // With primitive inputs the unit is constant, so the shift-quotient
    // parts correspond exactly as well.
    if !gl.a.is_constant() || !gm.a.is_constant() {
        return Ok(from_shift(solve_shift(&XRat::poly(gl.a.clone()), &XRat::poly(gm.a.clone()))));
    }
    for k in 1..s {
        let (lk, mk) = (&l.coeffs[k], &m.coeffs[k]);
        if !lk.is_constant() || !mk.is_constant() {
            return Ok(from_shift(solve_shift(lk, mk)));
        }
    }
    cfinite_candidate(sys, p, q)
}

/// Smallest `|i|` with `rho^i = target`, for `rho != 0, +-1`.
fn discrete_log(rho: &Rational, target: &Rational) -> Option<i64> {
    if target.is_one() {
        return Some(0);
    }
    let height = target.numer().bits().max(target.denom().bits()) as i64;
    let inv = rho.recip();
    let (mut up, mut down) = (rho.clone(), inv.clone());
    for i in 1..=height + 1 {
        if &up == target {
            return Some(i);
        }
        if &down == target {
            return Some(-i);
        }
        up = &up * rho;
        down = &down * &inv;
    }
    None
}

/// Compares `p` and `q` in eigen-coordinates `s_k` with
/// `sigma(s_k) = mu_k s_k`: `sigma^i(p) = u q` forces
/// `(mu^g / mu^g0)^i sigma^i(c_g / c_g0) = e_g / e_g0` for all monomials.
fn cfinite_candidate(sys: &ShiftSystem, p: &TPoly, q: &TPoly) -> Result<Option<i64>> {
    let n = sys.n();
    let eig = sys.eigenspaces().ok_or(Error::UnsupportedEigenvalues)?;
    if !eig.is_diagonalizable(n) {
        return Err(Error::UnsupportedEigenvalues);
    }
    let mut rows: Matrix<Rational> = Vec::new();
    let mut mus: Vec<Rational> = Vec::new();
    for (mu, basis) in &eig.spaces {
        for w in basis {
            rows.push(w.clone());
            mus.push(mu.clone());
        }
    }
    let winv = inverse(&rows).expect("eigenvectors are independent");
    let images: Vec<TPoly> =
        winv.iter().map(|row| TPoly::linear(&row.iter().cloned().map(XRat::constant).collect::<Vec<_>>())).collect();
    let ps = p.substitute(&images, XRat::clone);
    let qs = q.substitute(&images, XRat::clone);
    let support = |f: &TPoly| f.terms().map(|(m, _)| m.clone()).collect::<Vec<_>>();
    if support(&ps) != support(&qs) {
        return Ok(None);
    }
    let weight = |m: &Monomial| {
        let mut w = Rational::one();
        for (k, &e) in m.exps().iter().enumerate() {
            w *= mus[k].pow(e as i32);
        }
        w
    };
    let (g0, c0) = ps.lead().map(|(m, c)| (m.clone(), c.clone())).unwrap();
    let e0 = qs.coeff(&g0);
    let w0 = weight(&g0);
    let mut parity: Option<bool> = None;
    for (g, c) in ps.terms() {
        if *g == g0 {
            continue;
        }
        let rho = weight(g) / &w0;
        let r = c / &c0;
        let r2 = &qs.coeff(g) / &e0;
        if !r.is_constant() || !r2.is_constant() {
            let (lr, lr2) = (r.leading_ratio(), r2.leading_ratio());
            let Some(i) = from_shift(solve_shift(&r.scale(&lr.recip()), &r2.scale(&lr2.recip()))) else {
                return Ok(None);
            };
            let ok = i32::try_from(i).is_ok_and(|e| rho.pow(e) * &lr == lr2);
            return Ok(ok.then_some(i));
        }
        let target = r2.constant_value().unwrap() / r.constant_value().unwrap();
        if rho.is_one() {
            if !target.is_one() {
                return Ok(None);
            }
        } else if rho == -Rational::one() {
            let odd = if target.is_one() {
                false
            } else if target == -Rational::one() {
                true
            } else {
                return Ok(None);
            };
            if parity.is_some_and(|p| p != odd) {
                return Ok(None);
            }
            parity = Some(odd);
        } else {
            return Ok(discrete_log(&rho, &target));
        }
    }
    // only root-of-unity constraints: no unique shift is determined
    Err(Error::UnsupportedEigenvalues)
}

/// Irreducible factors with their classes; `unit * prod f^m` is the input.
#[derive(Clone, Debug, PartialEq)]
pub struct SplitFactorization {
    pub n: usize,
    pub unit: XRat,
    pub factors: Vec<(TPoly, usize, FactorClass)>,
}

impl SplitFactorization {
    fn part(&self, special: bool) -> TPoly {
        let mut acc = TPoly::one(self.n);
        for (f, m, c) in &self.factors {
            if c.is_special() == special {
                acc = &acc * &f.pow(*m as u32);
            }
        }
        acc
    }

    /// `P_s`, the product of the special factors.
    pub fn special_part(&self) -> TPoly {
        self.part(true)
    }

    /// `P_n`, the product of the normal factors.
    pub fn normal_part(&self) -> TPoly {
        self.part(false)
    }

    pub fn normal_factors(&self) -> impl Iterator<Item = (&TPoly, usize)> + '_ {
        self.factors.iter().filter(|(_, _, c)| !c.is_special()).map(|(f, m, _)| (f, *m))
    }

    pub fn special_factors(&self) -> impl Iterator<Item = (&TPoly, usize, &FactorClass)> + '_ {
        self.factors.iter().filter(|(_, _, c)| c.is_special()).map(|(f, m, c)| (f, *m, c))
    }

    pub fn expand(&self) -> TPoly {
        (&self.special_part() * &self.normal_part()).scale(&self.unit)
    }
}

pub fn split_factored(sys: &ShiftSystem, f: &TFactorization) -> SplitFactorization {
    let factors = f.factors.iter().map(|(g, m)| (g.clone(), *m, special_test(sys, g))).collect();
    SplitFactorization { n: sys.n(), unit: f.unit.clone(), factors }
}

pub fn split_factorization(sys: &ShiftSystem, p: &TPoly, caps: &FactorCaps) -> Result<SplitFactorization> {
    Ok(split_factored(sys, &factor_t(p, caps)?))
}

#[derive(Clone, Debug, PartialEq)]
pub struct OrbitMember {
    /// Position in the input list.
    pub index: usize,
    pub offset: i64,
    /// `sigma^offset(representative) = unit * factor`.
    pub unit: XRat,
}

/// σ-equivalence classes; each group is sorted by offset and starts with
/// its representative at offset 0.
#[derive(Clone, Debug, PartialEq)]
pub struct OrbitTable {
    pub orbits: Vec<Vec<OrbitMember>>,
}

impl OrbitTable {
    /// Largest offset difference inside any group, `None` when empty.
    pub fn dispersion(&self) -> Option<i64> {
        self.orbits.iter().map(|g| g.last().unwrap().offset - g[0].offset).max()
    }

    pub fn orbit_of(&self, index: usize) -> Option<(usize, &OrbitMember)> {
        self.orbits
            .iter()
            .enumerate()
            .find_map(|(k, g)| g.iter().find(|m| m.index == index).map(|m| (k, m)))
    }
}

pub fn orbit_decomposition(sys: &ShiftSystem, factors: &[TPoly], max_scan: i64) -> Result<OrbitTable> {
    let mut groups: Vec<Vec<(usize, i64)>> = Vec::new();
    'outer: for (j, f) in factors.iter().enumerate() {
        for g in groups.iter_mut() {
            let rep = &factors[g[0].0];
            if let EquivalenceResult::Equivalent { i, .. } = sigma_equivalent_bounded(sys, rep, f, max_scan)? {
                g.push((j, i));
                continue 'outer;
            }
        }
        groups.push(alloc::vec![(j, 0)]);
    }
    let orbits = groups
        .into_iter()
        .map(|mut g| {
            g.sort_by_key(|&(j, off)| (off, j));
            let (rep, base) = g[0];
            g.into_iter()
                .map(|(j, off)| {
                    let offset = off - base;
                    let unit = shifted_ratio(sys, &factors[rep], &factors[j], offset).expect("verified shift");
                    OrbitMember { index: j, offset, unit }
                })
                .collect()
        })
        .collect();
    Ok(OrbitTable { orbits })
}

/// Dispersion of the normal part; `None` stands for minus infinity.
pub fn dispersion_of(sys: &ShiftSystem, split: &SplitFactorization, max_scan: i64) -> Result<Option<i64>> {
    let normal: Vec<TPoly> = split.normal_factors().map(|(f, _)| f.clone()).collect();
    Ok(orbit_decomposition(sys, &normal, max_scan)?.dispersion())
}

pub fn dispersion(sys: &ShiftSystem, q: &TPoly, caps: &FactorCaps, max_scan: i64) -> Result<Option<i64>> {
    dispersion_of(sys, &split_factorization(sys, q, caps)?, max_scan)
}

/// Largest `|i - j|` with `sigma^i(p)` and `sigma^j(p)` both dividing `q`,
/// for normal irreducible `p`.
pub fn local_dispersion(
    sys: &ShiftSystem,
    q: &TPoly,
    p: &TPoly,
    caps: &FactorCaps,
    max_scan: i64,
) -> Result<Option<i64>> {
    let split = split_factorization(sys, q, caps)?;
    let mut offsets = Vec::new();
    for (f, _) in split.normal_factors() {
        if let EquivalenceResult::Equivalent { i, .. } = sigma_equivalent_bounded(sys, p, f, max_scan)? {
            offsets.push(i);
        }
    }
    Ok(match (offsets.iter().min(), offsets.iter().max()) {
        (Some(lo), Some(hi)) => Some(hi - lo),
        _ => None,
    })
}
