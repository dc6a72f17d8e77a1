//! Polynomials and rational functions in `t0, ..., t_{n-1}` over Q(x).

mod factor;
mod gcd;

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Signed};

use crate::scalar::{Rational, XPoly, XRat};

pub use factor::{cmp_factors, factor_t, factor_with_hints, FactorCaps, FactoredPoly, TFactorization};
pub use gcd::{squarefree_t, tpoly_gcd};

/// Exponent vector. Ordered lexicographically with the highest-index
/// variable most significant.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn var(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn from_exps(e: Vec<u32>) -> Self {
        Monomial(e)
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn mul(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| a + b).collect())
    }

    pub fn div(&self, o: &Monomial) -> Option<Monomial> {
        let mut e = Vec::with_capacity(self.0.len());
        for (a, b) in self.0.iter().zip(&o.0) {
            e.push(a.checked_sub(*b)?);
        }
        Some(Monomial(e))
    }

    pub fn gcd(&self, o: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(&o.0).map(|(a, b)| *a.min(b)).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.iter().rev().cmp(other.0.iter().rev())
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse polynomial in `n` variables with coefficients in Q(x).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TPoly {
    n: usize,
    terms: BTreeMap<Monomial, XRat>,
}

impl TPoly {
    pub fn zero(n: usize) -> Self {
        TPoly { n, terms: BTreeMap::new() }
    }

    pub fn one(n: usize) -> Self {
        Self::constant(n, XRat::one())
    }

    pub fn constant(n: usize, c: XRat) -> Self {
        Self::monomial(n, Monomial::one(n), c)
    }

    pub fn int(n: usize, c: i64) -> Self {
        Self::constant(n, XRat::int(c))
    }

    pub fn var(n: usize, i: usize) -> Self {
        assert!(i < n, "variable t{} out of range", i);
        Self::monomial(n, Monomial::var(n, i), XRat::one())
    }

    pub fn monomial(n: usize, m: Monomial, c: XRat) -> Self {
        assert_eq!(m.n(), n);
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        TPoly { n, terms }
    }

    /// Linear form `sum w_i t_i`.
    pub fn linear(w: &[XRat]) -> Self {
        let n = w.len();
        let mut p = Self::zero(n);
        for (i, c) in w.iter().enumerate() {
            p.add_term(Monomial::var(n, i), c.clone());
        }
        p
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (Monomial, XRat)>) -> Self {
        let mut p = Self::zero(n);
        for (m, c) in terms {
            p.add_term(m, c);
        }
        p
    }

    pub fn add_term(&mut self, m: Monomial, c: XRat) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            alloc::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            alloc::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get() + &c;
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &XRat)> + '_ {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    /// True when no t-variable occurs.
    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(Monomial::is_one)
    }

    pub fn constant_value(&self) -> Option<XRat> {
        if self.is_zero() {
            return Some(XRat::zero());
        }
        if self.is_constant() {
            self.terms.values().next().cloned()
        } else {
            None
        }
    }

    pub fn coeff(&self, m: &Monomial) -> XRat {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Greatest monomial and its coefficient.
    pub fn lead(&self) -> Option<(&Monomial, &XRat)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(Monomial::degree).max()
    }

    pub fn degree_in(&self, v: usize) -> Option<u32> {
        self.terms.keys().map(|m| m.0[v]).max()
    }

    pub fn has_var(&self, v: usize) -> bool {
        self.terms.keys().any(|m| m.0[v] > 0)
    }

    pub fn highest_var(&self) -> Option<usize> {
        (0..self.n).rev().find(|&v| self.has_var(v))
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degs = self.terms.keys().map(Monomial::degree);
        match degs.next() {
            None => true,
            Some(d) => degs.all(|e| e == d),
        }
    }

    /// Greatest x-degree over all coefficients (numerators and denominators).
    pub fn x_degree(&self) -> usize {
        self.terms
            .values()
            .map(|c| c.num().degree().unwrap_or(0).max(c.den().degree().unwrap_or(0)))
            .max()
            .unwrap_or(0)
    }

    pub fn has_x_denominators(&self) -> bool {
        self.terms.values().any(|c| !c.is_polynomial())
    }

    pub fn scale(&self, c: &XRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n);
        }
        if c.is_one() {
            return self.clone();
        }
        TPoly { n: self.n, terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect() }
    }

    pub fn mul_monomial(&self, m: &Monomial) -> Self {
        TPoly { n: self.n, terms: self.terms.iter().map(|(k, v)| (k.mul(m), v.clone())).collect() }
    }

    pub fn map_coeffs(&self, f: impl Fn(&XRat) -> XRat) -> Self {
        Self::from_terms(self.n, self.terms.iter().map(|(m, c)| (m.clone(), f(c))))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.n);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Scales so that the coefficient at the greatest monomial is 1.
    pub fn monic(&self) -> Self {
        match self.lead() {
            None => self.clone(),
            Some((_, c)) if c.is_one() => self.clone(),
            Some((_, c)) => self.scale(&c.recip()),
        }
    }

    fn has_polynomial_coeffs(&self) -> bool {
        self.terms.values().all(|c| c.is_polynomial())
    }

    /// Writes `self = unit * prim` where `prim` has coefficients in Q[x]
    /// without common factor and the coefficient at its greatest monomial
    /// has leading coefficient 1.
    pub fn primitive_x(&self) -> (XRat, TPoly) {
        if self.is_zero() {
            return (XRat::one(), self.clone());
        }
        let mut den = XPoly::one();
        for c in self.terms.values() {
            if !c.den().is_one() {
                den = den.lcm(c.den());
            }
        }
        let mut num_gcd = XPoly::zero();
        let polys: Vec<(Monomial, XPoly)> = self
            .terms
            .iter()
            .map(|(m, c)| {
                let p = if den.is_one() { c.num().clone() } else { c.num() * &den.exact_div(c.den()).unwrap() };
                (m.clone(), p)
            })
            .collect();
        for (_, p) in &polys {
            if num_gcd.is_one() {
                break;
            }
            num_gcd = num_gcd.gcd(p);
        }
        let lead_lc = {
            let p = &polys.last().unwrap().1;
            p.lc() / num_gcd.lc()
        };
        let divisor = num_gcd.scale(&lead_lc);
        let prim = TPoly {
            n: self.n,
            terms: polys
                .into_iter()
                .map(|(m, p)| (m, XRat::poly(if divisor.is_one() { p } else { p.exact_div(&divisor).unwrap() })))
                .collect(),
        };
        (XRat::new(divisor, den), prim)
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Monomial {
        let mut it = self.terms.keys();
        match it.next() {
            None => Monomial::one(self.n),
            Some(first) => it.fold(first.clone(), |acc, m| acc.gcd(m)),
        }
    }

    /// Substitutes `x -> x + k` in every coefficient.
    pub fn shift_x(&self, k: i64) -> Self {
        if k == 0 {
            return self.clone();
        }
        TPoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), c.shift(k))).collect() }
    }

    /// Replaces each `t_i` by `images[i]` and each coefficient `c` by `f(c)`.
    pub fn substitute(&self, images: &[TPoly], f: impl Fn(&XRat) -> XRat) -> TPoly {
        assert_eq!(images.len(), self.n);
        let n_out = images.first().map_or(self.n, TPoly::n);
        let mut powers: Vec<Vec<TPoly>> = images.iter().map(|p| vec![TPoly::one(n_out), p.clone()]).collect();
        let mut acc = TPoly::zero(n_out);
        for (m, c) in &self.terms {
            let mut term = TPoly::constant(n_out, f(c));
            for (i, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e as usize];
            }
            acc = &acc + &term;
        }
        acc
    }

    /// Evaluates `t_v = value` (an element of Q(x)).
    pub fn eval_var(&self, v: usize, value: &XRat) -> TPoly {
        let mut out = TPoly::zero(self.n);
        for (m, c) in &self.terms {
            let mut e = m.0.clone();
            let k = core::mem::replace(&mut e[v], 0);
            out.add_term(Monomial(e), c * &value.pow(k as i32));
        }
        out
    }

    /// Exact quotient, or `None` when `d` does not divide `self`.
    pub fn exact_div(&self, d: &TPoly) -> Option<TPoly> {
        gcd::exact_div(self, d)
    }

    pub fn divides(&self, other: &TPoly) -> bool {
        other.exact_div(self).is_some()
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            let mono = fmt_monomial(m, names);
            let simple = c.constant_value();
            match simple {
                Some(v) => {
                    let neg = v.is_negative();
                    if first {
                        if neg {
                            f.write_str("-")?;
                        }
                    } else {
                        f.write_str(if neg { " - " } else { " + " })?;
                    }
                    let a = v.abs();
                    match (a.is_one(), mono.is_empty()) {
                        (true, false) => f.write_str(&mono)?,
                        (_, true) => fmt_rational(f, &a)?,
                        (false, false) => {
                            fmt_rational(f, &a)?;
                            write!(f, "*{}", mono)?;
                        }
                    }
                }
                None => {
                    if !first {
                        f.write_str(" + ")?;
                    }
                    if mono.is_empty() {
                        write!(f, "({})", c)?;
                    } else {
                        write!(f, "({})*{}", c, mono)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        Named { p: self, names }
    }

    /// Components of fixed total t-degree, ascending in degree.
    pub fn homogeneous_components(&self) -> Vec<(u32, TPoly)> {
        let mut by_deg: BTreeMap<u32, TPoly> = BTreeMap::new();
        for (m, c) in &self.terms {
            by_deg
                .entry(m.degree())
                .or_insert_with(|| TPoly::zero(self.n))
                .terms
                .insert(m.clone(), c.clone());
        }
        by_deg.into_iter().collect()
    }
}

pub fn homogeneous_components(p: &TPoly) -> Vec<(u32, TPoly)> {
    p.homogeneous_components()
}

pub(crate) fn fmt_rational(f: &mut fmt::Formatter<'_>, a: &Rational) -> fmt::Result {
    if a.is_integer() {
        write!(f, "{}", a.numer())
    } else {
        write!(f, "{}/{}", a.numer(), a.denom())
    }
}

pub fn default_names(n: usize) -> Vec<String> {
    (0..n).map(|i| alloc::format!("t{}", i)).collect()
}

fn fmt_monomial(m: &Monomial, names: &[String]) -> String {
    let mut s = String::new();
    for (i, &e) in m.0.iter().enumerate().rev() {
        if e == 0 {
            continue;
        }
        if !s.is_empty() {
            s.push('*');
        }
        s.push_str(&names[i]);
        if e > 1 {
            s.push_str(&alloc::format!("^{}", e));
        }
    }
    s
}

struct Named<'a> {
    p: &'a TPoly,
    names: &'a [String],
}

impl fmt::Display for Named<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.p.fmt_with(f, self.names)
    }
}

impl fmt::Display for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_names(self.n))
    }
}

impl fmt::Debug for TPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TPoly({})", self)
    }
}

impl<'a> Add<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn add(self, rhs: &TPoly) -> TPoly {
        debug_assert_eq!(self.n, rhs.n);
        let (mut big, small) = if self.len() >= rhs.len() { (self.clone(), rhs) } else { (rhs.clone(), self) };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c.clone());
        }
        big
    }
}

impl<'a> Sub<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn sub(self, rhs: &TPoly) -> TPoly {
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), -c);
        }
        out
    }
}

impl<'a> Mul<&'a TPoly> for &'a TPoly {
    type Output = TPoly;
    fn mul(self, rhs: &TPoly) -> TPoly {
        debug_assert_eq!(self.n, rhs.n);
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if !self.has_polynomial_coeffs() || !rhs.has_polynomial_coeffs() {
            // one normalization per product term instead of one per pair
            let (ca, a) = self.primitive_x();
            let (cb, b) = rhs.primitive_x();
            return (&a * &b).scale(&(&ca * &cb));
        }
        let mut acc: BTreeMap<Monomial, XRat> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = ca * cb;
                match acc.entry(m) {
                    alloc::collections::btree_map::Entry::Vacant(e) => {
                        e.insert(c);
                    }
                    alloc::collections::btree_map::Entry::Occupied(mut e) => {
                        let s = e.get() + &c;
                        *e.get_mut() = s;
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero());
        TPoly { n: self.n, terms: acc }
    }
}

impl Neg for &TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        TPoly { n: self.n, terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect() }
    }
}

impl Neg for TPoly {
    type Output = TPoly;
    fn neg(self) -> TPoly {
        -&self
    }
}

macro_rules! forward_owned {
    ($t:ident; $($tr:ident $m:ident),*) => {$(
        impl $tr<$t> for $t {
            type Output = $t;
            fn $m(self, rhs: $t) -> $t { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a $t> for $t {
            type Output = $t;
            fn $m(self, rhs: &$t) -> $t { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(TPoly; Add add, Sub sub, Mul mul);

/// Reduced fraction of polynomials; the denominator is monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TRat {
    num: TPoly,
    den: TPoly,
}

impl TRat {
    pub fn new(num: TPoly, den: TPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        if num.is_zero() {
            return Self::zero(den.n);
        }
        if let Some(c) = den.constant_value() {
            return TRat { num: num.scale(&c.recip()), den: TPoly::one(den.n) };
        }
        let g = tpoly_gcd(&num, &den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        Self::from_coprime(num, den)
    }

    /// Builds from parts already known to be coprime.
    pub fn from_coprime(num: TPoly, den: TPoly) -> Self {
        if num.is_zero() {
            return Self::zero(den.n);
        }
        let c = den.lead().unwrap().1.clone();
        if c.is_one() {
            TRat { num, den }
        } else {
            let c = c.recip();
            TRat { num: num.scale(&c), den: den.scale(&c) }
        }
    }

    pub fn zero(n: usize) -> Self {
        TRat { num: TPoly::zero(n), den: TPoly::one(n) }
    }

    pub fn one(n: usize) -> Self {
        Self::poly(TPoly::one(n))
    }

    pub fn poly(p: TPoly) -> Self {
        let n = p.n;
        TRat { num: p, den: TPoly::one(n) }
    }

    pub fn constant(n: usize, c: XRat) -> Self {
        Self::poly(TPoly::constant(n, c))
    }

    pub fn num(&self) -> &TPoly {
        &self.num
    }

    pub fn den(&self) -> &TPoly {
        &self.den
    }

    pub fn n(&self) -> usize {
        self.num.n
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<XRat> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        Self::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &XRat) -> Self {
        if c.is_zero() {
            return Self::zero(self.n());
        }
        TRat { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn fmt_with(&self, f: &mut fmt::Formatter<'_>, names: &[String]) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt_with(f, names);
        }
        let wrap_num = self.num.len() > 1 || self.num.terms.values().any(|c| c.constant_value().is_none());
        if wrap_num {
            write!(f, "({})", self.num.display_with(names))?;
        } else {
            self.num.fmt_with(f, names)?;
        }
        write!(f, "/({})", self.den.display_with(names))
    }

    pub fn display_with<'a>(&'a self, names: &'a [String]) -> impl fmt::Display + 'a {
        NamedRat { r: self, names }
    }
}

struct NamedRat<'a> {
    r: &'a TRat,
    names: &'a [String],
}

impl fmt::Display for NamedRat<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.r.fmt_with(f, self.names)
    }
}

impl fmt::Display for TRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with(f, &default_names(self.n()))
    }
}

impl fmt::Debug for TRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "TRat({})", self)
    }
}

impl From<TPoly> for TRat {
    fn from(p: TPoly) -> Self {
        TRat::poly(p)
    }
}

impl<'a> Add<&'a TRat> for &'a TRat {
    type Output = TRat;
    fn add(self, rhs: &TRat) -> TRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return TRat::poly(&self.num + &rhs.num);
            }
            return TRat::new(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() {
            return TRat::from_coprime(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return TRat::from_coprime(&(&rhs.num * &self.den) + &self.num, self.den.clone());
        }
        let g = tpoly_gcd(&self.den, &rhs.den);
        let d1 = self.den.exact_div(&g).unwrap();
        let d2 = rhs.den.exact_div(&g).unwrap();
        let num = &(&self.num * &d2) + &(&rhs.num * &d1);
        TRat::new(num, &(&d1 * &d2) * &g)
    }
}

impl<'a> Sub<&'a TRat> for &'a TRat {
    type Output = TRat;
    fn sub(self, rhs: &TRat) -> TRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a TRat> for &'a TRat {
    type Output = TRat;
    fn mul(self, rhs: &TRat) -> TRat {
        if self.is_zero() || rhs.is_zero() {
            return TRat::zero(self.n());
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        let g1 = tpoly_gcd(&self.num, &rhs.den);
        let g2 = tpoly_gcd(&rhs.num, &self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        TRat::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> core::ops::Div<&'a TRat> for &'a TRat {
    type Output = TRat;
    fn div(self, rhs: &TRat) -> TRat {
        self * &rhs.recip()
    }
}

impl Neg for &TRat {
    type Output = TRat;
    fn neg(self) -> TRat {
        TRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for TRat {
    type Output = TRat;
    fn neg(self) -> TRat {
        -&self
    }
}

use core::ops::Div;
forward_owned!(TRat; Add add, Sub sub, Mul mul, Div div);
