//! Irreducible factorization over Q(x) by Kronecker substitution, and a
//! factored representation for products of known irreducibles.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use super::{squarefree_t, Monomial, TPoly};
use crate::error::{Error, Result};
use crate::scalar::{factor_x, Subsets, XPoly, XRat};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FactorCaps {
    /// Largest univariate degree accepted after Kronecker substitution.
    pub max_image_degree: usize,
    /// Largest number of univariate factors to recombine.
    pub max_factors: usize,
}

impl Default for FactorCaps {
    fn default() -> Self {
        FactorCaps { max_image_degree: 400, max_factors: 18 }
    }
}

/// `unit * prod(f_i ^ m_i)` with each `f_i` irreducible and normalized by
/// [`TPoly::primitive_x`].
#[derive(Clone, Debug, PartialEq)]
pub struct TFactorization {
    pub unit: XRat,
    pub factors: Vec<(TPoly, usize)>,
}

impl TFactorization {
    pub fn expand(&self, n: usize) -> TPoly {
        let mut acc = TPoly::constant(n, self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }
}

/// Deterministic order: by total degree, then by terms from the greatest
/// monomial down.
pub fn cmp_factors(a: &TPoly, b: &TPoly) -> Ordering {
    a.total_degree().cmp(&b.total_degree()).then_with(|| {
        let ta = a.terms().rev();
        let tb = b.terms().rev();
        for ((ma, ca), (mb, cb)) in ta.zip(tb) {
            match ma.cmp(mb) {
                Ordering::Equal => {}
                o => return o,
            }
            if ca != cb {
                return ca.to_string().cmp(&cb.to_string());
            }
        }
        a.len().cmp(&b.len())
    })
}

pub fn normalize_factor(f: &TPoly) -> TPoly {
    f.primitive_x().1
}

pub fn factor_t(p: &TPoly, caps: &FactorCaps) -> Result<TFactorization> {
    assert!(!p.is_zero(), "factorization of zero");
    let n = p.n();
    let mut factors: Vec<(TPoly, usize)> = Vec::new();
    for (part, m) in squarefree_t(p) {
        let part = normalize_factor(&part);
        for f in irreducible_factors(&part, caps)? {
            factors.push((normalize_factor(&f), m));
        }
    }
    Ok(finish(p, n, factors))
}

/// Divides out the given irreducible candidates first and factors only the
/// cofactor.
pub fn factor_with_hints(p: &TPoly, hints: &[TPoly], caps: &FactorCaps) -> Result<TFactorization> {
    assert!(!p.is_zero(), "factorization of zero");
    let n = p.n();
    let mut rest = p.clone();
    let mut factors: Vec<(TPoly, usize)> = Vec::new();
    for h in hints {
        if h.is_constant() {
            continue;
        }
        let h = normalize_factor(h);
        if factors.iter().any(|(f, _)| *f == h) {
            continue;
        }
        let mut m = 0;
        while let Some(q) = rest.exact_div(&h) {
            rest = q;
            m += 1;
        }
        if m > 0 {
            factors.push((h, m));
        }
    }
    if !rest.is_constant() {
        for (f, m) in factor_t(&rest, caps)?.factors {
            match factors.iter_mut().find(|(g, _)| *g == f) {
                Some((_, k)) => *k += m,
                None => factors.push((f, m)),
            }
        }
    }
    Ok(finish(p, n, factors))
}

fn finish(p: &TPoly, n: usize, mut factors: Vec<(TPoly, usize)>) -> TFactorization {
    factors.sort_by(|a, b| cmp_factors(&a.0, &b.0));
    let mut lc = XRat::one();
    for (f, m) in &factors {
        lc = &lc * &f.lead().unwrap().1.pow(*m as i32);
    }
    let unit = p.lead().unwrap().1 / &lc;
    let out = TFactorization { unit, factors };
    debug_assert_eq!(out.expand(n), *p);
    out
}

/// Irreducible factors of a square-free polynomial with coefficients in Q[x]
/// and no content in Q[x].
fn irreducible_factors(f: &TPoly, caps: &FactorCaps) -> Result<Vec<TPoly>> {
    let n = f.n();
    if f.is_constant() {
        return Ok(Vec::new());
    }
    let mc = f.monomial_content();
    let mut out = Vec::new();
    for (v, &e) in mc.exps().iter().enumerate() {
        debug_assert!(e <= 1);
        if e > 0 {
            out.push(TPoly::var(n, v));
        }
    }
    let f = TPoly::from_terms(n, f.terms().map(|(m, c)| (m.div(&mc).unwrap(), c.clone())));
    if f.is_constant() {
        return Ok(out);
    }
    if f.total_degree() == Some(1) {
        out.push(f);
        return Ok(out);
    }
    let present: Vec<usize> = (0..n).filter(|&v| f.has_var(v)).collect();
    let x_free = f.x_degree() == 0;

    if present.len() == 1 && x_free {
        let v = present[0];
        let coeffs: Vec<_> = (0..=f.degree_in(v).unwrap())
            .map(|k| {
                let mut e = vec![0; n];
                e[v] = k;
                f.coeff(&Monomial::from_exps(e)).constant_value().unwrap_or_default()
            })
            .collect();
        for (g, _) in factor_x(&XPoly::from_coeffs(coeffs)).factors {
            let terms = g
                .coeffs()
                .iter()
                .enumerate()
                .map(|(k, c)| {
                    let mut e = vec![0; n];
                    e[v] = k as u32;
                    (Monomial::from_exps(e), XRat::constant(c.clone()))
                })
                .collect::<Vec<_>>();
            out.push(TPoly::from_terms(n, terms));
        }
        return Ok(out);
    }

    if f.is_homogeneous() && present.len() >= 2 {
        // factors of a homogeneous polynomial are homogeneous: set the
        // leading variable to 1, factor, and homogenize again
        let v = *present.last().unwrap();
        let de = f.eval_var(v, &XRat::one());
        for g in irreducible_factors(&normalize_factor(&de), caps)? {
            let d = g.total_degree().unwrap();
            out.push(TPoly::from_terms(
                n,
                g.terms().map(|(m, c)| {
                    let mut e = m.exps().to_vec();
                    e[v] += d - m.degree();
                    (Monomial::from_exps(e), c.clone())
                }),
            ));
        }
        return Ok(out);
    }

    out.extend(kronecker(&f, &present, caps)?);
    Ok(out)
}

/// Kronecker substitution `x -> y`, `t_{v_k} -> y^(D^(k+1))`.
fn kronecker(f: &TPoly, present: &[usize], caps: &FactorCaps) -> Result<Vec<TPoly>> {
    let n = f.n();
    let mut d = f.x_degree();
    for &v in present {
        d = d.max(f.degree_in(v).unwrap() as usize);
    }
    let base = d + 1;
    let weights: Vec<usize> = (1..=present.len()).map(|k| base.pow(k as u32)).collect();
    let mut image_deg = 0usize;
    for (m, c) in f.terms() {
        let w: usize = present.iter().zip(&weights).map(|(&v, w)| m.exps()[v] as usize * w).sum();
        image_deg = image_deg.max(w + c.num().degree().unwrap_or(0));
    }
    if image_deg > caps.max_image_degree {
        return Err(Error::DegreeTooLarge { degree: image_deg, cap: caps.max_image_degree });
    }
    let substitute = |p: &TPoly| -> XPoly {
        let mut coeffs = vec![crate::scalar::Rational::default(); image_deg + 1];
        for (m, c) in p.terms() {
            let w: usize = present.iter().zip(&weights).map(|(&v, w)| m.exps()[v] as usize * w).sum();
            for (i, a) in c.num().coeffs().iter().enumerate() {
                coeffs[w + i] += a;
            }
        }
        XPoly::from_coeffs(coeffs)
    };
    let inverse = |u: &XPoly| -> TPoly {
        let mut out = TPoly::zero(n);
        for (e, c) in u.coeffs().iter().enumerate() {
            if c == &crate::scalar::Rational::default() {
                continue;
            }
            let mut rest = e;
            let xdeg = rest % base;
            rest /= base;
            let mut exps = vec![0u32; n];
            for &v in present {
                exps[v] = (rest % base) as u32;
                rest /= base;
            }
            let mut xc = vec![crate::scalar::Rational::default(); xdeg + 1];
            xc[xdeg] = c.clone();
            out.add_term(Monomial::from_exps(exps), XRat::poly(XPoly::from_coeffs(xc)));
        }
        out
    };

    let img = factor_x(&substitute(f));
    let y = XPoly::x();
    let mut y_mult = 0usize;
    let mut items: Vec<XPoly> = Vec::new();
    for (g, m) in img.factors {
        if g == y {
            y_mult = m;
        } else {
            items.extend(core::iter::repeat(g).take(m));
        }
    }
    if items.len() > caps.max_factors {
        return Err(Error::TooManyFactors { count: items.len() });
    }

    let mut rest = f.clone();
    let mut out = Vec::new();
    let mut size = 1;
    'outer: while 2 * size <= items.len() {
        for subset in Subsets::new(items.len(), size) {
            let mut u = XPoly::one();
            for &i in &subset {
                u = &u * &items[i];
            }
            let mut shifted = u;
            for _ in 0..=y_mult {
                let cand = inverse(&shifted);
                if !cand.is_constant() && cand.monomial_content().is_one() {
                    if let Some(q) = rest.exact_div(&cand) {
                        out.push(cand);
                        rest = q;
                        items = items
                            .into_iter()
                            .enumerate()
                            .filter(|(i, _)| !subset.contains(i))
                            .map(|(_, g)| g)
                            .collect();
                        continue 'outer;
                    }
                }
                shifted = &shifted * &y;
            }
        }
        size += 1;
    }
    if !rest.is_constant() {
        out.push(rest);
    }
    Ok(out)
}

/// Product of irreducible factors kept in factored form. Factors are
/// normalized, so equal factors merge and lcm/gcd are multiplicity-wise.
#[derive(Clone, Debug, PartialEq)]
pub struct FactoredPoly {
    pub n: usize,
    pub unit: XRat,
    pub factors: Vec<(TPoly, usize)>,
}

impl FactoredPoly {
    pub fn one(n: usize) -> Self {
        FactoredPoly { n, unit: XRat::one(), factors: Vec::new() }
    }

    pub fn from_factorization(n: usize, f: &TFactorization) -> Self {
        let mut out = FactoredPoly { n, unit: f.unit.clone(), factors: Vec::new() };
        for (g, m) in &f.factors {
            out.push(g, *m);
        }
        out
    }

    /// Multiplies by `f^m`; `f` is assumed irreducible.
    pub fn push(&mut self, f: &TPoly, m: usize) {
        if m == 0 {
            return;
        }
        if let Some(c) = f.constant_value() {
            self.unit = &self.unit * &c.pow(m as i32);
            return;
        }
        let (u, g) = f.primitive_x();
        self.unit = &self.unit * &u.pow(m as i32);
        match self.factors.iter_mut().find(|(h, _)| *h == g) {
            Some((_, k)) => *k += m,
            None => {
                self.factors.push((g, m));
                self.factors.sort_by(|a, b| cmp_factors(&a.0, &b.0));
            }
        }
    }

    pub fn multiplicity(&self, f: &TPoly) -> usize {
        let g = normalize_factor(f);
        self.factors.iter().find(|(h, _)| *h == g).map_or(0, |(_, m)| *m)
    }

    pub fn mul(&self, o: &FactoredPoly) -> FactoredPoly {
        let mut out = self.clone();
        out.unit = &out.unit * &o.unit;
        for (f, m) in &o.factors {
            out.push(f, *m);
        }
        out
    }

    /// Multiplicity-wise maximum, unit 1.
    pub fn lcm(&self, o: &FactoredPoly) -> FactoredPoly {
        let mut out = FactoredPoly::one(self.n);
        for (f, m) in &self.factors {
            out.push(f, (*m).max(o.multiplicity(f)));
        }
        for (f, m) in &o.factors {
            if self.multiplicity(f) == 0 {
                out.push(f, *m);
            }
        }
        out
    }

    /// Multiplicity-wise minimum, unit 1.
    pub fn gcd(&self, o: &FactoredPoly) -> FactoredPoly {
        let mut out = FactoredPoly::one(self.n);
        for (f, m) in &self.factors {
            out.push(f, (*m).min(o.multiplicity(f)));
        }
        out
    }

    /// `self / o` when every multiplicity of `o` is covered.
    pub fn div(&self, o: &FactoredPoly) -> Option<FactoredPoly> {
        let mut out = FactoredPoly::one(self.n);
        out.unit = &self.unit / &o.unit;
        for (f, m) in &o.factors {
            if self.multiplicity(f) < *m {
                return None;
            }
        }
        for (f, m) in &self.factors {
            out.push(f, m - o.multiplicity(f));
        }
        Some(out)
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(f, m)| f.total_degree().unwrap_or(0) * *m as u32).sum()
    }

    pub fn is_one(&self) -> bool {
        self.factors.is_empty() && self.unit.is_one()
    }

    pub fn expand(&self) -> TPoly {
        let mut acc = TPoly::constant(self.n, self.unit.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }
}
