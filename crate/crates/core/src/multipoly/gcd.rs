//! Exact division, gcd and square-free decomposition in Q(x)[t].

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{Monomial, TPoly};
use crate::scalar::{Rational, XPoly, XRat};

/// Lex-order division; `None` unless the remainder is zero.
pub(crate) fn exact_div(a: &TPoly, b: &TPoly) -> Option<TPoly> {
    assert!(!b.is_zero(), "division by the zero polynomial");
    if a.is_zero() {
        return Some(TPoly::zero(a.n));
    }
    if let Some(c) = b.constant_value() {
        return Some(a.scale(&c.recip()));
    }
    for v in 0..a.n {
        if b.degree_in(v) > a.degree_in(v) {
            return None;
        }
    }
    if depends_on_x(a) || depends_on_x(b) {
        let (ca, pa) = a.primitive_x();
        let (cb, pb) = b.primitive_x();
        let q = exact_div(&lift_x(&pa), &lift_x(&pb))?;
        return Some(drop_x(&q, a.n).scale(&(&ca / &cb)));
    }
    let (lm, lc) = b.lead().map(|(m, c)| (m.clone(), c.recip())).unwrap();
    let mut rem = a.clone();
    let mut q = TPoly::zero(a.n);
    while let Some((m, c)) = rem.lead() {
        let mq = m.div(&lm)?;
        let cq = c * &lc;
        for (mb, cb) in b.terms.iter() {
            rem.add_term(mb.mul(&mq), -(cb * &cq));
        }
        q.add_term(mq, cq);
    }
    Some(q)
}

/// Coefficients of `p` as a polynomial in `t_v`, lowest degree first.
fn to_uni(p: &TPoly, v: usize) -> Vec<TPoly> {
    let d = p.degree_in(v).unwrap_or(0) as usize;
    let mut out: Vec<TPoly> = (0..=d).map(|_| TPoly::zero(p.n)).collect();
    for (m, c) in &p.terms {
        let mut e = m.0.clone();
        let k = core::mem::replace(&mut e[v], 0) as usize;
        out[k].terms.insert(Monomial(e), c.clone());
    }
    out
}

fn from_uni(c: &[TPoly], v: usize) -> TPoly {
    let n = c[0].n;
    let mut out = TPoly::zero(n);
    for (k, ck) in c.iter().enumerate() {
        for (m, val) in &ck.terms {
            let mut e = m.0.clone();
            e[v] += k as u32;
            out.terms.insert(Monomial(e), val.clone());
        }
    }
    out
}

fn trim(c: &mut Vec<TPoly>) {
    while c.len() > 1 && c.last().unwrap().is_zero() {
        c.pop();
    }
}

/// gcd of the coefficients of `p` with respect to `t_v`.
fn content_in(p: &TPoly, v: usize) -> TPoly {
    let coeffs = to_uni(p, v);
    let mut g = TPoly::zero(p.n);
    for c in coeffs.iter().filter(|c| !c.is_zero()) {
        g = tpoly_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

/// Pseudo-remainder of `a` by `b` in `t_v` (scaled by a power of `lc(b)`).
fn prem(a: &TPoly, b: &TPoly, v: usize) -> TPoly {
    let mut r = to_uni(a, v);
    let bu = to_uni(b, v);
    let db = bu.len() - 1;
    let lb = bu[db].clone();
    while r.len() > db && !(r.len() == 1 && r[0].is_zero()) {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        let k = dr - db;
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (j, bj) in bu.iter().enumerate() {
            r[j + k] = &r[j + k] - &(&lr * bj);
        }
        debug_assert!(r[dr].is_zero());
        r.pop();
        trim(&mut r);
        if r.is_empty() {
            r.push(TPoly::zero(a.n));
        }
    }
    from_uni(&r, v)
}

fn pp_in(p: &TPoly, v: usize) -> TPoly {
    let c = content_in(p, v);
    if c.is_one() {
        p.clone()
    } else {
        p.exact_div(&c).expect("content divides")
    }
}

/// Scales a polynomial with rational coefficients to integer coefficients
/// without common factor.
fn primitive_z(p: &TPoly) -> TPoly {
    let mut den = BigInt::one();
    let mut num = BigInt::zero();
    for c in p.terms.values() {
        let r = c.constant_value().expect("rational coefficients");
        den = den.lcm(r.denom());
        num = num.gcd(r.numer());
    }
    if num.is_zero() {
        return p.clone();
    }
    p.scale(&XRat::constant(Rational::new(den, num)))
}

fn rat_coeff(c: &XRat) -> Rational {
    c.constant_value().expect("rational coefficients")
}

/// Coefficients of `p` in `t_y`, keyed by the remaining monomial.
fn split_var(p: &TPoly, y: usize) -> BTreeMap<Monomial, Vec<Rational>> {
    let mut out: BTreeMap<Monomial, Vec<Rational>> = BTreeMap::new();
    for (m, c) in &p.terms {
        let mut e = m.0.clone();
        let k = core::mem::replace(&mut e[y], 0) as usize;
        let v = out.entry(Monomial(e)).or_default();
        if v.len() <= k {
            v.resize(k + 1, Rational::zero());
        }
        v[k] = rat_coeff(c);
    }
    out
}

fn join_var(n: usize, y: usize, parts: impl IntoIterator<Item = (Monomial, XPoly)>) -> TPoly {
    let mut out = TPoly::zero(n);
    for (m, c) in parts {
        for (k, a) in c.coeffs().iter().enumerate() {
            if !a.is_zero() {
                let mut e = m.0.clone();
                e[y] += k as u32;
                out.terms.insert(Monomial(e), XRat::constant(a.clone()));
            }
        }
    }
    out
}

fn y_content(parts: &BTreeMap<Monomial, Vec<Rational>>) -> XPoly {
    let mut g = XPoly::zero();
    for c in parts.values() {
        g = g.gcd(&XPoly::from_coeffs(c.clone()));
        if g.is_one() {
            break;
        }
    }
    g
}

/// `p` divided, coefficient by coefficient in `t_y`, by `c`.
fn div_content(p: &TPoly, y: usize, c: &XPoly) -> TPoly {
    if c.is_one() {
        return p.clone();
    }
    let parts = split_var(p, y);
    join_var(p.n, y, parts.into_iter().map(|(m, v)| (m, XPoly::from_coeffs(v).exact_div(c).expect("content divides"))))
}

fn eval_var(p: &TPoly, y: usize, at: &Rational) -> TPoly {
    let mut out = TPoly::zero(p.n);
    for (m, c) in split_var(p, y) {
        out.add_term(m, XRat::constant(XPoly::from_coeffs(c).eval(at)));
    }
    out
}

/// Multiplies `p` by the polynomial `c(t_y)`.
fn mul_var(p: &TPoly, y: usize, c: &XPoly) -> TPoly {
    let parts = split_var(p, y);
    join_var(p.n, y, parts.into_iter().map(|(m, v)| (m, &XPoly::from_coeffs(v) * c)))
}

/// gcd over Q by evaluation at integer points in the least significant
/// variable and Newton interpolation, checked by trial division.  The
/// result is correct up to a rational factor; `None` means no answer was
/// found within the point budget.
fn dense_gcd(a: &TPoly, b: &TPoly) -> Option<TPoly> {
    let n = a.n;
    let vars: Vec<usize> = (0..n).filter(|&i| a.has_var(i) || b.has_var(i)).collect();
    match vars.len() {
        0 => return Some(TPoly::one(n)),
        1 => {
            let v = vars[0];
            let ua = XPoly::from_coeffs(split_var(a, v).remove(&Monomial::one(n)).unwrap_or_default());
            let ub = XPoly::from_coeffs(split_var(b, v).remove(&Monomial::one(n)).unwrap_or_default());
            return Some(join_var(n, v, [(Monomial::one(n), ua.gcd(&ub))]));
        }
        _ => {}
    }
    let y = vars[0];
    let (pa, pb) = (split_var(a, y), split_var(b, y));
    let (ca, cb) = (y_content(&pa), y_content(&pb));
    let c = ca.gcd(&cb);
    let content = join_var(n, y, [(Monomial::one(n), c)]);
    let a = div_content(a, y, &ca);
    let b = div_content(b, y, &cb);
    if (0..n).all(|i| i == y || !a.has_var(i)) || (0..n).all(|i| i == y || !b.has_var(i)) {
        return Some(content);
    }
    let la = XPoly::from_coeffs(split_var(&a, y).into_iter().next_back().unwrap().1);
    let lb = XPoly::from_coeffs(split_var(&b, y).into_iter().next_back().unwrap().1);
    let gamma = la.gcd(&lb);
    let bound = gamma.degree().unwrap_or(0) + a.degree_in(y).unwrap_or(0).min(b.degree_in(y).unwrap_or(0)) as usize;

    let mut lead: Option<Monomial> = None;
    let mut h = TPoly::zero(n);
    let mut basis = XPoly::one();
    let mut used = 0usize;
    for step in 0..(4 * bound + 40) as i64 {
        let k = if step % 2 == 0 { step / 2 + 1 } else { -(step / 2 + 1) };
        let at = Rational::from_integer(BigInt::from(k));
        if la.eval(&at).is_zero() || lb.eval(&at).is_zero() {
            continue;
        }
        let img = dense_gcd(&eval_var(&a, y, &at), &eval_var(&b, y, &at))?;
        if img.is_constant() {
            return Some(content);
        }
        let (lm, lc) = img.lead().map(|(m, c)| (m.clone(), rat_coeff(c))).unwrap();
        let img = img.scale(&XRat::constant(gamma.eval(&at) / lc));
        match lead.as_ref().map(|l| lm.cmp(l)) {
            Some(core::cmp::Ordering::Greater) => continue,
            Some(core::cmp::Ordering::Equal) => {}
            _ => {
                lead = Some(lm);
                h = TPoly::zero(n);
                basis = XPoly::one();
                used = 0;
            }
        }
        let diff = &img - &eval_var(&h, y, &at);
        let stable = diff.is_zero() && used > 0;
        if !diff.is_zero() {
            let w = basis.eval(&at);
            h = &h + &mul_var(&diff, y, &basis.scale(&w.recip()));
        }
        basis = &basis * &XPoly::linear_root(at);
        used += 1;
        if stable || used > bound {
            let cand = div_content(&h, y, &y_content(&split_var(&h, y)));
            if exact_div(&a, &cand).is_some() && exact_div(&b, &cand).is_some() {
                return Some(&content * &cand);
            }
        }
    }
    None
}

fn depends_on_x(p: &TPoly) -> bool {
    p.terms.values().any(|c| !c.is_constant())
}

/// Q[x][t] -> Q[x, t]: `x` becomes variable 0, the least significant.
fn lift_x(p: &TPoly) -> TPoly {
    let mut out = TPoly::zero(p.n + 1);
    for (m, c) in &p.terms {
        debug_assert!(c.den().is_one());
        for (k, a) in c.num().coeffs().iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let mut e = Vec::with_capacity(p.n + 1);
            e.push(k as u32);
            e.extend_from_slice(&m.0);
            out.terms.insert(Monomial(e), XRat::constant(a.clone()));
        }
    }
    out
}

fn drop_x(p: &TPoly, n: usize) -> TPoly {
    let mut out = TPoly::zero(n);
    for (m, c) in &p.terms {
        let k = m.0[0] as usize;
        let mut xc = vec![Rational::zero(); k + 1];
        xc[k] = c.constant_value().expect("lifted coefficients are rational");
        out.add_term(Monomial(m.0[1..].to_vec()), XRat::poly(XPoly::from_coeffs(xc)));
    }
    out
}

/// Monic gcd (coefficient 1 at the greatest monomial); `gcd(0, 0) = 0`.
pub fn tpoly_gcd(p: &TPoly, q: &TPoly) -> TPoly {
    if p.is_zero() {
        return q.monic();
    }
    if q.is_zero() || p == q {
        return p.monic();
    }
    if p.is_constant() || q.is_constant() {
        return TPoly::one(p.n);
    }
    if depends_on_x(p) || depends_on_x(q) {
        // arithmetic in Q(x) is far slower than treating x as one more variable
        let g = tpoly_gcd(&lift_x(&p.primitive_x().1), &lift_x(&q.primitive_x().1));
        return drop_x(&g, p.n).monic();
    }
    let mp = p.monomial_content();
    let mq = q.monomial_content();
    if !mp.is_one() || !mq.is_one() {
        let m = mp.gcd(&mq);
        let p1 = TPoly { n: p.n, terms: p.terms.iter().map(|(k, c)| (k.div(&mp).unwrap(), c.clone())).collect() };
        let q1 = TPoly { n: q.n, terms: q.terms.iter().map(|(k, c)| (k.div(&mq).unwrap(), c.clone())).collect() };
        return tpoly_gcd(&p1, &q1).mul_monomial(&m);
    }
    let v = p.highest_var().max(q.highest_var()).unwrap();
    if !p.has_var(v) {
        return tpoly_gcd(p, &content_in(q, v));
    }
    if !q.has_var(v) {
        return tpoly_gcd(&content_in(p, v), q);
    }
    let cp = content_in(p, v);
    let cq = content_in(q, v);
    let c = tpoly_gcd(&cp, &cq);
    let mut a = if cp.is_one() { p.clone() } else { p.exact_div(&cp).unwrap() };
    let mut b = if cq.is_one() { q.clone() } else { q.exact_div(&cq).unwrap() };
    if a.degree_in(v) < b.degree_in(v) {
        core::mem::swap(&mut a, &mut b);
    }
    if let Some(g) = dense_gcd(&a, &b) {
        return (&c * &g).monic();
    }
    a = primitive_z(&a);
    b = primitive_z(&b);
    let g = loop {
        let r = prem(&a, &b, v);
        if r.is_zero() {
            break pp_in(&b, v);
        }
        if !r.has_var(v) {
            break TPoly::one(p.n);
        }
        a = b;
        b = primitive_z(&pp_in(&r, v));
    };
    (&c * &g).monic()
}

fn derivative_in(p: &TPoly, v: usize) -> TPoly {
    let mut out = TPoly::zero(p.n);
    for (m, c) in &p.terms {
        let k = m.0[v];
        if k == 0 {
            continue;
        }
        let mut e = m.0.clone();
        e[v] -= 1;
        out.add_term(Monomial(e), c.scale(&crate::scalar::rat(k as i64)));
    }
    out
}

/// Square-free decomposition: pairwise coprime monic square-free parts with
/// distinct multiplicities, ascending; their product equals `p` up to a
/// unit of Q(x).
pub fn squarefree_t(p: &TPoly) -> Vec<(TPoly, usize)> {
    assert!(!p.is_zero(), "square-free decomposition of zero");
    let mut parts: Vec<(TPoly, usize)> = Vec::new();
    collect_squarefree(p, &mut parts);
    let mut merged: Vec<(TPoly, usize)> = Vec::new();
    for (f, m) in parts {
        match merged.iter_mut().find(|(_, k)| *k == m) {
            Some((g, _)) => *g = &*g * &f,
            None => merged.push((f, m)),
        }
    }
    merged.sort_by_key(|(_, m)| *m);
    merged.into_iter().map(|(f, m)| (f.monic(), m)).collect()
}

fn collect_squarefree(p: &TPoly, out: &mut Vec<(TPoly, usize)>) {
    if p.is_constant() {
        return;
    }
    let n = p.n;
    let mc = p.monomial_content();
    for (v, &e) in mc.0.iter().enumerate() {
        if e > 0 {
            out.push((TPoly::var(n, v), e as usize));
        }
    }
    let p = TPoly { n, terms: p.terms.iter().map(|(k, c)| (k.div(&mc).unwrap(), c.clone())).collect() };
    if p.is_constant() {
        return;
    }
    let v = p.highest_var().unwrap();
    let cont = content_in(&p, v);
    let f = if cont.is_one() { p.clone() } else { p.exact_div(&cont).unwrap() };

    // Yun in t_v
    let df = derivative_in(&f, v);
    let a0 = tpoly_gcd(&f, &df);
    let mut b = f.exact_div(&a0).unwrap();
    let c = df.exact_div(&a0).unwrap();
    let mut d = &c - &derivative_in(&b, v);
    let mut i = 1;
    while b.has_var(v) {
        let a = tpoly_gcd(&b, &d);
        b = b.exact_div(&a).unwrap();
        let c = d.exact_div(&a).unwrap();
        d = &c - &derivative_in(&b, v);
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    collect_squarefree(&cont, out);
}

#[cfg(test)]
mod tests {
    use super::super::tests::{lin, tp};
    use super::*;

    #[test]
    fn gcd_examples() {
        let a = &lin(1, -1) * &lin(1, 1);
        assert_eq!(tpoly_gcd(&a, &lin(1, -1)), lin(-1, 1));
        assert_eq!(tpoly_gcd(&a, &a), a.monic());
        let p = &lin(1, 1) * &lin(1, -1);
        let q = &lin(1, 1) * &lin(2, -1);
        assert_eq!(tpoly_gcd(&p, &q), lin(1, 1));
        // coprime
        assert!(tpoly_gcd(&lin(1, -1), &lin(2, -1)).is_one());
    }

    #[test]
    fn gcd_with_x_coefficients() {
        let x = XRat::x();
        let f = TPoly::linear(&[XRat::int(2), x.clone()]);
        let g = TPoly::linear(&[XRat::one(), XRat::int(3)]);
        let h = TPoly::linear(&[x.clone(), XRat::one()]);
        let a = &(&f * &g) * &h;
        let b = &(&f * &h) * &TPoly::var(2, 0);
        assert_eq!(tpoly_gcd(&a, &b), (&f * &h).monic());
    }

    #[test]
    fn gcd_with_x_coefficients_three_variables() {
        let x = XRat::x();
        let t = |i| TPoly::var(3, i);
        let c = |r: XRat| TPoly::constant(3, r);
        let f = &(&(&t(2) * &c(x.clone())) + &t(0)) + &c(XRat::new(XPoly::one(), XPoly::from_i64(&[1, 1])));
        let h = &t(1) - &t(2).scale(&x.pow(2));
        let common = &f * &h;
        let a = &common * &(&t(2) + &t(1).scale(&x));
        let b = &common * &(&(&t(2).scale(&x) - &c(XRat::int(3))) * &(&t(0) + &t(1)));
        assert_eq!(tpoly_gcd(&a, &b), common.monic());
        assert_eq!(exact_div(&b, &common).map(|q| &q * &common), Some(b.clone()));
        assert_eq!(exact_div(&a, &(&t(0) - &t(1))), None);
        assert!(tpoly_gcd(&a, &(&t(0) - &c(x.clone()))).is_one());
    }

    #[test]
    fn gcd_three_variables() {
        let t = |i| TPoly::var(3, i);
        let f = &(&t(0) * &t(1)) + &t(2).pow(2);
        let g = &t(0) + &t(2);
        let h = &t(1) - &t(0);
        let a = &f * &g;
        let b = &(&f * &h) * &h;
        assert_eq!(tpoly_gcd(&a, &b), f.monic());
        assert_eq!(exact_div(&b, &f), Some(&h * &h));
        assert_eq!(exact_div(&a, &h), None);
    }

    #[test]
    fn squarefree_examples() {
        let p = &lin(1, -1).pow(2) * &lin(1, 1);
        assert_eq!(squarefree_t(&p), [(lin(1, 1), 1), (lin(-1, 1), 2)]);
        let irr = tp(&[(1, &[2, 0]), (1, &[0, 2])]);
        assert_eq!(squarefree_t(&irr), [(irr.clone(), 1)]);

        let big = &(&(&lin(3, -2).pow(2) * &lin(1, -1).pow(2)) * &lin(2, -1)) * &lin(1, 1);
        let big = big.scale(&XRat::int(2592));
        let sf = squarefree_t(&big);
        assert_eq!(sf.len(), 2);
        assert_eq!(sf[0], ((&lin(2, -1) * &lin(1, 1)).monic(), 1));
        assert_eq!(sf[1], ((&lin(3, -2) * &lin(1, -1)).monic(), 2));
    }
}
