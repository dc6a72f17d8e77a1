//! Univariate factorization over Q.
//!
//! Square-free decomposition over Q, then Zassenhaus: Berlekamp splitting
//! modulo a small prime, linear Hensel lifting of every modular factor, and
//! subset recombination with exact trial division over Z.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use super::{Rational, XPoly};

/// Complete factorization `p = content * prod(f_i ^ m_i)` with monic,
/// irreducible, pairwise distinct `f_i`.
#[derive(Clone, Debug, PartialEq)]
pub struct XFactorization {
    pub content: Rational,
    pub factors: Vec<(XPoly, usize)>,
}

impl XFactorization {
    pub fn expand(&self) -> XPoly {
        let mut acc = XPoly::constant(self.content.clone());
        for (f, m) in &self.factors {
            acc = &acc * &f.pow(*m as u32);
        }
        acc
    }
}

/// Square-free decomposition of a monic polynomial (Yun). Returns pairs
/// `(g_i, i)` with every `g_i` monic, square-free, nonconstant.
pub fn squarefree_x(p: &XPoly) -> Vec<(XPoly, usize)> {
    let mut out = Vec::new();
    if p.degree().unwrap_or(0) == 0 {
        return out;
    }
    let f = p.monic();
    let df = f.derivative();
    let mut a = f.gcd(&df);
    let mut b = f.exact_div(&a).unwrap();
    let mut c = df.exact_div(&a).unwrap().scale(&f.lc().recip());
    let mut d = &c - &b.derivative();
    let mut i = 1;
    while b.degree().unwrap_or(0) > 0 {
        a = b.gcd(&d);
        b = b.exact_div(&a).unwrap();
        c = d.exact_div(&a).unwrap();
        d = &c - &b.derivative();
        if a.degree().unwrap_or(0) > 0 {
            out.push((a.monic(), i));
        }
        i += 1;
    }
    out
}

/// Irreducible factorization over Q.
pub fn factor_x(p: &XPoly) -> XFactorization {
    assert!(!p.is_zero(), "factor_x of the zero polynomial");
    let content = p.lc();
    let mut factors = Vec::new();
    for (g, m) in squarefree_x(p) {
        for f in factor_squarefree(&g) {
            factors.push((f, m));
        }
    }
    factors.sort_by(|a, b| a.0.degree().cmp(&b.0.degree()).then_with(|| cmp_poly(&a.0, &b.0)));
    XFactorization { content, factors }
}

fn cmp_poly(a: &XPoly, b: &XPoly) -> core::cmp::Ordering {
    for (x, y) in a.coeffs().iter().zip(b.coeffs()).rev() {
        match x.cmp(y) {
            core::cmp::Ordering::Equal => continue,
            o => return o,
        }
    }
    a.coeffs().len().cmp(&b.coeffs().len())
}

/// Monic irreducible factors of a square-free polynomial.
pub fn factor_squarefree(g: &XPoly) -> Vec<XPoly> {
    let deg = g.degree().unwrap_or(0);
    if deg == 0 {
        return Vec::new();
    }
    if deg == 1 {
        return vec![g.monic()];
    }
    let (_, mut f) = g.integer_primitive();
    let mut out = Vec::new();
    if f[0].is_zero() {
        out.push(XPoly::x());
        f.remove(0);
    }
    if f.len() == 2 {
        out.push(XPoly::from_bigints(&f).monic());
    } else if f.len() > 2 {
        for h in zassenhaus(&f) {
            out.push(XPoly::from_bigints(&h).monic());
        }
    }
    out
}

// ---------------------------------------------------------------------------
// dense integer polynomials (low degree first)

type ZPoly = Vec<BigInt>;

fn ztrim(mut p: ZPoly) -> ZPoly {
    while p.last().is_some_and(Zero::is_zero) {
        p.pop();
    }
    p
}

fn zmul(a: &[BigInt], b: &[BigInt]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

/// Exact division over Z; `None` unless `b` divides `a` with integral quotient.
fn zdiv_exact(a: &[BigInt], b: &[BigInt]) -> Option<ZPoly> {
    let a = ztrim(a.to_vec());
    let b = ztrim(b.to_vec());
    if b.is_empty() {
        return None;
    }
    if a.is_empty() {
        return Some(Vec::new());
    }
    if a.len() < b.len() {
        return None;
    }
    let lb = b.last().unwrap().clone();
    let mut rem = a;
    let mut q = vec![BigInt::zero(); rem.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let top = &rem[i + b.len() - 1];
        if top.is_zero() {
            continue;
        }
        let (c, r) = top.div_rem(&lb);
        if !r.is_zero() {
            return None;
        }
        for (j, y) in b.iter().enumerate() {
            rem[i + j] -= &c * y;
        }
        q[i] = c;
    }
    if rem.iter().any(|c| !c.is_zero()) {
        return None;
    }
    Some(ztrim(q))
}

fn zcontent(p: &[BigInt]) -> BigInt {
    p.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
}

fn zprimitive(p: ZPoly) -> ZPoly {
    let mut g = zcontent(&p);
    if g.is_zero() {
        return p;
    }
    if p.last().is_some_and(|c| c.is_negative()) {
        g = -g;
    }
    p.into_iter().map(|c| c / &g).collect()
}

// ---------------------------------------------------------------------------
// polynomials over F_p, p < 2^31 (low degree first, trimmed)

type FPoly = Vec<u64>;

fn ftrim(mut a: FPoly) -> FPoly {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn to_fp(a: &BigInt, p: u64) -> u64 {
    a.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

fn fsub(a: &[u64], b: &[u64], p: u64) -> FPoly {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    ftrim(out)
}

fn fmul(a: &[u64], b: &[u64], p: u64) -> FPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    ftrim(out)
}

fn fscale(a: &[u64], c: u64, p: u64) -> FPoly {
    ftrim(a.iter().map(|&x| x * c % p).collect())
}

fn fdivrem(a: &[u64], b: &[u64], p: u64) -> (FPoly, FPoly) {
    let b = ftrim(b.to_vec());
    let mut rem = ftrim(a.to_vec());
    if rem.len() < b.len() {
        return (Vec::new(), rem);
    }
    let inv = inv_mod(*b.last().unwrap(), p);
    let mut q = vec![0u64; rem.len() - b.len() + 1];
    for i in (0..q.len()).rev() {
        let c = rem[i + b.len() - 1] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            rem[i + j] = (rem[i + j] + p - c * y % p) % p;
        }
        q[i] = c;
    }
    rem.truncate(b.len() - 1);
    (ftrim(q), ftrim(rem))
}

fn fmonic(a: &[u64], p: u64) -> FPoly {
    match a.last() {
        None => Vec::new(),
        Some(&l) => fscale(a, inv_mod(l, p), p),
    }
}

fn fgcd(a: &[u64], b: &[u64], p: u64) -> FPoly {
    let mut a = ftrim(a.to_vec());
    let mut b = ftrim(b.to_vec());
    while !b.is_empty() {
        let r = fdivrem(&a, &b, p).1;
        a = b;
        b = r;
    }
    fmonic(&a, p)
}

/// `(s, t)` with `s*a + t*b = 1 (mod p)`, assuming coprime inputs.
fn fext_gcd(a: &[u64], b: &[u64], p: u64) -> (FPoly, FPoly) {
    let (mut r0, mut r1) = (ftrim(a.to_vec()), ftrim(b.to_vec()));
    let (mut s0, mut s1): (FPoly, FPoly) = (vec![1], Vec::new());
    let (mut t0, mut t1): (FPoly, FPoly) = (Vec::new(), vec![1]);
    while !r1.is_empty() {
        let (q, r) = fdivrem(&r0, &r1, p);
        let s = fsub(&s0, &fmul(&q, &s1, p), p);
        let t = fsub(&t0, &fmul(&q, &t1, p), p);
        r0 = core::mem::replace(&mut r1, r);
        s0 = core::mem::replace(&mut s1, s);
        t0 = core::mem::replace(&mut t1, t);
    }
    let inv = inv_mod(*r0.last().unwrap(), p);
    (fscale(&s0, inv, p), fscale(&t0, inv, p))
}

fn fderivative(a: &[u64], p: u64) -> FPoly {
    ftrim(a.iter().enumerate().skip(1).map(|(i, &c)| (i as u64 % p) * c % p).collect())
}

/// Berlekamp factorization of a monic square-free polynomial over F_p.
fn berlekamp(f: &[u64], p: u64) -> Vec<FPoly> {
    let n = f.len() - 1;
    if n <= 1 {
        return vec![f.to_vec()];
    }
    // rows: x^(i*p) mod f
    let xp = {
        let mut acc: FPoly = vec![1];
        let mut base: FPoly = vec![0, 1];
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = fdivrem(&fmul(&acc, &base, p), f, p).1;
            }
            base = fdivrem(&fmul(&base, &base, p), f, p).1;
            e >>= 1;
        }
        acc
    };
    let mut rows: Vec<Vec<u64>> = Vec::with_capacity(n);
    let mut cur: FPoly = vec![1];
    for _ in 0..n {
        let mut row = cur.clone();
        row.resize(n, 0);
        rows.push(row);
        cur = fdivrem(&fmul(&cur, &xp, p), f, p).1;
    }
    // nullspace of (Q - I)^T: columns j of M = Q - I as equations
    let mut m: Vec<Vec<u64>> = (0..n)
        .map(|j| (0..n).map(|i| (rows[i][j] + if i == j { p - 1 } else { 0 }) % p).collect())
        .collect();
    let basis = nullspace_mod(&mut m, n, p);
    let r = basis.len();
    let mut factors: Vec<FPoly> = vec![f.to_vec()];
    for v in basis.iter() {
        if factors.len() == r {
            break;
        }
        let v = ftrim(v.clone());
        if v.len() <= 1 {
            continue;
        }
        let mut next = Vec::new();
        for w in factors {
            if w.len() <= 2 || next.len() + 1 > r {
                next.push(w);
                continue;
            }
            let mut pending = vec![w];
            let mut done = Vec::new();
            for s in 0..p {
                let vs = fsub(&v, &[s], p);
                let mut keep = Vec::new();
                for u in pending {
                    let g = fgcd(&u, &vs, p);
                    if g.len() > 1 && g.len() < u.len() {
                        let h = fdivrem(&u, &g, p).0;
                        keep.push(g);
                        keep.push(fmonic(&h, p));
                    } else {
                        keep.push(u);
                    }
                }
                pending = keep;
                if pending.len() + done.len() >= r {
                    break;
                }
            }
            done.extend(pending);
            next.extend(done);
        }
        factors = next;
    }
    factors
}

/// Basis of `{v : sum_i v_i * eq[j][i] = 0 for all j}` over F_p.
fn nullspace_mod(eqs: &mut [Vec<u64>], n: usize, p: u64) -> Vec<Vec<u64>> {
    let rows = eqs.len();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(pr) = (r..rows).find(|&i| eqs[i][c] != 0) else { continue };
        eqs.swap(r, pr);
        let inv = inv_mod(eqs[r][c], p);
        for x in eqs[r].iter_mut() {
            *x = *x * inv % p;
        }
        for i in 0..rows {
            if i != r && eqs[i][c] != 0 {
                let f = eqs[i][c];
                for k in 0..n {
                    eqs[i][k] = (eqs[i][k] + p - f * eqs[r][k] % p) % p;
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
        if r == rows {
            break;
        }
    }
    let mut basis = Vec::new();
    for free in (0..n).filter(|c| !pivot_cols.contains(c)) {
        let mut v = vec![0u64; n];
        v[free] = 1;
        for (row, &pc) in pivot_cols.iter().enumerate() {
            v[pc] = (p - eqs[row][free]) % p;
        }
        basis.push(v);
    }
    basis
}

const SMALL_PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191, 193,
    197, 199, 211, 223, 227, 229, 233, 239, 241, 251, 257, 263, 269, 271, 277, 281, 283, 293, 307,
    311, 313, 317, 331, 337, 347, 349, 353, 359, 367, 373, 379, 383, 389, 397, 401, 409, 419, 421,
    431, 433, 439, 443, 449, 457, 461, 463, 467, 479, 487, 491, 499, 503, 509, 521, 523, 541,
];

/// Irreducible factors (primitive, positive leading coefficient) of a
/// primitive square-free integer polynomial of degree >= 2.
fn zassenhaus(f: &[BigInt]) -> Vec<ZPoly> {
    let n = f.len() - 1;
    let lc = f[n].clone();
    // choose the admissible prime giving the fewest modular factors
    let mut best: Option<(u64, Vec<FPoly>)> = None;
    let mut tried = 0;
    for &p in SMALL_PRIMES {
        if (&lc % BigInt::from(p)).is_zero() {
            continue;
        }
        let fp: FPoly = ftrim(f.iter().map(|c| to_fp(c, p)).collect());
        let g = fgcd(&fp, &fderivative(&fp, p), p);
        if g.len() > 1 {
            continue;
        }
        let facs = berlekamp(&fmonic(&fp, p), p);
        if facs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().map_or(true, |(_, b)| facs.len() < b.len()) {
            best = Some((p, facs));
        }
        tried += 1;
        if tried >= 6 {
            break;
        }
    }
    let (p, modular) = best.expect("no admissible prime for factorization");

    // coefficient bound for factors of f (Mignotte)
    let max_abs = f.iter().map(|c| c.abs()).max().unwrap();
    let bound = (BigInt::from((n + 1).sqrt() + 1) << n) * max_abs * lc.abs() * 2;
    let pb = BigInt::from(p);
    let mut modulus = pb.clone();
    let mut k = 1u32;
    while modulus <= bound {
        modulus *= &pb;
        k += 1;
    }

    let lifted: Vec<ZPoly> = (0..modular.len())
        .map(|i| {
            let mut h: FPoly = vec![to_fp(&lc, p)];
            for (j, g) in modular.iter().enumerate() {
                if j != i {
                    h = fmul(&h, g, p);
                }
            }
            hensel_lift(f, &modular[i], &h, p, k)
        })
        .collect();

    recombine(f.to_vec(), lifted, &modulus)
}

/// Lifts `f = g*h (mod p)` with `g` monic to a monic `G = g (mod p)` with
/// `f = G*H (mod p^k)`.
fn hensel_lift(f: &[BigInt], g: &[u64], h: &[u64], p: u64, k: u32) -> ZPoly {
    let (_, t) = fext_gcd(g, h, p);
    let pb = BigInt::from(p);
    let mut gz: ZPoly = g.iter().map(|&c| BigInt::from(c)).collect();
    let mut hz: ZPoly = h.iter().map(|&c| BigInt::from(c)).collect();
    let mut pj = pb.clone();
    for _ in 1..k {
        // e = (f - g*h) / p^j mod p
        let gh = zmul(&gz, &hz);
        let n = f.len().max(gh.len());
        let e: FPoly = ftrim(
            (0..n)
                .map(|i| {
                    let a = f.get(i).cloned().unwrap_or_default();
                    let b = gh.get(i).cloned().unwrap_or_default();
                    let d = a - b;
                    debug_assert!((&d % &pj).is_zero());
                    to_fp(&(d / &pj), p)
                })
                .collect(),
        );
        if !e.is_empty() {
            let dg = fdivrem(&fmul(&t, &e, p), g, p).1;
            let rest = fsub(&e, &fmul(h, &dg, p), p);
            let (dh, r) = fdivrem(&rest, g, p);
            debug_assert!(r.is_empty());
            for (i, c) in dg.iter().enumerate() {
                gz[i] += &pj * BigInt::from(*c);
            }
            if hz.len() < dh.len() {
                hz.resize(dh.len(), BigInt::zero());
            }
            for (i, c) in dh.iter().enumerate() {
                hz[i] += &pj * BigInt::from(*c);
            }
        }
        pj *= &pb;
    }
    gz
}

fn symmetric_mod(c: &BigInt, m: &BigInt) -> BigInt {
    let r = c.mod_floor(m);
    if &r * 2 > *m {
        r - m
    } else {
        r
    }
}

fn recombine(mut f: ZPoly, mut lifted: Vec<ZPoly>, modulus: &BigInt) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut size = 1;
    while 2 * size <= lifted.len() {
        let mut found = None;
        for subset in Subsets::new(lifted.len(), size) {
            let lc = f.last().unwrap().clone();
            let mut cand: ZPoly = vec![lc.clone()];
            for &i in &subset {
                cand = zmul(&cand, &lifted[i]);
                cand = cand.iter().map(|c| symmetric_mod(c, modulus)).collect();
            }
            let cand = zprimitive(ztrim(cand));
            if let Some(q) = zdiv_exact(&f, &cand) {
                found = Some((subset, cand, q));
                break;
            }
        }
        match found {
            Some((subset, cand, q)) => {
                out.push(cand);
                f = zprimitive(q);
                lifted = lifted
                    .into_iter()
                    .enumerate()
                    .filter(|(i, _)| !subset.contains(i))
                    .map(|(_, g)| g)
                    .collect();
            }
            None => size += 1,
        }
    }
    if f.len() > 1 {
        out.push(zprimitive(f));
    }
    out
}

/// Lexicographic enumeration of `k`-subsets of `0..n`.
pub(crate) struct Subsets {
    n: usize,
    idx: Vec<usize>,
    done: bool,
}

impl Subsets {
    pub(crate) fn new(n: usize, k: usize) -> Self {
        Subsets { n, idx: (0..k).collect(), done: k > n }
    }
}

impl Iterator for Subsets {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        if self.done {
            return None;
        }
        let out = self.idx.clone();
        let k = self.idx.len();
        let mut i = k;
        loop {
            if i == 0 {
                self.done = true;
                break;
            }
            i -= 1;
            if self.idx[i] < self.n - k + i {
                self.idx[i] += 1;
                for j in i + 1..k {
                    self.idx[j] = self.idx[j - 1] + 1;
                }
                break;
            }
        }
        Some(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn p(c: &[i64]) -> XPoly {
        XPoly::from_i64(c)
    }

    #[test]
    fn spec_examples() {
        let f = factor_x(&p(&[-1, 0, 1]));
        assert_eq!(f.content, rat(1));
        assert_eq!(f.factors, vec![(p(&[-1, 1]), 1), (p(&[1, 1]), 1)]);

        let f = factor_x(&p(&[0, 0, 2]));
        assert_eq!(f.content, rat(2));
        assert_eq!(f.factors, vec![(p(&[0, 1]), 2)]);

        let f = factor_x(&p(&[1, 1, 1]));
        assert_eq!(f.factors, vec![(p(&[1, 1, 1]), 1)]);
    }

    #[test]
    fn cyclotomic_splitting() {
        // x^12 - 1 = product of cyclotomic polynomials of orders 1,2,3,4,6,12
        let mut c = vec![0i64; 13];
        c[0] = -1;
        c[12] = 1;
        let f = factor_x(&p(&c));
        assert_eq!(f.factors.len(), 6);
        assert_eq!(f.expand(), p(&c));
    }

    #[test]
    fn swinnerton_dyer_like_irreducible() {
        // x^4 - 10x^2 + 1 is irreducible over Q but splits modulo every prime
        let f = factor_x(&p(&[1, 0, -10, 0, 1]));
        assert_eq!(f.factors, vec![(p(&[1, 0, -10, 0, 1]), 1)]);
    }

    #[test]
    fn repeated_and_non_monic() {
        let a = p(&[-2, 3]); // 3x - 2
        let b = p(&[1, 0, 1]);
        let c = p(&[5, 0, 0, 1]);
        let q = &(&(&a * &a) * &b) * &(&c * &p(&[7]));
        let f = factor_x(&q);
        assert_eq!(f.expand(), q);
        assert_eq!(f.factors.len(), 3);
        assert!(f.factors.iter().any(|(g, m)| *g == a.monic() && *m == 2));
    }
}
