//! Discovery of linear special polynomials: eigenforms of constant systems
//! and hypergeometric solutions of the dual system `sigma^s(V) = B V`.

use alloc::vec::Vec;

use num_traits::{One, Zero};

use crate::classify::{proportional, special_test, FactorClass, OreOperator};
use crate::error::{Error, Result};
use crate::field::ShiftSystem;
use crate::linalg::{inverse, mat_vec, nullspace, transpose, vec_mat, Matrix};
use crate::multipoly::TPoly;
use crate::scalar::{factor_x, integer_roots, rat, rational_roots, Rational, XPoly, XRat};

/// Largest degree tried for polynomial solutions, whatever the bound says.
const MAX_POLY_DEGREE: i64 = 64;

/// `sigma(y) = ratio * y` for a solution `y`.
#[derive(Clone, Debug, PartialEq)]
pub struct HypergeomCert {
    pub ratio: XRat,
    /// The constant `z` came from a simple root of its indicial polynomial.
    pub multiplicity_free: bool,
}

/// All products `prod f_i^e_i` with `e_i <= m_i`.
fn monic_divisors(p: &XPoly) -> Vec<XPoly> {
    let mut out = alloc::vec![XPoly::one()];
    if p.is_constant() {
        return out;
    }
    for (f, m) in factor_x(p).factors {
        let mut next = Vec::with_capacity(out.len() * (m + 1));
        for d in &out {
            let mut acc = d.clone();
            next.push(acc.clone());
            for _ in 0..m {
                acc = &acc * &f;
                next.push(acc.clone());
            }
        }
        out = next;
    }
    out
}

fn binomial(k: usize, j: usize) -> Rational {
    let mut b = Rational::one();
    for i in 0..j {
        b = b * rat((k - i) as i64) / rat((i + 1) as i64);
    }
    b
}

/// Basis of the polynomial solutions of `sum_k q_k(x) C(x+k) = 0`.
pub fn polynomial_solutions(q: &[XPoly]) -> Vec<XPoly> {
    // rewrite in powers of the forward difference
    let r: Vec<XPoly> = (0..q.len())
        .map(|j| {
            let mut acc = XPoly::zero();
            for (k, qk) in q.iter().enumerate().skip(j) {
                acc = &acc + &qk.scale(&binomial(k, j));
            }
            acc
        })
        .collect();
    let Some(b) = r.iter().enumerate().filter(|(_, p)| !p.is_zero()).map(|(j, p)| p.degree().unwrap() as i64 - j as i64).max()
    else {
        return Vec::new();
    };
    // coefficient of x^(N+b) as a polynomial in N
    let mut indicial = XPoly::zero();
    for (j, rj) in r.iter().enumerate() {
        if rj.is_zero() || rj.degree().unwrap() as i64 - j as i64 != b {
            continue;
        }
        let mut falling = XPoly::one();
        for i in 0..j {
            falling = &falling * &XPoly::from_i64(&[-(i as i64), 1]);
        }
        indicial = &indicial + &falling.scale(&rj.lc());
    }
    let Some(bound) = integer_roots(&indicial).into_iter().filter(|&n| n >= 0).max() else {
        return Vec::new();
    };
    let bound = bound.min(MAX_POLY_DEGREE) as usize;
    // images of 1, x, ..., x^bound
    let cols: Vec<XPoly> = (0..=bound)
        .map(|i| {
            let mono = XPoly::from_coeffs((0..=i).map(|d| if d == i { Rational::one() } else { Rational::zero() }).collect());
            let mut acc = XPoly::zero();
            for (k, qk) in q.iter().enumerate() {
                acc = &acc + &(qk * &mono.shift_int(k as i64));
            }
            acc
        })
        .collect();
    let rows = cols.iter().filter_map(XPoly::degree).max().map_or(0, |d| d + 1);
    let m: Matrix<Rational> = (0..rows).map(|d| cols.iter().map(|c| c.coeff(d)).collect()).collect();
    nullspace(&m, bound + 1).into_iter().map(XPoly::from_coeffs).collect()
}

/// Hypergeometric solutions of `L(y) = 0` over Q(x).
pub fn hypergeometric_solutions(l: &OreOperator) -> Vec<HypergeomCert> {
    let d = l.order();
    assert!(d >= 1 && !l.coeffs[0].is_zero(), "operator must have order >= 1 and c_0 != 0");
    let mut den = XPoly::one();
    for c in &l.coeffs {
        den = den.lcm(c.den());
    }
    let p: Vec<XPoly> = l.coeffs.iter().map(|c| c.num() * &den.exact_div(c.den()).unwrap()).collect();

    let mut out: Vec<HypergeomCert> = Vec::new();
    let a_divs = monic_divisors(&p[0]);
    let b_divs = monic_divisors(&p[d].shift_int(1 - d as i64));
    for a in &a_divs {
        for b in &b_divs {
            let big: Vec<XPoly> = (0..=d)
                .map(|k| {
                    let mut acc = p[k].clone();
                    for j in 0..k {
                        acc = &acc * &a.shift_int(j as i64);
                    }
                    for j in k..d {
                        acc = &acc * &b.shift_int(j as i64);
                    }
                    acc
                })
                .collect();
            let top = big.iter().filter_map(XPoly::degree).max().unwrap();
            let zpoly = XPoly::from_coeffs(big.iter().map(|pk| pk.coeff(top)).collect());
            if zpoly.is_constant() {
                continue;
            }
            let zs = rational_roots(&zpoly);
            for z in zs.iter().filter(|z| !z.is_zero()) {
                let simple = !zpoly.exact_div(&XPoly::linear_root(z.clone()).pow(2)).is_some();
                let mut zk = Rational::one();
                let q: Vec<XPoly> = big
                    .iter()
                    .map(|pk| {
                        let t = pk.scale(&zk);
                        zk = &zk * z;
                        t
                    })
                    .collect();
                for c in polynomial_solutions(&q) {
                    let ratio = &XRat::new(a.clone(), b.clone()) * &XRat::new(c.shift_int(1), c.clone());
                    let ratio = ratio.scale(z);
                    if out.iter().any(|h| h.ratio == ratio) {
                        continue;
                    }
                    debug_assert!(l.apply_to_ratio(&ratio).is_zero());
                    if l.apply_to_ratio(&ratio).is_zero() {
                        out.push(HypergeomCert { ratio, multiplicity_free: simple });
                    }
                }
            }
        }
    }
    out
}

fn linear_form(w: &[XRat]) -> TPoly {
    TPoly::linear(w).primitive_x().1
}

/// One linear form per rational eigenvector basis element, with
/// `sigma(w . t) = lambda (w . t)`; eigenvalues ascending.
pub fn cfinite_specials(sys: &ShiftSystem) -> Result<Vec<(TPoly, Rational)>> {
    let eig = sys.eigenspaces().ok_or(Error::NotImplemented("eigenforms need a constant system matrix"))?;
    if eig.spaces.is_empty() {
        return Err(Error::IrrationalEigenvalues { charpoly: eig.charpoly });
    }
    let mut out = Vec::new();
    for (mu, basis) in &eig.spaces {
        for w in basis {
            let w: Vec<XRat> = w.iter().cloned().map(XRat::constant).collect();
            out.push((linear_form(&w), mu.clone()));
        }
    }
    Ok(out)
}

fn dilate_matrix(m: &Matrix<XRat>, c: &Rational) -> Matrix<XRat> {
    m.iter().map(|row| row.iter().map(|e| e.dilate(c)).collect()).collect()
}

fn shift_row(v: &[XRat]) -> Vec<XRat> {
    v.iter().map(|e| e.shift(1)).collect()
}

/// Deterministic starting vectors for the cyclic-vector search.
fn cyclic_candidates(n: usize) -> Vec<Vec<XRat>> {
    let mut out: Vec<Vec<XRat>> = Vec::new();
    for j in (0..n).rev() {
        out.push((0..n).map(|k| if k == j { XRat::one() } else { XRat::zero() }).collect());
    }
    for e in 1..=3i64 {
        out.push((0..n).map(|k| XRat::int((k as i64 + 1).pow(e as u32))).collect());
    }
    out.push((0..n).map(|k| XRat::poly(XPoly::x().pow(k as u32))).collect());
    out
}

/// Scalar operator for `y = c . V` where `tau(V) = B V`, with the matrix
/// `C` of rows `c_k` (`tau^k(y) = c_k . V`).
fn cyclic_reduction(b: &Matrix<XRat>) -> Result<(OreOperator, Matrix<XRat>)> {
    let n = b.len();
    for c in cyclic_candidates(n) {
        let mut rows = alloc::vec![c];
        for _ in 0..n {
            let next = vec_mat(&shift_row(rows.last().unwrap()), b);
            rows.push(next);
        }
        let cn = rows.pop().unwrap();
        let Some(cinv) = inverse(&rows) else { continue };
        // lambda . C = c_n
        let lambda = vec_mat(&cn, &cinv);
        let mut coeffs: Vec<XRat> = lambda.iter().map(|v| -v).collect();
        coeffs.push(XRat::one());
        return Ok((OreOperator { coeffs }, rows));
    }
    Err(Error::CyclicVectorFailure)
}

/// Linear forms `w . t` with `sigma^s(w . t) = u (w . t)` for some
/// `s <= max_s`, each returned with its minimal `ell` and unit.
pub fn find_linear_specials(sys: &ShiftSystem, max_s: usize) -> Result<Vec<(TPoly, usize, XRat)>> {
    let n = sys.n();
    assert!(max_s >= 1, "max_s must be positive");
    let mut out: Vec<(TPoly, usize, XRat)> = Vec::new();
    for s in 1..=max_s {
        // sigma^s(w) A_(s) = u w  <=>  sigma^s(V) = B V with B = (A_(s)^T)^{-1},
        // V = y w^T and u = y / sigma^s(y); x = s*xi makes sigma^s a unit shift
        let at = transpose(&sys.system_power(s));
        let binv = inverse(&at).ok_or(Error::SingularMatrix)?;
        let sr = rat(s as i64);
        let b = dilate_matrix(&binv, &sr);
        let (op, cmat) = cyclic_reduction(&b)?;
        let cinv = inverse(&cmat).expect("cyclic basis");
        for cert in hypergeometric_solutions(&op) {
            // V / y = C^{-1} (1, r, r tau(r), ...)
            let mut col = Vec::with_capacity(n);
            let mut acc = XRat::one();
            for k in 0..n {
                if k > 0 {
                    acc = &acc * &cert.ratio.shift(k as i64 - 1);
                }
                col.push(acc.clone());
            }
            let w = mat_vec(&cinv, &col);
            let back = sr.recip();
            let w: Vec<XRat> = w.iter().map(|e| e.dilate(&back)).collect();
            if w.iter().all(XRat::is_zero) {
                continue;
            }
            let form = linear_form(&w);
            if out.iter().any(|(f, _, _)| proportional(f, &form).is_some()) {
                continue;
            }
            match special_test(sys, &form) {
                FactorClass::Special { ell, unit } => out.push((form, ell, unit)),
                FactorClass::Normal => debug_assert!(false, "reconstructed form is not special"),
            }
        }
    }
    Ok(out)
}

/// Special polynomials of a given t-degree; only degree 1 is supported.
pub fn find_specials_of_degree(sys: &ShiftSystem, degree: u32, max_s: usize) -> Result<Vec<(TPoly, usize, XRat)>> {
    match degree {
        1 => find_linear_specials(sys, max_s),
        _ => Err(Error::NotImplemented("special polynomials of t-degree >= 2")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multipoly::tests::lin;
    use alloc::vec;

    fn ints(c: &[i64]) -> Vec<XRat> {
        c.iter().map(|&v| XRat::int(v)).collect()
    }

    fn sys(rows: &[&[i64]]) -> ShiftSystem {
        ShiftSystem::make_general(rows.iter().map(|r| ints(r)).collect()).unwrap()
    }

    fn strange() -> ShiftSystem {
        ShiftSystem::make_general(vec![vec![XRat::int(2), XRat::x()], vec![XRat::zero(), XRat::int(2)]]).unwrap()
    }

    fn ratios(l: &OreOperator) -> Vec<XRat> {
        hypergeometric_solutions(l).into_iter().map(|h| h.ratio).collect()
    }

    #[test]
    fn hyper_examples() {
        let mut r = ratios(&OreOperator { coeffs: ints(&[6, -5, 1]) });
        r.sort_by_key(|h| h.leading_ratio());
        assert_eq!(r, ints(&[2, 3]));
        assert!(ratios(&OreOperator { coeffs: ints(&[-1, -1, 1]) }).is_empty());
        let c0 = -XRat::new(XPoly::from_i64(&[1, 1]), XPoly::x());
        let first = XRat::new(XPoly::from_i64(&[1, 1]), XPoly::x());
        assert_eq!(ratios(&OreOperator { coeffs: vec![c0, XRat::one()] }), [first]);
    }

    #[test]
    fn hyper_factorial_and_polynomial() {
        // (S - (x+1)) (S - 2): y = x! and y = 2^x... composed operator
        let a = XRat::poly(XPoly::from_i64(&[1, 1]));
        let two = XRat::int(2);
        // (S - a)(S - 2) = S^2 - (2 + a(x)) S ... with sigma applied to 2 -> 2
        let l = OreOperator { coeffs: vec![&a * &two, -(&a + &two), XRat::one()] };
        for h in hypergeometric_solutions(&l) {
            assert!(l.apply_to_ratio(&h.ratio).is_zero());
        }
        assert!(ratios(&l).contains(&two));
        assert_eq!(polynomial_solutions(&[XPoly::from_i64(&[-1, -1]), XPoly::x()]), [XPoly::x()]);
    }

    #[test]
    fn cfinite_examples() {
        let got = cfinite_specials(&sys(&[&[0, 1], &[2, 1]])).unwrap();
        assert_eq!(got, [(lin(-2, 1), rat(-1)), (lin(1, 1), rat(2))]);
        let worked = sys(&[&[0, 1], &[-6, 5]]);
        let got = cfinite_specials(&worked).unwrap();
        assert_eq!(got, [(lin(-3, 1), rat(2)), (lin(-2, 1), rat(3))]);
        for (f, mu) in got {
            assert_eq!(special_test(&worked, &f), FactorClass::Special { ell: 1, unit: XRat::constant(mu) });
        }
        match cfinite_specials(&sys(&[&[0, 1], &[1, 1]])) {
            Err(Error::IrrationalEigenvalues { charpoly }) => assert_eq!(charpoly, XPoly::from_i64(&[-1, -1, 1])),
            r => panic!("{:?}", r),
        }
    }

    #[test]
    fn linear_specials_examples() {
        let worked = sys(&[&[0, 1], &[-6, 5]]);
        let mut got = find_linear_specials(&worked, 1).unwrap();
        got.sort_by(|a, b| a.2.leading_ratio().cmp(&b.2.leading_ratio()));
        assert_eq!(got, [(lin(-3, 1), 1, XRat::int(2)), (lin(-2, 1), 1, XRat::int(3))]);

        let got = find_linear_specials(&strange(), 1).unwrap();
        assert!(got.contains(&(lin(0, 1), 1, XRat::int(2))), "{:?}", got);
        for (f, ell, u) in &got {
            assert_eq!(special_test(&strange(), f), FactorClass::Special { ell: *ell, unit: u.clone() });
        }

        assert!(find_linear_specials(&sys(&[&[0, 1], &[1, 1]]), 2).unwrap().is_empty());
        assert!(matches!(find_specials_of_degree(&worked, 2, 1), Err(Error::NotImplemented(_))));
    }

    #[test]
    fn period_two_special() {
        // sigma(t0) = t1, sigma(t1) = -4 t0: no rational eigenvalue, but
        // sigma^2 = -4 on every linear form
        let s = sys(&[&[0, 1], &[-4, 0]]);
        assert!(find_linear_specials(&s, 1).unwrap().is_empty());
        let got = find_linear_specials(&s, 2).unwrap();
        assert!(!got.is_empty());
        assert!(got.iter().all(|(_, ell, u)| *ell == 2 && *u == XRat::int(-4)), "{:?}", got);
    }
}
