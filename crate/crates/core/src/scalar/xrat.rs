use core::fmt;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::{rat, Rational, XPoly};

/// Reduced rational function in `x` over Q: `gcd(num, den) = 1`, `den` monic.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct XRat {
    num: XPoly,
    den: XPoly,
}

impl XRat {
    pub fn new(num: XPoly, den: XPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator in rational function");
        if num.is_zero() {
            return Self::zero();
        }
        if den.is_constant() {
            let c = den.lc().recip();
            return XRat { num: num.scale(&c), den: XPoly::one() };
        }
        let g = num.gcd(&den);
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.exact_div(&g).unwrap(), den.exact_div(&g).unwrap())
        };
        let c = den.lc().recip();
        XRat { num: num.scale(&c), den: den.scale(&c) }
    }

    /// Builds from parts already known to be coprime.
    fn from_coprime(num: XPoly, den: XPoly) -> Self {
        if num.is_zero() {
            return Self::zero();
        }
        let c = den.lc();
        if c.is_one() {
            XRat { num, den }
        } else {
            let c = c.recip();
            XRat { num: num.scale(&c), den: den.scale(&c) }
        }
    }

    pub fn zero() -> Self {
        XRat { num: XPoly::zero(), den: XPoly::one() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn x() -> Self {
        Self::poly(XPoly::x())
    }

    pub fn constant(c: Rational) -> Self {
        XRat { num: XPoly::constant(c), den: XPoly::one() }
    }

    pub fn int(c: i64) -> Self {
        Self::constant(rat(c))
    }

    pub fn poly(p: XPoly) -> Self {
        XRat { num: p, den: XPoly::one() }
    }

    pub fn num(&self) -> &XPoly {
        &self.num
    }

    pub fn den(&self) -> &XPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    /// Ratio of leading coefficients of numerator and denominator.
    pub fn leading_ratio(&self) -> Rational {
        self.num.lc()
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        XRat::from_coprime(self.den.clone(), self.num.clone())
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        XRat { num: self.num.scale(c), den: self.den.clone() }
    }

    /// Substitutes `x -> x + k`.
    pub fn shift(&self, k: i64) -> Self {
        if k == 0 || self.is_constant() {
            return self.clone();
        }
        XRat { num: self.num.shift_int(k), den: self.den.shift_int(k) }
    }

    /// Substitutes `x -> c * x`.
    pub fn dilate(&self, c: &Rational) -> Self {
        XRat::new(self.num.dilate(c), self.den.dilate(c))
    }

    pub fn pow(&self, e: i32) -> Self {
        let base = if e < 0 { self.recip() } else { self.clone() };
        let e = e.unsigned_abs();
        XRat { num: base.num.pow(e), den: base.den.pow(e) }
    }

    pub fn eval(&self, at: &Rational) -> Option<Rational> {
        let d = self.den.eval(at);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(at) / d)
        }
    }
}

impl Default for XRat {
    fn default() -> Self {
        Self::zero()
    }
}

impl From<XPoly> for XRat {
    fn from(p: XPoly) -> Self {
        XRat::poly(p)
    }
}

impl From<Rational> for XRat {
    fn from(c: Rational) -> Self {
        XRat::constant(c)
    }
}

impl<'a> Add<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn add(self, rhs: &XRat) -> XRat {
        if self.is_zero() {
            return rhs.clone();
        }
        if rhs.is_zero() {
            return self.clone();
        }
        if self.den == rhs.den {
            if self.den.is_one() {
                return XRat { num: &self.num + &rhs.num, den: XPoly::one() };
            }
            return XRat::new(&self.num + &rhs.num, self.den.clone());
        }
        if self.den.is_one() {
            return XRat::from_coprime(&(&self.num * &rhs.den) + &rhs.num, rhs.den.clone());
        }
        if rhs.den.is_one() {
            return XRat::from_coprime(&(&rhs.num * &self.den) + &self.num, self.den.clone());
        }
        XRat::new(
            &(&self.num * &rhs.den) + &(&rhs.num * &self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a> Sub<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn sub(self, rhs: &XRat) -> XRat {
        self + &(-rhs)
    }
}

impl<'a> Mul<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn mul(self, rhs: &XRat) -> XRat {
        if self.is_zero() || rhs.is_zero() {
            return XRat::zero();
        }
        if let Some(c) = self.constant_value() {
            return rhs.scale(&c);
        }
        if let Some(c) = rhs.constant_value() {
            return self.scale(&c);
        }
        if self.den.is_one() && rhs.den.is_one() {
            return XRat::poly(&self.num * &rhs.num);
        }
        // cross-cancel, then the product is already reduced
        let g1 = self.num.gcd(&rhs.den);
        let g2 = rhs.num.gcd(&self.den);
        let n1 = self.num.exact_div(&g1).unwrap();
        let d2 = rhs.den.exact_div(&g1).unwrap();
        let n2 = rhs.num.exact_div(&g2).unwrap();
        let d1 = self.den.exact_div(&g2).unwrap();
        XRat::from_coprime(&n1 * &n2, &d1 * &d2)
    }
}

impl<'a> Div<&'a XRat> for &'a XRat {
    type Output = XRat;
    fn div(self, rhs: &XRat) -> XRat {
        self * &rhs.recip()
    }
}

impl Neg for &XRat {
    type Output = XRat;
    fn neg(self) -> XRat {
        XRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Neg for XRat {
    type Output = XRat;
    fn neg(self) -> XRat {
        -&self
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr<XRat> for XRat {
            type Output = XRat;
            fn $m(self, rhs: XRat) -> XRat { (&self).$m(&rhs) }
        }
        impl<'a> $tr<&'a XRat> for XRat {
            type Output = XRat;
            fn $m(self, rhs: &XRat) -> XRat { (&self).$m(rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl fmt::Display for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return self.num.fmt(f);
        }
        let num_simple = self.num.coeffs().iter().filter(|c| !c.is_zero()).count() <= 1;
        if num_simple {
            write!(f, "{}", self.num)?;
        } else {
            write!(f, "({})", self.num)?;
        }
        write!(f, "/({})", self.den)
    }
}

impl fmt::Debug for XRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "XRat({})", self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> XPoly {
        XPoly::from_i64(c)
    }

    #[test]
    fn normalizes_on_construction() {
        let r = XRat::new(p(&[-2, 0, 2]), p(&[2, 2]));
        assert_eq!(r.num(), &p(&[-1, 1]));
        assert!(r.den().is_one());
        let s = XRat::new(p(&[1]), p(&[6, 3]));
        assert_eq!(s.den(), &p(&[2, 1]));
        assert_eq!(s.num(), &XPoly::constant(Rational::new(1.into(), 3.into())));
    }

    #[test]
    fn field_operations() {
        let a = XRat::new(p(&[-1, 1]), p(&[3, 1]));
        let b = XRat::new(p(&[0, 1]), p(&[-1, 1]));
        let s = &a + &b;
        assert_eq!(&s - &b, a);
        let m = &a * &b;
        assert_eq!(&m / &b, a);
        assert!((&a / &a).is_one());
    }

    #[test]
    fn shift_of_quotient() {
        let a = XRat::new(p(&[-1, 1]), p(&[3, 1]));
        assert_eq!(a.shift(5), XRat::new(p(&[4, 1]), p(&[8, 1])));
        assert_eq!(XRat::int(7).shift(3), XRat::int(7));
    }
}
