//! Exact arithmetic over Q: rationals, polynomials and rational functions in `x`.

mod factor;
mod resultant;
mod xpoly;
mod xrat;

pub use factor::{factor_squarefree, factor_x, squarefree_x, XFactorization};
#[allow(unused_imports)]
pub(crate) use factor::Subsets;
pub use resultant::{integer_roots, rational_roots, resultant, shift_resultant};
pub use xpoly::XPoly;
pub use xrat::XRat;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(n.into())
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}
