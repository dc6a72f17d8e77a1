use core::fmt;

use crate::scalar::XPoly;

#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// An operation that needs a nonzero argument received zero.
    Zero(&'static str),
    /// `a0 = 0` in a companion recurrence.
    NotInvertible,
    /// The system matrix has determinant zero.
    SingularMatrix,
    /// Matrix or coefficient list of the wrong size.
    Dimension(&'static str),
    /// The Kronecker image exceeds the univariate degree cap.
    DegreeTooLarge { degree: usize, cap: usize },
    /// Recombination would need to try too many factor subsets.
    TooManyFactors { count: usize },
    /// The constant-coefficient branch of the equivalence test needs
    /// eigenvalues outside Q.
    UnsupportedEigenvalues,
    /// No rational eigenvalue; carries the characteristic polynomial.
    IrrationalEigenvalues { charpoly: XPoly },
    /// No cyclic vector among the deterministic candidates.
    CyclicVectorFailure,
    /// The ansatz search hit its degree caps without a solution.
    NoSolutionWithinBounds { t_degree: u32, x_degree: u32 },
    NotImplemented(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Zero(what) => f.write_str(what),
            Error::NotInvertible => f.write_str("system not invertible"),
            Error::SingularMatrix => f.write_str("singular system matrix"),
            Error::Dimension(what) => write!(f, "dimension mismatch: {}", what),
            Error::DegreeTooLarge { degree, cap } => write!(
                f,
                "Kronecker image has degree {} above the cap {}; supply the denominator factored",
                degree, cap
            ),
            Error::TooManyFactors { count } => write!(
                f,
                "{} modular factors are too many to recombine; supply the denominator factored",
                count
            ),
            Error::UnsupportedEigenvalues => {
                f.write_str("equivalence test needs eigenvalues outside Q")
            }
            Error::IrrationalEigenvalues { charpoly } => {
                write!(f, "no rational eigenvalues; characteristic polynomial {}", charpoly)
            }
            Error::CyclicVectorFailure => f.write_str("no cyclic vector found"),
            Error::NoSolutionWithinBounds { t_degree, x_degree } => write!(
                f,
                "no numerator with t-degree <= {} and x-degree <= {}",
                t_degree, x_degree
            ),
            Error::NotImplemented(what) => write!(f, "not implemented: {}", what),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
