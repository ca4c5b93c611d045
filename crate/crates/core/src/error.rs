use core::fmt;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A polynomial degree (or index) exceeds the configured cap.
    DegreeCap {
        what: &'static str,
        degree: usize,
        cap: usize,
    },
    /// Kummer's lower parameter is zero or a negative integer.
    InadmissibleKummer { c: f64 },
    /// The Kummer series did not reach the tolerance within the term budget.
    KummerNoConvergence { terms: usize, last_term: f64 },
    /// Two imaginary units were expected to be perpendicular.
    NotPerpendicular { dot: f64 },
    /// A size parameter is outside its supported range.
    OutOfRange {
        what: &'static str,
        value: usize,
        min: usize,
        max: usize,
    },
    /// The quadrature rule cannot integrate the requested polynomial degree exactly.
    QuadratureDegree { needed: usize, exact_to: usize },
    /// A finite-difference stencil would straddle the real axis.
    NearRealAxis { imag: f64, step: f64 },
    /// A series has components outside the expected level.
    LevelMismatch { expected: usize, found: usize },
    /// An angular index below the admissible bound `j >= -n`.
    IndexBelowBound { n: usize, j: i64 },
    /// Sampled data does not line up with the rule's nodes.
    MisalignedSamples { expected: usize, found: usize },
    /// An eigenfunction coefficient does not commute with the eigenvalue.
    NotInCommutant { residual: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DegreeCap { what, degree, cap } => {
                write!(f, "{what}: degree {degree} exceeds cap {cap}")
            }
            Error::InadmissibleKummer { c } => {
                write!(f, "kummer: lower parameter {c} is a non-positive integer")
            }
            Error::KummerNoConvergence { terms, last_term } => write!(
                f,
                "kummer: no convergence after {terms} terms (last term modulus {last_term:e})"
            ),
            Error::NotPerpendicular { dot } => {
                write!(f, "imaginary units are not perpendicular (dot = {dot:e})")
            }
            Error::OutOfRange {
                what,
                value,
                min,
                max,
            } => write!(f, "{what}: {value} outside [{min}, {max}]"),
            Error::QuadratureDegree { needed, exact_to } => write!(
                f,
                "quadrature exact to degree {exact_to}, integrand needs {needed}"
            ),
            Error::NearRealAxis { imag, step } => write!(
                f,
                "point is too close to the real axis (|Im q| = {imag:e}) for step {step:e}"
            ),
            Error::LevelMismatch { expected, found } => {
                write!(f, "expected level {expected}, found a component at level {found}")
            }
            Error::IndexBelowBound { n, j } => {
                write!(f, "angular index {j} is below the admissible bound -{n}")
            }
            Error::MisalignedSamples { expected, found } => write!(
                f,
                "sample table has {found} values, rule has {expected} nodes"
            ),
            Error::NotInCommutant { residual } => write!(
                f,
                "coefficient does not commute with the eigenvalue (|μc - cμ| = {residual:e})"
            ),
        }
    }
}

impl core::error::Error for Error {}
