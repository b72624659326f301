use alloc::string::String;
use core::fmt;

/// Errors raised by the counting and statistics routines.
///
/// Every variant names the violated precondition; formula evaluation uses
/// `NonRealResult` / `NonIntegral` as transcription-error detectors rather
/// than silently returning garbage.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// The modulus is not an odd prime `>= 3`.
    BadModulus(u64),
    /// A rational was reduced mod `p` but `p` divides its denominator.
    DenominatorVanishes { p: u64 },
    /// Attempted to invert zero (or an element of zero norm).
    NotInvertible,
    /// The curve has singular reduction at `p`; the prime must be skipped.
    BadReduction { p: u64 },
    /// A trace violates the Hasse bound `|a| < 2 sqrt(p)`.
    HasseViolation { a: i64, p: u64 },
    /// The prime collides with the K3 parameter (divides the numerator or
    /// denominator of `lambda` or `lambda + 1`, or the curve discriminant).
    BadPrime { p: u64 },
    /// An excluded K3 parameter (`lambda` must avoid `{0, -1}`).
    BadParameter,
    /// `p` ramifies in the quadratic field of discriminant `d`.
    RamifiedPrime { p: u64, d: i64 },
    /// Multinomial parts do not sum to `n`.
    PartsMismatch { n: u32, sum: u32 },
    /// An exact quantity that must be an integer (or a nonnegative integer)
    /// is not; indicates a formula transcription failure.
    NonIntegral(String),
    /// Two quadratic-ring elements with different `(a, p)` contexts were
    /// combined.
    ContextMismatch,
    /// The imaginary part of a formula value failed to vanish.
    NonRealResult(String),
    /// An exhaustive enumeration would exceed the configured budget.
    BudgetExceeded { estimated: u128, budget: u128 },
    /// A statistic was requested on an empty sample or empty grid.
    EmptySample,
    /// Argument outside the stated domain of an explicit bound.
    DomainError(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::BadModulus(p) => write!(f, "modulus {p} is not an odd prime >= 3"),
            Error::DenominatorVanishes { p } => {
                write!(f, "denominator vanishes mod {p}")
            }
            Error::NotInvertible => write!(f, "element is not invertible"),
            Error::BadReduction { p } => {
                write!(f, "curve has bad reduction at p = {p}")
            }
            Error::HasseViolation { a, p } => {
                write!(f, "trace {a} violates the Hasse bound |a| < 2*sqrt({p})")
            }
            Error::BadPrime { p } => {
                write!(f, "p = {p} collides with the surface parameter and must be skipped")
            }
            Error::BadParameter => write!(f, "lambda must avoid {{0, -1}}"),
            Error::RamifiedPrime { p, d } => {
                write!(f, "p = {p} ramifies in the field of discriminant {d}")
            }
            Error::PartsMismatch { n, sum } => {
                write!(f, "multinomial parts sum to {sum}, expected {n}")
            }
            Error::NonIntegral(what) => write!(f, "non-integral value: {what}"),
            Error::ContextMismatch => {
                write!(f, "quadratic-ring elements have mismatched (a, p) contexts")
            }
            Error::NonRealResult(what) => {
                write!(f, "imaginary part failed to vanish: {what}")
            }
            Error::BudgetExceeded { estimated, budget } => write!(
                f,
                "enumeration of ~{estimated} inner checks exceeds the budget of {budget}"
            ),
            Error::EmptySample => write!(f, "empty sample or empty interval grid"),
            Error::DomainError(what) => write!(f, "domain error: {what}"),
        }
    }
}
