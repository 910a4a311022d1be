use alloc::boxed::Box;
use alloc::string::String;
use core::fmt;

/// Errors raised by the core library.
#[derive(Clone, Debug, PartialEq)]
pub enum Error {
    /// Argument outside the operation's domain.
    Domain(String),
    /// Measurement data missing a required frequency or class.
    DataIncomplete(String),
    /// Measurement data contradicts itself or an integer solution.
    Inconsistent(String),
    /// Arithmetic at the working precision lost all significant digits.
    Precision { required_digits: u32 },
    /// An integer quantity left its representable range.
    Overflow(String),
    /// Exhaustive search would exceed its budget.
    Budget { needed: f64, limit: f64 },
    /// No reduced basis vector produced an admissible signal.
    NoCandidate {
        d: u64,
        shortest_norm: f64,
        predicted_norm: f64,
    },
    /// A subproblem failed inside an inversion.
    Subproblem {
        k: u64,
        l: u64,
        d: u64,
        cause: Box<Error>,
    },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::DataIncomplete(m) => write!(f, "incomplete data: {m}"),
            Error::Inconsistent(m) => write!(f, "inconsistent data: {m}"),
            Error::Precision { required_digits } => {
                write!(f, "precision exhausted; at least {required_digits} digits required")
            }
            Error::Overflow(m) => write!(f, "overflow: {m}"),
            Error::Budget { needed, limit } => {
                write!(f, "search space {needed:.3e} exceeds budget {limit:.1e}")
            }
            Error::NoCandidate {
                d,
                shortest_norm,
                predicted_norm,
            } => write!(
                f,
                "no admissible vector for length {d}: shortest reduced norm {shortest_norm:.4e}, predicted {predicted_norm:.4e}"
            ),
            Error::Subproblem { k, l, d, cause } => {
                write!(f, "class ({k},{l}) with D={d} failed: {cause}")
            }
        }
    }
}

impl core::error::Error for Error {}
