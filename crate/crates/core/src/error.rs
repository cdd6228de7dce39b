//! Crate-wide error type.

use alloc::string::String;
use core::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// A certified decision could not be made within the configured
    /// precision cap and no exactness witness exists.
    PrecisionExhausted { bits: u32 },
    /// Reachability closure on the matrix digraph is not strongly connected.
    NotIrreducible,
    /// The permutation pair does not act transitively on the labels.
    NotTransitive,
    /// Image array is not a bijection of {1,..,l}.
    InvalidPermutation(String),
    /// Twist vector is empty, has a zero entry, or wrong arity.
    InvalidTwist(String),
    /// Sum of (k-1) over the cone-angle multipliers is odd.
    InvalidProfile,
    /// Inverse moduli of a cylinder decomposition have an irrational ratio
    /// (or one that could not be certified rational).
    NotCommensurable,
    /// Two holonomy vectors are parallel where a transverse pair is required.
    DegeneratePair,
    /// Fewer than two saddle-connection directions were found below the
    /// scan length.
    InsufficientData,
    /// A formula was evaluated outside its stated domain.
    DomainError(String),
    /// Unknown built-in surface name.
    UnknownName(String),
    /// A bottom-of-spectrum check failed; carries the first counterexample.
    VerificationFailure(String),
    /// Enumeration guard refused an infeasible sweep.
    GuardRefusal(String),
    /// Malformed textual input.
    Parse(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::PrecisionExhausted { bits } => {
                write!(f, "precision exhausted at {bits} bits without separation")
            }
            Error::NotIrreducible => write!(f, "matrix is not irreducible"),
            Error::NotTransitive => write!(f, "permutation pair is not transitive"),
            Error::InvalidPermutation(s) => write!(f, "invalid permutation: {s}"),
            Error::InvalidTwist(s) => write!(f, "invalid twist vector: {s}"),
            Error::InvalidProfile => write!(f, "singularity profile has odd total order"),
            Error::NotCommensurable => write!(f, "inverse moduli are not commensurable"),
            Error::DegeneratePair => write!(f, "holonomy vectors are parallel"),
            Error::InsufficientData => write!(f, "fewer than two directions found"),
            Error::DomainError(s) => write!(f, "domain error: {s}"),
            Error::UnknownName(s) => write!(f, "unknown surface name: {s}"),
            Error::VerificationFailure(s) => write!(f, "verification failure: {s}"),
            Error::GuardRefusal(s) => write!(f, "guard refusal: {s}"),
            Error::Parse(s) => write!(f, "parse error: {s}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
