//! Crate-wide error type.

use std::fmt;

use crate::exp::Exp;

/// Errors raised by the expansion arithmetic, the net oracle, the
/// calculus operations and the parsers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// An exponent fell below `-P_MAX` (or an `alpha` argument exceeded
    /// the bound in absolute value).
    ExponentBoundViolated { exp: Exp },
    /// A coefficient became NaN or infinite.
    NonFiniteCoefficient,
    /// Inversion of an expansion whose valuation is only known as a
    /// lower bound (no leading term up to the truncation).
    NotInvertibleAtTruncation,
    /// The argument has no shadow: its leading exponent is negative, or
    /// a builtin was applied outside the smooth domain of its classical
    /// counterpart.
    NotAssociated,
    /// The sign of an expansion that is empty up to a finite truncation
    /// cannot be determined.
    SignUndetermined,
    /// Order comparison on a difference that is empty up to a finite
    /// truncation (or has complex coefficients).
    OrderUndetermined,
    /// Vector operands of different dimensions.
    DimensionMismatch { left: usize, right: usize },
    /// A function was applied to the wrong number of arguments.
    ArityMismatch { expected: usize, got: usize },
    /// A sampled representative produced a non-finite value.
    NonFiniteSample { eps: f64 },
    /// Every sample of a net lies below the underflow floor.
    AllBelowFloor,
    /// The difference quotients admitted no stability window within the
    /// probe depth.
    NonConvergent { depth: u32 },
    /// A probe evaluation failed while forming difference quotients.
    ProbeFailure { detail: String },
    /// The integrand is not polynomial in the integration variable;
    /// route the computation through the net backend instead.
    NonPolynomialIntegrand,
    /// Adaptive quadrature failed to reach the requested tolerance.
    QuadratureFailure,
    /// A series coefficient at a pivotal index has only a valuation
    /// lower bound, so the convergence verdict is undecidable.
    IndeterminateValuation { index: usize },
    /// Series evaluation at a point where the convergence test fails.
    NotConvergent,
    /// The sub-linearity witness violates its monotonicity invariant.
    WitnessViolated { index: usize },
    /// A component has no shadow or the shadow point does not lie in
    /// the open domain.
    NotCompactlySupported { detail: String },
    /// An attached representative perturbation is not negligible.
    IllFormedPerturbation,
    /// The expression uses a node outside the smooth-function grammar.
    GrammarUnsupported { detail: String },
    /// Parse error with a byte offset into the input.
    Parse { offset: usize, message: String },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::ExponentBoundViolated { exp } => {
                write!(f, "exponent {exp} violates the configured bound")
            }
            Error::NonFiniteCoefficient => write!(f, "non-finite coefficient"),
            Error::NotInvertibleAtTruncation => {
                write!(f, "not invertible at this truncation (no leading term)")
            }
            Error::NotAssociated => write!(f, "argument has no shadow"),
            Error::SignUndetermined => write!(f, "sign undetermined up to truncation"),
            Error::OrderUndetermined => write!(f, "order undetermined"),
            Error::DimensionMismatch { left, right } => {
                write!(f, "dimension mismatch: {left} vs {right}")
            }
            Error::ArityMismatch { expected, got } => {
                write!(f, "arity mismatch: expected {expected} arguments, got {got}")
            }
            Error::NonFiniteSample { eps } => write!(f, "non-finite sample at eps = {eps}"),
            Error::AllBelowFloor => write!(f, "all samples below the underflow floor"),
            Error::NonConvergent { depth } => {
                write!(f, "no stability window within probe depth {depth}")
            }
            Error::ProbeFailure { detail } => write!(f, "probe evaluation failed: {detail}"),
            Error::NonPolynomialIntegrand => {
                write!(f, "integrand is not polynomial in the integration variable")
            }
            Error::QuadratureFailure => write!(f, "adaptive quadrature failed"),
            Error::IndeterminateValuation { index } => {
                write!(f, "coefficient valuation indeterminate at index {index}")
            }
            Error::NotConvergent => write!(f, "series does not converge at this point"),
            Error::WitnessViolated { index } => {
                write!(f, "sub-linearity witness violated at index {index}")
            }
            Error::NotCompactlySupported { detail } => {
                write!(f, "not compactly supported: {detail}")
            }
            Error::IllFormedPerturbation => {
                write!(f, "attached perturbation is not negligible")
            }
            Error::GrammarUnsupported { detail } => write!(f, "unsupported expression: {detail}"),
            Error::Parse { offset, message } => {
                write!(f, "parse error at offset {offset}: {message}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
