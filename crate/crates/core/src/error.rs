//! Crate-wide error type.
//!
//! Every fallible operation reports one of the named conditions below; the
//! CLI surfaces the variant name verbatim so certificates and diagnostics
//! can be matched by machine.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Divisor has no known nonzero leading coefficient, so its valuation
    /// (and hence the quotient) cannot be determined.
    DivisionByIndistinguishableZero(String),
    /// Two series from different tower stages were combined.
    LevelMismatch { expected: usize, found: usize },
    /// A truncated series whose known coefficients all vanish: the requested
    /// answer depends on coefficients beyond the precision bound.
    IndistinguishableFromZero(String),
    /// Residue of an element with negative top-level valuation.
    NegativeValuation(String),
    /// The polynomial does not involve the requested variable.
    VariableAbsent(usize),
    /// A jet is missing an entry the evaluation needs.
    JetTooShort { var: usize, order: u32, have: usize },
    /// Input precision is too low for the requested number of derivatives.
    InsufficientPrecision(String),
    /// No factor vanishes at the point: the input was not a factorisation of
    /// a polynomial vanishing there.
    NoVanishingFactor,
    /// More than one factor vanishes: the separant condition fails at the
    /// point, so the selection lemma does not apply.
    MultipleVanishingFactors(Vec<usize>),
    /// Malformed expression text; `pos` is a byte offset into the input.
    SyntaxError { pos: usize, msg: String },
    /// Identifier that is neither `xN` within range nor `tN` below the tower
    /// height.
    UnknownVariable(String),
    /// The separant vanishes (or cannot be certified nonzero) at the point.
    DegeneratePoint(String),
    /// The candidate jet does not kill the polynomial.
    NotARoot(String),
    /// The prolonged point has fewer values than the requested series length.
    InsufficientJet { needed: usize, have: usize },
    /// Jacobian determinant is zero or indistinguishable from zero.
    SingularJacobian,
    /// The Newton dominance condition v(F) > 2 v(det J) fails.
    DominanceFailure(String),
    /// Iteration stopped before reaching the requested precision.
    PrecisionExhausted(String),
    /// The presentation is not triangular: relations must introduce one new
    /// leading generator each.
    NonTriangularPresentation(String),
    /// A candidate point fails to kill a relation it must kill.
    RelationViolated(String),
    /// Separated-basis bounds were requested for a basis not declared
    /// separated.
    BasisNotDeclaredSeparated,
    /// A comparison needed by a check depends on unknown coefficients.
    UndecidedAtPrecision(String),
    /// Bad command-line input.
    UsageError(String),
}

impl Error {
    /// Stable machine-readable name of the error condition.
    pub fn name(&self) -> &'static str {
        match self {
            Error::DivisionByIndistinguishableZero(_) => "DivisionByIndistinguishableZero",
            Error::LevelMismatch { .. } => "LevelMismatch",
            Error::IndistinguishableFromZero(_) => "IndistinguishableFromZero",
            Error::NegativeValuation(_) => "NegativeValuation",
            Error::VariableAbsent(_) => "VariableAbsent",
            Error::JetTooShort { .. } => "JetTooShort",
            Error::InsufficientPrecision(_) => "InsufficientPrecision",
            Error::NoVanishingFactor => "NoVanishingFactor",
            Error::MultipleVanishingFactors(_) => "MultipleVanishingFactors",
            Error::SyntaxError { .. } => "SyntaxError",
            Error::UnknownVariable(_) => "UnknownVariable",
            Error::DegeneratePoint(_) => "DegeneratePoint",
            Error::NotARoot(_) => "NotARoot",
            Error::InsufficientJet { .. } => "InsufficientJet",
            Error::SingularJacobian => "SingularJacobian",
            Error::DominanceFailure(_) => "DominanceFailure",
            Error::PrecisionExhausted(_) => "PrecisionExhausted",
            Error::NonTriangularPresentation(_) => "NonTriangularPresentation",
            Error::RelationViolated(_) => "RelationViolated",
            Error::BasisNotDeclaredSeparated => "BasisNotDeclaredSeparated",
            Error::UndecidedAtPrecision(_) => "UndecidedAtPrecision",
            Error::UsageError(_) => "UsageError",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::DivisionByIndistinguishableZero(msg) => {
                write!(f, "division by indistinguishable zero: {msg}")
            }
            Error::LevelMismatch { expected, found } => {
                write!(f, "level mismatch: expected stage {expected}, found {found}")
            }
            Error::IndistinguishableFromZero(msg) => {
                write!(f, "indistinguishable from zero: {msg}")
            }
            Error::NegativeValuation(msg) => write!(f, "negative valuation: {msg}"),
            Error::VariableAbsent(v) => write!(f, "variable x{} absent", v + 1),
            Error::JetTooShort { var, order, have } => write!(
                f,
                "jet too short: need x{}^({order}), jet has {have} entries",
                var + 1
            ),
            Error::InsufficientPrecision(msg) => write!(f, "insufficient precision: {msg}"),
            Error::NoVanishingFactor => write!(f, "no factor vanishes at the point"),
            Error::MultipleVanishingFactors(ix) => {
                write!(f, "multiple factors vanish at the point: {ix:?}")
            }
            Error::SyntaxError { pos, msg } => write!(f, "syntax error at byte {pos}: {msg}"),
            Error::UnknownVariable(name) => write!(f, "unknown variable `{name}`"),
            Error::DegeneratePoint(msg) => write!(f, "degenerate point: {msg}"),
            Error::NotARoot(msg) => write!(f, "not a root: {msg}"),
            Error::InsufficientJet { needed, have } => {
                write!(f, "insufficient jet: need {needed} values, have {have}")
            }
            Error::SingularJacobian => write!(f, "singular Jacobian"),
            Error::DominanceFailure(msg) => write!(f, "dominance failure: {msg}"),
            Error::PrecisionExhausted(msg) => write!(f, "precision exhausted: {msg}"),
            Error::NonTriangularPresentation(msg) => {
                write!(f, "non-triangular presentation: {msg}")
            }
            Error::RelationViolated(msg) => write!(f, "relation violated: {msg}"),
            Error::BasisNotDeclaredSeparated => {
                write!(f, "basis not declared separated")
            }
            Error::UndecidedAtPrecision(msg) => write!(f, "undecided at precision: {msg}"),
            Error::UsageError(msg) => write!(f, "usage error: {msg}"),
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
