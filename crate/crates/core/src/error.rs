use thiserror::Error;

/// Errors raised by the library.
///
/// Variants split into two families: precondition violations (bad input,
/// wrong shape, unmet assumptions) and resource limits (enumeration caps).
/// The CLI maps the latter to a distinct exit code.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degree mismatch: {left} vs {right}")]
    DegreeMismatch { left: usize, right: usize },

    #[error("invalid permutation: {0}")]
    InvalidPermutation(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dessin is not connected")]
    Disconnected,

    #[error("dessin is not regular")]
    NotRegular,

    #[error("invalid triangle presentation: {0}")]
    InvalidTriangles(String),

    #[error("enumeration cap exceeded: {what} needs {needed}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        needed: u128,
        cap: u128,
    },

    #[error("element is not in the group: {0}")]
    NotInGroup(String),

    #[error("not a group automorphism: {0}")]
    NotAutomorphism(String),

    #[error("cartographic group of order {order} is too large for level {level}")]
    LevelTooSmall { order: usize, level: usize },

    #[error("genus must be 0, got {0}")]
    NonzeroGenus(u32),

    #[error("inconsistent passport: {0}")]
    InconsistentPassport(String),

    #[error("dessin is not a planar tree")]
    NotATree,

    #[error("constant fraction")]
    ConstantFraction,

    #[error("fraction has a pole of order > 1 near {0}")]
    NonSimplePole(String),

    #[error("residue {0} is not close to an integer")]
    NonIntegerResidue(String),

    #[error("numerical continuation failed: {0}")]
    Continuation(String),

    #[error("no solution found: {0}")]
    NoSolution(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// True for errors caused by resource caps rather than bad input.
    pub fn is_resource_limit(&self) -> bool {
        matches!(self, Error::CapExceeded { .. })
    }

    /// Short machine-readable tag for the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegreeMismatch { .. } => "degree_mismatch",
            Error::InvalidPermutation(_) => "invalid_permutation",
            Error::Parse(_) => "parse",
            Error::Disconnected => "disconnected",
            Error::NotRegular => "not_regular",
            Error::InvalidTriangles(_) => "invalid_triangles",
            Error::CapExceeded { .. } => "cap_exceeded",
            Error::NotInGroup(_) => "not_in_group",
            Error::NotAutomorphism(_) => "not_automorphism",
            Error::LevelTooSmall { .. } => "level_too_small",
            Error::NonzeroGenus(_) => "nonzero_genus",
            Error::InconsistentPassport(_) => "inconsistent_passport",
            Error::NotATree => "not_a_tree",
            Error::ConstantFraction => "constant_fraction",
            Error::NonSimplePole(_) => "non_simple_pole",
            Error::NonIntegerResidue(_) => "non_integer_residue",
            Error::Continuation(_) => "continuation",
            Error::NoSolution(_) => "no_solution",
            Error::Internal(_) => "internal",
            Error::Io(_) => "io",
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
