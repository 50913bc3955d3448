use thiserror::Error;

/// Library-wide error type.
///
/// Errors split into three broad categories that the CLI maps onto exit
/// codes: malformed input (`Input`), exhausted search budgets
/// (`ResourceLimit`) and property failures that carry a finite witness.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("resource limit exceeded: {what} (limit {limit}, reached {reached})")]
    ResourceLimit {
        what: String,
        limit: usize,
        reached: usize,
    },

    #[error("input graph is not metric: non-metric cycle {0:?}")]
    NonMetricInput(Vec<String>),

    #[error("undefined infimum of path lengths {lengths:?} between {u} and {v}")]
    UndefinedInfimum {
        u: String,
        v: String,
        lengths: Vec<String>,
    },

    #[error("input violates the forbidden family: cycle {cycle:?} maps onto vertices {image:?}")]
    ForbViolation {
        cycle: Vec<String>,
        image: Vec<String>,
    },

    #[error("no maximum element in the semigroup (needed to join disconnected components)")]
    NoMaximumElement,

    #[error("structure contains a non-metric star cycle over original vertices {vertices:?}")]
    StarCycle { vertices: Vec<String> },

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Exit code the CLI uses for this error: 2 for bad input, 3 for
    /// resource limits, 1 for property failures with a witness.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Input(_) => 2,
            Error::ResourceLimit { .. } => 3,
            Error::Internal(_) => 2,
            _ => 1,
        }
    }
}
