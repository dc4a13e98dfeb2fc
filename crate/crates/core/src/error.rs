use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("vertex ids must be contiguous 0..{n}, found {found}")]
    VertexId { n: usize, found: usize },

    #[error("vertex index {index} out of range for graph with {n} vertices")]
    VertexOutOfRange { index: usize, n: usize },

    #[error("color {0:?} is not a member of the declared color set")]
    UnknownColor(String),

    #[error("color {0:?} declared more than once")]
    DuplicateColor(String),

    #[error("invalid color name {0:?}")]
    InvalidColorName(String),

    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("not a permutation: {0}")]
    NotAPermutation(String),

    #[error("permutation length {got} does not match vertex count {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("color list must be non-empty")]
    EmptyColors,

    #[error("edge probability {0} outside [0, 1]")]
    Probability(f64),

    #[error("filtration has no value for {0}")]
    MissingColorKey(String),

    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),

    #[error("invalid diagram: {0}")]
    InvalidDiagram(String),

    #[error("descriptor kinds differ: {0} vs {1}")]
    KindMismatch(String, String),

    #[error("cardinality mismatch in dimension {dim}: {left} vs {right}")]
    CardinalityMismatch { dim: usize, left: usize, right: usize },

    #[error("color sets differ between filtrations")]
    ColorSetMismatch,

    #[error("eigensolver did not converge on a component of size {size} after {iterations} iterations")]
    NonConvergence { size: usize, iterations: usize },

    #[error("invalid spectrum policy: {0}")]
    InvalidPolicy(String),

    #[error("filtration is not injective; local stability sampling needs injective f_v and f_e")]
    NotInjective,
}

impl Error {
    /// True for failures of the numerical kernels rather than of the input.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NonConvergence { .. })
    }
}
