use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid lattice: {0}")]
    InvalidLattice(String),

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("shape mismatch: expected {expected} sites, got {actual}")]
    ShapeMismatch { expected: usize, actual: usize },

    #[error("lattice spacing {spacing} does not resolve the packet (needs <= {required})")]
    UnresolvedPacket { spacing: f64, required: f64 },

    #[error("invalid packet width {0}")]
    InvalidWidth(f64),

    #[error("density field is identically zero")]
    ZeroField,

    #[error("field has nonzero spatial mean (|mean| = {0:e}); the k = 0 mode must be empty")]
    NonzeroMean(f64),

    #[error("state carries positron content N_p = {0:e}")]
    PositronContent(f64),

    #[error("fock space with {modes} modes exceeds the cap of {cap}")]
    DimensionCap { modes: usize, cap: usize },

    #[error("grassmann algebra mismatch: {left} vs {right} generator pairs")]
    AlgebraMismatch { left: usize, right: usize },

    #[error("grassmann generator budget exceeded: {requested} pairs requested, max {max}")]
    GeneratorBudget { requested: usize, max: usize },

    #[error("generator index {index} out of range for {pairs} pairs")]
    GeneratorIndex { index: usize, pairs: usize },

    #[error("lifted field value at generator {0} is zero; its functional derivative is undefined")]
    ZeroFieldValue(usize),

    #[error("invalid mode: {0}")]
    InvalidMode(String),

    #[error("operator is not diagonal in the occupation basis")]
    NotDiagonal,
}
