use thiserror::Error;

/// Errors shared across the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("excitation number must be 1, 2 or 3, got {0}")]
    InvalidArity(usize),

    #[error("need at least k atoms for k = {k} excitations, got N = {n}")]
    TooFewAtoms { n: usize, k: usize },

    #[error("invalid model parameters: {0}")]
    InvalidParams(String),

    #[error("Bloch vector too close to the dispersion pole: |cos k - cos phi| = {denom:.3e} < {guard:.3e}")]
    PoleProximity { denom: f64, guard: f64 },

    #[error("vector length {got} does not match basis size {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("tensor is not permutation symmetric (max deviation {max_dev:.3e})")]
    NotSymmetric { max_dev: f64 },

    #[error("tensor has weight {magnitude:.3e} on a doubly occupied site")]
    NonzeroDoubleOccupancy { magnitude: f64 },

    #[error("operation undefined for a zero vector")]
    ZeroVector,

    #[error("hard-core projection annihilated the product state (norm {norm:.3e})")]
    DegenerateProjection { norm: f64 },

    #[error("dense matrix of dimension {dim} needs {required} bytes, over the {budget} byte budget")]
    MemoryBudgetExceeded {
        dim: usize,
        required: usize,
        budget: usize,
    },

    #[error("matrix must be in the {expected} representation for this operation")]
    RepresentationMismatch { expected: &'static str },

    #[error("eigensolver failed: {detail} (eigenvalues {unconverged_lo}..{unconverged_hi} unconverged)")]
    SolverFailure {
        detail: String,
        unconverged_lo: usize,
        unconverged_hi: usize,
    },

    #[error("residual {residual:.3e} of eigenpair {index} exceeds tolerance {tol:.3e}")]
    ResidualTooLarge {
        index: usize,
        residual: f64,
        tol: f64,
    },

    #[error("dimension mismatch: spectrum has {got} states, matrix has {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("full-basis dimension {dim} exceeds the reference-oracle limit {max}")]
    TooLarge { dim: usize, max: usize },

    #[error("state index {index} out of range for basis of size {size}")]
    IndexOutOfRange { index: usize, size: usize },

    #[error("localisation estimators disagree: marginal says (edge {marginal_edge}, centre {marginal_centre}), factors say (edge {factor_edge}, centre {factor_centre})")]
    AmbiguousSignature {
        marginal_edge: u8,
        marginal_centre: u8,
        factor_edge: u8,
        factor_centre: u8,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
