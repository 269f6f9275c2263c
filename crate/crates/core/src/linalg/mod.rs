//! Dense complex linear algebra: Hermitian eigendecomposition, states,
//! entropies, tensor products, partial traces and random sampling.

mod eigh;
mod matrix;
mod random;
mod state;

pub use eigh::{eigh, eigvalsh, Eigh, HERMITIAN_TOL, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::ComplexMatrix;
pub use random::{
    complex_gaussian, ginibre, haar_unitary, inverse_sqrt, random_density, random_kraus_set,
    random_pure, whiten, SINGULAR_TOL,
};
pub use state::{
    partial_trace, shannon_entropy, tensor, von_neumann_entropy, DensityMatrix, ProbVector,
    Subsystem, PROB_NEG_TOL, PROB_SUM_TOL, STATE_TOL,
};
pub(crate) use state::entropy_bits;
