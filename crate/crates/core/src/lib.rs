//! Information quantities and bounds for quantum channels with general,
//! possibly inefficient, measurements.
//!
//! The crate computes mutual information, Holevo quantities and the average
//! reduction in von Neumann entropy for an encoding ensemble measured by a
//! grouped set of Kraus operators, and certifies the inequalities that relate
//! them. All entropies are in bits.
//!
//! - [`linalg`]: dense complex kernel (Hermitian eigensolver, entropies,
//!   tensor products, partial traces, Haar and Ginibre sampling).
//! - [`channel`]: ensembles, grouped measurements, outcome statistics and
//!   post-measurement states.
//! - [`info`]: mutual information, `chi`, `chi_j`, entropy reduction and
//!   [`BoundReport`].
//! - [`majorization`]: majorization, symmetric and covariant measurements,
//!   Schur-concavity probes.
//! - [`dilation`]: the ancilla construction behind the bound, evaluated as a
//!   numerical certificate.
//! - [`instance`]: JSON instance format.
//! - [`sampling`]: random ensembles, measurements and groupings.

#![forbid(unsafe_code)]

pub mod channel;
pub mod dilation;
pub mod error;
pub mod info;
pub mod instance;
pub mod linalg;
pub mod majorization;
pub mod sampling;

pub use channel::{
    classical_channel, ensemble_state, outcome_table, post_state, posterior_ensemble,
    receiver_state, Ensemble, GroupedMeasurement, OutcomeTable,
};
pub use error::{Error, Result};
pub use info::{
    avg_entropy_reduction, bound_report, chi_j, holevo_chi, mutual_information, BoundReport,
};
pub use linalg::{ComplexMatrix, DensityMatrix, ProbVector};
pub use num_complex::Complex64;
