//! Ancilla construction behind the information bound, evaluated numerically.
//!
//! A measurement with `N` operators is realized as the isometry
//! `V = sum_n |n> ⊗ A_n` into `A ⊗ Q`. Dephasing the ancilla `A` in its
//! `|n>` basis stands in for correlating it with an environment and tracing
//! that out. A register `M` of dimension `N1` (the number of observed groups)
//! then records the group label, and tracing out `A` leaves
//! `sigma^{QM} = sum_j |j><j| ⊗ sum_k A_kj rho A_kj^dag`.
//!
//! The Holevo quantity can only decrease along this chain, and its final
//! value decomposes exactly into the mutual information plus the average
//! Holevo quantity left after each observed outcome.

use serde::{Deserialize, Serialize};

use crate::channel::{outcome_table, Ensemble, GroupedMeasurement};
use crate::error::{Error, Result};
use crate::info::{bound_report, holevo_chi};
use crate::linalg::{von_neumann_entropy, ComplexMatrix, DensityMatrix};

/// Tolerance for the decomposition identity (two stacked eigendecompositions).
pub const IDENTITY_TOL: f64 = 1e-8;
/// Tolerance for monotonicity inequalities.
pub const MONOTONE_TOL: f64 = 1e-9;

/// Ensemble of states on a composite system with known subsystem dimensions.
#[derive(Debug, Clone)]
pub struct JointEnsemble {
    ensemble: Ensemble,
    dims: Vec<usize>,
}

impl JointEnsemble {
    pub fn new(ensemble: Ensemble, dims: Vec<usize>) -> Result<Self> {
        let total: usize = dims.iter().product();
        if dims.is_empty() || total != ensemble.dim() {
            return Err(Error::DimensionMismatch {
                expected: total,
                actual: ensemble.dim(),
            });
        }
        Ok(Self { ensemble, dims })
    }

    pub fn ensemble(&self) -> &Ensemble {
        &self.ensemble
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Ensemble of marginals with subsystem `traced` removed.
    pub fn trace_out(&self, traced: usize) -> Result<JointEnsemble> {
        if traced >= self.dims.len() || self.dims.len() < 2 {
            return Err(Error::IndexOutOfRange {
                index: traced,
                len: self.dims.len(),
            });
        }
        let keep: Vec<usize> = (0..self.dims.len()).filter(|&k| k != traced).collect();
        let states = self
            .ensemble
            .states()
            .iter()
            .map(|s| DensityMatrix::from_unnormalized(&s.matrix().partial_trace(&self.dims, &keep)?))
            .collect::<Result<Vec<_>>>()?;
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        JointEnsemble::new(Ensemble::new(self.ensemble.probs().clone(), states)?, dims)
    }
}

/// Holevo quantity before and after discarding subsystem `traced`.
pub fn chi_partial_trace_check(je: &JointEnsemble, traced: usize) -> Result<(f64, f64)> {
    let before = holevo_chi(je.ensemble());
    let after = holevo_chi(je.trace_out(traced)?.ensemble());
    Ok((before, after))
}

/// Isometry `V = sum_n |n> ⊗ A_n` of shape `(N dQ) x dQ`, operators in group order.
pub fn dilate(meas: &GroupedMeasurement) -> ComplexMatrix {
    let d = meas.dim();
    let ops: Vec<&ComplexMatrix> = meas.operators().collect();
    ComplexMatrix::from_fn(ops.len() * d, d, |row, col| ops[row / d][(row % d, col)])
}

/// Diagonal of the ancilla marginal of `V rho V^dag`: the probability of each operator.
pub fn ancilla_probabilities(isometry: &ComplexMatrix, rho: &DensityMatrix) -> Result<Vec<f64>> {
    let d = rho.dim();
    if isometry.cols() != d || !isometry.rows().is_multiple_of(d) {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: isometry.cols(),
        });
    }
    let n = isometry.rows() / d;
    let joint = rho.matrix().sandwich(isometry);
    let ancilla = joint.partial_trace(&[n, d], &[0])?;
    Ok(ancilla.diagonal().iter().map(|z| z.re).collect())
}

/// Zeroes the off-diagonal ancilla blocks of an `A ⊗ Q` operator.
fn dephase_ancilla(joint: &ComplexMatrix, n: usize, d: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(n * d, n * d, |r, c| {
        if r / d == c / d {
            joint[(r, c)]
        } else {
            num_complex::Complex64::new(0.0, 0.0)
        }
    })
}

/// Places ancilla block `n` at register value `group_of[n]` in `M ⊗ A ⊗ Q`.
fn correlate_register(dephased: &ComplexMatrix, group_of: &[usize], n_groups: usize, d: usize) -> ComplexMatrix {
    let n = group_of.len();
    let dim = n_groups * n * d;
    let mut out = ComplexMatrix::zeros(dim, dim);
    for (a, &j) in group_of.iter().enumerate() {
        let offset = (j * n + a) * d;
        for r in 0..d {
            for c in 0..d {
                out[(offset + r, offset + c)] = dephased[(a * d + r, a * d + c)];
            }
        }
    }
    out
}

/// Joint states at each stage of the construction for one input state.
struct Stages {
    dephased_aq: DensityMatrix,
    sigma_qm: DensityMatrix,
}

fn run_stages(meas: &GroupedMeasurement, isometry: &ComplexMatrix, rho: &DensityMatrix) -> Result<Stages> {
    let d = meas.dim();
    let n = meas.n_operators();
    let n_groups = meas.n_groups();
    let group_of: Vec<usize> = meas
        .groups()
        .iter()
        .enumerate()
        .flat_map(|(j, g)| std::iter::repeat_n(j, g.len()))
        .collect();

    let dephased = dephase_ancilla(&rho.matrix().sandwich(isometry), n, d);
    let maq = correlate_register(&dephased, &group_of, n_groups, d);
    let qm = maq.partial_trace(&[n_groups, n, d], &[0, 2])?;
    Ok(Stages {
        dephased_aq: DensityMatrix::from_unnormalized(&dephased)?,
        sigma_qm: DensityMatrix::from_unnormalized(&qm)?,
    })
}

/// Numerical certificate for the chain `chi'' = M + sum_j P(j) chi_j <= chi' <= chi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Theorem1Certificate {
    /// Holevo quantity of the encoding ensemble on `Q`.
    pub chi_q: f64,
    /// After the dilation and dephasing of `A`, on `A ⊗ Q`.
    pub chi_qa_prime: f64,
    /// After correlating `M` and tracing out `A`, on `M ⊗ Q`.
    pub chi_qm_doubleprime: f64,
    pub mutual_info: f64,
    pub sum_pj_chi_j: f64,
    /// `chi'' - (M + sum_j P(j) chi_j)`.
    pub identity_residual: f64,
    /// `chi_q - chi''`.
    pub chain_gap: f64,
    /// Max `|ancilla probability - outcome table probability|` over states and operators.
    pub dilation_probability_residual: f64,
    pub identity_holds: bool,
    pub monotone_holds: bool,
}

/// Builds the construction for `rho` and every `rho_i` and evaluates the chain.
pub fn theorem1_trace(eps: &Ensemble, meas: &GroupedMeasurement) -> Result<Theorem1Certificate> {
    if eps.dim() != meas.dim() {
        return Err(Error::DimensionMismatch {
            expected: meas.dim(),
            actual: eps.dim(),
        });
    }
    let isometry = dilate(meas);
    let rho = eps.state();
    let mixed = run_stages(meas, &isometry, &rho)?;
    let members = eps
        .states()
        .iter()
        .map(|s| run_stages(meas, &isometry, s))
        .collect::<Result<Vec<_>>>()?;

    let holevo_of = |whole: &DensityMatrix, parts: &mut dyn Iterator<Item = &DensityMatrix>| {
        let avg: f64 = eps
            .probs()
            .as_slice()
            .iter()
            .zip(parts)
            .map(|(p, s)| p * von_neumann_entropy(s))
            .sum();
        von_neumann_entropy(whole) - avg
    };
    let chi_qa_prime = holevo_of(&mixed.dephased_aq, &mut members.iter().map(|m| &m.dephased_aq));
    let chi_qm_doubleprime = holevo_of(&mixed.sigma_qm, &mut members.iter().map(|m| &m.sigma_qm));

    // The right-hand side comes from the classical outcome statistics and the
    // posterior ensembles, not from any joint state above.
    let report = bound_report(eps, meas)?;
    let chi_q = report.chi;

    let fine = meas.refine();
    let fine_table = outcome_table(eps, &fine)?;
    let mut prob_residual = 0.0f64;
    for (state, row) in eps.states().iter().zip(fine_table.p_j_given_i()) {
        let probs = ancilla_probabilities(&isometry, state)?;
        for (a, b) in probs.iter().zip(row) {
            prob_residual = prob_residual.max((a - b).abs());
        }
    }

    let identity_residual = chi_qm_doubleprime - (report.mutual_info + report.sum_pj_chi_j);
    let chain_gap = chi_q - chi_qm_doubleprime;
    Ok(Theorem1Certificate {
        chi_q,
        chi_qa_prime,
        chi_qm_doubleprime,
        mutual_info: report.mutual_info,
        sum_pj_chi_j: report.sum_pj_chi_j,
        identity_residual,
        chain_gap,
        dilation_probability_residual: prob_residual,
        identity_holds: identity_residual.abs() <= IDENTITY_TOL,
        monotone_holds: chain_gap >= -MONOTONE_TOL
            && chi_qa_prime <= chi_q + MONOTONE_TOL
            && chi_qm_doubleprime <= chi_qa_prime + MONOTONE_TOL,
    })
}
