//! Encoding ensembles, grouped (possibly inefficient) measurements and the
//! outcome statistics they induce.
//!
//! Indices follow one convention throughout: `i` labels the ensemble member,
//! `j` the observed group and `k` the operator's position within its group.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, DensityMatrix, ProbVector};

/// Outcomes with probability at or below this are treated as impossible.
pub const ZERO_PROB: f64 = 1e-12;
/// Tolerance on `max |sum A^dag A - I|`.
pub const COMPLETENESS_TOL: f64 = 1e-10;

/// Encoding ensemble `{P(i), rho_i}`.
#[derive(Debug, Clone)]
pub struct Ensemble {
    probs: ProbVector,
    states: Vec<DensityMatrix>,
}

impl Ensemble {
    pub fn new(probs: ProbVector, states: Vec<DensityMatrix>) -> Result<Self> {
        if probs.len() != states.len() {
            return Err(Error::DimensionMismatch {
                expected: probs.len(),
                actual: states.len(),
            });
        }
        let dim = states[0].dim();
        if let Some(bad) = states.iter().find(|s| s.dim() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                actual: bad.dim(),
            });
        }
        Ok(Self { probs, states })
    }

    pub fn from_pairs(pairs: Vec<(f64, DensityMatrix)>) -> Result<Self> {
        let (probs, states): (Vec<f64>, Vec<DensityMatrix>) = pairs.into_iter().unzip();
        if states.is_empty() {
            return Err(Error::InvalidArgument("ensemble must not be empty".into()));
        }
        Self::new(ProbVector::new(probs)?, states)
    }

    pub fn dim(&self) -> usize {
        self.states[0].dim()
    }

    pub fn len(&self) -> usize {
        self.states.len()
    }

    pub fn is_empty(&self) -> bool {
        self.states.is_empty()
    }

    pub fn probs(&self) -> &ProbVector {
        &self.probs
    }

    pub fn states(&self) -> &[DensityMatrix] {
        &self.states
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &DensityMatrix)> {
        self.probs.as_slice().iter().copied().zip(&self.states)
    }

    /// Same states, different prior.
    pub fn with_probs(&self, probs: ProbVector) -> Result<Self> {
        Self::new(probs, self.states.clone())
    }

    /// Mixture `rho = sum_i P(i) rho_i`.
    pub fn state(&self) -> DensityMatrix {
        ensemble_state(self)
    }
}

/// Mixture `rho = sum_i P(i) rho_i`.
pub fn ensemble_state(eps: &Ensemble) -> DensityMatrix {
    let d = eps.dim();
    let mut acc = ComplexMatrix::zeros(d, d);
    for (p, rho) in eps.iter() {
        acc = &acc + &rho.matrix().scale(p);
    }
    DensityMatrix::from_unnormalized(&acc).expect("convex mixture of states is a state")
}

/// Kraus operators `A_kj` partitioned into observed groups `j`.
///
/// An efficient measurement is the case where every group is a singleton.
#[derive(Debug, Clone)]
pub struct GroupedMeasurement {
    dim: usize,
    groups: Vec<Vec<ComplexMatrix>>,
}

impl GroupedMeasurement {
    pub fn new(groups: Vec<Vec<ComplexMatrix>>) -> Result<Self> {
        let dim = groups
            .first()
            .and_then(|g| g.first())
            .map(ComplexMatrix::rows)
            .ok_or_else(|| Error::InvalidArgument("measurement needs at least one operator".into()))?;
        if let Some(j) = groups.iter().position(Vec::is_empty) {
            return Err(Error::InvalidArgument(format!("group {j} is empty")));
        }
        for op in groups.iter().flatten() {
            if op.rows() != dim || op.cols() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    actual: if op.rows() != dim { op.rows() } else { op.cols() },
                });
            }
        }
        let meas = Self { dim, groups };
        let residual = meas.completeness_residual();
        if residual > COMPLETENESS_TOL {
            return Err(Error::Incomplete { residual });
        }
        Ok(meas)
    }

    /// Every operator in its own group.
    pub fn efficient(ops: Vec<ComplexMatrix>) -> Result<Self> {
        Self::new(ops.into_iter().map(|a| vec![a]).collect())
    }

    /// Groups `ops` by `labels[n]`; labels must cover `0..n_groups` without gaps.
    pub fn from_labels(ops: Vec<ComplexMatrix>, labels: &[usize]) -> Result<Self> {
        if ops.len() != labels.len() {
            return Err(Error::DimensionMismatch {
                expected: ops.len(),
                actual: labels.len(),
            });
        }
        let n_groups = labels.iter().max().map_or(0, |m| m + 1);
        let mut groups = vec![Vec::new(); n_groups];
        for (op, &label) in ops.into_iter().zip(labels) {
            groups[label].push(op);
        }
        Self::new(groups)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn groups(&self) -> &[Vec<ComplexMatrix>] {
        &self.groups
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn n_operators(&self) -> usize {
        self.groups.iter().map(Vec::len).sum()
    }

    /// True iff every group holds exactly one operator.
    pub fn is_efficient(&self) -> bool {
        self.groups.iter().all(|g| g.len() == 1)
    }

    /// All operators in group order, `j` outer and `k` inner.
    pub fn operators(&self) -> impl Iterator<Item = &ComplexMatrix> {
        self.groups.iter().flatten()
    }

    /// The efficient measurement in which every `(k, j)` is observed.
    pub fn refine(&self) -> Self {
        Self {
            dim: self.dim,
            groups: self.operators().map(|a| vec![a.clone()]).collect(),
        }
    }

    /// All operators merged into a single unobserved group.
    pub fn coarse_grain(&self) -> Self {
        Self {
            dim: self.dim,
            groups: vec![self.operators().cloned().collect()],
        }
    }

    /// `max |sum_kj A_kj^dag A_kj - I|`.
    pub fn completeness_residual(&self) -> f64 {
        let mut s = ComplexMatrix::zeros(self.dim, self.dim);
        for a in self.operators() {
            s = &s + &(&a.adjoint() * a);
        }
        s.max_abs_diff(&ComplexMatrix::identity(self.dim))
    }

    /// Unnormalized `sum_k A_kj rho A_kj^dag` for group `j`.
    pub fn group_output(&self, j: usize, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for a in &self.groups[j] {
            acc = &acc + &rho.sandwich(a);
        }
        acc
    }

    /// Non-selective channel `sum_kj A_kj rho A_kj^dag`.
    pub fn apply(&self, rho: &ComplexMatrix) -> ComplexMatrix {
        let mut acc = ComplexMatrix::zeros(self.dim, self.dim);
        for j in 0..self.groups.len() {
            acc = &acc + &self.group_output(j, rho);
        }
        acc
    }

    fn check_dim(&self, dim: usize) -> Result<()> {
        if dim != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                actual: dim,
            });
        }
        Ok(())
    }

    fn check_group(&self, j: usize) -> Result<()> {
        if j >= self.groups.len() {
            return Err(Error::IndexOutOfRange {
                index: j,
                len: self.groups.len(),
            });
        }
        Ok(())
    }
}

/// Born weight `Tr[A^dag A rho]`, clamped at zero.
fn born_weight(op: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    rho.sandwich(op).trace().re.max(0.0)
}

/// Joint and conditional outcome probabilities for one ensemble and measurement.
///
/// Conditional tables are indexed conditioning-variables first:
/// `p_j_given_i[i][j]`, `p_i_given_j[j][i]`, `p_k_given_ji[j][i][k]`,
/// `p_ik_given_j[j][i][k]`. Conditioning on an impossible event
/// (probability `<= ZERO_PROB`) yields the uninformative distribution:
/// the prior for `P(i|j)`, uniform for `P(k|j,i)`.
#[derive(Debug, Clone)]
pub struct OutcomeTable {
    prior: Vec<f64>,
    p_j_given_i: Vec<Vec<f64>>,
    p_j: Vec<f64>,
    p_i_given_j: Vec<Vec<f64>>,
    p_k_given_ji: Vec<Vec<Vec<f64>>>,
    p_ik_given_j: Vec<Vec<Vec<f64>>>,
}

impl OutcomeTable {
    pub fn prior(&self) -> &[f64] {
        &self.prior
    }

    pub fn p_j_given_i(&self) -> &[Vec<f64>] {
        &self.p_j_given_i
    }

    pub fn p_j(&self) -> &[f64] {
        &self.p_j
    }

    pub fn p_i_given_j(&self) -> &[Vec<f64>] {
        &self.p_i_given_j
    }

    pub fn p_k_given_ji(&self) -> &[Vec<Vec<f64>>] {
        &self.p_k_given_ji
    }

    pub fn p_ik_given_j(&self) -> &[Vec<Vec<f64>>] {
        &self.p_ik_given_j
    }

    pub fn n_states(&self) -> usize {
        self.prior.len()
    }

    pub fn n_groups(&self) -> usize {
        self.p_j.len()
    }

    /// Joint `P(i, j) = P(i) P(j|i)`, indexed `[i][j]`.
    pub fn joint(&self) -> Vec<Vec<f64>> {
        self.p_j_given_i
            .iter()
            .zip(&self.prior)
            .map(|(row, &pi)| row.iter().map(|&p| p * pi).collect())
            .collect()
    }

    /// Largest `|P(i|j)P(j) - P(j|i)P(i)|` over all `(i, j)`.
    pub fn bayes_residual(&self) -> f64 {
        let mut worst = 0.0f64;
        for (i, row) in self.p_j_given_i.iter().enumerate() {
            for (j, &pji) in row.iter().enumerate() {
                let lhs = self.p_i_given_j[j][i] * self.p_j[j];
                worst = worst.max((lhs - pji * self.prior[i]).abs());
            }
        }
        worst
    }
}

/// Builds the full outcome table for `eps` measured by `meas`.
pub fn outcome_table(eps: &Ensemble, meas: &GroupedMeasurement) -> Result<OutcomeTable> {
    meas.check_dim(eps.dim())?;
    let prior = eps.probs().as_slice().to_vec();
    let n_groups = meas.n_groups();

    // weights[i][j][k] = Tr[A_kj^dag A_kj rho_i]
    let weights: Vec<Vec<Vec<f64>>> = eps
        .states()
        .iter()
        .map(|rho| {
            meas.groups()
                .iter()
                .map(|g| g.iter().map(|a| born_weight(a, rho.matrix())).collect())
                .collect()
        })
        .collect();

    let p_j_given_i: Vec<Vec<f64>> = weights
        .iter()
        .map(|per_j| per_j.iter().map(|w| w.iter().sum()).collect())
        .collect();
    let p_j: Vec<f64> = (0..n_groups)
        .map(|j| prior.iter().zip(&p_j_given_i).map(|(pi, row)| pi * row[j]).sum())
        .collect();

    let p_i_given_j = (0..n_groups)
        .map(|j| {
            if p_j[j] <= ZERO_PROB {
                prior.clone()
            } else {
                prior
                    .iter()
                    .zip(&p_j_given_i)
                    .map(|(pi, row)| pi * row[j] / p_j[j])
                    .collect()
            }
        })
        .collect();

    let p_k_given_ji = (0..n_groups)
        .map(|j| {
            let n_k = meas.groups()[j].len();
            weights
                .iter()
                .zip(&p_j_given_i)
                .map(|(w, row)| {
                    if row[j] <= ZERO_PROB {
                        vec![1.0 / n_k as f64; n_k]
                    } else {
                        w[j].iter().map(|x| x / row[j]).collect()
                    }
                })
                .collect()
        })
        .collect();

    let p_ik_given_j = (0..n_groups)
        .map(|j| {
            let n_k = meas.groups()[j].len();
            weights
                .iter()
                .zip(&prior)
                .map(|(w, &pi)| {
                    if p_j[j] <= ZERO_PROB {
                        vec![pi / n_k as f64; n_k]
                    } else {
                        w[j].iter().map(|x| pi * x / p_j[j]).collect()
                    }
                })
                .collect()
        })
        .collect();

    Ok(OutcomeTable {
        prior,
        p_j_given_i,
        p_j,
        p_i_given_j,
        p_k_given_ji,
        p_ik_given_j,
    })
}

/// `sigma_{j|i} = sum_k A_kj rho_i A_kj^dag / P(j|i)`.
pub fn post_state(
    eps: &Ensemble,
    meas: &GroupedMeasurement,
    i: usize,
    j: usize,
) -> Result<DensityMatrix> {
    meas.check_dim(eps.dim())?;
    meas.check_group(j)?;
    let rho = eps.states().get(i).ok_or(Error::IndexOutOfRange {
        index: i,
        len: eps.len(),
    })?;
    selective_state(meas, j, rho)
}

/// Normalized output of group `j` acting on `rho`; errors if the group is impossible.
pub fn selective_state(
    meas: &GroupedMeasurement,
    j: usize,
    rho: &DensityMatrix,
) -> Result<DensityMatrix> {
    meas.check_dim(rho.dim())?;
    meas.check_group(j)?;
    let out = meas.group_output(j, rho.matrix());
    let probability = out.trace().re;
    if probability <= ZERO_PROB {
        return Err(Error::ImpossibleOutcome { probability });
    }
    DensityMatrix::from_unnormalized(&out)
}

/// Receiver's state after outcome `j`: `sum_k A_kj rho A_kj^dag / P(j)`.
pub fn receiver_state(eps: &Ensemble, meas: &GroupedMeasurement, j: usize) -> Result<DensityMatrix> {
    meas.check_dim(eps.dim())?;
    selective_state(meas, j, &ensemble_state(eps))
}

/// Ensemble `{P(i|j), sigma_{j|i}}` left after outcome `j`.
///
/// Members with `P(j|i) <= ZERO_PROB` or `P(i|j) <= ZERO_PROB` are carried
/// with probability zero and a maximally mixed placeholder state.
pub fn posterior_ensemble(eps: &Ensemble, meas: &GroupedMeasurement, j: usize) -> Result<Ensemble> {
    meas.check_dim(eps.dim())?;
    meas.check_group(j)?;
    let table = outcome_table(eps, meas)?;
    posterior_from_table(eps, meas, &table, j)
}

pub(crate) fn posterior_from_table(
    eps: &Ensemble,
    meas: &GroupedMeasurement,
    table: &OutcomeTable,
    j: usize,
) -> Result<Ensemble> {
    let p_j = table.p_j()[j];
    if p_j <= ZERO_PROB {
        return Err(Error::ImpossibleOutcome { probability: p_j });
    }
    let placeholder = DensityMatrix::maximally_mixed(eps.dim())?;
    let mut weights = Vec::with_capacity(eps.len());
    let mut states = Vec::with_capacity(eps.len());
    for (i, rho) in eps.states().iter().enumerate() {
        let p_ji = table.p_j_given_i()[i][j];
        let p_ij = table.p_i_given_j()[j][i];
        if p_ji <= ZERO_PROB || p_ij <= ZERO_PROB {
            weights.push(0.0);
            states.push(placeholder.clone());
        } else {
            weights.push(p_ij);
            states.push(selective_state(meas, j, rho)?);
        }
    }
    Ensemble::new(ProbVector::normalized(weights)?, states)
}

/// Embeds a classical channel as commuting quantum objects.
///
/// States are basis projectors `|i><i|` weighted by `prior`; outcome `j` has
/// the diagonal operator `diag(sqrt(kernel[i][j]))`. `kernel[i]` is the
/// distribution of outputs given input `i`.
pub fn classical_channel(
    prior: &ProbVector,
    kernel: &[Vec<f64>],
) -> Result<(Ensemble, GroupedMeasurement)> {
    let d = prior.len();
    if kernel.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: kernel.len(),
        });
    }
    let n_out = kernel[0].len();
    for (i, row) in kernel.iter().enumerate() {
        if row.len() != n_out {
            return Err(Error::DimensionMismatch {
                expected: n_out,
                actual: row.len(),
            });
        }
        ProbVector::new(row.clone()).map_err(|e| {
            Error::InvalidProbabilities(format!("kernel row {i} is not stochastic: {e}"))
        })?;
    }
    let states = (0..d)
        .map(|i| DensityMatrix::basis(d, i))
        .collect::<Result<Vec<_>>>()?;
    let ensemble = Ensemble::new(prior.clone(), states)?;
    let ops = (0..n_out)
        .map(|j| {
            let diag: Vec<f64> = kernel.iter().map(|row| row[j].max(0.0).sqrt()).collect();
            ComplexMatrix::from_real_diagonal(&diag)
        })
        .collect();
    Ok((ensemble, GroupedMeasurement::efficient(ops)?))
}
