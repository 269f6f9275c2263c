//! Majorization, symmetric measurements and Schur-concavity probes.
//!
//! `q ≺ p` (p majorizes q) means the descending prefix sums of `p` dominate
//! those of `q`. A spectral function `f` is Schur-concave when `q ≺ p`
//! implies `f(q) >= f(p)`; the probes here count pairs where that fails by
//! more than a tolerance.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::channel::{outcome_table, Ensemble, GroupedMeasurement, ZERO_PROB};
use crate::error::{Error, Result};
use crate::info::{avg_entropy_reduction, mutual_information};
use crate::linalg::{eigh, haar_unitary, inverse_sqrt, ComplexMatrix, DensityMatrix, ProbVector};

const PREFIX_TOL: f64 = 1e-12;

/// Haar samples used for the covariant measurement approximations.
pub const UC_SAMPLES: usize = 512;
/// Frozen probe tolerance for entropy reduction under [`uc_measurement_approx`]
/// with a rank-one seed at `UC_SAMPLES`; the measured covariance residual is
/// ~2e-15 bits, so the initial 5e-3 stands.
pub const UC_ENTROPY_REDUCTION_TOL: f64 = 5e-3;
/// Frozen tolerance for pure-ensemble mutual information under
/// [`uc_measurement_approx`] at `UC_SAMPLES`, d = 2, 3: 1.5x the largest
/// measured covariance residual (6.3e-2 bits over 8 measurements x 20 states
/// x 20 rotations), rounded up.
pub const UC_MUTUAL_INFO_TOL: f64 = 0.1;
const TOTAL_TOL: f64 = 1e-10;

/// True iff `p` majorizes `q` (`q ≺ p`). The shorter vector is zero-padded.
pub fn majorizes(p: &ProbVector, q: &ProbVector) -> bool {
    let n = p.len().max(q.len());
    let sorted_desc = |v: &ProbVector| {
        let mut s = v.as_slice().to_vec();
        s.resize(n, 0.0);
        s.sort_by(|a, b| b.total_cmp(a));
        s
    };
    let (ps, qs) = (sorted_desc(p), sorted_desc(q));
    let (mut sp, mut sq) = (0.0, 0.0);
    for (a, b) in ps.iter().zip(&qs) {
        sp += a;
        sq += b;
        if sp < sq - PREFIX_TOL {
            return false;
        }
    }
    (sp - sq).abs() <= TOTAL_TOL
}

/// `sum_m w_m P_m(p)` where `perms[m][x]` is the source index placed at `x`.
pub fn mix_permutations(p: &ProbVector, perms: &[Vec<usize>], weights: &ProbVector) -> Result<ProbVector> {
    if perms.len() != weights.len() {
        return Err(Error::DimensionMismatch {
            expected: perms.len(),
            actual: weights.len(),
        });
    }
    let d = p.len();
    let mut q = vec![0.0; d];
    for (perm, &w) in perms.iter().zip(weights.as_slice()) {
        let mut seen = vec![false; d];
        if perm.len() != d || perm.iter().any(|&s| s >= d || std::mem::replace(&mut seen[s], true)) {
            return Err(Error::InvalidArgument(format!("{perm:?} is not a permutation of 0..{d}")));
        }
        for (x, &src) in perm.iter().enumerate() {
            q[x] += w * p[src];
        }
    }
    ProbVector::normalized(q)
}

fn random_simplex<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ProbVector> {
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    ProbVector::normalized(w)
}

/// Random `(p, q)` with `q ≺ p`: `q` is a convex mixture of 3 to 8 random
/// permutations of `p`.
pub fn random_majorized_pair<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<(ProbVector, ProbVector)> {
    if d < 2 {
        return Err(Error::InvalidArgument(format!("majorized pairs need d >= 2, got {d}")));
    }
    let p = random_simplex(d, rng)?;
    let m = rng.random_range(3..=8);
    let perms: Vec<Vec<usize>> = (0..m)
        .map(|_| {
            let mut perm: Vec<usize> = (0..d).collect();
            perm.shuffle(rng);
            perm
        })
        .collect();
    let weights = random_simplex(m, rng)?;
    let q = mix_permutations(&p, &perms, &weights)?;
    Ok((p, q))
}

/// Distinct permutations of `values` in lexicographic order.
pub fn distinct_permutations(values: &[f64]) -> Vec<Vec<f64>> {
    let mut current = values.to_vec();
    current.sort_by(f64::total_cmp);
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn next_permutation(v: &mut [f64]) -> bool {
    let n = v.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && v[i - 1] >= v[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while v[j] <= v[i - 1] {
        j -= 1;
    }
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

/// Completely symmetric classical measurement generated by `kernel`.
///
/// One diagonal operator `diag(sqrt(d/count * pi(kernel)))` per distinct
/// permutation `pi`; every position sees each kernel value equally often, so
/// the scale factor makes the set exactly complete. The set is closed under
/// conjugation by permutation matrices.
pub fn symmetric_classical_measurement(kernel: &ProbVector, d: usize) -> Result<GroupedMeasurement> {
    if kernel.len() != d {
        return Err(Error::DimensionMismatch {
            expected: d,
            actual: kernel.len(),
        });
    }
    let perms = distinct_permutations(kernel.as_slice());
    let scale = d as f64 / perms.len() as f64;
    let ops = perms
        .iter()
        .map(|pattern| {
            let diag: Vec<f64> = pattern.iter().map(|&x| (x * scale).sqrt()).collect();
            ComplexMatrix::from_real_diagonal(&diag)
        })
        .collect();
    GroupedMeasurement::efficient(ops)
}

/// Finite-sample approximation of the unitarily covariant measurement
/// generated by `seed_op`.
///
/// Operators are `B_u = U_u A U_u^dag S^{-1/2}` with `S = sum_u U_u A^dag A U_u^dag`,
/// which makes the set exactly complete; covariance holds only approximately.
pub fn uc_measurement_approx<R: Rng + ?Sized>(
    seed_op: &ComplexMatrix,
    n_samples: usize,
    rng: &mut R,
) -> Result<GroupedMeasurement> {
    if !seed_op.is_square() {
        return Err(Error::NotSquare {
            rows: seed_op.rows(),
            cols: seed_op.cols(),
        });
    }
    let d = seed_op.rows();
    if n_samples < d * d {
        return Err(Error::InvalidArgument(format!(
            "need at least d^2 = {} samples, got {n_samples}",
            d * d
        )));
    }
    let effect = &seed_op.adjoint() * seed_op;
    let mut rotated = Vec::with_capacity(n_samples);
    let mut s = ComplexMatrix::zeros(d, d);
    for _ in 0..n_samples {
        let u = haar_unitary(d, rng)?;
        s = &s + &effect.sandwich(&u);
        rotated.push(seed_op.sandwich(&u));
    }
    let s_inv_sqrt = inverse_sqrt(&s.hermitize())?;
    GroupedMeasurement::efficient(rotated.iter().map(|b| b * &s_inv_sqrt).collect())
}

/// Mixture choosing measurement `m` with probability `weights[m]`; group
/// indices of later measurements follow those of earlier ones.
pub fn mix_measurements(parts: &[GroupedMeasurement], weights: &ProbVector) -> Result<GroupedMeasurement> {
    if parts.len() != weights.len() || parts.is_empty() {
        return Err(Error::DimensionMismatch {
            expected: parts.len(),
            actual: weights.len(),
        });
    }
    let d = parts[0].dim();
    let mut groups = Vec::new();
    for (meas, &w) in parts.iter().zip(weights.as_slice()) {
        if meas.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: meas.dim(),
            });
        }
        let root = w.sqrt();
        for g in meas.groups() {
            groups.push(g.iter().map(|a| a.scale(root)).collect());
        }
    }
    GroupedMeasurement::new(groups)
}

/// Pure-state ensemble of eigenvectors weighted by eigenvalues; zero
/// eigenvalues are dropped.
pub fn eigen_ensemble(rho: &DensityMatrix) -> Result<Ensemble> {
    let e = eigh(rho.matrix())?;
    let mut pairs = Vec::new();
    for (k, &lambda) in e.values.iter().enumerate() {
        if lambda > ZERO_PROB {
            pairs.push((lambda, DensityMatrix::pure(&e.vectors.column(k))?));
        }
    }
    let total: f64 = pairs.iter().map(|(l, _)| l).sum();
    for (l, _) in &mut pairs {
        *l /= total;
    }
    Ensemble::from_pairs(pairs)
}

/// Spectral quantity evaluated by a Schur probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProbeQuantity {
    EntropyReduction,
    PureEnsembleMutualInfo,
}

/// How a probability vector becomes a density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Embedding {
    /// Diagonal in the computational basis.
    Classical,
    /// `V diag(p) V^dag` with one Haar `V` shared by both members of a pair.
    RandomBasis,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchurProbeReport {
    pub pairs_tested: usize,
    pub violations: usize,
    /// Minimum over pairs of `f(q) - f(p)`; negative values point against Schur-concavity.
    pub worst_violation: f64,
    pub tolerance_used: f64,
    pub quantity: ProbeQuantity,
    pub embedding: Embedding,
}

impl SchurProbeReport {
    /// Combines reports of the same probe run on disjoint pair sets.
    pub fn merge(&self, other: &SchurProbeReport) -> SchurProbeReport {
        SchurProbeReport {
            pairs_tested: self.pairs_tested + other.pairs_tested,
            violations: self.violations + other.violations,
            worst_violation: self.worst_violation.min(other.worst_violation),
            ..self.clone()
        }
    }
}

/// Evaluates `quantity` on `rho` under `meas`.
pub fn spectral_quantity(meas: &GroupedMeasurement, quantity: ProbeQuantity, rho: &DensityMatrix) -> Result<f64> {
    match quantity {
        ProbeQuantity::EntropyReduction => avg_entropy_reduction(rho, meas),
        ProbeQuantity::PureEnsembleMutualInfo => {
            let eps = eigen_ensemble(rho)?;
            let table = outcome_table(&eps, meas)?;
            Ok(mutual_information(&table, eps.probs()))
        }
    }
}

/// Draws `n_pairs` majorized pairs `q ≺ p`, embeds them and counts pairs with
/// `f(q) < f(p) - tol`.
pub fn schur_probe<R: Rng + ?Sized>(
    meas: &GroupedMeasurement,
    quantity: ProbeQuantity,
    embedding: Embedding,
    n_pairs: usize,
    tol: f64,
    rng: &mut R,
) -> Result<SchurProbeReport> {
    if !meas.is_efficient() {
        return Err(Error::InvalidArgument("Schur probes require an efficient measurement".into()));
    }
    let d = meas.dim();
    let mut report = SchurProbeReport {
        pairs_tested: 0,
        violations: 0,
        worst_violation: f64::INFINITY,
        tolerance_used: tol,
        quantity,
        embedding,
    };
    for _ in 0..n_pairs {
        let (p, q) = random_majorized_pair(d, rng)?;
        let (rho_p, rho_q) = match embedding {
            Embedding::Classical => (DensityMatrix::diagonal(&p)?, DensityMatrix::diagonal(&q)?),
            Embedding::RandomBasis => {
                let v = haar_unitary(d, rng)?;
                (
                    DensityMatrix::diagonal(&p)?.conjugate(&v)?,
                    DensityMatrix::diagonal(&q)?.conjugate(&v)?,
                )
            }
        };
        let diff = spectral_quantity(meas, quantity, &rho_q)? - spectral_quantity(meas, quantity, &rho_p)?;
        report.pairs_tested += 1;
        report.worst_violation = report.worst_violation.min(diff);
        if diff < -tol {
            report.violations += 1;
        }
    }
    Ok(report)
}

/// Largest `|f(V rho V^dag) - f(rho)|` over `n_rotations` Haar `V`.
///
/// Zero for an exactly covariant measurement; for finite approximations this
/// is the covariance residual that calibrates probe tolerances.
pub fn covariance_residual<R: Rng + ?Sized>(
    meas: &GroupedMeasurement,
    quantity: ProbeQuantity,
    rho: &DensityMatrix,
    n_rotations: usize,
    rng: &mut R,
) -> Result<f64> {
    let base = spectral_quantity(meas, quantity, rho)?;
    let mut worst = 0.0f64;
    for _ in 0..n_rotations {
        let v = haar_unitary(meas.dim(), rng)?;
        let rotated = spectral_quantity(meas, quantity, &rho.conjugate(&v)?)?;
        worst = worst.max((rotated - base).abs());
    }
    Ok(worst)
}

/// Largest `|M(V eps V^dag) - M(eps)|` over `n_rotations` Haar `V` applied to
/// every member of `eps`.
pub fn rotation_drift_mi<R: Rng + ?Sized>(
    meas: &GroupedMeasurement,
    eps: &Ensemble,
    n_rotations: usize,
    rng: &mut R,
) -> Result<f64> {
    let mi = |e: &Ensemble| -> Result<f64> {
        let table = outcome_table(e, meas)?;
        Ok(mutual_information(&table, e.probs()))
    };
    let base = mi(eps)?;
    let mut worst = 0.0f64;
    for _ in 0..n_rotations {
        let v = haar_unitary(meas.dim(), rng)?;
        let states = eps
            .states()
            .iter()
            .map(|s| s.conjugate(&v))
            .collect::<Result<Vec<_>>>()?;
        let rotated = Ensemble::new(eps.probs().clone(), states)?;
        worst = worst.max((mi(&rotated)? - base).abs());
    }
    Ok(worst)
}
