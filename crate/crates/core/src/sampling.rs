//! Random instance generation for the verification suites.

use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use crate::channel::{Ensemble, GroupedMeasurement};
use crate::error::{Error, Result};
use crate::linalg::{random_density, random_kraus_set, random_pure, ProbVector};

/// Prior drawn uniformly from the probability simplex.
pub fn random_prior<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<ProbVector> {
    if n == 0 {
        return Err(Error::InvalidArgument("prior needs at least one entry".into()));
    }
    let w: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    ProbVector::normalized(w)
}

/// Ensemble of `n` Ginibre-random mixed states with a random prior.
pub fn random_ensemble<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Ensemble> {
    let prior = random_prior(n, rng)?;
    let states = (0..n).map(|_| random_density(d, rng)).collect::<Result<Vec<_>>>()?;
    Ensemble::new(prior, states)
}

/// Ensemble of `n` random pure states with a random prior.
pub fn random_pure_ensemble<R: Rng + ?Sized>(d: usize, n: usize, rng: &mut R) -> Result<Ensemble> {
    let prior = random_prior(n, rng)?;
    let states = (0..n).map(|_| random_pure(d, rng)).collect::<Result<Vec<_>>>()?;
    Ensemble::new(prior, states)
}

/// Labels assigning `n_ops` operators to exactly `n_groups` non-empty groups.
pub fn random_labels<R: Rng + ?Sized>(n_ops: usize, n_groups: usize, rng: &mut R) -> Result<Vec<usize>> {
    if n_groups == 0 || n_groups > n_ops {
        return Err(Error::InvalidArgument(format!(
            "cannot split {n_ops} operators into {n_groups} non-empty groups"
        )));
    }
    let mut labels: Vec<usize> = (0..n_groups).collect();
    labels.extend((n_groups..n_ops).map(|_| rng.random_range(0..n_groups)));
    labels.shuffle(rng);
    Ok(labels)
}

/// Random Kraus set of `n_ops` operators split into `n_groups` groups.
pub fn random_measurement<R: Rng + ?Sized>(
    d: usize,
    n_ops: usize,
    n_groups: usize,
    rng: &mut R,
) -> Result<GroupedMeasurement> {
    let ops = random_kraus_set(d, n_ops, rng)?;
    let labels = random_labels(n_ops, n_groups, rng)?;
    GroupedMeasurement::from_labels(ops, &labels)
}

/// Parameter ranges for [`random_instance`]; all bounds inclusive.
#[derive(Debug, Clone, PartialEq)]
pub struct InstanceRanges {
    pub dims: Vec<usize>,
    pub n_states: (usize, usize),
    pub n_kraus: (usize, usize),
    /// Upper end is clipped to the operator count.
    pub n_groups: (usize, usize),
}

impl Default for InstanceRanges {
    fn default() -> Self {
        Self {
            dims: vec![2, 3, 4],
            n_states: (2, 4),
            n_kraus: (2, 6),
            n_groups: (1, 6),
        }
    }
}

/// Draws a random (ensemble, measurement) pair within `ranges`.
pub fn random_instance<R: Rng + ?Sized>(
    ranges: &InstanceRanges,
    rng: &mut R,
) -> Result<(Ensemble, GroupedMeasurement)> {
    let d = *ranges
        .dims
        .choose(rng)
        .ok_or_else(|| Error::InvalidArgument("no dimensions to choose from".into()))?;
    let n_states = rng.random_range(ranges.n_states.0..=ranges.n_states.1);
    let n_kraus = rng.random_range(ranges.n_kraus.0..=ranges.n_kraus.1);
    let hi = ranges.n_groups.1.min(n_kraus);
    let lo = ranges.n_groups.0.min(hi).max(1);
    let n_groups = rng.random_range(lo..=hi);
    let eps = random_ensemble(d, n_states, rng)?;
    let meas = random_measurement(d, n_kraus, n_groups, rng)?;
    Ok((eps, meas))
}
