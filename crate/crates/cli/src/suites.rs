//! Verification suites. Every check is a signed gap that passes iff
//! `gap >= -tolerance`.

use std::collections::BTreeMap;
use std::time::Instant;

use qbound_core::channel::{classical_channel, outcome_table};
use qbound_core::dilation::{
    chi_partial_trace_check, theorem1_trace, JointEnsemble, Theorem1Certificate, IDENTITY_TOL,
};
use qbound_core::info::{avg_entropy_reduction, bound_report, mutual_information, BoundReport};
use qbound_core::linalg::{ComplexMatrix, ProbVector};
use qbound_core::majorization::{
    rotation_drift_mi, schur_probe, symmetric_classical_measurement, uc_measurement_approx, Embedding,
    ProbeQuantity, SchurProbeReport, UC_ENTROPY_REDUCTION_TOL, UC_MUTUAL_INFO_TOL,
};
use qbound_core::sampling::{
    random_ensemble, random_instance, random_measurement, random_prior, random_pure_ensemble, InstanceRanges,
};
use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Suite, SuiteConfig};
use crate::error::CliError;

/// Tolerance of the classical identity `M = <dS>`.
pub const CLASSICAL_TOL: f64 = 1e-10;
/// Tolerance for ancilla probabilities against the outcome table.
pub const DILATION_PROB_TOL: f64 = 1e-10;
/// Majorized pairs per instance in the Schur suites, per quantity.
pub const CLASSICAL_PAIRS_PER_INSTANCE: usize = 4;
pub const UC_PAIRS_PER_INSTANCE: usize = 2;
/// Haar rotations per instance for the rotation-invariance drift.
pub const UC_ROTATIONS_PER_INSTANCE: usize = 4;

/// Generator for instance `index` of `suite`: one ChaCha stream per
/// (suite, instance), so any instance can be replayed on its own.
pub fn instance_rng(seed: u64, suite: Suite, index: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((suite.tag() << 32) | index as u64);
    rng
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub gap: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl Check {
    fn new(name: &'static str, gap: f64, tolerance: f64) -> Self {
        Self {
            name,
            // Adding +0 turns -0 into +0.
            gap: gap + 0.0,
            tolerance,
            pass: gap >= -tolerance,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConcavityRecord {
    pub dim: usize,
    pub n_states: usize,
    pub n_groups: usize,
    pub efficient: bool,
    /// `<dS>` of the mixture.
    pub ds_mixture: f64,
    /// `sum_i P(i) <dS(rho_i)>`.
    pub ds_average: f64,
    /// `M` at the mixed prior.
    pub mi_mixture: f64,
    /// Weighted `M` at the component priors.
    pub mi_average: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClassicalRecord {
    pub dim: usize,
    pub n_outcomes: usize,
    pub mutual_info: f64,
    pub avg_entropy_reduction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SchurRecord {
    pub dim: usize,
    pub n_operators: usize,
    pub entropy_reduction: SchurProbeReport,
    pub mutual_info: SchurProbeReport,
    /// Largest change of `M` under global rotations; covariant suite only.
    pub rotation_drift: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DilationRecord {
    pub dim: usize,
    pub n_states: usize,
    pub n_groups: usize,
    pub n_operators: usize,
    pub certificate: Theorem1Certificate,
    pub joint_dims: Vec<usize>,
    pub joint_chi: f64,
    /// `chi` after discarding subsystem 0 and 1 respectively.
    pub joint_chi_traced: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Record {
    Bounds(BoundReport),
    Concavity(ConcavityRecord),
    Classical(ClassicalRecord),
    Schur(SchurRecord),
    Dilation(DilationRecord),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Row {
    pub instance_id: usize,
    pub record: Record,
    pub checks: Vec<Check>,
}

impl Row {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GapStat {
    pub min_gap: f64,
    pub worst_instance: usize,
    pub tolerance: f64,
    pub failures: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub rows: Vec<Row>,
    /// Per check name.
    pub gaps: BTreeMap<&'static str, GapStat>,
    pub wall_time_s: f64,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures() == 0
    }

    pub fn failures(&self) -> usize {
        self.gaps.values().map(|g| g.failures).sum()
    }

    pub fn n_checks(&self) -> usize {
        self.rows.iter().map(|r| r.checks.len()).sum()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteResult {
    pub config: SuiteConfig,
    pub suites: Vec<SuiteOutcome>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(SuiteOutcome::passed)
    }
}

pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteResult, CliError> {
    cfg.validate()?;
    let suites = cfg
        .suite
        .expand()
        .into_iter()
        .map(|s| run_one(cfg, s))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(SuiteResult {
        config: cfg.clone(),
        suites,
    })
}

fn run_one(cfg: &SuiteConfig, suite: Suite) -> Result<SuiteOutcome, CliError> {
    let start = Instant::now();
    let dims = match suite {
        Suite::SchurUc => cfg.uc_dims(),
        _ => cfg.dims.clone(),
    };
    let rows = (0..cfg.n_instances)
        .into_par_iter()
        .map(|i| {
            let mut rng = instance_rng(cfg.seed, suite, i);
            evaluate(cfg, suite, &dims, i, &mut rng).map_err(|source| CliError::Numerical {
                suite,
                instance: i,
                source,
            })
        })
        .collect::<Result<Vec<_>, _>>()?;

    let mut gaps: BTreeMap<&'static str, GapStat> = BTreeMap::new();
    for row in &rows {
        for c in &row.checks {
            let stat = gaps.entry(c.name).or_insert(GapStat {
                min_gap: f64::INFINITY,
                worst_instance: row.instance_id,
                tolerance: c.tolerance,
                failures: 0,
            });
            if c.gap < stat.min_gap {
                stat.min_gap = c.gap;
                stat.worst_instance = row.instance_id;
            }
            stat.failures += usize::from(!c.pass);
        }
    }
    Ok(SuiteOutcome {
        suite,
        dims,
        rows,
        gaps,
        wall_time_s: start.elapsed().as_secs_f64(),
    })
}

/// Evaluates one instance of `suite`; exposed so a single failing instance
/// can be replayed.
pub fn evaluate_instance(cfg: &SuiteConfig, suite: Suite, index: usize) -> Result<Row, CliError> {
    let dims = match suite {
        Suite::SchurUc => cfg.uc_dims(),
        _ => cfg.dims.clone(),
    };
    let mut rng = instance_rng(cfg.seed, suite, index);
    evaluate(cfg, suite, &dims, index, &mut rng).map_err(|source| CliError::Numerical {
        suite,
        instance: index,
        source,
    })
}

fn evaluate(
    cfg: &SuiteConfig,
    suite: Suite,
    dims: &[usize],
    id: usize,
    rng: &mut ChaCha8Rng,
) -> qbound_core::Result<Row> {
    let (record, checks) = match suite {
        Suite::Bounds => bounds(cfg, dims, rng)?,
        Suite::Concavity => concavity(cfg, dims, rng)?,
        Suite::ClassicalEquality => classical_equality(cfg, dims, rng)?,
        Suite::SchurClassical => schur_classical(cfg, dims, rng)?,
        Suite::SchurUc => schur_uc(cfg, dims, rng)?,
        Suite::Dilation => dilation(cfg, dims, id, rng)?,
        Suite::All => unreachable!("expanded before evaluation"),
    };
    Ok(Row {
        instance_id: id,
        record,
        checks,
    })
}

type Evaluated = qbound_core::Result<(Record, Vec<Check>)>;

fn ranges(cfg: &SuiteConfig, dims: &[usize]) -> InstanceRanges {
    InstanceRanges {
        dims: dims.to_vec(),
        n_states: (cfg.n_states.lo, cfg.n_states.hi),
        n_kraus: (cfg.n_kraus.lo, cfg.n_kraus.hi),
        n_groups: (cfg.n_groups.lo, cfg.n_groups.hi),
    }
}

fn pick_dim(dims: &[usize], rng: &mut ChaCha8Rng) -> usize {
    *dims.choose(rng).expect("validated non-empty")
}

fn bounds(cfg: &SuiteConfig, dims: &[usize], rng: &mut ChaCha8Rng) -> Evaluated {
    let (eps, meas) = random_instance(&ranges(cfg, dims), rng)?;
    let r = bound_report(&eps, &meas)?;
    let checks = bound_checks(&r, cfg.gap_tol());
    Ok((Record::Bounds(r), checks))
}

fn concavity(cfg: &SuiteConfig, dims: &[usize], rng: &mut ChaCha8Rng) -> Evaluated {
    let d = pick_dim(dims, rng);
    let n_kraus = rng.random_range(cfg.n_kraus.lo..=cfg.n_kraus.hi);
    let n_groups = rng.random_range(cfg.n_groups.lo.min(n_kraus)..=cfg.n_groups.hi.min(n_kraus));
    let meas = random_measurement(d, n_kraus, n_groups, rng)?;
    let n = rng.random_range(cfg.n_states.lo.max(2)..=cfg.n_states.hi.max(2));
    let eps = random_ensemble(d, n, rng)?;

    let ds_mixture = avg_entropy_reduction(&eps.state(), &meas)?;
    let mut ds_average = 0.0;
    for (p, s) in eps.iter() {
        ds_average += p * avg_entropy_reduction(s, &meas)?;
    }

    let w: f64 = rng.random();
    let p1 = random_prior(n, rng)?;
    let p2 = random_prior(n, rng)?;
    let mixed = ProbVector::normalized(
        p1.as_slice()
            .iter()
            .zip(p2.as_slice())
            .map(|(a, b)| w * a + (1.0 - w) * b)
            .collect(),
    )?;
    let mi_at = |prior: ProbVector| -> qbound_core::Result<f64> {
        let e = eps.with_probs(prior)?;
        Ok(mutual_information(&outcome_table(&e, &meas)?, e.probs()))
    };
    let mi_mixture = mi_at(mixed)?;
    let mi_average = w * mi_at(p1)? + (1.0 - w) * mi_at(p2)?;

    let tol = cfg.gap_tol();
    let checks = vec![
        Check::new("entropy_reduction_concavity", ds_mixture - ds_average, tol),
        Check::new("mutual_info_prior_concavity", mi_mixture - mi_average, tol),
    ];
    let record = ConcavityRecord {
        dim: d,
        n_states: n,
        n_groups: meas.n_groups(),
        efficient: meas.is_efficient(),
        ds_mixture,
        ds_average,
        mi_mixture,
        mi_average,
    };
    Ok((Record::Concavity(record), checks))
}

fn classical_equality(cfg: &SuiteConfig, dims: &[usize], rng: &mut ChaCha8Rng) -> Evaluated {
    let d = pick_dim(dims, rng);
    let n_out = rng.random_range(2..=d + 1);
    let prior = random_prior(d, rng)?;
    let kernel = (0..d)
        .map(|_| random_prior(n_out, rng).map(ProbVector::into_inner))
        .collect::<qbound_core::Result<Vec<_>>>()?;
    let (eps, meas) = classical_channel(&prior, &kernel)?;
    let r = bound_report(&eps, &meas)?;
    let tol = cfg.tol.unwrap_or(CLASSICAL_TOL);
    let checks = vec![Check::new(
        "classical_identity",
        -(r.mutual_info - r.avg_entropy_reduction).abs(),
        tol,
    )];
    let record = ClassicalRecord {
        dim: d,
        n_outcomes: n_out,
        mutual_info: r.mutual_info,
        avg_entropy_reduction: r.avg_entropy_reduction,
    };
    Ok((Record::Classical(record), checks))
}

fn schur_classical(cfg: &SuiteConfig, dims: &[usize], rng: &mut ChaCha8Rng) -> Evaluated {
    let d = pick_dim(dims, rng);
    let kernel = random_prior(d, rng)?;
    let meas = symmetric_classical_measurement(&kernel, d)?;
    let tol = cfg.gap_tol();
    let probe = |q, rng: &mut ChaCha8Rng| schur_probe(&meas, q, Embedding::Classical, CLASSICAL_PAIRS_PER_INSTANCE, tol, rng);
    let ds = probe(ProbeQuantity::EntropyReduction, rng)?;
    let mi = probe(ProbeQuantity::PureEnsembleMutualInfo, rng)?;
    let checks = vec![
        Check::new("schur_entropy_reduction", ds.worst_violation, tol),
        Check::new("schur_mutual_info", mi.worst_violation, tol),
    ];
    let record = SchurRecord {
        dim: d,
        n_operators: meas.n_operators(),
        entropy_reduction: ds,
        mutual_info: mi,
        rotation_drift: None,
    };
    Ok((Record::Schur(record), checks))
}

fn rank_one_seed(d: usize) -> ComplexMatrix {
    let mut diag = vec![0.0; d];
    diag[0] = 1.0;
    ComplexMatrix::from_real_diagonal(&diag)
}

fn schur_uc(cfg: &SuiteConfig, dims: &[usize], rng: &mut ChaCha8Rng) -> Evaluated {
    let d = pick_dim(dims, rng);
    let meas = uc_measurement_approx(&rank_one_seed(d), cfg.samples, rng)?;
    let ds_tol = cfg.uc_tol.unwrap_or(UC_ENTROPY_REDUCTION_TOL);
    let mi_tol = cfg.uc_tol.unwrap_or(UC_MUTUAL_INFO_TOL);
    let ds = schur_probe(
        &meas,
        ProbeQuantity::EntropyReduction,
        Embedding::RandomBasis,
        UC_PAIRS_PER_INSTANCE,
        ds_tol,
        rng,
    )?;
    let mi = schur_probe(
        &meas,
        ProbeQuantity::PureEnsembleMutualInfo,
        Embedding::RandomBasis,
        UC_PAIRS_PER_INSTANCE,
        mi_tol,
        rng,
    )?;
    let n = rng.random_range(cfg.n_states.lo.max(2)..=cfg.n_states.hi.max(2));
    let eps = random_pure_ensemble(d, n, rng)?;
    let drift = rotation_drift_mi(&meas, &eps, UC_ROTATIONS_PER_INSTANCE, rng)?;
    let checks = vec![
        Check::new("schur_entropy_reduction", ds.worst_violation, ds_tol),
        Check::new("schur_mutual_info", mi.worst_violation, mi_tol),
        Check::new("rotation_drift", -drift, mi_tol),
    ];
    let record = SchurRecord {
        dim: d,
        n_operators: meas.n_operators(),
        entropy_reduction: ds,
        mutual_info: mi,
        rotation_drift: Some(drift),
    };
    Ok((Record::Schur(record), checks))
}

fn dilation(cfg: &SuiteConfig, dims: &[usize], id: usize, rng: &mut ChaCha8Rng) -> Evaluated {
    let d = pick_dim(dims, rng);
    let n_ops = rng.random_range(cfg.n_kraus.lo.max(2)..=cfg.n_kraus.hi.max(2));
    let n_groups = rng.random_range(cfg.n_groups.lo.min(n_ops - 1)..=cfg.n_groups.hi.min(n_ops - 1));
    let meas = random_measurement(d, n_ops, n_groups, rng)?;
    let n = rng.random_range(cfg.n_states.lo..=cfg.n_states.hi);
    let eps = random_ensemble(d, n, rng)?;
    let cert = theorem1_trace(&eps, &meas)?;

    let joint_dims = if id.is_multiple_of(2) { vec![2, 2] } else { vec![2, 3] };
    let total = joint_dims.iter().product();
    let n_joint = rng.random_range(cfg.n_states.lo.max(2)..=cfg.n_states.hi.max(2));
    let je = JointEnsemble::new(random_ensemble(total, n_joint, rng)?, joint_dims.clone())?;
    let (joint_chi, after0) = chi_partial_trace_check(&je, 0)?;
    let (_, after1) = chi_partial_trace_check(&je, 1)?;

    let tol = cfg.gap_tol();
    let identity_tol = cfg.tol.unwrap_or(IDENTITY_TOL);
    let checks = vec![
        Check::new("identity", -cert.identity_residual.abs(), identity_tol),
        Check::new("chain_qm_le_q", cert.chain_gap, tol),
        Check::new("chain_qa_le_q", cert.chi_q - cert.chi_qa_prime, tol),
        Check::new("chain_qm_le_qa", cert.chi_qa_prime - cert.chi_qm_doubleprime, tol),
        Check::new("ancilla_probabilities", -cert.dilation_probability_residual, DILATION_PROB_TOL),
        Check::new("partial_trace_0", joint_chi - after0, tol),
        Check::new("partial_trace_1", joint_chi - after1, tol),
    ];
    let record = DilationRecord {
        dim: d,
        n_states: n,
        n_groups: meas.n_groups(),
        n_operators: meas.n_operators(),
        certificate: cert,
        joint_dims,
        joint_chi,
        joint_chi_traced: [after0, after1],
    };
    Ok((Record::Dilation(record), checks))
}

/// Inequalities every bound report must satisfy.
pub fn bound_checks(report: &BoundReport, tol: f64) -> Vec<Check> {
    let mut checks = vec![
        Check::new("gap_holevo", report.gap_holevo, tol),
        Check::new("gap_sww_theorem1", report.gap_sww_theorem1, tol),
        Check::new("gap_gen_hall", report.gap_gen_hall, tol),
        Check::new("gap_sww_fine", report.gap_sww_fine, tol),
        // gap_holevo - gap_sww_theorem1 = sum_j P(j) chi_j.
        Check::new("tightening", report.gap_holevo - report.gap_sww_theorem1, tol),
    ];
    if let Some(h) = report.gap_hall {
        checks.push(Check::new("gap_hall", h, tol));
        checks.push(Check::new("ozawa", report.avg_entropy_reduction, tol));
    }
    checks
}
