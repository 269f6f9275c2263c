use std::str::FromStr;

use qbound_core::channel::{classical_channel, Ensemble};
use qbound_core::instance::Instance;
use qbound_core::linalg::{ComplexMatrix, DensityMatrix, ProbVector};
use qbound_core::majorization::{symmetric_classical_measurement, uc_measurement_approx, UC_SAMPLES};
use qbound_core::sampling::{random_ensemble, random_measurement, random_prior, random_pure_ensemble};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::{MAX_DIM, MAX_SCHUR_CLASSICAL_DIM, MIN_DIM};
use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum GenerateKind {
    Random,
    Classical,
    SymmetricClassical,
    UcApprox,
}

/// Channel kernel: `bsc:e` for a binary symmetric channel, or rows of
/// `P(j|i)` separated by `;` with entries separated by `,`.
#[derive(Debug, Clone, PartialEq)]
pub enum KernelSpec {
    Bsc(f64),
    Rows(Vec<Vec<f64>>),
}

impl KernelSpec {
    pub fn rows(&self) -> Vec<Vec<f64>> {
        match self {
            KernelSpec::Bsc(e) => vec![vec![1.0 - e, *e], vec![*e, 1.0 - e]],
            KernelSpec::Rows(r) => r.clone(),
        }
    }
}

pub fn parse_list(s: &str) -> Result<Vec<f64>, String> {
    s.split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|_| format!("not a number: {t:?}")))
        .collect()
}

/// Comma-separated numbers as one command-line value.
#[derive(Debug, Clone, PartialEq)]
pub struct FloatList(pub Vec<f64>);

impl FromStr for FloatList {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_list(s).map(FloatList)
    }
}

impl FromStr for KernelSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if let Some(e) = s.strip_prefix("bsc:") {
            let e: f64 = e.trim().parse().map_err(|_| format!("bad crossover probability {e:?}"))?;
            if !(0.0..=1.0).contains(&e) {
                return Err(format!("crossover probability {e} outside [0, 1]"));
            }
            return Ok(KernelSpec::Bsc(e));
        }
        let rows = s.split(';').map(parse_list).collect::<Result<Vec<_>, _>>()?;
        Ok(KernelSpec::Rows(rows))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct GenerateParams {
    pub dim: Option<usize>,
    pub states: Option<usize>,
    pub kraus: Option<usize>,
    pub groups: Option<usize>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub prior: Option<Vec<f64>>,
    pub kernel: Option<KernelSpec>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn checked_dim(d: usize, max: usize) -> Result<usize, CliError> {
    if (MIN_DIM..=max).contains(&d) {
        Ok(d)
    } else {
        Err(usage(format!("--dim {d} outside {MIN_DIM}..={max}")))
    }
}

fn positive(name: &str, n: usize) -> Result<usize, CliError> {
    if n == 0 {
        Err(usage(format!("--{name} must be at least 1")))
    } else {
        Ok(n)
    }
}

fn prob_vector(name: &str, v: Vec<f64>) -> Result<ProbVector, CliError> {
    ProbVector::new(v).map_err(|e| usage(format!("--{name}: {e}")))
}

pub fn generate(kind: GenerateKind, p: &GenerateParams) -> Result<Instance, CliError> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let (eps, meas) = match kind {
        GenerateKind::Random => {
            let d = checked_dim(p.dim.unwrap_or(2), MAX_DIM)?;
            let n = positive("states", p.states.unwrap_or(2))?;
            let kraus = positive("kraus", p.kraus.unwrap_or(d))?;
            let groups = positive("groups", p.groups.unwrap_or(kraus))?;
            if groups > kraus {
                return Err(usage(format!("--groups {groups} exceeds --kraus {kraus}")));
            }
            (
                random_ensemble(d, n, &mut rng)?,
                random_measurement(d, kraus, groups, &mut rng)?,
            )
        }
        GenerateKind::Classical => {
            let kernel = p
                .kernel
                .as_ref()
                .ok_or_else(|| usage("classical needs --kernel (bsc:e or rows like 0.9,0.1;0.2,0.8)"))?
                .rows();
            let prior = match &p.prior {
                Some(v) => prob_vector("prior", v.clone())?,
                None => ProbVector::uniform(kernel.len())?,
            };
            classical_channel(&prior, &kernel).map_err(|e| usage(format!("--kernel: {e}")))?
        }
        GenerateKind::SymmetricClassical => {
            let kernel = match &p.kernel {
                Some(KernelSpec::Rows(rows)) if rows.len() == 1 => prob_vector("kernel", rows[0].clone())?,
                Some(_) => return Err(usage("symmetric-classical takes a single kernel row, e.g. 0.7,0.2,0.1")),
                None => random_prior(checked_dim(p.dim.unwrap_or(3), MAX_SCHUR_CLASSICAL_DIM)?, &mut rng)?,
            };
            let d = checked_dim(p.dim.unwrap_or(kernel.len()), MAX_SCHUR_CLASSICAL_DIM)?;
            if kernel.len() != d {
                return Err(usage(format!("kernel has {} entries but --dim is {d}", kernel.len())));
            }
            let prior = match &p.prior {
                Some(v) => prob_vector("prior", v.clone())?,
                None => ProbVector::uniform(d)?,
            };
            if prior.len() != d {
                return Err(usage(format!("--prior has {} entries but --dim is {d}", prior.len())));
            }
            let states = (0..d).map(|i| DensityMatrix::basis(d, i)).collect::<Result<Vec<_>, _>>()?;
            (Ensemble::new(prior, states)?, symmetric_classical_measurement(&kernel, d)?)
        }
        GenerateKind::UcApprox => {
            let d = checked_dim(p.dim.unwrap_or(2), MAX_DIM)?;
            let n = p.samples.unwrap_or(UC_SAMPLES);
            if n < d * d {
                return Err(usage(format!("--samples must be at least d^2 = {}", d * d)));
            }
            let states = positive("states", p.states.unwrap_or(2))?;
            let mut diag = vec![0.0; d];
            diag[0] = 1.0;
            let meas = uc_measurement_approx(&ComplexMatrix::from_real_diagonal(&diag), n, &mut rng)?;
            (random_pure_ensemble(d, states, &mut rng)?, meas)
        }
    };
    Ok(Instance::from_channel(&eps, &meas))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn kernel_parsing() {
        assert_eq!("bsc:0.11".parse::<KernelSpec>().unwrap(), KernelSpec::Bsc(0.11));
        assert_eq!(
            "0.9,0.1;0.2,0.8".parse::<KernelSpec>().unwrap(),
            KernelSpec::Rows(vec![vec![0.9, 0.1], vec![0.2, 0.8]])
        );
        assert!("bsc:2".parse::<KernelSpec>().is_err());
        assert!("a,b".parse::<KernelSpec>().is_err());
    }

    #[test]
    fn every_kind_loads_back() {
        let params = GenerateParams {
            kernel: Some(KernelSpec::Bsc(0.2)),
            samples: Some(16),
            ..GenerateParams::default()
        };
        for kind in [
            GenerateKind::Random,
            GenerateKind::Classical,
            GenerateKind::UcApprox,
        ] {
            let inst = generate(kind, &params).unwrap();
            Instance::from_json(&inst.to_json_pretty()).unwrap().to_channel().unwrap();
        }
        let sym = generate(GenerateKind::SymmetricClassical, &GenerateParams::default()).unwrap();
        sym.to_channel().unwrap();
    }

    #[test]
    fn bad_params_are_usage_errors() {
        let too_many_groups = GenerateParams {
            kraus: Some(2),
            groups: Some(3),
            ..GenerateParams::default()
        };
        assert!(matches!(
            generate(GenerateKind::Random, &too_many_groups),
            Err(CliError::Usage(_))
        ));
        assert!(matches!(
            generate(GenerateKind::Classical, &GenerateParams::default()),
            Err(CliError::Usage(_))
        ));
        let mismatched = GenerateParams {
            prior: Some(vec![0.2, 0.3, 0.5]),
            kernel: Some(KernelSpec::Bsc(0.1)),
            ..GenerateParams::default()
        };
        assert!(matches!(
            generate(GenerateKind::Classical, &mismatched),
            Err(CliError::Usage(_))
        ));
    }
}
