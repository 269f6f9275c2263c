use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use qbound_core::info::GAP_TOL;
use qbound_core::majorization::UC_SAMPLES;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const MIN_DIM: usize = 2;
pub const MAX_DIM: usize = 8;
/// Symmetric classical measurements have up to `d!` operators.
pub const MAX_SCHUR_CLASSICAL_DIM: usize = 6;
/// Dimensions at which the covariant-measurement tolerances were calibrated.
pub const UC_CALIBRATED_DIMS: [usize; 2] = [2, 3];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    Bounds,
    Concavity,
    ClassicalEquality,
    SchurClassical,
    SchurUc,
    Dilation,
    All,
}

impl Suite {
    pub const CONCRETE: [Suite; 6] = [
        Suite::Bounds,
        Suite::Concavity,
        Suite::ClassicalEquality,
        Suite::SchurClassical,
        Suite::SchurUc,
        Suite::Dilation,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Bounds => "bounds",
            Suite::Concavity => "concavity",
            Suite::ClassicalEquality => "classical-equality",
            Suite::SchurClassical => "schur-classical",
            Suite::SchurUc => "schur-uc",
            Suite::Dilation => "dilation",
            Suite::All => "all",
        }
    }

    /// Concrete suites this one stands for.
    pub fn expand(self) -> Vec<Suite> {
        match self {
            Suite::All => Suite::CONCRETE.to_vec(),
            s => vec![s],
        }
    }

    /// Stream tag used to keep random streams of different suites apart.
    pub(crate) fn tag(self) -> u64 {
        match self {
            Suite::Bounds => 1,
            Suite::Concavity => 2,
            Suite::ClassicalEquality => 3,
            Suite::SchurClassical => 4,
            Suite::SchurUc => 5,
            Suite::Dilation => 6,
            Suite::All => 0,
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Inclusive integer range written as `3` or `2-4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Span {
    pub lo: usize,
    pub hi: usize,
}

impl Span {
    pub const fn new(lo: usize, hi: usize) -> Self {
        Self { lo, hi }
    }
}

impl FromStr for Span {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let parse = |t: &str| {
            t.trim()
                .parse::<usize>()
                .map_err(|_| format!("expected an integer or a range like 2-4, got {s:?}"))
        };
        let span = match s.split_once('-') {
            Some((a, b)) => Span::new(parse(a)?, parse(b)?),
            None => {
                let n = parse(s)?;
                Span::new(n, n)
            }
        };
        if span.lo > span.hi {
            return Err(format!("empty range {s:?}"));
        }
        Ok(span)
    }
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.lo == self.hi {
            write!(f, "{}", self.lo)
        } else {
            write!(f, "{}-{}", self.lo, self.hi)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    pub suite: Suite,
    pub dims: Vec<usize>,
    pub n_instances: usize,
    pub n_states: Span,
    pub n_kraus: Span,
    pub n_groups: Span,
    pub seed: u64,
    /// Haar samples per covariant measurement.
    pub samples: usize,
    /// Overrides every exact-check tolerance.
    pub tol: Option<f64>,
    /// Overrides the frozen covariant-measurement tolerances.
    pub uc_tol: Option<f64>,
    pub out: Option<PathBuf>,
    pub format: OutputFormat,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            suite: Suite::All,
            dims: vec![2, 3, 4],
            n_instances: 200,
            n_states: Span::new(2, 4),
            n_kraus: Span::new(2, 6),
            n_groups: Span::new(1, 6),
            seed: 0,
            samples: UC_SAMPLES,
            tol: None,
            uc_tol: None,
            out: None,
            format: OutputFormat::Csv,
        }
    }
}

impl SuiteConfig {
    pub fn new(suite: Suite) -> Self {
        Self {
            suite,
            ..Self::default()
        }
    }

    pub fn gap_tol(&self) -> f64 {
        self.tol.unwrap_or(GAP_TOL)
    }

    /// Dimensions the covariant suite runs at.
    pub fn uc_dims(&self) -> Vec<usize> {
        if self.uc_tol.is_some() {
            self.dims.clone()
        } else {
            self.dims
                .iter()
                .copied()
                .filter(|d| UC_CALIBRATED_DIMS.contains(d))
                .collect()
        }
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |msg: String| Err(CliError::Usage(msg));
        if self.dims.is_empty() {
            return bad("at least one dimension is required".into());
        }
        if let Some(&d) = self.dims.iter().find(|&&d| !(MIN_DIM..=MAX_DIM).contains(&d)) {
            return bad(format!("dimension {d} outside {MIN_DIM}..={MAX_DIM}"));
        }
        if self.n_instances == 0 {
            return bad("--instances must be at least 1".into());
        }
        for (name, span) in [("states", self.n_states), ("kraus", self.n_kraus), ("groups", self.n_groups)] {
            if span.lo == 0 || span.lo > span.hi {
                return bad(format!("--{name} range {span} must be non-empty and start at 1 or more"));
            }
        }
        for (name, t) in [("tol", self.tol), ("uc-tol", self.uc_tol)] {
            if let Some(t) = t {
                if !t.is_finite() || t < 0.0 {
                    return bad(format!("--{name} must be a finite non-negative number, got {t}"));
                }
            }
        }
        let suites = self.suite.expand();
        if suites.contains(&Suite::SchurClassical) {
            if let Some(&d) = self.dims.iter().find(|&&d| d > MAX_SCHUR_CLASSICAL_DIM) {
                return bad(format!(
                    "schur-classical needs d <= {MAX_SCHUR_CLASSICAL_DIM} (d! operators), got {d}"
                ));
            }
        }
        if suites.contains(&Suite::SchurUc) {
            let dims = self.uc_dims();
            if dims.is_empty() {
                return bad(format!(
                    "schur-uc has calibrated tolerances only at d in {UC_CALIBRATED_DIMS:?}; pass --uc-tol to run other dimensions"
                ));
            }
            if let Some(&d) = dims.iter().find(|&&d| self.samples < d * d) {
                return bad(format!("--samples must be at least d^2 = {} for d = {d}", d * d));
            }
        }
        if suites.contains(&Suite::Dilation) && self.n_kraus.hi < 2 {
            return bad("dilation needs at least 2 Kraus operators for an inefficient grouping".into());
        }
        Ok(())
    }
}
