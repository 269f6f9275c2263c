//! JSON instance format:
//!
//! ```json
//! {"dim": 2,
//!  "ensemble": [{"p": 0.5, "state": [[[1,0],[0,0]],[[0,0],[0,0]]]}, ...],
//!  "measurement": {"groups": [[ [[[re,im],...],...], ... ], ...]}}
//! ```
//!
//! Complex numbers are `[re, im]` pairs; matrices are lists of rows.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::channel::{Ensemble, GroupedMeasurement};
use crate::error::Error;
use crate::linalg::{ComplexMatrix, DensityMatrix, ProbVector};
use num_complex::Complex64;

pub type MatrixJson = Vec<Vec<[f64; 2]>>;

#[derive(Debug, Error)]
pub enum InstanceError {
    #[error("malformed instance JSON: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("{field}: {source}")]
    Invalid {
        field: String,
        #[source]
        source: Error,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleEntry {
    pub p: f64,
    pub state: MatrixJson,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MeasurementJson {
    pub groups: Vec<Vec<MatrixJson>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub dim: usize,
    pub ensemble: Vec<EnsembleEntry>,
    pub measurement: MeasurementJson,
}

pub fn matrix_to_json(m: &ComplexMatrix) -> MatrixJson {
    (0..m.rows())
        .map(|r| m.row(r).iter().map(|z| [z.re, z.im]).collect())
        .collect()
}

pub fn matrix_from_json(m: &MatrixJson) -> crate::Result<ComplexMatrix> {
    let rows: Vec<Vec<Complex64>> = m
        .iter()
        .map(|row| row.iter().map(|&[re, im]| Complex64::new(re, im)).collect())
        .collect();
    ComplexMatrix::from_rows(&rows)
}

fn invalid(field: impl Into<String>) -> impl FnOnce(Error) -> InstanceError {
    let field = field.into();
    move |source| InstanceError::Invalid { field, source }
}

fn check_dim(m: &ComplexMatrix, dim: usize) -> crate::Result<()> {
    if m.rows() != dim || m.cols() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            actual: if m.rows() != dim { m.rows() } else { m.cols() },
        });
    }
    Ok(())
}

impl Instance {
    pub fn from_json(text: &str) -> Result<Self, InstanceError> {
        Ok(serde_json::from_str(text)?)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance serializes")
    }

    pub fn from_channel(eps: &Ensemble, meas: &GroupedMeasurement) -> Self {
        Self {
            dim: eps.dim(),
            ensemble: eps
                .iter()
                .map(|(p, s)| EnsembleEntry {
                    p,
                    state: matrix_to_json(s.matrix()),
                })
                .collect(),
            measurement: MeasurementJson {
                groups: meas
                    .groups()
                    .iter()
                    .map(|g| g.iter().map(matrix_to_json).collect())
                    .collect(),
            },
        }
    }

    /// Validates every type invariant and builds the channel objects.
    pub fn to_channel(&self) -> Result<(Ensemble, GroupedMeasurement), InstanceError> {
        if self.ensemble.is_empty() {
            return Err(InstanceError::Invalid {
                field: "ensemble".into(),
                source: Error::InvalidArgument("ensemble must not be empty".into()),
            });
        }
        let mut states = Vec::with_capacity(self.ensemble.len());
        for (i, entry) in self.ensemble.iter().enumerate() {
            let field = format!("ensemble[{i}].state");
            let m = matrix_from_json(&entry.state).map_err(invalid(field.clone()))?;
            check_dim(&m, self.dim).map_err(invalid(field.clone()))?;
            states.push(DensityMatrix::new(m).map_err(invalid(field))?);
        }
        let probs = ProbVector::new(self.ensemble.iter().map(|e| e.p).collect())
            .map_err(invalid("ensemble[*].p"))?;
        let ensemble = Ensemble::new(probs, states).map_err(invalid("ensemble"))?;

        let mut groups = Vec::with_capacity(self.measurement.groups.len());
        for (j, g) in self.measurement.groups.iter().enumerate() {
            let mut ops = Vec::with_capacity(g.len());
            for (k, op) in g.iter().enumerate() {
                let field = format!("measurement.groups[{j}][{k}]");
                let m = matrix_from_json(op).map_err(invalid(field.clone()))?;
                check_dim(&m, self.dim).map_err(invalid(field))?;
                ops.push(m);
            }
            groups.push(ops);
        }
        let meas = GroupedMeasurement::new(groups).map_err(invalid("measurement"))?;
        Ok((ensemble, meas))
    }
}
