use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::{eigh, ComplexMatrix};
use crate::error::{Error, Result};

/// Tolerance for Hermiticity, unit trace and eigenvalue clamping of states.
pub const STATE_TOL: f64 = 1e-10;
/// Probability vectors must sum to one within this tolerance.
pub const PROB_SUM_TOL: f64 = 1e-10;
/// Entries in `[-PROB_NEG_TOL, 0)` are clamped to zero.
pub const PROB_NEG_TOL: f64 = 1e-12;

/// A positive semidefinite, unit-trace Hermitian matrix.
///
/// The spectrum is computed once at construction; eigenvalues in
/// `[-1e-10, 0)` are stored clamped to zero.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    spectrum: Vec<f64>,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let residual = matrix.hermitian_residual();
        if residual > STATE_TOL {
            return Err(Error::NotHermitian { residual });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STATE_TOL || trace.im.abs() > STATE_TOL {
            return Err(Error::InvalidTrace { trace: trace.re });
        }
        let matrix = matrix.hermitize();
        let mut spectrum = eigh::eigvalsh(&matrix)?;
        let min = spectrum[0];
        if min < -STATE_TOL {
            return Err(Error::NotPositive { min_eigenvalue: min });
        }
        for v in &mut spectrum {
            if *v < 0.0 {
                *v = 0.0;
            }
        }
        Ok(Self { matrix, spectrum })
    }

    /// Hermitizes and divides by the trace before validating.
    ///
    /// Used for states produced by arithmetic (post-measurement states,
    /// mixtures), whose trace is known to be positive.
    pub fn from_unnormalized(matrix: &ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::NotSquare {
                rows: matrix.rows(),
                cols: matrix.cols(),
            });
        }
        let tr = matrix.trace().re;
        if tr.is_nan() || tr <= 0.0 {
            return Err(Error::InvalidTrace { trace: tr });
        }
        Self::new(matrix.hermitize().scale(1.0 / tr))
    }

    /// Pure state |psi><psi| for a (not necessarily normalized) nonzero vector.
    pub fn pure(ket: &[Complex64]) -> Result<Self> {
        Self::from_unnormalized(&ComplexMatrix::outer(ket))
    }

    /// Computational basis state |index><index|.
    pub fn basis(dim: usize, index: usize) -> Result<Self> {
        if index >= dim {
            return Err(Error::IndexOutOfRange { index, len: dim });
        }
        let mut diag = vec![0.0; dim];
        diag[index] = 1.0;
        Self::new(ComplexMatrix::from_real_diagonal(&diag))
    }

    pub fn maximally_mixed(dim: usize) -> Result<Self> {
        Self::new(ComplexMatrix::identity(dim).scale(1.0 / dim as f64))
    }

    /// Diagonal state with the given probabilities.
    pub fn diagonal(probs: &ProbVector) -> Result<Self> {
        Self::new(ComplexMatrix::from_real_diagonal(probs.as_slice()))
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    /// Clamped eigenvalues in ascending order.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.spectrum
    }

    /// Number of eigenvalues above `tol`.
    pub fn rank(&self, tol: f64) -> usize {
        self.spectrum.iter().filter(|&&v| v > tol).count()
    }

    /// `U rho U^dag`.
    pub fn conjugate(&self, unitary: &ComplexMatrix) -> Result<Self> {
        if unitary.rows() != self.dim() || unitary.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                actual: unitary.rows(),
            });
        }
        Self::from_unnormalized(&self.matrix.sandwich(unitary))
    }

    pub fn tensor(&self, other: &DensityMatrix) -> Result<Self> {
        Self::from_unnormalized(&tensor(&self.matrix, &other.matrix))
    }
}

/// Which half of a bipartite system to keep.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    A,
    B,
}

/// Kronecker product `a ⊗ b`.
pub fn tensor(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    a.kron(b)
}

/// Reduced state of a bipartite `dim_a x dim_b` system.
pub fn partial_trace(
    rho_ab: &DensityMatrix,
    dim_a: usize,
    dim_b: usize,
    keep: Subsystem,
) -> Result<DensityMatrix> {
    if dim_a * dim_b != rho_ab.dim() {
        return Err(Error::DimensionMismatch {
            expected: dim_a * dim_b,
            actual: rho_ab.dim(),
        });
    }
    let kept = match keep {
        Subsystem::A => [0],
        Subsystem::B => [1],
    };
    let reduced = rho_ab.matrix().partial_trace(&[dim_a, dim_b], &kept)?;
    DensityMatrix::from_unnormalized(&reduced)
}

/// Von Neumann entropy in bits.
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_bits(rho.eigenvalues())
}

/// Shannon entropy in bits.
pub fn shannon_entropy(p: &ProbVector) -> f64 {
    entropy_bits(p.as_slice())
}

/// `-sum x log2 x` over strictly positive entries.
pub(crate) fn entropy_bits(values: &[f64]) -> f64 {
    let h: f64 = values
        .iter()
        .filter(|&&x| x > 0.0)
        .map(|&x| -x * x.log2())
        .sum();
    h.max(0.0)
}

/// Non-negative reals summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ProbVector(Vec<f64>);

impl ProbVector {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        if probs.is_empty() {
            return Err(Error::InvalidProbabilities("empty vector".into()));
        }
        let mut probs = probs;
        for (i, p) in probs.iter_mut().enumerate() {
            if !p.is_finite() {
                return Err(Error::InvalidProbabilities(format!("entry {i} is not finite")));
            }
            if *p < -PROB_NEG_TOL {
                return Err(Error::InvalidProbabilities(format!("entry {i} is negative ({p})")));
            }
            if *p < 0.0 {
                *p = 0.0;
            }
        }
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return Err(Error::InvalidProbabilities(format!("sum is {sum}, expected 1")));
        }
        Ok(Self(probs))
    }

    /// Scales non-negative weights to unit sum.
    pub fn normalized(weights: Vec<f64>) -> Result<Self> {
        let sum: f64 = weights.iter().sum();
        if sum.is_nan() || sum <= 0.0 || !sum.is_finite() {
            return Err(Error::InvalidProbabilities(format!("weights sum to {sum}")));
        }
        Self::new(weights.into_iter().map(|w| w / sum).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }
}

impl TryFrom<Vec<f64>> for ProbVector {
    type Error = Error;

    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ProbVector> for Vec<f64> {
    fn from(p: ProbVector) -> Self {
        p.0
    }
}

impl std::ops::Index<usize> for ProbVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pure_state_has_zero_entropy() {
        let psi = DensityMatrix::pure(&[c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        assert!(von_neumann_entropy(&psi).abs() < 1e-12);
    }

    #[test]
    fn maximally_mixed_qubit_is_one_bit() {
        let rho = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((von_neumann_entropy(&rho) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn entropy_of_known_spectrum() {
        // oracle: direct scalar evaluation of -sum l log2 l
        let l = [0.853553_f64, 0.146447];
        let oracle: f64 = l.iter().map(|x| -x * x.log2()).sum();
        assert!((oracle - 0.60090).abs() < 1e-4);
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&l)).unwrap();
        assert!((von_neumann_entropy(&rho) - oracle).abs() < 1e-12);
    }

    #[test]
    fn shannon_examples() {
        let h = |v: Vec<f64>| shannon_entropy(&ProbVector::new(v).unwrap());
        assert_eq!(h(vec![1.0, 0.0]), 0.0);
        assert_eq!(h(vec![0.5, 0.5]), 1.0);
        assert_eq!(h(vec![0.25; 4]), 2.0);
    }

    #[test]
    fn prob_vector_validation() {
        assert!(ProbVector::new(vec![1.1, -0.1]).is_err());
        assert!(ProbVector::new(vec![0.5, 0.4]).is_err());
        assert!(ProbVector::new(vec![f64::NAN, 1.0]).is_err());
        assert!(ProbVector::new(vec![]).is_err());
        let clamped = ProbVector::new(vec![1.0 + 1e-13, -1e-13]).unwrap();
        assert_eq!(clamped[1], 0.0);
    }

    #[test]
    fn density_validation_errors() {
        let not_unit = ComplexMatrix::from_real_diagonal(&[0.5, 0.6]);
        assert!(matches!(DensityMatrix::new(not_unit), Err(Error::InvalidTrace { .. })));
        let negative = ComplexMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(negative), Err(Error::NotPositive { .. })));
        let skew = ComplexMatrix::from_rows(&[vec![c(0.5, 0.0), c(0.1, 0.0)], vec![c(0.0, 0.0), c(0.5, 0.0)]])
            .unwrap();
        assert!(matches!(DensityMatrix::new(skew), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn tiny_negative_eigenvalues_are_clamped() {
        let rho = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[1.0 + 5e-11, -5e-11])).unwrap();
        assert_eq!(rho.eigenvalues()[0], 0.0);
        assert!(von_neumann_entropy(&rho).is_finite());
    }

    #[test]
    fn partial_trace_of_product_and_bell_states() {
        let a = DensityMatrix::new(ComplexMatrix::from_real_diagonal(&[0.3, 0.7])).unwrap();
        let b = DensityMatrix::maximally_mixed(3).unwrap();
        let ab = a.tensor(&b).unwrap();
        let back = partial_trace(&ab, 2, 3, Subsystem::A).unwrap();
        assert!(back.matrix().max_abs_diff(a.matrix()) < 1e-10);
        let back_b = partial_trace(&ab, 2, 3, Subsystem::B).unwrap();
        assert!(back_b.matrix().max_abs_diff(b.matrix()) < 1e-10);
        assert!(matches!(
            partial_trace(&ab, 2, 2, Subsystem::A),
            Err(Error::DimensionMismatch { .. })
        ));

        let s = std::f64::consts::FRAC_1_SQRT_2;
        let bell = DensityMatrix::pure(&[c(s, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(s, 0.0)]).unwrap();
        let reduced = partial_trace(&bell, 2, 2, Subsystem::A).unwrap();
        let half = DensityMatrix::maximally_mixed(2).unwrap();
        assert!(reduced.matrix().max_abs_diff(half.matrix()) < 1e-12);
    }
}
