//! Seeded sampling of unitaries, states and Kraus sets.
//!
//! Generators are always passed in; nothing here touches global state.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use super::{eigh, ComplexMatrix, DensityMatrix};
use crate::error::{Error, Result};

/// Smallest eigenvalue accepted when forming `S^{-1/2}`.
pub const SINGULAR_TOL: f64 = 1e-12;
const MAX_KRAUS_ATTEMPTS: usize = 5;

/// Standard complex Gaussian: real and imaginary parts each `N(0, 1/2)`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    Complex64::new(re, im) * std::f64::consts::FRAC_1_SQRT_2
}

/// Ginibre matrix with i.i.d. standard complex Gaussian entries.
pub fn ginibre<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Haar-distributed unitary.
///
/// Gram-Schmidt on the columns of a Ginibre matrix yields the QR factor with
/// a positive real diagonal in `R`, which is the phase-corrected factorization
/// whose `Q` is exactly Haar. Each column is orthogonalized twice for accuracy.
pub fn haar_unitary<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<ComplexMatrix> {
    if d == 0 {
        return Err(Error::InvalidArgument("unitary dimension must be positive".into()));
    }
    let g = ginibre(d, d, rng);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(d);
    for k in 0..d {
        let mut v = g.column(k);
        for _ in 0..2 {
            for q in &cols {
                let proj: Complex64 = q.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                for (vi, qi) in v.iter_mut().zip(q) {
                    *vi -= proj * qi;
                }
            }
        }
        let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-300 {
            return Err(Error::Singular { min_eigenvalue: norm });
        }
        for vi in &mut v {
            *vi /= norm;
        }
        cols.push(v);
    }
    Ok(ComplexMatrix::from_fn(d, d, |r, c| cols[c][r]))
}

/// Random mixed state `G G^dag / Tr[G G^dag]` with `G` Ginibre.
pub fn random_density<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::InvalidArgument("state dimension must be positive".into()));
    }
    let g = ginibre(d, d, rng);
    DensityMatrix::from_unnormalized(&(&g * &g.adjoint()))
}

/// Random pure state drawn from the unitarily invariant measure.
pub fn random_pure<R: Rng + ?Sized>(d: usize, rng: &mut R) -> Result<DensityMatrix> {
    if d == 0 {
        return Err(Error::InvalidArgument("state dimension must be positive".into()));
    }
    let ket: Vec<Complex64> = (0..d).map(|_| complex_gaussian(rng)).collect();
    DensityMatrix::pure(&ket)
}

/// `m` Kraus operators `A_i = G_i S^{-1/2}` with `S = sum G_i^dag G_i`.
pub fn random_kraus_set<R: Rng + ?Sized>(
    d: usize,
    m: usize,
    rng: &mut R,
) -> Result<Vec<ComplexMatrix>> {
    if d == 0 || m == 0 {
        return Err(Error::InvalidArgument(format!(
            "need d >= 1 and m >= 1, got d={d}, m={m}"
        )));
    }
    let mut last_err = None;
    for _ in 0..MAX_KRAUS_ATTEMPTS {
        let gs: Vec<ComplexMatrix> = (0..m).map(|_| ginibre(d, d, rng)).collect();
        match whiten(&gs) {
            Ok(ops) => return Ok(ops),
            Err(e @ Error::Singular { .. }) => last_err = Some(e),
            Err(e) => return Err(e),
        }
    }
    Err(last_err.expect("at least one attempt"))
}

/// Right-multiplies every operator by `S^{-1/2}`, `S = sum A^dag A`, making the set complete.
pub fn whiten(ops: &[ComplexMatrix]) -> Result<Vec<ComplexMatrix>> {
    let first = ops
        .first()
        .ok_or_else(|| Error::InvalidArgument("empty operator list".into()))?;
    let d = first.cols();
    let mut s = ComplexMatrix::zeros(d, d);
    for a in ops {
        if a.cols() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                actual: a.cols(),
            });
        }
        s = &s + &(&a.adjoint() * a);
    }
    let s_inv_sqrt = inverse_sqrt(&s)?;
    Ok(ops.iter().map(|a| a * &s_inv_sqrt).collect())
}

/// `S^{-1/2}` for a positive definite Hermitian `S`.
pub fn inverse_sqrt(s: &ComplexMatrix) -> Result<ComplexMatrix> {
    let e = eigh::eigh(s)?;
    let min = e.values[0];
    if min < SINGULAR_TOL {
        return Err(Error::Singular { min_eigenvalue: min });
    }
    Ok(e.map_spectrum(|v| 1.0 / v.sqrt()))
}
