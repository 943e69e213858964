//! Random orthonormal beamforming matrices.
//!
//! A beam matrix is drawn by orthonormalizing the columns of an i.i.d.
//! complex Gaussian matrix with Gram-Schmidt. Gram-Schmidt yields the `Q`
//! of a QR factorization whose `R` has a real positive diagonal, which is
//! exactly the phase convention under which `Q` is Haar distributed.

use num_complex::Complex64;
use rand::Rng;

use crate::channel::{complex_gaussian, RngStream};
use crate::error::{Error, Result};
use crate::numerics::{dot_conj, norm_sqr, ComplexMatrix};

const MAX_ATTEMPTS: usize = 3;
const RANK_TOL: f64 = 1e-10;

/// An `M x M` unitary matrix whose columns are the beams, together with
/// the power `E|s_m|²` carried on each beam.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamMatrix {
    a: ComplexMatrix,
    per_beam_power: f64,
}

impl BeamMatrix {
    /// Wraps an existing matrix after checking it is unitary to 1e-10.
    pub fn new(a: ComplexMatrix, per_beam_power: f64) -> Result<Self> {
        check_power(per_beam_power)?;
        if a.rows() != a.cols() {
            return Err(Error::InvalidDimensions(format!(
                "beam matrix must be square, got {}x{}",
                a.rows(),
                a.cols()
            )));
        }
        let beams = Self { a, per_beam_power };
        let dev = beams.unitarity_error();
        if dev > 1e-10 {
            return Err(Error::Domain(format!(
                "beam matrix is not unitary (max |A^H A - I| = {dev:e})"
            )));
        }
        Ok(beams)
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.a
    }

    /// Number of beams (and transmit antennas).
    pub fn m(&self) -> usize {
        self.a.cols()
    }

    pub fn per_beam_power(&self) -> f64 {
        self.per_beam_power
    }

    pub fn total_power(&self) -> f64 {
        self.per_beam_power * self.m() as f64
    }

    /// Column `i`.
    pub fn beam(&self, i: usize) -> Vec<Complex64> {
        self.a.column(i)
    }

    /// Largest entry of `|A^H A - I|`.
    pub fn unitarity_error(&self) -> f64 {
        let gram = self
            .a
            .hermitian()
            .matmul(&self.a)
            .expect("square matrix is conformable with its adjoint");
        gram.max_abs_diff(&ComplexMatrix::identity(self.m()))
    }
}

fn check_power(p: f64) -> Result<()> {
    if p > 0.0 && p.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "per-beam power must be positive, got {p}"
        )))
    }
}

/// `A = I_M`, useful as a deterministic fixture.
pub fn identity_beams(m: usize, per_beam_power: f64) -> Result<BeamMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimensions("M must be at least 1".into()));
    }
    check_power(per_beam_power)?;
    Ok(BeamMatrix {
        a: ComplexMatrix::identity(m),
        per_beam_power,
    })
}

/// Haar-distributed beams drawn from the start of `stream`.
pub fn random_orthonormal_beams(
    m: usize,
    stream: RngStream,
    per_beam_power: f64,
) -> Result<BeamMatrix> {
    random_orthonormal_beams_from(m, &mut stream.rng(), per_beam_power)
}

/// Haar-distributed beams drawn from an existing generator.
pub fn random_orthonormal_beams_from<R: Rng + ?Sized>(
    m: usize,
    rng: &mut R,
    per_beam_power: f64,
) -> Result<BeamMatrix> {
    if m == 0 {
        return Err(Error::InvalidDimensions("M must be at least 1".into()));
    }
    check_power(per_beam_power)?;
    for _ in 0..MAX_ATTEMPTS {
        let cols: Vec<Vec<Complex64>> = (0..m)
            .map(|_| (0..m).map(|_| complex_gaussian(rng)).collect())
            .collect();
        if let Some(q) = gram_schmidt(cols) {
            let mut a = ComplexMatrix::zeros(m, m);
            for (j, col) in q.iter().enumerate() {
                for (i, &z) in col.iter().enumerate() {
                    a[(i, j)] = z;
                }
            }
            return Ok(BeamMatrix { a, per_beam_power });
        }
    }
    Err(Error::RankDeficientBeams {
        attempts: MAX_ATTEMPTS,
    })
}

// Modified Gram-Schmidt with one re-orthogonalization pass. Returns None
// when a column is numerically dependent on the previous ones.
fn gram_schmidt(mut cols: Vec<Vec<Complex64>>) -> Option<Vec<Vec<Complex64>>> {
    for j in 0..cols.len() {
        let original = norm_sqr(&cols[j]).sqrt();
        for _pass in 0..2 {
            for k in 0..j {
                let (done, rest) = cols.split_at_mut(j);
                let proj = dot_conj(&done[k], &rest[0]);
                for (x, q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * q;
                }
            }
        }
        let norm = norm_sqr(&cols[j]).sqrt();
        if !(norm > RANK_TOL * original) {
            return None;
        }
        for x in cols[j].iter_mut() {
            *x /= norm;
        }
    }
    Some(cols)
}
