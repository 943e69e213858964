//! Dense complex matrices sized for antenna arrays (a handful of rows and
//! columns), plus a Cholesky solver for the Hermitian positive-definite
//! covariance systems that optimum combining needs.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

/// A column vector of complex scalars.
pub type ComplexVector = Vec<Complex64>;

/// Default relative pivot tolerance for [`solve_hermitian_posdef`].
pub const DEFAULT_PIVOT_TOL: f64 = 1e-12;

/// Row-major dense complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::InvalidDimensions(format!(
                "matrix must be at least 1x1, got {rows}x{cols}"
            )));
        }
        if data.len() != rows * cols {
            return Err(Error::InvalidDimensions(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                data.len()
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Domain("matrix entries must be finite".into()));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from a slice of equally long rows.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::InvalidDimensions("ragged rows".into()));
        }
        Self::from_vec(rows.len(), cols, rows.concat())
    }

    /// Builds a matrix from real row-major entries.
    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Result<Self> {
        Self::from_vec(
            rows,
            cols,
            data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        assert!(rows > 0 && cols > 0, "matrix must be at least 1x1");
        Self {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    /// Row-major view of the entries.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> ComplexVector {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    /// Conjugate transpose.
    pub fn hermitian(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn matmul(&self, rhs: &Self) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::DimensionMismatch {
                op: "matmul",
                left: self.shape(),
                right: rhs.shape(),
            });
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            let lhs_row = self.row(i);
            for (k, &a) in lhs_row.iter().enumerate() {
                let rhs_row = rhs.row(k);
                let out_row = &mut out.data[i * rhs.cols..(i + 1) * rhs.cols];
                for (o, &b) in out_row.iter_mut().zip(rhs_row) {
                    *o += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn mul_vec(&self, x: &[Complex64]) -> Result<ComplexVector> {
        if self.cols != x.len() {
            return Err(Error::DimensionMismatch {
                op: "mul_vec",
                left: self.shape(),
                right: (x.len(), 1),
            });
        }
        Ok((0..self.rows)
            .map(|i| self.row(i).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect())
    }

    pub fn scale(&self, c: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * c).collect(),
        }
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        assert_eq!(self.shape(), other.shape());
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;

    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        assert!(i < self.rows && j < self.cols, "index out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

/// Inner product `x^H y`.
pub fn dot_conj(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    debug_assert_eq!(x.len(), y.len());
    x.iter().zip(y).map(|(a, b)| a.conj() * b).sum()
}

/// Squared Euclidean norm.
pub fn norm_sqr(x: &[Complex64]) -> f64 {
    x.iter().map(Complex64::norm_sqr).sum()
}

/// Solves `R x = b` for Hermitian positive-definite `R` with the default
/// pivot tolerance.
pub fn solve_hermitian_posdef(r: &ComplexMatrix, b: &[Complex64]) -> Result<ComplexVector> {
    solve_hermitian_posdef_with_tol(r, b, DEFAULT_PIVOT_TOL)
}

/// Cholesky factor-and-solve. A pivot at or below `pivot_tol` times the
/// largest diagonal magnitude is reported as [`Error::NotPositiveDefinite`].
/// Only the lower triangle of `r` is read.
pub fn solve_hermitian_posdef_with_tol(
    r: &ComplexMatrix,
    b: &[Complex64],
    pivot_tol: f64,
) -> Result<ComplexVector> {
    let n = r.rows();
    if r.cols() != n || b.len() != n {
        return Err(Error::DimensionMismatch {
            op: "solve_hermitian_posdef",
            left: r.shape(),
            right: (b.len(), 1),
        });
    }
    let scale = (0..n).map(|i| r[(i, i)].re.abs()).fold(0.0, f64::max);
    let threshold = pivot_tol * scale;

    // Lower-triangular factor, row-major.
    let mut l = vec![Complex64::new(0.0, 0.0); n * n];
    for j in 0..n {
        let mut d = r[(j, j)].re;
        for k in 0..j {
            d -= l[j * n + k].norm_sqr();
        }
        if !(d > threshold) {
            return Err(Error::NotPositiveDefinite { pivot: d, index: j });
        }
        let d = d.sqrt();
        l[j * n + j] = Complex64::new(d, 0.0);
        for i in j + 1..n {
            let mut s = r[(i, j)];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k].conj();
            }
            l[i * n + j] = s / d;
        }
    }

    // L y = b
    let mut y = b.to_vec();
    for i in 0..n {
        let mut s = y[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i].re;
    }
    // L^H x = y
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i].conj() * y[k];
        }
        y[i] = s / l[i * n + i].re;
    }
    Ok(y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn random_matrix(rng: &mut ChaCha8Rng, rows: usize, cols: usize) -> ComplexMatrix {
        let data = (0..rows * cols)
            .map(|_| c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
            .collect();
        ComplexMatrix::from_vec(rows, cols, data).unwrap()
    }

    #[test]
    fn hermitian_of_identity_and_imaginary_unit() {
        assert_eq!(
            ComplexMatrix::identity(2).hermitian(),
            ComplexMatrix::identity(2)
        );
        let m = ComplexMatrix::from_vec(1, 1, vec![c(0.0, 1.0)]).unwrap();
        assert_eq!(m.hermitian()[(0, 0)], c(0.0, -1.0));
    }

    #[test]
    fn hermitian_is_an_involution() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = random_matrix(&mut rng, 3, 2);
        let h = a.hermitian();
        assert_eq!(h.shape(), (2, 3));
        assert_eq!(h.hermitian(), a);
    }

    #[test]
    fn matmul_small_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = random_matrix(&mut rng, 3, 3);
        assert!(
            a.matmul(&ComplexMatrix::identity(3))
                .unwrap()
                .max_abs_diff(&a)
                < 1e-15
        );

        let row = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0), c(0.0, 1.0)]]).unwrap();
        let col = ComplexMatrix::from_rows(&[vec![c(1.0, 0.0)], vec![c(0.0, 1.0)]]).unwrap();
        let p = row.matmul(&col).unwrap();
        assert_eq!(p.shape(), (1, 1));
        assert!(p[(0, 0)].norm() < 1e-15);
    }

    #[test]
    fn matmul_matches_triple_loop() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random_matrix(&mut rng, 2, 3);
        let b = random_matrix(&mut rng, 3, 2);
        let p = a.matmul(&b).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let mut s = c(0.0, 0.0);
                for k in 0..3 {
                    s += a[(i, k)] * b[(k, j)];
                }
                assert!((p[(i, j)] - s).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        let err = a.matmul(&ComplexMatrix::zeros(2, 3)).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch { .. }));
    }

    #[test]
    fn constructor_rejects_bad_input() {
        assert!(ComplexMatrix::from_vec(0, 1, vec![]).is_err());
        assert!(ComplexMatrix::from_vec(2, 2, vec![c(1.0, 0.0); 3]).is_err());
        assert!(ComplexMatrix::from_vec(1, 1, vec![c(f64::NAN, 0.0)]).is_err());
    }

    #[test]
    fn solve_identity_and_diagonal() {
        let x = solve_hermitian_posdef(&ComplexMatrix::identity(2), &[c(1.0, 0.0), c(2.0, 0.0)])
            .unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(2.0, 0.0)).norm() < 1e-15);

        let d = ComplexMatrix::from_real(2, 2, &[2.0, 0.0, 0.0, 4.0]).unwrap();
        let x = solve_hermitian_posdef(&d, &[c(2.0, 0.0), c(4.0, 0.0)]).unwrap();
        assert!((x[0] - c(1.0, 0.0)).norm() < 1e-15);
        assert!((x[1] - c(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn solve_rejects_indefinite_and_singular() {
        let m = ComplexMatrix::from_real(2, 2, &[1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(
            solve_hermitian_posdef(&m, &[c(1.0, 0.0); 2]),
            Err(Error::NotPositiveDefinite { index: 1, .. })
        ));
        let s = ComplexMatrix::from_real(2, 2, &[1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(solve_hermitian_posdef(&s, &[c(1.0, 0.0); 2]).is_err());
    }

    #[test]
    fn solve_residual_on_covariance_structure() {
        // R = H H^H + I, the shape optimum combining produces.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        for _ in 0..1000 {
            let h = random_matrix(&mut rng, 2, 4);
            let mut r = h.matmul(&h.hermitian()).unwrap();
            for i in 0..2 {
                r[(i, i)] += c(1.0, 0.0);
            }
            let b: Vec<_> = (0..2).map(|_| c(rng.random(), rng.random())).collect();
            let x = solve_hermitian_posdef(&r, &b).unwrap();
            let rx = r.mul_vec(&x).unwrap();
            let resid: f64 = norm_sqr(&rx.iter().zip(&b).map(|(p, q)| p - q).collect::<Vec<_>>());
            assert!(resid.sqrt() <= 1e-10 * norm_sqr(&b).sqrt());
        }
    }
}
