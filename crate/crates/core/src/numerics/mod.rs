//! Small complex linear algebra, semi-infinite quadrature and bisection.

mod matrix;
mod quadrature;
mod root;

pub use matrix::{
    dot_conj, norm_sqr, solve_hermitian_posdef, solve_hermitian_posdef_with_tol, ComplexMatrix,
    ComplexVector, DEFAULT_PIVOT_TOL,
};
pub use quadrature::{integrate, integrate_semi_infinite, DEFAULT_REL_TOL, MAX_DEPTH};
pub use root::{find_root_monotone, DEFAULT_ROOT_TOL};

/// Neumaier-compensated summation. The result depends only on the order of
/// `values`, never on how they were produced.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0_f64;
    let mut carry = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            carry += (sum - t) + v;
        } else {
            carry += (v - t) + sum;
        }
        sum = t;
    }
    sum + carry
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_lost_bits() {
        let v = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(compensated_sum(v), 2.0);
        assert_eq!(compensated_sum(std::iter::empty()), 0.0);
    }
}
