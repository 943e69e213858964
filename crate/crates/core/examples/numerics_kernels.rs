//! The small numerical kernels underneath: a Hermitian solve, adaptive
//! semi-infinite quadrature and monotone bisection.
//!
//! cargo run --release --example numerics_kernels

use num_complex::Complex64;
use osdma::numerics::{
    find_root_monotone, integrate_semi_infinite, solve_hermitian_posdef, ComplexMatrix,
};

fn main() -> osdma::Result<()> {
    let c = |re, im| Complex64::new(re, im);
    let r = ComplexMatrix::from_rows(&[
        vec![c(4.0, 0.0), c(1.0, -1.0)],
        vec![c(1.0, 1.0), c(3.0, 0.0)],
    ])?;
    let b = [c(1.0, 0.0), c(0.0, 2.0)];
    let x = solve_hermitian_posdef(&r, &b)?;
    println!(
        "R x = b  ->  x = [{:.4}, {:.4}], residual {:.1e}",
        x[0],
        x[1],
        {
            let rx = r.mul_vec(&x)?;
            rx.iter()
                .zip(&b)
                .map(|(p, q)| (p - q).norm())
                .fold(0.0, f64::max)
        }
    );

    let i = integrate_semi_infinite(|t| 1.0 / (1.0 + t * t), 1e-10)?;
    println!(
        "∫_0^∞ dt / (1 + t²) = {i:.12} (π/2 = {:.12})",
        std::f64::consts::FRAC_PI_2
    );

    let root = find_root_monotone(|x| x.exp() - 10.0, 0.0, 5.0, 1e-14)?;
    println!("e^x = 10 at x = {root:.12} (ln 10 = {:.12})", 10f64.ln());
    Ok(())
}
