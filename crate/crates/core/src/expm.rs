//! Matrix exponential by scaling and squaring of a truncated Taylor series.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

const MAX_TERMS: usize = 40;

/// `exp(A)` for a square complex matrix.
///
/// `A` is scaled by `2^-s` until its 1-norm is at most 1/2, the series is
/// summed until terms stop contributing at double precision, and the result
/// is squared `s` times.
pub fn expm(a: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "exponential of a {}x{} matrix",
            a.rows(),
            a.cols()
        )));
    }
    let n = a.rows();
    let norm = a.norm_one();
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scaled = a.scale_real(0.5f64.powi(squarings));

    let mut result = CMatrix::identity(n);
    let mut term = CMatrix::identity(n);
    for k in 1..=MAX_TERMS {
        term = term.matmul(&scaled)?.scale_real(1.0 / k as f64);
        result.axpy(Complex64::new(1.0, 0.0), &term)?;
        if term.max_abs() < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        result = result.matmul(&result)?;
    }
    Ok(result)
}
