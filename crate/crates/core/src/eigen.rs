//! Cyclic Jacobi diagonalization of dense Hermitian matrices.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C0};

const MAX_SWEEPS: usize = 100;

/// Eigenpairs sorted by ascending eigenvalue; `vectors` holds them as columns.
#[derive(Clone, Debug)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        (0..self.vectors.rows())
            .map(|i| self.vectors[(i, k)])
            .collect()
    }
}

pub fn eigh(m: &CMatrix) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(Error::Dimension(format!(
            "eigendecomposition of a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    let residual = m.hermiticity_residual();
    if residual > 1e-8 {
        return Err(Error::NotHermitian(residual));
    }
    let n = m.rows();
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);
    let scale = a.max_abs().max(f64::MIN_POSITIVE);

    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
            .map(|(i, j)| a[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale * n as f64 {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                rotate(&mut a, &mut v, p, q);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (k, &src) in order.iter().enumerate() {
        for i in 0..n {
            vectors[(i, k)] = v[(i, src)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Annihilates `a[p][q]` with the unitary `G = diag(1, e^{-i phi}) * R(c, s)`
/// acting in the (p, q) plane, updating `a <- G† a G` and `v <- v G`.
fn rotate(a: &mut CMatrix, v: &mut CMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let phase = apq / r;
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let theta = (aqq - app) / (2.0 * r);
    let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
    let t = if theta == 0.0 { 1.0 } else { t };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let e = phase.conj();
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -e * s;
    let g_qq = e * c;

    let n = a.rows();
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = C0;
    a[(q, p)] = C0;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
}

/// `|| M v - lambda v ||_2`
pub fn eigen_residual(m: &CMatrix, lambda: f64, vec: &[Complex64]) -> Result<f64> {
    let mv = m.matvec(vec)?;
    Ok(mv
        .iter()
        .zip(vec)
        .map(|(a, b)| (a - b * lambda).norm_sqr())
        .sum::<f64>()
        .sqrt())
}

/// Reconstructs `V diag(f(lambda)) V†`.
pub fn spectral_map(e: &HermitianEigen, f: impl Fn(f64) -> Complex64) -> CMatrix {
    let n = e.values.len();
    let mut out = CMatrix::zeros(n, n);
    for (k, &lam) in e.values.iter().enumerate() {
        let w = f(lam);
        for i in 0..n {
            let vik = e.vectors[(i, k)] * w;
            if vik == C0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += vik * e.vectors[(j, k)].conj();
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::CI;

    #[test]
    fn diagonal_input() {
        let m = CMatrix::from_real_rows(&[[3.0, 0.0], [0.0, -1.0]]);
        let e = eigh(&m).unwrap();
        assert_eq!(e.values, vec![-1.0, 3.0]);
    }

    #[test]
    fn pauli_y_spectrum() {
        let y = CMatrix::from_rows(&[[C0, -CI], [CI, C0]]);
        let e = eigh(&y).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
        for k in 0..2 {
            let r = eigen_residual(&y, e.values[k], &e.vector(k)).unwrap();
            assert!(r < 1e-13);
        }
    }

    #[test]
    fn reconstruction_and_unitarity() {
        let m = CMatrix::from_rows(&[
            [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.5, 0.3),
                Complex64::new(-0.2, 0.0),
            ],
            [
                Complex64::new(0.5, -0.3),
                Complex64::new(-2.0, 0.0),
                Complex64::new(0.0, 0.7),
            ],
            [
                Complex64::new(-0.2, 0.0),
                Complex64::new(0.0, -0.7),
                Complex64::new(0.4, 0.0),
            ],
        ]);
        let e = eigh(&m).unwrap();
        assert!(e.vectors.unitarity_residual() < 1e-12);
        let back = spectral_map(&e, |l| Complex64::new(l, 0.0));
        assert!(back.max_abs_diff(&m).unwrap() < 1e-12);
        assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = CMatrix::from_real_rows(&[[0.0, 1.0], [0.0, 0.0]]);
        assert!(matches!(eigh(&m), Err(Error::NotHermitian(_))));
    }
}
