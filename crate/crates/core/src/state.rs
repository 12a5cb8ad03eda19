//! Pure and mixed quantum states over registers of at most
//! [`MAX_QUBITS`](crate::MAX_QUBITS) qubits.

use num_complex::Complex64;

use crate::eigen::eigh;
use crate::error::{Error, Result};
use crate::linalg::{apply_local, apply_single, CMatrix, C0, C1};
use crate::MAX_QUBITS;

pub const STATE_TOLERANCE: f64 = 1e-9;

fn check_register(n_qubits: usize) -> Result<()> {
    if n_qubits == 0 {
        return Err(Error::Empty("qubit register"));
    }
    if n_qubits > MAX_QUBITS {
        return Err(Error::RegisterTooLarge(n_qubits));
    }
    Ok(())
}

pub(crate) fn check_qubit(index: usize, n_qubits: usize) -> Result<()> {
    if index >= n_qubits {
        return Err(Error::QubitOutOfRange { index, n_qubits });
    }
    Ok(())
}

#[inline]
pub(crate) fn qubit_mask(n_qubits: usize, qubit: usize) -> usize {
    1 << (n_qubits - 1 - qubit)
}

fn as_array2(m: &CMatrix) -> [Complex64; 4] {
    [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]]
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// `|0...0>`
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let mut amplitudes = vec![C0; 1 << n_qubits];
        amplitudes[0] = C1;
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    /// Computational basis state; `bits[q]` is the value of qubit `q`.
    pub fn basis(bits: &[u8]) -> Result<Self> {
        let n = bits.len();
        let mut s = Self::zero(n)?;
        let idx = bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b != 0)
            .map(|(q, _)| qubit_mask(n, q))
            .sum::<usize>();
        s.amplitudes[0] = C0;
        s.amplitudes[idx] = C1;
        Ok(s)
    }

    pub fn from_amplitudes(amplitudes: Vec<Complex64>) -> Result<Self> {
        let len = amplitudes.len();
        if len < 2 || !len.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "{len} amplitudes is not a qubit register"
            )));
        }
        let n_qubits = len.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::Dimension(format!(
                "state norm is {norm}, expected 1"
            )));
        }
        Ok(StateVector {
            n_qubits,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| a.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `<self|other>`
    pub fn inner(&self, other: &StateVector) -> Result<Complex64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "inner product of {}- and {}-qubit states",
                self.n_qubits, other.n_qubits
            )));
        }
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn fidelity(&self, other: &StateVector) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Applies a `2^k x 2^k` unitary to the listed target qubits.
    pub fn apply_unitary(&mut self, targets: &[usize], u: &CMatrix) -> Result<()> {
        check_local(self.n_qubits, targets, u)?;
        if targets.len() == 1 {
            let mask = qubit_mask(self.n_qubits, targets[0]);
            let len = self.dim();
            apply_single(&mut self.amplitudes, 1, 0, len, mask, &as_array2(u));
        } else {
            apply_local(&mut self.amplitudes, self.n_qubits, targets, u);
        }
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        check_pair(self.n_qubits, control, target)?;
        let c = qubit_mask(self.n_qubits, control);
        let t = qubit_mask(self.n_qubits, target);
        for i in 0..self.dim() {
            if i & c != 0 && i & t == 0 {
                self.amplitudes.swap(i, i | t);
            }
        }
        Ok(())
    }

    pub fn apply_matrix(&mut self, m: &CMatrix) -> Result<()> {
        self.amplitudes = m.matvec(&self.amplitudes)?;
        Ok(())
    }

    /// `<psi|O|psi>`; the observable must be Hermitian.
    pub fn expectation(&self, obs: &CMatrix) -> Result<f64> {
        check_observable(obs, self.dim())?;
        let v = obs.matvec(&self.amplitudes)?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&v)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            .re)
    }

    /// `<Z_q>` computed from populations.
    pub fn z_expectation(&self, qubit: usize) -> Result<f64> {
        check_qubit(qubit, self.n_qubits)?;
        let mask = qubit_mask(self.n_qubits, qubit);
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .map(|(i, a)| {
                if i & mask == 0 {
                    a.norm_sqr()
                } else {
                    -a.norm_sqr()
                }
            })
            .sum())
    }
}

fn check_local(n_qubits: usize, targets: &[usize], u: &CMatrix) -> Result<()> {
    for (k, &t) in targets.iter().enumerate() {
        check_qubit(t, n_qubits)?;
        if targets[..k].contains(&t) {
            return Err(Error::Circuit(format!("qubit {t} targeted twice")));
        }
    }
    let dim = 1usize << targets.len();
    if u.rows() != dim || u.cols() != dim {
        return Err(Error::Dimension(format!(
            "{}x{} operator on {} target qubit(s)",
            u.rows(),
            u.cols(),
            targets.len()
        )));
    }
    Ok(())
}

fn check_pair(n_qubits: usize, control: usize, target: usize) -> Result<()> {
    check_qubit(control, n_qubits)?;
    check_qubit(target, n_qubits)?;
    if control == target {
        return Err(Error::SameControlTarget(control));
    }
    Ok(())
}

fn check_observable(obs: &CMatrix, dim: usize) -> Result<()> {
    if obs.rows() != dim || obs.cols() != dim {
        return Err(Error::Dimension(format!(
            "{}x{} observable on a {dim}-dimensional state",
            obs.rows(),
            obs.cols()
        )));
    }
    let r = obs.hermiticity_residual();
    if r > 1e-8 {
        return Err(Error::NotHermitian(r));
    }
    Ok(())
}

/// Mixed state; the noise-capable representation used by the simulator.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    matrix: CMatrix,
}

/// Health report for a density matrix.
#[derive(Clone, Copy, Debug)]
pub struct Diagnostics {
    pub trace: Complex64,
    pub hermiticity_residual: f64,
    pub purity: f64,
    pub min_eigenvalue: f64,
}

impl Diagnostics {
    pub fn is_physical(&self, tol: f64) -> bool {
        (self.trace - C1).norm() <= tol
            && self.hermiticity_residual <= tol
            && self.min_eigenvalue >= -tol
    }
}

impl DensityMatrix {
    pub fn zero(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let d = 1 << n_qubits;
        let mut matrix = CMatrix::zeros(d, d);
        matrix[(0, 0)] = C1;
        Ok(DensityMatrix { n_qubits, matrix })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        check_register(n_qubits)?;
        let d = 1 << n_qubits;
        Ok(DensityMatrix {
            n_qubits,
            matrix: CMatrix::identity(d).scale_real(1.0 / d as f64),
        })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        let d = psi.dim();
        let mut matrix = CMatrix::zeros(d, d);
        for (i, a) in psi.amplitudes().iter().enumerate() {
            for (j, b) in psi.amplitudes().iter().enumerate() {
                matrix[(i, j)] = a * b.conj();
            }
        }
        DensityMatrix {
            n_qubits: psi.n_qubits(),
            matrix,
        }
    }

    /// Validates shape, hermiticity and unit trace (tolerance 1e-9).
    /// Positivity is not checked here; see [`DensityMatrix::diagnostics`].
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        let d = matrix.rows();
        if !matrix.is_square() || d < 2 || !d.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix is not a qubit density matrix",
                matrix.rows(),
                matrix.cols()
            )));
        }
        let n_qubits = d.trailing_zeros() as usize;
        check_register(n_qubits)?;
        let r = matrix.hermiticity_residual();
        if r > STATE_TOLERANCE {
            return Err(Error::NotHermitian(r));
        }
        let tr = matrix.trace()?;
        if (tr - C1).norm() > STATE_TOLERANCE {
            return Err(Error::Dimension(format!("trace is {tr}, expected 1")));
        }
        Ok(DensityMatrix { n_qubits, matrix })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn trace(&self) -> Complex64 {
        self.matrix.trace().expect("square by construction")
    }

    pub fn purity(&self) -> f64 {
        // tr(rho^2) = sum |rho_ij|^2 for Hermitian rho
        self.matrix.data().iter().map(|z| z.norm_sqr()).sum()
    }

    /// `tr(rho O)` for a Hermitian observable; fails if the imaginary residue
    /// exceeds 1e-9.
    pub fn expectation(&self, obs: &CMatrix) -> Result<f64> {
        check_observable(obs, self.dim())?;
        let d = self.dim();
        let mut acc = C0;
        for i in 0..d {
            for j in 0..d {
                acc += self.matrix[(i, j)] * obs[(j, i)];
            }
        }
        if acc.im.abs() > STATE_TOLERANCE {
            return Err(Error::NotHermitian(acc.im.abs()));
        }
        Ok(acc.re)
    }

    /// `<Z_q>` from the diagonal.
    pub fn z_expectation(&self, qubit: usize) -> Result<f64> {
        check_qubit(qubit, self.n_qubits)?;
        let mask = qubit_mask(self.n_qubits, qubit);
        Ok((0..self.dim())
            .map(|i| {
                let p = self.matrix[(i, i)].re;
                if i & mask == 0 {
                    p
                } else {
                    -p
                }
            })
            .sum())
    }

    pub fn diagnostics(&self) -> Diagnostics {
        let min_eigenvalue = eigh(&self.hermitian_part())
            .map(|e| e.values[0])
            .unwrap_or(f64::NAN);
        Diagnostics {
            trace: self.trace(),
            hermiticity_residual: self.matrix.hermiticity_residual(),
            purity: self.purity(),
            min_eigenvalue,
        }
    }

    fn hermitian_part(&self) -> CMatrix {
        let adj = self.matrix.adjoint();
        self.matrix.add(&adj).expect("same shape").scale_real(0.5)
    }

    /// `rho <- U rho U†` for a unitary on the listed targets.
    pub fn apply_unitary(&mut self, targets: &[usize], u: &CMatrix) -> Result<()> {
        check_local(self.n_qubits, targets, u)?;
        conjugate_local(&mut self.matrix, self.n_qubits, targets, u);
        Ok(())
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) -> Result<()> {
        check_pair(self.n_qubits, control, target)?;
        let c = qubit_mask(self.n_qubits, control);
        let t = qubit_mask(self.n_qubits, target);
        let d = self.dim();
        let perm = |i: usize| if i & c != 0 { i ^ t } else { i };
        let old = self.matrix.clone();
        for i in 0..d {
            let pi = perm(i);
            for j in 0..d {
                self.matrix[(pi, perm(j))] = old[(i, j)];
            }
        }
        Ok(())
    }

    /// `rho <- sum_k K_k rho K_k†` with operators local to `targets`.
    /// Completeness is the caller's responsibility.
    pub fn apply_kraus(&mut self, targets: &[usize], ops: &[CMatrix]) -> Result<()> {
        if ops.is_empty() {
            return Err(Error::Empty("Kraus operator list"));
        }
        for k in ops {
            check_local(self.n_qubits, targets, k)?;
        }
        let mut acc = CMatrix::zeros(self.dim(), self.dim());
        for k in ops {
            let mut term = self.matrix.clone();
            conjugate_local(&mut term, self.n_qubits, targets, k);
            acc.axpy(C1, &term)?;
        }
        self.matrix = acc;
        Ok(())
    }
}

/// In-place `m <- A m A†` for a local operator `A`.
pub(crate) fn conjugate_local(m: &mut CMatrix, n_qubits: usize, targets: &[usize], a: &CMatrix) {
    let d = m.rows();
    if targets.len() == 1 {
        let mask = qubit_mask(n_qubits, targets[0]);
        let left = as_array2(a);
        let right = as_array2(&a.conj());
        let data = m.data_mut();
        // columns: stride d
        for col in 0..d {
            apply_single(data, d, col, d, mask, &left);
        }
        // rows: (M A†)_{ij} = sum_l M_il conj(A_jl)
        for row in 0..d {
            apply_single(data, 1, row * d, d, mask, &right);
        }
        return;
    }
    let a_conj = a.conj();
    let mut buf = vec![C0; d];
    for col in 0..d {
        for (i, b) in buf.iter_mut().enumerate() {
            *b = m[(i, col)];
        }
        apply_local(&mut buf, n_qubits, targets, a);
        for (i, b) in buf.iter().enumerate() {
            m[(i, col)] = *b;
        }
    }
    for row in 0..d {
        let data = m.data_mut();
        apply_local(
            &mut data[row * d..(row + 1) * d],
            n_qubits,
            targets,
            &a_conj,
        );
    }
}

/// Free-function form of [`DensityMatrix::expectation`].
pub fn expectation(state: &DensityMatrix, obs: &CMatrix) -> Result<f64> {
    state.expectation(obs)
}

/// Free-function form of [`DensityMatrix::diagnostics`].
pub fn purify_check(state: &DensityMatrix) -> Diagnostics {
    state.diagnostics()
}
