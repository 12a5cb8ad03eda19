//! Weighted Pauli-string Hamiltonians for the lattice model: the initial
//! Hamiltonian `H_b`, the overlap and penalty parts `H_olap` and `H_redun`,
//! and the problem Hamiltonian `H_p = H_olap + H_redun`.
//!
//! Register layout: the `S` Z-operators occupy qubits `0..S`, the `N`
//! X-operators occupy qubits `S..S+N`.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;

use crate::eigen::{eigen_residual, eigh};
use crate::error::{Error, Result};
use crate::expm::expm;
use crate::linalg::{CMatrix, CI};
use crate::pauli::{Pauli, PauliString};
use crate::state::{DensityMatrix, StateVector};
use crate::MAX_QUBITS;

pub const GROUND_RESIDUAL_TOLERANCE: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct PauliTerm {
    pub coefficient: f64,
    pub string: PauliString,
}

impl PauliTerm {
    pub fn new(coefficient: f64, string: PauliString) -> Result<Self> {
        if !coefficient.is_finite() {
            return Err(Error::Config(format!(
                "Pauli term coefficient {coefficient} is not finite"
            )));
        }
        Ok(PauliTerm {
            coefficient,
            string,
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Hamiltonian {
    n_qubits: usize,
    terms: Vec<PauliTerm>,
}

impl Hamiltonian {
    pub fn new(n_qubits: usize, terms: Vec<PauliTerm>) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::Empty("qubit register"));
        }
        if let Some(t) = terms.iter().find(|t| t.string.n_qubits() != n_qubits) {
            return Err(Error::Dimension(format!(
                "term {} does not act on {n_qubits} qubits",
                t.string
            )));
        }
        Ok(Hamiltonian { n_qubits, terms })
    }

    pub fn zero(n_qubits: usize) -> Result<Self> {
        Self::new(n_qubits, Vec::new())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn terms(&self) -> &[PauliTerm] {
        &self.terms
    }

    pub fn scaled(&self, s: f64) -> Hamiltonian {
        Hamiltonian {
            n_qubits: self.n_qubits,
            terms: self
                .terms
                .iter()
                .map(|t| PauliTerm {
                    coefficient: t.coefficient * s,
                    string: t.string.clone(),
                })
                .collect(),
        }
    }

    /// Term-list concatenation.
    pub fn concat(&self, other: &Hamiltonian) -> Result<Hamiltonian> {
        if self.n_qubits != other.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot add {}- and {}-qubit Hamiltonians",
                self.n_qubits, other.n_qubits
            )));
        }
        let mut terms = self.terms.clone();
        terms.extend(other.terms.iter().cloned());
        Ok(Hamiltonian {
            n_qubits: self.n_qubits,
            terms,
        })
    }

    /// Whether every pair of terms commutes.
    pub fn terms_commute(&self) -> bool {
        self.terms.iter().enumerate().all(|(i, a)| {
            self.terms[i + 1..]
                .iter()
                .all(|b| a.string.commutes_with(&b.string))
        })
    }

    /// Sum of |coefficients|; bounds the operator norm.
    pub fn coefficient_norm(&self) -> f64 {
        self.terms.iter().map(|t| t.coefficient.abs()).sum()
    }

    pub fn matrix(&self) -> Result<CMatrix> {
        if self.n_qubits > MAX_QUBITS {
            return Err(Error::RegisterTooLarge(self.n_qubits));
        }
        let d = 1usize << self.n_qubits;
        let mut m = CMatrix::zeros(d, d);
        for t in &self.terms {
            if t.coefficient != 0.0 {
                m.axpy(Complex64::new(t.coefficient, 0.0), &t.string.matrix())?;
            }
        }
        Ok(m)
    }

    pub fn expectation(&self, state: &DensityMatrix) -> Result<f64> {
        state.expectation(&self.matrix()?)
    }

    pub fn expectation_pure(&self, psi: &StateVector) -> Result<f64> {
        psi.expectation(&self.matrix()?)
    }
}

impl fmt::Display for Hamiltonian {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, t) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{}*{}", t.coefficient, t.string)?;
        }
        Ok(())
    }
}

/// Coupling between Z-operator `z` and X-operator `x` with strength `strength`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Coupling {
    pub z: usize,
    pub x: usize,
    pub strength: f64,
}

/// Lattice description: `S` Z-operators, `N` X-operators with nuclear spin
/// shifts `V_n`, Z–X couplings `J_jk`, and the penalty scale `hbar`.
#[derive(Clone, Debug, PartialEq)]
pub struct LatticeSpec {
    pub n_z_ops: usize,
    pub n_x_ops: usize,
    pub couplings: Vec<Coupling>,
    pub nuclear_shifts: Vec<f64>,
    pub hbar: f64,
    pub register: Register,
}

/// How lattice operators are assigned to qubits.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Register {
    /// Z-operator `j` on qubit `j`, X-operator `k` on qubit `S + k`.
    #[default]
    Disjoint,
    /// Z-operator `j` on qubit `j` and X-operator `k` on qubit `k`; a qubit
    /// may carry one of each. Couplings must join different qubits.
    Shared,
}

impl LatticeSpec {
    /// `m` Z-operators and `m` X-operators with diagonal couplings `(j, j)`;
    /// all of `V_n`, `J_jj`, `hbar` set to 1.
    pub fn diagonal(m: usize) -> Self {
        LatticeSpec {
            n_z_ops: m,
            n_x_ops: m,
            couplings: (0..m)
                .map(|j| Coupling {
                    z: j,
                    x: j,
                    strength: 1.0,
                })
                .collect(),
            nuclear_shifts: vec![1.0; m],
            hbar: 1.0,
            register: Register::Disjoint,
        }
    }

    /// The two-qubit register used by the regression experiments.
    pub fn two_qubit() -> Self {
        Self::diagonal(1)
    }

    /// The four-qubit register used by the classification experiment.
    pub fn four_qubit() -> Self {
        Self::diagonal(2)
    }

    /// One Z-operator coupled to two X-operators with unequal parameters.
    pub fn three_qubit() -> Self {
        LatticeSpec {
            n_z_ops: 1,
            n_x_ops: 2,
            couplings: vec![
                Coupling {
                    z: 0,
                    x: 0,
                    strength: 1.0,
                },
                Coupling {
                    z: 0,
                    x: 1,
                    strength: 0.5,
                },
            ],
            nuclear_shifts: vec![1.0, 0.5],
            hbar: 1.0,
            register: Register::Disjoint,
        }
    }

    /// Periodic `k x k` square lattice, checkerboard colored: sites with even
    /// `row + col` carry Z-operators, odd sites carry X-operators, and every
    /// nearest-neighbor Z–X pair is coupled with unit strength. `k` must be
    /// even so the coloring is consistent across the periodic boundary.
    pub fn square(k: usize) -> Result<Self> {
        if k < 2 || !k.is_multiple_of(2) {
            return Err(Error::Lattice(format!(
                "square lattice side must be even and at least 2, got {k}"
            )));
        }
        let mut z_index = vec![None; k * k];
        let mut x_index = vec![None; k * k];
        let (mut n_z, mut n_x) = (0, 0);
        for r in 0..k {
            for c in 0..k {
                let site = r * k + c;
                if (r + c) % 2 == 0 {
                    z_index[site] = Some(n_z);
                    n_z += 1;
                } else {
                    x_index[site] = Some(n_x);
                    n_x += 1;
                }
            }
        }
        let mut couplings: Vec<Coupling> = Vec::new();
        for r in 0..k {
            for c in 0..k {
                let Some(z) = z_index[r * k + c] else {
                    continue;
                };
                let neighbors = [
                    ((r + 1) % k, c),
                    ((r + k - 1) % k, c),
                    (r, (c + 1) % k),
                    (r, (c + k - 1) % k),
                ];
                for (nr, nc) in neighbors {
                    if let Some(x) = x_index[nr * k + nc] {
                        if !couplings.iter().any(|cp| cp.z == z && cp.x == x) {
                            couplings.push(Coupling {
                                z,
                                x,
                                strength: 1.0,
                            });
                        }
                    }
                }
            }
        }
        Ok(LatticeSpec {
            n_z_ops: n_z,
            n_x_ops: n_x,
            couplings,
            nuclear_shifts: vec![1.0; n_x],
            hbar: 1.0,
            register: Register::Disjoint,
        })
    }

    /// Chain of `n` sites on a shared register: X-operators on every qubit,
    /// Z-operators on the first `n - 1`, and Z-operator `j` coupled to the
    /// X-operator on qubit `j + 1`. `chain(2)` gives the two-qubit layer
    /// RX RX, RZ, RX, CNOT, RX RX.
    pub fn chain(n: usize) -> Result<Self> {
        if n < 2 {
            return Err(Error::Lattice(format!(
                "chain needs at least 2 sites, got {n}"
            )));
        }
        Ok(LatticeSpec {
            n_z_ops: n - 1,
            n_x_ops: n,
            couplings: (0..n - 1)
                .map(|j| Coupling {
                    z: j,
                    x: j + 1,
                    strength: 1.0,
                })
                .collect(),
            nuclear_shifts: vec![1.0; n],
            hbar: 1.0,
            register: Register::Shared,
        })
    }

    /// Rescales `V_n`, `J_jk` and `hbar` so every AHL gate angle equals its
    /// slot value: `2 pi V_n = pi J_jk = 2 hbar = 1`.
    pub fn with_unit_angle_scales(mut self) -> Self {
        self.nuclear_shifts = vec![1.0 / (2.0 * PI); self.n_x_ops];
        for c in &mut self.couplings {
            c.strength = 1.0 / PI;
        }
        self.hbar = 0.5;
        self
    }

    pub fn n_qubits(&self) -> usize {
        match self.register {
            Register::Disjoint => self.n_z_ops + self.n_x_ops,
            Register::Shared => self.n_z_ops.max(self.n_x_ops),
        }
    }

    pub fn z_qubit(&self, j: usize) -> usize {
        j
    }

    pub fn x_qubit(&self, k: usize) -> usize {
        match self.register {
            Register::Disjoint => self.n_z_ops + k,
            Register::Shared => k,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_x_ops == 0 {
            return Err(Error::Lattice("no X-operators".into()));
        }
        if self.nuclear_shifts.len() != self.n_x_ops {
            return Err(Error::Lattice(format!(
                "{} nuclear shifts for {} X-operators",
                self.nuclear_shifts.len(),
                self.n_x_ops
            )));
        }
        if !self.hbar.is_finite() || self.nuclear_shifts.iter().any(|v| !v.is_finite()) {
            return Err(Error::Lattice("non-finite coefficient".into()));
        }
        for c in &self.couplings {
            if c.z >= self.n_z_ops || c.x >= self.n_x_ops {
                return Err(Error::Lattice(format!(
                    "coupling ({}, {}) outside {} Z-ops / {} X-ops",
                    c.z, c.x, self.n_z_ops, self.n_x_ops
                )));
            }
            if self.z_qubit(c.z) == self.x_qubit(c.x) {
                return Err(Error::Lattice(format!(
                    "coupling ({}, {}) joins a qubit to itself",
                    c.z, c.x
                )));
            }
            if !c.strength.is_finite() {
                return Err(Error::Lattice("non-finite coupling strength".into()));
            }
        }
        Ok(())
    }

    fn x_term(&self, k: usize, coefficient: f64) -> Result<PauliTerm> {
        PauliTerm::new(
            coefficient,
            PauliString::single(self.n_qubits(), self.x_qubit(k), Pauli::X)?,
        )
    }

    fn z_term(&self, j: usize, coefficient: f64) -> Result<PauliTerm> {
        PauliTerm::new(
            coefficient,
            PauliString::single(self.n_qubits(), self.z_qubit(j), Pauli::Z)?,
        )
    }
}

/// `H_b = sum_n pi V_n X_n` over the X-operator qubits.
pub fn build_h_b(spec: &LatticeSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    let terms = spec
        .nuclear_shifts
        .iter()
        .enumerate()
        .map(|(n, &v)| spec.x_term(n, PI * v))
        .collect::<Result<_>>()?;
    Hamiltonian::new(spec.n_qubits(), terms)
}

/// `H_olap = sum_(j,k) (pi/2) J_jk (Z_j + X_k)`
pub fn build_h_olap(spec: &LatticeSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    if spec.couplings.is_empty() {
        return Err(Error::Lattice("overlap Hamiltonian needs couplings".into()));
    }
    let mut terms = Vec::with_capacity(2 * spec.couplings.len());
    for c in &spec.couplings {
        let w = 0.5 * PI * c.strength;
        terms.push(spec.z_term(c.z, w)?);
        terms.push(spec.x_term(c.x, w)?);
    }
    Hamiltonian::new(spec.n_qubits(), terms)
}

/// `H_redun = sum_n hbar X_n`, the penalty Hamiltonian.
pub fn build_h_redun(spec: &LatticeSpec) -> Result<Hamiltonian> {
    spec.validate()?;
    let terms = (0..spec.n_x_ops)
        .map(|n| spec.x_term(n, spec.hbar))
        .collect::<Result<_>>()?;
    Hamiltonian::new(spec.n_qubits(), terms)
}

/// `H_p = H_olap + H_redun`; with no couplings this is just `H_redun`.
pub fn build_h_p(spec: &LatticeSpec) -> Result<Hamiltonian> {
    let redun = build_h_redun(spec)?;
    if spec.couplings.is_empty() {
        return Ok(redun);
    }
    build_h_olap(spec)?.concat(&redun)
}

/// `H(s) = (1 - s) H_b + s H_p`; the side with zero weight is dropped.
pub fn interpolate(h_b: &Hamiltonian, h_p: &Hamiltonian, s: f64) -> Result<Hamiltonian> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::InterpolationRange(s));
    }
    if h_b.n_qubits() != h_p.n_qubits() {
        return Err(Error::Dimension(format!(
            "interpolating {}- and {}-qubit Hamiltonians",
            h_b.n_qubits(),
            h_p.n_qubits()
        )));
    }
    let mut out = Hamiltonian::zero(h_b.n_qubits())?;
    if s < 1.0 {
        out = out.concat(&h_b.scaled(1.0 - s))?;
    }
    if s > 0.0 {
        out = out.concat(&h_p.scaled(s))?;
    }
    Ok(out)
}

/// Dense `exp(-i t H)`.
pub fn exponential(h: &Hamiltonian, t: f64) -> Result<CMatrix> {
    let m = h.matrix()?;
    expm(&m.scale(-CI * t))
}

#[derive(Clone, Debug)]
pub struct GroundState {
    pub energy: f64,
    pub vector: Vec<Complex64>,
    pub residual: f64,
}

pub fn ground_state(h: &Hamiltonian) -> Result<GroundState> {
    let m = h.matrix()?;
    let e = eigh(&m)?;
    let vector = e.vector(0);
    let residual = eigen_residual(&m, e.values[0], &vector)?;
    if residual > GROUND_RESIDUAL_TOLERANCE {
        return Err(Error::Eigen(format!(
            "ground-state residual {residual:.3e} above {GROUND_RESIDUAL_TOLERANCE:e}"
        )));
    }
    Ok(GroundState {
        energy: e.values[0],
        vector,
        residual,
    })
}

/// Smallest eigenvalue of `H`.
pub fn ground_energy(h: &Hamiltonian) -> Result<f64> {
    Ok(ground_state(h)?.energy)
}

/// Born-rule likelihood `|<d| exp(-i H t) |psi>|^2`.
pub fn born_likelihood(h: &Hamiltonian, psi: &StateVector, d: &StateVector, t: f64) -> Result<f64> {
    if psi.dim() != d.dim() || psi.n_qubits() != h.n_qubits() {
        return Err(Error::Dimension(format!(
            "likelihood over a {}-qubit Hamiltonian with {}- and {}-qubit states",
            h.n_qubits(),
            psi.n_qubits(),
            d.n_qubits()
        )));
    }
    let mut evolved = psi.clone();
    evolved.apply_matrix(&exponential(h, t)?)?;
    Ok(d.inner(&evolved)?.norm_sqr().min(1.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates::{rotation_matrix, Axis};

    fn spec_1x1(j: f64) -> LatticeSpec {
        LatticeSpec {
            n_z_ops: 1,
            n_x_ops: 1,
            couplings: vec![Coupling {
                z: 0,
                x: 0,
                strength: j,
            }],
            nuclear_shifts: vec![1.0],
            hbar: 1.0,
            register: Register::Disjoint,
        }
    }

    #[test]
    fn h_b_single_term_spectrum() {
        let spec = LatticeSpec {
            n_z_ops: 0,
            n_x_ops: 1,
            couplings: vec![],
            nuclear_shifts: vec![1.0],
            hbar: 1.0,
            register: Register::Disjoint,
        };
        let h = build_h_b(&spec).unwrap();
        assert_eq!(h.terms().len(), 1);
        assert_eq!(h.terms()[0].string.to_string(), "X");
        let e = eigh(&h.matrix().unwrap()).unwrap();
        assert!((e.values[0] + PI).abs() < 1e-14 && (e.values[1] - PI).abs() < 1e-14);
    }

    #[test]
    fn h_b_two_x_ops() {
        let mut spec = LatticeSpec::diagonal(2);
        spec.nuclear_shifts = vec![1.0, 0.5];
        let h = build_h_b(&spec).unwrap();
        let got: Vec<_> = h
            .terms()
            .iter()
            .map(|t| (t.coefficient, t.string.to_string()))
            .collect();
        assert_eq!(got, vec![(PI, "IIXI".into()), (0.5 * PI, "IIIX".into())]);
    }

    #[test]
    fn h_b_on_plus_register() {
        // |00>|++> with the X-op qubits in |+>
        let mut spec = LatticeSpec::diagonal(2);
        spec.nuclear_shifts = vec![1.0, 0.5];
        let h = build_h_b(&spec).unwrap();
        let mut psi = StateVector::zero(4).unwrap();
        psi.apply_gate(&crate::gates::Gate::ry(2, PI / 2.0))
            .unwrap();
        psi.apply_gate(&crate::gates::Gate::ry(3, PI / 2.0))
            .unwrap();
        let e = h.expectation_pure(&psi).unwrap();
        assert!((e - PI * 1.5).abs() < 1e-12);
    }

    #[test]
    fn empty_spec_rejected() {
        let spec = LatticeSpec {
            n_z_ops: 1,
            n_x_ops: 0,
            couplings: vec![],
            nuclear_shifts: vec![],
            hbar: 1.0,
            register: Register::Disjoint,
        };
        assert!(build_h_b(&spec).is_err());
    }

    #[test]
    fn h_olap_terms_and_zero_coupling() {
        let h = build_h_olap(&spec_1x1(1.0)).unwrap();
        let got: Vec<_> = h
            .terms()
            .iter()
            .map(|t| (t.coefficient, t.string.to_string()))
            .collect();
        assert_eq!(got, vec![(PI / 2.0, "ZI".into()), (PI / 2.0, "IX".into())]);
        let zero = build_h_olap(&spec_1x1(0.0)).unwrap().matrix().unwrap();
        assert_eq!(zero.max_abs(), 0.0);
    }

    #[test]
    fn h_olap_ground_energy_closed_form() {
        // J = 2: pi (Z (x) I + I (x) X) has spectrum {-2pi, 0, 0, 2pi}
        let e = ground_energy(&build_h_olap(&spec_1x1(2.0)).unwrap()).unwrap();
        assert!((e + 2.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn h_olap_invalid_indices() {
        let mut spec = spec_1x1(1.0);
        spec.couplings[0].x = 3;
        assert!(matches!(build_h_olap(&spec), Err(Error::Lattice(_))));
        spec.couplings.clear();
        assert!(build_h_olap(&spec).is_err());
    }

    #[test]
    fn h_redun_cases() {
        let spec = LatticeSpec {
            n_z_ops: 0,
            n_x_ops: 1,
            couplings: vec![],
            nuclear_shifts: vec![1.0],
            hbar: 1.0,
            register: Register::Disjoint,
        };
        let e = eigh(&build_h_redun(&spec).unwrap().matrix().unwrap()).unwrap();
        assert_eq!(e.values.len(), 2);
        assert!((e.values[0] + 1.0).abs() < 1e-15);

        let zero = LatticeSpec { hbar: 0.0, ..spec };
        assert_eq!(
            build_h_redun(&zero).unwrap().matrix().unwrap().max_abs(),
            0.0
        );

        // |---> on three X-ops
        let three = LatticeSpec {
            n_z_ops: 0,
            n_x_ops: 3,
            couplings: vec![],
            nuclear_shifts: vec![1.0; 3],
            hbar: 1.0,
            register: Register::Disjoint,
        };
        let mut psi = StateVector::basis(&[1, 1, 1]).unwrap();
        for q in 0..3 {
            psi.apply_gate(&crate::gates::Gate::ry(q, PI / 2.0))
                .unwrap();
        }
        let e = build_h_redun(&three)
            .unwrap()
            .expectation_pure(&psi)
            .unwrap();
        assert!((e + 3.0).abs() < 1e-12);
    }

    #[test]
    fn h_p_composition() {
        let spec = LatticeSpec::three_qubit();
        let hp = build_h_p(&spec).unwrap();
        assert_eq!(hp.terms().len(), 2 * spec.couplings.len() + spec.n_x_ops);
        let sum = build_h_olap(&spec)
            .unwrap()
            .matrix()
            .unwrap()
            .add(&build_h_redun(&spec).unwrap().matrix().unwrap())
            .unwrap();
        assert!(hp.matrix().unwrap().max_abs_diff(&sum).unwrap() < 1e-12);

        let mut bare = spec.clone();
        bare.couplings.clear();
        assert_eq!(build_h_p(&bare).unwrap(), build_h_redun(&bare).unwrap());
    }

    #[test]
    fn interpolation_endpoints_and_midpoint() {
        let spec = LatticeSpec::three_qubit();
        let hb = build_h_b(&spec).unwrap();
        let hp = build_h_p(&spec).unwrap();
        assert_eq!(interpolate(&hb, &hp, 0.0).unwrap(), hb);
        assert_eq!(interpolate(&hb, &hp, 1.0).unwrap(), hp);
        let mid = interpolate(&hb, &hp, 0.5).unwrap().matrix().unwrap();
        let oracle = hb
            .matrix()
            .unwrap()
            .add(&hp.matrix().unwrap())
            .unwrap()
            .scale_real(0.5);
        assert!(mid.max_abs_diff(&oracle).unwrap() < 1e-12);
        assert!(matches!(
            interpolate(&hb, &hp, 1.5),
            Err(Error::InterpolationRange(_))
        ));
        let other = build_h_b(&LatticeSpec::two_qubit()).unwrap();
        assert!(interpolate(&hb, &other, 0.5).is_err());
    }

    #[test]
    fn exponential_basics() {
        let spec = LatticeSpec::two_qubit();
        let h = build_h_p(&spec).unwrap();
        assert!(
            exponential(&h, 0.0)
                .unwrap()
                .max_abs_diff(&CMatrix::identity(4))
                .unwrap()
                < 1e-15
        );
        let fwd = exponential(&h, 0.7).unwrap();
        let back = exponential(&h, -0.7).unwrap();
        assert!(
            fwd.matmul(&back)
                .unwrap()
                .max_abs_diff(&CMatrix::identity(4))
                .unwrap()
                < 1e-10
        );
        assert!(fwd.unitarity_residual() < 1e-10);
    }

    #[test]
    fn exponential_of_pi_x_is_rx_pi() {
        let h =
            Hamiltonian::new(1, vec![PauliTerm::new(PI, "X".parse().unwrap()).unwrap()]).unwrap();
        let u = exponential(&h, 0.5).unwrap();
        let rx = rotation_matrix(Axis::X, PI).unwrap();
        assert!(u.max_abs_diff(&rx).unwrap() < 1e-12);
        // = -i X
        assert!((u[(0, 1)] + CI).norm() < 1e-12);
    }

    #[test]
    fn oversize_register_rejected() {
        let h = Hamiltonian::zero(MAX_QUBITS + 1).unwrap();
        assert!(matches!(
            exponential(&h, 1.0),
            Err(Error::RegisterTooLarge(_))
        ));
        assert!(matches!(ground_energy(&h), Err(Error::RegisterTooLarge(_))));
    }

    #[test]
    fn ground_energy_cases() {
        let z =
            Hamiltonian::new(1, vec![PauliTerm::new(1.0, "Z".parse().unwrap()).unwrap()]).unwrap();
        assert!((ground_energy(&z).unwrap() + 1.0).abs() < 1e-15);
        assert_eq!(ground_energy(&Hamiltonian::zero(2).unwrap()).unwrap(), 0.0);
        // XX + ZZ: eigenvalues {2, 0, 0, -2}
        let h = Hamiltonian::new(
            2,
            vec![
                PauliTerm::new(1.0, "XX".parse().unwrap()).unwrap(),
                PauliTerm::new(1.0, "ZZ".parse().unwrap()).unwrap(),
            ],
        )
        .unwrap();
        assert!((ground_energy(&h).unwrap() + 2.0).abs() < 1e-12);
    }

    #[test]
    fn born_likelihood_cases() {
        let h =
            Hamiltonian::new(1, vec![PauliTerm::new(PI, "X".parse().unwrap()).unwrap()]).unwrap();
        let zero = StateVector::basis(&[0]).unwrap();
        let one = StateVector::basis(&[1]).unwrap();
        assert!((born_likelihood(&h, &zero, &zero, 0.0).unwrap() - 1.0).abs() < 1e-15);
        assert!(born_likelihood(&h, &zero, &one, 0.0).unwrap() < 1e-15);
        // exp(-i pi X / 2) = -iX maps |0> to -i|1>
        assert!((born_likelihood(&h, &zero, &one, 0.5).unwrap() - 1.0).abs() < 1e-12);
        let two = StateVector::zero(2).unwrap();
        assert!(born_likelihood(&h, &zero, &two, 0.5).is_err());
    }

    #[test]
    fn built_hamiltonians_are_hermitian_and_h_b_commutes() {
        let spec = LatticeSpec::three_qubit();
        for h in [
            build_h_b(&spec).unwrap(),
            build_h_olap(&spec).unwrap(),
            build_h_redun(&spec).unwrap(),
            build_h_p(&spec).unwrap(),
        ] {
            assert!(h.matrix().unwrap().hermiticity_residual() <= 1e-12);
        }
        assert!(build_h_b(&spec).unwrap().terms_commute());
        assert!(build_h_redun(&spec).unwrap().terms_commute());
    }

    #[test]
    fn h_b_exponential_factorizes_into_rx() {
        let spec = LatticeSpec::three_qubit();
        let theta = 0.37;
        let u = exponential(&build_h_b(&spec).unwrap(), theta).unwrap();
        let mut product = CMatrix::identity(1 << spec.n_qubits());
        for (n, &v) in spec.nuclear_shifts.iter().enumerate() {
            let g = crate::gates::Gate::rx(spec.x_qubit(n), 2.0 * PI * v * theta);
            product = g.embed(spec.n_qubits()).unwrap().matmul(&product).unwrap();
        }
        assert!(u.max_abs_diff(&product).unwrap() < 1e-10);
    }

    #[test]
    fn additivity_for_commuting_generators() {
        let h = build_h_b(&LatticeSpec::three_qubit()).unwrap();
        let a = exponential(&h, 0.3).unwrap();
        let b = exponential(&h, 1.1).unwrap();
        let ab = exponential(&h, 1.4).unwrap();
        assert!(a.matmul(&b).unwrap().max_abs_diff(&ab).unwrap() < 1e-10);
    }

    #[test]
    fn ground_energy_is_lipschitz_in_s() {
        let spec = LatticeSpec::three_qubit();
        let hb = build_h_b(&spec).unwrap();
        let hp = build_h_p(&spec).unwrap();
        // |E(s) - E(s')| <= ||H_p - H_b|| |s - s'| <= (|H_b|_1 + |H_p|_1) |s - s'|
        let c = hb.coefficient_norm() + hp.coefficient_norm();
        let mut s = 0.0;
        while s + 1e-3 <= 1.0 {
            let e0 = ground_energy(&interpolate(&hb, &hp, s).unwrap()).unwrap();
            let e1 = ground_energy(&interpolate(&hb, &hp, s + 1e-3).unwrap()).unwrap();
            assert!((e0 - e1).abs() <= c * 1e-3 + 1e-12, "s = {s}");
            s += 0.05;
        }
    }

    #[test]
    fn square_lattice_preset() {
        let spec = LatticeSpec::square(2).unwrap();
        assert_eq!((spec.n_z_ops, spec.n_x_ops), (2, 2));
        // every Z site touches both X sites on a 2x2 torus
        assert_eq!(spec.couplings.len(), 4);
        spec.validate().unwrap();
        let big = LatticeSpec::square(4).unwrap();
        assert_eq!(big.n_qubits(), 16);
        assert_eq!(big.couplings.len(), 32);
        assert!(build_h_b(&big).unwrap().matrix().is_err());
        assert!(LatticeSpec::square(3).is_err());
    }

    #[test]
    fn chain_register_shares_qubits() {
        let spec = LatticeSpec::chain(4).unwrap();
        spec.validate().unwrap();
        assert_eq!(spec.n_qubits(), 4);
        assert_eq!((spec.z_qubit(2), spec.x_qubit(3)), (2, 3));
        let hb = build_h_b(&spec).unwrap();
        assert_eq!(hb.terms.len(), 4);
        assert!(LatticeSpec::chain(1).is_err());
        let mut bad = LatticeSpec::chain(2).unwrap();
        bad.couplings[0].x = 0;
        assert!(bad.validate().is_err());
    }

    #[test]
    fn unit_angle_scales() {
        let spec = LatticeSpec::chain(3).unwrap().with_unit_angle_scales();
        spec.validate().unwrap();
        for v in &spec.nuclear_shifts {
            assert!((2.0 * PI * v - 1.0).abs() < 1e-15);
        }
        for c in &spec.couplings {
            assert!((PI * c.strength - 1.0).abs() < 1e-15);
        }
        assert_eq!(2.0 * spec.hbar, 1.0);
    }
}
