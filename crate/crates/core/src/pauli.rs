//! Pauli letters and tensor-product strings.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::linalg::{CMatrix, C0, C1, CI};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn matrix(self) -> CMatrix {
        match self {
            Pauli::I => CMatrix::identity(2),
            Pauli::X => CMatrix::from_rows(&[[C0, C1], [C1, C0]]),
            Pauli::Y => CMatrix::from_rows(&[[C0, -CI], [CI, C0]]),
            Pauli::Z => CMatrix::from_rows(&[[C1, C0], [C0, -C1]]),
        }
    }

    fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

/// A tensor product of single-qubit Pauli letters; letter 0 acts on qubit 0,
/// the leftmost (most significant) factor.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    letters: Vec<Pauli>,
}

impl PauliString {
    pub fn new(letters: Vec<Pauli>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Empty("Pauli string"));
        }
        Ok(PauliString { letters })
    }

    pub fn identity(n_qubits: usize) -> Self {
        PauliString {
            letters: vec![Pauli::I; n_qubits.max(1)],
        }
    }

    /// A single non-identity letter on `qubit`, identity elsewhere.
    pub fn single(n_qubits: usize, qubit: usize, letter: Pauli) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::QubitOutOfRange {
                index: qubit,
                n_qubits,
            });
        }
        let mut letters = vec![Pauli::I; n_qubits];
        letters[qubit] = letter;
        Ok(PauliString { letters })
    }

    pub fn n_qubits(&self) -> usize {
        self.letters.len()
    }

    pub fn letters(&self) -> &[Pauli] {
        &self.letters
    }

    pub fn is_identity(&self) -> bool {
        self.letters.iter().all(|&p| p == Pauli::I)
    }

    /// Qubit-wise commutation is sufficient but not necessary; this is the
    /// exact test (an even number of anticommuting positions).
    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .letters
            .iter()
            .zip(&other.letters)
            .filter(|(a, b)| **a != Pauli::I && **b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    pub fn matrix(&self) -> CMatrix {
        self.letters
            .iter()
            .skip(1)
            .fold(self.letters[0].matrix(), |acc, p| acc.kron(&p.matrix()))
    }
}

/// Dense realization of a Pauli string.
pub fn pauli_matrix(p: &PauliString) -> CMatrix {
    p.matrix()
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters = s
            .chars()
            .map(|c| match c.to_ascii_uppercase() {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                other => Err(Error::Config(format!("unknown Pauli letter '{other}'"))),
            })
            .collect::<Result<Vec<_>>>()?;
        PauliString::new(letters)
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in &self.letters {
            write!(f, "{}", p.symbol())?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ps(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn single_x() {
        let m = pauli_matrix(&ps("X"));
        assert_eq!(m, CMatrix::from_real_rows(&[[0.0, 1.0], [1.0, 0.0]]));
    }

    #[test]
    fn z_on_leftmost_qubit() {
        let m = pauli_matrix(&ps("ZI"));
        let d: Vec<_> = (0..4).map(|i| m[(i, i)].re).collect();
        assert_eq!(d, vec![1.0, 1.0, -1.0, -1.0]);
        assert_eq!(m.hermiticity_residual(), 0.0);
    }

    #[test]
    fn xz_squares_to_identity() {
        let m = pauli_matrix(&ps("XZ"));
        assert_eq!(m.matmul(&m).unwrap(), CMatrix::identity(4));
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
        assert!(PauliString::single(2, 2, Pauli::X).is_err());
    }

    #[test]
    fn commutation() {
        assert!(ps("XX").commutes_with(&ps("ZZ")));
        assert!(!ps("XI").commutes_with(&ps("ZI")));
        assert!(ps("XI").commutes_with(&ps("IX")));
    }

    fn arb_string() -> impl Strategy<Value = PauliString> {
        prop::collection::vec(
            prop_oneof![
                Just(Pauli::I),
                Just(Pauli::X),
                Just(Pauli::Y),
                Just(Pauli::Z)
            ],
            1..=4,
        )
        .prop_map(|l| PauliString::new(l).unwrap())
    }

    proptest! {
        #[test]
        fn strings_are_hermitian_unitary_involutions(p in arb_string()) {
            let m = p.matrix();
            let sq = m.matmul(&m).unwrap();
            prop_assert!(sq.max_abs_diff(&CMatrix::identity(m.rows())).unwrap() <= 1e-12);
            prop_assert!(m.hermiticity_residual() <= 1e-12);
            prop_assert!(m.unitarity_residual() <= 1e-12);
            let tr = m.trace().unwrap().norm();
            if p.is_identity() {
                prop_assert!((tr - m.rows() as f64).abs() < 1e-12);
            } else {
                prop_assert!(tr < 1e-12);
            }
        }
    }
}
