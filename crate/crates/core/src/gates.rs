//! Gate lists for state preparation and witness mapping circuits.

use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::pulses::{equatorial_rotation, ry};
use crate::sim::{c, embed_operator, qubit_mask, CMatrix, DensityMatrix, Mat2, Pauli};

/// A gate on 0-based qubit indices.
#[derive(Copy, Clone, Debug, PartialEq)]
pub enum Gate {
    /// Rotation about the equatorial axis at `phase` by `angle`.
    Rot { qubit: usize, angle: f64, phase: f64 },
    H(usize),
    Cx { control: usize, target: usize },
    Cz(usize, usize),
}

impl Gate {
    pub fn rx(qubit: usize, angle: f64) -> Self {
        Gate::Rot { qubit, angle, phase: 0.0 }
    }

    pub fn ry(qubit: usize, angle: f64) -> Self {
        Gate::Rot { qubit, angle, phase: FRAC_PI_2 }
    }

    /// A pi rotation about X (a NOT up to global phase).
    pub fn x(qubit: usize) -> Self {
        Self::rx(qubit, PI)
    }

    pub fn qubits(&self) -> Vec<usize> {
        match *self {
            Gate::Rot { qubit, .. } | Gate::H(qubit) => vec![qubit],
            Gate::Cx { control, target } => vec![control, target],
            Gate::Cz(a, b) => vec![a, b],
        }
    }

    pub fn is_two_qubit(&self) -> bool {
        matches!(self, Gate::Cx { .. } | Gate::Cz(..))
    }

    /// Single-qubit matrix, with flip-angle error `epsilon` scaling the
    /// rotation angle. `None` for two-qubit gates.
    pub fn local_matrix(&self, epsilon: f64) -> Option<Mat2> {
        match *self {
            Gate::Rot { angle, phase, .. } => Some(equatorial_rotation(angle * (1.0 + epsilon), phase)),
            // H = Ry(pi/2) Z
            Gate::H(_) => Some(ry(FRAC_PI_2 * (1.0 + epsilon)) * Pauli::Z.matrix()),
            _ => None,
        }
    }

    /// Full-register unitary.
    pub fn unitary(&self, n_qubits: usize) -> Result<CMatrix> {
        if let Some(m) = self.local_matrix(0.0) {
            let m = CMatrix::from_fn(2, 2, |i, j| m[(i, j)]);
            return embed_operator(&m, &self.qubits(), n_qubits);
        }
        let o = c(0.0, 0.0);
        let l = c(1.0, 0.0);
        let two = match *self {
            Gate::Cx { .. } => CMatrix::from_row_slice(4, 4, &[l, o, o, o, o, l, o, o, o, o, o, l, o, o, l, o]),
            _ => CMatrix::from_diagonal(&nalgebra::DVector::from_vec(vec![l, l, l, -l])),
        };
        embed_operator(&two, &self.qubits(), n_qubits)
    }

    /// `rho <- G rho G^dag`, with optional flip-angle error on single-qubit
    /// rotations.
    pub fn apply(&self, rho: &mut DensityMatrix, epsilon: f64) -> Result<()> {
        for q in self.qubits() {
            rho.check_qubit(q)?;
        }
        if let Some(m) = self.local_matrix(epsilon) {
            rho.conjugate_local(self.qubits()[0], &m);
            return Ok(());
        }
        let n = rho.n_qubits();
        match *self {
            Gate::Cx { control, target } => {
                if control == target {
                    return Err(Error::DuplicateTarget(control));
                }
                let (cm, tm) = (qubit_mask(n, control), qubit_mask(n, target));
                let perm = |i: usize| if i & cm != 0 { i ^ tm } else { i };
                let old = rho.data().clone();
                let data = rho.data_mut();
                for i in 0..old.nrows() {
                    for j in 0..old.ncols() {
                        data[(i, j)] = old[(perm(i), perm(j))];
                    }
                }
            }
            Gate::Cz(a, b) => {
                if a == b {
                    return Err(Error::DuplicateTarget(a));
                }
                let mask = qubit_mask(n, a) | qubit_mask(n, b);
                let sign = |i: usize| if i & mask == mask { -1.0 } else { 1.0 };
                let data = rho.data_mut();
                for i in 0..data.nrows() {
                    for j in 0..data.ncols() {
                        data[(i, j)] *= sign(i) * sign(j);
                    }
                }
            }
            _ => unreachable!(),
        }
        Ok(())
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Gate::Rot { qubit, angle, phase } => {
                let axis = if phase == 0.0 { "X" } else if phase == FRAC_PI_2 { "Y" } else { "R" };
                if axis == "R" {
                    write!(f, "R{}({angle},{phase})", qubit + 1)
                } else if angle == FRAC_PI_2 {
                    write!(f, "{axis}{}", qubit + 1)
                } else if angle == -FRAC_PI_2 {
                    write!(f, "{axis}b{}", qubit + 1)
                } else {
                    write!(f, "R{axis}{}({angle})", qubit + 1)
                }
            }
            Gate::H(q) => write!(f, "H{}", q + 1),
            Gate::Cx { control, target } => write!(f, "CNOT{}{}", control + 1, target + 1),
            Gate::Cz(a, b) => write!(f, "CZ{}{}", a + 1, b + 1),
        }
    }
}

/// Parses a dotted product such as `CNOT23.Yb3.CNOT12.Yb2.Yb1` into gates in
/// application order (rightmost first).
///
/// Qubits are 1-based in the text. `Xk`/`Yk` are +pi/2 rotations, `Xbk`/`Ybk`
/// their inverses, `CNOTab` has control `a`, and a bare `CNOT` means
/// `CNOT12`.
pub fn parse_circuit(text: &str) -> Result<Vec<Gate>> {
    let mut gates = Vec::new();
    for token in text.split('.').map(str::trim).rev() {
        gates.push(parse_token(token)?);
    }
    Ok(gates)
}

/// Formats gates (application order) back into the dotted notation.
pub fn format_circuit(gates: &[Gate]) -> String {
    gates.iter().rev().map(Gate::to_string).collect::<Vec<_>>().join(".")
}

fn parse_token(token: &str) -> Result<Gate> {
    let bad = || Error::Parse(format!("unrecognized gate {token:?}"));
    let index = |s: &str| -> Result<usize> {
        match s.parse::<usize>() {
            Ok(k) if k >= 1 => Ok(k - 1),
            _ => Err(bad()),
        }
    };
    if let Some(rest) = token.strip_prefix("CNOT") {
        if rest.is_empty() {
            return Ok(Gate::Cx { control: 0, target: 1 });
        }
        let digits: Vec<char> = rest.chars().collect();
        if digits.len() != 2 {
            return Err(bad());
        }
        return Ok(Gate::Cx { control: index(&digits[0].to_string())?, target: index(&digits[1].to_string())? });
    }
    if let Some(rest) = token.strip_prefix('H') {
        return Ok(Gate::H(index(rest)?));
    }
    let (axis, rest) = token.split_at(1.min(token.len()));
    let (angle, rest) = match rest.strip_prefix('b') {
        Some(r) => (-FRAC_PI_2, r),
        None => (FRAC_PI_2, rest),
    };
    let q = index(rest)?;
    match axis {
        "X" => Ok(Gate::Rot { qubit: q, angle, phase: 0.0 }),
        "Y" => Ok(Gate::Rot { qubit: q, angle, phase: FRAC_PI_2 }),
        _ => Err(bad()),
    }
}

/// Unitary of a gate list in application order.
pub fn circuit_unitary(gates: &[Gate], n_qubits: usize) -> Result<CMatrix> {
    let dim = 1 << n_qubits;
    gates.iter().try_fold(CMatrix::identity(dim, dim), |acc, g| Ok(g.unitary(n_qubits)? * acc))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::apply_unitary;

    #[test]
    fn parse_and_format() {
        let g = parse_circuit("CNOT23.Yb3.CNOT12.Yb2.Yb1").unwrap();
        assert_eq!(g[0], Gate::ry(0, -FRAC_PI_2));
        assert_eq!(g[4], Gate::Cx { control: 1, target: 2 });
        assert_eq!(format_circuit(&g), "CNOT23.Yb3.CNOT12.Yb2.Yb1");
        assert_eq!(parse_circuit("CNOT").unwrap(), vec![Gate::Cx { control: 0, target: 1 }]);
        assert!(parse_circuit("CNOT1").is_err());
        assert!(parse_circuit("Z1").is_err());
        assert!(parse_circuit("X0").is_err());
    }

    #[test]
    fn fast_apply_matches_full_unitary() {
        let n = 3;
        let psi: Vec<_> = (0..8).map(|k| c((k as f64 * 0.7).cos(), (k as f64 * 1.3).sin())).collect();
        let norm = psi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        let psi: Vec<_> = psi.into_iter().map(|z| z / norm).collect();
        let rho = DensityMatrix::from_pure(&psi).unwrap();
        for g in [
            Gate::Cx { control: 0, target: 2 },
            Gate::Cx { control: 2, target: 1 },
            Gate::Cz(0, 1),
            Gate::H(1),
            Gate::rx(2, 0.3),
            Gate::ry(0, -FRAC_PI_2),
        ] {
            let mut fast = rho.clone();
            g.apply(&mut fast, 0.0).unwrap();
            let full = apply_unitary(&rho, &g.unitary(n).unwrap(), &(0..n).collect::<Vec<_>>()).unwrap();
            assert!(fast.max_abs_diff(&full) < 1e-13, "{g}");
        }
    }

    #[test]
    fn hadamard_matrix() {
        let h = Gate::H(0).local_matrix(0.0).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((h[(0, 0)].re - s).abs() < 1e-15 && (h[(1, 1)].re + s).abs() < 1e-15);
        assert!((h[(0, 1)].re - s).abs() < 1e-15 && (h[(1, 0)].re - s).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_targets() {
        let mut rho = DensityMatrix::zero_state(2).unwrap();
        assert!(Gate::Cx { control: 0, target: 0 }.apply(&mut rho, 0.0).is_err());
        assert!(Gate::H(2).apply(&mut rho, 0.0).is_err());
    }
}
