//! The four benchmark entangled states.

use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::gates::Gate;
use crate::noise::{depolarize_pair, idle_channel, NoiseParams};
use crate::pulses::PulseErrorModel;
use crate::sim::{c, DensityMatrix};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum StateKind {
    Triplet2,
    Ghz3,
    Ghz4,
    Cluster4,
}

impl StateKind {
    pub const ALL: [StateKind; 4] = [StateKind::Triplet2, StateKind::Ghz3, StateKind::Ghz4, StateKind::Cluster4];

    pub fn n_qubits(self) -> usize {
        match self {
            StateKind::Triplet2 => 2,
            StateKind::Ghz3 => 3,
            StateKind::Ghz4 | StateKind::Cluster4 => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            StateKind::Triplet2 => "triplet2",
            StateKind::Ghz3 => "ghz3",
            StateKind::Ghz4 => "ghz4",
            StateKind::Cluster4 => "cluster4",
        }
    }
}

impl fmt::Display for StateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for StateKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        StateKind::ALL
            .into_iter()
            .find(|k| k.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown state {s:?} (expected triplet2, ghz3, ghz4 or cluster4)")))
    }
}

/// Preparation circuit from `|0...0>`, as moments of gates that run in
/// parallel.
///
/// The cluster state is the CZ-chain cluster with a Hadamard appended on
/// both end qubits; in that frame its stabilizers are `Z1Z2`, `Z3Z4`,
/// `X1X2Z3` and `Z2X3X4`, which is what the four-qubit cluster witness
/// detects.
pub fn preparation_circuit(kind: StateKind) -> Vec<Vec<Gate>> {
    let cx = |control, target| Gate::Cx { control, target };
    match kind {
        StateKind::Triplet2 => vec![vec![Gate::x(1), Gate::H(0)], vec![cx(0, 1)]],
        StateKind::Ghz3 => vec![vec![Gate::H(0)], vec![cx(0, 1)], vec![cx(1, 2)]],
        StateKind::Ghz4 => vec![vec![Gate::H(0)], vec![cx(0, 1)], vec![cx(1, 2)], vec![cx(2, 3)]],
        StateKind::Cluster4 => vec![
            (0..4).map(Gate::H).collect(),
            vec![Gate::Cz(0, 1), Gate::Cz(2, 3)],
            vec![Gate::Cz(1, 2)],
            vec![Gate::H(0), Gate::H(3)],
        ],
    }
}

/// Noise-free target state.
pub fn prepare_ideal(kind: StateKind) -> DensityMatrix {
    let n = kind.n_qubits();
    let dim = 1usize << n;
    let mut amps = vec![c(0.0, 0.0); dim];
    let h = c(FRAC_1_SQRT_2, 0.0);
    match kind {
        StateKind::Triplet2 => {
            amps[0b01] = h;
            amps[0b10] = h;
        }
        StateKind::Ghz3 | StateKind::Ghz4 => {
            amps[0] = h;
            amps[dim - 1] = h;
        }
        StateKind::Cluster4 => {
            let mut rho = DensityMatrix::zero_state(n).expect("4 qubits is supported");
            for moment in preparation_circuit(kind) {
                for g in moment {
                    g.apply(&mut rho, 0.0).expect("valid preparation gate");
                }
            }
            return rho;
        }
    }
    DensityMatrix::from_pure(&amps).expect("normalized amplitudes")
}

/// Runs the preparation circuit with gate noise: every moment idles all
/// qubits for its duration (single- or two-qubit gate time), single-qubit
/// rotations carry the systematic flip-angle error, and every entangling
/// gate is followed by two-qubit depolarizing noise.
pub fn prepare_noisy(kind: StateKind, noise: &NoiseParams, err: &PulseErrorModel) -> Result<DensityMatrix> {
    let n = kind.n_qubits();
    if noise.n_qubits() != n {
        return Err(Error::DimensionMismatch { expected: n, found: noise.n_qubits() });
    }
    noise.validate()?;
    err.validate()?;
    let single = noise.qubits.iter().map(|&q| idle_channel(noise.gate_time_ns, q)).collect::<Result<Vec<_>>>()?;
    let double = noise
        .qubits
        .iter()
        .map(|&q| idle_channel(noise.two_qubit_gate_time_ns, q))
        .collect::<Result<Vec<_>>>()?;
    let mut rho = DensityMatrix::zero_state(n)?;
    for moment in preparation_circuit(kind) {
        let entangling = moment.iter().any(Gate::is_two_qubit);
        for g in &moment {
            g.apply(&mut rho, err.epsilon_systematic)?;
            if let (true, [a, b]) = (g.is_two_qubit(), g.qubits().as_slice()) {
                depolarize_pair(&mut rho, *a, *b, noise.two_qubit_error);
            }
        }
        let channels = if entangling { &double } else { &single };
        for (q, ch) in channels.iter().enumerate() {
            rho.apply_channel_local(q, ch);
        }
    }
    Ok(rho)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{expectation_pauli, PauliString};

    fn ev(rho: &DensityMatrix, p: &str) -> f64 {
        expectation_pauli(rho, &p.parse::<PauliString>().unwrap()).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for k in StateKind::ALL {
            assert_eq!(k.as_str().parse::<StateKind>().unwrap(), k);
        }
        assert_eq!("GHZ3".parse::<StateKind>().unwrap(), StateKind::Ghz3);
        assert!("bell".parse::<StateKind>().is_err());
    }

    #[test]
    fn triplet_correlations() {
        let rho = prepare_ideal(StateKind::Triplet2);
        assert!((ev(&rho, "XX") - 1.0).abs() < 1e-12);
        assert!((ev(&rho, "YY") - 1.0).abs() < 1e-12);
        assert!((ev(&rho, "ZZ") + 1.0).abs() < 1e-12);
    }

    #[test]
    fn ghz3_correlations() {
        let rho = prepare_ideal(StateKind::Ghz3);
        assert!((ev(&rho, "XXX") - 1.0).abs() < 1e-12);
        for p in ["ZZI", "ZIZ", "IZZ"] {
            assert!((ev(&rho, p) - 1.0).abs() < 1e-12);
        }
        for p in ["XYY", "YXY", "YYX"] {
            assert!((ev(&rho, p) + 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn cluster_stabilizers() {
        let rho = prepare_ideal(StateKind::Cluster4);
        for p in ["ZZII", "IIZZ", "XXZI", "IZXX"] {
            assert!((ev(&rho, p) - 1.0).abs() < 1e-12, "{p}");
        }
        assert!((rho.purity() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn circuits_reproduce_ideal_states() {
        for k in StateKind::ALL {
            let rho = prepare_noisy(k, &NoiseParams::noiseless(k.n_qubits()), &PulseErrorModel::ideal()).unwrap();
            assert!(rho.max_abs_diff(&prepare_ideal(k)) < 1e-12, "{k}");
        }
    }

    #[test]
    fn noisy_preparation_is_a_valid_state() {
        for k in StateKind::ALL {
            let rho = prepare_noisy(k, &NoiseParams::calibrated(k.n_qubits(), 3), &PulseErrorModel::calibrated()).unwrap();
            rho.validate().unwrap();
            assert!(rho.purity() < 1.0);
        }
    }

    #[test]
    fn register_size_must_match() {
        assert!(prepare_noisy(StateKind::Ghz3, &NoiseParams::noiseless(2), &PulseErrorModel::ideal()).is_err());
    }
}
