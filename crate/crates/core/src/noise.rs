//! Decoherence channels and per-trajectory quasi-static detuning.
//!
//! Two layers of noise act on every qubit:
//!
//! * Markovian relaxation and dephasing, applied as a Kraus channel over
//!   every timing slot. This layer is not refocused by pi pulses.
//! * A quasi-static frequency offset drawn once per trajectory and applied
//!   as a Z rotation during free evolution. This is the slow component that
//!   dynamical decoupling removes.

use nalgebra::{DMatrix, Matrix4};
use num_complex::Complex64 as C64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::sim::{c, DensityMatrix, Mat2, Pauli};

pub(crate) const KRAUS_TOL: f64 = 1e-10;

/// Reported device ranges, in microseconds.
pub const T1_RANGE_US: (f64, f64) = (126.0, 151.0);
pub const T2_RANGE_US: (f64, f64) = (50.0, 66.0);
/// Single-qubit gate length in nanoseconds.
pub const GATE_TIME_NS: f64 = 35.5;

/// Detuning spread (rad/us) for which quasi-static coherence,
/// `exp(-sigma^2 t^2 / 2)`, halves at `t = 3 us`.
pub fn default_detuning_sigma() -> f64 {
    (2.0 * std::f64::consts::LN_2).sqrt() / 3.0
}

/// Coherence times of a single qubit.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct QubitNoise {
    pub t1_us: f64,
    pub t2_us: f64,
}

impl QubitNoise {
    pub fn new(t1_us: f64, t2_us: f64) -> Result<Self> {
        let q = Self { t1_us, t2_us };
        q.validate()?;
        Ok(q)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.t1_us > 0.0 && self.t2_us > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "coherence times must be positive (T1 = {}, T2 = {})",
                self.t1_us, self.t2_us
            )));
        }
        if self.t2_us > 2.0 * self.t1_us {
            return Err(Error::UnphysicalT2 { t1: self.t1_us, t2: self.t2_us });
        }
        Ok(())
    }

    /// Infinite coherence; idle channels reduce to the identity.
    pub fn ideal() -> Self {
        Self { t1_us: f64::INFINITY, t2_us: f64::INFINITY }
    }
}

/// Noise budget of a register.
#[derive(Clone, Debug, PartialEq)]
pub struct NoiseParams {
    pub qubits: Vec<QubitNoise>,
    /// Single-qubit gate duration, ns.
    pub gate_time_ns: f64,
    /// Two-qubit gate duration used during state preparation, ns.
    pub two_qubit_gate_time_ns: f64,
    /// Two-qubit depolarizing probability per entangling gate.
    pub two_qubit_error: f64,
    /// Symmetric readout bit-flip probability.
    pub readout_error: f64,
    /// Standard deviation of the quasi-static detuning, rad/us.
    pub detuning_sigma: f64,
    pub trajectories: usize,
}

impl NoiseParams {
    /// Device-like defaults: T1/T2 drawn uniformly from the reported ranges
    /// (then fixed), 1e-2 scale readout and two-qubit errors, and the
    /// quasi-static detuning of [`default_detuning_sigma`].
    pub fn calibrated(n_qubits: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(u64::MAX);
        let qubits = (0..n_qubits)
            .map(|_| QubitNoise {
                t1_us: rng.random_range(T1_RANGE_US.0..=T1_RANGE_US.1),
                t2_us: rng.random_range(T2_RANGE_US.0..=T2_RANGE_US.1),
            })
            .collect();
        Self {
            qubits,
            gate_time_ns: GATE_TIME_NS,
            two_qubit_gate_time_ns: 400.0,
            two_qubit_error: 0.02,
            readout_error: 0.02,
            detuning_sigma: default_detuning_sigma(),
            trajectories: 200,
        }
    }

    /// No decoherence, no detuning, no readout error.
    pub fn noiseless(n_qubits: usize) -> Self {
        Self {
            qubits: vec![QubitNoise::ideal(); n_qubits],
            gate_time_ns: GATE_TIME_NS,
            two_qubit_gate_time_ns: 400.0,
            two_qubit_error: 0.0,
            readout_error: 0.0,
            detuning_sigma: 0.0,
            trajectories: 1,
        }
    }

    pub fn n_qubits(&self) -> usize {
        self.qubits.len()
    }

    pub fn validate(&self) -> Result<()> {
        for q in &self.qubits {
            q.validate()?;
        }
        let positive = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::InvalidConfig(format!("{what} must be positive, got {v}")))
            }
        };
        positive(self.gate_time_ns, "gate time")?;
        positive(self.two_qubit_gate_time_ns, "two-qubit gate time")?;
        if !(0.0..=1.0).contains(&self.two_qubit_error) {
            return Err(Error::InvalidConfig(format!("two-qubit error {} outside [0, 1]", self.two_qubit_error)));
        }
        if !(0.0..=0.5).contains(&self.readout_error) {
            return Err(Error::InvalidConfig(format!("readout error {} outside [0, 0.5]", self.readout_error)));
        }
        if !(self.detuning_sigma >= 0.0 && self.detuning_sigma.is_finite()) {
            return Err(Error::InvalidConfig(format!("detuning sigma {} must be >= 0", self.detuning_sigma)));
        }
        if self.trajectories == 0 {
            return Err(Error::InvalidConfig("trajectory count must be positive".into()));
        }
        Ok(())
    }
}

/// Completely positive trace-preserving single-qubit map.
#[derive(Clone, Debug, PartialEq)]
pub struct KrausChannel {
    ops: Vec<Mat2>,
}

impl KrausChannel {
    pub fn new(ops: Vec<Mat2>) -> Result<Self> {
        let ch = Self { ops };
        let deviation = ch.completeness_deviation();
        if ch.ops.is_empty() || deviation > KRAUS_TOL {
            return Err(Error::IncompleteKraus { deviation });
        }
        Ok(ch)
    }

    pub fn identity() -> Self {
        Self { ops: vec![Mat2::identity()] }
    }

    pub fn operators(&self) -> &[Mat2] {
        &self.ops
    }

    /// Max elementwise deviation of `sum_k K_k^dag K_k` from `I`.
    pub fn completeness_deviation(&self) -> f64 {
        let sum: Mat2 = self.ops.iter().map(|k| k.adjoint() * k).sum();
        (sum - Mat2::identity()).iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// `self` followed by `next`.
    pub fn then(&self, next: &KrausChannel) -> KrausChannel {
        let ops = next.ops.iter().flat_map(|b| self.ops.iter().map(move |a| b * a)).collect();
        KrausChannel { ops }
    }

    /// Row-major Liouville matrix `sum_k K_k (x) conj(K_k)`, acting on
    /// `(rho00, rho01, rho10, rho11)`.
    pub fn superoperator(&self) -> Superop {
        self.ops.iter().map(unitary_superoperator).sum()
    }

    /// Action on an arbitrary 2x2 operator.
    pub fn apply(&self, rho: &Mat2) -> Mat2 {
        self.ops.iter().map(|k| k * rho * k.adjoint()).sum()
    }

    /// Energy relaxation toward `|0>` with decay probability `gamma`.
    pub fn amplitude_damping(gamma: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&gamma) {
            return Err(Error::InvalidConfig(format!("damping probability {gamma} outside [0, 1]")));
        }
        let o = c(0.0, 0.0);
        let k0 = Mat2::new(c(1.0, 0.0), o, o, c((1.0 - gamma).sqrt(), 0.0));
        let k1 = Mat2::new(o, c(gamma.sqrt(), 0.0), o, o);
        Self::new(vec![k0, k1])
    }

    /// Pure dephasing that multiplies off-diagonals by `coherence`.
    pub fn phase_damping(coherence: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&coherence) {
            return Err(Error::InvalidConfig(format!("coherence factor {coherence} outside [0, 1]")));
        }
        let keep = ((1.0 + coherence) / 2.0).sqrt();
        let flip = ((1.0 - coherence) / 2.0).sqrt();
        Self::new(vec![Mat2::identity() * c(keep, 0.0), Pauli::Z.matrix() * c(flip, 0.0)])
    }
}

/// Single-qubit map in row-major Liouville form; composition is matrix
/// product, later maps on the left.
pub type Superop = Matrix4<C64>;

/// `M (x) conj(M)`, the Liouville matrix of `rho -> M rho M^dag`.
pub fn unitary_superoperator(m: &Mat2) -> Superop {
    Superop::from_fn(|r, col| m[(r / 2, col / 2)] * m[(r % 2, col % 2)].conj())
}

/// Markovian decoherence over an idle period of `duration_ns`.
///
/// Amplitude damping with `gamma = 1 - exp(-t/T1)` composed with pure
/// dephasing at rate `1/T_phi = 1/T2 - 1/(2 T1)`, so the total off-diagonal
/// decay is `exp(-t/T2)`.
pub fn idle_channel(duration_ns: f64, qubit: QubitNoise) -> Result<KrausChannel> {
    if duration_ns.is_nan() || duration_ns < 0.0 {
        return Err(Error::InvalidConfig(format!("negative idle duration {duration_ns}")));
    }
    if qubit.t2_us > 2.0 * qubit.t1_us {
        return Err(Error::UnphysicalT2 { t1: qubit.t1_us, t2: qubit.t2_us });
    }
    let t_us = duration_ns * 1e-3;
    if t_us == 0.0 {
        return Ok(KrausChannel::identity());
    }
    let gamma = 1.0 - (-t_us / qubit.t1_us).exp();
    let dephasing_rate = (1.0 / qubit.t2_us - 0.5 / qubit.t1_us).max(0.0);
    let coherence = (-t_us * dephasing_rate).exp();
    let damping = KrausChannel::amplitude_damping(gamma)?;
    if coherence >= 1.0 {
        return Ok(damping);
    }
    Ok(damping.then(&KrausChannel::phase_damping(coherence)?))
}

/// One quasi-static detuning draw, `N(0, sigma)` in rad/us.
pub fn draw_detuning<R: Rng + ?Sized>(rng: &mut R, sigma: f64) -> f64 {
    if sigma <= 0.0 {
        return 0.0;
    }
    Normal::new(0.0, sigma).expect("finite positive sigma").sample(rng)
}

/// Symmetric two-qubit depolarizing: with probability `p` the pair is
/// replaced by the maximally mixed state.
pub(crate) fn depolarize_pair(rho: &mut DensityMatrix, a: usize, b: usize, p: f64) {
    if p <= 0.0 {
        return;
    }
    let paulis = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];
    let mut twirled: DMatrix<C64> = DMatrix::zeros(rho.dim(), rho.dim());
    for pa in paulis {
        for pb in paulis {
            let mut term = rho.clone();
            term.conjugate_local(a, &pa.matrix());
            term.conjugate_local(b, &pb.matrix());
            twirled += term.data();
        }
    }
    let mixed = twirled * c(1.0 / 16.0, 0.0);
    let out = rho.data() * c(1.0 - p, 0.0) + mixed * c(p, 0.0);
    *rho.data_mut() = out;
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{apply_kraus_channel, expectation_pauli};
    use std::f64::consts::FRAC_1_SQRT_2;

    fn plus() -> DensityMatrix {
        let h = c(FRAC_1_SQRT_2, 0.0);
        DensityMatrix::from_pure(&[h, h]).unwrap()
    }

    #[test]
    fn zero_duration_is_identity() {
        let ch = idle_channel(0.0, QubitNoise::new(140.0, 58.0).unwrap()).unwrap();
        let rho = plus();
        assert_eq!(apply_kraus_channel(&rho, &ch, 0).unwrap(), rho);
    }

    #[test]
    fn unit_duration_decay_factors() {
        let q = QubitNoise::new(140.0, 58.0).unwrap();
        let ch = idle_channel(840.0, q).unwrap();
        let out = apply_kraus_channel(&plus(), &ch, 0).unwrap();
        // coherence exp(-0.84/58), off-diagonal starts at 1/2
        let expected = 0.5 * (-0.84f64 / 58.0).exp();
        assert!((out.data()[(0, 1)].re - expected).abs() < 1e-12);
        assert!((expected - 0.49281).abs() < 1e-5);
        let excited = DensityMatrix::basis_state(1, 1).unwrap();
        let out = apply_kraus_channel(&excited, &ch, 0).unwrap();
        let gamma = 1.0 - (-0.84f64 / 140.0).exp();
        assert!((out.data()[(0, 0)].re - gamma).abs() < 1e-12);
        assert!((gamma - 0.00598).abs() < 1e-5);
    }

    #[test]
    fn phase_damping_example() {
        let ch = KrausChannel::phase_damping(0.98562).unwrap();
        let out = apply_kraus_channel(&plus(), &ch, 0).unwrap();
        assert!((out.data()[(0, 1)].re - 0.49281).abs() < 1e-12);
    }

    #[test]
    fn full_damping_relaxes_to_ground() {
        let ch = KrausChannel::amplitude_damping(1.0).unwrap();
        let out = apply_kraus_channel(&DensityMatrix::basis_state(1, 1).unwrap(), &ch, 0).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::zero_state(1).unwrap()) < 1e-15);

        let long = idle_channel(1e9, QubitNoise::new(140.0, 58.0).unwrap()).unwrap();
        let out = apply_kraus_channel(&plus(), &long, 0).unwrap();
        assert!(out.max_abs_diff(&DensityMatrix::zero_state(1).unwrap()) < 1e-12);
    }

    #[test]
    fn unphysical_t2_rejected() {
        assert!(matches!(QubitNoise::new(10.0, 25.0), Err(Error::UnphysicalT2 { .. })));
        let q = QubitNoise { t1_us: 10.0, t2_us: 25.0 };
        assert!(matches!(idle_channel(10.0, q), Err(Error::UnphysicalT2 { .. })));
        // T2 = 2 T1 is the pure relaxation limit and is allowed.
        assert!(idle_channel(10.0, QubitNoise::new(10.0, 20.0).unwrap()).is_ok());
    }

    #[test]
    fn incomplete_kraus_rejected() {
        let half = Mat2::identity() * c(0.5, 0.0);
        assert!(matches!(KrausChannel::new(vec![half]), Err(Error::IncompleteKraus { .. })));
    }

    #[test]
    fn semigroup_composition() {
        let q = QubitNoise::new(131.0, 61.0).unwrap();
        let whole = idle_channel(1300.0, q).unwrap();
        let split = idle_channel(500.0, q).unwrap().then(&idle_channel(800.0, q).unwrap());
        for basis in 0..4 {
            let mut e = Mat2::zeros();
            e[(basis / 2, basis % 2)] = c(1.0, 0.0);
            let diff = whole.apply(&e) - split.apply(&e);
            assert!(diff.iter().all(|z| z.norm() < 1e-9));
        }
    }

    #[test]
    fn zero_sigma_detuning_is_zero() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        assert_eq!(draw_detuning(&mut rng, 0.0), 0.0);
    }

    #[test]
    fn detuning_moments() {
        let sigma = 0.4;
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        let n = 100_000;
        let draws: Vec<f64> = (0..n).map(|_| draw_detuning(&mut rng, sigma)).collect();
        let mean = draws.iter().sum::<f64>() / n as f64;
        let var = draws.iter().map(|d| (d - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        assert!(mean.abs() < 4.0 * sigma / (n as f64).sqrt());
        assert!((var / (sigma * sigma) - 1.0).abs() < 0.05);
    }

    #[test]
    fn pair_depolarizing_mixes_bell_state() {
        let h = c(FRAC_1_SQRT_2, 0.0);
        let o = c(0.0, 0.0);
        let mut rho = DensityMatrix::from_pure(&[h, o, o, h]).unwrap();
        depolarize_pair(&mut rho, 0, 1, 1.0);
        assert!(rho.max_abs_diff(&DensityMatrix::maximally_mixed(2).unwrap()) < 1e-15);

        let mut rho = DensityMatrix::from_pure(&[h, o, o, h]).unwrap();
        depolarize_pair(&mut rho, 0, 1, 0.1);
        let zz = expectation_pauli(&rho, &"ZZ".parse().unwrap()).unwrap();
        assert!((zz - 0.9).abs() < 1e-12);
        rho.validate().unwrap();
    }

    #[test]
    fn calibrated_defaults_in_reported_ranges() {
        let p = NoiseParams::calibrated(4, 99);
        p.validate().unwrap();
        for q in &p.qubits {
            assert!((T1_RANGE_US.0..=T1_RANGE_US.1).contains(&q.t1_us));
            assert!((T2_RANGE_US.0..=T2_RANGE_US.1).contains(&q.t2_us));
        }
        assert_eq!(p, NoiseParams::calibrated(4, 99));
        let half = (-default_detuning_sigma().powi(2) * 9.0 / 2.0).exp();
        assert!((half - 0.5).abs() < 1e-12);
    }
}
