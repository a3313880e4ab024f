//! Single-qubit gates in the device parameterization and error-afflicted
//! pi pulses.

use crate::error::{Error, Result};
use crate::sim::{c, Mat2, Pauli};

/// `G(alpha, beta, gamma)`, the general single-qubit gate
///
/// ```text
/// [[ cos(a/2),            -e^{i g} sin(a/2)     ],
///  [ e^{i b} sin(a/2),     e^{i(b+g)} cos(a/2)  ]]
/// ```
pub fn gate_matrix(alpha: f64, beta: f64, gamma: f64) -> Mat2 {
    let (s, co) = (alpha / 2.0).sin_cos();
    let eb = c(0.0, beta).exp();
    let eg = c(0.0, gamma).exp();
    Mat2::new(c(co, 0.0), -eg * s, eb * s, eb * eg * co)
}

/// `exp(-i theta/2 (cos(phi) X + sin(phi) Y))`.
pub fn equatorial_rotation(theta: f64, phi: f64) -> Mat2 {
    let (s, co) = (theta / 2.0).sin_cos();
    let axis = Pauli::X.matrix() * c(phi.cos(), 0.0) + Pauli::Y.matrix() * c(phi.sin(), 0.0);
    Mat2::identity() * c(co, 0.0) - axis * c(0.0, s)
}

pub fn rx(theta: f64) -> Mat2 {
    equatorial_rotation(theta, 0.0)
}

pub fn ry(theta: f64) -> Mat2 {
    equatorial_rotation(theta, std::f64::consts::FRAC_PI_2)
}

/// `exp(-i theta Z / 2)`.
pub fn rz(theta: f64) -> Mat2 {
    let o = c(0.0, 0.0);
    Mat2::new(c(0.0, -theta / 2.0).exp(), o, o, c(0.0, theta / 2.0).exp())
}

/// Flip-angle (pulse area) error of the decoupling pulses.
///
/// Every pi pulse of a trajectory rotates by `pi (1 + e)` where
/// `e = epsilon_systematic + trajectory draw`, the draw being Gaussian with
/// spread `epsilon_random_sigma`.
#[derive(Copy, Clone, Debug, Default, PartialEq)]
pub struct PulseErrorModel {
    pub epsilon_systematic: f64,
    pub epsilon_random_sigma: f64,
}

impl PulseErrorModel {
    pub fn ideal() -> Self {
        Self::default()
    }

    pub fn systematic(epsilon: f64) -> Self {
        Self { epsilon_systematic: epsilon, epsilon_random_sigma: 0.0 }
    }

    /// Small over-rotation consistent with ~1e-3 single-gate error.
    pub fn calibrated() -> Self {
        Self { epsilon_systematic: 0.01, epsilon_random_sigma: 0.01 }
    }

    pub fn validate(&self) -> Result<()> {
        if self.epsilon_systematic.is_nan() || self.epsilon_systematic.abs() >= 0.5 {
            return Err(Error::InvalidConfig(format!(
                "systematic flip-angle error {} must satisfy |e| < 0.5",
                self.epsilon_systematic
            )));
        }
        if !(self.epsilon_random_sigma >= 0.0 && self.epsilon_random_sigma < 0.5) {
            return Err(Error::InvalidConfig(format!(
                "random flip-angle spread {} must lie in [0, 0.5)",
                self.epsilon_random_sigma
            )));
        }
        Ok(())
    }
}

/// Pi pulse about the equatorial axis at angle `phi`.
///
/// Without error this is `G(pi, phi - pi/2, pi/2 - phi)`, which equals
/// `-i (cos(phi) X + sin(phi) Y)`. With error the rotation angle is
/// `pi (1 + e)`.
pub fn pi_pulse(phi: f64, err: &PulseErrorModel, trajectory_epsilon: f64) -> Mat2 {
    let e = err.epsilon_systematic + trajectory_epsilon;
    if e == 0.0 {
        gate_matrix(std::f64::consts::PI, phi - std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2 - phi)
    } else {
        equatorial_rotation(std::f64::consts::PI * (1.0 + e), phi)
    }
}

/// Equality up to a global phase, as `1 - |Tr(A^dag B)| / 2`.
pub fn phase_insensitive_distance(a: &Mat2, b: &Mat2) -> f64 {
    1.0 - (a.adjoint() * b).trace().norm() / 2.0
}
