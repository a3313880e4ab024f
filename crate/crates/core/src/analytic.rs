//! First-order error accumulation over repeated units, and the sequence
//! fidelity used to compare propagators.
//!
//! To first order in the pulse error `epsilon`, one unit acts as
//! `[[1, i C eps], [i C* eps, 1]]`. A global phase `theta` on a unit turns
//! `C` into `C exp(-i theta)`, so `M` units add up to an off-diagonal of
//! `i Z M C eps` with `Z = (1/M) sum exp(-i theta_s)`. Standard repetition
//! (`Z = 1`) grows linearly in `M`; correlated randomization (`Z = 0`)
//! removes the first-order term.

use num_complex::Complex64 as C64;

use crate::dd::{z_factor, DDSchedule};
use crate::error::{Error, Result};
use crate::sim::{c, Mat2};

/// Structure constant `C` of a unit and the error magnitude `epsilon`.
/// Meaningful for `|C epsilon| << 1` only.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ErrorModelParams {
    pub c: C64,
    pub epsilon: f64,
}

impl ErrorModelParams {
    pub fn new(c: C64, epsilon: f64) -> Self {
        Self { c, epsilon }
    }
}

/// `[[1, i C eps], [i C* eps, 1]]`; not unitary beyond first order.
pub fn unit_error_propagator(p: ErrorModelParams) -> Mat2 {
    first_order(p.c * p.epsilon)
}

/// First-order propagator of the whole schedule, off-diagonal
/// `i Z M C eps`.
pub fn accumulated_propagator(p: ErrorModelParams, schedule: &DDSchedule) -> Mat2 {
    let m = schedule.m() as f64;
    first_order(z_factor(schedule) * m * p.c * p.epsilon)
}

fn first_order(x: C64) -> Mat2 {
    let i = c(0.0, 1.0);
    Mat2::new(c(1.0, 0.0), i * x, i * x.conj(), c(1.0, 0.0))
}

/// `F = |Tr(U_target^dag U_seq)| / 2` and the infidelity `1 - F`.
pub fn sequence_fidelity(u_seq: &Mat2, u_target: &Mat2) -> (f64, f64) {
    let f = (u_target.adjoint() * u_seq).trace().norm() / 2.0;
    (f, 1.0 - f)
}

/// `(-1)^(n/2) exp(i beta Z / 2)` with `beta = 2 sum_k (phi_2k - phi_2k-1)`.
pub fn target_propagator(phases: &[f64]) -> Result<Mat2> {
    if !phases.len().is_multiple_of(2) {
        return Err(Error::OddPhaseCount(phases.len()));
    }
    let beta = 2.0 * phases.chunks(2).map(|p| p[1] - p[0]).sum::<f64>();
    let sign = if (phases.len() / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let o = c(0.0, 0.0);
    Ok(Mat2::new(c(0.0, beta / 2.0).exp(), o, o, c(0.0, -beta / 2.0).exp()) * c(sign, 0.0))
}

/// `C` read off a simulated one-unit propagator, `u_01 / (i eps)`.
pub fn fit_structure_constant(unit_propagator: &Mat2, epsilon: f64) -> C64 {
    unit_propagator[(0, 1)] / c(0.0, epsilon)
}
