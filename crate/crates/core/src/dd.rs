//! Universally robust decoupling sequences and their repetition schedules.
//!
//! A unit of `n` pi pulses with phases `phi_1..phi_n` is laid out as
//! `F(tau/2) U(phi_n) F(tau) ... F(tau) U(phi_1) F(tau/2)` (operator order,
//! so `phi_1` fires first). A schedule repeats the unit `m` times, adding a
//! global phase `theta_s` to every pulse of repetition `s`:
//!
//! * standard: one common phase for all repetitions,
//! * phase randomized: independent uniform phases,
//! * correlated: phases grouped into blocks of 2 and 3 whose unit phasors
//!   cancel, so `Z = (1/m) sum exp(-i theta_s)` vanishes exactly.

use std::f64::consts::{PI, TAU};
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64 as C64;
use rand::Rng;

use crate::error::{Error, Result};
use crate::pulses::{pi_pulse, rz, PulseErrorModel};
use crate::sim::Mat2;

/// Free-evolution delay between pulses, ns.
pub const TAU_NS: f64 = 70.0;
/// Each `tau` is realized as this many identity slots.
pub const SLOTS_PER_DELAY: usize = 2;

const ANGLE_SNAP: f64 = 1e-12;

/// Reduces an angle to `[0, 2pi)`, snapping values within 1e-12 rad of
/// `2pi` to zero.
pub fn normalize_angle(x: f64) -> f64 {
    let r = x.rem_euclid(TAU);
    if TAU - r < ANGLE_SNAP {
        0.0
    } else {
        r
    }
}

/// Phases of the `n`-pulse URDD sequence,
/// `phi_k = (k-1)(k-2)/2 * Phi + (k-1) * phi2 (mod 2pi)`,
/// with `Phi = pi/m` for `n = 4m` and `Phi = 2m pi/(2m+1)` for `n = 4m+2`
/// (positive branch).
pub fn urdd_phases(n: usize, phi2: f64) -> Result<Vec<f64>> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(Error::InvalidPulseCount(n));
    }
    // Phi as a fraction of a full turn, num/den, kept in integers so that
    // the quadratic term is reduced exactly.
    let (num, den) = if n.is_multiple_of(4) {
        let m = (n / 4) as u64;
        (1, 2 * m)
    } else {
        let m = ((n - 2) / 4) as u64;
        (m, 2 * m + 1)
    };
    let phi2_turns = phi2 / TAU;
    Ok((1..=n as u64)
        .map(|k| {
            let tri = (k - 1) * k.saturating_sub(2) / 2;
            let quad_turns = ((tri * num) % den) as f64 / den as f64;
            let lin_turns = ((k - 1) as f64 * phi2_turns).rem_euclid(1.0);
            let turns = (quad_turns + lin_turns).rem_euclid(1.0);
            normalize_angle(turns * TAU)
        })
        .collect())
}

/// One decoupling unit: pulse phases plus timing.
#[derive(Clone, Debug, PartialEq)]
pub struct DDUnitSpec {
    phases: Vec<f64>,
    tau_ns: f64,
    pulse_ns: f64,
}

impl DDUnitSpec {
    pub fn new(phases: Vec<f64>, tau_ns: f64, pulse_ns: f64) -> Result<Self> {
        if phases.len() < 4 || !phases.len().is_multiple_of(2) {
            return Err(Error::InvalidPulseCount(phases.len()));
        }
        if !(tau_ns > 0.0 && pulse_ns > 0.0) {
            return Err(Error::InvalidConfig(format!("non-positive timing tau = {tau_ns} ns, pulse = {pulse_ns} ns")));
        }
        let phases = phases.into_iter().map(normalize_angle).collect();
        Ok(Self { phases, tau_ns, pulse_ns })
    }

    /// `n`-pulse URDD unit with device timing.
    pub fn urdd(n: usize, phi2: f64) -> Result<Self> {
        Self::new(urdd_phases(n, phi2)?, TAU_NS, crate::noise::GATE_TIME_NS)
    }

    /// The 8-pulse unit `(0, pi/2, 3pi/2, pi, pi, 3pi/2, pi/2, 0)`.
    pub fn ur8() -> Self {
        Self::urdd(8, PI / 2.0).expect("n = 8 is a valid URDD order")
    }

    pub fn phases(&self) -> &[f64] {
        &self.phases
    }

    pub fn n_pulses(&self) -> usize {
        self.phases.len()
    }

    pub fn tau_ns(&self) -> f64 {
        self.tau_ns
    }

    pub fn pulse_ns(&self) -> f64 {
        self.pulse_ns
    }

    /// `n * pulse + (n-1) * tau + 2 * (tau/2)`.
    pub fn duration_ns(&self) -> f64 {
        let n = self.n_pulses() as f64;
        n * self.pulse_ns + (n - 1.0) * self.tau_ns + self.tau_ns
    }

    /// Number of gate slots (pulses plus identity slots) in one unit.
    pub fn slot_count(&self) -> usize {
        self.n_pulses() + (self.n_pulses() - 1) * SLOTS_PER_DELAY + 2
    }

    /// Events of one unit in time order, with `global_phase` added to every
    /// pulse axis.
    pub fn timeline(&self, global_phase: f64) -> Vec<TimedEvent> {
        let slot = self.tau_ns / SLOTS_PER_DELAY as f64;
        let mut events = Vec::with_capacity(self.slot_count());
        events.push(TimedEvent::Free { duration_ns: slot });
        for (k, &phi) in self.phases.iter().enumerate() {
            events.push(TimedEvent::Pulse { phase: normalize_angle(phi + global_phase), duration_ns: self.pulse_ns });
            if k + 1 < self.n_pulses() {
                for _ in 0..SLOTS_PER_DELAY {
                    events.push(TimedEvent::Free { duration_ns: slot });
                }
            }
        }
        events.push(TimedEvent::Free { duration_ns: slot });
        events
    }
}

/// Ordered list of timed events for a unit with global phase applied.
pub fn build_unit_timeline(unit: &DDUnitSpec, global_phase: f64) -> Vec<TimedEvent> {
    unit.timeline(global_phase)
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub enum TimedEvent {
    /// Identity slot.
    Free { duration_ns: f64 },
    /// Pi pulse about the equatorial axis at `phase`.
    Pulse { phase: f64, duration_ns: f64 },
}

impl TimedEvent {
    pub fn duration_ns(&self) -> f64 {
        match *self {
            TimedEvent::Free { duration_ns } | TimedEvent::Pulse { duration_ns, .. } => duration_ns,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RepetitionMode {
    Standard,
    PhaseRandomized,
    CorrelatedPhaseRandomized,
}

impl RepetitionMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RepetitionMode::Standard => "standard",
            RepetitionMode::PhaseRandomized => "pr",
            RepetitionMode::CorrelatedPhaseRandomized => "cpr",
        }
    }
}

impl fmt::Display for RepetitionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RepetitionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "standard" => Ok(RepetitionMode::Standard),
            "pr" => Ok(RepetitionMode::PhaseRandomized),
            "cpr" => Ok(RepetitionMode::CorrelatedPhaseRandomized),
            other => Err(Error::Parse(format!("unknown repetition mode {other:?}"))),
        }
    }
}

/// A unit repeated `m` times with per-repetition global phases.
#[derive(Clone, Debug, PartialEq)]
pub struct DDSchedule {
    unit: DDUnitSpec,
    global_phases: Vec<f64>,
    mode: RepetitionMode,
}

const CPR_TOL: f64 = 1e-12;

impl DDSchedule {
    /// Checks the mode invariant before wrapping.
    pub fn new(unit: DDUnitSpec, global_phases: Vec<f64>, mode: RepetitionMode) -> Result<Self> {
        if global_phases.is_empty() {
            return Err(Error::InvalidRepetitions { m: 0, reason: "a schedule needs at least one unit" });
        }
        let global_phases: Vec<f64> = global_phases.into_iter().map(normalize_angle).collect();
        match mode {
            RepetitionMode::Standard => {
                if global_phases.iter().any(|&t| t != global_phases[0]) {
                    return Err(Error::InvalidConfig("standard schedule needs one common global phase".into()));
                }
            }
            RepetitionMode::CorrelatedPhaseRandomized => {
                if global_phases.len() < 2 {
                    return Err(Error::InvalidRepetitions { m: 1, reason: "correlated randomization needs at least two units" });
                }
                let z = z_factor_of(&global_phases);
                if z.norm() > CPR_TOL {
                    return Err(Error::InvalidConfig(format!("correlated phases do not cancel (|Z| = {:.3e})", z.norm())));
                }
            }
            RepetitionMode::PhaseRandomized => {}
        }
        Ok(Self { unit, global_phases, mode })
    }

    pub fn unit(&self) -> &DDUnitSpec {
        &self.unit
    }

    pub fn global_phases(&self) -> &[f64] {
        &self.global_phases
    }

    pub fn mode(&self) -> RepetitionMode {
        self.mode
    }

    pub fn m(&self) -> usize {
        self.global_phases.len()
    }

    pub fn duration_ns(&self) -> f64 {
        self.m() as f64 * self.unit.duration_ns()
    }

    /// All events of all repetitions in time order.
    pub fn timeline(&self) -> Vec<TimedEvent> {
        self.global_phases.iter().flat_map(|&theta| self.unit.timeline(theta)).collect()
    }

    /// Plain-text log: a commented header carrying the unit, then one line
    /// per repetition with its index, global phase and the pulse phases
    /// actually applied.
    pub fn to_text(&self) -> String {
        let base: Vec<String> = self.unit.phases.iter().map(|p| fmt_angle(*p)).collect();
        let mut out = format!(
            "# mode={} n={} tau_ns={} pulse_ns={} base_phases={}\n# unit global_phase pulse_phases\n",
            self.mode,
            self.unit.n_pulses(),
            self.unit.tau_ns,
            self.unit.pulse_ns,
            base.join(",")
        );
        for (s, &theta) in self.global_phases.iter().enumerate() {
            out.push_str(&format!("{} {}", s + 1, fmt_angle(theta)));
            for &phi in &self.unit.phases {
                out.push(' ');
                out.push_str(&fmt_angle(normalize_angle(phi + theta)));
            }
            out.push('\n');
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut header: Option<(RepetitionMode, DDUnitSpec)> = None;
        let mut thetas = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix('#') {
                if rest.contains("mode=") {
                    header = Some(parse_header(rest)?);
                }
                continue;
            }
            let (_, unit) = header.as_ref().ok_or_else(|| Error::Parse("schedule line before header".into()))?;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 + unit.n_pulses() {
                return Err(Error::Parse(format!("expected {} fields, got {}: {line:?}", 2 + unit.n_pulses(), fields.len())));
            }
            let index: usize = fields[0].parse().map_err(|_| Error::Parse(format!("bad unit index in {line:?}")))?;
            if index != thetas.len() + 1 {
                return Err(Error::Parse(format!("unit index {index} out of sequence")));
            }
            let theta = parse_f64(fields[1])?;
            for (k, field) in fields[2..].iter().enumerate() {
                let applied = parse_f64(field)?;
                let expected = normalize_angle(unit.phases[k] + theta);
                let diff = (applied - expected).rem_euclid(TAU);
                if diff.min(TAU - diff) > 1e-9 {
                    return Err(Error::Parse(format!("pulse {} of unit {index} inconsistent with base phase", k + 1)));
                }
            }
            thetas.push(theta);
        }
        let (mode, unit) = header.ok_or_else(|| Error::Parse("missing schedule header".into()))?;
        Self::new(unit, thetas, mode)
    }
}

fn fmt_angle(x: f64) -> String {
    format!("{x:.16e}")
}

fn parse_f64(s: &str) -> Result<f64> {
    s.parse().map_err(|_| Error::Parse(format!("bad number {s:?}")))
}

fn parse_header(rest: &str) -> Result<(RepetitionMode, DDUnitSpec)> {
    let mut mode = None;
    let mut tau = None;
    let mut pulse = None;
    let mut phases = None;
    for kv in rest.split_whitespace() {
        let Some((k, v)) = kv.split_once('=') else { continue };
        match k {
            "mode" => mode = Some(v.parse::<RepetitionMode>()?),
            "tau_ns" => tau = Some(parse_f64(v)?),
            "pulse_ns" => pulse = Some(parse_f64(v)?),
            "base_phases" => phases = Some(v.split(',').map(parse_f64).collect::<Result<Vec<_>>>()?),
            _ => {}
        }
    }
    let missing = |what: &str| Error::Parse(format!("schedule header lacks {what}"));
    let unit = DDUnitSpec::new(
        phases.ok_or_else(|| missing("base_phases"))?,
        tau.ok_or_else(|| missing("tau_ns"))?,
        pulse.ok_or_else(|| missing("pulse_ns"))?,
    )?;
    Ok((mode.ok_or_else(|| missing("mode"))?, unit))
}

/// `m` repetitions sharing the global phase `theta`.
pub fn standard_schedule(unit: DDUnitSpec, m: usize, theta: f64) -> Result<DDSchedule> {
    if m < 1 {
        return Err(Error::InvalidRepetitions { m, reason: "at least one unit is required" });
    }
    DDSchedule::new(unit, vec![theta; m], RepetitionMode::Standard)
}

/// `m` repetitions with independent uniform global phases.
pub fn pr_schedule<R: Rng + ?Sized>(unit: DDUnitSpec, m: usize, rng: &mut R) -> Result<DDSchedule> {
    if m < 1 {
        return Err(Error::InvalidRepetitions { m, reason: "at least one unit is required" });
    }
    let phases = (0..m).map(|_| rng.random_range(0.0..TAU)).collect();
    DDSchedule::new(unit, phases, RepetitionMode::PhaseRandomized)
}

/// Block sizes for correlated randomization: pairs, with one triple
/// absorbing an odd remainder.
pub fn cpr_partition(m: usize) -> Result<Vec<usize>> {
    if m < 2 {
        return Err(Error::InvalidRepetitions { m, reason: "correlated randomization needs at least two units" });
    }
    let mut blocks = vec![2; m / 2];
    if m % 2 == 1 {
        blocks.pop();
        blocks.push(3);
    }
    Ok(blocks)
}

/// `m` repetitions whose global phases come in cancelling blocks:
/// `{t, t + pi}` for pairs and `{t, t + 2pi/3, t + 4pi/3}` for triples, with
/// `t` uniform per block.
pub fn cpr_schedule<R: Rng + ?Sized>(unit: DDUnitSpec, m: usize, rng: &mut R) -> Result<DDSchedule> {
    let blocks = cpr_partition(m)?;
    let mut phases = Vec::with_capacity(m);
    for b in blocks {
        let t: f64 = rng.random_range(0.0..TAU);
        phases.extend((0..b).map(|j| t + TAU * j as f64 / b as f64));
    }
    DDSchedule::new(unit, phases, RepetitionMode::CorrelatedPhaseRandomized)
}

/// `Z = (1/M) sum_s exp(-i theta_s)`.
pub fn z_factor(schedule: &DDSchedule) -> C64 {
    z_factor_of(schedule.global_phases())
}

pub fn z_factor_of(phases: &[f64]) -> C64 {
    if phases.is_empty() {
        return C64::new(0.0, 0.0);
    }
    let sum: C64 = phases.iter().map(|&t| C64::new(0.0, -t).exp()).sum();
    sum / phases.len() as f64
}

/// Single-qubit propagator of a timeline under flip-angle error and a static
/// detuning (rad/us) acting during identity slots.
pub fn timeline_propagator(events: &[TimedEvent], err: &PulseErrorModel, trajectory_epsilon: f64, detuning: f64) -> Mat2 {
    events.iter().fold(Mat2::identity(), |acc, ev| {
        let step = match *ev {
            TimedEvent::Free { duration_ns } => rz(detuning * duration_ns * 1e-3),
            TimedEvent::Pulse { phase, .. } => pi_pulse(phase, err, trajectory_epsilon),
        };
        step * acc
    })
}

/// Propagator of a full schedule, see [`timeline_propagator`].
pub fn schedule_propagator(schedule: &DDSchedule, err: &PulseErrorModel, detuning: f64) -> Mat2 {
    timeline_propagator(&schedule.timeline(), err, 0.0, detuning)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::FRAC_PI_2;

    fn assert_phases(actual: &[f64], expected: &[f64]) {
        assert_eq!(actual.len(), expected.len());
        for (a, e) in actual.iter().zip(expected) {
            assert!((a - e).abs() < 1e-12, "{actual:?} vs {expected:?}");
        }
    }

    #[test]
    fn ur8_phases() {
        let p = urdd_phases(8, FRAC_PI_2).unwrap();
        assert_phases(&p, &[0.0, FRAC_PI_2, 3.0 * FRAC_PI_2, PI, PI, 3.0 * FRAC_PI_2, FRAC_PI_2, 0.0]);
    }

    #[test]
    fn xy4_special_case() {
        let p = urdd_phases(4, FRAC_PI_2).unwrap();
        assert_phases(&p, &[0.0, FRAC_PI_2, 0.0, FRAC_PI_2]);
    }

    #[test]
    fn quadratic_term_alone() {
        let p = urdd_phases(8, 0.0).unwrap();
        // (k-1)(k-2)/2 * pi/2 mod 2pi, evaluated directly.
        let direct: Vec<f64> = (1..=8)
            .map(|k: i32| normalize_angle(((k - 1) * (k - 2)) as f64 / 2.0 * FRAC_PI_2))
            .collect();
        assert_phases(&p, &direct);
        assert_phases(&p[..4], &[0.0, 0.0, FRAC_PI_2, 3.0 * FRAC_PI_2]);
    }

    #[test]
    fn order_4m_plus_2() {
        // n = 6: Phi = 2pi/3
        let p = urdd_phases(6, 0.3).unwrap();
        let direct: Vec<f64> = (1..=6)
            .map(|k: i32| normalize_angle(((k - 1) * (k - 2)) as f64 / 2.0 * 2.0 * PI / 3.0 + (k - 1) as f64 * 0.3))
            .collect();
        assert_phases(&p, &direct);
    }

    #[test]
    fn invalid_orders() {
        for n in [0, 2, 3, 5, 7] {
            assert!(matches!(urdd_phases(n, 0.0), Err(Error::InvalidPulseCount(_))));
        }
    }

    #[test]
    fn ur8_palindrome() {
        let p = urdd_phases(8, FRAC_PI_2).unwrap();
        for k in 0..8 {
            assert_eq!(p[k], p[7 - k]);
        }
    }

    #[test]
    fn unit_timing() {
        let unit = DDUnitSpec::ur8();
        assert_eq!(unit.duration_ns(), 844.0);
        assert_eq!(unit.duration_ns(), 8.0 * 35.5 + 8.0 * 70.0);
        let tl = unit.timeline(0.0);
        assert_eq!(tl.len(), 24);
        assert_eq!(unit.slot_count(), 24);
        let identities = tl.iter().filter(|e| matches!(e, TimedEvent::Free { duration_ns } if *duration_ns == 35.0)).count();
        assert_eq!(identities, 16);
        let total: f64 = tl.iter().map(TimedEvent::duration_ns).sum();
        assert_eq!(total, 844.0);
    }

    #[test]
    fn global_phase_shifts_axes_only() {
        let unit = DDUnitSpec::ur8();
        let a = unit.timeline(0.0);
        let b = unit.timeline(PI);
        for (x, y) in a.iter().zip(&b) {
            assert_eq!(x.duration_ns(), y.duration_ns());
            if let (TimedEvent::Pulse { phase: p0, .. }, TimedEvent::Pulse { phase: p1, .. }) = (x, y) {
                assert!((normalize_angle(p0 + PI) - p1).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn cpr_partitions() {
        assert_eq!(cpr_partition(2).unwrap(), vec![2]);
        assert_eq!(cpr_partition(3).unwrap(), vec![3]);
        assert_eq!(cpr_partition(4).unwrap(), vec![2, 2]);
        assert_eq!(cpr_partition(5).unwrap(), vec![2, 3]);
        assert_eq!(cpr_partition(7).unwrap(), vec![2, 2, 3]);
        assert_eq!(cpr_partition(9).unwrap(), vec![2, 2, 2, 3]);
        assert!(cpr_partition(1).is_err());
    }

    #[test]
    fn cpr_pair_is_antipodal() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = cpr_schedule(DDUnitSpec::ur8(), 2, &mut rng).unwrap();
        let d = (s.global_phases()[1] - s.global_phases()[0]).rem_euclid(TAU);
        assert!((d - PI).abs() < 1e-12);
        assert!(z_factor(&s).norm() < 1e-12);
        assert!(cpr_schedule(DDUnitSpec::ur8(), 1, &mut rng).is_err());
    }

    #[test]
    fn z_factor_examples() {
        assert!((z_factor_of(&[0.0; 7]) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(z_factor_of(&[0.0, PI]).norm() < 1e-15);
        assert!(z_factor_of(&[0.0, TAU / 3.0, 2.0 * TAU / 3.0]).norm() < 1e-15);
    }

    #[test]
    fn pr_single_unit_and_seed_sensitivity() {
        let s = pr_schedule(DDUnitSpec::ur8(), 1, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        assert!((z_factor(&s).norm() - 1.0).abs() < 1e-15);
        let a = pr_schedule(DDUnitSpec::ur8(), 9, &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
        let b = pr_schedule(DDUnitSpec::ur8(), 9, &mut ChaCha8Rng::seed_from_u64(2)).unwrap();
        assert_ne!(a.global_phases(), b.global_phases());
        assert!(pr_schedule(DDUnitSpec::ur8(), 0, &mut ChaCha8Rng::seed_from_u64(1)).is_err());
    }

    #[test]
    fn standard_theta_zero_repeats_plain_unit() {
        let unit = DDUnitSpec::ur8();
        let s = standard_schedule(unit.clone(), 3, 0.0).unwrap();
        let plain: Vec<TimedEvent> = (0..3).flat_map(|_| unit.timeline(0.0)).collect();
        assert_eq!(s.timeline(), plain);
    }

    #[test]
    fn schedule_invariants_enforced() {
        let unit = DDUnitSpec::ur8();
        assert!(DDSchedule::new(unit.clone(), vec![0.0, 1.0], RepetitionMode::Standard).is_err());
        assert!(DDSchedule::new(unit.clone(), vec![0.0, 1.0], RepetitionMode::CorrelatedPhaseRandomized).is_err());
        assert!(DDSchedule::new(unit, vec![], RepetitionMode::PhaseRandomized).is_err());
    }

    #[test]
    fn text_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let s = cpr_schedule(DDUnitSpec::ur8(), 5, &mut rng).unwrap();
        let text = s.to_text();
        assert_eq!(text.lines().filter(|l| !l.starts_with('#')).count(), 5);
        let back = DDSchedule::from_text(&text).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn text_rejects_tampered_phase() {
        let s = standard_schedule(DDUnitSpec::ur8(), 2, 0.0).unwrap();
        let text = s.to_text().replace("\n2 0.0000000000000000e0 0.0000000000000000e0", "\n2 0.0000000000000000e0 1.0000000000000000e0");
        assert!(DDSchedule::from_text(&text).is_err());
    }

    #[test]
    fn flip_error_alone_cancels_in_ur8() {
        // The UR8 phases pair each rotation with its inverse.
        let u = timeline_propagator(&DDUnitSpec::ur8().timeline(0.0), &PulseErrorModel::systematic(0.05), 0.0, 0.0);
        assert!(crate::pulses::phase_insensitive_distance(&u, &Mat2::identity()) < 1e-14);
    }
}
