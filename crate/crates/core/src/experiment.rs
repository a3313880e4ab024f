//! Protection experiments: prepare a state, evolve it under free evolution
//! or a decoupling schedule with noise, and track `theta` at every unit
//! boundary, averaged over Monte Carlo trajectories.
//!
//! Each trajectory draws its own quasi-static detuning per qubit and its own
//! flip-angle offset. Trajectory `t` uses ChaCha8 seeded with the experiment
//! seed on streams `4t` (noise draws), `4t + 1` (global phases) and `4t + 2`
//! (shot sampling), so runs that differ only in mode see the same noise.

use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use rayon::prelude::*;

use crate::dd::{cpr_schedule, pr_schedule, standard_schedule, DDSchedule, DDUnitSpec, TimedEvent};
use crate::error::{Error, Result};
use crate::noise::{draw_detuning, idle_channel, unitary_superoperator, NoiseParams, Superop};
use crate::pulses::{pi_pulse, rz, PulseErrorModel};
use crate::sim::DensityMatrix;
use crate::states::{prepare_noisy, StateKind};
use crate::witness::{entanglement_parameter_exact, entanglement_parameter_sampled, witness_operator};

/// Seed of the fixed device calibration used by [`ExperimentConfig::new`].
pub const DEVICE_SEED: u64 = 0;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum ProtectionMode {
    /// No pulses; the same slots idle.
    Free,
    Standard,
    Pr,
    Cpr,
}

impl ProtectionMode {
    pub const ALL: [ProtectionMode; 4] =
        [ProtectionMode::Free, ProtectionMode::Standard, ProtectionMode::Pr, ProtectionMode::Cpr];

    pub fn as_str(self) -> &'static str {
        match self {
            ProtectionMode::Free => "free",
            ProtectionMode::Standard => "standard",
            ProtectionMode::Pr => "pr",
            ProtectionMode::Cpr => "cpr",
        }
    }
}

impl fmt::Display for ProtectionMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ProtectionMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ProtectionMode::ALL
            .into_iter()
            .find(|m| m.as_str().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::Parse(format!("unknown mode {s:?} (expected free, standard, pr or cpr)")))
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Measurement {
    /// `theta` from the density matrix directly.
    Exact,
    /// Shot sampling through the mapping circuits.
    Sampled,
}

impl FromStr for Measurement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "exact" => Ok(Measurement::Exact),
            "sampled" => Ok(Measurement::Sampled),
            _ => Err(Error::Parse(format!("unknown measurement {s:?} (expected exact or sampled)"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentConfig {
    pub state: StateKind,
    pub mode: ProtectionMode,
    pub m_max: usize,
    pub shots: u64,
    pub noise: NoiseParams,
    pub pulse_error: PulseErrorModel,
    pub seed: u64,
    pub measurement: Measurement,
    pub unit: DDUnitSpec,
}

impl ExperimentConfig {
    /// Calibrated device, UR8 unit, nine repetitions, exact measurement.
    pub fn new(state: StateKind, mode: ProtectionMode, seed: u64) -> Self {
        Self {
            state,
            mode,
            m_max: 9,
            shots: 8192,
            noise: NoiseParams::calibrated(state.n_qubits(), DEVICE_SEED),
            pulse_error: PulseErrorModel::calibrated(),
            seed,
            measurement: Measurement::Exact,
            unit: DDUnitSpec::ur8(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.noise.n_qubits() != self.state.n_qubits() {
            return Err(Error::DimensionMismatch { expected: self.state.n_qubits(), found: self.noise.n_qubits() });
        }
        if self.mode == ProtectionMode::Cpr && self.m_max < 2 {
            return Err(Error::InvalidRepetitions { m: self.m_max, reason: "correlated randomization needs at least two units" });
        }
        if self.measurement == Measurement::Sampled && self.shots == 0 {
            return Err(Error::InvalidConfig("shots must be at least 1".into()));
        }
        self.noise.validate()?;
        self.pulse_error.validate()
    }

    /// Repetition counts measured: `0..=m_max`, without `m = 1` in CPR mode.
    pub fn grid(&self) -> Vec<usize> {
        (0..=self.m_max).filter(|&m| !(self.mode == ProtectionMode::Cpr && m == 1)).collect()
    }

    fn reported_shots(&self) -> u64 {
        match self.measurement {
            Measurement::Exact => 0,
            Measurement::Sampled => self.shots,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct TimePoint {
    pub time_us: f64,
    pub m: usize,
    pub theta_mean: f64,
    pub theta_stderr: f64,
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct TimeSeries {
    pub points: Vec<TimePoint>,
}

impl TimeSeries {
    pub fn at_m(&self, m: usize) -> Option<&TimePoint> {
        self.points.iter().find(|p| p.m == m)
    }

    pub fn from_records(records: &[CsvRecord]) -> Self {
        let points = records
            .iter()
            .map(|r| TimePoint { time_us: r.time_us, m: r.m, theta_mean: r.theta_mean, theta_stderr: r.theta_stderr })
            .collect();
        Self { points }
    }
}

/// Per-qubit trajectory data: Liouville maps of every slot kind.
struct Trajectory {
    free_slot: Vec<Superop>,
    pulse_idle: Vec<Superop>,
    detuning: Vec<f64>,
    epsilon: f64,
}

impl Trajectory {
    fn draw(cfg: &ExperimentConfig, slot_ns: f64, rng: &mut ChaCha8Rng) -> Result<Self> {
        let n = cfg.state.n_qubits();
        let detuning: Vec<f64> = (0..n).map(|_| draw_detuning(rng, cfg.noise.detuning_sigma)).collect();
        let sigma = cfg.pulse_error.epsilon_random_sigma;
        let epsilon = if sigma > 0.0 { Normal::new(0.0, sigma).expect("finite sigma").sample(rng) } else { 0.0 };
        let mut free_slot = Vec::with_capacity(n);
        let mut pulse_idle = Vec::with_capacity(n);
        for (q, &delta) in detuning.iter().enumerate() {
            let idle = idle_channel(slot_ns, cfg.noise.qubits[q])?.superoperator();
            free_slot.push(idle * unitary_superoperator(&rz(delta * slot_ns * 1e-3)));
            pulse_idle.push(idle_channel(cfg.unit.pulse_ns(), cfg.noise.qubits[q])?.superoperator());
        }
        Ok(Self { free_slot, pulse_idle, detuning, epsilon })
    }

    /// Liouville map of one unit on qubit `q`. Free mode idles through the
    /// pulse slots with the detuning still acting.
    fn unit_map(&self, cfg: &ExperimentConfig, events: &[TimedEvent], q: usize, free: bool) -> Superop {
        let mut acc = Superop::identity();
        for ev in events {
            let step = match *ev {
                TimedEvent::Free { duration_ns } if duration_ns == cfg.unit.tau_ns() / 2.0 => self.free_slot[q],
                TimedEvent::Free { duration_ns } => self.idle_with_detuning(cfg, q, duration_ns),
                TimedEvent::Pulse { duration_ns, .. } if free => self.idle_with_detuning(cfg, q, duration_ns),
                TimedEvent::Pulse { phase, .. } => {
                    self.pulse_idle[q] * unitary_superoperator(&pi_pulse(phase, &cfg.pulse_error, self.epsilon))
                }
            };
            acc = step * acc;
        }
        acc
    }

    fn idle_with_detuning(&self, cfg: &ExperimentConfig, q: usize, duration_ns: f64) -> Superop {
        let idle = idle_channel(duration_ns, cfg.noise.qubits[q]).expect("validated noise").superoperator();
        idle * unitary_superoperator(&rz(self.detuning[q] * duration_ns * 1e-3))
    }
}

fn apply_unit(rho: &mut DensityMatrix, maps: &[Superop]) {
    for (q, s) in maps.iter().enumerate() {
        rho.apply_superop_local(q, s);
    }
}

fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Runs all trajectories and returns the trajectory-averaged `theta` at
/// every grid point. Deterministic for a given config.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<TimeSeries> {
    cfg.validate()?;
    let n = cfg.state.n_qubits();
    let rho0 = prepare_noisy(cfg.state, &cfg.noise, &cfg.pulse_error)?;
    let w = witness_operator(cfg.state);
    let grid = cfg.grid();
    let slot_ns = cfg.unit.tau_ns() / 2.0;
    let trajectories = cfg.noise.trajectories.max(1) as u64;

    let per_traj: Vec<Vec<f64>> = (0..trajectories)
        .into_par_iter()
        .map(|t| -> Result<Vec<f64>> {
            let traj = Trajectory::draw(cfg, slot_ns, &mut stream_rng(cfg.seed, 4 * t))?;
            let mut phase_rng = stream_rng(cfg.seed, 4 * t + 1);
            let mut meas_rng = stream_rng(cfg.seed, 4 * t + 2);
            let mut measure = |rho: &DensityMatrix| -> Result<f64> {
                match cfg.measurement {
                    Measurement::Exact => entanglement_parameter_exact(rho, &w),
                    Measurement::Sampled => Ok(entanglement_parameter_sampled(
                        rho,
                        cfg.state,
                        cfg.shots,
                        cfg.noise.readout_error,
                        &mut meas_rng,
                    )?
                    .value),
                }
            };
            let unit_maps = |theta: f64, free: bool| -> Vec<Superop> {
                let events = cfg.unit.timeline(theta);
                (0..n).map(|q| traj.unit_map(cfg, &events, q, free)).collect()
            };
            let mut thetas = Vec::with_capacity(grid.len());
            match cfg.mode {
                ProtectionMode::Cpr => {
                    for &m in &grid {
                        let mut rho = rho0.clone();
                        if m > 0 {
                            let sched = cpr_schedule(cfg.unit.clone(), m, &mut phase_rng)?;
                            for &theta in sched.global_phases() {
                                apply_unit(&mut rho, &unit_maps(theta, false));
                            }
                        }
                        thetas.push(measure(&rho)?);
                    }
                }
                mode => {
                    let sched: Option<DDSchedule> = match (mode, cfg.m_max) {
                        (_, 0) | (ProtectionMode::Free, _) => None,
                        (ProtectionMode::Pr, m) => Some(pr_schedule(cfg.unit.clone(), m, &mut phase_rng)?),
                        (_, m) => Some(standard_schedule(cfg.unit.clone(), m, 0.0)?),
                    };
                    // Standard and Free repeat one map; PR changes it per unit.
                    let fixed = match mode {
                        ProtectionMode::Free => Some(unit_maps(0.0, true)),
                        ProtectionMode::Standard => Some(unit_maps(0.0, false)),
                        _ => None,
                    };
                    let mut rho = rho0.clone();
                    thetas.push(measure(&rho)?);
                    for s in 0..cfg.m_max {
                        match (&fixed, &sched) {
                            (Some(maps), _) => apply_unit(&mut rho, maps),
                            (None, Some(sched)) => apply_unit(&mut rho, &unit_maps(sched.global_phases()[s], false)),
                            (None, None) => unreachable!("PR with m_max > 0 has a schedule"),
                        }
                        thetas.push(measure(&rho)?);
                    }
                }
            }
            Ok(thetas)
        })
        .collect::<Result<_>>()?;

    let unit_us = cfg.unit.duration_ns() * 1e-3;
    let count = per_traj.len() as f64;
    let points = grid
        .iter()
        .enumerate()
        .map(|(g, &m)| {
            let mean = per_traj.iter().map(|v| v[g]).sum::<f64>() / count;
            let stderr = if per_traj.len() > 1 {
                let var = per_traj.iter().map(|v| (v[g] - mean).powi(2)).sum::<f64>() / (count - 1.0);
                (var / count).sqrt()
            } else {
                0.0
            };
            TimePoint { time_us: m as f64 * unit_us, m, theta_mean: mean, theta_stderr: stderr }
        })
        .collect();
    Ok(TimeSeries { points })
}

pub const CSV_HEADER: [&str; 8] = ["time_us", "m", "mode", "state", "theta_mean", "theta_stderr", "shots", "seed"];

/// One data row of the results file.
#[derive(Clone, Debug, PartialEq)]
pub struct CsvRecord {
    pub time_us: f64,
    pub m: usize,
    pub mode: ProtectionMode,
    pub state: StateKind,
    pub theta_mean: f64,
    pub theta_stderr: f64,
    pub shots: u64,
    pub seed: u64,
}

fn fmt_float(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes the series as CSV (LF line endings, 17 significant digits).
pub fn write_csv<W: Write>(ts: &TimeSeries, cfg: &ExperimentConfig, sink: W) -> Result<()> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(sink);
    w.write_record(CSV_HEADER)?;
    for p in &ts.points {
        w.write_record([
            fmt_float(p.time_us),
            p.m.to_string(),
            cfg.mode.to_string(),
            cfg.state.to_string(),
            fmt_float(p.theta_mean),
            fmt_float(p.theta_stderr),
            cfg.reported_shots().to_string(),
            cfg.seed.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_csv<R: Read>(source: R) -> Result<Vec<CsvRecord>> {
    let mut r = csv::Reader::from_reader(source);
    let header: Vec<String> = r.headers()?.iter().map(str::to_string).collect();
    if header != CSV_HEADER {
        return Err(Error::Parse(format!("unexpected CSV header {header:?}")));
    }
    let num = |s: &str| s.parse::<f64>().map_err(|_| Error::Parse(format!("bad number {s:?}")));
    let int = |s: &str| s.parse::<u64>().map_err(|_| Error::Parse(format!("bad integer {s:?}")));
    let mut out = Vec::new();
    for row in r.records() {
        let row = row?;
        out.push(CsvRecord {
            time_us: num(&row[0])?,
            m: int(&row[1])? as usize,
            mode: row[2].parse()?,
            state: row[3].parse()?,
            theta_mean: num(&row[4])?,
            theta_stderr: num(&row[5])?,
            shots: int(&row[6])?,
            seed: int(&row[7])?,
        });
    }
    Ok(out)
}
