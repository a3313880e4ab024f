use std::f64::consts::{FRAC_PI_2, TAU};
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use urdd::dd::{timeline_propagator, z_factor_of, RepetitionMode};
use urdd::*;

/// Simulate URDD protection of entangled qubit registers.
///
/// Angles are in radians. Qubits are numbered from 1 in circuit text and
/// from the left in Pauli strings.
#[derive(Parser, Debug)]
#[command(name = "urdd", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one protection experiment and write its CSV.
    Run {
        #[arg(long, value_parser = parse::<StateKind>)]
        state: StateKind,
        #[arg(long, value_parser = parse::<ProtectionMode>)]
        mode: ProtectionMode,
        /// Output file; standard output if omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
    /// Run every requested state x mode combination, one CSV each.
    Sweep {
        /// Comma-separated states (default: all).
        #[arg(long, value_delimiter = ',', value_parser = parse::<StateKind>)]
        states: Vec<StateKind>,
        /// Comma-separated modes (default: all).
        #[arg(long, value_delimiter = ',', value_parser = parse::<ProtectionMode>)]
        modes: Vec<ProtectionMode>,
        #[arg(long, env = "URDD_OUT_DIR", default_value = "results")]
        out_dir: PathBuf,
        #[command(flatten)]
        opts: ExperimentOpts,
    },
    /// Print URDD phases, or a full schedule when --m is given.
    Phases {
        #[arg(long, default_value_t = 8)]
        n: usize,
        #[arg(long, default_value_t = FRAC_PI_2, allow_negative_numbers = true)]
        phi2: f64,
        /// Number of units; prints the schedule log instead of the phases.
        #[arg(long)]
        m: Option<usize>,
        #[arg(long, default_value = "standard", value_parser = parse::<RepetitionMode>)]
        schedule: RepetitionMode,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Check the built-in reference values; exits 1 on any failure.
    Validate,
    /// Print the witness terms of a state.
    Witness {
        #[arg(long, value_parser = parse::<StateKind>)]
        state: StateKind,
        /// Also list the mapping circuit of every term.
        #[arg(long)]
        mapping: bool,
    },
}

#[derive(Args, Debug)]
struct ExperimentOpts {
    /// Largest number of units.
    #[arg(long = "m", default_value_t = 9)]
    m_max: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 200)]
    trajectories: usize,
    #[arg(long, default_value = "exact", value_parser = parse::<Measurement>)]
    measurement: Measurement,
    #[arg(long, default_value_t = 8192)]
    shots: u64,
    /// Systematic flip-angle error.
    #[arg(long, allow_negative_numbers = true)]
    epsilon: Option<f64>,
    /// Spread of the per-trajectory flip-angle error.
    #[arg(long)]
    epsilon_sigma: Option<f64>,
    /// Quasi-static detuning spread, rad/us.
    #[arg(long)]
    detuning_sigma: Option<f64>,
    #[arg(long)]
    readout_error: Option<f64>,
}

impl ExperimentOpts {
    fn config(&self, state: StateKind, mode: ProtectionMode) -> ExperimentConfig {
        let mut cfg = ExperimentConfig::new(state, mode, self.seed);
        cfg.m_max = self.m_max;
        cfg.shots = self.shots;
        cfg.measurement = self.measurement;
        cfg.noise.trajectories = self.trajectories;
        if let Some(e) = self.epsilon {
            cfg.pulse_error.epsilon_systematic = e;
        }
        if let Some(s) = self.epsilon_sigma {
            cfg.pulse_error.epsilon_random_sigma = s;
        }
        if let Some(s) = self.detuning_sigma {
            cfg.noise.detuning_sigma = s;
        }
        if let Some(r) = self.readout_error {
            cfg.noise.readout_error = r;
        }
        cfg
    }
}

fn parse<T: std::str::FromStr<Err = Error>>(s: &str) -> std::result::Result<T, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(code) => code,
        Err(Error::Io(e)) if e.kind() == io::ErrorKind::BrokenPipe => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}

fn execute(command: Command) -> Result<ExitCode> {
    match command {
        Command::Run { state, mode, out, opts } => {
            let cfg = opts.config(state, mode);
            let ts = run_experiment(&cfg)?;
            match out {
                Some(path) => write_csv(&ts, &cfg, BufWriter::new(File::create(path)?))?,
                None => write_csv(&ts, &cfg, io::stdout().lock())?,
            }
        }
        Command::Sweep { states, modes, out_dir, opts } => {
            let states = if states.is_empty() { StateKind::ALL.to_vec() } else { states };
            let modes = if modes.is_empty() { ProtectionMode::ALL.to_vec() } else { modes };
            fs::create_dir_all(&out_dir)?;
            for &state in &states {
                for &mode in &modes {
                    let cfg = opts.config(state, mode);
                    let ts = run_experiment(&cfg)?;
                    let path = out_dir.join(format!("{state}_{mode}.csv"));
                    write_csv(&ts, &cfg, BufWriter::new(File::create(&path)?))?;
                    eprintln!("wrote {}", path.display());
                }
            }
        }
        Command::Phases { n, phi2, m, schedule, seed } => {
            let unit = DDUnitSpec::new(urdd_phases(n, phi2)?, dd::TAU_NS, noise::GATE_TIME_NS)?;
            let mut out = io::stdout().lock();
            match m {
                None => {
                    for phi in unit.phases() {
                        writeln!(out, "{:.7}", display_angle(*phi))?;
                    }
                }
                Some(m) => {
                    let mut rng = ChaCha8Rng::seed_from_u64(seed);
                    let sched = match schedule {
                        RepetitionMode::Standard => standard_schedule(unit, m, 0.0)?,
                        RepetitionMode::PhaseRandomized => pr_schedule(unit, m, &mut rng)?,
                        RepetitionMode::CorrelatedPhaseRandomized => cpr_schedule(unit, m, &mut rng)?,
                    };
                    write!(out, "{}", sched.to_text())?;
                }
            }
        }
        Command::Validate => {
            let mut all = true;
            let mut out = io::stdout().lock();
            for (name, ok) in validation_checks()? {
                writeln!(out, "{} {name}", if ok { "PASS" } else { "FAIL" })?;
                all &= ok;
            }
            if !all {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Witness { state, mapping } => {
            let w = witness_operator(state);
            let mut out = io::stdout().lock();
            write!(out, "{}", w.to_text())?;
            if mapping {
                for e in mapping_table(state)? {
                    writeln!(out, "{} {} {} readout {}", e.label, e.term, e.circuit_text(), e.readout_qubit + 1)?;
                }
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Prints angles a hair below a full turn as 0.
fn display_angle(phi: f64) -> f64 {
    if TAU - phi < 5e-7 {
        0.0
    } else {
        phi
    }
}

fn validation_checks() -> Result<Vec<(&'static str, bool)>> {
    use std::f64::consts::PI;
    let mut checks = Vec::new();

    let phases = urdd_phases(8, FRAC_PI_2)?;
    let want = [0.0, FRAC_PI_2, 3.0 * FRAC_PI_2, PI, PI, 3.0 * FRAC_PI_2, FRAC_PI_2, 0.0];
    checks.push(("UR8 phase list", phases.iter().zip(want).all(|(a, b)| (a - b).abs() < 1e-12)));

    let unit = DDUnitSpec::ur8();
    checks.push(("unit timing 844 ns over 24 slots", unit.duration_ns() == 844.0 && unit.timeline(0.0).len() == 24));

    let ideal = StateKind::ALL.iter().all(|&k| {
        entanglement_parameter_exact(&prepare_ideal(k), &witness_operator(k)).is_ok_and(|t| (t - 0.5).abs() < 1e-10)
    });
    checks.push(("ideal states reach theta = 0.5", ideal));

    let mixed = StateKind::ALL.iter().zip([-0.25, -0.375, -0.4375, -0.4375]).all(|(&k, want)| {
        DensityMatrix::maximally_mixed(k.n_qubits())
            .and_then(|rho| entanglement_parameter_exact(&rho, &witness_operator(k)))
            .is_ok_and(|t| (t - want).abs() < 1e-12)
    });
    checks.push(("maximally mixed witness constants", mixed));

    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let mut oracle = true;
    for k in StateKind::ALL {
        match mapping_table(k) {
            Ok(table) => {
                for e in table {
                    oracle &= e.oracle_deviation(50, &mut rng)? < 1e-9;
                }
            }
            Err(e) => {
                eprintln!("{e}");
                oracle = false;
            }
        }
    }
    checks.push(("mapping circuits reduce terms to single-qubit Z", oracle));

    let u = timeline_propagator(&unit.timeline(0.0), &PulseErrorModel::ideal(), 0.0, 0.0);
    let (_, delta) = sequence_fidelity(&u, &target_propagator(unit.phases())?);
    checks.push(("ideal UR8 unit equals its target", delta < 1e-10));

    let mut cpr = true;
    for m in 2..=9 {
        let s = cpr_schedule(unit.clone(), m, &mut rng)?;
        cpr &= z_factor_of(s.global_phases()).norm() < 1e-12;
    }
    checks.push(("correlated phases cancel", cpr));
    Ok(checks)
}
