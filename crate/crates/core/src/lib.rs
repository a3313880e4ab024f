//! Density-matrix simulation of universally robust dynamical decoupling
//! (URDD) protecting small entangled registers, with standard, phase
//! randomized and correlated phase randomized repetition.
//!
//! Qubit 0 is the leftmost tensor factor: in a basis index of an `n`-qubit
//! register, qubit `q` is bit `n - 1 - q`. Pauli strings read the same way
//! (`"XZ"` is X on qubit 0).

pub mod analytic;
pub mod dd;
pub mod error;
pub mod experiment;
pub mod gates;
pub mod noise;
pub mod pulses;
pub mod sim;
pub mod states;
pub mod witness;

pub use analytic::{accumulated_propagator, sequence_fidelity, target_propagator, unit_error_propagator, ErrorModelParams};
pub use dd::{
    build_unit_timeline, cpr_partition, cpr_schedule, pr_schedule, standard_schedule, urdd_phases, z_factor,
    DDSchedule, DDUnitSpec, RepetitionMode, TimedEvent,
};
pub use error::{Error, Result};
pub use experiment::{
    read_csv, run_experiment, write_csv, CsvRecord, ExperimentConfig, Measurement, ProtectionMode, TimePoint,
    TimeSeries,
};
pub use gates::Gate;
pub use noise::{idle_channel, KrausChannel, NoiseParams, QubitNoise};
pub use pulses::{gate_matrix, pi_pulse, PulseErrorModel};
pub use sim::{
    apply_kraus_channel, apply_unitary, expectation_pauli, sample_qubit_z, DensityMatrix, MeasurementCounts, Pauli,
    PauliString,
};
pub use states::{prepare_ideal, prepare_noisy, StateKind};
pub use witness::{
    entanglement_parameter_exact, entanglement_parameter_sampled, mapping_table, witness_operator, MappingEntry,
    WitnessEstimate, WitnessOperator,
};
