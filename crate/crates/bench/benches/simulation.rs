use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use urdd::dd::{cpr_schedule, schedule_propagator, DDUnitSpec};
use urdd::noise::{default_detuning_sigma, idle_channel, QubitNoise};
use urdd::{
    entanglement_parameter_exact, entanglement_parameter_sampled, prepare_ideal, run_experiment, witness_operator,
    ExperimentConfig, ProtectionMode, PulseErrorModel, StateKind,
};

fn unit_propagators(c: &mut Criterion) {
    let unit = DDUnitSpec::ur8();
    let err = PulseErrorModel::systematic(0.01);
    let sigma = default_detuning_sigma();
    c.bench_function("cpr schedule m=9 propagator", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        b.iter(|| {
            let s = cpr_schedule(unit.clone(), 9, &mut rng).unwrap();
            black_box(schedule_propagator(&s, &err, sigma))
        })
    });
}

fn channels(c: &mut Criterion) {
    let q = QubitNoise::new(140.0, 58.0).unwrap();
    let rho = prepare_ideal(StateKind::Ghz4);
    let ch = idle_channel(35.0, q).unwrap();
    c.bench_function("idle channel on 4 qubits", |b| {
        b.iter(|| {
            let mut r = rho.clone();
            for t in 0..4 {
                r = urdd::apply_kraus_channel(&r, &ch, t).unwrap();
            }
            black_box(r)
        })
    });
}

fn witnesses(c: &mut Criterion) {
    let rho = prepare_ideal(StateKind::Cluster4);
    let w = witness_operator(StateKind::Cluster4);
    c.bench_function("cluster witness exact", |b| b.iter(|| black_box(entanglement_parameter_exact(&rho, &w).unwrap())));
    c.bench_function("cluster witness 8192 shots", |b| {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        b.iter(|| black_box(entanglement_parameter_sampled(&rho, StateKind::Cluster4, 8192, 0.02, &mut rng).unwrap()))
    });
}

fn experiments(c: &mut Criterion) {
    let mut group = c.benchmark_group("experiment");
    group.sample_size(10);
    for mode in [ProtectionMode::Free, ProtectionMode::Standard, ProtectionMode::Cpr] {
        let mut cfg = ExperimentConfig::new(StateKind::Ghz4, mode, 3);
        cfg.noise.trajectories = 20;
        group.bench_function(format!("ghz4 {mode} 20 trajectories"), |b| b.iter(|| black_box(run_experiment(&cfg).unwrap())));
    }
    group.finish();
}

criterion_group!(benches, unit_propagators, channels, witnesses, experiments);
criterion_main!(benches);
