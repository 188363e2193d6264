use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use ionspin_core::drive::resonant_omega;
use ionspin_core::dynamics::{calibrate_pi_pulse, eigenstate, final_state};
use ionspin_core::multiplet::{analyze_multiplet, build_spin_hamiltonian, DEFAULT_DEGENERACY_TOL};
use ionspin_core::stark::{field_in_cleavage_plane, numeric_spectrum};
use ionspin_core::{CalibrationOptions, DcSchedule, DetuningForm, DriveDirection, DriveSpec, PulseProgram};

const GAMMA: f64 = 6.4e-30;
const E_DC: f64 = 1e7;
const E_AC: f64 = 2.5e6;

fn stark(c: &mut Criterion) {
    let field = field_in_cleavage_plane(0.4, E_DC).unwrap();
    c.bench_function("numeric_spectrum", |b| {
        b.iter(|| numeric_spectrum(black_box(&field), GAMMA).unwrap())
    });
    c.bench_function("spectrum_sweep_721", |b| {
        b.iter(|| {
            (0..721)
                .map(|k| {
                    let theta = -std::f64::consts::PI + std::f64::consts::TAU * k as f64 / 720.0;
                    numeric_spectrum(&field_in_cleavage_plane(theta, E_DC).unwrap(), GAMMA)
                        .unwrap()
                        .xi[0]
                })
                .sum::<f64>()
        })
    });
}

fn multiplet(c: &mut Criterion) {
    c.bench_function("multiplet_36x36", |b| {
        b.iter(|| analyze_multiplet(&build_spin_hamiltonian(black_box(0.3), -0.08), DEFAULT_DEGENERACY_TOL).unwrap())
    });
}

fn dynamics(c: &mut Criterion) {
    let dc = field_in_cleavage_plane(0.0, E_DC).unwrap();
    let omega = resonant_omega(E_DC, 0.0, GAMMA, DetuningForm::Corrected).unwrap();
    let drive = DriveSpec::new(E_AC, DriveDirection::Along110, omega).unwrap();
    let program = PulseProgram::new(DcSchedule::Constant(dc), drive, 20.7e-12, GAMMA).unwrap();
    let psi = eigenstate(&numeric_spectrum(&dc, GAMMA).unwrap(), 0);
    c.bench_function("propagate_pi_pulse", |b| {
        b.iter(|| final_state(black_box(&program), &psi).unwrap())
    });

    let mut group = c.benchmark_group("calibration");
    group.sample_size(10);
    group.bench_function("calibrate_pi_pulse", |b| {
        b.iter(|| {
            calibrate_pi_pulse(
                &dc,
                DriveDirection::Along110,
                E_AC,
                GAMMA,
                &CalibrationOptions::default(),
            )
            .unwrap()
        })
    });
    group.finish();
}

criterion_group!(benches, stark, multiplet, dynamics);
criterion_main!(benches);
