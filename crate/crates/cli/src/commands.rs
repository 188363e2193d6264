//! Subcommand implementations. Each returns the full text written to the
//! output file; sweep points are evaluated in parallel and emitted in grid order.

use std::f64::consts::TAU;

use ionspin_core::drive::{rabi_frequency_for, resonant_omega, resonant_rabi_frequency};
use ionspin_core::dynamics::{calibrate_pi_pulse, eigenstate, extract_rabi, propagate, CalibrationOptions};
use ionspin_core::multiplet::{analyze_multiplet, build_spin_hamiltonian};
use ionspin_core::pair::{entangling_time, exchange_coupling};
use ionspin_core::protocol::{ldos_weights, run_protocol, ProtocolRecord};
use ionspin_core::stark::{field_in_cleavage_plane, numeric_spectrum};
use ionspin_core::{DcSchedule, DriveSpec, FieldSpec, PulseProgram, ReadoutModel};
use rayon::prelude::*;

use crate::config::{PulseChoice, RunConfig};
use crate::csv::{num, Table};
use crate::{CliError, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Subcommand {
    Multiplet,
    SpectrumSweep,
    CouplingSweep,
    Rabi,
    Calibrate,
    Protocol,
    LdosSweep,
    Pair,
}

const UNITS: &str = "angles in rad, energies in eV, times in s, fields in V/m, frequencies in Hz";

pub fn run(subcommand: Subcommand, config: &RunConfig) -> Result<String> {
    match subcommand {
        Subcommand::Multiplet => multiplet(config),
        Subcommand::SpectrumSweep => spectrum_sweep(config),
        Subcommand::CouplingSweep => coupling_sweep(config),
        Subcommand::Rabi => rabi(config),
        Subcommand::Calibrate => calibrate(config),
        Subcommand::Protocol => protocol(config),
        Subcommand::LdosSweep => ldos_sweep(config),
        Subcommand::Pair => pair(config),
    }
}

fn grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect()
}

fn theta_grid(c: &RunConfig) -> Vec<f64> {
    grid(c.theta_min, c.theta_max, c.grid_points)
}

fn sweep<F>(points: &[f64], f: F) -> Result<Vec<Vec<String>>>
where
    F: Fn(f64) -> Result<Vec<String>> + Sync,
{
    points.par_iter().map(|&x| f(x)).collect()
}

fn multiplet(c: &RunConfig) -> Result<String> {
    let h = build_spin_hamiltonian(c.material.alpha, c.material.beta);
    let r = analyze_multiplet(&h, c.degeneracy_tol)?;
    let comment = format!(
        "ionspin multiplet: alpha = {} eV, beta = {} eV, {UNITS}\nground_energy_eV = {}, ground_degeneracy = {}, ground_J = {}, ground_J2 = {}, exchange_expectation = {}, ambiguous_clustering = {}",
        num(c.material.alpha),
        num(c.material.beta),
        num(r.ground_energy),
        r.ground_degeneracy,
        r.ground_j,
        num(r.ground_j_squared),
        num(r.exchange_expectation),
        r.ambiguous_clustering,
    );
    let mut t = Table::new(&comment, &["energy_eV", "multiplicity", "J_assigned"]);
    for level in &r.levels {
        t.row([num(level.energy), level.multiplicity.to_string(), level.j.to_string()]);
    }
    Ok(t.finish())
}

fn spectrum_sweep(c: &RunConfig) -> Result<String> {
    let gamma = c.material.gamma_dipole;
    let rows = sweep(&theta_grid(c), |theta| {
        let s = numeric_spectrum(&field_in_cleavage_plane(theta, c.e_dc)?, gamma)?;
        Ok(vec![
            num(theta),
            num(s.xi[0]),
            num(s.xi[1]),
            num(s.xi[2]),
            num(s.theta_mix),
            num(s.eta),
        ])
    })?;
    let comment = format!(
        "ionspin spectrum-sweep: xi in units of gamma*E_dc, E_dc = {}, {UNITS}",
        num(c.e_dc)
    );
    let mut t = Table::new(&comment, &["theta_rad", "xi1", "xi2", "xi3", "Theta_rad", "eta"]);
    rows.into_iter().for_each(|r| t.row(r));
    Ok(t.finish())
}

fn coupling_sweep(c: &RunConfig) -> Result<String> {
    let gamma = c.material.gamma_dipole;
    let rows = sweep(&theta_grid(c), |theta| {
        let s = numeric_spectrum(&field_in_cleavage_plane(theta, c.e_dc)?, gamma)?;
        let (s2, c2) = (2.0 * s.theta_mix).sin_cos();
        let rabi = resonant_rabi_frequency(c.drive_direction, c.e_ac, s.theta_mix, gamma)?;
        Ok(vec![num(theta), num(c2), num(s2), num(rabi / TAU)])
    })?;
    let comment = format!(
        "ionspin coupling-sweep: drive {}, E_ac = {}, {UNITS}",
        c.drive_direction,
        num(c.e_ac)
    );
    let mut t = Table::new(&comment, &["theta_rad", "cos2Theta", "sin2Theta", "resonant_rabi_hz"]);
    rows.into_iter().for_each(|r| t.row(r));
    Ok(t.finish())
}

fn ldos_sweep(c: &RunConfig) -> Result<String> {
    let gamma = c.material.gamma_dipole;
    let bg = c.background_fraction;
    let rows = sweep(&theta_grid(c), |theta| {
        let s = numeric_spectrum(&field_in_cleavage_plane(theta, c.e_dc)?, gamma)?;
        let (w1, w2) = ldos_weights(s.theta_mix);
        Ok(vec![num(theta), num(bg + (1.0 - bg) * w1), num(bg + (1.0 - bg) * w2)])
    })?;
    let comment = format!(
        "ionspin ldos-sweep: scaled LDOS = background + (1 - background) * weight, background = {}, {UNITS}",
        num(bg)
    );
    let mut t = Table::new(&comment, &["theta_rad", "w_xi1_scaled", "w_xi2_scaled"]);
    rows.into_iter().for_each(|r| t.row(r));
    Ok(t.finish())
}

fn pair(c: &RunConfig) -> Result<String> {
    let rows = sweep(&grid(c.d_min, c.d_max, c.grid_points), |d| {
        let j = exchange_coupling(d, &c.pair)?;
        Ok(vec![num(d), num(j), num(entangling_time(j)?)])
    })?;
    let comment = format!(
        "ionspin pair: j0 = {} eV, d0 = {} m, decay_length = {} m, {UNITS}",
        num(c.pair.j0),
        num(c.pair.d0),
        num(c.pair.decay_length)
    );
    let mut t = Table::new(&comment, &["d_m", "j_ev", "t_entangle_s"]);
    rows.into_iter().for_each(|r| t.row(r));
    Ok(t.finish())
}

fn dc_field(c: &RunConfig) -> Result<FieldSpec> {
    Ok(field_in_cleavage_plane(c.theta, c.e_dc)?)
}

fn carrier(c: &RunConfig) -> Result<f64> {
    match c.omega {
        Some(w) => Ok(w),
        None => Ok(resonant_omega(
            c.e_dc,
            c.theta,
            c.material.gamma_dipole,
            c.detuning_form,
        )?),
    }
}

fn drive_spec(c: &RunConfig, omega: f64) -> Result<DriveSpec> {
    let mut d = DriveSpec::new(c.e_ac, c.drive_direction, omega)?;
    d.phase = c.phase;
    Ok(d)
}

fn rabi(c: &RunConfig) -> Result<String> {
    let gamma = c.material.gamma_dipole;
    let dc = dc_field(c)?;
    let omega = carrier(c)?;
    let mut program = PulseProgram::new(DcSchedule::Constant(dc), drive_spec(c, omega)?, c.duration, gamma)?
        .with_sampling(c.sample_every);
    if let Some(dt) = c.dt {
        program = program.with_dt(dt);
    }
    let spectrum = numeric_spectrum(&dc, gamma)?;
    let trace = propagate(&program, &eigenstate(&spectrum, 0))?;

    let analytic = rabi_frequency_for(
        c.drive_direction,
        c.e_ac,
        c.e_dc,
        c.theta,
        omega,
        gamma,
        c.detuning_form,
    )?;
    let measured = match extract_rabi(&trace) {
        Ok(w) => num(w / TAU),
        Err(e) => format!("unavailable ({e})"),
    };
    let comment = format!(
        "ionspin rabi: theta = {}, E_dc = {}, E_ac = {}, omega_hz = {}, dt = {}, {UNITS}\nrabi_hz_analytic = {}, rabi_hz_measured = {measured}",
        num(c.theta),
        num(c.e_dc),
        num(c.e_ac),
        num(omega / TAU),
        num(program.steps().1),
        num(analytic / TAU),
    );
    let mut t = Table::new(&comment, &["t_s", "p_xi1", "p_xi2", "p_xi3"]);
    for (time, p) in trace.times.iter().zip(&trace.populations) {
        t.row([num(*time), num(p[0]), num(p[1]), num(p[2])]);
    }
    Ok(t.finish())
}

fn calibration_options(c: &RunConfig) -> CalibrationOptions {
    CalibrationOptions {
        seed_form: c.detuning_form,
        ..Default::default()
    }
}

fn calibrate(c: &RunConfig) -> Result<String> {
    let dc = dc_field(c)?;
    let pulse = calibrate_pi_pulse(
        &dc,
        c.drive_direction,
        c.e_ac,
        c.material.gamma_dipole,
        &calibration_options(c),
    )?;
    let comment = format!(
        "ionspin calibrate: theta = {}, E_dc = {}, E_ac = {}, drive {}, evaluations = {}, {UNITS}",
        num(c.theta),
        num(c.e_dc),
        num(c.e_ac),
        c.drive_direction,
        pulse.evaluations
    );
    let mut t = Table::new(&comment, &["omega_hz", "duration_s", "fidelity"]);
    t.row([num(pulse.omega / TAU), num(pulse.duration), num(pulse.fidelity)]);
    Ok(t.finish())
}

fn protocol_record(c: &RunConfig) -> Result<(ProtocolRecord, f64)> {
    let gamma = c.material.gamma_dipole;
    let dc = dc_field(c)?;
    let model = ReadoutModel::new(c.background_fraction)?;

    let (omega, duration) = match (c.pulse_duration, c.pulse) {
        (Some(t), _) => (carrier(c)?, t),
        (None, PulseChoice::None) => (carrier(c)?, 0.0),
        (None, choice) => {
            // Check the regime before spending time on calibration.
            run_protocol(&dc, &drive_spec(c, carrier(c)?)?, 0.0, c.temperature, &model, gamma)?;
            let pi = calibrate_pi_pulse(&dc, c.drive_direction, c.e_ac, gamma, &calibration_options(c))?;
            let t = if choice == PulseChoice::HalfPi {
                pi.duration / 2.0
            } else {
                pi.duration
            };
            (c.omega.unwrap_or(pi.omega), t)
        }
    };
    let record = run_protocol(&dc, &drive_spec(c, omega)?, duration, c.temperature, &model, gamma)?;
    Ok((record, omega))
}

fn protocol(c: &RunConfig) -> Result<String> {
    let (r, omega) = protocol_record(c)?;
    if let Some(path) = &c.protocol_trace_path {
        write_trace(c, omega, r.pulse_duration, path)?;
    }
    let comment = format!("ionspin protocol: initialize -> manipulate -> detect, {UNITS}");
    let mut t = Table::new(&comment, &["quantity", "value"]);
    let mut kv = |k: &str, v: String| t.row([k.to_string(), v]);
    kv("theta_rad", num(r.theta));
    kv("Theta_rad", num(r.theta_mix));
    kv("temperature_k", num(r.init_state.temperature));
    for (i, p) in r.init_state.occupations.iter().enumerate() {
        kv(&format!("init_p_xi{}", i + 1), num(*p));
    }
    kv("drive_direction", c.drive_direction.to_string());
    kv("e_ac", num(c.e_ac));
    kv("omega_hz", num(omega / TAU));
    kv("pulse_duration_s", num(r.pulse_duration));
    for (i, p) in r.final_occupations.iter().enumerate() {
        kv(&format!("final_p_xi{}", i + 1), num(*p));
    }
    kv("signal_xi1_reference", num(r.reference_signals.0));
    kv("signal_xi2_reference", num(r.reference_signals.1));
    kv("threshold", num(r.threshold));
    kv("signal", num(r.signal));
    kv("margin", num(r.margin()));
    kv("decision", r.inferred_pseudospin.to_string());
    Ok(t.finish())
}

/// Per-step populations of the pulse applied to |ξ₁⟩.
fn write_trace(c: &RunConfig, omega: f64, duration: f64, path: &std::path::Path) -> Result<()> {
    let gamma = c.material.gamma_dipole;
    let dc = dc_field(c)?;
    let mut t = Table::new(
        &format!("ionspin protocol trace from xi1, {UNITS}"),
        &["t_s", "p_xi1", "p_xi2", "p_xi3"],
    );
    if duration > 0.0 {
        let program = PulseProgram::new(DcSchedule::Constant(dc), drive_spec(c, omega)?, duration, gamma)?;
        let program = program.with_dt(program.dt.min(duration)).with_sampling(c.sample_every);
        let spectrum = numeric_spectrum(&dc, gamma)?;
        let trace = propagate(&program, &eigenstate(&spectrum, 0))?;
        for (time, p) in trace.times.iter().zip(&trace.populations) {
            t.row([num(*time), num(p[0]), num(p[1]), num(p[2])]);
        }
    }
    std::fs::write(path, t.finish()).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}
