//! Initialization, readout and the initialize → manipulate → detect sequence.
//!
//! Initialization is thermal equilibrium among the three field-split levels.
//! Readout measures the tunneling LDOS with the tip directly above the ion,
//! on the nodal plane of |Z⟩, where only the |X+Y⟩ component of a state
//! contributes: sin²Θ for |ξ₁⟩, cos²Θ for |ξ₂⟩, nothing for |ξ₃⟩.

use nalgebra::Vector3;
use num_complex::Complex64;

use crate::drive::DriveSpec;
use crate::dynamics::{eigenstate, final_state, populations, DcSchedule, PulseProgram};
use crate::error::{domain, Error, Result};
use crate::stark::{
    ground_state_branch, ground_state_threshold, numeric_spectrum, FieldSpec, GroundBranch, StarkSpectrum,
};
use crate::units::CONSTANTS;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThermalState {
    /// (p_ξ1, p_ξ2, p_ξ3).
    pub occupations: [f64; 3],
    /// K.
    pub temperature: f64,
    /// Level energies, eV.
    pub splitting_ev: [f64; 3],
}

/// Boltzmann occupations of the three Stark levels at `temperature` (K).
pub fn thermal_occupations(spectrum: &StarkSpectrum, temperature: f64) -> Result<ThermalState> {
    if !(temperature > 0.0) {
        return domain(format!("temperature must be > 0 K, got {temperature}"));
    }
    let kt = CONSTANTS.boltzmann * temperature;
    let e = spectrum.energies_ev;
    let e_min = e.iter().copied().fold(f64::INFINITY, f64::min);
    let weights = e.map(|x| (-(x - e_min) / kt).exp());
    let z: f64 = weights.iter().sum();
    Ok(ThermalState {
        occupations: weights.map(|w| w / z),
        temperature,
        splitting_ev: e,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum TipSite {
    /// Directly above the ion, on the nodal plane of |Z⟩.
    #[default]
    OnAxisNodalPlane,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ReadoutModel {
    /// Spin-independent share of the LDOS at the tip, in [0, 1).
    pub background_fraction: f64,
    pub tip_site: TipSite,
}

impl ReadoutModel {
    pub fn new(background_fraction: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&background_fraction) {
            return domain(format!(
                "background_fraction must lie in [0, 1), got {background_fraction}"
            ));
        }
        Ok(ReadoutModel {
            background_fraction,
            tip_site: TipSite::OnAxisNodalPlane,
        })
    }

    /// Maximum achievable contrast between the two pseudospin states.
    pub fn visibility(&self) -> f64 {
        1.0 - self.background_fraction
    }
}

impl Default for ReadoutModel {
    fn default() -> Self {
        ReadoutModel {
            background_fraction: 0.1,
            tip_site: TipSite::OnAxisNodalPlane,
        }
    }
}

/// Spin-dependent LDOS weights (sin²Θ, cos²Θ) of |ξ₁⟩ and |ξ₂⟩.
pub fn ldos_weights(theta_mix: f64) -> (f64, f64) {
    let (s, c) = theta_mix.sin_cos();
    (s * s, c * c)
}

/// Normalized tunneling signal for level occupations `occupations`.
pub fn detection_signal(occupations: &[f64; 3], theta_mix: f64, model: &ReadoutModel) -> f64 {
    let (w1, w2) = ldos_weights(theta_mix);
    let bg = model.background_fraction;
    bg + (1.0 - bg) * (occupations[0] * w1 + occupations[1] * w2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pseudospin {
    Xi1,
    Xi2,
    /// The two pure-state signals coincide (Θ = π/4), so no decision is possible.
    Undetermined,
}

impl std::fmt::Display for Pseudospin {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Pseudospin::Xi1 => "xi1",
            Pseudospin::Xi2 => "xi2",
            Pseudospin::Undetermined => "undetermined",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ProtocolRecord {
    pub theta: f64,
    pub theta_mix: f64,
    pub init_state: ThermalState,
    pub pulse_duration: f64,
    pub final_occupations: [f64; 3],
    pub signal: f64,
    /// Signals of pure |ξ₁⟩ and |ξ₂⟩.
    pub reference_signals: (f64, f64),
    /// Midpoint between the reference signals.
    pub threshold: f64,
    pub inferred_pseudospin: Pseudospin,
}

impl ProtocolRecord {
    /// Distance of the measured signal from the decision threshold.
    pub fn margin(&self) -> f64 {
        (self.signal - self.threshold).abs()
    }
}

/// Thermalize, apply the pulse, and read out.
///
/// The thermal mixture is diagonal in the dc eigenbasis, so each level is
/// propagated separately and the resulting populations are mixed with the
/// thermal weights.
pub fn run_protocol(
    dc: &FieldSpec,
    drive: &DriveSpec,
    pulse_duration: f64,
    temperature: f64,
    model: &ReadoutModel,
    gamma_dipole: f64,
) -> Result<ProtocolRecord> {
    let theta = dc
        .cleavage_angle()
        .ok_or_else(|| Error::Protocol("the dc field must lie in the (1-10) cleavage plane".into()))?;
    if ground_state_branch(theta) != GroundBranch::Xi1 {
        return Err(Error::Protocol(format!(
            "|theta| = {:.6} rad violates |theta| < pi - atan(sqrt 2) = {:.6} rad, so xi1 is not the ground state",
            theta.abs(),
            ground_state_threshold()
        )));
    }
    if !(pulse_duration >= 0.0) {
        return domain(format!("pulse duration must be >= 0, got {pulse_duration}"));
    }

    let spectrum = numeric_spectrum(dc, gamma_dipole)?;
    let init = thermal_occupations(&spectrum, temperature)?;

    let final_occupations = if pulse_duration == 0.0 {
        init.occupations
    } else {
        let program = PulseProgram::new(DcSchedule::Constant(*dc), *drive, pulse_duration, gamma_dipole)?;
        let program = program.with_dt(program.dt.min(pulse_duration));
        let mut mixed = [0.0; 3];
        for (level, weight) in init.occupations.iter().enumerate() {
            let psi = final_state(&program, &eigenstate(&spectrum, level))?;
            let pops = populations(&spectrum, &psi);
            for k in 0..3 {
                mixed[k] += weight * pops[k];
            }
        }
        mixed
    };

    let signal = detection_signal(&final_occupations, spectrum.theta_mix, model);
    let s1 = detection_signal(&[1.0, 0.0, 0.0], spectrum.theta_mix, model);
    let s2 = detection_signal(&[0.0, 1.0, 0.0], spectrum.theta_mix, model);
    let threshold = 0.5 * (s1 + s2);
    let inferred_pseudospin = if (s1 - s2).abs() < 1e-12 {
        Pseudospin::Undetermined
    } else if (signal > threshold) == (s1 > s2) {
        Pseudospin::Xi1
    } else {
        Pseudospin::Xi2
    };

    Ok(ProtocolRecord {
        theta,
        theta_mix: spectrum.theta_mix,
        init_state: init,
        pulse_duration,
        final_occupations,
        signal,
        reference_signals: (s1, s2),
        threshold,
        inferred_pseudospin,
    })
}

/// Pure-state amplitude vector for a pseudospin on the Bloch sphere of
/// {|ξ₁⟩, |ξ₂⟩}, expressed on the {X, Y, Z} basis.
pub fn pseudospin_state(spectrum: &StarkSpectrum, polar: f64, azimuth: f64) -> Vector3<Complex64> {
    let a = Complex64::new((polar / 2.0).cos(), 0.0);
    let b = Complex64::from_polar((polar / 2.0).sin(), azimuth);
    eigenstate(spectrum, 0) * a + eigenstate(spectrum, 1) * b
}
