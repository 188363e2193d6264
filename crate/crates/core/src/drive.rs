//! The oscillating-field coupling expressed in the dc eigenbasis, and the
//! rotating-wave Rabi frequency.
//!
//! Both allowed drive directions, [110] and [001], lie in the cleavage plane
//! and so never couple |ξ₃⟩ to the pseudospin pair.

use std::f64::consts::FRAC_1_SQRT_2;

use nalgebra::{Matrix3, Vector3};

use crate::error::{domain, Result};
use crate::stark::{analytic_spectrum, direction_matrix, StarkSpectrum};
use crate::units::{stark_energy, CONSTANTS};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DriveDirection {
    /// Through the STM tip.
    Along110,
    /// Through the gates.
    Along001,
}

impl DriveDirection {
    pub fn unit_vector(self) -> Vector3<f64> {
        match self {
            DriveDirection::Along110 => Vector3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0),
            DriveDirection::Along001 => Vector3::z(),
        }
    }

    /// The ⟨ξ₁|·|ξ₂⟩ element of H/(γE_ac) for mixing angle Θ.
    pub fn coupling(self, theta_mix: f64) -> f64 {
        match self {
            DriveDirection::Along110 => (2.0 * theta_mix).cos(),
            DriveDirection::Along001 => 0.5 * (2.0 * theta_mix).sin(),
        }
    }
}

impl std::fmt::Display for DriveDirection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DriveDirection::Along110 => "[110]",
            DriveDirection::Along001 => "[001]",
        })
    }
}

impl std::str::FromStr for DriveDirection {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "110" | "[110]" => Ok(DriveDirection::Along110),
            "001" | "[001]" => Ok(DriveDirection::Along001),
            other => Err(format!(
                "unknown drive direction {other:?}, expected \"110\" or \"001\""
            )),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DriveSpec {
    /// Amplitude, V/m.
    pub e_ac: f64,
    pub direction: DriveDirection,
    /// Carrier angular frequency, rad/s.
    pub omega: f64,
    /// Carrier phase, rad: the field is e_ac·cos(ωt + phase).
    pub phase: f64,
}

impl DriveSpec {
    pub fn new(e_ac: f64, direction: DriveDirection, omega: f64) -> Result<Self> {
        let d = DriveSpec {
            e_ac,
            direction,
            omega,
            phase: 0.0,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.e_ac >= 0.0) || !self.e_ac.is_finite() {
            return domain(format!("drive amplitude must be finite and >= 0, got {}", self.e_ac));
        }
        if !(self.omega > 0.0) || !self.omega.is_finite() {
            return domain(format!("drive frequency must be finite and > 0, got {}", self.omega));
        }
        if !self.phase.is_finite() {
            return domain("drive phase must be finite");
        }
        Ok(())
    }

    /// Instantaneous field vector (V/m) at time `t`.
    pub fn field_at(&self, t: f64) -> Vector3<f64> {
        self.direction.unit_vector() * (self.e_ac * (self.omega * t + self.phase).cos())
    }
}

/// Amplitude (eV) of the cos(ωt) term for a [110] drive in the basis
/// {|ξ₁⟩, |ξ₂⟩, |ξ₃⟩}:
/// `γE_ac [[-sin2Θ, cos2Θ, 0], [cos2Θ, sin2Θ, 0], [0, 0, 0]]`.
pub fn ac_hamiltonian_in_eigenbasis(theta_mix: f64, e_ac: f64, gamma_dipole: f64) -> Result<Matrix3<f64>> {
    let scale = stark_energy(gamma_dipole, e_ac)?;
    let (s2, c2) = (2.0 * theta_mix).sin_cos();
    Ok(Matrix3::new(
        -s2, c2, 0.0, //
        c2, s2, 0.0, //
        0.0, 0.0, 0.0,
    ) * scale)
}

/// Amplitude (eV) of the cos(ωt) term for either drive direction, obtained by
/// rotating the field Hamiltonian into the dc eigenbasis of `spectrum`.
pub fn ac_amplitude_in_eigenbasis(
    spectrum: &StarkSpectrum,
    direction: DriveDirection,
    e_ac: f64,
    gamma_dipole: f64,
) -> Result<Matrix3<f64>> {
    let v = spectrum.eigvec_matrix();
    let h = direction_matrix(&direction.unit_vector()) * stark_energy(gamma_dipole, e_ac)?;
    Ok(v.transpose() * h * v)
}

/// Which resonance reference to use for the detuning.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum DetuningForm {
    /// The actual ξ₂ - ξ₁ splitting, γE_dc·√(4 - 3cos²θ).
    #[default]
    Corrected,
    /// γE_dc·√(4 - cos²θ), as the Rabi formula is commonly printed. At θ = 0
    /// this puts the resonance √3 times too high.
    AsPrinted,
}

impl std::str::FromStr for DetuningForm {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "corrected" => Ok(DetuningForm::Corrected),
            "printed" | "as_printed" => Ok(DetuningForm::AsPrinted),
            other => Err(format!(
                "unknown detuning form {other:?}, expected \"corrected\" or \"printed\""
            )),
        }
    }
}

/// ħω at which a pulse is resonant with the pseudospin splitting, eV.
pub fn resonance_energy(e_dc: f64, theta: f64, gamma_dipole: f64, form: DetuningForm) -> Result<f64> {
    let c = theta.cos();
    let factor = match form {
        DetuningForm::Corrected => (4.0 - 3.0 * c * c).sqrt(),
        DetuningForm::AsPrinted => (4.0 - c * c).sqrt(),
    };
    Ok(stark_energy(gamma_dipole, e_dc)? * factor)
}

/// Resonant angular frequency, rad/s.
pub fn resonant_omega(e_dc: f64, theta: f64, gamma_dipole: f64, form: DetuningForm) -> Result<f64> {
    Ok(resonance_energy(e_dc, theta, gamma_dipole, form)? / CONSTANTS.hbar)
}

/// Rabi frequency Ω (rad/s) for a drive along `direction`:
/// ħΩ = ½√(V² + (ħω - ħω₀)²) with V the ξ₁-ξ₂ coupling amplitude.
pub fn rabi_frequency_for(
    direction: DriveDirection,
    e_ac: f64,
    e_dc: f64,
    theta: f64,
    omega: f64,
    gamma_dipole: f64,
    form: DetuningForm,
) -> Result<f64> {
    if !(e_dc > 0.0) {
        return domain(format!("rabi_frequency needs e_dc > 0, got {e_dc}"));
    }
    if !omega.is_finite() {
        return domain("rabi_frequency needs a finite omega");
    }
    let coupling = stark_energy(gamma_dipole, e_ac)? * direction.coupling(analytic_spectrum(theta).theta_mix);
    let detuning = CONSTANTS.hbar * omega - resonance_energy(e_dc, theta, gamma_dipole, form)?;
    Ok(0.5 * coupling.hypot(detuning) / CONSTANTS.hbar)
}

/// Rabi frequency (rad/s) for the [110] drive with the corrected detuning.
pub fn rabi_frequency(e_ac: f64, e_dc: f64, theta: f64, omega: f64, gamma_dipole: f64) -> Result<f64> {
    rabi_frequency_for(
        DriveDirection::Along110,
        e_ac,
        e_dc,
        theta,
        omega,
        gamma_dipole,
        DetuningForm::Corrected,
    )
}

/// On-resonance Rabi frequency, γE_ac·|coupling|/(2ħ), rad/s.
pub fn resonant_rabi_frequency(direction: DriveDirection, e_ac: f64, theta_mix: f64, gamma_dipole: f64) -> Result<f64> {
    Ok(stark_energy(gamma_dipole, e_ac)? * direction.coupling(theta_mix).abs() / (2.0 * CONSTANTS.hbar))
}
