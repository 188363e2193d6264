//! Physical constants, material parameters and the two energy conversions
//! everything else is measured against.
//!
//! Energies are in eV, times in seconds, fields in V/m throughout the crate.

use crate::error::{domain, Result};

/// CODATA 2018 values.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    /// Reduced Planck constant, eV·s.
    pub hbar: f64,
    /// Boltzmann constant, eV/K.
    pub boltzmann: f64,
    /// Bohr magneton, eV/T.
    pub bohr_magneton: f64,
    /// Elementary charge, C.
    pub elementary_charge: f64,
}

pub const CONSTANTS: Constants = Constants {
    hbar: 6.582_119_569e-16,
    boltzmann: 8.617_333_262e-5,
    bohr_magneton: 5.788_381_806_0e-5,
    elementary_charge: 1.602_176_634e-19,
};

impl Default for Constants {
    fn default() -> Self {
        CONSTANTS
    }
}

/// Parameters of the ion/host system.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MaterialParams {
    /// Core-spin/hole-spin exchange, eV.
    pub alpha: f64,
    /// Hole spin-orbit coupling, eV.
    pub beta: f64,
    /// Linear Stark coupling of the J=1 multiplet, C·m.
    pub gamma_dipole: f64,
    /// Measured g-factor of the J=1 multiplet.
    pub g_factor: f64,
    /// Bound-hole wave function radius, m.
    pub hole_radius: f64,
}

impl MaterialParams {
    /// Mn acceptor in GaAs.
    pub const MN_GAAS: MaterialParams = MaterialParams {
        alpha: 0.300,
        beta: -0.080,
        gamma_dipole: 6.4e-30,
        g_factor: 2.77,
        hole_radius: 1.3e-9,
    };

    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma_dipole", self.gamma_dipole),
            ("g_factor", self.g_factor),
            ("hole_radius", self.hole_radius),
        ] {
            if !v.is_finite() {
                return domain(format!("{name} must be finite, got {v}"));
            }
        }
        if self.gamma_dipole <= 0.0 {
            return domain(format!("gamma_dipole must be > 0, got {}", self.gamma_dipole));
        }
        if self.g_factor <= 0.0 {
            return domain(format!("g_factor must be > 0, got {}", self.g_factor));
        }
        if self.hole_radius <= 0.0 {
            return domain(format!("hole_radius must be > 0, got {}", self.hole_radius));
        }
        Ok(())
    }
}

impl Default for MaterialParams {
    fn default() -> Self {
        Self::MN_GAAS
    }
}

/// Stark energy scale γE in eV for a dipole coupling in C·m and a field in V/m.
pub fn stark_energy(gamma_dipole: f64, field_magnitude: f64) -> Result<f64> {
    if !(gamma_dipole >= 0.0) || !(field_magnitude >= 0.0) {
        return domain(format!(
            "stark_energy needs non-negative arguments, got gamma = {gamma_dipole}, E = {field_magnitude}"
        ));
    }
    Ok(gamma_dipole * field_magnitude / CONSTANTS.elementary_charge)
}

/// Zeeman splitting g·μ_B·B in eV.
pub fn zeeman_equivalent(g_factor: f64, b_field: f64) -> Result<f64> {
    if !(b_field >= 0.0) || !g_factor.is_finite() {
        return domain(format!(
            "zeeman_equivalent needs finite g and B >= 0, got g = {g_factor}, B = {b_field}"
        ));
    }
    Ok(g_factor * CONSTANTS.bohr_magneton * b_field)
}
