//! Exchange splitting between two ions versus separation, and the gate time
//! it implies.
//!
//! The splitting decays exponentially with the bound-hole radius from an
//! anchor value at a reference separation. Each ion is treated as a
//! pseudospin 1/2 with an isotropic exchange splitting J between them.

use std::f64::consts::PI;

use crate::error::{domain, Result};
use crate::units::CONSTANTS;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairModel {
    /// Splitting at the reference separation, eV.
    pub j0: f64,
    /// Reference separation, m.
    pub d0: f64,
    /// m.
    pub decay_length: f64,
}

impl PairModel {
    pub fn new(j0: f64, d0: f64, decay_length: f64) -> Result<Self> {
        for (name, v) in [("j0", j0), ("d0", d0), ("decay_length", decay_length)] {
            if !(v > 0.0) || !v.is_finite() {
                return domain(format!("{name} must be finite and > 0, got {v}"));
            }
        }
        Ok(PairModel { j0, d0, decay_length })
    }
}

impl Default for PairModel {
    /// 100 meV at 12 Å, 13 Å decay length.
    fn default() -> Self {
        PairModel {
            j0: 0.1,
            d0: 1.2e-9,
            decay_length: 1.3e-9,
        }
    }
}

/// J(d) = j0·exp(-(d - d0)/decay_length), eV.
pub fn exchange_coupling(d: f64, model: &PairModel) -> Result<f64> {
    if !(d > 0.0) || !d.is_finite() {
        return domain(format!("separation must be finite and > 0, got {d}"));
    }
    Ok(model.j0 * (-(d - model.d0) / model.decay_length).exp())
}

/// √SWAP time πħ/(2J), s.
pub fn entangling_time(j: f64) -> Result<f64> {
    if !(j > 0.0) || !j.is_finite() {
        return domain(format!("exchange splitting must be finite and > 0, got {j}"));
    }
    Ok(PI * CONSTANTS.hbar / (2.0 * j))
}
