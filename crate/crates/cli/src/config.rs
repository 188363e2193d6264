//! Run configuration.
//!
//! The file is a flat list of `key = value` lines with `#` comments (a TOML
//! subset). Every key is optional; omitted keys take the Mn:GaAs defaults.
//! Angles are given in degrees.

use std::path::PathBuf;

use ionspin_core::{DetuningForm, DriveDirection, MaterialParams, PairModel};
use serde::Deserialize;

use crate::{CliError, Result};

/// Sanity cap on any field magnitude, V/m.
pub const MAX_FIELD: f64 = 1e9;

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    // material
    alpha_ev: Option<f64>,
    beta_ev: Option<f64>,
    gamma_dipole: Option<f64>,
    g_factor: Option<f64>,
    hole_radius_m: Option<f64>,

    // geometry and sweeps
    theta_deg: Option<f64>,
    theta_min_deg: Option<f64>,
    theta_max_deg: Option<f64>,
    grid_points: Option<usize>,

    // fields and drive
    e_dc: Option<f64>,
    e_ac: Option<f64>,
    drive_direction: Option<String>,
    omega: Option<f64>,
    phase_deg: Option<f64>,
    detuning_form: Option<String>,

    // propagation
    duration_s: Option<f64>,
    dt_s: Option<f64>,
    sample_every: Option<usize>,

    // protocol
    temperature_k: Option<f64>,
    background_fraction: Option<f64>,
    pulse: Option<String>,
    pulse_duration_s: Option<f64>,
    protocol_trace_path: Option<PathBuf>,

    // multiplet
    degeneracy_tol_ev: Option<f64>,

    // pair
    pair_j0_ev: Option<f64>,
    pair_d0_m: Option<f64>,
    pair_decay_m: Option<f64>,
    d_min_m: Option<f64>,
    d_max_m: Option<f64>,

    output_path: Option<PathBuf>,
}

/// Which pulse the `protocol` subcommand applies when no explicit duration is given.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PulseChoice {
    Pi,
    HalfPi,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub material: MaterialParams,
    /// rad.
    pub theta: f64,
    pub theta_min: f64,
    pub theta_max: f64,
    pub grid_points: usize,
    pub e_dc: f64,
    pub e_ac: f64,
    pub drive_direction: DriveDirection,
    /// Carrier frequency, rad/s; `None` means resonant.
    pub omega: Option<f64>,
    /// rad.
    pub phase: f64,
    pub detuning_form: DetuningForm,
    pub duration: f64,
    pub dt: Option<f64>,
    pub sample_every: usize,
    pub temperature: f64,
    pub background_fraction: f64,
    pub pulse: PulseChoice,
    pub pulse_duration: Option<f64>,
    pub protocol_trace_path: Option<PathBuf>,
    pub degeneracy_tol: f64,
    pub pair: PairModel,
    pub d_min: f64,
    pub d_max: f64,
    pub output_path: Option<PathBuf>,
}

impl Default for RunConfig {
    fn default() -> Self {
        parse_config("").expect("defaults are valid")
    }
}

fn range(key: &'static str, value: f64, ok: bool, bound: &str) -> Result<()> {
    if ok && value.is_finite() {
        Ok(())
    } else {
        Err(CliError::Range {
            key,
            value,
            bound: bound.to_string(),
        })
    }
}

pub fn parse_config(text: &str) -> Result<RunConfig> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))?;
    let d = MaterialParams::MN_GAAS;

    let material = MaterialParams {
        alpha: raw.alpha_ev.unwrap_or(d.alpha),
        beta: raw.beta_ev.unwrap_or(d.beta),
        gamma_dipole: raw.gamma_dipole.unwrap_or(d.gamma_dipole),
        g_factor: raw.g_factor.unwrap_or(d.g_factor),
        hole_radius: raw.hole_radius_m.unwrap_or(d.hole_radius),
    };
    range("alpha_ev", material.alpha, true, "finite")?;
    range("beta_ev", material.beta, true, "finite")?;
    range(
        "gamma_dipole",
        material.gamma_dipole,
        material.gamma_dipole > 0.0,
        "> 0",
    )?;
    range("g_factor", material.g_factor, material.g_factor > 0.0, "> 0")?;
    range("hole_radius_m", material.hole_radius, material.hole_radius > 0.0, "> 0")?;

    let theta_deg = raw.theta_deg.unwrap_or(0.0);
    range("theta_deg", theta_deg, true, "finite")?;
    let theta_min_deg = raw.theta_min_deg.unwrap_or(-180.0);
    let theta_max_deg = raw.theta_max_deg.unwrap_or(180.0);
    range("theta_min_deg", theta_min_deg, true, "finite")?;
    range(
        "theta_max_deg",
        theta_max_deg,
        theta_max_deg > theta_min_deg,
        "> theta_min_deg",
    )?;
    let grid_points = raw.grid_points.unwrap_or(721);
    range("grid_points", grid_points as f64, grid_points >= 2, ">= 2")?;

    let e_dc = raw.e_dc.unwrap_or(1.0e7);
    let e_ac = raw.e_ac.unwrap_or(2.5e6);
    let field_bound = format!("0 < value <= {MAX_FIELD:e} V/m");
    range("e_dc", e_dc, e_dc > 0.0 && e_dc <= MAX_FIELD, &field_bound)?;
    range(
        "e_ac",
        e_ac,
        (0.0..=MAX_FIELD).contains(&e_ac),
        &format!("0 <= value <= {MAX_FIELD:e} V/m"),
    )?;

    let drive_direction = match raw.drive_direction.as_deref() {
        None => DriveDirection::Along110,
        Some(s) => s
            .parse()
            .map_err(|e: String| CliError::Config(format!("drive_direction: {e}")))?,
    };
    let detuning_form = match raw.detuning_form.as_deref() {
        None => DetuningForm::Corrected,
        Some(s) => s
            .parse()
            .map_err(|e: String| CliError::Config(format!("detuning_form: {e}")))?,
    };
    if let Some(w) = raw.omega {
        range("omega", w, w > 0.0, "> 0 rad/s")?;
    }
    let phase_deg = raw.phase_deg.unwrap_or(0.0);
    range("phase_deg", phase_deg, true, "finite")?;

    let duration = raw.duration_s.unwrap_or(200e-12);
    range(
        "duration_s",
        duration,
        duration > 0.0 && duration <= 1e-6,
        "0 < value <= 1e-6 s",
    )?;
    if let Some(dt) = raw.dt_s {
        range("dt_s", dt, dt > 0.0 && dt <= duration, "0 < value <= duration_s")?;
    }
    let sample_every = raw.sample_every.unwrap_or(1);
    range("sample_every", sample_every as f64, sample_every >= 1, ">= 1")?;

    let temperature = raw.temperature_k.unwrap_or(0.5);
    range("temperature_k", temperature, temperature > 0.0, "> 0 K")?;
    let background_fraction = raw.background_fraction.unwrap_or(0.1);
    range(
        "background_fraction",
        background_fraction,
        (0.0..1.0).contains(&background_fraction),
        "0 <= value < 1",
    )?;
    let pulse = match raw.pulse.as_deref() {
        None | Some("pi") => PulseChoice::Pi,
        Some("half_pi") => PulseChoice::HalfPi,
        Some("none") => PulseChoice::None,
        Some(other) => {
            return Err(CliError::Config(format!(
                "pulse: unknown value {other:?}, expected \"pi\", \"half_pi\" or \"none\""
            )))
        }
    };
    if let Some(t) = raw.pulse_duration_s {
        range("pulse_duration_s", t, (0.0..=1e-6).contains(&t), "0 <= value <= 1e-6 s")?;
    }

    let degeneracy_tol = raw.degeneracy_tol_ev.unwrap_or(1e-9);
    range("degeneracy_tol_ev", degeneracy_tol, degeneracy_tol > 0.0, "> 0 eV")?;

    let pd = PairModel::default();
    let pair = PairModel {
        j0: raw.pair_j0_ev.unwrap_or(pd.j0),
        d0: raw.pair_d0_m.unwrap_or(pd.d0),
        decay_length: raw.pair_decay_m.unwrap_or(material.hole_radius),
    };
    range("pair_j0_ev", pair.j0, pair.j0 > 0.0, "> 0 eV")?;
    range("pair_d0_m", pair.d0, pair.d0 > 0.0, "> 0 m")?;
    range("pair_decay_m", pair.decay_length, pair.decay_length > 0.0, "> 0 m")?;
    let d_min = raw.d_min_m.unwrap_or(pd.d0);
    let d_max = raw.d_max_m.unwrap_or(1.0e-8);
    range("d_min_m", d_min, d_min > 0.0, "> 0 m")?;
    range("d_max_m", d_max, d_max > d_min, "> d_min_m")?;

    Ok(RunConfig {
        material,
        theta: theta_deg.to_radians(),
        theta_min: theta_min_deg.to_radians(),
        theta_max: theta_max_deg.to_radians(),
        grid_points,
        e_dc,
        e_ac,
        drive_direction,
        omega: raw.omega,
        phase: phase_deg.to_radians(),
        detuning_form,
        duration,
        dt: raw.dt_s,
        sample_every,
        temperature,
        background_fraction,
        pulse,
        pulse_duration: raw.pulse_duration_s,
        protocol_trace_path: raw.protocol_trace_path,
        degeneracy_tol,
        pair,
        d_min,
        d_max,
        output_path: raw.output_path,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c = parse_config("").unwrap();
        assert_eq!(c.material, MaterialParams::MN_GAAS);
        assert_eq!(c.material.gamma_dipole, 6.4e-30);
        assert_eq!(c.material.alpha, 0.3);
        assert_eq!(c.material.beta, -0.08);
        assert_eq!(c.material.g_factor, 2.77);
        assert_eq!(c.theta, 0.0);
        assert_eq!(c.grid_points, 721);
        assert_eq!(c.pair, PairModel::default());
    }

    #[test]
    fn comments_and_values() {
        let c =
            parse_config("# reference point\ntheta_deg = 0\ne_dc = 1e7 # V/m\ndrive_direction = \"001\"\n").unwrap();
        assert_eq!(c.theta, 0.0);
        assert_eq!(c.e_dc, 1e7);
        assert_eq!(c.drive_direction, DriveDirection::Along001);
        let c = parse_config("theta_deg = 90").unwrap();
        assert!((c.theta - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn negative_gamma_is_a_range_error() {
        let e = parse_config("gamma_dipole = -1").unwrap_err();
        assert_eq!(e.code(), "E_RANGE");
        assert!(e.to_string().contains("gamma_dipole"));
        assert!(e.to_string().contains("> 0"));
    }

    #[test]
    fn unknown_key_lists_valid_keys() {
        let e = parse_config("thetta_deg = 3").unwrap_err();
        assert_eq!(e.code(), "E_CONFIG");
        let msg = e.to_string();
        assert!(msg.contains("thetta_deg"));
        assert!(
            msg.contains("theta_deg") && msg.contains("gamma_dipole") && msg.contains("grid_points"),
            "{msg}"
        );
    }

    #[test]
    fn field_cap_and_grid_bounds() {
        assert_eq!(parse_config("e_dc = 2e9").unwrap_err().code(), "E_RANGE");
        assert_eq!(parse_config("grid_points = 1").unwrap_err().code(), "E_RANGE");
        assert_eq!(parse_config("background_fraction = 1.0").unwrap_err().code(), "E_RANGE");
        assert_eq!(
            parse_config("theta_min_deg = 10\ntheta_max_deg = 0")
                .unwrap_err()
                .code(),
            "E_RANGE"
        );
        assert_eq!(parse_config("pulse = \"3pi\"").unwrap_err().code(), "E_CONFIG");
        assert_eq!(parse_config("theta_deg = \"zero\"").unwrap_err().code(), "E_CONFIG");
    }
}
