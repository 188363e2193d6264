//! Exact propagation of the three-level state under dc + ac fields.
//!
//! The Hamiltonian is held constant over each step at its midpoint value and
//! exponentiated exactly through its eigendecomposition. Being real
//! symmetric, each step is `V diag(e^{-iλh/ħ}) Vᵀ`.

use std::f64::consts::{PI, TAU};

use nalgebra::{SymmetricEigen, Vector3};
use num_complex::Complex64;
use rayon::prelude::*;

use crate::drive::{resonant_omega, DetuningForm, DriveDirection, DriveSpec};
use crate::error::{domain, Error, Result};
use crate::stark::{direction_matrix, numeric_spectrum, FieldSpec, StarkSpectrum};
use crate::units::{stark_energy, CONSTANTS};

pub type State = Vector3<Complex64>;

/// Steps per drive period (or per ħ/splitting) in the default time step.
pub const STEPS_PER_PERIOD: f64 = 200.0;

/// Upper bound on ω·dt and splitting·dt/ħ.
pub const MAX_PHASE_PER_STEP: f64 = 0.2;

/// Time dependence of the static field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DcSchedule {
    Constant(FieldSpec),
    /// Linear interpolation of magnitude and direction over `ramp_time`,
    /// then held at `to`.
    Ramp {
        from: FieldSpec,
        to: FieldSpec,
        ramp_time: f64,
    },
}

impl DcSchedule {
    pub fn ramp(from: FieldSpec, to: FieldSpec, ramp_time: f64) -> Result<Self> {
        if !(ramp_time > 0.0) {
            return domain(format!("ramp_time must be > 0, got {ramp_time}"));
        }
        if from.direction().dot(&to.direction()) <= -1.0 + 1e-12 {
            return domain("cannot interpolate between antiparallel field directions");
        }
        Ok(DcSchedule::Ramp { from, to, ramp_time })
    }

    pub fn field_at(&self, t: f64) -> FieldSpec {
        match *self {
            DcSchedule::Constant(f) => f,
            DcSchedule::Ramp { from, to, ramp_time } => {
                let s = (t / ramp_time).clamp(0.0, 1.0);
                let mag = from.magnitude() + s * (to.magnitude() - from.magnitude());
                let dir = from.direction() * (1.0 - s) + to.direction() * s;
                FieldSpec::new(mag, dir).expect("interpolated field is valid")
            }
        }
    }

    fn max_magnitude(&self) -> f64 {
        match *self {
            DcSchedule::Constant(f) => f.magnitude(),
            DcSchedule::Ramp { from, to, .. } => from.magnitude().max(to.magnitude()),
        }
    }

    fn is_constant(&self) -> bool {
        matches!(self, DcSchedule::Constant(_))
    }
}

/// A rectangular cos(ωt + φ) pulse on top of a dc schedule.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PulseProgram {
    pub dc: DcSchedule,
    pub drive: DriveSpec,
    /// s.
    pub duration: f64,
    /// Maximum step, s. The actual step divides `duration` evenly.
    pub dt: f64,
    /// Stark coupling, C·m.
    pub gamma_dipole: f64,
    /// Record every n-th step (the final step is always recorded).
    pub sample_every: usize,
    pub record_states: bool,
}

impl PulseProgram {
    /// A program with the default time step.
    pub fn new(dc: DcSchedule, drive: DriveSpec, duration: f64, gamma_dipole: f64) -> Result<Self> {
        let mut p = PulseProgram {
            dc,
            drive,
            duration,
            dt: 1.0,
            gamma_dipole,
            sample_every: 1,
            record_states: false,
        };
        p.dt = p.default_dt()?;
        Ok(p)
    }

    pub fn with_dt(mut self, dt: f64) -> Self {
        self.dt = dt;
        self
    }

    pub fn with_sampling(mut self, every: usize) -> Self {
        self.sample_every = every.max(1);
        self
    }

    /// Largest dc level spread over the schedule, eV.
    pub fn max_splitting(&self) -> Result<f64> {
        // max - min of the roots of x³ - x + 2η is at most 2 for any direction.
        let probe = |f: FieldSpec| -> Result<f64> {
            let s = numeric_spectrum(&f, self.gamma_dipole)?;
            let lo = s.xi.iter().copied().fold(f64::INFINITY, f64::min);
            let hi = s.xi.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            Ok(hi - lo)
        };
        let spread = match self.dc {
            DcSchedule::Constant(f) => probe(f)?,
            DcSchedule::Ramp { .. } => 2.0,
        };
        Ok(spread * stark_energy(self.gamma_dipole, self.dc.max_magnitude())?)
    }

    /// (1/200)·min(2π/ω, ħ/splitting).
    pub fn default_dt(&self) -> Result<f64> {
        self.drive.validate()?;
        let splitting = self.max_splitting()?;
        let mut scale = TAU / self.drive.omega;
        if splitting > 0.0 {
            scale = scale.min(CONSTANTS.hbar / splitting);
        }
        Ok(scale / STEPS_PER_PERIOD)
    }

    pub fn validate(&self) -> Result<()> {
        self.drive.validate()?;
        if !(self.dt > 0.0) || !self.dt.is_finite() {
            return Err(Error::Resolution(format!("dt must be > 0, got {}", self.dt)));
        }
        if !(self.duration >= self.dt) || !self.duration.is_finite() {
            return Err(Error::Resolution(format!(
                "duration {:.3e} s must be at least dt = {:.3e} s",
                self.duration, self.dt
            )));
        }
        let drive_phase = self.drive.omega * self.dt;
        if drive_phase >= MAX_PHASE_PER_STEP {
            return Err(Error::Resolution(format!(
                "omega*dt = {drive_phase:.3} does not resolve the drive (needs < {MAX_PHASE_PER_STEP}); use dt < {:.3e} s",
                MAX_PHASE_PER_STEP / self.drive.omega
            )));
        }
        let split_phase = self.max_splitting()? * self.dt / CONSTANTS.hbar;
        if split_phase >= MAX_PHASE_PER_STEP {
            return Err(Error::Resolution(format!(
                "splitting*dt/hbar = {split_phase:.3} does not resolve the level splitting (needs < {MAX_PHASE_PER_STEP})"
            )));
        }
        Ok(())
    }

    /// Step count and the uniform step that exactly tiles `duration`.
    pub fn steps(&self) -> (usize, f64) {
        let n = ((self.duration / self.dt) - 1e-9).ceil().max(1.0) as usize;
        (n, self.duration / n as f64)
    }

    /// Instantaneous Hamiltonian in eV on the {X, Y, Z} basis.
    pub fn hamiltonian_at(&self, t: f64) -> nalgebra::Matrix3<f64> {
        let dc = self.dc.field_at(t);
        let e = dc.direction() * dc.magnitude() + self.drive.field_at(t);
        // Linear in the field vector: H = (γ/e)·K(E).
        direction_matrix(&e) * (self.gamma_dipole / CONSTANTS.elementary_charge)
    }
}

#[derive(Clone, Debug, Default)]
pub struct EvolutionTrace {
    /// s.
    pub times: Vec<f64>,
    /// (P_ξ1, P_ξ2, P_ξ3) in the instantaneous dc eigenbasis.
    pub populations: Vec<[f64; 3]>,
    /// States on the {X, Y, Z} basis, when requested.
    pub states: Option<Vec<State>>,
    /// Drive carrier, used to average out carrier-frequency ripple in
    /// [`extract_rabi`].
    pub drive_omega: Option<f64>,
}

impl EvolutionTrace {
    pub fn p_xi2(&self) -> Vec<f64> {
        self.populations.iter().map(|p| p[1]).collect()
    }

    pub fn last(&self) -> Option<[f64; 3]> {
        self.populations.last().copied()
    }
}

/// The state |ξ_i⟩ (i in 0..3) of `spectrum` as a complex vector.
pub fn eigenstate(spectrum: &StarkSpectrum, i: usize) -> State {
    spectrum.eigvecs[i].map(|x| Complex64::new(x, 0.0))
}

pub fn populations(spectrum: &StarkSpectrum, psi: &State) -> [f64; 3] {
    std::array::from_fn(|i| {
        let v = &spectrum.eigvecs[i];
        (psi.x * v.x + psi.y * v.y + psi.z * v.z).norm_sqr()
    })
}

fn step(psi: &State, h: &nalgebra::Matrix3<f64>, dt: f64) -> State {
    let eig = SymmetricEigen::new(*h);
    let v = eig.eigenvectors;
    let mut out = State::zeros();
    for k in 0..3 {
        let col = v.column(k);
        let amp = psi.x * col[0] + psi.y * col[1] + psi.z * col[2];
        let phase = Complex64::from_polar(1.0, -eig.eigenvalues[k] * dt / CONSTANTS.hbar);
        let a = amp * phase;
        out.x += a * col[0];
        out.y += a * col[1];
        out.z += a * col[2];
    }
    out
}

fn check_initial(initial: &State) -> Result<()> {
    let norm = initial.norm();
    if (norm - 1.0).abs() > 1e-12 {
        return domain(format!("initial state must be normalized, |psi| = {norm}"));
    }
    Ok(())
}

fn run<F: FnMut(usize, f64, &State)>(program: &PulseProgram, initial: &State, mut on_step: F) -> Result<State> {
    program.validate()?;
    check_initial(initial)?;
    let (n, h) = program.steps();
    let mut psi = *initial;
    on_step(0, 0.0, &psi);
    for k in 0..n {
        let t_mid = (k as f64 + 0.5) * h;
        psi = step(&psi, &program.hamiltonian_at(t_mid), h);
        on_step(k + 1, (k + 1) as f64 * h, &psi);
    }
    Ok(psi)
}

/// Propagate `initial` (on the {X, Y, Z} basis) through `program`.
pub fn propagate(program: &PulseProgram, initial: &State) -> Result<EvolutionTrace> {
    let (n, _) = program.steps();
    let fixed = if program.dc.is_constant() {
        Some(numeric_spectrum(&program.dc.field_at(0.0), program.gamma_dipole)?)
    } else {
        None
    };
    let mut trace = EvolutionTrace {
        drive_omega: Some(program.drive.omega),
        states: program.record_states.then(Vec::new),
        ..Default::default()
    };
    let mut failure = None;
    run(program, initial, |k, t, psi| {
        if k % program.sample_every != 0 && k != n {
            return;
        }
        let pops = match &fixed {
            Some(s) => populations(s, psi),
            None => match numeric_spectrum(&program.dc.field_at(t), program.gamma_dipole) {
                Ok(s) => populations(&s, psi),
                Err(e) => {
                    failure.get_or_insert(e);
                    return;
                }
            },
        };
        trace.times.push(t);
        trace.populations.push(pops);
        if let Some(states) = trace.states.as_mut() {
            states.push(*psi);
        }
    })?;
    match failure {
        Some(e) => Err(e),
        None => Ok(trace),
    }
}

/// Final state only.
pub fn final_state(program: &PulseProgram, initial: &State) -> Result<State> {
    run(program, initial, |_, _, _| {})
}

fn moving_average(values: &[f64], window: usize) -> (Vec<f64>, usize) {
    if window <= 1 || window >= values.len() {
        return (values.to_vec(), 0);
    }
    let mut prefix = Vec::with_capacity(values.len() + 1);
    prefix.push(0.0);
    for v in values {
        prefix.push(prefix.last().unwrap() + v);
    }
    let out = (0..=values.len() - window)
        .map(|i| (prefix[i + window] - prefix[i]) / window as f64)
        .collect();
    (out, window / 2)
}

/// Rabi frequency Ω (rad/s) measured from the P_ξ2 oscillation.
///
/// P_ξ2 oscillates at 2Ω. Upward crossings of its mean are located by linear
/// interpolation; Ω = π / (mean spacing of upward crossings). When the trace
/// knows its drive carrier, P_ξ2 is first averaged over one carrier period.
pub fn extract_rabi(trace: &EvolutionTrace) -> Result<f64> {
    let p = trace.p_xi2();
    if p.len() < 8 || trace.times.len() != p.len() {
        return Err(Error::Trace(format!("trace has only {} samples", p.len())));
    }
    let dt = (trace.times[p.len() - 1] - trace.times[0]) / (p.len() - 1) as f64;
    let window = trace.drive_omega.map_or(1, |w| (TAU / w / dt).round() as usize);
    let (smooth, offset) = moving_average(&p, window);
    let times = &trace.times[offset..offset + smooth.len()];

    let mean = smooth.iter().sum::<f64>() / smooth.len() as f64;
    let swing = smooth.iter().fold(0.0f64, |m, v| m.max((v - mean).abs()));
    if swing < 1e-6 {
        return Err(Error::Trace("P_xi2 does not oscillate".into()));
    }
    let up: Vec<f64> = smooth
        .windows(2)
        .zip(times.windows(2))
        .filter(|(v, _)| v[0] - mean < 0.0 && v[1] - mean >= 0.0)
        .map(|(v, t)| {
            let (a, b) = (v[0] - mean, v[1] - mean);
            t[0] + (t[1] - t[0]) * (-a / (b - a))
        })
        .collect();
    if up.len() < 3 {
        return Err(Error::Trace(format!(
            "need at least 2 full P_xi2 periods, found {} upward crossings; lengthen the trace",
            up.len()
        )));
    }
    let period = (up[up.len() - 1] - up[0]) / (up.len() - 1) as f64;
    Ok(PI / period)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PiPulse {
    /// Carrier angular frequency, rad/s.
    pub omega: f64,
    /// s.
    pub duration: f64,
    /// Final P_ξ2 starting from |ξ₁⟩.
    pub fidelity: f64,
    pub evaluations: usize,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CalibrationOptions {
    /// Resonance reference used for the frequency seed.
    pub seed_form: DetuningForm,
    pub rounds: usize,
    /// Grid points per coordinate scan before golden-section refinement.
    pub scan_points: usize,
    /// Half-width of the first frequency scan relative to the seed.
    pub omega_span: f64,
    /// Half-width of the first duration scan relative to the seed.
    pub duration_span: f64,
    /// Scan widths shrink by this factor each round.
    pub shrink: f64,
    pub golden_iterations: usize,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        CalibrationOptions {
            seed_form: DetuningForm::Corrected,
            rounds: 3,
            scan_points: 25,
            omega_span: 0.6,
            duration_span: 0.5,
            shrink: 0.25,
            golden_iterations: 30,
        }
    }
}

/// Fidelity below which calibration is reported as failed.
pub const MIN_FIDELITY: f64 = 0.5;

struct Objective<'a> {
    dc: &'a FieldSpec,
    direction: DriveDirection,
    e_ac: f64,
    gamma_dipole: f64,
    initial: State,
    target: Vector3<f64>,
}

impl Objective<'_> {
    fn eval(&self, omega: f64, duration: f64) -> f64 {
        let run = || -> Result<f64> {
            let drive = DriveSpec::new(self.e_ac, self.direction, omega)?;
            let program = PulseProgram::new(DcSchedule::Constant(*self.dc), drive, duration, self.gamma_dipole)?;
            let program = program.with_dt(program.dt.min(duration));
            let psi = final_state(&program, &self.initial)?;
            let t = &self.target;
            Ok((psi.x * t.x + psi.y * t.y + psi.z * t.z).norm_sqr())
        };
        run().unwrap_or(0.0)
    }
}

/// Maximize f on [lo, hi] by a grid scan followed by golden-section search
/// around the best grid point. Returns (argmax, max, evaluations).
fn maximize_1d<F: Fn(f64) -> f64 + Sync>(
    f: F,
    lo: f64,
    hi: f64,
    points: usize,
    iterations: usize,
) -> (f64, f64, usize) {
    let points = points.max(3);
    let step = (hi - lo) / (points - 1) as f64;
    let grid: Vec<(f64, f64)> = (0..points)
        .into_par_iter()
        .map(|i| {
            let x = lo + step * i as f64;
            (x, f(x))
        })
        .collect();
    let (mut best_x, mut best_f) = grid
        .iter()
        .copied()
        .fold((lo, f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a });
    let mut evals = points;

    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = ((best_x - step).max(lo), (best_x + step).min(hi));
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    evals += 2;
    for _ in 0..iterations {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
        evals += 1;
    }
    for (x, fx) in [(c, fc), (d, fd)] {
        if fx > best_f {
            best_x = x;
            best_f = fx;
        }
    }
    (best_x, best_f, evals)
}

/// Find the (ω, duration) of a rectangular pulse maximizing the transfer
/// |ξ₁⟩ → |ξ₂⟩, by alternating per-coordinate scans with golden-section
/// refinement. The search starts at the analytic resonance and the
/// rotating-wave π time π/(2Ω).
pub fn calibrate_pi_pulse(
    dc: &FieldSpec,
    direction: DriveDirection,
    e_ac: f64,
    gamma_dipole: f64,
    options: &CalibrationOptions,
) -> Result<PiPulse> {
    if !(e_ac > 0.0) {
        return domain(format!("calibration needs e_ac > 0, got {e_ac}"));
    }
    if !(dc.magnitude() > 0.0) {
        return domain("calibration needs a non-zero dc field");
    }
    let spectrum = numeric_spectrum(dc, gamma_dipole)?;
    let coupling = direction.coupling(spectrum.theta_mix);
    if coupling.abs() < 1e-9 {
        return domain(format!(
            "a {direction:?} drive does not couple xi1 and xi2 at mixing angle {:.6} rad",
            spectrum.theta_mix
        ));
    }
    let omega_seed = match (dc.cleavage_angle(), options.seed_form) {
        (Some(theta), form) => resonant_omega(dc.magnitude(), theta, gamma_dipole, form)?,
        (None, DetuningForm::Corrected) => spectrum.pseudospin_splitting() / CONSTANTS.hbar,
        (None, DetuningForm::AsPrinted) => {
            return domain("the printed detuning form is only defined for cleavage-plane fields")
        }
    };
    let rabi = stark_energy(gamma_dipole, e_ac)? * coupling.abs() / (2.0 * CONSTANTS.hbar);
    let duration_seed = PI / (2.0 * rabi);

    let objective = Objective {
        dc,
        direction,
        e_ac,
        gamma_dipole,
        initial: eigenstate(&spectrum, 0),
        target: spectrum.eigvecs[1],
    };

    let (mut omega, mut duration) = (omega_seed, duration_seed);
    let mut fidelity = objective.eval(omega, duration);
    let mut evaluations = 1;
    let (mut omega_width, mut duration_width) =
        (options.omega_span * omega_seed, options.duration_span * duration_seed);
    for _ in 0..options.rounds {
        let lo = (omega - omega_width).max(1e-3 * omega_seed);
        let (w, f, n) = maximize_1d(
            |w| objective.eval(w, duration),
            lo,
            omega + omega_width,
            options.scan_points,
            options.golden_iterations,
        );
        evaluations += n;
        if f >= fidelity {
            (omega, fidelity) = (w, f);
        }
        let lo = (duration - duration_width).max(0.05 * duration_seed);
        let (t, f, n) = maximize_1d(
            |t| objective.eval(omega, t),
            lo,
            duration + duration_width,
            options.scan_points,
            options.golden_iterations,
        );
        evaluations += n;
        if f >= fidelity {
            (duration, fidelity) = (t, f);
        }
        omega_width *= options.shrink;
        duration_width *= options.shrink;
    }

    if fidelity < MIN_FIDELITY {
        return Err(Error::Convergence {
            fidelity,
            omega,
            duration,
        });
    }
    Ok(PiPulse {
        omega,
        duration,
        fidelity,
        evaluations,
    })
}
