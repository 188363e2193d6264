//! Linear Stark Hamiltonian of the J=1 multiplet and its eigenstructure.
//!
//! In the {X, Y, Z} basis (J_α|α⟩ = 0) the Hamiltonian is
//! `-γE [[0, Ẑ, Ŷ], [Ẑ, 0, X̂], [Ŷ, X̂, 0]]`, with Ê the unit field direction in
//! cubic axes. Its eigenvalues in units of γE are the roots of
//! x³ - x + 2η with η = ÊxÊyÊz.
//!
//! Fields in the (1-10) cleavage plane are parametrized by the angle θ from
//! [001]: Ê = (sinθ/√2, sinθ/√2, cosθ). For such fields (|X⟩-|Y⟩)/√2 is an
//! exact eigenvector (branch ξ₃ = cosθ) and the other two branches live in
//! span{(|X⟩+|Y⟩)/√2, |Z⟩}:
//!
//! ```text
//! |ξ₁⟩ = ( sinΘ/√2,  sinΘ/√2, cosΘ)
//! |ξ₂⟩ = (-cosΘ/√2, -cosΘ/√2, sinΘ)
//! ```

use std::f64::consts::{FRAC_1_SQRT_2, PI, SQRT_2};

use nalgebra::{Matrix3, SymmetricEigen, Vector3};
use num_complex::Complex64;

use crate::angmom::{anticommutator, CMatrix, SpinBasis, SpinOperators};
use crate::error::{domain, Result};
use crate::units::stark_energy;

/// Gap (units of γE) below which two branches are reported as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Tolerance on Ex = Ey for a field to count as lying in the cleavage plane.
pub const IN_PLANE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct FieldSpec {
    magnitude: f64,
    direction: Vector3<f64>,
}

impl FieldSpec {
    /// A field of `magnitude` (V/m) along `direction`, which is normalized here.
    pub fn new(magnitude: f64, direction: Vector3<f64>) -> Result<Self> {
        if !(magnitude >= 0.0) || !magnitude.is_finite() {
            return domain(format!("field magnitude must be finite and >= 0, got {magnitude}"));
        }
        let norm = direction.norm();
        if !(norm > 0.0) || !norm.is_finite() {
            return domain("field direction must be a non-zero finite vector");
        }
        Ok(FieldSpec {
            magnitude,
            direction: direction / norm,
        })
    }

    /// A field in the (1-10) plane at angle `theta` from [001].
    pub fn in_cleavage_plane(theta: f64, magnitude: f64) -> Result<Self> {
        let (s, c) = theta.sin_cos();
        Self::new(magnitude, Vector3::new(s * FRAC_1_SQRT_2, s * FRAC_1_SQRT_2, c))
    }

    pub fn magnitude(&self) -> f64 {
        self.magnitude
    }

    pub fn direction(&self) -> Vector3<f64> {
        self.direction
    }

    /// Product of the direction cosines.
    pub fn eta(&self) -> f64 {
        self.direction.x * self.direction.y * self.direction.z
    }

    /// The cleavage-plane angle θ ∈ (-π, π], or `None` for fields out of the plane.
    pub fn cleavage_angle(&self) -> Option<f64> {
        let d = self.direction;
        ((d.x - d.y).abs() < IN_PLANE_TOL).then(|| (SQRT_2 * 0.5 * (d.x + d.y)).atan2(d.z))
    }

    pub fn with_magnitude(&self, magnitude: f64) -> Result<Self> {
        Self::new(magnitude, self.direction)
    }
}

pub fn field_in_cleavage_plane(theta: f64, magnitude: f64) -> Result<FieldSpec> {
    FieldSpec::in_cleavage_plane(theta, magnitude)
}

/// The dimensionless Hamiltonian H/(γE) for a unit direction.
pub fn direction_matrix(direction: &Vector3<f64>) -> Matrix3<f64> {
    let (x, y, z) = (direction.x, direction.y, direction.z);
    -Matrix3::new(
        0.0, z, y, //
        z, 0.0, x, //
        y, x, 0.0,
    )
}

/// Stark Hamiltonian in eV on the {X, Y, Z} basis.
pub fn stark_hamiltonian(field: &FieldSpec, gamma_dipole: f64) -> Result<Matrix3<f64>> {
    Ok(direction_matrix(&field.direction) * stark_energy(gamma_dipole, field.magnitude)?)
}

/// γ[Ex{Jy,Jz} + Ey{Jz,Jx} + Ez{Jx,Jy}] in eV, built from the operators.
pub fn stark_hamiltonian_from_operators(field: &FieldSpec, gamma_dipole: f64, ops: &SpinOperators) -> Result<CMatrix> {
    if ops.dim() != 3 || ops.basis != SpinBasis::CartesianXyz {
        return domain(format!(
            "operator form needs the Cartesian J=1 operators, got dim {} in {:?}",
            ops.dim(),
            ops.basis
        ));
    }
    let scale = stark_energy(gamma_dipole, field.magnitude)?;
    let e = field.direction * scale;
    let h = anticommutator(&ops.jy, &ops.jz) * Complex64::new(e.x, 0.0)
        + anticommutator(&ops.jz, &ops.jx) * Complex64::new(e.y, 0.0)
        + anticommutator(&ops.jx, &ops.jy) * Complex64::new(e.z, 0.0);
    Ok(h)
}

/// Wrap an angle into (-π, π].
pub(crate) fn wrap_angle(theta: f64) -> f64 {
    let w = theta.rem_euclid(2.0 * PI);
    if w > PI {
        w - 2.0 * PI
    } else {
        w
    }
}

/// Closed-form branches for an in-plane field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticSpectrum {
    /// (ξ₁, ξ₂, ξ₃) in units of γE.
    pub xi: [f64; 3],
    /// Mixing angle Θ ∈ [0, π].
    pub theta_mix: f64,
}

/// Mixing angle Θ(θ) of the lower in-plane branch.
///
/// The (|X+Y⟩, |Z⟩) block of H/(γE) is `[[-c, -s], [-s, 0]]` with
/// c = cosθ, s = sinθ. Writing its traceless part as
/// `-R [[cosψ, sinψ], [sinψ, -cosψ]]` with ψ = atan2(s, c/2), the lower
/// eigenvector is (cos(ψ/2), sin(ψ/2)) up to sign, so Θ = π/2 - ψ/2. This is
/// continuous on (-π, π), equals π/2 at θ = 0 and tends to 0 as θ → π.
pub fn mixing_angle(theta: f64) -> f64 {
    let theta = wrap_angle(theta);
    let psi = theta.sin().atan2(0.5 * theta.cos());
    (PI / 2.0 - psi / 2.0).clamp(0.0, PI)
}

pub fn analytic_spectrum(theta: f64) -> AnalyticSpectrum {
    let c = wrap_angle(theta).cos();
    let root = (4.0 - 3.0 * c * c).sqrt();
    AnalyticSpectrum {
        xi: [(-c - root) / 2.0, (-c + root) / 2.0, c],
        theta_mix: mixing_angle(theta),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct StarkSpectrum {
    /// (ξ₁, ξ₂, ξ₃) in units of γE.
    pub xi: [f64; 3],
    /// The same energies in eV.
    pub energies_ev: [f64; 3],
    /// Real eigenvectors in the {X, Y, Z} basis, ordered as `xi`.
    pub eigvecs: [Vector3<f64>; 3],
    /// Angle between |ξ₁⟩ and |Z⟩, in [0, π].
    pub theta_mix: f64,
    pub eta: f64,
    /// The field lies in the cleavage plane, so labels follow the ξ₃ = cosθ convention.
    pub in_plane: bool,
    /// Two branches are closer than [`DEGENERACY_TOL`]; labels at such a point
    /// come from the fixed (|X⟩-|Y⟩)/√2 eigenvector rather than the solver.
    pub degenerate: bool,
}

impl StarkSpectrum {
    /// Columns are |ξ₁⟩, |ξ₂⟩, |ξ₃⟩.
    pub fn eigvec_matrix(&self) -> Matrix3<f64> {
        Matrix3::from_columns(&self.eigvecs)
    }

    /// ξ₂ - ξ₁ in eV.
    pub fn pseudospin_splitting(&self) -> f64 {
        self.energies_ev[1] - self.energies_ev[0]
    }
}

fn rayleigh(k: &Matrix3<f64>, v: &Vector3<f64>) -> f64 {
    v.dot(&(k * v))
}

/// Diagonalize the Stark Hamiltonian and label its branches.
///
/// The branch structure depends only on the field direction, so a zero
/// magnitude yields the same labels with zero energies in eV.
pub fn numeric_spectrum(field: &FieldSpec, gamma_dipole: f64) -> Result<StarkSpectrum> {
    let scale = stark_energy(gamma_dipole, field.magnitude)?;
    let k = direction_matrix(&field.direction);
    let eig = SymmetricEigen::new(k);
    let vecs: [Vector3<f64>; 3] = std::array::from_fn(|i| eig.eigenvectors.column(i).into_owned());
    let vals: [f64; 3] = std::array::from_fn(|i| eig.eigenvalues[i]);

    let d = field.direction;
    let in_plane = (d.x - d.y).abs() < IN_PLANE_TOL;
    let u = Vector3::new(FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0);
    let w = Vector3::new(FRAC_1_SQRT_2, -FRAC_1_SQRT_2, 0.0);
    let z = Vector3::z();

    let (mut v1, mut v2, mut xi);
    if in_plane {
        // (|X⟩-|Y⟩)/√2 is exact; take the solver's other two vectors with
        // that direction projected out, which also resolves any mixing a
        // near-degeneracy with ξ₃ introduced.
        let k3 = (0..3)
            .max_by(|&a, &b| vecs[a].dot(&w).powi(2).total_cmp(&vecs[b].dot(&w).powi(2)))
            .unwrap();
        let rest: Vec<usize> = (0..3).filter(|&i| i != k3).collect();
        let project = |v: &Vector3<f64>| v - w * w.dot(v);
        let p = project(&vecs[rest[0]]);
        let q = project(&vecs[rest[1]]);
        let (a, b) = if p.norm() >= q.norm() { (p, q) } else { (q, p) };
        let a = a.normalize();
        let b = (b - a * a.dot(&b)).normalize();
        let (la, lb) = (rayleigh(&k, &a), rayleigh(&k, &b));
        if la <= lb {
            (v1, v2) = (a, b);
            xi = [la, lb, rayleigh(&k, &w)];
        } else {
            (v1, v2) = (b, a);
            xi = [lb, la, rayleigh(&k, &w)];
        }
    } else {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| vals[a].total_cmp(&vals[b]));
        v1 = vecs[order[0]];
        v2 = vecs[order[1]];
        xi = [vals[order[0]], vals[order[1]], vals[order[2]]];
    }

    // |ξ₁⟩: non-negative |X+Y⟩ component; at a node of that component, non-negative |Z⟩.
    let a = u.dot(&v1);
    if a < -1e-12 || (a.abs() <= 1e-12 && v1.z < 0.0) {
        v1 = -v1;
    }
    let across = (u.dot(&v1).powi(2) + w.dot(&v1).powi(2)).sqrt();
    let theta_mix = across.atan2(z.dot(&v1));
    let (sin_t, cos_t) = theta_mix.sin_cos();
    let v2_ref = u * -cos_t + z * sin_t;
    if v2.dot(&v2_ref) < 0.0 {
        v2 = -v2;
    }
    let v3 = v1.cross(&v2);
    if in_plane {
        xi[2] = rayleigh(&k, &v3);
    }

    let degenerate = (0..3).any(|i| (i + 1..3).any(|j| (xi[i] - xi[j]).abs() < DEGENERACY_TOL));
    Ok(StarkSpectrum {
        energies_ev: xi.map(|x| x * scale),
        xi,
        eigvecs: [v1, v2, v3],
        theta_mix,
        eta: field.eta(),
        in_plane,
        degenerate,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundBranch {
    Xi1,
    Xi3,
    /// ξ₁ = ξ₃ at |θ| = π - arctan√2.
    Degenerate,
}

/// Which in-plane branch is lowest at angle `theta`.
pub fn ground_state_branch(theta: f64) -> GroundBranch {
    let xi = analytic_spectrum(theta).xi;
    let diff = xi[0] - xi[2];
    if diff.abs() < DEGENERACY_TOL {
        GroundBranch::Degenerate
    } else if diff < 0.0 {
        GroundBranch::Xi1
    } else {
        GroundBranch::Xi3
    }
}

/// |θ| below which |ξ₁⟩ is the ground state: π - arctan√2.
pub fn ground_state_threshold() -> f64 {
    PI - SQRT_2.atan()
}
