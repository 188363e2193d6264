//! Angular-momentum matrices.
//!
//! Standard-basis matrices are ordered with m decreasing: index k holds
//! m = j - k. Entries are in units of ħ.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{domain, Result};

pub type CMatrix = DMatrix<Complex64>;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SpinBasis {
    /// |j, m⟩ with m = j, j-1, ..., -j.
    StandardM,
    /// |X⟩, |Y⟩, |Z⟩ with J_α|α⟩ = 0 (J = 1 only).
    CartesianXyz,
}

#[derive(Clone, Debug)]
pub struct SpinOperators {
    twice_j: u32,
    pub jx: CMatrix,
    pub jy: CMatrix,
    pub jz: CMatrix,
    pub basis: SpinBasis,
}

impl SpinOperators {
    pub fn j(&self) -> f64 {
        f64::from(self.twice_j) / 2.0
    }

    pub fn dim(&self) -> usize {
        self.twice_j as usize + 1
    }

    /// Components as an array, ordered x, y, z.
    pub fn components(&self) -> [&CMatrix; 3] {
        [&self.jx, &self.jy, &self.jz]
    }

    /// J² = Jx² + Jy² + Jz².
    pub fn casimir(&self) -> CMatrix {
        &self.jx * &self.jx + &self.jy * &self.jy + &self.jz * &self.jz
    }
}

/// Spin matrices for `j` in the standard basis, built from the ladder operators.
pub fn spin_operators(j: f64) -> Result<SpinOperators> {
    let twice = 2.0 * j;
    if !twice.is_finite() || twice < 0.0 || (twice - twice.round()).abs() > 1e-12 || twice > 1e6 {
        return domain(format!("spin must be a non-negative half-integer, got {j}"));
    }
    let twice_j = twice.round() as u32;
    let j = f64::from(twice_j) / 2.0;
    let n = twice_j as usize + 1;

    let m = |k: usize| j - k as f64;
    let mut jplus = CMatrix::zeros(n, n);
    // J+ |j, m⟩ = sqrt(j(j+1) - m(m+1)) |j, m+1⟩; m+1 sits one index lower.
    for k in 1..n {
        let mk = m(k);
        jplus[(k - 1, k)] = Complex64::new((j * (j + 1.0) - mk * (mk + 1.0)).sqrt(), 0.0);
    }
    let jminus = jplus.adjoint();
    let jx = (&jplus + &jminus).map(|z| z * 0.5);
    let jy = (&jplus - &jminus).map(|z| z * Complex64::new(0.0, -0.5));
    let jz = CMatrix::from_diagonal(&nalgebra::DVector::from_fn(n, |k, _| Complex64::new(m(k), 0.0)));

    Ok(SpinOperators {
        twice_j,
        jx,
        jy,
        jz,
        basis: SpinBasis::StandardM,
    })
}

/// Levi-Civita symbol with ε_xyz = +1.
pub(crate) fn levi_civita(a: usize, b: usize, c: usize) -> f64 {
    match (a, b, c) {
        (0, 1, 2) | (1, 2, 0) | (2, 0, 1) => 1.0,
        (0, 2, 1) | (2, 1, 0) | (1, 0, 2) => -1.0,
        _ => 0.0,
    }
}

/// J = 1 matrices in the {X, Y, Z} basis, (J_α)_{βγ} = -i ε_{αβγ}.
pub fn cartesian_j1_operators() -> SpinOperators {
    let component = |alpha: usize| CMatrix::from_fn(3, 3, |b, c| Complex64::new(0.0, -levi_civita(alpha, b, c)));
    SpinOperators {
        twice_j: 2,
        jx: component(0),
        jy: component(1),
        jz: component(2),
        basis: SpinBasis::CartesianXyz,
    }
}

/// Kronecker product of two square matrices.
pub fn tensor_product(a: &CMatrix, b: &CMatrix) -> Result<CMatrix> {
    if !a.is_square() || !b.is_square() {
        return domain(format!(
            "tensor_product needs square matrices, got {}x{} and {}x{}",
            a.nrows(),
            a.ncols(),
            b.nrows(),
            b.ncols()
        ));
    }
    Ok(a.kronecker(b))
}

/// [a, b].
pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// {a, b}.
pub fn anticommutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b + b * a
}
