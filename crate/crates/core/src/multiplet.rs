//! Exact diagonalization of the core-spin/hole Hamiltonian
//! H = α S·s + β l·s on S(5/2) ⊗ l(1) ⊗ s(1/2), and identification of the
//! ground multiplet by its total angular momentum.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::angmom::{spin_operators, tensor_product, CMatrix, SpinOperators};
use crate::error::{domain, Error, Result};

pub const CORE_SPIN: f64 = 2.5;
pub const HOLE_ORBITAL: f64 = 1.0;
pub const HOLE_SPIN: f64 = 0.5;
pub const DIM: usize = 36;

/// Default clustering tolerance for degenerate eigenvalues, eV.
pub const DEFAULT_DEGENERACY_TOL: f64 = 1e-9;

/// Allowed |⟨J²⟩ - J(J+1)| when assigning a total J to a cluster.
pub const J_ASSIGN_TOL: f64 = 1e-6;

/// Total-J assignment of a cluster of degenerate eigenstates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum JLabel {
    Definite(f64),
    /// ⟨J²⟩ averaged over the cluster matches no J(J+1).
    Mixed(f64),
}

impl JLabel {
    fn from_j_squared(j2: f64) -> Self {
        let j = (-1.0 + (1.0 + 4.0 * j2.max(0.0)).sqrt()) / 2.0;
        let j = (2.0 * j).round() / 2.0;
        if (j2 - j * (j + 1.0)).abs() < J_ASSIGN_TOL {
            JLabel::Definite(j)
        } else {
            JLabel::Mixed(j2)
        }
    }

    pub fn value(&self) -> Result<f64> {
        match *self {
            JLabel::Definite(j) => Ok(j),
            JLabel::Mixed(j_squared) => Err(Error::MixedMultiplet { j_squared }),
        }
    }
}

impl std::fmt::Display for JLabel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            JLabel::Definite(j) if j.fract() == 0.0 => write!(f, "{}", *j as i64),
            JLabel::Definite(j) => write!(f, "{}/2", (2.0 * j).round() as i64),
            JLabel::Mixed(_) => f.write_str("mixed"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct Level {
    pub energy: f64,
    pub multiplicity: usize,
    pub j_squared: f64,
    pub j: JLabel,
}

#[derive(Clone, Debug)]
pub struct MultipletResult {
    /// Clustered levels, ascending in energy.
    pub levels: Vec<Level>,
    pub ground_energy: f64,
    pub ground_degeneracy: usize,
    pub ground_j: JLabel,
    pub ground_j_squared: f64,
    /// ⟨S·s⟩ averaged over the ground multiplet.
    pub exchange_expectation: f64,
    /// Some adjacent pair of clusters is separated by less than ten times the
    /// clustering tolerance, so the grouping may not be meaningful.
    pub ambiguous_clustering: bool,
}

/// The three angular momenta promoted to the 36-dimensional product space.
pub struct ProductSpace {
    pub core: [CMatrix; 3],
    pub orbital: [CMatrix; 3],
    pub spin: [CMatrix; 3],
}

impl ProductSpace {
    pub fn new() -> Self {
        let big_s = spin_operators(CORE_SPIN).expect("valid spin");
        let l = spin_operators(HOLE_ORBITAL).expect("valid spin");
        let s = spin_operators(HOLE_SPIN).expect("valid spin");
        let id = |ops: &SpinOperators| CMatrix::identity(ops.dim(), ops.dim());
        let promote = |a: &CMatrix, b: &CMatrix, c: &CMatrix| {
            tensor_product(&tensor_product(a, b).expect("square"), c).expect("square")
        };
        let (i_big, i_l, i_s) = (id(&big_s), id(&l), id(&s));
        ProductSpace {
            core: big_s.components().map(|c| promote(c, &i_l, &i_s)),
            orbital: l.components().map(|c| promote(&i_big, c, &i_s)),
            spin: s.components().map(|c| promote(&i_big, &i_l, c)),
        }
    }

    /// Components of J = S + l + s.
    pub fn total(&self) -> [CMatrix; 3] {
        std::array::from_fn(|k| &self.core[k] + &self.orbital[k] + &self.spin[k])
    }

    pub fn total_squared(&self) -> CMatrix {
        let j = self.total();
        &j[0] * &j[0] + &j[1] * &j[1] + &j[2] * &j[2]
    }

    /// S·s.
    pub fn exchange(&self) -> CMatrix {
        dot(&self.core, &self.spin)
    }

    /// l·s.
    pub fn spin_orbit(&self) -> CMatrix {
        dot(&self.orbital, &self.spin)
    }
}

impl Default for ProductSpace {
    fn default() -> Self {
        Self::new()
    }
}

fn dot(a: &[CMatrix; 3], b: &[CMatrix; 3]) -> CMatrix {
    &a[0] * &b[0] + &a[1] * &b[1] + &a[2] * &b[2]
}

/// α S·s + β l·s on S ⊗ l ⊗ s, energies in eV.
pub fn build_spin_hamiltonian(alpha: f64, beta: f64) -> CMatrix {
    let space = ProductSpace::new();
    let a = Complex64::new(alpha, 0.0);
    let b = Complex64::new(beta, 0.0);
    space.exchange() * a + space.spin_orbit() * b
}

fn expectation(op: &CMatrix, vectors: &[DVector<Complex64>]) -> f64 {
    let total: f64 = vectors.iter().map(|v| v.dotc(&(op * v)).re).sum();
    total / vectors.len() as f64
}

/// Diagonalize `h`, group eigenvalues within `degeneracy_tol` (eV) and label
/// each group with its total J.
pub fn analyze_multiplet(h: &CMatrix, degeneracy_tol: f64) -> Result<MultipletResult> {
    if h.nrows() != DIM || h.ncols() != DIM {
        return domain(format!(
            "expected a {DIM}x{DIM} Hamiltonian, got {}x{}",
            h.nrows(),
            h.ncols()
        ));
    }
    if !(degeneracy_tol > 0.0) {
        return domain(format!("degeneracy_tol must be > 0, got {degeneracy_tol}"));
    }
    let asym = (h - h.adjoint()).iter().map(|z| z.norm()).fold(0.0, f64::max);
    if asym > 1e-10 {
        return domain(format!("Hamiltonian is not Hermitian (max |H - H†| = {asym:.3e})"));
    }

    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..DIM).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));

    let mut clusters: Vec<Vec<usize>> = Vec::new();
    let mut ambiguous = false;
    for &k in &order {
        match clusters.last_mut() {
            Some(c) if eig.eigenvalues[k] - eig.eigenvalues[*c.last().unwrap()] <= degeneracy_tol => c.push(k),
            Some(c) => {
                let gap = eig.eigenvalues[k] - eig.eigenvalues[*c.last().unwrap()];
                if gap < 10.0 * degeneracy_tol {
                    ambiguous = true;
                }
                clusters.push(vec![k]);
            }
            None => clusters.push(vec![k]),
        }
    }

    let space = ProductSpace::new();
    let j2 = space.total_squared();
    let exchange = space.exchange();

    let columns = |c: &[usize]| -> Vec<DVector<Complex64>> {
        c.iter().map(|&k| eig.eigenvectors.column(k).into_owned()).collect()
    };
    let levels: Vec<Level> = clusters
        .iter()
        .map(|c| {
            let vecs = columns(c);
            let energy = c.iter().map(|&k| eig.eigenvalues[k]).sum::<f64>() / c.len() as f64;
            let j_squared = expectation(&j2, &vecs);
            Level {
                energy,
                multiplicity: c.len(),
                j_squared,
                j: JLabel::from_j_squared(j_squared),
            }
        })
        .collect();

    let ground = &levels[0];
    let exchange_expectation = expectation(&exchange, &columns(&clusters[0]));
    Ok(MultipletResult {
        ground_energy: ground.energy,
        ground_degeneracy: ground.multiplicity,
        ground_j: ground.j,
        ground_j_squared: ground.j_squared,
        exchange_expectation,
        ambiguous_clustering: ambiguous,
        levels,
    })
}

/// First-order ground energy from projecting α S·s onto the j_h = 3/2 hole
/// multiplet coupled to total J.
pub fn projected_ground_energy(alpha: f64, beta: f64, total_j: f64) -> f64 {
    let jh = 1.5;
    let s_core = CORE_SPIN;
    (alpha / 3.0) * (total_j * (total_j + 1.0) - s_core * (s_core + 1.0) - jh * (jh + 1.0)) / 2.0 + beta / 2.0
}

/// Unitary e^{-iθ n·J} on the product space.
pub fn global_rotation(axis: [f64; 3], angle: f64) -> CMatrix {
    let space = ProductSpace::new();
    let j = space.total();
    let norm = (axis[0] * axis[0] + axis[1] * axis[1] + axis[2] * axis[2]).sqrt();
    let gen = (&j[0] * Complex64::new(axis[0] / norm, 0.0)
        + &j[1] * Complex64::new(axis[1] / norm, 0.0)
        + &j[2] * Complex64::new(axis[2] / norm, 0.0))
        * Complex64::new(angle, 0.0);
    let eig = SymmetricEigen::new(gen);
    let phases = DMatrix::from_diagonal(&eig.eigenvalues.map(|l| Complex64::from_polar(1.0, -l)));
    &eig.eigenvectors * phases * eig.eigenvectors.adjoint()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn max_abs(m: &CMatrix) -> f64 {
        m.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    #[test]
    fn zero_couplings_give_zero_matrix() {
        assert_eq!(max_abs(&build_spin_hamiltonian(0.0, 0.0)), 0.0);
    }

    #[test]
    fn hamiltonian_is_hermitian() {
        let h = build_spin_hamiltonian(0.3, -0.08);
        assert_eq!(h.shape(), (36, 36));
        assert!(max_abs(&(&h - h.adjoint())) < 1e-12);
    }

    #[test]
    fn spin_orbit_only_splits_into_quartet_and_doublet() {
        // l·s = 1/2 for j_h = 3/2 (4 x 6 states), -1 for j_h = 1/2 (2 x 6 states)
        let r = analyze_multiplet(&build_spin_hamiltonian(0.0, -0.08), DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.levels.len(), 2);
        assert!((r.levels[0].energy - (-0.04)).abs() < 1e-12);
        assert_eq!(r.levels[0].multiplicity, 24);
        assert!((r.levels[1].energy - 0.08).abs() < 1e-12);
        assert_eq!(r.levels[1].multiplicity, 12);
    }

    #[test]
    fn mn_gaas_parameters_give_j1_ground_triplet() {
        let r = analyze_multiplet(&build_spin_hamiltonian(0.3, -0.08), DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.ground_degeneracy, 3);
        assert_eq!(r.ground_j, JLabel::Definite(1.0));
        assert!((r.ground_j_squared - 2.0).abs() < 1e-8);
        assert!(r.exchange_expectation < 0.0);
        assert!(!r.ambiguous_clustering);
        assert_eq!(r.levels.iter().map(|l| l.multiplicity).sum::<usize>(), 36);
        for l in &r.levels {
            let j = l.j.value().unwrap();
            assert_eq!(l.multiplicity, (2.0 * j + 1.0).round() as usize);
        }
    }

    #[test]
    fn exchange_only_ground_has_s_antiparallel_to_core() {
        // S + s = 2 with l free: 5 x 3 = 15 states, S·s = (6 - 35/4 - 3/4)/2 = -7/4
        let r = analyze_multiplet(&build_spin_hamiltonian(0.3, 0.0), DEFAULT_DEGENERACY_TOL).unwrap();
        assert_eq!(r.ground_degeneracy, 15);
        assert!((r.exchange_expectation + 1.75).abs() < 1e-10);
        assert!((r.ground_energy + 0.3 * 1.75).abs() < 1e-12);
        // J = 1, 2, 3 are degenerate here, so no single J fits.
        assert!(matches!(r.ground_j, JLabel::Mixed(_)));
        assert!(matches!(r.ground_j.value(), Err(Error::MixedMultiplet { .. })));
    }

    #[test]
    fn projection_estimate_is_close_to_exact() {
        let exact = analyze_multiplet(&build_spin_hamiltonian(0.3, -0.08), DEFAULT_DEGENERACY_TOL)
            .unwrap()
            .ground_energy;
        let estimate = projected_ground_energy(0.3, -0.08, 1.0);
        // Mixing with the j_h = 1/2 hole states can only push the exact
        // ground energy below the first-order value.
        println!(
            "ground energy: exact {exact:.6} eV, projected {estimate:.6} eV, deviation {:.3e} eV",
            exact - estimate
        );
        assert!(exact <= estimate + 1e-12);
    }

    #[test]
    fn total_j_commutes_with_hamiltonian() {
        let h = build_spin_hamiltonian(0.3, -0.08);
        let space = ProductSpace::new();
        let j2 = space.total_squared();
        let jz = &space.total()[2];
        assert!(max_abs(&(&j2 * &h - &h * &j2)) < 1e-10);
        assert!(max_abs(&(jz * &h - &h * jz)) < 1e-10);
    }

    #[test]
    fn spectrum_is_rotation_invariant() {
        let h = build_spin_hamiltonian(0.3, -0.08);
        let u = global_rotation([0.3, -0.7, 0.4], 1.234);
        assert!(max_abs(&(&u * u.adjoint() - CMatrix::identity(36, 36))) < 1e-10);
        let rotated = &u * &h * u.adjoint();
        let mut a: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
        let mut b: Vec<f64> = rotated.symmetric_eigenvalues().iter().copied().collect();
        a.sort_by(f64::total_cmp);
        b.sort_by(f64::total_cmp);
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn ground_j_is_robust_to_parameter_changes() {
        for fa in [0.5, 0.75, 1.0, 1.25, 1.5] {
            for fb in [0.5, 0.75, 1.0, 1.25, 1.5] {
                let r =
                    analyze_multiplet(&build_spin_hamiltonian(0.3 * fa, -0.08 * fb), DEFAULT_DEGENERACY_TOL).unwrap();
                assert_eq!(r.ground_j, JLabel::Definite(1.0), "alpha x{fa}, beta x{fb}");
                assert_eq!(r.ground_degeneracy, 3);
            }
        }
    }

    #[test]
    fn rejects_bad_inputs() {
        assert!(analyze_multiplet(&CMatrix::zeros(4, 4), 1e-9).is_err());
        assert!(analyze_multiplet(&build_spin_hamiltonian(0.3, -0.08), 0.0).is_err());
        let mut h = build_spin_hamiltonian(0.3, -0.08);
        h[(0, 1)] += Complex64::new(0.0, 1.0);
        assert!(analyze_multiplet(&h, 1e-9).is_err());
    }

    #[test]
    fn j_label_display() {
        assert_eq!(JLabel::Definite(1.0).to_string(), "1");
        assert_eq!(JLabel::Definite(2.5).to_string(), "5/2");
        assert_eq!(JLabel::Mixed(8.0).to_string(), "mixed");
    }
}
