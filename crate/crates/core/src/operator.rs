//! Dense complex operator algebra: density operators, sharp observables,
//! effects, and the Hermitian matrix helpers everything else is built on.
//!
//! All values are immutable after construction and all operations are pure;
//! nothing here holds shared mutable state.

use nalgebra::linalg::SymmetricEigen;
use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::GridSpec;
use crate::lattice::LatticeWindow;
use crate::tol;

/// The basis a state lives on: a lattice site window or a spatial grid.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Basis {
    Lattice(LatticeWindow),
    Grid(GridSpec),
}

impl Basis {
    pub fn dim(&self) -> usize {
        match self {
            Basis::Lattice(w) => w.dim(),
            Basis::Grid(g) => g.dim(),
        }
    }

    pub fn label(&self) -> &'static str {
        match self {
            Basis::Lattice(_) => "lattice",
            Basis::Grid(_) => "grid",
        }
    }
}

/// Trace of a square complex matrix.
pub fn trace(m: &DMatrix<Complex64>) -> Complex64 {
    m.diagonal().sum()
}

/// (M + M')/2; applied after every transformer to suppress roundoff
/// asymmetry.
pub fn hermitize(m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
    (m + m.adjoint()) * Complex64::new(0.5, 0.0)
}

/// max_ij |m_ij - conj(m_ji)|.
pub fn hermiticity_gap(m: &DMatrix<Complex64>) -> f64 {
    let mut gap = 0.0f64;
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            gap = gap.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    gap
}

/// Entrywise max-norm.
pub fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().fold(0.0f64, |acc, z| acc.max(z.norm()))
}

/// Entrywise max-norm of the difference of two equally sized matrices.
pub fn max_abs_diff(a: &DMatrix<Complex64>, b: &DMatrix<Complex64>) -> f64 {
    assert_eq!(a.shape(), b.shape(), "max_abs_diff on unequal shapes");
    let mut gap = 0.0f64;
    for (x, y) in a.iter().zip(b.iter()) {
        gap = gap.max((x - y).norm());
    }
    gap
}

/// Re Tr(M^2) for a (nominally Hermitian) matrix.
pub fn matrix_purity(m: &DMatrix<Complex64>) -> f64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..m.nrows() {
        for j in 0..m.ncols() {
            acc += m[(i, j)] * m[(j, i)];
        }
    }
    acc.re
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &DMatrix<Complex64>) -> DVector<f64> {
    let mut eigs = SymmetricEigen::new(m.clone()).eigenvalues;
    eigs.as_mut_slice()
        .sort_by(|a, b| a.partial_cmp(b).expect("non-finite eigenvalue"));
    eigs
}

pub fn min_eigenvalue(m: &DMatrix<Complex64>) -> f64 {
    hermitian_eigenvalues(m)[0]
}

/// Promote a real matrix to complex entries.
pub fn real_to_complex(m: &DMatrix<f64>) -> DMatrix<Complex64> {
    m.map(|x| Complex64::new(x, 0.0))
}

/// The three numeric gaps a density operator is judged by.
#[derive(Clone, Copy, Debug)]
pub struct ValidityReport {
    pub hermiticity_gap: f64,
    pub trace_gap: f64,
    pub min_eigenvalue: f64,
}

impl ValidityReport {
    pub fn passes(&self) -> bool {
        self.hermiticity_gap <= tol::HERMITICITY_GAP
            && self.trace_gap <= tol::TRACE_GAP
            && self.min_eigenvalue >= tol::EIGENVALUE_FLOOR
    }
}

impl std::fmt::Display for ValidityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "hermiticity_gap={:.3e} trace_gap={:.3e} min_eigenvalue={:.3e} ({})",
            self.hermiticity_gap,
            self.trace_gap,
            self.min_eigenvalue,
            if self.passes() { "pass" } else { "fail" }
        )
    }
}

/// Compute the validity gaps of a candidate density matrix on a basis.
pub fn validate_density_matrix(
    matrix: &DMatrix<Complex64>,
    basis: &Basis,
) -> Result<ValidityReport> {
    if matrix.nrows() != matrix.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "density matrix must be square, got {}x{}",
            matrix.nrows(),
            matrix.ncols()
        )));
    }
    if matrix.nrows() != basis.dim() {
        return Err(Error::DimensionMismatch(format!(
            "matrix dimension {} does not match basis dimension {}",
            matrix.nrows(),
            basis.dim()
        )));
    }
    Ok(ValidityReport {
        hermiticity_gap: hermiticity_gap(matrix),
        trace_gap: (trace(matrix) - Complex64::new(1.0, 0.0)).norm(),
        min_eigenvalue: min_eigenvalue(&hermitize(matrix)),
    })
}

/// Dense Hermitian unit-trace positive matrix on a finite basis.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: DMatrix<Complex64>,
    basis: Basis,
}

impl DensityOperator {
    /// Validating constructor; rejects matrices that fail the gap tolerances.
    pub fn from_matrix(matrix: DMatrix<Complex64>, basis: Basis) -> Result<Self> {
        let report = validate_density_matrix(&matrix, &basis)?;
        if !report.passes() {
            return Err(Error::ContractViolation(format!(
                "not a valid density operator: {report}"
            )));
        }
        Ok(Self { matrix, basis })
    }

    /// Constructor for matrices valid by construction (pure states from unit
    /// vectors, convex mixtures, permutation conjugates). Skips the O(d^3)
    /// eigensolve.
    pub(crate) fn from_parts_unchecked(matrix: DMatrix<Complex64>, basis: Basis) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dim());
        debug_assert!(hermiticity_gap(&matrix) <= 1e-12);
        debug_assert!((trace(&matrix).re - 1.0).abs() <= 1e-10);
        Self { matrix, basis }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn basis(&self) -> Basis {
        self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn window(&self) -> Result<LatticeWindow> {
        match self.basis {
            Basis::Lattice(w) => Ok(w),
            Basis::Grid(_) => Err(Error::DimensionMismatch(
                "state lives on a grid, lattice window required".into(),
            )),
        }
    }

    pub fn grid(&self) -> Result<GridSpec> {
        match self.basis {
            Basis::Grid(g) => Ok(g),
            Basis::Lattice(_) => Err(Error::DimensionMismatch(
                "state lives on a lattice, grid required".into(),
            )),
        }
    }

    /// Real parts of the diagonal (the sharp-basis populations).
    pub fn populations(&self) -> DVector<f64> {
        self.matrix.diagonal().map(|z| z.re)
    }

    pub fn validity(&self) -> ValidityReport {
        validate_density_matrix(&self.matrix, &self.basis).expect("dimensions fixed at build")
    }

    /// Pure state from an amplitude vector; normalizes the vector first.
    pub fn pure_from_amplitudes(amplitudes: &DVector<Complex64>, basis: Basis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "amplitude vector length {} does not match basis dimension {}",
                amplitudes.len(),
                basis.dim()
            )));
        }
        let norm = amplitudes.norm();
        if norm <= 0.0 || !norm.is_finite() {
            return Err(Error::InvalidParameter(
                "amplitude vector must be nonzero and finite".into(),
            ));
        }
        let psi = amplitudes / Complex64::new(norm, 0.0);
        let matrix = &psi * psi.adjoint();
        Ok(Self::from_parts_unchecked(matrix, basis))
    }

    /// |m><m| on a lattice window.
    pub fn basis_state(window: LatticeWindow, site: i64) -> Result<Self> {
        let idx = window.index_of(site)?;
        let mut amps = DVector::zeros(window.dim());
        amps[idx] = Complex64::new(1.0, 0.0);
        Self::pure_from_amplitudes(&amps, Basis::Lattice(window))
    }

    /// Equal-amplitude superposition of distinct sites.
    pub fn uniform_superposition(window: LatticeWindow, sites: &[i64]) -> Result<Self> {
        if sites.is_empty() {
            return Err(Error::InvalidParameter(
                "superposition needs at least one site".into(),
            ));
        }
        let mut amps = DVector::zeros(window.dim());
        for &m in sites {
            let idx = window.index_of(m)?;
            if amps[idx] != Complex64::new(0.0, 0.0) {
                return Err(Error::InvalidParameter(format!(
                    "site {m} listed twice in superposition"
                )));
            }
            amps[idx] = Complex64::new(1.0, 0.0);
        }
        Self::pure_from_amplitudes(&amps, Basis::Lattice(window))
    }

    /// Identity / d.
    pub fn maximally_mixed(basis: Basis) -> Self {
        let d = basis.dim();
        let matrix = DMatrix::from_diagonal_element(d, d, Complex64::new(1.0 / d as f64, 0.0));
        Self::from_parts_unchecked(matrix, basis)
    }

    /// Convex mixture of states on a common basis; weights are renormalized.
    pub fn mixture(parts: &[(f64, &DensityOperator)]) -> Result<Self> {
        let (first, rest) = parts
            .split_first()
            .ok_or_else(|| Error::InvalidParameter("mixture of zero states".into()))?;
        let basis = first.1.basis;
        let mut total = 0.0;
        for &(w, rho) in parts {
            if w < 0.0 {
                return Err(Error::InvalidParameter("negative mixture weight".into()));
            }
            if rho.basis != basis {
                return Err(Error::DimensionMismatch(
                    "mixture components on different bases".into(),
                ));
            }
            total += w;
        }
        if total <= 0.0 {
            return Err(Error::InvalidParameter(
                "mixture weights sum to zero".into(),
            ));
        }
        let mut matrix = first.1.matrix.clone() * Complex64::new(first.0 / total, 0.0);
        for &(w, rho) in rest {
            matrix += &rho.matrix * Complex64::new(w / total, 0.0);
        }
        Ok(Self::from_parts_unchecked(matrix, basis))
    }
}

/// Tr(rho^2); 1 exactly on rank-one states, 1/d on the maximally mixed one.
pub fn purity(rho: &DensityOperator) -> f64 {
    matrix_purity(rho.matrix())
}

/// Validity gaps of a density operator (hermiticity, trace, positivity).
pub fn validate_density(rho: &DensityOperator) -> ValidityReport {
    rho.validity()
}

/// The sharp observable: the rank-one PVM {E_m = |m><m|} carried implicitly
/// by the basis ordering of a window.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SharpObservable {
    window: LatticeWindow,
}

impl SharpObservable {
    pub fn new(window: LatticeWindow) -> Self {
        Self { window }
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn projector(&self, site: i64) -> Result<DMatrix<Complex64>> {
        let idx = self.window.index_of(site)?;
        let d = self.window.dim();
        let mut m = DMatrix::zeros(d, d);
        m[(idx, idx)] = Complex64::new(1.0, 0.0);
        Ok(m)
    }

    /// X = sum_m m E_m, the sharp position operator on the window.
    pub fn position_operator(&self) -> DMatrix<Complex64> {
        let d = self.window.dim();
        DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(self.window.site_at(i) as f64, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })
    }
}

/// A positive operator with spectrum in [0, 1].
#[derive(Clone, Debug, PartialEq)]
pub struct Effect {
    matrix: DMatrix<Complex64>,
}

impl Effect {
    pub fn new(matrix: DMatrix<Complex64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() {
            return Err(Error::DimensionMismatch("effect must be square".into()));
        }
        let h = hermiticity_gap(&matrix);
        if h > tol::HERMITICITY_GAP {
            return Err(Error::ContractViolation(format!(
                "effect is not Hermitian: gap {h:.3e}"
            )));
        }
        let eigs = hermitian_eigenvalues(&matrix);
        let (lo, hi) = (eigs[0], eigs[eigs.len() - 1]);
        if lo < tol::EIGENVALUE_FLOOR || hi > tol::EFFECT_EIGENVALUE_CEIL {
            return Err(Error::ContractViolation(format!(
                "effect spectrum [{lo:.3e}, {hi:.3e}] outside [0, 1]"
            )));
        }
        Ok(Self { matrix })
    }

    /// Diagonal effect from nonnegative weights (no eigensolve needed).
    pub(crate) fn from_diagonal_weights(weights: &[f64]) -> Self {
        let d = weights.len();
        let matrix = DMatrix::from_fn(d, d, |i, j| {
            if i == j {
                Complex64::new(weights[i], 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        Self { matrix }
    }

    pub fn matrix(&self) -> &DMatrix<Complex64> {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    /// (min, max) of the spectrum.
    pub fn eigenvalue_range(&self) -> (f64, f64) {
        let eigs = hermitian_eigenvalues(&self.matrix);
        (eigs[0], eigs[eigs.len() - 1])
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use approx::assert_abs_diff_eq;

    fn window5() -> LatticeWindow {
        LatticeWindow::new(2, Boundary::Open).unwrap()
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let rho = DensityOperator::maximally_mixed(Basis::Lattice(window5()));
        let report = validate_density(&rho);
        assert!(report.passes());
        assert_abs_diff_eq!(report.hermiticity_gap, 0.0);
        assert_abs_diff_eq!(report.trace_gap, 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(purity(&rho), 0.2, epsilon = 1e-15);
    }

    #[test]
    fn projector_is_valid_with_zero_floor() {
        let rho = DensityOperator::basis_state(window5(), 0).unwrap();
        let report = validate_density(&rho);
        assert!(report.passes());
        assert!(report.min_eigenvalue.abs() <= 1e-12);
        assert_abs_diff_eq!(purity(&rho), 1.0, epsilon = 1e-14);
    }

    #[test]
    fn constructed_negative_eigenvalue_fails() {
        let w = window5();
        let d = w.dim();
        let mut m = DMatrix::zeros(d, d);
        m[(0, 0)] = Complex64::new(1.0, 0.0);
        m[(1, 1)] = Complex64::new(-0.01, 0.0);
        m[(2, 2)] = Complex64::new(0.01, 0.0);
        let report = validate_density_matrix(&m, &Basis::Lattice(w)).unwrap();
        assert!(!report.passes());
        assert_abs_diff_eq!(report.min_eigenvalue, -0.01, epsilon = 1e-12);
        assert_abs_diff_eq!(report.trace_gap, 0.0, epsilon = 1e-15);
        assert!(DensityOperator::from_matrix(m, Basis::Lattice(w)).is_err());
    }

    #[test]
    fn dimension_mismatch_is_structural_error() {
        let m = DMatrix::<Complex64>::identity(4, 4);
        assert!(validate_density_matrix(&m, &Basis::Lattice(window5())).is_err());
        let rect = DMatrix::<Complex64>::zeros(2, 3);
        assert!(validate_density_matrix(&rect, &Basis::Lattice(window5())).is_err());
    }

    #[test]
    fn hermitize_examples() {
        let mut m = DMatrix::<Complex64>::zeros(2, 2);
        m[(0, 1)] = Complex64::new(1.0, 0.0);
        let h = hermitize(&m);
        assert_abs_diff_eq!(h[(0, 1)].re, 0.5);
        assert_abs_diff_eq!(h[(1, 0)].re, 0.5);

        // anti-Hermitian input collapses to zero
        let mut a = DMatrix::<Complex64>::zeros(2, 2);
        a[(0, 1)] = Complex64::new(0.0, 1.0);
        a[(1, 0)] = Complex64::new(0.0, 1.0);
        assert_abs_diff_eq!(max_abs(&hermitize(&a)), 0.0);

        // Hermitian input unchanged
        let h2 = hermitize(&h);
        assert_abs_diff_eq!(max_abs_diff(&h2, &h), 0.0);
    }

    #[test]
    fn pure_mixture_purity() {
        let w = window5();
        let a = DensityOperator::basis_state(w, 0).unwrap();
        let b = DensityOperator::basis_state(w, 1).unwrap();
        let mix = DensityOperator::mixture(&[(0.5, &a), (0.5, &b)]).unwrap();
        assert_abs_diff_eq!(purity(&mix), 0.5, epsilon = 1e-14);
    }

    #[test]
    fn purity_invariant_under_site_relabeling() {
        let w = window5();
        let rho = DensityOperator::uniform_superposition(w, &[-1, 0, 2]).unwrap();
        // permute the basis with a fixed permutation matrix
        let d = w.dim();
        let perm: Vec<usize> = vec![3, 0, 4, 1, 2];
        let p = DMatrix::from_fn(d, d, |i, j| {
            if perm[j] == i {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let permuted = &p * rho.matrix() * p.adjoint();
        assert_abs_diff_eq!(matrix_purity(&permuted), purity(&rho), epsilon = 1e-14);
    }

    #[test]
    fn sharp_observable_completeness() {
        let pvm = SharpObservable::new(window5());
        let mut sum = DMatrix::<Complex64>::zeros(5, 5);
        for m in pvm.window().sites() {
            sum += pvm.projector(m).unwrap();
        }
        let identity = DMatrix::<Complex64>::identity(5, 5);
        assert_abs_diff_eq!(max_abs_diff(&sum, &identity), 0.0);
    }

    #[test]
    fn effect_bounds_enforced() {
        let ok = Effect::new(DMatrix::from_diagonal_element(
            3,
            3,
            Complex64::new(0.3, 0.0),
        ));
        assert!(ok.is_ok());
        let too_big = Effect::new(DMatrix::from_diagonal_element(
            3,
            3,
            Complex64::new(1.5, 0.0),
        ));
        assert!(too_big.is_err());
    }
}
