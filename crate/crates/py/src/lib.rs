//! Python bindings: the lattice/grid types, fuzzy kernels, the three state
//! transformers, probabilities, entropies, moments, and the continuous
//! sector, mirrored one-to-one onto the Rust API.
//!
//! Matrices cross the boundary as nested lists of Python complex numbers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

use fuzzmeas::continuous as cont;
use fuzzmeas::operator::{matrix_purity, min_eigenvalue, trace};
use fuzzmeas::stats::EntropyReport;
use fuzzmeas::transform::KrausSet;
use fuzzmeas::{
    Basis, Boundary, DensityOperator, Flavor, FuzzyKernel, GridSpec, LatticeWindow, OutcomeSet,
    SharpObservable, Transformer,
};

fn err(e: fuzzmeas::Error) -> PyErr {
    use fuzzmeas::Error::*;
    match e {
        ContractViolation(_) | Io(_) => PyRuntimeError::new_err(e.to_string()),
        _ => PyValueError::new_err(e.to_string()),
    }
}

fn matrix_to_py(m: &DMatrix<Complex64>) -> Vec<Vec<Complex64>> {
    (0..m.nrows())
        .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
        .collect()
}

fn matrix_from_py(rows: Vec<Vec<Complex64>>) -> PyResult<DMatrix<Complex64>> {
    let n = rows.len();
    if n == 0 || rows.iter().any(|r| r.len() != n) {
        return Err(PyValueError::new_err("matrix must be square and nonempty"));
    }
    Ok(DMatrix::from_fn(n, n, |i, j| rows[i][j]))
}

fn parse_boundary(boundary: &str) -> PyResult<Boundary> {
    match boundary {
        "open" => Ok(Boundary::Open),
        "periodic" => Ok(Boundary::Periodic),
        other => Err(PyValueError::new_err(format!(
            "boundary must be 'open' or 'periodic', got {other:?}"
        ))),
    }
}

fn parse_flavor(flavor: &str) -> PyResult<Flavor> {
    match flavor {
        "von_neumann" => Ok(Flavor::VonNeumann),
        "oqp" => Ok(Flavor::Oqp),
        "epistemic" => Ok(Flavor::Epistemic),
        other => Err(PyValueError::new_err(format!(
            "flavor must be von_neumann|oqp|epistemic, got {other:?}"
        ))),
    }
}

fn outcome_set(sites: Option<Vec<i64>>) -> OutcomeSet {
    match sites {
        None => OutcomeSet::All,
        Some(v) => OutcomeSet::Sites(v),
    }
}

/// Symmetric site window [-L, L].
#[pyclass(name = "Window", frozen)]
struct PyWindow {
    inner: LatticeWindow,
}

#[pymethods]
impl PyWindow {
    #[new]
    #[pyo3(signature = (half_width, boundary = "periodic"))]
    fn new(half_width: i64, boundary: &str) -> PyResult<Self> {
        Ok(Self {
            inner: LatticeWindow::new(half_width, parse_boundary(boundary)?).map_err(err)?,
        })
    }

    #[getter]
    fn half_width(&self) -> i64 {
        self.inner.half_width()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    #[getter]
    fn boundary(&self) -> String {
        self.inner.boundary().to_string()
    }

    fn sites(&self) -> Vec<i64> {
        self.inner.sites().collect()
    }

    fn __repr__(&self) -> String {
        format!(
            "Window(half_width={}, boundary='{}')",
            self.inner.half_width(),
            self.inner.boundary()
        )
    }
}

/// Column-stochastic fuzzy kernel over a window.
#[pyclass(name = "Kernel", frozen)]
struct PyKernel {
    inner: FuzzyKernel,
}

#[pymethods]
impl PyKernel {
    /// Gaussian kernel; sigma = 0 is the sharp delta kernel.
    #[staticmethod]
    fn gaussian(sigma: f64, window: &PyWindow) -> PyResult<Self> {
        Ok(Self {
            inner: FuzzyKernel::gaussian(sigma, window.inner).map_err(err)?,
        })
    }

    #[staticmethod]
    fn delta(window: &PyWindow) -> Self {
        Self {
            inner: FuzzyKernel::delta(window.inner),
        }
    }

    /// Custom kernel from nonnegative weights (columns are renormalized).
    #[staticmethod]
    fn from_weights(weights: Vec<Vec<f64>>, window: &PyWindow) -> PyResult<Self> {
        let n = weights.len();
        if weights.iter().any(|r| r.len() != n) {
            return Err(PyValueError::new_err("weights must be square"));
        }
        let m = DMatrix::from_fn(n, n, |i, j| weights[i][j]);
        Ok(Self {
            inner: FuzzyKernel::from_weights(m, window.inner).map_err(err)?,
        })
    }

    fn weights(&self) -> Vec<Vec<f64>> {
        let w = self.inner.weights();
        (0..w.nrows())
            .map(|i| (0..w.ncols()).map(|j| w[(i, j)]).collect())
            .collect()
    }

    #[getter]
    fn sigma(&self) -> Option<f64> {
        self.inner.sigma()
    }

    #[getter]
    fn homogeneous(&self) -> bool {
        self.inner.is_homogeneous()
    }

    fn column_sum_gap(&self) -> f64 {
        self.inner.column_sum_gap()
    }

    /// Entries of the fuzzifier operator F_d = sqrt(w) entrywise.
    fn fuzzifier(&self) -> Vec<Vec<f64>> {
        let f = fuzzmeas::fuzzifier(&self.inner);
        let m = f.matrix();
        (0..m.nrows())
            .map(|i| (0..m.ncols()).map(|j| m[(i, j)]).collect())
            .collect()
    }
}

/// Dense density operator on a window or grid.
#[pyclass(name = "State", frozen)]
struct PyState {
    inner: DensityOperator,
}

impl PyState {
    fn window(&self) -> PyResult<LatticeWindow> {
        self.inner.window().map_err(err)
    }
}

#[pymethods]
impl PyState {
    #[staticmethod]
    fn basis_state(window: &PyWindow, site: i64) -> PyResult<Self> {
        Ok(Self {
            inner: DensityOperator::basis_state(window.inner, site).map_err(err)?,
        })
    }

    #[staticmethod]
    fn uniform_superposition(window: &PyWindow, sites: Vec<i64>) -> PyResult<Self> {
        Ok(Self {
            inner: DensityOperator::uniform_superposition(window.inner, &sites).map_err(err)?,
        })
    }

    /// The pure fuzzy position state with amplitudes sqrt(w^(alpha)_ka).
    #[staticmethod]
    fn fuzzy_gaussian(window: &PyWindow, a: i64, alpha: f64) -> PyResult<Self> {
        Ok(Self {
            inner: fuzzmeas::gaussian_fuzzy_state(a, alpha, window.inner).map_err(err)?,
        })
    }

    #[staticmethod]
    fn maximally_mixed(window: &PyWindow) -> Self {
        Self {
            inner: DensityOperator::maximally_mixed(Basis::Lattice(window.inner)),
        }
    }

    /// Seeded random full-rank state.
    #[staticmethod]
    fn random(window: &PyWindow, seed: u64) -> Self {
        Self {
            inner: fuzzmeas::random_density(Basis::Lattice(window.inner), seed),
        }
    }

    /// Validating constructor from a nested complex matrix.
    #[staticmethod]
    fn from_matrix(matrix: Vec<Vec<Complex64>>, window: &PyWindow) -> PyResult<Self> {
        let m = matrix_from_py(matrix)?;
        Ok(Self {
            inner: DensityOperator::from_matrix(m, Basis::Lattice(window.inner)).map_err(err)?,
        })
    }

    fn matrix(&self) -> Vec<Vec<Complex64>> {
        matrix_to_py(self.inner.matrix())
    }

    fn populations(&self) -> Vec<f64> {
        self.inner.populations().iter().copied().collect()
    }

    #[getter]
    fn dim(&self) -> usize {
        self.inner.dim()
    }

    fn purity(&self) -> f64 {
        fuzzmeas::purity(&self.inner)
    }

    fn linear_entropy(&self) -> f64 {
        fuzzmeas::linear_entropy(&self.inner)
    }

    /// The three validity gaps and the overall verdict.
    fn validity<'py>(&self, py: Python<'py>) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
        let report = self.inner.validity();
        let d = pyo3::types::PyDict::new(py);
        d.set_item("hermiticity_gap", report.hermiticity_gap)?;
        d.set_item("trace_gap", report.trace_gap)?;
        d.set_item("min_eigenvalue", report.min_eigenvalue)?;
        d.set_item("passes", report.passes())?;
        Ok(d)
    }
}

/// Gaussian theta sum over the integers.
#[pyfunction]
fn psi0(sigma: f64) -> PyResult<f64> {
    fuzzmeas::psi0(sigma).map_err(err)
}

/// Gaussian theta sum over the half-integers.
#[pyfunction]
fn psi_half(sigma: f64) -> PyResult<f64> {
    fuzzmeas::psi_half(sigma).map_err(err)
}

/// Literal theta-sum closed form for the fuzzy-state entropy.
#[pyfunction]
fn gaussian_entropy_closed_form(alpha: f64, sigma: f64) -> PyResult<f64> {
    fuzzmeas::gaussian_entropy_closed_form(alpha, sigma).map_err(err)
}

/// The three (disagreeing) sharp-measurement entropy values.
#[pyfunction]
fn sharp_measurement_limits<'py>(
    py: Python<'py>,
    alpha: f64,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let rep = fuzzmeas::sharp_measurement_limits(alpha).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("alpha", rep.alpha)?;
    d.set_item("stated_asymptote", rep.stated_asymptote)?;
    d.set_item("closed_form_limit", rep.closed_form_limit)?;
    d.set_item("direct_summation", rep.direct_summation)?;
    Ok(d)
}

/// Apply one of the named transformers; sites = None means nonselective.
#[pyfunction]
#[pyo3(signature = (flavor, kernel, state, sites = None))]
fn transform(
    flavor: &str,
    kernel: &PyKernel,
    state: &PyState,
    sites: Option<Vec<i64>>,
) -> PyResult<Vec<Vec<Complex64>>> {
    let t = match parse_flavor(flavor)? {
        Flavor::VonNeumann => Transformer::VonNeumann,
        Flavor::Oqp => Transformer::Oqp(&kernel.inner),
        Flavor::Epistemic => Transformer::Epistemic(&kernel.inner),
    };
    let out = t.apply(&state.inner, &outcome_set(sites)).map_err(err)?;
    Ok(matrix_to_py(&out))
}

/// Generic Kraus application of the named flavor (the slow reference path).
#[pyfunction]
#[pyo3(signature = (flavor, kernel, state, sites = None))]
fn kraus_transform(
    flavor: &str,
    kernel: &PyKernel,
    state: &PyState,
    sites: Option<Vec<i64>>,
) -> PyResult<Vec<Vec<Complex64>>> {
    let window = state.window()?;
    let set = match parse_flavor(flavor)? {
        Flavor::VonNeumann => KrausSet::von_neumann(window),
        Flavor::Oqp => KrausSet::oqp(&kernel.inner),
        Flavor::Epistemic => KrausSet::epistemic(&kernel.inner),
    };
    let out = fuzzmeas::kraus_apply(&set, &state.inner, &outcome_set(sites)).map_err(err)?;
    Ok(matrix_to_py(&out))
}

/// p(B) for the POVM fuzzified from the sharp observable by `kernel`.
#[pyfunction]
#[pyo3(signature = (kernel, state, sites = None))]
fn probability(kernel: &PyKernel, state: &PyState, sites: Option<Vec<i64>>) -> PyResult<f64> {
    let window = state.window()?;
    let pvm = SharpObservable::new(window);
    let effects = fuzzmeas::build_effects(&kernel.inner, &pvm).map_err(err)?;
    fuzzmeas::probability(&effects, &state.inner, &outcome_set(sites)).map_err(err)
}

/// |Tr(F(B) rho) - sum_B <a|rho_post^(E)|a>|.
#[pyfunction]
#[pyo3(signature = (kernel, state, sites = None))]
fn probability_consistency_gap(
    kernel: &PyKernel,
    state: &PyState,
    sites: Option<Vec<i64>>,
) -> PyResult<f64> {
    let window = state.window()?;
    let pvm = SharpObservable::new(window);
    fuzzmeas::probability_consistency_gap(&kernel.inner, &pvm, &state.inner, &outcome_set(sites))
        .map_err(err)
}

/// Covariance defect of a transformer under the cyclic shift by `a`.
#[pyfunction]
fn shift_covariance_gap(flavor: &str, kernel: &PyKernel, state: &PyState, a: i64) -> PyResult<f64> {
    let t = match parse_flavor(flavor)? {
        Flavor::VonNeumann => Transformer::VonNeumann,
        Flavor::Oqp => Transformer::Oqp(&kernel.inner),
        Flavor::Epistemic => Transformer::Epistemic(&kernel.inner),
    };
    fuzzmeas::shift_covariance_gap(&t, &state.inner, a).map_err(err)
}

#[pyfunction]
fn entropy_formula_oqp(kernel: &PyKernel, state: &PyState) -> PyResult<f64> {
    fuzzmeas::entropy_formula_oqp(&kernel.inner, &state.inner).map_err(err)
}

#[pyfunction]
fn entropy_formula_epistemic(kernel: &PyKernel, state: &PyState) -> PyResult<f64> {
    fuzzmeas::entropy_formula_epistemic(&kernel.inner, &state.inner).map_err(err)
}

/// Both formulas next to their brute-force values, as a dict.
#[pyfunction]
fn entropy_report<'py>(
    py: Python<'py>,
    kernel: &PyKernel,
    state: &PyState,
) -> PyResult<Bound<'py, pyo3::types::PyDict>> {
    let rep = EntropyReport::compute(&kernel.inner, &state.inner).map_err(err)?;
    let d = pyo3::types::PyDict::new(py);
    d.set_item("formula_oqp", rep.formula_oqp)?;
    d.set_item("formula_epistemic", rep.formula_epistemic)?;
    d.set_item("brute_oqp", rep.brute_oqp)?;
    d.set_item("brute_epistemic", rep.brute_epistemic)?;
    Ok(d)
}

/// M_n of the sharp observable on a state.
#[pyfunction]
fn sharp_moment(state: &PyState, n: u32) -> PyResult<f64> {
    fuzzmeas::sharp_moment(&state.inner, n).map_err(err)
}

/// M_n of a homogeneous kernel over signed offsets.
#[pyfunction]
fn kernel_moment(kernel: &PyKernel, n: u32) -> PyResult<f64> {
    fuzzmeas::kernel_moment(&kernel.inner, n).map_err(err)
}

/// Moment of the post-measurement state for flavor in
/// {initial, oqp, epistemic}.
#[pyfunction]
fn moment_after(flavor: &str, kernel: &PyKernel, state: &PyState, n: u32) -> PyResult<f64> {
    let f = match flavor {
        "initial" => fuzzmeas::MomentFlavor::Initial,
        "oqp" => fuzzmeas::MomentFlavor::Oqp,
        "epistemic" => fuzzmeas::MomentFlavor::Epistemic,
        other => {
            return Err(PyValueError::new_err(format!(
                "flavor must be initial|oqp|epistemic, got {other:?}"
            )))
        }
    };
    Ok(fuzzmeas::moment_after(f, &kernel.inner, &state.inner, n)
        .map_err(err)?
        .value)
}

/// Periodic spatial grid with N points over `length`.
#[pyclass(name = "Grid", frozen)]
struct PyGrid {
    inner: GridSpec,
}

#[pymethods]
impl PyGrid {
    #[new]
    fn new(n_points: usize, length: f64) -> PyResult<Self> {
        Ok(Self {
            inner: GridSpec::new(n_points, length).map_err(err)?,
        })
    }

    #[getter]
    fn n_points(&self) -> usize {
        self.inner.n_points()
    }

    #[getter]
    fn length(&self) -> f64 {
        self.inner.length()
    }

    #[getter]
    fn spacing(&self) -> f64 {
        self.inner.spacing()
    }

    fn positions(&self) -> Vec<f64> {
        self.inner.positions().iter().copied().collect()
    }

    fn wave_numbers(&self) -> Vec<f64> {
        self.inner.wave_numbers().iter().copied().collect()
    }
}

/// Normalized smearing profile on a grid.
#[pyclass(name = "Smearing", frozen)]
struct PySmearing {
    inner: cont::SmearingKernel,
}

#[pymethods]
impl PySmearing {
    #[staticmethod]
    fn gaussian(sigma: f64, grid: &PyGrid) -> PyResult<Self> {
        Ok(Self {
            inner: cont::SmearingKernel::gaussian(sigma, grid.inner).map_err(err)?,
        })
    }

    #[staticmethod]
    fn from_samples(samples: Vec<f64>, grid: &PyGrid) -> PyResult<Self> {
        Ok(Self {
            inner: cont::SmearingKernel::from_samples(DVector::from_vec(samples), grid.inner)
                .map_err(err)?,
        })
    }

    fn samples(&self) -> Vec<f64> {
        self.inner.samples().iter().copied().collect()
    }

    fn second_moment(&self) -> f64 {
        self.inner.second_moment()
    }

    /// Fourier-multiplier eigenvalues of F_c on the wave-number grid.
    fn multiplier(&self) -> Vec<f64> {
        self.inner
            .fuzzifier()
            .multiplier()
            .iter()
            .copied()
            .collect()
    }
}

/// Normalized wave packet exp(i k0 (x-x0) - (x-x0)^2/4w^2).
#[pyfunction]
fn gaussian_packet(grid: &PyGrid, x0: f64, k0: f64, width: f64) -> PyResult<PyState> {
    Ok(PyState {
        inner: cont::gaussian_packet(grid.inner, x0, k0, width).map_err(err)?,
    })
}

/// Nonselective continuous transformers; flavor in {oqp, epistemic}.
#[pyfunction]
fn transform_continuous(flavor: &str, f: &PySmearing, state: &PyState) -> PyResult<PyState> {
    let out = match parse_flavor(flavor)? {
        Flavor::Oqp => cont::oqp_transform_continuous(&f.inner, &state.inner),
        Flavor::Epistemic => cont::epistemic_transform_continuous(&f.inner, &state.inner),
        Flavor::VonNeumann => {
            return Err(PyValueError::new_err(
                "continuous transformers are oqp or epistemic",
            ))
        }
    }
    .map_err(err)?;
    Ok(PyState { inner: out })
}

/// Tr(rho k) on the wave-number grid.
#[pyfunction]
fn momentum_first_moment(state: &PyState) -> PyResult<f64> {
    cont::momentum_first_moment(&state.inner).map_err(err)
}

/// Post-OQP mean momentum from the initial state (the formula route).
#[pyfunction]
fn momko_value(state: &PyState, f: &PySmearing) -> PyResult<f64> {
    cont::momko_value(&state.inner, &f.inner).map_err(err)
}

/// Post-epistemic mean momentum from the initial state (vanishes).
#[pyfunction]
fn momke_value(state: &PyState, f: &PySmearing) -> PyResult<f64> {
    cont::momke_value(&state.inner, &f.inner).map_err(err)
}

/// Translation-covariance defect of a continuous transformer.
#[pyfunction]
fn translation_covariance_gap(
    flavor: &str,
    f: &PySmearing,
    state: &PyState,
    shift: f64,
) -> PyResult<f64> {
    cont::translation_covariance_gap_continuous(
        parse_flavor(flavor)?,
        &f.inner,
        &state.inner,
        shift,
    )
    .map_err(err)
}

/// Trace of a nested complex matrix (convenience for selective outputs).
#[pyfunction]
fn matrix_trace(matrix: Vec<Vec<Complex64>>) -> PyResult<Complex64> {
    let m = matrix_from_py(matrix)?;
    Ok(trace(&m))
}

/// Re Tr(M^2) of a nested complex matrix.
#[pyfunction]
fn matrix_purity_py(matrix: Vec<Vec<Complex64>>) -> PyResult<f64> {
    Ok(matrix_purity(&matrix_from_py(matrix)?))
}

/// Smallest eigenvalue of a Hermitian nested matrix.
#[pyfunction]
fn matrix_min_eigenvalue(matrix: Vec<Vec<Complex64>>) -> PyResult<f64> {
    Ok(min_eigenvalue(&matrix_from_py(matrix)?))
}

#[pymodule]
fn fuzzmeas_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyWindow>()?;
    m.add_class::<PyKernel>()?;
    m.add_class::<PyState>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PySmearing>()?;
    m.add_function(wrap_pyfunction!(psi0, m)?)?;
    m.add_function(wrap_pyfunction!(psi_half, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_entropy_closed_form, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_measurement_limits, m)?)?;
    m.add_function(wrap_pyfunction!(transform, m)?)?;
    m.add_function(wrap_pyfunction!(kraus_transform, m)?)?;
    m.add_function(wrap_pyfunction!(probability, m)?)?;
    m.add_function(wrap_pyfunction!(probability_consistency_gap, m)?)?;
    m.add_function(wrap_pyfunction!(shift_covariance_gap, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_formula_oqp, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_formula_epistemic, m)?)?;
    m.add_function(wrap_pyfunction!(entropy_report, m)?)?;
    m.add_function(wrap_pyfunction!(sharp_moment, m)?)?;
    m.add_function(wrap_pyfunction!(kernel_moment, m)?)?;
    m.add_function(wrap_pyfunction!(moment_after, m)?)?;
    m.add_function(wrap_pyfunction!(gaussian_packet, m)?)?;
    m.add_function(wrap_pyfunction!(transform_continuous, m)?)?;
    m.add_function(wrap_pyfunction!(momentum_first_moment, m)?)?;
    m.add_function(wrap_pyfunction!(momko_value, m)?)?;
    m.add_function(wrap_pyfunction!(momke_value, m)?)?;
    m.add_function(wrap_pyfunction!(translation_covariance_gap, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_trace, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_purity_py, m)?)?;
    m.add_function(wrap_pyfunction!(matrix_min_eigenvalue, m)?)?;
    Ok(())
}
