//! The three post-measurement state maps and their contract checks.
//!
//! For a kernel w over a sharp PVM {E_m} the discrete instrument sends a
//! state rho and an outcome set B to an unnormalized positive matrix:
//!
//! * von Neumann: sum_{m in B} E_m rho E_m (the sharp limit),
//! * OQP:         sum_{m in B} sqrt(F_m) rho sqrt(F_m) with
//!                sqrt(F_m) = sum_k sqrt(w_mk) E_k,
//! * epistemic:   sum_{m in B} F_d E_m rho E_m F_d', the map obtained by
//!                dualizing the fuzzification itself.
//!
//! The two fuzzy maps share their outcome statistics but disagree on the
//! post-measurement state; quantifying that disagreement is the point of
//! this crate. Every map is also realized as an explicit Kraus set so the
//! dedicated implementations can be cross-checked against the generic
//! completely positive form.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::effects::{build_effects, fuzzifier, EffectSet};
use crate::error::{Error, Result};
use crate::kernel::FuzzyKernel;
use crate::lattice::LatticeWindow;
use crate::operator::{hermitize, max_abs_diff, real_to_complex, DensityOperator, SharpObservable};
use crate::tol;

/// Transformer family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flavor {
    VonNeumann,
    Oqp,
    Epistemic,
}

impl Flavor {
    pub fn label(&self) -> &'static str {
        match self {
            Flavor::VonNeumann => "von_neumann",
            Flavor::Oqp => "oqp",
            Flavor::Epistemic => "epistemic",
        }
    }
}

impl std::fmt::Display for Flavor {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

/// Subset of window sites a selective measurement conditions on.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OutcomeSet {
    All,
    Sites(Vec<i64>),
}

impl OutcomeSet {
    pub fn sites<I: Into<Vec<i64>>>(sites: I) -> Self {
        OutcomeSet::Sites(sites.into())
    }

    pub fn is_all(&self) -> bool {
        matches!(self, OutcomeSet::All)
    }

    /// Basis indices of the selected outcomes; duplicates and foreign sites
    /// are rejected.
    pub fn indices(&self, window: &LatticeWindow) -> Result<Vec<usize>> {
        match self {
            OutcomeSet::All => Ok((0..window.dim()).collect()),
            OutcomeSet::Sites(sites) => {
                let mut seen = vec![false; window.dim()];
                let mut idx = Vec::with_capacity(sites.len());
                for &m in sites {
                    let i = window.index_of(m)?;
                    if seen[i] {
                        return Err(Error::InvalidParameter(format!(
                            "outcome site {m} listed twice"
                        )));
                    }
                    seen[i] = true;
                    idx.push(i);
                }
                Ok(idx)
            }
        }
    }

    /// B + a on the cyclic window.
    pub fn shifted(&self, window: &LatticeWindow, a: i64) -> OutcomeSet {
        match self {
            OutcomeSet::All => OutcomeSet::All,
            OutcomeSet::Sites(sites) => {
                OutcomeSet::Sites(sites.iter().map(|&m| window.wrap(m + a)).collect())
            }
        }
    }
}

/// Kraus family tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KrausFlavor {
    VonNeumann,
    Oqp,
    Epistemic,
    Custom,
}

/// Outcome-indexed Kraus operators {A_m} with sum_m A_m' A_m = 1.
#[derive(Clone, Debug)]
pub struct KrausSet {
    operators: Vec<DMatrix<Complex64>>,
    flavor: KrausFlavor,
    window: LatticeWindow,
}

impl KrausSet {
    /// A_m = E_m.
    pub fn von_neumann(window: LatticeWindow) -> Self {
        let pvm = SharpObservable::new(window);
        let operators = window
            .sites()
            .map(|m| pvm.projector(m).expect("site in window"))
            .collect();
        Self {
            operators,
            flavor: KrausFlavor::VonNeumann,
            window,
        }
    }

    /// A_m = sqrt(F_m) = sum_k sqrt(w_mk) E_k, diagonal in the sharp basis.
    pub fn oqp(kernel: &FuzzyKernel) -> Self {
        let s = kernel.sqrt_weights();
        let d = kernel.dim();
        let operators = (0..d)
            .map(|m| {
                DMatrix::from_fn(d, d, |i, j| {
                    if i == j {
                        Complex64::new(s[(m, i)], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self {
            operators,
            flavor: KrausFlavor::Oqp,
            window: kernel.window(),
        }
    }

    /// A_m = F_d E_m: the m-th fuzzifier column placed in column m.
    pub fn epistemic(kernel: &FuzzyKernel) -> Self {
        let f = fuzzifier(kernel);
        let d = kernel.dim();
        let operators = (0..d)
            .map(|m| {
                DMatrix::from_fn(d, d, |i, j| {
                    if j == m {
                        Complex64::new(f.matrix()[(i, m)], 0.0)
                    } else {
                        Complex64::new(0.0, 0.0)
                    }
                })
            })
            .collect();
        Self {
            operators,
            flavor: KrausFlavor::Epistemic,
            window: kernel.window(),
        }
    }

    /// User-supplied family; completeness is enforced at construction.
    pub fn custom(operators: Vec<DMatrix<Complex64>>, window: LatticeWindow) -> Result<Self> {
        let d = window.dim();
        if operators.len() != d {
            return Err(Error::DimensionMismatch(format!(
                "expected one Kraus operator per outcome ({d}), got {}",
                operators.len()
            )));
        }
        if operators.iter().any(|a| a.nrows() != d || a.ncols() != d) {
            return Err(Error::DimensionMismatch(
                "Kraus operators must be d x d".into(),
            ));
        }
        let set = Self {
            operators,
            flavor: KrausFlavor::Custom,
            window,
        };
        let gap = set.completeness_gap();
        if gap > tol::KRAUS_COMPLETENESS {
            return Err(Error::ContractViolation(format!(
                "Kraus completeness gap {gap:.3e} exceeds {:.1e}",
                tol::KRAUS_COMPLETENESS
            )));
        }
        Ok(set)
    }

    pub fn operators(&self) -> &[DMatrix<Complex64>] {
        &self.operators
    }

    pub fn flavor(&self) -> KrausFlavor {
        self.flavor
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    /// max-norm of sum_m A_m' A_m - 1.
    pub fn completeness_gap(&self) -> f64 {
        let d = self.window.dim();
        let mut sum = DMatrix::<Complex64>::zeros(d, d);
        for a in &self.operators {
            sum += a.adjoint() * a;
        }
        let identity = DMatrix::<Complex64>::identity(d, d);
        max_abs_diff(&sum, &identity)
    }
}

fn check_lattice_state(rho: &DensityOperator) -> Result<LatticeWindow> {
    rho.window()
}

fn check_same_window(a: LatticeWindow, b: LatticeWindow, what: &str) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(format!(
            "{what} live on different windows"
        )));
    }
    Ok(())
}

/// Generic completely positive application sum_{m in B} A_m rho A_m'.
///
/// This is the slow reference path; the dedicated transformers below must
/// reproduce it entrywise.
pub fn kraus_apply(
    set: &KrausSet,
    rho: &DensityOperator,
    outcomes: &OutcomeSet,
) -> Result<DMatrix<Complex64>> {
    let window = check_lattice_state(rho)?;
    check_same_window(set.window, window, "Kraus set and state")?;
    let gap = set.completeness_gap();
    if gap > tol::KRAUS_COMPLETENESS {
        return Err(Error::ContractViolation(format!(
            "incomplete Kraus set: gap {gap:.3e}"
        )));
    }
    let d = window.dim();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for i in outcomes.indices(&window)? {
        let a = &set.operators[i];
        out += a * rho.matrix() * a.adjoint();
    }
    Ok(hermitize(&out))
}

/// sum_{m in B} E_m rho E_m: the diagonal of rho restricted to B.
pub fn von_neumann_transform(
    pvm: &SharpObservable,
    rho: &DensityOperator,
    outcomes: &OutcomeSet,
) -> Result<DMatrix<Complex64>> {
    let window = check_lattice_state(rho)?;
    check_same_window(pvm.window(), window, "observable and state")?;
    let d = window.dim();
    let mut out = DMatrix::<Complex64>::zeros(d, d);
    for i in outcomes.indices(&window)? {
        out[(i, i)] = Complex64::new(rho.matrix()[(i, i)].re, 0.0);
    }
    Ok(out)
}

/// sum_{m in B} sqrt(F_m) rho sqrt(F_m), evaluated entrywise in the sharp
/// eigenbasis where every sqrt(F_m) is diagonal:
/// out_kn = rho_kn * sum_{m in B} sqrt(w_mk w_mn).
pub fn oqp_transform(
    kernel: &FuzzyKernel,
    pvm: &SharpObservable,
    rho: &DensityOperator,
    outcomes: &OutcomeSet,
) -> Result<DMatrix<Complex64>> {
    let window = check_lattice_state(rho)?;
    check_same_window(kernel.window(), window, "kernel and state")?;
    check_same_window(pvm.window(), window, "observable and state")?;
    let g = selective_gram(kernel, &outcomes.indices(&window)?, outcomes.is_all());
    let out = rho.matrix().zip_map(&real_to_complex(&g), |r, gg| r * gg);
    Ok(hermitize(&out))
}

/// sum_{m in B} rho_mm (F_d e_m)(F_d e_m)'; for B = all this is
/// F_d diag(rho) F_d'.
pub fn epistemic_transform(
    kernel: &FuzzyKernel,
    pvm: &SharpObservable,
    rho: &DensityOperator,
    outcomes: &OutcomeSet,
) -> Result<DMatrix<Complex64>> {
    let window = check_lattice_state(rho)?;
    check_same_window(kernel.window(), window, "kernel and state")?;
    check_same_window(pvm.window(), window, "observable and state")?;
    let d = window.dim();
    let f = kernel.sqrt_weights();
    let pops = rho.populations();
    let out_real = if outcomes.is_all() {
        // F_d diag(rho) F_d' as two real matrix products
        let mut scaled = f.clone();
        for (m, mut col) in scaled.column_iter_mut().enumerate() {
            col *= pops[m];
        }
        &scaled * f.transpose()
    } else {
        let mut acc = DMatrix::<f64>::zeros(d, d);
        for m in outcomes.indices(&window)? {
            let col = f.column(m);
            let p = pops[m];
            for k in 0..d {
                let s = p * col[k];
                if s == 0.0 {
                    continue;
                }
                for n in 0..d {
                    acc[(k, n)] += s * col[n];
                }
            }
        }
        acc
    };
    Ok(hermitize(&real_to_complex(&out_real)))
}

/// sum_{m in B} sqrt(w_mk w_mn), the Gram profile the OQP map multiplies
/// rho by entrywise.
fn selective_gram(kernel: &FuzzyKernel, indices: &[usize], all: bool) -> DMatrix<f64> {
    let a = kernel.sqrt_weights();
    if all {
        return a.transpose() * &a;
    }
    let d = kernel.dim();
    let mut g = DMatrix::<f64>::zeros(d, d);
    for &m in indices {
        let row = a.row(m);
        for k in 0..d {
            let s = row[k];
            if s == 0.0 {
                continue;
            }
            for n in 0..d {
                g[(k, n)] += s * row[n];
            }
        }
    }
    g
}

/// p(B) = sum_{a in B} Tr(F_a rho).
pub fn probability(
    effects: &EffectSet,
    rho: &DensityOperator,
    outcomes: &OutcomeSet,
) -> Result<f64> {
    let window = check_lattice_state(rho)?;
    check_same_window(effects.window(), window, "effects and state")?;
    let mut p = 0.0;
    for i in outcomes.indices(&window)? {
        let f = effects.effects()[i].matrix();
        let mut t = Complex64::new(0.0, 0.0);
        for r in 0..window.dim() {
            for c in 0..window.dim() {
                t += f[(r, c)] * rho.matrix()[(c, r)];
            }
        }
        p += t.re;
    }
    Ok(p)
}

/// |Tr(F(B) rho) - sum_{a in B} <a| rho_post^(E) |a>|: the two probability
/// routes (Heisenberg effects vs Schroedinger image of the dynamical map)
/// must coincide.
pub fn probability_consistency_gap(
    kernel: &FuzzyKernel,
    pvm: &SharpObservable,
    rho: &DensityOperator,
    outcomes: &OutcomeSet,
) -> Result<f64> {
    let window = check_lattice_state(rho)?;
    let effects = build_effects(kernel, pvm)?;
    let p_effects = probability(&effects, rho, outcomes)?;
    let post = epistemic_transform(kernel, pvm, rho, &OutcomeSet::All)?;
    let p_post: f64 = outcomes
        .indices(&window)?
        .into_iter()
        .map(|i| post[(i, i)].re)
        .sum();
    Ok((p_effects - p_post).abs())
}

/// One of the three state transformers, with its kernel where one is needed.
#[derive(Clone, Copy, Debug)]
pub enum Transformer<'a> {
    VonNeumann,
    Oqp(&'a FuzzyKernel),
    Epistemic(&'a FuzzyKernel),
}

impl<'a> Transformer<'a> {
    pub fn flavor(&self) -> Flavor {
        match self {
            Transformer::VonNeumann => Flavor::VonNeumann,
            Transformer::Oqp(_) => Flavor::Oqp,
            Transformer::Epistemic(_) => Flavor::Epistemic,
        }
    }

    pub fn kernel(&self) -> Option<&'a FuzzyKernel> {
        match self {
            Transformer::VonNeumann => None,
            Transformer::Oqp(k) | Transformer::Epistemic(k) => Some(k),
        }
    }

    pub fn apply(
        &self,
        rho: &DensityOperator,
        outcomes: &OutcomeSet,
    ) -> Result<DMatrix<Complex64>> {
        let pvm = SharpObservable::new(rho.window()?);
        match self {
            Transformer::VonNeumann => von_neumann_transform(&pvm, rho, outcomes),
            Transformer::Oqp(k) => oqp_transform(k, &pvm, rho, outcomes),
            Transformer::Epistemic(k) => epistemic_transform(k, &pvm, rho, outcomes),
        }
    }

    /// The Kraus realization of this transformer on a window.
    pub fn kraus_set(&self, window: LatticeWindow) -> KrausSet {
        match self {
            Transformer::VonNeumann => KrausSet::von_neumann(window),
            Transformer::Oqp(k) => KrausSet::oqp(k),
            Transformer::Epistemic(k) => KrausSet::epistemic(k),
        }
    }
}

/// max-norm of T(all, rho) - sum_m T({m}, rho); the nonselective map must
/// decompose into the selective ones.
pub fn nonselective_decomposition_gap(t: &Transformer, rho: &DensityOperator) -> Result<f64> {
    let window = check_lattice_state(rho)?;
    let all = t.apply(rho, &OutcomeSet::All)?;
    let d = window.dim();
    let mut sum = DMatrix::<Complex64>::zeros(d, d);
    for m in window.sites() {
        sum += t.apply(rho, &OutcomeSet::sites([m]))?;
    }
    Ok(max_abs_diff(&all, &sum))
}

/// U_a rho U_a' for the cyclic shift U_a |m> = |m - a>: entries move as
/// (k, n) -> (k + a, n + a).
pub fn shift_conjugate(
    m: &DMatrix<Complex64>,
    window: &LatticeWindow,
    a: i64,
) -> DMatrix<Complex64> {
    let d = window.dim() as i64;
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let si = (i as i64 + a).rem_euclid(d) as usize;
        let sj = (j as i64 + a).rem_euclid(d) as usize;
        m[(si, sj)]
    })
}

/// Worst covariance defect max_B || T(B + a, rho) - U_a' T(B, U_a rho U_a') U_a ||
/// over a fixed family of outcome sets.
///
/// Exact only on the cyclic group, hence the periodic-window requirement;
/// fuzzy flavors additionally need a homogeneous kernel.
pub fn shift_covariance_gap(t: &Transformer, rho: &DensityOperator, a: i64) -> Result<f64> {
    let window = check_lattice_state(rho)?;
    if !window.is_periodic() {
        return Err(Error::ContractViolation(
            "shift covariance is only exact on a periodic window".into(),
        ));
    }
    if let Some(kernel) = t.kernel() {
        if !kernel.is_homogeneous() {
            return Err(Error::ContractViolation(
                "shift covariance requires a homogeneous kernel".into(),
            ));
        }
    }
    let l = window.half_width();
    let mut family = vec![
        OutcomeSet::All,
        OutcomeSet::sites([0]),
        OutcomeSet::sites([-l]),
        OutcomeSet::sites([-1, 0, 1]),
    ];
    if l > 2 {
        family.push(OutcomeSet::sites([2, l]));
    }

    let conjugated = DensityOperator::from_parts_unchecked(
        shift_conjugate(rho.matrix(), &window, a),
        rho.basis(),
    );
    let mut gap = 0.0f64;
    for b in &family {
        let lhs = t.apply(rho, &b.shifted(&window, a))?;
        let inner = t.apply(&conjugated, b)?;
        let rhs = shift_conjugate(&inner, &window, -a);
        gap = gap.max(max_abs_diff(&lhs, &rhs));
    }
    Ok(gap)
}
