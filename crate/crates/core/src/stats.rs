//! Moments and linear entropies of the measured observable before and after
//! each transformer, the fuzzy Gaussian initial state, and the theta-sum
//! closed form for its post-measurement entropy.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::FuzzyKernel;
use crate::lattice::LatticeWindow;
use crate::operator::{matrix_purity, purity, Basis, DensityOperator};
use crate::theta::{psi0, psi_half};
use crate::transform::{epistemic_transform, oqp_transform, OutcomeSet};
use crate::{effects, operator::SharpObservable};

/// Which state a moment belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MomentFlavor {
    Initial,
    Oqp,
    Epistemic,
}

impl MomentFlavor {
    pub fn label(&self) -> &'static str {
        match self {
            MomentFlavor::Initial => "initial",
            MomentFlavor::Oqp => "oqp",
            MomentFlavor::Epistemic => "epistemic",
        }
    }
}

/// A single moment M_n of the sharp observable.
#[derive(Clone, Copy, Debug)]
pub struct MomentReport {
    pub order: u32,
    pub value: f64,
    pub flavor: MomentFlavor,
}

/// M_n = sum_m m^n rho_mm, with m the signed site label in [-L, L].
pub fn sharp_moment(rho: &DensityOperator, order: u32) -> Result<f64> {
    let window = rho.window()?;
    Ok(moment_of_populations(
        rho.populations().as_slice(),
        &window,
        order,
    ))
}

fn moment_of_populations(pops: &[f64], window: &LatticeWindow, order: u32) -> f64 {
    pops.iter()
        .enumerate()
        .map(|(i, p)| (window.site_at(i) as f64).powi(order as i32) * p)
        .sum()
}

/// Kernel moment M_n^(w) = sum_u u^n w_u over signed cyclic offsets; only
/// defined for homogeneous kernels.
pub fn kernel_moment(kernel: &FuzzyKernel, order: u32) -> Result<f64> {
    let profile = kernel.offset_profile()?;
    Ok(profile
        .iter()
        .map(|(u, w)| (*u as f64).powi(order as i32) * w)
        .sum())
}

/// Moment of the sharp observable on the initial state or on a nonselective
/// transformer output.
pub fn moment_after(
    flavor: MomentFlavor,
    kernel: &FuzzyKernel,
    rho: &DensityOperator,
    order: u32,
) -> Result<MomentReport> {
    let window = rho.window()?;
    let pvm = SharpObservable::new(window);
    let value = match flavor {
        MomentFlavor::Initial => sharp_moment(rho, order)?,
        MomentFlavor::Oqp => {
            let out = oqp_transform(kernel, &pvm, rho, &OutcomeSet::All)?;
            moment_of_matrix(&out, &window, order)
        }
        MomentFlavor::Epistemic => {
            let out = epistemic_transform(kernel, &pvm, rho, &OutcomeSet::All)?;
            moment_of_matrix(&out, &window, order)
        }
    };
    Ok(MomentReport {
        order,
        value,
        flavor,
    })
}

fn moment_of_matrix(m: &DMatrix<Complex64>, window: &LatticeWindow, order: u32) -> f64 {
    (0..m.nrows())
        .map(|i| (window.site_at(i) as f64).powi(order as i32) * m[(i, i)].re)
        .sum()
}

fn binomial(n: u32, k: u32) -> f64 {
    let mut acc = 1.0f64;
    for j in 0..k.min(n - k) {
        acc = acc * (n - j) as f64 / (j + 1) as f64;
    }
    acc
}

/// The convolution law for the epistemic moments:
/// M_n^(E) = sum_k C(n, k) M_k M_{n-k}^(w).
pub fn binomial_convolution_moment(
    kernel: &FuzzyKernel,
    rho: &DensityOperator,
    order: u32,
) -> Result<f64> {
    let mut acc = 0.0;
    for k in 0..=order {
        acc += binomial(order, k) * sharp_moment(rho, k)? * kernel_moment(kernel, order - k)?;
    }
    Ok(acc)
}

/// S = 1 - Tr(rho^2).
pub fn linear_entropy(rho: &DensityOperator) -> f64 {
    1.0 - purity(rho)
}

/// Linear entropy of a raw (nominally unit-trace) matrix.
pub fn linear_entropy_of_matrix(m: &DMatrix<Complex64>) -> f64 {
    1.0 - matrix_purity(m)
}

/// Gram profile G_kn = sum_m sqrt(w_mk w_mn) shared by both entropy
/// formulas.
fn gram(kernel: &FuzzyKernel) -> DMatrix<f64> {
    let a = kernel.sqrt_weights();
    a.transpose() * &a
}

/// S^(O) = 1 - sum_{n,k} (sum_m sqrt(w_mk w_mn))^2 rho_kn rho_nk, the
/// post-OQP linear entropy evaluated without forming the output state.
pub fn entropy_formula_oqp(kernel: &FuzzyKernel, rho: &DensityOperator) -> Result<f64> {
    let window = rho.window()?;
    if kernel.window() != window {
        return Err(Error::DimensionMismatch(
            "kernel and state live on different windows".into(),
        ));
    }
    let g = gram(kernel);
    let m = rho.matrix();
    let mut acc = 0.0;
    for k in 0..m.nrows() {
        for n in 0..m.ncols() {
            acc += g[(k, n)] * g[(k, n)] * (m[(k, n)] * m[(n, k)]).re;
        }
    }
    Ok(1.0 - acc)
}

/// S^(E) = 1 - sum_{n,k} (sum_m sqrt(w_mk w_mn))^2 rho_nn rho_kk; only the
/// populations enter because the epistemic map discards coherences first.
pub fn entropy_formula_epistemic(kernel: &FuzzyKernel, rho: &DensityOperator) -> Result<f64> {
    let window = rho.window()?;
    if kernel.window() != window {
        return Err(Error::DimensionMismatch(
            "kernel and state live on different windows".into(),
        ));
    }
    let g = gram(kernel);
    let pops = rho.populations();
    let mut acc = 0.0;
    for k in 0..pops.len() {
        for n in 0..pops.len() {
            acc += g[(k, n)] * g[(k, n)] * pops[k] * pops[n];
        }
    }
    Ok(1.0 - acc)
}

/// Both entropy formulas next to their brute-force values
/// 1 - Tr(rho_post^2); `closed_psi` is filled by callers that evaluate the
/// theta-sum closed form for the fuzzy Gaussian state.
#[derive(Clone, Copy, Debug)]
pub struct EntropyReport {
    pub formula_oqp: f64,
    pub formula_epistemic: f64,
    pub brute_oqp: f64,
    pub brute_epistemic: f64,
    pub closed_psi: Option<f64>,
}

impl EntropyReport {
    pub fn compute(kernel: &FuzzyKernel, rho: &DensityOperator) -> Result<Self> {
        let window = rho.window()?;
        let pvm = SharpObservable::new(window);
        let brute_oqp =
            linear_entropy_of_matrix(&oqp_transform(kernel, &pvm, rho, &OutcomeSet::All)?);
        let brute_epistemic =
            linear_entropy_of_matrix(&epistemic_transform(kernel, &pvm, rho, &OutcomeSet::All)?);
        Ok(Self {
            formula_oqp: entropy_formula_oqp(kernel, rho)?,
            formula_epistemic: entropy_formula_epistemic(kernel, rho)?,
            brute_oqp,
            brute_epistemic,
            closed_psi: None,
        })
    }

    /// |closed form - brute OQP|, when a closed form is attached.
    pub fn closed_form_gap(&self) -> Option<f64> {
        self.closed_psi.map(|c| (c - self.brute_oqp).abs())
    }
}

/// The pure "fuzzy position" state F_d^(alpha) |a><a| F_d^(alpha)': amplitudes
/// sqrt(w^(alpha)_ka) over the window. alpha = 0 degenerates to |a><a|.
pub fn gaussian_fuzzy_state(a: i64, alpha: f64, window: LatticeWindow) -> Result<DensityOperator> {
    if alpha < 0.0 || !alpha.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "fuzzy state needs alpha >= 0, got {alpha}"
        )));
    }
    let kernel = FuzzyKernel::gaussian(alpha, window)?;
    let psi = effects::fuzzifier(&kernel).column(a)?;
    let amps = psi.map(|x| Complex64::new(x, 0.0));
    DensityOperator::pure_from_amplitudes(&amps, Basis::Lattice(window))
}

/// |S^(O) - S^(E)| on the fuzzy Gaussian state; the two formulas coincide
/// there because rho_kn rho_nk = rho_kk rho_nn for a real nonnegative pure
/// state.
pub fn entropy_equality_gap(alpha: f64, sigma: f64, a: i64, window: LatticeWindow) -> Result<f64> {
    let rho = gaussian_fuzzy_state(a, alpha, window)?;
    let kernel = FuzzyKernel::gaussian(sigma, window)?;
    let s_o = entropy_formula_oqp(&kernel, &rho)?;
    let s_e = entropy_formula_epistemic(&kernel, &rho)?;
    Ok((s_o - s_e).abs())
}

/// Theta-sum closed form for the post-measurement entropy of the fuzzy
/// Gaussian state, evaluated literally:
///
/// S = 1 - Psi0(a)^-2 [ Psi0(a/2) Psi0(c) + (Psi1/2(s)/Psi0(s))^2 Psi1/2(a/2) Psi1/2(c) ],
/// c = a s / sqrt(2 (a^2 + 2 s^2)).
///
/// This expression is reported next to the brute-force entropy rather than
/// asserted against it; see `sharp_measurement_limits` for the disagreement
/// in the sharp-measurement regime.
pub fn gaussian_entropy_closed_form(alpha: f64, sigma: f64) -> Result<f64> {
    if !(alpha > 0.0) || !(sigma > 0.0) {
        return Err(Error::InvalidParameter(
            "closed form needs alpha > 0 and sigma > 0".into(),
        ));
    }
    let c = alpha * sigma / (2.0 * (alpha * alpha + 2.0 * sigma * sigma)).sqrt();
    let ratio = psi_half(sigma)? / psi0(sigma)?;
    let bracket =
        psi0(alpha / 2.0)? * psi0(c)? + ratio * ratio * psi_half(alpha / 2.0)? * psi_half(c)?;
    let p0a = psi0(alpha)?;
    Ok(1.0 - bracket / (p0a * p0a))
}

/// The three candidate values for the sharp-measurement (sigma -> 0) entropy
/// of the fuzzy Gaussian state. They disagree; the artifact reports all
/// three and asserts none.
#[derive(Clone, Copy, Debug)]
pub struct SharpLimitReport {
    pub alpha: f64,
    /// 1 - alpha/sqrt(pi): turns negative beyond alpha = sqrt(pi).
    pub stated_asymptote: f64,
    /// sigma -> 0 limit of the closed form: 1 - Psi0(alpha/2)/Psi0(alpha)^2.
    pub closed_form_limit: f64,
    /// Direct summation of 1 - sum_k rho_kk^2: 1 - Psi0(alpha/sqrt(2))/Psi0(alpha)^2.
    pub direct_summation: f64,
}

pub fn sharp_measurement_limits(alpha: f64) -> Result<SharpLimitReport> {
    if !(alpha > 0.0) {
        return Err(Error::InvalidParameter(
            "sharp-measurement report needs alpha > 0".into(),
        ));
    }
    let p0a = psi0(alpha)?;
    Ok(SharpLimitReport {
        alpha,
        stated_asymptote: 1.0 - alpha / std::f64::consts::PI.sqrt(),
        closed_form_limit: 1.0 - psi0(alpha / 2.0)? / (p0a * p0a),
        direct_summation: 1.0 - psi0(alpha / std::f64::consts::SQRT_2)? / (p0a * p0a),
    })
}
