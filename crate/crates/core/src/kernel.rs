//! Fuzzy kernels: the column-stochastic weight matrices that turn a sharp
//! observable into a fuzzy one.
//!
//! A kernel assigns to each spectral site m a probability distribution
//! w_am over outcomes a. The Gaussian family w_km ~ exp(-(k-m)^2/sigma^2)
//! is the worked example throughout; on periodic windows it is homogeneous
//! (depends on k - m only), which the moment and covariance laws rely on.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::lattice::{Boundary, LatticeWindow};

/// Tolerance used when classifying a custom kernel as homogeneous.
const HOMOGENEITY_EPS: f64 = 1e-13;

/// Nonnegative column-stochastic weights w[outcome, site] on a window.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzyKernel {
    weights: DMatrix<f64>,
    window: LatticeWindow,
    sigma: Option<f64>,
    homogeneous: bool,
}

impl FuzzyKernel {
    /// Gaussian kernel w_km = exp(-(k-m)^2/sigma^2) / N_m with N_m the
    /// column sum over the window.
    ///
    /// sigma = 0 is accepted and denotes the delta kernel (the sharp limit);
    /// the columns of every kernel are renormalized over the finite window so
    /// simple stochasticity holds exactly rather than up to a truncation
    /// residue.
    pub fn gaussian(sigma: f64, window: LatticeWindow) -> Result<Self> {
        if sigma < 0.0 || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "gaussian kernel needs sigma >= 0, got {sigma}"
            )));
        }
        if sigma == 0.0 {
            return Ok(Self::delta(window));
        }
        let d = window.dim();
        let inv = 1.0 / (sigma * sigma);
        let weights = match window.boundary() {
            Boundary::Periodic => {
                // one shared profile and one shared normalization keep the
                // kernel bitwise homogeneous
                let profile: Vec<f64> = window
                    .sites()
                    .map(|u| (-((u * u) as f64) * inv).exp())
                    .collect();
                let norm: f64 = profile.iter().sum();
                DMatrix::from_fn(d, d, |k, m| {
                    let u = window.displacement(window.site_at(m), window.site_at(k));
                    profile[window.index_of(u).expect("|u| <= L")] / norm
                })
            }
            Boundary::Open => {
                let mut w = DMatrix::from_fn(d, d, |k, m| {
                    let u = (k as i64 - m as i64) as f64;
                    (-u * u * inv).exp()
                });
                for mut col in w.column_iter_mut() {
                    let norm: f64 = col.iter().sum();
                    col /= norm;
                }
                w
            }
        };
        Ok(Self {
            weights,
            window,
            sigma: Some(sigma),
            homogeneous: window.is_periodic(),
        })
    }

    /// The delta kernel w_km = delta_km (sharp measurement).
    pub fn delta(window: LatticeWindow) -> Self {
        let d = window.dim();
        Self {
            weights: DMatrix::identity(d, d),
            window,
            sigma: Some(0.0),
            homogeneous: window.is_periodic(),
        }
    }

    /// Custom kernel from raw weights. Entries must be nonnegative and
    /// columns nonzero; columns are renormalized to sum to one. Homogeneity
    /// is detected on periodic windows.
    pub fn from_weights(weights: DMatrix<f64>, window: LatticeWindow) -> Result<Self> {
        let d = window.dim();
        if weights.nrows() != d || weights.ncols() != d {
            return Err(Error::DimensionMismatch(format!(
                "kernel is {}x{}, window dimension is {d}",
                weights.nrows(),
                weights.ncols()
            )));
        }
        if weights.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "kernel weights must be finite and nonnegative".into(),
            ));
        }
        let mut weights = weights;
        for mut col in weights.column_iter_mut() {
            let norm: f64 = col.iter().sum();
            if norm <= 0.0 {
                return Err(Error::InvalidParameter(
                    "kernel has an all-zero column".into(),
                ));
            }
            col /= norm;
        }
        let homogeneous =
            window.is_periodic() && homogeneity_gap_of(&weights, &window) <= HOMOGENEITY_EPS;
        Ok(Self {
            weights,
            window,
            sigma: None,
            homogeneous,
        })
    }

    pub fn weights(&self) -> &DMatrix<f64> {
        &self.weights
    }

    /// w[outcome k, site m] by site labels.
    pub fn weight(&self, outcome: i64, site: i64) -> Result<f64> {
        let k = self.window.index_of(outcome)?;
        let m = self.window.index_of(site)?;
        Ok(self.weights[(k, m)])
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    /// Fuzz parameter of the built-in families; None for custom kernels.
    pub fn sigma(&self) -> Option<f64> {
        self.sigma
    }

    pub fn is_homogeneous(&self) -> bool {
        self.homogeneous
    }

    pub fn is_delta(&self) -> bool {
        self.sigma == Some(0.0)
    }

    /// Entrywise square roots (the fuzzifier entries).
    pub fn sqrt_weights(&self) -> DMatrix<f64> {
        self.weights.map(f64::sqrt)
    }

    /// max_m |sum_k w_km - 1|, the stochasticity gap.
    pub fn column_sum_gap(&self) -> f64 {
        self.weights
            .column_iter()
            .map(|c| (c.iter().sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    /// max |w_{m+u,m} - w_u| over the cyclic window; None on open windows
    /// where homogeneity is not meaningful.
    pub fn homogeneity_gap(&self) -> Option<f64> {
        self.window
            .is_periodic()
            .then(|| homogeneity_gap_of(&self.weights, &self.window))
    }

    /// Offset profile w_u of a homogeneous kernel, indexed by the signed
    /// cyclic offset u in [-L, L].
    pub fn offset_profile(&self) -> Result<Vec<(i64, f64)>> {
        if !self.homogeneous {
            return Err(Error::ContractViolation(
                "offset profile requires a homogeneous kernel on a periodic window".into(),
            ));
        }
        let m0 = self.window.index_of(0).expect("0 is always in the window");
        Ok(self
            .window
            .sites()
            .map(|u| {
                let k = self.window.index_of(self.window.wrap(u)).unwrap();
                (u, self.weights[(k, m0)])
            })
            .collect())
    }
}

fn homogeneity_gap_of(weights: &DMatrix<f64>, window: &LatticeWindow) -> f64 {
    let m0 = window.index_of(0).expect("0 site");
    let mut gap = 0.0f64;
    for m in 0..window.dim() {
        for k in 0..window.dim() {
            let u = window.displacement(window.site_at(m), window.site_at(k));
            let k_ref = window.index_of(window.wrap(u)).unwrap();
            gap = gap.max((weights[(k, m)] - weights[(k_ref, m0)]).abs());
        }
    }
    gap
}
