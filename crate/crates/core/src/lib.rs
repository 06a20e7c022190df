//! Simulation toolkit for post-measurement state transformations after
//! fuzzy quantum measurements.
//!
//! A sharp observable with purely discrete spectrum is fuzzified by a
//! column-stochastic kernel into a POVM. Two rival prescriptions describe
//! the state after such a measurement: the standard operational (OQP)
//! instrument built from the square roots of the effects, and the
//! "epistemic" map obtained by dualizing the fuzzification itself. This
//! crate implements both on truncated lattice windows and periodic spatial
//! grids, together with the outcome statistics, moment laws, linear
//! entropies and covariance checks that tell them apart.
//!
//! Organization:
//!
//! * [`lattice`], [`grid`]: the finite bases everything lives on.
//! * [`operator`]: density operators, effects, dense Hermitian helpers.
//! * [`theta`]: the Gaussian theta sums Psi0 and Psi1/2.
//! * [`kernel`], [`effects`]: fuzzy kernels, POVMs, the fuzzifier operator.
//! * [`transform`]: the three state transformers, Kraus sets, probabilities
//!   and the decomposition/covariance gap checks.
//! * [`stats`]: moments, entropies, the fuzzy Gaussian state and the
//!   theta-sum closed form.
//! * [`continuous`]: the grid-discretized position measurement with the
//!   Fourier-multiplier fuzzifier and the momentum moment formulas.
//! * [`io`]: the plain-text matrix exchange format.
//! * [`random`]: seeded state fixtures.

pub mod continuous;
pub mod effects;
pub mod error;
pub mod grid;
pub mod io;
pub mod kernel;
pub mod lattice;
pub mod operator;
pub mod random;
pub mod stats;
pub mod theta;
pub mod tol;
pub mod transform;

pub use continuous::{
    epistemic_transform_continuous, gaussian_packet, momentum_first_moment, momke_value,
    momko_value, oqp_transform_continuous, ContinuousFuzzifier, SmearingKernel,
};
pub use effects::{build_effects, fuzzifier, is_regular_effect, EffectSet, FuzzifierOperator};
pub use error::{Error, Result};
pub use grid::GridSpec;
pub use kernel::FuzzyKernel;
pub use lattice::{suggested_half_width, Boundary, LatticeWindow};
pub use operator::{
    hermitize, purity, validate_density, Basis, DensityOperator, Effect, SharpObservable,
    ValidityReport,
};
pub use random::{random_density, random_pure, random_pure_nonnegative};
pub use stats::{
    binomial_convolution_moment, entropy_equality_gap, entropy_formula_epistemic,
    entropy_formula_oqp, gaussian_entropy_closed_form, gaussian_fuzzy_state, kernel_moment,
    linear_entropy, moment_after, sharp_measurement_limits, sharp_moment, EntropyReport,
    MomentFlavor, MomentReport, SharpLimitReport,
};
pub use theta::{psi0, psi0_poisson, psi_half, psi_half_poisson};
pub use transform::{
    epistemic_transform, kraus_apply, nonselective_decomposition_gap, oqp_transform, probability,
    probability_consistency_gap, shift_covariance_gap, von_neumann_transform, Flavor, KrausFlavor,
    KrausSet, OutcomeSet, Transformer,
};
