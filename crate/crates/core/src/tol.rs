//! Numerical tolerances used by validity checks and contract gaps.
//!
//! All thresholds are stated once here; the invariant checks, the acceptance
//! suite and the `selfcheck` subcommand all read the same constants.

/// Hermiticity: max |m_ij - conj(m_ji)| for density operators and effects.
pub const HERMITICITY_GAP: f64 = 1e-12;

/// Unit trace: |Tr rho - 1|.
pub const TRACE_GAP: f64 = 1e-10;

/// Positivity floor for Hermitian eigenvalues. Dense eigensolves are accurate
/// to roughly 1e-13 * d at the sizes used here.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;

/// Effect spectra must lie in [EIGENVALUE_FLOOR, 1 - EIGENVALUE_FLOOR].
pub const EFFECT_EIGENVALUE_CEIL: f64 = 1.0 + 1e-10;

/// Simple stochasticity: per-column |sum_a w_am - 1| after renormalization.
pub const KERNEL_COLUMN_SUM: f64 = 1e-14;

/// Fuzzifier columns: |<m|F'F|m> - 1|.
pub const FUZZIFIER_COLUMN_NORM: f64 = 1e-13;

/// POVM completeness: max-norm of (sum_a F_a - 1).
pub const EFFECT_COMPLETENESS: f64 = 1e-12;

/// Kraus completeness: max-norm of (sum_m A_m' A_m - 1).
pub const KRAUS_COMPLETENESS: f64 = 1e-12;

/// Trace preservation of nonselective discrete transformers.
pub const TRACE_PRESERVATION: f64 = 1e-12;

/// Two probability routes (effects vs post-measurement diagonal).
pub const PROBABILITY_CONSISTENCY: f64 = 1e-12;

/// Nonselective output vs sum of selective outputs.
pub const DECOMPOSITION_GAP: f64 = 1e-13;

/// Discrete shift covariance on the cyclic window.
pub const SHIFT_COVARIANCE: f64 = 1e-12;

/// Dedicated transformer vs generic Kraus application.
pub const TRANSFORMER_KRAUS_MATCH: f64 = 1e-13;

/// Closed-form entropy expressions vs brute-force 1 - Tr(rho^2).
pub const ENTROPY_FORMULA_MATCH: f64 = 1e-10;

/// Relative truncation target of the theta sums.
pub const THETA_RELATIVE: f64 = 1e-14;

/// Trace preservation on the discretized continuous grid.
pub const CONTINUOUS_TRACE: f64 = 1e-11;

/// Translation covariance on the periodic grid.
pub const CONTINUOUS_COVARIANCE: f64 = 1e-11;

/// Commutator of the Fourier-multiplier fuzzifier with grid translations.
pub const COMMUTATOR_NORM: f64 = 1e-12;

/// Momentum first-moment formulas vs the direct spectral evaluation.
pub const MOMENTUM_FORMULA: f64 = 1e-6;
