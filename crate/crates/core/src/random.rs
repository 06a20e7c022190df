//! Seeded random state fixtures.
//!
//! Test sweeps and the `selfcheck` battery draw states from here; a fixed
//! seed makes every run reproduce the same numbers.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha12Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::lattice::LatticeWindow;
use crate::operator::{trace, Basis, DensityOperator};

/// Full-rank random state: G G' from a complex Gaussian matrix G,
/// normalized to unit trace. Positive by construction.
pub fn random_density(basis: Basis, seed: u64) -> DensityOperator {
    let d = basis.dim();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let g = DMatrix::from_fn(d, d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    let m = &g * g.adjoint();
    let t = trace(&m).re;
    DensityOperator::from_parts_unchecked(m * Complex64::new(1.0 / t, 0.0), basis)
}

/// Random pure state with complex Gaussian amplitudes.
pub fn random_pure(basis: Basis, seed: u64) -> DensityOperator {
    let d = basis.dim();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let amps = DVector::from_fn(d, |_, _| {
        Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
    });
    DensityOperator::pure_from_amplitudes(&amps, basis).expect("nonzero with probability 1")
}

/// Random pure state with nonnegative real amplitudes (the class on which
/// the two entropy formulas coincide entry by entry).
pub fn random_pure_nonnegative(window: LatticeWindow, seed: u64) -> Result<DensityOperator> {
    let d = window.dim();
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let amps = DVector::from_fn(d, |_, _| {
        let x: f64 = rng.sample(StandardNormal);
        Complex64::new(x.abs(), 0.0)
    });
    DensityOperator::pure_from_amplitudes(&amps, Basis::Lattice(window))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::operator::{purity, validate_density};

    #[test]
    fn random_states_are_valid_and_reproducible() {
        let w = LatticeWindow::new(6, Boundary::Periodic).unwrap();
        let a = random_density(Basis::Lattice(w), 42);
        let b = random_density(Basis::Lattice(w), 42);
        assert_eq!(a.matrix(), b.matrix());
        assert!(validate_density(&a).passes());
        let c = random_density(Basis::Lattice(w), 43);
        assert_ne!(a.matrix(), c.matrix());
    }

    #[test]
    fn random_pure_is_rank_one() {
        let w = LatticeWindow::new(5, Boundary::Periodic).unwrap();
        let rho = random_pure(Basis::Lattice(w), 7);
        assert!((purity(&rho) - 1.0).abs() < 1e-12);
        let nn = random_pure_nonnegative(w, 7).unwrap();
        assert!((purity(&nn) - 1.0).abs() < 1e-12);
        assert!(nn.matrix().iter().all(|z| z.re >= 0.0 && z.im == 0.0));
    }
}
