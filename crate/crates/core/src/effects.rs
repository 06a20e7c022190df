//! Fuzzified effects and the fuzzifier operator.
//!
//! A kernel w and a sharp PVM {E_m} produce the POVM F_a = sum_m w_am E_m
//! (diagonal in the sharp basis) and the positive operator F_d with entries
//! <k|F_d|m> = sqrt(w_km), the real nonnegative root of |<k|F_d|m>|^2 = w_km.
//! F_d generates the epistemic state transformer.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::kernel::FuzzyKernel;
use crate::lattice::LatticeWindow;
use crate::operator::{real_to_complex, Effect, SharpObservable};

/// POVM built by fuzzifying a sharp observable: one effect per outcome site.
#[derive(Clone, Debug)]
pub struct EffectSet {
    effects: Vec<Effect>,
    window: LatticeWindow,
}

impl EffectSet {
    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn len(&self) -> usize {
        self.effects.len()
    }

    pub fn is_empty(&self) -> bool {
        self.effects.is_empty()
    }

    pub fn effects(&self) -> &[Effect] {
        &self.effects
    }

    /// Effect for outcome site `a`.
    pub fn effect(&self, outcome: i64) -> Result<&Effect> {
        Ok(&self.effects[self.window.index_of(outcome)?])
    }

    /// max-norm of sum_a F_a - 1.
    pub fn completeness_gap(&self) -> f64 {
        let d = self.window.dim();
        let mut sum = DMatrix::<Complex64>::zeros(d, d);
        for e in &self.effects {
            sum += e.matrix();
        }
        let mut gap = 0.0f64;
        for i in 0..d {
            for j in 0..d {
                let expect = if i == j { 1.0 } else { 0.0 };
                gap = gap.max((sum[(i, j)] - Complex64::new(expect, 0.0)).norm());
            }
        }
        gap
    }
}

/// F_a = sum_m w_am E_m for every outcome a on the window.
pub fn build_effects(kernel: &FuzzyKernel, pvm: &SharpObservable) -> Result<EffectSet> {
    if kernel.window() != pvm.window() {
        return Err(Error::DimensionMismatch(
            "kernel and sharp observable live on different windows".into(),
        ));
    }
    let w = kernel.weights();
    let effects = (0..kernel.dim())
        .map(|a| {
            let row: Vec<f64> = w.row(a).iter().copied().collect();
            Effect::from_diagonal_weights(&row)
        })
        .collect();
    Ok(EffectSet {
        effects,
        window: kernel.window(),
    })
}

/// The positive operator F_d with (F_d)_km = sqrt(w_km).
///
/// Its entrywise square reproduces the kernel and its columns are unit
/// vectors (sum_k w_km = 1), so F_d' F_d has unit diagonal.
#[derive(Clone, Debug, PartialEq)]
pub struct FuzzifierOperator {
    matrix: DMatrix<f64>,
    window: LatticeWindow,
}

impl FuzzifierOperator {
    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn complex_matrix(&self) -> DMatrix<Complex64> {
        real_to_complex(&self.matrix)
    }

    pub fn window(&self) -> LatticeWindow {
        self.window
    }

    pub fn dim(&self) -> usize {
        self.window.dim()
    }

    /// Column for site m: the amplitudes sqrt(w_km), a unit vector.
    pub fn column(&self, site: i64) -> Result<DVector<f64>> {
        let idx = self.window.index_of(site)?;
        Ok(self.matrix.column(idx).into_owned())
    }

    /// max |(F_d)_km^2 - w_km|.
    pub fn square_gap(&self, kernel: &FuzzyKernel) -> f64 {
        let mut gap = 0.0f64;
        for (f, w) in self.matrix.iter().zip(kernel.weights().iter()) {
            gap = gap.max((f * f - w).abs());
        }
        gap
    }

    /// max_m |<m|F_d' F_d|m> - 1|.
    pub fn column_norm_gap(&self) -> f64 {
        self.matrix
            .column_iter()
            .map(|c| (c.iter().map(|x| x * x).sum::<f64>() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

/// Real nonnegative square-root branch of the kernel; the delta kernel maps
/// to the identity exactly.
pub fn fuzzifier(kernel: &FuzzyKernel) -> FuzzifierOperator {
    FuzzifierOperator {
        matrix: kernel.sqrt_weights(),
        window: kernel.window(),
    }
}

/// True iff the effect has spectral weight both above and below 1/2, i.e.
/// neither F <= 1/2 nor F >= 1/2.
pub fn is_regular_effect(effect: &Effect) -> bool {
    let (lo, hi) = effect.eigenvalue_range();
    lo < 0.5 && hi > 0.5
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::Boundary;
    use crate::theta::psi0;
    use crate::tol;

    fn pwin(l: i64) -> LatticeWindow {
        LatticeWindow::new(l, Boundary::Periodic).unwrap()
    }

    #[test]
    fn delta_effects_are_projectors() {
        let w = pwin(3);
        let kernel = FuzzyKernel::delta(w);
        let pvm = SharpObservable::new(w);
        let set = build_effects(&kernel, &pvm).unwrap();
        for m in w.sites() {
            let e = set.effect(m).unwrap();
            let p = pvm.projector(m).unwrap();
            assert_eq!(e.matrix(), &p);
        }
        assert_eq!(set.completeness_gap(), 0.0);
    }

    #[test]
    fn gaussian_effects_complete_and_peaked() {
        let w = pwin(10);
        let kernel = FuzzyKernel::gaussian(0.3, w).unwrap();
        let set = build_effects(&kernel, &SharpObservable::new(w)).unwrap();
        assert!(set.completeness_gap() <= tol::EFFECT_COMPLETENESS);
        let e0 = set.effect(0).unwrap();
        let peak = e0.matrix()[(10, 10)].re;
        assert!((peak - 1.0 / psi0(0.3).unwrap()).abs() < 1e-12);
        // effects are diagonal in the sharp basis
        for (i, j) in [(0, 1), (3, 7), (20, 0)] {
            assert_eq!(e0.matrix()[(i, j)].norm(), 0.0);
        }
    }

    #[test]
    fn window_mismatch_rejected() {
        let kernel = FuzzyKernel::delta(pwin(3));
        let pvm = SharpObservable::new(pwin(4));
        assert!(build_effects(&kernel, &pvm).is_err());
    }

    #[test]
    fn fuzzifier_of_delta_is_identity() {
        let f = fuzzifier(&FuzzyKernel::delta(pwin(5)));
        assert_eq!(f.matrix(), &DMatrix::<f64>::identity(11, 11));
        assert_eq!(f.column_norm_gap(), 0.0);
    }

    #[test]
    fn fuzzifier_square_reproduces_kernel() {
        let kernel = FuzzyKernel::gaussian(1.0, pwin(8)).unwrap();
        let f = fuzzifier(&kernel);
        assert!(f.square_gap(&kernel) <= 1e-15);
        assert!(f.column_norm_gap() <= tol::FUZZIFIER_COLUMN_NORM);
    }

    #[test]
    fn fuzzifier_gaussian_off_diagonal_value() {
        // (F_d)_{k,m} = exp(-(k-m)^2 / 2 sigma^2) / sqrt(N_m); at sigma = 1,
        // |k-m| = 1, L large, N_m -> Psi0(1).
        let kernel = FuzzyKernel::gaussian(1.0, pwin(12)).unwrap();
        let f = fuzzifier(&kernel);
        let expected = (-0.5f64).exp() / psi0(1.0).unwrap().sqrt();
        let i1 = kernel.window().index_of(1).unwrap();
        let i0 = kernel.window().index_of(0).unwrap();
        assert!((f.matrix()[(i1, i0)] - expected).abs() < 1e-12);
    }

    #[test]
    fn regularity_classification() {
        let w = pwin(5);
        let pvm = SharpObservable::new(w);
        // sharp projector: eigenvalues 0 and 1
        let sharp = Effect::new(pvm.projector(0).unwrap()).unwrap();
        assert!(is_regular_effect(&sharp));

        // 0.3 * identity sits entirely below 1/2
        let below = Effect::new(DMatrix::from_diagonal_element(
            11,
            11,
            Complex64::new(0.3, 0.0),
        ))
        .unwrap();
        assert!(!is_regular_effect(&below));

        // very fuzzy Gaussian effect: max weight 1/Psi0(3) < 1/2
        let big = pwin(25);
        let kernel = FuzzyKernel::gaussian(3.0, big).unwrap();
        let set = build_effects(&kernel, &SharpObservable::new(big)).unwrap();
        let e = set.effect(0).unwrap();
        let (_, hi) = e.eigenvalue_range();
        assert!((hi - 1.0 / psi0(3.0).unwrap()).abs() < 1e-12);
        assert!(!is_regular_effect(e));
    }
}
