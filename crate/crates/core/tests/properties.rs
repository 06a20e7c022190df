//! Property tests for the structural invariants: stochasticity, trace
//! preservation, positivity, monotonicity, and the theta-sum identity.

use fuzzmeas::operator::{matrix_purity, min_eigenvalue, trace};
use fuzzmeas::{
    build_effects, probability, psi0, psi0_poisson, psi_half, psi_half_poisson, random_density,
    Basis, Boundary, FuzzyKernel, LatticeWindow, OutcomeSet, SharpObservable, Transformer,
};
use proptest::prelude::*;

fn window_strategy() -> impl Strategy<Value = LatticeWindow> {
    (2i64..=8, prop::bool::ANY).prop_map(|(l, periodic)| {
        let boundary = if periodic {
            Boundary::Periodic
        } else {
            Boundary::Open
        };
        LatticeWindow::new(l, boundary).unwrap()
    })
}

fn kernel_strategy() -> impl Strategy<Value = FuzzyKernel> {
    (window_strategy(), 0.0f64..3.0).prop_map(|(w, sigma)| FuzzyKernel::gaussian(sigma, w).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gaussian_kernels_are_column_stochastic(kernel in kernel_strategy()) {
        prop_assert!(kernel.column_sum_gap() <= 1e-14);
        prop_assert!(kernel.weights().iter().all(|&x| x >= 0.0));
    }

    #[test]
    fn effects_resolve_unity_on_any_state(
        kernel in kernel_strategy(),
        seed in 0u64..1_000,
    ) {
        let window = kernel.window();
        let pvm = SharpObservable::new(window);
        let effects = build_effects(&kernel, &pvm).unwrap();
        let rho = random_density(Basis::Lattice(window), seed);
        let total = probability(&effects, &rho, &OutcomeSet::All).unwrap();
        prop_assert!((total - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn transformers_preserve_trace_positivity_hermiticity(
        kernel in kernel_strategy(),
        seed in 0u64..1_000,
    ) {
        let window = kernel.window();
        let rho = random_density(Basis::Lattice(window), seed);
        for t in [
            Transformer::VonNeumann,
            Transformer::Oqp(&kernel),
            Transformer::Epistemic(&kernel),
        ] {
            let out = t.apply(&rho, &OutcomeSet::All).unwrap();
            prop_assert!((trace(&out).re - 1.0).abs() <= 1e-12);
            prop_assert!(fuzzmeas::operator::hermiticity_gap(&out) <= 1e-13);
            prop_assert!(min_eigenvalue(&out) >= -1e-10);
            // complete positivity shows on selective outputs too
            let sel = t.apply(&rho, &OutcomeSet::sites([0, 1])).unwrap();
            prop_assert!(min_eigenvalue(&sel) >= -1e-10);
        }
    }

    #[test]
    fn selective_traces_are_monotone(
        kernel in kernel_strategy(),
        seed in 0u64..1_000,
        split in 1usize..5,
    ) {
        let window = kernel.window();
        let rho = random_density(Basis::Lattice(window), seed);
        // nested outcome sets B ⊆ B'
        let sites: Vec<i64> = window.sites().collect();
        let small: Vec<i64> = sites.iter().copied().take(split.min(sites.len())).collect();
        let large: Vec<i64> = sites
            .iter()
            .copied()
            .take((2 * split).min(sites.len()))
            .collect();
        for t in [Transformer::Oqp(&kernel), Transformer::Epistemic(&kernel)] {
            let tr_small = trace(&t.apply(&rho, &OutcomeSet::sites(small.clone())).unwrap()).re;
            let tr_large = trace(&t.apply(&rho, &OutcomeSet::sites(large.clone())).unwrap()).re;
            prop_assert!(tr_small <= tr_large + 1e-13);
            prop_assert!(tr_small >= -1e-13);
        }
    }

    #[test]
    fn purity_never_exceeds_one(kernel in kernel_strategy(), seed in 0u64..1_000) {
        let rho = random_density(Basis::Lattice(kernel.window()), seed);
        let out = Transformer::Oqp(&kernel).apply(&rho, &OutcomeSet::All).unwrap();
        let p = matrix_purity(&out);
        prop_assert!(p <= 1.0 + 1e-12 && p >= 0.0);
    }

    #[test]
    fn theta_sums_satisfy_poisson_identity(sigma in 0.05f64..10.0) {
        let direct = psi0(sigma).unwrap();
        let dual = psi0_poisson(sigma).unwrap();
        prop_assert!((direct - dual).abs() <= 1e-12 * direct.max(1.0));
        let dh = psi_half(sigma).unwrap();
        let ph = psi_half_poisson(sigma).unwrap();
        prop_assert!((dh - ph).abs() <= 1e-12 * direct.max(1.0));
    }

    #[test]
    fn delta_kernel_collapses_everything(seed in 0u64..1_000, l in 2i64..=8) {
        let window = LatticeWindow::new(l, Boundary::Periodic).unwrap();
        let kernel = FuzzyKernel::delta(window);
        let rho = random_density(Basis::Lattice(window), seed);
        let pvm = SharpObservable::new(window);
        let vn = fuzzmeas::von_neumann_transform(&pvm, &rho, &OutcomeSet::All).unwrap();
        let oqp = fuzzmeas::oqp_transform(&kernel, &pvm, &rho, &OutcomeSet::All).unwrap();
        let epi = fuzzmeas::epistemic_transform(&kernel, &pvm, &rho, &OutcomeSet::All).unwrap();
        prop_assert!(fuzzmeas::operator::max_abs_diff(&oqp, &vn) <= 1e-14);
        prop_assert!(fuzzmeas::operator::max_abs_diff(&epi, &vn) <= 1e-14);
    }

    #[test]
    fn validity_survives_every_transformer(
        kernel in kernel_strategy(),
        seed in 0u64..1_000,
    ) {
        // validate_density(hermitize(T(rho))) passes for every flavor
        let window = kernel.window();
        let rho = random_density(Basis::Lattice(window), seed);
        for t in [
            Transformer::VonNeumann,
            Transformer::Oqp(&kernel),
            Transformer::Epistemic(&kernel),
        ] {
            let out = t.apply(&rho, &OutcomeSet::All).unwrap();
            let report =
                fuzzmeas::operator::validate_density_matrix(&out, &Basis::Lattice(window))
                    .unwrap();
            prop_assert!(report.passes(), "{:?}: {report}", t.flavor());
        }
    }
}

#[test]
fn fuzzy_state_pure_and_normalized_on_grid_of_parameters() {
    let window = LatticeWindow::new(24, Boundary::Periodic).unwrap();
    for alpha in [0.0, 0.2, 1.0, 2.5] {
        for a in [-3, 0, 7] {
            let rho = fuzzmeas::gaussian_fuzzy_state(a, alpha, window).unwrap();
            assert!((fuzzmeas::purity(&rho) - 1.0).abs() <= 1e-12);
            assert!((trace(rho.matrix()).re - 1.0).abs() <= 1e-13);
        }
    }
}
