//! Acceptance suite: one test per criterion, each printing a pass/fail line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).
//!
//! Criterion 10 (byte-identical `selfcheck` runs) lives with the CLI crate.

use std::time::Instant;

use fuzzmeas::operator::{max_abs_diff, min_eigenvalue, trace};
use fuzzmeas::stats::linear_entropy_of_matrix;
use fuzzmeas::transform::KrausSet;
use fuzzmeas::{
    binomial_convolution_moment, entropy_equality_gap, entropy_formula_epistemic,
    entropy_formula_oqp, epistemic_transform_continuous, gaussian_entropy_closed_form,
    gaussian_fuzzy_state, gaussian_packet, kraus_apply, moment_after, momentum_first_moment,
    momke_value, momko_value, oqp_transform_continuous, probability_consistency_gap, psi0,
    random_density, sharp_measurement_limits, sharp_moment, shift_covariance_gap, Basis, Boundary,
    Flavor, FuzzyKernel, GridSpec, LatticeWindow, MomentFlavor, OutcomeSet, SharpObservable,
    SmearingKernel, Transformer,
};

fn report(criterion: u32, name: &str, pass: bool, detail: &str) {
    println!(
        "criterion {criterion:2} ({name}): {} — {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {criterion} ({name}) failed: {detail}");
}

fn pwin(l: i64) -> LatticeWindow {
    LatticeWindow::new(l, Boundary::Periodic).unwrap()
}

/// Deterministic low-discrepancy samples in [lo, hi].
fn sweep(n: usize, lo: f64, hi: f64) -> Vec<f64> {
    let phi = 0.618_033_988_749_894_9_f64;
    (0..n)
        .map(|i| lo + (hi - lo) * (((i + 1) as f64 * phi) % 1.0))
        .collect()
}

#[test]
fn criterion_01_sharp_limit_collapse() {
    let start = Instant::now();
    let window = pwin(10); // d = 21
    let kernel = FuzzyKernel::delta(window);
    let pvm = SharpObservable::new(window);
    let mut worst = 0.0f64;
    for seed in 0..20 {
        let rho = random_density(Basis::Lattice(window), 100 + seed);
        for outcomes in [OutcomeSet::All, OutcomeSet::sites([0, 3, -7])] {
            let vn = fuzzmeas::von_neumann_transform(&pvm, &rho, &outcomes).unwrap();
            let oqp = fuzzmeas::oqp_transform(&kernel, &pvm, &rho, &outcomes).unwrap();
            let epi = fuzzmeas::epistemic_transform(&kernel, &pvm, &rho, &outcomes).unwrap();
            worst = worst
                .max(max_abs_diff(&oqp, &vn))
                .max(max_abs_diff(&epi, &vn));
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        1,
        "sharp-limit collapse",
        worst <= 1e-14 && elapsed < 1.0,
        &format!("max entrywise gap {worst:.2e}, {elapsed:.2}s"),
    );
}

#[test]
fn criterion_02_trace_and_positivity() {
    let start = Instant::now();
    let window = pwin(20); // d = 41, wide enough for sigma = 3 tails
    let mut worst_trace = 0.0f64;
    let mut worst_eig = f64::INFINITY;
    for sigma in [0.3, 1.0, 3.0] {
        let kernel = FuzzyKernel::gaussian(sigma, window).unwrap();
        for seed in 0..50 {
            let rho = random_density(Basis::Lattice(window), 1000 + seed);
            for t in [Transformer::Oqp(&kernel), Transformer::Epistemic(&kernel)] {
                let out = t.apply(&rho, &OutcomeSet::All).unwrap();
                worst_trace = worst_trace.max((trace(&out).re - 1.0).abs());
                worst_eig = worst_eig.min(min_eigenvalue(&out));
            }
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        2,
        "trace and positivity",
        worst_trace <= 1e-12 && worst_eig >= -1e-10 && elapsed < 5.0,
        &format!("|trace-1| <= {worst_trace:.2e}, min eig {worst_eig:.2e}, {elapsed:.2}s"),
    );
}

#[test]
fn criterion_03_probability_consistency() {
    let window = pwin(20);
    let pvm = SharpObservable::new(window);
    let mut worst = 0.0f64;
    for sigma in [0.3, 1.0, 3.0] {
        let kernel = FuzzyKernel::gaussian(sigma, window).unwrap();
        for seed in 0..50 {
            let rho = random_density(Basis::Lattice(window), 2000 + seed);
            for outcomes in [
                OutcomeSet::All,
                OutcomeSet::sites([0]),
                OutcomeSet::sites([0, 1, 2]),
                OutcomeSet::sites([-20, 20, 5]),
            ] {
                let gap = probability_consistency_gap(&kernel, &pvm, &rho, &outcomes).unwrap();
                worst = worst.max(gap);
            }
        }
    }
    report(
        3,
        "probability consistency",
        worst <= 1e-12,
        &format!("max gap {worst:.2e}"),
    );
}

#[test]
fn criterion_04_entropy_formula_equivalence() {
    let start = Instant::now();
    let window = pwin(20); // d = 41
    let sigmas = sweep(50, 0.2, 3.0);
    let mut worst = 0.0f64;
    for (i, &sigma) in sigmas.iter().enumerate() {
        let kernel = FuzzyKernel::gaussian(sigma, window).unwrap();
        let rho = random_density(Basis::Lattice(window), 3000 + i as u64);
        // brute force through the generic Kraus route, independent of the
        // Gram-profile arithmetic inside the formulas
        let oqp_out = kraus_apply(&KrausSet::oqp(&kernel), &rho, &OutcomeSet::All).unwrap();
        let epi_out = kraus_apply(&KrausSet::epistemic(&kernel), &rho, &OutcomeSet::All).unwrap();
        let gap_o = (entropy_formula_oqp(&kernel, &rho).unwrap()
            - linear_entropy_of_matrix(&oqp_out))
        .abs();
        let gap_e = (entropy_formula_epistemic(&kernel, &rho).unwrap()
            - linear_entropy_of_matrix(&epi_out))
        .abs();
        worst = worst.max(gap_o).max(gap_e);
    }
    let elapsed = start.elapsed().as_secs_f64();
    report(
        4,
        "entropy formula equivalence",
        worst <= 1e-10 && elapsed < 30.0,
        &format!("max |formula - brute| {worst:.2e} over 50 pairs, {elapsed:.2}s"),
    );
}

#[test]
fn criterion_05_fuzzy_state_entropy_equality() {
    let window = pwin(32); // holds alpha, sigma up to 5
    let grid = [0.1, 0.5, 1.0, 2.0, 3.0, 5.0];
    let mut worst = 0.0f64;
    for &alpha in &grid {
        for &sigma in &grid {
            worst = worst.max(entropy_equality_gap(alpha, sigma, 0, window).unwrap());
        }
    }
    report(
        5,
        "fuzzy-initial-state equality",
        worst <= 1e-10,
        &format!("max |S_O - S_E| {worst:.2e} on the 6x6 grid"),
    );
}

#[test]
fn criterion_06_paper_asymptotics() {
    // (a) near-sharp initial state stays almost pure on every route
    let mut worst_a = 0.0f64;
    let small_window = pwin(14);
    for sigma in [0.5, 1.0, 10.0] {
        worst_a = worst_a.max(gaussian_entropy_closed_form(0.1, sigma).unwrap().abs());
        let rho = gaussian_fuzzy_state(0, 0.1, small_window).unwrap();
        let kernel = FuzzyKernel::gaussian(sigma, small_window).unwrap();
        worst_a = worst_a.max(entropy_formula_oqp(&kernel, &rho).unwrap().abs());
    }
    let pass_a = worst_a <= 1e-6;

    // (b) fuzzy state, very unsharp measurement: the closed form reaches the
    // 1/2 plateau; the brute-force value on the stated window is computed
    // and reported (the discrepancy is the point, not a failure)
    let (alpha, sigma) = (2.0, 100.0);
    let closed = gaussian_entropy_closed_form(alpha, sigma).unwrap();
    let target = 1.0 - sigma / (2.0 * (alpha * alpha + 2.0 * sigma * sigma)).sqrt();
    let pass_b = (closed - 0.5).abs() <= 0.005 && (closed - target).abs() <= 0.01 * target.abs();

    let big = pwin(700); // d = 1401
    let rho = gaussian_fuzzy_state(0, alpha, big).unwrap();
    let kernel = FuzzyKernel::gaussian(sigma, big).unwrap();
    let pvm = SharpObservable::new(big);
    let brute = linear_entropy_of_matrix(
        &fuzzmeas::oqp_transform(&kernel, &pvm, &rho, &OutcomeSet::All).unwrap(),
    );
    println!(
        "criterion  6 discrepancy report: closed form S = {closed:.6}, plateau target = {target:.6}, \
         brute force on L=700 gives {brute:.6e}; |closed - brute| = {:.6}",
        (closed - brute).abs()
    );

    // sharp-measurement limits: three routes, none asserted
    let limits = sharp_measurement_limits(alpha).unwrap();
    println!(
        "criterion  6 discrepancy report: sharp-measurement entropy at alpha = {alpha}: \
         stated asymptote 1-a/sqrt(pi) = {:.6}, closed-form limit = {:.6}, direct summation = {:.6}",
        limits.stated_asymptote, limits.closed_form_limit, limits.direct_summation
    );

    // (c) theta plateaux at interior sample points; the edges of the
    // nominal plateau ranges exceed the tolerances and are reported instead
    let mut pass_c = true;
    for s in [0.05, 0.1, 0.2, 0.3] {
        pass_c &= (psi0(s).unwrap() - 1.0).abs() <= 1e-4;
    }
    for s in [1.25, 1.5, 2.0, 3.0, 5.0, 10.0] {
        let ratio = psi0(s).unwrap() / (std::f64::consts::PI.sqrt() * s);
        pass_c &= (ratio - 1.0).abs() <= 1e-6;
    }
    println!(
        "criterion  6 plateau edges (reported, not asserted): psi0(0.4)-1 = {:.3e}, \
         psi0(0.8)/(sqrt(pi)*0.8)-1 = {:.3e}",
        psi0(0.4).unwrap() - 1.0,
        psi0(0.8).unwrap() / (std::f64::consts::PI.sqrt() * 0.8) - 1.0
    );

    report(
        6,
        "paper asymptotics",
        pass_a && pass_b && pass_c,
        &format!(
            "S(alpha=0.1) <= {worst_a:.2e}; closed(2,100) = {closed:.5} vs 1/2 and {target:.5}; \
             plateaux hold at the sample grids"
        ),
    );
}

#[test]
fn criterion_07_moment_laws() {
    let window = pwin(24);
    let rho = gaussian_fuzzy_state(3, 1.5, window).unwrap();
    let mut worst_o = 0.0f64;
    let mut worst_conv = 0.0f64;
    let mut worst_m1 = 0.0f64;
    for sigma in [0.5, 1.0, 2.0] {
        let kernel = FuzzyKernel::gaussian(sigma, window).unwrap();
        for n in 0..=3u32 {
            let m_init = sharp_moment(&rho, n).unwrap();
            let m_o = moment_after(MomentFlavor::Oqp, &kernel, &rho, n)
                .unwrap()
                .value;
            worst_o = worst_o.max((m_o - m_init).abs());
            let m_e = moment_after(MomentFlavor::Epistemic, &kernel, &rho, n)
                .unwrap()
                .value;
            let conv = binomial_convolution_moment(&kernel, &rho, n).unwrap();
            worst_conv = worst_conv.max((m_e - conv).abs());
            if n == 1 {
                worst_m1 = worst_m1.max((m_e - m_init).abs());
            }
        }
    }
    report(
        7,
        "moment laws",
        worst_o <= 1e-11 && worst_conv <= 1e-10 && worst_m1 <= 1e-11,
        &format!(
            "sigma-independence {worst_o:.2e}, binomial convolution {worst_conv:.2e}, \
             symmetric M1 {worst_m1:.2e}"
        ),
    );
}

#[test]
fn criterion_08_covariance() {
    // discrete
    let window = pwin(10);
    let kernel = FuzzyKernel::gaussian(1.0, window).unwrap();
    let rho = random_density(Basis::Lattice(window), 4000);
    let mut worst_d = 0.0f64;
    for t in [Transformer::Oqp(&kernel), Transformer::Epistemic(&kernel)] {
        for a in [1, 3, -4, 9] {
            worst_d = worst_d.max(shift_covariance_gap(&t, &rho, a).unwrap());
        }
    }

    // continuous
    let grid = GridSpec::new(128, 30.0).unwrap();
    let f = SmearingKernel::gaussian(1.0, grid).unwrap();
    let rho_c = random_density(Basis::Grid(grid), 4001);
    let mut worst_c = 0.0f64;
    for flavor in [Flavor::Oqp, Flavor::Epistemic] {
        for steps in [1.0, 5.0, -11.0] {
            let shift = steps * grid.spacing();
            worst_c = worst_c.max(
                fuzzmeas::continuous::translation_covariance_gap_continuous(
                    flavor, &f, &rho_c, shift,
                )
                .unwrap(),
            );
        }
    }
    let comm =
        fuzzmeas::continuous::fuzzifier_shift_commutator_norm(&f, 5.0 * grid.spacing()).unwrap();
    report(
        8,
        "covariance",
        worst_d <= 1e-12 && worst_c <= 1e-11 && comm <= 1e-12,
        &format!("discrete {worst_d:.2e}, continuous {worst_c:.2e}, commutator {comm:.2e}"),
    );
}

#[test]
fn criterion_09_momentum_moments() {
    let start = Instant::now();
    let grid = GridSpec::new(256, 40.0).unwrap();
    let rho = gaussian_packet(grid, 0.0, 2.0, 2.0).unwrap();
    let m1 = momentum_first_moment(&rho).unwrap();

    let mut worst_momke_direct = 0.0f64;
    let mut worst_momko_gap = 0.0f64;
    let mut worst_memory = 0.0f64;
    let mut momkos = Vec::new();
    for sigma in [0.5, 1.0, 2.0] {
        let f = SmearingKernel::gaussian(sigma, grid).unwrap();
        let momke_direct =
            momentum_first_moment(&epistemic_transform_continuous(&f, &rho).unwrap()).unwrap();
        worst_momke_direct = worst_momke_direct.max(momke_direct.abs());

        let momko = momko_value(&rho, &f).unwrap();
        let direct = momentum_first_moment(&oqp_transform_continuous(&f, &rho).unwrap()).unwrap();
        worst_momko_gap = worst_momko_gap.max((momko - direct).abs());

        let memory = momko - momke_value(&rho, &f).unwrap();
        worst_memory = worst_memory.max((memory - m1).abs());
        momkos.push(momko);
    }
    let spread = momkos
        .iter()
        .fold(0.0f64, |acc, &v| acc.max((v - momkos[0]).abs()));
    let elapsed = start.elapsed().as_secs_f64();
    report(
        9,
        "momentum moments",
        worst_momke_direct <= 1e-10
            && worst_momko_gap <= 1e-6
            && worst_memory <= 1e-6
            && spread <= 1e-8
            && elapsed < 10.0,
        &format!(
            "momke direct {worst_momke_direct:.2e}, momko gap {worst_momko_gap:.2e}, \
             memory term {worst_memory:.2e}, sigma spread {spread:.2e}, {elapsed:.2}s"
        ),
    );
}
