//! The `selfcheck` subcommand: a deterministic battery over every invariant
//! the library promises, printed as a fixed-format pass/fail table.
//!
//! Identical seeds and configuration produce byte-identical output.

use fuzzmeas::continuous::{
    epistemic_transform_continuous, epistemic_transform_continuous_direct,
    fuzzifier_shift_commutator_norm, momentum_first_moment, momke_value, momko_value,
    oqp_transform_continuous, oqp_transform_continuous_direct,
    translation_covariance_gap_continuous, SmearingKernel,
};
use fuzzmeas::operator::{max_abs_diff, min_eigenvalue, trace};
use fuzzmeas::stats::EntropyReport;
use fuzzmeas::transform::KrausSet;
use fuzzmeas::{
    binomial_convolution_moment, build_effects, entropy_equality_gap, gaussian_entropy_closed_form,
    gaussian_fuzzy_state, gaussian_packet, kraus_apply, moment_after,
    nonselective_decomposition_gap, probability, probability_consistency_gap, psi0, psi0_poisson,
    psi_half, psi_half_poisson, random_density, sharp_measurement_limits, sharp_moment,
    shift_covariance_gap, tol, Basis, Boundary, Flavor, FuzzyKernel, GridSpec, LatticeWindow,
    MomentFlavor, OutcomeSet, SharpObservable, Transformer,
};

use crate::commands::SelfcheckArgs;
use crate::config::{resolve, Config};
use crate::CliError;

struct Battery {
    out: String,
    passed: usize,
    total: usize,
}

impl Battery {
    fn new() -> Self {
        Self {
            out: String::new(),
            passed: 0,
            total: 0,
        }
    }

    fn check(&mut self, name: &str, pass: bool, value: f64, bound: &str) {
        self.total += 1;
        if pass {
            self.passed += 1;
        }
        self.out.push_str(&format!(
            "[{}] {name:<42} {value:>10.3e}  (require {bound})\n",
            if pass { " ok " } else { "FAIL" }
        ));
    }

    fn info(&mut self, line: &str) {
        self.out.push_str(&format!("info   {line}\n"));
    }
}

pub fn run(args: SelfcheckArgs, config: &Config) -> Result<(String, bool), CliError> {
    let seed = resolve(args.seed, config, "seed", 1u64)?;
    let mut b = Battery::new();
    b.out
        .push_str(&format!("fuzzmeas selfcheck (seed {seed})\n"));

    let window = LatticeWindow::new(12, Boundary::Periodic)?;
    let pvm = SharpObservable::new(window);
    let rho = random_density(Basis::Lattice(window), seed);
    let kernel = FuzzyKernel::gaussian(1.0, window)?;

    // kernels and effects
    let mut gap = 0.0f64;
    for sigma in [0.0, 0.3, 1.0, 3.0] {
        gap = gap.max(FuzzyKernel::gaussian(sigma, window)?.column_sum_gap());
    }
    b.check(
        "kernel_column_stochasticity",
        gap <= tol::KERNEL_COLUMN_SUM,
        gap,
        "<= 1e-14",
    );

    let effects = build_effects(&kernel, &pvm)?;
    let gap = effects.completeness_gap();
    b.check(
        "effect_completeness",
        gap <= tol::EFFECT_COMPLETENESS,
        gap,
        "<= 1e-12",
    );

    let gap = fuzzmeas::fuzzifier(&kernel).column_norm_gap();
    b.check(
        "fuzzifier_column_norms",
        gap <= tol::FUZZIFIER_COLUMN_NORM,
        gap,
        "<= 1e-13",
    );

    // theta sums
    let mut gap = 0.0f64;
    for s in [0.1, 0.5, 1.0, 2.0, 5.0] {
        gap = gap.max((psi0(s)? - psi0_poisson(s)?).abs() / psi0(s)?);
        gap = gap.max((psi_half(s)? - psi_half_poisson(s)?).abs() / psi0(s)?);
    }
    b.check("theta_poisson_identity", gap <= 1e-12, gap, "<= 1e-12");

    // sharp limit
    let delta = FuzzyKernel::delta(window);
    let vn = Transformer::VonNeumann.apply(&rho, &OutcomeSet::All)?;
    let gap = max_abs_diff(
        &Transformer::Oqp(&delta).apply(&rho, &OutcomeSet::All)?,
        &vn,
    )
    .max(max_abs_diff(
        &Transformer::Epistemic(&delta).apply(&rho, &OutcomeSet::All)?,
        &vn,
    ));
    b.check("sharp_limit_collapse", gap <= 1e-14, gap, "<= 1e-14");

    // trace, positivity, hermiticity for all flavors
    let mut trace_gap = 0.0f64;
    let mut min_eig = f64::INFINITY;
    for t in [
        Transformer::VonNeumann,
        Transformer::Oqp(&kernel),
        Transformer::Epistemic(&kernel),
    ] {
        let out = t.apply(&rho, &OutcomeSet::All)?;
        trace_gap = trace_gap.max((trace(&out).re - 1.0).abs());
        min_eig = min_eig.min(min_eigenvalue(&out));
    }
    b.check(
        "nonselective_trace_preservation",
        trace_gap <= tol::TRACE_PRESERVATION,
        trace_gap,
        "<= 1e-12",
    );
    b.check(
        "output_positivity",
        min_eig >= tol::EIGENVALUE_FLOOR,
        min_eig,
        ">= -1e-10",
    );

    // probabilities
    let total = probability(&effects, &rho, &OutcomeSet::All)?;
    b.check(
        "probability_normalization",
        (total - 1.0).abs() <= 1e-12,
        (total - 1.0).abs(),
        "<= 1e-12",
    );
    let mut gap = 0.0f64;
    for outcomes in [
        OutcomeSet::sites([0]),
        OutcomeSet::sites([0, 1, 2]),
        OutcomeSet::All,
    ] {
        gap = gap.max(probability_consistency_gap(&kernel, &pvm, &rho, &outcomes)?);
    }
    b.check(
        "probability_consistency",
        gap <= tol::PROBABILITY_CONSISTENCY,
        gap,
        "<= 1e-12",
    );

    // decomposition and covariance
    let mut gap = 0.0f64;
    for t in [
        Transformer::VonNeumann,
        Transformer::Oqp(&kernel),
        Transformer::Epistemic(&kernel),
    ] {
        gap = gap.max(nonselective_decomposition_gap(&t, &rho)?);
    }
    b.check(
        "nonselective_decomposition",
        gap <= tol::DECOMPOSITION_GAP,
        gap,
        "<= 1e-13",
    );

    let mut gap = 0.0f64;
    for t in [Transformer::Oqp(&kernel), Transformer::Epistemic(&kernel)] {
        for a in [1, 3, -5] {
            gap = gap.max(shift_covariance_gap(&t, &rho, a)?);
        }
    }
    b.check(
        "discrete_shift_covariance",
        gap <= tol::SHIFT_COVARIANCE,
        gap,
        "<= 1e-12",
    );

    // kraus routes
    let mut gap = 0.0f64;
    for (t, set) in [
        (Transformer::VonNeumann, KrausSet::von_neumann(window)),
        (Transformer::Oqp(&kernel), KrausSet::oqp(&kernel)),
        (
            Transformer::Epistemic(&kernel),
            KrausSet::epistemic(&kernel),
        ),
    ] {
        gap = gap.max(set.completeness_gap());
        for outcomes in [OutcomeSet::All, OutcomeSet::sites([0, 2, -1])] {
            gap = gap.max(max_abs_diff(
                &kraus_apply(&set, &rho, &outcomes)?,
                &t.apply(&rho, &outcomes)?,
            ));
        }
    }
    b.check(
        "kraus_route_agreement",
        gap <= tol::TRANSFORMER_KRAUS_MATCH,
        gap,
        "<= 1e-13",
    );

    // flavor distinctness on a coherent state
    let plus = fuzzmeas::DensityOperator::uniform_superposition(window, &[0, 1])
        .map_err(CliError::from)?;
    let dist = max_abs_diff(
        &Transformer::Oqp(&kernel).apply(&plus, &OutcomeSet::All)?,
        &Transformer::Epistemic(&kernel).apply(&plus, &OutcomeSet::All)?,
    );
    b.check("fuzzy_flavor_distinctness", dist > 1e-3, dist, "> 1e-3");

    // entropies
    let report = EntropyReport::compute(&kernel, &rho)?;
    let gap = (report.formula_oqp - report.brute_oqp)
        .abs()
        .max((report.formula_epistemic - report.brute_epistemic).abs());
    b.check(
        "entropy_formula_vs_brute",
        gap <= tol::ENTROPY_FORMULA_MATCH,
        gap,
        "<= 1e-10",
    );

    let big = LatticeWindow::new(32, Boundary::Periodic)?;
    let mut gap = 0.0f64;
    for alpha in [0.1, 1.0, 2.0, 5.0] {
        for sigma in [0.1, 1.0, 5.0] {
            gap = gap.max(entropy_equality_gap(alpha, sigma, 0, big)?);
        }
    }
    b.check(
        "fuzzy_state_entropy_equality",
        gap <= tol::ENTROPY_FORMULA_MATCH,
        gap,
        "<= 1e-10",
    );

    let s_sharp = gaussian_entropy_closed_form(0.1, 1.0)?;
    b.check(
        "closed_form_sharp_initial",
        s_sharp.abs() <= 1e-6,
        s_sharp.abs(),
        "<= 1e-6",
    );
    let s_fuzzy = gaussian_entropy_closed_form(2.0, 100.0)?;
    b.check(
        "closed_form_unsharp_plateau",
        (s_fuzzy - 0.5).abs() <= 0.005,
        (s_fuzzy - 0.5).abs(),
        "<= 5e-3",
    );

    // moments
    let mwin = LatticeWindow::new(24, Boundary::Periodic)?;
    let mstate = gaussian_fuzzy_state(3, 1.5, mwin)?;
    let mut gap_o = 0.0f64;
    let mut gap_e = 0.0f64;
    for sigma in [0.5, 1.0, 2.0] {
        let k = FuzzyKernel::gaussian(sigma, mwin)?;
        for n in 0..=3u32 {
            let init = sharp_moment(&mstate, n)?;
            gap_o =
                gap_o.max((moment_after(MomentFlavor::Oqp, &k, &mstate, n)?.value - init).abs());
            gap_e = gap_e.max(
                (moment_after(MomentFlavor::Epistemic, &k, &mstate, n)?.value
                    - binomial_convolution_moment(&k, &mstate, n)?)
                .abs(),
            );
        }
    }
    b.check(
        "oqp_moment_sigma_independence",
        gap_o <= 1e-11,
        gap_o,
        "<= 1e-11",
    );
    b.check(
        "epistemic_moment_convolution",
        gap_e <= 1e-10,
        gap_e,
        "<= 1e-10",
    );

    // continuous sector
    let grid = GridSpec::new(256, 40.0)?;
    let f = SmearingKernel::gaussian(1.0, grid)?;
    let packet = gaussian_packet(grid, 0.0, 2.0, 2.0)?;

    let fast = oqp_transform_continuous(&f, &packet)?;
    let gap = max_abs_diff(
        fast.matrix(),
        &oqp_transform_continuous_direct(&f, &packet)?,
    );
    b.check("continuous_oqp_two_paths", gap <= 1e-12, gap, "<= 1e-12");
    let fast_e = epistemic_transform_continuous(&f, &packet)?;
    let gap = max_abs_diff(
        fast_e.matrix(),
        &epistemic_transform_continuous_direct(&f, &packet)?,
    );
    b.check(
        "continuous_epistemic_two_paths",
        gap <= 1e-12,
        gap,
        "<= 1e-12",
    );

    let tr_gap = (trace(fast.matrix()).re - 1.0)
        .abs()
        .max((trace(fast_e.matrix()).re - 1.0).abs());
    b.check(
        "continuous_trace_preservation",
        tr_gap <= tol::CONTINUOUS_TRACE,
        tr_gap,
        "<= 1e-11",
    );

    let grho = random_density(Basis::Grid(GridSpec::new(64, 16.0)?), seed);
    let gf = SmearingKernel::gaussian(1.0, GridSpec::new(64, 16.0)?)?;
    let mut gap = 0.0f64;
    for flavor in [Flavor::Oqp, Flavor::Epistemic] {
        gap = gap.max(translation_covariance_gap_continuous(
            flavor,
            &gf,
            &grho,
            5.0 * 0.25,
        )?);
    }
    b.check(
        "continuous_translation_covariance",
        gap <= tol::CONTINUOUS_COVARIANCE,
        gap,
        "<= 1e-11",
    );
    let comm = fuzzifier_shift_commutator_norm(&gf, 3.0 * 0.25)?;
    b.check(
        "fuzzifier_commutes_with_shifts",
        comm <= tol::COMMUTATOR_NORM,
        comm,
        "<= 1e-12",
    );

    let m1 = momentum_first_moment(&packet)?;
    let momko = momko_value(&packet, &f)?;
    let direct = momentum_first_moment(&oqp_transform_continuous(&f, &packet)?)?;
    b.check(
        "momko_matches_direct",
        (momko - direct).abs() <= tol::MOMENTUM_FORMULA,
        (momko - direct).abs(),
        "<= 1e-6",
    );
    let momke = momke_value(&packet, &f)?;
    let epi_k = momentum_first_moment(&epistemic_transform_continuous(&f, &packet)?)?;
    b.check(
        "momke_vanishes",
        momke.abs().max(epi_k.abs()) <= 1e-10,
        momke.abs().max(epi_k.abs()),
        "<= 1e-10",
    );
    let memory = momko - momke;
    b.check(
        "memory_term_is_initial_momentum",
        (memory - m1).abs() <= tol::MOMENTUM_FORMULA,
        (memory - m1).abs(),
        "<= 1e-6",
    );

    // informational: S^(E) versus sigma for a fixed diagonal state
    // (reported, not asserted; monotonicity is not claimed anywhere)
    let diag_state = fuzzmeas::DensityOperator::maximally_mixed(Basis::Lattice(window));
    let scan: Vec<String> = [0.3, 0.6, 1.0, 1.5, 2.0, 3.0]
        .iter()
        .map(|&s| -> Result<String, CliError> {
            let k = FuzzyKernel::gaussian(s, window)?;
            Ok(format!(
                "S_E({s})={:.6}",
                fuzzmeas::entropy_formula_epistemic(&k, &diag_state)?
            ))
        })
        .collect::<Result<_, _>>()?;
    b.info(&format!(
        "epistemic_entropy_vs_sigma maximally_mixed d={}: {}",
        window.dim(),
        scan.join(" ")
    ));

    // informational: the three sharp-measurement entropy routes disagree
    let limits = sharp_measurement_limits(2.0)?;
    b.info(&format!(
        "sharp_measurement_limits alpha=2: stated_asymptote={:.6} closed_form_limit={:.6} direct_summation={:.6}",
        limits.stated_asymptote, limits.closed_form_limit, limits.direct_summation
    ));
    let brute = {
        let w = LatticeWindow::new(26, Boundary::Periodic)?;
        let rho = gaussian_fuzzy_state(0, 2.0, w)?;
        let k = FuzzyKernel::gaussian(100.0, w)?;
        // heavily truncated sigma=100 kernel: qualitative report only
        EntropyReport::compute(&k, &rho)?.brute_oqp
    };
    b.info(&format!(
        "closed_form_discrepancy alpha=2 sigma=100: closed={:.6} brute_small_window={:.6}",
        gaussian_entropy_closed_form(2.0, 100.0)?,
        brute
    ));

    b.out
        .push_str(&format!("RESULT: {}/{} checks passed\n", b.passed, b.total));
    let all = b.passed == b.total;
    Ok((b.out, all))
}
