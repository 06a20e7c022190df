//! One function per subcommand; each resolves its flags against the config
//! file, runs the computation, and renders a table.

use std::path::PathBuf;

use clap::Args;

use fuzzmeas::continuous::{
    epistemic_transform_continuous, fuzzifier_shift_commutator_norm, momentum_first_moment,
    momke_value, momko_value, oqp_transform_continuous, translation_covariance_gap_continuous,
    SmearingKernel,
};
use fuzzmeas::io::format_matrix;
use fuzzmeas::operator::{matrix_purity, min_eigenvalue, real_to_complex, trace};
use fuzzmeas::stats::EntropyReport;
use fuzzmeas::{
    binomial_convolution_moment, build_effects, gaussian_entropy_closed_form, gaussian_fuzzy_state,
    moment_after, probability, sharp_moment, shift_covariance_gap, suggested_half_width, Basis,
    Boundary, Flavor, FuzzyKernel, GridSpec, LatticeWindow, MomentFlavor, SharpObservable,
    Transformer,
};

use crate::config::{resolve, Config};
use crate::emit::{write_plot_data, Table, Value};
use crate::parse;
use crate::{CliError, Format};

#[derive(Args, Debug)]
pub struct KernelArgs {
    /// Kernel spec: gaussian:sigma=<v>, delta, or file:<path>
    #[arg(long)]
    kernel: Option<String>,
    /// Window half-width L (sites -L..L)
    #[arg(long)]
    half_width: Option<i64>,
    /// Window boundary: open|periodic
    #[arg(long)]
    boundary: Option<String>,
}

pub fn kernel(args: KernelArgs, config: &Config) -> Result<String, CliError> {
    let spec = args
        .kernel
        .or_else(|| config.get_str("kernel").map(String::from))
        .unwrap_or_else(|| "gaussian:sigma=1".to_string());
    let boundary = parse::parse_boundary(&resolve(
        args.boundary,
        config,
        "boundary",
        "periodic".to_string(),
    )?)?;
    let half_width = resolve(args.half_width, config, "half-width", 10)?;
    let window = LatticeWindow::new(half_width, boundary)?;
    let kernel = parse::parse_kernel(&spec, window)?;
    Ok(format_matrix(
        &real_to_complex(kernel.weights()),
        &Basis::Lattice(window),
    ))
}

#[derive(Args, Debug)]
pub struct CompareArgs {
    /// Gaussian kernel width (0 = sharp delta kernel)
    #[arg(long)]
    sigma: Option<f64>,
    /// Full kernel spec (gaussian:sigma=<v>, delta, file:<path>);
    /// overrides --sigma
    #[arg(long)]
    kernel: Option<String>,
    #[arg(long)]
    half_width: Option<i64>,
    /// Window boundary: open|periodic
    #[arg(long)]
    boundary: Option<String>,
    /// State spec (basis:<m>, uniform-superposition:..., fuzzy-gaussian:...,
    /// random[:<seed>], file:<path>)
    #[arg(long)]
    state: Option<String>,
    /// Outcome set: `all` or a comma list of sites
    #[arg(long)]
    set: Option<String>,
    /// Seed for the `random` builtin state
    #[arg(long)]
    seed: Option<u64>,
}

pub fn compare(args: CompareArgs, config: &Config, format: Format) -> Result<String, CliError> {
    let sigma = resolve(args.sigma, config, "sigma", 1.0)?;
    let boundary = parse::parse_boundary(&resolve(
        args.boundary,
        config,
        "boundary",
        "periodic".to_string(),
    )?)?;
    let half_width = resolve(
        args.half_width,
        config,
        "half-width",
        suggested_half_width(sigma, 0),
    )?;
    let seed = resolve(args.seed, config, "seed", 1)?;
    let window = LatticeWindow::new(half_width, boundary)?;
    let state_spec = args
        .state
        .or_else(|| config.get_str("state").map(String::from))
        .unwrap_or_else(|| "basis:0".to_string());
    let rho = parse::parse_lattice_state(&state_spec, window, seed)?;
    let set_spec = args
        .set
        .or_else(|| config.get_str("set").map(String::from))
        .unwrap_or_else(|| "all".to_string());
    let outcomes = parse::parse_outcome_set(&set_spec)?;

    let kernel_spec = args
        .kernel
        .or_else(|| config.get_str("kernel").map(String::from));
    let kernel = match kernel_spec {
        Some(spec) => parse::parse_kernel(&spec, window)?,
        None => FuzzyKernel::gaussian(sigma, window)?,
    };
    let pvm = SharpObservable::new(window);
    let sharp_effects = build_effects(&FuzzyKernel::delta(window), &pvm)?;
    let fuzzy_effects = build_effects(&kernel, &pvm)?;

    let mut table = Table::new(vec!["flavor", "trace", "purity", "p_B", "min_eigenvalue"]);
    for t in [
        Transformer::VonNeumann,
        Transformer::Oqp(&kernel),
        Transformer::Epistemic(&kernel),
    ] {
        let out = t.apply(&rho, &outcomes)?;
        let tr = trace(&out).re;
        // conditional post-measurement purity Tr(M^2)/Tr(M)^2
        let purity = if tr > 0.0 {
            matrix_purity(&out) / (tr * tr)
        } else {
            0.0
        };
        let effects = match t.flavor() {
            Flavor::VonNeumann => &sharp_effects,
            _ => &fuzzy_effects,
        };
        let p = probability(effects, &rho, &outcomes)?;
        table.push(vec![
            t.flavor().label().into(),
            tr.into(),
            purity.into(),
            p.into(),
            min_eigenvalue(&out).into(),
        ]);
    }
    Ok(table.render(format))
}

#[derive(Args, Debug)]
pub struct EntropyScanArgs {
    /// Initial-state widths: comma list or start:stop:step
    #[arg(long)]
    alpha: Option<String>,
    /// Measurement widths: comma list or start:stop:step
    #[arg(long)]
    sigma: Option<String>,
    /// Center site of the fuzzy initial state
    #[arg(long)]
    a: Option<i64>,
    #[arg(long)]
    half_width: Option<i64>,
    /// Also write gnuplot-style data plus a .meta.json sidecar here
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

pub fn entropy_scan(
    args: EntropyScanArgs,
    config: &Config,
    format: Format,
) -> Result<String, CliError> {
    let alphas = parse::parse_value_list(
        &resolve(args.alpha, config, "alpha", "0.1,0.5,1,2".to_string())?,
        "alpha",
    )?;
    let sigmas = parse::parse_value_list(
        &resolve(args.sigma, config, "sigma", "0.1,0.5,1,2".to_string())?,
        "sigma",
    )?;
    let a = resolve(args.a, config, "a", 0)?;
    if alphas.iter().chain(sigmas.iter()).any(|&v| v < 0.0) {
        return Err(CliError::Usage(
            "alpha and sigma must be nonnegative".into(),
        ));
    }
    let widest = alphas
        .iter()
        .chain(sigmas.iter())
        .fold(0.0f64, |acc, &v| acc.max(v));
    let half_width = resolve(
        args.half_width,
        config,
        "half-width",
        suggested_half_width(widest, a),
    )?;
    let window = LatticeWindow::new(half_width, Boundary::Periodic)?;

    let mut table = Table::new(vec![
        "alpha",
        "sigma",
        "S_formula_O",
        "S_formula_E",
        "S_brute_O",
        "S_brute_E",
        "S_closed_psi",
        "closed_form_gap",
    ]);
    for &alpha in &alphas {
        let rho = gaussian_fuzzy_state(a, alpha, window)?;
        for &sigma in &sigmas {
            let kernel = FuzzyKernel::gaussian(sigma, window)?;
            let mut report = EntropyReport::compute(&kernel, &rho)?;
            if alpha > 0.0 && sigma > 0.0 {
                report.closed_psi = Some(gaussian_entropy_closed_form(alpha, sigma)?);
            }
            table.push(vec![
                alpha.into(),
                sigma.into(),
                report.formula_oqp.into(),
                report.formula_epistemic.into(),
                report.brute_oqp.into(),
                report.brute_epistemic.into(),
                report.closed_psi.map_or(Value::Missing, Value::from),
                report.closed_form_gap().map_or(Value::Missing, Value::from),
            ]);
        }
    }
    if let Some(path) = args.plot_data.as_deref() {
        let pairs = plot_config(
            config,
            &[
                ("subcommand", "entropy-scan".to_string()),
                ("a", a.to_string()),
                ("half_width", half_width.to_string()),
                ("alpha", format!("{alphas:?}")),
                ("sigma", format!("{sigmas:?}")),
            ],
        );
        write_plot_data(path, &table, &pairs)?;
    }
    Ok(table.render(format))
}

#[derive(Args, Debug)]
pub struct MomentsArgs {
    /// Highest moment order to tabulate
    #[arg(long)]
    n_max: Option<u32>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    half_width: Option<i64>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    plot_data: Option<PathBuf>,
}

pub fn moments(args: MomentsArgs, config: &Config, format: Format) -> Result<String, CliError> {
    let n_max = resolve(args.n_max, config, "n-max", 3)?;
    let sigma = resolve(args.sigma, config, "sigma", 1.0)?;
    let seed = resolve(args.seed, config, "seed", 1)?;
    let state_spec = args
        .state
        .or_else(|| config.get_str("state").map(String::from))
        .unwrap_or_else(|| "fuzzy-gaussian:a=0,alpha=1".to_string());
    let half_width = resolve(
        args.half_width,
        config,
        "half-width",
        suggested_half_width(sigma.max(2.0), 0) + 6,
    )?;
    // homogeneous kernels (and so the convolution law) need the cyclic window
    let window = LatticeWindow::new(half_width, Boundary::Periodic)?;
    let rho = parse::parse_lattice_state(&state_spec, window, seed)?;
    let kernel = FuzzyKernel::gaussian(sigma, window)?;

    let mut table = Table::new(vec!["n", "M_initial", "M_O", "M_E", "M_E_convolution"]);
    for n in 0..=n_max {
        table.push(vec![
            (n as f64).into(),
            sharp_moment(&rho, n)?.into(),
            moment_after(MomentFlavor::Oqp, &kernel, &rho, n)?
                .value
                .into(),
            moment_after(MomentFlavor::Epistemic, &kernel, &rho, n)?
                .value
                .into(),
            binomial_convolution_moment(&kernel, &rho, n)?.into(),
        ]);
    }
    if let Some(path) = args.plot_data.as_deref() {
        let pairs = plot_config(
            config,
            &[
                ("subcommand", "moments".to_string()),
                ("n_max", n_max.to_string()),
                ("sigma", sigma.to_string()),
                ("state", state_spec.clone()),
                ("half_width", half_width.to_string()),
            ],
        );
        write_plot_data(path, &table, &pairs)?;
    }
    Ok(table.render(format))
}

#[derive(Args, Debug)]
pub struct CovarianceArgs {
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    half_width: Option<i64>,
    /// Shift a (sites); the checks run over a fixed family of outcome sets
    #[arg(long)]
    shift: Option<i64>,
    #[arg(long)]
    state: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
}

pub fn covariance(
    args: CovarianceArgs,
    config: &Config,
    format: Format,
) -> Result<String, CliError> {
    let sigma = resolve(args.sigma, config, "sigma", 1.0)?;
    let shift = resolve(args.shift, config, "shift", 3)?;
    let seed = resolve(args.seed, config, "seed", 1)?;
    let half_width = resolve(
        args.half_width,
        config,
        "half-width",
        suggested_half_width(sigma, 0),
    )?;
    let window = LatticeWindow::new(half_width, Boundary::Periodic)?;
    let state_spec = args
        .state
        .or_else(|| config.get_str("state").map(String::from))
        .unwrap_or_else(|| "random".to_string());
    let rho = parse::parse_lattice_state(&state_spec, window, seed)?;
    let kernel = FuzzyKernel::gaussian(sigma, window)?;

    let mut table = Table::new(vec!["flavor", "shift", "gap"]);
    for t in [
        Transformer::VonNeumann,
        Transformer::Oqp(&kernel),
        Transformer::Epistemic(&kernel),
    ] {
        let gap = shift_covariance_gap(&t, &rho, shift)?;
        table.push(vec![
            t.flavor().label().into(),
            (shift as f64).into(),
            gap.into(),
        ]);
    }
    Ok(table.render(format))
}

#[derive(Args, Debug)]
pub struct ContinuousArgs {
    /// Grid points (power of two)
    #[arg(long)]
    grid_n: Option<usize>,
    /// Total grid length
    #[arg(long)]
    length: Option<f64>,
    /// Smearing width
    #[arg(long)]
    sigma: Option<f64>,
    /// State spec: gaussian:x0=<v>,k0=<v>,w=<v> or file:<path>
    #[arg(long)]
    state: Option<String>,
    /// Which checks to run: covariance|momentum|all
    #[arg(long)]
    check: Option<String>,
    /// Translation for the covariance checks, in grid steps
    #[arg(long)]
    shift_steps: Option<i64>,
}

pub fn continuous(
    args: ContinuousArgs,
    config: &Config,
    format: Format,
) -> Result<String, CliError> {
    let grid_n = resolve(args.grid_n, config, "grid-n", 256)?;
    let length = resolve(args.length, config, "length", 40.0)?;
    let sigma = resolve(args.sigma, config, "sigma", 1.0)?;
    let shift_steps = resolve(args.shift_steps, config, "shift-steps", 5)?;
    let check = resolve(args.check, config, "check", "all".to_string())?;
    let grid = GridSpec::new(grid_n, length)?;
    let f = SmearingKernel::gaussian(sigma, grid)?;
    let state_spec = args
        .state
        .or_else(|| config.get_str("state").map(String::from))
        .unwrap_or_else(|| "gaussian:x0=0,k0=2,w=2".to_string());
    let rho = parse::parse_grid_state(&state_spec, grid)?;

    let do_momentum = matches!(check.as_str(), "momentum" | "all");
    let do_covariance = matches!(check.as_str(), "covariance" | "all");
    if !do_momentum && !do_covariance {
        return Err(CliError::Usage(format!(
            "--check must be covariance|momentum|all, got {check}"
        )));
    }

    let mut table = Table::new(vec!["quantity", "direct_value", "formula_value", "gap"]);
    if do_momentum {
        let m1 = momentum_first_moment(&rho)?;
        let oqp_direct = momentum_first_moment(&oqp_transform_continuous(&f, &rho)?)?;
        let momko = momko_value(&rho, &f)?;
        table.push(vec![
            "oqp_mean_momentum".into(),
            oqp_direct.into(),
            momko.into(),
            (momko - oqp_direct).abs().into(),
        ]);
        let epi_direct = momentum_first_moment(&epistemic_transform_continuous(&f, &rho)?)?;
        let momke = momke_value(&rho, &f)?;
        table.push(vec![
            "epistemic_mean_momentum".into(),
            epi_direct.into(),
            momke.into(),
            (momke - epi_direct).abs().into(),
        ]);
        let memory = momko - momke;
        table.push(vec![
            "memory_term".into(),
            m1.into(),
            memory.into(),
            (memory - m1).abs().into(),
        ]);
    }
    if do_covariance {
        let shift = shift_steps as f64 * grid.spacing();
        for flavor in [Flavor::Oqp, Flavor::Epistemic] {
            let gap = translation_covariance_gap_continuous(flavor, &f, &rho, shift)?;
            table.push(vec![
                format!("{}_translation_covariance", flavor.label()).into(),
                gap.into(),
                0.0.into(),
                gap.into(),
            ]);
        }
        let comm = fuzzifier_shift_commutator_norm(&f, shift)?;
        table.push(vec![
            "fuzzifier_shift_commutator".into(),
            comm.into(),
            0.0.into(),
            comm.into(),
        ]);
    }
    Ok(table.render(format))
}

#[derive(Args, Debug)]
pub struct SelfcheckArgs {
    /// Base seed of the random fixtures
    #[arg(long)]
    pub seed: Option<u64>,
}

fn plot_config(config: &Config, extra: &[(&str, String)]) -> Vec<(String, String)> {
    let mut pairs: Vec<(String, String)> = extra
        .iter()
        .map(|(k, v)| (k.to_string(), v.clone()))
        .collect();
    for (k, v) in config.entries() {
        pairs.push((format!("config.{k}"), v.to_string()));
    }
    pairs
}
