//! Parsers for the little value languages the flags use: state specs,
//! kernel specs, outcome sets, and numeric lists/ranges.

use std::path::Path;

use fuzzmeas::io::read_matrix_file;
use fuzzmeas::{
    gaussian_fuzzy_state, gaussian_packet, random_density, Basis, Boundary, DensityOperator,
    FuzzyKernel, GridSpec, LatticeWindow, OutcomeSet,
};

use crate::CliError;

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

pub fn parse_boundary(s: &str) -> Result<Boundary, CliError> {
    match s {
        "open" => Ok(Boundary::Open),
        "periodic" => Ok(Boundary::Periodic),
        other => Err(usage(format!(
            "boundary must be open|periodic, got {other}"
        ))),
    }
}

/// `key=value` pairs separated by commas, e.g. `a=0,alpha=2`.
fn parse_kv(spec: &str) -> Result<Vec<(&str, &str)>, CliError> {
    spec.split(',')
        .map(|pair| {
            pair.split_once('=')
                .ok_or_else(|| usage(format!("expected key=value, got {pair:?}")))
        })
        .collect()
}

fn kv_lookup<'a>(pairs: &[(&'a str, &'a str)], key: &str) -> Option<&'a str> {
    pairs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v)
}

fn parse_f64(s: &str, what: &str) -> Result<f64, CliError> {
    s.parse()
        .map_err(|_| usage(format!("{what} is not a number: {s:?}")))
}

fn parse_i64(s: &str, what: &str) -> Result<i64, CliError> {
    s.parse()
        .map_err(|_| usage(format!("{what} is not an integer: {s:?}")))
}

/// Builtin lattice states:
/// `basis:<m>`, `uniform-superposition:<m1,m2,...>`,
/// `fuzzy-gaussian:a=<v>,alpha=<v>`, `random[:<seed>]`, `file:<path>`.
pub fn parse_lattice_state(
    spec: &str,
    window: LatticeWindow,
    seed: u64,
) -> Result<DensityOperator, CliError> {
    if let Some(rest) = spec.strip_prefix("basis:") {
        let m = parse_i64(rest, "basis site")?;
        return Ok(DensityOperator::basis_state(window, m)?);
    }
    if let Some(rest) = spec.strip_prefix("uniform-superposition:") {
        let sites: Vec<i64> = rest
            .split(',')
            .map(|s| parse_i64(s, "superposition site"))
            .collect::<Result<_, _>>()?;
        return Ok(DensityOperator::uniform_superposition(window, &sites)?);
    }
    if let Some(rest) = spec.strip_prefix("fuzzy-gaussian:") {
        let pairs = parse_kv(rest)?;
        let a = parse_i64(
            kv_lookup(&pairs, "a").ok_or_else(|| usage("fuzzy-gaussian needs a=<site>"))?,
            "a",
        )?;
        let alpha = parse_f64(
            kv_lookup(&pairs, "alpha")
                .ok_or_else(|| usage("fuzzy-gaussian needs alpha=<width>"))?,
            "alpha",
        )?;
        return Ok(gaussian_fuzzy_state(a, alpha, window)?);
    }
    if spec == "random" {
        return Ok(random_density(Basis::Lattice(window), seed));
    }
    if let Some(rest) = spec.strip_prefix("random:") {
        let s = rest
            .parse::<u64>()
            .map_err(|_| usage(format!("random seed is not an integer: {rest:?}")))?;
        return Ok(random_density(Basis::Lattice(window), s));
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let mf = read_matrix_file(Path::new(path))?;
        let rho = mf.into_density(window.boundary())?;
        if rho.window().ok() != Some(window) {
            return Err(usage(format!(
                "state file window does not match --half-width {}",
                window.half_width()
            )));
        }
        return Ok(rho);
    }
    Err(usage(format!(
        "unknown state spec {spec:?}; expected basis:<m>, uniform-superposition:<list>, \
         fuzzy-gaussian:a=<v>,alpha=<v>, random[:<seed>] or file:<path>"
    )))
}

/// Continuous states: `gaussian:x0=<v>,k0=<v>,w=<v>` or `file:<path>`.
pub fn parse_grid_state(spec: &str, grid: GridSpec) -> Result<DensityOperator, CliError> {
    if let Some(rest) = spec.strip_prefix("gaussian:") {
        let pairs = parse_kv(rest)?;
        let x0 = parse_f64(kv_lookup(&pairs, "x0").unwrap_or("0"), "x0")?;
        let k0 = parse_f64(kv_lookup(&pairs, "k0").unwrap_or("0"), "k0")?;
        let w = parse_f64(
            kv_lookup(&pairs, "w").ok_or_else(|| usage("gaussian packet needs w=<width>"))?,
            "w",
        )?;
        return Ok(gaussian_packet(grid, x0, k0, w)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let mf = read_matrix_file(Path::new(path))?;
        let rho = mf.into_density(Boundary::Periodic)?;
        if rho.grid().ok() != Some(grid) {
            return Err(usage("state file grid does not match --grid-n/--length"));
        }
        return Ok(rho);
    }
    Err(usage(format!(
        "unknown continuous state spec {spec:?}; expected gaussian:x0=,k0=,w= or file:<path>"
    )))
}

/// Kernel specs: `gaussian:sigma=<v>`, `delta`, `file:<path>`.
pub fn parse_kernel(spec: &str, window: LatticeWindow) -> Result<FuzzyKernel, CliError> {
    if spec == "delta" {
        return Ok(FuzzyKernel::delta(window));
    }
    if let Some(rest) = spec.strip_prefix("gaussian:") {
        let pairs = parse_kv(rest)?;
        let sigma = parse_f64(
            kv_lookup(&pairs, "sigma")
                .ok_or_else(|| usage("gaussian kernel needs sigma=<width>"))?,
            "sigma",
        )?;
        return Ok(FuzzyKernel::gaussian(sigma, window)?);
    }
    if let Some(path) = spec.strip_prefix("file:") {
        let mf = read_matrix_file(Path::new(path))?;
        let kernel = mf.into_kernel(window.boundary())?;
        if kernel.window() != window {
            return Err(usage("kernel file window does not match --half-width"));
        }
        return Ok(kernel);
    }
    Err(usage(format!(
        "unknown kernel spec {spec:?}; expected gaussian:sigma=<v>, delta or file:<path>"
    )))
}

/// `all` or a comma-separated site list.
pub fn parse_outcome_set(spec: &str) -> Result<OutcomeSet, CliError> {
    if spec == "all" {
        return Ok(OutcomeSet::All);
    }
    let sites: Vec<i64> = spec
        .split(',')
        .map(|s| parse_i64(s.trim(), "outcome site"))
        .collect::<Result<_, _>>()?;
    Ok(OutcomeSet::Sites(sites))
}

/// `v1,v2,...` or `start:stop:step` (both endpoints included, within a
/// half-step slack). An empty spec is an empty scan.
pub fn parse_value_list(spec: &str, what: &str) -> Result<Vec<f64>, CliError> {
    if spec.trim().is_empty() {
        return Ok(Vec::new());
    }
    if spec.contains(':') {
        let parts: Vec<&str> = spec.split(':').collect();
        if parts.len() != 3 {
            return Err(usage(format!(
                "{what} range must be start:stop:step, got {spec:?}"
            )));
        }
        let start = parse_f64(parts[0], what)?;
        let stop = parse_f64(parts[1], what)?;
        let step = parse_f64(parts[2], what)?;
        if step <= 0.0 || stop < start {
            return Err(usage(format!(
                "{what} range {spec:?} is empty or decreasing"
            )));
        }
        let mut values = Vec::new();
        let mut i = 0u64;
        loop {
            let v = start + i as f64 * step;
            if v > stop + 0.5 * step {
                break;
            }
            values.push(v.min(stop));
            i += 1;
            if i > 1_000_000 {
                return Err(usage(format!("{what} range {spec:?} has too many points")));
            }
        }
        return Ok(values);
    }
    spec.split(',').map(|s| parse_f64(s.trim(), what)).collect()
}
