//! Gaussian theta sums over integer and half-integer lattices.
//!
//! Psi0(s) = sum_{m in Z} exp(-m^2/s^2) and
//! Psi1/2(s) = sum_{m in Z} exp(-(m+1/2)^2/s^2) control the normalization of
//! the discrete Gaussian kernel and the closed-form entropy expressions.
//! Both plateau at 1 (resp. 0) for small s and grow like sqrt(pi)*s beyond
//! s ~ 0.8, a fact made quantitative by Poisson summation.

use std::f64::consts::PI;

use crate::error::{Error, Result};

fn check_sigma(sigma: f64) -> Result<()> {
    if !(sigma > 0.0) || !sigma.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "theta sums require sigma > 0, got {sigma}"
        )));
    }
    Ok(())
}

/// Truncation radius: terms beyond |m| = ceil(10 s) + 2 are below 1e-43
/// relative and cannot move the sum at f64 precision.
fn cutoff(sigma: f64) -> i64 {
    (10.0 * sigma).ceil() as i64 + 2
}

/// Integer theta sum, relative accuracy ~1e-15.
pub fn psi0(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let inv = 1.0 / (sigma * sigma);
    let mut sum = 1.0;
    for m in 1..=cutoff(sigma) {
        sum += 2.0 * (-(m * m) as f64 * inv).exp();
    }
    Ok(sum)
}

/// Half-integer theta sum, relative accuracy ~1e-15.
pub fn psi_half(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let inv = 1.0 / (sigma * sigma);
    let mut sum = 0.0;
    for m in 0..=cutoff(sigma) {
        let x = m as f64 + 0.5;
        sum += 2.0 * (-x * x * inv).exp();
    }
    Ok(sum)
}

/// Psi0 through its Poisson-summation image sqrt(pi) s sum_n exp(-pi^2 s^2 n^2);
/// an independent route used to cross-check the direct sum.
pub fn psi0_poisson(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let a = PI * PI * sigma * sigma;
    let mut sum = 1.0;
    let mut n = 1i64;
    loop {
        let term = 2.0 * (-a * (n * n) as f64).exp();
        if term < 1e-18 * sum || n > 10_000_000 {
            break;
        }
        sum += term;
        n += 1;
    }
    Ok(PI.sqrt() * sigma * sum)
}

/// Poisson image of the half-integer sum: the dual series alternates.
pub fn psi_half_poisson(sigma: f64) -> Result<f64> {
    check_sigma(sigma)?;
    let a = PI * PI * sigma * sigma;
    let mut sum = 1.0f64;
    let mut n = 1i64;
    loop {
        let term = 2.0 * (-a * (n * n) as f64).exp();
        if term < 1e-18 * sum.abs().max(1e-300) || n > 10_000_000 {
            break;
        }
        sum += if n % 2 == 0 { term } else { -term };
        n += 1;
    }
    Ok(PI.sqrt() * sigma * sum)
}
