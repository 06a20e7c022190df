//! Position measurement on a periodic grid: smearing kernels, the
//! Fourier-multiplier fuzzifier F_c, both continuous state transformers,
//! translation covariance, and the momentum first-moment formulas.
//!
//! Continuous integrals become Riemann sums with weight dx; states are
//! stored as discrete density matrices (matrix = rho(x_i, x_j) * dx) so the
//! whole dense toolbox applies unchanged. Conventions, fixed once: the wave
//! number operator is k = -i d/dx and the Fourier transform carries
//! e^(-ikx); with these, the first-moment formulas below agree with the
//! direct spectral evaluation with no sign flip.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::grid::{fft_forward, fft_inverse, GridSpec};
use crate::operator::Basis;
use crate::operator::{hermitize, max_abs_diff, real_to_complex, DensityOperator};
use crate::transform::Flavor;

/// Normalized nonnegative smearing profile f sampled on the grid,
/// with sum f dx = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct SmearingKernel {
    samples: DVector<f64>,
    grid: GridSpec,
    sigma: Option<f64>,
}

impl SmearingKernel {
    /// f(x) ~ exp(-x^2/sigma^2), renormalized on the grid.
    pub fn gaussian(sigma: f64, grid: GridSpec) -> Result<Self> {
        if !(sigma > 0.0) || !sigma.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "smearing width must be positive, got {sigma}"
            )));
        }
        let dx = grid.spacing();
        if sigma < 3.0 * dx {
            return Err(Error::InvalidParameter(format!(
                "sigma = {sigma} is under-resolved: need sigma >= 3 dx = {}",
                3.0 * dx
            )));
        }
        let samples = DVector::from_fn(grid.n_points(), |j, _| {
            let x = grid.position_at(j);
            (-(x * x) / (sigma * sigma)).exp()
        });
        Self::normalized(samples, grid, Some(sigma))
    }

    /// User-supplied samples f(x_j) >= 0; renormalized so sum f dx = 1.
    pub fn from_samples(samples: DVector<f64>, grid: GridSpec) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::DimensionMismatch(format!(
                "{} samples on a {}-point grid",
                samples.len(),
                grid.n_points()
            )));
        }
        if samples.iter().any(|&x| x < 0.0 || !x.is_finite()) {
            return Err(Error::InvalidParameter(
                "smearing samples must be finite and nonnegative".into(),
            ));
        }
        Self::normalized(samples, grid, None)
    }

    fn normalized(mut samples: DVector<f64>, grid: GridSpec, sigma: Option<f64>) -> Result<Self> {
        let total: f64 = samples.iter().sum::<f64>() * grid.spacing();
        if total <= 0.0 {
            return Err(Error::InvalidParameter(
                "smearing kernel has zero mass".into(),
            ));
        }
        samples /= total;
        Ok(Self {
            samples,
            grid,
            sigma,
        })
    }

    pub fn samples(&self) -> &DVector<f64> {
        &self.samples
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    pub fn sigma(&self) -> Option<f64> {
        self.sigma
    }

    /// |sum f dx - 1|.
    pub fn normalization_gap(&self) -> f64 {
        (self.samples.iter().sum::<f64>() * self.grid.spacing() - 1.0).abs()
    }

    /// Riemann sum of x^2 f(x) dx (sigma^2/2 for the Gaussian family).
    pub fn second_moment(&self) -> f64 {
        (0..self.grid.n_points())
            .map(|j| {
                let x = self.grid.position_at(j);
                x * x * self.samples[j]
            })
            .sum::<f64>()
            * self.grid.spacing()
    }

    /// Sample at a signed cyclic offset in grid steps (offset 0 is x = 0).
    fn at_offset(&self, steps: i64) -> f64 {
        let n = self.grid.n_points() as i64;
        let idx = (steps + n / 2).rem_euclid(n) as usize;
        self.samples[idx]
    }

    /// Column-stochastic kernel w_ij = f(x_i - x_j) dx with the cyclic
    /// displacement; one canonical normalization keeps it exactly circulant.
    pub fn stochastic_matrix(&self) -> DMatrix<f64> {
        let n = self.grid.n_points();
        let dx = self.grid.spacing();
        let canon: f64 = self.samples.iter().sum::<f64>() * dx;
        DMatrix::from_fn(n, n, |i, j| {
            self.at_offset(i as i64 - j as i64) * dx / canon
        })
    }

    /// sqrt of one kernel column: the circulant generator of the dense
    /// fuzzifier matrix sqrt(f(x - x')) sqrt(dx).
    pub fn sqrt_column(&self) -> DVector<f64> {
        let n = self.grid.n_points();
        let dx = self.grid.spacing();
        let canon: f64 = self.samples.iter().sum::<f64>() * dx;
        DVector::from_fn(n, |i, _| (self.at_offset(i as i64) * dx / canon).sqrt())
    }

    pub fn fuzzifier(&self) -> ContinuousFuzzifier {
        ContinuousFuzzifier::from_kernel(self)
    }
}

/// F_c as a Fourier multiplier: real (even-kernel) eigenvalues on the
/// wave-number grid, plus the circulant generator for the dense oracle path.
#[derive(Clone, Debug, PartialEq)]
pub struct ContinuousFuzzifier {
    multiplier: DVector<f64>,
    first_column: DVector<f64>,
    grid: GridSpec,
}

impl ContinuousFuzzifier {
    fn from_kernel(kernel: &SmearingKernel) -> Self {
        let c = kernel.sqrt_column();
        let n = c.len();
        let mut buf: Vec<Complex64> = c.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        fft_forward(&mut buf);
        let multiplier = DVector::from_fn(n, |l, _| buf[l].re);
        debug_assert!(
            buf.iter().map(|z| z.im.abs()).fold(0.0, f64::max) < 1e-10,
            "multiplier of an even kernel must be real"
        );
        Self {
            multiplier,
            first_column: c,
            grid: kernel.grid(),
        }
    }

    pub fn grid(&self) -> GridSpec {
        self.grid
    }

    /// Eigenvalues on the wave-number grid, FFT bin order.
    pub fn multiplier(&self) -> &DVector<f64> {
        &self.multiplier
    }

    /// Dense position-space matrix sqrt(f(x_i - x_j) dx).
    pub fn dense_matrix(&self) -> DMatrix<f64> {
        let n = self.grid.n_points();
        DMatrix::from_fn(n, n, |i, j| {
            self.first_column[(i as i64 - j as i64).rem_euclid(n as i64) as usize]
        })
    }

    /// F_c * M via FFT on each column.
    pub fn apply_left(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let n = self.grid.n_points();
        let mut out = DMatrix::<Complex64>::zeros(n, n);
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for c in 0..n {
            for r in 0..n {
                buf[r] = m[(r, c)];
            }
            fft_forward(&mut buf);
            for (l, b) in buf.iter_mut().enumerate() {
                *b *= self.multiplier[l];
            }
            fft_inverse(&mut buf);
            for r in 0..n {
                out[(r, c)] = buf[r] / n as f64;
            }
        }
        out
    }

    /// F_c * M * F_c (the fuzzifier is real symmetric).
    pub fn apply_both(&self, m: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let left = self.apply_left(m);
        self.apply_left(&left.adjoint()).adjoint()
    }
}

fn check_grids(a: GridSpec, b: GridSpec) -> Result<()> {
    if a != b {
        return Err(Error::DimensionMismatch(
            "kernel and state live on different grids".into(),
        ));
    }
    Ok(())
}

/// Nonselective OQP map on the grid: off-diagonals are damped entrywise,
/// rho'(y, y') = rho(y, y') g(y - y') with
/// g(u) = sum_x sqrt(f(x - y) f(x - y')) dx.
pub fn oqp_transform_continuous(
    f: &SmearingKernel,
    rho: &DensityOperator,
) -> Result<DensityOperator> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let n = grid.n_points();
    let c = f.sqrt_column();
    let g: Vec<f64> = (0..n)
        .map(|v| (0..n).map(|m| c[m] * c[(m + n - v) % n]).sum())
        .collect();
    let out = DMatrix::from_fn(n, n, |i, j| rho.matrix()[(i, j)] * g[(i + n - j) % n]);
    Ok(DensityOperator::from_parts_unchecked(
        hermitize(&out),
        rho.basis(),
    ))
}

/// Oracle path for the OQP map: the literal Kraus sum
/// sum_x A_x rho A_x' dx with A_x = diag(sqrt(f(x - y))) sqrt(dx).
pub fn oqp_transform_continuous_direct(
    f: &SmearingKernel,
    rho: &DensityOperator,
) -> Result<DMatrix<Complex64>> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let n = grid.n_points();
    let s = f.fuzzifier().dense_matrix(); // s[x, y] = sqrt(f(x - y) dx)
    let mut out = DMatrix::<Complex64>::zeros(n, n);
    for x in 0..n {
        for i in 0..n {
            let si = s[(x, i)];
            if si == 0.0 {
                continue;
            }
            for j in 0..n {
                out[(i, j)] += rho.matrix()[(i, j)] * (si * s[(x, j)]);
            }
        }
    }
    Ok(hermitize(&out))
}

/// Nonselective epistemic map on the grid: extract the position diagonal,
/// then smear with the Fourier multiplier: rho' = F_c diag(rho) F_c.
pub fn epistemic_transform_continuous(
    f: &SmearingKernel,
    rho: &DensityOperator,
) -> Result<DensityOperator> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let n = grid.n_points();
    let fz = f.fuzzifier();
    let mut diag = DMatrix::<Complex64>::zeros(n, n);
    for i in 0..n {
        diag[(i, i)] = Complex64::new(rho.matrix()[(i, i)].re, 0.0);
    }
    let out = fz.apply_both(&diag);
    Ok(DensityOperator::from_parts_unchecked(
        hermitize(&out),
        rho.basis(),
    ))
}

/// Dense oracle for the epistemic map.
pub fn epistemic_transform_continuous_direct(
    f: &SmearingKernel,
    rho: &DensityOperator,
) -> Result<DMatrix<Complex64>> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let s = f.fuzzifier().dense_matrix();
    let pops = rho.populations();
    let mut scaled = s.clone();
    for (m, mut col) in scaled.column_iter_mut().enumerate() {
        col *= pops[m];
    }
    Ok(real_to_complex(&(&scaled * s.transpose())))
}

/// Conjugation by the cyclic grid translation U_a |j> = |j - a>.
pub fn grid_shift_conjugate(m: &DMatrix<Complex64>, steps: i64) -> DMatrix<Complex64> {
    let n = m.nrows() as i64;
    DMatrix::from_fn(m.nrows(), m.ncols(), |i, j| {
        let si = (i as i64 + steps).rem_euclid(n) as usize;
        let sj = (j as i64 + steps).rem_euclid(n) as usize;
        m[(si, sj)]
    })
}

fn aligned_steps(grid: GridSpec, shift: f64) -> Result<i64> {
    let ratio = shift / grid.spacing();
    let rounded = ratio.round();
    if (ratio - rounded).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!(
            "shift {shift} is not an integer multiple of dx = {}",
            grid.spacing()
        )));
    }
    Ok(rounded as i64)
}

/// Equivariance defect || T(U rho U') - U T(rho) U' || of a nonselective
/// continuous transformer under the grid translation by `shift`.
pub fn translation_covariance_gap_continuous(
    flavor: Flavor,
    f: &SmearingKernel,
    rho: &DensityOperator,
    shift: f64,
) -> Result<f64> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let steps = aligned_steps(grid, shift)?;
    let apply = |state: &DensityOperator| -> Result<DensityOperator> {
        match flavor {
            Flavor::Oqp => oqp_transform_continuous(f, state),
            Flavor::Epistemic => epistemic_transform_continuous(f, state),
            Flavor::VonNeumann => Err(Error::InvalidParameter(
                "continuous transformers are oqp or epistemic".into(),
            )),
        }
    };
    let conjugated = DensityOperator::from_parts_unchecked(
        grid_shift_conjugate(rho.matrix(), steps),
        rho.basis(),
    );
    let lhs = apply(&conjugated)?;
    let rhs = grid_shift_conjugate(apply(rho)?.matrix(), steps);
    Ok(max_abs_diff(lhs.matrix(), &rhs))
}

/// max-norm of [F_c, U_a]; zero because a circulant commutes with the
/// cyclic translation.
pub fn fuzzifier_shift_commutator_norm(f: &SmearingKernel, shift: f64) -> Result<f64> {
    let grid = f.grid();
    let a = aligned_steps(grid, shift)?;
    let s = f.fuzzifier().dense_matrix();
    let n = grid.n_points() as i64;
    let mut gap = 0.0f64;
    for i in 0..n {
        for j in 0..n {
            let left = s[(i as usize, (j - a).rem_euclid(n) as usize)]; // (S U_a)_ij
            let right = s[((i + a).rem_euclid(n) as usize, j as usize)]; // (U_a S)_ij
            gap = gap.max((left - right).abs());
        }
    }
    Ok(gap)
}

/// Wave-number populations diag(W rho W') in FFT bin order.
pub fn momentum_distribution(rho: &DensityOperator) -> Result<DVector<f64>> {
    let grid = rho.grid()?;
    let n = grid.n_points();
    let m = rho.matrix();
    // forward FFT along the first index
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|c| (0..n).map(|r| m[(r, c)]).collect())
        .collect();
    for col in cols.iter_mut() {
        fft_forward(col);
    }
    // unnormalized inverse FFT along the second index, one row at a time
    let mut diag = DVector::zeros(n);
    let mut row = vec![Complex64::new(0.0, 0.0); n];
    for l in 0..n {
        for c in 0..n {
            row[c] = cols[c][l];
        }
        fft_inverse(&mut row);
        diag[l] = row[l].re / n as f64;
    }
    Ok(diag)
}

/// Tr(rho k) with k = -i d/dx diagonal on the wave-number grid.
pub fn momentum_first_moment(rho: &DensityOperator) -> Result<f64> {
    let grid = rho.grid()?;
    let p = momentum_distribution(rho)?;
    Ok((0..grid.n_points())
        .map(|l| grid.wave_number_at(l) * p[l])
        .sum())
}

/// Diagonal of the spectral derivative of rho along its second argument.
fn second_argument_derivative_diag(m: &DMatrix<Complex64>, grid: &GridSpec) -> DVector<Complex64> {
    let n = grid.n_points();
    let mut diag = DVector::from_element(n, Complex64::new(0.0, 0.0));
    let mut buf = vec![Complex64::new(0.0, 0.0); n];
    for i in 0..n {
        for c in 0..n {
            buf[c] = m[(i, c)];
        }
        fft_forward(&mut buf);
        for (l, b) in buf.iter_mut().enumerate() {
            *b *= Complex64::new(0.0, grid.wave_number_at(l));
        }
        fft_inverse(&mut buf);
        diag[i] = buf[i] / n as f64;
    }
    diag
}

/// Cyclic central-difference derivative of the smearing samples.
fn kernel_derivative(f: &SmearingKernel) -> Vec<f64> {
    let n = f.grid().n_points();
    let dx = f.grid().spacing();
    (0..n)
        .map(|m| (f.samples()[(m + 1) % n] - f.samples()[(m + n - 1) % n]) / (2.0 * dx))
        .collect()
}

/// Post-OQP mean momentum evaluated from the initial state:
/// i * sum_y [ (d rho / dy')(y, y) - 1/2 rho(y, y) * sum_x f'(x - y) dx ].
///
/// The derivative of rho is spectral (the periodic grid makes it exact to
/// machine precision for resolved states); f' keeps the stated
/// central-difference form, whose cyclic integral vanishes identically.
pub fn momko_value(rho: &DensityOperator, f: &SmearingKernel) -> Result<f64> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let n = grid.n_points();
    let dx = grid.spacing();
    let ddiag = second_argument_derivative_diag(rho.matrix(), &grid);
    let fp = kernel_derivative(f);
    let half = n as i64 / 2;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let fterm: f64 = (0..n)
            .map(|x| fp[((x as i64 - i as i64 + half).rem_euclid(n as i64)) as usize])
            .sum::<f64>()
            * dx;
        total += ddiag[i] - rho.matrix()[(i, i)] * (0.5 * fterm);
    }
    Ok((Complex64::new(0.0, 1.0) * total).re)
}

/// Post-epistemic mean momentum from the initial state:
/// -i/2 * sum_y rho(y, y) * sum_x f'(x - y) dx; identically zero on the
/// periodic grid because the cyclic integral of f' telescopes away.
pub fn momke_value(rho: &DensityOperator, f: &SmearingKernel) -> Result<f64> {
    let grid = rho.grid()?;
    check_grids(f.grid(), grid)?;
    let n = grid.n_points();
    let dx = grid.spacing();
    let fp = kernel_derivative(f);
    let half = n as i64 / 2;
    let mut total = Complex64::new(0.0, 0.0);
    for i in 0..n {
        let fterm: f64 = (0..n)
            .map(|x| fp[((x as i64 - i as i64 + half).rem_euclid(n as i64)) as usize])
            .sum::<f64>()
            * dx;
        total += rho.matrix()[(i, i)] * fterm;
    }
    // the cyclic integral of f' telescopes away, so this vanishes up to
    // roundoff in the fterm sums
    Ok((Complex64::new(0.0, -0.5) * total).re)
}

/// Normalized wave packet exp(i k0 (x - x0)) exp(-(x - x0)^2 / 4 w^2).
pub fn gaussian_packet(grid: GridSpec, x0: f64, k0: f64, width: f64) -> Result<DensityOperator> {
    if !(width > 0.0) || !width.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "packet width must be positive, got {width}"
        )));
    }
    if width < 2.0 * grid.spacing() {
        return Err(Error::InvalidParameter(format!(
            "packet width {width} under-resolved: need w >= 2 dx = {}",
            2.0 * grid.spacing()
        )));
    }
    let amps = DVector::from_fn(grid.n_points(), |j, _| {
        let u = grid.position_at(j) - x0;
        let envelope = (-u * u / (4.0 * width * width)).exp();
        Complex64::new(0.0, k0 * u).exp() * envelope
    });
    DensityOperator::pure_from_amplitudes(&amps, Basis::Grid(grid))
}
