//! Units, the periodic grid, complex fields and the unitary DFT.
//!
//! Conventions used everywhere in the crate:
//!
//! * grid point `j` sits at `x_j = j * dx`, `dx = L / N`, and `x_N` is
//!   identified with `x_0`;
//! * spectra are stored in transform order: slot `i` holds the mode with
//!   signed index `n = i` for `i < N/2` and `n = i - N` otherwise, so the
//!   Nyquist slot carries `n = -N/2`;
//! * `dft` and `idft` are both scaled by `1/sqrt(N)`, which makes
//!   `sum |psi_hat|^2 == sum |psi|^2`.

pub mod fft;

use std::cell::RefCell;
use std::collections::HashMap;
use std::f64::consts::{PI, TAU};
use std::rc::Rc;

pub use num_complex::Complex64;

use crate::error::{Error, Result};
use fft::FftPlan;

/// Reduced Planck constant and speed of light. Natural units (both 1) are the
/// default, but every formula in the crate takes them explicitly.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar: f64,
    pub c: f64,
}

impl PhysicalConstants {
    pub fn new(hbar: f64, c: f64) -> Result<Self> {
        positive("hbar", hbar)?;
        positive("c", c)?;
        Ok(Self { hbar, c })
    }

    pub fn with_c(self, c: f64) -> Result<Self> {
        Self::new(self.hbar, c)
    }
}

impl Default for PhysicalConstants {
    fn default() -> Self {
        Self { hbar: 1.0, c: 1.0 }
    }
}

pub(crate) fn positive(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value > 0.0 {
        Ok(value)
    } else {
        Err(Error::param(
            name,
            format!("must be finite and > 0, got {value}"),
        ))
    }
}

/// Uniform periodic grid on `[0, L)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    n_points: usize,
    length: f64,
}

impl Grid1D {
    pub const MIN_POINTS: usize = 8;

    pub fn new(n_points: usize, length: f64) -> Result<Self> {
        if n_points < Self::MIN_POINTS || !n_points.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_points must be a power of two >= {}, got {n_points}",
                Self::MIN_POINTS
            )));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::InvalidGrid(format!(
                "length must be finite and > 0, got {length}"
            )));
        }
        Ok(Self { n_points, length })
    }

    pub fn n_points(&self) -> usize {
        self.n_points
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.n_points as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        j as f64 * self.spacing()
    }

    pub fn positions(&self) -> impl Iterator<Item = f64> + '_ {
        (0..self.n_points).map(move |j| self.x(j))
    }

    /// Signed mode index stored in spectral slot `slot`.
    pub fn mode_index(&self, slot: usize) -> i64 {
        let n = self.n_points as i64;
        let i = slot as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// Spectral slot holding signed mode `n`, if `n` is in `[-N/2, N/2)`.
    pub fn slot_of_mode(&self, n: i64) -> Option<usize> {
        let half = (self.n_points / 2) as i64;
        if n < -half || n >= half {
            return None;
        }
        Some(n.rem_euclid(self.n_points as i64) as usize)
    }

    /// `k_n = 2 pi n / L` for the mode stored in `slot`.
    pub fn wavenumber(&self, slot: usize) -> f64 {
        self.mode_wavenumber(self.mode_index(slot))
    }

    pub fn mode_wavenumber(&self, n: i64) -> f64 {
        2.0 * PI * n as f64 / self.length
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        (0..self.n_points).map(|i| self.wavenumber(i)).collect()
    }

    /// Mode index `n` with `k = 2 pi n / L`, if `k` is representable.
    pub fn commensurate_mode(&self, k: f64) -> Option<i64> {
        let n = k * self.length / (2.0 * PI);
        let rounded = n.round();
        let tol = 1e-9 * rounded.abs().max(1.0);
        if (n - rounded).abs() <= tol {
            let n = rounded as i64;
            self.slot_of_mode(n).map(|_| n)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeSpec {
    pub dt: f64,
    pub n_steps: usize,
}

impl TimeSpec {
    pub fn new(dt: f64, n_steps: usize) -> Result<Self> {
        positive("dt", dt)?;
        if n_steps == 0 {
            return Err(Error::param("n_steps", "must be >= 1"));
        }
        Ok(Self { dt, n_steps })
    }

    pub fn total_time(&self) -> f64 {
        self.dt * self.n_steps as f64
    }
}

/// Complex samples `psi(x_j)` on a periodic grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    grid: Grid1D,
    samples: Vec<Complex64>,
}

impl WaveField {
    pub fn new(grid: Grid1D, samples: Vec<Complex64>) -> Result<Self> {
        if samples.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "expected {} samples, got {}",
                grid.n_points(),
                samples.len()
            )));
        }
        if samples
            .iter()
            .any(|z| !z.re.is_finite() || !z.im.is_finite())
        {
            return Err(Error::param("samples", "all samples must be finite"));
        }
        Ok(Self { grid, samples })
    }

    /// Skips the finiteness scan; for values produced by the crate's own
    /// unitary kernels.
    pub(crate) fn from_raw(grid: Grid1D, samples: Vec<Complex64>) -> Self {
        debug_assert_eq!(samples.len(), grid.n_points());
        Self { grid, samples }
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self::from_raw(grid, vec![Complex64::new(0.0, 0.0); grid.n_points()])
    }

    pub fn from_fn(grid: Grid1D, mut f: impl FnMut(f64) -> Complex64) -> Result<Self> {
        let samples = grid.positions().map(&mut f).collect();
        Self::new(grid, samples)
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn samples(&self) -> &[Complex64] {
        &self.samples
    }

    pub fn into_samples(self) -> Vec<Complex64> {
        self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.samples
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn scaled(&self, factor: Complex64) -> Self {
        Self::from_raw(
            self.grid,
            self.samples.iter().map(|&z| z * factor).collect(),
        )
    }

    /// `<self|other> = sum conj(self_j) other_j dx`.
    pub fn inner(&self, other: &WaveField) -> Result<Complex64> {
        self.check_grid(other)?;
        let dx = self.grid.spacing();
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| a.conj() * b)
            .sum::<Complex64>()
            * dx)
    }

    /// Discrete L2 distance `||self - other||`.
    pub fn distance(&self, other: &WaveField) -> Result<f64> {
        self.check_grid(other)?;
        let dx = self.grid.spacing();
        let sum: f64 = self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok((sum * dx).sqrt())
    }

    pub fn max_abs_diff(&self, other: &WaveField) -> Result<f64> {
        self.check_grid(other)?;
        Ok(self
            .samples
            .iter()
            .zip(&other.samples)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn max_abs(&self) -> f64 {
        self.samples.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn normalized(&self) -> Result<Self> {
        let norm = l2_norm(self);
        if norm == 0.0 {
            return Err(Error::ZeroField);
        }
        Ok(self.scaled(Complex64::new(1.0 / norm, 0.0)))
    }

    pub(crate) fn check_grid(&self, other: &WaveField) -> Result<()> {
        if self.grid == other.grid {
            Ok(())
        } else {
            Err(Error::GridMismatch)
        }
    }
}

/// Mode amplitudes `psi_hat(k_n)` in transform order (see module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralField {
    grid: Grid1D,
    modes: Vec<Complex64>,
}

impl SpectralField {
    pub fn new(grid: Grid1D, modes: Vec<Complex64>) -> Result<Self> {
        if modes.len() != grid.n_points() {
            return Err(Error::InvalidGrid(format!(
                "expected {} modes, got {}",
                grid.n_points(),
                modes.len()
            )));
        }
        Ok(Self { grid, modes })
    }

    pub fn zeros(grid: Grid1D) -> Self {
        Self {
            grid,
            modes: vec![Complex64::new(0.0, 0.0); grid.n_points()],
        }
    }

    pub fn grid(&self) -> &Grid1D {
        &self.grid
    }

    pub fn modes(&self) -> &[Complex64] {
        &self.modes
    }

    pub fn modes_mut(&mut self) -> &mut [Complex64] {
        &mut self.modes
    }

    pub fn wavenumbers(&self) -> Vec<f64> {
        self.grid.wavenumbers()
    }

    /// Amplitude of signed mode `n`.
    pub fn mode(&self, n: i64) -> Option<Complex64> {
        self.grid.slot_of_mode(n).map(|s| self.modes[s])
    }

    /// `lambda = 2 pi / |k|` of the mode in `slot`; infinite for `k = 0`.
    pub fn wavelength(&self, slot: usize) -> f64 {
        2.0 * PI / self.grid.wavenumber(slot).abs()
    }

    pub fn power(&self) -> f64 {
        self.modes.iter().map(|z| z.norm_sqr()).sum()
    }
}

/// `a * b` reduced to `[-pi, pi]`. The rounding error of the product and of
/// the stored `2 pi` are both carried, so a phase of thousands of radians is
/// still accurate to a few ulp of `pi`.
pub fn reduced_phase(a: f64, b: f64) -> f64 {
    const TAU_LO: f64 = 2.449_293_598_294_706_4e-16;
    let p = a * b;
    let err = a.mul_add(b, -p);
    let turns = (p / TAU).round();
    (-turns).mul_add(TAU, p) - turns * TAU_LO + err
}

/// Cyclic frequency `f = omega / 2 pi`.
pub fn cyclic_frequency(omega: f64) -> f64 {
    omega / (2.0 * PI)
}

thread_local! {
    static PLANS: RefCell<HashMap<usize, Rc<FftPlan>>> = RefCell::new(HashMap::new());
}

pub(crate) fn plan(n: usize) -> Rc<FftPlan> {
    PLANS.with(|plans| {
        plans
            .borrow_mut()
            .entry(n)
            .or_insert_with(|| Rc::new(FftPlan::new(n)))
            .clone()
    })
}

pub(crate) fn forward_unitary(data: &mut [Complex64]) {
    let n = data.len();
    plan(n).forward(data);
    let scale = 1.0 / (n as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= scale);
}

pub(crate) fn inverse_unitary(data: &mut [Complex64]) {
    let n = data.len();
    plan(n).inverse(data);
    let scale = 1.0 / (n as f64).sqrt();
    data.iter_mut().for_each(|z| *z *= scale);
}

/// Forward transform `psi_hat_n = N^{-1/2} sum_j psi_j exp(-i k_n x_j)`.
pub fn dft(field: &WaveField) -> SpectralField {
    let mut modes = field.samples.clone();
    forward_unitary(&mut modes);
    SpectralField {
        grid: field.grid,
        modes,
    }
}

/// Inverse of [`dft`].
pub fn idft(spec: &SpectralField) -> WaveField {
    let mut samples = spec.modes.clone();
    inverse_unitary(&mut samples);
    WaveField::from_raw(spec.grid, samples)
}

/// `sqrt(sum |psi_j|^2 dx)`, the discrete analogue of the L2 norm.
pub fn l2_norm(field: &WaveField) -> f64 {
    let sum: f64 = field.samples.iter().map(|z| z.norm_sqr()).sum();
    (sum * field.grid.spacing()).sqrt()
}

/// Localized initial data `exp(-(x-x0)^2 / 4 sigma^2) exp(i k0 x)`.
///
/// `sigma` is the standard deviation of `|psi|^2`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianPacketSpec {
    pub x0: f64,
    pub k0: f64,
    pub sigma: f64,
}

impl GaussianPacketSpec {
    pub fn new(x0: f64, k0: f64, sigma: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        if !x0.is_finite() || !k0.is_finite() {
            return Err(Error::param("x0/k0", "must be finite"));
        }
        Ok(Self { x0, k0, sigma })
    }

    /// Resolution and wrapping concerns for this packet on `grid`. These are
    /// advisory; nothing refuses to run on them.
    pub fn warnings(&self, grid: &Grid1D) -> Vec<String> {
        let mut out = Vec::new();
        if self.sigma < 4.0 * grid.spacing() {
            out.push(format!(
                "sigma = {} is under-resolved (< 4 dx = {})",
                self.sigma,
                4.0 * grid.spacing()
            ));
        }
        if self.sigma > grid.length() / 8.0 {
            out.push(format!(
                "sigma = {} exceeds L/8 = {}; periodic images overlap",
                self.sigma,
                grid.length() / 8.0
            ));
        }
        out
    }
}
