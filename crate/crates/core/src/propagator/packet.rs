//! Gaussian initial data, the closed-form free Gaussian, and moments of
//! `|psi|^2`.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{l2_norm, Complex64, GaussianPacketSpec, Grid1D, PhysicalConstants, WaveField};

/// `exp(-(x - x0)^2 / 4 sigma^2) exp(i k0 x)`, optionally scaled to unit
/// discrete norm. Periodic images are ignored.
pub fn gaussian_packet(spec: &GaussianPacketSpec, grid: &Grid1D, normalize: bool) -> WaveField {
    for w in spec.warnings(grid) {
        log::warn!("{w}");
    }
    let field = raw_gaussian(spec, grid);
    if normalize {
        let norm = l2_norm(&field);
        field.scaled(Complex64::new(1.0 / norm, 0.0))
    } else {
        field
    }
}

fn raw_gaussian(spec: &GaussianPacketSpec, grid: &Grid1D) -> WaveField {
    let s2 = spec.sigma * spec.sigma;
    let samples = grid
        .positions()
        .map(|x| {
            let d = x - spec.x0;
            Complex64::from_polar((-d * d / (4.0 * s2)).exp(), spec.k0 * x)
        })
        .collect();
    WaveField::from_raw(*grid, samples)
}

/// Continuum solution of the free Schrodinger equation from a Gaussian,
/// sampled on `grid` at time `t`:
///
/// `psi = sqrt(sigma^2 / a) exp(-(x - x0 - hbar k0 t / m)^2 / 4a)
///        exp(i k0 x - i hbar k0^2 t / 2m)`, `a = sigma^2 + i hbar t / 2m`.
///
/// With `normalize` the same scale factor as [`gaussian_packet`] is applied,
/// so `t = 0` reproduces it exactly.
pub fn analytic_free_gaussian(
    spec: &GaussianPacketSpec,
    grid: &Grid1D,
    m: f64,
    consts: &PhysicalConstants,
    t: f64,
    normalize: bool,
) -> Result<WaveField> {
    crate::model::positive("m", m)?;
    let hbar = consts.hbar;
    let s2 = spec.sigma * spec.sigma;
    let a = Complex64::new(s2, hbar * t / (2.0 * m));
    let prefactor = (Complex64::new(s2, 0.0) / a).sqrt();
    let drift = hbar * spec.k0 * t / m;
    let phase_t = hbar * spec.k0 * spec.k0 * t / (2.0 * m);
    let scale = if normalize {
        1.0 / l2_norm(&raw_gaussian(spec, grid))
    } else {
        1.0
    };
    let samples = grid
        .positions()
        .map(|x| {
            let d = x - spec.x0 - drift;
            let envelope = (-(d * d) / (4.0 * a)).exp();
            prefactor * envelope * Complex64::from_polar(scale, spec.k0 * x - phase_t)
        })
        .collect();
    Ok(WaveField::from_raw(*grid, samples))
}

/// RMS width of the free packet at time `t`: `sigma sqrt(1 + (hbar t / 2 m sigma^2)^2)`.
pub fn free_gaussian_width(sigma: f64, m: f64, consts: &PhysicalConstants, t: f64) -> f64 {
    sigma * (1.0 + (consts.hbar * t / (2.0 * m * sigma * sigma)).powi(2)).sqrt()
}

/// Normalized analytic harmonic-oscillator ground state centred at `x_c`.
pub fn harmonic_ground_state(
    grid: &Grid1D,
    m: f64,
    omega_c: f64,
    consts: &PhysicalConstants,
    x_c: f64,
) -> WaveField {
    let alpha = m * omega_c / consts.hbar;
    let amp = (alpha / PI).powf(0.25);
    let l = grid.length();
    let samples = grid
        .positions()
        .map(|x| {
            let d = (x - x_c + 0.5 * l).rem_euclid(l) - 0.5 * l;
            Complex64::new(amp * (-0.5 * alpha * d * d).exp(), 0.0)
        })
        .collect();
    WaveField::from_raw(*grid, samples)
}

/// First and second central moments of `|psi|^2`, measured in a window of
/// width `L` centred on the brightest sample so packets straddling the seam
/// are handled.
fn moments(field: &WaveField) -> Result<(f64, f64)> {
    let grid = field.grid();
    let weights: Vec<f64> = field.samples().iter().map(|z| z.norm_sqr()).collect();
    let total: f64 = weights.iter().sum();
    if total == 0.0 {
        return Err(Error::ZeroField);
    }
    let peak = weights
        .iter()
        .enumerate()
        .fold(0, |best, (j, &w)| if w > weights[best] { j } else { best });
    let l = grid.length();
    let x_peak = grid.x(peak);
    let offset = |j: usize| (grid.x(j) - x_peak + 0.5 * l).rem_euclid(l) - 0.5 * l;
    let mean = weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * offset(j))
        .sum::<f64>()
        / total;
    let var = weights
        .iter()
        .enumerate()
        .map(|(j, w)| w * (offset(j) - mean).powi(2))
        .sum::<f64>()
        / total;
    Ok(((x_peak + mean).rem_euclid(l), var))
}

/// Mean position of `|psi|^2`, in `[0, L)`.
pub fn centroid(field: &WaveField) -> Result<f64> {
    moments(field).map(|(c, _)| c)
}

/// Standard deviation of `|psi|^2`.
pub fn packet_width(field: &WaveField) -> Result<f64> {
    moments(field).map(|(_, v)| v.sqrt())
}
