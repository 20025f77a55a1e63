//! Klein-Gordon to Schrodinger reduction.
//!
//! A positive-frequency Klein-Gordon field is written as
//! `psi = exp(-i m c^2 t / hbar) psi_c`. Substituting into the Klein-Gordon
//! equation gives
//!
//! `psi_tt = exp(..) [ -(m^2 c^4 / hbar^2) psi_c - (2 i m c^2 / hbar) d_t psi_c + d_tt psi_c ]`,
//!
//! and dropping `d_tt psi_c` against the bracketed remainder leaves the free
//! Schrodinger equation for `psi_c`. This module measures how small the
//! dropped term is and how far the envelope actually drifts from a true
//! Schrodinger evolution as `c` grows.

use serde::Serialize;

use crate::dispersion::{kg_kinetic_frequency, nr_expansion_error, EquationKind};
use crate::error::{Error, Result};
use crate::model::{
    l2_norm, positive, reduced_phase, Complex64, GaussianPacketSpec, Grid1D, PhysicalConstants,
    TimeSpec, WaveField,
};
use crate::propagator::{
    gaussian_packet, positive_branch_init, SchrodingerSpectral, SecondOrderSpectral,
};

/// Slow envelope `psi_c = exp(+i m c^2 t / hbar) psi` at time `t`.
#[derive(Debug, Clone, PartialEq)]
pub struct FactoredField {
    pub psi_c: WaveField,
    pub t: f64,
    pub m: f64,
}

fn rest_phase(m: f64, consts: &PhysicalConstants, t: f64) -> Complex64 {
    Complex64::from_polar(1.0, reduced_phase(m * consts.c * consts.c / consts.hbar, t))
}

pub fn factor_rest_phase(
    psi: &WaveField,
    m: f64,
    consts: &PhysicalConstants,
    t: f64,
) -> FactoredField {
    FactoredField {
        psi_c: psi.scaled(rest_phase(m, consts, t)),
        t,
        m,
    }
}

/// Inverse of [`factor_rest_phase`].
pub fn restore_rest_phase(field: &FactoredField, consts: &PhysicalConstants) -> WaveField {
    field
        .psi_c
        .scaled(rest_phase(field.m, consts, field.t).conj())
}

/// The two sides of the dominance condition: the dropped term
/// `|d_tt psi_c|` and the retained `|(m^2 c^4 / hbar^2) psi_c + (2 i m c^2 / hbar) d_t psi_c|`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DominanceTerms {
    pub small_term: f64,
    pub big_term: f64,
    pub ratio: f64,
}

impl DominanceTerms {
    fn new(small_term: f64, big_term: f64) -> Self {
        let ratio = if big_term > 0.0 {
            small_term / big_term
        } else {
            f64::INFINITY
        };
        Self {
            small_term,
            big_term,
            ratio,
        }
    }
}

/// Dominance terms for a unit-amplitude positive-branch mode. With
/// `Omega = omega_KG(k) - m c^2 / hbar` the envelope evolves as
/// `exp(-i Omega t)`, so `d_t -> -i Omega`: the dropped term is `Omega^2` and
/// the retained bracket is `m^2 c^4 / hbar^2 + 2 m c^2 Omega / hbar`.
pub fn dominance_terms_mode(k: f64, m: f64, consts: &PhysicalConstants) -> Result<DominanceTerms> {
    positive("m", m)?;
    let omega = kg_kinetic_frequency(m, k, consts);
    let rest = m * consts.c * consts.c / consts.hbar;
    let bracket = Complex64::new(rest * rest, 0.0)
        + Complex64::new(0.0, 2.0 * rest) * Complex64::new(0.0, -omega);
    Ok(DominanceTerms::new(omega * omega, bracket.norm()))
}

/// Field-level dominance terms from three consecutive, equally spaced
/// envelopes, using second-order central differences for `d_t` and `d_tt`.
/// Longer lists use the central triple.
pub fn dominance_ratio_field(
    snapshots: &[FactoredField],
    consts: &PhysicalConstants,
) -> Result<DominanceTerms> {
    if snapshots.len() < 3 {
        return Err(Error::InsufficientSnapshots(snapshots.len()));
    }
    let steps: Vec<f64> = snapshots.windows(2).map(|w| w[1].t - w[0].t).collect();
    let dt = steps[0];
    if dt.partial_cmp(&0.0) != Some(std::cmp::Ordering::Greater)
        || steps.iter().any(|s| (s - dt).abs() > 1e-9 * dt.abs())
    {
        return Err(Error::NonUniformTimes);
    }
    let mid = snapshots.len() / 2;
    let (prev, cur, next) = (&snapshots[mid - 1], &snapshots[mid], &snapshots[mid + 1]);
    prev.psi_c.check_grid(&cur.psi_c)?;
    cur.psi_c.check_grid(&next.psi_c)?;

    let rest = cur.m * consts.c * consts.c / consts.hbar;
    let grid = *cur.psi_c.grid();
    let (d1, d2): (Vec<Complex64>, Vec<Complex64>) = prev
        .psi_c
        .samples()
        .iter()
        .zip(cur.psi_c.samples())
        .zip(next.psi_c.samples())
        .map(|((a, b), c)| {
            let first = (c - a) / (2.0 * dt);
            let second = (c - 2.0 * b + a) / (dt * dt);
            (first, second)
        })
        .unzip();
    let retained: Vec<Complex64> = cur
        .psi_c
        .samples()
        .iter()
        .zip(&d1)
        .map(|(p, dp)| p * (rest * rest) + Complex64::new(0.0, 2.0 * rest) * dp)
        .collect();
    let small = l2_norm(&WaveField::from_raw(grid, d2));
    let big = l2_norm(&WaveField::from_raw(grid, retained));
    Ok(DominanceTerms::new(small, big))
}

/// Frequency of the envelope drift for a single mode:
/// `2 |sin(gap t / 2)|`, with `gap` the exact Klein-Gordon expansion error.
pub fn mode_deviation_prediction(
    k: f64,
    m: f64,
    consts: &PhysicalConstants,
    t: f64,
) -> Result<f64> {
    let gap = nr_expansion_error(m, k, consts)?.exact_gap;
    Ok(2.0 * (0.5 * gap * t).sin().abs())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NrLimitParams {
    pub m: f64,
    pub hbar: f64,
    pub c: f64,
    pub n_points: usize,
    pub length: f64,
    pub dt: f64,
    pub n_steps: usize,
    pub snapshot_every: usize,
    /// `(x0, k0, sigma)` when the initial state is a Gaussian packet.
    pub packet: Option<(f64, f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NrLimitReport {
    pub times: Vec<f64>,
    /// `||psi_c(t) - psi_S(t)|| / ||psi_0||`.
    pub deviation: Vec<f64>,
    /// Field-level dominance ratio at each time, differenced over `dt`.
    pub dominance_ratio: Vec<f64>,
    pub params: NrLimitParams,
}

impl NrLimitReport {
    pub fn final_deviation(&self) -> f64 {
        *self.deviation.last().expect("report has at least one time")
    }
}

pub(crate) fn snapshot_steps(n_steps: usize, every: usize) -> Vec<usize> {
    let mut steps: Vec<usize> = if every == 0 {
        vec![0]
    } else {
        (0..=n_steps).step_by(every).collect()
    };
    if *steps.last().unwrap() != n_steps {
        steps.push(n_steps);
    }
    steps
}

/// Full comparison from an explicit initial field: positive-branch
/// Klein-Gordon evolution with the rest phase factored out, against free
/// Schrodinger evolution of the same field.
pub fn kg_vs_schrodinger_field(
    psi0: &WaveField,
    m: f64,
    consts: &PhysicalConstants,
    time: &TimeSpec,
    snapshot_every: usize,
) -> Result<NrLimitReport> {
    positive("m", m)?;
    let norm0 = l2_norm(psi0);
    if norm0 == 0.0 {
        return Err(Error::ZeroField);
    }
    let kg = EquationKind::KleinGordon { m };
    let state0 = positive_branch_init(psi0, &kg, consts)?;
    let kg_prop = SecondOrderSpectral::new(&state0, &kg, consts)?;
    let schrodinger = SchrodingerSpectral::new(psi0, m, consts)?;
    let envelope = |t: f64| factor_rest_phase(&kg_prop.psi_at(t), m, consts, t);

    let steps = snapshot_steps(time.n_steps, snapshot_every);
    let mut times = Vec::with_capacity(steps.len());
    let mut deviation = Vec::with_capacity(steps.len());
    let mut dominance_ratio = Vec::with_capacity(steps.len());
    for step in steps {
        let t = step as f64 * time.dt;
        let triple = [envelope(t - time.dt), envelope(t), envelope(t + time.dt)];
        let dev = if step == 0 {
            0.0
        } else {
            triple[1].psi_c.distance(&schrodinger.at(t))? / norm0
        };
        if !dev.is_finite() {
            return Err(Error::NonFinite { step });
        }
        times.push(t);
        deviation.push(dev);
        dominance_ratio.push(dominance_ratio_field(&triple, consts)?.ratio);
    }
    let grid = psi0.grid();
    Ok(NrLimitReport {
        times,
        deviation,
        dominance_ratio,
        params: NrLimitParams {
            m,
            hbar: consts.hbar,
            c: consts.c,
            n_points: grid.n_points(),
            length: grid.length(),
            dt: time.dt,
            n_steps: time.n_steps,
            snapshot_every,
            packet: None,
        },
    })
}

/// [`kg_vs_schrodinger_field`] from a normalized Gaussian packet.
pub fn kg_vs_schrodinger(
    spec: &GaussianPacketSpec,
    grid: &Grid1D,
    m: f64,
    consts: &PhysicalConstants,
    time: &TimeSpec,
    snapshot_every: usize,
) -> Result<NrLimitReport> {
    positive("m", m)?;
    if consts.hbar * spec.k0.abs() >= m * consts.c {
        log::warn!(
            "hbar |k0| = {} is not below m c = {}; the packet is relativistic",
            consts.hbar * spec.k0.abs(),
            m * consts.c
        );
    }
    let psi0 = gaussian_packet(spec, grid, true);
    let mut report = kg_vs_schrodinger_field(&psi0, m, consts, time, snapshot_every)?;
    report.params.packet = Some((spec.x0, spec.k0, spec.sigma));
    Ok(report)
}
