//! Fixed-size invariant checks behind `wavelab verify`.

use std::f64::consts::PI;

use super::Fault;
use crate::dispersion::{
    nr_expansion_error, omega_of_k, planewave_residual, planewave_sample, EquationKind,
    PlaneWaveMode,
};
use crate::error::Result;
use crate::model::{
    dft, idft, l2_norm, reduced_phase, Complex64, Grid1D, PhysicalConstants, TimeSpec, WaveField,
};
use crate::nrlimit::dominance_terms_mode;
use crate::optimize::loglog_slope;
use crate::oscillator::{
    energy_bound, minimize_bound_analytic, minimize_bound_numeric, OscillatorProblem,
};
use crate::propagator::{
    crank_nicolson_evolve, gaussian_packet, positive_branch_init, split_step_evolve, Potential,
    SchrodingerSpectral, SecondOrderSpectral,
};
use crate::GaussianPacketSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckOutcome {
    pub fn line(&self) -> String {
        let verdict = if self.passed { "PASS" } else { "FAIL" };
        format!("{verdict} {}: {}", self.name, self.detail)
    }
}

fn outcome(name: &'static str, result: Result<(bool, String)>) -> CheckOutcome {
    match result {
        Ok((passed, detail)) => CheckOutcome {
            name,
            passed,
            detail,
        },
        Err(e) => CheckOutcome {
            name,
            passed: false,
            detail: format!("error: {e}"),
        },
    }
}

fn within(value: f64, tol: f64, what: &str) -> (bool, String) {
    (value <= tol, format!("{what} {value:.3e} (tol {tol:.0e})"))
}

fn families(grid: &Grid1D) -> Vec<EquationKind> {
    vec![
        EquationKind::ClassicalWave { v: 1.7 },
        EquationKind::Electromagnetic,
        EquationKind::KleinGordon { m: 0.8 },
        EquationKind::SchrodingerFree { m: 1.3 },
        EquationKind::SchrodingerPotential {
            m: 0.9,
            potential: Potential::constant(grid, 0.4),
        },
    ]
}

fn spectral_evolve(
    eq: &EquationKind,
    psi0: &WaveField,
    consts: &PhysicalConstants,
    t: f64,
) -> Result<WaveField> {
    match eq {
        EquationKind::SchrodingerFree { m } => {
            Ok(SchrodingerSpectral::new(psi0, *m, consts)?.at(t))
        }
        EquationKind::SchrodingerPotential { m, potential } => {
            let v0 = potential.constant_value().unwrap_or(0.0);
            let phase = Complex64::from_polar(1.0, -reduced_phase(v0 / consts.hbar, t));
            Ok(SchrodingerSpectral::new(psi0, *m, consts)?
                .at(t)
                .scaled(phase))
        }
        _ => {
            let state = positive_branch_init(psi0, eq, consts)?;
            Ok(SecondOrderSpectral::new(&state, eq, consts)?.psi_at(t))
        }
    }
}

fn plane_wave_exactness(fault: Option<Fault>) -> Result<(bool, String)> {
    let grid = Grid1D::new(64, 2.0 * PI)?;
    let consts = PhysicalConstants::new(1.1, 1.4)?;
    let skew = if fault == Some(Fault::Dispersion) {
        1.0 + 1e-6
    } else {
        1.0
    };
    let one = Complex64::new(1.0, 0.0);
    let (mut residual, mut phase) = (0.0f64, 0.0f64);
    for eq in families(&grid) {
        for slot in 0..grid.n_points() {
            let k = grid.wavenumber(slot);
            let omega = omega_of_k(&eq, k, &consts)? * skew;
            let mode = PlaneWaveMode {
                amplitude: one,
                k,
                omega,
            };
            residual = residual.max(planewave_residual(&eq, &mode, &consts)?);
            let psi0 = planewave_sample(&mode, &grid, 0.0)?;
            let evolved = spectral_evolve(&eq, &psi0, &consts, 10.0)?;
            phase = phase.max(evolved.max_abs_diff(&planewave_sample(&mode, &grid, 10.0)?)?);
        }
    }
    let (ok_r, r) = within(residual, 1e-12, "max residual");
    let (ok_p, p) = within(phase, 1e-12, "max mode error at t=10");
    Ok((ok_r && ok_p, format!("{r}, {p}")))
}

fn parseval() -> Result<(bool, String)> {
    let grid = Grid1D::new(256, 3.0)?;
    let field = WaveField::from_fn(grid, |x| {
        Complex64::new((3.0 * x).sin() + 0.2 * x, (x * x).cos())
    })?;
    let spec = dft(&field);
    let energy: f64 = field.samples().iter().map(|z| z.norm_sqr()).sum();
    let gap = (energy - spec.power()).abs() / energy;
    let roundtrip = idft(&spec).max_abs_diff(&field)?;
    let (ok_p, p) = within(gap, 1e-12, "relative power gap");
    let (ok_r, r) = within(roundtrip, 1e-12, "roundtrip error");
    Ok((ok_p && ok_r, format!("{p}, {r}")))
}

fn drift_per_step(snapshots: &[crate::propagator::Snapshot]) -> f64 {
    let n0 = l2_norm(&snapshots[0].field);
    snapshots
        .windows(2)
        .map(|w| (l2_norm(&w[1].field) - l2_norm(&w[0].field)).abs() / n0)
        .fold(0.0, f64::max)
}

fn harmonic_packet() -> Result<(WaveField, Potential)> {
    let grid = Grid1D::new(256, 20.0)?;
    let psi = gaussian_packet(&GaussianPacketSpec::new(11.0, 1.0, 0.8)?, &grid, true);
    Ok((psi, Potential::harmonic(&grid, 1.0, 1.0, 10.0)))
}

fn norm_conservation() -> Result<(bool, String)> {
    let (psi, pot) = harmonic_packet()?;
    let consts = PhysicalConstants::default();
    let run = split_step_evolve(&psi, 1.0, &pot, &consts, &TimeSpec::new(0.01, 200)?, 1)?;
    Ok(within(
        drift_per_step(&run.snapshots),
        1e-12,
        "split-step norm drift per step",
    ))
}

fn crank_nicolson_unitarity() -> Result<(bool, String)> {
    let (psi, pot) = harmonic_packet()?;
    let consts = PhysicalConstants::default();
    let run = crank_nicolson_evolve(&psi, 1.0, &pot, &consts, &TimeSpec::new(0.01, 200)?, 1)?;
    Ok(within(
        drift_per_step(&run.snapshots),
        1e-10,
        "Crank-Nicolson norm drift per step",
    ))
}

fn massless_reduction() -> Result<(bool, String)> {
    let consts = PhysicalConstants::default();
    let kg = EquationKind::KleinGordon { m: 1e-8 };
    let mut worst = 0.0f64;
    for i in 1..=40 {
        let k = 0.25 * i as f64;
        let a = omega_of_k(&kg, k, &consts)?;
        let b = omega_of_k(&EquationKind::Electromagnetic, k, &consts)?;
        worst = worst.max((a - b).abs() / b);
    }
    Ok(within(worst, 1e-7, "max relative gap to electromagnetic"))
}

fn dominance_scaling() -> Result<(bool, String)> {
    let cs = [5.0, 10.0, 20.0, 40.0];
    let ratios = cs
        .iter()
        .map(|&c| Ok(dominance_terms_mode(1.0, 1.0, &PhysicalConstants::new(1.0, c)?)?.ratio))
        .collect::<Result<Vec<_>>>()?;
    let slope = loglog_slope(&cs, &ratios);
    Ok((
        (slope + 4.0).abs() <= 0.2,
        format!("c-exponent {slope:.4} (expect -4 +/- 0.2)"),
    ))
}

fn nr_bound() -> Result<(bool, String)> {
    let consts = PhysicalConstants::new(1.0, 10.0)?;
    let ks: Vec<f64> = (1..=20).map(|i| 0.1 * i as f64).collect();
    let mut gaps = Vec::with_capacity(ks.len());
    let mut bounded = true;
    for &k in &ks {
        let e = nr_expansion_error(1.0, k, &consts)?;
        bounded &= e.exact_gap <= e.next_term_bound;
        gaps.push(e.exact_gap);
    }
    let slope = loglog_slope(&ks, &gaps);
    let ok = bounded && (slope - 4.0).abs() <= 0.1;
    Ok((
        ok,
        format!("gap below leading term: {bounded}, k-exponent {slope:.4} (expect 4 +/- 0.1)"),
    ))
}

fn oscillator_bound() -> Result<(bool, String)> {
    let problem = OscillatorProblem::new(1.0, 1.0, PhysicalConstants::default())?;
    let floor = problem.ground_energy() - 1e-12;
    let mut below = 0usize;
    for i in 0..200 {
        let dx = 0.05 * (1.0 + i as f64 * 0.25);
        if energy_bound(&problem, dx)?.energy < floor {
            below += 1;
        }
    }
    let exact = minimize_bound_analytic(&problem);
    let found = minimize_bound_numeric(&problem, (0.1, 10.0), 1e-12)?;
    let gap = (found.delta_x - exact.delta_x).abs();
    let ok = below == 0 && gap <= 1e-10;
    Ok((
        ok,
        format!(
            "widths below the floor: {below}, golden-section delta_x gap {gap:.3e} (tol 1e-10)"
        ),
    ))
}

/// Runs every check in a fixed order. The output is deterministic.
pub fn run_checks(fault: Option<Fault>) -> Vec<CheckOutcome> {
    vec![
        outcome("plane_wave_exactness", plane_wave_exactness(fault)),
        outcome("parseval", parseval()),
        outcome("norm_conservation", norm_conservation()),
        outcome("crank_nicolson_unitarity", crank_nicolson_unitarity()),
        outcome("massless_kg_equals_em", massless_reduction()),
        outcome("dominance_scaling", dominance_scaling()),
        outcome("nr_bound", nr_bound()),
        outcome("oscillator_bound", oscillator_bound()),
    ]
}
