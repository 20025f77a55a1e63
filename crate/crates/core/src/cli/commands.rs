use std::collections::BTreeMap;
use std::f64::consts::TAU;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::config::{
    fmt_f64, Branch, ConfigError, Family, Initial, PotentialKind, RunConfig, Scheme,
};
use super::{CliError, Fault};
use crate::dispersion::{
    group_velocity, kinematic_map, nr_expansion_error, omega_of_k, planewave_sample, EquationKind,
    PlaneWaveMode,
};
use crate::error::{Error, Result};
use crate::model::{
    dft, idft, reduced_phase, Complex64, GaussianPacketSpec, Grid1D, PhysicalConstants, TimeSpec,
    WaveField,
};
use crate::nrlimit::{
    dominance_terms_mode, kg_vs_schrodinger, kg_vs_schrodinger_field, mode_deviation_prediction,
    snapshot_steps, NrLimitReport,
};
use crate::optimize::loglog_slope;
use crate::oscillator::{
    imaginary_time_ground_state, minimize_bound_analytic, minimize_bound_numeric,
    OscillatorProblem, RelaxationSettings,
};
use crate::propagator::{
    crank_nicolson_evolve, gaussian_packet, harmonic_ground_state, packet_width,
    positive_branch_init, split_step_evolve, Diagnostics, Potential, SchrodingerSpectral,
    SecondOrderSpectral, SecondOrderState, Snapshot,
};

pub(crate) struct Output {
    dir: PathBuf,
}

impl Output {
    pub(crate) fn create(dir: &Path) -> Result<Self, CliError> {
        std::fs::create_dir_all(dir).map_err(|source| CliError::Io {
            path: dir.to_path_buf(),
            source,
        })?;
        Ok(Self {
            dir: dir.to_path_buf(),
        })
    }

    pub(crate) fn write(&self, name: &str, contents: &str) -> Result<(), CliError> {
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(|source| CliError::Io { path, source })
    }
}

fn invalid(key: &str, message: impl Into<String>) -> CliError {
    CliError::Config(ConfigError::for_key(key, message))
}

fn constants(cfg: &RunConfig) -> Result<PhysicalConstants> {
    PhysicalConstants::new(cfg.hbar, cfg.c)
}

fn grid(cfg: &RunConfig) -> Result<Grid1D> {
    Grid1D::new(cfg.n_points, cfg.length)
}

fn potential(cfg: &RunConfig, grid: &Grid1D) -> Potential {
    match cfg.potential {
        PotentialKind::None => Potential::zero(grid),
        PotentialKind::Constant => Potential::constant(grid, cfg.v0),
        PotentialKind::Harmonic => Potential::harmonic(grid, cfg.m, cfg.omega_c, cfg.x_c),
    }
}

fn equation(cfg: &RunConfig, grid: &Grid1D) -> Result<EquationKind, CliError> {
    let eq = match cfg.family {
        Family::ClassicalWave => EquationKind::ClassicalWave { v: cfg.v },
        Family::Electromagnetic => EquationKind::Electromagnetic,
        Family::KleinGordon => EquationKind::KleinGordon { m: cfg.m },
        Family::SchrodingerFree => {
            if cfg.potential != PotentialKind::None {
                return Err(invalid(
                    "potential",
                    "schrodinger_free takes no potential; use family = schrodinger_potential",
                ));
            }
            EquationKind::SchrodingerFree { m: cfg.m }
        }
        Family::SchrodingerPotential => EquationKind::SchrodingerPotential {
            m: cfg.m,
            potential: potential(cfg, grid),
        },
    };
    eq.validate()?;
    Ok(eq)
}

fn csv_row(out: &mut String, cells: &[String]) {
    out.push_str(&cells.join(","));
    out.push('\n');
}

pub(crate) fn dispersion(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let consts = constants(cfg)?;
    let grid = grid(cfg)?;
    let eq = equation(cfg, &grid)?;
    if cfg.k_count == 0 {
        return Err(invalid("k_count", "must be at least 1"));
    }
    let massive = matches!(
        cfg.family,
        Family::KleinGordon | Family::SchrodingerFree | Family::SchrodingerPotential
    );
    let mut csv = String::from("family,k,omega,group_velocity,p,E,nr_gap,nr_bound\n");
    for i in 0..cfg.k_count {
        let k = if cfg.k_count == 1 {
            cfg.k_start
        } else {
            cfg.k_start + (cfg.k_stop - cfg.k_start) * i as f64 / (cfg.k_count - 1) as f64
        };
        let omega = omega_of_k(&eq, k, &consts)?;
        let vg = group_velocity(&eq, k, &consts)?;
        let pair = kinematic_map(k, omega, &consts);
        let (gap, bound) = if massive {
            let nr = nr_expansion_error(cfg.m, k, &consts)?;
            (fmt_f64(nr.exact_gap), fmt_f64(nr.next_term_bound))
        } else {
            (String::new(), String::new())
        };
        csv_row(
            &mut csv,
            &[
                eq.name().to_string(),
                fmt_f64(k),
                fmt_f64(omega),
                fmt_f64(vg),
                fmt_f64(pair.p),
                fmt_f64(pair.energy),
                gap,
                bound,
            ],
        );
    }
    out.write("dispersion.csv", &csv)
}

/// Gaussian-enveloped spectrum around `k0` with seeded random phases,
/// centred on `x0` and normalized.
fn random_field(cfg: &RunConfig, grid: &Grid1D) -> Result<WaveField> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut spec = dft(&WaveField::zeros(*grid));
    let ks = spec.wavenumbers();
    for (z, k) in spec.modes_mut().iter_mut().zip(ks) {
        let envelope = (-0.5 * ((k - cfg.k0) * cfg.sigma).powi(2)).exp();
        let phase: f64 = rng.gen_range(0.0..TAU);
        *z = Complex64::from_polar(envelope, phase - k * cfg.x0);
    }
    idft(&spec).normalized()
}

fn initial_field(cfg: &RunConfig, grid: &Grid1D, consts: &PhysicalConstants) -> Result<WaveField> {
    match cfg.initial {
        Initial::Gaussian => {
            let spec = GaussianPacketSpec::new(cfg.x0, cfg.k0, cfg.sigma)?;
            Ok(gaussian_packet(&spec, grid, true))
        }
        Initial::Mode => {
            let amplitude = Complex64::new(grid.length().sqrt().recip(), 0.0);
            let mode = PlaneWaveMode {
                amplitude,
                k: cfg.k0,
                omega: 0.0,
            };
            planewave_sample(&mode, grid, 0.0)
        }
        Initial::Ground => {
            crate::model::positive("omega_c", cfg.omega_c)?;
            crate::model::positive("m", cfg.m)?;
            Ok(harmonic_ground_state(
                grid,
                cfg.m,
                cfg.omega_c,
                consts,
                cfg.x_c,
            ))
        }
        Initial::Random => random_field(cfg, grid),
    }
}

/// Snapshots of a closed-form propagation `field_at(t)`.
fn sample_snapshots(cfg: &RunConfig, field_at: impl Fn(f64) -> WaveField) -> Result<Vec<Snapshot>> {
    snapshot_steps(cfg.n_steps, cfg.snapshot_every)
        .into_iter()
        .map(|step| {
            let t = step as f64 * cfg.dt;
            let field = field_at(t);
            if !field.is_finite() {
                return Err(Error::NonFinite { step });
            }
            Ok(Snapshot { step, t, field })
        })
        .collect()
}

fn evolve_snapshots(cfg: &RunConfig, fault: Option<Fault>) -> Result<Vec<Snapshot>, CliError> {
    let consts = constants(cfg)?;
    let grid = grid(cfg)?;
    let eq = equation(cfg, &grid)?;
    let mut psi0 = initial_field(cfg, &grid, &consts)?;
    if fault == Some(Fault::Nonfinite) {
        let mut samples = psi0.into_samples();
        samples[grid.n_points() / 2] = Complex64::new(f64::NAN, 0.0);
        psi0 = WaveField::from_raw(grid, samples);
    }
    if !(cfg.dt.is_finite() && cfg.dt > 0.0) {
        return Err(invalid("dt", "must be finite and > 0"));
    }

    if eq.is_second_order() {
        if cfg.scheme != Scheme::Spectral {
            return Err(invalid(
                "scheme",
                format!("{} is evolved with scheme = spectral only", eq.name()),
            ));
        }
        let state0 = match cfg.branch {
            Branch::Positive => positive_branch_init(&psi0, &eq, &consts)?,
            Branch::Rest => SecondOrderState::at_rest(psi0),
        };
        let prop = SecondOrderSpectral::new(&state0, &eq, &consts)?;
        return Ok(sample_snapshots(cfg, |t| prop.psi_at(t))?);
    }

    let pot = match &eq {
        EquationKind::SchrodingerPotential { potential, .. } => potential.clone(),
        _ => Potential::zero(&grid),
    };
    match cfg.scheme {
        Scheme::Spectral => {
            let v0 = pot.constant_value().ok_or_else(|| {
                invalid(
                    "scheme",
                    "spectral needs a constant potential; use split_step",
                )
            })?;
            let prop = SchrodingerSpectral::new(&psi0, cfg.m, &consts)?;
            let phase = |t: f64| Complex64::from_polar(1.0, -reduced_phase(v0 / consts.hbar, t));
            Ok(sample_snapshots(cfg, |t| prop.at(t).scaled(phase(t)))?)
        }
        Scheme::SplitStep | Scheme::CrankNicolson => {
            if cfg.n_steps == 0 {
                if !psi0.is_finite() {
                    return Err(Error::NonFinite { step: 0 }.into());
                }
                return Ok(vec![Snapshot {
                    step: 0,
                    t: 0.0,
                    field: psi0,
                }]);
            }
            let time = TimeSpec::new(cfg.dt, cfg.n_steps)?;
            let result = if cfg.scheme == Scheme::SplitStep {
                split_step_evolve(&psi0, cfg.m, &pot, &consts, &time, cfg.snapshot_every)?
            } else {
                crank_nicolson_evolve(&psi0, cfg.m, &pot, &consts, &time, cfg.snapshot_every)?
            };
            Ok(result.snapshots)
        }
    }
}

pub(crate) fn evolve(cfg: &RunConfig, out: &Output, fault: Option<Fault>) -> Result<(), CliError> {
    let snapshots = evolve_snapshots(cfg, fault)?;
    let mut summary = String::from("t,norm,centroid,width\n");
    for snap in &snapshots {
        let d = Diagnostics::of(snap.t, &snap.field);
        csv_row(
            &mut summary,
            &[
                fmt_f64(d.t),
                fmt_f64(d.norm),
                fmt_f64(d.centroid),
                fmt_f64(d.width),
            ],
        );
        let mut csv = String::from("t,x,re_psi,im_psi,abs2\n");
        let grid = snap.field.grid();
        for (j, z) in snap.field.samples().iter().enumerate() {
            csv_row(
                &mut csv,
                &[
                    fmt_f64(snap.t),
                    fmt_f64(grid.x(j)),
                    fmt_f64(z.re),
                    fmt_f64(z.im),
                    fmt_f64(z.norm_sqr()),
                ],
            );
        }
        out.write(&format!("snapshot_{:06}.csv", snap.step), &csv)?;
    }
    out.write("summary.csv", &summary)
}

#[derive(Serialize)]
struct LadderEntry {
    c: f64,
    times: Vec<f64>,
    deviation: Vec<f64>,
    dominance_ratio: Vec<f64>,
    final_deviation: f64,
    /// Per-mode dominance ratio at `k0`.
    mode_dominance_ratio: f64,
    /// `2 |sin(gap t / 2)|` at `k0`; present for `initial = mode`.
    predicted_deviation: Option<Vec<f64>>,
}

#[derive(Serialize)]
struct Fit {
    deviation_exponent: f64,
    dominance_exponent: f64,
    mode_dominance_exponent: f64,
}

#[derive(Serialize)]
struct NrLimitDocument {
    scenario: String,
    config: BTreeMap<&'static str, String>,
    ladder: Vec<LadderEntry>,
    fit: Fit,
}

fn config_tree(cfg: &RunConfig) -> BTreeMap<&'static str, String> {
    RunConfig::KEYS
        .iter()
        .map(|&k| (k, cfg.get(k).expect("listed key")))
        .collect()
}

fn to_json(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    text
}

pub(crate) fn nrlimit(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    if cfg.c_ladder.len() < 2 {
        return Err(invalid("c_ladder", "needs at least two values"));
    }
    let base = constants(cfg)?;
    let ladder: Vec<PhysicalConstants> = cfg
        .c_ladder
        .iter()
        .map(|&c| base.with_c(c))
        .collect::<Result<_>>()?;
    let grid = grid(cfg)?;
    let time = TimeSpec::new(cfg.dt, cfg.n_steps)?;
    let psi0 = initial_field(cfg, &grid, &base)?;
    let run = |consts: &PhysicalConstants| -> Result<NrLimitReport> {
        match cfg.initial {
            Initial::Gaussian => {
                let spec = GaussianPacketSpec::new(cfg.x0, cfg.k0, cfg.sigma)?;
                kg_vs_schrodinger(&spec, &grid, cfg.m, consts, &time, cfg.snapshot_every)
            }
            _ => kg_vs_schrodinger_field(&psi0, cfg.m, consts, &time, cfg.snapshot_every),
        }
    };
    let reports: Vec<Result<NrLimitReport>> = std::thread::scope(|s| {
        let handles: Vec<_> = ladder.iter().map(|c| s.spawn(|| run(c))).collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("ladder worker panicked"))
            .collect()
    });

    let mut entries = Vec::with_capacity(reports.len());
    let mut csv = String::from("c,t,deviation,eq18_ratio\n");
    for (consts, report) in ladder.iter().zip(reports) {
        let report = report?;
        for ((t, dev), ratio) in report
            .times
            .iter()
            .zip(&report.deviation)
            .zip(&report.dominance_ratio)
        {
            csv_row(
                &mut csv,
                &[
                    fmt_f64(consts.c),
                    fmt_f64(*t),
                    fmt_f64(*dev),
                    fmt_f64(*ratio),
                ],
            );
        }
        let predicted_deviation = match cfg.initial {
            Initial::Mode => Some(
                report
                    .times
                    .iter()
                    .map(|&t| mode_deviation_prediction(cfg.k0, cfg.m, consts, t))
                    .collect::<Result<_>>()?,
            ),
            _ => None,
        };
        entries.push(LadderEntry {
            c: consts.c,
            final_deviation: report.final_deviation(),
            mode_dominance_ratio: dominance_terms_mode(cfg.k0, cfg.m, consts)?.ratio,
            times: report.times,
            deviation: report.deviation,
            dominance_ratio: report.dominance_ratio,
            predicted_deviation,
        });
    }
    let cs: Vec<f64> = entries.iter().map(|e| e.c).collect();
    let series = |f: fn(&LadderEntry) -> f64| entries.iter().map(f).collect::<Vec<_>>();
    let fit = Fit {
        deviation_exponent: loglog_slope(&cs, &series(|e| e.final_deviation)),
        dominance_exponent: loglog_slope(&cs, &series(|e| *e.dominance_ratio.last().unwrap())),
        mode_dominance_exponent: loglog_slope(&cs, &series(|e| e.mode_dominance_ratio)),
    };
    let doc = NrLimitDocument {
        scenario: cfg.scenario.clone(),
        config: config_tree(cfg),
        ladder: entries,
        fit,
    };
    out.write("nrlimit.csv", &csv)?;
    out.write("nrlimit.json", &to_json(&doc))
}

#[derive(Serialize)]
struct OscillatorRow {
    method: &'static str,
    delta_x: f64,
    energy: f64,
    delta_x_gap: f64,
    energy_gap: f64,
}

#[derive(Serialize)]
struct OscillatorDocument {
    scenario: String,
    config: BTreeMap<&'static str, String>,
    rows: Vec<OscillatorRow>,
    imaginary_time_iterations: usize,
}

pub(crate) fn oscillator(cfg: &RunConfig, out: &Output) -> Result<(), CliError> {
    let consts = constants(cfg)?;
    let problem = OscillatorProblem::new(cfg.m, cfg.omega_c, consts)?;
    let grid = grid(cfg)?;
    let analytic = minimize_bound_analytic(&problem);
    let numeric =
        minimize_bound_numeric(&problem, (cfg.bracket_lo, cfg.bracket_hi), cfg.golden_tol)?;
    let settings = RelaxationSettings {
        tau_step: cfg.tau,
        max_iters: cfg.max_iters,
        energy_tol: cfg.energy_tol,
    };
    let ground = imaginary_time_ground_state(&problem, &grid, &settings)?;
    let ground_width = packet_width(&ground.psi)?;

    let row = |method, delta_x: f64, energy: f64| OscillatorRow {
        method,
        delta_x,
        energy,
        delta_x_gap: (delta_x - analytic.delta_x).abs(),
        energy_gap: (energy - analytic.energy).abs(),
    };
    let rows = vec![
        row("analytic", analytic.delta_x, analytic.energy),
        row("golden_section", numeric.delta_x, numeric.energy),
        row("imaginary_time", ground_width, ground.energy),
    ];
    let mut csv = String::from("method,delta_x,energy\n");
    for r in &rows {
        csv_row(
            &mut csv,
            &[r.method.to_string(), fmt_f64(r.delta_x), fmt_f64(r.energy)],
        );
    }
    let doc = OscillatorDocument {
        scenario: cfg.scenario.clone(),
        config: config_tree(cfg),
        rows,
        imaginary_time_iterations: ground.iterations,
    };
    out.write("oscillator.csv", &csv)?;
    out.write("oscillator.json", &to_json(&doc))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_field_depends_only_on_seed() {
        let cfg = RunConfig {
            initial: Initial::Random,
            seed: 7,
            ..RunConfig::default()
        };
        let g = grid(&cfg).unwrap();
        let c = constants(&cfg).unwrap();
        let a = initial_field(&cfg, &g, &c).unwrap();
        assert_eq!(a, initial_field(&cfg, &g, &c).unwrap());
        let other = RunConfig { seed: 8, ..cfg };
        assert_ne!(a, initial_field(&other, &g, &c).unwrap());
    }

    #[test]
    fn free_family_rejects_potential() {
        let cfg = RunConfig {
            potential: PotentialKind::Harmonic,
            ..RunConfig::default()
        };
        let g = grid(&cfg).unwrap();
        assert_eq!(equation(&cfg, &g).unwrap_err().exit_code(), 2);
    }
}
