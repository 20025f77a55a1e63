use std::f64::consts::PI;

use wavelab::dispersion::{
    group_velocity, omega_of_k, planewave_sample, EquationKind, PlaneWaveMode,
};
use wavelab::error::Error;
use wavelab::optimize::loglog_slope;
use wavelab::oscillator::{imaginary_time_ground_state, OscillatorProblem, RelaxationSettings};
use wavelab::propagator::{
    analytic_free_gaussian, centroid, crank_nicolson_evolve, evolve_schrodinger_spectral,
    evolve_second_order_spectral, gaussian_packet, positive_branch_init, split_step_evolve,
    Potential, SecondOrderSpectral, SecondOrderState,
};
use wavelab::{
    dft, l2_norm, Complex64, GaussianPacketSpec, Grid1D, PhysicalConstants, TimeSpec, WaveField,
};

const NAT: PhysicalConstants = PhysicalConstants { hbar: 1.0, c: 1.0 };

fn rel_l2(a: &WaveField, b: &WaveField) -> f64 {
    a.distance(b).unwrap() / l2_norm(b)
}

/// Evaluates the trigonometric interpolant of `f` at arbitrary points by a
/// direct sum over modes.
fn interpolate(f: &WaveField, x: f64) -> Complex64 {
    let spec = dft(f);
    let grid = f.grid();
    let n = grid.n_points() as f64;
    (0..grid.n_points())
        .map(|s| {
            let k = grid.wavenumber(s);
            spec.modes()[s] * Complex64::from_polar(1.0 / n.sqrt(), k * x)
        })
        .sum()
}

#[test]
fn spectral_schrodinger_identity_and_single_mode_phase() {
    let grid = Grid1D::new(64, 8.0).unwrap();
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(4.0, 1.2, 0.6).unwrap(),
        &grid,
        true,
    );
    let same = evolve_schrodinger_spectral(&psi, 1.0, &NAT, 0.0).unwrap();
    assert!(same.max_abs_diff(&psi).unwrap() < 1e-15);

    let eq = EquationKind::SchrodingerFree { m: 0.7 };
    let k = grid.mode_wavenumber(3);
    let mode = PlaneWaveMode::on_shell(&eq, Complex64::new(1.0, 0.0), k, &NAT).unwrap();
    let psi0 = planewave_sample(&mode, &grid, 0.0).unwrap();
    let t = 3.3;
    let psi_t = evolve_schrodinger_spectral(&psi0, 0.7, &NAT, t).unwrap();
    let phase = Complex64::from_polar(1.0, -mode.omega * t);
    for (a, b) in psi_t.samples().iter().zip(psi0.samples()) {
        assert!((a - b * phase).norm() < 1e-13);
        assert!((a.norm() - b.norm()).abs() < 1e-13);
    }
}

#[test]
fn spectral_schrodinger_matches_spreading_gaussian() {
    let grid = Grid1D::new(512, 64.0).unwrap();
    let l = grid.length();
    let spec = GaussianPacketSpec::new(l / 2.0, 2.0 * PI * 4.0 / l, l / 32.0).unwrap();
    let consts = PhysicalConstants::new(1.0, 1.0).unwrap();
    let m = 1.0;
    let t = 2.0 * m * spec.sigma * spec.sigma / consts.hbar;
    let psi0 = gaussian_packet(&spec, &grid, true);
    let numeric = evolve_schrodinger_spectral(&psi0, m, &consts, t).unwrap();
    let exact = analytic_free_gaussian(&spec, &grid, m, &consts, t, true).unwrap();
    let err = rel_l2(&numeric, &exact);
    assert!(err <= 1e-8, "relative L2 {err:e}");
    assert!((l2_norm(&numeric) - 1.0).abs() < 1e-12);
}

#[test]
fn composition_of_spectral_propagators() {
    let grid = Grid1D::new(128, 20.0).unwrap();
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(8.0, 1.0, 1.0).unwrap(),
        &grid,
        true,
    );
    let a = evolve_schrodinger_spectral(&psi, 1.0, &NAT, 0.7).unwrap();
    let ab = evolve_schrodinger_spectral(&a, 1.0, &NAT, 1.9).unwrap();
    let direct = evolve_schrodinger_spectral(&psi, 1.0, &NAT, 2.6).unwrap();
    assert!(ab.max_abs_diff(&direct).unwrap() < 1e-11);

    for eq in [
        EquationKind::KleinGordon { m: 1.3 },
        EquationKind::ClassicalWave { v: 0.8 },
        EquationKind::Electromagnetic,
    ] {
        let s0 = SecondOrderState::new(psi.clone(), psi.scaled(Complex64::new(0.2, -0.4))).unwrap();
        let s1 = evolve_second_order_spectral(&s0, &eq, &NAT, 0.7).unwrap();
        let s2 = evolve_second_order_spectral(&s1, &eq, &NAT, 1.9).unwrap();
        let s3 = evolve_second_order_spectral(&s0, &eq, &NAT, 2.6).unwrap();
        assert!(
            s2.psi.max_abs_diff(&s3.psi).unwrap() < 1e-11,
            "{}",
            eq.name()
        );
        assert!(
            s2.psi_dot.max_abs_diff(&s3.psi_dot).unwrap() < 1e-11,
            "{}",
            eq.name()
        );
    }
}

#[test]
fn second_order_positive_branch_is_single_phase() {
    let grid = Grid1D::new(32, 2.0 * PI).unwrap();
    let consts = PhysicalConstants::new(1.0, 2.0).unwrap();
    let eq = EquationKind::KleinGordon { m: 1.0 };
    let k = 3.0;
    let mode = PlaneWaveMode::on_shell(&eq, Complex64::new(0.5, 0.5), k, &consts).unwrap();
    let psi0 = planewave_sample(&mode, &grid, 0.0).unwrap();
    let state = positive_branch_init(&psi0, &eq, &consts).unwrap();
    let expect_dot = psi0.scaled(Complex64::new(0.0, -mode.omega));
    assert!(state.psi_dot.max_abs_diff(&expect_dot).unwrap() < 1e-13);
    let t = 4.2;
    let s = evolve_second_order_spectral(&state, &eq, &consts, t).unwrap();
    let exact = planewave_sample(&mode, &grid, t).unwrap();
    assert!(s.psi.max_abs_diff(&exact).unwrap() < 1e-13);
    let zero = evolve_second_order_spectral(&state, &eq, &consts, 0.0).unwrap();
    assert!(zero.psi.max_abs_diff(&state.psi).unwrap() < 1e-15);
    assert!(zero.psi_dot.max_abs_diff(&state.psi_dot).unwrap() < 1e-14);

    let z = positive_branch_init(&WaveField::zeros(grid), &eq, &consts).unwrap();
    assert_eq!(z, SecondOrderState::at_rest(WaveField::zeros(grid)));
}

#[test]
fn wrong_family_is_rejected() {
    let grid = Grid1D::new(16, 1.0).unwrap();
    let psi = WaveField::zeros(grid);
    let eq = EquationKind::SchrodingerFree { m: 1.0 };
    assert_eq!(
        positive_branch_init(&psi, &eq, &NAT),
        Err(Error::WrongEquationFamily("schrodinger_free"))
    );
    assert!(matches!(
        evolve_second_order_spectral(&SecondOrderState::at_rest(psi), &eq, &NAT, 1.0),
        Err(Error::WrongEquationFamily(_))
    ));
}

#[test]
fn dalembert_standing_start() {
    let grid = Grid1D::new(256, 40.0).unwrap();
    let f = gaussian_packet(
        &GaussianPacketSpec::new(20.0, 0.0, 1.5).unwrap(),
        &grid,
        false,
    );
    let eq = EquationKind::ClassicalWave { v: 1.0 };
    let t = 7.3;
    let s =
        evolve_second_order_spectral(&SecondOrderState::at_rest(f.clone()), &eq, &NAT, t).unwrap();
    for (j, x) in grid.positions().enumerate() {
        let expect = 0.5 * (interpolate(&f, x - t) + interpolate(&f, x + t));
        assert!((s.psi.samples()[j] - expect).norm() <= 1e-10);
    }
}

#[test]
fn per_mode_energy_conserved() {
    let grid = Grid1D::new(64, 12.0).unwrap();
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(6.0, 2.0, 1.0).unwrap(),
        &grid,
        true,
    );
    let state = SecondOrderState::new(psi.clone(), psi.scaled(Complex64::new(0.3, 0.1))).unwrap();
    for eq in [
        EquationKind::KleinGordon { m: 2.0 },
        EquationKind::ClassicalWave { v: 1.5 },
    ] {
        let prop = SecondOrderSpectral::new(&state, &eq, &NAT).unwrap();
        let e0 = prop.mode_energies(0.0);
        let e1 = prop.mode_energies(17.0);
        let ks = grid.wavenumbers();
        for ((a, b), k) in e0.iter().zip(&e1).zip(ks) {
            if omega_of_k(&eq, k, &NAT).unwrap() > 0.0 && *a > 1e-300 {
                assert!((a - b).abs() <= 1e-12 * a, "{} k={k}", eq.name());
            }
        }
    }
}

#[test]
fn zero_frequency_mode_drifts_linearly() {
    let grid = Grid1D::new(16, 1.0).unwrap();
    let one = WaveField::from_fn(grid, |_| Complex64::new(1.0, 0.0)).unwrap();
    let state = SecondOrderState::new(one.clone(), one.scaled(Complex64::new(0.5, 0.0))).unwrap();
    let s =
        evolve_second_order_spectral(&state, &EquationKind::Electromagnetic, &NAT, 4.0).unwrap();
    assert!(s
        .psi
        .samples()
        .iter()
        .all(|z| (z - Complex64::new(3.0, 0.0)).norm() < 1e-13));
}

#[test]
fn klein_gordon_positive_branch_keeps_norm() {
    let grid = Grid1D::new(256, 50.0).unwrap();
    let consts = PhysicalConstants::new(1.0, 3.0).unwrap();
    let eq = EquationKind::KleinGordon { m: 1.0 };
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(25.0, 1.5, 2.0).unwrap(),
        &grid,
        true,
    );
    let prop = SecondOrderSpectral::new(
        &positive_branch_init(&psi, &eq, &consts).unwrap(),
        &eq,
        &consts,
    )
    .unwrap();
    for t in [1.0, 5.0, 12.0] {
        assert!((l2_norm(&prop.psi_at(t)) - 1.0).abs() < 1e-10);
    }
}

#[test]
fn narrowband_packets_move_at_group_velocity() {
    let grid = Grid1D::new(1024, 256.0).unwrap();
    let consts = PhysicalConstants::default();
    let k0 = grid.mode_wavenumber(82);
    let spec = GaussianPacketSpec::new(64.0, k0, 8.0).unwrap();
    let psi = gaussian_packet(&spec, &grid, true);
    let t = 40.0;
    let c0 = centroid(&psi).unwrap();

    let schrodinger = EquationKind::SchrodingerFree { m: 1.0 };
    let moved = evolve_schrodinger_spectral(&psi, 1.0, &consts, t).unwrap();
    let v = (centroid(&moved).unwrap() - c0) / t;
    let vg = group_velocity(&schrodinger, k0, &consts).unwrap();
    assert!((v / vg - 1.0).abs() < 0.01, "{v} vs {vg}");

    let kg = EquationKind::KleinGordon { m: 1.0 };
    let state = positive_branch_init(&psi, &kg, &consts).unwrap();
    let moved = evolve_second_order_spectral(&state, &kg, &consts, t)
        .unwrap()
        .psi;
    let v = (centroid(&moved).unwrap() - c0) / t;
    let vg = group_velocity(&kg, k0, &consts).unwrap();
    assert!((v / vg - 1.0).abs() < 0.01, "{v} vs {vg}");
}

fn harmonic_setup(n: usize) -> (Grid1D, Potential, WaveField) {
    let grid = Grid1D::new(n, 20.0).unwrap();
    let potential = Potential::harmonic(&grid, 1.0, 1.0, 10.0);
    // displaced ground state: a coherent state that sloshes in the trap
    let spec = GaussianPacketSpec::new(11.0, 0.0, std::f64::consts::FRAC_1_SQRT_2).unwrap();
    let psi = gaussian_packet(&spec, &grid, true);
    (grid, potential, psi)
}

#[test]
fn split_step_free_limit_is_exact() {
    let grid = Grid1D::new(128, 30.0).unwrap();
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(12.0, 1.0, 1.5).unwrap(),
        &grid,
        true,
    );
    let time = TimeSpec::new(0.37, 20).unwrap();
    let r = split_step_evolve(&psi, 1.0, &Potential::zero(&grid), &NAT, &time, 5).unwrap();
    let exact = evolve_schrodinger_spectral(&psi, 1.0, &NAT, time.total_time()).unwrap();
    assert!(r.final_field.max_abs_diff(&exact).unwrap() < 1e-10);
    let times: Vec<f64> = r.snapshots.iter().map(|s| s.t).collect();
    assert_eq!(times.len(), 5);
    assert!(times.windows(2).all(|w| w[1] > w[0]));
    assert_eq!(r.snapshots[0].field, psi);
}

#[test]
fn split_step_constant_potential_is_global_phase() {
    let grid = Grid1D::new(128, 30.0).unwrap();
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(12.0, 1.0, 1.5).unwrap(),
        &grid,
        true,
    );
    let v0 = 0.8;
    let time = TimeSpec::new(0.05, 100).unwrap();
    let r = split_step_evolve(&psi, 1.0, &Potential::constant(&grid, v0), &NAT, &time, 0).unwrap();
    let t = time.total_time();
    let expect = evolve_schrodinger_spectral(&psi, 1.0, &NAT, t)
        .unwrap()
        .scaled(Complex64::from_polar(1.0, -v0 * t));
    assert!(r.final_field.max_abs_diff(&expect).unwrap() < 1e-10);
}

#[test]
fn split_step_ground_state_is_stationary() {
    let problem = OscillatorProblem::new(1.0, 1.0, NAT).unwrap();
    let grid = Grid1D::new(256, 20.0).unwrap();
    let ground =
        imaginary_time_ground_state(&problem, &grid, &RelaxationSettings::default()).unwrap();
    let time = TimeSpec::new(0.001, 2000).unwrap();
    let r = split_step_evolve(
        &ground.psi,
        1.0,
        &problem.potential(&grid),
        &NAT,
        &time,
        200,
    )
    .unwrap();
    let mut ts = Vec::new();
    let mut phases = Vec::new();
    let mut last = 0.0;
    for s in &r.snapshots {
        let overlap = ground.psi.inner(&s.field).unwrap();
        assert!((overlap.norm() - 1.0).abs() < 1e-6);
        // unwrap the phase along the series
        let mut p = overlap.arg();
        while p - last > PI {
            p -= 2.0 * PI;
        }
        while p - last < -PI {
            p += 2.0 * PI;
        }
        last = p;
        ts.push(s.t);
        phases.push(p);
    }
    let n = ts.len() as f64;
    let mt = ts.iter().sum::<f64>() / n;
    let mp = phases.iter().sum::<f64>() / n;
    let slope = ts
        .iter()
        .zip(&phases)
        .map(|(t, p)| (t - mt) * (p - mp))
        .sum::<f64>()
        / ts.iter().map(|t| (t - mt).powi(2)).sum::<f64>();
    assert!((slope + 0.5).abs() < 1e-5, "phase rate {slope}");
}

#[test]
fn split_step_norm_per_step() {
    let (grid, potential, psi) = harmonic_setup(256);
    let time = TimeSpec::new(0.01, 1000).unwrap();
    let r = split_step_evolve(&psi, 1.0, &potential, &NAT, &time, 1).unwrap();
    let worst = r
        .diagnostics
        .windows(2)
        .map(|w| (w[1].norm - w[0].norm).abs() / w[0].norm)
        .fold(0.0, f64::max);
    assert!(worst <= 1e-12, "{worst:e}");
    assert_eq!(*grid.wavenumbers().first().unwrap(), 0.0);
}

#[test]
fn split_step_is_second_order_in_dt() {
    let (_, potential, psi) = harmonic_setup(256);
    let t_final = 2.0;
    let run = |steps: usize| {
        let time = TimeSpec::new(t_final / steps as f64, steps).unwrap();
        split_step_evolve(&psi, 1.0, &potential, &NAT, &time, 0)
            .unwrap()
            .final_field
    };
    let reference = run(6400);
    let steps = [50usize, 100, 200, 400];
    let errs: Vec<f64> = steps
        .iter()
        .map(|&s| run(s).distance(&reference).unwrap())
        .collect();
    let dts: Vec<f64> = steps.iter().map(|&s| t_final / s as f64).collect();
    let p = loglog_slope(&dts, &errs);
    assert!((p - 2.0).abs() <= 0.15, "order {p}, errors {errs:?}");
}

#[test]
fn crank_nicolson_unitary_and_consistent() {
    let grid = Grid1D::new(128, 30.0).unwrap();
    let psi = gaussian_packet(
        &GaussianPacketSpec::new(15.0, 0.5, 1.5).unwrap(),
        &grid,
        true,
    );
    let time = TimeSpec::new(0.2, 1000).unwrap();
    let r = crank_nicolson_evolve(&psi, 1.0, &Potential::zero(&grid), &NAT, &time, 1).unwrap();
    let worst = r
        .diagnostics
        .windows(2)
        .map(|w| (w[1].norm - w[0].norm).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-10, "{worst:e}");

    let (grid, potential, psi) = harmonic_setup(128);
    for dt in [1e-3, 1e-4] {
        let one = crank_nicolson_evolve(
            &psi,
            1.0,
            &potential,
            &NAT,
            &TimeSpec::new(dt, 1).unwrap(),
            0,
        )
        .unwrap();
        let change = one.final_field.distance(&psi).unwrap();
        assert!(change < 50.0 * dt, "dt={dt}: {change}");
    }
    assert_eq!(grid.n_points(), 128);
}

#[test]
fn crank_nicolson_tracks_split_step_and_self_converges() {
    let t_final = 1.0;
    let run = |n: usize, steps: usize| {
        let (_, potential, psi) = harmonic_setup(n);
        let time = TimeSpec::new(t_final / steps as f64, steps).unwrap();
        let cn = crank_nicolson_evolve(&psi, 1.0, &potential, &NAT, &time, 0)
            .unwrap()
            .final_field;
        let ss = split_step_evolve(&psi, 1.0, &potential, &NAT, &time, 0)
            .unwrap()
            .final_field;
        (cn, ss)
    };
    let levels = [(128usize, 50usize), (256, 100), (512, 200), (1024, 400)];
    let sols: Vec<(WaveField, WaveField)> = levels.iter().map(|&(n, s)| run(n, s)).collect();
    let gaps: Vec<f64> = sols
        .iter()
        .map(|(cn, ss)| cn.distance(ss).unwrap())
        .collect();
    // moderate resolution: N = 512, dt = 5e-3
    assert!(gaps[2] <= 1e-3, "CN vs split-step {:e}", gaps[2]);
    for w in gaps.windows(2) {
        assert!((w[0] / w[1] - 4.0).abs() < 0.6, "{gaps:?}");
    }
    // successive-refinement differences on the shared coarse points
    let restrict = |fine: &WaveField, coarse: &WaveField| {
        let ratio = fine.len() / coarse.len();
        let sub: Vec<Complex64> = fine.samples().iter().step_by(ratio).copied().collect();
        WaveField::new(*coarse.grid(), sub)
            .unwrap()
            .distance(coarse)
            .unwrap()
    };
    let diffs: Vec<f64> = (0..3)
        .map(|i| restrict(&sols[i + 1].0, &sols[i].0))
        .collect();
    let hs = [1.0, 0.5, 0.25];
    let p = loglog_slope(&hs, &diffs);
    assert!((p - 2.0).abs() <= 0.15, "CN order {p}, diffs {diffs:?}");
}
