use std::ffi::CStr;
use std::ptr;

use wavelab_ffi::*;

const NAT: (f64, f64) = (1.0, 1.0);

fn eq(family: WlFamily, m: f64) -> WlEquation {
    WlEquation {
        family,
        m,
        v: 1.0,
        v0: 0.0,
    }
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(wl_last_error()) }
        .to_string_lossy()
        .into_owned()
}

#[test]
fn dispersion_values() {
    let mut w = 0.0;
    let st = unsafe { wl_omega(eq(WlFamily::KleinGordon, 1.0), 0.0, NAT.0, NAT.1, &mut w) };
    assert_eq!(st, WlStatus::Ok);
    assert_eq!(w, 1.0);
    assert!(last_error().is_empty());

    let st = unsafe { wl_omega(eq(WlFamily::SchrodingerFree, 1.0), 2.0, 1.0, 1.0, &mut w) };
    assert_eq!((st, w), (WlStatus::Ok, 2.0));

    let mut constant = eq(WlFamily::SchrodingerConstant, 1.0);
    constant.v0 = 0.5;
    unsafe { wl_omega(constant, 2.0, 1.0, 1.0, &mut w) };
    assert_eq!(w, 2.5);

    let mut vg = 0.0;
    let st =
        unsafe { wl_group_velocity(eq(WlFamily::SchrodingerFree, 1.0), 3.0, 1.0, 1.0, &mut vg) };
    assert_eq!((st, vg), (WlStatus::Ok, 3.0));
}

#[test]
fn errors_set_status_and_message() {
    let mut w = 0.0;
    let st = unsafe { wl_omega(eq(WlFamily::KleinGordon, -1.0), 1.0, 1.0, 1.0, &mut w) };
    assert_eq!(st, WlStatus::InvalidArgument);
    assert!(last_error().contains('m'), "{}", last_error());
    assert_eq!(w, 0.0, "out untouched on failure");

    let st = unsafe {
        wl_omega(
            eq(WlFamily::Electromagnetic, 0.0),
            1.0,
            1.0,
            1.0,
            ptr::null_mut(),
        )
    };
    assert_eq!(st, WlStatus::NullPointer);

    let mut f = ptr::null_mut();
    let st = unsafe { wl_field_gaussian(100, 10.0, 5.0, 0.0, 1.0, &mut f) };
    assert_eq!(st, WlStatus::InvalidArgument);
    assert!(f.is_null());
    assert!(last_error().contains("grid"));
}

#[test]
fn field_round_trip_and_spectral_evolution() {
    let n = 64;
    let re: Vec<f64> = (0..n).map(|j| (j as f64 * 0.3).cos()).collect();
    let im: Vec<f64> = (0..n).map(|j| (j as f64 * 0.2).sin()).collect();
    let mut f = ptr::null_mut();
    assert_eq!(
        unsafe { wl_field_new(n, 4.0, re.as_ptr(), im.as_ptr(), &mut f) },
        WlStatus::Ok
    );
    assert_eq!(unsafe { wl_field_len(f) }, n);

    let (mut r2, mut i2) = (vec![0.0; n], vec![0.0; n]);
    assert_eq!(
        unsafe { wl_field_copy(f, r2.as_mut_ptr(), i2.as_mut_ptr(), n - 1) },
        WlStatus::BufferTooSmall
    );
    assert_eq!(
        unsafe { wl_field_copy(f, r2.as_mut_ptr(), i2.as_mut_ptr(), n) },
        WlStatus::Ok
    );
    assert_eq!((r2, i2), (re, im));

    let mut g = ptr::null_mut();
    let st =
        unsafe { wl_evolve_spectral(f, eq(WlFamily::SchrodingerFree, 1.0), 1.0, 1.0, 0.7, &mut g) };
    assert_eq!(st, WlStatus::Ok);
    let (mut n0, mut n1) = (0.0, 0.0);
    unsafe {
        wl_field_norm(f, &mut n0);
        wl_field_norm(g, &mut n1);
    }
    assert!((n0 - n1).abs() < 1e-12);
    unsafe {
        wl_field_free(f);
        wl_field_free(g);
        wl_field_free(ptr::null_mut());
    }
}

#[test]
fn split_step_matches_spectral_without_potential() {
    let mut psi = ptr::null_mut();
    unsafe { wl_field_gaussian(128, 30.0, 12.0, 1.0, 1.5, &mut psi) };
    let (mut a, mut b) = (ptr::null_mut(), ptr::null_mut());
    let free = eq(WlFamily::SchrodingerFree, 1.0);
    unsafe {
        assert_eq!(
            wl_evolve_split_step(psi, 1.0, ptr::null(), 1.0, 1.0, 0.05, 40, &mut a),
            WlStatus::Ok
        );
        assert_eq!(
            wl_evolve_spectral(psi, free, 1.0, 1.0, 2.0, &mut b),
            WlStatus::Ok
        );
    }
    let read = |f| {
        let (mut re, mut im) = (vec![0.0; 128], vec![0.0; 128]);
        unsafe { wl_field_copy(f, re.as_mut_ptr(), im.as_mut_ptr(), 128) };
        (re, im)
    };
    let ((ra, ia), (rb, ib)) = (read(a), read(b));
    let diff = (0..128)
        .map(|j| (ra[j] - rb[j]).hypot(ia[j] - ib[j]))
        .fold(0.0, f64::max);
    assert!(diff < 1e-10, "{diff:e}");

    let nan = vec![f64::NAN; 128];
    let mut c = ptr::null_mut();
    let st = unsafe { wl_evolve_split_step(psi, 1.0, nan.as_ptr(), 1.0, 1.0, 0.05, 2, &mut c) };
    assert_eq!(st, WlStatus::InvalidArgument);
    unsafe {
        wl_field_free(psi);
        wl_field_free(a);
        wl_field_free(b);
    }
}

#[test]
fn nonrelativistic_quantities() {
    let (mut gap, mut bound) = (0.0, 0.0);
    unsafe { wl_nr_expansion_error(1.0, 1.0, 1.0, 10.0, &mut gap, &mut bound) };
    assert!(gap > 0.0 && gap <= bound);
    assert_eq!(bound, 1.0 / 800.0);

    let ratios: Vec<f64> = [10.0, 20.0]
        .iter()
        .map(|&c| {
            let (mut s, mut b, mut r) = (0.0, 0.0, 0.0);
            assert_eq!(
                unsafe { wl_dominance_ratio(1.0, 1.0, 1.0, c, &mut s, &mut b, &mut r) },
                WlStatus::Ok
            );
            assert_eq!(r, s / b);
            r
        })
        .collect();
    assert!((ratios[0] / ratios[1] - 16.0).abs() < 0.5);

    let mut report = ptr::null_mut();
    let st = unsafe {
        wl_kg_vs_schrodinger(
            256,
            64.0,
            24.0,
            1.0,
            2.0,
            1.0,
            1.0,
            20.0,
            0.05,
            40,
            10,
            &mut report,
        )
    };
    assert_eq!(st, WlStatus::Ok);
    let n = unsafe { wl_nr_report_len(report) };
    assert_eq!(n, 5);
    let (mut t, mut d) = (vec![0.0; n], vec![0.0; n]);
    let st =
        unsafe { wl_nr_report_copy(report, t.as_mut_ptr(), d.as_mut_ptr(), ptr::null_mut(), n) };
    assert_eq!(st, WlStatus::Ok);
    assert_eq!(t, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    assert_eq!(d[0], 0.0);
    assert!(d.windows(2).all(|w| w[1] > w[0]));
    unsafe { wl_nr_report_free(report) };
}

#[test]
fn oscillator_entry_points() {
    let mut e = 0.0;
    unsafe { wl_energy_bound(1.0, 1.0, 1.0, std::f64::consts::FRAC_1_SQRT_2, &mut e) };
    assert!((e - 0.5).abs() < 1e-15);
    let (mut dx, mut e_min) = (0.0, 0.0);
    let st = unsafe { wl_minimize_bound(1.0, 1.0, 1.0, 0.1, 10.0, 1e-12, &mut dx, &mut e_min) };
    assert_eq!(st, WlStatus::Ok);
    assert!((dx - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-10);

    let mut ground = ptr::null_mut();
    let st = unsafe {
        wl_ground_state(
            1.0,
            1.0,
            1.0,
            256,
            20.0,
            0.005,
            200_000,
            1e-12,
            &mut e,
            &mut ground,
        )
    };
    assert_eq!(st, WlStatus::Ok);
    assert!((e - 0.5).abs() < 1e-6);
    unsafe { wl_field_free(ground) };

    let st = unsafe {
        wl_ground_state(
            1.0,
            1.0,
            1.0,
            16,
            20.0,
            0.005,
            100,
            1e-12,
            &mut e,
            &mut ground,
        )
    };
    assert_eq!(st, WlStatus::GridTooCoarse);
    assert!(last_error().contains("n_points"));
}

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(wl_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}
