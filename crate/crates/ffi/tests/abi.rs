use std::ffi::CStr;
use std::f64::consts::PI;
use std::ptr;

use casimir_ffi::*;

fn empty() -> CasimirResult {
    CasimirResult {
        value: f64::NAN,
        error_estimate: f64::NAN,
        converged: false,
    }
}

fn last_error() -> String {
    let p = casimir_last_error_message();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

#[test]
fn cavity_lifecycle_and_force() {
    unsafe {
        let mut cavity = ptr::null_mut();
        assert_eq!(casimir_cavity_new_reduced(1.0, &mut cavity), CasimirStatus::Ok);
        let mut r = empty();
        assert_eq!(casimir_eta_f(cavity, 1e-9, &mut r), CasimirStatus::Ok);
        assert!(r.converged);
        assert!((r.value - 0.523844784210).abs() < 1e-9);

        let mut e = empty();
        assert_eq!(casimir_eta_e(cavity, 1e-9, &mut e), CasimirStatus::Ok);
        assert!(e.value > r.value && e.value < 1.0);

        assert_eq!(casimir_cavity_set_perfect(cavity), CasimirStatus::Ok);
        assert_eq!(casimir_force(cavity, 1e-9, &mut r), CasimirStatus::Ok);
        assert!((r.value / (PI * PI / 240.0) - 1.0).abs() < 1e-6);
        assert_eq!(casimir_energy(cavity, 1e-9, &mut r), CasimirStatus::Ok);
        assert!((r.value / (-PI * PI / 720.0) - 1.0).abs() < 1e-6);
        casimir_cavity_free(cavity);
        casimir_cavity_free(ptr::null_mut());
    }
}

#[test]
fn invalid_arguments_and_nulls() {
    unsafe {
        let mut cavity = ptr::null_mut();
        assert_eq!(
            casimir_cavity_new(0.0, 1.0, 1.0, 1.0, &mut cavity),
            CasimirStatus::InvalidArgument
        );
        assert!(cavity.is_null());
        assert!(last_error().contains("omega_p"));
        assert_eq!(casimir_cavity_new_reduced(1.0, ptr::null_mut()), CasimirStatus::NullPointer);
        let mut r = empty();
        assert_eq!(casimir_force(ptr::null(), 1e-9, &mut r), CasimirStatus::NullPointer);

        assert_eq!(casimir_cavity_new_reduced(1.0, &mut cavity), CasimirStatus::Ok);
        assert_eq!(casimir_force(cavity, 0.0, &mut r), CasimirStatus::InvalidArgument);
        assert_eq!(casimir_force(cavity, 1e-9, ptr::null_mut()), CasimirStatus::NullPointer);
        casimir_cavity_free(cavity);

        let mut w = 0.0;
        assert_eq!(casimir_plasmon_frequency(-1.0, 1.0, &mut w), CasimirStatus::InvalidArgument);
    }
}

#[test]
fn short_distance_routes_agree() {
    unsafe {
        let mut cavity = ptr::null_mut();
        assert_eq!(casimir_cavity_new_reduced(0.01, &mut cavity), CasimirStatus::Ok);
        let (mut a, mut b) = (empty(), empty());
        assert_eq!(casimir_plasmon_shift_energy(cavity, 1e-12, &mut a), CasimirStatus::Ok);
        assert_eq!(casimir_short_distance_energy(cavity, &mut b), CasimirStatus::Ok);
        assert!((a.value / b.value - 1.0).abs() < 1e-10);
        casimir_cavity_free(cavity);

        let mut two = ptr::null_mut();
        assert_eq!(casimir_cavity_new(1.0, 2.0, 0.1, 1.0, &mut two), CasimirStatus::Ok);
        assert_eq!(casimir_short_distance_energy(two, &mut b), CasimirStatus::InvalidArgument);
        casimir_cavity_free(two);

        let mut alpha = 0.0;
        assert_eq!(casimir_alpha(1e-14, &mut alpha), CasimirStatus::Ok);
        assert!((alpha - 1.193_344_052_279_464).abs() < 1e-12);
    }
}

#[test]
fn plasmon_and_brewster() {
    let wp = 2.0 * PI;
    let (mut w, mut b) = (0.0, 0.0);
    unsafe {
        assert_eq!(casimir_plasmon_frequency(wp, 100.0 * wp, &mut w), CasimirStatus::Ok);
        assert_eq!(casimir_brewster_frequency(wp, 100.0 * wp, &mut b), CasimirStatus::Ok);
    }
    assert!((w / (wp / 2f64.sqrt()) - 1.0).abs() < 1e-3);
    assert!(b > 100.0 * wp);
}

#[test]
fn atoms() {
    unsafe {
        let e = [1.0, 3.0];
        let w = [1.0, 0.5];
        let mut a = ptr::null_mut();
        assert_eq!(casimir_atom_new(e.as_ptr(), w.as_ptr(), 2, &mut a), CasimirStatus::Ok);
        let (mut q, mut s) = (empty(), empty());
        assert_eq!(casimir_london_energy(a, a, 0.5, 1e-12, &mut q), CasimirStatus::Ok);
        assert_eq!(casimir_london_sum(a, a, 0.5, &mut s), CasimirStatus::Ok);
        assert!((q.value / s.value - 1.0).abs() < 1e-10);

        let (mut cp, mut ret, mut eta) = (empty(), empty(), empty());
        let far = 100.0 * 2.0 * PI;
        assert_eq!(casimir_cp_energy(a, a, far, 1e-10, &mut cp), CasimirStatus::Ok);
        assert_eq!(casimir_cp_retarded(a, a, far, &mut ret), CasimirStatus::Ok);
        assert_eq!(casimir_eta_cp(a, a, far, 1e-10, &mut eta), CasimirStatus::Ok);
        assert!((cp.value / ret.value - eta.value).abs() < 1e-9);
        assert!(eta.value > 0.98 && eta.value <= 1.0);

        let zero = [0.0];
        let mut bad = ptr::null_mut();
        assert_eq!(
            casimir_atom_new(e.as_ptr(), zero.as_ptr(), 1, &mut bad),
            CasimirStatus::InvalidArgument
        );
        assert_eq!(casimir_atom_new(ptr::null(), w.as_ptr(), 1, &mut bad), CasimirStatus::NullPointer);
        casimir_atom_free(a);
    }
}

#[test]
fn version_string() {
    let v = unsafe { CStr::from_ptr(casimir_version()) }.to_str().unwrap();
    assert_eq!(v, env!("CARGO_PKG_VERSION"));
}
