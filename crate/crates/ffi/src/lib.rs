//! C ABI for `casimir-core`.
//!
//! All quantities are in natural units (`hbar = c = 1`). Cavities and atoms
//! are opaque handles created by `*_new` functions and released with the
//! matching `*_free`. Every computation returns a [`CasimirStatus`] and
//! writes its result through an out-pointer. On failure, a description is
//! available from [`casimir_last_error_message`] on the same thread.
//!
//! `CASIMIR_STATUS_NOT_CONVERGED` still writes the result, flagged as not
//! converged.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use casimir_core::lifshitz;
use casimir_core::model::{AtomModel, CavityConfig, PlasmaMirror, Transition};
use casimir_core::optics;
use casimir_core::plasmon::{self, SeriesTruncation};
use casimir_core::polder;
use casimir_core::quadrature::{QuadResult, QuadratureSpec};
use casimir_core::Error;

/// Status code returned by every fallible function.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CasimirStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    NotConverged = 3,
    /// A pole or singular point was hit (plasmon pole, static limit, ...).
    Singular = 4,
    /// Round-trip loop too close to 1, or a non-finite integrand.
    Numerical = 5,
    Panic = 6,
}

/// Value with its error estimate.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CasimirResult {
    pub value: f64,
    pub error_estimate: f64,
    pub converged: bool,
}

impl From<QuadResult> for CasimirResult {
    fn from(q: QuadResult) -> Self {
        CasimirResult {
            value: q.value,
            error_estimate: q.error_estimate,
            converged: q.converged,
        }
    }
}

/// Opaque cavity handle.
pub struct CasimirCavity(CavityConfig);

/// Opaque atom handle.
pub struct CasimirAtom(AtomModel);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> CasimirStatus {
    match e {
        Error::Invalid { .. } | Error::Parse(_) | Error::NonIdenticalMirrors(_) | Error::DegenerateMode => {
            CasimirStatus::InvalidArgument
        }
        Error::DivergentStaticLimit | Error::PlasmonPole { .. } | Error::LorentzianPole { .. } => {
            CasimirStatus::Singular
        }
        Error::Instability { .. } | Error::NonFiniteIntegrand { .. } | Error::Divergent { .. } => {
            CasimirStatus::Numerical
        }
    }
}

/// Runs `body`, translating errors and panics into status codes.
fn guard<F>(body: F) -> CasimirStatus
where
    F: FnOnce() -> Result<CasimirStatus, Error>,
{
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(status)) => status,
        Ok(Err(e)) => {
            let status = status_of(&e);
            set_last_error(e.to_string());
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            CasimirStatus::Panic
        }
    }
}

fn null_pointer(what: &str) -> CasimirStatus {
    set_last_error(format!("{what} is null"));
    CasimirStatus::NullPointer
}

fn spec(rel_tol: f64) -> Result<QuadratureSpec, Error> {
    let spec = QuadratureSpec::with_rel_tol(rel_tol);
    spec.validate()?;
    Ok(spec)
}

unsafe fn write_result(out: *mut CasimirResult, result: CasimirResult) -> CasimirStatus {
    *out = result;
    if result.converged {
        CasimirStatus::Ok
    } else {
        set_last_error("requested tolerance not reached".into());
        CasimirStatus::NotConverged
    }
}

/// Message for the last failure on this thread, or null. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn casimir_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn casimir_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// New cavity between mirrors with plasma frequencies `omega_p1`, `omega_p2`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn casimir_cavity_new(
    omega_p1: f64,
    omega_p2: f64,
    separation: f64,
    area: f64,
    out: *mut *mut CasimirCavity,
) -> CasimirStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        let cavity = CavityConfig::new(
            PlasmaMirror::new(omega_p1)?,
            PlasmaMirror::new(omega_p2)?,
            separation,
            area,
        )?;
        *out = Box::into_raw(Box::new(CasimirCavity(cavity)));
        Ok(CasimirStatus::Ok)
    })
}

/// Identical mirrors with `lambda_p = 1` and unit area, at `L / lambda_P`.
///
/// # Safety
/// `out` must be a valid pointer to writable storage for a handle.
#[no_mangle]
pub unsafe extern "C" fn casimir_cavity_new_reduced(l_over_lambda_p: f64, out: *mut *mut CasimirCavity) -> CasimirStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        *out = Box::into_raw(Box::new(CasimirCavity(CavityConfig::reduced(l_over_lambda_p)?)));
        Ok(CasimirStatus::Ok)
    })
}

/// Switches the cavity to perfect reflectors.
///
/// # Safety
/// `cavity` must be a live handle from `casimir_cavity_new*`.
#[no_mangle]
pub unsafe extern "C" fn casimir_cavity_set_perfect(cavity: *mut CasimirCavity) -> CasimirStatus {
    let Some(c) = cavity.as_mut() else {
        return null_pointer("cavity");
    };
    c.0 = c.0.with_perfect_reflection();
    CasimirStatus::Ok
}

/// # Safety
/// `cavity` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn casimir_cavity_free(cavity: *mut CasimirCavity) {
    if !cavity.is_null() {
        drop(Box::from_raw(cavity));
    }
}

/// Null checks and error translation shared by the cavity functions.
unsafe fn with_cavity<F>(cavity: *const CasimirCavity, out: *mut CasimirResult, body: F) -> CasimirStatus
where
    F: FnOnce(&CavityConfig) -> Result<CasimirResult, Error>,
{
    let Some(cavity) = cavity.as_ref() else {
        return null_pointer("cavity");
    };
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| Ok(write_result(out, body(&cavity.0)?)))
}

/// Force (positive = attraction).
///
/// # Safety
/// `cavity` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_force(cavity: *const CasimirCavity, rel_tol: f64, out: *mut CasimirResult) -> CasimirStatus {
    with_cavity(cavity, out, |c| {
        Ok(lifshitz::casimir_force(c, &spec(rel_tol)?)?.quad.scaled(c.area()).into())
    })
}

/// Energy.
///
/// # Safety
/// `cavity` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_energy(cavity: *const CasimirCavity, rel_tol: f64, out: *mut CasimirResult) -> CasimirStatus {
    with_cavity(cavity, out, |c| {
        Ok(lifshitz::casimir_energy(c, &spec(rel_tol)?)?.quad.scaled(c.area()).into())
    })
}

/// Force reduction factor relative to perfect mirrors.
///
/// # Safety
/// `cavity` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_eta_f(cavity: *const CasimirCavity, rel_tol: f64, out: *mut CasimirResult) -> CasimirStatus {
    with_cavity(cavity, out, |c| Ok(lifshitz::eta_f(c, &spec(rel_tol)?)?.into()))
}

/// Energy reduction factor relative to perfect mirrors.
///
/// # Safety
/// `cavity` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_eta_e(cavity: *const CasimirCavity, rel_tol: f64, out: *mut CasimirResult) -> CasimirStatus {
    with_cavity(cavity, out, |c| Ok(lifshitz::eta_e(c, &spec(rel_tol)?)?.into()))
}

/// Energy as the zero-point shift of the coupled surface plasmons
/// (identical mirrors, short distances).
///
/// # Safety
/// `cavity` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_plasmon_shift_energy(
    cavity: *const CasimirCavity,
    rel_tol: f64,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_cavity(cavity, out, |c| {
        Ok(plasmon::plasmon_shift_energy(c, &spec(rel_tol)?)?.quad.scaled(c.area()).into())
    })
}

/// Short-distance energy from the double-factorial series.
///
/// # Safety
/// `cavity` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_short_distance_energy(
    cavity: *const CasimirCavity,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_cavity(cavity, out, |c| {
        let r = plasmon::short_distance_energy_series(c, SeriesTruncation::default())?;
        Ok(r.quad.scaled(c.area()).into())
    })
}

/// Short-distance slope of the force reduction factor.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_alpha(tail_tol: f64, out: *mut f64) -> CasimirStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        *out = plasmon::alpha_coefficient(tail_tol)?.value;
        Ok(CasimirStatus::Ok)
    })
}

/// Surface plasmon frequency at transverse wavevector `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_plasmon_frequency(omega_p: f64, k: f64, out: *mut f64) -> CasimirStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        *out = optics::plasmon_frequency(k, &PlasmaMirror::new(omega_p)?)?;
        Ok(CasimirStatus::Ok)
    })
}

/// Brewster (TM zero) frequency at transverse wavevector `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_brewster_frequency(omega_p: f64, k: f64, out: *mut f64) -> CasimirStatus {
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        *out = optics::brewster_frequency(k, &PlasmaMirror::new(omega_p)?)?;
        Ok(CasimirStatus::Ok)
    })
}

/// New atom from `count` transitions (`energies[i]`, `weights[i]`).
///
/// # Safety
/// `energies` and `weights` must point to `count` doubles; `out` must be
/// valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_atom_new(
    energies: *const f64,
    weights: *const f64,
    count: usize,
    out: *mut *mut CasimirAtom,
) -> CasimirStatus {
    if energies.is_null() || weights.is_null() {
        return null_pointer("transition arrays");
    }
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| {
        let e = std::slice::from_raw_parts(energies, count);
        let w = std::slice::from_raw_parts(weights, count);
        let transitions = e
            .iter()
            .zip(w)
            .map(|(&e, &w)| Transition::new(e, w))
            .collect::<Result<Vec<_>, _>>()?;
        *out = Box::into_raw(Box::new(CasimirAtom(AtomModel::new(transitions)?)));
        Ok(CasimirStatus::Ok)
    })
}

/// # Safety
/// `atom` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn casimir_atom_free(atom: *mut CasimirAtom) {
    if !atom.is_null() {
        drop(Box::from_raw(atom));
    }
}

/// Null checks and error translation shared by the atom-pair functions.
unsafe fn with_atoms<F>(
    atom1: *const CasimirAtom,
    atom2: *const CasimirAtom,
    out: *mut CasimirResult,
    body: F,
) -> CasimirStatus
where
    F: FnOnce(&AtomModel, &AtomModel) -> Result<CasimirResult, Error>,
{
    let (Some(a), Some(b)) = (atom1.as_ref(), atom2.as_ref()) else {
        return null_pointer("atom");
    };
    if out.is_null() {
        return null_pointer("out");
    }
    guard(|| Ok(write_result(out, body(&a.0, &b.0)?)))
}

/// Full Casimir-Polder energy.
///
/// # Safety
/// `atom1` and `atom2` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_cp_energy(
    atom1: *const CasimirAtom,
    atom2: *const CasimirAtom,
    separation: f64,
    rel_tol: f64,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_atoms(atom1, atom2, out, |a, b| {
        Ok(polder::cp_energy(a, b, separation, &spec(rel_tol)?)?.into())
    })
}

/// Large-distance (retarded) limit of the Casimir-Polder energy.
///
/// # Safety
/// `atom1` and `atom2` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_cp_retarded(
    atom1: *const CasimirAtom,
    atom2: *const CasimirAtom,
    separation: f64,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_atoms(atom1, atom2, out, |a, b| {
        Ok(QuadResult::analytic(polder::cp_retarded(a, b, separation)?).into())
    })
}

/// London energy by quadrature.
///
/// # Safety
/// `atom1` and `atom2` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_london_energy(
    atom1: *const CasimirAtom,
    atom2: *const CasimirAtom,
    separation: f64,
    rel_tol: f64,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_atoms(atom1, atom2, out, |a, b| {
        Ok(polder::london_energy(a, b, separation, &spec(rel_tol)?)?.into())
    })
}

/// London energy in closed form.
///
/// # Safety
/// `atom1` and `atom2` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_london_sum(
    atom1: *const CasimirAtom,
    atom2: *const CasimirAtom,
    separation: f64,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_atoms(atom1, atom2, out, |a, b| {
        Ok(QuadResult::analytic(polder::london_sum(a, b, separation)?).into())
    })
}

/// Ratio of the Casimir-Polder energy to its retarded limit.
///
/// # Safety
/// `atom1` and `atom2` must be live handles and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn casimir_eta_cp(
    atom1: *const CasimirAtom,
    atom2: *const CasimirAtom,
    separation: f64,
    rel_tol: f64,
    out: *mut CasimirResult,
) -> CasimirStatus {
    with_atoms(atom1, atom2, out, |a, b| {
        Ok(polder::eta_cp_pair(a, b, separation, &spec(rel_tol)?)?.into())
    })
}
