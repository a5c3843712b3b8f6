//! C ABI over `critpair`.
//!
//! Every fallible function returns a [`CpStatus`]; on failure the message is
//! kept in a thread-local slot readable through [`cp_last_error_message`].
//! Output arrays are caller-allocated; functions writing a variable number
//! of values take a capacity and report the required length.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use critpair::ensembles::{sample_iid_zero_poly, trial_seed, Density, EnsembleKind, EnsembleSpec, SeededRng};
use critpair::harness::{run, ExperimentConfig};
use critpair::rootfind::{count_critical_in_disk, critical_points_all, eigen_qr, newton_local_critical, ComplexMatrix};
use critpair::{ComplexScalar, Error, RootFormPoly};

/// Status code returned by every fallible entry point.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    PoleHit = 3,
    NotConverged = 4,
    NumericalFailure = 5,
    BufferTooSmall = 6,
    Config = 7,
    Io = 8,
    Panic = 9,
}

/// Complex number with the layout of C `double _Complex`.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CpComplex {
    pub re: f64,
    pub im: f64,
}

impl From<CpComplex> for ComplexScalar {
    fn from(z: CpComplex) -> Self {
        ComplexScalar::new(z.re, z.im)
    }
}

impl From<ComplexScalar> for CpComplex {
    fn from(z: ComplexScalar) -> Self {
        CpComplex { re: z.re, im: z.im }
    }
}

/// Zero density selector for [`cp_sample_iid_zeros`].
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpDensity {
    UniformDisk = 0,
    StdComplexGaussian = 1,
}

/// Opaque monic polynomial in root form.
pub struct CpPoly {
    inner: RootFormPoly,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn clear_last_error() {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::PoleHit { .. } => CpStatus::PoleHit,
        Error::AberthNotConverged(_)
        | Error::NotConverged { .. }
        | Error::LeftTrustRegion { .. }
        | Error::NoConvergence { .. } => CpStatus::NotConverged,
        Error::ContourTooClose { .. }
        | Error::NonIntegerWinding { .. }
        | Error::TraceMismatch { .. }
        | Error::NonFinite(_) => CpStatus::NumericalFailure,
        Error::Config(_) | Error::Json(_) => CpStatus::Config,
        Error::Io { .. } | Error::Csv(_) => CpStatus::Io,
        _ => CpStatus::InvalidArgument,
    }
}

struct Fail(CpStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CpStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> CpStatus {
    clear_last_error();
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CpStatus::Ok,
        Ok(Err(Fail(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("panic: {msg}"));
            CpStatus::Panic
        }
    }
}

unsafe fn slice_in<'a, T>(p: *const T, len: usize, what: &str) -> Result<&'a [T], Fail> {
    if len == 0 {
        return Ok(&[]);
    }
    if p.is_null() {
        return Err(null(what));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

unsafe fn write_out<T>(out: *mut T, value: T, what: &str) -> Result<(), Fail> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

/// Copies `values` into `out[..cap]` and stores the full length in `*len`.
unsafe fn write_array(values: &[ComplexScalar], out: *mut CpComplex, cap: usize, len: *mut usize) -> Result<(), Fail> {
    write_out(len, values.len(), "len")?;
    if values.len() > cap {
        return Err(Fail(
            CpStatus::BufferTooSmall,
            format!("need {} entries, capacity {cap}", values.len()),
        ));
    }
    if !values.is_empty() && out.is_null() {
        return Err(null("out"));
    }
    for (i, &v) in values.iter().enumerate() {
        out.add(i).write(v.into());
    }
    Ok(())
}

unsafe fn poly_ref<'a>(p: *const CpPoly) -> Result<&'a RootFormPoly, Fail> {
    p.as_ref().map(|p| &p.inner).ok_or_else(|| null("poly"))
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next call into the library on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn cp_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Builds `prod_k (z - zeros[k])`. Free with [`cp_poly_free`].
///
/// # Safety
/// `zeros` must point to `len` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_poly_new(zeros: *const CpComplex, len: usize, out: *mut *mut CpPoly) -> CpStatus {
    guard(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let zs = slice_in(zeros, len, "zeros")?.iter().map(|&z| z.into()).collect();
        let poly = Box::new(CpPoly {
            inner: RootFormPoly::new(zs)?,
        });
        out.write(Box::into_raw(poly));
        Ok(())
    })
}

/// Releases a polynomial; null is ignored.
///
/// # Safety
/// `poly` must come from [`cp_poly_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn cp_poly_free(poly: *mut CpPoly) {
    if !poly.is_null() {
        drop(Box::from_raw(poly));
    }
}

/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_poly_degree(poly: *const CpPoly, out: *mut usize) -> CpStatus {
    guard(|| write_out(out, poly_ref(poly)?.degree(), "out"))
}

/// Copies the zeros into `out[..cap]`; `*len` receives the degree.
///
/// # Safety
/// `poly` must be a live handle; `out` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn cp_poly_zeros(poly: *const CpPoly, out: *mut CpComplex, cap: usize, len: *mut usize) -> CpStatus {
    guard(|| write_array(poly_ref(poly)?.zeros(), out, cap, len))
}

/// `p(z) = exp(*log_modulus) * (*phase)`.
///
/// # Safety
/// `poly` must be a live handle; outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_poly_eval_log(
    poly: *const CpPoly,
    z: CpComplex,
    log_modulus: *mut f64,
    phase: *mut CpComplex,
) -> CpStatus {
    guard(|| {
        let v = poly_ref(poly)?.eval_log_polar(z.into());
        write_out(log_modulus, v.log_modulus, "log_modulus")?;
        write_out(phase, v.phase.into(), "phase")
    })
}

/// `h(z) = p'(z) / p(z)`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_poly_log_derivative(poly: *const CpPoly, z: CpComplex, out: *mut CpComplex) -> CpStatus {
    guard(|| {
        let h = poly_ref(poly)?.log_derivative(z.into())?;
        write_out(out, h.into(), "out")
    })
}

/// All `degree - 1` critical points.
///
/// # Safety
/// `poly` must be a live handle; `out` must hold `cap` values.
#[no_mangle]
pub unsafe extern "C" fn cp_critical_points(
    poly: *const CpPoly,
    tol: f64,
    max_iter: usize,
    out: *mut CpComplex,
    cap: usize,
    len: *mut usize,
) -> CpStatus {
    guard(|| {
        let report = critical_points_all(poly_ref(poly)?, tol, max_iter)?;
        write_array(&report.points, out, cap, len)
    })
}

/// Newton iteration on `h` from `seed`, confined to `|z - seed| <= trust_radius`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_newton_local(
    poly: *const CpPoly,
    seed: CpComplex,
    tol: f64,
    max_iter: usize,
    trust_radius: f64,
    out: *mut CpComplex,
) -> CpStatus {
    guard(|| {
        let z = newton_local_critical(poly_ref(poly)?, seed.into(), tol, max_iter, trust_radius)?;
        write_out(out, z.into(), "out")
    })
}

/// Number of critical points in the open disk `|z - center| < radius`.
///
/// # Safety
/// `poly` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_count_in_disk(
    poly: *const CpPoly,
    center: CpComplex,
    radius: f64,
    nodes: usize,
    out: *mut usize,
) -> CpStatus {
    guard(|| {
        let c = count_critical_in_disk(poly_ref(poly)?, center.into(), radius, nodes)?;
        write_out(out, c, "out")
    })
}

/// Cauchy-Stieltjes transform of the uniform law on the unit disk.
#[no_mangle]
pub extern "C" fn cp_cst_uniform_disk(z: CpComplex) -> CpComplex {
    critpair::cst::cst_uniform_disk(z.into()).into()
}

/// Cauchy-Stieltjes transform of the standard complex Gaussian.
#[no_mangle]
pub extern "C" fn cp_cst_gaussian(z: CpComplex) -> CpComplex {
    critpair::cst::cst_gaussian(z.into()).into()
}

/// Per-trial seed derived from a master seed.
#[no_mangle]
pub extern "C" fn cp_trial_seed(master_seed: u64, trial_index: u64) -> u64 {
    trial_seed(master_seed, trial_index)
}

/// Draws `n` i.i.d. zeros seeded by `seed` into `out[..n]`.
///
/// # Safety
/// `out` must hold `n` values.
#[no_mangle]
pub unsafe extern "C" fn cp_sample_iid_zeros(density: CpDensity, n: usize, seed: u64, out: *mut CpComplex) -> CpStatus {
    guard(|| {
        let d = match density {
            CpDensity::UniformDisk => Density::UniformDisk,
            CpDensity::StdComplexGaussian => Density::StdComplexGaussian,
        };
        let spec = EnsembleSpec::new(EnsembleKind::IidZeros, n, seed).with_density(d);
        let poly = sample_iid_zero_poly(&spec, &mut SeededRng::new(seed))?;
        let mut len = 0;
        write_array(poly.zeros(), out, n, &mut len)
    })
}

/// Eigenvalues of the row-major `dim x dim` matrix `a` into `out[..dim]`.
///
/// # Safety
/// `a` must hold `dim * dim` values and `out` must hold `dim`.
#[no_mangle]
pub unsafe extern "C" fn cp_eigen_qr(a: *const CpComplex, dim: usize, out: *mut CpComplex) -> CpStatus {
    guard(|| {
        let cells = dim
            .checked_mul(dim)
            .ok_or_else(|| Fail(CpStatus::InvalidArgument, format!("dimension {dim} overflows")))?;
        let entries = slice_in(a, cells, "a")?;
        let m = ComplexMatrix::from_fn(dim, |i, j| entries[i * dim + j].into());
        let eig = eigen_qr(&m)?;
        let mut len = 0;
        write_array(&eig, out, dim, &mut len)
    })
}

/// Runs the experiment described by a JSON config (same schema as the CLI
/// `--config` file). `*passed` is 0 when a selftest or cst-check criterion
/// failed.
///
/// # Safety
/// `config_json` must be a NUL-terminated UTF-8 string; `passed` may be null.
#[no_mangle]
pub unsafe extern "C" fn cp_run_json(config_json: *const c_char, passed: *mut i32) -> CpStatus {
    guard(|| {
        if config_json.is_null() {
            return Err(null("config_json"));
        }
        let text = CStr::from_ptr(config_json)
            .to_str()
            .map_err(|e| Fail(CpStatus::InvalidArgument, format!("config is not UTF-8: {e}")))?;
        let cfg = ExperimentConfig::from_json_str(text)?;
        let outcome = run(&cfg)?;
        if !passed.is_null() {
            passed.write(i32::from(outcome.passed));
        }
        Ok(())
    })
}
