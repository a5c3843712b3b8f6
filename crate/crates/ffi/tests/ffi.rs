use std::ffi::{CStr, CString};
use std::path::PathBuf;
use std::process::Command;
use std::ptr;

use critpair_ffi::*;

fn c(re: f64, im: f64) -> CpComplex {
    CpComplex { re, im }
}

fn new_poly(zeros: &[CpComplex]) -> *mut CpPoly {
    let mut p = ptr::null_mut();
    assert_eq!(unsafe { cp_poly_new(zeros.as_ptr(), zeros.len(), &mut p) }, CpStatus::Ok);
    assert!(!p.is_null());
    p
}

fn last_error() -> String {
    let m = cp_last_error_message();
    assert!(!m.is_null());
    unsafe { CStr::from_ptr(m) }.to_string_lossy().into_owned()
}

#[test]
fn poly_roundtrip() {
    let zs = [c(0.5, 0.0), c(-0.25, 0.5), c(0.0, -0.75), c(0.1, 0.1)];
    let p = new_poly(&zs);
    let mut deg = 0;
    assert_eq!(unsafe { cp_poly_degree(p, &mut deg) }, CpStatus::Ok);
    assert_eq!(deg, 4);
    let mut out = [CpComplex::default(); 4];
    let mut len = 0;
    assert_eq!(unsafe { cp_poly_zeros(p, out.as_mut_ptr(), 4, &mut len) }, CpStatus::Ok);
    assert_eq!(out, zs);

    let z = c(0.3, 0.2);
    let (mut lm, mut ph) = (0.0, CpComplex::default());
    assert_eq!(unsafe { cp_poly_eval_log(p, z, &mut lm, &mut ph) }, CpStatus::Ok);
    let direct = zs
        .iter()
        .map(|r| num_complex::Complex64::new(z.re - r.re, z.im - r.im))
        .product::<num_complex::Complex64>();
    let val = num_complex::Complex64::new(ph.re, ph.im) * lm.exp();
    assert!((val - direct).norm() <= 1e-14 * direct.norm());
    unsafe { cp_poly_free(p) };
}

#[test]
fn critical_points_and_buffer_sizes() {
    let zs = [c(-1.0, 0.0), c(1.0, 0.0), c(0.0, 2.0)];
    let p = new_poly(&zs);
    let mut len = 0;
    let mut small = [CpComplex::default(); 1];
    assert_eq!(
        unsafe { cp_critical_points(p, 1e-14, 500, small.as_mut_ptr(), 1, &mut len) },
        CpStatus::BufferTooSmall
    );
    assert_eq!(len, 2);
    let mut out = [CpComplex::default(); 2];
    assert_eq!(unsafe { cp_critical_points(p, 1e-14, 500, out.as_mut_ptr(), 2, &mut len) }, CpStatus::Ok);
    let mut h = CpComplex::default();
    for w in out {
        assert_eq!(unsafe { cp_poly_log_derivative(p, w, &mut h) }, CpStatus::Ok);
        assert!(h.re.hypot(h.im) < 1e-10);
    }
    assert!(cp_last_error_message().is_null());

    let mut count = 0;
    assert_eq!(unsafe { cp_count_in_disk(p, c(0.0, 0.0), 10.0, 512, &mut count) }, CpStatus::Ok);
    assert_eq!(count, 2);

    let mut z = CpComplex::default();
    assert_eq!(unsafe { cp_newton_local(p, out[0], 1e-14, 100, 0.1, &mut z) }, CpStatus::Ok);
    assert!((z.re - out[0].re).hypot(z.im - out[0].im) < 1e-12);
    unsafe { cp_poly_free(p) };
}

#[test]
fn errors_set_status_and_message() {
    let p = new_poly(&[c(0.0, 0.0), c(1.0, 0.0)]);
    let mut h = CpComplex::default();
    assert_eq!(unsafe { cp_poly_log_derivative(p, c(1.0, 0.0), &mut h) }, CpStatus::PoleHit);
    assert!(last_error().contains("zero"));
    assert_eq!(unsafe { cp_poly_degree(ptr::null(), ptr::null_mut()) }, CpStatus::NullPointer);
    assert!(last_error().contains("null"));
    unsafe { cp_poly_free(p) };
    unsafe { cp_poly_free(ptr::null_mut()) };

    let dup = new_poly(&[c(0.5, 0.5), c(0.5, 0.5), c(0.0, 0.0)]);
    let mut out = [CpComplex::default(); 2];
    let mut len = 0;
    assert_eq!(
        unsafe { cp_critical_points(dup, 1e-14, 500, out.as_mut_ptr(), 2, &mut len) },
        CpStatus::InvalidArgument
    );
    assert!(last_error().contains("coincide"));
    unsafe { cp_poly_free(dup) };

    let nan = [c(f64::NAN, 0.0)];
    let mut q = ptr::null_mut();
    assert_ne!(unsafe { cp_poly_new(nan.as_ptr(), 1, &mut q) }, CpStatus::Ok);
    assert!(q.is_null());
}

#[test]
fn closed_forms_and_samplers() {
    let g = cp_cst_gaussian(c(1.0, 0.0));
    assert!((g.re - (1.0 - (-1.0f64).exp())).abs() < 1e-14 && g.im == 0.0);
    let u = cp_cst_uniform_disk(c(0.5, 0.0));
    assert!((u.re - 0.5).abs() < 1e-15);
    let u = cp_cst_uniform_disk(c(2.0, 0.0));
    assert!((u.re - 0.5).abs() < 1e-15);

    assert_eq!(cp_trial_seed(1, 3), critpair::ensembles::trial_seed(1, 3));
    let mut a = [CpComplex::default(); 64];
    let mut b = [CpComplex::default(); 64];
    for d in [CpDensity::UniformDisk, CpDensity::StdComplexGaussian] {
        assert_eq!(unsafe { cp_sample_iid_zeros(d, 64, 9, a.as_mut_ptr()) }, CpStatus::Ok);
        assert_eq!(unsafe { cp_sample_iid_zeros(d, 64, 9, b.as_mut_ptr()) }, CpStatus::Ok);
        assert_eq!(a, b);
    }
    assert!(a.iter().any(|z| z.re.hypot(z.im) > 1.0));
}

#[test]
fn eigenvalues_of_triangular_matrix() {
    let m = [c(1.0, 0.0), c(3.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(-2.0, 0.5), c(1.0, 1.0), c(0.0, 0.0), c(0.0, 0.0), c(0.25, -1.0)];
    let mut out = [CpComplex::default(); 3];
    assert_eq!(unsafe { cp_eigen_qr(m.as_ptr(), 3, out.as_mut_ptr()) }, CpStatus::Ok);
    for want in [m[0], m[4], m[8]] {
        assert!(out.iter().any(|z| (z.re - want.re).hypot(z.im - want.im) < 1e-12));
    }
    assert_eq!(unsafe { cp_eigen_qr(m.as_ptr(), 0, out.as_mut_ptr()) }, CpStatus::InvalidArgument);
}

#[test]
fn run_from_json() {
    let dir = tempfile::tempdir().unwrap();
    let json = format!(
        r#"{{"experiment":"clt","n":40,"trials":3,"threads":1,"output_dir":{}}}"#,
        serde_json::to_string(dir.path()).unwrap()
    );
    let text = CString::new(json).unwrap();
    let mut passed = -1;
    assert_eq!(unsafe { cp_run_json(text.as_ptr(), &mut passed) }, CpStatus::Ok);
    assert_eq!(passed, 1);
    assert!(dir.path().join("trials.csv").exists());

    let bad = CString::new(r#"{"experiment":"clt","bogus":1}"#).unwrap();
    assert_eq!(unsafe { cp_run_json(bad.as_ptr(), ptr::null_mut()) }, CpStatus::Config);
    assert!(!last_error().is_empty());
}

#[test]
fn header_declares_every_entry_point() {
    let header = std::fs::read_to_string(PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/critpair.h")).unwrap();
    for name in [
        "cp_last_error_message",
        "cp_version",
        "cp_poly_new",
        "cp_poly_free",
        "cp_poly_degree",
        "cp_poly_zeros",
        "cp_poly_eval_log",
        "cp_poly_log_derivative",
        "cp_critical_points",
        "cp_newton_local",
        "cp_count_in_disk",
        "cp_cst_uniform_disk",
        "cp_cst_gaussian",
        "cp_trial_seed",
        "cp_sample_iid_zeros",
        "cp_eigen_qr",
        "cp_run_json",
        "typedef struct CpPoly CpPoly",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
}

#[test]
fn c_program_links_against_static_lib() {
    let Ok(cc) = which_cc() else { return };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let target = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi-staticlib");
    let built = Command::new(env!("CARGO"))
        .args(["build", "--quiet", "--lib", "-p", "critpair-ffi", "--target-dir"])
        .arg(&target)
        .current_dir(&manifest)
        .status()
        .unwrap();
    assert!(built.success());
    let lib = target.join("debug").join("libcritpair_ffi.a");
    let dir = tempfile::tempdir().unwrap();
    let exe = dir.path().join("smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lm", "-lpthread", "-ldl", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("ok "));
}

fn which_cc() -> Result<PathBuf, ()> {
    ["cc", "gcc", "clang"]
        .iter()
        .find(|c| Command::new(c).arg("--version").output().is_ok_and(|o| o.status.success()))
        .map(PathBuf::from)
        .ok_or(())
}
