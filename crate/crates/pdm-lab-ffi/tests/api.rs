//! Exercises the C ABI from Rust, plus a real C compile/link/run smoke test.

use std::ffi::CStr;
use std::ptr;

use pdm_lab_ffi::*;

#[test]
fn version_is_a_c_string() {
    let v = unsafe { CStr::from_ptr(pdm_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

#[test]
fn background_round_trip() {
    unsafe {
        let mut bg: *mut PdmBackground = ptr::null_mut();
        let status = pdm_background_new_linear_c_unity(1.0, 1.0, &mut bg);
        assert_eq!(status, PdmStatus::Ok);
        assert!(!bg.is_null());

        let mut point = std::mem::zeroed::<PdmFieldPoint>();
        assert_eq!(pdm_background_eval(bg, 1.0, 0.0, &mut point), PdmStatus::Ok);
        assert!((point.inv_sqrt_b - 0.5).abs() < 1e-12);
        assert!((point.mass - 0.5).abs() < 1e-12);
        assert!((point.b - 4.0).abs() < 1e-11);

        pdm_background_free(bg);
        pdm_background_free(ptr::null_mut()); // NULL is a no-op
    }
}

#[test]
fn null_pointers_are_reported() {
    unsafe {
        let status = pdm_background_new_linear(1.0, 1.0, 12.0, ptr::null_mut());
        assert_eq!(status, PdmStatus::NullPointer);
        let msg = CStr::from_ptr(pdm_last_error_message());
        assert!(!msg.to_bytes().is_empty());
    }
}

#[test]
fn invalid_parameters_are_reported() {
    unsafe {
        let mut bg: *mut PdmBackground = ptr::null_mut();
        let status = pdm_background_new_linear(1.0, -2.0, 12.0, &mut bg);
        assert_eq!(status, PdmStatus::InvalidArgument);
        let msg = CStr::from_ptr(pdm_last_error_message()).to_str().unwrap();
        assert!(msg.contains("a_coeff"), "message: {msg}");
    }
}

#[test]
fn positive_branch_descriptor_hits_singular_locus() {
    let descriptor = r#"{
        "constants": {"kappa": 1.0, "lambda": 12.0, "hbar": 1.0, "m0": 1.0},
        "f": {"kind": "zeta"},
        "branch": "positive_lambda"
    }"#;
    let c_desc = std::ffi::CString::new(descriptor).unwrap();
    unsafe {
        let mut bg: *mut PdmBackground = ptr::null_mut();
        assert_eq!(
            pdm_background_new_from_json(c_desc.as_ptr(), &mut bg),
            PdmStatus::Ok
        );
        let mut point = std::mem::zeroed::<PdmFieldPoint>();
        // |f|² = 1 on the unit circle: singular on the Λ > 0 branch
        assert_eq!(
            pdm_background_eval(bg, 1.0, 0.0, &mut point),
            PdmStatus::SingularBackground
        );
        assert_eq!(pdm_background_eval(bg, 2.0, 0.0, &mut point), PdmStatus::Ok);
        pdm_background_free(bg);
    }
}

#[test]
fn spectrum_harmonic_limit() {
    unsafe {
        let mut s: *mut PdmSpectrum = ptr::null_mut();
        let status = pdm_spectrum_solve(0.0, 1.0, 1.0, 1, 0, 1200, 8.0, 4, &mut s);
        assert_eq!(status, PdmStatus::Ok);
        assert_eq!(pdm_spectrum_count(s), 4);
        for n in 0..4u64 {
            let mut e = 0.0f64;
            assert_eq!(pdm_spectrum_eigenvalue(s, n, &mut e), PdmStatus::Ok);
            assert!((e - (n as f64 + 0.5)).abs() < 1e-3, "E{n} = {e}");
            let mut flag = 0i32;
            assert_eq!(pdm_spectrum_bound_flag(s, n, &mut flag), PdmStatus::Ok);
            assert_eq!(flag, 1);
        }
        let mut gram = f64::NAN;
        assert_eq!(pdm_spectrum_gram_deviation(s, &mut gram), PdmStatus::Ok);
        assert!(gram <= 1e-8);
        // λ = 0 has no finite threshold
        let mut u = 0.0f64;
        assert_eq!(pdm_spectrum_u_inf(s, &mut u), 0);
        // out-of-range index
        let mut e = 0.0f64;
        assert_eq!(
            pdm_spectrum_eigenvalue(s, 99, &mut e),
            PdmStatus::InvalidArgument
        );
        pdm_spectrum_free(s);
    }
}

#[test]
fn spectrum_threshold_present_for_nonzero_lambda() {
    unsafe {
        let mut s: *mut PdmSpectrum = ptr::null_mut();
        assert_eq!(
            pdm_spectrum_solve(0.1, 1.0, 1.0, 1, 0, 1200, 26.0, 4, &mut s),
            PdmStatus::Ok
        );
        let mut u = 0.0f64;
        assert_eq!(pdm_spectrum_u_inf(s, &mut u), 1);
        assert!((u - 5.0).abs() < 1e-12);
        pdm_spectrum_free(s);
    }
}

#[test]
fn spectrum_rejects_bad_dimension() {
    unsafe {
        let mut s: *mut PdmSpectrum = ptr::null_mut();
        assert_eq!(
            pdm_spectrum_solve(0.1, 1.0, 1.0, 3, 0, 500, 10.0, 2, &mut s),
            PdmStatus::InvalidArgument
        );
        assert!(s.is_null());
    }
}

#[test]
fn string_tension_summary() {
    unsafe {
        let mut summary = std::mem::zeroed::<PdmTensionSummary>();
        assert_eq!(
            pdm_string_tension(1.0, 12.0, 1.0, 100.0, &mut summary),
            PdmStatus::Ok
        );
        assert!((summary.mu_quadrature - summary.mu_closed).abs()
            <= 1e-10 * summary.mu_closed.abs());
        assert!((summary.xi_crit - 1.0).abs() < 1e-12);
        assert_eq!(summary.positivity_flag, 1);

        assert_eq!(
            pdm_string_tension(1.0, 12.0, 1.0, 1.0, &mut summary),
            PdmStatus::Ok
        );
        assert_eq!(summary.positivity_flag, 0);

        assert_eq!(
            pdm_string_tension(-1.0, 12.0, 1.0, 1.0, &mut summary),
            PdmStatus::InvalidArgument
        );
    }
}

#[test]
fn classical_trajectory_round_trip() {
    unsafe {
        let x0 = [1.0f64];
        let p0 = [0.0f64];
        let mut tr: *mut PdmTrajectory = ptr::null_mut();
        let status =
            pdm_classical_integrate(1.0, 1.0, 1.0, 1, x0.as_ptr(), p0.as_ptr(), 1e-3, 40_000, &mut tr);
        assert_eq!(status, PdmStatus::Ok);
        assert_eq!(pdm_trajectory_len(tr), 40_001);

        let mut first = std::mem::zeroed::<PdmPhasePoint>();
        assert_eq!(pdm_trajectory_sample(tr, 0, &mut first), PdmStatus::Ok);
        assert_eq!(first.dim, 1);
        assert_eq!(first.x[0], 1.0);

        let mut drift = f64::NAN;
        assert_eq!(pdm_trajectory_energy_drift(tr, &mut drift), PdmStatus::Ok);
        assert!(drift < 1e-6);

        let mut period = 0.0f64;
        assert_eq!(pdm_trajectory_period(tr, &mut period), 1);
        let expected = 2.0 * std::f64::consts::PI * 2.0f64.sqrt();
        assert!((period - expected).abs() / expected < 1e-3, "period {period}");

        pdm_trajectory_free(tr);
    }
}

/// Compiles and runs a small C program against the generated header and the
/// static library, proving the ABI end to end.
#[test]
fn c_program_links_and_runs() {
    let manifest = std::path::PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    let include_dir = manifest.join("include");
    let lib_dir = manifest.join("../../target/debug");
    let staticlib = lib_dir.join("libpdm_lab_ffi.a");
    assert!(
        staticlib.exists(),
        "static library missing at {}",
        staticlib.display()
    );

    let tmp = tempfile::tempdir().unwrap();
    let c_src = tmp.path().join("smoke.c");
    std::fs::write(
        &c_src,
        r#"
#include <stdio.h>
#include <math.h>
#include "pdm_lab.h"

int main(void) {
    PdmBackground *bg = NULL;
    if (pdm_background_new_linear_c_unity(1.0, 1.0, &bg) != PDM_STATUS_OK) return 1;
    PdmFieldPoint point;
    if (pdm_background_eval(bg, 1.0, 0.0, &point) != PDM_STATUS_OK) return 2;
    if (fabs(point.inv_sqrt_b - 0.5) > 1e-12) return 3;
    pdm_background_free(bg);

    PdmTensionSummary summary;
    if (pdm_string_tension(1.0, 12.0, 1.0, 100.0, &summary) != PDM_STATUS_OK) return 4;
    if (summary.rel_discrepancy > 1e-10) return 5;

    printf("%s\n", pdm_version());
    return 0;
}
"#,
    )
    .unwrap();
    let exe = tmp.path().join("smoke");
    let cc = std::env::var("CC").unwrap_or_else(|_| "cc".to_string());
    let compile = std::process::Command::new(cc)
        .arg(&c_src)
        .arg("-I")
        .arg(&include_dir)
        .arg(staticlib)
        .args(["-lm", "-lpthread", "-ldl"])
        .arg("-o")
        .arg(&exe)
        .output()
        .expect("C compiler runs");
    assert!(
        compile.status.success(),
        "compilation failed: {}",
        String::from_utf8_lossy(&compile.stderr)
    );
    let run = std::process::Command::new(&exe).output().expect("smoke binary runs");
    assert!(run.status.success(), "exit {:?}", run.status.code());
    assert_eq!(
        String::from_utf8_lossy(&run.stdout).trim(),
        env!("CARGO_PKG_VERSION")
    );
}
