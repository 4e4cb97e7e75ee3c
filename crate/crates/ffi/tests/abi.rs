use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use nodal_core::fixture::{one_node, Support};
use nodal_core::report::{RunReport, Status};
use nodal_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    let p = nodal_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string()
}

fn session(poly: &str, n: usize, points: Option<&str>, field: Option<&str>) -> Result<*mut NodalSession, NodalStatus> {
    let poly = c(poly);
    let points = points.map(c);
    let field = field.map(c);
    let mut out = ptr::null_mut();
    let status = unsafe {
        nodal_session_new(
            poly.as_ptr(),
            n,
            points.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            field.as_ref().map_or(ptr::null(), |s| s.as_ptr()),
            &mut out,
        )
    };
    if status == NodalStatus::Ok {
        assert!(!out.is_null());
        Ok(out)
    } else {
        assert!(out.is_null());
        Err(status)
    }
}

fn run(s: *const NodalSession, command: &str) -> (NodalStatus, Option<RunReport>) {
    let command = c(command);
    let mut json = ptr::null_mut();
    let status = unsafe { nodal_run(s, command.as_ptr(), &mut json) };
    if json.is_null() {
        return (status, None);
    }
    let text = unsafe { CStr::from_ptr(json) }.to_str().unwrap().to_string();
    unsafe { nodal_string_free(json) };
    (status, Some(RunReport::from_json(&text).unwrap()))
}

#[test]
fn fermat_hilbert_function() {
    let s = session("x0^4 + x1^4 + x2^4 + x3^4", 3, None, None).unwrap();
    let expected = [1, 4, 10, 16, 19, 16, 10, 4, 1, 0];
    for (k, &want) in expected.iter().enumerate() {
        let mut dim = usize::MAX;
        assert_eq!(unsafe { nodal_milnor_dim(s, k as u32, &mut dim) }, NodalStatus::Ok);
        assert_eq!(dim, want, "k = {k}");
    }
    let (mut n, mut d) = (0usize, 0u32);
    assert_eq!(unsafe { nodal_session_shape(s, &mut n, &mut d) }, NodalStatus::Ok);
    assert_eq!((n, d), (3, 4));
    unsafe { nodal_session_free(s) };
}

#[test]
fn one_node_commands_pass_in_both_modes() {
    let fx = one_node(3, 4, 3, Support::Dense).unwrap();
    let poly = fx.f.to_string();
    let points = fx.points_text();
    for field in [None, Some("exact")] {
        let s = session(&poly, 3, Some(&points), field).unwrap();
        for command in ["certify", "hilbert", "phi-check", "lemma23", "hodge", "period-diff"] {
            let (status, report) = run(s, command);
            assert_eq!(status, NodalStatus::Ok, "{command} over {field:?}");
            let report = report.unwrap();
            assert_eq!(report.status, Status::Pass);
            assert!(report.timings_ms.is_empty());
        }
        let mut dim = 0;
        assert_eq!(unsafe { nodal_milnor_dim(s, 4, &mut dim) }, NodalStatus::Ok);
        assert_eq!(dim, 19);
        unsafe { nodal_session_free(s) };
    }
}

#[test]
fn smooth_input_needs_permission() {
    let s = session("x0^4 + x1^4 + x2^4 + x3^4", 3, None, None).unwrap();
    let (status, report) = run(s, "phi-check");
    assert_eq!(status, NodalStatus::HypothesisNotMet);
    assert_eq!(report.unwrap().status, Status::HypothesisNotMet);
    assert!(last_error().contains("smooth"));
    assert_eq!(unsafe { nodal_session_set_allow_smooth(s, true) }, NodalStatus::Ok);
    let (status, _) = run(s, "phi-check");
    assert_eq!(status, NodalStatus::Ok);
    assert!(nodal_last_error().is_null());
    unsafe { nodal_session_free(s) };
}

#[test]
fn error_codes() {
    assert_eq!(session("x0^4 + y", 3, None, None).unwrap_err(), NodalStatus::Parse);
    assert!(last_error().contains("parse"));
    assert_eq!(session("x0^4 + x1^3", 3, None, None).unwrap_err(), NodalStatus::Parse);
    assert_eq!(session("x0^4 + x1^4 + x2^4 + x3^4", 3, None, Some("fp:31")).unwrap_err(), NodalStatus::Field);
    assert!(last_error().contains("too small"));
    assert_eq!(session("x0^4 + x1^4", 1, None, Some("fp:2147483629,exact")).unwrap_err(), NodalStatus::Invalid);
    assert_eq!(session("x0^4 + x1^4", 1, Some("[0 : 0]"), None).unwrap_err(), NodalStatus::Invalid);

    let mut out = ptr::null_mut();
    let status = unsafe { nodal_session_new(ptr::null(), 3, ptr::null(), ptr::null(), &mut out) };
    assert_eq!(status, NodalStatus::NullPointer);
    let bytes = [0xffu8, 0];
    let status = unsafe { nodal_session_new(bytes.as_ptr().cast(), 3, ptr::null(), ptr::null(), &mut out) };
    assert_eq!(status, NodalStatus::Utf8);

    let mut dim = 0;
    assert_eq!(unsafe { nodal_milnor_dim(ptr::null(), 0, &mut dim) }, NodalStatus::NullPointer);

    let s = session("x0^4 + x1^4 + x2^4 + x3^4", 3, None, None).unwrap();
    let (status, report) = run(s, "frobnicate");
    assert_eq!(status, NodalStatus::Invalid);
    assert!(report.is_none());
    unsafe { nodal_session_free(s) };

    // n = 4 has no period-differential statement
    let s = session("x0^5 + x1^5 + x2^5 + x3^5 + x4^5", 4, None, None).unwrap();
    assert_eq!(unsafe { nodal_session_set_allow_smooth(s, true) }, NodalStatus::Ok);
    let (status, report) = run(s, "period-diff");
    assert_eq!(status, NodalStatus::Invalid);
    assert_eq!(report.unwrap().error.unwrap().kind, "unsupported_dimension");
    unsafe { nodal_session_free(s) };

    unsafe {
        nodal_session_free(ptr::null_mut());
        nodal_string_free(ptr::null_mut());
    }
}

fn target_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn c_program_links_against_the_header() {
    let manifest = Path::new(env!("CARGO_MANIFEST_DIR"));
    let lib = target_dir().join("libnodal_ffi.a");
    assert!(lib.exists(), "{} missing", lib.display());
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let status = Command::new("cc")
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("cc");
    assert!(status.success());
    let output = Command::new(&exe).output().unwrap();
    assert!(output.status.success(), "{}", String::from_utf8_lossy(&output.stderr));
    assert!(String::from_utf8_lossy(&output.stdout).starts_with("ok "));
}
