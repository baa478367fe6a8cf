use std::ffi::{CStr, CString};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::ptr;

use opcong_ffi::*;

fn last_error() -> String {
    let p = opcong_last_error();
    assert!(!p.is_null());
    unsafe { CStr::from_ptr(p) }.to_string_lossy().into_owned()
}

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

#[test]
fn expand_extract_and_read_coefficients() {
    unsafe {
        let mut gf = ptr::null_mut();
        assert_eq!(opcong_overpartition_gf(5, c("exact").as_ptr(), 24, &mut gf), OpcongStatus::Ok);
        let mut stream = ptr::null_mut();
        assert_eq!(opcong_series_extract(gf, 8, 7, &mut stream), OpcongStatus::Ok);
        let (mut off, mut trunc) = (0, 0);
        assert_eq!(opcong_series_bounds(stream, &mut off, &mut trunc), OpcongStatus::Ok);
        assert_eq!((off, trunc), (0, 3));
        let mut v = 0;
        assert_eq!(opcong_series_coeff_i64(stream, 1, &mut v), OpcongStatus::Ok);
        assert_eq!(v, 50_744_448);
        let mut s = ptr::null_mut();
        assert_eq!(opcong_series_coeff_str(stream, 0, &mut s), OpcongStatus::Ok);
        assert_eq!(CStr::from_ptr(s).to_str().unwrap(), "37760");
        opcong_string_free(s);
        assert_eq!(opcong_series_coeff_i64(stream, 3, &mut v), OpcongStatus::OutOfRange);

        let mut sq = ptr::null_mut();
        assert_eq!(opcong_series_mul(stream, stream, &mut sq), OpcongStatus::Ok);
        assert_eq!(opcong_series_coeff_i64(sq, 0, &mut v), OpcongStatus::Ok);
        assert_eq!(v, 37760 * 37760);
        opcong_series_free(sq);
        opcong_series_free(stream);
        opcong_series_free(gf);
    }
}

#[test]
fn errors_map_to_statuses_and_messages() {
    unsafe {
        let mut out = ptr::null_mut();
        assert_eq!(opcong_eta_expand(c("f1 ^ x").as_ptr(), c("exact").as_ptr(), 5, &mut out), OpcongStatus::Parse);
        assert!(last_error().contains("position"));
        assert!(out.is_null());
        assert_eq!(opcong_eta_expand(c("f1").as_ptr(), c("mod2k:65").as_ptr(), 5, &mut out), OpcongStatus::Ring);
        assert_eq!(opcong_eta_expand(ptr::null(), c("exact").as_ptr(), 5, &mut out), OpcongStatus::NullPointer);
        assert_eq!(opcong_eta_expand(c("q^3 * f1").as_ptr(), c("exact").as_ptr(), 2, &mut out), OpcongStatus::Truncation);
        let bad = [0x66u8, 0xff, 0];
        assert_eq!(opcong_eta_expand(bad.as_ptr().cast(), c("exact").as_ptr(), 5, &mut out), OpcongStatus::InvalidUtf8);
        assert_eq!(opcong_eta_expand(c("f1").as_ptr(), c("exact").as_ptr(), 5, ptr::null_mut()), OpcongStatus::NullPointer);

        assert_eq!(opcong_eta_expand(c("f1").as_ptr(), c("exact").as_ptr(), 5, &mut out), OpcongStatus::Ok);
        assert!(opcong_last_error().is_null());
        opcong_series_free(out);
        opcong_series_free(ptr::null_mut());
        opcong_string_free(ptr::null_mut());
    }
}

#[test]
fn certificates_round_trip_and_verify() {
    unsafe {
        let mut cert = ptr::null_mut();
        assert_eq!(opcong_certificate_builtin(&mut cert), OpcongStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(opcong_certificate_to_text(cert, &mut text), OpcongStatus::Ok);
        let mut again = ptr::null_mut();
        assert_eq!(opcong_certificate_parse(text, &mut again), OpcongStatus::Ok);
        let (mut matched, mut v2) = (false, 0);
        assert_eq!(opcong_verify_witness(again, 60, &mut matched, &mut v2), OpcongStatus::Ok);
        assert!(matched);
        assert_eq!(v2, 7);

        let broken = CStr::from_ptr(text).to_str().unwrap().replace("AB: 1", "AB: 2");
        let mut none = ptr::null_mut();
        assert_eq!(opcong_certificate_parse(c(&broken).as_ptr(), &mut none), OpcongStatus::Certificate);
        assert!(last_error().contains("AB"));

        opcong_string_free(text);
        opcong_certificate_free(again);
        opcong_certificate_free(cert);
    }
}

#[test]
fn claims() {
    unsafe {
        let (mut holds, mut n) = (false, 0);
        assert_eq!(opcong_check_claim(5, 8, 7, 7, 300, &mut holds, &mut n), OpcongStatus::Ok);
        assert!(holds);
        assert_eq!(n, u64::MAX);
        assert_eq!(opcong_check_claim(5, 8, 7, 8, 300, &mut holds, &mut n), OpcongStatus::Ok);
        assert!(!holds);
        assert_eq!(n, 0);
        assert_eq!(opcong_check_claim(5, 8, 8, 1, 10, &mut holds, &mut n), OpcongStatus::InvalidArgument);
    }
}

#[test]
fn version_is_static() {
    let v = unsafe { CStr::from_ptr(opcong_version()) };
    assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
}

fn crate_dir() -> &'static Path {
    Path::new(env!("CARGO_MANIFEST_DIR"))
}

/// `target/<profile>`, two levels above this test binary.
fn profile_dir() -> PathBuf {
    let exe = std::env::current_exe().unwrap();
    exe.parent().and_then(Path::parent).unwrap().to_path_buf()
}

#[test]
fn header_declares_every_export() {
    let header = std::fs::read_to_string(crate_dir().join("include/opcong.h")).unwrap();
    let source = std::fs::read_to_string(crate_dir().join("src/lib.rs")).unwrap();
    let exports: Vec<&str> = source
        .lines()
        .filter_map(|l| l.split("extern \"C\" fn ").nth(1))
        .map(|rest| rest.split('(').next().unwrap())
        .collect();
    assert!(exports.len() >= 15);
    for name in exports {
        assert!(header.contains(&format!("{name}(")), "{name} missing from header");
    }
    assert!(header.contains("typedef struct OpcongSeries OpcongSeries;"));
    assert!(header.contains("OPCONG_STATUS_OK = 0"));
}

#[test]
fn c_program_links_against_the_static_library() {
    let lib = profile_dir().join("libopcong_ffi.a");
    assert!(lib.exists(), "{} not built", lib.display());
    let out = tempfile::tempdir().unwrap();
    let exe = out.path().join("smoke");
    let status = Command::new("cc")
        .arg(crate_dir().join("tests/c/smoke.c"))
        .arg("-I")
        .arg(crate_dir().join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .expect("C compiler available");
    assert!(status.success());
    let run = Command::new(&exe).output().unwrap();
    assert!(run.status.success(), "smoke exited with {:?}", run.status.code());
    assert!(String::from_utf8_lossy(&run.stdout).starts_with("ok "));
}
