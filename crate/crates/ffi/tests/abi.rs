use std::ffi::{CStr, CString};
use std::ptr;

use arithdyn_ffi::*;

fn cstr(s: &str) -> CString {
    CString::new(s).unwrap()
}

unsafe fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = CStr::from_ptr(p).to_str().unwrap().to_owned();
    ad_string_free(p);
    s
}

#[test]
fn eval_round_trip() {
    unsafe {
        let mut n = ptr::null_mut();
        assert_eq!(ad_natural_from_u64(18, &mut n), AdStatus::Ok);
        let mut v = ptr::null_mut();
        assert_eq!(ad_eval(cstr("phi").as_ptr(), n, &mut v), AdStatus::Ok);
        let mut x = 0u64;
        assert_eq!(ad_natural_to_u64(v, &mut x), AdStatus::Ok);
        assert_eq!(x, 6);
        let mut s = ptr::null_mut();
        assert_eq!(ad_natural_to_string(v, &mut s), AdStatus::Ok);
        assert_eq!(take_string(s), "2*3");
        ad_natural_free(v);
        ad_natural_free(n);
    }
}

#[test]
fn parse_and_big_values() {
    unsafe {
        let mut n = ptr::null_mut();
        assert_eq!(
            ad_natural_parse(cstr("2^100*3").as_ptr(), &mut n),
            AdStatus::Ok
        );
        let mut x = 0u64;
        assert_eq!(ad_natural_to_u64(n, &mut x), AdStatus::ValueTooLarge);
        assert!(!ad_last_error().is_null());
        let mut v = ptr::null_mut();
        assert_eq!(ad_eval(cstr("psi").as_ptr(), n, &mut v), AdStatus::Ok);
        let mut s = ptr::null_mut();
        ad_natural_to_string(v, &mut s);
        // psi(2^100) = 2^99 * 3 and psi(3) = 2^2
        assert_eq!(take_string(s), "2^101*3");
        ad_natural_free(v);
        ad_natural_free(n);
    }
}

#[test]
fn errors_are_codes() {
    unsafe {
        let mut n = ptr::null_mut();
        assert_eq!(ad_natural_from_u64(0, &mut n), AdStatus::InvalidArgument);
        assert!(n.is_null());
        assert_eq!(
            ad_natural_from_u64(5, ptr::null_mut()),
            AdStatus::NullPointer
        );
        ad_natural_from_u64(5, &mut n);
        let mut v = ptr::null_mut();
        assert_eq!(
            ad_eval(cstr("zeta").as_ptr(), n, &mut v),
            AdStatus::InvalidFunction
        );
        let msg = CStr::from_ptr(ad_last_error()).to_str().unwrap();
        assert!(msg.contains("zeta"), "{msg}");
        assert_eq!(ad_eval(ptr::null(), n, &mut v), AdStatus::NullPointer);
        ad_natural_free(n);
        ad_natural_free(ptr::null_mut());
        ad_string_free(ptr::null_mut());
    }
}

#[test]
fn inverse_phi_array() {
    unsafe {
        let mut p = ptr::null_mut();
        let mut len = 0usize;
        assert_eq!(ad_inverse_phi(4, &mut p, &mut len), AdStatus::Ok);
        assert_eq!(std::slice::from_raw_parts(p, len), &[5, 8, 10, 12]);
        ad_u64_array_free(p, len);
        assert_eq!(ad_inverse_phi(3, &mut p, &mut len), AdStatus::Ok);
        assert_eq!(len, 0);
        ad_u64_array_free(p, len);
    }
}

#[test]
fn family_terms_and_caps() {
    unsafe {
        let mut t = ptr::null_mut();
        assert_eq!(
            ad_family_term(cstr("PHI_ANTI").as_ptr(), 2, 3, &mut t),
            AdStatus::Ok
        );
        let mut x = 0u64;
        ad_natural_to_u64(t, &mut x);
        assert_eq!(x, 4 * 27);
        ad_natural_free(t);
        assert_eq!(
            ad_family_term(cstr("omega-anti").as_ptr(), 1, 9, &mut t),
            AdStatus::Budget
        );
    }
}

#[test]
fn lemma_json() {
    unsafe {
        let mut s = ptr::null_mut();
        assert_eq!(
            ad_verify_lemma(cstr("psi-orbit").as_ptr(), 3, 5, 0, &mut s),
            AdStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(s)).unwrap();
        assert_eq!(v["status"], "PASS");
        assert_eq!(v["families_checked"], 3);
        assert_eq!(
            ad_verify_lemma(cstr("no-such").as_ptr(), 0, 0, 0, &mut s),
            AdStatus::InvalidArgument
        );
    }
}

#[test]
fn header_is_current_and_compiles() {
    let dir = std::path::Path::new(env!("CARGO_MANIFEST_DIR"));
    let header = std::fs::read_to_string(dir.join("include/arithdyn.h")).unwrap();
    for name in [
        "ad_last_error",
        "ad_natural_from_u64",
        "ad_natural_parse",
        "ad_natural_free",
        "ad_natural_to_string",
        "ad_natural_to_u64",
        "ad_string_free",
        "ad_eval",
        "ad_inverse_phi",
        "ad_u64_array_free",
        "ad_family_term",
        "ad_verify_lemma",
        "typedef struct AdNatural AdNatural",
    ] {
        assert!(header.contains(name), "{name} missing from header");
    }
    let status = std::process::Command::new("cc")
        .args(["-fsyntax-only", "-Wall", "-Werror", "-x", "c"])
        .arg(dir.join("include/arithdyn.h"))
        .status()
        .expect("a C compiler is on PATH");
    assert!(status.success());
}
