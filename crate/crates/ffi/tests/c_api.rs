use std::ffi::{c_char, CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use selfsim_ffi::*;

const LAMP: &str = r#"{"family":"lamplighter","p":2,"polys":[[0,1],[1,1,1]]}"#;
const BOREL: &str = r#"{"family":"borel","p":2,"m":2,"polys":[[0,1]]}"#;

fn build(json: &str) -> *mut SsInstance {
    let c = CString::new(json).unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { ss_instance_from_json(c.as_ptr(), &mut out) };
    assert_eq!(st, SsStatus::Ok, "{}", last_error());
    assert!(!out.is_null());
    out
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(ss_last_error()) }.to_str().unwrap().to_owned()
}

fn take(s: *mut c_char) -> String {
    let owned = unsafe { CStr::from_ptr(s) }.to_str().unwrap().to_owned();
    unsafe { ss_string_free(s) };
    owned
}

#[test]
fn degree_and_decomposition() {
    let inst = build(LAMP);
    let mut m = 0usize;
    assert_eq!(unsafe { ss_instance_degree(inst, &mut m) }, SsStatus::Ok);
    assert_eq!(m, 2);

    let expr = CString::new("x0^-1").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ss_decompose(inst, expr.as_ptr(), -1, &mut out) }, SsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["perm"], serde_json::json!([0, 1]));

    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ss_decompose(inst, expr.as_ptr(), 2, &mut out) }, SsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["depth"], 2);
    unsafe { ss_instance_free(inst) };
}

#[test]
fn automaton_formats_and_cap() {
    let inst = build(LAMP);
    let expr = CString::new("x0^-1").unwrap();
    let dot = CString::new("dot").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ss_automaton(inst, expr.as_ptr(), 64, dot.as_ptr(), &mut out) },
        SsStatus::Ok
    );
    assert!(take(out).starts_with("digraph"));

    let bad = CString::new("svg").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ss_automaton(inst, expr.as_ptr(), 64, bad.as_ptr(), &mut out) },
        SsStatus::Unsupported
    );
    assert!(out.is_null());
    unsafe { ss_instance_free(inst) };

    let wreath = build(r#"{"family":"wreath","p":2,"d":2}"#);
    let expr = CString::new("a x1").unwrap();
    let json = CString::new("json").unwrap();
    let mut out = ptr::null_mut();
    let st = unsafe { ss_automaton(wreath, expr.as_ptr(), 4, json.as_ptr(), &mut out) };
    assert_eq!(st, SsStatus::CapExceeded);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["result"], "cap_exceeded");
    unsafe { ss_instance_free(wreath) };
}

#[test]
fn tame_and_verify() {
    let inst = build(LAMP);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ss_tame_report(inst, &mut out) }, SsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v["tame_degree"], 2);
    assert_eq!(v["finitely_presented"], true);

    let suites = CString::new("core,tame").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ss_verify(inst, suites.as_ptr(), 7, &mut out) }, SsStatus::Ok);
    let v: serde_json::Value = serde_json::from_str(&take(out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 2);
    unsafe { ss_instance_free(inst) };

    let borel = build(BOREL);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ss_tame_report(borel, &mut out) }, SsStatus::Unsupported);
    assert!(last_error().contains("lamplighter"));
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { ss_verify(borel, ptr::null(), 0, &mut out) }, SsStatus::Ok);
    take(out);
    unsafe { ss_instance_free(borel) };
}

#[test]
fn error_codes() {
    let mut inst = ptr::null_mut();
    let bad = CString::new("{").unwrap();
    assert_eq!(
        unsafe { ss_instance_from_json(bad.as_ptr(), &mut inst) },
        SsStatus::Parse
    );
    assert!(!last_error().is_empty());

    let invalid = CString::new(r#"{"family":"lamplighter","p":2,"polys":[[0,1],[1,1]]}"#).unwrap();
    assert_eq!(
        unsafe { ss_instance_from_json(invalid.as_ptr(), &mut inst) },
        SsStatus::InvalidConfig
    );
    let composite = CString::new(r#"{"family":"lamplighter","p":4,"polys":[[0,1]]}"#).unwrap();
    assert_eq!(
        unsafe { ss_instance_from_json(composite.as_ptr(), &mut inst) },
        SsStatus::InvalidConfig
    );

    assert_eq!(
        unsafe { ss_instance_from_json(ptr::null(), &mut inst) },
        SsStatus::NullArgument
    );
    let mut m = 0usize;
    assert_eq!(
        unsafe { ss_instance_degree(ptr::null(), &mut m) },
        SsStatus::NullArgument
    );

    let lamp = build(LAMP);
    let not_utf8 = [0xffu8 as c_char, 0];
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { ss_decompose(lamp, not_utf8.as_ptr(), -1, &mut out) },
        SsStatus::InvalidUtf8
    );
    let unknown = CString::new("q7").unwrap();
    assert_eq!(
        unsafe { ss_decompose(lamp, unknown.as_ptr(), -1, &mut out) },
        SsStatus::Parse
    );
    assert!(out.is_null());
    let ok = CString::new("u").unwrap();
    assert_eq!(
        unsafe { ss_decompose(lamp, ok.as_ptr(), -1, ptr::null_mut()) },
        SsStatus::NullArgument
    );
    assert_eq!(unsafe { ss_decompose(lamp, ok.as_ptr(), -1, &mut out) }, SsStatus::Ok);
    assert!(last_error().is_empty());
    take(out);
    unsafe {
        ss_instance_free(lamp);
        ss_instance_free(ptr::null_mut());
        ss_string_free(ptr::null_mut());
    }
}

#[test]
fn header_is_generated_and_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/selfsim.h");
    let text = std::fs::read_to_string(&header).unwrap();
    for name in [
        "ss_instance_from_json",
        "ss_verify",
        "ss_last_error",
        "SS_STATUS_CAP_EXCEEDED",
        "typedef struct SsInstance SsInstance",
    ] {
        assert!(text.contains(name), "{name} missing from header");
    }
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-std=c99", "-Wall", "-Werror", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler; syntax check skipped");
        return;
    };
    assert!(status.success());
}
