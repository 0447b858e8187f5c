use std::ffi::{CStr, CString};
use std::ptr;

use crystal_paths_ffi::*;

fn take_json(p: *mut std::ffi::c_char) -> serde_json::Value {
    assert!(!p.is_null());
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_owned();
    unsafe { cp_string_free(p) };
    serde_json::from_str(&s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(cp_last_error()) }.to_str().unwrap().to_owned()
}

#[test]
fn crystal_round_trip() {
    let tag = CString::new("A1").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cp_crystal_new(tag.as_ptr(), 2, &mut c) }, CpStatus::Ok);
    let mut len = 0usize;
    assert_eq!(unsafe { cp_crystal_len(c, &mut len) }, CpStatus::Ok);
    assert_eq!(len, 3);
    let zero = CString::new("0").unwrap();
    let mut b = 99usize;
    assert_eq!(unsafe { cp_crystal_index_of(c, zero.as_ptr(), &mut b) }, CpStatus::Ok);
    let mut h = 0i64;
    assert_eq!(unsafe { cp_crystal_energy(c, b, b, &mut h) }, CpStatus::Ok);
    assert_eq!(h, 1);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cp_crystal_json(c, &mut out) }, CpStatus::Ok);
    let v = take_json(out);
    assert_eq!(v["elements"].as_array().unwrap().len(), 3);
    unsafe { cp_crystal_free(c) };
}

#[test]
fn gtable_values() {
    let tag = CString::new("A1").unwrap();
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cp_crystal_new(tag.as_ptr(), 1, &mut c) }, CpStatus::Ok);
    let mut t = ptr::null_mut();
    assert_eq!(unsafe { cp_gtable_new(c, 2, &mut t) }, CpStatus::Ok);
    unsafe { cp_crystal_free(c) };
    // g_1(0, wt(0)) = q, shifted by delta = 2
    let mu = [-1i64, 1];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cp_gtable_get(t, 1, 0, mu.as_ptr(), 2, 2, &mut out) }, CpStatus::Ok);
    let v = take_json(out);
    assert_eq!(v, serde_json::json!({ "terms": [[6, "1"]] }));
    assert_eq!(
        unsafe { cp_gtable_get(t, 5, 0, mu.as_ptr(), 2, 0, &mut out) },
        CpStatus::InvalidArgument
    );
    assert_eq!(
        unsafe { cp_gtable_get(t, 1, 0, mu.as_ptr(), 3, 0, &mut out) },
        CpStatus::InvalidArgument
    );
    unsafe { cp_gtable_free(t) };
}

#[test]
fn kostka_and_verify() {
    let xi = [2u32, 1];
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { cp_kostka(xi.as_ptr(), 2, 1, 3, 2, &mut out) }, CpStatus::Ok);
    assert_eq!(take_json(out), serde_json::json!({ "terms": [[2, "1"], [4, "1"]] }));
    let bad = [2u32, 2];
    assert_eq!(
        unsafe { cp_kostka(bad.as_ptr(), 2, 1, 3, 2, &mut out) },
        CpStatus::InvalidArgument
    );
    assert!(last_error().contains("size"));
    let tag = CString::new("D2").unwrap();
    let mut ok = false;
    assert_eq!(unsafe { cp_verify_formulas(tag.as_ptr(), 2, 2, &mut ok) }, CpStatus::Ok);
    assert!(ok);
    assert!(last_error().is_empty());
}

#[test]
fn error_codes() {
    let mut c = ptr::null_mut();
    assert_eq!(unsafe { cp_crystal_new(ptr::null(), 1, &mut c) }, CpStatus::NullPointer);
    let tag = CString::new("E8").unwrap();
    assert_eq!(unsafe { cp_crystal_new(tag.as_ptr(), 1, &mut c) }, CpStatus::InvalidArgument);
    assert!(last_error().contains("E8"));
    let tag = CString::new("B1").unwrap();
    assert_eq!(unsafe { cp_crystal_new(tag.as_ptr(), 2, &mut c) }, CpStatus::InvalidArgument);
    let mut len = 0;
    assert_eq!(unsafe { cp_crystal_len(ptr::null(), &mut len) }, CpStatus::NullPointer);
    let invalid = [0xffu8, 0];
    assert_eq!(
        unsafe { cp_crystal_new(invalid.as_ptr().cast(), 1, &mut c) },
        CpStatus::InvalidUtf8
    );
    unsafe {
        cp_crystal_free(ptr::null_mut());
        cp_gtable_free(ptr::null_mut());
        cp_string_free(ptr::null_mut());
    }
}

#[test]
fn header_lists_every_export() {
    let header = include_str!("../include/crystal_paths.h");
    for name in [
        "cp_last_error",
        "cp_string_free",
        "cp_crystal_new",
        "cp_crystal_free",
        "cp_crystal_len",
        "cp_crystal_energy",
        "cp_crystal_index_of",
        "cp_crystal_json",
        "cp_gtable_new",
        "cp_gtable_free",
        "cp_gtable_get",
        "cp_kostka",
        "cp_verify_formulas",
        "CP_STATUS_GUARD",
        "typedef struct CpCrystal CpCrystal",
    ] {
        assert!(header.contains(name), "{name}");
    }
}

#[test]
fn c_program_links_and_runs() {
    use std::path::PathBuf;
    use std::process::Command;
    let Ok(cc) = which_cc() else {
        eprintln!("no C compiler, skipping");
        return;
    };
    let manifest = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    // target/<profile>/deps/<test binary>
    let profile_dir = std::env::current_exe().unwrap().parent().unwrap().parent().unwrap().to_path_buf();
    let lib = profile_dir.join("libcrystal_paths_ffi.a");
    if !lib.exists() {
        eprintln!("static library not built, skipping");
        return;
    }
    let exe = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("ffi_smoke");
    let status = Command::new(&cc)
        .arg(manifest.join("tests/c/smoke.c"))
        .arg("-I")
        .arg(manifest.join("include"))
        .arg(&lib)
        .args(["-lpthread", "-ldl", "-lm", "-o"])
        .arg(&exe)
        .status()
        .unwrap();
    assert!(status.success());
    let out = Command::new(&exe).output().unwrap();
    assert!(out.status.success(), "exit {:?}", out.status.code());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), r#"{"terms":[[0,"1"]]}"#);
}

fn which_cc() -> Result<String, ()> {
    for cc in ["cc", "gcc", "clang"] {
        if std::process::Command::new(cc).arg("--version").output().is_ok() {
            return Ok(cc.to_string());
        }
    }
    Err(())
}
