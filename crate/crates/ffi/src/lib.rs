//! C ABI over `crystal-paths`.
//!
//! Crystals and 1dsum tables are opaque handles created by `cp_*_new` and
//! released by the matching `cp_*_free`. Every fallible call returns a
//! [`CpStatus`]; on failure `cp_last_error` describes the cause. Strings
//! returned through out-parameters are JSON and must be released with
//! `cp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use crystal_paths::crystals::{build_crystal, Crystal};
use crystal_paths::formulas::verify_type;
use crystal_paths::onedsums::{kostka, GTable};
use crystal_paths::qring::LaurentPoly;
use crystal_paths::weights::{AffineType, Family, Weight};
use crystal_paths::Error;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CpStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    InvalidUtf8 = 3,
    Guard = 4,
    Internal = 5,
    Panic = 6,
}

/// Level-1 perfect crystal.
pub struct CpCrystal {
    inner: Crystal,
}

/// Table of `g_j(b, mu)` for all `b`, `mu` and `j <= j_max`.
pub struct CpGTable {
    inner: GTable,
    size: usize,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

fn status_of(e: &Error) -> CpStatus {
    match e {
        Error::Guard(_) => CpStatus::Guard,
        Error::Internal(_) | Error::InexactDivision { .. } | Error::DivisionByZero => CpStatus::Internal,
        _ => CpStatus::InvalidArgument,
    }
}

fn guarded(f: impl FnOnce() -> Result<(), (CpStatus, String)>) -> CpStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            CpStatus::Ok
        }
        Ok(Err((status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("panic inside crystal-paths");
            CpStatus::Panic
        }
    }
}

fn lib(e: Error) -> (CpStatus, String) {
    (status_of(&e), e.to_string())
}

fn null(what: &str) -> (CpStatus, String) {
    (CpStatus::NullPointer, format!("{what} is null"))
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, (CpStatus, String)> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| (CpStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn write_json(out: *mut *mut c_char, value: &serde_json::Value) -> Result<(), (CpStatus, String)> {
    if out.is_null() {
        return Err(null("out"));
    }
    let s = CString::new(value.to_string()).map_err(|e| (CpStatus::Internal, e.to_string()))?;
    *out = s.into_raw();
    Ok(())
}

fn poly_json(p: &LaurentPoly) -> serde_json::Value {
    serde_json::to_value(p).expect("polynomial serializes")
}

/// Message for the last failed call on this thread (empty after success).
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn cp_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Builds the level-1 perfect crystal of a type tag (`A1`, `B1`, `D1`,
/// `A2odd`, `A2even`, `D2`) and rank.
///
/// # Safety
/// `type_tag` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_crystal_new(type_tag: *const c_char, rank: usize, out: *mut *mut CpCrystal) -> CpStatus {
    guarded(|| {
        if out.is_null() {
            return Err(null("out"));
        }
        let tag = read_str(type_tag, "type_tag")?;
        let family: Family = tag.parse().map_err(lib)?;
        let ty = AffineType::new(family, rank).map_err(lib)?;
        *out = Box::into_raw(Box::new(CpCrystal { inner: build_crystal(ty) }));
        Ok(())
    })
}

/// # Safety
/// `c` must come from `cp_crystal_new` and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cp_crystal_free(c: *mut CpCrystal) {
    if !c.is_null() {
        drop(Box::from_raw(c));
    }
}

/// Number of elements.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_crystal_len(c: *const CpCrystal, out: *mut usize) -> CpStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("crystal"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        *out = c.inner.len();
        Ok(())
    })
}

/// Energy `H(b (x) b2)` of two element indices.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_crystal_energy(c: *const CpCrystal, b: usize, b2: usize, out: *mut i64) -> CpStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("crystal"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let n = c.inner.len();
        if b >= n || b2 >= n {
            return Err((CpStatus::InvalidArgument, format!("element index outside 0..{n}")));
        }
        *out = c.inner.energy(b, b2);
        Ok(())
    })
}

/// Index of the element written as `label` (e.g. `0`, `2~`, `phi`).
///
/// # Safety
/// `c` must be a live handle, `label` NUL-terminated and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_crystal_index_of(c: *const CpCrystal, label: *const c_char, out: *mut usize) -> CpStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("crystal"))?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let label = read_str(label, "label")?;
        *out = c.inner.parse_element(label).map_err(lib)?;
        Ok(())
    })
}

/// Crystal graph as JSON.
///
/// # Safety
/// `c` must be a live handle and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_crystal_json(c: *const CpCrystal, out: *mut *mut c_char) -> CpStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("crystal"))?;
        write_json(out, &c.inner.to_json())
    })
}

/// Builds the 1dsum table up to `j_max`.
///
/// # Safety
/// `c` must be a live handle and `out` writable. The table does not borrow
/// the crystal.
#[no_mangle]
pub unsafe extern "C" fn cp_gtable_new(c: *const CpCrystal, j_max: usize, out: *mut *mut CpGTable) -> CpStatus {
    guarded(|| {
        let c = c.as_ref().ok_or_else(|| null("crystal"))?;
        if out.is_null() {
            return Err(null("out"));
        }
        let table = GTable::build(&c.inner, j_max);
        *out = Box::into_raw(Box::new(CpGTable {
            inner: table,
            size: c.inner.size(),
        }));
        Ok(())
    })
}

/// # Safety
/// `t` must come from `cp_gtable_new` and not have been freed; null is ignored.
#[no_mangle]
pub unsafe extern "C" fn cp_gtable_free(t: *mut CpGTable) {
    if !t.is_null() {
        drop(Box::from_raw(t));
    }
}

/// `g_j(b, mu + delta * delta)` as polynomial JSON, where `mu` holds
/// `mu_len` Lambda coordinates.
///
/// # Safety
/// `t` must be a live handle, `mu` must point to `mu_len` integers and
/// `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_gtable_get(
    t: *const CpGTable,
    j: usize,
    b: usize,
    mu: *const i64,
    mu_len: usize,
    delta: i64,
    out: *mut *mut c_char,
) -> CpStatus {
    guarded(|| {
        let t = t.as_ref().ok_or_else(|| null("table"))?;
        if mu.is_null() {
            return Err(null("mu"));
        }
        if mu_len != t.size {
            return Err(lib(Error::WeightShape {
                got: mu_len,
                expected: t.size,
            }));
        }
        if j > t.inner.j_max() {
            return Err((CpStatus::InvalidArgument, format!("j exceeds table depth {}", t.inner.j_max())));
        }
        let mu = std::slice::from_raw_parts(mu, mu_len).to_vec();
        let w = Weight::classical(mu).add_delta(delta.into());
        write_json(out, &poly_json(&t.inner.g(j, b, &w)))
    })
}

/// Kostka-Foulkes polynomial `K_{xi,(l^j)}(q)` as polynomial JSON.
///
/// # Safety
/// `xi` must point to `xi_len` integers and `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn cp_kostka(
    xi: *const u32,
    xi_len: usize,
    l: usize,
    j: usize,
    n: usize,
    out: *mut *mut c_char,
) -> CpStatus {
    guarded(|| {
        let xi = if xi_len == 0 {
            Vec::new()
        } else if xi.is_null() {
            return Err(null("xi"));
        } else {
            std::slice::from_raw_parts(xi, xi_len).to_vec()
        };
        let p = kostka(&xi, l, j, n).map_err(lib)?;
        write_json(out, &poly_json(&p))
    })
}

/// Checks the closed forms against path enumeration for `j <= j_max`;
/// writes whether every cell matched.
///
/// # Safety
/// `type_tag` must be NUL-terminated and `ok` writable.
#[no_mangle]
pub unsafe extern "C" fn cp_verify_formulas(
    type_tag: *const c_char,
    rank: usize,
    j_max: usize,
    ok: *mut bool,
) -> CpStatus {
    guarded(|| {
        let ok = ok.as_mut().ok_or_else(|| null("ok"))?;
        let tag = read_str(type_tag, "type_tag")?;
        let family: Family = tag.parse().map_err(lib)?;
        let ty = AffineType::new(family, rank).map_err(lib)?;
        *ok = verify_type(ty, j_max).map_err(lib)?.ok();
        Ok(())
    })
}
