//! C ABI for the itershadow toolkit: opaque family handles, integer error
//! codes and scalar out-parameters, so other languages can bind without
//! touching Rust types.
//!
//! Conventions: every function returns an error code (`ITERSHADOW_OK` on
//! success); results are written through out-pointers; handles are created
//! and released only by this library.

use itershadow::bound::bound_calculator;
use itershadow::error::Error;
use itershadow::family::LayerFamily;
use itershadow::generate::FamilySpec;
use itershadow::lfam::{read_family, write_family};
use itershadow::spectra::spectrum_report;
use num::ToPrimitive;
use std::ffi::CStr;
use std::os::raw::{c_char, c_double, c_int};
use std::path::Path;

/// Success.
pub const ITERSHADOW_OK: c_int = 0;
/// A verification-style failure (a checked inequality did not hold).
pub const ITERSHADOW_ERR_VERIFICATION: c_int = 1;
/// Invalid input: bad parameters, null pointers, malformed strings.
pub const ITERSHADOW_ERR_INPUT: c_int = 2;
/// A capacity guard refused the computation at this size.
pub const ITERSHADOW_ERR_CAPACITY: c_int = 3;

/// Opaque family handle; create with the constructor functions and release
/// with `itershadow_family_free`.
pub struct ItershadowFamily {
    inner: LayerFamily,
}

fn code(e: &Error) -> c_int {
    e.exit_code() as c_int
}

unsafe fn cstr<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    CStr::from_ptr(p).to_str().ok()
}

fn hand_out(f: LayerFamily, out: *mut *mut ItershadowFamily) -> c_int {
    let boxed = Box::new(ItershadowFamily { inner: f });
    unsafe { *out = Box::into_raw(boxed) };
    ITERSHADOW_OK
}

/// Create an empty family on layer k of the n-cube.
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_new(
    n: u32,
    k: u32,
    out: *mut *mut ItershadowFamily,
) -> c_int {
    if out.is_null() {
        return ITERSHADOW_ERR_INPUT;
    }
    match LayerFamily::empty(n, k) {
        Ok(f) => hand_out(f, out),
        Err(e) => code(&e),
    }
}

/// Create a named middle-layer family from a spec string (same syntax as
/// the CLI `--family` flag: "dictator", "half-half", "lex:SIZE",
/// "random:P", "weight:E1,..:T", "file:PATH").
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_generate(
    spec: *const c_char,
    n: u32,
    seed: u64,
    out: *mut *mut ItershadowFamily,
) -> c_int {
    if out.is_null() {
        return ITERSHADOW_ERR_INPUT;
    }
    let Some(spec) = cstr(spec) else {
        return ITERSHADOW_ERR_INPUT;
    };
    let result = FamilySpec::parse(spec).and_then(|s| s.generate(n, seed));
    match result {
        Ok(f) => hand_out(f, out),
        Err(e) => code(&e),
    }
}

/// Load a family from an LFAM file.
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_load(
    path: *const c_char,
    out: *mut *mut ItershadowFamily,
) -> c_int {
    if out.is_null() {
        return ITERSHADOW_ERR_INPUT;
    }
    let Some(path) = cstr(path) else {
        return ITERSHADOW_ERR_INPUT;
    };
    match read_family(Path::new(path)) {
        Ok(f) => hand_out(f, out),
        Err(e) => code(&e),
    }
}

/// Write a family to an LFAM file (plus its JSON manifest sidecar).
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_save(
    family: *const ItershadowFamily,
    path: *const c_char,
) -> c_int {
    let (Some(f), Some(path)) = (family.as_ref(), cstr(path)) else {
        return ITERSHADOW_ERR_INPUT;
    };
    match write_family(&f.inner, Path::new(path)) {
        Ok(_) => ITERSHADOW_OK,
        Err(e) => code(&e),
    }
}

/// Release a family handle. Null is accepted and ignored.
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_free(family: *mut ItershadowFamily) {
    if !family.is_null() {
        drop(Box::from_raw(family));
    }
}

/// Insert the set given as a bit mask (bit i = element i+1).
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_insert(
    family: *mut ItershadowFamily,
    mask: u64,
) -> c_int {
    let Some(f) = family.as_mut() else {
        return ITERSHADOW_ERR_INPUT;
    };
    if mask.count_ones() != f.inner.k() || mask & !((1u64 << f.inner.n()) - 1) != 0 {
        return ITERSHADOW_ERR_INPUT;
    }
    f.inner.insert_mask(mask);
    ITERSHADOW_OK
}

/// Membership test for a bit-mask set.
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_contains(
    family: *const ItershadowFamily,
    mask: u64,
    out: *mut c_int,
) -> c_int {
    let (Some(f), false) = (family.as_ref(), out.is_null()) else {
        return ITERSHADOW_ERR_INPUT;
    };
    if mask.count_ones() != f.inner.k() {
        return ITERSHADOW_ERR_INPUT;
    }
    *out = c_int::from(f.inner.contains_mask(mask));
    ITERSHADOW_OK
}

/// Number of member sets.
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_count(
    family: *const ItershadowFamily,
    out: *mut u64,
) -> c_int {
    let (Some(f), false) = (family.as_ref(), out.is_null()) else {
        return ITERSHADOW_ERR_INPUT;
    };
    *out = f.inner.popcount();
    ITERSHADOW_OK
}

/// Measure of the family within its layer.
#[no_mangle]
pub unsafe extern "C" fn itershadow_family_measure(
    family: *const ItershadowFamily,
    out: *mut c_double,
) -> c_int {
    let (Some(f), false) = (family.as_ref(), out.is_null()) else {
        return ITERSHADOW_ERR_INPUT;
    };
    *out = f.inner.measure_f64();
    ITERSHADOW_OK
}

/// Measure of the r-iterated upper shadow.
#[no_mangle]
pub unsafe extern "C" fn itershadow_shadow_measure(
    family: *const ItershadowFamily,
    r: u32,
    out: *mut c_double,
) -> c_int {
    let (Some(f), false) = (family.as_ref(), out.is_null()) else {
        return ITERSHADOW_ERR_INPUT;
    };
    match f.inner.iterated_upper_shadow(r) {
        Ok(s) => {
            *out = s.measure_f64();
            ITERSHADOW_OK
        }
        Err(e) => code(&e),
    }
}

/// Measure of the meet of the r-iterated shadows of the family and its
/// complement.
#[no_mangle]
pub unsafe extern "C" fn itershadow_intersection_measure(
    family: *const ItershadowFamily,
    r: u32,
    out: *mut c_double,
) -> c_int {
    let (Some(f), false) = (family.as_ref(), out.is_null()) else {
        return ITERSHADOW_ERR_INPUT;
    };
    match f.inner.intersection_measure(r) {
        Ok(m) => {
            *out = m.to_f64().unwrap_or(f64::NAN);
            ITERSHADOW_OK
        }
        Err(e) => code(&e),
    }
}

/// Density of ordered good distance-(2j) pairs.
#[no_mangle]
pub unsafe extern "C" fn itershadow_pair_density(
    family: *const ItershadowFamily,
    j: u32,
    out: *mut c_double,
) -> c_int {
    let (Some(f), false) = (family.as_ref(), out.is_null()) else {
        return ITERSHADOW_ERR_INPUT;
    };
    match f.inner.pair_census(j) {
        Ok(c) => {
            *out = c.q_f64();
            ITERSHADOW_OK
        }
        Err(e) => code(&e),
    }
}

/// Normalized-Laplacian spectral gap of J(n, n/2, j); `verdict` is 1 when
/// the gap is at least j/(2n), 0 when it is not, and -1 when j/n > 1/10 so
/// the gap theorem's hypothesis fails.
#[no_mangle]
pub unsafe extern "C" fn itershadow_spectral_gap(
    n: u32,
    j: u32,
    out_gap: *mut c_double,
    out_verdict: *mut c_int,
) -> c_int {
    if out_gap.is_null() || out_verdict.is_null() {
        return ITERSHADOW_ERR_INPUT;
    }
    match spectrum_report(n, j) {
        Ok(rep) => {
            *out_gap = rep.gap.to_f64().unwrap_or(f64::NAN);
            *out_verdict = match rep.gap_verdict {
                Some(true) => 1,
                Some(false) => 0,
                None => -1,
            };
            ITERSHADOW_OK
        }
        Err(e) => code(&e),
    }
}

/// Explicit-bound calculator; writes the derived shadow depth r, subcube
/// dimension D and the closed-form lower bound.
#[no_mangle]
pub unsafe extern "C" fn itershadow_bound_calc(
    n: u32,
    epsilon: c_double,
    mu: c_double,
    out_r: *mut u32,
    out_d: *mut u32,
    out_bound: *mut c_double,
) -> c_int {
    if out_r.is_null() || out_d.is_null() || out_bound.is_null() {
        return ITERSHADOW_ERR_INPUT;
    }
    match bound_calculator(n, epsilon, mu) {
        Ok(rep) => {
            *out_r = rep.r;
            *out_d = rep.d_dim;
            *out_bound = rep.explicit_bound;
            ITERSHADOW_OK
        }
        Err(e) => code(&e),
    }
}
