//! C ABI over the groupoid reconstruction library.
//!
//! All structured data crosses the boundary as JSON in the same formats the
//! CLI uses (instance files, presentation files, explicit groupoid files),
//! so bindings in other languages only need strings, opaque handles and the
//! status codes below.  Strings returned through out-parameters are owned by
//! the caller and must be released with `gpdrec_string_free`.

use gpdrec::algebra::{
    export_presentation, sample_permutation, sample_sigma, scramble, Presentation,
};
use gpdrec::germ::{pipeline_outcome, roundtrip_once, PipelineOutcome};
use gpdrec::groupoid::{Cocycle, FiniteGroupoid};
use gpdrec::instance::{
    groupoid_to_explicit, parse_instance, parse_presentation, write_presentation,
};
use gpdrec::iso::identity_iso;
use gpdrec::normalizer::{compute_n_bruteforce, lbh_check, NormalizerCaps};
use gpdrec::ring::Ring;
use rand_chacha::ChaCha12Rng;
use rand_core::SeedableRng;
use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::ptr;

/// Status codes mirroring the CLI exit codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GpdStatus {
    /// Operation succeeded and all asserted properties hold.
    Ok = 0,
    /// A property failed; details via `gpdrec_last_error`.
    PropertyFailed = 1,
    /// Malformed or rejected input.
    InvalidInput = 2,
    /// An enumeration or search cap was exceeded.
    Capacity = 3,
    /// A required pointer argument was null.
    NullPointer = 4,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn status_of(err: &gpdrec::Error) -> GpdStatus {
    set_error(&err.to_string());
    match err.exit_code() {
        1 => GpdStatus::PropertyFailed,
        3 => GpdStatus::Capacity,
        _ => GpdStatus::InvalidInput,
    }
}

/// A parsed instance: optional ring, optional graded groupoid.
pub struct GpdInstance {
    ring: Option<Ring>,
    groupoid: Option<(FiniteGroupoid, Cocycle)>,
}

/// A validated structure-constant presentation.
pub struct GpdPresentation {
    inner: Presentation,
}

unsafe fn cstr<'a>(p: *const c_char) -> Option<&'a str> {
    if p.is_null() {
        return None;
    }
    unsafe { CStr::from_ptr(p) }.to_str().ok()
}

fn out_string(out: *mut *mut c_char, s: String) -> GpdStatus {
    if out.is_null() {
        return GpdStatus::NullPointer;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            GpdStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            GpdStatus::InvalidInput
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn gpdrec_version() -> *const c_char {
    static VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), "\0");
    VERSION.as_ptr() as *const c_char
}

/// Message for the most recent error on this thread, or null.  The returned
/// string must be freed with `gpdrec_string_free`.
#[no_mangle]
pub extern "C" fn gpdrec_last_error() -> *mut c_char {
    LAST_ERROR.with(|e| match &*e.borrow() {
        Some(c) => c.clone().into_raw(),
        None => ptr::null_mut(),
    })
}

/// Release a string returned by this library.
///
/// # Safety
/// `s` must be a pointer previously returned by a gpdrec function, or null.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

/// Parse an instance file (JSON).  Returns null on error.
///
/// # Safety
/// `json` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_instance_parse(json: *const c_char) -> *mut GpdInstance {
    let Some(text) = (unsafe { cstr(json) }) else {
        set_error("instance JSON pointer was null or not UTF-8");
        return ptr::null_mut();
    };
    match parse_instance(text) {
        Ok((_, inst)) => Box::into_raw(Box::new(GpdInstance {
            ring: inst.ring,
            groupoid: inst.groupoid,
        })),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `h` must come from `gpdrec_instance_parse`, or be null.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_instance_free(h: *mut GpdInstance) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

/// Parse a presentation file (JSON).  Returns null on error.
///
/// # Safety
/// `json` must be a valid NUL-terminated string or null.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_presentation_parse(json: *const c_char) -> *mut GpdPresentation {
    let Some(text) = (unsafe { cstr(json) }) else {
        set_error("presentation JSON pointer was null or not UTF-8");
        return ptr::null_mut();
    };
    match parse_presentation(text) {
        Ok(p) => Box::into_raw(Box::new(GpdPresentation { inner: p })),
        Err(e) => {
            set_error(&e.to_string());
            ptr::null_mut()
        }
    }
}

/// # Safety
/// `h` must come from `gpdrec_presentation_parse` or `gpdrec_scramble`, or be
/// null.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_presentation_free(h: *mut GpdPresentation) {
    if !h.is_null() {
        drop(unsafe { Box::from_raw(h) });
    }
}

fn instance_parts(h: *const GpdInstance) -> Result<(Ring, FiniteGroupoid, Cocycle), GpdStatus> {
    let Some(inst) = (unsafe { h.as_ref() }) else {
        set_error("instance handle was null");
        return Err(GpdStatus::NullPointer);
    };
    let Some(ring) = inst.ring.clone() else {
        set_error("instance has no ring");
        return Err(GpdStatus::InvalidInput);
    };
    let Some((g, c)) = inst.groupoid.clone() else {
        set_error("instance has no groupoid");
        return Err(GpdStatus::InvalidInput);
    };
    Ok((ring, g, c))
}

/// Export the instance's algebra presentation scrambled by a seeded
/// diagonal-preserving graded isomorphism, writing the new handle to `out`.
/// # Safety
/// `h` must be a live instance handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_scramble(
    h: *const GpdInstance,
    seed: u64,
    out: *mut *mut GpdPresentation,
) -> GpdStatus {
    if out.is_null() {
        return GpdStatus::NullPointer;
    }
    let (ring, g, c) = match instance_parts(h) {
        Ok(x) => x,
        Err(s) => return s,
    };
    let mut rng = ChaCha12Rng::seed_from_u64(seed);
    let result = sample_sigma(&g, &ring, &mut rng).and_then(|sigma| {
        let perm = sample_permutation(g.n_arrows(), &mut rng);
        scramble(&g, &c, &ring, &identity_iso(&g), &sigma, &perm)
    });
    match result {
        Ok(s) => {
            unsafe {
                *out = Box::into_raw(Box::new(GpdPresentation {
                    inner: s.presentation,
                }))
            };
            GpdStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Serialize a presentation handle to its JSON file format.
///
/// # Safety
/// `h` must be a live presentation handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_presentation_to_json(
    h: *const GpdPresentation,
    out: *mut *mut c_char,
) -> GpdStatus {
    let Some(p) = (unsafe { h.as_ref() }) else {
        set_error("presentation handle was null");
        return GpdStatus::NullPointer;
    };
    out_string(out, write_presentation(&p.inner))
}

/// Check the local bisection hypothesis on a presentation.  `holds` receives
/// the verdict; a failing hypothesis still returns `Ok` here since the check
/// itself succeeded.
/// # Safety
/// `h` must be a live presentation handle or null; `holds` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_lbh_check(
    h: *const GpdPresentation,
    fiber_cap: u64,
    holds: *mut bool,
) -> GpdStatus {
    let Some(p) = (unsafe { h.as_ref() }) else {
        set_error("presentation handle was null");
        return GpdStatus::NullPointer;
    };
    if holds.is_null() {
        return GpdStatus::NullPointer;
    }
    let caps = NormalizerCaps {
        fiber_cap: fiber_cap as u128,
        ..Default::default()
    };
    match compute_n_bruteforce(&p.inner, &caps) {
        Ok(nz) => {
            unsafe { *holds = lbh_check(&p.inner, &nz).holds() };
            GpdStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Run the reconstruction pipeline on a presentation.  On success writes the
/// recovered groupoid as an instance-file JSON string.  A failed local
/// bisection hypothesis returns `PropertyFailed` with the witness in
/// `gpdrec_last_error`.
/// # Safety
/// `h` must be a live presentation handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_reconstruct(
    h: *const GpdPresentation,
    fiber_cap: u64,
    out: *mut *mut c_char,
) -> GpdStatus {
    let Some(p) = (unsafe { h.as_ref() }) else {
        set_error("presentation handle was null");
        return GpdStatus::NullPointer;
    };
    if out.is_null() {
        return GpdStatus::NullPointer;
    }
    let caps = NormalizerCaps {
        fiber_cap: fiber_cap as u128,
        ..Default::default()
    };
    match pipeline_outcome(&p.inner, &caps) {
        Ok(PipelineOutcome::Reconstructed(o)) => {
            let explicit = groupoid_to_explicit(&o.groupoid, &o.cocycle);
            let inst = serde_json::json!({ "groupoid": { "explicit": explicit } });
            out_string(
                out,
                serde_json::to_string_pretty(&inst).expect("groupoid serializes"),
            )
        }
        Ok(PipelineOutcome::LbhFails { verdict, .. }) => {
            if let gpdrec::normalizer::LbhVerdict::Fails { m, .. } = verdict {
                set_error(&format!(
                    "local bisection hypothesis fails; witness coefficients {m:?}"
                ));
            }
            GpdStatus::PropertyFailed
        }
        Err(e) => status_of(&e),
    }
}

/// scramble + reconstruct + graded-isomorphism check for `seeds` consecutive
/// seeds starting at `base_seed`.  Returns `Ok` when every seed recovers the
/// original groupoid.
/// # Safety
/// `h` must be a live instance handle or null.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_roundtrip(
    h: *const GpdInstance,
    base_seed: u64,
    seeds: u64,
    fiber_cap: u64,
) -> GpdStatus {
    let (ring, g, c) = match instance_parts(h) {
        Ok(x) => x,
        Err(s) => return s,
    };
    let caps = NormalizerCaps {
        fiber_cap: fiber_cap as u128,
        ..Default::default()
    };
    for i in 0..seeds {
        match roundtrip_once(&g, &c, &ring, base_seed.wrapping_add(i), &caps) {
            Ok((true, _)) => {}
            Ok((false, _)) => {
                set_error(&format!(
                    "seed {} failed to recover the groupoid",
                    base_seed + i
                ));
                return GpdStatus::PropertyFailed;
            }
            Err(e) => return status_of(&e),
        }
    }
    GpdStatus::Ok
}

/// Exhaustive unit census of R[G] for the ring of the instance and a cyclic
/// group of the given order.
/// # Safety
/// `h` must be a live instance handle or null; the count pointers must be
/// writable.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_unit_census_cyclic(
    h: *const GpdInstance,
    group_order: usize,
    cap: u64,
    unit_count: *mut usize,
    nontrivial_count: *mut usize,
) -> GpdStatus {
    let Some(inst) = (unsafe { h.as_ref() }) else {
        set_error("instance handle was null");
        return GpdStatus::NullPointer;
    };
    let Some(ring) = inst.ring.clone() else {
        set_error("instance has no ring");
        return GpdStatus::InvalidInput;
    };
    if unit_count.is_null() || nontrivial_count.is_null() {
        return GpdStatus::NullPointer;
    }
    let group = match gpdrec::group::FiniteGroup::cyclic(group_order) {
        Ok(g) => g,
        Err(e) => return status_of(&e),
    };
    match gpdrec::group::unit_census(&ring, &group, cap as u128) {
        Ok(census) => {
            unsafe {
                *unit_count = census.unit_count;
                *nontrivial_count = census.nontrivial_count;
            }
            GpdStatus::Ok
        }
        Err(e) => status_of(&e),
    }
}

/// Export the unscrambled presentation of an instance as JSON.
///
/// # Safety
/// `h` must be a live instance handle or null; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn gpdrec_export_presentation(
    h: *const GpdInstance,
    out: *mut *mut c_char,
) -> GpdStatus {
    let (ring, g, c) = match instance_parts(h) {
        Ok(x) => x,
        Err(s) => return s,
    };
    match export_presentation(&g, &c, &ring) {
        Ok(p) => out_string(out, write_presentation(&p)),
        Err(e) => status_of(&e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CString {
        CString::new(s).unwrap()
    }

    #[test]
    fn version_is_exposed() {
        let v = unsafe { CStr::from_ptr(gpdrec_version()) };
        assert_eq!(v.to_str().unwrap(), env!("CARGO_PKG_VERSION"));
    }

    #[test]
    fn parse_and_roundtrip_through_the_abi() {
        unsafe {
            let json = c(r#"{"ring": {"mod": 2}, "groupoid": {"pair": 2}}"#);
            let inst = gpdrec_instance_parse(json.as_ptr());
            assert!(!inst.is_null());

            let mut pres: *mut GpdPresentation = ptr::null_mut();
            assert_eq!(gpdrec_scramble(inst, 5, &mut pres), GpdStatus::Ok);
            assert!(!pres.is_null());

            let mut holds = false;
            assert_eq!(gpdrec_lbh_check(pres, 10_000, &mut holds), GpdStatus::Ok);
            assert!(holds);

            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(gpdrec_reconstruct(pres, 10_000, &mut out), GpdStatus::Ok);
            let text = CStr::from_ptr(out).to_str().unwrap().to_string();
            assert!(text.contains("explicit"));
            gpdrec_string_free(out);

            assert_eq!(gpdrec_roundtrip(inst, 0, 3, 10_000), GpdStatus::Ok);

            gpdrec_presentation_free(pres);
            gpdrec_instance_free(inst);
        }
    }

    #[test]
    fn lbh_failure_surfaces_as_property_failed() {
        unsafe {
            let json = c(r#"{"ring": {"mod": 4}, "groupoid": {"group": {"cyclic": 2}}}"#);
            let inst = gpdrec_instance_parse(json.as_ptr());
            assert!(!inst.is_null());
            let mut pres: *mut GpdPresentation = ptr::null_mut();
            assert_eq!(gpdrec_scramble(inst, 1, &mut pres), GpdStatus::Ok);
            let mut out: *mut c_char = ptr::null_mut();
            assert_eq!(
                gpdrec_reconstruct(pres, 10_000, &mut out),
                GpdStatus::PropertyFailed
            );
            let err = gpdrec_last_error();
            assert!(!err.is_null());
            let msg = CStr::from_ptr(err).to_str().unwrap().to_string();
            assert!(msg.contains("local bisection hypothesis"));
            gpdrec_string_free(err);
            gpdrec_presentation_free(pres);
            gpdrec_instance_free(inst);
        }
    }

    #[test]
    fn census_and_errors() {
        unsafe {
            let json = c(r#"{"ring": {"mod": 4}}"#);
            let inst = gpdrec_instance_parse(json.as_ptr());
            let (mut units, mut nontrivial) = (0usize, 0usize);
            assert_eq!(
                gpdrec_unit_census_cyclic(inst, 2, 1 << 20, &mut units, &mut nontrivial),
                GpdStatus::Ok
            );
            assert_eq!((units, nontrivial), (8, 4));
            // cap exceeded
            assert_eq!(
                gpdrec_unit_census_cyclic(inst, 4, 10, &mut units, &mut nontrivial),
                GpdStatus::Capacity
            );
            gpdrec_instance_free(inst);

            let bad = c("not json");
            assert!(gpdrec_instance_parse(bad.as_ptr()).is_null());
            let err = gpdrec_last_error();
            assert!(!err.is_null());
            gpdrec_string_free(err);
        }
    }
}
