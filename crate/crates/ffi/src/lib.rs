//! C ABI for `cubeiso`.
//!
//! Families and certificates are opaque handles created and freed here.
//! Every fallible call returns a [`CubeisoStatus`] and writes results
//! through out-pointers; on failure [`cubeiso_last_error_message`] describes
//! what went wrong on the calling thread. Strings returned to the caller
//! must be released with [`cubeiso_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use cubeiso::antipodal::{extremal_family, theorem_rhs};
use cubeiso::binary_order::{f_closed_form, initial_segment};
use cubeiso::certificate::{trace_induction, verify_certificate, Certificate};
use cubeiso::{Error, Family};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubeisoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    /// Well-formed request that is too large (dimension cap, enumeration
    /// limits).
    Capability = 4,
    CertificateRejected = 5,
    Internal = 6,
}

/// Opaque family of subsets of `[n]`.
pub struct CubeisoFamily(Family);

/// Opaque induction certificate.
pub struct CubeisoCertificate(Certificate);

/// Counts describing one family.
#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CubeisoProfile {
    pub n: u32,
    pub size: u64,
    pub internal_edges: u64,
    pub edge_boundary: u64,
    /// `2e(A) + |A ∩ Ā|`
    pub potential: u64,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let text = CString::new(msg.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = text);
}

fn status_of(e: &Error) -> CubeisoStatus {
    match e {
        Error::Parse(_) => CubeisoStatus::ParseError,
        Error::DimensionTooLarge { .. } | Error::Capability(_) => CubeisoStatus::Capability,
        Error::Invariant(_) => CubeisoStatus::Internal,
        _ => CubeisoStatus::InvalidArgument,
    }
}

struct Fail(CubeisoStatus, String);

impl From<Error> for Fail {
    fn from(e: Error) -> Self {
        Fail(status_of(&e), e.to_string())
    }
}

fn null(what: &str) -> Fail {
    Fail(CubeisoStatus::NullPointer, format!("{what} is null"))
}

/// Runs `body`, turning errors and panics into a status and a message.
fn guard(body: impl FnOnce() -> Result<(), Fail>) -> CubeisoStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => {
            set_error("");
            CubeisoStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            CubeisoStatus::Internal
        }
    }
}

unsafe fn out_ref<'a, T>(p: *mut T, what: &str) -> Result<&'a mut T, Fail> {
    // SAFETY: the caller promises `p` is null or valid for writes.
    unsafe { p.as_mut() }.ok_or_else(|| null(what))
}

unsafe fn family_ref<'a>(p: *const CubeisoFamily) -> Result<&'a Family, Fail> {
    // SAFETY: the caller promises `p` is null or a live handle.
    unsafe { p.as_ref() }.map(|f| &f.0).ok_or_else(|| null("family"))
}

unsafe fn text_arg<'a>(p: *const c_char) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(null("text"));
    }
    // SAFETY: the caller promises a NUL-terminated string.
    unsafe { CStr::from_ptr(p) }
        .to_str()
        .map_err(|_| Fail(CubeisoStatus::ParseError, "text is not UTF-8".into()))
}

fn give_family(out: &mut *mut CubeisoFamily, family: Family) {
    *out = Box::into_raw(Box::new(CubeisoFamily(family)));
}

fn give_string(out: &mut *mut c_char, text: String) -> Result<(), Fail> {
    *out = CString::new(text).map_err(|_| Fail(CubeisoStatus::Internal, "NUL in output".into()))?.into_raw();
    Ok(())
}

/// Message for the last failed call on this thread, or an empty string.
/// The pointer stays valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cubeiso_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// # Safety
/// `s` must be null or a string returned by this library, not yet freed.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_string_free(s: *mut c_char) {
    if !s.is_null() {
        // SAFETY: allocated by `CString::into_raw` in `give_string`.
        drop(unsafe { CString::from_raw(s) });
    }
}

/// The empty family of `Q_n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_new(n: u32, out: *mut *mut CubeisoFamily) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        give_family(out, Family::empty(n)?);
        Ok(())
    })
}

/// The family with the given vertex codes (bit `i-1` of a code marks
/// element `i`).
///
/// # Safety
/// `codes` must point to `len` readable values (or be null when `len` is 0)
/// and `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_from_codes(
    n: u32,
    codes: *const u32,
    len: usize,
    out: *mut *mut CubeisoFamily,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let codes: &[u32] = if len == 0 {
            &[]
        } else if codes.is_null() {
            return Err(null("codes"));
        } else {
            // SAFETY: the caller promises `len` readable values.
            unsafe { std::slice::from_raw_parts(codes, len) }
        };
        give_family(out, Family::from_codes(n, codes.iter().copied())?);
        Ok(())
    })
}

/// `I_{n,k}`: the vertices with code below `k`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_initial_segment(
    n: u32,
    k: u64,
    out: *mut *mut CubeisoFamily,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        give_family(out, initial_segment(n, k)?);
        Ok(())
    })
}

/// `I_{n,m/2} ∪ Ī_{n,m/2}` for even `m`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_extremal(n: u32, m: u64, out: *mut *mut CubeisoFamily) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        give_family(out, extremal_family(n, m)?);
        Ok(())
    })
}

/// Parses the `n=<n> hex=<digits>` form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_parse(text: *const c_char, out: *mut *mut CubeisoFamily) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let text = unsafe { text_arg(text)? };
        give_family(out, text.parse()?);
        Ok(())
    })
}

/// Writes the `n=<n> hex=<digits>` form; free it with
/// [`cubeiso_string_free`].
///
/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_serialize(
    family: *const CubeisoFamily,
    out: *mut *mut c_char,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let family = unsafe { family_ref(family)? };
        give_string(out, family.to_string())
    })
}

/// # Safety
/// `family` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_free(family: *mut CubeisoFamily) {
    if !family.is_null() {
        // SAFETY: allocated by `give_family`.
        drop(unsafe { Box::from_raw(family) });
    }
}

/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_size(family: *const CubeisoFamily, out: *mut u64) -> CubeisoStatus {
    guard(|| {
        *unsafe { out_ref(out, "out")? } = unsafe { family_ref(family)? }.size();
        Ok(())
    })
}

/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_dimension(family: *const CubeisoFamily, out: *mut u32) -> CubeisoStatus {
    guard(|| {
        *unsafe { out_ref(out, "out")? } = unsafe { family_ref(family)? }.dimension();
        Ok(())
    })
}

/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_family_profile(
    family: *const CubeisoFamily,
    out: *mut CubeisoProfile,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let p = unsafe { family_ref(family)? }.profile();
        *out = CubeisoProfile {
            n: p.n,
            size: p.size,
            internal_edges: p.internal,
            edge_boundary: p.boundary,
            potential: p.potential,
        };
        Ok(())
    })
}

/// `F(k)`, the number of edges inside the first `k` vertices in binary
/// order.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_f_value(k: u64, out: *mut u64) -> CubeisoStatus {
    guard(|| {
        *unsafe { out_ref(out, "out")? } = f_closed_form(k);
        Ok(())
    })
}

/// Smallest edge boundary of an antipodal family of even size `m` in `Q_n`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_theorem_rhs(n: u32, m: u64, out: *mut u64) -> CubeisoStatus {
    guard(|| {
        *unsafe { out_ref(out, "out")? } = theorem_rhs(n, m)?;
        Ok(())
    })
}

/// Traces the induction on `family`.
///
/// # Safety
/// `family` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_trace(
    family: *const CubeisoFamily,
    out: *mut *mut CubeisoCertificate,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let cert = trace_induction(unsafe { family_ref(family)? })?;
        *out = Box::into_raw(Box::new(CubeisoCertificate(cert)));
        Ok(())
    })
}

/// `Ok` when `cert` checks out against `family`, `CertificateRejected`
/// otherwise, with the failure locus in the last error message.
///
/// # Safety
/// Both handles must be live.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_certificate_verify(
    cert: *const CubeisoCertificate,
    family: *const CubeisoFamily,
) -> CubeisoStatus {
    guard(|| {
        let cert = unsafe { cert.as_ref() }.ok_or_else(|| null("certificate"))?;
        let family = unsafe { family_ref(family)? };
        verify_certificate(&cert.0, family).map_err(|m| Fail(CubeisoStatus::CertificateRejected, m.to_string()))
    })
}

/// Parses the certificate text form.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_certificate_parse(
    text: *const c_char,
    out: *mut *mut CubeisoCertificate,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let cert: Certificate = unsafe { text_arg(text)? }.parse()?;
        *out = Box::into_raw(Box::new(CubeisoCertificate(cert)));
        Ok(())
    })
}

/// Writes the certificate text form; free it with [`cubeiso_string_free`].
///
/// # Safety
/// `cert` must be a live handle and `out` valid for writes.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_certificate_serialize(
    cert: *const CubeisoCertificate,
    out: *mut *mut c_char,
) -> CubeisoStatus {
    guard(|| {
        let out = unsafe { out_ref(out, "out")? };
        let cert = unsafe { cert.as_ref() }.ok_or_else(|| null("certificate"))?;
        give_string(out, cert.0.to_string())
    })
}

/// # Safety
/// `cert` must be null or a live handle; it is invalid afterwards.
#[no_mangle]
pub unsafe extern "C" fn cubeiso_certificate_free(cert: *mut CubeisoCertificate) {
    if !cert.is_null() {
        // SAFETY: allocated by `cubeiso_trace` or `cubeiso_certificate_parse`.
        drop(unsafe { Box::from_raw(cert) });
    }
}
