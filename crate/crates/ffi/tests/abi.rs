use std::ffi::{CStr, CString};
use std::ptr;

use cubeiso_ffi::*;

fn last_error() -> String {
    unsafe { CStr::from_ptr(cubeiso_last_error_message()) }.to_string_lossy().into_owned()
}

unsafe fn take_string(s: *mut std::ffi::c_char) -> String {
    let text = unsafe { CStr::from_ptr(s) }.to_string_lossy().into_owned();
    unsafe { cubeiso_string_free(s) };
    text
}

#[test]
fn family_round_trip() {
    unsafe {
        let mut fam = ptr::null_mut();
        assert_eq!(cubeiso_family_initial_segment(3, 5, &mut fam), CubeisoStatus::Ok);
        let mut text = ptr::null_mut();
        assert_eq!(cubeiso_family_serialize(fam, &mut text), CubeisoStatus::Ok);
        let text = take_string(text);
        assert_eq!(text, "n=3 hex=f1");

        let c = CString::new(text).unwrap();
        let mut back = ptr::null_mut();
        assert_eq!(cubeiso_family_parse(c.as_ptr(), &mut back), CubeisoStatus::Ok);
        let mut profile = CubeisoProfile::default();
        assert_eq!(cubeiso_family_profile(back, &mut profile), CubeisoStatus::Ok);
        // I_{3,5}: 5 edges, boundary 3*5 - 10
        assert_eq!(
            profile,
            CubeisoProfile { n: 3, size: 5, internal_edges: 5, edge_boundary: 5, potential: 12 }
        );
        cubeiso_family_free(fam);
        cubeiso_family_free(back);
    }
}

#[test]
fn codes_and_scalars() {
    unsafe {
        let codes = [0u32, 7];
        let mut fam = ptr::null_mut();
        assert_eq!(cubeiso_family_from_codes(3, codes.as_ptr(), 2, &mut fam), CubeisoStatus::Ok);
        let (mut size, mut n) = (0u64, 0u32);
        assert_eq!(cubeiso_family_size(fam, &mut size), CubeisoStatus::Ok);
        assert_eq!(cubeiso_family_dimension(fam, &mut n), CubeisoStatus::Ok);
        assert_eq!((size, n), (2, 3));
        cubeiso_family_free(fam);

        let mut value = 0u64;
        assert_eq!(cubeiso_f_value(8, &mut value), CubeisoStatus::Ok);
        assert_eq!(value, 12);
        assert_eq!(cubeiso_theorem_rhs(4, 4, &mut value), CubeisoStatus::Ok);
        assert_eq!(value, 12);
    }
}

#[test]
fn errors_carry_status_and_message() {
    unsafe {
        let mut value = 0u64;
        assert_eq!(cubeiso_theorem_rhs(3, 5, &mut value), CubeisoStatus::InvalidArgument);
        assert!(last_error().contains("even"));
        assert_eq!(cubeiso_f_value(3, ptr::null_mut()), CubeisoStatus::NullPointer);

        let bad = CString::new("n=3 hex=F1").unwrap();
        let mut fam = ptr::null_mut();
        assert_eq!(cubeiso_family_parse(bad.as_ptr(), &mut fam), CubeisoStatus::ParseError);
        assert!(fam.is_null());
        assert_eq!(cubeiso_family_new(40, &mut fam), CubeisoStatus::Capability);
        let codes = [9u32];
        assert_eq!(cubeiso_family_from_codes(3, codes.as_ptr(), 1, &mut fam), CubeisoStatus::InvalidArgument);
        assert_eq!(cubeiso_family_from_codes(3, ptr::null(), 1, &mut fam), CubeisoStatus::NullPointer);
        assert_eq!(cubeiso_family_new(3, &mut fam), CubeisoStatus::Ok);
        assert_eq!(last_error(), "");
        cubeiso_family_free(fam);
        cubeiso_family_free(ptr::null_mut());
        cubeiso_string_free(ptr::null_mut());
    }
}

#[test]
fn certificates_through_the_abi() {
    unsafe {
        let mut fam = ptr::null_mut();
        assert_eq!(cubeiso_family_extremal(4, 4, &mut fam), CubeisoStatus::Ok);
        let mut cert = ptr::null_mut();
        assert_eq!(cubeiso_trace(fam, &mut cert), CubeisoStatus::Ok);
        assert_eq!(cubeiso_certificate_verify(cert, fam), CubeisoStatus::Ok);

        let mut text = ptr::null_mut();
        assert_eq!(cubeiso_certificate_serialize(cert, &mut text), CubeisoStatus::Ok);
        let text = take_string(text);
        assert!(text.starts_with("certificate\nsubject n=4 hex="));

        let corrupted = text.replacen("slack bound value=0", "slack bound value=-1", 1);
        assert_ne!(corrupted, text);
        let c = CString::new(corrupted).unwrap();
        let mut bad = ptr::null_mut();
        assert_eq!(cubeiso_certificate_parse(c.as_ptr(), &mut bad), CubeisoStatus::Ok);
        assert_eq!(cubeiso_certificate_verify(bad, fam), CubeisoStatus::CertificateRejected);
        assert!(last_error().contains("root"));

        let mut other = ptr::null_mut();
        assert_eq!(cubeiso_family_initial_segment(4, 4, &mut other), CubeisoStatus::Ok);
        assert_eq!(cubeiso_certificate_verify(cert, other), CubeisoStatus::CertificateRejected);

        cubeiso_certificate_free(bad);
        cubeiso_certificate_free(cert);
        cubeiso_family_free(other);
        cubeiso_family_free(fam);
    }
}
