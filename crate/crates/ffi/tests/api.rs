use std::ffi::{c_char, CStr};
use std::ptr;

use positroid_ffi::*;

fn last_error() -> String {
    let mut buf = [0 as c_char; 256];
    let n = unsafe { positroid_last_error(buf.as_mut_ptr(), buf.len()) };
    assert!(n > 0);
    unsafe { CStr::from_ptr(buf.as_ptr()) }
        .to_string_lossy()
        .into_owned()
}

fn perm(window: &[i64]) -> *mut PositroidPerm {
    let mut p = ptr::null_mut();
    let s = unsafe { positroid_perm_new(window.as_ptr(), window.len(), &mut p) };
    assert_eq!(s, PositroidStatus::Ok);
    p
}

#[test]
fn permutation_queries() {
    let p = perm(&[3, 4, 8, 7, 6, 9, 10, 13]);
    let mut out = 0usize;
    unsafe {
        assert_eq!(positroid_perm_n(p), 8);
        assert_eq!(positroid_perm_rank(p, &mut out), PositroidStatus::Ok);
        assert_eq!(out, 3);
        assert_eq!(
            positroid_perm_rank_interval(p, 2, 4, &mut out),
            PositroidStatus::Ok
        );
        assert_eq!(out, 3);
        assert_eq!(positroid_perm_length(p, &mut out), PositroidStatus::Ok);
        assert_eq!(out, 5);
        let mut small = [0i64; 4];
        assert_eq!(
            positroid_perm_window(p, small.as_mut_ptr(), 4),
            PositroidStatus::BufferTooSmall
        );
        assert_eq!(
            positroid_perm_rank_interval(p, 9, 1, &mut out),
            PositroidStatus::InvalidArgument
        );
        positroid_perm_free(p);
    }
}

#[test]
fn family_round_trip() {
    let p = perm(&[3, 4, 8, 7, 6, 9, 10, 13]);
    unsafe {
        let mut f = ptr::null_mut();
        assert_eq!(positroid_perm_family(p, &mut f), PositroidStatus::Ok);
        assert_eq!(positroid_family_len(f), 4);
        let (mut r, mut s, mut l) = (0, 0, 0);
        assert_eq!(
            positroid_family_entry(f, 3, &mut r, &mut s, &mut l),
            PositroidStatus::Ok
        );
        assert_eq!((r, s, l), (1, 5, 2));
        assert_eq!(
            positroid_family_entry(f, 4, &mut r, &mut s, &mut l),
            PositroidStatus::OutOfRange
        );
        let mut v = 99;
        assert_eq!(positroid_family_violations(f, &mut v), PositroidStatus::Ok);
        assert_eq!(v, 0);
        assert_eq!(positroid_family_core_len(f, &mut v), PositroidStatus::Ok);
        assert_eq!(v, 4);
        let mut q = ptr::null_mut();
        assert_eq!(positroid_family_to_perm(f, &mut q), PositroidStatus::Ok);
        let mut w = [0i64; 8];
        assert_eq!(
            positroid_perm_window(q, w.as_mut_ptr(), 8),
            PositroidStatus::Ok
        );
        assert_eq!(w, [3, 4, 8, 7, 6, 9, 10, 13]);
        let mut json = ptr::null_mut();
        assert_eq!(positroid_family_to_json(f, &mut json), PositroidStatus::Ok);
        assert!(CStr::from_ptr(json)
            .to_str()
            .unwrap()
            .starts_with(r#"{"n":8,"k":3,"sets":"#));
        positroid_string_free(json);
        positroid_perm_free(q);
        positroid_family_free(f);
        positroid_perm_free(p);
    }
}

#[test]
fn family_from_arrays() {
    let (ranks, starts, lens) = ([2usize, 2, 3], [1usize, 3, 1], [3usize, 3, 5]);
    unsafe {
        let mut f = ptr::null_mut();
        let s = positroid_family_new(
            6,
            4,
            ranks.as_ptr(),
            starts.as_ptr(),
            lens.as_ptr(),
            3,
            &mut f,
        );
        assert_eq!(s, PositroidStatus::Ok);
        let mut c = 0;
        assert_eq!(positroid_family_core_len(f, &mut c), PositroidStatus::Ok);
        assert_eq!(c, 3);
        let mut r = 0;
        assert_eq!(positroid_family_rank(f, 2, 3, &mut r), PositroidStatus::Ok);
        assert_eq!(r, 3);
        positroid_family_free(f);

        // two entries that meet in two arcs fail the axioms
        let (ranks, starts, lens) = ([1usize, 1], [1usize, 3], [3usize, 3]);
        let s = positroid_family_new(
            4,
            2,
            ranks.as_ptr(),
            starts.as_ptr(),
            lens.as_ptr(),
            2,
            &mut f,
        );
        assert_eq!(s, PositroidStatus::Ok);
        let mut q = ptr::null_mut();
        assert_eq!(
            positroid_family_to_perm(f, &mut q),
            PositroidStatus::NotValidated
        );
        assert!(q.is_null());
        positroid_family_free(f);
    }
}

#[test]
fn retrieval_and_errors() {
    unsafe {
        let (ranks, starts, lens) = ([1usize, 3], [3usize, 1], [2usize, 5]);
        let mut p = ptr::null_mut();
        let s = positroid_retrieve(5, ranks.as_ptr(), starts.as_ptr(), lens.as_ptr(), 2, &mut p);
        assert_eq!(s, PositroidStatus::Ok);
        let mut json = ptr::null_mut();
        assert_eq!(positroid_perm_to_json(p, &mut json), PositroidStatus::Ok);
        assert_eq!(
            CStr::from_ptr(json).to_str().unwrap(),
            r#"{"n":5,"window":[5,6,4,7,8]}"#
        );
        positroid_string_free(json);
        positroid_perm_free(p);

        let s = positroid_retrieve(5, ranks.as_ptr(), starts.as_ptr(), lens.as_ptr(), 1, &mut p);
        assert_eq!(s, PositroidStatus::RetrievalFailed);
        assert!(last_error().starts_with("MissingFullLabel"));

        assert_eq!(
            positroid_perm_rank(ptr::null(), ptr::null_mut()),
            PositroidStatus::NullPointer
        );
        let bad = [3i64, 3, 6];
        assert_eq!(
            positroid_perm_new(bad.as_ptr(), 3, &mut p),
            PositroidStatus::InvalidArgument
        );
        assert!(last_error().contains("same residue"));
        positroid_perm_free(ptr::null_mut());
        positroid_family_free(ptr::null_mut());
        positroid_string_free(ptr::null_mut());
    }
}
