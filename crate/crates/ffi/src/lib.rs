//! C interface to the positroid library.
//!
//! Objects are opaque handles created by `*_new` style functions and released
//! with the matching `*_free`. Every fallible call returns a
//! [`PositroidStatus`]; the message of the last failure on the calling thread
//! is available from [`positroid_last_error`].

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;
use std::slice;

use positroid::diagram::ranked_essential_family;
use positroid::essential::{
    self, permutation_from_family, rank_from_family, validate_chess, Entry,
};
use positroid::geometry;
use positroid::json::{Annotations, FamilyJson, PermJson};
use positroid::retrieval::{retrieve, RankConditionSet};
use positroid::{BoundedAffinePermutation, CyclicInterval, RankedEssentialFamily};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PositroidStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    RetrievalFailed = 3,
    NotValidated = 4,
    BufferTooSmall = 5,
    OutOfRange = 6,
    Panic = 7,
}

/// Opaque bounded affine permutation.
pub struct PositroidPerm(BoundedAffinePermutation);

/// Opaque ranked essential family.
pub struct PositroidFamily(RankedEssentialFamily);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn guard<F>(f: F) -> PositroidStatus
where
    F: FnOnce() -> Result<(), (PositroidStatus, String)>,
{
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => PositroidStatus::Ok,
        Ok(Err((status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PositroidStatus::Panic
        }
    }
}

fn null() -> (PositroidStatus, String) {
    (
        PositroidStatus::NullPointer,
        "null pointer argument".to_string(),
    )
}

fn invalid(e: impl std::fmt::Display) -> (PositroidStatus, String) {
    (PositroidStatus::InvalidArgument, e.to_string())
}

unsafe fn deref<'a, T>(p: *const T) -> Result<&'a T, (PositroidStatus, String)> {
    p.as_ref().ok_or_else(null)
}

unsafe fn input<'a, T>(p: *const T, len: usize) -> Result<&'a [T], (PositroidStatus, String)> {
    if len == 0 {
        Ok(&[])
    } else if p.is_null() {
        Err(null())
    } else {
        Ok(slice::from_raw_parts(p, len))
    }
}

unsafe fn write_out<T>(out: *mut T, value: T) -> Result<(), (PositroidStatus, String)> {
    if out.is_null() {
        return Err(null());
    }
    out.write(value);
    Ok(())
}

/// Copies the last error message of this thread into `buf` (NUL-terminated,
/// truncated to `len`). Returns the full message length without the NUL, or 0
/// when there is no error.
///
/// # Safety
/// `buf` must be null or point to `len` writable bytes.
#[no_mangle]
pub unsafe extern "C" fn positroid_last_error(buf: *mut c_char, len: usize) -> usize {
    LAST_ERROR.with(|e| {
        let e = e.borrow();
        let Some(msg) = e.as_ref() else { return 0 };
        let bytes = msg.as_bytes();
        if !buf.is_null() && len > 0 {
            let n = bytes.len().min(len - 1);
            ptr::copy_nonoverlapping(bytes.as_ptr() as *const c_char, buf, n);
            *buf.add(n) = 0;
        }
        bytes.len()
    })
}

/// Creates a permutation from its window `π(1), …, π(n)`.
///
/// # Safety
/// `window` must point to `n` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_new(
    window: *const i64,
    n: usize,
    out: *mut *mut PositroidPerm,
) -> PositroidStatus {
    guard(|| {
        let w = input(window, n)?.to_vec();
        let p = BoundedAffinePermutation::from_window(w).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(PositroidPerm(p))))
    })
}

/// # Safety
/// `p` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_free(p: *mut PositroidPerm) {
    if !p.is_null() {
        drop(Box::from_raw(p));
    }
}

/// Size `n`, or 0 for a null handle.
///
/// # Safety
/// `p` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_n(p: *const PositroidPerm) -> usize {
    p.as_ref().map_or(0, |p| p.0.n())
}

/// Copies the window into `buf`, which must hold `n` values.
///
/// # Safety
/// `p` must be a live handle and `buf` must point to `len` writable values.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_window(
    p: *const PositroidPerm,
    buf: *mut i64,
    len: usize,
) -> PositroidStatus {
    guard(|| {
        let p = deref(p)?;
        let w = p.0.window();
        if len < w.len() {
            return Err((
                PositroidStatus::BufferTooSmall,
                format!("need {} values", w.len()),
            ));
        }
        if buf.is_null() {
            return Err(null());
        }
        ptr::copy_nonoverlapping(w.as_ptr(), buf, w.len());
        Ok(())
    })
}

/// Rank of the positroid.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_rank(
    p: *const PositroidPerm,
    out: *mut usize,
) -> PositroidStatus {
    guard(|| write_out(out, deref(p)?.0.rank()))
}

/// Rank of the cyclic interval `[start, start + len − 1]`.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_rank_interval(
    p: *const PositroidPerm,
    start: usize,
    len: usize,
    out: *mut usize,
) -> PositroidStatus {
    guard(|| {
        let p = deref(p)?;
        let iv = CyclicInterval::new(p.0.n(), start, len).map_err(invalid)?;
        write_out(out, p.0.rank_interval(&iv))
    })
}

/// Inversion length, the codimension of the positroid cell.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_length(
    p: *const PositroidPerm,
    out: *mut usize,
) -> PositroidStatus {
    guard(|| write_out(out, geometry::length(&deref(p)?.0)))
}

/// The ranked essential family of a permutation.
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_family(
    p: *const PositroidPerm,
    out: *mut *mut PositroidFamily,
) -> PositroidStatus {
    guard(|| {
        let f = ranked_essential_family(&deref(p)?.0);
        write_out(out, Box::into_raw(Box::new(PositroidFamily(f))))
    })
}

/// JSON encoding `{"n":…,"window":[…]}`; release with [`positroid_string_free`].
///
/// # Safety
/// `p` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_perm_to_json(
    p: *const PositroidPerm,
    out: *mut *mut c_char,
) -> PositroidStatus {
    guard(|| {
        let s = serde_json::to_string(&PermJson::from(&deref(p)?.0)).map_err(invalid)?;
        write_out(out, CString::new(s).map_err(invalid)?.into_raw())
    })
}

/// Creates a family from parallel arrays of ranks, starts and lengths. The
/// full-set entry `(k, [1, n])` is added when absent.
///
/// # Safety
/// The three arrays must each hold `count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_new(
    n: usize,
    k: usize,
    ranks: *const usize,
    starts: *const usize,
    lens: *const usize,
    count: usize,
    out: *mut *mut PositroidFamily,
) -> PositroidStatus {
    guard(|| {
        let entries = triples(n, ranks, starts, lens, count)?;
        let f = RankedEssentialFamily::new(n, k, entries).map_err(invalid)?;
        write_out(out, Box::into_raw(Box::new(PositroidFamily(f))))
    })
}

unsafe fn triples(
    n: usize,
    ranks: *const usize,
    starts: *const usize,
    lens: *const usize,
    count: usize,
) -> Result<Vec<Entry>, (PositroidStatus, String)> {
    let (r, s, l) = (
        input(ranks, count)?,
        input(starts, count)?,
        input(lens, count)?,
    );
    (0..count)
        .map(|i| {
            CyclicInterval::new(n, s[i], l[i])
                .map(|iv| Entry::new(r[i], iv))
                .map_err(invalid)
        })
        .collect()
}

/// # Safety
/// `f` must be null or a handle from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_free(f: *mut PositroidFamily) {
    if !f.is_null() {
        drop(Box::from_raw(f));
    }
}

/// Number of entries, including the full-set entry; 0 for a null handle.
///
/// # Safety
/// `f` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_len(f: *const PositroidFamily) -> usize {
    f.as_ref().map_or(0, |f| f.0.len())
}

/// Entry `index` in canonical order (by start, then length).
///
/// # Safety
/// `f` must be a live handle; the outputs must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_entry(
    f: *const PositroidFamily,
    index: usize,
    rank: *mut usize,
    start: *mut usize,
    len: *mut usize,
) -> PositroidStatus {
    guard(|| {
        let f = deref(f)?;
        let e = f.0.entries().get(index).ok_or_else(|| {
            (
                PositroidStatus::OutOfRange,
                format!("index {index} ≥ {}", f.0.len()),
            )
        })?;
        write_out(rank, e.rank)?;
        write_out(start, e.interval.start())?;
        write_out(len, e.interval.len())
    })
}

/// Rank of a cyclic interval from the family.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_rank(
    f: *const PositroidFamily,
    start: usize,
    len: usize,
    out: *mut usize,
) -> PositroidStatus {
    guard(|| {
        let f = deref(f)?;
        let iv = CyclicInterval::new(f.0.n(), start, len).map_err(invalid)?;
        write_out(out, rank_from_family(&f.0, &iv))
    })
}

/// Number of axiom violations (0 for a valid family).
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_violations(
    f: *const PositroidFamily,
    out: *mut usize,
) -> PositroidStatus {
    guard(|| write_out(out, validate_chess(&deref(f)?.0).len()))
}

/// `Σ (k − r) e_I` over the family.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_codim(
    f: *const PositroidFamily,
    out: *mut i64,
) -> PositroidStatus {
    guard(|| write_out(out, geometry::codim_from_family(&deref(f)?.0)))
}

/// The permutation of a valid family.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_to_perm(
    f: *const PositroidFamily,
    out: *mut *mut PositroidPerm,
) -> PositroidStatus {
    guard(|| {
        let p = permutation_from_family(&deref(f)?.0)
            .map_err(|e| (PositroidStatus::NotValidated, e.to_string()))?;
        write_out(out, Box::into_raw(Box::new(PositroidPerm(p))))
    })
}

/// Number of core entries.
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_core_len(
    f: *const PositroidFamily,
    out: *mut usize,
) -> PositroidStatus {
    guard(|| write_out(out, essential::core(&deref(f)?.0).len()))
}

/// JSON encoding with excess, connectedness and core annotations; release
/// with [`positroid_string_free`].
///
/// # Safety
/// `f` must be a live handle; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_family_to_json(
    f: *const PositroidFamily,
    out: *mut *mut c_char,
) -> PositroidStatus {
    guard(|| {
        let ann = Annotations {
            excess: true,
            connected: true,
            core: true,
        };
        let s =
            serde_json::to_string(&FamilyJson::from_family(&deref(f)?.0, ann)).map_err(invalid)?;
        write_out(out, CString::new(s).map_err(invalid)?.into_raw())
    })
}

/// Reconstructs a permutation from rank conditions given as parallel arrays;
/// the conditions must include the full interval.
///
/// # Safety
/// The three arrays must each hold `count` values; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn positroid_retrieve(
    n: usize,
    ranks: *const usize,
    starts: *const usize,
    lens: *const usize,
    count: usize,
    out: *mut *mut PositroidPerm,
) -> PositroidStatus {
    guard(|| {
        let entries = triples(n, ranks, starts, lens, count)?;
        let c = RankConditionSet::from_entries(n, &entries);
        let p = retrieve(&c).map_err(|e| {
            (
                PositroidStatus::RetrievalFailed,
                format!("{}: {e}", e.kind()),
            )
        })?;
        write_out(out, Box::into_raw(Box::new(PositroidPerm(p))))
    })
}

/// Releases a string returned by this library.
///
/// # Safety
/// `s` must be null or a string from this library not yet freed.
#[no_mangle]
pub unsafe extern "C" fn positroid_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
