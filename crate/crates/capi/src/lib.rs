//! C ABI for the divided-powers library.
//!
//! Elements are opaque handles created by `dp_elem_parse` and released with
//! `dp_elem_free`. Every fallible call returns a `DpStatus`; on failure a
//! thread-local message is retrievable through `dp_last_error_message`.
//! All returned strings are heap-allocated and must be released with
//! `dp_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use divided_powers::decomp::{decompose, GenPoly};
use divided_powers::error::Error;
use divided_powers::gamma::GammaElem;
use divided_powers::hilb::{hc_eval, read_rep_json};
use divided_powers::norm::GenericMatrixContext;
use divided_powers::text::{
    element_to_json, parse_element, parse_free_elem, render_element,
};
use divided_powers::words::necklaces_up_to;

/// Result of every fallible call in this interface.
#[repr(C)]
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum DpStatus {
    DpOk = 0,
    DpNullPointer = 1,
    DpInvalidUtf8 = 2,
    DpParseError = 3,
    DpDomainError = 4,
    DpInternalError = 5,
}

/// An element of the degree-n divided-powers algebra (opaque).
pub struct DpElem {
    inner: GammaElem,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg).unwrap_or_else(|_| CString::new("invalid error text").unwrap());
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(err: &Error) -> DpStatus {
    match err {
        Error::Parse { .. } => DpStatus::DpParseError,
        _ => DpStatus::DpDomainError,
    }
}

fn fail(err: Error) -> DpStatus {
    let code = status_of(&err);
    set_error(err.to_string());
    code
}

fn guard(body: impl FnOnce() -> DpStatus) -> DpStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(code) => code,
        Err(_) => {
            set_error("internal panic".into());
            DpStatus::DpInternalError
        }
    }
}

/// # Safety
/// `ptr` must be a valid NUL-terminated string or NULL.
unsafe fn read_str<'a>(ptr: *const c_char) -> Result<&'a str, DpStatus> {
    if ptr.is_null() {
        set_error("null pointer argument".into());
        return Err(DpStatus::DpNullPointer);
    }
    CStr::from_ptr(ptr).to_str().map_err(|_| {
        set_error("argument is not valid UTF-8".into());
        DpStatus::DpInvalidUtf8
    })
}

fn give_string(s: String, out: *mut *mut c_char) -> DpStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return DpStatus::DpNullPointer;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            DpStatus::DpOk
        }
        Err(_) => {
            set_error("output contained an interior NUL".into());
            DpStatus::DpInternalError
        }
    }
}

fn give_elem(e: GammaElem, out: *mut *mut DpElem) -> DpStatus {
    if out.is_null() {
        set_error("null output pointer".into());
        return DpStatus::DpNullPointer;
    }
    unsafe { *out = Box::into_raw(Box::new(DpElem { inner: e })) };
    DpStatus::DpOk
}

/// Most recent error message on this thread, or NULL when none was
/// recorded. The caller owns the returned string.
#[no_mangle]
pub extern "C" fn dp_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|slot| match &*slot.borrow() {
        Some(msg) => msg.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// Parses an element written in the D(n; ...) grammar over m letters.
///
/// # Safety
/// `src` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_elem_parse(
    src: *const c_char,
    n: usize,
    m: u8,
    out: *mut *mut DpElem,
) -> DpStatus {
    guard(|| {
        let text = match read_str(src) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match parse_element(text, n, m) {
            Ok(e) => give_elem(e, out),
            Err(e) => fail(e),
        }
    })
}

/// Parses a free-algebra element ("x1 + 2*x2 - 1") and takes its n-th
/// divided power.
///
/// # Safety
/// `src` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_power(
    src: *const c_char,
    n: usize,
    m: u8,
    out: *mut *mut DpElem,
) -> DpStatus {
    guard(|| {
        let text = match read_str(src) {
            Ok(t) => t,
            Err(code) => return code,
        };
        match parse_free_elem(text, m) {
            Ok(f) => give_elem(GammaElem::gamma_power(&f, n), out),
            Err(e) => fail(e),
        }
    })
}

/// Star product of two elements of the same degree.
///
/// # Safety
/// `lhs` and `rhs` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_elem_mul(
    lhs: *const DpElem,
    rhs: *const DpElem,
    out: *mut *mut DpElem,
) -> DpStatus {
    guard(|| {
        if lhs.is_null() || rhs.is_null() {
            set_error("null element handle".into());
            return DpStatus::DpNullPointer;
        }
        match (*lhs).inner.star(&(*rhs).inner) {
            Ok(e) => give_elem(e, out),
            Err(e) => fail(e),
        }
    })
}

/// Sum of two elements of the same degree.
///
/// # Safety
/// `lhs` and `rhs` must be live handles; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_elem_add(
    lhs: *const DpElem,
    rhs: *const DpElem,
    out: *mut *mut DpElem,
) -> DpStatus {
    guard(|| {
        if lhs.is_null() || rhs.is_null() {
            set_error("null element handle".into());
            return DpStatus::DpNullPointer;
        }
        if (*lhs).inner.n() != (*rhs).inner.n() {
            return fail(Error::DegreeMismatch((*lhs).inner.n(), (*rhs).inner.n()));
        }
        give_elem((*lhs).inner.add(&(*rhs).inner), out)
    })
}

/// Canonical text of an element; round-trips through `dp_elem_parse`.
/// Returns NULL on a null handle.
///
/// # Safety
/// `elem` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_elem_render(elem: *const DpElem) -> *mut c_char {
    if elem.is_null() {
        set_error("null element handle".into());
        return std::ptr::null_mut();
    }
    match CString::new(render_element(&(*elem).inner)) {
        Ok(c) => c.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Stable JSON form of an element. Returns NULL on a null handle.
///
/// # Safety
/// `elem` must be a live handle or NULL.
#[no_mangle]
pub unsafe extern "C" fn dp_elem_render_json(elem: *const DpElem) -> *mut c_char {
    if elem.is_null() {
        set_error("null element handle".into());
        return std::ptr::null_mut();
    }
    match CString::new(element_to_json(&(*elem).inner).to_string()) {
        Ok(c) => c.into_raw(),
        Err(_) => std::ptr::null_mut(),
    }
}

/// Norm of an element over an m-letter alphabet, printed as a polynomial
/// in the generic-matrix entries.
///
/// # Safety
/// `elem` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_norm_render(
    elem: *const DpElem,
    m: u8,
    out: *mut *mut c_char,
) -> DpStatus {
    guard(|| {
        if elem.is_null() {
            set_error("null element handle".into());
            return DpStatus::DpNullPointer;
        }
        let inner = &(*elem).inner;
        if m < 1 || inner.max_letter() > m {
            return fail(Error::LetterOutOfRange {
                letter: inner.max_letter() as usize,
                m: m as usize,
            });
        }
        let ctx = GenericMatrixContext::new(inner.n().max(1), m);
        match ctx.norm(inner) {
            Ok(p) => give_string(p.poly().to_string(), out),
            Err(e) => fail(e),
        }
    })
}

/// Generator decomposition of an element, optionally reduced to primitive
/// words and abelianized, printed in the E(i; w) syntax.
///
/// # Safety
/// `elem` must be a live handle; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_decompose_render(
    elem: *const DpElem,
    primitive: bool,
    abelianize: bool,
    out: *mut *mut c_char,
) -> DpStatus {
    guard(|| {
        if elem.is_null() {
            set_error("null element handle".into());
            return DpStatus::DpNullPointer;
        }
        let inner = &(*elem).inner;
        let mut acc = GenPoly::zero(inner.n());
        for (b, c) in inner.terms() {
            acc = acc.add(&decompose(b).scale(c));
        }
        if primitive {
            acc = acc.reduce_powers();
        }
        if abelianize {
            acc = acc.abelianize();
        }
        give_string(acc.to_string(), out)
    })
}

/// Primitive necklaces of degree 1..=max_degree over m letters, one per
/// line. Returns NULL on invalid parameters.
#[no_mangle]
pub extern "C" fn dp_necklaces(m: u8, max_degree: usize) -> *mut c_char {
    if m < 1 {
        set_error("alphabet must be nonempty".into());
        return std::ptr::null_mut();
    }
    let text = necklaces_up_to(m, max_degree)
        .iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("\n");
    CString::new(text).map_or(std::ptr::null_mut(), CString::into_raw)
}

/// Evaluates the Hilbert-Chow map on a representation point given as the
/// JSON document {"n":..,"m":..,"matrices":[[[..]]],"v":[..]} and writes
/// the coordinate JSON. A zero cutoff selects the default n^2.
///
/// # Safety
/// `input` must be a valid NUL-terminated string; `out` must be valid.
#[no_mangle]
pub unsafe extern "C" fn dp_hc_eval_json(
    input: *const c_char,
    max_degree: usize,
    out: *mut *mut c_char,
) -> DpStatus {
    guard(|| {
        let text = match read_str(input) {
            Ok(t) => t,
            Err(code) => return code,
        };
        let (rep, _v) = match read_rep_json(text) {
            Ok(x) => x,
            Err(e) => return fail(e),
        };
        let cutoff = if max_degree == 0 {
            rep.n() * rep.n()
        } else {
            max_degree
        };
        match hc_eval(&rep, cutoff) {
            Ok(point) => give_string(point.to_json().to_string(), out),
            Err(e) => fail(e),
        }
    })
}

/// Releases an element handle. NULL is ignored.
///
/// # Safety
/// `elem` must be a handle returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn dp_elem_free(elem: *mut DpElem) {
    if !elem.is_null() {
        drop(Box::from_raw(elem));
    }
}

/// Releases a string returned by this library. NULL is ignored.
///
/// # Safety
/// `s` must be a string returned by this library, released once.
#[no_mangle]
pub unsafe extern "C" fn dp_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(src: &str, n: usize, m: u8) -> *mut DpElem {
        let c = CString::new(src).unwrap();
        let mut out: *mut DpElem = std::ptr::null_mut();
        let code = unsafe { dp_elem_parse(c.as_ptr(), n, m, &mut out) };
        assert_eq!(code, DpStatus::DpOk);
        out
    }

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_owned();
        unsafe { dp_string_free(ptr) };
        s
    }

    #[test]
    fn parse_mul_render_round_trip() {
        let a = parse("D(2; x1)", 2, 2);
        let b = parse("D(2; x2)", 2, 2);
        let mut prod: *mut DpElem = std::ptr::null_mut();
        assert_eq!(unsafe { dp_elem_mul(a, b, &mut prod) }, DpStatus::DpOk);
        let text = take_string(unsafe { dp_elem_render(prod) });
        assert_eq!(text, "D(2; x1, x2) + D(2; x1.x2)");
        unsafe {
            dp_elem_free(a);
            dp_elem_free(b);
            dp_elem_free(prod);
        }
    }

    #[test]
    fn parse_error_sets_message_and_code() {
        let c = CString::new("D(2; x1^5)").unwrap();
        let mut out: *mut DpElem = std::ptr::null_mut();
        let code = unsafe { dp_elem_parse(c.as_ptr(), 2, 2, &mut out) };
        assert_eq!(code, DpStatus::DpParseError);
        let msg = take_string(dp_last_error_message());
        assert!(msg.contains("exceeds n = 2"), "{msg}");
    }

    #[test]
    fn null_arguments_are_rejected() {
        let mut out: *mut DpElem = std::ptr::null_mut();
        assert_eq!(
            unsafe { dp_elem_parse(std::ptr::null(), 2, 2, &mut out) },
            DpStatus::DpNullPointer
        );
        assert_eq!(
            unsafe { dp_elem_mul(std::ptr::null(), std::ptr::null(), &mut out) },
            DpStatus::DpNullPointer
        );
        assert!(unsafe { dp_elem_render(std::ptr::null()) }.is_null());
    }

    #[test]
    fn degree_mismatch_is_domain_error() {
        let a = parse("D(2; x1)", 2, 2);
        let b = parse("D(3; x1)", 3, 2);
        let mut out: *mut DpElem = std::ptr::null_mut();
        assert_eq!(unsafe { dp_elem_mul(a, b, &mut out) }, DpStatus::DpDomainError);
        unsafe {
            dp_elem_free(a);
            dp_elem_free(b);
        }
    }

    #[test]
    fn power_and_norm() {
        let c = CString::new("x1").unwrap();
        let mut e: *mut DpElem = std::ptr::null_mut();
        assert_eq!(unsafe { dp_power(c.as_ptr(), 2, 1, &mut e) }, DpStatus::DpOk);
        assert_eq!(take_string(unsafe { dp_elem_render(e) }), "D(2; x1^2)");
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(unsafe { dp_norm_render(e, 1, &mut s) }, DpStatus::DpOk);
        let norm = take_string(s);
        assert_eq!(norm, "xi(1,1,1)*xi(1,2,2) - xi(1,1,2)*xi(1,2,1)");
        unsafe { dp_elem_free(e) };
    }

    #[test]
    fn decompose_render() {
        let e = parse("D(2; x1, x2)", 2, 2);
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(
            unsafe { dp_decompose_render(e, false, false, &mut s) },
            DpStatus::DpOk
        );
        assert_eq!(take_string(s), "E(1; x1)*E(1; x2) - E(1; x1.x2)");
        unsafe { dp_elem_free(e) };
    }

    #[test]
    fn necklaces_text() {
        let s = take_string(dp_necklaces(2, 2));
        assert_eq!(s, "x1\nx2\nx1.x2");
    }

    #[test]
    fn hc_json() {
        let input =
            CString::new(r#"{"n":2,"m":1,"matrices":[[["3","0"],["0","7"]]]}"#).unwrap();
        let mut s: *mut c_char = std::ptr::null_mut();
        assert_eq!(
            unsafe { dp_hc_eval_json(input.as_ptr(), 1, &mut s) },
            DpStatus::DpOk
        );
        let doc = take_string(s);
        assert!(doc.contains("\"value\":\"10\""), "{doc}");
        assert!(doc.contains("\"value\":\"21\""), "{doc}");
    }

    #[test]
    fn json_render() {
        let e = parse("2*D(2; x1^2)", 2, 2);
        let s = take_string(unsafe { dp_elem_render_json(e) });
        assert!(s.contains("\"coeff\":\"2\""), "{s}");
        unsafe { dp_elem_free(e) };
    }
}
