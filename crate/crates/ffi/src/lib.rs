//! C interface to `plmorse`.
//!
//! Complexes and gradient fields are opaque handles created by `plm_*` calls
//! and released with the matching `*_free` function. Every fallible call
//! returns a `PlmStatus`; on failure `plm_last_error` describes the problem
//! for the calling thread. Strings returned by the library must be released
//! with `plm_string_free`.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use plmorse::complex::{SimplicialComplex, VertexScalarField};
use plmorse::gvf::{check_relative_perfectness, is_acyclic, validate_matching, GradientField};
use plmorse::homology::FieldChoice;
use plmorse::io::{field_to_json, parse_field, parse_json};
use plmorse::plcrit::{h_classify, i_classify, l_classify, w_classify, CriticalKind, PlClassification};
use plmorse::report::{analyze, emit_report, AnalysisOptions};
use plmorse::rpbuild::build_rp_gradient;
use plmorse::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlmStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    /// Manifold, dimension or membership precondition failed.
    Precondition = 4,
    /// The gradient field is not a valid acyclic matching on the complex.
    InvalidField = 5,
    InvalidArgument = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlmKind {
    Regular = 0,
    Minimum = 1,
    Maximum = 2,
    Saddle = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlmDefinition {
    /// Middle-triangle index count (surfaces only).
    Index = 0,
    /// Wedge count (surfaces only).
    Wedge = 1,
    /// Relative homology of the closed lower star modulo the lower link.
    Homology = 2,
    /// Reduced homology of the lower link.
    Link = 3,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PlmCoefficients {
    Gf2 = 0,
    Rational = 1,
}

/// Classification of one vertex.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PlmVertexClass {
    pub kind: PlmKind,
    /// Index of the critical point, or -1 when regular or several indices occur.
    pub index: i32,
    pub total_multiplicity: u32,
    /// Multiplicities for indices 0..=3; entries above the dimension are 0.
    pub multiplicities: [u32; 4],
}

/// Opaque complex with vertex values.
pub struct PlmComplex {
    k: SimplicialComplex,
    f: VertexScalarField,
}

/// Opaque gradient field.
pub struct PlmField {
    v: GradientField,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: impl Into<String>) {
    let text = message.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(CString::new(text).expect("NULs removed")));
}

fn status_of(e: &Error) -> PlmStatus {
    match e {
        Error::Parse { .. } | Error::Json(_) | Error::MalformedSimplex(_) | Error::NonFiniteValue { .. } => {
            PlmStatus::Parse
        }
        Error::InvalidField(_) => PlmStatus::InvalidField,
        _ => PlmStatus::Precondition,
    }
}

// Runs `body`, converting errors and panics into status codes.
fn guard(body: impl FnOnce() -> Result<(), (PlmStatus, String)>) -> PlmStatus {
    match catch_unwind(AssertUnwindSafe(body)) {
        Ok(Ok(())) => PlmStatus::Ok,
        Ok(Err((status, message))) => {
            set_error(message);
            status
        }
        Err(_) => {
            set_error("internal panic");
            PlmStatus::Panic
        }
    }
}

fn lib<T>(r: plmorse::Result<T>) -> Result<T, (PlmStatus, String)> {
    r.map_err(|e| (status_of(&e), e.to_string()))
}

unsafe fn text<'a>(s: *const c_char) -> Result<&'a str, (PlmStatus, String)> {
    if s.is_null() {
        return Err((PlmStatus::NullPointer, "null string".into()));
    }
    CStr::from_ptr(s).to_str().map_err(|e| (PlmStatus::InvalidUtf8, e.to_string()))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, (PlmStatus, String)> {
    p.as_ref().ok_or_else(|| (PlmStatus::NullPointer, format!("null {what}")))
}

fn out_ptr<T>(out: *mut T) -> Result<(), (PlmStatus, String)> {
    if out.is_null() {
        Err((PlmStatus::NullPointer, "null output pointer".into()))
    } else {
        Ok(())
    }
}

fn field_choice(c: PlmCoefficients) -> FieldChoice {
    match c {
        PlmCoefficients::Gf2 => FieldChoice::Gf2,
        PlmCoefficients::Rational => FieldChoice::Rational,
    }
}

fn into_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " ")).expect("NULs removed").into_raw()
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn plm_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}

/// Parses a JSON document (`maximal_simplices`, `values`) into a complex.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plm_complex_from_json(json: *const c_char, out: *mut *mut PlmComplex) -> PlmStatus {
    guard(|| {
        out_ptr(out)?;
        let doc = lib(parse_json(text(json)?))?;
        let (k, f) = lib(doc.build())?;
        *out = Box::into_raw(Box::new(PlmComplex { k, f }));
        Ok(())
    })
}

/// # Safety
/// `complex` must come from `plm_complex_from_json` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn plm_complex_free(complex: *mut PlmComplex) {
    if !complex.is_null() {
        drop(Box::from_raw(complex));
    }
}

/// Dimension of the complex (-1 when empty or NULL).
///
/// # Safety
/// `complex` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plm_complex_dimension(complex: *const PlmComplex) -> i32 {
    complex.as_ref().map_or(-1, |c| c.k.dimension() as i32)
}

/// Number of simplices of dimension `dim`.
///
/// # Safety
/// `complex` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plm_complex_count(complex: *const PlmComplex, dim: usize) -> usize {
    complex.as_ref().map_or(0, |c| c.k.count(dim))
}

fn to_c_class(c: &PlClassification) -> PlmVertexClass {
    let mut multiplicities = [0u32; 4];
    for (slot, &m) in multiplicities.iter_mut().zip(&c.multiplicities) {
        *slot = m as u32;
    }
    PlmVertexClass {
        kind: match c.kind {
            CriticalKind::Regular => PlmKind::Regular,
            CriticalKind::Minimum => PlmKind::Minimum,
            CriticalKind::Maximum => PlmKind::Maximum,
            CriticalKind::Saddle => PlmKind::Saddle,
        },
        index: if c.is_critical() { c.index().map_or(-1, |i| i as i32) } else { -1 },
        total_multiplicity: c.total_multiplicity() as u32,
        multiplicities,
    }
}

/// Classifies `vertex` under one definition.
///
/// # Safety
/// `complex` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plm_classify_vertex(
    complex: *const PlmComplex,
    vertex: u32,
    definition: PlmDefinition,
    coeffs: PlmCoefficients,
    out: *mut PlmVertexClass,
) -> PlmStatus {
    guard(|| {
        let c = deref(complex, "complex")?;
        out_ptr(out)?;
        let field = field_choice(coeffs);
        let class = lib(match definition {
            PlmDefinition::Index => i_classify(&c.k, &c.f, vertex),
            PlmDefinition::Wedge => w_classify(&c.k, &c.f, vertex),
            PlmDefinition::Homology => h_classify(&c.k, &c.f, vertex, field),
            PlmDefinition::Link => l_classify(&c.k, &c.f, vertex, field),
        })?;
        *out = to_c_class(&class);
        Ok(())
    })
}

/// Builds a relatively perfect gradient field (the complex must be a
/// combinatorial manifold of dimension 1 to 3).
///
/// # Safety
/// `complex` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plm_build_rp(complex: *const PlmComplex, out: *mut *mut PlmField) -> PlmStatus {
    guard(|| {
        let c = deref(complex, "complex")?;
        out_ptr(out)?;
        let v = lib(build_rp_gradient(&c.k, &c.f))?;
        *out = Box::into_raw(Box::new(PlmField { v }));
        Ok(())
    })
}

/// Parses a field file: a JSON list of `[tail, head]` pairs.
///
/// # Safety
/// `json` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn plm_field_from_json(json: *const c_char, out: *mut *mut PlmField) -> PlmStatus {
    guard(|| {
        out_ptr(out)?;
        let v = lib(parse_field(text(json)?))?;
        *out = Box::into_raw(Box::new(PlmField { v }));
        Ok(())
    })
}

/// # Safety
/// `field` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn plm_field_free(field: *mut PlmField) {
    if !field.is_null() {
        drop(Box::from_raw(field));
    }
}

/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plm_field_pair_count(field: *const PlmField) -> usize {
    field.as_ref().map_or(0, |f| f.v.len())
}

/// The field as JSON; release with `plm_string_free`. NULL on a NULL handle.
///
/// # Safety
/// `field` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn plm_field_to_json(field: *const PlmField) -> *mut c_char {
    match field.as_ref() {
        Some(f) => into_c_string(field_to_json(&f.v)),
        None => ptr::null_mut(),
    }
}

/// Writes `m_0, m_1, ...` into `counts` (at most `len` entries) and the number
/// of dimensions into `written`.
///
/// # Safety
/// Handles must be live; `counts` must hold `len` entries; `written` valid.
#[no_mangle]
pub unsafe extern "C" fn plm_morse_counts(
    complex: *const PlmComplex,
    field: *const PlmField,
    counts: *mut usize,
    len: usize,
    written: *mut usize,
) -> PlmStatus {
    guard(|| {
        let c = deref(complex, "complex")?;
        let g = deref(field, "field")?;
        out_ptr(written)?;
        let m = g.v.morse_counts(&c.k);
        if len < m.len() {
            return Err((PlmStatus::InvalidArgument, format!("buffer holds {len} entries, need {}", m.len())));
        }
        out_ptr(counts)?;
        for (i, &x) in m.iter().enumerate() {
            *counts.add(i) = x;
        }
        *written = m.len();
        Ok(())
    })
}

/// Checks validity, acyclicity and relative perfectness. `is_rp` receives the
/// verdict; an invalid or cyclic field yields `PLM_STATUS_INVALID_FIELD`.
///
/// # Safety
/// Handles must be live and `is_rp` valid.
#[no_mangle]
pub unsafe extern "C" fn plm_check_rp(
    complex: *const PlmComplex,
    field: *const PlmField,
    coeffs: PlmCoefficients,
    is_rp: *mut bool,
) -> PlmStatus {
    guard(|| {
        let c = deref(complex, "complex")?;
        let g = deref(field, "field")?;
        out_ptr(is_rp)?;
        if let Err(violations) = validate_matching(&c.k, &g.v) {
            return Err((PlmStatus::InvalidField, violations[0].to_string()));
        }
        if !is_acyclic(&g.v) {
            return Err((PlmStatus::InvalidField, "the field has a closed V-path".into()));
        }
        let cert = lib(check_relative_perfectness(&c.k, &c.f, &g.v, field_choice(coeffs)))?;
        *is_rp = cert.is_rp();
        Ok(())
    })
}

/// Full JSON analysis report; `field` may be NULL to build one. Release the
/// result with `plm_string_free`.
///
/// # Safety
/// `complex` must be live, `field` NULL or live, `out` valid.
#[no_mangle]
pub unsafe extern "C" fn plm_report_json(
    complex: *const PlmComplex,
    field: *const PlmField,
    coeffs: PlmCoefficients,
    out: *mut *mut c_char,
) -> PlmStatus {
    guard(|| {
        let c = deref(complex, "complex")?;
        out_ptr(out)?;
        let supplied = field.as_ref().map(|g| &g.v);
        let opts = AnalysisOptions { field: field_choice(coeffs), ..Default::default() };
        let report = lib(analyze(&c.k, &c.f, supplied, None, opts))?;
        *out = into_c_string(emit_report(&report));
        Ok(())
    })
}

/// # Safety
/// `s` must be NULL or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn plm_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
