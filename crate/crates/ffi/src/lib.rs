//! C ABI over `coarse-geom`.
//!
//! Spaces are opaque handles created by the `cg_space_*` constructors and
//! released with [`cg_space_free`]. Every fallible function returns a
//! [`CgStatus`]; on failure the message is available from
//! [`cg_last_error`] until the next call on the same thread. Strings handed
//! out by the library are released with [`cg_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use coarse_geom::caps::ResourceCaps;
use coarse_geom::cli::parse;
use coarse_geom::coarse::{qi_transfer_constants, QiConstants};
use coarse_geom::homotopy::{chart_winding, ContractionOutcome, Contractor, SearchBudget};
use coarse_geom::presentations::factorial_certificate;
use coarse_geom::rips::build_rips2;
use coarse_geom::spaces::{build_window, circle_space, FiniteMetricSpace, SpaceJson};
use coarse_geom::{Error, Rational};

/// Result codes.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgStatus {
    Ok = 0,
    InvalidInput = 1,
    ResourceCap = 2,
    CertificateUnavailable = 3,
    CertificateInvalid = 4,
    MoveRejected = 5,
    NullPointer = 6,
    Internal = 7,
}

/// Outcome of a loop contraction.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CgContraction {
    Contracted = 0,
    Impossible = 1,
    Inconclusive = 2,
}

/// Exact rational `num / den`; `den` must be positive.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CgRational {
    pub num: i64,
    pub den: i64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CgQiConstants {
    pub a: CgRational,
    pub b: CgRational,
    pub alpha: CgRational,
    pub beta: CgRational,
    pub c: CgRational,
    pub gamma: CgRational,
}

#[repr(C)]
#[derive(Debug, Clone, Copy)]
pub struct CgTransfer {
    pub r_prime: CgRational,
    pub rho_prime: CgRational,
    /// Scale of the pushed-forward loop, `A·rho + B`.
    pub pushed_scale: CgRational,
}

/// Opaque finite metric space.
pub struct CgSpace {
    space: FiniteMetricSpace,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

fn fail(status: CgStatus, msg: impl Into<String>) -> CgStatus {
    set_error(msg.into());
    status
}

fn status_of(e: &Error) -> CgStatus {
    match e {
        Error::InvalidInput(_) | Error::Parse(_) | Error::IncompleteData(_) => CgStatus::InvalidInput,
        Error::ResourceCap { .. } => CgStatus::ResourceCap,
        Error::MoveRejected(_) => CgStatus::MoveRejected,
        Error::CertificateUnavailable(_) => CgStatus::CertificateUnavailable,
        Error::CertificateInvalid(_) => CgStatus::CertificateInvalid,
    }
}

/// Runs `f`, recording errors and containing panics.
fn guard(f: impl FnOnce() -> Result<(), CgStatus>) -> CgStatus {
    LAST_ERROR.with(|e| *e.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => CgStatus::Ok,
        Ok(Err(s)) => s,
        Err(_) => fail(CgStatus::Internal, "internal panic"),
    }
}

fn lib<T>(r: coarse_geom::Result<T>) -> Result<T, CgStatus> {
    r.map_err(|e| fail(status_of(&e), e.to_string()))
}

fn rational(r: CgRational) -> Result<Rational, CgStatus> {
    if r.den <= 0 {
        return Err(fail(CgStatus::InvalidInput, format!("denominator {} is not positive", r.den)));
    }
    Ok(Rational::new(r.num, r.den))
}

fn to_c(r: &Rational) -> CgRational {
    CgRational { num: *r.numer(), den: *r.denom() }
}

unsafe fn text<'a>(p: *const c_char) -> Result<&'a str, CgStatus> {
    if p.is_null() {
        return Err(fail(CgStatus::NullPointer, "null string"));
    }
    CStr::from_ptr(p).to_str().map_err(|_| fail(CgStatus::InvalidInput, "string is not UTF-8"))
}

unsafe fn space_ref<'a>(p: *const CgSpace) -> Result<&'a FiniteMetricSpace, CgStatus> {
    p.as_ref().map(|s| &s.space).ok_or_else(|| fail(CgStatus::NullPointer, "null space"))
}

unsafe fn out_ref<'a, T>(p: *mut T) -> Result<&'a mut T, CgStatus> {
    p.as_mut().ok_or_else(|| fail(CgStatus::NullPointer, "null output pointer"))
}

unsafe fn points<'a>(p: *const usize, len: usize) -> Result<&'a [usize], CgStatus> {
    if p.is_null() {
        return Err(fail(CgStatus::NullPointer, "null point array"));
    }
    Ok(std::slice::from_raw_parts(p, len))
}

fn string_out(s: String) -> *mut c_char {
    CString::new(s).map(CString::into_raw).unwrap_or(ptr::null_mut())
}

fn space_out(out: *mut *mut CgSpace, space: FiniteMetricSpace) -> Result<(), CgStatus> {
    let out = unsafe { out_ref(out)? };
    *out = Box::into_raw(Box::new(CgSpace { space }));
    Ok(())
}

/// Message of the last failure on this thread, or null. Owned by the
/// library and valid until the next call on this thread.
#[no_mangle]
pub extern "C" fn cg_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static string.
#[no_mangle]
pub extern "C" fn cg_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// Releases a string returned by this library. Null is ignored.
///
/// # Safety
/// `s` must come from this library and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Circle of circumference `circumference` with `points` equally spaced
/// points, labelled `p0, p1, …`.
///
/// # Safety
/// `out` must be a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_space_circle(circumference: CgRational, points: usize, out: *mut *mut CgSpace) -> CgStatus {
    guard(|| {
        let c = lib(circle_space(rational(circumference)?, points))?;
        space_out(out, c.into_space())
    })
}

/// Word-metric ball of `radius` in a group family given in the command-line
/// form (`free-abelian:2`, `free:2`, `heisenberg`, `cyclic:5`, …), with its
/// standard generators, or `gens` (same syntax as `--gens`) when not null.
///
/// # Safety
/// `family` must be a nul-terminated string, `gens` null or one, and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_space_window(
    family: *const c_char,
    gens: *const c_char,
    radius: usize,
    out: *mut *mut CgSpace,
) -> CgStatus {
    guard(|| {
        let fam = lib(parse::family(text(family)?))?;
        let g = if gens.is_null() { None } else { Some(text(gens)?) };
        let gens = lib(parse::generators(&fam, g))?;
        let caps = lib(ResourceCaps::load(None))?;
        let w = lib(build_window(&fam, &gens, radius, &caps))?;
        space_out(out, w.into_space())
    })
}

/// Space from its JSON form (`labels`, `distances`, `basepoint`).
///
/// # Safety
/// `json` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_space_from_json(json: *const c_char, out: *mut *mut CgSpace) -> CgStatus {
    guard(|| {
        let parsed: SpaceJson =
            serde_json::from_str(text(json)?).map_err(|e| fail(CgStatus::InvalidInput, format!("space JSON: {e}")))?;
        let space = lib(FiniteMetricSpace::from_json(&parsed))?;
        space_out(out, space)
    })
}

/// JSON form of a space; free with [`cg_string_free`].
///
/// # Safety
/// `space` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_space_to_json(space: *const CgSpace, out: *mut *mut c_char) -> CgStatus {
    guard(|| {
        let s = space_ref(space)?;
        let json = serde_json::to_string(&s.to_json()).map_err(|e| fail(CgStatus::Internal, e.to_string()))?;
        *out_ref(out)? = string_out(json);
        Ok(())
    })
}

/// Releases a space. Null is ignored.
///
/// # Safety
/// `space` must come from a `cg_space_*` constructor and not have been freed.
#[no_mangle]
pub unsafe extern "C" fn cg_space_free(space: *mut CgSpace) {
    if !space.is_null() {
        drop(Box::from_raw(space));
    }
}

/// Number of points, or 0 for null.
///
/// # Safety
/// `space` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn cg_space_len(space: *const CgSpace) -> usize {
    space.as_ref().map_or(0, |s| s.space.len())
}

/// # Safety
/// `space` must be a live handle, `label` a nul-terminated string and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_space_index_of(space: *const CgSpace, label: *const c_char, out: *mut usize) -> CgStatus {
    guard(|| {
        let s = space_ref(space)?;
        let l = text(label)?;
        *out_ref(out)? = s.index_of(l).ok_or_else(|| fail(CgStatus::InvalidInput, format!("unknown point {l:?}")))?;
        Ok(())
    })
}

/// # Safety
/// `space` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_space_distance(space: *const CgSpace, i: usize, j: usize, out: *mut CgRational) -> CgStatus {
    guard(|| {
        let s = space_ref(space)?;
        if i >= s.len() || j >= s.len() {
            return Err(fail(CgStatus::InvalidInput, format!("point index out of range ({} points)", s.len())));
        }
        *out_ref(out)? = to_c(&s.distance(i, j));
        Ok(())
    })
}

/// Edge and triangle counts of the Rips 2-complex at `scale`.
///
/// # Safety
/// `space` must be a live handle and the outputs valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cg_rips_counts(
    space: *const CgSpace,
    scale: CgRational,
    edges: *mut usize,
    triangles: *mut usize,
) -> CgStatus {
    guard(|| {
        let s = space_ref(space)?;
        let rips = lib(build_rips2(s, rational(scale)?))?;
        *out_ref(edges)? = rips.edges().len();
        *out_ref(triangles)? = rips.triangles().len();
        Ok(())
    })
}

/// Contracts the loop `points[0..len]` at `scale` with a budget of
/// `max_nodes` search nodes (0 for the default). When `json_out` is not
/// null it receives the outcome with its moves or certificate; free it with
/// [`cg_string_free`].
///
/// # Safety
/// `space` must be a live handle, `points` valid for `len` reads, `outcome`
/// a valid pointer and `json_out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn cg_contract_loop(
    space: *const CgSpace,
    points: *const usize,
    len: usize,
    scale: CgRational,
    max_nodes: u64,
    outcome: *mut CgContraction,
    json_out: *mut *mut c_char,
) -> CgStatus {
    guard(|| {
        let s = space_ref(space)?;
        let lp = self::points(points, len)?;
        let mut budget = SearchBudget::default();
        if max_nodes > 0 {
            budget.max_nodes = max_nodes as usize;
        }
        let result = lib(Contractor::new(s, rational(scale)?, budget).and_then(|c| c.contract(lp)))?;
        *out_ref(outcome)? = match &result {
            ContractionOutcome::Contracted(_) => CgContraction::Contracted,
            ContractionOutcome::Impossible(_) => CgContraction::Impossible,
            ContractionOutcome::Inconclusive(_) => CgContraction::Inconclusive,
        };
        if !json_out.is_null() {
            let json = serde_json::to_string(&result).map_err(|e| fail(CgStatus::Internal, e.to_string()))?;
            *json_out = string_out(json);
        }
        Ok(())
    })
}

/// Winding number of a loop at scale `scale` through the space's first
/// circle chart. Fails with `CERTIFICATE_UNAVAILABLE` when there is no chart
/// or its circumference is at most `3·scale`.
///
/// # Safety
/// `space` must be a live handle, `points` valid for `len` reads and `out`
/// a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn cg_winding(
    space: *const CgSpace,
    points: *const usize,
    len: usize,
    scale: CgRational,
    out: *mut i64,
) -> CgStatus {
    guard(|| {
        let s = space_ref(space)?;
        let lp = self::points(points, len)?;
        let chart = s.charts().first().ok_or_else(|| fail(CgStatus::CertificateUnavailable, "the space has no circle chart"))?;
        *out_ref(out)? = lib(chart_winding(s, chart, lp, &rational(scale)?))?.winding;
        Ok(())
    })
}

/// Transferred scales `r' = max(C, αr + β)` and `ρ' = C + max(αR + β, ρ)`.
///
/// # Safety
/// `constants` and `out` must be valid pointers.
#[no_mangle]
pub unsafe extern "C" fn cg_qi_transfer(
    constants: *const CgQiConstants,
    r: CgRational,
    big_r: CgRational,
    rho: CgRational,
    out: *mut CgTransfer,
) -> CgStatus {
    guard(|| {
        let k = constants.as_ref().ok_or_else(|| fail(CgStatus::NullPointer, "null constants"))?;
        let k = QiConstants {
            a: rational(k.a)?,
            b: rational(k.b)?,
            alpha: rational(k.alpha)?,
            beta: rational(k.beta)?,
            c: rational(k.c)?,
            gamma: rational(k.gamma)?,
        };
        let t = lib(qi_transfer_constants(&k, rational(r)?, rational(big_r)?, rational(rho)?))?;
        *out_ref(out)? = CgTransfer {
            r_prime: to_c(&t.r_prime),
            rho_prime: to_c(&t.rho_prime),
            pushed_scale: to_c(&t.pushed_scale),
        };
        Ok(())
    })
}

/// Whether relations of ℓ1-length at most `ell` among `1!, …, m!` fail to
/// generate all relations. `json_out`, when not null, receives the
/// certificate; free it with [`cg_string_free`].
///
/// # Safety
/// `has_obstruction` must be a valid pointer and `json_out` null or valid.
#[no_mangle]
pub unsafe extern "C" fn cg_factorial_certificate(
    m: usize,
    ell: usize,
    has_obstruction: *mut bool,
    json_out: *mut *mut c_char,
) -> CgStatus {
    guard(|| {
        let cert = lib(factorial_certificate(m, ell))?;
        if !cert.verify() {
            return Err(fail(CgStatus::CertificateInvalid, "the lattice certificate did not verify"));
        }
        *out_ref(has_obstruction)? = cert.has_obstruction();
        if !json_out.is_null() {
            let json = serde_json::to_string(&cert).map_err(|e| fail(CgStatus::Internal, e.to_string()))?;
            *json_out = string_out(json);
        }
        Ok(())
    })
}
