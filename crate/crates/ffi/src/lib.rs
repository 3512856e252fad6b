//! C ABI over `virasoro-core`.
//!
//! Diffeomorphisms cross the boundary as opaque `VirDiffeo` handles created
//! by the `vir_diffeo_*` constructors and released with `vir_diffeo_free`.
//! Every fallible function returns a `VirStatus`; on failure the message is
//! available from `vir_last_error_message` on the same thread until the next
//! call into the library.

use std::cell::RefCell;
use std::ffi::{c_char, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use virasoro_core::chernweil::{solve_whitney, P1_HAT_SCALE};
use virasoro_core::cli::{transgressed_charge, RunConfig};
use virasoro_core::cocycle::bott_thurston_r;
use virasoro_core::simplicial::verify_main_lemma;
use virasoro_core::{CircleDiffeo, Error};

/// Result codes; `VIR_OK` is zero.
#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VirStatus {
    VirOk = 0,
    VirNullPointer = 1,
    VirInvalidElement = 2,
    VirSolver = 3,
    VirIntegration = 4,
    VirNumeric = 5,
    VirUsage = 6,
    VirPanic = 7,
}

/// Opaque handle to a circle diffeomorphism.
pub struct VirDiffeo {
    inner: CircleDiffeo,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).expect("interior nuls removed");
    LAST_ERROR.with(|slot| *slot.borrow_mut() = Some(c));
}

fn status_of(e: &Error) -> VirStatus {
    match e {
        Error::InvalidElement(_) => VirStatus::VirInvalidElement,
        Error::Solver(_) => VirStatus::VirSolver,
        Error::Integration(_) => VirStatus::VirIntegration,
        Error::Numeric(_) => VirStatus::VirNumeric,
        Error::Usage(_) => VirStatus::VirUsage,
    }
}

/// Runs `f`, translating errors and panics into status codes.
fn guard(f: impl FnOnce() -> Result<(), VirStatus>) -> VirStatus {
    LAST_ERROR.with(|slot| *slot.borrow_mut() = None);
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => VirStatus::VirOk,
        Ok(Err(s)) => s,
        Err(_) => {
            set_error("panic inside virasoro-core".into());
            VirStatus::VirPanic
        }
    }
}

fn lift<T>(r: virasoro_core::Result<T>) -> Result<T, VirStatus> {
    r.map_err(|e| {
        set_error(e.to_string());
        status_of(&e)
    })
}

fn null(what: &str) -> VirStatus {
    set_error(format!("{what} is null"));
    VirStatus::VirNullPointer
}

unsafe fn handle<'a>(p: *const VirDiffeo, what: &str) -> Result<&'a CircleDiffeo, VirStatus> {
    // SAFETY: the caller passes null or a live handle from this library.
    unsafe { p.as_ref() }
        .map(|h| &h.inner)
        .ok_or_else(|| null(what))
}

unsafe fn store<T>(out: *mut T, value: T, what: &str) -> Result<(), VirStatus> {
    if out.is_null() {
        return Err(null(what));
    }
    // SAFETY: non-null and, per the contract, valid for writes.
    unsafe { out.write(value) };
    Ok(())
}

unsafe fn emit(out: *mut *mut VirDiffeo, g: CircleDiffeo) -> Result<(), VirStatus> {
    if out.is_null() {
        return Err(null("out"));
    }
    let boxed = Box::into_raw(Box::new(VirDiffeo { inner: g }));
    // SAFETY: checked non-null above.
    unsafe { out.write(boxed) };
    Ok(())
}

/// Message of the last failure on this thread, or null. The pointer stays
/// valid until the next library call on the same thread.
#[no_mangle]
pub extern "C" fn vir_last_error_message() -> *const c_char {
    LAST_ERROR.with(|slot| slot.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Static description of a status code.
#[no_mangle]
pub extern "C" fn vir_status_string(status: VirStatus) -> *const c_char {
    let s: &'static [u8] = match status {
        VirStatus::VirOk => b"ok\0",
        VirStatus::VirNullPointer => b"null pointer\0",
        VirStatus::VirInvalidElement => b"invalid element\0",
        VirStatus::VirSolver => b"solver failure\0",
        VirStatus::VirIntegration => b"integration failure\0",
        VirStatus::VirNumeric => b"numeric failure\0",
        VirStatus::VirUsage => b"usage error\0",
        VirStatus::VirPanic => b"internal panic\0",
    };
    s.as_ptr().cast()
}

/// `1/8π²`.
#[no_mangle]
pub extern "C" fn vir_p1_hat_scale() -> f64 {
    P1_HAT_SCALE
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_identity(out: *mut *mut VirDiffeo) -> VirStatus {
    guard(|| unsafe { emit(out, CircleDiffeo::identity()) })
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_rotation(angle: f64, out: *mut *mut VirDiffeo) -> VirStatus {
    guard(|| unsafe { emit(out, CircleDiffeo::rotation(angle)) })
}

/// `θ ↦ θ + offset + Σₖ (a[k−1] cos kθ + b[k−1] sin kθ)`, `k = 1..=order`.
///
/// # Safety
/// `a` and `b` must each point to `order` readable doubles (or be null
/// when `order` is zero); `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_fourier(
    offset: f64,
    a: *const f64,
    b: *const f64,
    order: usize,
    out: *mut *mut VirDiffeo,
) -> VirStatus {
    guard(|| {
        let read = |p: *const f64, what| {
            if order == 0 {
                Ok(Vec::new())
            } else if p.is_null() {
                Err(null(what))
            } else {
                // SAFETY: non-null and `order` elements long per the contract.
                Ok(unsafe { std::slice::from_raw_parts(p, order) }.to_vec())
            }
        };
        let g = lift(CircleDiffeo::fourier(offset, read(a, "a")?, read(b, "b")?))?;
        unsafe { emit(out, g) }
    })
}

/// The map induced by `[[a, b], [c, d]]`, `ad − bc > 0`, on `ℝP¹`.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_mobius(
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    out: *mut *mut VirDiffeo,
) -> VirStatus {
    guard(|| {
        let g = lift(CircleDiffeo::mobius(a, b, c, d))?;
        unsafe { emit(out, g) }
    })
}

/// `outer ∘ inner`. Both inputs stay owned by the caller.
///
/// # Safety
/// Handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_compose(
    outer: *const VirDiffeo,
    inner: *const VirDiffeo,
    out: *mut *mut VirDiffeo,
) -> VirStatus {
    guard(|| unsafe {
        let g = CircleDiffeo::compose(handle(outer, "outer")?, handle(inner, "inner")?);
        emit(out, g)
    })
}

/// # Safety
/// `g` must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_inverse(
    g: *const VirDiffeo,
    out: *mut *mut VirDiffeo,
) -> VirStatus {
    guard(|| unsafe {
        let inv = lift(handle(g, "g")?.inverse())?;
        emit(out, inv)
    })
}

/// Lift value and first two derivatives at `theta`.
///
/// # Safety
/// `g` must be live; each output pointer must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_eval(
    g: *const VirDiffeo,
    theta: f64,
    value: *mut f64,
    d1: *mut f64,
    d2: *mut f64,
) -> VirStatus {
    guard(|| unsafe {
        let j = lift(handle(g, "g")?.jet(theta))?;
        store(value, j.value, "value")?;
        store(d1, j.d1, "d1")?;
        store(d2, j.d2, "d2")
    })
}

/// Releases a handle; null is ignored.
///
/// # Safety
/// `g` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn vir_diffeo_free(g: *mut VirDiffeo) {
    if !g.is_null() {
        // SAFETY: created by `Box::into_raw` in `emit` and not yet freed.
        drop(unsafe { Box::from_raw(g) });
    }
}

/// `∫ log(γ₁′∘γ₂) d log γ₂′` on `quadrature_points` trapezoid nodes.
///
/// # Safety
/// Handles must be live; `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_bott_thurston_r(
    g1: *const VirDiffeo,
    g2: *const VirDiffeo,
    quadrature_points: usize,
    out: *mut f64,
) -> VirStatus {
    guard(|| unsafe {
        let v = lift(bott_thurston_r(
            handle(g1, "g1")?,
            handle(g2, "g2")?,
            quadrature_points,
        ))?;
        store(out, v, "out")
    })
}

/// Central charge of the transgression at `scale`; zero arguments select
/// the defaults (order 16, 2048 nodes, step 1e-3).
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_central_charge(
    scale: f64,
    fourier_order: usize,
    quadrature_points: usize,
    fd_step: f64,
    out: *mut f64,
) -> VirStatus {
    guard(|| {
        let base = RunConfig::default();
        let cfg = RunConfig {
            fourier_order: if fourier_order == 0 {
                base.fourier_order
            } else {
                fourier_order
            },
            quadrature_points: if quadrature_points == 0 {
                base.quadrature_points
            } else {
                quadrature_points
            },
            fd_step: if fd_step == 0.0 {
                base.fd_step
            } else {
                fd_step
            },
            ..base
        };
        lift(cfg.validate())?;
        let c = lift(transgressed_charge(scale, &cfg))?;
        unsafe { store(out, c, "out") }
    })
}

/// Largest residual of the three coboundary identities over `samples`
/// random points.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_verify_main_lemma(
    samples: usize,
    seed: u64,
    out: *mut f64,
) -> VirStatus {
    guard(|| {
        let r = lift(verify_main_lemma(samples, seed))?;
        unsafe { store(out, r.max(), "out") }
    })
}

/// Least-squares `λ` for which the lift satisfies the Whitney sum formula.
///
/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn vir_solve_whitney(out: *mut f64) -> VirStatus {
    guard(|| {
        let lambda = lift(solve_whitney())?;
        unsafe { store(out, lambda, "out") }
    })
}
