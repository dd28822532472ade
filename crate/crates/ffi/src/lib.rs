//! C ABI over the gammacalc expression evaluator.
//!
//! Every function returns a [`GcStatus`]; results come back through out
//! pointers. Objects are opaque handles released with the matching `*_free`
//! function. After a failing call, `gc_last_error` describes the failure on
//! the calling thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};

use gammacalc::cli::eval::{render, Evaluator, Val};
use gammacalc::decomp::{decompose, decomposition_json, FinMatrix};
use gammacalc::scalars::RingKind;
use gammacalc::seqspace::{IdealTag, SymSeq};
use gammacalc::suites;

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GcStatus {
    Ok = 0,
    NullArgument = 1,
    InvalidUtf8 = 2,
    InvalidRing = 3,
    Eval = 4,
    Unsupported = 5,
    Panic = 6,
}

/// Evaluation context fixing the coefficient ring.
pub struct GcContext {
    ev: Evaluator,
}

/// An evaluated expression.
pub struct GcValue {
    val: Val,
    src: String,
}

thread_local! {
    static LAST_ERROR: RefCell<CString> = RefCell::new(CString::default());
}

fn set_error(msg: &str) {
    let c = CString::new(msg.replace('\0', " ")).expect("no interior nul");
    LAST_ERROR.with(|e| *e.borrow_mut() = c);
}

struct Fail(GcStatus, String);

fn fail(status: GcStatus, msg: impl Into<String>) -> Fail {
    Fail(status, msg.into())
}

fn guard(f: impl FnOnce() -> Result<(), Fail>) -> GcStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            set_error("");
            GcStatus::Ok
        }
        Ok(Err(Fail(status, msg))) => {
            set_error(&msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            GcStatus::Panic
        }
    }
}

unsafe fn text<'a>(p: *const c_char, what: &str) -> Result<&'a str, Fail> {
    if p.is_null() {
        return Err(fail(GcStatus::NullArgument, format!("{what} is null")));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| fail(GcStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn deref<'a, T>(p: *const T, what: &str) -> Result<&'a T, Fail> {
    p.as_ref()
        .ok_or_else(|| fail(GcStatus::NullArgument, format!("{what} is null")))
}

fn out_check<T>(p: *mut T) -> Result<(), Fail> {
    if p.is_null() {
        Err(fail(GcStatus::NullArgument, "output pointer is null"))
    } else {
        Ok(())
    }
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("no interior nul")
        .into_raw()
}

/// Message for the last failing call on this thread; empty after success.
/// The pointer stays valid until the next call on the same thread.
#[no_mangle]
pub extern "C" fn gc_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ptr())
}

/// Create a context for ring `Z`, `Q`, `Q(i)`, `Z/N` or `M2(Q)`.
///
/// # Safety
/// `ring` must be a nul-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn gc_context_new(ring: *const c_char, out: *mut *mut GcContext) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let name = text(ring, "ring")?;
        let ring = RingKind::parse(name).map_err(|e| fail(GcStatus::InvalidRing, e.to_string()))?;
        *out = Box::into_raw(Box::new(GcContext {
            ev: Evaluator::new(ring),
        }));
        Ok(())
    })
}

/// # Safety
/// `ctx` must come from `gc_context_new` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_context_free(ctx: *mut GcContext) {
    if !ctx.is_null() {
        drop(Box::from_raw(ctx));
    }
}

/// Parse and evaluate an expression.
///
/// # Safety
/// Pointers must be valid; `expr` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn gc_eval(
    ctx: *const GcContext,
    expr: *const c_char,
    out: *mut *mut GcValue,
) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let ctx = deref(ctx, "context")?;
        let src = text(expr, "expression")?;
        let val = ctx.ev.eval_src(src).map_err(|e| fail(GcStatus::Eval, e))?;
        *out = Box::into_raw(Box::new(GcValue {
            val,
            src: src.to_string(),
        }));
        Ok(())
    })
}

/// # Safety
/// `v` must come from `gc_eval` and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_value_free(v: *mut GcValue) {
    if !v.is_null() {
        drop(Box::from_raw(v));
    }
}

/// Canonical text of a value; release with `gc_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_value_render(v: *const GcValue, out: *mut *mut c_char) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let v = deref(v, "value")?;
        let s = render(&v.val).map_err(|e| fail(GcStatus::Unsupported, e))?;
        *out = to_c_string(s);
        Ok(())
    })
}

/// Upper-left `n × n` window as JSON; release with `gc_string_free`.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_value_window_json(
    ctx: *const GcContext,
    v: *const GcValue,
    n: i64,
    out: *mut *mut c_char,
) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let ctx = deref(ctx, "context")?;
        let v = deref(v, "value")?;
        if n < 1 {
            return Err(fail(GcStatus::Eval, "window size must be positive"));
        }
        let span = gammacalc::cli::parse::Span {
            start: 0,
            end: v.src.len(),
        };
        let json = match &v.val {
            Val::Seq(s) => serde_json::to_string(
                &s.window(n)
                    .iter()
                    .map(|x| x.to_string())
                    .collect::<Vec<_>>(),
            )
            .map_err(|e| fail(GcStatus::Eval, e.to_string()))?,
            other => ctx
                .ev
                .lazy(other.clone(), span)
                .map_err(|e| fail(GcStatus::Eval, e.render(&v.src)))?
                .window(n)
                .to_json(),
        };
        *out = to_c_string(json);
        Ok(())
    })
}

/// Decide `a = b`. Infinite sums compare on a `window_n` window.
///
/// # Safety
/// Pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn gc_equal(
    ctx: *const GcContext,
    a: *const GcValue,
    b: *const GcValue,
    window_n: i64,
    out: *mut bool,
) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let ctx = deref(ctx, "context")?;
        let (a, b) = (deref(a, "lhs")?, deref(b, "rhs")?);
        *out = ctx
            .ev
            .values_equal(
                a.val.clone(),
                b.val.clone(),
                &a.src,
                &b.src,
                window_n.max(1),
            )
            .map_err(|e| fail(GcStatus::Eval, e))?;
        Ok(())
    })
}

/// Membership in an ideal tagged `cf`, `c0`, `lp:P`, `lp+:P`, `lp-:P` or `linf`.
///
/// # Safety
/// Pointers must be valid; `tag` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn gc_member(
    ctx: *const GcContext,
    v: *const GcValue,
    tag: *const c_char,
    out: *mut bool,
) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let ctx = deref(ctx, "context")?;
        let v = deref(v, "value")?;
        let tag: IdealTag = text(tag, "tag")?
            .parse()
            .map_err(|e| fail(GcStatus::Eval, format!("{e}")))?;
        let span = gammacalc::cli::parse::Span {
            start: 0,
            end: v.src.len(),
        };
        *out = match &v.val {
            Val::Seq(s) => s.member(&tag),
            Val::Scalar(x) => SymSeq::constant(x.clone()).member(&tag),
            other => ctx
                .ev
                .op(other.clone(), span)
                .map_err(|e| fail(GcStatus::Eval, e.render(&v.src)))?
                .ideal_member(&tag),
        };
        Ok(())
    })
}

/// Decompose a matrix given as JSON `{"rows","cols","entries":[[i,j,"v"],..]}`
/// into band-one components; the result is JSON, released with `gc_string_free`.
///
/// # Safety
/// Pointers must be valid; `matrix_json` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn gc_decompose_json(
    ctx: *const GcContext,
    matrix_json: *const c_char,
    out: *mut *mut c_char,
) -> GcStatus {
    guard(|| {
        out_check(out)?;
        let ctx = deref(ctx, "context")?;
        let src = text(matrix_json, "matrix")?;
        let a = FinMatrix::from_json(src, Some(ctx.ev.ring))
            .map_err(|e| fail(GcStatus::Eval, e.to_string()))?;
        let comps = decompose(&a).map_err(|e| fail(GcStatus::Eval, e.to_string()))?;
        *out = to_c_string(decomposition_json(&a, &comps).to_string());
        Ok(())
    })
}

/// Run one identity suite.
///
/// # Safety
/// Pointers must be valid; `name` nul-terminated.
#[no_mangle]
pub unsafe extern "C" fn gc_verify_suite(
    name: *const c_char,
    seed: u64,
    trials: usize,
    passed: *mut usize,
    total: *mut usize,
) -> GcStatus {
    guard(|| {
        out_check(passed)?;
        out_check(total)?;
        let name = text(name, "suite name")?;
        let rep = suites::run(name, seed, trials)
            .ok_or_else(|| fail(GcStatus::Unsupported, format!("unknown suite {name}")))?;
        *passed = rep.passed;
        *total = rep.trials;
        Ok(())
    })
}

/// # Safety
/// `s` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn gc_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}
