use std::ffi::{CStr, CString};
use std::path::Path;
use std::process::Command;
use std::ptr;

use gammacalc_ffi::*;

fn c(s: &str) -> CString {
    CString::new(s).unwrap()
}

fn last_error() -> String {
    unsafe { CStr::from_ptr(gc_last_error()) }
        .to_str()
        .unwrap()
        .to_string()
}

struct Ctx(*mut GcContext);

impl Ctx {
    fn new(ring: &str) -> Ctx {
        let mut p = ptr::null_mut();
        assert_eq!(
            unsafe { gc_context_new(c(ring).as_ptr(), &mut p) },
            GcStatus::Ok
        );
        Ctx(p)
    }

    fn eval(&self, src: &str) -> Result<*mut GcValue, GcStatus> {
        let mut v = ptr::null_mut();
        match unsafe { gc_eval(self.0, c(src).as_ptr(), &mut v) } {
            GcStatus::Ok => Ok(v),
            s => Err(s),
        }
    }
}

impl Drop for Ctx {
    fn drop(&mut self) {
        unsafe { gc_context_free(self.0) }
    }
}

fn take_string(p: *mut std::ffi::c_char) -> String {
    let s = unsafe { CStr::from_ptr(p) }.to_str().unwrap().to_string();
    unsafe { gc_string_free(p) };
    s
}

#[test]
fn isometry_relation_through_the_abi() {
    let ctx = Ctx::new("Q");
    let a = ctx.eval("U[s1]' * U[s1]").unwrap();
    let b = ctx.eval("1").unwrap();
    let mut eq = false;
    assert_eq!(unsafe { gc_equal(ctx.0, a, b, 64, &mut eq) }, GcStatus::Ok);
    assert!(eq);
    let mut out = ptr::null_mut();
    assert_eq!(unsafe { gc_value_render(a, &mut out) }, GcStatus::Ok);
    assert_eq!(take_string(out), "U[aff(1,0)@prog(1,1)]");
    unsafe {
        gc_value_free(a);
        gc_value_free(b);
    }
}

#[test]
fn type_errors_report_status_and_message() {
    let ctx = Ctx::new("Q");
    assert_eq!(ctx.eval("U[s1] + chi[even]").unwrap_err(), GcStatus::Eval);
    assert!(last_error().contains("type error"), "{}", last_error());
    assert_eq!(ctx.eval("U[s1").unwrap_err(), GcStatus::Eval);
    assert!(last_error().contains("syntax error"));
}

#[test]
fn null_and_bad_arguments() {
    let mut p = ptr::null_mut();
    assert_eq!(
        unsafe { gc_context_new(ptr::null(), &mut p) },
        GcStatus::NullArgument
    );
    assert_eq!(
        unsafe { gc_context_new(c("R").as_ptr(), &mut p) },
        GcStatus::InvalidRing
    );
    assert!(p.is_null());
    let ctx = Ctx::new("Q");
    let mut v = ptr::null_mut();
    assert_eq!(
        unsafe { gc_eval(ctx.0, ptr::null(), &mut v) },
        GcStatus::NullArgument
    );
    assert_eq!(
        unsafe { gc_eval(ptr::null(), c("1").as_ptr(), &mut v) },
        GcStatus::NullArgument
    );
    let bad = [0x66u8, 0xff, 0];
    assert_eq!(
        unsafe { gc_eval(ctx.0, bad.as_ptr() as *const _, &mut v) },
        GcStatus::InvalidUtf8
    );
    unsafe {
        gc_value_free(ptr::null_mut());
        gc_string_free(ptr::null_mut());
        gc_context_free(ptr::null_mut());
    }
}

#[test]
fn harmonic_sequence_is_not_summable() {
    let ctx = Ctx::new("Q");
    let v = ctx.eval("diag(pow(1;1))").unwrap();
    let mut inside = true;
    assert_eq!(
        unsafe { gc_member(ctx.0, v, c("lp:1").as_ptr(), &mut inside) },
        GcStatus::Ok
    );
    assert!(!inside);
    assert_eq!(
        unsafe { gc_member(ctx.0, v, c("lp:2").as_ptr(), &mut inside) },
        GcStatus::Ok
    );
    assert!(inside);
    assert_eq!(
        unsafe { gc_member(ctx.0, v, c("lq:2").as_ptr(), &mut inside) },
        GcStatus::Eval
    );
    unsafe { gc_value_free(v) };
}

#[test]
fn window_and_decomposition_json() {
    let ctx = Ctx::new("Q");
    let v = ctx.eval("U[s1]").unwrap();
    let mut out = ptr::null_mut();
    assert_eq!(
        unsafe { gc_value_window_json(ctx.0, v, 4, &mut out) },
        GcStatus::Ok
    );
    let w: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    assert_eq!(w["entries"], serde_json::json!([[2, 1, "1"], [4, 2, "1"]]));
    unsafe { gc_value_free(v) };

    let m = c(r#"{"rows":2,"cols":2,"entries":[[1,1,"1"],[1,2,"2"],[2,1,"3"]]}"#);
    assert_eq!(
        unsafe { gc_decompose_json(ctx.0, m.as_ptr(), &mut out) },
        GcStatus::Ok
    );
    let d: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
    let mut sum = std::collections::BTreeMap::new();
    for comp in d["components"].as_array().unwrap() {
        for e in comp["matrix"]["entries"].as_array().unwrap() {
            let key = (e[0].as_i64().unwrap(), e[1].as_i64().unwrap());
            let v: i64 = e[2].as_str().unwrap().parse().unwrap();
            *sum.entry(key).or_insert(0) += v;
        }
    }
    sum.retain(|_, v| *v != 0);
    assert_eq!(
        sum,
        [((1, 1), 1), ((1, 2), 2), ((2, 1), 3)]
            .into_iter()
            .collect()
    );
}

#[test]
fn suites_run_through_the_abi() {
    let (mut passed, mut total) = (0usize, 0usize);
    let st = unsafe { gc_verify_suite(c("sumring").as_ptr(), 1, 10, &mut passed, &mut total) };
    assert_eq!(st, GcStatus::Ok);
    assert_eq!((passed, total), (10, 10));
    let st = unsafe { gc_verify_suite(c("nope").as_ptr(), 1, 10, &mut passed, &mut total) };
    assert_eq!(st, GcStatus::Unsupported);
}

#[test]
fn header_compiles_as_c() {
    let header = Path::new(env!("CARGO_MANIFEST_DIR")).join("include/gammacalc.h");
    assert!(header.exists());
    let Ok(status) = Command::new("cc")
        .args(["-fsyntax-only", "-x", "c"])
        .arg(&header)
        .status()
    else {
        eprintln!("no C compiler available; skipping");
        return;
    };
    assert!(status.success());
}
