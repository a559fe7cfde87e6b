//! C ABI over the symkl pipelines: an opaque context owns budgets, the
//! table cache, and warm pipelines; results cross the boundary as canonical
//! JSON strings; every call returns a status code and stores a retrievable
//! error message on failure.

use std::cell::RefCell;
use std::collections::BTreeMap;
use std::ffi::{CStr, CString};
use std::os::raw::c_char;
use std::path::PathBuf;
use std::sync::Mutex;

use symkl::error::Error;
use symkl::kloosterman::Budgets;
use symkl::pipeline::{MethodChoice, Pipeline, PipelineConfig};
use symkl::rep::{weyl_dimension, AlgebraId, HighestWeight};
use symkl::report;
use symkl::suites;

/// Status codes returned by every fallible call.
#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SymklStatus {
    Ok = 0,
    InvalidParameter = 1,
    BudgetExceeded = 2,
    ComputationFailed = 3,
    VerificationFailed = 4,
    NullArgument = 5,
    Io = 6,
}

/// Opaque handle owning configuration and warm pipelines.
pub struct SymklCtx {
    inner: Mutex<CtxInner>,
}

struct CtxInner {
    cache_dir: Option<PathBuf>,
    budgets: Budgets,
    pipelines: BTreeMap<(u64, u32, u32), Pipeline>,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into();
    LAST_ERROR.with(|e| {
        *e.borrow_mut() = CString::new(msg).ok();
    });
}

fn status_of(err: &Error) -> SymklStatus {
    match err {
        Error::InvalidParameter(_) => SymklStatus::InvalidParameter,
        Error::BudgetExceeded(_) => SymklStatus::BudgetExceeded,
        Error::Io(_) | Error::Cache(_) => SymklStatus::Io,
        _ => SymklStatus::ComputationFailed,
    }
}

fn export_string(s: String, out: *mut *mut c_char) -> SymklStatus {
    if out.is_null() {
        set_error("null output pointer");
        return SymklStatus::NullArgument;
    }
    match CString::new(s) {
        Ok(c) => {
            unsafe { *out = c.into_raw() };
            SymklStatus::Ok
        }
        Err(_) => {
            set_error("output contained an interior NUL byte");
            SymklStatus::ComputationFailed
        }
    }
}

/// Library version as a static string; do not free.
#[no_mangle]
pub extern "C" fn symkl_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr() as *const c_char
}

/// Last error message for this thread, or NULL when none; free with
/// symkl_string_free.
#[no_mangle]
pub extern "C" fn symkl_last_error_message() -> *mut c_char {
    LAST_ERROR.with(|e| match e.borrow().as_ref() {
        Some(c) => c.clone().into_raw(),
        None => std::ptr::null_mut(),
    })
}

/// New context; `cache_dir` may be NULL for no on-disk cache.
#[no_mangle]
pub extern "C" fn symkl_ctx_new(cache_dir: *const c_char) -> *mut SymklCtx {
    let cache_dir = if cache_dir.is_null() {
        None
    } else {
        match unsafe { CStr::from_ptr(cache_dir) }.to_str() {
            Ok(s) => Some(PathBuf::from(s)),
            Err(_) => {
                set_error("cache_dir is not valid UTF-8");
                return std::ptr::null_mut();
            }
        }
    };
    let ctx = SymklCtx {
        inner: Mutex::new(CtxInner {
            cache_dir,
            budgets: Budgets::default(),
            pipelines: BTreeMap::new(),
        }),
    };
    Box::into_raw(Box::new(ctx))
}

/// Override the operation and field budgets (0 keeps the current value).
#[no_mangle]
pub extern "C" fn symkl_ctx_set_budgets(
    ctx: *mut SymklCtx,
    op_budget: u64,
    field_budget: u64,
) -> SymklStatus {
    let Some(ctx) = (unsafe { ctx.as_ref() }) else {
        set_error("null context");
        return SymklStatus::NullArgument;
    };
    let mut inner = ctx.inner.lock().expect("context lock");
    if op_budget > 0 {
        inner.budgets.op_budget = op_budget;
    }
    if field_budget > 0 {
        inner.budgets.field_budget = field_budget;
    }
    // changing budgets invalidates warm pipelines
    inner.pipelines.clear();
    SymklStatus::Ok
}

#[no_mangle]
pub extern "C" fn symkl_ctx_free(ctx: *mut SymklCtx) {
    if !ctx.is_null() {
        drop(unsafe { Box::from_raw(ctx) });
    }
}

/// Free a string returned by this library.
#[no_mangle]
pub extern "C" fn symkl_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(unsafe { CString::from_raw(s) });
    }
}

fn with_pipeline<F>(
    ctx: *mut SymklCtx,
    p: u64,
    a: u32,
    n: u32,
    f: F,
) -> Result<String, (SymklStatus, String)>
where
    F: FnOnce(&mut Pipeline) -> Result<String, Error>,
{
    let ctx = unsafe { ctx.as_ref() }
        .ok_or((SymklStatus::NullArgument, "null context".to_string()))?;
    let mut inner = ctx.inner.lock().expect("context lock");
    let key = (p, a, n);
    if !inner.pipelines.contains_key(&key) {
        let cfg = PipelineConfig {
            p,
            a,
            n,
            budgets: inner.budgets,
            method: MethodChoice::Auto,
            slack: symkl::pipeline::DEFAULT_SLACK,
            m_max_override: None,
            cache_dir: inner.cache_dir.clone(),
        };
        let pipe = Pipeline::new(cfg).map_err(|e| (status_of(&e), e.to_string()))?;
        inner.pipelines.insert(key, pipe);
    }
    let pipe = inner.pipelines.get_mut(&key).expect("pipeline just inserted");
    f(pipe).map_err(|e| (status_of(&e), e.to_string()))
}

/// L(k, n, T) with all factors, as canonical JSON in *out_json.
#[no_mangle]
pub extern "C" fn symkl_lfunction_json(
    ctx: *mut SymklCtx,
    p: u64,
    a: u32,
    n: u32,
    k: u32,
    out_json: *mut *mut c_char,
) -> SymklStatus {
    match with_pipeline(ctx, p, a, n, |pipe| {
        let r = pipe.lfunction(k)?;
        Ok(report::to_canonical_string(&report::lresult_json(&r)))
    }) {
        Ok(s) => export_string(s, out_json),
        Err((code, msg)) => {
            set_error(msg);
            code
        }
    }
}

/// The non-trivial factor and its purity report, as canonical JSON.
#[no_mangle]
pub extern "C" fn symkl_nontrivial_json(
    ctx: *mut SymklCtx,
    p: u64,
    a: u32,
    n: u32,
    k: u32,
    out_json: *mut *mut c_char,
) -> SymklStatus {
    match with_pipeline(ctx, p, a, n, |pipe| {
        let r = pipe.lfunction(k)?;
        let value = serde_json::json!({
            "object": "nontrivial",
            "n": report::int_str(r.n),
            "k": report::int_str(r.k),
            "q": report::int_str(r.q),
            "nontrivial": report::poly_json(&r.nontrivial),
            "purity": report::purity_json(&r.purity),
        });
        Ok(report::to_canonical_string(&value))
    }) {
        Ok(s) => export_string(s, out_json),
        Err((code, msg)) => {
            set_error(msg);
            code
        }
    }
}

/// Trivial factors and the orbit census, as canonical JSON; requires
/// n | q - 1.
#[no_mangle]
pub extern "C" fn symkl_factors_json(
    ctx: *mut SymklCtx,
    p: u64,
    a: u32,
    n: u32,
    k: u32,
    out_json: *mut *mut c_char,
) -> SymklStatus {
    let build = || -> Result<String, Error> {
        let Some(ctx) = (unsafe { ctx.as_ref() }) else {
            return Err(Error::InvalidParameter("null context".into()));
        };
        let field_budget = ctx.inner.lock().expect("context lock").budgets.field_budget;
        let field = symkl::field::FieldDescriptor::build(p, a, field_budget)?;
        if (field.order() - 1) % n as u64 != 0 {
            return Err(Error::InvalidParameter(format!(
                "closed infinity factor needs n | q - 1, got n = {}, q = {}",
                n,
                field.order()
            )));
        }
        let census = symkl::trivial::tuple_census(n, k, &field, None)?;
        let bundle = symkl::trivial::TrivialFactorBundle::from_census(n, k, &field, &census)?;
        let value = serde_json::json!({
            "object": "factors",
            "p": report::int_str(p),
            "a": report::int_str(a),
            "q": report::int_str(field.order()),
            "n": report::int_str(n),
            "k": report::int_str(k),
            "det0": report::poly_json(&bundle.det0),
            "det_inf": report::det_inf_json(&bundle.det_inf),
            "h0": report::poly_json(&bundle.h0),
            "h2": report::poly_json(&bundle.h2),
            "exceptional": bundle.exceptional,
            "census": report::census_json(&census),
        });
        Ok(report::to_canonical_string(&value))
    };
    match build() {
        Ok(s) => export_string(s, out_json),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Weyl dimension; `alg` is one of "sl", "sp", "so", "g2". For g2 the
/// weight is k alpha_3 + b alpha_4 and `n` is ignored. The decimal string
/// lands in *out_decimal.
#[no_mangle]
pub extern "C" fn symkl_repdim(
    alg: *const c_char,
    n: u32,
    k: u32,
    b: u32,
    out_decimal: *mut *mut c_char,
) -> SymklStatus {
    if alg.is_null() {
        set_error("null algebra name");
        return SymklStatus::NullArgument;
    }
    let alg = match unsafe { CStr::from_ptr(alg) }.to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("algebra name is not valid UTF-8");
            return SymklStatus::InvalidParameter;
        }
    };
    let spec = match alg {
        "sl" => (AlgebraId::Sl(n), HighestWeight::KL1(k)),
        "sp" => (AlgebraId::Sp(n), HighestWeight::KL1(k)),
        "so" => (AlgebraId::So(n), HighestWeight::KL1(k)),
        "g2" => (AlgebraId::G2, HighestWeight::G2 { a: k, b }),
        other => {
            set_error(format!("unknown algebra {}", other));
            return SymklStatus::InvalidParameter;
        }
    };
    match weyl_dimension(spec.0, spec.1) {
        Ok(dim) => export_string(dim.to_string(), out_decimal),
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

/// Run a named verification suite; Ok when every check passes,
/// VerificationFailed otherwise. The full report JSON lands in *out_json
/// when the pointer is non-NULL.
#[no_mangle]
pub extern "C" fn symkl_verify_suite(
    suite: *const c_char,
    out_json: *mut *mut c_char,
) -> SymklStatus {
    if suite.is_null() {
        set_error("null suite name");
        return SymklStatus::NullArgument;
    }
    let name = match unsafe { CStr::from_ptr(suite) }.to_str() {
        Ok(s) => s,
        Err(_) => {
            set_error("suite name is not valid UTF-8");
            return SymklStatus::InvalidParameter;
        }
    };
    let rep = match name {
        "mseries" => suites::mseries(5, 8),
        "census" => suites::census(),
        "factorization" => suites::factorization(),
        "purity" => suites::purity(),
        "congruence" => suites::congruence(),
        "padic" => suites::padic(),
        "repdims" => suites::repdims(),
        "tables" => suites::tables(1 << 10, 4),
        "anchor" => suites::anchor(),
        "determinant" => suites::determinant(),
        "all" => suites::all(),
        other => {
            set_error(format!("unknown suite {}", other));
            return SymklStatus::InvalidParameter;
        }
    };
    match rep {
        Ok(rep) => {
            let pass = rep.pass();
            if !out_json.is_null() {
                let code = export_string(
                    report::to_canonical_string(&report::suite_json(&rep)),
                    out_json,
                );
                if code != SymklStatus::Ok {
                    return code;
                }
            }
            if pass {
                SymklStatus::Ok
            } else {
                set_error(format!("suite {} has failing checks", name));
                SymklStatus::VerificationFailed
            }
        }
        Err(e) => {
            set_error(e.to_string());
            status_of(&e)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn take_string(ptr: *mut c_char) -> String {
        assert!(!ptr.is_null());
        let s = unsafe { CStr::from_ptr(ptr) }.to_str().unwrap().to_string();
        symkl_string_free(ptr);
        s
    }

    #[test]
    fn version_is_static() {
        let v = unsafe { CStr::from_ptr(symkl_version()) };
        assert!(!v.to_str().unwrap().is_empty());
    }

    #[test]
    fn factors_through_ffi() {
        let ctx = symkl_ctx_new(std::ptr::null());
        assert!(!ctx.is_null());
        let mut out: *mut c_char = std::ptr::null_mut();
        let code = symkl_factors_json(ctx, 3, 1, 2, 4, &mut out);
        assert_eq!(code, SymklStatus::Ok);
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["det_inf"]["factor"], serde_json::json!(["1", "-9"]));
        symkl_ctx_free(ctx);
    }

    #[test]
    fn lfunction_through_ffi_reuses_pipeline() {
        let ctx = symkl_ctx_new(std::ptr::null());
        let mut out: *mut c_char = std::ptr::null_mut();
        assert_eq!(
            symkl_lfunction_json(ctx, 3, 1, 2, 1, &mut out),
            SymklStatus::Ok
        );
        let v: serde_json::Value = serde_json::from_str(&take_string(out)).unwrap();
        assert_eq!(v["lfunction"]["num"], serde_json::json!(["1", "-1"]));
        // same context, second weight: warm tables
        assert_eq!(
            symkl_lfunction_json(ctx, 3, 1, 2, 2, &mut out),
            SymklStatus::Ok
        );
        let _ = take_string(out);
        symkl_ctx_free(ctx);
    }

    #[test]
    fn error_paths_set_messages() {
        let ctx = symkl_ctx_new(std::ptr::null());
        let mut out: *mut c_char = std::ptr::null_mut();
        // n does not divide q - 1
        let code = symkl_factors_json(ctx, 3, 1, 4, 2, &mut out);
        assert_eq!(code, SymklStatus::InvalidParameter);
        let msg = take_string(symkl_last_error_message());
        assert!(msg.contains("n | q - 1"), "{}", msg);
        // rank below 2
        let code = symkl_lfunction_json(ctx, 3, 1, 1, 2, &mut out);
        assert_eq!(code, SymklStatus::InvalidParameter);
        symkl_ctx_free(ctx);
    }

    #[test]
    fn repdim_through_ffi() {
        let mut out: *mut c_char = std::ptr::null_mut();
        let alg = CString::new("g2").unwrap();
        assert_eq!(
            symkl_repdim(alg.as_ptr(), 0, 1, 0, &mut out),
            SymklStatus::Ok
        );
        assert_eq!(take_string(out), "7");
        let bad = CString::new("e8").unwrap();
        assert_eq!(
            symkl_repdim(bad.as_ptr(), 0, 1, 0, &mut out),
            SymklStatus::InvalidParameter
        );
    }

    #[test]
    fn null_safety() {
        assert_eq!(
            symkl_ctx_set_budgets(std::ptr::null_mut(), 1, 1),
            SymklStatus::NullArgument
        );
        symkl_ctx_free(std::ptr::null_mut());
        symkl_string_free(std::ptr::null_mut());
    }
}
