//! C ABI over `everett-sim`.
//!
//! Every function returns an [`EverettStatus`]; on failure the message is
//! available from [`everett_last_error_message`] on the same thread. Angles
//! are in radians. Strings returned through out-pointers are owned by the
//! caller and must be released with [`everett_string_free`].

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use everett_sim::config::{parse_config, RunManifest};
use everett_sim::eprb::{bell_q, run_eprb, EprbConfig, EprbExperiment};
use everett_sim::ghzm::{run_ghzm, GhzmConfig};
use everett_sim::labels::{acts_trivially_on, support};
use everett_sim::run::run;
use everett_sim::{lhv, Direction, ObserverSpec, Operator, SimError};

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EverettStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    ConfigError = 3,
    InvalidArgument = 4,
    NumericalError = 5,
    Panic = 6,
}

/// Parsed run configuration.
pub struct EverettManifest(RunManifest);

/// A dense operator on a labeled layout.
pub struct EverettOperator(Operator);

#[repr(C)]
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct EverettEprbReport {
    pub mean_b1: f64,
    pub mean_b2: f64,
    pub mean_b1b2: f64,
    pub p_uu: f64,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EverettEprbObservable {
    A1 = 0,
    A2 = 1,
    B1 = 2,
    B2 = 3,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(msg: String) {
    let c = CString::new(msg.replace('\0', " ")).expect("nul bytes removed");
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(EverettStatus, String);

impl From<SimError> for Failure {
    fn from(e: SimError) -> Self {
        let status = match e {
            SimError::NotUnitary { .. }
            | SimError::NotNormalized(_)
            | SimError::NonRealExpectation(_)
            | SimError::NonFinite(_) => EverettStatus::NumericalError,
            _ => EverettStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(EverettStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> EverettStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => EverettStatus::Ok,
        Ok(Err(Failure(status, msg))) => {
            set_last_error(msg);
            status
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "panic".into());
            set_last_error(format!("internal error: {msg}"));
            EverettStatus::Panic
        }
    }
}

unsafe fn read_str<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(EverettStatus::InvalidUtf8, format!("{what} is not UTF-8")))
}

unsafe fn read3(p: *const f64, what: &str) -> Result<[f64; 3], Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    let s = std::slice::from_raw_parts(p, 3);
    Ok([s[0], s[1], s[2]])
}

unsafe fn write<T>(out: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if out.is_null() {
        return Err(null(what));
    }
    out.write(value);
    Ok(())
}

fn to_c_string(s: String) -> *mut c_char {
    CString::new(s.replace('\0', " "))
        .expect("nul bytes removed")
        .into_raw()
}

/// Message for the last failed call on this thread, or null. Valid until
/// the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn everett_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn everett_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `s` must be null or a string returned by this library.
#[no_mangle]
pub unsafe extern "C" fn everett_string_free(s: *mut c_char) {
    if !s.is_null() {
        drop(CString::from_raw(s));
    }
}

/// Parse config text into a manifest handle.
///
/// # Safety
/// `text` must be a NUL-terminated string; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_manifest_parse(
    text: *const c_char,
    out: *mut *mut EverettManifest,
) -> EverettStatus {
    guard(|| {
        let text = read_str(text, "text")?;
        let m = parse_config(text).map_err(|e| Failure(EverettStatus::ConfigError, e.to_string()))?;
        write(out, Box::into_raw(Box::new(EverettManifest(m))), "out")
    })
}

/// # Safety
/// `m` must be null or a handle from [`everett_manifest_parse`].
#[no_mangle]
pub unsafe extern "C" fn everett_manifest_free(m: *mut EverettManifest) {
    if !m.is_null() {
        drop(Box::from_raw(m));
    }
}

/// Canonical config text for a manifest.
///
/// # Safety
/// `m` must be a live manifest handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_manifest_to_text(
    m: *const EverettManifest,
    out_text: *mut *mut c_char,
) -> EverettStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("manifest"))?;
        write(out_text, to_c_string(m.0.to_config_text()), "out_text")
    })
}

/// Run a manifest. The report (table or CSV) goes to `out_report`, the
/// process exit code the CLI would use to `out_exit_code`; diagnostics
/// for a nonzero exit code are available as the last error message.
///
/// # Safety
/// `m` must be a live manifest handle; out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_manifest_run(
    m: *const EverettManifest,
    out_report: *mut *mut c_char,
    out_exit_code: *mut i32,
) -> EverettStatus {
    guard(|| {
        let m = m.as_ref().ok_or_else(|| null("manifest"))?;
        if out_report.is_null() {
            return Err(null("out_report"));
        }
        let result = run(&m.0);
        write(out_exit_code, result.code, "out_exit_code")?;
        if !result.stderr.is_empty() {
            set_last_error(result.stderr.trim_end().to_string());
        }
        write(out_report, to_c_string(result.stdout), "out_report")
    })
}

unsafe fn eprb_config(
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
    entangled: bool,
    beta: *const f64,
) -> Result<EprbConfig, Failure> {
    let cfg = EprbConfig::new(
        Direction::new(theta1, phi1),
        Direction::new(theta2, phi2),
        entangled,
    );
    if beta.is_null() {
        return Ok(cfg);
    }
    let b = read3(beta, "beta")?;
    ObserverSpec::new("O", &b)?;
    Ok(cfg.with_beta(b))
}

/// EPRB report. `beta` points at three distinct eigenvalues, or is null for
/// the spin preset (0, 1, -1).
///
/// # Safety
/// `beta` must be null or point at three doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_eprb_run(
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
    entangled: bool,
    beta: *const f64,
    out: *mut EverettEprbReport,
) -> EverettStatus {
    guard(|| {
        let cfg = eprb_config(theta1, phi1, theta2, phi2, entangled, beta)?;
        let r = run_eprb(&cfg)?;
        write(
            out,
            EverettEprbReport {
                mean_b1: r.mean_b1,
                mean_b2: r.mean_b2,
                mean_b1b2: r.mean_b1b2,
                p_uu: r.p_uu,
            },
            "out",
        )
    })
}

/// Bell quantity for three analyzers at polar angle `theta` and azimuths
/// `phis[0..3]`. `out_addends` may be null.
///
/// # Safety
/// `phis` must point at three doubles; `out_addends` must be null or have
/// room for three; `out_q` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_bell_q(
    theta: f64,
    phis: *const f64,
    out_q: *mut f64,
    out_addends: *mut f64,
) -> EverettStatus {
    guard(|| {
        let phis = read3(phis, "phis")?;
        let q = bell_q(phis.map(|p| Direction::new(theta, p)))?;
        write(out_q, q.q, "out_q")?;
        if !out_addends.is_null() {
            std::slice::from_raw_parts_mut(out_addends, 3).copy_from_slice(&q.addends);
        }
        Ok(())
    })
}

/// `⟨Ĝ(t₃)⟩` for three analyzers. `gamma` is null for the even preset
/// (0, 0, 1), which makes the result the even-parity probability.
///
/// # Safety
/// `thetas` and `phis` must point at three doubles each; `gamma` must be
/// null or point at three doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_ghzm_run(
    thetas: *const f64,
    phis: *const f64,
    entangled: bool,
    gamma: *const f64,
    out: *mut f64,
) -> EverettStatus {
    guard(|| {
        let thetas = read3(thetas, "thetas")?;
        let phis = read3(phis, "phis")?;
        let n = [0, 1, 2].map(|k| Direction::new(thetas[k], phis[k]));
        let mut cfg = GhzmConfig::new(n, entangled);
        if !gamma.is_null() {
            let g = read3(gamma, "gamma")?;
            ObserverSpec::new("O0", &g)?;
            cfg = cfg.with_gamma(g);
        }
        write(out, run_ghzm(&cfg)?, "out")
    })
}

/// Largest Bell quantity over all instruction-set distributions.
///
/// # Safety
/// `out_q` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_lhv_eprb_q_max(out_q: *mut f64) -> EverettStatus {
    guard(|| write(out_q, lhv::eprb_q_max().0, "out_q"))
}

/// GHZ instruction-set enumeration: number of sets examined, number
/// consistent with the three odd-parity constraints, and the classical
/// even-parity probability at (0°, 0°, 0°).
///
/// # Safety
/// Out-pointers must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_lhv_ghz(
    out_examined: *mut u32,
    out_survivors: *mut u32,
    out_p_even_000: *mut f64,
) -> EverettStatus {
    guard(|| {
        let v = lhv::ghz_constrained_sets();
        write(out_examined, v.examined as u32, "out_examined")?;
        write(out_survivors, v.survivors.len() as u32, "out_survivors")?;
        write(out_p_even_000, v.classical_p_even_000(), "out_p_even_000")
    })
}

/// One of the EPRB observables, either at `t₀` or evolved through the
/// full sequence, as an operator handle.
///
/// # Safety
/// `beta` must be null or point at three doubles; `out` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_eprb_observable(
    theta1: f64,
    phi1: f64,
    theta2: f64,
    phi2: f64,
    entangled: bool,
    beta: *const f64,
    which: EverettEprbObservable,
    evolved: bool,
    out: *mut *mut EverettOperator,
) -> EverettStatus {
    guard(|| {
        let cfg = eprb_config(theta1, phi1, theta2, phi2, entangled, beta)?;
        let exp = EprbExperiment::new(&cfg)?;
        let o = &exp.observables;
        let op = match which {
            EverettEprbObservable::A1 => &o.a1,
            EverettEprbObservable::A2 => &o.a2,
            EverettEprbObservable::B1 => &o.b1,
            EverettEprbObservable::B2 => &o.b2,
        };
        let op = if evolved { exp.evolve(op)? } else { op.clone() };
        write(out, Box::into_raw(Box::new(EverettOperator(op))), "out")
    })
}

/// # Safety
/// `op` must be null or a handle returned by this library.
#[no_mangle]
pub unsafe extern "C" fn everett_operator_free(op: *mut EverettOperator) {
    if !op.is_null() {
        drop(Box::from_raw(op));
    }
}

/// Total dimension of the operator's layout.
///
/// # Safety
/// `op` must be a live handle; `out_dim` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_operator_dim(
    op: *const EverettOperator,
    out_dim: *mut usize,
) -> EverettStatus {
    guard(|| {
        let op = op.as_ref().ok_or_else(|| null("operator"))?;
        write(out_dim, op.0.dim(), "out_dim")
    })
}

/// Labels the operator acts on nontrivially, e.g. `{O1, S1}`.
///
/// # Safety
/// `op` must be a live handle; `out_text` must be writable.
#[no_mangle]
pub unsafe extern "C" fn everett_operator_support(
    op: *const EverettOperator,
    out_text: *mut *mut c_char,
) -> EverettStatus {
    guard(|| {
        let op = op.as_ref().ok_or_else(|| null("operator"))?;
        write(out_text, to_c_string(support(&op.0).to_string()), "out_text")
    })
}

/// Whether the operator acts as the identity on `label`, with the
/// reconstruction residual.
///
/// # Safety
/// `op` must be a live handle; `label` a NUL-terminated string; out-pointers
/// writable.
#[no_mangle]
pub unsafe extern "C" fn everett_operator_acts_trivially_on(
    op: *const EverettOperator,
    label: *const c_char,
    out_trivial: *mut bool,
    out_residual: *mut f64,
) -> EverettStatus {
    guard(|| {
        let op = op.as_ref().ok_or_else(|| null("operator"))?;
        let label = read_str(label, "label")?;
        let (trivial, residual) = acts_trivially_on(&op.0, label)?;
        write(out_trivial, trivial, "out_trivial")?;
        write(out_residual, residual, "out_residual")
    })
}
