//! C interface to the solver.
//!
//! Every function returns a [`TpwStatus`] or a plain value, never unwinds,
//! and records a message readable with [`tpw_last_error_message`] on
//! failure. Handles are opaque and released with their `_free` function.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use nalgebra::DVector;
use twopoint_wave::diagnostics::{record_trajectory, EnergyRecord};
use twopoint_wave::galerkin::{assemble, Forcing, GalerkinSystem, Mesh};
use twopoint_wave::integrate::{integrate, Trajectory};
use twopoint_wave::output::run_to_dir;
use twopoint_wave::params::{
    derive_constants, validate_params, DerivedConstants, FreeChoice, ProblemParams,
};
use twopoint_wave::scenario::{run, Scenario};
use twopoint_wave::Error;

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TpwStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    /// Constants violate a hypothesis; see [`tpw_validate_params`].
    Domain = 3,
    Infeasible = 4,
    FreeParameter = 5,
    Mesh = 6,
    Solver = 7,
    Config = 8,
    Io = 9,
    Panic = 10,
}

impl From<&Error> for TpwStatus {
    fn from(e: &Error) -> Self {
        match e {
            Error::Domain(_) => TpwStatus::Domain,
            Error::Infeasible(_) => TpwStatus::Infeasible,
            Error::FreeParameter { .. } => TpwStatus::FreeParameter,
            Error::Mesh(_) => TpwStatus::Mesh,
            Error::Config { .. } | Error::UnknownForm(_) => TpwStatus::Config,
            Error::Io(_) => TpwStatus::Io,
            Error::Dimension { .. } => TpwStatus::InvalidArgument,
            _ => TpwStatus::Solver,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TpwParams {
    pub h0: f64,
    pub h1: f64,
    pub lam0: f64,
    pub lam1: f64,
    pub ht0: f64,
    pub ht1: f64,
    pub lt0: f64,
    pub lt1: f64,
    pub k: f64,
    pub lam: f64,
}

impl From<TpwParams> for ProblemParams {
    fn from(p: TpwParams) -> Self {
        ProblemParams {
            h0: p.h0,
            h1: p.h1,
            lam0: p.lam0,
            lam1: p.lam1,
            ht0: p.ht0,
            ht1: p.ht1,
            lt0: p.lt0,
            lt1: p.lt1,
            k: p.k,
            lam: p.lam,
        }
    }
}

impl From<ProblemParams> for TpwParams {
    fn from(p: ProblemParams) -> Self {
        TpwParams {
            h0: p.h0,
            h1: p.h1,
            lam0: p.lam0,
            lam1: p.lam1,
            ht0: p.ht0,
            ht1: p.ht1,
            lt0: p.lt0,
            lt1: p.lt1,
            k: p.k,
            lam: p.lam,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TpwDerivedConstants {
    pub c0: f64,
    /// `max{1, h0, 2 h1}`; not a valid bound when h1 > 0, see `c1_sharp`.
    pub c1: f64,
    pub c1_sharp: f64,
    pub mu_min: f64,
    pub mu0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub delta: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub htilde_budget: f64,
}

impl From<DerivedConstants> for TpwDerivedConstants {
    fn from(d: DerivedConstants) -> Self {
        TpwDerivedConstants {
            c0: d.c0,
            c1: d.c1,
            c1_sharp: d.c1_sharp,
            mu_min: d.mu_min,
            mu0: d.mu0,
            eps1: d.eps1,
            eps2: d.eps2,
            delta: d.delta,
            beta1: d.beta1,
            beta2: d.beta2,
            htilde_budget: d.htilde_budget,
        }
    }
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct TpwEnergySample {
    pub t: f64,
    pub energy: f64,
    pub psi: f64,
    pub gamma: f64,
    pub sigma: f64,
    pub x: f64,
    pub u0_trace: f64,
    pub u1_trace: f64,
}

impl From<&EnergyRecord> for TpwEnergySample {
    fn from(r: &EnergyRecord) -> Self {
        TpwEnergySample {
            t: r.t,
            energy: r.energy,
            psi: r.psi,
            gamma: r.gamma,
            sigma: r.sigma,
            x: r.x,
            u0_trace: r.u0_trace,
            u1_trace: r.u1_trace,
        }
    }
}

/// Assembled Galerkin system on a uniform mesh.
pub struct TpwSystem {
    inner: GalerkinSystem,
}

/// Sampled trajectory with its energy records.
pub struct TpwTrajectory {
    inner: Trajectory,
    records: Vec<EnergyRecord>,
}

/// Parsed scenario file.
pub struct TpwScenario {
    inner: Scenario,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let c = CString::new(msg.into().replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(TpwStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure(TpwStatus::from(&e), e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(TpwStatus::NullPointer, format!("{what} is null"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> TpwStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => {
            LAST_ERROR.with(|e| *e.borrow_mut() = None);
            TpwStatus::Ok
        }
        Ok(Err(Failure(status, msg))) => {
            set_error(msg);
            status
        }
        Err(_) => {
            set_error("internal panic");
            TpwStatus::Panic
        }
    }
}

unsafe fn read<'a, T>(p: *const T, what: &str) -> Result<&'a T, Failure> {
    p.as_ref().ok_or_else(|| null(what))
}

unsafe fn write<T>(p: *mut T, value: T, what: &str) -> Result<(), Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    p.write(value);
    Ok(())
}

unsafe fn vector(p: *const f64, len: usize, what: &str) -> Result<DVector<f64>, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    Ok(DVector::from_column_slice(std::slice::from_raw_parts(
        p, len,
    )))
}

unsafe fn string<'a>(p: *const c_char, what: &str) -> Result<&'a str, Failure> {
    if p.is_null() {
        return Err(null(what));
    }
    CStr::from_ptr(p)
        .to_str()
        .map_err(|_| Failure(TpwStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

/// Message of the last failure on this thread, or NULL after a success.
/// Valid until the next call into this library on the same thread.
#[no_mangle]
pub extern "C" fn tpw_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Library version as a static NUL-terminated string.
#[no_mangle]
pub extern "C" fn tpw_version() -> *const c_char {
    concat!(env!("CARGO_PKG_VERSION"), "\0").as_ptr().cast()
}

/// # Safety
/// `out` must be valid for writes.
#[no_mangle]
pub unsafe extern "C" fn tpw_reference_params(out: *mut TpwParams) -> TpwStatus {
    guard(|| write(out, ProblemParams::reference().into(), "out"))
}

/// Writes a bit mask of violated hypotheses to `out_mask` (0 when accepted).
/// Bits: 1 finite, 2 h0 > 0, 4 h1 >= 0, 8 lam0 > 0, 16 lam1 > 0,
/// 32 cross-damping bound, 64 K > 0, 128 lam > 0. The last two are only
/// checked when `require_decay` is true.
///
/// # Safety
/// `params` must be readable and `out_mask` writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_validate_params(
    params: *const TpwParams,
    require_decay: bool,
    out_mask: *mut u32,
) -> TpwStatus {
    guard(|| {
        let p: ProblemParams = (*read(params, "params")?).into();
        let mask = validate_params(&p, require_decay)
            .violations
            .iter()
            .fold(0, |m, h| m | h.bit());
        write(out_mask, mask, "out_mask")
    })
}

/// Derives the decay constants. `eps1`, `eps2` and `delta` may be NULL to
/// use the defaults.
///
/// # Safety
/// Non-null pointers must be valid.
#[no_mangle]
pub unsafe extern "C" fn tpw_derive_constants(
    params: *const TpwParams,
    eps1: *const f64,
    eps2: *const f64,
    delta: *const f64,
    out: *mut TpwDerivedConstants,
) -> TpwStatus {
    guard(|| {
        let p: ProblemParams = (*read(params, "params")?).into();
        let free = FreeChoice {
            eps1: eps1.as_ref().copied(),
            eps2: eps2.as_ref().copied(),
            delta: delta.as_ref().copied(),
        };
        write(out, derive_constants(&p, free)?.into(), "out")
    })
}

/// Assembles the system on `n_nodes` uniform nodes.
///
/// # Safety
/// `params` must be readable and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_system_new(
    params: *const TpwParams,
    n_nodes: usize,
    out: *mut *mut TpwSystem,
) -> TpwStatus {
    guard(|| {
        let p: ProblemParams = (*read(params, "params")?).into();
        if out.is_null() {
            return Err(null("out"));
        }
        let mesh = Mesh::uniform(n_nodes)?;
        let sys = Box::new(TpwSystem {
            inner: assemble(&mesh, &p),
        });
        write(out, Box::into_raw(sys), "out")
    })
}

/// # Safety
/// `sys` must come from [`tpw_system_new`] and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tpw_system_free(sys: *mut TpwSystem) {
    if !sys.is_null() {
        drop(Box::from_raw(sys));
    }
}

/// Number of coefficients, or 0 for NULL.
///
/// # Safety
/// `sys` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tpw_system_dim(sys: *const TpwSystem) -> usize {
    sys.as_ref().map_or(0, |s| s.inner.dim())
}

/// `||v||_1^2`, `a(v, v)` and `max |v|` of the finite element function with
/// coefficients `c[0..len]`. Output pointers may be NULL.
///
/// # Safety
/// `sys` must be live, `c` readable for `len` values, outputs NULL or writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_system_norms(
    sys: *const TpwSystem,
    c: *const f64,
    len: usize,
    out_norm_1_sq: *mut f64,
    out_norm_a_sq: *mut f64,
    out_sup: *mut f64,
) -> TpwStatus {
    guard(|| {
        let s = &read(sys, "sys")?.inner;
        let c = vector(c, len, "c")?;
        let values = [s.norm_1_sq(&c)?, s.norm_a_sq(&c)?, s.sup_norm(&c)?];
        for (p, v) in [out_norm_1_sq, out_norm_a_sq, out_sup]
            .into_iter()
            .zip(values)
        {
            if !p.is_null() {
                p.write(v);
            }
        }
        Ok(())
    })
}

/// Integrates the unforced problem from coefficients `c0`, `v0` (each of
/// length `len`) over `[0, horizon]` with step `dt`. `delta` weights the
/// Lyapunov functional in the recorded samples.
///
/// # Safety
/// `sys` must be live, `c0` and `v0` readable for `len` values, `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_simulate(
    sys: *const TpwSystem,
    c0: *const f64,
    v0: *const f64,
    len: usize,
    horizon: f64,
    dt: f64,
    delta: f64,
    out: *mut *mut TpwTrajectory,
) -> TpwStatus {
    guard(|| {
        let s = &read(sys, "sys")?.inner;
        let (c0, v0) = (vector(c0, len, "c0")?, vector(v0, len, "v0")?);
        if out.is_null() {
            return Err(null("out"));
        }
        let forcing = Forcing::zero();
        let traj = integrate(s, &forcing, &c0, &v0, horizon, dt)?;
        let records = record_trajectory(&traj, s, delta, &forcing)?;
        write(
            out,
            Box::into_raw(Box::new(TpwTrajectory {
                inner: traj,
                records,
            })),
            "out",
        )
    })
}

/// # Safety
/// `traj` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn tpw_trajectory_len(traj: *const TpwTrajectory) -> usize {
    traj.as_ref().map_or(0, |t| t.records.len())
}

/// # Safety
/// `traj` must be live and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_trajectory_energy(
    traj: *const TpwTrajectory,
    index: usize,
    out: *mut TpwEnergySample,
) -> TpwStatus {
    guard(|| {
        let t = read(traj, "traj")?;
        let r = t.records.get(index).ok_or_else(|| {
            Failure(
                TpwStatus::InvalidArgument,
                format!("index {index} out of range for {} samples", t.records.len()),
            )
        })?;
        write(out, r.into(), "out")
    })
}

/// Copies the final coefficients and velocities into buffers of length `len`.
///
/// # Safety
/// `traj` must be live; `c_out` and `v_out` writable for `len` values.
#[no_mangle]
pub unsafe extern "C" fn tpw_trajectory_final_state(
    traj: *const TpwTrajectory,
    c_out: *mut f64,
    v_out: *mut f64,
    len: usize,
) -> TpwStatus {
    guard(|| {
        let (c, v) = read(traj, "traj")?.inner.final_state();
        if len != c.len() {
            return Err(Failure(
                TpwStatus::InvalidArgument,
                format!("buffer length {len}, state length {}", c.len()),
            ));
        }
        if c_out.is_null() || v_out.is_null() {
            return Err(null("output buffer"));
        }
        ptr::copy_nonoverlapping(c.as_ptr(), c_out, len);
        ptr::copy_nonoverlapping(v.as_ptr(), v_out, len);
        Ok(())
    })
}

/// # Safety
/// `traj` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tpw_trajectory_free(traj: *mut TpwTrajectory) {
    if !traj.is_null() {
        drop(Box::from_raw(traj));
    }
}

/// Parses scenario text.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_scenario_parse(
    text: *const c_char,
    out: *mut *mut TpwScenario,
) -> TpwStatus {
    guard(|| {
        let text = string(text, "text")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = Scenario::parse(text)?;
        write(
            out,
            Box::into_raw(Box::new(TpwScenario { inner: s })),
            "out",
        )
    })
}

/// Reads and parses a scenario file.
///
/// # Safety
/// `path` must be a NUL-terminated string and `out` writable.
#[no_mangle]
pub unsafe extern "C" fn tpw_scenario_load(
    path: *const c_char,
    out: *mut *mut TpwScenario,
) -> TpwStatus {
    guard(|| {
        let path = string(path, "path")?;
        if out.is_null() {
            return Err(null("out"));
        }
        let s = Scenario::load(Path::new(path))?;
        write(
            out,
            Box::into_raw(Box::new(TpwScenario { inner: s })),
            "out",
        )
    })
}

/// Runs a scenario. Writes output files into `out_dir` unless it is NULL,
/// stores the overall verdict in `out_passed`, and hands back the trajectory
/// through `out_traj` unless it is NULL.
///
/// # Safety
/// `scenario` must be live; other pointers NULL or valid.
#[no_mangle]
pub unsafe extern "C" fn tpw_scenario_run(
    scenario: *const TpwScenario,
    out_dir: *const c_char,
    out_passed: *mut bool,
    out_traj: *mut *mut TpwTrajectory,
) -> TpwStatus {
    guard(|| {
        let s = &read(scenario, "scenario")?.inner;
        let outcome = if out_dir.is_null() {
            run(s)?
        } else {
            run_to_dir(s, Path::new(string(out_dir, "out_dir")?))?
        };
        if !out_passed.is_null() {
            out_passed.write(outcome.passed());
        }
        if !out_traj.is_null() {
            let t = TpwTrajectory {
                inner: outcome.trajectory,
                records: outcome.records,
            };
            out_traj.write(Box::into_raw(Box::new(t)));
        }
        Ok(())
    })
}

/// # Safety
/// `scenario` must come from this library and not be used afterwards.
#[no_mangle]
pub unsafe extern "C" fn tpw_scenario_free(scenario: *mut TpwScenario) {
    if !scenario.is_null() {
        drop(Box::from_raw(scenario));
    }
}
