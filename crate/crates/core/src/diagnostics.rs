//! Energy, Lyapunov functional, and the checks run on sampled trajectories.

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::galerkin::{quad, Forcing, GalerkinSystem};
use crate::integrate::Trajectory;
use crate::params::DerivedConstants;

/// Samples with energy at or below this are ignored by the decay fit.
pub const ENERGY_FLOOR: f64 = 1e-14;

/// Relative tolerance of the sandwich check.
pub const SANDWICH_TOL: f64 = 1e-10;

/// Absolute part of the differential-inequality tolerance.
pub const DIFFERENTIAL_FLOOR: f64 = 1e-8;

/// Functionals evaluated at one sample.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct EnergyRecord {
    pub t: f64,
    pub energy: f64,
    pub psi: f64,
    pub gamma: f64,
    /// `||f(t)||^2 + g0(t)^2 + g1(t)^2`
    pub sigma: f64,
    /// `||u'||^2 + ||u||_1^2 + int_0^t (|u'(0)|^2 + |u'(1)|^2)`
    pub x: f64,
    pub u0_trace: f64,
    pub u1_trace: f64,
}

/// `1/2 ||v||^2 + 1/2 a(c, c) + K/2 ||c||^2`
pub fn energy(sys: &GalerkinSystem, c: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    sys.check_dim(c)?;
    sys.check_dim(v)?;
    let k = sys.params.k;
    Ok(0.5 * quad(&sys.mass, v) + 0.5 * quad(&sys.a, c) + 0.5 * k * quad(&sys.mass, c))
}

/// `<c, v> + lam/2 ||c||^2 + lam0/2 c(0)^2 + lam1/2 c(1)^2`
pub fn psi(sys: &GalerkinSystem, c: &DVector<f64>, v: &DVector<f64>) -> Result<f64> {
    sys.check_dim(c)?;
    sys.check_dim(v)?;
    let p = &sys.params;
    let (u0, u1) = (sys.trace0.dot(c), sys.trace1.dot(c));
    Ok(c.dot(&(&sys.mass * v))
        + 0.5 * p.lam * quad(&sys.mass, c)
        + 0.5 * p.lam0 * u0 * u0
        + 0.5 * p.lam1 * u1 * u1)
}

/// Lyapunov functional `E + delta psi`.
pub fn lyapunov(
    sys: &GalerkinSystem,
    dc: &DerivedConstants,
    c: &DVector<f64>,
    v: &DVector<f64>,
) -> Result<f64> {
    Ok(energy(sys, c, v)? + dc.delta * psi(sys, c, v)?)
}

pub fn sigma_forcing(forcing: &Forcing, sys: &GalerkinSystem, t: f64) -> f64 {
    if forcing.is_zero() {
        return 0.0;
    }
    let (g0, g1) = ((forcing.g0)(t), (forcing.g1)(t));
    sys.source_norm_sq(forcing, t) + g0 * g0 + g1 * g1
}

/// `gamma` uses `delta`; pass 0 to track the energy alone.
pub fn record_trajectory(
    traj: &Trajectory,
    sys: &GalerkinSystem,
    delta: f64,
    forcing: &Forcing,
) -> Result<Vec<EnergyRecord>> {
    let mut out = Vec::with_capacity(traj.len());
    for i in 0..traj.len() {
        let (c, v) = (&traj.coeffs[i], &traj.velocities[i]);
        let e = energy(sys, c, v)?;
        let ps = psi(sys, c, v)?;
        let x = quad(&sys.mass, v) + sys.norm_1_sq(c)? + traj.acc0[i] + traj.acc1[i];
        out.push(EnergyRecord {
            t: traj.times[i],
            energy: e,
            psi: ps,
            gamma: e + delta * ps,
            sigma: sigma_forcing(forcing, sys, traj.times[i]),
            x,
            u0_trace: traj.traces[i].u0,
            u1_trace: traj.traces[i].u1,
        });
    }
    Ok(out)
}

/// Result of [`check_sandwich`]. Ratios are `gamma / energy` over samples with `energy > 0`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SandwichCheck {
    pub violations: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
}

/// Counts samples with `gamma` outside `[beta1 E, beta2 E]` by more than
/// `1e-10 max(E, 1)`.
pub fn check_sandwich(records: &[EnergyRecord], dc: &DerivedConstants) -> SandwichCheck {
    let mut check = SandwichCheck {
        violations: 0,
        min_ratio: f64::INFINITY,
        max_ratio: f64::NEG_INFINITY,
    };
    for r in records {
        let tol = SANDWICH_TOL * r.energy.max(1.0);
        if r.gamma < dc.beta1 * r.energy - tol || r.gamma > dc.beta2 * r.energy + tol {
            check.violations += 1;
        }
        if r.energy > 0.0 {
            let ratio = r.gamma / r.energy;
            check.min_ratio = check.min_ratio.min(ratio);
            check.max_ratio = check.max_ratio.max(ratio);
        }
    }
    check
}

/// Result of [`check_differential_inequality`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DifferentialCheck {
    pub violations: usize,
    /// Largest `gamma' + delta gamma - w sigma` over interior samples.
    pub worst_excess: f64,
    /// Richardson constant: `max |D_dt - D_dt/2| / (3/4 dt^2)`.
    pub c_dt: f64,
    pub tolerance: f64,
}

fn centered_derivatives(records: &[EnergyRecord]) -> Vec<f64> {
    records
        .windows(3)
        .map(|w| (w[2].gamma - w[0].gamma) / (w[2].t - w[0].t))
        .collect()
}

/// Checks `gamma' <= -delta gamma + 1/2 (1/eps1 + delta/eps2) sigma` on the
/// interior samples of `coarse`, with `gamma'` from centered differences.
///
/// `fine` must be the same run at half the step. The tolerance is
/// `C_dt dt^2 + 1e-8`, where `C_dt` is calibrated from the difference between
/// the centered derivatives of the two runs at common times.
pub fn check_differential_inequality(
    coarse: &[EnergyRecord],
    fine: &[EnergyRecord],
    dc: &DerivedConstants,
) -> Result<DifferentialCheck> {
    if coarse.len() < 3 {
        return Err(Error::TooFewSamples(coarse.len()));
    }
    if fine.len() != 2 * coarse.len() - 1 {
        return Err(Error::TimeGrid(format!(
            "half-step run has {} samples, expected {}",
            fine.len(),
            2 * coarse.len() - 1
        )));
    }
    let dt = coarse[1].t - coarse[0].t;
    let dc_coarse = centered_derivatives(coarse);
    let dc_fine = centered_derivatives(fine);
    // coarse interior sample n sits at fine sample 2n, i.e. centered index 2n - 1
    let mut diff: f64 = 0.0;
    for (n, d) in dc_coarse.iter().enumerate() {
        let f = dc_fine[2 * (n + 1) - 1];
        diff = diff.max((d - f).abs());
    }
    let c_dt = diff / (0.75 * dt * dt);
    let tolerance = c_dt * dt * dt + DIFFERENTIAL_FLOOR;

    let w = dc.forcing_weight();
    let mut check = DifferentialCheck {
        violations: 0,
        worst_excess: f64::NEG_INFINITY,
        c_dt,
        tolerance,
    };
    for (d, r) in dc_coarse.iter().zip(&coarse[1..]) {
        let excess = d + dc.delta * r.gamma - w * r.sigma;
        check.worst_excess = check.worst_excess.max(excess);
        if excess > tolerance {
            check.violations += 1;
        }
    }
    Ok(check)
}

/// Log-linear least-squares fit of the energy.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayFit {
    /// `-slope` of `log E` against `t`
    pub rate: f64,
    /// `exp(intercept)`
    pub amplitude: f64,
    pub window: (f64, f64),
    /// Root-mean-square residual of `log E` about the fitted line.
    pub residual: f64,
    pub samples: usize,
}

/// Fits `log E = log A - rate t` by ordinary least squares over `window`
/// (default: second half of the horizon), skipping samples with
/// `E <= 1e-14`.
pub fn fit_decay_rate(records: &[EnergyRecord], window: Option<(f64, f64)>) -> Result<DecayFit> {
    let t_end = records.last().map(|r| r.t).unwrap_or(0.0);
    let (t0, t1) = window.unwrap_or((0.5 * t_end, t_end));
    let pts: Vec<(f64, f64)> = records
        .iter()
        .filter(|r| r.t >= t0 && r.t <= t1 && r.energy > ENERGY_FLOOR)
        .map(|r| (r.t, r.energy.ln()))
        .collect();
    if pts.len() < 10 {
        return Err(Error::InsufficientData(pts.len()));
    }
    let n = pts.len() as f64;
    let mt = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let (mut stt, mut sty) = (0.0, 0.0);
    for (t, y) in &pts {
        stt += (t - mt) * (t - mt);
        sty += (t - mt) * (y - my);
    }
    let slope = sty / stt;
    let intercept = my - slope * mt;
    let ss: f64 = pts
        .iter()
        .map(|(t, y)| {
            let r = y - (intercept + slope * t);
            r * r
        })
        .sum();
    Ok(DecayFit {
        rate: -slope,
        amplitude: intercept.exp(),
        window: (pts[0].0, pts[pts.len() - 1].0),
        residual: (ss / n).sqrt(),
        samples: pts.len(),
    })
}

/// Summary of the decay checks for one run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DecayReport {
    pub fitted_rate: f64,
    pub fitted_amplitude: f64,
    pub theoretical_delta: f64,
    pub sandwich_violations: usize,
    pub differential_violations: usize,
    pub fit_window: (f64, f64),
    pub residual: f64,
}

impl DecayReport {
    pub fn new(
        fit: &DecayFit,
        dc: &DerivedConstants,
        sandwich: &SandwichCheck,
        differential: Option<&DifferentialCheck>,
    ) -> Self {
        DecayReport {
            fitted_rate: fit.rate,
            fitted_amplitude: fit.amplitude,
            theoretical_delta: dc.delta,
            sandwich_violations: sandwich.violations,
            differential_violations: differential.map_or(0, |d| d.violations),
            fit_window: fit.window,
            residual: fit.residual,
        }
    }
}
