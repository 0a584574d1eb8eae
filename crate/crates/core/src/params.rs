//! Problem constants, hypothesis checks, and the constants derived from them.
//!
//! The problem is
//!
//! ```text
//! u_tt - u_xx + K u + lam u_t = f(x,t)                                  on (0,1) x (0,T)
//!  u_x(0,t) = h0 u(0,t) + lam0 u_t(0,t) + ht1 u(1,t) + lt1 u_t(1,t) + g0(t)
//! -u_x(1,t) = h1 u(1,t) + lam1 u_t(1,t) + ht0 u(0,t) + lt0 u_t(0,t) + g1(t)
//! ```

use std::fmt;

use crate::error::{Error, Result};

/// Fraction of the open upper bound used when a free parameter is not supplied.
pub const DEFAULT_FRACTION: f64 = 0.9;

/// The ten scalar constants of the boundary value problem.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProblemParams {
    /// Boundary stiffness at x = 0
    pub h0: f64,
    /// Boundary stiffness at x = 1
    pub h1: f64,
    /// Boundary damping at x = 0
    pub lam0: f64,
    /// Boundary damping at x = 1
    pub lam1: f64,
    /// Cross stiffness: u(0) in the condition at x = 1
    pub ht0: f64,
    /// Cross stiffness: u(1) in the condition at x = 0
    pub ht1: f64,
    /// Cross damping: u_t(0) in the condition at x = 1
    pub lt0: f64,
    /// Cross damping: u_t(1) in the condition at x = 0
    pub lt1: f64,
    /// Zeroth-order coefficient
    pub k: f64,
    /// Interior damping
    pub lam: f64,
}

impl ProblemParams {
    /// The shipped reference configuration.
    pub fn reference() -> Self {
        ProblemParams {
            h0: 1.0,
            h1: 0.5,
            lam0: 1.0,
            lam1: 1.0,
            ht0: 0.01,
            ht1: 0.01,
            lt0: 0.1,
            lt1: 0.1,
            k: 1.0,
            lam: 1.0,
        }
    }

    /// Names accepted by [`ProblemParams::set`], in declaration order.
    pub const NAMES: [&'static str; 10] = [
        "h0", "h1", "lam0", "lam1", "ht0", "ht1", "lt0", "lt1", "K", "lam",
    ];

    pub fn get(&self, name: &str) -> Option<f64> {
        Some(match name {
            "h0" => self.h0,
            "h1" => self.h1,
            "lam0" => self.lam0,
            "lam1" => self.lam1,
            "ht0" => self.ht0,
            "ht1" => self.ht1,
            "lt0" => self.lt0,
            "lt1" => self.lt1,
            "K" | "k" => self.k,
            "lam" => self.lam,
            _ => return None,
        })
    }

    /// Sets a constant by name; returns `false` for an unknown name.
    pub fn set(&mut self, name: &str, value: f64) -> bool {
        let slot = match name {
            "h0" => &mut self.h0,
            "h1" => &mut self.h1,
            "lam0" => &mut self.lam0,
            "lam1" => &mut self.lam1,
            "ht0" => &mut self.ht0,
            "ht1" => &mut self.ht1,
            "lt0" => &mut self.lt0,
            "lt1" => &mut self.lt1,
            "K" | "k" => &mut self.k,
            "lam" => &mut self.lam,
            _ => return false,
        };
        *slot = value;
        true
    }
}

/// One hypothesis on [`ProblemParams`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Hypothesis {
    Finite,
    H0Positive,
    H1NonNegative,
    Lam0Positive,
    Lam1Positive,
    /// |lt0 + lt1| < 2 sqrt(lam0 lam1)
    CrossDampingBound,
    KPositive,
    LamPositive,
}

impl Hypothesis {
    /// Bit used by the C interface to report this hypothesis.
    pub fn bit(self) -> u32 {
        1 << (self as u32)
    }
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Hypothesis::Finite => "all constants finite",
            Hypothesis::H0Positive => "h0 > 0",
            Hypothesis::H1NonNegative => "h1 >= 0",
            Hypothesis::Lam0Positive => "lam0 > 0",
            Hypothesis::Lam1Positive => "lam1 > 0",
            Hypothesis::CrossDampingBound => "cross-damping bound |lt0 + lt1| < 2 sqrt(lam0 lam1)",
            Hypothesis::KPositive => "K > 0",
            Hypothesis::LamPositive => "lam > 0",
        };
        f.write_str(s)
    }
}

/// Outcome of [`validate_params`]. Accepted iff `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Validation {
    pub violations: Vec<Hypothesis>,
}

impl Validation {
    pub fn accepted(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        if self.accepted() {
            Ok(())
        } else {
            Err(Error::Domain(self.violations))
        }
    }
}

/// Checks the existence hypotheses and, when `require_decay` is set, also
/// `K > 0` and `lam > 0`. Every failed inequality is listed.
pub fn validate_params(p: &ProblemParams, require_decay: bool) -> Validation {
    let all = [
        p.h0, p.h1, p.lam0, p.lam1, p.ht0, p.ht1, p.lt0, p.lt1, p.k, p.lam,
    ];
    if all.iter().any(|v| !v.is_finite()) {
        return Validation {
            violations: vec![Hypothesis::Finite],
        };
    }
    let mut violations = Vec::new();
    if !(p.h0 > 0.0) {
        violations.push(Hypothesis::H0Positive);
    }
    if !(p.h1 >= 0.0) {
        violations.push(Hypothesis::H1NonNegative);
    }
    if !(p.lam0 > 0.0) {
        violations.push(Hypothesis::Lam0Positive);
    }
    if !(p.lam1 > 0.0) {
        violations.push(Hypothesis::Lam1Positive);
    }
    // compared squared so the equality case is decided exactly
    let s = p.lt0 + p.lt1;
    if !(p.lam0 > 0.0 && p.lam1 > 0.0 && s * s < 4.0 * p.lam0 * p.lam1) {
        violations.push(Hypothesis::CrossDampingBound);
    }
    if require_decay {
        if !(p.k > 0.0) {
            violations.push(Hypothesis::KPositive);
        }
        if !(p.lam > 0.0) {
            violations.push(Hypothesis::LamPositive);
        }
    }
    Validation { violations }
}

/// Coercivity constant of `a(.,.)` with respect to `||.||_1`.
pub fn coercivity_constant(p: &ProblemParams) -> f64 {
    p.h0.min(1.0)
}

/// Continuity constant `max{1, h0, 2 h1}`.
///
/// This value does not bound `a(v,v) / ||v||_1^2` once `h1 > 0`
/// (v = 1, h0 = 1, h1 = 0.5 gives 1.5 against 1); see
/// [`continuity_constant_sharp`].
pub fn continuity_constant(p: &ProblemParams) -> f64 {
    1f64.max(p.h0).max(2.0 * p.h1)
}

/// A continuity constant that does hold: `max{1, h0} + 2 h1`.
///
/// From `v(1)^2 <= 2 ||v||_1^2`.
pub fn continuity_constant_sharp(p: &ProblemParams) -> f64 {
    1f64.max(p.h0) + 2.0 * p.h1
}

/// Positive-definiteness constant of the boundary damping form.
pub fn mu_min(p: &ProblemParams) -> f64 {
    let s = p.lt0 + p.lt1;
    0.25 * (4.0 * p.lam0 * p.lam1 - s * s) * (1.0 / p.lam0).min(1.0 / p.lam1)
}

/// `lam0 x^2 + lam1 y^2 + (lt0 + lt1) x y`
pub fn quadratic_form_lhs(p: &ProblemParams, x: f64, y: f64) -> f64 {
    p.lam0 * x * x + p.lam1 * y * y + (p.lt0 + p.lt1) * x * y
}

/// Optional user choices for the free parameters of the decay estimate.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FreeChoice {
    pub eps1: Option<f64>,
    pub eps2: Option<f64>,
    pub delta: Option<f64>,
}

/// Constants used by the norm equivalences and the decay estimate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DerivedConstants {
    pub c0: f64,
    /// Continuity constant `max{1, h0, 2 h1}`, see [`continuity_constant`].
    pub c1: f64,
    /// Continuity constant that holds for all `h1 >= 0`.
    pub c1_sharp: f64,
    pub mu_min: f64,
    pub mu0: f64,
    pub eps1: f64,
    pub eps2: f64,
    pub delta: f64,
    pub beta1: f64,
    pub beta2: f64,
    /// Slack of the smallness condition on ht0, ht1. Nonnegative when it holds.
    pub htilde_budget: f64,
}

impl DerivedConstants {
    /// Coefficient of `sigma(t)` in the dissipation inequality for the Lyapunov functional.
    pub fn forcing_weight(&self) -> f64 {
        0.5 * (1.0 / self.eps1 + self.delta / self.eps2)
    }

    /// Upper bounds of `(eps1, eps2)`; the `delta` bound depends on `eps1, eps2`.
    pub fn eps_bounds(p: &ProblemParams) -> (f64, f64) {
        let c0 = coercivity_constant(p);
        ((c0 * p.lam).min(0.5 * mu_min(p)), c0 / 5.0)
    }

    /// Upper bound of `delta` for given `eps1, eps2`. Infinite terms are dropped.
    pub fn delta_bound(p: &ProblemParams, eps1: f64, eps2: f64) -> f64 {
        let c0 = coercivity_constant(p);
        let mu = mu_min(p);
        let lt_sq = p.lt0 * p.lt0 + p.lt1 * p.lt1;
        let third = if lt_sq == 0.0 {
            f64::INFINITY
        } else {
            2.0 * eps2 * (0.5 * mu - eps1) / lt_sq
        };
        (0.5 * c0).min(p.lam - eps1 / c0).min(third)
    }
}

/// Computes every derived constant. Omitted free parameters default to
/// [`DEFAULT_FRACTION`] of their upper bound, chosen in the order
/// `eps1`, `eps2`, `delta`.
pub fn derive_constants(p: &ProblemParams, free: FreeChoice) -> Result<DerivedConstants> {
    validate_params(p, true).into_result()?;

    let c0 = coercivity_constant(p);
    let mu = mu_min(p);
    let (eps1_max, eps2_max) = DerivedConstants::eps_bounds(p);

    let eps1 = free.eps1.unwrap_or(DEFAULT_FRACTION * eps1_max);
    let eps2 = free.eps2.unwrap_or(DEFAULT_FRACTION * eps2_max);
    let delta_max = DerivedConstants::delta_bound(p, eps1, eps2);
    if !(delta_max > 0.0) {
        return Err(Error::Infeasible(format!(
            "eps1 = {eps1}, eps2 = {eps2} leave delta bound {delta_max}"
        )));
    }
    check_open("eps1", eps1, eps1_max)?;
    check_open("eps2", eps2, eps2_max)?;
    let delta = free.delta.unwrap_or(DEFAULT_FRACTION * delta_max);
    check_open("delta", delta, delta_max)?;

    let ratio = 2.0 * delta / c0;
    let beta1 = 1.0 - ratio;
    let beta2 = 1.0 + ratio * (1.0 + p.lam + p.lam0 + p.lam1);
    let ht_sq = p.ht0 * p.ht0 + p.ht1 * p.ht1;
    let htilde_budget =
        delta * (1.0 - 5.0 * eps2 / c0) - ht_sq / (eps1 * c0) - ratio * (p.ht0 + p.ht1).abs();

    Ok(DerivedConstants {
        c0,
        c1: continuity_constant(p),
        c1_sharp: continuity_constant_sharp(p),
        mu_min: mu,
        mu0: c0.min(mu),
        eps1,
        eps2,
        delta,
        beta1,
        beta2,
        htilde_budget,
    })
}

fn check_open(name: &'static str, value: f64, upper: f64) -> Result<()> {
    if value > 0.0 && value < upper {
        Ok(())
    } else {
        Err(Error::FreeParameter { name, value, upper })
    }
}
