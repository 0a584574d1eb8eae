//! Initial data of the time-differentiated problems and the check that
//! solving the differentiated problem reproduces the time derivative of the
//! original solution.
//!
//! With `u0^[0] = u0`, `u1^[0] = u1` and for `r >= 1`
//!
//! ```text
//! u0^[r] = u1^[r-1]
//! u1^[r] = (u0^[r-1])_xx - K u0^[r-1] - lam u1^[r-1] + d^(r-1)f/dt^(r-1)(x, 0)
//! ```

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::galerkin::{assemble, Forcing, Mesh};
use crate::integrate::{integrate, project_initial_data};
use crate::params::ProblemParams;

pub type SpaceFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// Step of the five-point second-difference fallback.
pub const FD_STEP: f64 = 1e-4;

/// A function of `x` with optional analytic even derivatives.
///
/// `levels[j]` is the `2j`-th derivative. When only the value is known,
/// [`Profile::second`] falls back to a five-point central difference.
#[derive(Clone)]
pub struct Profile {
    levels: Vec<SpaceFn>,
}

impl Profile {
    pub fn new(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Self {
        Profile {
            levels: vec![Arc::new(f)],
        }
    }

    pub fn with_even_derivatives(levels: Vec<SpaceFn>) -> Self {
        assert!(!levels.is_empty(), "profile needs a value");
        Profile { levels }
    }

    pub fn zero() -> Self {
        Profile::with_even_derivatives(vec![Arc::new(|_| 0.0), Arc::new(|_| 0.0)])
    }

    pub fn value(&self, x: f64) -> f64 {
        (self.levels[0])(x)
    }

    /// Number of analytic levels (value included).
    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    /// Second derivative.
    pub fn second(&self) -> Profile {
        if self.levels.len() >= 2 {
            return Profile {
                levels: self.levels[1..].to_vec(),
            };
        }
        let f = self.levels[0].clone();
        Profile::new(move |x| {
            let h = FD_STEP;
            (-f(x + 2.0 * h) + 16.0 * f(x + h) - 30.0 * f(x) + 16.0 * f(x - h) - f(x - 2.0 * h))
                / (12.0 * h * h)
        })
    }

    /// `sum coef_i * profile_i`; analytic levels kept up to the shallowest term.
    pub fn combine(terms: &[(f64, &Profile)]) -> Profile {
        let depth = terms.iter().map(|(_, p)| p.depth()).min().unwrap_or(1);
        let levels = (0..depth)
            .map(|j| {
                let parts: Vec<(f64, SpaceFn)> = terms
                    .iter()
                    .map(|(a, p)| (*a, p.levels[j].clone()))
                    .collect();
                Arc::new(move |x: f64| parts.iter().map(|(a, f)| a * f(x)).sum::<f64>()) as SpaceFn
            })
            .collect();
        Profile { levels }
    }
}

impl std::fmt::Debug for Profile {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Profile")
            .field("depth", &self.depth())
            .finish()
    }
}

/// Initial data and time derivatives of the forcing.
///
/// `forcing_derivs[k]` holds `d^k f/dt^k`, `d^k g0/dt^k` and `d^k g1/dt^k`.
#[derive(Clone, Debug)]
pub struct SmoothData {
    pub u0: Profile,
    pub u1: Profile,
    pub forcing_derivs: Vec<Forcing>,
}

impl SmoothData {
    pub fn zero(r: usize) -> Self {
        SmoothData {
            u0: Profile::zero(),
            u1: Profile::zero(),
            forcing_derivs: vec![Forcing::zero(); r + 1],
        }
    }
}

/// Initial data `(u0^[r], u1^[r])` of the r-times differentiated problem.
pub fn compatibility_data(
    data: &SmoothData,
    p: &ProblemParams,
    r: usize,
) -> Result<(Profile, Profile)> {
    if r > 0 && data.forcing_derivs.len() < r {
        return Err(Error::Order(format!(
            "order {r} needs source derivatives up to {}, have {}",
            r - 1,
            data.forcing_derivs.len()
        )));
    }
    let (mut a, mut b) = (data.u0.clone(), data.u1.clone());
    for s in 1..=r {
        let fk = &data.forcing_derivs[s - 1];
        let source = if fk.is_zero() {
            Profile::zero()
        } else {
            let f = fk.f.clone();
            Profile::new(move |x| f(x, 0.0))
        };
        let axx = a.second();
        let next = Profile::combine(&[(1.0, &axx), (-p.k, &a), (-p.lam, &b), (1.0, &source)]);
        a = b;
        b = next;
    }
    Ok((a, b))
}

/// Outcome of [`ladder_check`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LadderReport {
    pub order: usize,
    /// `max |difference quotient - u^[r]|` over interior samples and nodes
    pub absolute: f64,
    /// `max |difference quotient|` over the same samples
    pub scale: f64,
    /// `absolute / scale` (or `absolute` when the scale is zero)
    pub relative: f64,
}

/// Solves the original problem and the r-times differentiated one, then
/// compares the r-th centered time difference of the first against the second.
pub fn ladder_check(
    data: &SmoothData,
    p: &ProblemParams,
    mesh: &Mesh,
    r: usize,
    horizon: f64,
    dt: f64,
) -> Result<LadderReport> {
    ladder_check_perturbed(data, p, mesh, r, horizon, dt, 0.0)
}

/// Same as [`ladder_check`] with `velocity_offset` added to `u1^[r]`; a
/// nonzero offset makes the differentiated problem inconsistent.
pub fn ladder_check_perturbed(
    data: &SmoothData,
    p: &ProblemParams,
    mesh: &Mesh,
    r: usize,
    horizon: f64,
    dt: f64,
    velocity_offset: f64,
) -> Result<LadderReport> {
    if !(1..=2).contains(&r) {
        return Err(Error::Order(format!(
            "ladder order must be 1 or 2, got {r}"
        )));
    }
    if data.forcing_derivs.len() < r + 1 {
        return Err(Error::Order(format!(
            "order {r} needs forcing derivatives up to {r}, have {}",
            data.forcing_derivs.len().saturating_sub(1)
        )));
    }
    let sys = assemble(mesh, p);

    let (c0, v0) = project_initial_data(mesh, |x| data.u0.value(x), |x| data.u1.value(x));
    let base = integrate(&sys, &data.forcing_derivs[0], &c0, &v0, horizon, dt)?;

    let (a, b) = compatibility_data(data, p, r)?;
    let (cr, vr) = project_initial_data(mesh, |x| a.value(x), |x| b.value(x) + velocity_offset);
    let diff = integrate(&sys, &data.forcing_derivs[r], &cr, &vr, horizon, dt)?;

    let (mut absolute, mut scale): (f64, f64) = (0.0, 0.0);
    for n in 1..base.len() - 1 {
        let q = if r == 1 {
            (&base.coeffs[n + 1] - &base.coeffs[n - 1]) / (2.0 * dt)
        } else {
            (&base.coeffs[n + 1] - &base.coeffs[n] * 2.0 + &base.coeffs[n - 1]) / (dt * dt)
        };
        absolute = absolute.max((&q - &diff.coeffs[n]).amax());
        scale = scale.max(q.amax());
    }
    let relative = if scale > 0.0 {
        absolute / scale
    } else {
        absolute
    };
    Ok(LadderReport {
        order: r,
        absolute,
        scale,
        relative,
    })
}
