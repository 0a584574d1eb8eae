//! Manufactured exact solutions and the forcing that makes them exact.
//!
//! Every registry form is separable, `u(x,t) = T(t) X(x)`, so any mixed
//! derivative is `T^(i)(t) X^(j)(x)` and the synthesized forcing has closed
//! form time derivatives of every order.

use std::f64::consts::PI;
use std::sync::Arc;

use crate::compat::{Profile, SmoothData};
use crate::error::{Error, Result};
use crate::galerkin::Forcing;
use crate::params::ProblemParams;

#[derive(Clone, Copy, Debug, PartialEq)]
enum TimeFactor {
    Zero,
    /// `exp(-alpha t)`
    Exp(f64),
    /// `1 + t^2`
    Quadratic,
}

impl TimeFactor {
    fn deriv(self, k: usize, t: f64) -> f64 {
        match self {
            TimeFactor::Zero => 0.0,
            TimeFactor::Exp(a) => (-a).powi(k as i32) * (-a * t).exp(),
            TimeFactor::Quadratic => match k {
                0 => 1.0 + t * t,
                1 => 2.0 * t,
                2 => 2.0,
                _ => 0.0,
            },
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
enum SpaceFactor {
    /// `cos(pi x)`
    Cosine,
    /// `1 + x`
    Affine,
    /// `x^2 - x + 1`
    Quadratic,
}

impl SpaceFactor {
    fn deriv(self, k: usize, x: f64) -> f64 {
        match self {
            SpaceFactor::Cosine => {
                let s = PI.powi(k as i32);
                match k % 4 {
                    0 => s * (PI * x).cos(),
                    1 => -s * (PI * x).sin(),
                    2 => -s * (PI * x).cos(),
                    _ => s * (PI * x).sin(),
                }
            }
            SpaceFactor::Affine => match k {
                0 => 1.0 + x,
                1 => 1.0,
                _ => 0.0,
            },
            SpaceFactor::Quadratic => match k {
                0 => x * x - x + 1.0,
                1 => 2.0 * x - 1.0,
                2 => 2.0,
                _ => 0.0,
            },
        }
    }
}

/// Named exact solutions.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ManufacturedForm {
    Zero,
    /// `exp(-alpha t) cos(pi x)`
    DecayingCosine {
        alpha: f64,
    },
    /// `exp(-alpha t) (1 + x)`
    DecayingAffine {
        alpha: f64,
    },
    /// `(1 + t^2)(x^2 - x + 1)`
    Polynomial,
}

impl ManufacturedForm {
    pub const NAMES: [&'static str; 4] =
        ["zero", "decaying_cosine", "decaying_affine", "polynomial"];

    pub fn from_name(name: &str, alpha: f64) -> Result<Self> {
        match name {
            "zero" => Ok(ManufacturedForm::Zero),
            "decaying_cosine" => Ok(ManufacturedForm::DecayingCosine { alpha }),
            "decaying_affine" => Ok(ManufacturedForm::DecayingAffine { alpha }),
            "polynomial" => Ok(ManufacturedForm::Polynomial),
            other => Err(Error::UnknownForm(other.to_string())),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            ManufacturedForm::Zero => "zero",
            ManufacturedForm::DecayingCosine { .. } => "decaying_cosine",
            ManufacturedForm::DecayingAffine { .. } => "decaying_affine",
            ManufacturedForm::Polynomial => "polynomial",
        }
    }

    fn factors(self) -> (TimeFactor, SpaceFactor) {
        match self {
            ManufacturedForm::Zero => (TimeFactor::Zero, SpaceFactor::Affine),
            ManufacturedForm::DecayingCosine { alpha } => {
                (TimeFactor::Exp(alpha), SpaceFactor::Cosine)
            }
            ManufacturedForm::DecayingAffine { alpha } => {
                (TimeFactor::Exp(alpha), SpaceFactor::Affine)
            }
            ManufacturedForm::Polynomial => (TimeFactor::Quadratic, SpaceFactor::Quadratic),
        }
    }
}

/// An exact solution together with the data it induces for given constants.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ManufacturedSolution {
    pub form: ManufacturedForm,
    pub params: ProblemParams,
    time: TimeFactor,
    space: SpaceFactor,
}

/// Synthesizes the forcing for `form` under constants `p`.
pub fn manufacture(form: ManufacturedForm, p: &ProblemParams) -> ManufacturedSolution {
    let (time, space) = form.factors();
    ManufacturedSolution {
        form,
        params: *p,
        time,
        space,
    }
}

impl ManufacturedSolution {
    pub fn is_zero(&self) -> bool {
        self.form == ManufacturedForm::Zero
    }

    /// `d^kt/dt^kt d^kx/dx^kx u(x, t)`
    pub fn derivative(&self, kt: usize, kx: usize, x: f64, t: f64) -> f64 {
        self.time.deriv(kt, t) * self.space.deriv(kx, x)
    }

    pub fn exact(&self, x: f64, t: f64) -> f64 {
        self.derivative(0, 0, x, t)
    }

    /// k-th time derivative of `f = u_tt - u_xx + K u + lam u_t`.
    pub fn source(&self, k: usize, x: f64, t: f64) -> f64 {
        let p = &self.params;
        self.derivative(k + 2, 0, x, t) - self.derivative(k, 2, x, t)
            + p.k * self.derivative(k, 0, x, t)
            + p.lam * self.derivative(k + 1, 0, x, t)
    }

    /// k-th time derivative of `g0`.
    pub fn boundary0(&self, k: usize, t: f64) -> f64 {
        let p = &self.params;
        let d = |kt, kx, x| self.derivative(kt, kx, x, t);
        d(k, 1, 0.0)
            - p.h0 * d(k, 0, 0.0)
            - p.lam0 * d(k + 1, 0, 0.0)
            - p.ht1 * d(k, 0, 1.0)
            - p.lt1 * d(k + 1, 0, 1.0)
    }

    /// k-th time derivative of `g1`.
    pub fn boundary1(&self, k: usize, t: f64) -> f64 {
        let p = &self.params;
        let d = |kt, kx, x| self.derivative(kt, kx, x, t);
        -d(k, 1, 1.0)
            - p.h1 * d(k, 0, 1.0)
            - p.lam1 * d(k + 1, 0, 1.0)
            - p.ht0 * d(k, 0, 0.0)
            - p.lt0 * d(k + 1, 0, 0.0)
    }

    /// Forcing of the k-times time-differentiated problem.
    pub fn forcing_derivative(&self, k: usize) -> Forcing {
        if self.is_zero() {
            return Forcing::zero();
        }
        let (a, b, c) = (*self, *self, *self);
        Forcing::new(
            Arc::new(move |x, t| a.source(k, x, t)),
            Arc::new(move |t| b.boundary0(k, t)),
            Arc::new(move |t| c.boundary1(k, t)),
        )
    }

    pub fn forcing(&self) -> Forcing {
        self.forcing_derivative(0)
    }

    pub fn initial_displacement(&self, x: f64) -> f64 {
        self.derivative(0, 0, x, 0.0)
    }

    pub fn initial_velocity(&self, x: f64) -> f64 {
        self.derivative(1, 0, x, 0.0)
    }

    /// Initial data with analytic even spatial derivatives and forcing
    /// derivatives `0..=r`.
    pub fn smooth_data(&self, r: usize) -> SmoothData {
        let profile = |kt: usize| {
            let depth = r + 2;
            let levels = (0..depth)
                .map(|j| {
                    let s = *self;
                    Arc::new(move |x: f64| s.derivative(kt, 2 * j, x, 0.0))
                        as Arc<dyn Fn(f64) -> f64 + Send + Sync>
                })
                .collect();
            Profile::with_even_derivatives(levels)
        };
        SmoothData {
            u0: profile(0),
            u1: profile(1),
            forcing_derivs: (0..=r).map(|k| self.forcing_derivative(k)).collect(),
        }
    }
}
