//! Time integration of the semi-discrete system.
//!
//! The production integrator is the implicit midpoint rule on the first-order
//! form `c' = v`, `M v' = F(t) - C v - G c` with `C = lam M + D` and
//! `G = A + K M + B`. Eliminating `c_{n+1}` leaves one linear solve per step
//! with the constant matrix `M + dt/2 C + dt^2/4 G` for `w = v_n + v_{n+1}`:
//!
//! ```text
//! (M + dt/2 C + dt^2/4 G) w = 2 M v_n + dt F(t_n + dt/2) - dt G c_n
//! v_{n+1} = w - v_n,   c_{n+1} = c_n + dt/2 w
//! ```
//!
//! A classical RK4 integrator is kept as an independent oracle for tiny systems.

use nalgebra::{DMatrix, DVector, LU};

use crate::error::{Error, Result};
use crate::galerkin::{Forcing, GalerkinSystem, Mesh};

/// Largest system accepted by [`oracle_integrate`].
pub const ORACLE_MAX_DIM: usize = 8;

/// Boundary traces of one sample.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Traces {
    pub u0: f64,
    pub u1: f64,
    pub du0: f64,
    pub du1: f64,
}

/// Sampled solution with running boundary integrals.
#[derive(Clone, Debug)]
pub struct Trajectory {
    pub dt: f64,
    pub times: Vec<f64>,
    pub coeffs: Vec<DVector<f64>>,
    pub velocities: Vec<DVector<f64>>,
    pub traces: Vec<Traces>,
    /// Trapezoid approximations of `int_0^t |u_t(0,s)|^2 ds`
    pub acc0: Vec<f64>,
    /// Trapezoid approximations of `int_0^t |u_t(1,s)|^2 ds`
    pub acc1: Vec<f64>,
}

impl Trajectory {
    fn start(
        sys: &GalerkinSystem,
        dt: f64,
        c0: DVector<f64>,
        v0: DVector<f64>,
        cap: usize,
    ) -> Self {
        let mut traj = Trajectory {
            dt,
            times: Vec::with_capacity(cap),
            coeffs: Vec::with_capacity(cap),
            velocities: Vec::with_capacity(cap),
            traces: Vec::with_capacity(cap),
            acc0: Vec::with_capacity(cap),
            acc1: Vec::with_capacity(cap),
        };
        traj.push(sys, 0.0, c0, v0);
        traj
    }

    fn push(&mut self, sys: &GalerkinSystem, t: f64, c: DVector<f64>, v: DVector<f64>) {
        let tr = Traces {
            u0: sys.trace0.dot(&c),
            u1: sys.trace1.dot(&c),
            du0: sys.trace0.dot(&v),
            du1: sys.trace1.dot(&v),
        };
        let (a0, a1) = match (self.traces.last(), self.times.last()) {
            (Some(prev), Some(&tp)) => {
                let half = 0.5 * (t - tp);
                (
                    self.acc0[self.acc0.len() - 1] + half * (prev.du0 * prev.du0 + tr.du0 * tr.du0),
                    self.acc1[self.acc1.len() - 1] + half * (prev.du1 * prev.du1 + tr.du1 * tr.du1),
                )
            }
            _ => (0.0, 0.0),
        };
        self.times.push(t);
        self.coeffs.push(c);
        self.velocities.push(v);
        self.traces.push(tr);
        self.acc0.push(a0);
        self.acc1.push(a1);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn final_state(&self) -> (&DVector<f64>, &DVector<f64>) {
        let n = self.len() - 1;
        (&self.coeffs[n], &self.velocities[n])
    }
}

/// Nodal interpolants of the initial displacement and velocity.
pub fn project_initial_data(
    mesh: &Mesh,
    u0: impl Fn(f64) -> f64,
    u1: impl Fn(f64) -> f64,
) -> (DVector<f64>, DVector<f64>) {
    let c0 = DVector::from_iterator(mesh.n_nodes(), mesh.nodes().iter().map(|&x| u0(x)));
    let v0 = DVector::from_iterator(mesh.n_nodes(), mesh.nodes().iter().map(|&x| u1(x)));
    (c0, v0)
}

/// Implicit midpoint stepper with the iteration matrix factored once.
pub struct MidpointStepper<'a> {
    sys: &'a GalerkinSystem,
    dt: f64,
    damping: DMatrix<f64>,
    displacement: DMatrix<f64>,
    lu: LU<f64, nalgebra::Dyn, nalgebra::Dyn>,
}

impl<'a> MidpointStepper<'a> {
    pub fn new(sys: &'a GalerkinSystem, dt: f64) -> Result<Self> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(Error::TimeGrid(format!("dt must be positive, got {dt}")));
        }
        let damping = sys.damping();
        let displacement = sys.displacement();
        let lhs = &sys.mass + &damping * (0.5 * dt) + &displacement * (0.25 * dt * dt);
        let lu = lhs.lu();
        if !lu.is_invertible() {
            return Err(Error::SingularMatrix { dt });
        }
        Ok(MidpointStepper {
            sys,
            dt,
            damping,
            displacement,
            lu,
        })
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    /// Advances `(c, v)` from `t` to `t + dt`.
    pub fn step(
        &self,
        forcing: &Forcing,
        c: &DVector<f64>,
        v: &DVector<f64>,
        t: f64,
    ) -> Result<(DVector<f64>, DVector<f64>)> {
        self.sys.check_dim(c)?;
        self.sys.check_dim(v)?;
        let dt = self.dt;
        let mut rhs = &self.sys.mass * v * 2.0 - &self.displacement * c * dt;
        if !forcing.is_zero() {
            rhs += self.sys.load_vector(forcing, t + 0.5 * dt) * dt;
        }
        let w = self.lu.solve(&rhs).ok_or(Error::SingularMatrix { dt })?;
        let c_next = c + &w * (0.5 * dt);
        let v_next = w - v;
        Ok((c_next, v_next))
    }

    /// Right-hand side of the first-order form, used by residual checks.
    pub fn acceleration(
        &self,
        forcing: &Forcing,
        c: &DVector<f64>,
        v: &DVector<f64>,
        t: f64,
    ) -> DVector<f64> {
        acceleration_rhs(
            self.sys,
            &self.damping,
            &self.displacement,
            forcing,
            c,
            v,
            t,
        )
    }
}

fn acceleration_rhs(
    sys: &GalerkinSystem,
    damping: &DMatrix<f64>,
    displacement: &DMatrix<f64>,
    forcing: &Forcing,
    c: &DVector<f64>,
    v: &DVector<f64>,
    t: f64,
) -> DVector<f64> {
    let mut r = -(damping * v) - displacement * c;
    if !forcing.is_zero() {
        r += sys.load_vector(forcing, t);
    }
    r
}

/// Single midpoint step; factors the iteration matrix on every call.
/// Prefer [`MidpointStepper`] in loops.
pub fn step(
    sys: &GalerkinSystem,
    forcing: &Forcing,
    c: &DVector<f64>,
    v: &DVector<f64>,
    t: f64,
    dt: f64,
) -> Result<(DVector<f64>, DVector<f64>)> {
    MidpointStepper::new(sys, dt)?.step(forcing, c, v, t)
}

/// Number of steps of size `dt` that cover `horizon`.
pub fn step_count(horizon: f64, dt: f64) -> Result<usize> {
    if !(horizon > 0.0 && horizon.is_finite()) {
        return Err(Error::TimeGrid(format!(
            "horizon must be positive, got {horizon}"
        )));
    }
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(Error::TimeGrid(format!("dt must be positive, got {dt}")));
    }
    let n = (horizon / dt).round();
    if n < 1.0 || (n * dt - horizon).abs() > 1e-9 * horizon {
        return Err(Error::TimeGrid(format!(
            "horizon {horizon} is not an integer multiple of dt {dt}"
        )));
    }
    Ok(n as usize)
}

/// Integrates from `t = 0` to `horizon` with the implicit midpoint rule.
pub fn integrate(
    sys: &GalerkinSystem,
    forcing: &Forcing,
    c0: &DVector<f64>,
    v0: &DVector<f64>,
    horizon: f64,
    dt: f64,
) -> Result<Trajectory> {
    sys.check_dim(c0)?;
    sys.check_dim(v0)?;
    let n = step_count(horizon, dt)?;
    let stepper = MidpointStepper::new(sys, dt)?;
    let mut traj = Trajectory::start(sys, dt, c0.clone(), v0.clone(), n + 1);
    let (mut c, mut v) = (c0.clone(), v0.clone());
    for k in 0..n {
        let t = k as f64 * dt;
        let (cn, vn) = stepper.step(forcing, &c, &v, t)?;
        traj.push(sys, (k + 1) as f64 * dt, cn.clone(), vn.clone());
        c = cn;
        v = vn;
    }
    Ok(traj)
}

/// Classical RK4 on the same first-order form with step `dt_oracle`,
/// sampled every `output_dt`. `output_dt / dt_oracle` must be an integer
/// of at least 100.
pub fn oracle_integrate(
    sys: &GalerkinSystem,
    forcing: &Forcing,
    c0: &DVector<f64>,
    v0: &DVector<f64>,
    horizon: f64,
    dt_oracle: f64,
    output_dt: f64,
) -> Result<Trajectory> {
    let m = sys.dim();
    if m > ORACLE_MAX_DIM {
        return Err(Error::OracleTooLarge(m));
    }
    sys.check_dim(c0)?;
    sys.check_dim(v0)?;
    let n_out = step_count(horizon, output_dt)?;
    let sub = step_count(output_dt, dt_oracle)?;
    if sub < 100 {
        return Err(Error::TimeGrid(format!(
            "oracle step {dt_oracle} must be at most output step / 100"
        )));
    }
    let mass_lu = sys.mass.clone().lu();
    let damping = sys.damping();
    let displacement = sys.displacement();
    let rhs =
        |c: &DVector<f64>, v: &DVector<f64>, t: f64| -> Result<(DVector<f64>, DVector<f64>)> {
            let r = acceleration_rhs(sys, &damping, &displacement, forcing, c, v, t);
            let a = mass_lu
                .solve(&r)
                .ok_or(Error::SingularMatrix { dt: dt_oracle })?;
            Ok((v.clone(), a))
        };

    let h = dt_oracle;
    let mut traj = Trajectory::start(sys, output_dt, c0.clone(), v0.clone(), n_out + 1);
    let (mut c, mut v) = (c0.clone(), v0.clone());
    for k in 0..n_out {
        for s in 0..sub {
            let t = k as f64 * output_dt + s as f64 * h;
            let (k1c, k1v) = rhs(&c, &v, t)?;
            let (k2c, k2v) = rhs(
                &(&c + &k1c * (h / 2.0)),
                &(&v + &k1v * (h / 2.0)),
                t + h / 2.0,
            )?;
            let (k3c, k3v) = rhs(
                &(&c + &k2c * (h / 2.0)),
                &(&v + &k2v * (h / 2.0)),
                t + h / 2.0,
            )?;
            let (k4c, k4v) = rhs(&(&c + &k3c * h), &(&v + &k3v * h), t + h)?;
            c += (k1c + k2c * 2.0 + k3c * 2.0 + k4c) * (h / 6.0);
            v += (k1v + k2v * 2.0 + k3v * 2.0 + k4v) * (h / 6.0);
        }
        traj.push(sys, (k + 1) as f64 * output_dt, c.clone(), v.clone());
    }
    Ok(traj)
}

/// `max_n max_i |a_n,i - b_n,i| / max_n max_i |b_n,i|` over matching samples.
pub fn relative_max_nodal_error(a: &Trajectory, b: &Trajectory) -> f64 {
    let mut num: f64 = 0.0;
    let mut den: f64 = 0.0;
    for (x, y) in a.coeffs.iter().zip(&b.coeffs) {
        num = num.max((x - y).amax());
        den = den.max(y.amax());
    }
    if den == 0.0 {
        num
    } else {
        num / den
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::galerkin::assemble;
    use crate::params::ProblemParams;
    use approx::assert_relative_eq;

    fn sys(n: usize) -> GalerkinSystem {
        assemble(&Mesh::uniform(n).unwrap(), &ProblemParams::reference())
    }

    #[test]
    fn equilibrium_is_fixed() {
        let s = sys(5);
        let z = DVector::zeros(5);
        let (c, v) = step(&s, &Forcing::zero(), &z, &z, 0.0, 0.01).unwrap();
        assert_eq!(c, z);
        assert_eq!(v, z);
    }

    #[test]
    fn sample_count() {
        let s = sys(3);
        let z = DVector::zeros(3);
        let traj = integrate(&s, &Forcing::zero(), &z, &z, 1.0, 0.1).unwrap();
        assert_eq!(traj.len(), 11);
        assert_relative_eq!(traj.times[10], 1.0);
    }

    #[test]
    fn bad_time_grid() {
        let s = sys(3);
        let z = DVector::zeros(3);
        assert!(matches!(
            integrate(&s, &Forcing::zero(), &z, &z, 1.0, 0.3),
            Err(Error::TimeGrid(_))
        ));
        assert!(integrate(&s, &Forcing::zero(), &z, &z, 1.0, -0.1).is_err());
        assert!(integrate(&s, &Forcing::zero(), &z, &z, 0.0, 0.1).is_err());
    }

    #[test]
    fn dimension_checked() {
        let s = sys(3);
        let z = DVector::zeros(4);
        assert!(matches!(
            integrate(&s, &Forcing::zero(), &z, &z, 1.0, 0.1),
            Err(Error::Dimension { .. })
        ));
    }

    #[test]
    fn interpolation_of_initial_data() {
        let mesh = Mesh::uniform(3).unwrap();
        let (c, v) = project_initial_data(&mesh, |x| x, |_| 0.0);
        assert_eq!(c.as_slice(), &[0.0, 0.5, 1.0]);
        assert_eq!(v.as_slice(), &[0.0, 0.0, 0.0]);
    }

    // m = 1, M = 1, A = w^2, no damping: 1/2 v^2 + 1/2 w^2 c^2 conserved
    #[test]
    fn scalar_oscillator_conserves_energy() {
        let w2 = 7.0;
        let s = GalerkinSystem {
            mesh: Mesh::uniform(2).unwrap(),
            params: ProblemParams {
                h0: 0.0,
                h1: 0.0,
                lam0: 0.0,
                lam1: 0.0,
                ht0: 0.0,
                ht1: 0.0,
                lt0: 0.0,
                lt1: 0.0,
                k: 0.0,
                lam: 0.0,
            },
            mass: DMatrix::from_element(1, 1, 1.0),
            stiffness: DMatrix::from_element(1, 1, w2),
            a: DMatrix::from_element(1, 1, w2),
            d: DMatrix::zeros(1, 1),
            b: DMatrix::zeros(1, 1),
            trace0: DVector::from_element(1, 1.0),
            trace1: DVector::from_element(1, 1.0),
        };
        let stepper = MidpointStepper::new(&s, 0.01).unwrap();
        let (mut c, mut v) = (DVector::from_element(1, 1.0), DVector::from_element(1, 0.0));
        let e0 = 0.5 * w2;
        for k in 0..10_000 {
            let (cn, vn) = stepper
                .step(&Forcing::zero(), &c, &v, k as f64 * 0.01)
                .unwrap();
            c = cn;
            v = vn;
            let e = 0.5 * v[0] * v[0] + 0.5 * w2 * c[0] * c[0];
            assert!((e - e0).abs() <= 1e-12 * e0, "step {k}: {e} vs {e0}");
        }
    }

    #[test]
    fn accumulators_non_decreasing_and_additive() {
        let s = sys(9);
        let mesh = s.mesh.clone();
        let (c0, v0) = project_initial_data(&mesh, |x| (std::f64::consts::PI * x).cos(), |x| x);
        let traj = integrate(&s, &Forcing::zero(), &c0, &v0, 2.0, 0.01).unwrap();
        assert!(traj.acc0.windows(2).all(|w| w[1] >= w[0]));
        assert!(traj.acc1.windows(2).all(|w| w[1] >= w[0]));

        // restart from the midpoint sample and integrate the second half
        let mid = 100;
        let half = integrate(
            &s,
            &Forcing::zero(),
            &traj.coeffs[mid],
            &traj.velocities[mid],
            1.0,
            0.01,
        )
        .unwrap();
        let total = traj.acc0[mid] + half.acc0[100];
        assert_relative_eq!(total, traj.acc0[200], max_relative = 1e-12);
    }

    #[test]
    fn oracle_rejects_large_systems() {
        let s = sys(9);
        let z = DVector::zeros(9);
        assert!(matches!(
            oracle_integrate(&s, &Forcing::zero(), &z, &z, 1.0, 1e-5, 1e-3),
            Err(Error::OracleTooLarge(9))
        ));
    }

    #[test]
    fn oracle_step_must_be_small() {
        let s = sys(2);
        let z = DVector::zeros(2);
        assert!(oracle_integrate(&s, &Forcing::zero(), &z, &z, 1.0, 1e-4, 1e-3).is_err());
    }

    #[test]
    fn zero_data_stays_zero_for_both_integrators() {
        let s = sys(2);
        let z = DVector::zeros(2);
        let a = integrate(&s, &Forcing::zero(), &z, &z, 1.0, 0.01).unwrap();
        let b = oracle_integrate(&s, &Forcing::zero(), &z, &z, 1.0, 1e-4, 1e-2).unwrap();
        assert!(a.coeffs.iter().chain(&b.coeffs).all(|c| c.amax() == 0.0));
    }

    #[test]
    fn deterministic() {
        let s = sys(9);
        let (c0, v0) = project_initial_data(&s.mesh, |x| x * x, |x| 1.0 - x);
        let a = integrate(&s, &Forcing::zero(), &c0, &v0, 1.0, 0.01).unwrap();
        let b = integrate(&s, &Forcing::zero(), &c0, &v0, 1.0, 0.01).unwrap();
        assert_eq!(a.coeffs, b.coeffs);
        assert_eq!(a.acc1, b.acc1);
    }
}
