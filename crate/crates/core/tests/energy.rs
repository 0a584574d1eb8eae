//! Energy behavior of homogeneous runs.

use twopoint_wave::diagnostics::record_trajectory;
use twopoint_wave::galerkin::{assemble, Forcing, Mesh};
use twopoint_wave::integrate::{integrate, project_initial_data};
use twopoint_wave::params::{derive_constants, FreeChoice, ProblemParams};

fn records(
    p: ProblemParams,
    n: usize,
    horizon: f64,
    dt: f64,
) -> Vec<twopoint_wave::diagnostics::EnergyRecord> {
    let dc = derive_constants(&p, FreeChoice::default()).unwrap();
    let mesh = Mesh::uniform(n).unwrap();
    let sys = assemble(&mesh, &p);
    let forcing = Forcing::zero();
    let (c0, v0) = project_initial_data(&mesh, |x| (std::f64::consts::PI * x).cos(), |x| x - 0.5);
    let traj = integrate(&sys, &forcing, &c0, &v0, horizon, dt).unwrap();
    record_trajectory(&traj, &sys, dc.delta, &forcing).unwrap()
}

#[test]
fn lyapunov_functional_does_not_increase() {
    let recs = records(ProblemParams::reference(), 33, 4.0, 1e-3);
    let g0 = recs[0].gamma;
    for w in recs.windows(2) {
        assert!(
            w[1].gamma <= w[0].gamma + 1e-8 * g0,
            "t = {}: {} -> {}",
            w[1].t,
            w[0].gamma,
            w[1].gamma
        );
    }
}

#[test]
fn energy_does_not_increase_without_coupling() {
    let p = ProblemParams {
        ht0: 0.0,
        ht1: 0.0,
        ..ProblemParams::reference()
    };
    let recs = records(p, 33, 4.0, 1e-3);
    let e0 = recs[0].energy;
    for w in recs.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12 * e0, "t = {}", w[1].t);
    }
}

#[test]
fn energy_decays_on_reference_constants() {
    let recs = records(ProblemParams::reference(), 33, 4.0, 1e-3);
    let e0 = recs[0].energy;
    for w in recs.windows(2) {
        assert!(w[1].energy <= w[0].energy + 1e-12 * e0, "t = {}", w[1].t);
    }
    assert!(recs.last().unwrap().energy < 1e-3 * e0);
}

#[test]
fn energy_stays_nonnegative_and_x_accumulates() {
    let recs = records(ProblemParams::reference(), 17, 2.0, 1e-3);
    assert!(recs
        .iter()
        .all(|r| r.energy >= 0.0 && r.x >= 0.0 && r.sigma == 0.0));
}
