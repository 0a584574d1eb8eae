//! The assembled matrices against direct evaluation of the weak form.

use std::sync::Arc;

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use twopoint_wave::galerkin::{assemble, Forcing, Mesh, GAUSS3_POINTS, GAUSS3_WEIGHTS};
use twopoint_wave::params::ProblemParams;

fn hat(nodes: &[f64], j: usize, x: f64) -> f64 {
    let h = nodes[1] - nodes[0];
    (1.0 - (x - nodes[j]).abs() / h).max(0.0)
}

fn hat_dx(nodes: &[f64], j: usize, x: f64) -> f64 {
    let h = nodes[1] - nodes[0];
    let d = x - nodes[j];
    if d.abs() >= h {
        0.0
    } else if d < 0.0 {
        1.0 / h
    } else {
        -1.0 / h
    }
}

fn field(nodes: &[f64], c: &DVector<f64>, x: f64) -> f64 {
    (0..nodes.len()).map(|i| c[i] * hat(nodes, i, x)).sum()
}

fn field_dx(nodes: &[f64], c: &DVector<f64>, x: f64) -> f64 {
    (0..nodes.len()).map(|i| c[i] * hat_dx(nodes, i, x)).sum()
}

/// `int_0^1 g`, three Gauss points per element.
fn integral(nodes: &[f64], g: impl Fn(f64) -> f64) -> f64 {
    let mut s = 0.0;
    for e in nodes.windows(2) {
        let (mid, half) = (0.5 * (e[0] + e[1]), 0.5 * (e[1] - e[0]));
        for (z, w) in GAUSS3_POINTS.iter().zip(GAUSS3_WEIGHTS) {
            s += w * half * g(mid + half * z);
        }
    }
    s
}

fn random_params(rng: &mut ChaCha8Rng) -> ProblemParams {
    let mut p = ProblemParams::reference();
    for name in ProblemParams::NAMES {
        p.set(name, rng.gen_range(-2.0..2.0));
    }
    p
}

#[test]
fn matrix_form_matches_term_by_term_weak_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for trial in 0..50 {
        let n = [2, 3, 5, 8, 17][trial % 5];
        let mesh = Mesh::uniform(n).unwrap();
        let nodes = mesh.nodes().to_vec();
        let p = random_params(&mut rng);
        let sys = assemble(&mesh, &p);
        let rand_vec = |rng: &mut ChaCha8Rng| DVector::from_fn(n, |_, _| rng.gen_range(-3.0..3.0));
        let (c, v, a) = (rand_vec(&mut rng), rand_vec(&mut rng), rand_vec(&mut rng));
        let t = rng.gen_range(0.0..2.0);
        let (fa, fb, ga, gb) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        // quadratic in x so the quadrature is exact
        let forcing = Forcing::new(
            Arc::new(move |x, t| (1.0 + t) * (fa * x * x + fb * x)),
            Arc::new(move |t| ga * (1.0 + t * t)),
            Arc::new(move |t| gb * t.cos()),
        );

        let matrix = &sys.mass * &a + sys.damping() * &v + sys.displacement() * &c
            - sys.load_vector(&forcing, t);

        let u = |x| field(&nodes, &c, x);
        let (u0, u1) = (c[0], c[n - 1]);
        let (du0, du1) = (v[0], v[n - 1]);
        let flux0 = p.h0 * u0 + p.lam0 * du0 + p.ht1 * u1 + p.lt1 * du1 + (forcing.g0)(t);
        let flux1 = p.h1 * u1 + p.lam1 * du1 + p.ht0 * u0 + p.lt0 * du0 + (forcing.g1)(t);
        for j in 0..n {
            let w = |x| hat(&nodes, j, x);
            let direct = integral(&nodes, |x| field(&nodes, &a, x) * w(x))
                + integral(&nodes, |x| field_dx(&nodes, &c, x) * hat_dx(&nodes, j, x))
                + p.k * integral(&nodes, |x| u(x) * w(x))
                + p.lam * integral(&nodes, |x| field(&nodes, &v, x) * w(x))
                + w(0.0) * flux0
                + w(1.0) * flux1
                - integral(&nodes, |x| (forcing.f)(x, t) * w(x));
            let scale = 1.0 + direct.abs();
            assert!(
                (matrix[j] - direct).abs() <= 1e-11 * scale,
                "trial {trial}, row {j}: matrix {} vs direct {direct}",
                matrix[j]
            );
        }
    }
}
