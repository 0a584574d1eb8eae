//! Seeded property suites for the inequalities behind the energy estimates.

use nalgebra::DVector;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::galerkin::{assemble, Mesh};
use crate::params::{
    coercivity_constant, continuity_constant, continuity_constant_sharp, mu_min,
    quadratic_form_lhs, ProblemParams,
};

pub const DEFAULT_SAMPLES: usize = 10_000;
pub const RELATIVE_TOL: f64 = 1e-12;
const MESH_SIZES: [usize; 7] = [2, 3, 5, 9, 17, 33, 65];

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub samples: usize,
    pub violations: usize,
    /// Largest `(lhs - bound) / max(|bound|, 1)` seen; negative when every
    /// sample holds with room to spare.
    pub worst_excess: f64,
}

impl SuiteResult {
    fn new(name: &'static str) -> Self {
        SuiteResult {
            name,
            samples: 0,
            violations: 0,
            worst_excess: f64::NEG_INFINITY,
        }
    }

    /// Records the claim `lhs <= bound`.
    fn observe(&mut self, lhs: f64, bound: f64) {
        let excess = (lhs - bound) / bound.abs().max(1.0);
        self.samples += 1;
        self.worst_excess = self.worst_excess.max(excess);
        if excess > RELATIVE_TOL {
            self.violations += 1;
        }
    }

    pub fn passed(&self) -> bool {
        self.violations == 0
    }
}

/// Constants satisfying the decay hypotheses.
pub fn admissible_params(rng: &mut impl Rng) -> ProblemParams {
    let lam0: f64 = rng.gen_range(0.01..5.0);
    let lam1 = rng.gen_range(0.01..5.0);
    let cap = 2.0 * (lam0 * lam1).sqrt();
    let s = rng.gen_range(-0.999..0.999) * cap;
    let split = rng.gen_range(0.0..1.0);
    ProblemParams {
        h0: rng.gen_range(0.01..5.0),
        h1: if rng.gen_bool(0.1) {
            0.0
        } else {
            rng.gen_range(0.0..5.0)
        },
        lam0,
        lam1,
        ht0: rng.gen_range(-1.0..1.0),
        ht1: rng.gen_range(-1.0..1.0),
        lt0: s * split,
        lt1: s * (1.0 - split),
        k: rng.gen_range(0.01..5.0),
        lam: rng.gen_range(0.01..5.0),
    }
}

fn random_vector(rng: &mut impl Rng, m: usize) -> DVector<f64> {
    if rng.gen_bool(0.1) {
        DVector::from_element(m, rng.gen_range(-10.0..10.0))
    } else {
        DVector::from_fn(m, |_, _| rng.gen_range(-10.0..10.0))
    }
}

/// `lam0 x^2 + lam1 y^2 + (lt0 + lt1) x y >= mu_min/2 (x^2 + y^2)`
pub fn quadratic_form_suite(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("quadratic_form");
    for _ in 0..samples {
        let p = admissible_params(&mut rng);
        let (x, y) = (rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
        out.observe(
            0.5 * mu_min(&p) * (x * x + y * y),
            quadratic_form_lhs(&p, x, y),
        );
    }
    out
}

/// `C0 ||v||_1^2 <= a(v, v) <= C ||v||_1^2` with `C` from `upper`.
fn norm_equivalence(
    name: &'static str,
    seed: u64,
    samples: usize,
    upper: fn(&ProblemParams) -> f64,
) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new(name);
    for _ in 0..samples {
        let p = admissible_params(&mut rng);
        let m = MESH_SIZES[rng.gen_range(0..MESH_SIZES.len())];
        let sys = assemble(&Mesh::uniform(m).expect("m >= 2"), &p);
        let c = random_vector(&mut rng, m);
        let n1 = sys.norm_1_sq(&c).expect("dimension");
        let na = sys.norm_a_sq(&c).expect("dimension");
        let lower_ok = coercivity_constant(&p) * n1 <= na + RELATIVE_TOL * na.abs().max(1.0);
        let before = out.violations;
        out.observe(na, upper(&p) * n1);
        if !lower_ok && out.violations == before {
            out.violations += 1;
        }
    }
    out
}

/// Norm equivalence with `max{1, h0, 2 h1}`.
pub fn norm_equivalence_suite(seed: u64, samples: usize) -> SuiteResult {
    norm_equivalence("norm_equivalence", seed, samples, continuity_constant)
}

/// Norm equivalence with `max{1, h0} + 2 h1`.
pub fn norm_equivalence_sharp_suite(seed: u64, samples: usize) -> SuiteResult {
    norm_equivalence(
        "norm_equivalence_sharp",
        seed,
        samples,
        continuity_constant_sharp,
    )
}

/// `max |v| <= sqrt(2) ||v||_1`
pub fn sup_embedding_suite(seed: u64, samples: usize) -> SuiteResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = SuiteResult::new("sup_embedding");
    for _ in 0..samples {
        let m = MESH_SIZES[rng.gen_range(0..MESH_SIZES.len())];
        let sys = assemble(
            &Mesh::uniform(m).expect("m >= 2"),
            &ProblemParams::reference(),
        );
        let c = random_vector(&mut rng, m);
        let sup = sys.sup_norm(&c).expect("dimension");
        out.observe(
            sup,
            2f64.sqrt() * sys.norm_1_sq(&c).expect("dimension").sqrt(),
        );
    }
    out
}

/// All suites, each with its own stream derived from `seed`.
pub fn run_all(seed: u64, samples: usize) -> Vec<SuiteResult> {
    vec![
        quadratic_form_suite(seed, samples),
        norm_equivalence_suite(seed.wrapping_add(1), samples),
        norm_equivalence_sharp_suite(seed.wrapping_add(1), samples),
        sup_embedding_suite(seed.wrapping_add(2), samples),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::validate_params;

    #[test]
    fn sampled_params_are_admissible() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..1000 {
            assert!(validate_params(&admissible_params(&mut rng), true).accepted());
        }
    }

    #[test]
    fn suites_are_deterministic() {
        assert_eq!(run_all(11, 200), run_all(11, 200));
    }

    #[test]
    fn valid_suites_hold() {
        assert!(quadratic_form_suite(5, 2000).passed());
        assert!(norm_equivalence_sharp_suite(5, 2000).passed());
        assert!(sup_embedding_suite(5, 2000).passed());
    }

    #[test]
    fn narrow_continuity_constant_is_violated() {
        let r = norm_equivalence_suite(5, 2000);
        assert!(r.violations > 0);
        assert!(r.worst_excess > 0.0);
    }
}
