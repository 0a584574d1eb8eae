//! Acceptance criteria. Prints one PASS/FAIL line per criterion and exits
//! nonzero when any fails.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use twopoint_wave::galerkin::{assemble, Mesh};
use twopoint_wave::integrate::{integrate, project_initial_data};
use twopoint_wave::params::{derive_constants, FreeChoice};
use twopoint_wave::props::{self, SuiteResult};
use twopoint_wave::scenario::{convergence_study, run, Check, ForcingKind, Scenario};

const SEED: u64 = 20_240_917;

fn scenario(name: &str) -> Scenario {
    let path: PathBuf = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("scenarios")
        .join(name);
    Scenario::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

struct Report {
    failed: usize,
}

impl Report {
    fn line(&mut self, id: &str, passed: bool, detail: String) {
        if !passed {
            self.failed += 1;
        }
        println!("{id:<6} {}  {detail}", if passed { "PASS" } else { "FAIL" });
    }
}

fn suite_detail(r: &SuiteResult, secs: f64) -> String {
    format!(
        "{}: {} / {} violations, worst relative excess {:.3e}, suite time {secs:.2} s",
        r.name, r.violations, r.samples, r.worst_excess
    )
}

fn main() -> ExitCode {
    let mut rep = Report { failed: 0 };

    // 1. property suites, total under 10 s
    let start = Instant::now();
    let suites = props::run_all(SEED, props::DEFAULT_SAMPLES);
    let secs = start.elapsed().as_secs_f64();
    let by_name = |n: &str| suites.iter().find(|s| s.name == n).unwrap();
    for (id, name) in [
        ("AC1a", "quadratic_form"),
        ("AC1b", "norm_equivalence"),
        ("AC1c", "sup_embedding"),
    ] {
        let s = by_name(name);
        rep.line(id, s.passed() && secs < 10.0, suite_detail(s, secs));
    }
    let sharp = by_name("norm_equivalence_sharp");
    println!(
        "{:<6} {}  (not a criterion) upper constant max{{1, h0}} + 2 h1: {} / {} violations",
        "AC1b*",
        if sharp.passed() { "PASS" } else { "FAIL" },
        sharp.violations,
        sharp.samples
    );

    // 2. midpoint against the fourth-order oracle
    let start = Instant::now();
    let s = scenario("oracle.cfg");
    let outcome = run(&s).expect("oracle scenario");
    let secs = start.elapsed().as_secs_f64();
    let err = outcome.oracle_error.expect("oracle check requested");
    rep.line(
        "AC2",
        err <= 1e-6 && secs < 5.0,
        format!(
            "m = {}, relative max nodal error {err:.3e} (<= 1e-6), {secs:.2} s",
            s.n_nodes
        ),
    );

    // 3. zero data stays zero
    let start = Instant::now();
    let r = scenario("reference.cfg");
    let mesh = Mesh::uniform(r.n_nodes).unwrap();
    let sys = assemble(&mesh, &r.params);
    let (c0, v0) = project_initial_data(&mesh, |_| 0.0, |_| 0.0);
    let traj = integrate(
        &sys,
        &twopoint_wave::galerkin::Forcing::zero(),
        &c0,
        &v0,
        10.0,
        r.dt,
    )
    .unwrap();
    let worst = traj
        .coeffs
        .iter()
        .zip(&traj.velocities)
        .map(|(c, v)| c.norm() + v.norm())
        .fold(0.0, f64::max);
    let secs = start.elapsed().as_secs_f64();
    rep.line(
        "AC3",
        worst <= 1e-12 && secs < 5.0,
        format!(
            "max |c| + |v| = {worst:.3e} over {} samples, {secs:.2} s",
            traj.len()
        ),
    );

    // 4-6. reference scenario
    let start = Instant::now();
    let reference = run(&r).expect("reference scenario");
    let secs_ref = start.elapsed().as_secs_f64();
    let dc = derive_constants(&r.params, FreeChoice::default()).unwrap();
    let sw = reference.sandwich.unwrap();
    rep.line(
        "AC4",
        sw.violations == 0 && reference.records.len() >= 10_000,
        format!(
            "{} violations over {} samples, Gamma/E in [{:.4}, {:.4}] within [{:.4}, {:.4}]",
            sw.violations,
            reference.records.len(),
            sw.min_ratio,
            sw.max_ratio,
            dc.beta1,
            dc.beta2
        ),
    );
    let d = reference.differential.unwrap();
    rep.line(
        "AC5",
        dc.htilde_budget >= 0.0 && d.violations == 0,
        format!(
            "budget {:.4e}, {} violations, worst excess {:.3e} against tolerance {:.3e}",
            dc.htilde_budget, d.violations, d.worst_excess, d.tolerance
        ),
    );
    let fit = reference.fit.unwrap();
    let need = 0.95 * dc.delta;
    rep.line(
        "AC6a",
        fit.rate >= need && fit.residual <= 1e-3 && secs_ref < 30.0,
        format!(
            "homogeneous: rate {:.4} (>= {need:.4}), log residual {:.3e} (<= 1e-3), {secs_ref:.2} s",
            fit.rate, fit.residual
        ),
    );
    let start = Instant::now();
    let forced = Scenario {
        forcing: ForcingKind::ExpDecay {
            a: 0.5,
            b: -0.5,
            c: 1.0,
            rate: 1.0,
        },
        checks: vec![Check::DecayFit],
        ..r.clone()
    };
    let fo = run(&forced).expect("forced scenario");
    let secs = start.elapsed().as_secs_f64();
    let ff = fo.fit.unwrap();
    let sigma_ratio = fo.records.last().unwrap().sigma / fo.records[0].sigma;
    rep.line(
        "AC6b",
        ff.rate > 0.0 && secs < 30.0,
        format!(
            "forced, sigma(T)/sigma(0) = {sigma_ratio:.3e} (e^-2T = {:.3e}): rate {:.4} (> 0), {secs:.2} s",
            (-2.0 * forced.horizon).exp(),
            ff.rate
        ),
    );

    // 7. refinement study
    let start = Instant::now();
    let cs = scenario("convergence.cfg");
    let rows = convergence_study(&cs, 4).expect("convergence study");
    let secs = start.elapsed().as_secs_f64();
    let last = rows.last().unwrap();
    let (pl2, ph1) = (
        last.l2_order.unwrap_or(f64::NAN),
        last.h1_order.unwrap_or(f64::NAN),
    );
    rep.line(
        "AC7",
        pl2 >= 1.8 && ph1 >= 0.9 && secs < 120.0,
        format!(
            "{} levels to n_nodes = {}: L2 order {pl2:.4} (>= 1.8), H1 order {ph1:.4} (>= 0.9), {secs:.2} s",
            rows.len(),
            last.n_nodes
        ),
    );

    // 8. regularity ladder and its negative control
    let ls = scenario("manufactured.cfg");
    let lo = run(&ls).expect("ladder scenario");
    let lr = lo.ladder.unwrap();
    let neg = run(&Scenario {
        ladder_velocity_offset: 1.0,
        ..ls.clone()
    })
    .expect("negative control");
    let nr = neg.ladder.unwrap();
    rep.line(
        "AC8",
        ls.n_nodes == 257 && ls.dt == 1e-3 && lr.relative <= 1e-2 && nr.relative >= 0.1,
        format!(
            "r = 1: discrepancy {:.3e} (<= 1e-2); perturbed data: {:.3e} (>= 0.1)",
            lr.relative, nr.relative
        ),
    );

    // 9. undamped energy conservation
    let us = scenario("undamped.cfg");
    let uo = run(&us).expect("undamped scenario");
    let steps = uo.records.len() - 1;
    rep.line(
        "AC9",
        uo.energy_drift <= 1e-10 && steps >= 10_000,
        format!(
            "relative energy drift {:.3e} over {steps} steps (<= 1e-10)",
            uo.energy_drift
        ),
    );

    println!("{} criteria failed", rep.failed);
    if rep.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
