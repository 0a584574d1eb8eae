//! Refinement studies against manufactured solutions.

use twopoint_wave::manufactured::ManufacturedForm;
use twopoint_wave::scenario::{convergence_study, ForcingKind, InitialData, Scenario};

fn base(form: ManufacturedForm, n_nodes: usize, dt: f64) -> Scenario {
    Scenario {
        n_nodes,
        horizon: 1.0,
        dt,
        manufactured: Some(form),
        initial: InitialData::Manufactured,
        forcing: ForcingKind::Manufactured,
        ..Scenario::default()
    }
}

#[test]
fn affine_solution_converges_at_second_order_in_time() {
    // affine in x lies in the trial space, leaving only the time error
    let rows = convergence_study(
        &base(ManufacturedForm::DecayingAffine { alpha: 1.0 }, 3, 0.05),
        4,
    )
    .unwrap();
    for r in &rows[1..] {
        let p = r.l2_order.unwrap();
        assert!((p - 2.0).abs() < 0.1, "{rows:?}");
    }
}

#[test]
fn cosine_solution_converges_at_expected_orders() {
    let rows = convergence_study(
        &base(ManufacturedForm::DecayingCosine { alpha: 0.5 }, 5, 0.04),
        4,
    )
    .unwrap();
    let last = rows.last().unwrap();
    assert!(last.l2_order.unwrap() >= 1.8, "{rows:?}");
    assert!(last.h1_order.unwrap() >= 0.9, "{rows:?}");
    assert!(rows.windows(2).all(|w| w[1].l2_error < w[0].l2_error));
}

#[test]
fn polynomial_solution_errors_shrink() {
    let rows = convergence_study(&base(ManufacturedForm::Polynomial, 5, 0.04), 3).unwrap();
    assert!(rows
        .windows(2)
        .all(|w| w[1].l2_error < w[0].l2_error && w[1].h1_error < w[0].h1_error));
}
