use proptest::prelude::*;

use xxzge::closed_form::{eg_closed, overlaps_closed};
use xxzge::geometric::{max_overlap, SweepOptions};
use xxzge::scan::{
    apply_decay, default_gamma_grid, detect_crossing, detect_jump, gamma_scan, ground_for,
    rescale, DecayModel, ScanRow, ScanTable, DEFAULT_JUMP_THRESHOLD,
};
use xxzge::spin_model::{named_product, overlap, NamedProduct};

#[test]
fn default_scan_matches_closed_forms() {
    let table = gamma_scan(&default_gamma_grid().points, 4, &SweepOptions::default()).unwrap();
    for r in table.rows() {
        let sq = overlaps_closed(r.gamma).unwrap().squares();
        assert!((r.lambda1_sq - sq[0]).abs() < 1e-9);
        assert!((r.lambda2_sq - sq[1]).abs() < 1e-9);
        assert!((r.lambda3_sq - sq[2]).abs() < 1e-9);
        let field = if r.gamma < -1.0 { 4e-3 } else { 0.0 };
        assert!((r.e_g - eg_closed(r.gamma)).abs() <= field + 1e-10);
        // the closest product state is one of the candidates on this ring
        assert!((r.lambda_max_sq - r.candidate_max()).abs() < 1e-9, "gamma {}", r.gamma);
    }
    let jump = detect_jump(&table, DEFAULT_JUMP_THRESHOLD).unwrap();
    assert!((jump + 1.0).abs() < 1e-12);
}

#[test]
fn scans_are_deterministic() {
    let grid = [-1.5, -0.5, 0.25, 1.0, 2.5];
    let opts = SweepOptions::default().with_seed(99);
    let a = gamma_scan(&grid, 4, &opts).unwrap();
    let b = gamma_scan(&grid, 4, &opts).unwrap();
    assert_eq!(a, b);
}

#[test]
fn candidates_persist_on_six_sites() {
    let opts = SweepOptions::default();
    for (gamma, kind) in [(0.5, NamedProduct::PlusMinus), (2.0, NamedProduct::Neel)] {
        let state = ground_for(6, gamma).unwrap().state;
        let solver = max_overlap(&state, &opts).unwrap().lambda_max;
        let candidate = overlap(&named_product(kind, 6).unwrap(), &state).unwrap().norm();
        assert!((solver - candidate).abs() < 1e-6, "gamma {gamma}: {solver} vs {candidate}");
    }
}

#[test]
fn crossing_invariant_under_fit_degree() {
    let grid: Vec<f64> = (0..=20).map(|k| 0.5 + 0.05 * k as f64).collect();
    let table = gamma_scan(&grid, 4, &SweepOptions::default()).unwrap();
    let l2 = table.curve(0.5, 1.5, |r| r.lambda2_sq);
    let l3 = table.curve(0.5, 1.5, |r| r.lambda3_sq);
    for degree in [3, 4, 5] {
        let c = detect_crossing(&l2, &l3, degree).unwrap();
        assert!((c.gamma - 1.0).abs() <= 0.005);
    }
}

fn row_strategy() -> impl Strategy<Value = Vec<ScanRow>> {
    prop::collection::vec((0.0f64..1.0, 0.0f64..1.0, 0.0f64..1.0), 1..30).prop_map(|v| {
        v.into_iter()
            .enumerate()
            .map(|(i, (a, b, c))| ScanRow {
                gamma: i as f64 * 0.1,
                e_g: -4.0,
                lambda1_sq: a,
                lambda2_sq: b,
                lambda3_sq: c,
                lambda_max_sq: a.max(b).max(c),
                e_log2: 1.0,
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn decay_then_rescale_is_identity(
        rows in row_strategy(),
        a2 in 0.05f64..=1.0,
        a3 in 0.05f64..=1.0,
    ) {
        let table = ScanTable::new(rows).unwrap();
        let m = DecayModel::new(a2, a3).unwrap();
        let back = rescale(&apply_decay(&table, &m), &m);
        for (x, y) in back.rows().iter().zip(table.rows()) {
            prop_assert!((x.lambda2_sq - y.lambda2_sq).abs() <= 1e-14);
            prop_assert!((x.lambda3_sq - y.lambda3_sq).abs() <= 1e-14);
            prop_assert_eq!(x.lambda1_sq, y.lambda1_sq);
            prop_assert_eq!(x.e_log2, y.e_log2);
        }
    }
}
