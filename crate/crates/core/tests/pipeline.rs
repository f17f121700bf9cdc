use std::f64::consts::PI;

use pzcl_core::persistence::{persistent_betti, persistent_cuplength};
use pzcl_core::{
    erosion_distance, fixtures, gh_lower_bound_report, persistent_zcl, Convention, Extended, FilteredComplex,
    FiniteMetricSpace, GhConfig, PersistentInvariantTable, Prime, VrOptions,
};

fn circle_table(n: usize, convention: Convention) -> PersistentInvariantTable {
    let x = FiniteMetricSpace::circle_geodesic(n, 2.0 * PI).unwrap();
    let opts = VrOptions { convention, ..VrOptions::new(3) };
    persistent_zcl(&FilteredComplex::build_vr_with(&x, opts).unwrap(), Prime::TWO, 2).unwrap()
}

#[test]
fn metric_to_report() {
    let hex = fixtures::hexagon();
    let x8 = FiniteMetricSpace::circle_geodesic(8, 2.0 * PI).unwrap();
    let report = gh_lower_bound_report(&hex, &x8, &GhConfig::default()).unwrap();
    assert!(report.d_e.is_finite());
    assert_eq!(report.combined, report.gh_lower_bound.max(report.diameter_bound));
    let hausdorff_like = PI / 6.0;
    assert!(report.gh_lower_bound <= hausdorff_like + 1e-9);
}

#[test]
fn json_round_trip_preserves_distance() {
    let a = circle_table(6, Convention::Open);
    let b = circle_table(8, Convention::Open);
    let a2 = PersistentInvariantTable::from_json(&a.to_json()).unwrap();
    let b2 = PersistentInvariantTable::from_json(&b.to_json()).unwrap();
    assert_eq!(a, a2);
    assert_eq!(erosion_distance(&a, &b).unwrap().d_e, erosion_distance(&a2, &b2).unwrap().d_e);
}

#[test]
fn refinement_does_not_change_distance() {
    let a = circle_table(6, Convention::Open);
    let b = circle_table(8, Convention::Open);
    let mut grid = a.grid.clone();
    grid.extend([0.3, 1.7, 2.5, 4.0]);
    grid.sort_by(f64::total_cmp);
    let fine = a.refine(&grid).unwrap();
    fine.check_monotone().unwrap();
    assert_eq!(erosion_distance(&a, &b).unwrap().d_e, erosion_distance(&fine, &b).unwrap().d_e);
}

#[test]
fn conventions_agree_off_the_grid() {
    let open = circle_table(6, Convention::Open);
    let closed = circle_table(6, Convention::Closed);
    for (s, t) in [(0.5, 1.5), (1.2, 2.0), (0.1, 3.5), (2.5, 2.9)] {
        assert_eq!(open.value(s, t), closed.value(s, t), "at ({s}, {t})");
    }
    assert!(erosion_distance(&open, &closed).is_err());
}

#[test]
fn circle_regime_values() {
    let t = circle_table(6, Convention::Open);
    assert_eq!(t.value(1.2, 2.0), Extended::Finite(1));
    assert_eq!(t.value(0.5, 0.9), Extended::ZERO);
    // octahedron regime: a 2-sphere
    assert_eq!(t.value(2.2, 3.0), Extended::Finite(1));
    let fc = FilteredComplex::build_vr(&fixtures::hexagon(), 3, f64::INFINITY).unwrap();
    assert_eq!(persistent_betti(&fc, Prime::TWO, 1).unwrap().value(1.2, 2.0), Extended::Finite(1));
    assert_eq!(persistent_betti(&fc, Prime::TWO, 2).unwrap().value(2.2, 3.0), Extended::Finite(1));
    assert_eq!(persistent_cuplength(&fc, Prime::TWO, 2).unwrap().value(1.2, 2.0), Extended::Finite(1));
}

#[test]
fn rp2_complex_filtration() {
    let fc = fixtures::ALL[4].filtration();
    let t = persistent_zcl(&fc, Prime::TWO, 2).unwrap();
    assert_eq!(t.get(0, 0), Extended::Finite(3));
    assert!(!t.lower_bound_only);
    let odd = persistent_zcl(&fc, Prime::THREE, 2).unwrap();
    assert_eq!(odd.get(0, 0), Extended::ZERO);
}
