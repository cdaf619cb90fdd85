//! Randomized properties checked against the brute-force oracles.

use gaugekit::gauge::{circumradius, diameter, gamma, inradius, width};
use gaugekit::geometry::{convex_hull, minkowski_sum, support};
use gaugekit::verify::generate::random_pair;
use gaugekit::verify::oracle::{containment_bisect, gamma_bisect};
use gaugekit::verify::{oracle_circumradius, run_verify};
use gaugekit::{Vector, GaugeBody};
use proptest::prelude::*;

fn planar_points(n: std::ops::Range<usize>) -> impl Strategy<Value = Vec<Vector>> {
    prop::collection::vec((-3.0..3.0f64, -3.0..3.0f64), n)
        .prop_map(|v| v.into_iter().map(|(x, y)| Vector::from_vec(vec![x, y])).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn support_is_additive(p in planar_points(3..8), q in planar_points(3..8), th in 0.0..6.3f64) {
        let (Ok(p), Ok(q)) = (convex_hull(&p), convex_hull(&q)) else { return Ok(()) };
        let u = Vector::from_vec(vec![th.cos(), th.sin()]);
        let s = minkowski_sum(&p, &q).unwrap();
        let lhs = support(&s, &u).unwrap();
        let rhs = support(&p, &u).unwrap() + support(&q, &u).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1.0));
    }

    #[test]
    fn gauge_agrees_with_bisection(seed in 0u64..10_000, x in -4.0..4.0f64, y in -4.0..4.0f64) {
        let (_, c) = random_pair(2, seed).unwrap();
        let p = Vector::from_vec(vec![x, y]);
        let g = gamma(&c, &p).unwrap();
        prop_assert!((g - gamma_bisect(&c, &p)).abs() <= 1e-9 * g.max(1.0));
    }

    #[test]
    fn circumradius_is_minimax(seed in 0u64..10_000, x in -1.0..1.0f64, y in -1.0..1.0f64) {
        let (k, c) = random_pair(2, seed).unwrap();
        let r = circumradius(&k, &c).unwrap();
        let center = r.witness_center.clone().unwrap();
        prop_assert!((containment_bisect(&k, &c, &center) - r.value).abs() <= 1e-8 * r.value.max(1.0));
        prop_assert!(containment_bisect(&k, &c, &Vector::from_vec(vec![x, y])) >= r.value - 1e-9);
    }

    #[test]
    fn radii_are_ordered(seed in 0u64..10_000) {
        let (k, c) = random_pair(2, seed).unwrap();
        let (r, rr) = (inradius(&k, &c).unwrap().value, circumradius(&k, &c).unwrap().value);
        let (w, d) = (width(&k, &c).unwrap(), diameter(&k, &c).unwrap());
        prop_assert!(2.0 * r <= w + 1e-9);
        prop_assert!(w <= d + 1e-9);
        prop_assert!(d <= 2.0 * rr + 1e-9);
    }
}

#[test]
fn oracle_agrees_on_random_spatial_pairs() {
    for seed in 0..3 {
        let (k, c) = random_pair(3, 40 + seed).unwrap();
        let lp = circumradius(&k, &c).unwrap().value;
        assert!((lp - oracle_circumradius(&k, &c)).abs() < 1e-4, "seed {seed}");
    }
}

#[test]
fn verify_is_clean_on_planar_seeds() {
    for seed in 0..25 {
        let (k, c) = random_pair(2, seed).unwrap();
        let report = run_verify(&k, &c, seed);
        assert!(report.checks.len() >= 25);
        assert!(report.hard_failures().next().is_none(), "seed {seed}\n{}", report.to_table());
    }
}

#[test]
fn verify_is_clean_on_a_spatial_pair() {
    let (k, c) = random_pair(3, 1).unwrap();
    let report = run_verify(&k, &c, 1);
    assert!(report.hard_failures().next().is_none(), "{}", report.to_table());
}

#[test]
fn verify_handles_a_flat_set() {
    let c = GaugeBody::new(gaugekit::Polytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()).unwrap();
    let k = convex_hull(&[Vector::from_vec(vec![0.0, 0.0]), Vector::from_vec(vec![1.0, 0.5])]).unwrap();
    let report = run_verify(&k, &c, 3);
    assert!(report.hard_failures().next().is_none(), "{}", report.to_table());
}
