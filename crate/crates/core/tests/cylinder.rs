//! The slanted cylinder `[(-1,0,-1), (1,0,1)] + 64-gon` and its projection.

use std::f64::consts::PI;

use gaugekit::gauge::circumradius;
use gaugekit::geometry::{convex_hull, orthogonal_project};
use gaugekit::{vector, GaugeBody, Polytope, Subspace};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn cylinder() -> Polytope {
    let mut pts = Vec::new();
    for i in 0..64 {
        let a = 2.0 * PI * i as f64 / 64.0;
        for s in [-1.0, 1.0] {
            pts.push(vector(&[a.cos() + s, a.sin(), s]));
        }
    }
    convex_hull(&pts).unwrap()
}

#[test]
fn volume_is_height_times_base() {
    let c = cylinder();
    let base = 32.0 * (PI / 32.0).sin();
    assert!((c.volume() - 2.0 * base).abs() < 1e-9);
    assert!((c.volume() / (2.0 * PI) - 1.0).abs() < 0.01);

    // Hit-or-miss estimate in the bounding box [-2,2]×[-1,1]×[-1,1].
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let n = 200_000;
    let hits = (0..n)
        .filter(|_| {
            let p = vector(&[rng.gen_range(-2.0..2.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)]);
            c.contains(&p, 0.0)
        })
        .count();
    let mc = 16.0 * hits as f64 / n as f64;
    assert!((mc / c.volume() - 1.0).abs() < 0.015, "monte carlo {mc} vs {}", c.volume());
}

#[test]
fn projection_is_a_stadium_of_circumradius_two() {
    let c = GaugeBody::new(cylinder()).unwrap();
    let floor = Subspace::new(3, &[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])]).unwrap();
    let k = orthogonal_project(c.body(), &floor).unwrap();
    assert_eq!(k.affine_dim().unwrap(), 2);
    assert!((circumradius(&k, &c).unwrap().value - 2.0).abs() < 1e-9);
}
