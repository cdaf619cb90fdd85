//! Brute-force oracles that avoid the LP and candidate-direction code paths.
//!
//! They only use vertex lists, halfspace membership and `γ_C`, so agreement
//! with the fast path is meaningful evidence.

use std::f64::consts::PI;

use crate::gauge::GaugeBody;
use crate::geometry::{Polytope, Vector};

/// `γ_C(x)` by bisection on `λ` using membership `x ∈ λC`.
pub fn gamma_bisect(c: &GaugeBody, x: &Vector) -> f64 {
    let inside = |lam: f64| c.body().contains(&(x / lam), 1e-13);
    if x.norm() == 0.0 {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while !inside(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if inside(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

/// `inf{λ : K ⊂ x + λC}` by bisection on the containment test.
pub fn containment_bisect(k: &Polytope, c: &GaugeBody, x: &Vector) -> f64 {
    let fits = |lam: f64| k.vertices().iter().all(|v| c.body().contains(&((v - x) / lam), 1e-13));
    if k.vertices().iter().all(|v| (v - x).norm() == 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    while !fits(hi) {
        lo = hi;
        hi *= 2.0;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    hi
}

/// Lattice points per axis before golden-section refinement.
const LATTICE: usize = 65;

/// Minimizes a convex `f` on `[lo, hi]`: lattice scan, then golden section
/// on the two cells around the best lattice point.
fn convex_min_1d(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64) -> (f64, f64) {
    let h = (hi - lo) / (LATTICE - 1) as f64;
    let mut best = (lo, f(lo));
    for i in 1..LATTICE {
        let t = lo + h * i as f64;
        let v = f(t);
        if v < best.1 {
            best = (t, v);
        }
    }
    let (mut a, mut b) = ((best.0 - h).max(lo), (best.0 + h).min(hi));
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let (mut x1, mut x2) = (b - r * (b - a), a + r * (b - a));
    let (mut f1, mut f2) = (f(x1), f(x2));
    while b - a > 1e-13 * (1.0 + a.abs().max(b.abs())) {
        if f1 <= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    for (t, v) in [(x1, f1), (x2, f2)] {
        if v < best.1 {
            best = (t, v);
        }
    }
    best
}

/// Minimizes a convex `f` over the box by nested one-dimensional searches.
/// Partial minimization keeps convexity, so every level is a convex
/// one-dimensional problem.
fn convex_min_box(f: &dyn Fn(&Vector) -> f64, lo: &Vector, hi: &Vector, x: &mut Vector, axis: usize) -> f64 {
    let d = lo.len();
    if axis == d {
        return f(x);
    }
    let mut inner = |t: f64| {
        x[axis] = t;
        convex_min_box(f, lo, hi, x, axis + 1)
    };
    let (t, v) = convex_min_1d(&mut inner, lo[axis], hi[axis]);
    x[axis] = t;
    // Restore the inner coordinates belonging to the optimum.
    convex_min_box(f, lo, hi, x, axis + 1);
    v
}

/// Circumradius without linear programming.
///
/// `g(x) = max_k γ_C(v_k - x)` is convex; it is minimized over a box holding
/// every feasible center by nested 65-point lattice scans with golden-section
/// refinement. A λ-bisection on containment of `K` in `x + λC` at the final
/// center removes the last rounding in `γ`. Supports `d <= 3`.
pub fn oracle_circumradius(k: &Polytope, c: &GaugeBody) -> f64 {
    let d = k.dim();
    assert!((1..=3).contains(&d), "oracle_circumradius supports d <= 3");
    if k.vertices().len() <= 1 {
        return 0.0;
    }
    let g = |x: &Vector| k.vertices().iter().map(|v| c.gamma(&(v - x))).fold(0.0, f64::max);

    // Any optimal center x satisfies v - x ∈ R·C for every vertex, so x lies
    // in the box of K - R·C with R bounded by g at the vertex centroid.
    let centroid = k.vertex_centroid().expect("nonempty");
    let bound = g(&centroid);
    let mut lo = Vector::zeros(d);
    let mut hi = Vector::zeros(d);
    for i in 0..d {
        let kmin = k.vertices().iter().map(|v| v[i]).fold(f64::INFINITY, f64::min);
        let kmax = k.vertices().iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max);
        let cmin = c.body().vertices().iter().map(|v| v[i]).fold(f64::INFINITY, f64::min);
        let cmax = c.body().vertices().iter().map(|v| v[i]).fold(f64::NEG_INFINITY, f64::max);
        lo[i] = kmin - bound * cmax;
        hi[i] = kmax - bound * cmin;
    }
    let mut x = centroid;
    let v = convex_min_box(&g, &lo, &hi, &mut x, 0);
    containment_bisect(k, c, &x).min(v)
}

/// `sup_u h_{K-K}(u) / h_{C-C}(u)` (`max = true`) or the infimum, over
/// `n` equally spaced directions of the half circle followed by golden-section
/// polishing around the best few samples. Planar bodies only.
pub fn dense_support_ratio_2d(k: &Polytope, c: &GaugeBody, n: usize, max: bool) -> f64 {
    assert_eq!(k.dim(), 2, "dense scan is planar");
    let width = |p: &[Vector], u: &Vector| {
        let (lo, hi) = p
            .iter()
            .map(|v| v.dot(u))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| (a.min(t), b.max(t)));
        hi - lo
    };
    let sign = if max { 1.0 } else { -1.0 };
    let f = |th: f64| {
        let u = Vector::from_vec(vec![th.cos(), th.sin()]);
        sign * width(k.vertices(), &u) / width(c.body().vertices(), &u)
    };
    let step = PI / n as f64;
    let samples: Vec<f64> = (0..n).map(|i| f(i as f64 * step)).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]));
    let mut best = samples[order[0]];
    for &i in order.iter().take(8) {
        let (mut a, mut b) = ((i as f64 - 1.0) * step, (i as f64 + 1.0) * step);
        let r = 0.5 * (5f64.sqrt() - 1.0);
        let (mut x1, mut x2) = (b - r * (b - a), a + r * (b - a));
        let (mut f1, mut f2) = (f(x1), f(x2));
        for _ in 0..80 {
            if f1 >= f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - r * (b - a);
                f1 = f(x1);
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + r * (b - a);
                f2 = f(x2);
            }
        }
        best = best.max(f1).max(f2);
    }
    sign * best
}

/// Three-dimensional counterpart of [`dense_support_ratio_2d`]: `n` spiral
/// points on the upper hemisphere, then compass search on the sphere around
/// the best few.
pub fn dense_support_ratio_3d(k: &Polytope, c: &GaugeBody, n: usize, max: bool) -> f64 {
    assert_eq!(k.dim(), 3, "dense scan is spatial");
    let width = |p: &[Vector], u: &Vector| {
        let (lo, hi) = p
            .iter()
            .map(|v| v.dot(u))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), t| (a.min(t), b.max(t)));
        hi - lo
    };
    let sign = if max { 1.0 } else { -1.0 };
    let f = |u: &Vector| sign * width(k.vertices(), u) / width(c.body().vertices(), u);
    let golden = PI * (3.0 - 5f64.sqrt());
    let dirs: Vec<Vector> = (0..n)
        .map(|i| {
            let z = (i as f64 + 0.5) / n as f64;
            let rho = (1.0 - z * z).sqrt();
            let phi = golden * i as f64;
            Vector::from_vec(vec![rho * phi.cos(), rho * phi.sin(), z])
        })
        .collect();
    let samples: Vec<f64> = dirs.iter().map(f).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| samples[b].total_cmp(&samples[a]));
    let mut best = samples[order[0]];
    for &i in order.iter().take(16) {
        let mut u = dirs[i].clone();
        let mut val = samples[i];
        let mut step = (4.0 * PI / n as f64).sqrt();
        let mut turn = 0.0f64;
        while step > 1e-11 {
            // Eight compass directions in a frame that rotates every pass, so
            // ridges of the ratio are not aligned with the probes for long.
            let a = if u[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
            let a = Vector::from_column_slice(&a);
            let e1 = (&a - &u * a.dot(&u)).normalize();
            let e2 = u.cross(&e1);
            let mut moved = false;
            for m in 0..8 {
                let phi = turn + m as f64 * PI / 4.0;
                let cand = (&u + (&e1 * phi.cos() + &e2 * phi.sin()) * step).normalize();
                let v = f(&cand);
                if v > val {
                    u = cand;
                    val = v;
                    moved = true;
                }
            }
            turn += 0.37;
            if !moved {
                step *= 0.5;
            }
        }
        best = best.max(val);
    }
    sign * best
}

/// `D(K, C)` by a dense direction scan.
pub fn dense_diameter_2d(k: &Polytope, c: &GaugeBody, n: usize) -> f64 {
    2.0 * dense_support_ratio_2d(k, c, n, true)
}

/// `ω(K, C)` by a dense direction scan.
pub fn dense_width_2d(k: &Polytope, c: &GaugeBody, n: usize) -> f64 {
    2.0 * dense_support_ratio_2d(k, c, n, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, vector};

    fn unit_box(d: usize) -> GaugeBody {
        GaugeBody::new(Polytope::cuboid(&vec![-1.0; d], &vec![1.0; d]).unwrap()).unwrap()
    }

    #[test]
    fn bisected_gamma_of_box() {
        let c = unit_box(2);
        assert!((gamma_bisect(&c, &vector(&[0.5, -2.0])) - 2.0).abs() < 1e-12);
        assert_eq!(gamma_bisect(&c, &vector(&[0.0, 0.0])), 0.0);
    }

    #[test]
    fn box_in_box() {
        let k = Polytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        assert!((oracle_circumradius(&k, &unit_box(2)) - 0.5).abs() < 1e-4);
        let k3 = Polytope::cuboid(&[0.0; 3], &[1.0, 0.5, 0.25]).unwrap();
        assert!((oracle_circumradius(&k3, &unit_box(3)) - 0.5).abs() < 1e-4);
    }

    #[test]
    fn triangle_in_triangle() {
        // K = -C/2 needs the full factor 1 for a simplex gauge.
        let c = GaugeBody::new(convex_hull(&[vector(&[-1.0, -1.0]), vector(&[2.0, -1.0]), vector(&[-1.0, 2.0])]).unwrap())
            .unwrap();
        let k = c.body().scale(-0.5);
        assert!((oracle_circumradius(&k, &c) - 1.0).abs() < 1e-4);
    }

    #[test]
    fn scan_of_square_against_disk_like_gauge() {
        let k = Polytope::cuboid(&[0.0, 0.0], &[2.0, 1.0]).unwrap();
        let c = unit_box(2);
        assert!((dense_diameter_2d(&k, &c, 1000) - 2.0).abs() < 1e-9);
        assert!((dense_width_2d(&k, &c, 1000) - 1.0).abs() < 1e-9);
    }
}
