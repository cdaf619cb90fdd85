//! Derivative-free maximizers used by the subspace and offset searches.
//! Everything here maximizes; callers negate to minimize.

use std::f64::consts::PI;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`. Returns the best
/// point seen (including the bracket ends) and its value.
pub(crate) fn golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, tol: f64) -> (f64, f64) {
    let (mut a, mut b) = (lo, hi);
    let mut best = (lo, f(lo));
    let fb = f(hi);
    if fb > best.1 {
        best = (hi, fb);
    }
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    for _ in 0..200 {
        if b - a <= tol {
            break;
        }
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    for (x, v) in [(x1, f1), (x2, f2)] {
        if v > best.1 {
            best = (x, v);
        }
    }
    best
}

/// Grid over `[lo, hi]` with `n` points followed by golden-section
/// refinement around the best grid cell.
pub(crate) fn grid_golden_max(mut f: impl FnMut(f64) -> f64, lo: f64, hi: f64, n: usize, rel_tol: f64) -> (f64, f64) {
    if hi - lo <= 0.0 {
        return (lo, f(lo));
    }
    let n = n.max(3);
    let h = (hi - lo) / (n - 1) as f64;
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..n {
        let x = lo + h * i as f64;
        let v = f(x);
        if v > best.1 {
            best = (x, v);
        }
    }
    let a = (best.0 - h).max(lo);
    let b = (best.0 + h).min(hi);
    let refined = golden_max(&mut f, a, b, rel_tol * (hi - lo));
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

/// Nelder-Mead on a 2D box, started from the best point of an `n x n`
/// grid. Points outside the box are clamped.
pub(crate) fn grid_nelder_mead_max(
    mut f: impl FnMut([f64; 2]) -> f64,
    lo: [f64; 2],
    hi: [f64; 2],
    n: usize,
    rel_tol: f64,
) -> ([f64; 2], f64) {
    let n = n.max(3);
    let h = [(hi[0] - lo[0]) / (n - 1) as f64, (hi[1] - lo[1]) / (n - 1) as f64];
    let mut best = (lo, f64::NEG_INFINITY);
    for i in 0..n {
        for k in 0..n {
            let p = [lo[0] + h[0] * i as f64, lo[1] + h[1] * k as f64];
            let v = f(p);
            if v > best.1 {
                best = (p, v);
            }
        }
    }
    let scale = (hi[0] - lo[0]).max(hi[1] - lo[1]);
    let clamp = |p: [f64; 2]| [p[0].clamp(lo[0], hi[0]), p[1].clamp(lo[1], hi[1])];
    let mut g = |p: [f64; 2]| f(clamp(p));
    let refined = nelder_mead_max(&mut g, best.0, h, rel_tol * scale);
    let refined = (clamp(refined.0), refined.1);
    if refined.1 > best.1 {
        refined
    } else {
        best
    }
}

fn nelder_mead_max(f: &mut impl FnMut([f64; 2]) -> f64, start: [f64; 2], step: [f64; 2], tol: f64) -> ([f64; 2], f64) {
    let mut s: Vec<([f64; 2], f64)> = [start, [start[0] + step[0], start[1]], [start[0], start[1] + step[1]]]
        .into_iter()
        .map(|p| (p, f(p)))
        .collect();
    let lerp = |a: [f64; 2], b: [f64; 2], t: f64| [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])];
    for _ in 0..400 {
        s.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
        let size = s
            .iter()
            .skip(1)
            .map(|p| (p.0[0] - s[0].0[0]).abs().max((p.0[1] - s[0].0[1]).abs()))
            .fold(0.0, f64::max);
        if size <= tol {
            break;
        }
        let centroid = lerp(s[0].0, s[1].0, 0.5);
        let worst = s[2];
        let xr = lerp(worst.0, centroid, 2.0);
        let fr = f(xr);
        if fr > s[0].1 {
            let xe = lerp(worst.0, centroid, 3.0);
            let fe = f(xe);
            s[2] = if fe > fr { (xe, fe) } else { (xr, fr) };
        } else if fr > s[1].1 {
            s[2] = (xr, fr);
        } else {
            let xc = lerp(worst.0, centroid, 0.5);
            let fc = f(xc);
            if fc > worst.1 {
                s[2] = (xc, fc);
            } else {
                let b = s[0].0;
                for p in s.iter_mut().skip(1) {
                    p.0 = lerp(b, p.0, 0.5);
                    p.1 = f(p.0);
                }
            }
        }
    }
    s.into_iter()
        .fold(([0.0; 2], f64::NEG_INFINITY), |a, b| if b.1 > a.1 { b } else { a })
}

/// Angles `iπ/n`, a half-turn of line directions in the plane.
pub(crate) fn half_turn(n: usize) -> Vec<f64> {
    (0..n).map(|i| PI * i as f64 / n as f64).collect()
}

/// `n` nearly uniform unit vectors on the upper hemisphere (Fibonacci
/// lattice); antipodal directions describe the same subspace.
pub(crate) fn fibonacci_hemisphere(n: usize) -> Vec<[f64; 3]> {
    let golden_angle = PI * (3.0 - 5f64.sqrt());
    (0..n)
        .map(|i| {
            let z = (i as f64 + 0.5) / n as f64;
            let r = (1.0 - z * z).sqrt();
            let phi = golden_angle * i as f64;
            [r * phi.cos(), r * phi.sin(), z]
        })
        .collect()
}

pub(crate) fn normalize3(p: [f64; 3]) -> [f64; 3] {
    let n = (p[0] * p[0] + p[1] * p[1] + p[2] * p[2]).sqrt();
    [p[0] / n, p[1] / n, p[2] / n]
}

/// Two unit vectors completing `n` to an orthonormal frame.
pub(crate) fn tangent_frame(n: [f64; 3]) -> ([f64; 3], [f64; 3]) {
    let helper = if n[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] };
    let d = helper[0] * n[0] + helper[1] * n[1] + helper[2] * n[2];
    let u = normalize3([helper[0] - d * n[0], helper[1] - d * n[1], helper[2] - d * n[2]]);
    let w = [
        n[1] * u[2] - n[2] * u[1],
        n[2] * u[0] - n[0] * u[2],
        n[0] * u[1] - n[1] * u[0],
    ];
    (u, w)
}

/// Compass search on the unit sphere: tries steps of size `step` along the
/// tangent frame, halving on failure until `step < tol`.
pub(crate) fn sphere_pattern_max(
    f: &mut impl FnMut([f64; 3]) -> f64,
    start: [f64; 3],
    start_val: f64,
    step: f64,
    tol: f64,
) -> ([f64; 3], f64, f64) {
    let (mut n, mut v, mut s) = (start, start_val, step);
    let mut evals = 0;
    while s >= tol && evals < 2000 {
        let (u, w) = tangent_frame(n);
        let mut moved = false;
        for dir in [u, w] {
            for sign in [1.0, -1.0] {
                let cand = normalize3([
                    n[0] + sign * s * dir[0],
                    n[1] + sign * s * dir[1],
                    n[2] + sign * s * dir[2],
                ]);
                let fc = f(cand);
                evals += 1;
                if fc > v {
                    n = cand;
                    v = fc;
                    moved = true;
                    break;
                }
            }
            if moved {
                break;
            }
        }
        if !moved {
            s *= 0.5;
        }
    }
    (n, v, s)
}

/// Nelder-Mead in the gnomonic chart `(a, b) -> normalize(n0 + a u + b w)`
/// around `start`, then compass polishing. The simplex adapts to ridges,
/// where a compass search alone tends to stall.
pub(crate) fn sphere_refine_max(
    f: &mut impl FnMut([f64; 3]) -> f64,
    start: [f64; 3],
    start_val: f64,
    step: f64,
    tol: f64,
) -> ([f64; 3], f64, f64) {
    let (u, w) = tangent_frame(start);
    let chart = |p: [f64; 2]| {
        normalize3([
            start[0] + p[0] * u[0] + p[1] * w[0],
            start[1] + p[0] * u[1] + p[1] * w[1],
            start[2] + p[0] * u[2] + p[1] * w[2],
        ])
    };
    let mut g = |p: [f64; 2]| f(chart(p));
    let (p, v) = nelder_mead_max(&mut g, [0.0, 0.0], [step, step], tol.max(1e-5));
    let (n, v) = if v > start_val { (chart(p), v) } else { (start, start_val) };
    sphere_pattern_max(f, n, v, step.min(1e-3), tol)
}

/// Indices of the `k` best grid points that are at least as good as their
/// `m` nearest neighbours (antipodes identified).
pub(crate) fn top_local_maxima_sphere(points: &[[f64; 3]], vals: &[f64], k: usize, m: usize) -> Vec<usize> {
    let n = points.len();
    let dist = |p: [f64; 3], q: [f64; 3]| {
        let dot = (p[0] * q[0] + p[1] * q[1] + p[2] * q[2]).abs();
        1.0 - dot
    };
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let mut near: Vec<(f64, usize)> = (0..n).filter(|&j| j != i).map(|j| (dist(points[i], points[j]), j)).collect();
            near.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(std::cmp::Ordering::Equal));
            near.iter().take(m).all(|&(_, j)| vals[i] >= vals[j])
        })
        .collect();
    if idx.is_empty() {
        idx = (0..n).collect();
    }
    idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
    idx.truncate(k);
    idx
}

/// Indices of the `k` best local maxima of a cyclic sequence.
pub(crate) fn top_local_maxima_cyclic(vals: &[f64], k: usize) -> Vec<usize> {
    let n = vals.len();
    let mut idx: Vec<usize> = (0..n)
        .filter(|&i| {
            let prev = vals[(i + n - 1) % n];
            let next = vals[(i + 1) % n];
            vals[i] >= prev && vals[i] >= next
        })
        .collect();
    if idx.is_empty() {
        idx = (0..n).collect();
    }
    idx.sort_by(|&a, &b| vals[b].partial_cmp(&vals[a]).unwrap_or(std::cmp::Ordering::Equal));
    idx.truncate(k);
    idx
}
