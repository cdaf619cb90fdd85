use super::quickhull::hull3;
use super::{lex_cmp, AffineFlat, Halfspace, Polytope, Vector};
use crate::error::{GeomError, Result};

/// Relative tolerance for hull predicates.
const HULL_REL_TOL: f64 = 1e-10;

pub(crate) fn default_tol(points: &[Vector]) -> f64 {
    let Some(first) = points.first() else {
        return 0.0;
    };
    let d = first.len();
    let mut extent = 0.0f64;
    for i in 0..d {
        let (lo, hi) = points
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), p| (lo.min(p[i]), hi.max(p[i])));
        extent = extent.max(hi - lo);
    }
    HULL_REL_TOL * extent
}

/// Convex hull of a finite point set in dimension 1 to 3.
///
/// The result keeps the input coordinates of the extreme points. Lower
/// dimensional inputs produce lower dimensional polytopes carrying their
/// affine hull.
pub fn convex_hull(points: &[Vector]) -> Result<Polytope> {
    let first = points.first().ok_or(GeomError::EmptyInput)?;
    let d = first.len();
    if d == 0 || d > 3 {
        return Err(GeomError::UnsupportedDimension(d));
    }
    for p in points {
        super::check_dim(d, p.len())?;
        if !p.iter().all(|v| v.is_finite()) {
            return Err(GeomError::InvalidInput("non-finite coordinate".into()));
        }
    }
    Ok(convex_hull_tol(d, points, default_tol(points)))
}

/// Hull with an explicit absolute tolerance for merging, coplanarity and
/// collinearity decisions.
pub fn convex_hull_tol(dim: usize, points: &[Vector], tol: f64) -> Polytope {
    if points.is_empty() {
        return Polytope::empty(dim);
    }
    let pts = dedupe(points, tol);
    let frame = affine_frame(&pts, tol);
    let k = frame.dim();
    if k == 0 {
        return Polytope::point(pts[0].clone());
    }
    let full = k == dim;
    let local: Vec<Vector> = if full {
        pts.clone()
    } else {
        pts.iter().map(|p| frame.to_local(p)).collect()
    };
    let (idx, facets) = match k {
        1 => hull1(&local),
        2 => hull2(&local, tol),
        _ => hull3(&local, tol),
    };
    let mut vertices: Vec<Vector> = idx.iter().map(|&i| pts[i].clone()).collect();
    if !(dim == 2 && full) {
        vertices.sort_by(lex_cmp);
    }
    let frame = if full { AffineFlat::full(dim) } else { frame };
    Polytope {
        dim,
        vertices,
        frame: Some(frame),
        facets,
    }
}

/// Removes points within `tol` (max-norm) of an earlier kept point.
fn dedupe(points: &[Vector], tol: f64) -> Vec<Vector> {
    let mut sorted: Vec<Vector> = points.to_vec();
    sorted.sort_by(lex_cmp);
    let mut kept: Vec<Vector> = Vec::with_capacity(sorted.len());
    for p in sorted {
        let dup = kept
            .iter()
            .rev()
            .take_while(|q| p[0] - q[0] <= tol)
            .any(|q| (&p - q).amax() <= tol);
        if !dup {
            kept.push(p);
        }
    }
    kept
}

/// Greedy affine frame: repeatedly adds the direction of the point farthest
/// from the current span, while that distance exceeds `tol`.
fn affine_frame(pts: &[Vector], tol: f64) -> AffineFlat {
    let origin = pts[0].clone();
    let d = origin.len();
    let mut basis: Vec<Vector> = Vec::new();
    while basis.len() < d {
        let mut best: Option<(f64, Vector)> = None;
        for p in pts {
            let mut r = p - &origin;
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&r);
                    r.axpy(-c, b, 1.0);
                }
            }
            let n = r.norm();
            if best.as_ref().is_none_or(|(bn, _)| n > *bn) {
                best = Some((n, r));
            }
        }
        match best {
            Some((n, r)) if n > tol => basis.push(r / n),
            _ => break,
        }
    }
    AffineFlat {
        point: origin,
        basis,
    }
}

fn hull1(pts: &[Vector]) -> (Vec<usize>, Vec<Halfspace>) {
    let (mut lo, mut hi) = (0, 0);
    for (i, p) in pts.iter().enumerate() {
        if p[0] < pts[lo][0] {
            lo = i;
        }
        if p[0] > pts[hi][0] {
            hi = i;
        }
    }
    let facets = vec![
        Halfspace {
            a: Vector::from_element(1, -1.0),
            b: -pts[lo][0],
        },
        Halfspace {
            a: Vector::from_element(1, 1.0),
            b: pts[hi][0],
        },
    ];
    (vec![lo, hi], facets)
}

fn cross2(o: &Vector, a: &Vector, b: &Vector) -> f64 {
    (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])
}

/// Andrew's monotone chain; returns counterclockwise vertex indices starting
/// at the lexicographic minimum.
fn hull2(pts: &[Vector], tol: f64) -> (Vec<usize>, Vec<Halfspace>) {
    let mut order: Vec<usize> = (0..pts.len()).collect();
    order.sort_by(|&i, &j| lex_cmp(&pts[i], &pts[j]));
    // A point is dropped when it lies within `tol` of the chord it would sit on.
    let turn_ok = |h: &[usize], p: usize| {
        let a = h[h.len() - 2];
        let b = h[h.len() - 1];
        let len = (&pts[p] - &pts[a]).norm();
        cross2(&pts[a], &pts[b], &pts[p]) > tol * len
    };
    let mut lower: Vec<usize> = Vec::new();
    for &i in &order {
        while lower.len() >= 2 && !turn_ok(&lower, i) {
            lower.pop();
        }
        lower.push(i);
    }
    let mut upper: Vec<usize> = Vec::new();
    for &i in order.iter().rev() {
        while upper.len() >= 2 && !turn_ok(&upper, i) {
            upper.pop();
        }
        upper.push(i);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    let n = lower.len();
    let facets = (0..n)
        .map(|k| {
            let p = &pts[lower[k]];
            let q = &pts[lower[(k + 1) % n]];
            let e = q - p;
            let a = Vector::from_vec(vec![e[1], -e[0]]);
            let a = &a / a.norm();
            let b = a.dot(p).max(a.dot(q));
            Halfspace { a, b }
        })
        .collect();
    (lower, facets)
}
