//! Vertex enumeration for bounded halfspace intersections (d <= 3).
//!
//! A Chebyshev-center LP classifies the intersection first. Bodies with a
//! clearly positive inradius are enumerated through polar duality: the
//! facets of the hull of the polar points are the vertices of the body.
//! Empty bodies are reported as such, and bodies whose inradius vanishes up
//! to tolerance (the typical circumcenter set) fall back to enumerating all
//! `d`-subsets of constraints with a tolerant feasibility test.

use nalgebra::{DMatrix, DVector};

use super::{convex_hull_tol, Halfspace, Polytope, Vector};
use crate::error::{GeomError, Result};
use crate::linprog::{self, LinearProgram, LpStatus};

const REL_TOL: f64 = 1e-9;

/// Intersection of the halfspaces `hs` in `R^dim`.
pub fn halfspace_intersection(hs: &[Halfspace], dim: usize) -> Result<Polytope> {
    halfspace_intersection_tol(hs, dim, None)
}

/// As [`halfspace_intersection`], with an explicit length scale for the
/// tolerances (defaults to the largest plane distance from the origin).
pub fn halfspace_intersection_tol(hs: &[Halfspace], dim: usize, scale: Option<f64>) -> Result<Polytope> {
    if dim == 0 || dim > 3 {
        return Err(GeomError::UnsupportedDimension(dim));
    }
    for h in hs {
        super::check_dim(dim, h.dim())?;
    }
    if hs.len() <= dim {
        return Err(GeomError::Unbounded);
    }
    let unit: Vec<Halfspace> = hs.iter().map(Halfspace::normalized).collect();
    let scale = scale
        .unwrap_or_else(|| unit.iter().map(|h| h.b.abs()).fold(0.0, f64::max))
        .max(1e-300);
    let eps = REL_TOL * scale;

    // Chebyshev center: max t s.t. a_i·x + t <= b_i, with t capped so the LP
    // stays bounded for unbounded bodies.
    let mut lp = LinearProgram::new({
        let mut c = vec![0.0; dim + 1];
        c[dim] = 1.0;
        c
    });
    for h in &unit {
        let mut a: Vec<f64> = h.a.iter().copied().collect();
        a.push(1.0);
        lp.push(a, h.b);
    }
    let cap = 1e6 * scale;
    lp.push(
        {
            let mut a = vec![0.0; dim + 1];
            a[dim] = 1.0;
            a
        },
        cap,
    );
    let sol = linprog::solve(&lp)?;
    if sol.status != LpStatus::Optimal {
        return Err(GeomError::Numerical("Chebyshev center LP failed".into()));
    }
    let x = sol.x.unwrap();
    let t = x[dim];
    if t >= cap * (1.0 - 1e-9) {
        return Err(GeomError::Unbounded);
    }
    let center = Vector::from_column_slice(&x[..dim]);
    if t < -eps {
        return Ok(Polytope::empty(dim));
    }
    if t <= eps {
        return enumerate_degenerate(&unit, dim, eps, scale);
    }
    enumerate_polar(&unit, dim, &center, scale)
}

fn enumerate_polar(unit: &[Halfspace], dim: usize, center: &Vector, scale: f64) -> Result<Polytope> {
    // Shifted body {z : a_i·z <= b_i - a_i·c}; polar points a_i / slack_i.
    let polar: Vec<Vector> = unit
        .iter()
        .map(|h| &h.a / (h.b - h.a.dot(center)))
        .collect();
    let ptol = REL_TOL * polar.iter().map(|p| p.amax()).fold(0.0, f64::max);
    let dual = convex_hull_tol(dim, &polar, ptol);
    if !dual.is_full_dimensional() {
        return Err(GeomError::Unbounded);
    }
    let mut verts = Vec::with_capacity(dual.facets.len());
    for f in &dual.facets {
        // Facet a·p <= b of the polar hull; origin strictly inside iff b > 0.
        if f.b <= ptol {
            return Err(GeomError::Unbounded);
        }
        verts.push(center + &f.a / f.b);
    }
    let vtol = REL_TOL * scale;
    Ok(convex_hull_tol(dim, &verts, vtol))
}

fn enumerate_degenerate(unit: &[Halfspace], dim: usize, eps: f64, scale: f64) -> Result<Polytope> {
    let m = unit.len();
    let mut pts: Vec<Vector> = Vec::new();
    let mut idx: Vec<usize> = (0..dim).collect();
    let feasible = |x: &Vector| unit.iter().all(|h| h.a.dot(x) <= h.b + 10.0 * eps);
    loop {
        let a = DMatrix::from_fn(dim, dim, |r, c| unit[idx[r]].a[c]);
        let b = DVector::from_fn(dim, |r, _| unit[idx[r]].b);
        let lu = a.clone().lu();
        let det = lu.determinant().abs();
        if det > 1e-10 {
            if let Some(x) = lu.solve(&b) {
                if feasible(&x) {
                    pts.push(x);
                }
            }
        }
        // Next combination in lexicographic order.
        let mut i = dim;
        loop {
            if i == 0 {
                let tol = 100.0 * eps.max(REL_TOL * scale);
                return Ok(if pts.is_empty() {
                    Polytope::empty(dim)
                } else {
                    convex_hull_tol(dim, &pts, tol)
                });
            }
            i -= 1;
            if idx[i] < m - dim + i {
                idx[i] += 1;
                for j in i + 1..dim {
                    idx[j] = idx[j - 1] + 1;
                }
                break;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn hs(a: &[f64], b: f64) -> Halfspace {
        Halfspace::new(vector(a), b).unwrap()
    }

    #[test]
    fn unit_square() {
        let p = halfspace_intersection(
            &[hs(&[1.0, 0.0], 1.0), hs(&[-1.0, 0.0], 0.0), hs(&[0.0, 1.0], 1.0), hs(&[0.0, -1.0], 0.0)],
            2,
        )
        .unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.vertices()[0], vector(&[0.0, 0.0]));
    }

    #[test]
    fn contradictory_slabs_are_empty() {
        let p = halfspace_intersection(&[hs(&[1.0], 0.0), hs(&[-1.0], -1.0)], 1).unwrap();
        assert!(p.is_empty());
    }

    #[test]
    fn open_wedge_is_unbounded() {
        let r = halfspace_intersection(&[hs(&[-1.0, 0.0], 0.0), hs(&[0.0, -1.0], 0.0), hs(&[1.0, -1.0], 1.0)], 2);
        assert_eq!(r.unwrap_err(), GeomError::Unbounded);
    }

    #[test]
    fn touching_boxes_give_a_segment() {
        // [0,1]x[-1,1] ∩ [1,2]x[-1,1]
        let p = halfspace_intersection(
            &[
                hs(&[1.0, 0.0], 1.0),
                hs(&[-1.0, 0.0], 0.0),
                hs(&[1.0, 0.0], 2.0),
                hs(&[-1.0, 0.0], -1.0),
                hs(&[0.0, 1.0], 1.0),
                hs(&[0.0, -1.0], 1.0),
            ],
            2,
        )
        .unwrap();
        assert_eq!(p.affine_dim().unwrap(), 1);
        assert_eq!(p.vertices().len(), 2);
    }

    #[test]
    fn cube_in_3d() {
        let mut h = Vec::new();
        for i in 0..3 {
            let mut a = [0.0; 3];
            a[i] = 1.0;
            h.push(hs(&a, 1.0));
            a[i] = -1.0;
            h.push(hs(&a, 1.0));
        }
        let p = halfspace_intersection(&h, 3).unwrap();
        assert_eq!(p.vertices().len(), 8);
        assert_eq!(p.hrep().unwrap().len(), 6);
        assert!((p.volume() - 8.0).abs() < 1e-9);
    }
}
