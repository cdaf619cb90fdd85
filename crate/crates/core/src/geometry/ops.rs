use super::hull::default_tol;
use super::{check_dim, convex_hull, convex_hull_tol, halfspace_intersection_tol, AffineFlat, Halfspace, Polytope, Subspace, Vector};
use crate::error::{GeomError, Result};

/// `P + Q`, the hull of pairwise vertex sums.
pub fn minkowski_sum(p: &Polytope, q: &Polytope) -> Result<Polytope> {
    check_dim(p.dim(), q.dim())?;
    if p.is_empty() || q.is_empty() {
        return Ok(Polytope::empty(p.dim()));
    }
    let mut pts = Vec::with_capacity(p.vertices().len() * q.vertices().len());
    for a in p.vertices() {
        for b in q.vertices() {
            pts.push(a + b);
        }
    }
    convex_hull(&pts)
}

/// Support function `h_P(u) = max_{v in P} <u, v>`.
pub fn support(p: &Polytope, u: &Vector) -> Result<f64> {
    check_dim(p.dim(), u.len())?;
    if p.is_empty() {
        return Err(GeomError::EmptySet);
    }
    Ok(p.vertices()
        .iter()
        .map(|v| v.dot(u))
        .fold(f64::NEG_INFINITY, f64::max))
}

/// Ambient-coordinate inequalities describing `P` (lower-dimensional bodies
/// contribute their affine equalities as pairs of inequalities).
pub(crate) fn ambient_constraints(p: &Polytope) -> Vec<Halfspace> {
    let Some(frame) = p.affine_hull() else {
        return Vec::new();
    };
    if p.is_full_dimensional() {
        return p.facets.clone();
    }
    let mut out = Vec::new();
    for f in &p.facets {
        let mut a = Vector::zeros(p.dim());
        for (b, &c) in frame.basis.iter().zip(f.a.iter()) {
            a.axpy(c, b, 1.0);
        }
        let b = f.b + a.dot(&frame.point);
        out.push(Halfspace { a, b });
    }
    let sub = super::Subspace {
        dim_ambient: p.dim(),
        basis: frame.basis.clone(),
    };
    for n in sub.complement().basis {
        let c = n.dot(&frame.point);
        out.push(Halfspace { a: n.clone(), b: c });
        out.push(Halfspace { a: -n, b: -c });
    }
    out
}

/// `P ∩ F` in ambient coordinates; empty when disjoint.
pub fn section(p: &Polytope, flat: &AffineFlat) -> Result<Polytope> {
    let d = p.dim();
    check_dim(d, flat.ambient_dim())?;
    if d > 3 {
        return Err(GeomError::UnsupportedDimension(d));
    }
    if p.is_empty() {
        return Ok(Polytope::empty(d));
    }
    let k = flat.dim();
    let extent = p.euclidean_diameter().max(1e-300);
    let eps = 1e-9 * extent;
    if k == 0 {
        return Ok(if p.contains(&flat.point, eps) {
            Polytope::point(flat.point.clone())
        } else {
            Polytope::empty(d)
        });
    }
    let cons = ambient_constraints(p);
    // Constraints in flat coordinates: (Bᵀa)·t <= b - a·x0.
    let mut local: Vec<Halfspace> = Vec::with_capacity(cons.len());
    for h in &cons {
        let a = Vector::from_iterator(k, flat.basis.iter().map(|b| b.dot(&h.a)));
        let b = h.b - h.a.dot(&flat.point);
        if a.norm() <= 1e-12 * h.a.norm() {
            if b < -eps {
                return Ok(Polytope::empty(d));
            }
            continue;
        }
        local.push(Halfspace { a, b });
    }
    let local_pts: Vec<Vector> = if k == 1 {
        let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
        for h in &local {
            let bound = h.b / h.a[0];
            if h.a[0] > 0.0 {
                hi = hi.min(bound);
            } else {
                lo = lo.max(bound);
            }
        }
        if !(lo.is_finite() && hi.is_finite()) {
            return Err(GeomError::Unbounded);
        }
        if lo > hi + eps {
            return Ok(Polytope::empty(d));
        }
        if hi < lo {
            let mid = 0.5 * (lo + hi);
            (lo, hi) = (mid, mid);
        }
        vec![Vector::from_element(1, lo), Vector::from_element(1, hi)]
    } else {
        let q = halfspace_intersection_tol(&local, k, Some(extent))?;
        q.vertices().to_vec()
    };
    if local_pts.is_empty() {
        return Ok(Polytope::empty(d));
    }
    let pts: Vec<Vector> = local_pts.iter().map(|t| flat.to_ambient(t)).collect();
    Ok(convex_hull_tol(d, &pts, 1e-10 * extent))
}

/// Orthogonal projection of `P` onto the linear subspace `L`, in ambient
/// coordinates.
pub fn orthogonal_project(p: &Polytope, l: &Subspace) -> Result<Polytope> {
    check_dim(p.dim(), l.dim_ambient)?;
    if p.is_empty() {
        return Ok(Polytope::empty(p.dim()));
    }
    let pts: Vec<Vector> = p.vertices().iter().map(|v| l.project(v)).collect();
    let tol = default_tol(p.vertices());
    Ok(convex_hull_tol(p.dim(), &pts, tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn square() -> Polytope {
        Polytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn box_sum() {
        let a = square();
        let b = Polytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        let s = minkowski_sum(&a, &b).unwrap();
        let want = Polytope::cuboid(&[-1.0, -1.0], &[2.0, 2.0]).unwrap();
        assert_eq!(s.vertices(), want.vertices());
    }

    #[test]
    fn triangle_difference_body() {
        let k = convex_hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap();
        let dk = minkowski_sum(&k, &k.reflect()).unwrap();
        let want = convex_hull(&[
            vector(&[1.0, 0.0]),
            vector(&[-1.0, 0.0]),
            vector(&[0.0, 1.0]),
            vector(&[0.0, -1.0]),
            vector(&[1.0, -1.0]),
            vector(&[-1.0, 1.0]),
        ])
        .unwrap();
        assert_eq!(dk.vertices().len(), 6);
        assert!(dk.approx_eq(&want, 1e-12));
    }

    #[test]
    fn box_support() {
        let b = Polytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap();
        assert_eq!(support(&b, &vector(&[1.0, 0.0])).unwrap(), 1.0);
        let dk = minkowski_sum(&square(), &square().reflect()).unwrap();
        assert_eq!(support(&dk, &vector(&[1.0, 1.0])).unwrap(), 2.0);
        assert_eq!(support(&Polytope::empty(2), &vector(&[1.0, 0.0])), Err(GeomError::EmptySet));
    }

    #[test]
    fn square_sections() {
        let flat = AffineFlat::new(vector(&[0.5, 0.0]), &[vector(&[0.0, 1.0])]).unwrap();
        let s = section(&square(), &flat).unwrap();
        assert_eq!(s.vertices(), &[vector(&[0.5, 0.0]), vector(&[0.5, 1.0])]);
        let flat = AffineFlat::new(vector(&[2.0, 0.0]), &[vector(&[0.0, 1.0])]).unwrap();
        assert!(section(&square(), &flat).unwrap().is_empty());
    }

    #[test]
    fn cube_projection() {
        let c = Polytope::cuboid(&[0.0; 3], &[1.0; 3]).unwrap();
        let l = Subspace::new(3, &[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])]).unwrap();
        let p = orthogonal_project(&c, &l).unwrap();
        assert_eq!(p.vertices().len(), 4);
        assert_eq!(p.affine_dim().unwrap(), 2);
        assert!((p.vertices().iter().map(|v| v[2].abs()).fold(0.0, f64::max)) < 1e-15);
    }

    #[test]
    fn plane_section_of_cube() {
        let c = Polytope::cuboid(&[0.0; 3], &[1.0; 3]).unwrap();
        let flat = AffineFlat::new(vector(&[0.0, 0.0, 0.5]), &[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])]).unwrap();
        let s = section(&c, &flat).unwrap();
        assert_eq!(s.vertices().len(), 4);
        assert_eq!(s.affine_dim().unwrap(), 2);
    }
}
