//! Ball intersections and ball hulls with respect to a gauge body.
//!
//! `bi(K, C, λ) = ∩_{x ∈ K} (x - λC)` only depends on the vertices of `K`:
//! `K ⊂ y + λC` holds iff every vertex does. With `C = {a_i·x <= 1}` this is
//! the finite system `-a_i·y <= λ - max_k a_i·v_k`.

use crate::error::{GeomError, Result};
use crate::gauge::{circumradius, GaugeBody};
use crate::geometry::{check_dim, convex_hull, halfspace_intersection_tol, Halfspace, Polytope, Vector};
use crate::verify::report::Check;

fn problem_scale(k: &Polytope, c: &GaugeBody, lambda: f64) -> f64 {
    let ck = k.vertices().iter().map(|v| v.amax()).fold(0.0, f64::max);
    (k.euclidean_diameter() + lambda * c.body().euclidean_diameter()).max(1e-12 * (1.0 + ck))
}

/// `bi(K, C, λ) = {y : K ⊂ y + λC}`; empty when `λ < R(K, C)`.
pub fn ball_intersect(k: &Polytope, c: &GaugeBody, lambda: f64) -> Result<Polytope> {
    check_dim(c.dim(), k.dim())?;
    if !(lambda >= 0.0) || !lambda.is_finite() {
        return Err(GeomError::InvalidInput(format!("lambda must be a finite nonnegative number, got {lambda}")));
    }
    if k.is_empty() {
        return Err(GeomError::Unbounded);
    }
    let hs: Vec<Halfspace> = c
        .normals()
        .iter()
        .map(|a| {
            let top = k.vertices().iter().map(|v| a.dot(v)).fold(f64::NEG_INFINITY, f64::max);
            Halfspace { a: -a, b: lambda - top }
        })
        .collect();
    halfspace_intersection_tol(&hs, k.dim(), Some(problem_scale(k, c, lambda)))
}

/// `bh(K, C, λ) = bi(bi(K, C, λ), -C, λ)`, the intersection of all
/// translates `x + λC` containing `K`. Requires `λ >= R(K, C)`; values
/// within `1e-9` relative below `R` are treated as `R`.
pub fn ball_hull(k: &Polytope, c: &GaugeBody, lambda: f64) -> Result<Polytope> {
    let r = circumradius(k, c)?.value;
    if lambda < r - 1e-9 * r.max(1.0) {
        return Err(GeomError::RadiusTooSmall { lambda, circumradius: r });
    }
    let lambda = lambda.max(r);
    let inner = ball_intersect(k, c, lambda)?;
    if inner.is_empty() {
        return Err(GeomError::RadiusTooSmall { lambda, circumradius: r });
    }
    ball_intersect(&inner, &c.reflect(), lambda)
}

/// Largest violation of `A ⊂ B` measured at the vertices of `A`.
pub(crate) fn inclusion_violation(a: &Polytope, b: &Polytope) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return f64::INFINITY;
    }
    a.vertices().iter().map(|v| b.distance_to(v)).fold(0.0, f64::max)
}

/// Largest violation of `A ⊂ x + λC` over the vertices of `A`, in gauge units.
fn translate_violation(a: &Polytope, c: &GaugeBody, x: &Vector, lambda: f64) -> f64 {
    a.vertices().iter().map(|v| c.gamma(&(v - x)) - lambda).fold(0.0, f64::max)
}

/// Evaluates the ball-hull/ball-intersection algebra at `(K, C, λ)`.
///
/// Inclusions are tested on vertices with tolerance `tol` scaled by the size
/// of the configuration. Fails with `RadiusTooSmall` below `R(K, C)`.
pub fn verify_ball_algebra(k: &Polytope, c: &GaugeBody, lambda: f64) -> Result<Vec<Check>> {
    let r = circumradius(k, c)?.value;
    if lambda < r - 1e-9 * r.max(1.0) {
        return Err(GeomError::RadiusTooSmall { lambda, circumradius: r });
    }
    let lambda = lambda.max(r);
    let tol = 1e-7 * problem_scale(k, c, lambda).max(1.0);
    let neg = c.reflect();
    let mut out = Vec::new();
    let incl = |name: &str, a: &Polytope, b: &Polytope| Check::at_most(name, inclusion_violation(a, b), 0.0, tol);

    let bi = ball_intersect(k, c, lambda)?;
    let bh = ball_hull(k, c, lambda)?;

    // (a) shrinking K: drop one vertex when that leaves a nonempty body.
    let sub = if k.vertices().len() >= 2 {
        convex_hull(&k.vertices()[1..])?
    } else {
        k.clone()
    };
    out.push(incl("ball.a.bi_antimonotone", &bi, &ball_intersect(&sub, c, lambda)?));
    out.push(incl("ball.a.bh_monotone", &ball_hull(&sub, c, lambda)?, &bh));

    // (b) growing λ.
    let big = lambda * 1.5 + 0.1 * r.max(1e-3);
    out.push(incl("ball.b.bi_grows", &bi, &ball_intersect(k, c, big)?));
    out.push(incl("ball.b.bh_shrinks", &ball_hull(k, c, big)?, &bh));

    // (c) bh is the intersection of the covering translates, and bi is
    // recovered from bh.
    let covering = bi
        .vertices()
        .iter()
        .map(|x| translate_violation(&bh, c, x, lambda))
        .fold(inclusion_violation(k, &bh), f64::max);
    out.push(Check::at_most("ball.c.bh_between_k_and_translates", covering, 0.0, tol));
    let bi_again = ball_intersect(&bh, c, lambda)?;
    let dev = inclusion_violation(&bi_again, &bi).max(inclusion_violation(&bi, &bi_again));
    out.push(Check::at_most("ball.c.bi_of_bh", dev, 0.0, tol));

    // (d) at λ = sup γ_C(x - y) over K: bh(K, C, λ) ⊂ bi(K, -C, λ).
    let mut lam_d = 0.0f64;
    for a in k.vertices() {
        for b in k.vertices() {
            lam_d = lam_d.max(c.gamma(&(a - b)));
        }
    }
    if lam_d > 0.0 {
        let lhs = ball_hull(k, c, lam_d)?;
        let rhs = ball_intersect(k, &neg, lam_d)?;
        out.push(incl("ball.d.bh_in_reflected_bi", &lhs, &rhs).note(format!("lambda = {lam_d:.9}")));
    } else {
        out.push(Check::at_most("ball.d.bh_in_reflected_bi", 0.0, 0.0, tol).note("K is a point"));
    }

    // Idempotence and the reflected composition.
    let bh2 = ball_hull(&bh, c, lambda)?;
    let dev = inclusion_violation(&bh2, &bh).max(inclusion_violation(&bh, &bh2));
    out.push(Check::at_most("ball.bh_idempotent", dev, 0.0, tol));
    let comp = ball_hull(&bi, &neg, lambda)?;
    let dev = inclusion_violation(&comp, &bi).max(inclusion_violation(&bi, &comp));
    out.push(Check::at_most("ball.bi_is_reflected_bh_of_bi", dev, 0.0, tol));
    Ok(out)
}
