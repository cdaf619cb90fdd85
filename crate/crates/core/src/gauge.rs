//! Gauge evaluation and the scalar size measures `R`, `r`, `D`, `ω`, plus
//! circumcenter and incenter sets.
//!
//! Scalar measures are computed on a normalized copy of the pair: `K` is
//! moved to its vertex centroid and scaled to unit radius, and so is `C`.
//! Every measure here is translation invariant in both arguments and
//! scales like `α/β` under `(αK, βC)`, so results map back exactly and
//! the LPs always see unit-size data.

use serde::Serialize;

use crate::ball;
use crate::error::{GeomError, Result};
use crate::geometry::{check_dim, convex_hull, minkowski_sum, AffineFlat, Polytope, Subspace, Vector};
use crate::linprog::{self, LinearProgram, LpStatus};

/// A full-dimensional polytope `C` with the origin in its interior, stored
/// with facet normals scaled so that `C = {x : a_i·x <= 1}`.
#[derive(Debug, Clone)]
pub struct GaugeBody {
    body: Polytope,
    normals: Vec<Vector>,
}

impl GaugeBody {
    pub fn new(body: Polytope) -> Result<Self> {
        let facets = body
            .hrep()
            .ok_or_else(|| GeomError::InvalidGauge("gauge body must be full-dimensional".into()))?;
        let diam = body.euclidean_diameter();
        let mut normals = Vec::with_capacity(facets.len());
        for h in facets {
            if h.b <= 1e-12 * diam {
                return Err(GeomError::InvalidGauge("origin is not an interior point".into()));
            }
            normals.push(&h.a / h.b);
        }
        Ok(Self { body, normals })
    }

    /// Translates `p` so its vertex centroid sits at the origin; returns the
    /// gauge and the centroid that was subtracted.
    pub fn centered(p: &Polytope) -> Result<(Self, Vector)> {
        if !p.is_full_dimensional() {
            return Err(GeomError::DegenerateBody);
        }
        let c = p.vertex_centroid().expect("nonempty");
        Ok((Self::new(p.translate(&-&c))?, c))
    }

    pub fn dim(&self) -> usize {
        self.body.dim()
    }

    pub fn body(&self) -> &Polytope {
        &self.body
    }

    /// Normals `a_i` with `C = {x : a_i·x <= 1}`.
    pub fn normals(&self) -> &[Vector] {
        &self.normals
    }

    /// Minkowski functional `γ_C(x) = inf{λ > 0 : x ∈ λC}`.
    pub fn gamma(&self, x: &Vector) -> f64 {
        self.normals.iter().map(|a| a.dot(x)).fold(0.0, f64::max)
    }

    /// The reflected gauge `-C`.
    pub fn reflect(&self) -> GaugeBody {
        GaugeBody {
            body: self.body.reflect(),
            normals: self.normals.iter().map(|a| -a).collect(),
        }
    }

    /// `α C` for `α > 0`.
    pub fn scaled(&self, alpha: f64) -> Result<GaugeBody> {
        GaugeBody::new(self.body.scale(alpha))
    }

    pub fn support(&self, u: &Vector) -> f64 {
        self.body.vertices().iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Searched,
}

/// A computed radius together with whatever attains it.
#[derive(Debug, Clone)]
pub struct RadiiResult {
    pub value: f64,
    pub witness_center: Option<Vector>,
    pub witness_subspace: Option<Subspace>,
    pub method: Method,
    /// `<= 1e-9` for exact results; the final search resolution otherwise.
    pub accuracy: f64,
}

impl RadiiResult {
    pub fn exact(value: f64, center: Option<Vector>) -> Self {
        Self {
            value,
            witness_center: center,
            witness_subspace: None,
            method: Method::Exact,
            accuracy: 0.0,
        }
    }
}

/// A pair `(K, C)` moved and scaled to unit size.
#[derive(Debug, Clone)]
pub(crate) struct NormalizedPair {
    pub k: Polytope,
    pub c: GaugeBody,
    pub k_shift: Vector,
    pub c_shift: Vector,
    pub k_scale: f64,
    pub c_scale: f64,
}

fn radius_about(p: &Polytope, c: &Vector) -> f64 {
    p.vertices().iter().map(|v| (v - c).norm()).fold(0.0, f64::max)
}

impl NormalizedPair {
    /// Requires `K` nonempty with positive extent.
    pub fn new(k: &Polytope, c: &GaugeBody) -> Result<Self> {
        check_dim(c.dim(), k.dim())?;
        let k_shift = k.vertex_centroid().ok_or(GeomError::EmptySet)?;
        let k_scale = radius_about(k, &k_shift);
        if k_scale == 0.0 {
            return Err(GeomError::DegenerateBody);
        }
        let c_shift = c.body.vertex_centroid().expect("gauge is nonempty");
        let c_scale = radius_about(&c.body, &c_shift);
        let kn = k.translate(&-&k_shift).scale(1.0 / k_scale);
        let cn = GaugeBody::new(c.body.translate(&-&c_shift).scale(1.0 / c_scale))?;
        Ok(Self {
            k: kn,
            c: cn,
            k_shift,
            c_shift,
            k_scale,
            c_scale,
        })
    }

    /// Factor mapping normalized radii back: `f(K, C) = ratio · f(K̂, Ĉ)`.
    pub fn ratio(&self) -> f64 {
        self.k_scale / self.c_scale
    }

    /// Maps a normalized center `x̂` with `K̂ ⊂ x̂ + λ̂Ĉ` to `x` with
    /// `K ⊂ x + λC`, where `λ = ratio·λ̂`.
    pub fn map_center(&self, xhat: &Vector, lambda: f64) -> Vector {
        &self.k_shift + xhat * self.k_scale - &self.c_shift * lambda
    }
}

/// `γ_C(x)`.
pub fn gamma(c: &GaugeBody, x: &Vector) -> Result<f64> {
    check_dim(c.dim(), x.len())?;
    Ok(c.gamma(x))
}

/// `dist_C(y, F) = inf_{z ∈ F} γ_C(y - z)`, with a nearest point.
pub fn dist_to_flat(c: &GaugeBody, y: &Vector, flat: &AffineFlat) -> Result<(f64, Vector)> {
    check_dim(c.dim(), y.len())?;
    check_dim(c.dim(), flat.ambient_dim())?;
    let k = flat.dim();
    let rel = y - &flat.point;
    if k == 0 {
        return Ok((c.gamma(&rel), flat.point.clone()));
    }
    // Variables (t, λ): maximize -λ s.t. -(a_i·B) t - λ <= -a_i·(y - x0).
    let mut obj = vec![0.0; k + 1];
    obj[k] = -1.0;
    let mut lp = LinearProgram::new(obj);
    for a in c.normals() {
        let mut row: Vec<f64> = flat.basis.iter().map(|b| -a.dot(b)).collect();
        row.push(-1.0);
        lp.push(row, -a.dot(&rel));
    }
    let sol = linprog::solve(&lp)?;
    let x = sol.x.ok_or_else(|| GeomError::Numerical("distance LP failed".into()))?;
    let t = Vector::from_column_slice(&x[..k]);
    let z = flat.to_ambient(&t);
    Ok((c.gamma(&(y - &z)).max(0.0), z))
}

/// Normalized circumradius LP: minimize λ with `a_i·(v - x) <= λ`.
pub(crate) fn circumradius_lp(vertices: &[Vector], c: &GaugeBody) -> Result<(f64, Vector)> {
    let d = c.dim();
    let mut obj = vec![0.0; d + 1];
    obj[d] = -1.0;
    let mut lp = LinearProgram::new(obj);
    lp.constraints.reserve(vertices.len() * c.normals().len());
    for v in vertices {
        for a in c.normals() {
            let mut row: Vec<f64> = a.iter().map(|x| -x).collect();
            row.push(-1.0);
            lp.push(row, -a.dot(v));
        }
    }
    let sol = linprog::solve(&lp)?;
    match (sol.status, sol.x) {
        (LpStatus::Optimal, Some(x)) => Ok((x[d].max(0.0), Vector::from_column_slice(&x[..d]))),
        _ => Err(GeomError::Numerical("circumradius LP did not reach an optimum".into())),
    }
}

/// `R(K, C)`, the least `λ` with `K ⊂ x + λC` for some `x`; `R(∅, C) = 0`.
pub fn circumradius(k: &Polytope, c: &GaugeBody) -> Result<RadiiResult> {
    check_dim(c.dim(), k.dim())?;
    if k.is_empty() {
        return Ok(RadiiResult::exact(0.0, None));
    }
    if k.vertices().len() == 1 {
        return Ok(RadiiResult::exact(0.0, Some(k.vertices()[0].clone())));
    }
    let np = NormalizedPair::new(k, c)?;
    let (lhat, xhat) = circumradius_lp(np.k.vertices(), &np.c)?;
    let value = np.ratio() * lhat;
    Ok(RadiiResult::exact(value, Some(np.map_center(&xhat, value))))
}

/// Normalized inradius LP: maximize λ with `y + λC ⊂ K`, `K` given by facets.
pub(crate) fn inradius_lp(k: &Polytope, c_vertices: &[Vector]) -> Result<Option<(f64, Vector)>> {
    let d = k.dim();
    let facets = k.hrep().ok_or(GeomError::DegenerateBody)?;
    let mut obj = vec![0.0; d + 1];
    obj[d] = 1.0;
    let mut lp = LinearProgram::new(obj);
    for h in facets {
        let hc = c_vertices.iter().map(|v| h.a.dot(v)).fold(f64::NEG_INFINITY, f64::max);
        let mut row: Vec<f64> = h.a.iter().copied().collect();
        row.push(hc);
        lp.push(row, h.b);
    }
    let sol = linprog::solve(&lp)?;
    match (sol.status, sol.x) {
        (LpStatus::Optimal, Some(x)) => Ok(Some((x[d], Vector::from_column_slice(&x[..d])))),
        (LpStatus::Unbounded, _) => Ok(None),
        _ => Err(GeomError::Numerical("inradius LP did not reach an optimum".into())),
    }
}

/// `r(K, C)`, the largest `λ` with `y + λC ⊂ K` for some `y`. Solved
/// directly and cross-checked against `1 / R(C, K)`.
pub fn inradius(k: &Polytope, c: &GaugeBody) -> Result<RadiiResult> {
    check_dim(c.dim(), k.dim())?;
    if !k.is_full_dimensional() {
        return Err(GeomError::DegenerateBody);
    }
    let np = NormalizedPair::new(k, c)?;
    let (rhat, yhat) = inradius_lp(&np.k, np.c.body().vertices())?
        .ok_or_else(|| GeomError::Numerical("inradius LP unbounded".into()))?;
    let value = np.ratio() * rhat;
    let (kg, _) = GaugeBody::centered(k)?;
    let dual = circumradius(c.body(), &kg)?.value;
    let cross = 1.0 / dual;
    let diff = (cross - value).abs();
    if diff > 1e-8 * value.max(1.0) {
        return Err(GeomError::Numerical(format!(
            "inradius {value} disagrees with 1/R(C,K) = {cross}"
        )));
    }
    Ok(RadiiResult {
        value,
        witness_center: Some(np.map_center(&yhat, value)),
        witness_subspace: None,
        method: Method::Exact,
        accuracy: diff,
    })
}

/// `cc(K, C) = {x : K ⊂ x + R(K,C) C}`.
pub fn circumcenter_set(k: &Polytope, c: &GaugeBody) -> Result<Polytope> {
    let r = circumradius(k, c)?;
    if k.is_empty() {
        return Ok(Polytope::empty(k.dim()));
    }
    ball::ball_intersect(k, c, r.value)
}

/// `ic(K, C) = -r(K,C) · cc(C, K)`, computed with `K` re-centered so it can
/// act as a gauge, then shifted back.
pub fn incenter_set(k: &Polytope, c: &GaugeBody) -> Result<Polytope> {
    if !k.is_full_dimensional() {
        return Err(GeomError::DegenerateBody);
    }
    let r = inradius(k, c)?.value;
    let (kg, shift) = GaugeBody::centered(k)?;
    let cc = circumcenter_set(c.body(), &kg)?;
    Ok(cc.scale(-r).translate(&shift))
}

/// Gauge diameter `D(K, C) = 2 · max_{z ∈ K-K} γ_{C-C}(z)`.
pub fn diameter(k: &Polytope, c: &GaugeBody) -> Result<f64> {
    check_dim(c.dim(), k.dim())?;
    if k.vertices().len() <= 1 {
        return Ok(0.0);
    }
    let dc = difference_gauge(c)?;
    let mut best = 0.0f64;
    for a in k.vertices() {
        for b in k.vertices() {
            best = best.max(dc.gamma(&(a - b)));
        }
    }
    Ok(2.0 * best)
}

/// Gauge width `ω(K, C) = 2 · inf_u h_{K-K}(u) / h_{C-C}(u)`, evaluated over
/// the facet normals of `K - K` and `C - C`.
pub fn width(k: &Polytope, c: &GaugeBody) -> Result<f64> {
    check_dim(c.dim(), k.dim())?;
    if k.is_empty() {
        return Ok(0.0);
    }
    let dk = difference_body(k)?;
    let Some(kf) = dk.hrep() else {
        return Ok(0.0);
    };
    let dc = difference_gauge(c)?;
    let mut best = f64::INFINITY;
    for u in kf.iter().map(|h| &h.a).chain(dc.body().hrep().unwrap().iter().map(|h| &h.a)) {
        let hk = support_of(&dk, u);
        let hc = support_of(dc.body(), u);
        best = best.min(hk / hc);
    }
    Ok(2.0 * best)
}

pub(crate) fn support_of(p: &Polytope, u: &Vector) -> f64 {
    p.vertices().iter().map(|v| v.dot(u)).fold(f64::NEG_INFINITY, f64::max)
}

/// `K - K`.
pub fn difference_body(k: &Polytope) -> Result<Polytope> {
    minkowski_sum(k, &k.reflect())
}

/// `C - C` as a (centered) gauge.
pub fn difference_gauge(c: &GaugeBody) -> Result<GaugeBody> {
    let pts: Vec<Vector> = c
        .body()
        .vertices()
        .iter()
        .flat_map(|a| c.body().vertices().iter().map(move |b| a - b))
        .collect();
    GaugeBody::new(convex_hull(&pts)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    fn unit_box() -> GaugeBody {
        GaugeBody::new(Polytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()).unwrap()
    }

    fn square() -> Polytope {
        Polytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn gamma_on_interval() {
        let c = GaugeBody::new(Polytope::cuboid(&[-1.0], &[2.0]).unwrap()).unwrap();
        assert_eq!(c.gamma(&vector(&[1.0])), 0.5);
        assert_eq!(c.gamma(&vector(&[-1.0])), 1.0);
        assert_eq!(c.gamma(&vector(&[0.0])), 0.0);
    }

    #[test]
    fn gauge_rejects_boundary_origin() {
        let p = Polytope::cuboid(&[0.0, -1.0], &[1.0, 1.0]).unwrap();
        assert!(matches!(GaugeBody::new(p), Err(GeomError::InvalidGauge(_))));
        let seg = convex_hull(&[vector(&[-1.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        assert!(matches!(GaugeBody::new(seg), Err(GeomError::InvalidGauge(_))));
    }

    #[test]
    fn box_distance_to_axis() {
        let flat = AffineFlat::new(vector(&[0.0, 0.0]), &[vector(&[0.0, 1.0])]).unwrap();
        let (d, z) = dist_to_flat(&unit_box(), &vector(&[2.0, 0.0]), &flat).unwrap();
        assert!((d - 2.0).abs() < 1e-12);
        assert!(z[0].abs() < 1e-12);
        let (d, _) = dist_to_flat(&unit_box(), &vector(&[0.0, 5.0]), &flat).unwrap();
        assert!(d.abs() < 1e-12);
    }

    #[test]
    fn box_in_box() {
        let r = circumradius(&square(), &unit_box()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        let x = r.witness_center.unwrap();
        assert!((&x - vector(&[0.5, 0.5])).norm() < 1e-12);
        let r = inradius(&square(), &unit_box()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
    }

    #[test]
    fn empty_and_point_conventions() {
        assert_eq!(circumradius(&Polytope::empty(2), &unit_box()).unwrap().value, 0.0);
        let p = Polytope::point(vector(&[3.0, 4.0]));
        assert_eq!(circumradius(&p, &unit_box()).unwrap().value, 0.0);
        assert_eq!(inradius(&p, &unit_box()).unwrap_err(), GeomError::DegenerateBody);
    }

    #[test]
    fn square_centers() {
        let cc = circumcenter_set(&square(), &unit_box()).unwrap();
        assert_eq!(cc.vertices().len(), 1);
        assert!((&cc.vertices()[0] - vector(&[0.5, 0.5])).norm() < 1e-9);
        let ic = incenter_set(&square(), &unit_box()).unwrap();
        assert_eq!(ic.vertices().len(), 1);
        assert!((&ic.vertices()[0] - vector(&[0.5, 0.5])).norm() < 1e-9);
    }

    #[test]
    fn segment_circumcenters_form_a_segment() {
        let seg = convex_hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        let cc = circumcenter_set(&seg, &unit_box()).unwrap();
        assert_eq!(cc.affine_dim().unwrap(), 1);
        let want = convex_hull(&[vector(&[0.5, -0.5]), vector(&[0.5, 0.5])]).unwrap();
        assert!(cc.approx_eq(&want, 1e-9), "{:?}", cc.vertices());
    }

    #[test]
    fn box_diameter_and_width() {
        assert!((diameter(&square(), &unit_box()).unwrap() - 1.0).abs() < 1e-12);
        assert!((width(&square(), &unit_box()).unwrap() - 1.0).abs() < 1e-12);
        let seg = convex_hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
        assert_eq!(width(&seg, &unit_box()).unwrap(), 0.0);
    }

    #[test]
    fn interval_diameter() {
        let c = GaugeBody::new(Polytope::cuboid(&[-1.0], &[2.0]).unwrap()).unwrap();
        let k = Polytope::cuboid(&[0.0], &[1.0]).unwrap();
        assert!((diameter(&k, &c).unwrap() - 2.0 / 3.0).abs() < 1e-12);
        assert!((circumradius(&k, &c).unwrap().value - 1.0 / 3.0).abs() < 1e-12);
    }
}
