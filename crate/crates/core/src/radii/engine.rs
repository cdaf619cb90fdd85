//! Per-subspace objectives on a normalized pair, and the outer searches over
//! subspaces.
//!
//! Reductions used throughout:
//! - `K ⊂ x + L + λC` iff `PK ⊂ Px + λPC` for the orthogonal projection `P`
//!   onto `L^⊥`, so cylinder radii are ordinary radii of projections.
//! - a segment `[p, q]` has `R([p,q], C) = γ_{C-C}(q - p)` and
//!   `r(K, [p,q]) = 1 / γ_{K-K}(q - p)`.

use std::f64::consts::PI;

use super::search::{
    fibonacci_hemisphere, grid_golden_max, grid_nelder_mead_max, half_turn, sphere_refine_max, tangent_frame,
    top_local_maxima_cyclic, top_local_maxima_sphere,
};
use super::SearchConfig;
use crate::error::{GeomError, Result};
use crate::gauge::{circumradius_lp, difference_gauge, inradius_lp, GaugeBody, NormalizedPair};
use crate::geometry::{convex_hull, convex_hull_tol, Halfspace, Polytope, Subspace, Vector};

const EPS: f64 = 1e-12;
/// Relative tolerance of the inner offset search for final values.
const FINE: f64 = 1e-9;
/// Looser inner tolerance used while scanning and coarse refinement.
const COARSE: f64 = 1e-6;

/// Which inner quantity is extremized over subspaces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Kind {
    /// `R(K, C + L)`
    CylOuter,
    /// `r(K + L, C)`
    CylInner,
    /// `sup_x R(K ∩ (x + L), C)`
    SecOuter,
    /// `inf_x r(K, C ∩ (x + L))`
    SecInner,
}

/// A linear subspace `L` together with an orthonormal basis of `L^⊥`.
#[derive(Debug, Clone)]
pub(crate) struct Split {
    pub l: Vec<Vector>,
    pub perp: Vec<Vector>,
}

impl Split {
    pub fn from_subspace(s: &Subspace) -> Self {
        Self {
            l: s.basis.clone(),
            perp: s.complement().basis,
        }
    }

    fn tangent(n: &Vector) -> Vec<Vector> {
        match n.len() {
            2 => vec![Vector::from_vec(vec![-n[1], n[0]])],
            3 => {
                let (u, w) = tangent_frame([n[0], n[1], n[2]]);
                vec![Vector::from_column_slice(&u), Vector::from_column_slice(&w)]
            }
            _ => Vec::new(),
        }
    }

    /// `L = span{n}`.
    pub fn line(n: &Vector) -> Self {
        Self {
            l: vec![n.clone()],
            perp: Self::tangent(n),
        }
    }

    /// `L = n^⊥`.
    pub fn hyperplane(n: &Vector) -> Self {
        Self {
            l: Self::tangent(n),
            perp: vec![n.clone()],
        }
    }

    /// The subspace of dimension `dim_l` described by the unit vector `n`:
    /// its direction for lines, its normal otherwise.
    pub fn from_direction(n: &Vector, dim_l: usize) -> Self {
        if dim_l == 1 {
            Self::line(n)
        } else {
            Self::hyperplane(n)
        }
    }

    pub fn subspace(&self, d: usize) -> Subspace {
        Subspace {
            dim_ambient: d,
            basis: self.l.clone(),
        }
    }

    fn coords(&self, v: &Vector) -> Vector {
        Vector::from_iterator(self.perp.len(), self.perp.iter().map(|b| b.dot(v)))
    }

    fn lift(&self, t: &[f64]) -> Vector {
        let mut x = Vector::zeros(self.perp[0].len());
        for (b, &c) in self.perp.iter().zip(t) {
            x.axpy(c, b, 1.0);
        }
        x
    }
}

/// Value of an inner problem plus a point witnessing it (a center for the
/// cylinder problems, a section offset for the section problems), in
/// normalized coordinates.
pub(crate) type Eval = (f64, Option<Vector>);

/// A normalized pair with derived data reused across many evaluations.
pub(crate) struct Prepared {
    pub d: usize,
    pub np: NormalizedPair,
    k_facets: Vec<Halfspace>,
    c_facets: Vec<Halfspace>,
    k_diff: Option<GaugeBody>,
    c_diff: GaugeBody,
}

impl Prepared {
    pub fn new(k: &Polytope, c: &GaugeBody) -> Result<Self> {
        let np = NormalizedPair::new(k, c)?;
        let d = k.dim();
        let k_facets = np.k.hrep().map(|h| h.to_vec()).unwrap_or_default();
        let c_facets = np.c.body().hrep().expect("gauge is full-dimensional").to_vec();
        let k_diff = if np.k.is_full_dimensional() {
            Some(GaugeBody::new(diff_hull(&np.k)?)?)
        } else {
            None
        };
        let c_diff = difference_gauge(&np.c)?;
        Ok(Self {
            d,
            np,
            k_facets,
            c_facets,
            k_diff,
            c_diff,
        })
    }

    /// Facet normals of `K̂ - K̂` (or the normals of its affine hull when it
    /// is flat) and of `Ĉ - Ĉ`: the directions where the support ratio
    /// `h_{K-K}(u) / h_{C-C}(u)` attains its extrema.
    pub fn ratio_candidates(&self) -> Result<Vec<Vector>> {
        let mut out = Vec::new();
        match &self.k_diff {
            Some(g) => out.extend(g.body().hrep().unwrap().iter().map(|h| h.a.normalize())),
            None => {
                let dk = diff_hull(&self.np.k)?;
                let frame = dk.affine_hull().expect("nonempty");
                out.extend(frame_subspace(frame.basis.clone(), self.d).complement().basis);
            }
        }
        out.extend(self.c_diff.body().hrep().unwrap().iter().map(|h| h.a.normalize()));
        Ok(out)
    }

    pub fn eval(&self, kind: Kind, split: &Split, cfg: &SearchConfig) -> Result<Eval> {
        self.eval_tol(kind, split, cfg, FINE)
    }

    /// Like `eval`, with relative tolerance `tol` for the inner offset search.
    fn eval_tol(&self, kind: Kind, split: &Split, cfg: &SearchConfig, tol: f64) -> Result<Eval> {
        match kind {
            Kind::CylOuter => self.cyl_outer(split),
            Kind::CylInner => self.cyl_inner(split),
            Kind::SecOuter => Ok(self.sec_outer(split, cfg, tol)),
            Kind::SecInner => Ok(self.sec_inner(split, cfg, tol)),
        }
    }

    fn project(&self, split: &Split, pts: &[Vector]) -> Vec<Vector> {
        pts.iter().map(|v| split.coords(v)).collect()
    }

    fn interval(pts: &[Vector], n: &Vector) -> (f64, f64) {
        pts.iter()
            .map(|v| n.dot(v))
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), t| (lo.min(t), hi.max(t)))
    }

    /// `R(K̂, Ĉ + L) = R(PK̂, PĈ)`.
    fn cyl_outer(&self, split: &Split) -> Result<Eval> {
        let k = split.perp.len();
        if k == 0 {
            return Ok((0.0, Some(Vector::zeros(self.d))));
        }
        if k == 1 {
            let n = &split.perp[0];
            let (klo, khi) = Self::interval(self.np.k.vertices(), n);
            let (clo, chi) = Self::interval(self.np.c.body().vertices(), n);
            let lam = (khi - klo) / (chi - clo);
            // klo = t + λ·clo places the covering slab.
            return Ok((lam, Some(n * (klo - lam * clo))));
        }
        let pk = self.project(split, self.np.k.vertices());
        let pc = GaugeBody::new(convex_hull(&self.project(split, self.np.c.body().vertices()))?)?;
        let (lam, x) = circumradius_lp(&pk, &pc)?;
        Ok((lam, Some(split.lift(x.as_slice()))))
    }

    /// `r(K̂ + L, Ĉ) = r(PK̂, PĈ)`.
    fn cyl_inner(&self, split: &Split) -> Result<Eval> {
        let k = split.perp.len();
        if k == 0 {
            return Ok((f64::INFINITY, None));
        }
        if k == 1 {
            let n = &split.perp[0];
            let (klo, khi) = Self::interval(self.np.k.vertices(), n);
            let (clo, chi) = Self::interval(self.np.c.body().vertices(), n);
            let lam = (khi - klo) / (chi - clo);
            return Ok((lam, Some(n * (klo - lam * clo))));
        }
        let pk = convex_hull(&self.project(split, self.np.k.vertices()))?;
        if !pk.is_full_dimensional() {
            return Ok((0.0, None));
        }
        let pc = self.project(split, self.np.c.body().vertices());
        match inradius_lp(&pk, &pc)? {
            Some((lam, y)) => Ok((lam, Some(split.lift(y.as_slice())))),
            None => Ok((f64::INFINITY, None)),
        }
    }

    /// `R(K̂ ∩ (x + L), Ĉ)` with `x` given by coordinates in `L^⊥`.
    fn section_outer_at(&self, split: &Split, t: &[f64]) -> f64 {
        let x = split.lift(t);
        match split.l.len() {
            0 => 0.0,
            1 => match chord(&self.k_facets, &x, &split.l[0]) {
                Some((a, b)) => self.c_diff.gamma(&(&split.l[0] * (b - a))),
                None => 0.0,
            },
            _ => {
                let pts = plane_section(self.np.k.vertices(), &split.perp[0], t[0]);
                if pts.len() <= 1 {
                    return 0.0;
                }
                circumradius_lp(&pts, &self.np.c).map(|r| r.0).unwrap_or(f64::NAN)
            }
        }
    }

    /// `r(K̂, Ĉ ∩ (x + L))`; `+∞` for empty or single-point sections.
    fn section_inner_at(&self, split: &Split, t: &[f64]) -> f64 {
        let x = split.lift(t);
        match split.l.len() {
            0 => f64::INFINITY,
            1 => match chord(&self.c_facets, &x, &split.l[0]) {
                Some((a, b)) if b - a > EPS => {
                    let g = self.k_diff.as_ref().expect("checked by caller");
                    1.0 / g.gamma(&(&split.l[0] * (b - a)))
                }
                _ => f64::INFINITY,
            },
            _ => {
                let pts = plane_section(self.np.c.body().vertices(), &split.perp[0], t[0]);
                if pts.len() <= 1 {
                    return f64::INFINITY;
                }
                match inradius_lp(&self.np.k, &pts) {
                    Ok(Some((r, _))) => r,
                    Ok(None) => f64::INFINITY,
                    Err(_) => f64::NAN,
                }
            }
        }
    }

    /// Searches offsets `t` over the bounding box of the projection of
    /// `body` onto `L^⊥`, maximizing `sign · f(t)`.
    fn offset_search(
        &self,
        split: &Split,
        body: &[Vector],
        sign: f64,
        cfg: &SearchConfig,
        tol: f64,
        f: impl Fn(&[f64]) -> f64,
    ) -> Eval {
        let proj = self.project(split, body);
        let m = split.perp.len();
        let lo: Vec<f64> = (0..m).map(|i| proj.iter().map(|p| p[i]).fold(f64::INFINITY, f64::min)).collect();
        let hi: Vec<f64> = (0..m).map(|i| proj.iter().map(|p| p[i]).fold(f64::NEG_INFINITY, f64::max)).collect();
        let g = |v: f64| if v.is_nan() { f64::NEG_INFINITY } else { sign * v };
        let (t, v) = match m {
            1 => {
                let (t, v) = grid_golden_max(|s| g(f(&[s])), lo[0], hi[0], cfg.offsets, tol);
                (vec![t], v)
            }
            2 => {
                let (t, v) = grid_nelder_mead_max(|p| g(f(&p)), [lo[0], lo[1]], [hi[0], hi[1]], cfg.offsets, tol);
                (t.to_vec(), v)
            }
            _ => return (if sign > 0.0 { 0.0 } else { f64::INFINITY }, None),
        };
        (sign * v, Some(split.lift(&t)))
    }

    fn sec_outer(&self, split: &Split, cfg: &SearchConfig, tol: f64) -> Eval {
        if split.perp.is_empty() {
            return (circumradius_lp(self.np.k.vertices(), &self.np.c).map(|r| r.0).unwrap_or(f64::NAN), None);
        }
        self.offset_search(split, self.np.k.vertices(), 1.0, cfg, tol, |t| self.section_outer_at(split, t))
    }

    fn sec_inner(&self, split: &Split, cfg: &SearchConfig, tol: f64) -> Eval {
        if split.perp.is_empty() {
            let r = inradius_lp(&self.np.k, self.np.c.body().vertices()).ok().flatten();
            return (r.map_or(f64::NAN, |r| r.0), None);
        }
        self.offset_search(split, self.np.c.body().vertices(), -1.0, cfg, tol, |t| self.section_inner_at(split, t))
    }
}

fn frame_subspace(basis: Vec<Vector>, d: usize) -> Subspace {
    Subspace { dim_ambient: d, basis }
}

fn diff_hull(p: &Polytope) -> Result<Polytope> {
    let pts: Vec<Vector> = p
        .vertices()
        .iter()
        .flat_map(|a| p.vertices().iter().map(move |b| a - b))
        .collect();
    convex_hull(&pts)
}

/// Parameter interval `[a, b]` of `{x + s u} ∩ P` for `P = {h.a·y <= h.b}`.
pub(crate) fn chord(facets: &[Halfspace], x: &Vector, u: &Vector) -> Option<(f64, f64)> {
    let (mut lo, mut hi) = (f64::NEG_INFINITY, f64::INFINITY);
    for h in facets {
        let au = h.a.dot(u);
        let slack = h.b - h.a.dot(x);
        if au.abs() <= EPS {
            if slack < -EPS {
                return None;
            }
            continue;
        }
        let t = slack / au;
        if au > 0.0 {
            hi = hi.min(t);
        } else {
            lo = lo.max(t);
        }
    }
    if lo > hi + EPS || !lo.is_finite() || !hi.is_finite() {
        return None;
    }
    Some((lo, hi.max(lo)))
}

/// Vertices of `conv(V) ∩ {y : n·y = t}` for a 3D vertex set: the vertices
/// on the plane plus the crossings of all straddling vertex pairs.
pub(crate) fn plane_section(verts: &[Vector], n: &Vector, t: f64) -> Vec<Vector> {
    let s: Vec<f64> = verts.iter().map(|v| n.dot(v) - t).collect();
    let mut pts: Vec<Vector> = Vec::new();
    for (i, v) in verts.iter().enumerate() {
        if s[i].abs() <= EPS {
            pts.push(v.clone());
        }
    }
    for i in 0..verts.len() {
        if s[i] >= -EPS {
            continue;
        }
        for j in 0..verts.len() {
            if s[j] <= EPS {
                continue;
            }
            let w = s[i] / (s[i] - s[j]);
            pts.push(&verts[i] + (&verts[j] - &verts[i]) * w);
        }
    }
    if pts.len() <= 3 {
        return pts;
    }
    let (u, w) = tangent_frame([n[0], n[1], n[2]]);
    let (u, w) = (Vector::from_column_slice(&u), Vector::from_column_slice(&w));
    let local: Vec<Vector> = pts.iter().map(|p| Vector::from_vec(vec![u.dot(p), w.dot(p)])).collect();
    let hull = convex_hull_tol(2, &local, 1e-12);
    hull.vertices()
        .iter()
        .map(|q| n * t + &u * q[0] + &w * q[1])
        .collect()
}

/// Best subspace found by a search, in normalized coordinates.
pub(crate) struct Found {
    pub value: f64,
    pub split: Split,
    pub point: Option<Vector>,
    pub accuracy: f64,
}

impl Prepared {
    /// Extremizes `kind` over `L ∈ L^d_{dim_l}`: maximizes when `sign = 1`,
    /// minimizes when `sign = -1`.
    pub fn search(&self, kind: Kind, dim_l: usize, sign: f64, cfg: &SearchConfig) -> Result<Found> {
        let d = self.d;
        let score = |split: &Split, tol: f64| -> Result<(f64, Option<Vector>)> {
            let (v, p) = self.eval_tol(kind, split, cfg, tol)?;
            Ok((if v.is_nan() { f64::NEG_INFINITY } else { sign * v }, p))
        };
        match d {
            2 => {
                let dir = |th: f64| Vector::from_vec(vec![th.cos(), th.sin()]);
                let angles = half_turn(cfg.angles);
                let mut vals = Vec::with_capacity(angles.len());
                for &th in &angles {
                    vals.push(score(&Split::from_direction(&dir(th), dim_l), FINE)?.0);
                }
                let h = PI / cfg.angles as f64;
                let mut best: Option<(f64, f64)> = None;
                let mut err: Option<GeomError> = None;
                for i in top_local_maxima_cyclic(&vals, cfg.refine) {
                    let th0 = angles[i];
                    let (th, v) = grid_golden_max(
                        |th| match score(&Split::from_direction(&dir(th), dim_l), FINE) {
                            Ok(s) => s.0,
                            Err(e) => {
                                err = Some(e);
                                f64::NEG_INFINITY
                            }
                        },
                        th0 - h,
                        th0 + h,
                        3,
                        1e-10,
                    );
                    if best.is_none_or(|b| v > b.1) {
                        best = Some((th, v));
                    }
                }
                if let Some(e) = err {
                    return Err(e);
                }
                let (th, _) = best.expect("grid is nonempty");
                let split = Split::from_direction(&dir(th), dim_l);
                let (v, p) = self.eval(kind, &split, cfg)?;
                Ok(Found {
                    value: v,
                    split,
                    point: p,
                    accuracy: 2.0 * h * 1e-10,
                })
            }
            3 => {
                // Coarse grid and basin refinement with a loose inner
                // tolerance, then full-precision polishing of the two best.
                let pts = fibonacci_hemisphere(cfg.sphere);
                let as_vec = |p: [f64; 3]| Vector::from_column_slice(&p);
                let mut err: Option<GeomError> = None;
                let mut f = |n: [f64; 3], tol: f64| match score(&Split::from_direction(&as_vec(n), dim_l), tol) {
                    Ok(s) => s.0,
                    Err(e) => {
                        err = Some(e);
                        f64::NEG_INFINITY
                    }
                };
                let vals: Vec<f64> = pts.iter().map(|p| f(*p, COARSE)).collect();
                let spacing = (2.0 * PI / cfg.sphere as f64).sqrt();
                let mut basins: Vec<([f64; 3], f64)> = top_local_maxima_sphere(&pts, &vals, cfg.refine, 6)
                    .into_iter()
                    .map(|i| {
                        let (n, v, _) = sphere_refine_max(&mut |n| f(n, COARSE), pts[i], vals[i], 0.5 * spacing, 1e-3);
                        (n, v)
                    })
                    .collect();
                basins.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap_or(std::cmp::Ordering::Equal));
                let mut best: Option<([f64; 3], f64, f64)> = None;
                for &(n0, _) in basins.iter().take(2) {
                    let v0 = f(n0, FINE);
                    let (n, v, step) = sphere_refine_max(&mut |n| f(n, FINE), n0, v0, 2e-3, 1e-7);
                    if best.is_none_or(|b| v > b.1) {
                        best = Some((n, v, step));
                    }
                }
                if let Some(e) = err {
                    return Err(e);
                }
                let (n, _, step) = best.expect("grid is nonempty");
                let split = Split::from_direction(&as_vec(n), dim_l);
                let (v, p) = self.eval(kind, &split, cfg)?;
                Ok(Found {
                    value: v,
                    split,
                    point: p,
                    accuracy: step,
                })
            }
            _ => Err(GeomError::UnsupportedDimension(d)),
        }
    }

    /// Exact extremum of a cylinder quantity over hyperplanes `L = u^⊥`,
    /// where the inner value is the support ratio and its extrema sit at
    /// the candidate normals.
    pub fn hyperplane_candidates(&self, kind: Kind, sign: f64, cfg: &SearchConfig) -> Result<Found> {
        let mut best: Option<(f64, Split, Option<Vector>)> = None;
        for u in self.ratio_candidates()? {
            let split = Split::hyperplane(&u);
            let (v, p) = self.eval(kind, &split, cfg)?;
            if best.as_ref().is_none_or(|b| sign * v > sign * b.0) {
                best = Some((v, split, p));
            }
        }
        let (value, split, point) = best.ok_or_else(|| GeomError::Numerical("no candidate directions".into()))?;
        Ok(Found {
            value,
            split,
            point,
            accuracy: 0.0,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn chord_through_square() {
        let sq = Polytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap();
        let (a, b) = chord(sq.hrep().unwrap(), &vector(&[0.5, 0.5]), &vector(&[1.0, 0.0])).unwrap();
        assert!((a + 0.5).abs() < 1e-15 && (b - 0.5).abs() < 1e-15);
        assert!(chord(sq.hrep().unwrap(), &vector(&[0.5, 2.0]), &vector(&[1.0, 0.0])).is_none());
    }

    #[test]
    fn cube_plane_section() {
        let cube = Polytope::cuboid(&[0.0; 3], &[1.0; 3]).unwrap();
        let n = vector(&[1.0, 1.0, 1.0]).normalize();
        let pts = plane_section(cube.vertices(), &n, n.dot(&vector(&[0.5, 0.5, 0.5])));
        assert_eq!(pts.len(), 6);
        let pts = plane_section(cube.vertices(), &vector(&[0.0, 0.0, 1.0]), 0.25);
        assert_eq!(pts.len(), 4);
    }
}
