use nalgebra::DMatrix;

use super::{convex_hull_tol, hull::default_tol, AffineFlat, Halfspace, Vector};
use crate::error::{GeomError, Result};

/// A convex polytope in `R^d`, possibly lower-dimensional or empty.
///
/// The vertex list always holds exactly the extreme points in canonical
/// order (2D: counterclockwise from the lexicographic minimum, otherwise
/// lexicographic). Facets are stored in the coordinates of the affine hull
/// frame; for full-dimensional bodies that frame is the standard one, so
/// the facets are the irredundant H-representation.
#[derive(Debug, Clone)]
pub struct Polytope {
    pub(crate) dim: usize,
    pub(crate) vertices: Vec<Vector>,
    pub(crate) frame: Option<AffineFlat>,
    pub(crate) facets: Vec<Halfspace>,
}

impl Polytope {
    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            vertices: Vec::new(),
            frame: None,
            facets: Vec::new(),
        }
    }

    pub fn point(p: Vector) -> Self {
        let dim = p.len();
        Self {
            dim,
            frame: Some(AffineFlat {
                point: p.clone(),
                basis: Vec::new(),
            }),
            vertices: vec![p],
            facets: Vec::new(),
        }
    }

    /// Axis-parallel box `[lo_1, hi_1] x ... x [lo_d, hi_d]`.
    pub fn cuboid(lo: &[f64], hi: &[f64]) -> Result<Self> {
        let d = lo.len();
        let mut pts = Vec::with_capacity(1 << d);
        for mask in 0..(1usize << d) {
            pts.push(Vector::from_fn(d, |i, _| if mask & (1 << i) != 0 { hi[i] } else { lo[i] }));
        }
        super::convex_hull(&pts)
    }

    /// Regular `n`-gon with circumradius `radius`, first vertex at angle `phase`.
    pub fn regular_polygon(n: usize, radius: f64, center: [f64; 2], phase: f64) -> Result<Self> {
        let pts: Vec<Vector> = (0..n)
            .map(|i| {
                let t = phase + 2.0 * std::f64::consts::PI * i as f64 / n as f64;
                Vector::from_vec(vec![center[0] + radius * t.cos(), center[1] + radius * t.sin()])
            })
            .collect();
        super::convex_hull(&pts)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Vector] {
        &self.vertices
    }

    /// Dimension of the frame found during construction.
    pub fn frame_dim(&self) -> Option<usize> {
        self.frame.as_ref().map(|f| f.dim())
    }

    pub fn is_full_dimensional(&self) -> bool {
        self.frame_dim() == Some(self.dim)
    }

    pub fn affine_hull(&self) -> Option<&AffineFlat> {
        self.frame.as_ref()
    }

    /// Irredundant H-representation; only for full-dimensional bodies.
    pub fn hrep(&self) -> Option<&[Halfspace]> {
        if self.is_full_dimensional() {
            Some(&self.facets)
        } else {
            None
        }
    }

    /// Facets of a lower-dimensional body in its own frame coordinates.
    pub fn local_facets(&self) -> &[Halfspace] {
        &self.facets
    }

    /// Dimension of the affine hull, from the rank of the vertex difference
    /// matrix with tolerance `1e-8` relative to the diameter.
    pub fn affine_dim(&self) -> Result<usize> {
        if self.is_empty() {
            return Err(GeomError::EmptySet);
        }
        let diam = self.euclidean_diameter();
        if self.vertices.len() == 1 || diam == 0.0 {
            return Ok(0);
        }
        let v0 = &self.vertices[0];
        let m = DMatrix::from_fn(self.vertices.len() - 1, self.dim, |i, j| {
            self.vertices[i + 1][j] - v0[j]
        });
        let sv = m.singular_values();
        Ok(sv.iter().filter(|&&s| s > 1e-8 * diam).count())
    }

    pub fn euclidean_diameter(&self) -> f64 {
        let mut best = 0.0f64;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                best = best.max((a - b).norm());
            }
        }
        best
    }

    /// Mean of the vertices; interior for full-dimensional bodies.
    pub fn vertex_centroid(&self) -> Option<Vector> {
        if self.is_empty() {
            return None;
        }
        let mut c = Vector::zeros(self.dim);
        for v in &self.vertices {
            c += v;
        }
        Some(c / self.vertices.len() as f64)
    }

    /// Membership with absolute tolerance `tol`.
    pub fn contains(&self, x: &Vector, tol: f64) -> bool {
        let Some(frame) = &self.frame else {
            return false;
        };
        if frame.dim() == self.dim {
            return self.facets.iter().all(|h| h.a.dot(x) <= h.b + tol);
        }
        if frame.distance(x) > tol {
            return false;
        }
        let t = frame.to_local(x);
        match frame.dim() {
            0 => true,
            _ => self.facets.iter().all(|h| h.a.dot(&t) <= h.b + tol),
        }
    }

    /// Every vertex of `self` lies in `other` up to `tol`.
    pub fn is_subset_of(&self, other: &Polytope, tol: f64) -> bool {
        self.vertices.iter().all(|v| other.contains(v, tol))
    }

    /// Two-sided inclusion up to `tol`.
    pub fn approx_eq(&self, other: &Polytope, tol: f64) -> bool {
        if self.is_empty() || other.is_empty() {
            return self.is_empty() == other.is_empty();
        }
        self.is_subset_of(other, tol) && other.is_subset_of(self, tol)
    }

    /// Hausdorff distance between vertex sets and bodies, estimated by
    /// vertex-to-body distances (exact for polytopes).
    pub fn hausdorff(&self, other: &Polytope) -> f64 {
        let one = |a: &Polytope, b: &Polytope| {
            a.vertices
                .iter()
                .map(|v| b.distance_to(v))
                .fold(0.0f64, f64::max)
        };
        one(self, other).max(one(other, self))
    }

    /// Euclidean distance from `x` to the body (projection by a small
    /// active-set iteration over vertex combinations).
    pub fn distance_to(&self, x: &Vector) -> f64 {
        if self.is_empty() {
            return f64::INFINITY;
        }
        nearest_in_hull(&self.vertices, x)
    }

    pub fn translate(&self, t: &Vector) -> Polytope {
        self.map_vertices(|v| v + t)
    }

    /// `alpha * P`; `alpha` may be negative.
    pub fn scale(&self, alpha: f64) -> Polytope {
        self.map_vertices(|v| v * alpha)
    }

    pub fn reflect(&self) -> Polytope {
        self.scale(-1.0)
    }

    fn map_vertices(&self, f: impl Fn(&Vector) -> Vector) -> Polytope {
        if self.is_empty() {
            return self.clone();
        }
        let pts: Vec<Vector> = self.vertices.iter().map(f).collect();
        let tol = default_tol(&pts);
        convex_hull_tol(self.dim, &pts, tol)
    }

    /// Volume of a full-dimensional body (length / area / volume); 0 otherwise.
    pub fn volume(&self) -> f64 {
        if !self.is_full_dimensional() {
            return 0.0;
        }
        match self.dim {
            1 => self.vertices[1][0] - self.vertices[0][0],
            2 => {
                let n = self.vertices.len();
                let mut a = 0.0;
                for i in 0..n {
                    let p = &self.vertices[i];
                    let q = &self.vertices[(i + 1) % n];
                    a += p[0] * q[1] - p[1] * q[0];
                }
                0.5 * a.abs()
            }
            3 => {
                // Pyramids from an interior point over each facet polygon.
                let c = self.vertex_centroid().unwrap();
                let mut vol = 0.0;
                for h in &self.facets {
                    let on: Vec<&Vector> = self
                        .vertices
                        .iter()
                        .filter(|v| (h.a.dot(v) - h.b).abs() <= 1e-9 * (1.0 + h.b.abs()))
                        .collect();
                    let area = planar_polygon_area(&on, &h.a);
                    vol += area * (h.b - h.a.dot(&c)) / 3.0;
                }
                vol
            }
            _ => 0.0,
        }
    }
}

fn planar_polygon_area(points: &[&Vector], normal: &Vector) -> f64 {
    if points.len() < 3 {
        return 0.0;
    }
    let n = normal / normal.norm();
    let helper = if n[0].abs() < 0.9 {
        Vector::from_vec(vec![1.0, 0.0, 0.0])
    } else {
        Vector::from_vec(vec![0.0, 1.0, 0.0])
    };
    let u = {
        let v = &helper - &n * n.dot(&helper);
        &v / v.norm()
    };
    let w = n.cross(&u);
    let pts: Vec<Vector> = points
        .iter()
        .map(|p| Vector::from_vec(vec![u.dot(p), w.dot(p)]))
        .collect();
    let tol = default_tol(&pts);
    convex_hull_tol(2, &pts, tol).volume()
}

/// Distance from `x` to the convex hull of `pts` via Frank-Wolfe with
/// away steps; accurate to ~1e-12 relative on desk-scale inputs.
/// Euclidean distance from `x` to `conv(pts)` by Wolfe's minimum-norm-point
/// algorithm on the shifted points `p - x`. Terminates finitely; the working
/// set never exceeds `d + 1` points.
fn nearest_in_hull(pts: &[Vector], x: &Vector) -> f64 {
    let q: Vec<Vector> = pts.iter().map(|p| p - x).collect();
    let scale = q.iter().map(|p| p.norm_squared()).fold(0.0, f64::max).max(1e-300);
    let eps = 1e-14;
    let start = (0..q.len())
        .min_by(|&a, &b| q[a].norm_squared().total_cmp(&q[b].norm_squared()))
        .expect("nonempty");
    let mut set = vec![start];
    let mut lam = vec![1.0];
    let mut y = q[start].clone();
    for _ in 0..100 * q.len() {
        let j = (0..q.len()).min_by(|&a, &b| q[a].dot(&y).total_cmp(&q[b].dot(&y))).expect("nonempty");
        if y.norm_squared() - q[j].dot(&y) <= eps * scale || set.contains(&j) {
            break;
        }
        set.push(j);
        lam.push(0.0);
        loop {
            let alpha = affine_min_weights(&q, &set);
            let Some(alpha) = alpha else {
                // Degenerate working set: drop the newest point.
                set.pop();
                lam.pop();
                return y.norm();
            };
            if alpha.iter().all(|&a| a > eps) {
                lam = alpha;
                break;
            }
            let theta = set
                .iter()
                .enumerate()
                .filter(|&(i, _)| alpha[i] <= eps)
                .map(|(i, _)| lam[i] / (lam[i] - alpha[i]))
                .fold(1.0, f64::min);
            for (l, a) in lam.iter_mut().zip(&alpha) {
                *l = theta * a + (1.0 - theta) * *l;
            }
            let mut k = 0;
            while k < set.len() {
                if lam[k] <= eps {
                    set.remove(k);
                    lam.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = lam.iter().sum();
            lam.iter_mut().for_each(|l| *l /= total);
        }
        y = set.iter().zip(&lam).fold(Vector::zeros(x.len()), |acc, (&i, &l)| acc + &q[i] * l);
    }
    y.norm()
}

/// Weights of the minimum-norm point of the affine hull of `q[set]`.
fn affine_min_weights(q: &[Vector], set: &[usize]) -> Option<Vec<f64>> {
    let m = set.len();
    let mut a = DMatrix::<f64>::zeros(m + 1, m + 1);
    let mut b = nalgebra::DVector::<f64>::zeros(m + 1);
    for (r, &i) in set.iter().enumerate() {
        for (c, &j) in set.iter().enumerate() {
            a[(r, c)] = q[i].dot(&q[j]);
        }
        a[(r, m)] = 1.0;
        a[(m, r)] = 1.0;
    }
    b[m] = 1.0;
    let sol = a.lu().solve(&b)?;
    let w: Vec<f64> = (0..m).map(|i| sol[i]).collect();
    w.iter().all(|v| v.is_finite()).then_some(w)
}
