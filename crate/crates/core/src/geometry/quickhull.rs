//! Three-dimensional quickhull with coplanar facet merging.
//!
//! Triangles are built incrementally; points within `tol` of a face plane
//! never see that face. Afterwards coplanar triangles are merged into
//! facets and every facet is reduced to the planar hull of the input points
//! lying on it, which discards collinear or interior points picked up
//! along the way.

use std::collections::HashMap;

use super::{Halfspace, Vector};

struct Face {
    v: [usize; 3],
    normal: Vector,
    offset: f64,
    outside: Vec<usize>,
    alive: bool,
}

fn plane(pts: &[Vector], v: [usize; 3]) -> (Vector, f64) {
    let a = &pts[v[0]];
    let n = (&pts[v[1]] - a).cross(&(&pts[v[2]] - a));
    let len = n.norm();
    let n = if len > 0.0 { n / len } else { n };
    let off = n.dot(a);
    (n, off)
}

fn make_face(pts: &[Vector], v: [usize; 3]) -> Face {
    let (normal, offset) = plane(pts, v);
    Face {
        v,
        normal,
        offset,
        outside: Vec::new(),
        alive: true,
    }
}

impl Face {
    fn dist(&self, p: &Vector) -> f64 {
        self.normal.dot(p) - self.offset
    }
}

/// Returns (vertex indices, facet halfspaces with unit normals).
pub(super) fn hull3(pts: &[Vector], tol: f64) -> (Vec<usize>, Vec<Halfspace>) {
    let n = pts.len();
    // Initial tetrahedron from extreme points.
    let i0 = 0; // lexicographic minimum (input is sorted by the caller's dedupe)
    let i1 = (0..n)
        .max_by(|&a, &b| {
            (&pts[a] - &pts[i0])
                .norm()
                .partial_cmp(&(&pts[b] - &pts[i0]).norm())
                .unwrap()
        })
        .unwrap();
    let dir = {
        let d = &pts[i1] - &pts[i0];
        &d / d.norm()
    };
    let line_dist = |p: &Vector| {
        let r = p - &pts[i0];
        (&r - &dir * dir.dot(&r)).norm()
    };
    let i2 = (0..n)
        .max_by(|&a, &b| line_dist(&pts[a]).partial_cmp(&line_dist(&pts[b])).unwrap())
        .unwrap();
    let (pn, po) = plane(pts, [i0, i1, i2]);
    let i3 = (0..n)
        .max_by(|&a, &b| {
            (pn.dot(&pts[a]) - po)
                .abs()
                .partial_cmp(&(pn.dot(&pts[b]) - po).abs())
                .unwrap()
        })
        .unwrap();

    let mut faces: Vec<Face> = Vec::new();
    let centroid = (&pts[i0] + &pts[i1] + &pts[i2] + &pts[i3]) / 4.0;
    for tri in [[i0, i1, i2], [i0, i1, i3], [i0, i2, i3], [i1, i2, i3]] {
        let mut f = make_face(pts, tri);
        if f.dist(&centroid) > 0.0 {
            f = make_face(pts, [tri[0], tri[2], tri[1]]);
        }
        faces.push(f);
    }
    let seeds = [i0, i1, i2, i3];
    for p in 0..n {
        if seeds.contains(&p) {
            continue;
        }
        assign(&mut faces, 0..4, p, pts, tol);
    }

    // Directed edge -> face index.
    let mut edges: HashMap<(usize, usize), usize> = HashMap::new();
    for (fi, f) in faces.iter().enumerate() {
        for k in 0..3 {
            edges.insert((f.v[k], f.v[(k + 1) % 3]), fi);
        }
    }

    loop {
        let Some(fi) = faces.iter().position(|f| f.alive && !f.outside.is_empty()) else {
            break;
        };
        let eye = *faces[fi]
            .outside
            .iter()
            .max_by(|&&a, &&b| {
                faces[fi]
                    .dist(&pts[a])
                    .partial_cmp(&faces[fi].dist(&pts[b]))
                    .unwrap()
                    .then(b.cmp(&a))
            })
            .unwrap();

        // Visible region: connected set of faces the eye sees.
        let mut visible = vec![fi];
        let mut seen = std::collections::HashSet::new();
        seen.insert(fi);
        let mut k = 0;
        while k < visible.len() {
            let f = visible[k];
            k += 1;
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                if let Some(&g) = edges.get(&(b, a)) {
                    if !seen.contains(&g) && faces[g].alive && faces[g].dist(&pts[eye]) > tol {
                        seen.insert(g);
                        visible.push(g);
                    }
                }
            }
        }
        // Horizon edges: boundary of the visible region, in visible-face orientation.
        let mut horizon: Vec<(usize, usize)> = Vec::new();
        for &f in &visible {
            let v = faces[f].v;
            for e in 0..3 {
                let (a, b) = (v[e], v[(e + 1) % 3]);
                let other = edges.get(&(b, a)).copied();
                if other.is_none_or(|g| !seen.contains(&g)) {
                    horizon.push((a, b));
                }
            }
        }
        let mut orphans: Vec<usize> = Vec::new();
        for &f in &visible {
            faces[f].alive = false;
            orphans.append(&mut faces[f].outside);
            let v = faces[f].v;
            for e in 0..3 {
                let key = (v[e], v[(e + 1) % 3]);
                if edges.get(&key) == Some(&f) {
                    edges.remove(&key);
                }
            }
        }
        let first_new = faces.len();
        for (a, b) in horizon {
            let f = make_face(pts, [a, b, eye]);
            let idx = faces.len();
            for e in 0..3 {
                edges.insert((f.v[e], f.v[(e + 1) % 3]), idx);
            }
            faces.push(f);
        }
        let new_range = first_new..faces.len();
        for p in orphans {
            if p != eye {
                assign(&mut faces, new_range.clone(), p, pts, tol);
            }
        }
    }

    merge_facets(pts, &faces, tol)
}

fn assign(faces: &mut [Face], range: std::ops::Range<usize>, p: usize, pts: &[Vector], tol: f64) {
    let mut best: Option<(usize, f64)> = None;
    for fi in range {
        if !faces[fi].alive {
            continue;
        }
        let d = faces[fi].dist(&pts[p]);
        if d > tol && best.is_none_or(|(_, bd)| d > bd) {
            best = Some((fi, d));
        }
    }
    if let Some((fi, _)) = best {
        faces[fi].outside.push(p);
    }
}

/// Groups coplanar triangles and reduces each group to a planar polygon.
fn merge_facets(pts: &[Vector], faces: &[Face], tol: f64) -> (Vec<usize>, Vec<Halfspace>) {
    let alive: Vec<&Face> = faces.iter().filter(|f| f.alive).collect();
    let mut groups: Vec<(Vector, f64)> = Vec::new();
    for f in &alive {
        let found = groups.iter().any(|(n, o)| {
            (n - &f.normal).norm() <= 1e-7 && (o - f.offset).abs() <= tol.max(1e-12) * 10.0
        });
        if !found {
            groups.push((f.normal.clone(), f.offset));
        }
    }
    let mut vertex_set = std::collections::BTreeSet::new();
    let mut facets = Vec::with_capacity(groups.len());
    for (n, _) in &groups {
        // All input points on this supporting plane.
        let top = pts.iter().map(|p| n.dot(p)).fold(f64::NEG_INFINITY, f64::max);
        let on: Vec<usize> = (0..pts.len())
            .filter(|&i| n.dot(&pts[i]) >= top - tol)
            .collect();
        let poly = planar_hull(pts, &on, n, tol);
        if poly.len() < 3 {
            continue;
        }
        // Newell normal of the polygon for a clean facet plane.
        let mut nn = Vector::zeros(3);
        for k in 0..poly.len() {
            let p = &pts[poly[k]];
            let q = &pts[poly[(k + 1) % poly.len()]];
            nn[0] += (p[1] - q[1]) * (p[2] + q[2]);
            nn[1] += (p[2] - q[2]) * (p[0] + q[0]);
            nn[2] += (p[0] - q[0]) * (p[1] + q[1]);
        }
        let mut nn = &nn / nn.norm();
        if nn.dot(n) < 0.0 {
            nn = -nn;
        }
        let b = pts.iter().map(|p| nn.dot(p)).fold(f64::NEG_INFINITY, f64::max);
        facets.push(Halfspace { a: nn, b });
        vertex_set.extend(poly);
    }
    facets.sort_by(|x, y| super::lex_cmp(&x.a, &y.a));
    facets.dedup_by(|x, y| (&x.a - &y.a).norm() <= 1e-9 && (x.b - y.b).abs() <= tol.max(1e-12) * 10.0);
    (vertex_set.into_iter().collect(), facets)
}

/// Counterclockwise (seen from `normal`) hull of the points `on` lying in a plane.
fn planar_hull(pts: &[Vector], on: &[usize], normal: &Vector, tol: f64) -> Vec<usize> {
    let helper = if normal[0].abs() < 0.9 {
        Vector::from_vec(vec![1.0, 0.0, 0.0])
    } else {
        Vector::from_vec(vec![0.0, 1.0, 0.0])
    };
    let u = {
        let v = &helper - normal * normal.dot(&helper);
        &v / v.norm()
    };
    let w = normal.cross(&u);
    let mut loc: Vec<(usize, f64, f64)> = on.iter().map(|&i| (i, u.dot(&pts[i]), w.dot(&pts[i]))).collect();
    loc.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap().then(a.2.partial_cmp(&b.2).unwrap()));
    loc.dedup_by(|a, b| (a.1 - b.1).abs() <= tol && (a.2 - b.2).abs() <= tol);
    if loc.len() < 3 {
        return loc.into_iter().map(|x| x.0).collect();
    }
    let cross = |o: &(usize, f64, f64), a: &(usize, f64, f64), b: &(usize, f64, f64)| {
        (a.1 - o.1) * (b.2 - o.2) - (a.2 - o.2) * (b.1 - o.1)
    };
    let keep = |h: &Vec<(usize, f64, f64)>, p: &(usize, f64, f64)| {
        let a = &h[h.len() - 2];
        let b = &h[h.len() - 1];
        let len = ((p.1 - a.1).powi(2) + (p.2 - a.2).powi(2)).sqrt();
        cross(a, b, p) > tol * len
    };
    let mut lower: Vec<(usize, f64, f64)> = Vec::new();
    for p in &loc {
        while lower.len() >= 2 && !keep(&lower, p) {
            lower.pop();
        }
        lower.push(*p);
    }
    let mut upper: Vec<(usize, f64, f64)> = Vec::new();
    for p in loc.iter().rev() {
        while upper.len() >= 2 && !keep(&upper, p) {
            upper.pop();
        }
        upper.push(*p);
    }
    lower.pop();
    upper.pop();
    lower.extend(upper);
    lower.into_iter().map(|x| x.0).collect()
}
