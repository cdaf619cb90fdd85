//! Polytope primitives for dimensions 1 to 3: hulls, halfspace
//! intersections, Minkowski algebra, sections and projections.

mod halfspace;
mod hull;
pub mod json;
mod ops;
mod polytope;
mod quickhull;

pub use halfspace::{halfspace_intersection, halfspace_intersection_tol};
pub use hull::{convex_hull, convex_hull_tol};
pub use ops::{minkowski_sum, orthogonal_project, section, support};
pub use polytope::Polytope;

use nalgebra::DVector;

use crate::error::{GeomError, Result};

/// A point or direction in `R^d`.
pub type Vector = DVector<f64>;

pub fn vector(coords: &[f64]) -> Vector {
    DVector::from_column_slice(coords)
}

/// Lexicographic comparison, used for canonical vertex orderings.
pub(crate) fn lex_cmp(a: &Vector, b: &Vector) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b.iter()) {
        match x.partial_cmp(y) {
            Some(std::cmp::Ordering::Equal) | None => continue,
            Some(o) => return o,
        }
    }
    std::cmp::Ordering::Equal
}

/// Closed halfspace `{x : a·x <= b}`.
#[derive(Debug, Clone, PartialEq)]
pub struct Halfspace {
    pub a: Vector,
    pub b: f64,
}

impl Halfspace {
    pub fn new(a: Vector, b: f64) -> Result<Self> {
        if a.iter().all(|&v| v == 0.0) {
            return Err(GeomError::InvalidInput("halfspace normal is zero".into()));
        }
        if !b.is_finite() || !a.iter().all(|v| v.is_finite()) {
            return Err(GeomError::InvalidInput("halfspace is not finite".into()));
        }
        Ok(Self { a, b })
    }

    pub fn dim(&self) -> usize {
        self.a.len()
    }

    /// Rescaled so that `|a| = 1`.
    pub fn normalized(&self) -> Self {
        let n = self.a.norm();
        Self {
            a: &self.a / n,
            b: self.b / n,
        }
    }

    pub fn slack(&self, x: &Vector) -> f64 {
        self.b - self.a.dot(x)
    }
}

/// Affine flat `point + span(basis)` with an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineFlat {
    pub point: Vector,
    pub basis: Vec<Vector>,
}

impl AffineFlat {
    /// Orthonormalizes `directions` (Gram-Schmidt); rejects dependent input.
    pub fn new(point: Vector, directions: &[Vector]) -> Result<Self> {
        let basis = orthonormalize(directions)
            .ok_or_else(|| GeomError::InvalidInput("flat directions are dependent".into()))?;
        if basis.iter().any(|b| b.len() != point.len()) {
            return Err(GeomError::DimensionMismatch {
                expected: point.len(),
                found: basis.iter().map(|b| b.len()).find(|&l| l != point.len()).unwrap_or(0),
            });
        }
        Ok(Self { point, basis })
    }

    /// The whole space with the standard basis.
    pub fn full(d: usize) -> Self {
        Self {
            point: Vector::zeros(d),
            basis: (0..d).map(|i| Vector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 })).collect(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.point.len()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn to_local(&self, x: &Vector) -> Vector {
        let diff = x - &self.point;
        Vector::from_iterator(self.basis.len(), self.basis.iter().map(|b| b.dot(&diff)))
    }

    pub fn to_ambient(&self, t: &Vector) -> Vector {
        let mut x = self.point.clone();
        for (b, &ti) in self.basis.iter().zip(t.iter()) {
            x.axpy(ti, b, 1.0);
        }
        x
    }

    /// Euclidean distance from `x` to the flat.
    pub fn distance(&self, x: &Vector) -> f64 {
        (x - self.to_ambient(&self.to_local(x))).norm()
    }
}

/// Linear subspace given by an orthonormal basis.
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    pub dim_ambient: usize,
    pub basis: Vec<Vector>,
}

impl Subspace {
    pub fn new(dim_ambient: usize, directions: &[Vector]) -> Result<Self> {
        if directions.iter().any(|v| v.len() != dim_ambient) {
            return Err(GeomError::DimensionMismatch {
                expected: dim_ambient,
                found: directions.iter().map(|v| v.len()).find(|&l| l != dim_ambient).unwrap_or(0),
            });
        }
        let basis = orthonormalize(directions)
            .ok_or_else(|| GeomError::InvalidInput("subspace directions are dependent".into()))?;
        Ok(Self { dim_ambient, basis })
    }

    pub fn zero(d: usize) -> Self {
        Self {
            dim_ambient: d,
            basis: Vec::new(),
        }
    }

    pub fn full(d: usize) -> Self {
        AffineFlat::full(d).into_subspace()
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    /// Orthonormal basis of the orthogonal complement.
    pub fn complement(&self) -> Subspace {
        let d = self.dim_ambient;
        let mut basis = self.basis.clone();
        let k = basis.len();
        for i in 0..d {
            if basis.len() == d {
                break;
            }
            let mut e = Vector::from_fn(d, |r, _| if r == i { 1.0 } else { 0.0 });
            for _ in 0..2 {
                for b in &basis {
                    let c = b.dot(&e);
                    e.axpy(-c, b, 1.0);
                }
            }
            let n = e.norm();
            if n > 1e-6 {
                basis.push(e / n);
            }
        }
        Subspace {
            dim_ambient: d,
            basis: basis.split_off(k),
        }
    }

    pub fn project(&self, x: &Vector) -> Vector {
        let mut p = Vector::zeros(self.dim_ambient);
        for b in &self.basis {
            p.axpy(b.dot(x), b, 1.0);
        }
        p
    }

    /// The flat `offset + self`.
    pub fn flat_through(&self, offset: Vector) -> AffineFlat {
        AffineFlat {
            point: offset,
            basis: self.basis.clone(),
        }
    }
}

impl AffineFlat {
    fn into_subspace(self) -> Subspace {
        Subspace {
            dim_ambient: self.point.len(),
            basis: self.basis,
        }
    }
}

pub(crate) fn orthonormalize(directions: &[Vector]) -> Option<Vec<Vector>> {
    let mut basis: Vec<Vector> = Vec::with_capacity(directions.len());
    for v in directions {
        let scale = v.norm();
        if scale == 0.0 || !scale.is_finite() {
            return None;
        }
        let mut e = v / scale;
        for _ in 0..2 {
            for b in &basis {
                let c = b.dot(&e);
                e.axpy(-c, b, 1.0);
            }
        }
        let n = e.norm();
        if n < 1e-10 {
            return None;
        }
        basis.push(e / n);
    }
    Some(basis)
}

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(GeomError::DimensionMismatch { expected, found })
    }
}
