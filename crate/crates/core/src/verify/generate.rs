//! Seeded random instances: bodies are hulls of 4 to 10 points drawn
//! uniformly from `[-1, 1]^d`; gauges are re-centered at their vertex
//! centroid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::gauge::GaugeBody;
use crate::geometry::{convex_hull, Polytope, Vector};

pub struct InstanceGen {
    rng: ChaCha8Rng,
    dim: usize,
}

impl InstanceGen {
    pub fn new(dim: usize, seed: u64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            dim,
        }
    }

    /// A full-dimensional random polytope.
    pub fn body(&mut self) -> Polytope {
        loop {
            let n = self.rng.gen_range(4..=10).max(self.dim + 1);
            let pts: Vec<Vector> = (0..n)
                .map(|_| Vector::from_fn(self.dim, |_, _| self.rng.gen_range(-1.0..=1.0)))
                .collect();
            let Ok(p) = convex_hull(&pts) else { continue };
            if p.is_full_dimensional() && p.volume() > 1e-3 {
                return p;
            }
        }
    }

    /// A random gauge, translated so its vertex centroid is the origin.
    pub fn gauge(&mut self) -> GaugeBody {
        loop {
            let p = self.body();
            if let Ok((g, _)) = GaugeBody::centered(&p) {
                return g;
            }
        }
    }

    pub fn pair(&mut self) -> (Polytope, GaugeBody) {
        (self.body(), self.gauge())
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..=hi)
    }
}

pub fn random_pair(dim: usize, seed: u64) -> Result<(Polytope, GaugeBody)> {
    Ok(InstanceGen::new(dim, seed).pair())
}
