//! The eight successive-radii families.
//!
//! For `j ∈ 1..=d` and linear subspaces `L`:
//!
//! | name             | value                                         |
//! |------------------|-----------------------------------------------|
//! | `R-pi-sup:j`     | `sup_{dim L = d-j} R(K, C + L)`               |
//! | `R-pi-inf:j`     | `inf_{dim L = d-j} R(K, C + L)`               |
//! | `r-pi-sup:j`     | `sup_{dim L = d-j} r(K + L, C)`               |
//! | `r-pi-inf:j`     | `inf_{dim L = d-j} r(K + L, C)`               |
//! | `R-sigma-sup:j`  | `sup_{dim L = j} sup_x R(K ∩ (x + L), C)`     |
//! | `R-sigma-inf:j`  | `inf_{dim L = j} sup_x R(K ∩ (x + L), C)`     |
//! | `r-sigma-sup:j`  | `sup_{dim L = j} inf_x r(K, C ∩ (x + L))`     |
//! | `r-sigma-inf:j`  | `inf_{dim L = j} inf_x r(K, C ∩ (x + L))`     |
//!
//! `sup` marks the variant written with the mode as a subscript.

mod engine;
pub(crate) mod search;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{GeomError, Result};
use crate::gauge::{circumradius, inradius, GaugeBody, Method, RadiiResult};
use crate::geometry::{check_dim, Polytope, Subspace, Vector};
use crate::linprog::{self, LinearProgram, LpStatus};
use crate::verify::report::Check;

use engine::{Kind, Prepared, Split};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    /// Outer radii `R`.
    Outer,
    /// Inner radii `r`.
    Inner,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Mode {
    Pi,
    Sigma,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Position {
    Sup,
    Inf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Quantity {
    pub family: Family,
    pub mode: Mode,
    pub position: Position,
    pub j: usize,
}

impl Quantity {
    pub fn new(family: Family, mode: Mode, position: Position, j: usize) -> Self {
        Self {
            family,
            mode,
            position,
            j,
        }
    }

    /// All `8·d` quantities in a fixed order.
    pub fn all(d: usize) -> Vec<Quantity> {
        let mut out = Vec::with_capacity(8 * d);
        for family in [Family::Outer, Family::Inner] {
            for mode in [Mode::Pi, Mode::Sigma] {
                for position in [Position::Sup, Position::Inf] {
                    for j in 1..=d {
                        out.push(Quantity::new(family, mode, position, j));
                    }
                }
            }
        }
        out
    }

    /// Dimension of the subspaces `L` the quantity ranges over.
    pub fn subspace_dim(&self, d: usize) -> usize {
        match self.mode {
            Mode::Pi => d - self.j,
            Mode::Sigma => self.j,
        }
    }

    /// Name without the index, e.g. `R-pi-sup`.
    pub fn family_name(&self) -> String {
        let f = match self.family {
            Family::Outer => "R",
            Family::Inner => "r",
        };
        let m = match self.mode {
            Mode::Pi => "pi",
            Mode::Sigma => "sigma",
        };
        let p = match self.position {
            Position::Sup => "sup",
            Position::Inf => "inf",
        };
        format!("{f}-{m}-{p}")
    }

    /// Conventional symbol, e.g. `R_π^1` or `r^σ_2`.
    pub fn symbol(&self) -> String {
        let f = match self.family {
            Family::Outer => "R",
            Family::Inner => "r",
        };
        let m = match self.mode {
            Mode::Pi => "π",
            Mode::Sigma => "σ",
        };
        match self.position {
            Position::Sup => format!("{f}_{m}^{}", self.j),
            Position::Inf => format!("{f}^{m}_{}", self.j),
        }
    }
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.family_name(), self.j)
    }
}

impl FromStr for Quantity {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || GeomError::InvalidInput(format!("quantity `{s}`: expected e.g. `R-pi-sup:1`"));
        let (name, j) = s.split_once(':').ok_or_else(bad)?;
        let j: usize = j.trim().parse().map_err(|_| bad())?;
        let parts: Vec<&str> = name.trim().split('-').collect();
        let [f, m, p] = parts.as_slice() else {
            return Err(bad());
        };
        let family = match *f {
            "R" => Family::Outer,
            "r" => Family::Inner,
            _ => return Err(bad()),
        };
        let mode = match *m {
            "pi" => Mode::Pi,
            "sigma" => Mode::Sigma,
            _ => return Err(bad()),
        };
        let position = match *p {
            "sup" => Position::Sup,
            "inf" => Position::Inf,
            _ => return Err(bad()),
        };
        if j == 0 {
            return Err(GeomError::InvalidInput(format!("quantity `{s}`: index must be at least 1")));
        }
        Ok(Quantity::new(family, mode, position, j))
    }
}

impl Serialize for Quantity {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Grid sizes for the searched paths.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchConfig {
    /// Line directions over a half-turn in the plane.
    pub angles: usize,
    /// Directions on the hemisphere in space.
    pub sphere: usize,
    /// Offset grid points per axis for section searches.
    pub offsets: usize,
    /// Number of grid optima that get refined.
    pub refine: usize,
    /// Use the exact candidate-direction paths where available.
    pub exact_paths: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            angles: 720,
            sphere: 400,
            offsets: 33,
            refine: 8,
            exact_paths: true,
        }
    }
}

impl SearchConfig {
    /// Parses `angles=N,sphere=N,offsets=N,refine=N`; missing keys keep
    /// their defaults.
    pub fn parse(spec: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for item in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = item
                .split_once('=')
                .ok_or_else(|| GeomError::InvalidInput(format!("grid setting `{item}`: expected key=value")))?;
            let n: usize = val
                .trim()
                .parse()
                .ok()
                .filter(|&n| n >= 3)
                .ok_or_else(|| GeomError::InvalidInput(format!("grid setting `{item}`: expected an integer >= 3")))?;
            match key.trim() {
                "angles" => cfg.angles = n,
                "sphere" => cfg.sphere = n,
                "offsets" => cfg.offsets = n,
                "refine" => cfg.refine = n,
                other => return Err(GeomError::InvalidInput(format!("unknown grid setting `{other}`"))),
            }
        }
        Ok(cfg)
    }

    /// Defaults, overridden by the `GAUGEKIT_GRID` environment variable.
    pub fn from_env() -> Result<Self> {
        match std::env::var("GAUGEKIT_GRID") {
            Ok(s) => Self::parse(&s),
            Err(_) => Ok(Self::default()),
        }
    }
}

fn check_space(k: &Polytope, c: &GaugeBody) -> Result<usize> {
    check_dim(c.dim(), k.dim())?;
    let d = k.dim();
    if d == 0 || d > 3 {
        return Err(GeomError::UnsupportedDimension(d));
    }
    Ok(d)
}

/// `R(K, C + L)`, computed as the circumradius of the projections of `K`
/// and `C` onto `L^⊥`. Returns 0 for `L = R^d`.
pub fn cylinder_circumradius(k: &Polytope, c: &GaugeBody, l: &Subspace) -> Result<f64> {
    check_space(k, c)?;
    check_dim(k.dim(), l.dim_ambient)?;
    if k.vertices().len() <= 1 || l.dim() == k.dim() {
        return Ok(0.0);
    }
    let p = Prepared::new(k, c)?;
    let (v, _) = p.eval(Kind::CylOuter, &Split::from_subspace(l), &SearchConfig::default())?;
    Ok(v * p.np.ratio())
}

/// `R(K, C + L)` from the direct LP over a center `x`, per-vertex shifts
/// `t_k ∈ L` and `λ`: minimize `λ` with `a_i·(v_k - x - B t_k) <= λ`.
/// Slower than [`cylinder_circumradius`]; kept as an independent check.
pub fn cylinder_circumradius_lp(k: &Polytope, c: &GaugeBody, l: &Subspace) -> Result<f64> {
    check_dim(c.dim(), k.dim())?;
    if k.vertices().len() <= 1 {
        return Ok(0.0);
    }
    let d = k.dim();
    let m = l.dim();
    let nv = k.vertices().len();
    let n = d + nv * m + 1;
    let mut obj = vec![0.0; n];
    obj[n - 1] = -1.0;
    let mut lp = LinearProgram::new(obj);
    for (kk, v) in k.vertices().iter().enumerate() {
        for a in c.normals() {
            let mut row = vec![0.0; n];
            for i in 0..d {
                row[i] = -a[i];
            }
            for (s, b) in l.basis.iter().enumerate() {
                row[d + kk * m + s] = -a.dot(b);
            }
            row[n - 1] = -1.0;
            lp.push(row, -a.dot(v));
        }
    }
    let sol = linprog::solve(&lp)?;
    match (sol.status, sol.x) {
        (LpStatus::Optimal, Some(x)) => Ok(x[n - 1].max(0.0)),
        _ => Err(GeomError::Numerical("cylinder LP did not reach an optimum".into())),
    }
}

/// `r(K + L, C)`, the inradius of the projections onto `L^⊥`; `+∞` for
/// `L = R^d`. Cross-checked against `1 / R(C, K + L)`.
pub fn cylinder_inradius(k: &Polytope, c: &GaugeBody, l: &Subspace) -> Result<f64> {
    check_space(k, c)?;
    check_dim(k.dim(), l.dim_ambient)?;
    if l.dim() == k.dim() {
        return Ok(f64::INFINITY);
    }
    if !k.is_full_dimensional() {
        return Err(GeomError::DegenerateBody);
    }
    let p = Prepared::new(k, c)?;
    let (v, _) = p.eval(Kind::CylInner, &Split::from_subspace(l), &SearchConfig::default())?;
    let value = v * p.np.ratio();
    let (kg, _) = GaugeBody::centered(k)?;
    let dual = 1.0 / cylinder_circumradius(c.body(), &kg, l)?;
    if (dual - value).abs() > 1e-7 * value.max(1.0) {
        return Err(GeomError::Numerical(format!(
            "cylinder inradius {value} disagrees with 1/R(C, K+L) = {dual}"
        )));
    }
    Ok(value)
}

fn subspace_offset_result(p: &Prepared, found: engine::Found, family: Family, searched: bool) -> RadiiResult {
    let ratio = p.np.ratio();
    let value = found.value * ratio;
    let center = found.point.map(|x| match family {
        Family::Outer => &p.np.k_shift + x * p.np.k_scale,
        Family::Inner => &p.np.c_shift + x * p.np.c_scale,
    });
    RadiiResult {
        value,
        witness_center: center,
        witness_subspace: Some(found.split.subspace(p.d)),
        method: if searched { Method::Searched } else { Method::Exact },
        accuracy: found.accuracy,
    }
}

/// `sup_x R(K ∩ (x + L), C)` over section offsets, with `R(∅, C) = 0`.
pub fn section_circumradius_extremal(k: &Polytope, c: &GaugeBody, l: &Subspace, cfg: &SearchConfig) -> Result<RadiiResult> {
    check_space(k, c)?;
    check_dim(k.dim(), l.dim_ambient)?;
    if l.dim() == 0 || k.vertices().len() <= 1 {
        return Ok(RadiiResult::exact(0.0, None));
    }
    if l.dim() == k.dim() {
        return circumradius(k, c);
    }
    if !k.is_full_dimensional() {
        return Err(GeomError::DegenerateBody);
    }
    let p = Prepared::new(k, c)?;
    let split = Split::from_subspace(l);
    let (v, x) = p.eval(Kind::SecOuter, &split, cfg)?;
    let found = engine::Found {
        value: v,
        split,
        point: x,
        accuracy: 1e-9,
    };
    Ok(subspace_offset_result(&p, found, Family::Outer, true))
}

/// `inf_x r(K, C ∩ (x + L))` over section offsets; empty and single-point
/// sections count as `+∞`.
pub fn section_inradius_extremal(k: &Polytope, c: &GaugeBody, l: &Subspace, cfg: &SearchConfig) -> Result<RadiiResult> {
    check_space(k, c)?;
    check_dim(k.dim(), l.dim_ambient)?;
    if l.dim() == 0 {
        return Ok(RadiiResult::exact(f64::INFINITY, None));
    }
    if l.dim() == k.dim() {
        return inradius(k, c);
    }
    if !k.is_full_dimensional() {
        return Err(GeomError::DegenerateBody);
    }
    let p = Prepared::new(k, c)?;
    let split = Split::from_subspace(l);
    let (v, x) = p.eval(Kind::SecInner, &split, cfg)?;
    let found = engine::Found {
        value: v,
        split,
        point: x,
        accuracy: 1e-9,
    };
    Ok(subspace_offset_result(&p, found, Family::Inner, true))
}

/// Computes one successive radius with grid sizes from `GAUGEKIT_GRID`.
pub fn successive_radius(k: &Polytope, c: &GaugeBody, q: Quantity) -> Result<RadiiResult> {
    successive_radius_with(k, c, q, &SearchConfig::from_env()?)
}

pub fn successive_radius_with(k: &Polytope, c: &GaugeBody, q: Quantity, cfg: &SearchConfig) -> Result<RadiiResult> {
    let d = check_space(k, c)?;
    if q.j == 0 || q.j > d {
        return Err(GeomError::InvalidInput(format!("quantity {q}: index must lie in 1..={d}")));
    }
    if k.is_empty() {
        return match q.family {
            Family::Outer => Ok(RadiiResult::exact(0.0, None)),
            Family::Inner => Err(GeomError::EmptySet),
        };
    }
    if q.j == d {
        return match q.family {
            Family::Outer => circumradius(k, c),
            Family::Inner => inradius(k, c),
        };
    }
    if k.vertices().len() == 1 && q.family == Family::Outer {
        return Ok(RadiiResult::exact(0.0, Some(k.vertices()[0].clone())));
    }
    if !k.is_full_dimensional() && (q.family == Family::Inner || q.mode == Mode::Sigma) {
        return Err(GeomError::DegenerateBody);
    }
    let p = Prepared::new(k, c)?;
    let kind = match (q.family, q.mode) {
        (Family::Outer, Mode::Pi) => Kind::CylOuter,
        (Family::Inner, Mode::Pi) => Kind::CylInner,
        (Family::Outer, Mode::Sigma) => Kind::SecOuter,
        (Family::Inner, Mode::Sigma) => Kind::SecInner,
    };
    let sign = match q.position {
        Position::Sup => 1.0,
        Position::Inf => -1.0,
    };
    let dim_l = q.subspace_dim(d);
    let exact = cfg.exact_paths && q.mode == Mode::Pi && q.j == 1;
    let found = if exact {
        p.hyperplane_candidates(kind, sign, cfg)?
    } else {
        p.search(kind, dim_l, sign, cfg)?
    };
    let ratio = p.np.ratio();
    let value = found.value * ratio;
    let witness_center = match q.mode {
        Mode::Pi => found.point.as_ref().map(|x| p.np.map_center(x, value)),
        Mode::Sigma => found.point.as_ref().map(|x| match q.family {
            Family::Outer => &p.np.k_shift + x * p.np.k_scale,
            Family::Inner => &p.np.c_shift + x * p.np.c_scale,
        }),
    };
    Ok(RadiiResult {
        value,
        witness_center,
        witness_subspace: Some(found.split.subspace(d)),
        method: if exact { Method::Exact } else { Method::Searched },
        accuracy: found.accuracy,
    })
}

/// One row of a profile.
#[derive(Debug, Clone)]
pub struct ProfileEntry {
    pub quantity: Quantity,
    pub result: std::result::Result<RadiiResult, GeomError>,
}

#[derive(Debug, Clone)]
pub struct Profile {
    pub dim: usize,
    pub entries: Vec<ProfileEntry>,
    /// Monotonicity in `j` for each of the eight families.
    pub chains: Vec<Check>,
}

impl Profile {
    pub fn get(&self, name: &str, j: usize) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| e.quantity.family_name() == name && e.quantity.j == j)
            .and_then(|e| e.result.as_ref().ok())
            .map(|r| r.value)
    }
}

/// Relative slack allowed in the monotonicity chains.
pub const CHAIN_SLACK: f64 = 5e-3;

/// Checks `v_1 <= ... <= v_d` (outer) or `v_1 >= ... >= v_d` (inner), each
/// step with relative slack [`CHAIN_SLACK`]. Returns the worst relative
/// violation.
pub fn chain_violation(values: &[f64], family: Family) -> f64 {
    let mut worst = 0.0f64;
    for w in values.windows(2) {
        let (a, b) = match family {
            Family::Outer => (w[0], w[1]),
            Family::Inner => (w[1], w[0]),
        };
        if a.is_infinite() && b.is_infinite() {
            continue;
        }
        let scale = a.abs().max(b.abs()).max(1e-300);
        worst = worst.max((a - b) / scale);
    }
    worst
}

/// All `8·d` quantities plus the eight monotonicity chains.
pub fn full_profile(k: &Polytope, c: &GaugeBody, cfg: &SearchConfig) -> Result<Profile> {
    let d = check_space(k, c)?;
    let entries: Vec<ProfileEntry> = Quantity::all(d)
        .into_iter()
        .map(|q| ProfileEntry {
            quantity: q,
            result: successive_radius_with(k, c, q, cfg),
        })
        .collect();
    let mut chains = Vec::new();
    for chunk in entries.chunks(d) {
        let q = chunk[0].quantity;
        let name = format!("chain.{}", q.family_name());
        let vals: std::result::Result<Vec<f64>, _> =
            chunk.iter().map(|e| e.result.as_ref().map(|r| r.value)).collect();
        chains.push(match vals {
            Ok(v) => Check::at_most(name, chain_violation(&v, q.family), 0.0, CHAIN_SLACK),
            Err(e) => Check::failed(name, e.to_string()),
        });
    }
    Ok(Profile { dim: d, entries, chains })
}

/// Vector helper for callers building subspaces from a direction.
pub fn line_through(dir: &Vector) -> Result<Subspace> {
    Subspace::new(dir.len(), std::slice::from_ref(dir))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::{convex_hull, vector};

    fn unit_box() -> GaugeBody {
        GaugeBody::new(Polytope::cuboid(&[-1.0, -1.0], &[1.0, 1.0]).unwrap()).unwrap()
    }

    fn square() -> Polytope {
        Polytope::cuboid(&[0.0, 0.0], &[1.0, 1.0]).unwrap()
    }

    #[test]
    fn names_round_trip() {
        for q in Quantity::all(3) {
            assert_eq!(q.to_string().parse::<Quantity>().unwrap(), q);
        }
        assert!("R-pi-mid:1".parse::<Quantity>().is_err());
        assert!("R-pi-sup:0".parse::<Quantity>().is_err());
        assert_eq!("r-sigma-sup:1".parse::<Quantity>().unwrap().symbol(), "r_σ^1");
    }

    #[test]
    fn grid_setting_parse() {
        let cfg = SearchConfig::parse("angles=90, offsets=9").unwrap();
        assert_eq!((cfg.angles, cfg.sphere, cfg.offsets), (90, 400, 9));
        assert!(SearchConfig::parse("angles=1").is_err());
        assert!(SearchConfig::parse("grid=5").is_err());
    }

    #[test]
    fn cylinder_collapses() {
        let k = square();
        let c = unit_box();
        assert_eq!(cylinder_circumradius(&k, &c, &Subspace::full(2)).unwrap(), 0.0);
        let r0 = cylinder_circumradius(&k, &c, &Subspace::zero(2)).unwrap();
        assert!((r0 - 0.5).abs() < 1e-12);
        assert_eq!(cylinder_inradius(&k, &c, &Subspace::full(2)).unwrap(), f64::INFINITY);
    }

    #[test]
    fn cylinder_projection_matches_lp() {
        let k = convex_hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap();
        let c = GaugeBody::new(convex_hull(&[vector(&[-1.0, -1.0]), vector(&[1.0, 0.0]), vector(&[0.0, 1.0])]).unwrap())
            .unwrap();
        for i in 0..12 {
            let th = 0.26 * i as f64;
            let l = line_through(&vector(&[th.cos(), th.sin()])).unwrap();
            let a = cylinder_circumradius(&k, &c, &l).unwrap();
            let b = cylinder_circumradius_lp(&k, &c, &l).unwrap();
            assert!((a - b).abs() < 1e-9, "{th}: {a} vs {b}");
        }
    }

    #[test]
    fn box_sections() {
        let l = line_through(&vector(&[1.0, 0.0])).unwrap();
        let r = section_circumradius_extremal(&square(), &unit_box(), &l, &SearchConfig::default()).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9);
    }

    #[test]
    fn square_profile_is_constant() {
        let p = full_profile(&square(), &unit_box(), &SearchConfig::default()).unwrap();
        for e in &p.entries {
            let v = e.result.as_ref().unwrap().value;
            assert!((v - 0.5).abs() < 1e-6, "{}: {v}", e.quantity);
        }
        assert!(p.chains.iter().all(|c| c.passed()));
    }

    #[test]
    fn interval_collapse() {
        let c = GaugeBody::new(Polytope::cuboid(&[-1.0], &[2.0]).unwrap()).unwrap();
        let k = Polytope::cuboid(&[0.0], &[1.0]).unwrap();
        let q: Quantity = "R-pi-sup:1".parse().unwrap();
        let v = successive_radius_with(&k, &c, q, &SearchConfig::default()).unwrap().value;
        assert!((v - 1.0 / 3.0).abs() < 1e-12);
    }
}
