//! The identity-check runner.
//!
//! Every check name is classified by `manifest.json`; checks marked `info`
//! are reported but never count as failures.

use std::sync::OnceLock;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Deserialize;

use super::oracle::{containment_bisect, dense_support_ratio_2d, dense_support_ratio_3d, gamma_bisect, oracle_circumradius};
use super::report::{Check, Status, VerifyReport};
use crate::ball::{ball_intersect, verify_ball_algebra};
use crate::error::{GeomError, Result};
use crate::gauge::{
    circumcenter_set, circumradius, diameter, difference_body, difference_gauge, gamma, incenter_set, inradius, width,
    GaugeBody, Method, RadiiResult,
};
use crate::geometry::{convex_hull, Polytope, Vector};
use crate::radii::{full_profile, successive_radius_with, Family, Mode, Position, Profile, Quantity, SearchConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Hard,
    Info,
}

#[derive(Debug, Clone, Deserialize)]
pub struct ManifestEntry {
    pub pattern: String,
    pub severity: Severity,
    pub identity: String,
}

impl ManifestEntry {
    fn matches(&self, name: &str) -> bool {
        match self.pattern.strip_suffix('*') {
            Some(prefix) => name.starts_with(prefix),
            None => name == self.pattern,
        }
    }
}

/// The check manifest, in report order.
pub fn manifest() -> &'static [ManifestEntry] {
    static M: OnceLock<Vec<ManifestEntry>> = OnceLock::new();
    M.get_or_init(|| serde_json::from_str(include_str!("manifest.json")).expect("manifest.json is valid"))
}

/// The manifest entry governing a check name.
pub fn classify(name: &str) -> Option<&'static ManifestEntry> {
    manifest().iter().find(|e| e.matches(name))
}

/// Runs every identity check on `(K, C)` with the default search grid.
pub fn run_verify(k: &Polytope, c: &GaugeBody, seed: u64) -> VerifyReport {
    run_verify_with(k, c, seed, &SearchConfig::default())
}

pub fn run_verify_with(k: &Polytope, c: &GaugeBody, seed: u64, cfg: &SearchConfig) -> VerifyReport {
    let mut checks = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut runner = Runner {
        k,
        c,
        cfg,
        rng: &mut rng,
        out: &mut checks,
    };
    if let Err(e) = runner.run() {
        checks.push(Check::failed("runner", e.to_string()));
    }
    for ch in &mut checks {
        match classify(&ch.name) {
            Some(entry) if entry.severity == Severity::Info && ch.status != Status::Info => {
                let verdict = if ch.status == Status::Fail { "differs" } else { "agrees" };
                ch.status = Status::Info;
                ch.note = if ch.note.is_empty() { verdict.to_string() } else { format!("{verdict}; {}", ch.note) };
            }
            Some(_) => {}
            None => {
                ch.status = Status::Fail;
                ch.note = format!("check missing from manifest; {}", ch.note);
            }
        }
    }
    // Report order follows the manifest.
    checks.sort_by_key(|ch| manifest().iter().position(|e| e.matches(&ch.name)).unwrap_or(usize::MAX));
    VerifyReport {
        instance_id: instance_id(k, c),
        seed,
        checks,
    }
}

/// Stable identifier derived from the vertex coordinates.
pub fn instance_id(k: &Polytope, c: &GaugeBody) -> String {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for v in k.vertices().iter().chain(c.body().vertices()) {
        for x in v.iter() {
            for b in x.to_bits().to_le_bytes() {
                h ^= b as u64;
                h = h.wrapping_mul(0x100_0000_01b3);
            }
        }
    }
    format!("d{}-k{}-c{}-{:016x}", k.dim(), k.vertices().len(), c.body().vertices().len(), h)
}

struct Runner<'a> {
    k: &'a Polytope,
    c: &'a GaugeBody,
    cfg: &'a SearchConfig,
    rng: &'a mut ChaCha8Rng,
    out: &'a mut Vec<Check>,
}

fn scaled(tol: f64, v: f64) -> f64 {
    tol * v.abs().max(1.0)
}

/// Tolerance for comparing two results of the same quantity.
fn pair_tol(a: &RadiiResult, b: &RadiiResult, exact: f64, searched: f64) -> f64 {
    let t = if a.method == Method::Exact && b.method == Method::Exact {
        exact
    } else {
        searched
    };
    scaled(t, a.value.max(b.value))
}

fn same(name: String, a: &Result<RadiiResult>, b: &Result<RadiiResult>, exact: f64, searched: f64) -> Check {
    match (a, b) {
        (Ok(a), Ok(b)) => Check::close(name, a.value, b.value, pair_tol(a, b, exact, searched)),
        (Err(e), _) | (_, Err(e)) => Check::failed(name, e.to_string()),
    }
}

fn entry(p: &Profile, q: Quantity) -> Result<&RadiiResult> {
    let e = p.entries.iter().find(|e| e.quantity == q).expect("profile covers all quantities");
    e.result.as_ref().map_err(Clone::clone)
}

impl Runner<'_> {
    fn push(&mut self, c: Check) {
        self.out.push(c);
    }

    fn skip(&mut self, name: impl Into<String>, why: &str) {
        let mut ch = Check::with(name, f64::NAN, f64::NAN, 0.0, true).note(format!("skipped: {why}"));
        ch.status = Status::Info;
        self.push(ch);
    }

    fn random_point(&mut self, spread: f64) -> Vector {
        let d = self.k.dim();
        let centroid = self.k.vertex_centroid().expect("nonempty");
        let r = self.k.euclidean_diameter().max(1e-3) * spread;
        Vector::from_fn(d, |i, _| centroid[i] + self.rng.gen_range(-r..=r))
    }

    fn run(&mut self) -> Result<()> {
        if self.k.is_empty() {
            return Err(GeomError::EmptySet);
        }
        let full = self.k.is_full_dimensional();
        self.base_metrics(full)?;
        self.ball()?;
        self.symmetry(full)?;
        let profile = full_profile(self.k, self.c, self.cfg)?;
        self.collapses(&profile, full)?;
        for ch in &profile.chains {
            if !full && (ch.name.starts_with("chain.r") || ch.name.starts_with("chain.R-sigma")) {
                self.skip(ch.name.clone(), "K is not full-dimensional");
            } else {
                self.push(ch.clone());
            }
        }
        if full {
            self.duality(&profile)?;
        } else {
            self.skip("duality.pi.all", "K is not full-dimensional");
        }
        self.invariance(&profile, full)?;
        Ok(())
    }

    fn base_metrics(&mut self, full: bool) -> Result<()> {
        let (k, c) = (self.k, self.c);
        let mut worst = (0.0f64, 0.0f64);
        for _ in 0..5 {
            let x = self.random_point(1.0) - self.k.vertex_centroid().expect("nonempty");
            let (a, b) = (gamma(c, &x)?, gamma_bisect(c, &x));
            if (a - b).abs() / a.max(1.0) >= worst.0 {
                worst = ((a - b).abs() / a.max(1.0), a);
            }
        }
        self.push(Check::at_most("gamma.bisection", worst.0, 0.0, 1e-8).note(format!("at gamma = {:.6}", worst.1)));

        let mut worst = 0.0f64;
        for _ in 0..5 {
            let x = self.random_point(0.5);
            let direct = k.vertices().iter().map(|v| c.gamma(&(v - &x))).fold(0.0, f64::max);
            worst = worst.max((containment_bisect(k, c, &x) - direct).abs() / direct.max(1.0));
        }
        self.push(Check::at_most("minimax.containment", worst, 0.0, 1e-8));

        let big_r = circumradius(k, c)?;
        let r_val = big_r.value;
        if k.dim() <= 3 {
            self.push(Check::close("minimax.oracle", r_val, oracle_circumradius(k, c), 1e-4));
        }

        let (mut lo, mut hi) = (0.0, r_val.max(1e-12) * 2.0 + 1e-9);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ball_intersect(k, c, mid)?.is_empty() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        self.push(Check::close("bi.bisection", hi, r_val, scaled(1e-6, r_val)));

        let cc = circumcenter_set(k, c)?;
        let tol = scaled(1e-7, r_val);
        let cover = cc
            .vertices()
            .iter()
            .map(|x| k.vertices().iter().map(|v| c.gamma(&(v - x))).fold(0.0, f64::max) - r_val)
            .fold(0.0, f64::max);
        let lp_in = big_r.witness_center.as_ref().map_or(f64::INFINITY, |w| cc.distance_to(w));
        self.push(Check::at_most("cc.optimal", cover.max(lp_in), 0.0, tol));
        let dim = cc.affine_dim()?;
        self.push(Check::at_most("cc.dim", dim as f64, (k.dim() - 1) as f64, 0.0));

        if !full {
            for name in ["duality.R_r", "ic.identity", "ic.lp_center"] {
                self.skip(name, "K is not full-dimensional");
            }
            return Ok(());
        }
        let small_r = inradius(k, c)?;
        let (kg, _) = GaugeBody::centered(k)?;
        let back = circumradius(c.body(), &kg)?.value;
        self.push(Check::close("duality.R_r", small_r.value * back, 1.0, 1e-8));

        let ic = incenter_set(k, c)?;
        let tol = scaled(1e-7, k.euclidean_diameter());
        let mut viol = 0.0f64;
        for y in ic.vertices() {
            for w in c.body().vertices() {
                viol = viol.max(k.distance_to(&(y + w * small_r.value)));
            }
        }
        self.push(Check::at_most("ic.identity", viol, 0.0, tol));
        let lp_in = small_r.witness_center.as_ref().map_or(f64::INFINITY, |w| ic.distance_to(w));
        self.push(Check::at_most("ic.lp_center", lp_in, 0.0, tol));
        Ok(())
    }

    fn ball(&mut self) -> Result<()> {
        let r = circumradius(self.k, self.c)?.value;
        let lambda = r * self.rng.gen_range(1.0..=2.0) + 1e-3;
        match verify_ball_algebra(self.k, self.c, lambda) {
            Ok(list) => {
                for ch in list {
                    self.push(ch.note(format!("lambda = {lambda:.6}")));
                }
            }
            Err(e) => self.push(Check::failed("ball.algebra", e.to_string())),
        }
        Ok(())
    }

    fn symmetry(&mut self, full: bool) -> Result<()> {
        let d = self.k.dim();
        let t = Vector::from_fn(d, |_, _| self.rng.gen_range(-1.0..=1.0));
        let ks = difference_body(self.k)?.scale(0.5).translate(&t);
        let cs = difference_gauge(self.c)?;
        let mirror = |p: &Polytope| p.reflect().translate(&(&t * 2.0));
        let tol = scaled(1e-9, ks.euclidean_diameter());
        let cc = circumcenter_set(&ks, &cs)?;
        self.push(Check::at_most("symmetry.cc", cc.hausdorff(&mirror(&cc)), 0.0, tol));
        if full {
            let ic = incenter_set(&ks, &cs)?;
            self.push(Check::at_most("symmetry.ic", ic.hausdorff(&mirror(&ic)), 0.0, tol));
        } else {
            self.skip("symmetry.ic", "K is not full-dimensional");
        }
        Ok(())
    }

    fn collapses(&mut self, p: &Profile, full: bool) -> Result<()> {
        let (k, c) = (self.k, self.c);
        let d = k.dim();
        let big_r = circumradius(k, c)?;
        let small_r = if full { Some(inradius(k, c)?) } else { None };
        for q in Quantity::all(d).into_iter().filter(|q| q.j == d) {
            let name = format!("collapse.top.{}", q.family_name());
            let want = match q.family {
                Family::Outer => &big_r,
                Family::Inner => match &small_r {
                    Some(r) => r,
                    None => {
                        self.skip(name, "K is not full-dimensional");
                        continue;
                    }
                },
            };
            self.push(same(name, &entry(p, q).cloned(), &Ok(want.clone()), 1e-8, 1e-8));
        }

        let half_d = 0.5 * diameter(k, c)?;
        let half_w = 0.5 * width(k, c)?;
        let bottom = |pos: Position| {
            let mut v = vec![
                Quantity::new(Family::Outer, Mode::Pi, pos, 1),
                Quantity::new(Family::Outer, Mode::Sigma, pos, 1),
                Quantity::new(Family::Inner, Mode::Sigma, pos, 1),
            ];
            if pos == Position::Inf {
                v.push(Quantity::new(Family::Inner, Mode::Pi, pos, 1));
            }
            v
        };
        for (pos, label, want) in [(Position::Sup, "sup", half_d), (Position::Inf, "inf", half_w)] {
            for q in bottom(pos) {
                let name = format!("collapse.bottom.{label}.{}", q.family_name());
                if !full && (q.family == Family::Inner || q.mode == Mode::Sigma) {
                    self.skip(name, "K is not full-dimensional");
                    continue;
                }
                self.push(match entry(p, q) {
                    Ok(r) => {
                        let t = if r.method == Method::Exact { 1e-8 } else { 5e-3 };
                        Check::close(name, r.value, want, t * r.value.abs().max(want.abs()).max(half_d))
                            .note(format!("{:?}", r.method).to_lowercase())
                    }
                    Err(e) => Check::failed(name, e.to_string()),
                });
            }
        }

        let q = Quantity::new(Family::Inner, Mode::Pi, Position::Sup, 1);
        if !full {
            self.skip("closed_form.r-pi-sup", "K is not full-dimensional");
            self.skip("open.r-pi-sup_vs_half_diameter", "K is not full-dimensional");
            return Ok(());
        }
        match entry(p, q) {
            Ok(r) => {
                let scan = match d {
                    2 => Some(dense_support_ratio_2d(k, c, 100_000, true)),
                    3 => Some(dense_support_ratio_3d(k, c, 20_000, true)),
                    _ => None,
                };
                if let Some(scan) = scan {
                    self.push(Check::close("closed_form.r-pi-sup", r.value, scan, scaled(1e-4, scan)));
                }
                self.push(Check::close("open.r-pi-sup_vs_half_diameter", r.value, half_d, scaled(1e-6, half_d)));
            }
            Err(e) => self.push(Check::failed("closed_form.r-pi-sup", e.to_string())),
        }
        Ok(())
    }

    fn duality(&mut self, p: &Profile) -> Result<()> {
        let d = self.k.dim();
        let (kg, _) = GaugeBody::centered(self.k)?;
        let swapped = |pos: Position, j: usize| successive_radius_with(self.c.body(), &kg, Quantity::new(Family::Outer, Mode::Pi, pos, j), self.cfg);
        for j in 1..=d {
            for (pos, other, label) in [(Position::Sup, Position::Inf, "sup"), (Position::Inf, Position::Sup, "inf")] {
                let name = format!("duality.pi.{label}:{j}");
                let mine = entry(p, Quantity::new(Family::Inner, Mode::Pi, pos, j));
                self.push(match (mine, swapped(other, j)) {
                    (Ok(a), Ok(b)) => Check::close(name, a.value * b.value, 1.0, 1e-6),
                    (Err(e), _) | (_, Err(e)) => Check::failed(name, e.to_string()),
                });
            }
        }
        Ok(())
    }

    fn invariance(&mut self, p: &Profile, full: bool) -> Result<()> {
        let (k, c) = (self.k, self.c);
        let d = k.dim();

        // Translate K anywhere; translate C while keeping the origin interior.
        let t = Vector::from_fn(d, |_, _| self.rng.gen_range(-2.0..=2.0));
        let s = -c.body().vertices().choose(self.rng).expect("nonempty") * 0.5;
        let kt = k.translate(&t);
        let ct = GaugeBody::new(c.body().translate(&s))?;
        self.compare("translation", p, &kt, &ct, 1.0, full, 1e-9, 1e-4)?;

        let a = self.rng.gen_range(0.5..=2.0);
        let b = self.rng.gen_range(0.5..=2.0);
        self.compare("scaling", p, &k.scale(a), &c.scaled(b)?, a / b, full, 1e-6, 1e-6)?;

        // Hull: interior points do not change anything.
        let mut pts = k.vertices().to_vec();
        let centroid = k.vertex_centroid().expect("nonempty");
        pts.extend(k.vertices().iter().map(|v| (v + &centroid) * 0.5));
        let hull = convex_hull(&pts)?;
        let (r0, r1) = (circumradius(k, c)?.value, circumradius(&hull, c)?.value);
        self.push(Check::close("invariance.hull", r1, r0, scaled(1e-12, r0)).note(format!("{} points", pts.len())));

        // Monotonicity: shrink K by dropping a vertex, grow C by pushing one out.
        let sub = if k.vertices().len() > d + 1 {
            convex_hull(&k.vertices()[1..])?
        } else {
            k.scale(0.5).translate(&(&centroid * 0.5))
        };
        let mut cpts = c.body().vertices().to_vec();
        cpts.push(&cpts[0] * 1.5);
        let grown = GaugeBody::new(convex_hull(&cpts)?)?;
        let metrics: [(&str, fn(&Polytope, &GaugeBody) -> Result<f64>); 4] = [
            ("R", |k, c| circumradius(k, c).map(|r| r.value)),
            ("r", |k, c| inradius(k, c).map(|r| r.value)),
            ("diameter", diameter),
            ("width", width),
        ];
        for (label, f) in metrics {
            let name = format!("invariance.monotone.{label}");
            if label == "r" && !(full && sub.is_full_dimensional()) {
                self.skip(name, "K is not full-dimensional");
                continue;
            }
            let (small, big) = (f(&sub, &grown)?, f(k, c)?);
            self.push(Check::at_most(name, small, big, scaled(1e-9, big)));
        }
        Ok(())
    }

    /// `f(K', C') = factor · f(K, C)` for R, r, D, ω and every profile entry.
    #[allow(clippy::too_many_arguments)]
    fn compare(
        &mut self,
        label: &str,
        p: &Profile,
        k2: &Polytope,
        c2: &GaugeBody,
        factor: f64,
        full: bool,
        exact: f64,
        searched: f64,
    ) -> Result<()> {
        let (k, c) = (self.k, self.c);
        let mut base = vec![
            ("R", circumradius(k, c)?.value, circumradius(k2, c2)?.value),
            ("diameter", diameter(k, c)?, diameter(k2, c2)?),
            ("width", width(k, c)?, width(k2, c2)?),
        ];
        if full {
            base.push(("r", inradius(k, c)?.value, inradius(k2, c2)?.value));
        }
        for (name, v, w) in base {
            let want = factor * v;
            self.push(Check::close(format!("invariance.{label}.{name}"), w, want, scaled(exact, want)));
        }
        let p2 = full_profile(k2, c2, self.cfg)?;
        for e in &p.entries {
            let name = format!("invariance.{label}.{}", e.quantity);
            let other = entry(&p2, e.quantity);
            match (&e.result, other) {
                (Ok(a), Ok(b)) => {
                    let want = factor * a.value;
                    let tol = if a.method == Method::Exact && b.method == Method::Exact { exact } else { searched };
                    self.push(Check::close(name, b.value, want, scaled(tol, want)));
                }
                (Err(GeomError::DegenerateBody), _) if !full => self.skip(name, "K is not full-dimensional"),
                (Err(e), _) => self.push(Check::failed(name, e.to_string())),
                (_, Err(e)) => self.push(Check::failed(name, e.to_string())),
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::vector;

    #[test]
    fn manifest_parses_with_one_info_entry() {
        let m = manifest();
        assert!(m.len() >= 20);
        assert_eq!(m.iter().filter(|e| e.severity == Severity::Info).count(), 1);
    }

    #[test]
    fn homothetic_pair_passes() {
        let c = GaugeBody::new(convex_hull(&[vector(&[-1.0, -1.0]), vector(&[2.0, -1.0]), vector(&[-1.0, 2.0])]).unwrap())
            .unwrap();
        let k = c.body().scale(0.7).translate(&vector(&[0.3, -0.2]));
        let report = run_verify(&k, &c, 7);
        let bad: Vec<_> = report.hard_failures().collect();
        assert!(bad.is_empty(), "{}", report.to_table());
        assert!(report.checks.len() >= 25);
        for ch in &report.checks {
            assert!(classify(&ch.name).is_some(), "{}", ch.name);
        }
    }
}
