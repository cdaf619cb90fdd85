//! End-to-end acceptance run. Prints one PASS/FAIL line per criterion and
//! exits non-zero if any criterion fails.

use std::f64::consts::PI;
use std::time::Instant;

use gaugekit::ball::{ball_intersect, verify_ball_algebra};
use gaugekit::gauge::{
    circumcenter_set, circumradius, diameter, difference_body, difference_gauge, incenter_set, inradius, width,
};
use gaugekit::geometry::json::polytope_from_json;
use gaugekit::geometry::{convex_hull, orthogonal_project};
use gaugekit::radii::{
    full_profile, successive_radius_with, Family, Mode, Position, Profile, Quantity, SearchConfig,
};
use gaugekit::verify::generate::{random_pair, InstanceGen};
use gaugekit::verify::oracle::{dense_diameter_2d, dense_support_ratio_2d, dense_support_ratio_3d, dense_width_2d};
use gaugekit::verify::oracle_circumradius;
use gaugekit::{vector, GaugeBody, Method, Polytope, Subspace, Vector};

/// Worst observed deviation against its tolerance, plus a failure log.
#[derive(Default)]
struct Tally {
    count: usize,
    worst: f64,
    worst_tol: f64,
    failures: Vec<String>,
}

impl Tally {
    /// Records `|got - want| <= tol`, tracking the worst ratio of deviation to tolerance.
    fn close(&mut self, what: impl std::fmt::Display, got: f64, want: f64, tol: f64) {
        self.count += 1;
        let dev = if got == want { 0.0 } else { (got - want).abs() };
        if dev / tol >= self.worst / self.worst_tol.max(f64::MIN_POSITIVE) {
            self.worst = dev;
            self.worst_tol = tol;
        }
        if dev.is_nan() || dev > tol {
            self.failures.push(format!("{what}: got {got:.12}, want {want:.12}, tol {tol:.1e}"));
        }
    }

    fn holds(&mut self, what: impl std::fmt::Display, ok: bool, note: String) {
        self.count += 1;
        if !ok {
            self.failures.push(format!("{what}: {note}"));
        }
    }

    fn fail(&mut self, what: impl std::fmt::Display, err: impl std::fmt::Display) {
        self.count += 1;
        self.failures.push(format!("{what}: {err}"));
    }

    fn summary(&self) -> String {
        let mut s = format!("{} checks", self.count);
        if self.worst_tol > 0.0 {
            s += &format!(", worst deviation {:.2e} (tol {:.1e})", self.worst, self.worst_tol);
        }
        if !self.failures.is_empty() {
            s += &format!(", {} failed; first: {}", self.failures.len(), self.failures[0]);
        }
        s
    }
}

fn rel(tol: f64, v: f64) -> f64 {
    tol * v.abs().max(1.0)
}

fn q(family: Family, mode: Mode, position: Position, j: usize) -> Quantity {
    Quantity::new(family, mode, position, j)
}

fn value(p: &Profile, qq: Quantity) -> Result<(f64, Method), String> {
    let e = p.entries.iter().find(|e| e.quantity == qq).expect("profile has every quantity");
    e.result.as_ref().map(|r| (r.value, r.method)).map_err(|e| e.to_string())
}

fn boxed(d: usize, h: f64) -> Polytope {
    Polytope::cuboid(&vec![-h; d], &vec![h; d]).unwrap()
}

fn slanted_cylinder() -> GaugeBody {
    let mut pts = Vec::new();
    for i in 0..64 {
        let a = 2.0 * PI * i as f64 / 64.0;
        for s in [-1.0, 1.0] {
            pts.push(vector(&[a.cos() + s, a.sin(), s]));
        }
    }
    GaugeBody::new(convex_hull(&pts).unwrap()).unwrap()
}

fn fixture(name: &str) -> Polytope {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    polytope_from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Named (K, C) pairs used as fixtures for the oracle comparison.
fn fixtures() -> Vec<(&'static str, Polytope, GaugeBody)> {
    let pentagon = GaugeBody::new(fixture("pentagon.json")).unwrap();
    let cyl = slanted_cylinder();
    let floor = Subspace::new(3, &[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])]).unwrap();
    let stadium = orthogonal_project(cyl.body(), &floor).unwrap();
    vec![
        ("box-in-box 2d", boxed(2, 0.5), GaugeBody::new(boxed(2, 1.0)).unwrap()),
        ("box-in-box 3d", boxed(3, 0.5), GaugeBody::new(boxed(3, 1.0)).unwrap()),
        ("triangle/pentagon", fixture("triangle.json"), pentagon.clone()),
        ("shifted triangle/pentagon", fixture("triangle_wide.json"), pentagon),
        (
            "segment/square",
            convex_hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap(),
            GaugeBody::new(boxed(2, 1.0)).unwrap(),
        ),
        ("stadium/slanted cylinder", stadium, cyl),
    ]
}

fn projected_cylinder() -> Tally {
    let mut t = Tally::default();
    let start = Instant::now();
    let c = slanted_cylinder();
    let floor = Subspace::new(3, &[vector(&[1.0, 0.0, 0.0]), vector(&[0.0, 1.0, 0.0])]).unwrap();
    let k = orthogonal_project(c.body(), &floor).unwrap();
    match circumradius(&k, &c) {
        Ok(r) => t.close("R(K, C)", r.value, 2.0, 0.05),
        Err(e) => t.fail("R(K, C)", e),
    }
    // The projection is a planar body; measure it against itself inside the plane.
    let planar: Vec<Vector> = k.vertices().iter().map(|v| vector(&[v[0], v[1]])).collect();
    let k2 = convex_hull(&planar).unwrap();
    match GaugeBody::new(k2.clone()).and_then(|pc| circumradius(&k2, &pc)) {
        Ok(r) => t.close("R(K, Proj C)", r.value, 1.0, 1e-9),
        Err(e) => t.fail("R(K, Proj C)", e),
    }
    let secs = start.elapsed().as_secs_f64();
    t.holds("runtime", secs < 10.0, format!("{secs:.2} s"));
    t
}

fn duality() -> Tally {
    let mut t = Tally::default();
    let cfg = SearchConfig::default();
    let pairs = (0..50).map(|s| (2, s)).chain((0..10).map(|s| (3, s)));
    for (d, seed) in pairs {
        let (k, c) = random_pair(d, 2000 + seed).unwrap();
        let tag = format!("d={d} seed={seed}");
        let (kg, _) = GaugeBody::centered(&k).unwrap();
        match (inradius(&k, &c), circumradius(c.body(), &kg)) {
            (Ok(a), Ok(b)) => t.close(format!("{tag} r·R"), a.value * b.value, 1.0, 1e-8),
            (Err(e), _) | (_, Err(e)) => t.fail(&tag, e),
        }
        for j in 1..=d {
            for (mine, theirs) in [(Position::Sup, Position::Inf), (Position::Inf, Position::Sup)] {
                let a = successive_radius_with(&k, &c, q(Family::Inner, Mode::Pi, mine, j), &cfg);
                let b = successive_radius_with(c.body(), &kg, q(Family::Outer, Mode::Pi, theirs, j), &cfg);
                match (a, b) {
                    (Ok(a), Ok(b)) => t.close(format!("{tag} pi {mine:?} j={j}"), a.value * b.value, 1.0, 1e-6),
                    (Err(e), _) | (_, Err(e)) => t.fail(&tag, e),
                }
            }
        }
    }
    t
}

fn chains(profiles: &[(usize, u64, Profile)]) -> Tally {
    let mut t = Tally::default();
    for (d, seed, p) in profiles {
        for ch in &p.chains {
            t.holds(format!("d={d} seed={seed} {}", ch.name), ch.passed(), format!("violation {:.3e}", ch.lhs));
        }
    }
    t
}

fn collapses(pairs: &[(Polytope, GaugeBody)], profiles: &[(usize, u64, Profile)]) -> Tally {
    let mut t = Tally::default();
    for ((k, c), (d, seed, p)) in pairs.iter().zip(profiles) {
        let d = *d;
        let tag = format!("d={d} seed={seed}");
        let (big_r, small_r) = (circumradius(k, c).unwrap().value, inradius(k, c).unwrap().value);
        for pos in [Position::Sup, Position::Inf] {
            for mode in [Mode::Pi, Mode::Sigma] {
                for (fam, want) in [(Family::Outer, big_r), (Family::Inner, small_r)] {
                    let qq = q(fam, mode, pos, d);
                    match value(p, qq) {
                        Ok((v, _)) => t.close(format!("{tag} {qq}"), v, want, rel(1e-8, want)),
                        Err(e) => t.fail(format!("{tag} {qq}"), e),
                    }
                }
            }
        }
        // Bottom of the chains: one common value per position.
        let groups = [
            (
                Position::Inf,
                vec![(Family::Outer, Mode::Pi), (Family::Outer, Mode::Sigma), (Family::Inner, Mode::Pi), (Family::Inner, Mode::Sigma)],
            ),
            (Position::Sup, vec![(Family::Outer, Mode::Pi), (Family::Outer, Mode::Sigma), (Family::Inner, Mode::Sigma)]),
        ];
        for (pos, members) in groups {
            let vals: Vec<(Quantity, f64, Method)> = members
                .iter()
                .filter_map(|&(f, m)| {
                    let qq = q(f, m, pos, 1);
                    value(p, qq).ok().map(|(v, me)| (qq, v, me))
                })
                .collect();
            if vals.len() != members.len() {
                t.fail(format!("{tag} j=1 {pos:?}"), "missing entry");
                continue;
            }
            let (q0, v0, m0) = vals[0];
            for &(qq, v, m) in &vals[1..] {
                let tol = if m == Method::Exact && m0 == Method::Exact { 1e-8 } else { 5e-3 };
                t.close(format!("{tag} {qq} vs {q0}"), v, v0, tol * v0.abs().max(v.abs()));
            }
        }
        match value(p, q(Family::Inner, Mode::Pi, Position::Sup, 1)) {
            Ok((v, _)) => {
                let scan = if d == 2 {
                    dense_support_ratio_2d(k, c, 100_000, true)
                } else {
                    dense_support_ratio_3d(k, c, 20_000, true)
                };
                t.close(format!("{tag} r-pi-sup:1 closed form"), v, scan, rel(1e-4, scan));
            }
            Err(e) => t.fail(&tag, e),
        }
    }
    t
}

fn ball_algebra() -> Tally {
    let mut t = Tally::default();
    for i in 0..50u64 {
        let d = if i < 35 { 2 } else { 3 };
        let mut g = InstanceGen::new(d, 5000 + i);
        let (k, c) = g.pair();
        let r = circumradius(&k, &c).unwrap().value;
        let lambda = r * g.uniform(1.0, 2.0) + 1e-3;
        let tag = format!("d={d} seed={i} lambda={lambda:.4}");
        match verify_ball_algebra(&k, &c, lambda) {
            Ok(list) => {
                for ch in list {
                    t.holds(format!("{tag} {}", ch.name), ch.passed(), format!("violation {:.3e}", ch.lhs));
                }
            }
            Err(e) => t.fail(&tag, e),
        }
        // R is the smallest λ for which the ball intersection is nonempty.
        let (mut lo, mut hi) = (0.0, 2.0 * r + 1e-9);
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if ball_intersect(&k, &c, mid).unwrap().is_empty() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        t.close(format!("{tag} bisection"), hi, r, rel(1e-6, r));
    }
    t
}

fn circumcenter_dim() -> Tally {
    let mut t = Tally::default();
    for i in 0..200u64 {
        let d = if i < 140 { 2 } else { 3 };
        let (k, c) = random_pair(d, 7000 + i).unwrap();
        match circumcenter_set(&k, &c).and_then(|cc| cc.affine_dim()) {
            Ok(dim) => t.holds(format!("d={d} seed={i}"), dim < d, format!("affine dim {dim}")),
            Err(e) => t.fail(format!("d={d} seed={i}"), e),
        }
    }
    let seg = convex_hull(&[vector(&[0.0, 0.0]), vector(&[1.0, 0.0])]).unwrap();
    let sq = GaugeBody::new(boxed(2, 1.0)).unwrap();
    match circumcenter_set(&seg, &sq).and_then(|cc| cc.affine_dim()) {
        Ok(dim) => t.holds("segment fixture", dim == 1, format!("affine dim {dim}")),
        Err(e) => t.fail("segment fixture", e),
    }
    t
}

fn symmetry_invariance() -> Tally {
    let mut t = Tally::default();
    let cfg = SearchConfig::default();
    for i in 0..20u64 {
        let d = if i < 16 { 2 } else { 3 };
        let mut g = InstanceGen::new(d, 9000 + i);
        let (k, c) = g.pair();
        let tag = format!("d={d} seed={i}");

        let shift = Vector::from_fn(d, |_, _| g.uniform(-1.0, 1.0));
        let ks = difference_body(&k).unwrap().scale(0.5).translate(&shift);
        let cs = difference_gauge(&c).unwrap();
        let tol = rel(1e-9, ks.euclidean_diameter());
        let mirror = |p: &Polytope| p.reflect().translate(&(&shift * 2.0));
        for (name, set) in [("cc", circumcenter_set(&ks, &cs)), ("ic", incenter_set(&ks, &cs))] {
            match set {
                Ok(s) => t.close(format!("{tag} symmetric {name}"), s.hausdorff(&mirror(&s)), 0.0, tol),
                Err(e) => t.fail(format!("{tag} symmetric {name}"), e),
            }
        }

        let base = full_profile(&k, &c, &cfg).unwrap();
        let kt = k.translate(&Vector::from_fn(d, |_, _| g.uniform(-2.0, 2.0)));
        let (a, b) = (g.uniform(0.5, 2.0), g.uniform(0.5, 2.0));
        let variants = [
            ("translated", full_profile(&kt, &c, &cfg).unwrap(), 1.0, 1e-9),
            ("scaled", full_profile(&k.scale(a), &c.scaled(b).unwrap(), &cfg).unwrap(), a / b, 1e-6),
        ];
        for (label, p2, factor, tol) in &variants {
            for e in &base.entries {
                let qq = e.quantity;
                match (value(&base, qq), value(p2, qq)) {
                    (Ok((v, _)), Ok((w, _))) => t.close(format!("{tag} {label} {qq}"), w, factor * v, tol * (factor * v).abs().max(1e-12)),
                    (Err(e), _) | (_, Err(e)) => t.fail(format!("{tag} {label} {qq}"), e),
                }
            }
        }
        let metrics: [(&str, fn(&Polytope, &GaugeBody) -> f64); 2] =
            [("diameter", |k, c| diameter(k, c).unwrap()), ("width", |k, c| width(k, c).unwrap())];
        for (name, f) in metrics {
            let v = f(&k, &c);
            t.close(format!("{tag} translated {name}"), f(&kt, &c), v, rel(1e-9, v));
            t.close(format!("{tag} scaled {name}"), f(&k.scale(a), &c.scaled(b).unwrap()), a / b * v, 1e-6 * (a / b * v));
        }
    }
    t
}

fn oracles() -> Tally {
    let mut t = Tally::default();
    let mut cases: Vec<(String, Polytope, GaugeBody)> =
        fixtures().into_iter().map(|(n, k, c)| (n.to_string(), k, c)).collect();
    for i in 0..20u64 {
        let (k, c) = random_pair(2, 11000 + i).unwrap();
        cases.push((format!("d=2 seed={i}"), k, c));
    }
    for i in 0..5u64 {
        let (k, c) = random_pair(3, 12000 + i).unwrap();
        cases.push((format!("d=3 seed={i}"), k, c));
    }
    for (name, k, c) in &cases {
        match circumradius(k, c) {
            Ok(r) => t.close(format!("{name} R"), r.value, oracle_circumradius(k, c), 1e-4),
            Err(e) => t.fail(name, e),
        }
        if k.dim() == 2 {
            let (dd, ww) = (diameter(k, c).unwrap(), width(k, c).unwrap());
            t.close(format!("{name} D"), dd, dense_diameter_2d(k, c, 100_000), rel(1e-6, dd));
            t.close(format!("{name} w"), ww, dense_width_2d(k, c, 100_000), rel(1e-6, ww));
        }
    }
    t
}

fn main() {
    // libtest flags such as --nocapture or a filter are accepted and ignored.
    let cfg = SearchConfig::default();
    let mut pairs = Vec::new();
    let mut profiles = Vec::new();
    let mut report: Vec<(&str, Tally, f64)> = Vec::new();
    let mut run = |name: &'static str, f: &mut dyn FnMut() -> Tally| {
        let start = Instant::now();
        let tally = f();
        let secs = start.elapsed().as_secs_f64();
        let status = if tally.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("{status} {name}: {} [{secs:.1} s]", tally.summary());
        report.push((name, tally, secs));
    };

    run("1 projected cylinder", &mut projected_cylinder);
    run("2 inner/outer duality", &mut duality);
    run("3 monotone chains", &mut || {
        for (d, n) in [(2usize, 100u64), (3, 20)] {
            for seed in 0..n {
                let (k, c) = random_pair(d, 3000 + seed).unwrap();
                profiles.push((d, seed, full_profile(&k, &c, &cfg).unwrap()));
                pairs.push((k, c));
            }
        }
        chains(&profiles)
    });
    run("4 collapses at j = 1 and j = d", &mut || collapses(&pairs, &profiles));
    run("5 ball algebra", &mut ball_algebra);
    run("6 circumcenter dimension", &mut circumcenter_dim);
    run("7 symmetry and invariance", &mut symmetry_invariance);
    run("8 oracle equivalence", &mut oracles);

    let failed: Vec<_> = report.iter().filter(|(_, t, _)| !t.failures.is_empty()).collect();
    for (name, t, _) in &failed {
        eprintln!("--- {name}");
        for f in t.failures.iter().take(10) {
            eprintln!("  {f}");
        }
    }
    println!("{}/{} criteria passed", report.len() - failed.len(), report.len());
    if !failed.is_empty() {
        std::process::exit(1);
    }
}
