//! Planar SVG figures: `K` in thin lines, the relevant translates of `λC`
//! dashed, the computed set in bold.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::ball::{ball_hull, ball_intersect};
use crate::error::{GeomError, Result};
use crate::gauge::{circumcenter_set, circumradius, GaugeBody};
use crate::geometry::Polytope;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Figure {
    /// `bh(K, C, λ)` with the translates `x + λC`, `x` a vertex of `bi`.
    Bh,
    /// `bi(K, C, λ)` with the translates `v - λC`, `v` a vertex of `K`.
    Bi,
    /// `cc(K, C)` with the covering translates at radius `R(K, C)`.
    Cc,
}

impl std::str::FromStr for Figure {
    type Err = GeomError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bh" => Ok(Figure::Bh),
            "bi" => Ok(Figure::Bi),
            "cc" => Ok(Figure::Cc),
            _ => Err(GeomError::InvalidInput(format!("unknown figure `{s}` (expected bh, bi or cc)"))),
        }
    }
}

/// The polygons making up a figure.
pub struct Scene {
    pub body: Polytope,
    pub translates: Vec<Polytope>,
    pub result: Polytope,
}

pub fn scene(k: &Polytope, c: &GaugeBody, lambda: f64, what: Figure) -> Result<Scene> {
    if k.dim() != 2 {
        return Err(GeomError::UnsupportedDimension(k.dim()));
    }
    let (translates, result) = match what {
        Figure::Bh => {
            let bh = ball_hull(k, c, lambda)?;
            let lam = lambda.max(circumradius(k, c)?.value);
            let inner = ball_intersect(k, c, lam)?;
            let ts = inner.vertices().iter().map(|x| c.body().scale(lam).translate(x)).collect();
            (ts, bh)
        }
        Figure::Bi => {
            let bi = ball_intersect(k, c, lambda)?;
            let neg = c.body().scale(-lambda);
            (k.vertices().iter().map(|v| neg.translate(v)).collect(), bi)
        }
        Figure::Cc => {
            let r = circumradius(k, c)?.value;
            let cc = circumcenter_set(k, c)?;
            (cc.vertices().iter().map(|x| c.body().scale(r).translate(x)).collect(), cc)
        }
    };
    Ok(Scene {
        body: k.clone(),
        translates,
        result,
    })
}

fn points(p: &Polytope, flip: f64) -> String {
    let mut s = String::new();
    for (i, v) in p.vertices().iter().enumerate() {
        if i > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{:.6},{:.6}", v[0], flip - v[1]);
    }
    s
}

fn shape(out: &mut String, p: &Polytope, flip: f64, style: &str) {
    match p.vertices().len() {
        0 => {}
        1 => {
            let v = &p.vertices()[0];
            let _ = writeln!(out, r#"  <circle cx="{:.6}" cy="{:.6}" r="{{R}}" {style}/>"#, v[0], flip - v[1]);
        }
        2 => {
            let (a, b) = (&p.vertices()[0], &p.vertices()[1]);
            let _ = writeln!(
                out,
                r#"  <line x1="{:.6}" y1="{:.6}" x2="{:.6}" y2="{:.6}" {style}/>"#,
                a[0],
                flip - a[1],
                b[0],
                flip - b[1]
            );
        }
        _ => {
            let _ = writeln!(out, r#"  <polygon points="{}" {style}/>"#, points(p, flip));
        }
    }
}

/// SVG 1.1 document; y points up and the view box is fitted to all drawn
/// polygons with a 5% margin.
pub fn to_svg(scene: &Scene) -> String {
    let all = std::iter::once(&scene.body).chain(&scene.translates).chain(std::iter::once(&scene.result));
    let (mut xmin, mut xmax, mut ymin, mut ymax) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for p in all {
        for v in p.vertices() {
            xmin = xmin.min(v[0]);
            xmax = xmax.max(v[0]);
            ymin = ymin.min(v[1]);
            ymax = ymax.max(v[1]);
        }
    }
    let extent = (xmax - xmin).max(ymax - ymin).max(1e-9);
    let (w, h) = ((xmax - xmin).max(1e-9), (ymax - ymin).max(1e-9));
    let m = 0.05 * extent;
    // Mirror about y = ymin + ymax so the drawing keeps its box.
    let flip = ymin + ymax;
    let stroke = extent / 400.0;
    let mut body = String::new();
    let thin = format!(r#"fill="none" stroke="black" stroke-width="{:.6}""#, stroke);
    let dashed = format!(
        r#"fill="none" stroke="black" stroke-width="{:.6}" stroke-dasharray="{:.6} {:.6}""#,
        stroke,
        6.0 * stroke,
        4.0 * stroke
    );
    let bold = format!(r#"fill="none" stroke="black" stroke-width="{:.6}""#, 4.0 * stroke);
    shape(&mut body, &scene.body, flip, &thin);
    for t in &scene.translates {
        shape(&mut body, t, flip, &dashed);
    }
    shape(&mut body, &scene.result, flip, &bold);
    let body = body.replace("{R}", &format!("{:.6}", 3.0 * stroke));
    format!(
        concat!(
            r#"<?xml version="1.0" encoding="UTF-8"?>"#,
            "\n",
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{:.6} {:.6} {:.6} {:.6}">"#,
            "\n{}</svg>\n"
        ),
        xmin - m,
        ymin - m,
        w + 2.0 * m,
        h + 2.0 * m,
        body
    )
}
