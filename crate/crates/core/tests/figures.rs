//! Ball hulls of two triangles in a pentagon gauge, compared with vertex
//! coordinates known to two decimals.

use gaugekit::ball::ball_hull;
use gaugekit::geometry::json::polytope_from_json;
use gaugekit::render::{scene, to_svg, Figure};
use gaugekit::{vector, GaugeBody, Polytope};

fn load(name: &str) -> Polytope {
    let path = format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    polytope_from_json(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn matches_drawing(k: &str, lambda: f64, drawn: &[[f64; 2]]) {
    let c = GaugeBody::new(load("pentagon.json")).unwrap();
    let bh = ball_hull(&load(k), &c, lambda).unwrap();
    assert_eq!(bh.vertices().len(), drawn.len(), "{:?}", bh.vertices());
    for p in drawn {
        let near = bh.vertices().iter().map(|v| (v - vector(p)).norm()).fold(f64::INFINITY, f64::min);
        assert!(near < 0.02, "no vertex near {p:?}: {:?}", bh.vertices());
    }
}

#[test]
fn small_radius_hull() {
    matches_drawing("triangle.json", 0.6, &[[3.79, 1.81], [5.2, 1.81], [5.56, 2.91], [4.42, 3.74], [3.4, 3.0]]);
}

#[test]
fn unit_radius_hull() {
    matches_drawing("triangle_wide.json", 1.0, &[[8.19, 2.11], [9.8, 2.11], [9.96, 2.59], [8.65, 3.54], [7.9, 3.0]]);
}

#[test]
fn figure_svg_has_bold_hull_and_dashed_translates() {
    let c = GaugeBody::new(load("pentagon.json")).unwrap();
    let s = scene(&load("triangle.json"), &c, 0.6, Figure::Bh).unwrap();
    let svg = to_svg(&s);
    assert_eq!(svg.matches("stroke-dasharray").count(), s.translates.len());
    assert_eq!(svg.matches("<polygon").count(), 2 + s.translates.len());
}
