//! Static SVG figures of a chain with optional hull or focal-ellipse overlay.
//! The y axis is flipped so that apexes point up.

use std::fmt::Write as _;

use chainkit_core::geometry::{convex_hull, Aabb};
use chainkit_core::{FocalEllipse, Point, PolygonalChain};

pub const ELLIPSE_SEGMENTS: usize = 128;
const MARGIN: f64 = 0.05;

#[derive(Debug, Clone, Copy)]
pub enum Overlay {
    None,
    Hull,
    Ellipse(FocalEllipse),
}

pub struct Figure {
    pub svg: String,
    pub polyline_points: usize,
    pub overlay_points: usize,
}

fn fmt_points(points: &[Point]) -> String {
    let mut s = String::new();
    for (idx, p) in points.iter().enumerate() {
        if idx > 0 {
            s.push(' ');
        }
        let _ = write!(s, "{},{}", p.x, 0.0 - p.y);
    }
    s
}

pub fn render(chain: &PolygonalChain, overlay: Overlay) -> Figure {
    let overlay_poly = match overlay {
        Overlay::None => Vec::new(),
        Overlay::Hull => convex_hull(chain.vertices()),
        Overlay::Ellipse(e) => e.boundary_polygon(ELLIPSE_SEGMENTS),
    };
    let all: Vec<Point> = chain
        .vertices()
        .iter()
        .chain(&overlay_poly)
        .copied()
        .collect();
    let bbox = Aabb::of_points(&all).expect("chains have at least two vertices");
    let (w, h) = (bbox.max.x - bbox.min.x, bbox.max.y - bbox.min.y);
    let extent = w.max(h).max(f64::MIN_POSITIVE);
    let pad = MARGIN * extent;
    let (vw, vh) = (w + 2.0 * pad, h + 2.0 * pad);
    let stroke = 0.004 * extent;

    let mut svg = String::new();
    let _ = writeln!(svg, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" viewBox="{} {} {vw} {vh}" width="800" height="{}">"#,
        bbox.min.x - pad,
        -bbox.max.y - pad,
        (800.0 * vh / vw).round().max(1.0)
    );
    match overlay {
        Overlay::None => {}
        Overlay::Hull => {
            let _ = writeln!(
                svg,
                r##"  <polygon class="hull" points="{}" fill="#dde8f4" stroke="#4a78a8" stroke-width="{stroke}"/>"##,
                fmt_points(&overlay_poly)
            );
        }
        Overlay::Ellipse(_) => {
            let _ = writeln!(
                svg,
                r##"  <polygon class="ellipse" points="{}" fill="none" stroke="#b04a3a" stroke-width="{stroke}" stroke-dasharray="{} {}"/>"##,
                fmt_points(&overlay_poly),
                4.0 * stroke,
                2.0 * stroke
            );
        }
    }
    let _ = writeln!(
        svg,
        r##"  <polyline class="chain" points="{}" fill="none" stroke="#000000" stroke-width="{stroke}" stroke-linejoin="round"/>"##,
        fmt_points(chain.vertices())
    );
    svg.push_str("</svg>\n");
    Figure {
        svg,
        polyline_points: chain.len(),
        overlay_points: overlay_poly.len(),
    }
}
