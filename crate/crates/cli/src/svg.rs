use std::fmt::Write as _;

use monowatch::cuts::ThetaCut;
use monowatch::gates::Gate;
use monowatch::geom::{Point, Polygon};
use monowatch::sleeve::{Tour, TourTag};

/// Debug drawing: outline, dashed cuts, bold gates, the tour and its moving vertices.
pub fn render(poly: &Polygon, cuts: &[ThetaCut], gates: &[Gate], tour: &Tour) -> String {
    let (mut lo, mut hi) = (Point::new(f64::INFINITY, f64::INFINITY), Point::new(f64::NEG_INFINITY, f64::NEG_INFINITY));
    for p in poly.vertices() {
        lo = Point::new(lo.x.min(p.x), lo.y.min(p.y));
        hi = Point::new(hi.x.max(p.x), hi.y.max(p.y));
    }
    let pad = 0.05 * (hi.x - lo.x).max(hi.y - lo.y);
    let scale = 600.0 / ((hi.x - lo.x).max(hi.y - lo.y) + 2.0 * pad);
    let w = (hi.x - lo.x + 2.0 * pad) * scale;
    let h = (hi.y - lo.y + 2.0 * pad) * scale;
    // y grows downwards in SVG
    let map = |p: Point| ((p.x - lo.x + pad) * scale, (hi.y - p.y + pad) * scale);
    let line = |s: &mut String, a: Point, b: Point, style: &str| {
        let (a, b) = (map(a), map(b));
        writeln!(s, r#"  <line x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}" {style}/>"#, a.0, a.1, b.0, b.1).unwrap();
    };

    let mut s = String::new();
    writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#).unwrap();
    let outline: Vec<String> = poly
        .vertices()
        .iter()
        .map(|&p| {
            let (x, y) = map(p);
            format!("{x:.3},{y:.3}")
        })
        .collect();
    writeln!(s, r##"  <polygon points="{}" fill="#f4f4f4" stroke="black" stroke-width="1.5"/>"##, outline.join(" ")).unwrap();
    for c in cuts {
        let color = if c.color == monowatch::cuts::CutColor::Red { "#c0392b" } else { "#2e64c0" };
        line(&mut s, c.chord.a, c.chord.b, &format!(r#"stroke="{color}" stroke-width="1" stroke-dasharray="6 4""#));
    }
    for g in gates {
        let color = if g.cut.color == monowatch::cuts::CutColor::Red { "#c0392b" } else { "#2e64c0" };
        line(&mut s, g.cut.chord.a, g.cut.chord.b, &format!(r#"stroke="{color}" stroke-width="4""#));
    }
    let n = tour.len();
    if n > 1 {
        let pts: Vec<String> = tour
            .cycle
            .iter()
            .map(|&p| {
                let (x, y) = map(p);
                format!("{x:.3},{y:.3}")
            })
            .collect();
        writeln!(s, r##"  <polygon points="{}" fill="none" stroke="#1e8449" stroke-width="2.5"/>"##, pts.join(" ")).unwrap();
    }
    for (p, tag) in tour.cycle.iter().zip(&tour.tags) {
        let (x, y) = map(*p);
        let fill = match tag {
            TourTag::Moving(_) => "#f39c12",
            _ => "#1e8449",
        };
        writeln!(s, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="5" fill="{fill}"/>"#).unwrap();
    }
    s.push_str("</svg>\n");
    s
}
