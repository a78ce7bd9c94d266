//! Coloring of reflex vertices and the directed θ-cuts they issue.

use std::fmt;

use crate::error::{Error, Result};
use crate::geom::{
    max_chord_through, ring_contains, Angle, BoundaryPoint, Point, Polygon, Segment, TAU_ONEDGE,
    TAU_ORIENT,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutColor {
    Red,
    Blue,
}

impl CutColor {
    pub fn opposite(self) -> CutColor {
        match self {
            CutColor::Red => CutColor::Blue,
            CutColor::Blue => CutColor::Red,
        }
    }
}

impl fmt::Display for CutColor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutColor::Red => "red",
            CutColor::Blue => "blue",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CutKind {
    /// Directed away from the issuing vertex.
    Forward,
    /// Directed towards the issuing vertex.
    Backward,
}

impl fmt::Display for CutKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CutKind::Forward => "forward",
            CutKind::Backward => "backward",
        })
    }
}

/// Classification of a vertex for one direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexClass {
    Red,
    Blue,
    Uncolored,
    Convex,
    /// An incident edge is parallel to the direction: a validity event.
    Boundary,
}

impl VertexClass {
    pub fn color(self) -> Option<CutColor> {
        match self {
            VertexClass::Red => Some(CutColor::Red),
            VertexClass::Blue => Some(CutColor::Blue),
            _ => None,
        }
    }
}

/// Directed chord issued by a colored reflex vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ThetaCut {
    pub vertex: Point,
    pub vertex_index: usize,
    /// Directed `chord.a -> chord.b`.
    pub chord: Segment,
    pub color: CutColor,
    pub kind: CutKind,
    pub theta: Angle,
    /// Boundary locations of `chord.a` and `chord.b`.
    pub start: BoundaryPoint,
    pub end: BoundaryPoint,
    /// Set when the chord hit a second vertex and was shot at a nudged angle.
    pub perturbed: Option<Angle>,
}

impl ThetaCut {
    /// Endpoint that is not the issuing vertex.
    pub fn far(&self) -> BoundaryPoint {
        match self.kind {
            CutKind::Forward => self.end,
            CutKind::Backward => self.start,
        }
    }

    /// Edge of the polygon touched by the far endpoint.
    pub fn far_edge(&self) -> usize {
        self.far().edge
    }

    /// Closed ring of the part of the polygon left of the chord.
    pub fn left_ring(&self, poly: &Polygon) -> Vec<Point> {
        let mut ring = vec![self.chord.a, self.chord.b];
        ring.extend(
            poly.vertices_between(&self.end, &self.start)
                .into_iter()
                .map(|i| poly.vertex(i)),
        );
        ring.dedup_by(|a, b| a.dist(*b) <= 1e-12);
        ring
    }
}

/// Color of vertex `v` for the directed line through it with direction `theta`.
pub fn classify_vertex(poly: &Polygon, v: usize, theta: Angle) -> Result<VertexClass> {
    if v >= poly.len() {
        return Err(Error::VertexOutOfRange(v));
    }
    Ok(classify_along(poly, v, theta.direction()))
}

pub(crate) fn classify_along(poly: &Polygon, v: usize, d: Point) -> VertexClass {
    if !poly.is_reflex(v) {
        return VertexClass::Convex;
    }
    let p = poly.vertex(v);
    let side = |w: Point| {
        let e = w - p;
        d.cross(e) / e.norm().max(1.0)
    };
    let s_prev = side(poly.vertex(poly.prev(v)));
    let s_next = side(poly.vertex(poly.next(v)));
    if s_prev.abs() <= TAU_ORIENT || s_next.abs() <= TAU_ORIENT {
        VertexClass::Boundary
    } else if s_prev > 0.0 && s_next > 0.0 {
        VertexClass::Blue
    } else if s_prev < 0.0 && s_next < 0.0 {
        VertexClass::Red
    } else {
        VertexClass::Uncolored
    }
}

/// All forward and backward cuts for direction `theta`, ordered by issuing vertex.
pub fn compute_cuts(poly: &Polygon, theta: Angle) -> Result<Vec<ThetaCut>> {
    let mut cuts = Vec::new();
    for &v in poly.reflex_vertices() {
        let color = match classify_vertex(poly, v, theta)? {
            VertexClass::Red => CutColor::Red,
            VertexClass::Blue => CutColor::Blue,
            VertexClass::Boundary => {
                return Err(Error::EventAngle {
                    kind: "validity",
                    theta,
                    vertex: Some(v),
                    detail: format!("an edge at vertex {v} is parallel to the direction"),
                })
            }
            _ => continue,
        };
        let chord = max_chord_through(poly, v, theta)?;
        let origin = BoundaryPoint {
            point: poly.vertex(v),
            edge: v,
            t: 0.0,
        };
        let dir = chord.perturbed.unwrap_or(theta).direction();
        let (fwd_far, bwd_far) = if forward_ray_is_positive(poly, v, dir) {
            (chord.front, chord.back)
        } else {
            (chord.back, chord.front)
        };
        cuts.push(ThetaCut {
            vertex: origin.point,
            vertex_index: v,
            chord: Segment::new(origin.point, fwd_far.point),
            color,
            kind: CutKind::Forward,
            theta,
            start: origin,
            end: fwd_far,
            perturbed: chord.perturbed,
        });
        cuts.push(ThetaCut {
            vertex: origin.point,
            vertex_index: v,
            chord: Segment::new(bwd_far.point, origin.point),
            color,
            kind: CutKind::Backward,
            theta,
            start: bwd_far,
            end: origin,
            perturbed: chord.perturbed,
        });
    }
    Ok(cuts)
}

/// The forward cut bounds the piece entered first by the counterclockwise walk
/// from `v`: it runs along whichever ray comes first turning counterclockwise
/// from the outgoing edge.
fn forward_ray_is_positive(poly: &Polygon, v: usize, d: Point) -> bool {
    let p = poly.vertex(v);
    let out = poly.vertex(poly.next(v)) - p;
    let ccw = |a: Point, b: Point| {
        let ang = a.cross(b).atan2(a.dot(b));
        if ang < 0.0 {
            ang + std::f64::consts::TAU
        } else {
            ang
        }
    };
    ccw(out, d) < ccw(out, -d)
}

/// Closed membership of `p` in the region left of cut `c`.
pub fn left_region_contains(poly: &Polygon, c: &ThetaCut, p: Point) -> Result<bool> {
    if !poly.contains(p) {
        return Err(Error::PointOutside { x: p.x, y: p.y });
    }
    Ok(ring_contains(&c.left_ring(poly), p, TAU_ONEDGE))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::geom::ring_area2;
    use proptest::prelude::*;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn deg(d: f64) -> Angle {
        Angle::from_degrees(d)
    }

    #[test]
    fn classification_examples() {
        let double = fixtures::double();
        let v = double.vertex_at(p(2., 2.)).unwrap();
        assert_eq!(classify_vertex(&double, v, deg(0.)).unwrap(), VertexClass::Blue);
        assert_eq!(classify_vertex(&double, v, deg(90.)).unwrap(), VertexClass::Uncolored);
        let w = double.vertex_at(p(6., 4.)).unwrap();
        assert_eq!(classify_vertex(&double, w, deg(0.)).unwrap(), VertexClass::Red);
        let sq = fixtures::square();
        for i in 0..4 {
            assert_eq!(classify_vertex(&sq, i, deg(0.)).unwrap(), VertexClass::Convex);
        }
        let edge_angle = (4.0f64).atan().to_degrees();
        assert_eq!(
            classify_vertex(&double, v, deg(edge_angle)).unwrap(),
            VertexClass::Boundary
        );
        assert!(classify_vertex(&double, 99, deg(0.)).is_err());
    }

    #[test]
    fn cuts_of_double_at_zero() {
        let double = fixtures::double();
        let cuts = compute_cuts(&double, deg(0.)).unwrap();
        assert_eq!(cuts.len(), 4);
        let expect = [
            (CutColor::Red, CutKind::Forward, p(6., 4.), p(8., 4.)),
            (CutColor::Red, CutKind::Backward, p(2.5, 4.), p(6., 4.)),
            (CutColor::Blue, CutKind::Forward, p(2., 2.), p(0., 2.)),
            (CutColor::Blue, CutKind::Backward, p(5.5, 2.), p(2., 2.)),
        ];
        for (c, (color, kind, a, b)) in cuts.iter().zip(expect) {
            assert_eq!((c.color, c.kind), (color, kind));
            assert!(c.chord.a.approx_eq(a, 1e-12), "{:?}", c.chord);
            assert!(c.chord.b.approx_eq(b, 1e-12), "{:?}", c.chord);
        }
    }

    #[test]
    fn cut_lists_that_are_empty() {
        assert!(compute_cuts(&fixtures::square(), deg(17.)).unwrap().is_empty());
        assert!(compute_cuts(&fixtures::double(), deg(90.)).unwrap().is_empty());
        let at_event = compute_cuts(&fixtures::double(), deg((4.0f64).atan().to_degrees()));
        assert!(matches!(at_event, Err(Error::EventAngle { kind: "validity", .. })));
    }

    #[test]
    fn left_regions_of_double() {
        let double = fixtures::double();
        let cuts = compute_cuts(&double, deg(0.)).unwrap();
        let blue_back = cuts
            .iter()
            .find(|c| c.color == CutColor::Blue && c.kind == CutKind::Backward)
            .unwrap();
        assert!(left_region_contains(&double, blue_back, p(1., 1.)).unwrap());
        assert!(!left_region_contains(&double, blue_back, p(7., 5.)).unwrap());
        assert!(left_region_contains(&double, blue_back, blue_back.chord.midpoint()).unwrap());
        assert!(left_region_contains(&double, blue_back, p(9., 9.)).is_err());
        for c in &cuts {
            assert!(left_region_contains(&double, c, c.chord.midpoint()).unwrap());
            assert!(ring_area2(&c.left_ring(&double)) > 0.0);
        }
    }

    #[test]
    fn reversing_the_direction_swaps_colors() {
        let double = fixtures::double();
        for &v in double.reflex_vertices() {
            for d in [0.0, 30.0, 150.0] {
                let dir = deg(d).direction();
                let fwd = classify_along(&double, v, dir);
                let back = classify_along(&double, v, -dir);
                match fwd {
                    VertexClass::Red => assert_eq!(back, VertexClass::Blue),
                    VertexClass::Blue => assert_eq!(back, VertexClass::Red),
                    other => assert_eq!(back, other),
                }
            }
        }
    }

    proptest! {
        #[test]
        fn cut_pairs_cover_the_chord(seed in 0u64..300, d in 0.0..180.0f64) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let poly = crate::oracle::random_polygon(&mut rng, 12);
            let Ok(cuts) = compute_cuts(&poly, deg(d)) else { return Ok(()) };
            let colored = poly.reflex_vertices().iter()
                .filter(|&&v| classify_vertex(&poly, v, deg(d)).unwrap().color().is_some())
                .count();
            prop_assert_eq!(cuts.len(), 2 * colored);
            prop_assert!(cuts.len() <= 2 * poly.reflex_vertices().len());
            for pair in cuts.chunks(2) {
                let (f, b) = (&pair[0], &pair[1]);
                prop_assert_eq!(f.kind, CutKind::Forward);
                prop_assert_eq!(b.kind, CutKind::Backward);
                prop_assert_eq!(f.chord.a, f.vertex);
                prop_assert_eq!(b.chord.b, b.vertex);
                let full = max_chord_through(&poly, f.vertex_index, deg(d)).unwrap().segment;
                let total = f.chord.length() + b.chord.length();
                prop_assert!((total - full.length()).abs() < 1e-9);
                // collinear and parallel to the direction
                let dir = f.perturbed.unwrap_or(deg(d)).direction();
                prop_assert!(dir.cross(f.chord.b - f.chord.a).abs() < 1e-9 * (1.0 + f.chord.length()));
                prop_assert!(dir.cross(b.chord.b - b.chord.a).abs() < 1e-9 * (1.0 + b.chord.length()));
            }
        }

        #[test]
        fn sides_partition_the_polygon(seed in 0u64..200, d in 0.0..180.0f64,
                                       u in 0.0..1.0f64, w in 0.0..1.0f64) {
            use rand::SeedableRng;
            let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
            let poly = crate::oracle::random_polygon(&mut rng, 10);
            let Ok(cuts) = compute_cuts(&poly, deg(d)) else { return Ok(()) };
            // a random interior point: blend of a triangle of vertices, kept if inside
            let n = poly.len();
            let a = poly.vertex(0);
            let b = poly.vertex((1 + (u * (n - 2) as f64) as usize).min(n - 1));
            let q = a.lerp(b, w);
            if !poly.contains(q) { return Ok(()) }
            for c in &cuts {
                let on_chord = c.chord.distance_to_point(q) <= TAU_ONEDGE;
                let left = left_region_contains(&poly, c, q).unwrap();
                let mut right_ring = vec![c.chord.b, c.chord.a];
                right_ring.extend(poly.vertices_between(&c.start, &c.end).into_iter().map(|i| poly.vertex(i)));
                let right = ring_contains(&right_ring, q, TAU_ONEDGE);
                if on_chord {
                    prop_assert!(left && right);
                } else if poly.boundary_distance(q) > 1e-6 && c.chord.distance_to_point(q) > 1e-6 {
                    prop_assert!(left != right);
                }
            }
        }
    }
}
