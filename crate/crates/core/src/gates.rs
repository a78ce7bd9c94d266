//! Dominance among θ-cuts, gate extraction and the reduced polygon.

use crate::cuts::ThetaCut;
use crate::error::{Error, Result};
use crate::geom::{ring_contains, Angle, Point, Polygon, TAU_ONEDGE};

/// A θ-cut that no other cut dominates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Gate {
    pub cut: ThetaCut,
    pub gate_vertex: Point,
    /// Polygon edge holding the far endpoint of the chord.
    pub gate_edge: usize,
}

/// Where a vertex of the reduced polygon comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexOrigin {
    /// A vertex of the input polygon.
    Polygon(usize),
    /// The far endpoint of the chord of gate `i`.
    GateFar(usize),
}

/// An edge of the reduced polygon that is a gate chord.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EssentialEdge {
    /// Ring index of the edge's first vertex.
    pub edge: usize,
    /// Index into [`ReducedPolygon::gates`].
    pub gate: usize,
}

/// The input polygon with every gate's left region cut away.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedPolygon {
    pub polygon: Polygon,
    pub origins: Vec<VertexOrigin>,
    pub essential: Vec<EssentialEdge>,
    pub gates: Vec<Gate>,
    /// Per ring vertex: whether it coincides with a reflex vertex of the input polygon.
    pub reflex_in_source: Vec<bool>,
    pub theta: Angle,
}

impl ReducedPolygon {
    /// Essential edge starting at ring index `k`, if any.
    pub fn essential_at(&self, k: usize) -> Option<&EssentialEdge> {
        self.essential.iter().find(|e| e.edge == k)
    }

    /// Ring index of the vertex that coincides with input vertex `i`.
    pub fn index_of_polygon_vertex(&self, i: usize) -> Option<usize> {
        self.origins.iter().position(|o| *o == VertexOrigin::Polygon(i))
    }
}

/// Strict containment of closed left regions: `L(c) ⊂ L(other)`.
///
/// Parallel chords never cross, so they split the polygon into three pieces.
/// Containment holds exactly when `c`'s chord lies in `L(other)` while
/// `other`'s chord stays outside `L(c)`.
pub fn dominates(poly: &Polygon, c: &ThetaCut, other: &ThetaCut) -> Result<bool> {
    if c.theta != other.theta {
        return Err(Error::MixedDirections(c.theta, other.theta));
    }
    if c.vertex_index == other.vertex_index && c.kind == other.kind {
        return Ok(false);
    }
    Ok(dominates_with(c, &other.left_ring(poly), other, &c.left_ring(poly)))
}

fn dominates_with(c: &ThetaCut, other_left: &[Point], other: &ThetaCut, c_left: &[Point]) -> bool {
    ring_contains(other_left, c.chord.midpoint(), TAU_ONEDGE)
        && !ring_contains(c_left, other.chord.midpoint(), TAU_ONEDGE)
}

/// Cuts not dominated by any other cut, in issuing-vertex order.
pub fn compute_gates(poly: &Polygon, cuts: &[ThetaCut]) -> Result<Vec<Gate>> {
    if let Some(w) = cuts.windows(2).find(|w| w[0].theta != w[1].theta) {
        return Err(Error::MixedDirections(w[0].theta, w[1].theta));
    }
    for (i, c) in cuts.iter().enumerate() {
        for o in &cuts[i + 1..] {
            if o.vertex_index != c.vertex_index
                && o.color == c.color
                && c.chord.distance_to_point(o.vertex) <= TAU_ONEDGE
            {
                return Err(Error::EventAngle {
                    kind: "domination",
                    theta: c.theta,
                    vertex: Some(o.vertex_index),
                    detail: format!(
                        "cuts of vertices {} and {} are collinear",
                        c.vertex_index, o.vertex_index
                    ),
                });
            }
        }
    }
    let rings: Vec<Vec<Point>> = cuts.iter().map(|c| c.left_ring(poly)).collect();
    let mut gates = Vec::new();
    for (i, c) in cuts.iter().enumerate() {
        let dominated = cuts.iter().enumerate().any(|(j, o)| {
            j != i && dominates_with(o, &rings[i], c, &rings[j])
        });
        if !dominated {
            gates.push(Gate {
                cut: *c,
                gate_vertex: c.vertex,
                gate_edge: c.far_edge(),
            });
        }
    }
    Ok(gates)
}

/// Removes every gate's left region; gate chords become essential edges.
pub fn reduce_polygon(poly: &Polygon, gates: &[Gate], theta: Angle) -> Result<ReducedPolygon> {
    if gates.is_empty() {
        return Ok(ReducedPolygon {
            polygon: poly.clone(),
            origins: (0..poly.len()).map(VertexOrigin::Polygon).collect(),
            essential: Vec::new(),
            gates: Vec::new(),
            reflex_in_source: (0..poly.len()).map(|i| poly.is_reflex(i)).collect(),
            theta,
        });
    }
    let mut order: Vec<usize> = (0..gates.len()).collect();
    order.sort_by(|&a, &b| gates[a].cut.end.key().total_cmp(&gates[b].cut.end.key()));

    let n = poly.len() as f64;
    // Left regions are the boundary arcs end -> start; they must be disjoint.
    let ahead = |from: f64, to: f64| (to - from).rem_euclid(n);
    for (k, &g) in order.iter().enumerate() {
        let h = order[(k + 1) % order.len()];
        let (b_g, a_g, b_h) = (
            gates[g].cut.end.key(),
            gates[g].cut.start.key(),
            gates[h].cut.end.key(),
        );
        let span = if order.len() == 1 { n } else { ahead(b_g, b_h) };
        let pocket = ahead(b_g, a_g);
        if pocket <= 0.0 || pocket >= span {
            return Err(Error::Reduction(format!(
                "left regions of gates {g} and {h} overlap or touch"
            )));
        }
    }

    let origin_of = |g: usize, bp: &crate::geom::BoundaryPoint| {
        if bp.t == 0.0 && bp.point == poly.vertex(bp.edge) && bp.edge == gates[g].cut.vertex_index {
            VertexOrigin::Polygon(bp.edge)
        } else {
            VertexOrigin::GateFar(g)
        }
    };

    let mut ring = Vec::new();
    let mut origins = Vec::new();
    let mut essential = Vec::new();
    for (k, &g) in order.iter().enumerate() {
        let h = order[(k + 1) % order.len()];
        let start = gates[g].cut.start;
        ring.push(start.point);
        origins.push(origin_of(g, &start));
        for i in poly.vertices_between(&start, &gates[h].cut.end) {
            ring.push(poly.vertex(i));
            origins.push(VertexOrigin::Polygon(i));
        }
        let end = gates[h].cut.end;
        essential.push(EssentialEdge {
            edge: ring.len(),
            gate: h,
        });
        ring.push(end.point);
        origins.push(origin_of(h, &end));
    }
    let m = ring.len();
    if (0..m).any(|i| ring[i].dist(ring[(i + 1) % m]) <= TAU_ONEDGE) || m < 3 {
        return Err(Error::Reduction("reduced polygon is degenerate".into()));
    }
    let polygon = Polygon::from_trusted_ring(ring);
    if polygon.area() <= 0.0 {
        return Err(Error::Reduction("reduced polygon has no area".into()));
    }
    essential.sort_by_key(|e| e.edge);
    let reflex_in_source = origins
        .iter()
        .map(|o| matches!(o, VertexOrigin::Polygon(i) if poly.is_reflex(*i)))
        .collect();
    Ok(ReducedPolygon {
        polygon,
        origins,
        essential,
        gates: gates.to_vec(),
        reflex_in_source,
        theta,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::{compute_cuts, CutColor, CutKind};
    use crate::fixtures;
    use crate::geom::{ring_area2, Segment};

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    fn zero() -> Angle {
        Angle::from_degrees(0.0)
    }

    fn find(cuts: &[ThetaCut], color: CutColor, kind: CutKind) -> ThetaCut {
        *cuts.iter().find(|c| c.color == color && c.kind == kind).unwrap()
    }

    #[test]
    fn dominance_on_double() {
        let d = fixtures::double();
        let cuts = compute_cuts(&d, zero()).unwrap();
        let bf = find(&cuts, CutColor::Blue, CutKind::Forward);
        let bb = find(&cuts, CutColor::Blue, CutKind::Backward);
        let rf = find(&cuts, CutColor::Red, CutKind::Forward);
        let rb = find(&cuts, CutColor::Red, CutKind::Backward);
        // the two halves of one chord leave the shared piece below it to both
        assert!(!dominates(&d, &bb, &bf).unwrap());
        assert!(!dominates(&d, &bf, &bb).unwrap());
        assert!(!dominates(&d, &rb, &bb).unwrap());
        assert!(!dominates(&d, &bb, &rb).unwrap());
        assert!(dominates(&d, &bb, &rf).unwrap());
        assert!(dominates(&d, &rb, &bf).unwrap());
        for c in &cuts {
            assert!(!dominates(&d, c, c).unwrap());
        }
        let other = compute_cuts(&d, Angle::from_degrees(1.0)).unwrap();
        assert!(dominates(&d, &bb, &other[0]).is_err());
    }

    #[test]
    fn gates_on_fixtures() {
        let d = fixtures::double();
        let gates = compute_gates(&d, &compute_cuts(&d, zero()).unwrap()).unwrap();
        assert_eq!(gates.len(), 2);
        assert_eq!((gates[0].cut.color, gates[0].cut.kind), (CutColor::Red, CutKind::Backward));
        assert!(gates[0].cut.chord.a.approx_eq(p(2.5, 4.), 1e-12));
        assert_eq!(d.edge(gates[0].gate_edge), Segment::new(p(3., 6.), p(2., 2.)));
        assert_eq!((gates[1].cut.color, gates[1].cut.kind), (CutColor::Blue, CutKind::Backward));
        assert!(gates[1].cut.chord.a.approx_eq(p(5.5, 2.), 1e-12));
        assert_eq!(d.edge(gates[1].gate_edge), Segment::new(p(5., 0.), p(6., 4.)));

        let u = fixtures::unotch();
        let gates = compute_gates(&u, &compute_cuts(&u, zero()).unwrap()).unwrap();
        assert_eq!(gates.len(), 2);
        assert!(gates.iter().all(|g| g.gate_vertex == p(4., 2.)));

        let s = fixtures::square();
        assert!(compute_gates(&s, &compute_cuts(&s, zero()).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn reduced_double() {
        let d = fixtures::double();
        let gates = compute_gates(&d, &compute_cuts(&d, zero()).unwrap()).unwrap();
        let rp = reduce_polygon(&d, &gates, zero()).unwrap();
        let ring = rp.polygon.vertices();
        assert_eq!(ring, &[p(2.5, 4.), p(2., 2.), p(5.5, 2.), p(6., 4.)]);
        assert_eq!(rp.essential.len(), 2);
        for e in &rp.essential {
            let chord = rp.gates[e.gate].cut.chord;
            let edge = rp.polygon.edge(e.edge);
            assert!(edge.a.approx_eq(chord.b, 1e-12) && edge.b.approx_eq(chord.a, 1e-12));
        }
        let removed: f64 = gates.iter().map(|g| 0.5 * ring_area2(&g.cut.left_ring(&d))).sum();
        assert!((rp.polygon.area() + removed - d.area()).abs() < 1e-9);
    }

    #[test]
    fn reduction_identity_and_overlap() {
        let s = fixtures::square();
        let rp = reduce_polygon(&s, &[], zero()).unwrap();
        assert_eq!(rp.polygon, s);
        assert!(rp.essential.is_empty());

        // both halves of the notch chord are gates whose left regions cover the polygon
        let u = fixtures::unotch();
        let gates = compute_gates(&u, &compute_cuts(&u, zero()).unwrap()).unwrap();
        assert!(matches!(reduce_polygon(&u, &gates, zero()), Err(Error::Reduction(_))));
    }
}
