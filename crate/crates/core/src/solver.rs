//! Shortest watchman tour for a fixed direction.

use rayon::prelude::*;

use crate::cuts::{compute_cuts, CutColor, CutKind};
use crate::error::{Error, Result};
use crate::gates::{compute_gates, reduce_polygon, Gate, ReducedPolygon, VertexOrigin};
use crate::geom::{ring_contains, Angle, Point, Polygon, TAU_ONEDGE};
use crate::sleeve::{fold_back, shortest_path, triangulate, unroll, Tour, TourTag, Triangulation};

/// Candidates whose sleeve lengths differ by less than this are tied.
const TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct SolveResult {
    pub tour: Tour,
    pub gates: Vec<Gate>,
    pub candidates_tried: Vec<Point>,
    /// Sleeve path length per tried candidate, same order.
    pub candidate_lengths: Vec<f64>,
    pub subpaths: Vec<MaximalMovingSubpath>,
}

impl SolveResult {
    pub fn length(&self) -> f64 {
        self.tour.length
    }

    pub fn structure(&self) -> Structure {
        Structure::of(&self.tour, &self.gates)
    }
}

/// Run of moving vertices between two consecutive stable vertices.
#[derive(Debug, Clone, PartialEq)]
pub struct MaximalMovingSubpath {
    /// `None` for a tour without stable vertices, which forms one cyclic subpath.
    pub start_stable: Option<Point>,
    pub moving: Vec<(Point, usize)>,
    pub end_stable: Option<Point>,
}

impl MaximalMovingSubpath {
    pub fn is_cyclic(&self) -> bool {
        self.start_stable.is_none()
    }

    pub fn colors(&self, gates: &[Gate]) -> Vec<CutColor> {
        self.moving.iter().map(|&(_, g)| gates[g].cut.color).collect()
    }

    /// Consecutive touched gates have different colors.
    pub fn alternates(&self, gates: &[Gate]) -> bool {
        let c = self.colors(gates);
        let linear = c.windows(2).all(|w| w[0] != w[1]);
        if self.is_cyclic() && c.len() > 2 {
            linear && c[0] != c[c.len() - 1]
        } else {
            linear
        }
    }
}

/// Combinatorial description of a tour, used to spot structural changes
/// between nearby directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    pub stable: Vec<usize>,
    /// Gate vertex, kind and far edge of every gate.
    pub gates: Vec<(usize, CutKind, usize)>,
    /// Gates whose chord is touched at its far endpoint.
    pub touches: Vec<usize>,
}

impl Structure {
    pub fn of(tour: &Tour, gates: &[Gate]) -> Structure {
        let mut stable: Vec<usize> = tour
            .tags
            .iter()
            .filter_map(|t| match t {
                TourTag::Stable(i) => Some(*i),
                _ => None,
            })
            .collect();
        stable.sort_unstable();
        stable.dedup();
        let mut gs: Vec<_> = gates
            .iter()
            .map(|g| (g.cut.vertex_index, g.cut.kind, g.gate_edge))
            .collect();
        gs.sort_unstable_by_key(|&(v, k, e)| (v, k as u8, e));
        let mut touches: Vec<usize> = tour
            .cycle
            .iter()
            .zip(&tour.tags)
            .filter_map(|(p, t)| match t {
                TourTag::Moving(g) if gates[*g].cut.far().point.dist(*p) <= 1e-9 => {
                    Some(gates[*g].cut.vertex_index)
                }
                _ => None,
            })
            .collect();
        touches.sort_unstable();
        touches.dedup();
        Structure {
            stable,
            gates: gs,
            touches,
        }
    }
}

pub fn solve_theta(poly: &Polygon, theta: Angle) -> Result<SolveResult> {
    let cuts = compute_cuts(poly, theta)?;
    let gates = compute_gates(poly, &cuts)?;

    if gates.is_empty() {
        let i = poly.lowest_vertex();
        let p = poly.vertex(i);
        let tag = if poly.is_reflex(i) { TourTag::Stable(i) } else { TourTag::Free };
        return Ok(point_result(p, tag, theta, gates));
    }
    if let Some((p, tag)) = common_point(poly, &gates) {
        return Ok(point_result(p, tag, theta, gates));
    }

    let rp = reduce_polygon(poly, &gates, theta)?;
    let tri = triangulate(&rp)?;
    let cands = exhaustive_candidates(&rp);
    let solved: Vec<Result<Tour>> = cands
        .par_iter()
        .map(|&v| sleeve_tour(&rp, &tri, v))
        .collect();
    let tours = solved.into_iter().collect::<Result<Vec<_>>>()?;
    let best_len = tours.iter().map(|t| t.length).fold(f64::INFINITY, f64::min);
    let best = tours
        .iter()
        .position(|t| t.length <= best_len + TIE_TOL)
        .ok_or_else(|| Error::Internal("no candidate produced a tour".into()))?;
    let tour = tours[best].clone();
    let subpaths = decompose_subpaths(&tour);
    Ok(SolveResult {
        tour,
        gates: rp.gates.clone(),
        candidates_tried: cands.iter().map(|&v| rp.polygon.vertex(v)).collect(),
        candidate_lengths: tours.iter().map(|t| t.length).collect(),
        subpaths,
    })
}

fn point_result(p: Point, tag: TourTag, theta: Angle, gates: Vec<Gate>) -> SolveResult {
    SolveResult {
        tour: Tour::point(p, tag, theta),
        gates,
        candidates_tried: vec![p],
        candidate_lengths: vec![0.0],
        subpaths: Vec::new(),
    }
}

fn sleeve_tour(rp: &ReducedPolygon, tri: &Triangulation, v: usize) -> Result<Tour> {
    let s = unroll(rp, tri, v)?;
    let path = shortest_path(&s);
    fold_back(rp, &s, &path)
}

/// A point lying in the closed left region of every gate.
///
/// Chords never cross, so a chord lies entirely inside or entirely outside
/// another gate's left region except where two chords share their issuing
/// vertex; testing both endpoints and the midpoint is therefore exact.
fn common_point(poly: &Polygon, gates: &[Gate]) -> Option<(Point, TourTag)> {
    let rings: Vec<Vec<Point>> = gates.iter().map(|g| g.cut.left_ring(poly)).collect();
    for (gi, g) in gates.iter().enumerate() {
        let c = &g.cut;
        for p in [c.vertex, c.far().point, c.chord.midpoint()] {
            let inside_all = rings
                .iter()
                .enumerate()
                .all(|(h, ring)| h == gi || ring_contains(ring, p, TAU_ONEDGE));
            if inside_all {
                let tag = match poly.vertex_at(p) {
                    Some(i) if poly.is_reflex(i) => TourTag::Stable(i),
                    _ => TourTag::Moving(gi),
                };
                return Some((p, tag));
            }
        }
    }
    None
}

/// Every vertex an optimal tour can be anchored at: reflex vertices of the
/// reduced polygon and the endpoints of essential edges, in canonical order
/// (input vertices by index, then gate far endpoints by gate).
fn exhaustive_candidates(rp: &ReducedPolygon) -> Vec<usize> {
    let m = rp.polygon.len();
    let mut on_essential = vec![false; m];
    for e in &rp.essential {
        on_essential[e.edge] = true;
        on_essential[(e.edge + 1) % m] = true;
    }
    let mut c: Vec<usize> = (0..m)
        .filter(|&k| on_essential[k] || rp.polygon.is_reflex(k))
        .collect();
    c.sort_by_key(|&k| match rp.origins[k] {
        VertexOrigin::Polygon(i) => (0, i),
        VertexOrigin::GateFar(g) => (1, g),
    });
    c
}

/// The constant-size start set for a pair of adjacent gates, united over all
/// adjacent pairs when there are more than two gates.
///
/// Same color: per boundary path between the gates, the reflex vertex that
/// reaches furthest into the reduced polygon across the chords. Mixed colors:
/// the four chord endpoints and, for each endpoint, the last bend of its
/// sleeve path before the path first meets a gate.
pub fn candidate_vertices(rp: &ReducedPolygon) -> Result<Vec<Point>> {
    let k = rp.essential.len();
    if k < 2 {
        return Err(Error::TooFewEssentialEdges(k));
    }
    let m = rp.polygon.len();
    let tri = triangulate(rp)?;
    let pairs: Vec<(usize, usize)> = if k == 2 { vec![(0, 1)] } else { (0..k).map(|i| (i, (i + 1) % k)).collect() };
    let mut out: Vec<Point> = Vec::new();
    for (i, j) in pairs {
        let (ei, ej) = (rp.essential[i], rp.essential[j]);
        let (gi, gj) = (&rp.gates[ei.gate], &rp.gates[ej.gate]);
        if gi.cut.color == gj.cut.color {
            let d = gi.cut.chord.b - gi.cut.chord.a;
            let inward = Point::new(d.y, -d.x);
            for (from, to) in [(ei.edge + 1, ej.edge), (ej.edge + 1, ei.edge)] {
                let best = arc(from % m, to, m)
                    .filter(|&v| rp.polygon.is_reflex(v))
                    .max_by(|&a, &b| {
                        inward
                            .dot(rp.polygon.vertex(a))
                            .total_cmp(&inward.dot(rp.polygon.vertex(b)))
                    });
                if let Some(v) = best {
                    push(rp.polygon.vertex(v), &mut out);
                }
            }
        } else {
            for e in [ei, ej] {
                for v in [e.edge, (e.edge + 1) % m] {
                    push(rp.polygon.vertex(v), &mut out);
                    if let Some(b) = last_bend_before_gate(rp, &tri, v)? {
                        push(b, &mut out);
                    }
                }
            }
        }
    }
    Ok(out)
}

fn push(p: Point, out: &mut Vec<Point>) {
    if !out.iter().any(|q| q.dist(p) <= 1e-12) {
        out.push(p);
    }
}

/// Ring indices `from..=to`, walking forward.
fn arc(from: usize, to: usize, m: usize) -> impl Iterator<Item = usize> {
    let len = (to + m - from) % m + 1;
    (0..len).map(move |k| (from + k) % m)
}

fn last_bend_before_gate(rp: &ReducedPolygon, tri: &Triangulation, v: usize) -> Result<Option<Point>> {
    let s = unroll(rp, tri, v)?;
    let Some(first) = s.mirrors.first() else {
        return Ok(None);
    };
    let path = shortest_path(&s);
    let mirror_ext = first.portal + 1;
    let bend = (0..path.points.len())
        .rev()
        .find(|&j| path.portal_index[j] < mirror_ext && first.segment.distance_to_point(path.points[j]) > 1e-12);
    Ok(bend.map(|j| rp.polygon.vertex(path.vertices[j].unwrap_or(v))))
}

/// Splits a tour at its stable vertices into runs of moving vertices.
pub fn decompose_subpaths(t: &Tour) -> Vec<MaximalMovingSubpath> {
    let n = t.len();
    if n <= 1 {
        return Vec::new();
    }
    let stable: Vec<usize> = (0..n).filter(|&i| matches!(t.tags[i], TourTag::Stable(_))).collect();
    let moving_at = |i: usize| match t.tags[i] {
        TourTag::Moving(g) => Some((t.cycle[i], g)),
        _ => None,
    };
    if stable.is_empty() {
        return vec![MaximalMovingSubpath {
            start_stable: None,
            moving: (0..n).filter_map(moving_at).collect(),
            end_stable: None,
        }];
    }
    let mut out = Vec::new();
    for (k, &s) in stable.iter().enumerate() {
        let e = stable[(k + 1) % stable.len()];
        let gap = (e + n - s) % n;
        let gap = if gap == 0 { n } else { gap };
        let moving: Vec<_> = (1..gap).filter_map(|d| moving_at((s + d) % n)).collect();
        if !moving.is_empty() {
            out.push(MaximalMovingSubpath {
                start_stable: Some(t.cycle[s]),
                moving,
                end_stable: Some(t.cycle[e]),
            });
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn p(x: f64, y: f64) -> Point {
        Point::new(x, y)
    }

    #[test]
    fn fixture_lengths() {
        let sq = solve_theta(&fixtures::square(), Angle::from_degrees(37.0)).unwrap();
        assert_eq!(sq.length(), 0.0);
        assert_eq!(sq.tour.tags, vec![TourTag::Free]);

        let d = solve_theta(&fixtures::double(), Angle::from_degrees(0.0)).unwrap();
        assert!((d.length() - 4.0).abs() < 1e-9, "{}", d.length());
        let min = d.candidate_lengths.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!((d.length() - min).abs() < 1e-12);

        let u = solve_theta(&fixtures::unotch(), Angle::from_degrees(0.0)).unwrap();
        assert_eq!(u.length(), 0.0);
        assert_eq!(u.tour.cycle, vec![p(4.0, 2.0)]);
        assert!(matches!(u.tour.tags[0], TourTag::Stable(_)));
    }

    #[test]
    fn double_tour_is_a_doubled_vertical_segment() {
        let d = solve_theta(&fixtures::double(), Angle::from_degrees(0.0)).unwrap();
        let t = &d.tour;
        assert_eq!(t.len(), 2);
        assert!((t.cycle[0].x - t.cycle[1].x).abs() < 1e-9);
        assert!((2.5..=5.5).contains(&t.cycle[0].x));
        assert!(t.tags.iter().all(|t| matches!(t, TourTag::Moving(_))));

        assert_eq!(d.subpaths.len(), 1);
        let s = &d.subpaths[0];
        assert!(s.is_cyclic());
        assert_eq!(s.moving.len(), 2);
        let mut colors = s.colors(&d.gates);
        colors.sort_by_key(|c| *c as u8);
        assert_eq!(colors, vec![CutColor::Red, CutColor::Blue]);
        assert!(s.alternates(&d.gates));
    }

    #[test]
    fn double_candidates_include_chord_endpoints() {
        let poly = fixtures::double();
        let theta = Angle::from_degrees(0.0);
        let gates = compute_gates(&poly, &compute_cuts(&poly, theta).unwrap()).unwrap();
        let rp = reduce_polygon(&poly, &gates, theta).unwrap();
        let c = candidate_vertices(&rp).unwrap();
        for q in [p(2.0, 2.0), p(5.5, 2.0), p(2.5, 4.0), p(6.0, 4.0)] {
            assert!(c.iter().any(|x| x.dist(q) < 1e-12), "{q} missing");
        }
        assert!(c.len() <= 8);
    }

    #[test]
    fn decomposition_by_definition() {
        let theta = Angle::from_degrees(0.0);
        let t = Tour::point(p(0.0, 0.0), TourTag::Free, theta);
        assert!(decompose_subpaths(&t).is_empty());

        let t = Tour::from_cycle(
            vec![p(0.0, 0.0), p(1.0, 1.0), p(2.0, 0.0)],
            vec![TourTag::Stable(3), TourTag::Moving(0), TourTag::Stable(5)],
            theta,
        );
        let s = decompose_subpaths(&t);
        assert_eq!(s.len(), 1);
        assert_eq!(s[0].start_stable, Some(p(0.0, 0.0)));
        assert_eq!(s[0].moving, vec![(p(1.0, 1.0), 0)]);
        assert_eq!(s[0].end_stable, Some(p(2.0, 0.0)));
    }

    #[test]
    fn event_angle_is_refused() {
        let e = solve_theta(&fixtures::double(), Angle::from_degrees(75.96375653207353)).unwrap_err();
        assert!(matches!(e, Error::EventAngle { .. }));
    }
}

#[cfg(test)]
mod twin_tests {
    use super::*;
    use crate::fixtures;
    use crate::oracle::reference_min_tour;

    #[test]
    fn same_color_gates_give_two_candidates() {
        let poly = fixtures::twin();
        let theta = Angle::from_degrees(73.5);
        let gates = compute_gates(&poly, &compute_cuts(&poly, theta).unwrap()).unwrap();
        assert_eq!(gates.len(), 2);
        assert_eq!(gates[0].cut.color, gates[1].cut.color);
        let rp = reduce_polygon(&poly, &gates, theta).unwrap();
        let c = candidate_vertices(&rp).unwrap();
        assert_eq!(c.len(), 2);

        let r = solve_theta(&poly, theta).unwrap();
        let from_c = c
            .iter()
            .map(|p| {
                let i = r.candidates_tried.iter().position(|q| q.dist(*p) < 1e-12).unwrap();
                r.candidate_lengths[i]
            })
            .fold(f64::INFINITY, f64::min);
        assert!((from_c - r.length()).abs() < 1e-9);

        let m = 200;
        let reference = reference_min_tour(&poly, theta, m).unwrap();
        let chord = gates.iter().map(|g| g.cut.chord.length()).fold(0.0, f64::max);
        assert!(r.length() <= reference + 2.0 * chord / m as f64);
        assert!(reference - r.length() <= 2.0 * chord / (m - 1) as f64);
    }
}
