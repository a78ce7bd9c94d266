//! Triangulation of the reduced polygon, unrolling across essential edges,
//! funnel shortest paths and folding paths back into tours.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::gates::{ReducedPolygon, VertexOrigin};
use crate::geom::{Angle, Isometry, Point, Segment};

/// Ear-clipping triangulation over ring indices of a reduced polygon.
#[derive(Debug, Clone, PartialEq)]
pub struct Triangulation {
    /// Counterclockwise vertex triples.
    pub triangles: Vec<[usize; 3]>,
    /// `adjacency[t][k]` is the triangle across edge `(t[k], t[k+1])`.
    pub adjacency: Vec<[Option<usize>; 3]>,
}

impl Triangulation {
    pub fn len(&self) -> usize {
        self.triangles.len()
    }

    pub fn is_empty(&self) -> bool {
        self.triangles.is_empty()
    }

    /// Triangle holding the boundary edge `(i, i+1)` of an `m`-ring.
    fn triangle_of_edge(&self, i: usize, m: usize) -> Option<usize> {
        let j = (i + 1) % m;
        self.triangles
            .iter()
            .position(|t| (0..3).any(|k| t[k] == i && t[(k + 1) % 3] == j))
    }

    fn contains_vertex(&self, t: usize, v: usize) -> bool {
        self.triangles[t].contains(&v)
    }

    /// Dual-tree path from `from` to the nearest triangle satisfying `goal`.
    fn path_to(&self, from: usize, goal: impl Fn(usize) -> bool) -> Option<Vec<usize>> {
        let mut parent = vec![usize::MAX; self.len()];
        parent[from] = from;
        let mut queue = VecDeque::from([from]);
        while let Some(t) = queue.pop_front() {
            if goal(t) {
                let mut path = vec![t];
                let mut c = t;
                while c != from {
                    c = parent[c];
                    path.push(c);
                }
                path.reverse();
                return Some(path);
            }
            for n in self.adjacency[t].iter().flatten() {
                if parent[*n] == usize::MAX {
                    parent[*n] = t;
                    queue.push_back(*n);
                }
            }
        }
        None
    }

    /// The edge shared by adjacent triangles `a` and `b`, as stored in `a`.
    fn shared_edge(&self, a: usize, b: usize) -> Option<(usize, usize)> {
        let t = self.triangles[a];
        (0..3)
            .find(|&k| self.adjacency[a][k] == Some(b))
            .map(|k| (t[k], t[(k + 1) % 3]))
    }
}

pub fn triangulate(rp: &ReducedPolygon) -> Result<Triangulation> {
    let pts = rp.polygon.vertices();
    let n = pts.len();
    if n < 3 {
        return Err(Error::Triangulation(format!("{n} vertices")));
    }
    let mut ring: Vec<usize> = (0..n).collect();
    let mut triangles = Vec::with_capacity(n - 2);
    while ring.len() > 3 {
        let m = ring.len();
        let mut best: Option<(usize, f64)> = None;
        for k in 0..m {
            let (a, b, c) = (ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]);
            let area = (pts[b] - pts[a]).cross(pts[c] - pts[a]);
            if area <= 0.0 {
                continue;
            }
            let blocked = ring.iter().any(|&o| {
                o != a && o != b && o != c && in_closed_triangle(pts[a], pts[b], pts[c], pts[o])
            });
            if !blocked {
                // Fattest ear first keeps slivers out of the funnel.
                let q = area / (pts[a].dist(pts[b]) + pts[b].dist(pts[c]) + pts[c].dist(pts[a])).powi(2);
                if best.map_or(true, |(_, bq)| q > bq) {
                    best = Some((k, q));
                }
            }
        }
        let Some((k, _)) = best else {
            return Err(Error::Triangulation("no ear found".into()));
        };
        let m = ring.len();
        triangles.push([ring[(k + m - 1) % m], ring[k], ring[(k + 1) % m]]);
        ring.remove(k);
    }
    triangles.push([ring[0], ring[1], ring[2]]);

    let mut by_edge: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
    let mut adjacency = vec![[None; 3]; triangles.len()];
    for (t, tri) in triangles.iter().enumerate() {
        for k in 0..3 {
            let (a, b) = (tri[k], tri[(k + 1) % 3]);
            if let Some((u, uk)) = by_edge.remove(&(b, a)) {
                adjacency[t][k] = Some(u);
                adjacency[u][uk] = Some(t);
            } else {
                by_edge.insert((a, b), (t, k));
            }
        }
    }
    Ok(Triangulation {
        triangles,
        adjacency,
    })
}

fn in_closed_triangle(a: Point, b: Point, c: Point, p: Point) -> bool {
    let eps = 1e-12 * (1.0 + a.norm().max(b.norm()).max(c.norm()));
    (b - a).cross(p - a) >= -eps && (c - b).cross(p - b) >= -eps && (a - c).cross(p - c) >= -eps
}

/// A triangle placed in the unrolled plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Panel {
    pub triangle: usize,
    pub transform: Isometry,
}

/// The edge between consecutive panels, oriented for a walker heading to the image.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Portal {
    pub left: usize,
    pub right: usize,
    pub left_pt: Point,
    pub right_pt: Point,
    /// Gate index when the portal is an essential edge.
    pub mirror: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Mirror {
    pub portal: usize,
    pub gate: usize,
    pub segment: Segment,
}

/// The reduced polygon unrolled from `start` around to its image.
#[derive(Debug, Clone, PartialEq)]
pub struct Sleeve {
    pub start: usize,
    pub panels: Vec<Panel>,
    pub portals: Vec<Portal>,
    pub mirrors: Vec<Mirror>,
    pub source: Point,
    pub image: Point,
}

impl Sleeve {
    /// The composed motion of the last panel; maps the source onto the image.
    pub fn final_transform(&self) -> Isometry {
        self.panels.last().map_or(Isometry::IDENTITY, |p| p.transform)
    }
}

pub fn unroll(rp: &ReducedPolygon, tri: &Triangulation, v: usize) -> Result<Sleeve> {
    let m = rp.polygon.len();
    if v >= m {
        return Err(Error::VertexOutOfRange(v));
    }
    let source = rp.polygon.vertex(v);
    let mirrors_ccw: Vec<_> = (0..m)
        .map(|k| (v + k) % m)
        .filter_map(|k| rp.essential_at(k).map(|e| (k, e.gate)))
        .collect();
    if mirrors_ccw.is_empty() {
        return Ok(Sleeve {
            start: v,
            panels: Vec::new(),
            portals: Vec::new(),
            mirrors: Vec::new(),
            source,
            image: source,
        });
    }
    let targets: Vec<usize> = mirrors_ccw
        .iter()
        .map(|&(k, _)| {
            tri.triangle_of_edge(k, m)
                .ok_or_else(|| Error::Internal(format!("essential edge {k} not in triangulation")))
        })
        .collect::<Result<_>>()?;

    let to_fan = |from: usize| {
        tri.path_to(from, |t| tri.contains_vertex(t, v))
            .ok_or_else(|| Error::Internal("dual tree is disconnected".into()))
    };
    let mut chain = to_fan(targets[0])?;
    chain.reverse();

    let mut sleeve = Sleeve {
        start: v,
        panels: Vec::new(),
        portals: Vec::new(),
        mirrors: Vec::new(),
        source,
        image: source,
    };
    let mut xf = Isometry::IDENTITY;
    let push_chain = |sleeve: &mut Sleeve, chain: &[usize], xf: Isometry| -> Result<()> {
        for (i, &t) in chain.iter().enumerate() {
            if i > 0 || sleeve.panels.is_empty() {
                if let Some(prev) = sleeve.panels.last().map(|p| p.triangle) {
                    let (a, b) = tri
                        .shared_edge(prev, t)
                        .ok_or_else(|| Error::Internal("chain triangles not adjacent".into()))?;
                    sleeve.portals.push(portal(rp, tri, prev, a, b, &xf, None));
                }
                sleeve.panels.push(Panel {
                    triangle: t,
                    transform: xf,
                });
            }
        }
        Ok(())
    };
    push_chain(&mut sleeve, &chain, xf)?;

    for (i, &(k, gate)) in mirrors_ccw.iter().enumerate() {
        let t = targets[i];
        let edge = rp.polygon.edge(k);
        let p = portal(rp, tri, t, k, (k + 1) % m, &xf, Some(gate));
        sleeve.mirrors.push(Mirror {
            portal: sleeve.portals.len(),
            gate,
            segment: Segment::new(xf.apply(edge.a), xf.apply(edge.b)),
        });
        sleeve.portals.push(p);
        xf = xf.compose(&Isometry::reflection(&edge)?);
        sleeve.panels.push(Panel {
            triangle: t,
            transform: xf,
        });
        let next = match targets.get(i + 1) {
            Some(&n) => tri
                .path_to(t, |u| u == n)
                .ok_or_else(|| Error::Internal("dual tree is disconnected".into()))?,
            None => to_fan(t)?,
        };
        push_chain(&mut sleeve, &next, xf)?;
    }
    sleeve.image = xf.apply(source);
    Ok(sleeve)
}

/// Portal across edge `(a, b)` of triangle `t`, placed by `xf`.
fn portal(
    rp: &ReducedPolygon,
    tri: &Triangulation,
    t: usize,
    a: usize,
    b: usize,
    xf: &Isometry,
    mirror: Option<usize>,
) -> Portal {
    let r = *tri.triangles[t].iter().find(|&&x| x != a && x != b).unwrap();
    let (pr, pa, pb) = (
        xf.apply(rp.polygon.vertex(r)),
        xf.apply(rp.polygon.vertex(a)),
        xf.apply(rp.polygon.vertex(b)),
    );
    // Walking out of the triangle away from r: a is on the right iff r, a, b turn left.
    if (pa - pr).cross(pb - pr) > 0.0 {
        Portal {
            left: b,
            right: a,
            left_pt: pb,
            right_pt: pa,
            mirror,
        }
    } else {
        Portal {
            left: a,
            right: b,
            left_pt: pa,
            right_pt: pb,
            mirror,
        }
    }
}

/// A funnel path in unrolled coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SleevePath {
    pub points: Vec<Point>,
    /// Ring index of each bend; `None` for the source and image.
    pub vertices: Vec<Option<usize>>,
    /// Index into the extended portal list (0 = source, last = image) where each point sits.
    pub portal_index: Vec<usize>,
    pub length: f64,
}

/// Shortest path from source to image through the sleeve's portals.
pub fn shortest_path(s: &Sleeve) -> SleevePath {
    // Extended portal list: source, the sleeve's portals, image.
    let mut ports: Vec<(Point, Point, Option<usize>, Option<usize>)> = Vec::with_capacity(s.portals.len() + 2);
    ports.push((s.source, s.source, None, None));
    ports.extend(
        s.portals
            .iter()
            .map(|p| (p.left_pt, p.right_pt, Some(p.left), Some(p.right))),
    );
    ports.push((s.image, s.image, None, None));

    let mut points = vec![s.source];
    let mut vertices = vec![None];
    let mut portal_index = vec![0];

    let (mut apex, mut left, mut right) = (s.source, s.source, s.source);
    let (mut left_i, mut right_i) = (0usize, 0usize);
    let mut i = 1;
    while i < ports.len() {
        let (l, r, _, _) = ports[i];
        if (right - apex).cross(r - apex) >= 0.0 {
            if apex == right || (left - apex).cross(r - apex) < 0.0 {
                right = r;
                right_i = i;
            } else {
                points.push(left);
                vertices.push(ports[left_i].2);
                portal_index.push(left_i);
                apex = left;
                right = apex;
                right_i = left_i;
                i = left_i + 1;
                continue;
            }
        }
        if (left - apex).cross(l - apex) <= 0.0 {
            if apex == left || (right - apex).cross(l - apex) > 0.0 {
                left = l;
                left_i = i;
            } else {
                points.push(right);
                vertices.push(ports[right_i].3);
                portal_index.push(right_i);
                apex = right;
                left = apex;
                left_i = right_i;
                i = right_i + 1;
                continue;
            }
        }
        i += 1;
    }
    let last = ports.len() - 1;
    if *points.last().unwrap() != s.image || points.len() == 1 {
        points.push(s.image);
        vertices.push(None);
        portal_index.push(last);
    } else {
        *portal_index.last_mut().unwrap() = last;
        *vertices.last_mut().unwrap() = None;
    }
    let length = points.windows(2).map(|w| w[0].dist(w[1])).sum();
    SleevePath {
        points,
        vertices,
        portal_index,
        length,
    }
}

/// Role of a tour vertex.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TourTag {
    /// A reflex vertex of the input polygon.
    Stable(usize),
    /// A point on the chord of the given gate.
    Moving(usize),
    /// Neither; only the canonical point of a tour in a polygon with no gates.
    Free,
}

impl fmt::Display for TourTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TourTag::Stable(v) => write!(f, "stable({v})"),
            TourTag::Moving(g) => write!(f, "moving({g})"),
            TourTag::Free => f.write_str("free"),
        }
    }
}

/// A closed tour; the segment from the last point back to the first is implied.
#[derive(Debug, Clone, PartialEq)]
pub struct Tour {
    pub cycle: Vec<Point>,
    pub tags: Vec<TourTag>,
    pub length: f64,
    pub theta: Angle,
}

impl Tour {
    pub fn point(p: Point, tag: TourTag, theta: Angle) -> Tour {
        Tour {
            cycle: vec![p],
            tags: vec![tag],
            length: 0.0,
            theta,
        }
    }

    pub fn from_cycle(cycle: Vec<Point>, tags: Vec<TourTag>, theta: Angle) -> Tour {
        let n = cycle.len();
        let length = (0..n).map(|i| cycle[i].dist(cycle[(i + 1) % n])).sum();
        Tour {
            cycle,
            tags,
            length,
            theta,
        }
    }

    pub fn len(&self) -> usize {
        self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cycle.is_empty()
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        let n = self.cycle.len();
        (0..n).map(move |i| Segment::new(self.cycle[i], self.cycle[(i + 1) % n]))
    }
}

fn tag_priority(t: TourTag) -> u8 {
    match t {
        TourTag::Stable(_) => 2,
        TourTag::Moving(_) => 1,
        TourTag::Free => 0,
    }
}

/// Maps an unrolled path back into the reduced polygon's plane.
pub fn fold_back(rp: &ReducedPolygon, s: &Sleeve, path: &SleevePath) -> Result<Tour> {
    let theta = rp.theta;
    let source_tag = vertex_tag(rp, s.start, None);
    if path.length == 0.0 || s.mirrors.is_empty() {
        return Ok(Tour::point(s.source, source_tag, theta));
    }
    let np = s.portals.len() + 2;
    // Extended portal k (1..=len) is sleeve portal k-1.
    let port = |k: usize| &s.portals[k - 1];
    let orig = |ring: usize| rp.polygon.vertex(ring);

    // Contiguous run of extended portals having this path point as an endpoint.
    let range = |j: usize| -> (usize, usize) {
        let (p, k) = (path.points[j], path.portal_index[j]);
        let has = |k: usize| k >= 1 && k < np - 1 && (port(k).left_pt == p || port(k).right_pt == p);
        let (mut lo, mut hi) = (k, k);
        if k == 0 {
            hi = 0;
            while has(hi + 1) {
                hi += 1;
            }
        } else if k == np - 1 {
            lo = np - 1;
            while has(lo - 1) {
                lo -= 1;
            }
        } else {
            while has(lo - 1) {
                lo -= 1;
            }
            while has(hi + 1) {
                hi += 1;
            }
        }
        (lo, hi)
    };

    let mirror_at: HashMap<usize, usize> = s.mirrors.iter().map(|m| (m.portal + 1, m.gate)).collect();
    let mut cycle = Vec::new();
    let mut tags = Vec::new();
    let mut next_free = 1;
    let last = path.points.len() - 1;
    for j in 0..last {
        let (lo, hi) = range(j);
        let ring = path.vertices[j].unwrap_or(s.start);
        let mut tag = None;
        for k in next_free.max(lo)..=hi {
            if let Some(&g) = mirror_at.get(&k) {
                tag = Some(vertex_tag(rp, ring, Some(g)));
            }
        }
        cycle.push(orig(ring));
        tags.push(tag.unwrap_or_else(|| vertex_tag(rp, ring, None)));
        next_free = next_free.max(hi + 1);

        let (next_lo, _) = range(j + 1);
        let seg = (path.points[j], path.points[j + 1]);
        for k in next_free..next_lo {
            if let Some(&g) = mirror_at.get(&k) {
                let p = port(k);
                let t = crossing_param(p.left_pt, p.right_pt, seg.0, seg.1);
                cycle.push(orig(p.left).lerp(orig(p.right), t));
                tags.push(TourTag::Moving(g));
            }
        }
        next_free = next_free.max(next_lo);
    }

    // Merge coincident neighbours, keeping the most specific tag.
    let mut out: Vec<(Point, TourTag)> = Vec::with_capacity(cycle.len());
    for (p, t) in cycle.into_iter().zip(tags) {
        match out.last_mut() {
            Some((q, qt)) if q.dist(p) <= 1e-12 => {
                if tag_priority(t) > tag_priority(*qt) {
                    *qt = t;
                }
            }
            _ => out.push((p, t)),
        }
    }
    while out.len() > 1 && out[0].0.dist(out[out.len() - 1].0) <= 1e-12 {
        let (_, t) = out.pop().unwrap();
        if tag_priority(t) > tag_priority(out[0].1) {
            out[0].1 = t;
        }
    }
    let (cycle, tags) = out.into_iter().unzip();
    Ok(Tour::from_cycle(cycle, tags, theta))
}

fn vertex_tag(rp: &ReducedPolygon, ring: usize, gate: Option<usize>) -> TourTag {
    match (rp.origins[ring], gate) {
        (VertexOrigin::Polygon(i), _) if rp.reflex_in_source[ring] => TourTag::Stable(i),
        (_, Some(g)) => TourTag::Moving(g),
        (VertexOrigin::GateFar(g), None) => TourTag::Moving(g),
        _ => TourTag::Free,
    }
}

/// Parameter along `a → b` where segment `p → q` meets it, clamped to `[0, 1]`.
fn crossing_param(a: Point, b: Point, p: Point, q: Point) -> f64 {
    let d = b - a;
    let e = q - p;
    let den = d.cross(e);
    let t = if den.abs() < 1e-300 {
        Segment::new(a, b).project_param(p)
    } else {
        (p - a).cross(e) / den
    };
    t.clamp(0.0, 1.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cuts::compute_cuts;
    use crate::fixtures;
    use crate::gates::{compute_gates, reduce_polygon};
    use crate::geom::Polygon;

    fn reduced(poly: &Polygon, deg: f64) -> ReducedPolygon {
        let theta = Angle::from_degrees(deg);
        let cuts = compute_cuts(poly, theta).unwrap();
        let gates = compute_gates(poly, &cuts).unwrap();
        reduce_polygon(poly, &gates, theta).unwrap()
    }

    #[test]
    fn triangulation_counts() {
        let rp = reduced(&fixtures::double(), 0.0);
        let t = triangulate(&rp).unwrap();
        assert_eq!(t.len(), rp.polygon.len() - 2);
        let area: f64 = t
            .triangles
            .iter()
            .map(|tr| {
                let p = |i: usize| rp.polygon.vertex(tr[i]);
                (p(1) - p(0)).cross(p(2) - p(0)) / 2.0
            })
            .sum();
        assert!((area - rp.polygon.area()).abs() < 1e-12);

        let sq = reduced(&fixtures::square(), 0.0);
        assert_eq!(triangulate(&sq).unwrap().len(), 2);
    }

    #[test]
    fn double_sleeve_from_lower_left() {
        let rp = reduced(&fixtures::double(), 0.0);
        let tri = triangulate(&rp).unwrap();
        let v = rp.polygon.vertex_at(Point::new(2.0, 2.0)).unwrap();
        let s = unroll(&rp, &tri, v).unwrap();
        assert_eq!(s.mirrors.len(), 2);
        assert!((s.source.dist(s.image) - 4.0).abs() < 1e-12);
        assert!(s.final_transform().inverse().apply(s.image).approx_eq(s.source, 1e-12));
        assert!(s.panels.len() <= 6 * tri.len());

        // The straight line x = 2 misses the reflected upper chord, so the path bends.
        let path = shortest_path(&s);
        assert!((path.length - 2.0 * 4.25f64.sqrt()).abs() < 1e-9);
        let tour = fold_back(&rp, &s, &path).unwrap();
        assert!((tour.length - path.length).abs() < 1e-9);
    }

    #[test]
    fn double_sleeve_from_upper_chord() {
        let rp = reduced(&fixtures::double(), 0.0);
        let tri = triangulate(&rp).unwrap();
        let v = rp.polygon.vertex_at(Point::new(2.5, 4.0)).unwrap();
        let s = unroll(&rp, &tri, v).unwrap();
        let path = shortest_path(&s);
        assert!((path.length - 4.0).abs() < 1e-9);
        let tour = fold_back(&rp, &s, &path).unwrap();
        assert!((tour.length - 4.0).abs() < 1e-9);
        assert_eq!(tour.len(), 2);
        assert!(tour.cycle.iter().all(|p| (p.x - 2.5).abs() < 1e-9));
        assert!(tour.tags.iter().all(|t| matches!(t, TourTag::Moving(_))));
    }

    #[test]
    fn degenerate_sleeve() {
        let rp = reduced(&fixtures::square(), 0.0);
        let tri = triangulate(&rp).unwrap();
        let s = unroll(&rp, &tri, 0).unwrap();
        assert_eq!(s.source, s.image);
        let path = shortest_path(&s);
        assert_eq!(path.length, 0.0);
        let tour = fold_back(&rp, &s, &path).unwrap();
        assert_eq!(tour.len(), 1);
        assert_eq!(tour.length, 0.0);
    }
}
