//! Planar primitives, tolerant predicates and the input polygon.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// Collinearity threshold for [`orient`], in area units.
pub const TAU_ORIENT: f64 = 1e-9;
/// Distance under which a point counts as lying on an edge or chord.
pub const TAU_ONEDGE: f64 = 1e-7;
/// Distance under which a ray hit counts as passing through a vertex.
pub const VERTEX_HIT_TOL: f64 = 1e-9;
/// Angular nudge applied when a chord runs exactly through a second vertex.
pub const DEGENERATE_NUDGE_DEG: f64 = 1e-7;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    /// z-component of the 3d cross product.
    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn dist(self, o: Point) -> f64 {
        (self - o).norm()
    }

    /// Counterclockwise quarter turn.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }

    pub fn lerp(self, o: Point, t: f64) -> Point {
        self + (o - self) * t
    }

    pub fn midpoint(self, o: Point) -> Point {
        self.lerp(o, 0.5)
    }

    pub fn approx_eq(self, o: Point, tol: f64) -> bool {
        self.dist(o) <= tol
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

impl Neg for Point {
    type Output = Point;
    fn neg(self) -> Point {
        Point::new(-self.x, -self.y)
    }
}

impl fmt::Display for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// A line direction in degrees, normalized to `[0, 180)`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default)]
pub struct Angle(f64);

impl Angle {
    pub fn from_degrees(deg: f64) -> Self {
        let v = deg.rem_euclid(180.0);
        // rem_euclid can round up to the modulus for tiny negative inputs
        if v >= 180.0 {
            Angle(0.0)
        } else {
            Angle(v)
        }
    }

    pub fn degrees(self) -> f64 {
        self.0
    }

    pub fn radians(self) -> f64 {
        self.0.to_radians()
    }

    /// Unit vector pointing along the direction.
    pub fn direction(self) -> Point {
        let (s, c) = self.radians().sin_cos();
        Point::new(c, s)
    }

    pub fn offset(self, delta_deg: f64) -> Angle {
        Angle::from_degrees(self.0 + delta_deg)
    }

    /// Smallest distance between two angles on the 180° circle.
    pub fn circular_distance(self, o: Angle) -> f64 {
        let d = (self.0 - o.0).abs();
        d.min(180.0 - d)
    }

    /// Direction of the line through `a` and `b`.
    pub fn of_line(a: Point, b: Point) -> Angle {
        let d = b - a;
        Angle::from_degrees(d.y.atan2(d.x).to_degrees())
    }
}

impl fmt::Display for Angle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}°", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn midpoint(&self) -> Point {
        self.a.midpoint(self.b)
    }

    pub fn is_degenerate(&self) -> bool {
        self.a.dist(self.b) <= f64::EPSILON * (1.0 + self.a.norm())
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }

    /// Parameter of the orthogonal projection of `p` onto the supporting line.
    pub fn project_param(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let l2 = d.dot(d);
        if l2 == 0.0 {
            return 0.0;
        }
        (p - self.a).dot(d) / l2
    }

    pub fn distance_to_point(&self, p: Point) -> f64 {
        let t = self.project_param(p).clamp(0.0, 1.0);
        self.a.lerp(self.b, t).dist(p)
    }

    /// Distance between two closed segments.
    pub fn distance_to_segment(&self, o: &Segment) -> f64 {
        if segments_cross(self, o) {
            return 0.0;
        }
        self.distance_to_point(o.a)
            .min(self.distance_to_point(o.b))
            .min(o.distance_to_point(self.a))
            .min(o.distance_to_point(self.b))
    }
}

/// True if the closed segments share at least one point (exact sign tests).
pub fn segments_cross(s: &Segment, o: &Segment) -> bool {
    let d1 = (s.b - s.a).cross(o.a - s.a);
    let d2 = (s.b - s.a).cross(o.b - s.a);
    let d3 = (o.b - o.a).cross(s.a - o.a);
    let d4 = (o.b - o.a).cross(s.b - o.a);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    let on = |p: Point, q: Point, r: Point, d: f64| {
        d == 0.0
            && r.x >= p.x.min(q.x)
            && r.x <= p.x.max(q.x)
            && r.y >= p.y.min(q.y)
            && r.y <= p.y.max(q.y)
    };
    on(s.a, s.b, o.a, d1) || on(s.a, s.b, o.b, d2) || on(o.a, o.b, s.a, d3) || on(o.a, o.b, s.b, d4)
}

/// True if the open segments cross at a single interior point of both.
pub fn segments_cross_properly(s: &Segment, o: &Segment) -> bool {
    let d1 = orient(s.a, s.b, o.a);
    let d2 = orient(s.a, s.b, o.b);
    let d3 = orient(o.a, o.b, s.a);
    let d4 = orient(o.a, o.b, s.b);
    d1 * d2 < 0 && d3 * d4 < 0
}

/// Sign of twice the signed area of `pqr`; zero within [`TAU_ORIENT`].
pub fn orient(p: Point, q: Point, r: Point) -> i32 {
    let a = (q - p).cross(r - p);
    if a > TAU_ORIENT {
        1
    } else if a < -TAU_ORIENT {
        -1
    } else {
        0
    }
}

/// Rigid motion `x -> m x + t` of the plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    m: [[f64; 2]; 2],
    t: Point,
}

impl Isometry {
    pub const IDENTITY: Isometry = Isometry {
        m: [[1.0, 0.0], [0.0, 1.0]],
        t: Point::new(0.0, 0.0),
    };

    /// Reflection across the supporting line of `mirror`.
    pub fn reflection(mirror: &Segment) -> Result<Isometry> {
        let d = mirror.b - mirror.a;
        let len = d.norm();
        if !(len > 0.0) || mirror.is_degenerate() {
            return Err(Error::DegenerateMirror);
        }
        let (c, s) = (d.x / len, d.y / len);
        let m = [[c * c - s * s, 2.0 * c * s], [2.0 * c * s, s * s - c * c]];
        let a = mirror.a;
        let ma = Point::new(m[0][0] * a.x + m[0][1] * a.y, m[1][0] * a.x + m[1][1] * a.y);
        Ok(Isometry { m, t: a - ma })
    }

    pub fn apply(&self, p: Point) -> Point {
        Point::new(
            self.m[0][0] * p.x + self.m[0][1] * p.y + self.t.x,
            self.m[1][0] * p.x + self.m[1][1] * p.y + self.t.y,
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &Isometry) -> Isometry {
        let m = &self.m;
        let o = &other.m;
        let mm = [
            [
                m[0][0] * o[0][0] + m[0][1] * o[1][0],
                m[0][0] * o[0][1] + m[0][1] * o[1][1],
            ],
            [
                m[1][0] * o[0][0] + m[1][1] * o[1][0],
                m[1][0] * o[0][1] + m[1][1] * o[1][1],
            ],
        ];
        Isometry {
            m: mm,
            t: self.apply(other.t),
        }
    }

    pub fn inverse(&self) -> Isometry {
        let mt = [[self.m[0][0], self.m[1][0]], [self.m[0][1], self.m[1][1]]];
        let ti = Point::new(
            -(mt[0][0] * self.t.x + mt[0][1] * self.t.y),
            -(mt[1][0] * self.t.x + mt[1][1] * self.t.y),
        );
        Isometry { m: mt, t: ti }
    }

    /// True for orientation-reversing motions.
    pub fn is_mirrored(&self) -> bool {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0] < 0.0
    }
}

/// Image of `p` under reflection across the supporting line of `mirror`.
pub fn reflect_point(p: Point, mirror: &Segment) -> Result<Point> {
    Ok(Isometry::reflection(mirror)?.apply(p))
}

/// Twice the signed area of a closed ring.
pub fn ring_area2(ring: &[Point]) -> f64 {
    let n = ring.len();
    (0..n).map(|i| ring[i].cross(ring[(i + 1) % n])).sum()
}

/// Closed point-in-ring test: points within `tol` of the boundary count as inside.
pub fn ring_contains(ring: &[Point], p: Point, tol: f64) -> bool {
    let n = ring.len();
    if n == 0 {
        return false;
    }
    if ring_boundary_distance(ring, p) <= tol {
        return true;
    }
    let mut inside = false;
    for i in 0..n {
        let a = ring[i];
        let b = ring[(i + 1) % n];
        if (a.y > p.y) != (b.y > p.y) {
            let x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if x > p.x {
                inside = !inside;
            }
        }
    }
    inside
}

pub fn ring_boundary_distance(ring: &[Point], p: Point) -> f64 {
    let n = ring.len();
    (0..n)
        .map(|i| Segment::new(ring[i], ring[(i + 1) % n]).distance_to_point(p))
        .fold(f64::INFINITY, f64::min)
}

/// A point on the polygon boundary, located on edge `edge` at parameter `t ∈ [0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub point: Point,
    pub edge: usize,
    pub t: f64,
}

impl BoundaryPoint {
    /// Position along the boundary ring, in `[0, n)`.
    pub fn key(&self) -> f64 {
        self.edge as f64 + self.t
    }

    /// Vertex index when the point sits on a vertex.
    pub fn vertex(&self) -> Option<usize> {
        (self.t == 0.0).then_some(self.edge)
    }
}

/// Simple polygon with a counterclockwise vertex ring.
#[derive(Debug, Clone, PartialEq)]
pub struct Polygon {
    vertices: Vec<Point>,
    reflex: Vec<usize>,
}

impl Polygon {
    /// Validates a counterclockwise ring. Collinear consecutive vertices are merged.
    pub fn new(points: Vec<Point>) -> Result<Polygon> {
        let (poly, reversed) = Self::from_any_orientation(points)?;
        if reversed {
            return Err(Error::InvalidPolygon {
                reason: "vertices are in clockwise order".into(),
                vertex: None,
            });
        }
        Ok(poly)
    }

    /// Like [`Polygon::new`] but reverses clockwise input; the flag reports a reversal.
    pub fn from_any_orientation(points: Vec<Point>) -> Result<(Polygon, bool)> {
        let invalid = |reason: &str, vertex: Option<usize>| Error::InvalidPolygon {
            reason: reason.to_string(),
            vertex,
        };
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(invalid("non-finite coordinate", Some(i)));
        }
        if points.len() < 3 {
            return Err(invalid("fewer than three vertices", None));
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(invalid("duplicate vertex", Some(j)));
                }
            }
        }
        let mut pts = merge_collinear(points);
        if pts.len() < 3 {
            return Err(invalid("all vertices are collinear", None));
        }
        let area2 = ring_area2(&pts);
        if area2 == 0.0 {
            return Err(invalid("zero area", None));
        }
        let reversed = area2 < 0.0;
        if reversed {
            pts.reverse();
        }
        let n = pts.len();
        for i in 0..n {
            let e = Segment::new(pts[i], pts[(i + 1) % n]);
            for j in i + 1..n {
                if j == i + 1 || (i == 0 && j == n - 1) {
                    continue;
                }
                let f = Segment::new(pts[j], pts[(j + 1) % n]);
                if segments_cross(&e, &f) {
                    return Err(invalid("boundary self-intersects", Some(i)));
                }
            }
        }
        let reflex = (0..n)
            .filter(|&i| {
                let p = pts[(i + n - 1) % n];
                let q = pts[(i + 1) % n];
                (pts[i] - p).cross(q - pts[i]) < 0.0
            })
            .collect();
        Ok((
            Polygon {
                vertices: pts,
                reflex,
            },
            reversed,
        ))
    }

    /// Builds a polygon from a ring already known to be simple and counterclockwise.
    pub(crate) fn from_trusted_ring(pts: Vec<Point>) -> Polygon {
        let n = pts.len();
        let reflex = (0..n)
            .filter(|&i| {
                let p = pts[(i + n - 1) % n];
                let q = pts[(i + 1) % n];
                (pts[i] - p).cross(q - pts[i]) < 0.0
            })
            .collect();
        Polygon {
            vertices: pts,
            reflex,
        }
    }

    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i % self.len()]
    }

    pub fn next(&self, i: usize) -> usize {
        (i + 1) % self.len()
    }

    pub fn prev(&self, i: usize) -> usize {
        (i + self.len() - 1) % self.len()
    }

    /// Edge `i` runs from vertex `i` to vertex `i + 1`.
    pub fn edge(&self, i: usize) -> Segment {
        Segment::new(self.vertex(i), self.vertex(self.next(i)))
    }

    pub fn edges(&self) -> impl Iterator<Item = Segment> + '_ {
        (0..self.len()).map(|i| self.edge(i))
    }

    pub fn reflex_vertices(&self) -> &[usize] {
        &self.reflex
    }

    pub fn is_reflex(&self, i: usize) -> bool {
        self.reflex.binary_search(&i).is_ok()
    }

    pub fn area(&self) -> f64 {
        0.5 * ring_area2(&self.vertices)
    }

    pub fn diameter(&self) -> f64 {
        let mut d: f64 = 0.0;
        for (i, a) in self.vertices.iter().enumerate() {
            for b in &self.vertices[i + 1..] {
                d = d.max(a.dist(*b));
            }
        }
        d
    }

    /// Closed containment with boundary tolerance [`TAU_ONEDGE`].
    pub fn contains(&self, p: Point) -> bool {
        ring_contains(&self.vertices, p, TAU_ONEDGE)
    }

    pub fn boundary_distance(&self, p: Point) -> f64 {
        ring_boundary_distance(&self.vertices, p)
    }

    /// Index of the vertex at `p`, if any, within [`TAU_ONEDGE`].
    pub fn vertex_at(&self, p: Point) -> Option<usize> {
        self.vertices.iter().position(|v| v.dist(p) <= TAU_ONEDGE)
    }

    /// True if the closed segment stays inside the closed polygon.
    pub fn segment_inside(&self, s: &Segment) -> bool {
        if !self.contains(s.a) || !self.contains(s.b) {
            return false;
        }
        for e in self.edges() {
            if segments_cross_properly(s, &e) {
                return false;
            }
        }
        // the segment may still leave through vertices; sample between boundary contacts
        let mut ts = vec![0.0, 1.0];
        for v in &self.vertices {
            if s.distance_to_point(*v) <= TAU_ONEDGE {
                ts.push(s.project_param(*v).clamp(0.0, 1.0));
            }
        }
        ts.sort_by(f64::total_cmp);
        ts.windows(2)
            .all(|w| w[1] - w[0] <= 1e-12 || self.contains(s.a.lerp(s.b, 0.5 * (w[0] + w[1]))))
    }

    /// Lowest, then leftmost vertex.
    pub fn lowest_vertex(&self) -> usize {
        (0..self.len())
            .min_by(|&i, &j| {
                let (a, b) = (self.vertices[i], self.vertices[j]);
                a.y.total_cmp(&b.y).then(a.x.total_cmp(&b.x))
            })
            .expect("non-empty polygon")
    }

    /// Closed boundary walk from `from` to `to` (counterclockwise), listing the
    /// vertices strictly between them.
    pub(crate) fn vertices_between(&self, from: &BoundaryPoint, to: &BoundaryPoint) -> Vec<usize> {
        let n = self.len();
        let mut out = Vec::new();
        // first vertex strictly after `from`
        let mut i = self.next(from.edge);
        let stop = if to.t == 0.0 { to.edge } else { self.next(to.edge) };
        let same_edge_forward = from.edge == to.edge && to.t > from.t;
        if same_edge_forward {
            return out;
        }
        for _ in 0..n {
            if i == stop {
                break;
            }
            out.push(i);
            i = self.next(i);
        }
        out
    }
}

/// Drops vertices whose neighbors make a straight angle with them.
fn merge_collinear(mut pts: Vec<Point>) -> Vec<Point> {
    loop {
        let n = pts.len();
        if n < 3 {
            return pts;
        }
        let drop = (0..n).find(|&i| {
            let p = pts[(i + n - 1) % n];
            let q = pts[(i + 1) % n];
            let v = pts[i];
            (v - p).cross(q - v).abs() <= TAU_ORIENT * (v - p).norm().max(1.0)
                && (v - p).dot(q - v) > 0.0
        });
        match drop {
            Some(i) => {
                pts.remove(i);
            }
            None => return pts,
        }
    }
}

/// Result of shooting the two rays of a maximal chord through a vertex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Chord {
    /// Directed along the query angle: `segment.a` is the back end, `segment.b` the front end.
    pub segment: Segment,
    pub back: BoundaryPoint,
    pub front: BoundaryPoint,
    /// Angle actually used, when the query was nudged off a degenerate direction.
    pub perturbed: Option<Angle>,
}

/// Maximal segment through vertex `v` with direction `theta` whose interior lies in `poly`.
pub fn max_chord_through(poly: &Polygon, v: usize, theta: Angle) -> Result<Chord> {
    if v >= poly.len() {
        return Err(Error::VertexOutOfRange(v));
    }
    let (chord, degenerate) = shoot_chord(poly, v, theta);
    if !degenerate {
        return Ok(chord);
    }
    let nudged = theta.offset(DEGENERATE_NUDGE_DEG);
    let (mut chord, _) = shoot_chord(poly, v, nudged);
    chord.perturbed = Some(nudged);
    Ok(chord)
}

fn shoot_chord(poly: &Polygon, v: usize, theta: Angle) -> (Chord, bool) {
    let d = theta.direction();
    let origin = BoundaryPoint {
        point: poly.vertex(v),
        edge: v,
        t: 0.0,
    };
    let (front, df) = if enters_interior(poly, v, d) {
        shoot_ray(poly, v, d)
    } else {
        (origin, false)
    };
    let (back, db) = if enters_interior(poly, v, -d) {
        shoot_ray(poly, v, -d)
    } else {
        (origin, false)
    };
    (
        Chord {
            segment: Segment::new(back.point, front.point),
            back,
            front,
            perturbed: None,
        },
        df || db,
    )
}

/// True if direction `d` points strictly into the interior angle at vertex `v`.
pub(crate) fn enters_interior(poly: &Polygon, v: usize, d: Point) -> bool {
    let p = poly.vertex(v);
    let to_next = poly.vertex(poly.next(v)) - p;
    let to_prev = poly.vertex(poly.prev(v)) - p;
    let ccw_angle = |a: Point, b: Point| {
        let ang = a.cross(b).atan2(a.dot(b));
        if ang < 0.0 {
            ang + std::f64::consts::TAU
        } else {
            ang
        }
    };
    let wedge = ccw_angle(to_next, to_prev);
    let dir = ccw_angle(to_next, d);
    dir > 1e-12 && dir < wedge - 1e-12
}

fn shoot_ray(poly: &Polygon, v: usize, d: Point) -> (BoundaryPoint, bool) {
    let o = poly.vertex(v);
    let n = poly.len();
    let mut best: Option<(f64, usize, f64)> = None;
    for j in 0..n {
        if j == v || poly.next(j) == v {
            continue;
        }
        let e = poly.edge(j);
        let ed = e.b - e.a;
        let denom = d.cross(ed);
        if denom.abs() < 1e-15 {
            // parallel edge: only a collinear one can be hit, at its nearer endpoint
            if (e.a - o).cross(d).abs() <= VERTEX_HIT_TOL {
                for (pt, u) in [(e.a, 0.0), (e.b, 1.0)] {
                    let s = (pt - o).dot(d);
                    if s > VERTEX_HIT_TOL && best.is_none_or(|b| s < b.0) {
                        best = Some((s, j, u));
                    }
                }
            }
            continue;
        }
        let w = e.a - o;
        let s = w.cross(ed) / denom;
        let u = w.cross(d) / denom;
        if s > VERTEX_HIT_TOL && (-1e-12..=1.0 + 1e-12).contains(&u) && best.is_none_or(|b| s < b.0) {
            best = Some((s, j, u));
        }
    }
    let (s, j, u) = best.expect("a ray leaving a simple polygon's interior hits its boundary");
    let e = poly.edge(j);
    let hit = o + d * s;
    let degenerate = hit.dist(e.a) <= VERTEX_HIT_TOL || hit.dist(e.b) <= VERTEX_HIT_TOL;
    let bp = if u >= 1.0 - 1e-12 {
        BoundaryPoint {
            point: e.b,
            edge: poly.next(j),
            t: 0.0,
        }
    } else if u <= 1e-12 {
        BoundaryPoint {
            point: e.a,
            edge: j,
            t: 0.0,
        }
    } else {
        BoundaryPoint {
            point: hit,
            edge: j,
            t: u,
        }
    };
    (bp, degenerate)
}
