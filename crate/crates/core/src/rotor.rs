//! Rotational sweep over θ: candidate event angles, per-interval
//! minimization and the global optimum.

use std::fmt;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geom::{Angle, Isometry, Point, Polygon, Segment};
use crate::sleeve::{Tour, TourTag};
use crate::solver::{solve_theta, SolveResult, Structure};

/// Distance kept from candidate event angles when sampling, in degrees.
pub const GUARD_DEG: f64 = 1e-5;
/// Lengths at or below this count as zero when looking for flat optima.
const ZERO_LEN: f64 = 1e-12;
/// Angles closer than this (degrees) are the same event.
const SAME_ANGLE_DEG: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum EventType {
    /// A reflex vertex starts or stops issuing cuts.
    Validity,
    /// A gate changes its gate vertex.
    Domination,
    /// A gate vertex starts issuing a cut of the other kind.
    Jumping,
    /// A gate chord's far endpoint moves to another edge.
    Passing,
    /// The tour reaches or leaves a reflex vertex.
    Bending,
    /// The tour reaches or leaves a gate endpoint.
    Cuddle,
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            EventType::Validity => "validity",
            EventType::Domination => "domination",
            EventType::Jumping => "jumping",
            EventType::Passing => "passing",
            EventType::Bending => "bending",
            EventType::Cuddle => "cuddle",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub angle: Angle,
    pub kind: EventType,
    /// Vertex indices involved: reflex vertex then edge for validity events,
    /// vertex pairs for pair angles, empty for detected events.
    pub witnesses: Vec<usize>,
    /// Whether the solved structure was seen to change across the angle.
    pub confirmed: bool,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepConfig {
    pub samples_per_interval: usize,
    pub refine_tol_deg: f64,
    /// Multiplied by `1 + diameter` to get the length jump that triggers bisection.
    pub jump_threshold: f64,
    /// Grid step used on intervals where sampled solves fail.
    pub grid_fallback_step_deg: f64,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            samples_per_interval: 64,
            refine_tol_deg: 1e-6,
            jump_threshold: 0.05,
            grid_fallback_step_deg: 0.05,
        }
    }
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let ok = self.samples_per_interval >= 2
            && self.refine_tol_deg > 0.0
            && self.jump_threshold > 0.0
            && self.grid_fallback_step_deg > 0.0;
        if ok {
            Ok(())
        } else {
            Err(Error::Internal(format!("invalid sweep configuration {self:?}")))
        }
    }
}

/// Best tour found on one event-free interval. Angles are unwrapped degrees,
/// `lo < hi`, `hi` possibly beyond 180.
#[derive(Debug, Clone, PartialEq)]
pub struct IntervalResult {
    pub lo: f64,
    pub hi: f64,
    pub theta: Angle,
    pub length: f64,
    pub samples: Vec<(f64, f64)>,
    /// Structural changes found inside the interval.
    pub detected: Vec<Event>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepReport {
    pub best_theta: Angle,
    pub best_length: f64,
    pub best_tour: Tour,
    /// Candidate and detected events, by angle.
    pub events: Vec<Event>,
    /// `(angle, length)` of every evaluated direction, by angle.
    pub samples: Vec<(Angle, f64)>,
    pub intervals: Vec<IntervalResult>,
}

impl SweepReport {
    /// Cyclic intervals between consecutive distinct event angles, unwrapped
    /// so that `lo < hi`.
    pub fn event_free_intervals(&self) -> Vec<(f64, f64)> {
        cyclic_intervals(&distinct_angles(&self.events))
    }
}

/// Polygon-combinatorial critical angles: the incident-edge directions of
/// every reflex vertex, and the directions of visible (reflex, vertex) pairs.
pub fn enumerate_candidate_events(poly: &Polygon) -> Vec<Event> {
    let mut validity = Vec::new();
    for &v in poly.reflex_vertices() {
        for (edge, (a, b)) in [
            (poly.prev(v), (poly.vertex(poly.prev(v)), poly.vertex(v))),
            (v, (poly.vertex(v), poly.vertex(poly.next(v)))),
        ] {
            validity.push(Event {
                angle: Angle::of_line(a, b),
                kind: EventType::Validity,
                witnesses: vec![v, edge],
                confirmed: true,
            });
        }
    }
    let near = |a: Angle, b: Angle| a.circular_distance(b) <= SAME_ANGLE_DEG;
    let mut pairs: Vec<Event> = Vec::new();
    for &u in poly.reflex_vertices() {
        for w in 0..poly.len() {
            if w == u || w == poly.next(u) || w == poly.prev(u) {
                continue;
            }
            if poly.is_reflex(w) && w < u {
                continue;
            }
            if !poly.segment_inside(&Segment::new(poly.vertex(u), poly.vertex(w))) {
                continue;
            }
            let angle = Angle::of_line(poly.vertex(u), poly.vertex(w));
            if validity.iter().any(|e| near(e.angle, angle)) {
                continue;
            }
            match pairs.iter_mut().find(|e| near(e.angle, angle)) {
                Some(e) => e.witnesses.extend([u, w]),
                None => pairs.push(Event {
                    angle,
                    kind: EventType::Passing,
                    witnesses: vec![u, w],
                    confirmed: false,
                }),
            }
        }
    }
    let mut events = validity;
    events.extend(pairs);
    events.sort_by(|a, b| a.angle.degrees().total_cmp(&b.angle.degrees()));
    events
}

fn distinct_angles(events: &[Event]) -> Vec<f64> {
    let mut a: Vec<f64> = events.iter().map(|e| e.angle.degrees()).collect();
    a.sort_by(f64::total_cmp);
    a.dedup_by(|x, y| (*x - *y).abs() <= SAME_ANGLE_DEG);
    if a.len() > 1 && a[0] + 180.0 - a[a.len() - 1] <= SAME_ANGLE_DEG {
        a.pop();
    }
    a
}

fn cyclic_intervals(angles: &[f64]) -> Vec<(f64, f64)> {
    match angles.len() {
        0 => vec![(0.0, 180.0)],
        k => (0..k)
            .map(|i| {
                let lo = angles[i];
                let hi = if i + 1 < k { angles[i + 1] } else { angles[0] + 180.0 };
                (lo, hi)
            })
            .collect(),
    }
}

/// Solve, stepping forward by the guard when the exact angle is degenerate.
fn solve_near(poly: &Polygon, deg: f64) -> Option<(f64, SolveResult)> {
    (0..8).find_map(|k| {
        let d = deg + k as f64 * GUARD_DEG * 0.1;
        solve_theta(poly, Angle::from_degrees(d)).ok().map(|r| (d, r))
    })
}

#[derive(Clone)]
struct Sample {
    deg: f64,
    length: f64,
    structure: Structure,
}

fn sample(poly: &Polygon, deg: f64) -> Option<Sample> {
    solve_near(poly, deg).map(|(deg, r)| Sample {
        deg,
        length: r.length(),
        structure: r.structure(),
    })
}

fn change_kind(a: &Structure, b: &Structure) -> EventType {
    if a.gates != b.gates {
        let va: Vec<usize> = a.gates.iter().map(|g| g.0).collect();
        let vb: Vec<usize> = b.gates.iter().map(|g| g.0).collect();
        if va != vb {
            EventType::Domination
        } else if a.gates.iter().zip(&b.gates).any(|(x, y)| x.1 != y.1) {
            EventType::Jumping
        } else {
            EventType::Passing
        }
    } else if a.stable != b.stable {
        EventType::Bending
    } else {
        EventType::Cuddle
    }
}

/// Minimizes tour length over `[lo + guard, hi - guard]` (unwrapped degrees).
pub fn minimize_interval(poly: &Polygon, lo: f64, hi: f64, cfg: &SweepConfig) -> IntervalResult {
    let jump = cfg.jump_threshold * (1.0 + poly.diameter());
    let (a, b) = (lo + GUARD_DEG, hi - GUARD_DEG);
    if b <= a {
        let mid = 0.5 * (lo + hi);
        let s = sample(poly, mid);
        let length = s.as_ref().map_or(f64::INFINITY, |s| s.length);
        return IntervalResult {
            lo,
            hi,
            theta: Angle::from_degrees(mid),
            length,
            samples: s.map(|s| vec![(s.deg, s.length)]).unwrap_or_default(),
            detected: Vec::new(),
        };
    }
    let n = cfg.samples_per_interval;
    let grid: Vec<f64> = (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect();
    let mut pts: Vec<Sample> = grid.iter().filter_map(|&d| sample(poly, d)).collect();
    if pts.len() * 4 < n * 3 {
        let steps = ((b - a) / cfg.grid_fallback_step_deg).ceil() as usize;
        pts.extend((0..=steps).filter_map(|i| sample(poly, (a + i as f64 * cfg.grid_fallback_step_deg).min(b))));
        pts.sort_by(|x, y| x.deg.total_cmp(&y.deg));
    }

    // Localize every structural change or jump between neighbouring samples.
    let mut detected = Vec::new();
    let mut extra = Vec::new();
    for w in pts.windows(2) {
        let (mut l, r) = (w[0].clone(), &w[1]);
        while l.structure != r.structure || (l.length - r.length).abs() > jump {
            let (mut x, mut y) = (l.clone(), r.clone());
            while y.deg - x.deg > cfg.refine_tol_deg {
                let Some(m) = sample(poly, 0.5 * (x.deg + y.deg)) else { break };
                if m.deg >= y.deg {
                    break;
                }
                if m.structure == x.structure && (m.length - x.length).abs() <= jump {
                    x = m;
                } else {
                    y = m;
                }
            }
            detected.push(Event {
                angle: Angle::from_degrees(0.5 * (x.deg + y.deg)),
                kind: change_kind(&x.structure, &y.structure),
                witnesses: Vec::new(),
                confirmed: x.structure != y.structure,
            });
            extra.push(x);
            if y.deg >= r.deg {
                break;
            }
            extra.push(y.clone());
            l = y;
        }
    }
    pts.extend(extra);
    pts.sort_by(|x, y| x.deg.total_cmp(&y.deg));

    let f = |d: f64| sample(poly, d).map_or(f64::INFINITY, |s| s.length);
    let mut best = (f64::NAN, f64::INFINITY);
    for i in 0..pts.len() {
        let here = pts[i].length;
        let left = if i > 0 { pts[i - 1].length } else { f64::INFINITY };
        let right = pts.get(i + 1).map_or(f64::INFINITY, |p| p.length);
        if here <= left && here <= right {
            let x0 = if i > 0 { pts[i - 1].deg } else { pts[i].deg };
            let x1 = pts.get(i + 1).map_or(pts[i].deg, |p| p.deg);
            let (xm, fm) = golden(&f, x0, x1, cfg.refine_tol_deg);
            let cand = if fm < here { (xm, fm) } else { (pts[i].deg, here) };
            if cand.1 < best.1 {
                best = cand;
            }
        }
    }
    if best.1 <= ZERO_LEN {
        if let Some((s, e)) = widest_zero_run(&pts.iter().map(|p| (p.deg, p.length)).collect::<Vec<_>>()) {
            let mid = 0.5 * (s + e);
            best = (mid, f(mid));
        }
    }
    IntervalResult {
        lo,
        hi,
        theta: Angle::from_degrees(best.0),
        length: best.1,
        samples: pts.iter().map(|p| (p.deg, p.length)).collect(),
        detected,
    }
}

/// Golden-section search for a minimum of `f` on `[a, b]`.
fn golden(f: &impl Fn(f64) -> f64, mut a: f64, mut b: f64, tol: f64) -> (f64, f64) {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    if b - a <= tol {
        let m = 0.5 * (a + b);
        return (m, f(m));
    }
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > tol {
        if fc <= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d);
        }
    }
    if fc <= fd {
        (c, fc)
    } else {
        (d, fd)
    }
}

/// Longest run of consecutive zero-length samples, as `(first, last)` angle.
fn widest_zero_run(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    let mut best: Option<(f64, f64)> = None;
    let mut start: Option<f64> = None;
    for (i, &(d, l)) in samples.iter().enumerate() {
        if l <= ZERO_LEN {
            let s = *start.get_or_insert(d);
            let ends = samples.get(i + 1).map_or(true, |n| n.1 > ZERO_LEN);
            if ends {
                if best.map_or(true, |(bs, be)| d - s > be - bs) {
                    best = Some((s, d));
                }
                start = None;
            }
        }
    }
    best
}

pub fn optimize(poly: &Polygon, cfg: &SweepConfig) -> Result<SweepReport> {
    cfg.validate()?;
    let mut events = enumerate_candidate_events(poly);
    let angles = distinct_angles(&events);
    let spans = cyclic_intervals(&angles);
    let intervals: Vec<IntervalResult> = spans
        .par_iter()
        .map(|&(lo, hi)| {
            if angles.is_empty() {
                // No events: the whole circle is one interval without endpoints.
                let mut r = minimize_interval(poly, lo - GUARD_DEG, hi - GUARD_DEG, cfg);
                r.lo = lo;
                r.hi = hi;
                r
            } else {
                minimize_interval(poly, lo, hi, cfg)
            }
        })
        .collect();

    // Classify pair angles by the structures on either side.
    events.par_iter_mut().filter(|e| e.kind != EventType::Validity).for_each(|e| {
        let d = e.angle.degrees();
        if let (Some(a), Some(b)) = (sample(poly, d - GUARD_DEG), sample(poly, d + GUARD_DEG)) {
            if a.structure != b.structure {
                e.kind = change_kind(&a.structure, &b.structure);
                e.confirmed = true;
            }
        }
    });
    events.extend(intervals.iter().flat_map(|r| r.detected.iter().cloned()));
    events.sort_by(|a, b| a.angle.degrees().total_cmp(&b.angle.degrees()));

    let mut samples: Vec<(Angle, f64)> = intervals
        .iter()
        .flat_map(|r| r.samples.iter().map(|&(d, l)| (Angle::from_degrees(d), l)))
        .collect();
    samples.sort_by(|a, b| a.0.degrees().total_cmp(&b.0.degrees()));

    let best_len = intervals.iter().map(|r| r.length).fold(f64::INFINITY, f64::min);
    if !best_len.is_finite() {
        return Err(Error::Internal("no direction could be solved".into()));
    }
    let mut best_deg = intervals
        .iter()
        .find(|r| r.length <= best_len)
        .map(|r| r.theta.degrees())
        .unwrap_or(0.0);
    if best_len <= ZERO_LEN {
        let flat: Vec<(f64, f64)> = samples.iter().map(|&(a, l)| (a.degrees(), l)).collect();
        if flat.iter().all(|s| s.1 <= ZERO_LEN) {
            // Everything is flat: centre of the widest event-free interval.
            let (lo, hi) = spans
                .iter()
                .copied()
                .max_by(|x, y| (x.1 - x.0).total_cmp(&(y.1 - y.0)))
                .unwrap_or((0.0, 180.0));
            best_deg = if angles.is_empty() { 90.0 } else { 0.5 * (lo + hi) };
        } else if let Some((s, e)) = widest_zero_run_cyclic(&flat) {
            best_deg = 0.5 * (s + e);
        }
    }
    let (deg, best) = solve_near(poly, best_deg)
        .ok_or_else(|| Error::Internal(format!("best direction {best_deg}° does not solve")))?;
    Ok(SweepReport {
        best_theta: Angle::from_degrees(deg),
        best_length: best.length(),
        best_tour: best.tour,
        events,
        samples,
        intervals,
    })
}

/// As [`widest_zero_run`], letting a run continue past 180° into 0°.
fn widest_zero_run_cyclic(samples: &[(f64, f64)]) -> Option<(f64, f64)> {
    let lead = samples.iter().take_while(|s| s.1 <= ZERO_LEN).count();
    if lead == 0 || lead == samples.len() {
        return widest_zero_run(samples);
    }
    let mut rotated: Vec<(f64, f64)> = samples[lead..].to_vec();
    rotated.extend(samples[..lead].iter().map(|&(d, l)| (d + 180.0, l)));
    widest_zero_run(&rotated)
}

/// A tour vertex of a frozen structure.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Anchor {
    /// A reflex vertex of the polygon.
    Fixed(Point),
    /// The far endpoint of the chord issued by `vertex` onto `edge`.
    Endpoint { vertex: usize, edge: usize },
    /// A reflection point on that chord.
    Reflect { vertex: usize, edge: usize },
}

/// Combinatorial structure of a solved tour, re-evaluable at nearby angles.
#[derive(Debug, Clone, PartialEq)]
pub struct FrozenTour {
    pub theta: Angle,
    pub anchors: Vec<Anchor>,
    pub length: f64,
}

impl FrozenTour {
    pub fn capture(r: &SolveResult) -> FrozenTour {
        let anchors = r
            .tour
            .cycle
            .iter()
            .zip(&r.tour.tags)
            .map(|(p, t)| match *t {
                TourTag::Moving(g) => {
                    let gate = &r.gates[g];
                    let (vertex, edge) = (gate.cut.vertex_index, gate.gate_edge);
                    if gate.cut.far().point.dist(*p) <= 1e-9 {
                        Anchor::Endpoint { vertex, edge }
                    } else if gate.cut.vertex.dist(*p) <= 1e-9 {
                        Anchor::Fixed(*p)
                    } else {
                        Anchor::Reflect { vertex, edge }
                    }
                }
                _ => Anchor::Fixed(*p),
            })
            .collect();
        FrozenTour {
            theta: r.tour.theta,
            anchors,
            length: r.tour.length,
        }
    }
}

/// Length of the tour with `frozen`'s structure at `frozen.theta + eps` degrees.
pub fn evaluate_close_tour(poly: &Polygon, frozen: &FrozenTour, eps: f64) -> Result<f64> {
    if eps == 0.0 || frozen.anchors.len() <= 1 {
        return Ok(frozen.length);
    }
    let theta = frozen.theta.offset(eps);
    let d = theta.direction();
    let chord = |vertex: usize, edge: usize| -> Result<Segment> {
        let v = poly.vertex(vertex);
        let e = poly.edge(edge);
        let den = d.cross(e.b - e.a);
        if den.abs() < 1e-15 {
            return Err(Error::InfeasibleStructure(format!("chord of vertex {vertex} is parallel to edge {edge}")));
        }
        let u = d.cross(v - e.a) / den;
        if !(-1e-9..=1.0 + 1e-9).contains(&u) {
            return Err(Error::InfeasibleStructure(format!(
                "chord of vertex {vertex} left edge {edge}"
            )));
        }
        Ok(Segment::new(v, e.a.lerp(e.b, u.clamp(0.0, 1.0))))
    };
    let n = frozen.anchors.len();
    let fixed: Vec<usize> = (0..n)
        .filter(|&i| !matches!(frozen.anchors[i], Anchor::Reflect { .. }))
        .collect();
    let point_of = |a: &Anchor| -> Result<Point> {
        match *a {
            Anchor::Fixed(p) => Ok(p),
            Anchor::Endpoint { vertex, edge } => Ok(chord(vertex, edge)?.b),
            Anchor::Reflect { .. } => unreachable!(),
        }
    };
    let mirror_of = |a: &Anchor| -> Result<Segment> {
        match *a {
            Anchor::Reflect { vertex, edge } => chord(vertex, edge),
            _ => unreachable!(),
        }
    };

    if fixed.is_empty() {
        // Pure reflections between parallel chords: a doubled perpendicular.
        let mirrors = frozen.anchors.iter().map(mirror_of).collect::<Result<Vec<_>>>()?;
        let normal = d.perp();
        let offs: Vec<f64> = mirrors.iter().map(|m| normal.dot(m.a)).collect();
        let (lo_t, hi_t) = mirrors.iter().fold((f64::NEG_INFINITY, f64::INFINITY), |(l, h), m| {
            let (x, y) = (d.dot(m.a), d.dot(m.b));
            (l.max(x.min(y)), h.min(x.max(y)))
        });
        if lo_t > hi_t + 1e-9 {
            return Err(Error::InfeasibleStructure("chords no longer overlap".into()));
        }
        let span = offs.iter().cloned().fold(f64::NEG_INFINITY, f64::max) - offs.iter().cloned().fold(f64::INFINITY, f64::min);
        return Ok(2.0 * span);
    }

    let mut total = 0.0;
    for (k, &i) in fixed.iter().enumerate() {
        let j = fixed[(k + 1) % fixed.len()];
        let start = point_of(&frozen.anchors[i])?;
        let end = point_of(&frozen.anchors[j])?;
        let gap = (j + n - i) % n;
        let gap = if gap == 0 { n } else { gap };
        let mirrors = (1..gap)
            .map(|s| mirror_of(&frozen.anchors[(i + s) % n]))
            .collect::<Result<Vec<_>>>()?;
        total += reflect_path(start, end, &mirrors)?;
    }
    Ok(total)
}

/// Shortest path from `a` to `b` touching the mirrors in order, each touch
/// required to land on the mirror segment.
fn reflect_path(a: Point, b: Point, mirrors: &[Segment]) -> Result<f64> {
    let mut from = a;
    let mut total = 0.0;
    for (k, m) in mirrors.iter().enumerate() {
        let mut target = b;
        let mut xf = Isometry::IDENTITY;
        for later in mirrors[k..].iter() {
            xf = xf.compose(&Isometry::reflection(later)?);
        }
        target = xf.apply(target);
        let dir = target - from;
        let e = m.b - m.a;
        let den = e.cross(dir);
        let t = if den.abs() < 1e-300 {
            m.project_param(from)
        } else {
            (from - m.a).cross(dir) / den
        };
        if !(-1e-9..=1.0 + 1e-9).contains(&t) {
            return Err(Error::InfeasibleStructure("reflection point left its chord".into()));
        }
        let p = m.a.lerp(m.b, t.clamp(0.0, 1.0));
        total += from.dist(p);
        from = p;
    }
    Ok(total + from.dist(b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;

    fn validity_angles(p: &Polygon) -> Vec<f64> {
        enumerate_candidate_events(p)
            .iter()
            .filter(|e| e.kind == EventType::Validity)
            .map(|e| e.angle.degrees())
            .collect()
    }

    #[test]
    fn validity_events() {
        let steep = 4f64.atan().to_degrees();
        for p in [fixtures::double(), fixtures::unotch()] {
            let v = validity_angles(&p);
            assert_eq!(v.len(), 2 * p.reflex_vertices().len());
            for a in &v {
                assert!((a - steep).abs() < 1e-9 || (a - (180.0 - steep)).abs() < 1e-9, "{a}");
            }
        }
        let v = validity_angles(&fixtures::double());
        assert_eq!(v.iter().filter(|a| (*a - steep).abs() < 1e-9).count(), 2);
        assert!(enumerate_candidate_events(&fixtures::square()).is_empty());
    }

    #[test]
    fn events_are_sorted_and_distinct_pairs() {
        let e = enumerate_candidate_events(&fixtures::double());
        assert!(e.windows(2).all(|w| w[0].angle.degrees() <= w[1].angle.degrees()));
        let pairs: Vec<f64> = e
            .iter()
            .filter(|e| e.kind != EventType::Validity)
            .map(|e| e.angle.degrees())
            .collect();
        assert!(pairs.windows(2).all(|w| w[1] - w[0] > SAME_ANGLE_DEG));
        // The line through both reflex vertices.
        assert!(pairs.iter().any(|a| (a - 0.5f64.atan().to_degrees()).abs() < 1e-9));
    }

    #[test]
    fn close_tour_matches_resolve() {
        let p = fixtures::double();
        let r = solve_theta(&p, Angle::from_degrees(0.0)).unwrap();
        let frozen = FrozenTour::capture(&r);
        assert_eq!(evaluate_close_tour(&p, &frozen, 0.0).unwrap(), r.length());
        for eps in [0.5, -0.5] {
            let close = evaluate_close_tour(&p, &frozen, eps).unwrap();
            let full = solve_theta(&p, Angle::from_degrees(eps)).unwrap().length();
            assert!((close - full).abs() < 1e-9, "{eps}: {close} vs {full}");
        }
    }

    #[test]
    fn interval_minima() {
        let cfg = SweepConfig::default();
        let steep = 4f64.atan().to_degrees();
        let sq = minimize_interval(&fixtures::square(), 0.0, 180.0, &cfg);
        assert_eq!(sq.length, 0.0);

        let d = fixtures::double();
        let flat = minimize_interval(&d, steep, 180.0 - steep, &cfg);
        assert_eq!(flat.length, 0.0);
        assert!(flat.theta.degrees() > steep && flat.theta.degrees() < 180.0 - steep);

        // Positive until the line through both reflex vertices.
        let shallow = 0.5f64.atan().to_degrees();
        let pos = minimize_interval(&d, 0.0, shallow, &cfg);
        assert!(pos.length > 0.0);
        assert!(pos.samples.iter().all(|s| s.1 > 0.0));
    }

    #[test]
    fn fixture_optima() {
        let cfg = SweepConfig::default();
        let sq = optimize(&fixtures::square(), &cfg).unwrap();
        assert_eq!(sq.best_length, 0.0);
        let d = optimize(&fixtures::double(), &cfg).unwrap();
        assert_eq!(d.best_length, 0.0);
        assert_eq!(solve_theta(&fixtures::double(), d.best_theta).unwrap().length(), 0.0);
        let u = optimize(&fixtures::unotch(), &cfg).unwrap();
        assert_eq!(u.best_length, 0.0);
        assert_eq!(u.best_theta.degrees(), 0.0);
    }

    #[test]
    fn golden_finds_parabola_minimum() {
        let (x, fx) = golden(&|x: f64| (x - 0.3).powi(2), 0.0, 1.0, 1e-9);
        assert!((x - 0.3).abs() < 1e-8);
        assert!(fx < 1e-15);
    }

    #[test]
    fn zero_runs() {
        let s = [(0.0, 1.0), (1.0, 0.0), (2.0, 0.0), (3.0, 1.0), (4.0, 0.0)];
        assert_eq!(widest_zero_run(&s), Some((1.0, 2.0)));
        let w = [(0.0, 0.0), (1.0, 0.0), (2.0, 1.0), (178.0, 0.0), (179.0, 0.0)];
        assert_eq!(widest_zero_run_cyclic(&w), Some((178.0, 181.0)));
    }
}
