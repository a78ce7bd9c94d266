use rand::Rng;
use rayon::prelude::*;

use crate::cuts::{compute_cuts, ThetaCut};
use crate::error::{Error, Result};
use crate::gates::compute_gates;
use crate::geom::{ring_contains, segments_cross, Angle, Point, Polygon, Segment, TAU_ONEDGE};
use crate::sleeve::Tour;
use crate::solver::solve_theta;

/// Largest gate count [`reference_min_tour`] accepts.
pub const ORACLE_MAX_GATES: usize = 4;

#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport {
    pub valid: bool,
    pub violated_cuts: Vec<ThetaCut>,
    /// Largest distance from the tour to a violated cut's chord; 0 when valid.
    pub max_violation: f64,
}

/// Checks that the tour meets the closed left region of every θ-cut.
pub fn validate_tour(poly: &Polygon, theta: Angle, t: &Tour) -> Result<ValidationReport> {
    if let Some(p) = t.cycle.iter().find(|p| !poly.contains(**p)) {
        return Err(Error::PointOutside { x: p.x, y: p.y });
    }
    let segs: Vec<Segment> = if t.len() == 1 {
        vec![Segment::new(t.cycle[0], t.cycle[0])]
    } else {
        t.segments().collect()
    };
    let mut violated_cuts = Vec::new();
    let mut max_violation = 0.0f64;
    for c in compute_cuts(poly, theta)? {
        let gap = segs
            .iter()
            .map(|s| s.distance_to_segment(&c.chord))
            .fold(f64::INFINITY, f64::min);
        if gap <= TAU_ONEDGE {
            continue;
        }
        let ring = c.left_ring(poly);
        if t.cycle.iter().any(|p| ring_contains(&ring, *p, TAU_ONEDGE)) {
            continue;
        }
        max_violation = max_violation.max(gap);
        violated_cuts.push(c);
    }
    Ok(ValidationReport {
        valid: violated_cuts.is_empty(),
        violated_cuts,
        max_violation,
    })
}

/// Brute-force tour length: one of `m` evenly spaced samples per gate chord,
/// visited in every cyclic gate order and joined by shortest paths inside the
/// polygon. Zero when a polygon vertex or chord sample lies in every gate's
/// left region.
pub fn reference_min_tour(poly: &Polygon, theta: Angle, m: usize) -> Result<f64> {
    let m = m.max(2);
    let gates = compute_gates(poly, &compute_cuts(poly, theta)?)?;
    if gates.len() > ORACLE_MAX_GATES {
        return Err(Error::OracleScope {
            max: ORACLE_MAX_GATES,
            found: gates.len(),
        });
    }
    if gates.is_empty() {
        return Ok(0.0);
    }
    let rings: Vec<Vec<Point>> = gates.iter().map(|g| g.cut.left_ring(poly)).collect();
    let samples: Vec<Vec<Point>> = gates
        .iter()
        .map(|g| {
            let c = g.cut.chord;
            (0..m).map(|k| c.a.lerp(c.b, k as f64 / (m - 1) as f64)).collect()
        })
        .collect();
    let in_all = |p: Point| rings.iter().all(|r| ring_contains(r, p, TAU_ONEDGE));
    if poly.vertices().iter().chain(samples.iter().flatten()).any(|p| in_all(*p)) {
        return Ok(0.0);
    }

    let sites: Vec<Point> = samples.iter().flatten().copied().collect();
    let geo = geodesic_matrix(poly, &sites);
    let g = gates.len();
    let idx = |gate: usize, k: usize| gate * m + k;
    let mut orders = Vec::new();
    permutations(&mut (1..g).collect::<Vec<_>>(), 0, &mut orders);
    if g == 1 {
        return Ok(0.0);
    }
    let best = orders
        .par_iter()
        .flat_map_iter(|rest| (0..m).map(move |s0| (rest, s0)))
        .map(|(rest, s0)| {
            let mut cost: Vec<f64> = (0..m).map(|k| geo[idx(0, s0)][idx(rest[0], k)]).collect();
            for w in rest.windows(2) {
                cost = (0..m)
                    .map(|k| {
                        (0..m)
                            .map(|j| cost[j] + geo[idx(w[0], j)][idx(w[1], k)])
                            .fold(f64::INFINITY, f64::min)
                    })
                    .collect();
            }
            let last = rest[rest.len() - 1];
            (0..m)
                .map(|k| cost[k] + geo[idx(last, k)][idx(0, s0)])
                .fold(f64::INFINITY, f64::min)
        })
        .reduce(|| f64::INFINITY, f64::min);
    Ok(best)
}

fn permutations(items: &mut Vec<usize>, k: usize, out: &mut Vec<Vec<usize>>) {
    if k == items.len() {
        out.push(items.clone());
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permutations(items, k + 1, out);
        items.swap(k, i);
    }
}

/// All-pairs shortest paths inside a polygon between sites, routed through
/// reflex vertices.
fn geodesic_matrix(poly: &Polygon, sites: &[Point]) -> Vec<Vec<f64>> {
    let reflex: Vec<Point> = poly.reflex_vertices().iter().map(|&i| poly.vertex(i)).collect();
    let r = reflex.len();
    let visible = |p: Point, q: Point| poly.segment_inside(&Segment::new(p, q));
    let mut d = vec![vec![f64::INFINITY; r]; r];
    for i in 0..r {
        d[i][i] = 0.0;
        for j in i + 1..r {
            if visible(reflex[i], reflex[j]) {
                let w = reflex[i].dist(reflex[j]);
                d[i][j] = w;
                d[j][i] = w;
            }
        }
    }
    for k in 0..r {
        for i in 0..r {
            for j in 0..r {
                if d[i][k] + d[k][j] < d[i][j] {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    let vis: Vec<Vec<f64>> = sites
        .par_iter()
        .map(|s| {
            reflex
                .iter()
                .map(|q| if visible(*s, *q) { s.dist(*q) } else { f64::INFINITY })
                .collect()
        })
        .collect();
    // Site to reflex vertex through any chain of reflex vertices.
    let reach: Vec<Vec<f64>> = vis
        .par_iter()
        .map(|v| {
            (0..r)
                .map(|t| (0..r).map(|u| v[u] + d[u][t]).fold(f64::INFINITY, f64::min))
                .collect()
        })
        .collect();
    (0..sites.len())
        .into_par_iter()
        .map(|a| {
            (0..sites.len())
                .map(|b| {
                    let (p, q) = (sites[a], sites[b]);
                    if p == q {
                        0.0
                    } else if visible(p, q) {
                        p.dist(q)
                    } else {
                        (0..r).map(|t| reach[a][t] + vis[b][t]).fold(f64::INFINITY, f64::min)
                    }
                })
                .collect()
        })
        .collect()
}

/// `solve_theta` on the grid `k · step` over `[0°, 180°)`; angles that fail
/// are nudged forward by 1e-5° until they solve.
pub fn dense_sweep(poly: &Polygon, step: f64) -> Vec<(Angle, f64)> {
    assert!(step > 0.0);
    let count = (180.0 / step - 1e-9).ceil() as usize;
    (0..count)
        .into_par_iter()
        .filter_map(|k| {
            let base = k as f64 * step;
            (0..100).find_map(|j| {
                let a = Angle::from_degrees(base + j as f64 * 1e-5);
                solve_theta(poly, a).ok().map(|r| (a, r.length()))
            })
        })
        .collect()
}

/// Random simple polygon with `n` vertices: random points in a 10×10 box
/// untangled by 2-opt moves. Shapes are jagged with many reflex vertices;
/// near-degenerate results (a vertex closer than 0.05 to a non-incident edge)
/// are rejected.
pub fn random_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Polygon {
    assert!(n >= 3);
    'retry: loop {
        let mut pts: Vec<Point> = (0..n)
            .map(|_| Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0)))
            .collect();
        let seg = |pts: &[Point], i: usize| Segment::new(pts[i], pts[(i + 1) % n]);
        for _ in 0..20 * n * n {
            let hit = (0..n).find_map(|i| {
                (i + 2..n)
                    .filter(|&j| !(i == 0 && j == n - 1))
                    .find(|&j| segments_cross(&seg(&pts, i), &seg(&pts, j)))
                    .map(|j| (i, j))
            });
            match hit {
                Some((i, j)) => pts[i + 1..=j].reverse(),
                None => {
                    let clearance = (0..n).all(|v| {
                        (0..n)
                            .filter(|&e| e != v && (e + 1) % n != v)
                            .all(|e| seg(&pts, e).distance_to_point(pts[v]) >= 0.05)
                    });
                    if !clearance {
                        continue 'retry;
                    }
                    match Polygon::from_any_orientation(pts) {
                        Ok((p, _)) if p.len() == n => return p,
                        _ => continue 'retry,
                    }
                }
            }
        }
    }
}

/// Random star-shaped polygon: points at sorted angles on a circle with radial jitter.
pub fn random_star_polygon<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Polygon {
    loop {
        let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..std::f64::consts::TAU)).collect();
        angles.sort_by(f64::total_cmp);
        if angles.windows(2).any(|w| w[1] - w[0] < 0.05) {
            continue;
        }
        let pts = angles
            .iter()
            .map(|&a| {
                let r = rng.gen_range(2.0..10.0);
                Point::new(r * a.cos(), r * a.sin())
            })
            .collect();
        if let Ok(p) = Polygon::new(pts) {
            if p.len() == n {
                return p;
            }
        }
    }
}
