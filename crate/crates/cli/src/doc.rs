//! Input documents and the fixed-precision JSON/CSV writers.

use std::fmt::Write as _;
use std::path::Path;

use monowatch::cuts::ThetaCut;
use monowatch::gates::Gate;
use monowatch::geom::{Point, Polygon};
use monowatch::rotor::{Event, SweepConfig, SweepReport};
use monowatch::sleeve::Tour;
use serde::Deserialize;
use serde_json::{json, Map, Value};

/// Failure that maps to exit code 1.
#[derive(Debug)]
pub struct InputError(pub String);

#[derive(Debug, Deserialize)]
struct PolygonDocument {
    #[serde(default)]
    name: Option<String>,
    vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Deserialize)]
struct TourPoints {
    points: Vec<[f64; 2]>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct ConfigDocument {
    samples_per_interval: Option<usize>,
    refine_tol_deg: Option<f64>,
    jump_threshold: Option<f64>,
    grid_fallback_step_deg: Option<f64>,
}

fn read(path: &Path) -> Result<String, InputError> {
    std::fs::read_to_string(path).map_err(|e| InputError(format!("{}: {e}", path.display())))
}

pub fn load_polygon(path: &Path) -> Result<(Option<String>, Polygon), InputError> {
    let doc: PolygonDocument =
        serde_json::from_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    let pts = doc.vertices.iter().map(|&[x, y]| Point::new(x, y)).collect();
    let (poly, reversed) =
        Polygon::from_any_orientation(pts).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if reversed {
        eprintln!("warning: {} lists its vertices clockwise; reversed", path.display());
    }
    Ok((doc.name, poly))
}

pub fn load_tour_points(path: &Path) -> Result<Vec<Point>, InputError> {
    let bad = |e: serde_json::Error| InputError(format!("{}: {e}", path.display()));
    // Either a bare {"points": ...} or a solve document with the points under "tour".
    let mut doc: Value = serde_json::from_str(&read(path)?).map_err(bad)?;
    let body = match doc.get_mut("tour") {
        Some(t) => t.take(),
        None => doc,
    };
    let pts = serde_json::from_value::<TourPoints>(body).map_err(bad)?.points;
    if pts.is_empty() {
        return Err(InputError(format!("{}: tour has no points", path.display())));
    }
    Ok(pts.iter().map(|&[x, y]| Point::new(x, y)).collect())
}

pub fn load_config(path: Option<&Path>) -> Result<SweepConfig, InputError> {
    let mut cfg = SweepConfig::default();
    let Some(path) = path else { return Ok(cfg) };
    let doc: ConfigDocument = toml::from_str(&read(path)?).map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    if let Some(v) = doc.samples_per_interval {
        cfg.samples_per_interval = v;
    }
    if let Some(v) = doc.refine_tol_deg {
        cfg.refine_tol_deg = v;
    }
    if let Some(v) = doc.jump_threshold {
        cfg.jump_threshold = v;
    }
    if let Some(v) = doc.grid_fallback_step_deg {
        cfg.grid_fallback_step_deg = v;
    }
    cfg.validate().map_err(|e| InputError(format!("{}: {e}", path.display())))?;
    Ok(cfg)
}

/// A JSON number printed with exactly nine fractional digits.
pub fn num(x: f64) -> Value {
    let x = if x == 0.0 { 0.0 } else { x };
    Value::Number(format!("{x:.9}").parse().expect("finite number"))
}

fn point(p: Point) -> Value {
    json!([num(p.x), num(p.y)])
}

fn cut(c: &ThetaCut) -> Value {
    let mut m = Map::new();
    m.insert("vertex".into(), json!(c.vertex_index));
    m.insert("color".into(), json!(c.color.to_string()));
    m.insert("kind".into(), json!(c.kind.to_string()));
    m.insert("chord".into(), json!([point(c.chord.a), point(c.chord.b)]));
    if let Some(a) = c.perturbed {
        m.insert("perturbed_theta_deg".into(), num(a.degrees()));
    }
    Value::Object(m)
}

fn gate(g: &Gate) -> Value {
    let mut v = cut(&g.cut);
    v["gate_edge"] = json!(g.gate_edge);
    v
}

pub fn tour(t: &Tour) -> Value {
    json!({
        "points": t.cycle.iter().map(|&p| point(p)).collect::<Vec<_>>(),
        "tags": t.tags.iter().map(|t| t.to_string()).collect::<Vec<_>>(),
        "length": num(t.length),
    })
}

pub fn solve_document(name: Option<&str>, t: &Tour, gates: &[Gate], cuts: &[ThetaCut]) -> Value {
    json!({
        "polygon": name,
        "theta_deg": num(t.theta.degrees()),
        "length": num(t.length),
        "tour": tour(t),
        "gates": gates.iter().map(gate).collect::<Vec<_>>(),
        "cuts": cuts.iter().map(cut).collect::<Vec<_>>(),
    })
}

fn event(e: &Event) -> Value {
    json!({
        "theta_deg": num(e.angle.degrees()),
        "kind": e.kind.to_string(),
        "witnesses": e.witnesses,
        "confirmed": e.confirmed,
    })
}

pub fn sweep_document(name: Option<&str>, r: &SweepReport) -> Value {
    json!({
        "polygon": name,
        "best_theta_deg": num(r.best_theta.degrees()),
        "best_length": num(r.best_length),
        "best_tour": tour(&r.best_tour),
        "events": r.events.iter().map(event).collect::<Vec<_>>(),
        "intervals": r.intervals.iter().map(|i| json!({
            "lo_deg": num(i.lo),
            "hi_deg": num(i.hi),
            "theta_deg": num(i.theta.degrees()),
            "length": num(i.length),
        })).collect::<Vec<_>>(),
    })
}

pub fn csv(samples: impl IntoIterator<Item = (f64, f64)>) -> String {
    let mut s = String::from("theta_deg,length\n");
    for (t, l) in samples {
        let l = if l == 0.0 { 0.0 } else { l };
        writeln!(s, "{t:.9},{l:.9}").unwrap();
    }
    s
}
