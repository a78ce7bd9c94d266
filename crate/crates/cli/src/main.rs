mod doc;
mod svg;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use monowatch::cuts::compute_cuts;
use monowatch::geom::{Angle, Polygon};
use monowatch::oracle::{dense_sweep, validate_tour};
use monowatch::rotor::{enumerate_candidate_events, optimize, EventType};
use monowatch::sleeve::{Tour, TourTag};
use monowatch::solver::solve_theta;
use monowatch::Error;

use doc::InputError;

/// Directions closer than this (degrees) to a validity event are refused.
const EVENT_SNAP_DEG: f64 = 1e-4;

#[derive(Parser)]
#[command(name = "monowatch", version, about = "Shortest watchman tours under rotated monotone visibility")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Shortest tour for one direction.
    Solve {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        theta_deg: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Direction minimizing the tour length.
    Optimize {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Check that a tour meets every cut.
    Verify {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        theta_deg: f64,
        #[arg(long)]
        tour: PathBuf,
    },
    /// Tour length on a uniform grid of directions.
    Sweep {
        #[arg(long)]
        polygon: PathBuf,
        #[arg(long)]
        step_deg: f64,
        #[arg(long)]
        csv: PathBuf,
    },
}

enum Failure {
    Input(String),
    Event(String),
    Invalid(String),
    Internal(String),
}

impl From<InputError> for Failure {
    fn from(e: InputError) -> Self {
        Failure::Input(e.0)
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidPolygon { .. } => Failure::Input(e.to_string()),
            Error::EventAngle { theta, .. } => Failure::Event(format!("{e}; {}", nudge_hint(theta.degrees()))),
            e => Failure::Internal(e.to_string()),
        }
    }
}

fn nudge_hint(deg: f64) -> String {
    let d = 10.0 * EVENT_SNAP_DEG;
    format!(
        "try --theta-deg {:.6} or --theta-deg {:.6}",
        Angle::from_degrees(deg - d).degrees(),
        Angle::from_degrees(deg + d).degrees()
    )
}

fn theta_arg(deg: f64) -> Result<Angle, Failure> {
    if !deg.is_finite() || !(0.0..180.0).contains(&deg) {
        return Err(Failure::Input(format!("--theta-deg must lie in [0, 180), got {deg}")));
    }
    Ok(Angle::from_degrees(deg))
}

/// Refuses directions that sit on a validity event, where cuts are undefined.
fn check_not_validity_event(poly: &Polygon, theta: Angle) -> Result<(), Failure> {
    let hit = enumerate_candidate_events(poly)
        .into_iter()
        .filter(|e| e.kind == EventType::Validity)
        .find(|e| e.angle.circular_distance(theta) <= EVENT_SNAP_DEG);
    match hit {
        Some(e) => Err(Failure::Event(format!(
            "{} event at {:.9}° (reflex vertex {}, edge {}); {}",
            e.kind,
            e.angle.degrees(),
            e.witnesses[0],
            e.witnesses[1],
            nudge_hint(e.angle.degrees())
        ))),
        None => Ok(()),
    }
}

fn write(path: &Path, contents: &str) -> Result<(), Failure> {
    std::fs::write(path, contents).map_err(|e| Failure::Internal(format!("{}: {e}", path.display())))
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Solve { polygon, theta_deg, svg, json } => {
            let (name, poly) = doc::load_polygon(&polygon)?;
            let theta = theta_arg(theta_deg)?;
            check_not_validity_event(&poly, theta)?;
            let result = solve_theta(&poly, theta)?;
            let cuts = compute_cuts(&poly, theta)?;
            let out = pretty(&doc::solve_document(name.as_deref(), &result.tour, &result.gates, &cuts));
            match json {
                Some(p) => write(&p, &out)?,
                None => print!("{out}"),
            }
            if let Some(p) = svg {
                write(&p, &svg::render(&poly, &cuts, &result.gates, &result.tour))?;
            }
        }
        Command::Optimize { polygon, config, csv, svg, json } => {
            let (name, poly) = doc::load_polygon(&polygon)?;
            let cfg = doc::load_config(config.as_deref())?;
            let report = optimize(&poly, &cfg)?;
            let out = pretty(&doc::sweep_document(name.as_deref(), &report));
            match json {
                Some(p) => write(&p, &out)?,
                None => print!("{out}"),
            }
            if let Some(p) = csv {
                write(&p, &doc::csv(report.samples.iter().map(|(a, l)| (a.degrees(), *l))))?;
            }
            if let Some(p) = svg {
                let theta = report.best_theta;
                let (cuts, gates) = match solve_theta(&poly, theta) {
                    Ok(r) => (compute_cuts(&poly, theta)?, r.gates),
                    Err(_) => (Vec::new(), Vec::new()),
                };
                write(&p, &svg::render(&poly, &cuts, &gates, &report.best_tour))?;
            }
        }
        Command::Verify { polygon, theta_deg, tour } => {
            let (_, poly) = doc::load_polygon(&polygon)?;
            let theta = theta_arg(theta_deg)?;
            check_not_validity_event(&poly, theta)?;
            let pts = doc::load_tour_points(&tour)?;
            let tags = vec![TourTag::Free; pts.len()];
            let t = Tour::from_cycle(pts, tags, theta);
            let report = match validate_tour(&poly, theta, &t) {
                Ok(r) => r,
                Err(Error::PointOutside { x, y }) => {
                    return Err(Failure::Invalid(format!("tour point ({x}, {y}) lies outside the polygon")))
                }
                Err(e) => return Err(e.into()),
            };
            if !report.valid {
                let mut msg = format!(
                    "tour misses {} cut(s), worst by {:.9}:",
                    report.violated_cuts.len(),
                    report.max_violation
                );
                for c in &report.violated_cuts {
                    msg.push_str(&format!(
                        "\n  {} {} cut of vertex {} from ({:.9}, {:.9}) to ({:.9}, {:.9})",
                        c.color, c.kind, c.vertex_index, c.chord.a.x, c.chord.a.y, c.chord.b.x, c.chord.b.y
                    ));
                }
                return Err(Failure::Invalid(msg));
            }
            println!("valid: tour meets all {} cut(s)", compute_cuts(&poly, theta)?.len());
        }
        Command::Sweep { polygon, step_deg, csv } => {
            let (_, poly) = doc::load_polygon(&polygon)?;
            if !(step_deg > 0.0 && step_deg < 180.0) {
                return Err(Failure::Input(format!("--step-deg must lie in (0, 180), got {step_deg}")));
            }
            let samples = dense_sweep(&poly, step_deg);
            write(&csv, &doc::csv(samples.iter().map(|(a, l)| (a.degrees(), *l))))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            let (code, kind, msg) = match f {
                Failure::Input(m) => (1, "error", m),
                Failure::Event(m) => (2, "refused", m),
                Failure::Invalid(m) => (3, "invalid", m),
                Failure::Internal(m) => (4, "error", m),
            };
            eprintln!("{kind}: {msg}");
            ExitCode::from(code)
        }
    }
}
