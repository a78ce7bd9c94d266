//! Small reference polygons used throughout the tests and docs.

use crate::geom::{Point, Polygon};

fn build(coords: &[(f64, f64)]) -> Polygon {
    Polygon::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
        .expect("fixture polygons are valid")
}

/// Axis-aligned 4×4 square.
pub fn square() -> Polygon {
    build(&[(0., 0.), (4., 0.), (4., 4.), (0., 4.)])
}

/// Rectangle with a single notch hanging from the top edge; reflex vertex (4,2).
pub fn unotch() -> Polygon {
    build(&[(0., 0.), (8., 0.), (8., 6.), (5., 6.), (4., 2.), (3., 6.), (0., 6.)])
}

/// Rectangle with one notch from the bottom and one from the top;
/// reflex vertices (6,4) and (2,2).
pub fn double() -> Polygon {
    build(&[
        (0., 0.),
        (5., 0.),
        (6., 4.),
        (7., 0.),
        (8., 0.),
        (8., 6.),
        (3., 6.),
        (2., 2.),
        (1., 6.),
        (0., 6.),
    ])
}

/// Ten-vertex polygon whose two gates at 73.5° have the same color.
pub fn twin() -> Polygon {
    let (p, _) = Polygon::from_any_orientation(
        [
            (10., 6.),
            (7., 6.),
            (9., 7.),
            (6., 7.),
            (7., 3.),
            (1., 0.),
            (8., 0.),
            (6., 1.),
            (9., 3.),
            (10., 2.),
        ]
        .iter()
        .map(|&(x, y)| Point::new(x, y))
        .collect(),
    )
    .expect("fixture polygons are valid");
    p
}
