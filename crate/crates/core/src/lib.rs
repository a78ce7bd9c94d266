//! Shortest watchman tours in simple polygons under θ-monotone visibility,
//! and the rotational sweep that finds the direction minimizing tour length.

pub mod cuts;
pub mod error;
pub mod fixtures;
pub mod gates;
pub mod geom;
pub mod oracle;
pub mod rotor;
pub mod sleeve;
pub mod solver;

pub use error::{Error, Result};
