//! Polygon files.
//!
//! ```json
//! { "lambda": -1.0, "coords": "polar", "vertices": [[0.5, 0.0], [0.5, 2.1], [0.5, 4.2]] }
//! ```
//!
//! Embedding coordinates take 2 numbers for `λ = 0` and 3 otherwise. Polar
//! coordinates `[r, φ]` are taken about the base point of the model and
//! converted on load.

use std::path::Path;

use serde::{Deserialize, Serialize};
use spaceform_core::{ConvexPolygon, SpaceForm};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coords {
    Embedding,
    Polar,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub lambda: f64,
    pub coords: Coords,
    pub vertices: Vec<Vec<f64>>,
}

impl PolygonFile {
    /// Embedding-coordinate file for `p`.
    pub fn from_polygon(p: &ConvexPolygon) -> Self {
        let sf = p.space_form();
        PolygonFile {
            lambda: sf.lambda().value(),
            coords: Coords::Embedding,
            vertices: p.vertices().iter().map(|v| sf.coords(v)).collect(),
        }
    }

    pub fn to_polygon(&self) -> Result<ConvexPolygon, CliError> {
        let sf = SpaceForm::new(self.lambda)?;
        let frame = sf.canonical_frame();
        let points = self
            .vertices
            .iter()
            .enumerate()
            .map(|(i, v)| match self.coords {
                Coords::Embedding => {
                    if v.len() != sf.dim() {
                        return Err(CliError::Input(format!(
                            "vertex {i} has {} coordinates, expected {} for lambda = {}",
                            v.len(),
                            sf.dim(),
                            self.lambda
                        )));
                    }
                    Ok(sf.point(v)?)
                }
                Coords::Polar => match v.as_slice() {
                    [r, phi] if r.is_finite() && phi.is_finite() && *r >= 0.0 => {
                        Ok(sf.polar_point(&frame, *r, *phi))
                    }
                    _ => Err(CliError::Input(format!(
                        "vertex {i} must be [r, phi] with finite r >= 0"
                    ))),
                },
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(ConvexPolygon::from_vertices(sf, points)?)
    }
}

/// Reads a polygon file, returning the polygon and the raw bytes.
pub fn load(path: &Path) -> Result<(ConvexPolygon, Vec<u8>), CliError> {
    let bytes = std::fs::read(path).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })?;
    let file: PolygonFile = serde_json::from_slice(&bytes)?;
    Ok((file.to_polygon()?, bytes))
}
