//! Convex polygons and their vertex curvatures.
//!
//! Side `i` joins vertex `i-1` to vertex `i` (indices mod `n`), so the two
//! sides meeting at vertex `i` are `i` and `i+1`. Vertices are stored in
//! counterclockwise order.
//!
//! Two vertex curvatures are provided:
//!
//! ```text
//! κ_i      = (π - Â_i) / (ta_λ(ℓ_i/2) + ta_λ(ℓ_{i+1}/2))
//! κ_i^flat = 2 (π - Â_i) / (ℓ_i + ℓ_{i+1})
//! ```
//!
//! They coincide when `λ = 0`.

use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::enclosing_disk::{min_disk, GeodesicDisk};
use crate::error::{GeomError, Result};
use crate::geom::{Point, SpaceForm};
use crate::lambda_trig::gtan;
use crate::tolerance;

/// Sines of turning angles at or below this count as collinear.
const COLLINEAR_SINE: f64 = 1e-12;

/// Number of candidate polygons tried by [`ConvexPolygon::random_convex`].
pub const GENERATION_ATTEMPTS: usize = 200;

#[derive(Debug, Clone, PartialEq)]
pub struct ConvexPolygon {
    sf: SpaceForm,
    vertices: Vec<Point>,
    sides: Vec<f64>,
    angles: Vec<f64>,
    digon: bool,
}

/// Per-vertex curvature data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexCurvature {
    pub angle: f64,
    pub side_in: f64,
    pub side_out: f64,
    pub kappa: f64,
    pub kappa_flat: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexCurvatureReport {
    pub vertices: Vec<VertexCurvature>,
    /// Minimum of `kappa` over the vertices.
    pub kappa0: f64,
    /// Minimum of `kappa_flat` over the vertices.
    pub kappa0_flat: f64,
}

impl ConvexPolygon {
    /// Validates a vertex cycle and caches its sides and angles.
    ///
    /// Two distinct vertices give the degenerate digon. Clockwise input is
    /// reversed.
    pub fn from_vertices(sf: SpaceForm, vertices: Vec<Point>) -> Result<Self> {
        let n = vertices.len();
        if n < 2 {
            return Err(GeomError::TooFewVertices { min: 3, got: n });
        }
        check_distinct(&sf, &vertices)?;
        let limit = sf.lambda().conjugate_distance();
        let sides: Vec<f64> = (0..n)
            .map(|i| sf.distance(&vertices[(i + n - 1) % n], &vertices[i]))
            .collect();
        if let Some((index, &length)) = sides.iter().enumerate().find(|(_, &l)| l >= limit) {
            return Err(GeomError::SideTooLong { index, length });
        }
        if sf.lambda().value() > 0.0 {
            let disk = min_disk(&sf, &vertices)?;
            if disk.radius >= sf.lambda().quarter_distance() - tolerance::CHECK {
                return Err(GeomError::NotInHemisphere);
            }
        }
        if n == 2 {
            return Ok(ConvexPolygon {
                sf,
                vertices,
                sides,
                angles: vec![0.0, 0.0],
                digon: true,
            });
        }

        let mut vertices = vertices;
        let turns: Vec<f64> = (0..n)
            .map(|i| sf.orientation(&vertices[(i + n - 1) % n], &vertices[i], &vertices[(i + 1) % n]))
            .collect();
        if let Some(i) = turns.iter().position(|t| t.abs() <= COLLINEAR_SINE) {
            return Err(GeomError::NotConvex(format!("vertex {i} is collinear with its neighbours")));
        }
        let positive = turns.iter().filter(|&&t| t > 0.0).count();
        if positive != 0 && positive != n {
            return Err(GeomError::NotConvex("orientation changes sign".into()));
        }
        if positive == 0 {
            vertices.reverse();
        }
        // every vertex strictly left of every edge rules out self-overlapping cycles
        for i in 0..n {
            let a = &vertices[(i + n - 1) % n];
            let b = &vertices[i];
            for j in 0..n {
                if j == i || j == (i + n - 1) % n {
                    continue;
                }
                if sf.orientation(a, b, &vertices[j]) <= COLLINEAR_SINE {
                    return Err(GeomError::NotConvex(format!(
                        "vertex {j} is not strictly inside edge {i}"
                    )));
                }
            }
        }
        let sides: Vec<f64> = (0..n)
            .map(|i| sf.distance(&vertices[(i + n - 1) % n], &vertices[i]))
            .collect();
        let angles = (0..n)
            .map(|i| sf.angle_at(&vertices[i], &vertices[(i + n - 1) % n], &vertices[(i + 1) % n]))
            .collect::<Result<Vec<f64>>>()?;
        if let Some(i) = angles.iter().position(|&a| !(a > 0.0 && a < PI)) {
            return Err(GeomError::NotConvex(format!("interior angle {} at vertex {i}", angles[i])));
        }
        Ok(ConvexPolygon {
            sf,
            vertices,
            sides,
            angles,
            digon: false,
        })
    }

    /// The 2-covered geodesic segment of length `length`, centered on the base point.
    pub fn digon(sf: SpaceForm, length: f64) -> Result<Self> {
        if !(length > 0.0) {
            return Err(GeomError::Domain(format!("digon length {length} must be positive")));
        }
        if length >= sf.lambda().conjugate_distance() {
            return Err(GeomError::SideTooLong { index: 0, length });
        }
        let frame = sf.canonical_frame();
        let a = sf.polar_point(&frame, 0.5 * length, PI);
        let b = sf.polar_point(&frame, 0.5 * length, 0.0);
        Ok(ConvexPolygon {
            sf,
            vertices: vec![a, b],
            sides: vec![length, length],
            angles: vec![0.0, 0.0],
            digon: true,
        })
    }

    /// Regular `n`-gon inscribed in the circle of radius `radius` about the base point.
    pub fn regular_inscribed(sf: SpaceForm, radius: f64, n: usize) -> Result<Self> {
        if n < 3 {
            return Err(GeomError::TooFewVertices { min: 3, got: n });
        }
        let limit = sf.lambda().quarter_distance();
        if !(radius > 0.0) || radius >= limit {
            return Err(GeomError::RadiusTooLarge { radius, limit });
        }
        let frame = sf.canonical_frame();
        let vertices = (0..n)
            .map(|k| sf.polar_point(&frame, radius, TAU * k as f64 / n as f64))
            .collect();
        Self::from_vertices(sf, vertices)
    }

    /// Deterministic random convex polygon around the base point.
    ///
    /// Each attempt draws `n` sorted angles and radii in
    /// `(r_max·(1 - w), r_max]`, starting with `w = 0.8` and narrowing the band
    /// geometrically after every rejected attempt (points on a circle are
    /// always in convex position).
    pub fn random_convex(sf: SpaceForm, n: usize, seed: u64, r_max: f64) -> Result<Self> {
        if n < 3 {
            return Err(GeomError::TooFewVertices { min: 3, got: n });
        }
        let limit = sf.lambda().quarter_distance();
        if !(r_max > 0.0) || r_max >= limit {
            return Err(GeomError::RadiusTooLarge { radius: r_max, limit });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let frame = sf.canonical_frame();
        let mut width = 0.8;
        for _ in 0..GENERATION_ATTEMPTS {
            let mut angles: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..TAU)).collect();
            angles.sort_by(f64::total_cmp);
            let vertices = angles
                .iter()
                .map(|&phi| {
                    let u: f64 = rng.gen();
                    sf.polar_point(&frame, r_max * (1.0 - width * u), phi)
                })
                .collect();
            if let Ok(p) = Self::from_vertices(sf, vertices) {
                return Ok(p);
            }
            width *= 0.75;
        }
        Err(GeomError::GenerationFailed {
            seed,
            attempts: GENERATION_ATTEMPTS,
        })
    }

    #[inline]
    pub fn space_form(&self) -> SpaceForm {
        self.sf
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    /// `ℓ_i`, the length of the side from vertex `i-1` to vertex `i`.
    pub fn side_lengths(&self) -> &[f64] {
        &self.sides
    }

    pub fn interior_angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn is_digon(&self) -> bool {
        self.digon
    }

    fn check_index(&self, i: usize) -> Result<()> {
        if i < self.len() {
            Ok(())
        } else {
            Err(GeomError::InvalidIndex {
                index: i,
                len: self.len(),
            })
        }
    }

    /// Lengths of the two sides meeting at vertex `i` (incoming, outgoing).
    pub fn sides_at(&self, i: usize) -> (f64, f64) {
        (self.sides[i], self.sides[(i + 1) % self.len()])
    }

    pub fn vertex_curvature(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        let lam = self.sf.lambda();
        let (a, b) = self.sides_at(i);
        Ok((PI - self.angles[i]) / (gtan(lam, 0.5 * a)? + gtan(lam, 0.5 * b)?))
    }

    pub fn vertex_curvature_flat(&self, i: usize) -> Result<f64> {
        self.check_index(i)?;
        let (a, b) = self.sides_at(i);
        Ok(2.0 * (PI - self.angles[i]) / (a + b))
    }

    pub fn curvature_report(&self) -> Result<VertexCurvatureReport> {
        let vertices = (0..self.len())
            .map(|i| {
                let (side_in, side_out) = self.sides_at(i);
                Ok(VertexCurvature {
                    angle: self.angles[i],
                    side_in,
                    side_out,
                    kappa: self.vertex_curvature(i)?,
                    kappa_flat: self.vertex_curvature_flat(i)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let kappa0 = vertices.iter().map(|v| v.kappa).fold(f64::INFINITY, f64::min);
        let kappa0_flat = vertices.iter().map(|v| v.kappa_flat).fold(f64::INFINITY, f64::min);
        Ok(VertexCurvatureReport {
            vertices,
            kappa0,
            kappa0_flat,
        })
    }

    /// `Σ (π - Â_i)`; equals `2π - λ·Area` by Gauss–Bonnet (`2π` for a digon).
    pub fn total_turning(&self) -> f64 {
        self.angles.iter().map(|a| PI - a).sum()
    }

    /// Smallest enclosing disk of the vertices (which contains the polygon).
    pub fn enclosing_disk(&self) -> Result<GeodesicDisk> {
        min_disk(&self.sf, &self.vertices)
    }

    pub fn circumradius(&self) -> Result<f64> {
        Ok(self.enclosing_disk()?.radius)
    }
}

fn check_distinct(sf: &SpaceForm, vertices: &[Point]) -> Result<()> {
    let scale = vertices
        .iter()
        .map(|p| sf.distance(&vertices[0], p))
        .fold(0.0, f64::max);
    let tol = 1e-12 * scale.max(1e-300);
    for i in 0..vertices.len() {
        for j in i + 1..vertices.len() {
            if sf.distance(&vertices[i], &vertices[j]) <= tol {
                return Err(GeomError::DuplicateVertex(i, j));
            }
        }
    }
    Ok(())
}
