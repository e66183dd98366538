//! Convex polygons in the constant-curvature planes: vertex curvature,
//! circumradius, discrete Blaschke-type bounds and a smoothing construction.
//!
//! ```
//! use spaceform_core::{verify, ConvexPolygon, CurvatureDefinition, SpaceForm};
//!
//! let sf = SpaceForm::new(-1.0)?;
//! let p = ConvexPolygon::regular_inscribed(sf, 0.8, 6)?;
//! let report = verify(&p, CurvatureDefinition::Ta, None)?;
//! assert!(report.holds);
//! # Ok::<(), spaceform_core::GeomError>(())
//! ```

pub mod blaschke;
pub mod enclosing_disk;
pub mod error;
pub mod geom;
pub mod lambda_trig;
pub mod polygon;
pub mod smoothing;
pub mod tolerance;

pub use error::{GeomError, Result};
pub use geom::{Circle, ModelKind, Point, PolarFrame, SpaceForm, TangentVector, Vec3};
pub use lambda_trig::{arc_gtan, gcos, gcot, gsin, gtan, Lambda};
pub use enclosing_disk::{disk_contains, min_disk, min_disk_oracle, GeodesicDisk};
pub use polygon::{ConvexPolygon, VertexCurvature, VertexCurvatureReport};
pub use blaschke::{bound_radius, bound_radius_flat, convergence_table, verify, BlaschkeReport, ConvergenceRow, CurvatureDefinition};
pub use smoothing::{assemble, blowup_sweep, build_support_arcs, connector_coefficients, offset_arcs, polar_curvature, ArcSegment, ConnectorCoefficients, ConnectorCurve, Piece, PieceKind, PiecewiseCurve};
