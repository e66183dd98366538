//! Numeric tolerances shared across modules.

/// Slack allowed on quadric constraints of model points.
pub const QUADRIC: f64 = 1e-10;

/// Inverse-cosine arguments beyond `1 + ACOS_CLAMP` are rejected, not clamped.
pub const ACOS_CLAMP: f64 = 1e-9;

/// Default tolerance for pass/fail checks (coverage, bound margins).
pub const CHECK: f64 = 1e-9;

/// Points within this distance of a disk boundary count as support points.
pub const BOUNDARY: f64 = 1e-8;

/// Margins below this flag near-equality in the curvature bound.
pub const NEAR_EQUALITY: f64 = 1e-6;

/// Slack on the convexity condition of the support arcs.
pub const ARC_CONVEXITY: f64 = 1e-9;

/// Junction diagnostics above this abort curve assembly.
pub const JUNCTION_ABORT: f64 = 1e-6;

/// Smallest offset tried by the adaptive offset reduction.
pub const EPSILON_MIN: f64 = 1e-8;
