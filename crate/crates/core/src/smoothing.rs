//! Smoothing a κ₀-convex polygon into a C² curve with curvature bounded below.
//!
//! Every side gets a support arc of radius `R = ar ta_λ(π/(2κ₀))` through its
//! endpoints with the center inside the polygon. The arcs are pushed out to
//! the parallel arcs at distance `ε`, and at each vertex `A_i` the gap between
//! two consecutive parallel arcs is closed by a radial graph in geodesic polar
//! coordinates about `A_i`:
//!
//! ```text
//! r(φ) = r₀ + a φ² + b φ⁴,   φ ∈ [-θ_i, θ_i]
//! ```
//!
//! with `r(±θ) = ε`, `r′(±θ) = 0` and curvature `co_λ(R+ε)` at both ends, so
//! the joined curve is C².
//!
//! The curvature of a polar graph `r(φ)` on `M²_λ`, with the normal pointing
//! toward the pole, is
//!
//! ```text
//! k = s(-r″ + s·c + 2r′²·co) / (s² + r′²)^{3/2},   s = s_λ(r), c = c_λ(r), co = co_λ(r)
//! ```
//!
//! which is the classical `(r² + 2r′² − r r″)/(r² + r′²)^{3/2}` at `λ = 0`.
//! Matching it at the ends gives `r″(±θ) = s_λ(ε)c_λ(ε) − co_λ(R+ε)s_λ(ε)²`,
//! which is positive for small `ε`, hence `b > 0`, `a = −2bθ²` and
//! `r₀ = ε + bθ⁴`. As `ε → 0`, `r(φ)/ε → 1 + (θ² − φ²)²/(8θ²)`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::blaschke::bound_radius;
use crate::enclosing_disk::min_disk;
use crate::error::{GeomError, Result};
use crate::geom::{Point, PolarFrame, SpaceForm, Vec3};
use crate::lambda_trig::{gcos, gcot, gsin, gtan, Lambda};
use crate::polygon::ConvexPolygon;
use crate::tolerance;

/// Turning half-angles at or below this need no connector.
pub const DEGENERATE_THETA: f64 = 1e-9;

/// Samples per connector.
pub const CONNECTOR_SAMPLES: usize = 101;

/// Largest angular step used when sampling arcs.
pub const ARC_STEP: f64 = 1e-2;

/// Fraction of `θ` trimmed from each end of the blow-up profile grid.
pub const PROFILE_MARGIN: f64 = 0.05;

/// Points on the blow-up profile grid.
pub const PROFILE_POINTS: usize = 101;

/// Circular arc about `center`, traversed counterclockwise from `start` to `end`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArcSegment {
    #[serde(skip)]
    pub center: Point,
    pub radius: f64,
    #[serde(skip)]
    pub start: Point,
    #[serde(skip)]
    pub end: Point,
    /// Polar frame at `center` whose first axis points at `start`.
    #[serde(skip)]
    pub frame: PolarFrame,
    /// Angle swept from `start` to `end`.
    pub span: f64,
    /// Angle between the chord and the radii at either endpoint.
    pub beta: f64,
}

impl ArcSegment {
    pub fn point(&self, sf: &SpaceForm, psi: f64) -> Point {
        sf.polar_point(&self.frame, self.radius, psi)
    }

    /// Unit tangent in the direction of travel.
    pub fn tangent(&self, sf: &SpaceForm, psi: f64) -> Vec3 {
        unit(sf, sf.polar_velocity(&self.frame, self.radius, 0.0, psi))
    }

    /// Geodesic curvature with the normal toward the center.
    pub fn curvature(&self, sf: &SpaceForm) -> Result<f64> {
        gcot(sf.lambda(), self.radius)
    }
}

/// Angles of the support-arc construction at one vertex.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VertexTurning {
    pub angle: f64,
    /// `β` of the incoming and outgoing arcs.
    pub beta_in: f64,
    pub beta_out: f64,
    /// `δ = π/2 − β` for the incoming and outgoing arcs.
    pub delta_in: f64,
    pub delta_out: f64,
    /// `(β_in + β_out − Â)/2`, clamped at zero.
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SupportArcs {
    pub kappa0: f64,
    pub radius: f64,
    /// Arc `i` spans side `i`, from vertex `i-1` to vertex `i`.
    pub arcs: Vec<ArcSegment>,
    pub vertices: Vec<VertexTurning>,
}

/// Support arcs of radius `ar ta_λ(π/(2κ₀))` over every side of `p`.
pub fn build_support_arcs(p: &ConvexPolygon, kappa0: f64) -> Result<SupportArcs> {
    let sf = p.space_form();
    let lam = sf.lambda();
    let kappa_min = p.curvature_report()?.kappa0;
    if !(kappa0 > 0.0) || kappa0 > kappa_min * (1.0 + 1e-12) {
        return Err(GeomError::Domain(format!(
            "kappa0 = {kappa0} must lie in (0, {kappa_min}]"
        )));
    }
    let radius = bound_radius(lam, kappa0)?;
    let ta_r = gtan(lam, radius)?;
    let n = p.len();
    let verts = p.vertices();

    let mut arcs = Vec::with_capacity(n);
    for (i, &length) in p.side_lengths().iter().enumerate() {
        let ratio = gtan(lam, 0.5 * length)? / ta_r;
        if ratio > 1.0 + 1e-12 {
            return Err(GeomError::ChordTooLong {
                index: i,
                chord: length,
                radius,
            });
        }
        let beta = ratio.min(1.0).acos();
        let a = verts[(i + n - 1) % n];
        let b = verts[i];
        let dir = unit(&sf, sf.log_map(&a, &b)?.dir);
        let frame = sf.frame_at_distance(&a, &sf.rotate(&a, &dir, beta), radius);
        let center = frame.center;
        // isosceles triangle (O, a, b): s(ℓ/2) = s(R) sin(span/2); the angle
        // measured at a far center is poorly conditioned, asin near 1 is too
        let half = gsin(lam, 0.5 * length) / gsin(lam, radius);
        let span = if half < 0.7 {
            2.0 * half.asin()
        } else {
            sf.angle_at(&center, &a, &b)?
        };
        arcs.push(ArcSegment {
            center,
            radius,
            start: a,
            end: b,
            frame,
            span,
            beta,
        });
    }

    let angles = p.interior_angles();
    let mut vertices = Vec::with_capacity(n);
    for i in 0..n {
        let beta_in = arcs[i].beta;
        let beta_out = arcs[(i + 1) % n].beta;
        let theta = 0.5 * (beta_in + beta_out - angles[i]);
        if theta < -tolerance::ARC_CONVEXITY {
            return Err(GeomError::ConvexityViolated { vertex: i, theta });
        }
        vertices.push(VertexTurning {
            angle: angles[i],
            beta_in,
            beta_out,
            delta_in: FRAC_PI_2 - beta_in,
            delta_out: FRAC_PI_2 - beta_out,
            theta: theta.max(0.0),
        });
    }
    Ok(SupportArcs {
        kappa0,
        radius,
        arcs,
        vertices,
    })
}

/// Parallel arcs at distance `epsilon` outside the support arcs.
pub fn offset_arcs(sf: &SpaceForm, arcs: &[ArcSegment], epsilon: f64) -> Result<Vec<ArcSegment>> {
    if !(epsilon > 0.0) {
        return Err(GeomError::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    arcs.iter()
        .map(|arc| {
            let radius = arc.radius + epsilon;
            let limit = sf.lambda().quarter_distance();
            if radius >= limit {
                return Err(GeomError::RadiusOverflow { radius, limit });
            }
            let mut out = arc.clone();
            out.radius = radius;
            out.start = sf.polar_point(&arc.frame, radius, 0.0);
            out.end = sf.polar_point(&arc.frame, radius, arc.span);
            Ok(out)
        })
        .collect()
}

/// `(co_λ(R) − λ ta_λ(ε)) / (1 + co_λ(R) ta_λ(ε))`, which equals `co_λ(R+ε)`.
pub fn offset_curvature_quotient(lambda: Lambda, radius: f64, epsilon: f64) -> Result<f64> {
    let co = gcot(lambda, radius)?;
    let ta = gtan(lambda, epsilon)?;
    Ok((co - lambda.value() * ta) / (1.0 + co * ta))
}

/// Coefficients of `r(φ) = r₀ + aφ² + bφ⁴` on `[-θ, θ]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConnectorCoefficients {
    pub r0: f64,
    pub a: f64,
    pub b: f64,
    pub theta: f64,
    pub epsilon: f64,
}

impl ConnectorCoefficients {
    pub fn r(&self, phi: f64) -> f64 {
        let p2 = phi * phi;
        self.r0 + p2 * (self.a + self.b * p2)
    }

    pub fn dr(&self, phi: f64) -> f64 {
        phi * (2.0 * self.a + 4.0 * self.b * phi * phi)
    }

    pub fn d2r(&self, phi: f64) -> f64 {
        2.0 * self.a + 12.0 * self.b * phi * phi
    }

    pub fn curvature(&self, lambda: Lambda, phi: f64) -> Result<f64> {
        polar_curvature(lambda, self.r(phi), self.dr(phi), self.d2r(phi))
    }
}

/// Connector coefficients for support radius `radius`, offset `epsilon` and half-angle `theta`.
pub fn connector_coefficients(lambda: Lambda, radius: f64, epsilon: f64, theta: f64) -> Result<ConnectorCoefficients> {
    if theta <= DEGENERATE_THETA {
        return Err(GeomError::DegenerateTheta(theta));
    }
    if theta > FRAC_PI_2 + 1e-12 {
        return Err(GeomError::Domain(format!("theta = {theta} exceeds pi/2")));
    }
    if !(epsilon > 0.0) {
        return Err(GeomError::Domain(format!("epsilon = {epsilon} must be positive")));
    }
    let s = gsin(lambda, epsilon);
    let c = gcos(lambda, epsilon);
    let target = s * c - gcot(lambda, radius + epsilon)? * s * s;
    let t2 = theta * theta;
    let b = target / (8.0 * t2);
    Ok(ConnectorCoefficients {
        r0: epsilon + b * t2 * t2,
        a: -2.0 * b * t2,
        b,
        theta,
        epsilon,
    })
}

fn check_polar_radius(lambda: Lambda, r: f64) -> Result<()> {
    if !(r > 0.0) || r >= lambda.conjugate_distance() {
        return Err(GeomError::Domain(format!("polar radius {r} out of range")));
    }
    Ok(())
}

/// Geodesic curvature of the polar graph `φ ↦ (r(φ), φ)`, normal toward the pole.
pub fn polar_curvature(lambda: Lambda, r: f64, dr: f64, d2r: f64) -> Result<f64> {
    check_polar_radius(lambda, r)?;
    let s = gsin(lambda, r);
    let c = gcos(lambda, r);
    // s·co_λ(r) = c_λ(r), which keeps the expression finite as s → 0
    let num = -s * d2r + s * s * c + 2.0 * dr * dr * c;
    Ok(num / (s * s + dr * dr).powf(1.5))
}

/// The polar curvature with coefficients `(+r″, 3r′²)` in place of `(−r″, 2r′²)`.
///
/// Kept only to show that it disagrees with the classical polar formula.
pub fn printed_polar_curvature(lambda: Lambda, r: f64, dr: f64, d2r: f64) -> Result<f64> {
    check_polar_radius(lambda, r)?;
    let s = gsin(lambda, r);
    let c = gcos(lambda, r);
    let num = s * d2r + s * s * c + 3.0 * dr * dr * c;
    Ok(num / (s * s + dr * dr).powf(1.5))
}

fn euclidean_polar_curvature(r: f64, dr: f64, d2r: f64) -> f64 {
    (r * r + 2.0 * dr * dr - r * d2r) / (r * r + dr * dr).powf(1.5)
}

/// Limit of `ε·k(φ)` for the connector: the Euclidean polar curvature of
/// `R̃(φ) = 1 + (θ² − φ²)²/(8θ²)`.
pub fn limit_profile_curvature(theta: f64, phi: f64) -> f64 {
    profile(theta, phi, 1.0)
}

/// Euclidean polar curvature of `R̃(φ) = 1 − (θ² − φ²)²/(8θ²)`.
pub fn printed_limit_profile_curvature(theta: f64, phi: f64) -> f64 {
    profile(theta, phi, -1.0)
}

fn profile(theta: f64, phi: f64, sign: f64) -> f64 {
    let t2 = theta * theta;
    let w = t2 - phi * phi;
    let k = sign / (8.0 * t2);
    let r = 1.0 + k * w * w;
    let dr = -4.0 * k * phi * w;
    let d2r = k * (12.0 * phi * phi - 4.0 * t2);
    euclidean_polar_curvature(r, dr, d2r)
}

/// Quartic polar graph about a vertex joining two parallel arcs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConnectorCurve {
    pub vertex_index: usize,
    #[serde(skip)]
    pub vertex: Point,
    /// Frame at the vertex; the first axis bisects the two outward radial directions.
    #[serde(skip)]
    pub frame: PolarFrame,
    pub coefficients: ConnectorCoefficients,
}

impl ConnectorCurve {
    pub fn theta(&self) -> f64 {
        self.coefficients.theta
    }

    pub fn point(&self, sf: &SpaceForm, phi: f64) -> Point {
        sf.polar_point(&self.frame, self.coefficients.r(phi), phi)
    }

    pub fn tangent(&self, sf: &SpaceForm, phi: f64) -> Vec3 {
        let c = &self.coefficients;
        unit(sf, sf.polar_velocity(&self.frame, c.r(phi), c.dr(phi), phi))
    }

    pub fn curvature(&self, sf: &SpaceForm, phi: f64) -> Result<f64> {
        self.coefficients.curvature(sf.lambda(), phi)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Piece {
    Arc { index: usize, arc: ArcSegment },
    Connector { index: usize, curve: ConnectorCurve },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PieceKind {
    Arc,
    Connector,
}

impl PieceKind {
    pub fn as_str(self) -> &'static str {
        match self {
            PieceKind::Arc => "arc",
            PieceKind::Connector => "connector",
        }
    }
}

impl Piece {
    pub fn kind(&self) -> PieceKind {
        match self {
            Piece::Arc { .. } => PieceKind::Arc,
            Piece::Connector { .. } => PieceKind::Connector,
        }
    }

    pub fn index(&self) -> usize {
        match self {
            Piece::Arc { index, .. } | Piece::Connector { index, .. } => *index,
        }
    }

    /// Parameter interval.
    pub fn domain(&self) -> (f64, f64) {
        match self {
            Piece::Arc { arc, .. } => (0.0, arc.span),
            Piece::Connector { curve, .. } => (-curve.theta(), curve.theta()),
        }
    }

    pub fn point(&self, sf: &SpaceForm, t: f64) -> Point {
        match self {
            Piece::Arc { arc, .. } => arc.point(sf, t),
            Piece::Connector { curve, .. } => curve.point(sf, t),
        }
    }

    pub fn tangent(&self, sf: &SpaceForm, t: f64) -> Vec3 {
        match self {
            Piece::Arc { arc, .. } => arc.tangent(sf, t),
            Piece::Connector { curve, .. } => curve.tangent(sf, t),
        }
    }

    pub fn curvature(&self, sf: &SpaceForm, t: f64) -> Result<f64> {
        match self {
            Piece::Arc { arc, .. } => arc.curvature(sf),
            Piece::Connector { curve, .. } => curve.curvature(sf, t),
        }
    }

    fn sample_params(&self, connector_samples: usize) -> Vec<f64> {
        let (lo, hi) = self.domain();
        let m = match self {
            Piece::Arc { .. } => ((hi - lo) / ARC_STEP).ceil() as usize + 1,
            Piece::Connector { .. } => connector_samples,
        }
        .max(2);
        (0..m).map(|j| lo + (hi - lo) * j as f64 / (m - 1) as f64).collect()
    }
}

/// Closed curve made of parallel arcs and vertex connectors, in traversal order.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PiecewiseCurve {
    #[serde(skip)]
    pub sf: SpaceForm,
    pub pieces: Vec<Piece>,
    pub closed: bool,
    pub kappa0: f64,
    pub radius: f64,
    pub epsilon: f64,
}

/// One sampled point of a [`PiecewiseCurve`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CurveSample {
    pub piece_kind: PieceKind,
    pub piece_index: usize,
    pub param: f64,
    #[serde(skip)]
    pub point: Point,
    pub curvature: f64,
}

impl PiecewiseCurve {
    /// Samples every piece: `connector_samples` points per connector and an
    /// angular step of at most [`ARC_STEP`] on arcs.
    pub fn sample(&self, connector_samples: usize) -> Result<Vec<CurveSample>> {
        let mut out = Vec::new();
        for piece in &self.pieces {
            for t in piece.sample_params(connector_samples) {
                out.push(CurveSample {
                    piece_kind: piece.kind(),
                    piece_index: piece.index(),
                    param: t,
                    point: piece.point(&self.sf, t),
                    curvature: piece.curvature(&self.sf, t)?,
                });
            }
        }
        Ok(out)
    }

    pub fn connectors(&self) -> impl Iterator<Item = &ConnectorCurve> {
        self.pieces.iter().filter_map(|p| match p {
            Piece::Connector { curve, .. } => Some(curve),
            Piece::Arc { .. } => None,
        })
    }

    /// Curvature of the parallel arcs, `co_λ(R+ε)`.
    pub fn arc_curvature(&self) -> Result<f64> {
        gcot(self.sf.lambda(), self.radius + self.epsilon)
    }
}

/// Continuity data at the junction where piece `from` ends and the next begins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Junction {
    pub from: usize,
    pub gap: f64,
    pub tangent_mismatch: f64,
    pub curvature_jump: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AssemblyDiagnostics {
    pub epsilon_requested: f64,
    pub epsilon: f64,
    pub halvings: u32,
    pub junctions: Vec<Junction>,
    pub max_gap: f64,
    pub max_tangent_mismatch: f64,
    pub max_curvature_jump: f64,
    /// `co_λ(R+ε)`.
    pub arc_curvature: f64,
    /// Minimum curvature over all samples.
    pub min_curvature: f64,
    /// Every polygon vertex lies strictly inside the sampled curve.
    pub encloses_vertices: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SmoothedPolygon {
    pub support: SupportArcs,
    pub curve: PiecewiseCurve,
    pub diagnostics: AssemblyDiagnostics,
}

/// Builds `C_ε` for `p`, halving `ε` until every connector's curvature
/// stays at or above the arc curvature.
pub fn assemble(p: &ConvexPolygon, kappa0: f64, epsilon: f64) -> Result<SmoothedPolygon> {
    let support = build_support_arcs(p, kappa0)?;
    let sf = p.space_form();
    let mut eps = epsilon;
    let mut halvings = 0;
    // fails early with RadiusOverflow at the requested ε
    offset_arcs(&sf, &support.arcs, epsilon)?;
    loop {
        let curve = build_curve(&sf, &support, eps)?;
        let samples = curve.sample(CONNECTOR_SAMPLES)?;
        let arc_k = curve.arc_curvature()?;
        let min_connector = samples
            .iter()
            .filter(|s| s.piece_kind == PieceKind::Connector)
            .map(|s| s.curvature)
            .fold(f64::INFINITY, f64::min);
        let slack = 1e-10 * (1.0 + arc_k.abs());
        if min_connector >= arc_k - slack {
            let diagnostics = diagnose(p, &curve, &samples, epsilon, halvings)?;
            for (what, value) in [
                ("junction gap", diagnostics.max_gap),
                ("tangent mismatch", diagnostics.max_tangent_mismatch),
                ("curvature jump", diagnostics.max_curvature_jump),
            ] {
                if !(value <= tolerance::JUNCTION_ABORT) {
                    return Err(GeomError::ToleranceExceeded {
                        what,
                        value,
                        tolerance: tolerance::JUNCTION_ABORT,
                    });
                }
            }
            return Ok(SmoothedPolygon {
                support,
                curve,
                diagnostics,
            });
        }
        eps *= 0.5;
        halvings += 1;
        if eps < tolerance::EPSILON_MIN {
            return Err(GeomError::ToleranceExceeded {
                what: "connector curvature below arc curvature",
                value: arc_k - min_connector,
                tolerance: slack,
            });
        }
    }
}

fn build_curve(sf: &SpaceForm, support: &SupportArcs, epsilon: f64) -> Result<PiecewiseCurve> {
    let lam = sf.lambda();
    let arcs = offset_arcs(sf, &support.arcs, epsilon)?;
    let n = arcs.len();
    let mut pieces = Vec::with_capacity(2 * n);
    for (i, arc) in arcs.into_iter().enumerate() {
        let vertex = support.arcs[i].end;
        let center = arc.center;
        pieces.push(Piece::Arc { index: i, arc });
        let theta = support.vertices[i].theta;
        let coefficients = match connector_coefficients(lam, support.radius, epsilon, theta) {
            Ok(c) => c,
            Err(GeomError::DegenerateTheta(_)) => continue,
            Err(e) => return Err(e),
        };
        let outward = -unit(sf, sf.log_map(&vertex, &center)?.dir);
        let e1 = sf.rotate(&vertex, &outward, theta);
        let frame = sf.frame(&vertex, e1)?;
        pieces.push(Piece::Connector {
            index: i,
            curve: ConnectorCurve {
                vertex_index: i,
                vertex,
                frame,
                coefficients,
            },
        });
    }
    Ok(PiecewiseCurve {
        sf: *sf,
        pieces,
        closed: true,
        kappa0: support.kappa0,
        radius: support.radius,
        epsilon,
    })
}

fn diagnose(
    p: &ConvexPolygon,
    curve: &PiecewiseCurve,
    samples: &[CurveSample],
    epsilon_requested: f64,
    halvings: u32,
) -> Result<AssemblyDiagnostics> {
    let sf = &curve.sf;
    let pieces = &curve.pieces;
    let mut junctions = Vec::with_capacity(pieces.len());
    for (j, piece) in pieces.iter().enumerate() {
        let next = &pieces[(j + 1) % pieces.len()];
        let (_, t_end) = piece.domain();
        let (t_start, _) = next.domain();
        let gap = sf.distance(&piece.point(sf, t_end), &next.point(sf, t_start));
        let dt = piece.tangent(sf, t_end) - next.tangent(sf, t_start);
        let tangent_mismatch = dt.norm();
        let curvature_jump = (piece.curvature(sf, t_end)? - next.curvature(sf, t_start)?).abs();
        junctions.push(Junction {
            from: j,
            gap,
            tangent_mismatch,
            curvature_jump,
        });
    }
    let max = |f: fn(&Junction) -> f64| junctions.iter().map(f).fold(0.0, f64::max);
    Ok(AssemblyDiagnostics {
        epsilon_requested,
        epsilon: curve.epsilon,
        halvings,
        max_gap: max(|j| j.gap),
        max_tangent_mismatch: max(|j| j.tangent_mismatch),
        max_curvature_jump: max(|j| j.curvature_jump),
        junctions,
        arc_curvature: curve.arc_curvature()?,
        min_curvature: samples.iter().map(|s| s.curvature).fold(f64::INFINITY, f64::min),
        encloses_vertices: encloses(sf, samples, p.vertices(), curve.epsilon),
    })
}

/// Every point lies strictly left of every sampled chord of the (convex) curve.
///
/// Chords shorter than `ε/100` are merged: junction errors allowed at the
/// 1e-9 level would otherwise tilt very short chords (tiny connectors,
/// repeated endpoints) enough to flip the orientation test.
fn encloses(sf: &SpaceForm, samples: &[CurveSample], points: &[Point], epsilon: f64) -> bool {
    let min_chord = 1e-2 * epsilon;
    let mut ring: Vec<&Point> = Vec::with_capacity(samples.len());
    for s in samples {
        if ring.last().map_or(true, |q| sf.distance(q, &s.point) >= min_chord) {
            ring.push(&s.point);
        }
    }
    while ring.len() > 1 && sf.distance(ring[ring.len() - 1], ring[0]) < min_chord {
        ring.pop();
    }
    let m = ring.len();
    m >= 3
        && points.iter().all(|x| {
            (0..m).all(|k| {
                let (a, b) = (ring[k], ring[(k + 1) % m]);
                sf.orientation(a, b, x) > 0.0
            })
        })
}

fn unit(sf: &SpaceForm, v: Vec3) -> Vec3 {
    let n = sf.norm(&v);
    if n > 0.0 {
        v / n
    } else {
        v
    }
}

/// Per-vertex blow-up data at one `ε`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VertexBlowup {
    pub vertex: usize,
    pub theta: f64,
    /// Minimum of `k(φ)` over the trimmed profile grid.
    pub min_interior_curvature: f64,
    /// `(φ, ε·k(φ))` on the trimmed grid.
    pub scaled_profile: Vec<(f64, f64)>,
    /// Largest relative deviation of `ε·k` from [`limit_profile_curvature`].
    pub profile_error: f64,
    /// Largest relative deviation of `ε·k` from [`printed_limit_profile_curvature`].
    pub printed_profile_error: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupRow {
    pub epsilon: f64,
    /// `ε` after adaptive halving.
    pub epsilon_used: f64,
    /// Circumradius of the sampled curve.
    pub circumradius: f64,
    pub min_curvature: f64,
    pub tan_circumradius: f64,
    /// `π/(2·min_curvature)`.
    pub smooth_bound: f64,
    pub bound_holds: bool,
    pub vertices: Vec<VertexBlowup>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlowupTable {
    pub kappa0: f64,
    pub radius: f64,
    pub polygon_circumradius: f64,
    pub rows: Vec<BlowupRow>,
}

impl BlowupTable {
    /// Ratios `min k(ε_{j+1}) / min k(ε_j)` for one vertex.
    pub fn curvature_ratios(&self, vertex: usize) -> Vec<f64> {
        let mins: Vec<f64> = self
            .rows
            .iter()
            .filter_map(|r| r.vertices.iter().find(|v| v.vertex == vertex))
            .map(|v| v.min_interior_curvature)
            .collect();
        mins.windows(2).map(|w| w[1] / w[0]).collect()
    }

    /// Sampled circumradius is non-increasing down the table.
    pub fn circumradius_decreasing(&self) -> bool {
        self.rows
            .windows(2)
            .all(|w| w[1].circumradius <= w[0].circumradius + tolerance::CHECK)
    }
}

/// Trimmed `φ` grid on `[-θ, θ]`.
pub fn profile_grid(theta: f64) -> Vec<f64> {
    let lim = (1.0 - PROFILE_MARGIN) * theta;
    (0..PROFILE_POINTS)
        .map(|j| -lim + 2.0 * lim * j as f64 / (PROFILE_POINTS - 1) as f64)
        .collect()
}

/// Scaled connector curvature against the limit profiles at one `θ`.
pub fn connector_blowup(lambda: Lambda, radius: f64, epsilon: f64, theta: f64) -> Result<VertexBlowup> {
    let c = connector_coefficients(lambda, radius, epsilon, theta)?;
    let mut min_k = f64::INFINITY;
    let mut scaled_profile = Vec::with_capacity(PROFILE_POINTS);
    let mut profile_error: f64 = 0.0;
    let mut printed_profile_error: f64 = 0.0;
    for phi in profile_grid(theta) {
        let k = c.curvature(lambda, phi)?;
        min_k = min_k.min(k);
        let scaled = epsilon * k;
        scaled_profile.push((phi, scaled));
        let l = limit_profile_curvature(theta, phi);
        let lp = printed_limit_profile_curvature(theta, phi);
        profile_error = profile_error.max(((scaled - l) / l).abs());
        printed_profile_error = printed_profile_error.max(((scaled - lp) / lp).abs());
    }
    Ok(VertexBlowup {
        vertex: 0,
        theta,
        min_interior_curvature: min_k,
        scaled_profile,
        profile_error,
        printed_profile_error,
    })
}

/// Assembles `C_ε` for every `ε` in `epsilons` (decreasing) and records the
/// connector blow-up and the circumradius of the sampled curve.
pub fn blowup_sweep(p: &ConvexPolygon, kappa0: f64, epsilons: &[f64]) -> Result<BlowupTable> {
    if epsilons.iter().any(|e| !(*e > 0.0)) || epsilons.windows(2).any(|w| w[1] >= w[0]) {
        return Err(GeomError::Domain("epsilons must be positive and decreasing".into()));
    }
    let sf = p.space_form();
    let lam = sf.lambda();
    let polygon_circumradius = p.circumradius()?;
    let mut rows = Vec::with_capacity(epsilons.len());
    let mut radius = 0.0;
    for &eps in epsilons {
        let smoothed = assemble(p, kappa0, eps)?;
        radius = smoothed.support.radius;
        let samples = smoothed.curve.sample(CONNECTOR_SAMPLES)?;
        let points: Vec<Point> = samples.iter().map(|s| s.point).collect();
        let circumradius = min_disk(&sf, &points)?.radius;
        let min_curvature = smoothed.diagnostics.min_curvature;
        let tan_circumradius = gtan(lam, circumradius)?;
        let smooth_bound = PI / (2.0 * min_curvature);
        let eps_used = smoothed.diagnostics.epsilon;
        let vertices = smoothed
            .curve
            .connectors()
            .map(|c| {
                let mut v = connector_blowup(lam, radius, eps_used, c.theta())?;
                v.vertex = c.vertex_index;
                Ok(v)
            })
            .collect::<Result<Vec<_>>>()?;
        rows.push(BlowupRow {
            epsilon: eps,
            epsilon_used: eps_used,
            circumradius,
            min_curvature,
            tan_circumradius,
            smooth_bound,
            bound_holds: tan_circumradius <= smooth_bound + tolerance::CHECK,
            vertices,
        });
    }
    Ok(BlowupTable {
        kappa0,
        radius,
        polygon_circumradius,
        rows,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_PI_4;

    fn square() -> ConvexPolygon {
        let sf = SpaceForm::new(0.0).unwrap();
        let v = [[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]]
            .iter()
            .map(|c| sf.point(c).unwrap())
            .collect();
        ConvexPolygon::from_vertices(sf, v).unwrap()
    }

    #[test]
    fn arcs_stay_accurate_near_the_hyperbolic_range_limit() {
        // κ₀ just above π/2 puts the support centers ~5.9 from the origin
        let sf = SpaceForm::new(-1.0).unwrap();
        let p = ConvexPolygon::random_convex(sf, 8, 8759902042389087616, 0.23991053230132822).unwrap();
        let k0 = p.curvature_report().unwrap().kappa0;
        let support = build_support_arcs(&p, k0).unwrap();
        assert!(support.radius > 5.0);
        for arc in &support.arcs {
            assert!(sf.distance(&arc.point(&sf, 0.0), &arc.start) < 1e-10);
            assert!(sf.distance(&arc.point(&sf, arc.span), &arc.end) < 1e-10);
        }
        let d = assemble(&p, k0, 1e-3).unwrap().diagnostics;
        assert!(d.max_gap <= 1e-9 && d.max_tangent_mismatch <= 1e-7, "{d:?}");
    }

    #[test]
    fn square_support_angles() {
        let s = build_support_arcs(&square(), FRAC_PI_4).unwrap();
        assert!((s.radius - 2.0).abs() < 1e-15);
        for v in &s.vertices {
            assert!((v.beta_in - PI / 3.0).abs() < 1e-14);
            assert!((v.delta_out - PI / 6.0).abs() < 1e-14);
            assert!((v.theta - PI / 12.0).abs() < 1e-14);
        }
        for arc in &s.arcs {
            assert!((arc.span - PI / 3.0).abs() < 1e-12);
        }
    }

    #[test]
    fn support_arc_endpoints_and_center() {
        let sf = SpaceForm::new(-1.0).unwrap();
        let p = ConvexPolygon::regular_inscribed(sf, 0.4, 6).unwrap();
        let k0 = p.curvature_report().unwrap().kappa0;
        let s = build_support_arcs(&p, k0).unwrap();
        for arc in &s.arcs {
            assert!((sf.distance(&arc.center, &arc.start) - s.radius).abs() < 1e-9);
            assert!((sf.distance(&arc.center, &arc.end) - s.radius).abs() < 1e-9);
            // inward: the center is left of the directed side
            assert!(sf.orientation(&arc.start, &arc.end, &arc.center) > 0.0);
            assert!(sf.distance(&arc.point(&sf, arc.span), &arc.end) < 1e-9);
        }
    }

    #[test]
    fn kappa0_above_minimum_is_rejected() {
        let p = square();
        assert!(matches!(build_support_arcs(&p, 0.8), Err(GeomError::Domain(_))));
    }

    #[test]
    fn polar_curvature_examples() {
        let l0 = Lambda::new(0.0);
        assert!((polar_curvature(l0, 2.0, 0.0, 1.0).unwrap() - 0.25).abs() < 1e-15);
        for lam in [-1.0, 0.0, 1.0] {
            let l = Lambda::new(lam);
            let k = polar_curvature(l, 0.8, 0.0, 0.0).unwrap();
            assert!((k - gcot(l, 0.8).unwrap()).abs() < 1e-14);
        }
        assert!(polar_curvature(l0, 0.0, 0.0, 0.0).is_err());
        assert!(polar_curvature(Lambda::new(1.0), 3.5, 0.0, 0.0).is_err());
    }

    #[test]
    fn printed_coefficients_disagree_with_classical_formula() {
        let l0 = Lambda::new(0.0);
        let k = printed_polar_curvature(l0, 2.0, 0.0, 1.0).unwrap();
        assert!((k - 0.25).abs() > 0.1);
    }

    #[test]
    fn connector_endpoint_conditions() {
        for lam in [-1.0, 0.0, 1.0] {
            let l = Lambda::new(lam);
            let c = connector_coefficients(l, 0.7, 1e-3, 0.4).unwrap();
            for phi in [-0.4, 0.4] {
                assert!((c.r(phi) - 1e-3).abs() < 1e-18);
                assert!(c.dr(phi).abs() < 1e-18);
                let k = c.curvature(l, phi).unwrap();
                assert!((k - gcot(l, 0.701).unwrap()).abs() < 1e-10);
            }
        }
        assert!(matches!(
            connector_coefficients(Lambda::new(0.0), 1.0, 1e-3, 0.0),
            Err(GeomError::DegenerateTheta(_))
        ));
    }

    #[test]
    fn connector_leading_order() {
        let eps = 1e-4;
        let theta = FRAC_PI_4;
        let c = connector_coefficients(Lambda::new(0.0), 1.0, eps, theta).unwrap();
        let lead = eps / (8.0 * theta * theta);
        assert!((c.b - lead).abs() / lead < 1e-3);
    }

    #[test]
    fn offset_curvature_identity() {
        for lam in [-1.0, 0.0, 0.5, 1.0] {
            let l = Lambda::new(lam);
            let direct = gcot(l, 0.9 + 0.05).unwrap();
            let quotient = offset_curvature_quotient(l, 0.9, 0.05).unwrap();
            assert!((direct - quotient).abs() < 1e-11);
        }
    }

    #[test]
    fn offset_overflow_on_sphere() {
        let sf = SpaceForm::new(1.0).unwrap();
        let p = ConvexPolygon::regular_inscribed(sf, 0.7, 5).unwrap();
        let k0 = p.curvature_report().unwrap().kappa0;
        let s = build_support_arcs(&p, k0).unwrap();
        assert!(matches!(
            offset_arcs(&sf, &s.arcs, FRAC_PI_2),
            Err(GeomError::RadiusOverflow { .. })
        ));
    }

    #[test]
    fn square_assembly() {
        let out = assemble(&square(), FRAC_PI_4, 1e-3).unwrap();
        let d = &out.diagnostics;
        assert!(d.max_gap <= 1e-9, "{d:?}");
        assert!(d.max_tangent_mismatch <= 1e-7);
        assert!(d.max_curvature_jump <= 1e-8);
        assert!(d.min_curvature >= gcot(Lambda::new(0.0), 2.001).unwrap() - 1e-8);
        assert!(d.encloses_vertices);
        assert_eq!(out.curve.pieces.len(), 8);
        let first = d.junctions[0];
        for j in &d.junctions {
            assert!((j.gap - first.gap).abs() < 1e-10 || j.gap < 1e-12);
        }
    }

    #[test]
    fn limit_profile_vanishes_only_at_the_ends() {
        for theta in [0.1, 0.5, 1.0, FRAC_PI_2] {
            assert!(limit_profile_curvature(theta, theta).abs() < 1e-12);
            assert!(limit_profile_curvature(theta, 0.0) > 0.9);
            assert!((printed_limit_profile_curvature(theta, theta) - 2.0).abs() < 1e-12);
        }
    }

    #[test]
    fn sweep_on_hexagon() {
        let sf = SpaceForm::new(0.0).unwrap();
        let p = ConvexPolygon::regular_inscribed(sf, 1.0, 6).unwrap();
        let k0 = p.curvature_report().unwrap().kappa0;
        let t = blowup_sweep(&p, k0, &[1e-2, 5e-3, 2.5e-3]).unwrap();
        assert!(t.circumradius_decreasing());
        for r in t.curvature_ratios(0) {
            assert!((1.8..=2.2).contains(&r), "{r}");
        }
        assert!(t.rows.iter().all(|r| r.bound_holds));
        assert!(t.rows.iter().all(|r| r.circumradius >= t.polygon_circumradius - 1e-9));
    }
}
