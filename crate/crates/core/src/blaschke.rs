//! Circumradius bounds for convex polygons with curvature bounded below.
//!
//! With `κ₀` the minimum vertex curvature, the circumradius `R` satisfies
//!
//! ```text
//! ta_λ(R) ≤ π/(2κ₀)                                     (tangent-scaled curvature)
//! R ≤ π/(2κ₀)                          if λ = 0          (flat curvature)
//! ta_λ(R) ≤ (ta_λ(𝔢)/𝔢)·π/(2κ₀)       if λ ≠ 0
//! ```
//!
//! where for the flat curvature on curved models every side obeys
//! `ℓ_i ≤ 2𝔢` (`λ > 0`) or `ℓ_i ≥ 2𝔢` with `κ₀ > √|λ|` (`λ < 0`). Equality
//! holds only for the 2-covered segment.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::geom::SpaceForm;
use crate::lambda_trig::{arc_gtan, gcot, gsin, gtan, Lambda};
use crate::polygon::ConvexPolygon;
use crate::tolerance;

/// Which vertex curvature `κ₀` is taken from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CurvatureDefinition {
    /// `(π - Â)/(ta_λ(ℓ₁/2) + ta_λ(ℓ₂/2))`.
    Ta,
    /// `2(π - Â)/(ℓ₁ + ℓ₂)` on every model.
    Flat,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BlaschkeReport {
    pub lambda: f64,
    pub definition: CurvatureDefinition,
    pub kappa0: f64,
    pub circumradius: f64,
    /// Left-hand side of the bound: `ta_λ(R)`, or `R` for the flat curvature at `λ = 0`.
    pub measured: f64,
    /// Right-hand side of the bound, in the same scale as `measured`.
    pub bound: f64,
    pub margin: f64,
    pub holds: bool,
    /// `κ₀ > 0`, and `κ₀ > √|λ|` when `λ < 0`.
    pub hypothesis: bool,
    /// Largest radius allowed by the bound, when it is finite.
    pub radius_bound: Option<f64>,
    pub frak_e: Option<f64>,
    /// `margin` below the near-equality threshold.
    pub near_equality: bool,
    /// The polygon is (numerically) a 2-covered segment.
    pub degenerate: bool,
}

/// `R_max = ar ta_λ(π/(2κ₀))`.
pub fn bound_radius(lambda: Lambda, kappa0: f64) -> Result<f64> {
    if !(kappa0 > 0.0) {
        return Err(GeomError::Domain(format!("kappa0 = {kappa0} must be positive")));
    }
    arc_gtan(lambda, PI / (2.0 * kappa0))
}

/// Radius bound for the flat vertex curvature with half-side parameter `frak_e`.
pub fn bound_radius_flat(lambda: Lambda, kappa0: f64, frak_e: f64) -> Result<f64> {
    if !(kappa0 > 0.0) {
        return Err(GeomError::Domain(format!("kappa0 = {kappa0} must be positive")));
    }
    if lambda.is_flat() {
        return Ok(PI / (2.0 * kappa0));
    }
    let scale = flat_bound_scale(lambda, frak_e)?;
    if lambda.value() < 0.0 && kappa0 <= lambda.sqrt_abs() {
        return Err(GeomError::Domain(format!(
            "kappa0 = {kappa0} must exceed sqrt(|lambda|) = {}",
            lambda.sqrt_abs()
        )));
    }
    arc_gtan(lambda, scale * PI / (2.0 * kappa0))
}

/// `ta_λ(𝔢)/𝔢`, validating `𝔢`.
fn flat_bound_scale(lambda: Lambda, frak_e: f64) -> Result<f64> {
    if !(frak_e > 0.0) || !frak_e.is_finite() {
        return Err(GeomError::InvalidFrakE(format!("{frak_e} must be positive")));
    }
    if lambda.value() > 0.0 && 2.0 * frak_e >= lambda.conjugate_distance() {
        return Err(GeomError::InvalidFrakE(format!(
            "2e = {} must be below pi/sqrt(lambda)",
            2.0 * frak_e
        )));
    }
    Ok(gtan(lambda, frak_e)? / frak_e)
}

/// The half-side parameter that makes the flat-curvature bound tightest for `p`:
/// the largest half side for `λ > 0`, the smallest for `λ < 0`.
pub fn natural_frak_e(p: &ConvexPolygon) -> Option<f64> {
    let lam = p.space_form().lambda().value();
    let sides = p.side_lengths().iter().copied();
    if lam > 0.0 {
        sides.fold(None, |m: Option<f64>, l| Some(m.map_or(l, |m| m.max(l)))).map(|l| l / 2.0)
    } else if lam < 0.0 {
        sides.fold(None, |m: Option<f64>, l| Some(m.map_or(l, |m| m.min(l)))).map(|l| l / 2.0)
    } else {
        None
    }
}

pub fn verify(p: &ConvexPolygon, definition: CurvatureDefinition, frak_e: Option<f64>) -> Result<BlaschkeReport> {
    verify_with_tolerance(p, definition, frak_e, tolerance::CHECK)
}

/// Evaluates the bound on `p` with `κ₀` the minimum vertex curvature.
pub fn verify_with_tolerance(
    p: &ConvexPolygon,
    definition: CurvatureDefinition,
    frak_e: Option<f64>,
    tol: f64,
) -> Result<BlaschkeReport> {
    let sf = p.space_form();
    let lam = sf.lambda();
    let report = p.curvature_report()?;
    let circumradius = p.circumradius()?;
    let kappa0 = match definition {
        CurvatureDefinition::Ta => report.kappa0,
        CurvatureDefinition::Flat => report.kappa0_flat,
    };
    let mut hypothesis = kappa0 > 0.0 && (lam.value() >= 0.0 || kappa0 > lam.sqrt_abs());
    let (measured, bound, radius_bound, frak_e) = match definition {
        CurvatureDefinition::Ta => (
            gtan(lam, circumradius)?,
            PI / (2.0 * kappa0),
            bound_radius(lam, kappa0).ok(),
            None,
        ),
        CurvatureDefinition::Flat if lam.is_flat() => {
            (circumradius, PI / (2.0 * kappa0), Some(PI / (2.0 * kappa0)), None)
        }
        CurvatureDefinition::Flat => {
            let e = frak_e.ok_or_else(|| {
                GeomError::InvalidFrakE("required for the flat curvature when lambda != 0".into())
            })?;
            let scale = flat_bound_scale(lam, e)?;
            check_frak_e(p, e)?;
            (
                gtan(lam, circumradius)?,
                scale * PI / (2.0 * kappa0),
                bound_radius_flat(lam, kappa0, e).ok(),
                Some(e),
            )
        }
    };
    if !(bound.is_finite()) {
        hypothesis = false;
    }
    let margin = bound - measured;
    Ok(BlaschkeReport {
        lambda: lam.value(),
        definition,
        kappa0,
        circumradius,
        measured,
        bound,
        margin,
        holds: margin >= -tol,
        hypothesis,
        radius_bound,
        frak_e,
        near_equality: margin < tolerance::NEAR_EQUALITY,
        degenerate: is_numerical_digon(p),
    })
}

fn check_frak_e(p: &ConvexPolygon, e: f64) -> Result<()> {
    let lam = p.space_form().lambda().value();
    let slack = 1e-12 * (1.0 + 2.0 * e);
    for (index, &length) in p.side_lengths().iter().enumerate() {
        let bad = if lam > 0.0 {
            length > 2.0 * e + slack
        } else {
            length < 2.0 * e - slack
        };
        if bad {
            return Err(GeomError::FrakEInconsistent { index, length });
        }
    }
    Ok(())
}

/// True for digons and for polygons whose vertices all lie within
/// `NEAR_EQUALITY` (relative) of the geodesic through their two farthest vertices.
pub fn is_numerical_digon(p: &ConvexPolygon) -> bool {
    if p.is_digon() {
        return true;
    }
    let sf = p.space_form();
    let v = p.vertices();
    let mut far = (0, 1, 0.0);
    for i in 0..v.len() {
        for j in i + 1..v.len() {
            let d = sf.distance(&v[i], &v[j]);
            if d > far.2 {
                far = (i, j, d);
            }
        }
    }
    let (a, b, diam) = far;
    v.iter().all(|x| {
        let off = sf.orientation(&v[a], &v[b], x).abs() * sf.distance(&v[a], x);
        off <= tolerance::NEAR_EQUALITY * diam
    })
}

/// Length of the digon whose vertex curvature equals `kappa0`: `2·ar ta_λ(π/(2κ₀))`.
pub fn equality_digon_length(lambda: Lambda, kappa0: f64) -> Result<f64> {
    Ok(2.0 * bound_radius(lambda, kappa0)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub n: usize,
    /// Vertex curvature measured on the constructed regular polygon.
    pub kappa_polygon: f64,
    /// The same curvature from the right-triangle closed form.
    pub kappa_closed_form: f64,
    /// `co_λ(R)`, the curvature of the circumscribed circle.
    pub limit: f64,
    /// `|κ_n - co_λ(R)|` using the polygon value.
    pub error: f64,
    /// `|kappa_polygon - kappa_closed_form|`.
    pub path_gap: f64,
}

/// Vertex curvature of the regular `n`-gon inscribed in a circle of radius `radius`,
/// without building the polygon.
///
/// In the right triangle (center, side midpoint, vertex) the angle at the
/// center is `π/n`, so `s_λ(ℓ/2) = s_λ(R)·sin(π/n)`; with `ta_λ(ℓ/2) = ta_λ(R)·cos(B̂/2)`
/// this gives `κ_n = γ/(ta_λ(R)·sin γ)` where `sin γ = ta_λ(ℓ/2)/ta_λ(R)`.
pub fn regular_curvature_closed_form(lambda: Lambda, radius: f64, n: usize) -> Result<f64> {
    if n < 3 {
        return Err(GeomError::TooFewVertices { min: 3, got: n });
    }
    let limit = lambda.quarter_distance();
    if !(radius > 0.0) || radius >= limit {
        return Err(GeomError::RadiusTooLarge { radius, limit });
    }
    let s_half = gsin(lambda, radius) * (PI / n as f64).sin();
    let ta_half = s_half / (1.0 - lambda.value() * s_half * s_half).sqrt();
    let gamma = (ta_half / gtan(lambda, radius)?).min(1.0).asin();
    debug_assert!(gamma <= FRAC_PI_2);
    Ok(gamma / ta_half)
}

/// Vertex curvature of inscribed regular polygons against the circle curvature.
pub fn convergence_table(lambda: Lambda, radius: f64, ns: &[usize]) -> Result<Vec<ConvergenceRow>> {
    let sf = SpaceForm::from_lambda(lambda);
    let limit = gcot(lambda, radius)?;
    ns.iter()
        .map(|&n| {
            let p = ConvexPolygon::regular_inscribed(sf, radius, n)?;
            let kappa_polygon = p.curvature_report()?.kappa0;
            let kappa_closed_form = regular_curvature_closed_form(lambda, radius, n)?;
            Ok(ConvergenceRow {
                n,
                kappa_polygon,
                kappa_closed_form,
                limit,
                error: (kappa_polygon - limit).abs(),
                path_gap: (kappa_polygon - kappa_closed_form).abs(),
            })
        })
        .collect()
}


#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;

    fn lam() -> impl Strategy<Value = f64> {
        prop_oneof![Just(-1.0), Just(0.0), Just(1.0)]
    }

    proptest! {
        #[test]
        fn tangent_bound_holds(l in lam(), n in 3usize..13, seed in any::<u64>(), r in 0.1..1.4f64) {
            let p = ConvexPolygon::random_convex(SpaceForm::new(l).unwrap(), n, seed, r).unwrap();
            let rep = verify(&p, CurvatureDefinition::Ta, None).unwrap();
            prop_assert!(rep.holds, "{rep:?}");
            prop_assert!(!rep.degenerate || rep.near_equality);
        }

        #[test]
        fn flat_bound_holds_with_natural_frak_e(l in lam(), n in 3usize..13, seed in any::<u64>(), r in 0.05..1.4f64) {
            let p = ConvexPolygon::random_convex(SpaceForm::new(l).unwrap(), n, seed, r).unwrap();
            let rep = verify(&p, CurvatureDefinition::Flat, natural_frak_e(&p)).unwrap();
            prop_assume!(rep.hypothesis);
            prop_assert!(rep.holds, "{rep:?}");
        }

        #[test]
        fn bound_radius_decreases_in_kappa(l in lam(), k in 1.6..10.0f64, dk in 0.01..5.0f64) {
            let lam = Lambda::new(l);
            prop_assert!(bound_radius(lam, k + dk).unwrap() < bound_radius(lam, k).unwrap());
        }

        #[test]
        fn digon_attains_the_bound(l in lam(), k in 1.6..10.0f64) {
            let sf = SpaceForm::new(l).unwrap();
            let p = ConvexPolygon::digon(sf, equality_digon_length(sf.lambda(), k).unwrap()).unwrap();
            let rep = verify(&p, CurvatureDefinition::Ta, None).unwrap();
            prop_assert!((rep.kappa0 - k).abs() < 1e-9 * k);
            prop_assert!(rep.margin.abs() < 1e-9);
            prop_assert!(rep.near_equality && rep.degenerate);
        }

        #[test]
        fn closed_form_matches_polygon(l in lam(), r in 0.1..1.4f64, n in 3usize..200) {
            let lam = Lambda::new(l);
            let row = convergence_table(lam, r, &[n]).unwrap()[0];
            prop_assert!(row.path_gap < 1e-9, "{row:?}");
            prop_assert!(row.kappa_polygon > row.limit);
        }
    }
}
