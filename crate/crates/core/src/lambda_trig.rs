//! Generalized trigonometric functions of the constant-curvature planes.
//!
//! For a curvature constant `λ` the family interpolates between circular
//! functions (`λ > 0`), the linear/constant pair (`λ = 0`) and hyperbolic
//! functions (`λ < 0`):
//!
//! ```text
//! s_λ(t) = sin(√λ t)/√λ      t       sinh(√-λ t)/√-λ
//! c_λ(t) = cos(√λ t)         1       cosh(√-λ t)
//! ```
//!
//! with `ta_λ = s_λ/c_λ` and `co_λ = c_λ/s_λ`. When `|λ|·t²` is tiny the
//! closed forms lose precision (and are undefined at `λ = 0`), so a
//! truncated power series in `x = λ t²` is used instead. The series and
//! the closed forms agree to machine precision at the switch point.

use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};

/// Below this value of `|λ|·t²` the power series are evaluated.
pub const SERIES_THRESHOLD: f64 = 1e-8;

/// `|c_λ(t)|` below this is treated as a pole of `ta_λ`.
const POLE_TOL: f64 = 1e-13;

/// Sectional curvature constant of a space form (units 1/length²).
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct Lambda(f64);

impl Lambda {
    pub const FLAT: Lambda = Lambda(0.0);

    /// Panics if `value` is not finite; see [`Lambda::try_new`].
    pub fn new(value: f64) -> Self {
        Self::try_new(value).expect("curvature constant must be finite")
    }

    pub fn try_new(value: f64) -> Result<Self> {
        if value.is_finite() {
            Ok(Lambda(value))
        } else {
            Err(GeomError::Domain(format!("lambda = {value} is not finite")))
        }
    }

    #[inline]
    pub fn value(self) -> f64 {
        self.0
    }

    /// `√|λ|`.
    #[inline]
    pub fn sqrt_abs(self) -> f64 {
        self.0.abs().sqrt()
    }

    #[inline]
    pub fn is_flat(self) -> bool {
        self.0 == 0.0
    }

    /// `π/√λ` for `λ > 0`, infinity otherwise.
    pub fn conjugate_distance(self) -> f64 {
        if self.0 > 0.0 {
            std::f64::consts::PI / self.0.sqrt()
        } else {
            f64::INFINITY
        }
    }

    /// `π/(2√λ)` for `λ > 0`, infinity otherwise.
    pub fn quarter_distance(self) -> f64 {
        0.5 * self.conjugate_distance()
    }
}

impl TryFrom<f64> for Lambda {
    type Error = GeomError;

    fn try_from(value: f64) -> Result<Self> {
        Lambda::try_new(value)
    }
}

impl From<Lambda> for f64 {
    fn from(l: Lambda) -> f64 {
        l.0
    }
}

/// `s_λ(t)`.
pub fn gsin(lambda: Lambda, t: f64) -> f64 {
    let l = lambda.0;
    let x = l * t * t;
    if x.abs() < SERIES_THRESHOLD {
        t * (1.0 + x * (-1.0 / 6.0 + x * (1.0 / 120.0 - x / 5040.0)))
    } else if l > 0.0 {
        let k = l.sqrt();
        (k * t).sin() / k
    } else {
        let k = (-l).sqrt();
        (k * t).sinh() / k
    }
}

/// `c_λ(t)`.
pub fn gcos(lambda: Lambda, t: f64) -> f64 {
    let l = lambda.0;
    let x = l * t * t;
    if x.abs() < SERIES_THRESHOLD {
        1.0 + x * (-0.5 + x * (1.0 / 24.0 - x / 720.0))
    } else if l > 0.0 {
        (l.sqrt() * t).cos()
    } else {
        ((-l).sqrt() * t).cosh()
    }
}

/// `ta_λ(t) = s_λ(t)/c_λ(t)`.
pub fn gtan(lambda: Lambda, t: f64) -> Result<f64> {
    let c = gcos(lambda, t);
    if c.abs() < POLE_TOL {
        return Err(GeomError::Pole(t));
    }
    Ok(gsin(lambda, t) / c)
}

/// `co_λ(t) = c_λ(t)/s_λ(t)`; `t = 0` (and `t = kπ/√λ` for `λ > 0`) is a pole.
pub fn gcot(lambda: Lambda, t: f64) -> Result<f64> {
    let s = gsin(lambda, t);
    let at_pole = s == 0.0
        || (lambda.0 > 0.0 && {
            let phase = lambda.0.sqrt() * t;
            phase.abs() > 1.0 && phase.sin().abs() < POLE_TOL
        });
    if at_pole {
        return Err(GeomError::Pole(t));
    }
    Ok(gcos(lambda, t) / s)
}

/// Inverse of [`gtan`] on its principal branch.
///
/// For `λ > 0` the result lies in `(-π/(2√λ), π/(2√λ))`. For `λ < 0` the
/// tangent is bounded by `1/√|λ|` and larger arguments are rejected.
pub fn arc_gtan(lambda: Lambda, x: f64) -> Result<f64> {
    let l = lambda.0;
    let y = l * x * x;
    if y.abs() < SERIES_THRESHOLD {
        return Ok(x * (1.0 + y * (-1.0 / 3.0 + y * (0.2 - y / 7.0))));
    }
    if l > 0.0 {
        let k = l.sqrt();
        Ok((k * x).atan() / k)
    } else {
        let k = (-l).sqrt();
        let z = k * x;
        if z.abs() >= 1.0 {
            return Err(GeomError::Domain(format!(
                "ta_lambda is bounded by {} for lambda = {l}, got {x}",
                1.0 / k
            )));
        }
        Ok(z.atanh() / k)
    }
}

/// `(1 - c_λ(t))/λ = 2 s_λ(t/2)²`, the versine scaled to stay finite at `λ = 0`.
pub fn gvers(lambda: Lambda, t: f64) -> f64 {
    let h = gsin(lambda, 0.5 * t);
    2.0 * h * h
}
