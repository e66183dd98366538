//! Points, tangent vectors and geodesic constructions in the model planes.
//!
//! All three models live in ℝ³:
//!
//! * `λ > 0`: the sphere `⟨p,p⟩ = 1/λ` with the Euclidean dot product;
//! * `λ = 0`: the plane `z = 0`;
//! * `λ < 0`: the upper sheet of `⟨p,p⟩ = 1/λ` for the Minkowski form
//!   `-x₀y₀ + x₁y₁ + x₂y₂` (coordinate 0 timelike, `x₀ > 0`).
//!
//! In every model, `det(q, u, w)·√|λ|` is the oriented area form of the
//! tangent plane at `q` (`u × w` for the flat model), and positive
//! orientation is counterclockwise with respect to the canonical polar
//! frame at the base point.

use nalgebra::Vector3;
use serde::{Deserialize, Serialize};

use crate::error::{GeomError, Result};
use crate::lambda_trig::{gcos, gcot, gsin, gvers, Lambda};
use crate::tolerance;

pub type Vec3 = Vector3<f64>;

/// Which model realizes the space form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ModelKind {
    Spherical,
    Flat,
    Hyperbolic,
}

/// A simply connected surface of constant curvature `λ`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpaceForm {
    lambda: Lambda,
}

/// A point of a model, in embedding coordinates (`z = 0` in the flat model).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Point(Vec3);

/// A tangent vector `dir` at `base`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentVector {
    pub base: Point,
    pub dir: Vec3,
}

/// Orthonormal frame at `center` used for geodesic polar coordinates.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolarFrame {
    pub center: Point,
    pub e1: Vec3,
    pub e2: Vec3,
}

/// A geodesic circle given by center and radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Circle {
    pub center: Point,
    pub radius: f64,
}

impl Point {
    /// Wraps raw embedding coordinates without validation.
    #[inline]
    pub fn from_vec(v: Vec3) -> Self {
        Point(v)
    }

    #[inline]
    pub fn vec(&self) -> &Vec3 {
        &self.0
    }
}

impl TangentVector {
    pub fn zero(base: Point) -> Self {
        TangentVector {
            base,
            dir: Vec3::zeros(),
        }
    }

    pub fn scaled(&self, factor: f64) -> Self {
        TangentVector {
            base: self.base,
            dir: self.dir * factor,
        }
    }
}

impl SpaceForm {
    pub fn new(lambda: f64) -> Result<Self> {
        Ok(SpaceForm {
            lambda: Lambda::try_new(lambda)?,
        })
    }

    pub fn from_lambda(lambda: Lambda) -> Self {
        SpaceForm { lambda }
    }

    #[inline]
    pub fn lambda(&self) -> Lambda {
        self.lambda
    }

    #[inline]
    fn l(&self) -> f64 {
        self.lambda.value()
    }

    pub fn kind(&self) -> ModelKind {
        let l = self.l();
        if l > 0.0 {
            ModelKind::Spherical
        } else if l < 0.0 {
            ModelKind::Hyperbolic
        } else {
            ModelKind::Flat
        }
    }

    /// Number of embedding coordinates used in files (2 for the plane).
    pub fn dim(&self) -> usize {
        if self.lambda.is_flat() {
            2
        } else {
            3
        }
    }

    /// The model bilinear form.
    #[inline]
    pub fn inner(&self, a: &Vec3, b: &Vec3) -> f64 {
        if self.l() < 0.0 {
            -a.x * b.x + a.y * b.y + a.z * b.z
        } else {
            a.dot(b)
        }
    }

    /// Length of a tangent (or, for `λ < 0`, spacelike) vector.
    #[inline]
    pub fn norm(&self, v: &Vec3) -> f64 {
        self.inner(v, v).max(0.0).sqrt()
    }

    /// `(1/√λ, 0, 0)` on curved models, the origin in the plane.
    pub fn base_point(&self) -> Point {
        if self.lambda.is_flat() {
            Point(Vec3::zeros())
        } else {
            Point(Vec3::new(1.0 / self.lambda.sqrt_abs(), 0.0, 0.0))
        }
    }

    pub fn canonical_frame(&self) -> PolarFrame {
        let (e1, e2) = if self.lambda.is_flat() {
            (Vec3::x(), Vec3::y())
        } else {
            (Vec3::y(), Vec3::z())
        };
        PolarFrame {
            center: self.base_point(),
            e1,
            e2,
        }
    }

    /// Validates embedding coordinates and returns a point.
    ///
    /// Expects 2 coordinates for the flat model and 3 otherwise.
    pub fn point(&self, coords: &[f64]) -> Result<Point> {
        if coords.len() != self.dim() {
            return Err(GeomError::InvalidPoint(format!(
                "expected {} coordinates, got {}",
                self.dim(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(GeomError::InvalidPoint("non-finite coordinate".into()));
        }
        let v = if self.lambda.is_flat() {
            Vec3::new(coords[0], coords[1], 0.0)
        } else {
            Vec3::new(coords[0], coords[1], coords[2])
        };
        self.check_point(&v)?;
        Ok(Point(v))
    }

    fn check_point(&self, v: &Vec3) -> Result<()> {
        let l = self.l();
        if l == 0.0 {
            return if v.z == 0.0 {
                Ok(())
            } else {
                Err(GeomError::InvalidPoint("flat point with z != 0".into()))
            };
        }
        let q = self.inner(v, v);
        // compare λ⟨p,p⟩ with 1, relative to the model scale
        if (l * q - 1.0).abs() > tolerance::QUADRIC * (1.0 + l.abs() * v.norm_squared()) {
            return Err(GeomError::InvalidPoint(format!(
                "<p,p> = {q}, expected {}",
                1.0 / l
            )));
        }
        if l < 0.0 && v.x <= 0.0 {
            return Err(GeomError::InvalidPoint("point on the lower sheet".into()));
        }
        Ok(())
    }

    /// Embedding coordinates as written to files.
    pub fn coords(&self, p: &Point) -> Vec<f64> {
        let v = p.vec();
        if self.lambda.is_flat() {
            vec![v.x, v.y]
        } else {
            vec![v.x, v.y, v.z]
        }
    }

    /// Projects raw coordinates back onto the model quadric.
    pub fn renormalize(&self, v: Vec3) -> Point {
        let l = self.l();
        if l > 0.0 {
            let n = v.norm();
            Point(v / (n * l.sqrt()))
        } else if l < 0.0 {
            // keep the spacelike part, lift the timelike coordinate
            let t = (1.0 / -l + v.y * v.y + v.z * v.z).sqrt();
            Point(Vec3::new(t, v.y, v.z))
        } else {
            Point(Vec3::new(v.x, v.y, 0.0))
        }
    }

    /// Orthogonal projection of `dir` onto the tangent plane at `base`.
    pub fn tangent(&self, base: &Point, dir: Vec3) -> TangentVector {
        let l = self.l();
        let dir = if l == 0.0 {
            Vec3::new(dir.x, dir.y, 0.0)
        } else {
            dir - base.0 * (l * self.inner(&base.0, &dir))
        };
        TangentVector { base: *base, dir }
    }

    /// Unnormalized tangent at `p` pointing toward `q`; its length is `s_λ(d(p,q))`.
    fn toward(&self, p: &Point, q: &Point) -> Vec3 {
        let l = self.l();
        let d = q.0 - p.0;
        if l == 0.0 {
            d
        } else {
            d - p.0 * (l * self.inner(&p.0, &d))
        }
    }

    /// Geodesic distance.
    pub fn distance(&self, p: &Point, q: &Point) -> f64 {
        let l = self.l();
        if l > 0.0 {
            let angle = (l * p.0.cross(&q.0).norm()).atan2(l * p.0.dot(&q.0));
            angle / l.sqrt()
        } else if l < 0.0 {
            let k = (-l).sqrt();
            let d = q.0 - p.0;
            let chord = self.norm(&d);
            2.0 * (0.5 * k * chord).asinh() / k
        } else {
            (q.0 - p.0).norm()
        }
    }

    /// Exponential map: the point reached after `|v|` along the geodesic with direction `v`.
    pub fn exp_map(&self, v: &TangentVector) -> Point {
        let n = self.norm(&v.dir);
        if n == 0.0 {
            return v.base;
        }
        if self.lambda.is_flat() {
            return Point(v.base.0 + v.dir);
        }
        let x = v.base.0 * gcos(self.lambda, n) + v.dir * (gsin(self.lambda, n) / n);
        self.renormalize(x)
    }

    /// Inverse of [`exp_map`](Self::exp_map) away from the cut locus.
    pub fn log_map(&self, p: &Point, q: &Point) -> Result<TangentVector> {
        let d = self.distance(p, q);
        if d == 0.0 {
            return Ok(TangentVector::zero(*p));
        }
        if self.l() > 0.0 && d > self.lambda.conjugate_distance() - tolerance::ACOS_CLAMP {
            return Err(GeomError::Antipodal);
        }
        let u = self.toward(p, q);
        let n = self.norm(&u);
        if n == 0.0 {
            return Ok(TangentVector::zero(*p));
        }
        Ok(TangentVector {
            base: *p,
            dir: u * (d / n),
        })
    }

    /// Oriented area form `ω_q(u, w)` of the tangent plane at `q`.
    pub fn area_form(&self, q: &Point, u: &Vec3, w: &Vec3) -> f64 {
        if self.lambda.is_flat() {
            u.x * w.y - u.y * w.x
        } else {
            q.0.dot(&u.cross(w)) * self.lambda.sqrt_abs()
        }
    }

    /// Sine of the signed angle at `a` from `b` to `c`; positive when `a, b, c`
    /// turn counterclockwise. Returns 0 for degenerate input.
    pub fn orientation(&self, a: &Point, b: &Point, c: &Point) -> f64 {
        let u = self.toward(a, b);
        let w = self.toward(a, c);
        let nu = self.norm(&u);
        let nw = self.norm(&w);
        if nu == 0.0 || nw == 0.0 {
            return 0.0;
        }
        self.area_form(a, &u, &w) / (nu * nw)
    }

    /// Rotation by +π/2 in the tangent plane at `base`.
    pub fn rot90(&self, base: &Point, v: &Vec3) -> Vec3 {
        let l = self.l();
        let n = self.norm(v);
        let w = if l > 0.0 {
            base.0.cross(v)
        } else if l < 0.0 {
            let c = base.0.cross(v);
            Vec3::new(-c.x, c.y, c.z)
        } else {
            Vec3::new(-v.y, v.x, 0.0)
        };
        let nw = self.norm(&w);
        if nw == 0.0 {
            w
        } else {
            w * (n / nw)
        }
    }

    /// Unsigned angle at `q` between the geodesics toward `p` and `r`.
    pub fn angle_at(&self, q: &Point, p: &Point, r: &Point) -> Result<f64> {
        let u = self.log_map(q, p)?.dir;
        let w = self.log_map(q, r)?.dir;
        if self.norm(&u) == 0.0 || self.norm(&w) == 0.0 {
            return Err(GeomError::Degenerate("angle with a zero-length side".into()));
        }
        Ok(self.area_form(q, &u, &w).abs().atan2(self.inner(&u, &w)))
    }

    /// Angle opposite side `a` in a triangle with sides `a, b, c` (law of cosines).
    ///
    /// Uses `(c_λ(a) - c_λ(b)c_λ(c))/λ = vers_λ(b) + vers_λ(c) - vers_λ(a) - λ vers_λ(b) vers_λ(c)`,
    /// which is regular at `λ = 0` and reduces to the Euclidean law there.
    pub fn cosine_law_angle(&self, a: f64, b: f64, c: f64) -> Result<f64> {
        let lam = self.lambda;
        let limit = lam.conjugate_distance();
        for side in [a, b, c] {
            if !(side > 0.0) || side >= limit {
                return Err(GeomError::Domain(format!("side length {side} out of range")));
            }
        }
        let (va, vb, vc) = (gvers(lam, a), gvers(lam, b), gvers(lam, c));
        let num = vb + vc - va - lam.value() * vb * vc;
        let cos = num / (gsin(lam, b) * gsin(lam, c));
        if cos.abs() > 1.0 + tolerance::ACOS_CLAMP || cos.is_nan() {
            return Err(GeomError::NotATriangle(cos));
        }
        Ok(cos.clamp(-1.0, 1.0).acos())
    }

    pub fn midpoint(&self, p: &Point, q: &Point) -> Result<Point> {
        let v = self.log_map(p, q)?;
        Ok(self.exp_map(&v.scaled(0.5)))
    }

    /// Geodesic circle through three points.
    ///
    /// On the sphere two antipodal centers exist; the one with radius at most
    /// `π/(2√λ)` is returned. On the hyperboloid the three points may lie on a
    /// horocycle or an equidistant curve instead, which is reported as
    /// [`GeomError::NoCircumcircle`].
    pub fn circumcircle3(&self, p: &Point, q: &Point, r: &Point) -> Result<Circle> {
        let scale = self.distance(p, q).max(self.distance(q, r)).max(self.distance(p, r));
        if self.distance(p, q).min(self.distance(q, r)).min(self.distance(p, r))
            <= 1e-14 * scale.max(1e-300)
        {
            return Err(GeomError::Degenerate("coincident points".into()));
        }
        let l = self.l();
        if l > 0.0 {
            let cut = self.lambda.conjugate_distance() - tolerance::ACOS_CLAMP;
            if [(p, q), (q, r), (p, r)]
                .iter()
                .any(|(a, b)| self.distance(a, b) > cut)
            {
                return Err(GeomError::Antipodal);
            }
        }
        if l == 0.0 {
            let (a, b, c) = (p.0, q.0, r.0);
            let ab = b - a;
            let ac = c - a;
            let d = 2.0 * (ab.x * ac.y - ab.y * ac.x);
            if d.abs() <= 1e-14 * ab.norm() * ac.norm() {
                return Err(GeomError::Collinear);
            }
            let ab2 = ab.norm_squared();
            let ac2 = ac.norm_squared();
            let ux = (ac.y * ab2 - ab.y * ac2) / d;
            let uy = (ab.x * ac2 - ac.x * ab2) / d;
            let center = Point(Vec3::new(a.x + ux, a.y + uy, 0.0));
            let radius = (ux * ux + uy * uy).sqrt();
            return Ok(Circle { center, radius });
        }
        let d1 = p.0 - q.0;
        let d2 = q.0 - r.0;
        let m = d1.cross(&d2);
        if m.norm() <= 1e-14 * d1.norm() * d2.norm() {
            return Err(GeomError::Collinear);
        }
        let center = if l > 0.0 {
            let mut c = m / (m.norm() * l.sqrt());
            if c.dot(&p.0) < 0.0 {
                c = -c;
            }
            self.renormalize(c)
        } else {
            let dual = Vec3::new(-m.x, m.y, m.z);
            let beta = self.inner(&dual, &dual);
            if beta >= -1e-14 * dual.norm_squared() {
                return Err(GeomError::NoCircumcircle);
            }
            let mut c = dual * ((1.0 / l) / beta).sqrt();
            if c.x < 0.0 {
                c = -c;
            }
            self.renormalize(c)
        };
        let radius = (self.distance(&center, p) + self.distance(&center, q) + self.distance(&center, r)) / 3.0;
        Ok(Circle { center, radius })
    }

    /// Signed curvature of the generalized circle through `p, q, r`, positive
    /// when the path `p → q → r` turns left.
    ///
    /// Works from the plane through the three embedded points, so it also
    /// covers horocycles and equidistant curves on the hyperboloid. Where a
    /// circumcircle exists its value is `±co_λ(radius)`.
    pub fn three_point_curvature(&self, p: &Point, q: &Point, r: &Point) -> Result<f64> {
        let l = self.l();
        if l == 0.0 {
            let a = q.0 - p.0;
            let b = r.0 - q.0;
            let c = r.0 - p.0;
            let denom = a.norm() * b.norm() * c.norm();
            if denom == 0.0 {
                return Err(GeomError::Degenerate("coincident points".into()));
            }
            return Ok(2.0 * (a.x * b.y - a.y * b.x) / denom);
        }
        let m = (p.0 - q.0).cross(&(q.0 - r.0));
        if m.norm() == 0.0 {
            return Err(GeomError::Collinear);
        }
        let dual = if l > 0.0 { m } else { Vec3::new(-m.x, m.y, m.z) };
        let alpha = m.dot(&q.0);
        let beta = self.inner(&dual, &dual);
        let disc = beta - l * alpha * alpha;
        if !(disc > 0.0) {
            return Err(GeomError::Degenerate("three-point plane misses the model".into()));
        }
        let k = l * alpha / disc.sqrt();
        let side = q.0.dot(&(r.0 - p.0).cross(&dual));
        Ok(if side >= 0.0 { k } else { -k })
    }

    pub fn polar_point(&self, frame: &PolarFrame, r: f64, phi: f64) -> Point {
        let u = frame.e1 * phi.cos() + frame.e2 * phi.sin();
        if self.lambda.is_flat() {
            return Point(frame.center.0 + u * r);
        }
        // |u| = 1 by construction; re-measuring it (as exp_map does) cancels
        // badly for frames far from the base point of the hyperboloid
        self.renormalize(frame.center.0 * gcos(self.lambda, r) + u * gsin(self.lambda, r))
    }

    /// Velocity of `φ ↦ polar_point(frame, r(φ), φ)` given `r` and `r′`.
    pub fn polar_velocity(&self, frame: &PolarFrame, r: f64, dr: f64, phi: f64) -> Vec3 {
        let u = frame.e1 * phi.cos() + frame.e2 * phi.sin();
        let du = frame.e2 * phi.cos() - frame.e1 * phi.sin();
        if self.lambda.is_flat() {
            return u * dr + du * r;
        }
        let s = gsin(self.lambda, r);
        let c = gcos(self.lambda, r);
        (u * c - frame.center.0 * (self.l() * s)) * dr + du * s
    }

    /// Frame at `center` with first axis along `e1_dir` (projected and normalized).
    pub fn frame(&self, center: &Point, e1_dir: Vec3) -> Result<PolarFrame> {
        let t = self.tangent(center, e1_dir);
        let n = self.norm(&t.dir);
        if !(n > 0.0) {
            return Err(GeomError::Degenerate("zero frame direction".into()));
        }
        let e1 = t.dir / n;
        let e2 = self.rot90(center, &e1);
        Ok(PolarFrame {
            center: *center,
            e1,
            e2,
        })
    }

    /// Frame at `exp(base, t·dir)` whose first axis points back toward `base`.
    ///
    /// `dir` must be a unit tangent at `base`. The axes come from the geodesic's
    /// velocity and the transported normal instead of a projection at the far
    /// end, which loses about `cosh²` of the distance from the model's base
    /// point on the hyperboloid.
    pub fn frame_at_distance(&self, base: &Point, dir: &Vec3, t: f64) -> PolarFrame {
        let normal = self.rot90(base, dir);
        if self.lambda.is_flat() {
            return PolarFrame {
                center: Point(base.0 + *dir * t),
                e1: -*dir,
                e2: -normal,
            };
        }
        let (s, c) = (gsin(self.lambda, t), gcos(self.lambda, t));
        PolarFrame {
            center: self.renormalize(base.0 * c + *dir * s),
            e1: base.0 * (self.l() * s) - *dir * c,
            e2: -normal,
        }
    }

    /// Parallel-transport-free rotation of a tangent vector by angle `a`.
    pub fn rotate(&self, base: &Point, v: &Vec3, a: f64) -> Vec3 {
        *v * a.cos() + self.rot90(base, v) * a.sin()
    }

    /// Curvature of a geodesic circle of radius `r`.
    pub fn circle_curvature(&self, r: f64) -> Result<f64> {
        gcot(self.lambda, r)
    }

    /// True for `λ > 0` radii inside the hemisphere regime.
    pub fn within_quarter(&self, r: f64) -> bool {
        r < self.lambda.quarter_distance()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

    fn sf(l: f64) -> SpaceForm {
        SpaceForm::new(l).unwrap()
    }

    #[test]
    fn far_frames_point_back_to_their_origin() {
        for l in [-1.0, -0.25, 0.0, 1.0] {
            let m = sf(l);
            let a = m.polar_point(&m.canonical_frame(), 0.2, 0.7);
            let v = m.rot90(&a, &m.log_map(&a, &m.base_point()).unwrap().dir);
            let v = v / m.norm(&v);
            let t = if l > 0.0 { 1.3 } else { 6.0 };
            let fr = m.frame_at_distance(&a, &v, t);
            // Minkowski lengths of far vectors are only accurate to ε·|v|²
            let scale = 1e-15 * (1.0 + fr.e1.norm_squared());
            assert!((m.inner(&fr.e1, &fr.e1) - 1.0).abs() < scale);
            assert!((m.inner(&fr.e2, &fr.e2) - 1.0).abs() < 1e-12);
            assert!(m.inner(&fr.e1, &fr.e2).abs() < scale);
            if l != 0.0 {
                assert!(m.inner(&fr.e1, fr.center.vec()).abs() < scale * fr.center.vec().norm());
            }
            assert!((m.distance(&a, &fr.center) - t).abs() < 1e-12);
            // the exp-map route lands ~1e-7 away at t = 6 on the hyperboloid
            assert!(m.distance(&m.polar_point(&fr, t, 0.0), &a) < 1e-10, "lambda {l}");
            let back = m.log_map(&fr.center, &a).unwrap().dir;
            assert!(m.orientation(&fr.center, &a, &m.polar_point(&fr, t, 0.01)) > 0.0);
            assert!((m.inner(&back, &fr.e1) / t - 1.0).abs() < 1e-6);
        }
    }

    #[test]
    fn distance_examples() {
        let s = sf(1.0);
        let p = s.point(&[1.0, 0.0, 0.0]).unwrap();
        let q = s.point(&[0.0, 1.0, 0.0]).unwrap();
        assert!((s.distance(&p, &q) - FRAC_PI_2).abs() < 1e-15);

        let f = sf(0.0);
        let d = f.distance(&f.point(&[0.0, 0.0]).unwrap(), &f.point(&[3.0, 4.0]).unwrap());
        assert_eq!(d, 5.0);

        let h = sf(-1.0);
        let p = h.point(&[1.0, 0.0, 0.0]).unwrap();
        let q = h.point(&[1f64.cosh(), 1f64.sinh(), 0.0]).unwrap();
        assert!((h.distance(&p, &q) - 1.0).abs() < 1e-14);
    }

    #[test]
    fn point_validation() {
        let s = sf(4.0);
        assert!(s.point(&[0.5, 0.0, 0.0]).is_ok());
        assert!(s.point(&[1.0, 0.0, 0.0]).is_err());
        assert!(s.point(&[0.5, 0.0]).is_err());
        let h = sf(-1.0);
        assert!(matches!(
            h.point(&[-1.0, 0.0, 0.0]),
            Err(GeomError::InvalidPoint(_))
        ));
        let f = sf(0.0);
        assert!(f.point(&[f64::NAN, 0.0]).is_err());
    }

    #[test]
    fn exp_map_examples() {
        let h = sf(-1.0);
        let p = h.base_point();
        assert_eq!(h.exp_map(&TangentVector::zero(p)), p);
        let q = h.exp_map(&TangentVector {
            base: p,
            dir: Vec3::new(0.0, 1.0, 0.0),
        });
        assert!((q.vec() - Vec3::new(1f64.cosh(), 1f64.sinh(), 0.0)).norm() < 1e-14);
    }

    #[test]
    fn log_map_examples() {
        let f = sf(0.0);
        let o = f.point(&[0.0, 0.0]).unwrap();
        let v = f.log_map(&o, &f.point(&[3.0, 4.0]).unwrap()).unwrap();
        assert!((v.dir - Vec3::new(3.0, 4.0, 0.0)).norm() < 1e-15);
        assert_eq!(f.log_map(&o, &o).unwrap().dir, Vec3::zeros());

        let s = sf(1.0);
        let p = s.point(&[1.0, 0.0, 0.0]).unwrap();
        let a = s.point(&[-1.0, 0.0, 0.0]).unwrap();
        assert_eq!(s.log_map(&p, &a), Err(GeomError::Antipodal));
    }

    #[test]
    fn angle_examples() {
        let f = sf(0.0);
        let q = f.point(&[0.0, 0.0]).unwrap();
        let p = f.point(&[1.0, 0.0]).unwrap();
        let r = f.point(&[0.0, 1.0]).unwrap();
        let m = f.point(&[-1.0, 0.0]).unwrap();
        assert!((f.angle_at(&q, &p, &r).unwrap() - FRAC_PI_2).abs() < 1e-15);
        assert!((f.angle_at(&q, &p, &m).unwrap() - PI).abs() < 1e-15);
        assert!(f.angle_at(&q, &q, &m).is_err());
    }

    #[test]
    fn cosine_law_examples() {
        assert!((sf(0.0).cosine_law_angle(1.3, 1.3, 1.3).unwrap() - FRAC_PI_3).abs() < 1e-15);
        let s = sf(1.0);
        assert!((s.cosine_law_angle(FRAC_PI_2, FRAC_PI_2, FRAC_PI_2).unwrap() - FRAC_PI_2).abs() < 1e-15);
        let h = sf(-1.0);
        let a = h.cosine_law_angle(1.0, 1.0, 1.0).unwrap();
        let ch = 1f64.cosh();
        assert!((a.cos() - ch / (ch + 1.0)).abs() < 1e-14);
        assert!((a.cos() - 0.606_776_133_5).abs() < 1e-9);
        // the same angle measured on an explicit equilateral triangle
        let frame = h.canonical_frame();
        let b = h.polar_point(&frame, 1.0, 0.0);
        let c = h.polar_point(&frame, 1.0, a);
        assert!((h.distance(&b, &c) - 1.0).abs() < 1e-12);
        assert!((h.angle_at(&frame.center, &b, &c).unwrap() - a).abs() < 1e-12);
    }

    #[test]
    fn cosine_law_rejects_non_triangles() {
        assert!(matches!(
            sf(0.0).cosine_law_angle(3.0, 1.0, 1.0),
            Err(GeomError::NotATriangle(_))
        ));
        assert!(sf(1.0).cosine_law_angle(4.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn midpoint_examples() {
        let f = sf(0.0);
        let m = f
            .midpoint(&f.point(&[0.0, 0.0]).unwrap(), &f.point(&[2.0, 0.0]).unwrap())
            .unwrap();
        assert!((m.vec() - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        let h = sf(-1.0);
        let p = h.base_point();
        assert_eq!(h.midpoint(&p, &p).unwrap(), p);
    }

    #[test]
    fn circumcircle_examples() {
        let f = sf(0.0);
        let c = f
            .circumcircle3(
                &f.point(&[0.0, 0.0]).unwrap(),
                &f.point(&[2.0, 0.0]).unwrap(),
                &f.point(&[1.0, 1.0]).unwrap(),
            )
            .unwrap();
        assert!((c.center.vec() - Vec3::new(1.0, 0.0, 0.0)).norm() < 1e-15);
        assert!((c.radius - 1.0).abs() < 1e-15);

        let s = 1.7;
        let c = f
            .circumcircle3(
                &f.point(&[0.0, 0.0]).unwrap(),
                &f.point(&[s, 0.0]).unwrap(),
                &f.point(&[s / 2.0, s * 3f64.sqrt() / 2.0]).unwrap(),
            )
            .unwrap();
        assert!((c.radius - s / 3f64.sqrt()).abs() < 1e-14);

        assert_eq!(
            f.circumcircle3(
                &f.point(&[0.0, 0.0]).unwrap(),
                &f.point(&[1.0, 1.0]).unwrap(),
                &f.point(&[2.0, 2.0]).unwrap(),
            ),
            Err(GeomError::Collinear)
        );
    }

    #[test]
    fn hyperbolic_points_on_a_geodesic_have_no_circumcircle() {
        let h = sf(-1.0);
        let frame = h.canonical_frame();
        let pts: Vec<_> = [-1.0, 0.2, 1.5]
            .iter()
            .map(|&t| h.polar_point(&frame, f64::abs(t), if t < 0.0 { PI } else { 0.0 }))
            .collect();
        let res = h.circumcircle3(&pts[0], &pts[1], &pts[2]);
        assert!(matches!(res, Err(GeomError::NoCircumcircle) | Err(GeomError::Collinear)));
    }

    #[test]
    fn polar_point_examples() {
        let f = sf(0.0);
        let frame = f.canonical_frame();
        assert_eq!(f.polar_point(&frame, 0.0, 1.0), frame.center);
        let p = f.polar_point(&frame, 2.0, FRAC_PI_2);
        assert!((p.vec() - Vec3::new(0.0, 2.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn canonical_frame_is_counterclockwise() {
        for l in [-1.0, 0.0, 1.0] {
            let s = sf(l);
            let fr = s.canonical_frame();
            let a = s.polar_point(&fr, 0.3, 0.0);
            let b = s.polar_point(&fr, 0.3, 2.0);
            assert!(s.orientation(&fr.center, &a, &b) > 0.0, "lambda {l}");
            assert!((s.rot90(&fr.center, &fr.e1) - fr.e2).norm() < 1e-15);
        }
    }

    #[test]
    fn three_point_curvature_of_circles() {
        for l in [-1.0, 0.0, 1.0] {
            let s = sf(l);
            let fr = s.canonical_frame();
            let r = 0.8;
            let pts: Vec<_> = [0.1, 0.5, 0.9].iter().map(|&a| s.polar_point(&fr, r, a)).collect();
            let k = s.three_point_curvature(&pts[0], &pts[1], &pts[2]).unwrap();
            let expected = s.circle_curvature(r).unwrap();
            assert!((k - expected).abs() < 1e-12, "lambda {l}: {k} vs {expected}");
            // reversed traversal flips the sign
            let k2 = s.three_point_curvature(&pts[2], &pts[1], &pts[0]).unwrap();
            assert!((k2 + expected).abs() < 1e-12);
        }
    }

    #[test]
    fn three_point_curvature_of_horocycle() {
        // horocycle through the base point: curvature sqrt(|lambda|)
        let h = sf(-1.0);
        // points (1 + t²/2, t, t²/2) lie on a horocycle of the unit hyperboloid
        let pts: Vec<_> = [-0.4, 0.1, 0.7]
            .iter()
            .map(|&t: &f64| h.point(&[1.0 + t * t / 2.0, t, t * t / 2.0]).unwrap())
            .collect();
        let k = h.three_point_curvature(&pts[0], &pts[1], &pts[2]).unwrap();
        assert!((k.abs() - 1.0).abs() < 1e-12, "{k}");
    }
}

#[cfg(test)]
mod proptests {
    use super::*;
    use proptest::prelude::*;
    use std::f64::consts::{PI, TAU};

    fn lambda() -> impl Strategy<Value = f64> {
        prop_oneof![Just(-1.0), Just(0.0), Just(1.0), -2.0..2.0f64]
    }

    /// Point at polar coordinates about the base point, inside radius 1.
    fn polar() -> impl Strategy<Value = (f64, f64)> {
        (0.0..1.0f64, 0.0..TAU)
    }

    fn at(sf: &SpaceForm, (r, phi): (f64, f64)) -> Point {
        sf.polar_point(&sf.canonical_frame(), r, phi)
    }

    proptest! {
        #[test]
        fn polar_points_lie_on_the_model(l in lambda(), p in polar()) {
            let sf = SpaceForm::new(l).unwrap();
            let x = at(&sf, p);
            prop_assert!(sf.point(&sf.coords(&x)).is_ok());
            prop_assert!((sf.distance(&sf.base_point(), &x) - p.0).abs() < 1e-12);
        }

        #[test]
        fn distance_is_a_metric(l in lambda(), a in polar(), b in polar(), c in polar()) {
            let sf = SpaceForm::new(l).unwrap();
            let (a, b, c) = (at(&sf, a), at(&sf, b), at(&sf, c));
            let (ab, ba) = (sf.distance(&a, &b), sf.distance(&b, &a));
            prop_assert!((ab - ba).abs() < 1e-13);
            prop_assert!(sf.distance(&a, &c) <= ab + sf.distance(&b, &c) + 1e-12);
            prop_assert!(sf.distance(&a, &a) < 1e-7);
        }

        #[test]
        fn exp_inverts_log(l in lambda(), a in polar(), b in polar()) {
            let sf = SpaceForm::new(l).unwrap();
            let (a, b) = (at(&sf, a), at(&sf, b));
            let v = sf.log_map(&a, &b).unwrap();
            prop_assert!((sf.norm(&v.dir) - sf.distance(&a, &b)).abs() < 1e-12);
            prop_assert!(sf.distance(&sf.exp_map(&v), &b) < 1e-10);
        }

        #[test]
        fn rotation_preserves_length_and_turns_left(l in lambda(), a in polar(), b in polar(), ang in 0.1..3.0f64) {
            let sf = SpaceForm::new(l).unwrap();
            let (a, b) = (at(&sf, a), at(&sf, b));
            prop_assume!(sf.distance(&a, &b) > 1e-3);
            let v = sf.log_map(&a, &b).unwrap().dir;
            let w = sf.rotate(&a, &v, ang);
            prop_assert!((sf.norm(&w) - sf.norm(&v)).abs() < 1e-12 * (1.0 + sf.norm(&v)));
            let s = sf.area_form(&a, &v, &w) / (sf.norm(&v) * sf.norm(&w));
            prop_assert!((s - ang.sin()).abs() < 1e-9);
        }

        #[test]
        fn orientation_is_antisymmetric(l in lambda(), a in polar(), b in polar(), c in polar()) {
            let sf = SpaceForm::new(l).unwrap();
            let (a, b, c) = (at(&sf, a), at(&sf, b), at(&sf, c));
            prop_assert!((sf.orientation(&a, &b, &c) + sf.orientation(&a, &c, &b)).abs() < 1e-12);
        }

        #[test]
        fn circumcircle_is_equidistant(l in lambda(), r in 0.1..1.0f64, phis in prop::array::uniform3(0.0..TAU)) {
            let sf = SpaceForm::new(l).unwrap();
            let center = at(&sf, (0.3, 1.0));
            let fr = sf.frame(&center, sf.tangent(&center, Vec3::new(0.3, 0.2, 0.9)).dir).unwrap();
            let pts: Vec<Point> = phis.iter().map(|&p| sf.polar_point(&fr, r, p)).collect();
            let min_sep = (0..3).map(|i| sf.distance(&pts[i], &pts[(i + 1) % 3])).fold(f64::INFINITY, f64::min);
            prop_assume!(min_sep > 1e-2);
            let c = sf.circumcircle3(&pts[0], &pts[1], &pts[2]).unwrap();
            prop_assert!((c.radius - r).abs() < 1e-8);
            prop_assert!(sf.distance(&c.center, &center) < 1e-7);
            let k = sf.three_point_curvature(&pts[0], &pts[1], &pts[2]).unwrap();
            prop_assert!((k.abs() - gcot(sf.lambda(), r).unwrap()).abs() < 1e-7 * (1.0 + k.abs()));
        }

        #[test]
        fn cosine_law_matches_measured_angle(l in lambda(), b in polar(), c in polar()) {
            let sf = SpaceForm::new(l).unwrap();
            let a0 = sf.base_point();
            let (pb, pc) = (at(&sf, b), at(&sf, c));
            let (db, dc, da) = (sf.distance(&a0, &pb), sf.distance(&a0, &pc), sf.distance(&pb, &pc));
            prop_assume!(db > 1e-2 && dc > 1e-2 && da > 1e-2);
            let measured = sf.angle_at(&a0, &pb, &pc).unwrap();
            prop_assume!(measured > 1e-3 && measured < PI - 1e-3);
            let law = sf.cosine_law_angle(da, db, dc).unwrap();
            prop_assert!((law - measured).abs() < 1e-7);
        }
    }
}
