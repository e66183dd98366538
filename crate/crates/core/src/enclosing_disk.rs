//! Smallest enclosing geodesic disk of a finite point set.
//!
//! [`min_disk`] is the move-to-front variant of Welzl's randomized
//! incremental algorithm, with the two- and three-point bases realized by
//! geodesic midpoints and [`SpaceForm::circumcircle3`]. The shuffle uses a
//! fixed seed derived from the input size so results are reproducible.
//! [`min_disk_oracle`] enumerates every pair and triple and is kept as an
//! independent reference for tests.
//!
//! On the sphere the problem is only well posed for sets inside an open
//! hemisphere; anything else is rejected with
//! [`GeomError::NotInHemisphere`].

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GeomError, Result};
use crate::geom::{Point, SpaceForm};
use crate::tolerance;

/// Center and geodesic radius of a disk.
#[derive(Debug, Clone, PartialEq)]
pub struct GeodesicDisk {
    pub center: Point,
    pub radius: f64,
    /// Indices of the input points that determine the disk (1 to 3 of them).
    pub support: Vec<usize>,
}

const SHUFFLE_SALT: u64 = 0x5eed_d15c;

/// Containment slack used inside the incremental solver.
fn solver_slack(radius: f64) -> f64 {
    1e-12 * (1.0 + radius)
}

pub fn disk_contains(sf: &SpaceForm, disk: &GeodesicDisk, p: &Point, tol: f64) -> bool {
    sf.distance(&disk.center, p) <= disk.radius + tol
}

fn disk1(points: &[Point], i: usize) -> GeodesicDisk {
    GeodesicDisk {
        center: points[i],
        radius: 0.0,
        support: vec![i],
    }
}

fn disk2(sf: &SpaceForm, points: &[Point], i: usize, j: usize) -> Result<GeodesicDisk> {
    let center = sf.midpoint(&points[i], &points[j])?;
    let radius = 0.5 * sf.distance(&points[i], &points[j]);
    Ok(GeodesicDisk {
        center,
        radius,
        support: vec![i, j],
    })
}

fn disk3(sf: &SpaceForm, points: &[Point], i: usize, j: usize, k: usize) -> Result<GeodesicDisk> {
    let c = sf.circumcircle3(&points[i], &points[j], &points[k])?;
    Ok(GeodesicDisk {
        center: c.center,
        radius: c.radius,
        support: vec![i, j, k],
    })
}

/// Cheap extrinsic test: all points on the positive side of their centroid direction.
fn centroid_hemisphere(points: &[Point]) -> bool {
    let s = points.iter().fold(nalgebra::Vector3::zeros(), |acc, p| acc + p.vec());
    let n = s.norm();
    n > 0.0 && points.iter().all(|p| p.vec().dot(&s) > 1e-12 * n * p.vec().norm())
}

fn welzl(sf: &SpaceForm, points: &[Point]) -> Result<GeodesicDisk> {
    let n = points.len();
    let mut order: Vec<usize> = (0..n).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SHUFFLE_SALT ^ n as u64);
    order.shuffle(&mut rng);

    let outside = |d: &GeodesicDisk, idx: usize| {
        sf.distance(&d.center, &points[idx]) > d.radius + solver_slack(d.radius)
    };

    let mut disk = disk1(points, order[0]);
    for a in 1..n {
        let i = order[a];
        if !outside(&disk, i) {
            continue;
        }
        disk = disk1(points, i);
        for b in 0..a {
            let j = order[b];
            if !outside(&disk, j) {
                continue;
            }
            disk = disk2(sf, points, i, j)?;
            for c in 0..b {
                let k = order[c];
                if outside(&disk, k) {
                    disk = disk3(sf, points, i, j, k)?;
                }
            }
        }
    }
    Ok(disk)
}

fn certify_hemisphere(sf: &SpaceForm, disk: &GeodesicDisk) -> Result<()> {
    if sf.lambda().value() > 0.0
        && disk.radius >= sf.lambda().quarter_distance() - tolerance::CHECK
    {
        return Err(GeomError::NotInHemisphere);
    }
    Ok(())
}

/// Smallest geodesic disk containing every point.
pub fn min_disk(sf: &SpaceForm, points: &[Point]) -> Result<GeodesicDisk> {
    if points.is_empty() {
        return Err(GeomError::EmptyInput);
    }
    let spherical = sf.lambda().value() > 0.0;
    let precheck = !spherical || centroid_hemisphere(points);
    let disk = match welzl(sf, points) {
        Ok(d) => d,
        // outside a hemisphere the bases can hit antipodal pairs
        Err(_) if !precheck => return Err(GeomError::NotInHemisphere),
        Err(e) => return Err(e),
    };
    certify_hemisphere(sf, &disk)?;
    if !precheck
        && points
            .iter()
            .any(|p| !disk_contains(sf, &disk, p, tolerance::CHECK))
    {
        return Err(GeomError::NotInHemisphere);
    }
    Ok(disk)
}

/// Brute-force reference: the smallest covering disk among all pair
/// (diametral) and triple (circumscribed) candidates. `O(n⁴)`.
///
/// Ties within `1e-12` in radius are broken by the lexicographically
/// smallest center coordinates.
pub fn min_disk_oracle(sf: &SpaceForm, points: &[Point]) -> Result<GeodesicDisk> {
    let n = points.len();
    if n == 0 {
        return Err(GeomError::EmptyInput);
    }
    if n == 1 {
        return Ok(disk1(points, 0));
    }
    let covers = |d: &GeodesicDisk| points.iter().all(|p| disk_contains(sf, d, p, tolerance::CHECK));
    let mut best: Option<GeodesicDisk> = None;
    let mut consider = |cand: GeodesicDisk| {
        if sf.lambda().value() > 0.0 && cand.radius >= sf.lambda().quarter_distance() {
            return;
        }
        if !covers(&cand) {
            return;
        }
        let better = match &best {
            None => true,
            Some(b) => {
                if (cand.radius - b.radius).abs() <= 1e-12 {
                    lex_less(cand.center.vec().as_slice(), b.center.vec().as_slice())
                } else {
                    cand.radius < b.radius
                }
            }
        };
        if better {
            best = Some(cand);
        }
    };
    for i in 0..n {
        for j in i + 1..n {
            if let Ok(d) = disk2(sf, points, i, j) {
                consider(d);
            }
            for k in j + 1..n {
                if let Ok(d) = disk3(sf, points, i, j, k) {
                    consider(d);
                }
            }
        }
    }
    match best {
        Some(d) => Ok(d),
        None if sf.lambda().value() > 0.0 => Err(GeomError::NotInHemisphere),
        // every point coincides
        None => Ok(disk1(points, 0)),
    }
}

fn lex_less(a: &[f64], b: &[f64]) -> bool {
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return true;
        }
        if x > y {
            return false;
        }
    }
    false
}

/// Indices of the points within `tol` of the disk boundary.
pub fn boundary_points(sf: &SpaceForm, disk: &GeodesicDisk, points: &[Point], tol: f64) -> Vec<usize> {
    points
        .iter()
        .enumerate()
        .filter(|(_, p)| (sf.distance(&disk.center, p) - disk.radius).abs() <= tol)
        .map(|(i, _)| i)
        .collect()
}
