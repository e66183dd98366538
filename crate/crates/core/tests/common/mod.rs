//! Seeded generators shared by the integration tests.
#![allow(dead_code)]

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use spaceform_core::{ConvexPolygon, Point, SpaceForm};

pub const LAMBDAS: [f64; 3] = [-1.0, 0.0, 1.0];

pub fn space(lambda: f64) -> SpaceForm {
    SpaceForm::new(lambda).unwrap()
}

/// Random convex polygon with `n ∈ [3, 12]` and a seed-dependent size.
pub fn fuzz_polygon(sf: SpaceForm, seed: u64) -> spaceform_core::Result<ConvexPolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_mul(0x9e37_79b9_7f4a_7c15));
    let n = rng.gen_range(3..=12);
    let r_max = if sf.lambda().value() > 0.0 {
        rng.gen_range(0.1..1.4)
    } else {
        rng.gen_range(0.1..2.0)
    };
    ConvexPolygon::random_convex(sf, n, seed, r_max)
}

/// Small random convex polygon (`r_max ≤ 0.3`), typically with large vertex curvature.
pub fn small_polygon(sf: SpaceForm, seed: u64) -> spaceform_core::Result<ConvexPolygon> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x51ab_1e00);
    let n = rng.gen_range(3..=12);
    let r_max = rng.gen_range(0.05..0.3);
    ConvexPolygon::random_convex(sf, n, seed, r_max)
}

/// `n` points scattered within `spread` of a random center.
pub fn scattered_points(sf: &SpaceForm, n: usize, seed: u64, spread: f64) -> Vec<Point> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fr = sf.canonical_frame();
    let center = sf.polar_point(&fr, rng.gen_range(0.0..0.5), rng.gen_range(0.0..std::f64::consts::TAU));
    let frame = sf.frame(&center, sf.tangent(&center, fr.e1).dir).unwrap();
    (0..n)
        .map(|_| {
            let r = spread * rng.gen::<f64>().sqrt();
            sf.polar_point(&frame, r, rng.gen_range(0.0..std::f64::consts::TAU))
        })
        .collect()
}
