#![allow(dead_code)]

use std::f64::consts::PI;

use knotdraw::{CubicSegment, MinObj, Point2};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn p(x: f64, y: f64) -> Point2 {
    Point2::new(x, y)
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_point(r: &mut ChaCha8Rng, lo: f64, hi: f64) -> Point2 {
    p(r.gen_range(lo..hi), r.gen_range(lo..hi))
}

pub fn random_segment(r: &mut ChaCha8Rng) -> CubicSegment {
    CubicSegment::new(
        random_point(r, -1.0, 1.0),
        random_point(r, -1.0, 1.0),
        random_point(r, -1.0, 1.0),
        random_point(r, -1.0, 1.0),
    )
}

/// Circle of the given radius as `n` cubic arcs with the standard handle length.
pub fn circle(n: usize, radius: f64) -> MinObj {
    let k = 4.0 / 3.0 * (PI / (2.0 * n as f64)).tan();
    let mut nodes = Vec::new();
    let mut handles = Vec::new();
    for i in 0..n {
        let a = 2.0 * PI * i as f64 / n as f64;
        let node = p(radius * a.cos(), radius * a.sin());
        let tangent = p(-a.sin(), a.cos());
        nodes.push(node);
        handles.push(node + tangent * (k * radius));
    }
    MinObj::new(nodes, handles).unwrap()
}

/// Dense polyline through a segment, `count` intervals.
pub fn polyline(s: &CubicSegment, count: usize) -> Vec<Point2> {
    (0..=count)
        .map(|i| s.eval(i as f64 / count as f64))
        .collect()
}

/// The standard 4-arc cubic approximation of the unit circle.
pub fn unit_circle_4() -> MinObj {
    const K: f64 = 0.551_915_024_493_510_6;
    let nodes = vec![p(1.0, 0.0), p(0.0, 1.0), p(-1.0, 0.0), p(0.0, -1.0)];
    let handles = vec![p(1.0, K), p(-K, 1.0), p(-1.0, -K), p(K, -1.0)];
    MinObj::new(nodes, handles).unwrap()
}
