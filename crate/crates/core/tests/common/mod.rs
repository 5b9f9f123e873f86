#![allow(dead_code)]

use isonet::Quaternion;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn quat(rng: &mut impl Rng, scale: f64) -> Quaternion {
    Quaternion::new(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn imag(rng: &mut impl Rng, scale: f64) -> Quaternion {
    Quaternion::imag(
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
        rng.random_range(-scale..scale),
    )
}

pub fn unit(rng: &mut impl Rng) -> Quaternion {
    loop {
        let q = quat(rng, 1.0);
        let n = q.norm();
        if n > 0.1 {
            return q / n;
        }
    }
}

/// Orthonormal pair spanning a random 2-plane of R^4.
pub fn orthonormal_pair(rng: &mut impl Rng) -> (Quaternion, Quaternion) {
    let e1 = unit(rng);
    loop {
        let v = quat(rng, 1.0);
        let w = v - v.dot(e1) * e1;
        if w.norm() > 0.1 {
            return (e1, w / w.norm());
        }
    }
}

/// A random circle in R^4 as (center, e1, e2, radius).
pub struct Circle {
    pub center: Quaternion,
    pub e1: Quaternion,
    pub e2: Quaternion,
    pub radius: f64,
}

impl Circle {
    pub fn random(rng: &mut impl Rng) -> Self {
        let (e1, e2) = orthonormal_pair(rng);
        Circle {
            center: quat(rng, 2.0),
            e1,
            e2,
            radius: rng.random_range(0.5..3.0),
        }
    }

    pub fn at(&self, t: f64) -> Quaternion {
        self.center + self.radius * (t.cos() * self.e1 + t.sin() * self.e2)
    }
}

/// Four points on a random circle, in circular order, reasonably spread.
pub fn concircular_quad(rng: &mut impl Rng) -> [Quaternion; 4] {
    let c = Circle::random(rng);
    let t0 = rng.random_range(0.0..std::f64::consts::TAU);
    let mut t = t0;
    let mut out = [Quaternion::ZERO; 4];
    for slot in &mut out {
        *slot = c.at(t);
        t += rng.random_range(0.6..1.9);
    }
    out
}

pub fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs().max(1.0)
}
