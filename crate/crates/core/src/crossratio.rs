//! Cross ratio of four points in R^4.
//!
//! `DV(Q1,Q2,Q3,Q4) = Re Q + i |Im Q|` with
//! `Q = (Q1-Q2)(Q2-Q3)^-1 (Q3-Q4)(Q4-Q1)^-1`. The value is a complex number
//! with non-negative imaginary part; it is real exactly for concircular (or
//! collinear) quadruples and is invariant under Möbius transformations.

use std::collections::VecDeque;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quat::Quaternion;

/// Default tolerance for comparing cross ratio values.
pub const VALUE_TOL: f64 = 1e-10;

/// A cross ratio, normalized to `im >= 0`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CrossRatioValue {
    pub re: f64,
    pub im: f64,
}

impl CrossRatioValue {
    pub fn new(re: f64, im: f64) -> Self {
        Self { re, im: im.abs() }
    }

    pub fn real(re: f64) -> Self {
        Self { re, im: 0.0 }
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    fn from_complex(z: Complex64) -> Self {
        Self::new(z.re, z.im)
    }

    pub fn abs(self) -> f64 {
        self.re.hypot(self.im)
    }

    /// Distance between two values.
    pub fn distance(self, other: Self) -> f64 {
        (self.re - other.re).hypot(self.im - other.im)
    }

    /// Componentwise comparison with tolerance scaled by magnitude.
    pub fn approx_eq(self, other: Self, tol: f64) -> bool {
        let scale = 1f64.max(self.abs()).max(other.abs());
        (self.re - other.re).abs() <= tol * scale && (self.im - other.im).abs() <= tol * scale
    }
}

/// The quaternion `(Q1-Q2)(Q2-Q3)^-1 (Q3-Q4)(Q4-Q1)^-1`.
pub fn quad_ratio(q1: Quaternion, q2: Quaternion, q3: Quaternion, q4: Quaternion) -> Result<Quaternion> {
    let d23 = q2 - q3;
    let d41 = q4 - q1;
    if d23.norm_sqr() == 0.0 {
        return Err(Error::DegenerateQuadrilateral { pair: (2, 3) });
    }
    if d41.norm_sqr() == 0.0 {
        return Err(Error::DegenerateQuadrilateral { pair: (4, 1) });
    }
    Ok((q1 - q2) * d23.inv()? * (q3 - q4) * d41.inv()?)
}

/// Cross ratio `DV(Q1,Q2,Q3,Q4)`.
pub fn cross_ratio(q1: Quaternion, q2: Quaternion, q3: Quaternion, q4: Quaternion) -> Result<CrossRatioValue> {
    let q = quad_ratio(q1, q2, q3, q4)?;
    Ok(CrossRatioValue::new(q.re(), q.im().norm()))
}

/// Cross ratio of the quadruple `q` in its given order.
pub fn cross_ratio_of(q: &[Quaternion; 4]) -> Result<CrossRatioValue> {
    cross_ratio(q[0], q[1], q[2], q[3])
}

/// Pairwise distances `l_ij = |Q_i - Q_j|` (0-based indices).
pub fn distance_matrix(q: &[Quaternion; 4]) -> [[f64; 4]; 4] {
    let mut l = [[0.0; 4]; 4];
    for i in 0..4 {
        for j in 0..4 {
            l[i][j] = q[i].distance(q[j]);
        }
    }
    l
}

/// `-det((l_ij²))` through its factorization
/// `(a+b+c)(-a+b+c)(a-b+c)(a+b-c)` with `a = l12 l34`, `b = l13 l24`,
/// `c = l14 l23`.
pub fn neg_det_squared_distances(l: &[[f64; 4]; 4]) -> f64 {
    let a = l[0][1] * l[2][3];
    let b = l[0][2] * l[1][3];
    let c = l[0][3] * l[1][2];
    (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
}

/// Cross ratio from the six mutual distances of the four points.
pub fn cross_ratio_from_distances(l: &[[f64; 4]; 4]) -> Result<CrossRatioValue> {
    let sq = |i: usize, j: usize| l[i][j] * l[i][j];
    if sq(0, 3) == 0.0 {
        return Err(Error::DegenerateQuadrilateral { pair: (4, 1) });
    }
    if sq(1, 2) == 0.0 {
        return Err(Error::DegenerateQuadrilateral { pair: (2, 3) });
    }
    let numerator = sq(0, 1) * sq(2, 3) + sq(0, 3) * sq(1, 2) - sq(0, 2) * sq(1, 3);
    let denominator = 2.0 * sq(0, 3) * sq(1, 2);
    let neg_det = neg_det_squared_distances(l);
    let scale = (0..4)
        .flat_map(|i| (0..4).map(move |j| (i, j)))
        .map(|(i, j)| sq(i, j))
        .fold(0.0, f64::max);
    if neg_det < -1e-10 * scale.powi(4) {
        return Err(Error::NonRealizable { neg_det });
    }
    Ok(CrossRatioValue::new(
        numerator / denominator,
        neg_det.max(0.0).sqrt() / denominator,
    ))
}

/// Concircularity (or collinearity) test: `Im DV <= tol * max(1, |DV|)`.
pub fn is_concircular(q1: Quaternion, q2: Quaternion, q3: Quaternion, q4: Quaternion, tol: f64) -> bool {
    match cross_ratio(q1, q2, q3, q4) {
        Ok(dv) => dv.im <= tol * 1f64.max(dv.abs()),
        Err(_) => false,
    }
}

/// Generators of the vertex permutations acting on the cross ratio.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
enum Generator {
    /// `(Q1,Q2,Q3,Q4) -> (Q4,Q1,Q2,Q3)`: `DV -> 1 / conj(DV)`.
    Cycle,
    /// `(Q1,Q2,Q3,Q4) -> (Q1,Q3,Q2,Q4)`: `DV -> 1 - conj(DV)`.
    Swap,
}

impl Generator {
    fn permutation(self) -> [usize; 4] {
        match self {
            Generator::Cycle => [3, 0, 1, 2],
            Generator::Swap => [0, 2, 1, 3],
        }
    }

    fn apply(self, z: Complex64) -> Complex64 {
        match self {
            Generator::Cycle => 1.0 / z.conj(),
            Generator::Swap => 1.0 - z.conj(),
        }
    }
}

/// All 24 orderings as words in the two generators, breadth first.
fn permutation_words() -> Vec<([usize; 4], Vec<Generator>)> {
    let mut seen = vec![([0, 1, 2, 3], Vec::new())];
    let mut queue = VecDeque::from([0usize]);
    while let Some(idx) = queue.pop_front() {
        let (perm, word) = seen[idx].clone();
        for g in [Generator::Cycle, Generator::Swap] {
            let r = g.permutation();
            let next = [perm[r[0]], perm[r[1]], perm[r[2]], perm[r[3]]];
            if seen.iter().all(|(p, _)| *p != next) {
                let mut w = word.clone();
                w.push(g);
                seen.push((next, w));
                queue.push_back(seen.len() - 1);
            }
        }
    }
    seen
}

fn check_orbit_poles(dv: CrossRatioValue) -> Result<()> {
    let z = dv.to_complex();
    if z.norm() <= VALUE_TOL || (z - 1.0).norm() <= VALUE_TOL {
        return Err(Error::DegenerateOrbit { re: dv.re, im: dv.im });
    }
    Ok(())
}

/// Cross ratio of every reordering `(Q_p[0], .., Q_p[3])` given `DV(Q1..Q4)`.
///
/// Entries are `(p, DV(Q_p))` with 0-based vertex indices in `p`.
pub fn permutation_table(dv: CrossRatioValue) -> Result<Vec<([usize; 4], CrossRatioValue)>> {
    check_orbit_poles(dv)?;
    Ok(permutation_words()
        .into_iter()
        .map(|(perm, word)| {
            let z = word.iter().fold(dv.to_complex(), |z, g| g.apply(z));
            (perm, CrossRatioValue::from_complex(z))
        })
        .collect())
}

/// The distinct values the cross ratio takes over all 24 vertex orders.
///
/// Generically six values; the harmonic value `-1` collapses to three.
pub fn identity_orbit(dv: CrossRatioValue) -> Result<Vec<CrossRatioValue>> {
    check_orbit_poles(dv)?;
    let z = dv.to_complex();
    let zc = z.conj();
    let candidates = [z, 1.0 / (1.0 - z), 1.0 - 1.0 / z, 1.0 - zc, 1.0 / zc, zc / (zc - 1.0)];
    let mut orbit: Vec<CrossRatioValue> = Vec::with_capacity(6);
    for c in candidates.map(CrossRatioValue::from_complex) {
        if !orbit.iter().any(|o| o.approx_eq(c, VALUE_TOL)) {
            orbit.push(c);
        }
    }
    Ok(orbit)
}
