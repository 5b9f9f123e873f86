//! Fourth-point solver, the hexahedron construction, 2-sphere fitting and
//! trapezoid classification.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::crossratio::{cross_ratio, cross_ratio_of};
use crate::error::{Error, Result};
use crate::quat::{dependent2, Quaternion};

/// Default geometric tolerance, relative to the configuration diameter.
pub const GEOM_TOL: f64 = 1e-8;

const COINCIDENCE_TOL: f64 = 1e-14;

/// Position of the unknown vertex in a quadruple.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Slot {
    First,
    Second,
    Third,
    Fourth,
}

impl Slot {
    pub fn from_position(position: usize) -> Option<Slot> {
        match position {
            1 => Some(Slot::First),
            2 => Some(Slot::Second),
            3 => Some(Slot::Third),
            4 => Some(Slot::Fourth),
            _ => None,
        }
    }
}

fn coincident(a: Quaternion, b: Quaternion, scale: f64) -> bool {
    a.distance(b) <= COINCIDENCE_TOL * scale
}

/// The point `Q4` with `Q(Q1,Q2,Q3,Q4) = ratio` for a real `ratio`.
///
/// Clearing denominators with `W = (Q1-Q2)(Q2-Q3)^-1` gives
/// `Q4 = (W + ratio)^-1 (W Q3 + ratio Q1)`. The result lies on the circle
/// through `Q1, Q2, Q3`.
pub fn solve_fourth_point(ratio: f64, q1: Quaternion, q2: Quaternion, q3: Quaternion) -> Result<Quaternion> {
    if ratio == 0.0 || !ratio.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let scale = q1.norm().max(q2.norm()).max(q3.norm()).max(1.0);
    if coincident(q1, q2, scale) {
        return Err(Error::DegenerateQuadrilateral { pair: (1, 2) });
    }
    if coincident(q2, q3, scale) {
        return Err(Error::DegenerateQuadrilateral { pair: (2, 3) });
    }
    if coincident(q1, q3, scale) {
        return Err(Error::DegenerateQuadrilateral { pair: (1, 3) });
    }
    let w = (q1 - q2) * (q2 - q3).inv()?;
    let s = w + ratio;
    if s.norm() <= 1e-12 * (w.norm() + ratio.abs()) {
        return Err(Error::NoSolution { ratio });
    }
    Ok(s.inv()? * (w * q3 + ratio * q1))
}

/// Fills the vertex at `slot` so that the quadruple has real cross ratio
/// `ratio`. `known` lists the other three vertices in their natural order.
pub fn solve_vertex(slot: Slot, ratio: f64, known: [Quaternion; 3]) -> Result<Quaternion> {
    if ratio == 0.0 || !ratio.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let [a, b, c] = known;
    // Cyclic shifts reduce every slot to the fourth one; for real values
    // DV(Q4,Q1,Q2,Q3) = 1/DV and DV(Q3,Q4,Q1,Q2) = DV.
    match slot {
        Slot::Fourth => solve_fourth_point(ratio, a, b, c),
        Slot::Third => solve_fourth_point(1.0 / ratio, c, a, b),
        Slot::Second => solve_fourth_point(ratio, b, c, a),
        Slot::First => solve_fourth_point(1.0 / ratio, a, b, c),
    }
}

/// Two quadrilaterals `X` (base) and `Z` (top) related by the hexahedron
/// construction with base cross ratio `mu` and side parameter `lambda`.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct Hexahedron {
    pub base: [Quaternion; 4],
    pub top: [Quaternion; 4],
    pub mu: f64,
    pub lambda: f64,
}

impl Hexahedron {
    pub fn vertices(&self) -> [Quaternion; 8] {
        let [x1, x2, x3, x4] = self.base;
        let [z1, z2, z3, z4] = self.top;
        [x1, x2, x3, x4, z1, z2, z3, z4]
    }

    /// Base, top, then the four side faces `(X_i, X_i+1, Z_i+1, Z_i)`.
    /// Face `f` is opposite to face `OPPOSITE_FACE[f]`.
    pub fn faces(&self) -> [[Quaternion; 4]; 6] {
        let [x1, x2, x3, x4] = self.base;
        let [z1, z2, z3, z4] = self.top;
        [
            [x1, x2, x3, x4],
            [z1, z2, z3, z4],
            [x1, x2, z2, z1],
            [x2, x3, z3, z2],
            [x3, x4, z4, z3],
            [x4, x1, z1, z4],
        ]
    }

    /// Relative deviations of the six cross-ratio equations, in the order
    /// `DV(Z) = mu`, `DV(X) = mu`, `DV(Z1,Z2,X2,X1) = mu lambda`,
    /// `DV(Z3,Z4,X4,X3) = mu lambda`, `DV(Z2,Z3,X3,X2) = lambda`,
    /// `DV(Z4,Z1,X1,X4) = lambda`.
    pub fn residuals(&self) -> Result<[f64; 6]> {
        let [x1, x2, x3, x4] = self.base;
        let [z1, z2, z3, z4] = self.top;
        let ml = self.mu * self.lambda;
        let eqs = [
            ([z1, z2, z3, z4], self.mu),
            ([x1, x2, x3, x4], self.mu),
            ([z1, z2, x2, x1], ml),
            ([z3, z4, x4, x3], ml),
            ([z2, z3, x3, x2], self.lambda),
            ([z4, z1, x1, x4], self.lambda),
        ];
        let mut out = [0.0; 6];
        for (slot, (quad, target)) in out.iter_mut().zip(eqs) {
            let dv = cross_ratio_of(&quad)?;
            *slot = (dv.re - target).hypot(dv.im) / target.abs().max(1.0);
        }
        Ok(out)
    }

    pub fn max_residual(&self) -> Result<f64> {
        Ok(self.residuals()?.into_iter().fold(0.0, f64::max))
    }
}

pub const OPPOSITE_FACE: [usize; 6] = [1, 0, 4, 5, 2, 3];

/// Builds the top quadrilateral from a concircular base, the side parameter
/// and the initial vertex `Z1`.
pub fn build_hexahedron(base: [Quaternion; 4], lambda: f64, z1: Quaternion) -> Result<Hexahedron> {
    build_hexahedron_with_tol(base, lambda, z1, GEOM_TOL)
}

pub fn build_hexahedron_with_tol(base: [Quaternion; 4], lambda: f64, z1: Quaternion, tol: f64) -> Result<Hexahedron> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let dv = cross_ratio_of(&base)?;
    if dv.im > tol * dv.abs().max(1.0) {
        return Err(Error::NotConcircular { imag: dv.im });
    }
    let diameter = diameter(&base).max(z1.norm()).max(1.0);
    if base.iter().any(|&x| coincident(x, z1, diameter)) {
        return Err(Error::CoincidentInitialPoint);
    }
    let mu = dv.re;
    let [x1, x2, x3, x4] = base;
    let z2 = solve_vertex(Slot::Second, mu * lambda, [z1, x2, x1])?;
    let z3 = solve_vertex(Slot::Second, lambda, [z2, x3, x2])?;
    let z4 = solve_vertex(Slot::Second, mu * lambda, [z3, x4, x3])?;
    Ok(Hexahedron {
        base,
        top: [z1, z2, z3, z4],
        mu,
        lambda,
    })
}

/// Largest pairwise distance.
pub fn diameter(points: &[Quaternion]) -> f64 {
    let mut d: f64 = 0.0;
    for (i, p) in points.iter().enumerate() {
        for q in &points[i + 1..] {
            d = d.max(p.distance(*q));
        }
    }
    d
}

/// A round 2-sphere in R^4: the intersection of an affine 3-flat
/// `<flat_normal, P> = flat_offset` with the 3-sphere `|P - center| = radius`.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoSphere {
    pub flat_normal: Quaternion,
    pub flat_offset: f64,
    pub center: Quaternion,
    pub radius: f64,
}

impl TwoSphere {
    /// Euclidean distance of `p` to the sphere.
    pub fn distance(&self, p: Quaternion) -> f64 {
        let off_flat = p.dot(self.flat_normal) - self.flat_offset;
        let in_flat = p - off_flat * self.flat_normal;
        let radial = in_flat.distance(self.center) - self.radius;
        off_flat.hypot(radial)
    }

    pub fn contains(&self, p: Quaternion, tol: f64) -> bool {
        self.distance(p) <= tol * self.radius.max(1.0)
    }
}

/// An affine 2-plane, the limiting case of a 2-sphere through infinity.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TwoPlane {
    pub point: Quaternion,
    /// Orthonormal spanning directions.
    pub directions: [Quaternion; 2],
}

impl TwoPlane {
    pub fn distance(&self, p: Quaternion) -> f64 {
        let d = p - self.point;
        let [e1, e2] = self.directions;
        (d - d.dot(e1) * e1 - d.dot(e2) * e2).norm()
    }
}

/// Member of a sphere congruence: a 2-sphere or a 2-plane.
#[derive(Copy, Clone, Debug, PartialEq, Serialize, Deserialize)]
pub enum Carrier {
    Sphere(TwoSphere),
    Plane(TwoPlane),
}

impl Carrier {
    pub fn distance(&self, p: Quaternion) -> f64 {
        match self {
            Carrier::Sphere(s) => s.distance(p),
            Carrier::Plane(pl) => pl.distance(p),
        }
    }
}

fn to_vec(q: Quaternion) -> [f64; 4] {
    q.to_array()
}

fn from_slice(v: &[f64]) -> Quaternion {
    Quaternion::new(v[0], v[1], v[2], v[3])
}

/// Flips `q` so its first non-negligible component is positive.
fn canonical_sign(q: Quaternion) -> Quaternion {
    for c in q.to_array() {
        if c.abs() > 1e-12 {
            return if c < 0.0 { -q } else { q };
        }
    }
    q
}

/// Right singular vectors sorted by decreasing singular value.
fn sorted_svd(a: DMatrix<f64>) -> Vec<(f64, DVector<f64>)> {
    let svd = a.svd(false, true);
    let vt = svd.v_t.expect("requested V^T");
    let mut pairs: Vec<(f64, DVector<f64>)> = svd
        .singular_values
        .iter()
        .enumerate()
        .map(|(i, &s)| (s, vt.row(i).transpose()))
        .collect();
    pairs.sort_by(|a, b| b.0.total_cmp(&a.0));
    pairs
}

/// Null vector of the lifted matrix `[|u|², u, 1]` (algebraic sphere fit).
fn lifted_fit(coords: &[Vec<f64>]) -> (f64, DVector<f64>, f64) {
    let dim = coords[0].len();
    let rows = coords.len().max(dim + 2);
    let mut a = DMatrix::<f64>::zeros(rows, dim + 2);
    for (r, u) in coords.iter().enumerate() {
        a[(r, 0)] = u.iter().map(|x| x * x).sum();
        for (c, x) in u.iter().enumerate() {
            a[(r, c + 1)] = *x;
        }
        a[(r, dim + 1)] = 1.0;
    }
    let pairs = sorted_svd(a);
    let largest = pairs[0].0;
    let (smallest, v) = pairs.last().cloned().expect("non-empty svd");
    (smallest / largest, v, largest)
}

/// Fits the generalized 2-sphere (round sphere or 2-plane) carrying
/// `points`. Returns the carrier and the largest point distance to it,
/// relative to the diameter of the point set.
pub fn fit_carrier(points: &[Quaternion], tol: f64) -> Result<(Carrier, f64)> {
    if points.len() < 4 {
        return Err(Error::TooFewPoints {
            needed: 4,
            got: points.len(),
        });
    }
    let k = points.len() as f64;
    let centroid = points.iter().copied().sum::<Quaternion>() / k;
    let diam = diameter(points);
    if diam == 0.0 || !diam.is_finite() {
        return Err(Error::CollinearPoints);
    }
    let mut centered = DMatrix::<f64>::zeros(points.len().max(4), 4);
    for (r, p) in points.iter().enumerate() {
        for (c, x) in to_vec((*p - centroid) / diam).into_iter().enumerate() {
            centered[(r, c)] = x;
        }
    }
    let axes = sorted_svd(centered);
    let sigma_max = axes[0].0;
    let dims = axes.iter().filter(|(s, _)| *s > tol * sigma_max).count();
    let axis = |i: usize| from_slice(axes[i].1.as_slice());
    let residual_of = |carrier: &Carrier| points.iter().map(|p| carrier.distance(*p)).fold(0.0, f64::max) / diam;
    let local = |p: Quaternion, basis: &[Quaternion]| -> Vec<f64> {
        basis.iter().map(|e| (p - centroid).dot(*e) / diam).collect()
    };

    match dims {
        4 => {
            let normal = axis(3);
            let residual = points
                .iter()
                .map(|p| (*p - centroid).dot(normal).abs())
                .fold(0.0, f64::max)
                / diam;
            Err(Error::NotCospherical { residual })
        }
        3 => {
            let normal = canonical_sign(axis(3));
            let basis = [axis(0), axis(1), axis(2)];
            let coords: Vec<Vec<f64>> = points.iter().map(|p| local(*p, &basis)).collect();
            let (_, v, _) = lifted_fit(&coords);
            let a = v[0];
            let b = [v[1], v[2], v[3]];
            let e = v[4];
            let bn = b.iter().map(|x| x * x).sum::<f64>().sqrt();
            if a.abs() <= 1e-12 * bn.max(e.abs()) {
                return Err(Error::NotCospherical {
                    residual: f64::INFINITY,
                });
            }
            let uc: Vec<f64> = b.iter().map(|bi| -bi / (2.0 * a)).collect();
            let r2 = uc.iter().map(|x| x * x).sum::<f64>() - e / a;
            if r2 <= 0.0 {
                return Err(Error::NotCospherical {
                    residual: f64::INFINITY,
                });
            }
            let center = centroid + diam * (uc[0] * basis[0] + uc[1] * basis[1] + uc[2] * basis[2]);
            let sphere = TwoSphere {
                flat_normal: normal,
                flat_offset: normal.dot(centroid),
                center,
                radius: diam * r2.sqrt(),
            };
            let carrier = Carrier::Sphere(sphere);
            let residual = residual_of(&carrier);
            Ok((carrier, residual))
        }
        2 => {
            let basis = [axis(0), axis(1)];
            let coords: Vec<Vec<f64>> = points.iter().map(|p| local(*p, &basis)).collect();
            let (rel, v, _) = lifted_fit(&coords);
            let a = v[0];
            let plane = Carrier::Plane(TwoPlane {
                point: centroid,
                directions: basis,
            });
            if rel > tol || a.abs() <= 1e-12 {
                let residual = residual_of(&plane);
                return Ok((plane, residual));
            }
            let uc = [-v[1] / (2.0 * a), -v[2] / (2.0 * a)];
            let r2 = uc[0] * uc[0] + uc[1] * uc[1] - v[3] / a;
            if r2 <= 0.0 {
                let residual = residual_of(&plane);
                return Ok((plane, residual));
            }
            let center = centroid + diam * (uc[0] * basis[0] + uc[1] * basis[1]);
            // Concircular points: pick the pencil member whose 3-flat normal
            // is the first standard axis with a sizeable component in the
            // plane's normal space, and whose centre is the circle centre.
            let (n1, n2) = (axis(2), axis(3));
            let normal = [Quaternion::ONE, Quaternion::I, Quaternion::J, Quaternion::K]
                .into_iter()
                .map(|e| e.dot(n1) * n1 + e.dot(n2) * n2)
                .find(|p| p.norm_sqr() >= 0.25)
                .expect("projections of an orthonormal basis onto a 2-space");
            let normal = canonical_sign(normal.normalized()?);
            let sphere = TwoSphere {
                flat_normal: normal,
                flat_offset: normal.dot(center),
                center,
                radius: diam * r2.sqrt(),
            };
            let carrier = Carrier::Sphere(sphere);
            let residual = residual_of(&carrier);
            Ok((carrier, residual))
        }
        _ => Err(Error::CollinearPoints),
    }
}

/// Fits a round 2-sphere through `points` (at least four).
///
/// Points spanning all of R^4 are rejected; coplanar points that are not
/// concircular only determine a 2-plane and are rejected as well.
pub fn fit_two_sphere(points: &[Quaternion]) -> Result<(TwoSphere, f64)> {
    match fit_carrier(points, GEOM_TOL)? {
        (Carrier::Sphere(s), residual) => Ok((s, residual)),
        (Carrier::Plane(_), _) => Err(Error::PlanarCarrier),
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TrapezoidClass {
    NotTrapezoid,
    Trapezoid,
    IsoscelesEmbedded,
    IsoscelesCrossed,
}

impl TrapezoidClass {
    pub fn is_isosceles(self) -> bool {
        matches!(
            self,
            TrapezoidClass::IsoscelesEmbedded | TrapezoidClass::IsoscelesCrossed
        )
    }
}

/// Real cross ratio of the isosceles trapezoid with vertices `Q1, Q2, Q3`:
/// `-|Q1-Q2|² / (|Q1-Q3|² - |Q1-Q2|²)`.
pub fn isosceles_cross_ratio(q1: Quaternion, q2: Quaternion, q3: Quaternion) -> f64 {
    let l12 = (q1 - q2).norm_sqr();
    let l13 = (q1 - q3).norm_sqr();
    -l12 / (l13 - l12)
}

pub fn trapezoid_class(q1: Quaternion, q2: Quaternion, q3: Quaternion, q4: Quaternion) -> TrapezoidClass {
    trapezoid_class_with_tol(q1, q2, q3, q4, GEOM_TOL)
}

/// Classifies `(Q1,Q2,Q3,Q4)` with respect to the parallel pair
/// `(Q1-Q4) ∥ (Q2-Q3)`. Isosceles requires equal legs `|Q1-Q2| = |Q3-Q4|`,
/// equal diagonals `|Q1-Q3| = |Q2-Q4|` (excluding parallelograms), and a
/// cross ratio matching [`isosceles_cross_ratio`].
pub fn trapezoid_class_with_tol(
    q1: Quaternion,
    q2: Quaternion,
    q3: Quaternion,
    q4: Quaternion,
    tol: f64,
) -> TrapezoidClass {
    if !dependent2(q1 - q4, q2 - q3) {
        return TrapezoidClass::NotTrapezoid;
    }
    let diam = diameter(&[q1, q2, q3, q4]);
    let (l12, l34, l13, l24) = (q1.distance(q2), q3.distance(q4), q1.distance(q3), q2.distance(q4));
    if (l12 - l34).abs() > tol * diam || (l13 - l24).abs() > tol * diam {
        return TrapezoidClass::Trapezoid;
    }
    let certified = cross_ratio(q1, q2, q3, q4).is_ok_and(|dv| {
        let target = isosceles_cross_ratio(q1, q2, q3);
        (dv.re - target).hypot(dv.im) <= tol * target.abs().max(1.0)
    });
    if !certified {
        return TrapezoidClass::Trapezoid;
    }
    if l12 < l13 {
        TrapezoidClass::IsoscelesEmbedded
    } else {
        TrapezoidClass::IsoscelesCrossed
    }
}

/// Isosceles-trapezoid test for a face, trying both pairs of opposite sides.
pub fn face_is_isosceles(face: &[Quaternion; 4], tol: f64) -> bool {
    let [a, b, c, d] = *face;
    trapezoid_class_with_tol(a, b, c, d, tol).is_isosceles() || trapezoid_class_with_tol(b, c, d, a, tol).is_isosceles()
}

/// Checks the trapezoid supplement: whenever two adjacent faces are
/// isosceles trapezoids, so are their opposite faces. Vacuously true if no
/// two adjacent faces are isosceles.
pub fn supplement_check(h: &Hexahedron) -> bool {
    supplement_check_with_tol(h, GEOM_TOL)
}

pub fn supplement_check_with_tol(h: &Hexahedron, tol: f64) -> bool {
    let faces = h.faces();
    let iso: Vec<bool> = faces.iter().map(|f| face_is_isosceles(f, tol)).collect();
    for a in 0..6 {
        for b in (a + 1)..6 {
            let adjacent = OPPOSITE_FACE[a] != b;
            if adjacent && iso[a] && iso[b] && !(iso[OPPOSITE_FACE[a]] && iso[OPPOSITE_FACE[b]]) {
                return false;
            }
        }
    }
    true
}
