//! Quaternion arithmetic on R^4 ≅ H.
//!
//! Points of Euclidean 4-space, edge vectors and real scalars all share the
//! [`Quaternion`] type; points of R^3 are the purely imaginary quaternions.
//! Besides the Hamilton product this module provides the quaternionic
//! linear-dependence tests for two, three and four vectors.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Relative threshold for the dependence identities.
pub const DEPENDENCE_TOL: f64 = 1e-9;

/// An element `w + x i + y j + z k` of the quaternions.
#[derive(Copy, Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Quaternion {
    pub w: f64,
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Quaternion {
    pub const ZERO: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 0.0);
    pub const ONE: Quaternion = Quaternion::new(1.0, 0.0, 0.0, 0.0);
    pub const I: Quaternion = Quaternion::new(0.0, 1.0, 0.0, 0.0);
    pub const J: Quaternion = Quaternion::new(0.0, 0.0, 1.0, 0.0);
    pub const K: Quaternion = Quaternion::new(0.0, 0.0, 0.0, 1.0);

    #[inline]
    pub const fn new(w: f64, x: f64, y: f64, z: f64) -> Self {
        Self { w, x, y, z }
    }

    #[inline]
    pub const fn real(w: f64) -> Self {
        Self::new(w, 0.0, 0.0, 0.0)
    }

    /// Embeds a point of R^3 as a purely imaginary quaternion.
    #[inline]
    pub const fn imag(x: f64, y: f64, z: f64) -> Self {
        Self::new(0.0, x, y, z)
    }

    #[inline]
    pub fn from_array(a: [f64; 4]) -> Self {
        Self::new(a[0], a[1], a[2], a[3])
    }

    #[inline]
    pub fn to_array(self) -> [f64; 4] {
        [self.w, self.x, self.y, self.z]
    }

    #[inline]
    pub fn re(self) -> f64 {
        self.w
    }

    /// Imaginary part as a quaternion with zero real part.
    #[inline]
    pub fn im(self) -> Quaternion {
        Self::imag(self.x, self.y, self.z)
    }

    #[inline]
    pub fn conj(self) -> Self {
        Self::new(self.w, -self.x, -self.y, -self.z)
    }

    #[inline]
    pub fn norm_sqr(self) -> f64 {
        self.w * self.w + self.x * self.x + self.y * self.y + self.z * self.z
    }

    #[inline]
    pub fn norm(self) -> f64 {
        self.norm_sqr().sqrt()
    }

    /// Euclidean inner product of R^4.
    #[inline]
    pub fn dot(self, other: Self) -> f64 {
        self.w * other.w + self.x * other.x + self.y * other.y + self.z * other.z
    }

    #[inline]
    pub fn distance(self, other: Self) -> f64 {
        (self - other).norm()
    }

    #[inline]
    pub fn is_finite(self) -> bool {
        self.w.is_finite() && self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }

    /// Multiplicative inverse `q̄ / |q|²`.
    pub fn inv(self) -> Result<Self> {
        let n2 = self.norm_sqr();
        if n2 == 0.0 || !n2.is_finite() {
            return Err(Error::ZeroQuaternion { norm: n2.sqrt() });
        }
        Ok(self.conj() / n2)
    }

    /// Unit quaternion in the direction of `self`.
    pub fn normalized(self) -> Result<Self> {
        let n = self.norm();
        if n == 0.0 {
            return Err(Error::ZeroQuaternion { norm: 0.0 });
        }
        Ok(self / n)
    }
}

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}i + {}j + {}k", self.w, self.x, self.y, self.z)
    }
}

impl Add for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: Self) -> Self {
        Self::new(self.w + rhs.w, self.x + rhs.x, self.y + rhs.y, self.z + rhs.z)
    }
}

impl Add<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn add(self, rhs: f64) -> Self {
        Self::new(self.w + rhs, self.x, self.y, self.z)
    }
}

impl Sub for Quaternion {
    type Output = Self;
    #[inline]
    fn sub(self, rhs: Self) -> Self {
        Self::new(self.w - rhs.w, self.x - rhs.x, self.y - rhs.y, self.z - rhs.z)
    }
}

impl Neg for Quaternion {
    type Output = Self;
    #[inline]
    fn neg(self) -> Self {
        Self::new(-self.w, -self.x, -self.y, -self.z)
    }
}

impl AddAssign for Quaternion {
    #[inline]
    fn add_assign(&mut self, rhs: Self) {
        *self = *self + rhs;
    }
}

impl SubAssign for Quaternion {
    #[inline]
    fn sub_assign(&mut self, rhs: Self) {
        *self = *self - rhs;
    }
}

/// Hamilton product, `i j = k`.
impl Mul for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, q: Self) -> Self {
        let p = self;
        Self::new(
            p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w,
        )
    }
}

impl Mul<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn mul(self, s: f64) -> Self {
        Self::new(self.w * s, self.x * s, self.y * s, self.z * s)
    }
}

impl Mul<Quaternion> for f64 {
    type Output = Quaternion;
    #[inline]
    fn mul(self, q: Quaternion) -> Quaternion {
        q * self
    }
}

impl Div<f64> for Quaternion {
    type Output = Self;
    #[inline]
    fn div(self, s: f64) -> Self {
        Self::new(self.w / s, self.x / s, self.y / s, self.z / s)
    }
}

impl Sum for Quaternion {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Quaternion::ZERO, Add::add)
    }
}

impl From<f64> for Quaternion {
    fn from(w: f64) -> Self {
        Self::real(w)
    }
}

/// Hamilton product as a free function.
#[inline]
pub fn mul(p: Quaternion, q: Quaternion) -> Quaternion {
    p * q
}

/// Inverse as a free function; fails on the zero quaternion.
#[inline]
pub fn inv(q: Quaternion) -> Result<Quaternion> {
    q.inv()
}

fn norm_or_one(q: Quaternion) -> f64 {
    let n = q.norm();
    if n == 0.0 {
        1.0
    } else {
        n
    }
}

/// `a b̄ = b ā`: linear dependence of two vectors in R^4.
pub fn dependent2(a: Quaternion, b: Quaternion) -> bool {
    let residual = (a * b.conj() - b * a.conj()).norm();
    residual <= DEPENDENCE_TOL * norm_or_one(a) * norm_or_one(b)
}

/// `a b̄ c = c b̄ a`: linear dependence of three vectors in R^4.
pub fn dependent3(a: Quaternion, b: Quaternion, c: Quaternion) -> bool {
    let residual = (a * b.conj() * c - c * b.conj() * a).norm();
    residual <= DEPENDENCE_TOL * norm_or_one(a) * norm_or_one(b) * norm_or_one(c)
}

/// Linear dependence of four vectors in R^4.
///
/// With `X = a b̄ c d̄` and `Y = d̄ c b̄ a` the difference `X - Y` has real
/// part `2 det(x, y, z, w)` of the four vectors, and the four vectors are
/// dependent iff `X - Y = -(X̄ - Ȳ)`, i.e. iff `X - Y` is purely imaginary.
pub fn dependent4(a: Quaternion, b: Quaternion, c: Quaternion, d: Quaternion) -> bool {
    let x = a * b.conj() * c * d.conj();
    let y = d.conj() * c * b.conj() * a;
    let lhs = x - y;
    let rhs = d * c.conj() * b * a.conj() - a.conj() * b * c.conj() * d;
    let residual = (lhs + rhs).norm();
    let scale = norm_or_one(a) * norm_or_one(b) * norm_or_one(c) * norm_or_one(d);
    residual <= DEPENDENCE_TOL * scale
}
