//! Nets on rectangular windows of Z², their elementary quadrilaterals and
//! the seed generators.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::crossratio::{cross_ratio, CrossRatioValue};
use crate::error::{Error, Result, VertexIndex};
use crate::quat::Quaternion;

/// A rectangle `[m0, m0+width) × [n0, n0+height)` of lattice points,
/// optionally closed up in either direction.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LatticeWindow {
    pub m0: i64,
    pub n0: i64,
    pub width: usize,
    pub height: usize,
    pub wrap_m: bool,
    pub wrap_n: bool,
}

impl LatticeWindow {
    pub fn new(m0: i64, n0: i64, width: usize, height: usize) -> Result<Self> {
        Self::with_wrap(m0, n0, width, height, false, false)
    }

    pub fn with_wrap(m0: i64, n0: i64, width: usize, height: usize, wrap_m: bool, wrap_n: bool) -> Result<Self> {
        let w = Self {
            m0,
            n0,
            width,
            height,
            wrap_m,
            wrap_n,
        };
        w.validate()?;
        Ok(w)
    }

    pub fn validate(&self) -> Result<()> {
        if self.width < 2 || self.height < 2 {
            return Err(Error::InvalidWindow(format!(
                "window must be at least 2x2, got {}x{}",
                self.width, self.height
            )));
        }
        if (self.wrap_m && self.width < 3) || (self.wrap_n && self.height < 3) {
            return Err(Error::InvalidWindow(
                "a periodic direction needs at least 3 vertices".into(),
            ));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.width * self.height
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn is_periodic(&self) -> bool {
        self.wrap_m || self.wrap_n
    }

    fn reduce(value: i64, origin: i64, size: usize, wrap: bool) -> Option<i64> {
        let size = size as i64;
        let offset = value - origin;
        if wrap {
            Some(origin + offset.rem_euclid(size))
        } else if (0..size).contains(&offset) {
            Some(value)
        } else {
            None
        }
    }

    /// Canonical representative of `(m, n)`, reducing periodic directions.
    pub fn normalize(&self, m: i64, n: i64) -> Option<VertexIndex> {
        Some((
            Self::reduce(m, self.m0, self.width, self.wrap_m)?,
            Self::reduce(n, self.n0, self.height, self.wrap_n)?,
        ))
    }

    pub fn contains(&self, m: i64, n: i64) -> bool {
        self.normalize(m, n).is_some()
    }

    /// Row-major storage offset `(m - m0) * height + (n - n0)`.
    pub fn offset(&self, m: i64, n: i64) -> Option<usize> {
        let (m, n) = self.normalize(m, n)?;
        Some((m - self.m0) as usize * self.height + (n - self.n0) as usize)
    }

    pub fn index_at(&self, offset: usize) -> VertexIndex {
        (
            self.m0 + (offset / self.height) as i64,
            self.n0 + (offset % self.height) as i64,
        )
    }

    /// All vertices in storage order.
    pub fn vertices(&self) -> impl Iterator<Item = VertexIndex> + '_ {
        (0..self.len()).map(|k| self.index_at(k))
    }

    fn span(origin: i64, size: usize, wrap: bool) -> std::ops::Range<i64> {
        let count = if wrap { size } else { size - 1 };
        origin..origin + count as i64
    }

    /// Elementary quadrilaterals, seam quadrilaterals of periodic
    /// directions included exactly once.
    pub fn quads(&self) -> Vec<DualIndex> {
        let mut out = Vec::new();
        for m in Self::span(self.m0, self.width, self.wrap_m) {
            for n in Self::span(self.n0, self.height, self.wrap_n) {
                out.push(DualIndex { m, n });
            }
        }
        out
    }

    /// All edges, seam edges included. `to` is one step from `from` and
    /// may lie one period outside the window.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        let all_n = self.n0..self.n0 + self.height as i64;
        let all_m = self.m0..self.m0 + self.width as i64;
        for m in Self::span(self.m0, self.width, self.wrap_m) {
            for n in all_n.clone() {
                out.push(Edge {
                    from: (m, n),
                    to: (m + 1, n),
                    direction: Direction::M,
                });
            }
        }
        for m in all_m {
            for n in Self::span(self.n0, self.height, self.wrap_n) {
                out.push(Edge {
                    from: (m, n),
                    to: (m, n + 1),
                    direction: Direction::N,
                });
            }
        }
        out
    }

    /// The window of one period of the universal cover: periodic directions
    /// are opened up and gain the closing column (row).
    pub fn unrolled(&self) -> LatticeWindow {
        LatticeWindow {
            width: self.width + self.wrap_m as usize,
            height: self.height + self.wrap_n as usize,
            wrap_m: false,
            wrap_n: false,
            ..*self
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Direction {
    M,
    N,
}

impl Direction {
    /// Sign attached to the direction in the Christoffel and Darboux
    /// equations: `+1` along `m`, `-1` along `n`.
    pub fn sign(self) -> f64 {
        match self {
            Direction::M => 1.0,
            Direction::N => -1.0,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub struct Edge {
    pub from: VertexIndex,
    pub to: VertexIndex,
    pub direction: Direction,
}

/// Label of the elementary quadrilateral with corners `(m,n), (m+1,n),
/// (m+1,n+1), (m,n+1)`.
#[derive(Copy, Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct DualIndex {
    pub m: i64,
    pub n: i64,
}

impl DualIndex {
    pub fn corners(self) -> [VertexIndex; 4] {
        let DualIndex { m, n } = self;
        [(m, n), (m + 1, n), (m + 1, n + 1), (m, n + 1)]
    }
}

/// A quaternion-valued map on a lattice window.
#[derive(Clone, Debug, PartialEq)]
pub struct Net {
    window: LatticeWindow,
    values: Vec<Quaternion>,
}

impl Net {
    pub fn new(window: LatticeWindow, values: Vec<Quaternion>) -> Result<Self> {
        window.validate()?;
        if values.len() != window.len() {
            return Err(Error::ValueCount {
                expected: window.len(),
                got: values.len(),
            });
        }
        Ok(Self { window, values })
    }

    pub fn from_fn(window: LatticeWindow, mut f: impl FnMut(i64, i64) -> Quaternion) -> Result<Self> {
        window.validate()?;
        let values = window.vertices().map(|(m, n)| f(m, n)).collect();
        Ok(Self { window, values })
    }

    pub fn try_from_fn(window: LatticeWindow, mut f: impl FnMut(i64, i64) -> Result<Quaternion>) -> Result<Self> {
        window.validate()?;
        let values = window.vertices().map(|(m, n)| f(m, n)).collect::<Result<_>>()?;
        Ok(Self { window, values })
    }

    pub fn window(&self) -> &LatticeWindow {
        &self.window
    }

    pub fn values(&self) -> &[Quaternion] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Quaternion> {
        self.values
    }

    /// Value at `(m, n)`, reducing periodic directions.
    pub fn get(&self, m: i64, n: i64) -> Option<Quaternion> {
        self.window.offset(m, n).map(|k| self.values[k])
    }

    pub fn value(&self, m: i64, n: i64) -> Result<Quaternion> {
        self.get(m, n).ok_or(Error::OutOfWindow { index: (m, n) })
    }

    pub fn iter(&self) -> impl Iterator<Item = (VertexIndex, Quaternion)> + '_ {
        self.window.vertices().zip(self.values.iter().copied())
    }

    pub fn quad(&self, d: DualIndex) -> Result<[Quaternion; 4]> {
        let [a, b, c, e] = d.corners();
        Ok([
            self.value(a.0, a.1)?,
            self.value(b.0, b.1)?,
            self.value(c.0, c.1)?,
            self.value(e.0, e.1)?,
        ])
    }

    pub fn map(&self, mut f: impl FnMut(Quaternion) -> Quaternion) -> Net {
        Net {
            window: self.window,
            values: self.values.iter().map(|&q| f(q)).collect(),
        }
    }

    /// Pointwise combination of two nets on the same window.
    pub fn zip_with(&self, other: &Net, mut f: impl FnMut(Quaternion, Quaternion) -> Quaternion) -> Result<Net> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        Ok(Net {
            window: self.window,
            values: self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect(),
        })
    }

    pub fn translate(&self, t: Quaternion) -> Net {
        self.map(|q| q + t)
    }

    /// Largest pairwise vertex distance, bounded below by the extent of
    /// the bounding box so it stays linear in the number of vertices.
    pub fn diameter(&self) -> f64 {
        let mut lo = [f64::INFINITY; 4];
        let mut hi = [f64::NEG_INFINITY; 4];
        for q in &self.values {
            for (k, c) in q.to_array().into_iter().enumerate() {
                lo[k] = lo[k].min(c);
                hi[k] = hi[k].max(c);
            }
        }
        (0..4).map(|k| (hi[k] - lo[k]).powi(2)).sum::<f64>().sqrt()
    }

    /// Largest absolute real part; zero for nets in R^3.
    pub fn max_real(&self) -> f64 {
        self.values.iter().map(|q| q.w.abs()).fold(0.0, f64::max)
    }

    pub fn require_imaginary(&self, tol: f64) -> Result<()> {
        let max_real = self.max_real();
        if max_real > tol * self.diameter().max(1.0) {
            return Err(Error::NotImaginary { max_real });
        }
        Ok(())
    }

    /// Largest distance between corresponding vertices.
    pub fn max_distance(&self, other: &Net) -> Result<f64> {
        if self.window != other.window {
            return Err(Error::WindowMismatch);
        }
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a.distance(*b))
            .fold(0.0, f64::max))
    }

    /// The net on one period of the universal cover. For a periodic net
    /// the closing column (row) repeats the first one.
    pub fn unrolled(&self) -> Net {
        let window = self.window.unrolled();
        Net::from_fn(window, |m, n| self.get(m, n).expect("periodic lookup")).expect("unrolled window is valid")
    }

    /// Closes up an open net over `periodic`, the window it was unrolled
    /// from. Returns the net and the seam mismatch, the largest distance
    /// between the closing column (row) and the first one.
    pub fn rewrap(&self, periodic: &LatticeWindow) -> Result<(Net, f64)> {
        if self.window != periodic.unrolled() {
            return Err(Error::WindowMismatch);
        }
        let w = periodic;
        let mut mismatch: f64 = 0.0;
        if w.wrap_m {
            let last = w.m0 + w.width as i64;
            for n in self.window.n0..self.window.n0 + self.window.height as i64 {
                mismatch = mismatch.max(self.value(last, n)?.distance(self.value(w.m0, n)?));
            }
        }
        if w.wrap_n {
            let last = w.n0 + w.height as i64;
            for m in self.window.m0..self.window.m0 + self.window.width as i64 {
                mismatch = mismatch.max(self.value(m, last)?.distance(self.value(m, w.n0)?));
            }
        }
        let net = Net::from_fn(*w, |m, n| self.get(m, n).expect("inside the cover"))?;
        Ok((net, mismatch))
    }
}

impl Index<VertexIndex> for Net {
    type Output = Quaternion;

    fn index(&self, (m, n): VertexIndex) -> &Quaternion {
        let k = self
            .window
            .offset(m, n)
            .unwrap_or_else(|| panic!("vertex ({m}, {n}) outside the window"));
        &self.values[k]
    }
}

/// Cross ratio of every elementary quadrilateral.
pub fn elementary_cross_ratios(net: &Net) -> Result<BTreeMap<DualIndex, CrossRatioValue>> {
    net.window()
        .quads()
        .into_iter()
        .map(|d| {
            let [a, b, c, e] = net.quad(d)?;
            cross_ratio(a, b, c, e)
                .map(|dv| (d, dv))
                .map_err(|_| Error::DegenerateFace { index: d })
        })
        .collect()
}

/// Elementary cross ratios are concircular (`|im| <= tol * max(1, |DV|)`)
/// with negative real part.
pub fn is_curvature_line_net(net: &Net, tol: f64) -> bool {
    elementary_cross_ratios(net).is_ok_and(|map| map.values().all(|dv| dv.im <= tol * dv.abs().max(1.0) && dv.re < 0.0))
}

/// Largest `|DV + 1|` over the elementary quadrilaterals.
pub fn isothermic_deviation(net: &Net) -> Result<f64> {
    Ok(elementary_cross_ratios(net)?
        .values()
        .map(|dv| dv.distance(CrossRatioValue::real(-1.0)))
        .fold(0.0, f64::max))
}

/// All elementary cross ratios lie within `tol` of `-1`.
pub fn is_isothermic(net: &Net, tol: f64) -> bool {
    isothermic_deviation(net).is_ok_and(|d| d <= tol)
}

/// `F(m,n) = m + n i` on `[0,M) × [0,N)`.
pub fn gen_planar_grid(width: usize, height: usize) -> Result<Net> {
    gen_rectangular_grid(width, height, 1.0, 1.0)
}

/// `F(m,n) = a m + b n i`; isothermic only for `a = b`.
pub fn gen_rectangular_grid(width: usize, height: usize, a: f64, b: f64) -> Result<Net> {
    let window = LatticeWindow::new(0, 0, width, height)?;
    Net::from_fn(window, |m, n| Quaternion::new(a * m as f64, b * n as f64, 0.0, 0.0))
}

/// Height step that makes the cylinder quadrilaterals squares.
pub fn cylinder_step(width: usize, r: f64) -> f64 {
    2.0 * r * (PI / width as f64).sin()
}

/// Circular cylinder of radius `r` around the `k` axis, periodic in `m`,
/// with square faces.
pub fn gen_cylinder(width: usize, height: usize, r: f64) -> Result<Net> {
    if width < 3 {
        return Err(Error::InvalidWindow("cylinder needs M >= 3".into()));
    }
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::InvalidWindow(format!(
            "cylinder radius must be positive, got {r}"
        )));
    }
    let window = LatticeWindow::with_wrap(0, 0, width, height, true, false)?;
    let h = cylinder_step(width, r);
    Net::from_fn(window, |m, n| {
        let t = 2.0 * PI * m as f64 / width as f64;
        Quaternion::imag(r * t.cos(), r * t.sin(), n as f64 * h)
    })
}

/// Stereographic image in R^3 of the Clifford torus
/// `(cos a, sin a, cos b, sin b) / √2`, periodic in both directions.
/// Isothermic when `M = N`.
pub fn gen_clifford_torus(width: usize, height: usize) -> Result<Net> {
    if width < 3 || height < 3 {
        return Err(Error::InvalidWindow("Clifford torus needs M, N >= 3".into()));
    }
    let window = LatticeWindow::with_wrap(0, 0, width, height, true, true)?;
    let s = std::f64::consts::FRAC_1_SQRT_2;
    Net::from_fn(window, |m, n| {
        let a = 2.0 * PI * m as f64 / width as f64 + PI / width as f64;
        let b = 2.0 * PI * n as f64 / height as f64;
        // projection from (0,0,0,1); the torus stays at height <= 1/√2
        let denom = 1.0 - s * b.sin();
        Quaternion::imag(s * a.cos(), s * a.sin(), s * b.cos()) / denom
    })
}
