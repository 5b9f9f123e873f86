//! Christoffel transform (dual net) of an isothermic net.

use std::collections::BTreeMap;

use crate::error::{Error, Result, VertexIndex};
use crate::lattice::{Direction, DualIndex, LatticeWindow, Net};
use crate::quat::Quaternion;

/// Relative seam tolerance for periodic nets.
pub const SEAM_TOL: f64 = 1e-8;

/// Cycle residuals above this multiple of the mean reciprocal edge length
/// mean the edge system cannot be integrated.
pub const INTEGRABILITY_TOL: f64 = 1e-6;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ChristoffelParams {
    pub lambda_c: f64,
    pub base_index: VertexIndex,
    pub base_value: Quaternion,
}

impl ChristoffelParams {
    /// Scaling `lambda_c`, with the dual vertex at the window origin placed
    /// at `0`.
    pub fn new(lambda_c: f64, window: &LatticeWindow) -> Self {
        Self {
            lambda_c,
            base_index: (window.m0, window.n0),
            base_value: Quaternion::ZERO,
        }
    }
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ChristoffelReport {
    pub max_closing_residual: f64,
    /// Largest disagreement between row-first and column-first
    /// integration, relative to the diameter of the dual.
    pub path_deviation: f64,
    /// Relative failure of a periodic dual to close; zero for open nets.
    pub seam_mismatch: f64,
}

/// Dual edge of the edge `delta` in `direction`.
pub fn dual_edge(delta: Quaternion, direction: Direction, lambda_c: f64) -> Result<Quaternion> {
    Ok(delta.inv()? * (direction.sign() / lambda_c))
}

fn edge(net: &Net, from: VertexIndex, to: VertexIndex) -> Result<Quaternion> {
    let d = net.value(to.0, to.1)? - net.value(from.0, from.1)?;
    if d.norm_sqr() == 0.0 {
        return Err(Error::ZeroEdge { index: from });
    }
    Ok(d)
}

/// `|1/a - 1/b + 1/c - 1/d|` for the oriented boundary edges
/// `a, b, c, d` of every elementary quadrilateral.
pub fn closing_residual(net: &Net) -> Result<BTreeMap<DualIndex, f64>> {
    net.window()
        .quads()
        .into_iter()
        .map(|q| {
            let [p0, p1, p2, p3] = q.corners();
            let a = edge(net, p0, p1)?;
            let b = edge(net, p1, p2)?;
            let c = edge(net, p2, p3)?;
            let d = edge(net, p3, p0)?;
            let r = a.inv()? - b.inv()? + c.inv()? - d.inv()?;
            Ok((q, r.norm()))
        })
        .collect()
}

fn mean_reciprocal_edge(net: &Net) -> Result<f64> {
    let edges = net.window().edges();
    let mut sum = 0.0;
    for e in &edges {
        sum += 1.0 / edge(net, e.from, e.to)?.norm();
    }
    Ok(sum / edges.len() as f64)
}

/// Integrates the dual edges over an open window, once moving along `m`
/// first and once along `n` first.
fn integrate(net: &Net, p: &ChristoffelParams) -> Result<(Net, Net)> {
    let w = *net.window();
    let (mb, nb) = p.base_index;
    let step = |from: VertexIndex, to: VertexIndex, dir: Direction| -> Result<Quaternion> {
        // dual increment along from -> to, whichever way the edge points
        let forward = match dir {
            Direction::M => from.0 < to.0,
            Direction::N => from.1 < to.1,
        };
        let (a, b) = if forward { (from, to) } else { (to, from) };
        let d = dual_edge(edge(net, a, b)?, dir, p.lambda_c)?;
        Ok(if forward { d } else { -d })
    };
    let walk = |start: VertexIndex,
                start_value: Quaternion,
                dir: Direction,
                out: &mut dyn FnMut(VertexIndex, Quaternion)|
     -> Result<()> {
        let (lo, hi) = match dir {
            Direction::M => (w.m0, w.m0 + w.width as i64 - 1),
            Direction::N => (w.n0, w.n0 + w.height as i64 - 1),
        };
        let at = |t: i64| match dir {
            Direction::M => (t, start.1),
            Direction::N => (start.0, t),
        };
        let s = match dir {
            Direction::M => start.0,
            Direction::N => start.1,
        };
        out(start, start_value);
        let mut v = start_value;
        for t in s..hi {
            v += step(at(t), at(t + 1), dir)?;
            out(at(t + 1), v);
        }
        v = start_value;
        for t in (lo..s).rev() {
            v += step(at(t + 1), at(t), dir)?;
            out(at(t), v);
        }
        Ok(())
    };
    let build = |first: Direction, second: Direction| -> Result<Net> {
        let mut values = vec![Quaternion::ZERO; w.len()];
        let mut spine = Vec::new();
        walk((mb, nb), p.base_value, first, &mut |i, v| spine.push((i, v)))?;
        for (i, v) in spine {
            walk(i, v, second, &mut |j, u| {
                values[w.offset(j.0, j.1).expect("inside the window")] = u;
            })?;
        }
        Net::new(w, values)
    };
    Ok((build(Direction::M, Direction::N)?, build(Direction::N, Direction::M)?))
}

/// Christoffel transform with edges `(1/lambda_c) (ΔF)^-1` along `m` and
/// `-(1/lambda_c) (ΔF)^-1` along `n`.
pub fn christoffel(net: &Net, p: &ChristoffelParams) -> Result<Net> {
    christoffel_with_report(net, p).map(|(dual, _)| dual)
}

pub fn christoffel_with_report(net: &Net, p: &ChristoffelParams) -> Result<(Net, ChristoffelReport)> {
    if p.lambda_c == 0.0 || !p.lambda_c.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let window = *net.window();
    if !window.contains(p.base_index.0, p.base_index.1) {
        return Err(Error::OutOfWindow { index: p.base_index });
    }
    let closing = closing_residual(net)?;
    let (worst, max_closing_residual) = closing.iter().map(|(d, r)| (*d, *r)).fold(
        (
            DualIndex {
                m: window.m0,
                n: window.n0,
            },
            0.0,
        ),
        |acc, x| if x.1 > acc.1 { x } else { acc },
    );
    if max_closing_residual > INTEGRABILITY_TOL * mean_reciprocal_edge(net)? {
        return Err(Error::NotIntegrable {
            residual: max_closing_residual,
            index: worst,
        });
    }

    let base = window.normalize(p.base_index.0, p.base_index.1).expect("checked above");
    let cover = net.unrolled();
    let params = ChristoffelParams { base_index: base, ..*p };
    let (row_first, column_first) = integrate(&cover, &params)?;
    let scale = row_first.diameter().max(f64::MIN_POSITIVE);
    let path_deviation = row_first.max_distance(&column_first)? / scale;

    let (dual, seam_mismatch) = if window.is_periodic() {
        let (dual, mismatch) = row_first.rewrap(&window)?;
        let relative = mismatch / scale;
        if relative > SEAM_TOL {
            return Err(Error::NotPeriodic { monodromy: relative });
        }
        (dual, relative)
    } else {
        (row_first, 0.0)
    };
    Ok((
        dual,
        ChristoffelReport {
            max_closing_residual,
            path_deviation,
            seam_mismatch,
        },
    ))
}

/// Largest deviation of the double dual from the net after the optimal
/// (mean) translation, relative to the diameter of the net.
pub fn dual_involution_check(net: &Net, lambda_c: f64) -> Result<f64> {
    let p = ChristoffelParams::new(lambda_c, net.window());
    let dual = christoffel(net, &p)?;
    let double = christoffel(&dual, &p)?;
    let count = net.values().len() as f64;
    let shift = net
        .values()
        .iter()
        .zip(double.values())
        .map(|(a, b)| *a - *b)
        .sum::<Quaternion>()
        / count;
    Ok(double.translate(shift).max_distance(net)? / net.diameter().max(f64::MIN_POSITIVE))
}

/// Largest `|lambda_c ΔF ΔF^c ∓ 1|` over all edges.
pub fn christoffel_relation_residual(net: &Net, dual: &Net, lambda_c: f64) -> Result<f64> {
    if net.window() != dual.window() {
        return Err(Error::WindowMismatch);
    }
    let mut worst: f64 = 0.0;
    for e in net.window().edges() {
        let product = edge(net, e.from, e.to)? * edge(dual, e.from, e.to)? * lambda_c;
        worst = worst.max((product - Quaternion::real(e.direction.sign())).norm());
    }
    Ok(worst)
}
