//! Discrete nets of constant mean curvature in R^3.

use std::f64::consts::PI;

use nalgebra::{Matrix3, Vector3};

use crate::crossratio::cross_ratio;
use crate::darboux::{bianchi_fourth, darboux, DarbouxParams};
use crate::error::{Error, Result, VertexIndex};
use crate::hexa::{face_is_isosceles, GEOM_TOL};
use crate::lattice::{cylinder_step, gen_cylinder, Direction, Edge, Net};
use crate::quat::Quaternion;

/// An isothermic net together with its parallel cmc net: a Christoffel
/// transform at constant distance `1/|H|`, which is also a Darboux
/// transform with parameter `lambda_p = lambda_c / H²`.
#[derive(Clone, Debug, PartialEq)]
pub struct CmcPair {
    pub f: Net,
    pub fp: Net,
    /// Mean curvature, reported non-negative.
    pub h: f64,
    pub lambda_p: f64,
    pub lambda_c: f64,
}

impl CmcPair {
    /// The same pair with the roles of the net and its parallel net
    /// exchanged.
    pub fn swapped(&self) -> CmcPair {
        CmcPair {
            f: self.fp.clone(),
            fp: self.f.clone(),
            ..*self
        }
    }

    /// Both nets on one period of the universal cover.
    pub fn unrolled(&self) -> CmcPair {
        CmcPair {
            f: self.f.unrolled(),
            fp: self.fp.unrolled(),
            ..*self
        }
    }
}

/// Outcome of [`verify_cmc`].
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CmcReport {
    pub h: f64,
    pub lambda_p: f64,
    pub lambda_c: f64,
    /// Largest `|lambda_c ΔF ΔF^p ∓ 1|`.
    pub christoffel_residual: f64,
    /// Relative spread of the vertex distances `|F - F^p|`.
    pub distance_spread: f64,
    /// Largest relative deviation of the edge cross ratios from `±lambda_p`.
    pub darboux_residual: f64,
}

fn violation(condition: &'static str, residual: f64) -> Error {
    Error::CmcViolation { condition, residual }
}

/// Checks that `fp` is a parallel cmc net of `f` and returns the mean
/// curvature and both parameters. Failures name the violated condition:
/// `"sphere"`, `"christoffel"`, `"distance"` or `"darboux"`.
pub fn verify_cmc(f: &Net, fp: &Net, tol: f64) -> Result<CmcReport> {
    if f.window() != fp.window() {
        return Err(Error::WindowMismatch);
    }
    f.require_imaginary(tol)?;
    fp.require_imaginary(tol)?;
    let edges = f.window().edges();
    let delta =
        |net: &Net, e: &Edge| -> Result<Quaternion> { Ok(net.value(e.to.0, e.to.1)? - net.value(e.from.0, e.from.1)?) };

    // a parallel net collapsing to a point cannot be a Christoffel dual
    let scale_p = fp.diameter();
    for e in &edges {
        let d = delta(fp, e)?;
        if d.norm() <= tol * scale_p.max(f64::MIN_POSITIVE) {
            return Err(violation("sphere", d.norm()));
        }
    }

    let e0 = edges.first().expect("a window has edges");
    let product = delta(f, e0)? * delta(fp, e0)?;
    let lambda_c = e0.direction.sign() / product.w;
    if !lambda_c.is_finite() {
        return Err(violation("christoffel", f64::INFINITY));
    }
    let mut christoffel_residual: f64 = 0.0;
    for e in &edges {
        let p = delta(f, e)? * delta(fp, e)? * lambda_c;
        christoffel_residual = christoffel_residual.max((p - Quaternion::real(e.direction.sign())).norm());
    }
    if !(christoffel_residual <= tol) {
        return Err(violation("christoffel", christoffel_residual));
    }

    let distances: Vec<f64> = f
        .values()
        .iter()
        .zip(fp.values())
        .map(|(a, b)| a.distance(*b))
        .collect();
    let d0 = distances[0];
    if d0 == 0.0 {
        return Err(violation("distance", 0.0));
    }
    let distance_spread = distances.iter().map(|d| (d - d0).abs()).fold(0.0, f64::max) / d0;
    if !(distance_spread <= tol) {
        return Err(violation("distance", distance_spread));
    }
    let h = 1.0 / d0;

    let edge_ratio = |e: &Edge| -> Result<(f64, f64)> {
        let dv = cross_ratio(
            f.value(e.from.0, e.from.1)?,
            fp.value(e.from.0, e.from.1)?,
            fp.value(e.to.0, e.to.1)?,
            f.value(e.to.0, e.to.1)?,
        )?;
        Ok((dv.re * e.direction.sign(), dv.im))
    };
    let (lambda_p, _) = edge_ratio(e0)?;
    let mut darboux_residual = (lambda_p - lambda_c / (h * h)).abs() / lambda_p.abs().max(1.0);
    for e in &edges {
        let (re, im) = edge_ratio(e)?;
        darboux_residual = darboux_residual.max((re - lambda_p).hypot(im) / lambda_p.abs().max(1.0));
    }
    if !(darboux_residual <= tol) {
        return Err(violation("darboux", darboux_residual));
    }
    Ok(CmcReport {
        h,
        lambda_p,
        lambda_c,
        christoffel_residual,
        distance_spread,
        darboux_residual,
    })
}

/// The square-faced cylinder of radius `r` with its antipodal parallel
/// net; `H = 1/(2r)`.
pub fn make_cmc_cylinder(width: usize, height: usize, r: f64) -> Result<CmcPair> {
    let f = gen_cylinder(width, height, r)?;
    let h = cylinder_step(width, r);
    let fp = Net::from_fn(*f.window(), |m, n| {
        let t = 2.0 * PI * m as f64 / width as f64;
        Quaternion::imag(-r * t.cos(), -r * t.sin(), n as f64 * h)
    })?;
    let report = verify_cmc(&f, &fp, GEOM_TOL)?;
    Ok(CmcPair {
        f,
        fp,
        h: report.h,
        lambda_p: report.lambda_p,
        lambda_c: report.lambda_c,
    })
}

/// Mean curvature at an interior vertex: the reciprocal distance to the
/// point `C` equidistant from the two `m`-neighbours and from the two
/// `n`-neighbours with `|F - C|² = (|F+m - C|² + |F+n - C|²)/2`. When `C`
/// recedes to infinity the curvature is `0`.
pub fn vertex_mean_curvature(net: &Net, m: i64, n: i64) -> Result<f64> {
    net.require_imaginary(GEOM_TOL)?;
    let w = net.window();
    let around = [(m, n), (m + 1, n), (m - 1, n), (m, n + 1), (m, n - 1)];
    if around.iter().any(|&(a, b)| !w.contains(a, b)) {
        return Err(Error::NotInterior { index: (m, n) });
    }
    // coordinates relative to F(m,n)
    let f = net[(m, n)];
    let v = |idx: VertexIndex| {
        let q = net[idx] - f;
        Vector3::new(q.x, q.y, q.z)
    };
    let (pm, mm, pn, mn) = (v((m + 1, n)), v((m - 1, n)), v((m, n + 1)), v((m, n - 1)));
    let a = Matrix3::from_rows(&[
        (2.0 * (pm - mm)).transpose(),
        (2.0 * (pn - mn)).transpose(),
        (pm + pn).transpose(),
    ]);
    let b = Vector3::new(
        pm.norm_squared() - mm.norm_squared(),
        pn.norm_squared() - mn.norm_squared(),
        0.5 * (pm.norm_squared() + pn.norm_squared()),
    );
    let svd = a.svd(true, true);
    let sigma_max = svd.singular_values.max();
    let rank = svd.singular_values.iter().filter(|s| **s > 1e-10 * sigma_max).count();
    if rank == 3 {
        let c = svd
            .solve(&b, 0.0)
            .map_err(|_| Error::UndefinedCurvature { index: (m, n) })?;
        return Ok(1.0 / c.norm());
    }
    if rank == 2 {
        let c = svd
            .solve(&b, 1e-10 * sigma_max)
            .map_err(|_| Error::UndefinedCurvature { index: (m, n) })?;
        let mismatch = (a * c - b).norm();
        if mismatch > 1e-8 * b.norm().max(sigma_max * sigma_max) {
            // no finite solution: the centre lies at infinity
            return Ok(0.0);
        }
    }
    Err(Error::UndefinedCurvature { index: (m, n) })
}

fn unit_direction(d: [f64; 3]) -> Result<Quaternion> {
    let q = Quaternion::imag(d[0], d[1], d[2]);
    let norm = q.norm();
    if !((norm - 1.0).abs() <= 1e-9) {
        return Err(Error::BadDirection { norm });
    }
    Ok(q)
}

/// Radius `(1/|H|) sqrt(1 - lambda/lambda_p)` of the sphere around
/// `F^p(seed)` carrying admissible seeds.
pub fn initial_sphere_radius(pair: &CmcPair, lambda: f64) -> Result<f64> {
    let value = 1.0 - lambda / pair.lambda_p;
    if !(value > 0.0) || (value.sqrt() <= GEOM_TOL) {
        return Err(Error::EmptyInitialSphere { value });
    }
    Ok(value.sqrt() / pair.h.abs())
}

/// Largest relative deviation of `|F̂ - F^p|²` from
/// `(1/H²)(1 - lambda/lambda_p)` over all vertices.
pub fn initial_sphere_residual(pair: &CmcPair, fhat: &Net, lambda: f64) -> Result<f64> {
    let expected = (1.0 - lambda / pair.lambda_p) / (pair.h * pair.h);
    let mut worst: f64 = 0.0;
    for (a, b) in fhat.values().iter().zip(pair.fp.values()) {
        worst = worst.max(((*a - *b).norm_sqr() - expected).abs() / expected.abs().max(f64::MIN_POSITIVE));
    }
    Ok(worst)
}

/// A cmc Darboux transform with parameter `lambda`: the Darboux transform
/// of `F` seeded on the sphere of radius [`initial_sphere_radius`] around
/// `F^p(seed)` in direction `seed_direction`, with parallel net built by
/// Bianchi permutability from `F^p`.
pub fn cmc_darboux(pair: &CmcPair, lambda: f64, seed_index: VertexIndex, seed_direction: [f64; 3]) -> Result<CmcPair> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::ZeroParameter);
    }
    let dir = unit_direction(seed_direction)?;
    let rho = initial_sphere_radius(pair, lambda)?;
    let anchor = pair
        .fp
        .get(seed_index.0, seed_index.1)
        .ok_or(Error::OutOfWindow { index: seed_index })?;
    let fhat = darboux(
        &pair.f,
        &DarbouxParams {
            lambda,
            seed_index,
            seed_value: anchor + rho * dir,
        },
    )?;
    let fhat_p = bianchi_fourth(&pair.f, &fhat, &pair.fp, lambda, pair.lambda_p)?;

    let sphere = initial_sphere_residual(pair, &fhat, lambda)?;
    if !(sphere <= GEOM_TOL) {
        return Err(violation("initial_sphere", sphere));
    }
    let report = verify_cmc(&fhat, &fhat_p, GEOM_TOL)?;
    let h_shift = (report.h - pair.h.abs()).abs() / pair.h.abs();
    if !(h_shift <= GEOM_TOL) {
        return Err(violation("distance", h_shift));
    }
    Ok(CmcPair {
        f: fhat,
        fp: fhat_p,
        h: pair.h,
        lambda_p: report.lambda_p,
        lambda_c: report.lambda_c,
    })
}

/// Permutability for cmc transforms: from `lambda_i` cmc Darboux
/// transforms `t_i` of `pair`, the cmc net that is a `lambda2`-transform of
/// `t1` and a `lambda1`-transform of `t2`, with its parallel net.
pub fn cmc_bianchi(pair: &CmcPair, t1: &CmcPair, lambda1: f64, t2: &CmcPair, lambda2: f64) -> Result<CmcPair> {
    let fhat = bianchi_fourth(&pair.f, &t1.f, &t2.f, lambda1, lambda2)?;
    let fhat_p = bianchi_fourth(&pair.fp, &t1.fp, &t2.fp, lambda1, lambda2)?;
    for t in [t1, t2] {
        for (m, n) in fhat.window().vertices() {
            let face = [t.f[(m, n)], t.fp[(m, n)], fhat_p[(m, n)], fhat[(m, n)]];
            if !face_is_isosceles(&face, GEOM_TOL) {
                return Err(violation("trapezoid", f64::NAN));
            }
        }
    }
    let report = verify_cmc(&fhat, &fhat_p, GEOM_TOL)?;
    let h_shift = (report.h - pair.h.abs()).abs() / pair.h.abs();
    if !(h_shift <= GEOM_TOL) {
        return Err(violation("distance", h_shift));
    }
    Ok(CmcPair {
        f: fhat,
        fp: fhat_p,
        h: pair.h,
        lambda_p: report.lambda_p,
        lambda_c: report.lambda_c,
    })
}

/// The edge quadrilateral `(F, F^p, F^p+, F+)` of every edge.
pub fn edge_trapezoids(pair: &CmcPair) -> Result<Vec<([Quaternion; 4], Direction)>> {
    let mut out = Vec::new();
    for e in pair.f.window().edges() {
        out.push((
            [
                pair.f.value(e.from.0, e.from.1)?,
                pair.fp.value(e.from.0, e.from.1)?,
                pair.fp.value(e.to.0, e.to.1)?,
                pair.f.value(e.to.0, e.to.1)?,
            ],
            e.direction,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hexa::trapezoid_class;
    use crate::lattice::LatticeWindow;

    #[test]
    fn cylinder_pair_constants() {
        let pair = make_cmc_cylinder(8, 3, 1.0).unwrap();
        assert!((pair.h - 0.5).abs() < 1e-12);
        let h = cylinder_step(8, 1.0);
        assert!((pair.lambda_c - 1.0 / (h * h)).abs() < 1e-9);
        assert!((pair.lambda_p - 4.0 / (h * h)).abs() < 1e-9);
    }

    #[test]
    fn cylinder_edge_faces_are_isosceles() {
        let pair = make_cmc_cylinder(8, 3, 1.0).unwrap();
        for (face, _) in edge_trapezoids(&pair).unwrap() {
            assert!(face_is_isosceles(&face, 1e-9));
        }
        let [a, b, c, d] = edge_trapezoids(&pair).unwrap()[0].0;
        assert!(trapezoid_class(a, b, c, d).is_isosceles());
    }

    #[test]
    fn swapped_pair_verifies() {
        let pair = make_cmc_cylinder(6, 3, 2.0).unwrap();
        let s = pair.swapped();
        let report = verify_cmc(&s.f, &s.fp, 1e-9).unwrap();
        assert!((report.h - 0.25).abs() < 1e-12);
    }

    #[test]
    fn rescaled_dual_fails_distance() {
        let pair = make_cmc_cylinder(8, 3, 1.0).unwrap();
        let scaled = pair.fp.map(|q| q * 2.0);
        let err = verify_cmc(&pair.f, &scaled, 1e-8).unwrap_err();
        assert!(
            matches!(
                err,
                Error::CmcViolation {
                    condition: "distance",
                    ..
                }
            ),
            "{err:?}"
        );
    }

    #[test]
    fn cylinder_curvature() {
        let pair = make_cmc_cylinder(8, 4, 1.0).unwrap();
        for m in 0..8 {
            for n in 1..3 {
                let h = vertex_mean_curvature(&pair.f, m, n).unwrap();
                assert!((h - 0.5).abs() < 1e-9, "{h}");
            }
        }
        assert_eq!(
            vertex_mean_curvature(&pair.f, 0, 0),
            Err(Error::NotInterior { index: (0, 0) })
        );
    }

    #[test]
    fn flat_grid_has_zero_curvature() {
        let w = LatticeWindow::new(0, 0, 3, 3).unwrap();
        let net = Net::from_fn(w, |m, n| Quaternion::imag(0.0, m as f64, n as f64)).unwrap();
        assert_eq!(vertex_mean_curvature(&net, 1, 1).unwrap(), 0.0);
    }

    #[test]
    fn empty_initial_sphere() {
        let pair = make_cmc_cylinder(8, 3, 1.0).unwrap();
        assert!(matches!(
            cmc_darboux(&pair.unrolled(), 2.0 * pair.lambda_p, (0, 0), [1.0, 0.0, 0.0]),
            Err(Error::EmptyInitialSphere { .. })
        ));
        assert!(matches!(
            cmc_darboux(&pair.unrolled(), pair.lambda_p, (0, 0), [1.0, 0.0, 0.0]),
            Err(Error::EmptyInitialSphere { .. })
        ));
        assert!(matches!(
            cmc_darboux(&pair.unrolled(), 0.5 * pair.lambda_p, (0, 0), [1.0, 1.0, 0.0]),
            Err(Error::BadDirection { .. })
        ));
    }

    #[test]
    fn cmc_darboux_on_the_cylinder() {
        let pair = make_cmc_cylinder(8, 3, 1.0).unwrap().unrolled();
        let lambda = 0.5 * pair.lambda_p;
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let t = cmc_darboux(&pair, lambda, (2, 1), [s, 0.0, s]).unwrap();
        assert!((t.h - 0.5).abs() < 1e-12);
        let report = verify_cmc(&t.f, &t.fp, 1e-8).unwrap();
        assert!((report.h - 0.5).abs() < 1e-8);
    }
}
