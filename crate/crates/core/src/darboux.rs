//! Darboux transforms, Ribaucour sphere congruences and the permutability
//! constructions.

use std::collections::BTreeMap;

use crate::christoffel::{christoffel, ChristoffelParams, SEAM_TOL};
use crate::crossratio::cross_ratio;
use crate::error::{Error, Result, VertexIndex};
use crate::hexa::{diameter, fit_carrier, solve_vertex, Carrier, Slot, GEOM_TOL};
use crate::lattice::{Direction, DualIndex, Net};
use crate::quat::Quaternion;

/// Relative disagreement tolerated between the values a vertex receives
/// from two neighbours during the sweep.
pub const CONSISTENCY_TOL: f64 = 1e-6;

/// Relative tolerance for the post-construction checks of the
/// permutability theorems.
pub const PERMUTABILITY_TOL: f64 = 1e-6;

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DarbouxParams {
    pub lambda: f64,
    pub seed_index: VertexIndex,
    pub seed_value: Quaternion,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct DarbouxReport {
    /// Largest relative disagreement between the two propagation orders.
    pub max_consistency: f64,
    /// Largest relative deviation of the edge cross ratios from `±lambda`.
    pub max_riccati_residual: f64,
    /// Relative failure to close across a periodic seam; zero for open nets.
    pub seam_mismatch: f64,
}

fn check_parameter(lambda: f64) -> Result<()> {
    if lambda == 0.0 || !lambda.is_finite() {
        return Err(Error::ZeroParameter);
    }
    Ok(())
}

/// Largest relative deviation of `DV(F, F̂, F̂+, F+)` from `lambda` on
/// `m`-edges and from `-lambda` on `n`-edges, with the start of the worst
/// edge.
pub fn riccati_residual(f: &Net, fhat: &Net, lambda: f64) -> Result<(f64, VertexIndex)> {
    if f.window() != fhat.window() {
        return Err(Error::WindowMismatch);
    }
    let w = f.window();
    let mut worst = (0.0, (w.m0, w.n0));
    for e in w.edges() {
        let dv = cross_ratio(
            f.value(e.from.0, e.from.1)?,
            fhat.value(e.from.0, e.from.1)?,
            fhat.value(e.to.0, e.to.1)?,
            f.value(e.to.0, e.to.1)?,
        )
        .map_err(|source| Error::SolverDegeneracy {
            index: e.from,
            source: Box::new(source),
        })?;
        let target = e.direction.sign() * lambda;
        let r = (dv.re - target).hypot(dv.im) / target.abs().max(1.0);
        if r > worst.0 || r.is_nan() {
            worst = (r, e.from);
        }
    }
    Ok(worst)
}

/// Darboux transform with parameter `lambda` through the seed point.
pub fn darboux(net: &Net, p: &DarbouxParams) -> Result<Net> {
    darboux_with_report(net, p).map(|(fhat, _)| fhat)
}

pub fn darboux_with_report(net: &Net, p: &DarbouxParams) -> Result<(Net, DarbouxReport)> {
    check_parameter(p.lambda)?;
    let window = *net.window();
    let seed = window
        .normalize(p.seed_index.0, p.seed_index.1)
        .ok_or(Error::OutOfWindow { index: p.seed_index })?;
    let f0 = net[seed];
    if p.seed_value.distance(f0) <= 1e-12 * f0.norm().max(1.0) {
        return Err(Error::SeedOnNet { index: seed });
    }

    let cover = net.unrolled();
    let (sweep, max_consistency) = sweep(&cover, p.lambda, seed, p.seed_value)?;
    let (max_riccati_residual, _) = riccati_residual(&cover, &sweep, p.lambda)?;

    let (fhat, seam_mismatch) = if window.is_periodic() {
        let (fhat, mismatch) = sweep.rewrap(&window)?;
        let relative = mismatch / sweep.diameter().max(1.0);
        if relative > SEAM_TOL {
            return Err(Error::NotPeriodic { monodromy: relative });
        }
        (fhat, relative)
    } else {
        (sweep, 0.0)
    };
    Ok((
        fhat,
        DarbouxReport {
            max_consistency,
            max_riccati_residual,
            seam_mismatch,
        },
    ))
}

/// Solves the Riccati system vertex by vertex in order of lattice distance
/// from the seed. Each vertex is computed from every neighbour that is one
/// step closer to the seed and the candidates are compared.
fn sweep(net: &Net, lambda: f64, seed: VertexIndex, seed_value: Quaternion) -> Result<(Net, f64)> {
    let w = *net.window();
    let dist = |(m, n): VertexIndex| (m - seed.0).abs() + (n - seed.1).abs();
    let mut order: Vec<VertexIndex> = w.vertices().collect();
    order.sort_by_key(|&v| dist(v));

    let mut fhat: Vec<Option<Quaternion>> = vec![None; w.len()];
    let slot = |v: VertexIndex| w.offset(v.0, v.1).expect("inside the window");
    fhat[slot(seed)] = Some(seed_value);
    let mut max_consistency: f64 = 0.0;

    for &v in &order[1..] {
        let fv = net[v];
        let d = dist(v);
        let mut first: Option<Quaternion> = None;
        let neighbours = [
            ((v.0 - 1, v.1), Direction::M, true),
            ((v.0 + 1, v.1), Direction::M, false),
            ((v.0, v.1 - 1), Direction::N, true),
            ((v.0, v.1 + 1), Direction::N, false),
        ];
        for (u, dir, u_before_v) in neighbours {
            if !w.contains(u.0, u.1) || dist(u) != d - 1 {
                continue;
            }
            let fu = net[u];
            let gu = fhat[slot(u)].expect("closer vertices are done");
            let ratio = dir.sign() * lambda;
            let candidate = if u_before_v {
                solve_vertex(Slot::Third, ratio, [fu, gu, fv])
            } else {
                solve_vertex(Slot::Second, ratio, [fv, gu, fu])
            }
            .map_err(|source| Error::SolverDegeneracy {
                index: v,
                source: Box::new(source),
            })?;
            match first {
                None => first = Some(candidate),
                Some(c) => {
                    let dev = c.distance(candidate) / c.norm().max(1.0);
                    if dev > CONSISTENCY_TOL || dev.is_nan() {
                        return Err(Error::Inconsistent {
                            index: v,
                            deviation: dev,
                        });
                    }
                    max_consistency = max_consistency.max(dev);
                }
            }
        }
        let value = first.expect("every vertex has a neighbour nearer the seed");
        if !value.is_finite() {
            return Err(Error::SolverDegeneracy {
                index: v,
                source: Box::new(Error::NoSolution { ratio: lambda }),
            });
        }
        fhat[slot(v)] = Some(value);
    }
    let values = fhat.into_iter().map(|q| q.expect("all vertices swept")).collect();
    Ok((Net::new(w, values)?, max_consistency))
}

/// The 2-spheres (or planes) carrying the elementary hexahedra of a
/// Darboux pair.
#[derive(Clone, Debug, PartialEq)]
pub struct RibaucourCongruence {
    pub spheres: BTreeMap<DualIndex, Carrier>,
    /// Fit residual per hexahedron, relative to its diameter.
    pub residuals: BTreeMap<DualIndex, f64>,
    /// Largest relative distance of an interior point pair from one of its
    /// four adjacent spheres.
    pub max_vertex_residual: f64,
}

impl RibaucourCongruence {
    pub fn max_residual(&self) -> f64 {
        self.residuals.values().copied().fold(0.0, f64::max)
    }
}

pub fn ribaucour_congruence(f: &Net, fhat: &Net) -> Result<RibaucourCongruence> {
    ribaucour_congruence_with_tol(f, fhat, GEOM_TOL)
}

pub fn ribaucour_congruence_with_tol(f: &Net, fhat: &Net, tol: f64) -> Result<RibaucourCongruence> {
    if f.window() != fhat.window() {
        return Err(Error::WindowMismatch);
    }
    let mut spheres = BTreeMap::new();
    let mut residuals = BTreeMap::new();
    for d in f.window().quads() {
        let a = f.quad(d)?;
        let b = fhat.quad(d)?;
        let points = [a[0], a[1], a[2], a[3], b[0], b[1], b[2], b[3]];
        let (carrier, residual) = match fit_carrier(&points, tol) {
            Ok(fit) => fit,
            Err(Error::NotCospherical { residual }) => return Err(Error::NotDarbouxPair { residual, index: d }),
            Err(e) => return Err(e),
        };
        if residual > tol {
            return Err(Error::NotDarbouxPair { residual, index: d });
        }
        spheres.insert(d, carrier);
        residuals.insert(d, residual);
    }

    let mut max_vertex_residual: f64 = 0.0;
    for (m, n) in f.window().vertices() {
        let around = [
            DualIndex { m, n },
            DualIndex { m: m - 1, n },
            DualIndex { m: m - 1, n: n - 1 },
            DualIndex { m, n: n - 1 },
        ];
        let carriers: Vec<(DualIndex, &Carrier)> =
            around.iter().filter_map(|d| spheres.get(d).map(|s| (*d, s))).collect();
        if carriers.len() < 4 {
            continue;
        }
        for (d, s) in carriers {
            let points = [f.quad(d)?, fhat.quad(d)?].concat();
            let scale = diameter(&points).max(f64::MIN_POSITIVE);
            for q in [f[(m, n)], fhat[(m, n)]] {
                max_vertex_residual = max_vertex_residual.max(s.distance(q) / scale);
            }
        }
    }
    Ok(RibaucourCongruence {
        spheres,
        residuals,
        max_vertex_residual,
    })
}

/// Residuals of a permutability construction.
#[derive(Copy, Clone, Debug, PartialEq)]
pub struct PermutabilityResiduals {
    /// Largest relative deviation of `DV(F, F̂2, F̂, F̂1)` from
    /// `lambda2 / lambda1`.
    pub ratio_spread: f64,
    /// `F̂` as a `lambda2`-transform of `F̂1`.
    pub from_first: f64,
    /// `F̂` as a `lambda1`-transform of `F̂2`.
    pub from_second: f64,
}

impl PermutabilityResiduals {
    pub fn max(&self) -> f64 {
        self.ratio_spread.max(self.from_first).max(self.from_second)
    }
}

fn pointwise_ratio_spread(nets: [&Net; 4], target: f64) -> Result<f64> {
    let [a, b, c, d] = nets;
    let mut worst: f64 = 0.0;
    for (m, n) in a.window().vertices() {
        let dv = cross_ratio(a[(m, n)], b[(m, n)], c[(m, n)], d[(m, n)])?;
        worst = worst.max((dv.re - target).hypot(dv.im) / target.abs().max(1.0));
    }
    Ok(worst)
}

pub fn permutability_residuals(
    f: &Net,
    first: &Net,
    second: &Net,
    fhat: &Net,
    lambda1: f64,
    lambda2: f64,
) -> Result<PermutabilityResiduals> {
    for other in [first, second, fhat] {
        if other.window() != f.window() {
            return Err(Error::WindowMismatch);
        }
    }
    Ok(PermutabilityResiduals {
        ratio_spread: pointwise_ratio_spread([f, second, fhat, first], lambda2 / lambda1)?,
        from_first: riccati_residual(first, fhat, lambda2)?.0,
        from_second: riccati_residual(second, fhat, lambda1)?.0,
    })
}

/// The fourth net of a Bianchi quadrilateral: given `lambda_i`-transforms
/// `F̂i` of `F`, the net `F̂` with `DV(F, F̂2, F̂, F̂1) = lambda2 / lambda1`
/// at every vertex. It is a `lambda2`-transform of `F̂1` and a
/// `lambda1`-transform of `F̂2`.
pub fn bianchi_fourth(f: &Net, first: &Net, second: &Net, lambda1: f64, lambda2: f64) -> Result<Net> {
    bianchi_fourth_with_report(f, first, second, lambda1, lambda2).map(|(fhat, _)| fhat)
}

pub fn bianchi_fourth_with_report(
    f: &Net,
    first: &Net,
    second: &Net,
    lambda1: f64,
    lambda2: f64,
) -> Result<(Net, PermutabilityResiduals)> {
    check_parameter(lambda1)?;
    check_parameter(lambda2)?;
    if (lambda1 - lambda2).abs() <= 1e-12 * lambda1.abs().max(lambda2.abs()) {
        return Err(Error::EqualParameters);
    }
    if first.window() != f.window() || second.window() != f.window() {
        return Err(Error::WindowMismatch);
    }
    let ratio = lambda2 / lambda1;
    let fhat = Net::try_from_fn(*f.window(), |m, n| {
        solve_vertex(Slot::Third, ratio, [f[(m, n)], second[(m, n)], first[(m, n)]]).map_err(|source| {
            Error::SolverDegeneracy {
                index: (m, n),
                source: Box::new(source),
            }
        })
    })?;
    let report = permutability_residuals(f, first, second, &fhat, lambda1, lambda2)?;
    if !(report.max() <= PERMUTABILITY_TOL) {
        return Err(Error::PermutabilityFailed { residual: report.max() });
    }
    Ok((fhat, report))
}

/// The seven further nets of a Bianchi cube.
#[derive(Clone, Debug, PartialEq)]
pub struct BianchiCube {
    pub f12: Net,
    pub f23: Net,
    pub f31: Net,
    pub fhat: Net,
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct CubeResiduals {
    /// Largest relative Riccati residual among the nine Darboux relations.
    pub darboux: f64,
    /// Largest deviation of the constant cross ratios on the three faces
    /// through `F̂`.
    pub ratio_spread: f64,
}

/// Builds `F̂12, F̂23, F̂31` from the three transforms of `F`, then the
/// eighth net `F̂` from `F̂3`, `F̂31` and `F̂23`.
pub fn bianchi_cube(f: &Net, transforms: [&Net; 3], lambdas: [f64; 3]) -> Result<(BianchiCube, CubeResiduals)> {
    let [f1, f2, f3] = transforms;
    let [l1, l2, l3] = lambdas;
    let f12 = bianchi_fourth(f, f1, f2, l1, l2)?;
    let f23 = bianchi_fourth(f, f2, f3, l2, l3)?;
    let f31 = bianchi_fourth(f, f3, f1, l3, l1)?;
    // F̂31 is the l1-transform and F̂23 the l2-transform of F̂3
    let fhat = bianchi_fourth(f3, &f31, &f23, l1, l2)?;

    let relations: [(&Net, &Net, f64); 9] = [
        (f1, &f12, l2),
        (f2, &f12, l1),
        (f2, &f23, l3),
        (f3, &f23, l2),
        (f3, &f31, l1),
        (f1, &f31, l3),
        (&f23, &fhat, l1),
        (&f31, &fhat, l2),
        (&f12, &fhat, l3),
    ];
    let mut darboux: f64 = 0.0;
    for (a, b, l) in relations {
        darboux = darboux.max(riccati_residual(a, b, l)?.0);
    }
    let faces: [([&Net; 4], f64); 3] = [
        ([f3, &f23, &fhat, &f31], l2 / l1),
        ([f1, &f31, &fhat, &f12], l3 / l2),
        ([f2, &f12, &fhat, &f23], l1 / l3),
    ];
    let mut ratio_spread: f64 = 0.0;
    for (nets, target) in faces {
        ratio_spread = ratio_spread.max(pointwise_ratio_spread(nets, target)?);
    }
    let residuals = CubeResiduals { darboux, ratio_spread };
    if !(darboux.max(ratio_spread) <= PERMUTABILITY_TOL) {
        return Err(Error::PermutabilityFailed {
            residual: darboux.max(ratio_spread),
        });
    }
    Ok((BianchiCube { f12, f23, f31, fhat }, residuals))
}

#[derive(Copy, Clone, Debug, PartialEq)]
pub struct ChristoffelDarbouxResiduals {
    /// Distance of `F^c + (F̂ - F)^-1` from an independently integrated
    /// dual of `F̂`, relative to the diameter of `F^c`.
    pub dual_deviation: f64,
    /// Riccati residual of the dual pair with parameter `lambda`.
    pub riccati: f64,
}

impl ChristoffelDarbouxResiduals {
    pub fn max(&self) -> f64 {
        self.dual_deviation.max(self.riccati)
    }
}

/// Checks that the duals of a Darboux pair, positioned by
/// `F̂^c = F^c + (F̂ - F)^-1`, form a Darboux pair with the same parameter.
/// Returns the largest deviation.
pub fn christoffel_darboux_check(f: &Net, fhat: &Net, lambda: f64, lambda_c: f64) -> Result<f64> {
    christoffel_darboux_residuals(f, fhat, lambda, lambda_c).map(|r| r.max())
}

pub fn christoffel_darboux_residuals(
    f: &Net,
    fhat: &Net,
    lambda: f64,
    lambda_c: f64,
) -> Result<ChristoffelDarbouxResiduals> {
    check_parameter(lambda)?;
    let params = ChristoffelParams::new(lambda_c, f.window());
    let fc = christoffel(f, &params)?;
    let mut positioned = Vec::with_capacity(f.values().len());
    for ((idx, a), b) in f.iter().zip(fhat.values()) {
        let g = *b - a;
        if g.norm_sqr() == 0.0 {
            return Err(Error::ZeroEdge { index: idx });
        }
        positioned.push(fc[idx] + g.inv()?);
    }
    let fhat_c = Net::new(*f.window(), positioned)?;
    let base = params.base_index;
    let independent = christoffel(
        fhat,
        &ChristoffelParams {
            base_value: fhat_c[base],
            ..params
        },
    )?;
    let dual_deviation = independent.max_distance(&fhat_c)? / fc.diameter().max(1.0);
    let (riccati, _) = riccati_residual(&fc, &fhat_c, lambda)?;
    Ok(ChristoffelDarbouxResiduals {
        dual_deviation,
        riccati,
    })
}
