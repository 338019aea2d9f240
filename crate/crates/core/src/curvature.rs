//! Timelike triangles, realizability in the constant-curvature model spaces,
//! flat comparison triangles and curvature-bound checks against flat 1+1
//! Minkowski space.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causet::Causet;
use crate::error::{Error, Result};

fn check_sides(a: f64, b: f64, c: f64) -> Result<()> {
    if a > 0.0 && b > 0.0 && c > 0.0 {
        Ok(())
    } else {
        Err(Error::NonPositiveSide { a, b, c })
    }
}

/// Whether sides `a = d(x,y)`, `b = d(y,z)`, `c = d(x,z)` bound a timelike
/// triangle in the model space of curvature `k`: `a + b < c`, and `c < π/√k`
/// when `k > 0`.
pub fn realizable(a: f64, b: f64, c: f64, k: f64) -> Result<bool> {
    check_sides(a, b, c)?;
    Ok(a + b < c && (k <= 0.0 || c < std::f64::consts::PI / k.sqrt()))
}

/// Lorentzian distance in the `(t, x)` plane: `√(Δt² − Δx²)` for future
/// directed causal separation, zero otherwise.
pub fn minkowski_distance(p: (f64, f64), q: (f64, f64)) -> f64 {
    let dt = q.0 - p.0;
    let dx = q.1 - p.1;
    let s = dt * dt - dx * dx;
    if dt > 0.0 && s >= 0.0 {
        s.sqrt()
    } else {
        0.0
    }
}

/// Vertices of the flat comparison triangle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComparisonTriangle {
    pub x: (f64, f64),
    pub y: (f64, f64),
    pub z: (f64, f64),
}

/// `x̄ = (0,0)`, `z̄ = (c,0)` and `ȳ = (t, √(t² − a²))` with
/// `t = (c² + a² − b²)/(2c)`.
pub fn comparison_triangle_m0(a: f64, b: f64, c: f64) -> Result<ComparisonTriangle> {
    if !realizable(a, b, c, 0.0)? {
        return Err(Error::NotRealizable { a, b, c });
    }
    let t = (c * c + a * a - b * b) / (2.0 * c);
    let x = (t * t - a * a).max(0.0).sqrt();
    Ok(ComparisonTriangle { x: (0.0, 0.0), y: (t, x), z: (c, 0.0) })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Side {
    Xy,
    Yz,
    Xz,
}

impl Side {
    pub const ALL: [Side; 3] = [Side::Xy, Side::Yz, Side::Xz];
}

/// A point on a side, `t` the fraction of the side's length measured from
/// its past endpoint.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SideParam {
    pub side: Side,
    pub t: f64,
}

impl SideParam {
    pub fn new(side: Side, t: f64) -> Result<Self> {
        if (0.0..=1.0).contains(&t) {
            Ok(Self { side, t })
        } else {
            Err(Error::InvalidParameter(format!("side parameter {t} outside [0, 1]")))
        }
    }
}

/// The point of the comparison triangle at the given side parameter. Sides
/// are straight timelike segments, so proper time is affine along them.
pub fn comparison_point(tri: &ComparisonTriangle, p: SideParam) -> (f64, f64) {
    let (from, to) = match p.side {
        Side::Xy => (tri.x, tri.y),
        Side::Yz => (tri.y, tri.z),
        Side::Xz => (tri.x, tri.z),
    };
    if p.t == 0.0 {
        return from;
    }
    if p.t == 1.0 {
        return to;
    }
    (from.0 + p.t * (to.0 - from.0), from.1 + p.t * (to.1 - from.1))
}

/// Flat comparison distance from the point at `p` to the point at `q`.
pub fn comparison_distance_m0(a: f64, b: f64, c: f64, p: SideParam, q: SideParam) -> Result<f64> {
    let tri = comparison_triangle_m0(a, b, c)?;
    Ok(comparison_distance_on(&tri, (a, b, c), p, q))
}

fn comparison_distance_on(tri: &ComparisonTriangle, sides: (f64, f64, f64), p: SideParam, q: SideParam) -> f64 {
    let (pp, qq) = (comparison_point(tri, p), comparison_point(tri, q));
    // Vertex pairs return the side length itself rather than a recomputation.
    let vertex = |s: SideParam| match (s.side, s.t) {
        (Side::Xy | Side::Xz, t) if t == 0.0 => Some(0),
        (Side::Xy, t) if t == 1.0 => Some(1),
        (Side::Yz, t) if t == 0.0 => Some(1),
        (Side::Yz | Side::Xz, t) if t == 1.0 => Some(2),
        _ => None,
    };
    match (vertex(p), vertex(q)) {
        (Some(0), Some(1)) => sides.0,
        (Some(1), Some(2)) => sides.1,
        (Some(0), Some(2)) => sides.2,
        (Some(i), Some(j)) if j <= i => 0.0,
        _ => minkowski_distance(pp, qq),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundKind {
    /// Some admissible pair satisfies `d(p,q) <= H + tol`.
    Lower,
    /// Some admissible pair satisfies `d(p,q) >= H - tol`.
    Upper,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureConfig {
    pub k: f64,
    pub bound: BoundKind,
    pub tol: f64,
    /// Parameter pairs checked on every triangle.
    pub params: Vec<(SideParam, SideParam)>,
    /// At most this many triangles are checked, chosen by seeded sampling
    /// when there are more.
    pub max_triangles: usize,
    pub seed: u64,
}

impl CurvatureConfig {
    pub fn new(bound: BoundKind, tol: f64) -> Self {
        Self { k: 0.0, bound, tol, params: default_params(), max_triangles: 2000, seed: 0 }
    }
}

/// Pairs of points at fractions 1/4, 1/2, 3/4 on two different sides.
pub fn default_params() -> Vec<(SideParam, SideParam)> {
    let ts = [0.25, 0.5, 0.75];
    let mut out = Vec::new();
    for (i, &s1) in Side::ALL.iter().enumerate() {
        for &s2 in &Side::ALL[i + 1..] {
            for &t1 in &ts {
                for &t2 in &ts {
                    out.push((SideParam { side: s1, t: t1 }, SideParam { side: s2, t: t2 }));
                }
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Holds,
    Violated,
    Vacuous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParamCheck {
    pub d1: SideParam,
    pub d2: SideParam,
    pub status: CheckStatus,
    pub comparison: f64,
    /// Best admissible pair `(p, q, d(p,q))`: the one closest to satisfying
    /// the bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<(usize, usize, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TriangleRecord {
    pub vertices: [usize; 3],
    pub sides: [f64; 3],
    pub checks: Vec<ParamCheck>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureReport {
    pub bound: BoundKind,
    pub tol: f64,
    /// Number of realizable triangles of the host, `None` when the host was
    /// too large to enumerate and triangles were drawn at random instead.
    pub total_triangles: Option<usize>,
    pub triangles: Vec<TriangleRecord>,
    pub holds: usize,
    pub violated: usize,
    pub vacuous: usize,
}

impl CurvatureReport {
    pub fn passed(&self) -> bool {
        self.violated == 0
    }
}

/// Timelike triangles `(x, y, z)` of the host with `a + b < c`.
pub fn timelike_triangles(host: &Causet) -> Vec<[usize; 3]> {
    let n = host.n();
    (0..n)
        .into_par_iter()
        .flat_map_iter(|x| {
            (0..n).flat_map(move |y| (0..n).map(move |z| [x, y, z])).filter(|&[x, y, z]| {
                let (a, b, c) = (host.d(x, y), host.d(y, z), host.d(x, z));
                a > 0.0 && b > 0.0 && a + b < c
            })
        })
        .collect()
}

/// Hosts with more ordered triples than this are sampled, not enumerated.
const ENUMERATION_LIMIT: usize = 1 << 24;

/// Distinct realizable triangles found among uniformly drawn vertex triples,
/// giving up after `200·count` draws.
fn sample_triangles(host: &Causet, count: usize, rng: &mut ChaCha8Rng) -> Vec<[usize; 3]> {
    let n = host.n();
    let mut found = std::collections::BTreeSet::new();
    for _ in 0..count.saturating_mul(200) {
        if found.len() >= count {
            break;
        }
        let [x, y, z] = [rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(0..n)];
        let (a, b, c) = (host.d(x, y), host.d(y, z), host.d(x, z));
        if a > 0.0 && b > 0.0 && a + b < c {
            found.insert([x, y, z]);
        }
    }
    found.into_iter().collect()
}

/// Host points on the side from `u` to `v` at fraction `t`, within `tol` of
/// both `d(u,p) + d(p,v) = d(u,v)` and `d(u,p) = t·d(u,v)`.
fn on_side(host: &Causet, u: usize, v: usize, t: f64, tol: f64) -> Vec<usize> {
    let len = host.d(u, v);
    (0..host.n())
        .filter(|&p| {
            let (dp, pv) = (host.d(u, p), host.d(p, v));
            let on = (p == u || dp > 0.0) && (p == v || pv > 0.0);
            on && (dp + pv - len).abs() <= tol && (dp - t * len).abs() <= tol
        })
        .collect()
}

/// Checks the (O,F) comparison condition for every realizable timelike
/// triangle of the host (or a seeded sample of at most `max_triangles` of
/// them) at each configured parameter pair. A check is vacuous when the host
/// has no points on the sides at the requested parameters.
pub fn check_curvature_bound(host: &Causet, config: &CurvatureConfig) -> Result<CurvatureReport> {
    if config.k != 0.0 {
        return Err(Error::UnsupportedModel(config.k));
    }
    for (p, q) in &config.params {
        SideParam::new(p.side, p.t)?;
        SideParam::new(q.side, q.t)?;
    }
    let n = host.n();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (mut triangles, total) = if n.pow(3) <= ENUMERATION_LIMIT {
        let all = timelike_triangles(host);
        let total = all.len();
        (all, Some(total))
    } else {
        (sample_triangles(host, config.max_triangles, &mut rng), None)
    };
    if triangles.len() > config.max_triangles {
        triangles.shuffle(&mut rng);
        triangles.truncate(config.max_triangles);
        triangles.sort_unstable();
    }
    let records: Vec<TriangleRecord> =
        triangles.par_iter().map(|&tri| check_triangle(host, tri, config)).collect();
    let count = |s: CheckStatus| records.iter().flat_map(|r| &r.checks).filter(|c| c.status == s).count();
    Ok(CurvatureReport {
        bound: config.bound,
        tol: config.tol,
        total_triangles: total,
        holds: count(CheckStatus::Holds),
        violated: count(CheckStatus::Violated),
        vacuous: count(CheckStatus::Vacuous),
        triangles: records,
    })
}

fn check_triangle(host: &Causet, [x, y, z]: [usize; 3], config: &CurvatureConfig) -> TriangleRecord {
    let sides = (host.d(x, y), host.d(y, z), host.d(x, z));
    let tri = comparison_triangle_m0(sides.0, sides.1, sides.2).expect("triangle is realizable");
    let endpoints = |s: Side| match s {
        Side::Xy => (x, y),
        Side::Yz => (y, z),
        Side::Xz => (x, z),
    };
    let checks = config
        .params
        .iter()
        .map(|&(d1, d2)| {
            let comparison = comparison_distance_on(&tri, sides, d1, d2);
            let (u1, v1) = endpoints(d1.side);
            let (u2, v2) = endpoints(d2.side);
            let ps = on_side(host, u1, v1, d1.t, config.tol);
            let qs = on_side(host, u2, v2, d2.t, config.tol);
            let mut best: Option<(usize, usize, f64)> = None;
            for &p in &ps {
                for &q in &qs {
                    let v = host.d(p, q);
                    let better = match (config.bound, best) {
                        (_, None) => true,
                        (BoundKind::Lower, Some(b)) => v < b.2,
                        (BoundKind::Upper, Some(b)) => v > b.2,
                    };
                    if better {
                        best = Some((p, q, v));
                    }
                }
            }
            let status = match best {
                None => CheckStatus::Vacuous,
                Some((_, _, v)) => {
                    let ok = match config.bound {
                        BoundKind::Lower => v <= comparison + config.tol,
                        BoundKind::Upper => v >= comparison - config.tol,
                    };
                    if ok {
                        CheckStatus::Holds
                    } else {
                        CheckStatus::Violated
                    }
                }
            };
            ParamCheck { d1, d2, status, comparison, witness: best }
        })
        .collect();
    TriangleRecord { vertices: [x, y, z], sides: [sides.0, sides.1, sides.2], checks }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sp(side: Side, t: f64) -> SideParam {
        SideParam::new(side, t).unwrap()
    }

    #[test]
    fn realizability() {
        assert!(realizable(1.0, 1.0, 3.0, 0.0).unwrap());
        assert!(!realizable(1.0, 1.0, 2.0, 0.0).unwrap());
        assert!(!realizable(1.0, 1.0, 3.0, 1.2).unwrap());
        assert!(realizable(1.0, 1.0, 3.0, -5.0).unwrap());
        assert!(realizable(0.0, 1.0, 3.0, 0.0).is_err());
    }

    #[test]
    fn comparison_triangle_example() {
        let t = comparison_triangle_m0(1.0, 1.0, 3.0).unwrap();
        assert_eq!(t.x, (0.0, 0.0));
        assert_eq!(t.z, (3.0, 0.0));
        assert!((t.y.0 - 1.5).abs() < 1e-15);
        assert!((t.y.1 - 1.25f64.sqrt()).abs() < 1e-15);
        assert!((minkowski_distance(t.x, t.y) - 1.0).abs() < 1e-12);
        assert!((minkowski_distance(t.y, t.z) - 1.0).abs() < 1e-12);
        assert!((minkowski_distance(t.x, t.z) - 3.0).abs() < 1e-12);
        assert!(matches!(comparison_triangle_m0(1.0, 1.0, 2.0), Err(Error::NotRealizable { .. })));
    }

    #[test]
    fn comparison_distance_examples() {
        let h = comparison_distance_m0(1.0, 1.0, 3.0, sp(Side::Xz, 0.5), sp(Side::Xy, 1.0)).unwrap();
        assert_eq!(h, 0.0);
        let h = comparison_distance_m0(1.0, 1.0, 3.0, sp(Side::Xy, 0.0), sp(Side::Yz, 1.0)).unwrap();
        assert_eq!(h, 3.0);
        let h = comparison_distance_m0(1.0, 1.0, 3.0, sp(Side::Xy, 1.0), sp(Side::Yz, 0.0)).unwrap();
        assert_eq!(h, 0.0);
        let h = comparison_distance_m0(1.2, 0.7, 2.5, sp(Side::Xy, 0.0), sp(Side::Xy, 1.0)).unwrap();
        assert_eq!(h, 1.2);
        assert!(SideParam::new(Side::Xy, 1.5).is_err());
    }

    #[test]
    fn tight_triangle_has_no_checks() {
        let c = Causet::new(vec![vec![0.0, 1.0, 2.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]).unwrap();
        let rep = check_curvature_bound(&c, &CurvatureConfig::new(BoundKind::Lower, 1e-9)).unwrap();
        assert_eq!(rep.total_triangles, Some(0));
        assert!(rep.triangles.is_empty());
        let mut cfg = CurvatureConfig::new(BoundKind::Lower, 1e-9);
        cfg.k = 1.0;
        assert_eq!(check_curvature_bound(&c, &cfg).unwrap_err(), Error::UnsupportedModel(1.0));
    }

    /// Flat triangle (1, 1, 3) with the midpoints of xy and xz added, then
    /// d(p, q) inflated between them.
    fn midpoint_host(inflate: f64) -> Causet {
        let tri = comparison_triangle_m0(1.0, 1.0, 3.0).unwrap();
        let p = comparison_point(&tri, sp(Side::Xy, 0.5));
        let q = comparison_point(&tri, sp(Side::Xz, 0.5));
        let pts = [tri.x, tri.y, tri.z, p, q];
        let mut rows: Vec<Vec<f64>> =
            pts.iter().map(|&a| pts.iter().map(|&b| minkowski_distance(a, b)).collect()).collect();
        rows[3][4] += inflate;
        Causet::new(rows).unwrap()
    }

    #[test]
    fn inflated_distance_breaks_lower_bound() {
        let mut cfg = CurvatureConfig::new(BoundKind::Lower, 1e-9);
        cfg.params = vec![(sp(Side::Xy, 0.5), sp(Side::Xz, 0.5))];
        let flat = check_curvature_bound(&midpoint_host(0.0), &cfg).unwrap();
        let rec = flat.triangles.iter().find(|r| r.vertices == [0, 1, 2]).unwrap();
        assert_eq!(rec.checks[0].status, CheckStatus::Holds);
        let bent = check_curvature_bound(&midpoint_host(0.5), &cfg).unwrap();
        let rec = bent.triangles.iter().find(|r| r.vertices == [0, 1, 2]).unwrap();
        assert_eq!(rec.checks[0].status, CheckStatus::Violated);
        assert_eq!(rec.checks[0].witness.map(|w| (w.0, w.1)), Some((3, 4)));
        assert!(!bent.passed());
    }
}
