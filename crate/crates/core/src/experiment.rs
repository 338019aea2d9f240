//! Experiment runners on the diamond producing CSV tables: GH convergence of
//! nested samples, γ scaling, flat curvature checks and entrywise limits.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causet::Causet;
use crate::curvature::{check_curvature_bound, BoundKind, CurvatureConfig};
use crate::diamond::{gamma_scaling_exponent, sample_causet, sample_points, DiamondPoint, SampleMode, SampleSpec};
use crate::error::{Error, Result};
use crate::gh::{distortion, gh_upper_from_with, Correspondence};
use crate::nets::{extract_net, limit_causet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Convergence,
    GammaScaling,
    Curvature,
    Limit,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    /// Only `"diamond"` is available.
    pub space: String,
    pub ladder: Vec<usize>,
    pub seed: u64,
    pub mode: SampleMode,
    /// Net scale for the convergence table.
    pub eps: f64,
    pub tol: f64,
    /// Record wall-clock times; off by default so that output is
    /// byte-for-byte reproducible.
    pub timing: bool,
    /// Improving moves allowed to the local search refining each GH bound.
    pub local_moves: usize,
    pub base: (f64, f64),
    pub direction: (f64, f64),
    pub radii: Vec<f64>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kind: ExperimentKind::Convergence,
            space: "diamond".into(),
            ladder: vec![25, 50, 100, 200, 400],
            seed: 7,
            mode: SampleMode::Grid,
            eps: 0.2,
            tol: 0.05,
            timing: false,
            local_moves: 20,
            base: (0.3, 0.3),
            direction: (1.0, 1.0),
            radii: vec![0.1, 0.05, 0.025, 0.0125],
        }
    }
}

impl ExperimentConfig {
    pub fn check(&self) -> Result<()> {
        if self.space != "diamond" {
            return Err(Error::InvalidParameter(format!("unknown space `{}`", self.space)));
        }
        let needs_ladder = self.kind != ExperimentKind::GammaScaling;
        if needs_ladder && self.ladder.is_empty() {
            return Err(Error::InvalidParameter("size ladder is empty".into()));
        }
        if self.ladder.iter().any(|&n| n == 0) || self.ladder.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidParameter("size ladder must be positive and strictly increasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceRow {
    pub n: usize,
    pub gh_upper: f64,
    pub net_size_at_eps: usize,
    pub runtime_ms: u64,
}

/// Raw sampled matrix without the quotient, so that point `i` of a smaller
/// nested sample is point `i` of every larger one.
fn raw_sample(points: &[DiamondPoint]) -> Result<Causet> {
    let rows = points
        .iter()
        .map(|&p| points.iter().map(|&q| crate::diamond::diamond_distance(p, q)).collect())
        .collect::<Result<Vec<Vec<f64>>>>()?;
    Causet::new(rows)
}

/// Upper bound on `d_GH` between the first `small.n()` points of `large` and
/// `large` itself: identity on the shared points, each new point paired with
/// the shared point whose profile against the shared points is closest, then
/// refined by local search.
pub fn nested_gh_upper(small: &Causet, large: &Causet, local_moves: usize) -> Result<f64> {
    let (m, n) = (small.n(), large.n());
    if m > n || m == 0 {
        return Err(Error::SizeMismatch(format!("cannot nest {m} points in {n}")));
    }
    let partner: Vec<usize> = (m..n)
        .into_par_iter()
        .map(|y| {
            (0..m)
                .map(|x| {
                    let cost = (0..m)
                        .map(|z| {
                            (small.d(x, z) - large.d(y, z)).abs().max((small.d(z, x) - large.d(z, y)).abs())
                        })
                        .fold(0.0, f64::max);
                    (cost, x)
                })
                .min_by(|a, b| a.0.total_cmp(&b.0))
                .expect("nonempty")
                .1
        })
        .collect();
    let pairs = (0..m).map(|i| (i, i)).chain(partner.iter().enumerate().map(|(k, &x)| (x, m + k)));
    let r = Correspondence::new(m, n, pairs)?;
    if local_moves == 0 {
        return distortion(&r, small, large);
    }
    Ok(gh_upper_from_with(small, large, &r, local_moves)?.upper)
}

/// Upper bound on `d_GH` between two point samples of the diamond: every
/// point paired with the nearest point of the other sample in coordinates,
/// then refined by local search.
pub fn coordinate_gh_upper(pa: &[DiamondPoint], pb: &[DiamondPoint], local_moves: usize) -> Result<f64> {
    let (a, b) = (raw_sample(pa)?, raw_sample(pb)?);
    let nearest = |p: DiamondPoint, qs: &[DiamondPoint]| {
        (0..qs.len())
            .min_by(|&i, &j| (qs[i].u - p.u).hypot(qs[i].v - p.v).total_cmp(&(qs[j].u - p.u).hypot(qs[j].v - p.v)))
            .expect("nonempty sample")
    };
    let pairs: Vec<(usize, usize)> = (0..pa.len())
        .map(|x| (x, nearest(pa[x], pb)))
        .chain((0..pb.len()).map(|y| (nearest(pb[y], pa), y)))
        .collect();
    let r = Correspondence::new(a.n(), b.n(), pairs)?;
    if local_moves == 0 {
        return distortion(&r, &a, &b);
    }
    Ok(gh_upper_from_with(&a, &b, &r, local_moves)?.upper)
}

/// For each ladder size `n`, the GH upper bound between the sample of size
/// `n` and the sample at the next ladder size (twice `n` for the last rung),
/// and the size of a greedy `eps`-net of the `n`-point sample. Uniform
/// samples are nested and compared through [`nested_gh_upper`]; grids through
/// [`coordinate_gh_upper`].
pub fn run_convergence(cfg: &ExperimentConfig) -> Result<Vec<ConvergenceRow>> {
    cfg.check()?;
    let top = 2 * *cfg.ladder.last().expect("checked nonempty");
    let spec = |count| SampleSpec { count, seed: cfg.seed, mode: cfg.mode, include_boundary_point: false };
    let stream = match cfg.mode {
        SampleMode::UniformRandom => sample_points(&spec(top))?,
        SampleMode::Grid => Vec::new(),
    };
    let points = |count: usize| match cfg.mode {
        SampleMode::UniformRandom => Ok(stream[..count].to_vec()),
        SampleMode::Grid => sample_points(&spec(count)),
    };
    let mut rows = Vec::with_capacity(cfg.ladder.len());
    for (i, &n) in cfg.ladder.iter().enumerate() {
        let start = Instant::now();
        let next = cfg.ladder.get(i + 1).copied().unwrap_or(2 * n);
        let (pa, pb) = (points(n)?, points(next)?);
        let gh_upper = match cfg.mode {
            SampleMode::UniformRandom => nested_gh_upper(&raw_sample(&pa)?, &raw_sample(&pb)?, cfg.local_moves)?,
            SampleMode::Grid => coordinate_gh_upper(&pa, &pb, cfg.local_moves)?,
        };
        let (q, _) = raw_sample(&pa)?.quotient(0.0);
        let net_size_at_eps = extract_net(&q, cfg.eps)?.len();
        let runtime_ms = if cfg.timing { start.elapsed().as_millis() as u64 } else { 0 };
        rows.push(ConvergenceRow { n, gh_upper, net_size_at_eps, runtime_ms });
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub radius: f64,
    pub gamma: f64,
    pub exponent: f64,
}

pub fn run_gamma_scaling(cfg: &ExperimentConfig) -> Result<Vec<ScalingRow>> {
    cfg.check()?;
    let fit = gamma_scaling_exponent(cfg.direction, DiamondPoint::new(cfg.base.0, cfg.base.1), &cfg.radii)?;
    Ok(fit.samples.iter().map(|&(radius, gamma)| ScalingRow { radius, gamma, exponent: fit.exponent }).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurvatureRow {
    pub n: usize,
    pub bound: BoundKind,
    pub triangles: usize,
    pub holds: usize,
    pub violated: usize,
    pub vacuous: usize,
}

pub fn run_curvature(cfg: &ExperimentConfig) -> Result<Vec<CurvatureRow>> {
    cfg.check()?;
    let mut rows = Vec::new();
    for &n in &cfg.ladder {
        let host = sample_causet(&SampleSpec { count: n, seed: cfg.seed, mode: cfg.mode, include_boundary_point: false })?;
        for bound in [BoundKind::Lower, BoundKind::Upper] {
            let mut cc = CurvatureConfig::new(bound, cfg.tol);
            cc.seed = cfg.seed;
            let rep = check_curvature_bound(&host, &cc)?;
            rows.push(CurvatureRow {
                n,
                bound,
                triangles: rep.triangles.len(),
                holds: rep.holds,
                violated: rep.violated,
                vacuous: rep.vacuous,
            });
        }
    }
    Ok(rows)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LimitRow {
    pub terms: usize,
    pub limit: f64,
    pub abs_error: f64,
}

/// Limits of the two-point chains `d = 1 + 1/m`, `m = 1..terms`, for each
/// ladder entry as the number of terms.
pub fn run_limit(cfg: &ExperimentConfig) -> Result<Vec<LimitRow>> {
    cfg.check()?;
    cfg.ladder
        .iter()
        .map(|&terms| {
            let seq: Vec<Causet> = (1..=terms)
                .map(|m| Causet::new(vec![vec![0.0, 1.0 + 1.0 / m as f64], vec![0.0, 0.0]]))
                .collect::<Result<_>>()?;
            let lim = limit_causet(&seq, cfg.tol)?;
            let limit = if lim.n() == 2 { lim.d(0, 1) } else { 0.0 };
            Ok(LimitRow { terms, limit, abs_error: (limit - 1.0).abs() })
        })
        .collect()
}

/// Runs the configured experiment and renders its table as CSV.
pub fn run_experiment_csv(cfg: &ExperimentConfig) -> Result<String> {
    match cfg.kind {
        ExperimentKind::Convergence => to_csv(&run_convergence(cfg)?),
        ExperimentKind::GammaScaling => to_csv(&run_gamma_scaling(cfg)?),
        ExperimentKind::Curvature => to_csv(&run_curvature(cfg)?),
        ExperimentKind::Limit => to_csv(&run_limit(cfg)?),
    }
}

pub fn to_csv<T: Serialize>(rows: &[T]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for row in rows {
        w.serialize(row).map_err(|e| Error::Format(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Format(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Format(e.to_string()))
}
