//! The causal diamond of 1+1 Minkowski space in lightcone coordinates: the
//! unit square `[0,1]²` with `d(x, y) = √((y₁−x₁)(y₂−x₂))` when `x ≤ y`
//! componentwise and zero otherwise. The corners `(1,0)` and `(0,1)` are at
//! zero distance from everything and are identified as the spacelike
//! boundary point.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causet::{adjoin_boundary, Causet};
use crate::error::{Error, Result};

/// A point of the diamond in lightcone coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiamondPoint {
    pub u: f64,
    pub v: f64,
}

impl DiamondPoint {
    pub fn new(u: f64, v: f64) -> Self {
        Self { u, v }
    }

    fn check(self) -> Result<Self> {
        if (0.0..=1.0).contains(&self.u) && (0.0..=1.0).contains(&self.v) {
            Ok(self)
        } else {
            Err(Error::OutOfDiamond(self.u, self.v))
        }
    }
}

#[inline]
fn lorentz(p: DiamondPoint, q: DiamondPoint) -> f64 {
    if p.u <= q.u && p.v <= q.v {
        ((q.u - p.u) * (q.v - p.v)).sqrt()
    } else {
        0.0
    }
}

pub fn diamond_distance(p: DiamondPoint, q: DiamondPoint) -> Result<f64> {
    Ok(lorentz(p.check()?, q.check()?))
}

/// Closed-form distinction metric of the diamond: the largest distance
/// between either point and the four corner projections
/// `(min u, 0)`, `(1, max v)`, `(max u, 1)`, `(0, min v)`.
pub fn diamond_gamma(p: DiamondPoint, q: DiamondPoint) -> Result<f64> {
    let (p, q) = (p.check()?, q.check()?);
    let probes = [
        DiamondPoint::new(p.u.min(q.u), 0.0),
        DiamondPoint::new(1.0, p.v.max(q.v)),
        DiamondPoint::new(p.u.max(q.u), 1.0),
        DiamondPoint::new(0.0, p.v.min(q.v)),
    ];
    Ok(probes
        .iter()
        .flat_map(|&z| [lorentz(p, z), lorentz(q, z), lorentz(z, p), lorentz(z, q)])
        .fold(0.0, f64::max))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SampleMode {
    Grid,
    UniformRandom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SampleSpec {
    pub count: usize,
    pub seed: u64,
    pub mode: SampleMode,
    pub include_boundary_point: bool,
}

impl SampleSpec {
    pub fn uniform(count: usize, seed: u64) -> Self {
        Self { count, seed, mode: SampleMode::UniformRandom, include_boundary_point: false }
    }

    pub fn grid(count: usize) -> Self {
        Self { count, seed: 0, mode: SampleMode::Grid, include_boundary_point: false }
    }
}

/// Sample coordinates. Uniform samples with the same seed are nested: the
/// first `n` points of a larger draw are the draw of size `n`. Grid samples
/// are the full `k × k` grid on the closed square with `k = ⌊√count⌋`, so
/// they may hold fewer than `count` points.
pub fn sample_points(spec: &SampleSpec) -> Result<Vec<DiamondPoint>> {
    if spec.count == 0 {
        return Err(Error::InvalidParameter("sample count must be positive".into()));
    }
    Ok(match spec.mode {
        SampleMode::UniformRandom => {
            let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
            (0..spec.count).map(|_| DiamondPoint::new(rng.gen(), rng.gen())).collect()
        }
        SampleMode::Grid => {
            let side = ((spec.count as f64).sqrt().floor() as usize).max(1);
            if side == 1 {
                vec![DiamondPoint::new(0.5, 0.5)]
            } else {
                let step = 1.0 / (side - 1) as f64;
                (0..side)
                    .flat_map(|i| (0..side).map(move |j| DiamondPoint::new(i as f64 * step, j as f64 * step)))
                    .collect()
            }
        }
    })
}

/// Induced causet on the given points, quotiented so that points at zero
/// distance from everything collapse, optionally with a boundary point
/// adjoined when none is present yet.
pub fn causet_from_points(points: &[DiamondPoint], include_boundary_point: bool) -> Result<Causet> {
    for p in points {
        p.check()?;
    }
    let n = points.len();
    let d: Vec<f64> = (0..n)
        .into_par_iter()
        .flat_map_iter(|i| points.iter().map(move |&q| lorentz(points[i], q)))
        .collect();
    let labels = (0..n).map(|i| i.to_string()).collect();
    let (c, _) = Causet::from_flat(labels, d).quotient(0.0);
    if include_boundary_point && !c.has_boundary() {
        adjoin_boundary(&c)
    } else {
        Ok(c)
    }
}

pub fn sample_causet(spec: &SampleSpec) -> Result<Causet> {
    causet_from_points(&sample_points(spec)?, spec.include_boundary_point)
}

/// Least-squares fit of `log γ(base, base + r·dir)` against `log r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScalingFit {
    pub exponent: f64,
    /// `(separation, γ)` per radius.
    pub samples: Vec<(f64, f64)>,
}

pub fn gamma_scaling_exponent(direction: (f64, f64), base: DiamondPoint, radii: &[f64]) -> Result<ScalingFit> {
    if radii.len() < 3 {
        return Err(Error::DegenerateFit(format!("need at least 3 radii, got {}", radii.len())));
    }
    if radii.iter().any(|&r| !(r > 0.0)) || radii.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::DegenerateFit("radii must be positive and strictly decreasing".into()));
    }
    let norm = direction.0.hypot(direction.1);
    if !(norm > 0.0) {
        return Err(Error::DegenerateFit("direction must be nonzero".into()));
    }
    let (du, dv) = (direction.0 / norm, direction.1 / norm);
    let mut samples = Vec::with_capacity(radii.len());
    for &r in radii {
        let q = DiamondPoint::new(base.u + r * du, base.v + r * dv);
        samples.push((r, diamond_gamma(base, q)?));
    }
    if samples.iter().any(|&(_, g)| !(g > 0.0)) {
        return Err(Error::DegenerateFit("zero distinction distance along direction".into()));
    }
    let xs: Vec<f64> = samples.iter().map(|s| s.0.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|s| s.1.ln()).collect();
    let k = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / k;
    let my = ys.iter().sum::<f64>() / k;
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    Ok(ScalingFit { exponent: sxy / sxx, samples })
}
