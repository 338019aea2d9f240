//! The distinction metric γ, the Noldus strong metric, Kuratowski vectors and
//! γ-balls.
//!
//! `γ(x, y) = max_z max(|d(x,z) - d(y,z)|, |d(z,x) - d(z,y)|)`. On a causet it
//! is a genuine metric and it coincides with the Noldus metric
//! `D(x, y) = max_z |d(z,x) + d(x,z) - d(z,y) - d(y,z)|`.

use rayon::prelude::*;

use crate::causet::{check_permutation, Causet};
use crate::error::{Error, Result};

/// Symmetric matrix of a metric on the points of a causet.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaMatrix {
    labels: Vec<String>,
    g: Vec<f64>,
}

impl GammaMatrix {
    pub(crate) fn from_upper(labels: Vec<String>, f: impl Fn(usize, usize) -> f64 + Sync) -> Self {
        let n = labels.len();
        let upper: Vec<Vec<f64>> =
            (0..n).into_par_iter().map(|i| ((i + 1)..n).map(|j| f(i, j)).collect()).collect();
        let mut g = vec![0.0; n * n];
        for (i, row) in upper.iter().enumerate() {
            for (off, &v) in row.iter().enumerate() {
                let j = i + 1 + off;
                g[i * n + j] = v;
                g[j * n + i] = v;
            }
        }
        Self { labels, g }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.g[i * self.n() + j]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.g.chunks(self.n().max(1)).map(|r| r.to_vec()).collect()
    }

    pub fn diameter(&self) -> f64 {
        self.g.iter().copied().fold(0.0, f64::max)
    }

    /// Smallest positive off-diagonal value, `None` for fewer than two points.
    pub fn min_positive(&self) -> Option<f64> {
        self.g.iter().copied().filter(|&v| v > 0.0).reduce(f64::min)
    }

    /// Points within distance `r` of `center` (`<= r` when `closed`).
    pub fn ball(&self, center: usize, r: f64, closed: bool) -> Vec<usize> {
        (0..self.n())
            .filter(|&z| {
                let v = self.get(center, z);
                if closed {
                    v <= r
                } else {
                    v < r
                }
            })
            .collect()
    }

    /// Classical Hausdorff distance between two point sets.
    pub fn hausdorff(&self, a: &[usize], b: &[usize]) -> Result<f64> {
        if a.is_empty() || b.is_empty() {
            return Err(Error::EmptySet);
        }
        for &i in a.iter().chain(b) {
            if i >= self.n() {
                return Err(Error::IndexOutOfRange { index: i, n: self.n() });
            }
        }
        let one_sided = |from: &[usize], to: &[usize]| {
            from.iter()
                .map(|&p| to.iter().map(|&q| self.get(p, q)).fold(f64::INFINITY, f64::min))
                .fold(0.0, f64::max)
        };
        Ok(one_sided(a, b).max(one_sided(b, a)))
    }
}

fn distinction(c: &Causet, x: usize, y: usize) -> f64 {
    (0..c.n())
        .map(|z| (c.d(x, z) - c.d(y, z)).abs().max((c.d(z, x) - c.d(z, y)).abs()))
        .fold(0.0, f64::max)
}

/// The distinction metric, by direct enumeration over probe points.
pub fn gamma(c: &Causet) -> GammaMatrix {
    GammaMatrix::from_upper(c.labels().to_vec(), |i, j| distinction(c, i, j))
}

/// The Noldus strong metric.
pub fn noldus(c: &Causet) -> GammaMatrix {
    GammaMatrix::from_upper(c.labels().to_vec(), |x, y| {
        (0..c.n())
            .map(|z| (c.d(z, x) + c.d(x, z) - c.d(z, y) - c.d(y, z)).abs())
            .fold(0.0, f64::max)
    })
}

/// Kuratowski image of a point: its future profile `d(x, s)` and past profile
/// `d(s, x)` over an ordered reference set.
#[derive(Debug, Clone, PartialEq)]
pub struct KuratowskiVector {
    pub point: usize,
    pub future: Vec<f64>,
    pub past: Vec<f64>,
}

impl KuratowskiVector {
    /// Sup-norm distance between the concatenated profiles.
    pub fn sup_distance(&self, other: &KuratowskiVector) -> f64 {
        self.future
            .iter()
            .zip(&other.future)
            .chain(self.past.iter().zip(&other.past))
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }
}

pub fn kuratowski_embed(c: &Causet, ordering: &[usize]) -> Result<Vec<KuratowskiVector>> {
    check_permutation(ordering, c.n())?;
    Ok((0..c.n())
        .map(|x| KuratowskiVector {
            point: x,
            future: ordering.iter().map(|&s| c.d(x, s)).collect(),
            past: ordering.iter().map(|&s| c.d(s, x)).collect(),
        })
        .collect())
}

pub fn gamma_ball(c: &Causet, center: usize, r: f64, closed: bool) -> Result<Vec<usize>> {
    c.check_index(center)?;
    Ok((0..c.n())
        .filter(|&z| {
            let v = distinction(c, center, z);
            if closed {
                v <= r
            } else {
                v < r
            }
        })
        .collect())
}

/// Hausdorff distance between `a` and `b` under the distinction metric of `z`.
pub fn hausdorff_gamma(z: &Causet, a: &[usize], b: &[usize]) -> Result<f64> {
    gamma(z).hausdorff(a, b)
}
