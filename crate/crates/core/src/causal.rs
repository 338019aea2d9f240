//! Causal structure derived from the distance alone: the extended causal
//! relation J, time functions, chains, the length functional and maximality.

use serde::{Deserialize, Serialize};

use crate::causet::{check_permutation, Causet};
use crate::error::{Error, Result};

/// Strictness threshold for time-function comparisons on floating point data.
pub const TAU_STRICT_TOL: f64 = 1e-12;

/// `x <= y` in J: moving from `x` to `y` never decreases the distance from a
/// probe in the past nor increases the distance to a probe in the future.
pub fn causally_precedes(c: &Causet, x: usize, y: usize) -> bool {
    (0..c.n()).all(|p| c.d(p, y) >= c.d(p, x) && c.d(x, p) >= c.d(y, p))
}

/// The extended causal relation as a dense boolean matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CausalRelation {
    n: usize,
    related: Vec<bool>,
}

impl CausalRelation {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.related[x * self.n + y]
    }

    /// `x < y`: related and distinct.
    pub fn strictly(&self, x: usize, y: usize) -> bool {
        x != y && self.contains(x, y)
    }

    pub fn pairs(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        (0..n)
            .flat_map(|x| (0..n).map(move |y| (x, y)))
            .filter(|&(x, y)| self.contains(x, y))
            .collect()
    }

    /// `J⁺(x)`.
    pub fn future(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.contains(x, y)).collect()
    }

    /// `J⁻(x)`.
    pub fn past(&self, x: usize) -> Vec<usize> {
        (0..self.n).filter(|&y| self.contains(y, x)).collect()
    }
}

pub fn causal_relation(c: &Causet) -> CausalRelation {
    let n = c.n();
    let related = (0..n)
        .flat_map(|x| (0..n).map(move |y| (x, y)))
        .map(|(x, y)| causally_precedes(c, x, y))
        .collect();
    CausalRelation { n, related }
}

/// `τ(x) = α·½[Σₖ 2⁻ᵏ d(sₖ, x) − Σₖ 2⁻ᵏ d(x, sₖ)] + β` over an ordering
/// `s₁, s₂, …` of the points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeFunction {
    pub values: Vec<f64>,
    pub weights: Vec<f64>,
    pub alpha: f64,
    pub beta: f64,
}

impl TimeFunction {
    pub fn value(&self, x: usize) -> f64 {
        self.values[x]
    }

    /// Bound `M` with `τ` ranging in `[β − αM, β + αM]`: half the sum of
    /// weights times the diameter.
    pub fn bound(&self, diameter: f64) -> f64 {
        0.5 * self.weights.iter().sum::<f64>() * diameter
    }
}

fn raw_time(c: &Causet, ordering: &[usize], weights: &[f64], x: usize) -> f64 {
    let past: f64 = ordering.iter().zip(weights).map(|(&s, w)| w * c.d(s, x)).sum();
    let future: f64 = ordering.iter().zip(weights).map(|(&s, w)| w * c.d(x, s)).sum();
    0.5 * (past - future)
}

fn dyadic_weights(n: usize) -> Vec<f64> {
    (1..=n).map(|k| 0.5f64.powi(k as i32)).collect()
}

pub fn time_function(c: &Causet, ordering: &[usize], alpha: f64, beta: f64) -> Result<TimeFunction> {
    if !(alpha > 0.0) {
        return Err(Error::NonPositiveScale(alpha));
    }
    check_permutation(ordering, c.n())?;
    let weights = dyadic_weights(c.n());
    let values =
        (0..c.n()).map(|x| alpha * raw_time(c, ordering, &weights, x) + beta).collect();
    Ok(TimeFunction { values, weights, alpha, beta })
}

/// Time function rescaled so that `τ(x) = 0` and `τ(y) = 1`.
pub fn normalized_time_function(c: &Causet, ordering: &[usize], x: usize, y: usize) -> Result<TimeFunction> {
    c.check_index(x)?;
    c.check_index(y)?;
    let raw = time_function(c, ordering, 1.0, 0.0)?;
    let span = raw.values[y] - raw.values[x];
    if !(span > 0.0) {
        return Err(Error::NotAChain { from: x, to: y });
    }
    let alpha = 1.0 / span;
    let beta = -alpha * raw.values[x];
    time_function(c, ordering, alpha, beta)
}

/// A finite strictly J-increasing sequence of points.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chain {
    pub points: Vec<usize>,
    pub is_isochronal: bool,
}

/// Checks that `points` is isocausal (every earlier point strictly precedes
/// every later one in J) and flags isochronal chains (all ordered pairs
/// chronologically related). The first violating pair is the error witness.
pub fn is_chain(c: &Causet, points: &[usize]) -> Result<Chain> {
    if points.is_empty() {
        return Err(Error::EmptySet);
    }
    for &p in points {
        c.check_index(p)?;
    }
    let mut isochronal = true;
    for (i, &a) in points.iter().enumerate() {
        for &b in &points[i + 1..] {
            if a == b || !causally_precedes(c, a, b) {
                return Err(Error::NotAChain { from: a, to: b });
            }
            isochronal &= c.d(a, b) > 0.0;
        }
    }
    Ok(Chain { points: points.to_vec(), is_isochronal: isochronal })
}

/// Sum of consecutive distances: the length functional at its finest
/// partition.
pub fn chain_length(c: &Causet, chain: &Chain) -> f64 {
    chain.points.windows(2).map(|w| c.d(w[0], w[1])).sum()
}

/// Additivity of the distance over every ordered triple of chain points.
pub fn is_maximal(c: &Causet, chain: &Chain, tol: f64) -> bool {
    let p = &chain.points;
    let k = p.len();
    for a in 0..k {
        for b in (a + 1)..k {
            for e in (b + 1)..k {
                let lhs = c.d(p[a], p[b]) + c.d(p[b], p[e]);
                if (lhs - c.d(p[a], p[e])).abs() > tol {
                    return false;
                }
            }
        }
    }
    true
}

/// Chronological chain from `x` to `y` maximizing the sum of consecutive
/// distances, by longest-path dynamic programming on the DAG `I`. Sums within
/// `1e-12` of each other count as ties, broken in favour of more links.
pub fn longest_chain(c: &Causet, x: usize, y: usize) -> Result<Chain> {
    c.check_index(x)?;
    c.check_index(y)?;
    if !(c.d(x, y) > 0.0) {
        return Err(Error::NotChronological { x, y });
    }
    // Interior candidates of the chronological interval, sorted by distance
    // from `x`. That order is topological for I by the reverse triangle
    // inequality.
    let mut nodes: Vec<usize> =
        (0..c.n()).filter(|&z| c.d(x, z) > 0.0 && c.d(z, y) > 0.0).collect();
    nodes.sort_by(|&a, &b| c.d(x, a).total_cmp(&c.d(x, b)).then(a.cmp(&b)));
    nodes.insert(0, x);
    nodes.push(y);

    let k = nodes.len();
    let mut best = vec![(f64::NEG_INFINITY, 0usize); k];
    let mut prev = vec![usize::MAX; k];
    best[0] = (0.0, 0);
    for j in 1..k {
        for i in 0..j {
            let w = c.d(nodes[i], nodes[j]);
            if !(w > 0.0) || best[i].0 == f64::NEG_INFINITY {
                continue;
            }
            let cand = (best[i].0 + w, best[i].1 + 1);
            let better = cand.0 > best[j].0 + 1e-12
                || ((cand.0 - best[j].0).abs() <= 1e-12 && cand.1 > best[j].1);
            if better {
                best[j] = cand;
                prev[j] = i;
            }
        }
    }
    let mut points = vec![y];
    let mut at = k - 1;
    while at != 0 {
        at = prev[at];
        points.push(nodes[at]);
    }
    points.reverse();
    Ok(Chain { points, is_isochronal: true })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> Causet {
        Causet::new(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    fn chain3(d02: f64) -> Causet {
        Causet::new(vec![vec![0.0, 1.0, d02], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]).unwrap()
    }

    #[test]
    fn causal_relation_examples() {
        assert_eq!(causal_relation(&chain2()).pairs(), vec![(0, 0), (0, 1), (1, 1)]);
        assert_eq!(causal_relation(&Causet::single_point()).pairs(), vec![(0, 0)]);
        let j = causal_relation(&chain3(2.0));
        assert!(j.contains(0, 1) && j.contains(1, 2) && j.contains(0, 2));
        assert!(!j.contains(2, 0));
    }

    #[test]
    fn time_function_two_point_chain() {
        let t = time_function(&chain2(), &[0, 1], 1.0, 0.0).unwrap();
        assert_eq!(t.values, vec![-0.125, 0.25]);
        assert_eq!(t.weights, vec![0.5, 0.25]);
        let single = time_function(&Causet::single_point(), &[0], 1.0, 3.5).unwrap();
        assert_eq!(single.values, vec![3.5]);
        assert_eq!(
            time_function(&chain2(), &[0, 1], 0.0, 0.0).unwrap_err(),
            Error::NonPositiveScale(0.0)
        );
    }

    #[test]
    fn normalized_time_function_hits_endpoints() {
        let c = chain3(2.5);
        let t = normalized_time_function(&c, &[0, 1, 2], 0, 2).unwrap();
        assert!(t.values[0].abs() < 1e-15);
        assert!((t.values[2] - 1.0).abs() < 1e-15);
        assert!(t.values[1] > 0.0 && t.values[1] < 1.0);
    }

    #[test]
    fn chains() {
        let ch = is_chain(&chain2(), &[0, 1]).unwrap();
        assert!(ch.is_isochronal);
        assert_eq!(is_chain(&chain2(), &[1, 0]).unwrap_err(), Error::NotAChain { from: 1, to: 0 });
        assert!(is_chain(&chain3(2.0), &[0, 1, 2]).unwrap().is_isochronal);
    }

    #[test]
    fn lengths_and_maximality() {
        let tight = chain3(2.0);
        let ch = is_chain(&tight, &[0, 1, 2]).unwrap();
        assert_eq!(chain_length(&tight, &ch), 2.0);
        assert!(is_maximal(&tight, &ch, 1e-12));

        let loose = chain3(2.5);
        let ch = is_chain(&loose, &[0, 1, 2]).unwrap();
        assert_eq!(chain_length(&loose, &ch), 2.0);
        assert!(!is_maximal(&loose, &ch, 1e-12));

        let pair = is_chain(&loose, &[0, 2]).unwrap();
        assert!(is_maximal(&loose, &pair, 0.0));
    }

    #[test]
    fn longest_chain_examples() {
        let ch = longest_chain(&chain2(), 0, 1).unwrap();
        assert_eq!(ch.points, vec![0, 1]);
        let ch = longest_chain(&chain3(2.0), 0, 2).unwrap();
        assert_eq!(ch.points, vec![0, 1, 2]);
        assert_eq!(chain_length(&chain3(2.0), &ch), 2.0);
        // Strict reverse triangle: the direct link wins.
        assert_eq!(longest_chain(&chain3(2.5), 0, 2).unwrap().points, vec![0, 2]);
        assert_eq!(
            longest_chain(&chain2(), 1, 0).unwrap_err(),
            Error::NotChronological { x: 1, y: 0 }
        );
    }
}
