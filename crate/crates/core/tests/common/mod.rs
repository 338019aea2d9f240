//! Generators and brute-force oracles shared by the integration tests. The
//! oracles follow the definitions directly and use none of the library's
//! algorithms.

#![allow(dead_code)]

use std::collections::BTreeSet;

use lorentz_core::Causet;
use rand::Rng;

/// Longest-path metric of a random DAG on `0..n` (edges only from lower to
/// higher index) with weights in `1/64 .. 2`, multiples of `1/64` so that all
/// path sums are exact. Indistinguishable points are merged.
pub fn dag_causet<R: Rng>(rng: &mut R, n: usize, p_edge: f64) -> Causet {
    let weights: Vec<Option<u8>> = (0..n * n.saturating_sub(1) / 2)
        .map(|_| if rng.gen_bool(p_edge) { Some(rng.gen_range(1..=128)) } else { None })
        .collect();
    dag_from_weights(n, &weights)
}

/// As [`dag_causet`] with explicit upper-triangular weights in row order;
/// weight `w` stands for `w / 64`.
pub fn dag_from_weights(n: usize, weights: &[Option<u8>]) -> Causet {
    let mut w = vec![vec![None; n]; n];
    let mut k = 0;
    for i in 0..n {
        for j in (i + 1)..n {
            w[i][j] = weights.get(k).copied().flatten().map(|v| v as f64 / 64.0);
            k += 1;
        }
    }
    Causet::new(longest_paths(&w)).unwrap().quotient(0.0).0
}

/// Longest-path metric with float weights (sums are then rounded).
pub fn float_dag_causet<R: Rng>(rng: &mut R, n: usize, p_edge: f64) -> Causet {
    let mut w = vec![vec![None; n]; n];
    for i in 0..n {
        for j in (i + 1)..n {
            if rng.gen_bool(p_edge) {
                w[i][j] = Some(rng.gen_range(0.05..1.5));
            }
        }
    }
    Causet::new(longest_paths(&w)).unwrap().quotient(0.0).0
}

fn longest_paths(w: &[Vec<Option<f64>>]) -> Vec<Vec<f64>> {
    let n = w.len();
    let mut d = vec![vec![0.0f64; n]; n];
    for i in (0..n).rev() {
        for j in (i + 1)..n {
            let mut best = w[i][j].unwrap_or(0.0);
            for k in (i + 1)..j {
                if d[i][k] > 0.0 && d[k][j] > 0.0 {
                    best = best.max(d[i][k] + d[k][j]);
                }
            }
            // Paths through the first edge out of `i`.
            for k in (i + 1)..j {
                if let Some(wk) = w[i][k] {
                    if d[k][j] > 0.0 {
                        best = best.max(wk + d[k][j]);
                    }
                }
            }
            d[i][j] = best;
        }
    }
    d
}

/// A random valid causet with exactly `n` points.
pub fn dag_causet_exact<R: Rng>(rng: &mut R, n: usize) -> Causet {
    loop {
        let p = rng.gen_range(0.3..0.9);
        let c = dag_causet(rng, n, p);
        if c.n() == n {
            return c;
        }
    }
}

/// Violation kinds of a matrix, by direct enumeration of the axioms.
pub fn oracle_violations(d: &[Vec<f64>]) -> BTreeSet<&'static str> {
    let n = d.len();
    let mut out = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            if d[i][j].is_nan() || d[i][j] < 0.0 || d[i][j].is_infinite() {
                out.insert("negative-entry");
            }
        }
        if d[i][i] != 0.0 {
            out.insert("diagonal");
        }
    }
    for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if d[x][y] > 0.0 && d[y][z] > 0.0 && d[x][y] + d[y][z] > d[x][z] {
                    out.insert("reverse-triangle");
                }
            }
        }
    }
    for x in 0..n {
        for y in 0..n {
            if x != y && (0..n).all(|z| d[x][z] == d[y][z] && d[z][x] == d[z][y]) {
                out.insert("distinguishing");
            }
        }
    }
    let null = (0..n).filter(|&x| (0..n).all(|z| d[x][z] == 0.0 && d[z][x] == 0.0)).count();
    if null > 1 {
        out.insert("multiple-boundary");
    }
    out
}

/// Noldus metric straight from its definition.
pub fn oracle_noldus(c: &Causet, x: usize, y: usize) -> f64 {
    (0..c.n())
        .map(|z| (c.d(z, x) + c.d(x, z) - c.d(z, y) - c.d(y, z)).abs())
        .fold(0.0, f64::max)
}

pub fn oracle_gamma(c: &Causet, x: usize, y: usize) -> f64 {
    (0..c.n())
        .map(|z| (c.d(x, z) - c.d(y, z)).abs().max((c.d(z, x) - c.d(z, y)).abs()))
        .fold(0.0, f64::max)
}

/// `x ≤ y` in J from the defining quantifier.
pub fn oracle_j(c: &Causet, x: usize, y: usize) -> bool {
    (0..c.n()).all(|p| c.d(p, y) >= c.d(p, x) && c.d(x, p) >= c.d(y, p))
}

/// Minimum distortion over every relation covering both sides, by
/// enumerating all `2^(mn)` subsets of `X × Y`.
pub fn oracle_gh(a: &Causet, b: &Causet) -> f64 {
    let (m, n) = (a.n(), b.n());
    let cells: Vec<(usize, usize)> = (0..m).flat_map(|x| (0..n).map(move |y| (x, y))).collect();
    assert!(cells.len() <= 20, "oracle enumeration too large");
    let mut best = f64::INFINITY;
    for mask in 1u32..(1 << cells.len()) {
        let rel: Vec<(usize, usize)> =
            cells.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, &p)| p).collect();
        let covers_x = (0..m).all(|x| rel.iter().any(|p| p.0 == x));
        let covers_y = (0..n).all(|y| rel.iter().any(|p| p.1 == y));
        if !covers_x || !covers_y {
            continue;
        }
        let mut dis = 0.0f64;
        for &(x, y) in &rel {
            for &(x2, y2) in &rel {
                dis = dis.max((a.d(x, x2) - b.d(y, y2)).abs());
            }
        }
        best = best.min(dis);
    }
    best
}

/// All distance-preserving maps `X → X`, by enumerating every map.
pub fn oracle_self_isometries(c: &Causet) -> Vec<Vec<usize>> {
    let n = c.n();
    let total = n.pow(n as u32);
    let mut out = Vec::new();
    for code in 0..total {
        let mut f = vec![0; n];
        let mut k = code;
        for slot in f.iter_mut() {
            *slot = k % n;
            k /= n;
        }
        if (0..n).all(|x| (0..n).all(|y| c.d(x, y) == c.d(f[x], f[y]))) {
            out.push(f);
        }
    }
    out
}

/// Lorentzian distance of the diamond, written out independently.
pub fn oracle_diamond_d(p: (f64, f64), q: (f64, f64)) -> f64 {
    if q.0 >= p.0 && q.1 >= p.1 {
        ((q.0 - p.0) * (q.1 - p.1)).sqrt()
    } else {
        0.0
    }
}
