//! Correspondences, distortion and the Gromov-Hausdorff distance between
//! causets.
//!
//! `d_GH(X, Y) = min_R dis R` over correspondences `R ⊆ X × Y`. Every
//! correspondence contains one of the form `graph(f) ∪ {(g(y), y) : y ∉ im f}`
//! for maps `f: X → Y`, `g: Y → X`, and distortion is monotone under
//! inclusion, so the exact search runs over such map pairs only.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::causet::{diameter, find_isometry, Causet, DEFAULT_TOL};
use crate::error::{Error, Result};
use crate::gamma::GammaMatrix;

/// A relation between an `m`-point and an `n`-point space that covers both.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Correspondence {
    m: usize,
    n: usize,
    pairs: Vec<(usize, usize)>,
}

impl Correspondence {
    pub fn new(m: usize, n: usize, pairs: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let set: BTreeSet<(usize, usize)> = pairs.into_iter().collect();
        let mut left = vec![false; m];
        let mut right = vec![false; n];
        for &(x, y) in &set {
            if x >= m || y >= n {
                return Err(Error::InvalidCorrespondence(format!(
                    "pair ({x}, {y}) out of range for sizes ({m}, {n})"
                )));
            }
            left[x] = true;
            right[y] = true;
        }
        if let Some(x) = left.iter().position(|&c| !c) {
            return Err(Error::InvalidCorrespondence(format!("left point {x} is not covered")));
        }
        if let Some(y) = right.iter().position(|&c| !c) {
            return Err(Error::InvalidCorrespondence(format!("right point {y} is not covered")));
        }
        Ok(Self { m, n, pairs: set.into_iter().collect() })
    }

    pub fn diagonal(n: usize) -> Self {
        Self { m: n, n, pairs: (0..n).map(|i| (i, i)).collect() }
    }

    /// Every pair; the only correspondence onto a one-point space has this form.
    pub fn full(m: usize, n: usize) -> Self {
        Self { m, n, pairs: (0..m).flat_map(|x| (0..n).map(move |y| (x, y))).collect() }
    }

    /// `graph(f) ∪ graph(g)ᵀ`.
    pub fn from_maps(f: &[usize], g: &[usize]) -> Result<Self> {
        let (m, n) = (f.len(), g.len());
        Self::new(m, n, f.iter().enumerate().map(|(x, &y)| (x, y)).chain(g.iter().enumerate().map(|(y, &x)| (x, y))))
    }

    pub fn sizes(&self) -> (usize, usize) {
        (self.m, self.n)
    }

    pub fn pairs(&self) -> &[(usize, usize)] {
        &self.pairs
    }

    pub fn contains(&self, x: usize, y: usize) -> bool {
        self.pairs.binary_search(&(x, y)).is_ok()
    }

    pub fn transpose(&self) -> Self {
        let mut pairs: Vec<_> = self.pairs.iter().map(|&(x, y)| (y, x)).collect();
        pairs.sort_unstable();
        Self { m: self.n, n: self.m, pairs }
    }

    /// Copy with an extra pair.
    pub fn with_pair(&self, x: usize, y: usize) -> Result<Self> {
        Self::new(self.m, self.n, self.pairs.iter().copied().chain([(x, y)]))
    }
}

#[inline]
fn pair_cost(a: &Causet, b: &Causet, (x, y): (usize, usize), (x2, y2): (usize, usize)) -> f64 {
    (a.d(x, x2) - b.d(y, y2)).abs().max((a.d(x2, x) - b.d(y2, y)).abs())
}

fn check_sizes(r: &Correspondence, a: &Causet, b: &Causet) -> Result<()> {
    if r.m != a.n() || r.n != b.n() {
        return Err(Error::SizeMismatch(format!(
            "correspondence sizes ({}, {}) vs spaces ({}, {})",
            r.m,
            r.n,
            a.n(),
            b.n()
        )));
    }
    Ok(())
}

fn distortion_of_pairs(a: &Causet, b: &Causet, pairs: &[(usize, usize)]) -> f64 {
    let mut worst = 0.0f64;
    for (i, &p) in pairs.iter().enumerate() {
        for &q in &pairs[i..] {
            worst = worst.max(pair_cost(a, b, p, q));
        }
    }
    worst
}

/// `dis R = sup |d_a(x, x') − d_b(y, y')|` over pairs of pairs of `R`.
pub fn distortion(r: &Correspondence, a: &Causet, b: &Causet) -> Result<f64> {
    check_sizes(r, a, b)?;
    Ok(distortion_of_pairs(a, b, &r.pairs))
}

/// Distortion of `r` measured with the distinction metrics of both sides.
pub fn gamma_distortion(r: &Correspondence, ga: &GammaMatrix, gb: &GammaMatrix) -> Result<f64> {
    if r.m != ga.n() || r.n != gb.n() {
        return Err(Error::SizeMismatch("correspondence vs gamma matrices".into()));
    }
    let mut worst = 0.0f64;
    for &(x, y) in &r.pairs {
        for &(x2, y2) in &r.pairs {
            worst = worst.max((ga.get(x, x2) - gb.get(y, y2)).abs());
        }
    }
    Ok(worst)
}

/// Relational composition `r2 ∘ r1 = {(x, z) : ∃y (x, y) ∈ r1, (y, z) ∈ r2}`.
pub fn compose(r1: &Correspondence, r2: &Correspondence) -> Result<Correspondence> {
    if r1.n != r2.m {
        return Err(Error::SizeMismatch(format!(
            "inner sizes differ: {} vs {}",
            r1.n, r2.m
        )));
    }
    let mut by_middle: Vec<Vec<usize>> = vec![Vec::new(); r2.m];
    for &(y, z) in &r2.pairs {
        by_middle[y].push(z);
    }
    let pairs = r1.pairs.iter().flat_map(|&(x, y)| by_middle[y].iter().map(move |&z| (x, z)));
    Correspondence::new(r1.m, r2.n, pairs)
}

/// Map `X → Y` picking, for each `x`, the smallest `y` paired with it.
pub fn epsilon_isometry_from(r: &Correspondence, a: &Causet, b: &Causet) -> Result<Vec<usize>> {
    check_sizes(r, a, b)?;
    let mut f = vec![usize::MAX; r.m];
    for &(x, y) in r.pairs.iter().rev() {
        f[x] = y;
    }
    Ok(f)
}

/// `sup |d_a(x, x') − d_b(f(x), f(x'))|`.
pub fn map_distortion(f: &[usize], a: &Causet, b: &Causet) -> Result<f64> {
    if f.len() != a.n() {
        return Err(Error::SizeMismatch("map length vs domain size".into()));
    }
    for &y in f {
        b.check_index(y)?;
    }
    let mut worst = 0.0f64;
    for x in 0..a.n() {
        for x2 in 0..a.n() {
            worst = worst.max((a.d(x, x2) - b.d(f[x], f[x2])).abs());
        }
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GhMethod {
    Exact,
    BranchBound,
    Greedy,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GHResult {
    pub lower: f64,
    pub upper: f64,
    pub exact: Option<f64>,
    pub witness: Option<Correspondence>,
    pub method: GhMethod,
}

/// Limits for the exact search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GhBudget {
    /// Larger spaces get bounds only.
    pub max_exact_size: usize,
    /// Search nodes before giving up on exactness.
    pub max_nodes: u64,
    pub restarts: usize,
    pub seed: u64,
}

impl Default for GhBudget {
    fn default() -> Self {
        Self { max_exact_size: 6, max_nodes: 500_000_000, restarts: 4, seed: 0 }
    }
}

/// Hausdorff distance between two sorted value sets.
fn sorted_set_hausdorff(a: &[f64], b: &[f64]) -> f64 {
    fn one_sided(from: &[f64], to: &[f64]) -> f64 {
        from.iter()
            .map(|&v| {
                let i = to.partition_point(|&w| w < v);
                let mut best = f64::INFINITY;
                if i < to.len() {
                    best = best.min(to[i] - v);
                }
                if i > 0 {
                    best = best.min(v - to[i - 1]);
                }
                best
            })
            .fold(0.0, f64::max)
    }
    if a.is_empty() || b.is_empty() {
        return 0.0;
    }
    one_sided(a, b).max(one_sided(b, a))
}

struct Profiles {
    rows: Vec<Vec<f64>>,
    cols: Vec<Vec<f64>>,
}

impl Profiles {
    fn of(c: &Causet) -> Self {
        let n = c.n();
        let sorted = |mut v: Vec<f64>| {
            v.sort_by(f64::total_cmp);
            v.dedup();
            v
        };
        Self {
            rows: (0..n).map(|i| sorted((0..n).map(|z| c.d(i, z)).collect())).collect(),
            cols: (0..n).map(|i| sorted((0..n).map(|z| c.d(z, i)).collect())).collect(),
        }
    }
}

/// For `(x, y)` in any correspondence `R`, the row value sets of `x` and `y`
/// (and the column value sets) are within `dis R` in Hausdorff distance.
fn profile_bounds(a: &Causet, b: &Causet) -> Vec<f64> {
    let (pa, pb) = (Profiles::of(a), Profiles::of(b));
    let (m, n) = (a.n(), b.n());
    let mut out = vec![0.0; m * n];
    for x in 0..m {
        for y in 0..n {
            out[x * n + y] = sorted_set_hausdorff(&pa.rows[x], &pb.rows[y])
                .max(sorted_set_hausdorff(&pa.cols[x], &pb.cols[y]));
        }
    }
    out
}

fn value_set(c: &Causet) -> Vec<f64> {
    let mut v: Vec<f64> = (0..c.n()).flat_map(|i| c.row(i).to_vec()).collect();
    v.sort_by(f64::total_cmp);
    v.dedup();
    v
}

/// Cheap lower bounds on `d_GH`: the diameter gap, the Hausdorff distance
/// between the sets of distance values, and the per-point profile bound.
pub fn gh_lower_bounds(a: &Causet, b: &Causet) -> f64 {
    if a.n() == 0 || b.n() == 0 {
        return 0.0;
    }
    let diam_gap = (diameter(a) - diameter(b)).abs();
    let values = sorted_set_hausdorff(&value_set(a), &value_set(b));
    let prof = profile_bounds(a, b);
    let (m, n) = (a.n(), b.n());
    let by_x = (0..m)
        .map(|x| (0..n).map(|y| prof[x * n + y]).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    let by_y = (0..n)
        .map(|y| (0..m).map(|x| prof[x * n + y]).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    diam_gap.max(values).max(by_x).max(by_y)
}

fn row_variance(c: &Causet, i: usize) -> f64 {
    let n = c.n() as f64;
    let row = c.row(i);
    let mean = row.iter().sum::<f64>() / n;
    row.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n
}

fn variance_order(c: &Causet) -> Vec<usize> {
    let mut order: Vec<usize> = (0..c.n()).collect();
    order.sort_by(|&i, &j| row_variance(c, j).total_cmp(&row_variance(c, i)).then(i.cmp(&j)));
    order
}

/// Local search over map pairs `(f, g)`; the correspondence is
/// `graph(f) ∪ graph(g)ᵀ`, stored as `m + n` pairs indexed by their owner.
struct MapPairSearch<'a> {
    a: &'a Causet,
    b: &'a Causet,
    pairs: Vec<(usize, usize)>,
    worst: Vec<f64>,
}

impl<'a> MapPairSearch<'a> {
    fn new(a: &'a Causet, b: &'a Causet, f: &[usize], g: &[usize]) -> Self {
        let pairs: Vec<(usize, usize)> = f
            .iter()
            .enumerate()
            .map(|(x, &y)| (x, y))
            .chain(g.iter().enumerate().map(|(y, &x)| (x, y)))
            .collect();
        let mut s = Self { a, b, worst: vec![0.0; pairs.len()], pairs };
        s.recompute();
        s
    }

    fn recompute(&mut self) {
        let p = self.pairs.len();
        self.worst.iter_mut().for_each(|w| *w = 0.0);
        for i in 0..p {
            for j in i..p {
                let c = pair_cost(self.a, self.b, self.pairs[i], self.pairs[j]);
                if c > self.worst[i] {
                    self.worst[i] = c;
                }
                if c > self.worst[j] {
                    self.worst[j] = c;
                }
            }
        }
    }

    /// (distortion, number of pairs attaining it)
    fn objective(&self) -> (f64, usize) {
        let d = self.worst.iter().copied().fold(0.0, f64::max);
        (d, self.worst.iter().filter(|&&w| w >= d).count())
    }

    fn cost_against_rest(&self, skip: usize, cand: (usize, usize)) -> f64 {
        self.pairs
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != skip)
            .map(|(_, &q)| pair_cost(self.a, self.b, cand, q))
            .fold(pair_cost(self.a, self.b, cand, cand), f64::max)
    }

    fn run(&mut self, max_moves: usize) {
        let m = self.a.n();
        let n = self.b.n();
        let mut obj = self.objective();
        for _ in 0..max_moves {
            if obj.0 == 0.0 {
                return;
            }
            let tight: Vec<usize> = (0..self.pairs.len()).filter(|&i| self.worst[i] >= obj.0).collect();
            let mut improved = false;
            for &p in &tight {
                let (x, y) = self.pairs[p];
                let options: Vec<(usize, usize)> = if p < m {
                    (0..n).filter(|&y2| y2 != y).map(|y2| (x, y2)).collect()
                } else {
                    (0..m).filter(|&x2| x2 != x).map(|x2| (x2, y)).collect()
                };
                let best = options
                    .into_iter()
                    .map(|cand| (self.cost_against_rest(p, cand), cand))
                    .min_by(|u, v| u.0.total_cmp(&v.0));
                let Some((cost, cand)) = best else { continue };
                if cost >= self.worst[p] {
                    continue;
                }
                let old = self.pairs[p];
                self.pairs[p] = cand;
                self.recompute();
                let next = self.objective();
                if next.0 < obj.0 || (next.0 == obj.0 && next.1 < obj.1) {
                    obj = next;
                    improved = true;
                    break;
                }
                self.pairs[p] = old;
                self.recompute();
            }
            if !improved {
                return;
            }
        }
    }

    /// Final correspondence with redundant right-side pairs dropped.
    fn into_correspondence(self) -> Correspondence {
        let m = self.a.n();
        let n = self.b.n();
        let mut covered = vec![false; n];
        for &(_, y) in &self.pairs[..m] {
            covered[y] = true;
        }
        let pairs = self.pairs[..m]
            .iter()
            .copied()
            .chain(self.pairs[m..].iter().copied().filter(|&(_, y)| !covered[y]));
        Correspondence::new(m, n, pairs).expect("map pairs cover both sides")
    }
}

/// Greedy map-pair construction: each point (in `order`) takes the partner
/// with the least conflict against the pairs placed so far, measured together
/// with the profile bound.
fn greedy_maps(a: &Causet, b: &Causet, prof: &[f64], x_order: &[usize], rng: Option<&mut ChaCha8Rng>) -> (Vec<usize>, Vec<usize>) {
    let (m, n) = (a.n(), b.n());
    let mut placed: Vec<(usize, usize)> = Vec::with_capacity(m + n);
    let mut f = vec![usize::MAX; m];
    let mut jitter = rng;
    let score = |placed: &[(usize, usize)], cand: (usize, usize)| {
        placed
            .iter()
            .map(|&q| pair_cost(a, b, cand, q))
            .fold(prof[cand.0 * n + cand.1], f64::max)
    };
    for &x in x_order {
        let mut best = (f64::INFINITY, usize::MAX);
        let mut ys: Vec<usize> = (0..n).collect();
        if let Some(r) = jitter.as_deref_mut() {
            ys.shuffle(r);
        }
        for y in ys {
            let s = score(&placed, (x, y));
            if s < best.0 {
                best = (s, y);
            }
        }
        f[x] = best.1;
        placed.push((x, best.1));
    }
    let mut g = vec![usize::MAX; n];
    for (x, &y) in f.iter().enumerate() {
        if g[y] == usize::MAX {
            g[y] = x;
        }
    }
    for y in 0..n {
        if g[y] != usize::MAX {
            continue;
        }
        let x = (0..m)
            .min_by(|&u, &v| score(&placed, (u, y)).total_cmp(&score(&placed, (v, y))))
            .expect("nonempty domain");
        g[y] = x;
        placed.push((x, y));
    }
    (f, g)
}

fn local_search_budget(a: &Causet, b: &Causet) -> usize {
    20 * (a.n() + b.n()) + 50
}

/// Upper bound from greedy construction plus local search over map pairs,
/// with `restarts` extra randomized starts.
pub fn gh_upper_greedy(a: &Causet, b: &Causet, restarts: usize, seed: u64) -> GHResult {
    let lower = gh_lower_bounds(a, b);
    let prof = profile_bounds(a, b);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(f64, Correspondence)> = None;

    let mut starts: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    if a.n() == b.n() {
        let id: Vec<usize> = (0..a.n()).collect();
        starts.push((id.clone(), id));
    }
    starts.push(greedy_maps(a, b, &prof, &variance_order(a), None));
    for _ in 0..restarts {
        let mut order: Vec<usize> = (0..a.n()).collect();
        order.shuffle(&mut rng);
        let mut sub = ChaCha8Rng::seed_from_u64(rng.gen());
        starts.push(greedy_maps(a, b, &prof, &order, Some(&mut sub)));
    }
    for (f, g) in starts {
        let mut s = MapPairSearch::new(a, b, &f, &g);
        s.run(local_search_budget(a, b));
        let r = s.into_correspondence();
        let d = distortion_of_pairs(a, b, r.pairs());
        if best.as_ref().map_or(true, |(bd, _)| d < *bd) {
            best = Some((d, r));
        }
        if best.as_ref().is_some_and(|(d, _)| *d <= lower) {
            break;
        }
    }
    let (upper, witness) = best.expect("at least one start");
    GHResult { lower: lower.min(upper), upper, exact: None, witness: Some(witness), method: GhMethod::Greedy }
}

/// Local search started from a given correspondence.
pub fn gh_upper_from(a: &Causet, b: &Causet, initial: &Correspondence) -> Result<GHResult> {
    gh_upper_from_with(a, b, initial, local_search_budget(a, b))
}

/// [`gh_upper_from`] with an explicit cap on improving moves.
pub fn gh_upper_from_with(a: &Causet, b: &Causet, initial: &Correspondence, max_moves: usize) -> Result<GHResult> {
    check_sizes(initial, a, b)?;
    let start = distortion_of_pairs(a, b, initial.pairs());
    let mut f = vec![usize::MAX; a.n()];
    let mut g = vec![usize::MAX; b.n()];
    for &(x, y) in initial.pairs().iter().rev() {
        f[x] = y;
        g[y] = x;
    }
    let mut s = MapPairSearch::new(a, b, &f, &g);
    s.run(max_moves);
    let r = s.into_correspondence();
    let d = distortion_of_pairs(a, b, r.pairs());
    let (upper, witness) = if d <= start { (d, r) } else { (start, initial.clone()) };
    let lower = gh_lower_bounds(a, b).min(upper);
    Ok(GHResult { lower, upper, exact: None, witness: Some(witness), method: GhMethod::Greedy })
}

struct BranchBound<'a> {
    a: &'a Causet,
    b: &'a Causet,
    m: usize,
    n: usize,
    x_order: Vec<usize>,
    pairs: Vec<(usize, usize)>,
    covered: Vec<usize>,
    best: f64,
    best_pairs: Option<Vec<(usize, usize)>>,
    nodes: u64,
    max_nodes: u64,
    aborted: bool,
}

impl BranchBound<'_> {
    /// Every remaining left point and every uncovered right point must still
    /// receive a partner, at no less than its cheapest conflict.
    fn bound_after(&self, cost: &[f64], depth: usize) -> f64 {
        let (m, n) = (self.m, self.n);
        let mut lb = 0.0f64;
        if depth < m {
            for &x in &self.x_order[depth..] {
                let row = &cost[x * n..(x + 1) * n];
                lb = lb.max(row.iter().copied().fold(f64::INFINITY, f64::min));
            }
        }
        for y in (0..n).filter(|&y| self.covered[y] == 0) {
            lb = lb.max((0..m).map(|x| cost[x * n + y]).fold(f64::INFINITY, f64::min));
        }
        lb
    }

    fn extend(&self, cost: &[f64], p: (usize, usize)) -> Vec<f64> {
        let (m, n) = (self.m, self.n);
        let mut next = cost.to_vec();
        for x in 0..m {
            for y in 0..n {
                let c = pair_cost(self.a, self.b, (x, y), p);
                let e = &mut next[x * n + y];
                if c > *e {
                    *e = c;
                }
            }
        }
        next
    }

    fn search(&mut self, depth: usize, partial: f64, cost: &[f64]) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
            return;
        }
        let (m, n) = (self.m, self.n);
        if depth == m {
            // Right-side points still uncovered become the second-phase variables.
            let order: Vec<usize> = (0..n).filter(|&y| self.covered[y] == 0).collect();
            self.search_right(0, &order, partial, cost);
            return;
        }
        let x = self.x_order[depth];
        let mut ys: Vec<usize> = (0..n).collect();
        ys.sort_by(|&u, &v| cost[x * n + u].total_cmp(&cost[x * n + v]).then(u.cmp(&v)));
        for y in ys {
            if cost[x * n + y].max(partial) >= self.best {
                break;
            }
            let actual = self.pairs.iter().map(|&q| pair_cost(self.a, self.b, (x, y), q)).fold(pair_cost(self.a, self.b, (x, y), (x, y)), f64::max);
            let next_partial = partial.max(actual);
            let next_cost = self.extend(cost, (x, y));
            self.pairs.push((x, y));
            self.covered[y] += 1;
            if next_partial.max(self.bound_after(&next_cost, depth + 1)) < self.best {
                self.search(depth + 1, next_partial, &next_cost);
            }
            self.covered[y] -= 1;
            self.pairs.pop();
            if self.aborted {
                return;
            }
        }
    }

    fn search_right(&mut self, k: usize, order: &[usize], partial: f64, cost: &[f64]) {
        if self.aborted {
            return;
        }
        self.nodes += 1;
        if self.nodes > self.max_nodes {
            self.aborted = true;
            return;
        }
        let n = self.n;
        if k == order.len() {
            if partial < self.best {
                self.best = partial;
                self.best_pairs = Some(self.pairs.clone());
            }
            return;
        }
        let y = order[k];
        let mut xs: Vec<usize> = (0..self.m).collect();
        xs.sort_by(|&u, &v| cost[u * n + y].total_cmp(&cost[v * n + y]).then(u.cmp(&v)));
        for x in xs {
            if cost[x * n + y].max(partial) >= self.best {
                break;
            }
            let actual = self.pairs.iter().map(|&q| pair_cost(self.a, self.b, (x, y), q)).fold(pair_cost(self.a, self.b, (x, y), (x, y)), f64::max);
            let next_partial = partial.max(actual);
            let next_cost = self.extend(cost, (x, y));
            self.pairs.push((x, y));
            let lb = order[k + 1..]
                .iter()
                .map(|&y2| (0..self.m).map(|x2| next_cost[x2 * n + y2]).fold(f64::INFINITY, f64::min))
                .fold(next_partial, f64::max);
            if lb < self.best {
                self.search_right(k + 1, order, next_partial, &next_cost);
            }
            self.pairs.pop();
            if self.aborted {
                return;
            }
        }
    }
}

/// Exact Gromov-Hausdorff distance by branch and bound over map pairs,
/// seeded with the greedy upper bound. Spaces larger than the budget, or
/// searches exceeding the node budget, yield bounds only.
pub fn gh_exact(a: &Causet, b: &Causet, budget: &GhBudget) -> GHResult {
    let heuristic = gh_upper_greedy(a, b, budget.restarts, budget.seed);
    let lower = gh_lower_bounds(a, b);
    let (upper, witness) = (heuristic.upper, heuristic.witness.expect("greedy witness"));
    if upper <= lower {
        return GHResult {
            lower: upper,
            upper,
            exact: Some(upper),
            witness: Some(witness),
            method: GhMethod::Exact,
        };
    }
    if a.n().max(b.n()) > budget.max_exact_size {
        return GHResult { lower, upper, exact: None, witness: Some(witness), method: GhMethod::Greedy };
    }

    let (m, n) = (a.n(), b.n());
    let prof = profile_bounds(a, b);
    let mut bb = BranchBound {
        a,
        b,
        m,
        n,
        x_order: variance_order(a),
        pairs: Vec::with_capacity(m + n),
        covered: vec![0; n],
        best: upper,
        best_pairs: None,
        nodes: 0,
        max_nodes: budget.max_nodes,
        aborted: false,
    };
    let root_lb = bb.bound_after(&prof, 0);
    if root_lb < upper {
        bb.search(0, 0.0, &prof);
    }
    let best = bb.best;
    let witness = match bb.best_pairs {
        Some(p) => Correspondence::new(m, n, p).expect("search leaves are correspondences"),
        None => witness,
    };
    if bb.aborted {
        GHResult { lower: lower.min(best), upper: best, exact: None, witness: Some(witness), method: GhMethod::BranchBound }
    } else {
        GHResult { lower: best, upper: best, exact: Some(best), witness: Some(witness), method: GhMethod::Exact }
    }
}

/// Decides `d_GH(a, b) = 0` through isometry search. Both spaces must agree
/// on whether they contain a spacelike boundary point.
pub fn gh_zero_is_isometry(a: &Causet, b: &Causet, tol: f64) -> Result<bool> {
    let (left, right) = (a.has_boundary(), b.has_boundary());
    if left != right {
        return Err(Error::MixedBoundary { left, right });
    }
    Ok(find_isometry(a, b, tol.max(0.0)).is_some())
}

/// Convenience wrapper with the default tolerance.
pub fn is_isometric(a: &Causet, b: &Causet) -> bool {
    find_isometry(a, b, DEFAULT_TOL).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2(d: f64) -> Causet {
        Causet::new(vec![vec![0.0, d], vec![0.0, 0.0]]).unwrap()
    }

    fn three() -> Causet {
        Causet::new(vec![vec![0.0, 1.0, 2.5], vec![0.0, 0.0, 1.2], vec![0.0, 0.0, 0.0]]).unwrap()
    }

    #[test]
    fn correspondence_must_cover() {
        assert!(Correspondence::new(2, 2, [(0, 0)]).is_err());
        assert!(Correspondence::new(2, 2, [(0, 0), (1, 1)]).is_ok());
        assert!(Correspondence::new(1, 1, [(0, 3)]).is_err());
    }

    #[test]
    fn distortion_examples() {
        let id = Correspondence::diagonal(2);
        assert_eq!(distortion(&id, &chain2(1.0), &chain2(1.0)).unwrap(), 0.0);
        assert_eq!(distortion(&id, &chain2(1.0), &chain2(1.25)).unwrap(), 0.25);
        let r = Correspondence::new(2, 2, [(0, 0), (1, 1), (1, 0)]).unwrap();
        let d = distortion(&r, &chain2(1.0), &chain2(1.25)).unwrap();
        assert_eq!(distortion(&r.transpose(), &chain2(1.25), &chain2(1.0)).unwrap(), d);
        assert!(distortion(&Correspondence::diagonal(3), &chain2(1.0), &chain2(1.0)).is_err());
    }

    #[test]
    fn compose_examples() {
        let r = Correspondence::new(2, 3, [(0, 0), (1, 1), (1, 2)]).unwrap();
        assert_eq!(compose(&r, &Correspondence::diagonal(3)).unwrap(), r);
        assert_eq!(compose(&Correspondence::diagonal(2), &r).unwrap(), r);
        let single = Correspondence::diagonal(1);
        assert_eq!(compose(&single, &single).unwrap(), single);
        assert!(compose(&r, &r).is_err());
    }

    #[test]
    fn exact_examples() {
        let b = GhBudget::default();
        let r = gh_exact(&three(), &three(), &b);
        assert_eq!(r.exact, Some(0.0));
        let r = gh_exact(&chain2(1.0), &chain2(1.25), &b);
        assert_eq!(r.exact, Some(0.25));
        let w = r.witness.unwrap();
        assert_eq!(distortion(&w, &chain2(1.0), &chain2(1.25)).unwrap(), 0.25);
        let r = gh_exact(&three(), &Causet::single_point(), &b);
        assert_eq!(r.exact, Some(2.5));
    }

    #[test]
    fn lower_bound_examples() {
        assert!(gh_lower_bounds(&chain2(1.0), &chain2(3.0)) >= 2.0);
        assert_eq!(gh_lower_bounds(&three(), &three()), 0.0);
        assert_eq!(gh_lower_bounds(&chain2(1.0), &chain2(1.25)), 0.25);
    }

    #[test]
    fn greedy_finds_permutation() {
        let c = three();
        let p = c.permuted(&[2, 0, 1]).unwrap();
        assert_eq!(gh_upper_greedy(&c, &p, 4, 1).upper, 0.0);
    }

    #[test]
    fn epsilon_isometry() {
        let (a, b) = (chain2(1.0), chain2(1.25));
        let f = epsilon_isometry_from(&Correspondence::diagonal(2), &a, &a).unwrap();
        assert_eq!(f, vec![0, 1]);
        let r = gh_exact(&a, &b, &GhBudget::default()).witness.unwrap();
        let f = epsilon_isometry_from(&r, &a, &b).unwrap();
        assert!(map_distortion(&f, &a, &b).unwrap() <= 0.25);
    }

    #[test]
    fn zero_distance_and_isometry() {
        let c = three();
        assert!(gh_zero_is_isometry(&c, &c.permuted(&[1, 2, 0]).unwrap(), 1e-9).unwrap());
        assert!(!gh_zero_is_isometry(&chain2(1.0), &chain2(1.25), 1e-9).unwrap());
        let with_i0 = crate::causet::adjoin_boundary(&c).unwrap();
        assert!(matches!(
            gh_zero_is_isometry(&c, &with_i0, 1e-9),
            Err(Error::MixedBoundary { left: false, right: true })
        ));
    }

    #[test]
    fn quotient_pair_has_zero_distance() {
        // Points 1 and 2 are copies of each other.
        let s = Causet::new(vec![
            vec![0.0, 1.0, 1.0, 2.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0, 1.0],
            vec![0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        let (q, _) = s.quotient(0.0);
        assert_eq!(q.n(), 3);
        let r = gh_exact(&s, &q, &GhBudget::default());
        assert_eq!(r.exact, Some(0.0));
    }
}
