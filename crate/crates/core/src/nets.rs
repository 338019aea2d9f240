//! ε-nets under the distinction metric, the net-to-causet pipeline, uniform
//! total boundedness of families, rationalization and entrywise limits of
//! aligned causet sequences.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::causet::{validate, validate_exact, strict_reverse_triangle_exact, Causet, Rational};
use crate::error::{Error, Result};
use crate::gamma::{gamma, GammaMatrix};
use crate::gh::Correspondence;

/// Members (host indices, in selection order) such that every host point is
/// within γ-distance `eps` of some member.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpsilonNet {
    pub eps: f64,
    pub members: Vec<usize>,
}

impl EpsilonNet {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

pub fn extract_net(c: &Causet, eps: f64) -> Result<EpsilonNet> {
    extract_net_gamma(&gamma(c), eps)
}

/// Greedy farthest-point cover: start at point 0 and keep adding the point
/// farthest from the current members until the covering radius is `<= eps`.
pub fn extract_net_gamma(g: &GammaMatrix, eps: f64) -> Result<EpsilonNet> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let n = g.n();
    if n == 0 {
        return Err(Error::EmptySet);
    }
    let mut members = vec![0];
    let mut reach: Vec<f64> = (0..n).map(|z| g.get(0, z)).collect();
    loop {
        let (far, &r) = reach
            .iter()
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
            .expect("nonempty");
        if r <= eps {
            break;
        }
        members.push(far);
        for (z, v) in reach.iter_mut().enumerate() {
            *v = v.min(g.get(far, z));
        }
    }
    Ok(EpsilonNet { eps, members })
}

/// Largest γ-distance from a host point to its nearest member.
pub fn covering_radius(g: &GammaMatrix, members: &[usize]) -> Result<f64> {
    if members.is_empty() {
        return Err(Error::EmptySet);
    }
    Ok((0..g.n())
        .map(|z| members.iter().map(|&m| g.get(m, z)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max))
}

pub fn is_epsilon_net(g: &GammaMatrix, members: &[usize], eps: f64) -> bool {
    covering_radius(g, members).map_or(false, |r| r <= eps)
}

/// Correspondence between the host (left) and the members of `net` in order
/// (right): each host point is paired with its nearest member, ties going to
/// the earlier member.
pub fn nearest_member_correspondence(g: &GammaMatrix, net: &EpsilonNet) -> Result<Correspondence> {
    if net.members.is_empty() {
        return Err(Error::EmptySet);
    }
    for &m in &net.members {
        if m >= g.n() {
            return Err(Error::IndexOutOfRange { index: m, n: g.n() });
        }
    }
    let mut pairs: Vec<(usize, usize)> = (0..g.n())
        .map(|x| {
            let j = (0..net.members.len())
                .min_by(|&a, &b| g.get(net.members[a], x).total_cmp(&g.get(net.members[b], x)))
                .expect("nonempty");
            (x, j)
        })
        .collect();
    pairs.extend(net.members.iter().enumerate().map(|(j, &m)| (m, j)));
    Correspondence::new(g.n(), net.members.len(), pairs)
}

/// The causet induced on the net members, with members that became
/// indistinguishable merged. Returns it together with the host index of each
/// of its points.
pub fn net_to_causet(host: &Causet, net: &EpsilonNet) -> Result<(Causet, Vec<usize>)> {
    if net.members.is_empty() {
        return Err(Error::EmptySet);
    }
    let sub = host.induced(&net.members)?;
    let (q, class) = sub.quotient(0.0);
    let mut reps = vec![usize::MAX; q.n()];
    for (i, &k) in class.iter().enumerate() {
        if reps[k] == usize::MAX {
            reps[k] = net.members[i];
        }
    }
    Ok((q, reps))
}

/// Data of a uniformly totally bounded family: a diameter bound and, for each
/// level `k`, a scale `alpha[k]` at which every member has a net of at most
/// `beta[k]` points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TotallyBoundedParams {
    pub diameter_bound: f64,
    pub alpha: Vec<f64>,
    pub beta: Vec<usize>,
}

impl TotallyBoundedParams {
    pub fn check(&self) -> Result<()> {
        if !(self.diameter_bound >= 0.0) {
            return Err(Error::InvalidParameter("diameter bound must be nonnegative".into()));
        }
        if self.alpha.len() != self.beta.len() {
            return Err(Error::SizeMismatch(format!(
                "{} scales but {} net sizes",
                self.alpha.len(),
                self.beta.len()
            )));
        }
        if self.alpha.iter().any(|&a| !(a > 0.0)) || self.alpha.windows(2).any(|w| w[1] >= w[0]) {
            return Err(Error::InvalidParameter("alpha must be positive and strictly decreasing".into()));
        }
        if self.beta.iter().any(|&b| b == 0) || self.beta.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter("beta must be positive and nondecreasing".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "failure", rename_all = "kebab-case")]
pub enum BoundednessFailure {
    Diameter { diameter: f64, bound: f64 },
    NetTooLarge { level: usize, alpha: f64, size: usize, beta: usize },
    MissingBoundary,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MemberReport {
    pub member: usize,
    pub passed: bool,
    pub failure: Option<BoundednessFailure>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundednessReport {
    pub passed: bool,
    pub members: Vec<MemberReport>,
}

/// Checks each member for the diameter bound, greedy `alpha[k]`-nets of at
/// most `beta[k]` points, and presence of the boundary point, stopping at the
/// first failure.
pub fn check_uniformly_totally_bounded(
    family: &[Causet],
    params: &TotallyBoundedParams,
) -> Result<BoundednessReport> {
    params.check()?;
    let members: Vec<MemberReport> = family
        .par_iter()
        .enumerate()
        .map(|(member, c)| {
            let failure = member_failure(c, params);
            MemberReport { member, passed: failure.is_none(), failure }
        })
        .collect();
    Ok(BoundednessReport { passed: members.iter().all(|m| m.passed), members })
}

fn member_failure(c: &Causet, params: &TotallyBoundedParams) -> Option<BoundednessFailure> {
    let diameter = crate::causet::diameter(c);
    if diameter > params.diameter_bound {
        return Some(BoundednessFailure::Diameter { diameter, bound: params.diameter_bound });
    }
    let g = gamma(c);
    for (level, (&alpha, &beta)) in params.alpha.iter().zip(&params.beta).enumerate() {
        let size = extract_net_gamma(&g, alpha).map_or(0, |net| net.len());
        if size > beta {
            return Some(BoundednessFailure::NetTooLarge { level, alpha, size, beta });
        }
    }
    if !c.has_boundary() {
        return Some(BoundednessFailure::MissingBoundary);
    }
    None
}

/// Maximal number of links in a chronological chain from `i` to `j`, zero
/// when `d(i, j) = 0`.
fn link_counts(c: &Causet) -> Result<Vec<usize>> {
    let n = c.n();
    // Kahn order of the chronological DAG.
    let mut indeg: Vec<usize> = (0..n).map(|j| (0..n).filter(|&i| c.d(i, j) > 0.0).count()).collect();
    let mut order = Vec::with_capacity(n);
    let mut stack: Vec<usize> = (0..n).filter(|&j| indeg[j] == 0).collect();
    while let Some(i) = stack.pop() {
        order.push(i);
        for j in 0..n {
            if c.d(i, j) > 0.0 {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    stack.push(j);
                }
            }
        }
    }
    if order.len() != n {
        return Err(Error::InvalidParameter("chronological relation has a cycle".into()));
    }
    let mut pos = vec![0; n];
    for (k, &i) in order.iter().enumerate() {
        pos[i] = k;
    }
    let mut t = vec![0usize; n * n];
    for &i in &order {
        for &j in &order[pos[i] + 1..] {
            if c.d(i, j) <= 0.0 {
                continue;
            }
            let via = order[pos[i] + 1..pos[j]]
                .iter()
                .filter(|&&k| c.d(i, k) > 0.0 && c.d(k, j) > 0.0)
                .map(|&k| t[i * n + k] + 1)
                .max()
                .unwrap_or(1);
            t[i * n + j] = via.max(1);
        }
    }
    Ok(t)
}

/// Last continued-fraction convergent of `v >= 0` before the approximation
/// error drops to `radius`.
fn convergent_within(v: f64, radius: f64) -> Option<Rational> {
    let (mant, exp, _) = num_traits::Float::integer_decode(v);
    if exp >= 0 {
        let whole = (mant as i128).checked_shl(exp as u32)?;
        return i64::try_from(whole).ok().map(Rational::from_integer);
    }
    if exp < -120 {
        return None;
    }
    let (mut a, mut b) = (mant as i128, 1i128 << (-exp) as u32);
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    while b != 0 {
        let k = a / b;
        let (p2, q2) = (k.checked_mul(p1)?.checked_add(p0)?, k.checked_mul(q1)?.checked_add(q0)?);
        (p0, q0, p1, q1) = (p1, q1, p2, q2);
        (a, b) = (b, a - k * b);
        if (p1 as f64 / q1 as f64 - v).abs() <= radius {
            break;
        }
    }
    Some(Rational::new(i64::try_from(p1).ok()?, i64::try_from(q1).ok()?))
}

/// Rational causet within GH distance `eps` of `c` whose reverse-triangle
/// inequalities all hold strictly.
///
/// Positive entries first grow by `δ·t²`, `t` the maximal link count between
/// the endpoints, which makes every chronological triple strict. Each entry
/// is then replaced by a continued-fraction convergent close enough to keep
/// the strictness, and the result is checked in exact arithmetic.
pub fn rationalize(c: &Causet, eps: f64) -> Result<Causet> {
    if !(eps > 0.0) {
        return Err(Error::InvalidParameter(format!("eps must be positive, got {eps}")));
    }
    let report = validate(c, crate::causet::DEFAULT_TOL);
    if !report.valid {
        return Err(Error::InvalidParameter(format!(
            "input is not a valid causet: {:?}",
            report.violations[0].kind
        )));
    }
    let n = c.n();
    let t = link_counts(c)?;
    let alpha = gamma(c).min_positive().unwrap_or(eps);
    let pairs = (n * n.saturating_sub(1) / 2).max(1) as f64;
    let delta = 0.5 * (alpha / 2.0).min(eps) / (pairs * pairs);
    let lifted: Vec<f64> = (0..n * n)
        .map(|k| {
            let v = c.d(k / n, k % n);
            if v > 0.0 {
                v + delta * (t[k] * t[k]) as f64
            } else {
                0.0
            }
        })
        .collect();
    let stage1 = lifted.iter().zip(0..).map(|(&v, k)| v - c.d(k / n, k % n)).fold(0.0, f64::max);

    let mut gap = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            let a = lifted[i * n + j];
            if a <= 0.0 {
                continue;
            }
            gap = gap.min(a);
            for k in 0..n {
                let b = lifted[j * n + k];
                if b > 0.0 {
                    gap = gap.min(lifted[i * n + k] - a - b);
                }
            }
        }
    }
    let mut radius = (gap / 4.0).min((eps - stage1) / 2.0).min(alpha / 8.0);
    for _ in 0..40 {
        if let Some(out) = round_matrix(c, &lifted, radius) {
            let within = (0..n * n).all(|k| (out.d(k / n, k % n) - c.d(k / n, k % n)).abs() <= eps);
            if within && validate_exact(&out)?.valid && strict_reverse_triangle_exact(&out)? {
                return Ok(out);
            }
        }
        radius /= 4.0;
    }
    Err(Error::InvalidParameter("rational rounding did not converge".into()))
}

fn round_matrix(c: &Causet, lifted: &[f64], radius: f64) -> Option<Causet> {
    let n = c.n();
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let mut row = Vec::with_capacity(n);
        for j in 0..n {
            let v = lifted[i * n + j];
            row.push(if v > 0.0 { convergent_within(v, radius)? } else { Rational::from_integer(0) });
        }
        rows.push(row);
    }
    Causet::from_rational(c.labels().to_vec(), rows).ok()
}

/// Options for [`limit_causet_with`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LimitOptions {
    pub tol: f64,
    /// Degree of the polynomial in `1/m` fitted to the tail of each entry
    /// sequence and evaluated at `1/m = 0`. Zero takes the last value.
    pub order: usize,
}

impl LimitOptions {
    pub fn new(tol: f64) -> Self {
        Self { tol, order: 2 }
    }
}

/// Entrywise limit of an aligned sequence of causets, the `m`-th member
/// (counting from 1) taken at `1/m`. See [`limit_causet_with`].
pub fn limit_causet(seq: &[Causet], tol: f64) -> Result<Causet> {
    limit_causet_with(seq, &LimitOptions::new(tol))
}

/// Entrywise limit with Richardson-style acceleration. The estimate from the
/// whole sequence must agree within `tol` with the estimates obtained by
/// dropping the last one and two members, otherwise the entry is reported as
/// not Cauchy. Limits within `tol` of zero snap to zero, and the limit matrix
/// is quotiented and validated at `tol`.
pub fn limit_causet_with(seq: &[Causet], opts: &LimitOptions) -> Result<Causet> {
    let first = seq.first().ok_or(Error::EmptySet)?;
    if !(opts.tol >= 0.0) {
        return Err(Error::InvalidParameter("tol must be nonnegative".into()));
    }
    for (m, c) in seq.iter().enumerate() {
        if c.labels() != first.labels() {
            return Err(Error::SizeMismatch(format!("member {m} has different labels")));
        }
    }
    let n = first.n();
    let tol = opts.tol;
    let values: Vec<f64> = (0..n * n)
        .into_par_iter()
        .map(|k| {
            let (i, j) = (k / n, k % n);
            let series: Vec<f64> = seq.iter().map(|c| c.d(i, j)).collect();
            entry_limit(&series, opts.order, tol).map_err(|spread| Error::NotCauchy { i, j, spread, tol })
        })
        .collect::<Result<_>>()?;
    let mut d = Vec::with_capacity(n * n);
    for (k, v) in values.into_iter().enumerate() {
        if v.abs() <= tol {
            d.push(0.0);
        } else if v < 0.0 || k / n == k % n {
            return Err(Error::InvalidLimit(format!("entry ({}, {}) tends to {v}", k / n, k % n)));
        } else {
            d.push(v);
        }
    }
    let (q, _) = Causet::from_flat(first.labels().to_vec(), d).quotient(tol);
    let report = validate(&q, tol);
    match report.violations.first() {
        None => Ok(q),
        Some(v) => Err(Error::InvalidLimit(format!("{:?} at {:?}", v.kind, v.witness))),
    }
}

/// Limit estimate of one entry sequence, or the spread of the trailing
/// estimates when it exceeds `tol`.
fn entry_limit(series: &[f64], order: usize, tol: f64) -> std::result::Result<f64, f64> {
    let len = series.len();
    let tail = &series[len.saturating_sub(2 * order + 3)..];
    if tail.iter().all(|&v| v == series[len - 1]) {
        return Ok(series[len - 1]);
    }
    let estimates: Vec<f64> = (0..3.min(len)).map(|drop| extrapolate(&series[..len - drop], order)).collect();
    let lo = estimates.iter().copied().fold(f64::INFINITY, f64::min);
    let hi = estimates.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if hi - lo <= tol {
        Ok(estimates[0])
    } else {
        Err(hi - lo)
    }
}

/// Neville evaluation at `h = 0` of the polynomial through `(1/m, a_m)` at
/// `order + 1` nodes spread between the last member and the middle of the
/// sequence.
fn extrapolate(series: &[f64], order: usize) -> f64 {
    let len = series.len();
    let mut nodes: Vec<usize> = (0..=order)
        .map(|k| {
            let f = 1.0 - k as f64 / (2 * order.max(1)) as f64;
            ((len as f64 * f).round() as usize).clamp(1, len)
        })
        .collect();
    nodes.dedup();
    let h: Vec<f64> = nodes.iter().map(|&m| 1.0 / m as f64).collect();
    let mut p: Vec<f64> = nodes.iter().map(|&m| series[m - 1]).collect();
    for level in 1..p.len() {
        for i in 0..p.len() - level {
            let (hi, hj) = (h[i], h[i + level]);
            p[i] = (hj * p[i] - hi * p[i + 1]) / (hj - hi);
        }
    }
    p[0]
}
