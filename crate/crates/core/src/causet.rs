//! The causet data model: a finite bounded Lorentzian metric space stored as a
//! dense row-major distance matrix.
//!
//! `d[i][j]` is the Lorentzian distance from point `i` to point `j`. It is
//! positive exactly when `j` lies in the chronological future of `i`. A causet
//! may additionally carry an exact rational copy of the matrix, in which case
//! the `f64` entries are its nearest floating point images and exact
//! validation is available through [`validate_exact`].

use std::collections::HashMap;

use num_rational::Ratio;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Exact matrix entry, a numerator/denominator pair of 64-bit integers.
pub type Rational = Ratio<i64>;

/// Default tolerance for floating point equality comparisons.
pub const DEFAULT_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct Causet {
    labels: Vec<String>,
    d: Vec<f64>,
    exact: Option<Vec<Rational>>,
}

fn check_square<T>(rows: &[Vec<T>]) -> Result<usize> {
    let n = rows.len();
    for (row, r) in rows.iter().enumerate() {
        if r.len() != n {
            return Err(Error::NotSquare { row, len: r.len(), n });
        }
    }
    Ok(n)
}

fn index_labels(n: usize) -> Vec<String> {
    (0..n).map(|i| i.to_string()).collect()
}

impl Causet {
    /// Builds a causet from matrix rows with labels `"0"`, `"1"`, ...
    ///
    /// Only the shape is checked here; use [`validate`] for the axioms.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let labels = index_labels(rows.len());
        Self::with_labels(labels, rows)
    }

    pub fn with_labels(labels: Vec<String>, rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = check_square(&rows)?;
        if labels.len() != n {
            return Err(Error::LabelCount { expected: n, got: labels.len() });
        }
        Ok(Self { labels, d: rows.into_iter().flatten().collect(), exact: None })
    }

    /// Builds a causet with an exact rational payload.
    pub fn from_rational(labels: Vec<String>, rows: Vec<Vec<Rational>>) -> Result<Self> {
        let n = check_square(&rows)?;
        if labels.len() != n {
            return Err(Error::LabelCount { expected: n, got: labels.len() });
        }
        let exact: Vec<Rational> = rows.into_iter().flatten().collect();
        let d = exact.iter().map(rational_to_f64).collect();
        Ok(Self { labels, d, exact: Some(exact) })
    }

    pub(crate) fn from_flat(labels: Vec<String>, d: Vec<f64>) -> Self {
        debug_assert_eq!(labels.len() * labels.len(), d.len());
        Self { labels, d, exact: None }
    }

    /// The one-point space. Its only point is the spacelike boundary.
    pub fn single_point() -> Self {
        Self::from_flat(vec!["0".into()], vec![0.0])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    #[inline]
    pub fn d(&self, i: usize, j: usize) -> f64 {
        self.d[i * self.n() + j]
    }

    /// Row `i`: distances from `i` to every point.
    pub fn row(&self, i: usize) -> &[f64] {
        let n = self.n();
        &self.d[i * n..(i + 1) * n]
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        (0..self.n()).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn is_rational(&self) -> bool {
        self.exact.is_some()
    }

    pub fn rational(&self, i: usize, j: usize) -> Option<Rational> {
        self.exact.as_ref().map(|e| e[i * self.n() + j])
    }

    pub fn rational_rows(&self) -> Option<Vec<Vec<Rational>>> {
        let n = self.n();
        self.exact.as_ref().map(|e| e.chunks(n).map(|r| r.to_vec()).collect())
    }

    fn is_null_point(&self, i: usize) -> bool {
        (0..self.n()).all(|j| self.d(i, j) == 0.0 && self.d(j, i) == 0.0)
    }

    /// Index of the spacelike boundary point: the unique point with an
    /// all-zero row and column. `None` when there is no such point or when
    /// several exist (the latter is a validation failure).
    pub fn boundary(&self) -> Option<usize> {
        let mut found = None;
        for i in 0..self.n() {
            if self.is_null_point(i) {
                if found.is_some() {
                    return None;
                }
                found = Some(i);
            }
        }
        found
    }

    pub fn has_boundary(&self) -> bool {
        self.boundary().is_some()
    }

    pub fn check_index(&self, index: usize) -> Result<()> {
        if index < self.n() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange { index, n: self.n() })
        }
    }

    /// Sub-causet on `indices`, in the given order.
    pub fn induced(&self, indices: &[usize]) -> Result<Causet> {
        for &i in indices {
            self.check_index(i)?;
        }
        let labels = indices.iter().map(|&i| self.labels[i].clone()).collect();
        let d = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.d(i, j))
            .collect();
        let exact = self.exact.as_ref().map(|_| {
            indices
                .iter()
                .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
                .map(|(i, j)| self.rational(i, j).unwrap())
                .collect()
        });
        Ok(Causet { labels, d, exact })
    }

    /// Relabelled copy: point `k` of the result is point `perm[k]` of `self`.
    pub fn permuted(&self, perm: &[usize]) -> Result<Causet> {
        check_permutation(perm, self.n())?;
        self.induced(perm)
    }

    /// Merges points whose rows and columns agree within `tol`. Returns the
    /// quotient and the class map (input index to quotient index). The first
    /// member of each class is kept as representative.
    pub fn quotient(&self, tol: f64) -> (Causet, Vec<usize>) {
        let n = self.n();
        let mut reps: Vec<usize> = Vec::new();
        let mut class = vec![0usize; n];
        if let Some(exact) = &self.exact {
            let mut seen: HashMap<Vec<Rational>, usize> = HashMap::new();
            for i in 0..n {
                let key: Vec<Rational> =
                    (0..n).map(|z| exact[i * n + z]).chain((0..n).map(|z| exact[z * n + i])).collect();
                class[i] = *seen.entry(key).or_insert_with(|| {
                    reps.push(i);
                    reps.len() - 1
                });
            }
        } else if tol == 0.0 {
            let mut seen: HashMap<Vec<u64>, usize> = HashMap::new();
            for i in 0..n {
                // `+ 0.0` folds -0.0 onto 0.0.
                let key: Vec<u64> = (0..n)
                    .map(|z| (self.d(i, z) + 0.0).to_bits())
                    .chain((0..n).map(|z| (self.d(z, i) + 0.0).to_bits()))
                    .collect();
                class[i] = *seen.entry(key).or_insert_with(|| {
                    reps.push(i);
                    reps.len() - 1
                });
            }
        } else {
            for i in 0..n {
                let hit = reps.iter().position(|&r| {
                    (0..n).all(|z| {
                        (self.d(i, z) - self.d(r, z)).abs() <= tol
                            && (self.d(z, i) - self.d(z, r)).abs() <= tol
                    })
                });
                class[i] = match hit {
                    Some(c) => c,
                    None => {
                        reps.push(i);
                        reps.len() - 1
                    }
                };
            }
        }
        let q = self.induced(&reps).expect("representatives are in range");
        (q, class)
    }
}

pub(crate) fn rational_to_f64(r: &Rational) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

pub(crate) fn check_permutation(perm: &[usize], n: usize) -> Result<()> {
    if perm.len() != n {
        return Err(Error::NotPermutation { n });
    }
    let mut seen = vec![false; n];
    for &p in perm {
        if p >= n || seen[p] {
            return Err(Error::NotPermutation { n });
        }
        seen[p] = true;
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    Diagonal,
    ReverseTriangle,
    Distinguishing,
    MultipleBoundary,
    NegativeEntry,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub kind: ViolationKind,
    pub witness: Vec<usize>,
    pub magnitude: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub valid: bool,
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    fn from_violations(violations: Vec<Violation>) -> Self {
        Self { valid: violations.is_empty(), violations }
    }

    pub fn has(&self, kind: ViolationKind) -> bool {
        self.violations.iter().any(|v| v.kind == kind)
    }
}

/// Checks the causet axioms on the floating point matrix.
///
/// A reverse-triangle violation is reported when
/// `d(i,k) < d(i,j) + d(j,k) - tol` for a chronological pair of links.
/// Two distinct points violate distinguishing when their rows and columns
/// agree within `tol`.
pub fn validate(c: &Causet, tol: f64) -> ValidationReport {
    let n = c.n();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in 0..n {
            let v = c.d(i, j);
            if !(v >= 0.0) || !v.is_finite() {
                violations.push(Violation {
                    kind: ViolationKind::NegativeEntry,
                    witness: vec![i, j],
                    magnitude: if v.is_nan() { f64::NAN } else { -v },
                });
            }
        }
    }

    for i in 0..n {
        let v = c.d(i, i);
        if v.abs() > tol {
            violations.push(Violation {
                kind: ViolationKind::Diagonal,
                witness: vec![i],
                magnitude: v.abs(),
            });
        }
    }

    for i in 0..n {
        for j in 0..n {
            let dij = c.d(i, j);
            if !(dij > 0.0) {
                continue;
            }
            for k in 0..n {
                let djk = c.d(j, k);
                if !(djk > 0.0) {
                    continue;
                }
                let deficit = dij + djk - c.d(i, k);
                if deficit > tol {
                    violations.push(Violation {
                        kind: ViolationKind::ReverseTriangle,
                        witness: vec![i, j, k],
                        magnitude: deficit,
                    });
                }
            }
        }
    }

    for i in 0..n {
        for j in (i + 1)..n {
            let sep = (0..n)
                .map(|z| (c.d(i, z) - c.d(j, z)).abs().max((c.d(z, i) - c.d(z, j)).abs()))
                .fold(0.0, f64::max);
            if sep <= tol {
                violations.push(Violation {
                    kind: ViolationKind::Distinguishing,
                    witness: vec![i, j],
                    magnitude: sep,
                });
            }
        }
    }

    let nulls: Vec<usize> = (0..n).filter(|&i| c.is_null_point(i)).collect();
    if nulls.len() > 1 {
        violations.push(Violation {
            kind: ViolationKind::MultipleBoundary,
            witness: nulls,
            magnitude: 0.0,
        });
    }

    ValidationReport::from_violations(violations)
}

/// Exact validation of the rational payload. Fails when the causet carries
/// no rational payload.
pub fn validate_exact(c: &Causet) -> Result<ValidationReport> {
    let e = exact_entries(c)?;
    let n = c.n();
    let at = |i: usize, j: usize| e[i * n + j];
    let zero = Ratio::<i128>::zero();
    let mut violations = Vec::new();

    for i in 0..n {
        for j in 0..n {
            if at(i, j) < zero {
                violations.push(Violation {
                    kind: ViolationKind::NegativeEntry,
                    witness: vec![i, j],
                    magnitude: -ratio128_to_f64(&at(i, j)),
                });
            }
        }
    }
    for i in 0..n {
        if at(i, i) != zero {
            violations.push(Violation {
                kind: ViolationKind::Diagonal,
                witness: vec![i],
                magnitude: ratio128_to_f64(&at(i, i)).abs(),
            });
        }
    }
    for i in 0..n {
        for j in 0..n {
            if at(i, j) <= zero {
                continue;
            }
            for k in 0..n {
                if at(j, k) <= zero {
                    continue;
                }
                let lhs = at(i, j) + at(j, k);
                if at(i, k) < lhs {
                    violations.push(Violation {
                        kind: ViolationKind::ReverseTriangle,
                        witness: vec![i, j, k],
                        magnitude: ratio128_to_f64(&(lhs - at(i, k))),
                    });
                }
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (0..n).all(|z| at(i, z) == at(j, z) && at(z, i) == at(z, j)) {
                violations.push(Violation {
                    kind: ViolationKind::Distinguishing,
                    witness: vec![i, j],
                    magnitude: 0.0,
                });
            }
        }
    }
    let nulls: Vec<usize> =
        (0..n).filter(|&i| (0..n).all(|j| at(i, j) == zero && at(j, i) == zero)).collect();
    if nulls.len() > 1 {
        violations.push(Violation {
            kind: ViolationKind::MultipleBoundary,
            witness: nulls,
            magnitude: 0.0,
        });
    }
    Ok(ValidationReport::from_violations(violations))
}

/// True when every reverse-triangle inequality of the rational payload holds
/// strictly: `d(i,k) > d(i,j) + d(j,k)` whenever both links are positive.
pub fn strict_reverse_triangle_exact(c: &Causet) -> Result<bool> {
    let e = exact_entries(c)?;
    let n = c.n();
    let zero = Ratio::<i128>::zero();
    for i in 0..n {
        for j in 0..n {
            let dij = e[i * n + j];
            if dij <= zero {
                continue;
            }
            for k in 0..n {
                let djk = e[j * n + k];
                if djk > zero && e[i * n + k] <= dij + djk {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn exact_entries(c: &Causet) -> Result<Vec<Ratio<i128>>> {
    let exact = c
        .exact
        .as_ref()
        .ok_or_else(|| Error::InvalidParameter("causet has no rational payload".into()))?;
    Ok(exact.iter().map(|r| Ratio::new(*r.numer() as i128, *r.denom() as i128)).collect())
}

fn ratio128_to_f64(r: &Ratio<i128>) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

/// The chronological relation `I = {(i, j) : d(i, j) > 0}`, sorted.
pub fn chronological_relation(c: &Causet) -> Vec<(usize, usize)> {
    let n = c.n();
    (0..n)
        .flat_map(|i| (0..n).map(move |j| (i, j)))
        .filter(|&(i, j)| c.d(i, j) > 0.0)
        .collect()
}

pub fn diameter(c: &Causet) -> f64 {
    c.d.iter().copied().fold(0.0, f64::max)
}

/// Appends a spacelike boundary point `i0` (zero row and column).
pub fn adjoin_boundary(c: &Causet) -> Result<Causet> {
    if let Some(b) = c.boundary() {
        return Err(Error::BoundaryPresent(b));
    }
    let n = c.n();
    let mut labels = c.labels.clone();
    labels.push("i0".into());
    let mut d = Vec::with_capacity((n + 1) * (n + 1));
    for i in 0..n {
        d.extend_from_slice(c.row(i));
        d.push(0.0);
    }
    d.extend(std::iter::repeat(0.0).take(n + 1));
    let exact = c.exact.as_ref().map(|e| {
        let mut out = Vec::with_capacity((n + 1) * (n + 1));
        for i in 0..n {
            out.extend_from_slice(&e[i * n..(i + 1) * n]);
            out.push(Rational::zero());
        }
        out.extend(std::iter::repeat(Rational::zero()).take(n + 1));
        out
    });
    Ok(Causet { labels, d, exact })
}

/// Removes the spacelike boundary point.
pub fn strip_boundary(c: &Causet) -> Result<Causet> {
    let b = c.boundary().ok_or(Error::NoBoundary)?;
    let keep: Vec<usize> = (0..c.n()).filter(|&i| i != b).collect();
    c.induced(&keep)
}

/// Quotient of a square nonnegative matrix by the relation "same row and
/// same column". Distinguishing is not required of the input.
pub fn distance_quotient(m: &[Vec<f64>]) -> Result<(Causet, Vec<usize>)> {
    let c = Causet::new(m.to_vec())?;
    Ok(c.quotient(0.0))
}

/// Sorted row and column values, used to prune isometry candidates.
fn profile(c: &Causet, i: usize) -> (Vec<f64>, Vec<f64>) {
    let n = c.n();
    let mut row: Vec<f64> = (0..n).map(|z| c.d(i, z)).collect();
    let mut col: Vec<f64> = (0..n).map(|z| c.d(z, i)).collect();
    row.sort_by(f64::total_cmp);
    col.sort_by(f64::total_cmp);
    (row, col)
}

fn profiles_match(a: &(Vec<f64>, Vec<f64>), b: &(Vec<f64>, Vec<f64>), tol: f64) -> bool {
    a.0.iter().zip(&b.0).all(|(x, y)| (x - y).abs() <= tol)
        && a.1.iter().zip(&b.1).all(|(x, y)| (x - y).abs() <= tol)
}

struct IsoSearch<'a> {
    a: &'a Causet,
    b: &'a Causet,
    tol: f64,
    candidates: Vec<Vec<usize>>,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    found: Vec<Vec<usize>>,
    limit: usize,
}

impl IsoSearch<'_> {
    fn consistent(&self, x: usize, y: usize, depth: usize) -> bool {
        if (self.a.d(x, x) - self.b.d(y, y)).abs() > self.tol {
            return false;
        }
        self.order[..depth].iter().all(|&x2| {
            let y2 = self.map[x2];
            (self.a.d(x, x2) - self.b.d(y, y2)).abs() <= self.tol
                && (self.a.d(x2, x) - self.b.d(y2, y)).abs() <= self.tol
        })
    }

    fn run(&mut self, depth: usize) {
        if self.found.len() >= self.limit {
            return;
        }
        if depth == self.order.len() {
            self.found.push(self.map.clone());
            return;
        }
        let x = self.order[depth];
        for ci in 0..self.candidates[x].len() {
            let y = self.candidates[x][ci];
            if self.used[y] || !self.consistent(x, y, depth) {
                continue;
            }
            self.used[y] = true;
            self.map[x] = y;
            self.run(depth + 1);
            self.used[y] = false;
        }
    }
}

fn isometries_up_to(a: &Causet, b: &Causet, tol: f64, limit: usize) -> Vec<Vec<usize>> {
    let n = a.n();
    if n != b.n() {
        return Vec::new();
    }
    let pa: Vec<_> = (0..n).map(|i| profile(a, i)).collect();
    let pb: Vec<_> = (0..n).map(|i| profile(b, i)).collect();
    let candidates: Vec<Vec<usize>> =
        pa.iter().map(|p| (0..n).filter(|&y| profiles_match(p, &pb[y], tol)).collect()).collect();
    if candidates.iter().any(Vec::is_empty) {
        return Vec::new();
    }
    // Most constrained points first.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&x| (candidates[x].len(), x));
    let mut search = IsoSearch {
        a,
        b,
        tol,
        candidates,
        order,
        map: vec![usize::MAX; n],
        used: vec![false; n],
        found: Vec::new(),
        limit,
    };
    search.run(0);
    search.found
}

/// All bijections `f` with `d_b(f(x), f(x')) = d_a(x, x')` within `tol`.
/// `f[x]` is the image of point `x`. Spaces of different size yield no maps.
pub fn find_isometries(a: &Causet, b: &Causet, tol: f64) -> Vec<Vec<usize>> {
    isometries_up_to(a, b, tol, usize::MAX)
}

/// First isometry found, if any.
pub fn find_isometry(a: &Causet, b: &Causet, tol: f64) -> Option<Vec<usize>> {
    isometries_up_to(a, b, tol, 1).pop()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain2() -> Causet {
        Causet::new(vec![vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap()
    }

    fn chain3() -> Causet {
        Causet::new(vec![vec![0.0, 1.0, 2.0], vec![0.0, 0.0, 1.0], vec![0.0, 0.0, 0.0]]).unwrap()
    }

    #[test]
    fn two_point_chain_is_valid() {
        assert!(validate(&chain2(), 0.0).valid);
    }

    #[test]
    fn reverse_triangle_witness() {
        let c = Causet::new(vec![vec![0.0, 0.5, 1.0], vec![0.0, 0.0, 0.6], vec![0.0, 0.0, 0.0]])
            .unwrap();
        let r = validate(&c, 0.0);
        assert!(!r.valid);
        let v = r.violations.iter().find(|v| v.kind == ViolationKind::ReverseTriangle).unwrap();
        assert_eq!(v.witness, vec![0, 1, 2]);
        assert!((v.magnitude - 0.1).abs() < 1e-12);
    }

    #[test]
    fn indistinguishable_pair() {
        let c = Causet::new(vec![vec![0.0, 0.0], vec![0.0, 0.0]]).unwrap();
        let r = validate(&c, 0.0);
        assert!(!r.valid);
        let v = r.violations.iter().find(|v| v.kind == ViolationKind::Distinguishing).unwrap();
        assert_eq!(v.witness, vec![0, 1]);
        assert!(r.has(ViolationKind::MultipleBoundary));
    }

    #[test]
    fn nan_and_negative_entries_are_listed() {
        let c = Causet::new(vec![vec![0.0, f64::NAN], vec![-1.0, 0.0]]).unwrap();
        let r = validate(&c, 0.0);
        let neg: Vec<_> =
            r.violations.iter().filter(|v| v.kind == ViolationKind::NegativeEntry).collect();
        assert_eq!(neg.len(), 2);
    }

    #[test]
    fn non_square_is_structural_error() {
        let e = Causet::new(vec![vec![0.0, 1.0], vec![0.0]]).unwrap_err();
        assert!(matches!(e, Error::NotSquare { row: 1, .. }));
    }

    #[test]
    fn chronological_relation_examples() {
        assert_eq!(chronological_relation(&chain2()), vec![(0, 1)]);
        assert_eq!(chronological_relation(&chain3()), vec![(0, 1), (0, 2), (1, 2)]);
        assert!(chronological_relation(&Causet::single_point()).is_empty());
    }

    #[test]
    fn diameters() {
        assert_eq!(diameter(&chain2()), 1.0);
        assert_eq!(diameter(&chain3()), 2.0);
        assert_eq!(diameter(&Causet::single_point()), 0.0);
    }

    #[test]
    fn boundary_round_trip() {
        let c = chain2();
        assert_eq!(c.boundary(), None);
        let a = adjoin_boundary(&c).unwrap();
        assert_eq!(a.n(), 3);
        assert_eq!(a.boundary(), Some(2));
        assert!(a.row(2).iter().all(|&v| v == 0.0));
        assert!(validate(&a, 0.0).valid);
        assert_eq!(strip_boundary(&a).unwrap(), c);
        assert_eq!(adjoin_boundary(&a).unwrap_err(), Error::BoundaryPresent(2));
        assert_eq!(strip_boundary(&c).unwrap_err(), Error::NoBoundary);
    }

    #[test]
    fn single_point_is_its_own_boundary() {
        assert_eq!(Causet::single_point().boundary(), Some(0));
    }

    #[test]
    fn quotient_examples() {
        let (q, map) = distance_quotient(&chain2().rows()).unwrap();
        assert_eq!(q, chain2());
        assert_eq!(map, vec![0, 1]);

        let m = vec![vec![0.0, 1.0, 1.0], vec![0.0, 0.0, 0.0], vec![0.0, 0.0, 0.0]];
        let (q, map) = distance_quotient(&m).unwrap();
        assert_eq!(q.n(), 2);
        assert_eq!(map, vec![0, 1, 1]);
        assert!(validate(&q, 0.0).valid);

        let (q, map) = distance_quotient(&vec![vec![0.0; 3]; 3]).unwrap();
        assert_eq!(q.n(), 1);
        assert_eq!(map, vec![0, 0, 0]);
    }

    #[test]
    fn isometry_examples() {
        assert_eq!(find_isometries(&chain2(), &chain2(), DEFAULT_TOL), vec![vec![0, 1]]);
        let b = Causet::new(vec![vec![0.0, 2.0], vec![0.0, 0.0]]).unwrap();
        assert!(find_isometries(&chain2(), &b, DEFAULT_TOL).is_empty());
        assert!(find_isometries(&chain2(), &chain3(), DEFAULT_TOL).is_empty());
    }

    #[test]
    fn isometry_recovers_permutation() {
        // A 5-point causet with trivial automorphism group.
        let c = Causet::new(vec![
            vec![0.0, 1.0, 2.5, 0.0, 3.7],
            vec![0.0, 0.0, 1.2, 0.0, 2.6],
            vec![0.0, 0.0, 0.0, 0.0, 1.1],
            vec![0.0, 0.0, 0.0, 0.0, 0.4],
            vec![0.0, 0.0, 0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(validate(&c, 0.0).valid);
        let perm = [3, 0, 4, 1, 2];
        let b = c.permuted(&perm).unwrap();
        let isos = find_isometries(&c, &b, DEFAULT_TOL);
        assert_eq!(isos.len(), 1);
        // Point perm[k] of `c` became point k of `b`.
        for (k, &old) in perm.iter().enumerate() {
            assert_eq!(isos[0][old], k);
        }
    }

    #[test]
    fn exact_validation_of_rational_payload() {
        let r = |n, d| Rational::new(n, d);
        let c = Causet::from_rational(
            vec!["a".into(), "b".into(), "c".into()],
            vec![
                vec![r(0, 1), r(1, 3), r(2, 3)],
                vec![r(0, 1), r(0, 1), r(1, 3)],
                vec![r(0, 1), r(0, 1), r(0, 1)],
            ],
        )
        .unwrap();
        assert!(validate_exact(&c).unwrap().valid);
        // 1/3 + 1/3 = 2/3 exactly, so the inequality is tight, not strict.
        assert!(!strict_reverse_triangle_exact(&c).unwrap());
        assert!(validate_exact(&chain2()).is_err());
    }
}
