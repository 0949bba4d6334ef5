//! Tagged partitions and their generalized polydiagonals.
//!
//! A tagged partition is stored as a signed labeling of the cells: `0` puts a
//! cell in the zero part, `+k` in part `k` and `-k` in the counterpart of part
//! `k`. The subspace it determines is
//! `{x : x_i = x_j for equal labels, x_i = -x_j for opposite labels, x_i = 0 for label 0}`.

mod blocks;
mod unionfind;

use std::collections::HashMap;
use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rational::Rational;

pub use blocks::{block_decomposition, BlockDecomposition, PartRef};
pub(crate) use unionfind::SignedUnionFind;

/// Canonical signed labeling: classes numbered by first occurrence, each
/// first occurrence positive.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawLabels")]
pub struct TaggedPartition {
    labels: Vec<i32>,
}

#[derive(Deserialize)]
struct RawLabels {
    labels: Vec<i64>,
}

impl TryFrom<RawLabels> for TaggedPartition {
    type Error = Error;

    fn try_from(raw: RawLabels) -> Result<Self> {
        canonicalize(&raw.labels)
    }
}

/// Renumbers classes by first occurrence and flips each class so its first
/// occurrence is positive.
pub fn canonicalize(raw: &[i64]) -> Result<TaggedPartition> {
    if raw.is_empty() {
        return Err(Error::Parse(
            "a tagged partition needs at least one cell".into(),
        ));
    }
    let mut seen: HashMap<u64, (i32, i64)> = HashMap::new();
    let mut labels = Vec::with_capacity(raw.len());
    for &x in raw {
        if x == 0 {
            labels.push(0);
            continue;
        }
        let next = seen.len() as i32 + 1;
        let (index, sign) = *seen.entry(x.unsigned_abs()).or_insert((next, x.signum()));
        labels.push(if x.signum() == sign { index } else { -index });
    }
    Ok(TaggedPartition { labels })
}

/// Parses a comma- or whitespace-separated list of signed integers.
pub fn parse_partition(s: &str, n: usize) -> Result<TaggedPartition> {
    let tokens: Vec<&str> = s
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .collect();
    let raw = tokens
        .iter()
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Error::Parse(format!("not an integer label: {t:?}")))
        })
        .collect::<Result<Vec<_>>>()?;
    if raw.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            found: raw.len(),
        });
    }
    canonicalize(&raw)
}

impl TaggedPartition {
    pub fn labels(&self) -> &[i32] {
        &self.labels
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    /// Number of parts, which is also the dimension of the subspace.
    pub fn p(&self) -> usize {
        self.labels.iter().copied().max().unwrap_or(0).max(0) as usize
    }

    /// Number of parts that have a counterpart.
    pub fn q(&self) -> usize {
        let mut paired = vec![false; self.p() + 1];
        for &l in &self.labels {
            if l < 0 {
                paired[(-l) as usize] = true;
            }
        }
        paired.iter().filter(|&&b| b).count()
    }

    /// 1 when a zero part exists.
    pub fn r(&self) -> usize {
        usize::from(self.labels.contains(&0))
    }

    pub fn dim(&self) -> usize {
        self.p()
    }

    pub fn is_standard(&self) -> bool {
        self.labels.iter().all(|&l| l > 0)
    }

    pub fn is_null(&self) -> bool {
        self.labels.iter().all(|&l| l == 0)
    }

    pub fn is_full(&self) -> bool {
        self.p() == self.n()
    }

    pub fn null(n: usize) -> Self {
        TaggedPartition { labels: vec![0; n] }
    }

    /// Every cell in its own part: the full space.
    pub fn singletons(n: usize) -> Self {
        TaggedPartition {
            labels: (1..=n as i32).collect(),
        }
    }

    /// All cells in one part: the full diagonal.
    pub fn diagonal(n: usize) -> Self {
        TaggedPartition { labels: vec![1; n] }
    }

    pub fn has_counterpart(&self, class: usize) -> bool {
        self.labels.contains(&-(class as i32))
    }

    /// Cells (0-indexed) with label `+class`.
    pub fn part(&self, class: usize) -> Vec<usize> {
        self.cells_with(class as i32)
    }

    /// Cells (0-indexed) with label `-class`.
    pub fn counterpart(&self, class: usize) -> Vec<usize> {
        self.cells_with(-(class as i32))
    }

    pub fn zero_part(&self) -> Vec<usize> {
        self.cells_with(0)
    }

    fn cells_with(&self, label: i32) -> Vec<usize> {
        self.labels
            .iter()
            .enumerate()
            .filter(|(_, &l)| l == label)
            .map(|(c, _)| c)
            .collect()
    }

    /// Whether `x` satisfies the defining equations of the subspace.
    pub fn contains<T>(&self, x: &[T]) -> bool
    where
        T: PartialEq + Zero + Clone + std::ops::Neg<Output = T>,
    {
        assert_eq!(x.len(), self.n(), "vector length must equal the cell count");
        let mut rep: Vec<Option<&T>> = vec![None; self.p() + 1];
        for (c, &l) in self.labels.iter().enumerate() {
            if l == 0 {
                if !x[c].is_zero() {
                    return false;
                }
            } else if l > 0 && rep[l as usize].is_none() {
                rep[l as usize] = Some(&x[c]);
            }
        }
        self.labels.iter().zip(x).all(|(&l, v)| match l {
            0 => true,
            l if l > 0 => rep[l as usize] == Some(v),
            l => rep[(-l) as usize].is_some_and(|r| -(r.clone()) == *v),
        })
    }

    /// Basis vectors b_k with entries in {-1, 0, 1}.
    pub fn basis_signs(&self) -> Vec<Vec<i8>> {
        (1..=self.p() as i32)
            .map(|k| {
                self.labels
                    .iter()
                    .map(|&l| {
                        if l == k {
                            1
                        } else if l == -k {
                            -1
                        } else {
                            0
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// Maps reduced coordinates `y` (one per part) to the full state.
    pub fn lift(&self, y: &[f64]) -> Vec<f64> {
        assert_eq!(y.len(), self.p());
        self.labels
            .iter()
            .map(|&l| match l {
                0 => 0.0,
                l if l > 0 => y[l as usize - 1],
                l => -y[(-l) as usize - 1],
            })
            .collect()
    }

    /// Reads the reduced coordinates from the first cell of each part.
    pub fn project(&self, x: &[f64]) -> Vec<f64> {
        (1..=self.p()).map(|k| x[self.part(k)[0]]).collect()
    }

    /// Largest violation of the defining equations, checked pairwise.
    pub fn residual(&self, x: &[f64]) -> f64 {
        let mut worst: f64 = 0.0;
        for (i, &li) in self.labels.iter().enumerate() {
            if li == 0 {
                worst = worst.max(x[i].abs());
                continue;
            }
            for (j, &lj) in self.labels.iter().enumerate().skip(i + 1) {
                if lj == li {
                    worst = worst.max((x[i] - x[j]).abs());
                } else if lj == -li {
                    worst = worst.max((x[i] + x[j]).abs());
                }
            }
        }
        worst
    }
}

impl fmt::Display for TaggedPartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.labels.iter().map(i32::to_string).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// A tagged partition together with the basis of its subspace.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralizedPolydiagonal {
    pub partition: TaggedPartition,
    pub basis: Vec<Vec<Rational>>,
}

impl GeneralizedPolydiagonal {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

pub fn membership_basis(p: &TaggedPartition) -> GeneralizedPolydiagonal {
    let basis = p
        .basis_signs()
        .into_iter()
        .map(|b| {
            b.into_iter()
                .map(|s| match s {
                    1 => Rational::one(),
                    -1 => -Rational::one(),
                    _ => Rational::zero(),
                })
                .collect()
        })
        .collect();
    GeneralizedPolydiagonal {
        partition: p.clone(),
        basis,
    }
}

/// Which partitions an enumeration yields.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PartitionFilter {
    All,
    StandardOnly,
    NonstandardOnly,
}

/// Lexicographic stream of every canonical labeling of `n` cells.
pub struct TaggedPartitions {
    labels: Vec<i32>,
    filter: PartitionFilter,
    done: bool,
}

pub fn enumerate_tagged_partitions(n: usize, filter: PartitionFilter) -> TaggedPartitions {
    TaggedPartitions {
        labels: vec![0; n],
        filter,
        done: n == 0,
    }
}

impl TaggedPartitions {
    // Position i may take any value in [-m, m + 1] where m is the largest
    // class index among positions before i.
    fn advance(&mut self) -> bool {
        let n = self.labels.len();
        let mut prefix_max = Vec::with_capacity(n);
        let mut m = 0;
        for &l in &self.labels {
            prefix_max.push(m);
            m = m.max(l);
        }
        for i in (0..n).rev() {
            if self.labels[i] < prefix_max[i] + 1 {
                self.labels[i] += 1;
                let mut m = prefix_max[i].max(self.labels[i]);
                for j in i + 1..n {
                    self.labels[j] = -m;
                    m = m.max(self.labels[j]);
                }
                return true;
            }
        }
        false
    }
}

impl Iterator for TaggedPartitions {
    type Item = TaggedPartition;

    fn next(&mut self) -> Option<TaggedPartition> {
        while !self.done {
            let current = TaggedPartition {
                labels: self.labels.clone(),
            };
            self.done = !self.advance();
            let keep = match self.filter {
                PartitionFilter::All => true,
                PartitionFilter::StandardOnly => current.is_standard(),
                PartitionFilter::NonstandardOnly => !current.is_standard(),
            };
            if keep {
                return Some(current);
            }
        }
        None
    }
}

/// Number of tagged partitions of `n` cells.
pub fn count_tagged_partitions(n: usize) -> u128 {
    // a[m]: labelings of m cells without a zero part. The block holding the
    // first cell has size k and 2^(k-1) ways to split into part/counterpart.
    let mut binom = vec![vec![0u128; n + 1]; n + 1];
    for i in 0..=n {
        binom[i][0] = 1;
        for j in 1..=i {
            binom[i][j] = binom[i - 1][j - 1] + binom[i - 1][j];
        }
    }
    let mut a = vec![0u128; n + 1];
    a[0] = 1;
    for m in 1..=n {
        a[m] = (1..=m)
            .map(|k| binom[m - 1][k - 1] * (1u128 << (k - 1)) * a[m - k])
            .sum();
    }
    (0..=n).map(|z| binom[n][z] * a[n - z]).sum()
}

/// Smallest generalized polydiagonal containing exact vectors.
pub fn minimal_polydiagonal_exact(vectors: &[Vec<Rational>]) -> Result<TaggedPartition> {
    minimal_polydiagonal_by(
        vectors,
        |a, b| a == b,
        |a, b| *a == -b.clone(),
        Zero::is_zero,
    )
}

/// Smallest generalized polydiagonal containing floating vectors, comparing
/// coordinates with absolute tolerance `tol`.
pub fn minimal_polydiagonal_containing(vectors: &[Vec<f64>], tol: f64) -> Result<TaggedPartition> {
    if !(tol >= 0.0) {
        return Err(Error::InvalidArgument(
            "tolerance must be nonnegative".into(),
        ));
    }
    if vectors.iter().flatten().any(|v| !v.is_finite()) {
        return Err(Error::Numerical("non-finite vector entry".into()));
    }
    minimal_polydiagonal_by(
        vectors,
        |a, b| (a - b).abs() <= tol,
        |a, b| (a + b).abs() <= tol,
        |a| a.abs() <= tol,
    )
}

fn minimal_polydiagonal_by<T>(
    vectors: &[Vec<T>],
    equal: impl Fn(&T, &T) -> bool,
    opposite: impl Fn(&T, &T) -> bool,
    is_zero: impl Fn(&T) -> bool,
) -> Result<TaggedPartition> {
    let n = vectors
        .first()
        .map(Vec::len)
        .ok_or_else(|| Error::InvalidArgument("at least one vector is required".into()))?;
    if n == 0 || vectors.iter().any(|v| v.len() != n) {
        return Err(Error::InvalidArgument(
            "vectors must share a positive length".into(),
        ));
    }
    let zero: Vec<bool> = (0..n)
        .map(|i| vectors.iter().all(|v| is_zero(&v[i])))
        .collect();
    let mut uf = SignedUnionFind::new(n);
    for i in 0..n {
        if zero[i] {
            uf.set_zero(i);
            continue;
        }
        for j in i + 1..n {
            if zero[j] {
                continue;
            }
            let eq = vectors.iter().all(|v| equal(&v[i], &v[j]));
            let op = vectors.iter().all(|v| opposite(&v[i], &v[j]));
            match (eq, op) {
                (true, true) => return Err(Error::Ambiguous { i: i + 1, j: j + 1 }),
                (true, false) => uf.union(i, j, false),
                (false, true) => uf.union(i, j, true),
                (false, false) => {}
            }
        }
    }
    let labels = uf.labels();
    // transitivity under a tolerance can close an odd cycle
    if let Some(i) = (0..n).find(|&i| labels[i] == 0 && !zero[i]) {
        return Err(Error::Ambiguous { i: i + 1, j: i + 1 });
    }
    canonicalize(&labels)
}

/// Canonical partition of the intersection of the two subspaces.
pub fn intersect(a: &TaggedPartition, b: &TaggedPartition) -> TaggedPartition {
    assert_eq!(a.n(), b.n(), "partitions must have the same cell count");
    let n = a.n();
    let mut uf = SignedUnionFind::new(n);
    for p in [a, b] {
        let mut first: Vec<Option<usize>> = vec![None; p.p() + 1];
        for (c, &l) in p.labels.iter().enumerate() {
            if l == 0 {
                uf.set_zero(c);
                continue;
            }
            let k = l.unsigned_abs() as usize;
            match first[k] {
                None => first[k] = Some(c),
                Some(f) => uf.union(f, c, (p.labels[f] > 0) != (l > 0)),
            }
        }
    }
    canonicalize(&uf.labels()).expect("nonempty labeling")
}

/// Smallest generalized polydiagonal containing the sum of the given
/// subspaces. A relation between two cells holds on the sum exactly when it
/// holds on every summand, so cells are grouped by their label signatures.
/// An empty list gives the null partition on `n` cells.
pub fn polydiagonal_sum(parts: &[&TaggedPartition], n: usize) -> TaggedPartition {
    assert!(
        parts.iter().all(|p| p.n() == n),
        "partitions must have {n} cells"
    );
    let mut ids: HashMap<Vec<i32>, i64> = HashMap::new();
    let labels: Vec<i64> = (0..n)
        .map(|c| {
            let sig: Vec<i32> = parts.iter().map(|p| p.labels[c]).collect();
            if sig.iter().all(|&l| l == 0) {
                return 0;
            }
            let neg: Vec<i32> = sig.iter().map(|l| -l).collect();
            if let Some(&id) = ids.get(&sig) {
                id
            } else if let Some(&id) = ids.get(&neg) {
                -id
            } else {
                let id = ids.len() as i64 + 1;
                ids.insert(sig, id);
                id
            }
        })
        .collect();
    canonicalize(&labels).expect("nonempty labeling")
}

/// Whether the subspace of `a` lies inside the subspace of `b`.
pub fn is_subspace_of(a: &TaggedPartition, b: &TaggedPartition) -> bool {
    assert_eq!(a.n(), b.n(), "partitions must have the same cell count");
    a.basis_signs()
        .iter()
        .all(|v| b.contains(&v.iter().map(|&s| s as i64).collect::<Vec<_>>()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn tp(l: &[i64]) -> TaggedPartition {
        canonicalize(l).unwrap()
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(tp(&[-3, -3, 5, 0]).labels(), &[1, 1, 2, 0]);
        assert_eq!(tp(&[1, 1, -2, 2]).labels(), &[1, 1, 2, -2]);
        assert_eq!(tp(&[2, 2, 2, 2]).labels(), &[1, 1, 1, 1]);
        assert!(canonicalize(&[]).is_err());
    }

    #[test]
    fn parse_forms() {
        assert_eq!(
            parse_partition("1,1,2,-2", 4).unwrap().labels(),
            &[1, 1, 2, -2]
        );
        assert_eq!(parse_partition("1 -1  2", 3).unwrap().labels(), &[1, -1, 2]);
        assert!(parse_partition("0,0,0", 3).unwrap().is_null());
        assert!(matches!(
            parse_partition("1,1", 4),
            Err(Error::LengthMismatch { .. })
        ));
        assert!(matches!(parse_partition("1,x", 2), Err(Error::Parse(_))));
    }

    #[test]
    fn pqr() {
        let p = tp(&[1, 2, 2, -1, 0]);
        assert_eq!((p.p(), p.q(), p.r()), (2, 1, 1));
        let s = tp(&[1, 1, 2]);
        assert!(s.is_standard());
        assert_eq!((s.p(), s.q(), s.r()), (2, 0, 0));
    }

    #[test]
    fn small_enumerations() {
        let two: Vec<Vec<i32>> = enumerate_tagged_partitions(2, PartitionFilter::All)
            .map(|p| p.labels().to_vec())
            .collect();
        assert_eq!(
            two,
            vec![
                vec![0, 0],
                vec![0, 1],
                vec![1, -1],
                vec![1, 0],
                vec![1, 1],
                vec![1, 2]
            ]
        );
        assert_eq!(
            enumerate_tagged_partitions(1, PartitionFilter::All).count(),
            2
        );
        assert_eq!(
            enumerate_tagged_partitions(2, PartitionFilter::StandardOnly).count(),
            2
        );
        for n in 1..=6 {
            let all: Vec<_> = enumerate_tagged_partitions(n, PartitionFilter::All).collect();
            assert_eq!(all.len() as u128, count_tagged_partitions(n));
            assert!(
                all.windows(2).all(|w| w[0] < w[1]),
                "strictly increasing order"
            );
        }
    }

    #[test]
    fn basis() {
        let b = membership_basis(&tp(&[1, 1, 2, -2]));
        assert_eq!(
            b.basis,
            vec![
                vec![int(1), int(1), int(0), int(0)],
                vec![int(0), int(0), int(1), int(-1)]
            ]
        );
        assert_eq!(membership_basis(&TaggedPartition::null(3)).dim(), 0);
    }

    #[test]
    fn minimal_polydiagonals() {
        let f = |v: &[&[f64]]| {
            minimal_polydiagonal_containing(&v.iter().map(|x| x.to_vec()).collect::<Vec<_>>(), 1e-9)
                .unwrap()
        };
        assert_eq!(f(&[&[1.0, 1.0, -2.0, 2.0]]).labels(), &[1, 1, 2, -2]);
        assert_eq!(
            f(&[&[1.0, 1.0, 0.0, 0.0], &[1.0, 1.0, 1.0, 1.0]]).labels(),
            &[1, 1, 2, 2]
        );
        assert_eq!(f(&[&[0.0, -2.0, 2.0, -2.0]]).labels(), &[0, 1, -1, 1]);
        let tiny = minimal_polydiagonal_containing(&[vec![1e-3, -1e-3]], 1e-2).unwrap();
        assert!(tiny.is_null());
        let exact = minimal_polydiagonal_exact(&[vec![int(2), int(-2), int(0)]]).unwrap();
        assert_eq!(exact.labels(), &[1, -1, 0]);
    }

    #[test]
    fn intersections() {
        assert!(intersect(&tp(&[1, -1, 0, 0]), &tp(&[1, 1, 2, -2])).is_null());
        assert_eq!(
            intersect(&tp(&[1, 1, 2, 2]), &tp(&[1, 2, 2, 2])).labels(),
            &[1, 1, 1, 1]
        );
        let p = tp(&[1, -1, 2, 0]);
        assert_eq!(intersect(&p, &p), p);
    }

    #[test]
    fn sums() {
        let a = tp(&[1, -1, 0, 0]);
        let b = tp(&[0, 0, 1, 1]);
        assert_eq!(polydiagonal_sum(&[&a, &b], 4).labels(), &[1, -1, 2, 2]);
        assert_eq!(polydiagonal_sum(&[&a], 4), a);
        assert!(polydiagonal_sum(&[], 3).is_null());
        let c = tp(&[1, 1, 1, 1]);
        assert_eq!(polydiagonal_sum(&[&a, &c], 4).labels(), &[1, 2, 3, 3]);
    }

    #[test]
    fn inclusions() {
        assert!(is_subspace_of(&tp(&[1, -1, 0, 0]), &tp(&[1, 2, 3, -3])));
        assert!(is_subspace_of(
            &TaggedPartition::null(4),
            &tp(&[1, 1, 2, 2])
        ));
        assert!(!is_subspace_of(&tp(&[1, 1, 2, 2]), &tp(&[1, 2, 3, -3])));
    }

    #[test]
    fn lift_project_residual() {
        let p = tp(&[1, -1, 0, 2]);
        let x = p.lift(&[0.5, 2.0]);
        assert_eq!(x, vec![0.5, -0.5, 0.0, 2.0]);
        assert_eq!(p.project(&x), vec![0.5, 2.0]);
        assert_eq!(p.residual(&x), 0.0);
        assert!((p.residual(&[0.5, -0.4, 0.0, 2.0]) - 0.1).abs() < 1e-12);
    }
}
