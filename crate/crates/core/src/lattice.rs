//! Lattices of generalized polydiagonals invariant under a matrix.
//!
//! [`lattice_bruteforce`] filters every tagged partition and is exact.
//! [`lattice_eigen`] builds candidates from the real invariant subspaces of
//! the spectral decomposition and verifies each one exactly.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariance::{
    classes_from_flags, classify_with, ClassificationFlags, InvarianceTester, SystemClass,
};
use crate::matrix::Matrix;
use crate::network::{laplacian, Network};
use crate::partition::{
    count_tagged_partitions, enumerate_tagged_partitions, intersect, is_subspace_of,
    minimal_polydiagonal_containing, polydiagonal_sum, PartitionFilter, TaggedPartition,
};

pub const DEFAULT_N_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum MatrixTag {
    W,
    L,
}

impl std::fmt::Display for MatrixTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MatrixTag::W => "W",
            MatrixTag::L => "L",
        })
    }
}

/// Invariant generalized polydiagonals of one matrix, sorted by label.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantLattice {
    pub matrix_tag: MatrixTag,
    pub n: usize,
    pub elements: Vec<TaggedPartition>,
}

impl InvariantLattice {
    pub fn new(
        matrix_tag: MatrixTag,
        n: usize,
        elements: impl IntoIterator<Item = TaggedPartition>,
    ) -> Self {
        let set: BTreeSet<TaggedPartition> = elements.into_iter().collect();
        InvariantLattice {
            matrix_tag,
            n,
            elements: set.into_iter().collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, p: &TaggedPartition) -> bool {
        self.elements.binary_search(p).is_ok()
    }

    pub fn is_intersection_closed(&self) -> bool {
        self.elements.iter().enumerate().all(|(i, a)| {
            self.elements[i + 1..]
                .iter()
                .all(|b| self.contains(&intersect(a, b)))
        })
    }

    /// Covering pairs `(lower, upper)` of the inclusion order, as indices.
    pub fn hasse_edges(&self) -> Vec<(usize, usize)> {
        let m = self.elements.len();
        let below: Vec<Vec<bool>> = (0..m)
            .into_par_iter()
            .map(|a| {
                (0..m)
                    .map(|b| a != b && is_subspace_of(&self.elements[a], &self.elements[b]))
                    .collect()
            })
            .collect();
        let mut edges = Vec::new();
        for a in 0..m {
            for b in 0..m {
                if below[a][b] && !(0..m).any(|c| below[a][c] && below[c][b]) {
                    edges.push((a, b));
                }
            }
        }
        edges
    }
}

/// DOT digraph of the covering relation, edges pointing up.
pub fn hasse_dot(lat: &InvariantLattice) -> String {
    let mut out = format!("digraph lattice_{} {{\n  rankdir=BT;\n", lat.matrix_tag);
    for (k, p) in lat.elements.iter().enumerate() {
        out.push_str(&format!("  e{k} [label=\"{p}\\ndim {}\"];\n", p.dim()));
    }
    for (a, b) in lat.hasse_edges() {
        out.push_str(&format!("  e{a} -> e{b};\n"));
    }
    out.push_str("}\n");
    out
}

fn check_size(n: usize, n_limit: usize) -> Result<()> {
    if n > n_limit {
        return Err(Error::SizeLimit {
            n,
            limit: n_limit,
            estimate: count_tagged_partitions(n),
        });
    }
    Ok(())
}

/// Every tagged partition whose subspace `m` leaves invariant.
pub fn lattice_bruteforce(m: &Matrix, tag: MatrixTag, n_limit: usize) -> Result<InvariantLattice> {
    let n = m.rows();
    check_size(n, n_limit)?;
    let tester = InvarianceTester::new(m);
    let elements: Vec<TaggedPartition> = enumerate_tagged_partitions(n, PartitionFilter::All)
        .par_bridge()
        .filter(|p| tester.check(p))
        .collect();
    Ok(InvariantLattice::new(tag, n, elements))
}

/// Brute-force lattices of W and L from one pass over the partitions.
pub fn lattices_bruteforce(
    net: &Network,
    n_limit: usize,
) -> Result<(InvariantLattice, InvariantLattice)> {
    let n = net.n();
    check_size(n, n_limit)?;
    let tw = InvarianceTester::new(net.adjacency());
    let tl = InvarianceTester::new(&laplacian(net));
    let hits: Vec<(TaggedPartition, bool, bool)> =
        enumerate_tagged_partitions(n, PartitionFilter::All)
            .par_bridge()
            .filter_map(|p| {
                let (w, l) = (tw.check(&p), tl.check(&p));
                (w || l).then_some((p, w, l))
            })
            .collect();
    let w = hits.iter().filter(|h| h.1).map(|h| h.0.clone());
    let l = hits.iter().filter(|h| h.2).map(|h| h.0.clone());
    Ok((
        InvariantLattice::new(MatrixTag::W, n, w),
        InvariantLattice::new(MatrixTag::L, n, l),
    ))
}

#[derive(Clone, Debug)]
pub struct EigenOptions {
    /// Entry tolerance when reading relations off numerical bases.
    pub tol: f64,
    /// Cap on partial sums kept while combining components.
    pub max_states: usize,
}

impl Default for EigenOptions {
    fn default() -> Self {
        EigenOptions {
            tol: 1e-9,
            max_states: 1 << 20,
        }
    }
}

/// A group of eigenvalues and the invariant flats found in its real
/// generalized eigenspace.
#[derive(Clone, Debug, Serialize)]
pub struct SpectralComponent {
    /// (real, imaginary) parts.
    pub eigenvalues: Vec<(f64, f64)>,
    pub dim: usize,
    /// Labels of invariant subspaces of this component, with their dimensions.
    pub invariant_flats: Vec<(TaggedPartition, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct EigenLattice {
    pub lattice: InvariantLattice,
    pub components: Vec<SpectralComponent>,
    /// Candidates that failed exact verification.
    pub rejected: Vec<TaggedPartition>,
    pub warnings: Vec<String>,
}

/// Invariant generalized polydiagonals from the spectral structure of `m`.
///
/// Any invariant subspace is the direct sum of its intersections with the
/// real generalized eigenspaces, and each such intersection is the
/// eigenspace cut by the same polydiagonal constraints. So the method
/// enumerates constraint cuts of each eigenspace that are invariant, combines
/// one per eigenspace, keeps sums whose polydiagonal closure has the right
/// dimension and verifies them exactly.
pub fn lattice_eigen(m: &Matrix, tag: MatrixTag, opts: &EigenOptions) -> Result<EigenLattice> {
    if !m.is_square() {
        return Err(Error::InvalidArgument("matrix must be square".into()));
    }
    if !(opts.tol > 0.0) {
        return Err(Error::InvalidArgument("tolerance must be positive".into()));
    }
    let n = m.rows();
    let mf = m.to_f64();
    let norm = mf.amax().max(1.0);
    let mut warnings = Vec::new();

    let clusters = eigenvalue_clusters(&mf)?;
    let mut components = Vec::new();
    let mut flat_lists: Vec<Vec<(TaggedPartition, usize)>> = Vec::new();
    for cluster in &clusters {
        let (basis, separation) = component_basis(&mf, cluster, norm);
        if separation > 1e-4 {
            warnings.push(format!(
                "eigenvalue group {} is poorly separated from the rest of the spectrum ({separation:.1e})",
                describe(cluster)
            ));
        }
        let tol = opts.tol.max(1e3 * separation);
        let flats = invariant_flats(&mf, basis, tol, norm, &mut warnings);
        components.push(SpectralComponent {
            eigenvalues: cluster.iter().map(|z| (z.re, z.im)).collect(),
            dim: cluster.len(),
            invariant_flats: flats.clone(),
        });
        flat_lists.push(flats);
    }

    // partial sums depend only on the closure label and the dimension
    let mut states: HashSet<(TaggedPartition, usize)> = HashSet::new();
    states.insert((TaggedPartition::null(n), 0));
    for flats in &flat_lists {
        let mut next = HashSet::new();
        for (label, dim) in &states {
            for (f, d) in flats {
                next.insert((polydiagonal_sum(&[label, f], n), dim + d));
            }
        }
        if next.len() > opts.max_states {
            return Err(Error::Numerical(format!(
                "eigen combination exceeded {} partial sums; use the brute-force method",
                opts.max_states
            )));
        }
        states = next;
    }

    let tester = InvarianceTester::new(m);
    let mut accepted = BTreeSet::new();
    let mut rejected = BTreeSet::new();
    for (label, dim) in states {
        if label.dim() != dim {
            continue;
        }
        if tester.check(&label) {
            accepted.insert(label);
        } else {
            rejected.insert(label);
        }
    }
    accepted.insert(TaggedPartition::null(n));
    if tester.check(&TaggedPartition::singletons(n)) {
        accepted.insert(TaggedPartition::singletons(n));
    }
    let closed = intersection_closure(accepted);
    Ok(EigenLattice {
        lattice: InvariantLattice::new(tag, n, closed),
        components,
        rejected: rejected.into_iter().collect(),
        warnings,
    })
}

type Complex = nalgebra::Complex<f64>;

fn describe(cluster: &[Complex]) -> String {
    let parts: Vec<String> = cluster
        .iter()
        .map(|z| {
            if z.im == 0.0 {
                format!("{:.6}", z.re)
            } else {
                format!("{:.6}{:+.6}i", z.re, z.im)
            }
        })
        .collect();
    format!("{{{}}}", parts.join(", "))
}

/// Eigenvalues grouped so that numerically close values, including the
/// split images of a defective eigenvalue, and conjugates share a group.
fn eigenvalue_clusters(mf: &DMatrix<f64>) -> Result<Vec<Vec<Complex>>> {
    let n = mf.nrows();
    let schur = nalgebra::linalg::Schur::try_new(mf.clone(), f64::EPSILON, 100_000)
        .ok_or_else(|| Error::Numerical("Schur decomposition did not converge".into()))?;
    let eig: Vec<Complex> = schur.complex_eigenvalues().iter().cloned().collect();
    let scale = mf.norm().max(1.0);
    let tau = (10.0 * (n as f64 * f64::EPSILON * scale).powf(1.0 / n as f64)).max(1e-6);
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], a: usize) -> usize {
        let mut a = a;
        while parent[a] != a {
            parent[a] = parent[parent[a]];
            a = parent[a];
        }
        a
    }
    for a in 0..n {
        for b in a + 1..n {
            if (eig[a] - eig[b]).norm() <= tau || (eig[a] - eig[b].conj()).norm() <= tau {
                let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
                parent[ra] = rb;
            }
        }
    }
    let mut groups: BTreeMap<usize, Vec<Complex>> = BTreeMap::new();
    for a in 0..n {
        let r = root(&mut parent, a);
        groups.entry(r).or_default().push(eig[a]);
    }
    Ok(groups.into_values().collect())
}

/// Orthonormal basis (columns) of the real generalized eigenspace of a
/// cluster, and the ratio of the largest kept to the smallest discarded
/// singular value as an accuracy estimate.
fn component_basis(mf: &DMatrix<f64>, cluster: &[Complex], norm: f64) -> (DMatrix<f64>, f64) {
    let n = mf.nrows();
    let id = DMatrix::<f64>::identity(n, n);
    let scaled = mf / norm;
    let mut poly = id.clone();
    for z in cluster {
        let shifted = &scaled - &id * (z.re / norm);
        if z.im == 0.0 {
            poly = &poly * shifted;
        } else if z.im > 0.0 {
            let im = z.im / norm;
            poly = &poly * (&shifted * &shifted + &id * (im * im));
        }
    }
    let k = cluster.len();
    let svd = nalgebra::linalg::SVD::new(poly, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");
    let sv = &svd.singular_values;
    let basis = DMatrix::from_fn(n, k, |i, c| v_t[(n - k + c, i)]);
    let separation = if k == n {
        0.0
    } else {
        let kept = sv[n - k];
        let next = sv[n - k - 1];
        if next == 0.0 {
            1.0
        } else {
            kept / next
        }
    };
    (basis, separation)
}

fn columns(b: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..b.ncols())
        .map(|c| b.column(c).iter().cloned().collect())
        .collect()
}

fn flat_label(b: &DMatrix<f64>, tol: f64) -> Result<TaggedPartition> {
    if b.ncols() == 0 {
        return Ok(TaggedPartition::null(b.nrows()));
    }
    minimal_polydiagonal_containing(&columns(b), tol)
}

/// Orthonormal basis of the part of span(b) orthogonal to `normal`.
fn cut(b: &DMatrix<f64>, c: &DVector<f64>) -> DMatrix<f64> {
    let d = b.ncols();
    let mut w = c / c.norm();
    let sign = if w[0] >= 0.0 { 1.0 } else { -1.0 };
    w[0] += sign;
    let w = &w / w.norm();
    let h = DMatrix::<f64>::identity(d, d) - &w * w.transpose() * 2.0;
    b * h.columns(1, d - 1)
}

/// Constraint cuts of the component spanned by `basis` that are numerically
/// invariant, keyed by their polydiagonal closure.
fn invariant_flats(
    mf: &DMatrix<f64>,
    basis: DMatrix<f64>,
    tol: f64,
    norm: f64,
    warnings: &mut Vec<String>,
) -> Vec<(TaggedPartition, usize)> {
    let n = mf.nrows();
    let inv_tol = (1e3 * tol).max(1e-6) * norm;
    let mut normals: Vec<DVector<f64>> = Vec::new();
    for i in 0..n {
        normals.push(DVector::from_fn(n, |k, _| if k == i { 1.0 } else { 0.0 }));
        for j in i + 1..n {
            for s in [-1.0, 1.0] {
                let v = DVector::from_fn(n, |k, _| {
                    if k == i {
                        1.0
                    } else if k == j {
                        s
                    } else {
                        0.0
                    }
                });
                normals.push(v / 2f64.sqrt());
            }
        }
    }

    let mut seen: HashMap<TaggedPartition, ()> = HashMap::new();
    let mut found = Vec::new();
    let mut frontier: Vec<DMatrix<f64>> = Vec::new();
    match flat_label(&basis, tol) {
        Ok(l) => {
            seen.insert(l, ());
            frontier.push(basis);
        }
        Err(e) => warnings.push(format!("component skipped: {e}")),
    }
    while let Some(b) = frontier.pop() {
        let label = flat_label(&b, tol).expect("labels of queued flats were computed");
        let d = b.ncols();
        let image = mf * &b;
        let residual = &image - &b * (b.transpose() * &image);
        if residual.amax() <= inv_tol {
            found.push((label.clone(), d));
        }
        if d == 0 {
            continue;
        }
        for a in &normals {
            let c = b.transpose() * a;
            if c.norm() <= tol {
                continue;
            }
            let child = cut(&b, &c);
            match flat_label(&child, tol) {
                Ok(l) => {
                    if seen.insert(l, ()).is_none() {
                        frontier.push(child);
                    }
                }
                Err(e) => warnings.push(format!("flat skipped: {e}")),
            }
        }
    }
    if !found.iter().any(|(_, d)| *d == 0) {
        found.push((TaggedPartition::null(n), 0));
    }
    found.sort();
    found
}

/// Adds pairwise intersections until the set is closed.
pub fn intersection_closure(
    elements: impl IntoIterator<Item = TaggedPartition>,
) -> BTreeSet<TaggedPartition> {
    let mut set: BTreeSet<TaggedPartition> = elements.into_iter().collect();
    let mut queue: Vec<TaggedPartition> = set.iter().cloned().collect();
    while let Some(a) = queue.pop() {
        let fresh: Vec<TaggedPartition> = set
            .iter()
            .map(|b| intersect(&a, b))
            .filter(|c| !set.contains(c))
            .collect();
        for c in fresh {
            if set.insert(c.clone()) {
                queue.push(c);
            }
        }
    }
    set
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LatticeMethod {
    Brute,
    Eigen,
    Both,
}

impl std::str::FromStr for LatticeMethod {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "brute" => Ok(LatticeMethod::Brute),
            "eigen" => Ok(LatticeMethod::Eigen),
            "both" => Ok(LatticeMethod::Both),
            _ => Err(Error::InvalidArgument(format!(
                "unknown method {s:?}; expected brute, eigen or both"
            ))),
        }
    }
}

/// One matrix's lattice computed by the requested method(s).
#[derive(Clone, Debug, Serialize)]
pub struct LatticeResult {
    pub lattice: InvariantLattice,
    /// Present with method `both`: whether the eigen method matched.
    pub methods_agree: Option<bool>,
    pub eigen_only: Vec<TaggedPartition>,
    pub brute_only: Vec<TaggedPartition>,
    pub warnings: Vec<String>,
}

pub fn compute_lattice(
    m: &Matrix,
    tag: MatrixTag,
    method: LatticeMethod,
    n_limit: usize,
    opts: &EigenOptions,
) -> Result<LatticeResult> {
    match method {
        LatticeMethod::Brute => Ok(LatticeResult {
            lattice: lattice_bruteforce(m, tag, n_limit)?,
            methods_agree: None,
            eigen_only: Vec::new(),
            brute_only: Vec::new(),
            warnings: Vec::new(),
        }),
        LatticeMethod::Eigen => {
            let e = lattice_eigen(m, tag, opts)?;
            Ok(LatticeResult {
                lattice: e.lattice,
                methods_agree: None,
                eigen_only: Vec::new(),
                brute_only: Vec::new(),
                warnings: e.warnings,
            })
        }
        LatticeMethod::Both => {
            let brute = lattice_bruteforce(m, tag, n_limit)?;
            let e = lattice_eigen(m, tag, opts)?;
            let eigen_only: Vec<_> = e
                .lattice
                .elements
                .iter()
                .filter(|p| !brute.contains(p))
                .cloned()
                .collect();
            let brute_only: Vec<_> = brute
                .elements
                .iter()
                .filter(|p| !e.lattice.contains(p))
                .cloned()
                .collect();
            Ok(LatticeResult {
                methods_agree: Some(eigen_only.is_empty() && brute_only.is_empty()),
                lattice: brute,
                eigen_only,
                brute_only,
                warnings: e.warnings,
            })
        }
    }
}

/// One element of the union of the two lattices.
#[derive(Clone, Debug, Serialize)]
pub struct ElementReport {
    pub partition: TaggedPartition,
    pub dim: usize,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub in_w: bool,
    pub in_l: bool,
    pub flags: ClassificationFlags,
    pub preserving_classes: BTreeSet<SystemClass>,
}

/// Members of each balance class among the union, full space and `{0}`
/// excluded.
#[derive(Clone, Debug, Default, Serialize)]
pub struct ClassLists {
    pub balanced: Vec<TaggedPartition>,
    pub exo_balanced: Vec<TaggedPartition>,
    pub strictly_exo_balanced: Vec<TaggedPartition>,
    pub odd_balanced: Vec<TaggedPartition>,
    pub linear_balanced: Vec<TaggedPartition>,
    pub even_odd_balanced: Vec<TaggedPartition>,
}

#[derive(Clone, Debug, Serialize)]
pub struct SyncReport {
    pub n: usize,
    pub method: LatticeMethod,
    pub w: LatticeResult,
    pub l: LatticeResult,
    pub union: Vec<ElementReport>,
    pub classes: ClassLists,
    pub counts: BTreeMap<String, usize>,
}

impl SyncReport {
    /// False when method `both` found a disagreement.
    pub fn methods_agree(&self) -> bool {
        self.w.methods_agree.unwrap_or(true) && self.l.methods_agree.unwrap_or(true)
    }
}

/// Synchrony and anti-synchrony subspaces: the union of the W and L
/// lattices with each element classified.
pub fn synchrony_antisynchrony_report(
    net: &Network,
    method: LatticeMethod,
    n_limit: usize,
    opts: &EigenOptions,
) -> Result<SyncReport> {
    let n = net.n();
    let (w, l) = if method == LatticeMethod::Brute {
        let (w, l) = lattices_bruteforce(net, n_limit)?;
        let wrap = |lattice| LatticeResult {
            lattice,
            methods_agree: None,
            eigen_only: Vec::new(),
            brute_only: Vec::new(),
            warnings: Vec::new(),
        };
        (wrap(w), wrap(l))
    } else {
        (
            compute_lattice(net.adjacency(), MatrixTag::W, method, n_limit, opts)?,
            compute_lattice(&laplacian(net), MatrixTag::L, method, n_limit, opts)?,
        )
    };
    let all: BTreeSet<TaggedPartition> = w
        .lattice
        .elements
        .iter()
        .chain(&l.lattice.elements)
        .cloned()
        .collect();
    let union: Vec<ElementReport> = all
        .into_par_iter()
        .map(|p| {
            let (in_w, in_l) = (w.lattice.contains(&p), l.lattice.contains(&p));
            let flags = classify_with(net, &p, in_w, in_l);
            ElementReport {
                dim: p.dim(),
                p: p.p(),
                q: p.q(),
                r: p.r(),
                in_w,
                in_l,
                preserving_classes: classes_from_flags(&p, &flags),
                flags,
                partition: p,
            }
        })
        .collect();
    let mut classes = ClassLists::default();
    for e in union
        .iter()
        .filter(|e| !e.partition.is_null() && !e.partition.is_full())
    {
        let f = &e.flags;
        for (on, list) in [
            (f.balanced, &mut classes.balanced),
            (f.exo_balanced, &mut classes.exo_balanced),
            (f.strictly_exo_balanced, &mut classes.strictly_exo_balanced),
            (f.odd_balanced, &mut classes.odd_balanced),
            (f.linear_balanced, &mut classes.linear_balanced),
            (f.even_odd_balanced, &mut classes.even_odd_balanced),
        ] {
            if on {
                list.push(e.partition.clone());
            }
        }
    }
    let mut counts = BTreeMap::new();
    counts.insert("W".to_string(), w.lattice.len());
    counts.insert("L".to_string(), l.lattice.len());
    counts.insert("union".to_string(), union.len());
    for (name, list) in [
        ("balanced", &classes.balanced),
        ("exo_balanced", &classes.exo_balanced),
        ("strictly_exo_balanced", &classes.strictly_exo_balanced),
        ("odd_balanced", &classes.odd_balanced),
        ("linear_balanced", &classes.linear_balanced),
        ("even_odd_balanced", &classes.even_odd_balanced),
    ] {
        counts.insert(name.to_string(), list.len());
    }
    Ok(SyncReport {
        n,
        method,
        w,
        l,
        union,
        classes,
        counts,
    })
}
