//! Quotient networks of balanced and exo-balanced partitions, and symbolic
//! quotients of odd-, linear- and even-odd-balanced partitions.
//!
//! Quotient cells follow the adapted class order of
//! [`crate::partition::block_decomposition`] and are named by their smallest
//! member cell, e.g. `[4]` or `-[2]`.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::invariance::classify;
use crate::matrix::{common_value, Matrix};
use crate::network::Network;
use crate::partition::{block_decomposition, BlockDecomposition, PartRef, TaggedPartition};
use crate::rational::{format_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientKind {
    Balanced,
    Exo,
    OddSymbolic,
    LinearSymbolic,
    EoSymbolic,
}

impl QuotientKind {
    pub fn name(self) -> &'static str {
        match self {
            QuotientKind::Balanced => "balanced",
            QuotientKind::Exo => "exo",
            QuotientKind::OddSymbolic => "odd_symbolic",
            QuotientKind::LinearSymbolic => "linear_symbolic",
            QuotientKind::EoSymbolic => "eo_symbolic",
        }
    }

    fn requirement(self) -> &'static str {
        match self {
            QuotientKind::Balanced => "balanced",
            QuotientKind::Exo => "exo-balanced",
            QuotientKind::OddSymbolic => "odd-balanced",
            QuotientKind::LinearSymbolic => "linear-balanced",
            QuotientKind::EoSymbolic => "even-odd-balanced",
        }
    }
}

impl std::str::FromStr for QuotientKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace('-', "_").as_str() {
            "balanced" | "bal" => Ok(QuotientKind::Balanced),
            "exo" => Ok(QuotientKind::Exo),
            "odd" | "odd_symbolic" => Ok(QuotientKind::OddSymbolic),
            "linear" | "lin" | "linear_symbolic" => Ok(QuotientKind::LinearSymbolic),
            "eo" | "even_odd" | "eo_symbolic" => Ok(QuotientKind::EoSymbolic),
            _ => Err(Error::InvalidArgument(format!(
                "unknown quotient kind {s:?}; expected balanced, exo, odd, linear or eo"
            ))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CellTag {
    State,
    NegativeState,
    ZeroState,
}

impl CellTag {
    pub fn name(self) -> &'static str {
        match self {
            CellTag::State => "state",
            CellTag::NegativeState => "negative-state",
            CellTag::ZeroState => "zero-state",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct QuotientCell {
    pub name: String,
    pub tag: CellTag,
    /// Original cells, 1-based.
    pub members: Vec<usize>,
    /// Canonical class label of the part this cell stands for (0 for the zero part).
    pub class: usize,
}

/// Rows are the `p` parts. Columns are the cells for square kinds, all
/// `p+q+r` symbolic cells for the odd kind, and the parts plus a trailing
/// `r` column for the linear kind.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuotientNetwork {
    pub kind: QuotientKind,
    pub partition: TaggedPartition,
    pub cells: Vec<QuotientCell>,
    pub column_labels: Vec<String>,
    pub matrix: Matrix,
}

#[derive(Serialize)]
struct EdgeRecord {
    from: String,
    to: String,
    weight: String,
}

#[derive(Serialize)]
struct QuotientJson<'a> {
    kind: QuotientKind,
    partition: &'a TaggedPartition,
    cells: &'a [QuotientCell],
    column_labels: &'a [String],
    #[serde(serialize_with = "crate::rational::vecvec_string::serialize")]
    matrix: Vec<Vec<Rational>>,
    edges: Vec<EdgeRecord>,
}

impl QuotientNetwork {
    /// Number of quotient states (parts).
    pub fn p(&self) -> usize {
        self.matrix.rows()
    }

    /// Entry in row `i` (a part) and column `j`, 0-based.
    pub fn weight(&self, i: usize, j: usize) -> &Rational {
        self.matrix.get(i, j)
    }

    /// The trailing `r_i` column of a linear symbolic quotient.
    pub fn r_column(&self) -> Option<Vec<Rational>> {
        (self.kind == QuotientKind::LinearSymbolic).then(|| {
            (0..self.p())
                .map(|i| self.matrix.get(i, self.p()).clone())
                .collect()
        })
    }

    /// Nonzero edges as (from, to, weight), excluding the `r` column.
    pub fn edges(&self) -> Vec<(String, String, Rational)> {
        let cols = match self.kind {
            QuotientKind::LinearSymbolic => self.p(),
            _ => self.matrix.cols(),
        };
        let mut out = Vec::new();
        for i in 0..self.p() {
            for j in 0..cols {
                let w = self.matrix.get(i, j);
                if !w.is_zero() {
                    out.push((
                        self.column_labels[j].clone(),
                        self.cells[i].name.clone(),
                        w.clone(),
                    ));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> serde_json::Value {
        let doc = QuotientJson {
            kind: self.kind,
            partition: &self.partition,
            cells: &self.cells,
            column_labels: &self.column_labels,
            matrix: self.matrix.to_rows(),
            edges: self
                .edges()
                .into_iter()
                .map(|(from, to, w)| EdgeRecord {
                    from,
                    to,
                    weight: format_rational(&w),
                })
                .collect(),
        };
        serde_json::to_value(doc).expect("quotient serializes")
    }

    /// Negative-state cells are drawn as boxes and the zero cell dashed.
    /// Only edges into the parts are drawn.
    pub fn to_dot(&self) -> String {
        let mut out = format!("digraph {} {{\n  rankdir=LR;\n", self.kind.name());
        let r = self.r_column();
        for (k, cell) in self.cells.iter().enumerate() {
            let style = match cell.tag {
                CellTag::State => "shape=circle",
                CellTag::NegativeState => "shape=box",
                CellTag::ZeroState => "shape=circle, style=dashed",
            };
            let label = match &r {
                Some(r) if k < r.len() => format!("{}\\nr={}", cell.name, format_rational(&r[k])),
                _ => cell.name.clone(),
            };
            out.push_str(&format!(
                "  \"{}\" [label=\"{}\", {}];\n",
                cell.name, label, style
            ));
        }
        for (from, to, w) in self.edges() {
            out.push_str(&format!(
                "  \"{from}\" -> \"{to}\" [label=\"{}\"];\n",
                format_rational(&w)
            ));
        }
        out.push_str("}\n");
        out
    }
}

fn require(net: &Network, p: &TaggedPartition, kind: QuotientKind) -> Result<()> {
    if p.n() != net.n() {
        return Err(Error::LengthMismatch {
            expected: net.n(),
            found: p.n(),
        });
    }
    let f = classify(net, p);
    let ok = match kind {
        QuotientKind::Balanced => f.balanced,
        QuotientKind::Exo => f.exo_balanced,
        QuotientKind::OddSymbolic => f.odd_balanced,
        QuotientKind::LinearSymbolic => f.linear_balanced,
        QuotientKind::EoSymbolic => f.even_odd_balanced,
    };
    if ok && !p.is_null() {
        Ok(())
    } else {
        Err(Error::NotInClass {
            partition: p.to_string(),
            required: kind.requirement().to_string(),
        })
    }
}

fn cell(d: &BlockDecomposition, part: PartRef) -> QuotientCell {
    let tag = match part {
        PartRef::Pos(_) => CellTag::State,
        PartRef::Neg(_) => CellTag::NegativeState,
        PartRef::Zero => CellTag::ZeroState,
    };
    let class = match part {
        PartRef::Pos(i) | PartRef::Neg(i) => d.class_order[i - 1],
        PartRef::Zero => 0,
    };
    QuotientCell {
        name: d.group_name(part),
        tag,
        members: d.cells(part).iter().map(|c| c + 1).collect(),
        class,
    }
}

fn valency(v: &[Rational], what: &str) -> Result<Rational> {
    if v.is_empty() {
        return Ok(Rational::zero());
    }
    common_value(v).ok_or_else(|| Error::Numerical(format!("{what} is not regular")))
}

fn diff(a: Vec<Rational>, b: Vec<Rational>) -> Vec<Rational> {
    a.into_iter().zip(b).map(|(x, y)| x - y).collect()
}

fn part_cells(d: &BlockDecomposition) -> Vec<QuotientCell> {
    (1..=d.p).map(|i| cell(d, PartRef::Pos(i))).collect()
}

fn square(
    kind: QuotientKind,
    p: &TaggedPartition,
    d: &BlockDecomposition,
    m: Matrix,
) -> QuotientNetwork {
    let cells = part_cells(d);
    let column_labels = cells.iter().map(|c| c.name.clone()).collect();
    QuotientNetwork {
        kind,
        partition: p.clone(),
        cells,
        column_labels,
        matrix: m,
    }
}

/// Entry `(i, j)` is the common row sum of the block `Q_ij`.
pub fn quotient_balanced(net: &Network, p: &TaggedPartition) -> Result<QuotientNetwork> {
    require(net, p, QuotientKind::Balanced)?;
    let d = block_decomposition(net.adjacency(), p)?;
    let mut m = Matrix::zeros(d.p, d.p);
    for i in 1..=d.p {
        for j in 1..=d.p {
            m.set(
                i - 1,
                j - 1,
                valency(&d.rs(PartRef::Pos(i), PartRef::Pos(j)), "Q block")?,
            );
        }
    }
    Ok(square(QuotientKind::Balanced, p, &d, m))
}

/// Off-diagonal entries as in the balanced quotient, zero diagonal.
pub fn quotient_exo(net: &Network, p: &TaggedPartition) -> Result<QuotientNetwork> {
    require(net, p, QuotientKind::Exo)?;
    let d = block_decomposition(net.adjacency(), p)?;
    let mut m = Matrix::zeros(d.p, d.p);
    for i in 1..=d.p {
        for j in (1..=d.p).filter(|&j| j != i) {
            m.set(
                i - 1,
                j - 1,
                valency(&d.rs(PartRef::Pos(i), PartRef::Pos(j)), "Q block")?,
            );
        }
    }
    Ok(square(QuotientKind::Exo, p, &d, m))
}

/// Symbolic digraph on the parts, the counterparts and the zero part.
/// Only edges into the parts are defined.
pub fn quotient_odd_symbolic(net: &Network, p: &TaggedPartition) -> Result<QuotientNetwork> {
    require(net, p, QuotientKind::OddSymbolic)?;
    let d = block_decomposition(net.adjacency(), p)?;
    let mut groups: Vec<PartRef> = (1..=d.p).map(PartRef::Pos).collect();
    groups.extend((1..=d.q).map(PartRef::Neg));
    if d.r == 1 {
        groups.push(PartRef::Zero);
    }
    let mut m = Matrix::zeros(d.p, groups.len());
    for i in 1..=d.p {
        for (col, &g) in groups.iter().enumerate() {
            if g == PartRef::Pos(i) {
                continue;
            }
            m.set(
                i - 1,
                col,
                valency(&d.rs(PartRef::Pos(i), g), "odd quotient block")?,
            );
        }
    }
    let cells: Vec<QuotientCell> = groups.iter().map(|&g| cell(&d, g)).collect();
    let column_labels = cells.iter().map(|c| c.name.clone()).collect();
    Ok(QuotientNetwork {
        kind: QuotientKind::OddSymbolic,
        partition: p.clone(),
        cells,
        column_labels,
        matrix: m,
    })
}

/// Zero-diagonal coupling `q_ij` between parts and a trailing column `r_i`,
/// the coefficients of `h(y_j, 0)` and `h(y_i, 0)` in the restricted
/// equations of a linear system.
pub fn quotient_linear_symbolic(net: &Network, p: &TaggedPartition) -> Result<QuotientNetwork> {
    require(net, p, QuotientKind::LinearSymbolic)?;
    let d = block_decomposition(net.adjacency(), p)?;
    let (pp, q, r) = (d.p, d.q, d.r);
    let mut m = Matrix::zeros(pp, pp + 1);
    for i in 1..=pp {
        let mut ri = vec![Rational::zero(); d.range(PartRef::Pos(i)).len()];
        let mut acc = |v: Vec<Rational>, twice: bool| {
            for (a, x) in ri.iter_mut().zip(v) {
                *a += if twice { &x + &x } else { x };
            }
        };
        for j in (1..=pp).filter(|&j| j != i) {
            acc(d.rs(PartRef::Pos(i), PartRef::Pos(j)), false);
        }
        for j in 1..=q {
            acc(d.rs(PartRef::Pos(i), PartRef::Neg(j)), j == i);
        }
        if r == 1 {
            acc(d.rs(PartRef::Pos(i), PartRef::Zero), false);
        }
        m.set(i - 1, pp, valency(&ri, "r_i sum")?);
        for j in (1..=pp).filter(|&j| j != i) {
            let neg_q: Vec<Rational> = d
                .rs(PartRef::Pos(i), PartRef::Pos(j))
                .into_iter()
                .map(|x| -x)
                .collect();
            let v = if j <= q {
                diff(
                    neg_q,
                    d.rs(PartRef::Pos(i), PartRef::Neg(j))
                        .into_iter()
                        .map(|x| -x)
                        .collect(),
                )
            } else {
                neg_q
            };
            m.set(i - 1, j - 1, valency(&v, "q_ij sum")?);
        }
    }
    let cells = part_cells(&d);
    let mut column_labels: Vec<String> = cells.iter().map(|c| c.name.clone()).collect();
    column_labels.push("r".to_string());
    Ok(QuotientNetwork {
        kind: QuotientKind::LinearSymbolic,
        partition: p.clone(),
        cells,
        column_labels,
        matrix: m,
    })
}

/// `q_ij` is the valency of `rs(Q_ij) - rs(R_ij)` for paired `j` and of
/// `rs(Q_ij)` otherwise, diagonal included.
pub fn quotient_eo_symbolic(net: &Network, p: &TaggedPartition) -> Result<QuotientNetwork> {
    require(net, p, QuotientKind::EoSymbolic)?;
    let d = block_decomposition(net.adjacency(), p)?;
    let mut m = Matrix::zeros(d.p, d.p);
    for i in 1..=d.p {
        for j in 1..=d.p {
            let qij = d.rs(PartRef::Pos(i), PartRef::Pos(j));
            let v = if j <= d.q {
                diff(qij, d.rs(PartRef::Pos(i), PartRef::Neg(j)))
            } else {
                qij
            };
            m.set(i - 1, j - 1, valency(&v, "eo quotient block")?);
        }
    }
    Ok(square(QuotientKind::EoSymbolic, p, &d, m))
}

pub fn quotient(net: &Network, p: &TaggedPartition, kind: QuotientKind) -> Result<QuotientNetwork> {
    match kind {
        QuotientKind::Balanced => quotient_balanced(net, p),
        QuotientKind::Exo => quotient_exo(net, p),
        QuotientKind::OddSymbolic => quotient_odd_symbolic(net, p),
        QuotientKind::LinearSymbolic => quotient_linear_symbolic(net, p),
        QuotientKind::EoSymbolic => quotient_eo_symbolic(net, p),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::partition::canonicalize;
    use crate::rational::int;

    fn tp(l: &[i64]) -> TaggedPartition {
        canonicalize(l).unwrap()
    }

    fn odd3cell() -> Network {
        Network::from_i64(&[&[0, 1, 1], &[2, 0, 0], &[2, 0, 0]])
    }

    #[test]
    fn balanced_quotient_of_regular_network() {
        let q = quotient_balanced(&odd3cell(), &tp(&[1, 2, 2])).unwrap();
        assert_eq!(q.matrix, Matrix::from_i64(&[&[0, 2], &[2, 0]]));
    }

    #[test]
    fn one_part_quotients() {
        let net = odd3cell();
        let all = tp(&[1, 1, 1]);
        assert_eq!(
            quotient_balanced(&net, &all).unwrap().matrix,
            Matrix::from_i64(&[&[2]])
        );
        assert_eq!(
            quotient_exo(&net, &all).unwrap().matrix,
            Matrix::from_i64(&[&[0]])
        );
    }

    #[test]
    fn odd_symbolic_edge() {
        let q = quotient_odd_symbolic(&odd3cell(), &tp(&[1, -1, -1])).unwrap();
        assert_eq!(
            q.edges(),
            vec![("-[1]".to_string(), "[1]".to_string(), int(2))]
        );
        assert_eq!(q.cells[1].tag, CellTag::NegativeState);
    }

    #[test]
    fn linear_symbolic_r_column() {
        let q = quotient_linear_symbolic(&odd3cell(), &tp(&[1, -1, -1])).unwrap();
        assert_eq!(q.r_column().unwrap(), vec![int(4)]);
    }

    #[test]
    fn wrong_class_is_rejected() {
        assert!(quotient_balanced(&odd3cell(), &tp(&[1, 2, 3])).is_ok());
        let err = quotient_balanced(&odd3cell(), &tp(&[1, 1, 2]));
        assert!(matches!(err, Err(Error::NotInClass { .. })));
        let err = quotient_odd_symbolic(&odd3cell(), &tp(&[1, 2, 2]));
        assert!(matches!(err, Err(Error::NotInClass { .. })));
    }

    #[test]
    fn kind_names_parse() {
        for k in [
            QuotientKind::Balanced,
            QuotientKind::Exo,
            QuotientKind::OddSymbolic,
            QuotientKind::LinearSymbolic,
            QuotientKind::EoSymbolic,
        ] {
            assert_eq!(k.name().parse::<QuotientKind>().unwrap(), k);
        }
    }
}
