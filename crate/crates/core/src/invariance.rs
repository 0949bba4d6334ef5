//! Invariance of generalized polydiagonals under W and L, block-condition
//! diagnostics, and classification into balance classes.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::matrix::{common_value, row_sum, Matrix};
use crate::network::{laplacian, Network};
use crate::partition::{block_decomposition, BlockDecomposition, PartRef, TaggedPartition};
use crate::rational::Rational;

/// Exact test that `m` maps the subspace of `p` into itself.
pub fn leaves_invariant(m: &Matrix, p: &TaggedPartition) -> bool {
    assert_eq!(m.rows(), p.n(), "matrix size must equal the cell count");
    let n = p.n();
    p.basis_signs().iter().all(|b| {
        let image: Vec<Rational> = (0..n)
            .map(|i| {
                b.iter()
                    .enumerate()
                    .fold(Rational::zero(), |acc, (j, &s)| match s {
                        1 => acc + m.get(i, j),
                        -1 => acc - m.get(i, j),
                        _ => acc,
                    })
            })
            .collect();
        p.contains(&image)
    })
}

/// Repeated invariance tests against one matrix. Scales the matrix to
/// integers once and uses machine arithmetic when the entries fit.
pub struct InvarianceTester {
    n: usize,
    kind: TesterKind,
}

enum TesterKind {
    Small(Vec<i64>),
    Exact(Matrix),
}

impl InvarianceTester {
    pub fn new(m: &Matrix) -> Self {
        let n = m.rows();
        let lcm = m.entries().fold(BigInt::one(), |acc, v| acc.lcm(v.denom()));
        let scaled: Option<Vec<i64>> = m
            .entries()
            .map(|v| (v.numer() * (&lcm / v.denom())).to_i64())
            .collect();
        let kind = match scaled {
            Some(v) => TesterKind::Small(v),
            None => TesterKind::Exact(m.clone()),
        };
        InvarianceTester { n, kind }
    }

    pub fn check(&self, p: &TaggedPartition) -> bool {
        match &self.kind {
            TesterKind::Exact(m) => leaves_invariant(m, p),
            TesterKind::Small(data) => {
                let n = self.n;
                let labels = p.labels();
                (1..=p.p() as i32).all(|k| {
                    let image: Vec<i128> = (0..n)
                        .map(|i| {
                            let row = &data[i * n..(i + 1) * n];
                            labels.iter().zip(row).fold(0i128, |acc, (&l, &w)| {
                                if l == k {
                                    acc + w as i128
                                } else if l == -k {
                                    acc - w as i128
                                } else {
                                    acc
                                }
                            })
                        })
                        .collect();
                    p.contains(&image)
                })
            }
        }
    }
}

/// One evaluated block condition.
#[derive(Clone, Debug, Serialize)]
pub struct ConditionResult {
    pub condition: String,
    pub pass: bool,
    #[serde(serialize_with = "crate::rational::vecvec_string::serialize")]
    pub row_sums: Vec<Vec<Rational>>,
    #[serde(serialize_with = "crate::rational::opt_string::serialize")]
    pub valency: Option<Rational>,
}

/// Cells of an adapted class, 1-based.
#[derive(Clone, Debug, Serialize)]
pub struct ClassCells {
    pub index: usize,
    pub part: Vec<usize>,
    pub counterpart: Vec<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct BlockConditionReport {
    pub subject: String,
    pub pass: bool,
    pub classes: Vec<ClassCells>,
    pub zero_part: Vec<usize>,
    pub conditions: Vec<ConditionResult>,
}

impl BlockConditionReport {
    pub fn failures(&self) -> impl Iterator<Item = &ConditionResult> {
        self.conditions.iter().filter(|c| !c.pass)
    }

    /// Valency recorded by the condition with this exact name.
    pub fn valency(&self, condition: &str) -> Option<&Rational> {
        self.conditions
            .iter()
            .find(|c| c.condition == condition)?
            .valency
            .as_ref()
    }
}

struct Builder<'a> {
    d: &'a BlockDecomposition,
    conditions: Vec<ConditionResult>,
}

type Vector = Vec<Rational>;

fn add(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub(a: &[Rational], b: &[Rational]) -> Vector {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn neg(a: &[Rational]) -> Vector {
    a.iter().map(|x| -x).collect()
}

fn scale(a: &[Rational], s: i64) -> Vector {
    a.iter()
        .map(|x| x * Rational::from_integer(s.into()))
        .collect()
}

impl<'a> Builder<'a> {
    fn new(d: &'a BlockDecomposition) -> Self {
        Builder {
            d,
            conditions: Vec::new(),
        }
    }

    fn rs(&self, rows: PartRef, cols: PartRef) -> Vector {
        self.d.rs(rows, cols)
    }

    fn zeros(&self, rows: PartRef) -> Vector {
        vec![Rational::zero(); self.d.range(rows).len()]
    }

    /// All entries of all vectors share one value.
    fn regular(&mut self, condition: String, vectors: Vec<Vector>) {
        let all: Vec<Rational> = vectors.iter().flatten().cloned().collect();
        let valency = common_value(&all);
        self.conditions.push(ConditionResult {
            condition,
            pass: valency.is_some(),
            row_sums: vectors,
            valency,
        });
    }

    fn regular_with(&mut self, condition: String, vectors: Vec<Vector>, required: &Rational) {
        let all: Vec<Rational> = vectors.iter().flatten().cloned().collect();
        let valency = common_value(&all);
        self.conditions.push(ConditionResult {
            condition,
            pass: valency.as_ref() == Some(required),
            row_sums: vectors,
            valency,
        });
    }

    fn equal(&mut self, condition: String, a: Vector, b: Vector) {
        self.conditions.push(ConditionResult {
            condition,
            pass: a == b,
            row_sums: vec![a, b],
            valency: None,
        });
    }

    fn finish(self, subject: &str) -> BlockConditionReport {
        let d = self.d;
        let classes = (1..=d.p)
            .map(|i| ClassCells {
                index: i,
                part: d.cells(PartRef::Pos(i)).iter().map(|c| c + 1).collect(),
                counterpart: if i <= d.q {
                    d.cells(PartRef::Neg(i)).iter().map(|c| c + 1).collect()
                } else {
                    Vec::new()
                },
            })
            .collect();
        let zero_part = if d.r == 1 {
            d.cells(PartRef::Zero).iter().map(|c| c + 1).collect()
        } else {
            Vec::new()
        };
        BlockConditionReport {
            subject: subject.to_string(),
            pass: self.conditions.iter().all(|c| c.pass),
            classes,
            zero_part,
            conditions: self.conditions,
        }
    }
}

use PartRef::{Neg, Pos, Zero as Z0};

/// Block conditions for invariance of the subspace of `p` under `m`.
pub fn check_block_conditions(m: &Matrix, p: &TaggedPartition) -> Result<BlockConditionReport> {
    let d = block_decomposition(m, p)?;
    let (pp, q, r) = (d.p, d.q, d.r);
    let mut b = Builder::new(&d);
    for i in 1..=pp {
        for j in 1..=pp {
            match (i <= q, j <= q) {
                (true, true) => {
                    let top = sub(&b.rs(Pos(i), Pos(j)), &b.rs(Pos(i), Neg(j)));
                    let bottom = sub(&b.rs(Neg(i), Neg(j)), &b.rs(Neg(i), Pos(j)));
                    b.regular(
                        format!("rs(Q_{i}{j})-rs(R_{i}{j}) and rs(Qbar_{i}{j})-rs(Rbar_{i}{j}) regular with equal valency"),
                        vec![top, bottom],
                    );
                }
                (true, false) => {
                    let top = b.rs(Pos(i), Pos(j));
                    let bottom = neg(&b.rs(Neg(i), Pos(j)));
                    b.regular(
                        format!("rs(Q_{i}{j}) and -rs(Rbar_{i}{j}) regular with equal valency"),
                        vec![top, bottom],
                    );
                }
                (false, true) => {
                    let v = sub(&b.rs(Pos(i), Pos(j)), &b.rs(Pos(i), Neg(j)));
                    b.regular(format!("rs(Q_{i}{j})-rs(R_{i}{j}) regular"), vec![v]);
                }
                (false, false) => {
                    let v = b.rs(Pos(i), Pos(j));
                    b.regular(format!("Q_{i}{j} regular"), vec![v]);
                }
            }
        }
    }
    if r == 1 {
        zero_part_conditions(&mut b, pp, q);
    }
    Ok(b.finish("block conditions"))
}

fn zero_part_conditions(b: &mut Builder<'_>, p: usize, q: usize) {
    for j in 1..=p {
        if j <= q {
            let (z, zbar) = (b.rs(Z0, Pos(j)), b.rs(Z0, Neg(j)));
            b.equal(format!("rs(Z_0{j}) = rs(Zbar_0{j})"), z, zbar);
        } else {
            let z = b.rs(Z0, Pos(j));
            let zeros = b.zeros(Z0);
            b.equal(format!("rs(Z_0{j}) = 0"), z, zeros);
        }
    }
}

/// Block conditions on W for invariance of `p` under W.
pub fn check_block_conditions_w(
    net: &Network,
    p: &TaggedPartition,
) -> Result<BlockConditionReport> {
    check_block_conditions(net.adjacency(), p)
}

/// Conditions on the blocks of W equivalent to invariance under L.
/// Condition names carry the valencies `r_i` and `q_ij` used by the linear
/// symbolic quotient: `"r_i ..."` and `"q_ij ..."`.
pub fn check_block_conditions_l_via_w(
    net: &Network,
    p: &TaggedPartition,
) -> Result<BlockConditionReport> {
    let d = block_decomposition(net.adjacency(), p)?;
    let (pp, q, r) = (d.p, d.q, d.r);
    let mut b = Builder::new(&d);
    for i in 1..=pp {
        let len = d.range(Pos(i)).len();
        let mut top = vec![Rational::zero(); len];
        for j in (1..=pp).filter(|&j| j != i) {
            top = add(&top, &b.rs(Pos(i), Pos(j)));
        }
        for j in 1..=q {
            let rij = b.rs(Pos(i), Neg(j));
            top = add(&top, &if j == i { scale(&rij, 2) } else { rij });
        }
        if r == 1 {
            top = add(&top, &b.rs(Pos(i), Z0));
        }
        if i <= q {
            let mut bottom = b.zeros(Neg(i));
            for j in (1..=q).filter(|&j| j != i) {
                bottom = add(&bottom, &b.rs(Neg(i), Neg(j)));
            }
            for j in 1..=pp {
                let rbar = b.rs(Neg(i), Pos(j));
                bottom = add(&bottom, &if j == i { scale(&rbar, 2) } else { rbar });
            }
            if r == 1 {
                bottom = add(&bottom, &b.rs(Neg(i), Z0));
            }
            b.regular(
                format!("r_{i}: part and counterpart sums regular with equal valency"),
                vec![top, bottom],
            );
        } else {
            b.regular(format!("r_{i}: part sum regular"), vec![top]);
        }
        for j in (1..=pp).filter(|&j| j != i) {
            let qij = neg(&b.rs(Pos(i), Pos(j)));
            match (i <= q, j <= q) {
                (true, true) => {
                    let top = add(&qij, &b.rs(Pos(i), Neg(j)));
                    let bottom = sub(&b.rs(Neg(i), Pos(j)), &b.rs(Neg(i), Neg(j)));
                    b.regular(
                        format!("q_{i}{j}: -rs(Q_{i}{j})+rs(R_{i}{j}) and rs(Rbar_{i}{j})-rs(Qbar_{i}{j}) regular with equal valency"),
                        vec![top, bottom],
                    );
                }
                (true, false) => {
                    let bottom = b.rs(Neg(i), Pos(j));
                    b.regular(
                        format!("q_{i}{j}: -rs(Q_{i}{j}) and rs(Rbar_{i}{j}) regular with equal valency"),
                        vec![qij, bottom],
                    );
                }
                (false, true) => {
                    let v = add(&qij, &b.rs(Pos(i), Neg(j)));
                    b.regular(
                        format!("q_{i}{j}: -rs(Q_{i}{j})+rs(R_{i}{j}) regular"),
                        vec![v],
                    );
                }
                (false, false) => {
                    b.regular(format!("q_{i}{j}: -Q_{i}{j} regular"), vec![qij]);
                }
            }
        }
    }
    if r == 1 {
        zero_part_conditions(&mut b, pp, q);
    }
    Ok(b.finish("Laplacian conditions on adjacency blocks"))
}

/// Odd-balance block tests. Besides the regularity and pairing tests, parts
/// without a counterpart must send zero total weight into every paired part
/// and its counterpart; without that, odd coupling breaks the sign symmetry.
pub fn odd_balance_conditions(net: &Network, p: &TaggedPartition) -> Result<BlockConditionReport> {
    let d = block_decomposition(net.adjacency(), p)?;
    let (pp, q, r) = (d.p, d.q, d.r);
    let mut b = Builder::new(&d);
    let zero = Rational::zero();
    for i in 1..=pp {
        for j in (1..=pp).filter(|&j| j != i) {
            let qij = b.rs(Pos(i), Pos(j));
            if i <= q && j <= q {
                let qbar = b.rs(Neg(i), Neg(j));
                b.regular(
                    format!("Q_{i}{j} and Qbar_{i}{j} regular with equal valency"),
                    vec![qij, qbar],
                );
            } else if i <= q {
                b.regular_with(format!("Q_{i}{j} regular with valency 0"), vec![qij], &zero);
                let rbar = b.rs(Neg(i), Pos(j));
                b.regular_with(
                    format!("Rbar_{i}{j} regular with valency 0"),
                    vec![rbar],
                    &zero,
                );
            } else {
                b.regular(format!("Q_{i}{j} regular"), vec![qij]);
            }
        }
        for j in 1..=q {
            let rij = b.rs(Pos(i), Neg(j));
            if i <= q {
                let rbar = b.rs(Neg(i), Pos(j));
                b.regular(
                    format!("R_{i}{j} and Rbar_{i}{j} regular with equal valency"),
                    vec![rij, rbar],
                );
            } else {
                b.regular(format!("R_{i}{j} regular"), vec![rij]);
            }
        }
        if r == 1 {
            let z = b.rs(Pos(i), Z0);
            if i <= q {
                let zbar = b.rs(Neg(i), Z0);
                b.regular(
                    format!("Z_{i}0 and Zbar_{i}0 regular with equal valency"),
                    vec![z, zbar],
                );
            } else {
                b.regular(format!("Z_{i}0 regular"), vec![z]);
            }
        }
    }
    if r == 1 {
        zero_part_conditions(&mut b, pp, q);
    }
    Ok(b.finish("odd-balance conditions"))
}

/// Balance flags for a (network, partition) pair.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct ClassificationFlags {
    pub balanced: bool,
    pub exo_balanced: bool,
    pub strictly_exo_balanced: bool,
    pub odd_balanced: bool,
    pub linear_balanced: bool,
    pub even_odd_balanced: bool,
    #[serde(rename = "invariant_under_W")]
    pub invariant_under_w: bool,
    #[serde(rename = "invariant_under_L")]
    pub invariant_under_l: bool,
}

pub fn classify(net: &Network, p: &TaggedPartition) -> ClassificationFlags {
    let inv_w = leaves_invariant(net.adjacency(), p);
    let inv_l = leaves_invariant(&laplacian(net), p);
    classify_with(net, p, inv_w, inv_l)
}

/// Classification when the two invariance bits are already known.
pub fn classify_with(
    net: &Network,
    p: &TaggedPartition,
    inv_w: bool,
    inv_l: bool,
) -> ClassificationFlags {
    let mut flags = ClassificationFlags {
        balanced: false,
        exo_balanced: false,
        strictly_exo_balanced: false,
        odd_balanced: false,
        linear_balanced: false,
        even_odd_balanced: false,
        invariant_under_w: inv_w,
        invariant_under_l: inv_l,
    };
    if p.is_standard() {
        flags.balanced = inv_w;
        flags.exo_balanced = inv_l;
        flags.strictly_exo_balanced = inv_l && !inv_w;
    } else {
        flags.even_odd_balanced = inv_w;
        flags.linear_balanced = inv_l;
        flags.odd_balanced = p.is_null()
            || odd_balance_conditions(net, p)
                .map(|r| r.pass)
                .unwrap_or(false);
    }
    flags
}

/// Families of input-additive coupled cell systems.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum SystemClass {
    #[serde(rename = "I_G")]
    G,
    #[serde(rename = "I_G0")]
    G0,
    #[serde(rename = "I_Godd")]
    Godd,
    #[serde(rename = "I_Gl")]
    Gl,
    #[serde(rename = "I_Geo")]
    Geo,
}

impl SystemClass {
    pub const ALL: [SystemClass; 5] = [
        SystemClass::G,
        SystemClass::G0,
        SystemClass::Godd,
        SystemClass::Gl,
        SystemClass::Geo,
    ];

    /// Whether members must have an odd internal function g.
    pub fn requires_odd_g(self) -> bool {
        matches!(self, SystemClass::Godd | SystemClass::Gl | SystemClass::Geo)
    }
}

impl fmt::Display for SystemClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SystemClass::G => "I_G",
            SystemClass::G0 => "I_G0",
            SystemClass::Godd => "I_Godd",
            SystemClass::Gl => "I_Gl",
            SystemClass::Geo => "I_Geo",
        })
    }
}

impl FromStr for SystemClass {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let key = s.trim().to_ascii_lowercase();
        let key = key
            .strip_prefix("i_")
            .or_else(|| key.strip_prefix("i_{"))
            .unwrap_or(&key);
        match key.trim_start_matches("g").trim_start_matches([',', '_']) {
            "" => Ok(SystemClass::G),
            "0" | "exo" => Ok(SystemClass::G0),
            "odd" => Ok(SystemClass::Godd),
            "l" | "lin" | "linear" => Ok(SystemClass::Gl),
            "eo" | "even-odd" | "evenodd" => Ok(SystemClass::Geo),
            _ => Err(Error::InvalidArgument(format!(
                "unknown system class {s:?}; expected one of I_G, I_G0, I_Godd, I_Gl, I_Geo"
            ))),
        }
    }
}

/// Classes of admissible systems whose flows leave the subspace invariant.
pub fn preserving_system_classes(net: &Network, p: &TaggedPartition) -> BTreeSet<SystemClass> {
    classes_from_flags(p, &classify(net, p))
}

pub fn classes_from_flags(p: &TaggedPartition, f: &ClassificationFlags) -> BTreeSet<SystemClass> {
    let mut out = BTreeSet::new();
    if p.is_standard() {
        if f.balanced {
            out.extend([SystemClass::G, SystemClass::Geo]);
        }
        if f.exo_balanced {
            out.extend([SystemClass::G0, SystemClass::Godd, SystemClass::Gl]);
        }
    } else {
        if f.odd_balanced {
            out.insert(SystemClass::Godd);
        }
        if f.linear_balanced {
            out.insert(SystemClass::Gl);
        }
        if f.even_odd_balanced {
            out.insert(SystemClass::Geo);
        }
    }
    out
}

/// Everything the `classify` command reports.
#[derive(Debug, Serialize)]
pub struct ClassificationReport {
    pub partition: TaggedPartition,
    pub p: usize,
    pub q: usize,
    pub r: usize,
    pub flags: ClassificationFlags,
    pub preserving_classes: BTreeSet<SystemClass>,
    pub adjacency_conditions: Option<BlockConditionReport>,
    pub laplacian_conditions: Option<BlockConditionReport>,
    pub odd_conditions: Option<BlockConditionReport>,
}

pub fn classification_report(net: &Network, p: &TaggedPartition) -> Result<ClassificationReport> {
    if p.n() != net.n() {
        return Err(Error::LengthMismatch {
            expected: net.n(),
            found: p.n(),
        });
    }
    let flags = classify(net, p);
    let diagnostics = !p.is_null();
    Ok(ClassificationReport {
        partition: p.clone(),
        p: p.p(),
        q: p.q(),
        r: p.r(),
        flags,
        preserving_classes: classes_from_flags(p, &flags),
        adjacency_conditions: diagnostics
            .then(|| check_block_conditions_w(net, p))
            .transpose()?,
        laplacian_conditions: diagnostics
            .then(|| check_block_conditions_l_via_w(net, p))
            .transpose()?,
        odd_conditions: (diagnostics && !p.is_standard())
            .then(|| odd_balance_conditions(net, p))
            .transpose()?,
    })
}

/// Row sums of W restricted to a cell set, for reports.
pub fn input_valencies(net: &Network) -> Vec<Rational> {
    row_sum(net.adjacency())
}
