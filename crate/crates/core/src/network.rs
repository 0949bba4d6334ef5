//! Weighted networks, the row-sum operator and the Laplacian.
//!
//! Entry `(i, j)` of the adjacency matrix is the weight of the edge from cell
//! `j` to cell `i`. Cells are 0-indexed in the API and 1-indexed in files.

use std::collections::BTreeSet;
use std::path::Path;

use num_traits::Zero;
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::matrix::{is_regular, row_sum, Matrix};
use crate::rational::{format_rational, parse_rational, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Network {
    w: Matrix,
}

impl Network {
    pub fn new(w: Matrix) -> Result<Self> {
        if !w.is_square() || w.rows() == 0 {
            return Err(Error::Network(format!(
                "adjacency matrix must be square and nonempty, got {}x{}",
                w.rows(),
                w.cols()
            )));
        }
        Ok(Network { w })
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        Network::new(Matrix::from_i64(rows)).expect("square integer matrix")
    }

    /// Builds a network from `(to, from, weight)` triples, 0-indexed.
    pub fn from_edges(n: usize, edges: &[(usize, usize, Rational)]) -> Result<Self> {
        let mut w = Matrix::zeros(n, n);
        let mut seen = BTreeSet::new();
        for (to, from, weight) in edges {
            for &c in [to, from] {
                if c >= n {
                    return Err(Error::IndexOutOfRange { index: c + 1, n });
                }
            }
            if !seen.insert((*to, *from)) {
                return Err(Error::Network(format!(
                    "duplicate edge to {} from {}",
                    to + 1,
                    from + 1
                )));
            }
            w.set(*to, *from, weight.clone());
        }
        Network::new(w)
    }

    pub fn n(&self) -> usize {
        self.w.rows()
    }

    pub fn adjacency(&self) -> &Matrix {
        &self.w
    }

    pub fn weight(&self, to: usize, from: usize) -> &Rational {
        self.w.get(to, from)
    }

    pub fn laplacian(&self) -> Matrix {
        laplacian(self)
    }

    /// Input valencies v(i).
    pub fn valencies(&self) -> Vec<Rational> {
        row_sum(&self.w)
    }

    pub fn regular_valency(&self) -> Option<Rational> {
        is_regular(&self.w)
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let value: Value = serde_json::from_str(text)?;
        Network::from_json(&value)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Io(std::io::Error::new(
                e.kind(),
                format!("{}: {e}", path.display()),
            ))
        })?;
        Network::from_json_str(&text)
    }

    /// Accepts the `weights` (matrix) and `edges` (1-indexed list) forms.
    pub fn from_json(value: &Value) -> Result<Self> {
        let obj = value
            .as_object()
            .ok_or_else(|| Error::Network("expected a JSON object".into()))?;
        let n = obj
            .get("n")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Network("missing positive integer field \"n\"".into()))?
            as usize;
        if n == 0 {
            return Err(Error::Network("n must be positive".into()));
        }
        match (obj.get("weights"), obj.get("edges")) {
            (Some(_), Some(_)) => Err(Error::Network(
                "give either \"weights\" or \"edges\", not both".into(),
            )),
            (Some(weights), None) => {
                let rows = weights
                    .as_array()
                    .ok_or_else(|| Error::Network("\"weights\" must be an array".into()))?;
                if rows.len() != n {
                    return Err(Error::Network(format!(
                        "expected {n} weight rows, found {}",
                        rows.len()
                    )));
                }
                let mut parsed = Vec::with_capacity(n);
                for (i, row) in rows.iter().enumerate() {
                    let row = row.as_array().ok_or_else(|| {
                        Error::Network(format!("weight row {} is not an array", i + 1))
                    })?;
                    if row.len() != n {
                        return Err(Error::Network(format!(
                            "weight row {} has {} entries, expected {n}",
                            i + 1,
                            row.len()
                        )));
                    }
                    parsed.push(row.iter().map(parse_weight).collect::<Result<Vec<_>>>()?);
                }
                Network::new(Matrix::from_rows(parsed)?)
            }
            (None, Some(edges)) => {
                let list = edges
                    .as_array()
                    .ok_or_else(|| Error::Network("\"edges\" must be an array".into()))?;
                let mut triples = Vec::with_capacity(list.len());
                for edge in list {
                    let cell = |key: &str| -> Result<usize> {
                        let c = edge.get(key).and_then(Value::as_u64).ok_or_else(|| {
                            Error::Network(format!("edge without integer \"{key}\""))
                        })? as usize;
                        if c == 0 || c > n {
                            return Err(Error::IndexOutOfRange { index: c, n });
                        }
                        Ok(c - 1)
                    };
                    let weight = edge
                        .get("weight")
                        .ok_or_else(|| Error::Network("edge without \"weight\"".into()))?;
                    triples.push((cell("to")?, cell("from")?, parse_weight(weight)?));
                }
                Network::from_edges(n, &triples)
            }
            (None, None) => Err(Error::Network("missing \"weights\" or \"edges\"".into())),
        }
    }

    /// Matrix form with rational strings.
    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .w
            .to_rows()
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        serde_json::json!({ "n": self.n(), "weights": rows })
    }

    /// DOT digraph with one edge per nonzero weight.
    pub fn to_dot(&self) -> String {
        let mut out = String::from("digraph network {\n  rankdir=LR;\n");
        for i in 0..self.n() {
            out.push_str(&format!("  c{} [label=\"{}\"];\n", i + 1, i + 1));
        }
        for to in 0..self.n() {
            for from in 0..self.n() {
                let w = self.weight(to, from);
                if !w.is_zero() {
                    out.push_str(&format!(
                        "  c{} -> c{} [label=\"{}\"];\n",
                        from + 1,
                        to + 1,
                        format_rational(w)
                    ));
                }
            }
        }
        out.push_str("}\n");
        out
    }
}

fn parse_weight(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(num) if num.is_i64() || num.is_u64() => parse_rational(&num.to_string()),
        other => Err(Error::Parse(format!(
            "weight {other} must be an integer or a string such as \"23/10\" or \"2.3\""
        ))),
    }
}

/// L = D − W, where D holds the input valencies.
pub fn laplacian(net: &Network) -> Matrix {
    let n = net.n();
    let valencies = net.valencies();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let d = if i == j {
                valencies[i].clone()
            } else {
                Rational::zero()
            };
            l.set(i, j, d - net.weight(i, j));
        }
    }
    l
}

/// Σ_{j∈part} w_ij.
pub fn valency_relative_to_part(net: &Network, i: usize, part: &[usize]) -> Result<Rational> {
    let n = net.n();
    if i >= n {
        return Err(Error::IndexOutOfRange { index: i + 1, n });
    }
    let mut total = Rational::zero();
    for &j in part {
        if j >= n {
            return Err(Error::IndexOutOfRange { index: j + 1, n });
        }
        total += net.weight(i, j);
    }
    Ok(total)
}

/// Summary printed by the `laplacian` command.
#[derive(Debug, Serialize)]
pub struct LaplacianSummary {
    pub n: usize,
    #[serde(serialize_with = "crate::rational::vec_string::serialize")]
    pub valencies: Vec<Rational>,
    #[serde(serialize_with = "crate::rational::opt_string::serialize")]
    pub regular_valency: Option<Rational>,
    #[serde(serialize_with = "crate::rational::vecvec_string::serialize")]
    pub laplacian: Vec<Vec<Rational>>,
}

pub fn laplacian_summary(net: &Network) -> LaplacianSummary {
    LaplacianSummary {
        n: net.n(),
        valencies: net.valencies(),
        regular_valency: net.regular_valency(),
        laplacian: laplacian(net).to_rows(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{frac, int};

    #[test]
    fn json_forms_agree() {
        let a = Network::from_json_str(r#"{"n":2,"weights":[["0","1/2"],[3,"2.5"]]}"#).unwrap();
        let b = Network::from_json_str(
            r#"{"n":2,"edges":[{"to":1,"from":2,"weight":"0.5"},{"to":2,"from":1,"weight":"3"},{"to":2,"from":2,"weight":"5/2"}]}"#,
        )
        .unwrap();
        assert_eq!(a, b);
        assert_eq!(*a.weight(0, 1), frac(1, 2));
    }

    #[test]
    fn duplicate_edges_are_rejected() {
        let err = Network::from_json_str(
            r#"{"n":2,"edges":[{"to":1,"from":2,"weight":"1"},{"to":1,"from":2,"weight":"2"}]}"#,
        );
        assert!(matches!(err, Err(Error::Network(_))));
    }

    #[test]
    fn out_of_range_edges_are_rejected() {
        let err = Network::from_json_str(r#"{"n":2,"edges":[{"to":3,"from":1,"weight":"1"}]}"#);
        assert!(matches!(
            err,
            Err(Error::IndexOutOfRange { index: 3, n: 2 })
        ));
    }

    #[test]
    fn float_weights_are_rejected() {
        assert!(Network::from_json_str(r#"{"n":1,"weights":[[2.3]]}"#).is_err());
    }

    #[test]
    fn diagonal_network_has_zero_laplacian() {
        let net = Network::from_i64(&[&[4, 0], &[0, -1]]);
        assert_eq!(laplacian(&net), Matrix::zeros(2, 2));
    }

    #[test]
    fn relative_valency() {
        let net = Network::from_i64(&[&[1, 2], &[3, 4]]);
        assert_eq!(valency_relative_to_part(&net, 1, &[0, 1]).unwrap(), int(7));
        assert_eq!(valency_relative_to_part(&net, 0, &[]).unwrap(), int(0));
        assert!(valency_relative_to_part(&net, 2, &[]).is_err());
    }
}
