//! Exact-text interchange: rational parsing and printing, matrix files
//! (full CSV or sparse TSV edge lists), JSON tree descriptions, and JSON
//! objective specifications.
//!
//! Numbers in files are exact strings — `3/2`, `0.25`, `-7` — parsed into
//! rationals without ever touching floating point. Decimal output exists
//! only as a presentation echo and never feeds back into computation.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::matrix::{ElementSet, MatrixError, SimilarityMatrix};
use crate::newick::NewickError;
use crate::objective::{ObjectiveKind, ObjectiveSpec};
use crate::scalar::Rat;
use crate::scaling::{MaxScaling, PolyScaling, Scaling, ScalingError, SumScaling, TableScaling};
use crate::tree::{ClusterTree, Node, NodeId, TreeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("cannot parse `{0}` as an exact rational")]
    BadRational(String),
    #[error("rational has zero denominator: `{0}`")]
    ZeroDenominator(String),
    #[error("matrix file is empty")]
    EmptyMatrixFile,
    #[error("CSV header must start with `labels,`")]
    BadCsvHeader,
    #[error("CSV row {row} has {got} fields, expected {want}")]
    BadCsvRow { row: usize, want: usize, got: usize },
    #[error("CSV row {row} is labelled `{got}`, expected `{want}` (rows must follow header order)")]
    CsvRowOrder { row: usize, want: String, got: String },
    #[error("asymmetric matrix entry for pair {{{a}, {b}}}")]
    AsymmetricEntry { a: String, b: String },
    #[error("TSV line {line} needs `label<TAB>label<TAB>value`")]
    BadTsvLine { line: usize },
    #[error("tree JSON: {0}")]
    BadTreeJson(String),
    #[error("objective JSON: {0}")]
    BadObjectiveJson(String),
    #[error(transparent)]
    Matrix(#[from] MatrixError),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Newick(#[from] NewickError),
    #[error(transparent)]
    Scaling(#[from] ScalingError),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

/// Parse `p/q`, an integer, or a decimal string, exactly.
pub fn parse_rational(s: &str) -> Result<Rat, FormatError> {
    let text = s.trim();
    if text.is_empty() {
        return Err(FormatError::BadRational(s.to_string()));
    }
    if let Some((num, den)) = text.split_once('/') {
        let n: BigInt = num
            .trim()
            .parse()
            .map_err(|_| FormatError::BadRational(s.to_string()))?;
        let d: BigInt = den
            .trim()
            .parse()
            .map_err(|_| FormatError::BadRational(s.to_string()))?;
        if d.is_zero() {
            return Err(FormatError::ZeroDenominator(s.to_string()));
        }
        return Ok(Rat::new(n, d));
    }
    let (sign, digits) = match text.strip_prefix('-') {
        Some(rest) => (-1, rest),
        None => (1, text.strip_prefix('+').unwrap_or(text)),
    };
    let (int_part, frac_part) = match digits.split_once('.') {
        Some((i, f)) => (i, f),
        None => (digits, ""),
    };
    if (int_part.is_empty() && frac_part.is_empty())
        || !int_part.chars().all(|c| c.is_ascii_digit())
        || !frac_part.chars().all(|c| c.is_ascii_digit())
    {
        return Err(FormatError::BadRational(s.to_string()));
    }
    let mut numer: BigInt = if int_part.is_empty() {
        BigInt::zero()
    } else {
        int_part
            .parse()
            .map_err(|_| FormatError::BadRational(s.to_string()))?
    };
    let mut denom = BigInt::from(1);
    for c in frac_part.chars() {
        numer = numer * 10 + c.to_digit(10).expect("ascii digit");
        denom *= 10;
    }
    Ok(Rat::new(numer * sign, denom))
}

/// Render a rational as a decimal string with `digits` fractional digits,
/// rounding half away from zero. Presentation only; lossy in general.
pub fn rational_to_decimal(r: &Rat, digits: usize) -> String {
    let negative = r.numer().is_negative();
    let abs_numer = r.numer().abs();
    let denom = r.denom().clone();
    let scale = BigInt::from(10).pow(digits as u32);
    let scaled = &abs_numer * &scale;
    let mut quotient = &scaled / &denom;
    let remainder = &scaled % &denom;
    if &remainder * 2 >= denom {
        quotient += 1;
    }
    let text = quotient.to_string();
    let (int_part, frac_part) = if digits == 0 {
        (text.as_str().to_string(), String::new())
    } else if text.len() > digits {
        let split = text.len() - digits;
        (text[..split].to_string(), text[split..].to_string())
    } else {
        ("0".to_string(), format!("{text:0>digits$}"))
    };
    let sign = if negative && (int_part != "0" || frac_part.chars().any(|c| c != '0')) {
        "-"
    } else {
        ""
    };
    if digits == 0 {
        format!("{sign}{int_part}")
    } else {
        format!("{sign}{int_part}.{frac_part}")
    }
}

/// Read a matrix file, auto-detecting the format: a header starting with
/// `labels,` means full CSV, anything else is treated as a TSV edge list.
pub fn parse_matrix_auto(text: &str) -> Result<SimilarityMatrix<Rat>, FormatError> {
    let first = text
        .lines()
        .find(|l| !l.trim().is_empty())
        .ok_or(FormatError::EmptyMatrixFile)?;
    if first.trim_start().starts_with("labels,") {
        matrix_from_csv(text)
    } else {
        matrix_from_tsv(text)
    }
}

/// Full symmetric CSV: header `labels,a,b,c`, one row per element in header
/// order, diagonal cells ignored. Off-diagonal cells must agree with their
/// mirror.
pub fn matrix_from_csv(text: &str) -> Result<SimilarityMatrix<Rat>, FormatError> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    let header = lines.next().ok_or(FormatError::EmptyMatrixFile)?;
    let mut fields = header.split(',').map(str::trim);
    if fields.next() != Some("labels") {
        return Err(FormatError::BadCsvHeader);
    }
    let labels: Vec<&str> = fields.collect();
    if labels.is_empty() {
        return Err(FormatError::BadCsvHeader);
    }
    let n = labels.len();
    let elements = ElementSet::new(labels.iter().copied())?;

    let mut cells: Vec<Vec<Option<Rat>>> = vec![vec![None; n]; n];
    for (i, line) in lines.enumerate() {
        if i >= n {
            return Err(FormatError::BadCsvRow {
                row: i + 2,
                want: n + 1,
                got: 0,
            });
        }
        let row: Vec<&str> = line.split(',').map(str::trim).collect();
        if row.len() != n + 1 {
            return Err(FormatError::BadCsvRow {
                row: i + 2,
                want: n + 1,
                got: row.len(),
            });
        }
        if row[0] != labels[i] {
            return Err(FormatError::CsvRowOrder {
                row: i + 2,
                want: labels[i].to_string(),
                got: row[0].to_string(),
            });
        }
        for (j, cell) in row[1..].iter().enumerate() {
            if i == j {
                continue; // diagonal is never read
            }
            cells[i][j] = Some(parse_rational(cell)?);
        }
    }
    for (i, row) in cells.iter().enumerate() {
        for (j, cell) in row.iter().enumerate() {
            if i != j && cell.is_none() {
                return Err(FormatError::BadCsvRow {
                    row: i + 2,
                    want: n + 1,
                    got: 0,
                });
            }
        }
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if cells[i][j] != cells[j][i] {
                return Err(FormatError::AsymmetricEntry {
                    a: labels[i].to_string(),
                    b: labels[j].to_string(),
                });
            }
        }
    }
    let matrix = SimilarityMatrix::from_fn(elements, |i, j| {
        cells[i][j].clone().expect("checked above")
    })?;
    Ok(matrix)
}

/// Sparse TSV edge list: `label1<TAB>label2<TAB>value` per line; labels are
/// collected in order of first appearance and missing pairs default to zero.
pub fn matrix_from_tsv(text: &str) -> Result<SimilarityMatrix<Rat>, FormatError> {
    let mut labels: Vec<String> = Vec::new();
    let mut entries: Vec<(String, String, Rat)> = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 3 {
            return Err(FormatError::BadTsvLine { line: lineno + 1 });
        }
        let value = parse_rational(fields[2])?;
        for label in [fields[0], fields[1]] {
            if !labels.iter().any(|l| l == label) {
                labels.push(label.to_string());
            }
        }
        entries.push((fields[0].to_string(), fields[1].to_string(), value));
    }
    if labels.is_empty() {
        return Err(FormatError::EmptyMatrixFile);
    }
    let label_refs: Vec<&str> = labels.iter().map(String::as_str).collect();
    let entry_refs: Vec<(&str, &str, Rat)> = entries
        .iter()
        .map(|(a, b, v)| (a.as_str(), b.as_str(), v.clone()))
        .collect();
    Ok(SimilarityMatrix::from_entries(&label_refs, &entry_refs)?)
}

#[derive(Debug, Serialize, Deserialize)]
struct TreeJson {
    labels: Vec<String>,
    root: usize,
    nodes: Vec<NodeJson>,
}

#[derive(Debug, Serialize, Deserialize)]
struct NodeJson {
    id: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    leaf: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    children: Option<[usize; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    h: Option<String>,
}

/// Serialize a tree (and optional certificate weights) as JSON.
pub fn tree_to_json(
    tree: &ClusterTree,
    elements: &ElementSet,
    weights: Option<&BTreeMap<NodeId, Rat>>,
) -> String {
    let nodes = (0..tree.node_count())
        .map(|id| match tree.node(id) {
            Node::Leaf(e) => NodeJson {
                id,
                leaf: Some(elements.label(e).to_string()),
                children: None,
                h: None,
            },
            Node::Internal(l, r) => NodeJson {
                id,
                leaf: None,
                children: Some([l, r]),
                h: weights.and_then(|w| w.get(&id)).map(Rat::to_string),
            },
        })
        .collect();
    let doc = TreeJson {
        labels: elements.labels().to_vec(),
        root: tree.root(),
        nodes,
    };
    serde_json::to_string_pretty(&doc).expect("serializable")
}

/// Parse the JSON tree form back into a tree over the embedded element set,
/// plus any weight annotations.
pub fn tree_from_json(
    text: &str,
) -> Result<(ClusterTree, ElementSet, BTreeMap<NodeId, Rat>), FormatError> {
    let doc: TreeJson = serde_json::from_str(text)?;
    let elements = ElementSet::new(doc.labels.iter().cloned())?;
    let mut nodes = vec![None; doc.nodes.len()];
    let mut weights = BTreeMap::new();
    for node in &doc.nodes {
        if node.id >= nodes.len() {
            return Err(FormatError::BadTreeJson(format!(
                "node id {} out of range",
                node.id
            )));
        }
        let parsed = match (&node.leaf, &node.children) {
            (Some(label), None) => Node::Leaf(elements.index_of(label).ok_or_else(|| {
                FormatError::BadTreeJson(format!("leaf label `{label}` not in labels"))
            })?),
            (None, Some([l, r])) => Node::Internal(*l, *r),
            _ => {
                return Err(FormatError::BadTreeJson(format!(
                    "node {} must have either a leaf label or exactly two children",
                    node.id
                )))
            }
        };
        if nodes[node.id].replace(parsed).is_some() {
            return Err(FormatError::BadTreeJson(format!(
                "duplicate node id {}",
                node.id
            )));
        }
        if let Some(h) = &node.h {
            weights.insert(node.id, parse_rational(h)?);
        }
    }
    let nodes: Vec<Node> = nodes
        .into_iter()
        .enumerate()
        .map(|(id, n)| n.ok_or_else(|| FormatError::BadTreeJson(format!("missing node id {id}"))))
        .collect::<Result<_, _>>()?;
    let tree = ClusterTree::from_nodes(nodes, doc.root)?;
    Ok((tree, elements, weights))
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct ObjectiveJson {
    kind: String,
    #[serde(default)]
    aggregation: Option<String>,
    #[serde(default)]
    lambda: Option<String>,
    #[serde(default)]
    mu: Option<String>,
    #[serde(default)]
    nu: Option<String>,
    #[serde(default)]
    lambda1: Option<String>,
    #[serde(default)]
    lambda2: Option<String>,
    #[serde(default)]
    mu1: Option<String>,
    #[serde(default)]
    mu2: Option<String>,
    #[serde(default)]
    values: Option<Vec<Vec<String>>>,
}

/// Parse an objective specification:
/// `{"kind": "sum"|"max"|"poly"|"table", ...coefficients as exact strings}`.
///
/// `kind` names the scaling family; the aggregation defaults to sum for
/// `sum`/`poly` and max for `max`/`table`, overridable with
/// `"aggregation": "sum"|"max"`.
pub fn objective_from_json(text: &str) -> Result<ObjectiveSpec<Rat>, FormatError> {
    let doc: ObjectiveJson = serde_json::from_str(text)?;
    let get = |field: &Option<String>, name: &str| -> Result<Rat, FormatError> {
        field
            .as_deref()
            .ok_or_else(|| {
                FormatError::BadObjectiveJson(format!(
                    "kind `{}` requires field `{name}`",
                    doc.kind
                ))
            })
            .and_then(parse_rational)
    };
    let (scaling, default_kind): (Scaling<Rat>, ObjectiveKind) = match doc.kind.as_str() {
        "sum" => (
            SumScaling::new(
                get(&doc.lambda, "lambda")?,
                get(&doc.mu, "mu")?,
                get(&doc.nu, "nu")?,
            )
            .into(),
            ObjectiveKind::Sum,
        ),
        "max" => (
            MaxScaling::new(get(&doc.lambda, "lambda")?).into(),
            ObjectiveKind::Max,
        ),
        "poly" => (
            PolyScaling::new(
                get(&doc.lambda1, "lambda1")?,
                get(&doc.lambda2, "lambda2")?,
                get(&doc.mu1, "mu1")?,
                get(&doc.mu2, "mu2")?,
                get(&doc.nu, "nu")?,
            )
            .into(),
            ObjectiveKind::Sum,
        ),
        "table" => {
            let rows = doc.values.as_ref().ok_or_else(|| {
                FormatError::BadObjectiveJson("kind `table` requires field `values`".into())
            })?;
            let mut parsed = Vec::with_capacity(rows.len());
            for row in rows {
                parsed.push(
                    row.iter()
                        .map(|cell| parse_rational(cell))
                        .collect::<Result<Vec<_>, _>>()?,
                );
            }
            (TableScaling::new(parsed)?.into(), ObjectiveKind::Max)
        }
        other => {
            return Err(FormatError::BadObjectiveJson(format!(
                "unknown scaling kind `{other}`"
            )))
        }
    };
    let kind = match doc.aggregation.as_deref() {
        None => default_kind,
        Some("sum") => ObjectiveKind::Sum,
        Some("max") => ObjectiveKind::Max,
        Some(other) => {
            return Err(FormatError::BadObjectiveJson(format!(
                "unknown aggregation `{other}`"
            )))
        }
    };
    Ok(ObjectiveSpec { kind, scaling })
}
