//! Newick serialization for cluster trees, with optional internal-node
//! weight annotations for generating-tree certificates:
//! `((x,z)h=2,y)h=1;`.
//!
//! Children are unordered; the writer emits them smallest-leaf-first so equal
//! trees serialize identically. Weights are carried as raw strings here and
//! parsed by the caller, keeping this module independent of the scalar type.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::ElementSet;
use crate::scalar::Scalar;
use crate::tree::{ClusterTree, Node, NodeId, TreeError};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum NewickError {
    #[error("unexpected character `{ch}` at position {pos}")]
    UnexpectedChar { pos: usize, ch: char },
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("trailing input after `;` at position {pos}")]
    TrailingInput { pos: usize },
    #[error("empty label at position {pos}")]
    EmptyLabel { pos: usize },
    #[error("internal nodes must have exactly two children (position {pos})")]
    NotBinary { pos: usize },
    #[error("unknown leaf label `{0}`")]
    UnknownLabel(String),
    #[error("label `{0}` cannot be written to Newick (contains a delimiter)")]
    UnwritableLabel(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
}

/// Parsed Newick structure before resolving labels against an element set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NewickNode {
    Leaf(String),
    Internal {
        left: Box<NewickNode>,
        right: Box<NewickNode>,
        weight: Option<String>,
    },
}

impl NewickNode {
    /// Leaf labels in left-to-right order.
    pub fn leaf_labels(&self) -> Vec<&str> {
        let mut labels = Vec::new();
        self.collect_labels(&mut labels);
        labels
    }

    fn collect_labels<'a>(&'a self, out: &mut Vec<&'a str>) {
        match self {
            NewickNode::Leaf(label) => out.push(label),
            NewickNode::Internal { left, right, .. } => {
                left.collect_labels(out);
                right.collect_labels(out);
            }
        }
    }

    /// Build the cluster tree over the given element set, returning any
    /// weight annotations keyed by the node ids of the result.
    pub fn to_cluster_tree(
        &self,
        elements: &ElementSet,
    ) -> Result<(ClusterTree, BTreeMap<NodeId, String>), NewickError> {
        let mut nodes = Vec::new();
        let mut weights = BTreeMap::new();
        let root = self.build(elements, &mut nodes, &mut weights)?;
        let tree = ClusterTree::from_nodes(nodes, root)?;
        Ok((tree, weights))
    }

    fn build(
        &self,
        elements: &ElementSet,
        nodes: &mut Vec<Node>,
        weights: &mut BTreeMap<NodeId, String>,
    ) -> Result<NodeId, NewickError> {
        match self {
            NewickNode::Leaf(label) => {
                let e = elements
                    .index_of(label)
                    .ok_or_else(|| NewickError::UnknownLabel(label.clone()))?;
                nodes.push(Node::Leaf(e));
                Ok(nodes.len() - 1)
            }
            NewickNode::Internal {
                left,
                right,
                weight,
            } => {
                let l = left.build(elements, nodes, weights)?;
                let r = right.build(elements, nodes, weights)?;
                nodes.push(Node::Internal(l, r));
                let id = nodes.len() - 1;
                if let Some(w) = weight {
                    weights.insert(id, w.clone());
                }
                Ok(id)
            }
        }
    }
}

const DELIMITERS: &[char] = &['(', ')', ',', ';', '='];

/// Parse a Newick string, e.g. `((a,b),c);`, optionally annotated with
/// `h=<value>` after internal nodes.
pub fn parse(input: &str) -> Result<NewickNode, NewickError> {
    let chars: Vec<char> = input.chars().collect();
    let mut pos = 0;
    let node = parse_node(&chars, &mut pos)?;
    skip_ws(&chars, &mut pos);
    match chars.get(pos) {
        Some(';') => pos += 1,
        Some(&ch) => return Err(NewickError::UnexpectedChar { pos, ch }),
        None => return Err(NewickError::UnexpectedEnd),
    }
    skip_ws(&chars, &mut pos);
    if pos != chars.len() {
        return Err(NewickError::TrailingInput { pos });
    }
    Ok(node)
}

fn parse_node(chars: &[char], pos: &mut usize) -> Result<NewickNode, NewickError> {
    skip_ws(chars, pos);
    match chars.get(*pos) {
        Some('(') => {
            *pos += 1;
            let left = parse_node(chars, pos)?;
            skip_ws(chars, pos);
            match chars.get(*pos) {
                Some(',') => *pos += 1,
                Some(')') => return Err(NewickError::NotBinary { pos: *pos }),
                Some(&ch) => return Err(NewickError::UnexpectedChar { pos: *pos, ch }),
                None => return Err(NewickError::UnexpectedEnd),
            }
            let right = parse_node(chars, pos)?;
            skip_ws(chars, pos);
            match chars.get(*pos) {
                Some(')') => *pos += 1,
                Some(',') => return Err(NewickError::NotBinary { pos: *pos }),
                Some(&ch) => return Err(NewickError::UnexpectedChar { pos: *pos, ch }),
                None => return Err(NewickError::UnexpectedEnd),
            }
            let weight = parse_weight_tag(chars, pos)?;
            Ok(NewickNode::Internal {
                left: Box::new(left),
                right: Box::new(right),
                weight,
            })
        }
        Some(_) => {
            let label = parse_token(chars, pos)?;
            Ok(NewickNode::Leaf(label))
        }
        None => Err(NewickError::UnexpectedEnd),
    }
}

fn parse_weight_tag(chars: &[char], pos: &mut usize) -> Result<Option<String>, NewickError> {
    skip_ws(chars, pos);
    if chars.get(*pos) == Some(&'h') && chars.get(*pos + 1) == Some(&'=') {
        *pos += 2;
        let value = parse_token(chars, pos)?;
        Ok(Some(value))
    } else {
        Ok(None)
    }
}

fn parse_token(chars: &[char], pos: &mut usize) -> Result<String, NewickError> {
    skip_ws(chars, pos);
    let start = *pos;
    let mut token = String::new();
    while let Some(&ch) = chars.get(*pos) {
        if DELIMITERS.contains(&ch) || ch.is_whitespace() {
            break;
        }
        token.push(ch);
        *pos += 1;
    }
    if token.is_empty() {
        match chars.get(*pos) {
            Some(&ch) => Err(NewickError::UnexpectedChar { pos: *pos, ch }),
            None if start == *pos => Err(NewickError::UnexpectedEnd),
            None => Err(NewickError::EmptyLabel { pos: start }),
        }
    } else {
        Ok(token)
    }
}

fn skip_ws(chars: &[char], pos: &mut usize) {
    while chars.get(*pos).is_some_and(|c| c.is_whitespace()) {
        *pos += 1;
    }
}

/// Serialize a tree, children smallest-leaf-first, terminated by `;`.
pub fn write(tree: &ClusterTree, elements: &ElementSet) -> Result<String, NewickError> {
    let mut out = String::new();
    write_node(tree, tree.root(), elements, None, &mut out)?;
    out.push(';');
    Ok(out)
}

/// Serialize with `h=` weight annotations on internal nodes.
pub fn write_annotated<T: Scalar>(
    tree: &ClusterTree,
    elements: &ElementSet,
    weights: &BTreeMap<NodeId, T>,
) -> Result<String, NewickError> {
    let rendered: BTreeMap<NodeId, String> = weights
        .iter()
        .map(|(id, w)| (*id, w.to_string()))
        .collect();
    let mut out = String::new();
    write_node(tree, tree.root(), elements, Some(&rendered), &mut out)?;
    out.push(';');
    Ok(out)
}

fn write_node(
    tree: &ClusterTree,
    id: NodeId,
    elements: &ElementSet,
    weights: Option<&BTreeMap<NodeId, String>>,
    out: &mut String,
) -> Result<(), NewickError> {
    match tree.node(id) {
        Node::Leaf(e) => {
            let label = elements.label(e);
            if label.is_empty()
                || label.contains(DELIMITERS)
                || label.contains(char::is_whitespace)
            {
                return Err(NewickError::UnwritableLabel(label.to_string()));
            }
            out.push_str(label);
        }
        Node::Internal(l, r) => {
            let (first, second) = if tree.leafset(l)[0] <= tree.leafset(r)[0] {
                (l, r)
            } else {
                (r, l)
            };
            out.push('(');
            write_node(tree, first, elements, weights, out)?;
            out.push(',');
            write_node(tree, second, elements, weights, out)?;
            out.push(')');
            if let Some(map) = weights {
                if let Some(w) = map.get(&id) {
                    out.push_str(&format!("h={w}"));
                }
            }
        }
    }
    Ok(())
}
