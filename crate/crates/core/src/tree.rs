//! Cluster trees: rooted full binary trees whose leaves are the element set.
//!
//! Child order is preserved as given but carries no meaning; two trees are
//! equal when they induce the same family of clusters. Leaf sets are computed
//! once at construction and cached per node, since every objective and every
//! enumeration pass queries them repeatedly.

use std::hash::{Hash, Hasher};

use thiserror::Error;

pub type NodeId = usize;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TreeError {
    #[error("element {0} appears more than once")]
    DuplicateElement(usize),
    #[error("elements must cover 0..n without gaps; missing {0}")]
    MissingElement(usize),
    #[error("node {0} is out of range")]
    NodeOutOfRange(NodeId),
    #[error("node {0} is referenced more than once")]
    SharedNode(NodeId),
    #[error("node {0} is not reachable from the root")]
    UnreachableNode(NodeId),
    #[error("lca arguments must be distinct (got {0} twice)")]
    IdenticalElements(usize),
    #[error("element {0} is not a leaf of this tree")]
    UnknownElement(usize),
}

/// A node is a leaf carrying an element index or an internal node with
/// exactly two children.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Node {
    Leaf(usize),
    Internal(NodeId, NodeId),
}

/// Recursive bipartition description, the input shape for tree construction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum NestedSplit {
    Leaf(usize),
    Split(Box<NestedSplit>, Box<NestedSplit>),
}

impl NestedSplit {
    pub fn split(left: NestedSplit, right: NestedSplit) -> Self {
        NestedSplit::Split(Box::new(left), Box::new(right))
    }

    pub fn leaf(element: usize) -> Self {
        NestedSplit::Leaf(element)
    }
}

/// Rooted full binary tree over elements `0..n`, with cached leaf sets.
#[derive(Debug, Clone)]
pub struct ClusterTree {
    nodes: Vec<Node>,
    root: NodeId,
    leafsets: Vec<Vec<u32>>,
}

impl ClusterTree {
    /// The one-node tree on a single element (the base case of every
    /// recursive construction).
    pub fn single_leaf(element: usize) -> Self {
        Self {
            nodes: vec![Node::Leaf(element)],
            root: 0,
            leafsets: vec![vec![element as u32]],
        }
    }

    /// Build and validate a tree from an explicit node pool and root.
    ///
    /// Every node must be reachable from the root exactly once, and the leaf
    /// elements must be exactly `0..n` for some `n`.
    pub fn from_nodes(nodes: Vec<Node>, root: NodeId) -> Result<Self, TreeError> {
        if root >= nodes.len() {
            return Err(TreeError::NodeOutOfRange(root));
        }
        let mut visited = vec![false; nodes.len()];
        let mut leafsets: Vec<Option<Vec<u32>>> = vec![None; nodes.len()];
        // Iterative post-order so deep caterpillars cannot overflow the stack.
        let mut stack = vec![(root, false)];
        while let Some((id, expanded)) = stack.pop() {
            if id >= nodes.len() {
                return Err(TreeError::NodeOutOfRange(id));
            }
            if expanded {
                if let Node::Internal(l, r) = nodes[id] {
                    let left = leafsets[l].as_ref().expect("child computed first");
                    let right = leafsets[r].as_ref().expect("child computed first");
                    leafsets[id] = Some(merge_sorted(left, right)?);
                }
                continue;
            }
            if visited[id] {
                return Err(TreeError::SharedNode(id));
            }
            visited[id] = true;
            match nodes[id] {
                Node::Leaf(e) => leafsets[id] = Some(vec![e as u32]),
                Node::Internal(l, r) => {
                    stack.push((id, true));
                    stack.push((l, false));
                    stack.push((r, false));
                }
            }
        }
        if let Some(unused) = visited.iter().position(|v| !v) {
            return Err(TreeError::UnreachableNode(unused));
        }
        let leafsets: Vec<Vec<u32>> = leafsets.into_iter().map(|s| s.expect("visited")).collect();
        let rootset = &leafsets[root];
        for (want, &got) in rootset.iter().enumerate() {
            if got as usize != want {
                return Err(TreeError::MissingElement(want));
            }
        }
        Ok(Self {
            nodes,
            root,
            leafsets,
        })
    }

    /// Build a tree from a recursive bipartition description.
    pub fn from_nested(spec: &NestedSplit) -> Result<Self, TreeError> {
        let mut nodes = Vec::new();
        let root = build_nested(spec, &mut nodes);
        Self::from_nodes(nodes, root)
    }

    pub fn n_elements(&self) -> usize {
        self.leafsets[self.root].len()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn internal_count(&self) -> usize {
        self.nodes.len() - self.n_elements()
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn node(&self, id: NodeId) -> Node {
        self.nodes[id]
    }

    pub fn children(&self, id: NodeId) -> Option<(NodeId, NodeId)> {
        match self.nodes[id] {
            Node::Leaf(_) => None,
            Node::Internal(l, r) => Some((l, r)),
        }
    }

    pub fn is_leaf(&self, id: NodeId) -> bool {
        matches!(self.nodes[id], Node::Leaf(_))
    }

    /// Sorted element indices below node `id`.
    pub fn leafset(&self, id: NodeId) -> &[u32] {
        &self.leafsets[id]
    }

    pub fn internal_ids(&self) -> impl Iterator<Item = NodeId> + '_ {
        (0..self.nodes.len()).filter(move |&id| !self.is_leaf(id))
    }

    /// Parent of each node (`None` for the root).
    pub fn parents(&self) -> Vec<Option<NodeId>> {
        let mut parents = vec![None; self.nodes.len()];
        for id in self.internal_ids() {
            let (l, r) = self.children(id).expect("internal");
            parents[l] = Some(id);
            parents[r] = Some(id);
        }
        parents
    }

    /// Deepest node whose leaf set contains both `x` and `y`; always an
    /// internal node for distinct leaves.
    pub fn lca(&self, x: usize, y: usize) -> Result<NodeId, TreeError> {
        if x == y {
            return Err(TreeError::IdenticalElements(x));
        }
        let rootset = self.leafset(self.root);
        for e in [x, y] {
            if rootset.binary_search(&(e as u32)).is_err() {
                return Err(TreeError::UnknownElement(e));
            }
        }
        let mut id = self.root;
        loop {
            let Some((l, r)) = self.children(id) else {
                unreachable!("distinct leaves split before reaching a leaf");
            };
            let both = |set: &[u32]| {
                set.binary_search(&(x as u32)).is_ok() && set.binary_search(&(y as u32)).is_ok()
            };
            if both(self.leafset(l)) {
                id = l;
            } else if both(self.leafset(r)) {
                id = r;
            } else {
                return Ok(id);
            }
        }
    }

    /// The cluster family induced by the tree, sorted: leaf set of every
    /// internal node plus the root's. Two trees on the same elements are equal
    /// exactly when these families coincide, which makes this the normal form
    /// under child swaps.
    pub fn canonical_key(&self) -> Vec<Vec<u32>> {
        let mut key: Vec<Vec<u32>> = self
            .internal_ids()
            .map(|id| self.leafsets[id].clone())
            .collect();
        key.push(self.leafsets[self.root].clone());
        key.sort();
        key.dedup();
        key
    }

    /// Recursive description with children ordered by smallest leaf, the
    /// deterministic form used for serialization.
    pub fn to_nested_canonical(&self) -> NestedSplit {
        self.nested_of(self.root)
    }

    fn nested_of(&self, id: NodeId) -> NestedSplit {
        match self.nodes[id] {
            Node::Leaf(e) => NestedSplit::Leaf(e),
            Node::Internal(l, r) => {
                let (first, second) = if self.leafsets[l][0] <= self.leafsets[r][0] {
                    (l, r)
                } else {
                    (r, l)
                };
                NestedSplit::split(self.nested_of(first), self.nested_of(second))
            }
        }
    }
}

impl PartialEq for ClusterTree {
    fn eq(&self, other: &Self) -> bool {
        self.canonical_key() == other.canonical_key()
    }
}

impl Eq for ClusterTree {}

impl Hash for ClusterTree {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.canonical_key().hash(state);
    }
}

fn build_nested(spec: &NestedSplit, nodes: &mut Vec<Node>) -> NodeId {
    match spec {
        NestedSplit::Leaf(e) => {
            nodes.push(Node::Leaf(*e));
            nodes.len() - 1
        }
        NestedSplit::Split(l, r) => {
            let left = build_nested(l, nodes);
            let right = build_nested(r, nodes);
            nodes.push(Node::Internal(left, right));
            nodes.len() - 1
        }
    }
}

fn merge_sorted(a: &[u32], b: &[u32]) -> Result<Vec<u32>, TreeError> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => {
                out.push(a[i]);
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push(b[j]);
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                return Err(TreeError::DuplicateElement(a[i] as usize));
            }
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Ok(out)
}
