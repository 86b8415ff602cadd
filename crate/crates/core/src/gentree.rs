//! Generating trees, their weight certificates, and the ultrametric bridge.
//!
//! A similarity matrix has a generating tree exactly when every triple
//! satisfies the reverse-ultrametric condition
//! `M(x, z) ≥ min{M(x, y), M(y, z)}`, equivalently when `M` is generated
//! from an ultrametric through a nonincreasing map. The three routes here —
//! triple scan, max-similarity agglomerative construction, affine ultrametric
//! conversion — are kept independent so they can cross-check each other.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::matrix::{ElementSet, SimilarityMatrix};
use crate::scalar::Scalar;
use crate::tree::{ClusterTree, Node, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GentreeError {
    #[error("tree has {tree} leaves but the matrix has {matrix} elements")]
    ElementCountMismatch { tree: usize, matrix: usize },
    #[error("certificate weights do not cover the internal nodes: {0}")]
    MalformedCertificate(String),
}

/// A cluster tree together with internal-node weights witnessing that it
/// generates the matrix: weights never increase from leaves toward the root,
/// and `h(lca(x, y)) = M(x, y)` for every pair.
#[derive(Debug, Clone, PartialEq)]
pub struct GeneratingCertificate<T> {
    pub tree: ClusterTree,
    /// Weight per internal node id.
    pub weights: BTreeMap<NodeId, T>,
}

/// Positive pairwise distances satisfying the strong triangle inequality,
/// together with the affine offset `c` used to convert from similarities.
#[derive(Debug, Clone, PartialEq)]
pub struct Ultrametric<T> {
    elements: ElementSet,
    distances: Vec<T>,
    offset: T,
}

impl<T: Scalar> Ultrametric<T> {
    pub fn elements(&self) -> &ElementSet {
        &self.elements
    }

    /// The constant `c` of the conversion `d(x, y) = −M(x, y) + c`.
    pub fn offset(&self) -> &T {
        &self.offset
    }

    pub fn distance(&self, i: usize, j: usize) -> &T {
        assert!(i != j, "ultrametric distances are stored off-diagonal only");
        let (i, j) = if i < j { (i, j) } else { (j, i) };
        let n = self.elements.len();
        &self.distances[i * n - i * (i + 1) / 2 + (j - i - 1)]
    }

    /// Map back to similarities through `f(ξ) = −ξ + c`; an exact round trip
    /// of [`to_ultrametric`].
    pub fn to_similarity(&self) -> SimilarityMatrix<T> {
        SimilarityMatrix::from_fn(self.elements.clone(), |i, j| {
            self.offset.clone() - self.distance(i, j).clone()
        })
        .expect("distances are at most the offset")
    }
}

/// First triple `(x, y, z)` violating `M(x, z) ≥ min{M(x, y), M(y, z)}`, in
/// lexicographic order over ordered triples of distinct indices.
pub fn reverse_ultrametric_witness<T: Scalar>(
    m: &SimilarityMatrix<T>,
) -> Option<(usize, usize, usize)> {
    let n = m.len();
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let lhs = m.get(x, z);
                let a = m.get(x, y);
                let b = m.get(y, z);
                let min = if a < b { a } else { b };
                if lhs < min {
                    return Some((x, y, z));
                }
            }
        }
    }
    None
}

/// Whether `M` has a generating tree, decided by the O(n³) triple scan.
/// Vacuously true for fewer than three elements.
pub fn has_generating_tree<T: Scalar>(m: &SimilarityMatrix<T>) -> bool {
    reverse_ultrametric_witness(m).is_none()
}

/// Construct a generating tree by repeatedly merging a maximum-similarity
/// pair into a super-node that keeps the earlier element's row. Ties pick the
/// lexicographically smallest pair in the current ordering, so the output is
/// deterministic. Returns `None` when the result fails verification, which
/// happens exactly when `M` has no generating tree.
pub fn construct_generating_tree<T: Scalar>(
    m: &SimilarityMatrix<T>,
) -> Option<GeneratingCertificate<T>> {
    let n = m.len();
    assert!(n >= 2, "construction needs at least two elements");

    // Active slots in current element order; each slot carries the subtree
    // built so far and the original element whose row represents it. The
    // merged super-node inherits the earlier element's row, so the original
    // matrix serves as the working matrix throughout.
    let mut nodes: Vec<Node> = (0..n).map(Node::Leaf).collect();
    let mut active: Vec<NodeId> = (0..n).collect();
    let mut rows: Vec<usize> = (0..n).collect();
    let mut weights = BTreeMap::new();

    while active.len() > 1 {
        let mut best: Option<(usize, usize)> = None;
        for p in 0..active.len() {
            for q in (p + 1)..active.len() {
                let v = m.get(rows[p], rows[q]);
                if best.is_none_or(|(bp, bq)| v > m.get(rows[bp], rows[bq])) {
                    best = Some((p, q));
                }
            }
        }
        let (p, q) = best.expect("at least one pair");
        let merged = nodes.len();
        nodes.push(Node::Internal(active[p], active[q]));
        weights.insert(merged, m.get(rows[p], rows[q]).clone());
        active[p] = merged;
        active.remove(q);
        rows.remove(q);
    }

    let tree = ClusterTree::from_nodes(nodes, active[0]).expect("merging yields a valid tree");
    let cert = GeneratingCertificate { tree, weights };
    match verify_certificate(&cert, m) {
        Ok(true) => Some(cert),
        _ => None,
    }
}

/// Check both generating-tree conditions exactly: weights are nonnegative
/// and nonincreasing toward the root, and `h(lca(x, y)) = M(x, y)` for every
/// pair of elements.
pub fn verify_certificate<T: Scalar>(
    cert: &GeneratingCertificate<T>,
    m: &SimilarityMatrix<T>,
) -> Result<bool, GentreeError> {
    let tree = &cert.tree;
    if tree.n_elements() != m.len() {
        return Err(GentreeError::ElementCountMismatch {
            tree: tree.n_elements(),
            matrix: m.len(),
        });
    }
    let internal: Vec<NodeId> = tree.internal_ids().collect();
    if internal.len() != cert.weights.len()
        || internal.iter().any(|id| !cert.weights.contains_key(id))
    {
        return Err(GentreeError::MalformedCertificate(format!(
            "expected weights for {} internal nodes, got {}",
            internal.len(),
            cert.weights.len()
        )));
    }

    for h in cert.weights.values() {
        if *h < T::zero() {
            return Ok(false);
        }
    }
    // parent monotonicity: h(parent) <= h(child) for internal children
    for &u in &internal {
        let (l, r) = tree.children(u).expect("internal");
        for child in [l, r] {
            if !tree.is_leaf(child) && cert.weights[&u] > cert.weights[&child] {
                return Ok(false);
            }
        }
    }
    // realization: h(lca(x, y)) = M(x, y)
    for (x, y, v) in m.pairs() {
        let anc = tree.lca(x, y).expect("elements are leaves");
        if cert.weights[&anc] != *v {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Reconstruct the forced weight map of `tree` on `m` if one exists: at each
/// internal node all cross pairs must share one value (which becomes `h`),
/// and the resulting weights must be monotone toward the root.
pub fn is_generating<T: Scalar>(
    tree: &ClusterTree,
    m: &SimilarityMatrix<T>,
) -> Result<Option<BTreeMap<NodeId, T>>, GentreeError> {
    if tree.n_elements() != m.len() {
        return Err(GentreeError::ElementCountMismatch {
            tree: tree.n_elements(),
            matrix: m.len(),
        });
    }
    let mut weights = BTreeMap::new();
    for v in tree.internal_ids() {
        let (l, r) = tree.children(v).expect("internal");
        let mut forced: Option<&T> = None;
        for &x in tree.leafset(l) {
            for &y in tree.leafset(r) {
                let val = m.get(x as usize, y as usize);
                match forced {
                    None => forced = Some(val),
                    Some(f) if f == val => {}
                    Some(_) => return Ok(None),
                }
            }
        }
        weights.insert(v, forced.expect("children are nonempty").clone());
    }
    let parents = tree.parents();
    for v in tree.internal_ids() {
        if let Some(u) = parents[v] {
            if weights[&u] > weights[&v] {
                return Ok(None);
            }
        }
    }
    Ok(Some(weights))
}

/// Convert to an ultrametric through `d(x, y) = −M(x, y) + c` with
/// `c = max M + 1`. Returns `None` when the strong triangle inequality fails
/// on the resulting distances, which happens exactly when `M` has no
/// generating tree. The check runs on the distances themselves, keeping this
/// route independent of the similarity-side triple scan.
pub fn to_ultrametric<T: Scalar>(m: &SimilarityMatrix<T>) -> Option<Ultrametric<T>> {
    let n = m.len();
    assert!(n >= 2, "conversion needs at least one pair");
    let offset = m.max_value().expect("n >= 2").clone() + T::one();
    let mut distances = Vec::with_capacity(n * (n - 1) / 2);
    for (_, _, v) in m.pairs() {
        distances.push(offset.clone() - v.clone());
    }
    let um = Ultrametric {
        elements: m.elements().clone(),
        distances,
        offset,
    };
    for x in 0..n {
        for y in 0..n {
            if y == x {
                continue;
            }
            for z in 0..n {
                if z == x || z == y {
                    continue;
                }
                let dxz = um.distance(x, z);
                let dxy = um.distance(x, y);
                let dyz = um.distance(y, z);
                let max = if dxy > dyz { dxy } else { dyz };
                if dxz > max {
                    return None;
                }
            }
        }
    }
    Some(um)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::tree::NestedSplit;

    fn rat(n: i64) -> Rat {
        Rat::from_ratio(n, 1)
    }

    /// M(x,z) = 2, M(x,y) = M(y,z) = 1 on labels [x, y, z]
    fn wedge() -> SimilarityMatrix<Rat> {
        SimilarityMatrix::from_entries(
            &["x", "y", "z"],
            &[("x", "z", rat(2)), ("x", "y", rat(1)), ("y", "z", rat(1))],
        )
        .unwrap()
    }

    /// M(x,y) = M(y,z) = 3, M(x,z) = 1: violates the triple condition
    fn broken() -> SimilarityMatrix<Rat> {
        SimilarityMatrix::from_entries(
            &["x", "y", "z"],
            &[("x", "y", rat(3)), ("y", "z", rat(3)), ("x", "z", rat(1))],
        )
        .unwrap()
    }

    #[test]
    fn triple_condition() {
        assert!(has_generating_tree(&SimilarityMatrix::uniform(4, rat(1))));
        assert!(has_generating_tree(&wedge()));
        assert!(!has_generating_tree(&broken()));
        assert_eq!(reverse_ultrametric_witness(&broken()), Some((0, 1, 2)));
        // no triples at n = 2
        assert!(has_generating_tree(&SimilarityMatrix::uniform(2, rat(0))));
    }

    #[test]
    fn construction_on_the_wedge() {
        let cert = construct_generating_tree(&wedge()).unwrap();
        // tree must be ((x,z),y) with h(inner) = 2, h(root) = 1
        let expected = ClusterTree::from_nested(&NestedSplit::split(
            NestedSplit::split(NestedSplit::Leaf(0), NestedSplit::Leaf(2)),
            NestedSplit::Leaf(1),
        ))
        .unwrap();
        assert_eq!(cert.tree, expected);
        let root = cert.tree.root();
        let inner = cert.tree.lca(0, 2).unwrap();
        assert_eq!(cert.weights[&inner], rat(2));
        assert_eq!(cert.weights[&root], rat(1));
        assert_eq!(verify_certificate(&cert, &wedge()), Ok(true));
    }

    #[test]
    fn construction_fails_on_violation() {
        assert!(construct_generating_tree(&broken()).is_none());
    }

    #[test]
    fn uniform_matrix_generates_everywhere() {
        let uniform = SimilarityMatrix::uniform(4, rat(1));
        let cert = construct_generating_tree(&uniform).unwrap();
        assert!(cert.weights.values().all(|h| *h == rat(1)));

        // every tree on a uniform matrix is generating with h ≡ 1
        let t = ClusterTree::from_nested(&NestedSplit::split(
            NestedSplit::split(NestedSplit::Leaf(0), NestedSplit::Leaf(2)),
            NestedSplit::split(NestedSplit::Leaf(1), NestedSplit::Leaf(3)),
        ))
        .unwrap();
        let forced = is_generating(&t, &uniform).unwrap().unwrap();
        assert!(forced.values().all(|h| *h == rat(1)));
        let cert = GeneratingCertificate {
            tree: t,
            weights: forced,
        };
        assert_eq!(verify_certificate(&cert, &uniform), Ok(true));
    }

    #[test]
    fn forced_weights_on_the_wedge() {
        let m = wedge();
        let good = ClusterTree::from_nested(&NestedSplit::split(
            NestedSplit::split(NestedSplit::Leaf(0), NestedSplit::Leaf(2)),
            NestedSplit::Leaf(1),
        ))
        .unwrap();
        let weights = is_generating(&good, &m).unwrap().unwrap();
        let mut values: Vec<Rat> = weights.values().cloned().collect();
        values.sort();
        assert_eq!(values, vec![rat(1), rat(2)]);

        // ((x,y),z): root cross pairs are M(x,z)=2 and M(y,z)=1, not constant
        let bad = ClusterTree::from_nested(&NestedSplit::split(
            NestedSplit::split(NestedSplit::Leaf(0), NestedSplit::Leaf(1)),
            NestedSplit::Leaf(2),
        ))
        .unwrap();
        assert_eq!(is_generating(&bad, &m).unwrap(), None);
    }

    #[test]
    fn perturbed_certificate_fails() {
        let m = wedge();
        let mut cert = construct_generating_tree(&m).unwrap();
        let inner = cert.tree.lca(0, 2).unwrap();
        let old = cert.weights[&inner].clone();
        cert.weights.insert(inner, old + rat(1));
        assert_eq!(verify_certificate(&cert, &m), Ok(false));
    }

    #[test]
    fn certificate_shape_is_validated() {
        let m = wedge();
        let mut cert = construct_generating_tree(&m).unwrap();
        cert.weights.remove(&cert.tree.root());
        assert!(matches!(
            verify_certificate(&cert, &m),
            Err(GentreeError::MalformedCertificate(_))
        ));

        let small = SimilarityMatrix::uniform(2, rat(1));
        let cert2 = construct_generating_tree(&small).unwrap();
        assert!(matches!(
            verify_certificate(&cert2, &m),
            Err(GentreeError::ElementCountMismatch { .. })
        ));
    }

    #[test]
    fn ultrametric_conversion() {
        let um = to_ultrametric(&wedge()).unwrap();
        assert_eq!(um.offset(), &rat(3));
        assert_eq!(um.distance(0, 2), &rat(1));
        assert_eq!(um.distance(0, 1), &rat(2));
        assert_eq!(um.distance(1, 2), &rat(2));
        assert_eq!(um.to_similarity(), wedge());

        assert!(to_ultrametric(&broken()).is_none());

        let um = to_ultrametric(&SimilarityMatrix::uniform(3, rat(1))).unwrap();
        assert_eq!(um.offset(), &rat(2));
        assert_eq!(um.distance(0, 1), &rat(1));
    }
}
