//! Sum-type and max-type cluster-tree objectives.
//!
//! Both families share the shape `Γ(T) = Σ_v crossterm(v₊, v₋) · g(|L(v₊)|,
//! |L(v₋)|)` over internal nodes `v`; they differ only in whether the cross
//! term aggregates (`H_T`, total similarity) or takes the strongest link
//! (`K_T`, maximum similarity). Evaluation walks each internal node once over
//! the cached leaf sets; at desk scale clarity beats prefix tricks, and the
//! enumeration oracle dominates runtime anyway.

use thiserror::Error;

use crate::matrix::SimilarityMatrix;
use crate::scalar::Scalar;
use crate::scaling::{MaxScaling, Scaling, ScalingError, SumScaling};
use crate::tree::{ClusterTree, NodeId};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("tree has {tree} leaves but the matrix has {matrix} elements")]
    ElementCountMismatch { tree: usize, matrix: usize },
    #[error("cross terms require disjoint leaf sets")]
    OverlappingLeafSets,
    #[error(transparent)]
    Scaling(#[from] ScalingError),
}

/// Whether cross-cluster interaction is aggregated or maximal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ObjectiveKind {
    Sum,
    Max,
}

/// A complete objective: the aggregation kind plus the scaling of child
/// sizes. Either kind pairs with any scaling; evaluation is generic.
#[derive(Debug, Clone, PartialEq)]
pub struct ObjectiveSpec<T> {
    pub kind: ObjectiveKind,
    pub scaling: Scaling<T>,
}

impl<T: Scalar> ObjectiveSpec<T> {
    pub fn sum(scaling: SumScaling<T>) -> Self {
        Self {
            kind: ObjectiveKind::Sum,
            scaling: scaling.into(),
        }
    }

    pub fn max(scaling: MaxScaling<T>) -> Self {
        Self {
            kind: ObjectiveKind::Max,
            scaling: scaling.into(),
        }
    }

    /// Dasgupta's original objective: sum kind with `g(a, b) = a + b`.
    pub fn dasgupta() -> Self {
        Self::sum(SumScaling::dasgupta())
    }
}

/// Total similarity between the leaf sets of two nodes,
/// `H_T(v, w) = Σ_{x ∈ L(v), y ∈ L(w)} M(x, y)`.
pub fn cross_sum<T: Scalar>(
    tree: &ClusterTree,
    v: NodeId,
    w: NodeId,
    m: &SimilarityMatrix<T>,
) -> Result<T, EvalError> {
    check_disjoint(tree, v, w)?;
    let mut total = T::zero();
    for &x in tree.leafset(v) {
        for &y in tree.leafset(w) {
            total = total + m.get(x as usize, y as usize).clone();
        }
    }
    Ok(total)
}

/// Maximum similarity between the leaf sets of two nodes,
/// `K_T(v, w) = max_{x ∈ L(v), y ∈ L(w)} M(x, y)`.
pub fn cross_max<T: Scalar>(
    tree: &ClusterTree,
    v: NodeId,
    w: NodeId,
    m: &SimilarityMatrix<T>,
) -> Result<T, EvalError> {
    check_disjoint(tree, v, w)?;
    let mut best: Option<&T> = None;
    for &x in tree.leafset(v) {
        for &y in tree.leafset(w) {
            let val = m.get(x as usize, y as usize);
            if best.is_none_or(|b| val > b) {
                best = Some(val);
            }
        }
    }
    Ok(best.expect("leaf sets are nonempty").clone())
}

/// Evaluate `Γ(T)` under the given objective. A single-leaf tree has no
/// internal nodes and evaluates to zero.
pub fn gamma<T: Scalar>(
    tree: &ClusterTree,
    m: &SimilarityMatrix<T>,
    spec: &ObjectiveSpec<T>,
) -> Result<T, EvalError> {
    if tree.n_elements() != m.len() {
        return Err(EvalError::ElementCountMismatch {
            tree: tree.n_elements(),
            matrix: m.len(),
        });
    }
    let mut total = T::zero();
    for v in tree.internal_ids() {
        let (l, r) = tree.children(v).expect("internal node");
        let cross = match spec.kind {
            ObjectiveKind::Sum => cross_sum(tree, l, r, m)?,
            ObjectiveKind::Max => cross_max(tree, l, r, m)?,
        };
        let weight = spec
            .scaling
            .eval(tree.leafset(l).len(), tree.leafset(r).len())?;
        total = total + cross * weight;
    }
    Ok(total)
}

/// Dasgupta's cost `Σ_v H_T(v₊, v₋)(|L(v₊)| + |L(v₋)|)`.
pub fn dasgupta_value<T: Scalar>(
    tree: &ClusterTree,
    m: &SimilarityMatrix<T>,
) -> Result<T, EvalError> {
    gamma(tree, m, &ObjectiveSpec::dasgupta())
}

fn check_disjoint(tree: &ClusterTree, v: NodeId, w: NodeId) -> Result<(), EvalError> {
    let (a, b) = (tree.leafset(v), tree.leafset(w));
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        match a[i].cmp(&b[j]) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => return Err(EvalError::OverlappingLeafSets),
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::scaling::MaxScaling;
    use crate::tree::NestedSplit;

    fn rat(n: i64) -> Rat {
        Rat::from_ratio(n, 1)
    }

    fn nested(spec: &str) -> ClusterTree {
        // tiny recursive parser over digit labels for test convenience
        fn parse(chars: &mut std::iter::Peekable<std::str::Chars>) -> NestedSplit {
            if chars.peek() == Some(&'(') {
                chars.next();
                let left = parse(chars);
                assert_eq!(chars.next(), Some(','));
                let right = parse(chars);
                assert_eq!(chars.next(), Some(')'));
                NestedSplit::split(left, right)
            } else {
                let mut digits = String::new();
                while chars.peek().is_some_and(|c| c.is_ascii_digit()) {
                    digits.push(chars.next().unwrap());
                }
                NestedSplit::Leaf(digits.parse().unwrap())
            }
        }
        ClusterTree::from_nested(&parse(&mut spec.chars().peekable())).unwrap()
    }

    #[test]
    fn cross_terms() {
        // v leaves {0,1}, w leaves {2,3,4}
        let t = nested("((0,1),((2,3),4))");
        let (l, r) = t.children(t.root()).unwrap();
        let uniform = SimilarityMatrix::uniform(5, rat(1));
        assert_eq!(cross_sum(&t, l, r, &uniform).unwrap(), rat(6));
        assert_eq!(cross_max(&t, l, r, &uniform).unwrap(), rat(1));

        let zero = SimilarityMatrix::uniform(5, rat(0));
        assert_eq!(cross_sum(&t, l, r, &zero).unwrap(), rat(0));
        assert_eq!(cross_max(&t, l, r, &zero).unwrap(), rat(0));

        assert_eq!(
            cross_sum(&t, t.root(), r, &uniform).unwrap_err(),
            EvalError::OverlappingLeafSets
        );
    }

    #[test]
    fn cross_terms_single_nonzero_pair() {
        // v leaves {0,1}, w leaves {2}; only M(0,2) = 5 is nonzero
        let t = nested("((0,1),2)");
        let (l, r) = t.children(t.root()).unwrap();
        let m = SimilarityMatrix::from_entries(&["a", "b", "c"], &[("a", "c", rat(5))]).unwrap();
        assert_eq!(cross_sum(&t, l, r, &m).unwrap(), rat(5));

        let m2 = SimilarityMatrix::from_entries(
            &["a", "b", "c"],
            &[("a", "c", rat(5)), ("b", "c", rat(2))],
        )
        .unwrap();
        assert_eq!(cross_max(&t, l, r, &m2).unwrap(), rat(5));
    }

    #[test]
    fn gamma_caterpillar_matches_split_expansion() {
        // Γ(T₁) = 4g(4,1) + 3g(3,1) + 2g(2,1) + g(1,1) on the unit 5-clique
        let t1 = nested("((((0,1),2),3),4)");
        let uniform = SimilarityMatrix::uniform(5, rat(1));
        let s = SumScaling::new(rat(2), rat(3), rat(5));
        let expect = rat(4) * s.eval(4, 1)
            + rat(3) * s.eval(3, 1)
            + rat(2) * s.eval(2, 1)
            + s.eval(1, 1);
        assert_eq!(
            gamma(&t1, &uniform, &ObjectiveSpec::sum(s)).unwrap(),
            expect
        );
    }

    #[test]
    fn gamma_max_unit_clique_is_shape_free() {
        let uniform = SimilarityMatrix::uniform(5, rat(1));
        let spec = ObjectiveSpec::max(MaxScaling::new(rat(1)));
        for shape in ["((((0,1),2),3),4)", "(((0,1),(2,3)),4)", "((0,1),((2,3),4))"] {
            assert_eq!(gamma(&nested(shape), &uniform, &spec).unwrap(), rat(10));
        }
    }

    #[test]
    fn gamma_trivial_cases() {
        let single = ClusterTree::single_leaf(0);
        let m1 = SimilarityMatrix::uniform(1, rat(1));
        assert_eq!(gamma(&single, &m1, &ObjectiveSpec::dasgupta()).unwrap(), rat(0));

        let t = nested("((0,1),2)");
        let wrong = SimilarityMatrix::uniform(4, rat(1));
        assert!(matches!(
            gamma(&t, &wrong, &ObjectiveSpec::dasgupta()).unwrap_err(),
            EvalError::ElementCountMismatch { .. }
        ));
    }

    #[test]
    fn dasgupta_examples() {
        let t = nested("((0,1),2)");
        let uniform = SimilarityMatrix::uniform(3, rat(1));
        assert_eq!(dasgupta_value(&t, &uniform).unwrap(), rat(8));

        let zero = SimilarityMatrix::uniform(3, rat(0));
        assert_eq!(dasgupta_value(&t, &zero).unwrap(), rat(0));
    }

    #[test]
    fn gamma_invariant_under_child_swap() {
        let a = nested("(((0,2),1),(3,4))");
        let b = nested("((3,4),(1,(2,0)))");
        let m = SimilarityMatrix::from_fn(crate::ElementSet::indexed(5), |i, j| {
            rat(((i * 7 + j * 3) % 5) as i64)
        })
        .unwrap();
        for spec in [
            ObjectiveSpec::sum(SumScaling::new(rat(1), rat(2), rat(3))),
            ObjectiveSpec::max(MaxScaling::new(rat(2))),
        ] {
            assert_eq!(
                gamma(&a, &m, &spec).unwrap(),
                gamma(&b, &m, &spec).unwrap()
            );
        }
    }

    #[test]
    fn gamma_decomposes_recursively() {
        // Γ(T) = crossterm(root)·g(a,b) + Γ(T₊) + Γ(T₋) on restricted matrices
        let t = nested("(((0,1),2),(3,4))");
        let m = SimilarityMatrix::from_fn(crate::ElementSet::indexed(5), |i, j| {
            rat(((i + 2 * j) % 4) as i64)
        })
        .unwrap();
        let (l, r) = t.children(t.root()).unwrap();
        let left_sub = nested("((0,1),2)");
        let right_sub = nested("(0,1)");
        let ml = m.restrict(&[0, 1, 2]).unwrap();
        let mr = m.restrict(&[3, 4]).unwrap();
        for (kind, scaling) in [
            (
                ObjectiveKind::Sum,
                Scaling::from(SumScaling::new(rat(1), rat(1), rat(-2))),
            ),
            (ObjectiveKind::Max, Scaling::from(MaxScaling::new(rat(3)))),
        ] {
            let spec = ObjectiveSpec {
                kind,
                scaling: scaling.clone(),
            };
            let cross = match kind {
                ObjectiveKind::Sum => cross_sum(&t, l, r, &m).unwrap(),
                ObjectiveKind::Max => cross_max(&t, l, r, &m).unwrap(),
            };
            let g_root = scaling.eval(3, 2).unwrap();
            let whole = gamma(&t, &m, &spec).unwrap();
            let parts = cross * g_root
                + gamma(&left_sub, &ml, &spec).unwrap()
                + gamma(&right_sub, &mr, &spec).unwrap();
            assert_eq!(whole, parts);
        }
    }

    #[test]
    fn gamma_scales_with_matrix() {
        // scaling M by a positive rational scales Γ by the same factor
        let t = nested("((0,(1,2)),3)");
        let rho = Rat::from_ratio(3, 2);
        let m = SimilarityMatrix::from_fn(crate::ElementSet::indexed(4), |i, j| {
            rat((i + j) as i64)
        })
        .unwrap();
        let scaled = SimilarityMatrix::from_fn(crate::ElementSet::indexed(4), |i, j| {
            rho.clone() * rat((i + j) as i64)
        })
        .unwrap();
        for spec in [
            ObjectiveSpec::sum(SumScaling::new(rat(0), rat(1), rat(0))),
            ObjectiveSpec::max(MaxScaling::new(rat(1))),
        ] {
            assert_eq!(
                gamma(&t, &scaled, &spec).unwrap(),
                rho.clone() * gamma(&t, &m, &spec).unwrap()
            );
        }
    }
}
