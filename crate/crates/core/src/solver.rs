//! Cut densities, sparsest-cut subroutines, and the recursive sparsest cut
//! algorithm.
//!
//! The exact subroutine enumerates every bipartition, so it is the φ = 1
//! oracle at desk scale; the hill-climbing heuristic is a reproducible
//! stand-in for an approximate subroutine whose φ is unknown and therefore
//! never claimed. Tie-breaking is lexicographic everywhere so that traces are
//! stable across runs.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::matrix::{MatrixError, SimilarityMatrix};
use crate::scalar::Scalar;
use crate::tree::{ClusterTree, Node, NodeId};

/// Exhaustive search enumerates `2^(n-1) − 1` cuts; past this size it
/// refuses unless a larger limit is passed explicitly.
pub const DEFAULT_MAX_EXACT_N: usize = 20;

/// Restarts used by the hill-climbing subroutine unless configured.
pub const DEFAULT_RESTARTS: usize = 32;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum SolverError {
    #[error("cut side must be a proper nonempty subset")]
    ImproperSide,
    #[error("duplicate index {0} in cut side")]
    DuplicateIndex(usize),
    #[error("index {index} out of range for {len} elements")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("need at least two elements to cut, got {0}")]
    TooFewElements(usize),
    #[error("exact search over {n} elements exceeds the limit {limit}")]
    ExactLimitExceeded { n: usize, limit: usize },
    #[error(transparent)]
    Matrix(#[from] MatrixError),
}

/// Which subroutine produced a cut.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CutMethod {
    Exact,
    LocalSearch,
}

/// A bipartition of the element set, reported as the side containing element
/// 0 (the lexicographically first side), with its exact density.
#[derive(Debug, Clone, PartialEq)]
pub struct CutResult<T> {
    pub side: Vec<usize>,
    pub density: T,
    pub method: CutMethod,
    /// Approximation factor guaranteed for this cut: 1 for the exhaustive
    /// subroutine, absent for the heuristic.
    pub phi_claim: Option<T>,
}

/// Cut subroutine selection for [`rsc`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CutStrategy {
    Exact { max_n: usize },
    LocalSearch { seed: u64, restarts: usize },
}

impl Default for CutStrategy {
    fn default() -> Self {
        CutStrategy::Exact {
            max_n: DEFAULT_MAX_EXACT_N,
        }
    }
}

/// One split performed by the recursive algorithm: the cluster it split (as
/// global element indices), the side chosen, the smaller side's size, and
/// the cut's density within the cluster.
#[derive(Debug, Clone, PartialEq)]
pub struct SplitRecord<T> {
    pub cluster: Vec<usize>,
    pub side: Vec<usize>,
    pub min_side: usize,
    pub density: T,
}

/// Output of the recursive sparsest cut algorithm: the cluster tree plus one
/// record per split, in recursion (pre-)order.
#[derive(Debug, Clone, PartialEq)]
pub struct RscTrace<T> {
    pub tree: ClusterTree,
    pub splits: Vec<SplitRecord<T>>,
}

/// Density of the bipartition `{side, complement}`:
/// total cross similarity divided by the product of the side sizes.
pub fn density<T: Scalar>(m: &SimilarityMatrix<T>, side: &[usize]) -> Result<T, SolverError> {
    let n = m.len();
    let mut in_side = vec![false; n];
    for &i in side {
        if i >= n {
            return Err(SolverError::IndexOutOfRange { index: i, len: n });
        }
        if in_side[i] {
            return Err(SolverError::DuplicateIndex(i));
        }
        in_side[i] = true;
    }
    let k = side.len();
    if k == 0 || k == n {
        return Err(SolverError::ImproperSide);
    }
    let mut cross = T::zero();
    for (i, j, v) in m.pairs() {
        if in_side[i] != in_side[j] {
            cross = cross + v.clone();
        }
    }
    Ok(cross / (T::from_count(k) * T::from_count(n - k)))
}

/// Minimum-density cut by exhaustive enumeration of all bipartitions, using
/// the default size limit. Ties resolve to the lexicographically smallest
/// side containing element 0.
pub fn exact_sparsest_cut<T: Scalar>(m: &SimilarityMatrix<T>) -> Result<CutResult<T>, SolverError> {
    exact_sparsest_cut_limited(m, DEFAULT_MAX_EXACT_N)
}

/// [`exact_sparsest_cut`] with an explicit size limit.
pub fn exact_sparsest_cut_limited<T: Scalar>(
    m: &SimilarityMatrix<T>,
    max_n: usize,
) -> Result<CutResult<T>, SolverError> {
    let n = m.len();
    if n < 2 {
        return Err(SolverError::TooFewElements(n));
    }
    // the subset mask lives in a u64, so 63 non-anchor elements is the roof
    if n > max_n.min(63) {
        return Err(SolverError::ExactLimitExceeded {
            n,
            limit: max_n.min(63),
        });
    }
    // Subsets containing element 0 cover each bipartition exactly once.
    let mut best: Option<(T, Vec<usize>)> = None;
    let full = (1u64 << (n - 1)) - 1;
    for mask in 0..=full {
        if mask == full {
            continue; // complement would be empty
        }
        let mut side = Vec::with_capacity(n);
        side.push(0);
        for i in 1..n {
            if mask & (1 << (i - 1)) != 0 {
                side.push(i);
            }
        }
        let d = density(m, &side)?;
        let replace = match &best {
            None => true,
            Some((bd, bs)) => d < *bd || (d == *bd && side < *bs),
        };
        if replace {
            best = Some((d, side));
        }
    }
    let (density, side) = best.expect("n >= 2 yields at least one cut");
    Ok(CutResult {
        side,
        density,
        method: CutMethod::Exact,
        phi_claim: Some(T::one()),
    })
}

/// Hill climbing on density with single-element moves and first-improvement
/// sweeps, restarted from seeded random bipartitions. The result's density is
/// an upper bound on the optimum; no approximation factor is claimed.
pub fn local_search_cut<T: Scalar>(
    m: &SimilarityMatrix<T>,
    seed: u64,
    restarts: usize,
) -> Result<CutResult<T>, SolverError> {
    let n = m.len();
    if n < 2 {
        return Err(SolverError::TooFewElements(n));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<(T, Vec<usize>)> = None;
    for _ in 0..restarts.max(1) {
        let mut in_side = loop {
            let assign: Vec<bool> = (0..n).map(|_| rng.random_bool(0.5)).collect();
            let k = assign.iter().filter(|&&b| b).count();
            if k != 0 && k != n {
                break assign;
            }
        };
        let mut current = density_of_assignment(m, &in_side);
        loop {
            let mut improved = false;
            for e in 0..n {
                let side_size = in_side.iter().filter(|&&b| b).count();
                // keep both sides nonempty
                if (in_side[e] && side_size == 1) || (!in_side[e] && side_size == n - 1) {
                    continue;
                }
                in_side[e] = !in_side[e];
                let moved = density_of_assignment(m, &in_side);
                if moved < current {
                    current = moved;
                    improved = true;
                } else {
                    in_side[e] = !in_side[e];
                }
            }
            if !improved {
                break;
            }
        }
        let side = normalize_side(&in_side);
        let replace = match &best {
            None => true,
            Some((bd, bs)) => current < *bd || (current == *bd && side < *bs),
        };
        if replace {
            best = Some((current, side));
        }
    }
    let (density, side) = best.expect("at least one restart");
    Ok(CutResult {
        side,
        density,
        method: CutMethod::LocalSearch,
        phi_claim: None,
    })
}

fn density_of_assignment<T: Scalar>(m: &SimilarityMatrix<T>, in_side: &[bool]) -> T {
    let n = m.len();
    let k = in_side.iter().filter(|&&b| b).count();
    debug_assert!(k > 0 && k < n);
    let mut cross = T::zero();
    for (i, j, v) in m.pairs() {
        if in_side[i] != in_side[j] {
            cross = cross + v.clone();
        }
    }
    cross / (T::from_count(k) * T::from_count(n - k))
}

fn normalize_side(in_side: &[bool]) -> Vec<usize> {
    let zero_side = in_side[0];
    (0..in_side.len()).filter(|&i| in_side[i] == zero_side).collect()
}

impl CutStrategy {
    fn run<T: Scalar>(
        &self,
        m: &SimilarityMatrix<T>,
        cluster: &[usize],
    ) -> Result<CutResult<T>, SolverError> {
        match self {
            CutStrategy::Exact { max_n } => exact_sparsest_cut_limited(m, *max_n),
            CutStrategy::LocalSearch { seed, restarts } => {
                local_search_cut(m, mix_seed(*seed, cluster), *restarts)
            }
        }
    }
}

// Per-cluster seed derivation: stable under recursion order and across runs.
fn mix_seed(seed: u64, cluster: &[usize]) -> u64 {
    let mut s = seed ^ 0x9E37_79B9_7F4A_7C15;
    for &i in cluster {
        s = s
            .wrapping_mul(0x100_0000_01B3)
            .wrapping_add(i as u64 + 1);
    }
    s
}

/// Recursive sparsest cut: split with the chosen subroutine, recurse on the
/// two principal submatrices, and join the subtrees under a fresh root. A
/// single element yields the single-leaf tree and an empty trace.
pub fn rsc<T: Scalar>(
    m: &SimilarityMatrix<T>,
    strategy: &CutStrategy,
) -> Result<RscTrace<T>, SolverError> {
    let n = m.len();
    if n == 0 {
        return Err(SolverError::TooFewElements(0));
    }
    let mut nodes = Vec::new();
    let mut splits = Vec::new();
    let global: Vec<usize> = (0..n).collect();
    let root = rsc_rec(m, &global, strategy, &mut nodes, &mut splits)?;
    let tree = ClusterTree::from_nodes(nodes, root).expect("recursion builds a valid tree");
    Ok(RscTrace { tree, splits })
}

fn rsc_rec<T: Scalar>(
    m: &SimilarityMatrix<T>,
    global: &[usize],
    strategy: &CutStrategy,
    nodes: &mut Vec<Node>,
    splits: &mut Vec<SplitRecord<T>>,
) -> Result<NodeId, SolverError> {
    if global.len() == 1 {
        nodes.push(Node::Leaf(global[0]));
        return Ok(nodes.len() - 1);
    }
    let cut = strategy.run(m, global)?;
    let side_global: Vec<usize> = cut.side.iter().map(|&i| global[i]).collect();
    let rest_local: Vec<usize> = (0..m.len()).filter(|i| !cut.side.contains(i)).collect();
    let rest_global: Vec<usize> = rest_local.iter().map(|&i| global[i]).collect();
    splits.push(SplitRecord {
        cluster: global.to_vec(),
        side: side_global.clone(),
        min_side: cut.side.len().min(rest_local.len()),
        density: cut.density,
    });
    let m_side = m.restrict(&cut.side)?;
    let m_rest = m.restrict(&rest_local)?;
    let left = rsc_rec(&m_side, &side_global, strategy, nodes, splits)?;
    let right = rsc_rec(&m_rest, &rest_global, strategy, nodes, splits)?;
    nodes.push(Node::Internal(left, right));
    Ok(nodes.len() - 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rat;
    use crate::tree::NestedSplit;

    fn rat(n: i64) -> Rat {
        Rat::from_ratio(n, 1)
    }

    /// n = 4, two blocks {0,1} and {2,3}: intra 2, inter 1.
    fn block4() -> SimilarityMatrix<Rat> {
        SimilarityMatrix::from_fn(crate::ElementSet::indexed(4), |i, j| {
            if (i < 2) == (j < 2) {
                rat(2)
            } else {
                rat(1)
            }
        })
        .unwrap()
    }

    #[test]
    fn density_examples() {
        let uniform = SimilarityMatrix::uniform(5, rat(1));
        assert_eq!(density(&uniform, &[0, 3]).unwrap(), rat(1));
        assert_eq!(density(&uniform, &[2]).unwrap(), rat(1));

        let b = block4();
        assert_eq!(density(&b, &[0, 1]).unwrap(), rat(1));
        assert_eq!(density(&b, &[0]).unwrap(), Rat::from_ratio(4, 3));
        assert_eq!(density(&b, &[0, 2]).unwrap(), Rat::from_ratio(3, 2));

        assert_eq!(density(&b, &[]).unwrap_err(), SolverError::ImproperSide);
        assert_eq!(
            density(&b, &[0, 1, 2, 3]).unwrap_err(),
            SolverError::ImproperSide
        );
    }

    #[test]
    fn exact_cut_on_blocks() {
        // exhaustive over 7 bipartitions: block cut wins at density 1
        let cut = exact_sparsest_cut(&block4()).unwrap();
        assert_eq!(cut.side, vec![0, 1]);
        assert_eq!(cut.density, rat(1));
        assert_eq!(cut.phi_claim, Some(rat(1)));
    }

    #[test]
    fn exact_cut_tie_break_is_lexicographic() {
        // uniform: every cut has density 1; {0} is the lexicographically
        // smallest side containing element 0
        let cut = exact_sparsest_cut(&SimilarityMatrix::uniform(5, rat(1))).unwrap();
        assert_eq!(cut.side, vec![0]);
        assert_eq!(cut.density, rat(1));
    }

    #[test]
    fn exact_cut_zero_matrix_and_limits() {
        let zero = SimilarityMatrix::uniform(4, rat(0));
        assert_eq!(exact_sparsest_cut(&zero).unwrap().density, rat(0));

        let m = SimilarityMatrix::uniform(5, rat(1));
        assert!(matches!(
            exact_sparsest_cut_limited(&m, 4),
            Err(SolverError::ExactLimitExceeded { n: 5, limit: 4 })
        ));
        let one = SimilarityMatrix::uniform(1, rat(1));
        assert!(matches!(
            exact_sparsest_cut(&one),
            Err(SolverError::TooFewElements(1))
        ));
    }

    #[test]
    fn local_search_reaches_block_optimum() {
        for seed in [0, 1, 42] {
            let cut = local_search_cut(&block4(), seed, DEFAULT_RESTARTS).unwrap();
            assert_eq!(cut.density, rat(1));
            assert_eq!(cut.phi_claim, None);
        }
        let uniform = SimilarityMatrix::uniform(4, rat(1));
        assert_eq!(local_search_cut(&uniform, 7, 8).unwrap().density, rat(1));
    }

    #[test]
    fn local_search_never_beats_exact() {
        for seed in 0..40u64 {
            let n = 3 + (seed as usize) % 8;
            let m = SimilarityMatrix::from_fn(crate::ElementSet::indexed(n), |i, j| {
                rat(((i * 31 + j * 17 + seed as usize) % 7) as i64)
            })
            .unwrap();
            let exact = exact_sparsest_cut(&m).unwrap();
            let local = local_search_cut(&m, seed, 8).unwrap();
            assert!(local.density >= exact.density, "seed {seed}");
        }
    }

    #[test]
    fn local_search_is_deterministic() {
        let m = block4();
        let a = local_search_cut(&m, 123, 4).unwrap();
        let b = local_search_cut(&m, 123, 4).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn rsc_on_blocks() {
        let trace = rsc(&block4(), &CutStrategy::default()).unwrap();
        let expected = ClusterTree::from_nested(&NestedSplit::split(
            NestedSplit::split(NestedSplit::Leaf(0), NestedSplit::Leaf(1)),
            NestedSplit::split(NestedSplit::Leaf(2), NestedSplit::Leaf(3)),
        ))
        .unwrap();
        assert_eq!(trace.tree, expected);
        assert_eq!(trace.splits.len(), 3);
        assert_eq!(trace.splits[0].cluster, vec![0, 1, 2, 3]);
        assert_eq!(trace.splits[0].side, vec![0, 1]);
        assert_eq!(trace.splits[0].min_side, 2);
        assert_eq!(trace.splits[0].density, rat(1));
    }

    #[test]
    fn rsc_base_cases() {
        let single = SimilarityMatrix::uniform(1, rat(1));
        let trace = rsc(&single, &CutStrategy::default()).unwrap();
        assert_eq!(trace.tree.n_elements(), 1);
        assert!(trace.splits.is_empty());

        let pair = SimilarityMatrix::uniform(2, rat(5));
        let trace = rsc(&pair, &CutStrategy::default()).unwrap();
        assert_eq!(trace.tree.internal_count(), 1);
        assert_eq!(trace.splits.len(), 1);
    }

    #[test]
    fn rsc_records_global_indices() {
        // splits deep in the recursion must still name global elements
        let m = SimilarityMatrix::from_fn(crate::ElementSet::indexed(6), |i, j| {
            if (i < 3) == (j < 3) {
                rat(4)
            } else {
                rat(1)
            }
        })
        .unwrap();
        let trace = rsc(&m, &CutStrategy::default()).unwrap();
        assert_eq!(trace.splits[0].side, vec![0, 1, 2]);
        for split in &trace.splits {
            for &e in &split.side {
                assert!(split.cluster.contains(&e));
            }
        }
        // every cluster of size >= 2 in the tree appears in the trace
        assert_eq!(trace.splits.len(), trace.tree.internal_count());
    }

    #[test]
    fn rsc_density_scale_equivariance() {
        let m = block4();
        let scaled = SimilarityMatrix::from_fn(crate::ElementSet::indexed(4), |i, j| {
            Rat::from_ratio(5, 3) * m.get(i, j).clone()
        })
        .unwrap();
        let a = exact_sparsest_cut(&m).unwrap();
        let b = exact_sparsest_cut(&scaled).unwrap();
        assert_eq!(a.side, b.side);
        assert_eq!(b.density, Rat::from_ratio(5, 3) * a.density);
    }
}
