//! Exhaustive ground truth at desk scale: enumeration of all labeled cluster
//! trees, exact optima, admissibility experiments against the generating-tree
//! set, seeded random instances, and the charging-argument diagnostics for
//! the recursive sparsest cut analysis.
//!
//! Enumeration inserts leaf `k` into each edge (and above the root) of every
//! tree on `k` leaves, the standard expansion behind the double-factorial
//! count `(2n−3)!!`; the digit encoding below makes the stream a plain
//! mixed-radix counter.

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::gentree::{is_generating, GeneratingCertificate, GentreeError};
use crate::matrix::SimilarityMatrix;
use crate::objective::{EvalError, ObjectiveKind, ObjectiveSpec};
use crate::scalar::Scalar;
use crate::scaling::SumScaling;
use crate::solver::RscTrace;
use crate::tree::{ClusterTree, Node, NodeId};

/// Enumeration refuses beyond this many leaves unless raised explicitly
/// (n = 10 is 34 459 425 trees, the intended ceiling).
pub const DEFAULT_ENUM_LIMIT: usize = 10;

/// Reports stop collecting minimizers past this many; uniform instances make
/// every tree optimal, so the cap guards memory, flagged via `truncated`.
pub const MINIMIZER_CAP: usize = 1_000_000;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("enumeration over {n} leaves exceeds the limit {limit}")]
    EnumerationLimitExceeded { n: usize, limit: usize },
    #[error("partition size threshold t={t} out of range 0..={max}")]
    PartitionIndexOutOfRange { t: usize, max: usize },
    #[error("tree has {tree} leaves but the matrix has {matrix} elements")]
    ElementCountMismatch { tree: usize, matrix: usize },
    #[error("instance {index} has no generating tree")]
    NoGeneratingTree { index: usize },
    #[error("coefficient precondition violated: {0}")]
    CoefficientPrecondition(&'static str),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Gentree(#[from] GentreeError),
}

/// Number of labeled cluster trees on `n` leaves, `(2n−3)!!`.
pub fn tree_count(n: usize) -> u128 {
    match n {
        0 => 0,
        1 | 2 => 1,
        _ => (3..=2 * n - 3).step_by(2).map(|k| k as u128).product(),
    }
}

/// Stream of every labeled cluster tree on `n` leaves, each exactly once in
/// a fixed deterministic order.
pub fn enumerate_trees(n: usize, limit: usize) -> Result<TreeEnumerator, OracleError> {
    if n > limit {
        return Err(OracleError::EnumerationLimitExceeded { n, limit });
    }
    Ok(TreeEnumerator {
        n,
        digits: vec![0; n.saturating_sub(2)],
        exhausted: n == 0,
    })
}

/// Iterator over all cluster trees on `n` leaves. Internally a mixed-radix
/// counter: digit `i` picks where leaf `i + 2` is inserted (one of the
/// `2i + 3` edges-or-root positions of the tree built so far).
#[derive(Debug, Clone)]
pub struct TreeEnumerator {
    n: usize,
    digits: Vec<usize>,
    exhausted: bool,
}

impl Iterator for TreeEnumerator {
    type Item = ClusterTree;

    fn next(&mut self) -> Option<ClusterTree> {
        if self.exhausted {
            return None;
        }
        let tree = build_from_digits(self.n, &self.digits);
        // increment the counter; digit i has radix 2i + 3
        let mut i = 0;
        loop {
            if i == self.digits.len() {
                self.exhausted = true;
                break;
            }
            self.digits[i] += 1;
            if self.digits[i] < 2 * i + 3 {
                break;
            }
            self.digits[i] = 0;
            i += 1;
        }
        Some(tree)
    }
}

/// Materialize the tree encoded by insertion digits; shared by enumeration
/// and uniform random sampling.
fn build_from_digits(n: usize, digits: &[usize]) -> ClusterTree {
    if n == 1 {
        return ClusterTree::single_leaf(0);
    }
    debug_assert_eq!(digits.len(), n - 2);
    let mut nodes = vec![Node::Leaf(0), Node::Leaf(1), Node::Internal(0, 1)];
    let mut parent: Vec<Option<NodeId>> = vec![Some(2), Some(2), None];
    let mut root: NodeId = 2;
    for (i, &position) in digits.iter().enumerate() {
        let element = i + 2;
        let non_root: Vec<NodeId> = (0..nodes.len()).filter(|&v| parent[v].is_some()).collect();
        let leaf = nodes.len();
        nodes.push(Node::Leaf(element));
        parent.push(None);
        let joint = nodes.len();
        if position == non_root.len() {
            nodes.push(Node::Internal(root, leaf));
            parent.push(None);
            parent[root] = Some(joint);
            parent[leaf] = Some(joint);
            root = joint;
        } else {
            let target = non_root[position];
            let p = parent[target].expect("non-root node");
            nodes.push(Node::Internal(target, leaf));
            parent.push(Some(p));
            let Node::Internal(l, r) = nodes[p] else {
                unreachable!("parents are internal")
            };
            nodes[p] = if l == target {
                Node::Internal(joint, r)
            } else {
                Node::Internal(l, joint)
            };
            parent[target] = Some(joint);
            parent[leaf] = Some(joint);
        }
    }
    ClusterTree::from_nodes(nodes, root).expect("insertion preserves validity")
}

/// Exact minimum of `Γ` over every cluster tree, with the full argmin set.
#[derive(Debug, Clone, PartialEq)]
pub struct OptReport<T> {
    pub opt_value: T,
    /// Minimizers in enumeration order, possibly capped (see `truncated`).
    pub minimizers: Vec<ClusterTree>,
    pub tree_count: u128,
    pub truncated: bool,
}

/// Brute-force optimum under one objective, enumerating within `limit`.
pub fn brute_force_opt<T: Scalar>(
    m: &SimilarityMatrix<T>,
    spec: &ObjectiveSpec<T>,
    limit: usize,
) -> Result<OptReport<T>, OracleError> {
    let mut reports = brute_force_opt_multi(m, std::slice::from_ref(spec), limit)?;
    Ok(reports.pop().expect("one spec in, one report out"))
}

/// Brute-force optima under several objectives in a single enumeration pass.
///
/// Scaling values are memoized per child-size pair and cross terms are
/// computed once per node per aggregation kind, so adding objectives to a
/// pass is nearly free. The evaluation agrees with [`gamma`] exactly (see
/// the equivalence test).
pub fn brute_force_opt_multi<T: Scalar>(
    m: &SimilarityMatrix<T>,
    specs: &[ObjectiveSpec<T>],
    limit: usize,
) -> Result<Vec<OptReport<T>>, OracleError> {
    let n = m.len();
    let evaluators = specs
        .iter()
        .map(|spec| SpecEvaluator::build(spec, n))
        .collect::<Result<Vec<_>, _>>()?;
    let mut best: Vec<Option<OptReport<T>>> = vec![None; specs.len()];
    let mut count: u128 = 0;
    let mut values = vec![T::zero(); specs.len()];
    for tree in enumerate_trees(n, limit)? {
        count += 1;
        eval_tree_multi(&tree, m, &evaluators, &mut values);
        for (slot, value) in values.iter().enumerate() {
            match &mut best[slot] {
                cur @ None => {
                    *cur = Some(OptReport {
                        opt_value: value.clone(),
                        minimizers: vec![tree.clone()],
                        tree_count: 0,
                        truncated: false,
                    });
                }
                Some(report) => {
                    if *value < report.opt_value {
                        report.opt_value = value.clone();
                        report.minimizers.clear();
                        report.minimizers.push(tree.clone());
                        report.truncated = false;
                    } else if *value == report.opt_value {
                        if report.minimizers.len() < MINIMIZER_CAP {
                            report.minimizers.push(tree.clone());
                        } else {
                            report.truncated = true;
                        }
                    }
                }
            }
        }
    }
    Ok(best
        .into_iter()
        .map(|r| {
            let mut report = r.expect("n >= 1 yields at least one tree");
            report.tree_count = count;
            report
        })
        .collect())
}

/// One objective prepared for repeated evaluation over an enumeration:
/// `g` pre-tabulated over all feasible child-size pairs.
struct SpecEvaluator<T> {
    kind: ObjectiveKind,
    /// `g(a, b)` at `[a-1][b-1]`, populated for `a + b <= n`.
    g_table: Vec<Vec<T>>,
}

impl<T: Scalar> SpecEvaluator<T> {
    fn build(spec: &ObjectiveSpec<T>, n: usize) -> Result<Self, OracleError> {
        let side = n.saturating_sub(1);
        let mut g_table = vec![vec![T::zero(); side]; side];
        for a in 1..n {
            for b in 1..=(n - a) {
                g_table[a - 1][b - 1] = spec.scaling.eval(a, b).map_err(EvalError::from)?;
            }
        }
        Ok(Self {
            kind: spec.kind,
            g_table,
        })
    }

    fn g(&self, a: usize, b: usize) -> &T {
        &self.g_table[a - 1][b - 1]
    }
}

fn eval_tree_multi<T: Scalar>(
    tree: &ClusterTree,
    m: &SimilarityMatrix<T>,
    evaluators: &[SpecEvaluator<T>],
    out: &mut [T],
) {
    let needs_sum = evaluators.iter().any(|e| e.kind == ObjectiveKind::Sum);
    let needs_max = evaluators.iter().any(|e| e.kind == ObjectiveKind::Max);
    for v in out.iter_mut() {
        *v = T::zero();
    }
    for id in tree.internal_ids() {
        let (l, r) = tree.children(id).expect("internal");
        let (left, right) = (tree.leafset(l), tree.leafset(r));
        let mut hsum = T::zero();
        let mut kmax: Option<T> = None;
        for &x in left {
            for &y in right {
                let val = m.get(x as usize, y as usize);
                if needs_sum {
                    hsum = hsum + val.clone();
                }
                if needs_max && kmax.as_ref().is_none_or(|k| val > k) {
                    kmax = Some(val.clone());
                }
            }
        }
        for (slot, eval) in evaluators.iter().enumerate() {
            let cross = match eval.kind {
                ObjectiveKind::Sum => hsum.clone(),
                ObjectiveKind::Max => kmax.clone().expect("children are nonempty"),
            };
            out[slot] = out[slot].clone() + cross * eval.g(left.len(), right.len()).clone();
        }
    }
}

/// Canonical identity of a tree: its sorted cluster family.
pub type TreeKey = Vec<Vec<u32>>;

/// Canonical keys of the brute-force minimizer set.
pub fn minimizer_key_set<T: Scalar>(
    m: &SimilarityMatrix<T>,
    spec: &ObjectiveSpec<T>,
    limit: usize,
) -> Result<(T, BTreeSet<TreeKey>), OracleError> {
    let report = brute_force_opt(m, spec, limit)?;
    let keys = report.minimizers.iter().map(ClusterTree::canonical_key).collect();
    Ok((report.opt_value, keys))
}

/// Canonical keys of every generating tree of `m`.
pub fn generating_key_set<T: Scalar>(
    m: &SimilarityMatrix<T>,
    limit: usize,
) -> Result<BTreeSet<TreeKey>, OracleError> {
    let mut keys = BTreeSet::new();
    for tree in enumerate_trees(m.len(), limit)? {
        if is_generating(&tree, m)?.is_some() {
            keys.insert(tree.canonical_key());
        }
    }
    Ok(keys)
}

/// Per-instance outcome of an admissibility experiment.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdmissibilityOutcome {
    pub index: usize,
    pub n: usize,
    pub minimizer_count: usize,
    pub generating_count: usize,
    pub sets_equal: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct AdmissibilityReport {
    pub outcomes: Vec<AdmissibilityOutcome>,
}

impl AdmissibilityReport {
    /// True when the minimizer set equalled the generating-tree set on every
    /// instance, i.e. no counterexample to admissibility was observed.
    pub fn all_equal(&self) -> bool {
        self.outcomes.iter().all(|o| o.sets_equal)
    }

    pub fn counterexamples(&self) -> impl Iterator<Item = &AdmissibilityOutcome> {
        self.outcomes.iter().filter(|o| !o.sets_equal)
    }
}

/// For each instance (which must have a generating tree), compare the
/// brute-force minimizer set with the generating-tree set, exactly.
pub fn admissibility_experiment<T: Scalar>(
    spec: &ObjectiveSpec<T>,
    instances: &[SimilarityMatrix<T>],
    limit: usize,
) -> Result<AdmissibilityReport, OracleError> {
    let mut reports = admissibility_experiment_multi(std::slice::from_ref(spec), instances, limit)?;
    Ok(reports.pop().expect("one spec in, one report out"))
}

/// [`admissibility_experiment`] for several objectives at once, sharing the
/// per-instance enumeration passes: one report per objective.
pub fn admissibility_experiment_multi<T: Scalar>(
    specs: &[ObjectiveSpec<T>],
    instances: &[SimilarityMatrix<T>],
    limit: usize,
) -> Result<Vec<AdmissibilityReport>, OracleError> {
    let mut reports = vec![AdmissibilityReport::default(); specs.len()];
    for (index, m) in instances.iter().enumerate() {
        if !crate::gentree::has_generating_tree(m) {
            return Err(OracleError::NoGeneratingTree { index });
        }
        let opt_reports = brute_force_opt_multi(m, specs, limit)?;
        let generating = generating_key_set(m, limit)?;
        for (report, opt) in reports.iter_mut().zip(opt_reports) {
            let minimizers: BTreeSet<TreeKey> = opt
                .minimizers
                .iter()
                .map(ClusterTree::canonical_key)
                .collect();
            report.outcomes.push(AdmissibilityOutcome {
                index,
                n: m.len(),
                minimizer_count: minimizers.len(),
                generating_count: generating.len(),
                sets_equal: minimizers == generating,
            });
        }
    }
    Ok(reports)
}

/// A seeded instance known to have a generating tree: a uniformly random
/// tree shape with weights nondecreasing from the root (root weight in
/// `0..=9`, each child adding `0..=4`), realized as `M(x, y) = h(lca(x, y))`.
pub fn random_generating_instance<T: Scalar>(
    n: usize,
    seed: u64,
) -> (SimilarityMatrix<T>, GeneratingCertificate<T>) {
    assert!(n >= 2, "an instance needs at least two elements");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let digits: Vec<usize> = (0..n - 2).map(|i| rng.random_range(0..2 * i + 3)).collect();
    let tree = build_from_digits(n, &digits);

    let mut weights: BTreeMap<NodeId, u64> = BTreeMap::new();
    let mut stack = vec![(tree.root(), None::<u64>)];
    while let Some((id, inherited)) = stack.pop() {
        if tree.is_leaf(id) {
            continue;
        }
        let h = match inherited {
            None => rng.random_range(0..=9),
            Some(parent) => parent + rng.random_range(0..=4),
        };
        weights.insert(id, h);
        let (l, r) = tree.children(id).expect("internal");
        stack.push((l, Some(h)));
        stack.push((r, Some(h)));
    }

    let matrix = SimilarityMatrix::from_fn(crate::matrix::ElementSet::indexed(n), |i, j| {
        let anc = tree.lca(i, j).expect("leaves");
        T::from_count(weights[&anc] as usize)
    })
    .expect("weights are nonnegative");
    let weights = weights
        .into_iter()
        .map(|(id, h)| (id, T::from_count(h as usize)))
        .collect();
    (matrix, GeneratingCertificate { tree, weights })
}

/// A seeded fully random matrix with small integer values in `0..=4`; with
/// no structure imposed, most such matrices (for n ≥ 4) violate the
/// generating-tree condition.
pub fn random_matrix<T: Scalar>(n: usize, seed: u64) -> SimilarityMatrix<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    SimilarityMatrix::from_fn(crate::matrix::ElementSet::indexed(n), |_, _| {
        T::from_count(rng.random_range(0..=4))
    })
    .expect("values are nonnegative")
}

/// The four-block construction: similarity 2 within each block, 1 between
/// the first pair of blocks and between the second, 0 across. It always has
/// a generating tree, and an objective violating strict superadditivity
/// cannot separate the generating shape from the transposed one.
pub fn four_block_matrix<T: Scalar>(
    a: usize,
    b: usize,
    c: usize,
    d: usize,
) -> SimilarityMatrix<T> {
    assert!(a >= 1 && b >= 1 && c >= 1 && d >= 1);
    let n = a + b + c + d;
    let block = move |i: usize| {
        if i < a {
            0
        } else if i < a + b {
            1
        } else if i < a + b + c {
            2
        } else {
            3
        }
    };
    SimilarityMatrix::from_fn(crate::matrix::ElementSet::indexed(n), |i, j| {
        let (bi, bj) = (block(i), block(j));
        if bi == bj {
            T::from_count(2)
        } else if (bi < 2) == (bj < 2) {
            T::one()
        } else {
            T::zero()
        }
    })
    .expect("values are nonnegative")
}

/// An instance refuting admissibility of `spec`: the minimizer set differs
/// from the generating-tree set.
#[derive(Debug, Clone, PartialEq)]
pub struct NonAdmissibilityWitness<T> {
    pub matrix: SimilarityMatrix<T>,
    /// Position in the search battery (0 is the four-block construction).
    pub instance_index: usize,
    pub minimizer_count: usize,
    pub generating_count: usize,
    /// A tree in the symmetric difference of the two sets.
    pub example: ClusterTree,
    /// Whether `example` is a non-generating minimizer (`true`) or a
    /// generating tree that fails to minimize (`false`).
    pub example_is_minimizer: bool,
}

/// Search a deterministic battery — the four-block construction followed by
/// seeded random generating instances with n cycling through 3..=6 — for an
/// instance on which `spec`'s minimizers are not exactly the generating
/// trees. Returns the first hit.
pub fn find_non_admissibility_witness<T: Scalar>(
    spec: &ObjectiveSpec<T>,
    seed: u64,
    max_instances: usize,
    limit: usize,
) -> Result<Option<NonAdmissibilityWitness<T>>, OracleError> {
    for index in 0..max_instances {
        let m: SimilarityMatrix<T> = if index == 0 {
            four_block_matrix(1, 1, 1, 1)
        } else {
            let n = 3 + (index - 1) % 4;
            random_generating_instance(n, seed.wrapping_add(index as u64)).0
        };
        let (_, minimizers) = minimizer_key_set(&m, spec, limit)?;
        let generating = generating_key_set(&m, limit)?;
        if minimizers == generating {
            continue;
        }
        let (target, example_is_minimizer) = minimizers
            .difference(&generating)
            .next()
            .map(|k| (k.clone(), true))
            .unwrap_or_else(|| {
                let k = generating
                    .difference(&minimizers)
                    .next()
                    .expect("sets differ");
                (k.clone(), false)
            });
        let example = enumerate_trees(m.len(), limit)?
            .find(|t| t.canonical_key() == target)
            .expect("key came from this enumeration");
        return Ok(Some(NonAdmissibilityWitness {
            instance_index: index,
            minimizer_count: minimizers.len(),
            generating_count: generating.len(),
            example,
            example_is_minimizer,
            matrix: m,
        }));
    }
    Ok(None)
}

/// The partition `OPT(t)` induced by an optimal tree: maximal clusters of
/// size at most `max(t, 1)`. At `t = 0` the paper's sum starts before any
/// cluster can qualify, so the singleton partition is used, which is what
/// the per-pair contribution argument requires.
pub fn opt_partition(t_star: &ClusterTree, t: usize) -> Result<Vec<Vec<u32>>, OracleError> {
    let n = t_star.n_elements();
    if t > n.saturating_sub(1) {
        return Err(OracleError::PartitionIndexOutOfRange { t, max: n - 1 });
    }
    let threshold = t.max(1);
    let mut blocks = Vec::new();
    let mut stack = vec![t_star.root()];
    while let Some(id) = stack.pop() {
        if t_star.leafset(id).len() <= threshold {
            blocks.push(t_star.leafset(id).to_vec());
        } else {
            let (l, r) = t_star.children(id).expect("larger than a leaf");
            stack.push(l);
            stack.push(r);
        }
    }
    blocks.sort();
    Ok(blocks)
}

/// Total similarity over pairs separated by the partition.
pub fn partition_cross_weight<T: Scalar>(
    m: &SimilarityMatrix<T>,
    partition: &[Vec<u32>],
) -> T {
    let mut block_of = vec![usize::MAX; m.len()];
    for (b, block) in partition.iter().enumerate() {
        for &e in block {
            block_of[e as usize] = b;
        }
    }
    let mut total = T::zero();
    for (i, j, v) in m.pairs() {
        if block_of[i] != block_of[j] {
            total = total + v.clone();
        }
    }
    total
}

/// The cross-partition weights `M(E_OPT(t))` for `t = 0..n`, plus the
/// partitions themselves. The weights are nonincreasing in `t` because the
/// partitions only coarsen.
#[derive(Debug, Clone, PartialEq)]
pub struct ChargingProfile<T> {
    pub partitions: Vec<Vec<Vec<u32>>>,
    pub cross_weights: Vec<T>,
}

impl<T: Scalar> ChargingProfile<T> {
    pub fn new(t_star: &ClusterTree, m: &SimilarityMatrix<T>) -> Result<Self, OracleError> {
        check_tree_matrix(t_star, m)?;
        let n = m.len();
        let mut partitions = Vec::with_capacity(n);
        let mut cross_weights = Vec::with_capacity(n);
        for t in 0..n {
            let partition = opt_partition(t_star, t)?;
            cross_weights.push(partition_cross_weight(m, &partition));
            partitions.push(partition);
        }
        Ok(Self {
            partitions,
            cross_weights,
        })
    }

    pub fn is_nonincreasing(&self) -> bool {
        self.cross_weights.windows(2).all(|w| w[0] >= w[1])
    }
}

/// The charging lower bound `Σ_{t=0}^{n−1} M(E_OPT(t)) · f(t)`, which is at
/// most `OPT` when `t_star` is an optimal tree and the coefficients satisfy
/// the strong condition.
pub fn charging_lower_bound<T: Scalar>(
    t_star: &ClusterTree,
    m: &SimilarityMatrix<T>,
    s: &SumScaling<T>,
) -> Result<T, OracleError> {
    check_strong(s)?;
    let profile = ChargingProfile::new(t_star, m)?;
    let mut total = T::zero();
    for (t, weight) in profile.cross_weights.iter().enumerate() {
        total = total + weight.clone() * s.f_step(t);
    }
    Ok(total)
}

/// The charge assigned to the recursive algorithm's clusters,
/// `Σ_{A: |A| ≥ 2} (s(A)/|A|) Σ_{t=⌊|A|/4⌋}^{⌊|A|/2⌋−1} M(E_OPT(t) ∩ A) · f(t)`,
/// which is at most twice the charging lower bound.
pub fn rsc_charge_sum<T: Scalar>(
    trace: &RscTrace<T>,
    t_star: &ClusterTree,
    m: &SimilarityMatrix<T>,
    s: &SumScaling<T>,
) -> Result<T, OracleError> {
    check_strong(s)?;
    check_tree_matrix(t_star, m)?;
    check_tree_matrix(&trace.tree, m)?;
    let n = m.len();
    // block assignment per threshold t, computed once
    let mut block_of: Vec<Vec<usize>> = Vec::with_capacity(n);
    for t in 0..n {
        let partition = opt_partition(t_star, t)?;
        let mut assign = vec![usize::MAX; n];
        for (b, block) in partition.iter().enumerate() {
            for &e in block {
                assign[e as usize] = b;
            }
        }
        block_of.push(assign);
    }
    let mut total = T::zero();
    for split in &trace.splits {
        let r = split.cluster.len();
        debug_assert!(r >= 2, "only clusters of size >= 2 are split");
        let mut window = T::zero();
        for (t, assign) in block_of.iter().enumerate().take(r / 2).skip(r / 4) {
            let mut weight = T::zero();
            for (a, &x) in split.cluster.iter().enumerate() {
                for &y in &split.cluster[a + 1..] {
                    if assign[x] != assign[y] {
                        weight = weight + m.get(x, y).clone();
                    }
                }
            }
            window = window + weight * s.f_step(t);
        }
        total = total + window * T::from_count(split.min_side) / T::from_count(r);
    }
    Ok(total)
}

fn check_strong<T: Scalar>(s: &SumScaling<T>) -> Result<(), OracleError> {
    if !s.strongly_admissible() {
        return Err(OracleError::CoefficientPrecondition(
            "charging requires lambda, mu >= 0 and lambda + 2mu + nu > 0",
        ));
    }
    Ok(())
}

fn check_tree_matrix<T: Scalar>(
    tree: &ClusterTree,
    m: &SimilarityMatrix<T>,
) -> Result<(), OracleError> {
    if tree.n_elements() != m.len() {
        return Err(OracleError::ElementCountMismatch {
            tree: tree.n_elements(),
            matrix: m.len(),
        });
    }
    Ok(())
}
