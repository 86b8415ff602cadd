//! Cross-module property tests: structural invariants under random trees,
//! matrices, and coefficients.

use std::collections::BTreeSet;

use proptest::prelude::*;

use admiss_hc_core::gentree::{construct_generating_tree, has_generating_tree, is_generating};
use admiss_hc_core::objective::{gamma, ObjectiveKind};
use admiss_hc_core::oracle::random_generating_instance;
use admiss_hc_core::scaling::{PolyScaling, Scaling};
use admiss_hc_core::solver::{density, rsc, CutStrategy};
use admiss_hc_core::tree::NestedSplit;
use admiss_hc_core::{
    ClusterTree, ElementSet, MaxScaling, ObjectiveSpec, Rat, RatMatrix, Scalar, SimilarityMatrix,
    SumScaling,
};

fn rat(n: i64) -> Rat {
    Rat::from_ratio(n, 1)
}

/// Random recursive bipartition of `0..n`.
fn arb_nested(n: usize) -> impl Strategy<Value = NestedSplit> {
    fn split(elements: Vec<usize>) -> BoxedStrategy<NestedSplit> {
        if elements.len() == 1 {
            Just(NestedSplit::Leaf(elements[0])).boxed()
        } else {
            let len = elements.len();
            // choose a proper subset mask for the left side
            (1u32..(1 << len) - 1)
                .prop_flat_map(move |mask| {
                    let left: Vec<usize> = (0..len)
                        .filter(|i| mask & (1 << i) != 0)
                        .map(|i| elements[i])
                        .collect();
                    let right: Vec<usize> = (0..len)
                        .filter(|i| mask & (1 << i) == 0)
                        .map(|i| elements[i])
                        .collect();
                    (split(left), split(right))
                        .prop_map(|(l, r)| NestedSplit::split(l, r))
                })
                .boxed()
        }
    }
    split((0..n).collect())
}

fn arb_tree(max_n: usize) -> impl Strategy<Value = ClusterTree> {
    (2..=max_n).prop_flat_map(|n| {
        arb_nested(n).prop_map(|s| ClusterTree::from_nested(&s).expect("valid partition"))
    })
}

/// Random similarity matrix with small rational entries.
fn arb_matrix(max_n: usize) -> impl Strategy<Value = RatMatrix> {
    (2..=max_n).prop_flat_map(|n| {
        proptest::collection::vec((0i64..=6, 1i64..=3), n * (n - 1) / 2).prop_map(move |cells| {
            let mut iter = cells.into_iter();
            SimilarityMatrix::from_fn(ElementSet::indexed(n), |_, _| {
                let (p, q) = iter.next().expect("enough cells");
                Rat::from_ratio(p, q)
            })
            .expect("nonnegative")
        })
    })
}

fn arb_rat(range: std::ops::RangeInclusive<i64>) -> impl Strategy<Value = Rat> {
    (range, 1i64..=4).prop_map(|(p, q)| Rat::from_ratio(p, q))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn constructed_trees_satisfy_structural_invariants(tree in arb_tree(9)) {
        let n = tree.n_elements();
        prop_assert_eq!(tree.internal_count(), n - 1);
        let root_set: Vec<u32> = tree.leafset(tree.root()).to_vec();
        prop_assert_eq!(root_set, (0..n as u32).collect::<Vec<_>>());
        // every internal node's children partition its leaf set
        for id in tree.internal_ids() {
            let (l, r) = tree.children(id).expect("internal");
            prop_assert_eq!(
                tree.leafset(l).len() + tree.leafset(r).len(),
                tree.leafset(id).len()
            );
        }
    }

    #[test]
    fn lca_is_symmetric(tree in arb_tree(9), pick in any::<(u32, u32)>()) {
        let n = tree.n_elements() as u32;
        let x = (pick.0 % n) as usize;
        let y = (pick.1 % n) as usize;
        if x != y {
            prop_assert_eq!(tree.lca(x, y).unwrap(), tree.lca(y, x).unwrap());
        }
    }

    #[test]
    fn restrict_composes(m in arb_matrix(8), masks in any::<(u32, u32)>()) {
        let n = m.len();
        let outer: Vec<usize> = (0..n).filter(|i| masks.0 & (1 << i) != 0).collect();
        if outer.is_empty() {
            return Ok(());
        }
        let inner_local: Vec<usize> =
            (0..outer.len()).filter(|i| masks.1 & (1 << i) != 0).collect();
        if inner_local.is_empty() {
            return Ok(());
        }
        let inner_global: Vec<usize> = inner_local.iter().map(|&i| outer[i]).collect();
        let two_step = m.restrict(&outer).unwrap().restrict(&inner_local).unwrap();
        let direct = m.restrict(&inner_global).unwrap();
        prop_assert_eq!(two_step, direct);
    }

    #[test]
    fn sum_and_poly_coordinates_agree(
        lambda in arb_rat(-4..=4),
        mu in arb_rat(-4..=4),
        nu in arb_rat(-4..=4),
        a in 0usize..=100,
        b in 0usize..=100,
    ) {
        let sum = SumScaling::new(lambda.clone(), mu.clone(), nu.clone());
        let poly = PolyScaling::new(
            lambda.clone(),
            rat(0) - lambda,
            rat(2) * mu.clone(),
            rat(0) - mu,
            nu,
        );
        prop_assert_eq!(sum.eval(a, b), poly.eval(a, b));
        prop_assert_eq!(poly.canonicalize(), Some(sum));
    }

    #[test]
    fn generating_property_is_hereditary(seed in 0u64..500, mask in any::<u32>()) {
        let n = 3 + (seed as usize) % 5;
        let (m, _) = random_generating_instance::<Rat>(n, seed);
        let subset: Vec<usize> = (0..n).filter(|i| mask & (1 << i) != 0).collect();
        if subset.is_empty() {
            return Ok(());
        }
        let sub = m.restrict(&subset).unwrap();
        prop_assert!(has_generating_tree(&sub));
    }

    #[test]
    fn construction_output_has_forced_weights(seed in 0u64..500) {
        let n = 2 + (seed as usize) % 6;
        let (m, _) = random_generating_instance::<Rat>(n, seed);
        let cert = construct_generating_tree(&m).expect("instance generates");
        let forced = is_generating(&cert.tree, &m).unwrap().expect("tree generates");
        prop_assert_eq!(forced, cert.weights);
    }

    #[test]
    fn rsc_splits_are_densest_available(m in arb_matrix(7)) {
        let trace = rsc(&m, &CutStrategy::default()).unwrap();
        prop_assert_eq!(trace.tree.n_elements(), m.len());
        for split in &trace.splits {
            let sub = m.restrict(&split.cluster).unwrap();
            let k = sub.len();
            // re-enumerate every bipartition of the cluster
            for mask in 0..(1u32 << (k - 1)) {
                let side: Vec<usize> = std::iter::once(0)
                    .chain((1..k).filter(|i| mask & (1 << (i - 1)) != 0))
                    .collect();
                if side.len() == k {
                    continue;
                }
                let d = density(&sub, &side).unwrap();
                prop_assert!(
                    split.density <= d,
                    "recorded split density {} beaten by {}",
                    split.density,
                    d
                );
            }
        }
    }

    #[test]
    fn gamma_agrees_across_scalar_types(m in arb_matrix(6), tree_seed in any::<u32>()) {
        // the same formulas instantiated at f64 track the exact values
        let n = m.len();
        let float = SimilarityMatrix::<f64>::from_fn(ElementSet::indexed(n), |i, j| {
            let v = m.get(i, j);
            v.numer().to_string().parse::<f64>().unwrap()
                / v.denom().to_string().parse::<f64>().unwrap()
        })
        .unwrap();
        let nested = random_nested(n, tree_seed);
        let tree = ClusterTree::from_nested(&nested).unwrap();
        for kind in [ObjectiveKind::Sum, ObjectiveKind::Max] {
            let exact_spec = ObjectiveSpec {
                kind,
                scaling: Scaling::from(SumScaling::new(rat(1), rat(2), rat(-1))),
            };
            let float_spec = ObjectiveSpec {
                kind,
                scaling: Scaling::from(SumScaling::new(1.0f64, 2.0, -1.0)),
            };
            let exact = gamma(&tree, &m, &exact_spec).unwrap();
            let approx = gamma(&tree, &float, &float_spec).unwrap();
            let exact_f =
                exact.numer().to_string().parse::<f64>().unwrap()
                    / exact.denom().to_string().parse::<f64>().unwrap();
            prop_assert!((exact_f - approx).abs() <= 1e-6 * (1.0 + exact_f.abs()));
        }
    }

    #[test]
    fn max_type_table_matches_product_family(lambda in arb_rat(1..=5)) {
        // a table holding lambda*ab values behaves exactly like the family
        let size = 6usize;
        let table: Vec<Vec<Rat>> = (1..=size)
            .map(|a| (1..=size).map(|b| lambda.clone() * Rat::from_count(a * b)).collect())
            .collect();
        let table_scaling = Scaling::from(
            admiss_hc_core::TableScaling::new(table).expect("symmetric"),
        );
        let family = MaxScaling::new(lambda);
        for a in 1..=size {
            for b in 1..=size {
                prop_assert_eq!(table_scaling.eval(a, b).unwrap(), family.eval(a, b));
            }
        }
    }
}

/// Deterministic pseudo-random nested split from a seed (plain LCG walk).
fn random_nested(n: usize, seed: u32) -> NestedSplit {
    fn build(elements: &[usize], state: &mut u64) -> NestedSplit {
        if elements.len() == 1 {
            return NestedSplit::Leaf(elements[0]);
        }
        *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mask = (*state >> 16) as usize;
        let cut = 1 + mask % (elements.len() - 1);
        let (l, r) = elements.split_at(cut);
        NestedSplit::split(build(l, state), build(r, state))
    }
    let mut state = seed as u64 + 1;
    build(&(0..n).collect::<Vec<_>>(), &mut state)
}

#[test]
fn monotone_growth_floor_full_sweep() {
    // g(a+1, b) - g(a, b) >= lambda + 2 mu + nu over the whole window
    for (l, m, v) in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, -2)] {
        let s = SumScaling::new(rat(l), rat(m), rat(v));
        let floor = s.lambda.clone() + rat(2) * s.mu.clone() + s.nu.clone();
        for a in 0..=100usize {
            for b in 0..=100usize {
                assert!(
                    s.eval(a + 1, b) - s.eval(a, b) >= floor,
                    "floor violated at ({a}, {b}) for ({l},{m},{v})"
                );
            }
        }
    }
}

#[test]
fn minimizer_sets_are_canonical() {
    // equal trees (up to child swaps) never appear twice in a minimizer set
    let (m, _) = random_generating_instance::<Rat>(5, 77);
    let report = admiss_hc_core::oracle::brute_force_opt(
        &m,
        &ObjectiveSpec::dasgupta(),
        10,
    )
    .unwrap();
    let keys: BTreeSet<_> = report.minimizers.iter().map(ClusterTree::canonical_key).collect();
    assert_eq!(keys.len(), report.minimizers.len());
}

#[test]
fn enumeration_count_reaches_nine_leaves() {
    assert_eq!(
        admiss_hc_core::oracle::enumerate_trees(9, 10).unwrap().count() as u128,
        2_027_025
    );
    assert_eq!(admiss_hc_core::oracle::tree_count(9), 2_027_025);
}
