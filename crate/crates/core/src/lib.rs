//! Hierarchical clustering with admissible objective functions.
//!
//! This crate evaluates sum-type and max-type cluster-tree objectives over
//! exact similarity matrices, decides admissibility of polynomial scaling
//! functions, constructs and verifies generating trees, runs the recursive
//! sparsest cut algorithm, and cross-checks everything against an exhaustive
//! brute-force oracle over all cluster trees at desk scale.
//!
//! Numeric routines are generic over [`Scalar`]; the canonical instantiation
//! is [`Rat`] (arbitrary-precision rationals), since the interesting
//! statements — forced generating-tree weights, exact optima, clique
//! constancy — are equalities that floating point cannot witness.
//!
//! ```
//! use admiss_hc_core::{gentree, oracle, solver, objective, RatMatrix, RatObjective};
//!
//! // a matrix generated by a tree: {a,b} tight at 5, c joins at 2, d at 1
//! let m: RatMatrix = admiss_hc_core::formats::matrix_from_tsv(
//!     "a\tb\t5\na\tc\t2\nb\tc\t2\na\td\t1\nb\td\t1\nc\td\t1\n",
//! )
//! .unwrap();
//! let cert = gentree::construct_generating_tree(&m).expect("matrix is tree-like");
//! assert_eq!(gentree::verify_certificate(&cert, &m), Ok(true));
//!
//! // under an admissible objective the exact optimum is that same tree,
//! // and recursive sparsest cut recovers it
//! let spec = RatObjective::dasgupta();
//! let opt = oracle::brute_force_opt(&m, &spec, 10).unwrap();
//! assert_eq!(opt.minimizers, vec![cert.tree.clone()]);
//! let trace = solver::rsc(&m, &solver::CutStrategy::default()).unwrap();
//! assert_eq!(
//!     objective::gamma(&trace.tree, &m, &spec).unwrap(),
//!     opt.opt_value
//! );
//! ```

pub mod bench;
pub mod formats;
pub mod gentree;
pub mod matrix;
pub mod newick;
pub mod objective;
pub mod oracle;
pub mod scalar;
pub mod scaling;
pub mod solver;
pub mod tree;

pub use matrix::{ElementSet, MatrixError, SimilarityMatrix};
pub use objective::{ObjectiveKind, ObjectiveSpec};
pub use scalar::{Rat, Scalar};
pub use scaling::{MaxScaling, PolyScaling, Scaling, SumScaling, TableScaling};
pub use tree::{ClusterTree, NestedSplit, Node, NodeId, TreeError};

/// Similarity matrix over exact rationals, the canonical instantiation.
pub type RatMatrix = SimilarityMatrix<Rat>;

/// Objective specification over exact rationals.
pub type RatObjective = ObjectiveSpec<Rat>;
