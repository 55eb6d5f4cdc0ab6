//! Pattern-occurrence statistics over 132-avoiding permutations.
//!
//! The crate counts copies of a pattern `q` summed over all 132-avoiding
//! permutations of length `n` (written `S_{n,132}(q)`), encodes avoiders as
//! binary plane trees, implements the subtree-swapping bijections that
//! explain equalities such as `S_{n,132}(213) = S_{n,132}(231)`, and expands
//! the associated generating functions with exact rational coefficients.
//!
//! Brute-force enumeration in [`avoiders`] is the reference for everything
//! else.

pub mod avoiders;
pub mod bijection;
pub mod equiv;
pub mod error;
pub mod genfunc;
pub mod numbers;
pub mod perm;
pub mod series;
pub mod tree;

pub use avoiders::{enumerate_avoiders, signature, total_occurrences, AvoiderStream, Signature};
pub use error::{Error, Result};
pub use numbers::{binomial, catalan};
pub use perm::{Occurrence, PatternMatcher, Permutation};
pub use tree::{perm_to_tree, tree_to_perm, BinaryPlaneTree, EntryLabeling};
pub use bijection::{apply_f, apply_f_inverse, make_colored, verify_bijection, BijectionReport, CaseTag, ColoredTree, Decomposition, GeneralBijection, Guard, PatternPair, Side};
pub use equiv::{classify_patterns, explain_pair, theorem_pairs, EquivClass, Explanation, PairExplanation};
pub use genfunc::{a_closed, SeriesName};
pub use series::{PowerSeries, SeriesExpr};
