//! Rationality number of preference matrices.
//!
//! A preference matrix records, for every pair of candidates, the proportion
//! of voters preferring one to the other. A set of voters with strict partial
//! orders is consistent with it when the strong-preference fraction never
//! exceeds `p_ij` and the weak-preference fraction never falls below it. The
//! rationality number is the smallest width (largest antichain) that
//! suffices for every voter.
//!
//! Modules:
//!
//! * [`matrix`]: exact matrices, classification, voting and unanimity graphs.
//! * [`poset`]: partial orders, width, minimum chain decompositions.
//! * [`profile`]: voter profiles and the consistency check.
//! * [`halfint`]: component products, colouring constructions, random
//!   k-partite instances.
//! * [`integral`]: tournaments, exact and greedy dicolouring, the
//!   [`rationality_number`] dispatcher.
//! * [`oracle`]: exhaustive reference implementations for testing.
//!
//! Candidates are 0-based in the API and 1-based in every file format.

pub mod error;
pub mod halfint;
pub mod integral;
pub mod matrix;
pub mod oracle;
pub mod poset;
pub mod profile;
pub mod rational;
pub mod rng;

pub use error::{Error, Result};
pub use halfint::{
    combine_component_profiles, components, greedy_coloring, random_lower_bound_instance,
    two_voter_construction, verify_triangle_property, ComponentPartition, ProperColoring,
    TriangleCheck, TriangleOutcome,
};
pub use integral::{
    dichromatic_number_exact, greedy_dicoloring, max_acyclic_subset, random_tournament,
    rationality_number, voter_from_dicoloring, Dicoloring, MaxAcyclic, Rationality, Tournament,
    DEFAULT_EXACT_LIMIT,
};
pub use matrix::{
    parse_matrix, MatrixClass, MatrixFormat, PreferenceMatrix, UnanimityGraph, VotingGraph,
};
pub use poset::{ChainDecomposition, PartialOrder, Width};
pub use profile::{antichain_profile, ConsistencyReport, Side, Violation, VoterProfile};
pub use rational::Rational;
