//! Prime vertex labelings for families of unicyclic graphs.
//!
//! - [`numth`]: gcd, primality, Bertrand-block primes, Pillai windows.
//! - [`graph`]: graph model, family constructors, unicyclic enumeration, JSON
//!   and DOT.
//! - [`labelings`]: the verifier and the constructive labelers.
//! - [`solver`]: backtracking search, brute-force counting, conjecture scan.
//! - [`cli`]: the `prime-weave` command line.

pub mod cli;
pub mod graph;
pub mod labelings;
pub mod numth;
pub mod solver;

pub use graph::{build, is_unicyclic, FamilySpec, Graph, VertexRole};
pub use labelings::{verify, Labeling, VerifyReport};
pub use solver::{solve, Budget, Outcome, SearchStats};
