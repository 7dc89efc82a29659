//! Branch-and-bound with dynamic symmetry handling.
//!
//! Symmetries of a bounded linear program are handled by propagating
//! lexicographic constraints `σ(x) ⪰ σ(γ(x))` whose variable order `σ` is
//! chosen per node ([`prehandle`]). Three propagators work on that order:
//! [`lexred`] for single symmetries, [`orbitope`] for full column-symmetry
//! groups of a matrix, and [`orbital`] for orbits of certified subgroups.
//! [`oracle`] holds brute-force references used by the test-suite.

pub mod audit;
pub mod bench;
pub mod bnb;
pub mod domain;
pub mod error;
pub mod group;
pub mod instance;
pub mod instances;
pub mod io;
pub mod lexred;
pub mod oracle;
pub mod orbital;
pub mod orbitope;
pub mod perm;
pub mod prehandle;
pub mod propagate;

pub use domain::{Domain, DomainVector, ExtReal, PropStatus, VarKind};
pub use error::{Error, Result};
pub use group::PermGroup;
pub use instance::{Instance, LinearConstraint, Objective, OrbitopeHint, Sense, Variable};
pub use perm::Permutation;
