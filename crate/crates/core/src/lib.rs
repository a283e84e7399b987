//! A finite-horizon laboratory for permutation models whose atoms form the
//! space `F_p × W`, `W` the finitely supported sequences over F_p.
//!
//! - [`fp`]: F_p arithmetic, sparse vectors, echelon subspaces.
//! - [`action`]: atoms, truncated group elements, the action on
//!   hereditarily finite objects, orbits and stabilizers.
//! - [`supports`]: support checks and the reduction of `A ∪ B` to `A ∪ {b}`.
//! - [`thin`]: `log*_p`, prefix densities and thinness certificates.
//! - [`counterexample`]: the pair tower and the refutation of partial
//!   choice functions with small supports.
//! - [`verify`]: the property suites behind `permlab verify-all`.

pub mod action;
pub mod counterexample;
pub mod error;
pub mod exec;
pub mod fp;
pub mod oracle;
pub mod random;
pub mod supports;
pub mod thin;
pub mod verify;

pub use error::{Error, Result};
pub use exec::Exec;
pub use fp::{Fp, Prime, Subspace, Vector};
