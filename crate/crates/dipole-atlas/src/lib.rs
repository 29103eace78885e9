//! Exact enumeration of (p,q,n)-dipoles on orientable surfaces of genus 0-2.
//!
//! A dipole is a 2-cell embedding of a loopless two-vertex multigraph in an
//! orientable surface; a (p,q,n)-dipole additionally distinguishes a
//! secondary edge, with jumps p and q recording the separation of the two
//! distinguished edges at each vertex. This crate computes their numbers
//! exactly, three independent ways:
//!
//! - closed-form series assembled from preimage functions of the join-cut
//!   operators ([`tau`], [`genus`]);
//! - degree-by-degree iteration of the join-cut partial differential
//!   equations ([`operators`]);
//! - a brute-force rotation-system enumerator ([`oracle`]) that grounds
//!   every count.
//!
//! All arithmetic is exact (integers and rationals); there is no floating
//! point anywhere in the crate.

pub mod central;
pub mod cli;
pub mod error;
pub mod genus;
pub mod operators;
pub mod oracle;
pub mod phi;
pub mod series;
pub mod strings;
pub mod tau;
pub mod verify;

mod symbolic;
pub mod util;

pub use error::AtlasError;
pub use series::{Monomial, Series, Truncation};
pub use strings::{BinaryString, CyclicString, Symbol};
