//! Computational toolkit for finite loops given by Cayley tables.
//!
//! The crate covers Moufang identity scans, normal subloops and quotients,
//! inner mappings and autotopisms, the congruence commutator of normal
//! subloops, abelian and central extensions, the classical and congruence
//! solvability deciders, central nilpotency, divisibility checks, and a
//! generator of centrally nilpotent Moufang loops from quadratic forms over
//! GF(2) together with a catalog of fixture loops.

pub mod abelext;
pub mod commutator;
mod congruence;
pub mod constructions;
pub mod divisibility;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod loops;
pub mod mappings;
pub mod report;
pub mod subloops;

pub use error::{LoopError, Result};
pub use loops::{FiniteLoop, IdentityCheck, IdentityScheme, LoopElement, Side};
pub use subloops::{QuotientResult, Subloop};
