//! Exact combinatorics of semistable models over a p-adic base.
//!
//! * [`ultrametric`]: exact rationals and p-adic valuations.
//! * [`disks`], [`tree`]: closed disks in the open unit disk, closures of
//!   finite collections and their trees of disks (semistable models of the disk).
//! * [`skeleton`]: dual graphs of semistable curves, cohomology dimensions of
//!   open curves, blow-downs and stabilization.
//! * [`groups`]: permutation groups, subgroups up to conjugacy and characters
//!   with exact cyclotomic values.
//! * [`cover`]: Galois covers of the disk over a tree of disks and the
//!   criteria for (almost) semistable reduction.

pub mod cli;
pub mod cover;
pub mod disks;
pub mod error;
pub mod fuzz;
pub mod groups;
pub mod skeleton;
pub mod tree;
pub mod ultrametric;

pub use error::{Error, Result};

/// Version stamped into every JSON document the crate writes.
pub const SCHEMA_VERSION: u32 = 1;
