//! Minimum discrete Fréchet distance under translation in the plane.
//!
//! The crate is organised bottom-up:
//!
//! - [`geometry`]: points, circles and tolerance-aware predicates.
//! - [`free_space`]: the 0/1 free-space matrix and the classical stationary
//!   dynamic program.
//! - [`block_reach`]: compact boundary-to-boundary reachability summaries of
//!   blocks of the free-space matrix, with linear-time merging.
//! - [`decomp_tree`]: decomposition trees of blocks that keep the end-to-end
//!   reachability bit up to date under single-entry updates.
//! - [`arrangement`]: the arrangement of translation disks and a traversal plan
//!   that changes one matrix entry per step.
//! - [`decide`]: the decision procedure and the critical-value optimizer.
//! - [`oracles`]: slow reference implementations used for cross-checking.
//!
//! The crate is `no_std` (with `alloc`) when built without the default `std`
//! feature.
#![cfg_attr(not(feature = "std"), no_std)]

extern crate alloc;

pub mod arrangement;
pub mod block_reach;
pub mod decide;
pub mod decomp_tree;
mod error;
pub mod free_space;
pub mod geometry;
pub mod oracles;

pub use error::{Error, Result};
pub use free_space::{FreeSpaceMatrix, PointSequence};
pub use geometry::{Circle, Point2, Tolerance};

/// A matrix entry `(row, column)`, 0-based: row `i` is the `i`-th point of `P`,
/// column `j` the `j`-th point of `Q`.
pub type Entry = (usize, usize);
