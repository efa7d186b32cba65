//! Matroid algorithms and pricing that survives arbitrary tie-breaking.
//!
//! Two buyers with matroid valuations arrive in an unknown order and each
//! picks an arbitrary utility-maximising bundle. The pipelines here compute
//! item prices under which every such sequence of choices ends in a
//! welfare-maximising allocation:
//!
//! * [`pipelines::price_conjecture2_partition`] when one matroid is a
//!   partition matroid with classes of size at most two and unit bounds;
//! * [`pipelines::price_conjecture2_sbo`] when both matroids admit
//!   strongly-base-orderable bijections;
//! * [`pipelines::price_weighted`] for additive weights on bases, reduced to
//!   the unweighted case through a Frank weight splitting;
//! * [`pipelines::price_rank_valuations`] for plain matroid rank valuations;
//! * [`gs::price_gs`] for small gross-substitutes valuation tables.
//!
//! Every output can be checked by the exhaustive verifiers in [`verify`].
//!
//! The crate is `no_std` and needs only `alloc`. All arithmetic is exact.

#![no_std]

extern crate alloc;

pub mod algos;
pub mod error;
pub mod exchange;
pub mod gs;
pub mod matroid;
pub mod pipelines;
pub mod rational;
pub mod sbo;
pub mod set;
pub mod verify;

pub use error::{Error, Result};
pub use matroid::{build_matroid, LaminarSet, Matroid, MatroidDescriptor};
pub use rational::{Rational, RationalVector};
pub use set::ElementSet;
