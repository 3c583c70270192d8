//! Exact combinatorics for cross t-intersecting families of multisets.
//!
//! The crate covers multiset algebra over `[m]`, a support-preserving
//! bijection between `k`-subsets of `[m+k-1]` and `k`-multisets of `[m]`,
//! down-compression with t-kernel reduction, closed-form extremal bounds, and
//! exact search engines that find and classify every optimal pair on small
//! universes. See `examples/` for one runnable program per capability.

pub mod bijection;
pub mod binom;
pub mod bounds;
pub mod canon;
pub mod cli;
pub mod compression;
pub mod error;
pub mod family;
pub mod multiset;
pub mod search;
pub mod staircase;
pub mod universe;

pub use canon::{canonicalize_pair, PairCanonicalForm};
pub use error::{Error, Result};
pub use family::{is_cross_t_intersecting, is_t_intersecting, Family};
pub use multiset::Multiset;
pub use staircase::Staircase;
pub use universe::Universe;
