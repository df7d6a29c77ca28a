//! Finite braided crossed modules, biextensions, multi-butterflies and
//! Mac Lane cohomology of small finite rings.

#![allow(clippy::needless_range_loop)]

pub mod barcx;
pub mod biext;
pub mod catring;
pub mod cohom;
pub mod fingroup;
pub mod linalg;
pub mod multiext;
pub mod report;
pub mod xmod;

pub use report::{Check, Report};

/// Default ceiling for brute-force searches.
pub const DEFAULT_MAX_SEARCH: u64 = 1 << 24;

/// Search ceiling from `BEXTLAB_MAX_SEARCH`, falling back to [`DEFAULT_MAX_SEARCH`].
pub fn max_search() -> u64 {
    std::env::var("BEXTLAB_MAX_SEARCH")
        .ok()
        .and_then(|v| v.trim().parse().ok())
        .unwrap_or(DEFAULT_MAX_SEARCH)
}
