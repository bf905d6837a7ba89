//! Full-sensitivity approximate read mapping.
//!
//! The reference is indexed once as an enhanced suffix array. Reads are cut
//! into non-overlapping seeds following the pigeonhole principle, all seeds
//! of a batch are arranged in a sorted pattern trie, and the trie is searched
//! against the index in a single simultaneous backtracking pass. Every seed
//! hit is then extended to a full alignment within the remaining error budget.

pub mod backtrack;
pub mod cli;
pub mod error;
pub mod filter;
pub mod index;
pub mod io;
pub mod mapper;
pub mod oracle;
pub mod seq;
pub mod trie;
pub mod verify;

pub use error::{Error, Result};
