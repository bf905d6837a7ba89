//! Pigeonhole seed partitioning.
//!
//! A read with at most `k` errors is cut into `s <= k + 1` non-overlapping
//! seeds. `(k mod s) + 1` seeds get a budget of `k / s` mismatches and the
//! others `k / s - 1`. If no seed occurred within its budget the read would
//! carry at least `s * (k / s) + (k mod s) + 1 = k + 1` errors, so every
//! occurrence within `k` errors is anchored by at least one seed.

use crate::error::{Error, Result};
use crate::seq::{Read, Strand};
use crate::trie::{SeedOwner, SeedString};

/// Genome length from which approximate seeds become the default.
pub const APPROXIMATE_SEED_GENOME_LEN: usize = 1 << 26;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FiltrationMode {
    ExactSeeds,
    ApproximateSeeds,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MappingParams {
    pub k: usize,
    pub seeds: usize,
    pub seed_len: usize,
    pub mode: FiltrationMode,
}

/// User overrides of the default filtration heuristic, in priority order:
/// seed count, then seed length, then per-seed error cap.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StrategyOverride {
    pub seeds: Option<usize>,
    pub seed_len: Option<usize>,
    pub seed_errors: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedScheme {
    pub offsets: Vec<usize>,
    pub lengths: Vec<usize>,
    pub budgets: Vec<usize>,
}

impl SeedScheme {
    pub fn len(&self) -> usize {
        self.offsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.offsets.is_empty()
    }
}

pub fn make_scheme(read_len: usize, k: usize, s: usize) -> Result<SeedScheme> {
    if s == 0 || s > k + 1 {
        return Err(Error::param(format!("seed count {s} outside 1..={}", k + 1)));
    }
    let len = read_len / s;
    if len == 0 {
        return Err(Error::param(format!(
            "a read of length {read_len} cannot hold {s} seeds"
        )));
    }
    let wide = k % s + 1;
    let budget = k / s;
    let offsets = (0..s).map(|i| i * len).collect();
    let mut lengths = vec![len; s];
    lengths[s - 1] += read_len % s;
    let budgets = (0..s)
        .map(|i| if i < wide { budget } else { budget - 1 })
        .collect();
    Ok(SeedScheme {
        offsets,
        lengths,
        budgets,
    })
}

/// Cuts the strand-oriented `seq` of read number `read` into its seeds.
pub fn partition(
    read: usize,
    oriented: &[crate::seq::Nucleotide],
    scheme: &SeedScheme,
    strand: Strand,
) -> Vec<SeedString> {
    (0..scheme.len())
        .map(|i| {
            let (off, len) = (scheme.offsets[i], scheme.lengths[i]);
            SeedString::new(
                oriented[off..off + len].to_vec(),
                scheme.budgets[i],
                SeedOwner {
                    read,
                    strand,
                    offset: off,
                },
            )
        })
        .collect()
}

/// Partitions both orientations of `read`.
pub fn partition_read(read_idx: usize, read: &Read, scheme: &SeedScheme) -> Vec<SeedString> {
    Strand::BOTH
        .iter()
        .flat_map(|&strand| partition(read_idx, &strand.apply(&read.seq), scheme, strand))
        .collect()
}

pub fn choose_strategy(
    genome_len: usize,
    read_len: usize,
    k: usize,
    overrides: StrategyOverride,
) -> Result<MappingParams> {
    let s = if let Some(s) = overrides.seeds {
        s
    } else if let Some(l) = overrides.seed_len {
        if l == 0 {
            return Err(Error::param("seed length must be positive"));
        }
        (read_len / l).clamp(1, k + 1)
    } else if let Some(e) = overrides.seed_errors {
        k / (e + 1) + 1
    } else if genome_len < APPROXIMATE_SEED_GENOME_LEN {
        k + 1
    } else {
        // smallest s with k / s <= 1
        k / 2 + 1
    };
    if s == 0 || s > k + 1 {
        return Err(Error::param(format!("seed count {s} outside 1..={}", k + 1)));
    }
    if read_len < s {
        return Err(Error::param(format!(
            "a read of length {read_len} is too short for {s} seeds"
        )));
    }
    Ok(MappingParams {
        k,
        seeds: s,
        seed_len: read_len / s,
        mode: if s == k + 1 {
            FiltrationMode::ExactSeeds
        } else {
            FiltrationMode::ApproximateSeeds
        },
    })
}
