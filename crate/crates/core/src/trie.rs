//! Sorted-interval radix trie over the seeds of one read batch.
//!
//! Seeds are bucket sorted character by character, identical seeds are
//! merged into a single [`SeedString`] that remembers every owner, and a trie
//! node is simply an interval of the sorted seed list sharing a prefix.

use std::collections::BTreeMap;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::seq::{Nucleotide, Strand, ALPHABET};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SeedOwner {
    /// Index of the read in its batch.
    pub read: usize,
    pub strand: Strand,
    /// Offset of the seed inside the strand-oriented read.
    pub offset: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeedString {
    pub chars: Vec<Nucleotide>,
    /// Maximum number of mismatches allowed when searching this seed.
    pub budget: usize,
    pub owners: Vec<SeedOwner>,
}

impl SeedString {
    pub fn new(chars: Vec<Nucleotide>, budget: usize, owner: SeedOwner) -> Self {
        SeedString {
            chars,
            budget,
            owners: vec![owner],
        }
    }

    pub fn len(&self) -> usize {
        self.chars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.chars.is_empty()
    }
}

/// Interval `[lo, hi)` of the sorted seeds sharing their first `depth`
/// characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TrieNode {
    pub lo: usize,
    pub hi: usize,
    pub depth: usize,
}

/// All seeds searched with the same mismatch budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BudgetClass {
    pub budget: usize,
    pub seed_len: usize,
    pub root: TrieNode,
}

pub type TrieChildren = ArrayVec<(Nucleotide, TrieNode), 5>;

#[derive(Clone, Debug, Default)]
pub struct PatternTrie {
    seeds: Vec<SeedString>,
    classes: Vec<BudgetClass>,
}

impl PatternTrie {
    /// Sorts and merges `seeds`. Classes are ordered by budget; inside a class
    /// every seed must have the same, non-zero length.
    pub fn build(seeds: Vec<SeedString>) -> Result<Self> {
        let mut by_budget: BTreeMap<usize, Vec<SeedString>> = BTreeMap::new();
        for seed in seeds {
            by_budget.entry(seed.budget).or_default().push(seed);
        }

        let mut trie = PatternTrie::default();
        for (budget, class_seeds) in by_budget {
            let seed_len = class_seeds[0].len();
            if seed_len == 0 {
                return Err(Error::Contract("empty seed in pattern trie".into()));
            }
            if let Some(bad) = class_seeds.iter().find(|s| s.len() != seed_len) {
                return Err(Error::Contract(format!(
                    "budget class {budget} mixes seed lengths {seed_len} and {}",
                    bad.len()
                )));
            }
            let lo = trie.seeds.len();
            for seed in bucket_sort(class_seeds, seed_len) {
                let duplicate = trie.seeds.len() > lo
                    && trie.seeds.last().is_some_and(|prev| prev.chars == seed.chars);
                if duplicate {
                    trie.seeds.last_mut().unwrap().owners.extend(seed.owners);
                } else {
                    trie.seeds.push(seed);
                }
            }
            trie.classes.push(BudgetClass {
                budget,
                seed_len,
                root: TrieNode {
                    lo,
                    hi: trie.seeds.len(),
                    depth: 0,
                },
            });
        }
        Ok(trie)
    }

    pub fn classes(&self) -> &[BudgetClass] {
        &self.classes
    }

    pub fn seeds(&self) -> &[SeedString] {
        &self.seeds
    }

    pub fn seed(&self, id: usize) -> &SeedString {
        &self.seeds[id]
    }

    pub fn is_empty(&self) -> bool {
        self.seeds.is_empty()
    }

    pub fn is_leaf(&self, node: TrieNode) -> bool {
        node.lo < node.hi && node.depth == self.seeds[node.lo].len()
    }

    pub fn children(&self, node: TrieNode) -> TrieChildren {
        let mut children = TrieChildren::new();
        if node.lo >= node.hi || self.is_leaf(node) {
            return children;
        }
        let d = node.depth;
        let mut lo = node.lo;
        while lo < node.hi {
            let c = self.seeds[lo].chars[d];
            let end = lo + self.seeds[lo..node.hi].partition_point(|s| s.chars[d] <= c);
            children.push((
                c,
                TrieNode {
                    lo,
                    hi: end,
                    depth: d + 1,
                },
            ));
            lo = end;
        }
        children
    }

    /// Seeds ending at `node`, paired with their ids. Empty unless `node` is
    /// a leaf.
    pub fn leaf_seeds(&self, node: TrieNode) -> impl Iterator<Item = (usize, &SeedString)> {
        let range = if self.is_leaf(node) { node.lo..node.hi } else { 0..0 };
        range.map(move |id| (id, &self.seeds[id]))
    }
}

/// Stable LSD bucket sort on fixed-length seeds.
fn bucket_sort(seeds: Vec<SeedString>, len: usize) -> Vec<SeedString> {
    let mut order: Vec<usize> = (0..seeds.len()).collect();
    let mut scratch = vec![0usize; seeds.len()];
    for pos in (0..len).rev() {
        let mut starts = [0usize; ALPHABET.len() + 1];
        for &i in &order {
            starts[seeds[i].chars[pos].code() as usize + 1] += 1;
        }
        for c in 1..starts.len() {
            starts[c] += starts[c - 1];
        }
        for &i in &order {
            let c = seeds[i].chars[pos].code() as usize;
            scratch[starts[c]] = i;
            starts[c] += 1;
        }
        std::mem::swap(&mut order, &mut scratch);
    }
    let mut slots: Vec<Option<SeedString>> = seeds.into_iter().map(Some).collect();
    order
        .into_iter()
        .map(|i| slots[i].take().expect("permutation visits each seed once"))
        .collect()
}
