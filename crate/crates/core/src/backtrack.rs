//! Simultaneous backtracking of a pattern trie against the suffix index.
//!
//! Both structures are walked one character at a time. The exact search
//! only follows pattern edges that also exist in the index; the approximate
//! search pairs every index child with every pattern child and spends one
//! mismatch whenever their labels differ, falling back to the exact search
//! once the budget is exhausted.

use std::collections::BTreeMap;

use crate::index::{EsaIndex, EsaNode};
use crate::seq::Nucleotide;
use crate::trie::{PatternTrie, TrieNode};

/// Receives `(seed id, index node, mismatches)` triples. Every text position
/// in the index node is an occurrence of the seed with that many mismatches.
pub trait HitSink {
    fn report(&mut self, seed: usize, node: EsaNode, mismatches: usize);
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct SearchStats {
    /// Recursive calls made.
    pub calls: u64,
    /// Child pairs expanded with differing labels.
    pub mismatch_expansions: u64,
}

pub struct MultiSearch<'a> {
    index: &'a EsaIndex,
    trie: &'a PatternTrie,
    pub stats: SearchStats,
}

impl<'a> MultiSearch<'a> {
    pub fn new(index: &'a EsaIndex, trie: &'a PatternTrie) -> Self {
        MultiSearch {
            index,
            trie,
            stats: SearchStats::default(),
        }
    }

    /// Searches every budget class of the trie from the index root.
    pub fn run<S: HitSink>(&mut self, sink: &mut S) {
        for class in self.trie.classes() {
            self.approximate(self.index.root(), class.root, class.budget, sink);
        }
    }

    pub fn exact<S: HitSink>(&mut self, g: EsaNode, s: TrieNode, sink: &mut S) {
        self.exact_from(g, s, 0, sink);
    }

    pub fn approximate<S: HitSink>(&mut self, g: EsaNode, s: TrieNode, k: usize, sink: &mut S) {
        self.approximate_from(g, s, k, 0, sink);
    }

    fn report<S: HitSink>(&self, g: EsaNode, s: TrieNode, spent: usize, sink: &mut S) {
        for (id, _) in self.trie.leaf_seeds(s) {
            sink.report(id, g, spent);
        }
    }

    fn exact_from<S: HitSink>(&mut self, g: EsaNode, s: TrieNode, spent: usize, sink: &mut S) {
        self.stats.calls += 1;
        if self.trie.is_leaf(s) {
            self.report(g, s, spent, sink);
            return;
        }
        for (label, cs) in self.trie.children(s) {
            if label == Nucleotide::N {
                continue;
            }
            if let Some(cg) = self.index.go_down(g, label) {
                self.exact_from(cg, cs, spent, sink);
            }
        }
    }

    fn approximate_from<S: HitSink>(
        &mut self,
        g: EsaNode,
        s: TrieNode,
        k: usize,
        spent: usize,
        sink: &mut S,
    ) {
        if k == 0 {
            self.exact_from(g, s, spent, sink);
            return;
        }
        self.stats.calls += 1;
        if self.trie.is_leaf(s) {
            self.report(g, s, spent, sink);
            return;
        }
        let pattern_children = self.trie.children(s);
        for (gl, cg) in self.index.node_children(g) {
            for &(sl, cs) in &pattern_children {
                if gl.matches(sl) {
                    self.approximate_from(cg, cs, k, spent, sink);
                } else {
                    self.stats.mismatch_expansions += 1;
                    self.approximate_from(cg, cs, k - 1, spent + 1, sink);
                }
            }
        }
    }
}

pub fn multi_exact_search<S: HitSink>(
    index: &EsaIndex,
    trie: &PatternTrie,
    g: EsaNode,
    s: TrieNode,
    sink: &mut S,
) -> SearchStats {
    let mut search = MultiSearch::new(index, trie);
    search.exact(g, s, sink);
    search.stats
}

pub fn multi_approx_search<S: HitSink>(
    index: &EsaIndex,
    trie: &PatternTrie,
    g: EsaNode,
    s: TrieNode,
    k: usize,
    sink: &mut S,
) -> SearchStats {
    let mut search = MultiSearch::new(index, trie);
    search.approximate(g, s, k, sink);
    search.stats
}

/// Expands reported nodes into `(seed, position)` pairs, keeping the lowest
/// mismatch count when a pair is reported more than once.
#[derive(Clone, Debug, Default)]
pub struct HitCollector {
    hits: BTreeMap<(usize, usize), usize>,
}

impl HitCollector {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_index<'a>(&'a mut self, index: &'a EsaIndex) -> impl HitSink + 'a {
        Expand {
            index,
            collector: self,
        }
    }

    pub fn insert(&mut self, seed: usize, pos: usize, mismatches: usize) {
        self.hits
            .entry((seed, pos))
            .and_modify(|m| *m = (*m).min(mismatches))
            .or_insert(mismatches);
    }

    pub fn len(&self) -> usize {
        self.hits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.hits.is_empty()
    }

    /// `(seed, position, mismatches)` sorted by seed then position.
    pub fn into_hits(self) -> Vec<(usize, usize, usize)> {
        self.hits.into_iter().map(|((s, p), m)| (s, p, m)).collect()
    }
}

struct Expand<'a> {
    index: &'a EsaIndex,
    collector: &'a mut HitCollector,
}

impl HitSink for Expand<'_> {
    fn report(&mut self, seed: usize, node: EsaNode, mismatches: usize) {
        for i in node.lo..node.hi {
            self.collector.insert(seed, self.index.sa().get(i), mismatches);
        }
    }
}

/// Single-pattern depth-first backtracking with mismatch pruning. Returns
/// `(position, mismatches)` sorted by position.
pub fn single_backtrack(index: &EsaIndex, pattern: &[Nucleotide], k: usize) -> Vec<(usize, usize)> {
    fn visit(
        index: &EsaIndex,
        pattern: &[Nucleotide],
        node: EsaNode,
        mismatches: usize,
        k: usize,
        out: &mut Vec<(usize, usize)>,
    ) {
        if node.depth == pattern.len() {
            out.extend(index.occurrences(node).into_iter().map(|p| (p, mismatches)));
            return;
        }
        let want = pattern[node.depth];
        for (c, child) in index.node_children(node) {
            let m = mismatches + usize::from(!c.matches(want));
            if m <= k {
                visit(index, pattern, child, m, k, out);
            }
        }
    }

    let mut out = Vec::new();
    if pattern.is_empty() {
        return out;
    }
    visit(index, pattern, index.root(), 0, k, &mut out);
    out.sort_unstable();
    out
}
