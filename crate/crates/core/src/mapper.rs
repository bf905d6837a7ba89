//! End-to-end mapping: seeding, multiple backtracking, extension and
//! deduplication of one batch of reads.

use std::collections::{BTreeMap, HashMap};

use log::warn;
use rayon::prelude::*;

use crate::backtrack::{HitSink, MultiSearch};
use crate::error::{Error, Result};
use crate::filter::{choose_strategy, make_scheme, partition_read, StrategyOverride};
use crate::index::{EsaIndex, EsaNode};
use crate::seq::{Read, Strand};
use crate::trie::{PatternTrie, SeedString};
use crate::verify::{extend_match, hamming_match, Anchor, Match};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum MappingMode {
    /// Every location within the error threshold.
    #[default]
    All,
    /// Every location at the read's minimum error count.
    AllBest,
    /// One location at the read's minimum error count.
    AnyBest,
}

/// Per-read error threshold, either absolute or as a percentage of the read
/// length (rounded down).
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum ErrorLimit {
    Absolute(usize),
    Rate(f64),
}

impl ErrorLimit {
    pub fn for_read_len(&self, len: usize) -> usize {
        match *self {
            ErrorLimit::Absolute(k) => k,
            ErrorLimit::Rate(pct) => (pct * len as f64 / 100.0 + 1e-9).floor() as usize,
        }
    }
}

#[derive(Clone, Debug)]
pub struct MapperConfig {
    pub errors: ErrorLimit,
    pub strategy: StrategyOverride,
    pub mode: MappingMode,
    /// False restricts verification to ungapped (mismatch-only) alignments.
    pub indels: bool,
    pub batch_size: usize,
    pub threads: usize,
    pub report_unmapped: bool,
}

impl Default for MapperConfig {
    fn default() -> Self {
        MapperConfig {
            errors: ErrorLimit::Absolute(0),
            strategy: StrategyOverride::default(),
            mode: MappingMode::All,
            indels: true,
            batch_size: 100_000,
            threads: 1,
            report_unmapped: false,
        }
    }
}

impl MapperConfig {
    pub fn validate(&self) -> Result<()> {
        if self.batch_size == 0 {
            return Err(Error::param("batch size must be at least 1"));
        }
        if self.threads == 0 {
            return Err(Error::param("thread count must be at least 1"));
        }
        if let ErrorLimit::Rate(r) = self.errors {
            if !(r.is_finite() && r >= 0.0) {
                return Err(Error::param(format!("invalid error rate {r}")));
            }
        }
        Ok(())
    }
}

/// Verified locations of one read, sorted by (contig, begin, strand).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct MatchSet {
    pub read: usize,
    pub matches: Vec<Match>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct MapStats {
    pub reads: usize,
    pub mapped: usize,
    pub locations: usize,
    /// Reads too short for any seed scheme.
    pub too_short: usize,
    pub candidates: usize,
    pub verifications: usize,
}

impl std::ops::AddAssign for MapStats {
    fn add_assign(&mut self, o: Self) {
        self.reads += o.reads;
        self.mapped += o.mapped;
        self.locations += o.locations;
        self.too_short += o.too_short;
        self.candidates += o.candidates;
        self.verifications += o.verifications;
    }
}

/// A seed hit attributed to one read orientation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Candidate {
    pub read: usize,
    pub strand: Strand,
    pub anchor: Anchor,
}

/// Drops repeated anchors and orders the rest by (read, strand, diagonal).
/// Distinct anchors are all kept, even on one diagonal: a short seed can
/// match by chance on a diagonal the true alignment only passes near, and
/// extending from it instead of the seed on the alignment path may lose the
/// location. Overlapping results are collapsed later by [`dedupe_matches`].
pub fn dedupe_candidates(mut cands: Vec<Candidate>) -> Vec<Candidate> {
    cands.sort_unstable_by_key(|c| (c.read, c.strand, c.anchor.diagonal(), c.anchor.read_offset, c.anchor.errors));
    cands.dedup_by_key(|c| (c.read, c.strand, c.anchor.diagonal(), c.anchor.read_offset));
    cands
}

/// Collapses same-strand overlapping intervals, keeping the item with the
/// fewest errors (ties: leftmost begin, then leftmost end). The result is in
/// no particular order.
pub fn collapse_overlaps<T>(mut items: Vec<T>, key: impl Fn(&T) -> (Strand, usize, usize, usize)) -> Vec<T> {
    items.sort_by_key(|t| {
        let (strand, begin, end, errors) = key(t);
        (errors, begin, end, strand)
    });
    let mut accepted: [BTreeMap<usize, usize>; 2] = [BTreeMap::new(), BTreeMap::new()];
    let mut out = Vec::new();
    for item in items {
        let (strand, begin, end, _) = key(&item);
        let taken = &mut accepted[strand as usize];
        let overlaps_prev = taken
            .range(..=begin)
            .next_back()
            .is_some_and(|(_, &e)| e > begin);
        let overlaps_next = taken.range(begin..).next().is_some_and(|(&b, _)| b < end);
        if !(overlaps_prev || overlaps_next) {
            taken.insert(begin, end);
            out.push(item);
        }
    }
    out
}

pub fn dedupe_matches(matches: Vec<Match>) -> Vec<Match> {
    let mut kept = collapse_overlaps(matches, |m| (m.strand, m.begin, m.end, m.errors));
    kept.sort_by_key(|m| (m.contig, m.begin, m.strand));
    kept
}

fn apply_mode(mut matches: Vec<Match>, mode: MappingMode) -> Vec<Match> {
    let Some(best) = matches.iter().map(|m| m.errors).min() else {
        return matches;
    };
    match mode {
        MappingMode::All => matches,
        MappingMode::AllBest => {
            matches.retain(|m| m.errors == best);
            matches
        }
        MappingMode::AnyBest => matches
            .into_iter()
            .min_by_key(|m| (m.errors, m.strand, m.contig, m.begin))
            .into_iter()
            .collect(),
    }
}

struct CandidateSink<'a> {
    index: &'a EsaIndex,
    trie: &'a PatternTrie,
    out: Vec<Candidate>,
}

impl HitSink for CandidateSink<'_> {
    fn report(&mut self, seed: usize, node: EsaNode, mismatches: usize) {
        let seed = self.trie.seed(seed);
        let genome = self.index.genome();
        for i in node.lo..node.hi {
            let pos = self.index.sa().get(i);
            // occurrences spanning two contigs only exist in the concatenation
            let inside = genome
                .contig_index(pos)
                .is_ok_and(|c| pos + seed.len() <= genome.contig(c).end());
            if !inside {
                continue;
            }
            for owner in &seed.owners {
                self.out.push(Candidate {
                    read: owner.read,
                    strand: owner.strand,
                    anchor: Anchor {
                        read_offset: owner.offset,
                        len: seed.len(),
                        text_pos: pos,
                        errors: mismatches,
                    },
                });
            }
        }
    }
}

pub struct MapOutput {
    pub sets: Vec<MatchSet>,
    pub stats: MapStats,
}

pub struct Mapper<'a> {
    index: &'a EsaIndex,
    config: MapperConfig,
    pool: rayon::ThreadPool,
}

impl<'a> Mapper<'a> {
    pub fn new(index: &'a EsaIndex, config: MapperConfig) -> Result<Self> {
        config.validate()?;
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(config.threads)
            .build()
            .map_err(|e| Error::Contract(format!("cannot start worker pool: {e}")))?;
        Ok(Mapper { index, config, pool })
    }

    pub fn config(&self) -> &MapperConfig {
        &self.config
    }

    pub fn index(&self) -> &EsaIndex {
        self.index
    }

    /// Maps `reads`, whose first element has global read number
    /// `first_read`. Results come back in input order, one set per read.
    pub fn map_reads(&self, reads: &[Read], first_read: usize) -> Result<MapOutput> {
        self.pool.install(|| {
            let batches: Vec<Result<MapOutput>> = reads
                .par_chunks(self.config.batch_size)
                .enumerate()
                .map(|(b, chunk)| self.map_batch(chunk, first_read + b * self.config.batch_size))
                .collect();
            let mut out = MapOutput {
                sets: Vec::with_capacity(reads.len()),
                stats: MapStats::default(),
            };
            for batch in batches {
                let batch = batch?;
                out.sets.extend(batch.sets);
                out.stats += batch.stats;
            }
            Ok(out)
        })
    }

    /// One pattern trie per distinct seed length is built over the batch and
    /// searched once; hits are then verified read by read.
    pub fn map_batch(&self, reads: &[Read], first_read: usize) -> Result<MapOutput> {
        let genome_len = self.index.len();
        let mut stats = MapStats {
            reads: reads.len(),
            ..MapStats::default()
        };
        let mut ks = Vec::with_capacity(reads.len());
        let mut by_len: BTreeMap<usize, Vec<SeedString>> = BTreeMap::new();
        for (i, read) in reads.iter().enumerate() {
            let k = self.config.errors.for_read_len(read.len());
            ks.push(k);
            let scheme = choose_strategy(genome_len, read.len(), k, self.config.strategy)
                .and_then(|p| make_scheme(read.len(), k, p.seeds));
            match scheme {
                Ok(scheme) => {
                    for seed in partition_read(i, read, &scheme) {
                        by_len.entry(seed.len()).or_default().push(seed);
                    }
                }
                Err(e) => {
                    stats.too_short += 1;
                    warn!("read {} left unmapped: {e}", read.id);
                }
            }
        }

        let tries = by_len
            .into_values()
            .map(PatternTrie::build)
            .collect::<Result<Vec<_>>>()?;
        let per_trie: Vec<Vec<Candidate>> = tries
            .par_iter()
            .map(|trie| {
                let mut sink = CandidateSink {
                    index: self.index,
                    trie,
                    out: Vec::new(),
                };
                MultiSearch::new(self.index, trie).run(&mut sink);
                sink.out
            })
            .collect();

        let mut per_read: Vec<Vec<Candidate>> = vec![Vec::new(); reads.len()];
        for cand in per_trie.into_iter().flatten() {
            per_read[cand.read].push(cand);
        }
        stats.candidates = per_read.iter().map(Vec::len).sum();

        let verified: Vec<(Vec<Match>, usize)> = per_read
            .into_par_iter()
            .enumerate()
            .map(|(i, cands)| self.verify_read(i, first_read + i, &reads[i], ks[i], cands))
            .collect();

        let mut sets = Vec::with_capacity(reads.len());
        for (i, (matches, verifications)) in verified.into_iter().enumerate() {
            stats.verifications += verifications;
            if !matches.is_empty() {
                stats.mapped += 1;
                stats.locations += matches.len();
            }
            sets.push(MatchSet {
                read: first_read + i,
                matches,
            });
        }
        Ok(MapOutput { sets, stats })
    }

    fn verify_read(
        &self,
        local: usize,
        global: usize,
        read: &Read,
        k: usize,
        cands: Vec<Candidate>,
    ) -> (Vec<Match>, usize) {
        let mut oriented: HashMap<Strand, Vec<_>> = HashMap::new();
        let genome = self.index.genome();
        let mut found = Vec::new();
        let mut verifications = 0;
        for cand in dedupe_candidates(cands) {
            debug_assert_eq!(cand.read, local);
            let seq = oriented
                .entry(cand.strand)
                .or_insert_with(|| cand.strand.apply(&read.seq));
            verifications += 1;
            let hit = if self.config.indels {
                extend_match(genome, global, cand.strand, seq, cand.anchor, k)
            } else {
                hamming_match(genome, global, cand.strand, seq, cand.anchor, k)
            };
            if let Some(m) = hit {
                let perfect = m.errors == 0;
                found.push(m);
                if perfect && self.config.mode == MappingMode::AnyBest {
                    break;
                }
            }
        }
        (apply_mode(dedupe_matches(found), self.config.mode), verifications)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{dna, Genome, Nucleotide};

    fn m(strand: Strand, begin: usize, end: usize, errors: usize) -> Match {
        Match {
            read: 0,
            strand,
            contig: 0,
            begin,
            end,
            errors,
            cigar: String::new(),
        }
    }

    fn cand(read: usize, offset: usize, pos: usize) -> Candidate {
        Candidate {
            read,
            strand: Strand::Forward,
            anchor: Anchor {
                read_offset: offset,
                len: 10,
                text_pos: pos,
                errors: 0,
            },
        }
    }

    #[test]
    fn error_rate_floors() {
        assert_eq!(ErrorLimit::Rate(5.0).for_read_len(100), 5);
        assert_eq!(ErrorLimit::Rate(5.0).for_read_len(99), 4);
        assert_eq!(ErrorLimit::Rate(3.0).for_read_len(100), 3);
        assert_eq!(ErrorLimit::Absolute(2).for_read_len(10), 2);
    }

    #[test]
    fn repeated_anchor_verified_once() {
        let mut worse = cand(0, 10, 110);
        worse.anchor.errors = 1;
        let out = dedupe_candidates(vec![cand(0, 10, 110), worse, cand(0, 10, 110)]);
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].anchor.errors, 0);
    }

    #[test]
    fn candidates_of_distinct_reads_stay() {
        let out = dedupe_candidates(vec![cand(0, 0, 100), cand(1, 0, 100)]);
        assert_eq!(out.len(), 2);
    }

    #[test]
    fn distinct_anchors_stay() {
        // same diagonal, different seeds
        assert_eq!(dedupe_candidates(vec![cand(0, 0, 100), cand(0, 10, 110)]).len(), 2);
        assert_eq!(dedupe_candidates(vec![cand(0, 0, 100), cand(0, 0, 105)]).len(), 2);
    }

    #[test]
    fn same_placement_yields_one_match() {
        let text = random_text(2000, 3);
        let read = text[700..760].to_vec();
        let index = EsaIndex::build(Genome::from_contigs([("g", text)])).unwrap();
        let config = MapperConfig {
            errors: ErrorLimit::Absolute(3),
            ..MapperConfig::default()
        };
        let reads = vec![Read::new("r", read, None).unwrap()];
        let out = Mapper::new(&index, config).unwrap().map_reads(&reads, 0).unwrap();
        // four exact seeds on one diagonal collapse to a single location
        assert!(out.stats.verifications >= 4);
        let fwd: Vec<_> = out.sets[0].matches.iter().filter(|m| m.strand == Strand::Forward).collect();
        assert_eq!(fwd.len(), 1);
        assert_eq!((fwd[0].begin, fwd[0].errors), (700, 0));
    }

    #[test]
    fn spurious_neighbour_does_not_hide_exact_placement() {
        // 12 bp read, four 3 bp seeds; the first seed also occurs three
        // bases to the left of the true placement
        let read = dna("GATCGATGTAGC");
        let text = dna("TTTTTTTTTTGATGATCGATGTAGCTTTTTTTTTT");
        let genome = Genome::from_contigs([("t", text)]);
        let index = EsaIndex::build(genome).unwrap();
        let config = MapperConfig {
            errors: ErrorLimit::Absolute(3),
            strategy: StrategyOverride {
                seeds: Some(4),
                ..StrategyOverride::default()
            },
            ..MapperConfig::default()
        };
        let reads = vec![Read::new("r", read, None).unwrap()];
        let out = Mapper::new(&index, config).unwrap().map_reads(&reads, 0).unwrap();
        let fwd: Vec<_> = out.sets[0].matches.iter().filter(|m| m.strand == Strand::Forward).collect();
        assert!(fwd.iter().any(|m| m.begin == 13 && m.errors == 0), "{fwd:?}");
    }

    #[test]
    fn overlapping_matches_keep_best() {
        let kept = dedupe_matches(vec![m(Strand::Forward, 10, 110, 3), m(Strand::Forward, 11, 111, 2)]);
        assert_eq!(kept, vec![m(Strand::Forward, 11, 111, 2)]);
    }

    #[test]
    fn disjoint_matches_kept() {
        let kept = dedupe_matches(vec![m(Strand::Forward, 200, 300, 1), m(Strand::Forward, 10, 110, 3)]);
        assert_eq!(kept.len(), 2);
        assert_eq!(kept[0].begin, 10);
    }

    #[test]
    fn identical_matches_merge() {
        let kept = dedupe_matches(vec![m(Strand::Forward, 10, 110, 1), m(Strand::Forward, 10, 110, 1)]);
        assert_eq!(kept.len(), 1);
    }

    #[test]
    fn strands_do_not_collapse() {
        let kept = dedupe_matches(vec![m(Strand::Forward, 10, 110, 1), m(Strand::Reverse, 10, 110, 0)]);
        assert_eq!(kept.len(), 2);
    }

    #[test]
    fn equal_errors_keep_leftmost() {
        let kept = dedupe_matches(vec![m(Strand::Forward, 12, 112, 1), m(Strand::Forward, 10, 110, 1)]);
        assert_eq!(kept, vec![m(Strand::Forward, 10, 110, 1)]);
    }

    #[test]
    fn modes() {
        let all = vec![m(Strand::Reverse, 5, 9, 0), m(Strand::Forward, 50, 54, 0), m(Strand::Forward, 20, 24, 1)];
        assert_eq!(apply_mode(all.clone(), MappingMode::All).len(), 3);
        assert_eq!(apply_mode(all.clone(), MappingMode::AllBest).len(), 2);
        let any = apply_mode(all, MappingMode::AnyBest);
        assert_eq!(any, vec![m(Strand::Forward, 50, 54, 0)]);
    }

    fn random_text(len: usize, seed: u64) -> Vec<Nucleotide> {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        (0..len).map(|_| crate::seq::ALPHABET[rng.gen_range(0..4)]).collect()
    }

    #[test]
    fn planted_read_and_modes() {
        let mut text = random_text(5000, 7);
        let read_seq = text[1000..1060].to_vec();
        // second copy with two substitutions
        let mut copy = read_seq.clone();
        copy[10] = copy[10].complement();
        copy[40] = copy[40].complement();
        text[3000..3060].copy_from_slice(&copy);
        let index = EsaIndex::build(Genome::from_contigs([("g", text)])).unwrap();
        let reads = vec![Read::new("r", read_seq, None).unwrap()];

        let run = |mode| {
            let config = MapperConfig {
                errors: ErrorLimit::Absolute(3),
                mode,
                ..MapperConfig::default()
            };
            Mapper::new(&index, config).unwrap().map_reads(&reads, 0).unwrap().sets
        };
        let all = run(MappingMode::All);
        let spans: Vec<_> = all[0].matches.iter().map(|m| (m.begin, m.errors)).collect();
        assert_eq!(spans, vec![(1000, 0), (3000, 2)]);
        let best = run(MappingMode::AllBest);
        assert_eq!(best[0].matches.iter().map(|m| m.begin).collect::<Vec<_>>(), vec![1000]);
        assert_eq!(run(MappingMode::AnyBest)[0].matches.len(), 1);
    }

    #[test]
    fn all_n_read_is_unmapped() {
        let index = EsaIndex::build(Genome::from_contigs([("g", random_text(2000, 3))])).unwrap();
        let reads = vec![Read::new("n", vec![Nucleotide::N; 50], None).unwrap()];
        let config = MapperConfig {
            errors: ErrorLimit::Absolute(2),
            ..MapperConfig::default()
        };
        let out = Mapper::new(&index, config).unwrap().map_reads(&reads, 0).unwrap();
        assert!(out.sets[0].matches.is_empty());
        assert_eq!(out.stats.mapped, 0);
    }

    #[test]
    fn short_read_counted() {
        let index = EsaIndex::build(Genome::from_contigs([("g", dna("ACGTACGTAC"))])).unwrap();
        let reads = vec![Read::new("s", dna("ACG"), None).unwrap()];
        let config = MapperConfig {
            errors: ErrorLimit::Absolute(5),
            ..MapperConfig::default()
        };
        let out = Mapper::new(&index, config).unwrap().map_reads(&reads, 0).unwrap();
        assert_eq!(out.stats.too_short, 1);
        assert!(out.sets[0].matches.is_empty());
    }

    #[test]
    fn rejects_bad_config() {
        let index = EsaIndex::build(Genome::from_contigs([("g", dna("ACGT"))])).unwrap();
        let config = MapperConfig {
            batch_size: 0,
            ..MapperConfig::default()
        };
        assert!(Mapper::new(&index, config).is_err());
    }
}
