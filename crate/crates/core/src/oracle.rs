//! Brute-force ground truth and evaluation.
//!
//! [`oracle_map`] scans every contig with a plain semi-global dynamic
//! program (Ukkonen's cut-off keeps it near `O(k n)` per read on random
//! text) and shares nothing with the filter or the bit-parallel kernels, so
//! it can serve as the reference answer for sensitivity tests. The read
//! simulator and the scoring in [`evaluate`] follow the usual
//! all / all-best / any-best / recall categories.

use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::mapper::{collapse_overlaps, MatchSet};
use crate::seq::{Genome, Nucleotide, Read, Strand, ALPHABET};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OracleHit {
    pub read: usize,
    pub strand: Strand,
    pub contig: usize,
    pub begin: usize,
    pub end: usize,
    pub distance: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Cell {
    cost: u32,
    /// Text offset where the best path ending here starts.
    start: u32,
}

/// Every location of `read` (both strands) within `k` edits, collapsed with
/// the mapper's overlap rule. `read_id` is copied into the hits.
pub fn oracle_map(genome: &Genome, read_id: usize, read: &[Nucleotide], k: usize) -> Vec<OracleHit> {
    let mut hits = Vec::new();
    for strand in Strand::BOTH {
        let pattern = strand.apply(read);
        for (ci, contig) in genome.contigs().iter().enumerate() {
            let text = &genome.text()[contig.start..contig.end()];
            for (end, cost, begin) in local_minima(semi_global_ends(&pattern, text, k)) {
                hits.push(OracleHit {
                    read: read_id,
                    strand,
                    contig: ci,
                    begin: contig.start + begin,
                    end: contig.start + end,
                    distance: cost,
                });
            }
        }
    }
    let mut kept = collapse_overlaps(hits, |h| (h.strand, h.begin, h.end, h.distance));
    kept.sort_by_key(|h| (h.contig, h.begin, h.strand));
    kept
}

/// Keeps the ends lying on a local minimum of the cost curve. Runs of
/// consecutive ends with equal cost are judged together: the run survives
/// when both neighbours of the run cost more. Ends missing from `ends` cost
/// more than `k`.
fn local_minima(ends: Vec<(usize, usize, usize)>) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    let mut i = 0;
    while i < ends.len() {
        let (j0, c, _) = ends[i];
        let mut r = i + 1;
        while r < ends.len() && ends[r].0 == ends[r - 1].0 + 1 && ends[r].1 == c {
            r += 1;
        }
        let left_higher = i == 0 || ends[i - 1].0 + 1 != j0 || ends[i - 1].1 > c;
        let right_higher = r == ends.len() || ends[r].0 != ends[r - 1].0 + 1 || ends[r].1 > c;
        if left_higher && right_higher {
            out.extend_from_slice(&ends[i..r]);
        }
        i = r;
    }
    out
}

/// `(end, cost, begin)` for every text end position where `pattern` aligns
/// completely with at most `k` edits; `begin` is the leftmost start among the
/// optimal alignments ending there.
fn semi_global_ends(pattern: &[Nucleotide], text: &[Nucleotide], k: usize) -> Vec<(usize, usize, usize)> {
    let m = pattern.len();
    let limit = k as u32;
    let over = Cell {
        cost: limit + 1,
        start: u32::MAX,
    };
    let mut prev: Vec<Cell> = (0..=m)
        .map(|i| Cell {
            cost: i as u32,
            start: 0,
        })
        .collect();
    let mut cur = prev.clone();
    let mut last_active = k.min(m);
    let mut out = Vec::new();
    if m <= k {
        out.push((0, m, 0));
    }
    let better = |a: Cell, b: Cell| if (a.cost, a.start) <= (b.cost, b.start) { a } else { b };
    for j in 1..=text.len() {
        cur[0] = Cell {
            cost: 0,
            start: j as u32,
        };
        let rows = (last_active + 1).min(m);
        for i in 1..=rows {
            let old = |r: usize| if r <= last_active { prev[r] } else { over };
            let diag = old(i - 1);
            let sub = Cell {
                cost: diag.cost + u32::from(!pattern[i - 1].matches(text[j - 1])),
                start: diag.start,
            };
            let up = Cell {
                cost: cur[i - 1].cost + 1,
                start: cur[i - 1].start,
            };
            let left = old(i);
            let left = Cell {
                cost: left.cost + 1,
                start: left.start,
            };
            cur[i] = better(better(sub, up), left);
        }
        let mut active = rows;
        while active > 0 && cur[active].cost > limit {
            active -= 1;
        }
        last_active = active;
        if last_active == m {
            out.push((j, cur[m].cost as usize, cur[m].start as usize));
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    out
}

/// Ungapped variant of [`oracle_map`]: every window within `k` mismatches,
/// without collapsing.
pub fn oracle_map_hamming(genome: &Genome, read_id: usize, read: &[Nucleotide], k: usize) -> Vec<OracleHit> {
    let mut hits = Vec::new();
    let m = read.len();
    for strand in Strand::BOTH {
        let pattern = strand.apply(read);
        for (ci, contig) in genome.contigs().iter().enumerate() {
            if contig.len < m {
                continue;
            }
            for begin in contig.start..=contig.end() - m {
                let window = &genome.text()[begin..begin + m];
                let mism = pattern.iter().zip(window).filter(|(a, b)| !a.matches(**b)).count();
                if mism <= k {
                    hits.push(OracleHit {
                        read: read_id,
                        strand,
                        contig: ci,
                        begin,
                        end: begin + m,
                        distance: mism,
                    });
                }
            }
        }
    }
    hits
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct EditCounts {
    pub subs: usize,
    pub ins: usize,
    pub dels: usize,
}

impl EditCounts {
    pub fn total(&self) -> usize {
        self.subs + self.ins + self.dels
    }

    pub fn mismatch_only(&self) -> bool {
        self.ins == 0 && self.dels == 0
    }
}

/// Where a simulated read came from.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Origin {
    pub read: usize,
    pub contig: usize,
    pub begin: usize,
    pub end: usize,
    pub strand: Strand,
    pub edits: EditCounts,
}

fn random_base_except(rng: &mut impl Rng, not: Nucleotide) -> Nucleotide {
    loop {
        let b = ALPHABET[rng.gen_range(0..4)];
        if b != not {
            return b;
        }
    }
}

/// Applies the requested substitutions, insertions and deletions at random
/// distinct positions of `window`.
pub fn mutate_read(window: &[Nucleotide], edits: EditCounts, rng_seed: u64) -> Vec<Nucleotide> {
    let mut rng = ChaCha8Rng::seed_from_u64(rng_seed);
    mutate_with(window, edits, &mut rng)
}

fn mutate_with(window: &[Nucleotide], edits: EditCounts, rng: &mut impl Rng) -> Vec<Nucleotide> {
    let touched = edits.subs + edits.dels;
    assert!(touched <= window.len(), "more edits than window positions");
    let picked = sample(rng, window.len(), touched).into_vec();
    let mut action = vec![0u8; window.len()];
    for (n, &p) in picked.iter().enumerate() {
        action[p] = if n < edits.subs { 1 } else { 2 };
    }
    let mut out = Vec::with_capacity(window.len() + edits.ins);
    for (&base, &act) in window.iter().zip(&action) {
        match act {
            0 => out.push(base),
            1 => out.push(random_base_except(rng, base)),
            _ => {}
        }
    }
    for _ in 0..edits.ins {
        let at = rng.gen_range(0..=out.len());
        out.insert(at, ALPHABET[rng.gen_range(0..4)]);
    }
    out
}

/// Uniform random ACGT contig.
pub fn random_genome(len: usize, seed: u64) -> Genome {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let text = (0..len).map(|_| ALPHABET[rng.gen_range(0..4)]).collect();
    Genome::from_contigs([("random", text)])
}

/// Samples `count` reads of length `read_len`, each carrying between 0 and
/// `max_edits` planted edits of random kinds, from random positions and
/// strands of `genome`.
pub fn simulate_reads(
    genome: &Genome,
    count: usize,
    read_len: usize,
    max_edits: usize,
    seed: u64,
) -> Result<Vec<(Read, Origin)>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let longest = read_len + max_edits;
    let usable: Vec<usize> = (0..genome.contigs().len())
        .filter(|&c| genome.contig(c).len >= longest)
        .collect();
    if usable.is_empty() || read_len == 0 {
        return Err(Error::param(format!(
            "no contig long enough to simulate reads of length {read_len}"
        )));
    }
    let weights: Vec<usize> = usable.iter().map(|&c| genome.contig(c).len - longest + 1).collect();
    let total: usize = weights.iter().sum();

    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let n_edits = rng.gen_range(0..=max_edits);
        let mut edits = EditCounts::default();
        for _ in 0..n_edits {
            match rng.gen_range(0..3) {
                0 => edits.subs += 1,
                1 => edits.ins += 1,
                _ => edits.dels += 1,
            }
        }
        let mut pick = rng.gen_range(0..total);
        let mut ci = usable[0];
        for (&c, &w) in usable.iter().zip(&weights) {
            if pick < w {
                ci = c;
                break;
            }
            pick -= w;
        }
        let contig = genome.contig(ci);
        let window_len = read_len + edits.dels - edits.ins.min(read_len + edits.dels);
        let begin = contig.start + pick;
        let window = &genome.text()[begin..begin + window_len];
        let strand = if rng.gen_bool(0.5) { Strand::Forward } else { Strand::Reverse };
        let mutated = mutate_with(window, edits, &mut rng);
        let seq = strand.apply(&mutated);
        let qual = vec![b'I'; seq.len()];
        out.push((
            Read::new(format!("sim{i}"), seq, Some(qual))?,
            Origin {
                read: i,
                contig: ci,
                begin,
                end: begin + window_len,
                strand,
                edits,
            },
        ));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct StratumCounts {
    /// Oracle locations at this distance.
    pub oracle_locations: usize,
    pub found_locations: usize,
    /// Oracle locations at this distance that are also their read's best.
    pub best_locations: usize,
    pub best_found: usize,
    /// Reads whose minimum oracle distance is this stratum.
    pub reads: usize,
    pub any_best: usize,
    pub recall: usize,
}

impl StratumCounts {
    fn add(&mut self, o: &StratumCounts) {
        self.oracle_locations += o.oracle_locations;
        self.found_locations += o.found_locations;
        self.best_locations += o.best_locations;
        self.best_found += o.best_found;
        self.reads += o.reads;
        self.any_best += o.any_best;
        self.recall += o.recall;
    }

    pub fn all_pct(&self) -> Option<f64> {
        pct(self.found_locations, self.oracle_locations)
    }

    pub fn all_best_pct(&self) -> Option<f64> {
        pct(self.best_found, self.best_locations)
    }

    pub fn any_best_pct(&self) -> Option<f64> {
        pct(self.any_best, self.reads)
    }

    pub fn recall_pct(&self) -> Option<f64> {
        pct(self.recall, self.reads)
    }
}

fn pct(num: usize, den: usize) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

#[derive(Clone, Debug, Default, PartialEq)]
pub struct EvalReport {
    /// Indexed by edit distance.
    pub strata: Vec<StratumCounts>,
    pub total: StratumCounts,
}

impl EvalReport {
    pub fn to_tsv(&self) -> String {
        let fmt = |p: Option<f64>| p.map_or_else(|| "-".to_string(), |v| format!("{v:.2}"));
        let mut out = String::from(
            "stratum\toracle_locations\tfound\tall%\tbest_locations\tbest_found\tall_best%\treads\tany_best\tany_best%\trecall\trecall%\n",
        );
        let rows = self
            .strata
            .iter()
            .enumerate()
            .map(|(d, s)| (d.to_string(), s))
            .chain(std::iter::once(("total".to_string(), &self.total)));
        for (label, s) in rows {
            writeln!(
                out,
                "{label}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
                s.oracle_locations,
                s.found_locations,
                fmt(s.all_pct()),
                s.best_locations,
                s.best_found,
                fmt(s.all_best_pct()),
                s.reads,
                s.any_best,
                fmt(s.any_best_pct()),
                s.recall,
                fmt(s.recall_pct()),
            )
            .unwrap();
        }
        out
    }
}

fn overlaps(m_begin: usize, m_end: usize, h: &OracleHit) -> bool {
    m_begin < h.end && h.begin < m_end
}

/// Scores mapper output against the oracle. A location counts as found when
/// a reported match on the same strand overlaps it with the same distance.
/// Recall asks for a report within `window_bp` of the simulated origin.
pub fn evaluate(
    mapper_output: &[MatchSet],
    oracle_hits: &[Vec<OracleHit>],
    origins: &[Origin],
    window_bp: usize,
) -> Result<EvalReport> {
    if mapper_output.len() != oracle_hits.len() || origins.len() != oracle_hits.len() {
        return Err(Error::Input(format!(
            "{} mapped reads, {} oracle reads, {} origins",
            mapper_output.len(),
            oracle_hits.len(),
            origins.len()
        )));
    }
    let mut report = EvalReport::default();
    let stratum = |strata: &mut Vec<StratumCounts>, d: usize| -> usize {
        if strata.len() <= d {
            strata.resize(d + 1, StratumCounts::default());
        }
        d
    };
    for ((set, hits), origin) in mapper_output.iter().zip(oracle_hits).zip(origins) {
        if set.read != origin.read || hits.iter().any(|h| h.read != origin.read) {
            return Err(Error::Input(format!(
                "read ids disagree: mapper {}, origin {}",
                set.read, origin.read
            )));
        }
        let Some(best) = hits.iter().map(|h| h.distance).min() else {
            continue;
        };
        let found_hit = |h: &OracleHit| {
            set.matches
                .iter()
                .any(|m| m.strand == h.strand && m.errors == h.distance && overlaps(m.begin, m.end, h))
        };
        for h in hits {
            let s = stratum(&mut report.strata, h.distance);
            let found = found_hit(h);
            let row = &mut report.strata[s];
            row.oracle_locations += 1;
            row.found_locations += usize::from(found);
            if h.distance == best {
                row.best_locations += 1;
                row.best_found += usize::from(found);
            }
        }
        let any_best = hits.iter().any(|h| h.distance == best && found_hit(h));
        let recalled = set.matches.iter().any(|m| {
            m.strand == origin.strand
                && (m.begin.abs_diff(origin.begin) <= window_bp || m.end.abs_diff(origin.end) <= window_bp)
        });
        let s = stratum(&mut report.strata, best);
        let row = &mut report.strata[s];
        row.reads += 1;
        row.any_best += usize::from(any_best);
        row.recall += usize::from(recalled);
    }
    let mut total = StratumCounts::default();
    for s in &report.strata {
        total.add(s);
    }
    report.total = total;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seq::{dna, reverse_complement};
    use crate::verify::Match;

    fn naive_ends(pattern: &[Nucleotide], text: &[Nucleotide], k: usize) -> Vec<(usize, usize)> {
        let m = pattern.len();
        let mut col: Vec<usize> = (0..=m).collect();
        let mut out = Vec::new();
        if m <= k {
            out.push((0, m));
        }
        for j in 1..=text.len() {
            let mut next = vec![0; m + 1];
            for i in 1..=m {
                let sub = col[i - 1] + usize::from(!pattern[i - 1].matches(text[j - 1]));
                next[i] = sub.min(col[i] + 1).min(next[i - 1] + 1);
            }
            col = next;
            if col[m] <= k {
                out.push((j, col[m]));
            }
        }
        out
    }

    fn rand_seq(len: usize, seed: u64) -> Vec<Nucleotide> {
        random_genome(len, seed).text().to_vec()
    }

    #[test]
    fn cutoff_agrees_with_full_dp() {
        for seed in 0..30u64 {
            let text = rand_seq(300, seed);
            let mut pattern = rand_seq(12, seed + 1000);
            if seed % 2 == 0 {
                pattern = mutate_read(&text[100..112], EditCounts { subs: 1, ins: 1, dels: 0 }, seed);
            }
            for k in 0..4 {
                let got: Vec<_> = semi_global_ends(&pattern, &text, k).into_iter().map(|(j, c, _)| (j, c)).collect();
                assert_eq!(got, naive_ends(&pattern, &text, k), "seed {seed} k {k}");
            }
        }
    }

    #[test]
    fn only_local_minima_survive() {
        let ends = vec![(3, 2, 0), (4, 1, 1), (5, 2, 1), (7, 2, 4), (8, 2, 4), (9, 3, 5)];
        assert_eq!(local_minima(ends), vec![(4, 1, 1), (7, 2, 4), (8, 2, 4)]);
        // a plateau sloping into a cheaper end is not a minimum
        let ends = vec![(72, 4, 57), (73, 3, 57), (74, 3, 57), (75, 2, 57), (76, 3, 57)];
        assert_eq!(local_minima(ends), vec![(75, 2, 57)]);
    }

    #[test]
    fn begin_is_leftmost_optimal_start() {
        // "ACGT" against "AACGT": ending at 5 the optimal start is 1 (cost 0)
        let ends = semi_global_ends(&dna("ACGT"), &dna("AACGT"), 1);
        assert!(ends.contains(&(5, 0, 1)));
    }

    #[test]
    fn planted_read_found() {
        let g = random_genome(3000, 11);
        let read = g.text()[500..560].to_vec();
        let hits = oracle_map(&g, 0, &read, 3);
        assert!(hits.contains(&OracleHit {
            read: 0,
            strand: Strand::Forward,
            contig: 0,
            begin: 500,
            end: 560,
            distance: 0
        }));
        let rc = reverse_complement(&read);
        let hits = oracle_map(&g, 0, &rc, 3);
        assert!(hits.iter().any(|h| h.strand == Strand::Reverse && h.begin == 500 && h.distance == 0));
    }

    #[test]
    fn example_hamming_positions() {
        let g = Genome::from_contigs([("t", dna("GGTAACGGTGCGGGC"))]);
        let fwd: Vec<usize> = oracle_map_hamming(&g, 0, &dna("GGTT"), 1)
            .into_iter()
            .filter(|h| h.strand == Strand::Forward)
            .map(|h| h.begin)
            .collect();
        assert_eq!(fwd, vec![0, 6]);
    }

    fn full_dp(a: &[Nucleotide], b: &[Nucleotide]) -> usize {
        naive_ends(a, b, usize::MAX)
            .last()
            .map(|_| {
                let mut prev: Vec<usize> = (0..=b.len()).collect();
                for i in 1..=a.len() {
                    let mut cur = vec![i; b.len() + 1];
                    for j in 1..=b.len() {
                        cur[j] = (prev[j - 1] + usize::from(!a[i - 1].matches(b[j - 1])))
                            .min(prev[j] + 1)
                            .min(cur[j - 1] + 1);
                    }
                    prev = cur;
                }
                prev[b.len()]
            })
            .unwrap()
    }

    #[test]
    fn mutate_examples() {
        let w = rand_seq(50, 5);
        assert_eq!(mutate_read(&w, EditCounts::default(), 1), w);

        let two_subs = mutate_read(&w, EditCounts { subs: 2, ins: 0, dels: 0 }, 2);
        assert_eq!(two_subs.len(), w.len());
        assert_eq!(two_subs.iter().zip(&w).filter(|(a, b)| a != b).count(), 2);

        let indel = mutate_read(&w, EditCounts { subs: 0, ins: 1, dels: 1 }, 3);
        assert_eq!(indel.len(), w.len());
        assert!(full_dp(&indel, &w) <= 2);
        assert!(crate::verify::myers_distance(&indel, &w) <= 2);
    }

    #[test]
    fn simulated_reads_within_planted_distance() {
        let g = random_genome(5000, 9);
        let reads = simulate_reads(&g, 50, 80, 4, 77).unwrap();
        for (read, origin) in &reads {
            assert_eq!(read.len(), 80);
            let window = &g.text()[origin.begin..origin.end];
            let oriented = origin.strand.apply(&read.seq);
            assert!(full_dp(&oriented, window) <= origin.edits.total());
        }
    }

    fn hit(read: usize, begin: usize, distance: usize) -> OracleHit {
        OracleHit {
            read,
            strand: Strand::Forward,
            contig: 0,
            begin,
            end: begin + 10,
            distance,
        }
    }

    fn as_match(h: &OracleHit) -> Match {
        Match {
            read: h.read,
            strand: h.strand,
            contig: h.contig,
            begin: h.begin,
            end: h.end,
            errors: h.distance,
            cigar: "10M".into(),
        }
    }

    fn origin(read: usize, begin: usize) -> Origin {
        Origin {
            read,
            contig: 0,
            begin,
            end: begin + 10,
            strand: Strand::Forward,
            edits: EditCounts::default(),
        }
    }

    fn corpus() -> (Vec<Vec<OracleHit>>, Vec<Origin>) {
        (
            vec![vec![hit(0, 0, 0), hit(0, 100, 0)], vec![hit(1, 50, 1), hit(1, 300, 2)]],
            vec![origin(0, 0), origin(1, 52)],
        )
    }

    #[test]
    fn perfect_output_scores_full() {
        let (oracle, origins) = corpus();
        let sets: Vec<MatchSet> = oracle
            .iter()
            .enumerate()
            .map(|(i, hs)| MatchSet { read: i, matches: hs.iter().map(as_match).collect() })
            .collect();
        let r = evaluate(&sets, &oracle, &origins, 10).unwrap();
        assert_eq!(r.total.all_pct(), Some(100.0));
        assert_eq!(r.total.all_best_pct(), Some(100.0));
        assert_eq!(r.total.any_best_pct(), Some(100.0));
        assert_eq!(r.total.recall_pct(), Some(100.0));
        assert_eq!(r.strata[0].reads, 1);
        assert_eq!(r.strata[2].oracle_locations, 1);
    }

    #[test]
    fn empty_output_scores_zero() {
        let (oracle, origins) = corpus();
        let sets = vec![MatchSet { read: 0, matches: vec![] }, MatchSet { read: 1, matches: vec![] }];
        let r = evaluate(&sets, &oracle, &origins, 10).unwrap();
        for p in [r.total.all_pct(), r.total.all_best_pct(), r.total.any_best_pct(), r.total.recall_pct()] {
            assert_eq!(p, Some(0.0));
        }
    }

    #[test]
    fn any_best_without_all_best() {
        let (oracle, origins) = corpus();
        let sets = vec![
            MatchSet { read: 0, matches: vec![as_match(&oracle[0][0])] },
            MatchSet { read: 1, matches: vec![as_match(&oracle[1][0])] },
        ];
        let r = evaluate(&sets, &oracle, &origins, 10).unwrap();
        assert_eq!(r.total.any_best_pct(), Some(100.0));
        assert!(r.total.all_best_pct().unwrap() < 100.0);
        assert!(r.total.all_pct().unwrap() < 100.0);
    }

    #[test]
    fn wrong_distance_not_found() {
        let (oracle, origins) = corpus();
        let mut m = as_match(&oracle[0][0]);
        m.errors = 1;
        let sets = vec![MatchSet { read: 0, matches: vec![m] }, MatchSet { read: 1, matches: vec![] }];
        let r = evaluate(&sets, &oracle, &origins, 10).unwrap();
        assert_eq!(r.total.found_locations, 0);
        // but recall only cares about position
        assert_eq!(r.strata[0].recall, 1);
    }

    #[test]
    fn id_mismatch_is_input_error() {
        let (oracle, origins) = corpus();
        let sets = vec![MatchSet { read: 0, matches: vec![] }, MatchSet { read: 7, matches: vec![] }];
        assert!(matches!(evaluate(&sets, &oracle, &origins, 10), Err(Error::Input(_))));
        assert!(matches!(evaluate(&sets[..1], &oracle, &origins, 10), Err(Error::Input(_))));
    }

    #[test]
    fn tsv_has_total_row() {
        let (oracle, origins) = corpus();
        let sets = vec![MatchSet { read: 0, matches: vec![] }, MatchSet { read: 1, matches: vec![] }];
        let tsv = evaluate(&sets, &oracle, &origins, 10).unwrap().to_tsv();
        assert!(tsv.lines().last().unwrap().starts_with("total\t4\t0\t0.00"));
        assert_eq!(tsv.lines().count(), 5);
    }
}
