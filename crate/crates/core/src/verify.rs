//! Candidate verification: bit-parallel and banded edit distance kernels and
//! two-sided seed extension.

use std::fmt::Write as _;

use crate::seq::{Genome, Nucleotide, Strand};

/// A verified mapping location of one read.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Match {
    /// Input-order index of the read.
    pub read: usize,
    pub strand: Strand,
    pub contig: usize,
    /// Global text interval `[begin, end)`.
    pub begin: usize,
    pub end: usize,
    pub errors: usize,
    pub cigar: String,
}

/// A seed occurrence found by the filter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Anchor {
    /// Offset of the seed in the strand-oriented read.
    pub read_offset: usize,
    pub len: usize,
    /// Global text position of the seed occurrence.
    pub text_pos: usize,
    /// Mismatches spent on the seed itself.
    pub errors: usize,
}

impl Anchor {
    pub fn diagonal(&self) -> isize {
        self.text_pos as isize - self.read_offset as isize
    }
}

const WORD: usize = 64;
const HIGH_BIT: u64 = 1 << 63;

/// Myers' bit-vector edit distance, one column per text character, global
/// (Needleman-Wunsch) boundary on both sequences. Patterns of any length are
/// handled as a chain of 64-bit blocks.
struct BitPattern {
    peq: [Vec<u64>; 4],
    len: usize,
}

impl BitPattern {
    fn new(pattern: &[Nucleotide]) -> Self {
        let blocks = pattern.len().div_ceil(WORD).max(1);
        let mut peq: [Vec<u64>; 4] = std::array::from_fn(|_| vec![0u64; blocks]);
        for (i, &c) in pattern.iter().enumerate() {
            if c != Nucleotide::N {
                peq[c.code() as usize][i / WORD] |= 1 << (i % WORD);
            }
        }
        BitPattern {
            peq,
            len: pattern.len(),
        }
    }

    /// Calls `visit(j, D[m][j])` for every text prefix length `j`, starting
    /// with `j = 0`, until `visit` returns false.
    fn scan(&self, text: &[Nucleotide], mut visit: impl FnMut(usize, usize) -> bool) {
        let m = self.len;
        let mut score = m;
        if !visit(0, score) || m == 0 {
            if m == 0 {
                for j in 1..=text.len() {
                    if !visit(j, j) {
                        break;
                    }
                }
            }
            return;
        }
        let blocks = self.peq[0].len();
        let last_bit = 1u64 << ((m - 1) % WORD);
        let mut pv = vec![u64::MAX; blocks];
        let mut mv = vec![0u64; blocks];
        for (j, &c) in text.iter().enumerate() {
            let mut hin: i32 = 1;
            for b in 0..blocks {
                let mut eq = if c == Nucleotide::N {
                    0
                } else {
                    self.peq[c.code() as usize][b]
                };
                let (p, n) = (pv[b], mv[b]);
                let xv = eq | n;
                if hin < 0 {
                    eq |= 1;
                }
                let xh = ((eq & p).wrapping_add(p) ^ p) | eq;
                let mut ph = n | !(xh | p);
                let mut mh = p & xh;
                if b == blocks - 1 {
                    if ph & last_bit != 0 {
                        score += 1;
                    } else if mh & last_bit != 0 {
                        score -= 1;
                    }
                }
                let hout = if ph & HIGH_BIT != 0 {
                    1
                } else if mh & HIGH_BIT != 0 {
                    -1
                } else {
                    0
                };
                ph <<= 1;
                mh <<= 1;
                if hin < 0 {
                    mh |= 1;
                } else if hin > 0 {
                    ph |= 1;
                }
                pv[b] = mh | !(xv | ph);
                mv[b] = ph & xv;
                hin = hout;
            }
            if !visit(j + 1, score) {
                return;
            }
        }
    }
}

/// Global edit distance between `pattern` and `text`.
pub fn myers_distance(pattern: &[Nucleotide], text: &[Nucleotide]) -> usize {
    let mut last = 0;
    BitPattern::new(pattern).scan(text, |_, d| {
        last = d;
        true
    });
    last
}

const INF: u32 = u32::MAX / 2;

#[inline]
fn sub_cost(a: Nucleotide, b: Nucleotide) -> u32 {
    u32::from(!a.matches(b))
}

/// Global edit distance restricted to the diagonal band `|i - j| <= max_err`.
/// Returns `None` when the distance exceeds `max_err`.
pub fn banded_global_distance(a: &[Nucleotide], b: &[Nucleotide], max_err: usize) -> Option<usize> {
    let (m, n) = (a.len(), b.len());
    if m.abs_diff(n) > max_err {
        return None;
    }
    let t = max_err as u32;
    let mut prev = vec![INF; n + 1];
    let mut cur = vec![INF; n + 1];
    for (j, cell) in prev.iter_mut().enumerate().take(max_err.min(n) + 1) {
        *cell = j as u32;
    }
    for i in 1..=m {
        let lo = i.saturating_sub(max_err);
        let hi = (i + max_err).min(n);
        let mut row_min = INF;
        if lo > 0 {
            cur[lo - 1] = INF;
        }
        for j in lo..=hi {
            let d = if j == 0 {
                i as u32
            } else {
                let diag = prev[j - 1] + sub_cost(a[i - 1], b[j - 1]);
                let up = prev[j] + 1;
                let left = cur[j - 1] + 1;
                diag.min(up).min(left)
            };
            cur[j] = d;
            row_min = row_min.min(d);
        }
        if hi < n {
            cur[hi + 1] = INF;
        }
        if row_min > t {
            return None;
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    let d = prev[n];
    (d <= t).then_some(d as usize)
}

/// Length of the common prefix of `a` and `b`; `N` matches nothing.
pub fn lcp_prime(a: &[Nucleotide], b: &[Nucleotide]) -> usize {
    a.iter().zip(b).take_while(|(x, y)| x.matches(**y)).count()
}

/// Optimal global alignment of `read` against `window` inside the band
/// `|i - j| <= max_err`, as an M/I/D CIGAR plus its edit distance. When several
/// paths are optimal the traceback prefers M, then D, then I.
pub fn traceback_cigar(read: &[Nucleotide], window: &[Nucleotide], max_err: usize) -> Option<(String, usize)> {
    let (m, n) = (read.len(), window.len());
    if m.abs_diff(n) > max_err {
        return None;
    }
    let cols = n + 1;
    let mut dp = vec![INF; (m + 1) * cols];
    let at = |i: usize, j: usize| i * cols + j;
    for j in 0..=max_err.min(n) {
        dp[at(0, j)] = j as u32;
    }
    for i in 1..=m {
        let lo = i.saturating_sub(max_err);
        let hi = (i + max_err).min(n);
        for j in lo..=hi {
            dp[at(i, j)] = if j == 0 {
                i as u32
            } else {
                (dp[at(i - 1, j - 1)] + sub_cost(read[i - 1], window[j - 1]))
                    .min(dp[at(i - 1, j)] + 1)
                    .min(dp[at(i, j - 1)] + 1)
            };
        }
    }
    let dist = dp[at(m, n)];
    if dist > max_err as u32 {
        return None;
    }

    let mut ops = Vec::with_capacity(m + n);
    let (mut i, mut j) = (m, n);
    while i > 0 || j > 0 {
        let d = dp[at(i, j)];
        if i > 0 && j > 0 && dp[at(i - 1, j - 1)] + sub_cost(read[i - 1], window[j - 1]) == d {
            ops.push(b'M');
            i -= 1;
            j -= 1;
        } else if j > 0 && dp[at(i, j - 1)] + 1 == d {
            ops.push(b'D');
            j -= 1;
        } else {
            debug_assert!(i > 0 && dp[at(i - 1, j)] + 1 == d);
            ops.push(b'I');
            i -= 1;
        }
    }
    ops.reverse();
    Some((run_length(&ops), dist as usize))
}

fn run_length(ops: &[u8]) -> String {
    let mut cigar = String::new();
    let mut iter = ops.iter().peekable();
    while let Some(&op) = iter.next() {
        let mut count = 1;
        while iter.peek() == Some(&&op) {
            iter.next();
            count += 1;
        }
        write!(cigar, "{count}{}", op as char).unwrap();
    }
    cigar
}

/// Aligns all of `pattern` against a prefix of `text` chosen freely, both
/// read outward from the seed. Returns the cost and the number of text
/// characters consumed; ties go to the longest (`prefer_longest`) or the
/// shortest consumed prefix.
fn extend_flank(
    pattern: &[Nucleotide],
    text: &[Nucleotide],
    budget: usize,
    prefer_longest: bool,
) -> Option<(usize, usize)> {
    let skip = lcp_prime(pattern, text);
    let (pattern, text) = (&pattern[skip..], &text[skip..]);
    if pattern.is_empty() {
        return Some((0, skip));
    }
    let m = pattern.len();
    let mut best: Option<(usize, usize)> = None;
    BitPattern::new(pattern).scan(text, |j, d| {
        if j + budget < m {
            return true;
        }
        if j > m + budget {
            return false;
        }
        let better = match best {
            None => true,
            Some((bd, _)) => d < bd || (d == bd && prefer_longest),
        };
        if better {
            best = Some((d, j));
        }
        true
    });
    best.filter(|&(d, _)| d <= budget).map(|(d, j)| (d, skip + j))
}

/// Extends a seed occurrence to a full alignment of the oriented read: first
/// leftwards within `k - e` errors, then, only if that succeeded, rightwards
/// with what is left. The returned match carries the exact edit distance of
/// the read against the final interval.
pub fn extend_match(
    genome: &Genome,
    read: usize,
    strand: Strand,
    oriented: &[Nucleotide],
    anchor: Anchor,
    k: usize,
) -> Option<Match> {
    if anchor.errors > k {
        return None;
    }
    let text = genome.text();
    let contig_idx = genome.contig_index(anchor.text_pos).ok()?;
    let contig = genome.contig(contig_idx);
    let seed_end = anchor.text_pos + anchor.len;
    if seed_end > contig.end() || anchor.read_offset + anchor.len > oriented.len() {
        return None;
    }
    let budget = k - anchor.errors;

    let left_read: Vec<Nucleotide> = oriented[..anchor.read_offset].iter().rev().copied().collect();
    let left_start = anchor
        .text_pos
        .saturating_sub(left_read.len() + budget)
        .max(contig.start);
    let left_text: Vec<Nucleotide> = text[left_start..anchor.text_pos].iter().rev().copied().collect();
    let (left_cost, left_len) = extend_flank(&left_read, &left_text, budget, true)?;

    let right_budget = budget - left_cost;
    let right_read = &oriented[anchor.read_offset + anchor.len..];
    let right_end = (seed_end + right_read.len() + right_budget).min(contig.end());
    let (right_cost, right_len) = extend_flank(right_read, &text[seed_end..right_end], right_budget, false)?;

    let begin = anchor.text_pos - left_len;
    let end = seed_end + right_len;
    let (cigar, errors) = traceback_cigar(oriented, &text[begin..end], k)?;
    debug_assert!(errors <= anchor.errors + left_cost + right_cost);
    Some(Match {
        read,
        strand,
        contig: contig_idx,
        begin,
        end,
        errors,
        cigar,
    })
}

/// Ungapped verification: counts mismatches of the whole read on the
/// anchor's diagonal.
pub fn hamming_match(
    genome: &Genome,
    read: usize,
    strand: Strand,
    oriented: &[Nucleotide],
    anchor: Anchor,
    k: usize,
) -> Option<Match> {
    let begin = anchor.text_pos.checked_sub(anchor.read_offset)?;
    let contig_idx = genome.contig_index(anchor.text_pos).ok()?;
    let contig = genome.contig(contig_idx);
    let end = begin + oriented.len();
    if begin < contig.start || end > contig.end() {
        return None;
    }
    let errors = oriented
        .iter()
        .zip(&genome.text()[begin..end])
        .filter(|(a, b)| !a.matches(**b))
        .count();
    (errors <= k).then(|| Match {
        read,
        strand,
        contig: contig_idx,
        begin,
        end,
        errors,
        cigar: format!("{}M", oriented.len()),
    })
}

/// Edit cost implied by a CIGAR against the aligned sequences: mismatching
/// M columns plus every inserted and deleted base.
pub fn cigar_cost(cigar: &str, read: &[Nucleotide], window: &[Nucleotide]) -> Option<usize> {
    let (mut i, mut j, mut cost) = (0usize, 0usize, 0usize);
    let mut num = 0usize;
    for ch in cigar.chars() {
        if let Some(d) = ch.to_digit(10) {
            num = num * 10 + d as usize;
            continue;
        }
        match ch {
            'M' => {
                for _ in 0..num {
                    cost += usize::from(!read.get(i)?.matches(*window.get(j)?));
                    i += 1;
                    j += 1;
                }
            }
            'I' => {
                i += num;
                cost += num;
            }
            'D' => {
                j += num;
                cost += num;
            }
            _ => return None,
        }
        num = 0;
    }
    (i == read.len() && j == window.len()).then_some(cost)
}
