//! Enhanced suffix array over the reference text.
//!
//! The index is a suffix array plus LCP table. It is navigated top-down one
//! character at a time through [`EsaNode`] intervals, which makes it behave
//! like a suffix trie for the backtracking searches. Child intervals are
//! found by binary search inside the parent interval, so no child table is
//! stored.

use std::fs::File;
use std::io::{self, BufReader, BufWriter, Read, Write};
use std::path::Path;

use arrayvec::ArrayVec;

use crate::error::{Error, Result};
use crate::seq::{Contig, Genome, Nucleotide};

const MAGIC: &[u8; 4] = b"MSAI";
const FORMAT_VERSION: u32 = 1;
const FLAG_WIDE: u32 = 1;

/// Storage width of the suffix array and LCP entries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Width {
    W32,
    W64,
}

impl Width {
    /// Smallest width able to address a text of length `n`.
    pub fn for_len(n: usize) -> Self {
        if (n as u64) < (1u64 << 32) {
            Width::W32
        } else {
            Width::W64
        }
    }
}

/// Integer array stored at either 32 or 64 bits per entry.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IntVec {
    U32(Vec<u32>),
    U64(Vec<u64>),
}

impl IntVec {
    fn from_usizes(values: &[usize], width: Width) -> Self {
        match width {
            Width::W32 => IntVec::U32(values.iter().map(|&v| v as u32).collect()),
            Width::W64 => IntVec::U64(values.iter().map(|&v| v as u64).collect()),
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> usize {
        match self {
            IntVec::U32(v) => v[i] as usize,
            IntVec::U64(v) => v[i] as usize,
        }
    }

    pub fn len(&self) -> usize {
        match self {
            IntVec::U32(v) => v.len(),
            IntVec::U64(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn width(&self) -> Width {
        match self {
            IntVec::U32(_) => Width::W32,
            IntVec::U64(_) => Width::W64,
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.get(i)).collect()
    }
}

/// A node of the emulated suffix trie: the half-open suffix array interval
/// `[lo, hi)` whose suffixes all share their first `depth` characters.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct EsaNode {
    pub lo: usize,
    pub hi: usize,
    pub depth: usize,
}

impl EsaNode {
    pub fn size(&self) -> usize {
        self.hi - self.lo
    }
}

pub type EsaChildren = ArrayVec<(Nucleotide, EsaNode), 5>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EsaIndex {
    genome: Genome,
    sa: IntVec,
    lcp: IntVec,
}

impl EsaIndex {
    pub fn build(genome: Genome) -> Result<Self> {
        let width = Width::for_len(genome.len());
        Self::build_with_width(genome, width)
    }

    pub fn build_with_width(genome: Genome, width: Width) -> Result<Self> {
        if genome.is_empty() {
            return Err(Error::param("cannot index an empty genome"));
        }
        if width == Width::W32 && Width::for_len(genome.len()) == Width::W64 {
            return Err(Error::param(format!(
                "text of length {} does not fit 32-bit index entries",
                genome.len()
            )));
        }
        let sa = build_suffix_array(genome.text());
        let lcp = build_lcp(genome.text(), &sa);
        Ok(EsaIndex {
            sa: IntVec::from_usizes(&sa, width),
            lcp: IntVec::from_usizes(&lcp, width),
            genome,
        })
    }

    pub fn genome(&self) -> &Genome {
        &self.genome
    }

    pub fn text(&self) -> &[Nucleotide] {
        self.genome.text()
    }

    pub fn len(&self) -> usize {
        self.sa.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sa.is_empty()
    }

    pub fn sa(&self) -> &IntVec {
        &self.sa
    }

    pub fn lcp(&self) -> &IntVec {
        &self.lcp
    }

    pub fn width(&self) -> Width {
        self.sa.width()
    }

    pub fn root(&self) -> EsaNode {
        EsaNode {
            lo: 0,
            hi: self.len(),
            depth: 0,
        }
    }

    /// Character at offset `depth` of the `i`-th smallest suffix; `None`
    /// plays the role of the sentinel once the suffix is exhausted.
    #[inline]
    fn char_at(&self, i: usize, depth: usize) -> Option<Nucleotide> {
        self.text().get(self.sa.get(i) + depth).copied()
    }

    /// First index in `[lo, hi)` whose character at `depth` is greater than
    /// `c`, treating exhausted suffixes as smallest.
    #[inline]
    fn upper_bound(&self, mut lo: usize, mut hi: usize, depth: usize, c: Option<Nucleotide>) -> usize {
        while lo < hi {
            let mid = lo + (hi - lo) / 2;
            if self.char_at(mid, depth) <= c {
                lo = mid + 1;
            } else {
                hi = mid;
            }
        }
        lo
    }

    pub fn node_children(&self, node: EsaNode) -> EsaChildren {
        let mut children = EsaChildren::new();
        let mut lo = node.lo;
        // At most one suffix, the smallest, can end exactly at this depth.
        if lo < node.hi && self.char_at(lo, node.depth).is_none() {
            lo += 1;
        }
        while lo < node.hi {
            let c = self.char_at(lo, node.depth);
            let end = self.upper_bound(lo, node.hi, node.depth, c);
            children.push((
                c.expect("exhausted suffix past the interval start"),
                EsaNode {
                    lo,
                    hi: end,
                    depth: node.depth + 1,
                },
            ));
            lo = end;
        }
        children
    }

    pub fn go_down(&self, node: EsaNode, c: Nucleotide) -> Option<EsaNode> {
        let lo = match c.code() {
            0 => self.upper_bound(node.lo, node.hi, node.depth, None),
            code => self.upper_bound(
                node.lo,
                node.hi,
                node.depth,
                Nucleotide::from_code(code - 1),
            ),
        };
        let hi = self.upper_bound(lo, node.hi, node.depth, Some(c));
        (lo < hi).then_some(EsaNode {
            lo,
            hi,
            depth: node.depth + 1,
        })
    }

    /// Follows `pattern` from the root; `None` if it does not occur.
    pub fn find(&self, pattern: &[Nucleotide]) -> Option<EsaNode> {
        pattern
            .iter()
            .try_fold(self.root(), |node, &c| self.go_down(node, c))
    }

    pub fn occurrences(&self, node: EsaNode) -> Vec<usize> {
        (node.lo..node.hi).map(|i| self.sa.get(i)).collect()
    }

    pub fn save<W: Write>(&self, mut w: W) -> Result<()> {
        let wide = self.width() == Width::W64;
        w.write_all(MAGIC)?;
        w.write_all(&FORMAT_VERSION.to_le_bytes())?;
        w.write_all(&(if wide { FLAG_WIDE } else { 0 }).to_le_bytes())?;
        w.write_all(&(self.len() as u64).to_le_bytes())?;
        let contigs = self.genome.contigs();
        let count = u32::try_from(contigs.len())
            .map_err(|_| Error::format("too many contigs for the index format"))?;
        w.write_all(&count.to_le_bytes())?;
        for c in contigs {
            let name = c.name.as_bytes();
            let name_len = u16::try_from(name.len())
                .map_err(|_| Error::format(format!("contig name too long: {}", c.name)))?;
            w.write_all(&name_len.to_le_bytes())?;
            w.write_all(name)?;
            w.write_all(&(c.start as u64).to_le_bytes())?;
            w.write_all(&(c.len as u64).to_le_bytes())?;
        }
        let packed: Vec<u8> = self
            .text()
            .chunks(2)
            .map(|pair| pair[0].code() | pair.get(1).map_or(0, |n| n.code() << 4))
            .collect();
        w.write_all(&packed)?;
        write_ints(&mut w, &self.sa)?;
        write_ints(&mut w, &self.lcp)?;
        w.flush()?;
        Ok(())
    }

    pub fn load<R: Read>(mut r: R) -> Result<Self> {
        let mut magic = [0u8; 4];
        read_exact(&mut r, &mut magic, "magic")?;
        if &magic != MAGIC {
            return Err(Error::format("not an index file (bad magic)"));
        }
        let version = read_u32(&mut r, "version")?;
        if version != FORMAT_VERSION {
            return Err(Error::format(format!(
                "unsupported index version {version} (expected {FORMAT_VERSION})"
            )));
        }
        let flags = read_u32(&mut r, "flags")?;
        if flags & !FLAG_WIDE != 0 {
            return Err(Error::format(format!("unknown index flags {flags:#x}")));
        }
        let width = if flags & FLAG_WIDE != 0 {
            Width::W64
        } else {
            Width::W32
        };
        let n = read_u64(&mut r, "text length")?;
        if width == Width::W32 && n >= (1u64 << 32) {
            return Err(Error::format(format!(
                "text length {n} overflows 32-bit index entries"
            )));
        }
        let n = usize::try_from(n).map_err(|_| Error::format("text length exceeds address space"))?;
        if n == 0 {
            return Err(Error::format("index of an empty text"));
        }

        let count = read_u32(&mut r, "contig count")?;
        let mut contigs = Vec::new();
        for _ in 0..count {
            let name_len = read_u16(&mut r, "contig name length")? as usize;
            let mut name = vec![0u8; name_len];
            read_exact(&mut r, &mut name, "contig name")?;
            let name = String::from_utf8(name).map_err(|_| Error::format("contig name is not UTF-8"))?;
            let start = read_u64(&mut r, "contig start")? as usize;
            let len = read_u64(&mut r, "contig length")? as usize;
            contigs.push(Contig { name, start, len });
        }

        let mut packed = vec![0u8; n.div_ceil(2)];
        read_exact(&mut r, &mut packed, "packed text")?;
        let mut text = Vec::with_capacity(n);
        for (i, byte) in packed.iter().enumerate() {
            for code in [byte & 0x0f, byte >> 4] {
                if text.len() == n {
                    break;
                }
                let base = Nucleotide::from_code(code).ok_or_else(|| {
                    Error::format(format!("invalid base code {code} near text offset {}", 2 * i))
                })?;
                text.push(base);
            }
        }
        let genome = Genome::from_parts(text, contigs)?;

        let sa = read_ints(&mut r, n, width, "suffix array")?;
        let lcp = read_ints(&mut r, n, width, "lcp array")?;
        if (0..n).any(|i| sa.get(i) >= n) {
            return Err(Error::format("suffix array entry out of range"));
        }
        Ok(EsaIndex { genome, sa, lcp })
    }

    pub fn save_to_path(&self, path: impl AsRef<Path>) -> Result<()> {
        let file = File::create(path)?;
        self.save(BufWriter::new(file))
    }

    pub fn load_from_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = File::open(path)?;
        Self::load(BufReader::new(file))
    }
}

fn write_ints<W: Write>(w: &mut W, values: &IntVec) -> io::Result<()> {
    match values {
        IntVec::U32(v) => {
            let bytes: Vec<u8> = v.iter().flat_map(|x| x.to_le_bytes()).collect();
            w.write_all(&bytes)
        }
        IntVec::U64(v) => {
            let bytes: Vec<u8> = v.iter().flat_map(|x| x.to_le_bytes()).collect();
            w.write_all(&bytes)
        }
    }
}

fn read_ints<R: Read>(r: &mut R, n: usize, width: Width, what: &str) -> Result<IntVec> {
    match width {
        Width::W32 => {
            let mut bytes = vec![0u8; n * 4];
            read_exact(r, &mut bytes, what)?;
            Ok(IntVec::U32(
                bytes
                    .chunks_exact(4)
                    .map(|c| u32::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            ))
        }
        Width::W64 => {
            let mut bytes = vec![0u8; n * 8];
            read_exact(r, &mut bytes, what)?;
            Ok(IntVec::U64(
                bytes
                    .chunks_exact(8)
                    .map(|c| u64::from_le_bytes(c.try_into().unwrap()))
                    .collect(),
            ))
        }
    }
}

fn read_exact<R: Read>(r: &mut R, buf: &mut [u8], what: &str) -> Result<()> {
    r.read_exact(buf).map_err(|e| match e.kind() {
        io::ErrorKind::UnexpectedEof => Error::format(format!("truncated index file while reading {what}")),
        _ => Error::Io(e),
    })
}

fn read_u16<R: Read>(r: &mut R, what: &str) -> Result<u16> {
    let mut b = [0u8; 2];
    read_exact(r, &mut b, what)?;
    Ok(u16::from_le_bytes(b))
}

fn read_u32<R: Read>(r: &mut R, what: &str) -> Result<u32> {
    let mut b = [0u8; 4];
    read_exact(r, &mut b, what)?;
    Ok(u32::from_le_bytes(b))
}

fn read_u64<R: Read>(r: &mut R, what: &str) -> Result<u64> {
    let mut b = [0u8; 8];
    read_exact(r, &mut b, what)?;
    Ok(u64::from_le_bytes(b))
}

/// Suffix array of `text` under the order where an exhausted suffix sorts
/// before every symbol. Built by induced sorting (SA-IS).
pub fn build_suffix_array(text: &[Nucleotide]) -> Vec<usize> {
    if text.is_empty() {
        return Vec::new();
    }
    // Shift codes up by one so that 0 is free for the sentinel.
    let mut s: Vec<usize> = text.iter().map(|n| n.code() as usize + 1).collect();
    s.push(0);
    let sa = sa_is(&s, 6);
    debug_assert_eq!(sa[0], text.len());
    sa[1..].to_vec()
}

/// Kasai et al. LCP construction; `lcp[0] = 0`.
pub fn build_lcp(text: &[Nucleotide], sa: &[usize]) -> Vec<usize> {
    let n = text.len();
    let mut rank = vec![0usize; n];
    for (i, &p) in sa.iter().enumerate() {
        rank[p] = i;
    }
    let mut lcp = vec![0usize; n];
    let mut h = 0usize;
    for i in 0..n {
        if rank[i] == 0 {
            h = 0;
            continue;
        }
        let j = sa[rank[i] - 1];
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[rank[i]] = h;
        h = h.saturating_sub(1);
    }
    lcp
}

const EMPTY: usize = usize::MAX;

/// Induced sorting over an integer string terminated by a unique minimal
/// sentinel `0`; symbols lie in `0..alphabet`.
fn sa_is(s: &[usize], alphabet: usize) -> Vec<usize> {
    let n = s.len();
    if n == 1 {
        return vec![0];
    }

    // true = S-type
    let mut stype = vec![false; n];
    stype[n - 1] = true;
    for i in (0..n - 1).rev() {
        stype[i] = s[i] < s[i + 1] || (s[i] == s[i + 1] && stype[i + 1]);
    }
    let is_lms = |i: usize| i > 0 && stype[i] && !stype[i - 1];

    let mut bucket_sizes = vec![0usize; alphabet];
    for &c in s {
        bucket_sizes[c] += 1;
    }
    let heads = |sizes: &[usize]| {
        let mut acc = 0;
        sizes
            .iter()
            .map(|&sz| {
                let h = acc;
                acc += sz;
                h
            })
            .collect::<Vec<_>>()
    };
    let tails = |sizes: &[usize]| {
        let mut acc = 0;
        sizes
            .iter()
            .map(|&sz| {
                acc += sz;
                acc
            })
            .collect::<Vec<_>>()
    };

    let induce = |sa: &mut [usize], lms_order: &[usize]| {
        sa.fill(EMPTY);
        let mut tail = tails(&bucket_sizes);
        for &p in lms_order.iter().rev() {
            tail[s[p]] -= 1;
            sa[tail[s[p]]] = p;
        }
        let mut head = heads(&bucket_sizes);
        for i in 0..n {
            let j = sa[i];
            if j != EMPTY && j > 0 && !stype[j - 1] {
                let c = s[j - 1];
                sa[head[c]] = j - 1;
                head[c] += 1;
            }
        }
        let mut tail = tails(&bucket_sizes);
        for i in (0..n).rev() {
            let j = sa[i];
            if j != EMPTY && j > 0 && stype[j - 1] {
                let c = s[j - 1];
                tail[c] -= 1;
                sa[tail[c]] = j - 1;
            }
        }
    };

    let lms: Vec<usize> = (1..n).filter(|&i| is_lms(i)).collect();
    let mut sa = vec![EMPTY; n];
    induce(&mut sa, &lms);

    // Name the LMS substrings in their induced order.
    let lms_equal = |a: usize, b: usize| {
        if a == n - 1 || b == n - 1 {
            return false;
        }
        let mut d = 0;
        loop {
            let (al, bl) = (is_lms(a + d), is_lms(b + d));
            if d > 0 && al && bl {
                return true;
            }
            if (d > 0 && al != bl) || s[a + d] != s[b + d] || stype[a + d] != stype[b + d] {
                return false;
            }
            d += 1;
        }
    };
    let mut names = vec![EMPTY; n];
    let mut name = 0usize;
    let mut prev = EMPTY;
    for &p in sa.iter().filter(|&&p| is_lms(p)) {
        if prev != EMPTY && !lms_equal(prev, p) {
            name += 1;
        }
        names[p] = name;
        prev = p;
    }
    let distinct = name + 1;

    let reduced: Vec<usize> = lms.iter().map(|&p| names[p]).collect();
    let reduced_sa = if distinct < lms.len() {
        sa_is(&reduced, distinct)
    } else {
        let mut rsa = vec![0; reduced.len()];
        for (i, &c) in reduced.iter().enumerate() {
            rsa[c] = i;
        }
        rsa
    };
    let sorted_lms: Vec<usize> = reduced_sa.iter().map(|&i| lms[i]).collect();
    induce(&mut sa, &sorted_lms);
    sa
}
