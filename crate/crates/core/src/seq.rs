//! Nucleotide alphabet, genome and read containers, strand arithmetic.

use std::fmt;

use crate::error::{Error, Result};

/// A DNA symbol. Discriminants double as the 4-bit on-disk code and define
/// the sort order used by both the suffix array and the pattern trie.
///
/// `N` is a regular value for storage and ordering purposes, but it never
/// [`matches`](Nucleotide::matches) anything, itself included.
#[repr(u8)]
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nucleotide {
    A = 0,
    C = 1,
    G = 2,
    T = 3,
    N = 4,
}

pub const ALPHABET: [Nucleotide; 5] = [
    Nucleotide::A,
    Nucleotide::C,
    Nucleotide::G,
    Nucleotide::T,
    Nucleotide::N,
];

impl Nucleotide {
    /// Case-insensitive decoding; anything outside ACGTN yields `None`.
    #[inline]
    pub fn from_ascii(b: u8) -> Option<Self> {
        match b {
            b'A' | b'a' => Some(Nucleotide::A),
            b'C' | b'c' => Some(Nucleotide::C),
            b'G' | b'g' => Some(Nucleotide::G),
            b'T' | b't' => Some(Nucleotide::T),
            b'N' | b'n' => Some(Nucleotide::N),
            _ => None,
        }
    }

    #[inline]
    pub fn from_code(code: u8) -> Option<Self> {
        ALPHABET.get(code as usize).copied()
    }

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn to_ascii(self) -> u8 {
        b"ACGTN"[self as usize]
    }

    #[inline]
    pub fn complement(self) -> Self {
        match self {
            Nucleotide::A => Nucleotide::T,
            Nucleotide::C => Nucleotide::G,
            Nucleotide::G => Nucleotide::C,
            Nucleotide::T => Nucleotide::A,
            Nucleotide::N => Nucleotide::N,
        }
    }

    /// Match semantics used by every search and alignment routine.
    #[inline]
    pub fn matches(self, other: Nucleotide) -> bool {
        self == other && self != Nucleotide::N
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii() as char)
    }
}

/// Decodes raw bytes into nucleotides. Bytes outside ACGTN (either case)
/// become `N`; the number of such substitutions is returned alongside.
pub fn encode(bytes: &[u8]) -> (Vec<Nucleotide>, usize) {
    let mut invalid = 0;
    let seq = bytes
        .iter()
        .map(|&b| {
            Nucleotide::from_ascii(b).unwrap_or_else(|| {
                invalid += 1;
                Nucleotide::N
            })
        })
        .collect();
    (seq, invalid)
}

/// Shorthand for tests and literals: panics on bytes outside ACGTN.
pub fn dna(s: &str) -> Vec<Nucleotide> {
    s.bytes()
        .map(|b| Nucleotide::from_ascii(b).unwrap_or_else(|| panic!("not a nucleotide: {b:?}")))
        .collect()
}

pub fn to_string(seq: &[Nucleotide]) -> String {
    seq.iter().map(|n| n.to_ascii() as char).collect()
}

pub fn reverse_complement(seq: &[Nucleotide]) -> Vec<Nucleotide> {
    seq.iter().rev().map(|n| n.complement()).collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Strand {
    Forward,
    Reverse,
}

impl Strand {
    pub const BOTH: [Strand; 2] = [Strand::Forward, Strand::Reverse];

    pub fn flip(self) -> Self {
        match self {
            Strand::Forward => Strand::Reverse,
            Strand::Reverse => Strand::Forward,
        }
    }

    /// Orients `seq` according to the strand.
    pub fn apply(self, seq: &[Nucleotide]) -> Vec<Nucleotide> {
        match self {
            Strand::Forward => seq.to_vec(),
            Strand::Reverse => reverse_complement(seq),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Contig {
    pub name: String,
    pub start: usize,
    pub len: usize,
}

impl Contig {
    pub fn end(&self) -> usize {
        self.start + self.len
    }
}

/// All contigs concatenated into a single text, plus the boundary table.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct Genome {
    text: Vec<Nucleotide>,
    contigs: Vec<Contig>,
}

impl Genome {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_contigs<I, S>(contigs: I) -> Self
    where
        I: IntoIterator<Item = (S, Vec<Nucleotide>)>,
        S: Into<String>,
    {
        let mut genome = Genome::new();
        for (name, seq) in contigs {
            genome.push_contig(name, &seq);
        }
        genome
    }

    /// Rebuilds a genome from a stored text and boundary table, checking
    /// that the contigs tile the text.
    pub fn from_parts(text: Vec<Nucleotide>, contigs: Vec<Contig>) -> Result<Self> {
        let mut expected = 0;
        for c in &contigs {
            if c.start != expected {
                return Err(Error::format(format!(
                    "contig {} starts at {} but previous contig ends at {}",
                    c.name, c.start, expected
                )));
            }
            expected = c.end();
        }
        if expected != text.len() {
            return Err(Error::format(format!(
                "contigs cover {expected} bases but text has {}",
                text.len()
            )));
        }
        Ok(Genome { text, contigs })
    }

    pub fn push_contig(&mut self, name: impl Into<String>, seq: &[Nucleotide]) {
        let start = self.text.len();
        self.text.extend_from_slice(seq);
        self.contigs.push(Contig {
            name: name.into(),
            start,
            len: seq.len(),
        });
    }

    pub fn text(&self) -> &[Nucleotide] {
        &self.text
    }

    pub fn len(&self) -> usize {
        self.text.len()
    }

    pub fn is_empty(&self) -> bool {
        self.text.is_empty()
    }

    pub fn contigs(&self) -> &[Contig] {
        &self.contigs
    }

    pub fn contig(&self, idx: usize) -> &Contig {
        &self.contigs[idx]
    }

    /// Index of the contig containing global position `pos`.
    pub fn contig_index(&self, pos: usize) -> Result<usize> {
        if pos >= self.text.len() {
            return Err(Error::Range {
                pos,
                len: self.text.len(),
            });
        }
        // Empty contigs share their start with the next one; partition_point
        // skips past them.
        let idx = self.contigs.partition_point(|c| c.start <= pos) - 1;
        Ok(idx)
    }

    /// Maps a global position to `(contig name, 0-based offset)`.
    pub fn locate(&self, pos: usize) -> Result<(&str, usize)> {
        let idx = self.contig_index(pos)?;
        let c = &self.contigs[idx];
        Ok((c.name.as_str(), pos - c.start))
    }

    /// Inverse of [`locate`](Genome::locate).
    pub fn global_position(&self, contig: usize, offset: usize) -> Option<usize> {
        let c = self.contigs.get(contig)?;
        (offset < c.len).then_some(c.start + offset)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Read {
    pub id: String,
    pub seq: Vec<Nucleotide>,
    /// Carried through to SAM verbatim, never scored.
    pub qual: Option<Vec<u8>>,
}

impl Read {
    pub fn new(id: impl Into<String>, seq: Vec<Nucleotide>, qual: Option<Vec<u8>>) -> Result<Self> {
        let id = id.into();
        if seq.is_empty() {
            return Err(Error::format(format!("read {id} has an empty sequence")));
        }
        if let Some(q) = &qual {
            if q.len() != seq.len() {
                return Err(Error::format(format!(
                    "read {id}: sequence length {} but quality length {}",
                    seq.len(),
                    q.len()
                )));
            }
        }
        Ok(Read { id, seq, qual })
    }

    pub fn len(&self) -> usize {
        self.seq.len()
    }

    pub fn is_empty(&self) -> bool {
        self.seq.is_empty()
    }
}
