//! FASTA/FASTQ parsing and SAM output.

use std::io::{BufRead, Write};

use log::warn;

use crate::error::{Error, Result};
use crate::mapper::MatchSet;
use crate::seq::{encode, Genome, Read, Strand};
use crate::verify::Match;

/// Strips a trailing `\n` or `\r\n`.
fn chomp(line: &mut Vec<u8>) {
    if line.last() == Some(&b'\n') {
        line.pop();
        if line.last() == Some(&b'\r') {
            line.pop();
        }
    }
}

fn first_word(header: &[u8]) -> String {
    let end = header
        .iter()
        .position(|b| b.is_ascii_whitespace())
        .unwrap_or(header.len());
    String::from_utf8_lossy(&header[..end]).into_owned()
}

/// Reads a multi-FASTA reference. Contig names are taken up to the first
/// whitespace; bases outside ACGTN become `N`.
pub fn read_fasta<R: BufRead>(mut source: R) -> Result<Genome> {
    let mut genome = Genome::new();
    let mut name: Option<String> = None;
    let mut seq = Vec::new();
    let mut invalid = 0usize;
    let mut line = Vec::new();
    let mut lineno = 0usize;
    loop {
        line.clear();
        if source.read_until(b'\n', &mut line)? == 0 {
            break;
        }
        lineno += 1;
        chomp(&mut line);
        if let Some(header) = line.strip_prefix(b">") {
            if let Some(prev) = name.take() {
                genome.push_contig(prev, &seq);
                seq.clear();
            }
            let n = first_word(header);
            if n.is_empty() {
                return Err(Error::format(format!("FASTA line {lineno}: empty contig name")));
            }
            name = Some(n);
        } else if line.iter().all(|b| b.is_ascii_whitespace()) {
            continue;
        } else if name.is_none() {
            return Err(Error::format(format!("FASTA line {lineno}: sequence before first header")));
        } else {
            let (bases, bad) = encode(&line);
            invalid += bad;
            seq.extend(bases);
        }
    }
    match name {
        Some(prev) => genome.push_contig(prev, &seq),
        None => return Err(Error::format("FASTA input contains no records")),
    }
    if invalid > 0 {
        warn!("replaced {invalid} non-ACGTN reference characters with N");
    }
    Ok(genome)
}

/// Writes `genome` as FASTA with fixed-width lines.
pub fn write_fasta<W: Write>(mut sink: W, genome: &Genome, width: usize) -> Result<()> {
    let width = width.max(1);
    for contig in genome.contigs() {
        writeln!(sink, ">{}", contig.name)?;
        let text = &genome.text()[contig.start..contig.end()];
        for chunk in text.chunks(width) {
            let line: Vec<u8> = chunk.iter().map(|b| b.to_ascii()).collect();
            sink.write_all(&line)?;
            sink.write_all(b"\n")?;
        }
    }
    Ok(())
}

/// Streaming FASTQ parser over 4-line records.
pub struct FastqReader<R> {
    source: R,
    record: usize,
    invalid: usize,
    done: bool,
    buf: Vec<u8>,
}

impl<R: BufRead> FastqReader<R> {
    pub fn new(source: R) -> Self {
        FastqReader {
            source,
            record: 0,
            invalid: 0,
            done: false,
            buf: Vec::new(),
        }
    }

    /// Bases replaced by `N` so far.
    pub fn invalid_bases(&self) -> usize {
        self.invalid
    }

    fn line(&mut self) -> Result<Option<Vec<u8>>> {
        self.buf.clear();
        if self.source.read_until(b'\n', &mut self.buf)? == 0 {
            return Ok(None);
        }
        chomp(&mut self.buf);
        Ok(Some(self.buf.clone()))
    }

    fn truncated(&self) -> Error {
        Error::format(format!("FASTQ record {}: truncated record", self.record))
    }

    fn next_record(&mut self) -> Result<Option<Read>> {
        let header = loop {
            match self.line()? {
                None => return Ok(None),
                Some(l) if l.is_empty() => continue,
                Some(l) => break l,
            }
        };
        let Some(id) = header.strip_prefix(b"@") else {
            return Err(Error::format(format!(
                "FASTQ record {}: header does not start with '@'",
                self.record
            )));
        };
        let id = first_word(id);
        let seq = self.line()?.ok_or_else(|| self.truncated())?;
        let plus = self.line()?.ok_or_else(|| self.truncated())?;
        if !plus.starts_with(b"+") {
            return Err(Error::format(format!(
                "FASTQ record {}: expected '+' separator",
                self.record
            )));
        }
        let qual = self.line()?.ok_or_else(|| self.truncated())?;
        if seq.len() != qual.len() {
            return Err(Error::format(format!(
                "FASTQ record {} ({id}): sequence length {} but quality length {}",
                self.record,
                seq.len(),
                qual.len()
            )));
        }
        let (bases, bad) = encode(&seq);
        self.invalid += bad;
        let read = Read::new(id, bases, Some(qual))
            .map_err(|e| Error::format(format!("FASTQ record {}: {e}", self.record)))?;
        self.record += 1;
        Ok(Some(read))
    }
}

impl<R: BufRead> Iterator for FastqReader<R> {
    type Item = Result<Read>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        let item = self.next_record().transpose();
        if !matches!(item, Some(Ok(_))) {
            self.done = true;
        }
        item
    }
}

pub fn read_fastq<R: BufRead>(source: R) -> FastqReader<R> {
    FastqReader::new(source)
}

/// Writes reads as FASTQ; missing qualities are filled with `I`.
pub fn write_fastq<W: Write>(mut sink: W, reads: &[Read]) -> Result<()> {
    for read in reads {
        let seq: Vec<u8> = read.seq.iter().map(|b| b.to_ascii()).collect();
        sink.write_all(b"@")?;
        sink.write_all(read.id.as_bytes())?;
        sink.write_all(b"\n")?;
        sink.write_all(&seq)?;
        sink.write_all(b"\n+\n")?;
        match &read.qual {
            Some(q) => sink.write_all(q)?,
            None => sink.write_all(&vec![b'I'; seq.len()])?,
        }
        sink.write_all(b"\n")?;
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SamRecord {
    pub qname: String,
    pub flag: u16,
    pub rname: String,
    /// 1-based; 0 when unmapped.
    pub pos: usize,
    pub mapq: u8,
    pub cigar: String,
    pub rnext: String,
    pub pnext: usize,
    pub tlen: i64,
    pub seq: String,
    pub qual: String,
    pub nm: Option<usize>,
}

pub const FLAG_REVERSE: u16 = 16;
pub const FLAG_UNMAPPED: u16 = 4;

impl SamRecord {
    pub fn mapped(genome: &Genome, read: &Read, m: &Match) -> Result<Self> {
        let contig = genome
            .contigs()
            .get(m.contig)
            .ok_or_else(|| Error::Contract(format!("match on unknown contig {}", m.contig)))?;
        if m.begin < contig.start || m.end > contig.end() {
            return Err(Error::Contract(format!(
                "match [{}, {}) outside contig {}",
                m.begin, m.end, contig.name
            )));
        }
        let seq = m.strand.apply(&read.seq);
        let qual = read.qual.as_ref().map(|q| match m.strand {
            Strand::Forward => q.clone(),
            Strand::Reverse => q.iter().rev().copied().collect(),
        });
        Ok(SamRecord {
            qname: read.id.clone(),
            flag: if m.strand == Strand::Reverse { FLAG_REVERSE } else { 0 },
            rname: contig.name.clone(),
            pos: m.begin - contig.start + 1,
            mapq: 255,
            cigar: m.cigar.clone(),
            rnext: "*".into(),
            pnext: 0,
            tlen: 0,
            seq: crate::seq::to_string(&seq),
            qual: qual.map_or_else(|| "*".into(), |q| String::from_utf8_lossy(&q).into_owned()),
            nm: Some(m.errors),
        })
    }

    pub fn unmapped(read: &Read) -> Self {
        SamRecord {
            qname: read.id.clone(),
            flag: FLAG_UNMAPPED,
            rname: "*".into(),
            pos: 0,
            mapq: 0,
            cigar: "*".into(),
            rnext: "*".into(),
            pnext: 0,
            tlen: 0,
            seq: crate::seq::to_string(&read.seq),
            qual: read
                .qual
                .as_ref()
                .map_or_else(|| "*".into(), |q| String::from_utf8_lossy(q).into_owned()),
            nm: None,
        }
    }

    pub fn to_line(&self) -> String {
        let mut line = format!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            self.qname,
            self.flag,
            self.rname,
            self.pos,
            self.mapq,
            self.cigar,
            self.rnext,
            self.pnext,
            self.tlen,
            self.seq,
            self.qual
        );
        if let Some(nm) = self.nm {
            line.push_str(&format!("\tNM:i:{nm}"));
        }
        line
    }
}

pub fn write_sam_header<W: Write>(sink: &mut W, genome: &Genome) -> Result<()> {
    writeln!(sink, "@HD\tVN:1.6\tSO:unsorted")?;
    for contig in genome.contigs() {
        writeln!(sink, "@SQ\tSN:{}\tLN:{}", contig.name, contig.len)?;
    }
    writeln!(
        sink,
        "@PG\tID:{0}\tPN:{0}\tVN:{1}",
        env!("CARGO_PKG_NAME"),
        env!("CARGO_PKG_VERSION")
    )?;
    Ok(())
}

/// Writes the records of one batch. `sets[i]` must belong to `reads[i]`.
pub fn write_sam_records<W: Write>(
    sink: &mut W,
    genome: &Genome,
    sets: &[MatchSet],
    reads: &[Read],
    report_unmapped: bool,
) -> Result<()> {
    if sets.len() != reads.len() {
        return Err(Error::Contract(format!(
            "{} match sets for {} reads",
            sets.len(),
            reads.len()
        )));
    }
    for (set, read) in sets.iter().zip(reads) {
        if set.matches.is_empty() {
            if report_unmapped {
                writeln!(sink, "{}", SamRecord::unmapped(read).to_line())?;
            }
            continue;
        }
        for m in &set.matches {
            writeln!(sink, "{}", SamRecord::mapped(genome, read, m)?.to_line())?;
        }
    }
    Ok(())
}

/// Header plus records in one call.
pub fn write_sam<W: Write>(
    mut sink: W,
    genome: &Genome,
    sets: &[MatchSet],
    reads: &[Read],
    report_unmapped: bool,
) -> Result<()> {
    write_sam_header(&mut sink, genome)?;
    write_sam_records(&mut sink, genome, sets, reads, report_unmapped)?;
    sink.flush()?;
    Ok(())
}
