//! Command-line frontend: `index`, `map` and `bench`.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::filter::StrategyOverride;
use crate::index::EsaIndex;
use crate::io::{read_fasta, read_fastq, write_sam_header, write_sam_records};
use crate::mapper::{ErrorLimit, Mapper, MapperConfig, MappingMode};
use crate::oracle::{evaluate, oracle_map, simulate_reads, EvalReport};
use crate::seq::Read;

/// Exit status for a bench run that misses one of its thresholds.
pub const EXIT_THRESHOLD: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "masai-lite", version, about = "Full-sensitivity approximate read mapper")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Build a suffix array index of a FASTA reference.
    Index(IndexArgs),
    /// Map FASTQ reads against an index and write SAM.
    Map(MapArgs),
    /// Simulate reads from a reference and score the mapper against brute force.
    Bench(BenchArgs),
}

#[derive(Debug, Args)]
pub struct IndexArgs {
    /// Reference FASTA.
    pub genome: PathBuf,
    /// Output index file.
    pub output: PathBuf,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    All,
    AllBest,
    AnyBest,
}

impl From<ModeArg> for MappingMode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::All => MappingMode::All,
            ModeArg::AllBest => MappingMode::AllBest,
            ModeArg::AnyBest => MappingMode::AnyBest,
        }
    }
}

#[derive(Debug, Args)]
pub struct SeedArgs {
    /// Number of seeds per read.
    #[arg(long)]
    pub seeds: Option<usize>,
    /// Seed length; the seed count follows from the read length.
    #[arg(long, value_name = "LEN")]
    pub seed_length: Option<usize>,
    /// Errors allowed per seed.
    #[arg(long, value_name = "E")]
    pub seed_errors: Option<usize>,
}

impl SeedArgs {
    fn to_override(&self) -> StrategyOverride {
        StrategyOverride {
            seeds: self.seeds,
            seed_len: self.seed_length,
            seed_errors: self.seed_errors,
        }
    }
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct ThresholdArgs {
    /// Absolute number of errors per read.
    #[arg(short = 'e', long, value_name = "K")]
    pub errors: Option<usize>,
    /// Errors as a percentage of the read length, rounded down.
    #[arg(long, value_name = "PERCENT")]
    pub error_rate: Option<f64>,
}

impl ThresholdArgs {
    fn limit(&self) -> ErrorLimit {
        match (self.errors, self.error_rate) {
            (Some(k), _) => ErrorLimit::Absolute(k),
            (None, Some(r)) => ErrorLimit::Rate(r),
            (None, None) => unreachable!("clap enforces the group"),
        }
    }
}

#[derive(Debug, Args)]
pub struct MapArgs {
    /// Index built by `index`.
    #[arg(long, short = 'x')]
    pub index: PathBuf,
    /// FASTQ reads.
    #[arg(long, short = 'r')]
    pub reads: PathBuf,
    /// SAM output; standard output when omitted.
    #[arg(long, short = 'o')]
    pub output: Option<PathBuf>,
    #[command(flatten)]
    pub threshold: ThresholdArgs,
    #[command(flatten)]
    pub seeding: SeedArgs,
    /// Which locations to report per read.
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    pub mode: ModeArg,
    /// Only consider mismatches during verification.
    #[arg(long)]
    pub no_indels: bool,
    /// Worker threads.
    #[arg(long, short = 't', env = "MASAI_LITE_THREADS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Reads per pattern trie.
    #[arg(long, default_value_t = 100_000, value_parser = clap::value_parser!(u64).range(1..))]
    pub batch_size: u64,
    /// Emit unmapped reads as flag-4 records.
    #[arg(long)]
    pub report_unmapped: bool,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Reference FASTA reads are simulated from.
    pub genome: PathBuf,
    /// Prebuilt index of the same reference.
    #[arg(long, short = 'x')]
    pub index: Option<PathBuf>,
    /// Number of simulated reads.
    #[arg(long, default_value_t = 1000)]
    pub reads: usize,
    /// Length of simulated reads.
    #[arg(long, default_value_t = 100)]
    pub read_length: usize,
    /// Maximum planted edits per read.
    #[arg(long, default_value_t = 5)]
    pub max_edits: usize,
    /// Errors allowed when mapping.
    #[arg(short = 'e', long, default_value_t = 5)]
    pub errors: usize,
    /// Random seed for the simulator.
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub seeding: SeedArgs,
    /// Which locations to report per read.
    #[arg(long, value_enum, default_value_t = ModeArg::All)]
    pub mode: ModeArg,
    /// Worker threads.
    #[arg(long, short = 't', env = "MASAI_LITE_THREADS", default_value_t = 1,
          value_parser = clap::value_parser!(u32).range(1..))]
    pub threads: u32,
    /// Distance from the simulated origin that still counts for recall.
    #[arg(long, default_value_t = 10)]
    pub window: usize,
    /// Minimum overall all-score (percent).
    #[arg(long)]
    pub min_all: Option<f64>,
    /// Minimum overall all-best score (percent).
    #[arg(long)]
    pub min_all_best: Option<f64>,
    /// Minimum overall any-best score (percent).
    #[arg(long)]
    pub min_any_best: Option<f64>,
    /// Minimum recall (percent).
    #[arg(long)]
    pub min_recall: Option<f64>,
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    let result = match cli.command {
        Command::Index(a) => cmd_index(&a),
        Command::Map(a) => cmd_map(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("masai-lite: {e}");
            e.exit_code()
        }
    }
}

fn open(path: &Path) -> Result<BufReader<File>> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| Error::Io(io::Error::new(e.kind(), format!("{}: {e}", path.display()))))
}

fn load_genome(path: &Path) -> Result<crate::seq::Genome> {
    let genome = read_fasta(open(path)?)?;
    if genome.is_empty() {
        return Err(Error::Format(format!("{}: reference has no bases", path.display())));
    }
    Ok(genome)
}

pub fn cmd_index(args: &IndexArgs) -> Result<i32> {
    let start = Instant::now();
    let genome = load_genome(&args.genome)?;
    let contigs = genome.contigs().len();
    let index = EsaIndex::build(genome)?;
    let built = start.elapsed();
    index.save_to_path(&args.output)?;
    println!(
        "indexed {} bases in {} contigs, built in {:.3}s",
        index.len(),
        contigs,
        built.as_secs_f64()
    );
    Ok(0)
}

pub fn cmd_map(args: &MapArgs) -> Result<i32> {
    let start = Instant::now();
    let index = EsaIndex::load_from_path(&args.index)?;
    let config = MapperConfig {
        errors: args.threshold.limit(),
        strategy: args.seeding.to_override(),
        mode: args.mode.into(),
        indels: !args.no_indels,
        batch_size: args.batch_size as usize,
        threads: args.threads as usize,
        report_unmapped: args.report_unmapped,
    };
    let mapper = Mapper::new(&index, config)?;
    let mut sink: Box<dyn Write> = match &args.output {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    write_sam_header(&mut sink, index.genome())?;

    let chunk_len = (args.batch_size as usize).saturating_mul(args.threads as usize);
    let mut fastq = read_fastq(open(&args.reads)?);
    let mut chunk: Vec<Read> = Vec::new();
    let mut first = 0usize;
    let mut reads = 0usize;
    let mut mapped = 0usize;
    let mut locations = 0usize;
    loop {
        chunk.clear();
        for read in fastq.by_ref().take(chunk_len) {
            chunk.push(read?);
        }
        if chunk.is_empty() {
            break;
        }
        let out = mapper.map_reads(&chunk, first)?;
        write_sam_records(&mut sink, index.genome(), &out.sets, &chunk, args.report_unmapped)?;
        reads += out.stats.reads;
        mapped += out.stats.mapped;
        locations += out.stats.locations;
        info!(
            "reads {}..{}: {} candidates, {} verifications",
            first,
            first + chunk.len(),
            out.stats.candidates,
            out.stats.verifications
        );
        first += chunk.len();
    }
    sink.flush()?;
    if fastq.invalid_bases() > 0 {
        log::warn!("replaced {} non-ACGTN read characters with N", fastq.invalid_bases());
    }
    let pct = if reads == 0 { 0.0 } else { 100.0 * mapped as f64 / reads as f64 };
    eprintln!(
        "reads: {reads}\tmapped: {mapped} ({pct:.2}%)\tlocations: {locations}\ttime: {:.3}s",
        start.elapsed().as_secs_f64()
    );
    Ok(0)
}

/// Runs mapper and oracle on the same simulated corpus.
pub fn bench_report(args: &BenchArgs) -> Result<EvalReport> {
    let genome = load_genome(&args.genome)?;
    let index = match &args.index {
        Some(p) => {
            let index = EsaIndex::load_from_path(p)?;
            if index.text() != genome.text() {
                return Err(Error::Input(format!(
                    "index {} was not built from {}",
                    p.display(),
                    args.genome.display()
                )));
            }
            index
        }
        None => EsaIndex::build(genome)?,
    };
    let sim = simulate_reads(index.genome(), args.reads, args.read_length, args.max_edits, args.seed)?;
    let (reads, origins): (Vec<Read>, Vec<_>) = sim.into_iter().unzip();

    let config = MapperConfig {
        errors: ErrorLimit::Absolute(args.errors),
        strategy: args.seeding.to_override(),
        mode: args.mode.into(),
        threads: args.threads as usize,
        ..MapperConfig::default()
    };
    let t = Instant::now();
    let mapper = Mapper::new(&index, config)?;
    let out = mapper.map_reads(&reads, 0)?;
    let map_time = t.elapsed();

    let t = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.threads as usize)
        .build()
        .map_err(|e| Error::Contract(format!("cannot start worker pool: {e}")))?;
    let oracle: Vec<_> = pool.install(|| {
        reads
            .par_iter()
            .enumerate()
            .map(|(i, r)| oracle_map(index.genome(), i, &r.seq, args.errors))
            .collect()
    });
    eprintln!(
        "mapped {} reads in {:.3}s, oracle took {:.3}s",
        reads.len(),
        map_time.as_secs_f64(),
        t.elapsed().as_secs_f64()
    );
    evaluate(&out.sets, &oracle, &origins, args.window)
}

pub fn cmd_bench(args: &BenchArgs) -> Result<i32> {
    let report = bench_report(args)?;
    print!("{}", report.to_tsv());
    let total = &report.total;
    let checks = [
        ("all", args.min_all, total.all_pct()),
        ("all-best", args.min_all_best, total.all_best_pct()),
        ("any-best", args.min_any_best, total.any_best_pct()),
        ("recall", args.min_recall, total.recall_pct()),
    ];
    let mut code = 0;
    for (name, min, got) in checks {
        if let (Some(min), Some(got)) = (min, got) {
            if got < min {
                eprintln!("masai-lite: {name} score {got:.2}% below threshold {min:.2}%");
                code = EXIT_THRESHOLD;
            }
        }
    }
    Ok(code)
}
