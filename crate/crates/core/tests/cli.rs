use std::path::Path;
use std::process::{Command, Output};

use masai_lite::index::EsaIndex;
use masai_lite::io::{write_fasta, write_fastq};
use masai_lite::oracle::{mutate_read, random_genome, EditCounts};
use masai_lite::seq::{encode, reverse_complement, Genome, Nucleotide, Read};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_masai-lite"));
    c.env_remove("MASAI_LITE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn golden(args: &[&str], file: &str) {
    let out = run(args);
    assert_eq!(code(&out), 0);
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(file);
    let want = std::fs::read_to_string(&path).unwrap();
    assert_eq!(String::from_utf8(out.stdout).unwrap(), want, "help text drifted from {}", path.display());
}

#[test]
fn help_matches_golden_files() {
    golden(&["--help"], "help.txt");
    golden(&["index", "--help"], "help_index.txt");
    golden(&["map", "--help"], "help_map.txt");
    golden(&["bench", "--help"], "help_bench.txt");
}

#[test]
fn map_help_lists_every_flag() {
    let help = String::from_utf8(run(&["map", "--help"]).stdout).unwrap();
    for flag in [
        "--index", "--reads", "--output", "--errors", "--error-rate", "--seeds", "--seed-length",
        "--seed-errors", "--mode", "--no-indels", "--threads", "--batch-size", "--report-unmapped",
    ] {
        assert!(help.contains(flag), "{flag}");
    }
}

struct Fixture {
    dir: tempfile::TempDir,
    genome: Genome,
}

impl Fixture {
    fn new() -> Fixture {
        let dir = tempfile::tempdir().unwrap();
        let a = random_genome(3000, 1);
        let b = random_genome(2000, 2);
        let genome = Genome::from_contigs([("chrA", a.text().to_vec()), ("chrB", b.text().to_vec())]);
        write_fasta(std::fs::File::create(dir.path().join("g.fa")).unwrap(), &genome, 60).unwrap();
        let out = run(&["index", &p(&dir, "g.fa"), &p(&dir, "g.idx")]);
        assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
        Fixture { dir, genome }
    }

    fn path(&self, name: &str) -> String {
        p(&self.dir, name)
    }

    fn reads(&self, name: &str, reads: &[Read]) -> String {
        write_fastq(std::fs::File::create(self.dir.path().join(name)).unwrap(), reads).unwrap();
        self.path(name)
    }

    fn map(&self, reads: &str, extra: &[&str]) -> (i32, String, String) {
        let idx = self.path("g.idx");
        let mut args = vec!["map", "--index", &idx, "--reads", reads];
        args.extend_from_slice(extra);
        let out = run(&args);
        (
            code(&out),
            String::from_utf8(out.stdout).unwrap(),
            String::from_utf8(out.stderr).unwrap(),
        )
    }
}

fn p(dir: &tempfile::TempDir, name: &str) -> String {
    dir.path().join(name).to_str().unwrap().to_string()
}

fn records(sam: &str) -> Vec<Vec<&str>> {
    sam.lines().filter(|l| !l.starts_with('@')).map(|l| l.split('\t').collect()).collect()
}

fn edit_distance(a: &[Nucleotide], b: &[Nucleotide]) -> usize {
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
}

fn ref_span(cigar: &str) -> usize {
    let mut n = 0;
    let mut span = 0;
    for c in cigar.chars() {
        if let Some(d) = c.to_digit(10) {
            n = n * 10 + d as usize;
        } else {
            if c == 'M' || c == 'D' {
                span += n;
            }
            n = 0;
        }
    }
    span
}

fn substitute(seq: &[Nucleotide], positions: &[usize]) -> Vec<Nucleotide> {
    let mut s = seq.to_vec();
    for &p in positions {
        s[p] = if s[p] == Nucleotide::A { Nucleotide::C } else { Nucleotide::A };
    }
    s
}

#[test]
fn index_exit_codes() {
    let fx = Fixture::new();
    let index = EsaIndex::load_from_path(fx.path("g.idx")).unwrap();
    assert_eq!(index.genome(), &fx.genome);

    assert_eq!(code(&run(&["index", &fx.path("missing.fa"), &fx.path("x.idx")])), 2);
    std::fs::write(fx.path("empty.fa"), "").unwrap();
    assert_eq!(code(&run(&["index", &fx.path("empty.fa"), &fx.path("x.idx")])), 2);
    std::fs::write(fx.path("bare.fa"), ">c\n").unwrap();
    assert_eq!(code(&run(&["index", &fx.path("bare.fa"), &fx.path("x.idx")])), 2);
    assert_eq!(code(&run(&["index", &fx.path("g.fa")])), 1);
}

#[test]
fn map_usage_errors() {
    let fx = Fixture::new();
    let reads = fx.reads("r.fq", &[]);
    assert_eq!(fx.map(&reads, &[]).0, 1);
    assert_eq!(fx.map(&reads, &["--errors", "2", "--error-rate", "5"]).0, 1);
    assert_eq!(fx.map(&reads, &["--errors", "2", "--threads", "0"]).0, 1);
    assert_eq!(fx.map(&reads, &["--errors", "2", "--mode", "best"]).0, 1);
    let (c, sam, _) = fx.map(&reads, &["--errors", "2"]);
    assert_eq!(c, 0);
    assert_eq!(records(&sam).len(), 0);
    assert!(sam.starts_with("@HD\tVN:1.6\tSO:unsorted\n@SQ\tSN:chrA\tLN:3000\n@SQ\tSN:chrB\tLN:2000\n@PG"));
}

#[test]
fn map_rejects_bad_inputs() {
    let fx = Fixture::new();
    std::fs::write(fx.path("bad.fq"), "@r1\nACGT\n+\nII\n").unwrap();
    assert_eq!(fx.map(&fx.path("bad.fq"), &["--errors", "1"]).0, 2);
    assert_eq!(fx.map(&fx.path("none.fq"), &["--errors", "1"]).0, 2);

    let mut bytes = std::fs::read(fx.path("g.idx")).unwrap();
    bytes[4] = 99;
    std::fs::write(fx.path("g.idx"), bytes).unwrap();
    let reads = fx.reads("r.fq", &[]);
    assert_eq!(fx.map(&reads, &["--errors", "1"]).0, 2);
}

#[test]
fn error_rate_gives_five_errors_on_100bp() {
    let fx = Fixture::new();
    let window = &fx.genome.text()[500..600];
    let five = Read::new("five", substitute(window, &[5, 25, 45, 65, 85]), None).unwrap();
    let six = Read::new("six", substitute(window, &[5, 20, 35, 50, 65, 85]), None).unwrap();
    let reads = fx.reads("r.fq", &[five, six]);
    let (c, sam, stderr) = fx.map(&reads, &["--error-rate", "5"]);
    assert_eq!(c, 0, "{stderr}");
    let recs = records(&sam);
    assert!(recs.iter().any(|r| r[0] == "five" && r[2] == "chrA" && r[3] == "501" && r[11] == "NM:i:5"));
    assert!(recs.iter().all(|r| r[0] != "six"));
    assert!(stderr.contains("reads: 2"), "{stderr}");
}

#[test]
fn sam_records_are_consistent() {
    let fx = Fixture::new();
    let text = fx.genome.text();
    let mut reads = Vec::new();
    for i in 0..40usize {
        let begin = 37 + i * 120;
        let window = &text[begin..begin + 80];
        let edits = EditCounts { subs: i % 2, ins: i % 3 / 2, dels: usize::from(i % 5 == 0) };
        let mut seq = mutate_read(window, edits, i as u64);
        if i % 2 == 1 {
            seq = reverse_complement(&seq);
        }
        let qual: Vec<u8> = (0..seq.len()).map(|j| b'!' + (j % 40) as u8).collect();
        reads.push(Read::new(format!("r{i}"), seq, Some(qual)).unwrap());
    }
    let path = fx.reads("r.fq", &reads);
    let (c, sam, _) = fx.map(&path, &["--errors", "3", "--report-unmapped"]);
    assert_eq!(c, 0);
    let recs = records(&sam);
    let mut order = Vec::new();
    for r in &recs {
        let flag: u16 = r[1].parse().unwrap();
        let read = reads.iter().find(|x| x.id == r[0]).unwrap();
        order.push(reads.iter().position(|x| x.id == r[0]).unwrap());
        if flag == 4 {
            continue;
        }
        let (seq, qual) = if flag == 16 {
            let mut q = read.qual.clone().unwrap();
            q.reverse();
            (reverse_complement(&read.seq), q)
        } else {
            assert_eq!(flag, 0);
            (read.seq.clone(), read.qual.clone().unwrap())
        };
        assert_eq!(encode(r[9].as_bytes()).0, seq);
        assert_eq!(r[10].as_bytes(), qual.as_slice());
        assert_eq!(r[4], "255");
        let contig = fx.genome.contigs().iter().find(|c| c.name == r[2]).unwrap();
        let pos: usize = r[3].parse().unwrap();
        let start = contig.start + pos - 1;
        let window = &text[start..start + ref_span(r[5])];
        let nm: usize = r[11].strip_prefix("NM:i:").unwrap().parse().unwrap();
        assert_eq!(nm, edit_distance(&seq, window), "{}", r.join("\t"));
    }
    assert!(order.windows(2).all(|w| w[0] <= w[1]), "records follow input order");
    for i in 0..40 {
        assert!(order.contains(&i), "read r{i} missing");
    }
}

#[test]
fn any_best_reports_at_most_one_record() {
    let fx = Fixture::new();
    let text = fx.genome.text();
    // short reads at a generous threshold have several locations each
    let reads: Vec<Read> = (0..20)
        .map(|i| Read::new(format!("r{i}"), text[i * 200..i * 200 + 12].to_vec(), None).unwrap())
        .collect();
    let path = fx.reads("r.fq", &reads);
    let (c, all, _) = fx.map(&path, &["--errors", "3"]);
    assert_eq!(c, 0);
    assert!(records(&all).len() > reads.len());
    let (c, sam, _) = fx.map(&path, &["--errors", "3", "--mode", "any-best"]);
    assert_eq!(c, 0);
    let recs = records(&sam);
    for r in &reads {
        assert_eq!(recs.iter().filter(|x| x[0] == r.id).count(), 1, "{}", r.id);
    }
    assert!(recs.iter().all(|r| r[11] == "NM:i:0"), "{sam}\n{all}");
}

#[test]
fn threads_from_environment() {
    let fx = Fixture::new();
    let reads: Vec<Read> = (0..30)
        .map(|i| Read::new(format!("r{i}"), fx.genome.text()[i * 150..i * 150 + 70].to_vec(), None).unwrap())
        .collect();
    let path = fx.reads("r.fq", &reads);
    let (_, one, _) = fx.map(&path, &["--errors", "3"]);
    let idx = fx.path("g.idx");
    let out = bin()
        .env("MASAI_LITE_THREADS", "3")
        .args(["map", "--errors", "3", "--batch-size", "7", "--index", &idx, "--reads", &path])
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), one);
    let out = bin()
        .env("MASAI_LITE_THREADS", "0")
        .args(["map", "--errors", "3", "--index", &idx, "--reads", &path])
        .output()
        .unwrap();
    assert_eq!(code(&out), 1);
}

#[test]
fn bench_reports_and_checks_thresholds() {
    let fx = Fixture::new();
    let g = fx.path("g.fa");
    let idx = fx.path("g.idx");
    let out = run(&["bench", &g, "--index", &idx, "--reads", "60", "--read-length", "60", "--errors", "3",
        "--max-edits", "3", "--min-all", "100", "--min-any-best", "100"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let tsv = String::from_utf8(out.stdout).unwrap();
    assert!(tsv.starts_with("stratum\toracle_locations"));
    let total: Vec<&str> = tsv.lines().last().unwrap().split('\t').collect();
    assert_eq!(total[0], "total");
    assert_eq!(total[3], "100.00");

    let out = run(&["bench", &g, "--reads", "20", "--read-length", "60", "--errors", "2", "--min-recall", "100.5"]);
    assert_eq!(code(&out), 4);

    // index of another reference
    std::fs::write(fx.path("other.fa"), ">x\nACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTACGTAC\n").unwrap();
    let out = run(&["bench", &fx.path("other.fa"), "--index", &idx, "--reads", "5", "--read-length", "20"]);
    assert_eq!(code(&out), 2);
}
