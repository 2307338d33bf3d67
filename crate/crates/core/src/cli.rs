//! Command implementations behind the `pfxc` binary.
//!
//! The report builders ([`stats`], [`bench`], [`limit_study`]) are plain
//! functions so they can be used without going through argument parsing.

use std::fmt::Write as _;
use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};

use crate::alphabetic::hu_tucker_lengths;
use crate::codecs::{
    model_size_report, AdditiveBackend, CodecModel, CodecParams, Scheme, SearchStrategy, SymbolCodec,
    DEFAULT_PREFIX_BITS, DEFAULT_SAMPLING,
};
use crate::codes::{avg_length, huffman_lengths, CodeLengths};
use crate::corpus::{self, entropy, frequencies, FrequencyTable, InputFormat, SymbolSequence};
use crate::limited::{limit_lengths, min_limit, LimitAlgorithm};
use crate::{container, Error, Result};

/// Process exit codes.
pub mod exit {
    pub const OK: i32 = 0;
    pub const USAGE: i32 = 1;
    pub const DATA: i32 = 2;
    pub const IO: i32 = 3;
}

#[derive(Debug, Parser)]
#[command(name = "pfxc", version, about = "Build, store and benchmark compact prefix codes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input file, `-` for stdin.
    #[arg(default_value = "-")]
    pub input: String,
    /// Input encoding.
    #[arg(long, default_value = "u32", value_parser = parse_format)]
    pub format: InputFormat,
}

#[derive(Debug, Args)]
pub struct CodecArgs {
    /// compact, table, table-s, table-e, additive, additive-table, mult, alphabetic.
    #[arg(long, default_value = "compact", value_parser = parse_scheme)]
    pub scheme: Scheme,
    /// Additive approximation bound, in (0, 1/2).
    #[arg(long, default_value_t = 0.1)]
    pub epsilon: f64,
    /// Multiplicative approximation factor, above 1.
    #[arg(long, default_value_t = 2.0)]
    pub c: f64,
    /// Explicit length limit for the additive scheme.
    #[arg(long)]
    pub lmax: Option<u32>,
    /// Prefix width of the decoding tables.
    #[arg(long = "b", default_value_t = DEFAULT_PREFIX_BITS)]
    pub prefix_bits: u32,
    /// Select sampling period of the wavelet tree bitvectors.
    #[arg(long, default_value_t = DEFAULT_SAMPLING)]
    pub select_sampling: u32,
    /// Length detection: seq or bin.
    #[arg(long, default_value = "seq", value_parser = parse_search)]
    pub search: SearchStrategy,
    /// Length limiter of the additive scheme: milidiu or optimal.
    #[arg(long, default_value = "milidiu", value_parser = parse_backend)]
    pub backend: AdditiveBackend,
}

impl CodecArgs {
    pub fn params(&self) -> CodecParams {
        CodecParams {
            epsilon: self.epsilon,
            c: self.c,
            lmax: self.lmax,
            prefix_bits: self.prefix_bits,
            sampling: self.select_sampling,
            search: self.search,
            backend: self.backend,
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Print length, alphabet size, entropy, Huffman depth and level entropy.
    Stats {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Encode a symbol stream into a PFXC container.
    Compress {
        #[command(flatten)]
        input: InputArgs,
        #[command(flatten)]
        codec: CodecArgs,
        /// Output file, stdout if absent.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Restore the raw symbol stream from a container.
    Decompress {
        /// Container file, `-` for stdin.
        #[arg(default_value = "-")]
        input: String,
        /// Output encoding.
        #[arg(long, default_value = "u32", value_parser = parse_format)]
        format: InputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Measure model sizes and coding speed over a grid of schemes, as CSV.
    Bench {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// Schemes to run.
        #[arg(long, value_delimiter = ',', value_parser = parse_scheme,
              default_value = "compact,table,table-s,table-e,additive,mult,alphabetic")]
        scheme: Vec<Scheme>,
        /// Additive bounds.
        #[arg(long, value_delimiter = ',', default_value = "0.1")]
        epsilon: Vec<f64>,
        /// Additive length limits, e.g. `22..27`; overrides `--epsilon`.
        #[arg(long, value_parser = parse_range)]
        lmax: Option<(u32, u32)>,
        /// Multiplicative factors.
        #[arg(long, value_delimiter = ',', default_value = "2")]
        c: Vec<f64>,
        #[arg(long = "b", default_value_t = DEFAULT_PREFIX_BITS)]
        prefix_bits: u32,
        /// Select sampling periods for the compact schemes.
        #[arg(long, value_delimiter = ',', default_value = "32")]
        select_sampling: Vec<u32>,
        #[arg(long, default_value = "seq", value_parser = parse_search)]
        search: SearchStrategy,
        /// Timed repetitions per configuration; the median is reported.
        #[arg(long, default_value_t = 5, value_parser = clap::value_parser!(u32).range(5..))]
        runs: u32,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Redundancy of each length-limiting algorithm per length limit, as CSV.
    LimitLengths {
        #[command(flatten)]
        corpus: CorpusArgs,
        /// optimal, milidiu, increase, increase-a, balance or all.
        #[arg(long, default_value = "all")]
        algo: String,
        /// A single limit or a range `a..b`; defaults to `⌈lg n⌉` up to the Huffman depth.
        #[arg(long, value_parser = parse_range)]
        lmax: Option<(u32, u32)>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Write an i.i.d. Zipf-distributed symbol stream.
    GenZipf {
        /// Alphabet size.
        #[arg(long)]
        n: usize,
        /// Number of symbols.
        #[arg(long)]
        len: usize,
        /// Zipf exponent.
        #[arg(long, default_value_t = 1.1)]
        s: f64,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value = "u32", value_parser = parse_format)]
        format: InputFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
}

/// A corpus given either as a file or as Zipf parameters.
#[derive(Debug, Args)]
pub struct CorpusArgs {
    /// Input file; omit to generate a Zipf corpus.
    pub input: Option<String>,
    #[arg(long, default_value = "u32", value_parser = parse_format)]
    pub format: InputFormat,
    /// Alphabet size of the generated corpus.
    #[arg(long, default_value_t = 65536)]
    pub zipf_n: usize,
    /// Length of the generated corpus.
    #[arg(long, default_value_t = 1_000_000)]
    pub zipf_len: usize,
    /// Exponent of the generated corpus.
    #[arg(long, default_value_t = 1.1)]
    pub zipf_s: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

impl CorpusArgs {
    fn load(&self) -> Result<SymbolSequence> {
        match &self.input {
            Some(path) => corpus::ingest(&read_input(path)?, self.format),
            None => corpus::zipf_generate(self.zipf_n, self.zipf_len, self.zipf_s, self.seed),
        }
    }
}

fn parse_format(s: &str) -> std::result::Result<InputFormat, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_scheme(s: &str) -> std::result::Result<Scheme, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_search(s: &str) -> std::result::Result<SearchStrategy, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn parse_backend(s: &str) -> std::result::Result<AdditiveBackend, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// `k` or `a..b` (inclusive).
fn parse_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let num = |t: &str| t.trim().parse::<u32>().map_err(|e| format!("{t:?}: {e}"));
    let (a, b) = match s.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.trim_start_matches('='))?),
        None => {
            let k = num(s)?;
            (k, k)
        }
    };
    if a > b {
        return Err(format!("empty range {s}"));
    }
    Ok((a, b))
}

fn read_input(path: &str) -> Result<Vec<u8>> {
    if path == "-" {
        let mut buf = Vec::new();
        io::stdin().read_to_end(&mut buf)?;
        Ok(buf)
    } else {
        Ok(fs::read(path)?)
    }
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<()> {
    match path {
        Some(p) => fs::write(p, bytes)?,
        None => {
            let mut out = io::stdout().lock();
            out.write_all(bytes)?;
            out.flush()?;
        }
    }
    Ok(())
}

/// Corpus statistics.
#[derive(Debug, Clone, PartialEq)]
pub struct Stats {
    pub len: usize,
    pub alphabet: usize,
    pub entropy: f64,
    pub huffman_depth: u8,
    pub level_entropy: f64,
}

impl std::fmt::Display for Stats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "length N           {}", self.len)?;
        writeln!(f, "alphabet n         {}", self.alphabet)?;
        writeln!(f, "entropy H(P)       {:.4}", self.entropy)?;
        writeln!(f, "huffman lmax       {}", self.huffman_depth)?;
        writeln!(f, "level entropy H0   {:.4}", self.level_entropy)
    }
}

pub fn stats(seq: &SymbolSequence) -> Stats {
    let freq = frequencies(seq);
    let lengths = huffman_lengths(&freq);
    Stats {
        len: seq.len(),
        alphabet: seq.alphabet_size(),
        entropy: entropy(&freq),
        huffman_depth: lengths.lmax(),
        level_entropy: lengths.level_entropy(),
    }
}

/// One benchmark configuration and its measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchRow {
    pub scheme: String,
    pub epsilon: Option<f64>,
    pub c: Option<f64>,
    pub lmax: u32,
    pub prefix_bits: Option<u32>,
    pub sampling: Option<u32>,
    pub serialized_bits: u64,
    pub encode_struct_bits: u64,
    pub decode_struct_bits: u64,
    pub payload_bps: f64,
    pub avg_length: f64,
    pub entropy: f64,
    pub ratio: f64,
    pub encode_ns: f64,
    pub decode_ns: f64,
}

pub const BENCH_HEADER: &str = "scheme,epsilon,c,lmax,b,s_sel,model_bits,encode_struct_bits,decode_struct_bits,\
payload_bps,avg_length,entropy,ratio,encode_ns_per_symbol,decode_ns_per_symbol";

impl BenchRow {
    pub fn csv(&self) -> String {
        fn opt<T: std::fmt::Display>(v: Option<T>) -> String {
            v.map_or(String::new(), |x| x.to_string())
        }
        format!(
            "{},{},{},{},{},{},{},{},{},{:.6},{:.6},{:.6},{:.6},{:.3},{:.3}",
            self.scheme,
            opt(self.epsilon),
            opt(self.c),
            self.lmax,
            opt(self.prefix_bits),
            opt(self.sampling),
            self.serialized_bits,
            self.encode_struct_bits,
            self.decode_struct_bits,
            self.payload_bps,
            self.avg_length,
            self.entropy,
            self.ratio,
            self.encode_ns,
            self.decode_ns
        )
    }
}

/// Grid of configurations for [`bench`].
#[derive(Debug, Clone)]
pub struct BenchGrid {
    pub schemes: Vec<Scheme>,
    pub epsilons: Vec<f64>,
    pub lmax: Option<(u32, u32)>,
    pub cs: Vec<f64>,
    pub prefix_bits: u32,
    pub samplings: Vec<u32>,
    pub search: SearchStrategy,
    pub runs: u32,
}

impl Default for BenchGrid {
    fn default() -> Self {
        BenchGrid {
            schemes: vec![Scheme::Compact, Scheme::Table(Default::default())],
            epsilons: vec![0.1],
            lmax: None,
            cs: vec![2.0],
            prefix_bits: DEFAULT_PREFIX_BITS,
            samplings: vec![DEFAULT_SAMPLING],
            search: SearchStrategy::Sequential,
            runs: 5,
        }
    }
}

fn median_ns(runs: u32, per: usize, mut f: impl FnMut() -> Result<()>) -> Result<f64> {
    let mut t = Vec::with_capacity(runs as usize);
    for _ in 0..runs {
        let start = Instant::now();
        f()?;
        t.push(start.elapsed().as_nanos() as f64 / per as f64);
    }
    t.sort_by(|a, b| a.total_cmp(b));
    Ok(t[t.len() / 2])
}

/// Builds, times and sizes every configuration of `grid` on `seq`.
pub fn bench(seq: &SymbolSequence, grid: &BenchGrid) -> Result<Vec<BenchRow>> {
    let freq = frequencies(seq);
    let h = entropy(&freq);
    let mut rows = Vec::new();
    for &scheme in &grid.schemes {
        // (epsilon, c, explicit lmax, sampling) per row.
        let mut configs: Vec<(Option<f64>, Option<f64>, Option<u32>, Option<u32>)> = Vec::new();
        let samplings: Vec<Option<u32>> = grid.samplings.iter().map(|&s| Some(s)).collect();
        match scheme {
            Scheme::Compact => configs.extend(samplings.iter().map(|&s| (None, None, None, s))),
            Scheme::Additive | Scheme::AdditiveTable => {
                let sam = if scheme == Scheme::Additive { samplings.clone() } else { vec![None] };
                for s in sam {
                    match grid.lmax {
                        Some((a, b)) => configs.extend((a..=b).map(|l| (None, None, Some(l), s))),
                        None => configs.extend(grid.epsilons.iter().map(|&e| (Some(e), None, None, s))),
                    }
                }
            }
            Scheme::Multiplicative => {
                for &s in &samplings {
                    configs.extend(grid.cs.iter().map(|&c| (None, Some(c), None, s)));
                }
            }
            Scheme::Table(_) | Scheme::Alphabetic => configs.push((None, None, None, None)),
        }
        for (epsilon, c, lmax, sampling) in configs {
            let params = CodecParams {
                epsilon: epsilon.unwrap_or(0.1),
                c: c.unwrap_or(2.0),
                lmax,
                prefix_bits: grid.prefix_bits,
                sampling: sampling.unwrap_or(DEFAULT_SAMPLING),
                search: grid.search,
                backend: AdditiveBackend::Milidiu,
            };
            let model = CodecModel::build(&freq, scheme, &params)?;
            rows.push(measure(seq, &freq, h, scheme, &model, epsilon, c, sampling, grid)?);
        }
    }
    Ok(rows)
}

#[allow(clippy::too_many_arguments)]
fn measure(
    seq: &SymbolSequence,
    freq: &FrequencyTable,
    h: f64,
    scheme: Scheme,
    model: &CodecModel,
    epsilon: Option<f64>,
    c: Option<f64>,
    sampling: Option<u32>,
    grid: &BenchGrid,
) -> Result<BenchRow> {
    let symbols = seq.symbols();
    let (bytes, bits) = model.encode_all(symbols)?;
    if model.decode_all(&bytes, bits, symbols.len())? != symbols {
        return Err(Error::CorruptStream("benchmark roundtrip mismatch"));
    }
    let encode_ns = median_ns(grid.runs, symbols.len(), || model.encode_all(symbols).map(drop))?;
    let decode_ns = median_ns(grid.runs, symbols.len(), || {
        model.decode_all(&bytes, bits, symbols.len()).map(drop)
    })?;
    let size = model_size_report(model);
    let lengths = CodeLengths::new(model.codeword_lengths())?;
    let avg = avg_length(&lengths, freq);
    let table = matches!(scheme, Scheme::Table(_) | Scheme::AdditiveTable);
    Ok(BenchRow {
        scheme: scheme.to_string(),
        epsilon,
        c,
        lmax: size.lmax,
        prefix_bits: table.then_some(grid.prefix_bits),
        sampling,
        serialized_bits: size.serialized,
        encode_struct_bits: size.encode,
        decode_struct_bits: size.decode,
        payload_bps: bits as f64 / symbols.len() as f64,
        avg_length: avg,
        entropy: h,
        ratio: if h > 0.0 { avg / h } else { f64::INFINITY },
        encode_ns,
        decode_ns,
    })
}

/// One point of the redundancy-versus-limit study.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitRow {
    pub algo: String,
    pub lmax: u32,
    pub avg_length: f64,
    pub entropy: f64,
    pub redundancy: f64,
    /// `(length, symbols)` pairs of the produced code.
    pub histogram: Vec<(u8, u64)>,
}

pub const LIMIT_HEADER: &str = "algo,lmax,avg_length,entropy,redundancy,histogram";

impl LimitRow {
    fn new(algo: &str, lmax: u32, lengths: &CodeLengths, freq: &FrequencyTable, h: f64) -> Self {
        let avg = avg_length(lengths, freq);
        let histogram = lengths
            .histogram()
            .iter()
            .enumerate()
            .filter(|&(_, &c)| c > 0)
            .map(|(l, &c)| (l as u8, c))
            .collect();
        LimitRow {
            algo: algo.to_string(),
            lmax,
            avg_length: avg,
            entropy: h,
            redundancy: avg - h,
            histogram,
        }
    }

    pub fn csv(&self) -> String {
        let mut hist = String::new();
        for (i, (l, c)) in self.histogram.iter().enumerate() {
            if i > 0 {
                hist.push(' ');
            }
            let _ = write!(hist, "{l}:{c}");
        }
        format!(
            "{},{},{:.6},{:.6},{:.6},{}",
            self.algo, self.lmax, self.avg_length, self.entropy, self.redundancy, hist
        )
    }
}

/// Redundancy of each algorithm at each limit in `range`, preceded by the
/// Huffman and Hu–Tucker reference rows.
pub fn limit_study(
    freq: &FrequencyTable,
    algos: &[LimitAlgorithm],
    range: Option<(u32, u32)>,
) -> Result<Vec<LimitRow>> {
    let h = entropy(freq);
    let huffman = huffman_lengths(freq);
    let hu_tucker = hu_tucker_lengths(freq);
    let mut rows = vec![
        LimitRow::new("huffman", huffman.lmax() as u32, &huffman, freq, h),
        LimitRow::new("hu-tucker", hu_tucker.lmax() as u32, &hu_tucker, freq, h),
    ];
    let (lo, hi) = range.unwrap_or((min_limit(freq.len()), huffman.lmax() as u32));
    for lmax in lo..=hi {
        for &algo in algos {
            let lengths = limit_lengths(freq, lmax, algo)?;
            rows.push(LimitRow::new(algo.name(), lmax, &lengths, freq, h));
        }
    }
    Ok(rows)
}

/// Parses arguments and runs the command, returning the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { exit::USAGE } else { exit::OK };
        }
    };
    match execute(cli.command) {
        Ok(()) => exit::OK,
        Err(e) => {
            eprintln!("pfxc: {e}");
            match e {
                Error::Io(_) => exit::IO,
                Error::InvalidParameter(_) | Error::LimitTooSmall { .. } => exit::USAGE,
                _ => exit::DATA,
            }
        }
    }
}

fn execute(command: Command) -> Result<()> {
    match command {
        Command::Stats { input } => {
            let seq = corpus::ingest(&read_input(&input.input)?, input.format)?;
            write_output(None, stats(&seq).to_string().as_bytes())
        }
        Command::Compress { input, codec, output } => {
            let seq = corpus::ingest(&read_input(&input.input)?, input.format)?;
            let model = CodecModel::build(&frequencies(&seq), codec.scheme, &codec.params())?;
            let bytes = container::compress(&seq, &model)?;
            write_output(output.as_ref(), &bytes)?;
            eprintln!(
                "{} symbols, scheme {}, {} bytes",
                seq.len(),
                codec.scheme,
                bytes.len()
            );
            Ok(())
        }
        Command::Decompress { input, format, output } => {
            let raw = container::decompress(&read_input(&input)?)?;
            write_output(output.as_ref(), &corpus::format_values(&raw, format))
        }
        Command::Bench {
            corpus,
            scheme,
            epsilon,
            lmax,
            c,
            prefix_bits,
            select_sampling,
            search,
            runs,
            output,
        } => {
            let seq = corpus.load()?;
            let grid = BenchGrid {
                schemes: scheme,
                epsilons: epsilon,
                lmax,
                cs: c,
                prefix_bits,
                samplings: select_sampling,
                search,
                runs,
            };
            let mut csv = String::from(BENCH_HEADER);
            csv.push('\n');
            for row in bench(&seq, &grid)? {
                csv.push_str(&row.csv());
                csv.push('\n');
            }
            write_output(output.as_ref(), csv.as_bytes())
        }
        Command::LimitLengths {
            corpus,
            algo,
            lmax,
            output,
        } => {
            let algos = if algo == "all" {
                LimitAlgorithm::ALL.to_vec()
            } else {
                algo.split(',').map(str::parse).collect::<Result<Vec<_>>>()?
            };
            let seq = corpus.load()?;
            let mut csv = String::from(LIMIT_HEADER);
            csv.push('\n');
            for row in limit_study(&frequencies(&seq), &algos, lmax)? {
                csv.push_str(&row.csv());
                csv.push('\n');
            }
            write_output(output.as_ref(), csv.as_bytes())
        }
        Command::GenZipf {
            n,
            len,
            s,
            seed,
            format,
            output,
        } => {
            if !(s >= 0.0) {
                return Err(Error::InvalidParameter(format!("exponent {s} must be non-negative")));
            }
            let values = corpus::zipf_values(n, len, s, seed)?;
            write_output(output.as_ref(), &corpus::format_values(&values, format))
        }
    }
}
