//! End-to-end checks of the library's quantitative guarantees.
//!
//! Runs as a plain binary so every check prints one status line even when
//! the others pass. Exits non-zero if any binding check fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use prefix_codes::alphabetic::{hu_tucker_lengths, AlphabeticCodec};
use prefix_codes::cli::{bench, BenchGrid, BenchRow};
use prefix_codes::codecs::{
    model_size_report, AdditiveBackend, AdditiveCodec, CompactCodec, MultiplicativeCodec, Scheme, SearchStrategy,
    SymbolCodec, TableCodec, TableVariant,
};
use prefix_codes::codes::{huffman_lengths, CodeLengths, PHI};
use prefix_codes::corpus::{frequencies, zipf_generate, FrequencyTable};
use prefix_codes::limited::{limit_lengths, limit_optimal, LimitAlgorithm};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{alphabetic_dp, ceil_lg, cost, entropy, exhaustive_min, kraft_ok, random_counts};

const SLACK: f64 = 1e-9;
const ORACLE_TABLES: usize = 1000;
const LIMIT_TABLES: usize = 500;
const LIMIT_GRID_MAX: u32 = 10;
const APPROX_TABLES: usize = 200;
const APPROX_MAX_N: usize = 4096;
const STREAMS: usize = 100;
const STREAM_LEN: usize = 100_000;
const ALPHABETIC_TABLES: usize = 500;
const DESK_N: usize = 65_536;
const DESK_LEN: usize = 10_000_000;
const DESK_S: f64 = 1.1;
const BENCH_LEN: usize = 2_000_000;
const CRITERION1_BUDGET: Duration = Duration::from_secs(60);
const CRITERION2_BUDGET: Duration = Duration::from_secs(120);

/// Expected `⌈log_φ(1/ε)⌉` for the additive grid.
const ADDITIVE_GRID: [(f64, u32); 4] = [(0.49, 2), (0.25, 3), (0.1, 5), (0.01, 10)];
/// Expected `⌈1/(c−1)⌉` for the multiplicative grid.
const MULTIPLICATIVE_GRID: [(f64, u32); 4] = [(1.5, 2), (1.75, 2), (2.0, 1), (3.0, 1)];

enum Outcome {
    Pass(String),
    Fail(String),
    Report(String),
}

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Outcome::Pass(detail)
    } else {
        Outcome::Fail(detail)
    }
}

fn table(counts: Vec<u64>) -> FrequencyTable {
    FrequencyTable::from_counts(counts).unwrap()
}

fn small_tables(seed: u64, count: usize) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let n = rng.random_range(2..=10);
            random_counts(&mut rng, n)
        })
        .collect()
}

fn approx_tables(seed: u64) -> Vec<Vec<u64>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..APPROX_TABLES)
        .map(|_| {
            let n = (2f64.powf(rng.random_range(1.0..12.0))).round() as usize;
            random_counts(&mut rng, n.clamp(2, APPROX_MAX_N))
        })
        .collect()
}

fn huffman_cost(w: &[u64]) -> u128 {
    cost(huffman_lengths(&table(w.to_vec())).lengths(), w)
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    for (t, w) in small_tables(1, ORACLE_TABLES).iter().enumerate() {
        let f = table(w.clone());
        let lengths = huffman_lengths(&f);
        let got = cost(lengths.lengths(), w);
        let want = exhaustive_min(w, (w.len() - 1) as u32).unwrap();
        let total: u64 = w.iter().sum();
        let l = got as f64 / total as f64;
        let h = entropy(w);
        if got != want || !kraft_ok(lengths.lengths()) {
            failures.push(format!("table {t}: cost {got} vs oracle {want}"));
        }
        if !(h <= l + SLACK && l < h + 1.0) {
            failures.push(format!("table {t}: H={h} L={l}"));
        }
    }
    let elapsed = start.elapsed();
    if elapsed > CRITERION1_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    check(
        failures.is_empty(),
        format!(
            "{ORACLE_TABLES} tables, huffman matched the exhaustive oracle and H<=L<H+1 in {elapsed:.2?}{}",
            summarize(&failures)
        ),
    )
}

fn criterion2() -> Outcome {
    let start = Instant::now();
    let mut failures = Vec::new();
    let mut instances = 0;
    for (t, w) in small_tables(2, LIMIT_TABLES).iter().enumerate() {
        let f = table(w.clone());
        for lmax in ceil_lg(w.len()).max(1)..=LIMIT_GRID_MAX {
            instances += 1;
            let want = exhaustive_min(w, lmax).unwrap();
            let opt = cost(limit_optimal(&f, lmax).unwrap().lengths(), w);
            if opt != want {
                failures.push(format!("table {t} lmax {lmax}: package-merge {opt} vs oracle {want}"));
            }
            for algo in LimitAlgorithm::ALL {
                let l = limit_lengths(&f, lmax, algo).unwrap();
                let c = cost(l.lengths(), w);
                if c < want || l.lmax() as u32 > lmax || !kraft_ok(l.lengths()) {
                    failures.push(format!("table {t} lmax {lmax}: {algo} cost {c}, height {}", l.lmax()));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    if elapsed > CRITERION2_BUDGET {
        failures.push(format!("took {elapsed:?}"));
    }
    check(
        failures.is_empty(),
        format!(
            "{instances} (table, lmax) instances, package-merge optimal, heuristics never below it, {elapsed:.2?}{}",
            summarize(&failures)
        ),
    )
}

fn criterion3() -> Outcome {
    let mut failures = Vec::new();
    let mut instances = 0;
    let mut binding = 0;
    let mut worst: f64 = f64::NEG_INFINITY;
    let mut unreachable = 0;
    for (t, w) in small_tables(2, LIMIT_TABLES).iter().enumerate() {
        let f = table(w.clone());
        let total: u64 = w.iter().sum();
        let base = huffman_cost(w);
        let n = w.len();
        for lmax in ceil_lg(n).max(1)..=LIMIT_GRID_MAX {
            instances += 1;
            let c = cost(limit_lengths(&f, lmax, LimitAlgorithm::Milidiu).unwrap().lengths(), w);
            let redundancy = (c - base) as f64 / total as f64;
            let arg = n as i64 + ceil_lg(n) as i64 - lmax as i64;
            if arg <= 0 {
                if c != base {
                    failures.push(format!("table {t} lmax {lmax}: limit cannot bind yet redundancy {redundancy}"));
                }
                continue;
            }
            binding += 1;
            let exp = lmax as f64 - ceil_lg(arg as usize) as f64 - 1.0;
            let bound = 1.0 / PHI.powf(exp);
            worst = worst.max(redundancy - bound);
            if redundancy > bound + SLACK {
                let best = cost(limit_optimal(&f, lmax).unwrap().lengths(), w);
                if (best - base) as f64 / total as f64 > bound + SLACK {
                    unreachable += 1;
                }
                failures.push(format!("table {t} lmax {lmax}: redundancy {redundancy} > bound {bound}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{instances} instances ({binding} with a defined bound), max redundancy-bound {worst:.4}{}{}",
            summarize(&failures),
            if failures.is_empty() {
                String::new()
            } else {
                format!(" ({unreachable} of them exceed the bound even with the optimal limited code)")
            }
        ),
    )
}

fn criterion4() -> Outcome {
    let mut failures = Vec::new();
    let mut max_gap: f64 = 0.0;
    let tables = approx_tables(4);
    for (t, w) in tables.iter().enumerate() {
        let f = table(w.clone());
        let total: u64 = w.iter().sum();
        let opt = huffman_cost(w) as f64 / total as f64;
        for &(eps, k) in &ADDITIVE_GRID {
            let codec = AdditiveCodec::new(&f, eps, AdditiveBackend::Milidiu, None, 32, SearchStrategy::Sequential)
                .unwrap();
            let lens = codec.codeword_lengths();
            let avg = cost(&lens, w) as f64 / total as f64;
            let want_lmax = ceil_lg(w.len()) + k + 1;
            max_gap = max_gap.max(avg - opt);
            if codec.lmax() != want_lmax || lens.iter().any(|&l| l as u32 > want_lmax) {
                failures.push(format!("table {t} eps {eps}: lmax {} expected {want_lmax}", codec.lmax()));
            }
            if avg > opt + eps + SLACK {
                failures.push(format!("table {t} eps {eps}: avg {avg} > L {opt} + eps"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} tables x {} epsilons, lmax formula exact, max avg-L {max_gap:.5}{}",
            tables.len(),
            ADDITIVE_GRID.len(),
            summarize(&failures)
        ),
    )
}

fn criterion5() -> Outcome {
    let mut failures = Vec::new();
    let mut split = 0;
    let mut worst_ratio: f64 = 0.0;
    let tables = approx_tables(5);
    for (t, w) in tables.iter().enumerate() {
        let f = table(w.clone());
        let total: u64 = w.iter().sum();
        let opt = huffman_cost(w) as f64 / total as f64;
        for &(c, k) in &MULTIPLICATIVE_GRID {
            let codec = MultiplicativeCodec::new(&f, c, 32, SearchStrategy::Sequential).unwrap();
            let lmax = ceil_lg(w.len()) + k + 1;
            let threshold = (lmax as f64 / c).floor() as u32 + 2;
            if !codec.is_fallback() {
                split += 1;
            }
            let symbols: Vec<u32> = (0..w.len() as u32).collect();
            let mut emitted = Vec::with_capacity(symbols.len());
            for &s in &symbols {
                let (_, bits) = codec.encode_all(&[s]).unwrap();
                emitted.push(bits);
            }
            let avg: f64 = emitted.iter().zip(w).map(|(&b, &x)| b as f64 * x as f64).sum::<f64>() / total as f64;
            worst_ratio = worst_ratio.max(avg / opt);
            if avg > c * opt + SLACK {
                failures.push(format!("table {t} c {c}: avg {avg} > c*L {}", c * opt));
            }
            if emitted.iter().any(|&b| b > lmax as u64 + 1) {
                failures.push(format!("table {t} c {c}: codeword above lmax+1 = {}", lmax + 1));
            }
            if codec.short_symbols() as u64 > 1u64 << threshold {
                failures.push(format!("table {t} c {c}: S {} > 2^{threshold}", codec.short_symbols()));
            }
            let (bytes, bits) = codec.encode_all(&symbols).unwrap();
            if codec.decode_all(&bytes, bits, symbols.len()).unwrap() != symbols {
                failures.push(format!("table {t} c {c}: roundtrip"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{} tables x {} factors ({split} split models), max avg/L {worst_ratio:.4}{}",
            tables.len(),
            MULTIPLICATIVE_GRID.len(),
            summarize(&failures)
        ),
    )
}

fn criterion6() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut failures = Vec::new();
    for t in 0..STREAMS {
        let n = rng.random_range(2..=5000);
        let s = rng.random_range(0.6..1.8);
        let seq = zipf_generate(n, STREAM_LEN, s, rng.random()).unwrap();
        let syms = seq.symbols();
        let f = frequencies(&seq);
        let eps = ADDITIVE_GRID[t % ADDITIVE_GRID.len()].0;
        let search = if t % 2 == 0 {
            SearchStrategy::Sequential
        } else {
            SearchStrategy::Binary
        };

        let additive = AdditiveCodec::new(&f, eps, AdditiveBackend::Milidiu, None, 32, search).unwrap();
        let lengths = CodeLengths::new(additive.codeword_lengths()).unwrap();
        let mut codecs: Vec<(String, Box<dyn SymbolCodec>)> = vec![
            ("additive".into(), Box::new(additive)),
            ("compact".into(), Box::new(CompactCodec::new(&lengths, 32, search).unwrap())),
        ];
        for v in TableVariant::ALL {
            let b = rng.random_range(4..=16);
            codecs.push((format!("{v:?} b={b}"), Box::new(TableCodec::new(&lengths, b, v).unwrap())));
        }
        let reference = codecs[1].1.encode_all(syms).unwrap();
        for (name, c) in &codecs {
            let out = c.encode_all(syms).unwrap();
            if out != reference {
                failures.push(format!("stream {t}: {name} payload differs"));
            }
            if c.decode_all(&reference.0, reference.1, syms.len()).unwrap() != syms {
                failures.push(format!("stream {t}: {name} decoding differs"));
            }
        }

        let c = MULTIPLICATIVE_GRID[t % MULTIPLICATIVE_GRID.len()].0;
        let others: Vec<(&str, Box<dyn SymbolCodec>)> = vec![
            ("multiplicative", Box::new(MultiplicativeCodec::new(&f, c, 32, search).unwrap())),
            ("alphabetic", Box::new(AlphabeticCodec::new(&f))),
        ];
        for (name, c) in &others {
            let (bytes, bits) = c.encode_all(syms).unwrap();
            if c.decode_all(&bytes, bits, syms.len()).unwrap() != syms {
                failures.push(format!("stream {t}: {name} roundtrip"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{STREAMS} streams of {STREAM_LEN}, compact/table/additive bit-identical, multiplicative and alphabetic roundtrip{}",
            summarize(&failures)
        ),
    )
}

fn criterion7() -> Outcome {
    let mut failures = Vec::new();
    let mut symbols = 0;
    let mut tight = 0;
    let (mut heavy, mut within_one) = (0, 0);
    for (t, w) in small_tables(1, ORACLE_TABLES).iter().enumerate() {
        let lengths = huffman_lengths(&table(w.clone()));
        let total: u64 = w.iter().sum();
        for (i, (&l, &x)) in lengths.lengths().iter().zip(w).enumerate() {
            symbols += 1;
            let bound = ((total as f64 / x as f64).ln() / PHI.ln()).floor() as u32;
            if l as u32 == bound {
                tight += 1;
            }
            if l as u32 > bound {
                heavy += usize::from(bound == 0);
                within_one += usize::from(l as u32 == bound + 1);
                failures.push(format!("table {t} symbol {i}: length {l} > {bound}"));
            }
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{symbols} symbols checked against the golden-ratio depth bound ({tight} tight){}{}",
            summarize(&failures),
            if failures.is_empty() {
                String::new()
            } else {
                format!(" ({heavy} with p > 1/phi where the bound is 0, {within_one} exceed it by exactly one)")
            }
        ),
    )
}

fn criterion8() -> Outcome {
    let seq = zipf_generate(DESK_N, DESK_LEN, DESK_S, 8).unwrap();
    let f = frequencies(&seq);
    let n = f.len();
    let lengths = huffman_lengths(&f);
    let codec = CompactCodec::new(&lengths, 32, SearchStrategy::Sequential).unwrap();
    let report = model_size_report(&codec);
    let canonical = n as u64 * ceil_lg(n) as u64;
    let hist: Vec<u64> = lengths.histogram().into_iter().filter(|&c| c > 0).collect();
    let h0 = entropy(&hist);
    let payload = codec.wavelet_tree().payload_bits();
    let payload_cap = n as f64 * (h0 + 1.0);
    check(
        report.serialized < canonical && (payload as f64) < payload_cap,
        format!(
            "n={n} N={DESK_LEN}: serialized model {} bits < n*ceil(lg n) {canonical}; \
             wavelet payload {payload} < n*(H0(L)+1) {payload_cap:.0} (H0(L)={h0:.3}, lmax {}, naive {}, n*lmax {})",
            report.serialized, report.lmax, report.naive, report.engineered
        ),
    )
}

fn criterion9() -> Outcome {
    let mut failures = Vec::new();
    for (t, w) in small_tables(9, ALPHABETIC_TABLES).iter().enumerate() {
        let f = table(w.clone());
        let lengths = hu_tucker_lengths(&f);
        let got = cost(lengths.lengths(), w);
        let want = alphabetic_dp(w);
        let total: u64 = w.iter().sum();
        let avg = got as f64 / total as f64;
        let opt = huffman_cost(w) as f64 / total as f64;
        let h = entropy(w);
        if got != want {
            failures.push(format!("table {t}: hu-tucker {got} vs oracle {want}"));
        }
        if avg > opt + 1.0 + SLACK || avg >= h + 2.0 {
            failures.push(format!("table {t}: avg {avg}, L {opt}, H {h}"));
        }
        let codec = AlphabeticCodec::from_lengths(&lengths).unwrap();
        let syms: Vec<u32> = (0..w.len() as u32).collect();
        let (bytes, bits) = codec.encode_all(&syms).unwrap();
        let mut prev: Option<Vec<bool>> = None;
        for (s, &l) in lengths.lengths().iter().enumerate() {
            let (b, k) = codec.encode_all(&[s as u32]).unwrap();
            let word: Vec<bool> = (0..k).map(|i| b[(i / 8) as usize] >> (7 - i % 8) & 1 == 1).collect();
            if k != l as u64 || prev.as_ref().is_some_and(|p| p >= &word) {
                failures.push(format!("table {t}: codeword of symbol {s} out of order"));
            }
            prev = Some(word);
        }
        if codec.decode_all(&bytes, bits, syms.len()).unwrap() != syms {
            failures.push(format!("table {t}: roundtrip"));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{ALPHABETIC_TABLES} tables, hu-tucker matched the interval DP, ordered codewords, L<=L(P)+1, L<H+2{}",
            summarize(&failures)
        ),
    )
}

fn criterion10() -> Outcome {
    let seq = zipf_generate(DESK_N, BENCH_LEN, DESK_S, 10).unwrap();
    let grid = BenchGrid {
        schemes: vec![Scheme::Compact, Scheme::Table(TableVariant::TableE)],
        ..BenchGrid::default()
    };
    let rows = bench(&seq, &grid).unwrap();
    let find = |name: &str| -> &BenchRow { rows.iter().find(|r| r.scheme.starts_with(name)).unwrap() };
    let compact = find("compact");
    let tbl = find("table");
    let faster = tbl.decode_ns < compact.decode_ns;
    let smaller = compact.decode_struct_bits < tbl.decode_struct_bits;
    Outcome::Report(format!(
        "table decode {:.1} ns vs compact {:.1} ns ({:.2}x, {}); decode structures compact {} bits vs table {} bits \
         ({:.2}x, {}); encode {:.1} vs {:.1} ns; serialized {} vs {} bits",
        tbl.decode_ns,
        compact.decode_ns,
        compact.decode_ns / tbl.decode_ns,
        if faster { "table faster" } else { "table NOT faster" },
        compact.decode_struct_bits,
        tbl.decode_struct_bits,
        tbl.decode_struct_bits as f64 / compact.decode_struct_bits as f64,
        if smaller { "compact smaller" } else { "compact NOT smaller" },
        compact.encode_ns,
        tbl.encode_ns,
        compact.serialized_bits,
        tbl.serialized_bits,
    ))
}

fn summarize(failures: &[String]) -> String {
    match failures {
        [] => String::new(),
        [first, ..] => format!("; {} failures, first: {first}", failures.len()),
    }
}

fn main() {
    let checks: [(&str, fn() -> Outcome); 10] = [
        ("huffman optimality", criterion1),
        ("length-limited optimality", criterion2),
        ("milidiu-laber redundancy", criterion3),
        ("additive approximation", criterion4),
        ("multiplicative approximation", criterion5),
        ("cross-codec streams", criterion6),
        ("katona-nemetz depth", criterion7),
        ("desk-scale model size", criterion8),
        ("hu-tucker", criterion9),
        ("throughput", criterion10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in checks.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Outcome::Fail(format!("panicked: {msg}"))
        });
        let (tag, detail) = match outcome {
            Outcome::Pass(d) => ("PASS", d),
            Outcome::Fail(d) => {
                failed += 1;
                ("FAIL", d)
            }
            Outcome::Report(d) => ("REPORT", d),
        };
        println!("criterion {:>2} [{tag}] {name}: {detail}", i + 1);
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
