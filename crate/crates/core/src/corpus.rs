//! Symbol sequences, frequency statistics and synthetic corpora.
//!
//! Every downstream construction works over a dense alphabet `[0, n)` in
//! which each symbol occurs at least once. Raw input values are densified in
//! first-occurrence order and the mapping back to raw values is kept so that
//! decompression restores the original stream.

use std::collections::HashMap;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::weighted::WeightedAliasIndex;
use rand_distr::Distribution;

use crate::{Error, Result};

/// Largest admissible sequence length. With every probability at least
/// `1/N`, Huffman code lengths stay below `log_phi(2^44) < 64`.
pub const MAX_TOTAL: u64 = 1 << 44;

/// Raw input encodings accepted by [`ingest`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InputFormat {
    /// Little-endian 32-bit unsigned integers.
    U32,
    /// Whitespace-separated decimal integers.
    Ascii,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "u32" | "u32-binary" => Ok(InputFormat::U32),
            "ascii" | "ascii-ints" => Ok(InputFormat::Ascii),
            other => Err(Error::InvalidParameter(format!("unknown format {other:?}"))),
        }
    }
}

/// A sequence over the dense alphabet `[0, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolSequence {
    symbols: Vec<u32>,
    alphabet: usize,
    /// `remap[dense] = raw`; `None` when the mapping is the identity.
    remap: Option<Vec<u32>>,
}

impl SymbolSequence {
    /// Densifies raw values in first-occurrence order.
    pub fn from_raw(raw: &[u32]) -> Result<Self> {
        if raw.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_total(raw.len() as u64)?;
        let mut index: HashMap<u32, u32> = HashMap::new();
        let mut remap = Vec::new();
        let symbols = raw
            .iter()
            .map(|&v| {
                *index.entry(v).or_insert_with(|| {
                    remap.push(v);
                    (remap.len() - 1) as u32
                })
            })
            .collect();
        let alphabet = remap.len();
        let identity = remap.iter().enumerate().all(|(i, &v)| i as u64 == v as u64);
        Ok(SymbolSequence {
            symbols,
            alphabet,
            remap: (!identity).then_some(remap),
        })
    }

    /// Wraps symbols that are already dense. Every value in `[0, alphabet)`
    /// must occur.
    pub fn from_dense(symbols: Vec<u32>, alphabet: usize) -> Result<Self> {
        if symbols.is_empty() || alphabet == 0 {
            return Err(Error::EmptyInput);
        }
        check_total(symbols.len() as u64)?;
        let mut seen = vec![false; alphabet];
        for (i, &s) in symbols.iter().enumerate() {
            let slot = seen.get_mut(s as usize).ok_or(Error::OutOfBounds {
                index: i,
                len: alphabet,
            })?;
            *slot = true;
        }
        if let Some(missing) = seen.iter().position(|&b| !b) {
            return Err(Error::InvalidParameter(format!(
                "symbol {missing} of the dense alphabet never occurs"
            )));
        }
        Ok(SymbolSequence {
            symbols,
            alphabet,
            remap: None,
        })
    }

    pub(crate) fn from_parts(
        symbols: Vec<u32>,
        alphabet: usize,
        remap: Option<Vec<u32>>,
    ) -> Self {
        SymbolSequence {
            symbols,
            alphabet,
            remap,
        }
    }

    pub fn symbols(&self) -> &[u32] {
        &self.symbols
    }

    /// Alphabet size `n`.
    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    /// Sequence length `N`.
    pub fn len(&self) -> usize {
        self.symbols.len()
    }

    pub fn is_empty(&self) -> bool {
        self.symbols.is_empty()
    }

    /// Dense-to-raw mapping, absent when it is the identity.
    pub fn remap(&self) -> Option<&[u32]> {
        self.remap.as_deref()
    }

    /// Raw value of a dense symbol.
    pub fn raw_value(&self, symbol: u32) -> u32 {
        match &self.remap {
            Some(m) => m[symbol as usize],
            None => symbol,
        }
    }

    /// The original raw stream.
    pub fn to_raw(&self) -> Vec<u32> {
        self.symbols.iter().map(|&s| self.raw_value(s)).collect()
    }
}

fn check_total(total: u64) -> Result<()> {
    if total >= MAX_TOTAL {
        return Err(Error::InvalidParameter(format!(
            "sequence length {total} exceeds the supported maximum 2^44"
        )));
    }
    Ok(())
}

/// Parses a raw byte stream and densifies it.
pub fn ingest(raw: &[u8], format: InputFormat) -> Result<SymbolSequence> {
    let values = parse_values(raw, format)?;
    SymbolSequence::from_raw(&values)
}

/// Parses raw values without densifying.
pub fn parse_values(raw: &[u8], format: InputFormat) -> Result<Vec<u32>> {
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let values = match format {
        InputFormat::U32 => {
            if !raw.len().is_multiple_of(4) {
                return Err(Error::Parse {
                    offset: raw.len() - raw.len() % 4,
                    message: format!("{} trailing bytes after the last u32", raw.len() % 4),
                });
            }
            raw.chunks_exact(4)
                .map(|c| u32::from_le_bytes([c[0], c[1], c[2], c[3]]))
                .collect()
        }
        InputFormat::Ascii => parse_ascii(raw)?,
    };
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    Ok(values)
}

fn parse_ascii(raw: &[u8]) -> Result<Vec<u32>> {
    let mut values = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        if raw[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        while i < raw.len() && !raw[i].is_ascii_whitespace() {
            i += 1;
        }
        let token = &raw[start..i];
        let value = std::str::from_utf8(token)
            .ok()
            .and_then(|t| t.parse::<u32>().ok())
            .ok_or_else(|| Error::Parse {
                offset: start,
                message: format!(
                    "expected an unsigned 32-bit decimal, found {:?}",
                    String::from_utf8_lossy(token)
                ),
            })?;
        values.push(value);
    }
    Ok(values)
}

/// Serializes raw values in the given format. ASCII output is one
/// space-separated line.
pub fn format_values(values: &[u32], format: InputFormat) -> Vec<u8> {
    match format {
        InputFormat::U32 => values.iter().flat_map(|v| v.to_le_bytes()).collect(),
        InputFormat::Ascii => {
            let mut out = String::with_capacity(values.len() * 6);
            for (i, v) in values.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                out.push_str(&v.to_string());
            }
            out.push('\n');
            out.into_bytes()
        }
    }
}

/// Occurrence counts over a dense alphabet.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FrequencyTable {
    counts: Vec<u64>,
    total: u64,
}

impl FrequencyTable {
    /// Builds a table from explicit counts; every count must be positive.
    pub fn from_counts(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(i) = counts.iter().position(|&c| c == 0) {
            return Err(Error::InvalidParameter(format!(
                "symbol {i} has zero frequency"
            )));
        }
        let total = counts
            .iter()
            .try_fold(0u64, |acc, &c| acc.checked_add(c))
            .ok_or_else(|| Error::InvalidParameter("frequency total overflows".into()))?;
        check_total(total)?;
        Ok(FrequencyTable { counts, total })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    /// Alphabet size `n`.
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn probability(&self, symbol: usize) -> f64 {
        self.counts[symbol] as f64 / self.total as f64
    }
}

/// Counts occurrences of every symbol of the sequence.
pub fn frequencies(seq: &SymbolSequence) -> FrequencyTable {
    let mut counts = vec![0u64; seq.alphabet_size()];
    for &s in seq.symbols() {
        counts[s as usize] += 1;
    }
    let total = seq.len() as u64;
    FrequencyTable { counts, total }
}

/// Empirical entropy `H(P)` in bits per symbol.
pub fn entropy(freq: &FrequencyTable) -> f64 {
    entropy_of_counts(freq.counts())
}

/// Zero-order entropy of a histogram, ignoring empty cells.
pub fn entropy_of_counts(counts: &[u64]) -> f64 {
    let total: u64 = counts.iter().sum();
    if total == 0 {
        return 0.0;
    }
    let t = total as f64;
    counts
        .iter()
        .filter(|&&c| c > 0)
        .map(|&c| {
            let c = c as f64;
            (c / t) * (t / c).log2()
        })
        .sum()
}

/// Draws `len` i.i.d. symbols with `P(i) ∝ 1/(i+1)^exponent`.
///
/// The output is not densified: symbols that were never drawn are simply
/// absent. Use [`SymbolSequence::from_raw`] before building codes.
pub fn zipf_values(alphabet: usize, len: usize, exponent: f64, seed: u64) -> Result<Vec<u32>> {
    if alphabet == 0 || len == 0 {
        return Err(Error::InvalidParameter(
            "alphabet size and length must be positive".into(),
        ));
    }
    if !(exponent >= 0.0 && exponent.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "zipf exponent must be finite and non-negative, got {exponent}"
        )));
    }
    if alphabet > u32::MAX as usize {
        return Err(Error::InvalidParameter("alphabet exceeds u32".into()));
    }
    let weights: Vec<f64> = (0..alphabet)
        .map(|i| ((i + 1) as f64).powf(-exponent))
        .collect();
    let dist = WeightedAliasIndex::new(weights)
        .map_err(|e| Error::InvalidParameter(format!("zipf weights: {e}")))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..len).map(|_| dist.sample(&mut rng) as u32).collect())
}

/// Zipf corpus, densified.
pub fn zipf_generate(alphabet: usize, len: usize, exponent: f64, seed: u64) -> Result<SymbolSequence> {
    SymbolSequence::from_raw(&zipf_values(alphabet, len, exponent, seed)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ascii_first_occurrence_densification() {
        let seq = ingest(b"3 3 7 3", InputFormat::Ascii).unwrap();
        assert_eq!(seq.symbols(), &[0, 0, 1, 0]);
        assert_eq!(seq.alphabet_size(), 2);
        assert_eq!(seq.len(), 4);
        assert_eq!(seq.remap(), Some(&[3u32, 7][..]));
        assert_eq!(seq.to_raw(), vec![3, 3, 7, 3]);
    }

    #[test]
    fn singleton() {
        let seq = ingest(b"5", InputFormat::Ascii).unwrap();
        assert_eq!(seq.symbols(), &[0]);
        assert_eq!((seq.alphabet_size(), seq.len()), (1, 1));
    }

    #[test]
    fn binary_u32() {
        let raw: Vec<u8> = [1u32, 2, 3].iter().flat_map(|v| v.to_le_bytes()).collect();
        let seq = ingest(&raw, InputFormat::U32).unwrap();
        assert_eq!(seq.symbols(), &[0, 1, 2]);
        assert_eq!(seq.alphabet_size(), 3);
        assert_eq!(seq.to_raw(), vec![1, 2, 3]);
    }

    #[test]
    fn identity_remap_is_dropped() {
        let seq = ingest(b"0 1 2 1 0", InputFormat::Ascii).unwrap();
        assert_eq!(seq.remap(), None);
    }

    #[test]
    fn parse_errors_carry_offsets() {
        match ingest(b"1 2 x3 4", InputFormat::Ascii) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        match ingest(&[1, 0, 0, 0, 9], InputFormat::U32) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 4),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(ingest(b"", InputFormat::Ascii), Err(Error::EmptyInput)));
        assert!(matches!(ingest(b"  \n", InputFormat::Ascii), Err(Error::EmptyInput)));
        assert!(matches!(
            ingest(b"99999999999", InputFormat::Ascii),
            Err(Error::Parse { offset: 0, .. })
        ));
    }

    #[test]
    fn frequency_counts() {
        let seq = SymbolSequence::from_dense(vec![0, 0, 1, 0], 2).unwrap();
        let f = frequencies(&seq);
        assert_eq!(f.counts(), &[3, 1]);
        assert_eq!(f.total(), 4);

        let seq = SymbolSequence::from_dense(vec![0, 1, 2, 3], 4).unwrap();
        assert_eq!(frequencies(&seq).counts(), &[1, 1, 1, 1]);

        let seq = ingest(b"2 2 2 2", InputFormat::Ascii).unwrap();
        assert_eq!(frequencies(&seq).counts(), &[4]);
    }

    #[test]
    fn entropy_values() {
        let h = |c: Vec<u64>| entropy(&FrequencyTable::from_counts(c).unwrap());
        assert_eq!(h(vec![1, 1, 1, 1]), 2.0);
        assert_eq!(h(vec![1]), 0.0);
        assert!((h(vec![2, 1, 1]) - 1.5).abs() < 1e-12);
    }

    #[test]
    fn zero_counts_rejected() {
        assert!(FrequencyTable::from_counts(vec![1, 0, 2]).is_err());
        assert!(FrequencyTable::from_counts(vec![]).is_err());
        assert!(SymbolSequence::from_dense(vec![0, 2], 3).is_err());
        assert!(SymbolSequence::from_dense(vec![0, 3], 3).is_err());
    }

    #[test]
    fn zipf_is_deterministic() {
        let a = zipf_values(100, 1000, 1.1, 42).unwrap();
        let b = zipf_values(100, 1000, 1.1, 42).unwrap();
        let c = zipf_values(100, 1000, 1.1, 43).unwrap();
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn zipf_uniform_chi_square() {
        let n = 4;
        let len = 200_000;
        let v = zipf_values(n, len, 0.0, 7).unwrap();
        let mut counts = [0f64; 4];
        for s in v {
            counts[s as usize] += 1.0;
        }
        let expected = len as f64 / n as f64;
        let chi2: f64 = counts.iter().map(|c| (c - expected).powi(2) / expected).sum();
        // 3 degrees of freedom; 16.27 is the 0.999 quantile.
        assert!(chi2 < 16.27, "chi2 = {chi2}");
    }

    #[test]
    fn zipf_ratio_matches_exponent() {
        let v = zipf_values(2, 100_000, 3.0, 11).unwrap();
        let ones = v.iter().filter(|&&s| s == 1).count() as f64;
        let zeros = v.len() as f64 - ones;
        let ratio = zeros / ones;
        assert!((ratio - 8.0).abs() <= 0.8, "ratio = {ratio}");
    }

    #[test]
    fn format_roundtrip() {
        let vals = vec![5, 0, 4_000_000_000, 17];
        for fmt in [InputFormat::U32, InputFormat::Ascii] {
            let bytes = format_values(&vals, fmt);
            assert_eq!(parse_values(&bytes, fmt).unwrap(), vals);
        }
    }
}
