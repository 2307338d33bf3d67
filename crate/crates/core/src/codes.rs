//! Huffman code lengths and the canonical code layout.
//!
//! A canonical code is fully described by its per-symbol lengths. Symbols
//! are laid out level by level, ascending within a level; the codeword of
//! symbol `i` at level `ℓ = L[i]` is `first[ℓ] + rank_ℓ(L, i)` where the
//! rank counts earlier symbols of the same length. Padding each `first[ℓ]`
//! to `ℓmax` bits turns length detection into a predecessor search over a
//! peeked `ℓmax`-bit window.

use std::str::FromStr;

use crate::corpus::FrequencyTable;
use crate::{Error, Result};

/// Longest codeword any [`CodeLengths`] may hold.
pub const MAX_CODE_LEN: u8 = 64;

/// Golden ratio.
pub const PHI: f64 = 1.618_033_988_749_895;

/// Per-symbol codeword lengths satisfying Kraft's inequality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CodeLengths {
    lengths: Vec<u8>,
    lmax: u8,
}

impl CodeLengths {
    pub fn new(lengths: Vec<u8>) -> Result<Self> {
        if lengths.is_empty() {
            return Err(Error::EmptyInput);
        }
        if let Some(&bad) = lengths.iter().find(|&&l| l == 0 || l > MAX_CODE_LEN) {
            return Err(Error::InvalidParameter(format!(
                "code length {bad} outside 1..={MAX_CODE_LEN}"
            )));
        }
        let lmax = *lengths.iter().max().unwrap();
        let cl = CodeLengths { lengths, lmax };
        if cl.kraft_numerator().is_none_or(|k| k > 1u128 << lmax) {
            return Err(Error::InfeasibleLengths);
        }
        Ok(cl)
    }

    /// `Σ 2^(ℓmax − ℓ_i)`, or `None` on overflow.
    fn kraft_numerator(&self) -> Option<u128> {
        self.lengths
            .iter()
            .try_fold(0u128, |acc, &l| acc.checked_add(1u128 << (self.lmax - l)))
    }

    pub fn lengths(&self) -> &[u8] {
        &self.lengths
    }

    pub fn lmax(&self) -> u8 {
        self.lmax
    }

    /// Number of symbols.
    pub fn len(&self) -> usize {
        self.lengths.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lengths.is_empty()
    }

    pub fn kraft_sum(&self) -> f64 {
        self.lengths.iter().map(|&l| (-(l as f64)).exp2()).sum()
    }

    /// Kraft sum is exactly one.
    pub fn is_complete(&self) -> bool {
        self.kraft_numerator() == Some(1u128 << self.lmax)
    }

    /// `hist[ℓ]` = symbols of length `ℓ`, for `ℓ ∈ 0..=ℓmax`.
    pub fn histogram(&self) -> Vec<u64> {
        let mut h = vec![0u64; self.lmax as usize + 1];
        for &l in &self.lengths {
            h[l as usize] += 1;
        }
        h
    }

    /// Zero-order entropy of the level sequence `L`, in bits per symbol.
    pub fn level_entropy(&self) -> f64 {
        crate::corpus::entropy_of_counts(&self.histogram())
    }
}

/// Huffman tree depths for arbitrary positive weights.
///
/// Two-queue construction over weights sorted by `(weight, index)`; on equal
/// weights a leaf is taken before an internal node, which keeps trees flat.
/// A single weight yields depth 0.
pub fn huffman_depths(weights: &[u64]) -> Vec<u32> {
    let n = weights.len();
    if n <= 1 {
        return vec![0; n];
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (weights[i], i));

    // Nodes 0..n are leaves in sorted order, n.. are internal in creation order.
    let mut parent = vec![0usize; 2 * n - 1];
    let mut internal: Vec<u128> = Vec::with_capacity(n - 1);
    let (mut li, mut ii) = (0usize, 0usize);
    for k in 0..n - 1 {
        let mut pick = || {
            let take_leaf = li < n
                && (ii >= internal.len() || weights[order[li]] as u128 <= internal[ii]);
            if take_leaf {
                li += 1;
                (li - 1, weights[order[li - 1]] as u128)
            } else {
                ii += 1;
                (n + ii - 1, internal[ii - 1])
            }
        };
        let (a, wa) = pick();
        let (b, wb) = pick();
        parent[a] = n + k;
        parent[b] = n + k;
        internal.push(wa + wb);
    }

    let mut depth = vec![0u32; 2 * n - 1];
    for node in (0..2 * n - 2).rev() {
        depth[node] = depth[parent[node]] + 1;
    }
    let mut out = vec![0u32; n];
    for (pos, &sym) in order.iter().enumerate() {
        out[sym] = depth[pos];
    }
    out
}

/// Optimal prefix-code lengths. A one-symbol alphabet gets length 1.
pub fn huffman_lengths(freq: &FrequencyTable) -> CodeLengths {
    let lengths = huffman_depths(freq.counts())
        .into_iter()
        .map(|d| d.max(1) as u8)
        .collect();
    // Totals below 2^44 keep every depth below 64.
    CodeLengths::new(lengths).expect("Huffman lengths are Kraft-complete and below 64")
}

/// Katona–Nemetz bound `⌊log_φ(1/p)⌋` on the Huffman length of a symbol of
/// probability `p`.
///
/// Taken literally it can be one short: with weights `(20, 18, 8)` every
/// Huffman code gives the 18 two bits, while `⌊log_φ(46/18)⌋ = 1`.
pub fn katona_nemetz_bound(p: f64) -> u32 {
    assert!(p > 0.0 && p <= 1.0, "probability {p} outside (0, 1]");
    ((1.0 / p).ln() / PHI.ln() + 1e-9).floor() as u32
}

/// `⌈lg n⌉`, with `⌈lg 1⌉ = 0`.
pub fn ceil_log2(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

/// Exact `Σ counts[i]·ℓ_i`.
pub fn weighted_length(lengths: &CodeLengths, freq: &FrequencyTable) -> u128 {
    assert_eq!(lengths.len(), freq.len(), "alphabet size mismatch");
    lengths
        .lengths()
        .iter()
        .zip(freq.counts())
        .map(|(&l, &c)| l as u128 * c as u128)
        .sum()
}

/// Average codeword length `Σ p_i ℓ_i` in bits per symbol.
pub fn avg_length(lengths: &CodeLengths, freq: &FrequencyTable) -> f64 {
    weighted_length(lengths, freq) as f64 / freq.total() as f64
}

/// How the length of the next codeword is located among the padded
/// `first` values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchStrategy {
    #[default]
    Sequential,
    Binary,
}

impl FromStr for SearchStrategy {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "seq" | "sequential" => Ok(SearchStrategy::Sequential),
            "bin" | "binary" => Ok(SearchStrategy::Binary),
            other => Err(Error::InvalidParameter(format!(
                "unknown search strategy {other:?}"
            ))),
        }
    }
}

/// Per-level arrays of a canonical code: `count`, `first`, `sR` and the
/// padded `first` keys. Indexed by level `0..=ℓmax`; level 0 is unused.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LevelTable {
    lmax: u8,
    counts: Vec<u64>,
    first: Vec<u64>,
    start: Vec<u64>,
    occupied: Vec<u8>,
    occupied_padded: Vec<u64>,
}

impl LevelTable {
    /// Builds the table from `counts[ℓ]`, the number of codewords of each
    /// length.
    pub fn from_counts(mut counts: Vec<u64>) -> Result<Self> {
        while counts.len() > 1 && *counts.last().unwrap() == 0 {
            counts.pop();
        }
        if counts.len() < 2 || counts.len() > MAX_CODE_LEN as usize + 1 {
            return Err(Error::InvalidParameter("bad level histogram".into()));
        }
        if counts[0] != 0 {
            return Err(Error::InvalidParameter("zero-length codewords".into()));
        }
        let lmax = (counts.len() - 1) as u8;
        let mut first = vec![0u64; counts.len()];
        let mut start = vec![0u64; counts.len()];
        let mut code: u128 = 0;
        let mut leaves = 0u64;
        for l in 1..=lmax as usize {
            if code + counts[l] as u128 > 1u128 << l {
                return Err(Error::InfeasibleLengths);
            }
            first[l] = code as u64;
            start[l] = leaves;
            leaves += counts[l];
            code = (code + counts[l] as u128) << 1;
        }
        let occupied: Vec<u8> = (1..=lmax).filter(|&l| counts[l as usize] > 0).collect();
        let occupied_padded = occupied
            .iter()
            .map(|&l| first[l as usize] << (lmax - l))
            .collect();
        Ok(LevelTable {
            lmax,
            counts,
            first,
            start,
            occupied,
            occupied_padded,
        })
    }

    pub fn lmax(&self) -> u8 {
        self.lmax
    }

    pub fn count(&self, level: u8) -> u64 {
        self.counts.get(level as usize).copied().unwrap_or(0)
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// `first[ℓ]`.
    pub fn first(&self, level: u8) -> u64 {
        self.first[level as usize]
    }

    /// `sR[ℓ]`: index in leaf order of the first symbol of level `ℓ`.
    pub fn start(&self, level: u8) -> u64 {
        self.start[level as usize]
    }

    /// Levels holding at least one codeword, ascending.
    pub fn occupied(&self) -> &[u8] {
        &self.occupied
    }

    /// `first[ℓ] << (ℓmax − ℓ)` for each occupied level.
    pub fn padded_first(&self) -> &[u64] {
        &self.occupied_padded
    }

    /// Total number of codewords.
    pub fn symbols(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// Length of the codeword that starts the `ℓmax`-bit `window`.
    #[inline]
    pub fn level_of(&self, window: u64, strategy: SearchStrategy) -> Result<u8> {
        let idx = match strategy {
            SearchStrategy::Sequential => {
                let mut k = 0;
                while k + 1 < self.occupied_padded.len() && self.occupied_padded[k + 1] <= window {
                    k += 1;
                }
                k
            }
            SearchStrategy::Binary => {
                let p = self.occupied_padded.partition_point(|&f| f <= window);
                if p == 0 {
                    return Err(Error::CorruptStream("window below every padded first code"));
                }
                p - 1
            }
        };
        if self.occupied_padded[idx] > window {
            return Err(Error::CorruptStream("window below every padded first code"));
        }
        Ok(self.occupied[idx])
    }
}

/// A canonical prefix code: the level sequence `L` plus its level table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CanonicalCode {
    lengths: CodeLengths,
    table: LevelTable,
}

impl CanonicalCode {
    pub fn lengths(&self) -> &CodeLengths {
        &self.lengths
    }

    pub fn table(&self) -> &LevelTable {
        &self.table
    }

    /// The `Codes` array: codeword value of each symbol.
    pub fn codewords(&self) -> Vec<u64> {
        let mut next: Vec<u64> = (0..=self.table.lmax).map(|l| self.table.first(l)).collect();
        self.lengths
            .lengths()
            .iter()
            .map(|&l| {
                let c = next[l as usize];
                next[l as usize] += 1;
                c
            })
            .collect()
    }

    /// The `Symb` array: symbols in left-to-right leaf order.
    pub fn leaf_order(&self) -> Vec<u32> {
        let mut next: Vec<u64> = (0..=self.table.lmax).map(|l| self.table.start(l)).collect();
        let mut symb = vec![0u32; self.lengths.len()];
        for (i, &l) in self.lengths.lengths().iter().enumerate() {
            symb[next[l as usize] as usize] = i as u32;
            next[l as usize] += 1;
        }
        symb
    }
}

/// Lays out the canonical code for `lengths`.
pub fn canonicalize(lengths: &CodeLengths) -> CanonicalCode {
    let table = LevelTable::from_counts(lengths.histogram())
        .expect("CodeLengths already satisfies Kraft's inequality");
    CanonicalCode {
        lengths: lengths.clone(),
        table,
    }
}
