//! Encoders and decoders over prefix codes.
//!
//! Every codec implements [`SymbolCodec`]. [`CodecModel`] wraps the
//! concrete codecs so a container can carry any of them.

mod additive;
mod compact;
mod multiplicative;
mod size;
mod table;

use std::fmt;
use std::str::FromStr;

pub use crate::codes::SearchStrategy;
pub use additive::{additive_lmax, AdditiveBackend, AdditiveCodec};
pub use compact::CompactCodec;
pub use multiplicative::{multiplicative_lmax, short_threshold, MultiplicativeCodec};
pub use size::{model_size_report, ModelSize};
pub use table::{TableCodec, TableVariant, DEFAULT_PREFIX_BITS};

use crate::alphabetic::AlphabeticCodec;
use crate::bitio::{BitReader, BitWriter};
use crate::codes::huffman_lengths;
use crate::corpus::FrequencyTable;
use crate::varint::Cursor;
use crate::{Error, Result};

/// Default select sampling period of the compact codec.
pub const DEFAULT_SAMPLING: u32 = 32;

/// Common interface of all codecs.
pub trait SymbolCodec {
    /// Number of symbols in the alphabet.
    fn alphabet_size(&self) -> usize;

    /// Appends the codeword of `symbol`.
    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()>;

    /// Reads one codeword.
    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32>;

    /// Length in bits of each symbol's codeword.
    fn codeword_lengths(&self) -> Vec<u8>;

    /// Appends the serialized model.
    fn write_model(&self, out: &mut Vec<u8>);

    /// In-memory bits of the structures used to `(encode, decode)`.
    fn structure_bits(&self) -> (u64, u64);

    fn encode_all(&self, symbols: &[u32]) -> Result<(Vec<u8>, u64)> {
        let mut w = BitWriter::with_capacity_bits(symbols.len() * 8);
        for &s in symbols {
            self.encode(s, &mut w)?;
        }
        Ok(w.finish())
    }

    fn decode_all(&self, bytes: &[u8], bits: u64, count: usize) -> Result<Vec<u32>> {
        let mut r = BitReader::new(bytes, bits);
        let mut out = Vec::with_capacity(count);
        for _ in 0..count {
            out.push(self.decode(&mut r)?);
        }
        if r.remaining() != 0 {
            return Err(Error::CorruptStream("trailing bits after the last codeword"));
        }
        Ok(out)
    }
}

/// Codec families, as chosen on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    Compact,
    Table(TableVariant),
    Additive,
    AdditiveTable,
    Multiplicative,
    Alphabetic,
}

impl FromStr for Scheme {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "compact" => Scheme::Compact,
            "table" => Scheme::Table(TableVariant::Table),
            "table-s" => Scheme::Table(TableVariant::TableS),
            "table-e" => Scheme::Table(TableVariant::TableE),
            "additive" | "additive-compact" => Scheme::Additive,
            "additive-table" => Scheme::AdditiveTable,
            "mult" | "multiplicative" => Scheme::Multiplicative,
            "alphabetic" | "hu-tucker" => Scheme::Alphabetic,
            other => {
                return Err(Error::InvalidParameter(format!("unknown scheme {other:?}")));
            }
        })
    }
}

impl fmt::Display for Scheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Scheme::Compact => "compact",
            Scheme::Table(TableVariant::Table) => "table",
            Scheme::Table(TableVariant::TableS) => "table-s",
            Scheme::Table(TableVariant::TableE) => "table-e",
            Scheme::Additive => "additive",
            Scheme::AdditiveTable => "additive-table",
            Scheme::Multiplicative => "mult",
            Scheme::Alphabetic => "alphabetic",
        })
    }
}

/// Construction knobs shared by all schemes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CodecParams {
    pub epsilon: f64,
    pub c: f64,
    /// Explicit length limit for the additive scheme, overriding `epsilon`.
    pub lmax: Option<u32>,
    pub prefix_bits: u32,
    pub sampling: u32,
    pub search: SearchStrategy,
    pub backend: AdditiveBackend,
}

impl Default for CodecParams {
    fn default() -> Self {
        CodecParams {
            epsilon: 0.1,
            c: 2.0,
            lmax: None,
            prefix_bits: DEFAULT_PREFIX_BITS,
            sampling: DEFAULT_SAMPLING,
            search: SearchStrategy::Sequential,
            backend: AdditiveBackend::Milidiu,
        }
    }
}

/// Any codec supported by the container format.
#[derive(Debug, Clone)]
pub enum CodecModel {
    Compact(CompactCodec),
    Table(TableCodec),
    Additive(AdditiveCodec),
    Multiplicative(MultiplicativeCodec),
    Alphabetic(AlphabeticCodec),
}

impl CodecModel {
    /// Builds the codec for `scheme` from symbol frequencies.
    pub fn build(freq: &FrequencyTable, scheme: Scheme, p: &CodecParams) -> Result<Self> {
        Ok(match scheme {
            Scheme::Compact => {
                CodecModel::Compact(CompactCodec::new(&huffman_lengths(freq), p.sampling, p.search)?)
            }
            Scheme::Table(v) => CodecModel::Table(TableCodec::new(&huffman_lengths(freq), p.prefix_bits, v)?),
            Scheme::Additive | Scheme::AdditiveTable => {
                let table = (scheme == Scheme::AdditiveTable).then_some(p.prefix_bits);
                let codec = match p.lmax {
                    Some(lmax) => AdditiveCodec::with_lmax(freq, lmax, p.backend, table, p.sampling, p.search)?,
                    None => AdditiveCodec::new(freq, p.epsilon, p.backend, table, p.sampling, p.search)?,
                };
                CodecModel::Additive(codec)
            }
            Scheme::Multiplicative => {
                CodecModel::Multiplicative(MultiplicativeCodec::new(freq, p.c, p.sampling, p.search)?)
            }
            Scheme::Alphabetic => CodecModel::Alphabetic(AlphabeticCodec::new(freq)),
        })
    }

    /// Container scheme id.
    pub fn scheme_id(&self) -> u8 {
        match self {
            CodecModel::Compact(_) => 0,
            CodecModel::Table(_) => 1,
            CodecModel::Additive(a) if a.is_table() => 3,
            CodecModel::Additive(_) => 2,
            CodecModel::Multiplicative(m) if m.is_fallback() => 0,
            CodecModel::Multiplicative(_) => 4,
            CodecModel::Alphabetic(_) => 5,
        }
    }

    /// Whether the multiplicative scheme fell back to an exact code.
    pub fn is_fallback(&self) -> bool {
        matches!(self, CodecModel::Multiplicative(m) if m.is_fallback())
    }

    /// Predecessor search strategy stored in the container flags.
    pub fn search(&self) -> SearchStrategy {
        match self {
            CodecModel::Compact(c) => c.search(),
            CodecModel::Additive(a) => a.search(),
            CodecModel::Multiplicative(m) => m.search(),
            _ => SearchStrategy::Sequential,
        }
    }

    /// Rebuilds a codec from its serialized model.
    pub fn read_model(scheme: u8, fallback: bool, search: SearchStrategy, buf: &[u8]) -> Result<(Self, usize)> {
        let mut cur = Cursor::new(buf);
        let model = match (scheme, fallback) {
            (0, false) => CodecModel::Compact(CompactCodec::read_model(&mut cur, search)?),
            (0, true) => CodecModel::Multiplicative(MultiplicativeCodec::from_exact(CompactCodec::read_model(
                &mut cur, search,
            )?)),
            (1, false) => CodecModel::Table(TableCodec::read_model(&mut cur)?),
            (2, false) | (3, false) => {
                CodecModel::Additive(AdditiveCodec::read_model(&mut cur, scheme == 3, search)?)
            }
            (4, false) => CodecModel::Multiplicative(MultiplicativeCodec::read_model(&mut cur, search)?),
            (5, false) => CodecModel::Alphabetic(AlphabeticCodec::read_model(&mut cur)?),
            (id, f) => {
                return Err(Error::Format(format!(
                    "unsupported scheme id {id}{}",
                    if f { " with fallback flag" } else { "" }
                )))
            }
        };
        Ok((model, cur.position()))
    }

    fn inner(&self) -> &dyn SymbolCodec {
        match self {
            CodecModel::Compact(c) => c,
            CodecModel::Table(c) => c,
            CodecModel::Additive(c) => c,
            CodecModel::Multiplicative(c) => c,
            CodecModel::Alphabetic(c) => c,
        }
    }
}

impl SymbolCodec for CodecModel {
    fn alphabet_size(&self) -> usize {
        self.inner().alphabet_size()
    }

    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()> {
        self.inner().encode(symbol, w)
    }

    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32> {
        self.inner().decode(r)
    }

    fn codeword_lengths(&self) -> Vec<u8> {
        self.inner().codeword_lengths()
    }

    fn write_model(&self, out: &mut Vec<u8>) {
        self.inner().write_model(out)
    }

    fn structure_bits(&self) -> (u64, u64) {
        self.inner().structure_bits()
    }

    fn encode_all(&self, symbols: &[u32]) -> Result<(Vec<u8>, u64)> {
        self.inner().encode_all(symbols)
    }

    fn decode_all(&self, bytes: &[u8], bits: u64, count: usize) -> Result<Vec<u32>> {
        self.inner().decode_all(bytes, bits, count)
    }
}

#[inline]
pub(crate) fn check_symbol(symbol: u32, n: usize) -> Result<()> {
    if symbol as usize >= n {
        return Err(Error::OutOfBounds {
            index: symbol as usize,
            len: n,
        });
    }
    Ok(())
}

/// Reads a length vector written as `n` varint then one byte per symbol.
pub(crate) fn read_lengths(cur: &mut Cursor<'_>) -> Result<crate::codes::CodeLengths> {
    let n = cur.get_usize("alphabet size", u32::MAX as usize)?;
    let raw = cur.bytes(n)?.to_vec();
    crate::codes::CodeLengths::new(raw).map_err(|e| Error::Format(format!("code lengths: {e}")))
}

pub(crate) fn write_lengths(out: &mut Vec<u8>, lengths: &crate::codes::CodeLengths) {
    crate::varint::put(out, lengths.len() as u64);
    out.extend_from_slice(lengths.lengths());
}
