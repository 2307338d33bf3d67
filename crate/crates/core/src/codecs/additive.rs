use std::str::FromStr;

use super::{CompactCodec, SymbolCodec, TableCodec, TableVariant};
use crate::bitio::{BitReader, BitWriter};
use crate::codes::{ceil_log2, CodeLengths, SearchStrategy, PHI};
use crate::corpus::FrequencyTable;
use crate::limited::{limit_milidiu, limit_optimal};
use crate::varint::Cursor;
use crate::{Error, Result};

/// Length-limiting algorithm behind the additive scheme.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum AdditiveBackend {
    /// Carries the `L(P) + ε` guarantee.
    #[default]
    Milidiu,
    /// Package-merge; never worse.
    Optimal,
}

impl FromStr for AdditiveBackend {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "milidiu" => Ok(AdditiveBackend::Milidiu),
            "optimal" => Ok(AdditiveBackend::Optimal),
            other => Err(Error::InvalidParameter(format!("unknown additive backend {other:?}"))),
        }
    }
}

/// `⌈lg n⌉ + ⌈log_φ(1/ε)⌉ + 1`.
pub fn additive_lmax(n: usize, epsilon: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon < 0.5) {
        return Err(Error::InvalidParameter(format!("epsilon {epsilon} outside (0, 1/2)")));
    }
    let extra = ((1.0 / epsilon).ln() / PHI.ln() - 1e-9).ceil() as u32;
    Ok(ceil_log2(n) + extra + 1)
}

#[derive(Debug, Clone)]
enum Repr {
    Compact(Box<CompactCodec>),
    Table(Box<TableCodec>),
}

/// Canonical code whose lengths are capped so that the average length stays
/// within `ε` of optimal.
#[derive(Debug, Clone)]
pub struct AdditiveCodec {
    lmax: u32,
    epsilon: Option<f64>,
    backend: AdditiveBackend,
    repr: Repr,
}

impl AdditiveCodec {
    /// Builds the code for `ε`. `table` selects the table representation
    /// with that prefix width instead of the compact one.
    pub fn new(
        freq: &FrequencyTable,
        epsilon: f64,
        backend: AdditiveBackend,
        table: Option<u32>,
        sampling: u32,
        search: SearchStrategy,
    ) -> Result<Self> {
        if freq.len() < 2 {
            return Err(Error::InvalidParameter("additive scheme needs at least two symbols".into()));
        }
        let lmax = additive_lmax(freq.len(), epsilon)?;
        let mut codec = Self::with_lmax(freq, lmax, backend, table, sampling, search)?;
        codec.epsilon = Some(epsilon);
        Ok(codec)
    }

    /// Builds the code for an explicit length limit.
    pub fn with_lmax(
        freq: &FrequencyTable,
        lmax: u32,
        backend: AdditiveBackend,
        table: Option<u32>,
        sampling: u32,
        search: SearchStrategy,
    ) -> Result<Self> {
        let lmax = lmax.min(crate::codes::MAX_CODE_LEN as u32);
        let lengths = match backend {
            AdditiveBackend::Milidiu => limit_milidiu(freq, lmax)?,
            AdditiveBackend::Optimal => limit_optimal(freq, lmax)?,
        };
        let repr = Self::represent(&lengths, table, sampling, search)?;
        Ok(AdditiveCodec {
            lmax,
            epsilon: None,
            backend,
            repr,
        })
    }

    fn represent(lengths: &CodeLengths, table: Option<u32>, sampling: u32, search: SearchStrategy) -> Result<Repr> {
        Ok(match table {
            Some(b) => Repr::Table(Box::new(TableCodec::new(lengths, b, TableVariant::TableE)?)),
            None => Repr::Compact(Box::new(CompactCodec::new(lengths, sampling, search)?)),
        })
    }

    /// The length limit in force.
    pub fn lmax(&self) -> u32 {
        self.lmax
    }

    pub fn epsilon(&self) -> Option<f64> {
        self.epsilon
    }

    pub fn backend(&self) -> AdditiveBackend {
        self.backend
    }

    pub fn is_table(&self) -> bool {
        matches!(self.repr, Repr::Table(_))
    }

    pub fn search(&self) -> SearchStrategy {
        match &self.repr {
            Repr::Compact(c) => c.search(),
            Repr::Table(_) => SearchStrategy::Sequential,
        }
    }

    fn inner(&self) -> &dyn SymbolCodec {
        match &self.repr {
            Repr::Compact(c) => c.as_ref(),
            Repr::Table(t) => t.as_ref(),
        }
    }

    pub(crate) fn read_model(cur: &mut Cursor<'_>, table: bool, search: SearchStrategy) -> Result<Self> {
        let lmax = cur.get_usize("length limit", crate::codes::MAX_CODE_LEN as usize)? as u32;
        let backend = match cur.byte()? {
            0 => AdditiveBackend::Milidiu,
            1 => AdditiveBackend::Optimal,
            b => return Err(Error::Format(format!("additive backend {b}"))),
        };
        let bits = u64::from_le_bytes(cur.bytes(8)?.try_into().unwrap());
        let epsilon = (bits != 0).then(|| f64::from_bits(bits));
        let repr = if table {
            Repr::Table(Box::new(TableCodec::read_model(cur)?))
        } else {
            Repr::Compact(Box::new(CompactCodec::read_model(cur, search)?))
        };
        let codec = AdditiveCodec {
            lmax,
            epsilon,
            backend,
            repr,
        };
        if codec.codeword_lengths().iter().any(|&l| l as u32 > lmax) {
            return Err(Error::Format("codeword longer than the length limit".into()));
        }
        Ok(codec)
    }
}

impl SymbolCodec for AdditiveCodec {
    fn alphabet_size(&self) -> usize {
        self.inner().alphabet_size()
    }

    #[inline]
    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()> {
        match &self.repr {
            Repr::Compact(c) => c.encode(symbol, w),
            Repr::Table(t) => t.encode(symbol, w),
        }
    }

    #[inline]
    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32> {
        match &self.repr {
            Repr::Compact(c) => c.decode(r),
            Repr::Table(t) => t.decode(r),
        }
    }

    fn codeword_lengths(&self) -> Vec<u8> {
        self.inner().codeword_lengths()
    }

    fn write_model(&self, out: &mut Vec<u8>) {
        crate::varint::put(out, self.lmax as u64);
        out.push(match self.backend {
            AdditiveBackend::Milidiu => 0,
            AdditiveBackend::Optimal => 1,
        });
        out.extend_from_slice(&self.epsilon.map_or(0, f64::to_bits).to_le_bytes());
        self.inner().write_model(out);
    }

    fn structure_bits(&self) -> (u64, u64) {
        self.inner().structure_bits()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{avg_length, huffman_lengths};

    #[test]
    fn lmax_formula() {
        assert_eq!(additive_lmax(16, 0.499_999).unwrap(), 7);
        assert_eq!(additive_lmax(1024, 0.1).unwrap(), 16);
        assert!(additive_lmax(16, 0.5).is_err());
        assert!(additive_lmax(16, 0.0).is_err());
        assert!(additive_lmax(16, f64::NAN).is_err());
    }

    #[test]
    fn within_epsilon() {
        let counts: Vec<u64> = (0..40).map(|i| 1u64 << (i % 30)).collect();
        let f = FrequencyTable::from_counts(counts).unwrap();
        let opt = avg_length(&huffman_lengths(&f), &f);
        for eps in [0.49, 0.25, 0.1, 0.01] {
            for backend in [AdditiveBackend::Milidiu, AdditiveBackend::Optimal] {
                let c = AdditiveCodec::new(&f, eps, backend, None, 32, SearchStrategy::Sequential).unwrap();
                let l = CodeLengths::new(c.codeword_lengths()).unwrap();
                assert!(l.lmax() as u32 <= c.lmax());
                assert!(avg_length(&l, &f) <= opt + eps + 1e-9);
            }
        }
    }

    #[test]
    fn model_roundtrip() {
        let f = FrequencyTable::from_counts(vec![90, 5, 3, 1, 1]).unwrap();
        for table in [None, Some(14)] {
            let c = AdditiveCodec::with_lmax(&f, 3, AdditiveBackend::Optimal, table, 16, SearchStrategy::Binary)
                .unwrap();
            let mut buf = Vec::new();
            c.write_model(&mut buf);
            let back = AdditiveCodec::read_model(&mut Cursor::new(&buf), table.is_some(), SearchStrategy::Binary)
                .unwrap();
            assert_eq!(back.codeword_lengths(), c.codeword_lengths());
            assert_eq!(back.lmax(), 3);
            assert_eq!(back.epsilon(), None);
        }
    }

    #[test]
    fn needs_two_symbols() {
        let f = FrequencyTable::from_counts(vec![4]).unwrap();
        assert!(AdditiveCodec::new(&f, 0.1, AdditiveBackend::Milidiu, None, 32, SearchStrategy::Sequential).is_err());
    }
}
