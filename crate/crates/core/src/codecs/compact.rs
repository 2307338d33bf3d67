use super::{check_symbol, SymbolCodec};
use crate::bitio::{BitReader, BitWriter};
use crate::codes::{CodeLengths, LevelTable, SearchStrategy};
use crate::succinct::WaveletTree;
use crate::varint::{self, Cursor};
use crate::{Error, Result};

/// Canonical code stored as a wavelet tree over the level sequence `L`.
///
/// Encoding `i` emits `first[L[i]] + rank_{L[i]}(L, i + 1) − 1`; decoding
/// finds the length from the padded `first` keys and maps the offset within
/// the level back with `select`.
#[derive(Debug, Clone)]
pub struct CompactCodec {
    table: LevelTable,
    wt: WaveletTree,
    search: SearchStrategy,
}

impl CompactCodec {
    pub fn new(lengths: &CodeLengths, sampling: u32, search: SearchStrategy) -> Result<Self> {
        let table = LevelTable::from_counts(lengths.histogram())?;
        let wt = WaveletTree::new(lengths.lengths(), sampling)?;
        Ok(CompactCodec { table, wt, search })
    }

    pub fn table(&self) -> &LevelTable {
        &self.table
    }

    pub fn wavelet_tree(&self) -> &WaveletTree {
        &self.wt
    }

    pub fn search(&self) -> SearchStrategy {
        self.search
    }

    pub fn lmax(&self) -> u8 {
        self.table.lmax()
    }

    pub(crate) fn read_model(cur: &mut Cursor<'_>, search: SearchStrategy) -> Result<Self> {
        let lmax = cur.byte()?;
        if lmax == 0 || lmax > crate::codes::MAX_CODE_LEN {
            return Err(Error::Format(format!("maximum code length {lmax}")));
        }
        let mut counts = vec![0u64; lmax as usize + 1];
        for c in counts.iter_mut().skip(1) {
            *c = cur.get()?;
        }
        let table = LevelTable::from_counts(counts).map_err(|e| Error::Format(format!("level table: {e}")))?;
        let wt = WaveletTree::read_from(cur)?;
        if table.lmax() != lmax {
            return Err(Error::Format("highest level is empty".into()));
        }
        for l in 1..=lmax {
            if wt.occurrences(l) as u64 != table.count(l) {
                return Err(Error::Format("level counts disagree with the wavelet tree".into()));
            }
        }
        Ok(CompactCodec { table, wt, search })
    }
}

impl SymbolCodec for CompactCodec {
    fn alphabet_size(&self) -> usize {
        self.wt.len()
    }

    #[inline]
    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()> {
        check_symbol(symbol, self.wt.len())?;
        let (l, rank) = self.wt.access_and_rank(symbol as usize);
        w.write_bits(self.table.first(l) + rank as u64 - 1, l as u32);
        Ok(())
    }

    #[inline]
    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32> {
        let lmax = self.table.lmax();
        let window = r.peek_bits(lmax as u32);
        let l = self.table.level_of(window, self.search)?;
        let offset = (window >> (lmax - l)) - self.table.first(l);
        if offset >= self.table.count(l) {
            return Err(Error::CorruptStream("codeword beyond the last code of its level"));
        }
        r.skip(l as u32)?;
        Ok(self.wt.select_unchecked(l, offset as usize + 1) as u32)
    }

    fn codeword_lengths(&self) -> Vec<u8> {
        (0..self.wt.len()).map(|i| self.wt.access_unchecked(i)).collect()
    }

    fn write_model(&self, out: &mut Vec<u8>) {
        out.push(self.table.lmax());
        for l in 1..=self.table.lmax() {
            varint::put(out, self.table.count(l));
        }
        self.wt.write_to(out);
    }

    fn structure_bits(&self) -> (u64, u64) {
        let wt = self.wt.payload_bits() + self.wt.rank_overhead_bits();
        let levels = (self.table.lmax() as u64 + 1) * 64;
        // first[] for encoding; counts and padded keys for decoding.
        (
            wt + levels,
            wt + self.wt.select_overhead_bits() + 3 * levels,
        )
    }
}
