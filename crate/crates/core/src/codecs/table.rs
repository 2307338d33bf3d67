use std::str::FromStr;

use super::{check_symbol, read_lengths, write_lengths, SymbolCodec};
use crate::bitio::{BitReader, BitWriter};
use crate::codes::{canonicalize, CodeLengths, LevelTable, SearchStrategy};
use crate::varint::Cursor;
use crate::{Error, Result};

/// Default prefix width of the lookup tables.
pub const DEFAULT_PREFIX_BITS: u32 = 14;

const MAX_PREFIX_BITS: u32 = 24;

/// Decoding loop used by [`TableCodec`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TableVariant {
    /// Probe levels upward from the shortest one.
    Table,
    /// Start probing at the shortest length compatible with a `b`-bit prefix.
    TableS,
    /// Decode directly from the `b`-bit prefix when a whole codeword fits.
    #[default]
    TableE,
}

impl TableVariant {
    pub const ALL: [TableVariant; 3] = [TableVariant::Table, TableVariant::TableS, TableVariant::TableE];

    fn id(self) -> u8 {
        self as u8
    }

    fn from_id(id: u8) -> Result<Self> {
        Self::ALL
            .get(id as usize)
            .copied()
            .ok_or_else(|| Error::Format(format!("table variant {id}")))
    }
}

impl FromStr for TableVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "table" => Ok(TableVariant::Table),
            "table-s" => Ok(TableVariant::TableS),
            "table-e" => Ok(TableVariant::TableE),
            other => Err(Error::InvalidParameter(format!("unknown table variant {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct Entry {
    symbol: u32,
    /// Codeword length, or 0 if the prefix does not determine a codeword.
    len: u8,
    /// Index into the occupied levels of the shortest compatible length.
    level: u8,
}

/// Explicit canonical code: codeword per symbol plus symbols in leaf order,
/// with optional `b`-bit prefix tables for decoding.
#[derive(Debug, Clone)]
pub struct TableCodec {
    lengths: CodeLengths,
    codes: Vec<u64>,
    symb: Vec<u32>,
    table: LevelTable,
    prefix_bits: u32,
    variant: TableVariant,
    /// Width actually indexed: `min(b, ℓmax)`.
    width: u32,
    entries: Vec<Entry>,
}

impl TableCodec {
    pub fn new(lengths: &CodeLengths, prefix_bits: u32, variant: TableVariant) -> Result<Self> {
        if prefix_bits == 0 || prefix_bits > MAX_PREFIX_BITS {
            return Err(Error::InvalidParameter(format!(
                "prefix width {prefix_bits} outside 1..={MAX_PREFIX_BITS}"
            )));
        }
        let cc = canonicalize(lengths);
        let table = cc.table().clone();
        let lmax = table.lmax() as u32;
        let width = prefix_bits.min(lmax);
        let mut codec = TableCodec {
            lengths: lengths.clone(),
            codes: cc.codewords(),
            symb: cc.leaf_order(),
            table,
            prefix_bits,
            variant,
            width,
            entries: Vec::new(),
        };
        codec.entries = (0..1u64 << width).map(|p| codec.entry(p)).collect();
        Ok(codec)
    }

    fn entry(&self, prefix: u64) -> Entry {
        let lmax = self.table.lmax() as u32;
        let window = prefix << (lmax - self.width);
        let level = self
            .table
            .level_of(window, SearchStrategy::Sequential)
            .expect("padded first of the shortest level is zero");
        let idx = self.table.occupied().iter().position(|&l| l == level).unwrap() as u8;
        let mut e = Entry {
            symbol: 0,
            len: 0,
            level: idx,
        };
        for &l in &self.table.occupied()[idx as usize..] {
            if l as u32 > self.width {
                break;
            }
            let c = prefix >> (self.width - l as u32);
            if c < self.table.first(l) + self.table.count(l) {
                e.symbol = self.symb[(self.table.start(l) + c - self.table.first(l)) as usize];
                e.len = l;
                break;
            }
        }
        e
    }

    pub fn variant(&self) -> TableVariant {
        self.variant
    }

    pub fn with_variant(mut self, variant: TableVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn prefix_bits(&self) -> u32 {
        self.prefix_bits
    }

    pub fn lengths(&self) -> &CodeLengths {
        &self.lengths
    }

    pub fn lmax(&self) -> u8 {
        self.table.lmax()
    }

    /// Decodes with an explicit variant.
    #[inline]
    pub fn decode_with(&self, r: &mut BitReader<'_>, variant: TableVariant) -> Result<u32> {
        let lmax = self.table.lmax() as u32;
        let window = r.peek_bits(lmax);
        let from = match variant {
            TableVariant::Table => 0,
            TableVariant::TableS => self.entries[(window >> (lmax - self.width)) as usize].level as usize,
            TableVariant::TableE => {
                let e = self.entries[(window >> (lmax - self.width)) as usize];
                if e.len > 0 {
                    r.skip(e.len as u32)?;
                    return Ok(e.symbol);
                }
                e.level as usize
            }
        };
        for &l in &self.table.occupied()[from..] {
            let c = window >> (lmax - l as u32);
            let first = self.table.first(l);
            if c < first + self.table.count(l) {
                r.skip(l as u32)?;
                return Ok(self.symb[(self.table.start(l) + c - first) as usize]);
            }
        }
        Err(Error::CorruptStream("window matches no codeword"))
    }

    pub(crate) fn read_model(cur: &mut Cursor<'_>) -> Result<Self> {
        let lengths = read_lengths(cur)?;
        let b = cur.get_usize("prefix width", MAX_PREFIX_BITS as usize)? as u32;
        let variant = TableVariant::from_id(cur.byte()?)?;
        TableCodec::new(&lengths, b, variant).map_err(|e| Error::Format(e.to_string()))
    }
}

impl SymbolCodec for TableCodec {
    fn alphabet_size(&self) -> usize {
        self.codes.len()
    }

    #[inline]
    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()> {
        check_symbol(symbol, self.codes.len())?;
        let s = symbol as usize;
        w.write_bits(self.codes[s], self.lengths.lengths()[s] as u32);
        Ok(())
    }

    #[inline]
    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32> {
        self.decode_with(r, self.variant)
    }

    fn codeword_lengths(&self) -> Vec<u8> {
        self.lengths.lengths().to_vec()
    }

    fn write_model(&self, out: &mut Vec<u8>) {
        write_lengths(out, &self.lengths);
        crate::varint::put(out, self.prefix_bits as u64);
        out.push(self.variant.id());
    }

    fn structure_bits(&self) -> (u64, u64) {
        let n = self.codes.len() as u64;
        let levels = (self.table.lmax() as u64 + 1) * 64 * 3;
        let tables = match self.variant {
            TableVariant::Table => 0,
            TableVariant::TableS => self.entries.len() as u64 * 8,
            TableVariant::TableE => self.entries.len() as u64 * 48,
        };
        (n * (64 + 8), n * 32 + levels + tables)
    }
}
