use super::{check_symbol, CompactCodec, SymbolCodec};
use crate::bitio::{BitReader, BitWriter};
use crate::codes::{ceil_log2, huffman_lengths, LevelTable, SearchStrategy, MAX_CODE_LEN};
use crate::corpus::FrequencyTable;
use crate::limited::{limit_milidiu, limit_optimal};
use crate::varint::{self, Cursor};
use crate::{Error, Result};

const MAX_LOAD: f64 = 0.7;

/// `⌈lg n⌉ + ⌈1/(c − 1)⌉ + 1`.
pub fn multiplicative_lmax(n: usize, c: f64) -> Result<u32> {
    if !(c > 1.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!("approximation factor {c} must exceed 1")));
    }
    let extra = (1.0 / (c - 1.0) - 1e-9).ceil();
    let lmax = ceil_log2(n) as f64 + extra + 1.0;
    if lmax >= MAX_CODE_LEN as f64 {
        return Err(Error::InvalidParameter(format!(
            "approximation factor {c} needs codewords longer than {MAX_CODE_LEN} bits"
        )));
    }
    Ok(lmax as u32)
}

/// Longest short codeword: `⌊lmax/c⌋ + 2`.
pub fn short_threshold(lmax: u32, c: f64) -> u32 {
    (lmax as f64 / c + 1e-9).floor() as u32 + 2
}

fn is_prime(m: usize) -> bool {
    m >= 2 && (2..).take_while(|d| d * d <= m).all(|d| !m.is_multiple_of(d))
}

/// Open-addressing map from frequent symbols to their ids `1..=S`,
/// probed by double hashing.
#[derive(Debug, Clone)]
struct SymbolHash {
    slots: Vec<u32>,
}

impl SymbolHash {
    fn new(ihash: &[u32]) -> Self {
        let want = ((ihash.len() as f64 / MAX_LOAD).ceil() as usize).max(3);
        let m = (want..).find(|&m| is_prime(m)).unwrap();
        let mut h = SymbolHash { slots: vec![0; m] };
        for (k, &x) in ihash.iter().enumerate() {
            let mut p = h.home(x);
            let step = h.step(x);
            while h.slots[p] != 0 {
                p = (p + step) % m;
            }
            h.slots[p] = k as u32 + 1;
        }
        h
    }

    #[inline]
    fn home(&self, x: u32) -> usize {
        x as usize % self.slots.len()
    }

    #[inline]
    fn step(&self, x: u32) -> usize {
        1 + x as usize % (self.slots.len() - 1)
    }

    #[inline]
    fn get(&self, x: u32, ihash: &[u32]) -> Option<u32> {
        let m = self.slots.len();
        let mut p = self.home(x);
        let step = self.step(x);
        loop {
            match self.slots[p] {
                0 => return None,
                id if ihash[id as usize - 1] == x => return Some(id),
                _ => p = (p + step) % m,
            }
        }
    }
}

#[derive(Debug, Clone)]
struct Split {
    n: usize,
    lmax: u32,
    c: f64,
    /// Canonical layout restricted to the short levels.
    short: LevelTable,
    /// `first[ℓ] << (lmax + 1 − ℓ)` per occupied short level.
    padded: Vec<u64>,
    ihash: Vec<u32>,
    hash: SymbolHash,
    c_long: u64,
    search: SearchStrategy,
}

#[derive(Debug, Clone)]
enum Repr {
    Split(Box<Split>),
    Exact(CompactCodec),
}

/// Code within a factor `c` of optimal that stores only its frequent
/// symbols.
///
/// Lengths come from a code limited to `lmax`. Symbols with codewords of at
/// most `⌊lmax/c⌋ + 2` bits keep them; each of the others is written as the
/// `(lmax+1)`-bit integer `c'_long + i`, where `c'_long` is the first long
/// codeword padded to `lmax + 1` bits. When at least half of the symbols
/// are short, an exact compact codec is used instead.
#[derive(Debug, Clone)]
pub struct MultiplicativeCodec {
    repr: Repr,
}

impl MultiplicativeCodec {
    pub fn new(freq: &FrequencyTable, c: f64, sampling: u32, search: SearchStrategy) -> Result<Self> {
        let n = freq.len();
        let lmax = multiplicative_lmax(n, c)?;
        let exact = |freq: &FrequencyTable| -> Result<Self> {
            let mut lengths = huffman_lengths(freq);
            if lengths.lmax() as u32 > lmax + 1 {
                lengths = limit_optimal(freq, lmax + 1)?;
            }
            Ok(Self::from_exact(CompactCodec::new(&lengths, sampling, search)?))
        };
        if n == 1 {
            return exact(freq);
        }
        let lengths = limit_milidiu(freq, lmax)?;
        let thr = short_threshold(lmax, c);
        let hist = lengths.histogram();
        let short_counts: Vec<u64> = hist.iter().take(thr as usize + 1).copied().collect();
        let s: u64 = short_counts.iter().sum();
        if 2 * s as usize >= n || s == 0 {
            return exact(freq);
        }
        let full = LevelTable::from_counts(hist)?;
        let long_level = (thr as u8 + 1..=full.lmax())
            .find(|&l| full.count(l) > 0)
            .expect("some symbol is long");
        let c_long = full.first(long_level) << (lmax + 1 - long_level as u32);
        if c_long + n as u64 > 1u64 << (lmax + 1) {
            return exact(freq);
        }

        let mut ihash: Vec<u32> = Vec::with_capacity(s as usize);
        for l in 1..=thr as u8 {
            ihash.extend(
                lengths
                    .lengths()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &x)| x == l)
                    .map(|(i, _)| i as u32),
            );
        }
        Ok(MultiplicativeCodec {
            repr: Repr::Split(Box::new(Split::assemble(n, lmax, c, short_counts, ihash, c_long, search)?)),
        })
    }

    pub(crate) fn from_exact(codec: CompactCodec) -> Self {
        MultiplicativeCodec {
            repr: Repr::Exact(codec),
        }
    }

    /// An exact code was used because too many symbols were short.
    pub fn is_fallback(&self) -> bool {
        matches!(self.repr, Repr::Exact(_))
    }

    /// Length limit of the underlying code; long codewords take one more bit.
    pub fn lmax(&self) -> u32 {
        match &self.repr {
            Repr::Split(s) => s.lmax,
            Repr::Exact(c) => c.lmax() as u32,
        }
    }

    /// Number of frequent symbols stored in the hash; zero for the exact
    /// fallback, which has none.
    pub fn short_symbols(&self) -> usize {
        match &self.repr {
            Repr::Split(s) => s.ihash.len(),
            Repr::Exact(_) => 0,
        }
    }

    /// `c'_long`, when the split representation is in use.
    pub fn c_long(&self) -> Option<u64> {
        match &self.repr {
            Repr::Split(s) => Some(s.c_long),
            Repr::Exact(_) => None,
        }
    }

    pub fn search(&self) -> SearchStrategy {
        match &self.repr {
            Repr::Split(s) => s.search,
            Repr::Exact(c) => c.search(),
        }
    }

    pub(crate) fn read_model(cur: &mut Cursor<'_>, search: SearchStrategy) -> Result<Self> {
        let n = cur.get_usize("alphabet size", u32::MAX as usize)?;
        let lmax = cur.get_usize("length limit", MAX_CODE_LEN as usize - 1)? as u32;
        let c = f64::from_bits(u64::from_le_bytes(cur.bytes(8)?.try_into().unwrap()));
        let levels = cur.get_usize("short levels", lmax as usize)?;
        let mut counts = vec![0u64];
        for _ in 0..levels {
            let l = cur.get_usize("short level", lmax as usize)?;
            if l < counts.len() {
                return Err(Error::Format("short levels not ascending".into()));
            }
            counts.resize(l + 1, 0);
            counts[l] = cur.get()?;
        }
        let s: u64 = counts.iter().sum();
        if s == 0 || s as usize >= n {
            return Err(Error::Format("short symbol count out of range".into()));
        }
        let mut ihash = Vec::with_capacity(s as usize);
        for _ in 0..s {
            let x = cur.get_usize("short symbol", n - 1)?;
            ihash.push(x as u32);
        }
        let c_long = cur.get()?;
        let split = Split::assemble(n, lmax, c, counts, ihash, c_long, search)
            .map_err(|e| Error::Format(e.to_string()))?;
        Ok(MultiplicativeCodec {
            repr: Repr::Split(Box::new(split)),
        })
    }
}

impl Split {
    fn assemble(
        n: usize,
        lmax: u32,
        c: f64,
        short_counts: Vec<u64>,
        ihash: Vec<u32>,
        c_long: u64,
        search: SearchStrategy,
    ) -> Result<Self> {
        let short = LevelTable::from_counts(short_counts)?;
        if c_long + n as u64 > 1u64 << (lmax + 1) || short.lmax() as u32 > lmax {
            return Err(Error::InvalidParameter("long codewords overflow lmax + 1 bits".into()));
        }
        let padded: Vec<u64> = short
            .occupied()
            .iter()
            .map(|&l| short.first(l) << (lmax + 1 - l as u32))
            .collect();
        // Short codes must stay below the long region.
        let last = *short.occupied().last().unwrap();
        if (short.first(last) + short.count(last)) << (lmax + 1 - last as u32) > c_long {
            return Err(Error::InvalidParameter("short and long codewords overlap".into()));
        }
        let mut seen = vec![false; n];
        for &x in &ihash {
            if std::mem::replace(&mut seen[x as usize], true) {
                return Err(Error::InvalidParameter("duplicate frequent symbol".into()));
            }
        }
        let hash = SymbolHash::new(&ihash);
        Ok(Split {
            n,
            lmax,
            c,
            short,
            padded,
            ihash,
            hash,
            c_long,
            search,
        })
    }

    #[inline]
    fn short_level(&self, window: u64) -> usize {
        match self.search {
            SearchStrategy::Sequential => {
                let mut k = 0;
                while k + 1 < self.padded.len() && self.padded[k + 1] <= window {
                    k += 1;
                }
                k
            }
            SearchStrategy::Binary => self.padded.partition_point(|&p| p <= window) - 1,
        }
    }
}

impl SymbolCodec for MultiplicativeCodec {
    fn alphabet_size(&self) -> usize {
        match &self.repr {
            Repr::Split(s) => s.n,
            Repr::Exact(c) => c.alphabet_size(),
        }
    }

    #[inline]
    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()> {
        let s = match &self.repr {
            Repr::Exact(c) => return c.encode(symbol, w),
            Repr::Split(s) => s,
        };
        check_symbol(symbol, s.n)?;
        match s.hash.get(symbol, &s.ihash) {
            Some(id) => {
                let pos = id as u64 - 1;
                let occ = s.short.occupied();
                let k = occ.partition_point(|&l| s.short.start(l) <= pos) - 1;
                let l = occ[k];
                w.write_bits(s.short.first(l) + pos - s.short.start(l), l as u32);
            }
            None => w.write_bits(s.c_long + symbol as u64, s.lmax + 1),
        }
        Ok(())
    }

    #[inline]
    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32> {
        let s = match &self.repr {
            Repr::Exact(c) => return c.decode(r),
            Repr::Split(s) => s,
        };
        let width = s.lmax + 1;
        let window = r.peek_bits(width);
        if window >= s.c_long {
            let symbol = window - s.c_long;
            if symbol >= s.n as u64 {
                return Err(Error::CorruptStream("long codeword beyond the alphabet"));
            }
            r.skip(width)?;
            return Ok(symbol as u32);
        }
        let l = s.short.occupied()[s.short_level(window)];
        let offset = (window >> (width - l as u32)) - s.short.first(l);
        if offset >= s.short.count(l) {
            return Err(Error::CorruptStream("codeword beyond the last code of its level"));
        }
        r.skip(l as u32)?;
        Ok(s.ihash[(s.short.start(l) + offset) as usize])
    }

    fn codeword_lengths(&self) -> Vec<u8> {
        let s = match &self.repr {
            Repr::Exact(c) => return c.codeword_lengths(),
            Repr::Split(s) => s,
        };
        let mut out = vec![s.lmax as u8 + 1; s.n];
        for &l in s.short.occupied() {
            let from = s.short.start(l) as usize;
            for &x in &s.ihash[from..from + s.short.count(l) as usize] {
                out[x as usize] = l;
            }
        }
        out
    }

    fn write_model(&self, out: &mut Vec<u8>) {
        let s = match &self.repr {
            Repr::Exact(c) => return c.write_model(out),
            Repr::Split(s) => s,
        };
        varint::put(out, s.n as u64);
        varint::put(out, s.lmax as u64);
        out.extend_from_slice(&s.c.to_bits().to_le_bytes());
        varint::put(out, s.short.occupied().len() as u64);
        for &l in s.short.occupied() {
            varint::put(out, l as u64);
            varint::put(out, s.short.count(l));
        }
        for &x in &s.ihash {
            varint::put(out, x as u64);
        }
        varint::put(out, s.c_long);
    }

    fn structure_bits(&self) -> (u64, u64) {
        let s = match &self.repr {
            Repr::Exact(c) => return c.structure_bits(),
            Repr::Split(s) => s,
        };
        let levels = (s.short.lmax() as u64 + 1) * 64 * 3;
        let ihash = s.ihash.len() as u64 * 32;
        let hash = s.hash.slots.len() as u64 * 32;
        (hash + ihash + levels + 64, ihash + levels + s.padded.len() as u64 * 64 + 64)
    }
}
