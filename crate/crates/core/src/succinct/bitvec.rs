use crate::{Error, Result};

const WORD: usize = 64;
const WORDS_PER_SUPER: usize = 4;
const SUPER: usize = WORD * WORDS_PER_SUPER;

/// Select sampling periods exercised by the benchmarks.
pub const SELECT_SAMPLINGS: [u32; 4] = [16, 32, 64, 128];

/// Plain bitvector with a two-level rank directory and sampled select.
///
/// Rank uses one absolute 64-bit count per 256-bit superblock plus one
/// 8-bit relative count per 64-bit word, a 37.5% overhead. Select stores the
/// position of every `sampling`-th one and every `sampling`-th zero and then
/// scans superblocks and words from the nearest sample.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RankSelect {
    words: Vec<u64>,
    len: usize,
    ones: usize,
    supers: Vec<u64>,
    blocks: Vec<u8>,
    sampling: u32,
    samples1: Vec<u64>,
    samples0: Vec<u64>,
}

/// Accumulates bits before building the directories.
#[derive(Debug, Default, Clone)]
pub struct BitBuilder {
    words: Vec<u64>,
    len: usize,
}

impl BitBuilder {
    pub fn with_capacity(bits: usize) -> Self {
        BitBuilder {
            words: Vec::with_capacity(bits.div_ceil(WORD)),
            len: 0,
        }
    }

    #[inline]
    pub fn push(&mut self, bit: bool) {
        if self.len.is_multiple_of(WORD) {
            self.words.push(0);
        }
        if bit {
            *self.words.last_mut().unwrap() |= 1 << (self.len % WORD);
        }
        self.len += 1;
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn build(self, sampling: u32) -> RankSelect {
        RankSelect::from_words(self.words, self.len, sampling)
    }
}

impl RankSelect {
    pub fn from_bits<I: IntoIterator<Item = bool>>(bits: I, sampling: u32) -> Self {
        let mut b = BitBuilder::default();
        bits.into_iter().for_each(|x| b.push(x));
        b.build(sampling)
    }

    /// Builds the directories over `words`; bit `i` is bit `i % 64` of
    /// word `i / 64`.
    pub fn from_words(mut words: Vec<u64>, len: usize, sampling: u32) -> Self {
        assert!(sampling >= 1, "select sampling must be positive");
        words.truncate(len.div_ceil(WORD));
        words.resize(len.div_ceil(WORD), 0);
        if !len.is_multiple_of(WORD) {
            let last = words.last_mut().unwrap();
            *last &= (1u64 << (len % WORD)) - 1;
        }

        let mut supers = Vec::with_capacity(words.len() / WORDS_PER_SUPER + 2);
        let mut blocks = Vec::with_capacity(words.len() + 1);
        let mut total = 0u64;
        let mut in_super = 0u64;
        for (w, &word) in words.iter().enumerate() {
            if w % WORDS_PER_SUPER == 0 {
                supers.push(total);
                in_super = 0;
            }
            blocks.push(in_super as u8);
            let c = word.count_ones() as u64;
            total += c;
            in_super += c;
        }
        if words.len().is_multiple_of(WORDS_PER_SUPER) {
            supers.push(total);
            in_super = 0;
        }
        blocks.push(in_super as u8);

        let ones = total as usize;
        let s = sampling as usize;
        let mut samples1 = Vec::with_capacity(ones / s + 1);
        let mut samples0 = Vec::with_capacity((len - ones) / s + 1);
        let (mut seen1, mut seen0) = (0usize, 0usize);
        for (w, &word) in words.iter().enumerate() {
            let base = w * WORD;
            let valid = (len - base).min(WORD);
            for bit in 0..valid {
                if (word >> bit) & 1 == 1 {
                    if seen1 % s == 0 {
                        samples1.push((base + bit) as u64);
                    }
                    seen1 += 1;
                } else {
                    if seen0 % s == 0 {
                        samples0.push((base + bit) as u64);
                    }
                    seen0 += 1;
                }
            }
        }

        RankSelect {
            words,
            len,
            ones,
            supers,
            blocks,
            sampling,
            samples1,
            samples0,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn count_ones(&self) -> usize {
        self.ones
    }

    pub fn count_zeros(&self) -> usize {
        self.len - self.ones
    }

    pub fn sampling(&self) -> u32 {
        self.sampling
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / WORD] >> (i % WORD)) & 1 == 1
    }

    /// Ones in `[0, i)`.
    #[inline]
    pub fn rank1(&self, i: usize) -> usize {
        debug_assert!(i <= self.len);
        let w = i / WORD;
        let mut r = self.supers[w / WORDS_PER_SUPER] as usize + self.blocks[w] as usize;
        let off = i % WORD;
        if off != 0 {
            r += (self.words[w] & ((1u64 << off) - 1)).count_ones() as usize;
        }
        r
    }

    #[inline]
    pub fn rank0(&self, i: usize) -> usize {
        i - self.rank1(i)
    }

    /// Occurrences of `bit` in `[0, i)`.
    pub fn rank(&self, bit: bool, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len,
            });
        }
        Ok(if bit { self.rank1(i) } else { self.rank0(i) })
    }

    /// Position of the `j`-th occurrence (1-based) of `bit`.
    pub fn select(&self, bit: bool, j: usize) -> Result<usize> {
        let total = if bit { self.ones } else { self.len - self.ones };
        if j == 0 || j > total {
            return Err(Error::NotFound {
                what: if bit { "bit 1" } else { "bit 0" },
                occurrence: j,
            });
        }
        Ok(if bit { self.select1(j) } else { self.select0(j) })
    }

    #[inline]
    pub fn select1(&self, j: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.ones);
        let start = self.samples1[(j - 1) / self.sampling as usize] as usize;
        let mut w = start / WORD;
        let mut sb = w / WORDS_PER_SUPER;
        while sb + 1 < self.supers.len() && (self.supers[sb + 1] as usize) < j {
            sb += 1;
        }
        if sb * WORDS_PER_SUPER > w {
            w = sb * WORDS_PER_SUPER;
        }
        let mut before = self.supers[sb] as usize + self.blocks[w] as usize;
        loop {
            let c = self.words[w].count_ones() as usize;
            if before + c >= j {
                return w * WORD + select_in_word(self.words[w], (j - before - 1) as u32);
            }
            before += c;
            w += 1;
        }
    }

    #[inline]
    pub fn select0(&self, j: usize) -> usize {
        debug_assert!(j >= 1 && j <= self.len - self.ones);
        let start = self.samples0[(j - 1) / self.sampling as usize] as usize;
        let mut w = start / WORD;
        let mut sb = w / WORDS_PER_SUPER;
        let zeros_before_super = |sb: usize| sb * SUPER - self.supers[sb] as usize;
        while sb + 1 < self.supers.len()
            && (sb + 1) * SUPER <= self.len
            && zeros_before_super(sb + 1) < j
        {
            sb += 1;
        }
        if sb * WORDS_PER_SUPER > w {
            w = sb * WORDS_PER_SUPER;
        }
        let mut before = w * WORD - (self.supers[sb] as usize + self.blocks[w] as usize);
        loop {
            let valid = (self.len - w * WORD).min(WORD);
            let inverted = !self.words[w] & mask(valid);
            let c = inverted.count_ones() as usize;
            if before + c >= j {
                return w * WORD + select_in_word(inverted, (j - before - 1) as u32);
            }
            before += c;
            w += 1;
        }
    }

    /// Bits used by the rank directory.
    pub fn rank_overhead_bits(&self) -> u64 {
        self.supers.len() as u64 * 64 + self.blocks.len() as u64 * 8
    }

    /// Bits used by the select samples.
    pub fn select_overhead_bits(&self) -> u64 {
        (self.samples1.len() + self.samples0.len()) as u64 * 64
    }

    /// Bits of the plain payload, rounded up to whole words.
    pub fn payload_bits(&self) -> u64 {
        self.words.len() as u64 * 64
    }
}

#[inline]
fn mask(bits: usize) -> u64 {
    if bits >= WORD {
        u64::MAX
    } else {
        (1u64 << bits) - 1
    }
}

/// Position of the `r`-th (0-based) set bit of `word`.
#[inline]
fn select_in_word(mut word: u64, r: u32) -> usize {
    for _ in 0..r {
        word &= word - 1;
    }
    word.trailing_zeros() as usize
}
