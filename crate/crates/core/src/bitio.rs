//! MSB-first bit streams.
//!
//! Codewords are appended most significant bit first, so a window of `k`
//! peeked bits compares numerically like a left-aligned codeword. Readers
//! zero-pad past the end of the payload, which fixed-width lookahead
//! decoding relies on.

use crate::{Error, Result};

/// Appends bit fields to a growable byte buffer.
#[derive(Debug, Default, Clone)]
pub struct BitWriter {
    buf: Vec<u8>,
    acc: u128,
    pending: u32,
    len: u64,
}

impl BitWriter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity_bits(bits: usize) -> Self {
        BitWriter {
            buf: Vec::with_capacity(bits / 8 + 1),
            ..Self::default()
        }
    }

    /// Appends the `k` low-order bits of `value`, most significant first.
    ///
    /// # Panics
    ///
    /// If `k > 64` or `value` does not fit in `k` bits.
    #[inline]
    pub fn write_bits(&mut self, value: u64, k: u32) {
        assert!(k <= 64, "bit field width {k} exceeds 64");
        assert!(
            k == 64 || value >> k == 0,
            "value {value:#x} does not fit in {k} bits"
        );
        if k == 0 {
            return;
        }
        self.acc = (self.acc << k) | value as u128;
        self.pending += k;
        while self.pending >= 8 {
            self.pending -= 8;
            self.buf.push((self.acc >> self.pending) as u8);
        }
        self.acc &= (1u128 << self.pending) - 1;
        self.len += k as u64;
    }

    /// Number of bits written so far.
    pub fn bit_len(&self) -> u64 {
        self.len
    }

    /// Pads the last byte with zeros and returns `(bytes, payload bits)`.
    pub fn finish(mut self) -> (Vec<u8>, u64) {
        if self.pending > 0 {
            self.buf.push((self.acc << (8 - self.pending)) as u8);
        }
        (self.buf, self.len)
    }
}

/// Reads bit fields from a byte buffer holding `limit` payload bits.
#[derive(Debug, Clone)]
pub struct BitReader<'a> {
    buf: &'a [u8],
    pos: u64,
    limit: u64,
}

impl<'a> BitReader<'a> {
    /// `limit` is clamped to the bits physically present in `buf`.
    pub fn new(buf: &'a [u8], limit: u64) -> Self {
        BitReader {
            buf,
            pos: 0,
            limit: limit.min(buf.len() as u64 * 8),
        }
    }

    pub fn position(&self) -> u64 {
        self.pos
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn remaining(&self) -> u64 {
        self.limit - self.pos
    }

    /// The next 64 bits, zero beyond `limit`.
    #[inline]
    fn window(&self) -> u64 {
        let byte = (self.pos / 8) as usize;
        let shift = (self.pos % 8) as u32;
        let mut w: u64;
        if byte + 9 <= self.buf.len() {
            let head = u64::from_be_bytes(self.buf[byte..byte + 8].try_into().unwrap());
            let tail = self.buf[byte + 8] as u64;
            w = if shift == 0 {
                head
            } else {
                (head << shift) | (tail >> (8 - shift))
            };
        } else {
            let mut wide: u128 = 0;
            for i in 0..9 {
                wide = (wide << 8) | *self.buf.get(byte + i).unwrap_or(&0) as u128;
            }
            w = (wide >> (8 - shift)) as u64;
        }
        let valid = self.limit - self.pos;
        if valid < 64 {
            w &= !(u64::MAX >> valid);
        }
        w
    }

    /// The next `k` bits as an integer without advancing.
    #[inline]
    pub fn peek_bits(&self, k: u32) -> u64 {
        assert!(k <= 64, "bit field width {k} exceeds 64");
        if k == 0 {
            0
        } else {
            self.window() >> (64 - k)
        }
    }

    /// Advances by `k` bits.
    #[inline]
    pub fn skip(&mut self, k: u32) -> Result<()> {
        if self.pos + k as u64 > self.limit {
            return Err(Error::TruncatedStream {
                needed: k as u64,
                available: self.limit - self.pos,
            });
        }
        self.pos += k as u64;
        Ok(())
    }

    /// Reads `k` bits and advances.
    #[inline]
    pub fn read_bits(&mut self, k: u32) -> Result<u64> {
        let v = self.peek_bits(k);
        self.skip(k)?;
        Ok(v)
    }

    /// Reads a single bit.
    #[inline]
    pub fn read_bit(&mut self) -> Result<bool> {
        Ok(self.read_bits(1)? == 1)
    }
}
