use super::SymbolCodec;
use crate::codes::ceil_log2;
use crate::corpus::entropy_of_counts;

/// Model-size breakdown of a codec, in bits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelSize {
    pub n: usize,
    pub lmax: u32,
    /// One 32-bit word per symbol.
    pub naive: u64,
    /// `n·ℓmax`: codewords stored explicitly.
    pub engineered: u64,
    /// `n·⌈lg n⌉`: a canonical code stored as a permutation.
    pub canonical: u64,
    /// `n·H0(L)` over this codec's codeword lengths.
    pub level_entropy: f64,
    /// Serialized model.
    pub serialized: u64,
    /// In-memory structures needed to encode.
    pub encode: u64,
    /// In-memory structures needed to decode.
    pub decode: u64,
}

/// Reference sizes alongside the measured ones for `codec`.
pub fn model_size_report<C: SymbolCodec + ?Sized>(codec: &C) -> ModelSize {
    let lengths = codec.codeword_lengths();
    let n = lengths.len();
    let lmax = lengths.iter().copied().max().unwrap_or(0) as u32;
    let mut hist = vec![0u64; lmax as usize + 1];
    for &l in &lengths {
        hist[l as usize] += 1;
    }
    let mut buf = Vec::new();
    codec.write_model(&mut buf);
    let (encode, decode) = codec.structure_bits();
    ModelSize {
        n,
        lmax,
        naive: n as u64 * 32,
        engineered: n as u64 * lmax as u64,
        canonical: n as u64 * ceil_log2(n) as u64,
        level_entropy: n as f64 * entropy_of_counts(&hist),
        serialized: buf.len() as u64 * 8,
        encode,
        decode,
    }
}
