//! Rank/select bitvectors and Huffman-shaped wavelet trees.

mod bitvec;
mod wavelet;

pub use bitvec::{BitBuilder, RankSelect, SELECT_SAMPLINGS};
pub use wavelet::{WaveletTree, MAX_DISTINCT};
