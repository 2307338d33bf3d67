//! Space-efficient representations of prefix codes.
//!
//! The crate builds optimal and approximately optimal prefix codes and stores
//! them compactly:
//!
//! - [`codes`]: Huffman code lengths, canonical code layout, predecessor-based
//!   length detection.
//! - [`succinct`]: rank/select bitvectors and a Huffman-shaped wavelet tree
//!   over the per-symbol code lengths.
//! - [`limited`]: five length-limited code constructors (package-merge,
//!   Milidiú–Laber, Increase, Increase-A, Balance).
//! - [`codecs`]: the compact wavelet-tree codec, table-driven baselines, the
//!   additive and multiplicative approximation schemes and model-size
//!   accounting.
//! - [`alphabetic`]: Hu–Tucker optimal alphabetic codes.
//! - [`container`]: the `PFXC` file format.
//! - [`cli`]: command implementations used by the `pfxc` binary.
//!
//! ```
//! use prefix_codes::codecs::{CompactCodec, SearchStrategy, SymbolCodec};
//! use prefix_codes::codes::huffman_lengths;
//! use prefix_codes::corpus::FrequencyTable;
//!
//! let freq = FrequencyTable::from_counts(vec![8, 4, 2, 1, 1]).unwrap();
//! let lengths = huffman_lengths(&freq);
//! let codec = CompactCodec::new(&lengths, 32, SearchStrategy::Sequential).unwrap();
//! let symbols = [0u32, 4, 2, 0, 1];
//! let (bytes, bits) = codec.encode_all(&symbols).unwrap();
//! assert_eq!(codec.decode_all(&bytes, bits, symbols.len()).unwrap(), symbols);
//! ```

pub mod alphabetic;
pub mod bitio;
pub mod cli;
pub mod codecs;
pub mod codes;
pub mod container;
pub mod corpus;
mod error;
pub mod limited;
pub mod succinct;
mod varint;

pub use error::{Error, Result};
