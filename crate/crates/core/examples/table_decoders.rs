//! The three table-driven decoders agree on every stream.

use prefix_codes::codecs::{SymbolCodec, TableCodec, TableVariant};
use prefix_codes::codes::huffman_lengths;
use prefix_codes::corpus::{frequencies, zipf_generate};
use std::time::Instant;

fn main() -> prefix_codes::Result<()> {
    let seq = zipf_generate(10_000, 1_000_000, 1.1, 7)?;
    let lengths = huffman_lengths(&frequencies(&seq));
    let base = TableCodec::new(&lengths, 14, TableVariant::Table)?;
    let (bytes, bits) = base.encode_all(seq.symbols())?;
    println!("lmax {}, {:.3} bits/symbol", lengths.lmax(), bits as f64 / seq.len() as f64);

    for variant in TableVariant::ALL {
        let codec = base.clone().with_variant(variant);
        let start = Instant::now();
        let out = codec.decode_all(&bytes, bits, seq.len())?;
        let ns = start.elapsed().as_nanos() as f64 / seq.len() as f64;
        assert_eq!(out, seq.symbols());
        println!("{variant:?}: {ns:.1} ns/symbol");
    }
    Ok(())
}
