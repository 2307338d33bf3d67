//! Canonical Huffman code stored as a wavelet tree over the code lengths.

use prefix_codes::codecs::{model_size_report, CompactCodec, SearchStrategy, SymbolCodec};
use prefix_codes::codes::{avg_length, canonicalize, huffman_lengths};
use prefix_codes::corpus::{entropy, FrequencyTable};

fn main() -> prefix_codes::Result<()> {
    let freq = FrequencyTable::from_counts(vec![40, 25, 12, 12, 6, 3, 1, 1])?;
    let lengths = huffman_lengths(&freq);
    let code = canonicalize(&lengths);
    for (s, (l, w)) in lengths.lengths().iter().zip(code.codewords()).enumerate() {
        println!("symbol {s}: {w:0width$b}", width = *l as usize);
    }
    println!("H = {:.4}, L = {:.4}", entropy(&freq), avg_length(&lengths, &freq));

    let codec = CompactCodec::new(&lengths, 32, SearchStrategy::Binary)?;
    let message = [0u32, 1, 7, 2, 0, 0, 5];
    let (bytes, bits) = codec.encode_all(&message)?;
    assert_eq!(codec.decode_all(&bytes, bits, message.len())?, message);
    println!("{} symbols in {bits} bits", message.len());

    let size = model_size_report(&codec);
    println!("model: {} bits serialized, n*lmax = {}", size.serialized, size.engineered);
    Ok(())
}
