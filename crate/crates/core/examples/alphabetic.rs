//! Hu–Tucker codes keep codewords in symbol order.

use prefix_codes::alphabetic::{alphabetic_codewords, AlphabeticCodec};
use prefix_codes::codecs::SymbolCodec;
use prefix_codes::codes::{avg_length, huffman_lengths};
use prefix_codes::corpus::FrequencyTable;

fn main() -> prefix_codes::Result<()> {
    let freq = FrequencyTable::from_counts(vec![5, 1, 1, 30, 2, 9, 9, 1])?;
    let codec = AlphabeticCodec::new(&freq);
    let lengths = codec.lengths();
    for (s, (w, l)) in alphabetic_codewords(lengths)?.iter().zip(lengths.lengths()).enumerate() {
        println!("symbol {s}: {w:0width$b}", width = *l as usize);
    }
    println!(
        "alphabetic L = {:.4}, huffman L = {:.4}",
        avg_length(lengths, &freq),
        avg_length(&huffman_lengths(&freq), &freq)
    );
    let msg = [3u32, 0, 7, 5];
    let (bytes, bits) = codec.encode_all(&msg)?;
    assert_eq!(codec.decode_all(&bytes, bits, msg.len())?, msg);
    Ok(())
}
