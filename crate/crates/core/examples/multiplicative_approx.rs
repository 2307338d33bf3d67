//! Storing only the frequent symbols, at most a factor `c` above optimal.

use prefix_codes::codecs::{model_size_report, CompactCodec, MultiplicativeCodec, SearchStrategy, SymbolCodec};
use prefix_codes::codes::huffman_lengths;
use prefix_codes::corpus::{frequencies, zipf_generate};

fn main() -> prefix_codes::Result<()> {
    let seq = zipf_generate(65_536, 1_000_000, 1.0, 2)?;
    let freq = frequencies(&seq);
    let exact = CompactCodec::new(&huffman_lengths(&freq), 32, SearchStrategy::Sequential)?;
    let (_, exact_bits) = exact.encode_all(seq.symbols())?;
    let exact_model = model_size_report(&exact).serialized;
    println!("exact: {exact_bits} payload bits, model {exact_model} bits");

    for c in [1.5, 1.75, 2.0, 3.0] {
        let codec = MultiplicativeCodec::new(&freq, c, 32, SearchStrategy::Sequential)?;
        let (bytes, bits) = codec.encode_all(seq.symbols())?;
        assert_eq!(codec.decode_all(&bytes, bits, seq.len())?, seq.symbols());
        println!(
            "c {c:<4} lmax {:>2}  {} frequent symbols  payload x{:.3}  model {} bits{}",
            codec.lmax(),
            codec.short_symbols(),
            bits as f64 / exact_bits as f64,
            model_size_report(&codec).serialized,
            if codec.is_fallback() { " (exact fallback)" } else { "" }
        );
    }
    Ok(())
}
