//! Trading at most `ε` bits per symbol for a shorter maximum codeword.

use prefix_codes::codecs::{model_size_report, AdditiveBackend, AdditiveCodec, SearchStrategy, SymbolCodec};
use prefix_codes::codes::{avg_length, huffman_lengths, CodeLengths};
use prefix_codes::corpus::{frequencies, zipf_generate};

fn main() -> prefix_codes::Result<()> {
    let seq = zipf_generate(65_536, 2_000_000, 1.1, 1)?;
    let freq = frequencies(&seq);
    let huffman = huffman_lengths(&freq);
    let opt = avg_length(&huffman, &freq);
    println!("huffman: lmax {}, L = {opt:.5}", huffman.lmax());

    for eps in [0.49, 0.25, 0.1, 0.01] {
        let codec = AdditiveCodec::new(&freq, eps, AdditiveBackend::Milidiu, None, 32, SearchStrategy::Sequential)?;
        let lengths = CodeLengths::new(codec.codeword_lengths())?;
        let avg = avg_length(&lengths, &freq);
        let size = model_size_report(&codec);
        println!(
            "eps {eps:<5} lmax {:>2}  L + {:.5}  model {} bits",
            codec.lmax(),
            avg - opt,
            size.serialized
        );
        assert!(avg <= opt + eps);
    }
    Ok(())
}
