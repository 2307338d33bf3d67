//! Packing a sparse-valued stream into a PFXC container and back.

use prefix_codes::codecs::{CodecModel, CodecParams, Scheme};
use prefix_codes::container;
use prefix_codes::corpus::{frequencies, SymbolSequence};

fn main() -> prefix_codes::Result<()> {
    let raw: Vec<u32> = (0..50_000u32).map(|i| (i.wrapping_mul(2_654_435_761) >> 22) * 1000).collect();
    let seq = SymbolSequence::from_raw(&raw)?;
    let freq = frequencies(&seq);
    for name in ["compact", "table-e", "additive", "mult", "alphabetic"] {
        let scheme: Scheme = name.parse()?;
        let model = CodecModel::build(&freq, scheme, &CodecParams::default())?;
        let bytes = container::compress(&seq, &model)?;
        assert_eq!(container::decompress(&bytes)?, raw);
        println!("{name:<11} {:>7} bytes", bytes.len());
    }
    Ok(())
}
