//! Synthetic Zipf corpora and their statistics.

use prefix_codes::cli::stats;
use prefix_codes::corpus::zipf_generate;

fn main() -> prefix_codes::Result<()> {
    for s in [0.8, 1.1, 1.5] {
        let seq = zipf_generate(65_536, 1_000_000, s, 1)?;
        println!("zipf s = {s}\n{}", stats(&seq));
    }
    Ok(())
}
