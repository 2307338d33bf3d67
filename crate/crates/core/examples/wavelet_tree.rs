//! Rank, select and access on a Huffman-shaped wavelet tree.

use prefix_codes::succinct::WaveletTree;

fn main() -> prefix_codes::Result<()> {
    let seq: Vec<u8> = b"abracadabra".iter().map(|b| b - b'a' + 1).collect();
    let wt = WaveletTree::new(&seq, 16)?;
    println!("values {:?} at depths {:?}", wt.values(), wt.depths());
    println!("payload {} bits for {} entries", wt.payload_bits(), wt.len());
    let a = 1;
    println!("rank(a, 8) = {}", wt.rank(a, 8)?);
    println!("select(a, 4) = {}", wt.select(a, 4)?);
    println!("access(4) = {}", (wt.access(4)? + b'a' - 1) as char);
    Ok(())
}
