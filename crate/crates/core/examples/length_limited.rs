//! Redundancy of each length-limiting algorithm as the limit tightens.

use prefix_codes::codes::{avg_length, huffman_lengths};
use prefix_codes::corpus::{entropy, frequencies, zipf_generate};
use prefix_codes::limited::{limit_lengths, milidiu_laber_bound, min_limit, LimitAlgorithm};

fn main() -> prefix_codes::Result<()> {
    let seq = zipf_generate(5000, 200_000, 1.3, 3)?;
    let freq = frequencies(&seq);
    let h = entropy(&freq);
    let huffman = huffman_lengths(&freq);
    println!("huffman: lmax {}, redundancy {:.5}", huffman.lmax(), avg_length(&huffman, &freq) - h);

    print!("{:>5}", "lmax");
    for algo in LimitAlgorithm::ALL {
        print!("{:>12}", algo.name());
    }
    println!("{:>12}", "ML bound");
    for lmax in min_limit(freq.len())..huffman.lmax() as u32 {
        print!("{lmax:>5}");
        for algo in LimitAlgorithm::ALL {
            let l = limit_lengths(&freq, lmax, algo)?;
            print!("{:>12.5}", avg_length(&l, &freq) - h);
        }
        match milidiu_laber_bound(freq.len(), lmax) {
            Some(b) => println!("{b:>12.5}"),
            None => println!("{:>12}", "-"),
        }
    }
    Ok(())
}
