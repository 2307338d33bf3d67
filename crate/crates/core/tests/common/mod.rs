//! Reference implementations used by the integration tests. None of these
//! share code with the library; they are slow and obviously correct.

#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Minimum `Σ w_i ℓ_i` over all prefix codes with lengths in `[1, lmax]`.
///
/// Enumerates non-decreasing length vectors against weights sorted in
/// descending order, pruning on Kraft and on the running cost. Returns
/// `None` if no code fits.
pub fn exhaustive_min(weights: &[u64], lmax: u32) -> Option<u128> {
    let mut w: Vec<u64> = weights.to_vec();
    w.sort_unstable_by(|a, b| b.cmp(a));
    if w.len() == 1 {
        return Some(w[0] as u128);
    }
    if lmax == 0 || (w.len() as u128) > (1u128 << lmax) {
        return None;
    }
    let suffix: Vec<u128> = {
        let mut s = vec![0u128; w.len() + 1];
        for i in (0..w.len()).rev() {
            s[i] = s[i + 1] + w[i] as u128;
        }
        s
    };
    let mut best = u128::MAX;
    let budget = 1u128 << lmax;
    enumerate(&w, &suffix, lmax, 0, 1, budget, 0, &mut best);
    Some(best)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(w: &[u64], suffix: &[u128], lmax: u32, i: usize, min_len: u32, budget: u128, cost: u128, best: &mut u128) {
    if i == w.len() {
        *best = (*best).min(cost);
        return;
    }
    if cost + suffix[i] * min_len as u128 >= *best {
        return;
    }
    let remaining = (w.len() - i) as u128;
    for l in min_len..=lmax {
        let unit = 1u128 << (lmax - l);
        // this symbol takes `unit`, each later one at least a single cell
        if unit + remaining - 1 > budget {
            continue;
        }
        enumerate(w, suffix, lmax, i + 1, l, budget - unit, cost + w[i] as u128 * l as u128, best);
    }
}

/// Optimal alphabetic code cost by the cubic interval recurrence
/// `C[i][j] = min_k C[i][k] + C[k+1][j] + W(i..=j)`.
pub fn alphabetic_dp(weights: &[u64]) -> u128 {
    let n = weights.len();
    if n == 1 {
        return weights[0] as u128;
    }
    let mut prefix = vec![0u128; n + 1];
    for i in 0..n {
        prefix[i + 1] = prefix[i] + weights[i] as u128;
    }
    let mut c = vec![vec![0u128; n]; n];
    for span in 2..=n {
        for i in 0..=n - span {
            let j = i + span - 1;
            let mut m = u128::MAX;
            for k in i..j {
                m = m.min(c[i][k] + c[k + 1][j]);
            }
            c[i][j] = m + prefix[j + 1] - prefix[i];
        }
    }
    c[0][n - 1]
}

/// Entropy in bits of a weight vector.
pub fn entropy(weights: &[u64]) -> f64 {
    let t: f64 = weights.iter().map(|&w| w as f64).sum();
    weights
        .iter()
        .map(|&w| {
            let p = w as f64 / t;
            -p * p.log2()
        })
        .sum()
}

/// `⌈log2 n⌉` by repeated doubling.
pub fn ceil_lg(n: usize) -> u32 {
    let mut k = 0;
    while (1usize << k) < n {
        k += 1;
    }
    k
}

/// Random positive counts of varied shape: log-uniform, Fibonacci-like
/// (deep Huffman trees), Zipf, and near-uniform.
pub fn random_counts(rng: &mut ChaCha8Rng, n: usize) -> Vec<u64> {
    match rng.random_range(0..4) {
        0 => (0..n)
            .map(|_| (rng.random_range(0.0..12.0f64)).exp().round().max(1.0) as u64)
            .collect(),
        1 if n <= 60 => {
            let (mut a, mut b) = (1u64, 1u64);
            let mut v: Vec<u64> = (0..n)
                .map(|_| {
                    let x = a + rng.random_range(0..=a / 8);
                    (a, b) = (b, a + b);
                    x
                })
                .collect();
            shuffle(rng, &mut v);
            v
        }
        2 => {
            let s: f64 = rng.random_range(0.5..2.5);
            let mut v: Vec<u64> = (0..n)
                .map(|i| (1e9 / ((i + 1) as f64).powf(s)).round().max(1.0) as u64)
                .collect();
            shuffle(rng, &mut v);
            v
        }
        _ => (0..n).map(|_| rng.random_range(1..=20)).collect(),
    }
}

fn shuffle(rng: &mut ChaCha8Rng, v: &mut [u64]) {
    for i in (1..v.len()).rev() {
        let j = rng.random_range(0..=i);
        v.swap(i, j);
    }
}

/// Weighted code length using only the public length vector.
pub fn cost(lengths: &[u8], weights: &[u64]) -> u128 {
    lengths
        .iter()
        .zip(weights)
        .map(|(&l, &w)| l as u128 * w as u128)
        .sum()
}

/// Exact Kraft check: `Σ 2^-ℓ ≤ 1`.
pub fn kraft_ok(lengths: &[u8]) -> bool {
    let m = lengths.iter().copied().max().unwrap_or(0) as u32;
    let sum: u128 = lengths.iter().map(|&l| 1u128 << (m - l as u32)).sum();
    sum <= 1u128 << m
}
