//! Length-limited prefix codes.
//!
//! [`limit_optimal`] is the package-merge algorithm and yields the cheapest
//! code whose longest codeword is at most `ℓmax`. The others start from a
//! Huffman tree and repair it: [`limit_milidiu`] moves the overflowing
//! leaves into a balanced subtree hung next to a light subtree,
//! [`limit_increase`] flattens the frequency distribution until Huffman's
//! height fits, and [`limit_balance`] balances one node on the right spine of
//! the canonical tree.

use std::fmt;
use std::str::FromStr;

use crate::codes::{ceil_log2, huffman_depths, CodeLengths, MAX_CODE_LEN, PHI};
use crate::corpus::FrequencyTable;
use crate::{Error, Result};

/// Constructor selection for [`limit_lengths`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LimitAlgorithm {
    Optimal,
    Milidiu,
    Increase,
    IncreaseA,
    Balance,
}

impl LimitAlgorithm {
    pub const ALL: [LimitAlgorithm; 5] = [
        LimitAlgorithm::Optimal,
        LimitAlgorithm::Milidiu,
        LimitAlgorithm::Increase,
        LimitAlgorithm::IncreaseA,
        LimitAlgorithm::Balance,
    ];

    pub fn name(self) -> &'static str {
        match self {
            LimitAlgorithm::Optimal => "optimal",
            LimitAlgorithm::Milidiu => "milidiu",
            LimitAlgorithm::Increase => "increase",
            LimitAlgorithm::IncreaseA => "increase-a",
            LimitAlgorithm::Balance => "balance",
        }
    }
}

impl fmt::Display for LimitAlgorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for LimitAlgorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "optimal" | "package-merge" => Ok(LimitAlgorithm::Optimal),
            "milidiu" => Ok(LimitAlgorithm::Milidiu),
            "increase" => Ok(LimitAlgorithm::Increase),
            "increase-a" | "increase_a" => Ok(LimitAlgorithm::IncreaseA),
            "balance" => Ok(LimitAlgorithm::Balance),
            other => Err(Error::InvalidParameter(format!(
                "unknown length-limiting algorithm {other:?}"
            ))),
        }
    }
}

/// Smallest admissible limit for `n` symbols: `max(1, ⌈lg n⌉)`.
pub fn min_limit(n: usize) -> u32 {
    ceil_log2(n).max(1)
}

fn check_limit(n: usize, lmax: u32) -> Result<()> {
    let min = min_limit(n);
    if lmax < min {
        return Err(Error::LimitTooSmall { lmax, min, n });
    }
    if lmax > MAX_CODE_LEN as u32 {
        return Err(Error::InvalidParameter(format!(
            "length limit {lmax} exceeds {MAX_CODE_LEN}"
        )));
    }
    Ok(())
}

fn to_lengths(depths: &[u32]) -> CodeLengths {
    CodeLengths::new(depths.iter().map(|&d| d.max(1) as u8).collect())
        .expect("constructed lengths satisfy Kraft's inequality")
}

/// Runs the selected constructor.
pub fn limit_lengths(freq: &FrequencyTable, lmax: u32, algo: LimitAlgorithm) -> Result<CodeLengths> {
    match algo {
        LimitAlgorithm::Optimal => limit_optimal(freq, lmax),
        LimitAlgorithm::Milidiu => limit_milidiu(freq, lmax),
        LimitAlgorithm::Increase => limit_increase(freq, lmax, false),
        LimitAlgorithm::IncreaseA => limit_increase(freq, lmax, true),
        LimitAlgorithm::Balance => limit_balance(freq, lmax),
    }
}

/// Optimal lengths subject to `ℓ_i ≤ lmax`, by package-merge in
/// `O(n·lmax)` time.
pub fn limit_optimal(freq: &FrequencyTable, lmax: u32) -> Result<CodeLengths> {
    let w = freq.counts();
    let n = w.len();
    check_limit(n, lmax)?;
    if n == 1 {
        return Ok(to_lengths(&[1]));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by_key(|&i| (w[i], i));
    let leaves: Vec<u128> = order.iter().map(|&i| w[i] as u128).collect();

    // packages[d] flags which entries of the level-d list are packages;
    // level lmax (index lmax-1) holds the bare leaves.
    let levels = lmax as usize;
    let mut is_package: Vec<Vec<bool>> = vec![Vec::new(); levels];
    let mut prev: Vec<u128> = leaves.clone();
    is_package[levels - 1] = vec![false; n];
    for d in (0..levels - 1).rev() {
        let pkgs: Vec<u128> = prev.chunks_exact(2).map(|p| p[0] + p[1]).collect();
        let mut merged = Vec::with_capacity(n + pkgs.len());
        let mut flags = Vec::with_capacity(n + pkgs.len());
        let (mut a, mut b) = (0, 0);
        while a < n || b < pkgs.len() {
            if b >= pkgs.len() || (a < n && leaves[a] <= pkgs[b]) {
                merged.push(leaves[a]);
                flags.push(false);
                a += 1;
            } else {
                merged.push(pkgs[b]);
                flags.push(true);
                b += 1;
            }
        }
        is_package[d] = flags;
        prev = merged;
    }

    let mut depth = vec![0u32; n];
    let mut take = 2 * n - 2;
    for flags in &is_package {
        assert!(take <= flags.len(), "limit admits a complete code");
        let packages = flags[..take].iter().filter(|&&p| p).count();
        for d in depth.iter_mut().take(take - packages) {
            *d += 1;
        }
        take = 2 * packages;
    }
    let mut out = vec![0u32; n];
    for (pos, &sym) in order.iter().enumerate() {
        out[sym] = depth[pos];
    }
    Ok(to_lengths(&out))
}

/// Symbols of a Huffman tree in canonical leaf order: depth ascending, then
/// weight descending, then index.
struct CanonicalTree {
    order: Vec<usize>,
    depth: Vec<u32>,
    height: u32,
}

impl CanonicalTree {
    fn new(w: &[u64]) -> Self {
        let d = huffman_depths(w);
        let mut order: Vec<usize> = (0..w.len()).collect();
        order.sort_by_key(|&i| (d[i], std::cmp::Reverse(w[i]), i));
        let depth: Vec<u32> = order.iter().map(|&i| d[i]).collect();
        let height = depth.last().copied().unwrap_or(0);
        CanonicalTree {
            order,
            depth,
            height,
        }
    }

    /// Left end of each leaf's interval, in units of `2^-height`.
    fn starts(&self) -> Vec<u128> {
        let mut s = Vec::with_capacity(self.depth.len() + 1);
        let mut acc = 0u128;
        for &d in &self.depth {
            s.push(acc);
            acc += 1u128 << (self.height - d);
        }
        s.push(acc);
        s
    }

    fn scatter(&self, depth_in_order: &[u32]) -> Vec<u32> {
        let mut out = vec![0u32; self.order.len()];
        for (pos, &sym) in self.order.iter().enumerate() {
            out[sym] = depth_in_order[pos];
        }
        out
    }
}

/// Length-limited code derived from a Huffman tree by the Milidiú–Laber
/// surgery.
///
/// Leaves deeper than `lmax` are detached. As many of them as there are
/// depth-`lmax` slots left in the detached region fill those slots; the
/// remaining `r` form a complete tree `T2` of height `⌈lg r⌉`. A node `v`
/// whose leaves all sit at depth `≤ lmax − 1` is replaced by a new node with
/// children `T2` and the old subtree. Among all admissible depths and nodes
/// the cheapest result is kept, with detached symbols placed heaviest first
/// on the shallowest positions.
pub fn limit_milidiu(freq: &FrequencyTable, lmax: u32) -> Result<CodeLengths> {
    let w = freq.counts();
    let n = w.len();
    check_limit(n, lmax)?;
    let tree = CanonicalTree::new(w);
    if tree.height <= lmax {
        return Ok(to_lengths(&tree.scatter(&tree.depth)));
    }
    let h_tree = tree.height;
    let starts = tree.starts();
    let weight = |pos: usize| w[tree.order[pos]] as u128;
    let mut prefix = vec![0u128; n + 1];
    for pos in 0..n {
        prefix[pos + 1] = prefix[pos] + weight(pos);
    }

    // Detached suffix and its depth-lmax slots.
    let first_r = tree.depth.partition_point(|&d| d <= lmax);
    let slot = 1u128 << (h_tree - lmax);
    let e = ((starts[n] - starts[first_r]) / slot) as usize;
    let detached = n - first_r;
    let r = detached - e;
    let h = ceil_log2(r);
    // Leaves that can go one level deeper form the prefix before `shallow_end`.
    let shallow_end = tree.depth.partition_point(|&d| d < lmax);
    let boundary = starts[shallow_end];

    // Detached symbols by weight, heaviest first.
    let mut moved: Vec<usize> = (first_r..n).collect();
    moved.sort_by_key(|&pos| (std::cmp::Reverse(weight(pos)), pos));

    let lo = lmax.saturating_sub(ceil_log2(n) + 1);
    let hi = match lmax.checked_sub(h + 1) {
        Some(hi) => hi,
        None => return limit_optimal(freq, lmax),
    };
    let kept_cost: u128 = (0..first_r).map(|p| weight(p) * tree.depth[p] as u128).sum();

    // (cost, depth of v, first leaf of v, one past last leaf of v)
    let mut best: Option<(u128, u32, usize, usize)> = None;
    for dv in (lo..=hi).rev() {
        let size = 1u128 << (h_tree - dv);
        let mut light: Option<(u128, usize, usize)> = None;
        for j in 0..shallow_end {
            let s = starts[j];
            if !s.is_multiple_of(size) || s + size > boundary {
                continue;
            }
            let end = starts.partition_point(|&x| x < s + size);
            if starts[end] != s + size {
                continue;
            }
            let sum = prefix[end] - prefix[j];
            if light.is_none_or(|(b, _, _)| sum < b) {
                light = Some((sum, j, end));
            }
        }
        let Some((t3, vs, ve)) = light else { continue };
        let positions = placement_depths(r, e, dv, h, lmax);
        let placed: u128 = moved
            .iter()
            .zip(&positions)
            .map(|(&pos, &d)| weight(pos) * d as u128)
            .sum();
        let cost = kept_cost + t3 + placed;
        if best.is_none_or(|(b, ..)| cost < b) {
            best = Some((cost, dv, vs, ve));
        }
    }

    let Some((_, dv, vs, ve)) = best else {
        return limit_optimal(freq, lmax);
    };
    let mut depth = tree.depth.clone();
    for d in &mut depth[vs..ve] {
        *d += 1;
    }
    let positions = placement_depths(r, e, dv, h, lmax);
    for (&pos, &d) in moved.iter().zip(&positions) {
        depth[pos] = d;
    }
    Ok(to_lengths(&tree.scatter(&depth)))
}

/// Depths offered to detached leaves, ascending: the complete tree of `r`
/// leaves hung at depth `dv + 1`, then `e` slots at `lmax`.
fn placement_depths(r: usize, e: usize, dv: u32, h: u32, lmax: u32) -> Vec<u32> {
    let full = 1usize << h;
    let mut p = Vec::with_capacity(r + e);
    p.extend(std::iter::repeat_n(dv + h, full - r));
    p.extend(std::iter::repeat_n(dv + 1 + h, 2 * r - full));
    p.extend(std::iter::repeat_n(lmax, e));
    p.sort_unstable();
    p
}

/// Redundancy bound `1/φ^(lmax − ⌈lg(n + ⌈lg n⌉ − lmax)⌉ − 1)` for the
/// Milidiú–Laber construction, relative to an optimal unrestricted code.
///
/// Returns `None` when `n + ⌈lg n⌉ ≤ lmax`, where the formula is undefined.
pub fn milidiu_laber_bound(n: usize, lmax: u32) -> Option<f64> {
    let arg = n as i64 + ceil_log2(n) as i64 - lmax as i64;
    if arg <= 0 {
        return None;
    }
    let exp = lmax as i64 - ceil_log2(arg as usize) as i64 - 1;
    Some(PHI.powi(-(exp as i32)))
}

fn height(depths: &[u32]) -> u32 {
    depths.iter().copied().max().unwrap_or(0)
}

/// Huffman depths of the table flattened with parameter `f`.
fn flattened_depths(w: &[u64], f: u64, additive: bool) -> Vec<u32> {
    let modified: Vec<u64> = if additive {
        w.iter().map(|&c| c.saturating_add(f)).collect()
    } else {
        w.iter().map(|&c| c.max(f)).collect()
    };
    huffman_depths(&modified)
}

/// Smallest `f` for which [`limit_increase`] succeeds, by exponential then
/// binary search. `None` when the plain Huffman tree already fits.
pub fn increase_parameter(freq: &FrequencyTable, lmax: u32, additive: bool) -> Result<Option<u64>> {
    let w = freq.counts();
    check_limit(w.len(), lmax)?;
    if height(&huffman_depths(w)) <= lmax {
        return Ok(None);
    }
    let fits = |f: u64| height(&flattened_depths(w, f, additive)) <= lmax;
    let mut lo = if additive { 0 } else { 1 };
    let mut hi = lo + 1;
    while !fits(hi) {
        lo = hi;
        hi = hi.checked_mul(2).expect("flattening parameter overflow");
    }
    while hi - lo > 1 {
        let mid = lo + (hi - lo) / 2;
        if fits(mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(Some(hi))
}

/// Huffman lengths of a flattened table whose tree fits within `lmax`.
///
/// The clamping variant raises every count below `f` to `f`; the additive
/// variant adds `f` to every count. The smallest working `f` is used.
pub fn limit_increase(freq: &FrequencyTable, lmax: u32, additive: bool) -> Result<CodeLengths> {
    let w = freq.counts();
    Ok(match increase_parameter(freq, lmax, additive)? {
        None => to_lengths(&huffman_depths(w)),
        Some(f) => to_lengths(&flattened_depths(w, f, additive)),
    })
}

/// Balances the parent of the shallowest right-spine node of the canonical
/// Huffman tree that cannot fit within `lmax` even when balanced.
pub fn limit_balance(freq: &FrequencyTable, lmax: u32) -> Result<CodeLengths> {
    let w = freq.counts();
    let n = w.len();
    check_limit(n, lmax)?;
    let tree = CanonicalTree::new(w);
    if tree.height <= lmax {
        return Ok(to_lengths(&tree.scatter(&tree.depth)));
    }
    let starts = tree.starts();
    let total = starts[n];
    // Leaves under the right-spine node at depth t form a suffix.
    let suffix_len = |t: u32| n - starts.partition_point(|&s| s < total - (total >> t));
    let tw = (1..=lmax)
        .find(|&t| suffix_len(t) > 1usize << (lmax - t))
        .expect("a spine node at depth lmax holds more than one leaf");
    let tp = tw - 1;
    let k = suffix_len(tp);
    let h = ceil_log2(k);
    let shallow = (1usize << h) - k;

    let region = n - k..n;
    let mut by_weight: Vec<usize> = region.clone().collect();
    by_weight.sort_by_key(|&pos| (std::cmp::Reverse(w[tree.order[pos]]), pos));
    let mut depth = tree.depth.clone();
    for (rank, &pos) in by_weight.iter().enumerate() {
        depth[pos] = tp + if rank < shallow { h - 1 } else { h };
    }
    Ok(to_lengths(&tree.scatter(&depth)))
}
