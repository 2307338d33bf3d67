//! Optimal alphabetic codes by the Hu–Tucker algorithm.
//!
//! The combination phase repeatedly merges the lightest compatible pair of
//! nodes, where two nodes are compatible when no uncombined leaf lies
//! between them. Uncombined leaves split the sequence into segments; each
//! segment keeps its merged nodes in a leftist heap and offers its best pair
//! to a global priority queue, which gives `O(n log n)` overall. The leaf
//! depths of the resulting tree are then realized by an alphabetic tree.

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use crate::bitio::{BitReader, BitWriter};
use crate::codecs::{check_symbol, read_lengths, write_lengths, SymbolCodec};
use crate::codes::CodeLengths;
use crate::corpus::FrequencyTable;
use crate::varint::Cursor;
use crate::{Error, Result};

/// `(weight, position)`: heap order and tie-break order.
type Key = (u128, usize);

const NIL: usize = usize::MAX;

#[derive(Clone, Copy)]
struct HeapNode {
    key: Key,
    node: usize,
    left: usize,
    right: usize,
    rank: u32,
}

/// Arena of leftist heaps.
#[derive(Default)]
struct Heaps {
    cells: Vec<HeapNode>,
}

impl Heaps {
    fn singleton(&mut self, key: Key, node: usize) -> usize {
        self.cells.push(HeapNode {
            key,
            node,
            left: NIL,
            right: NIL,
            rank: 1,
        });
        self.cells.len() - 1
    }

    fn rank(&self, h: usize) -> u32 {
        if h == NIL {
            0
        } else {
            self.cells[h].rank
        }
    }

    fn meld(&mut self, a: usize, b: usize) -> usize {
        if a == NIL {
            return b;
        }
        if b == NIL {
            return a;
        }
        let (a, b) = if self.cells[a].key <= self.cells[b].key { (a, b) } else { (b, a) };
        let r = self.meld(self.cells[a].right, b);
        self.cells[a].right = r;
        if self.rank(self.cells[a].left) < self.rank(r) {
            let c = &mut self.cells[a];
            std::mem::swap(&mut c.left, &mut c.right);
        }
        self.cells[a].rank = self.rank(self.cells[a].right) + 1;
        a
    }

    fn pop(&mut self, h: usize) -> usize {
        self.meld(self.cells[h].left, self.cells[h].right)
    }

    /// Up to two smallest entries of the heap rooted at `h`.
    fn two_smallest(&self, h: usize) -> [Option<(Key, usize)>; 2] {
        if h == NIL {
            return [None, None];
        }
        let c = &self.cells[h];
        let second = [c.left, c.right]
            .into_iter()
            .filter(|&x| x != NIL)
            .map(|x| (self.cells[x].key, self.cells[x].node))
            .min();
        [Some((c.key, c.node)), second]
    }
}

/// Nodes between two consecutive uncombined leaves (inclusive).
struct Segment {
    left: Option<usize>,
    right: Option<usize>,
    heap: usize,
    version: u32,
    alive: bool,
}

/// Optimal alphabetic code lengths.
pub fn hu_tucker_lengths(freq: &FrequencyTable) -> CodeLengths {
    let w = freq.counts();
    let n = w.len();
    if n == 1 {
        return CodeLengths::new(vec![1]).unwrap();
    }
    let mut weight: Vec<u128> = w.iter().map(|&x| x as u128).collect();
    let mut pos: Vec<usize> = (0..n).collect();
    let mut parent = vec![NIL; 2 * n - 1];

    // Segment `k` lies between leaves k-1 and k.
    let mut segs: Vec<Segment> = (0..=n)
        .map(|k| Segment {
            left: k.checked_sub(1),
            right: (k < n).then_some(k),
            heap: NIL,
            version: 0,
            alive: true,
        })
        .collect();
    // For an uncombined leaf: the segments to its left and right.
    let mut seg_before: Vec<usize> = (0..n).collect();
    let seg_after: Vec<usize> = (1..=n).collect();
    let mut heaps = Heaps::default();
    let mut queue: BinaryHeap<Reverse<(u128, usize, usize, usize, u32)>> = BinaryHeap::new();

    let best_pair = |seg: &Segment, heaps: &Heaps, weight: &[u128], pos: &[usize]| {
        let mut cands: Vec<(Key, usize)> = heaps.two_smallest(seg.heap).into_iter().flatten().collect();
        for sq in [seg.left, seg.right].into_iter().flatten() {
            cands.push(((weight[sq], pos[sq]), sq));
        }
        cands.sort_unstable();
        (cands.len() >= 2).then(|| (cands[0], cands[1]))
    };
    let offer = |k: usize,
                 segs: &[Segment],
                 heaps: &Heaps,
                 weight: &[u128],
                 pos: &[usize],
                 queue: &mut BinaryHeap<Reverse<(u128, usize, usize, usize, u32)>>| {
        if let Some(((ka, _), (kb, _))) = best_pair(&segs[k], heaps, weight, pos) {
            let (pl, pr) = (ka.1.min(kb.1), ka.1.max(kb.1));
            queue.push(Reverse((ka.0 + kb.0, pl, pr, k, segs[k].version)));
        }
    };
    for k in 1..n {
        offer(k, &segs, &heaps, &weight, &pos, &mut queue);
    }

    let mut next = n;
    while let Some(Reverse((_, _, _, k, version))) = queue.pop() {
        if !segs[k].alive || segs[k].version != version {
            continue;
        }
        let ((ka, a), (kb, b)) = best_pair(&segs[k], &heaps, &weight, &pos).unwrap();
        let mut k = k;
        // Pop merged nodes before any heap melding changes the minimum.
        let mut pair = [(ka, a), (kb, b)];
        pair.sort_by_key(|&(_, x)| x < n && (Some(x) == segs[k].left || Some(x) == segs[k].right));
        for (key, x) in pair {
            if Some(x) == segs[k].left || Some(x) == segs[k].right {
                // Uncombined leaf: fuse the segments on both sides.
                let (l, r) = (seg_before[x], seg_after[x]);
                let merged = heaps.meld(segs[l].heap, segs[r].heap);
                segs[l].heap = merged;
                segs[l].right = segs[r].right;
                segs[r].alive = false;
                if let Some(q) = segs[l].right {
                    seg_before[q] = l;
                }
                k = l;
            } else {
                debug_assert_eq!(heaps.cells[segs[k].heap].key, key);
                segs[k].heap = heaps.pop(segs[k].heap);
            }
        }
        let id = next;
        next += 1;
        weight.push(ka.0 + kb.0);
        pos.push(ka.1.min(kb.1));
        parent[a] = id;
        parent[b] = id;
        let cell = heaps.singleton((weight[id], pos[id]), id);
        segs[k].heap = heaps.meld(segs[k].heap, cell);
        segs[k].version += 1;
        offer(k, &segs, &heaps, &weight, &pos, &mut queue);
    }
    debug_assert_eq!(next, 2 * n - 1);

    let mut depth = vec![0u32; 2 * n - 1];
    for v in (0..2 * n - 2).rev() {
        depth[v] = depth[parent[v]] + 1;
    }
    CodeLengths::new(depth[..n].iter().map(|&d| d as u8).collect())
        .expect("Hu-Tucker depths form a complete code")
}

/// Codewords in symbol order for lengths admitting an alphabetic code:
/// each codeword is the smallest one starting after its predecessor.
pub fn alphabetic_codewords(lengths: &CodeLengths) -> Result<Vec<u64>> {
    let l = lengths.lengths();
    let mut codes = Vec::with_capacity(l.len());
    let mut prev: Option<(u128, u8)> = None;
    for &li in l {
        let c = match prev {
            None => 0u128,
            Some((pc, pl)) => {
                let end = pc + 1;
                if li >= pl {
                    end << (li - pl)
                } else {
                    let d = pl - li;
                    (end + (1u128 << d) - 1) >> d
                }
            }
        };
        if c >> li != 0 {
            return Err(Error::InfeasibleLengths);
        }
        codes.push(c as u64);
        prev = Some((c, li));
    }
    Ok(codes)
}

const LEAF: u32 = u32::MAX;

#[derive(Debug, Clone, Copy)]
struct TreeNode {
    child: [u32; 2],
    /// Leaves under the left child.
    left_leaves: u32,
}

/// Alphabetic code navigated through a binary tree with per-node left leaf
/// counts; leaf `i` is symbol `i`.
#[derive(Debug, Clone)]
pub struct AlphabeticCodec {
    lengths: CodeLengths,
    nodes: Vec<TreeNode>,
}

impl AlphabeticCodec {
    pub fn new(freq: &FrequencyTable) -> Self {
        Self::from_lengths(&hu_tucker_lengths(freq)).expect("Hu-Tucker lengths are alphabetic")
    }

    pub fn from_lengths(lengths: &CodeLengths) -> Result<Self> {
        let codes = alphabetic_codewords(lengths)?;
        let mut nodes = vec![TreeNode {
            child: [LEAF; 2],
            left_leaves: 0,
        }];
        let mut leaves = vec![0u32];
        for (&c, &l) in codes.iter().zip(lengths.lengths()) {
            let mut at = 0usize;
            for k in (0..l).rev() {
                let bit = ((c >> k) & 1) as usize;
                if k == 0 {
                    nodes[at].child[bit] = LEAF - 1;
                    break;
                }
                if nodes[at].child[bit] == LEAF {
                    nodes.push(TreeNode {
                        child: [LEAF; 2],
                        left_leaves: 0,
                    });
                    leaves.push(0);
                    nodes[at].child[bit] = (nodes.len() - 1) as u32;
                }
                at = nodes[at].child[bit] as usize;
            }
        }
        // Children are created after parents, so a reverse sweep counts leaves.
        for v in (0..nodes.len()).rev() {
            let count = |c: u32| match c {
                LEAF => 0,
                x if x == LEAF - 1 => 1,
                x => leaves[x as usize],
            };
            nodes[v].left_leaves = count(nodes[v].child[0]);
            leaves[v] = count(nodes[v].child[0]) + count(nodes[v].child[1]);
        }
        Ok(AlphabeticCodec {
            lengths: lengths.clone(),
            nodes,
        })
    }

    pub fn lengths(&self) -> &CodeLengths {
        &self.lengths
    }

    pub(crate) fn read_model(cur: &mut Cursor<'_>) -> Result<Self> {
        let lengths = read_lengths(cur)?;
        Self::from_lengths(&lengths).map_err(|e| Error::Format(format!("alphabetic lengths: {e}")))
    }
}

impl SymbolCodec for AlphabeticCodec {
    fn alphabet_size(&self) -> usize {
        self.lengths.len()
    }

    fn encode(&self, symbol: u32, w: &mut BitWriter) -> Result<()> {
        check_symbol(symbol, self.lengths.len())?;
        let mut at = 0usize;
        let mut rest = symbol;
        loop {
            let node = self.nodes[at];
            let bit = rest >= node.left_leaves;
            if bit {
                rest -= node.left_leaves;
            }
            w.write_bits(bit as u64, 1);
            match node.child[bit as usize] {
                c if c >= LEAF - 1 => return Ok(()),
                c => at = c as usize,
            }
        }
    }

    fn decode(&self, r: &mut BitReader<'_>) -> Result<u32> {
        let mut at = 0usize;
        let mut symbol = 0u32;
        loop {
            let node = self.nodes[at];
            let bit = r.read_bit()?;
            if bit {
                symbol += node.left_leaves;
            }
            match node.child[bit as usize] {
                LEAF => return Err(Error::CorruptStream("path leaves the alphabetic tree")),
                c if c == LEAF - 1 => return Ok(symbol),
                c => at = c as usize,
            }
        }
    }

    fn codeword_lengths(&self) -> Vec<u8> {
        self.lengths.lengths().to_vec()
    }

    fn write_model(&self, out: &mut Vec<u8>) {
        write_lengths(out, &self.lengths);
    }

    fn structure_bits(&self) -> (u64, u64) {
        let bits = self.nodes.len() as u64 * 96;
        (bits, bits)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codes::{avg_length, huffman_lengths, weighted_length};

    fn freq(c: &[u64]) -> FrequencyTable {
        FrequencyTable::from_counts(c.to_vec()).unwrap()
    }

    /// `O(n³)` interval dynamic program over alphabetic trees.
    fn dp_optimum(w: &[u64]) -> u128 {
        let n = w.len();
        if n == 1 {
            return w[0] as u128;
        }
        let mut pre = vec![0u128; n + 1];
        for i in 0..n {
            pre[i + 1] = pre[i] + w[i] as u128;
        }
        let mut cost = vec![vec![0u128; n]; n];
        for len in 2..=n {
            for i in 0..=n - len {
                let j = i + len - 1;
                let best = (i..j).map(|k| cost[i][k] + cost[k + 1][j]).min().unwrap();
                cost[i][j] = best + pre[j + 1] - pre[i];
            }
        }
        cost[0][n - 1]
    }

    #[test]
    fn uniform_is_balanced() {
        assert_eq!(hu_tucker_lengths(&freq(&[1, 1, 1, 1])).lengths(), &[2, 2, 2, 2]);
    }

    #[test]
    fn heavy_middle() {
        let f = freq(&[1, 8, 1]);
        let l = hu_tucker_lengths(&f);
        assert_eq!(weighted_length(&l, &f), dp_optimum(&[1, 8, 1]));
        assert_eq!(weighted_length(&l, &f), 19);
    }

    #[test]
    fn matches_dp_on_fixed_tables() {
        let tables: [&[u64]; 6] = [
            &[8, 4, 2, 1, 1],
            &[1, 1, 2, 4, 8],
            &[5, 1, 5, 1, 5, 1, 5],
            &[1, 100, 1, 100, 1, 1, 1, 3],
            &[3, 3, 3, 3, 3, 3],
            &[25, 10, 12, 30, 8, 1, 40, 2, 6, 9],
        ];
        for w in tables {
            let f = freq(w);
            let l = hu_tucker_lengths(&f);
            assert_eq!(weighted_length(&l, &f), dp_optimum(w), "{w:?}");
            assert!(avg_length(&l, &f) <= avg_length(&huffman_lengths(&f), &f) + 1.0);
        }
    }

    #[test]
    fn codewords_follow_symbol_order() {
        let l = CodeLengths::new(vec![2, 3, 3, 2, 2]).unwrap();
        let c = alphabetic_codewords(&l).unwrap();
        assert_eq!(c, [0b00, 0b010, 0b011, 0b10, 0b11]);
        // Not realizable in this order.
        let l = CodeLengths::new(vec![2, 1, 2]).unwrap();
        assert!(alphabetic_codewords(&l).is_err());
    }

    #[test]
    fn codec_roundtrip() {
        let f = freq(&[25, 10, 12, 30, 8, 1, 40, 2, 6, 9]);
        let codec = AlphabeticCodec::new(&f);
        let syms: Vec<u32> = (0..100).map(|i| (i * 3 % 10) as u32).collect();
        let (bytes, bits) = codec.encode_all(&syms).unwrap();
        let expect: u64 = syms.iter().map(|&s| codec.lengths().lengths()[s as usize] as u64).sum();
        assert_eq!(bits, expect);
        assert_eq!(codec.decode_all(&bytes, bits, syms.len()).unwrap(), syms);
        let single = AlphabeticCodec::new(&freq(&[3]));
        let (bytes, bits) = single.encode_all(&[0, 0]).unwrap();
        assert_eq!(bits, 2);
        assert_eq!(single.decode_all(&bytes, bits, 2).unwrap(), [0, 0]);
        assert!(single.decode_all(&[0x80], 1, 1).is_err());
    }
}
