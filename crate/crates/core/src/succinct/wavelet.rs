use super::bitvec::{BitBuilder, RankSelect};
use crate::codes::huffman_depths;
use crate::varint::{self, Cursor};
use crate::{Error, Result};

/// Maximum number of distinct values in a wavelet tree.
pub const MAX_DISTINCT: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Child {
    Node(u32),
    Leaf(u8),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Node {
    bits: RankSelect,
    children: [Child; 2],
}

/// Huffman-shaped binary wavelet tree over a sequence of small values.
///
/// Each distinct value gets a canonical Huffman code over the value
/// histogram (ties broken by value); node `v` stores one bit per element
/// routed through it. Nodes are kept in preorder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WaveletTree {
    len: usize,
    /// Distinct values ascending.
    values: Vec<u8>,
    /// Code length per entry of `values`.
    code_lens: Vec<u8>,
    /// `slot[v]` = index into `values`, or `u8::MAX`.
    slot: [u8; 256],
    occ: Vec<usize>,
    nodes: Vec<Node>,
    root: Child,
    /// Root-to-leaf `(node, bit)` path per entry of `values`.
    paths: Vec<Vec<(u32, bool)>>,
    sampling: u32,
}

impl WaveletTree {
    pub fn new(seq: &[u8], sampling: u32) -> Result<Self> {
        if seq.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut hist = [0usize; 256];
        for &v in seq {
            hist[v as usize] += 1;
        }
        let values: Vec<u8> = (0..=255u8).filter(|&v| hist[v as usize] > 0).collect();
        if values.len() > MAX_DISTINCT {
            return Err(Error::InvalidParameter(format!(
                "{} distinct values exceed the wavelet tree limit of {MAX_DISTINCT}",
                values.len()
            )));
        }
        let weights: Vec<u64> = values.iter().map(|&v| hist[v as usize] as u64).collect();
        let code_lens: Vec<u8> = if values.len() == 1 {
            vec![0]
        } else {
            huffman_depths(&weights).iter().map(|&d| d as u8).collect()
        };
        let shape = Shape::canonical(&values, &code_lens)?;

        let mut nodes = Vec::with_capacity(values.len().saturating_sub(1));
        let slot_seq: Vec<u8> = seq.iter().map(|&v| shape.slot[v as usize]).collect();
        let root = build_node(&shape, &slot_seq, 0, 0, sampling, &mut nodes);
        Ok(Self::assemble(seq.len(), values, code_lens, shape, nodes, root, sampling))
    }

    fn assemble(
        len: usize,
        values: Vec<u8>,
        code_lens: Vec<u8>,
        shape: Shape,
        nodes: Vec<Node>,
        root: Child,
        sampling: u32,
    ) -> Self {
        let mut paths = vec![Vec::new(); values.len()];
        let mut stack = vec![(root, Vec::new())];
        while let Some((child, path)) = stack.pop() {
            match child {
                Child::Leaf(s) => paths[s as usize] = path,
                Child::Node(id) => {
                    for bit in [false, true] {
                        let mut p = path.clone();
                        p.push((id, bit));
                        stack.push((nodes[id as usize].children[bit as usize], p));
                    }
                }
            }
        }
        let occ = paths
            .iter()
            .map(|path| match path.last() {
                None => len,
                Some(&(id, bit)) => {
                    let bv = &nodes[id as usize].bits;
                    if bit {
                        bv.count_ones()
                    } else {
                        bv.count_zeros()
                    }
                }
            })
            .collect();
        WaveletTree {
            len,
            values,
            code_lens,
            slot: shape.slot,
            occ,
            nodes,
            root,
            paths,
            sampling,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Distinct values in ascending order.
    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// Occurrences of `v` in the whole sequence.
    pub fn occurrences(&self, v: u8) -> usize {
        match self.slot[v as usize] {
            u8::MAX => 0,
            s => self.occ[s as usize],
        }
    }

    /// Depth of each distinct value's leaf, aligned with [`Self::values`].
    pub fn depths(&self) -> &[u8] {
        &self.code_lens
    }

    pub fn sampling(&self) -> u32 {
        self.sampling
    }

    /// `L[i]`.
    pub fn access(&self, i: usize) -> Result<u8> {
        if i >= self.len {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len,
            });
        }
        Ok(self.access_unchecked(i))
    }

    #[inline]
    pub(crate) fn access_unchecked(&self, mut i: usize) -> u8 {
        let mut at = self.root;
        loop {
            match at {
                Child::Leaf(s) => return self.values[s as usize],
                Child::Node(id) => {
                    let bv = &self.nodes[id as usize].bits;
                    let bit = bv.get(i);
                    i = if bit { bv.rank1(i) } else { bv.rank0(i) };
                    at = self.nodes[id as usize].children[bit as usize];
                }
            }
        }
    }

    /// Occurrences of `v` in `L[0, i)`.
    pub fn rank(&self, v: u8, i: usize) -> Result<usize> {
        if i > self.len {
            return Err(Error::OutOfBounds {
                index: i,
                len: self.len,
            });
        }
        Ok(match self.slot[v as usize] {
            u8::MAX => 0,
            s => self.rank_slot(s as usize, i),
        })
    }

    #[inline]
    fn rank_slot(&self, slot: usize, mut i: usize) -> usize {
        for &(id, bit) in &self.paths[slot] {
            let bv = &self.nodes[id as usize].bits;
            i = if bit { bv.rank1(i) } else { bv.rank0(i) };
        }
        i
    }

    /// Returns `(L[i], rank_{L[i]}(L, i + 1))` in one descent.
    #[inline]
    pub(crate) fn access_and_rank(&self, mut i: usize) -> (u8, usize) {
        let mut at = self.root;
        loop {
            match at {
                Child::Leaf(s) => return (self.values[s as usize], i + 1),
                Child::Node(id) => {
                    let bv = &self.nodes[id as usize].bits;
                    let bit = bv.get(i);
                    i = if bit { bv.rank1(i) } else { bv.rank0(i) };
                    at = self.nodes[id as usize].children[bit as usize];
                }
            }
        }
    }

    /// Position of the `j`-th occurrence (1-based) of `v`.
    pub fn select(&self, v: u8, j: usize) -> Result<usize> {
        let slot = self.slot[v as usize];
        if slot == u8::MAX || j == 0 || j > self.occ[slot as usize] {
            return Err(Error::NotFound {
                what: "wavelet tree value",
                occurrence: j,
            });
        }
        Ok(self.select_slot(slot as usize, j))
    }

    #[inline]
    pub(crate) fn select_unchecked(&self, v: u8, j: usize) -> usize {
        self.select_slot(self.slot[v as usize] as usize, j)
    }

    #[inline]
    fn select_slot(&self, slot: usize, j: usize) -> usize {
        let mut pos = j;
        for &(id, bit) in self.paths[slot].iter().rev() {
            let bv = &self.nodes[id as usize].bits;
            pos = if bit { bv.select1(pos) } else { bv.select0(pos) } + 1;
        }
        pos - 1
    }

    /// Sum of the node bitvector lengths, `Σ occ(v)·depth(v)`.
    pub fn payload_bits(&self) -> u64 {
        self.nodes.iter().map(|n| n.bits.len() as u64).sum()
    }

    pub fn rank_overhead_bits(&self) -> u64 {
        self.nodes.iter().map(|n| n.bits.rank_overhead_bits()).sum()
    }

    pub fn select_overhead_bits(&self) -> u64 {
        self.nodes.iter().map(|n| n.bits.select_overhead_bits()).sum()
    }

    /// Appends the serialized tree: length, `(value, depth)` pairs, sampling,
    /// then each node in preorder as `(bit length, packed bits)`.
    pub fn write_to(&self, out: &mut Vec<u8>) {
        varint::put(out, self.len as u64);
        varint::put(out, self.values.len() as u64);
        for (&v, &d) in self.values.iter().zip(&self.code_lens) {
            out.push(v);
            out.push(d);
        }
        varint::put(out, self.sampling as u64);
        for node in &self.nodes {
            let bits = node.bits.len();
            varint::put(out, bits as u64);
            let bytes = bits.div_ceil(8);
            out.extend(
                node.bits
                    .words()
                    .iter()
                    .flat_map(|w| w.to_le_bytes())
                    .take(bytes),
            );
        }
    }

    pub(crate) fn read_from(cur: &mut Cursor<'_>) -> Result<Self> {
        let len = cur.get_usize("sequence length", usize::MAX >> 8)?;
        if len == 0 {
            return Err(Error::Format("empty wavelet tree".into()));
        }
        let distinct = cur.get_usize("distinct values", MAX_DISTINCT)?;
        if distinct == 0 {
            return Err(Error::Format("wavelet tree without values".into()));
        }
        let mut values = Vec::with_capacity(distinct);
        let mut code_lens = Vec::with_capacity(distinct);
        for _ in 0..distinct {
            values.push(cur.byte()?);
            code_lens.push(cur.byte()?);
        }
        if values.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Format("wavelet values not ascending".into()));
        }
        let sampling = cur.get_usize("select sampling", 1 << 20)? as u32;
        if sampling == 0 {
            return Err(Error::Format("zero select sampling".into()));
        }
        let shape = Shape::canonical(&values, &code_lens)?;

        let mut nodes = Vec::with_capacity(distinct - 1);
        let root = read_node(&shape, cur, 0, 0, Some(len), sampling, &mut nodes)?;
        Ok(Self::assemble(len, values, code_lens, shape, nodes, root, sampling))
    }
}

/// Canonical code over the distinct values.
struct Shape {
    /// Per slot: (code, length).
    codes: Vec<(u64, u8)>,
    slot: [u8; 256],
}

impl Shape {
    fn canonical(values: &[u8], code_lens: &[u8]) -> Result<Self> {
        let mut slot = [u8::MAX; 256];
        for (s, &v) in values.iter().enumerate() {
            slot[v as usize] = s as u8;
        }
        if values.len() == 1 {
            if code_lens[0] != 0 {
                return Err(Error::Format("single-value tree with nonzero depth".into()));
            }
            return Ok(Shape {
                codes: vec![(0, 0)],
                slot,
            });
        }
        if code_lens.iter().any(|&d| d == 0 || d as usize >= MAX_DISTINCT) {
            return Err(Error::Format("invalid wavelet leaf depth".into()));
        }
        // Kraft equality is required for a full binary shape.
        let lmax = *code_lens.iter().max().unwrap() as u32;
        let kraft: u128 = code_lens.iter().map(|&d| 1u128 << (lmax - d as u32)).sum();
        if kraft != 1u128 << lmax {
            return Err(Error::Format("wavelet shape is not a full binary tree".into()));
        }
        let mut order: Vec<usize> = (0..values.len()).collect();
        order.sort_by_key(|&s| (code_lens[s], values[s]));
        let mut codes = vec![(0u64, 0u8); values.len()];
        let mut code = 0u64;
        let mut prev_len = code_lens[order[0]];
        for (k, &s) in order.iter().enumerate() {
            let l = code_lens[s];
            if k > 0 {
                code = (code + 1) << (l - prev_len);
            }
            codes[s] = (code, l);
            prev_len = l;
        }
        Ok(Shape { codes, slot })
    }

    /// Slots whose code starts with `prefix` of length `depth`.
    fn under(&self, prefix: u64, depth: u8) -> impl Iterator<Item = usize> + '_ {
        self.codes
            .iter()
            .enumerate()
            .filter(move |(_, &(c, l))| l >= depth && (depth == 0 || c >> (l - depth) == prefix))
            .map(|(s, _)| s)
    }

    fn bit(&self, slot: usize, depth: u8) -> bool {
        let (c, l) = self.codes[slot];
        (c >> (l - depth - 1)) & 1 == 1
    }
}

fn build_node(
    shape: &Shape,
    seq: &[u8],
    prefix: u64,
    depth: u8,
    sampling: u32,
    nodes: &mut Vec<Node>,
) -> Child {
    let mut under = shape.under(prefix, depth);
    let first = under.next().expect("every subtree holds a value");
    if under.next().is_none() && shape.codes[first].1 == depth {
        return Child::Leaf(first as u8);
    }
    let id = nodes.len() as u32;
    nodes.push(Node {
        bits: RankSelect::from_bits(std::iter::empty(), sampling),
        children: [Child::Leaf(0); 2],
    });
    let mut builder = BitBuilder::with_capacity(seq.len());
    let (mut left, mut right) = (Vec::new(), Vec::new());
    for &s in seq {
        let b = shape.bit(s as usize, depth);
        builder.push(b);
        if b {
            right.push(s);
        } else {
            left.push(s);
        }
    }
    nodes[id as usize].bits = builder.build(sampling);
    let l = build_node(shape, &left, prefix << 1, depth + 1, sampling, nodes);
    drop(left);
    let r = build_node(shape, &right, (prefix << 1) | 1, depth + 1, sampling, nodes);
    nodes[id as usize].children = [l, r];
    Child::Node(id)
}

fn read_node(
    shape: &Shape,
    cur: &mut Cursor<'_>,
    prefix: u64,
    depth: u8,
    expected: Option<usize>,
    sampling: u32,
    nodes: &mut Vec<Node>,
) -> Result<Child> {
    let mut under = shape.under(prefix, depth);
    let first = under.next().ok_or_else(|| Error::Format("empty subtree".into()))?;
    if under.next().is_none() && shape.codes[first].1 == depth {
        return Ok(Child::Leaf(first as u8));
    }
    let bits = cur.get_usize("node length", usize::MAX >> 8)?;
    if expected.is_some_and(|e| e != bits) {
        return Err(Error::Format("wavelet node length mismatch".into()));
    }
    let raw = cur.bytes(bits.div_ceil(8))?;
    let words: Vec<u64> = raw
        .chunks(8)
        .map(|c| {
            let mut b = [0u8; 8];
            b[..c.len()].copy_from_slice(c);
            u64::from_le_bytes(b)
        })
        .collect();
    let bv = RankSelect::from_words(words, bits, sampling);
    let (zeros, ones) = (bv.count_zeros(), bv.count_ones());
    let id = nodes.len() as u32;
    nodes.push(Node {
        bits: bv,
        children: [Child::Leaf(0); 2],
    });
    let l = read_node(shape, cur, prefix << 1, depth + 1, Some(zeros), sampling, nodes)?;
    let r = read_node(shape, cur, (prefix << 1) | 1, depth + 1, Some(ones), sampling, nodes)?;
    nodes[id as usize].children = [l, r];
    Ok(Child::Node(id))
}
