use rand::Rng;

use crate::error::{invalid, Error, Result};

/// Undirected simple graph on `0..n`.
///
/// Sparse graphs use compressed neighbor lists sorted by index; once the
/// bitset is smaller than the lists (`64·|E| > n²`) the rows are stored as
/// bitsets instead. Both forms answer the same queries and compare equal
/// when their edge sets agree.
#[derive(Clone, Debug)]
pub enum Adjacency {
    Sparse { offsets: Vec<usize>, neighbors: Vec<u32> },
    Dense { n: usize, words: usize, bits: Vec<u64>, edges: usize },
}

fn prefers_dense(n: usize, edges: f64) -> bool {
    n >= 64 && 64.0 * edges > (n as f64) * (n as f64)
}

impl Adjacency {
    pub fn empty(n: usize) -> Self {
        Self::Sparse { offsets: vec![0; n + 1], neighbors: Vec::new() }
    }

    /// Builds from an edge list; rejects self-loops and out-of-range
    /// endpoints, ignores duplicates and orientation.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut upper = vec![Vec::new(); n];
        for (u, v) in edges {
            for index in [u, v] {
                if index >= n {
                    return Err(Error::IndexOutOfRange { index, len: n });
                }
            }
            if u == v {
                return Err(invalid(format!("self-loop at vertex {u}")));
            }
            let (a, b) = if u < v { (u, v) } else { (v, u) };
            upper[a].push(b as u32);
        }
        for row in &mut upper {
            row.sort_unstable();
            row.dedup();
        }
        Ok(Self::from_upper(upper))
    }

    /// `upper[u]` holds the sorted, distinct neighbors `v > u`.
    pub(crate) fn from_upper(upper: Vec<Vec<u32>>) -> Self {
        let n = upper.len();
        let edges: usize = upper.iter().map(Vec::len).sum();
        if prefers_dense(n, edges as f64) {
            let mut dense = DenseBuilder::new(n);
            for (u, row) in upper.iter().enumerate() {
                for &v in row {
                    dense.insert(u, v as usize);
                }
            }
            return dense.finish();
        }
        let mut degree = vec![0usize; n];
        for (u, row) in upper.iter().enumerate() {
            degree[u] += row.len();
            for &v in row {
                degree[v as usize] += 1;
            }
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut neighbors = vec![0u32; offsets[n]];
        // Visiting u in increasing order leaves every list sorted: lower
        // neighbors arrive first, in order, then the row's own upper part.
        for (u, row) in upper.iter().enumerate() {
            for &v in row {
                let v = v as usize;
                neighbors[fill[v]] = u as u32;
                fill[v] += 1;
            }
            let start = fill[u];
            neighbors[start..start + row.len()].copy_from_slice(row);
            fill[u] += row.len();
        }
        Self::Sparse { offsets, neighbors }
    }

    /// Each of the `n(n−1)/2` pairs present independently with probability
    /// `p`, drawn row by row with geometric skips.
    pub fn bernoulli<R: Rng>(n: usize, p: f64, rng: &mut R) -> Result<Self> {
        if !(p > 0.0 && p <= 1.0) {
            return Err(invalid(format!("edge probability must be in (0,1], got {p}")));
        }
        let expected = p * n as f64 * (n.saturating_sub(1)) as f64 / 2.0;
        let log_q = (1.0 - p).ln();
        let mut row_sampler = |u: usize, emit: &mut dyn FnMut(usize)| {
            if p >= 1.0 {
                (u + 1..n).for_each(&mut *emit);
                return;
            }
            let mut v = u;
            loop {
                let r: f64 = rng.random();
                let skip = ((1.0 - r).ln() / log_q).floor();
                if !(skip < (n - v) as f64) {
                    break;
                }
                v += skip as usize + 1;
                if v >= n {
                    break;
                }
                emit(v);
            }
        };
        if prefers_dense(n, expected) {
            let mut dense = DenseBuilder::new(n);
            for u in 0..n {
                row_sampler(u, &mut |v| dense.insert(u, v));
            }
            Ok(dense.finish())
        } else {
            let mut upper = vec![Vec::new(); n];
            for (u, row) in upper.iter_mut().enumerate() {
                row_sampler(u, &mut |v| row.push(v as u32));
            }
            Ok(Self::from_upper(upper))
        }
    }

    /// Number of vertices.
    pub fn len(&self) -> usize {
        match self {
            Self::Sparse { offsets, .. } => offsets.len() - 1,
            Self::Dense { n, .. } => *n,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edge_count(&self) -> usize {
        match self {
            Self::Sparse { neighbors, .. } => neighbors.len() / 2,
            Self::Dense { edges, .. } => *edges,
        }
    }

    pub fn is_dense(&self) -> bool {
        matches!(self, Self::Dense { .. })
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        match self {
            Self::Sparse { offsets, neighbors } => {
                neighbors[offsets[u]..offsets[u + 1]].binary_search(&(v as u32)).is_ok()
            }
            Self::Dense { words, bits, .. } => bits[u * words + v / 64] >> (v % 64) & 1 == 1,
        }
    }

    pub fn degree(&self, u: usize) -> usize {
        match self {
            Self::Sparse { offsets, .. } => offsets[u + 1] - offsets[u],
            Self::Dense { words, bits, .. } => {
                bits[u * words..(u + 1) * words].iter().map(|w| w.count_ones() as usize).sum()
            }
        }
    }

    /// Neighbors of `u` in increasing index order.
    #[inline]
    pub fn neighbors(&self, u: usize) -> Neighbors<'_> {
        match self {
            Self::Sparse { offsets, neighbors } => Neighbors::Sparse(neighbors[offsets[u]..offsets[u + 1]].iter()),
            Self::Dense { words, bits, .. } => {
                let row = &bits[u * words..(u + 1) * words];
                Neighbors::Dense { row, word: 0, current: row.first().copied().unwrap_or(0) }
            }
        }
    }

    /// Every edge once, as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.len()).flat_map(move |u| self.neighbors(u).filter(move |&v| v > u).map(move |v| (u, v)))
    }

    /// The subgraph keeping the edges accepted by `keep`.
    pub fn retain(&self, mut keep: impl FnMut(usize, usize) -> bool) -> Self {
        let n = self.len();
        let upper =
            (0..n).map(|u| self.neighbors(u).filter(|&v| v > u && keep(u, v)).map(|v| v as u32).collect()).collect();
        Self::from_upper(upper)
    }

    /// Subgraph induced by `members` (sorted, distinct); local vertex `i`
    /// is `members[i]`.
    pub fn induced(&self, members: &[usize]) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        let k = members.len();
        let mut upper = vec![Vec::new(); k];
        let scan_rows = match self {
            Self::Sparse { .. } => true,
            // Pair tests cost k/2 per member, a row walk n/64 words plus the degree.
            Self::Dense { n, edges, .. } => k / 2 > n / 64 + 2 * edges / n.max(&1),
        };
        for (i, &u) in members.iter().enumerate() {
            if scan_rows {
                for v in self.neighbors(u).filter(|&v| v > u) {
                    if let Ok(j) = members.binary_search(&v) {
                        upper[i].push(j as u32);
                    }
                }
            } else {
                for (j, &v) in members.iter().enumerate().skip(i + 1) {
                    if self.has_edge(u, v) {
                        upper[i].push(j as u32);
                    }
                }
            }
        }
        Self::from_upper(upper)
    }

    /// Checks symmetry and irreflexivity.
    pub fn check_invariants(&self) -> Result<()> {
        for u in 0..self.len() {
            for v in self.neighbors(u) {
                if u == v {
                    return Err(invalid(format!("self-loop at vertex {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(invalid(format!("edge {u}->{v} has no reverse")));
                }
            }
        }
        Ok(())
    }
}

impl PartialEq for Adjacency {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self.edge_count() == other.edge_count()
            && (0..self.len()).all(|u| self.neighbors(u).eq(other.neighbors(u)))
    }
}

pub enum Neighbors<'a> {
    Sparse(std::slice::Iter<'a, u32>),
    Dense { row: &'a [u64], word: usize, current: u64 },
}

impl Iterator for Neighbors<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        match self {
            Neighbors::Sparse(it) => it.next().map(|&v| v as usize),
            Neighbors::Dense { row, word, current } => loop {
                if *current != 0 {
                    let bit = current.trailing_zeros() as usize;
                    *current &= *current - 1;
                    return Some(*word * 64 + bit);
                }
                *word += 1;
                if *word >= row.len() {
                    return None;
                }
                *current = row[*word];
            },
        }
    }
}

struct DenseBuilder {
    n: usize,
    words: usize,
    bits: Vec<u64>,
    edges: usize,
}

impl DenseBuilder {
    fn new(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        Self { n, words, bits: vec![0; n * words], edges: 0 }
    }

    fn insert(&mut self, u: usize, v: usize) {
        let (w, b) = (u * self.words + v / 64, 1u64 << (v % 64));
        if self.bits[w] & b == 0 {
            self.bits[w] |= b;
            self.bits[v * self.words + u / 64] |= 1 << (u % 64);
            self.edges += 1;
        }
    }

    fn finish(self) -> Adjacency {
        Adjacency::Dense { n: self.n, words: self.words, bits: self.bits, edges: self.edges }
    }
}
