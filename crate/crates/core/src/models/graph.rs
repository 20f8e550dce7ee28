use num_rational::BigRational;
use num_traits::One;
use rand::Rng;

use super::distribution::float_to_rational;
use super::{EntryDistribution, ModelError};
use crate::linalg::{BitMatrix, IntMatrix, ModMatrix, Symmetry};

/// Erdős–Rényi `G(n, β)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GraphModel {
    n: usize,
    beta: f64,
    edge: EntryDistribution,
}

impl GraphModel {
    /// `β` is accepted on the closed interval `[0, 1]` so that the empty and
    /// complete graphs are expressible.
    pub fn new(n: usize, beta: f64) -> Result<Self, ModelError> {
        if n < 2 {
            return Err(ModelError::InvalidDimension(n));
        }
        if !(0.0..=1.0).contains(&beta) {
            return Err(ModelError::InvalidBeta(beta));
        }
        let b = float_to_rational(beta)?;
        let edge = EntryDistribution::new(2, vec![(0, BigRational::one() - &b), (1, b)])?;
        Ok(GraphModel { n, beta, edge })
    }

    /// `β = (ln n + c₀)/n`, clamped to `[0, 1]`.
    pub fn connectivity_window(n: usize, c0: f64) -> Result<Self, ModelError> {
        if n < 2 || !c0.is_finite() {
            return Err(ModelError::InvalidDimension(n));
        }
        GraphModel::new(n, (((n as f64).ln() + c0) / n as f64).clamp(0.0, 1.0))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Edge indicator law on `Z/2`.
    pub fn edge_law(&self) -> &EntryDistribution {
        &self.edge
    }
}

/// A simple graph on `0..n` stored as adjacency bit rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SampledGraph {
    n: usize,
    words: usize,
    adjacency: Vec<u64>,
    degree: Vec<u32>,
}

impl SampledGraph {
    pub fn empty(n: usize) -> Self {
        let words = n.div_ceil(64).max(1);
        SampledGraph {
            n,
            words,
            adjacency: vec![0; n * words],
            degree: vec![0; n],
        }
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Self {
        let mut g = SampledGraph::empty(n);
        for &(i, j) in edges {
            g.add_edge(i, j);
        }
        g
    }

    fn add_edge(&mut self, i: usize, j: usize) {
        if i == j || self.has_edge(i, j) {
            return;
        }
        self.adjacency[i * self.words + j / 64] |= 1 << (j % 64);
        self.adjacency[j * self.words + i / 64] |= 1 << (i % 64);
        self.degree[i] += 1;
        self.degree[j] += 1;
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        self.adjacency[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> u32 {
        self.degree[v]
    }

    pub fn edge_count(&self) -> usize {
        self.degree.iter().map(|&d| d as usize).sum::<usize>() / 2
    }

    pub fn is_connected(&self) -> bool {
        let w = self.words;
        let mut seen = vec![0u64; w];
        seen[0] = 1;
        let mut stack = vec![0usize];
        let mut reached = 1;
        while let Some(v) = stack.pop() {
            for k in 0..w {
                let mut fresh = self.adjacency[v * w + k] & !seen[k];
                seen[k] |= fresh;
                while fresh != 0 {
                    let b = fresh.trailing_zeros() as usize;
                    fresh &= fresh - 1;
                    stack.push(k * 64 + b);
                    reached += 1;
                }
            }
        }
        reached == self.n
    }

    /// `L = D − Adj` with the last row and column deleted.
    pub fn reduced_laplacian(&self) -> IntMatrix {
        let r = self.n - 1;
        let mut entries = vec![0i64; r * r];
        for i in 0..r {
            entries[i * r + i] = i64::from(self.degree[i]);
            for j in 0..r {
                if self.has_edge(i, j) {
                    entries[i * r + j] = -1;
                }
            }
        }
        IntMatrix::new(r, entries).expect("square by construction")
    }

    /// The reduced Laplacian mod 2: adjacency rows with degree parities on
    /// the diagonal.
    pub fn reduced_laplacian_bits(&self) -> BitMatrix {
        let r = self.n - 1;
        let rw = r.div_ceil(64).max(1);
        let tail_mask = if r % 64 == 0 { u64::MAX } else { (1u64 << (r % 64)) - 1 };
        let mut data = vec![0u64; r * rw];
        for i in 0..r {
            let row = &mut data[i * rw..(i + 1) * rw];
            row.copy_from_slice(&self.adjacency[i * self.words..i * self.words + rw]);
            row[rw - 1] &= tail_mask;
            if self.degree[i] % 2 == 1 {
                row[i / 64] |= 1 << (i % 64);
            }
        }
        BitMatrix::from_words(r, r, data)
    }

    /// The reduced Laplacian reduced mod `m`.
    pub fn reduced_laplacian_mod(&self, m: u64) -> ModMatrix {
        let r = self.n - 1;
        let mut entries = vec![0u64; r * r];
        for i in 0..r {
            entries[i * r + i] = u64::from(self.degree[i]) % m;
            let row = &self.adjacency[i * self.words..(i + 1) * self.words];
            for (k, &word) in row.iter().enumerate() {
                let mut bits = word;
                while bits != 0 {
                    let j = k * 64 + bits.trailing_zeros() as usize;
                    bits &= bits - 1;
                    if j < r {
                        entries[i * r + j] = m - 1;
                    }
                }
            }
        }
        ModMatrix::from_parts_unchecked(r, m, entries, Symmetry::Symmetric)
    }
}

pub fn sample_graph<R: Rng + ?Sized>(model: &GraphModel, rng: &mut R) -> SampledGraph {
    let n = model.n;
    let mut g = SampledGraph::empty(n);
    let mut row = 0usize;
    let mut row_start = 0usize;
    model.edge.for_each_nonzero(n * (n - 1) / 2, rng, |idx, _| {
        while idx >= row_start + (n - 1 - row) {
            row_start += n - 1 - row;
            row += 1;
        }
        g.add_edge(row, row + 1 + idx - row_start);
    });
    g
}

/// A graph draw with its reduced Laplacian and connectivity.
pub fn sample_graph_laplacian<R: Rng + ?Sized>(model: &GraphModel, rng: &mut R) -> (SampledGraph, IntMatrix, bool) {
    let g = sample_graph(model, rng);
    let l = g.reduced_laplacian();
    let connected = g.is_connected();
    (g, l, connected)
}
