use std::collections::BTreeMap;

use rand::Rng;

use super::{EntryDistribution, ModelError};
use crate::linalg::{ModMatrix, Symmetry};

/// Random `n × n` matrices whose free entries are independent: all entries
/// (general), the upper triangle with diagonal (symmetric), or the strict
/// upper triangle (alternating).
#[derive(Clone, Debug, PartialEq)]
pub struct MatrixModel {
    kind: Symmetry,
    n: usize,
    distribution: EntryDistribution,
    overrides: BTreeMap<(usize, usize), EntryDistribution>,
}

impl MatrixModel {
    pub fn new(kind: Symmetry, n: usize, distribution: EntryDistribution) -> Result<Self, ModelError> {
        if n == 0 {
            return Err(ModelError::InvalidDimension(n));
        }
        Ok(MatrixModel {
            kind,
            n,
            distribution,
            overrides: BTreeMap::new(),
        })
    }

    /// Draws entry `(i, j)` from its own law; `(i, j)` must be a free
    /// position and the law must share the modulus.
    pub fn with_override(mut self, i: usize, j: usize, law: EntryDistribution) -> Result<Self, ModelError> {
        let free = i < self.n
            && j < self.n
            && match self.kind {
                Symmetry::General => true,
                Symmetry::Symmetric => i <= j,
                Symmetry::Alternating => i < j,
            };
        if !free || law.modulus() != self.distribution.modulus() {
            return Err(ModelError::InvalidOverride { row: i, col: j });
        }
        self.overrides.insert((i, j), law);
        Ok(self)
    }

    pub fn kind(&self) -> Symmetry {
        self.kind
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn modulus(&self) -> u64 {
        self.distribution.modulus()
    }

    pub fn distribution(&self) -> &EntryDistribution {
        &self.distribution
    }

    /// Law of the free entry at `(i, j)`.
    pub fn law_at(&self, i: usize, j: usize) -> &EntryDistribution {
        self.overrides.get(&(i, j)).unwrap_or(&self.distribution)
    }

    /// Free positions in row-major order.
    pub fn free_positions(&self) -> Vec<(usize, usize)> {
        let mut cursor = FreeCursor::new(self.kind, self.n);
        (0..self.free_count()).map(|idx| cursor.position(idx)).collect()
    }

    /// Number of independent entries.
    pub fn free_count(&self) -> usize {
        let n = self.n;
        match self.kind {
            Symmetry::General => n * n,
            Symmetry::Symmetric => n * (n + 1) / 2,
            Symmetry::Alternating => n * (n - 1) / 2,
        }
    }

    /// Calls `f(i, j, x)` for every nonzero free entry, in row-major order
    /// of free positions, then for every overridden position.
    pub fn for_each_free_nonzero<R: Rng + ?Sized>(&self, rng: &mut R, mut f: impl FnMut(usize, usize, u64)) {
        let mut cursor = FreeCursor::new(self.kind, self.n);
        let overrides = &self.overrides;
        self.distribution.for_each_nonzero(self.free_count(), rng, |idx, x| {
            let (i, j) = cursor.position(idx);
            if !overrides.contains_key(&(i, j)) {
                f(i, j, x);
            }
        });
        for (&(i, j), law) in overrides {
            let x = law.sample(rng);
            if x != 0 {
                f(i, j, x);
            }
        }
    }
}

/// Maps increasing free-position indices to `(row, col)`.
struct FreeCursor {
    kind: Symmetry,
    n: usize,
    row: usize,
    row_start: usize,
}

impl FreeCursor {
    fn new(kind: Symmetry, n: usize) -> Self {
        FreeCursor {
            kind,
            n,
            row: 0,
            row_start: 0,
        }
    }

    fn first_col(&self, row: usize) -> usize {
        match self.kind {
            Symmetry::General => 0,
            Symmetry::Symmetric => row,
            Symmetry::Alternating => row + 1,
        }
    }

    fn position(&mut self, idx: usize) -> (usize, usize) {
        loop {
            let len = self.n - self.first_col(self.row);
            if idx < self.row_start + len {
                return (self.row, self.first_col(self.row) + idx - self.row_start);
            }
            self.row_start += len;
            self.row += 1;
        }
    }
}

/// Draws a matrix from the model; deterministic given the stream.
pub fn sample_matrix<R: Rng + ?Sized>(model: &MatrixModel, rng: &mut R) -> ModMatrix {
    let n = model.n;
    let m = model.modulus();
    let mut entries = vec![0u64; n * n];
    model.for_each_free_nonzero(rng, |i, j, x| {
        entries[i * n + j] = x;
        match model.kind {
            Symmetry::General => {}
            Symmetry::Symmetric => entries[j * n + i] = x,
            Symmetry::Alternating => entries[j * n + i] = m - x,
        }
    });
    ModMatrix::from_parts_unchecked(n, m, entries, model.kind)
}

/// Number of all-zero columns of a draw, without materializing it.
pub fn sample_zero_columns<R: Rng + ?Sized>(model: &MatrixModel, rng: &mut R) -> usize {
    let mut hit = vec![false; model.n];
    let symmetric = model.kind != Symmetry::General;
    model.for_each_free_nonzero(rng, |i, j, _| {
        hit[j] = true;
        if symmetric {
            hit[i] = true;
        }
    });
    hit.iter().filter(|&&h| !h).count()
}
