/// A dense matrix over `F_2` with rows packed into `u64` words.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BitMatrix {
    rows: usize,
    cols: usize,
    words: usize,
    data: Vec<u64>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let words = cols.div_ceil(64).max(1);
        BitMatrix {
            rows,
            cols,
            words,
            data: vec![0; rows * words],
        }
    }

    /// Parities of a row-major residue array.
    pub fn from_residues(rows: usize, cols: usize, entries: &[u64]) -> Self {
        let mut m = BitMatrix::zeros(rows, cols);
        let w = m.words;
        for (i, row) in entries.chunks_exact(cols).take(rows).enumerate() {
            for (k, chunk) in row.chunks(64).enumerate() {
                m.data[i * w + k] = chunk.iter().enumerate().fold(0u64, |acc, (b, &x)| acc | (x & 1) << b);
            }
        }
        m
    }

    /// From packed rows of `cols.div_ceil(64)` words each; bits past `cols`
    /// must be clear.
    pub(crate) fn from_words(rows: usize, cols: usize, data: Vec<u64>) -> Self {
        let words = cols.div_ceil(64).max(1);
        assert_eq!(data.len(), rows * words);
        BitMatrix { rows, cols, words, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> bool {
        self.data[i * self.words + j / 64] >> (j % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, j: usize, value: bool) {
        let w = &mut self.data[i * self.words + j / 64];
        if value {
            *w |= 1 << (j % 64);
        } else {
            *w &= !(1 << (j % 64));
        }
    }

    pub fn flip(&mut self, i: usize, j: usize) {
        self.data[i * self.words + j / 64] ^= 1 << (j % 64);
    }

    pub fn row_words(&self, i: usize) -> &[u64] {
        &self.data[i * self.words..(i + 1) * self.words]
    }

    /// Rank by Gaussian elimination; consumes a copy.
    pub fn rank(&self) -> usize {
        let mut data = self.data.clone();
        let w = self.words;
        let mut rank = 0;
        for col in 0..self.cols {
            if rank == self.rows {
                break;
            }
            let word = col / 64;
            let bit = 1u64 << (col % 64);
            let Some(pivot) = (rank..self.rows).find(|&r| data[r * w + word] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in word..w {
                    data.swap(pivot * w + k, rank * w + k);
                }
            }
            let (head, tail) = data.split_at_mut((rank + 1) * w);
            let prow = &head[rank * w..];
            for row in tail.chunks_exact_mut(w) {
                if row[word] & bit != 0 {
                    for (a, &b) in row[word..].iter_mut().zip(&prow[word..]) {
                        *a ^= b;
                    }
                }
            }
            rank += 1;
        }
        rank
    }

    /// Bases of the left kernel `{y : yA = 0}` and the right kernel
    /// `{x : Ax = 0}`, as packed bit vectors of lengths `rows` and `cols`.
    pub fn kernels(&self) -> (Vec<Vec<u64>>, Vec<Vec<u64>>) {
        let (rows, cols, w) = (self.rows, self.cols, self.words);
        let tw = rows.div_ceil(64).max(1);
        let mut data = self.data.clone();
        let mut track = vec![0u64; rows * tw];
        for i in 0..rows {
            track[i * tw + i / 64] |= 1 << (i % 64);
        }
        // Forward elimination only; `track · A` stays equal to `data`.
        let mut pivots = Vec::new();
        for col in 0..cols {
            let rank = pivots.len();
            if rank == rows {
                break;
            }
            let word = col / 64;
            let bit = 1u64 << (col % 64);
            let Some(pivot) = (rank..rows).find(|&r| data[r * w + word] & bit != 0) else {
                continue;
            };
            if pivot != rank {
                for k in word..w {
                    data.swap(pivot * w + k, rank * w + k);
                }
                for k in 0..tw {
                    track.swap(pivot * tw + k, rank * tw + k);
                }
            }
            let (head, tail) = data.split_at_mut((rank + 1) * w);
            let prow = &head[rank * w..];
            let (thead, ttail) = track.split_at_mut((rank + 1) * tw);
            let ptrack = &thead[rank * tw..];
            for (row, trow) in tail.chunks_exact_mut(w).zip(ttail.chunks_exact_mut(tw)) {
                if row[word] & bit != 0 {
                    for (a, &b) in row[word..].iter_mut().zip(&prow[word..]) {
                        *a ^= b;
                    }
                    for (a, &b) in trow.iter_mut().zip(ptrack) {
                        *a ^= b;
                    }
                }
            }
            pivots.push(col);
        }
        let rank = pivots.len();
        let left = (rank..rows).map(|r| track[r * tw..(r + 1) * tw].to_vec()).collect();
        let mut is_pivot = vec![false; cols];
        for &c in &pivots {
            is_pivot[c] = true;
        }
        // Back substitution through the echelon rows, one free column at a time.
        let right = (0..cols)
            .filter(|&f| !is_pivot[f])
            .map(|f| {
                let mut v = vec![0u64; w];
                v[f / 64] |= 1 << (f % 64);
                for (r, &c) in pivots.iter().enumerate().rev() {
                    let row = &data[r * w..(r + 1) * w];
                    let parity = row.iter().zip(&v).map(|(a, b)| (a & b).count_ones()).sum::<u32>() & 1;
                    if parity == 1 {
                        v[c / 64] |= 1 << (c % 64);
                    }
                }
                v
            })
            .collect();
        (left, right)
    }
}

/// Indices of the set bits of a packed vector.
pub(crate) fn ones(v: &[u64]) -> impl Iterator<Item = usize> + '_ {
    v.iter().enumerate().flat_map(|(k, &word)| {
        let mut bits = word;
        std::iter::from_fn(move || {
            if bits == 0 {
                return None;
            }
            let b = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            Some(k * 64 + b)
        })
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranks() {
        assert_eq!(BitMatrix::zeros(3, 3).rank(), 0);
        assert_eq!(BitMatrix::from_residues(2, 2, &[1, 1, 1, 1]).rank(), 1);
        assert_eq!(BitMatrix::from_residues(3, 3, &[0, 1, 1, 1, 0, 1, 1, 1, 0]).rank(), 2);
        assert_eq!(BitMatrix::from_residues(3, 3, &[1, 2, 0, 0, 3, 0, 4, 0, 5]).rank(), 3);
    }

    #[test]
    fn wide_rows_cross_word_boundaries() {
        let n = 130;
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
            m.set(i, (i + 1) % n, true);
        }
        // Circulant I + shift has even row sums, so rank n - 1.
        assert_eq!(m.rank(), n - 1);
        m.flip(0, 0);
        assert_eq!(m.rank(), n);
        assert!(!m.get(0, 0));
    }

    #[test]
    fn kernels_annihilate() {
        let n = 70;
        let mut m = BitMatrix::zeros(n, n);
        let mut state = 12345u64;
        for i in 0..n {
            for j in 0..n {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                if state >> 61 == 0 {
                    m.set(i, j, true);
                }
            }
        }
        let rank = m.rank();
        let (left, right) = m.kernels();
        assert_eq!(left.len(), n - rank);
        assert_eq!(right.len(), n - rank);
        for x in &right {
            for i in 0..n {
                assert_eq!(ones(x).filter(|&j| m.get(i, j)).count() % 2, 0);
            }
        }
        for y in &left {
            for j in 0..n {
                assert_eq!(ones(y).filter(|&i| m.get(i, j)).count() % 2, 0);
            }
        }
    }
}
