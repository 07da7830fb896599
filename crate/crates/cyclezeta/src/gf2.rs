//! Dense GF(2) linear algebra on word-packed rows.
//!
//! Matrices here are small (a lifted parity-check matrix of a desk-scale
//! cover has a few dozen rows), so plain Gaussian elimination is all we
//! need: rank, kernel basis, matrix-vector products.

/// A binary matrix with rows packed into `u64` words.
#[derive(Debug, Clone, PartialEq, Eq)]
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

    /// Builds a matrix from dense 0/1 rows. All rows must have equal length.
    pub fn from_rows(rows: &[Vec<u8>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::zeros(rows.len(), cols);
        for (j, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged rows");
            for (i, &bit) in row.iter().enumerate() {
                if bit != 0 {
                    m.set(j, i, true);
                }
            }
        }
        m
    }

    pub fn num_rows(&self) -> usize {
        self.rows
    }

    pub fn num_cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, row: usize, col: usize) -> bool {
        self.data[row * self.words + col / 64] >> (col % 64) & 1 == 1
    }

    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        let w = row * self.words + col / 64;
        let bit = 1u64 << (col % 64);
        if value {
            self.data[w] |= bit;
        } else {
            self.data[w] &= !bit;
        }
    }

    fn xor_row_into(&mut self, src: usize, dst: usize) {
        let (s, d) = (src * self.words, dst * self.words);
        for k in 0..self.words {
            self.data[d + k] ^= self.data[s + k];
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for k in 0..self.words {
            self.data.swap(a * self.words + k, b * self.words + k);
        }
    }

    /// Rank over GF(2). Works on a scratch copy.
    pub fn rank(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for col in 0..m.cols {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            rank += 1;
        }
        rank
    }

    /// Basis of the right kernel `{x : M x = 0}` as dense 0/1 vectors.
    ///
    /// Standard reduced-row-echelon construction: one basis vector per free
    /// column, with a 1 in the free column and the pivot-column back-fills.
    pub fn kernel_basis(&self) -> Vec<Vec<u8>> {
        let mut m = self.clone();
        let mut pivot_col_of_row = Vec::new();
        let mut pivot_row_of_col = vec![None; m.cols];
        let mut rank = 0;
        for (col, pivot_row) in pivot_row_of_col.iter_mut().enumerate() {
            if rank == m.rows {
                break;
            }
            let Some(pivot) = (rank..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(rank, pivot);
            for r in 0..m.rows {
                if r != rank && m.get(r, col) {
                    m.xor_row_into(rank, r);
                }
            }
            pivot_col_of_row.push(col);
            *pivot_row = Some(rank);
            rank += 1;
        }
        let mut basis = Vec::new();
        for free in 0..m.cols {
            if pivot_row_of_col[free].is_some() {
                continue;
            }
            let mut v = vec![0u8; m.cols];
            v[free] = 1;
            for (row, &pc) in pivot_col_of_row.iter().enumerate() {
                if m.get(row, free) {
                    v[pc] = 1;
                }
            }
            basis.push(v);
        }
        basis
    }

    /// `M x` over GF(2) for a dense 0/1 vector.
    pub fn mul_vec(&self, x: &[u8]) -> Vec<u8> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|j| {
                let mut acc = 0u8;
                for (i, &xi) in x.iter().enumerate() {
                    if xi & 1 == 1 && self.get(j, i) {
                        acc ^= 1;
                    }
                }
                acc
            })
            .collect()
    }

    /// True iff `M x = 0`.
    pub fn in_kernel(&self, x: &[u8]) -> bool {
        self.mul_vec(x).iter().all(|&b| b == 0)
    }
}

/// Rank of a set of dense 0/1 vectors (as rows).
pub fn span_rank(vectors: &[Vec<u8>]) -> usize {
    if vectors.is_empty() {
        return 0;
    }
    BitMatrix::from_rows(vectors).rank()
}
