//! Dense matrices over the two-element field.
//!
//! Rows are bit-packed into `u64` words so that row addition is a word-wise
//! XOR. Everything here is exact; there is no floating point anywhere.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

const WORD_BITS: usize = 64;

fn words_for(cols: usize) -> usize {
    cols.div_ceil(WORD_BITS)
}

/// A `rows x cols` matrix with entries in GF(2).
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MatrixGF2 {
    rows: usize,
    cols: usize,
    stride: usize,
    words: Vec<u64>,
}

/// Returned by [`MatrixGF2::multiply`] when the inner dimensions disagree.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionMismatch {
    pub left: (usize, usize),
    pub right: (usize, usize),
}

impl fmt::Display for DimensionMismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "cannot multiply a {}x{} matrix by a {}x{} matrix",
            self.left.0, self.left.1, self.right.0, self.right.1
        )
    }
}

impl core::error::Error for DimensionMismatch {}

/// Returned by [`MatrixGF2::from_rows`] for ragged input or entries other than 0 and 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MatrixInputError {
    Ragged { row: usize, expected: usize, found: usize },
    NotABit { row: usize, col: usize, value: u8 },
}

impl fmt::Display for MatrixInputError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            MatrixInputError::Ragged { row, expected, found } => {
                write!(f, "row {row} has {found} entries, expected {expected}")
            }
            MatrixInputError::NotABit { row, col, value } => {
                write!(f, "entry ({row}, {col}) is {value}, expected 0 or 1")
            }
        }
    }
}

impl core::error::Error for MatrixInputError {}

impl MatrixGF2 {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        let stride = words_for(cols);
        MatrixGF2 {
            rows,
            cols,
            stride,
            words: vec![0; rows * stride],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    /// Builds a matrix from rows of 0/1 bytes. An empty slice gives a 0x0 matrix.
    pub fn from_rows<R: AsRef<[u8]>>(rows: &[R]) -> Result<Self, MatrixInputError> {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        Self::from_rows_with_cols(rows, cols)
    }

    /// Like [`from_rows`](Self::from_rows) but with an explicit column count,
    /// so that `n x 0` shapes can be expressed.
    pub fn from_rows_with_cols<R: AsRef<[u8]>>(
        rows: &[R],
        cols: usize,
    ) -> Result<Self, MatrixInputError> {
        let mut m = Self::zeros(rows.len(), cols);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            if row.len() != cols {
                return Err(MatrixInputError::Ragged {
                    row: i,
                    expected: cols,
                    found: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                match v {
                    0 => {}
                    1 => m.set(i, j, true),
                    value => return Err(MatrixInputError::NotABit { row: i, col: j, value }),
                }
            }
        }
        Ok(m)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> bool) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                if f(i, j) {
                    m.set(i, j, true);
                }
            }
        }
        m
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    #[inline]
    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn is_empty(&self) -> bool {
        self.rows == 0 || self.cols == 0
    }

    /// # Panics
    /// Panics if `(row, col)` is out of range.
    #[inline]
    pub fn get(&self, row: usize, col: usize) -> bool {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of range");
        (self.words[row * self.stride + col / WORD_BITS] >> (col % WORD_BITS)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: bool) {
        assert!(row < self.rows && col < self.cols, "index ({row}, {col}) out of range");
        let w = &mut self.words[row * self.stride + col / WORD_BITS];
        let mask = 1u64 << (col % WORD_BITS);
        if value {
            *w |= mask;
        } else {
            *w &= !mask;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    fn row_words(&self, row: usize) -> &[u64] {
        &self.words[row * self.stride..(row + 1) * self.stride]
    }

    // row[dst] += row[src]
    fn add_row(&mut self, src: usize, dst: usize) {
        debug_assert_ne!(src, dst);
        for w in 0..self.stride {
            let v = self.words[src * self.stride + w];
            self.words[dst * self.stride + w] ^= v;
        }
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for w in 0..self.stride {
            self.words.swap(a * self.stride + w, b * self.stride + w);
        }
    }

    pub fn to_rows(&self) -> Vec<Vec<u8>> {
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) as u8).collect())
            .collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i))
    }

    /// Positions of the nonzero entries in row-major order.
    pub fn nonzero_entries(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.rows).flat_map(move |i| {
            (0..self.cols).filter(move |&j| self.get(i, j)).map(move |j| (i, j))
        })
    }

    pub fn row_is_zero(&self, row: usize) -> bool {
        self.row_words(row).iter().all(|&w| w == 0)
    }

    pub fn col_is_zero(&self, col: usize) -> bool {
        (0..self.rows).all(|i| !self.get(i, col))
    }

    /// Matrix product with addition mod 2.
    pub fn multiply(&self, other: &MatrixGF2) -> Result<MatrixGF2, DimensionMismatch> {
        if self.cols != other.rows {
            return Err(DimensionMismatch {
                left: self.shape(),
                right: other.shape(),
            });
        }
        // Row i of the product is the XOR of the rows of `other` selected by row i of `self`.
        let mut out = MatrixGF2::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.get(i, k) {
                    for w in 0..out.stride {
                        out.words[i * out.stride + w] ^= other.words[k * other.stride + w];
                    }
                }
            }
        }
        Ok(out)
    }

    /// Reduced row-echelon form together with its pivot columns.
    pub fn rref_with_pivots(&self) -> (MatrixGF2, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut next = 0;
        for col in 0..m.cols {
            if next == m.rows {
                break;
            }
            let Some(pivot) = (next..m.rows).find(|&r| m.get(r, col)) else {
                continue;
            };
            m.swap_rows(pivot, next);
            for r in 0..m.rows {
                if r != next && m.get(r, col) {
                    m.add_row(next, r);
                }
            }
            pivots.push(col);
            next += 1;
        }
        (m, pivots)
    }

    pub fn rref(&self) -> MatrixGF2 {
        self.rref_with_pivots().0
    }

    pub fn pivot_columns(&self) -> Vec<usize> {
        self.rref_with_pivots().1
    }

    pub fn rank(&self) -> usize {
        self.rref_with_pivots().1.len()
    }

    /// Dimension of the null space of the map `F^cols -> F^rows`.
    pub fn kernel_dim(&self) -> usize {
        self.cols - self.rank()
    }
}

impl fmt::Debug for MatrixGF2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MatrixGF2({}x{})", self.rows, self.cols)?;
        f.debug_list().entries(self.to_rows()).finish()
    }
}

pub fn multiply(a: &MatrixGF2, b: &MatrixGF2) -> Result<MatrixGF2, DimensionMismatch> {
    a.multiply(b)
}

pub fn rank(m: &MatrixGF2) -> usize {
    m.rank()
}

pub fn rref(m: &MatrixGF2) -> MatrixGF2 {
    m.rref()
}

pub fn kernel_dim(m: &MatrixGF2) -> usize {
    m.kernel_dim()
}
