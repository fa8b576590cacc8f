//! Dense linear algebra over F2 on packed bit rows.

use std::fmt;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct BitVec {
    len: usize,
    words: Vec<u64>,
}

impl BitVec {
    pub fn zeros(len: usize) -> Self {
        BitVec { len, words: vec![0; len.div_ceil(64)] }
    }

    pub fn from_indices(len: usize, idx: impl IntoIterator<Item = usize>) -> Self {
        let mut v = BitVec::zeros(len);
        for i in idx {
            v.toggle(i);
        }
        v
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn set(&mut self, i: usize, b: bool) {
        if b {
            self.words[i / 64] |= 1 << (i % 64);
        } else {
            self.words[i / 64] &= !(1 << (i % 64));
        }
    }

    pub fn toggle(&mut self, i: usize) {
        self.words[i / 64] ^= 1 << (i % 64);
    }

    pub fn xor_assign(&mut self, other: &BitVec) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.words.iter().all(|w| *w == 0)
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    /// Index of the lowest set bit.
    pub fn first_one(&self) -> Option<usize> {
        self.words.iter().enumerate().find(|(_, w)| **w != 0).map(|(k, w)| k * 64 + w.trailing_zeros() as usize)
    }

    pub fn ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(k, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(k * 64 + t)
            })
        })
    }
}

impl fmt::Debug for BitVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            write!(f, "{}", u8::from(self.get(i)))?;
        }
        Ok(())
    }
}

/// Row-major matrix over F2. `rows()` is the target dimension when the matrix
/// is read as a linear map acting on column vectors.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct BitMatrix {
    cols: usize,
    rows: Vec<BitVec>,
}

impl BitMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        BitMatrix { cols, rows: vec![BitVec::zeros(cols); rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = BitMatrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, true);
        }
        m
    }

    pub fn from_rows(cols: usize, rows: Vec<BitVec>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "row length mismatch");
        BitMatrix { cols, rows }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> bool {
        self.rows[r].get(c)
    }

    pub fn set(&mut self, r: usize, c: usize, b: bool) {
        self.rows[r].set(c, b);
    }

    pub fn row(&self, r: usize) -> &BitVec {
        &self.rows[r]
    }

    pub fn transpose(&self) -> BitMatrix {
        let mut t = BitMatrix::zeros(self.cols, self.rows.len());
        for (r, row) in self.rows.iter().enumerate() {
            for c in row.ones() {
                t.set(c, r, true);
            }
        }
        t
    }

    /// `self * rhs` (apply `rhs` first).
    pub fn mul(&self, rhs: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, rhs.nrows(), "dimension mismatch in product");
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc = BitVec::zeros(rhs.cols);
                for k in row.ones() {
                    acc.xor_assign(&rhs.rows[k]);
                }
                acc
            })
            .collect();
        BitMatrix { cols: rhs.cols, rows }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(BitVec::is_zero)
    }

    pub fn rank(&self) -> usize {
        rank_of_rows(self.rows.clone())
    }

    /// Stacks the rows of `other` under the rows of `self`.
    pub fn vstack(&self, other: &BitMatrix) -> BitMatrix {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        BitMatrix { cols: self.cols, rows }
    }
}

/// Rank of the span of a set of vectors.
pub fn rank_of_rows(mut rows: Vec<BitVec>) -> usize {
    let mut rank = 0;
    let n = rows.len();
    for i in 0..n {
        let Some(p) = rows[i].first_one() else { continue };
        rank += 1;
        let pivot = rows[i].clone();
        for row in rows.iter_mut().skip(i + 1) {
            if row.get(p) {
                row.xor_assign(&pivot);
            }
        }
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rank_and_product() {
        let a = BitMatrix::from_rows(
            3,
            vec![BitVec::from_indices(3, [0, 1]), BitVec::from_indices(3, [1, 2]), BitVec::from_indices(3, [0, 2])],
        );
        assert_eq!(a.rank(), 2);
        assert!(a.mul(&BitMatrix::identity(3)) == a);
        assert_eq!(a.transpose().transpose(), a);
        let sq = a.mul(&a);
        // rows: (0,1)+(1,2) ... computed by hand
        assert_eq!(sq.row(0), &BitVec::from_indices(3, [0, 2]));
    }

    #[test]
    fn first_one_across_words() {
        let v = BitVec::from_indices(130, [129]);
        assert_eq!(v.first_one(), Some(129));
        assert_eq!(v.count_ones(), 1);
    }
}
