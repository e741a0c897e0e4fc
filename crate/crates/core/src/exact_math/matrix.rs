use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::scalar::ExactScalar;

/// Sparse rational matrix. Zero entries are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: BTreeMap<(usize, usize), ExactScalar>,
}

impl SparseMatrix {
    pub fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: BTreeMap::new(),
        }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::new(size, size);
        for i in 0..size {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn from_dense(rows: &[Vec<ExactScalar>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        let mut m = Self::new(rows.len(), cols);
        for (r, row) in rows.iter().enumerate() {
            assert_eq!(row.len(), cols, "ragged dense matrix");
            for (c, v) in row.iter().enumerate() {
                m.set(r, c, v.clone());
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    /// Stores `value` at `(row, col)`; storing zero removes the entry.
    pub fn set(&mut self, row: usize, col: usize, value: ExactScalar) {
        assert!(row < self.rows && col < self.cols, "index out of bounds");
        if value.is_zero() {
            self.entries.remove(&(row, col));
        } else {
            self.entries.insert((row, col), value);
        }
    }

    pub fn get(&self, row: usize, col: usize) -> ExactScalar {
        self.entries
            .get(&(row, col))
            .cloned()
            .unwrap_or_else(BigRational::zero)
    }

    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &ExactScalar)> {
        self.entries.iter().map(|(&(r, c), v)| (r, c, v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn to_dense(&self) -> Vec<Vec<ExactScalar>> {
        let mut dense = vec![vec![BigRational::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            dense[r][c] = v.clone();
        }
        dense
    }

    /// Exact product `self * rhs`.
    pub fn multiply(&self, rhs: &SparseMatrix) -> SparseMatrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut rhs_rows: Vec<Vec<(usize, &ExactScalar)>> = vec![Vec::new(); rhs.rows];
        for (r, c, v) in rhs.entries() {
            rhs_rows[r].push((c, v));
        }
        let mut acc: BTreeMap<(usize, usize), ExactScalar> = BTreeMap::new();
        for (r, k, a) in self.entries() {
            for &(c, b) in &rhs_rows[k] {
                *acc.entry((r, c)).or_insert_with(BigRational::zero) += a * b;
            }
        }
        acc.retain(|_, v| !v.is_zero());
        SparseMatrix {
            rows: self.rows,
            cols: rhs.cols,
            entries: acc,
        }
    }

    /// Exact rank over the rationals.
    ///
    /// Each row is scaled to a primitive integer vector, then eliminated
    /// fraction-free: `row <- p * row - a * pivot_row`, followed by removal of
    /// the row content. The pivot row is always the shortest remaining row.
    pub fn rank(&self) -> usize {
        let mut denoms = vec![BigInt::one(); self.rows];
        for (r, _, v) in self.entries() {
            denoms[r] = denoms[r].lcm(v.denom());
        }
        let mut rows: Vec<Vec<(usize, BigInt)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            rows[r].push((c, v.numer() * (&denoms[r] / v.denom())));
        }
        rows.retain(|r| !r.is_empty());
        rows.iter_mut().for_each(|r| make_primitive(r));

        let mut rank = 0;
        while !rows.is_empty() {
            let (pivot_idx, _) = rows
                .iter()
                .enumerate()
                .min_by_key(|(i, r)| (r.len(), *i))
                .expect("nonempty");
            let pivot = rows.swap_remove(pivot_idx);
            rank += 1;
            let (pivot_col, pivot_val) = pivot[0].clone();
            for row in rows.iter_mut() {
                let Ok(pos) = row.binary_search_by_key(&pivot_col, |(c, _)| *c) else {
                    continue;
                };
                let factor = row[pos].1.clone();
                *row = combine(row, &pivot_val, &pivot, &factor);
                make_primitive(row);
            }
            rows.retain(|r| !r.is_empty());
        }
        rank
    }

    pub fn nullity(&self) -> usize {
        self.cols - self.rank()
    }
}

/// `p * row - a * pivot` over sorted sparse integer rows.
fn combine(
    row: &[(usize, BigInt)],
    p: &BigInt,
    pivot: &[(usize, BigInt)],
    a: &BigInt,
) -> Vec<(usize, BigInt)> {
    let mut out = Vec::with_capacity(row.len() + pivot.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < pivot.len() {
        let take_row = j >= pivot.len() || (i < row.len() && row[i].0 < pivot[j].0);
        let take_pivot = i >= row.len() || (j < pivot.len() && pivot[j].0 < row[i].0);
        let (col, value) = if take_row {
            let v = p * &row[i].1;
            i += 1;
            (row[i - 1].0, v)
        } else if take_pivot {
            let v = -(a * &pivot[j].1);
            j += 1;
            (pivot[j - 1].0, v)
        } else {
            let v = p * &row[i].1 - a * &pivot[j].1;
            i += 1;
            j += 1;
            (row[i - 1].0, v)
        };
        if !value.is_zero() {
            out.push((col, value));
        }
    }
    out
}

fn make_primitive(row: &mut [(usize, BigInt)]) {
    let content = row.iter().fold(BigInt::zero(), |g, (_, v)| g.gcd(v));
    if content.is_zero() || content.is_one() {
        return;
    }
    for (_, v) in row.iter_mut() {
        *v /= &content;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact_math::scalar::{int, rat};

    #[test]
    fn identity_and_zero_ranks() {
        assert_eq!(SparseMatrix::identity(3).rank(), 3);
        assert_eq!(SparseMatrix::new(4, 7).rank(), 0);
        assert_eq!(SparseMatrix::new(4, 7).nullity(), 7);
    }

    #[test]
    fn stores_no_zeros() {
        let mut m = SparseMatrix::new(2, 2);
        m.set(0, 0, int(1));
        m.set(0, 0, int(0));
        assert_eq!(m.nnz(), 0);
    }

    #[test]
    fn rational_rank_deficient() {
        // Second row is 3/2 times the first.
        let m = SparseMatrix::from_dense(&[
            vec![rat(2, 3), rat(1, 5), int(0)],
            vec![int(1), rat(3, 10), int(0)],
            vec![int(0), int(0), rat(-7, 3)],
        ]);
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn product_matches_dense() {
        let a = SparseMatrix::from_dense(&[vec![int(1), int(2)], vec![int(0), int(-1)]]);
        let b = SparseMatrix::from_dense(&[vec![int(3), int(0)], vec![rat(1, 2), int(1)]]);
        let c = a.multiply(&b);
        assert_eq!(
            c.to_dense(),
            vec![vec![int(4), int(2)], vec![rat(-1, 2), int(-1)]]
        );
    }
}
