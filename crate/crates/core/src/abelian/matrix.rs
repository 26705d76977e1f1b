use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

/// Zero fill ratio above which a matrix is stored as triplets.
pub const SPARSE_THRESHOLD: f64 = 0.7;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Storage {
    Dense(Vec<BigInt>),
    Sparse(BTreeMap<(usize, usize), BigInt>),
}

/// Integer matrix with arbitrary-precision entries.
///
/// The storage form is chosen from the fill ratio when the matrix is built
/// and never affects equality, arithmetic, or serialization.
#[derive(Clone, Debug)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    storage: Storage,
}

impl PartialEq for IntMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.rows == other.rows
            && self.cols == other.cols
            && (0..self.rows).all(|i| self.sparse_row(i) == other.sparse_row(i))
    }
}

impl Eq for IntMatrix {}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            storage: Storage::Sparse(BTreeMap::new()),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn diagonal(rows: usize, cols: usize, diag: &[BigInt]) -> Self {
        let mut m = Self::zeros(rows, cols);
        for (i, d) in diag.iter().enumerate().take(rows.min(cols)) {
            m.set(i, i, d.clone());
        }
        m.compact()
    }

    /// Builds a matrix from row vectors; every row must have length `cols`.
    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        let data: Vec<BigInt> = rows.into_iter().flatten().collect();
        IntMatrix {
            rows: n,
            cols,
            storage: Storage::Dense(data),
        }
        .compact()
    }

    /// Builds a matrix from rows of `(column, value)` pairs; zero values and
    /// repeated columns are allowed, repeats are summed.
    pub fn from_sparse_rows(cols: usize, rows: Vec<Vec<(usize, BigInt)>>) -> Self {
        let n = rows.len();
        let mut map = BTreeMap::new();
        for (i, row) in rows.into_iter().enumerate() {
            for (j, x) in row {
                assert!(j < cols, "column out of range");
                *map.entry((i, j)).or_insert_with(BigInt::zero) += x;
            }
        }
        map.retain(|_, x: &mut BigInt| !x.is_zero());
        IntMatrix {
            rows: n,
            cols,
            storage: Storage::Sparse(map),
        }
        .compact()
    }

    pub fn from_i64_rows(cols: usize, rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            cols,
            rows.iter()
                .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
                .collect(),
        )
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_sparse(&self) -> bool {
        matches!(self.storage, Storage::Sparse(_))
    }

    pub fn nonzero_count(&self) -> usize {
        match &self.storage {
            Storage::Dense(d) => d.iter().filter(|x| !x.is_zero()).count(),
            Storage::Sparse(m) => m.len(),
        }
    }

    /// Re-selects the storage form from the current fill ratio.
    pub fn compact(self) -> Self {
        let total = self.rows * self.cols;
        let nnz = self.nonzero_count();
        let want_sparse = total == 0 || (total - nnz) as f64 / total as f64 > SPARSE_THRESHOLD;
        match (self.storage, want_sparse) {
            (Storage::Dense(d), true) => {
                let cols = self.cols;
                let map = d
                    .into_iter()
                    .enumerate()
                    .filter(|(_, x)| !x.is_zero())
                    .map(|(k, x)| ((k / cols, k % cols), x))
                    .collect();
                IntMatrix {
                    rows: self.rows,
                    cols,
                    storage: Storage::Sparse(map),
                }
            }
            (Storage::Sparse(m), false) => {
                let mut d = vec![BigInt::zero(); total];
                for ((i, j), x) in m {
                    d[i * self.cols + j] = x;
                }
                IntMatrix {
                    rows: self.rows,
                    cols: self.cols,
                    storage: Storage::Dense(d),
                }
            }
            (storage, _) => IntMatrix {
                rows: self.rows,
                cols: self.cols,
                storage,
            },
        }
    }

    pub fn get(&self, i: usize, j: usize) -> BigInt {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols + j].clone(),
            Storage::Sparse(m) => m.get(&(i, j)).cloned().unwrap_or_default(),
        }
    }

    pub fn set(&mut self, i: usize, j: usize, x: BigInt) {
        assert!(i < self.rows && j < self.cols, "index out of range");
        match &mut self.storage {
            Storage::Dense(d) => d[i * self.cols + j] = x,
            Storage::Sparse(m) => {
                if x.is_zero() {
                    m.remove(&(i, j));
                } else {
                    m.insert((i, j), x);
                }
            }
        }
    }

    pub fn row(&self, i: usize) -> Vec<BigInt> {
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols..(i + 1) * self.cols].to_vec(),
            Storage::Sparse(m) => {
                let mut r = vec![BigInt::zero(); self.cols];
                for ((_, j), x) in m.range((i, 0)..(i + 1, 0)) {
                    r[*j] = x.clone();
                }
                r
            }
        }
    }

    /// Nonzero entries of row `i` in column order.
    pub fn sparse_row(&self, i: usize) -> Vec<(usize, BigInt)> {
        match &self.storage {
            Storage::Dense(d) => d[i * self.cols..(i + 1) * self.cols]
                .iter()
                .enumerate()
                .filter(|(_, x)| !x.is_zero())
                .map(|(j, x)| (j, x.clone()))
                .collect(),
            Storage::Sparse(m) => m
                .range((i, 0)..(i + 1, 0))
                .map(|((_, j), x)| (*j, x.clone()))
                .collect(),
        }
    }

    pub fn sparse_rows(&self) -> Vec<Vec<(usize, BigInt)>> {
        (0..self.rows).map(|i| self.sparse_row(i)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|i| self.row(i)).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut rows = vec![Vec::new(); self.cols];
        for i in 0..self.rows {
            for (j, x) in self.sparse_row(i) {
                rows[j].push((i, x));
            }
        }
        Self::from_sparse_rows(self.rows, rows)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let b = other.sparse_rows();
        let rows = (0..self.rows)
            .map(|i| {
                let mut acc = BTreeMap::new();
                for (k, x) in self.sparse_row(i) {
                    for (j, y) in &b[k] {
                        *acc.entry(*j).or_insert_with(BigInt::zero) += &x * y;
                    }
                }
                acc.into_iter().collect()
            })
            .collect();
        IntMatrix::from_sparse_rows(other.cols, rows)
    }

    /// Row vector times matrix.
    pub fn apply_row(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.rows, "vector length mismatch");
        let mut out = vec![BigInt::zero(); self.cols];
        match &self.storage {
            Storage::Dense(d) => {
                for (i, vi) in v.iter().enumerate() {
                    if vi.is_zero() {
                        continue;
                    }
                    for (o, x) in out.iter_mut().zip(&d[i * self.cols..(i + 1) * self.cols]) {
                        if !x.is_zero() {
                            *o += vi * x;
                        }
                    }
                }
            }
            Storage::Sparse(m) => {
                for ((i, j), x) in m {
                    if !v[*i].is_zero() {
                        out[*j] += &v[*i] * x;
                    }
                }
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.nonzero_count() == 0
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert!(self.is_square(), "determinant of a non-square matrix");
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                    a[i][j] = v;
                }
            }
            prev = a[k][k].clone();
        }
        sign * &a[n - 1][n - 1]
    }

    pub fn is_unimodular(&self) -> bool {
        self.is_square() && self.determinant().abs().is_one()
    }

    /// Stacks `other` below `self`.
    pub fn vstack(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.cols, "width mismatch in vstack");
        let mut rows = self.sparse_rows();
        rows.extend(other.sparse_rows());
        IntMatrix::from_sparse_rows(self.cols, rows)
    }

    pub fn to_record(&self) -> MatrixRecord {
        MatrixRecord {
            rows: self.rows,
            cols: self.cols,
            entries: self.to_rows().into_iter().flatten().collect(),
        }
    }

    pub fn from_record(rec: &MatrixRecord) -> Option<Self> {
        if rec.entries.len() != rec.rows * rec.cols {
            return None;
        }
        if rec.cols == 0 {
            return Some(IntMatrix::zeros(rec.rows, 0));
        }
        let rows = rec.entries.chunks(rec.cols).map(|c| c.to_vec()).collect();
        Some(IntMatrix::from_rows(rec.cols, rows))
    }
}

/// Row-major serialized matrix.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixRecord {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<BigInt>,
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for row in self.to_rows() {
            let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn storage_follows_fill_ratio() {
        let sparse = IntMatrix::from_i64_rows(4, &[vec![1, 0, 0, 0], vec![0, 0, 0, 0]]);
        assert!(sparse.is_sparse());
        let dense = IntMatrix::from_i64_rows(2, &[vec![1, 2], vec![3, 0]]);
        assert!(!dense.is_sparse());
        assert_eq!(sparse.clone().compact(), sparse);
    }

    #[test]
    fn product_and_transpose() {
        let a = IntMatrix::from_i64_rows(2, &[vec![1, 2], vec![3, 4]]);
        let b = IntMatrix::from_i64_rows(2, &[vec![0, 1], vec![1, 0]]);
        assert_eq!(
            a.mul(&b),
            IntMatrix::from_i64_rows(2, &[vec![2, 1], vec![4, 3]])
        );
        assert_eq!(a.transpose().get(0, 1), BigInt::from(3));
        assert_eq!(a.determinant(), BigInt::from(-2));
        assert!(b.is_unimodular());
    }

    #[test]
    fn record_round_trip() {
        let a = IntMatrix::from_i64_rows(3, &[vec![1, -2, 0], vec![0, 0, 7]]);
        assert_eq!(IntMatrix::from_record(&a.to_record()).unwrap(), a);
        let empty = IntMatrix::zeros(0, 3);
        assert_eq!(IntMatrix::from_record(&empty.to_record()).unwrap(), empty);
    }
}
