//! Smith normal form over the integers.
//!
//! The elimination always pivots on an entry of least nonzero absolute value
//! in the active submatrix, which keeps intermediate entries small on the
//! sparse, small-coefficient relation matrices this crate produces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};

use super::matrix::IntMatrix;
use crate::exec::Exec;

/// Result of a Smith normal form computation: `u * m * v == d`.
#[derive(Clone, Debug)]
pub struct Snf {
    pub d: IntMatrix,
    pub u: Option<IntMatrix>,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
}

impl Snf {
    /// Diagonal entries `d[i][i]` for `i < min(rows, cols)`.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d.get(i, i))
            .collect()
    }
}

/// Computes `(D, U, V)` with `U`, `V` unimodular and `U * m * V = D`.
pub fn smith_normal_form(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let snf = SnfCalc::new(m.to_rows(), m.cols(), true, Exec::default()).run();
    (snf.d, snf.u.expect("row transform tracked"), snf.v)
}

/// Smith form without the row transform; used when only the column basis
/// change matters (normal forms in a presented group).
pub(crate) fn smith_columns(rows: Vec<Vec<BigInt>>, cols: usize, exec: Exec) -> Snf {
    SnfCalc::new(rows, cols, false, exec).run()
}

struct SnfCalc {
    a: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
    u: Option<Vec<Vec<BigInt>>>,
    v: Vec<Vec<BigInt>>,
    v_inv: Vec<Vec<BigInt>>,
    exec: Exec,
}

fn identity_rows(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| {
            let mut r = vec![BigInt::zero(); n];
            r[i] = BigInt::from(1);
            r
        })
        .collect()
}

// Below this many rows the rayon overhead outweighs the work.
const PAR_ROWS: usize = 96;

impl SnfCalc {
    fn new(a: Vec<Vec<BigInt>>, cols: usize, track_u: bool, exec: Exec) -> Self {
        let rows = a.len();
        SnfCalc {
            u: track_u.then(|| identity_rows(rows)),
            v: identity_rows(cols),
            v_inv: identity_rows(cols),
            a,
            rows,
            cols,
            exec,
        }
    }

    fn run(mut self) -> Snf {
        let n = self.rows.min(self.cols);
        for t in 0..n {
            let Some((pi, pj)) = self.min_entry(t) else {
                break;
            };
            self.swap_rows(t, pi);
            self.swap_cols(t, pj);
            self.reduce_pivot(t);
            if self.a[t][t].is_negative() {
                self.negate_row(t);
            }
        }
        let diag: Vec<BigInt> = (0..n).map(|i| self.a[i][i].clone()).collect();
        Snf {
            d: IntMatrix::diagonal(self.rows, self.cols, &diag),
            u: self.u.map(|u| IntMatrix::from_rows(self.rows, u)),
            v: IntMatrix::from_rows(self.cols, self.v),
            v_inv: IntMatrix::from_rows(self.cols, self.v_inv),
        }
    }

    fn min_entry(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, BigInt)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                let x = &self.a[i][j];
                if x.is_zero() {
                    continue;
                }
                let ax = x.abs();
                if best.as_ref().is_none_or(|b| ax < b.2) {
                    let one = ax == BigInt::from(1);
                    best = Some((i, j, ax));
                    if one {
                        return best.map(|(i, j, _)| (i, j));
                    }
                }
            }
        }
        best.map(|(i, j, _)| (i, j))
    }

    fn reduce_pivot(&mut self, t: usize) {
        loop {
            self.clear_column(t);
            self.clear_row(t);
            let col_clean = (t + 1..self.rows).all(|i| self.a[i][t].is_zero());
            let row_clean = (t + 1..self.cols).all(|j| self.a[t][j].is_zero());
            if !(col_clean && row_clean) {
                // A remainder smaller than the pivot survived; move it up.
                let (mut bi, mut bj) = (t, t);
                let mut best = self.a[t][t].abs();
                for i in t + 1..self.rows {
                    let x = self.a[i][t].abs();
                    if !x.is_zero() && x < best {
                        best = x;
                        (bi, bj) = (i, t);
                    }
                }
                for j in t + 1..self.cols {
                    let x = self.a[t][j].abs();
                    if !x.is_zero() && x < best {
                        best = x;
                        (bi, bj) = (t, j);
                    }
                }
                self.swap_rows(t, bi);
                self.swap_cols(t, bj);
                continue;
            }
            let p = self.a[t][t].clone();
            let bad = (t + 1..self.rows)
                .find(|&i| (t + 1..self.cols).any(|j| !self.a[i][j].is_multiple_of(&p)));
            match bad {
                Some(i) => self.add_row(t, i),
                None => return,
            }
        }
    }

    fn clear_column(&mut self, t: usize) {
        let p = self.a[t][t].clone();
        let quotients: Vec<BigInt> = (t + 1..self.rows).map(|i| &self.a[i][t] / &p).collect();
        if quotients.iter().all(|q| q.is_zero()) {
            return;
        }
        let exec = if self.rows - t > PAR_ROWS {
            self.exec
        } else {
            Exec::Sequential
        };
        let (head, tail) = self.a.split_at_mut(t + 1);
        let pivot_row = &head[t];
        let mut work: Vec<(&mut Vec<BigInt>, &BigInt)> = tail.iter_mut().zip(&quotients).collect();
        exec.for_each_mut(&mut work, |(row, q)| {
            if !q.is_zero() {
                for (x, y) in row.iter_mut().zip(pivot_row) {
                    if !y.is_zero() {
                        *x -= *q * y;
                    }
                }
            }
        });
        if let Some(u) = self.u.as_mut() {
            let (head, tail) = u.split_at_mut(t + 1);
            let pivot_row = &head[t];
            for (row, q) in tail.iter_mut().zip(&quotients) {
                if !q.is_zero() {
                    for (x, y) in row.iter_mut().zip(pivot_row) {
                        if !y.is_zero() {
                            *x -= q * y;
                        }
                    }
                }
            }
        }
    }

    fn clear_row(&mut self, t: usize) {
        let p = self.a[t][t].clone();
        let quotients: Vec<(usize, BigInt)> = (t + 1..self.cols)
            .map(|j| (j, &self.a[t][j] / &p))
            .filter(|(_, q)| !q.is_zero())
            .collect();
        if quotients.is_empty() {
            return;
        }
        let exec = if self.rows > PAR_ROWS {
            self.exec
        } else {
            Exec::Sequential
        };
        let col_op = |row: &mut Vec<BigInt>| {
            let base = row[t].clone();
            if base.is_zero() {
                return;
            }
            for (j, q) in &quotients {
                row[*j] -= q * &base;
            }
        };
        exec.for_each_mut(&mut self.a, col_op);
        for row in self.v.iter_mut() {
            col_op(row);
        }
        // Inverse: row_t(V^-1) += q * row_j(V^-1).
        for (j, q) in &quotients {
            let add: Vec<BigInt> = self.v_inv[*j].iter().map(|x| q * x).collect();
            for (x, y) in self.v_inv[t].iter_mut().zip(add) {
                *x += y;
            }
        }
    }

    fn swap_rows(&mut self, i: usize, k: usize) {
        if i != k {
            self.a.swap(i, k);
            if let Some(u) = self.u.as_mut() {
                u.swap(i, k);
            }
        }
    }

    fn swap_cols(&mut self, j: usize, k: usize) {
        if j != k {
            for row in self.a.iter_mut().chain(self.v.iter_mut()) {
                row.swap(j, k);
            }
            self.v_inv.swap(j, k);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in self.a[i].iter_mut() {
            *x = -std::mem::take(x);
        }
        if let Some(u) = self.u.as_mut() {
            for x in u[i].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
    }

    /// row_t += row_i
    fn add_row(&mut self, t: usize, i: usize) {
        let src = self.a[i].clone();
        for (x, y) in self.a[t].iter_mut().zip(src) {
            *x += y;
        }
        if let Some(u) = self.u.as_mut() {
            let src = u[i].clone();
            for (x, y) in u[t].iter_mut().zip(src) {
                *x += y;
            }
        }
    }
}

/// True if the diagonal of `d` forms a nonnegative divisibility chain with
/// zeros only at the end.
pub fn is_divisibility_chain(diag: &[BigInt]) -> bool {
    if diag.iter().any(|x| x.is_negative()) {
        return false;
    }
    diag.windows(2).all(|w| {
        if w[0].is_zero() {
            w[1].is_zero()
        } else {
            w[1].is_multiple_of(&w[0])
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check(m: &IntMatrix) -> IntMatrix {
        let (d, u, v) = smith_normal_form(m);
        assert_eq!(u.mul(m).mul(&v), d);
        assert!(u.is_unimodular() && v.is_unimodular());
        let diag: Vec<BigInt> = (0..d.rows().min(d.cols())).map(|i| d.get(i, i)).collect();
        assert!(is_divisibility_chain(&diag));
        d
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let d = check(&IntMatrix::from_i64_rows(2, &[vec![2, 0], vec![0, 3]]));
        assert_eq!(d, IntMatrix::from_i64_rows(2, &[vec![1, 0], vec![0, 6]]));
    }

    #[test]
    fn zero_matrix_has_identity_transforms() {
        let z = IntMatrix::zeros(2, 2);
        let (d, u, v) = smith_normal_form(&z);
        assert!(d.is_zero());
        assert_eq!(u, IntMatrix::identity(2));
        assert_eq!(v, IntMatrix::identity(2));
    }

    #[test]
    fn identity_is_fixed() {
        let d = check(&IntMatrix::identity(3));
        assert_eq!(d, IntMatrix::identity(3));
    }

    #[test]
    fn empty_and_rectangular() {
        check(&IntMatrix::zeros(0, 3));
        check(&IntMatrix::zeros(3, 0));
        let d = check(&IntMatrix::from_i64_rows(
            3,
            &[
                vec![2, 4, 4],
                vec![-6, 6, 12],
                vec![10, -4, -16],
                vec![0, 0, 0],
            ],
        ));
        assert_eq!(
            (d.get(0, 0), d.get(1, 1), d.get(2, 2)),
            (2.into(), 6.into(), 12.into())
        );
    }

    #[test]
    fn v_inverse_is_tracked() {
        let m = IntMatrix::from_i64_rows(3, &[vec![3, 5, 7], vec![2, -4, 9], vec![1, 1, 1]]);
        let snf = smith_columns(m.to_rows(), 3, Exec::Sequential);
        assert_eq!(snf.v.mul(&snf.v_inv), IntMatrix::identity(3));
    }
}
