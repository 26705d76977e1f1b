use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::sparse::{dense, sparse, unit_pivot_split, SparseRow};
use crate::exec::Exec;

/// Row-echelon basis of a sublattice of `Z^n`, kept sorted by pivot column.
///
/// After [`Echelon::into_hermite`] the basis is in Hermite normal form:
/// positive pivots, entries above each pivot reduced into `[0, pivot)`.
/// Insertion re-normalizes whenever an entry outgrows `bit_limit`, which
/// bounds coefficient growth by the pivots.
#[derive(Clone, Debug)]
pub struct Echelon {
    width: usize,
    rows: Vec<Vec<BigInt>>,
    pivots: Vec<usize>,
    bit_limit: u64,
}

impl PartialEq for Echelon {
    fn eq(&self, other: &Self) -> bool {
        self.width == other.width && self.rows == other.rows && self.pivots == other.pivots
    }
}

impl Eq for Echelon {}

const MIN_BIT_LIMIT: u64 = 128;

fn max_bits(v: &[BigInt]) -> u64 {
    v.iter().map(BigInt::bits).max().unwrap_or(0)
}

fn first_nonzero(v: &[BigInt]) -> Option<usize> {
    v.iter().position(|x| !x.is_zero())
}

fn axpy(dst: &mut [BigInt], a: &BigInt, src: &[BigInt]) {
    for (d, s) in dst.iter_mut().zip(src) {
        if !s.is_zero() {
            *d += a * s;
        }
    }
}

// Rows per batch when reducing a large generating set in parallel.
const BATCH: usize = 512;

impl Echelon {
    pub fn new(width: usize) -> Self {
        Echelon {
            width,
            rows: Vec::new(),
            pivots: Vec::new(),
            bit_limit: MIN_BIT_LIMIT,
        }
    }

    /// Echelon basis of the lattice spanned by `rows`.
    ///
    /// Unit pivots are eliminated first (see [`unit_pivot_split`]); the gcd
    /// based insertion below only sees the remainder, whose support is small.
    /// Inserting raw relation rows one by one lets entries reach hundreds of
    /// thousands of bits on presentations like that of `P(F_121)`.
    pub fn from_rows(width: usize, rows: &[Vec<BigInt>], exec: Exec) -> Self {
        Self::from_sparse_rows(width, rows.iter().map(|r| sparse(r)).collect(), exec)
    }

    /// As [`Echelon::from_rows`], for rows given as sorted `(column, value)`
    /// pairs without zeros.
    pub fn from_sparse_rows(width: usize, rows: Vec<Vec<(usize, BigInt)>>, exec: Exec) -> Self {
        let (pivots, rest) = unit_pivot_split(width, rows);
        let mut e = Self::from_rows_batched(width, &rest, exec);
        for p in pivots {
            e.insert(p);
        }
        e
    }

    /// The first batch is inserted in order. Each later batch is reduced in
    /// parallel against the current Hermite basis and only the nonzero
    /// remainders are inserted, so entries stay bounded by the pivots.
    fn from_rows_batched(width: usize, rows: &[SparseRow], exec: Exec) -> Self {
        let mut e = Echelon::new(width);
        let split = if exec.is_parallel() {
            BATCH.min(rows.len())
        } else {
            rows.len()
        };
        for r in &rows[..split] {
            e.insert(dense(width, r));
        }
        for batch in rows[split..].chunks(BATCH) {
            e.normalize();
            let remainders = exec.map(batch, |r| {
                let (rem, zero) = e.reduce(&dense(width, r));
                (!zero).then_some(rem)
            });
            for r in remainders.into_iter().flatten() {
                e.insert(r);
            }
        }
        e
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<BigInt>] {
        &self.rows
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn into_basis(self) -> Vec<Vec<BigInt>> {
        self.rows
    }

    /// Adds a vector to the spanning set.
    pub fn insert(&mut self, row: Vec<BigInt>) {
        if self.insert_raw(row) > self.bit_limit {
            self.normalize();
            let bits = self.rows.iter().map(|r| max_bits(r)).max().unwrap_or(0);
            self.bit_limit = MIN_BIT_LIMIT.max(2 * bits);
        }
    }

    // Returns the largest entry size among the rows it touched.
    fn insert_raw(&mut self, mut row: Vec<BigInt>) -> u64 {
        assert_eq!(row.len(), self.width, "vector width mismatch");
        let mut k = 0;
        let mut bits = 0;
        loop {
            let Some(c) = first_nonzero(&row) else {
                return bits;
            };
            while k < self.pivots.len() && self.pivots[k] < c {
                k += 1;
            }
            if k == self.pivots.len() || self.pivots[k] != c {
                bits = bits.max(max_bits(&row));
                self.rows.insert(k, row);
                self.pivots.insert(k, c);
                return bits;
            }
            let b = &mut self.rows[k];
            let (bc, rc) = (b[c].clone(), row[c].clone());
            if rc.is_multiple_of(&bc) {
                let q = -(&rc / &bc);
                axpy(&mut row, &q, b);
            } else {
                // Unimodular 2x2 step: b <- s*b + t*row, row <- (bc/g)*row - (rc/g)*b.
                let e = bc.extended_gcd(&rc);
                let (g, s, t) = (e.gcd, e.x, e.y);
                let new_b: Vec<BigInt> = b.iter().zip(&row).map(|(x, y)| &s * x + &t * y).collect();
                let (bg, rg) = (&bc / &g, &rc / &g);
                let new_row: Vec<BigInt> =
                    b.iter().zip(&row).map(|(x, y)| &bg * y - &rg * x).collect();
                bits = bits.max(max_bits(&new_b));
                *b = new_b;
                row = new_row;
            }
        }
    }

    /// Reduces `v` against the basis; returns the remainder and whether it is zero.
    pub fn reduce(&self, v: &[BigInt]) -> (Vec<BigInt>, bool) {
        let mut v = v.to_vec();
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            if v[c].is_zero() {
                continue;
            }
            let q = v[c].div_floor(&row[c]);
            axpy(&mut v, &-q, row);
        }
        let zero = v.iter().all(|x| x.is_zero());
        (v, zero)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.reduce(v).1
    }

    pub fn contains_lattice(&self, other: &Echelon) -> bool {
        other.rows.iter().all(|r| self.contains(r))
    }

    /// Coordinates of a lattice member in the current basis.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut v = v.to_vec();
        let mut coords = vec![BigInt::zero(); self.rows.len()];
        for (k, (row, &c)) in self.rows.iter().zip(&self.pivots).enumerate() {
            if v[c].is_zero() {
                continue;
            }
            let (q, r) = v[c].div_rem(&row[c]);
            if !r.is_zero() {
                return None;
            }
            axpy(&mut v, &-&q, row);
            coords[k] = q;
        }
        v.iter().all(|x| x.is_zero()).then_some(coords)
    }

    /// Normalizes to Hermite normal form.
    pub fn into_hermite(mut self) -> Self {
        self.normalize();
        self
    }

    fn normalize(&mut self) {
        for k in 0..self.rows.len() {
            let c = self.pivots[k];
            if self.rows[k][c].is_negative() {
                for x in self.rows[k].iter_mut() {
                    *x = -std::mem::take(x);
                }
            }
        }
        for k in (0..self.rows.len()).rev() {
            let c = self.pivots[k];
            let (above, rest) = self.rows.split_at_mut(k);
            let row = &rest[0];
            for r in above.iter_mut() {
                let q = r[c].div_floor(&row[c]);
                if !q.is_zero() {
                    axpy(r, &-q, row);
                }
            }
        }
    }

    /// Index `[other : self]` when `self` is a full-rank sublattice of `other`
    /// spanning the same rational space; `None` if ranks differ or `self`
    /// is not contained in `other`.
    pub fn index_in(&self, other: &Echelon) -> Option<BigInt> {
        if self.rank() != other.rank() {
            return None;
        }
        let coords: Option<Vec<Vec<BigInt>>> =
            self.rows.iter().map(|r| other.coordinates(r)).collect();
        let m = super::IntMatrix::from_rows(other.rank(), coords?);
        Some(m.determinant().abs())
    }
}

/// Basis of `{c in Z^n : c·a_j ≡ 0 (mod m_j) for every column j}` where
/// `a` has `n` rows. A modulus of zero means exact vanishing and a modulus
/// of one makes the column vacuous.
pub fn preimage_lattice(a: &[Vec<BigInt>], moduli: &[BigInt], exec: Exec) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let active: Vec<usize> = (0..moduli.len()).filter(|&j| !moduli[j].is_one()).collect();
    let w = active.len();
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(n + w);
    for (i, r) in a.iter().enumerate() {
        let mut row: Vec<BigInt> = active.iter().map(|&j| r[j].clone()).collect();
        row.extend((0..n).map(|k| {
            if k == i {
                BigInt::one()
            } else {
                BigInt::zero()
            }
        }));
        rows.push(row);
    }
    for (k, &j) in active.iter().enumerate() {
        if moduli[j].is_zero() {
            continue;
        }
        let mut row = vec![BigInt::zero(); w + n];
        row[k] = moduli[j].clone();
        rows.push(row);
    }
    let e = Echelon::from_rows(w + n, &rows, exec).into_hermite();
    e.rows
        .iter()
        .zip(&e.pivots)
        .filter(|(_, &c)| c >= w)
        .map(|(r, _)| r[w..].to_vec())
        .collect()
}
