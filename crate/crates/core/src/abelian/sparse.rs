//! Unit-pivot elimination on sparse integer rows.
//!
//! Relation matrices here have a handful of `±1` entries per row. Pivoting
//! on those entries only ever adds integer multiples of rows, so no gcd
//! steps are needed and entries grow additively rather than multiplicatively.
//! Pivots are taken in the sparsest remaining column, from the lightest row,
//! to limit fill-in.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub(crate) type SparseRow = Vec<(usize, BigInt)>;

pub(crate) fn sparse(row: &[BigInt]) -> SparseRow {
    row.iter()
        .enumerate()
        .filter(|(_, x)| !x.is_zero())
        .map(|(i, x)| (i, x.clone()))
        .collect()
}

pub(crate) fn dense(width: usize, row: &SparseRow) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); width];
    for (i, x) in row {
        out[*i] = x.clone();
    }
    out
}

fn entry(row: &SparseRow, c: usize) -> Option<&BigInt> {
    row.binary_search_by_key(&c, |(j, _)| *j)
        .ok()
        .map(|k| &row[k].1)
}

/// `a - m·b` over sorted sparse rows.
fn sub_multiple(a: &SparseRow, m: &BigInt, b: &SparseRow) -> SparseRow {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let take_a = j == b.len() || (i < a.len() && a[i].0 < b[j].0);
        let take_b = i == a.len() || (j < b.len() && b[j].0 < a[i].0);
        if take_a {
            out.push(a[i].clone());
            i += 1;
        } else if take_b {
            out.push((b[j].0, -(m * &b[j].1)));
            j += 1;
        } else {
            let x = &a[i].1 - m * &b[j].1;
            if !x.is_zero() {
                out.push((a[i].0, x));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Splits the lattice spanned by `rows` into pivot rows and a remainder.
///
/// Each pivot row has `+1` in its own column and `0` in every other pivot
/// column; the remaining rows vanish on all pivot columns. Together they span
/// the same lattice as `rows`.
/// Input rows must be sorted by column with no zero entries.
/// Pivot rows come back dense; the remainder stays sparse since it can be long.
pub(crate) fn unit_pivot_split(
    width: usize,
    rows: Vec<SparseRow>,
) -> (Vec<Vec<BigInt>>, Vec<SparseRow>) {
    let mut store: Vec<SparseRow> = rows.into_iter().filter(|r| !r.is_empty()).collect();
    let mut is_pivot = vec![false; store.len()];
    let mut col_rows: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); width];
    for (id, r) in store.iter().enumerate() {
        for (c, _) in r {
            col_rows[*c].insert(id);
        }
    }
    let mut eliminated = vec![false; width];

    loop {
        // Sparsest column first, then the lightest row holding a unit there.
        let mut cols: Vec<usize> = (0..width)
            .filter(|&c| !eliminated[c] && !col_rows[c].is_empty())
            .collect();
        cols.sort_by_key(|&c| (col_rows[c].len(), c));
        let choice = cols.into_iter().find_map(|c| {
            col_rows[c]
                .iter()
                .filter(|&&id| {
                    !is_pivot[id] && entry(&store[id], c).is_some_and(|x| x.magnitude().is_one())
                })
                .min_by_key(|&&id| (store[id].len(), id))
                .map(|&id| (c, id))
        });
        let Some((c, p)) = choice else { break };
        if entry(&store[p], c).is_some_and(|x| x.is_negative()) {
            for (_, x) in store[p].iter_mut() {
                *x = -std::mem::take(x);
            }
        }
        let pivot = store[p].clone();
        let others: Vec<usize> = col_rows[c].iter().copied().filter(|&id| id != p).collect();
        for id in others {
            let m = entry(&store[id], c).expect("indexed by column").clone();
            let updated = sub_multiple(&store[id], &m, &pivot);
            // Only the pivot's columns can appear or vanish.
            for (j, _) in &pivot {
                match (
                    entry(&store[id], *j).is_some(),
                    entry(&updated, *j).is_some(),
                ) {
                    (true, false) => {
                        col_rows[*j].remove(&id);
                    }
                    (false, true) => {
                        col_rows[*j].insert(id);
                    }
                    _ => {}
                }
            }
            store[id] = updated;
        }
        is_pivot[p] = true;
        eliminated[c] = true;
    }

    let mut pivots = Vec::new();
    let mut rest = Vec::new();
    for (id, r) in store.into_iter().enumerate() {
        if r.is_empty() {
            continue;
        }
        if is_pivot[id] {
            pivots.push(dense(width, &r));
        } else {
            rest.push(r);
        }
    }
    (pivots, rest)
}
