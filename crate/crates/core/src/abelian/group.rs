use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::lattice::Echelon;
use super::matrix::{IntMatrix, MatrixRecord};
use super::snf::smith_columns;
use super::AbelianError;
use crate::exec::Exec;

/// A finitely presented abelian group `Z^n / rowspan(relations)`.
///
/// Construction computes a Smith form `U·R·V = D`; element normal forms are
/// read off in the basis given by the columns of `V`.
#[derive(Clone, Debug)]
pub struct FPGroup {
    labels: Vec<String>,
    relations: IntMatrix,
    /// Diagonal of `D`, padded with zeros to the generator count.
    diag: Vec<BigInt>,
    v: IntMatrix,
    v_inv: IntMatrix,
    /// SNF positions with `d != 1`, in order.
    slots: Vec<usize>,
    /// Columns of `V` at the slots, torsion columns reduced mod `d`.
    proj: IntMatrix,
    /// Rows of `V⁻¹` at the slots, reduced against the relation lattice.
    gens: IntMatrix,
}

/// The structure of a group: free rank plus torsion invariant factors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Structure {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl Structure {
    pub fn order(&self) -> Option<BigInt> {
        (self.free_rank == 0).then(|| self.torsion.iter().product())
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    pub fn is_cyclic(&self) -> bool {
        self.free_rank + self.torsion.len() <= 1
    }
}

impl fmt::Display for Structure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        parts.extend(self.torsion.iter().map(|d| format!("Z/{d}")));
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

impl FPGroup {
    pub fn new(labels: Vec<String>, relations: IntMatrix) -> Result<Self, AbelianError> {
        Self::with_exec(labels, relations, Exec::default())
    }

    pub fn with_exec(
        labels: Vec<String>,
        relations: IntMatrix,
        exec: Exec,
    ) -> Result<Self, AbelianError> {
        if relations.cols() != labels.len() {
            return Err(AbelianError::WidthMismatch {
                expected: labels.len(),
                found: relations.cols(),
            });
        }
        let n = labels.len();
        let lattice = Echelon::from_sparse_rows(n, relations.sparse_rows(), exec).into_hermite();
        let snf = smith_columns(lattice.basis().to_vec(), n, exec);
        let mut diag = snf.diagonal();
        diag.resize(n, BigInt::zero());
        Ok(Self::assemble(
            labels, relations, diag, snf.v, snf.v_inv, &lattice,
        ))
    }

    fn assemble(
        labels: Vec<String>,
        relations: IntMatrix,
        diag: Vec<BigInt>,
        v: IntMatrix,
        v_inv: IntMatrix,
        lattice: &Echelon,
    ) -> Self {
        let n = labels.len();
        let slots: Vec<usize> = (0..diag.len()).filter(|&i| !diag[i].is_one()).collect();
        let proj_rows: Vec<Vec<BigInt>> = (0..n)
            .map(|r| {
                slots
                    .iter()
                    .map(|&j| {
                        if diag[j].is_zero() {
                            v.get(r, j)
                        } else {
                            v.get(r, j).mod_floor(&diag[j])
                        }
                    })
                    .collect()
            })
            .collect();
        let proj = IntMatrix::from_rows(slots.len(), proj_rows);
        let gens = IntMatrix::from_rows(
            n,
            slots
                .iter()
                .map(|&j| lattice.reduce(&v_inv.row(j)).0)
                .collect(),
        );
        FPGroup {
            labels,
            relations,
            diag,
            v,
            v_inv,
            slots,
            proj,
            gens,
        }
    }

    /// Free abelian group on the given labels.
    pub fn free(labels: Vec<String>) -> Self {
        let n = labels.len();
        Self::assemble(
            labels,
            IntMatrix::zeros(0, n),
            vec![BigInt::zero(); n],
            IntMatrix::identity(n),
            IntMatrix::identity(n),
            &Echelon::new(n),
        )
    }

    /// `Z/d_1 ⊕ … ⊕ Z/d_k` presented diagonally (zero entries give free summands).
    pub fn diagonal(labels: Vec<String>, orders: &[BigInt]) -> Result<Self, AbelianError> {
        let n = labels.len();
        let rows = orders
            .iter()
            .enumerate()
            .filter(|(_, d)| !d.is_zero())
            .map(|(i, d)| {
                let mut r = vec![BigInt::zero(); n];
                r[i] = d.clone();
                r
            })
            .collect();
        Self::new(labels, IntMatrix::from_rows(n, rows))
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn relations(&self) -> &IntMatrix {
        &self.relations
    }

    pub fn structure(&self) -> Structure {
        let mut torsion = Vec::new();
        let mut free_rank = 0;
        for &i in &self.slots {
            if self.diag[i].is_zero() {
                free_rank += 1;
            } else {
                torsion.push(self.diag[i].clone());
            }
        }
        Structure { free_rank, torsion }
    }

    /// Canonical invariant factors: nontrivial torsion factors in divisibility
    /// order followed by one zero per free summand.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        self.slots.iter().map(|&i| self.diag[i].clone()).collect()
    }

    pub fn order(&self) -> Option<BigInt> {
        self.structure().order()
    }

    pub fn is_trivial(&self) -> bool {
        self.slots.is_empty()
    }

    /// Moduli of the canonical coordinates (zero for free coordinates).
    pub fn moduli(&self) -> Vec<BigInt> {
        self.invariant_factors()
    }

    fn check_len(&self, x: &[BigInt]) -> Result<(), AbelianError> {
        if x.len() != self.labels.len() {
            return Err(AbelianError::LengthMismatch {
                expected: self.labels.len(),
                found: x.len(),
            });
        }
        Ok(())
    }

    /// Canonical coordinates of an element given in generator coordinates.
    pub fn normal_form(&self, x: &[BigInt]) -> Result<Vec<BigInt>, AbelianError> {
        self.check_len(x)?;
        Ok(self.normal_form_unchecked(x))
    }

    pub(crate) fn normal_form_unchecked(&self, x: &[BigInt]) -> Vec<BigInt> {
        let y = self.proj.apply_row(x);
        self.slots
            .iter()
            .zip(y)
            .map(|(&i, c)| {
                let d = &self.diag[i];
                if d.is_zero() {
                    c
                } else {
                    c.mod_floor(d)
                }
            })
            .collect()
    }

    /// Canonical coordinates before reduction modulo the invariant factors.
    pub(crate) fn normal_form_coordinates(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.proj.apply_row(x)
    }

    pub fn normal_form_i64(&self, x: &[i64]) -> Result<Vec<BigInt>, AbelianError> {
        let x: Vec<BigInt> = x.iter().map(|&a| BigInt::from(a)).collect();
        self.normal_form(&x)
    }

    pub fn is_zero(&self, x: &[BigInt]) -> Result<bool, AbelianError> {
        Ok(self.normal_form(x)?.iter().all(|c| c.is_zero()))
    }

    pub fn equal(&self, x: &[BigInt], y: &[BigInt]) -> Result<bool, AbelianError> {
        Ok(self.normal_form(x)? == self.normal_form(y)?)
    }

    /// Generator coordinates of the element with the given canonical coordinates.
    pub fn lift(&self, coords: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(
            coords.len(),
            self.slots.len(),
            "canonical coordinate count mismatch"
        );
        self.gens.apply_row(coords)
    }

    /// Generator coordinates of the `k`-th canonical generator.
    pub fn canonical_generator(&self, k: usize) -> Vec<BigInt> {
        let mut c = vec![BigInt::zero(); self.slots.len()];
        c[k] = BigInt::one();
        self.lift(&c)
    }

    /// Order of an element; `None` when it has infinite order.
    pub fn element_order(&self, x: &[BigInt]) -> Result<Option<BigInt>, AbelianError> {
        let nf = self.normal_form(x)?;
        let mut ord = BigInt::one();
        for (c, d) in nf.iter().zip(self.moduli()) {
            if c.is_zero() {
                continue;
            }
            if d.is_zero() {
                return Ok(None);
            }
            ord = ord.lcm(&(&d / c.gcd(&d)));
        }
        Ok(Some(ord))
    }

    /// A basis of the relation lattice: `d_i` times row `i` of `V⁻¹` for every
    /// nonzero invariant `d_i`. Usually far shorter than [`FPGroup::relations`].
    pub fn relation_basis(&self) -> IntMatrix {
        let rows = (0..self.diag.len())
            .filter(|&i| !self.diag[i].is_zero())
            .map(|i| {
                self.v_inv
                    .sparse_row(i)
                    .into_iter()
                    .map(|(j, x)| (j, x * &self.diag[i]))
                    .collect()
            })
            .collect();
        IntMatrix::from_sparse_rows(self.labels.len(), rows)
    }

    /// Quotient by additional relations, on the same generators. The result
    /// is presented by [`FPGroup::relation_basis`] followed by `extra`.
    pub fn quotient(&self, extra: &[Vec<BigInt>]) -> Result<FPGroup, AbelianError> {
        for r in extra {
            self.check_len(r)?;
        }
        let rel = self
            .relation_basis()
            .vstack(&IntMatrix::from_rows(self.labels.len(), extra.to_vec()));
        FPGroup::new(self.labels.clone(), rel)
    }

    /// `G ⊗ Z[1/2]`: every invariant factor replaced by its odd part.
    pub fn localize_away_2(&self) -> FPGroup {
        let factors = self.invariant_factors();
        let odd: Vec<BigInt> = factors
            .iter()
            .map(|d| {
                if d.is_zero() {
                    d.clone()
                } else {
                    odd_part_big(d)
                }
            })
            .collect();
        let labels = (0..odd.len()).map(|k| format!("e{k}")).collect();
        FPGroup::diagonal(labels, &odd).expect("diagonal presentation is well formed")
    }

    /// Enumerates all elements in canonical coordinates (finite groups only).
    pub fn enumerate(&self, limit: usize) -> Option<Vec<Vec<BigInt>>> {
        let order = self.order()?;
        if order > BigInt::from(limit) {
            return None;
        }
        let mut out = vec![Vec::new()];
        for d in self.moduli() {
            let d: usize = d.try_into().ok()?;
            out = out
                .into_iter()
                .flat_map(|p| {
                    (0..d).map(move |c| {
                        let mut q = p.clone();
                        q.push(BigInt::from(c));
                        q
                    })
                })
                .collect();
        }
        Some(out)
    }

    pub fn to_record(&self) -> GroupRecord {
        GroupRecord {
            labels: self.labels.clone(),
            relations: self.relations.to_record(),
            invariant_factors: self.invariant_factors(),
            snf: Some(SnfRecord {
                diagonal: self.diag.clone(),
                v: self.v.to_record(),
                v_inv: self.v_inv.to_record(),
            }),
        }
    }

    /// Rebuilds a group from its record. Stored Smith data is reused when it
    /// passes a consistency check; otherwise the presentation is recomputed.
    pub fn from_record(rec: &GroupRecord) -> Result<FPGroup, AbelianError> {
        let relations = IntMatrix::from_record(&rec.relations)
            .ok_or(AbelianError::MalformedRecord("relation matrix shape"))?;
        let n = rec.labels.len();
        if let Some(s) = &rec.snf {
            if let (Some(v), Some(v_inv)) = (
                IntMatrix::from_record(&s.v),
                IntMatrix::from_record(&s.v_inv),
            ) {
                if s.diagonal.len() == n
                    && v.rows() == n
                    && v.cols() == n
                    && v.mul(&v_inv) == IntMatrix::identity(n)
                    && relations.cols() == n
                {
                    let lattice =
                        Echelon::from_sparse_rows(n, relations.sparse_rows(), Exec::default())
                            .into_hermite();
                    let g = Self::assemble(
                        rec.labels.clone(),
                        relations.clone(),
                        s.diagonal.clone(),
                        v,
                        v_inv,
                        &lattice,
                    );
                    let rels_ok = (0..relations.rows()).all(|i| {
                        g.normal_form_unchecked(&relations.row(i))
                            .iter()
                            .all(|c| c.is_zero())
                    });
                    let gens_ok = (0..n).all(|i| {
                        let d = &g.diag[i];
                        let mut e = vec![BigInt::zero(); n];
                        e[i] = d.clone();
                        d.is_zero() || lattice.contains(&g.v_inv.apply_row(&e))
                    });
                    if rels_ok && gens_ok && g.invariant_factors() == rec.invariant_factors {
                        return Ok(g);
                    }
                }
            }
        }
        let g = FPGroup::new(rec.labels.clone(), relations)?;
        if g.invariant_factors() != rec.invariant_factors {
            return Err(AbelianError::MalformedRecord(
                "invariant factors disagree with relations",
            ));
        }
        Ok(g)
    }
}

/// Stable serialized form of a presented group.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroupRecord {
    pub labels: Vec<String>,
    pub relations: MatrixRecord,
    pub invariant_factors: Vec<BigInt>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub snf: Option<SnfRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SnfRecord {
    pub diagonal: Vec<BigInt>,
    pub v: MatrixRecord,
    pub v_inv: MatrixRecord,
}

pub fn odd_part_big(n: &BigInt) -> BigInt {
    let mut n = n.abs();
    if n.is_zero() {
        return n;
    }
    while n.is_even() {
        n >>= 1;
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("g{i}")).collect()
    }

    #[test]
    fn cyclic_of_order_six() {
        let g = FPGroup::new(
            labels(2),
            IntMatrix::from_i64_rows(2, &[vec![2, 0], vec![0, 3]]),
        )
        .unwrap();
        assert_eq!(g.invariant_factors(), b(&[6]));
        assert_eq!(g.order(), Some(BigInt::from(6)));
        assert!(g.is_zero(&b(&[2, 0])).unwrap());
        assert!(!g.is_zero(&b(&[1, 0])).unwrap());
        assert!(g.is_zero(&b(&[0, 0])).unwrap());
        assert_eq!(g.element_order(&b(&[1, 1])).unwrap(), Some(BigInt::from(6)));
    }

    #[test]
    fn free_and_trivial() {
        let z = FPGroup::new(labels(1), IntMatrix::zeros(0, 1)).unwrap();
        assert_eq!(
            z.structure(),
            Structure {
                free_rank: 1,
                torsion: vec![]
            }
        );
        assert_eq!(z.order(), None);
        let t = FPGroup::new(labels(1), IntMatrix::from_i64_rows(1, &[vec![1]])).unwrap();
        assert!(t.is_trivial());
        assert_eq!(t.order(), Some(BigInt::one()));
    }

    #[test]
    fn width_mismatch_is_rejected() {
        let err =
            FPGroup::new(labels(2), IntMatrix::from_i64_rows(3, &[vec![1, 0, 0]])).unwrap_err();
        assert!(matches!(err, AbelianError::WidthMismatch { .. }));
        let g = FPGroup::free(labels(2));
        assert!(matches!(
            g.normal_form(&b(&[1])),
            Err(AbelianError::LengthMismatch { .. })
        ));
    }

    #[test]
    fn localization() {
        let z6 = FPGroup::diagonal(labels(1), &b(&[6])).unwrap();
        assert_eq!(z6.localize_away_2().invariant_factors(), b(&[3]));
        let z8 = FPGroup::diagonal(labels(1), &b(&[8])).unwrap();
        assert!(z8.localize_away_2().is_trivial());
        let mixed = FPGroup::diagonal(labels(2), &b(&[0, 12])).unwrap();
        assert_eq!(
            mixed.localize_away_2().structure(),
            Structure {
                free_rank: 1,
                torsion: b(&[3])
            }
        );
    }

    #[test]
    fn lift_inverts_normal_form() {
        let g = FPGroup::new(
            labels(3),
            IntMatrix::from_i64_rows(3, &[vec![2, 4, 0], vec![0, 6, 3], vec![1, 1, 1]]),
        )
        .unwrap();
        for x in [b(&[1, 0, 0]), b(&[0, 5, 7]), b(&[-3, 2, 11])] {
            let nf = g.normal_form(&x).unwrap();
            assert_eq!(g.normal_form(&g.lift(&nf)).unwrap(), nf);
        }
    }

    #[test]
    fn record_round_trip_and_tamper() {
        let g = FPGroup::new(
            labels(2),
            IntMatrix::from_i64_rows(2, &[vec![4, 2], vec![2, 4]]),
        )
        .unwrap();
        let rec = g.to_record();
        let h = FPGroup::from_record(&rec).unwrap();
        assert_eq!(h.invariant_factors(), g.invariant_factors());
        let mut bad = rec.clone();
        bad.invariant_factors = b(&[5]);
        assert!(FPGroup::from_record(&bad).is_err());
    }
}
