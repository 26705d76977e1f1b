//! Square-class group rings `Z[V]`, their ideals, and Grothendieck-Witt rings
//! of finite fields presented as `Z[V]/J` with `J` spanned by Steinberg
//! elements `⟨⟨a⟩⟩⟨⟨1-a⟩⟩`.

use std::collections::BTreeSet;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{Echelon, FPGroup, IntMatrix, Structure};
use crate::exec::Exec;
use crate::fields::{FieldError, FiniteField, Fq};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GwError {
    #[error("identity checks need a field-backed ring")]
    NotCheckable,
    #[error("square class group rank mismatch: {left} vs {right}")]
    RankMismatch { left: usize, right: usize },
    #[error(transparent)]
    Field(#[from] FieldError),
}

/// An elementary abelian 2-group `V`, elements encoded as bitmasks.
///
/// Field-backed instances model `k^×/(k^×)^2` for a finite field of odd
/// order (rank one, the nonzero element is the nonsquare class `n`);
/// abstract instances only carry a rank.
#[derive(Clone, Debug)]
pub struct SquareClassGroup {
    rank: usize,
    field: Option<Arc<FiniteField>>,
}

impl PartialEq for SquareClassGroup {
    fn eq(&self, other: &Self) -> bool {
        self.rank == other.rank
    }
}

impl SquareClassGroup {
    pub fn abstract_group(rank: usize) -> Self {
        assert!(rank < 16, "square class rank too large to materialize");
        SquareClassGroup { rank, field: None }
    }

    pub fn of_field(k: Arc<FiniteField>) -> Self {
        SquareClassGroup {
            rank: 1,
            field: Some(k),
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> usize {
        1 << self.rank
    }

    pub fn field(&self) -> Option<&Arc<FiniteField>> {
        self.field.as_ref()
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.order()
    }

    /// Class of a nonzero field element.
    pub fn classify(&self, a: Fq) -> Result<usize, GwError> {
        let k = self.field.as_ref().ok_or(GwError::NotCheckable)?;
        Ok(if k.is_square(a)? { 0 } else { 1 })
    }

    pub fn label(&self, v: usize) -> String {
        if v == 0 {
            return "1".into();
        }
        if self.field.is_some() {
            return "n".into();
        }
        (0..self.rank)
            .filter(|i| v >> i & 1 == 1)
            .map(|i| format!("v{i}"))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// Element of `Z[V]`: coefficient of the group element with bitmask `v` at index `v`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GroupRingElement {
    coeffs: Vec<BigInt>,
}

impl GroupRingElement {
    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }
}

/// Exact arithmetic in `Z[V]`.
#[derive(Clone, Debug)]
pub struct GroupRing {
    v: SquareClassGroup,
}

impl GroupRing {
    pub fn new(v: SquareClassGroup) -> Self {
        GroupRing { v }
    }

    pub fn classes(&self) -> &SquareClassGroup {
        &self.v
    }

    pub fn dim(&self) -> usize {
        self.v.order()
    }

    pub fn zero(&self) -> GroupRingElement {
        GroupRingElement {
            coeffs: vec![BigInt::zero(); self.dim()],
        }
    }

    pub fn from_coeffs(&self, coeffs: Vec<BigInt>) -> GroupRingElement {
        assert_eq!(coeffs.len(), self.dim(), "coefficient vector length");
        GroupRingElement { coeffs }
    }

    pub fn scalar(&self, n: impl Into<BigInt>) -> GroupRingElement {
        let mut x = self.zero();
        x.coeffs[0] = n.into();
        x
    }

    pub fn one(&self) -> GroupRingElement {
        self.scalar(1)
    }

    /// `⟨v⟩`
    pub fn basis(&self, v: usize) -> GroupRingElement {
        let mut x = self.zero();
        x.coeffs[v] = BigInt::one();
        x
    }

    /// `⟨⟨v⟩⟩ = ⟨v⟩ - 1`
    pub fn pfister(&self, v: usize) -> GroupRingElement {
        self.sub(&self.basis(v), &self.one())
    }

    /// Steinberg element `⟨⟨a⟩⟩⟨⟨1-a⟩⟩` for `a ∉ {0, 1}`.
    pub fn steinberg(&self, a: Fq) -> Result<GroupRingElement, GwError> {
        let k = self.v.field().ok_or(GwError::NotCheckable)?;
        let b = k.sub(k.one(), a);
        Ok(self.mul(
            &self.pfister(self.v.classify(a)?),
            &self.pfister(self.v.classify(b)?),
        ))
    }

    pub fn add(&self, x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
        GroupRingElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
        GroupRingElement {
            coeffs: x.coeffs.iter().zip(&y.coeffs).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn scale(&self, x: &GroupRingElement, n: &BigInt) -> GroupRingElement {
        GroupRingElement {
            coeffs: x.coeffs.iter().map(|a| a * n).collect(),
        }
    }

    pub fn mul(&self, x: &GroupRingElement, y: &GroupRingElement) -> GroupRingElement {
        let mut out = self.zero();
        for (v, a) in x.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (w, b) in y.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out.coeffs[v ^ w] += a * b;
                }
            }
        }
        out
    }

    /// `⟨v⟩·x`, a permutation of coefficients.
    pub fn translate(&self, v: usize, x: &GroupRingElement) -> GroupRingElement {
        GroupRingElement {
            coeffs: (0..self.dim()).map(|w| x.coeffs[w ^ v].clone()).collect(),
        }
    }

    /// Augmentation `Σ n_v ⟨v⟩ ↦ Σ n_v`.
    pub fn augment(&self, x: &GroupRingElement) -> BigInt {
        x.coeffs.iter().sum()
    }

    pub fn format(&self, x: &GroupRingElement) -> String {
        let terms: Vec<String> = x
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(v, c)| format!("{c}<{}>", self.v.label(v)))
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join(" + ")
        }
    }
}

/// A two-sided ideal of `Z[V]` as a lattice: the additive span of all
/// `⟨v⟩·g` for generators `g`, stored in Hermite normal form.
#[derive(Clone, Debug)]
pub struct IdealLattice {
    dim: usize,
    generators: Vec<GroupRingElement>,
    hnf: Echelon,
}

impl IdealLattice {
    pub fn new(ring: &GroupRing, generators: Vec<GroupRingElement>) -> Self {
        // Duplicates span nothing new; drop them before closing up.
        let mut seen = BTreeSet::new();
        let generators: Vec<GroupRingElement> = generators
            .into_iter()
            .filter(|g| seen.insert(g.coeffs.clone()))
            .collect();
        let spanning: Vec<Vec<BigInt>> = generators
            .iter()
            .flat_map(|g| {
                ring.classes()
                    .elements()
                    .map(move |v| ring.translate(v, g).coeffs)
            })
            .collect();
        let hnf = Echelon::from_rows(ring.dim(), &spanning, Exec::Sequential).into_hermite();
        IdealLattice {
            dim: ring.dim(),
            generators,
            hnf,
        }
    }

    /// Augmentation ideal `I`, generated by the Pfister elements.
    pub fn augmentation(ring: &GroupRing) -> Self {
        Self::new(
            ring,
            ring.classes()
                .elements()
                .skip(1)
                .map(|v| ring.pfister(v))
                .collect(),
        )
    }

    /// `I^m`, generated by `m`-fold products of Pfister elements.
    pub fn augmentation_power(ring: &GroupRing, m: u32) -> Self {
        let pf: Vec<GroupRingElement> = ring
            .classes()
            .elements()
            .skip(1)
            .map(|v| ring.pfister(v))
            .collect();
        let mut gens = vec![ring.one()];
        for _ in 0..m {
            gens = gens
                .iter()
                .flat_map(|g| pf.iter().map(move |p| ring.mul(g, p)))
                .collect();
        }
        Self::new(ring, gens)
    }

    /// Product ideal `self·other`.
    pub fn product(&self, ring: &GroupRing, other: &IdealLattice) -> Self {
        let gens = self
            .generators
            .iter()
            .flat_map(|a| other.generators.iter().map(move |b| ring.mul(a, b)))
            .collect();
        Self::new(ring, gens)
    }

    pub fn basis(&self) -> Vec<GroupRingElement> {
        self.hnf
            .basis()
            .iter()
            .map(|r| GroupRingElement { coeffs: r.clone() })
            .collect()
    }

    pub fn generators(&self) -> &[GroupRingElement] {
        &self.generators
    }

    pub fn rank(&self) -> usize {
        self.hnf.rank()
    }

    pub fn contains(&self, x: &GroupRingElement) -> bool {
        self.hnf.contains(&x.coeffs)
    }

    pub fn contains_lattice(&self, other: &IdealLattice) -> bool {
        self.hnf.contains_lattice(&other.hnf)
    }

    /// `[self : sub]` when both have the same rank.
    pub fn index_of(&self, sub: &IdealLattice) -> Option<BigInt> {
        sub.hnf.index_in(&self.hnf)
    }

    /// Coordinates of a lattice member in the HNF basis.
    pub fn coordinates(&self, x: &GroupRingElement) -> Option<Vec<BigInt>> {
        self.hnf.coordinates(&x.coeffs)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn echelon(&self) -> &Echelon {
        &self.hnf
    }
}

/// `J_k`: the ideal spanned by `⟨b⟩⟨⟨a⟩⟩⟨⟨1-a⟩⟩`, `a ∈ k^× \ {1}`. Steinberg
/// elements are deduplicated by the square classes of `a` and `1-a`.
pub fn steinberg_ideal(ring: &GroupRing) -> Result<IdealLattice, GwError> {
    let k = ring.classes().field().ok_or(GwError::NotCheckable)?.clone();
    let mut pairs = BTreeSet::new();
    for a in k.units().filter(|&a| a != k.one()) {
        let b = k.sub(k.one(), a);
        pairs.insert((ring.classes().classify(a)?, ring.classes().classify(b)?));
    }
    let gens = pairs
        .into_iter()
        .map(|(x, y)| ring.mul(&ring.pfister(x), &ring.pfister(y)))
        .collect();
    Ok(IdealLattice::new(ring, gens))
}

/// `GW = Z[V]/J` with its induced multiplication and rank map.
#[derive(Clone, Debug)]
pub struct GWRing {
    ring: GroupRing,
    ideal: IdealLattice,
    group: Arc<FPGroup>,
}

impl GWRing {
    pub fn from_ideal(ring: GroupRing, ideal: IdealLattice) -> Self {
        let labels = ring
            .classes()
            .elements()
            .map(|v| format!("<{}>", ring.classes().label(v)))
            .collect();
        let rels = IntMatrix::from_rows(ring.dim(), ideal.echelon().basis().to_vec());
        let group = Arc::new(FPGroup::new(labels, rels).expect("widths agree"));
        GWRing { ring, ideal, group }
    }

    pub fn ring(&self) -> &GroupRing {
        &self.ring
    }

    pub fn ideal(&self) -> &IdealLattice {
        &self.ideal
    }

    pub fn group(&self) -> &Arc<FPGroup> {
        &self.group
    }

    pub fn structure(&self) -> Structure {
        self.group.structure()
    }

    pub fn is_field_backed(&self) -> bool {
        self.ring.classes().field().is_some()
    }

    pub fn equal(&self, x: &GroupRingElement, y: &GroupRingElement) -> bool {
        self.is_zero(&self.ring.sub(x, y))
    }

    pub fn is_zero(&self, x: &GroupRingElement) -> bool {
        self.group.is_zero(&x.coeffs).expect("length matches")
    }

    pub fn normal_form(&self, x: &GroupRingElement) -> Vec<BigInt> {
        self.group.normal_form(&x.coeffs).expect("length matches")
    }

    /// Rank (dimension) map `GW → Z`.
    pub fn dim(&self, x: &GroupRingElement) -> BigInt {
        self.ring.augment(x)
    }

    /// `table[v][w]` is the generator index of `⟨v⟩⟨w⟩`.
    pub fn multiplication_table(&self) -> Vec<Vec<usize>> {
        let n = self.ring.dim();
        (0..n).map(|v| (0..n).map(|w| v ^ w).collect()).collect()
    }

    pub fn report(&self) -> GwReport {
        let v = self.ring.classes();
        GwReport {
            invariant_factors: self.group.invariant_factors(),
            structure: self.structure().to_string(),
            generators: self.group.labels().to_vec(),
            multiplication: self
                .multiplication_table()
                .into_iter()
                .map(|row| {
                    row.into_iter()
                        .map(|w| format!("<{}>", v.label(w)))
                        .collect()
                })
                .collect(),
            consistency: gw_consistency(self).ok(),
        }
    }
}

/// `GW(F_q)`.
pub fn gw_ring(k: Arc<FiniteField>) -> Result<GWRing, GwError> {
    let ring = GroupRing::new(SquareClassGroup::of_field(k));
    let j = steinberg_ideal(&ring)?;
    Ok(GWRing::from_ideal(ring, j))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub name: &'static str,
    pub checked: usize,
    pub passed: bool,
    /// First failing instance, if any.
    pub witness: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConsistencyReport {
    pub checks: Vec<IdentityCheck>,
}

impl ConsistencyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GwReport {
    pub invariant_factors: Vec<BigInt>,
    pub structure: String,
    pub generators: Vec<String>,
    pub multiplication: Vec<Vec<String>>,
    pub consistency: Option<ConsistencyReport>,
}

/// Exhaustively checks, in `GW(k)`:
/// 1. `⟨a⟩ + ⟨b⟩ = ⟨a+b⟩ + ⟨ab(a+b)⟩` when `a + b ≠ 0`,
/// 2. `⟨ab⟩ = ⟨a⟩⟨b⟩`,
/// 3. `⟨⟨a⟩⟩⟨⟨1-a⟩⟩ = 0` for `a ≠ 1`,
/// 4. `⟨⟨a⟩⟩(1 + ⟨-1⟩) = 0`.
pub fn gw_consistency(gw: &GWRing) -> Result<ConsistencyReport, GwError> {
    let classes = gw.ring.classes();
    let k = classes.field().ok_or(GwError::NotCheckable)?.clone();
    let r = &gw.ring;
    let cls = |a: Fq| classes.classify(a).expect("nonzero");
    let sq = |a: Fq| r.basis(cls(a));
    let fmt = |a: Fq| k.format(a);
    let units: Vec<Fq> = k.units().collect();

    let mut checks = Vec::new();
    let mut run = |name: &'static str, cases: Vec<(String, GroupRingElement)>| {
        let checked = cases.len();
        let witness = cases
            .into_iter()
            .find(|(_, diff)| !gw.is_zero(diff))
            .map(|(w, _)| w);
        checks.push(IdentityCheck {
            name,
            checked,
            passed: witness.is_none(),
            witness,
        });
    };

    let mut witt = Vec::new();
    let mut mult = Vec::new();
    for &a in &units {
        for &b in &units {
            let s = k.add(a, b);
            if !s.is_zero() {
                let lhs = r.add(&sq(a), &sq(b));
                let rhs = r.add(&sq(s), &sq(k.mul(k.mul(a, b), s)));
                witt.push((format!("a={}, b={}", fmt(a), fmt(b)), r.sub(&lhs, &rhs)));
            }
            mult.push((
                format!("a={}, b={}", fmt(a), fmt(b)),
                r.sub(&sq(k.mul(a, b)), &r.mul(&sq(a), &sq(b))),
            ));
        }
    }
    run("witt", witt);
    run("multiplicative", mult);

    let steinberg = units
        .iter()
        .filter(|&&a| a != k.one())
        .map(|&a| {
            (
                format!("a={}", fmt(a)),
                r.steinberg(a).expect("field-backed"),
            )
        })
        .collect();
    run("steinberg", steinberg);

    let h = r.add(&r.one(), &sq(k.from_int(-1)));
    let hyperbolic = units
        .iter()
        .map(|&a| (format!("a={}", fmt(a)), r.mul(&r.pfister(cls(a)), &h)))
        .collect();
    run("pfister_times_hyperbolic", hyperbolic);

    Ok(ConsistencyReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn field(q: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::of_order(q).unwrap())
    }

    #[test]
    fn pfister_identities() {
        let r = GroupRing::new(SquareClassGroup::abstract_group(1));
        assert!(r.pfister(0).is_zero());
        let pf = r.pfister(1);
        assert_eq!(r.mul(&pf, &pf), r.scale(&pf, &BigInt::from(-2)));
        for a in 0..2 {
            for b in 0..2 {
                assert_eq!(r.augment(&r.mul(&r.basis(a), &r.basis(b))), BigInt::one());
            }
        }
        assert!(r.augment(&pf).is_zero());
    }

    #[test]
    fn i_squared_has_index_two() {
        let r = GroupRing::new(SquareClassGroup::abstract_group(1));
        let i = IdealLattice::augmentation(&r);
        let i2 = IdealLattice::augmentation_power(&r, 2);
        assert!(i.contains_lattice(&i2));
        assert_eq!(i.index_of(&i2), Some(BigInt::from(2)));
        assert_eq!(IdealLattice::new(&r, vec![]).rank(), 0);
    }

    #[test]
    fn steinberg_ideal_of_f5_is_2i() {
        let r = GroupRing::new(SquareClassGroup::of_field(field(5)));
        let j = steinberg_ideal(&r).unwrap();
        let two_i = IdealLattice::new(&r, vec![r.scale(&r.pfister(1), &BigInt::from(2))]);
        assert!(j.contains_lattice(&two_i) && two_i.contains_lattice(&j));
    }

    #[test]
    fn gw_of_small_fields() {
        for q in [5, 7, 9, 13] {
            let gw = gw_ring(field(q)).unwrap();
            assert_eq!(
                gw.structure(),
                Structure {
                    free_rank: 1,
                    torsion: vec![BigInt::from(2)]
                },
                "q = {q}"
            );
            let report = gw_consistency(&gw).unwrap();
            assert!(report.all_passed(), "q = {q}: {report:?}");
            for v in 0..2 {
                assert_eq!(gw.dim(&gw.ring().basis(v)), BigInt::one());
            }
        }
    }

    #[test]
    fn abstract_ring_is_not_checkable() {
        let r = GroupRing::new(SquareClassGroup::abstract_group(2));
        let gw = GWRing::from_ideal(r.clone(), IdealLattice::augmentation_power(&r, 2));
        assert_eq!(gw_consistency(&gw).unwrap_err(), GwError::NotCheckable);
    }
}
