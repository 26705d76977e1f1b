//! Pre-Bloch groups `P(F_q)`, refined pre-Bloch groups `RP(F_q)`, their
//! quotients by the `ψ` and `ψ₁` elements, `S₂`, the map `Λ`, and the refined
//! Bloch group `B(F_q) = ker Λ`.

mod formal;
mod lambda;

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::abelian::{AbelianError, FPGroup, FPHom, IntMatrix};
use crate::exec::Exec;
use crate::fields::{FieldError, FiniteField, Fq};
use crate::gw::GwError;

pub use formal::{ElementField, FormalBlochElement, FormalTerm};
pub use lambda::{
    lambda_map, refined_bloch, sym_square_and_k2, LambdaMap, RefinedBloch, SymSquare, SymSquareK2,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BlochError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Abelian(#[from] AbelianError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error("map is not well-defined on relation {relation}")]
    IllDefined { relation: String },
    #[error("presentation does not match the generated relations for {0}")]
    Mismatch(String),
}

/// The five terms `(sign, coefficient word, argument)` of the refined
/// five-term relation for `x, y ≠ 1`:
/// `[x] - [y] + ⟨x⟩[y/x] - ⟨x⁻¹-1⟩[(1-x⁻¹)/(1-y⁻¹)] + ⟨1-x⟩[(1-x)/(1-y)]`.
/// Dropping the coefficient words gives the plain five-term relation.
pub fn five_term(k: &FiniteField, x: Fq, y: Fq) -> [(i64, Fq, Fq); 5] {
    let one = k.one();
    let xi = k.inv(x).expect("x is a unit");
    let yi = k.inv(y).expect("y is a unit");
    let omx = k.sub(one, x);
    let omy = k.sub(one, y);
    let omxi = k.sub(one, xi);
    let omyi = k.sub(one, yi);
    [
        (1, one, x),
        (-1, one, y),
        (1, x, k.div(y, x).expect("unit")),
        (-1, k.sub(xi, one), k.div(omxi, omyi).expect("y ≠ 1")),
        (1, omx, k.div(omx, omy).expect("y ≠ 1")),
    ]
}

/// Common interface of `P(F_q)` and `RP(F_q)`.
pub trait BlochPresentation {
    fn field(&self) -> &Arc<FiniteField>;
    fn group(&self) -> &Arc<FPGroup>;
    /// 1 for `P`, 2 for `RP` (the classes `1` and `n`).
    fn class_count(&self) -> usize;

    /// Index of the generator `⟨v⟩[a]` (the class is ignored for `P`).
    fn generator(&self, class: usize, a: Fq) -> usize {
        let q = self.field().order() as usize;
        (class % self.class_count()) * (q - 1) + a.index() as usize - 1
    }

    fn symbol(&self, class: usize, a: Fq) -> Vec<BigInt> {
        let mut v = vec![BigInt::zero(); self.group().generator_count()];
        v[self.generator(class, a)] = BigInt::one();
        v
    }

    fn class_of(&self, g: Fq) -> Result<usize, BlochError> {
        Ok(if self.class_count() == 1 || self.field().is_square(g)? {
            0
        } else {
            1
        })
    }

    /// Generator coordinates of a formal element.
    fn eval(&self, xi: &FormalBlochElement<Fq>) -> Result<Vec<BigInt>, BlochError> {
        let mut v = vec![BigInt::zero(); self.group().generator_count()];
        for t in xi.terms() {
            if t.arg.is_zero() {
                return Err(FieldError::ZeroDomain("Bloch symbol").into());
            }
            let idx = self.generator(self.class_of(t.class)?, t.arg);
            v[idx] += &t.coeff;
        }
        Ok(v)
    }

    /// Relations added to form `P̃` (the `ψ(x)`) or `R̃P` (all translates of `ψ₁(x)`).
    fn tilde_relations(&self) -> Vec<Vec<BigInt>>;
}

/// Sorted sparse row with the given terms summed.
fn sparse_row(terms: impl IntoIterator<Item = (usize, i64)>) -> Vec<(usize, BigInt)> {
    let mut acc = std::collections::BTreeMap::new();
    for (i, c) in terms {
        *acc.entry(i).or_insert(0i64) += c;
    }
    acc.into_iter()
        .filter(|&(_, c)| c != 0)
        .map(|(i, c)| (i, BigInt::from(c)))
        .collect()
}

fn unit_labels(k: &FiniteField, classes: &[&str]) -> Vec<String> {
    classes
        .iter()
        .flat_map(|c| {
            k.units().map(move |a| {
                if c.is_empty() {
                    format!("[{}]", k.format(a))
                } else {
                    format!("<{c}>[{}]", k.format(a))
                }
            })
        })
        .collect()
}

/// `P(F_q)`: generators `[a]`, `a ∈ F_q^×`, relations `[1] = 0` and the
/// five-term relation for all `x, y ≠ 1` (including `x = y`).
#[derive(Clone, Debug)]
pub struct PreBloch {
    field: Arc<FiniteField>,
    group: Arc<FPGroup>,
    relation_labels: Vec<String>,
}

impl PreBloch {
    pub fn new(field: Arc<FiniteField>) -> Self {
        Self::with_exec(field, Exec::default())
    }

    pub fn with_exec(field: Arc<FiniteField>, exec: Exec) -> Self {
        let (labels, rel, relation_labels) = Self::presentation(&field, exec);
        let group = Arc::new(FPGroup::with_exec(labels, rel, exec).expect("widths agree"));
        PreBloch {
            field,
            group,
            relation_labels,
        }
    }

    /// Generator labels, relation matrix and relation labels.
    pub fn presentation(k: &FiniteField, exec: Exec) -> (Vec<String>, IntMatrix, Vec<String>) {
        let n = (k.order() - 1) as usize;
        let xs: Vec<Fq> = k.units().filter(|&x| x != k.one()).collect();
        let blocks: Vec<Vec<(String, Vec<(usize, BigInt)>)>> = exec.map(&xs, |&x| {
            xs.iter()
                .map(|&y| {
                    let row = sparse_row(
                        five_term(k, x, y)
                            .into_iter()
                            .map(|(s, _, arg)| (arg.index() as usize - 1, s)),
                    );
                    (format!("5T(x={}, y={})", k.format(x), k.format(y)), row)
                })
                .collect()
        });
        let mut labels = vec!["[1]".to_string()];
        let mut rows = vec![vec![(0, BigInt::one())]];
        for (l, r) in blocks.into_iter().flatten() {
            labels.push(l);
            rows.push(r);
        }
        (
            unit_labels(k, &[""]),
            IntMatrix::from_sparse_rows(n, rows),
            labels,
        )
    }

    /// Reuses a previously computed group after checking that it presents
    /// exactly the relations generated for `field`.
    pub fn from_group(field: Arc<FiniteField>, group: FPGroup) -> Result<Self, BlochError> {
        let (labels, rel, relation_labels) = Self::presentation(&field, Exec::default());
        if group.labels() != labels.as_slice() || *group.relations() != rel {
            return Err(BlochError::Mismatch(format!("P(F_{})", field.order())));
        }
        Ok(PreBloch {
            field,
            group: Arc::new(group),
            relation_labels,
        })
    }

    pub fn relation_labels(&self) -> &[String] {
        &self.relation_labels
    }

    /// `C = [x] + [1-x]` for the least `x ∉ {0, 1}`.
    pub fn constant_c(&self) -> Vec<BigInt> {
        special_element(self, Special::C).expect("q >= 5")
    }
}

impl BlochPresentation for PreBloch {
    fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    fn group(&self) -> &Arc<FPGroup> {
        &self.group
    }

    fn class_count(&self) -> usize {
        1
    }

    fn tilde_relations(&self) -> Vec<Vec<BigInt>> {
        self.field
            .units()
            .map(|x| special_element(self, Special::Psi(x)).expect("unit"))
            .collect()
    }
}

/// `RP(F_q)` as an abelian group on generators `⟨v⟩[a]`, `v ∈ {1, n}`, with
/// every `V`-translate of `[1] = 0` and of the refined five-term relation.
#[derive(Clone, Debug)]
pub struct RefinedPreBloch {
    field: Arc<FiniteField>,
    group: Arc<FPGroup>,
    relation_labels: Vec<String>,
    actions: Vec<FPHom>,
}

impl RefinedPreBloch {
    pub fn new(field: Arc<FiniteField>) -> Result<Self, BlochError> {
        Self::with_exec(field, Exec::default())
    }

    pub fn with_exec(field: Arc<FiniteField>, exec: Exec) -> Result<Self, BlochError> {
        let (labels, rel, relation_labels) = Self::presentation(&field, exec);
        let group = Arc::new(FPGroup::with_exec(labels, rel, exec)?);
        Self::assemble(field, group, relation_labels)
    }

    fn assemble(
        field: Arc<FiniteField>,
        group: Arc<FPGroup>,
        relation_labels: Vec<String>,
    ) -> Result<Self, BlochError> {
        let n = (field.order() - 1) as usize;
        let actions = (0..2)
            .map(|v| {
                let mut m = IntMatrix::zeros(2 * n, 2 * n);
                for w in 0..2 {
                    for i in 0..n {
                        m.set(w * n + i, (w ^ v) * n + i, BigInt::one());
                    }
                }
                FPHom::new(group.clone(), group.clone(), m)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(RefinedPreBloch {
            field,
            group,
            relation_labels,
            actions,
        })
    }

    pub fn presentation(k: &FiniteField, exec: Exec) -> (Vec<String>, IntMatrix, Vec<String>) {
        let n = (k.order() - 1) as usize;
        let class = |g: Fq| usize::from(!k.is_square(g).expect("unit"));
        let xs: Vec<Fq> = k.units().filter(|&x| x != k.one()).collect();
        let tag = |w: usize| {
            if w == 0 {
                String::new()
            } else {
                "<n>".to_string()
            }
        };
        let mut labels = Vec::new();
        let mut rows = Vec::new();
        for w in 0..2 {
            labels.push(format!("{}[1]", tag(w)));
            rows.push(vec![(w * n, BigInt::one())]);
            let blocks: Vec<Vec<(String, Vec<(usize, BigInt)>)>> = exec.map(&xs, |&x| {
                xs.iter()
                    .map(|&y| {
                        let terms = five_term(k, x, y)
                            .into_iter()
                            .map(|(s, g, arg)| ((class(g) ^ w) * n + arg.index() as usize - 1, s));
                        let row = sparse_row(terms);
                        (
                            format!("{}R5T(x={}, y={})", tag(w), k.format(x), k.format(y)),
                            row,
                        )
                    })
                    .collect()
            });
            for (l, r) in blocks.into_iter().flatten() {
                labels.push(l);
                rows.push(r);
            }
        }
        (
            unit_labels(k, &["", "n"])
                .into_iter()
                .map(|s| s.replacen("<>", "", 1))
                .collect(),
            IntMatrix::from_sparse_rows(2 * n, rows),
            labels,
        )
    }

    pub fn from_group(field: Arc<FiniteField>, group: FPGroup) -> Result<Self, BlochError> {
        let (labels, rel, relation_labels) = Self::presentation(&field, Exec::default());
        if group.labels() != labels.as_slice() || *group.relations() != rel {
            return Err(BlochError::Mismatch(format!("RP(F_{})", field.order())));
        }
        Self::assemble(field, Arc::new(group), relation_labels)
    }

    pub fn relation_labels(&self) -> &[String] {
        &self.relation_labels
    }

    /// Action of the class `v` as an endomorphism of the presented group.
    pub fn action(&self, v: usize) -> &FPHom {
        &self.actions[v]
    }

    /// `RP_{V} = RP / (⟨v⟩x - x)`; isomorphic to `P(F_q)`.
    pub fn coinvariants(&self) -> Result<FPGroup, BlochError> {
        let n = (self.field.order() - 1) as usize;
        let rows: Vec<Vec<BigInt>> = (0..n)
            .map(|i| {
                let mut r = vec![BigInt::zero(); 2 * n];
                r[n + i] = BigInt::one();
                r[i] = BigInt::from(-1);
                r
            })
            .collect();
        Ok(self.group.quotient(&rows)?)
    }
}

impl BlochPresentation for RefinedPreBloch {
    fn field(&self) -> &Arc<FiniteField> {
        &self.field
    }

    fn group(&self) -> &Arc<FPGroup> {
        &self.group
    }

    fn class_count(&self) -> usize {
        2
    }

    fn tilde_relations(&self) -> Vec<Vec<BigInt>> {
        self.field
            .units()
            .flat_map(|x| {
                let psi1 = special_element(self, Special::Psi1(x)).expect("unit");
                let translated = self.actions[1].apply(&psi1).expect("length matches");
                [psi1, translated]
            })
            .collect()
    }
}

/// Distinguished elements.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Special {
    /// `ψ(x) = [x] + [x⁻¹]`
    Psi(Fq),
    /// `ψ₁(x) = [x] + ⟨-1⟩[x⁻¹]`
    Psi1(Fq),
    /// `C = [x] + [1-x]` for the least `x ∉ {0, 1}`
    C,
}

pub fn special_element<P: BlochPresentation + ?Sized>(
    p: &P,
    which: Special,
) -> Result<Vec<BigInt>, BlochError> {
    let k = p.field();
    let mut v = vec![BigInt::zero(); p.group().generator_count()];
    match which {
        Special::Psi(x) | Special::Psi1(x) => {
            if x.is_zero() {
                return Err(FieldError::ZeroDomain("ψ").into());
            }
            let class = if matches!(which, Special::Psi1(_)) {
                p.class_of(k.from_int(-1))?
            } else {
                0
            };
            v[p.generator(0, x)] += 1;
            v[p.generator(class, k.inv(x)?)] += 1;
        }
        Special::C => {
            let x = k.from_index(2);
            v[p.generator(0, x)] += 1;
            v[p.generator(0, k.sub(k.one(), x))] += 1;
        }
    }
    Ok(v)
}

/// `P̃ = P / ⟨ψ(x)⟩` or `R̃P = RP / Z[V]⟨ψ₁(x)⟩`, with its projection.
#[derive(Clone, Debug)]
pub struct TildeQuotient {
    pub group: Arc<FPGroup>,
    pub projection: FPHom,
}

pub fn quotient_tilde<P: BlochPresentation + ?Sized>(p: &P) -> Result<TildeQuotient, BlochError> {
    let group = Arc::new(p.group().quotient(&p.tilde_relations())?);
    let n = p.group().generator_count();
    let projection = FPHom::new(p.group().clone(), group.clone(), IntMatrix::identity(n))?;
    Ok(TildeQuotient { group, projection })
}

pub fn pre_bloch(k: Arc<FiniteField>) -> PreBloch {
    PreBloch::new(k)
}

pub fn refined_pre_bloch(k: Arc<FiniteField>) -> Result<RefinedPreBloch, BlochError> {
    RefinedPreBloch::new(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::abelian::Structure;

    fn field(q: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::of_order(q).unwrap())
    }

    #[test]
    fn pre_bloch_f5_has_order_six() {
        let p = pre_bloch(field(5));
        assert_eq!(p.group().order(), Some(BigInt::from(6)));
        assert_eq!(
            p.group().localize_away_2().invariant_factors(),
            vec![BigInt::from(3)]
        );
    }

    #[test]
    fn degenerate_relation_is_zero() {
        let k = field(7);
        for x in k.units().filter(|&x| x != k.one()) {
            let mut row = vec![0i64; 6];
            for (s, _, arg) in five_term(&k, x, x) {
                row[arg.index() as usize - 1] += s;
            }
            row[0] = 0;
            assert!(row.iter().all(|&c| c == 0), "x = {x:?}: {row:?}");
        }
    }

    #[test]
    fn c_is_independent_of_x_in_f5() {
        let p = pre_bloch(field(5));
        let g = p.group();
        let k = p.field().clone();
        let c = |x: i64| {
            let mut v = p.symbol(0, k.from_int(x));
            v[p.generator(0, k.from_int(1 - x))] += 1;
            g.normal_form(&v).unwrap()
        };
        assert_eq!(c(2), c(3));
        assert_eq!(c(2), c(4));
        let order = g.element_order(&p.constant_c()).unwrap().unwrap();
        assert_eq!(BigInt::from(6) % order, BigInt::zero());
    }

    #[test]
    fn psi_of_one_vanishes() {
        let p = pre_bloch(field(5));
        let v = special_element(&p, Special::Psi(Fq::ONE)).unwrap();
        assert!(p.group().is_zero(&v).unwrap());
        assert!(special_element(&p, Special::Psi(Fq::ZERO)).is_err());
    }

    #[test]
    fn refined_f5() {
        let k = field(5);
        let rp = refined_pre_bloch(k.clone()).unwrap();
        assert_eq!(rp.group().generator_count(), 8);
        let p = pre_bloch(k);
        assert_eq!(
            rp.coinvariants().unwrap().invariant_factors(),
            p.group().invariant_factors()
        );
        let rel = rp.group().relations();
        for i in 0..rel.rows() {
            assert!(rp.group().is_zero(&rel.row(i)).unwrap());
        }
        // The class action is an involution.
        let sq = rp.action(1).then(rp.action(1)).unwrap();
        for i in 0..8 {
            let mut e = vec![BigInt::zero(); 8];
            e[i] = BigInt::one();
            assert!(rp.group().equal(&sq.apply(&e).unwrap(), &e).unwrap());
        }
    }

    #[test]
    fn tilde_quotients_f5() {
        let p = pre_bloch(field(5));
        let t = quotient_tilde(&p).unwrap();
        assert_eq!(
            t.group.localize_away_2().structure(),
            Structure {
                free_rank: 0,
                torsion: vec![BigInt::from(3)]
            }
        );
        let order = t.group.order().unwrap();
        assert_eq!(BigInt::from(6) % order, BigInt::zero());
        for x in p.field().units() {
            let psi = special_element(&p, Special::Psi(x)).unwrap();
            assert!(t.group.is_zero(&t.projection.apply(&psi).unwrap()).unwrap());
        }
    }

    #[test]
    fn formal_evaluation() {
        let k = field(5);
        let p = pre_bloch(k.clone());
        let xi = FormalBlochElement::parse(&k, "[2] + [4] - [3] - [3]").unwrap();
        assert!(p.group().is_zero(&p.eval(&xi).unwrap()).unwrap());
    }
}
