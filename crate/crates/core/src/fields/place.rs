use std::fmt;
use std::sync::Arc;

use super::factor::is_irreducible;
use super::finite::{FiniteField, Fq};
use super::poly::Poly;
use super::rational::{FunctionField, FunctionFieldElement};
use super::FieldError;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PlaceKind {
    /// The `π`-adic place for a monic irreducible `π ∈ F_q[t]`.
    Finite(Poly),
    /// The degree place, uniformizer `1/t`.
    Infinite,
}

/// A discrete valuation of `F_q(t)` with its residue field.
///
/// The residue field of a finite place of degree `d` is the canonical field
/// of order `q^d`. `F_q[t]/(π)` is identified with it by sending `t` to the
/// least root of `π` (in element index order); the constants `F_q` embed by
/// sending the generator of `F_q` to the least root of its defining
/// polynomial, or identically when the residue field is `F_q` itself.
#[derive(Clone)]
pub struct ValuedPlace {
    kind: PlaceKind,
    base: Arc<FiniteField>,
    residue: Arc<FiniteField>,
    // Image of each base-field element, indexed by `Fq::index`.
    embedding: Vec<Fq>,
    root: Option<Fq>,
}

impl fmt::Debug for ValuedPlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ValuedPlace({})", self.label())
    }
}

impl PartialEq for ValuedPlace {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && *self.base == *other.base
    }
}

fn least_root(k: &FiniteField, coeffs: &[Fq]) -> Option<Fq> {
    k.elements().find(|&x| {
        coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
            .is_zero()
    })
}

impl ValuedPlace {
    pub fn finite(base: Arc<FiniteField>, pi: Poly) -> Result<Self, FieldError> {
        if !pi.is_monic() || !is_irreducible(&base, &pi) {
            return Err(FieldError::NotAPlace(pi.format(&base)));
        }
        let d = pi.degree().expect("irreducible has positive degree") as u32;
        Self::build(base, PlaceKind::Finite(pi), d)
    }

    pub fn infinite(base: Arc<FiniteField>) -> Result<Self, FieldError> {
        Self::build(base, PlaceKind::Infinite, 1)
    }

    fn build(base: Arc<FiniteField>, kind: PlaceKind, d: u32) -> Result<Self, FieldError> {
        let residue = if d == 1 {
            base.clone()
        } else {
            Arc::new(FiniteField::new(base.characteristic(), base.degree() * d)?)
        };
        let embedding: Vec<Fq> = if d == 1 {
            base.elements().collect()
        } else {
            let lifted: Vec<Fq> = base
                .modulus()
                .iter()
                .map(|&c| residue.from_int(c as i64))
                .collect();
            let beta = least_root(&residue, &lifted).ok_or(FieldError::Embedding)?;
            let powers: Vec<Fq> = (0..base.degree() as i64)
                .map(|i| residue.pow(beta, i).expect("nonnegative"))
                .collect();
            base.elements()
                .map(|x| {
                    base.coords(x)
                        .iter()
                        .zip(&powers)
                        .fold(Fq::ZERO, |acc, (&c, &b)| {
                            residue.add(acc, residue.mul(residue.from_int(c as i64), b))
                        })
                })
                .collect()
        };
        let root = match &kind {
            PlaceKind::Finite(pi) => {
                let image: Vec<Fq> = pi
                    .coeffs()
                    .iter()
                    .map(|c| embedding[c.index() as usize])
                    .collect();
                Some(least_root(&residue, &image).ok_or(FieldError::Embedding)?)
            }
            PlaceKind::Infinite => None,
        };
        Ok(ValuedPlace {
            kind,
            base,
            residue,
            embedding,
            root,
        })
    }

    pub fn kind(&self) -> &PlaceKind {
        &self.kind
    }

    pub fn base(&self) -> &Arc<FiniteField> {
        &self.base
    }

    pub fn residue_field(&self) -> &Arc<FiniteField> {
        &self.residue
    }

    pub fn degree(&self) -> usize {
        match &self.kind {
            PlaceKind::Finite(pi) => pi.degree().unwrap_or(0),
            PlaceKind::Infinite => 1,
        }
    }

    pub fn uniformizer(&self, kt: &FunctionField) -> FunctionFieldElement {
        match &self.kind {
            PlaceKind::Finite(pi) => kt.from_poly(pi.clone()),
            PlaceKind::Infinite => kt.inv(&kt.t()).expect("t is nonzero"),
        }
    }

    pub fn label(&self) -> String {
        match &self.kind {
            PlaceKind::Finite(pi) => pi.format(&self.base),
            PlaceKind::Infinite => "1/t".into(),
        }
    }

    pub fn embed(&self, c: Fq) -> Fq {
        self.embedding[c.index() as usize]
    }

    /// `v(a)`; additive on products.
    pub fn valuation(&self, a: &FunctionFieldElement) -> Result<i64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroDomain("valuation"));
        }
        Ok(match &self.kind {
            PlaceKind::Finite(pi) => {
                let k = &*self.base;
                a.numerator().split_off(k, pi).0 as i64 - a.denominator().split_off(k, pi).0 as i64
            }
            PlaceKind::Infinite => {
                a.denominator().degree().unwrap() as i64 - a.numerator().degree().unwrap() as i64
            }
        })
    }

    /// Image of a unit in the residue field.
    pub fn reduce(&self, a: &FunctionFieldElement) -> Result<Fq, FieldError> {
        let v = self.valuation(a)?;
        if v != 0 {
            return Err(FieldError::NotUnit {
                valuation: v,
                place: self.label(),
            });
        }
        let r = &*self.residue;
        match (&self.kind, self.root) {
            (PlaceKind::Finite(_), Some(alpha)) => {
                let eval = |p: &Poly| {
                    p.coeffs()
                        .iter()
                        .rev()
                        .fold(Fq::ZERO, |acc, &c| r.add(r.mul(acc, alpha), self.embed(c)))
                };
                r.div(eval(a.numerator()), eval(a.denominator()))
            }
            _ => r.div(
                self.embed(a.numerator().leading()),
                self.embed(a.denominator().leading()),
            ),
        }
    }
}
