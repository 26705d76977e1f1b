use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{quotient_tilde, BlochError, BlochPresentation, PreBloch, RefinedPreBloch};
use crate::abelian::{AbelianError, FPGroup, FPHom, IntMatrix};
use crate::fields::{FiniteField, Fq};
use crate::gw::{GroupRing, IdealLattice, SquareClassGroup};

/// `S₂(F_q)` on the single generator `u∘u`, `u` the fixed primitive element.
#[derive(Clone, Debug)]
pub struct SymSquare {
    pub group: Arc<FPGroup>,
    field: Arc<FiniteField>,
}

impl SymSquare {
    pub fn new(field: Arc<FiniteField>) -> Self {
        let q1 = BigInt::from(field.order() - 1);
        let rel = IntMatrix::from_rows(1, vec![vec![BigInt::from(2)], vec![q1]]);
        let group = Arc::new(FPGroup::new(vec!["u∘u".into()], rel).expect("width 1"));
        SymSquare { group, field }
    }

    /// Coordinate of `a∘b` on `u∘u`: `dlog(a)·dlog(b)`.
    pub fn symbol(&self, a: Fq, b: Fq) -> Result<BigInt, BlochError> {
        let k = &self.field;
        Ok(BigInt::from(k.discrete_log(a)?) * BigInt::from(k.discrete_log(b)?))
    }
}

/// `S₂(F_q)` together with `P(F_q) → S₂(F_q)`, `[a] ↦ a∘(1-a)`, and its
/// cokernel (which presents `K₂(F_q)`).
#[derive(Clone, Debug)]
pub struct SymSquareK2 {
    pub sym: SymSquare,
    pub map: FPHom,
    pub cokernel: Arc<FPGroup>,
}

pub fn sym_square_and_k2(p: &PreBloch) -> Result<SymSquareK2, BlochError> {
    let k = p.field().clone();
    let sym = SymSquare::new(k.clone());
    let one = k.one();
    let rows = k
        .units()
        .map(|a| {
            if a == one {
                Ok(vec![BigInt::zero()])
            } else {
                Ok(vec![sym.symbol(a, k.sub(one, a))?])
            }
        })
        .collect::<Result<Vec<_>, BlochError>>()?;
    let map = FPHom::new(
        p.group().clone(),
        sym.group.clone(),
        IntMatrix::from_rows(1, rows),
    )
    .map_err(|e| ill_defined(e, p.relation_labels()))?;
    let cokernel = map.kernel_image_cokernel().cokernel;
    Ok(SymSquareK2 { sym, map, cokernel })
}

fn ill_defined(e: AbelianError, labels: &[String]) -> BlochError {
    match e {
        AbelianError::NotWellDefined { relation } => BlochError::IllDefined {
            relation: labels[relation].clone(),
        },
        other => other.into(),
    }
}

/// `Λ = (λ₁, λ₂): RP(F_q) → I² ⊕ S₂(F_q)`, `[a] ↦ (⟨⟨a⟩⟩⟨⟨1-a⟩⟩, a∘(1-a))`,
/// a `Z[V]`-module map with `V` acting trivially on `S₂`.
#[derive(Clone, Debug)]
pub struct LambdaMap {
    pub hom: FPHom,
    pub ring: GroupRing,
    pub i2: IdealLattice,
    pub sym: SymSquare,
}

pub fn lambda_map(rp: &RefinedPreBloch) -> Result<LambdaMap, BlochError> {
    let k = rp.field().clone();
    let ring = GroupRing::new(SquareClassGroup::of_field(k.clone()));
    let i2 = IdealLattice::augmentation_power(&ring, 2);
    let sym = SymSquare::new(k.clone());
    let r = i2.rank();

    let mut labels: Vec<String> = i2.basis().iter().map(|b| ring.format(b)).collect();
    labels.push("u∘u".into());
    let mut rel = vec![vec![BigInt::zero(); r + 1]; 2];
    rel[0][r] = BigInt::from(2);
    rel[1][r] = BigInt::from(k.order() - 1);
    let target = Arc::new(FPGroup::new(labels, IntMatrix::from_rows(r + 1, rel))?);

    let one = k.one();
    let n = rp.group().generator_count();
    let mut rows = vec![vec![BigInt::zero(); r + 1]; n];
    for w in 0..rp.class_count() {
        for a in k.units().filter(|&a| a != one) {
            let b = k.sub(one, a);
            let st = ring.mul(
                &ring.pfister(rp.class_of(a)?),
                &ring.pfister(rp.class_of(b)?),
            );
            let st = ring.translate(w, &st);
            let row = &mut rows[rp.generator(w, a)];
            let coords = i2.coordinates(&st).expect("Steinberg elements lie in I²");
            row[..r].clone_from_slice(&coords);
            row[r] = sym.symbol(a, b)?;
        }
    }
    let hom = FPHom::new(
        rp.group().clone(),
        target,
        IntMatrix::from_rows(r + 1, rows),
    )
    .map_err(|e| ill_defined(e, rp.relation_labels()))?;
    Ok(LambdaMap { hom, ring, i2, sym })
}

impl LambdaMap {
    /// `Λ(⟨v⟩ξ) = ⟨v⟩Λ(ξ)` on every generator.
    pub fn is_equivariant(&self, rp: &RefinedPreBloch) -> bool {
        let n = rp.group().generator_count();
        let r = self.i2.rank();
        let target = self.hom.target();
        (0..rp.class_count()).all(|v| {
            (0..n).all(|g| {
                let mut e = vec![BigInt::zero(); n];
                e[g] = BigInt::one();
                let lhs = self
                    .hom
                    .apply(&rp.action(v).apply(&e).expect("length"))
                    .expect("length");
                let img = self.hom.apply(&e).expect("length");
                let basis = self.i2.basis();
                let mut elem = self.ring.zero();
                for (c, b) in img[..r].iter().zip(&basis) {
                    elem = self.ring.add(&elem, &self.ring.scale(b, c));
                }
                let mut rhs = self
                    .i2
                    .coordinates(&self.ring.translate(v, &elem))
                    .expect("I² is an ideal");
                rhs.push(img[r].clone());
                target.equal(&lhs, &rhs).expect("length")
            })
        })
    }
}

/// `B(F_q) = ker Λ` with its image `R̃B(F_q)` in `R̃P(F_q)`.
#[derive(Clone, Debug)]
pub struct RefinedBloch {
    pub bloch: Arc<FPGroup>,
    /// `B(F_q) → RP(F_q)`.
    pub inclusion: FPHom,
    pub tilde: Arc<FPGroup>,
    /// Kernel of `B(F_q) ↠ R̃B(F_q)`.
    pub tilde_kernel: Arc<FPGroup>,
    /// `4·x = 0` for every element of the kernel.
    pub kernel_killed_by_4: bool,
    /// `B ⊗ Z[1/2] ≅ R̃B ⊗ Z[1/2]`.
    pub odd_isomorphic: bool,
}

pub fn refined_bloch(rp: &RefinedPreBloch) -> Result<RefinedBloch, BlochError> {
    let lambda = lambda_map(rp)?;
    let kic = lambda.hom.kernel_image_cokernel();
    let bloch = kic.kernel;
    let inclusion = kic.kernel_inclusion;

    let tilde_rp = quotient_tilde(rp)?;
    let to_tilde = inclusion.then(&tilde_rp.projection)?;
    let t = to_tilde.kernel_image_cokernel();
    let tilde = t.image;
    let four = BigInt::from(4);
    let kernel_killed_by_4 = (0..t.kernel.generator_count()).all(|i| {
        let mut e = vec![BigInt::zero(); t.kernel.generator_count()];
        e[i] = BigInt::one();
        let x = t.kernel_inclusion.apply(&e).expect("length");
        let x: Vec<BigInt> = x.iter().map(|c| c * &four).collect();
        bloch.is_zero(&x).expect("length")
    });
    let odd_isomorphic = bloch.localize_away_2().structure() == tilde.localize_away_2().structure();
    Ok(RefinedBloch {
        bloch,
        inclusion,
        tilde,
        tilde_kernel: t.kernel,
        kernel_killed_by_4,
        odd_isomorphic,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bloch::{pre_bloch, refined_pre_bloch};

    fn field(q: u64) -> Arc<FiniteField> {
        Arc::new(FiniteField::of_order(q).unwrap())
    }

    #[test]
    fn sym_square_f5() {
        let k = field(5);
        let s = sym_square_and_k2(&pre_bloch(k.clone())).unwrap();
        assert_eq!(s.sym.group.invariant_factors(), vec![BigInt::from(2)]);
        let three = k.from_int(3);
        let img = s.map.apply(&pre_bloch(k).symbol(0, three)).unwrap();
        assert!(!s.sym.group.is_zero(&img).unwrap());
        assert!(s.cokernel.is_trivial());
    }

    #[test]
    fn lambda_f5() {
        let k = field(5);
        let rp = refined_pre_bloch(k.clone()).unwrap();
        let l = lambda_map(&rp).unwrap();
        assert!(l.is_equivariant(&rp));
        let zero = l.hom.apply(&rp.symbol(0, Fq::ONE)).unwrap();
        assert!(l.hom.target().is_zero(&zero).unwrap());
        // 3 and 1-3 = 3 are both nonsquares: λ₁[3] = ⟨⟨n⟩⟩² = -2⟨⟨n⟩⟩.
        let img = l.hom.apply(&rp.symbol(0, k.from_int(3))).unwrap();
        let b = &l.i2.basis()[0];
        let pf = l.ring.pfister(1);
        let expected = l.ring.scale(&pf, &BigInt::from(-2));
        let got = l.ring.scale(b, &img[0]);
        assert_eq!(got, expected);
    }

    #[test]
    fn refined_bloch_f5() {
        let rb = refined_bloch(&refined_pre_bloch(field(5)).unwrap()).unwrap();
        assert!(rb.bloch.order().is_some());
        assert!(rb.kernel_killed_by_4);
        assert!(rb.odd_isomorphic);
    }
}
