//! Specialization maps `S_{v,φ}: R̃P(F_q(t)) → P̃(k̄)[φ]` evaluated on formal
//! elements, residue tuples over finite place sets, the `M_χ` eigenspace
//! model, the predicted kernel `(q+1)′`, and the prime search `ℓ | p + 1`.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::abelian::{odd_part_big, FPGroup, FPHom};
use crate::bloch::{
    pre_bloch, quotient_tilde, BlochError, BlochPresentation, FormalBlochElement, FormalTerm,
    PreBloch, TildeQuotient,
};
use crate::exec::Exec;
use crate::fields::{
    enumerate_irreducibles, is_prime, prime_power, FieldError, FiniteField, Fq, FunctionField,
    FunctionFieldElement, Poly, ValuedPlace,
};
use crate::gw::{GroupRingElement, GwError, SquareClassGroup};

/// Residue fields above this order are refused: `P̃` would need `(Q-1)²` relations.
pub const MAX_RESIDUE_ORDER: u64 = 1024;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecializeError {
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error(transparent)]
    Bloch(#[from] BlochError),
    #[error(transparent)]
    Gw(#[from] GwError),
    #[error("no odd witness available for q = {0}: (q+1)′ = 1")]
    NoOddWitness(u64),
    #[error("{0} is not an odd prime")]
    NotOddPrime(u64),
    #[error("q = {0} is not an odd prime power >= 5")]
    InvalidOrder(u64),
    #[error("residue field of order {0} is too large for P̃")]
    ResidueTooLarge(u64),
}

impl From<crate::abelian::AbelianError> for SpecializeError {
    fn from(e: crate::abelian::AbelianError) -> Self {
        SpecializeError::Bloch(e.into())
    }
}

/// `φ ∈ Hom(Z, Z/2)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Phi {
    Zero,
    Mod2,
}

impl Phi {
    pub const ALL: [Phi; 2] = [Phi::Zero, Phi::Mod2];

    /// `(-1)^{φ(v)}`
    pub fn sign(self, v: i64) -> i64 {
        match self {
            Phi::Mod2 if v.rem_euclid(2) == 1 => -1,
            _ => 1,
        }
    }
}

impl std::str::FromStr for Phi {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "0" | "zero" => Ok(Phi::Zero),
            "mod2" | "v mod 2" | "v" => Ok(Phi::Mod2),
            other => Err(format!("unknown φ `{other}`, expected `0` or `mod2`")),
        }
    }
}

/// `P̃(k̄)` with the constant `C`; the twist `φ` is applied by [`sp_phi`].
#[derive(Clone, Debug)]
pub struct TwistedTarget {
    pre: PreBloch,
    tilde: TildeQuotient,
    c: Vec<BigInt>,
}

impl TwistedTarget {
    pub fn new(residue: Arc<FiniteField>) -> Result<Self, SpecializeError> {
        if residue.order() > MAX_RESIDUE_ORDER {
            return Err(SpecializeError::ResidueTooLarge(residue.order()));
        }
        let pre = pre_bloch(residue);
        let tilde = quotient_tilde(&pre)?;
        let c = pre.constant_c();
        Ok(TwistedTarget { pre, tilde, c })
    }

    pub fn field(&self) -> &Arc<FiniteField> {
        self.pre.field()
    }

    pub fn group(&self) -> &Arc<FPGroup> {
        &self.tilde.group
    }

    pub fn pre_bloch(&self) -> &PreBloch {
        &self.pre
    }

    pub fn symbol(&self, a: Fq) -> Vec<BigInt> {
        self.pre.symbol(0, a)
    }

    pub fn constant_c(&self) -> &[BigInt] {
        &self.c
    }

    pub fn normal_form(&self, x: &[BigInt]) -> Vec<BigInt> {
        self.tilde
            .group
            .normal_form(x)
            .expect("vector length matches the target")
    }

    pub fn is_zero(&self, x: &[BigInt]) -> bool {
        self.normal_form(x).iter().all(Zero::is_zero)
    }

    /// `n·y` for `y` in canonical coordinates.
    pub fn scale_canonical(&self, y: &[BigInt], n: i64) -> Vec<BigInt> {
        let lifted: Vec<BigInt> = self
            .tilde
            .group
            .lift(y)
            .into_iter()
            .map(|c| c * n)
            .collect();
        self.normal_form(&lifted)
    }

    pub fn order_of(&self, x: &[BigInt]) -> BigInt {
        self.tilde
            .group
            .element_order(x)
            .expect("length")
            .expect("P̃ of a finite field is finite")
    }
}

/// Twisted targets shared across places with the same residue order.
#[derive(Debug, Default)]
pub struct Specializer {
    targets: Mutex<HashMap<u64, Arc<TwistedTarget>>>,
}

impl Specializer {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn target(
        &self,
        residue: &Arc<FiniteField>,
    ) -> Result<Arc<TwistedTarget>, SpecializeError> {
        let q = residue.order();
        if let Some(t) = self.targets.lock().expect("poisoned").get(&q) {
            return Ok(t.clone());
        }
        let built = Arc::new(TwistedTarget::new(residue.clone())?);
        Ok(self
            .targets
            .lock()
            .expect("poisoned")
            .entry(q)
            .or_insert(built)
            .clone())
    }

    /// `S_{v,φ}(ξ)` in canonical coordinates of `P̃(k̄)`.
    pub fn sp_phi(
        &self,
        place: &ValuedPlace,
        phi: Phi,
        xi: &FormalBlochElement<FunctionFieldElement>,
    ) -> Result<Vec<BigInt>, SpecializeError> {
        let target = self.target(place.residue_field())?;
        sp_phi(&target, place, phi, xi)
    }
}

/// `[a] ↦ [ā]`, `C` or `-C` as `v(a)` is zero, positive or negative, and
/// `⟨g⟩ ↦ (-1)^{φ(v(g))}`.
pub fn sp_phi(
    target: &TwistedTarget,
    place: &ValuedPlace,
    phi: Phi,
    xi: &FormalBlochElement<FunctionFieldElement>,
) -> Result<Vec<BigInt>, SpecializeError> {
    let mut acc = vec![BigInt::zero(); target.group().generator_count()];
    for FormalTerm { coeff, class, arg } in xi.terms() {
        let sign = phi.sign(place.valuation(class)?);
        let c = coeff * sign;
        let v = place.valuation(arg)?;
        if v == 0 {
            acc[target.pre.generator(0, place.reduce(arg)?)] += &c;
        } else {
            let c = if v > 0 { c } else { -c };
            for (a, g) in acc.iter_mut().zip(&target.c) {
                *a += &c * g;
            }
        }
    }
    Ok(target.normal_form(&acc))
}

/// Refined five-term relation over `F_q(t)` as a formal element.
pub fn five_term_rational(
    kt: &FunctionField,
    x: &FunctionFieldElement,
    y: &FunctionFieldElement,
) -> Result<FormalBlochElement<FunctionFieldElement>, FieldError> {
    let one = kt.one();
    let xi = kt.inv(x)?;
    let yi = kt.inv(y)?;
    let omx = kt.one_minus(x);
    let omy = kt.one_minus(y);
    let terms = [
        (1, one.clone(), x.clone()),
        (-1, one.clone(), y.clone()),
        (1, x.clone(), kt.div(y, x)?),
        (
            -1,
            kt.sub(&xi, &one),
            kt.div(&kt.one_minus(&xi), &kt.one_minus(&yi))?,
        ),
        (1, omx.clone(), kt.div(&omx, &omy)?),
    ];
    Ok(FormalBlochElement::from_terms(terms.into_iter().map(
        |(c, class, arg)| FormalTerm {
            coeff: BigInt::from(c),
            class,
            arg,
        },
    )))
}

/// `ψ₁(x) = [x] + ⟨-1⟩[x⁻¹]`.
pub fn psi1_rational(
    kt: &FunctionField,
    x: &FunctionFieldElement,
) -> Result<FormalBlochElement<FunctionFieldElement>, FieldError> {
    Ok(
        FormalBlochElement::symbol(1, kt.one(), x.clone()).add(&FormalBlochElement::symbol(
            1,
            kt.from_int(-1),
            kt.inv(x)?,
        )),
    )
}

/// Finite places of degree `≤ max_degree` in enumeration order, then `∞`
/// when `include_infinite`.
pub fn places_up_to(
    k: &Arc<FiniteField>,
    max_degree: usize,
    include_infinite: bool,
) -> Result<Vec<ValuedPlace>, FieldError> {
    let mut out = enumerate_irreducibles(k, max_degree)
        .into_iter()
        .map(|pi| ValuedPlace::finite(k.clone(), pi))
        .collect::<Result<Vec<_>, _>>()?;
    if include_infinite {
        out.push(ValuedPlace::infinite(k.clone())?);
    }
    Ok(out)
}

fn random_poly(k: &FiniteField, rng: &mut ChaCha8Rng, max_degree: usize) -> Poly {
    let q = k.order() as u32;
    let d = rng.gen_range(0..=max_degree);
    let mut coeffs: Vec<Fq> = (0..d).map(|_| k.from_index(rng.gen_range(0..q))).collect();
    coeffs.push(k.from_index(rng.gen_range(1..q)));
    Poly::new(coeffs)
}

/// A random element of `F_q(t)^×` with numerator and denominator of degree `≤ max_degree`.
pub fn random_unit(
    kt: &FunctionField,
    rng: &mut ChaCha8Rng,
    max_degree: usize,
) -> FunctionFieldElement {
    let k = kt.constants();
    let num = random_poly(k, rng, max_degree);
    let den = random_poly(k, rng, max_degree);
    kt.fraction(num, den).expect("nonzero denominator")
}

fn random_non_one(
    kt: &FunctionField,
    rng: &mut ChaCha8Rng,
    max_degree: usize,
) -> FunctionFieldElement {
    loop {
        let x = random_unit(kt, rng, max_degree);
        if !x.is_one() {
            return x;
        }
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct WdReport {
    pub q: u64,
    pub phi: Phi,
    pub seed: u64,
    pub max_place_degree: usize,
    pub relations_checked: usize,
    pub psi1_checked: usize,
    pub equivariance_checked: usize,
    pub violations: Vec<String>,
}

impl WdReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

enum WdCase {
    Relation(FunctionFieldElement, FunctionFieldElement),
    Psi1(FunctionFieldElement),
    Equivariance(
        FormalBlochElement<FunctionFieldElement>,
        FunctionFieldElement,
    ),
}

/// Randomized well-definedness suite for `S_φ` over `F_q(t)`: refined
/// five-term relations and `ψ₁(x)` must vanish, and
/// `S_φ(⟨g⟩ξ) = (-1)^{φ(v(g))} S_φ(ξ)`.
#[allow(clippy::too_many_arguments)]
pub fn wd_suite(
    specializer: &Specializer,
    q: u64,
    phi: Phi,
    trials: usize,
    psi_trials: usize,
    max_place_degree: usize,
    seed: u64,
    exec: Exec,
) -> Result<WdReport, SpecializeError> {
    let k = Arc::new(FiniteField::of_order(q)?);
    let kt = FunctionField::new(k.clone());
    let places = places_up_to(&k, max_place_degree, true)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut cases: Vec<(usize, WdCase)> = Vec::with_capacity(2 * trials + psi_trials);
    for _ in 0..trials {
        let x = random_non_one(&kt, &mut rng, 3);
        let y = random_non_one(&kt, &mut rng, 3);
        cases.push((rng.gen_range(0..places.len()), WdCase::Relation(x, y)));
    }
    for _ in 0..psi_trials {
        let x = random_unit(&kt, &mut rng, 3);
        cases.push((rng.gen_range(0..places.len()), WdCase::Psi1(x)));
    }
    for _ in 0..trials {
        let xi = FormalBlochElement::from_terms((0..3).map(|_| FormalTerm {
            coeff: BigInt::from(rng.gen_range(-3i64..=3)),
            class: random_unit(&kt, &mut rng, 2),
            arg: random_unit(&kt, &mut rng, 3),
        }));
        let g = random_unit(&kt, &mut rng, 2);
        cases.push((rng.gen_range(0..places.len()), WdCase::Equivariance(xi, g)));
    }
    // Residue fields are built up front so the parallel loop only reads the cache.
    for place in &places {
        specializer.target(place.residue_field())?;
    }

    let outcomes = exec.map(
        &cases,
        |(pi, case)| -> Result<Option<String>, SpecializeError> {
            let place = &places[*pi];
            let at = format!("place {}", place.label());
            Ok(match case {
                WdCase::Relation(x, y) => {
                    let rel = five_term_rational(&kt, x, y)?;
                    let img = specializer.sp_phi(place, phi, &rel)?;
                    (!img.iter().all(Zero::is_zero)).then(|| {
                        format!(
                            "{at}: relation x = {}, y = {} maps to {:?}",
                            kt.format(x),
                            kt.format(y),
                            img
                        )
                    })
                }
                WdCase::Psi1(x) => {
                    let img = specializer.sp_phi(place, phi, &psi1_rational(&kt, x)?)?;
                    (!img.iter().all(Zero::is_zero))
                        .then(|| format!("{at}: ψ₁({}) maps to {:?}", kt.format(x), img))
                }
                WdCase::Equivariance(xi, g) => {
                    let lhs = specializer.sp_phi(place, phi, &xi.translate(&kt, g))?;
                    let s = phi.sign(place.valuation(g)?);
                    let base = specializer.sp_phi(place, phi, xi)?;
                    let target = specializer.target(place.residue_field())?;
                    let rhs = target.scale_canonical(&base, s);
                    (lhs != rhs).then(|| {
                        format!(
                            "{at}: ⟨{}⟩·({}) maps to {:?}, expected {:?}",
                            kt.format(g),
                            xi.format(&kt),
                            lhs,
                            rhs
                        )
                    })
                }
            })
        },
    );
    let violations = outcomes
        .into_iter()
        .filter_map(|r| r.transpose())
        .collect::<Result<Vec<_>, _>>()?;
    Ok(WdReport {
        q,
        phi,
        seed,
        max_place_degree,
        relations_checked: trials,
        psi1_checked: psi_trials,
        equivariance_checked: trials,
        violations,
    })
}

/// One component of the total residue map.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct ResidueComponent {
    pub place: String,
    pub residue_order: u64,
    pub normal_form: Vec<BigInt>,
    pub zero: bool,
}

/// `(S_{p,φ}(ξ))_p` over the given places, in place order.
pub fn ufd_residues(
    specializer: &Specializer,
    xi: &FormalBlochElement<FunctionFieldElement>,
    places: &[ValuedPlace],
    phi: Phi,
    exec: Exec,
) -> Result<Vec<ResidueComponent>, SpecializeError> {
    for place in places {
        specializer.target(place.residue_field())?;
    }
    exec.map(places, |place| {
        let nf = specializer.sp_phi(place, phi, xi)?;
        Ok(ResidueComponent {
            place: place.label(),
            residue_order: place.residue_field().order(),
            zero: nf.iter().all(Zero::is_zero),
            normal_form: nf,
        })
    })
    .into_iter()
    .collect()
}

/// Finite places of degree `≤ max_degree` at which `ξ` has a nonzero component.
pub fn support_scan(
    specializer: &Specializer,
    kt: &FunctionField,
    xi: &FormalBlochElement<FunctionFieldElement>,
    max_degree: usize,
    phi: Phi,
    exec: Exec,
) -> Result<Vec<ResidueComponent>, SpecializeError> {
    let places = places_up_to(kt.constants(), max_degree, false)?;
    Ok(ufd_residues(specializer, xi, &places, phi, exec)?
        .into_iter()
        .filter(|c| !c.zero)
        .collect())
}

/// Witness that Steinberg elements act nontrivially after specialization:
/// at `π = t` with `φ = v mod 2`, `⟨⟨π⁻¹⟩⟩⟨⟨1-π⁻¹⟩⟩` acts as `(-2)(-2) = 4`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct CorValWitness {
    pub q: u64,
    pub place: String,
    pub xi: String,
    pub y: Vec<BigInt>,
    pub y_order: BigInt,
    pub valuation_pi_inv: i64,
    pub valuation_one_minus_pi_inv: i64,
    pub steinberg_xi: String,
    pub steinberg_image: Vec<BigInt>,
    pub equals_four_y: bool,
    pub nonzero: bool,
    pub sixteen_y_nonzero: bool,
}

pub fn cor_val_witness(
    specializer: &Specializer,
    q: u64,
) -> Result<CorValWitness, SpecializeError> {
    if odd_part(q + 1) == 1 {
        return Err(SpecializeError::NoOddWitness(q));
    }
    let k = Arc::new(FiniteField::of_order(q)?);
    let kt = FunctionField::new(k.clone());
    let place = ValuedPlace::finite(k.clone(), Poly::t())?;
    let phi = Phi::Mod2;
    let target = specializer.target(place.residue_field())?;

    // ξ = m[c] with m the 2-part of the order of [c], so y has odd order.
    let (xi, y, y_order) = k
        .units()
        .find_map(|c| {
            let order = target.order_of(&target.symbol(c));
            let odd = odd_part_big(&order);
            (odd > BigInt::one()).then(|| {
                let m = &order / &odd;
                let xi = FormalBlochElement::symbol(m, kt.one(), kt.constant(c));
                let y = sp_phi(&target, &place, phi, &xi).expect("constant symbols are units");
                (xi, y, odd)
            })
        })
        .ok_or(SpecializeError::NoOddWitness(q))?;

    let pi_inv = kt.inv(&kt.t())?;
    let one_minus = kt.one_minus(&pi_inv);
    let steinberg = xi.pfister(&kt, &pi_inv).pfister(&kt, &one_minus);
    let image = sp_phi(&target, &place, phi, &steinberg)?;
    let scaled = |n: i64| target.scale_canonical(&y, n);
    Ok(CorValWitness {
        q,
        place: place.label(),
        xi: xi.format(&kt),
        y_order,
        valuation_pi_inv: place.valuation(&pi_inv)?,
        valuation_one_minus_pi_inv: place.valuation(&one_minus)?,
        steinberg_xi: steinberg.format(&kt),
        equals_four_y: image == scaled(4),
        nonzero: !image.iter().all(Zero::is_zero),
        sixteen_y_nonzero: !scaled(16).iter().all(Zero::is_zero),
        steinberg_image: image,
        y,
    })
}

/// `M_χ ⊗ Z[1/2]`: an abelian group with `⟨g⟩` acting as `χ(g) = ±1`.
#[derive(Clone, Debug)]
pub struct ChiModule {
    classes: SquareClassGroup,
    /// `χ(g) = (-1)^{popcount(g & character)}`.
    character: usize,
    group: Arc<FPGroup>,
}

impl ChiModule {
    /// Even parts of `invariant_factors` are discarded; zero stands for `Z`.
    pub fn new(
        rank: usize,
        character: usize,
        invariant_factors: &[u64],
    ) -> Result<Self, SpecializeError> {
        let classes = SquareClassGroup::abstract_group(rank);
        let odd: Vec<BigInt> = invariant_factors
            .iter()
            .map(|&d| BigInt::from(if d == 0 { 0 } else { odd_part(d) }))
            .filter(|d| !d.is_one())
            .collect();
        let labels = (0..odd.len()).map(|i| format!("m{i}")).collect();
        let group = Arc::new(FPGroup::diagonal(labels, &odd)?);
        Ok(ChiModule {
            classes,
            character: character & ((1 << rank) - 1),
            group,
        })
    }

    pub fn classes(&self) -> &SquareClassGroup {
        &self.classes
    }

    pub fn group(&self) -> &Arc<FPGroup> {
        &self.group
    }

    pub fn chi(&self, g: usize) -> i64 {
        if (g & self.character).count_ones() % 2 == 0 {
            1
        } else {
            -1
        }
    }

    /// Classes `g` with `χ(g) = -1`.
    pub fn negative_classes(&self) -> Vec<usize> {
        self.classes
            .elements()
            .filter(|&g| self.chi(g) == -1)
            .collect()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct MchiAction {
    pub scalar: BigInt,
    /// `r·M = M` and `r` is injective on `M`.
    pub bijective: bool,
}

pub fn mchi_action(m: &ChiModule, r: &GroupRingElement) -> Result<MchiAction, SpecializeError> {
    if r.coeffs().len() != m.classes.order() {
        return Err(GwError::RankMismatch {
            left: m.classes.order(),
            right: r.coeffs().len(),
        }
        .into());
    }
    let scalar: BigInt = r
        .coeffs()
        .iter()
        .enumerate()
        .map(|(g, c)| c * m.chi(g))
        .sum();
    let bijective = m.group.moduli().iter().all(|d| {
        if d.is_zero() {
            scalar.abs().is_one()
        } else {
            scalar.gcd(d).is_one()
        }
    });
    Ok(MchiAction { scalar, bijective })
}

/// Cokernel and kernel of multiplication by `n`, both trivial iff bijective.
pub fn scalar_is_bijective_presented(g: &Arc<FPGroup>, n: &BigInt) -> bool {
    let hom = FPHom::scalar(g.clone(), n);
    let kic = hom.kernel_image_cokernel();
    kic.kernel.is_trivial() && kic.cokernel.is_trivial()
}

#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct KernelPrediction {
    pub q: u64,
    pub order: u64,
}

impl KernelPrediction {
    pub fn group(&self) -> FPGroup {
        let orders: Vec<BigInt> = if self.order == 1 {
            vec![]
        } else {
            vec![BigInt::from(self.order)]
        };
        let labels = (0..orders.len()).map(|i| format!("c{i}")).collect();
        FPGroup::diagonal(labels, &orders).expect("diagonal presentation")
    }
}

/// Cyclic of order `(q+1)′`.
pub fn predicted_kernel(q: u64) -> Result<KernelPrediction, SpecializeError> {
    match prime_power(q) {
        Some((p, _)) if p != 2 && q >= 5 => Ok(KernelPrediction {
            q,
            order: odd_part(q + 1),
        }),
        _ => Err(SpecializeError::InvalidOrder(q)),
    }
}

/// `n` with all factors of 2 removed; `odd_part(0) = 0`.
pub fn odd_part(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        n >> n.trailing_zeros()
    }
}

#[derive(Clone, Debug, Serialize, PartialEq)]
pub struct ChebotarevReport {
    pub l: u64,
    pub bound: u64,
    pub primes: Vec<u64>,
    pub prime_count: u64,
    pub density: f64,
    pub expected: f64,
    pub relative_error: f64,
}

/// Primes `p ≤ bound` with `ℓ | p + 1`, against the expected density `1/(ℓ-1)`.
pub fn chebotarev_search(l: u64, bound: u64) -> Result<ChebotarevReport, SpecializeError> {
    if l == 2 || !is_prime(l) {
        return Err(SpecializeError::NotOddPrime(l));
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut primes = Vec::new();
    let mut prime_count = 0u64;
    for i in 2..=n {
        if composite[i] {
            continue;
        }
        prime_count += 1;
        if (i as u64 + 1) % l == 0 {
            primes.push(i as u64);
        }
        let mut j = i * i;
        while j <= n {
            composite[j] = true;
            j += i;
        }
    }
    let density = if prime_count == 0 {
        0.0
    } else {
        primes.len() as f64 / prime_count as f64
    };
    let expected = 1.0 / (l - 1) as f64;
    Ok(ChebotarevReport {
        l,
        bound,
        primes,
        prime_count,
        density,
        expected,
        relative_error: (density - expected).abs() / expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gw::GroupRing;

    fn f5t() -> (Arc<FiniteField>, FunctionField) {
        let k = Arc::new(FiniteField::of_order(5).unwrap());
        (k.clone(), FunctionField::new(k))
    }

    fn parse(kt: &FunctionField, s: &str) -> FormalBlochElement<FunctionFieldElement> {
        FormalBlochElement::parse(kt, s).unwrap()
    }

    #[test]
    fn formula_cases_at_t() {
        let (k, kt) = f5t();
        let sp = Specializer::new();
        let place = ValuedPlace::finite(k.clone(), Poly::t()).unwrap();
        let target = sp.target(place.residue_field()).unwrap();
        let c = target.normal_form(target.constant_c());
        assert_eq!(sp.sp_phi(&place, Phi::Mod2, &parse(&kt, "[t]")).unwrap(), c);
        assert!(sp
            .sp_phi(&place, Phi::Mod2, &parse(&kt, "[t+1]"))
            .unwrap()
            .iter()
            .all(Zero::is_zero));
        let two = target.normal_form(&target.symbol(k.from_int(2)));
        assert_eq!(
            sp.sp_phi(&place, Phi::Mod2, &parse(&kt, "[2]")).unwrap(),
            two
        );
        let neg_c = target.normal_form(&target.constant_c().iter().map(|x| -x).collect::<Vec<_>>());
        assert_eq!(
            sp.sp_phi(&place, Phi::Zero, &parse(&kt, "[1/t]")).unwrap(),
            neg_c
        );
        // ⟨t⟩ acts by -1 under φ = v mod 2 and trivially under φ = 0.
        assert_eq!(
            sp.sp_phi(&place, Phi::Mod2, &parse(&kt, "<t>[t]")).unwrap(),
            neg_c
        );
        assert_eq!(
            sp.sp_phi(&place, Phi::Zero, &parse(&kt, "<t>[t]")).unwrap(),
            c
        );
    }

    #[test]
    fn psi1_with_positive_valuation_cancels() {
        let (k, kt) = f5t();
        let sp = Specializer::new();
        let place = ValuedPlace::finite(k, Poly::t()).unwrap();
        let img = sp
            .sp_phi(&place, Phi::Mod2, &psi1_rational(&kt, &kt.t()).unwrap())
            .unwrap();
        assert!(img.iter().all(Zero::is_zero));
    }

    #[test]
    fn small_wd_suite() {
        let sp = Specializer::new();
        for phi in Phi::ALL {
            let r = wd_suite(&sp, 5, phi, 30, 10, 2, 7, Exec::default()).unwrap();
            assert!(r.passed(), "{:?}", r.violations);
        }
    }

    #[test]
    fn residues_of_t() {
        let (k, kt) = f5t();
        let sp = Specializer::new();
        let places = vec![
            ValuedPlace::finite(k.clone(), Poly::t()).unwrap(),
            ValuedPlace::finite(k.clone(), Poly::linear(k.from_int(-1))).unwrap(),
        ];
        let r = ufd_residues(&sp, &parse(&kt, "[t]"), &places, Phi::Mod2, Exec::default()).unwrap();
        assert_eq!(r[0].place, "t");
        assert!(!r[0].zero);
        assert!(r[1].zero);
        let zero = ufd_residues(
            &sp,
            &FormalBlochElement::zero(),
            &places,
            Phi::Mod2,
            Exec::default(),
        )
        .unwrap();
        assert!(zero.iter().all(|c| c.zero));
        let scan =
            support_scan(&sp, &kt, &parse(&kt, "[2]"), 2, Phi::Mod2, Exec::default()).unwrap();
        let linear: Vec<String> = places_up_to(&k, 1, false)
            .unwrap()
            .iter()
            .map(|p| p.label())
            .collect();
        assert!(linear.iter().all(|l| scan.iter().any(|c| &c.place == l)));
    }

    #[test]
    fn witnesses() {
        let sp = Specializer::new();
        let w5 = cor_val_witness(&sp, 5).unwrap();
        assert_eq!(w5.y_order, BigInt::from(3));
        assert!(w5.equals_four_y && w5.nonzero && w5.sixteen_y_nonzero);
        assert_eq!(
            (w5.valuation_pi_inv, w5.valuation_one_minus_pi_inv),
            (-1, -1)
        );
        let w9 = cor_val_witness(&sp, 9).unwrap();
        assert_eq!(w9.y_order, BigInt::from(5));
        assert!(w9.equals_four_y && w9.nonzero);
        assert_eq!(
            cor_val_witness(&sp, 7),
            Err(SpecializeError::NoOddWitness(7))
        );
    }

    #[test]
    fn chi_module_scalars() {
        let m = ChiModule::new(1, 1, &[3]).unwrap();
        let ring = GroupRing::new(m.classes().clone());
        assert_eq!(
            mchi_action(&m, &ring.pfister(1)).unwrap().scalar,
            BigInt::from(-2)
        );
        let st = ring.mul(&ring.pfister(1), &ring.pfister(1));
        let a = mchi_action(&m, &st).unwrap();
        assert_eq!(a.scalar, BigInt::from(4));
        assert!(a.bijective);
        assert!(scalar_is_bijective_presented(m.group(), &a.scalar));
        let trivial = ChiModule::new(2, 0, &[3, 9]).unwrap();
        let ring2 = GroupRing::new(trivial.classes().clone());
        for g in 0..4 {
            assert!(mchi_action(&trivial, &ring2.pfister(g))
                .unwrap()
                .scalar
                .is_zero());
        }
        assert!(mchi_action(&trivial, &st).is_err());
    }

    #[test]
    fn predictions_and_odd_parts() {
        assert_eq!((odd_part(8), odd_part(12)), (1, 3));
        assert_eq!(predicted_kernel(5).unwrap().order, 3);
        let p9 = predicted_kernel(9).unwrap();
        let k9 = Arc::new(FiniteField::of_order(9).unwrap());
        assert_eq!(
            p9.group().structure(),
            pre_bloch(k9).group().localize_away_2().structure()
        );
        assert!(predicted_kernel(8).is_err());
        assert!(predicted_kernel(3).is_err());
    }

    #[test]
    fn chebotarev_small() {
        assert_eq!(
            chebotarev_search(3, 30).unwrap().primes,
            vec![2, 5, 11, 17, 23, 29]
        );
        assert_eq!(
            chebotarev_search(5, 100).unwrap().primes,
            vec![19, 29, 59, 79, 89]
        );
        assert_eq!(chebotarev_search(3, 2).unwrap().primes, vec![2]);
        assert!(chebotarev_search(4, 10).is_err());
    }
}
