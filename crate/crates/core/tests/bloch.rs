use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use proptest::prelude::*;

use rbloch_core::bloch::{
    five_term, BlochPresentation, FormalBlochElement, FormalTerm, PreBloch, RefinedPreBloch,
};
use rbloch_core::fields::{
    enumerate_irreducibles, FiniteField, Fq, FunctionField, FunctionFieldElement, Poly, ValuedPlace,
};
use rbloch_core::specialize::{places_up_to, Phi, Specializer};

const SMALL: [u64; 5] = [5, 7, 9, 11, 13];

fn refined(q: u64) -> Arc<RefinedPreBloch> {
    static CACHE: OnceLock<Mutex<HashMap<u64, Arc<RefinedPreBloch>>>> = OnceLock::new();
    let mut map = CACHE.get_or_init(Default::default).lock().unwrap();
    map.entry(q)
        .or_insert_with(|| {
            Arc::new(RefinedPreBloch::new(Arc::new(FiniteField::of_order(q).unwrap())).unwrap())
        })
        .clone()
}

fn specializer() -> &'static Specializer {
    static SP: OnceLock<Specializer> = OnceLock::new();
    SP.get_or_init(Specializer::new)
}

fn formal_fq(k: &FiniteField, raw: &[(i64, bool, u32)]) -> FormalBlochElement<Fq> {
    let q = k.order() as u32;
    FormalBlochElement::from_terms(raw.iter().map(|&(c, nonsquare, a)| FormalTerm {
        coeff: BigInt::from(c),
        class: if nonsquare { k.primitive() } else { k.one() },
        arg: k.from_index(1 + a % (q - 1)),
    }))
}

fn rational_unit(kt: &FunctionField, num: &[u32], den: &[u32], scale: u32) -> FunctionFieldElement {
    let k = kt.constants();
    let q = k.order() as u32;
    let monic = |c: &[u32]| {
        let mut v: Vec<Fq> = c.iter().map(|&x| k.from_index(x % q)).collect();
        v.push(k.one());
        Poly::new(v)
    };
    let c = kt.constant(k.from_index(1 + scale % (q - 1)));
    kt.mul(&c, &kt.fraction(monic(num), monic(den)).unwrap())
}

fn term_strategy() -> impl Strategy<Value = Vec<(i64, bool, u32)>> {
    prop::collection::vec((-5i64..=5, any::<bool>(), 0u32..1000), 0..6)
}

type RawRational = (i64, (Vec<u32>, Vec<u32>, u32), (Vec<u32>, Vec<u32>, u32));

fn rational_terms() -> impl Strategy<Value = Vec<RawRational>> {
    let part = || {
        (
            prop::collection::vec(0u32..100, 0..3),
            prop::collection::vec(0u32..100, 0..3),
            0u32..100,
        )
    };
    prop::collection::vec((-4i64..=4, part(), part()), 1..4)
}

fn formal_rational(
    kt: &FunctionField,
    raw: &[RawRational],
) -> FormalBlochElement<FunctionFieldElement> {
    FormalBlochElement::from_terms(raw.iter().map(|(c, (gn, gd, gs), (an, ad, s))| FormalTerm {
        coeff: BigInt::from(*c),
        class: rational_unit(kt, gn, gd, *gs),
        arg: rational_unit(kt, an, ad, *s),
    }))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(120))]

    #[test]
    fn refined_five_term_vanishes(q in prop::sample::select(SMALL.to_vec()), x in 2u32..200, y in 2u32..200) {
        let rp = refined(q);
        let k = rp.field().clone();
        let pick = |i: u32| k.from_index(2 + i % (q as u32 - 2));
        let (x, y) = (pick(x), pick(y));
        let rel = FormalBlochElement::from_terms(
            five_term(&k, x, y).into_iter().map(|(s, class, arg)| FormalTerm { coeff: BigInt::from(s), class, arg }),
        );
        prop_assert!(rp.group().is_zero(&rp.eval(&rel).unwrap()).unwrap());
        // The relation is stable under every translate.
        let moved = rel.translate(&k, &k.primitive());
        prop_assert!(rp.group().is_zero(&rp.eval(&moved).unwrap()).unwrap());
    }

    #[test]
    fn eval_is_additive_and_squares_act_trivially(
        q in prop::sample::select(SMALL.to_vec()),
        a in term_strategy(),
        b in term_strategy(),
        s in 1u32..200,
    ) {
        let rp = refined(q);
        let k = rp.field().clone();
        let g = rp.group();
        let (xa, xb) = (formal_fq(&k, &a), formal_fq(&k, &b));
        let sum: Vec<BigInt> = rp.eval(&xa).unwrap().iter().zip(rp.eval(&xb).unwrap()).map(|(u, v)| u + v).collect();
        prop_assert!(g.equal(&rp.eval(&xa.add(&xb)).unwrap(), &sum).unwrap());
        let u = k.from_index(1 + s % (q as u32 - 1));
        let square = k.mul(u, u);
        prop_assert!(g.equal(&rp.eval(&xa.translate(&k, &square)).unwrap(), &rp.eval(&xa).unwrap()).unwrap());
    }

    #[test]
    fn finite_format_round_trip(q in prop::sample::select(SMALL.to_vec()), raw in term_strategy()) {
        let k = Arc::new(FiniteField::of_order(q).unwrap());
        let xi = formal_fq(&k, &raw);
        let text = xi.format(&k);
        prop_assert_eq!(FormalBlochElement::parse(&k, &text).unwrap(), xi);
    }

    #[test]
    fn rational_format_round_trip(q in prop::sample::select(vec![5u64, 7, 9]), raw in rational_terms()) {
        let kt = FunctionField::new(Arc::new(FiniteField::of_order(q).unwrap()));
        let xi = formal_rational(&kt, &raw);
        let text = xi.format(&kt);
        prop_assert_eq!(FormalBlochElement::parse(&kt, &text).unwrap(), xi);
    }

    #[test]
    fn specialization_is_linear_and_equivariant(
        q in prop::sample::select(vec![5u64, 7]),
        phi in prop::sample::select(Phi::ALL.to_vec()),
        a in rational_terms(),
        b in rational_terms(),
        g in (prop::collection::vec(0u32..100, 0..3), prop::collection::vec(0u32..100, 0..3), 0u32..100),
        which in 0usize..100,
    ) {
        let k = Arc::new(FiniteField::of_order(q).unwrap());
        let kt = FunctionField::new(k.clone());
        let places = places_up_to(&k, 2, true).unwrap();
        let place = &places[which % places.len()];
        let sp = specializer();
        let target = sp.target(place.residue_field()).unwrap();
        let (xa, xb) = (formal_rational(&kt, &a), formal_rational(&kt, &b));
        let (ia, ib) = (sp.sp_phi(place, phi, &xa).unwrap(), sp.sp_phi(place, phi, &xb).unwrap());
        let lifted: Vec<BigInt> = target.group().lift(&ia).iter().zip(target.group().lift(&ib)).map(|(x, y)| x + y).collect();
        prop_assert_eq!(sp.sp_phi(place, phi, &xa.add(&xb)).unwrap(), target.normal_form(&lifted));

        let g = rational_unit(&kt, &g.0, &g.1, g.2);
        let sign = phi.sign(place.valuation(&g).unwrap());
        prop_assert_eq!(sp.sp_phi(place, phi, &xa.translate(&kt, &g)).unwrap(), target.scale_canonical(&ia, sign));
    }
}

#[test]
fn plain_and_refined_share_generator_layout() {
    for q in SMALL {
        let k = Arc::new(FiniteField::of_order(q).unwrap());
        let p = PreBloch::new(k.clone());
        let rp = refined(q);
        assert_eq!(p.group().generator_count(), (q - 1) as usize);
        assert_eq!(rp.group().generator_count(), 2 * (q - 1) as usize);
        for a in k.units() {
            assert_eq!(rp.generator(1, a), p.generator(0, a) + (q - 1) as usize);
        }
    }
}

#[test]
fn constants_specialize_through_every_linear_place() {
    let k = Arc::new(FiniteField::of_order(7).unwrap());
    let kt = FunctionField::new(k.clone());
    let sp = Specializer::new();
    let c = kt.constant(k.from_int(3));
    let xi = FormalBlochElement::symbol(1, kt.one(), c);
    let mut images = Vec::new();
    for pi in enumerate_irreducibles(&k, 1) {
        let place = ValuedPlace::finite(k.clone(), pi).unwrap();
        images.push(sp.sp_phi(&place, Phi::Zero, &xi).unwrap());
    }
    // Every residue field is F_7 and the constant reduces to itself.
    assert!(images.windows(2).all(|w| w[0] == w[1]));
}
