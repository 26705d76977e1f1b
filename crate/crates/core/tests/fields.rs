use std::sync::Arc;

use proptest::prelude::*;

use rbloch_core::fields::{
    enumerate_irreducibles, factor, irreducible_count, is_irreducible, parse_finite,
    parse_rational, FiniteField, Fq, FunctionField, FunctionFieldElement, Poly, ValuedPlace,
};

const ORDERS: [u64; 9] = [5, 7, 9, 11, 13, 25, 27, 49, 125];

/// Product in `F_p[x]/(m)` by schoolbook convolution, independent of the
/// field's log tables.
fn naive_mul(k: &FiniteField, a: Fq, b: Fq) -> Fq {
    let (p, m) = (k.characteristic(), k.modulus().to_vec());
    let f = k.degree() as usize;
    let (ca, cb) = (k.coords(a), k.coords(b));
    let mut prod = vec![0u64; 2 * f];
    for (i, x) in ca.iter().enumerate() {
        for (j, y) in cb.iter().enumerate() {
            prod[i + j] = (prod[i + j] + x * y) % p;
        }
    }
    for d in (f..2 * f).rev() {
        let c = prod[d];
        if c != 0 {
            for (i, mi) in m.iter().enumerate().take(f) {
                prod[d - f + i] = (prod[d - f + i] + (p - c) * mi % p) % p;
            }
            prod[d] = 0;
        }
    }
    prod.truncate(f);
    k.from_coords(&prod)
}

fn field() -> impl Strategy<Value = Arc<FiniteField>> {
    prop::sample::select(ORDERS.to_vec()).prop_map(|q| Arc::new(FiniteField::of_order(q).unwrap()))
}

fn with_elements(n: usize) -> impl Strategy<Value = (Arc<FiniteField>, Vec<Fq>)> {
    field().prop_flat_map(move |k| {
        let q = k.order() as u32;
        let k2 = k.clone();
        (
            Just(k),
            prop::collection::vec(0..q, n)
                .prop_map(move |v| v.into_iter().map(|i| k2.from_index(i)).collect()),
        )
    })
}

fn small_poly(k: &FiniteField, coeffs: &[u32]) -> Poly {
    let q = k.order() as u32;
    Poly::new(coeffs.iter().map(|&c| k.from_index(c % q)).collect())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn field_axioms((k, v) in with_elements(3)) {
        let (a, b, c) = (v[0], v[1], v[2]);
        prop_assert_eq!(k.mul(a, b), naive_mul(&k, a, b));
        prop_assert_eq!(k.add(a, b), k.add(b, a));
        prop_assert_eq!(k.add(k.add(a, b), c), k.add(a, k.add(b, c)));
        prop_assert_eq!(k.mul(k.mul(a, b), c), k.mul(a, k.mul(b, c)));
        prop_assert_eq!(k.mul(a, k.add(b, c)), k.add(k.mul(a, b), k.mul(a, c)));
        prop_assert_eq!(k.add(a, k.neg(a)), k.zero());
        prop_assert_eq!(k.sub(k.add(a, b), b), a);
        if !a.is_zero() {
            prop_assert_eq!(k.mul(a, k.inv(a).unwrap()), k.one());
            prop_assert_eq!(k.pow(a, k.order() as i64 - 1).unwrap(), k.one());
            prop_assert_eq!(k.exp(k.discrete_log(a).unwrap()), a);
            let sq = k.pow(a, (k.order() as i64 - 1) / 2).unwrap() == k.one();
            prop_assert_eq!(k.is_square(a).unwrap(), sq);
        } else {
            prop_assert!(k.inv(a).is_err());
        }
        prop_assert_eq!(k.frobenius(k.add(a, b)), k.add(k.frobenius(a), k.frobenius(b)));
        prop_assert_eq!(k.frobenius(k.mul(a, b)), k.mul(k.frobenius(a), k.frobenius(b)));
    }

    #[test]
    fn format_parse_round_trip((k, v) in with_elements(1)) {
        let text = k.format(v[0]);
        prop_assert_eq!(parse_finite(&k, &text, 0).unwrap(), v[0]);
    }

    #[test]
    fn factorization_reconstructs(
        k in prop::sample::select(vec![5u64, 7, 9, 11]).prop_map(|q| FiniteField::of_order(q).unwrap()),
        coeffs in prop::collection::vec(0u32..200, 2..8),
    ) {
        let f = small_poly(&k, &coeffs);
        prop_assume!(!f.is_zero());
        let fac = factor(&k, &f);
        let mut prod = Poly::constant(fac.unit);
        for (g, e) in &fac.factors {
            prop_assert!(g.is_monic());
            prop_assert!(is_irreducible(&k, g));
            prod = prod.mul(&k, &g.pow(&k, u64::from(*e)));
        }
        prop_assert_eq!(prod, f);
    }

    #[test]
    fn valuation_and_reduction(
        q in prop::sample::select(vec![5u64, 7, 9]),
        a in prop::collection::vec(0u32..100, 1..5),
        b in prop::collection::vec(0u32..100, 1..5),
        c in prop::collection::vec(0u32..100, 1..4),
        which in 0usize..64,
    ) {
        let k = Arc::new(FiniteField::of_order(q).unwrap());
        let kt = FunctionField::new(k.clone());
        let mut places: Vec<ValuedPlace> = enumerate_irreducibles(&k, 2)
            .into_iter()
            .map(|pi| ValuedPlace::finite(k.clone(), pi).unwrap())
            .collect();
        places.push(ValuedPlace::infinite(k.clone()).unwrap());
        let v = &places[which % places.len()];
        let mk = |n: &[u32], d: &[u32]| -> Option<FunctionFieldElement> {
            let (n, d) = (small_poly(&k, n), small_poly(&k, d));
            if n.is_zero() || d.is_zero() { None } else { kt.fraction(n, d).ok() }
        };
        let (Some(x), Some(y)) = (mk(&a, &c), mk(&b, &[1])) else { return Ok(()) };
        let xy = kt.mul(&x, &y);
        prop_assert_eq!(v.valuation(&xy).unwrap(), v.valuation(&x).unwrap() + v.valuation(&y).unwrap());
        if v.valuation(&x).unwrap() == 0 && v.valuation(&y).unwrap() == 0 {
            let r = v.residue_field();
            prop_assert_eq!(v.reduce(&xy).unwrap(), r.mul(v.reduce(&x).unwrap(), v.reduce(&y).unwrap()));
        }
        let text = kt.format(&x);
        prop_assert_eq!(parse_rational(&kt, &text, 0).unwrap(), x);
    }
}

#[test]
fn degree_formula_and_enumeration() {
    for q in [5u64, 7, 9, 11, 13, 25, 27] {
        for n in 1..=4u32 {
            let total: u64 = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| u64::from(d) * irreducible_count(q, d))
                .sum();
            assert_eq!(total, q.pow(n), "q = {q}, n = {n}");
        }
    }
    for (q, max) in [(5u64, 4usize), (7, 3), (9, 3), (25, 2)] {
        let k = FiniteField::of_order(q).unwrap();
        let all = enumerate_irreducibles(&k, max);
        for d in 1..=max {
            let n = all.iter().filter(|p| p.degree() == Some(d)).count() as u64;
            assert_eq!(n, irreducible_count(q, d as u32), "q = {q}, d = {d}");
        }
    }
    assert_eq!(irreducible_count(3, 3), 8);
}

#[test]
fn residue_field_sizes() {
    let k = Arc::new(FiniteField::of_order(5).unwrap());
    for pi in enumerate_irreducibles(&k, 3) {
        let d = pi.degree().unwrap();
        let v = ValuedPlace::finite(k.clone(), pi).unwrap();
        assert_eq!(v.residue_field().order(), 5u64.pow(d as u32));
    }
    assert_eq!(ValuedPlace::infinite(k).unwrap().residue_field().order(), 5);
}
