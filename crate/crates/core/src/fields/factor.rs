//! Factorization and irreducibility over `F_q`.
//!
//! Cantor–Zassenhaus (square-free split, distinct-degree split, then
//! randomized equal-degree splitting) with a ChaCha generator on a fixed
//! seed. When the random splitting stalls on a polynomial of degree at most
//! four, trial division by low-degree irreducibles finishes the job.

use num_bigint::BigUint;
use num_traits::One;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::finite::{prime_factors, FiniteField, Fq};
use super::poly::{field_power, Poly};
use crate::exec::Exec;

const SEED: u64 = 0x5eed_cafe;
const SPLIT_ATTEMPTS: usize = 64;

/// Monic irreducible factors with multiplicities, sorted by [`Poly::lex_key`],
/// plus the leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Factorization {
    pub unit: Fq,
    pub factors: Vec<(Poly, u32)>,
}

pub fn factor(k: &FiniteField, f: &Poly) -> Factorization {
    assert!(!f.is_zero(), "cannot factor the zero polynomial");
    let unit = f.leading();
    let mut factors = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (sf, mult) in squarefree(k, &f.monic(k)) {
        for (g, d) in distinct_degree(k, &sf) {
            for h in equal_degree(k, &g, d, &mut rng) {
                factors.push((h, mult));
            }
        }
    }
    factors.sort_by_key(|(p, _)| p.lex_key());
    Factorization { unit, factors }
}

/// Square-free decomposition of a monic polynomial: pairs `(g, m)` with the
/// `g` square-free and pairwise coprime and `f = ∏ g^m`.
pub fn squarefree(k: &FiniteField, f: &Poly) -> Vec<(Poly, u32)> {
    let mut out = Vec::new();
    squarefree_into(k, f, 1, &mut out);
    out
}

fn squarefree_into(k: &FiniteField, f: &Poly, scale: u32, out: &mut Vec<(Poly, u32)>) {
    if f.degree().unwrap_or(0) == 0 {
        return;
    }
    let p = k.characteristic();
    let d = f.derivative(k);
    if d.is_zero() {
        squarefree_into(k, &pth_root(k, f), scale * p as u32, out);
        return;
    }
    let mut c = f.gcd(k, &d);
    let mut w = f.div_rem(k, &c).0;
    let mut i = 1;
    while !w.is_one() {
        let y = w.gcd(k, &c);
        let z = w.div_rem(k, &y).0;
        if z.degree().unwrap_or(0) > 0 {
            out.push((z, i * scale));
        }
        i += 1;
        w = y;
        c = c.div_rem(k, &w).0;
    }
    if c.degree().unwrap_or(0) > 0 {
        squarefree_into(k, &pth_root(k, &c), scale * p as u32, out);
    }
}

// For f(t) = g(t^p): returns g with coefficients replaced by their p-th roots.
fn pth_root(k: &FiniteField, f: &Poly) -> Poly {
    let p = k.characteristic() as usize;
    let root_exp = (k.order() / k.characteristic()) as i64;
    let coeffs = f
        .coeffs()
        .iter()
        .step_by(p)
        .map(|&c| k.pow(c, root_exp).expect("nonnegative"))
        .collect();
    Poly::new(coeffs)
}

/// Distinct-degree factorization of a monic square-free polynomial.
pub fn distinct_degree(k: &FiniteField, f: &Poly) -> Vec<(Poly, usize)> {
    let q = BigUint::from(k.order());
    let t = Poly::t();
    let mut out = Vec::new();
    let mut rest = f.clone();
    let mut h = t.clone();
    let mut d = 0;
    while rest.degree().unwrap_or(0) >= 2 * (d + 1) {
        d += 1;
        h = h.pow_mod(k, &q, &rest);
        let g = rest.gcd(k, &h.sub(k, &t));
        if !g.is_one() {
            rest = rest.div_rem(k, &g).0;
            h = h.rem(k, &rest);
            out.push((g, d));
        }
    }
    if let Some(deg) = rest.degree().filter(|&n| n > 0) {
        out.push((rest, deg));
    }
    out
}

fn equal_degree(k: &FiniteField, f: &Poly, d: usize, rng: &mut ChaCha8Rng) -> Vec<Poly> {
    let n = f.degree().expect("nonzero");
    if n == d {
        return vec![f.clone()];
    }
    let e = (field_power(k.order(), d) - BigUint::one()) >> 1;
    for _ in 0..SPLIT_ATTEMPTS {
        let a = Poly::new(
            (0..n)
                .map(|_| k.from_index(rng.gen_range(0..k.order() as u32)))
                .collect(),
        );
        if a.degree().unwrap_or(0) == 0 {
            continue;
        }
        let b = a.pow_mod(k, &e, f).sub(k, &Poly::one());
        let g = f.gcd(k, &b);
        let gd = g.degree().unwrap_or(0);
        if gd > 0 && gd < n {
            let mut left = equal_degree(k, &g, d, rng);
            left.extend(equal_degree(k, &f.div_rem(k, &g).0, d, rng));
            return left;
        }
    }
    if n <= 4 {
        return trial_division(k, f);
    }
    panic!("equal-degree splitting failed after {SPLIT_ATTEMPTS} attempts on a degree {n} input");
}

/// Factors a monic polynomial of degree at most four by dividing out
/// irreducibles of degree at most two.
pub fn trial_division(k: &FiniteField, f: &Poly) -> Vec<Poly> {
    let mut rest = f.monic(k);
    let mut out = Vec::new();
    for pi in enumerate_irreducibles_with(k, 2, Exec::Sequential) {
        if rest.degree().unwrap_or(0) < 2 * pi.degree().unwrap() {
            break;
        }
        loop {
            let (q, r) = rest.div_rem(k, &pi);
            if !r.is_zero() {
                break;
            }
            out.push(pi.clone());
            rest = q;
        }
    }
    if rest.degree().unwrap_or(0) > 0 {
        out.push(rest);
    }
    out
}

/// Rabin's irreducibility test.
pub fn is_irreducible(k: &FiniteField, f: &Poly) -> bool {
    let Some(n) = f.degree() else { return false };
    if n == 0 {
        return false;
    }
    if n == 1 {
        return true;
    }
    let f = f.monic(k);
    let t = Poly::t();
    if t.pow_mod(k, &field_power(k.order(), n), &f) != t.rem(k, &f) {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|r| {
        let h = t.pow_mod(k, &field_power(k.order(), n / r as usize), &f);
        f.gcd(k, &h.sub(k, &t)).is_one()
    })
}

/// All monic irreducible polynomials of degree `1..=max_degree`, ordered by
/// degree and then by coefficients from the top down.
pub fn enumerate_irreducibles(k: &FiniteField, max_degree: usize) -> Vec<Poly> {
    enumerate_irreducibles_with(k, max_degree, Exec::default())
}

pub fn enumerate_irreducibles_with(k: &FiniteField, max_degree: usize, exec: Exec) -> Vec<Poly> {
    let q = k.order();
    let mut out = Vec::new();
    for d in 1..=max_degree {
        let count = q
            .checked_pow(d as u32)
            .expect("enumeration range overflows u64");
        let found: Vec<Option<Poly>> = exec.map_range(count as usize, |n| {
            let mut coeffs: Vec<Fq> = Vec::with_capacity(d + 1);
            let mut m = n as u64;
            for _ in 0..d {
                coeffs.push(k.from_index((m % q) as u32));
                m /= q;
            }
            coeffs.push(Fq::ONE);
            let f = Poly::new(coeffs);
            is_irreducible(k, &f).then_some(f)
        });
        out.extend(found.into_iter().flatten());
    }
    out
}

/// Number of monic irreducibles of degree `n` over `F_q` (necklace count).
pub fn irreducible_count(q: u64, n: u32) -> u64 {
    fn mobius(n: u32) -> i64 {
        let ps = prime_factors(n as u64);
        let mut m = n as u64;
        for &p in &ps {
            m /= p;
            if m % p == 0 {
                return 0;
            }
        }
        if ps.len() % 2 == 0 {
            1
        } else {
            -1
        }
    }
    let total: i64 = (1..=n)
        .filter(|d| n % d == 0)
        .map(|d| mobius(n / d) * q.pow(d) as i64)
        .sum();
    (total / n as i64) as u64
}
