use num_bigint::BigUint;
use num_traits::{One, Zero};

use super::finite::{FiniteField, Fq};

/// Dense univariate polynomial over a finite field, coefficients from low to
/// high degree with no trailing zeros. The field is passed to each operation.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Poly {
    coeffs: Vec<Fq>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly {
            coeffs: vec![Fq::ONE],
        }
    }

    pub fn constant(c: Fq) -> Self {
        Self::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Poly {
            coeffs: vec![Fq::ZERO, Fq::ONE],
        }
    }

    pub fn new(mut coeffs: Vec<Fq>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    /// `t - c` style linear polynomial `t + c`.
    pub fn linear(c: Fq) -> Self {
        Poly {
            coeffs: vec![c, Fq::ONE],
        }
    }

    pub fn coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs == [Fq::ONE]
    }

    /// Degree; the zero polynomial reports `None`.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Fq {
        self.coeffs.last().copied().unwrap_or(Fq::ZERO)
    }

    pub fn is_monic(&self) -> bool {
        self.leading() == Fq::ONE
    }

    pub fn coeff(&self, i: usize) -> Fq {
        self.coeffs.get(i).copied().unwrap_or(Fq::ZERO)
    }

    pub fn add(&self, k: &FiniteField, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| k.add(self.coeff(i), other.coeff(i)))
                .collect(),
        )
    }

    pub fn neg(&self, k: &FiniteField) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|&c| k.neg(c)).collect(),
        }
    }

    pub fn sub(&self, k: &FiniteField, other: &Poly) -> Poly {
        self.add(k, &other.neg(k))
    }

    pub fn scale(&self, k: &FiniteField, c: Fq) -> Poly {
        Poly::new(self.coeffs.iter().map(|&x| k.mul(x, c)).collect())
    }

    pub fn mul(&self, k: &FiniteField, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Fq::ZERO; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(a, b));
            }
        }
        Poly::new(out)
    }

    pub fn pow(&self, k: &FiniteField, mut e: u64) -> Poly {
        let mut base = self.clone();
        let mut acc = Poly::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(k, &base);
            }
            base = base.mul(k, &base);
            e >>= 1;
        }
        acc
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, k: &FiniteField, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = k.inv(d.leading()).expect("nonzero leading coefficient");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut q = vec![Fq::ZERO; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let c = k.mul(r[i], inv);
            if c.is_zero() {
                continue;
            }
            q[i - dd] = c;
            for (j, &dj) in d.coeffs.iter().enumerate() {
                r[i - dd + j] = k.sub(r[i - dd + j], k.mul(c, dj));
            }
        }
        (Poly::new(q), Poly::new(r))
    }

    pub fn rem(&self, k: &FiniteField, d: &Poly) -> Poly {
        self.div_rem(k, d).1
    }

    pub fn monic(&self, k: &FiniteField) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let inv = k.inv(self.leading()).expect("nonzero leading coefficient");
        self.scale(k, inv)
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(&self, k: &FiniteField, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let r = a.rem(k, &b);
            a = b;
            b = r;
        }
        a.monic(k)
    }

    pub fn derivative(&self, k: &FiniteField) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, &c)| k.mul(c, k.from_int((i as u64 % k.characteristic()) as i64)))
                .collect(),
        )
    }

    pub fn eval(&self, k: &FiniteField, x: Fq) -> Fq {
        self.coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| k.add(k.mul(acc, x), c))
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, k: &FiniteField, e: &BigUint, m: &Poly) -> Poly {
        let mut acc = Poly::one().rem(k, m);
        let base = self.rem(k, m);
        for i in (0..e.bits()).rev() {
            acc = acc.mul(k, &acc).rem(k, m);
            if e.bit(i) {
                acc = acc.mul(k, &base).rem(k, m);
            }
        }
        acc
    }

    /// Multiplicity of `pi` in `self` (self nonzero) and the cofactor.
    pub fn split_off(&self, k: &FiniteField, pi: &Poly) -> (u32, Poly) {
        let mut n = 0;
        let mut cur = self.clone();
        loop {
            let (q, r) = cur.div_rem(k, pi);
            if !r.is_zero() || cur.is_zero() {
                return (n, cur);
            }
            cur = q;
            n += 1;
        }
    }

    /// Canonical text: terms in decreasing degree joined by `+`, coefficients
    /// printed by the field.
    pub fn format(&self, k: &FiniteField) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut terms = Vec::new();
        for i in (0..self.coeffs.len()).rev() {
            let c = self.coeffs[i];
            if c.is_zero() {
                continue;
            }
            let var = match i {
                0 => String::new(),
                1 => "t".into(),
                i => format!("t^{i}"),
            };
            let term = if i == 0 {
                k.format(c)
            } else if c == Fq::ONE {
                var
            } else if k.is_compound(c) {
                format!("({})*{var}", k.format(c))
            } else {
                format!("{}*{var}", k.format(c))
            };
            terms.push(term);
        }
        terms.join("+")
    }

    pub fn term_count(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    /// Lexicographic key used to order monic polynomials: degree first, then
    /// coefficients from the top down.
    pub fn lex_key(&self) -> (usize, Vec<u32>) {
        (
            self.coeffs.len(),
            self.coeffs.iter().rev().map(|c| c.index()).collect(),
        )
    }
}

/// `q^d` as a big integer.
pub fn field_power(q: u64, d: usize) -> BigUint {
    let mut acc = BigUint::one();
    for _ in 0..d {
        acc *= q;
    }
    if acc.is_zero() {
        BigUint::one()
    } else {
        acc
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k5() -> FiniteField {
        FiniteField::new(5, 1).unwrap()
    }

    fn p(k: &FiniteField, c: &[i64]) -> Poly {
        Poly::new(c.iter().map(|&x| k.from_int(x)).collect())
    }

    #[test]
    fn division_and_gcd() {
        let k = k5();
        let a = p(&k, &[-1, 0, 1]); // t^2 - 1
        let b = p(&k, &[-1, 1]); // t - 1
        let (q, r) = a.div_rem(&k, &b);
        assert_eq!(q, p(&k, &[1, 1]));
        assert!(r.is_zero());
        assert_eq!(a.gcd(&k, &p(&k, &[1, 1])), p(&k, &[1, 1]));
        assert_eq!(a.split_off(&k, &b).0, 1);
    }

    #[test]
    fn printing() {
        let k = k5();
        assert_eq!(p(&k, &[2, 0, 1]).format(&k), "t^2+2");
        assert_eq!(p(&k, &[0, 3]).format(&k), "3*t");
        assert_eq!(Poly::zero().format(&k), "0");
    }

    #[test]
    fn pow_mod_fermat() {
        let k = k5();
        let m = p(&k, &[2, 0, 1]); // t^2 + 2, irreducible mod 5
        let t = Poly::t();
        assert_eq!(t.pow_mod(&k, &field_power(5, 2), &m), t);
    }
}
