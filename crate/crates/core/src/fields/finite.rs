use std::fmt;

use super::FieldError;

/// Largest field order for which log/antilog tables are built.
pub const MAX_ORDER: u64 = 1 << 22;

/// An element of a [`FiniteField`], stored as its packed coordinate vector
/// `c_0 + c_1 p + … + c_{f-1} p^{f-1}` in the polynomial basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Fq(pub(crate) u32);

impl Fq {
    pub const ZERO: Fq = Fq(0);
    pub const ONE: Fq = Fq(1);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

/// The field `F_p[x]/(m(x))` with `m` the lexicographically least monic
/// irreducible polynomial of degree `f`, together with a fixed primitive
/// element and Zech-logarithm tables.
#[derive(Clone)]
pub struct FiniteField {
    p: u64,
    degree: u32,
    q: u64,
    modulus: Vec<u64>,
    primitive: Fq,
    exp: Vec<u32>,
    log: Vec<u32>,
    // zech[l] = log(1 + u^l), or NONE when 1 + u^l = 0.
    zech: Vec<u32>,
}

const NONE: u32 = u32::MAX;

impl fmt::Debug for FiniteField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F{}", self.q)
    }
}

impl PartialEq for FiniteField {
    fn eq(&self, other: &Self) -> bool {
        self.p == other.p && self.degree == other.degree && self.modulus == other.modulus
    }
}

impl Eq for FiniteField {}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 1;
    }
    true
}

pub fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n % d == 0 {
            out.push(d);
            while n % d == 0 {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Splits a prime power `q = p^f`.
pub fn prime_power(q: u64) -> Option<(u64, u32)> {
    let ps = prime_factors(q);
    if ps.len() != 1 {
        return None;
    }
    let p = ps[0];
    let mut f = 0;
    let mut r = q;
    while r > 1 {
        r /= p;
        f += 1;
    }
    Some((p, f))
}

// Dense polynomial arithmetic over F_p used during construction only.
mod prime_poly {
    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let inv_lead = super::pow_mod(m[dm], p - 2, p);
        while r.len() > dm {
            let k = r.len() - 1 - dm;
            let c = r[r.len() - 1] * inv_lead % p;
            for (i, &mi) in m.iter().enumerate() {
                r[k + i] = (r[k + i] + p - c * mi % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(a: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut base = rem(a, m, p);
        let mut acc = vec![1u64];
        while e > 0 {
            if e & 1 == 1 {
                acc = mul_mod(&acc, &base, m, p);
            }
            base = mul_mod(&base, &base, m, p);
            e >>= 1;
        }
        acc
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Irreducibility of a monic polynomial of degree `d` by checking that
    /// it shares no factor with `x^{p^i} - x` for `i <= d/2`.
    pub fn is_irreducible(m: &[u64], p: u64) -> bool {
        let d = m.len() - 1;
        if d == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut h = x.clone();
        for _ in 1..=d / 2 {
            h = pow_mod(&h, p, m, p);
            let mut diff = h.clone();
            diff.resize(diff.len().max(2), 0);
            diff[1] = (diff[1] + p - 1) % p;
            let g = gcd(m, &diff, p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    acc
}

impl FiniteField {
    /// Builds `F_{p^f}`. Fields of characteristic two and fields with fewer
    /// than five elements are rejected.
    pub fn new(p: u64, f: u32) -> Result<Self, FieldError> {
        if !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        let q = p.checked_pow(f).ok_or(FieldError::TooLarge)?;
        if p == 2 || q < 5 {
            return Err(FieldError::Unsupported { p, f });
        }
        if q > MAX_ORDER {
            return Err(FieldError::TooLarge);
        }
        let modulus = Self::least_irreducible(p, f);
        let primitive = Self::least_primitive(p, f, q, &modulus);
        let mut field = FiniteField {
            p,
            degree: f,
            q,
            modulus,
            primitive,
            exp: vec![],
            log: vec![],
            zech: vec![],
        };
        field.build_tables();
        Ok(field)
    }

    pub fn of_order(q: u64) -> Result<Self, FieldError> {
        let (p, f) = prime_power(q).ok_or(FieldError::NotPrimePower(q))?;
        Self::new(p, f)
    }

    fn least_irreducible(p: u64, f: u32) -> Vec<u64> {
        let f = f as usize;
        // Lex order on (c_{f-1}, …, c_0), so the packed counter puts c_0
        // in the least significant digit.
        let count = p.pow(f as u32);
        for n in 0..count {
            let mut m: Vec<u64> = (0..f).map(|i| (n / p.pow(i as u32)) % p).collect();
            m.push(1);
            if f > 1 && m[0] == 0 {
                continue;
            }
            if prime_poly::is_irreducible(&m, p) {
                return m;
            }
        }
        unreachable!("irreducible polynomials exist in every degree")
    }

    fn unpack(p: u64, f: u32, n: u64) -> Vec<u64> {
        let mut v: Vec<u64> = (0..f).map(|i| (n / p.pow(i)) % p).collect();
        prime_poly::trim(&mut v);
        v
    }

    fn pack(p: u64, v: &[u64]) -> u64 {
        v.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    fn least_primitive(p: u64, f: u32, q: u64, m: &[u64]) -> Fq {
        let factors = prime_factors(q - 1);
        for n in 1..q {
            let a = Self::unpack(p, f, n);
            let primitive = factors
                .iter()
                .all(|&r| prime_poly::pow_mod(&a, (q - 1) / r, m, p) != vec![1]);
            if primitive {
                return Fq(n as u32);
            }
        }
        unreachable!("the multiplicative group of a finite field is cyclic")
    }

    fn build_tables(&mut self) {
        let (p, f, q) = (self.p, self.degree, self.q);
        let n = (q - 1) as usize;
        let mut exp = vec![0u32; n];
        let mut log = vec![NONE; q as usize];
        let u = Self::unpack(p, f, self.primitive.0 as u64);
        let mut cur = vec![1u64];
        for (k, slot) in exp.iter_mut().enumerate() {
            let idx = Self::pack(p, &cur) as u32;
            *slot = idx;
            log[idx as usize] = k as u32;
            cur = prime_poly::mul_mod(&cur, &u, &self.modulus, p);
        }
        self.exp = exp;
        self.log = log;
        let mut zech = vec![NONE; n];
        for (l, z) in zech.iter_mut().enumerate() {
            let s = self.add_digits(Fq::ONE, Fq(self.exp[l]));
            if !s.is_zero() {
                *z = self.log[s.0 as usize];
            }
        }
        self.zech = zech;
    }

    fn add_digits(&self, a: Fq, b: Fq) -> Fq {
        let (p, mut x, mut y) = (self.p, a.0 as u64, b.0 as u64);
        let mut out = 0u64;
        let mut place = 1u64;
        while x > 0 || y > 0 {
            out += ((x % p + y % p) % p) * place;
            x /= p;
            y /= p;
            place *= p;
        }
        Fq(out as u32)
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn order(&self) -> u64 {
        self.q
    }

    /// Defining polynomial over `F_p`, coefficients from low to high degree.
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    pub fn primitive(&self) -> Fq {
        self.primitive
    }

    /// The class of `x` in `F_p[x]/(m)`; equals a prime-field element when `f = 1`.
    pub fn generator(&self) -> Fq {
        if self.degree == 1 {
            Fq(((self.p - self.modulus[0]) % self.p) as u32)
        } else {
            Fq(self.p as u32)
        }
    }

    pub fn zero(&self) -> Fq {
        Fq::ZERO
    }

    pub fn one(&self) -> Fq {
        Fq::ONE
    }

    pub fn from_int(&self, n: i64) -> Fq {
        Fq(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_index(&self, n: u32) -> Fq {
        assert!((n as u64) < self.q, "element index out of range");
        Fq(n)
    }

    pub fn coords(&self, a: Fq) -> Vec<u64> {
        (0..self.degree)
            .map(|i| (a.0 as u64 / self.p.pow(i)) % self.p)
            .collect()
    }

    pub fn from_coords(&self, c: &[u64]) -> Fq {
        assert!(c.len() <= self.degree as usize, "too many coordinates");
        let v: Vec<u64> = c.iter().map(|x| x % self.p).collect();
        Fq(Self::pack(self.p, &v) as u32)
    }

    /// All elements in index order.
    pub fn elements(&self) -> impl Iterator<Item = Fq> + '_ {
        (0..self.q as u32).map(Fq)
    }

    /// Nonzero elements in index order.
    pub fn units(&self) -> impl Iterator<Item = Fq> + '_ {
        (1..self.q as u32).map(Fq)
    }

    pub fn exp(&self, k: u64) -> Fq {
        Fq(self.exp[(k % (self.q - 1)) as usize])
    }

    pub fn add(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() {
            return b;
        }
        if b.is_zero() {
            return a;
        }
        let n = self.q - 1;
        let la = self.log[a.0 as usize] as u64;
        let lb = self.log[b.0 as usize] as u64;
        let d = (lb + n - la) % n;
        match self.zech[d as usize] {
            NONE => Fq::ZERO,
            z => self.exp(la + z as u64),
        }
    }

    pub fn neg(&self, a: Fq) -> Fq {
        if a.is_zero() {
            return a;
        }
        let half = (self.q - 1) / 2;
        self.exp(self.log[a.0 as usize] as u64 + half)
    }

    pub fn sub(&self, a: Fq, b: Fq) -> Fq {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Fq, b: Fq) -> Fq {
        if a.is_zero() || b.is_zero() {
            return Fq::ZERO;
        }
        self.exp(self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64)
    }

    pub fn inv(&self, a: Fq) -> Result<Fq, FieldError> {
        if a.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        let n = self.q - 1;
        Ok(self.exp((n - self.log[a.0 as usize] as u64) % n))
    }

    pub fn div(&self, a: Fq, b: Fq) -> Result<Fq, FieldError> {
        Ok(self.mul(a, self.inv(b)?))
    }

    pub fn pow(&self, a: Fq, e: i64) -> Result<Fq, FieldError> {
        if a.is_zero() {
            return match e {
                0 => Ok(Fq::ONE),
                e if e > 0 => Ok(Fq::ZERO),
                _ => Err(FieldError::DivisionByZero),
            };
        }
        let n = (self.q - 1) as i128;
        let k = (self.log[a.0 as usize] as i128 * e as i128).rem_euclid(n);
        Ok(self.exp(k as u64))
    }

    /// Exponent `k` in `Z/(q-1)` with `u^k = a` for the fixed primitive element `u`.
    pub fn discrete_log(&self, a: Fq) -> Result<u64, FieldError> {
        if a.is_zero() {
            return Err(FieldError::ZeroDomain("discrete logarithm"));
        }
        Ok(self.log[a.0 as usize] as u64)
    }

    pub fn is_square(&self, a: Fq) -> Result<bool, FieldError> {
        Ok(self.discrete_log(a)? % 2 == 0)
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frobenius(&self, a: Fq) -> Fq {
        self.pow(a, self.p as i64).expect("nonnegative exponent")
    }

    /// Renders an element: an integer in `[0, p)` for prime fields, a
    /// polynomial in `a` otherwise.
    pub fn format(&self, x: Fq) -> String {
        if self.degree == 1 {
            return x.0.to_string();
        }
        let c = self.coords(x);
        let terms: Vec<String> = (0..c.len())
            .rev()
            .filter(|&i| c[i] != 0)
            .map(|i| match (i, c[i]) {
                (0, c) => c.to_string(),
                (1, 1) => "a".to_string(),
                (1, c) => format!("{c}*a"),
                (i, 1) => format!("a^{i}"),
                (i, c) => format!("{c}*a^{i}"),
            })
            .collect();
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    /// True if [`FiniteField::format`] yields more than a single token.
    pub fn is_compound(&self, x: Fq) -> bool {
        self.degree > 1 && self.coords(x).iter().filter(|&&c| c != 0).count() > 1
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn f5_primitive_is_two() {
        let k = FiniteField::new(5, 1).unwrap();
        assert_eq!(k.primitive(), k.from_int(2));
        assert_eq!(k.discrete_log(k.from_int(4)).unwrap(), 2);
        assert_eq!(k.discrete_log(k.from_int(3)).unwrap(), 3);
        assert_eq!(k.discrete_log(k.one()).unwrap(), 0);
        assert!(k.discrete_log(k.zero()).is_err());
    }

    #[test]
    fn f9_modulus_is_least_irreducible_quadratic() {
        let k = FiniteField::new(3, 2).unwrap();
        // Lex order: x^2, x^2+1, ...; x^2+1 is the first irreducible one.
        assert_eq!(k.modulus(), &[1, 0, 1]);
        let a = k.generator();
        assert_eq!(k.mul(a, a), k.from_int(-1));
    }

    #[test]
    fn rejected_fields() {
        assert!(matches!(
            FiniteField::new(2, 3),
            Err(FieldError::Unsupported { .. })
        ));
        assert!(matches!(
            FiniteField::new(3, 1),
            Err(FieldError::Unsupported { .. })
        ));
        assert!(matches!(
            FiniteField::new(9, 1),
            Err(FieldError::NotPrime(9))
        ));
        assert!(matches!(
            FiniteField::of_order(12),
            Err(FieldError::NotPrimePower(12))
        ));
    }

    #[test]
    fn prime_field_arithmetic_matches_integers() {
        let k = FiniteField::new(13, 1).unwrap();
        for a in 0..13i64 {
            for b in 0..13i64 {
                let (x, y) = (k.from_int(a), k.from_int(b));
                assert_eq!(k.add(x, y), k.from_int(a + b));
                assert_eq!(k.sub(x, y), k.from_int(a - b));
                assert_eq!(k.mul(x, y), k.from_int(a * b));
            }
        }
    }

    #[test]
    fn formatting() {
        let k = FiniteField::new(3, 2).unwrap();
        let a = k.generator();
        assert_eq!(k.format(a), "a");
        assert_eq!(k.format(k.add(k.mul(k.from_int(2), a), k.one())), "2*a+1");
        assert!(k.is_compound(k.add(a, k.one())));
    }
}
