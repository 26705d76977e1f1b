use std::sync::Arc;

use super::finite::{FiniteField, Fq};
use super::poly::Poly;
use super::FieldError;

/// An element of `F_q(t)` in lowest terms with a monic denominator.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FunctionFieldElement {
    num: Poly,
    den: Poly,
}

impl FunctionFieldElement {
    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The constant value, if the element lies in `F_q`.
    pub fn as_constant(&self) -> Option<Fq> {
        (self.den.is_one() && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }
}

/// The rational function field `F_q(t)`.
#[derive(Clone, Debug)]
pub struct FunctionField {
    k: Arc<FiniteField>,
}

impl FunctionField {
    pub fn new(k: Arc<FiniteField>) -> Self {
        FunctionField { k }
    }

    pub fn constants(&self) -> &Arc<FiniteField> {
        &self.k
    }

    /// Normalizes `num/den`: cancels the gcd and makes the denominator monic.
    pub fn fraction(&self, num: Poly, den: Poly) -> Result<FunctionFieldElement, FieldError> {
        let k = &*self.k;
        if den.is_zero() {
            return Err(FieldError::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(self.zero());
        }
        let g = num.gcd(k, &den);
        let (num, den) = (num.div_rem(k, &g).0, den.div_rem(k, &g).0);
        let lead = k.inv(den.leading()).expect("nonzero");
        Ok(FunctionFieldElement {
            num: num.scale(k, lead),
            den: den.scale(k, lead),
        })
    }

    pub fn from_poly(&self, p: Poly) -> FunctionFieldElement {
        FunctionFieldElement {
            num: p,
            den: Poly::one(),
        }
    }

    pub fn constant(&self, c: Fq) -> FunctionFieldElement {
        self.from_poly(Poly::constant(c))
    }

    pub fn from_int(&self, n: i64) -> FunctionFieldElement {
        self.constant(self.k.from_int(n))
    }

    pub fn zero(&self) -> FunctionFieldElement {
        self.from_poly(Poly::zero())
    }

    pub fn one(&self) -> FunctionFieldElement {
        self.from_poly(Poly::one())
    }

    pub fn t(&self) -> FunctionFieldElement {
        self.from_poly(Poly::t())
    }

    pub fn add(&self, a: &FunctionFieldElement, b: &FunctionFieldElement) -> FunctionFieldElement {
        let k = &*self.k;
        let num = a.num.mul(k, &b.den).add(k, &b.num.mul(k, &a.den));
        self.fraction(num, a.den.mul(k, &b.den))
            .expect("nonzero denominator")
    }

    pub fn neg(&self, a: &FunctionFieldElement) -> FunctionFieldElement {
        FunctionFieldElement {
            num: a.num.neg(&self.k),
            den: a.den.clone(),
        }
    }

    pub fn sub(&self, a: &FunctionFieldElement, b: &FunctionFieldElement) -> FunctionFieldElement {
        self.add(a, &self.neg(b))
    }

    pub fn mul(&self, a: &FunctionFieldElement, b: &FunctionFieldElement) -> FunctionFieldElement {
        let k = &*self.k;
        self.fraction(a.num.mul(k, &b.num), a.den.mul(k, &b.den))
            .expect("nonzero denominator")
    }

    pub fn inv(&self, a: &FunctionFieldElement) -> Result<FunctionFieldElement, FieldError> {
        self.fraction(a.den.clone(), a.num.clone())
    }

    pub fn div(
        &self,
        a: &FunctionFieldElement,
        b: &FunctionFieldElement,
    ) -> Result<FunctionFieldElement, FieldError> {
        Ok(self.mul(a, &self.inv(b)?))
    }

    pub fn pow(
        &self,
        a: &FunctionFieldElement,
        e: i64,
    ) -> Result<FunctionFieldElement, FieldError> {
        let k = &*self.k;
        let base = if e < 0 { self.inv(a)? } else { a.clone() };
        let n = e.unsigned_abs();
        Ok(FunctionFieldElement {
            num: base.num.pow(k, n),
            den: base.den.pow(k, n),
        })
    }

    /// `1 - a`
    pub fn one_minus(&self, a: &FunctionFieldElement) -> FunctionFieldElement {
        self.sub(&self.one(), a)
    }

    /// Canonical text: `num` when the denominator is 1, otherwise the two
    /// sides divided, each parenthesized unless it is a single product.
    pub fn format(&self, a: &FunctionFieldElement) -> String {
        let k = &*self.k;
        let n = a.num.format(k);
        if a.den.is_one() {
            return n;
        }
        // A compound constant such as `a+1` is one term but still needs parentheses.
        let wrap = |s: String, strict: bool| {
            if s.contains('+') || (strict && s.contains('*')) {
                format!("({s})")
            } else {
                s
            }
        };
        format!("{}/{}", wrap(n, false), wrap(a.den.format(k), true))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cancellation_and_monic_denominator() {
        let k = Arc::new(FiniteField::new(5, 1).unwrap());
        let kt = FunctionField::new(k.clone());
        let t = kt.t();
        let one = kt.one();
        let a = kt
            .div(&kt.sub(&kt.mul(&t, &t), &one), &kt.sub(&t, &one))
            .unwrap();
        assert_eq!(kt.format(&a), "t+1");
        let b = kt.div(&one, &kt.mul(&kt.from_int(2), &t)).unwrap();
        assert_eq!(kt.format(&b), "3/t");
        assert!(kt.div(&one, &kt.zero()).is_err());
    }
}
