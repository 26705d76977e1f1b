use super::factor::factor;
use super::finite::{FiniteField, Fq};
use super::poly::Poly;
use super::rational::{FunctionField, FunctionFieldElement};
use super::FieldError;

/// Square class of a nonzero element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SquareClass {
    /// `F_q` with `q` odd: one bit, read from the parity of the discrete log.
    Finite { square: bool },
    /// `F_q(t)`: primes of odd valuation, and whether the ratio of leading
    /// coefficients is a square in `F_q`.
    Rational {
        odd_places: Vec<Poly>,
        leading_square: bool,
    },
}

impl SquareClass {
    pub fn is_square(&self) -> bool {
        match self {
            SquareClass::Finite { square } => *square,
            SquareClass::Rational {
                odd_places,
                leading_square,
            } => odd_places.is_empty() && *leading_square,
        }
    }
}

pub fn square_class_finite(k: &FiniteField, a: Fq) -> Result<SquareClass, FieldError> {
    Ok(SquareClass::Finite {
        square: k.is_square(a)?,
    })
}

pub fn square_class_rational(
    kt: &FunctionField,
    a: &FunctionFieldElement,
) -> Result<SquareClass, FieldError> {
    if a.is_zero() {
        return Err(FieldError::ZeroDomain("square class"));
    }
    let k = kt.constants();
    let mut odd: Vec<Poly> = Vec::new();
    for p in [a.numerator(), a.denominator()] {
        if p.degree().unwrap_or(0) == 0 {
            continue;
        }
        odd.extend(
            factor(k, p)
                .factors
                .into_iter()
                .filter(|(_, m)| m % 2 == 1)
                .map(|(g, _)| g),
        );
    }
    odd.sort_by_key(|g| g.lex_key());
    // Numerator and denominator are coprime, so no prime is listed twice.
    let leading = k.div(a.numerator().leading(), a.denominator().leading())?;
    Ok(SquareClass::Rational {
        odd_places: odd,
        leading_square: k.is_square(leading)?,
    })
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;

    #[test]
    fn examples() {
        let k = Arc::new(FiniteField::new(5, 1).unwrap());
        assert!(square_class_finite(&k, k.from_int(4)).unwrap().is_square());
        assert!(!square_class_finite(&k, k.from_int(2)).unwrap().is_square());
        let kt = FunctionField::new(k.clone());
        let t = kt.t();
        assert!(!square_class_rational(&kt, &t).unwrap().is_square());
        assert!(square_class_rational(&kt, &kt.mul(&t, &t))
            .unwrap()
            .is_square());
        let two_t2 = kt.mul(&kt.from_int(2), &kt.mul(&t, &t));
        assert_eq!(
            square_class_rational(&kt, &two_t2).unwrap(),
            SquareClass::Rational {
                odd_places: vec![],
                leading_square: false
            }
        );
        assert!(square_class_rational(&kt, &kt.zero()).is_err());
    }
}
