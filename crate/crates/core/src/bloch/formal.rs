//! Formal sums `Σ n_i ⟨g_i⟩[a_i]` and their text format.
//!
//! ```text
//! element := '0' | ['+' | '-'] term (('+' | '-') term)*
//! term    := [int '*'] coeff* '[' expr ']'
//! coeff   := '<' expr '>' | '<<' expr '>>' | '<n>'
//! ```
//!
//! `<n>` is the nonsquare constant class (the fixed primitive element),
//! `<<g>>` expands to `<g> - 1`, and adjacent coefficients multiply.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::fields::{
    parse_finite, parse_rational, FieldError, FiniteField, Fq, FunctionField, FunctionFieldElement,
};

/// Field operations needed to hold and parse formal elements.
pub trait ElementField {
    type Elem: Clone + Ord + Debug;

    fn parse_at(&self, text: &str, offset: usize) -> Result<Self::Elem, FieldError>;
    fn one(&self) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn nonsquare(&self) -> Self::Elem;
    fn render(&self, a: &Self::Elem) -> String;
    /// Canonical representative of the square class of `a`, when square
    /// classes are finite in number.
    fn class_representative(&self, a: &Self::Elem) -> Self::Elem;
}

impl ElementField for Arc<FiniteField> {
    type Elem = Fq;

    fn parse_at(&self, text: &str, offset: usize) -> Result<Fq, FieldError> {
        parse_finite(self, text, offset)
    }

    fn one(&self) -> Fq {
        Fq::ONE
    }

    fn mul(&self, a: &Fq, b: &Fq) -> Fq {
        FiniteField::mul(self, *a, *b)
    }

    fn is_zero(&self, a: &Fq) -> bool {
        a.is_zero()
    }

    fn nonsquare(&self) -> Fq {
        self.primitive()
    }

    fn render(&self, a: &Fq) -> String {
        self.format(*a)
    }

    fn class_representative(&self, a: &Fq) -> Fq {
        if self.is_square(*a).expect("nonzero class word") {
            Fq::ONE
        } else {
            self.primitive()
        }
    }
}

impl ElementField for FunctionField {
    type Elem = FunctionFieldElement;

    fn parse_at(&self, text: &str, offset: usize) -> Result<FunctionFieldElement, FieldError> {
        parse_rational(self, text, offset)
    }

    fn one(&self) -> FunctionFieldElement {
        FunctionField::one(self)
    }

    fn mul(&self, a: &FunctionFieldElement, b: &FunctionFieldElement) -> FunctionFieldElement {
        FunctionField::mul(self, a, b)
    }

    fn is_zero(&self, a: &FunctionFieldElement) -> bool {
        a.is_zero()
    }

    fn nonsquare(&self) -> FunctionFieldElement {
        self.constant(self.constants().primitive())
    }

    fn render(&self, a: &FunctionFieldElement) -> String {
        self.format(a)
    }

    fn class_representative(&self, a: &FunctionFieldElement) -> FunctionFieldElement {
        a.clone()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalTerm<E> {
    pub coeff: BigInt,
    /// Square-class word `g` of `⟨g⟩`.
    pub class: E,
    /// Argument `a` of `[a]`, never zero.
    pub arg: E,
}

/// A finite formal sum `Σ n_i ⟨g_i⟩[a_i]` with like terms merged, zero
/// coefficients dropped, and terms sorted by `(class, arg)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FormalBlochElement<E> {
    terms: Vec<FormalTerm<E>>,
}

impl<E: Clone + Ord> Default for FormalBlochElement<E> {
    fn default() -> Self {
        FormalBlochElement { terms: Vec::new() }
    }
}

impl<E: Clone + Ord> FormalBlochElement<E> {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms(terms: impl IntoIterator<Item = FormalTerm<E>>) -> Self {
        let mut acc: BTreeMap<(E, E), BigInt> = BTreeMap::new();
        for t in terms {
            *acc.entry((t.class, t.arg)).or_default() += t.coeff;
        }
        FormalBlochElement {
            terms: acc
                .into_iter()
                .filter(|(_, c)| !c.is_zero())
                .map(|((class, arg), coeff)| FormalTerm { coeff, class, arg })
                .collect(),
        }
    }

    /// `n·⟨g⟩[a]`
    pub fn symbol(coeff: impl Into<BigInt>, class: E, arg: E) -> Self {
        Self::from_terms([FormalTerm {
            coeff: coeff.into(),
            class,
            arg,
        }])
    }

    pub fn terms(&self) -> &[FormalTerm<E>] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        Self::from_terms(self.terms.iter().chain(&other.terms).cloned())
    }

    pub fn scale(&self, n: &BigInt) -> Self {
        Self::from_terms(self.terms.iter().map(|t| FormalTerm {
            coeff: &t.coeff * n,
            ..t.clone()
        }))
    }

    pub fn neg(&self) -> Self {
        self.scale(&BigInt::from(-1))
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }
}

impl<E: Clone + Ord> FormalBlochElement<E> {
    /// `⟨g⟩·ξ`
    pub fn translate<F: ElementField<Elem = E>>(&self, field: &F, g: &E) -> Self {
        Self::from_terms(self.terms.iter().map(|t| FormalTerm {
            class: field.mul(&t.class, g),
            ..t.clone()
        }))
    }

    /// `⟨⟨g⟩⟩·ξ = ⟨g⟩ξ - ξ`
    pub fn pfister<F: ElementField<Elem = E>>(&self, field: &F, g: &E) -> Self {
        self.translate(field, g).sub(self)
    }

    pub fn format<F: ElementField<Elem = E>>(&self, field: &F) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let one = field.one();
        let mut out = String::new();
        for (i, t) in self.terms.iter().enumerate() {
            let negative = t.coeff < BigInt::zero();
            let mag = if negative {
                -t.coeff.clone()
            } else {
                t.coeff.clone()
            };
            match (i, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if !mag.is_one() {
                out.push_str(&format!("{mag}*"));
            }
            if t.class != one {
                out.push_str(&format!("<{}>", field.render(&t.class)));
            }
            out.push_str(&format!("[{}]", field.render(&t.arg)));
        }
        out
    }

    /// Parses the text format; class words are replaced by canonical class
    /// representatives where the field has finitely many square classes.
    pub fn parse<F: ElementField<Elem = E>>(field: &F, text: &str) -> Result<Self, FieldError> {
        let trimmed = text.trim();
        if trimmed == "0" {
            return Ok(Self::zero());
        }
        let bytes = text.as_bytes();
        let mut i = 0;
        let mut terms = Vec::new();
        let skip_ws = |i: &mut usize| {
            while *i < bytes.len() && (bytes[*i] as char).is_whitespace() {
                *i += 1;
            }
        };
        let err = |pos: usize, m: &str| FieldError::Parse {
            pos,
            message: m.to_string(),
        };
        let mut first = true;
        loop {
            skip_ws(&mut i);
            if i >= bytes.len() {
                if first {
                    return Err(err(i, "empty element"));
                }
                break;
            }
            let mut sign = BigInt::one();
            match bytes[i] {
                b'+' => i += 1,
                b'-' => {
                    sign = -sign;
                    i += 1;
                }
                _ if !first => return Err(err(i, "expected `+` or `-` between terms")),
                _ => {}
            }
            first = false;
            skip_ws(&mut i);
            // Optional integer multiplier.
            let start = i;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            let mut coeff = sign;
            if i > start {
                let n: BigInt = text[start..i]
                    .parse()
                    .map_err(|_| err(start, "bad integer"))?;
                coeff *= n;
                skip_ws(&mut i);
                if i < bytes.len() && bytes[i] == b'*' {
                    i += 1;
                } else {
                    return Err(err(i, "expected `*` after an integer coefficient"));
                }
            }
            // Group ring coefficient as a list of (n, g).
            let mut ring: Vec<(BigInt, E)> = vec![(coeff, field.one())];
            loop {
                skip_ws(&mut i);
                if i >= bytes.len() {
                    return Err(err(i, "expected `<` or `[`"));
                }
                if bytes[i] == b'[' {
                    break;
                }
                if bytes[i] != b'<' {
                    return Err(err(i, "expected `<` or `[`"));
                }
                let pfister = bytes.get(i + 1) == Some(&b'<');
                let open = if pfister { 2 } else { 1 };
                let body_start = i + open;
                let close = text[body_start..]
                    .find('>')
                    .map(|j| body_start + j)
                    .ok_or_else(|| err(i, "unclosed `<`"))?;
                if pfister && bytes.get(close + 1) != Some(&b'>') {
                    return Err(err(close, "expected `>>`"));
                }
                let body = &text[body_start..close];
                let g = if body.trim() == "n" {
                    field.nonsquare()
                } else {
                    field.parse_at(body, body_start)?
                };
                if field.is_zero(&g) {
                    return Err(FieldError::ZeroDomain("square class"));
                }
                let factor: Vec<(BigInt, E)> = if pfister {
                    vec![(BigInt::one(), g), (BigInt::from(-1), field.one())]
                } else {
                    vec![(BigInt::one(), g)]
                };
                ring = ring
                    .iter()
                    .flat_map(|(n, h)| factor.iter().map(move |(m, g)| (n * m, field.mul(h, g))))
                    .collect();
                i = close + open;
            }
            let body_start = i + 1;
            let close = text[body_start..]
                .find(']')
                .map(|j| body_start + j)
                .ok_or_else(|| err(i, "unclosed `[`"))?;
            let arg = field.parse_at(&text[body_start..close], body_start)?;
            if field.is_zero(&arg) {
                return Err(FieldError::ZeroDomain("Bloch symbol"));
            }
            i = close + 1;
            terms.extend(ring.into_iter().map(|(coeff, class)| FormalTerm {
                coeff,
                class: field.class_representative(&class),
                arg: arg.clone(),
            }));
        }
        Ok(Self::from_terms(terms))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format_over_function_field() {
        let kt = FunctionField::new(Arc::new(FiniteField::new(5, 1).unwrap()));
        let xi = FormalBlochElement::parse(&kt, "[t] + <-1>[1/t] - 2*[t]").unwrap();
        assert_eq!(xi.format(&kt), "-[t] + <4>[1/t]");
        let again = FormalBlochElement::parse(&kt, &xi.format(&kt)).unwrap();
        assert_eq!(again, xi);
        let pf = FormalBlochElement::parse(&kt, "<<t>>[t+1]").unwrap();
        assert_eq!(pf.terms().len(), 2);
        assert!(FormalBlochElement::parse(&kt, "[t] - [t]")
            .unwrap()
            .is_zero());
        assert!(FormalBlochElement::parse(&kt, "0").unwrap().is_zero());
    }

    #[test]
    fn classes_reduce_over_finite_fields() {
        let k = Arc::new(FiniteField::new(5, 1).unwrap());
        let xi = FormalBlochElement::parse(&k, "<4>[2] + <3>[2] + <n>[2]").unwrap();
        // 4 is a square; 3 and the primitive element 2 are not.
        assert_eq!(xi.format(&k), "[2] + 2*<2>[2]");
    }

    #[test]
    fn parse_errors() {
        let k = Arc::new(FiniteField::new(5, 1).unwrap());
        assert!(FormalBlochElement::parse(&k, "[0]").is_err());
        assert!(FormalBlochElement::parse(&k, "<0>[2]").is_err());
        assert!(matches!(
            FormalBlochElement::parse(&k, "[2] [3]"),
            Err(FieldError::Parse { pos: 4, .. })
        ));
        assert!(FormalBlochElement::parse(&k, "3 [2]").is_err());
        assert!(FormalBlochElement::parse(&k, "[2").is_err());
        assert!(FormalBlochElement::parse(&k, "").is_err());
    }
}
