//! Finite fields `F_q` (odd `q >= 5`), the rational function field `F_q(t)`,
//! its places, and the element expression parser.

mod factor;
mod finite;
mod parse;
mod place;
mod poly;
mod rational;
mod sqclass;

use thiserror::Error;

pub use factor::{
    distinct_degree, enumerate_irreducibles, enumerate_irreducibles_with, factor,
    irreducible_count, is_irreducible, squarefree, trial_division, Factorization,
};
pub use finite::{is_prime, prime_factors, prime_power, FiniteField, Fq, MAX_ORDER};
pub use parse::{parse_element, parse_finite, parse_rational, Element, FieldHeader};
pub use place::{PlaceKind, ValuedPlace};
pub use poly::{field_power, Poly};
pub use rational::{FunctionField, FunctionFieldElement};
pub use sqclass::{square_class_finite, square_class_rational, SquareClass};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FieldError {
    #[error(
        "unsupported field F_{p}^{f}: odd characteristic and at least 5 elements are required"
    )]
    Unsupported { p: u64, f: u32 },
    #[error("{0} is not prime")]
    NotPrime(u64),
    #[error("{0} is not a prime power")]
    NotPrimePower(u64),
    #[error("field order exceeds the supported table size")]
    TooLarge,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} of zero is undefined")]
    ZeroDomain(&'static str),
    #[error("element is not a unit at place {place} (valuation {valuation})")]
    NotUnit { valuation: i64, place: String },
    #[error("`{0}` is not a monic irreducible polynomial")]
    NotAPlace(String),
    #[error("no embedding of the constant field into the residue field")]
    Embedding,
    #[error("syntax error at position {pos}: {message}")]
    Parse { pos: usize, message: String },
    #[error("division by zero at position {pos}")]
    ParseDivisionByZero { pos: usize },
}
