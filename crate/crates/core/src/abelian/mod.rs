//! Exact integer linear algebra and finitely presented abelian groups.

mod group;
mod hom;
mod lattice;
mod matrix;
mod snf;
mod sparse;

use thiserror::Error;

pub use group::{odd_part_big, FPGroup, GroupRecord, SnfRecord, Structure};
pub use hom::{FPHom, KernelImageCokernel};
pub use lattice::{preimage_lattice, Echelon};
pub use matrix::{IntMatrix, MatrixRecord, SPARSE_THRESHOLD};
pub use snf::{is_divisibility_chain, smith_normal_form, Snf};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AbelianError {
    #[error("relation width {found} does not match {expected} generators")]
    WidthMismatch { expected: usize, found: usize },
    #[error("vector length {found} does not match {expected} generators")]
    LengthMismatch { expected: usize, found: usize },
    #[error("homomorphism matrix is {rows}x{cols}, expected {source_gens}x{target_gens}")]
    HomShape {
        rows: usize,
        cols: usize,
        source_gens: usize,
        target_gens: usize,
    },
    #[error("not well-defined: source relation {relation} does not map into the target relations")]
    NotWellDefined { relation: usize },
    #[error("malformed group record: {0}")]
    MalformedRecord(&'static str),
}

/// `G ⊗ Z[1/2]`.
pub fn localize_away_2(g: &FPGroup) -> FPGroup {
    g.localize_away_2()
}
