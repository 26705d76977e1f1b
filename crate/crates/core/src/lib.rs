//! Exact computations with scissors congruence groups.
//!
//! The crate builds pre-Bloch groups, refined pre-Bloch and Bloch groups and
//! Grothendieck-Witt rings of finite fields as finitely presented abelian
//! groups, and evaluates specialization maps from the rational function field
//! `F_q(t)` to residue fields.

pub mod abelian;
pub mod bloch;
pub mod exec;
pub mod fields;
pub mod gw;
pub mod specialize;

pub use exec::Exec;
