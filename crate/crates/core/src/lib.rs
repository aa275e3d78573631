//! Exact verification engine for classical tilting modules under the two
//! base changes `Λ -> Λ_x` and `Λ -> Λ/xΛ` at a central element `x`.
//!
//! Algebras are finite rank over one of the coefficient rings `Z`, `Z/N` or
//! `Z[1/c]`; modules are finitely presented with one action matrix per
//! algebra generator. Everything is computed exactly with Smith normal forms.

pub mod algebra;
pub mod basechange;
pub mod catalog;
pub mod error;
pub mod homalg;
pub mod linalg;
pub mod par;
pub mod tilting;

pub use error::{Error, Result};
