//! Exact linear algebra over `Z`, `Z/N` and `Z[1/c]`.

pub mod fgmod;
pub mod matrix;
pub mod ring;
pub mod smith;

pub use fgmod::{
    hom_fg, localize_fg, quotient_fg, FgModule, HomSpace, NormalForm, Subquotient,
};
pub use matrix::Matrix;
pub use ring::{BaseRing, Elem};
pub use smith::{cokernel_invariants, kernel, smith_normal_form, solve, solve_many, SmithDecomposition};
