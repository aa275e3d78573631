//! Small algebras and modules used throughout: `Z`, `Z[C_2]`, the dual
//! numbers, `Z x Z`, and the lower-triangular 2x2 integer matrices.

use std::sync::Arc;

use crate::algebra::{AlgModule, Algebra};
use crate::linalg::{BaseRing, FgModule, Matrix};

pub fn integers() -> Algebra {
    Algebra::from_table(&BaseRing::Integers, &[vec![vec![1]]], &[1]).expect("shape")
}

/// `Z[C_2]` on `{1, g}` with `g^2 = 1`.
pub fn group_ring_c2() -> Algebra {
    let t = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![1, 0]]];
    Algebra::from_table(&BaseRing::Integers, &t, &[1, 0]).expect("shape")
}

/// `Z[ε]/(ε²)` on `{1, ε}`.
pub fn dual_numbers() -> Algebra {
    let t = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 0]]];
    Algebra::from_table(&BaseRing::Integers, &t, &[1, 0]).expect("shape")
}

/// `Z x Z` on the idempotents `{(1,0), (0,1)}`.
pub fn product_zz() -> Algebra {
    let t = vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 0], vec![0, 1]]];
    Algebra::from_table(&BaseRing::Integers, &t, &[1, 1]).expect("shape")
}

/// Lower-triangular 2x2 integer matrices on `{e11, e21, e22}`.
pub fn lower_triangular() -> Algebra {
    let z = [0, 0, 0];
    let (e11, e21, e22) = ([1, 0, 0], [0, 1, 0], [0, 0, 1]);
    let t: Vec<Vec<Vec<i64>>> = [[e11, z, z], [e21, z, z], [z, e21, e22]]
        .iter()
        .map(|row| row.iter().map(|v| v.to_vec()).collect())
        .collect();
    Algebra::from_table(&BaseRing::Integers, &t, &[1, 0, 1]).expect("shape")
}

/// `Z/a_1 ⊕ ... ⊕ Z/a_k` over an algebra of rank one (`0` is a free summand).
pub fn z_module(z: &Arc<Algebra>, orders: &[i64]) -> AlgModule {
    let b = z.base();
    let u = FgModule::from_orders(b, orders);
    AlgModule::new(z, u, vec![Matrix::identity(b, orders.len())]).expect("shape")
}

fn rank_one(a: &Arc<Algebra>, acts: &[i64]) -> AlgModule {
    let b = a.base();
    let actions = acts.iter().map(|&v| Matrix::from_rows(b, &[vec![v]])).collect();
    AlgModule::new(a, FgModule::free(b, 1), actions).expect("shape")
}

/// `Z` with `g` acting trivially.
pub fn c2_trivial(c2: &Arc<Algebra>) -> AlgModule {
    rank_one(c2, &[1, 1])
}

/// `Z` with `g` acting by `-1`.
pub fn c2_sign(c2: &Arc<Algebra>) -> AlgModule {
    rank_one(c2, &[1, -1])
}

/// `Z` with `ε` acting as zero.
pub fn dual_residue(d: &Arc<Algebra>) -> AlgModule {
    rank_one(d, &[1, 0])
}

/// `P_1 = Λ e22`, rank one.
pub fn tri_p1(t: &Arc<Algebra>) -> AlgModule {
    rank_one(t, &[0, 0, 1])
}

/// `P_2 = Λ e11` on `{e11, e21}`; it contains `P_1 ≅ Z e21`.
pub fn tri_p2(t: &Arc<Algebra>) -> AlgModule {
    let b = t.base();
    let actions = vec![
        Matrix::from_rows(b, &[vec![1, 0], vec![0, 0]]),
        Matrix::from_rows(b, &[vec![0, 0], vec![1, 0]]),
        Matrix::from_rows(b, &[vec![0, 0], vec![0, 1]]),
    ];
    AlgModule::new(t, FgModule::free(b, 2), actions).expect("shape")
}

/// `P_2 / P_1`: `Z` with `e11` acting as one.
pub fn tri_s2(t: &Arc<Algebra>) -> AlgModule {
    rank_one(t, &[1, 0, 0])
}

/// The tilting module `P_2 ⊕ P_2/P_1`.
pub fn tri_tilting(t: &Arc<Algebra>) -> AlgModule {
    tri_p2(t).direct_sum(&tri_s2(t)).expect("same algebra")
}
