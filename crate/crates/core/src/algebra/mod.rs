//! Finite-rank associative unital algebras given by structure constants,
//! their modules, and the two base changes at a central element.

mod change;
mod module;

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{kernel, solve, BaseRing, Elem, FgModule, Matrix};

pub use change::{
    localization_constant, localize_algebra, localize_module, quotient_algebra, quotient_module,
    Localization, Quotient,
};
pub use module::{is_regular_on, AlgModule, ModuleViolation, Regularity};

/// An algebra `R e_1 + ... + R e_g / relations` with `e_i e_j = Σ c_ij^k e_k`.
#[derive(Clone, Debug)]
pub struct Algebra {
    underlying: FgModule,
    mult: Vec<Vec<Vec<Elem>>>,
    one: Vec<Elem>,
    /// `left[i]` is left multiplication by `e_i` in coordinates.
    left: Vec<Matrix>,
}

impl PartialEq for Algebra {
    fn eq(&self, other: &Self) -> bool {
        self.underlying == other.underlying && self.mult == other.mult && self.one == other.one
    }
}

impl Eq for Algebra {}

/// A failed algebra identity, reported modulo the relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum AlgebraViolation {
    /// `(e_i e_j) e_k != e_i (e_j e_k)`.
    Associativity { i: usize, j: usize, k: usize },
    LeftUnit { i: usize },
    RightUnit { i: usize },
    /// Relation column `relation` multiplied by `e_generator` leaves the relation span.
    RelationNotIdeal { relation: usize, generator: usize, left: bool },
}

impl fmt::Display for AlgebraViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AlgebraViolation::Associativity { i, j, k } => {
                write!(f, "associativity fails on generators ({i}, {j}, {k})")
            }
            AlgebraViolation::LeftUnit { i } => write!(f, "one * e_{i} != e_{i}"),
            AlgebraViolation::RightUnit { i } => write!(f, "e_{i} * one != e_{i}"),
            AlgebraViolation::RelationNotIdeal { relation, generator, left } => {
                let side = if *left { "left" } else { "right" };
                write!(f, "relation {relation} times e_{generator} ({side}) is not a relation")
            }
        }
    }
}

impl Algebra {
    /// Builds an algebra after shape checks; use [`validate_algebra`] for the identities.
    pub fn new(underlying: FgModule, mult: Vec<Vec<Vec<Elem>>>, one: Vec<Elem>) -> Result<Self> {
        let g = underlying.gens();
        let base = underlying.base().clone();
        if mult.len() != g || mult.iter().any(|r| r.len() != g || r.iter().any(|v| v.len() != g)) {
            return Err(Error::Shape(format!("multiplication table must be {g}x{g} vectors of length {g}")));
        }
        if one.len() != g {
            return Err(Error::Shape(format!("unit vector must have length {g}")));
        }
        let left = (0..g).map(|i| Matrix::from_cols(&base, g, &mult[i])).collect();
        Ok(Algebra { underlying, mult, one, left })
    }

    /// Free underlying module with an integer table `table[i][j] = e_i e_j`.
    pub fn from_table(base: &BaseRing, table: &[Vec<Vec<i64>>], one: &[i64]) -> Result<Self> {
        let g = table.len();
        let mult = table
            .iter()
            .map(|row| row.iter().map(|v| v.iter().map(|&x| base.from_int(x)).collect()).collect())
            .collect();
        let one = one.iter().map(|&x| base.from_int(x)).collect();
        Self::new(FgModule::free(base, g), mult, one)
    }

    /// Same as [`Algebra::new`] but rejects tables failing [`validate_algebra`].
    pub fn checked(underlying: FgModule, mult: Vec<Vec<Vec<Elem>>>, one: Vec<Elem>) -> Result<Self> {
        let a = Self::new(underlying, mult, one)?;
        let v = validate_algebra(&a);
        if let Some(first) = v.first() {
            return Err(Error::Invalid(first.to_string()));
        }
        Ok(a)
    }

    pub fn base(&self) -> &BaseRing {
        self.underlying.base()
    }

    pub fn rank(&self) -> usize {
        self.underlying.gens()
    }

    pub fn underlying(&self) -> &FgModule {
        &self.underlying
    }

    pub fn relations(&self) -> &Matrix {
        self.underlying.relations()
    }

    pub fn table(&self) -> &[Vec<Vec<Elem>>] {
        &self.mult
    }

    pub fn one(&self) -> &[Elem] {
        &self.one
    }

    /// Whether the underlying presentation has no relations at all.
    pub fn is_free(&self) -> bool {
        self.relations().is_zero()
    }

    /// Left multiplication by the generator `e_i`.
    pub fn left_gen(&self, i: usize) -> &Matrix {
        &self.left[i]
    }

    pub fn basis_vector(&self, i: usize) -> Vec<Elem> {
        let b = self.base();
        (0..self.rank()).map(|k| if k == i { b.one() } else { b.zero() }).collect()
    }

    pub fn scalar(&self, m: i64) -> Vec<Elem> {
        self.scalar_big(&BigInt::from(m))
    }

    pub fn scalar_big(&self, m: &BigInt) -> Vec<Elem> {
        let b = self.base();
        let s = b.from_int(m.clone());
        self.one.iter().map(|x| b.mul(&s, x)).collect()
    }

    pub fn mul(&self, u: &[Elem], v: &[Elem]) -> Vec<Elem> {
        let b = self.base();
        let g = self.rank();
        let mut out = vec![b.zero(); g];
        for (i, ui) in u.iter().enumerate() {
            if ui.is_zero() {
                continue;
            }
            for (j, vj) in v.iter().enumerate() {
                if vj.is_zero() {
                    continue;
                }
                let c = b.mul(ui, vj);
                for (k, o) in out.iter_mut().enumerate() {
                    let t = &self.mult[i][j][k];
                    if !t.is_zero() {
                        *o = b.add(o, &b.mul(&c, t));
                    }
                }
            }
        }
        out
    }

    /// Matrix of `v ↦ z v`.
    pub fn left_mult(&self, z: &[Elem]) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.rank()).map(|j| self.mul(z, &self.basis_vector(j))).collect();
        Matrix::from_cols(self.base(), self.rank(), &cols)
    }

    /// Matrix of `v ↦ v z`.
    pub fn right_mult(&self, z: &[Elem]) -> Matrix {
        let cols: Vec<Vec<Elem>> = (0..self.rank()).map(|j| self.mul(&self.basis_vector(j), z)).collect();
        Matrix::from_cols(self.base(), self.rank(), &cols)
    }

    /// Whether two coordinate vectors agree modulo the relations.
    pub fn equal(&self, u: &[Elem], v: &[Elem]) -> bool {
        let b = self.base();
        let d: Vec<Elem> = u.iter().zip(v).map(|(x, y)| b.sub(x, y)).collect();
        d.iter().all(Elem::is_zero) || self.underlying.is_zero_element(&d)
    }

    /// `z` as a scalar multiple `m * 1` modulo relations, if it is one and
    /// `m` is determined by `z` (the unit has infinite order).
    pub fn as_scalar(&self, z: &[Elem]) -> Option<Elem> {
        let b = self.base();
        let sys = Matrix::hstack(b, self.rank(), &[&Matrix::column_vector(b, &self.one), self.relations()]);
        let sol = solve(&sys, z).ok()??;
        let k = kernel(&sys);
        if (0..k.cols()).any(|j| !k.get(0, j).is_zero()) {
            return None;
        }
        Some(sol[0].clone())
    }

    pub fn regular_module(self: &Arc<Self>) -> AlgModule {
        AlgModule::regular(self)
    }

    pub fn free_module(self: &Arc<Self>, k: usize) -> AlgModule {
        AlgModule::free(self, k)
    }
}

/// Checks associativity on generator triples, the unit laws, and that the
/// relation span is a two-sided ideal, all modulo relations.
pub fn validate_algebra(a: &Algebra) -> Vec<AlgebraViolation> {
    let g = a.rank();
    let mut out = Vec::new();
    let e: Vec<Vec<Elem>> = (0..g).map(|i| a.basis_vector(i)).collect();
    for i in 0..g {
        for j in 0..g {
            let ij = a.mul(&e[i], &e[j]);
            for k in 0..g {
                let lhs = a.mul(&ij, &e[k]);
                let rhs = a.mul(&e[i], &a.mul(&e[j], &e[k]));
                if !a.equal(&lhs, &rhs) {
                    out.push(AlgebraViolation::Associativity { i, j, k });
                }
            }
        }
    }
    for i in 0..g {
        if !a.equal(&a.mul(&a.one, &e[i]), &e[i]) {
            out.push(AlgebraViolation::LeftUnit { i });
        }
        if !a.equal(&a.mul(&e[i], &a.one), &e[i]) {
            out.push(AlgebraViolation::RightUnit { i });
        }
    }
    let rel = a.relations();
    for r in 0..rel.cols() {
        let rv = rel.col(r);
        for (i, ei) in e.iter().enumerate() {
            if !a.underlying.is_zero_element(&a.mul(ei, &rv)) {
                out.push(AlgebraViolation::RelationNotIdeal { relation: r, generator: i, left: true });
            }
            if !a.underlying.is_zero_element(&a.mul(&rv, ei)) {
                out.push(AlgebraViolation::RelationNotIdeal { relation: r, generator: i, left: false });
            }
        }
    }
    out
}

/// Whether `z` commutes with every generator modulo relations.
pub fn is_central(z: &[Elem], a: &Algebra) -> Result<bool> {
    if z.len() != a.rank() {
        return Err(Error::Shape(format!("coordinate vector of length {} for rank {}", z.len(), a.rank())));
    }
    Ok((0..a.rank()).all(|i| {
        let e = a.basis_vector(i);
        a.equal(&a.mul(z, &e), &a.mul(&e, z))
    }))
}

/// A central element of a specific algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CentralElement {
    parent: Arc<Algebra>,
    coords: Vec<Elem>,
}

impl CentralElement {
    pub fn new(parent: &Arc<Algebra>, coords: Vec<Elem>) -> Result<Self> {
        if !is_central(&coords, parent)? {
            return Err(Error::NotCentral);
        }
        Ok(CentralElement { parent: parent.clone(), coords })
    }

    /// `m * 1`, always central.
    pub fn scalar(parent: &Arc<Algebra>, m: i64) -> Self {
        CentralElement { parent: parent.clone(), coords: parent.scalar(m) }
    }

    pub fn parent(&self) -> &Arc<Algebra> {
        &self.parent
    }

    pub fn coords(&self) -> &[Elem] {
        &self.coords
    }

    /// Coordinates rendered like `(2, 0, 1)`.
    pub fn describe(&self) -> String {
        let b = self.parent.base();
        let parts: Vec<String> = self.coords.iter().map(|e| b.display(e).to_string()).collect();
        format!("({})", parts.join(", "))
    }

    /// The integer `m` when the element is `m * 1` over the integers.
    pub fn integer_scalar(&self) -> Option<BigInt> {
        if *self.parent.base() != BaseRing::Integers {
            return None;
        }
        self.parent.as_scalar(&self.coords).map(|m| m.numerator().clone())
    }
}

/// `Λ^op`: the same underlying module with transposed structure constants.
pub fn opposite_algebra(a: &Algebra) -> Algebra {
    let g = a.rank();
    let mult = (0..g).map(|i| (0..g).map(|j| a.mult[j][i].clone()).collect()).collect();
    Algebra::new(a.underlying.clone(), mult, a.one.clone()).expect("same shape")
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn integers_and_group_ring_validate() {
        assert!(validate_algebra(&catalog::integers()).is_empty());
        assert!(validate_algebra(&catalog::group_ring_c2()).is_empty());
        assert!(validate_algebra(&catalog::dual_numbers()).is_empty());
        assert!(validate_algebra(&catalog::lower_triangular()).is_empty());
    }

    #[test]
    fn idempotent_with_wrong_unit_is_reported() {
        // gens {1, g}: g*g = g but the table claims 1*g = 0
        let z = BaseRing::Integers;
        let t = vec![vec![vec![1, 0], vec![0, 0]], vec![vec![0, 1], vec![0, 1]]];
        let a = Algebra::from_table(&z, &t, &[1, 0]).unwrap();
        let v = validate_algebra(&a);
        assert!(v.contains(&AlgebraViolation::LeftUnit { i: 1 }));
        // g*g = g, 1 the unit: this one is fine (Z x Z)
        let t = vec![vec![vec![1, 0], vec![0, 1]], vec![vec![0, 1], vec![0, 1]]];
        assert!(validate_algebra(&Algebra::from_table(&z, &t, &[1, 0]).unwrap()).is_empty());
        // non-associative: a*a = b, b*anything = 0 except a*b = 1, with unit missing
        let t = vec![vec![vec![0, 1], vec![1, 0]], vec![vec![0, 0], vec![0, 0]]];
        let v = validate_algebra(&Algebra::from_table(&z, &t, &[1, 0]).unwrap());
        assert!(v.iter().any(|x| matches!(x, AlgebraViolation::Associativity { .. })));
        assert!(Algebra::checked(FgModule::free(&z, 2), vec![], vec![]).is_err());
    }

    #[test]
    fn centrality() {
        let c2 = catalog::group_ring_c2();
        assert!(is_central(&c2.scalar(2), &c2).unwrap());
        assert!(is_central(&c2.scalar(0), &c2).unwrap());
        let tri = catalog::lower_triangular();
        // e21 does not commute with e11
        assert!(!is_central(&tri.basis_vector(1), &tri).unwrap());
        assert!(is_central(&[c2.base().one()], &c2).is_err());
    }

    #[test]
    fn opposite_is_an_involution() {
        let tri = catalog::lower_triangular();
        let op = opposite_algebra(&tri);
        assert!(validate_algebra(&op).is_empty());
        assert_ne!(op, tri);
        assert_eq!(opposite_algebra(&op), tri);
        let c2 = catalog::group_ring_c2();
        assert_eq!(opposite_algebra(&c2), c2);
        // in the opposite table e21 * e11 = 0 and e11 * e21 = e21
        assert_eq!(op.mul(&tri.basis_vector(0), &tri.basis_vector(1)), tri.basis_vector(1));
    }
}
