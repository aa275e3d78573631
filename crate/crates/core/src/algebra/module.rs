//! Left modules over an [`Algebra`]: an underlying presentation plus one
//! action matrix per algebra generator.

use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use super::{Algebra, CentralElement};
use crate::error::{Error, Result};
use crate::linalg::fgmod::{map_injective, map_surjective, preimage_of_zero};
use crate::linalg::{BaseRing, Elem, FgModule, Matrix, NormalForm, Subquotient};

#[derive(Clone, Debug)]
pub struct AlgModule {
    algebra: Arc<Algebra>,
    underlying: FgModule,
    actions: Vec<Matrix>,
    /// Preferred algebra generators (ambient vectors), tried first when
    /// choosing a free cover.
    hints: Vec<Vec<Elem>>,
}

impl PartialEq for AlgModule {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.underlying == other.underlying && self.actions == other.actions
    }
}

/// A failed module identity, modulo the module relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModuleViolation {
    /// `A_i` does not preserve the relation span.
    ActionNotWellDefined { i: usize },
    /// `A_i A_j != Σ c_ij^k A_k`.
    Compatibility { i: usize, j: usize },
    Unit,
    /// An algebra relation does not act as zero.
    RelationActs { relation: usize },
}

impl fmt::Display for ModuleViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModuleViolation::ActionNotWellDefined { i } => write!(f, "action {i} does not preserve the relations"),
            ModuleViolation::Compatibility { i, j } => write!(f, "actions {i} and {j} violate the product table"),
            ModuleViolation::Unit => write!(f, "the unit does not act as the identity"),
            ModuleViolation::RelationActs { relation } => write!(f, "algebra relation {relation} acts nontrivially"),
        }
    }
}

/// Outcome of [`is_regular_on`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Regularity {
    Regular,
    /// A nonzero element killed by `z`.
    ZeroDivisor(Vec<Elem>),
    /// `zM = M`.
    UnitLike,
}

impl AlgModule {
    pub fn new(algebra: &Arc<Algebra>, underlying: FgModule, actions: Vec<Matrix>) -> Result<Self> {
        if underlying.base() != algebra.base() {
            return Err(Error::BaseMismatch(underlying.base().to_string(), algebra.base().to_string()));
        }
        let g = underlying.gens();
        if actions.len() != algebra.rank() {
            return Err(Error::Shape(format!("{} action matrices for an algebra of rank {}", actions.len(), algebra.rank())));
        }
        if actions.iter().any(|a| a.rows() != g || a.cols() != g || a.base() != algebra.base()) {
            return Err(Error::Shape(format!("action matrices must be {g}x{g}")));
        }
        Ok(AlgModule { algebra: algebra.clone(), underlying, actions, hints: Vec::new() })
    }

    /// Like [`AlgModule::new`] but rejects data failing [`AlgModule::validate`].
    pub fn checked(algebra: &Arc<Algebra>, underlying: FgModule, actions: Vec<Matrix>) -> Result<Self> {
        let m = Self::new(algebra, underlying, actions)?;
        if let Some(v) = m.validate().first() {
            return Err(Error::Invalid(v.to_string()));
        }
        Ok(m)
    }

    pub fn with_hints(mut self, hints: Vec<Vec<Elem>>) -> Self {
        self.hints = hints;
        self
    }

    /// `Λ` acting on itself by left multiplication, generated by the unit.
    pub fn regular(algebra: &Arc<Algebra>) -> Self {
        let actions = (0..algebra.rank()).map(|i| algebra.left_gen(i).clone()).collect();
        AlgModule { algebra: algebra.clone(), underlying: algebra.underlying().clone(), actions, hints: vec![algebra.one().to_vec()] }
    }

    /// `Λ^k`; copy `t` occupies ambient coordinates `t*rank .. (t+1)*rank`.
    pub fn free(algebra: &Arc<Algebra>, k: usize) -> Self {
        Self::regular(algebra).power(k)
    }

    pub fn zero(algebra: &Arc<Algebra>) -> Self {
        let b = algebra.base();
        let actions = vec![Matrix::zeros(b, 0, 0); algebra.rank()];
        AlgModule { algebra: algebra.clone(), underlying: FgModule::zero(b), actions, hints: Vec::new() }
    }

    pub fn algebra(&self) -> &Arc<Algebra> {
        &self.algebra
    }

    pub fn base(&self) -> &BaseRing {
        self.underlying.base()
    }

    pub fn underlying(&self) -> &FgModule {
        &self.underlying
    }

    pub fn relations(&self) -> &Matrix {
        self.underlying.relations()
    }

    pub fn gens(&self) -> usize {
        self.underlying.gens()
    }

    pub fn actions(&self) -> &[Matrix] {
        &self.actions
    }

    pub fn action(&self, i: usize) -> &Matrix {
        &self.actions[i]
    }

    pub fn hints(&self) -> &[Vec<Elem>] {
        &self.hints
    }

    pub fn normal_form(&self) -> NormalForm {
        self.underlying.normal_form()
    }

    pub fn is_zero(&self) -> bool {
        self.underlying.is_zero()
    }

    pub fn same_algebra(&self, other: &AlgModule) -> bool {
        Arc::ptr_eq(&self.algebra, &other.algebra) || *self.algebra == *other.algebra
    }

    /// Matrix of the action of the algebra element with coordinates `z`.
    pub fn act(&self, z: &[Elem]) -> Matrix {
        let b = self.base();
        let mut out = Matrix::zeros(b, self.gens(), self.gens());
        for (zl, a) in z.iter().zip(&self.actions) {
            if !zl.is_zero() {
                out = out.add(&a.scale(zl));
            }
        }
        out
    }

    /// Identity checks modulo relations: well-definedness, the product
    /// table, the unit, and algebra relations acting as zero.
    pub fn validate(&self) -> Vec<ModuleViolation> {
        let a = &self.algebra;
        let u = &self.underlying;
        let g = a.rank();
        let mut out = Vec::new();
        for (i, act) in self.actions.iter().enumerate() {
            if !u.columns_vanish(&act.mul(self.relations())) {
                out.push(ModuleViolation::ActionNotWellDefined { i });
            }
        }
        for i in 0..g {
            for j in 0..g {
                let lhs = self.actions[i].mul(&self.actions[j]);
                let rhs = self.act(&a.table()[i][j]);
                if !u.columns_vanish(&lhs.sub(&rhs)) {
                    out.push(ModuleViolation::Compatibility { i, j });
                }
            }
        }
        let id = Matrix::identity(self.base(), self.gens());
        if !u.columns_vanish(&self.act(a.one()).sub(&id)) {
            out.push(ModuleViolation::Unit);
        }
        let rel = a.relations();
        for r in 0..rel.cols() {
            if !u.columns_vanish(&self.act(&rel.col(r))) {
                out.push(ModuleViolation::RelationActs { relation: r });
            }
        }
        out
    }

    pub fn direct_sum(&self, other: &AlgModule) -> Result<AlgModule> {
        if !self.same_algebra(other) {
            return Err(Error::AlgebraMismatch);
        }
        let underlying = self.underlying.direct_sum(&other.underlying)?;
        let b = self.base();
        let actions = self
            .actions
            .iter()
            .zip(&other.actions)
            .map(|(x, y)| Matrix::block_diag(b, &[x, y]))
            .collect();
        let (g1, g2) = (self.gens(), other.gens());
        let mut hints: Vec<Vec<Elem>> = self
            .hints
            .iter()
            .map(|h| h.iter().cloned().chain((0..g2).map(|_| b.zero())).collect())
            .collect();
        hints.extend(other.hints.iter().map(|h| (0..g1).map(|_| b.zero()).chain(h.iter().cloned()).collect()));
        Ok(AlgModule { algebra: self.algebra.clone(), underlying, actions, hints })
    }

    /// Columns `A_i s` for every generator action and column `s`: the
    /// base-span of `Λ S`.
    pub fn span_closure(&self, s: &Matrix) -> Matrix {
        let parts: Vec<Matrix> = self.actions.iter().map(|a| a.mul(s)).collect();
        let refs: Vec<&Matrix> = parts.iter().collect();
        Matrix::hstack(self.base(), self.gens(), &refs)
    }

    /// Whether the columns of `s` generate the module over the algebra.
    pub fn generated_by(&self, s: &Matrix) -> bool {
        map_surjective(&self.span_closure(s), &self.underlying)
    }

    /// A small list of algebra generators: hints first, then the underlying
    /// generators, each kept only when it enlarges the span so far.
    pub fn lambda_generators(&self) -> Vec<Vec<Elem>> {
        let b = self.base();
        let g = self.gens();
        if self.is_zero() {
            return Vec::new();
        }
        let unit = |i: usize| (0..g).map(|k| if k == i { b.one() } else { b.zero() }).collect::<Vec<_>>();
        let candidates = self.hints.iter().cloned().chain((0..g).map(unit));
        let mut chosen: Vec<Vec<Elem>> = Vec::new();
        let mut span = self.relations().clone();
        for v in candidates {
            if FgModule::new(span.clone()).is_zero_element(&v) {
                continue;
            }
            chosen.push(v);
            let s = Matrix::from_cols(b, g, &chosen);
            span = Matrix::hstack(b, g, &[self.relations(), &self.span_closure(&s)]);
            if FgModule::new(span.clone()).is_zero() {
                break;
            }
        }
        chosen
    }

    /// The submodule `(span S + R) / R`, re-presented in Smith form; `S` must be
    /// closed under the action. Returns the module and its generators as
    /// ambient vectors of `self`.
    pub fn submodule(&self, s: &Matrix) -> (AlgModule, Matrix) {
        let b = self.base();
        let sub = Matrix::hstack(b, self.gens(), &[s, self.relations()]);
        let sq = Subquotient::new(&sub, self.relations());
        let m = self.transport(&sq);
        (m, sq.generators().clone())
    }

    /// Re-presents the module on its Smith-form generators.
    pub fn simplify(&self) -> AlgModule {
        self.simplify_with_map().0
    }

    /// [`AlgModule::simplify`] plus the isomorphism from the old generators
    /// to the new ones (new gens x old gens).
    pub fn simplify_with_map(&self) -> (AlgModule, Matrix) {
        let sq = Subquotient::of_module(&self.underlying);
        let mut m = self.transport(&sq);
        m.hints = self.hints.iter().map(|h| sq.coords(h).expect("ambient vector")).collect();
        let iso = sq.coords_matrix(&Matrix::identity(self.base(), self.gens())).expect("ambient vectors");
        (m, iso)
    }

    /// `M^k`.
    pub fn power(&self, k: usize) -> AlgModule {
        let mut out = AlgModule::zero(&self.algebra);
        for _ in 0..k {
            out = out.direct_sum(self).expect("same algebra");
        }
        out
    }

    fn transport(&self, sq: &Subquotient) -> AlgModule {
        let gens = sq.generators();
        let actions = self
            .actions
            .iter()
            .map(|a| sq.coords_matrix(&a.mul(gens)).expect("span is closed under the action"))
            .collect();
        AlgModule { algebra: self.algebra.clone(), underlying: sq.module().clone(), actions, hints: Vec::new() }
    }

    /// `M / Λ S`.
    pub fn quotient_by(&self, s: &Matrix) -> AlgModule {
        let b = self.base();
        let rel = Matrix::hstack(b, self.gens(), &[self.relations(), &self.span_closure(s)]);
        AlgModule {
            algebra: self.algebra.clone(),
            underlying: FgModule::new(rel),
            actions: self.actions.clone(),
            hints: self.hints.clone(),
        }
    }

    /// Same presentation over another algebra on the same generators (e.g.
    /// a base change of `self.algebra`).
    pub fn rebase(&self, algebra: &Arc<Algebra>) -> Result<AlgModule> {
        let to = algebra.base();
        let actions = self.actions.iter().map(|a| a.change_base(to)).collect::<Result<Vec<_>>>()?;
        let underlying = self.underlying.change_base(to)?;
        let hints = self
            .hints
            .iter()
            .map(|h| h.iter().map(|e| to.from_integer_elem(e)).collect())
            .collect();
        let mut m = AlgModule::new(algebra, underlying, actions)?;
        m.hints = hints;
        Ok(m)
    }
}

/// Whether multiplication by `z` on `M` is injective and not surjective.
pub fn is_regular_on(z: &CentralElement, m: &AlgModule) -> Result<Regularity> {
    if !Arc::ptr_eq(z.parent(), m.algebra()) && **z.parent() != **m.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let x = m.act(z.coords());
    let u = m.underlying();
    if !map_injective(&x, u, u) {
        let k = preimage_of_zero(&x, u);
        let w = (0..k.cols()).map(|j| k.col(j)).find(|c| !u.is_zero_element(c)).expect("nonzero kernel element");
        return Ok(Regularity::ZeroDivisor(w));
    }
    if map_surjective(&x, u) {
        return Ok(Regularity::UnitLike);
    }
    Ok(Regularity::Regular)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;

    #[test]
    fn corpus_modules_validate() {
        let z = Arc::new(catalog::integers());
        for m in [catalog::z_module(&z, &[0]), catalog::z_module(&z, &[2, 0]), AlgModule::free(&z, 3)] {
            assert!(m.validate().is_empty());
        }
        let c2 = Arc::new(catalog::group_ring_c2());
        assert!(catalog::c2_trivial(&c2).validate().is_empty());
        assert!(catalog::c2_sign(&c2).validate().is_empty());
        let tri = Arc::new(catalog::lower_triangular());
        for m in [catalog::tri_p1(&tri), catalog::tri_p2(&tri), catalog::tri_s2(&tri)] {
            assert!(m.validate().is_empty());
        }
    }

    #[test]
    fn broken_action_is_reported() {
        let c2 = Arc::new(catalog::group_ring_c2());
        let b = c2.base();
        // g acting by 2 on Z: g*g = 4 != 1
        let m = AlgModule::new(
            &c2,
            FgModule::free(b, 1),
            vec![Matrix::from_rows(b, &[vec![1]]), Matrix::from_rows(b, &[vec![2]])],
        )
        .unwrap();
        assert!(m.validate().contains(&ModuleViolation::Compatibility { i: 1, j: 1 }));
        assert!(AlgModule::checked(&c2, FgModule::free(b, 1), vec![]).is_err());
    }

    #[test]
    fn regularity_examples() {
        let z = Arc::new(catalog::integers());
        let two = CentralElement::scalar(&z, 2);
        assert_eq!(is_regular_on(&two, &catalog::z_module(&z, &[0])).unwrap(), Regularity::Regular);
        assert!(matches!(is_regular_on(&two, &catalog::z_module(&z, &[2])).unwrap(), Regularity::ZeroDivisor(_)));
        assert_eq!(is_regular_on(&two, &catalog::z_module(&z, &[3])).unwrap(), Regularity::UnitLike);
    }

    #[test]
    fn generators_of_regular_and_triangular_modules() {
        let tri = Arc::new(catalog::lower_triangular());
        assert_eq!(AlgModule::regular(&tri).lambda_generators().len(), 1);
        assert_eq!(AlgModule::free(&tri, 2).lambda_generators().len(), 2);
        // without the unit hint the greedy pass needs e11 and e22
        let bare = AlgModule::regular(&tri).with_hints(vec![]);
        assert_eq!(bare.lambda_generators().len(), 2);
        assert!(AlgModule::zero(&tri).lambda_generators().is_empty());
    }

    #[test]
    fn simplify_keeps_the_isomorphism_type() {
        let z = Arc::new(catalog::integers());
        let b = z.base();
        let m = AlgModule::new(
            &z,
            FgModule::new(Matrix::from_rows(b, &[vec![2, 4], vec![6, 8]])),
            vec![Matrix::identity(b, 2)],
        )
        .unwrap();
        let s = m.simplify();
        assert_eq!(s.normal_form(), m.normal_form());
        assert_eq!(s.gens(), 2);
        assert!(s.validate().is_empty());
    }
}
