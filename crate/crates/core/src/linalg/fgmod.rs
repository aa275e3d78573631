//! Finitely presented modules over a [`BaseRing`] and subquotients of free
//! modules.
//!
//! A module is the cokernel of its relations matrix acting on column space:
//! `R^gens / im(relations)`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use super::matrix::Matrix;
use super::ring::{BaseRing, Elem};
use super::smith::{kernel, smith_normal_form, solve_many, solve_with, SmithDecomposition};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FgModule {
    base: BaseRing,
    gens: usize,
    relations: Matrix,
}

impl FgModule {
    pub fn new(relations: Matrix) -> Self {
        FgModule { base: relations.base().clone(), gens: relations.rows(), relations }
    }

    pub fn free(base: &BaseRing, rank: usize) -> Self {
        Self::new(Matrix::zeros(base, rank, 0))
    }

    /// `R/(d_1) + ... + R/(d_k)`.
    pub fn cyclic_sum(base: &BaseRing, orders: &[Elem]) -> Self {
        Self::new(Matrix::diagonal(base, orders))
    }

    /// `Z/a_1 + ... + Z/a_k` (entries `0` give free summands).
    pub fn from_orders(base: &BaseRing, orders: &[i64]) -> Self {
        let d: Vec<Elem> = orders.iter().map(|&o| base.from_int(o)).collect();
        Self::cyclic_sum(base, &d)
    }

    pub fn zero(base: &BaseRing) -> Self {
        Self::free(base, 0)
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn gens(&self) -> usize {
        self.gens
    }

    pub fn relations(&self) -> &Matrix {
        &self.relations
    }

    /// Invariant factors in divisibility order, zeros (free summands) last.
    pub fn normal_form(&self) -> NormalForm {
        NormalForm::new(&self.base, super::smith::cokernel_invariants(&self.relations))
    }

    pub fn is_zero(&self) -> bool {
        self.normal_form().is_zero()
    }

    pub fn is_isomorphic(&self, other: &FgModule) -> bool {
        self.normal_form() == other.normal_form()
    }

    pub fn direct_sum(&self, other: &FgModule) -> Result<FgModule> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(self.base.to_string(), other.base.to_string()));
        }
        Ok(FgModule::new(Matrix::block_diag(&self.base, &[&self.relations, &other.relations])))
    }

    /// Whether the ambient vector `v` lies in the relation span (is zero in the module).
    pub fn is_zero_element(&self, v: &[Elem]) -> bool {
        let b = Matrix::column_vector(&self.base, v);
        solve_many(&self.relations, &b).expect("shape").is_some()
    }

    /// Whether every column of `m` is zero in the module.
    pub fn columns_vanish(&self, m: &Matrix) -> bool {
        if m.cols() == 0 || m.is_zero() {
            return true;
        }
        solve_many(&self.relations, m).expect("shape").is_some()
    }

    /// Same presentation over another base: reduction mod `N` or inclusion
    /// into `Z[1/c]`.
    pub fn change_base(&self, to: &BaseRing) -> Result<FgModule> {
        Ok(FgModule::new(self.relations.change_base(to)?))
    }
}

/// Invariant-factor list of a module; equality is isomorphism.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct NormalForm {
    base: BaseRing,
    factors: Vec<Elem>,
}

impl NormalForm {
    fn new(base: &BaseRing, factors: Vec<Elem>) -> Self {
        NormalForm { base: base.clone(), factors }
    }

    pub fn factors(&self) -> &[Elem] {
        &self.factors
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn is_zero(&self) -> bool {
        self.factors.is_empty()
    }

    /// Invariant factors as integers (canonical associates are always integral).
    pub fn integers(&self) -> Vec<BigInt> {
        self.factors.iter().map(|e| e.to_integer(&self.base).expect("canonical factor is integral")).collect()
    }

    pub fn free_rank(&self) -> usize {
        self.factors.iter().filter(|e| e.is_zero()).count()
    }

    /// The same group as a module over `Z` (identity over `Z`; a free `Z/N`
    /// summand becomes `Z/N`). `None` over `Z[1/c]`.
    pub fn over_integers(&self) -> Option<NormalForm> {
        match &self.base {
            BaseRing::Integers => Some(self.clone()),
            BaseRing::IntegersMod(n) => {
                let orders: Vec<Elem> = self
                    .integers()
                    .into_iter()
                    .map(|d| BaseRing::Integers.from_int(if d.is_zero() { n.clone() } else { d }))
                    .collect();
                Some(FgModule::cyclic_sum(&BaseRing::Integers, &orders).normal_form())
            }
            BaseRing::IntegersLoc(_) => None,
        }
    }

    pub fn to_module(&self) -> FgModule {
        FgModule::cyclic_sum(&self.base, &self.factors)
    }
}

impl Serialize for NormalForm {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = self.integers().iter().map(|i| i.to_string()).collect();
        v.serialize(s)
    }
}

impl fmt::Display for NormalForm {
    /// Renders e.g. `Z ⊕ Z/2 ⊕ Z/6` (the ring symbol follows the base).
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "0");
        }
        let ring = self.base.to_string();
        let parts: Vec<String> = self
            .integers()
            .iter()
            .map(|d| if d.is_positive() { format!("Z/{d}") } else { ring.clone() })
            .collect();
        write!(f, "{}", parts.join(" ⊕ "))
    }
}

/// A subquotient `L / D` of a free module `R^n`, where `L` is spanned by the
/// columns of `sub_gens` and `D ⊆ L` by the columns of `denom`, presented in
/// Smith form with explicit generator representatives.
#[derive(Clone, Debug)]
pub struct Subquotient {
    base: BaseRing,
    ambient: usize,
    /// The presented module: `R^k / diag(invariants)`.
    module: FgModule,
    invariants: Vec<Elem>,
    /// `ambient x k` representatives of the new generators.
    generators: Matrix,
    sub_snf: SmithDecomposition,
    /// `k x m`: coordinates in terms of `sub_gens` to new coordinates.
    to_coords: Matrix,
}

impl Subquotient {
    pub fn new(sub_gens: &Matrix, denom: &Matrix) -> Self {
        let base = sub_gens.base().clone();
        let n = sub_gens.rows();
        let m = sub_gens.cols();
        let sub_snf = smith_normal_form(sub_gens);
        let ker = super::smith::kernel_from(&sub_snf);
        let mut w_cols = Vec::with_capacity(denom.cols());
        for j in 0..denom.cols() {
            let x = solve_with(&sub_snf, &denom.col(j)).expect("denominator lies in the submodule");
            w_cols.push(x);
        }
        let w = Matrix::from_cols(&base, m, &w_cols);
        let rel = Matrix::hstack(&base, m, &[&ker, &w]);
        let snf = smith_normal_form(&rel);
        let keep: Vec<usize> = (0..m).filter(|&i| !base.is_unit(&snf.d(i))).collect();
        let invariants: Vec<Elem> = keep.iter().map(|&i| snf.d(i)).collect();
        let generators = sub_gens.mul(&snf.u_inv.select_cols(&keep));
        let to_coords = snf.u.select_rows(&keep);
        let nonzero: Vec<Elem> = invariants.clone();
        let module = FgModule::new(Matrix::diagonal(&base, &nonzero));
        Subquotient { base, ambient: n, module, invariants, generators, sub_snf, to_coords }
    }

    /// The subquotient `R^n / im(relations)` itself, re-presented in Smith form.
    pub fn of_module(m: &FgModule) -> Self {
        Self::new(&Matrix::identity(m.base(), m.gens()), m.relations())
    }

    pub fn module(&self) -> &FgModule {
        &self.module
    }

    pub fn invariants(&self) -> &[Elem] {
        &self.invariants
    }

    pub fn normal_form(&self) -> NormalForm {
        NormalForm::new(&self.base, self.invariants.clone())
    }

    pub fn len(&self) -> usize {
        self.invariants.len()
    }

    pub fn is_empty(&self) -> bool {
        self.invariants.is_empty()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn generators(&self) -> &Matrix {
        &self.generators
    }

    /// Coordinates of an element of `L` in the new generators, reduced
    /// canonically modulo the invariant factors. `None` if `v ∉ L`.
    pub fn coords(&self, v: &[Elem]) -> Option<Vec<Elem>> {
        let w = solve_with(&self.sub_snf, v)?;
        let c = self.to_coords.mul_vec(&w);
        Some(c.iter().zip(&self.invariants).map(|(x, d)| self.base.reduce_mod(x, d)).collect())
    }

    /// Coordinates of every column of `m` as the columns of a matrix.
    pub fn coords_matrix(&self, m: &Matrix) -> Option<Matrix> {
        let mut cols = Vec::with_capacity(m.cols());
        for j in 0..m.cols() {
            cols.push(self.coords(&m.col(j))?);
        }
        Some(Matrix::from_cols(&self.base, self.len(), &cols))
    }
}

/// Elements `v` of the source ambient space with `f v` zero in `target`:
/// a matrix whose columns generate the preimage lattice (it contains the
/// source relations when `f` is a well-defined map).
pub fn preimage_of_zero(f: &Matrix, target: &FgModule) -> Matrix {
    let base = f.base();
    let sys = Matrix::hstack(base, f.rows(), &[f, &target.relations().neg()]);
    let k = kernel(&sys);
    k.block(0, 0, f.cols(), k.cols())
}

/// Whether `f` (target gens x source gens) defines a map `source -> target`.
pub fn is_well_defined(f: &Matrix, source: &FgModule, target: &FgModule) -> bool {
    f.rows() == target.gens() && f.cols() == source.gens() && target.columns_vanish(&f.mul(source.relations()))
}

/// Kernel of a module map as a subquotient of the source ambient space.
pub fn map_kernel(f: &Matrix, source: &FgModule, target: &FgModule) -> Subquotient {
    let k = preimage_of_zero(f, target);
    let sub = Matrix::hstack(source.base(), source.gens(), &[&k, source.relations()]);
    Subquotient::new(&sub, source.relations())
}

/// Image of a module map as a subquotient of the target ambient space.
pub fn map_image(f: &Matrix, target: &FgModule) -> Subquotient {
    let sub = Matrix::hstack(target.base(), target.gens(), &[f, target.relations()]);
    Subquotient::new(&sub, target.relations())
}

pub fn map_cokernel(f: &Matrix, target: &FgModule) -> FgModule {
    FgModule::new(Matrix::hstack(target.base(), target.gens(), &[target.relations(), f]))
}

/// Whether a well-defined map is injective, surjective.
pub fn map_injective(f: &Matrix, source: &FgModule, target: &FgModule) -> bool {
    let k = preimage_of_zero(f, target);
    source.columns_vanish(&k)
}

pub fn map_surjective(f: &Matrix, target: &FgModule) -> bool {
    map_cokernel(f, target).is_zero()
}

/// The space of base-linear maps `F: M -> N` satisfying `F A = B F` for every
/// pair `(A, B)` of endomorphism matrices of `M` and `N`, modulo maps that
/// vanish in `N`.
///
/// Maps are flattened row-major (`N.gens x M.gens`).
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub source: FgModule,
    pub target: FgModule,
    space: Subquotient,
}

impl HomSpace {
    pub fn new(source: &FgModule, target: &FgModule, actions: &[(Matrix, Matrix)]) -> Result<Self> {
        if source.base() != target.base() {
            return Err(Error::BaseMismatch(source.base().to_string(), target.base().to_string()));
        }
        let base = source.base().clone();
        let (gm, gn) = (source.gens(), target.gens());
        let (rm, rn) = (source.relations().cols(), target.relations().cols());
        let nf = gn * gm;
        let ny = rn * rm;
        let nyi = rn * gm;
        let unknowns = nf + ny + actions.len() * nyi;
        let eqs = gn * rm + actions.len() * gn * gm;
        let mut sys = Matrix::zeros(&base, eqs, unknowns);
        let fidx = |r: usize, c: usize| r * gm + c;
        let rel_n = target.relations();
        let rel_m = source.relations();
        // F R_M - R_N Y = 0
        let mut row = 0;
        for r in 0..gn {
            for q in 0..rm {
                for c in 0..gm {
                    let v = rel_m.get(c, q);
                    if !v.is_zero() {
                        sys.set(row, fidx(r, c), v.clone());
                    }
                }
                for l in 0..rn {
                    let v = rel_n.get(r, l);
                    if !v.is_zero() {
                        sys.set(row, nf + l * rm + q, base.neg(v));
                    }
                }
                row += 1;
            }
        }
        // F A - B F - R_N Y_i = 0
        for (i, (a, b)) in actions.iter().enumerate() {
            let off = nf + ny + i * nyi;
            for r in 0..gn {
                for c in 0..gm {
                    for k in 0..gm {
                        let v = a.get(k, c);
                        if !v.is_zero() {
                            let idx = fidx(r, k);
                            let cur = sys.get(row, idx).clone();
                            sys.set(row, idx, base.add(&cur, v));
                        }
                    }
                    for k in 0..gn {
                        let v = b.get(r, k);
                        if !v.is_zero() {
                            let idx = fidx(k, c);
                            let cur = sys.get(row, idx).clone();
                            sys.set(row, idx, base.sub(&cur, v));
                        }
                    }
                    for l in 0..rn {
                        let v = rel_n.get(r, l);
                        if !v.is_zero() {
                            sys.set(row, off + l * gm + c, base.neg(v));
                        }
                    }
                    row += 1;
                }
            }
        }
        let k = kernel(&sys);
        let sub = k.block(0, 0, nf, k.cols());
        // maps landing in the relation span of N
        let mut dcols = Vec::with_capacity(rn * gm);
        for l in 0..rn {
            for c in 0..gm {
                let mut v = vec![base.zero(); nf];
                for r in 0..gn {
                    v[fidx(r, c)] = rel_n.get(r, l).clone();
                }
                dcols.push(v);
            }
        }
        let denom = Matrix::from_cols(&base, nf, &dcols);
        let sub = Matrix::hstack(&base, nf, &[&sub, &denom]);
        let space = Subquotient::new(&sub, &denom);
        Ok(HomSpace { source: source.clone(), target: target.clone(), space })
    }

    /// The Hom group as a presented module.
    pub fn module(&self) -> &FgModule {
        self.space.module()
    }

    pub fn normal_form(&self) -> NormalForm {
        self.space.normal_form()
    }

    pub fn len(&self) -> usize {
        self.space.len()
    }

    pub fn is_empty(&self) -> bool {
        self.space.is_empty()
    }

    /// Invariant factor attached to each generating map.
    pub fn invariants(&self) -> &[Elem] {
        self.space.invariants()
    }

    /// The `i`-th generating map as a `target.gens x source.gens` matrix.
    pub fn generator(&self, i: usize) -> Matrix {
        let col = self.space.generators().col(i);
        Matrix::from_vec(self.source.base(), self.target.gens(), self.source.gens(), &col)
    }

    pub fn generators(&self) -> Vec<Matrix> {
        (0..self.len()).map(|i| self.generator(i)).collect()
    }

    /// Coordinates of a map in the generating set (`None` if not a valid map).
    pub fn coords(&self, f: &Matrix) -> Option<Vec<Elem>> {
        self.space.coords(&f.to_vec())
    }

    pub fn subquotient(&self) -> &Subquotient {
        &self.space
    }
}

/// All base-linear maps `M -> N`.
pub fn hom_fg(m: &FgModule, n: &FgModule) -> Result<HomSpace> {
    HomSpace::new(m, n, &[])
}

/// `M ⊗ Z[1/c]` for a module over the integers.
pub fn localize_fg(m: &FgModule, c: impl Into<BigInt>) -> Result<FgModule> {
    if *m.base() != BaseRing::Integers {
        return Err(Error::Unsupported(format!("localization of a module over {}", m.base())));
    }
    let to = BaseRing::integers_loc(c)?;
    m.change_base(&to)
}

/// `M / mM` as a module over `Z/m`.
pub fn quotient_fg(m: &FgModule, modulus: impl Into<BigInt>) -> Result<FgModule> {
    if *m.base() != BaseRing::Integers {
        return Err(Error::Unsupported(format!("reduction of a module over {}", m.base())));
    }
    let to = BaseRing::integers_mod(modulus)?;
    m.change_base(&to)
}

/// Integer normal form reinterpreted over `Z[1/c]` (equivalent to localizing).
pub fn localize_normal_form(nf: &NormalForm, c: &BigInt) -> Result<NormalForm> {
    Ok(localize_fg(&nf.to_module(), c.clone())?.normal_form())
}

/// Integer normal form reduced mod `m`.
pub fn quotient_normal_form(nf: &NormalForm, m: &BigInt) -> Result<NormalForm> {
    Ok(quotient_fg(&nf.to_module(), m.clone())?.normal_form())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z() -> BaseRing {
        BaseRing::Integers
    }

    fn nf(base: &BaseRing, orders: &[i64]) -> NormalForm {
        FgModule::from_orders(base, orders).normal_form()
    }

    #[test]
    fn normal_form_and_display() {
        let m = FgModule::from_orders(&z(), &[2, 3, 0]);
        assert_eq!(m.normal_form().integers(), vec![BigInt::from(6), BigInt::from(0)]);
        assert_eq!(m.normal_form().to_string(), "Z/6 ⊕ Z");
        assert_eq!(FgModule::zero(&z()).normal_form().to_string(), "0");
    }

    #[test]
    fn hom_between_cyclic_groups() {
        // enumerating the 6 candidate images of 1 in Z/6, exactly 2 satisfy 4 f(1) = 0
        let h = hom_fg(&FgModule::from_orders(&z(), &[4]), &FgModule::from_orders(&z(), &[6])).unwrap();
        assert_eq!(h.normal_form(), nf(&z(), &[2]));
        let n = FgModule::from_orders(&z(), &[5, 0]);
        let h = hom_fg(&FgModule::free(&z(), 1), &n).unwrap();
        assert_eq!(h.normal_form(), n.normal_form());
        let h = hom_fg(&FgModule::from_orders(&z(), &[2]), &FgModule::free(&z(), 1)).unwrap();
        assert!(h.normal_form().is_zero());
    }

    #[test]
    fn hom_generators_are_maps() {
        let m = FgModule::from_orders(&z(), &[4, 0]);
        let n = FgModule::from_orders(&z(), &[6, 2]);
        let h = hom_fg(&m, &n).unwrap();
        for g in h.generators() {
            assert!(is_well_defined(&g, &m, &n));
        }
        // Hom(Z/4 + Z, Z/6 + Z/2) = Z/2 + Z/2 + Z/6 + Z/2
        assert_eq!(h.normal_form(), nf(&z(), &[2, 2, 6, 2]));
    }

    #[test]
    fn localization_examples() {
        let l2 = BaseRing::integers_loc(2).unwrap();
        let z3 = FgModule::from_orders(&z(), &[3]);
        assert_eq!(localize_fg(&z3, 2).unwrap().normal_form(), nf(&l2, &[3]));
        assert!(localize_fg(&FgModule::from_orders(&z(), &[4]), 2).unwrap().is_zero());
        assert_eq!(localize_fg(&FgModule::free(&z(), 1), 2).unwrap().normal_form(), nf(&l2, &[0]));
        assert!(localize_fg(&z3, 1).is_err());
    }

    #[test]
    fn quotient_examples() {
        let f2 = BaseRing::integers_mod(2).unwrap();
        assert_eq!(quotient_fg(&FgModule::free(&z(), 1), 2).unwrap().normal_form(), nf(&f2, &[0]));
        assert!(quotient_fg(&FgModule::from_orders(&z(), &[3]), 2).unwrap().is_zero());
        let m = FgModule::from_orders(&z(), &[0, 4]);
        assert_eq!(quotient_fg(&m, 2).unwrap().normal_form(), nf(&f2, &[0, 0]));
        assert!(quotient_fg(&m, 1).is_err());
    }

    #[test]
    fn subquotient_coordinates() {
        // L = 2Z + 0, D = 6Z + 0 inside Z^2: L/D = Z/3
        let b = z();
        let sub = Matrix::from_rows(&b, &[vec![2], vec![0]]);
        let den = Matrix::from_rows(&b, &[vec![6], vec![0]]);
        let sq = Subquotient::new(&sub, &den);
        assert_eq!(sq.normal_form(), nf(&b, &[3]));
        let c = sq.coords(&[b.from_int(8), b.zero()]).unwrap();
        let g = sq.coords(&sq.generators().col(0)).unwrap();
        assert_eq!(g, vec![b.one()]);
        assert_eq!(c.len(), 1);
        assert!(sq.coords(&[b.from_int(1), b.zero()]).is_none());
    }

    #[test]
    fn kernel_image_cokernel_of_maps() {
        let b = z();
        let src = FgModule::free(&b, 1);
        let tgt = FgModule::from_orders(&b, &[4]);
        let f = Matrix::from_rows(&b, &[vec![2]]);
        assert!(is_well_defined(&f, &src, &tgt));
        assert_eq!(map_kernel(&f, &src, &tgt).normal_form(), nf(&b, &[0]));
        assert_eq!(map_image(&f, &tgt).normal_form(), nf(&b, &[2]));
        assert_eq!(map_cokernel(&f, &tgt).normal_form(), nf(&b, &[2]));
        assert!(!map_injective(&f, &src, &tgt));
        assert!(!map_surjective(&f, &tgt));
        let bad = Matrix::from_rows(&b, &[vec![1]]);
        assert!(!is_well_defined(&bad, &tgt, &FgModule::from_orders(&b, &[6])));
    }
}
