//! Hom and Ext over an algebra, free covers, resolutions, split tests,
//! bounded projective dimension and endomorphism algebras.

mod linsys;
mod resolution;

use std::sync::Arc;

use crate::algebra::{AlgModule, Algebra, CentralElement};
use crate::error::{Error, Result};
use crate::linalg::fgmod::is_well_defined;
use crate::linalg::{Elem, FgModule, HomSpace, Matrix};

use linsys::MatrixSystem;
pub use resolution::{
    ext, ext_range, ext_with, free_cover, is_projective, pd_at_most, resolution, ExtResult, FreeCover, PdVerdict,
    Resolution,
};

/// A `Λ`-linear map given on generators (`target.gens x source.gens`).
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: AlgModule,
    pub target: AlgModule,
    pub matrix: Matrix,
}

impl ModuleMap {
    /// Checks shape, well-definedness and equivariance.
    pub fn new(source: &AlgModule, target: &AlgModule, matrix: Matrix) -> Result<Self> {
        if !source.same_algebra(target) {
            return Err(Error::AlgebraMismatch);
        }
        if matrix.rows() != target.gens() || matrix.cols() != source.gens() {
            return Err(Error::InvalidMap(format!(
                "{}x{} matrix for a map from {} to {} generators",
                matrix.rows(),
                matrix.cols(),
                source.gens(),
                target.gens()
            )));
        }
        if !is_well_defined(&matrix, source.underlying(), target.underlying()) {
            return Err(Error::InvalidMap("relations are not sent to relations".into()));
        }
        for (i, (a, b)) in source.actions().iter().zip(target.actions()).enumerate() {
            if !target.underlying().columns_vanish(&matrix.mul(a).sub(&b.mul(&matrix))) {
                return Err(Error::InvalidMap(format!("not equivariant for generator {i}")));
            }
        }
        Ok(ModuleMap { source: source.clone(), target: target.clone(), matrix })
    }

    pub fn identity(m: &AlgModule) -> Self {
        ModuleMap { source: m.clone(), target: m.clone(), matrix: Matrix::identity(m.base(), m.gens()) }
    }
}

/// `Hom_Λ(M, N)`: base-linear maps commuting with every generator action.
pub fn hom_over_algebra(m: &AlgModule, n: &AlgModule) -> Result<HomSpace> {
    if !m.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    let pairs: Vec<(Matrix, Matrix)> =
        m.actions().iter().zip(n.actions()).map(|(a, b)| (a.clone(), b.clone())).collect();
    HomSpace::new(m.underlying(), n.underlying(), &pairs)
}

/// A `Λ`-linear `s` with `π s = id`, if one exists.
pub fn is_split_surjection(pi: &ModuleMap) -> Option<Matrix> {
    let (p, m) = (&pi.source, &pi.target);
    let b = m.base();
    let (gp, gm) = (p.gens(), m.gens());
    let (rp, rm) = (p.relations().cols(), m.relations().cols());
    let acts = p.actions().len();
    // unknowns: S (gp x gm), Y0 (rp x rm), Y_i (rp x gm), Z (rm x gm)
    let mut shapes = vec![(gp, gm), (rp, rm)];
    shapes.extend((0..acts).map(|_| (rp, gm)));
    shapes.push((rm, gm));
    let z = shapes.len() - 1;
    let mut sys = MatrixSystem::new(b, &shapes);
    let (r_p, r_m) = (p.relations(), m.relations());
    sys.equation(gp, rm, &[(0, None, Some(r_m), false), (1, Some(r_p), None, true)], None);
    for i in 0..acts {
        let (a, bp) = (m.action(i), p.action(i));
        sys.equation(gp, gm, &[(0, None, Some(a), false), (0, Some(bp), None, true), (2 + i, Some(r_p), None, true)], None);
    }
    let id = Matrix::identity(b, gm);
    sys.equation(gm, gm, &[(0, Some(&pi.matrix), None, false), (z, Some(r_m), None, true)], Some(&id));
    sys.solve().map(|mut x| x.swap_remove(0))
}

/// A `Λ`-linear `r` with `r f = id`, if one exists.
pub fn is_split_injection(f: &ModuleMap) -> Option<Matrix> {
    let (c, d) = (&f.source, &f.target);
    let b = c.base();
    let (gc, gd) = (c.gens(), d.gens());
    let (rc, rd) = (c.relations().cols(), d.relations().cols());
    let acts = c.actions().len();
    // unknowns: R (gc x gd), Y0 (rc x rd), Y_i (rc x gd), Z (rc x gc)
    let mut shapes = vec![(gc, gd), (rc, rd)];
    shapes.extend((0..acts).map(|_| (rc, gd)));
    shapes.push((rc, gc));
    let z = shapes.len() - 1;
    let mut sys = MatrixSystem::new(b, &shapes);
    let (r_c, r_d) = (c.relations(), d.relations());
    sys.equation(gc, rd, &[(0, None, Some(r_d), false), (1, Some(r_c), None, true)], None);
    for i in 0..acts {
        let (ad, ac) = (d.action(i), c.action(i));
        sys.equation(gc, gd, &[(0, None, Some(ad), false), (0, Some(ac), None, true), (2 + i, Some(r_c), None, true)], None);
    }
    let id = Matrix::identity(b, gc);
    sys.equation(gc, gc, &[(0, None, Some(&f.matrix), false), (z, Some(r_c), None, true)], Some(&id));
    sys.solve().map(|mut x| x.swap_remove(0))
}

/// `End_Λ(T)` with composition as product (this is `Γ^op` for the tilted
/// ring `Γ = End_Λ(T)^op`), together with `T` as a left module over it.
#[derive(Clone, Debug)]
pub struct EndAlgebra {
    pub hom: HomSpace,
    /// Basis `F_i` = the generators of `hom`, `e_i e_j = F_i ∘ F_j`.
    pub algebra: Arc<Algebra>,
    /// `T` with `e_i` acting by `F_i`.
    pub module: AlgModule,
}

impl EndAlgebra {
    /// The tilted ring `Γ = End_Λ(T)^op`.
    pub fn gamma(&self) -> Algebra {
        crate::algebra::opposite_algebra(&self.algebra)
    }

    /// Coordinates of an endomorphism given as a matrix.
    pub fn coords(&self, f: &Matrix) -> Option<Vec<Elem>> {
        self.hom.coords(f)
    }
}

pub fn end_algebra(t: &AlgModule) -> Result<EndAlgebra> {
    let hom = hom_over_algebra(t, t)?;
    let gens = hom.generators();
    let b = t.base();
    let coords = |f: &Matrix| hom.coords(f).ok_or_else(|| Error::Invalid("composite is not an endomorphism".into()));
    let mut mult = Vec::with_capacity(gens.len());
    for fi in &gens {
        let row = gens.iter().map(|fj| coords(&fi.mul(fj))).collect::<Result<Vec<_>>>()?;
        mult.push(row);
    }
    let one = coords(&Matrix::identity(b, t.gens()))?;
    let algebra = Arc::new(Algebra::new(hom.module().clone(), mult, one)?);
    let module = AlgModule::new(&algebra, t.underlying().clone(), gens)?;
    Ok(EndAlgebra { hom, algebra, module })
}

/// `x_•`: multiplication by `x` on `T` as a central element of `End_Λ(T)`.
pub fn central_action_of(x: &CentralElement, t: &AlgModule, end: &EndAlgebra) -> Result<CentralElement> {
    if **x.parent() != **t.algebra() {
        return Err(Error::AlgebraMismatch);
    }
    let f = t.act(x.coords());
    let c = end.coords(&f).ok_or_else(|| Error::Invalid("x does not act by an endomorphism".into()))?;
    CentralElement::new(&end.algebra, c)
}

/// `Hom_Λ(M, N)` as a plain module.
pub fn hom_module(m: &AlgModule, n: &AlgModule) -> Result<FgModule> {
    Ok(hom_over_algebra(m, n)?.module().clone())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate_algebra;
    use crate::catalog;
    use crate::linalg::BaseRing;

    #[test]
    fn hom_examples() {
        let d = Arc::new(catalog::dual_numbers());
        let reg = AlgModule::regular(&d);
        let res = catalog::dual_residue(&d);
        assert_eq!(hom_module(&res, &reg).unwrap().normal_form().to_string(), "Z");
        assert_eq!(hom_module(&reg, &res).unwrap().normal_form().to_string(), "Z");
        assert_eq!(hom_module(&reg, &reg).unwrap().normal_form().to_string(), "Z ⊕ Z");
        let c2 = Arc::new(catalog::group_ring_c2());
        assert!(hom_module(&catalog::c2_trivial(&c2), &catalog::c2_sign(&c2)).unwrap().is_zero());
        assert!(hom_over_algebra(&reg, &catalog::c2_trivial(&c2)).is_err());
    }

    #[test]
    fn split_surjections() {
        let z = Arc::new(catalog::integers());
        let b = z.base();
        let zz = catalog::z_module(&z, &[0]);
        assert!(is_split_surjection(&ModuleMap::identity(&zz)).is_some());
        let z2 = catalog::z_module(&z, &[2]);
        let pi = ModuleMap::new(&zz, &z2, Matrix::from_rows(b, &[vec![1]])).unwrap();
        assert!(is_split_surjection(&pi).is_none());
        let tri = Arc::new(catalog::lower_triangular());
        let l2 = AlgModule::free(&tri, 2);
        let l1 = AlgModule::free(&tri, 1);
        let proj = Matrix::hstack(b, 3, &[&Matrix::identity(b, 3), &Matrix::zeros(b, 3, 3)]);
        let pi = ModuleMap::new(&l2, &l1, proj.clone()).unwrap();
        let s = is_split_surjection(&pi).unwrap();
        assert_eq!(proj.mul(&s), Matrix::identity(b, 3));
        assert!(ModuleMap::new(&zz, &z2, Matrix::from_rows(b, &[vec![1], vec![0]])).is_err());
        // Z -> Z ⊕ Z/2, 1 -> (1, 1) splits; 2 : Z -> Z does not
        let t = catalog::z_module(&z, &[0, 2]);
        let f = ModuleMap::new(&zz, &t, Matrix::from_rows(b, &[vec![1], vec![1]])).unwrap();
        let r = is_split_injection(&f).unwrap();
        assert_eq!(r.mul(&f.matrix), Matrix::identity(b, 1));
        let f = ModuleMap::new(&zz, &zz, Matrix::from_rows(b, &[vec![2]])).unwrap();
        assert!(is_split_injection(&f).is_none());
    }

    #[test]
    fn endomorphism_algebras() {
        let z = Arc::new(catalog::integers());
        let e = end_algebra(&catalog::z_module(&z, &[0, 0])).unwrap();
        assert_eq!(e.algebra.rank(), 4);
        assert!(e.algebra.is_free());
        assert!(validate_algebra(&e.algebra).is_empty());
        assert!(e.module.validate().is_empty());
        let two = CentralElement::scalar(&z, 2);
        let x = central_action_of(&two, &catalog::z_module(&z, &[0, 0]), &e).unwrap();
        assert_eq!(x.coords().to_vec(), e.algebra.scalar(2));

        let m = catalog::z_module(&z, &[0, 2]);
        let e = end_algebra(&m).unwrap();
        assert!(validate_algebra(&e.algebra).is_empty());
        // End(Z ⊕ Z/2) = Z ⊕ Z/2 (Hom(Z,Z/2)) ⊕ Z/2 (End(Z/2)), Hom(Z/2,Z) = 0
        assert_eq!(e.algebra.underlying().normal_form().to_string(), "Z/2 ⊕ Z/2 ⊕ Z");
        let x = central_action_of(&two, &m, &e).unwrap();
        // 2 on the Z block, 0 on the Z/2 blocks: still 2 * 1 modulo relations
        assert_eq!(e.algebra.as_scalar(x.coords()), Some(z.base().from_int(2)));
        assert!(!e.algebra.is_free());

        let c2 = Arc::new(catalog::group_ring_c2());
        let e = end_algebra(&AlgModule::regular(&c2)).unwrap();
        assert_eq!(e.algebra.rank(), 2);
        assert!(validate_algebra(&e.algebra).is_empty());
        assert_eq!(*e.algebra.base(), BaseRing::Integers);
    }
}
