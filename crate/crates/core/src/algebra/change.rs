//! The two base changes at a central element `x`: `Λ/xΛ` and `Λ_x`.

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{AlgModule, Algebra, CentralElement};
use crate::error::{Error, Result};
use crate::linalg::fgmod::preimage_of_zero;
use crate::linalg::{smith_normal_form, BaseRing, Elem, FgModule, Matrix};

fn require_integers(a: &Algebra) -> Result<()> {
    if *a.base() != BaseRing::Integers {
        return Err(Error::Unsupported(format!("base change of an algebra over {}", a.base())));
    }
    Ok(())
}

fn rebase_algebra(a: &Algebra, to: &BaseRing, extra_relations: Option<&Matrix>) -> Result<Algebra> {
    let mut rel = a.relations().change_base(to)?;
    if let Some(x) = extra_relations {
        rel = Matrix::hstack(to, a.rank(), &[&rel, &x.change_base(to)?]);
    }
    let conv = |v: &Vec<Elem>| v.iter().map(|e| to.from_integer_elem(e)).collect::<Vec<_>>();
    let mult = a.table().iter().map(|row| row.iter().map(conv).collect()).collect();
    Algebra::new(FgModule::new(rel), mult, conv(&a.one().to_vec()))
}

/// `Λ/xΛ`, with the canonical projection given by keeping generators.
#[derive(Clone, Debug)]
pub struct Quotient {
    pub source: Arc<Algebra>,
    pub algebra: Arc<Algebra>,
    /// `Some(m)` when `x = m * 1` and the result was re-based to `Z/|m|`.
    pub modulus: Option<BigInt>,
    x: Vec<Elem>,
}

impl Quotient {
    pub fn new(x: &CentralElement) -> Result<Self> {
        Self::build(x, true)
    }

    /// `Λ/mΛ` over `Z/|m|` for an `x` known to equal `m * 1` modulo relations
    /// (used when `m` is not determined by `x` alone, e.g. a torsion unit).
    pub fn with_modulus(x: &CentralElement, m: BigInt) -> Result<Self> {
        let a = x.parent();
        require_integers(a)?;
        let b = a.base();
        let diff: Vec<Elem> = a.scalar_big(&m).iter().zip(x.coords()).map(|(p, q)| b.sub(p, q)).collect();
        if !a.underlying().is_zero_element(&diff) {
            return Err(Error::Invalid(format!("element is not {m} * 1")));
        }
        let m = m.abs();
        if m < BigInt::from(2) {
            return Err(Error::InvalidModulus(m.to_string()));
        }
        let to = BaseRing::integers_mod(m.clone())?;
        let algebra = rebase_algebra(a, &to, None)?;
        if algebra.underlying().is_zero() {
            return Err(Error::UnitElement);
        }
        Ok(Quotient { source: a.clone(), algebra: Arc::new(algebra), modulus: Some(m), x: x.coords().to_vec() })
    }

    /// `Λ/xΛ` kept over the integers with extra relations, even for scalars.
    pub fn over_integers(x: &CentralElement) -> Result<Self> {
        Self::build(x, false)
    }

    fn build(x: &CentralElement, rebase: bool) -> Result<Self> {
        let a = x.parent();
        require_integers(a)?;
        let scalar = if rebase { x.integer_scalar() } else { None };
        let (algebra, modulus) = match scalar {
            Some(m) if m.abs() >= BigInt::from(2) => {
                let to = BaseRing::integers_mod(m.abs())?;
                (rebase_algebra(a, &to, None)?, Some(m.abs()))
            }
            Some(m) if m.is_zero() => (rebase_algebra(a, a.base(), None)?, None),
            Some(_) => return Err(Error::UnitElement),
            None => {
                let xm = a.left_mult(x.coords());
                (rebase_algebra(a, a.base(), Some(&xm))?, None)
            }
        };
        if algebra.underlying().is_zero() {
            return Err(Error::UnitElement);
        }
        Ok(Quotient { source: a.clone(), algebra: Arc::new(algebra), modulus, x: x.coords().to_vec() })
    }

    /// `M/xM` over the quotient algebra.
    pub fn module(&self, m: &AlgModule) -> Result<AlgModule> {
        Ok(self.module_on_same_generators(m)?.simplify())
    }

    /// `M/xM` presented on the generators of `M`, so that maps out of `M`
    /// reduce entrywise.
    pub fn module_on_same_generators(&self, m: &AlgModule) -> Result<AlgModule> {
        if **m.algebra() != *self.source {
            return Err(Error::AlgebraMismatch);
        }
        if self.modulus.is_some() {
            return m.rebase(&self.algebra);
        }
        let xm = m.act(&self.x);
        let q = m.quotient_by(&xm);
        Ok(AlgModule::new(&self.algebra, q.underlying().clone(), q.actions().to_vec())?.with_hints(q.hints().to_vec()))
    }

    /// Image of an element of `Λ` in `Λ/xΛ`.
    pub fn reduce(&self, v: &[Elem]) -> Vec<Elem> {
        let to = self.algebra.base();
        v.iter().map(|e| to.from_integer_elem(e)).collect()
    }
}

/// `Λ_x = Λ ⊗ Z[1/c]`.
#[derive(Clone, Debug)]
pub struct Localization {
    pub source: Arc<Algebra>,
    pub algebra: Arc<Algebra>,
    pub c: BigInt,
    x: Vec<Elem>,
}

impl Localization {
    pub fn new(x: &CentralElement) -> Result<Self> {
        let c = localization_constant(x)?;
        let a = x.parent();
        let to = BaseRing::integers_loc(c.clone())?;
        let algebra = Arc::new(rebase_algebra(a, &to, None)?);
        Ok(Localization { source: a.clone(), algebra, c, x: x.coords().to_vec() })
    }

    /// `M_x`: x-power torsion is removed first, then the base is extended.
    pub fn module(&self, m: &AlgModule) -> Result<AlgModule> {
        if **m.algebra() != *self.source {
            return Err(Error::AlgebraMismatch);
        }
        let free_part = remove_power_torsion(m, &self.x);
        Ok(free_part.rebase(&self.algebra)?.simplify())
    }

    /// `M ⊗ Z[1/c]` on the generators of `M` (isomorphic to [`Localization::module`]).
    pub fn module_on_same_generators(&self, m: &AlgModule) -> Result<AlgModule> {
        if **m.algebra() != *self.source {
            return Err(Error::AlgebraMismatch);
        }
        m.rebase(&self.algebra)
    }

    /// `Λ_x` for an `x` whose localization constant is already known to work
    /// (used for `End(T)` at `x_•`, which inherits the constant of `x`).
    pub fn with_constant(x: &CentralElement, c: BigInt) -> Result<Self> {
        let a = x.parent();
        require_integers(a)?;
        let to = BaseRing::integers_loc(c.clone())?;
        let algebra = Arc::new(rebase_algebra(a, &to, None)?);
        Ok(Localization { source: a.clone(), algebra, c, x: x.coords().to_vec() })
    }
}

/// `M / ∪_j ker(x^j)`.
fn remove_power_torsion(m: &AlgModule, x: &[Elem]) -> AlgModule {
    let xm = m.act(x);
    let u = m.underlying();
    let b = m.base();
    let mut power = xm.clone();
    let mut torsion = preimage_of_zero(&power, u);
    loop {
        power = power.mul(&xm);
        let next = preimage_of_zero(&power, u);
        let span = FgModule::new(Matrix::hstack(b, m.gens(), &[u.relations(), &torsion]));
        let grown = !span.columns_vanish(&next);
        torsion = next;
        if !grown {
            break;
        }
    }
    if u.columns_vanish(&torsion) {
        return m.clone();
    }
    m.quotient_by(&torsion)
}

/// `c = |det X|` for the matrix `X` of multiplication by `x`, so that
/// `Λ_x = Λ[1/c]`. For `x = m * 1` this is just `|m|`.
///
/// For other `x`, `Λ[1/c]` inverts `x` but may invert more; it equals `Λ_x`
/// exactly when `x^k ∈ cΛ` for some `k`, which is checked.
pub fn localization_constant(x: &CentralElement) -> Result<BigInt> {
    let a = x.parent();
    require_integers(a)?;
    if let Some(m) = x.integer_scalar() {
        return match m.abs() {
            m if m.is_zero() => Err(Error::NotRegular("x = 0".into())),
            m if m.is_one() => Err(Error::UnitElement),
            m => Ok(m),
        };
    }
    if !a.is_free() {
        return Err(Error::Unsupported("localizing an algebra with relations at a non-scalar element".into()));
    }
    let xm = a.left_mult(x.coords());
    let snf = smith_normal_form(&xm);
    let mut det = BigInt::one();
    for i in 0..a.rank() {
        det *= snf.d(i).numerator();
    }
    let c = det.abs();
    if c.is_zero() {
        return Err(Error::NotRegular("multiplication by x has determinant 0".into()));
    }
    if c.is_one() {
        return Err(Error::UnitElement);
    }
    // x nilpotent mod every prime of c gives x^(rank * e) ∈ p^e Λ; bits(c) bounds every e
    let bound = a.rank() as u64 * c.bits();
    let b = a.base();
    let cz = b.from_int(c.clone());
    let mut p = x.coords().to_vec();
    for _ in 0..bound {
        if p.iter().all(|e| b.divides(&cz, e)) {
            return Ok(c);
        }
        p = a.mul(&p, x.coords());
    }
    Err(Error::Unsupported(format!(
        "Λ_x is not Λ[1/{c}]: no power of x lies in {c}Λ"
    )))
}

pub fn quotient_algebra(x: &CentralElement) -> Result<Algebra> {
    Ok((*Quotient::new(x)?.algebra).clone())
}

pub fn quotient_module(m: &AlgModule, x: &CentralElement) -> Result<AlgModule> {
    Quotient::new(x)?.module(m)
}

pub fn localize_algebra(x: &CentralElement) -> Result<Algebra> {
    Ok((*Localization::new(x)?.algebra).clone())
}

pub fn localize_module(m: &AlgModule, x: &CentralElement) -> Result<AlgModule> {
    Localization::new(x)?.module(m)
}
