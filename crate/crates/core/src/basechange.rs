//! Instance checks comparing Hom, Ext, End and projective dimension before
//! and after passing to `Λ/xΛ` and `Λ_x`.

use std::fmt;

use serde::Serialize;

use crate::algebra::{is_regular_on, AlgModule, Algebra, CentralElement, Localization, Quotient, Regularity};
use crate::error::Result;
use crate::homalg::{central_action_of, end_algebra, ext, ext_range, hom_over_algebra, pd_at_most, PdVerdict};
use crate::linalg::fgmod::{is_well_defined, localize_normal_form, map_injective, map_surjective};
use crate::linalg::{localize_fg, quotient_fg, FgModule, HomSpace, Matrix, NormalForm};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "snake_case")]
pub enum Verdict {
    Holds,
    Fails(String),
    Inapplicable(String),
}

/// How a `Holds` was reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Branch {
    /// Both sides computed and compared.
    Substantive,
    /// The hypothesis of an implication failed.
    Vacuous,
    /// Only consistency of bounded data could be checked.
    Bounded,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(untagged)]
pub enum Quantity {
    Group(NormalForm),
    Pd(Option<PdVerdict>),
    Flag(bool),
}

impl fmt::Display for Quantity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Quantity::Group(nf) => write!(f, "{nf}"),
            Quantity::Pd(Some(p)) => write!(f, "{p}"),
            Quantity::Pd(None) => write!(f, "zero module"),
            Quantity::Flag(b) => write!(f, "{}", if *b { "yes" } else { "no" }),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Comparison {
    pub label: String,
    pub lhs: Quantity,
    pub rhs: Quantity,
}

impl Comparison {
    fn new(label: impl Into<String>, lhs: Quantity, rhs: Quantity) -> Self {
        Comparison { label: label.into(), lhs, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LemmaReport {
    pub lemma: &'static str,
    pub instance: String,
    pub comparisons: Vec<Comparison>,
    pub verdict: Verdict,
    pub branch: Branch,
}

impl LemmaReport {
    fn new(lemma: &'static str, instance: String) -> Self {
        LemmaReport { lemma, instance, comparisons: Vec::new(), verdict: Verdict::Holds, branch: Branch::Substantive }
    }

    fn inapplicable(mut self, why: impl Into<String>) -> Self {
        self.verdict = Verdict::Inapplicable(why.into());
        self
    }

    fn fail(&mut self, why: impl Into<String>) {
        if self.verdict == Verdict::Holds {
            self.verdict = Verdict::Fails(why.into());
        }
    }

    pub fn with_instance(mut self, instance: impl Into<String>) -> Self {
        self.instance = instance.into();
        self
    }

    pub fn holds(&self) -> bool {
        self.verdict == Verdict::Holds
    }

    pub fn fails(&self) -> bool {
        matches!(self.verdict, Verdict::Fails(_))
    }

    pub fn is_inapplicable(&self) -> bool {
        matches!(self.verdict, Verdict::Inapplicable(_))
    }
}

fn describe(m: &AlgModule) -> String {
    format!("{} on {} generators", m.normal_form(), m.gens())
}

/// `Err(reason)` unless `x` is regular on `m`.
fn require_regular(x: &CentralElement, m: &AlgModule, name: &str) -> std::result::Result<(), String> {
    match is_regular_on(x, m) {
        Ok(Regularity::Regular) => Ok(()),
        Ok(Regularity::ZeroDivisor(_)) => Err(format!("x is a zero-divisor on {name}")),
        Ok(Regularity::UnitLike) => Err(format!("x{name} = {name}")),
        Err(e) => Err(e.to_string()),
    }
}

fn same_group(a: &NormalForm, b: &NormalForm) -> bool {
    match (a.over_integers(), b.over_integers()) {
        (Some(x), Some(y)) => x == y,
        _ => a == b,
    }
}

/// `Ext^i_Λ(M, N) ≅ Ext^i_{Λ/xΛ}(M/xM, N)` for `xN = 0`, `i <= i_max`.
pub fn check_ext_quotient_iso(x: &CentralElement, m: &AlgModule, n: &AlgModule, i_max: usize) -> Result<LemmaReport> {
    let lambda = AlgModule::regular(x.parent());
    let rep = LemmaReport::new("ext-quotient", format!("M = {}, N = {}, x = {}", describe(m), describe(n), x.describe()));
    for (mm, name) in [(&lambda, "Λ"), (m, "M")] {
        if let Err(why) = require_regular(x, mm, name) {
            return Ok(rep.inapplicable(why));
        }
    }
    if !n.underlying().columns_vanish(&n.act(x.coords())) {
        return Ok(rep.inapplicable("xN != 0"));
    }
    let q = match Quotient::new(x) {
        Ok(q) => q,
        Err(e) => return Ok(rep.inapplicable(e.to_string())),
    };
    let (mq, nq) = (q.module(m)?, q.module(n)?);
    let lhs = ext_range(m, n, i_max)?;
    let rhs = ext_range(&mq, &nq, i_max)?;
    let mut rep = rep;
    for (i, (l, r)) in lhs.iter().zip(&rhs).enumerate() {
        if !same_group(&l.normal_form, &r.normal_form) {
            rep.fail(format!("degree {i}: {} vs {}", l.normal_form, r.normal_form));
        }
        rep.comparisons.push(Comparison::new(
            format!("Ext^{i}"),
            Quantity::Group(l.normal_form.clone()),
            Quantity::Group(r.normal_form.clone()),
        ));
    }
    Ok(rep)
}

/// Images of the generators of `src` (maps over `Z`) in `tgt` after base
/// change, and whether that defines a bijection `src ⊗ base -> tgt`.
fn canonical_map(src: &HomSpace, tgt: &HomSpace) -> Result<(Matrix, bool)> {
    let to = tgt.source.base();
    let mut cols = Vec::with_capacity(src.len());
    for f in src.generators() {
        match tgt.coords(&f.change_base(to)?) {
            Some(c) => cols.push(c),
            None => return Ok((Matrix::zeros(to, tgt.len(), 0), false)),
        }
    }
    let theta = Matrix::from_cols(to, tgt.len(), &cols);
    let source = src.module().change_base(to)?;
    let target = tgt.module();
    let ok = is_well_defined(&theta, &source, target)
        && map_injective(&theta, &source, target)
        && map_surjective(&theta, target);
    Ok((theta, ok))
}

/// `Ext^i_Λ(M, N)_x ≅ Ext^i_{Λ_x}(M_x, N_x)`, plus bijectivity of the
/// canonical map `Hom_Λ(M, N)_x -> Hom_{Λ_x}(M_x, N_x)` in degree 0.
pub fn check_ext_localization_iso(x: &CentralElement, m: &AlgModule, n: &AlgModule, i_max: usize) -> Result<LemmaReport> {
    let rep = LemmaReport::new("ext-localization", format!("M = {}, N = {}, x = {}", describe(m), describe(n), x.describe()));
    let l = match Localization::new(x) {
        Ok(l) => l,
        Err(e) => return Ok(rep.inapplicable(e.to_string())),
    };
    let mut rep = rep;
    let (mx, nx) = (l.module(m)?, l.module(n)?);
    let lhs = ext_range(m, n, i_max)?;
    let rhs = ext_range(&mx, &nx, i_max)?;
    for (i, (a, b)) in lhs.iter().zip(&rhs).enumerate() {
        let la = localize_normal_form(&a.normal_form, &l.c)?;
        if la != b.normal_form {
            rep.fail(format!("degree {i}: {la} vs {}", b.normal_form));
        }
        rep.comparisons.push(Comparison::new(format!("Ext^{i}"), Quantity::Group(la), Quantity::Group(b.normal_form.clone())));
    }
    let src = hom_over_algebra(m, n)?;
    let tgt = hom_over_algebra(&l.module_on_same_generators(m)?, &l.module_on_same_generators(n)?)?;
    let (_, ok) = canonical_map(&src, &tgt)?;
    if !ok {
        rep.fail("the canonical map on Hom is not bijective");
    }
    rep.comparisons.push(Comparison::new("canonical Hom map bijective", Quantity::Flag(true), Quantity::Flag(ok)));
    Ok(rep)
}

/// Compares `ebar` (an algebra on the generators `F_i` of `End_Λ(M)`) with
/// `End(target)` through `F_i ↦ F_i` after base change.
fn compare_end(rep: &mut LemmaReport, ebar: &Algebra, gens: &[Matrix], target: &AlgModule) -> Result<()> {
    let r = end_algebra(target)?;
    let lhs = ebar.underlying().normal_form();
    let rhs = r.algebra.underlying().normal_form();
    if !same_group(&lhs, &rhs) {
        rep.fail(format!("{lhs} vs {rhs}"));
    }
    rep.comparisons.push(Comparison::new("underlying group", Quantity::Group(lhs), Quantity::Group(rhs)));
    let to = ebar.base();
    let mut cols = Vec::with_capacity(gens.len());
    let mut images = Vec::with_capacity(gens.len());
    for f in gens {
        let fb = f.change_base(to)?;
        match r.coords(&fb) {
            Some(c) => cols.push(c),
            None => {
                rep.fail("a generator does not reduce to an endomorphism");
                return Ok(());
            }
        }
        images.push(fb);
    }
    let theta = Matrix::from_cols(to, r.algebra.rank(), &cols);
    let (src, tgt) = (ebar.underlying(), r.algebra.underlying());
    let bij = is_well_defined(&theta, src, tgt) && map_injective(&theta, src, tgt) && map_surjective(&theta, tgt);
    if !bij {
        rep.fail("the canonical map is not bijective");
    }
    rep.comparisons.push(Comparison::new("canonical map bijective", Quantity::Flag(true), Quantity::Flag(bij)));
    let mut mult = r.algebra.equal(&theta.mul_vec(ebar.one()), r.algebra.one());
    for (i, fi) in images.iter().enumerate() {
        for (j, fj) in images.iter().enumerate() {
            let Some(direct) = r.coords(&fi.mul(fj)) else {
                mult = false;
                continue;
            };
            mult &= r.algebra.equal(&theta.mul_vec(&ebar.table()[i][j]), &direct);
        }
    }
    if !mult {
        rep.fail("structure constants are not preserved");
    }
    rep.comparisons.push(Comparison::new("structure constants preserved", Quantity::Flag(true), Quantity::Flag(mult)));
    Ok(())
}

/// `End_Λ(M)/x_• End_Λ(M) ≅ End_{Λ/xΛ}(M/xM)` as rings, when `Ext^1_Λ(M, M) = 0`.
pub fn check_end_mod_x_iso(x: &CentralElement, m: &AlgModule) -> Result<LemmaReport> {
    let lambda = AlgModule::regular(x.parent());
    let rep = LemmaReport::new("end-quotient", format!("M = {}, x = {}", describe(m), x.describe()));
    for (mm, name) in [(&lambda, "Λ"), (m, "M")] {
        if let Err(why) = require_regular(x, mm, name) {
            return Ok(rep.inapplicable(why));
        }
    }
    let e1 = ext(m, m, 1)?;
    if !e1.is_zero() {
        return Ok(rep.inapplicable(format!("Ext^1(M, M) = {} != 0", e1.normal_form)));
    }
    let q = match Quotient::new(x) {
        Ok(q) => q,
        Err(e) => return Ok(rep.inapplicable(e.to_string())),
    };
    let e = end_algebra(m)?;
    let xe = central_action_of(x, m, &e)?;
    let qe = match &q.modulus {
        Some(c) => Quotient::with_modulus(&xe, c.clone())?,
        None => Quotient::over_integers(&xe)?,
    };
    let mut rep = rep;
    let mbar = q.module_on_same_generators(m)?;
    compare_end(&mut rep, &qe.algebra, &e.hom.generators(), &mbar)?;
    Ok(rep)
}

/// `End_Λ(M)_{x_•} ≅ End_{Λ_x}(M_x)` as rings.
pub fn check_end_localization_iso(x: &CentralElement, m: &AlgModule) -> Result<LemmaReport> {
    let lambda = AlgModule::regular(x.parent());
    let rep = LemmaReport::new("end-localization", format!("M = {}, x = {}", describe(m), x.describe()));
    for (mm, name) in [(&lambda, "Λ"), (m, "M")] {
        if let Err(why) = require_regular(x, mm, name) {
            return Ok(rep.inapplicable(why));
        }
    }
    let l = match Localization::new(x) {
        Ok(l) => l,
        Err(e) => return Ok(rep.inapplicable(e.to_string())),
    };
    let e = end_algebra(m)?;
    let xe = central_action_of(x, m, &e)?;
    // x^k = c y in Λ gives the same in End(M), so c works for x_• as well
    let le = Localization::with_constant(&xe, l.c.clone())?;
    let mut rep = rep;
    let mx = l.module_on_same_generators(m)?;
    compare_end(&mut rep, &le.algebra, &e.hom.generators(), &mx)?;
    Ok(rep)
}

/// `Ext^n_{Λ_x}(M_x, T_x) = 0` and `Ext^n_{Λ/xΛ}(M/xM, T/xT) = 0` imply
/// `Ext^n_Λ(M, T) = 0`.
pub fn check_self_orthogonality_descent(x: &CentralElement, m: &AlgModule, t: &AlgModule, n: usize) -> Result<LemmaReport> {
    let lambda = AlgModule::regular(x.parent());
    let rep = LemmaReport::new(
        "self-orthogonality-descent",
        format!("M = {}, T = {}, x = {}, n = {n}", describe(m), describe(t), x.describe()),
    );
    for (mm, name) in [(&lambda, "Λ"), (m, "M"), (t, "T")] {
        if let Err(why) = require_regular(x, mm, name) {
            return Ok(rep.inapplicable(why));
        }
    }
    let (l, q) = match (Localization::new(x), Quotient::new(x)) {
        (Ok(l), Ok(q)) => (l, q),
        (Err(e), _) | (_, Err(e)) => return Ok(rep.inapplicable(e.to_string())),
    };
    let ex = ext(&l.module(m)?, &l.module(t)?, n)?;
    let eq = ext(&q.module(m)?, &q.module(t)?, n)?;
    let up = ext(m, t, n)?;
    let mut rep = rep;
    rep.comparisons.push(Comparison::new(
        format!("Ext^{n} over Λ_x, Λ/xΛ"),
        Quantity::Group(ex.normal_form.clone()),
        Quantity::Group(eq.normal_form.clone()),
    ));
    rep.comparisons.push(Comparison::new(
        format!("Ext^{n} over Λ"),
        Quantity::Flag(ex.is_zero() && eq.is_zero()),
        Quantity::Group(up.normal_form.clone()),
    ));
    if ex.is_zero() && eq.is_zero() {
        if !up.is_zero() {
            rep.fail(format!("both base changes vanish but Ext^{n}_Λ = {}", up.normal_form));
        }
    } else {
        rep.branch = Branch::Vacuous;
    }
    Ok(rep)
}

/// `pd_Λ(M) = max(pd_{Λ/xΛ}(M/xM), pd_{Λ_x}(M_x))` with bounded verdicts; a
/// zero module has dimension `-∞` and drops out of the maximum.
pub fn check_pd_max_formula(x: &CentralElement, m: &AlgModule, n_max: usize) -> Result<LemmaReport> {
    let lambda = AlgModule::regular(x.parent());
    let rep = LemmaReport::new("pd-max", format!("M = {}, x = {}, bound {n_max}", describe(m), x.describe()));
    for (mm, name) in [(&lambda, "Λ"), (m, "M")] {
        if let Err(why) = require_regular(x, mm, name) {
            return Ok(rep.inapplicable(why));
        }
    }
    let (l, q) = match (Localization::new(x), Quotient::new(x)) {
        (Ok(l), Ok(q)) => (l, q),
        (Err(e), _) | (_, Err(e)) => return Ok(rep.inapplicable(e.to_string())),
    };
    let pd = |mm: &AlgModule| (!mm.is_zero()).then(|| pd_at_most(mm, n_max));
    let up = pd_at_most(m, n_max);
    let pq = pd(&q.module(m)?);
    let px = pd(&l.module(m)?);
    let mut rep = rep;
    rep.comparisons.push(Comparison::new("pd over Λ/xΛ, Λ_x", Quantity::Pd(pq), Quantity::Pd(px)));
    let sides: Vec<PdVerdict> = [pq, px].into_iter().flatten().collect();
    let decided = sides.iter().all(|p| p.value().is_some());
    let expected = sides.iter().filter_map(PdVerdict::value).max();
    rep.comparisons.push(Comparison::new(
        "pd over Λ vs max",
        Quantity::Pd(Some(up)),
        Quantity::Pd(if decided { expected.map(PdVerdict::Yes) } else { Some(PdVerdict::NoUpTo(n_max)) }),
    ));
    match (up, decided) {
        (PdVerdict::Yes(k), true) => {
            if expected != Some(k) {
                rep.fail(format!("pd_Λ = {k} but the maximum is {expected:?}"));
            }
        }
        (PdVerdict::Yes(k), false) => rep.fail(format!("pd_Λ = {k} but a base change has pd > {n_max}")),
        (PdVerdict::NoUpTo(_), true) => {
            rep.fail(format!("both base changes have pd <= {n_max} but pd_Λ > {n_max}"));
        }
        (PdVerdict::NoUpTo(_), false) => rep.branch = Branch::Bounded,
    }
    Ok(rep)
}

/// `M = 0` iff `M_x = 0` and `M/xM = 0`, for a module over `Z` and an
/// integer `x` with `|x| >= 2`.
pub fn check_zerox(m: &FgModule, x: i64) -> Result<LemmaReport> {
    let mut rep = LemmaReport::new("zero-detection", format!("M = {}, x = {x}", m.normal_form()));
    let mx = localize_fg(m, x)?;
    let mq = quotient_fg(m, x.unsigned_abs())?;
    let both = mx.is_zero() && mq.is_zero();
    rep.comparisons.push(Comparison::new("M_x, M/xM", Quantity::Group(mx.normal_form()), Quantity::Group(mq.normal_form())));
    rep.comparisons.push(Comparison::new("M = 0 vs both zero", Quantity::Flag(m.is_zero()), Quantity::Flag(both)));
    if m.is_zero() != both {
        rep.fail("zero detection disagrees");
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::catalog;
    use crate::linalg::BaseRing;

    #[test]
    fn ext_quotient_examples() {
        let z = Arc::new(catalog::integers());
        let two = CentralElement::scalar(&z, 2);
        let r = check_ext_quotient_iso(&two, &catalog::z_module(&z, &[0]), &catalog::z_module(&z, &[2]), 2).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.comparisons[0].lhs.to_string(), "Z/2");
        assert_eq!(r.comparisons[1].lhs.to_string(), "0");
        let c2 = Arc::new(catalog::group_ring_c2());
        let b = c2.base();
        let f2 = AlgModule::new(&c2, FgModule::from_orders(b, &[2]), vec![Matrix::identity(b, 1); 2]).unwrap();
        let r = check_ext_quotient_iso(&CentralElement::scalar(&c2, 2), &catalog::c2_trivial(&c2), &f2, 3).unwrap();
        assert!(r.holds(), "{r:?}");
        // mod-2 cohomology of C_2 is Z/2 in every degree
        assert!(r.comparisons.iter().all(|c| c.lhs.to_string() == "Z/2"));
        let r = check_ext_quotient_iso(&two, &catalog::z_module(&z, &[2]), &catalog::z_module(&z, &[2]), 1).unwrap();
        assert!(r.is_inapplicable());
    }

    #[test]
    fn ext_localization_examples() {
        let z = Arc::new(catalog::integers());
        let z3 = catalog::z_module(&z, &[3]);
        let r = check_ext_localization_iso(&CentralElement::scalar(&z, 2), &z3, &z3, 2).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.comparisons[1].rhs.to_string(), "Z/3");
        let r = check_ext_localization_iso(&CentralElement::scalar(&z, 3), &z3, &z3, 2).unwrap();
        assert!(r.holds());
        assert!(r.comparisons.iter().take(3).all(|c| c.rhs.to_string() == "0"));
        let c2 = Arc::new(catalog::group_ring_c2());
        let t = catalog::c2_trivial(&c2);
        let r = check_ext_localization_iso(&CentralElement::scalar(&c2, 2), &t, &t, 3).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.comparisons[0].rhs.to_string(), "Z[1/2]");
        assert_eq!(r.comparisons[2].rhs.to_string(), "0");
    }

    #[test]
    fn end_quotient_examples() {
        let z = Arc::new(catalog::integers());
        let two = CentralElement::scalar(&z, 2);
        for orders in [&[0][..], &[0, 0][..]] {
            let r = check_end_mod_x_iso(&two, &catalog::z_module(&z, orders)).unwrap();
            assert!(r.holds(), "{r:?}");
            assert_eq!(r.branch, Branch::Substantive);
        }
        let r = check_end_mod_x_iso(&two, &catalog::z_module(&z, &[0, 2])).unwrap();
        assert!(r.is_inapplicable());
        let r = check_end_localization_iso(&two, &catalog::z_module(&z, &[0, 0])).unwrap();
        assert!(r.holds(), "{r:?}");
        let tri = Arc::new(catalog::lower_triangular());
        let t = catalog::tri_tilting(&tri);
        let x = CentralElement::scalar(&tri, 2);
        assert!(check_end_mod_x_iso(&x, &t).unwrap().holds());
        assert!(check_end_localization_iso(&x, &t).unwrap().holds());
    }

    #[test]
    fn descent_examples() {
        let z = Arc::new(catalog::integers());
        let zz = catalog::z_module(&z, &[0]);
        let r = check_self_orthogonality_descent(&CentralElement::scalar(&z, 2), &zz, &zz, 1).unwrap();
        assert!(r.holds());
        assert_eq!(r.branch, Branch::Substantive);
        let c2 = Arc::new(catalog::group_ring_c2());
        let x = CentralElement::scalar(&c2, 2);
        let reg = AlgModule::regular(&c2);
        assert_eq!(check_self_orthogonality_descent(&x, &reg, &reg, 1).unwrap().branch, Branch::Substantive);
        let t = catalog::c2_trivial(&c2);
        let r = check_self_orthogonality_descent(&x, &t, &t, 2).unwrap();
        assert!(r.holds());
        assert_eq!(r.branch, Branch::Vacuous);
    }

    #[test]
    fn pd_formula_examples() {
        let z = Arc::new(catalog::integers());
        let r = check_pd_max_formula(&CentralElement::scalar(&z, 2), &catalog::z_module(&z, &[0]), 6).unwrap();
        assert!(r.holds());
        let c2 = Arc::new(catalog::group_ring_c2());
        let m = AlgModule::free(&c2, 3);
        assert!(check_pd_max_formula(&CentralElement::scalar(&c2, 2), &m, 6).unwrap().holds());
        let tri = Arc::new(catalog::lower_triangular());
        let r = check_pd_max_formula(&CentralElement::scalar(&tri, 2), &catalog::tri_s2(&tri), 6).unwrap();
        assert!(r.holds(), "{r:?}");
        assert_eq!(r.comparisons[1].lhs, Quantity::Pd(Some(PdVerdict::Yes(1))));
        // Z_triv over Z[C_2]: infinite pd upstairs and mod 2, projective after inverting 2
        let r = check_pd_max_formula(&CentralElement::scalar(&c2, 2), &catalog::c2_trivial(&c2), 4).unwrap();
        assert!(r.holds());
        assert_eq!(r.branch, Branch::Bounded);
    }

    #[test]
    fn zero_detection() {
        let b = BaseRing::Integers;
        for orders in [&[][..], &[4][..], &[3][..], &[0][..]] {
            assert!(check_zerox(&FgModule::from_orders(&b, orders), 2).unwrap().holds());
        }
    }
}
