//! Free covers, projective resolutions and Ext.
//!
//! `Λ^g` has ambient coordinates copy by copy; `ε_t` denotes the unit in
//! copy `t`. A cover `Λ^g -> M` is determined by the images `u_t` of the
//! `ε_t`, and `Hom_Λ(Λ^g, N) = N^g` by evaluation at the `ε_t`.

use serde::Serialize;

use super::{is_split_surjection, ModuleMap};
use crate::algebra::AlgModule;
use crate::error::{Error, Result};
use crate::linalg::fgmod::preimage_of_zero;
use crate::linalg::{FgModule, Matrix, NormalForm, Subquotient};

#[derive(Clone, Debug)]
pub struct FreeCover {
    pub rank: usize,
    pub free: AlgModule,
    /// Column `t` is `u_t`, in the generators of the covered module.
    pub images: Matrix,
    /// The surjection on underlying generators.
    pub map: Matrix,
    pub syzygy: AlgModule,
    /// Generators of the syzygy as ambient vectors of `free`.
    pub inclusion: Matrix,
}

impl FreeCover {
    pub fn surjection(&self, target: &AlgModule) -> ModuleMap {
        ModuleMap { source: self.free.clone(), target: target.clone(), matrix: self.map.clone() }
    }
}

pub fn free_cover(m: &AlgModule) -> FreeCover {
    let a = m.algebra();
    let b = m.base();
    let u = m.lambda_generators();
    let g = u.len();
    let free = AlgModule::free(a, g);
    let images = Matrix::from_cols(b, m.gens(), &u);
    let mut cols = Vec::with_capacity(g * a.rank());
    for ut in &u {
        for act in m.actions() {
            cols.push(act.mul_vec(ut));
        }
    }
    let map = Matrix::from_cols(b, m.gens(), &cols);
    let k = preimage_of_zero(&map, m.underlying());
    let (syzygy, inclusion) = free.submodule(&k);
    FreeCover { rank: g, free, images, map, syzygy, inclusion }
}

/// `... -> P_1 -> P_0 -> M -> 0` with `covers[k]` the cover `P_k -> Ω_k`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub module: AlgModule,
    pub covers: Vec<FreeCover>,
}

impl Resolution {
    pub fn len(&self) -> usize {
        self.covers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.covers.is_empty()
    }

    /// `Ω_k`, with `Ω_0 = M`; available for `k <= len`.
    pub fn syzygy(&self, k: usize) -> &AlgModule {
        if k == 0 {
            &self.module
        } else {
            &self.covers[k - 1].syzygy
        }
    }

    pub fn ranks(&self) -> Vec<usize> {
        self.covers.iter().map(|c| c.rank).collect()
    }

    /// `d_k : P_k -> P_{k-1}` on the `ε_t` (ambient of `P_{k-1}` x rank of `P_k`).
    pub fn boundary(&self, k: usize) -> Matrix {
        self.covers[k - 1].inclusion.mul(&self.covers[k].images)
    }
}

pub fn resolution(m: &AlgModule, len: usize) -> Resolution {
    let mut covers: Vec<FreeCover> = Vec::with_capacity(len);
    for k in 0..len {
        let c = free_cover(if k == 0 { m } else { &covers[k - 1].syzygy });
        covers.push(c);
    }
    Resolution { module: m.clone(), covers }
}

/// `Ext^i_Λ(M, N)` with explicit cocycle representatives.
#[derive(Clone, Debug, Serialize)]
pub struct ExtResult {
    pub degree: usize,
    pub normal_form: NormalForm,
    #[serde(skip)]
    pub group: FgModule,
    /// Generating cocycles as elements of `N^{g_i}`.
    #[serde(skip)]
    pub cocycles: Matrix,
    /// Coboundaries together with the relations of `N^{g_i}`.
    #[serde(skip)]
    pub coboundaries: Matrix,
}

impl ExtResult {
    pub fn is_zero(&self) -> bool {
        self.normal_form.is_zero()
    }
}

fn power(n: &FgModule, g: usize) -> FgModule {
    let blocks: Vec<&Matrix> = (0..g).map(|_| n.relations()).collect();
    FgModule::new(Matrix::block_diag(n.base(), &blocks))
}

/// For `f: Λ^g -> N` given by `(f(ε_1), ..., f(ε_g)) ∈ N^g`, the values of `f`
/// on the columns of `w` (ambient vectors of `Λ^g`).
fn evaluation(w: &Matrix, g: usize, n: &AlgModule) -> Matrix {
    let r = n.algebra().rank();
    let gn = n.gens();
    let b = n.base();
    let mut out = Matrix::zeros(b, gn * w.cols(), gn * g);
    for j in 0..w.cols() {
        let col = w.col(j);
        for s in 0..g {
            let a = &col[s * r..(s + 1) * r];
            if a.iter().all(|e| e.is_zero()) {
                continue;
            }
            out.set_block(j * gn, s * gn, &n.act(a));
        }
    }
    out
}

/// `Ext^i` from a resolution of length at least `i + 1`.
pub fn ext_with(res: &Resolution, n: &AlgModule, i: usize) -> Result<ExtResult> {
    if !res.module.same_algebra(n) {
        return Err(Error::AlgebraMismatch);
    }
    if res.len() < i + 1 {
        return Err(Error::Shape(format!("Ext^{i} needs a resolution of length {}", i + 1)));
    }
    let b = n.base();
    let cover = &res.covers[i];
    let ci = power(n.underlying(), cover.rank);
    let test = evaluation(&cover.inclusion, cover.rank, n);
    let target = power(n.underlying(), cover.inclusion.cols());
    let cocycles = preimage_of_zero(&test, &target);
    let rows = ci.gens();
    let denom = if i == 0 {
        ci.relations().clone()
    } else {
        let delta = evaluation(&res.boundary(i), res.covers[i - 1].rank, n);
        Matrix::hstack(b, rows, &[ci.relations(), &delta])
    };
    let sub = Matrix::hstack(b, rows, &[&cocycles, &denom]);
    let sq = Subquotient::new(&sub, &denom);
    Ok(ExtResult {
        degree: i,
        normal_form: sq.normal_form(),
        group: sq.module().clone(),
        cocycles: sq.generators().clone(),
        coboundaries: denom,
    })
}

pub fn ext(m: &AlgModule, n: &AlgModule, i: usize) -> Result<ExtResult> {
    ext_with(&resolution(m, i + 1), n, i)
}

/// `Ext^0 .. Ext^i_max` from one resolution.
pub fn ext_range(m: &AlgModule, n: &AlgModule, i_max: usize) -> Result<Vec<ExtResult>> {
    let res = resolution(m, i_max + 1);
    (0..=i_max).map(|i| ext_with(&res, n, i)).collect()
}

/// Projective iff its free cover splits.
pub fn is_projective(m: &AlgModule) -> bool {
    let c = free_cover(m);
    is_split_surjection(&c.surjection(m)).is_some()
}

/// Bounded projective dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "value", rename_all = "snake_case")]
pub enum PdVerdict {
    /// The least `k` with `Ω_k` projective.
    Yes(usize),
    /// `Ω_0 .. Ω_n` are all non-projective.
    NoUpTo(usize),
}

impl PdVerdict {
    pub fn value(&self) -> Option<usize> {
        match self {
            PdVerdict::Yes(k) => Some(*k),
            PdVerdict::NoUpTo(_) => None,
        }
    }
}

impl std::fmt::Display for PdVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PdVerdict::Yes(k) => write!(f, "pd = {k}"),
            PdVerdict::NoUpTo(n) => write!(f, "pd > {n}"),
        }
    }
}

pub fn pd_at_most(m: &AlgModule, n: usize) -> PdVerdict {
    let mut omega = m.clone();
    for k in 0..=n {
        let c = free_cover(&omega);
        if is_split_surjection(&c.surjection(&omega)).is_some() {
            return PdVerdict::Yes(k);
        }
        omega = c.syzygy;
    }
    PdVerdict::NoUpTo(n)
}
