//! Smith normal form with transforms, and the kernel / solve / cokernel
//! routines built on it.
//!
//! Pivoting is deterministic: the nonzero entry of least Euclidean size wins,
//! ties broken by the lowest row and then the lowest column index.

use super::matrix::Matrix;
use super::ring::{BaseRing, Elem};
use crate::error::{Error, Result};

/// `u * a * v = s` with `s` diagonal, `u` and `v` invertible.
#[derive(Clone, Debug)]
pub struct SmithDecomposition {
    pub s: Matrix,
    pub u: Matrix,
    pub v: Matrix,
    /// Inverse of `u`, tracked alongside it.
    pub u_inv: Matrix,
    /// Number of nonzero diagonal entries.
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d_0 | d_1 | ...` (length `min(rows, cols)`).
    pub fn diagonal(&self) -> Vec<Elem> {
        (0..self.s.rows().min(self.s.cols())).map(|i| self.s.get(i, i).clone()).collect()
    }

    /// The `i`-th diagonal entry, or zero past the diagonal.
    pub fn d(&self, i: usize) -> Elem {
        if i < self.s.rows().min(self.s.cols()) {
            self.s.get(i, i).clone()
        } else {
            self.s.base().zero()
        }
    }
}

struct Work<'a> {
    base: &'a BaseRing,
    w: Vec<Vec<Elem>>,
    u: Vec<Vec<Elem>>,
    u_inv: Vec<Vec<Elem>>,
    v: Vec<Vec<Elem>>,
}

fn rows_of(m: &Matrix) -> Vec<Vec<Elem>> {
    (0..m.rows()).map(|i| m.row(i)).collect()
}

fn to_matrix(base: &BaseRing, rows: usize, cols: usize, r: Vec<Vec<Elem>>) -> Matrix {
    Matrix::from_elems(base, rows, cols, r.into_iter().flatten().collect())
}

/// `row_dst += q * row_src` on a row-major table.
fn add_row(base: &BaseRing, m: &mut [Vec<Elem>], dst: usize, src: usize, q: &Elem) {
    if q.is_zero() {
        return;
    }
    let (d, s) = if dst < src {
        let (lo, hi) = m.split_at_mut(src);
        (&mut lo[dst], &hi[0])
    } else {
        let (lo, hi) = m.split_at_mut(dst);
        (&mut hi[0], &lo[src])
    };
    for (x, y) in d.iter_mut().zip(s.iter()) {
        if !y.is_zero() {
            *x = base.add(x, &base.mul(q, y));
        }
    }
}

/// `col_dst += q * col_src`.
fn add_col(base: &BaseRing, m: &mut [Vec<Elem>], dst: usize, src: usize, q: &Elem) {
    if q.is_zero() {
        return;
    }
    for row in m.iter_mut() {
        if !row[src].is_zero() {
            let t = base.mul(q, &row[src]);
            row[dst] = base.add(&row[dst], &t);
        }
    }
}

/// Rows `(a, b) <- [[s, t], [u, v]] * (a, b)`.
fn mix_rows(base: &BaseRing, m: &mut [Vec<Elem>], a: usize, b: usize, k: &[Elem; 4]) {
    let n = m[a].len();
    for j in 0..n {
        let (x, y) = (m[a][j].clone(), m[b][j].clone());
        if x.is_zero() && y.is_zero() {
            continue;
        }
        m[a][j] = base.add(&base.mul(&k[0], &x), &base.mul(&k[1], &y));
        m[b][j] = base.add(&base.mul(&k[2], &x), &base.mul(&k[3], &y));
    }
}

/// Columns `(a, b) <- (a, b) * [[p, q], [r, s]]`, i.e. `a' = p a + r b`, `b' = q a + s b`.
fn mix_cols(base: &BaseRing, m: &mut [Vec<Elem>], a: usize, b: usize, k: &[Elem; 4]) {
    for row in m.iter_mut() {
        let (x, y) = (row[a].clone(), row[b].clone());
        if x.is_zero() && y.is_zero() {
            continue;
        }
        row[a] = base.add(&base.mul(&k[0], &x), &base.mul(&k[2], &y));
        row[b] = base.add(&base.mul(&k[1], &x), &base.mul(&k[3], &y));
    }
}

impl Work<'_> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            self.w.swap(a, b);
            self.u.swap(a, b);
            for row in &mut self.u_inv {
                row.swap(a, b);
            }
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a != b {
            for row in &mut self.w {
                row.swap(a, b);
            }
            for row in &mut self.v {
                row.swap(a, b);
            }
        }
    }

    /// `row_dst += q row_src`.
    fn row_add(&mut self, dst: usize, src: usize, q: &Elem) {
        add_row(self.base, &mut self.w, dst, src, q);
        add_row(self.base, &mut self.u, dst, src, q);
        let nq = self.base.neg(q);
        add_col(self.base, &mut self.u_inv, src, dst, &nq);
    }

    fn col_add(&mut self, dst: usize, src: usize, q: &Elem) {
        add_col(self.base, &mut self.w, dst, src, q);
        add_col(self.base, &mut self.v, dst, src, q);
    }

    fn row_mix(&mut self, a: usize, b: usize, k: [Elem; 4]) {
        let base = self.base;
        mix_rows(base, &mut self.w, a, b, &k);
        mix_rows(base, &mut self.u, a, b, &k);
        // inverse of [[s, t], [u, v]] with determinant one is [[v, -t], [-u, s]]
        let inv = [k[3].clone(), base.neg(&k[1]), base.neg(&k[2]), k[0].clone()];
        mix_cols(base, &mut self.u_inv, a, b, &inv);
    }

    fn col_mix(&mut self, a: usize, b: usize, k: [Elem; 4]) {
        // column transform chosen so that a' = s a + t b and b' = u a + v b
        let m = [k[0].clone(), k[2].clone(), k[1].clone(), k[3].clone()];
        mix_cols(self.base, &mut self.w, a, b, &m);
        mix_cols(self.base, &mut self.v, a, b, &m);
    }

    fn scale_row(&mut self, a: usize, unit: &Elem) {
        let base = self.base;
        for x in self.w[a].iter_mut().chain(self.u[a].iter_mut()) {
            *x = base.mul(unit, x);
        }
        let inv = base.inv(unit).expect("unit");
        for row in &mut self.u_inv {
            row[a] = base.mul(&inv, &row[a]);
        }
    }
}

/// Computes `u * a * v = s` in Smith normal form.
pub fn smith_normal_form(a: &Matrix) -> SmithDecomposition {
    let base = a.base();
    let (m, n) = (a.rows(), a.cols());
    let mut wk = Work {
        base,
        w: rows_of(a),
        u: rows_of(&Matrix::identity(base, m)),
        u_inv: rows_of(&Matrix::identity(base, m)),
        v: rows_of(&Matrix::identity(base, n)),
    };
    let mut t = 0;
    while t < m.min(n) {
        let mut best: Option<(num_bigint::BigInt, usize, usize)> = None;
        'search: for i in t..m {
            for j in t..n {
                let e = &wk.w[i][j];
                if e.is_zero() {
                    continue;
                }
                let sz = base.size(e);
                // a unit is minimal, and the first one met already wins the tie-break
                let unit = num_traits::One::is_one(&sz);
                if best.as_ref().is_none_or(|(b, _, _)| sz < *b) {
                    best = Some((sz, i, j));
                }
                if unit {
                    break 'search;
                }
            }
        }
        let Some((_, pi, pj)) = best else { break };
        wk.swap_rows(t, pi);
        wk.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..m {
                if wk.w[i][t].is_zero() {
                    continue;
                }
                let p = wk.w[t][t].clone();
                let e = wk.w[i][t].clone();
                if let Some(q) = base.div(&e, &p) {
                    wk.row_add(i, t, &base.neg(&q));
                } else {
                    let (_, k) = base.bezout(&p, &e);
                    wk.row_mix(t, i, k);
                    dirty = true;
                }
            }
            for j in t + 1..n {
                if wk.w[t][j].is_zero() {
                    continue;
                }
                let p = wk.w[t][t].clone();
                let e = wk.w[t][j].clone();
                if let Some(q) = base.div(&e, &p) {
                    wk.col_add(j, t, &base.neg(&q));
                } else {
                    let (_, k) = base.bezout(&p, &e);
                    wk.col_mix(t, j, k);
                    dirty = true;
                }
            }
            if dirty {
                continue;
            }
            let p = wk.w[t][t].clone();
            if base.is_unit(&p) {
                break;
            }
            let offender = (t + 1..m).find(|&i| (t + 1..n).any(|j| !base.divides(&p, &wk.w[i][j])));
            match offender {
                Some(i) => wk.row_add(t, i, &base.one()),
                None => break,
            }
        }
        let (_, unit) = base.associate(&wk.w[t][t]);
        if !base.is_one(&unit) {
            wk.scale_row(t, &unit);
        }
        t += 1;
    }
    let rank = (0..m.min(n)).filter(|&i| !wk.w[i][i].is_zero()).count();
    SmithDecomposition {
        s: to_matrix(base, m, n, wk.w),
        u: to_matrix(base, m, m, wk.u),
        v: to_matrix(base, n, n, wk.v),
        u_inv: to_matrix(base, m, m, wk.u_inv),
        rank,
    }
}

/// Generators of `{ v : a v = 0 }` as columns.
pub fn kernel(a: &Matrix) -> Matrix {
    kernel_from(&smith_normal_form(a))
}

pub fn kernel_from(snf: &SmithDecomposition) -> Matrix {
    let base = snf.s.base();
    let n = snf.v.rows();
    let mut cols = Vec::new();
    for j in 0..n {
        let ann = base.annihilator(&snf.d(j));
        if ann.is_zero() {
            continue;
        }
        let c: Vec<Elem> = snf.v.col(j).iter().map(|x| base.mul(&ann, x)).collect();
        cols.push(c);
    }
    Matrix::from_cols(base, n, &cols)
}

/// Some `x` with `a x = b`, if one exists over the base.
pub fn solve(a: &Matrix, b: &[Elem]) -> Result<Option<Vec<Elem>>> {
    if b.len() != a.rows() {
        return Err(Error::Shape(format!("right-hand side of length {} for {} rows", b.len(), a.rows())));
    }
    let snf = smith_normal_form(a);
    Ok(solve_with(&snf, b))
}

/// Solves `a x = b` for every column of `b` using one decomposition.
pub fn solve_many(a: &Matrix, b: &Matrix) -> Result<Option<Matrix>> {
    if b.rows() != a.rows() {
        return Err(Error::Shape(format!("right-hand side with {} rows for {} rows", b.rows(), a.rows())));
    }
    let snf = smith_normal_form(a);
    let mut cols = Vec::with_capacity(b.cols());
    for j in 0..b.cols() {
        match solve_with(&snf, &b.col(j)) {
            Some(x) => cols.push(x),
            None => return Ok(None),
        }
    }
    Ok(Some(Matrix::from_cols(a.base(), a.cols(), &cols)))
}

pub fn solve_with(snf: &SmithDecomposition, b: &[Elem]) -> Option<Vec<Elem>> {
    let base = snf.s.base();
    let (m, n) = (snf.s.rows(), snf.s.cols());
    let y = snf.u.mul_vec(b);
    let mut x = vec![base.zero(); n];
    for i in 0..m {
        let d = snf.d(i);
        if i < n {
            x[i] = base.div(&y[i], &d)?;
        } else if !y[i].is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&x))
}

/// Invariant factors of `coker(a)`: non-unit diagonal entries followed by a
/// zero for every free summand.
pub fn cokernel_invariants(a: &Matrix) -> Vec<Elem> {
    let snf = smith_normal_form(a);
    let base = a.base();
    (0..a.rows()).map(|i| snf.d(i)).filter(|d| !base.is_unit(d)).collect()
}
