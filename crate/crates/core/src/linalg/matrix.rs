use std::fmt;

use num_bigint::BigInt;

use super::ring::{BaseRing, Elem};
use crate::error::{Error, Result};

/// Dense row-major matrix over a [`BaseRing`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Matrix {
    base: BaseRing,
    rows: usize,
    cols: usize,
    data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(base: &BaseRing, rows: usize, cols: usize) -> Self {
        Matrix { base: base.clone(), rows, cols, data: vec![base.zero(); rows * cols] }
    }

    pub fn identity(base: &BaseRing, n: usize) -> Self {
        let mut m = Self::zeros(base, n, n);
        for i in 0..n {
            m.data[i * n + i] = base.one();
        }
        m
    }

    pub fn from_elems(base: &BaseRing, rows: usize, cols: usize, data: Vec<Elem>) -> Self {
        assert_eq!(data.len(), rows * cols, "matrix data length");
        Matrix { base: base.clone(), rows, cols, data }
    }

    /// Builds a matrix from integer entries given row by row.
    pub fn from_ints(base: &BaseRing, rows: usize, cols: usize, entries: &[i64]) -> Self {
        assert_eq!(entries.len(), rows * cols, "matrix data length");
        let data = entries.iter().map(|&v| base.from_int(v)).collect();
        Matrix { base: base.clone(), rows, cols, data }
    }

    pub fn from_rows(base: &BaseRing, rows: &[Vec<i64>]) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, |row| row.len());
        let flat: Vec<i64> = rows.iter().flat_map(|row| row.iter().copied()).collect();
        Self::from_ints(base, r, c, &flat)
    }

    pub fn from_cols(base: &BaseRing, rows: usize, cols: &[Vec<Elem>]) -> Self {
        let mut m = Self::zeros(base, rows, cols.len());
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), rows, "column length");
            for (i, e) in col.iter().enumerate() {
                m.data[i * m.cols + j] = e.clone();
            }
        }
        m
    }

    pub fn column_vector(base: &BaseRing, v: &[Elem]) -> Self {
        Self::from_elems(base, v.len(), 1, v.to_vec())
    }

    pub fn diagonal(base: &BaseRing, d: &[Elem]) -> Self {
        let mut m = Self::zeros(base, d.len(), d.len());
        for (i, e) in d.iter().enumerate() {
            m.data[i * d.len() + i] = e.clone();
        }
        m
    }

    pub fn base(&self) -> &BaseRing {
        &self.base
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &Elem {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[Elem] {
        &self.data
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Elem::is_zero)
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn col(&self, j: usize) -> Vec<Elem> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn row(&self, i: usize) -> Vec<Elem> {
        self.data[i * self.cols..(i + 1) * self.cols].to_vec()
    }

    pub fn columns(&self) -> Vec<Vec<Elem>> {
        (0..self.cols).map(|j| self.col(j)).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(&self.base, self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.data[j * self.rows + i] = self.get(i, j).clone();
            }
        }
        t
    }

    fn check_base(&self, other: &Matrix) -> Result<()> {
        if self.base != other.base {
            return Err(Error::BaseMismatch(self.base.to_string(), other.base.to_string()));
        }
        Ok(())
    }

    pub fn try_mul(&self, other: &Matrix) -> Result<Matrix> {
        self.check_base(other)?;
        if self.cols != other.rows {
            return Err(Error::Shape(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let b = &self.base;
        let mut out = Matrix::zeros(b, self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let o = other.get(k, j);
                    if o.is_zero() {
                        continue;
                    }
                    let idx = i * other.cols + j;
                    out.data[idx] = b.add(&out.data[idx], &b.mul(a, o));
                }
            }
        }
        Ok(out)
    }

    /// Matrix product; panics on a shape or base mismatch.
    pub fn mul(&self, other: &Matrix) -> Matrix {
        self.try_mul(other).expect("matrix product")
    }

    pub fn mul_vec(&self, v: &[Elem]) -> Vec<Elem> {
        assert_eq!(v.len(), self.cols, "vector length");
        let b = &self.base;
        (0..self.rows)
            .map(|i| {
                let mut acc = b.zero();
                for (k, x) in v.iter().enumerate() {
                    let a = self.get(i, k);
                    if !a.is_zero() && !x.is_zero() {
                        acc = b.add(&acc, &b.mul(a, x));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix sum shape");
        let b = &self.base;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| b.add(x, y)).collect();
        Matrix { base: b.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols), "matrix difference shape");
        let b = &self.base;
        let data = self.data.iter().zip(&other.data).map(|(x, y)| b.sub(x, y)).collect();
        Matrix { base: b.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn scale(&self, s: &Elem) -> Matrix {
        let b = &self.base;
        let data = self.data.iter().map(|x| b.mul(s, x)).collect();
        Matrix { base: b.clone(), rows: self.rows, cols: self.cols, data }
    }

    pub fn neg(&self) -> Matrix {
        let b = &self.base;
        let data = self.data.iter().map(|x| b.neg(x)).collect();
        Matrix { base: b.clone(), rows: self.rows, cols: self.cols, data }
    }

    /// Horizontal concatenation; all parts must have `rows` rows.
    pub fn hstack(base: &BaseRing, rows: usize, parts: &[&Matrix]) -> Matrix {
        let cols = parts.iter().map(|p| p.cols).sum();
        let mut out = Matrix::zeros(base, rows, cols);
        let mut off = 0;
        for p in parts {
            assert_eq!(p.rows, rows, "hstack rows");
            for i in 0..rows {
                for j in 0..p.cols {
                    out.data[i * cols + off + j] = p.get(i, j).clone();
                }
            }
            off += p.cols;
        }
        out
    }

    pub fn vstack(base: &BaseRing, cols: usize, parts: &[&Matrix]) -> Matrix {
        let rows = parts.iter().map(|p| p.rows).sum();
        let mut data = Vec::with_capacity(rows * cols);
        for p in parts {
            assert_eq!(p.cols, cols, "vstack cols");
            data.extend_from_slice(&p.data);
        }
        Matrix { base: base.clone(), rows, cols, data }
    }

    pub fn block_diag(base: &BaseRing, blocks: &[&Matrix]) -> Matrix {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(base, rows, cols);
        let (mut r0, mut c0) = (0, 0);
        for blk in blocks {
            out.set_block(r0, c0, blk);
            r0 += blk.rows;
            c0 += blk.cols;
        }
        out
    }

    pub fn set_block(&mut self, r0: usize, c0: usize, blk: &Matrix) {
        for i in 0..blk.rows {
            for j in 0..blk.cols {
                self.data[(r0 + i) * self.cols + c0 + j] = blk.get(i, j).clone();
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Matrix {
        let mut out = Matrix::zeros(&self.base, rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                out.data[i * cols + j] = self.get(r0 + i, c0 + j).clone();
            }
        }
        out
    }

    pub fn select_cols(&self, idx: &[usize]) -> Matrix {
        let cols: Vec<Vec<Elem>> = idx.iter().map(|&j| self.col(j)).collect();
        Matrix::from_cols(&self.base, self.rows, &cols)
    }

    pub fn select_rows(&self, idx: &[usize]) -> Matrix {
        let mut data = Vec::with_capacity(idx.len() * self.cols);
        for &i in idx {
            data.extend_from_slice(&self.data[i * self.cols..(i + 1) * self.cols]);
        }
        Matrix { base: self.base.clone(), rows: idx.len(), cols: self.cols, data }
    }

    /// Reinterprets an integer matrix over another base (reduction mod `N` or
    /// inclusion into `Z[1/c]`).
    pub fn change_base(&self, to: &BaseRing) -> Result<Matrix> {
        if self.base == *to {
            return Ok(self.clone());
        }
        match self.base {
            BaseRing::Integers => {
                let data = self.data.iter().map(|e| to.from_integer_elem(e)).collect();
                Ok(Matrix { base: to.clone(), rows: self.rows, cols: self.cols, data })
            }
            _ => Err(Error::Unsupported(format!("base change from {} to {}", self.base, to))),
        }
    }

    /// Flattens row-major into a single coordinate vector.
    pub fn to_vec(&self) -> Vec<Elem> {
        self.data.clone()
    }

    pub fn from_vec(base: &BaseRing, rows: usize, cols: usize, v: &[Elem]) -> Matrix {
        Matrix::from_elems(base, rows, cols, v.to_vec())
    }

    /// Entries as big integers (fails on non-integral `Z[1/c]` entries).
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.data.iter().map(|e| e.to_integer(&self.base)).collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols {
                if j > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{}", self.base.display(self.get(i, j)))?;
            }
        }
        write!(f, "]")
    }
}
