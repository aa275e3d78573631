//! Linear systems whose unknowns are matrices: `Σ L_k X_k R_k = C`.

use crate::linalg::{solve, BaseRing, Elem, Matrix};

pub(crate) struct MatrixSystem {
    base: BaseRing,
    shapes: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    unknowns: usize,
    rows: Vec<Vec<(usize, Elem)>>,
    rhs: Vec<Elem>,
}

/// One side factor of a term; `None` means the identity.
pub(crate) type Side<'a> = Option<&'a Matrix>;

fn nonzeros(base: &BaseRing, m: Side, n: usize, by_row: bool) -> Vec<Vec<(usize, Elem)>> {
    // by_row: for each row u the list (a, m[u][a]); otherwise for each column v the list (b, m[b][v])
    match m {
        None => (0..n).map(|i| vec![(i, base.one())]).collect(),
        Some(m) => {
            let (outer, inner) = if by_row { (m.rows(), m.cols()) } else { (m.cols(), m.rows()) };
            (0..outer)
                .map(|o| {
                    (0..inner)
                        .filter_map(|i| {
                            let v = if by_row { m.get(o, i) } else { m.get(i, o) };
                            (!v.is_zero()).then(|| (i, v.clone()))
                        })
                        .collect()
                })
                .collect()
        }
    }
}

impl MatrixSystem {
    pub fn new(base: &BaseRing, shapes: &[(usize, usize)]) -> Self {
        let mut offsets = Vec::with_capacity(shapes.len());
        let mut n = 0;
        for &(r, c) in shapes {
            offsets.push(n);
            n += r * c;
        }
        MatrixSystem { base: base.clone(), shapes: shapes.to_vec(), offsets, unknowns: n, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Adds the `p x q` block of equations `Σ sign * L X_k R = rhs`
    /// (`rhs = None` for zero).
    pub fn equation(&mut self, p: usize, q: usize, terms: &[(usize, Side, Side, bool)], rhs: Option<&Matrix>) {
        let b = self.base.clone();
        let start = self.rows.len();
        self.rows.extend((0..p * q).map(|_| Vec::new()));
        for &(k, l, r, negate) in terms {
            let xc = self.shapes[k].1;
            let off = self.offsets[k];
            let lrows = nonzeros(&b, l, p, true);
            let rcols = nonzeros(&b, r, q, false);
            for u in 0..p {
                for (a, lv) in &lrows[u] {
                    for v in 0..q {
                        for (bb, rv) in &rcols[v] {
                            let mut c = b.mul(lv, rv);
                            if negate {
                                c = b.neg(&c);
                            }
                            self.rows[start + u * q + v].push((off + a * xc + bb, c));
                        }
                    }
                }
            }
        }
        match rhs {
            Some(c) => self.rhs.extend(c.entries().iter().cloned()),
            None => self.rhs.extend((0..p * q).map(|_| b.zero())),
        }
    }

    fn matrix(&self) -> Matrix {
        let b = &self.base;
        let mut m = Matrix::zeros(b, self.rows.len(), self.unknowns);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, c) in row {
                let cur = m.get(i, *j).clone();
                m.set(i, *j, b.add(&cur, c));
            }
        }
        m
    }

    /// A solution split back into the unknown matrices.
    pub fn solve(&self) -> Option<Vec<Matrix>> {
        let x = solve(&self.matrix(), &self.rhs).expect("shape")?;
        Some(
            self.shapes
                .iter()
                .zip(&self.offsets)
                .map(|(&(r, c), &o)| Matrix::from_vec(&self.base, r, c, &x[o..o + r * c]))
                .collect(),
        )
    }
}
