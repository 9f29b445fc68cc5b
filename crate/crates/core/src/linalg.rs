//! Dense matrices over a [`Field`] context: products, echelon forms, kernels,
//! solving, and polynomial evaluation at a matrix.

use crate::field::Field;

/// Row-major dense matrix. Arithmetic takes the field context explicitly.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix<E> {
    rows: usize,
    cols: usize,
    data: Vec<E>,
}

impl<E: Clone> Matrix<E> {
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> E) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        Matrix { rows, cols, data }
    }

    /// Builds from nested rows; `None` if rows are ragged.
    pub fn from_rows(rows: Vec<Vec<E>>) -> Option<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|row| row.len() != c) {
            return None;
        }
        Some(Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn filled(rows: usize, cols: usize, value: E) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![value; rows * cols],
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &E {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: E) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[E] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<E> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<E>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |r, c| self.get(c, r).clone())
    }

    /// Writes `block` with its top-left corner at `(r0, c0)`.
    pub fn set_block(&mut self, r0: usize, c0: usize, block: &Matrix<E>) {
        for r in 0..block.rows {
            for c in 0..block.cols {
                self.set(r0 + r, c0 + c, block.get(r, c).clone());
            }
        }
    }

    pub fn block(&self, r0: usize, c0: usize, rows: usize, cols: usize) -> Self {
        Matrix::from_fn(rows, cols, |r, c| self.get(r0 + r, c0 + c).clone())
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_columns(rows: usize, columns: &[Vec<E>]) -> Self {
        Matrix::from_fn(rows, columns.len(), |r, c| columns[c][r].clone())
    }
}

impl<E: Clone + PartialEq> Matrix<E> {
    pub fn zero<F: Field<Elem = E>>(field: &F, rows: usize, cols: usize) -> Self {
        Matrix::filled(rows, cols, field.zero())
    }

    pub fn identity<F: Field<Elem = E>>(field: &F, n: usize) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { field.one() } else { field.zero() })
    }

    pub fn scalar<F: Field<Elem = E>>(field: &F, n: usize, s: &E) -> Self {
        Matrix::from_fn(n, n, |r, c| if r == c { s.clone() } else { field.zero() })
    }

    pub fn is_zero<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.data.iter().all(|e| field.is_zero(e))
    }

    pub fn add<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.add(a, b))
                .collect(),
        }
    }

    pub fn sub<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| field.sub(a, b))
                .collect(),
        }
    }

    pub fn scale<F: Field<Elem = E>>(&self, field: &F, s: &E) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|a| field.mul(a, s)).collect(),
        }
    }

    pub fn mul<F: Field<Elem = E>>(&self, field: &F, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in product");
        let mut out = Matrix::zero(field, self.rows, other.cols);
        for r in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(r, k);
                if field.is_zero(a) {
                    continue;
                }
                for c in 0..other.cols {
                    let prod = field.mul(a, other.get(k, c));
                    let idx = r * other.cols + c;
                    out.data[idx] = field.add(&out.data[idx], &prod);
                }
            }
        }
        out
    }

    pub fn mul_vec<F: Field<Elem = E>>(&self, field: &F, v: &[E]) -> Vec<E> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|r| {
                self.row(r).iter().zip(v).fold(field.zero(), |acc, (a, b)| {
                    field.add(&acc, &field.mul(a, b))
                })
            })
            .collect()
    }

    pub fn pow<F: Field<Elem = E>>(&self, field: &F, mut exp: u64) -> Self {
        assert!(self.is_square());
        let mut acc = Matrix::identity(field, self.rows);
        let mut base = self.clone();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(field, &base);
            }
            base = base.mul(field, &base);
            exp >>= 1;
        }
        acc
    }

    /// Evaluates `coeffs[0] + coeffs[1]·M + …` by Horner's rule.
    pub fn eval_poly<F: Field<Elem = E>>(&self, field: &F, coeffs: &[E]) -> Self {
        assert!(self.is_square());
        let n = self.rows;
        let mut acc = Matrix::zero(field, n, n);
        for c in coeffs.iter().rev() {
            acc = acc
                .mul(field, self)
                .add(field, &Matrix::scalar(field, n, c));
        }
        acc
    }

    /// Reduced row echelon form together with the pivot columns.
    pub fn rref<F: Field<Elem = E>>(&self, field: &F) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut row = 0;
        for col in 0..m.cols {
            if row == m.rows {
                break;
            }
            let Some(piv) = (row..m.rows).find(|&r| !field.is_zero(m.get(r, col))) else {
                continue;
            };
            if piv != row {
                for c in 0..m.cols {
                    m.data.swap(piv * m.cols + c, row * m.cols + c);
                }
            }
            let inv = field.inv(m.get(row, col)).expect("pivot is nonzero");
            for c in 0..m.cols {
                let v = field.mul(m.get(row, c), &inv);
                m.set(row, c, v);
            }
            for r in 0..m.rows {
                if r == row || field.is_zero(m.get(r, col)) {
                    continue;
                }
                let factor = m.get(r, col).clone();
                for c in 0..m.cols {
                    let v = field.sub(m.get(r, c), &field.mul(&factor, m.get(row, c)));
                    m.set(r, c, v);
                }
            }
            pivots.push(col);
            row += 1;
        }
        (m, pivots)
    }

    pub fn rank<F: Field<Elem = E>>(&self, field: &F) -> usize {
        self.rref(field).1.len()
    }

    /// Basis of the right kernel `{v : M v = 0}`.
    pub fn kernel<F: Field<Elem = E>>(&self, field: &F) -> Vec<Vec<E>> {
        let (r, pivots) = self.rref(field);
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&fc| {
                let mut v = vec![field.zero(); self.cols];
                v[fc] = field.one();
                for (i, &pc) in pivots.iter().enumerate() {
                    v[pc] = field.neg(r.get(i, fc));
                }
                v
            })
            .collect()
    }

    /// Some solution of `M x = b`, or `None` when inconsistent.
    pub fn solve<F: Field<Elem = E>>(&self, field: &F, b: &[E]) -> Option<Vec<E>> {
        assert_eq!(b.len(), self.rows);
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |r, c| {
            if c < self.cols {
                self.get(r, c).clone()
            } else {
                b[r].clone()
            }
        });
        let (red, pivots) = aug.rref(field);
        if pivots.last() == Some(&self.cols) {
            return None;
        }
        let mut x = vec![field.zero(); self.cols];
        for (i, &pc) in pivots.iter().enumerate() {
            x[pc] = red.get(i, self.cols).clone();
        }
        Some(x)
    }

    pub fn inverse<F: Field<Elem = E>>(&self, field: &F) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |r, c| {
            if c < n {
                self.get(r, c).clone()
            } else if c - n == r {
                field.one()
            } else {
                field.zero()
            }
        });
        let (red, pivots) = aug.rref(field);
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(red.block(0, n, n, n))
    }

    pub fn is_invertible<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.is_square() && self.rank(field) == self.rows
    }

    /// True when some power of the matrix vanishes.
    pub fn is_nilpotent<F: Field<Elem = E>>(&self, field: &F) -> bool {
        self.is_square() && self.pow(field, self.rows as u64).is_zero(field)
    }
}

/// Incremental echelon basis of a subspace of `F^n`, used by closure searches.
#[derive(Clone, Debug)]
pub struct SubspaceBuilder<F: Field> {
    field: F,
    n: usize,
    /// Rows in echelon form keyed by pivot column.
    rows: Vec<(usize, Vec<F::Elem>)>,
}

impl<F: Field> SubspaceBuilder<F> {
    pub fn new(field: F, n: usize) -> Self {
        SubspaceBuilder {
            field,
            n,
            rows: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.n
    }

    /// Reduces `v` against the current basis.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut w = v.to_vec();
        for (piv, row) in &self.rows {
            if f.is_zero(&w[*piv]) {
                continue;
            }
            let factor = w[*piv].clone();
            for (wi, ri) in w.iter_mut().zip(row) {
                *wi = f.sub(wi, &f.mul(&factor, ri));
            }
        }
        w
    }

    /// Adds `v`; returns `true` when it enlarged the span.
    pub fn insert(&mut self, v: &[F::Elem]) -> bool {
        let f = self.field.clone();
        let mut w = self.reduce(v);
        let Some(piv) = w.iter().position(|e| !f.is_zero(e)) else {
            return false;
        };
        let inv = f.inv(&w[piv]).expect("pivot is nonzero");
        for e in w.iter_mut() {
            *e = f.mul(e, &inv);
        }
        for (_, row) in self.rows.iter_mut() {
            if f.is_zero(&row[piv]) {
                continue;
            }
            let factor = row[piv].clone();
            for (ri, wi) in row.iter_mut().zip(&w) {
                *ri = f.sub(ri, &f.mul(&factor, wi));
            }
        }
        self.rows.push((piv, w));
        true
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        self.reduce(v).iter().all(|e| self.field.is_zero(e))
    }

    pub fn basis(&self) -> Vec<Vec<F::Elem>> {
        self.rows.iter().map(|(_, r)| r.clone()).collect()
    }
}

/// Span of `seed` closed under every operator in `ops`.
pub fn closure<F: Field>(
    field: &F,
    ops: &[&Matrix<F::Elem>],
    seeds: &[Vec<F::Elem>],
) -> SubspaceBuilder<F> {
    let n = seeds.first().map_or(0, Vec::len);
    let mut span = SubspaceBuilder::new(field.clone(), n);
    let mut queue: Vec<Vec<F::Elem>> = Vec::new();
    for s in seeds {
        if span.insert(s) {
            queue.push(s.clone());
        }
    }
    while let Some(v) = queue.pop() {
        if span.dim() == n {
            break;
        }
        for op in ops {
            let w = op.mul_vec(field, &v);
            if span.insert(&w) {
                queue.push(w);
            }
        }
    }
    span
}
