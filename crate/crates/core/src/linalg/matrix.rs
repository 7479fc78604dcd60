use std::fmt;

use crate::field::Field;

/// Dense matrix over an exact field, stored row by row.
#[derive(Clone, PartialEq)]
pub struct Matrix<F: Field> {
    field: F,
    cols: usize,
    rows: Vec<Vec<F::Elem>>,
}

impl<F: Field> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            let cells: Vec<String> = row.iter().map(|x| self.field.format(x)).collect();
            write!(f, "{}", cells.join(" "))?;
        }
        write!(f, "] ({}x{})", self.rows.len(), self.cols)
    }
}

/// Reduced row echelon form: nonzero rows only, `pivots[k]` is the pivot
/// column of row `k`, strictly increasing.
#[derive(Clone, Debug)]
pub struct Echelon<F: Field> {
    pub rows: Vec<Vec<F::Elem>>,
    pub pivots: Vec<usize>,
}

impl<F: Field> Matrix<F> {
    pub fn zeros(field: &F, rows: usize, cols: usize) -> Self {
        Matrix {
            field: field.clone(),
            cols,
            rows: vec![vec![field.zero(); cols]; rows],
        }
    }

    pub fn identity(field: &F, n: usize) -> Self {
        let mut m = Self::zeros(field, n, n);
        for i in 0..n {
            m.rows[i][i] = field.one();
        }
        m
    }

    pub fn from_rows(field: &F, cols: usize, rows: Vec<Vec<F::Elem>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Matrix {
            field: field.clone(),
            cols,
            rows,
        }
    }

    /// Matrix whose columns are the given vectors, each of length `rows`.
    pub fn from_columns(field: &F, rows: usize, columns: &[Vec<F::Elem>]) -> Self {
        let mut m = Self::zeros(field, rows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            assert_eq!(c.len(), rows);
            for (i, x) in c.iter().enumerate() {
                m.rows[i][j] = x.clone();
            }
        }
        m
    }

    pub fn from_i64(field: &F, rows: &[&[i64]]) -> Self {
        let cols = rows.first().map_or(0, |r| r.len());
        let data = rows
            .iter()
            .map(|r| r.iter().map(|&x| field.from_i64(x)).collect())
            .collect();
        Self::from_rows(field, cols, data)
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn nrows(&self) -> usize {
        self.rows.len()
    }
    pub fn ncols(&self) -> usize {
        self.cols
    }
    pub fn get(&self, i: usize, j: usize) -> &F::Elem {
        &self.rows[i][j]
    }
    pub fn set(&mut self, i: usize, j: usize, v: F::Elem) {
        self.rows[i][j] = v;
    }
    pub fn row(&self, i: usize) -> &[F::Elem] {
        &self.rows[i]
    }
    pub fn rows(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
    pub fn into_rows(self) -> Vec<Vec<F::Elem>> {
        self.rows
    }

    pub fn column(&self, j: usize) -> Vec<F::Elem> {
        self.rows.iter().map(|r| r[j].clone()).collect()
    }

    pub fn columns(&self) -> Vec<Vec<F::Elem>> {
        (0..self.cols).map(|j| self.column(j)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.rows
            .iter()
            .all(|r| r.iter().all(|x| self.field.is_zero(x)))
    }

    pub fn is_identity(&self) -> bool {
        self.nrows() == self.cols
            && self.rows.iter().enumerate().all(|(i, r)| {
                r.iter().enumerate().all(|(j, x)| {
                    if i == j {
                        self.field.is_one(x)
                    } else {
                        self.field.is_zero(x)
                    }
                })
            })
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.nrows() == other.nrows() && self.cols == other.cols
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(&self.field, self.cols, self.nrows());
        for (i, r) in self.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                t.rows[j][i] = x.clone();
            }
        }
        t
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.nrows(), "matrix product shape");
        let f = &self.field;
        let mut out = Self::zeros(f, self.nrows(), other.cols);
        for (i, r) in self.rows.iter().enumerate() {
            for (k, a) in r.iter().enumerate() {
                if f.is_zero(a) {
                    continue;
                }
                for (j, b) in other.rows[k].iter().enumerate() {
                    if !f.is_zero(b) {
                        let t = f.mul(a, b);
                        out.rows[i][j] = f.add(&out.rows[i][j], &t);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        assert_eq!(self.cols, v.len(), "matrix-vector shape");
        let f = &self.field;
        self.rows
            .iter()
            .map(|r| {
                let mut acc = f.zero();
                for (a, b) in r.iter().zip(v) {
                    if !f.is_zero(a) && !f.is_zero(b) {
                        acc = f.add(&acc, &f.mul(a, b));
                    }
                }
                acc
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.same_shape(other), "matrix sum shape");
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect())
            .collect();
        Matrix {
            field: f.clone(),
            cols: self.cols,
            rows,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let f = &self.field;
        let rows = self
            .rows
            .iter()
            .map(|r| r.iter().map(|x| f.mul(c, x)).collect())
            .collect();
        Matrix {
            field: f.clone(),
            cols: self.cols,
            rows,
        }
    }

    /// `[self | other]`.
    pub fn hstack(&self, other: &Self) -> Self {
        assert_eq!(self.nrows(), other.nrows());
        let rows = self
            .rows
            .iter()
            .zip(&other.rows)
            .map(|(a, b)| a.iter().chain(b).cloned().collect())
            .collect();
        Matrix {
            field: self.field.clone(),
            cols: self.cols + other.cols,
            rows,
        }
    }

    /// `[self; other]`.
    pub fn vstack(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.cols);
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        Matrix {
            field: self.field.clone(),
            cols: self.cols,
            rows,
        }
    }

    /// Copies `block` into `self` with its top-left corner at `(r0, c0)`.
    pub fn place(&mut self, r0: usize, c0: usize, block: &Self) {
        for (i, r) in block.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                self.rows[r0 + i][c0 + j] = x.clone();
            }
        }
    }

    /// Adds `block` into `self` at `(r0, c0)`.
    pub fn accumulate(&mut self, r0: usize, c0: usize, block: &Self) {
        let f = self.field.clone();
        for (i, r) in block.rows.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                if !f.is_zero(x) {
                    let cell = &mut self.rows[r0 + i][c0 + j];
                    *cell = f.add(cell, x);
                }
            }
        }
    }

    pub fn echelon(&self) -> Echelon<F> {
        rref(&self.field, self.rows.clone(), self.cols)
    }

    pub fn rank(&self) -> usize {
        self.echelon().pivots.len()
    }

    /// Canonical basis of the null space, as rows in reduced echelon form.
    pub fn kernel(&self) -> Vec<Vec<F::Elem>> {
        let f = &self.field;
        let ech = self.echelon();
        let mut is_pivot = vec![false; self.cols];
        for &c in &ech.pivots {
            is_pivot[c] = true;
        }
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|&c| !is_pivot[c]) {
            let mut v = vec![f.zero(); self.cols];
            v[free] = f.one();
            for (k, &pc) in ech.pivots.iter().enumerate() {
                v[pc] = f.neg(&ech.rows[k][free]);
            }
            basis.push(v);
        }
        rref(f, basis, self.cols).rows
    }

    /// Canonical basis of the column space, as rows in reduced echelon form.
    pub fn column_space(&self) -> Vec<Vec<F::Elem>> {
        self.transpose().echelon().rows
    }
}

/// Gauss-Jordan elimination to reduced row echelon form.
pub fn rref<F: Field>(f: &F, mut rows: Vec<Vec<F::Elem>>, cols: usize) -> Echelon<F> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(pr) = (r..rows.len()).find(|&i| !f.is_zero(&rows[i][c])) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = f.inv(&rows[r][c]).expect("nonzero pivot");
        if !f.is_one(&inv) {
            for x in rows[r].iter_mut() {
                *x = f.mul(x, &inv);
            }
        }
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || f.is_zero(&row[c]) {
                continue;
            }
            let factor = row[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(c) {
                if !f.is_zero(p) {
                    *x = f.sub(x, &f.mul(&factor, p));
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    Echelon { rows, pivots }
}

/// Elimination with a custom column priority: pivots are searched in the
/// order given by `order` (a permutation of `0..cols`). The returned rows are
/// in the original coordinates; each has a one at its pivot and zeros at all
/// other pivot columns.
pub fn rref_with_order<F: Field>(
    f: &F,
    rows: Vec<Vec<F::Elem>>,
    cols: usize,
    order: &[usize],
) -> Echelon<F> {
    debug_assert_eq!(order.len(), cols);
    let permuted = rows
        .into_iter()
        .map(|r| order.iter().map(|&c| r[c].clone()).collect())
        .collect();
    let ech = rref(f, permuted, cols);
    let rows = ech
        .rows
        .into_iter()
        .map(|pr| {
            let mut r = vec![f.zero(); cols];
            for (k, &c) in order.iter().enumerate() {
                r[c] = pr[k].clone();
            }
            r
        })
        .collect();
    let pivots = ech.pivots.into_iter().map(|k| order[k]).collect();
    Echelon { rows, pivots }
}
