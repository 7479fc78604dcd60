use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::matrix::{rref, rref_with_order, Echelon, Matrix};
use crate::linalg::vector;

/// A subspace of `F^ambient` held as a reduced echelon basis.
#[derive(Clone, Debug)]
pub struct Subspace<F: Field> {
    field: F,
    ambient: usize,
    rows: Vec<Vec<F::Elem>>,
    pivots: Vec<usize>,
}

impl<F: Field> PartialEq for Subspace<F> {
    fn eq(&self, other: &Self) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && self.contains_subspace(other)
    }
}

impl<F: Field> Subspace<F> {
    pub fn zero(field: &F, ambient: usize) -> Self {
        Subspace {
            field: field.clone(),
            ambient,
            rows: Vec::new(),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: &F, ambient: usize) -> Self {
        let rows = (0..ambient).map(|k| vector::unit(field, ambient, k)).collect();
        Subspace {
            field: field.clone(),
            ambient,
            rows,
            pivots: (0..ambient).collect(),
        }
    }

    pub fn span(field: &F, ambient: usize, vectors: Vec<Vec<F::Elem>>) -> Self {
        let Echelon { rows, pivots } = rref(field, vectors, ambient);
        Subspace {
            field: field.clone(),
            ambient,
            rows,
            pivots,
        }
    }

    /// Like [`Subspace::span`] but pivots are chosen following `order`, so the
    /// coordinates listed first are the ones eliminated by [`Subspace::reduce`].
    pub fn span_with_order(
        field: &F,
        ambient: usize,
        vectors: Vec<Vec<F::Elem>>,
        order: &[usize],
    ) -> Self {
        let Echelon { rows, pivots } = rref_with_order(field, vectors, ambient, order);
        Subspace {
            field: field.clone(),
            ambient,
            rows,
            pivots,
        }
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }
    pub fn dim(&self) -> usize {
        self.rows.len()
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        &self.rows
    }
    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }
    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }
    pub fn is_full(&self) -> bool {
        self.rows.len() == self.ambient
    }

    /// Coordinates that are not pivots; their unit vectors span a complement.
    pub fn free_columns(&self) -> Vec<usize> {
        let mut used = vec![false; self.ambient];
        for &p in &self.pivots {
            used[p] = true;
        }
        (0..self.ambient).filter(|&c| !used[c]).collect()
    }

    /// Remainder of `v` after eliminating every pivot coordinate.
    pub fn reduce(&self, v: &[F::Elem]) -> Vec<F::Elem> {
        let f = &self.field;
        let mut out = v.to_vec();
        for (row, &pc) in self.rows.iter().zip(&self.pivots) {
            if !f.is_zero(&out[pc]) {
                let c = f.neg(&out[pc]);
                vector::axpy(f, &mut out, &c, row);
            }
        }
        out
    }

    pub fn contains(&self, v: &[F::Elem]) -> bool {
        vector::is_zero(&self.field, &self.reduce(v))
    }

    pub fn contains_subspace(&self, other: &Self) -> bool {
        other.rows.iter().all(|v| self.contains(v))
    }

    /// Coefficients of `v` in the stored basis, if `v` lies in the subspace.
    pub fn coordinates(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        if !self.contains(v) {
            return None;
        }
        Some(self.pivots.iter().map(|&pc| v[pc].clone()).collect())
    }

    pub fn sum(&self, other: &Self) -> Self {
        let mut all = self.rows.clone();
        all.extend(other.rows.iter().cloned());
        Self::span(&self.field, self.ambient, all)
    }

    pub fn intersection(&self, other: &Self) -> Self {
        // Solve x*A = y*B through the kernel of [A; -B]^T.
        let f = &self.field;
        if self.is_zero() || other.is_zero() {
            return Self::zero(f, self.ambient);
        }
        let neg_b: Vec<Vec<F::Elem>> = other
            .rows
            .iter()
            .map(|r| vector::scale(f, &f.neg(&f.one()), r))
            .collect();
        let mut cols = self.rows.clone();
        cols.extend(neg_b);
        let m = Matrix::from_columns(f, self.ambient, &cols);
        let vectors = m
            .kernel()
            .into_iter()
            .map(|k| {
                let mut v = vector::zeros(f, self.ambient);
                for (c, row) in k.iter().zip(&self.rows) {
                    vector::axpy(f, &mut v, c, row);
                }
                v
            })
            .collect();
        Self::span(f, self.ambient, vectors)
    }

    /// The image under `m` (a matrix with `ambient` columns).
    pub fn image_under(&self, m: &Matrix<F>) -> Self {
        let vectors = self.rows.iter().map(|v| m.mul_vec(v)).collect();
        Self::span(&self.field, m.nrows(), vectors)
    }

    /// The preimage under `m` of `target` (a subspace of the codomain).
    pub fn preimage(field: &F, m: &Matrix<F>, target: &Subspace<F>) -> Self {
        // x with m x in target  <=>  (I - proj) m x = 0 on the free coordinates.
        let free = target.free_columns();
        let reduced: Vec<Vec<F::Elem>> = m
            .columns()
            .iter()
            .map(|c| {
                let r = target.reduce(c);
                free.iter().map(|&i| r[i].clone()).collect()
            })
            .collect();
        let sys = Matrix::from_columns(field, free.len(), &reduced);
        Self::span(field, m.ncols(), sys.kernel())
    }
}

/// A quotient `cycles / boundaries` presented by coset representatives.
#[derive(Clone, Debug)]
pub struct Subquotient<F: Field> {
    field: F,
    cycles: Subspace<F>,
    boundaries: Subspace<F>,
    /// Reduced modulo the boundaries, in echelon form among themselves.
    reps: Subspace<F>,
}

impl<F: Field> Subquotient<F> {
    pub fn new(cycles: Subspace<F>, boundaries: Subspace<F>) -> Result<Self> {
        if cycles.ambient() != boundaries.ambient() {
            return Err(Error::ShapeMismatch(format!(
                "ambient {} vs {}",
                cycles.ambient(),
                boundaries.ambient()
            )));
        }
        if !cycles.contains_subspace(&boundaries) {
            return Err(Error::ContainmentViolation);
        }
        let field = cycles.field.clone();
        let reduced = cycles.basis().iter().map(|v| boundaries.reduce(v)).collect();
        let reps = Subspace::span(&field, cycles.ambient(), reduced);
        Ok(Subquotient {
            field,
            cycles,
            boundaries,
            reps,
        })
    }

    pub fn dim(&self) -> usize {
        self.reps.dim()
    }
    pub fn ambient(&self) -> usize {
        self.cycles.ambient()
    }
    pub fn cycles(&self) -> &Subspace<F> {
        &self.cycles
    }
    pub fn boundaries(&self) -> &Subspace<F> {
        &self.boundaries
    }
    /// Coset representatives, one per quotient basis vector.
    pub fn representatives(&self) -> &[Vec<F::Elem>] {
        self.reps.basis()
    }

    /// Quotient coordinates of a cycle, `None` when `v` is not a cycle.
    pub fn project(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        let r = self.boundaries.reduce(v);
        let coords: Vec<F::Elem> = self.reps.pivots().iter().map(|&pc| r[pc].clone()).collect();
        let mut rest = r;
        for (c, row) in coords.iter().zip(self.reps.basis()) {
            vector::axpy(&self.field, &mut rest, &self.field.neg(c), row);
        }
        vector::is_zero(&self.field, &rest).then_some(coords)
    }

    pub fn is_boundary(&self, v: &[F::Elem]) -> bool {
        self.boundaries.contains(v)
    }
}

/// Outcome of a linear solve `m x = b`.
#[derive(Clone, Debug)]
pub enum Solve<F: Field> {
    Solution(Vec<F::Elem>),
    /// A row vector `y` with `y m = 0` and `y b = 1`.
    Infeasible(Vec<F::Elem>),
}

impl<F: Field> Solve<F> {
    pub fn solution(self) -> Option<Vec<F::Elem>> {
        match self {
            Solve::Solution(x) => Some(x),
            Solve::Infeasible(_) => None,
        }
    }
}

/// Solves `m x = b`, returning a particular solution (free variables zero)
/// or a certificate of infeasibility.
pub fn solve<F: Field>(m: &Matrix<F>, b: &[F::Elem]) -> Solve<F> {
    let f = m.field();
    assert_eq!(m.nrows(), b.len(), "right-hand side length");
    let cols = m.ncols();
    let aug: Vec<Vec<F::Elem>> = m
        .rows()
        .iter()
        .zip(b)
        .map(|(r, x)| {
            let mut row = r.clone();
            row.push(x.clone());
            row
        })
        .collect();
    let ech = rref(f, aug, cols + 1);
    if ech.pivots.last() == Some(&cols) {
        return Solve::Infeasible(certificate(m, b));
    }
    let mut x = vector::zeros(f, cols);
    for (row, &pc) in ech.rows.iter().zip(&ech.pivots) {
        x[pc] = row[cols].clone();
    }
    Solve::Solution(x)
}

fn certificate<F: Field>(m: &Matrix<F>, b: &[F::Elem]) -> Vec<F::Elem> {
    let f = m.field();
    let n = m.nrows();
    let cols = m.ncols();
    // Track row operations with an identity block: T [m | b | I] = [R | c | T].
    let aug: Vec<Vec<F::Elem>> = (0..n)
        .map(|i| {
            let mut row = m.row(i).to_vec();
            row.push(b[i].clone());
            row.extend(vector::unit(f, n, i));
            row
        })
        .collect();
    let ech = rref(f, aug, cols + 1 + n);
    let k = ech
        .pivots
        .iter()
        .position(|&c| c == cols)
        .expect("inconsistent system has a pivot in the last column");
    ech.rows[k][cols + 1..].to_vec()
}

/// Re-checks an infeasibility certificate: `y m = 0` and `y b != 0`.
pub fn check_certificate<F: Field>(m: &Matrix<F>, b: &[F::Elem], y: &[F::Elem]) -> bool {
    let f = m.field();
    if y.len() != m.nrows() {
        return false;
    }
    let ym = m.transpose().mul_vec(y);
    vector::is_zero(f, &ym) && !f.is_zero(&vector::dot(f, y, b))
}
