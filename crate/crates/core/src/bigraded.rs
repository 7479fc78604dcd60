//! Bigraded vector spaces and homogeneous maps between them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, Matrix, Solve, Subquotient, Subspace};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Bidegree {
    pub p: i64,
    pub q: i64,
}

impl Bidegree {
    pub const fn new(p: i64, q: i64) -> Self {
        Bidegree { p, q }
    }

    /// Bidegree of the structure map `d_i`.
    pub const fn of_d(i: usize) -> Self {
        Bidegree {
            p: -(i as i64),
            q: 1 - i as i64,
        }
    }

    /// `self` shifted by `d_i`.
    pub const fn d(self, i: usize) -> Self {
        Bidegree {
            p: self.p - i as i64,
            q: self.q + 1 - i as i64,
        }
    }
}

impl fmt::Display for Bidegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.p, self.q)
    }
}

impl Add for Bidegree {
    type Output = Bidegree;
    fn add(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.p + o.p, self.q + o.q)
    }
}

impl Sub for Bidegree {
    type Output = Bidegree;
    fn sub(self, o: Bidegree) -> Bidegree {
        Bidegree::new(self.p - o.p, self.q - o.q)
    }
}

impl Neg for Bidegree {
    type Output = Bidegree;
    fn neg(self) -> Bidegree {
        Bidegree::new(-self.p, -self.q)
    }
}

impl From<(i64, i64)> for Bidegree {
    fn from((p, q): (i64, i64)) -> Self {
        Bidegree::new(p, q)
    }
}

/// Finite-support bigraded vector space: a dimension per bidegree, each
/// component carrying its standard basis.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct BigradedModule {
    dims: BTreeMap<Bidegree, usize>,
}

impl BigradedModule {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_dims<I: IntoIterator<Item = (Bidegree, usize)>>(dims: I) -> Self {
        let mut m = Self::new();
        for (b, d) in dims {
            m.set(b, m.dim(b) + d);
        }
        m
    }

    pub fn dim(&self, at: Bidegree) -> usize {
        self.dims.get(&at).copied().unwrap_or(0)
    }

    pub fn set(&mut self, at: Bidegree, dim: usize) {
        if dim == 0 {
            self.dims.remove(&at);
        } else {
            self.dims.insert(at, dim);
        }
    }

    /// Nonzero bidegrees in lexicographic `(p, q)` order.
    pub fn support(&self) -> impl Iterator<Item = Bidegree> + '_ {
        self.dims.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Bidegree, usize)> + '_ {
        self.dims.iter().map(|(b, d)| (*b, *d))
    }

    pub fn is_zero(&self) -> bool {
        self.dims.is_empty()
    }

    pub fn total_dim(&self) -> usize {
        self.dims.values().sum()
    }

    /// `(pmin, pmax, qmin, qmax)` of the support.
    pub fn bounds(&self) -> Option<(i64, i64, i64, i64)> {
        let mut it = self.support();
        let first = it.next()?;
        let mut b = (first.p, first.p, first.q, first.q);
        for x in it {
            b.0 = b.0.min(x.p);
            b.1 = b.1.max(x.p);
            b.2 = b.2.min(x.q);
            b.3 = b.3.max(x.q);
        }
        Some(b)
    }

    /// Width of the support in the `p` direction (0 for a single column).
    pub fn p_diameter(&self) -> i64 {
        self.bounds().map_or(0, |(a, b, _, _)| b - a)
    }

    pub fn shifted(&self, by: Bidegree) -> Self {
        Self::from_dims(self.iter().map(|(b, d)| (b + by, d)))
    }
}

/// A homogeneous linear map of fixed bidegree `shift`, one block per source
/// bidegree. Only nonzero blocks are stored.
#[derive(Clone, Debug, PartialEq)]
pub struct GradedMap<F: Field> {
    field: F,
    shift: Bidegree,
    source: BigradedModule,
    target: BigradedModule,
    blocks: BTreeMap<Bidegree, Matrix<F>>,
}

impl<F: Field> GradedMap<F> {
    pub fn zero(field: &F, shift: Bidegree, source: &BigradedModule, target: &BigradedModule) -> Self {
        GradedMap {
            field: field.clone(),
            shift,
            source: source.clone(),
            target: target.clone(),
            blocks: BTreeMap::new(),
        }
    }

    pub fn identity(field: &F, module: &BigradedModule) -> Self {
        let mut m = Self::zero(field, Bidegree::default(), module, module);
        for (b, d) in module.iter() {
            m.blocks.insert(b, Matrix::identity(field, d));
        }
        m
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn shift(&self) -> Bidegree {
        self.shift
    }
    pub fn source(&self) -> &BigradedModule {
        &self.source
    }
    pub fn target(&self) -> &BigradedModule {
        &self.target
    }

    /// Sets the block at source bidegree `at`. Zero blocks are dropped.
    pub fn set_block(&mut self, at: Bidegree, block: Matrix<F>) -> Result<()> {
        let (rows, cols) = (self.target.dim(at + self.shift), self.source.dim(at));
        if block.nrows() != rows || block.ncols() != cols {
            return Err(Error::ShapeMismatch(format!(
                "block at {at} is {}x{}, expected {rows}x{cols}",
                block.nrows(),
                block.ncols()
            )));
        }
        if block.is_zero() {
            self.blocks.remove(&at);
        } else {
            self.blocks.insert(at, block);
        }
        Ok(())
    }

    pub fn block_ref(&self, at: Bidegree) -> Option<&Matrix<F>> {
        self.blocks.get(&at)
    }

    /// The block at `at`, materializing zeros when absent.
    pub fn block(&self, at: Bidegree) -> Matrix<F> {
        match self.blocks.get(&at) {
            Some(m) => m.clone(),
            None => Matrix::zeros(&self.field, self.target.dim(at + self.shift), self.source.dim(at)),
        }
    }

    pub fn blocks(&self) -> impl Iterator<Item = (Bidegree, &Matrix<F>)> {
        self.blocks.iter().map(|(b, m)| (*b, m))
    }

    pub fn is_zero(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn apply(&self, at: Bidegree, v: &[F::Elem]) -> Vec<F::Elem> {
        match self.blocks.get(&at) {
            Some(m) => m.mul_vec(v),
            None => linalg::vector::zeros(&self.field, self.target.dim(at + self.shift)),
        }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &GradedMap<F>) -> GradedMap<F> {
        let mut out = GradedMap::zero(&self.field, self.shift + other.shift, &other.source, &self.target);
        for (b, m) in other.blocks() {
            if let Some(s) = self.blocks.get(&(b + other.shift)) {
                let prod = s.mul(m);
                if !prod.is_zero() {
                    out.blocks.insert(b, prod);
                }
            }
        }
        out
    }

    pub fn add(&self, other: &GradedMap<F>) -> GradedMap<F> {
        assert_eq!(self.shift, other.shift, "sum of maps with different shifts");
        let mut out = self.clone();
        for (b, m) in other.blocks() {
            let sum = match out.blocks.get(&b) {
                Some(x) => x.add(m),
                None => m.clone(),
            };
            if sum.is_zero() {
                out.blocks.remove(&b);
            } else {
                out.blocks.insert(b, sum);
            }
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> GradedMap<F> {
        let mut out = GradedMap::zero(&self.field, self.shift, &self.source, &self.target);
        if self.field.is_zero(c) {
            return out;
        }
        for (b, m) in self.blocks() {
            out.blocks.insert(b, m.scale(c));
        }
        out
    }

    pub fn sub(&self, other: &GradedMap<F>) -> GradedMap<F> {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    /// Same blocks viewed between other modules; blocks must still fit.
    pub fn with_modules(&self, source: &BigradedModule, target: &BigradedModule) -> Result<Self> {
        let mut out = GradedMap::zero(&self.field, self.shift, source, target);
        for (b, m) in self.blocks() {
            out.set_block(b, m.clone())?;
        }
        Ok(out)
    }

    pub fn check_shapes(&self) -> Result<()> {
        for (b, m) in self.blocks() {
            let (rows, cols) = (self.target.dim(b + self.shift), self.source.dim(b));
            if m.nrows() != rows || m.ncols() != cols {
                return Err(Error::ShapeMismatch(format!("block at {b}")));
            }
        }
        Ok(())
    }
}

/// Canonical basis of the kernel of `m` at source bidegree `at`.
pub fn kernel_of<F: Field>(m: &GradedMap<F>, at: Bidegree) -> Subspace<F> {
    let f = m.field();
    let n = m.source().dim(at);
    match m.block_ref(at) {
        Some(b) => Subspace::span(f, n, b.kernel()),
        None => Subspace::full(f, n),
    }
}

/// Canonical basis of the image of `m` restricted to source bidegree `at`;
/// a subspace of the target component at `at + shift`.
pub fn image_of<F: Field>(m: &GradedMap<F>, at: Bidegree) -> Subspace<F> {
    let f = m.field();
    let n = m.target().dim(at + m.shift());
    match m.block_ref(at) {
        Some(b) => Subspace::span(f, n, b.column_space()),
        None => Subspace::zero(f, n),
    }
}

/// `span(cycles) / span(boundaries)` inside `F^ambient`.
pub fn subquotient<F: Field>(
    field: &F,
    ambient: usize,
    cycles: Vec<Vec<F::Elem>>,
    boundaries: Vec<Vec<F::Elem>>,
) -> Result<Subquotient<F>> {
    Subquotient::new(
        Subspace::span(field, ambient, cycles),
        Subspace::span(field, ambient, boundaries),
    )
}

/// A preimage under `m` of `target`, an element at bidegree `at + shift`.
pub fn solve<F: Field>(m: &GradedMap<F>, at: Bidegree, target: &[F::Elem]) -> Solve<F> {
    linalg::solve(&m.block(at), target)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::PrimeField;

    #[test]
    fn d_shift() {
        assert_eq!(Bidegree::of_d(0), Bidegree::new(0, 1));
        assert_eq!(Bidegree::of_d(2), Bidegree::new(-2, -1));
        assert_eq!(Bidegree::new(3, 3).d(1), Bidegree::new(2, 3));
    }

    #[test]
    fn zero_dims_are_normalized() {
        let mut m = BigradedModule::from_dims([(Bidegree::new(0, 0), 2)]);
        m.set(Bidegree::new(0, 0), 0);
        assert!(m.is_zero());
        assert_eq!(m, BigradedModule::new());
    }

    #[test]
    fn identity_kernel_and_image() {
        let f = PrimeField::new(7).unwrap();
        let at = Bidegree::new(1, -1);
        let m = BigradedModule::from_dims([(at, 3)]);
        let id = GradedMap::identity(&f, &m);
        assert_eq!(kernel_of(&id, at).dim(), 0);
        assert_eq!(image_of(&id, at).dim(), 3);
        let z = GradedMap::zero(&f, Bidegree::default(), &m, &m);
        assert_eq!(kernel_of(&z, at).dim(), 3);
        assert!(solve(&z, at, &[1, 0, 0]).solution().is_none());
        assert_eq!(solve(&id, at, &[1, 2, 3]).solution(), Some(vec![1, 2, 3]));
    }
}
