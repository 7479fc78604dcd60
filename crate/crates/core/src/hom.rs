//! Morphisms as solutions of linear systems.
//!
//! The unknowns are the entries of the blocks of a map `L: S → T` at every
//! bidegree where both sides are nonzero, ordered bidegree-lex then
//! row-major. Commutation with every `d_i` is always imposed; callers add
//! composite and value constraints on top.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::bigraded::Bidegree;
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{self, check_certificate, Matrix, Solve};
use crate::multicomplex::{Morphism, Multicomplex};

pub struct MorphismSystem<F: Field> {
    source: Arc<Multicomplex<F>>,
    target: Arc<Multicomplex<F>>,
    offsets: BTreeMap<Bidegree, usize>,
    nvars: usize,
    rows: Vec<Vec<(usize, F::Elem)>>,
    rhs: Vec<F::Elem>,
}

/// Proof that a system has no solution: `y M = 0` while `y b != 0`.
#[derive(Clone, Debug)]
pub struct Certificate<F: Field> {
    pub matrix: Matrix<F>,
    pub rhs: Vec<F::Elem>,
    pub y: Vec<F::Elem>,
}

impl<F: Field> Certificate<F> {
    pub fn verify(&self) -> bool {
        check_certificate(&self.matrix, &self.rhs, &self.y)
    }
}

#[derive(Clone, Debug)]
pub enum Solved<F: Field> {
    Found(Morphism<F>),
    Infeasible(Certificate<F>),
}

impl<F: Field> Solved<F> {
    pub fn found(self) -> Option<Morphism<F>> {
        match self {
            Solved::Found(m) => Some(m),
            Solved::Infeasible(_) => None,
        }
    }
}

impl<F: Field> MorphismSystem<F> {
    pub fn new(source: Arc<Multicomplex<F>>, target: Arc<Multicomplex<F>>) -> Result<Self> {
        source.same_category(&target)?;
        let mut offsets = BTreeMap::new();
        let mut nvars = 0;
        for (b, d) in source.module().iter() {
            let t = target.dim(b);
            if t > 0 {
                offsets.insert(b, nvars);
                nvars += d * t;
            }
        }
        let mut sys = MorphismSystem {
            source,
            target,
            offsets,
            nvars,
            rows: Vec::new(),
            rhs: Vec::new(),
        };
        sys.add_commutation();
        Ok(sys)
    }

    pub fn num_vars(&self) -> usize {
        self.nvars
    }

    /// Variable index of entry `(r, c)` of the block at `b`.
    pub fn var(&self, b: Bidegree, r: usize, c: usize) -> Option<usize> {
        self.offsets
            .get(&b)
            .map(|o| o + r * self.source.dim(b) + c)
    }

    fn push(&mut self, terms: Vec<(usize, F::Elem)>, rhs: F::Elem) {
        let f = self.source.field();
        let terms: Vec<_> = terms.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        if terms.is_empty() && f.is_zero(&rhs) {
            return;
        }
        self.rows.push(terms);
        self.rhs.push(rhs);
    }

    fn add_commutation(&mut self) {
        let f = self.source.field().clone();
        let (s, t) = (self.source.clone(), self.target.clone());
        let maps = s.num_maps().max(t.num_maps());
        for i in 0..maps {
            for b in s.support() {
                let b2 = b.d(i);
                let dt = t.d_block(i, b);
                let ds = s.d_block(i, b);
                // (d_i^T L_b - L_{b2} d_i^S)[r][c] = 0
                for r in 0..t.dim(b2) {
                    for c in 0..s.dim(b) {
                        let mut terms = Vec::new();
                        for k in 0..t.dim(b) {
                            if let Some(v) = self.var(b, k, c) {
                                terms.push((v, dt.get(r, k).clone()));
                            }
                        }
                        for k in 0..s.dim(b2) {
                            if let Some(v) = self.var(b2, r, k) {
                                terms.push((v, f.neg(ds.get(k, c))));
                            }
                        }
                        self.push(terms, f.zero());
                    }
                }
            }
        }
    }

    /// Imposes `p ∘ L = bottom` for `p: T → Y`, `bottom: S → Y`.
    pub fn post_compose_equals(&mut self, p: &Morphism<F>, bottom: &Morphism<F>) -> Result<()> {
        if p.source().module() != self.target.module() || bottom.source().module() != self.source.module() {
            return Err(Error::ShapeMismatch("post-composition constraint".into()));
        }
        let source = self.source.clone();
        for b in source.support() {
            let pb = p.block(b);
            let bot = bottom.block(b);
            for r in 0..pb.nrows() {
                for c in 0..self.source.dim(b) {
                    let terms = (0..self.target.dim(b))
                        .filter_map(|k| self.var(b, k, c).map(|v| (v, pb.get(r, k).clone())))
                        .collect();
                    self.push(terms, bot.get(r, c).clone());
                }
            }
        }
        Ok(())
    }

    /// Imposes `L ∘ i = top` for `i: A → S`, `top: A → T`.
    pub fn pre_compose_equals(&mut self, i: &Morphism<F>, top: &Morphism<F>) -> Result<()> {
        if i.target().module() != self.source.module() || top.target().module() != self.target.module() {
            return Err(Error::ShapeMismatch("pre-composition constraint".into()));
        }
        for b in i.source().support() {
            let ib = i.block(b);
            let tb = top.block(b);
            for r in 0..self.target.dim(b) {
                for c in 0..ib.ncols() {
                    let terms = (0..self.source.dim(b))
                        .filter_map(|k| self.var(b, r, k).map(|v| (v, ib.get(k, c).clone())))
                        .collect();
                    self.push(terms, tb.get(r, c).clone());
                }
            }
        }
        Ok(())
    }

    /// Imposes `L_b v = w`.
    pub fn maps_to(&mut self, b: Bidegree, v: &[F::Elem], w: &[F::Elem]) -> Result<()> {
        if v.len() != self.source.dim(b) || w.len() != self.target.dim(b) {
            return Err(Error::ShapeMismatch(format!("value constraint at {b}")));
        }
        for (r, wr) in w.iter().enumerate() {
            let terms = v
                .iter()
                .enumerate()
                .filter_map(|(k, x)| self.var(b, r, k).map(|var| (var, x.clone())))
                .collect();
            self.push(terms, wr.clone());
        }
        Ok(())
    }

    fn dense(&self) -> Matrix<F> {
        let f = self.source.field();
        let mut m = Matrix::zeros(f, self.rows.len(), self.nvars);
        for (i, row) in self.rows.iter().enumerate() {
            for (v, c) in row {
                let cur = m.get(i, *v).clone();
                m.set(i, *v, f.add(&cur, c));
            }
        }
        m
    }

    fn morphism_from(&self, x: &[F::Elem]) -> Result<Morphism<F>> {
        let f = self.source.field();
        let mut blocks = Vec::new();
        for (&b, &o) in &self.offsets {
            let (rows, cols) = (self.target.dim(b), self.source.dim(b));
            let data = (0..rows)
                .map(|r| x[o + r * cols..o + (r + 1) * cols].to_vec())
                .collect();
            blocks.push((b, Matrix::from_rows(f, cols, data)));
        }
        Morphism::from_blocks(self.source.clone(), self.target.clone(), blocks)
    }

    /// One solution (free variables zero, so deterministic) or a certificate.
    pub fn solve(&self) -> Result<Solved<F>> {
        let m = self.dense();
        match linalg::solve(&m, &self.rhs) {
            Solve::Solution(x) => Ok(Solved::Found(self.morphism_from(&x)?)),
            Solve::Infeasible(y) => Ok(Solved::Infeasible(Certificate {
                matrix: m,
                rhs: self.rhs.clone(),
                y,
            })),
        }
    }

    /// Dimension of the solution space of the homogeneous system.
    pub fn solution_dim(&self) -> usize {
        self.nvars - self.dense().rank()
    }

    /// A uniformly random solution of the homogeneous system.
    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<Morphism<F>> {
        let f = self.source.field();
        let kernel = self.dense().kernel();
        let mut x = linalg::vector::zeros(f, self.nvars);
        for k in &kernel {
            linalg::vector::axpy(f, &mut x, &f.sample(rng), k);
        }
        self.morphism_from(&x)
    }
}

/// `dim Hom(A, B)`.
pub fn hom_dim<F: Field>(a: &Arc<Multicomplex<F>>, b: &Arc<Multicomplex<F>>) -> Result<usize> {
    Ok(MorphismSystem::new(a.clone(), b.clone())?.solution_dim())
}

/// A random morphism `A → B`.
pub fn random_morphism<F: Field, R: Rng + ?Sized>(
    a: &Arc<Multicomplex<F>>,
    b: &Arc<Multicomplex<F>>,
    rng: &mut R,
) -> Result<Morphism<F>> {
    MorphismSystem::new(a.clone(), b.clone())?.random(rng)
}
