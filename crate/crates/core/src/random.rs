//! Random valid multicomplexes and morphisms for property tests.
//!
//! `d_0` is drawn column by column so that `d_0² = 0`; each further `d_l` is
//! a random solution of the (linear in `d_l`) relation of level `l`. When a
//! level has no solution, or when a finite bound leaves quadratic relations
//! unsatisfied, the offending values are quotiented away: the quotient by
//! the subcomplex they generate satisfies every relation.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;

use crate::bigraded::{Bidegree, BigradedModule};
use crate::constructions::{quotient, subobject, Subcomplex};
use crate::error::Result;
use crate::field::Field;
use crate::hom::MorphismSystem;
use crate::linalg::{self, vector, Matrix, Solve, Subspace};
use crate::multicomplex::{Bound, Morphism, Multicomplex};

/// Shape of a random multicomplex.
#[derive(Clone, Copy, Debug)]
pub struct Shape {
    pub bound: Bound,
    /// Lower-left corner of the support box.
    pub origin: Bidegree,
    pub width: usize,
    pub height: usize,
    pub max_dim: usize,
    /// Probability that a bidegree of the box is nonzero.
    pub fill: f64,
    /// Probability that a random matrix entry is nonzero.
    pub density: f64,
}

impl Shape {
    pub fn new(bound: Bound) -> Self {
        Shape {
            bound,
            origin: Bidegree::new(-4, -2),
            width: 5,
            height: 5,
            max_dim: 3,
            fill: 0.6,
            density: 0.6,
        }
    }
}

fn random_matrix<F: Field, R: Rng + ?Sized>(f: &F, rows: usize, cols: usize, density: f64, rng: &mut R) -> Matrix<F> {
    let data = (0..rows)
        .map(|_| {
            (0..cols)
                .map(|_| if rng.gen_bool(density) { f.sample(rng) } else { f.zero() })
                .collect()
        })
        .collect();
    Matrix::from_rows(f, cols, data)
}

/// Matrix of `v ↦ reduce(v)` modulo `s`, which kills exactly `s`.
fn reducer<F: Field>(f: &F, s: &Subspace<F>) -> Matrix<F> {
    let n = s.ambient();
    let cols: Vec<Vec<F::Elem>> = (0..n).map(|k| s.reduce(&vector::unit(f, n, k))).collect();
    Matrix::from_columns(f, n, &cols)
}

fn random_d0<F: Field, R: Rng + ?Sized>(m: &mut Multicomplex<F>, shape: &Shape, rng: &mut R) -> Result<()> {
    let f = m.field().clone();
    let support: Vec<Bidegree> = m.support().collect();
    for b in support {
        let t = b.d(0);
        if m.dim(t) == 0 {
            continue;
        }
        let below = Bidegree::new(b.p, b.q - 1);
        let image = Subspace::span(&f, m.dim(b), m.d_block(0, below).column_space());
        let y = random_matrix(&f, m.dim(t), m.dim(b), shape.density, rng);
        m.set_d(0, b, y.mul(&reducer(&f, &image)))?;
    }
    Ok(())
}

/// Unknowns: the entries of `d_l` at every source with a nonzero target.
/// Equations: relation `l` at every source.
fn solve_level<F: Field, R: Rng + ?Sized>(m: &Multicomplex<F>, l: usize, density: f64, rng: &mut R) -> Option<BTreeMap<Bidegree, Matrix<F>>> {
    let f = m.field();
    let mut offsets = BTreeMap::new();
    let mut nvars = 0;
    for (b, d) in m.module().iter() {
        let t = m.dim(b.d(l));
        if t > 0 {
            offsets.insert(b, nvars);
            nvars += d * t;
        }
    }
    let sign_l = f.sign(l as i64);
    let mut rows: Vec<Vec<F::Elem>> = Vec::new();
    let mut rhs = Vec::new();
    for (s, ds) in m.module().iter() {
        let mid0 = s.d(0);
        let t = s.d(l).d(0);
        let nt = m.dim(t);
        if nt == 0 {
            continue;
        }
        // Known part: ∑_{i+j=l, i,j>=1} (-1)^i d_i d_j.
        let mut known = Matrix::zeros(f, nt, ds);
        for i in 1..l {
            let j = l - i;
            let prod = m.d_block(i, s.d(j)).mul(&m.d_block(j, s));
            known = known.add(&prod.scale(&f.sign(i as i64)));
        }
        let d0_after = m.d_block(0, s.d(l));
        let d0_before = m.d_block(0, s);
        for r in 0..nt {
            for c in 0..ds {
                let mut row = vector::zeros(f, nvars);
                // d_0 D_s
                if let Some(&o) = offsets.get(&s) {
                    for k in 0..m.dim(s.d(l)) {
                        let v = o + k * ds + c;
                        row[v] = f.add(&row[v], d0_after.get(r, k));
                    }
                }
                // (-1)^l D_{s.d(0)} d_0
                if let Some(&o) = offsets.get(&mid0) {
                    let dm = m.dim(mid0);
                    for k in 0..dm {
                        let v = o + r * dm + k;
                        row[v] = f.add(&row[v], &f.mul(&sign_l, d0_before.get(k, c)));
                    }
                }
                rows.push(row);
                rhs.push(f.neg(known.get(r, c)));
            }
        }
    }
    if nvars == 0 {
        return rhs.iter().all(|c| f.is_zero(c)).then(BTreeMap::new);
    }
    let a = Matrix::from_rows(f, nvars, rows);
    let Solve::Solution(mut x) = linalg::solve(&a, &rhs) else {
        return None;
    };
    for k in a.kernel() {
        if rng.gen_bool(density) {
            vector::axpy(f, &mut x, &f.sample(rng), &k);
        }
    }
    let mut out = BTreeMap::new();
    for (&b, &o) in &offsets {
        let (nr, nc) = (m.dim(b.d(l)), m.dim(b));
        let data = (0..nr).map(|r| x[o + r * nc..o + (r + 1) * nc].to_vec()).collect();
        out.insert(b, Matrix::from_rows(f, nc, data));
    }
    Some(out)
}

/// Quotient by the subcomplex generated by the values of relation `l`.
fn kill_relation<F: Field>(m: Multicomplex<F>, levels: std::ops::RangeInclusive<usize>) -> Result<Multicomplex<F>> {
    let m = Arc::new(m);
    let mut sub = Subcomplex::zero(m.field());
    for l in levels {
        for b in m.support().collect::<Vec<_>>() {
            let block = m.relation_block(l, b);
            let t = Bidegree::new(b.p - l as i64, b.q + 2 - l as i64);
            sub.add_vectors(&m, t, block.columns());
        }
    }
    if sub.dims().is_empty() {
        return Ok(Arc::try_unwrap(m).unwrap_or_else(|a| (*a).clone()));
    }
    sub.saturate(&m);
    let (q, _) = quotient(&m, &sub)?;
    Ok((*q).clone())
}

/// A random multicomplex satisfying every relation, with support inside the
/// box of `shape`.
pub fn random_multicomplex<F: Field, R: Rng + ?Sized>(field: &F, shape: &Shape, rng: &mut R) -> Multicomplex<F> {
    let mut dims = Vec::new();
    for dp in 0..shape.width as i64 {
        for dq in 0..shape.height as i64 {
            if rng.gen_bool(shape.fill) {
                let d = rng.gen_range(1..=shape.max_dim);
                dims.push((Bidegree::new(shape.origin.p + dp, shape.origin.q + dq), d));
            }
        }
    }
    let mut m = Multicomplex::new(field, shape.bound, BigradedModule::from_dims(dims));
    random_d0(&mut m, shape, rng).expect("d_0 blocks fit");
    let reach = shape.width.saturating_sub(1);
    let top = match shape.bound {
        Bound::Finite(n) => (n.saturating_sub(1)).min(reach),
        Bound::Infinite => reach,
    };
    for l in 1..=top {
        match solve_level(&m, l, shape.density, rng) {
            Some(blocks) => {
                for (b, block) in blocks {
                    m.set_d(l, b, block).expect("solution blocks fit");
                }
            }
            None => m = kill_relation(m, l..=l).expect("relation values span a subcomplex"),
        }
    }
    if let Bound::Finite(n) = shape.bound {
        if n >= 1 {
            m = kill_relation(m, n..=2 * n.saturating_sub(1)).expect("relation values span a subcomplex");
        }
    }
    debug_assert!(m.is_valid(), "{}", m.validate().iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "));
    m
}

/// A random change of basis in every bidegree.
pub fn conjugate<F: Field, R: Rng + ?Sized>(m: &Multicomplex<F>, rng: &mut R) -> Result<(Multicomplex<F>, Morphism<F>)> {
    let f = m.field();
    let mut g = BTreeMap::new();
    let mut ginv = BTreeMap::new();
    for (b, d) in m.module().iter() {
        loop {
            let x = random_matrix(f, d, d, 1.0, rng);
            if x.rank() == d {
                let inv_cols: Vec<Vec<F::Elem>> = (0..d)
                    .map(|k| linalg::solve(&x, &vector::unit(f, d, k)).solution().expect("invertible"))
                    .collect();
                ginv.insert(b, Matrix::from_columns(f, d, &inv_cols));
                g.insert(b, x);
                break;
            }
        }
    }
    let mut out = Multicomplex::new(f, m.bound(), m.module().clone());
    for i in 0..m.num_maps() {
        for b in m.support() {
            let t = b.d(i);
            if m.dim(t) == 0 {
                continue;
            }
            let block = g[&t].mul(&m.d_block(i, b)).mul(&ginv[&b]);
            out.set_d(i, b, block)?;
        }
    }
    out.set_horizon(m.horizon());
    let src = Arc::new(m.clone());
    let out_arc = Arc::new(out.clone());
    let iso = Morphism::from_blocks(src, out_arc, g)?;
    Ok((out, iso))
}

/// The subcomplex generated by a few random vectors.
pub fn random_subcomplex<F: Field, R: Rng + ?Sized>(m: &Multicomplex<F>, count: usize, rng: &mut R) -> Subcomplex<F> {
    let f = m.field();
    let support: Vec<(Bidegree, usize)> = m.module().iter().collect();
    let mut sub = Subcomplex::zero(f);
    if support.is_empty() {
        return sub;
    }
    for _ in 0..count {
        let (b, d) = support[rng.gen_range(0..support.len())];
        let v: Vec<F::Elem> = (0..d).map(|_| f.sample(rng)).collect();
        sub.add_vectors(m, b, vec![v]);
    }
    sub.saturate(m);
    sub
}

/// A random quotient `M → M/S`, which is surjective.
pub fn random_quotient<F: Field, R: Rng + ?Sized>(m: &Arc<Multicomplex<F>>, count: usize, rng: &mut R) -> Result<Morphism<F>> {
    let sub = random_subcomplex(m, count, rng);
    Ok(quotient(m, &sub)?.1)
}

/// A random inclusion `S → M`.
pub fn random_inclusion<F: Field, R: Rng + ?Sized>(m: &Arc<Multicomplex<F>>, count: usize, rng: &mut R) -> Result<Morphism<F>> {
    let sub = random_subcomplex(m, count, rng);
    Ok(subobject(m, &sub)?.1)
}

/// A uniformly random morphism `A → B`.
pub fn random_morphism<F: Field, R: Rng + ?Sized>(a: &Arc<Multicomplex<F>>, b: &Arc<Multicomplex<F>>, rng: &mut R) -> Result<Morphism<F>> {
    MorphismSystem::new(a.clone(), b.clone())?.random(rng)
}
