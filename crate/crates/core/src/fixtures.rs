//! Small hand-described multicomplexes used throughout: the corner, points,
//! staircases and the two-cell cone.

use std::sync::Arc;

use crate::bigraded::{Bidegree, BigradedModule};
use crate::error::Result;
use crate::field::Field;
use crate::linalg::Matrix;
use crate::multicomplex::{Bound, Morphism, Multicomplex};

fn one<F: Field>(f: &F) -> Matrix<F> {
    Matrix::from_rows(f, 1, vec![vec![f.one()]])
}

/// Builds a multicomplex with one basis vector per listed bidegree and
/// `d_i` sending cell `s` to cell `t` with coefficient 1.
pub fn cells<F: Field>(field: &F, bound: Bound, at: &[Bidegree], arrows: &[(usize, usize, usize)]) -> Result<Multicomplex<F>> {
    let module = BigradedModule::from_dims(at.iter().map(|b| (*b, 1)));
    assert_eq!(module.total_dim(), at.len(), "cells must sit in distinct bidegrees");
    let mut m = Multicomplex::new(field, bound, module);
    for &(i, s, t) in arrows {
        assert_eq!(at[s].d(i), at[t], "arrow d_{i} from {} cannot reach {}", at[s], at[t]);
        m.set_d(i, at[s], one(field))?;
    }
    Ok(m)
}

/// The corner: `x` at `(p,q)`, `y` at `(p-1,q)`, `z` at `(p-1,q-1)` with
/// `d_1 x = y` and `d_0 z = y`.
pub fn corner<F: Field>(field: &F, bound: Bound, p: i64, q: i64) -> Multicomplex<F> {
    let b = Bidegree::new;
    cells(field, bound, &[b(p, q), b(p - 1, q), b(p - 1, q - 1)], &[(1, 0, 1), (0, 2, 1)])
        .expect("corner is well formed")
}

/// `𝕜^{p,q}`.
pub fn point<F: Field>(field: &F, bound: Bound, p: i64, q: i64) -> Multicomplex<F> {
    Multicomplex::point(field, bound, Bidegree::new(p, q))
}

/// The projection of the corner onto its top-right cell.
pub fn corner_projection<F: Field>(field: &F, bound: Bound, p: i64, q: i64) -> Morphism<F> {
    let c = Arc::new(corner(field, bound, p, q));
    let k = Arc::new(point(field, bound, p, q));
    Morphism::from_blocks(c, k, [(Bidegree::new(p, q), one(field))]).expect("projection fits")
}

/// The staircase with `s` horizontal steps and top-right cell at `(p,q)`:
/// cells `a_k` at `(p-k,q-k)` and `d_1 a_k` at `(p-k-1,q-k)` for `k < s`,
/// with `d_0 a_k = d_1 a_{k-1}`. For `s = 0` it is the square spanned by
/// `x, d_0 x, d_1 x, d_0 d_1 x`.
pub fn staircase<F: Field>(field: &F, bound: Bound, s: usize, p: i64, q: i64) -> Multicomplex<F> {
    let b = Bidegree::new;
    if s == 0 {
        let at = [b(p, q), b(p, q + 1), b(p - 1, q), b(p - 1, q + 1)];
        return cells(field, bound, &at, &[(0, 0, 1), (1, 0, 2), (0, 2, 3), (1, 1, 3)])
            .expect("square is well formed");
    }
    let mut at = Vec::new();
    let mut arrows = Vec::new();
    for k in 0..s as i64 {
        at.push(b(p - k, q - k));
        at.push(b(p - k - 1, q - k));
    }
    for k in 0..s {
        arrows.push((1, 2 * k, 2 * k + 1));
        if k >= 1 {
            arrows.push((0, 2 * k, 2 * k - 1));
        }
    }
    cells(field, bound, &at, &arrows).expect("staircase is well formed")
}

/// `C_r`: the staircase at `(0,0)` with `r` steps.
pub fn cone<F: Field>(field: &F, bound: Bound, r: usize) -> Multicomplex<F> {
    staircase(field, bound, r, 0, 0)
}

/// `C_r^∞ = 𝕜e_{0,0} ⊕ 𝕜e_{-r,1-r}` with `d_r e_{0,0} = e_{-r,1-r}`.
pub fn cone_infinity<F: Field>(field: &F, r: usize) -> Multicomplex<F> {
    let at = [Bidegree::new(0, 0), Bidegree::new(-(r as i64), 1 - r as i64)];
    cells(field, Bound::Infinite, &at, &[(r, 0, 1)]).expect("two-cell cone is well formed")
}

/// The infinite staircase with top-right cell at `(p,q)`, cut below `pmin`.
pub fn infinite_staircase<F: Field>(field: &F, bound: Bound, p: i64, q: i64, pmin: i64) -> Multicomplex<F> {
    let steps = (p - pmin + 2).max(1) as usize;
    staircase(field, bound, steps, p, q).truncate_below(pmin)
}
