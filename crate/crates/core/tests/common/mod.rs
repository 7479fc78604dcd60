//! Shared test support: a random corpus, a fixture set, and an independent
//! page oracle built from the filtered total complex over GF(p).
#![allow(dead_code)]

use std::sync::Arc;

use multicx::fixtures;
use multicx::random::{random_multicomplex, Shape};
use multicx::{Bidegree, Bound, Multicomplex, PrimeField};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type MC = Multicomplex<PrimeField>;

pub fn gf(p: u64) -> PrimeField {
    PrimeField::new(p).unwrap()
}

pub fn b(p: i64, q: i64) -> Bidegree {
    Bidegree::new(p, q)
}

pub const CORPUS_BOUNDS: [Bound; 4] = [Bound::Finite(2), Bound::Finite(3), Bound::Finite(4), Bound::Infinite];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `per_cell` random objects for each of GF(2), GF(7) and each bound.
pub fn corpus(per_cell: usize) -> Vec<Arc<MC>> {
    let mut out = Vec::new();
    for (pi, p) in [2u64, 7].into_iter().enumerate() {
        let f = gf(p);
        for (ni, n) in CORPUS_BOUNDS.into_iter().enumerate() {
            let mut r = rng(1000 + 10 * pi as u64 + ni as u64);
            let shape = Shape::new(n);
            for _ in 0..per_cell {
                out.push(Arc::new(random_multicomplex(&f, &shape, &mut r)));
            }
        }
    }
    out
}

/// The standard 200-object corpus.
pub fn standard_corpus() -> Vec<Arc<MC>> {
    corpus(25)
}

/// Hand fixtures over `f` for bound `n`: corner, square, staircases, a
/// point, plus a few random objects.
pub fn fixture_set(f: &PrimeField, n: Bound, seed: u64) -> Vec<Arc<MC>> {
    let mut out = vec![
        Arc::new(fixtures::corner(f, n, 0, 0)),
        Arc::new(fixtures::point(f, n, 1, -1)),
        Arc::new(fixtures::staircase(f, n, 0, 0, 0)),
        Arc::new(fixtures::staircase(f, n, 2, 1, 1)),
    ];
    let mut r = rng(seed);
    let mut shape = Shape::new(n);
    shape.width = 3;
    shape.height = 3;
    shape.max_dim = 2;
    for _ in 0..2 {
        out.push(Arc::new(random_multicomplex(f, &shape, &mut r)));
    }
    out
}

/// Exact linear algebra over GF(p) on `u64`, written independently of the
/// library.
pub mod gfp {
    pub fn inv(a: u64, p: u64) -> u64 {
        let mut r = 1u64;
        let mut base = a % p;
        let mut e = p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % p;
            }
            base = base * base % p;
            e >>= 1;
        }
        r
    }

    /// Row reduces in place; returns pivot columns.
    pub fn reduce(rows: &mut Vec<Vec<u64>>, cols: usize, p: u64) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            let Some(k) = (r..rows.len()).find(|&k| rows[k][c] != 0) else { continue };
            rows.swap(r, k);
            let s = inv(rows[r][c], p);
            for x in rows[r].iter_mut() {
                *x = *x * s % p;
            }
            for k in 0..rows.len() {
                if k != r && rows[k][c] != 0 {
                    let m = rows[k][c];
                    for j in 0..cols {
                        rows[k][j] = (rows[k][j] + p - m * rows[r][j] % p) % p;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        rows.truncate(r);
        pivots
    }

    pub fn rank(vectors: &[Vec<u64>], dim: usize, p: u64) -> usize {
        let mut rows = vectors.to_vec();
        reduce(&mut rows, dim, p).len()
    }

    /// Basis of `{x : M x = 0}` for `M` given by rows.
    pub fn nullspace(rows: &[Vec<u64>], cols: usize, p: u64) -> Vec<Vec<u64>> {
        let mut rows = rows.to_vec();
        let pivots = reduce(&mut rows, cols, p);
        let mut out = Vec::new();
        for free in (0..cols).filter(|c| !pivots.contains(c)) {
            let mut x = vec![0u64; cols];
            x[free] = 1;
            for (r, &pc) in pivots.iter().enumerate() {
                x[pc] = (p - rows[r][free]) % p;
            }
            out.push(x);
        }
        out
    }
}

/// The filtered total complex `Tot(A)` in degree `k = q - p`, filtered by
/// `p`, with `D = ∑ ε_i d_i` and `ε_i(q) = (-1)^{iq + i(i+1)/2}`.
pub struct Total<'a> {
    a: &'a MC,
    p: u64,
}

impl<'a> Total<'a> {
    pub fn new(a: &'a MC) -> Self {
        let p = a.field().characteristic();
        Total { a, p }
    }

    /// Cells of degree `k`: `(bidegree, index)` in `p` order.
    fn cells(&self, k: i64) -> Vec<(Bidegree, usize)> {
        let mut out = Vec::new();
        for (bd, d) in self.a.module().iter() {
            if bd.q - bd.p == k {
                for j in 0..d {
                    out.push((bd, j));
                }
            }
        }
        out.sort();
        out
    }

    fn eps(&self, i: usize, q: i64) -> u64 {
        let e = (i as i64 * q + (i * (i + 1) / 2) as i64).rem_euclid(2);
        if e == 0 {
            1
        } else {
            self.p - 1
        }
    }

    /// `D` applied to a vector of degree `k`, as a vector of degree `k + 1`.
    pub fn apply(&self, k: i64, x: &[u64]) -> Vec<u64> {
        let src = self.cells(k);
        let dst = self.cells(k + 1);
        let mut y = vec![0u64; dst.len()];
        for (c, &(bd, j)) in src.iter().enumerate() {
            if x[c] == 0 {
                continue;
            }
            for i in 0..self.a.num_maps() {
                let block = self.a.d_block(i, bd);
                let to = bd.d(i);
                let s = self.eps(i, bd.q);
                for row in 0..block.nrows() {
                    let v = *block.get(row, j);
                    if v == 0 {
                        continue;
                    }
                    let t = dst.iter().position(|&(b2, j2)| b2 == to && j2 == row).unwrap();
                    y[t] = (y[t] + x[c] * v % self.p * s) % self.p;
                }
            }
        }
        y
    }

    pub fn squares_to_zero(&self) -> bool {
        let ks: std::collections::BTreeSet<i64> = self.a.support().map(|x| x.q - x.p).collect();
        ks.into_iter().all(|k| {
            let n = self.cells(k).len();
            (0..n).all(|c| {
                let mut e = vec![0u64; n];
                e[c] = 1;
                self.apply(k + 1, &self.apply(k, &e)).iter().all(|v| *v == 0)
            })
        })
    }

    /// `Z_r^p` in degree `k`: `x ∈ F_p` with `Dx ∈ F_{p-r}`. For `r < 0`
    /// this is all of `F_p`.
    fn cycles(&self, r: i64, p: i64, k: i64) -> Vec<Vec<u64>> {
        let src = self.cells(k);
        let dst = self.cells(k + 1);
        let vars: Vec<usize> = (0..src.len()).filter(|&c| src[c].0.p <= p).collect();
        let mut rows = vec![vec![0u64; vars.len()]; 0];
        let images: Vec<Vec<u64>> = vars
            .iter()
            .map(|&c| {
                let mut e = vec![0u64; src.len()];
                e[c] = 1;
                self.apply(k, &e)
            })
            .collect();
        for (t, &(bd, _)) in dst.iter().enumerate() {
            if bd.p > p - r {
                rows.push(images.iter().map(|im| im[t]).collect());
            }
        }
        gfp::nullspace(&rows, vars.len(), self.p)
            .into_iter()
            .map(|y| {
                let mut x = vec![0u64; src.len()];
                for (v, &c) in vars.iter().enumerate() {
                    x[c] = y[v];
                }
                x
            })
            .collect()
    }

    /// `dim E_r^{p,q}` as `Z_r^p / (Z_{r-1}^{p-1} + D Z_{r-1}^{p+r-1})`.
    pub fn page_dim(&self, r: usize, at: Bidegree) -> usize {
        let (p, k, r) = (at.p, at.q - at.p, r as i64);
        let n = self.cells(k).len();
        let z = self.cycles(r, p, k);
        let mut den = self.cycles(r - 1, p - 1, k);
        den.extend(self.cycles(r - 1, p + r - 1, k - 1).iter().map(|x| self.apply(k - 1, x)));
        gfp::rank(&z, n, self.p) - gfp::rank(&den, n, self.p)
    }

    /// Bidegrees where some page can be nonzero.
    pub fn candidates(&self) -> Vec<Bidegree> {
        self.a.support().collect()
    }
}
