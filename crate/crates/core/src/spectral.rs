//! Pages of the spectral sequence of a multicomplex, by two routes.
//!
//! *Direct*: `E_r = Z_r / B_r` where `Z_r` is the set of `a_0` admitting an
//! extension `(a_0, …, a_{r-1})` and `B_r` is spanned by the explicit
//! boundary sums. *Witness*: `E_r = ZW_r / im w_r`, with `ZW_r` the space of
//! whole extensions and `w_r` defined on `BW_r`.
//!
//! Stacked vectors list the entries `a_0, a_1, …` in order; entry `j` lives
//! at `(p - j, q - j)`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bigraded::Bidegree;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::field::Field;
use crate::linalg::{self, vector, Matrix, Subquotient, Subspace};
use crate::multicomplex::{Morphism, Multicomplex};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Method {
    Direct,
    Witness,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Witness => "witness",
        })
    }
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "witness" => Ok(Method::Witness),
            _ => Err(Error::InvalidArgument(format!("unknown method `{s}`"))),
        }
    }
}

/// Position of stacked entries: entry `j` at `base - (j, j)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stack {
    pub base: Bidegree,
    pub dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl Stack {
    pub fn new<F: Field>(a: &Multicomplex<F>, base: Bidegree, len: usize) -> Self {
        let dims: Vec<usize> = (0..len).map(|j| a.dim(Self::entry_at(base, j))).collect();
        let mut offsets = Vec::with_capacity(len);
        let mut o = 0;
        for d in &dims {
            offsets.push(o);
            o += d;
        }
        Stack { base, dims, offsets }
    }

    pub fn entry_at(base: Bidegree, j: usize) -> Bidegree {
        Bidegree::new(base.p - j as i64, base.q - j as i64)
    }

    pub fn len(&self) -> usize {
        self.dims.len()
    }
    pub fn is_empty(&self) -> bool {
        self.dims.is_empty()
    }
    pub fn ambient(&self) -> usize {
        self.dims.iter().sum()
    }
    pub fn offset(&self, j: usize) -> usize {
        self.offsets[j]
    }

    pub fn entry<'v, T>(&self, v: &'v [T], j: usize) -> &'v [T] {
        &v[self.offsets[j]..self.offsets[j] + self.dims[j]]
    }

    pub fn split<T: Clone>(&self, v: &[T]) -> Vec<Vec<T>> {
        (0..self.len()).map(|j| self.entry(v, j).to_vec()).collect()
    }

    pub fn join<T: Clone>(parts: &[Vec<T>]) -> Vec<T> {
        parts.iter().flatten().cloned().collect()
    }
}

/// A tuple `(a_0, …, a_{r-1})` with `a_j ∈ A^{p-j, q-j}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WitnessTuple<F: Field> {
    pub r: usize,
    pub base: Bidegree,
    pub entries: Vec<Vec<F::Elem>>,
}

impl<F: Field> WitnessTuple<F> {
    /// Checks shapes and `∑_{i+j=l} (-1)^i d_i a_j = 0` for `l < r`.
    pub fn check(&self, a: &Multicomplex<F>) -> Result<()> {
        let len = self.r.max(1);
        if self.entries.len() != len {
            return Err(Error::InvalidWitness(format!(
                "{} entries for stage {}",
                self.entries.len(),
                self.r
            )));
        }
        for (j, e) in self.entries.iter().enumerate() {
            if e.len() != a.dim(Stack::entry_at(self.base, j)) {
                return Err(Error::InvalidWitness(format!("entry {j} has wrong length")));
            }
        }
        let v = Stack::join(&self.entries);
        let values = relation_matrix(a, self.r, self.base).mul_vec(&v);
        let mut start = 0;
        for l in 0..self.r {
            let len = a.dim(Stack::entry_at(self.base, l).d(0));
            if !vector::is_zero(a.field(), &values[start..start + len]) {
                return Err(Error::InvalidWitness(format!("relation l={l} fails")));
            }
            start += len;
        }
        Ok(())
    }
}

/// Stacked relations: row block `l` (at `(p-l, q-l+1)`) is
/// `∑_j (-1)^{l-j} d_{l-j} a_j`, for `l < r`.
pub fn relation_matrix<F: Field>(a: &Multicomplex<F>, r: usize, base: Bidegree) -> Matrix<F> {
    let f = a.field();
    let stack = Stack::new(a, base, r.max(1));
    let row_dims: Vec<usize> = (0..r).map(|l| a.dim(Stack::entry_at(base, l).d(0))).collect();
    let mut m = Matrix::zeros(f, row_dims.iter().sum(), stack.ambient());
    let mut r0 = 0;
    for (l, rd) in row_dims.iter().enumerate() {
        for j in 0..=l {
            let i = l - j;
            let block = a.d_block(i, Stack::entry_at(base, j));
            if !block.is_zero() {
                m.place(r0, stack.offset(j), &block.scale(&f.sign(i as i64)));
            }
        }
        r0 += rd;
    }
    m
}

/// `ZW_r^{p,q}(A)` as a subspace of the stacked space. `ZW_0 = A^{p,q}`.
#[derive(Clone, Debug)]
pub struct WitnessSpace<F: Field> {
    pub r: usize,
    pub stack: Stack,
    pub space: Subspace<F>,
}

impl<F: Field> WitnessSpace<F> {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }
    pub fn basis(&self) -> &[Vec<F::Elem>] {
        self.space.basis()
    }
    pub fn at(&self) -> Bidegree {
        self.stack.base
    }

    pub fn tuple(&self, v: &[F::Elem]) -> WitnessTuple<F> {
        WitnessTuple {
            r: self.r,
            base: self.stack.base,
            entries: self.stack.split(v),
        }
    }
}

pub fn witness_cycles<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> WitnessSpace<F> {
    let stack = Stack::new(a, at, r.max(1));
    let m = relation_matrix(a, r, at);
    let space = Subspace::span(a.field(), stack.ambient(), m.kernel());
    WitnessSpace { r, stack, space }
}

/// `BW_r^{p,q-1}(A)`, indexed by the bidegree `(p, q)` of the `ZW_r` it maps
/// to. Coordinates: `b` in the basis of `ZW_{r-1}^{p+r-1,q+r-2}`, then `a`
/// in the standard basis of `A^{p,q-1}`, then `c` in the basis of
/// `ZW_{r-1}^{p-1,q-1}`.
#[derive(Clone, Debug)]
pub struct BoundarySpace<F: Field> {
    pub r: usize,
    pub at: Bidegree,
    pub b: Option<WitnessSpace<F>>,
    pub a_dim: usize,
    pub c: Option<WitnessSpace<F>>,
}

impl<F: Field> BoundarySpace<F> {
    pub fn dim(&self) -> usize {
        self.b.as_ref().map_or(0, |s| s.dim()) + self.a_dim + self.c.as_ref().map_or(0, |s| s.dim())
    }

    /// `(b, a, c)` dimensions.
    pub fn parts(&self) -> (usize, usize, usize) {
        (
            self.b.as_ref().map_or(0, |s| s.dim()),
            self.a_dim,
            self.c.as_ref().map_or(0, |s| s.dim()),
        )
    }
}

pub fn witness_boundaries<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> BoundarySpace<F> {
    let (p, q) = (at.p, at.q);
    match r {
        0 => BoundarySpace {
            r,
            at,
            b: None,
            a_dim: 0,
            c: None,
        },
        1 => BoundarySpace {
            r,
            at,
            b: None,
            a_dim: a.dim(Bidegree::new(p, q - 1)),
            c: None,
        },
        _ => {
            let ri = r as i64;
            BoundarySpace {
                r,
                at,
                b: Some(witness_cycles(a, r - 1, Bidegree::new(p + ri - 1, q + ri - 2))),
                a_dim: a.dim(Bidegree::new(p, q - 1)),
                c: Some(witness_cycles(a, r - 1, Bidegree::new(p - 1, q - 1))),
            }
        }
    }
}

/// The map `w_r : BW_r^{p,q-1} → ZW_r^{p,q}`.
#[derive(Clone, Debug)]
pub struct WMap<F: Field> {
    pub source: BoundarySpace<F>,
    pub target: WitnessSpace<F>,
    /// Values as stacked vectors, one column per source coordinate.
    pub stacked: Matrix<F>,
    /// Values in the basis of the target.
    pub coords: Matrix<F>,
}

impl<F: Field> WMap<F> {
    pub fn kernel_dim(&self) -> usize {
        self.source.dim() - self.coords.rank()
    }
    pub fn image(&self) -> Subspace<F> {
        Subspace::span(
            self.stacked.field(),
            self.stacked.nrows(),
            self.stacked.column_space(),
        )
    }
}

/// `w_r` applied to `(b; a; c)` given as plain tuples.
pub fn w_apply<F: Field>(
    a: &Multicomplex<F>,
    r: usize,
    at: Bidegree,
    b: &[Vec<F::Elem>],
    x: &[F::Elem],
    c: &[Vec<F::Elem>],
) -> Vec<Vec<F::Elem>> {
    let f = a.field();
    let stack = Stack::new(a, at, r.max(1));
    let mut out: Vec<Vec<F::Elem>> = stack.dims.iter().map(|&d| vector::zeros(f, d)).collect();
    if r == 0 {
        return out;
    }
    let a_at = Bidegree::new(at.p, at.q - 1);
    let b_base = Bidegree::new(at.p + r as i64 - 1, at.q + r as i64 - 2);
    for (k, slot) in out.iter_mut().enumerate() {
        // d_k a
        let t = a.apply_d(k, a_at, x);
        vector::axpy(f, slot, &f.one(), &t);
        // (-1)^k ∑_{i=k+1}^{k+r-1} (-1)^i d_i b_{r+k-1-i}
        for i in k + 1..k + r {
            let j = r + k - 1 - i;
            let v = a.apply_d(i, Stack::entry_at(b_base, j), &b[j]);
            vector::axpy(f, slot, &f.sign((k + i) as i64), &v);
        }
        if k >= 1 {
            vector::axpy(f, slot, &f.one(), &c[k - 1]);
        }
    }
    out
}

pub fn w_map<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> WMap<F> {
    let f = a.field();
    let source = witness_boundaries(a, r, at);
    let target = witness_cycles(a, r, at);
    let (nb, na, nc) = source.parts();
    let amb = target.stack.ambient();
    let zero_tuple = |s: &Option<WitnessSpace<F>>| -> Vec<Vec<F::Elem>> {
        s.as_ref()
            .map(|w| w.stack.dims.iter().map(|&d| vector::zeros(f, d)).collect())
            .unwrap_or_default()
    };
    let (zb, zc) = (zero_tuple(&source.b), zero_tuple(&source.c));
    let za = vector::zeros(f, na);
    let mut columns = Vec::with_capacity(nb + na + nc);
    if r >= 1 {
        if let Some(bs) = &source.b {
            for v in bs.basis() {
                columns.push(Stack::join(&w_apply(a, r, at, &bs.stack.split(v), &za, &zc)));
            }
        }
        for s in 0..na {
            columns.push(Stack::join(&w_apply(a, r, at, &zb, &vector::unit(f, na, s), &zc)));
        }
        if let Some(cs) = &source.c {
            for v in cs.basis() {
                columns.push(Stack::join(&w_apply(a, r, at, &zb, &za, &cs.stack.split(v))));
            }
        }
    }
    let stacked = Matrix::from_columns(f, amb, &columns);
    let coord_cols: Vec<Vec<F::Elem>> = columns
        .iter()
        .map(|v| {
            target
                .space
                .coordinates(v)
                .expect("w_r lands in the witness cycles")
        })
        .collect();
    let coords = Matrix::from_columns(f, target.dim(), &coord_cols);
    WMap {
        source,
        target,
        stacked,
        coords,
    }
}

/// A page `E_r^{p,q}` as a subquotient of its ambient space: `A^{p,q}` for
/// the direct method, the stacked space of `ZW_r^{p,q}` for the witness one.
#[derive(Clone, Debug)]
pub struct Page<F: Field> {
    pub r: usize,
    pub at: Bidegree,
    pub method: Method,
    pub stack: Stack,
    pub quotient: Subquotient<F>,
    /// Direct method only: the witness cycles used to extend `a_0`.
    extensions: Option<WitnessSpace<F>>,
}

impl<F: Field> Page<F> {
    pub fn dim(&self) -> usize {
        self.quotient.dim()
    }
    pub fn representatives(&self) -> &[Vec<F::Elem>] {
        self.quotient.representatives()
    }
    pub fn cycles(&self) -> &Subspace<F> {
        self.quotient.cycles()
    }
    pub fn boundaries(&self) -> &Subspace<F> {
        self.quotient.boundaries()
    }
    pub fn project(&self, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
        self.quotient.project(v)
    }
}

/// Direct `Z_r^{p,q}`.
pub fn direct_cycles<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> Subspace<F> {
    let f = a.field();
    if r == 0 {
        return Subspace::full(f, a.dim(at));
    }
    let zw = witness_cycles(a, r, at);
    let heads = zw.basis().iter().map(|v| zw.stack.entry(v, 0).to_vec()).collect();
    Subspace::span(f, a.dim(at), heads)
}

/// Direct `B_r^{p,q}`: all `∑_{i=0}^{r-1} (-1)^i d_i b_{r-1-i}` with
/// `b_{r-1} ∈ A^{p,q-1}` free and `(b_0, …, b_{r-2}) ∈ ZW_{r-1}^{p+r-1,q+r-2}`.
pub fn direct_boundaries<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> Subspace<F> {
    let f = a.field();
    let n = a.dim(at);
    if r == 0 {
        return Subspace::zero(f, n);
    }
    let below = Bidegree::new(at.p, at.q - 1);
    let mut gens: Vec<Vec<F::Elem>> = a.d_block(0, below).columns();
    if r >= 2 {
        let ri = r as i64;
        let zw = witness_cycles(a, r - 1, Bidegree::new(at.p + ri - 1, at.q + ri - 2));
        for v in zw.basis() {
            let mut x = vector::zeros(f, n);
            for i in 1..r {
                let j = r - 1 - i;
                let y = a.apply_d(i, Stack::entry_at(zw.stack.base, j), zw.stack.entry(v, j));
                vector::axpy(f, &mut x, &f.sign(i as i64), &y);
            }
            gens.push(x);
        }
    }
    Subspace::span(f, n, gens)
}

pub fn compute_page<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree, method: Method) -> Result<Page<F>> {
    a.check_exact(at, r)?;
    match method {
        Method::Direct => {
            let z = direct_cycles(a, r, at);
            let b = direct_boundaries(a, r, at);
            Ok(Page {
                r,
                at,
                method,
                stack: Stack::new(a, at, 1),
                quotient: Subquotient::new(z, b)?,
                extensions: (r >= 1).then(|| witness_cycles(a, r, at)),
            })
        }
        Method::Witness => {
            let w = w_map(a, r, at);
            let image = w.image();
            let WMap { target, .. } = w;
            Ok(Page {
                r,
                at,
                method,
                stack: target.stack.clone(),
                quotient: Subquotient::new(target.space, image)?,
                extensions: None,
            })
        }
    }
}

/// Bidegree reached by the page-`r` differential from `at`.
pub fn differential_target(r: usize, at: Bidegree) -> Bidegree {
    Bidegree::new(at.p - r as i64, at.q + 1 - r as i64)
}

/// Image of a cycle under `Δ_r` / `δ_r`, in the target page's ambient space.
fn differential_value<F: Field>(a: &Multicomplex<F>, page: &Page<F>, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let f = a.field();
    let (r, at) = (page.r, page.at);
    if r == 0 {
        return Ok(a.apply_d(0, at, v));
    }
    let tuple: Vec<Vec<F::Elem>> = match page.method {
        Method::Witness => page.stack.split(v),
        Method::Direct => {
            let ext = page.extensions.as_ref().expect("direct page keeps its extensions");
            let heads: Vec<Vec<F::Elem>> =
                ext.basis().iter().map(|w| ext.stack.entry(w, 0).to_vec()).collect();
            let proj = Matrix::from_columns(f, a.dim(at), &heads);
            let c = linalg::solve(&proj, v)
                .solution()
                .ok_or_else(|| Error::IllDefined(format!("{at}: element is not an r-cycle")))?;
            let mut t = vector::zeros(f, ext.stack.ambient());
            for (ci, w) in c.iter().zip(ext.basis()) {
                vector::axpy(f, &mut t, ci, w);
            }
            ext.stack.split(&t)
        }
    };
    let target = differential_target(r, at);
    let comps = match page.method {
        Method::Direct => 1,
        Method::Witness => r,
    };
    let mut out = Vec::new();
    for k in 0..comps {
        let tk = Stack::entry_at(target, k);
        let mut acc = vector::zeros(f, a.dim(tk));
        for i in 1..=r {
            let j = r - i;
            let y = a.apply_d(i + k, Stack::entry_at(at, j), &tuple[j]);
            vector::axpy(f, &mut acc, &f.sign(i as i64), &y);
        }
        out.extend(acc);
    }
    Ok(out)
}

/// The page differential as a matrix between two computed pages.
#[derive(Clone, Debug)]
pub struct PageMap<F: Field> {
    pub source: Page<F>,
    pub target: Page<F>,
    pub matrix: Matrix<F>,
}

/// `E_r^{p,q} → E_r^{p-r,q+1-r}`, checking independence of representatives.
pub fn page_differential<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree, method: Method) -> Result<PageMap<F>> {
    let source = compute_page(a, r, at, method)?;
    let tb = differential_target(r, at);
    let target = compute_page(a, r, tb, method)?;
    let f = a.field();
    // Boundaries must go to boundaries; for the direct method so must the
    // ambiguity in the extension (tuples with a_0 = 0).
    let mut must_vanish: Vec<Vec<F::Elem>> = Vec::new();
    for bnd in source.boundaries().basis() {
        must_vanish.push(differential_value(a, &source, bnd)?);
    }
    if let (Method::Direct, Some(ext)) = (method, &source.extensions) {
        for w in ext.basis() {
            if vector::is_zero(f, ext.stack.entry(w, 0)) {
                let t = ext.stack.split(w);
                let mut acc = vector::zeros(f, a.dim(tb));
                for i in 1..=r {
                    let j = r - i;
                    let y = a.apply_d(i, Stack::entry_at(at, j), &t[j]);
                    vector::axpy(f, &mut acc, &f.sign(i as i64), &y);
                }
                must_vanish.push(acc);
            }
        }
    }
    for v in &must_vanish {
        if !target.boundaries().contains(v) {
            return Err(Error::IllDefined(format!("page {r} differential at {at}")));
        }
    }
    let mut cols = Vec::new();
    for rep in source.representatives() {
        let img = differential_value(a, &source, rep)?;
        cols.push(
            target
                .project(&img)
                .ok_or_else(|| Error::IllDefined(format!("page {r} differential leaves the cycles at {tb}")))?,
        );
    }
    let matrix = Matrix::from_columns(f, target.dim(), &cols);
    Ok(PageMap { source, target, matrix })
}

/// `E_r(f)` at `at`.
pub fn induced_page_map<F: Field>(f: &Morphism<F>, r: usize, at: Bidegree, method: Method) -> Result<PageMap<F>> {
    let (s, t) = (f.source(), f.target());
    let source = compute_page(s, r, at, method)?;
    let target = compute_page(t, r, at, method)?;
    let apply = |v: &[F::Elem]| -> Vec<F::Elem> {
        let parts = source.stack.split(v);
        let imgs: Vec<Vec<F::Elem>> = parts
            .iter()
            .enumerate()
            .map(|(j, x)| f.apply(Stack::entry_at(at, j), x))
            .collect();
        Stack::join(&imgs)
    };
    for bnd in source.boundaries().basis() {
        if !target.boundaries().contains(&apply(bnd)) {
            return Err(Error::IllDefined(format!("E_{r}(f) at {at}")));
        }
    }
    let mut cols = Vec::new();
    for rep in source.representatives() {
        cols.push(
            target
                .project(&apply(rep))
                .ok_or_else(|| Error::IllDefined(format!("E_{r}(f) at {at} leaves the cycles")))?,
        );
    }
    let matrix = Matrix::from_columns(f.field(), target.dim(), &cols);
    Ok(PageMap { source, target, matrix })
}

/// Comparison isomorphism from the witness page to the direct page at `at`
/// (a witness class `[(a_0, …)]` goes to `[a_0]`).
pub fn comparison<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> Result<Matrix<F>> {
    let w = compute_page(a, r, at, Method::Witness)?;
    let d = compute_page(a, r, at, Method::Direct)?;
    let mut cols = Vec::new();
    for rep in w.representatives() {
        let head = w.stack.entry(rep, 0);
        cols.push(d.project(head).ok_or_else(|| Error::IllDefined(format!("comparison at {at}")))?);
    }
    Ok(Matrix::from_columns(a.field(), d.dim(), &cols))
}

/// Bidegrees where page `r` can be computed exactly: the support (pages are
/// subquotients of `A^{p,q}`), minus whatever lies too close to a cut.
pub fn page_support<F: Field>(a: &Multicomplex<F>, r: usize) -> Vec<Bidegree> {
    a.support().filter(|b| a.is_exact_at(*b, r)).collect()
}

/// `dim E_r^{p,q}` on [`page_support`], zero entries dropped.
pub fn page_dims<F: Field>(a: &Multicomplex<F>, r: usize, method: Method, exec: Exec) -> Result<BTreeMap<Bidegree, usize>> {
    let bs = page_support(a, r);
    let dims = exec.try_map(&bs, |b| compute_page(a, r, *b, method).map(|p| p.dim()))?;
    Ok(bs.into_iter().zip(dims).filter(|(_, d)| *d > 0).collect())
}

/// `dim H(E_r, δ_r)` at `at`.
pub fn page_homology_dim<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree, method: Method) -> Result<usize> {
    let out = page_differential(a, r, at, method)?;
    let src = Bidegree::new(at.p + r as i64, at.q + r as i64 - 1);
    let inc = page_differential(a, r, src, method)?;
    let kernel = out.source.dim() - out.matrix.rank();
    Ok(kernel - inc.matrix.rank())
}

/// Outcome of a bidegree-wise check; `failure` names the first bad bidegree.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Check {
    pub ok: bool,
    pub failure: Option<Bidegree>,
}

impl Check {
    pub fn pass() -> Self {
        Check { ok: true, failure: None }
    }
    pub fn fail(at: Bidegree) -> Self {
        Check {
            ok: false,
            failure: Some(at),
        }
    }
    fn first(results: Vec<(Bidegree, bool)>) -> Self {
        results
            .into_iter()
            .find(|(_, ok)| !ok)
            .map_or(Check::pass(), |(b, _)| Check::fail(b))
    }
}

/// Bidegrees where a check on `f` at page `r` is meaningful and exact.
fn morphism_support<F: Field>(f: &Morphism<F>, r: usize) -> Vec<Bidegree> {
    let mut bs: Vec<Bidegree> = f.source().support().chain(f.target().support()).collect();
    bs.sort();
    bs.dedup();
    bs.retain(|b| f.source().is_exact_at(*b, r) && f.target().is_exact_at(*b, r));
    bs
}

/// Whether `E_{r+1}(f)` is bijective at every bidegree.
pub fn is_er_quasi_iso<F: Field>(f: &Morphism<F>, r: usize, exec: Exec) -> Result<Check> {
    let bs = morphism_support(f, r + 1);
    let res = exec.try_map(&bs, |b| {
        let m = induced_page_map(f, r + 1, *b, Method::Witness)?;
        let (rows, cols) = (m.matrix.nrows(), m.matrix.ncols());
        Ok::<_, Error>((*b, rows == cols && m.matrix.rank() == rows))
    })?;
    Ok(Check::first(res))
}

/// `f` surjective at `at`.
pub fn is_surjective_at<F: Field>(f: &Morphism<F>, at: Bidegree) -> bool {
    f.block(at).rank() == f.target().dim(at)
}

/// `ZW_r(f)` surjective at `at`.
pub fn zw_surjective_at<F: Field>(f: &Morphism<F>, r: usize, at: Bidegree) -> bool {
    let (s, t) = (f.source(), f.target());
    let zs = witness_cycles(s, r, at);
    let zt = witness_cycles(t, r, at);
    let imgs: Vec<Vec<F::Elem>> = zs
        .basis()
        .iter()
        .map(|v| {
            let parts = zs.stack.split(v);
            let imgs: Vec<Vec<F::Elem>> = parts
                .iter()
                .enumerate()
                .map(|(j, x)| f.apply(Stack::entry_at(at, j), x))
                .collect();
            Stack::join(&imgs)
        })
        .collect();
    Subspace::span(f.field(), zt.stack.ambient(), imgs).dim() == zt.dim()
}

/// `E_r(f)` surjective at `at`.
pub fn page_surjective_at<F: Field>(f: &Morphism<F>, r: usize, at: Bidegree) -> Result<bool> {
    let m = induced_page_map(f, r, at, Method::Witness)?;
    Ok(m.matrix.rank() == m.matrix.nrows())
}

/// Bidegrees relevant for surjectivity of `ZW_r(f)`: entries of a witness at
/// `at` sit at `at - (j, j)`, so `at` ranges over the target support shifted
/// up the diagonal.
pub fn witness_support<F: Field>(a: &Multicomplex<F>, r: usize) -> Vec<Bidegree> {
    let mut bs: Vec<Bidegree> = a
        .support()
        .flat_map(|b| (0..r.max(1) as i64).map(move |j| Bidegree::new(b.p + j, b.q + j)))
        .collect();
    bs.sort();
    bs.dedup();
    bs
}

pub fn zw_surjective<F: Field>(f: &Morphism<F>, r: usize, exec: Exec) -> Check {
    let mut bs = witness_support(f.target(), r);
    bs.retain(|b| f.target().is_exact_at(*b, r) && f.source().is_exact_at(*b, r));
    Check::first(exec.map(&bs, |b| (*b, zw_surjective_at(f, r, *b))))
}

pub fn is_surjective<F: Field>(f: &Morphism<F>) -> Check {
    let bs: Vec<Bidegree> = f.target().support().collect();
    Check::first(bs.into_iter().map(|b| (b, is_surjective_at(f, b))).collect())
}

pub fn page_surjective<F: Field>(f: &Morphism<F>, r: usize, exec: Exec) -> Result<Check> {
    let mut bs: Vec<Bidegree> = f.target().support().collect();
    bs.retain(|b| f.target().is_exact_at(*b, r) && f.source().is_exact_at(*b, r));
    let res = exec.try_map(&bs, |b| page_surjective_at(f, r, *b).map(|ok| (*b, ok)))?;
    Ok(Check::first(res))
}

/// `dim` of the pullback of `D_{r-1}: ZW_{r-1}^{p,q} → A^{p-r+1,q-r+2}` and
/// `d_0: A^{p-r+1,q-r+1} → A^{p-r+1,q-r+2}` for `r >= 2`; for `r = 1` the
/// pullback of `d_0: A^{p,q} → A^{p,q+1}` along `0`.
pub fn pullback_dim<F: Field>(a: &Multicomplex<F>, r: usize, at: Bidegree) -> usize {
    let f = a.field();
    assert!(r >= 1);
    if r == 1 {
        let d0 = a.d_block(0, at);
        return d0.ncols() - d0.rank();
    }
    let prev = witness_cycles(a, r - 1, at);
    let last = Stack::entry_at(at, r - 1);
    let meet = last.d(0);
    let mut cols: Vec<Vec<F::Elem>> = Vec::new();
    for v in prev.basis() {
        // D_{r-1} = ∑_{i=1}^{r-1} (-1)^{i+1} d_i a_{r-1-i}
        let mut acc = vector::zeros(f, a.dim(meet));
        for i in 1..r {
            let j = r - 1 - i;
            let y = a.apply_d(i, Stack::entry_at(at, j), prev.stack.entry(v, j));
            vector::axpy(f, &mut acc, &f.sign(i as i64 + 1), &y);
        }
        cols.push(acc);
    }
    let d0 = a.d_block(0, last);
    for c in d0.columns() {
        cols.push(vector::scale(f, &f.neg(&f.one()), &c));
    }
    let m = Matrix::from_columns(f, a.dim(meet), &cols);
    m.ncols() - m.rank()
}
