//! Representing objects of the witness functors: disks, `ZW_r`, `BW_r`, the
//! morphisms `ι_r` and the colimit `ZW_∞`.
//!
//! Everything is materialised on a window `p >= pmin`, i.e. as the quotient
//! by the subcomplex living strictly left of `pmin`. Inside the window the
//! result is exact, because nothing at `p < pmin` maps back to the right.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::bigraded::{Bidegree, BigradedModule};
use crate::constructions::{direct_sum_all, pushout};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vector, Matrix, Subspace};
use crate::multicomplex::{Bound, Morphism, Multicomplex};
use crate::spectral::{self, Stack, WitnessTuple};

/// `d_{l_0} d_{l_1} … d_{l_k}` applied to a generator (rightmost letter
/// first).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    pub letters: Vec<usize>,
    pub generator: usize,
}

impl Word {
    pub fn generator(g: usize) -> Self {
        Word {
            letters: Vec::new(),
            generator: g,
        }
    }

    pub fn prepend(&self, i: usize) -> Self {
        let mut letters = Vec::with_capacity(self.letters.len() + 1);
        letters.push(i);
        letters.extend_from_slice(&self.letters);
        Word {
            letters,
            generator: self.generator,
        }
    }

    /// Bidegree shift `(-∑ l, #letters - ∑ l)`.
    pub fn shift(&self) -> Bidegree {
        let s: i64 = self.letters.iter().map(|&l| l as i64).sum();
        Bidegree::new(-s, self.letters.len() as i64 - s)
    }

    /// `d_0^ε d_{i_1} … d_{i_k}` with every `i_j > 0`.
    pub fn is_normal(&self) -> bool {
        self.letters.iter().skip(1).all(|&l| l > 0)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.letters {
            write!(f, "d{l} ")?;
        }
        write!(f, "g{}", self.generator)
    }
}

/// A linear combination of words that should vanish.
#[derive(Clone, Debug)]
pub struct Relation<F: Field> {
    pub terms: Vec<(Word, F::Elem)>,
}

/// Generators at fixed bidegrees subject to the multicomplex relations and
/// the listed extra relations.
#[derive(Clone, Debug)]
pub struct Presentation<F: Field> {
    pub field: F,
    pub bound: Bound,
    pub generators: Vec<Bidegree>,
    pub relations: Vec<Relation<F>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Symbol {
    Gen(usize),
    D(usize, usize),
}

/// What a materialised object represents.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Disk,
    Zw,
    Bw,
    ZwInfinity,
    Presented,
}

/// A named element of a represented object.
#[derive(Clone, Debug)]
pub struct Generator<F: Field> {
    pub name: String,
    pub at: Bidegree,
    pub vector: Vec<F::Elem>,
}

/// A materialised representing object. Every basis vector carries a word on
/// the generators that evaluates to it, so morphisms out of the object are
/// determined by the images of the generators.
#[derive(Clone, Debug)]
pub struct Represented<F: Field> {
    pub kind: Kind,
    pub bound: Bound,
    pub r: usize,
    pub at: Bidegree,
    pub pmin: i64,
    pub object: Arc<Multicomplex<F>>,
    pub generators: Vec<Generator<F>>,
    pub words: BTreeMap<Bidegree, Vec<Word>>,
}

fn letter_limit(bound: Bound, pmax: i64, pmin: i64) -> usize {
    match bound {
        Bound::Finite(n) => n.saturating_sub(1),
        Bound::Infinite => (pmax - pmin).max(0) as usize,
    }
}

impl<F: Field> Presentation<F> {
    pub fn free(field: &F, bound: Bound, generators: Vec<Bidegree>) -> Self {
        Presentation {
            field: field.clone(),
            bound,
            generators,
            relations: Vec::new(),
        }
    }

    fn relation_at(&self, rel: &Relation<F>) -> Result<Option<Bidegree>> {
        let mut at = None;
        for (w, _) in &rel.terms {
            let b = self.generators[w.generator] + w.shift();
            match at {
                None => at = Some(b),
                Some(a) if a != b => {
                    return Err(Error::InvalidArgument(format!("relation mixes bidegrees {a} and {b}")))
                }
                _ => {}
            }
        }
        Ok(at)
    }

    /// Materialises the presented object on `p >= pmin`, column by column
    /// from the right; inside a column `q` increases. Each bidegree is the
    /// span of the generators there and of `d_i` applied to the basis of
    /// the bidegrees feeding it, modulo every relation landing there.
    pub fn materialize(&self, pmin: i64) -> Result<Represented<F>> {
        let f = &self.field;
        let mut extra: BTreeMap<Bidegree, Vec<&Relation<F>>> = BTreeMap::new();
        for rel in &self.relations {
            if let Some(b) = self.relation_at(rel)? {
                extra.entry(b).or_default().push(rel);
            }
        }
        let pmax = self.generators.iter().map(|g| g.p).max().unwrap_or(pmin).max(pmin);
        let top = letter_limit(self.bound, pmax, pmin);
        let mut dims: BTreeMap<Bidegree, usize> = BTreeMap::new();
        let mut words: BTreeMap<Bidegree, Vec<Word>> = BTreeMap::new();
        let mut blocks: BTreeMap<(usize, Bidegree), Matrix<F>> = BTreeMap::new();
        let mut handles: Vec<Option<Vec<F::Elem>>> = vec![None; self.generators.len()];
        let dim = |dims: &BTreeMap<Bidegree, usize>, b: Bidegree| dims.get(&b).copied().unwrap_or(0);

        for p in (pmin..=pmax).rev() {
            let mut todo: BTreeSet<i64> = BTreeSet::new();
            todo.extend(self.generators.iter().filter(|g| g.p == p).map(|g| g.q));
            todo.extend(extra.keys().filter(|b| b.p == p).map(|b| b.q));
            for i in 1..=top {
                for (b, _) in dims.range(Bidegree::new(p + i as i64, i64::MIN)..=Bidegree::new(p + i as i64, i64::MAX)) {
                    todo.insert(b.d(i).q);
                }
            }
            while let Some(q) = todo.pop_first() {
                let b = Bidegree::new(p, q);
                // Symbols and their words.
                let mut symbols = Vec::new();
                let mut sym_words = Vec::new();
                let mut offset = vec![0; top + 1];
                for (i, off) in offset.iter_mut().enumerate() {
                    *off = symbols.len();
                    let src = Bidegree::new(p + i as i64, q - 1 + i as i64);
                    if let Some(ws) = words.get(&src) {
                        for (e, w) in ws.iter().enumerate() {
                            symbols.push(Symbol::D(i, e));
                            sym_words.push(w.prepend(i));
                        }
                    }
                }
                let gen_col: BTreeMap<usize, usize> = self
                    .generators
                    .iter()
                    .enumerate()
                    .filter(|(_, g)| **g == b)
                    .map(|(g, _)| {
                        symbols.push(Symbol::Gen(g));
                        sym_words.push(Word::generator(g));
                        (g, symbols.len() - 1)
                    })
                    .collect();
                let nsym = symbols.len();
                if nsym == 0 {
                    continue;
                }
                let mut rels: Vec<Vec<F::Elem>> = Vec::new();
                // ∑_{i+j=l} (-1)^i d_i d_j e = 0 for each basis vector e.
                for l in 0..=2 * top {
                    let s = Bidegree::new(p + l as i64, q - 2 + l as i64);
                    for e in 0..dim(&dims, s) {
                        let mut v = vector::zeros(f, nsym);
                        for j in l.saturating_sub(top)..=l.min(top) {
                            let i = l - j;
                            let Some(block) = blocks.get(&(j, s)) else { continue };
                            let y = block.column(e);
                            let sign = f.sign(i as i64);
                            for (t, c) in y.iter().enumerate() {
                                if !f.is_zero(c) {
                                    let k = offset[i] + t;
                                    v[k] = f.add(&v[k], &f.mul(&sign, c));
                                }
                            }
                        }
                        if !vector::is_zero(f, &v) {
                            rels.push(v);
                        }
                    }
                }
                for rel in extra.get(&b).into_iter().flatten() {
                    let mut v = vector::zeros(f, nsym);
                    for (w, c) in &rel.terms {
                        if let Some((&first, rest)) = w.letters.split_first() {
                            if first > top {
                                continue;
                            }
                            let inner = Word {
                                letters: rest.to_vec(),
                                generator: w.generator,
                            };
                            let start = self.generators[w.generator];
                            let Some(h) = &handles[w.generator] else { continue };
                            let y = eval_letters(f, &blocks, &dims, start, h, &inner.letters);
                            for (t, yc) in y.iter().enumerate() {
                                let k = offset[first] + t;
                                v[k] = f.add(&v[k], &f.mul(c, yc));
                            }
                        } else {
                            let k = gen_col[&w.generator];
                            v[k] = f.add(&v[k], c);
                        }
                    }
                    if !vector::is_zero(f, &v) {
                        rels.push(v);
                    }
                }
                // Eliminate words that are not normal forms first.
                let mut order: Vec<usize> = (0..nsym).filter(|&k| !sym_words[k].is_normal()).collect();
                order.extend((0..nsym).filter(|&k| sym_words[k].is_normal()));
                let span = Subspace::span_with_order(f, nsym, rels, &order);
                let free = span.free_columns();
                let coords = |k: usize| -> Vec<F::Elem> {
                    let red = span.reduce(&vector::unit(f, nsym, k));
                    free.iter().map(|&c| red[c].clone()).collect()
                };
                for (i, &off) in offset.iter().enumerate() {
                    let src = Bidegree::new(p + i as i64, q - 1 + i as i64);
                    let n_src = dim(&dims, src);
                    if n_src == 0 {
                        continue;
                    }
                    let cols: Vec<Vec<F::Elem>> = (0..n_src).map(|e| coords(off + e)).collect();
                    blocks.insert((i, src), Matrix::from_columns(f, free.len(), &cols));
                }
                for (&g, &k) in &gen_col {
                    handles[g] = Some(coords(k));
                }
                if !free.is_empty() {
                    dims.insert(b, free.len());
                    words.insert(b, free.iter().map(|&c| sym_words[c].clone()).collect());
                    todo.insert(q + 1);
                }
            }
        }

        let module = BigradedModule::from_dims(dims.iter().map(|(b, d)| (*b, *d)));
        let mut object = Multicomplex::new(f, self.bound, module);
        for ((i, src), block) in blocks {
            if !block.is_zero() {
                object.set_d(i, src, block)?;
            }
        }
        object.set_horizon(self.horizon(&dims, pmin));
        let generators = self
            .generators
            .iter()
            .enumerate()
            .map(|(g, at)| Generator {
                name: format!("g{g}"),
                at: *at,
                vector: handles[g].clone().unwrap_or_else(|| vector::zeros(f, dim(&dims, *at))),
            })
            .collect();
        Ok(Represented {
            kind: Kind::Presented,
            bound: self.bound,
            r: 0,
            at: self.generators.first().copied().unwrap_or_default(),
            pmin,
            object: Arc::new(object),
            generators,
            words,
        })
    }

    /// For finite `n`, nothing reaches left of `pmin` once the `n - 1`
    /// columns starting at `pmin` are empty, so the object is complete.
    fn horizon(&self, dims: &BTreeMap<Bidegree, usize>, pmin: i64) -> Option<i64> {
        if dims.is_empty() {
            return None;
        }
        if self.generators.iter().any(|g| g.p < pmin) {
            return Some(pmin);
        }
        match self.bound {
            Bound::Finite(n) => {
                let reach = n.saturating_sub(1) as i64;
                let near = dims.keys().any(|b| b.p < pmin + reach);
                near.then_some(pmin)
            }
            Bound::Infinite => Some(pmin),
        }
    }
}

fn eval_letters<F: Field>(
    f: &F,
    blocks: &BTreeMap<(usize, Bidegree), Matrix<F>>,
    dims: &BTreeMap<Bidegree, usize>,
    start: Bidegree,
    v: &[F::Elem],
    letters: &[usize],
) -> Vec<F::Elem> {
    let mut at = start;
    let mut cur = v.to_vec();
    for &i in letters.iter().rev() {
        let to = at.d(i);
        cur = match blocks.get(&(i, at)) {
            Some(m) => m.mul_vec(&cur),
            None => vector::zeros(f, dims.get(&to).copied().unwrap_or(0)),
        };
        at = to;
    }
    cur
}

/// Applies `word` to `v ∈ A^{start}` inside `a`.
pub fn evaluate<F: Field>(a: &Multicomplex<F>, start: Bidegree, v: &[F::Elem], letters: &[usize]) -> Vec<F::Elem> {
    let mut at = start;
    let mut cur = v.to_vec();
    for &i in letters.iter().rev() {
        cur = a.apply_d(i, at, &cur);
        at = at.d(i);
    }
    cur
}

impl<F: Field> Represented<F> {
    pub fn field(&self) -> &F {
        self.object.field()
    }

    pub fn generator(&self, name: &str) -> Option<&Generator<F>> {
        self.generators.iter().find(|g| g.name == name)
    }

    /// The unique morphism sending generator `k` to `images[k]`, built by
    /// evaluating the basis words in `target`.
    pub fn morphism_to(&self, target: &Arc<Multicomplex<F>>, images: &[Vec<F::Elem>]) -> Result<Morphism<F>> {
        if images.len() != self.generators.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} images for {} generators",
                images.len(),
                self.generators.len()
            )));
        }
        for (g, img) in self.generators.iter().zip(images) {
            if img.len() != target.dim(g.at) {
                return Err(Error::ShapeMismatch(format!("image of {} has wrong length", g.name)));
            }
        }
        let mut blocks = BTreeMap::new();
        for (b, ws) in &self.words {
            let cols: Vec<Vec<F::Elem>> = ws
                .iter()
                .map(|w| evaluate(target, self.generators[w.generator].at, &images[w.generator], &w.letters))
                .collect();
            blocks.insert(*b, Matrix::from_columns(self.field(), target.dim(*b), &cols));
        }
        let m = Morphism::from_blocks(self.object.clone(), target.clone(), blocks)?;
        Morphism::checked(m.source().clone(), m.target().clone(), m.map().clone())
    }

    /// Images of the generators under `m`.
    pub fn evaluate_generators(&self, m: &Morphism<F>) -> Vec<Vec<F::Elem>> {
        self.generators.iter().map(|g| m.apply(g.at, &g.vector)).collect()
    }

    fn renamed(mut self, kind: Kind, r: usize, at: Bidegree, names: &[String]) -> Self {
        for (g, name) in self.generators.iter_mut().zip(names) {
            g.name = name.clone();
        }
        self.kind = kind;
        self.r = r;
        self.at = at;
        self
    }
}

/// `𝔻ⁿ(p,q)` on the window `p >= pmin`.
pub fn disk<F: Field>(field: &F, bound: Bound, at: Bidegree, pmin: i64) -> Result<Represented<F>> {
    if let Bound::Finite(n) = bound {
        if n < 1 {
            return Err(Error::InvalidArgument("bound must be at least 1".into()));
        }
    }
    let d = Presentation::free(field, bound, vec![at]).materialize(pmin)?;
    Ok(d.renamed(Kind::Disk, 0, at, &["x".to_string()]))
}

fn a_names(r: usize) -> Vec<String> {
    (0..r.max(1)).map(|j| format!("a{j}")).collect()
}

/// Collects the words of a pushout from those of its two legs.
fn pushout_words<F: Field>(
    object: &Multicomplex<F>,
    left: &Morphism<F>,
    right: &Morphism<F>,
    lw: &BTreeMap<Bidegree, Vec<Word>>,
    rw: &BTreeMap<Bidegree, Vec<Word>>,
    right_gen: usize,
) -> BTreeMap<Bidegree, Vec<Word>> {
    let f = object.field();
    let mut out = BTreeMap::new();
    for b in object.support() {
        let n = object.dim(b);
        let mut found: Vec<Option<Word>> = vec![None; n];
        let candidates = lw
            .get(&b)
            .into_iter()
            .flatten()
            .enumerate()
            .map(|(k, w)| (left.block(b).column(k), w.clone()))
            .chain(rw.get(&b).into_iter().flatten().enumerate().map(|(k, w)| {
                let mut w = w.clone();
                w.generator = right_gen;
                (right.block(b).column(k), w)
            }));
        for (col, w) in candidates {
            let nz: Vec<usize> = (0..n).filter(|&t| !f.is_zero(&col[t])).collect();
            if nz.len() == 1 && f.is_one(&col[nz[0]]) && found[nz[0]].is_none() {
                found[nz[0]] = Some(w);
            }
        }
        out.insert(
            b,
            found
                .into_iter()
                .map(|w| w.expect("pushout basis vectors come from the legs"))
                .collect(),
        );
    }
    out
}

/// `ZWⁿ_r(p,q)` by the recursive pushouts, on the window `p >= pmin`.
pub fn zw_object<F: Field>(field: &F, bound: Bound, r: usize, at: Bidegree, pmin: i64) -> Result<Represented<F>> {
    let mut cur = disk(field, bound, at, pmin)?;
    for s in 1..=r {
        let si = s as i64;
        // New generator a_{s-1} and the attaching disk x.
        let a_at = Bidegree::new(at.p - si + 1, at.q - si + 1);
        let new = disk(field, bound, a_at, pmin)?;
        let x = disk(field, bound, a_at.d(0), pmin)?;
        let d0_star = x.morphism_to(&new.object, &[new.object.apply_d(0, a_at, &new.generators[0].vector)])?;
        let down = if s == 1 {
            Morphism::zero(x.object.clone(), Arc::new(Multicomplex::zero(field, bound)))?
        } else {
            // D_{s-1}^*(x) = ∑_{i=1}^{s-1} (-1)^{i+1} d_i a_{s-1-i}
            let mut img = vector::zeros(field, cur.object.dim(a_at.d(0)));
            for i in 1..s {
                let g = &cur.generators[s - 1 - i];
                let v = cur.object.apply_d(i, g.at, &g.vector);
                vector::axpy(field, &mut img, &field.sign(i as i64 + 1), &v);
            }
            x.morphism_to(&cur.object, &[img])?
        };
        let po = pushout(&down, &d0_star)?;
        let (lw, rw) = if s == 1 { (BTreeMap::new(), &new.words) } else { (cur.words.clone(), &new.words) };
        let words = pushout_words(&po.object, &po.left, &po.right, &lw, rw, s - 1);
        let mut generators: Vec<Generator<F>> = if s == 1 {
            Vec::new()
        } else {
            cur.generators
                .iter()
                .map(|g| Generator {
                    name: g.name.clone(),
                    at: g.at,
                    vector: po.left.apply(g.at, &g.vector),
                })
                .collect()
        };
        generators.push(Generator {
            name: format!("a{}", s - 1),
            at: a_at,
            vector: po.right.apply(a_at, &new.generators[0].vector),
        });
        cur = Represented {
            kind: Kind::Zw,
            bound,
            r: s,
            at,
            pmin,
            object: po.object,
            generators,
            words,
        };
    }
    if r == 0 {
        cur = cur.renamed(Kind::Zw, 0, at, &a_names(0));
    }
    Ok(cur)
}

/// `ZWⁿ_r(p,q)` directly from generators `a_j` and the stacked relations,
/// as an independent cross-check of the pushout construction.
pub fn zw_presented<F: Field>(field: &F, bound: Bound, r: usize, at: Bidegree, pmin: i64) -> Result<Represented<F>> {
    let len = r.max(1);
    let generators = (0..len).map(|j| Stack::entry_at(at, j)).collect();
    let relations = (0..r)
        .map(|l| Relation {
            terms: (0..=l)
                .filter(|&j| bound.allows(l - j))
                .map(|j| {
                    (
                        Word {
                            letters: vec![l - j],
                            generator: j,
                        },
                        field.sign((l - j) as i64),
                    )
                })
                .collect(),
        })
        .collect();
    let pres = Presentation {
        field: field.clone(),
        bound,
        generators,
        relations,
    };
    Ok(pres.materialize(pmin)?.renamed(Kind::Zw, r, at, &a_names(r)))
}

/// `BWⁿ_r(p,q-1)` as a direct sum, indexed by the `(p,q)` of the `ZW_r` it
/// receives `ι_r` from. Generators: `b_j`, then `a`, then `c_j`.
pub fn bw_object<F: Field>(field: &F, bound: Bound, r: usize, at: Bidegree, pmin: i64) -> Result<Represented<F>> {
    let (p, q) = (at.p, at.q);
    let a_at = Bidegree::new(p, q - 1);
    let mut parts: Vec<(char, Represented<F>)> = Vec::new();
    match r {
        0 => {}
        1 => parts.push(('a', disk(field, bound, a_at, pmin)?)),
        _ => {
            let ri = r as i64;
            parts.push(('b', zw_object(field, bound, r - 1, Bidegree::new(p + ri - 1, q + ri - 2), pmin)?));
            parts.push(('a', disk(field, bound, a_at, pmin)?));
            parts.push(('c', zw_object(field, bound, r - 1, Bidegree::new(p - 1, q - 1), pmin)?));
        }
    }
    if parts.is_empty() {
        return Ok(Represented {
            kind: Kind::Bw,
            bound,
            r,
            at,
            pmin,
            object: Arc::new(Multicomplex::zero(field, bound)),
            generators: Vec::new(),
            words: BTreeMap::new(),
        });
    }
    let objs: Vec<_> = parts.iter().map(|(_, o)| o.object.clone()).collect();
    let sum = direct_sum_all(&objs)?;
    let mut generators = Vec::new();
    let mut gen_offset = Vec::new();
    for (k, (tag, part)) in parts.iter().enumerate() {
        gen_offset.push(generators.len());
        for (j, g) in part.generators.iter().enumerate() {
            let name = if *tag == 'a' { "a".to_string() } else { format!("{tag}{j}") };
            generators.push(Generator {
                name,
                at: g.at,
                vector: sum.inclusions[k].apply(g.at, &g.vector),
            });
        }
    }
    let mut words: BTreeMap<Bidegree, Vec<Word>> = BTreeMap::new();
    for b in sum.object.support() {
        let mut ws = Vec::new();
        for (k, (_, part)) in parts.iter().enumerate() {
            for w in part.words.get(&b).into_iter().flatten() {
                ws.push(Word {
                    letters: w.letters.clone(),
                    generator: w.generator + gen_offset[k],
                });
            }
        }
        words.insert(b, ws);
    }
    Ok(Represented {
        kind: Kind::Bw,
        bound,
        r,
        at,
        pmin,
        object: sum.object,
        generators,
        words,
    })
}

/// The tautological element of `BW_r^{p,q-1}` in `ℬW_r(p,q-1)` itself.
fn tautological_boundary<F: Field>(bw: &Represented<F>) -> (Vec<Vec<F::Elem>>, Vec<F::Elem>, Vec<Vec<F::Elem>>) {
    let pick = |prefix: char| -> Vec<Vec<F::Elem>> {
        bw.generators
            .iter()
            .filter(|g| g.name.starts_with(prefix) && g.name.len() > 1)
            .map(|g| g.vector.clone())
            .collect()
    };
    let a = bw
        .generator("a")
        .map(|g| g.vector.clone())
        .unwrap_or_else(|| vector::zeros(bw.field(), bw.object.dim(Bidegree::new(bw.at.p, bw.at.q - 1))));
    (pick('b'), a, pick('c'))
}

/// `ι_r: ZWⁿ_r(p,q) → ℬWⁿ_r(p,q-1)`, the image of the tautological boundary
/// witness under `w_r`.
pub fn iota<F: Field>(zw: &Represented<F>, bw: &Represented<F>) -> Result<Morphism<F>> {
    if zw.kind != Kind::Zw || bw.kind != Kind::Bw || zw.r != bw.r || zw.at != bw.at {
        return Err(Error::InvalidArgument("iota needs matching ZW_r(p,q) and BW_r(p,q-1)".into()));
    }
    let (b, a, c) = tautological_boundary(bw);
    let entries = spectral::w_apply(&bw.object, zw.r, zw.at, &b, &a, &c);
    let witness = WitnessTuple {
        r: zw.r,
        base: zw.at,
        entries,
    };
    morphism_from_witness(zw, &bw.object, &witness)
}

/// The Yoneda correspondence: the morphism `ZW_r(p,q) → A` with
/// `a_j ↦ witness.entries[j]`.
pub fn morphism_from_witness<F: Field>(
    zw: &Represented<F>,
    target: &Arc<Multicomplex<F>>,
    witness: &WitnessTuple<F>,
) -> Result<Morphism<F>> {
    if !matches!(zw.kind, Kind::Zw | Kind::Disk) || witness.r != zw.r || witness.base != zw.at {
        return Err(Error::InvalidWitness(format!(
            "stage {} at {} does not match the object",
            witness.r, witness.base
        )));
    }
    witness.check(target)?;
    if let Some(lo) = target.module().bounds().map(|b| b.0) {
        if lo < zw.pmin && zw.object.horizon().is_some() {
            return Err(Error::InvalidArgument(format!(
                "target reaches p = {lo}, left of the window pmin = {}",
                zw.pmin
            )));
        }
    }
    zw.morphism_to(target, &witness.entries)
        .map_err(|e| Error::InvalidWitness(e.to_string()))
}

/// The witness carried by a morphism out of `ZW_r(p,q)`.
pub fn witness_of<F: Field>(zw: &Represented<F>, m: &Morphism<F>) -> WitnessTuple<F> {
    WitnessTuple {
        r: zw.r,
        base: zw.at,
        entries: zw.evaluate_generators(m),
    }
}

/// Section and retraction exhibiting a summand of `ℬW_r` as a retract.
#[derive(Clone, Debug)]
pub struct Retract<F: Field> {
    pub section: Morphism<F>,
    pub retraction: Morphism<F>,
}

/// `ZW_0(p,q-1)` (`part = 'a'`, `r >= 1`) or `ZW_{r-1}(p-1,q-1)`
/// (`part = 'c'`, `r >= 2`) as a retract of `ℬW_r(p,q-1)`.
pub fn bw_retract<F: Field>(bw: &Represented<F>, part: char) -> Result<(Represented<F>, Retract<F>)> {
    let (p, q) = (bw.at.p, bw.at.q);
    let f = bw.field();
    let piece = match (part, bw.r) {
        ('a', r) if r >= 1 => disk(f, bw.bound, Bidegree::new(p, q - 1), bw.pmin)?.renamed(Kind::Zw, 0, Bidegree::new(p, q - 1), &a_names(0)),
        ('c', r) if r >= 2 => zw_object(f, bw.bound, r - 1, Bidegree::new(p - 1, q - 1), bw.pmin)?,
        _ => return Err(Error::InvalidArgument(format!("no retract `{part}` at stage {}", bw.r))),
    };
    // Section: generators of the piece go to the matching generators of BW.
    let images: Vec<Vec<F::Elem>> = if part == 'a' {
        vec![bw.generator("a").expect("BW_r has a disk").vector.clone()]
    } else {
        (0..bw.r - 1)
            .map(|j| bw.generator(&format!("c{j}")).expect("BW_r has c").vector.clone())
            .collect()
    };
    let section = piece.morphism_to(&bw.object, &images)?;
    // Retraction: the piece's generators map to themselves, the others to 0.
    let rimages: Vec<Vec<F::Elem>> = bw
        .generators
        .iter()
        .map(|g| {
            let own = match part {
                'a' => (g.name == "a").then(|| piece.generators[0].vector.clone()),
                _ => g
                    .name
                    .strip_prefix('c')
                    .and_then(|j| j.parse::<usize>().ok())
                    .map(|j| piece.generators[j].vector.clone()),
            };
            own.unwrap_or_else(|| vector::zeros(f, piece.object.dim(g.at)))
        })
        .collect();
    let retraction = bw.morphism_to(&piece.object, &rimages)?;
    Ok((piece, Retract { section, retraction }))
}

/// `ZWⁿ_∞(p,q)` on the window, as the stable value of `ZW_s(p,q)`, with the
/// projection onto `𝕜^{p,q}` sending `a_0` to 1.
pub fn zw_infinity<F: Field>(
    field: &F,
    bound: Bound,
    at: Bidegree,
    pmin: i64,
    s_max: usize,
) -> Result<(Represented<F>, Morphism<F>)> {
    let mut prev = zw_object(field, bound, 0, at, pmin)?;
    for s in 1..=s_max {
        let next = zw_object(field, bound, s, at, pmin)?;
        if same_content(&prev.object, &next.object) {
            let mut obj = next;
            obj.kind = Kind::ZwInfinity;
            let point = Arc::new(Multicomplex::point(field, bound, at));
            let images: Vec<Vec<F::Elem>> = obj
                .generators
                .iter()
                .enumerate()
                .map(|(j, g)| {
                    if j == 0 {
                        vec![field.one()]
                    } else {
                        vector::zeros(field, point.dim(g.at))
                    }
                })
                .collect();
            let proj = obj.morphism_to(&point, &images)?;
            return Ok((obj, proj));
        }
        prev = next;
    }
    Err(Error::NotStabilized { s_max })
}

fn same_content<F: Field>(a: &Multicomplex<F>, b: &Multicomplex<F>) -> bool {
    a.module() == b.module()
        && (0..a.num_maps().max(b.num_maps())).all(|i| a.support().all(|x| a.d_block(i, x) == b.d_block(i, x)))
}

/// Smallest `pmin` at which page `r` queries at `at` are exact.
pub fn window_for(at: Bidegree, r: usize) -> i64 {
    at.p - 2 * r as i64 - 1
}
