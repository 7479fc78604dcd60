//! The dg algebra `𝒞_n` of higher structure maps and the functors it
//! induces: restriction and extension of scalars, and the half-plane
//! truncations.
//!
//! Elements are linear combinations of words `d_{i_1} … d_{i_k}` with every
//! `i_j >= 1`. For finite `n` they are reduced modulo the ideal `I_n`
//! generated by `d_k` and `S_k` for `k >= n`; the reduction is exact linear
//! algebra in each (weight, length) component, with the pivot order fixed so
//! the remainder is canonical.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::bigraded::Bidegree;
use crate::constructions::{quotient, Subcomplex};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::linalg::{vector, Subspace};
use crate::multicomplex::{Bound, Morphism, Multicomplex};

pub type Word = Vec<usize>;

#[derive(Clone, Debug)]
pub struct CnElement<F: Field> {
    field: F,
    n: Bound,
    terms: BTreeMap<Word, F::Elem>,
}

impl<F: Field> PartialEq for CnElement<F> {
    fn eq(&self, other: &Self) -> bool {
        self.n == other.n && self.terms == other.terms
    }
}

/// `(-∑ i_j, k - ∑ i_j)`.
pub fn word_bidegree(w: &[usize]) -> Bidegree {
    let s: i64 = w.iter().map(|&i| i as i64).sum();
    Bidegree::new(-s, w.len() as i64 - s)
}

pub fn weight(w: &[usize]) -> usize {
    w.iter().sum()
}

/// `(-1)^{q-degree}`, the sign for moving `δ_0` (or `d_0`) past `w`.
fn koszul<F: Field>(f: &F, w: &[usize]) -> F::Elem {
    f.sign(w.iter().map(|&i| i as i64 + 1).sum())
}

/// All words with letters in `1..=max_letter`, `len` letters and total
/// weight `w`, in lexicographic order.
pub fn words_of(w: usize, len: usize, max_letter: usize) -> Vec<Word> {
    fn go(w: usize, len: usize, m: usize, cur: &mut Word, out: &mut Vec<Word>) {
        if len == 0 {
            if w == 0 {
                out.push(cur.clone());
            }
            return;
        }
        // remaining letters each need at least 1
        for i in 1..=m.min(w.saturating_sub(len - 1)) {
            cur.push(i);
            go(w - i, len - 1, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(w, len, max_letter, &mut Vec::new(), &mut out);
    out
}

/// Every word of weight at most `max_weight` (the empty word included).
pub fn all_words(max_weight: usize) -> Vec<Word> {
    let mut out = Vec::new();
    for w in 0..=max_weight {
        for len in 0..=w {
            out.extend(words_of(w, len, w.max(1)));
        }
    }
    out
}

impl<F: Field> CnElement<F> {
    pub fn zero(field: &F, n: Bound) -> Self {
        CnElement {
            field: field.clone(),
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(field: &F, n: Bound) -> Self {
        Self::word(field, n, Vec::new())
    }

    pub fn letter(field: &F, n: Bound, i: usize) -> Self {
        Self::word(field, n, vec![i])
    }

    /// A single word, reduced into `𝒞_n`.
    pub fn word(field: &F, n: Bound, w: Word) -> Self {
        Self::from_terms(field, n, [(w, field.one())])
    }

    pub fn from_terms<I: IntoIterator<Item = (Word, F::Elem)>>(field: &F, n: Bound, terms: I) -> Self {
        let mut x = Self::zero(field, n);
        for (w, c) in terms {
            assert!(w.iter().all(|&i| i >= 1), "letters of 𝒞_n start at d_1");
            x.add_term(w, &c);
        }
        x.normalized()
    }

    fn add_term(&mut self, w: Word, c: &F::Elem) {
        let f = &self.field;
        let sum = f.add(&self.coefficient(&w), c);
        if f.is_zero(&sum) {
            self.terms.remove(&w);
        } else {
            self.terms.insert(w, sum);
        }
    }

    pub fn field(&self) -> &F {
        &self.field
    }
    pub fn bound(&self) -> Bound {
        self.n
    }
    pub fn terms(&self) -> &BTreeMap<Word, F::Elem> {
        &self.terms
    }
    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coefficient(&self, w: &[usize]) -> F::Elem {
        self.terms.get(w).cloned().unwrap_or_else(|| self.field.zero())
    }

    /// The common bidegree of all terms, if there is one.
    pub fn bidegree(&self) -> Option<Bidegree> {
        let mut it = self.terms.keys().map(|w| word_bidegree(w));
        let first = it.next()?;
        it.all(|b| b == first).then_some(first)
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (w, c) in &other.terms {
            out.add_term(w.clone(), c);
        }
        out
    }

    pub fn scale(&self, c: &F::Elem) -> Self {
        let mut out = Self::zero(&self.field, self.n);
        for (w, x) in &self.terms {
            out.add_term(w.clone(), &self.field.mul(c, x));
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&self.field.neg(&self.field.one())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let f = &self.field;
        let mut out = Self::zero(f, self.n);
        for (u, a) in &self.terms {
            for (v, b) in &other.terms {
                let mut w = u.clone();
                w.extend_from_slice(v);
                out.add_term(w, &f.mul(a, b));
            }
        }
        out.normalized()
    }

    /// The same element viewed in `𝒞_∞` (no reduction).
    pub fn lift(&self) -> Self {
        CnElement {
            field: self.field.clone(),
            n: Bound::Infinite,
            terms: self.terms.clone(),
        }
    }

    fn normalized(mut self) -> Self {
        if let Bound::Finite(n) = self.n {
            self.terms = reduce_mod_ideal(&self.field, n, &self.terms);
        }
        self
    }
}

/// `S_k = ∑_{i+j=k, i,j>=1} (-1)^{i+1} d_i d_j`; `S_1 = 0`.
pub fn s_element<F: Field>(field: &F, n: Bound, k: usize) -> CnElement<F> {
    let terms = (1..k).map(|i| (vec![i, k - i], field.sign(i as i64 + 1)));
    CnElement::from_terms(field, n, terms)
}

/// The derivation with `δ_0(d_i) = S_i` and
/// `δ_0(uv) = δ_0(u) v + (-1)^{q(u)} u δ_0(v)`.
pub fn delta0<F: Field>(x: &CnElement<F>) -> CnElement<F> {
    let f = x.field();
    let mut out = CnElement::zero(f, Bound::Infinite);
    for (w, c) in x.terms() {
        for pos in 0..w.len() {
            let sign = f.mul(c, &koszul(f, &w[..pos]));
            let i = w[pos];
            for a in 1..i {
                let mut nw = w[..pos].to_vec();
                nw.push(a);
                nw.push(i - a);
                nw.extend_from_slice(&w[pos + 1..]);
                out.add_term(nw, &f.mul(&sign, &f.sign(a as i64 + 1)));
            }
        }
    }
    out.n = x.bound();
    out.normalized()
}

/// `h(d_1 d_{i_2} d_{i_3} …) = d_{i_2+1} d_{i_3} …`, zero on every other
/// word (and on `1`). Defined on `𝒞_∞`.
pub fn contracting_h<F: Field>(x: &CnElement<F>) -> CnElement<F> {
    let f = x.field();
    let mut out = CnElement::zero(f, Bound::Infinite);
    for (w, c) in x.terms() {
        if w.len() > 1 && w[0] == 1 {
            let mut nw = vec![w[1] + 1];
            nw.extend_from_slice(&w[2..]);
            out.add_term(nw, c);
        }
    }
    out
}

/// `Φ_{l,n}: 𝒞_l → 𝒞_n` for `n <= l`.
pub fn phi_quotient<F: Field>(x: &CnElement<F>, n: Bound) -> Result<CnElement<F>> {
    if n > x.bound() {
        return Err(Error::BoundMismatch(format!("Φ needs n = {n} <= l = {}", x.bound())));
    }
    Ok(CnElement {
        field: x.field().clone(),
        n,
        terms: x.terms().clone(),
    }
    .normalized())
}

/// `I_n` in the component of words with the given weight and length,
/// spanned by `u g v` for `g ∈ {d_k, S_k : k >= n}`; pivots are taken on
/// the lexicographically largest words first.
fn ideal_component<F: Field>(f: &F, n: usize, w: usize, len: usize, words: &[Word]) -> Subspace<F> {
    let index: BTreeMap<&Word, usize> = words.iter().enumerate().map(|(k, w)| (w, k)).collect();
    let mut gens = Vec::new();
    // Words containing some d_k with k >= n.
    for (k, word) in words.iter().enumerate() {
        if word.iter().any(|&i| i >= n) {
            gens.push(vector::unit(f, words.len(), k));
        }
    }
    // u S_k v with only small letters in the S_k part.
    if len >= 2 {
        let small = n.saturating_sub(1);
        for k in n..=w {
            for ulen in 0..=len - 2 {
                let vlen = len - 2 - ulen;
                for uw in 0..=w - k {
                    let us = words_of(uw, ulen, small.max(1));
                    let vs = words_of(w - k - uw, vlen, small.max(1));
                    for u in &us {
                        for v in &vs {
                            let mut vec = vector::zeros(f, words.len());
                            let mut any = false;
                            for i in 1..k {
                                let mut word = u.clone();
                                word.push(i);
                                word.push(k - i);
                                word.extend_from_slice(v);
                                if let Some(&col) = index.get(&word) {
                                    vec[col] = f.add(&vec[col], &f.sign(i as i64 + 1));
                                    any = true;
                                }
                            }
                            if any {
                                gens.push(vec);
                            }
                        }
                    }
                }
            }
        }
    }
    let order: Vec<usize> = (0..words.len()).rev().collect();
    Subspace::span_with_order(f, words.len(), gens, &order)
}

fn reduce_mod_ideal<F: Field>(f: &F, n: usize, terms: &BTreeMap<Word, F::Elem>) -> BTreeMap<Word, F::Elem> {
    let mut by_component: BTreeMap<(usize, usize), Vec<(&Word, &F::Elem)>> = BTreeMap::new();
    for (w, c) in terms {
        by_component.entry((weight(w), w.len())).or_default().push((w, c));
    }
    let mut out = BTreeMap::new();
    for ((w, len), ts) in by_component {
        if len == 0 {
            for (word, c) in ts {
                out.insert(word.clone(), c.clone());
            }
            continue;
        }
        let words = words_of(w, len, w.max(1));
        let ideal = ideal_component(f, n, w, len, &words);
        let mut v = vector::zeros(f, words.len());
        for (word, c) in ts {
            let k = words.binary_search(word).expect("component lists every word");
            v[k] = f.add(&v[k], c);
        }
        for (k, c) in ideal.reduce(&v).into_iter().enumerate() {
            if !f.is_zero(&c) {
                out.insert(words[k].clone(), c);
            }
        }
    }
    out
}

/// `x · v` for `v ∈ M^{at}`, with `x` homogeneous: each word acts by
/// composing the structure maps of `M`.
pub fn act<F: Field>(x: &CnElement<F>, m: &Multicomplex<F>, at: Bidegree, v: &[F::Elem]) -> Result<Vec<F::Elem>> {
    let f = m.field();
    let shift = match x.bidegree() {
        Some(b) => b,
        None if x.is_zero() => Bidegree::default(),
        None => return Err(Error::InvalidArgument("action of an inhomogeneous element".into())),
    };
    let to = at + shift;
    let mut out = vector::zeros(f, m.dim(to));
    for (w, c) in x.terms() {
        let y = crate::represent::evaluate(m, at, v, w);
        vector::axpy(f, &mut out, c, &y);
    }
    Ok(out)
}

/// The sign `(-1)^{q(w)}` of the module compatibility
/// `d_0(w·m) = δ_0(w)·m + (-1)^{q(w)} w·d_0 m`.
pub fn module_sign<F: Field>(f: &F, w: &[usize]) -> F::Elem {
    koszul(f, w)
}

/// `i_{l,n}`: the same data with the larger bound `l`.
pub fn restrict_scalars<F: Field>(m: &Multicomplex<F>, l: Bound) -> Result<Multicomplex<F>> {
    if l < m.bound() {
        return Err(Error::BoundMismatch(format!("restriction to l = {l} below n = {}", m.bound())));
    }
    m.with_bound(l)
}

/// `i_{l,n}` on a morphism.
pub fn restrict_morphism<F: Field>(f: &Morphism<F>, l: Bound) -> Result<Morphism<F>> {
    let s = Arc::new(restrict_scalars(f.source(), l)?);
    let t = Arc::new(restrict_scalars(f.target(), l)?);
    f.retarget(s, t)
}

/// `p_{l,n}(M) = M / I_n M`: the quotient by the smallest subcomplex
/// containing every `d_k m` with `k >= n`, with projection `M → i p M`.
pub fn extend_scalars<F: Field>(m: &Arc<Multicomplex<F>>, n: Bound) -> Result<(Arc<Multicomplex<F>>, Morphism<F>)> {
    if n > m.bound() {
        return Err(Error::BoundMismatch(format!("extension to n = {n} above l = {}", m.bound())));
    }
    let mut sub = Subcomplex::zero(m.field());
    if let Bound::Finite(n) = n {
        for k in n..m.num_maps() {
            for b in m.support().collect::<Vec<_>>() {
                let cols = m.d_block(k, b).columns();
                sub.add_vectors(m, b.d(k), cols);
            }
        }
    }
    sub.saturate(m);
    let (q, proj) = quotient(m, &sub)?;
    Ok((Arc::new(q.with_bound(n)?), proj))
}

/// `t(M) = M / Sat(M_{>0})`, supported in `p <= 0`, with projection.
pub fn truncate_left<F: Field>(m: &Arc<Multicomplex<F>>) -> Result<(Arc<Multicomplex<F>>, Morphism<F>)> {
    let f = m.field();
    let mut sub = Subcomplex::zero(f);
    for (b, d) in m.module().iter() {
        if b.p > 0 {
            sub.set(b, Subspace::full(f, d));
        }
    }
    sub.saturate(m);
    quotient(m, &sub)
}

/// `t'(A)`: `A^{p,q}` for `q > 0`, `A^{p,0} / d_0 A^{p,-1}`, and `0` below.
pub fn truncate_upper<F: Field>(a: &Arc<Multicomplex<F>>) -> Result<(Arc<Multicomplex<F>>, Morphism<F>)> {
    let f = a.field();
    let mut sub = Subcomplex::zero(f);
    for (b, d) in a.module().iter() {
        if b.q < 0 {
            sub.set(b, Subspace::full(f, d));
        }
        if b.q == -1 {
            let cols = a.d_block(0, b).columns();
            sub.add_vectors(a, b.d(0), cols);
        }
    }
    if !sub.is_closed(a) {
        return Err(Error::IllDefined("t' kernel is not a subcomplex".into()));
    }
    quotient(a, &sub)
}
