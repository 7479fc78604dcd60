//! Helpers on plain coefficient vectors.

use crate::field::Field;

pub fn zeros<F: Field>(f: &F, n: usize) -> Vec<F::Elem> {
    vec![f.zero(); n]
}

pub fn unit<F: Field>(f: &F, n: usize, k: usize) -> Vec<F::Elem> {
    let mut v = zeros(f, n);
    v[k] = f.one();
    v
}

pub fn is_zero<F: Field>(f: &F, v: &[F::Elem]) -> bool {
    v.iter().all(|x| f.is_zero(x))
}

pub fn add<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.add(x, y)).collect()
}

pub fn sub<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().zip(b).map(|(x, y)| f.sub(x, y)).collect()
}

pub fn scale<F: Field>(f: &F, c: &F::Elem, a: &[F::Elem]) -> Vec<F::Elem> {
    a.iter().map(|x| f.mul(c, x)).collect()
}

/// `acc += c * a`.
pub fn axpy<F: Field>(f: &F, acc: &mut [F::Elem], c: &F::Elem, a: &[F::Elem]) {
    if f.is_zero(c) {
        return;
    }
    for (x, y) in acc.iter_mut().zip(a) {
        if !f.is_zero(y) {
            *x = f.add(x, &f.mul(c, y));
        }
    }
}

pub fn dot<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> F::Elem {
    let mut acc = f.zero();
    for (x, y) in a.iter().zip(b) {
        if !f.is_zero(x) && !f.is_zero(y) {
            acc = f.add(&acc, &f.mul(x, y));
        }
    }
    acc
}
