mod common;

use std::sync::Arc;

use common::{b, gf, rng, MC};
use multicx::cn::{
    act, all_words, contracting_h, delta0, extend_scalars, module_sign, phi_quotient, restrict_morphism,
    restrict_scalars, s_element, truncate_left, truncate_upper, words_of, CnElement, Word,
};
use multicx::fixtures;
use multicx::hom::hom_dim;
use multicx::random::{random_multicomplex, Shape};
use multicx::represent::{disk, window_for, zw_object};
use multicx::spectral::{page_dims, Method};
use multicx::{Bidegree, BigradedModule, Bound, Exec, Matrix, Multicomplex, PrimeField};

const INF: Bound = Bound::Infinite;

fn w(f: &PrimeField, word: &[usize]) -> CnElement<PrimeField> {
    CnElement::word(f, INF, word.to_vec())
}

/// Words with letters `< n` and weight at most `max`.
fn small_words(n: usize, max: usize) -> Vec<Word> {
    all_words(max).into_iter().filter(|x| x.iter().all(|&i| i < n)).collect()
}

#[test]
fn s_elements() {
    let f = gf(7);
    assert!(s_element(&f, INF, 1).is_zero());
    assert_eq!(s_element(&f, INF, 2), w(&f, &[1, 1]));
    let s3 = w(&f, &[1, 2]).sub(&w(&f, &[2, 1]));
    assert_eq!(s_element(&f, INF, 3), s3);
    let s4 = w(&f, &[1, 3]).sub(&w(&f, &[2, 2])).add(&w(&f, &[3, 1]));
    assert_eq!(s_element(&f, INF, 4), s4);
}

#[test]
fn delta_squares_to_zero() {
    for p in [2, 3, 7] {
        let f = gf(p);
        for word in all_words(8) {
            assert!(delta0(&delta0(&w(&f, &word))).is_zero(), "{word:?}");
        }
    }
}

#[test]
fn h_contracts_off_unit_and_d1() {
    for p in [2, 7] {
        let f = gf(p);
        for word in all_words(8) {
            let x = w(&f, &word);
            let y = delta0(&contracting_h(&x)).add(&contracting_h(&delta0(&x)));
            if word.is_empty() || word == [1] {
                assert!(y.is_zero(), "{word:?}");
            } else {
                assert_eq!(y, x, "{word:?}");
            }
        }
    }
    let f = gf(7);
    assert_eq!(contracting_h(&w(&f, &[1, 2])), CnElement::letter(&f, INF, 3));
    assert!(contracting_h(&w(&f, &[2, 1])).is_zero());
    assert!(contracting_h(&CnElement::one(&f, INF)).is_zero());
}

fn in_ideal(x: &CnElement<PrimeField>, n: usize) -> bool {
    phi_quotient(x, Bound::Finite(n)).unwrap().is_zero()
}

#[test]
fn h_preserves_the_ideal_case_by_case() {
    let f = gf(7);
    for n in [3usize, 4] {
        for k in n..n + 3 {
            let dk = CnElement::letter(&f, INF, k);
            let sk = s_element(&f, INF, k);
            let d1 = CnElement::letter(&f, INF, 1);
            for c in small_words(n, 3) {
                let c = w(&f, &c);
                let dkc = dk.mul(&c);
                let skc = sk.mul(&c);
                assert!(in_ideal(&dkc, n) && in_ideal(&skc, n));
                assert!(contracting_h(&dkc).is_zero());
                assert_eq!(contracting_h(&skc), dkc);
                let dk1c = CnElement::letter(&f, INF, k + 1).mul(&c);
                assert_eq!(contracting_h(&d1.mul(&dkc)), dk1c);
                let got = contracting_h(&d1.mul(&skc));
                let want = d1.mul(&dkc).sub(&s_element(&f, INF, k + 1).mul(&c));
                assert_eq!(got, want);
                // the printed variant with d_1 d_{k+1} is not even homogeneous
                let printed = d1.mul(&dk1c).sub(&s_element(&f, INF, k + 1).mul(&c));
                assert_ne!(got, printed);
                for x in [&dkc, &skc, &d1.mul(&dkc), &d1.mul(&skc)] {
                    assert!(in_ideal(&contracting_h(x), n));
                }
            }
        }
    }
}

#[test]
fn h_maps_ideal_component_into_ideal() {
    // every word containing a large letter, and u S_k v, stays in I_n
    let f = gf(3);
    for n in [3usize, 4] {
        for word in all_words(7) {
            let x = w(&f, &word);
            if in_ideal(&x, n) {
                assert!(in_ideal(&contracting_h(&x), n), "n = {n}, {word:?}");
            }
        }
        for k in n..=6 {
            for u in small_words(n, 2) {
                for v in small_words(n, 2) {
                    let x = w(&f, &u).mul(&s_element(&f, INF, k)).mul(&w(&f, &v));
                    assert!(in_ideal(&x, n));
                    assert!(in_ideal(&contracting_h(&x), n), "n = {n}, k = {k}, {u:?} S {v:?}");
                }
            }
        }
    }
}

#[test]
fn phi_examples_and_commutes_with_delta() {
    let f = gf(7);
    assert!(phi_quotient(&w(&f, &[1, 1]), Bound::Finite(2)).unwrap().is_zero());
    for n in 2..6 {
        assert!(phi_quotient(&CnElement::letter(&f, INF, n), Bound::Finite(n)).unwrap().is_zero());
    }
    assert!(phi_quotient(&CnElement::letter(&f, Bound::Finite(3), 2), Bound::Finite(4)).is_err());
    for n in [2usize, 3, 4, 5] {
        let bn = Bound::Finite(n);
        for word in all_words(6) {
            let x = w(&f, &word);
            let lhs = delta0(&phi_quotient(&x, bn).unwrap());
            let rhs = phi_quotient(&delta0(&x), bn).unwrap();
            assert_eq!(lhs, rhs, "n = {n}, {word:?}");
        }
    }
}

#[test]
fn reduction_is_idempotent_and_multiplicative() {
    let f = gf(3);
    for n in [3usize, 4] {
        let bn = Bound::Finite(n);
        let words = all_words(5);
        for u in &words {
            let x = CnElement::word(&f, bn, u.clone());
            assert_eq!(phi_quotient(&x.lift(), bn).unwrap(), x);
            for v in words.iter().filter(|v| v.iter().sum::<usize>() + u.iter().sum::<usize>() <= 6) {
                let y = CnElement::word(&f, bn, v.clone());
                let prod = phi_quotient(&w(&f, u).mul(&w(&f, v)), bn).unwrap();
                assert_eq!(x.mul(&y), prod);
            }
        }
    }
}

#[test]
fn module_structure_is_calibrated() {
    // d_0(w·m) = δ_0(w)·m + (-1)^{q(w)} w·d_0(m) on random multicomplexes
    let mut r = rng(5);
    for p in [2, 3, 7] {
        let f = gf(p);
        for n in common::CORPUS_BOUNDS {
            let a = random_multicomplex(&f, &Shape::new(n), &mut r);
            for word in all_words(4).into_iter().filter(|x| !x.is_empty()) {
                let x = CnElement::word(&f, n, word.clone());
                if x.is_zero() {
                    continue;
                }
                let dx = delta0(&w(&f, &word));
                for at in a.support() {
                    let d = a.dim(at);
                    for k in 0..d {
                        let mut v = vec![0u64; d];
                        v[k] = 1;
                        let wm = act(&w(&f, &word), &a, at, &v).unwrap();
                        let shift = multicx::cn::word_bidegree(&word);
                        let lhs = a.apply_d(0, at + shift, &wm);
                        let mut rhs = if dx.is_zero() { vec![0; lhs.len()] } else { act(&dx, &a, at, &v).unwrap() };
                        let d0v = a.apply_d(0, at, &v);
                        let t = act(&w(&f, &word), &a, at.d(0), &d0v).unwrap();
                        let s = module_sign(&f, &word);
                        for (x, y) in rhs.iter_mut().zip(t) {
                            *x = (*x + s * y) % p;
                        }
                        assert_eq!(lhs, rhs, "{n}, {word:?} at {at}");
                    }
                }
            }
        }
    }
}

#[test]
fn word_enumeration_counts() {
    // compositions of w into len parts
    fn binom(n: usize, k: usize) -> usize {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }
    for wt in 1..9 {
        for len in 1..=wt {
            assert_eq!(words_of(wt, len, wt).len(), binom(wt - 1, len - 1));
        }
    }
}

fn same_dims(x: &MC, y: &MC) -> bool {
    x.module() == y.module()
}

#[test]
fn extension_of_witness_objects_to_bicomplexes() {
    let f = gf(2);
    for (p, q) in [(0, 0), (1, -2)] {
        let at = b(p, q);
        for n in [Bound::Finite(3), Bound::Finite(4), INF] {
            for s in 0..=3usize {
                let pmin = window_for(at, s);
                let big = zw_object(&f, n, s, at, pmin).unwrap();
                let (ext, proj) = extend_scalars(&big.object, Bound::Finite(2)).unwrap();
                assert!(ext.is_valid() && proj.is_valid());
                let two = zw_object(&f, Bound::Finite(2), s, at, pmin).unwrap();
                assert!(same_dims(&ext, &two.object), "n = {n}, s = {s}");
                for r in 0..=s + 1 {
                    let x = page_dims(&ext, r, Method::Witness, Exec::Sequential).unwrap();
                    let y = page_dims(&two.object, r, Method::Witness, Exec::Sequential).unwrap();
                    for bd in two.object.support().filter(|bd| ext.is_exact_at(*bd, r)) {
                        assert_eq!(x.get(&bd), y.get(&bd), "n = {n}, s = {s}, r = {r} at {bd}");
                    }
                }
            }
        }
    }
}

#[test]
fn extension_of_disks() {
    let f = gf(2);
    let at = b(0, 0);
    let pmin = -5;
    for (l, n) in [(INF, 3usize), (INF, 2), (Bound::Finite(4), 3), (Bound::Finite(4), 2)] {
        let dl = disk(&f, l, at, pmin).unwrap();
        let (ext, _) = extend_scalars(&dl.object, Bound::Finite(n)).unwrap();
        let dn = disk(&f, Bound::Finite(n), at, pmin).unwrap();
        assert!(same_dims(&ext, &dn.object), "{l} -> {n}");
    }
}

#[test]
fn extension_after_restriction_is_identity() {
    let mut r = rng(8);
    let f = gf(7);
    for n in [2usize, 3] {
        let m = Arc::new(random_multicomplex(&f, &Shape::new(Bound::Finite(n)), &mut r));
        for l in [Bound::Finite(n + 1), INF] {
            let i = Arc::new(restrict_scalars(&m, l).unwrap());
            assert!(i.is_valid());
            let (back, proj) = extend_scalars(&i, Bound::Finite(n)).unwrap();
            assert!(proj.is_bijective());
            assert!(same_dims(&back, &m));
            for rr in 0..4 {
                let x = page_dims(&back, rr, Method::Direct, Exec::Sequential).unwrap();
                let y = page_dims(&m, rr, Method::Direct, Exec::Sequential).unwrap();
                assert_eq!(x, y);
            }
        }
    }
    let c = fixtures::corner(&f, Bound::Finite(2), 0, 0);
    assert!(restrict_scalars(&c, INF).unwrap().is_valid());
    assert!(restrict_scalars(&c.with_bound(Bound::Finite(3)).unwrap(), Bound::Finite(2)).is_err());
    let pi = fixtures::corner_projection(&f, Bound::Finite(2), 0, 0);
    assert!(restrict_morphism(&pi, INF).unwrap().is_valid());
}

#[test]
fn scalar_change_adjunction_counts() {
    let f = gf(2);
    let mut r = rng(9);
    let mut pairs = 0;
    for (l, n) in [(INF, 2usize), (INF, 3), (Bound::Finite(4), 2), (Bound::Finite(3), 2)] {
        for _ in 0..6 {
            let mut sm = Shape::new(l);
            sm.width = 4;
            let m = Arc::new(random_multicomplex(&f, &sm, &mut r));
            let nn = Arc::new(random_multicomplex(&f, &Shape::new(Bound::Finite(n)), &mut r));
            let (pm, _) = extend_scalars(&m, Bound::Finite(n)).unwrap();
            let inn = Arc::new(restrict_scalars(&nn, l).unwrap());
            assert_eq!(hom_dim(&pm, &nn).unwrap(), hom_dim(&m, &inn).unwrap());
            pairs += 1;
        }
    }
    assert!(pairs >= 20);
}

#[test]
fn left_truncation_examples() {
    let f = gf(2);
    // already in p <= 0
    let c = Arc::new(fixtures::corner(&f, INF, 0, 3));
    let (t, proj) = truncate_left(&c).unwrap();
    assert!(proj.is_bijective() && same_dims(&t, &c));
    // the disk at (1,0) is generated by its top cell
    let d = disk(&f, INF, b(1, 0), -4).unwrap();
    let (t, _) = truncate_left(&d.object).unwrap();
    assert!(t.is_zero());
    for q in [-1, 0, 2] {
        let c = Arc::new(fixtures::corner(&f, Bound::Finite(2), 1, q));
        let (t, _) = truncate_left(&c).unwrap();
        assert!(t.is_valid());
        assert_eq!(t.module(), &BigradedModule::from_dims([(b(0, q - 1), 1)]));
    }
}

#[test]
fn upper_truncation_examples() {
    let f = gf(7);
    let high = Arc::new(fixtures::corner(&f, Bound::Finite(3), 2, 3));
    let (t, proj) = truncate_upper(&high).unwrap();
    assert!(proj.is_bijective() && same_dims(&t, &high));
    let mut a = Multicomplex::new(&f, Bound::Finite(2), BigradedModule::from_dims([(b(0, -1), 1), (b(0, 0), 1)]));
    a.set_d(0, b(0, -1), Matrix::from_i64(&f, &[&[1]])).unwrap();
    let (t, _) = truncate_upper(&Arc::new(a)).unwrap();
    assert!(t.is_zero());
    for p in [-2, 0, 3] {
        let c = Arc::new(fixtures::corner(&f, Bound::Finite(2), p, 0));
        let (t, _) = truncate_upper(&c).unwrap();
        assert!(t.is_valid());
        assert_eq!(t.module(), &BigradedModule::from_dims([(b(p, 0), 1)]));
    }
}

#[test]
fn truncation_adjunction_counts() {
    let f = gf(2);
    let mut r = rng(10);
    for n in [Bound::Finite(2), Bound::Finite(3), INF] {
        for _ in 0..7 {
            let mut sm = Shape::new(n);
            sm.origin = Bidegree::new(-2, -2);
            let m = Arc::new(random_multicomplex(&f, &sm, &mut r));
            // N in p <= 0
            let left = Arc::new(random_multicomplex(&f, &Shape::new(n), &mut r));
            assert!(left.support().all(|x| x.p <= 0));
            let (t, _) = truncate_left(&m).unwrap();
            assert!(t.is_valid() && t.support().all(|x| x.p <= 0));
            assert_eq!(hom_dim(&t, &left).unwrap(), hom_dim(&m, &left).unwrap());
            // N in q >= 0
            let mut su = Shape::new(n);
            su.origin = Bidegree::new(-4, 0);
            let up = Arc::new(random_multicomplex(&f, &su, &mut r));
            let (t, _) = truncate_upper(&m).unwrap();
            assert!(t.is_valid() && t.support().all(|x| x.q >= 0));
            assert_eq!(hom_dim(&t, &up).unwrap(), hom_dim(&m, &up).unwrap());
        }
    }
}
